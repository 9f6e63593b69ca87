//! Finite MV-algebras: Łukasiewicz chains, Boolean algebras viewed as
//! MV-algebras, exhaustive axiom validation, and filter enumeration.
//!
//! All eight operation tables are stored explicitly so that diagnostics can
//! run on tampered or hand-written tables; the constructors derive the
//! strong operations from `⊕` and `¬` in the standard way
//! (`a⊗b = ¬(¬a⊕¬b)`, `a→b = ¬a⊕b`).

use crate::lattice::{Elem, FiniteLattice};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvAxiom {
    OplusCommutative,
    OplusAssociative,
    OplusUnit,
    DoubleNegation,
    TopAbsorbing,
    Comparability,
    OtimesDefinition,
    ImpliesDefinition,
    JoinDefinition,
    MeetDefinition,
    Residuation,
    LatticeReduct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvAxiomFailure {
    pub axiom: MvAxiom,
    pub witness: Vec<Elem>,
}

/// Report-style validation outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvReport {
    pub failures: Vec<MvAxiomFailure>,
}

impl MvReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MvError {
    #[error("table sizes are inconsistent")]
    BadTables,
    #[error("axiom {axiom:?} fails at {witness:?}")]
    AxiomFailure { axiom: MvAxiom, witness: Vec<Elem> },
    #[error("lattice is not Boolean (element {0} has no complement)")]
    NotBoolean(Elem),
}

/// Raw operation tables for an MV-algebra of a given size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvTables {
    pub oplus: Vec<Vec<Elem>>,
    pub neg: Vec<Elem>,
    pub otimes: Vec<Vec<Elem>>,
    pub implies: Vec<Vec<Elem>>,
    pub meet: Vec<Vec<Elem>>,
    pub join: Vec<Vec<Elem>>,
    pub zero: Elem,
    pub one: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvAlgebra {
    size: usize,
    tables: MvTables,
    labels: Option<Vec<String>>,
}

impl MvAlgebra {
    /// Wrap raw tables without validation; pair with [`MvAlgebra::validate`].
    pub fn from_tables(tables: MvTables, labels: Option<Vec<String>>) -> Result<Self, MvError> {
        let n = tables.neg.len();
        let square = |t: &Vec<Vec<Elem>>| t.len() == n && t.iter().all(|r| r.len() == n);
        if n == 0
            || !square(&tables.oplus)
            || !square(&tables.otimes)
            || !square(&tables.implies)
            || !square(&tables.meet)
            || !square(&tables.join)
            || tables.zero >= n
            || tables.one >= n
        {
            return Err(MvError::BadTables);
        }
        Ok(MvAlgebra {
            size: n,
            tables,
            labels,
        })
    }

    /// Derive the full table set from `⊕` and `¬`, then validate.
    pub fn derived_from(oplus: Vec<Vec<Elem>>, neg: Vec<Elem>) -> Result<Self, MvError> {
        let n = neg.len();
        if n == 0 || oplus.len() != n || oplus.iter().any(|r| r.len() != n) {
            return Err(MvError::BadTables);
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|a| oplus[a][z] == a && oplus[z][a] == a))
            .ok_or(MvError::BadTables)?;
        let one = neg[zero];
        let otimes: Vec<Vec<Elem>> = (0..n)
            .map(|a| (0..n).map(|b| neg[oplus[neg[a]][neg[b]]]).collect())
            .collect();
        let implies: Vec<Vec<Elem>> = (0..n)
            .map(|a| (0..n).map(|b| oplus[neg[a]][b]).collect())
            .collect();
        let join: Vec<Vec<Elem>> = (0..n)
            .map(|a| (0..n).map(|b| oplus[neg[oplus[neg[a]][b]]][b]).collect())
            .collect();
        let meet: Vec<Vec<Elem>> = (0..n)
            .map(|a| (0..n).map(|b| neg[join[neg[a]][neg[b]]]).collect())
            .collect();
        let alg = MvAlgebra {
            size: n,
            tables: MvTables {
                oplus,
                neg,
                otimes,
                implies,
                meet,
                join,
                zero,
                one,
            },
            labels: None,
        };
        let report = alg.validate();
        if let Some(f) = report.failures.into_iter().next() {
            return Err(MvError::AxiomFailure {
                axiom: f.axiom,
                witness: f.witness,
            });
        }
        Ok(alg)
    }

    /// The Łukasiewicz chain with carrier `{0, 1/n, …, 1}`; element `i`
    /// stands for `i/n`.
    pub fn lukasiewicz(n: usize) -> MvAlgebra {
        assert!(n >= 1);
        let size = n + 1;
        let oplus = (0..size)
            .map(|a| (0..size).map(|b| (a + b).min(n)).collect())
            .collect();
        let neg = (0..size).map(|a| n - a).collect();
        let labels = (0..size).map(|i| format!("{i}/{n}")).collect();
        let mut alg =
            MvAlgebra::derived_from(oplus, neg).expect("Łukasiewicz chain is an MV-algebra");
        alg.labels = Some(labels);
        alg
    }

    /// A Boolean lattice as an MV-algebra: `⊕ = ∨` and `¬` the complement.
    /// Then `⊗` coincides with `∧`.
    pub fn from_boolean(b: &FiniteLattice) -> Result<MvAlgebra, MvError> {
        if !b.is_boolean() {
            let witness = b
                .elements()
                .find(|&a| b.complement(a).is_none())
                .unwrap_or(0);
            return Err(MvError::NotBoolean(witness));
        }
        let n = b.size();
        let oplus = (0..n)
            .map(|a| (0..n).map(|c| b.join(a, c)).collect())
            .collect();
        let neg = (0..n).map(|a| b.complement(a).expect("Boolean")).collect();
        MvAlgebra::derived_from(oplus, neg)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size
    }

    pub fn tables(&self) -> &MvTables {
        &self.tables
    }

    pub fn label(&self, a: Elem) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn zero(&self) -> Elem {
        self.tables.zero
    }

    pub fn one(&self) -> Elem {
        self.tables.one
    }

    pub fn oplus(&self, a: Elem, b: Elem) -> Elem {
        self.tables.oplus[a][b]
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.tables.neg[a]
    }

    pub fn otimes(&self, a: Elem, b: Elem) -> Elem {
        self.tables.otimes[a][b]
    }

    pub fn implies(&self, a: Elem, b: Elem) -> Elem {
        self.tables.implies[a][b]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.tables.meet[a][b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.tables.join[a][b]
    }

    /// Order derived from the meet table.
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.meet(a, b) == a
    }

    pub fn sup<I: IntoIterator<Item = Elem>>(&self, xs: I) -> Elem {
        xs.into_iter().fold(self.zero(), |acc, x| self.join(acc, x))
    }

    pub fn inf<I: IntoIterator<Item = Elem>>(&self, xs: I) -> Elem {
        xs.into_iter().fold(self.one(), |acc, x| self.meet(acc, x))
    }

    /// Exhaustive check of the MV axioms, the defining equations of the
    /// derived operations, residuation, and the lattice reduct.
    pub fn validate(&self) -> MvReport {
        let n = self.size;
        let t = &self.tables;
        let mut failures = Vec::new();
        let mut fail =
            |axiom: MvAxiom, witness: Vec<Elem>| failures.push(MvAxiomFailure { axiom, witness });

        for a in 0..n {
            if t.oplus[a][t.zero] != a {
                fail(MvAxiom::OplusUnit, vec![a]);
            }
            if t.neg[t.neg[a]] != a {
                fail(MvAxiom::DoubleNegation, vec![a]);
            }
            if t.oplus[t.one][a] != t.one {
                fail(MvAxiom::TopAbsorbing, vec![a]);
            }
            for b in 0..n {
                if t.oplus[a][b] != t.oplus[b][a] {
                    fail(MvAxiom::OplusCommutative, vec![a, b]);
                }
                let lhs = t.oplus[t.neg[t.oplus[t.neg[a]][b]]][b];
                let rhs = t.oplus[t.neg[t.oplus[t.neg[b]][a]]][a];
                if lhs != rhs {
                    fail(MvAxiom::Comparability, vec![a, b]);
                }
                if t.otimes[a][b] != t.neg[t.oplus[t.neg[a]][t.neg[b]]] {
                    fail(MvAxiom::OtimesDefinition, vec![a, b]);
                }
                if t.implies[a][b] != t.oplus[t.neg[a]][b] {
                    fail(MvAxiom::ImpliesDefinition, vec![a, b]);
                }
                if t.join[a][b] != t.oplus[t.neg[t.oplus[t.neg[a]][b]]][b] {
                    fail(MvAxiom::JoinDefinition, vec![a, b]);
                }
                if t.meet[a][b] != t.neg[t.join[t.neg[a]][t.neg[b]]] {
                    fail(MvAxiom::MeetDefinition, vec![a, b]);
                }
                for c in 0..n {
                    if t.oplus[t.oplus[a][b]][c] != t.oplus[a][t.oplus[b][c]] {
                        fail(MvAxiom::OplusAssociative, vec![a, b, c]);
                    }
                    // a⊗b ≤ c ⟺ a ≤ b→c
                    let left = self.leq(t.otimes[a][b], c);
                    let right = self.leq(a, t.implies[b][c]);
                    if left != right {
                        fail(MvAxiom::Residuation, vec![a, b, c]);
                    }
                }
            }
        }
        // lattice reduct: the derived order must be a bounded distributive
        // lattice whose meets/joins agree with the tables
        let leq_table: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| self.leq(a, b)).collect())
            .collect();
        match FiniteLattice::from_leq_limited(leq_table, None, n.max(64)) {
            Ok(l) => {
                let agrees = (0..n).all(|a| {
                    (0..n).all(|b| l.meet(a, b) == t.meet[a][b] && l.join(a, b) == t.join[a][b])
                });
                if !agrees || !l.is_distributive() || l.bottom() != t.zero || l.top() != t.one {
                    failures.push(MvAxiomFailure {
                        axiom: MvAxiom::LatticeReduct,
                        witness: vec![],
                    });
                }
            }
            Err(_) => failures.push(MvAxiomFailure {
                axiom: MvAxiom::LatticeReduct,
                witness: vec![],
            }),
        }
        MvReport { failures }
    }

    /// The lattice reduct as a [`FiniteLattice`].
    pub fn lattice_reduct(&self) -> FiniteLattice {
        let n = self.size;
        let leq_table: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| self.leq(a, b)).collect())
            .collect();
        FiniteLattice::from_leq_limited(leq_table, None, n.max(64))
            .expect("validated MV-algebra has a lattice reduct")
    }
}

/// A filter: contains 1, upward closed, closed under `⊗`. Ultrafilters are
/// the maximal proper ones; on a finite algebra genericity is vacuous and
/// enumeration replaces any existence argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvFilter {
    carrier: Vec<Elem>,
    pub is_ultrafilter: bool,
}

impl MvFilter {
    pub fn carrier(&self) -> &[Elem] {
        &self.carrier
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.carrier.binary_search(&a).is_ok()
    }

    pub fn is_proper(&self, alg: &MvAlgebra) -> bool {
        self.carrier.len() < alg.size()
    }
}

/// All filters in mask order, with ultrafilter flags.
pub fn enumerate_filters(alg: &MvAlgebra) -> Vec<MvFilter> {
    let n = alg.size();
    assert!(n <= 20, "filter enumeration is exponential in the carrier");
    let mut carriers: Vec<Vec<Elem>> = Vec::new();
    for mask in 0u64..(1 << n) {
        let has = |x: Elem| mask & (1 << x) != 0;
        if !has(alg.one()) {
            continue;
        }
        let up = (0..n).all(|a| !has(a) || (0..n).all(|b| !alg.leq(a, b) || has(b)));
        let closed = (0..n).all(|a| !has(a) || (0..n).all(|b| !has(b) || has(alg.otimes(a, b))));
        if up && closed {
            carriers.push((0..n).filter(|&x| has(x)).collect());
        }
    }
    let filters: Vec<MvFilter> = carriers
        .iter()
        .map(|c| {
            let proper = c.len() < n;
            let maximal = proper
                && carriers.iter().all(|d| {
                    d.len() >= n || d == c || !c.iter().all(|x| d.contains(x)) || d.len() <= c.len()
                });
            MvFilter {
                carrier: c.clone(),
                is_ultrafilter: maximal,
            }
        })
        .collect();
    filters
}
