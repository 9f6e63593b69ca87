//! Bounded distributive lattices with operators.
//!
//! An operator is a unary map that preserves order and joins, is idempotent,
//! fixes 0 and 1, and respects the dimension-set condition for meets:
//! `Δ(x∧y) ⊆ Δx ∪ Δy` where `Δx = {i : f_i(x) ≠ x}`. The join-side condition
//! follows from join preservation and is asserted as a sanity check.

use crate::lattice::{Elem, FiniteLattice, LatticeError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorAxiom {
    FixesBottom,
    FixesTop,
    Monotone,
    JoinPreserving,
    Idempotent,
    MeetDimension,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BloError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("underlying lattice is not distributive (witness {witness:?})")]
    NotDistributive { witness: (Elem, Elem, Elem) },
    #[error("operator {op} table has length {len}, expected {size}")]
    BadTable { op: usize, len: usize, size: usize },
    #[error("operator {op} value {value} out of range for size {size}")]
    ValueOutOfRange {
        op: usize,
        value: usize,
        size: usize,
    },
    #[error("operator {op} violates {axiom:?} at {witness:?}")]
    OperatorAxiomViolation {
        op: usize,
        axiom: OperatorAxiom,
        witness: Vec<Elem>,
    },
}

/// A bounded distributive lattice with a (possibly empty) family of operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blo {
    lattice: FiniteLattice,
    operators: Vec<Vec<Elem>>,
}

/// Borrowed view of "a lattice plus operator tables", letting the ideal,
/// congruence and homomorphism machinery run on plain lattices (including
/// non-distributive ones) as well as validated algebras.
#[derive(Debug, Clone, Copy)]
pub struct AlgebraRef<'a> {
    pub lattice: &'a FiniteLattice,
    pub operators: &'a [Vec<Elem>],
}

impl<'a> From<&'a Blo> for AlgebraRef<'a> {
    fn from(a: &'a Blo) -> Self {
        AlgebraRef {
            lattice: &a.lattice,
            operators: &a.operators,
        }
    }
}

impl<'a> From<&'a FiniteLattice> for AlgebraRef<'a> {
    fn from(l: &'a FiniteLattice) -> Self {
        AlgebraRef {
            lattice: l,
            operators: &[],
        }
    }
}

impl<'a> AlgebraRef<'a> {
    pub fn size(&self) -> usize {
        self.lattice.size()
    }
}

/// A subalgebra presented by its carrier inside a host, with the inclusion map.
#[derive(Debug, Clone)]
pub struct Sublattice {
    pub lattice: FiniteLattice,
    /// `embedding[i]` is the host element represented by sub-element `i`.
    pub embedding: Vec<Elem>,
}

/// A neat reduct: the retained operators are reindexed in `retained` order.
#[derive(Debug, Clone)]
pub struct NeatReduct {
    pub algebra: Blo,
    pub embedding: Vec<Elem>,
    pub retained: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("retained operator {op} leaves the carrier at element {element}")]
pub struct NotClosed {
    pub op: usize,
    pub element: Elem,
}

impl Blo {
    /// Validate a lattice-with-operators. The lattice must be distributive.
    pub fn new(lattice: FiniteLattice, operators: Vec<Vec<Elem>>) -> Result<Self, BloError> {
        if let Some(witness) = lattice.distributivity_witness() {
            return Err(BloError::NotDistributive { witness });
        }
        let n = lattice.size();
        for (op, table) in operators.iter().enumerate() {
            if table.len() != n {
                return Err(BloError::BadTable {
                    op,
                    len: table.len(),
                    size: n,
                });
            }
            if let Some(&v) = table.iter().find(|&&v| v >= n) {
                return Err(BloError::ValueOutOfRange {
                    op,
                    value: v,
                    size: n,
                });
            }
            check_operator(&lattice, op, table)?;
        }
        let blo = Blo { lattice, operators };
        // join-side dimension condition is implied; assert it
        debug_assert!(blo.dimension_join_condition_holds());
        Ok(blo)
    }

    /// A plain lattice viewed as an operator-free algebra.
    pub fn from_lattice(lattice: FiniteLattice) -> Result<Self, BloError> {
        Blo::new(lattice, Vec::new())
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        self.lattice.elements()
    }

    pub fn num_operators(&self) -> usize {
        self.operators.len()
    }

    pub fn operators(&self) -> &[Vec<Elem>] {
        &self.operators
    }

    pub fn op(&self, i: usize, x: Elem) -> Elem {
        self.operators[i][x]
    }

    /// `Δx = {i : f_i(x) ≠ x}`.
    pub fn dimension_set(&self, x: Elem) -> Vec<usize> {
        (0..self.operators.len())
            .filter(|&i| self.op(i, x) != x)
            .collect()
    }

    fn dimension_join_condition_holds(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let dx = self.dimension_set(x);
                let dy = self.dimension_set(y);
                self.dimension_set(self.lattice.join(x, y))
                    .iter()
                    .all(|i| dx.contains(i) || dy.contains(i))
            })
        })
    }

    /// Zero-dimensional part: common fixed points of every operator, as a
    /// bounded sublattice with its inclusion into the host.
    pub fn zd(&self) -> Sublattice {
        let carrier: Vec<Elem> = self
            .elements()
            .filter(|&x| (0..self.num_operators()).all(|i| self.op(i, x) == x))
            .collect();
        // closure under meet/join and boundedness are theorems for valid
        // algebras; restrict_to re-verifies and would surface an internal bug
        let lattice = self
            .lattice
            .restrict_to(&carrier)
            .expect("zero-dimensional part must be a bounded sublattice");
        Sublattice {
            lattice,
            embedding: carrier,
        }
    }

    /// Neat reduct: elements fixed by all operators outside `j`, carrying the
    /// `j`-indexed operators. Closure under the retained operators is not a
    /// theorem and is verified.
    pub fn nr(&self, j: &[usize]) -> Result<NeatReduct, NotClosed> {
        let mut retained: Vec<usize> = j.to_vec();
        retained.sort_unstable();
        retained.dedup();
        let carrier: Vec<Elem> = self
            .elements()
            .filter(|&x| {
                (0..self.num_operators()).all(|i| retained.contains(&i) || self.op(i, x) == x)
            })
            .collect();
        let index_of = |x: Elem| carrier.iter().position(|&c| c == x);
        let mut tables = Vec::with_capacity(retained.len());
        for &op in &retained {
            let mut table = Vec::with_capacity(carrier.len());
            for &x in &carrier {
                let y = self.op(op, x);
                match index_of(y) {
                    Some(k) => table.push(k),
                    None => return Err(NotClosed { op, element: x }),
                }
            }
            tables.push(table);
        }
        let lattice = self
            .lattice
            .restrict_to(&carrier)
            .expect("neat reduct carrier must be a bounded sublattice");
        let algebra = Blo::new(lattice, tables)
            .expect("restricted operators satisfy the axioms on the reduct");
        Ok(NeatReduct {
            algebra,
            embedding: carrier,
            retained,
        })
    }
}

/// Componentwise product of algebras with a common operator count.
/// Element `i` decodes mixed-radix with the first factor most significant.
pub fn blo_product(factors: &[&Blo]) -> Result<Blo, BloError> {
    assert!(!factors.is_empty());
    let ops = factors[0].num_operators();
    assert!(
        factors.iter().all(|f| f.num_operators() == ops),
        "mismatched signatures"
    );
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let total: usize = sizes.iter().product();
    let decode = |i: usize| -> Vec<Elem> {
        let mut rest = i;
        let mut tuple = vec![0; sizes.len()];
        for k in (0..sizes.len()).rev() {
            tuple[k] = rest % sizes[k];
            rest /= sizes[k];
        }
        tuple
    };
    let leq = (0..total)
        .map(|i| {
            let ti = decode(i);
            (0..total)
                .map(|j| {
                    let tj = decode(j);
                    ti.iter()
                        .zip(&tj)
                        .zip(factors)
                        .all(|((&a, &b), f)| f.lattice().leq(a, b))
                })
                .collect()
        })
        .collect();
    let lattice =
        FiniteLattice::from_leq_limited(leq, None, total.max(crate::lattice::DEFAULT_MAX_SIZE))?;
    let mut tables = Vec::with_capacity(ops);
    for op in 0..ops {
        let table = (0..total)
            .map(|i| {
                let t = decode(i);
                let image: Vec<Elem> = t.iter().zip(factors).map(|(&a, f)| f.op(op, a)).collect();
                // re-encode
                let mut idx = 0;
                for (k, &v) in image.iter().enumerate() {
                    idx = idx * sizes[k] + v;
                }
                idx
            })
            .collect();
        tables.push(table);
    }
    Blo::new(lattice, tables)
}

fn check_operator(lattice: &FiniteLattice, op: usize, f: &[Elem]) -> Result<(), BloError> {
    let n = lattice.size();
    let fail =
        |axiom, witness: Vec<Elem>| Err(BloError::OperatorAxiomViolation { op, axiom, witness });
    if f[lattice.bottom()] != lattice.bottom() {
        return fail(OperatorAxiom::FixesBottom, vec![lattice.bottom()]);
    }
    if f[lattice.top()] != lattice.top() {
        return fail(OperatorAxiom::FixesTop, vec![lattice.top()]);
    }
    for x in 0..n {
        if f[f[x]] != f[x] {
            return fail(OperatorAxiom::Idempotent, vec![x]);
        }
        for y in 0..n {
            if lattice.leq(x, y) && !lattice.leq(f[x], f[y]) {
                return fail(OperatorAxiom::Monotone, vec![x, y]);
            }
            if f[lattice.join(x, y)] != lattice.join(f[x], f[y]) {
                return fail(OperatorAxiom::JoinPreserving, vec![x, y]);
            }
        }
    }
    // Δ(x∧y) ⊆ Δx ∪ Δy
    for x in 0..n {
        for y in 0..n {
            let m = lattice.meet(x, y);
            if f[m] != m && f[x] == x && f[y] == y {
                return fail(OperatorAxiom::MeetDimension, vec![x, y]);
            }
        }
    }
    Ok(())
}

/// Small algebras used across the test suites and the bundled demos.
pub mod zoo {
    use super::*;

    /// The two-element chain with `n` identity operators; simple.
    pub fn two_chain_with_identities(n: usize) -> Blo {
        let ops = (0..n).map(|_| vec![0, 1]).collect();
        Blo::new(FiniteLattice::chain(2), ops).unwrap()
    }

    /// C3 with two operators (`f(m)=1` and `h(m)=0`) that kill every proper
    /// congruence; simple, with zero-dimensional part `{0, 1}`.
    pub fn c3_simple() -> Blo {
        Blo::new(FiniteLattice::chain(3), vec![vec![0, 2, 2], vec![0, 0, 2]]).unwrap()
    }

    /// B4 with two operators collapsing each atom upward; simple, with
    /// zero-dimensional part `{0, 1}`.
    pub fn b4_simple() -> Blo {
        Blo::new(
            FiniteLattice::boolean(2),
            vec![vec![0, 3, 2, 3], vec![0, 1, 3, 3]],
        )
        .unwrap()
    }
}
