//! Homomorphisms: verification, exhaustive enumeration, and bounded
//! epimorphism diagnostics.

use crate::blo::AlgebraRef;
use crate::budget::{Budget, SearchError};
use crate::congruence;
use crate::corpus;
use crate::lattice::{Elem, FiniteLattice};
use thiserror::Error;

/// A structure-preserving map, stored as its value table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Homomorphism {
    table: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("table length {got} does not match source size {want}")]
    BadLength { got: usize, want: usize },
    #[error("value {value} out of range for target size {size}")]
    OutOfRange { value: usize, size: usize },
    #[error("map does not preserve {operation} at {witness:?}")]
    NotPreserved {
        operation: &'static str,
        witness: (Elem, Elem),
    },
    #[error("source signature has {source_ops} operators but target only {target_ops}")]
    SignatureMismatch {
        source_ops: usize,
        target_ops: usize,
    },
}

impl Homomorphism {
    /// Verify that `table` is a bounded-lattice homomorphism preserving every
    /// operator of the source (the target must carry at least as many).
    pub fn new<'a, 'b>(
        source: impl Into<AlgebraRef<'a>>,
        target: impl Into<AlgebraRef<'b>>,
        table: Vec<Elem>,
    ) -> Result<Self, HomError> {
        let s = source.into();
        let t = target.into();
        if table.len() != s.size() {
            return Err(HomError::BadLength {
                got: table.len(),
                want: s.size(),
            });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= t.size()) {
            return Err(HomError::OutOfRange {
                value: v,
                size: t.size(),
            });
        }
        if s.operators.len() > t.operators.len() {
            return Err(HomError::SignatureMismatch {
                source_ops: s.operators.len(),
                target_ops: t.operators.len(),
            });
        }
        let h = Homomorphism { table };
        h.check(s, t)?;
        Ok(h)
    }

    /// Wrap a table that is a homomorphism by construction.
    pub(crate) fn new_unchecked(table: Vec<Elem>) -> Self {
        Homomorphism { table }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism {
            table: (0..n).collect(),
        }
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x]
    }

    pub fn source_size(&self) -> usize {
        self.table.len()
    }

    /// `other ∘ self` (apply `self` first).
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism {
            table: self.table.iter().map(|&x| other.table[x]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.table.iter().all(|&v| seen.insert(v))
    }

    pub fn is_surjective_onto(&self, target_size: usize) -> bool {
        let mut seen = vec![false; target_size];
        for &v in &self.table {
            seen[v] = true;
        }
        seen.iter().all(|&b| b)
    }

    fn check(&self, s: AlgebraRef, t: AlgebraRef) -> Result<(), HomError> {
        let f = |x: Elem| self.table[x];
        if f(s.lattice.bottom()) != t.lattice.bottom() {
            return Err(HomError::NotPreserved {
                operation: "bottom",
                witness: (s.lattice.bottom(), s.lattice.bottom()),
            });
        }
        if f(s.lattice.top()) != t.lattice.top() {
            return Err(HomError::NotPreserved {
                operation: "top",
                witness: (s.lattice.top(), s.lattice.top()),
            });
        }
        for x in s.lattice.elements() {
            for y in s.lattice.elements() {
                if f(s.lattice.meet(x, y)) != t.lattice.meet(f(x), f(y)) {
                    return Err(HomError::NotPreserved {
                        operation: "meet",
                        witness: (x, y),
                    });
                }
                if f(s.lattice.join(x, y)) != t.lattice.join(f(x), f(y)) {
                    return Err(HomError::NotPreserved {
                        operation: "join",
                        witness: (x, y),
                    });
                }
            }
            for (i, op) in s.operators.iter().enumerate() {
                if f(op[x]) != t.operators[i][f(x)] {
                    return Err(HomError::NotPreserved {
                        operation: "operator",
                        witness: (x, op[x]),
                    });
                }
            }
        }
        Ok(())
    }
}

/// All homomorphisms from `source` to `target`, by backtracking over element
/// assignments in canonical order with meet/join/operator consistency
/// pruning. The result order is lexicographic in the value tables.
pub fn enumerate_homomorphisms<'a, 'b>(
    source: impl Into<AlgebraRef<'a>>,
    target: impl Into<AlgebraRef<'b>>,
    budget: &mut Budget,
) -> Result<Vec<Homomorphism>, SearchError> {
    let s = source.into();
    let t = target.into();
    let n = s.size();
    let mut assignment: Vec<Elem> = vec![usize::MAX; n];
    let mut out = Vec::new();
    search(s, t, &mut assignment, 0, budget, &mut out)?;
    Ok(out)
}

fn consistent(s: AlgebraRef, t: AlgebraRef, asg: &[Elem], upto: usize) -> bool {
    let f = |x: Elem| asg[x];
    let x = upto;
    if x == s.lattice.bottom() && f(x) != t.lattice.bottom() {
        return false;
    }
    if x == s.lattice.top() && f(x) != t.lattice.top() {
        return false;
    }
    for y in 0..=upto {
        let (m, j) = (s.lattice.meet(x, y), s.lattice.join(x, y));
        if m <= upto && asg[m] != t.lattice.meet(f(x), f(y)) {
            return false;
        }
        if j <= upto && asg[j] != t.lattice.join(f(x), f(y)) {
            return false;
        }
        // reverse direction: x itself may be the meet/join of smaller pairs
        for z in 0..=upto {
            if s.lattice.meet(y, z) == x && t.lattice.meet(f(y), f(z)) != f(x) {
                return false;
            }
            if s.lattice.join(y, z) == x && t.lattice.join(f(y), f(z)) != f(x) {
                return false;
            }
        }
    }
    for (i, op) in s.operators.iter().enumerate() {
        if op[x] <= upto && asg[op[x]] != t.operators[i][f(x)] {
            return false;
        }
        for y in 0..=upto {
            if op[y] == x && t.operators[i][f(y)] != f(x) {
                return false;
            }
        }
    }
    true
}

fn search(
    s: AlgebraRef,
    t: AlgebraRef,
    asg: &mut Vec<Elem>,
    next: usize,
    budget: &mut Budget,
    out: &mut Vec<Homomorphism>,
) -> Result<(), SearchError> {
    if next == s.size() {
        out.push(Homomorphism { table: asg.clone() });
        return Ok(());
    }
    for v in 0..t.size() {
        budget.spend(1)?;
        asg[next] = v;
        if consistent(s, t, asg, next) {
            search(s, t, asg, next + 1, budget, out)?;
        }
    }
    asg[next] = usize::MAX;
    Ok(())
}

/// Which candidate algebras a bounded epimorphism search ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraClass {
    /// All bounded lattices.
    Lattices,
    /// Bounded distributive lattices.
    Distributive,
    /// Simple bounded lattices.
    Simple,
}

impl AlgebraClass {
    pub fn admits(&self, l: &FiniteLattice) -> bool {
        match self {
            AlgebraClass::Lattices => true,
            AlgebraClass::Distributive => l.is_distributive(),
            AlgebraClass::Simple => congruence::is_simple(l),
        }
    }
}

/// Outcome of the bounded epimorphism diagnostic. This is explicitly a
/// bounded search, not a decision procedure for the full variety.
#[derive(Debug, Clone)]
pub enum EpiVerdict {
    /// A witness algebra `c` with distinct `f, g : target → c` agreeing on
    /// the image of the map under test.
    NotEpi {
        c: FiniteLattice,
        f: Homomorphism,
        g: Homomorphism,
    },
    NoWitnessUpTo(usize),
}

/// Search all candidate algebras of size at most `k` in `class` for a pair
/// `f ≠ g` with `f ∘ h = g ∘ h`. Candidates carry identity operators when
/// the target has operators, so operator-preservation degenerates to
/// constancy on operator orbits.
pub fn is_epi_upto<'a, 'b>(
    source: impl Into<AlgebraRef<'a>>,
    target: impl Into<AlgebraRef<'b>>,
    h: &Homomorphism,
    k: usize,
    class: AlgebraClass,
    budget: &mut Budget,
) -> Result<EpiVerdict, SearchError> {
    let s = source.into();
    let t = target.into();
    for size in 1..=k {
        for c in corpus::lattice_orders_of_size(size) {
            budget.spend(1)?;
            if !class.admits(&c) {
                continue;
            }
            let id_ops: Vec<Vec<Elem>> = (0..t.operators.len())
                .map(|_| (0..c.size()).collect())
                .collect();
            let cref = AlgebraRef {
                lattice: &c,
                operators: &id_ops,
            };
            let homs = enumerate_homomorphisms(t, cref, budget)?;
            for (i, f) in homs.iter().enumerate() {
                for g in homs.iter().skip(i + 1) {
                    budget.spend(1)?;
                    let agree_on_image = s
                        .lattice
                        .elements()
                        .all(|x| f.apply(h.apply(x)) == g.apply(h.apply(x)));
                    if agree_on_image {
                        return Ok(EpiVerdict::NotEpi {
                            c,
                            f: f.clone(),
                            g: g.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(EpiVerdict::NoWitnessUpTo(k))
}
