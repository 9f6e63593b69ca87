//! Ideals of finite lattices and lattices-with-operators.
//!
//! In a finite lattice every ideal (nonempty, downward closed, join closed)
//! is principal, so enumeration walks principal downsets; the brute-force
//! downset characterization is kept as a test oracle.

use crate::blo::AlgebraRef;
use crate::lattice::{Elem, FiniteLattice};
use thiserror::Error;

/// An ideal, stored as its sorted carrier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal {
    carrier: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error(
        "carrier {carrier:?} is not an operator-closed ideal (operator {op} escapes at {element})"
    )]
    NotBloIdeal {
        carrier: Vec<Elem>,
        op: usize,
        element: Elem,
    },
}

impl Ideal {
    pub fn from_carrier(mut carrier: Vec<Elem>) -> Self {
        carrier.sort_unstable();
        carrier.dedup();
        Ideal { carrier }
    }

    /// `↓g` in `l`.
    pub fn principal(l: &FiniteLattice, g: Elem) -> Self {
        Ideal {
            carrier: l.downset(g),
        }
    }

    pub fn carrier(&self) -> &[Elem] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.carrier.binary_search(&x).is_ok()
    }

    pub fn is_proper(&self, l: &FiniteLattice) -> bool {
        self.carrier.len() < l.size()
    }

    /// Nonempty, downward closed and join closed in `l`.
    pub fn is_lattice_ideal(&self, l: &FiniteLattice) -> bool {
        !self.carrier.is_empty()
            && self.carrier.iter().all(|&x| {
                l.elements().all(|y| !l.leq(y, x) || self.contains(y))
                    && self.carrier.iter().all(|&y| self.contains(l.join(x, y)))
            })
    }

    /// Additionally closed under every operator of `a`.
    pub fn is_blo_ideal<'a>(&self, a: impl Into<AlgebraRef<'a>>) -> bool {
        let a = a.into();
        self.is_lattice_ideal(a.lattice)
            && self
                .carrier
                .iter()
                .all(|&x| a.operators.iter().all(|f| self.contains(f[x])))
    }

    /// Ensure operator closure, reporting the escaping operator otherwise.
    pub fn check_blo_ideal<'a>(&self, a: impl Into<AlgebraRef<'a>>) -> Result<(), IdealError> {
        let a = a.into();
        for &x in &self.carrier {
            for (op, f) in a.operators.iter().enumerate() {
                if !self.contains(f[x]) {
                    return Err(IdealError::NotBloIdeal {
                        carrier: self.carrier.clone(),
                        op,
                        element: x,
                    });
                }
            }
        }
        Ok(())
    }

    /// Proper, and `x ∧ y ∈ I` implies `x ∈ I` or `y ∈ I`.
    pub fn is_prime(&self, l: &FiniteLattice) -> bool {
        self.is_proper(l)
            && l.elements().all(|x| {
                l.elements()
                    .all(|y| !self.contains(l.meet(x, y)) || self.contains(x) || self.contains(y))
            })
    }

    /// Maximal among the proper members of `family`.
    pub fn is_maximal_in(&self, l: &FiniteLattice, family: &[Ideal]) -> bool {
        self.is_proper(l)
            && family.iter().all(|j| {
                !j.is_proper(l)
                    || j == self
                    || !self.carrier.iter().all(|&x| j.contains(x))
                    || j.carrier.len() <= self.carrier.len()
            })
    }
}

/// All ideals of `a` in generator order; operator-closed ones only when
/// `blo_closed` is set. In a finite lattice every ideal is principal, so
/// only operator closure needs checking.
pub fn enumerate_ideals<'a>(a: impl Into<AlgebraRef<'a>>, blo_closed: bool) -> Vec<Ideal> {
    let a = a.into();
    a.lattice
        .elements()
        .map(|g| Ideal::principal(a.lattice, g))
        .filter(|i| {
            !blo_closed
                || i.carrier()
                    .iter()
                    .all(|&x| a.operators.iter().all(|f| i.contains(f[x])))
        })
        .collect()
}

/// Least ideal containing `seed`: downward, join and (optionally) operator
/// closure to a fixpoint.
pub fn ideal_generated<'a>(a: impl Into<AlgebraRef<'a>>, seed: &[Elem], blo_closed: bool) -> Ideal {
    let a = a.into();
    let l = a.lattice;
    let n = l.size();
    let mut member = vec![false; n];
    member[l.bottom()] = true;
    for &s in seed {
        member[s] = true;
    }
    loop {
        let mut changed = false;
        let current: Vec<Elem> = (0..n).filter(|&x| member[x]).collect();
        for &x in &current {
            for y in 0..n {
                if l.leq(y, x) && !member[y] {
                    member[y] = true;
                    changed = true;
                }
            }
            for &y in &current {
                let j = l.join(x, y);
                if !member[j] {
                    member[j] = true;
                    changed = true;
                }
            }
            if blo_closed {
                for f in a.operators {
                    if !member[f[x]] {
                        member[f[x]] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ideal::from_carrier((0..n).filter(|&x| member[x]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blo::fixtures::b4_f;
    use crate::blo::Blo;

    #[test]
    fn two_chain_ideals() {
        let l = FiniteLattice::chain(2);
        let ideals = enumerate_ideals(&l, false);
        assert_eq!(ideals.len(), 2);
        assert_eq!(ideals[0].carrier(), &[0]);
        assert_eq!(ideals[1].carrier(), &[0, 1]);
    }

    #[test]
    fn c3_ideals_and_primes() {
        let l = FiniteLattice::chain(3);
        let ideals = enumerate_ideals(&l, false);
        assert_eq!(ideals.len(), 3);
        let primes: Vec<_> = ideals.iter().filter(|i| i.is_prime(&l)).collect();
        assert_eq!(primes.len(), 2);
        assert_eq!(primes[0].carrier(), &[0]);
        assert_eq!(primes[1].carrier(), &[0, 1]);
    }

    #[test]
    fn b4_prime_ideals() {
        let l = FiniteLattice::boolean(2);
        let ideals = enumerate_ideals(&l, false);
        let primes: Vec<_> = ideals.iter().filter(|i| i.is_prime(&l)).collect();
        // {0} is not prime: a ∧ b = 0 with neither inside
        assert_eq!(primes.len(), 2);
        assert_eq!(primes[0].carrier(), &[0, 1]);
        assert_eq!(primes[1].carrier(), &[0, 2]);
    }

    #[test]
    fn ideals_match_brute_force_downset_oracle() {
        // oracle: all nonempty downward- and join-closed subsets
        for l in [
            FiniteLattice::chain(4),
            FiniteLattice::boolean(2),
            FiniteLattice::boolean(3),
        ] {
            let n = l.size();
            let mut oracle = Vec::new();
            for mask in 1u64..(1 << n) {
                let has = |x: usize| mask & (1 << x) != 0;
                let down = (0..n).all(|x| !has(x) || (0..n).all(|y| !l.leq(y, x) || has(y)));
                let join = (0..n).all(|x| !has(x) || (0..n).all(|y| !has(y) || has(l.join(x, y))));
                if down && join {
                    oracle.push(Ideal::from_carrier((0..n).filter(|&x| has(x)).collect()));
                }
            }
            oracle.sort();
            let mut got = enumerate_ideals(&l, false);
            got.sort();
            assert_eq!(got, oracle);
        }
    }

    #[test]
    fn generated_ideal_examples() {
        let b4 = FiniteLattice::boolean(2);
        let b4_plain = Blo::from_lattice(b4.clone()).unwrap();
        assert_eq!(ideal_generated(&b4_plain, &[0], true).carrier(), &[0]);
        assert_eq!(ideal_generated(&b4_plain, &[1], true).carrier(), &[0, 1]);
        // with f(a)=1, the operator closure forces the whole algebra
        let a = b4_f();
        assert_eq!(ideal_generated(&a, &[1], true).carrier(), &[0, 1, 2, 3]);
        assert_eq!(ideal_generated(&a, &[1], false).carrier(), &[0, 1]);
    }

    #[test]
    fn blo_ideal_check_reports_escaping_operator() {
        let a = b4_f();
        let i = Ideal::from_carrier(vec![0, 1]); // f(a)=1 escapes
        assert!(!i.is_blo_ideal(&a));
        match i.check_blo_ideal(&a) {
            Err(IdealError::NotBloIdeal {
                op: 0, element: 1, ..
            }) => {}
            other => panic!("expected NotBloIdeal, got {other:?}"),
        }
    }
}
