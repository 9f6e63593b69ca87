//! Test corpora: downset lattices of small posets (every finite distributive
//! lattice with few join-irreducibles arises this way) and all lattice
//! orders on few points, used by the exhaustive diagnostics.

use crate::lattice::FiniteLattice;
use crate::poset::{posets_up_to_iso, PosetError};
use thiserror::Error;

/// Largest poset size the corpus generator accepts.
pub const MAX_CORPUS_POSET_SIZE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("corpus poset size {got} exceeds the budgeted maximum {max}")]
    BudgetExceeded { got: usize, max: usize },
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Downset lattices of all posets on exactly `poset_size` points, one per
/// isomorphism class of posets, deduplicated up to lattice isomorphism and
/// sorted by (size, order table). By Birkhoff's representation the
/// deduplication removes nothing; the test suite asserts as much.
pub fn generate_corpus(poset_size: usize) -> Result<Vec<FiniteLattice>, CorpusError> {
    if poset_size > MAX_CORPUS_POSET_SIZE {
        return Err(CorpusError::BudgetExceeded {
            got: poset_size,
            max: MAX_CORPUS_POSET_SIZE,
        });
    }
    let mut lattices: Vec<FiniteLattice> = Vec::new();
    for p in posets_up_to_iso(poset_size)? {
        let l = p.downset_lattice();
        if !lattices.iter().any(|m| m.is_isomorphic_to(&l)) {
            lattices.push(l);
        }
    }
    lattices.sort_by(|a, b| (a.size(), a.leq_table()).cmp(&(b.size(), b.leq_table())));
    Ok(lattices)
}

/// Union of `generate_corpus(1..=max)`, deduplicated.
pub fn corpus_up_to(max: usize) -> Result<Vec<FiniteLattice>, CorpusError> {
    let mut out: Vec<FiniteLattice> = Vec::new();
    for n in 1..=max {
        for l in generate_corpus(n)? {
            if !out.iter().any(|m| m.is_isomorphic_to(&l)) {
                out.push(l);
            }
        }
    }
    Ok(out)
}

/// All lattices with exactly `n` elements, one per isomorphism class:
/// the posets on `n` points whose order happens to be a lattice order.
/// Includes non-distributive lattices (M3 appears at n = 5).
pub fn lattice_orders_of_size(n: usize) -> Vec<FiniteLattice> {
    let posets = match posets_up_to_iso(n) {
        Ok(p) => p,
        Err(_) => return Vec::new(),
    };
    let mut out: Vec<FiniteLattice> = posets
        .into_iter()
        .filter_map(|p| FiniteLattice::from_leq(p.leq_table().to_vec()).ok())
        .collect();
    out.sort_by(|a, b| a.leq_table().cmp(b.leq_table()));
    out
}

/// All lattices with at most `n` elements, one per isomorphism class.
pub fn lattice_orders_up_to(n: usize) -> Vec<FiniteLattice> {
    (1..=n).flat_map(lattice_orders_of_size).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes_match_poset_counts() {
        // distinct posets give non-isomorphic downset lattices
        assert_eq!(generate_corpus(1).unwrap().len(), 1);
        assert_eq!(generate_corpus(2).unwrap().len(), 2);
        assert_eq!(generate_corpus(3).unwrap().len(), 5);
        assert_eq!(generate_corpus(4).unwrap().len(), 16);
    }

    #[test]
    fn corpus_size_one_is_the_two_chain() {
        let c = generate_corpus(1).unwrap();
        assert!(c[0].is_isomorphic_to(&FiniteLattice::chain(2)));
    }

    #[test]
    fn corpus_size_two() {
        let c = generate_corpus(2).unwrap();
        assert!(c[0].is_isomorphic_to(&FiniteLattice::chain(3)));
        assert!(c[1].is_isomorphic_to(&FiniteLattice::boolean(2)));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            generate_corpus(7),
            Err(CorpusError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn lattice_order_counts() {
        // lattices with exactly n elements, up to isomorphism
        let counts: Vec<usize> = (1..=6).map(|n| lattice_orders_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 15]);
    }

    #[test]
    fn m3_and_n5_show_up() {
        let five = lattice_orders_of_size(5);
        assert!(five
            .iter()
            .any(|l| l.is_isomorphic_to(&FiniteLattice::diamond_m3())));
        assert!(five
            .iter()
            .any(|l| l.is_isomorphic_to(&FiniteLattice::pentagon_n5())));
    }

    #[test]
    fn every_corpus_member_is_distributive() {
        for l in corpus_up_to(4).unwrap() {
            assert!(l.is_distributive());
        }
    }
}
