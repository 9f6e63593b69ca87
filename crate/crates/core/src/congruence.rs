//! Congruences, quotients and congruence lattices.
//!
//! Congruence generation is a union-find closure under one-variable
//! translations of the fundamental operations (Mal'cev's lemma makes that
//! sufficient). All functions accept plain lattices as well as algebras with
//! operators, since the Grätzer–Schmidt diagnostics run on non-distributive
//! hosts too.

use crate::blo::{AlgebraRef, Blo};
use crate::budget::{Budget, SearchError};
use crate::hom::Homomorphism;
use crate::ideal::Ideal;
use crate::lattice::{Elem, FiniteLattice};
use thiserror::Error;

/// A partition of the carrier compatible with all operations. Blocks are
/// numbered in order of first appearance, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Congruence {
    blocks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("relation is not compatible with {operation} at {witness:?}")]
    NotCompatible {
        operation: &'static str,
        witness: (Elem, Elem, Elem),
    },
    #[error("relation is not an equivalence")]
    NotEquivalence,
}

impl Congruence {
    /// Normalize an element-to-class map into first-appearance numbering.
    pub fn from_classes(classes: &[usize]) -> Self {
        let mut renumber: Vec<Option<usize>> = vec![None; classes.len()];
        let mut blocks = Vec::with_capacity(classes.len());
        let mut next = 0;
        for &c in classes {
            let id = match renumber[c] {
                Some(id) => id,
                None => {
                    renumber[c] = Some(next);
                    next += 1;
                    next - 1
                }
            };
            blocks.push(id);
        }
        Congruence { blocks }
    }

    pub fn identity(n: usize) -> Self {
        Congruence {
            blocks: (0..n).collect(),
        }
    }

    pub fn universal(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    pub fn same(&self, a: Elem, b: Elem) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    pub fn block_of(&self, a: Elem) -> usize {
        self.blocks[a]
    }

    pub fn class_of(&self, a: Elem) -> Vec<Elem> {
        (0..self.blocks.len())
            .filter(|&x| self.same(a, x))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.blocks.len()
    }

    pub fn is_universal(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// The block of the bottom element, as an ideal carrier.
    pub fn zero_class(&self, l: &FiniteLattice) -> Ideal {
        Ideal::from_carrier(self.class_of(l.bottom()))
    }

    /// Every block of `self` is inside a block of `other`.
    pub fn finer_than(&self, other: &Congruence) -> bool {
        let n = self.blocks.len();
        (0..n).all(|a| (0..n).all(|b| !self.same(a, b) || other.same(a, b)))
    }

    /// Intersection of partitions (always a congruence when both are).
    pub fn meet(&self, other: &Congruence) -> Congruence {
        let n = self.blocks.len();
        let mut key_to_id = std::collections::BTreeMap::new();
        let mut classes = Vec::with_capacity(n);
        for x in 0..n {
            let next = key_to_id.len();
            let id = *key_to_id
                .entry((self.blocks[x], other.blocks[x]))
                .or_insert(next);
            classes.push(id);
        }
        Congruence::from_classes(&classes)
    }

    /// Compatibility with meets, joins and every operator of `a`.
    pub fn check_compatible<'a>(
        &self,
        a: impl Into<AlgebraRef<'a>>,
    ) -> Result<(), CongruenceError> {
        let a = a.into();
        let l = a.lattice;
        let n = l.size();
        for x in 0..n {
            for y in 0..n {
                if !self.same(x, y) {
                    continue;
                }
                for z in 0..n {
                    if !self.same(l.meet(x, z), l.meet(y, z)) {
                        return Err(CongruenceError::NotCompatible {
                            operation: "meet",
                            witness: (x, y, z),
                        });
                    }
                    if !self.same(l.join(x, z), l.join(y, z)) {
                        return Err(CongruenceError::NotCompatible {
                            operation: "join",
                            witness: (x, y, z),
                        });
                    }
                }
                for f in a.operators {
                    if !self.same(f[x], f[y]) {
                        return Err(CongruenceError::NotCompatible {
                            operation: "operator",
                            witness: (x, y, f[x]),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_compatible<'a>(&self, a: impl Into<AlgebraRef<'a>>) -> bool {
        self.check_compatible(a).is_ok()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Least congruence of `a` identifying every pair in `pairs`.
pub fn congruence_generated<'a>(
    a: impl Into<AlgebraRef<'a>>,
    pairs: &[(Elem, Elem)],
) -> Congruence {
    let a = a.into();
    let l = a.lattice;
    let n = l.size();
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(Elem, Elem)> = pairs.to_vec();
    while let Some((x, y)) = work.pop() {
        if !uf.union(x, y) {
            continue;
        }
        for z in 0..n {
            work.push((l.meet(x, z), l.meet(y, z)));
            work.push((l.join(x, z), l.join(y, z)));
        }
        for f in a.operators {
            work.push((f[x], f[y]));
        }
    }
    let classes: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    Congruence::from_classes(&classes)
}

/// Congruence generated by an ideal taken as the zero class.
pub fn congruence_from_ideal<'a>(a: impl Into<AlgebraRef<'a>>, ideal: &Ideal) -> Congruence {
    let a = a.into();
    let bottom = a.lattice.bottom();
    let pairs: Vec<(Elem, Elem)> = ideal.carrier().iter().map(|&x| (x, bottom)).collect();
    congruence_generated(a, &pairs)
}

/// The classical distributive-lattice construction `x ≡ y ⟺ ∃i∈I: x∨i = y∨i`,
/// verified to be a congruence.
pub fn lattice_theta(l: &FiniteLattice, ideal: &Ideal) -> Result<Congruence, CongruenceError> {
    let n = l.size();
    let related = |x: Elem, y: Elem| {
        ideal
            .carrier()
            .iter()
            .any(|&i| l.join(x, i) == l.join(y, i))
    };
    // equivalence check: reflexive by i = any, symmetric by symmetry of the
    // condition; transitivity must be verified
    for x in 0..n {
        for y in 0..n {
            if !related(x, y) {
                continue;
            }
            for z in 0..n {
                if related(y, z) && !related(x, z) {
                    return Err(CongruenceError::NotEquivalence);
                }
            }
        }
    }
    let mut classes = vec![usize::MAX; n];
    let mut next = 0;
    for x in 0..n {
        if classes[x] != usize::MAX {
            continue;
        }
        for y in x..n {
            if related(x, y) && classes[y] == usize::MAX {
                classes[y] = next;
            }
        }
        next += 1;
    }
    let theta = Congruence::from_classes(&classes);
    theta.check_compatible(l)?;
    Ok(theta)
}

/// Quotient of a validated algebra, with the projection homomorphism.
/// The quotient of a distributive lattice is verified distributive by
/// construction (`Blo::new` re-checks).
pub fn quotient(a: &Blo, theta: &Congruence) -> Result<(Blo, Homomorphism), CongruenceError> {
    theta.check_compatible(a)?;
    let l = a.lattice();
    let k = theta.num_blocks();
    let mut reps = vec![usize::MAX; k];
    for x in l.elements() {
        let b = theta.block_of(x);
        if reps[b] == usize::MAX {
            reps[b] = x;
        }
    }
    let leq = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| theta.block_of(l.meet(reps[i], reps[j])) == i)
                .collect()
        })
        .collect();
    let lattice =
        FiniteLattice::from_leq_limited(leq, None, l.size().max(crate::lattice::DEFAULT_MAX_SIZE))
            .expect("quotient of a lattice by a compatible congruence is a lattice");
    let ops = (0..a.num_operators())
        .map(|f| (0..k).map(|i| theta.block_of(a.op(f, reps[i]))).collect())
        .collect();
    let blo = Blo::new(lattice, ops).expect("quotient inherits the operator axioms");
    let projection = Homomorphism::new_unchecked(l.elements().map(|x| theta.block_of(x)).collect());
    Ok((blo, projection))
}

/// All congruences: the join closure of the principal congruences, together
/// with the identity. Deterministic order (sorted partitions).
pub fn congruence_lattice<'a>(
    a: impl Into<AlgebraRef<'a>> + Copy,
    budget: &mut Budget,
) -> Result<Vec<Congruence>, SearchError> {
    let aref: AlgebraRef = a.into();
    let n = aref.lattice.size();
    let mut found = std::collections::BTreeSet::new();
    found.insert(Congruence::identity(n));
    for x in 0..n {
        for y in (x + 1)..n {
            budget.spend((n * n) as u64)?;
            found.insert(congruence_generated(a, &[(x, y)]));
        }
    }
    // close under joins of congruences
    loop {
        let snapshot: Vec<Congruence> = found.iter().cloned().collect();
        let mut grew = false;
        for (i, c1) in snapshot.iter().enumerate() {
            for c2 in snapshot.iter().skip(i + 1) {
                budget.spend((n * n) as u64)?;
                let pairs: Vec<(Elem, Elem)> = (0..n)
                    .flat_map(|x| {
                        (0..n)
                            .filter(move |&y| c1.same(x, y) || c2.same(x, y))
                            .map(move |y| (x, y))
                    })
                    .collect();
                let join = congruence_generated(a, &pairs);
                if found.insert(join) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(found.into_iter().collect())
}

/// Exactly the identity and universal congruences, on at least two elements.
/// One-element algebras are conventionally not simple.
pub fn is_simple<'a>(a: impl Into<AlgebraRef<'a>> + Copy) -> bool {
    let n: usize = {
        let r: AlgebraRef = a.into();
        r.lattice.size()
    };
    if n < 2 {
        return false;
    }
    let mut budget = Budget::default();
    match congruence_lattice(a, &mut budget) {
        Ok(cs) => cs.len() == 2,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blo::fixtures::{b4_f, c3_collapse};

    fn c3() -> FiniteLattice {
        FiniteLattice::chain(3)
    }

    #[test]
    fn empty_seed_gives_identity() {
        let l = c3();
        assert!(congruence_generated(&l, &[]).is_identity());
    }

    #[test]
    fn c3_ideal_0m_collapses() {
        let l = c3();
        let theta = congruence_from_ideal(&l, &Ideal::from_carrier(vec![0, 1]));
        assert_eq!(theta.num_blocks(), 2);
        assert!(theta.same(0, 1));
        assert!(!theta.same(0, 2));
    }

    #[test]
    fn c3_zero_ideal_generates_identity() {
        let l = c3();
        let theta = congruence_from_ideal(&l, &Ideal::from_carrier(vec![0]));
        assert!(theta.is_identity());
    }

    #[test]
    fn lattice_theta_matches_examples() {
        let l = c3();
        let theta = lattice_theta(&l, &Ideal::from_carrier(vec![0])).unwrap();
        assert!(theta.is_identity());
        let theta = lattice_theta(&l, &Ideal::from_carrier(vec![0, 1])).unwrap();
        assert!(theta.same(0, 1) && !theta.same(1, 2));
        let b4 = FiniteLattice::boolean(2);
        let theta = lattice_theta(&b4, &Ideal::from_carrier(vec![0, 1])).unwrap();
        assert!(theta.same(0, 1) && theta.same(2, 3) && !theta.same(0, 2));
    }

    #[test]
    fn theta_equals_generated_on_distributive_hosts() {
        for l in [
            c3(),
            FiniteLattice::boolean(2),
            FiniteLattice::chain(4),
            FiniteLattice::boolean(3),
        ] {
            for i in crate::ideal::enumerate_ideals(&l, false) {
                let a = lattice_theta(&l, &i).unwrap();
                let b = congruence_from_ideal(&l, &i);
                assert_eq!(a, b, "ideal {:?} of size-{} lattice", i.carrier(), l.size());
            }
        }
    }

    #[test]
    fn quotient_c3_by_collapse_is_two_chain() {
        let l = c3();
        let a = Blo::from_lattice(l.clone()).unwrap();
        let theta = congruence_from_ideal(&l, &Ideal::from_carrier(vec![0, 1]));
        let (q, pi) = quotient(&a, &theta).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(pi.apply(0), pi.apply(1));
        assert_ne!(pi.apply(0), pi.apply(2));
    }

    #[test]
    fn quotient_by_identity_and_universal() {
        let a = b4_f();
        let (q, _) = quotient(&a, &Congruence::identity(4)).unwrap();
        assert_eq!(q.size(), 4);
        let (q, _) = quotient(&a, &Congruence::universal(4)).unwrap();
        assert_eq!(q.size(), 1);
    }

    #[test]
    fn congruence_lattices_of_small_hosts() {
        let mut b = Budget::default();
        let cs = congruence_lattice(&c3(), &mut b).unwrap();
        assert_eq!(cs.len(), 4);
        let b4 = FiniteLattice::boolean(2);
        let cs = congruence_lattice(&b4, &mut b).unwrap();
        assert_eq!(cs.len(), 4);
        let two = FiniteLattice::chain(2);
        let cs = congruence_lattice(&two, &mut b).unwrap();
        assert_eq!(cs.len(), 2);
    }

    #[test]
    fn congruence_lattice_matches_partition_oracle() {
        // oracle: filter all partitions for compatibility
        fn all_partitions(n: usize) -> Vec<Vec<usize>> {
            fn go(n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if current.len() == n {
                    out.push(current.clone());
                    return;
                }
                let max = current.iter().copied().max().map_or(0, |m| m + 1);
                for b in 0..=max.min(k) {
                    current.push(b);
                    go(n, k, current, out);
                    current.pop();
                }
            }
            let mut out = Vec::new();
            go(n, n, &mut Vec::new(), &mut out);
            out
        }
        for l in [
            c3(),
            FiniteLattice::boolean(2),
            FiniteLattice::pentagon_n5(),
        ] {
            let n = l.size();
            let mut oracle: Vec<Congruence> = all_partitions(n)
                .into_iter()
                .map(|p| Congruence::from_classes(&p))
                .filter(|c| c.is_compatible(&l))
                .collect();
            oracle.sort();
            oracle.dedup();
            let mut budget = Budget::default();
            let got = congruence_lattice(&l, &mut budget).unwrap();
            assert_eq!(got, oracle, "lattice of size {}", n);
        }
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&FiniteLattice::chain(2)));
        assert!(!is_simple(&c3()));
        assert!(!is_simple(&FiniteLattice::chain(1)));
        assert!(is_simple(&FiniteLattice::diamond_m3()));
        // operators can make a reducible lattice simple
        let a = c3_collapse(); // congruences must respect f
        let aref: AlgebraRef = (&a).into();
        let mut b = Budget::default();
        let cs = congruence_lattice(aref, &mut b).unwrap();
        assert_eq!(cs.len(), 3); // identity, {{0},{m,1}}, universal
    }

    #[test]
    fn zero_class_of_generated_congruence_contains_ideal() {
        let a = b4_f();
        for i in crate::ideal::enumerate_ideals(&a, true) {
            let theta = congruence_from_ideal(&a, &i);
            let zero = theta.zero_class(a.lattice());
            assert!(i.carrier().iter().all(|&x| zero.contains(x)));
        }
    }
}
