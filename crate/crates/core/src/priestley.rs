//! Prime spectra of finite distributive lattices and the duality with
//! downset lattices.
//!
//! Points are proper prime ideals ordered by inclusion; the basic sets are
//! `N_a = {P : a ∉ P}`. On a finite carrier the topology is discrete and the
//! order carries all the structure, which is recorded explicitly rather than
//! faked through a topology layer. (The literature calls this construction
//! both the Zariski and the Priestley topology; at finite scale they agree,
//! and only the one construction exists here.)

use crate::hom::Homomorphism;
use crate::ideal::{enumerate_ideals, Ideal};
use crate::lattice::{Elem, FiniteLattice};
use thiserror::Error;

/// Topology of a finite spectrum. Only the discrete case exists here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Discrete,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PriestleyError {
    #[error("lattice is not distributive (witness {witness:?})")]
    NotDistributive { witness: (Elem, Elem, Elem) },
    #[error("duality unit is not an isomorphism: {reason} at element {witness}")]
    NotIsomorphism { reason: &'static str, witness: Elem },
    #[error("point map image {image:?} is not a prime ideal of the target lattice")]
    NotAPoint { image: Vec<Elem> },
}

/// The prime spectrum of a finite distributive lattice.
#[derive(Debug, Clone)]
pub struct PriestleySpace {
    host_size: usize,
    points: Vec<Ideal>,
    /// `order[x][y]` iff point `x ⊆ y`.
    order: Vec<Vec<bool>>,
    /// `basis[a][x]` iff `a ∉ points[x]`, i.e. `x ∈ N_a`.
    basis: Vec<Vec<bool>>,
}

impl PriestleySpace {
    pub fn host_size(&self) -> usize {
        self.host_size
    }

    pub fn points(&self) -> &[Ideal] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order[x][y]
    }

    pub fn topology(&self) -> Topology {
        Topology::Discrete
    }

    /// `N_a` as a bitmask over point indices.
    pub fn basic_set(&self, a: Elem) -> u64 {
        let mut mask = 0u64;
        for (x, _) in self.points.iter().enumerate() {
            if self.basis[a][x] {
                mask |= 1 << x;
            }
        }
        mask
    }

    /// Indices of the maximal points in the inclusion order.
    pub fn maximal_points(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| y == x || !self.order[x][y]))
            .collect()
    }

    /// Index of the given prime ideal, if it is a point.
    pub fn index_of(&self, p: &Ideal) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }
}

/// Compute the spectrum and verify the basis laws and Priestley separation.
pub fn spectrum(l: &FiniteLattice) -> Result<PriestleySpace, PriestleyError> {
    if let Some(witness) = l.distributivity_witness() {
        return Err(PriestleyError::NotDistributive { witness });
    }
    let points: Vec<Ideal> = enumerate_ideals(l, false)
        .into_iter()
        .filter(|i| i.is_prime(l))
        .collect();
    let order = points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|q| p.carrier().iter().all(|&x| q.contains(x)))
                .collect()
        })
        .collect();
    let basis = l
        .elements()
        .map(|a| points.iter().map(|p| !p.contains(a)).collect())
        .collect();
    let space = PriestleySpace {
        host_size: l.size(),
        points,
        order,
        basis,
    };
    debug_assert!(space_invariants_hold(l, &space));
    Ok(space)
}

fn space_invariants_hold(l: &FiniteLattice, s: &PriestleySpace) -> bool {
    let all = if s.len() == 64 {
        u64::MAX
    } else {
        (1u64 << s.len()) - 1
    };
    // N-laws
    let laws = l.elements().all(|a| {
        l.elements().all(|b| {
            s.basic_set(l.meet(a, b)) == s.basic_set(a) & s.basic_set(b)
                && s.basic_set(l.join(a, b)) == s.basic_set(a) | s.basic_set(b)
        })
    }) && s.basic_set(l.bottom()) == 0
        && s.basic_set(l.top()) == all;
    // each N_a downward closed in ⊆
    let down = l.elements().all(|a| {
        (0..s.len()).all(|x| (0..s.len()).all(|y| !(s.leq(y, x) && s.basis[a][x]) || s.basis[a][y]))
    });
    // separation: x ⊄ y gives a basic downward clopen containing y, not x
    let sep = (0..s.len()).all(|x| {
        (0..s.len()).all(|y| s.leq(x, y) || l.elements().any(|a| s.basis[a][y] && !s.basis[a][x]))
    });
    laws && down && sep
}

/// The lattice of downward-closed point sets with inclusion. Finite case:
/// every downset is clopen. Elements are sorted bitmasks.
#[derive(Debug, Clone)]
pub struct ClopenDownsets {
    pub lattice: FiniteLattice,
    pub sets: Vec<u64>,
}

impl ClopenDownsets {
    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.sets.binary_search(&mask).ok()
    }
}

pub fn clopen_downsets(s: &PriestleySpace) -> ClopenDownsets {
    let n = s.len();
    assert!(n <= 32, "spectrum too large for downset enumeration");
    let mut sets = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let closed = (0..n)
            .all(|x| mask & (1 << x) == 0 || (0..n).all(|y| !s.leq(y, x) || mask & (1 << y) != 0));
        if closed {
            sets.push(mask);
        }
    }
    let leq = sets
        .iter()
        .map(|&a| sets.iter().map(|&b| a & b == a).collect())
        .collect();
    let lattice = FiniteLattice::from_leq_limited(leq, None, sets.len().max(64))
        .expect("downsets of a finite order form a lattice");
    ClopenDownsets { lattice, sets }
}

/// The unit of the duality, `a ↦ N_a`, verified to be an isomorphism onto
/// the clopen-downset lattice. Failure would be a counterexample to the
/// finite duality and is surfaced as an error.
pub fn duality_unit(
    l: &FiniteLattice,
) -> Result<(PriestleySpace, ClopenDownsets, Homomorphism), PriestleyError> {
    let space = spectrum(l)?;
    let downs = clopen_downsets(&space);
    let mut table = Vec::with_capacity(l.size());
    for a in l.elements() {
        match downs.index_of(space.basic_set(a)) {
            Some(i) => table.push(i),
            None => {
                return Err(PriestleyError::NotIsomorphism {
                    reason: "N_a is not a downset",
                    witness: a,
                })
            }
        }
    }
    let hom = Homomorphism::new(l, &downs.lattice, table).map_err(|_| {
        PriestleyError::NotIsomorphism {
            reason: "unit is not a homomorphism",
            witness: 0,
        }
    })?;
    if !hom.is_injective() {
        return Err(PriestleyError::NotIsomorphism {
            reason: "unit is not injective",
            witness: 0,
        });
    }
    if !hom.is_surjective_onto(downs.lattice.size()) {
        return Err(PriestleyError::NotIsomorphism {
            reason: "unit is not surjective",
            witness: 0,
        });
    }
    Ok((space, downs, hom))
}

/// The dual of a bounded-lattice homomorphism `h : L → M`: the point map
/// `Spec(M) → Spec(L)`, `P ↦ h⁻¹(P)`, verified order preserving.
pub fn dual_of_hom(
    h: &Homomorphism,
    l: &FiniteLattice,
    spec_l: &PriestleySpace,
    spec_m: &PriestleySpace,
) -> Result<Vec<usize>, PriestleyError> {
    let mut map = Vec::with_capacity(spec_m.len());
    for p in spec_m.points() {
        let preimage =
            Ideal::from_carrier(l.elements().filter(|&a| p.contains(h.apply(a))).collect());
        match spec_l.index_of(&preimage) {
            Some(i) => map.push(i),
            None => {
                return Err(PriestleyError::NotAPoint {
                    image: preimage.carrier().to_vec(),
                })
            }
        }
    }
    for x in 0..spec_m.len() {
        for y in 0..spec_m.len() {
            if spec_m.leq(x, y) {
                debug_assert!(spec_l.leq(map[x], map[y]), "dual map must be monotone");
            }
        }
    }
    Ok(map)
}

/// The dual of a monotone point map `f : Y → X`: the homomorphism
/// `U ↦ f⁻¹(U)` between clopen-downset lattices.
pub fn dual_of_point_map(
    f: &[usize],
    downs_x: &ClopenDownsets,
    downs_y: &ClopenDownsets,
) -> Result<Homomorphism, PriestleyError> {
    let mut table = Vec::with_capacity(downs_x.sets.len());
    for &u in &downs_x.sets {
        let mut pre = 0u64;
        for (y, &fx) in f.iter().enumerate() {
            if u & (1 << fx) != 0 {
                pre |= 1 << y;
            }
        }
        match downs_y.index_of(pre) {
            Some(i) => table.push(i),
            None => return Err(PriestleyError::NotAPoint { image: vec![] }),
        }
    }
    Homomorphism::new(&downs_x.lattice, &downs_y.lattice, table)
        .map_err(|_| PriestleyError::NotAPoint { image: vec![] })
}
