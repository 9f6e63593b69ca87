//! Finite posets and their enumeration up to isomorphism.
//!
//! Posets are generated in naturally-labeled form (the labeling is a linear
//! extension: each new element is inserted above a downward-closed subset of
//! the existing ones) and deduplicated by a canonical key, so the output
//! order is deterministic.

use crate::lattice::FiniteLattice;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    size: usize,
    leq: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("relation is not a partial order")]
    NotPartialOrder,
    #[error("poset enumeration supports at most {max} points, got {got}")]
    TooLarge { max: usize, got: usize },
}

/// Largest point count the enumerator accepts; canonical keys use one `u64`.
pub const MAX_ENUMERATED_POINTS: usize = 7;

/// Degree profile plus the sorted profiles of the elements below and above.
type RefinedInvariant = ((usize, usize), Vec<(usize, usize)>, Vec<(usize, usize)>);

impl Poset {
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let size = leq.len();
        let square = leq.iter().all(|r| r.len() == size);
        if !square || !is_partial_order(&leq) {
            return Err(PosetError::NotPartialOrder);
        }
        Ok(Poset { size, leq })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn leq_table(&self) -> &[Vec<bool>] {
        &self.leq
    }

    /// All downward-closed subsets as sorted bitmasks.
    pub fn downsets(&self) -> Vec<u64> {
        let n = self.size;
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let closed = (0..n).all(|i| {
                mask & (1 << i) == 0 || (0..n).all(|j| !self.leq[j][i] || mask & (1 << j) != 0)
            });
            if closed {
                out.push(mask);
            }
        }
        out
    }

    /// The lattice of downward-closed subsets ordered by inclusion.
    pub fn downset_lattice(&self) -> FiniteLattice {
        let sets = self.downsets();
        let leq = sets
            .iter()
            .map(|&a| sets.iter().map(|&b| a & b == a).collect())
            .collect();
        FiniteLattice::from_leq_limited(leq, None, sets.len().max(crate::lattice::DEFAULT_MAX_SIZE))
            .expect("downsets under inclusion form a lattice")
    }

    /// A key equal for isomorphic posets and distinct otherwise: the minimal
    /// adjacency-matrix encoding over all invariant-respecting relabelings.
    pub fn canonical_key(&self) -> u64 {
        let n = self.size;
        assert!(n * n <= 64, "canonical key needs n*n bits");
        // two-round degree-style invariant to cut the permutation search
        let basic: Vec<(usize, usize)> = (0..n)
            .map(|i| {
                let down = (0..n).filter(|&j| self.leq[j][i]).count();
                let up = (0..n).filter(|&j| self.leq[i][j]).count();
                (down, up)
            })
            .collect();
        let refined: Vec<RefinedInvariant> = (0..n)
            .map(|i| {
                let mut below: Vec<_> = (0..n)
                    .filter(|&j| j != i && self.leq[j][i])
                    .map(|j| basic[j])
                    .collect();
                let mut above: Vec<_> = (0..n)
                    .filter(|&j| j != i && self.leq[i][j])
                    .map(|j| basic[j])
                    .collect();
                below.sort_unstable();
                above.sort_unstable();
                (basic[i], below, above)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| refined[a].cmp(&refined[b]));

        let mut best = u64::MAX;
        let mut perm = vec![0usize; n];
        self.search_key(
            &refined,
            &order,
            &mut perm,
            0,
            &mut vec![false; n],
            &mut best,
        );
        best
    }

    fn encode(&self, perm: &[usize]) -> u64 {
        let n = self.size;
        let mut bits = 0u64;
        for i in 0..n {
            for j in 0..n {
                if self.leq[perm[i]][perm[j]] {
                    bits |= 1 << (i * n + j);
                }
            }
        }
        bits
    }

    #[allow(clippy::too_many_arguments)]
    fn search_key(
        &self,
        refined: &[RefinedInvariant],
        order: &[usize],
        perm: &mut [usize],
        pos: usize,
        used: &mut [bool],
        best: &mut u64,
    ) {
        let n = self.size;
        if pos == n {
            let key = self.encode(perm);
            if key < *best {
                *best = key;
            }
            return;
        }
        for &cand in order {
            if used[cand] || refined[cand] != refined[order[pos]] {
                continue;
            }
            perm[pos] = cand;
            used[cand] = true;
            self.search_key(refined, order, perm, pos + 1, used, best);
            used[cand] = false;
        }
    }
}

fn is_partial_order(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    (0..n).all(|x| leq[x][x])
        && (0..n).all(|x| (0..n).all(|y| x == y || !leq[x][y] || !leq[y][x]))
        && (0..n).all(|x| (0..n).all(|y| !leq[x][y] || (0..n).all(|z| !leq[y][z] || leq[x][z])))
}

/// All posets on exactly `n` points, one representative per isomorphism
/// class, in canonical-key order.
pub fn posets_up_to_iso(n: usize) -> Result<Vec<Poset>, PosetError> {
    if n > MAX_ENUMERATED_POINTS {
        return Err(PosetError::TooLarge {
            max: MAX_ENUMERATED_POINTS,
            got: n,
        });
    }
    let mut seen = std::collections::BTreeMap::<u64, Poset>::new();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    grow(&mut leq, 1, n, &mut seen);
    Ok(seen.into_values().collect())
}

/// Extend a naturally labeled poset on `k` points by choosing a downward
/// closed strict down-set for point `k`.
fn grow(
    leq: &mut Vec<Vec<bool>>,
    k: usize,
    n: usize,
    seen: &mut std::collections::BTreeMap<u64, Poset>,
) {
    if k == n || n == 0 {
        let p = Poset {
            size: n,
            leq: leq.clone(),
        };
        seen.entry(p.canonical_key()).or_insert(p);
        return;
    }
    // candidate strict down-sets for element k: downward closed in 0..k
    for mask in 0u64..(1 << k) {
        let closed = (0..k)
            .all(|i| mask & (1 << i) == 0 || (0..k).all(|j| !leq[j][i] || mask & (1 << j) != 0));
        if !closed {
            continue;
        }
        for i in 0..k {
            leq[i][k] = mask & (1 << i) != 0;
        }
        grow(leq, k + 1, n, seen);
    }
    for i in 0..k {
        leq[i][k] = false;
    }
}
