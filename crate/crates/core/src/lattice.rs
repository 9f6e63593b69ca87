//! Finite bounded lattices, presented by their order relation.
//!
//! A lattice is input as a `size x size` reflexive/antisymmetric/transitive
//! table; meet and join tables are derived from the order rather than taken
//! as input, so inconsistent tables cannot be constructed.

use thiserror::Error;

/// Index of a lattice element. Elements are always `0..size`.
pub type Elem = usize;

/// Default cap on carrier size, keeping exhaustive triple scans cheap.
/// Internal constructions (section algebras) raise the cap explicitly.
pub const DEFAULT_MAX_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty carrier")]
    Empty,
    #[error("order table is not square: row {row} has length {len}, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("carrier of size {size} exceeds the configured limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("not a partial order: {reason} at {witness:?}")]
    NotPartialOrder {
        reason: &'static str,
        witness: (Elem, Elem),
    },
    #[error("not a lattice: pair {pair:?} has no {kind}")]
    NotALattice {
        pair: (Elem, Elem),
        kind: &'static str,
    },
    #[error("not bounded: no global {0}")]
    NotBounded(&'static str),
    #[error("labels length {got} does not match carrier size {size}")]
    BadLabels { got: usize, size: usize },
}

/// A finite bounded lattice with derived meet/join tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<Elem>>,
    join: Vec<Vec<Elem>>,
    bottom: Elem,
    top: Elem,
    labels: Option<Vec<String>>,
}

impl FiniteLattice {
    /// Build a lattice from its order table, verifying every invariant.
    pub fn from_leq(leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        Self::from_leq_limited(leq, None, DEFAULT_MAX_SIZE)
    }

    pub fn from_leq_labeled(
        leq: Vec<Vec<bool>>,
        labels: Vec<String>,
    ) -> Result<Self, LatticeError> {
        Self::from_leq_limited(leq, Some(labels), DEFAULT_MAX_SIZE)
    }

    /// As [`from_leq`](Self::from_leq) with an explicit size cap.
    pub fn from_leq_limited(
        leq: Vec<Vec<bool>>,
        labels: Option<Vec<String>>,
        limit: usize,
    ) -> Result<Self, LatticeError> {
        let size = leq.len();
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        if size > limit {
            return Err(LatticeError::TooLarge { size, limit });
        }
        for (row, r) in leq.iter().enumerate() {
            if r.len() != size {
                return Err(LatticeError::NotSquare {
                    row,
                    len: r.len(),
                    size,
                });
            }
        }
        if let Some(ref l) = labels {
            if l.len() != size {
                return Err(LatticeError::BadLabels { got: l.len(), size });
            }
        }
        check_partial_order(&leq)?;

        // transpose once so both bound scans run along rows
        let geq: Vec<Vec<bool>> = (0..size)
            .map(|a| (0..size).map(|c| leq[c][a]).collect())
            .collect();
        let mut meet = vec![vec![0usize; size]; size];
        let mut join = vec![vec![0usize; size]; size];
        for a in 0..size {
            for b in a..size {
                let m = bound(&leq, &geq, a, b, true).ok_or(LatticeError::NotALattice {
                    pair: (a, b),
                    kind: "infimum",
                })?;
                let j = bound(&leq, &geq, a, b, false).ok_or(LatticeError::NotALattice {
                    pair: (a, b),
                    kind: "supremum",
                })?;
                meet[a][b] = m;
                meet[b][a] = m;
                join[a][b] = j;
                join[b][a] = j;
            }
        }

        let bottom = (0..size)
            .find(|&x| (0..size).all(|y| leq[x][y]))
            .ok_or(LatticeError::NotBounded("minimum"))?;
        let top = (0..size)
            .find(|&x| (0..size).all(|y| leq[y][x]))
            .ok_or(LatticeError::NotBounded("maximum"))?;

        let lat = FiniteLattice {
            size,
            leq,
            meet,
            join,
            bottom,
            top,
            labels,
        };
        debug_assert!(lat.absorption_holds());
        Ok(lat)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a][b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a][b]
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq_table(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: Elem) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, xs: I) -> Elem {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, xs: I) -> Elem {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    fn absorption_holds(&self) -> bool {
        self.elements().all(|x| {
            self.elements()
                .all(|y| self.meet(x, self.join(x, y)) == x && self.join(x, self.meet(x, y)) == x)
        })
    }

    /// First triple violating `x ∧ (y ∨ z) = (x∧y) ∨ (x∧z)`, if any.
    pub fn distributivity_witness(&self) -> Option<(Elem, Elem, Elem)> {
        for x in 0..self.size {
            let meet_x = &self.meet[x];
            for y in 0..self.size {
                let join_y = &self.join[y];
                let join_mxy = &self.join[meet_x[y]];
                for z in 0..self.size {
                    if meet_x[join_y[z]] != join_mxy[meet_x[z]] {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    /// First `(c, d, a)` with `a` in the interval `[c, d]` lacking a relative
    /// complement, if any.
    pub fn relative_complement_witness(&self) -> Option<(Elem, Elem, Elem)> {
        for c in 0..self.size {
            for d in 0..self.size {
                if !self.leq(c, d) {
                    continue;
                }
                for a in 0..self.size {
                    if !(self.leq(c, a) && self.leq(a, d)) {
                        continue;
                    }
                    let complemented = (0..self.size).any(|b| {
                        self.leq(c, b)
                            && self.leq(b, d)
                            && self.join(a, b) == d
                            && self.meet(a, b) == c
                    });
                    if !complemented {
                        return Some((c, d, a));
                    }
                }
            }
        }
        None
    }

    pub fn is_relatively_complemented(&self) -> bool {
        self.relative_complement_witness().is_none()
    }

    /// Complement of `a` in `[0, 1]`, unique when the lattice is distributive.
    pub fn complement(&self, a: Elem) -> Option<Elem> {
        (0..self.size).find(|&b| self.join(a, b) == self.top && self.meet(a, b) == self.bottom)
    }

    /// Complemented distributive, i.e. a Boolean lattice.
    pub fn is_boolean(&self) -> bool {
        self.is_distributive() && self.elements().all(|a| self.complement(a).is_some())
    }

    /// Non-bottom elements that are not a join of two strictly smaller ones.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| {
                a != self.bottom
                    && !self
                        .elements()
                        .any(|x| x != a && self.elements().any(|y| y != a && self.join(x, y) == a))
            })
            .collect()
    }

    /// `↓a` as a sorted element list.
    pub fn downset(&self, a: Elem) -> Vec<Elem> {
        self.elements().filter(|&x| self.leq(x, a)).collect()
    }

    /// Covering pairs `(a, b)` with `b` covering `a`, for Hasse diagrams.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in 0..self.size {
                if a == b || !self.leq[a][b] {
                    continue;
                }
                let between =
                    (0..self.size).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b]);
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Sublattice on `carrier` (which must be meet/join closed), keeping the
    /// carrier order as the new element order.
    pub fn restrict_to(&self, carrier: &[Elem]) -> Result<FiniteLattice, LatticeError> {
        let leq = carrier
            .iter()
            .map(|&a| carrier.iter().map(|&b| self.leq(a, b)).collect())
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| carrier.iter().map(|&a| l[a].clone()).collect());
        FiniteLattice::from_leq_limited(leq, labels, self.size.max(DEFAULT_MAX_SIZE))
    }

    /// Order-isomorphism test by backtracking on an invariant-pruned
    /// assignment. Adequate for the small carriers used here.
    pub fn is_isomorphic_to(&self, other: &FiniteLattice) -> bool {
        if self.size != other.size {
            return false;
        }
        let inv = |l: &FiniteLattice, a: Elem| {
            let down = l.elements().filter(|&x| l.leq(x, a)).count();
            let up = l.elements().filter(|&x| l.leq(a, x)).count();
            (down, up)
        };
        let mine: Vec<_> = self.elements().map(|a| inv(self, a)).collect();
        let theirs: Vec<_> = other.elements().map(|a| inv(other, a)).collect();
        {
            let mut a = mine.clone();
            let mut b = theirs.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return false;
            }
        }
        let mut map = vec![usize::MAX; self.size];
        let mut used = vec![false; self.size];
        fn assign(
            s: &FiniteLattice,
            o: &FiniteLattice,
            mine: &[(usize, usize)],
            theirs: &[(usize, usize)],
            map: &mut [usize],
            used: &mut [bool],
            a: Elem,
        ) -> bool {
            if a == s.size() {
                return true;
            }
            for b in 0..o.size() {
                if used[b] || mine[a] != theirs[b] {
                    continue;
                }
                let ok = (0..a)
                    .all(|p| s.leq(p, a) == o.leq(map[p], b) && s.leq(a, p) == o.leq(b, map[p]));
                if ok {
                    map[a] = b;
                    used[b] = true;
                    if assign(s, o, mine, theirs, map, used, a + 1) {
                        return true;
                    }
                    used[b] = false;
                    map[a] = usize::MAX;
                }
            }
            false
        }
        assign(self, other, &mine, &theirs, &mut map, &mut used, 0)
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> FiniteLattice {
        assert!(n >= 1);
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        FiniteLattice::from_leq_limited(leq, None, n.max(DEFAULT_MAX_SIZE))
            .expect("chain is a lattice")
    }

    /// The Boolean lattice on `atoms` atoms; element `i` is the bitmask `i`.
    pub fn boolean(atoms: u32) -> FiniteLattice {
        let n = 1usize << atoms;
        let leq = (0..n)
            .map(|a| (0..n).map(|b| a & b == a).collect())
            .collect();
        FiniteLattice::from_leq_limited(leq, None, n.max(DEFAULT_MAX_SIZE))
            .expect("powerset is a lattice")
    }

    /// The diamond M3: bottom, three incomparable elements, top.
    pub fn diamond_m3() -> FiniteLattice {
        let mut leq = vec![vec![false; 5]; 5];
        for i in 0..5 {
            leq[i][i] = true;
            leq[0][i] = true;
            leq[i][4] = true;
        }
        FiniteLattice::from_leq(leq).expect("M3 is a lattice")
    }

    /// The pentagon N5: 0 < a < c < 1 and 0 < b < 1 with b incomparable to both.
    pub fn pentagon_n5() -> FiniteLattice {
        // order: 0, a, c, b, 1 = indices 0,1,2,3,4 with 1 < 2
        let mut leq = vec![vec![false; 5]; 5];
        for i in 0..5 {
            leq[i][i] = true;
            leq[0][i] = true;
            leq[i][4] = true;
        }
        leq[1][2] = true;
        FiniteLattice::from_leq(leq).expect("N5 is a lattice")
    }
}

fn check_partial_order(leq: &[Vec<bool>]) -> Result<(), LatticeError> {
    let n = leq.len();
    for x in 0..n {
        if !leq[x][x] {
            return Err(LatticeError::NotPartialOrder {
                reason: "reflexivity fails",
                witness: (x, x),
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && leq[x][y] && leq[y][x] {
                return Err(LatticeError::NotPartialOrder {
                    reason: "antisymmetry fails",
                    witness: (x, y),
                });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if !leq[x][y] {
                continue;
            }
            for z in 0..n {
                if leq[y][z] && !leq[x][z] {
                    return Err(LatticeError::NotPartialOrder {
                        reason: "transitivity fails",
                        witness: (x, z),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Greatest lower (`lower = true`) or least upper bound of `a, b`, if it
/// exists. `geq` is the transpose of `leq`; with both on hand every scan
/// runs along rows.
fn bound(leq: &[Vec<bool>], geq: &[Vec<bool>], a: Elem, b: Elem, lower: bool) -> Option<Elem> {
    let n = leq.len();
    let (row_a, row_b) = if lower {
        (&geq[a], &geq[b])
    } else {
        (&leq[a], &leq[b])
    };
    let mut best: Option<Elem> = None;
    for c in 0..n {
        if !(row_a[c] && row_b[c]) {
            continue;
        }
        best = match best {
            None => Some(c),
            Some(m) => {
                // lower: c improves on m when m ≤ c; upper: when c ≤ m
                let improves = if lower { leq[m][c] } else { geq[m][c] };
                if improves {
                    Some(c)
                } else {
                    Some(m)
                }
            }
        };
    }
    let m = best?;
    // the fold only finds the extremum if it exists; verify it dominates
    let dominates = if lower { &geq[m] } else { &leq[m] };
    for c in 0..n {
        if row_a[c] && row_b[c] && !dominates[c] {
            return None;
        }
    }
    Some(m)
}
