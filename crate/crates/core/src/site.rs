//! Finite sites: posets, optionally with an integral commutative monoidal
//! product whose unit is the top element.

use crate::lattice::FiniteLattice;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("relation is not a partial order")]
    NotPartialOrder,
    #[error("tensor violates {axiom} at {witness:?}")]
    TensorAxiomViolation {
        axiom: &'static str,
        witness: Vec<usize>,
    },
    #[error("a monoidal site needs a top element as unit")]
    NoTop,
    #[error("tensor table is not square")]
    BadTensorTable,
}

/// A finite poset of forcing conditions, with an optional tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSite {
    size: usize,
    leq: Vec<Vec<bool>>,
    tensor: Option<Vec<Vec<usize>>>,
    top: Option<usize>,
}

impl FiniteSite {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn points(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn leq_table(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn has_tensor(&self) -> bool {
        self.tensor.is_some()
    }

    pub fn tensor(&self, a: usize, b: usize) -> Option<usize> {
        self.tensor.as_ref().map(|t| t[a][b])
    }

    pub fn tensor_table(&self) -> Option<&Vec<Vec<usize>>> {
        self.tensor.as_ref()
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    /// Points below `i`, in index order.
    pub fn down(&self, i: usize) -> Vec<usize> {
        (0..self.size).filter(|&j| self.leq[j][i]).collect()
    }

    /// Points above `i`, in index order.
    pub fn up(&self, i: usize) -> Vec<usize> {
        (0..self.size).filter(|&j| self.leq[i][j]).collect()
    }

    /// Meet, when the pair has one.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.size)
            .filter(|&c| self.leq[c][a] && self.leq[c][b])
            .collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&c| self.leq[c][m]))
    }
}

/// Validate a site. With a tensor present the table must be associative,
/// commutative, monotone in both arguments, integral (`a⊗b` below both
/// arguments) and have the top element as unit.
pub fn build_site(
    leq: Vec<Vec<bool>>,
    tensor: Option<Vec<Vec<usize>>>,
) -> Result<FiniteSite, SiteError> {
    let n = leq.len();
    if n == 0 || leq.iter().any(|r| r.len() != n) {
        return Err(SiteError::NotPartialOrder);
    }
    let reflexive = (0..n).all(|x| leq[x][x]);
    let antisymmetric = (0..n).all(|x| (0..n).all(|y| x == y || !leq[x][y] || !leq[y][x]));
    let transitive =
        (0..n).all(|x| (0..n).all(|y| !leq[x][y] || (0..n).all(|z| !leq[y][z] || leq[x][z])));
    if !(reflexive && antisymmetric && transitive) {
        return Err(SiteError::NotPartialOrder);
    }
    let top = (0..n).find(|&t| (0..n).all(|x| leq[x][t]));
    if let Some(t) = &tensor {
        if t.len() != n || t.iter().any(|r| r.len() != n) || t.iter().flatten().any(|&v| v >= n) {
            return Err(SiteError::BadTensorTable);
        }
        let unit = top.ok_or(SiteError::NoTop)?;
        for a in 0..n {
            if t[a][unit] != a || t[unit][a] != a {
                return Err(SiteError::TensorAxiomViolation {
                    axiom: "unit",
                    witness: vec![a],
                });
            }
            for b in 0..n {
                if t[a][b] != t[b][a] {
                    return Err(SiteError::TensorAxiomViolation {
                        axiom: "commutativity",
                        witness: vec![a, b],
                    });
                }
                if !(leq[t[a][b]][a] && leq[t[a][b]][b]) {
                    return Err(SiteError::TensorAxiomViolation {
                        axiom: "integrality",
                        witness: vec![a, b],
                    });
                }
                for c in 0..n {
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        return Err(SiteError::TensorAxiomViolation {
                            axiom: "associativity",
                            witness: vec![a, b, c],
                        });
                    }
                    if leq[a][b] && !leq[t[a][c]][t[b][c]] {
                        return Err(SiteError::TensorAxiomViolation {
                            axiom: "monotonicity",
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
    }
    Ok(FiniteSite {
        size: n,
        leq,
        tensor,
        top,
    })
}

/// View a finite distributive lattice (a Heyting algebra) as a site of
/// forcing conditions: the points are the nonzero elements (the bottom is
/// the inconsistent condition and is dropped, so the two-element algebra
/// gives the classical one-point site), with tensor `∧` whenever meet stays
/// total on the nonzero part.
pub fn heyting_adapter(h: &FiniteLattice) -> FiniteSite {
    let carrier: Vec<usize> = h
        .elements()
        .filter(|&x| x != h.bottom() || h.size() == 1)
        .collect();
    let leq: Vec<Vec<bool>> = carrier
        .iter()
        .map(|&a| carrier.iter().map(|&b| h.leq(a, b)).collect())
        .collect();
    let meets_total = carrier
        .iter()
        .all(|&a| carrier.iter().all(|&b| carrier.contains(&h.meet(a, b))));
    let tensor = meets_total.then(|| {
        carrier
            .iter()
            .map(|&a| {
                carrier
                    .iter()
                    .map(|&b| carrier.iter().position(|&c| c == h.meet(a, b)).unwrap())
                    .collect()
            })
            .collect()
    });
    build_site(leq, tensor).expect("a lattice order restricted to nonzero elements is a site")
}

/// The chain `0 < 1/n < … < 1` with the Łukasiewicz product
/// `a ⊗ b = max(0, a + b - 1)`.
pub fn lukasiewicz_site(n: usize) -> FiniteSite {
    assert!(n >= 1);
    let size = n + 1;
    let leq = (0..size)
        .map(|a| (0..size).map(|b| a <= b).collect())
        .collect();
    let tensor = (0..size)
        .map(|a| (0..size).map(|b| (a + b).saturating_sub(n)).collect())
        .collect();
    build_site(leq, Some(tensor)).expect("Łukasiewicz chain is an integral monoidal site")
}
