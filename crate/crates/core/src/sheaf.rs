//! Dual sheaves of lattices with operators: base space, stalks, section
//! algebras, the representation map, and morphism-level duality.
//!
//! The base is the prime spectrum of a neat reduct's lattice (by default the
//! zero-dimensional part). On a finite discrete base every choice of stalk
//! elements is a continuous section, so the section algebra is the full
//! product of stalks; this is what makes the isomorphism claim for the
//! representation map falsifiable, and false already for the three-chain.

use crate::blo::{blo_product, AlgebraRef, Blo};
use crate::budget::{Budget, SearchError};
use crate::congruence::{congruence_from_ideal, lattice_theta, quotient, Congruence};
use crate::corpus;
use crate::hom::{enumerate_homomorphisms, Homomorphism};
use crate::ideal::{enumerate_ideals, ideal_generated, Ideal};
use crate::lattice::{Elem, FiniteLattice};
use crate::priestley::{spectrum, PriestleyError, PriestleySpace};
use thiserror::Error;

/// How the stalk quotient at a point is generated. Quotients require
/// congruences, so the congruence mode is the default; the ideal mode runs
/// the classical `∃i∈I: x∨i = y∨i` construction for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StalkMode {
    #[default]
    Congruence,
    Ideal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error(transparent)]
    Priestley(#[from] PriestleyError),
    #[error("retained operator escapes the neat reduct: {0}")]
    NotClosed(#[from] crate::blo::NotClosed),
    #[error("ideal-mode congruence at point {point} is not operator compatible")]
    IncompatibleCongruence { point: usize },
    #[error("section space of {size} sections exceeds the cap {cap}")]
    SectionSpaceTooLarge { size: usize, cap: usize },
    #[error("lattice is not Boolean (element {witness} has no complement)")]
    NotBoolean { witness: Elem },
    #[error("zero-dimensional part is not Boolean; double-dual check does not apply")]
    NotApplicable,
    #[error("dual morphism data is ill-defined: {reason} at point {point}")]
    IllDefined { reason: &'static str, point: usize },
}

/// One stalk: the quotient algebra together with its projection and the
/// generating congruence.
#[derive(Debug, Clone)]
pub struct Stalk {
    pub algebra: Blo,
    pub projection: Homomorphism,
    pub congruence: Congruence,
}

/// The dual space of an algebra: base spectrum, stalks, and the value table
/// of the candidate sections `σ_a`.
#[derive(Debug, Clone)]
pub struct SheafTriple {
    host: Blo,
    j: Vec<usize>,
    mode: StalkMode,
    base: PriestleySpace,
    /// Carrier of the neat reduct inside the host, indexing base points.
    base_embedding: Vec<Elem>,
    stalks: Vec<Stalk>,
    /// `sigma[a][x]` is the image of host element `a` in the stalk over `x`.
    sigma: Vec<Vec<Elem>>,
}

impl SheafTriple {
    pub fn host(&self) -> &Blo {
        &self.host
    }

    pub fn retained(&self) -> &[usize] {
        &self.j
    }

    pub fn mode(&self) -> StalkMode {
        self.mode
    }

    pub fn base(&self) -> &PriestleySpace {
        &self.base
    }

    pub fn num_points(&self) -> usize {
        self.base.len()
    }

    pub fn stalk(&self, point: usize) -> &Stalk {
        &self.stalks[point]
    }

    pub fn stalks(&self) -> &[Stalk] {
        &self.stalks
    }

    pub fn sigma(&self, a: Elem, point: usize) -> Elem {
        self.sigma[a][point]
    }

    /// The point of the base carrying a prime ideal, as host elements.
    pub fn point_carrier_in_host(&self, point: usize) -> Vec<Elem> {
        self.base.points()[point]
            .carrier()
            .iter()
            .map(|&i| self.base_embedding[i])
            .collect()
    }
}

/// Build the dual sheaf of `host` relative to the retained operator set `j`.
pub fn build_sheaf(host: &Blo, j: &[usize], mode: StalkMode) -> Result<SheafTriple, SheafError> {
    let reduct = host.nr(j)?;
    let base = spectrum(reduct.algebra.lattice())?;
    let mut stalks = Vec::with_capacity(base.len());
    for (idx, point) in base.points().iter().enumerate() {
        let lifted: Vec<Elem> = point
            .carrier()
            .iter()
            .map(|&i| reduct.embedding[i])
            .collect();
        let theta = match mode {
            StalkMode::Congruence => congruence_from_ideal(host, &Ideal::from_carrier(lifted)),
            StalkMode::Ideal => {
                let ideal = ideal_generated(host, &lifted, true);
                let theta = lattice_theta(host.lattice(), &ideal)
                    .map_err(|_| SheafError::IncompatibleCongruence { point: idx })?;
                if theta.check_compatible(host).is_err() {
                    return Err(SheafError::IncompatibleCongruence { point: idx });
                }
                theta
            }
        };
        let (algebra, projection) = quotient(host, &theta)
            .map_err(|_| SheafError::IncompatibleCongruence { point: idx })?;
        stalks.push(Stalk {
            algebra,
            projection,
            congruence: theta,
        });
    }
    let sigma = host
        .elements()
        .map(|a| stalks.iter().map(|s| s.projection.apply(a)).collect())
        .collect();
    let triple = SheafTriple {
        host: host.clone(),
        j: j.to_vec(),
        mode,
        base,
        base_embedding: reduct.embedding,
        stalks,
        sigma,
    };
    debug_assert!(sigma_laws_hold(&triple));
    Ok(triple)
}

/// `σ` commutes with meet, join and the operators pointwise; `π∘σ_a = id`
/// holds by representation (the value at `x` lives in the stalk over `x`).
fn sigma_laws_hold(s: &SheafTriple) -> bool {
    let l = s.host.lattice();
    s.host.elements().all(|a| {
        s.host.elements().all(|b| {
            (0..s.num_points()).all(|x| {
                let stalk = &s.stalks[x].algebra;
                s.sigma(l.meet(a, b), x) == stalk.lattice().meet(s.sigma(a, x), s.sigma(b, x))
                    && s.sigma(l.join(a, b), x)
                        == stalk.lattice().join(s.sigma(a, x), s.sigma(b, x))
                    && (0..s.host.num_operators())
                        .all(|i| s.sigma(s.host.op(i, a), x) == stalk.op(i, s.sigma(a, x)))
            })
        })
    })
}

/// The algebra `Γ` of all sections. On the finite discrete base every choice
/// function is continuous, so the carrier is the full product of stalks in
/// mixed-radix order (first point most significant).
#[derive(Debug, Clone)]
pub struct SectionAlgebra {
    pub algebra: Blo,
    sections: Vec<Vec<Elem>>,
}

impl SectionAlgebra {
    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn section(&self, i: usize) -> &[Elem] {
        &self.sections[i]
    }

    pub fn sections(&self) -> &[Vec<Elem>] {
        &self.sections
    }

    pub fn index_of(&self, values: &[Elem]) -> Option<usize> {
        self.sections.iter().position(|s| s == values)
    }

    /// A host element agreeing with the section at each point; this is the
    /// finite-discrete continuity certificate (stalk projections are
    /// surjective, so one always exists).
    pub fn continuity_certificate(&self, sheaf: &SheafTriple, section: usize) -> Vec<Elem> {
        self.sections[section]
            .iter()
            .enumerate()
            .map(|(x, &v)| {
                sheaf
                    .host()
                    .elements()
                    .find(|&a| sheaf.sigma(a, x) == v)
                    .expect("stalk projections are surjective")
            })
            .collect()
    }
}

/// Enumerate the sections and verify the pointwise operations make a valid
/// algebra. Fails when the product of stalk sizes exceeds `cap`.
pub fn sections(s: &SheafTriple, cap: usize) -> Result<SectionAlgebra, SheafError> {
    let sizes: Vec<usize> = s.stalks.iter().map(|st| st.algebra.size()).collect();
    let total: usize = sizes.iter().product::<usize>().max(1);
    if total > cap {
        return Err(SheafError::SectionSpaceTooLarge { size: total, cap });
    }
    let k = sizes.len();
    let decode = |i: usize| -> Vec<Elem> {
        let mut rest = i;
        let mut tuple = vec![0; k];
        for x in (0..k).rev() {
            tuple[x] = rest % sizes[x];
            rest /= sizes[x];
        }
        tuple
    };
    let sections_list: Vec<Vec<Elem>> = (0..total).map(decode).collect();
    if k == 0 {
        let algebra = Blo::new(
            FiniteLattice::chain(1),
            vec![vec![0]; s.host.num_operators()],
        )
        .expect("one-element algebra");
        return Ok(SectionAlgebra {
            algebra,
            sections: sections_list,
        });
    }
    let leq = sections_list
        .iter()
        .map(|a| {
            sections_list
                .iter()
                .map(|b| {
                    a.iter()
                        .zip(b)
                        .enumerate()
                        .all(|(x, (&va, &vb))| s.stalks[x].algebra.lattice().leq(va, vb))
                })
                .collect()
        })
        .collect();
    let lattice = FiniteLattice::from_leq_limited(leq, None, total.max(64))
        .expect("product of lattices is a lattice");
    let encode = |tuple: &[Elem]| -> usize {
        tuple
            .iter()
            .enumerate()
            .fold(0, |acc, (x, &v)| acc * sizes[x] + v)
    };
    let ops = (0..s.host.num_operators())
        .map(|i| {
            sections_list
                .iter()
                .map(|t| {
                    let image: Vec<Elem> = t
                        .iter()
                        .enumerate()
                        .map(|(x, &v)| s.stalks[x].algebra.op(i, v))
                        .collect();
                    encode(&image)
                })
                .collect()
        })
        .collect();
    let algebra = Blo::new(lattice, ops).expect("pointwise operations satisfy the axioms");
    Ok(SectionAlgebra {
        algebra,
        sections: sections_list,
    })
}

/// Diagnosis of the representation map `a ↦ σ_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaDiagnosis {
    pub hom: Homomorphism,
    pub injective: bool,
    pub surjective: bool,
    /// Independent route: the meet of all stalk congruences is the identity.
    /// Always equals `injective`; both are computed and compared.
    pub kernel_trivial: bool,
}

impl EtaDiagnosis {
    pub fn is_isomorphism(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Compute `η : host → Γ` and diagnose it. The map is always a
/// homomorphism; injectivity and surjectivity are genuinely open and are
/// tested, not assumed.
pub fn eta(s: &SheafTriple, gamma: &SectionAlgebra) -> EtaDiagnosis {
    let table: Vec<usize> = s
        .host
        .elements()
        .map(|a| {
            let values: Vec<Elem> = (0..s.num_points()).map(|x| s.sigma(a, x)).collect();
            gamma.index_of(&values).expect("σ_a is a section")
        })
        .collect();
    let hom = Homomorphism::new(s.host(), &gamma.algebra, table)
        .expect("pointwise projections form a homomorphism");
    let injective = hom.is_injective();
    let surjective = hom.is_surjective_onto(gamma.len());
    let kernel_trivial = {
        let n = s.host.size();
        let mut meet = Congruence::universal(n);
        for st in &s.stalks {
            meet = meet.meet(&st.congruence);
        }
        if s.stalks.is_empty() {
            meet = Congruence::universal(n);
        }
        meet.is_identity()
    };
    assert_eq!(
        injective, kernel_trivial,
        "kernel characterization of injectivity"
    );
    EtaDiagnosis {
        hom,
        injective,
        surjective,
        kernel_trivial,
    }
}

/// Stone duality as the degenerate case: over a Boolean lattice without
/// operators every stalk is the two-element algebra and `η` is an
/// isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoneReport {
    pub points: usize,
    pub all_stalks_two_element: bool,
    pub eta_isomorphism: bool,
}

pub fn stone_specialize(b: &FiniteLattice) -> Result<StoneReport, SheafError> {
    if !b.is_distributive() {
        return Err(SheafError::NotBoolean { witness: 0 });
    }
    if let Some(witness) = b.elements().find(|&a| b.complement(a).is_none()) {
        return Err(SheafError::NotBoolean { witness });
    }
    let host = Blo::from_lattice(b.clone()).expect("Boolean lattices are distributive");
    let sheaf = build_sheaf(&host, &[], StalkMode::Congruence)?;
    let gamma = sections(&sheaf, 1 << 20)?;
    let diag = eta(&sheaf, &gamma);
    Ok(StoneReport {
        points: sheaf.num_points(),
        all_stalks_two_element: sheaf.stalks().iter().all(|s| s.algebra.size() == 2),
        eta_isomorphism: diag.is_isomorphism(),
    })
}

/// The double-dual formulation over a Boolean zero-dimensional part:
/// `η` must be an isomorphism, naturally in the algebra. Naturality is
/// checked on the square `Γ(h^d) ∘ η = η ∘ h` for every endomorphism `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleDualReport {
    pub eta_isomorphism: bool,
    pub naturality_squares: usize,
    pub naturality_holds: bool,
}

pub fn hom_double_dual_check(a: &Blo, budget: &mut Budget) -> Result<DoubleDualReport, SheafError> {
    let zd = a.zd();
    if !zd.lattice.is_boolean() {
        return Err(SheafError::NotApplicable);
    }
    let sheaf = build_sheaf(a, &[], StalkMode::Congruence)?;
    let gamma = sections(&sheaf, 1 << 20)?;
    let diag = eta(&sheaf, &gamma);

    let endos = enumerate_homomorphisms(a, a, budget).map_err(|_| SheafError::IllDefined {
        reason: "endomorphism budget",
        point: 0,
    })?;
    let mut squares = 0;
    let mut holds = true;
    for h in &endos {
        let dual = match dual_of_hom_sheaf(h, &sheaf, &sheaf) {
            Ok(d) => d,
            Err(_) => continue, // non-dualizable endo: outside the natural square
        };
        let gh = gamma_of_morphism(&dual, &sheaf, &sheaf, &gamma, &gamma);
        if let Ok(gh) = gh {
            squares += 1;
            for x in a.elements() {
                if gh.apply(diag.hom.apply(x)) != diag.hom.apply(h.apply(x)) {
                    holds = false;
                }
            }
        }
    }
    Ok(DoubleDualReport {
        eta_isomorphism: diag.is_isomorphism(),
        naturality_squares: squares,
        naturality_holds: holds,
    })
}

/// Report for the correspondence between the regular ideals of the section
/// algebra and the open sets of the base (finite discrete case: every point
/// set is open). An ideal of `Γ` is regular here exactly when it is a fixed
/// point of `J ↦ J[U[J]]`; these are the ideals `{σ : [σ] ⊆ U}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularIdealOpenReport {
    pub opens: usize,
    pub regular_ideals: usize,
    /// `U[J[U]] = U` for every open set.
    pub mutually_inverse: bool,
    /// `U ⊆ U' ⟺ J[U] ⊆ J[U']`.
    pub order_isomorphism: bool,
    /// Each `J[U]` is an operator-closed ideal of `Γ`.
    pub images_are_ideals: bool,
    /// The fixed-point ideals are exactly the images `J[U]`.
    pub fixed_points_match: bool,
}

impl RegularIdealOpenReport {
    pub fn bijection_holds(&self) -> bool {
        self.opens == self.regular_ideals
            && self.mutually_inverse
            && self.order_isomorphism
            && self.images_are_ideals
            && self.fixed_points_match
    }
}

pub fn regular_ideal_open_iso(s: &SheafTriple, gamma: &SectionAlgebra) -> RegularIdealOpenReport {
    let pts = s.num_points();
    assert!(pts <= 32, "base too large for open-set enumeration");
    let support = |section: &[Elem]| -> u64 {
        section
            .iter()
            .enumerate()
            .filter(|&(x, &v)| v != s.stalks[x].algebra.lattice().bottom())
            .fold(0u64, |m, (x, _)| m | (1 << x))
    };
    let supports: Vec<u64> = gamma.sections().iter().map(|sec| support(sec)).collect();
    let j_of_u = |u: u64| -> Vec<usize> {
        (0..gamma.len())
            .filter(|&i| supports[i] & !u == 0)
            .collect()
    };
    let u_of_j = |j: &[usize]| -> u64 { j.iter().fold(0u64, |m, &i| m | supports[i]) };

    let opens: Vec<u64> = (0..(1u64 << pts)).collect();
    let images: Vec<Vec<usize>> = opens.iter().map(|&u| j_of_u(u)).collect();

    let mutually_inverse = opens.iter().zip(&images).all(|(&u, j)| u_of_j(j) == u);
    let order_isomorphism = opens.iter().enumerate().all(|(i, &u)| {
        opens.iter().enumerate().all(|(k, &v)| {
            let subset_u = u & !v == 0;
            let subset_j = images[i].iter().all(|x| images[k].contains(x));
            subset_u == subset_j
        })
    });
    let images_are_ideals = images.iter().all(|j| {
        let ideal = Ideal::from_carrier(j.to_vec());
        ideal.is_blo_ideal(&gamma.algebra)
    });
    // fixed points of J ↦ J[U[J]] over all ideals of Γ
    let all_ideals = enumerate_ideals(&gamma.algebra, true);
    let fixed: Vec<&Ideal> = all_ideals
        .iter()
        .filter(|i| {
            let u = u_of_j(i.carrier());
            j_of_u(u) == i.carrier()
        })
        .collect();
    let fixed_points_match = fixed.len()
        == images
            .iter()
            .collect::<std::collections::BTreeSet<_>>()
            .len()
        && fixed.iter().all(|i| images.contains(&i.carrier().to_vec()));

    RegularIdealOpenReport {
        opens: opens.len(),
        regular_ideals: fixed.len(),
        mutually_inverse,
        order_isomorphism,
        images_are_ideals,
        fixed_points_match,
    }
}

/// A sheaf morphism `(Y,G) → (X,L)`: a monotone base map `λ : Y → X` and a
/// stalk map `μ_y : L_{λ(y)} → G_y` over each point of `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafMorphism {
    pub lambda: Vec<usize>,
    pub mu: Vec<Homomorphism>,
}

impl SheafMorphism {
    pub fn identity(s: &SheafTriple) -> SheafMorphism {
        SheafMorphism {
            lambda: (0..s.num_points()).collect(),
            mu: s
                .stalks()
                .iter()
                .map(|st| Homomorphism::identity(st.algebra.size()))
                .collect(),
        }
    }

    /// Structural validity against a source `(Y,G) = from` and target
    /// `(X,L) = to`.
    pub fn verify(&self, from: &SheafTriple, to: &SheafTriple) -> Result<(), SheafError> {
        if self.lambda.len() != from.num_points() || self.mu.len() != from.num_points() {
            return Err(SheafError::IllDefined {
                reason: "length mismatch",
                point: 0,
            });
        }
        for y in 0..from.num_points() {
            for y2 in 0..from.num_points() {
                if from.base().leq(y, y2) && !to.base().leq(self.lambda[y], self.lambda[y2]) {
                    return Err(SheafError::IllDefined {
                        reason: "base map not monotone",
                        point: y,
                    });
                }
            }
            let source_stalk = &to.stalk(self.lambda[y]).algebra;
            let target_stalk = &from.stalk(y).algebra;
            Homomorphism::new(source_stalk, target_stalk, self.mu[y].table().to_vec()).map_err(
                |_| SheafError::IllDefined {
                    reason: "stalk map not a homomorphism",
                    point: y,
                },
            )?;
        }
        Ok(())
    }

    /// `self ∘ other` where `other : (T,D) → (Y,G)` and `self : (Y,G) → (X,L)`.
    pub fn compose_after(&self, other: &SheafMorphism) -> SheafMorphism {
        let lambda = other.lambda.iter().map(|&y| self.lambda[y]).collect();
        let mu = other
            .lambda
            .iter()
            .zip(&other.mu)
            .map(|(&y, nu)| self.mu[y].then(nu))
            .collect();
        SheafMorphism { lambda, mu }
    }
}

/// The dual of an algebra homomorphism `h : A → B`, as a sheaf morphism
/// `B^d → A^d`: the base map sends a point `y` to `h⁻¹(y) ∩ C` where `C` is
/// the carrier of `A`'s base reduct, and the stalk map sends `a/θ(λy)` to
/// `h(a)/θ(y)`. Both are verified; failures are reported, not repaired.
pub fn dual_of_hom_sheaf(
    h: &Homomorphism,
    sheaf_a: &SheafTriple,
    sheaf_b: &SheafTriple,
) -> Result<SheafMorphism, SheafError> {
    let a = sheaf_a.host();
    let mut lambda = Vec::with_capacity(sheaf_b.num_points());
    for y in 0..sheaf_b.num_points() {
        let carrier_b = sheaf_b.point_carrier_in_host(y);
        let pre: Vec<Elem> = a
            .elements()
            .filter(|&x| carrier_b.contains(&h.apply(x)))
            .filter(|&x| sheaf_a.base_embedding.contains(&x))
            .collect();
        // translate host elements back to reduct indices
        let in_reduct: Vec<Elem> = pre
            .iter()
            .map(|&x| {
                sheaf_a
                    .base_embedding
                    .iter()
                    .position(|&e| e == x)
                    .expect("filtered to the reduct carrier")
            })
            .collect();
        match sheaf_a.base().index_of(&Ideal::from_carrier(in_reduct)) {
            Some(i) => lambda.push(i),
            None => {
                return Err(SheafError::IllDefined {
                    reason: "preimage is not a base point",
                    point: y,
                })
            }
        }
    }
    let mut mu = Vec::with_capacity(sheaf_b.num_points());
    for y in 0..sheaf_b.num_points() {
        let x = lambda[y];
        let stalk_a = &sheaf_a.stalk(x);
        let stalk_b = &sheaf_b.stalk(y);
        let mut table = vec![usize::MAX; stalk_a.algebra.size()];
        for e in a.elements() {
            let s = stalk_a.projection.apply(e);
            let v = stalk_b.projection.apply(h.apply(e));
            if table[s] == usize::MAX {
                table[s] = v;
            } else if table[s] != v {
                return Err(SheafError::IllDefined {
                    reason: "stalk map not well defined",
                    point: y,
                });
            }
        }
        let hom = Homomorphism::new(&stalk_a.algebra, &stalk_b.algebra, table).map_err(|_| {
            SheafError::IllDefined {
                reason: "stalk map not a homomorphism",
                point: y,
            }
        })?;
        mu.push(hom);
    }
    let morphism = SheafMorphism { lambda, mu };
    morphism.verify(sheaf_b, sheaf_a)?;
    Ok(morphism)
}

/// The section-level homomorphism `Γ(X,L) → Γ(Y,G)` induced by a sheaf
/// morphism `(Y,G) → (X,L)`: `(Γ(H)σ)(y) = μ_y(σ(λ y))`.
pub fn gamma_of_morphism(
    h: &SheafMorphism,
    from: &SheafTriple,
    to: &SheafTriple,
    gamma_from: &SectionAlgebra,
    gamma_to: &SectionAlgebra,
) -> Result<Homomorphism, SheafError> {
    h.verify(from, to)?;
    let mut table = Vec::with_capacity(gamma_to.len());
    for sec in gamma_to.sections() {
        let image: Vec<Elem> = (0..from.num_points())
            .map(|y| h.mu[y].apply(sec[h.lambda[y]]))
            .collect();
        match gamma_from.index_of(&image) {
            Some(i) => table.push(i),
            None => {
                return Err(SheafError::IllDefined {
                    reason: "image is not a section",
                    point: 0,
                })
            }
        }
    }
    Homomorphism::new(&gamma_to.algebra, &gamma_from.algebra, table).map_err(|_| {
        SheafError::IllDefined {
            reason: "section map not a homomorphism",
            point: 0,
        }
    })
}

/// Monomorphism diagnostics for a sheaf morphism `(Y,G) → (X,L)`: the
/// structural conditions from the duality proof (injective base map,
/// surjective stalk maps) next to a bounded categorical test over one-point
/// probe sheaves with stalks of size at most `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoReport {
    pub lambda_injective: bool,
    pub mu_all_surjective: bool,
    pub structural_mono: bool,
    pub categorical_witness_found: bool,
    pub probe_bound: usize,
    pub verdicts_agree: bool,
}

pub fn is_mono_sheaf(
    h: &SheafMorphism,
    from: &SheafTriple,
    to: &SheafTriple,
    k: usize,
    budget: &mut Budget,
) -> Result<MonoReport, SearchError> {
    h.verify(from, to)
        .expect("morphism must be structurally valid");
    let lambda_injective = {
        let mut seen = std::collections::BTreeSet::new();
        h.lambda.iter().all(|&x| seen.insert(x))
    };
    let mu_all_surjective =
        (0..from.num_points()).all(|y| h.mu[y].is_surjective_onto(from.stalk(y).algebra.size()));
    let structural_mono = lambda_injective && mu_all_surjective;

    // probes: one-point sheaves with stalk D; a morphism (1,D) → (Y,G) is a
    // point y plus a homomorphism G_y → D, and composition with `h`
    // precomposes the stalk map with μ_y.
    let mut witness = false;
    let ops = from.host().num_operators();
    'outer: for size in 1..=k {
        for d in corpus::lattice_orders_of_size(size) {
            budget.spend(1)?;
            let id_ops: Vec<Vec<Elem>> = (0..ops).map(|_| (0..d.size()).collect()).collect();
            let dref = AlgebraRef {
                lattice: &d,
                operators: &id_ops,
            };
            // enumerate all probe morphisms (y, nu)
            let mut probes: Vec<(usize, Homomorphism)> = Vec::new();
            for y in 0..from.num_points() {
                let homs = enumerate_homomorphisms(&from.stalk(y).algebra, dref, budget)?;
                probes.extend(homs.into_iter().map(|nu| (y, nu)));
            }
            for (i, (y1, nu1)) in probes.iter().enumerate() {
                for (y2, nu2) in probes.iter().skip(i + 1) {
                    budget.spend(1)?;
                    let same_base = h.lambda[*y1] == h.lambda[*y2];
                    if !same_base {
                        continue;
                    }
                    let comp1 = h.mu[*y1].then(nu1);
                    let comp2 = h.mu[*y2].then(nu2);
                    if comp1 == comp2 {
                        witness = true;
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(MonoReport {
        lambda_injective,
        mu_all_surjective,
        structural_mono,
        categorical_witness_found: witness,
        probe_bound: k,
        verdicts_agree: structural_mono == !witness,
    })
}

/// Build the sheaf, section algebra and representation diagnosis in one go.
pub fn eta_diagnose(
    host: &Blo,
    cap: usize,
) -> Result<(SheafTriple, SectionAlgebra, EtaDiagnosis), SheafError> {
    let sheaf = build_sheaf(host, &[], StalkMode::Congruence)?;
    let gamma = sections(&sheaf, cap)?;
    let diag = eta(&sheaf, &gamma);
    Ok((sheaf, gamma, diag))
}

/// Products of simple algebras have Boolean zero-dimensional parts and
/// factor stalks; convenience used by the demos and acceptance checks.
pub fn product_of(factors: &[&Blo]) -> Blo {
    blo_product(factors).expect("factors share a signature")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blo::zoo;

    fn plain(l: FiniteLattice) -> Blo {
        Blo::from_lattice(l).unwrap()
    }

    #[test]
    fn b4_sheaf_shape() {
        let host = plain(FiniteLattice::boolean(2));
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        assert_eq!(s.num_points(), 2);
        assert!(s.stalks().iter().all(|st| st.algebra.size() == 2));
        let gamma = sections(&s, 100).unwrap();
        assert_eq!(gamma.len(), 4);
        let diag = eta(&s, &gamma);
        assert!(diag.is_isomorphism());
    }

    #[test]
    fn c3_sheaf_is_the_counterexample() {
        let host = plain(FiniteLattice::chain(3));
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        assert_eq!(s.num_points(), 2);
        let mut sizes: Vec<usize> = s.stalks().iter().map(|st| st.algebra.size()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3]);
        let gamma = sections(&s, 100).unwrap();
        assert_eq!(gamma.len(), 6);
        let diag = eta(&s, &gamma);
        assert!(diag.injective);
        assert!(!diag.surjective);
    }

    #[test]
    fn simple_algebra_has_one_point_and_full_stalk() {
        let host = zoo::c3_simple();
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        assert_eq!(s.num_points(), 1);
        assert_eq!(s.stalk(0).algebra.size(), 3);
        let gamma = sections(&s, 100).unwrap();
        let diag = eta(&s, &gamma);
        assert!(diag.is_isomorphism());
    }

    #[test]
    fn ideal_mode_matches_congruence_mode_on_plain_lattices() {
        for l in [
            FiniteLattice::chain(3),
            FiniteLattice::boolean(2),
            FiniteLattice::chain(4),
        ] {
            let host = plain(l);
            let a = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
            let b = build_sheaf(&host, &[], StalkMode::Ideal).unwrap();
            for x in 0..a.num_points() {
                assert_eq!(a.stalk(x).congruence, b.stalk(x).congruence);
            }
        }
    }

    #[test]
    fn stone_specialization() {
        let r = stone_specialize(&FiniteLattice::boolean(2)).unwrap();
        assert_eq!(r.points, 2);
        assert!(r.all_stalks_two_element && r.eta_isomorphism);
        let r = stone_specialize(&FiniteLattice::chain(2)).unwrap();
        assert_eq!(r.points, 1);
        let r = stone_specialize(&FiniteLattice::boolean(3)).unwrap();
        assert_eq!(r.points, 3);
        assert!(r.eta_isomorphism);
        assert!(stone_specialize(&FiniteLattice::chain(3)).is_err());
    }

    #[test]
    fn double_dual_on_product_of_simples() {
        let f1 = zoo::c3_simple();
        let f2 = zoo::b4_simple();
        let prod = product_of(&[&f1, &f2]);
        let zd = prod.zd();
        assert!(zd.lattice.is_boolean());
        let mut budget = Budget::default();
        let r = hom_double_dual_check(&prod, &mut budget).unwrap();
        assert!(r.eta_isomorphism);
        assert!(r.naturality_holds);
        // C3 has non-Boolean zero-dimensional part
        let c3 = plain(FiniteLattice::chain(3));
        assert!(matches!(
            hom_double_dual_check(&c3, &mut budget),
            Err(SheafError::NotApplicable)
        ));
    }

    #[test]
    fn regular_ideals_match_opens() {
        // one-point base
        let host = zoo::c3_simple();
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        let gamma = sections(&s, 100).unwrap();
        let r = regular_ideal_open_iso(&s, &gamma);
        assert_eq!(r.opens, 2);
        assert!(r.bijection_holds());
        // B4: four opens, four regular ideals
        let host = plain(FiniteLattice::boolean(2));
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        let gamma = sections(&s, 100).unwrap();
        let r = regular_ideal_open_iso(&s, &gamma);
        assert_eq!((r.opens, r.regular_ideals), (4, 4));
        assert!(r.bijection_holds());
        // C3: 6-element section algebra, still a bijection with 4 opens
        let host = plain(FiniteLattice::chain(3));
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        let gamma = sections(&s, 100).unwrap();
        let r = regular_ideal_open_iso(&s, &gamma);
        assert_eq!((r.opens, r.regular_ideals), (4, 4));
        assert!(r.bijection_holds());
    }

    #[test]
    fn dual_of_identity_is_identity_morphism() {
        let host = plain(FiniteLattice::boolean(2));
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        let h = Homomorphism::identity(4);
        let d = dual_of_hom_sheaf(&h, &s, &s).unwrap();
        assert_eq!(d, SheafMorphism::identity(&s));
    }

    #[test]
    fn dual_of_b4_to_two_chain() {
        // h: B4 → 2 with a ↦ 1, b ↦ 0
        let b4 = plain(FiniteLattice::boolean(2));
        let two = plain(FiniteLattice::chain(2));
        let h = Homomorphism::new(&b4, &two, vec![0, 1, 0, 1]).unwrap();
        let sa = build_sheaf(&b4, &[], StalkMode::Congruence).unwrap();
        let sb = build_sheaf(&two, &[], StalkMode::Congruence).unwrap();
        let d = dual_of_hom_sheaf(&h, &sa, &sb).unwrap();
        assert_eq!(d.lambda.len(), 1);
        // the unique point of 2's spectrum maps to the prime ideal h⁻¹({0}) = {0, b}
        let target_point = sa.point_carrier_in_host(d.lambda[0]);
        assert_eq!(target_point, vec![0, 2]);
        // and the section-level map is a 4 → 2 surjection
        let ga = sections(&sa, 100).unwrap();
        let gb = sections(&sb, 100).unwrap();
        let gh = gamma_of_morphism(&d, &sb, &sa, &gb, &ga).unwrap();
        assert!(gh.is_surjective_onto(gb.len()));
    }

    #[test]
    fn dual_functor_law_on_sampled_pairs() {
        let b4 = plain(FiniteLattice::boolean(2));
        let two = plain(FiniteLattice::chain(2));
        let mut budget = Budget::default();
        let sa = build_sheaf(&b4, &[], StalkMode::Congruence).unwrap();
        let sb = build_sheaf(&two, &[], StalkMode::Congruence).unwrap();
        let homs_ab = enumerate_homomorphisms(&b4, &two, &mut budget).unwrap();
        let homs_bb = enumerate_homomorphisms(&two, &two, &mut budget).unwrap();
        for h in &homs_ab {
            for g in &homs_bb {
                let gh = h.then(g);
                let d_gh = dual_of_hom_sheaf(&gh, &sa, &sb).unwrap();
                let d_h = dual_of_hom_sheaf(h, &sa, &sb).unwrap();
                let d_g = dual_of_hom_sheaf(g, &sb, &sb).unwrap();
                // (g∘h)^d = h^d ∘ g^d as morphisms B^d → A^d
                assert_eq!(d_gh, d_h.compose_after(&d_g));
            }
        }
    }

    #[test]
    fn gamma_of_identity_is_identity() {
        let host = plain(FiniteLattice::chain(3));
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        let gamma = sections(&s, 100).unwrap();
        let id = SheafMorphism::identity(&s);
        let gh = gamma_of_morphism(&id, &s, &s, &gamma, &gamma).unwrap();
        assert_eq!(gh, Homomorphism::identity(gamma.len()));
    }

    #[test]
    fn mono_identity() {
        let host = plain(FiniteLattice::boolean(2));
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        let id = SheafMorphism::identity(&s);
        let mut budget = Budget::default();
        let r = is_mono_sheaf(&id, &s, &s, 3, &mut budget).unwrap();
        assert!(r.structural_mono && !r.categorical_witness_found && r.verdicts_agree);
    }

    #[test]
    fn mono_fails_on_collapsed_base() {
        // collapse B4's two points onto the unique point of 2-chain's sheaf
        let b4 = plain(FiniteLattice::boolean(2));
        let two = plain(FiniteLattice::chain(2));
        let from = build_sheaf(&b4, &[], StalkMode::Congruence).unwrap();
        let to = build_sheaf(&two, &[], StalkMode::Congruence).unwrap();
        let m = SheafMorphism {
            lambda: vec![0, 0],
            mu: vec![Homomorphism::identity(2), Homomorphism::identity(2)],
        };
        m.verify(&from, &to).unwrap();
        let mut budget = Budget::default();
        let r = is_mono_sheaf(&m, &from, &to, 2, &mut budget).unwrap();
        assert!(!r.lambda_injective);
        assert!(r.categorical_witness_found);
        assert!(r.verdicts_agree);
    }

    #[test]
    fn mono_fails_on_non_surjective_stalk_map() {
        // probe (1, C3-stalk) → (1, C2-stalk): identity base, bounds-only stalk map
        let big = zoo::c3_simple();
        let small = plain(FiniteLattice::chain(2));
        let from = build_sheaf(&big, &[], StalkMode::Congruence).unwrap();
        let to = build_sheaf(&small, &[], StalkMode::Congruence).unwrap();
        let mu =
            Homomorphism::new(&to.stalk(0).algebra, &from.stalk(0).algebra, vec![0, 2]).unwrap();
        let m = SheafMorphism {
            lambda: vec![0],
            mu: vec![mu],
        };
        m.verify(&from, &to).unwrap();
        let mut budget = Budget::default();
        let r = is_mono_sheaf(&m, &from, &to, 3, &mut budget).unwrap();
        assert!(r.lambda_injective);
        assert!(!r.mu_all_surjective);
        assert!(!r.structural_mono);
    }

    #[test]
    fn sections_cap_is_enforced() {
        let host = plain(FiniteLattice::chain(3));
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        assert!(matches!(
            sections(&s, 5),
            Err(SheafError::SectionSpaceTooLarge { size: 6, cap: 5 })
        ));
    }

    #[test]
    fn continuity_certificates_agree_pointwise() {
        let host = plain(FiniteLattice::chain(3));
        let s = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        let gamma = sections(&s, 100).unwrap();
        for i in 0..gamma.len() {
            let cert = gamma.continuity_certificate(&s, i);
            for (x, &a) in cert.iter().enumerate() {
                assert_eq!(s.sigma(a, x), gamma.section(i)[x]);
            }
        }
    }
}
