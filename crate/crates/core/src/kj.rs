//! Kripke-Joyal forcing over finite sites at bounded rank.
//!
//! Names mirror the sub-presheaf hierarchy: a name based at `I` is a
//! restriction-closed set of pairs `(J, b)` with `J ≤ I` and `b` a name at
//! `J` of smaller rank. The clause list:
//!
//! * `I ⊩ x ∈ y` iff `(I, x)` is an entry of `y`;
//! * `I ⊩ x = y` iff the names are literally equal (structural equality);
//! * `∧`, `∨` local; `→` and `¬` quantify over all `J ≤ I` with the
//!   environment restricted;
//! * `∀` ranges over all `J ≤ I` and all names at `J`; `∃` over names at `I`;
//! * `φ ⊗ ψ` (monoidal sites): some `J ≥ I` has `I⊗J ⊩ φ ∧ ψ` under the
//!   environment restricted along `I⊗J ≤ I` (integrality makes that legal).
//!   With tensor `∧` the clause collapses to `φ ∧ ψ` pointwise, and on the
//!   Łukasiewicz chain it is strictly weaker, discounting truth through the
//!   product.

use crate::budget::Budget;
use crate::formula::{Formula, Var};
use crate::mvset::HfSet;
use crate::site::FiniteSite;
use std::collections::BTreeMap;
use thiserror::Error;

/// A bounded-rank name over a site: a base point and a restriction-closed,
/// sorted entry set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KjName {
    base: usize,
    entries: Vec<(usize, KjName)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KjError {
    #[error("entry point {entry} is not below the base {base}")]
    EntryNotBelowBase { entry: usize, base: usize },
    #[error("entry set is not restriction closed at point {point}")]
    NotRestrictionClosed { point: usize },
    #[error("cannot restrict a name at {base} to the non-lower point {target}")]
    BadRestriction { base: usize, target: usize },
    #[error("name universe exceeds the budget: {reached} names at rank {rank}")]
    UniverseTooLarge { reached: usize, rank: usize },
    #[error("formula uses tensor but the site is not monoidal")]
    TensorUnavailable,
    #[error("environment name at point {base} lies outside the bounded universe")]
    NameOutsideUniverse { base: usize },
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
}

impl KjName {
    pub fn empty(base: usize) -> Self {
        KjName {
            base,
            entries: Vec::new(),
        }
    }

    /// Validate restriction closure against the site.
    pub fn new(
        site: &FiniteSite,
        base: usize,
        mut entries: Vec<(usize, KjName)>,
    ) -> Result<Self, KjError> {
        entries.sort();
        entries.dedup();
        for (j, b) in &entries {
            if !site.leq(*j, base) {
                return Err(KjError::EntryNotBelowBase { entry: *j, base });
            }
            if b.base != *j {
                return Err(KjError::EntryNotBelowBase {
                    entry: b.base,
                    base: *j,
                });
            }
        }
        let name = KjName { base, entries };
        for (j, b) in &name.entries {
            for k in site.down(*j) {
                let restricted = b.restrict(site, k)?;
                if !name.entries.contains(&(k, restricted)) {
                    return Err(KjError::NotRestrictionClosed { point: k });
                }
            }
        }
        Ok(name)
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn entries(&self) -> &[(usize, KjName)] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries
            .iter()
            .map(|(_, b)| b.rank() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Restriction along `target ≤ base`: keep the entries at points below
    /// `target`. Closure is preserved and the operation is functorial.
    pub fn restrict(&self, site: &FiniteSite, target: usize) -> Result<KjName, KjError> {
        if !site.leq(target, self.base) {
            return Err(KjError::BadRestriction {
                base: self.base,
                target,
            });
        }
        let entries = self
            .entries
            .iter()
            .filter(|(j, _)| site.leq(*j, target))
            .cloned()
            .collect();
        Ok(KjName {
            base: target,
            entries,
        })
    }

    /// On a one-point site a name is a hereditarily finite set.
    pub fn to_hf(&self) -> HfSet {
        HfSet(self.entries.iter().map(|(_, b)| b.to_hf()).collect())
    }
}

/// A set-valued presheaf on a site: a finite set over each point and a
/// restriction map along every pair `q ≤ p`, satisfying the identity and
/// composition laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    /// `sets[p]` is the size of the set over `p`.
    sets: Vec<usize>,
    /// `maps[p][q]` (for `q ≤ p`) sends indices over `p` to indices over `q`.
    maps: Vec<Vec<Option<Vec<usize>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresheafError {
    #[error("missing restriction map for {lower} ≤ {upper}")]
    MissingMap { lower: usize, upper: usize },
    #[error("restriction along {lower} ≤ {upper} is not a total map")]
    BadMap { lower: usize, upper: usize },
    #[error("identity law fails at point {0}")]
    Identity(usize),
    #[error("composition law fails along {0} ≤ {1} ≤ {2}")]
    Composition(usize, usize, usize),
}

impl Presheaf {
    /// Validate the functor laws over the site.
    pub fn new(
        site: &FiniteSite,
        sets: Vec<usize>,
        maps: Vec<Vec<Option<Vec<usize>>>>,
    ) -> Result<Self, PresheafError> {
        for p in site.points() {
            for q in site.points() {
                if !site.leq(q, p) {
                    continue;
                }
                let map = maps
                    .get(p)
                    .and_then(|row| row.get(q))
                    .and_then(|m| m.as_ref())
                    .ok_or(PresheafError::MissingMap { lower: q, upper: p })?;
                if map.len() != sets[p] || map.iter().any(|&v| v >= sets[q].max(1)) {
                    return Err(PresheafError::BadMap { lower: q, upper: p });
                }
                if sets[q] == 0 && sets[p] > 0 {
                    return Err(PresheafError::BadMap { lower: q, upper: p });
                }
            }
            let id = maps[p][p]
                .as_ref()
                .ok_or(PresheafError::MissingMap { lower: p, upper: p })?;
            if id.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(PresheafError::Identity(p));
            }
        }
        for p in site.points() {
            for q in site.points() {
                for r in site.points() {
                    if !(site.leq(r, q) && site.leq(q, p)) {
                        continue;
                    }
                    let pq = maps[p][q].as_ref().unwrap();
                    let qr = maps[q][r].as_ref().unwrap();
                    let pr = maps[p][r].as_ref().unwrap();
                    for x in 0..sets[p] {
                        if qr[pq[x]] != pr[x] {
                            return Err(PresheafError::Composition(r, q, p));
                        }
                    }
                }
            }
        }
        Ok(Presheaf { sets, maps })
    }

    pub fn set_size(&self, p: usize) -> usize {
        self.sets[p]
    }

    pub fn restrict_elem(&self, p: usize, q: usize, x: usize) -> Option<usize> {
        self.maps[p][q].as_ref().map(|m| m[x])
    }

    /// The Yoneda presheaf of a point: a one-element set over each `J ≤ I`
    /// and the empty set elsewhere.
    pub fn yoneda(site: &FiniteSite, i: usize) -> Presheaf {
        let sets: Vec<usize> = site.points().map(|j| usize::from(site.leq(j, i))).collect();
        let maps = site
            .points()
            .map(|p| {
                site.points()
                    .map(|q| site.leq(q, p).then(|| vec![0; sets[p]]))
                    .collect()
            })
            .collect();
        Presheaf::new(site, sets, maps).expect("the Yoneda presheaf satisfies the laws")
    }

    /// The bounded name universe as a presheaf: names over each point with
    /// restriction as the structure maps.
    pub fn of_universe(site: &FiniteSite, universe: &KjUniverse) -> Presheaf {
        let sets: Vec<usize> = universe.per_point.iter().map(|v| v.len()).collect();
        let maps = site
            .points()
            .map(|p| {
                site.points()
                    .map(|q| {
                        site.leq(q, p).then(|| {
                            universe.per_point[p]
                                .iter()
                                .map(|a| {
                                    let restricted = a.restrict(site, q).expect("q is below p");
                                    universe.per_point[q]
                                        .binary_search(&restricted)
                                        .expect("universes are restriction closed")
                                })
                                .collect()
                        })
                    })
                    .collect()
            })
            .collect();
        Presheaf::new(site, sets, maps).expect("restriction is functorial on the name universe")
    }
}

/// Names of rank at most `rank`, per point, in canonical order.
#[derive(Debug, Clone)]
pub struct KjUniverse {
    pub per_point: Vec<Vec<KjName>>,
    pub rank: usize,
}

/// Enumerate every restriction-closed entry set at each point, stratified
/// by rank. Candidate pairs are ordered so that each pair's forced sub-pairs
/// precede it, which lets the downset enumeration emit each closed set once.
pub fn names_upto(site: &FiniteSite, rank: usize, budget: usize) -> Result<KjUniverse, KjError> {
    let n = site.size();
    let mut per_point: Vec<Vec<KjName>> = (0..n).map(|i| vec![KjName::empty(i)]).collect();
    for r in 1..=rank {
        let mut next: Vec<Vec<KjName>> = Vec::with_capacity(n);
        for i in 0..n {
            // candidates (J, b) with J ≤ i, b a name at J of rank < r
            let mut pairs: Vec<(usize, KjName)> = Vec::new();
            for j in site.down(i) {
                for b in &per_point[j] {
                    pairs.push((j, b.clone()));
                }
            }
            // order by downset size so sub-pairs come first
            pairs.sort_by_key(|(j, b)| (site.down(*j).len(), *j, b.clone()));
            // forced sub-pairs of each candidate
            let mut children: Vec<Vec<usize>> = vec![Vec::new(); pairs.len()];
            for (idx, (j, b)) in pairs.iter().enumerate() {
                for k in site.down(*j) {
                    if k == *j {
                        continue;
                    }
                    let sub = (k, b.restrict(site, k)?);
                    let pos = pairs
                        .iter()
                        .position(|p| *p == sub)
                        .expect("sub-pair is a candidate");
                    children[idx].push(pos);
                }
            }
            let mut names_at_i: Vec<KjName> = Vec::new();
            let mut chosen = vec![false; pairs.len()];
            enumerate_closed(
                i,
                &pairs,
                &children,
                0,
                &mut chosen,
                &mut names_at_i,
                budget,
                r,
            )?;
            names_at_i.sort();
            names_at_i.dedup();
            next.push(names_at_i);
        }
        per_point = next;
    }
    Ok(KjUniverse { per_point, rank })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_closed(
    base: usize,
    pairs: &[(usize, KjName)],
    children: &[Vec<usize>],
    idx: usize,
    chosen: &mut Vec<bool>,
    out: &mut Vec<KjName>,
    budget: usize,
    rank: usize,
) -> Result<(), KjError> {
    if idx == pairs.len() {
        let entries: Vec<(usize, KjName)> = pairs
            .iter()
            .zip(chosen.iter())
            .filter(|(_, &c)| c)
            .map(|(p, _)| p.clone())
            .collect();
        out.push(KjName {
            base,
            entries: {
                let mut e = entries;
                e.sort();
                e
            },
        });
        if out.len() > budget {
            return Err(KjError::UniverseTooLarge {
                reached: out.len(),
                rank,
            });
        }
        return Ok(());
    }
    // exclude
    enumerate_closed(base, pairs, children, idx + 1, chosen, out, budget, rank)?;
    // include, when all forced sub-pairs are in
    if children[idx].iter().all(|&c| chosen[c]) {
        chosen[idx] = true;
        enumerate_closed(base, pairs, children, idx + 1, chosen, out, budget, rank)?;
        chosen[idx] = false;
    }
    Ok(())
}

pub type Env = BTreeMap<Var, KjName>;

/// Forcing evaluator holding a site and a bounded name universe.
///
/// The universe is indexed once at construction: every restriction of a
/// universe name and every entry set is stored as index pairs, so the
/// evaluation loops compare integers instead of cloning names.
pub struct KjForcing<'a> {
    site: &'a FiniteSite,
    universe: KjUniverse,
    down: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
    /// `down_pos[i][j]`: position of `j` within `down[i]`, when `j ≤ i`.
    down_pos: Vec<Vec<Option<usize>>>,
    /// `restrict_ix[i][k][d]`: index at point `down[i][d]` of the
    /// restriction of `universe.per_point[i][k]`.
    restrict_ix: Vec<Vec<Vec<usize>>>,
    /// `entry_ix[i][k]`: the entries of `universe.per_point[i][k]` as
    /// sorted `(point, index)` pairs.
    entry_ix: Vec<Vec<Vec<(usize, usize)>>>,
}

/// A name during evaluation: the point it is based at and its index there.
type NameIx = (usize, usize);

impl<'a> KjForcing<'a> {
    pub fn new(site: &'a FiniteSite, rank: usize, budget: usize) -> Result<Self, KjError> {
        let down: Vec<Vec<usize>> = site.points().map(|i| site.down(i)).collect();
        let up = site.points().map(|i| site.up(i)).collect();
        let down_pos: Vec<Vec<Option<usize>>> = site
            .points()
            .map(|i| {
                site.points()
                    .map(|j| down[i].iter().position(|&d| d == j))
                    .collect()
            })
            .collect();
        let universe = names_upto(site, rank, budget)?;
        let find = |pt: usize, name: &KjName| -> usize {
            universe.per_point[pt]
                .binary_search(name)
                .expect("universes are restriction closed")
        };
        let mut restrict_ix = Vec::with_capacity(site.size());
        let mut entry_ix = Vec::with_capacity(site.size());
        for i in site.points() {
            let mut r_point = Vec::with_capacity(universe.per_point[i].len());
            let mut e_point = Vec::with_capacity(universe.per_point[i].len());
            for name in &universe.per_point[i] {
                let restricted = down[i]
                    .iter()
                    .map(|&j| find(j, &name.restrict(site, j).expect("j is below i")))
                    .collect();
                r_point.push(restricted);
                let entries = name
                    .entries()
                    .iter()
                    .map(|(j, b)| (*j, find(*j, b)))
                    .collect();
                e_point.push(entries);
            }
            restrict_ix.push(r_point);
            entry_ix.push(e_point);
        }
        Ok(KjForcing {
            site,
            universe,
            down,
            up,
            down_pos,
            restrict_ix,
            entry_ix,
        })
    }

    pub fn site(&self) -> &FiniteSite {
        self.site
    }

    pub fn universe(&self) -> &KjUniverse {
        &self.universe
    }

    pub fn names_at(&self, point: usize) -> &[KjName] {
        &self.universe.per_point[point]
    }

    /// The forcing relation `point ⊩ φ` under `env`. Environment names may
    /// be based anywhere above `point` (they are restricted on lookup) and
    /// must live inside the bounded universe.
    pub fn forces(&self, point: usize, f: &Formula, env: &Env) -> Result<bool, KjError> {
        let mut base = Vec::with_capacity(env.len());
        for (v, name) in env {
            let ix = self.universe.per_point[name.base]
                .binary_search(name)
                .map_err(|_| KjError::NameOutsideUniverse { base: name.base })?;
            base.push((v, (name.base, ix)));
        }
        let mut bindings = Bindings {
            base,
            stack: Vec::new(),
        };
        self.forces_inner(point, f, &mut bindings)
    }

    /// Restrict a (point, index) name to `target`, which must lie below its
    /// base.
    fn restrict_ix(&self, (pt, ix): NameIx, target: usize) -> Result<usize, KjError> {
        if pt == target {
            return Ok(ix);
        }
        match self.down_pos[pt][target] {
            Some(d) => Ok(self.restrict_ix[pt][ix][d]),
            None => Err(KjError::BadRestriction { base: pt, target }),
        }
    }

    fn lookup(&self, env: &Bindings<'_, '_>, v: &Var, point: usize) -> Result<usize, KjError> {
        let name = env
            .get(v)
            .ok_or_else(|| KjError::UnboundVariable(v.clone()))?;
        self.restrict_ix(name, point)
    }

    fn forces_inner<'s>(
        &'s self,
        point: usize,
        f: &'s Formula,
        env: &mut Bindings<'_, 's>,
    ) -> Result<bool, KjError> {
        match f {
            Formula::Mem(x, y) => {
                let a = self.lookup(env, x, point)?;
                // only the entries of y at `point` matter, and restriction
                // does not change them; read the unrestricted entry table
                // (after confirming y is restrictable at all)
                let (pt_y, iy) = env
                    .get(y)
                    .ok_or_else(|| KjError::UnboundVariable(y.clone()))?;
                if !self.site.leq(point, pt_y) {
                    return Err(KjError::BadRestriction {
                        base: pt_y,
                        target: point,
                    });
                }
                Ok(self.entry_ix[pt_y][iy].binary_search(&(point, a)).is_ok())
            }
            Formula::Eq(x, y) => {
                let a = self.lookup(env, x, point)?;
                let b = self.lookup(env, y, point)?;
                Ok(a == b)
            }
            Formula::And(p, q) => {
                Ok(self.forces_inner(point, p, env)? && self.forces_inner(point, q, env)?)
            }
            Formula::Or(p, q) => {
                Ok(self.forces_inner(point, p, env)? || self.forces_inner(point, q, env)?)
            }
            Formula::Imp(p, q) => {
                for &j in &self.down[point] {
                    if self.forces_inner(j, p, env)? && !self.forces_inner(j, q, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Not(p) => {
                // φ → ⊥ with ⊥ never forced
                for &j in &self.down[point] {
                    if self.forces_inner(j, p, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::All(v, p) => {
                let mut result = true;
                env.push(v);
                'all: for &j in &self.down[point] {
                    for k in 0..self.universe.per_point[j].len() {
                        env.rebind((j, k));
                        if !self.forces_inner(j, p, env)? {
                            result = false;
                            break 'all;
                        }
                    }
                }
                env.pop();
                Ok(result)
            }
            Formula::Ex(v, p) => {
                let mut result = false;
                env.push(v);
                for k in 0..self.universe.per_point[point].len() {
                    env.rebind((point, k));
                    if self.forces_inner(point, p, env)? {
                        result = true;
                        break;
                    }
                }
                env.pop();
                Ok(result)
            }
            Formula::Tensor(p, q) => {
                if !self.site.has_tensor() {
                    return Err(KjError::TensorUnavailable);
                }
                for &j in &self.up[point] {
                    let m = self.site.tensor(point, j).expect("monoidal site");
                    if self.forces_inner(m, p, env)? && self.forces_inner(m, q, env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

/// Quantifier bindings layered over a borrowed environment: lookups walk
/// the stack innermost-first, so shadowing works and nothing is cloned.
struct Bindings<'e, 's> {
    base: Vec<(&'e Var, NameIx)>,
    stack: Vec<(&'s Var, Option<NameIx>)>,
}

impl<'e, 's> Bindings<'e, 's> {
    fn get(&self, v: &Var) -> Option<NameIx> {
        for (name, value) in self.stack.iter().rev() {
            if *name == v {
                return *value;
            }
        }
        self.base
            .iter()
            .find(|(name, _)| *name == v)
            .map(|&(_, ix)| ix)
    }

    fn push(&mut self, v: &'s Var) {
        self.stack.push((v, None));
    }

    fn rebind(&mut self, value: NameIx) {
        let last = self.stack.last_mut().expect("rebind under a push");
        last.1 = Some(value);
    }

    fn pop(&mut self) {
        self.stack.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistenceViolation {
    pub formula: String,
    pub point: usize,
    pub lower: usize,
    pub env: Vec<(Var, KjName)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistenceReport {
    pub checked: usize,
    pub violations: Vec<PersistenceViolation>,
}

impl PersistenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every point, every lower point, and every assignment of universe
/// names at the point to the free variables: forced formulas must stay
/// forced after restriction. Violations carry full witnesses. Runs on the
/// indexed universe, so environments are enumerated as index tuples.
pub fn persistence_check(
    forcing: &KjForcing,
    suite: &[Formula],
    budget: &mut Budget,
) -> Result<PersistenceReport, KjError> {
    let site = forcing.site();
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for f in suite {
        let vars = f.free_vars();
        for i in site.points() {
            let n = forcing.names_at(i).len();
            let mut tuple = vec![0usize; vars.len()];
            loop {
                if budget.spend(1).is_err() {
                    return Ok(PersistenceReport {
                        checked,
                        violations,
                    });
                }
                let base: Vec<(&Var, NameIx)> =
                    vars.iter().zip(&tuple).map(|(v, &k)| (v, (i, k))).collect();
                let mut bindings = Bindings {
                    base,
                    stack: Vec::new(),
                };
                if forcing.forces_inner(i, f, &mut bindings)? {
                    for &j in &forcing.down[i] {
                        checked += 1;
                        if !forcing.forces_inner(j, f, &mut bindings)? {
                            violations.push(PersistenceViolation {
                                formula: f.to_string(),
                                point: i,
                                lower: j,
                                env: vars
                                    .iter()
                                    .zip(&tuple)
                                    .map(|(v, &k)| (v.clone(), forcing.names_at(i)[k].clone()))
                                    .collect(),
                            });
                        }
                    }
                }
                // advance the environment odometer
                let mut pos = 0;
                while pos < tuple.len() {
                    tuple[pos] += 1;
                    if tuple[pos] < n {
                        break;
                    }
                    tuple[pos] = 0;
                    pos += 1;
                }
                if pos == tuple.len() {
                    break;
                }
            }
            if n == 0 {
                break;
            }
        }
    }
    Ok(PersistenceReport {
        checked,
        violations,
    })
}

/// Search for an excluded-middle failure: a point and a name `b` with
/// `I ⊮ (e ∈ b) ∨ ¬(e ∈ b)` where `e` is the empty name.
pub fn excluded_middle_witness(forcing: &KjForcing) -> Result<Option<(usize, KjName)>, KjError> {
    let phi = Formula::Or(
        Box::new(Formula::Mem("e".into(), "b".into())),
        Box::new(Formula::Not(Box::new(Formula::Mem("e".into(), "b".into())))),
    );
    for i in forcing.site().points() {
        for b in forcing.names_at(i) {
            let mut env = Env::new();
            env.insert("e".to_string(), KjName::empty(i));
            env.insert("b".to_string(), b.clone());
            if !forcing.forces(i, &phi, &env)? {
                return Ok(Some((i, b.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::lattice::FiniteLattice;
    use crate::mvset::classical_satisfaction;
    use crate::site::{build_site, heyting_adapter, lukasiewicz_site};

    fn one_point() -> FiniteSite {
        build_site(vec![vec![true]], None).unwrap()
    }

    fn two_chain() -> FiniteSite {
        build_site(vec![vec![true, true], vec![false, true]], None).unwrap()
    }

    #[test]
    fn rank_zero_names() {
        let s = two_chain();
        let u = names_upto(&s, 0, 1000).unwrap();
        assert_eq!(u.per_point[0], vec![KjName::empty(0)]);
        assert_eq!(u.per_point[1], vec![KjName::empty(1)]);
    }

    #[test]
    fn rank_one_counts() {
        let s = one_point();
        let u = names_upto(&s, 1, 1000).unwrap();
        assert_eq!(u.per_point[0].len(), 2);
        let s = two_chain();
        let u = names_upto(&s, 1, 1000).unwrap();
        // at the top: ∅, {(0,∅)}, {(1,∅),(0,∅)}; the set {(1,∅)} alone is
        // not restriction closed
        assert_eq!(u.per_point[1].len(), 3);
        assert_eq!(u.per_point[0].len(), 2);
    }

    #[test]
    fn rank_one_counts_match_downset_oracle() {
        // names of rank 1 at a point are the downward-closed subsets of its
        // principal downset
        for leq in [
            vec![vec![true, true], vec![false, true]],
            vec![
                vec![true, true, true, true],
                vec![false, true, false, true],
                vec![false, false, true, true],
                vec![false, false, false, true],
            ],
        ] {
            let s = build_site(leq, None).unwrap();
            let u = names_upto(&s, 1, 10_000).unwrap();
            for i in s.points() {
                let down = s.down(i);
                let mut downsets = 0u64;
                for mask in 0u64..(1 << down.len()) {
                    let has = |x: usize| mask & (1 << x) != 0;
                    let closed = (0..down.len()).all(|a| {
                        !has(a) || (0..down.len()).all(|b| !s.leq(down[b], down[a]) || has(b))
                    });
                    if closed {
                        downsets += 1;
                    }
                }
                assert_eq!(u.per_point[i].len() as u64, downsets, "point {i}");
            }
        }
    }

    #[test]
    fn restriction_is_functorial() {
        let leq = vec![
            vec![true, true, true],
            vec![false, true, true],
            vec![false, false, true],
        ];
        let s = build_site(leq, None).unwrap();
        let u = names_upto(&s, 2, 100_000).unwrap();
        for a in &u.per_point[2] {
            let via_middle = a.restrict(&s, 1).unwrap().restrict(&s, 0).unwrap();
            let direct = a.restrict(&s, 0).unwrap();
            assert_eq!(via_middle, direct);
            assert_eq!(a.restrict(&s, 2).unwrap(), *a);
        }
    }

    #[test]
    fn membership_and_persistence_example() {
        let s = two_chain();
        let f = KjForcing::new(&s, 1, 1000).unwrap();
        // b = {(0, ∅)} at the top
        let b = KjName::new(&s, 1, vec![(0, KjName::empty(0))]).unwrap();
        let mut env = Env::new();
        env.insert("a".to_string(), KjName::empty(1));
        env.insert("b".to_string(), b);
        let phi = parse_formula("(mem a b)").unwrap();
        assert!(!f.forces(1, &phi, &env).unwrap());
        assert!(f.forces(0, &phi, &env).unwrap());
    }

    #[test]
    fn one_point_forcing_matches_classical_satisfaction() {
        let s = one_point();
        let f = KjForcing::new(&s, 2, 10_000).unwrap();
        let names = f.names_at(0).to_vec();
        let hf: Vec<_> = names.iter().map(|n| n.to_hf()).collect();
        let suite = [
            "(eq x y)",
            "(mem x y)",
            "(and (mem x y) (eq x x))",
            "(or (mem x y) (not (mem x y)))",
            "(imp (mem x y) (mem x y))",
            "(all v (imp (mem v x) (mem v x)))",
            "(ex v (mem v y))",
            "(all v (all w (imp (and (mem v w) (mem w x)) (mem v w))))",
        ];
        for src in suite {
            let phi = parse_formula(src).unwrap();
            let vars = phi.free_vars();
            // all assignments of universe names to free variables
            let mut envs = vec![Env::new()];
            for v in &vars {
                let mut next = Vec::new();
                for env in &envs {
                    for a in &names {
                        let mut e2 = env.clone();
                        e2.insert(v.clone(), a.clone());
                        next.push(e2);
                    }
                }
                envs = next;
            }
            for env in envs {
                let forced = f.forces(0, &phi, &env).unwrap();
                let cenv: BTreeMap<String, HfSet> =
                    env.iter().map(|(k, v)| (k.clone(), v.to_hf())).collect();
                let classical = classical_satisfaction(&phi, &cenv, &hf).unwrap();
                assert_eq!(forced, classical, "{src} with {env:?}");
            }
        }
    }

    #[test]
    fn persistence_holds_on_small_sites() {
        let suite: Vec<Formula> = [
            "(mem x y)",
            "(eq x y)",
            "(and (mem x y) (mem x y))",
            "(imp (mem x y) (eq x y))",
            "(all v (imp (mem v y) (mem v y)))",
            "(ex v (mem v y))",
            "(not (mem x y))",
            "(or (mem x y) (eq x y))",
        ]
        .iter()
        .map(|s| parse_formula(s).unwrap())
        .collect();
        for leq in [
            vec![vec![true, true], vec![false, true]],
            vec![
                vec![true, true, true],
                vec![false, true, false],
                vec![false, false, true],
            ],
        ] {
            let s = build_site(leq, None).unwrap();
            let f = KjForcing::new(&s, 2, 100_000).unwrap();
            let mut budget = Budget::default();
            let report = persistence_check(&f, &suite, &mut budget).unwrap();
            assert!(report.holds(), "violations: {:?}", report.violations);
        }
    }

    #[test]
    fn tensor_on_meet_site_is_conjunction() {
        let h = FiniteLattice::chain(3);
        let site = heyting_adapter(&h); // 2-chain with ∧
        assert!(site.has_tensor());
        let f = KjForcing::new(&site, 2, 100_000).unwrap();
        let p = parse_formula("(mem x y)").unwrap();
        let tensor = Formula::Tensor(Box::new(p.clone()), Box::new(p.clone()));
        let conj = Formula::And(Box::new(p.clone()), Box::new(p));
        for i in site.points() {
            for x in f.names_at(i) {
                for y in f.names_at(i) {
                    let mut env = Env::new();
                    env.insert("x".to_string(), x.clone());
                    env.insert("y".to_string(), y.clone());
                    assert_eq!(
                        f.forces(i, &tensor, &env).unwrap(),
                        f.forces(i, &conj, &env).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn tensor_on_lukasiewicz_site_discounts_truth() {
        let site = lukasiewicz_site(2); // 0 < ½ < 1, ½⊗½ = 0
        let f = KjForcing::new(&site, 1, 10_000).unwrap();
        // the membership holds at 0 only
        let b = KjName::new(&site, 2, vec![(0, KjName::empty(0))]).unwrap();
        let mut env = Env::new();
        env.insert("a".to_string(), KjName::empty(2));
        env.insert("b".to_string(), b);
        let mem = parse_formula("(mem a b)").unwrap();
        let conj = Formula::And(Box::new(mem.clone()), Box::new(mem.clone()));
        let tens = Formula::Tensor(Box::new(mem.clone()), Box::new(mem.clone()));
        // at ½: the conjunction is not forced, the tensor is (via ½⊗½ = 0)
        assert!(!f.forces(1, &conj, &env).unwrap());
        assert!(f.forces(1, &tens, &env).unwrap());
        // φ∧ψ still implies φ⊗ψ (unit law)
        for i in site.points() {
            if f.forces(i, &conj, &env).unwrap() {
                assert!(f.forces(i, &tens, &env).unwrap());
            }
        }
    }

    #[test]
    fn tensor_errors_without_monoidal_structure() {
        let s = two_chain();
        let f = KjForcing::new(&s, 1, 1000).unwrap();
        let phi = Formula::Tensor(
            Box::new(Formula::Eq("x".into(), "x".into())),
            Box::new(Formula::Eq("x".into(), "x".into())),
        );
        let mut env = Env::new();
        env.insert("x".to_string(), KjName::empty(1));
        assert!(matches!(
            f.forces(1, &phi, &env),
            Err(KjError::TensorUnavailable)
        ));
    }

    #[test]
    fn excluded_middle_on_heyting_sites() {
        // 2-element Heyting algebra: one point, classical
        let f2 = heyting_adapter(&FiniteLattice::chain(2));
        let forcing = KjForcing::new(&f2, 1, 1000).unwrap();
        assert!(excluded_middle_witness(&forcing).unwrap().is_none());
        // 3-chain: the 2-point frame refutes excluded middle
        let f3 = heyting_adapter(&FiniteLattice::chain(3));
        let forcing = KjForcing::new(&f3, 1, 1000).unwrap();
        let witness = excluded_middle_witness(&forcing).unwrap();
        assert!(witness.is_some());
    }

    #[test]
    fn restriction_closure_is_validated() {
        let s = two_chain();
        // {(1, ∅)} misses the forced entry (0, ∅)
        assert!(matches!(
            KjName::new(&s, 1, vec![(1, KjName::empty(1))]),
            Err(KjError::NotRestrictionClosed { point: 0 })
        ));
    }

    #[test]
    fn yoneda_presheaf_shape() {
        let s = two_chain();
        let y_top = Presheaf::yoneda(&s, 1);
        assert_eq!(y_top.set_size(0), 1);
        assert_eq!(y_top.set_size(1), 1);
        let y_bot = Presheaf::yoneda(&s, 0);
        assert_eq!(y_bot.set_size(0), 1);
        assert_eq!(y_bot.set_size(1), 0);
    }

    #[test]
    fn name_universe_is_a_presheaf() {
        let leq = vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ];
        let s = build_site(leq, None).unwrap();
        let u = names_upto(&s, 2, 2_000_000).unwrap();
        // Presheaf::new re-validates identity and composition
        let p = Presheaf::of_universe(&s, &u);
        assert_eq!(p.set_size(3), u.per_point[3].len());
        // restriction of the empty name is the empty name
        let empty_ix = u.per_point[3].binary_search(&KjName::empty(3)).unwrap();
        let restricted = p.restrict_elem(3, 0, empty_ix).unwrap();
        assert_eq!(u.per_point[0][restricted], KjName::empty(0));
    }

    #[test]
    fn broken_presheaf_laws_are_rejected() {
        let s = two_chain();
        // non-identity self-map
        let maps = vec![
            vec![Some(vec![0, 1]), None],
            vec![Some(vec![0, 0]), Some(vec![1, 0])],
        ];
        assert!(matches!(
            Presheaf::new(&s, vec![2, 2], maps),
            Err(PresheafError::Identity(1))
        ));
    }

    #[test]
    fn universe_budget_trips() {
        let leq = vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ];
        let s = build_site(leq, None).unwrap();
        assert!(matches!(
            names_upto(&s, 3, 100),
            Err(KjError::UniverseTooLarge { .. })
        ));
    }
}
