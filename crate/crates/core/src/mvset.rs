//! Many-valued forcing on a bounded cumulative hierarchy of names.
//!
//! A name is a finite map from names to algebra elements. Truth values of
//! membership, subset and equality follow the standard clauses, with the
//! finite suprema/infima of the algebra standing in for Σ and Π; the subset
//! clause exists in two modes:
//!
//! * `Standard`: `‖x ⊆ y‖ = inf_t (x(t) → ‖t ∈ y‖)` — the residuum form,
//!   under which `‖x = x‖ = 1` holds at every rank.
//! * `PaperLiteral`: `‖x ⊆ y‖ = inf_t (x(t) ⊗ (1 → ‖t ∈ y‖))` — the strong
//!   conjunction form, which breaks reflexivity on fuzzy singletons (over
//!   the three-valued chain, `x = {(∅̂, ½)}` gets `‖x = x‖ = 0`). The mode
//!   is kept so the failure can be reproduced exactly.
//!
//! Quantifiers range over a rank- and domain-bounded name universe, a
//! documented approximation of the unbounded hierarchy.

use crate::formula::{Formula, Var};
use crate::lattice::Elem;
use crate::mv::{enumerate_filters, MvAlgebra, MvFilter};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

/// A bounded-rank name: a finite map from names to truth values, kept
/// sorted and duplicate-free so structural equality is canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MvName {
    entries: Vec<(MvName, Elem)>,
}

impl MvName {
    pub fn empty() -> Self {
        MvName::default()
    }

    pub fn new(mut entries: Vec<(MvName, Elem)>) -> Self {
        entries.sort();
        entries.dedup_by(|a, b| a.0 == b.0);
        MvName { entries }
    }

    pub fn entries(&self) -> &[(MvName, Elem)] {
        &self.entries
    }

    pub fn domain(&self) -> impl Iterator<Item = &MvName> {
        self.entries.iter().map(|(t, _)| t)
    }

    pub fn value(&self, t: &MvName) -> Option<Elem> {
        self.entries.iter().find(|(s, _)| s == t).map(|&(_, v)| v)
    }

    pub fn rank(&self) -> usize {
        self.entries
            .iter()
            .map(|(t, _)| t.rank() + 1)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubsetMode {
    #[default]
    Standard,
    PaperLiteral,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MvSetError {
    #[error("name of rank {rank} exceeds the configured cap {cap}")]
    RankOverflow { rank: usize, cap: usize },
    #[error("name universe exceeds the budget of {budget} names (reached {reached})")]
    UniverseTooLarge { reached: usize, budget: usize },
    #[error("a quantifier needs a name universe but none was supplied")]
    MissingUniverse,
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("L-set condition {condition} fails at {witness:?}")]
    LSetInvariant {
        condition: &'static str,
        witness: (usize, usize, usize),
    },
}

/// Default cap on name rank accepted by the evaluator.
pub const DEFAULT_RANK_CAP: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Atom {
    Membership,
    Subset,
    Equality,
}

/// Memoizing truth-value evaluator over a fixed algebra and subset mode.
pub struct Evaluator<'a> {
    alg: &'a MvAlgebra,
    mode: SubsetMode,
    rank_cap: usize,
    memo: HashMap<(Atom, MvName, MvName), Elem>,
}

impl<'a> Evaluator<'a> {
    pub fn new(alg: &'a MvAlgebra, mode: SubsetMode) -> Self {
        Evaluator {
            alg,
            mode,
            rank_cap: DEFAULT_RANK_CAP,
            memo: HashMap::new(),
        }
    }

    pub fn with_rank_cap(alg: &'a MvAlgebra, mode: SubsetMode, rank_cap: usize) -> Self {
        Evaluator {
            alg,
            mode,
            rank_cap,
            memo: HashMap::new(),
        }
    }

    pub fn algebra(&self) -> &MvAlgebra {
        self.alg
    }

    fn guard(&self, x: &MvName) -> Result<(), MvSetError> {
        let rank = x.rank();
        if rank > self.rank_cap {
            return Err(MvSetError::RankOverflow {
                rank,
                cap: self.rank_cap,
            });
        }
        Ok(())
    }

    /// `‖x ∈ y‖ = sup_{t ∈ dom y} (‖x = t‖ ⊗ y(t))`; empty sup is 0.
    pub fn membership(&mut self, x: &MvName, y: &MvName) -> Result<Elem, MvSetError> {
        self.guard(x)?;
        self.guard(y)?;
        if let Some(&v) = self.memo.get(&(Atom::Membership, x.clone(), y.clone())) {
            return Ok(v);
        }
        let mut acc = self.alg.zero();
        for (t, val) in y.entries.clone() {
            let eq = self.equality(x, &t)?;
            acc = self.alg.join(acc, self.alg.otimes(eq, val));
        }
        self.memo
            .insert((Atom::Membership, x.clone(), y.clone()), acc);
        Ok(acc)
    }

    /// Subset per the active mode; empty inf is 1.
    pub fn subset(&mut self, x: &MvName, y: &MvName) -> Result<Elem, MvSetError> {
        self.guard(x)?;
        self.guard(y)?;
        if let Some(&v) = self.memo.get(&(Atom::Subset, x.clone(), y.clone())) {
            return Ok(v);
        }
        let mut acc = self.alg.one();
        for (t, val) in x.entries.clone() {
            let mem = self.membership(&t, y)?;
            let clause = match self.mode {
                SubsetMode::Standard => self.alg.implies(val, mem),
                // verbatim form x(t) ⊗ (1 → ‖t∈y‖); 1→a = a
                SubsetMode::PaperLiteral => {
                    self.alg.otimes(val, self.alg.implies(self.alg.one(), mem))
                }
            };
            acc = self.alg.meet(acc, clause);
        }
        self.memo.insert((Atom::Subset, x.clone(), y.clone()), acc);
        Ok(acc)
    }

    /// `‖x = y‖ = ‖x ⊆ y‖ ⊗ ‖y ⊆ x‖`.
    pub fn equality(&mut self, x: &MvName, y: &MvName) -> Result<Elem, MvSetError> {
        if let Some(&v) = self.memo.get(&(Atom::Equality, x.clone(), y.clone())) {
            return Ok(v);
        }
        let fwd = self.subset(x, y)?;
        let bwd = self.subset(y, x)?;
        let v = self.alg.otimes(fwd, bwd);
        self.memo.insert((Atom::Equality, x.clone(), y.clone()), v);
        Ok(v)
    }

    /// Inductive truth value of a formula. Quantifiers take their range from
    /// `universe`; connectives use the algebra operations (`and` is the
    /// lattice meet, `tensor` the strong conjunction).
    pub fn eval(
        &mut self,
        f: &Formula,
        env: &BTreeMap<Var, MvName>,
        universe: &[MvName],
    ) -> Result<Elem, MvSetError> {
        let mut scratch = env.clone();
        self.eval_mut(f, &mut scratch, universe)
    }

    fn eval_mut(
        &mut self,
        f: &Formula,
        env: &mut BTreeMap<Var, MvName>,
        universe: &[MvName],
    ) -> Result<Elem, MvSetError> {
        match f {
            Formula::Mem(x, y) => {
                let x = env
                    .get(x)
                    .cloned()
                    .ok_or_else(|| MvSetError::UnboundVariable(x.clone()))?;
                let y = env
                    .get(y)
                    .cloned()
                    .ok_or_else(|| MvSetError::UnboundVariable(y.clone()))?;
                self.membership(&x, &y)
            }
            Formula::Eq(x, y) => {
                let x = env
                    .get(x)
                    .cloned()
                    .ok_or_else(|| MvSetError::UnboundVariable(x.clone()))?;
                let y = env
                    .get(y)
                    .cloned()
                    .ok_or_else(|| MvSetError::UnboundVariable(y.clone()))?;
                self.equality(&x, &y)
            }
            Formula::And(p, q) => {
                let a = self.eval_mut(p, env, universe)?;
                let b = self.eval_mut(q, env, universe)?;
                Ok(self.alg.meet(a, b))
            }
            Formula::Or(p, q) => {
                let a = self.eval_mut(p, env, universe)?;
                let b = self.eval_mut(q, env, universe)?;
                Ok(self.alg.join(a, b))
            }
            Formula::Imp(p, q) => {
                let a = self.eval_mut(p, env, universe)?;
                let b = self.eval_mut(q, env, universe)?;
                Ok(self.alg.implies(a, b))
            }
            Formula::Tensor(p, q) => {
                let a = self.eval_mut(p, env, universe)?;
                let b = self.eval_mut(q, env, universe)?;
                Ok(self.alg.otimes(a, b))
            }
            Formula::Not(p) => {
                let a = self.eval_mut(p, env, universe)?;
                Ok(self.alg.neg(a))
            }
            Formula::All(v, p) => {
                if universe.is_empty() {
                    return Err(MvSetError::MissingUniverse);
                }
                let saved = env.get(v).cloned();
                let mut acc = self.alg.one();
                for name in universe {
                    env.insert(v.clone(), name.clone());
                    acc = self.alg.meet(acc, self.eval_mut(p, env, universe)?);
                }
                restore(env, v, saved);
                Ok(acc)
            }
            Formula::Ex(v, p) => {
                if universe.is_empty() {
                    return Err(MvSetError::MissingUniverse);
                }
                let saved = env.get(v).cloned();
                let mut acc = self.alg.zero();
                for name in universe {
                    env.insert(v.clone(), name.clone());
                    acc = self.alg.join(acc, self.eval_mut(p, env, universe)?);
                }
                restore(env, v, saved);
                Ok(acc)
            }
        }
    }
}

fn restore(env: &mut BTreeMap<Var, MvName>, v: &Var, saved: Option<MvName>) {
    match saved {
        Some(old) => {
            env.insert(v.clone(), old);
        }
        None => {
            env.remove(v);
        }
    }
}

/// All names of rank at most `rank` with domains of size at most
/// `max_domain` drawn from the previous stage, values ranging over the whole
/// algebra. Sorted and duplicate-free.
pub fn name_universe(
    alg: &MvAlgebra,
    rank: usize,
    max_domain: usize,
    budget: usize,
) -> Result<Vec<MvName>, MvSetError> {
    let mut stage: BTreeSet<MvName> = BTreeSet::new();
    stage.insert(MvName::empty());
    for _ in 0..rank {
        let prev: Vec<MvName> = stage.iter().cloned().collect();
        let mut next = stage.clone();
        let mut doms: Vec<Vec<usize>> = vec![vec![]];
        for size in 1..=max_domain.min(prev.len()) {
            combinations(prev.len(), size, &mut |combo| doms.push(combo.to_vec()));
        }
        for dom in &doms {
            let mut values = vec![0usize; dom.len()];
            loop {
                let entries: Vec<(MvName, Elem)> = dom
                    .iter()
                    .zip(&values)
                    .map(|(&i, &v)| (prev[i].clone(), v))
                    .collect();
                next.insert(MvName::new(entries));
                if next.len() > budget {
                    return Err(MvSetError::UniverseTooLarge {
                        reached: next.len(),
                        budget,
                    });
                }
                // advance the value tuple
                let mut k = 0;
                loop {
                    if k == values.len() {
                        break;
                    }
                    values[k] += 1;
                    if values[k] < alg.size() {
                        break;
                    }
                    values[k] = 0;
                    k += 1;
                }
                if k == values.len() {
                    break;
                }
            }
            if dom.is_empty() {
                continue;
            }
        }
        stage = next;
    }
    Ok(stage.into_iter().collect())
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..n {
            acc.push(i);
            go(i + 1, n, k, acc, f);
            acc.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// A hereditarily finite set in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HfSet(pub BTreeSet<HfSet>);

impl HfSet {
    pub fn empty() -> Self {
        HfSet::default()
    }

    pub fn from_members(members: impl IntoIterator<Item = HfSet>) -> Self {
        HfSet(members.into_iter().collect())
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.contains(x)
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|m| m.rank() + 1).max().unwrap_or(0)
    }

    /// The von Neumann numeral `n`.
    pub fn numeral(n: usize) -> HfSet {
        let mut acc = HfSet::empty();
        for _ in 0..n {
            let mut next = acc.0.clone();
            next.insert(acc.clone());
            acc = HfSet(next);
        }
        acc
    }
}

/// The canonical name of a ground set: members' canonical names, all with
/// value 1.
pub fn canonical_name(s: &HfSet, alg: &MvAlgebra) -> MvName {
    MvName::new(
        s.0.iter()
            .map(|m| (canonical_name(m, alg), alg.one()))
            .collect(),
    )
}

/// Collapse a name through an ultrafilter: `x^G = {y^G : x(y) ∈ G}`.
pub fn interpret(x: &MvName, g: &MvFilter) -> HfSet {
    HfSet(
        x.entries()
            .iter()
            .filter(|&&(_, v)| g.contains(v))
            .map(|(y, _)| interpret(y, g))
            .collect(),
    )
}

/// Classical satisfaction over hereditarily finite sets, with quantifiers
/// ranging over `universe`. `tensor` coincides with `and`.
pub fn classical_satisfaction(
    f: &Formula,
    env: &BTreeMap<Var, HfSet>,
    universe: &[HfSet],
) -> Result<bool, MvSetError> {
    let lookup = |env: &BTreeMap<Var, HfSet>, v: &Var| -> Result<HfSet, MvSetError> {
        env.get(v)
            .cloned()
            .ok_or_else(|| MvSetError::UnboundVariable(v.clone()))
    };
    Ok(match f {
        Formula::Mem(x, y) => lookup(env, y)?.contains(&lookup(env, x)?),
        Formula::Eq(x, y) => lookup(env, x)? == lookup(env, y)?,
        Formula::And(p, q) | Formula::Tensor(p, q) => {
            classical_satisfaction(p, env, universe)? && classical_satisfaction(q, env, universe)?
        }
        Formula::Or(p, q) => {
            classical_satisfaction(p, env, universe)? || classical_satisfaction(q, env, universe)?
        }
        Formula::Imp(p, q) => {
            !classical_satisfaction(p, env, universe)? || classical_satisfaction(q, env, universe)?
        }
        Formula::Not(p) => !classical_satisfaction(p, env, universe)?,
        Formula::All(v, p) => {
            let mut ok = true;
            for s in universe {
                let mut env2 = env.clone();
                env2.insert(v.clone(), s.clone());
                ok &= classical_satisfaction(p, &env2, universe)?;
            }
            ok
        }
        Formula::Ex(v, p) => {
            let mut ok = false;
            for s in universe {
                let mut env2 = env.clone();
                env2.insert(v.clone(), s.clone());
                ok |= classical_satisfaction(p, &env2, universe)?;
            }
            ok
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseCheck {
    pub holds: bool,
    pub counterexample: Option<(MvName, MvName)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericReport {
    /// `x^G ∈ y^G ⟺ ‖x ∈ y‖ ∈ G` over all pairs.
    pub membership: ClauseCheck,
    /// `x^G = y^G ⟺ ‖x = y‖ ∈ G` over all pairs.
    pub equality: ClauseCheck,
    /// Per closed formula: `M[G] ⊨ φ ⟺ ‖φ‖ ∈ G`.
    pub formulas: Vec<(String, bool)>,
}

impl GenericReport {
    pub fn all_hold(&self) -> bool {
        self.membership.holds && self.equality.holds && self.formulas.iter().all(|(_, b)| *b)
    }
}

/// Exhaustively compare truth values against the generic collapse for one
/// ultrafilter. Expected to hold over Boolean algebras in standard mode;
/// over proper MV-algebras the result is a recorded finding either way.
pub fn check_generic_theorems(
    alg: &MvAlgebra,
    names: &[MvName],
    g: &MvFilter,
    suite: &[Formula],
    mode: SubsetMode,
) -> Result<GenericReport, MvSetError> {
    let mut ev = Evaluator::new(alg, mode);
    let interpreted: Vec<HfSet> = names.iter().map(|x| interpret(x, g)).collect();

    let mut membership = ClauseCheck {
        holds: true,
        counterexample: None,
    };
    let mut equality = ClauseCheck {
        holds: true,
        counterexample: None,
    };
    for (i, x) in names.iter().enumerate() {
        for (j, y) in names.iter().enumerate() {
            let mem_truth = g.contains(ev.membership(x, y)?);
            if interpreted[j].contains(&interpreted[i]) != mem_truth && membership.holds {
                membership = ClauseCheck {
                    holds: false,
                    counterexample: Some((x.clone(), y.clone())),
                };
            }
            let eq_truth = g.contains(ev.equality(x, y)?);
            if (interpreted[i] == interpreted[j]) != eq_truth && equality.holds {
                equality = ClauseCheck {
                    holds: false,
                    counterexample: Some((x.clone(), y.clone())),
                };
            }
        }
    }

    let mut universe_sets: Vec<HfSet> = interpreted.clone();
    universe_sets.sort();
    universe_sets.dedup();
    let mut formulas = Vec::new();
    for f in suite {
        if !f.free_vars().is_empty() {
            continue; // the formula-level clause is for sentences
        }
        let value = ev.eval(f, &BTreeMap::new(), names)?;
        let classical = classical_satisfaction(f, &BTreeMap::new(), &universe_sets)?;
        formulas.push((f.to_string(), classical == g.contains(value)));
    }
    Ok(GenericReport {
        membership,
        equality,
        formulas,
    })
}

/// The forcing relation: `p ⊩ φ` iff every ultrafilter containing `p`
/// satisfies `φ` after collapse. Enumerates the finitely many ultrafilters.
pub fn forces(
    alg: &MvAlgebra,
    p: Elem,
    f: &Formula,
    env: &BTreeMap<Var, MvName>,
    names: &[MvName],
) -> Result<bool, MvSetError> {
    for g in enumerate_filters(alg) {
        if !g.is_ultrafilter || !g.contains(p) {
            continue;
        }
        let env_g: BTreeMap<Var, HfSet> = env
            .iter()
            .map(|(v, x)| (v.clone(), interpret(x, &g)))
            .collect();
        let mut universe: Vec<HfSet> = names.iter().map(|x| interpret(x, &g)).collect();
        universe.sort();
        universe.dedup();
        if !classical_satisfaction(f, &env_g, &universe)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Values of the pairing / separation / power set / collection witnesses on
/// fixed small instances, each expected to be 1 where the construction is
/// sound; the values are reported rather than assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomWitnessReport {
    pub pairing: Elem,
    pub separation: Elem,
    pub powerset: Elem,
    pub collection: Elem,
    pub one: Elem,
}

impl AxiomWitnessReport {
    pub fn all_one(&self) -> bool {
        self.pairing == self.one
            && self.separation == self.one
            && self.powerset == self.one
            && self.collection == self.one
    }
}

/// Build the witness names from the classical constructions and evaluate
/// the claimed truth values at bounded rank.
pub fn axiom_witnesses(
    alg: &MvAlgebra,
    rank: usize,
    max_domain: usize,
    budget: usize,
    mode: SubsetMode,
) -> Result<AxiomWitnessReport, MvSetError> {
    let mut ev = Evaluator::new(alg, mode);
    let universe = name_universe(alg, rank, max_domain, budget)?;
    let one = alg.one();

    // pairing: c = {a, b} with values 1, here with a = b = ∅̂
    let a = canonical_name(&HfSet::empty(), alg);
    let b = canonical_name(&HfSet::empty(), alg);
    let c = MvName::new(vec![(a.clone(), one), (b.clone(), one)]);
    let pairing = {
        let ma = ev.membership(&a, &c)?;
        let mb = ev.membership(&b, &c)?;
        alg.meet(ma, mb)
    };

    // separation-style witness: X = canonical {∅, {∅}}, Y from ∪ dom(u)
    let x_sep = canonical_name(
        &HfSet::from_members([HfSet::empty(), HfSet::from_members([HfSet::empty()])]),
        alg,
    );
    let mut dom_y: Vec<MvName> = Vec::new();
    for u in x_sep.domain() {
        for t in u.domain() {
            if !dom_y.contains(t) {
                dom_y.push(t.clone());
            }
        }
    }
    let y_sep = MvName::new(dom_y.into_iter().map(|t| (t, one)).collect());
    let separation = ev.subset(&y_sep, &x_sep)?;

    // power set: X = {(∅̂, 1)}; dom(Y) = {u : dom(u) = dom(X), u(t) ≤ X(t)}
    let x_pow = MvName::new(vec![(canonical_name(&HfSet::empty(), alg), one)]);
    let mut dom_pow = Vec::new();
    for v in alg.elements() {
        dom_pow.push(MvName::new(vec![(canonical_name(&HfSet::empty(), alg), v)]));
    }
    let y_pow = MvName::new(dom_pow.into_iter().map(|u| (u, one)).collect());
    let powerset = {
        // ‖∀u (u ⊆ X → u ∈ Y)‖ over the bounded universe
        let mut acc = alg.one();
        for u in &universe {
            let sub = ev.subset(u, &x_pow)?;
            let mem = ev.membership(u, &y_pow)?;
            acc = alg.meet(acc, alg.implies(sub, mem));
        }
        acc
    };

    // collection: X = {(∅̂, 1)}, φ(u, v) = (eq u v); S_u realized by a
    // bounded sup over the universe
    let x_col = x_pow.clone();
    let phi = Formula::Eq("u".into(), "v".into());
    let mut s_union: Vec<MvName> = Vec::new();
    for u in x_col.domain() {
        let mut best_val = alg.zero();
        let mut best: Option<&MvName> = None;
        for v in &universe {
            let mut env = BTreeMap::new();
            env.insert("u".to_string(), u.clone());
            env.insert("v".to_string(), v.clone());
            let val = ev.eval(&phi, &env, &universe)?;
            if best.is_none() || !alg.leq(val, best_val) {
                best_val = alg.join(best_val, val);
                best = Some(v);
            }
        }
        if let Some(v) = best {
            if !s_union.contains(v) {
                s_union.push(v.clone());
            }
        }
    }
    let y_col = MvName::new(s_union.into_iter().map(|v| (v, one)).collect());
    let collection = {
        // inf over u ∈ dom(X) of X(u) → (‖∃v φ‖ → ‖∃v∈Y φ‖)
        let mut acc = alg.one();
        for (u, xu) in x_col.entries() {
            let mut unbounded = alg.zero();
            for v in &universe {
                let mut env = BTreeMap::new();
                env.insert("u".to_string(), u.clone());
                env.insert("v".to_string(), v.clone());
                unbounded = alg.join(unbounded, ev.eval(&phi, &env, &universe)?);
            }
            let mut bounded = alg.zero();
            for (v, yv) in y_col.entries() {
                let mut env = BTreeMap::new();
                env.insert("u".to_string(), u.clone());
                env.insert("v".to_string(), v.clone());
                bounded = alg.join(bounded, alg.otimes(*yv, ev.eval(&phi, &env, &universe)?));
            }
            acc = alg.meet(acc, alg.implies(*xu, alg.implies(unbounded, bounded)));
        }
        acc
    };

    Ok(AxiomWitnessReport {
        pairing,
        separation,
        powerset,
        collection,
        one,
    })
}

/// An L-valued set: a carrier with a similarity map into the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LSet {
    pub size: usize,
    pub alpha: Vec<Vec<Elem>>,
}

impl LSet {
    /// Validate the similarity conditions: boundedness by the diagonal,
    /// symmetry, and the triangle law
    /// `α(x,y) ⊗ (α(y,y) → α(y,z)) ≤ α(x,z)`.
    pub fn new(alpha: Vec<Vec<Elem>>, alg: &MvAlgebra) -> Result<Self, MvSetError> {
        let n = alpha.len();
        for x in 0..n {
            for y in 0..n {
                if alpha[x][y] != alpha[y][x] {
                    return Err(MvSetError::LSetInvariant {
                        condition: "symmetry",
                        witness: (x, y, 0),
                    });
                }
                if !alg.leq(alpha[x][y], alg.meet(alpha[x][x], alpha[y][y])) {
                    return Err(MvSetError::LSetInvariant {
                        condition: "diagonal bound",
                        witness: (x, y, 0),
                    });
                }
                for z in 0..n {
                    let lhs = alg.otimes(alpha[x][y], alg.implies(alpha[y][y], alpha[y][z]));
                    if !alg.leq(lhs, alpha[x][z]) {
                        return Err(MvSetError::LSetInvariant {
                            condition: "triangle",
                            witness: (x, y, z),
                        });
                    }
                }
            }
        }
        Ok(LSet { size: n, alpha })
    }
}

/// `ū = (dom u, δ_u)` with `δ_u(x, y) = ‖x ∈ u ∧ x = y‖`.
pub fn name_to_lset(u: &MvName, alg: &MvAlgebra, mode: SubsetMode) -> Result<LSet, MvSetError> {
    let mut ev = Evaluator::new(alg, mode);
    let dom: Vec<&MvName> = u.domain().collect();
    let mut alpha = vec![vec![alg.zero(); dom.len()]; dom.len()];
    for (i, x) in dom.iter().enumerate() {
        for (j, y) in dom.iter().enumerate() {
            let mem = ev.membership(x, u)?;
            let eq = ev.equality(x, y)?;
            alpha[i][j] = alg.meet(mem, eq);
        }
    }
    LSet::new(alpha, alg)
}

/// `X*`: each carrier point becomes a name over crisp marker names (the
/// canonical numerals), with `ẋ(m_i) = α(x, z_i)`; then
/// `dom(X*) = {ẋ}` with `X*(ẋ) = α(x, x)`.
pub fn lset_to_name(x: &LSet, alg: &MvAlgebra) -> MvName {
    let markers: Vec<MvName> = (0..x.size)
        .map(|i| canonical_name(&HfSet::numeral(i), alg))
        .collect();
    let dotted: Vec<MvName> = (0..x.size)
        .map(|i| {
            MvName::new(
                markers
                    .iter()
                    .enumerate()
                    .map(|(j, m)| (m.clone(), x.alpha[i][j]))
                    .collect(),
            )
        })
        .collect();
    MvName::new(
        (0..x.size)
            .map(|i| (dotted[i].clone(), x.alpha[i][i]))
            .collect(),
    )
}

/// Round trip `LSet → name → LSet` and compare against the original through
/// the point map `x ↦ ẋ` (collisions between behaviourally equal points are
/// allowed; values must agree).
pub fn lset_roundtrip_isomorphic(
    x: &LSet,
    alg: &MvAlgebra,
    mode: SubsetMode,
) -> Result<bool, MvSetError> {
    let star = lset_to_name(x, alg);
    let back = name_to_lset(&star, alg, mode)?;
    // identify each original point with its image in dom(X*)
    let markers: Vec<MvName> = (0..x.size)
        .map(|i| canonical_name(&HfSet::numeral(i), alg))
        .collect();
    let dom: Vec<&MvName> = star.domain().collect();
    let image_of = |i: usize| -> Option<usize> {
        let dotted = MvName::new(
            markers
                .iter()
                .enumerate()
                .map(|(j, m)| (m.clone(), x.alpha[i][j]))
                .collect(),
        );
        dom.iter().position(|d| **d == dotted)
    };
    for i in 0..x.size {
        for j in 0..x.size {
            let (a, b) = match (image_of(i), image_of(j)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Ok(false),
            };
            if back.alpha[a][b] != x.alpha[i][j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FiniteLattice;

    fn l3() -> MvAlgebra {
        MvAlgebra::lukasiewicz(2)
    }

    fn two() -> MvAlgebra {
        MvAlgebra::lukasiewicz(1)
    }

    #[test]
    fn empty_domain_cases() {
        let alg = two();
        let mut ev = Evaluator::new(&alg, SubsetMode::Standard);
        let x = MvName::empty();
        let y = MvName::empty();
        assert_eq!(ev.membership(&x, &y).unwrap(), alg.zero());
        assert_eq!(ev.subset(&x, &y).unwrap(), alg.one());
    }

    #[test]
    fn paper_literal_reflexivity_failure() {
        let alg = l3();
        let half = 1;
        let x = MvName::new(vec![(canonical_name(&HfSet::empty(), &alg), half)]);
        let mut standard = Evaluator::new(&alg, SubsetMode::Standard);
        assert_eq!(standard.equality(&x, &x).unwrap(), alg.one());
        let mut literal = Evaluator::new(&alg, SubsetMode::PaperLiteral);
        assert_eq!(literal.subset(&x, &x).unwrap(), alg.zero()); // ½ ⊗ ½ = 0
        assert_eq!(literal.equality(&x, &x).unwrap(), alg.zero());
    }

    #[test]
    fn standard_equality_is_reflexive_symmetric_transitive() {
        let alg = l3();
        let universe = name_universe(&alg, 2, 1, 10_000).unwrap();
        let mut ev = Evaluator::new(&alg, SubsetMode::Standard);
        for x in &universe {
            assert_eq!(ev.equality(x, x).unwrap(), alg.one(), "‖{x:?} = itself‖");
        }
        for x in &universe {
            for y in &universe {
                let xy = ev.equality(x, y).unwrap();
                assert_eq!(xy, ev.equality(y, x).unwrap());
                for z in &universe {
                    let yz = ev.equality(y, z).unwrap();
                    let xz = ev.equality(x, z).unwrap();
                    assert!(alg.leq(alg.otimes(xy, yz), xz), "⊗-transitivity");
                }
            }
        }
    }

    #[test]
    fn universe_counts() {
        let alg = two();
        // rank ≤ 1, domains ≤ 1: ∅ plus {∅ ↦ v} for v in {0, 1}
        assert_eq!(name_universe(&alg, 1, 1, 1000).unwrap().len(), 3);
        // rank ≤ 2, domains ≤ 2 over the two-element algebra: 19 names
        assert_eq!(name_universe(&alg, 2, 2, 1000).unwrap().len(), 19);
        let b4 = MvAlgebra::from_boolean(&FiniteLattice::boolean(2)).unwrap();
        assert_eq!(name_universe(&b4, 2, 2, 1000).unwrap().len(), 181);
    }

    #[test]
    fn rank_cap_is_enforced() {
        let alg = two();
        let mut deep = MvName::empty();
        for _ in 0..3 {
            deep = MvName::new(vec![(deep, alg.one())]);
        }
        let mut ev = Evaluator::with_rank_cap(&alg, SubsetMode::Standard, 2);
        assert!(matches!(
            ev.membership(&deep, &deep),
            Err(MvSetError::RankOverflow { rank: 3, cap: 2 })
        ));
    }

    #[test]
    fn forcing_agrees_with_truth_value_membership_over_boolean() {
        // over a finite Boolean algebra: p ⊩ φ ⟺ p ≤ ‖φ‖ for sentences
        let b4 = MvAlgebra::from_boolean(&FiniteLattice::boolean(2)).unwrap();
        let universe = name_universe(&b4, 1, 1, 10_000).unwrap();
        let mut ev = Evaluator::new(&b4, SubsetMode::Standard);
        let suite = [
            "(all x (eq x x))",
            "(ex x (ex y (mem x y)))",
            "(all x (ex y (mem x y)))",
            "(ex x (all y (not (mem y x))))",
        ];
        for src in suite {
            let phi = crate::formula::parse_formula(src).unwrap();
            let value = ev.eval(&phi, &BTreeMap::new(), &universe).unwrap();
            for p in b4.elements() {
                let forced = forces(&b4, p, &phi, &BTreeMap::new(), &universe).unwrap();
                assert_eq!(forced, b4.leq(p, value), "{src} at condition {p}");
            }
        }
    }

    #[test]
    fn universe_budget() {
        let alg = l3();
        assert!(matches!(
            name_universe(&alg, 3, 3, 50),
            Err(MvSetError::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn canonical_names_interpret_back() {
        let alg = two();
        let g = enumerate_filters(&alg)
            .into_iter()
            .find(|f| f.is_ultrafilter)
            .unwrap();
        for s in [
            HfSet::empty(),
            HfSet::from_members([HfSet::empty()]),
            HfSet::numeral(3),
            HfSet::from_members([HfSet::numeral(2), HfSet::empty()]),
        ] {
            assert_eq!(interpret(&canonical_name(&s, &alg), &g), s);
        }
    }

    #[test]
    fn canonical_membership_matches_ground_truth() {
        let alg = two();
        let mut ev = Evaluator::new(&alg, SubsetMode::Standard);
        let sets = [
            HfSet::empty(),
            HfSet::numeral(1),
            HfSet::numeral(2),
            HfSet::numeral(3),
        ];
        for x in &sets {
            for y in &sets {
                let want = if y.contains(x) { alg.one() } else { alg.zero() };
                let got = ev
                    .membership(&canonical_name(x, &alg), &canonical_name(y, &alg))
                    .unwrap();
                assert_eq!(got, want, "{x:?} ∈ {y:?}");
            }
        }
    }

    #[test]
    fn interpretation_respects_filter_choice() {
        let b4 = MvAlgebra::from_boolean(&FiniteLattice::boolean(2)).unwrap();
        let a = 1; // an atom
        let x = MvName::new(vec![(canonical_name(&HfSet::empty(), &b4), a)]);
        let ultras: Vec<MvFilter> = enumerate_filters(&b4)
            .into_iter()
            .filter(|f| f.is_ultrafilter)
            .collect();
        let with_a = ultras.iter().find(|g| g.contains(a)).unwrap();
        let without_a = ultras.iter().find(|g| !g.contains(a)).unwrap();
        assert_eq!(interpret(&x, with_a), HfSet::from_members([HfSet::empty()]));
        assert_eq!(interpret(&x, without_a), HfSet::empty());
    }

    #[test]
    fn forcing_lemma_on_b4() {
        let b4 = MvAlgebra::from_boolean(&FiniteLattice::boolean(2)).unwrap();
        let universe = name_universe(&b4, 2, 1, 10_000).unwrap();
        let a = 1;
        let b = 2;
        let x = MvName::new(vec![(canonical_name(&HfSet::empty(), &b4), a)]);
        let mut env = BTreeMap::new();
        env.insert("e".to_string(), canonical_name(&HfSet::empty(), &b4));
        env.insert("x".to_string(), x);
        let phi = Formula::Mem("e".into(), "x".into());
        assert!(forces(&b4, a, &phi, &env, &universe).unwrap());
        assert!(!forces(&b4, b, &phi, &env, &universe).unwrap());
        // p = 1 forces reflexivity of the canonical name
        let refl = Formula::Eq("e".into(), "e".into());
        assert!(forces(&b4, b4.one(), &refl, &env, &universe).unwrap());
    }

    #[test]
    fn axiom_witness_values() {
        let alg = l3();
        let r = axiom_witnesses(&alg, 2, 2, 100_000, SubsetMode::Standard).unwrap();
        assert_eq!(r.pairing, alg.one());
        assert_eq!(r.separation, alg.one());
        assert_eq!(r.collection, alg.one());
        let two_alg = two();
        let r = axiom_witnesses(&two_alg, 2, 2, 100_000, SubsetMode::Standard).unwrap();
        assert!(r.all_one());
    }

    #[test]
    fn lset_roundtrip_on_examples() {
        let alg = two();
        // empty L-set ↔ empty name
        let empty = LSet::new(vec![], &alg).unwrap();
        assert_eq!(lset_to_name(&empty, &alg), MvName::empty());
        assert!(lset_roundtrip_isomorphic(&empty, &alg, SubsetMode::Standard).unwrap());
        // one crisp point
        let u = MvName::new(vec![(canonical_name(&HfSet::empty(), &alg), alg.one())]);
        let l = name_to_lset(&u, &alg, SubsetMode::Standard).unwrap();
        assert_eq!(l.size, 1);
        assert_eq!(l.alpha[0][0], alg.one());
        assert!(lset_roundtrip_isomorphic(&l, &alg, SubsetMode::Standard).unwrap());
        // a fuzzy point over Ł₃
        let alg3 = l3();
        let fuzzy = LSet::new(vec![vec![1]], &alg3).unwrap();
        assert!(lset_roundtrip_isomorphic(&fuzzy, &alg3, SubsetMode::Standard).unwrap());
    }

    #[test]
    fn rank2_name_roundtrip_over_b4() {
        let b4 = MvAlgebra::from_boolean(&FiniteLattice::boolean(2)).unwrap();
        let e = canonical_name(&HfSet::empty(), &b4);
        let inner = MvName::new(vec![(e.clone(), 3)]);
        let u = MvName::new(vec![(e, 1), (inner, 2)]);
        let l = name_to_lset(&u, &b4, SubsetMode::Standard).unwrap();
        assert_eq!(l.size, 2);
        assert!(lset_roundtrip_isomorphic(&l, &b4, SubsetMode::Standard).unwrap());
    }
}
