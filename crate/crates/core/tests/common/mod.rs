//! Shared test helpers: formula corpora, a model-set oracle for default
//! logic, and certificate mutators.
#![allow(dead_code)]

use std::collections::BTreeSet;

use luk3::antisequent::{RefutationStep, RefutationTree};
use luk3::engine::{BraveProof, CandidateVerdict, Disposition, ExtensionOutcome, SkepticalProof};
use luk3::semantics::{enumerate_interpretations, eval, Interpretation, TruthValue};
use luk3::sequent::{ProofStep, ProofTree, Sequent3};
use luk3::syntax::{Connective, DefaultRule, DefaultTheory, Formula};
use rand::Rng;

pub fn f(s: &str) -> Formula {
    luk3::parse_formula(s).unwrap()
}

/// Every formula of depth at most `depth` over `atoms`.
pub fn formulas_up_to_depth(atoms: &[&str], depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = atoms.iter().map(|a| Formula::atom(a)).collect();
    for _ in 0..depth {
        let prev = all.clone();
        let mut next: Vec<Formula> = atoms.iter().map(|a| Formula::atom(a)).collect();
        for c in [Connective::Not, Connective::Cert, Connective::Poss] {
            next.extend(prev.iter().map(|x| Formula::apply(c, vec![x.clone()])));
        }
        for c in [Connective::Impl, Connective::And, Connective::Or] {
            for x in &prev {
                for y in &prev {
                    next.push(Formula::apply(c, vec![x.clone(), y.clone()]));
                }
            }
        }
        all = next;
    }
    all
}

pub fn random_formula<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    let c = Connective::ALL[rng.gen_range(0..6)];
    let args = (0..c.arity()).map(|_| random_formula(rng, atoms, depth - 1)).collect();
    Formula::apply(c, args)
}

pub fn random_sequent<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Sequent3 {
    let mut comp = || -> Vec<Formula> {
        let n = rng.gen_range(0..=2);
        (0..n).map(|_| random_formula(rng, atoms, depth)).collect()
    };
    let (a, b, c) = (comp(), comp(), comp());
    Sequent3::new(a, b, c)
}

/// Closures represented by their model sets over a fixed atom universe.
pub struct ModelOracle {
    interps: Vec<Interpretation>,
}

pub type Models = BTreeSet<usize>;

impl ModelOracle {
    pub fn new(atoms: &[&str]) -> Self {
        let set: BTreeSet<String> = atoms.iter().map(|a| a.to_string()).collect();
        ModelOracle { interps: enumerate_interpretations(&set).collect() }
    }

    pub fn models<'a>(&self, basis: impl IntoIterator<Item = &'a Formula>) -> Models {
        let basis: Vec<&Formula> = basis.into_iter().collect();
        (0..self.interps.len())
            .filter(|&k| basis.iter().all(|b| eval(b, &self.interps[k]).unwrap() == TruthValue::T))
            .collect()
    }

    pub fn holds(&self, models: &Models, f: &Formula) -> bool {
        models.iter().all(|&k| eval(f, &self.interps[k]).unwrap() == TruthValue::T)
    }

    /// Γ_T applied to the closed set with models `s`, as a model set.
    pub fn gamma(&self, t: &DefaultTheory, s: &Models) -> Models {
        let applicable: Vec<&DefaultRule> = t
            .defaults
            .iter()
            .filter(|d| {
                d.justifications.iter().all(|b| !self.holds(s, &Formula::not(b.clone())))
                    && !self.holds(s, &Formula::not(Formula::cert(d.consequent.clone())))
            })
            .collect();
        let mut k = self.models(&t.facts);
        let mut used = vec![false; applicable.len()];
        loop {
            let mut changed = false;
            for (n, d) in applicable.iter().enumerate() {
                if !used[n] && self.holds(&k, &d.prereq) {
                    used[n] = true;
                    changed = true;
                    let m = Formula::poss(d.consequent.clone());
                    k.retain(|&x| eval(&m, &self.interps[x]).unwrap() == TruthValue::T);
                }
            }
            if !changed {
                return k;
            }
        }
    }

    /// Distinct extension model sets, found by checking Γ_T(E) = E for the
    /// closure of every `W ∪ M(consequents of S)`.
    pub fn extensions(&self, t: &DefaultTheory) -> Vec<Models> {
        let n = t.defaults.len();
        let mut out: Vec<Models> = Vec::new();
        for mask in 0..1usize << n {
            let mut basis: Vec<Formula> = t.facts.iter().cloned().collect();
            for (i, d) in t.defaults.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    basis.push(Formula::poss(d.consequent.clone()));
                }
            }
            let e = self.models(&basis);
            if self.gamma(t, &e) == e && !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }
}

/// The four defaults of the family sweep.
pub fn family_defaults() -> Vec<DefaultRule> {
    ["a : b / b", "a : ~b / ~b", "b : b / b", "~b : a / a"].iter().map(|d| DefaultRule::parse(d).unwrap()).collect()
}

/// All 64 theories with W ⊆ {a, ~b} and D ⊆ the family defaults.
pub fn family_theories() -> Vec<DefaultTheory> {
    let facts = [f("a"), f("~b")];
    let defaults = family_defaults();
    let mut out = Vec::new();
    for wm in 0..4usize {
        for dm in 0..16usize {
            let w: Vec<Formula> = (0..2).filter(|i| wm >> i & 1 == 1).map(|i| facts[i].clone()).collect();
            let d: Vec<DefaultRule> = (0..4).filter(|i| dm >> i & 1 == 1).map(|i| defaults[i].clone()).collect();
            out.push(DefaultTheory::new(w, d));
        }
    }
    out
}

/// Query formulas for the sweep.
pub fn query_pool() -> Vec<Formula> {
    [
        "a", "b", "c", "~a", "~b", "M a", "M b", "M ~b", "L b", "~L b", "L a", "M b | M ~b", "a & M b", "b | ~b",
        "M a & M ~b", "~L ~b",
    ]
    .iter()
    .map(|s| f(s))
    .collect()
}

pub fn pick<R: Rng>(rng: &mut R, pool: &[Formula], max: usize) -> Vec<Formula> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect()
}

/// Node paths of a proof tree, root first.
pub fn proof_paths(t: &ProofTree) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for (k, c) in t.children.iter().enumerate() {
        for mut p in proof_paths(c) {
            p.insert(0, k);
            out.push(p);
        }
    }
    out
}

pub fn proof_node_mut<'a>(t: &'a mut ProofTree, path: &[usize]) -> &'a mut ProofTree {
    path.iter().fold(t, |node, &k| &mut node.children[k])
}

/// Single-node mutations of a proof tree at `path`.
pub fn proof_mutations(t: &ProofTree, path: &[usize]) -> Vec<ProofTree> {
    let mut out = Vec::new();

    let mut m = t.clone();
    proof_node_mut(&mut m, path).conclusion.component_mut(TruthValue::F).insert(Formula::atom("zz_fresh"));
    out.push(m);

    let mut m = t.clone();
    let node = proof_node_mut(&mut m, path);
    node.step = match &node.step {
        ProofStep::Axiom => ProofStep::Rule {
            connective: Connective::Not,
            position: TruthValue::F,
            principal: Formula::not(Formula::atom("zz_fresh")),
        },
        ProofStep::Rule { .. } => ProofStep::Axiom,
    };
    out.push(m);

    let mut m = t.clone();
    let node = proof_node_mut(&mut m, path);
    if let ProofStep::Rule { position, .. } = &mut node.step {
        *position = TruthValue::from_index((position.index() + 1) % 3);
        out.push(m);
    }

    let mut m = t.clone();
    let node = proof_node_mut(&mut m, path);
    if node.children.pop().is_some() {
        out.push(m);
    }
    out
}

/// Single-node mutations of a refutation at depth `depth`.
pub fn refutation_mutations(t: &RefutationTree, depth: usize) -> Vec<RefutationTree> {
    fn node_mut(t: &mut RefutationTree, depth: usize) -> &mut RefutationTree {
        let mut node = t;
        for _ in 0..depth {
            node = match &mut node.step {
                RefutationStep::Rule { premise, .. } => premise,
                RefutationStep::Leaf { .. } => panic!("depth beyond leaf"),
            };
        }
        node
    }
    let mut out = Vec::new();

    let mut m = t.clone();
    node_mut(&mut m, depth).conclusion.component_mut(TruthValue::T).insert(Formula::atom("zz_fresh"));
    out.push(m);

    let mut m = t.clone();
    let node = node_mut(&mut m, depth);
    let conclusion = node.conclusion.clone();
    match &mut node.step {
        RefutationStep::Leaf { witness } => {
            // give some atom the value of a component that contains it
            let hit = TruthValue::ALL.into_iter().find_map(|v| {
                conclusion.component(v).iter().next().map(|a| (a.clone(), v))
            });
            if let Some((Formula::Atom(name), v)) = hit {
                witness.set(name, v);
                out.push(m);
            }
        }
        RefutationStep::Rule { connective, position, tuple, .. } => {
            let bad = luk3::semantics::argument_tuples(connective.arity())
                .into_iter()
                .find(|w| luk3::semantics::truth_table(*connective, w) == *position);
            if let Some(bad) = bad {
                *tuple = bad;
                out.push(m);
            }
            let mut m2 = t.clone();
            let node = node_mut(&mut m2, depth);
            node.step = RefutationStep::Leaf { witness: Interpretation::new() };
            out.push(m2);
        }
    }
    out
}

pub fn refutation_depth(t: &RefutationTree) -> usize {
    t.node_count()
}

/// Single-step mutations of a brave certificate.
pub fn brave_mutations(p: &BraveProof) -> Vec<BraveProof> {
    let mut out = Vec::new();
    if !p.dispositions.is_empty() {
        let mut m = p.clone();
        m.dispositions.pop();
        out.push(m);
    }
    for k in 0..p.dispositions.len() {
        let mut m = p.clone();
        match &mut m.dispositions[k] {
            Disposition::Fired { grounding, .. } => {
                grounding.conclusion.component_mut(TruthValue::U).insert(Formula::atom("zz_fresh"));
            }
            Disposition::BlockedByJustification { index, .. } => *index += 100,
            Disposition::BlockedByPrerequisite { default } | Disposition::BlockedByCertainty { default } => {
                *default += 100
            }
        }
        out.push(m);
    }
    let mut m = p.clone();
    m.basis.insert(Formula::atom("zz_fresh"));
    out.push(m);
    if !p.sigma_proofs.is_empty() {
        let mut m = p.clone();
        m.sigma_proofs.pop();
        out.push(m);
    }
    if !p.theta_refutations.is_empty() {
        let mut m = p.clone();
        m.theta_refutations.pop();
        out.push(m);
    }
    out
}

/// Single-entry mutations of a skeptical certificate.
pub fn skeptical_mutations(p: &SkepticalProof) -> Vec<SkepticalProof> {
    let mut out = Vec::new();
    for k in 0..p.transcript.len() {
        let mut m = p.clone();
        m.transcript[k].verdict = match m.transcript[k].verdict {
            CandidateVerdict::Extension => CandidateVerdict::NotFixedPoint,
            _ => CandidateVerdict::Extension,
        };
        out.push(m);
    }
    for k in 0..p.entries.len() {
        let mut m = p.clone();
        m.entries.remove(k);
        out.push(m);

        let mut m = p.clone();
        match &mut m.entries[k].outcome {
            ExtensionOutcome::Covered { proof, .. } => {
                proof.conclusion.component_mut(TruthValue::F).insert(Formula::atom("zz_fresh"));
            }
            ExtensionOutcome::Excluded { constraint } => *constraint += 100,
        }
        out.push(m);

        let mut m = p.clone();
        m.entries[k].extension.basis.insert(Formula::atom("zz_fresh"));
        out.push(m);
    }
    out
}
