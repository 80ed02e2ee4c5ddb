//! Independent certificate checking.
//!
//! Nothing here runs proof search. Sequent proofs are checked rule by rule
//! against the generated rule tables; refutations additionally have their
//! witness evaluated; default-logic certificates are replayed step by step,
//! and skeptical enumeration transcripts are re-derived with truth tables.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::antisequent::{apply_antirule, AntiSequent3, RefutationStep, RefutationTree};
use crate::engine::{
    blocking_formulas, possible_consequent, subsets_by_rank, BraveProof, CandidateVerdict, Disposition,
    ExtensionBasis, ExtensionOutcome, MembershipEvidence, Sign, SkepticalProof,
};
use crate::semantics::{truth_table, tt_entails, tt_sequent_true};
use crate::sequent::{instantiate, is_axiom, ProofStep, ProofTree, Sequent3};
use crate::syntax::{DefaultTheory, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {reason}")]
pub struct CheckError {
    pub location: String,
    pub reason: String,
}

fn fail<T>(location: &str, reason: impl Into<String>) -> Result<T, CheckError> {
    Err(CheckError { location: location.to_string(), reason: reason.into() })
}

/// Checks that `tree` is a closed derivation of `claim`.
pub fn check_proof(tree: &ProofTree, claim: &Sequent3) -> Result<(), CheckError> {
    check_proof_at(tree, claim, "root")
}

fn check_proof_at(tree: &ProofTree, claim: &Sequent3, loc: &str) -> Result<(), CheckError> {
    if &tree.conclusion != claim {
        return fail(loc, format!("conclusion {} does not match expected {}", tree.conclusion, claim));
    }
    match &tree.step {
        ProofStep::Axiom => {
            if !tree.children.is_empty() {
                return fail(loc, "axiom node has premises");
            }
            if !is_axiom(&tree.conclusion) {
                return fail(loc, format!("{} is not an axiom", tree.conclusion));
            }
            Ok(())
        }
        ProofStep::Rule { connective, position, principal } => {
            match principal.decompose() {
                Some((c, _)) if c == *connective => {}
                _ => return fail(loc, format!("principal {principal} does not have connective {}", connective.symbol())),
            }
            let Some(inst) = instantiate(claim, principal, *position) else {
                return fail(loc, format!("principal {principal} is not in component {}", position.index() + 1));
            };
            if inst.premises.len() != tree.children.len() {
                return fail(
                    loc,
                    format!("rule {} has {} premises, node has {}", inst.name, inst.premises.len(), tree.children.len()),
                );
            }
            for (k, (child, premise)) in tree.children.iter().zip(&inst.premises).enumerate() {
                check_proof_at(child, premise, &format!("{loc}.{k}"))?;
            }
            Ok(())
        }
    }
}

/// Checks that `tree` refutes `claim` and that its witness falsifies the
/// sequent reading of `claim`.
pub fn check_refutation(tree: &RefutationTree, claim: &AntiSequent3) -> Result<(), CheckError> {
    let mut node = tree;
    let mut expected = claim.clone();
    let mut depth = 0;
    loop {
        let loc = format!("step {depth}");
        if node.conclusion != expected {
            return fail(&loc, format!("conclusion {} does not match expected {}", node.conclusion, expected));
        }
        match &node.step {
            RefutationStep::Leaf { witness } => {
                if !node.conclusion.is_atomic() {
                    return fail(&loc, format!("leaf {} is not atomic", node.conclusion));
                }
                let seq = node.conclusion.as_sequent();
                for atom in seq.atoms() {
                    if witness.get(&atom).is_none() {
                        return fail(&loc, format!("witness does not assign '{atom}'"));
                    }
                }
                if tt_sequent_true(&seq, witness).unwrap_or(true) {
                    return fail(&loc, format!("witness {witness} satisfies {}", node.conclusion));
                }
                let full = witness.extended_to(&claim.atoms());
                if tt_sequent_true(&claim.as_sequent(), &full).unwrap_or(true) {
                    return fail("root", format!("witness {full} satisfies {claim}"));
                }
                return Ok(());
            }
            RefutationStep::Rule { connective, position, principal, tuple, premise } => {
                match principal.decompose() {
                    Some((c, _)) if c == *connective => {}
                    _ => return fail(&loc, format!("principal {principal} does not have connective {}", connective.symbol())),
                }
                if tuple.len() != connective.arity() {
                    return fail(&loc, "argument tuple has the wrong length");
                }
                if truth_table(*connective, tuple) == *position {
                    return fail(&loc, "argument tuple gives the principal its component's value");
                }
                let Some(next) = apply_antirule(&expected, principal, *position, tuple) else {
                    return fail(&loc, format!("principal {principal} is not in component {}", position.index() + 1));
                };
                expected = next;
                node = premise;
                depth += 1;
            }
        }
    }
}

/// Replays a brave certificate.
pub fn check_brave(proof: &BraveProof) -> Result<(), CheckError> {
    let q = &proof.query;
    let mut context = q.gamma.clone();
    let mut remaining: BTreeSet<usize> = (0..q.delta.len()).collect();
    let mut sigma = q.sigma.clone();
    let mut theta = q.theta.clone();
    for (k, d) in proof.dispositions.iter().enumerate() {
        let loc = format!("disposition {k}");
        let i = d.default_index();
        if !remaining.remove(&i) {
            return fail(&loc, format!("default {i} is unknown or already handled"));
        }
        let rule = &q.delta[i];
        match d {
            Disposition::Fired { grounding, .. } => {
                check_proof(grounding, &Sequent3::entailment(&context, &rule.prereq))
                    .map_err(|e| CheckError { location: format!("{loc} grounding {}", e.location), reason: e.reason })?;
                context.insert(possible_consequent(rule));
                theta.extend(blocking_formulas(rule));
            }
            Disposition::BlockedByPrerequisite { .. } => {
                theta.insert(rule.prereq.clone());
            }
            Disposition::BlockedByJustification { index, .. } => {
                let Some(b) = rule.justifications.get(*index) else {
                    return fail(&loc, format!("default {i} has no justification {index}"));
                };
                sigma.insert(Formula::not(b.clone()));
            }
            Disposition::BlockedByCertainty { .. } => {
                sigma.insert(Formula::not(Formula::cert(rule.consequent.clone())));
            }
        }
    }
    if !remaining.is_empty() {
        return fail("dispositions", format!("defaults {remaining:?} were never handled"));
    }
    if proof.basis != context {
        return fail("basis", "final basis does not match the replayed context");
    }
    let proved: Vec<&Formula> = proof.sigma_proofs.iter().map(|(f, _)| f).collect();
    if proved != sigma.iter().collect::<Vec<_>>() {
        return fail("end", "membership proofs do not cover exactly the required formulas");
    }
    for (f, tree) in &proof.sigma_proofs {
        check_proof(tree, &Sequent3::entailment(&context, f))
            .map_err(|e| CheckError { location: format!("membership of {f}: {}", e.location), reason: e.reason })?;
    }
    let refuted: Vec<&Formula> = proof.theta_refutations.iter().map(|(f, _)| f).collect();
    if refuted != theta.iter().collect::<Vec<_>>() {
        return fail("end", "non-membership refutations do not cover exactly the excluded formulas");
    }
    for (f, tree) in &proof.theta_refutations {
        check_refutation(tree, &AntiSequent3::non_entailment(&context, f))
            .map_err(|e| CheckError { location: format!("non-membership of {f}: {}", e.location), reason: e.reason })?;
    }
    Ok(())
}

fn sem_entails(basis: &BTreeSet<Formula>, f: &Formula) -> bool {
    tt_entails(basis, f).is_valid()
}

fn sem_equivalent(a: &BTreeSet<Formula>, b: &BTreeSet<Formula>) -> bool {
    a.iter().all(|f| sem_entails(b, f)) && b.iter().all(|f| sem_entails(a, f))
}

/// Γ_T computed with truth tables instead of the calculi.
fn semantic_gamma(theory: &DefaultTheory, s: &BTreeSet<Formula>) -> ExtensionBasis {
    let consistent: Vec<bool> =
        theory.defaults.iter().map(|d| blocking_formulas(d).iter().all(|b| !sem_entails(s, b))).collect();
    let mut k = theory.facts.clone();
    let mut fired = BTreeSet::new();
    loop {
        let new: Vec<usize> = (0..theory.defaults.len())
            .filter(|i| !fired.contains(i) && consistent[*i] && sem_entails(&k, &theory.defaults[*i].prereq))
            .collect();
        if new.is_empty() {
            return ExtensionBasis { basis: k, fired };
        }
        for i in new {
            fired.insert(i);
            k.insert(possible_consequent(&theory.defaults[i]));
        }
    }
}

/// Checks a skeptical certificate. The enumeration transcript is re-derived
/// semantically; every membership claim is checked through its tree.
pub fn check_skeptical(proof: &SkepticalProof) -> Result<(), CheckError> {
    let q = &proof.query;
    let theory = q.theory();
    if theory.defaults != q.delta || theory.facts != q.gamma {
        return fail("query", "theory contains repeated defaults");
    }
    let subsets = subsets_by_rank(theory.defaults.len());
    if proof.transcript.len() != subsets.len() {
        return fail("transcript", format!("expected {} candidates, found {}", subsets.len(), proof.transcript.len()));
    }
    let mut accepted: Vec<ExtensionBasis> = Vec::new();
    for (k, (record, subset)) in proof.transcript.iter().zip(&subsets).enumerate() {
        let loc = format!("candidate {k}");
        if &record.subset != subset {
            return fail(&loc, "candidates are not in canonical order");
        }
        let candidate = ExtensionBasis::candidate(&theory, subset);
        let image = semantic_gamma(&theory, &candidate.basis);
        let verdict = if !sem_equivalent(&image.basis, &candidate.basis) {
            CandidateVerdict::NotFixedPoint
        } else if &image.fired != subset {
            CandidateVerdict::ProvenanceMismatch
        } else if accepted.iter().any(|e| sem_equivalent(&e.basis, &candidate.basis)) {
            CandidateVerdict::Duplicate
        } else {
            accepted.push(candidate);
            CandidateVerdict::Extension
        };
        if verdict != record.verdict {
            return fail(&loc, format!("recorded {}, truth tables give {}", record.verdict.as_str(), verdict.as_str()));
        }
    }
    if accepted.len() != proof.entries.len() {
        return fail("extensions", format!("transcript has {} extensions, certificate lists {}", accepted.len(), proof.entries.len()));
    }
    for (k, (entry, ext)) in proof.entries.iter().zip(&accepted).enumerate() {
        let loc = format!("extension {k}");
        if &entry.extension != ext {
            return fail(&loc, "basis does not match the transcript");
        }
        if entry.evidence.len() != q.constraints.len() {
            return fail(&loc, "evidence does not cover every constraint");
        }
        let mut satisfied = Vec::new();
        for (c, ev) in q.constraints.iter().zip(&entry.evidence) {
            match ev {
                MembershipEvidence::Member(p) => check_proof(p, &Sequent3::entailment(&ext.basis, &c.formula)),
                MembershipEvidence::NonMember(r) => check_refutation(r, &AntiSequent3::non_entailment(&ext.basis, &c.formula)),
            }
            .map_err(|e| CheckError { location: format!("{loc} constraint {c}: {}", e.location), reason: e.reason })?;
            satisfied.push(match c.sign {
                Sign::Positive => ev.is_member(),
                Sign::Negative => !ev.is_member(),
            });
        }
        match &entry.outcome {
            ExtensionOutcome::Excluded { constraint } => {
                if satisfied.get(*constraint) != Some(&false) {
                    return fail(&loc, format!("constraint {constraint} is not violated"));
                }
            }
            ExtensionOutcome::Covered { goal, proof } => {
                if satisfied.contains(&false) {
                    return fail(&loc, "extension violates a constraint but is treated as covered");
                }
                if !q.theta.contains(goal) {
                    return fail(&loc, format!("{goal} is not a goal"));
                }
                check_proof(proof, &Sequent3::entailment(&ext.basis, goal))
                    .map_err(|e| CheckError { location: format!("{loc} goal: {}", e.location), reason: e.reason })?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antisequent::refute;
    use crate::engine::{brave_prove, skeptical_decide, BraveSequent, SkepticalOutcome, SkepticalSequent};
    use crate::sequent::prove;
    use crate::syntax::{parse_formula, parse_theory};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn accepts_search_output() {
        let s: Sequent3 = "[q ; ; L p -> M p & (q -> q)]".parse().unwrap();
        let p = prove(&s).unwrap();
        check_proof(&p, &s).unwrap();
        let a: AntiSequent3 = "![ ; ; p | ~p]".parse().unwrap();
        let r = refute(&a).unwrap();
        check_refutation(&r, &a).unwrap();
    }

    #[test]
    fn rejects_wrong_claim() {
        let s: Sequent3 = "[p ; p ; p]".parse().unwrap();
        let p = prove(&s).unwrap();
        let other: Sequent3 = "[p ; p ; p, q]".parse().unwrap();
        assert!(check_proof(&p, &other).is_err());
    }

    #[test]
    fn rejects_dropped_premise() {
        let s: Sequent3 = "[ ; ; (p -> p) & (q -> q)]".parse().unwrap();
        let mut p = prove(&s).unwrap();
        p.children.pop();
        assert!(check_proof(&p, &s).is_err());
    }

    #[test]
    fn rejects_bad_witness() {
        let a: AntiSequent3 = "![ ; ; q]".parse().unwrap();
        let mut r = refute(&a).unwrap();
        if let RefutationStep::Leaf { witness } = &mut r.step {
            witness.set("q", crate::semantics::TruthValue::T);
        }
        assert!(check_refutation(&r, &a).is_err());
    }

    #[test]
    fn brave_and_skeptical_round_trip() {
        let t = parse_theory("fact: a. default: a : b / b. default: a : ~b / ~b.").unwrap();
        let b = brave_prove(&BraveSequent::new(&t, [f("M b")], [f("b")])).unwrap().unwrap();
        check_brave(&b).unwrap();

        let mut bad = b.clone();
        bad.dispositions.pop();
        assert!(check_brave(&bad).is_err());

        let s = SkepticalSequent::new([], &t, [f("M b | M ~b")]);
        let SkepticalOutcome::Proved(p) = skeptical_decide(&s) else { panic!() };
        check_skeptical(&p).unwrap();

        let mut bad = p.clone();
        bad.transcript[0].verdict = CandidateVerdict::Extension;
        assert!(check_skeptical(&bad).is_err());
        let mut bad = p;
        bad.entries.pop();
        assert!(check_skeptical(&bad).is_err());
    }
}
