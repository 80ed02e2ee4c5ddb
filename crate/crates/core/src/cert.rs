//! JSON document form of certificates.
//!
//! Sequent proofs serialize as nested `{"rule", "sequent", "premises"}`
//! objects (rule nodes also name their `principal`); refutations look the
//! same with a `witness` map on the leaf. Default-logic certificates carry
//! their query so they can be checked on their own.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antisequent::{parse_antirule_name, AntiSequent3, RefutationStep, RefutationTree};
use crate::check::{check_brave, check_proof, check_refutation, check_skeptical, CheckError};
use crate::engine::{
    BraveProof, BraveSequent, CandidateRecord, CandidateVerdict, Disposition, ExtensionBasis, ExtensionEntry,
    ExtensionOutcome, MembershipEvidence, SignedConstraint, SkepticalProof, SkepticalSequent,
};
use crate::semantics::{Interpretation, TruthValue};
use crate::sequent::{parse_rule_name, ProofStep, ProofTree, Sequent3};
use crate::syntax::{parse_formula, DefaultRule, Formula, ParseError};

#[derive(Debug, Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed certificate: {0}")]
    Parse(#[from] ParseError),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate rejected at {0}")]
    Rejected(#[from] CheckError),
}

fn malformed<T>(msg: impl Into<String>) -> Result<T, CertError> {
    Err(CertError::Malformed(msg.into()))
}

/// Any certificate the reasoner emits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Proof(ProofTree),
    Refutation(RefutationTree),
    Brave(BraveProof),
    Skeptical(SkepticalProof),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofDoc {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<String>,
    pub sequent: String,
    pub premises: Vec<ProofDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefutationDoc {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<String>,
    pub sequent: String,
    pub premises: Vec<RefutationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TheoryDoc {
    facts: Vec<String>,
    defaults: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
enum DispositionDoc {
    Fire { default: usize, grounding: ProofDoc },
    BlockPrerequisite { default: usize },
    BlockJustification { default: usize, justification: usize },
    BlockCertainty { default: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MembershipDoc {
    formula: String,
    proof: ProofDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct NonMembershipDoc {
    formula: String,
    refutation: RefutationDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BraveDoc {
    kind: String,
    theory: TheoryDoc,
    #[serde(rename = "in")]
    sigma: Vec<String>,
    #[serde(rename = "out")]
    theta: Vec<String>,
    dispositions: Vec<DispositionDoc>,
    basis: Vec<String>,
    members: Vec<MembershipDoc>,
    non_members: Vec<NonMembershipDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CandidateDoc {
    subset: Vec<usize>,
    verdict: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "membership", rename_all = "kebab-case")]
enum EvidenceDoc {
    Member { proof: ProofDoc },
    NonMember { refutation: RefutationDoc },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
enum OutcomeDoc {
    Excluded { constraint: usize },
    Covered { goal: String, proof: ProofDoc },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EntryDoc {
    basis: Vec<String>,
    fired: Vec<usize>,
    evidence: Vec<EvidenceDoc>,
    #[serde(flatten)]
    outcome: OutcomeDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SkepticalDoc {
    kind: String,
    theory: TheoryDoc,
    constraints: Vec<String>,
    goals: Vec<String>,
    transcript: Vec<CandidateDoc>,
    extensions: Vec<EntryDoc>,
}

fn strings<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Vec<String> {
    fs.into_iter().map(Formula::to_string).collect()
}

fn formulas(xs: &[String]) -> Result<Vec<Formula>, CertError> {
    xs.iter().map(|x| parse_formula(x).map_err(CertError::from)).collect()
}

fn formula_set(xs: &[String]) -> Result<BTreeSet<Formula>, CertError> {
    let v = formulas(xs)?;
    let set: BTreeSet<Formula> = v.iter().cloned().collect();
    if set.len() != v.len() {
        return malformed("repeated formula in a set");
    }
    Ok(set)
}

pub fn proof_to_doc(tree: &ProofTree) -> ProofDoc {
    let principal = match &tree.step {
        ProofStep::Axiom => None,
        ProofStep::Rule { principal, .. } => Some(principal.to_string()),
    };
    ProofDoc {
        rule: tree.step.name(),
        principal,
        sequent: tree.conclusion.to_string(),
        premises: tree.children.iter().map(proof_to_doc).collect(),
    }
}

pub fn proof_from_doc(doc: &ProofDoc) -> Result<ProofTree, CertError> {
    let conclusion: Sequent3 = doc.sequent.parse()?;
    let step = if doc.rule == "axiom" {
        if doc.principal.is_some() {
            return malformed("axiom node names a principal formula");
        }
        ProofStep::Axiom
    } else {
        let Some((connective, position)) = parse_rule_name(&doc.rule) else {
            return malformed(format!("unknown rule '{}'", doc.rule));
        };
        let Some(principal) = &doc.principal else {
            return malformed(format!("rule node '{}' lacks a principal formula", doc.rule));
        };
        ProofStep::Rule { connective, position, principal: parse_formula(principal)? }
    };
    let children = doc.premises.iter().map(proof_from_doc).collect::<Result<_, _>>()?;
    Ok(ProofTree { conclusion, step, children })
}

pub fn refutation_to_doc(tree: &RefutationTree) -> RefutationDoc {
    match &tree.step {
        RefutationStep::Leaf { witness } => RefutationDoc {
            rule: tree.rule_name(),
            principal: None,
            sequent: tree.conclusion.to_string(),
            premises: Vec::new(),
            witness: Some(witness.iter().map(|(a, v)| (a.to_string(), v.to_string())).collect()),
        },
        RefutationStep::Rule { principal, premise, .. } => RefutationDoc {
            rule: tree.rule_name(),
            principal: Some(principal.to_string()),
            sequent: tree.conclusion.to_string(),
            premises: vec![refutation_to_doc(premise)],
            witness: None,
        },
    }
}

pub fn refutation_from_doc(doc: &RefutationDoc) -> Result<RefutationTree, CertError> {
    let conclusion: AntiSequent3 = doc.sequent.parse()?;
    let step = if doc.rule == "antiaxiom" {
        let Some(w) = &doc.witness else {
            return malformed("refutation leaf lacks a witness");
        };
        if !doc.premises.is_empty() || doc.principal.is_some() {
            return malformed("refutation leaf has a premise or principal");
        }
        let mut witness = Interpretation::new();
        for (atom, v) in w {
            let v: TruthValue = v.parse().map_err(|e| CertError::Malformed(format!("{e}")))?;
            witness.set(atom.clone(), v);
        }
        RefutationStep::Leaf { witness }
    } else {
        let Some((connective, position, tuple)) = parse_antirule_name(&doc.rule) else {
            return malformed(format!("unknown anti-rule '{}'", doc.rule));
        };
        let Some(principal) = &doc.principal else {
            return malformed(format!("rule node '{}' lacks a principal formula", doc.rule));
        };
        if doc.witness.is_some() {
            return malformed("inner refutation node carries a witness");
        }
        let [premise] = doc.premises.as_slice() else {
            return malformed("anti-rule nodes have exactly one premise");
        };
        RefutationStep::Rule {
            connective,
            position,
            principal: parse_formula(principal)?,
            tuple,
            premise: Box::new(refutation_from_doc(premise)?),
        }
    };
    Ok(RefutationTree { conclusion, step })
}

fn theory_doc(gamma: &BTreeSet<Formula>, delta: &[DefaultRule]) -> TheoryDoc {
    TheoryDoc { facts: strings(gamma), defaults: delta.iter().map(DefaultRule::to_string).collect() }
}

fn theory_from_doc(doc: &TheoryDoc) -> Result<(BTreeSet<Formula>, Vec<DefaultRule>), CertError> {
    let facts = formula_set(&doc.facts)?;
    let defaults = doc.defaults.iter().map(|d| DefaultRule::parse(d).map_err(CertError::from)).collect::<Result<_, _>>()?;
    Ok((facts, defaults))
}

fn brave_to_doc(p: &BraveProof) -> BraveDoc {
    let q = &p.query;
    BraveDoc {
        kind: "brave".into(),
        theory: theory_doc(&q.gamma, &q.delta),
        sigma: strings(&q.sigma),
        theta: strings(&q.theta),
        dispositions: p
            .dispositions
            .iter()
            .map(|d| match d {
                Disposition::Fired { default, grounding } => {
                    DispositionDoc::Fire { default: *default, grounding: proof_to_doc(grounding) }
                }
                Disposition::BlockedByPrerequisite { default } => DispositionDoc::BlockPrerequisite { default: *default },
                Disposition::BlockedByJustification { default, index } => {
                    DispositionDoc::BlockJustification { default: *default, justification: *index }
                }
                Disposition::BlockedByCertainty { default } => DispositionDoc::BlockCertainty { default: *default },
            })
            .collect(),
        basis: strings(&p.basis),
        members: p
            .sigma_proofs
            .iter()
            .map(|(f, t)| MembershipDoc { formula: f.to_string(), proof: proof_to_doc(t) })
            .collect(),
        non_members: p
            .theta_refutations
            .iter()
            .map(|(f, t)| NonMembershipDoc { formula: f.to_string(), refutation: refutation_to_doc(t) })
            .collect(),
    }
}

fn brave_from_doc(doc: &BraveDoc) -> Result<BraveProof, CertError> {
    let (gamma, delta) = theory_from_doc(&doc.theory)?;
    let query = BraveSequent { gamma, delta, sigma: formula_set(&doc.sigma)?, theta: formula_set(&doc.theta)? };
    let dispositions = doc
        .dispositions
        .iter()
        .map(|d| {
            Ok(match d {
                DispositionDoc::Fire { default, grounding } => {
                    Disposition::Fired { default: *default, grounding: proof_from_doc(grounding)? }
                }
                DispositionDoc::BlockPrerequisite { default } => Disposition::BlockedByPrerequisite { default: *default },
                DispositionDoc::BlockJustification { default, justification } => {
                    Disposition::BlockedByJustification { default: *default, index: *justification }
                }
                DispositionDoc::BlockCertainty { default } => Disposition::BlockedByCertainty { default: *default },
            })
        })
        .collect::<Result<Vec<_>, CertError>>()?;
    let sigma_proofs = doc
        .members
        .iter()
        .map(|m| Ok((parse_formula(&m.formula)?, proof_from_doc(&m.proof)?)))
        .collect::<Result<_, CertError>>()?;
    let theta_refutations = doc
        .non_members
        .iter()
        .map(|m| Ok((parse_formula(&m.formula)?, refutation_from_doc(&m.refutation)?)))
        .collect::<Result<_, CertError>>()?;
    Ok(BraveProof { query, dispositions, basis: formula_set(&doc.basis)?, sigma_proofs, theta_refutations })
}

fn skeptical_to_doc(p: &SkepticalProof) -> SkepticalDoc {
    let q = &p.query;
    SkepticalDoc {
        kind: "skeptical".into(),
        theory: theory_doc(&q.gamma, &q.delta),
        constraints: q.constraints.iter().map(SignedConstraint::to_string).collect(),
        goals: strings(&q.theta),
        transcript: p
            .transcript
            .iter()
            .map(|r| CandidateDoc { subset: r.subset.iter().copied().collect(), verdict: r.verdict.as_str().into() })
            .collect(),
        extensions: p
            .entries
            .iter()
            .map(|e| EntryDoc {
                basis: strings(&e.extension.basis),
                fired: e.extension.fired.iter().copied().collect(),
                evidence: e
                    .evidence
                    .iter()
                    .map(|ev| match ev {
                        MembershipEvidence::Member(t) => EvidenceDoc::Member { proof: proof_to_doc(t) },
                        MembershipEvidence::NonMember(t) => EvidenceDoc::NonMember { refutation: refutation_to_doc(t) },
                    })
                    .collect(),
                outcome: match &e.outcome {
                    ExtensionOutcome::Excluded { constraint } => OutcomeDoc::Excluded { constraint: *constraint },
                    ExtensionOutcome::Covered { goal, proof } => {
                        OutcomeDoc::Covered { goal: goal.to_string(), proof: proof_to_doc(proof) }
                    }
                },
            })
            .collect(),
    }
}

fn skeptical_from_doc(doc: &SkepticalDoc) -> Result<SkepticalProof, CertError> {
    let (gamma, delta) = theory_from_doc(&doc.theory)?;
    let constraints = doc
        .constraints
        .iter()
        .map(|c| SignedConstraint::parse(c).map_err(CertError::from))
        .collect::<Result<Vec<_>, _>>()?;
    let query = SkepticalSequent { constraints, gamma, delta, theta: formula_set(&doc.goals)? };
    let transcript = doc
        .transcript
        .iter()
        .map(|c| {
            let Some(verdict) = CandidateVerdict::parse(&c.verdict) else {
                return malformed(format!("unknown verdict '{}'", c.verdict));
            };
            Ok(CandidateRecord { subset: c.subset.iter().copied().collect(), verdict })
        })
        .collect::<Result<_, CertError>>()?;
    let entries = doc
        .extensions
        .iter()
        .map(|e| {
            let evidence = e
                .evidence
                .iter()
                .map(|ev| {
                    Ok(match ev {
                        EvidenceDoc::Member { proof } => MembershipEvidence::Member(proof_from_doc(proof)?),
                        EvidenceDoc::NonMember { refutation } => {
                            MembershipEvidence::NonMember(refutation_from_doc(refutation)?)
                        }
                    })
                })
                .collect::<Result<_, CertError>>()?;
            let outcome = match &e.outcome {
                OutcomeDoc::Excluded { constraint } => ExtensionOutcome::Excluded { constraint: *constraint },
                OutcomeDoc::Covered { goal, proof } => {
                    ExtensionOutcome::Covered { goal: parse_formula(goal)?, proof: proof_from_doc(proof)? }
                }
            };
            Ok(ExtensionEntry {
                extension: ExtensionBasis { basis: formula_set(&e.basis)?, fired: e.fired.iter().copied().collect() },
                evidence,
                outcome,
            })
        })
        .collect::<Result<_, CertError>>()?;
    Ok(SkepticalProof { query, transcript, entries })
}

/// Canonical compact JSON for a certificate.
pub fn format_certificate(c: &Certificate) -> String {
    let result = match c {
        Certificate::Proof(t) => serde_json::to_string(&proof_to_doc(t)),
        Certificate::Refutation(t) => serde_json::to_string(&refutation_to_doc(t)),
        Certificate::Brave(p) => serde_json::to_string(&brave_to_doc(p)),
        Certificate::Skeptical(p) => serde_json::to_string(&skeptical_to_doc(p)),
    };
    result.expect("certificate documents contain only strings, numbers and arrays")
}

/// Certificate as a JSON value, for embedding in larger documents.
pub fn certificate_value(c: &Certificate) -> serde_json::Value {
    serde_json::from_str(&format_certificate(c)).expect("formatted certificate is valid JSON")
}

/// Reads a certificate document, recognising its kind from its shape.
pub fn parse_certificate(text: &str) -> Result<Certificate, CertError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let value = serde_json::Value::deserialize(&mut de)?;
    de.end()?;
    let kind = value.get("kind").and_then(|k| k.as_str()).map(str::to_string);
    match kind.as_deref() {
        Some("brave") => Ok(Certificate::Brave(brave_from_doc(&serde_json::from_value(value)?)?)),
        Some("skeptical") => Ok(Certificate::Skeptical(skeptical_from_doc(&serde_json::from_value(value)?)?)),
        Some(other) => malformed(format!("unknown certificate kind '{other}'")),
        None => {
            let anti = value.get("sequent").and_then(|s| s.as_str()).is_some_and(|s| s.trim_start().starts_with('!'));
            if anti {
                Ok(Certificate::Refutation(refutation_from_doc(&serde_json::from_value(value)?)?))
            } else {
                Ok(Certificate::Proof(proof_from_doc(&serde_json::from_value(value)?)?))
            }
        }
    }
}

/// Checks a certificate against the claim it carries: the root sequent for
/// proofs and refutations, the embedded query for default-logic ones.
pub fn check_certificate(c: &Certificate) -> Result<(), CheckError> {
    match c {
        Certificate::Proof(t) => check_proof(t, &t.conclusion),
        Certificate::Refutation(t) => check_refutation(t, &t.conclusion),
        Certificate::Brave(p) => check_brave(p),
        Certificate::Skeptical(p) => check_skeptical(p),
    }
}

/// Parses and checks a certificate document.
pub fn verify_document(text: &str) -> Result<Certificate, CertError> {
    let c = parse_certificate(text)?;
    check_certificate(&c)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antisequent::refute;
    use crate::engine::{brave_prove, skeptical_decide, SkepticalOutcome};
    use crate::sequent::prove;
    use crate::syntax::parse_theory;

    #[test]
    fn axiom_leaf_document() {
        let s: Sequent3 = "[p;p;p]".parse().unwrap();
        let doc = format_certificate(&Certificate::Proof(prove(&s).unwrap()));
        assert_eq!(doc, r#"{"rule":"axiom","sequent":"[p ; p ; p]","premises":[]}"#);
    }

    #[test]
    fn refutation_leaf_carries_witness() {
        let a: AntiSequent3 = "![ ; ; p | ~p]".parse().unwrap();
        let doc = format_certificate(&Certificate::Refutation(refute(&a).unwrap()));
        assert!(doc.contains(r#""witness":{"p":"u"}"#), "{doc}");
        assert!(doc.starts_with(r#"{"rule":"∨:3[u,u]","principal":"p | ~p","sequent":"![ ; ; p | ~p]""#), "{doc}");
    }

    #[test]
    fn documents_round_trip() {
        let s: Sequent3 = "[L p ; ; M p -> (q -> M p)]".parse().unwrap();
        let c = Certificate::Proof(prove(&s).unwrap());
        let doc = format_certificate(&c);
        assert_eq!(verify_document(&doc).unwrap(), c);

        let a: AntiSequent3 = "![p -> q ; ; q -> p]".parse().unwrap();
        let c = Certificate::Refutation(refute(&a).unwrap());
        assert_eq!(verify_document(&format_certificate(&c)).unwrap(), c);

        let t = parse_theory("fact: a. default: a : b / b. default: a : ~b / ~b.").unwrap();
        let q = BraveSequent::new(&t, [parse_formula("M b").unwrap()], [parse_formula("b").unwrap()]);
        let c = Certificate::Brave(brave_prove(&q).unwrap().unwrap());
        let doc = format_certificate(&c);
        assert!(doc.contains(r#""action":"fire""#));
        assert_eq!(verify_document(&doc).unwrap(), c);

        let q = SkepticalSequent::new(
            [SignedConstraint::parse("+M b").unwrap()],
            &t,
            [parse_formula("M b").unwrap()],
        );
        let SkepticalOutcome::Proved(p) = skeptical_decide(&q) else { panic!() };
        let c = Certificate::Skeptical(p);
        assert_eq!(verify_document(&format_certificate(&c)).unwrap(), c);
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(parse_certificate("{"), Err(CertError::Json(_))));
        assert!(matches!(
            parse_certificate(r#"{"rule":"frobnicate","sequent":"[p;p;p]","premises":[]}"#),
            Err(CertError::Malformed(_))
        ));
        assert!(matches!(
            parse_certificate(r#"{"rule":"axiom","sequent":"[p;p","premises":[]}"#),
            Err(CertError::Parse(_))
        ));
        assert!(matches!(
            verify_document(r#"{"rule":"axiom","sequent":"[p ; q ; p]","premises":[]}"#),
            Err(CertError::Rejected(_))
        ));
        assert!(matches!(parse_certificate(r#"{"kind":"other"}"#), Err(CertError::Malformed(_))));
    }
}
