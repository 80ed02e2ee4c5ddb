//! Three-valued default logic: the Γ operator, extensions, and brave and
//! skeptical default sequents.
//!
//! Deductively closed sets are represented by finite bases and compared by
//! mutual entailment. A fired default `A : B1..Bn / C` contributes `M C`,
//! never `C` itself.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::antisequent::{refute_entailment, RefutationTree};
use crate::sequent::{prove_entailment, ProofTree};
use crate::syntax::{DefaultRule, DefaultTheory, Formula};

/// Default cap on the number of brave-search states.
pub const DEFAULT_MAX_STATES: usize = 1_000_000;

/// A finite basis for a deductively closed set, with the defaults whose
/// `M C` were added to the facts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtensionBasis {
    pub basis: BTreeSet<Formula>,
    pub fired: BTreeSet<usize>,
}

impl ExtensionBasis {
    pub fn from_formulas(basis: impl IntoIterator<Item = Formula>) -> Self {
        ExtensionBasis { basis: basis.into_iter().collect(), fired: BTreeSet::new() }
    }

    /// `W ∪ { M C : δ ∈ fired }`.
    pub fn candidate(theory: &DefaultTheory, fired: &BTreeSet<usize>) -> Self {
        let mut basis = theory.facts.clone();
        basis.extend(fired.iter().map(|&i| possible_consequent(&theory.defaults[i])));
        ExtensionBasis { basis, fired: fired.clone() }
    }
}

impl fmt::Display for ExtensionBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.basis.iter().map(|x| x.to_string()).collect();
        let fired: Vec<String> = self.fired.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}} fired [{}]", items.join(", "), fired.join(", "))
    }
}

/// `M C` for a default with consequent `C`.
pub fn possible_consequent(d: &DefaultRule) -> Formula {
    Formula::poss(d.consequent.clone())
}

/// The formulas whose derivability blocks `d`: `~B1, ..., ~Bn, ~L C`.
pub fn blocking_formulas(d: &DefaultRule) -> Vec<Formula> {
    d.justifications
        .iter()
        .map(|b| Formula::not(b.clone()))
        .chain(std::iter::once(Formula::not(Formula::cert(d.consequent.clone()))))
        .collect()
}

pub fn entails(basis: &BTreeSet<Formula>, f: &Formula) -> bool {
    prove_entailment(basis, f).is_ok()
}

/// Mutual entailment, i.e. equality of the deductive closures.
pub fn equivalent(a: &BTreeSet<Formula>, b: &BTreeSet<Formula>) -> bool {
    a.iter().all(|f| entails(b, f)) && b.iter().all(|f| entails(a, f))
}

/// `f ∈ Th(E)`.
pub fn member(e: &ExtensionBasis, f: &Formula) -> bool {
    entails(&e.basis, f)
}

/// Whether `d` passes the consistency test against the closed set `s`: none
/// of its blocking formulas is derivable, each shown by a refutation.
fn consistent_with(d: &DefaultRule, s: &BTreeSet<Formula>) -> bool {
    blocking_formulas(d).iter().all(|b| refute_entailment(s, b).is_ok())
}

/// Γ_T(S) together with the defaults fired at each stage.
pub fn gamma_staged(theory: &DefaultTheory, s: &ExtensionBasis) -> (ExtensionBasis, Vec<Vec<usize>>) {
    let consistent: Vec<bool> = theory.defaults.iter().map(|d| consistent_with(d, &s.basis)).collect();
    let mut k = theory.facts.clone();
    let mut fired = BTreeSet::new();
    let mut stages = Vec::new();
    loop {
        let stage: Vec<usize> = (0..theory.defaults.len())
            .filter(|i| !fired.contains(i) && consistent[*i])
            .filter(|&i| entails(&k, &theory.defaults[i].prereq))
            .collect();
        if stage.is_empty() {
            break;
        }
        for &i in &stage {
            fired.insert(i);
            k.insert(possible_consequent(&theory.defaults[i]));
        }
        stages.push(stage);
    }
    (ExtensionBasis { basis: k, fired }, stages)
}

/// Γ_T(S): the least closed superset of W that adds `M C` for every default
/// whose prerequisite it contains and whose blocking formulas are outside S.
pub fn gamma(theory: &DefaultTheory, s: &ExtensionBasis) -> ExtensionBasis {
    gamma_staged(theory, s).0
}

/// `Γ_T(E) = E`, compared up to mutual entailment.
pub fn is_extension(theory: &DefaultTheory, e: &ExtensionBasis) -> bool {
    equivalent(&gamma(theory, e).basis, &e.basis)
}

/// How one candidate subset of defaults fared during enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateVerdict {
    Extension,
    NotFixedPoint,
    ProvenanceMismatch,
    Duplicate,
}

impl CandidateVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CandidateVerdict::Extension => "extension",
            CandidateVerdict::NotFixedPoint => "not-fixed-point",
            CandidateVerdict::ProvenanceMismatch => "provenance-mismatch",
            CandidateVerdict::Duplicate => "duplicate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Extension, Self::NotFixedPoint, Self::ProvenanceMismatch, Self::Duplicate]
            .into_iter()
            .find(|v| v.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateRecord {
    pub subset: BTreeSet<usize>,
    pub verdict: CandidateVerdict,
}

/// All subsets of `0..n`, by size and then lexicographically.
pub fn subsets_by_rank(n: usize) -> Vec<BTreeSet<usize>> {
    assert!(n < usize::BITS as usize, "too many defaults");
    let mut all: Vec<Vec<usize>> =
        (0..1usize << n).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.into_iter().map(|v| v.into_iter().collect()).collect()
}

/// Extensions with the verdict for every candidate subset.
pub fn extensions_with_transcript(theory: &DefaultTheory) -> (Vec<ExtensionBasis>, Vec<CandidateRecord>) {
    let mut found: Vec<ExtensionBasis> = Vec::new();
    let mut transcript = Vec::new();
    for subset in subsets_by_rank(theory.defaults.len()) {
        let candidate = ExtensionBasis::candidate(theory, &subset);
        let image = gamma(theory, &candidate);
        let verdict = if !equivalent(&image.basis, &candidate.basis) {
            CandidateVerdict::NotFixedPoint
        } else if image.fired != subset {
            CandidateVerdict::ProvenanceMismatch
        } else if found.iter().any(|e| equivalent(&e.basis, &candidate.basis)) {
            CandidateVerdict::Duplicate
        } else {
            found.push(candidate);
            CandidateVerdict::Extension
        };
        transcript.push(CandidateRecord { subset, verdict });
    }
    (found, transcript)
}

/// All extensions of `theory`, one basis per distinct closure.
pub fn extensions(theory: &DefaultTheory) -> Vec<ExtensionBasis> {
    extensions_with_transcript(theory).0
}

/// `Γ; Δ ⊢ Σ; Θ`: some extension of ⟨Γ, Δ⟩ contains Σ and misses Θ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraveSequent {
    pub gamma: BTreeSet<Formula>,
    pub delta: Vec<DefaultRule>,
    pub sigma: BTreeSet<Formula>,
    pub theta: BTreeSet<Formula>,
}

impl BraveSequent {
    pub fn new(
        theory: &DefaultTheory,
        sigma: impl IntoIterator<Item = Formula>,
        theta: impl IntoIterator<Item = Formula>,
    ) -> Self {
        BraveSequent {
            gamma: theory.facts.clone(),
            delta: theory.defaults.clone(),
            sigma: sigma.into_iter().collect(),
            theta: theta.into_iter().collect(),
        }
    }

    pub fn theory(&self) -> DefaultTheory {
        DefaultTheory::new(self.gamma.iter().cloned(), self.delta.iter().cloned())
    }
}

/// What the brave search did with one default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Disposition {
    /// Prerequisite derived from the facts and earlier `M C`s.
    Fired { default: usize, grounding: ProofTree },
    /// Prerequisite must stay outside the extension.
    BlockedByPrerequisite { default: usize },
    /// `~B_index` must be in the extension.
    BlockedByJustification { default: usize, index: usize },
    /// `~L C` must be in the extension.
    BlockedByCertainty { default: usize },
}

impl Disposition {
    pub fn default_index(&self) -> usize {
        match self {
            Disposition::Fired { default, .. }
            | Disposition::BlockedByPrerequisite { default }
            | Disposition::BlockedByJustification { default, .. }
            | Disposition::BlockedByCertainty { default } => *default,
        }
    }
}

/// Certificate for a derivable brave sequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraveProof {
    pub query: BraveSequent,
    pub dispositions: Vec<Disposition>,
    /// Facts plus `M C` of every fired default.
    pub basis: BTreeSet<Formula>,
    pub sigma_proofs: Vec<(Formula, ProofTree)>,
    pub theta_refutations: Vec<(Formula, RefutationTree)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("resource limit: brave search exceeded {0} states")]
    ResourceLimit(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct BraveState {
    context: BTreeSet<Formula>,
    remaining: BTreeSet<usize>,
    sigma: BTreeSet<Formula>,
    theta: BTreeSet<Formula>,
}

struct BraveSearch<'a> {
    delta: &'a [DefaultRule],
    visited: HashSet<BraveState>,
    limit: usize,
}

type EndChecks = (Vec<(Formula, ProofTree)>, Vec<(Formula, RefutationTree)>);

impl BraveSearch<'_> {
    fn end_checks(state: &BraveState) -> Option<EndChecks> {
        let mut proofs = Vec::new();
        for s in &state.sigma {
            proofs.push((s.clone(), prove_entailment(&state.context, s).ok()?));
        }
        let mut refutations = Vec::new();
        for t in &state.theta {
            refutations.push((t.clone(), refute_entailment(&state.context, t).ok()?));
        }
        Some((proofs, refutations))
    }

    fn run(&mut self, state: BraveState, path: &mut Vec<Disposition>) -> Result<Option<EndChecks>, EngineError> {
        if self.visited.contains(&state) {
            return Ok(None);
        }
        if self.visited.len() >= self.limit {
            return Err(EngineError::ResourceLimit(self.limit));
        }
        self.visited.insert(state.clone());
        // the context only grows, so a derivable Θ formula stays derivable
        if state.theta.iter().any(|t| entails(&state.context, t)) {
            return Ok(None);
        }
        let Some(&least) = state.remaining.iter().next() else {
            return Ok(Self::end_checks(&state));
        };

        for &i in &state.remaining {
            let d = &self.delta[i];
            let Ok(grounding) = prove_entailment(&state.context, &d.prereq) else {
                continue;
            };
            let mut next = state.clone();
            next.remaining.remove(&i);
            next.context.insert(possible_consequent(d));
            next.theta.extend(blocking_formulas(d));
            path.push(Disposition::Fired { default: i, grounding });
            if let Some(done) = self.run(next, path)? {
                return Ok(Some(done));
            }
            path.pop();
        }

        let d = &self.delta[least];
        let mut blocks: Vec<(Disposition, BraveState)> = Vec::new();
        let mut next = state.clone();
        next.remaining.remove(&least);
        let mut pre = next.clone();
        pre.theta.insert(d.prereq.clone());
        blocks.push((Disposition::BlockedByPrerequisite { default: least }, pre));
        for (index, b) in d.justifications.iter().enumerate() {
            let mut just = next.clone();
            just.sigma.insert(Formula::not(b.clone()));
            blocks.push((Disposition::BlockedByJustification { default: least, index }, just));
        }
        let mut cert = next;
        cert.sigma.insert(Formula::not(Formula::cert(d.consequent.clone())));
        blocks.push((Disposition::BlockedByCertainty { default: least }, cert));

        for (disposition, next) in blocks {
            path.push(disposition);
            if let Some(done) = self.run(next, path)? {
                return Ok(Some(done));
            }
            path.pop();
        }
        Ok(None)
    }
}

/// Decides a brave sequent with the default state cap.
pub fn brave_prove(s: &BraveSequent) -> Result<Option<BraveProof>, EngineError> {
    brave_prove_with_limit(s, DEFAULT_MAX_STATES)
}

/// Searches for a derivation of `s`; `Ok(None)` means underivable.
///
/// Any remaining default may fire once its prerequisite is derivable; the
/// least remaining default may instead be blocked. This reaches every
/// grounded firing order, and visited states are not explored twice.
pub fn brave_prove_with_limit(s: &BraveSequent, max_states: usize) -> Result<Option<BraveProof>, EngineError> {
    let mut search = BraveSearch { delta: &s.delta, visited: HashSet::new(), limit: max_states };
    let start = BraveState {
        context: s.gamma.clone(),
        remaining: (0..s.delta.len()).collect(),
        sigma: s.sigma.clone(),
        theta: s.theta.clone(),
    };
    let mut path = Vec::new();
    let Some((sigma_proofs, theta_refutations)) = search.run(start, &mut path)? else {
        return Ok(None);
    };
    let mut basis = s.gamma.clone();
    for d in &path {
        if let Disposition::Fired { default, .. } = d {
            basis.insert(possible_consequent(&s.delta[*default]));
        }
    }
    Ok(Some(BraveProof { query: s.clone(), dispositions: path, basis, sigma_proofs, theta_refutations }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

/// `+f` (f must be a member) or `-f` (f must not be).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedConstraint {
    pub sign: Sign,
    pub formula: Formula,
}

impl SignedConstraint {
    pub fn positive(formula: Formula) -> Self {
        SignedConstraint { sign: Sign::Positive, formula }
    }

    pub fn negative(formula: Formula) -> Self {
        SignedConstraint { sign: Sign::Negative, formula }
    }

    /// Parses `+f`, `-f` or a bare `f` (positive).
    pub fn parse(text: &str) -> Result<Self, crate::syntax::ParseError> {
        let t = text.trim_start();
        let offset = text.len() - t.len();
        let (sign, rest) = match t.as_bytes().first() {
            Some(b'+') => (Sign::Positive, &t[1..]),
            Some(b'-') => (Sign::Negative, &t[1..]),
            _ => (Sign::Positive, t),
        };
        let formula = crate::syntax::parse_formula(rest).map_err(|mut e| {
            if e.line == 1 {
                e.column += offset + (t.len() - rest.len());
            }
            e
        })?;
        Ok(SignedConstraint { sign, formula })
    }
}

impl fmt::Display for SignedConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            Sign::Positive => '+',
            Sign::Negative => '-',
        };
        write!(f, "{sign}{}", self.formula)
    }
}

pub fn constraint_satisfied(e: &ExtensionBasis, c: &SignedConstraint) -> bool {
    match c.sign {
        Sign::Positive => member(e, &c.formula),
        Sign::Negative => !member(e, &c.formula),
    }
}

/// `Σ; Γ; Δ ⊢ Θ`: every extension of ⟨Γ, Δ⟩ satisfying Σ contains some
/// element of Θ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkepticalSequent {
    pub constraints: Vec<SignedConstraint>,
    pub gamma: BTreeSet<Formula>,
    pub delta: Vec<DefaultRule>,
    pub theta: BTreeSet<Formula>,
}

impl SkepticalSequent {
    pub fn new(
        constraints: impl IntoIterator<Item = SignedConstraint>,
        theory: &DefaultTheory,
        theta: impl IntoIterator<Item = Formula>,
    ) -> Self {
        let mut cs: Vec<SignedConstraint> = Vec::new();
        for c in constraints {
            if !cs.contains(&c) {
                cs.push(c);
            }
        }
        SkepticalSequent {
            constraints: cs,
            gamma: theory.facts.clone(),
            delta: theory.defaults.clone(),
            theta: theta.into_iter().collect(),
        }
    }

    pub fn theory(&self) -> DefaultTheory {
        DefaultTheory::new(self.gamma.iter().cloned(), self.delta.iter().cloned())
    }

    /// The brave sequent that is derivable exactly when `self` is not:
    /// positive constraints go to Σ, negative ones and Θ to the other side.
    pub fn dual_brave(&self) -> BraveSequent {
        let mut sigma = BTreeSet::new();
        let mut theta = self.theta.clone();
        for c in &self.constraints {
            match c.sign {
                Sign::Positive => sigma.insert(c.formula.clone()),
                Sign::Negative => theta.insert(c.formula.clone()),
            };
        }
        BraveSequent { gamma: self.gamma.clone(), delta: self.delta.clone(), sigma, theta }
    }
}

/// Evidence that an extension does or does not contain a constraint formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipEvidence {
    Member(ProofTree),
    NonMember(RefutationTree),
}

impl MembershipEvidence {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipEvidence::Member(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionOutcome {
    /// Constraint `index` is violated, so the extension is not quantified over.
    Excluded { constraint: usize },
    /// The goal formula is a member.
    Covered { goal: Formula, proof: ProofTree },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionEntry {
    pub extension: ExtensionBasis,
    pub evidence: Vec<MembershipEvidence>,
    pub outcome: ExtensionOutcome,
}

/// Certificate for a true skeptical sequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkepticalProof {
    pub query: SkepticalSequent,
    pub transcript: Vec<CandidateRecord>,
    pub entries: Vec<ExtensionEntry>,
}

/// Outcome of a skeptical query; a failure names an extension satisfying
/// every constraint while containing no goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkepticalOutcome {
    Proved(SkepticalProof),
    Refuted { counter: ExtensionBasis },
}

impl SkepticalOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SkepticalOutcome::Proved(_))
    }
}

fn membership_evidence(e: &ExtensionBasis, f: &Formula) -> MembershipEvidence {
    match prove_entailment(&e.basis, f) {
        Ok(p) => MembershipEvidence::Member(p),
        Err(_) => MembershipEvidence::NonMember(
            refute_entailment(&e.basis, f).expect("unprovable entailments are refutable"),
        ),
    }
}

pub fn skeptical_decide(s: &SkepticalSequent) -> SkepticalOutcome {
    let theory = s.theory();
    let (exts, transcript) = extensions_with_transcript(&theory);
    let mut entries = Vec::with_capacity(exts.len());
    for e in exts {
        let evidence: Vec<MembershipEvidence> = s.constraints.iter().map(|c| membership_evidence(&e, &c.formula)).collect();
        let violated = s.constraints.iter().zip(&evidence).position(|(c, ev)| match c.sign {
            Sign::Positive => !ev.is_member(),
            Sign::Negative => ev.is_member(),
        });
        let outcome = match violated {
            Some(constraint) => ExtensionOutcome::Excluded { constraint },
            None => {
                let covered = s.theta.iter().find_map(|g| prove_entailment(&e.basis, g).ok().map(|p| (g.clone(), p)));
                match covered {
                    Some((goal, proof)) => ExtensionOutcome::Covered { goal, proof },
                    None => return SkepticalOutcome::Refuted { counter: e },
                }
            }
        };
        entries.push(ExtensionEntry { extension: e, evidence, outcome });
    }
    SkepticalOutcome::Proved(SkepticalProof { query: s.clone(), transcript, entries })
}
