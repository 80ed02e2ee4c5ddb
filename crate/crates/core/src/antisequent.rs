//! Anti-sequents and the complementary (refutation) calculus for Ł3.
//!
//! An anti-sequent `Γ1 ∥ Γ2 ∥ Γ3` is refutable iff some interpretation gives
//! no formula of `Γk` the value of component `k`. Each rule fixes the values
//! of the principal formula's arguments to one tuple the connective maps away
//! from the principal's component; the refutation branch is a single path
//! ending in an atomic anti-sequent from which a witness is read off.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::semantics::{argument_tuples, truth_table, Interpretation, TruthValue};
use crate::sequent::{write_triple, Sequent3};
use crate::syntax::{Connective, Formula, ParseError, Parser};

/// An anti-sequent `Γ1 ∥ Γ2 ∥ Γ3`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AntiSequent3 {
    components: [BTreeSet<Formula>; 3],
}

impl AntiSequent3 {
    pub fn new(
        f: impl IntoIterator<Item = Formula>,
        u: impl IntoIterator<Item = Formula>,
        t: impl IntoIterator<Item = Formula>,
    ) -> Self {
        AntiSequent3 { components: [f.into_iter().collect(), u.into_iter().collect(), t.into_iter().collect()] }
    }

    /// `W ∥ W ∥ {f}`: refutable iff `W` does not entail `f`.
    pub fn non_entailment(premises: &BTreeSet<Formula>, f: &Formula) -> Self {
        AntiSequent3 { components: [premises.clone(), premises.clone(), BTreeSet::from([f.clone()])] }
    }

    pub fn component(&self, v: TruthValue) -> &BTreeSet<Formula> {
        &self.components[v.index()]
    }

    pub fn component_mut(&mut self, v: TruthValue) -> &mut BTreeSet<Formula> {
        &mut self.components[v.index()]
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.as_sequent().atoms()
    }

    pub fn is_atomic(&self) -> bool {
        self.components.iter().flatten().all(Formula::is_atomic)
    }

    /// The sequent with the same components.
    pub fn as_sequent(&self) -> Sequent3 {
        let [f, u, t] = self.components.clone();
        Sequent3::new(f, u, t)
    }

    fn least_compound(&self) -> Option<(&Formula, TruthValue)> {
        TruthValue::ALL
            .into_iter()
            .filter_map(|v| self.component(v).iter().find(|f| !f.is_atomic()).map(|f| (f, v)))
            .min_by(|a, b| a.0.cmp(b.0).then(a.1.cmp(&b.1)))
    }

    fn has_shared_formula(&self) -> bool {
        let [f, u, t] = &self.components;
        f.iter().any(|x| u.contains(x) && t.contains(x))
    }
}

impl From<&Sequent3> for AntiSequent3 {
    fn from(s: &Sequent3) -> Self {
        AntiSequent3 { components: s.components().clone() }
    }
}

impl fmt::Display for AntiSequent3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("!")?;
        write_triple(f, &self.components)
    }
}

impl FromStr for AntiSequent3 {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let [a, b, c] = Parser::triple(s, true)?;
        Ok(AntiSequent3::new(a, b, c))
    }
}

/// A single-premise anti-rule: pins the arguments to `tuple`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AntiRuleTemplate {
    pub tuple: Vec<TruthValue>,
}

impl AntiRuleTemplate {
    /// Components an argument pinned to `v` is added to.
    pub fn targets(v: TruthValue) -> [TruthValue; 2] {
        match v {
            TruthValue::F => [TruthValue::U, TruthValue::T],
            TruthValue::U => [TruthValue::F, TruthValue::T],
            TruthValue::T => [TruthValue::F, TruthValue::U],
        }
    }
}

/// One rule per argument tuple the connective maps to a value other than
/// `position`, in lexicographic tuple order.
pub fn generate_antirules(c: Connective, position: TruthValue) -> Vec<AntiRuleTemplate> {
    argument_tuples(c.arity())
        .into_iter()
        .filter(|w| truth_table(c, w) != position)
        .map(|tuple| AntiRuleTemplate { tuple })
        .collect()
}

/// Name such as `∧:1[u,t]`.
pub fn antirule_name(c: Connective, position: TruthValue, tuple: &[TruthValue]) -> String {
    let values: Vec<String> = tuple.iter().map(|v| v.letter().to_string()).collect();
    format!("{}:{}[{}]", c.symbol(), position.index() + 1, values.join(","))
}

pub fn parse_antirule_name(name: &str) -> Option<(Connective, TruthValue, Vec<TruthValue>)> {
    let (head, rest) = name.split_once('[')?;
    let (c, pos) = crate::sequent::parse_rule_name(head)?;
    let inner = rest.strip_suffix(']')?;
    let tuple = inner.split(',').map(|v| v.parse().ok()).collect::<Option<Vec<TruthValue>>>()?;
    if tuple.len() != c.arity() {
        return None;
    }
    Some((c, pos, tuple))
}

/// Applies the anti-rule for `principal` at `position` with the given tuple.
pub fn apply_antirule(a: &AntiSequent3, principal: &Formula, position: TruthValue, tuple: &[TruthValue]) -> Option<AntiSequent3> {
    let (_, args) = principal.decompose()?;
    if args.len() != tuple.len() || !a.component(position).contains(principal) {
        return None;
    }
    let mut premise = a.clone();
    premise.component_mut(position).remove(principal);
    for (arg, &v) in args.iter().zip(tuple) {
        for target in AntiRuleTemplate::targets(v) {
            premise.component_mut(target).insert((*arg).clone());
        }
    }
    Some(premise)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AntiSequentError {
    #[error("anti-axiom check needs an atomic anti-sequent, found '{0}'")]
    NotAtomic(Formula),
    #[error("malformed refutation tree: {0}")]
    Malformed(String),
}

/// Witness for an atomic anti-sequent, or `None` when some atom occurs in
/// all three components. Each atom takes the value of the least component
/// that does not contain it.
pub fn is_antiaxiom(a: &AntiSequent3) -> Result<Option<Interpretation>, AntiSequentError> {
    if let Some(f) = a.components.iter().flatten().find(|f| !f.is_atomic()) {
        return Err(AntiSequentError::NotAtomic(f.clone()));
    }
    let mut witness = Interpretation::new();
    for atom in a.atoms() {
        let formula = Formula::Atom(atom.clone());
        match TruthValue::ALL.into_iter().find(|v| !a.component(*v).contains(&formula)) {
            Some(v) => witness.set(atom, v),
            None => return Ok(None),
        }
    }
    Ok(Some(witness))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefutationStep {
    Leaf { witness: Interpretation },
    Rule { connective: Connective, position: TruthValue, principal: Formula, tuple: Vec<TruthValue>, premise: Box<RefutationTree> },
}

/// A refutation: a chain of single-premise rules ending in an anti-axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefutationTree {
    pub conclusion: AntiSequent3,
    pub step: RefutationStep,
}

impl RefutationTree {
    pub fn rule_name(&self) -> String {
        match &self.step {
            RefutationStep::Leaf { .. } => "antiaxiom".to_string(),
            RefutationStep::Rule { connective, position, tuple, .. } => antirule_name(*connective, *position, tuple),
        }
    }

    pub fn leaf(&self) -> (&AntiSequent3, &Interpretation) {
        let mut node = self;
        loop {
            match &node.step {
                RefutationStep::Leaf { witness } => return (&node.conclusion, witness),
                RefutationStep::Rule { premise, .. } => node = premise,
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match &self.step {
            RefutationStep::Leaf { .. } => 1,
            RefutationStep::Rule { premise, .. } => 1 + premise.node_count(),
        }
    }
}

/// Refutation search failed: every interpretation satisfies the sequent reading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irrefutable;

/// Backward refutation search with backtracking over argument tuples.
pub fn refute(a: &AntiSequent3) -> Result<RefutationTree, Irrefutable> {
    let mut dead = HashSet::new();
    search(a, &mut dead).ok_or(Irrefutable)
}

/// Refutes `premises ⊭ f` through `W ∥ W ∥ {f}`.
pub fn refute_entailment(premises: &BTreeSet<Formula>, f: &Formula) -> Result<RefutationTree, Irrefutable> {
    refute(&AntiSequent3::non_entailment(premises, f))
}

fn search(a: &AntiSequent3, dead: &mut HashSet<AntiSequent3>) -> Option<RefutationTree> {
    // a formula present in all components matches whatever value it takes
    if a.has_shared_formula() || dead.contains(a) {
        return None;
    }
    let Some((principal, position)) = a.least_compound() else {
        let witness = is_antiaxiom(a).expect("anti-sequent is atomic")?;
        return Some(RefutationTree { conclusion: a.clone(), step: RefutationStep::Leaf { witness } });
    };
    let (connective, _) = principal.decompose().unwrap();
    for rule in generate_antirules(connective, position) {
        let premise = apply_antirule(a, principal, position, &rule.tuple).expect("principal present");
        if let Some(sub) = search(&premise, dead) {
            return Some(RefutationTree {
                conclusion: a.clone(),
                step: RefutationStep::Rule {
                    connective,
                    position,
                    principal: principal.clone(),
                    tuple: rule.tuple,
                    premise: Box::new(sub),
                },
            });
        }
    }
    dead.insert(a.clone());
    None
}

/// The leaf witness, extended with `f` to any root atom it does not mention.
pub fn countermodel_of(r: &RefutationTree) -> Result<Interpretation, AntiSequentError> {
    let (leaf, witness) = r.leaf();
    if !leaf.is_atomic() {
        return Err(AntiSequentError::Malformed(format!("leaf {leaf} is not atomic")));
    }
    for atom in leaf.atoms() {
        if witness.get(&atom).is_none() {
            return Err(AntiSequentError::Malformed(format!("witness does not assign leaf atom '{atom}'")));
        }
    }
    Ok(witness.extended_to(&r.conclusion.atoms()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::tt_sequent_true;
    use TruthValue::*;

    fn anti(s: &str) -> AntiSequent3 {
        s.parse().unwrap()
    }

    fn interp(s: &str) -> Interpretation {
        s.parse().unwrap()
    }

    fn tuples(c: Connective, p: TruthValue) -> Vec<Vec<TruthValue>> {
        generate_antirules(c, p).into_iter().map(|r| r.tuple).collect()
    }

    #[test]
    fn antirule_examples() {
        assert_eq!(tuples(Connective::Not, T), vec![vec![U], vec![T]]);
        assert_eq!(AntiRuleTemplate::targets(U), [F, T]);
        assert_eq!(AntiRuleTemplate::targets(T), [F, U]);
        assert_eq!(tuples(Connective::Poss, T), vec![vec![F]]);
        assert_eq!(tuples(Connective::And, F), vec![vec![U, U], vec![U, T], vec![T, U], vec![T, T]]);
    }

    #[test]
    fn antiaxiom_examples() {
        assert_eq!(is_antiaxiom(&anti("![ ; ; p]")).unwrap(), Some(interp("p=f")));
        assert_eq!(is_antiaxiom(&anti("![p ; p ; p]")).unwrap(), None);
        assert_eq!(is_antiaxiom(&anti("![p ; q ; ]")).unwrap(), Some(interp("p=u,q=f")));
        assert!(matches!(is_antiaxiom(&anti("![ ; ; ~p]")), Err(AntiSequentError::NotAtomic(_))));
    }

    #[test]
    fn refute_examples() {
        let r = refute(&anti("![ ; ; p | ~p]")).unwrap();
        assert_eq!(countermodel_of(&r).unwrap(), interp("p=u"));
        assert_eq!(refute(&anti("![ ; ; p -> p]")), Err(Irrefutable));
        let r = refute(&anti("![a, M b ; a, M b ; ~L b]")).unwrap();
        assert_eq!(countermodel_of(&r).unwrap(), interp("a=t,b=t"));
    }

    #[test]
    fn countermodel_examples() {
        let r = refute(&anti("![ ; ; q]")).unwrap();
        assert_eq!(countermodel_of(&r).unwrap(), interp("q=f"));
        let r = refute(&anti("![p ; ; ]")).unwrap();
        assert_eq!(countermodel_of(&r).unwrap(), interp("p=u"));
    }

    #[test]
    fn witness_falsifies_root() {
        for text in ["![p -> q ; ; q -> p]", "![L p ; M q ; p & q]", "![ ; p | q ; ~(p & q)]"] {
            let a = anti(text);
            let r = refute(&a).unwrap();
            let w = countermodel_of(&r).unwrap();
            assert!(!tt_sequent_true(&a.as_sequent(), &w).unwrap(), "{text}: {w}");
        }
    }

    #[test]
    fn text_form() {
        let a = anti("![a ; ; b -> c]");
        assert_eq!(a.to_string(), "![a ; ; b -> c]");
        assert_eq!(a.to_string().parse::<AntiSequent3>().unwrap(), a);
        assert!("[a;;b]".parse::<AntiSequent3>().is_err());
    }

    #[test]
    fn antirule_names_round_trip() {
        let name = antirule_name(Connective::And, F, &[U, T]);
        assert_eq!(name, "∧:1[u,t]");
        assert_eq!(parse_antirule_name(&name), Some((Connective::And, F, vec![U, T])));
        assert_eq!(parse_antirule_name("¬:3[u,t]"), None);
    }

    #[test]
    fn refutation_path_is_single_branch() {
        let r = refute(&anti("![ ; ; (p -> q) | (q -> p) & ~r]")).unwrap();
        let mut node = &r;
        let mut len = 1;
        while let RefutationStep::Rule { premise, .. } = &node.step {
            node = premise;
            len += 1;
        }
        assert_eq!(len, r.node_count());
    }
}
