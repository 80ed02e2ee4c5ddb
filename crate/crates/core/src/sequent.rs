//! Three-sided sequents and the sequent calculus for Ł3.
//!
//! Rules are not hand-written: for a connective and a position they are
//! obtained from the connective's truth table by turning "the principal
//! formula takes this value" into a CNF over argument values, one premise
//! per clause.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::semantics::{argument_tuples, truth_table, TruthValue};
use crate::syntax::{Connective, Formula, ParseError, Parser};

/// A sequent `Γ1 | Γ2 | Γ3`, components indexed by [`TruthValue`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Sequent3 {
    components: [BTreeSet<Formula>; 3],
}

impl Sequent3 {
    pub fn new(
        f: impl IntoIterator<Item = Formula>,
        u: impl IntoIterator<Item = Formula>,
        t: impl IntoIterator<Item = Formula>,
    ) -> Self {
        Sequent3 { components: [f.into_iter().collect(), u.into_iter().collect(), t.into_iter().collect()] }
    }

    /// `W | W | {f}`: valid iff `W` entails `f`.
    pub fn entailment(premises: &BTreeSet<Formula>, f: &Formula) -> Self {
        Sequent3 { components: [premises.clone(), premises.clone(), BTreeSet::from([f.clone()])] }
    }

    pub fn component(&self, v: TruthValue) -> &BTreeSet<Formula> {
        &self.components[v.index()]
    }

    pub fn component_mut(&mut self, v: TruthValue) -> &mut BTreeSet<Formula> {
        &mut self.components[v.index()]
    }

    pub fn components(&self) -> &[BTreeSet<Formula>; 3] {
        &self.components
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for c in &self.components {
            for f in c {
                f.collect_atoms(&mut out);
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.components.iter().flatten().map(Formula::size).sum()
    }

    pub fn is_atomic(&self) -> bool {
        self.components.iter().flatten().all(Formula::is_atomic)
    }

    /// Canonically least compound formula, ties broken by position.
    pub fn least_compound(&self) -> Option<(&Formula, TruthValue)> {
        TruthValue::ALL
            .into_iter()
            .filter_map(|v| self.component(v).iter().find(|f| !f.is_atomic()).map(|f| (f, v)))
            .min_by(|a, b| a.0.cmp(b.0).then(a.1.cmp(&b.1)))
    }
}

pub(crate) fn write_triple(f: &mut fmt::Formatter<'_>, components: &[BTreeSet<Formula>; 3]) -> fmt::Result {
    f.write_str("[")?;
    for (k, comp) in components.iter().enumerate() {
        if k > 0 {
            f.write_str(" ;")?;
        }
        for (n, formula) in comp.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            if k > 0 || n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{formula}")?;
        }
    }
    f.write_str("]")
}

impl fmt::Display for Sequent3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_triple(f, &self.components)
    }
}

impl FromStr for Sequent3 {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let [a, b, c] = Parser::triple(s, false)?;
        Ok(Sequent3::new(a, b, c))
    }
}

/// `true` iff some formula occurs in all three components.
pub fn is_axiom(s: &Sequent3) -> bool {
    let [f, u, t] = &s.components;
    f.iter().any(|x| u.contains(x) && t.contains(x))
}

/// One premise of a generated rule: argument `arg` goes into component `into`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PremiseTemplate {
    pub insertions: Vec<(usize, TruthValue)>,
}

type Clause = BTreeSet<(usize, TruthValue)>;

fn is_tautology(clause: &Clause, arity: usize) -> bool {
    (0..arity).any(|j| TruthValue::ALL.iter().all(|v| clause.contains(&(j, *v))))
}

fn compute_rules(c: Connective, position: TruthValue) -> Vec<PremiseTemplate> {
    let arity = c.arity();
    let satisfying: Vec<Vec<TruthValue>> =
        argument_tuples(arity).into_iter().filter(|w| truth_table(c, w) == position).collect();
    // distribute the DNF over satisfying tuples into a CNF
    let mut clauses: Vec<Clause> = vec![Clause::new()];
    for tuple in &satisfying {
        let mut next: Vec<Clause> = Vec::new();
        for clause in &clauses {
            for (j, v) in tuple.iter().enumerate() {
                let mut extended = clause.clone();
                extended.insert((j, *v));
                if !is_tautology(&extended, arity) {
                    next.push(extended);
                }
            }
        }
        next.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        next.dedup();
        let mut kept: Vec<Clause> = Vec::new();
        for clause in next {
            if !kept.iter().any(|k| k.is_subset(&clause)) {
                kept.push(clause);
            }
        }
        clauses = kept;
    }
    clauses.into_iter().map(|c| PremiseTemplate { insertions: c.into_iter().collect() }).collect()
}

/// Premise templates of the rule for `c` at `position`, canonically ordered.
pub fn generate_rules(c: Connective, position: TruthValue) -> &'static [PremiseTemplate] {
    static RULES: OnceLock<Vec<Vec<PremiseTemplate>>> = OnceLock::new();
    let table = RULES.get_or_init(|| {
        Connective::ALL
            .into_iter()
            .flat_map(|c| TruthValue::ALL.into_iter().map(move |v| compute_rules(c, v)))
            .collect()
    });
    let ci = Connective::ALL.iter().position(|x| *x == c).unwrap();
    &table[ci * 3 + position.index()]
}

/// Rule name such as `→:2`, with positions numbered from 1.
pub fn rule_name(c: Connective, position: TruthValue) -> String {
    format!("{}:{}", c.symbol(), position.index() + 1)
}

/// Parses a name produced by [`rule_name`].
pub fn parse_rule_name(name: &str) -> Option<(Connective, TruthValue)> {
    let (sym, pos) = name.split_once(':')?;
    let c = Connective::from_symbol(sym)?;
    let pos = match pos {
        "1" => TruthValue::F,
        "2" => TruthValue::U,
        "3" => TruthValue::T,
        _ => return None,
    };
    Some((c, pos))
}

/// A rule applied to a concrete principal formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub name: String,
    pub principal: Formula,
    pub position: TruthValue,
    pub premises: Vec<Sequent3>,
    pub conclusion: Sequent3,
}

/// Instantiates the rule for `principal` at `position` in `conclusion`.
/// Returns `None` if the principal is atomic or not in that component.
pub fn instantiate(conclusion: &Sequent3, principal: &Formula, position: TruthValue) -> Option<RuleInstance> {
    let (c, args) = principal.decompose()?;
    if !conclusion.component(position).contains(principal) {
        return None;
    }
    let mut base = conclusion.clone();
    base.component_mut(position).remove(principal);
    let premises = generate_rules(c, position)
        .iter()
        .map(|tpl| {
            let mut p = base.clone();
            for &(j, into) in &tpl.insertions {
                p.component_mut(into).insert(args[j].clone());
            }
            p
        })
        .collect();
    Some(RuleInstance {
        name: rule_name(c, position),
        principal: principal.clone(),
        position,
        premises,
        conclusion: conclusion.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofStep {
    Axiom,
    Rule { connective: Connective, position: TruthValue, principal: Formula },
}

impl ProofStep {
    pub fn name(&self) -> String {
        match self {
            ProofStep::Axiom => "axiom".to_string(),
            ProofStep::Rule { connective, position, .. } => rule_name(*connective, *position),
        }
    }
}

/// A closed derivation tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub conclusion: Sequent3,
    pub step: ProofStep,
    pub children: Vec<ProofTree>,
}

impl ProofTree {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ProofTree::node_count).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(ProofTree::height).max().unwrap_or(0)
    }
}

/// Proof search failed; `leaf` is an atomic, non-axiomatic sequent reached
/// by backward application of invertible rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unprovable {
    pub leaf: Sequent3,
}

/// Backward proof search.
pub fn prove(s: &Sequent3) -> Result<ProofTree, Unprovable> {
    if is_axiom(s) {
        return Ok(ProofTree { conclusion: s.clone(), step: ProofStep::Axiom, children: Vec::new() });
    }
    let Some((principal, position)) = s.least_compound() else {
        return Err(Unprovable { leaf: s.clone() });
    };
    let inst = instantiate(s, principal, position).expect("principal is compound and present");
    let mut children = Vec::with_capacity(inst.premises.len());
    for premise in &inst.premises {
        children.push(prove(premise)?);
    }
    let (connective, _) = principal.decompose().unwrap();
    Ok(ProofTree {
        conclusion: s.clone(),
        step: ProofStep::Rule { connective, position, principal: inst.principal },
        children,
    })
}

/// Proves `premises ⊨ f` through the sequent `W | W | {f}`.
pub fn prove_entailment(premises: &BTreeSet<Formula>, f: &Formula) -> Result<ProofTree, Unprovable> {
    prove(&Sequent3::entailment(premises, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{tt_sequent_valid, Validity};
    use crate::syntax::parse_formula;
    use TruthValue::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn seq(s: &str) -> Sequent3 {
        s.parse().unwrap()
    }

    fn tpl(ins: &[(usize, TruthValue)]) -> PremiseTemplate {
        PremiseTemplate { insertions: ins.to_vec() }
    }

    #[test]
    fn rule_examples() {
        assert_eq!(generate_rules(Connective::Not, T), [tpl(&[(0, F)])]);
        assert_eq!(generate_rules(Connective::Not, U), [tpl(&[(0, U)])]);
        assert_eq!(generate_rules(Connective::And, T), [tpl(&[(0, T)]), tpl(&[(1, T)])]);
    }

    #[test]
    fn cert_rules() {
        // L A is f iff A is f or u; t iff A is t; never u.
        assert_eq!(generate_rules(Connective::Cert, F), [tpl(&[(0, F), (0, U)])]);
        assert_eq!(generate_rules(Connective::Cert, T), [tpl(&[(0, T)])]);
        assert_eq!(generate_rules(Connective::Cert, U), [tpl(&[])]);
    }

    #[test]
    fn text_form() {
        assert_eq!(seq("[p;p;p]").to_string(), "[p ; p ; p]");
        assert_eq!(seq("[ ; ; p | ~p ]").to_string(), "[ ; ; p | ~p]");
        assert_eq!(seq("[a, b ; ; ]").to_string(), "[a, b ; ;]");
        let s = seq("[q, p -> q ; ; M p]");
        assert_eq!(s.to_string().parse::<Sequent3>().unwrap(), s);
    }

    #[test]
    fn axiom_examples() {
        assert!(is_axiom(&seq("[p ; p ; p]")));
        assert!(!is_axiom(&seq("[p ; q ; p]")));
        assert!(is_axiom(&seq("[p -> q ; p -> q ; p -> q]")));
    }

    #[test]
    fn prove_examples() {
        assert!(prove(&seq("[ ; ; p -> p]")).is_ok());
        let err = prove(&seq("[ ; ; p | ~p]")).unwrap_err();
        assert!(err.leaf.is_atomic());
        assert!(!is_axiom(&err.leaf));
        assert!(prove(&seq("[p ; p ; M p]")).is_ok());
    }

    #[test]
    fn entailment_examples() {
        let w = |xs: &[&str]| xs.iter().map(|x| f(x)).collect::<BTreeSet<_>>();
        assert!(prove_entailment(&w(&["p"]), &f("M p")).is_ok());
        assert!(prove_entailment(&w(&[]), &f("p -> p")).is_ok());
        assert!(prove_entailment(&w(&["M p"]), &f("p")).is_err());
    }

    #[test]
    fn every_rule_is_invertible_on_atomic_arguments() {
        use crate::semantics::{enumerate_interpretations, tt_sequent_true};
        let (p, q, r) = (f("p"), f("q"), f("r"));
        for c in Connective::ALL {
            let args = if c.arity() == 1 { vec![p.clone()] } else { vec![p.clone(), q.clone()] };
            let principal = Formula::apply(c, args);
            for pos in TruthValue::ALL {
                let mut concl = Sequent3::new([r.clone()], [], []);
                concl.component_mut(pos).insert(principal.clone());
                let inst = instantiate(&concl, &principal, pos).unwrap();
                for i in enumerate_interpretations(&concl.atoms()) {
                    let lhs = tt_sequent_true(&concl, &i).unwrap();
                    let rhs = inst.premises.iter().all(|s| tt_sequent_true(s, &i).unwrap());
                    assert_eq!(lhs, rhs, "{} at {i}", inst.name);
                }
            }
        }
    }

    #[test]
    fn failure_leaf_is_falsifiable() {
        let s = seq("[p -> q ; ; q -> p]");
        let expected = tt_sequent_valid(&s);
        match prove(&s) {
            Ok(_) => assert_eq!(expected, Validity::Valid),
            Err(u) => assert!(matches!(tt_sequent_valid(&u.leaf), Validity::Counter(_))),
        }
    }

    #[test]
    fn rule_names_round_trip() {
        for c in Connective::ALL {
            for v in TruthValue::ALL {
                assert_eq!(parse_rule_name(&rule_name(c, v)), Some((c, v)));
            }
        }
        assert_eq!(rule_name(Connective::Impl, U), "→:2");
        assert_eq!(parse_rule_name("→:4"), None);
    }
}
