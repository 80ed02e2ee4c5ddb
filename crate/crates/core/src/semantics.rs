//! Model theory of three-valued Łukasiewicz logic: truth values,
//! interpretations, evaluation, and truth-table oracles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::sequent::Sequent3;
use crate::syntax::{is_atom_name, Connective, Formula};

/// One of the three truth values, ordered `F < U < T`.
///
/// The numeric reading is 0, 1/2, 1; [`TruthValue::halves`] gives it in
/// units of one half so that all arithmetic stays in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    F,
    U,
    T,
}

impl TruthValue {
    pub const ALL: [TruthValue; 3] = [TruthValue::F, TruthValue::U, TruthValue::T];

    pub fn halves(self) -> u8 {
        match self {
            TruthValue::F => 0,
            TruthValue::U => 1,
            TruthValue::T => 2,
        }
    }

    pub fn from_halves(n: u8) -> TruthValue {
        match n {
            0 => TruthValue::F,
            1 => TruthValue::U,
            2 => TruthValue::T,
            _ => panic!("truth value out of range: {n}/2"),
        }
    }

    /// Zero-based index, also the index of the sequent component that
    /// collects formulas of this value.
    pub fn index(self) -> usize {
        self.halves() as usize
    }

    pub fn from_index(i: usize) -> TruthValue {
        TruthValue::ALL[i]
    }

    pub fn letter(self) -> char {
        match self {
            TruthValue::F => 'f',
            TruthValue::U => 'u',
            TruthValue::T => 't',
        }
    }

    pub fn neg(self) -> TruthValue {
        TruthValue::from_halves(2 - self.halves())
    }

    pub fn implies(self, other: TruthValue) -> TruthValue {
        TruthValue::from_halves((2 - self.halves() + other.halves()).min(2))
    }

    pub fn and(self, other: TruthValue) -> TruthValue {
        self.min(other)
    }

    pub fn or(self, other: TruthValue) -> TruthValue {
        self.max(other)
    }

    pub fn cert(self) -> TruthValue {
        if self == TruthValue::T {
            TruthValue::T
        } else {
            TruthValue::F
        }
    }

    pub fn poss(self) -> TruthValue {
        if self == TruthValue::F {
            TruthValue::F
        } else {
            TruthValue::T
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for TruthValue {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f" => Ok(TruthValue::F),
            "u" => Ok(TruthValue::U),
            "t" => Ok(TruthValue::T),
            other => Err(SemanticsError::BadValue(other.to_string())),
        }
    }
}

/// Truth table of `c`. `args` must have the connective's arity.
pub fn truth_table(c: Connective, args: &[TruthValue]) -> TruthValue {
    match c {
        Connective::Not => args[0].neg(),
        Connective::Cert => args[0].cert(),
        Connective::Poss => args[0].poss(),
        Connective::Impl => args[0].implies(args[1]),
        Connective::And => args[0].and(args[1]),
        Connective::Or => args[0].or(args[1]),
    }
}

/// All argument tuples for a connective, in lexicographic order.
pub fn argument_tuples(arity: usize) -> Vec<Vec<TruthValue>> {
    let mut out: Vec<Vec<TruthValue>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                TruthValue::ALL.into_iter().map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("atom '{0}' is not assigned a truth value")]
    UndeclaredAtom(String),
    #[error("'{0}' is not a truth value (expected f, u or t)")]
    BadValue(String),
    #[error("malformed assignment '{0}' (expected atom=value)")]
    BadAssignment(String),
    #[error("atom '{0}' is assigned twice")]
    DuplicateAtom(String),
}

/// A total assignment of truth values to a finite set of atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Interpretation(BTreeMap<String, TruthValue>);

impl Interpretation {
    pub fn new() -> Self {
        Interpretation::default()
    }

    pub fn get(&self, atom: &str) -> Option<TruthValue> {
        self.0.get(atom).copied()
    }

    pub fn set(&mut self, atom: impl Into<String>, v: TruthValue) {
        self.0.insert(atom.into(), v);
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, TruthValue)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy of `self` with every atom of `atoms` not yet assigned set to `f`.
    pub fn extended_to<'a>(&self, atoms: impl IntoIterator<Item = &'a String>) -> Interpretation {
        let mut out = self.clone();
        for a in atoms {
            out.0.entry(a.clone()).or_insert(TruthValue::F);
        }
        out
    }
}

impl FromIterator<(String, TruthValue)> for Interpretation {
    fn from_iter<I: IntoIterator<Item = (String, TruthValue)>>(iter: I) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (atom, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{atom}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Interpretation {
    type Err = SemanticsError;

    /// Parses `a=t,b=u`; whitespace around items is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Interpretation::new();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (atom, value) = item.split_once('=').ok_or_else(|| SemanticsError::BadAssignment(item.to_string()))?;
            let atom = atom.trim();
            if !is_atom_name(atom) {
                return Err(SemanticsError::BadAssignment(item.to_string()));
            }
            let value: TruthValue = value.trim().parse()?;
            if out.0.insert(atom.to_string(), value).is_some() {
                return Err(SemanticsError::DuplicateAtom(atom.to_string()));
            }
        }
        Ok(out)
    }
}

/// Evaluates `f` under `i`.
pub fn eval(f: &Formula, i: &Interpretation) -> Result<TruthValue, SemanticsError> {
    Ok(match f {
        Formula::Atom(name) => i.get(name).ok_or_else(|| SemanticsError::UndeclaredAtom(name.clone()))?,
        Formula::Not(a) => eval(a, i)?.neg(),
        Formula::Cert(a) => eval(a, i)?.cert(),
        Formula::Poss(a) => eval(a, i)?.poss(),
        Formula::Impl(a, b) => eval(a, i)?.implies(eval(b, i)?),
        Formula::And(a, b) => eval(a, i)?.and(eval(b, i)?),
        Formula::Or(a, b) => eval(a, i)?.or(eval(b, i)?),
    })
}

/// Iterator over all interpretations of a finite atom set.
///
/// Order is lexicographic: the first atom (in sorted order) varies slowest,
/// values run `f`, `u`, `t`.
pub struct Interpretations {
    atoms: Vec<String>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Interpretations {
    type Item = Interpretation;

    fn next(&mut self) -> Option<Interpretation> {
        if self.done {
            return None;
        }
        let current = self
            .atoms
            .iter()
            .zip(&self.digits)
            .map(|(a, &d)| (a.clone(), TruthValue::from_index(d)))
            .collect();
        // odometer step, last atom fastest
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            if self.digits[k] < 2 {
                self.digits[k] += 1;
                break;
            }
            self.digits[k] = 0;
        }
        Some(current)
    }
}

pub fn enumerate_interpretations(atoms: &BTreeSet<String>) -> Interpretations {
    Interpretations { atoms: atoms.iter().cloned().collect(), digits: vec![0; atoms.len()], done: false }
}

/// Outcome of a truth-table check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Counter(Interpretation),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn counter(&self) -> Option<&Interpretation> {
        match self {
            Validity::Valid => None,
            Validity::Counter(i) => Some(i),
        }
    }
}

pub fn tt_valid(f: &Formula) -> Validity {
    for i in enumerate_interpretations(&f.atoms()) {
        if eval(f, &i).expect("interpretation covers the formula") != TruthValue::T {
            return Validity::Counter(i);
        }
    }
    Validity::Valid
}

/// Entailment with `t` as the only designated value.
pub fn tt_entails<'a>(premises: impl IntoIterator<Item = &'a Formula>, f: &Formula) -> Validity {
    let premises: Vec<&Formula> = premises.into_iter().collect();
    let mut atoms = f.atoms();
    for p in &premises {
        p.collect_atoms(&mut atoms);
    }
    'next: for i in enumerate_interpretations(&atoms) {
        for p in &premises {
            if eval(p, &i).expect("interpretation covers the premises") != TruthValue::T {
                continue 'next;
            }
        }
        if eval(f, &i).expect("interpretation covers the formula") != TruthValue::T {
            return Validity::Counter(i);
        }
    }
    Validity::Valid
}

/// A sequent is true iff some component holds a formula taking that
/// component's value.
pub fn tt_sequent_true(s: &Sequent3, i: &Interpretation) -> Result<bool, SemanticsError> {
    for v in TruthValue::ALL {
        for f in s.component(v) {
            if eval(f, i)? == v {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

pub fn tt_sequent_valid(s: &Sequent3) -> Validity {
    for i in enumerate_interpretations(&s.atoms()) {
        if !tt_sequent_true(s, &i).expect("interpretation covers the sequent") {
            return Validity::Counter(i);
        }
    }
    Validity::Valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use TruthValue::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn i(s: &str) -> Interpretation {
        s.parse().unwrap()
    }

    fn seq(s: &str) -> Sequent3 {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval(&f("p -> q"), &i("p=u,q=f")).unwrap(), U);
        for v in TruthValue::ALL {
            let mut interp = Interpretation::new();
            interp.set("p", v);
            assert_eq!(eval(&f("p -> p"), &interp).unwrap(), T);
        }
        assert_eq!(eval(&f("M p"), &i("p=u")).unwrap(), T);
        assert_eq!(eval(&f("L p"), &i("p=u")).unwrap(), F);
    }

    #[test]
    fn primitive_tables_match_tarski_definitions() {
        for v in TruthValue::ALL {
            assert_eq!(v.cert(), v.implies(v.neg()).neg(), "L at {v}");
            assert_eq!(v.poss(), v.neg().implies(v), "M at {v}");
        }
    }

    #[test]
    fn implication_table() {
        let expected = [[T, T, T], [U, T, T], [F, U, T]];
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                assert_eq!(a.implies(b), expected[a.index()][b.index()], "{a} -> {b}");
            }
        }
    }

    #[test]
    fn undeclared_atom_is_named() {
        assert_eq!(eval(&f("p & q"), &i("p=t")), Err(SemanticsError::UndeclaredAtom("q".into())));
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(enumerate_interpretations(&BTreeSet::new()).collect::<Vec<_>>(), vec![Interpretation::new()]);
        let p: BTreeSet<String> = ["p".to_string()].into();
        assert_eq!(enumerate_interpretations(&p).collect::<Vec<_>>(), vec![i("p=f"), i("p=u"), i("p=t")]);
        let pq: BTreeSet<String> = ["q".to_string(), "p".to_string()].into();
        let all: Vec<_> = enumerate_interpretations(&pq).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], i("p=f,q=f"));
        assert_eq!(all[1], i("p=f,q=u"));
        assert_eq!(all[8], i("p=t,q=t"));
    }

    #[test]
    fn validity_examples() {
        assert_eq!(tt_valid(&f("p -> p")), Validity::Valid);
        assert_eq!(tt_valid(&f("p | ~p")), Validity::Counter(i("p=u")));
        assert_eq!(tt_valid(&f("M p | ~p")), Validity::Valid);
    }

    #[test]
    fn entailment_examples() {
        assert_eq!(tt_entails(&[f("p")], &f("M p")), Validity::Valid);
        assert_eq!(tt_entails(&[f("M p")], &f("p")), Validity::Counter(i("p=u")));
        assert_eq!(tt_entails(&[f("a"), f("M b")], &f("~L b")), Validity::Counter(i("a=t,b=t")));
        // unsatisfiable premises entail everything
        assert_eq!(tt_entails(&[f("p & ~p"), f("L p")], &f("q")), Validity::Valid);
    }

    #[test]
    fn sequent_truth_examples() {
        assert!(tt_sequent_true(&seq("[p ; ; ]"), &i("p=f")).unwrap());
        assert!(!tt_sequent_true(&seq("[ ; p ; ]"), &i("p=t")).unwrap());
        for v in TruthValue::ALL {
            let mut interp = Interpretation::new();
            interp.set("q", v);
            assert!(tt_sequent_true(&seq("[q ; q ; q]"), &interp).unwrap());
        }
    }

    #[test]
    fn sequent_validity_examples() {
        assert_eq!(tt_sequent_valid(&seq("[p ; p ; p]")), Validity::Valid);
        assert_eq!(tt_sequent_valid(&seq("[ ; ; p | ~p]")), Validity::Counter(i("p=u")));
        assert_eq!(tt_sequent_valid(&seq("[p ; p ; q]")), Validity::Counter(i("p=t,q=f")));
    }

    #[test]
    fn interpretation_text_form() {
        let interp = i(" b=u, a=t ");
        assert_eq!(interp.to_string(), "a=t,b=u");
        assert!("a=x".parse::<Interpretation>().is_err());
        assert!("a".parse::<Interpretation>().is_err());
        assert!("a=t,a=f".parse::<Interpretation>().is_err());
        assert!("A=t".parse::<Interpretation>().is_err());
        assert_eq!("".parse::<Interpretation>().unwrap(), Interpretation::new());
    }
}
