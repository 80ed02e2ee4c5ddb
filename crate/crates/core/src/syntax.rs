//! Formulas, defaults and default theories, together with their concrete
//! text syntax.
//!
//! Operator precedence, tightest first: `~`, `L`, `M` (prefix), `&`, `|`,
//! `->`. Conjunction and disjunction associate to the left, implication to
//! the right.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// The six connectives of the language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Not,
    Impl,
    And,
    Or,
    Cert,
    Poss,
}

impl Connective {
    pub const ALL: [Connective; 6] = [
        Connective::Not,
        Connective::Impl,
        Connective::And,
        Connective::Or,
        Connective::Cert,
        Connective::Poss,
    ];

    pub fn arity(self) -> usize {
        match self {
            Connective::Impl | Connective::And | Connective::Or => 2,
            Connective::Not | Connective::Cert | Connective::Poss => 1,
        }
    }

    /// Symbol used in rule names (`¬`, `→`, `∧`, `∨`, `ℒ`, `𝖬`).
    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Not => "¬",
            Connective::Impl => "→",
            Connective::And => "∧",
            Connective::Or => "∨",
            Connective::Cert => "ℒ",
            Connective::Poss => "𝖬",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Connective> {
        Connective::ALL.into_iter().find(|c| c.symbol() == s)
    }
}

/// A formula of three-valued Łukasiewicz logic.
///
/// The derived ordering is the canonical one: constructor rank first (in
/// declaration order), then children left to right, atoms by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Cert(Box<Formula>),
    Poss(Box<Formula>),
}

impl Formula {
    /// Builds an atom. Panics if `name` is not a valid atom name.
    pub fn atom(name: &str) -> Formula {
        assert!(is_atom_name(name), "invalid atom name {name:?}");
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn cert(f: Formula) -> Formula {
        Formula::Cert(Box::new(f))
    }

    pub fn poss(f: Formula) -> Formula {
        Formula::Poss(Box::new(f))
    }

    /// Applies `c` to `args`. Panics if the argument count does not match.
    pub fn apply(c: Connective, mut args: Vec<Formula>) -> Formula {
        assert_eq!(args.len(), c.arity(), "wrong number of arguments for {c:?}");
        match c {
            Connective::Not => Formula::not(args.pop().unwrap()),
            Connective::Cert => Formula::cert(args.pop().unwrap()),
            Connective::Poss => Formula::poss(args.pop().unwrap()),
            Connective::Impl | Connective::And | Connective::Or => {
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                match c {
                    Connective::Impl => Formula::implies(a, b),
                    Connective::And => Formula::and(a, b),
                    _ => Formula::or(a, b),
                }
            }
        }
    }

    /// Splits a compound formula into its main connective and arguments.
    pub fn decompose(&self) -> Option<(Connective, Vec<&Formula>)> {
        match self {
            Formula::Atom(_) => None,
            Formula::Not(a) => Some((Connective::Not, vec![a])),
            Formula::Cert(a) => Some((Connective::Cert, vec![a])),
            Formula::Poss(a) => Some((Connective::Poss, vec![a])),
            Formula::Impl(a, b) => Some((Connective::Impl, vec![a, b])),
            Formula::And(a, b) => Some((Connective::And, vec![a, b])),
            Formula::Or(a, b) => Some((Connective::Or, vec![a, b])),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self.decompose() {
            None => 1,
            Some((_, args)) => 1 + args.iter().map(|a| a.size()).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.decompose() {
            None => 0,
            Some((_, args)) => 1 + args.iter().map(|a| a.depth()).max().unwrap_or(0),
        }
    }

    /// All atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            _ => {
                if let Some((_, args)) = self.decompose() {
                    for a in args {
                        a.collect_atoms(out);
                    }
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Impl(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) | Formula::Cert(_) | Formula::Poss(_) => 4,
            Formula::Atom(_) => 5,
        }
    }

    fn write_prec(&self, out: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let parens = self.precedence() < ctx;
        if parens {
            out.write_str("(")?;
        }
        match self {
            Formula::Atom(name) => out.write_str(name)?,
            Formula::Not(a) => {
                out.write_str("~")?;
                a.write_prec(out, 4)?;
            }
            Formula::Cert(a) => {
                out.write_str("L ")?;
                a.write_prec(out, 4)?;
            }
            Formula::Poss(a) => {
                out.write_str("M ")?;
                a.write_prec(out, 4)?;
            }
            Formula::Impl(a, b) => {
                a.write_prec(out, 2)?;
                out.write_str(" -> ")?;
                b.write_prec(out, 1)?;
            }
            Formula::Or(a, b) => {
                a.write_prec(out, 2)?;
                out.write_str(" | ")?;
                b.write_prec(out, 3)?;
            }
            Formula::And(a, b) => {
                a.write_prec(out, 3)?;
                out.write_str(" & ")?;
                b.write_prec(out, 4)?;
            }
        }
        if parens {
            out.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Minimal-parentheses rendering of `f`.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

/// Atom names of `f` in lexicographic order.
pub fn atoms(f: &Formula) -> BTreeSet<String> {
    f.atoms()
}

/// A default `A : B1, ..., Bn / C`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DefaultRule {
    pub prereq: Formula,
    pub justifications: Vec<Formula>,
    pub consequent: Formula,
}

impl DefaultRule {
    /// Panics on an empty justification list.
    pub fn new(prereq: Formula, justifications: Vec<Formula>, consequent: Formula) -> Self {
        assert!(!justifications.is_empty(), "a default needs at least one justification");
        DefaultRule { prereq, justifications, consequent }
    }

    /// Parses `A : B1, ..., Bn / C` (no trailing dot).
    pub fn parse(text: &str) -> Result<DefaultRule, ParseError> {
        let mut p = Parser::new(text, false)?;
        let d = p.default_body()?;
        p.expect_end()?;
        Ok(d)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.prereq.collect_atoms(&mut out);
        for j in &self.justifications {
            j.collect_atoms(&mut out);
        }
        self.consequent.collect_atoms(&mut out);
        out
    }
}

impl fmt::Display for DefaultRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : ", self.prereq)?;
        for (i, j) in self.justifications.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, " / {}", self.consequent)
    }
}

/// A default theory: a set of facts and an ordered list of defaults.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DefaultTheory {
    pub facts: BTreeSet<Formula>,
    pub defaults: Vec<DefaultRule>,
}

impl DefaultTheory {
    /// Builds a theory, dropping repeated facts and defaults.
    pub fn new(facts: impl IntoIterator<Item = Formula>, defaults: impl IntoIterator<Item = DefaultRule>) -> Self {
        let mut theory = DefaultTheory::default();
        for f in facts {
            theory.facts.insert(f);
        }
        for d in defaults {
            if !theory.defaults.contains(&d) {
                theory.defaults.push(d);
            }
        }
        theory
    }
}

impl fmt::Display for DefaultTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in &self.facts {
            writeln!(f, "fact: {fact}.")?;
        }
        for d in &self.defaults {
            writeln!(f, "default: {d}.")?;
        }
        Ok(())
    }
}

/// A problem found while reading a theory that did not stop parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: warning: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    Tilde,
    Cert,
    Poss,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Slash,
    Dot,
    LBracket,
    RBracket,
    Bang,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Atom(a) => format!("atom '{a}'"),
            Token::Tilde => "'~'".into(),
            Token::Cert => "'L'".into(),
            Token::Poss => "'M'".into(),
            Token::Amp => "'&'".into(),
            Token::Bar => "'|'".into(),
            Token::Arrow => "'->'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Comma => "','".into(),
            Token::Semi => "';'".into(),
            Token::Colon => "':'".into(),
            Token::Slash => "'/'".into(),
            Token::Dot => "'.'".into(),
            Token::LBracket => "'['".into(),
            Token::RBracket => "']'".into(),
            Token::Bang => "'!'".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn tokenize(text: &str, comments: bool) -> Result<(Vec<(Token, Pos)>, Pos), ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    let mut column = 1;
    let mut at_line_start = true;
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            at_line_start = true;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if comments && at_line_start && c == '%' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        at_line_start = false;
        if c.is_ascii_lowercase() {
            let mut name = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    name.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            tokens.push((Token::Atom(name), pos));
            continue;
        }
        chars.next();
        column += 1;
        let tok = match c {
            '~' => Token::Tilde,
            'L' => Token::Cert,
            'M' => Token::Poss,
            '&' => Token::Amp,
            '|' => Token::Bar,
            '(' => Token::LParen,
            ')' => Token::RParen,
            ',' => Token::Comma,
            ';' => Token::Semi,
            ':' => Token::Colon,
            '/' => Token::Slash,
            '.' => Token::Dot,
            '[' => Token::LBracket,
            ']' => Token::RBracket,
            '!' => Token::Bang,
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                column += 1;
                Token::Arrow
            }
            other => {
                return Err(ParseError {
                    line: pos.line,
                    column: pos.column,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        tokens.push((tok, pos));
    }
    Ok((tokens, Pos { line, column }))
}

pub(crate) struct Parser {
    tokens: Vec<(Token, Pos)>,
    end: Pos,
    idx: usize,
}

impl Parser {
    fn new(text: &str, comments: bool) -> Result<Parser, ParseError> {
        let (tokens, end) = tokenize(text, comments)?;
        Ok(Parser { tokens, end, idx: 0 })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.tokens.get(self.idx).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".to_string(),
        };
        let pos = self.pos();
        ParseError { line: pos.line, column: pos.column, message: format!("expected {expected}, found {found}") }
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Token) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of input")),
        }
    }

    fn at_end(&self) -> bool {
        self.peek().is_none()
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Token::Bar) {
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Token::Amp) {
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Token::Tilde) => {
                self.idx += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Cert) => {
                self.idx += 1;
                Ok(Formula::cert(self.unary()?))
            }
            Some(Token::Poss) => {
                self.idx += 1;
                Ok(Formula::poss(self.unary()?))
            }
            Some(Token::Atom(name)) => {
                self.idx += 1;
                Ok(Formula::Atom(name))
            }
            Some(Token::LParen) => {
                self.idx += 1;
                let f = self.formula()?;
                self.expect(Token::RParen)?;
                Ok(f)
            }
            _ => Err(self.error("formula")),
        }
    }

    fn default_body(&mut self) -> Result<DefaultRule, ParseError> {
        let prereq = self.formula()?;
        self.expect(Token::Colon)?;
        let mut justifications = vec![self.formula()?];
        while self.eat(&Token::Comma) {
            justifications.push(self.formula()?);
        }
        self.expect(Token::Slash)?;
        let consequent = self.formula()?;
        Ok(DefaultRule { prereq, justifications, consequent })
    }

    /// Comma-separated formulas up to (not including) `stop` or the end.
    fn formula_list(&mut self, stop: Option<&Token>) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if self.at_end() || (stop.is_some() && self.peek() == stop) {
            return Ok(out);
        }
        out.push(self.formula()?);
        while self.eat(&Token::Comma) {
            out.push(self.formula()?);
        }
        Ok(out)
    }

    /// Parses `[ A ; B ; C ]` or, with `anti`, `![ A ; B ; C ]`.
    pub(crate) fn triple(text: &str, anti: bool) -> Result<[Vec<Formula>; 3], ParseError> {
        let mut p = Parser::new(text, false)?;
        if anti {
            p.expect(Token::Bang)?;
        }
        p.expect(Token::LBracket)?;
        let first = p.formula_list(Some(&Token::Semi))?;
        p.expect(Token::Semi)?;
        let second = p.formula_list(Some(&Token::Semi))?;
        p.expect(Token::Semi)?;
        let third = p.formula_list(Some(&Token::RBracket))?;
        p.expect(Token::RBracket)?;
        p.expect_end()?;
        Ok([first, second, third])
    }
}

/// Parses a single formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, false)?;
    if p.at_end() {
        return Err(p.error("formula"));
    }
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses a comma-separated list of formulas; the empty string is the empty list.
pub fn parse_formula_list(text: &str) -> Result<Vec<Formula>, ParseError> {
    let mut p = Parser::new(text, false)?;
    let list = p.formula_list(None)?;
    p.expect_end()?;
    Ok(list)
}

/// Parses a `.dl3` theory, discarding warnings.
pub fn parse_theory(text: &str) -> Result<DefaultTheory, ParseError> {
    parse_theory_with_warnings(text).map(|(t, _)| t)
}

/// Parses a `.dl3` theory. Repeated facts and defaults are dropped and
/// reported as warnings.
pub fn parse_theory_with_warnings(text: &str) -> Result<(DefaultTheory, Vec<Warning>), ParseError> {
    let mut p = Parser::new(text, true)?;
    let mut theory = DefaultTheory::default();
    let mut warnings = Vec::new();
    while !p.at_end() {
        let line = p.pos().line;
        match p.peek() {
            Some(Token::Atom(kw)) if kw == "fact" => {
                p.idx += 1;
                p.expect(Token::Colon)?;
                let f = p.formula()?;
                p.expect(Token::Dot)?;
                if theory.facts.contains(&f) {
                    warnings.push(Warning { line, message: format!("duplicate fact '{f}' ignored") });
                } else {
                    theory.facts.insert(f);
                }
            }
            Some(Token::Atom(kw)) if kw == "default" => {
                p.idx += 1;
                p.expect(Token::Colon)?;
                let d = p.default_body()?;
                p.expect(Token::Dot)?;
                if theory.defaults.contains(&d) {
                    warnings.push(Warning { line, message: format!("duplicate default '{d}' ignored") });
                } else {
                    theory.defaults.push(d);
                }
            }
            _ => return Err(p.error("'fact:' or 'default:'")),
        }
    }
    Ok((theory, warnings))
}
