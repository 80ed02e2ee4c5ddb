//! A reasoner for three-valued Łukasiewicz logic and the default logic
//! built on it.
//!
//! * [`syntax`]: formulas, defaults, theories and their text forms.
//! * [`semantics`]: truth values, evaluation and truth-table oracles.
//! * [`sequent`]: three-sided sequents and backward proof search.
//! * [`antisequent`]: the complementary refutation calculus.
//! * [`engine`]: the Γ operator, extensions, brave and skeptical sequents.
//! * [`check`] and [`cert`]: independent certificate checking and the JSON
//!   certificate format.
//! * [`cli`]: the `luk3` command-line front end.

pub mod antisequent;
pub mod cert;
pub mod check;
pub mod cli;
pub mod engine;
pub mod semantics;
pub mod sequent;
pub mod syntax;

pub use antisequent::{countermodel_of, is_antiaxiom, refute, AntiSequent3, RefutationTree};
pub use engine::{
    brave_prove, constraint_satisfied, extensions, gamma, is_extension, member, skeptical_decide, BraveSequent,
    ExtensionBasis, SignedConstraint, SkepticalOutcome, SkepticalSequent,
};
pub use semantics::{eval, tt_entails, tt_sequent_true, tt_sequent_valid, tt_valid, Interpretation, TruthValue, Validity};
pub use sequent::{is_axiom, prove, prove_entailment, ProofTree, Sequent3};
pub use syntax::{parse_formula, parse_theory, print_formula, DefaultRule, DefaultTheory, Formula};
