//! Python bindings for `luk3`.
//!
//! Formulas, sequents and theories are passed as text in the same syntax the
//! command line accepts. Certificates come back as JSON strings.

use std::collections::BTreeMap;

use luk3::antisequent::{countermodel_of, refute as refute_anti, AntiSequent3};
use luk3::cert::{check_certificate, format_certificate, parse_certificate, Certificate};
use luk3::engine::{self, BraveSequent, SignedConstraint, SkepticalOutcome, SkepticalSequent};
use luk3::semantics::{self, Interpretation, TruthValue};
use luk3::sequent::{self, Sequent3};
use luk3::syntax::{self, DefaultTheory};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_list(items: Vec<String>) -> PyResult<Vec<syntax::Formula>> {
    items.iter().map(|s| syntax::parse_formula(s).map_err(value_err)).collect()
}

fn parse_theory(text: &str) -> PyResult<DefaultTheory> {
    syntax::parse_theory(text).map_err(value_err)
}

/// A propositional formula over Ł3 connectives.
#[pyclass(module = "luk3py", frozen)]
struct Formula(syntax::Formula);

#[pymethods]
impl Formula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        syntax::parse_formula(text).map(Formula).map_err(value_err)
    }

    fn atoms(&self) -> Vec<String> {
        self.0.atoms().into_iter().collect()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn depth(&self) -> usize {
        self.0.depth()
    }

    /// Value (`"f"`, `"u"` or `"t"`) under a mapping from atoms to values.
    fn eval(&self, interp: BTreeMap<String, String>) -> PyResult<String> {
        let mut i = Interpretation::new();
        for (atom, v) in interp {
            i.set(atom, v.parse::<TruthValue>().map_err(value_err)?);
        }
        Ok(semantics::eval(&self.0, &i).map_err(value_err)?.to_string())
    }

    fn is_valid(&self) -> bool {
        semantics::tt_valid(&self.0).is_valid()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula('{}')", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __lt__(&self, other: &Self) -> bool {
        self.0 < other.0
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }
}

/// Returns `None` for a valid formula, otherwise a countermodel.
#[pyfunction]
fn counter_model(formula: &str) -> PyResult<Option<BTreeMap<String, String>>> {
    let f = syntax::parse_formula(formula).map_err(value_err)?;
    Ok(semantics::tt_valid(&f)
        .counter()
        .map(|i| i.iter().map(|(a, v)| (a.to_string(), v.to_string())).collect()))
}

/// Proof certificate for a provable sequent, `None` otherwise.
#[pyfunction]
fn prove(sequent: &str) -> PyResult<Option<String>> {
    let s: Sequent3 = sequent.parse().map_err(value_err)?;
    Ok(sequent::prove(&s).ok().map(|p| format_certificate(&Certificate::Proof(p))))
}

/// `(witness, certificate)` for a refutable anti-sequent, `None` otherwise.
#[pyfunction]
fn refute(antisequent: &str) -> PyResult<Option<(String, String)>> {
    let a: AntiSequent3 = antisequent.parse().map_err(value_err)?;
    Ok(refute_anti(&a).ok().map(|r| {
        let w = countermodel_of(&r).expect("search output is well formed").to_string();
        (w, format_certificate(&Certificate::Refutation(r)))
    }))
}

/// Extensions of a theory as `(basis, fired)` pairs.
#[pyfunction]
fn extensions(theory: &str) -> PyResult<Vec<(Vec<String>, Vec<usize>)>> {
    let t = parse_theory(theory)?;
    Ok(engine::extensions(&t)
        .into_iter()
        .map(|e| (e.basis.iter().map(|f| f.to_string()).collect(), e.fired.into_iter().collect()))
        .collect())
}

/// Brave certificate when some extension contains every formula of `include`
/// and none of `exclude`.
#[pyfunction]
#[pyo3(signature = (theory, include = Vec::new(), exclude = Vec::new()))]
fn brave(theory: &str, include: Vec<String>, exclude: Vec<String>) -> PyResult<Option<String>> {
    let t = parse_theory(theory)?;
    let q = BraveSequent::new(&t, parse_list(include)?, parse_list(exclude)?);
    let p = engine::brave_prove(&q).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(p.map(|p| format_certificate(&Certificate::Brave(p))))
}

/// Skeptical certificate, or `None` when some admissible extension misses
/// every goal. Constraints are written `+A` or `-A`.
#[pyfunction]
#[pyo3(signature = (theory, goals, constraints = Vec::new()))]
fn skeptical(theory: &str, goals: Vec<String>, constraints: Vec<String>) -> PyResult<Option<String>> {
    let t = parse_theory(theory)?;
    let constraints =
        constraints.iter().map(|c| SignedConstraint::parse(c).map_err(value_err)).collect::<PyResult<Vec<_>>>()?;
    let q = SkepticalSequent::new(constraints, &t, parse_list(goals)?);
    Ok(match engine::skeptical_decide(&q) {
        SkepticalOutcome::Proved(p) => Some(format_certificate(&Certificate::Skeptical(p))),
        SkepticalOutcome::Refuted { .. } => None,
    })
}

/// Checks a certificate document and returns its kind. Raises `ValueError`
/// when the document is malformed or rejected.
#[pyfunction]
fn check(document: &str) -> PyResult<&'static str> {
    let c = parse_certificate(document).map_err(value_err)?;
    check_certificate(&c).map_err(value_err)?;
    Ok(match c {
        Certificate::Proof(_) => "proof",
        Certificate::Refutation(_) => "refutation",
        Certificate::Brave(_) => "brave",
        Certificate::Skeptical(_) => "skeptical",
    })
}

#[pymodule]
fn luk3py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_function(wrap_pyfunction!(counter_model, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(refute, m)?)?;
    m.add_function(wrap_pyfunction!(extensions, m)?)?;
    m.add_function(wrap_pyfunction!(brave, m)?)?;
    m.add_function(wrap_pyfunction!(skeptical, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
