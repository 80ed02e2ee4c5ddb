//! The `luk3` command line.
//!
//! Exit codes: 0 when the answer is yes (valid, provable, refutable,
//! derivable, designated), 1 when it is no, 2 on input errors. Nothing is
//! written to stdout when the exit code is 2.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use crate::antisequent::{countermodel_of, refute, AntiSequent3};
use crate::cert::{certificate_value, format_certificate, parse_certificate, check_certificate, CertError, Certificate};
use crate::engine::{
    brave_prove_with_limit, extensions, skeptical_decide, BraveSequent, Disposition, EngineError, ExtensionBasis,
    SignedConstraint, SkepticalOutcome, SkepticalSequent, DEFAULT_MAX_STATES,
};
use crate::semantics::{eval, Interpretation, SemanticsError, TruthValue};
use crate::sequent::{prove, Sequent3};
use crate::syntax::{parse_formula, parse_formula_list, parse_theory_with_warnings, DefaultTheory, Formula, ParseError};

const AFTER_HELP: &str = "\
Formula lists (--in, --out, --goals, --constraints) are comma-separated;
formulas never contain commas, so every comma separates list items.
Constraints are written +f (must be a member) or -f (must not be); a bare
formula is positive. A skeptical query with no goals fails whenever some
extension satisfies the constraints.

LUK3_MAX_STATES caps the number of brave-search states (default 1000000).";

#[derive(Debug, Parser)]
#[command(name = "luk3", version, about = "Three-valued Łukasiewicz logic and default logic reasoner", after_help = AFTER_HELP)]
struct Cli {
    /// Print results as JSON documents.
    #[arg(long, global = true)]
    json: bool,

    /// Write the certificate (proof, refutation or default proof) to this file.
    #[arg(long, global = true, value_name = "PATH")]
    proof: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a formula under an interpretation such as `p=u,q=t`.
    Eval {
        #[arg(long, value_name = "ASSIGNMENT")]
        interp: String,
        formula: String,
    },
    /// Decide validity of a formula.
    Valid { formula: String },
    /// Prove a sequent `[ A, B ; C ; D ]`.
    Prove { sequent: String },
    /// Refute an anti-sequent `![ A ; B ; C ]`.
    Refute { antisequent: String },
    /// List the extensions of a `.dl3` theory.
    Extensions { file: PathBuf },
    /// Decide a brave default sequent.
    Brave {
        file: PathBuf,
        #[arg(long = "in", default_value = "", allow_hyphen_values = true, value_name = "FORMULAS")]
        sigma: String,
        #[arg(long = "out", default_value = "", allow_hyphen_values = true, value_name = "FORMULAS")]
        theta: String,
    },
    /// Decide a skeptical default sequent.
    Skeptical {
        file: PathBuf,
        #[arg(long, default_value = "", allow_hyphen_values = true, value_name = "CONSTRAINTS")]
        constraints: String,
        #[arg(long, default_value = "", allow_hyphen_values = true, value_name = "FORMULAS")]
        goals: String,
    },
    /// Check a certificate document.
    Check { file: PathBuf },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{what}: {source}")]
    Parse { what: String, source: ParseError },
    #[error("{0}")]
    Semantics(#[from] SemanticsError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Cert(#[from] CertError),
    #[error("{0}")]
    Usage(String),
}

fn parse_err(what: &str) -> impl FnOnce(ParseError) -> CliError + '_ {
    move |source| CliError::Parse { what: what.to_string(), source }
}

/// Result of a command: exit code, stdout text and an optional certificate.
struct Answer {
    code: i32,
    text: String,
    certificate: Option<Certificate>,
}

struct Context {
    json: bool,
    warnings: Vec<String>,
}

impl Context {
    fn render(&self, text: String, doc: serde_json::Value) -> String {
        if self.json {
            let mut s = serde_json::to_string(&doc).expect("json value");
            s.push('\n');
            s
        } else {
            text
        }
    }
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    2
                }
            };
        }
    };
    let mut ctx = Context { json: cli.json, warnings: Vec::new() };
    let result = execute(&cli.command, &mut ctx);
    for w in &ctx.warnings {
        let _ = writeln!(stderr, "{w}");
    }
    let answer = match result {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    if let (Some(path), Some(cert)) = (&cli.proof, &answer.certificate) {
        let mut doc = format_certificate(cert);
        doc.push('\n');
        if let Err(source) = std::fs::write(path, doc) {
            let _ = writeln!(stderr, "error: {}", CliError::Io { path: path.display().to_string(), source });
            return 2;
        }
    }
    let _ = stdout.write_all(answer.text.as_bytes());
    answer.code
}

fn read_theory(path: &Path, ctx: &mut Context) -> Result<DefaultTheory, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let what = path.display().to_string();
    let (theory, warnings) = parse_theory_with_warnings(&text).map_err(parse_err(&what))?;
    ctx.warnings.extend(warnings.into_iter().map(|w| format!("{what}: {w}")));
    Ok(theory)
}

fn max_states() -> Result<usize, CliError> {
    match std::env::var("LUK3_MAX_STATES") {
        Err(_) => Ok(DEFAULT_MAX_STATES),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("LUK3_MAX_STATES must be a non-negative integer, got '{v}'"))),
    }
}

fn render_extension(e: &ExtensionBasis) -> serde_json::Value {
    json!({
        "basis": e.basis.iter().map(Formula::to_string).collect::<Vec<_>>(),
        "fired": e.fired.iter().collect::<Vec<_>>(),
    })
}

fn cert_json(c: &Certificate) -> serde_json::Value {
    certificate_value(c)
}

fn execute(cmd: &Command, ctx: &mut Context) -> Result<Answer, CliError> {
    match cmd {
        Command::Eval { interp, formula } => {
            let f = parse_formula(formula).map_err(parse_err("formula"))?;
            let i: Interpretation = interp.parse()?;
            let v = eval(&f, &i)?;
            let text = ctx.render(format!("{v}\n"), json!({ "value": v.to_string() }));
            Ok(Answer { code: if v == TruthValue::T { 0 } else { 1 }, text, certificate: None })
        }
        Command::Valid { formula } => {
            let f = parse_formula(formula).map_err(parse_err("formula"))?;
            let s = Sequent3::new([], [], [f]);
            Ok(decide_sequent(&s, ctx, "valid", "invalid"))
        }
        Command::Prove { sequent } => {
            let s: Sequent3 = sequent.parse().map_err(parse_err("sequent"))?;
            Ok(decide_sequent(&s, ctx, "provable", "unprovable"))
        }
        Command::Refute { antisequent } => {
            let a: AntiSequent3 = antisequent.parse().map_err(parse_err("anti-sequent"))?;
            match refute(&a) {
                Ok(r) => {
                    let w = countermodel_of(&r).expect("search produces well-formed refutations");
                    let c = Certificate::Refutation(r);
                    let text = ctx.render(
                        format!("refutable\nwitness: {w}\n"),
                        json!({ "result": "refutable", "witness": w.to_string(), "certificate": cert_json(&c) }),
                    );
                    Ok(Answer { code: 0, text, certificate: Some(c) })
                }
                Err(_) => {
                    let p = prove(&a.as_sequent()).expect("irrefutable anti-sequents are provable as sequents");
                    let c = Certificate::Proof(p);
                    let text = ctx.render(
                        "irrefutable\n".to_string(),
                        json!({ "result": "irrefutable", "certificate": cert_json(&c) }),
                    );
                    Ok(Answer { code: 1, text, certificate: Some(c) })
                }
            }
        }
        Command::Extensions { file } => {
            let theory = read_theory(file, ctx)?;
            let exts = extensions(&theory);
            let mut text = String::new();
            if exts.is_empty() {
                text.push_str("no extensions\n");
            }
            for (k, e) in exts.iter().enumerate() {
                text.push_str(&format!("extension {}: {e}\n", k + 1));
            }
            let doc = json!({ "extensions": exts.iter().map(render_extension).collect::<Vec<_>>() });
            Ok(Answer { code: if exts.is_empty() { 1 } else { 0 }, text: ctx.render(text, doc), certificate: None })
        }
        Command::Brave { file, sigma, theta } => {
            let theory = read_theory(file, ctx)?;
            let sigma = parse_formula_list(sigma).map_err(parse_err("--in"))?;
            let theta = parse_formula_list(theta).map_err(parse_err("--out"))?;
            let q = BraveSequent::new(&theory, sigma, theta);
            match brave_prove_with_limit(&q, max_states()?)? {
                Some(p) => {
                    let mut text = String::from("derivable\n");
                    let basis: Vec<String> = p.basis.iter().map(Formula::to_string).collect();
                    text.push_str(&format!("extension: {{{}}}\n", basis.join(", ")));
                    for d in &p.dispositions {
                        let i = d.default_index();
                        let what = match d {
                            Disposition::Fired { .. } => "fired".to_string(),
                            Disposition::BlockedByPrerequisite { .. } => "blocked: prerequisite not derivable".to_string(),
                            Disposition::BlockedByJustification { index, .. } => {
                                format!("blocked: justification {} refuted", index + 1)
                            }
                            Disposition::BlockedByCertainty { .. } => "blocked: consequent not certain-consistent".to_string(),
                        };
                        text.push_str(&format!("  default {i} ({}): {what}\n", q.delta[i]));
                    }
                    let c = Certificate::Brave(p);
                    let doc = json!({ "result": "derivable", "certificate": cert_json(&c) });
                    Ok(Answer { code: 0, text: ctx.render(text, doc), certificate: Some(c) })
                }
                None => {
                    let text = ctx.render("underivable\n".to_string(), json!({ "result": "underivable" }));
                    Ok(Answer { code: 1, text, certificate: None })
                }
            }
        }
        Command::Skeptical { file, constraints, goals } => {
            let theory = read_theory(file, ctx)?;
            let constraints = parse_constraints(constraints)?;
            let goals = parse_formula_list(goals).map_err(parse_err("--goals"))?;
            let q = SkepticalSequent::new(constraints, &theory, goals);
            match skeptical_decide(&q) {
                SkepticalOutcome::Proved(p) => {
                    let c = Certificate::Skeptical(p);
                    let doc = json!({ "result": "derivable", "certificate": cert_json(&c) });
                    Ok(Answer { code: 0, text: ctx.render("derivable\n".to_string(), doc), certificate: Some(c) })
                }
                SkepticalOutcome::Refuted { counter } => {
                    let text = format!("underivable\ncounter-extension: {counter}\n");
                    let doc = json!({ "result": "underivable", "counter_extension": render_extension(&counter) });
                    Ok(Answer { code: 1, text: ctx.render(text, doc), certificate: None })
                }
            }
        }
        Command::Check { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|source| CliError::Io { path: file.display().to_string(), source })?;
            let cert = parse_certificate(&text)?;
            let kind = match &cert {
                Certificate::Proof(_) => "proof",
                Certificate::Refutation(_) => "refutation",
                Certificate::Brave(_) => "brave",
                Certificate::Skeptical(_) => "skeptical",
            };
            match check_certificate(&cert) {
                Ok(()) => {
                    let text = ctx.render(format!("ok: {kind} certificate\n"), json!({ "result": "ok", "kind": kind }));
                    Ok(Answer { code: 0, text, certificate: None })
                }
                Err(e) => {
                    let text = ctx.render(
                        format!("rejected: {e}\n"),
                        json!({ "result": "rejected", "kind": kind, "reason": e.to_string() }),
                    );
                    Ok(Answer { code: 1, text, certificate: None })
                }
            }
        }
    }
}

fn parse_constraints(text: &str) -> Result<Vec<SignedConstraint>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| SignedConstraint::parse(item).map_err(parse_err("--constraints")))
        .collect()
}

fn decide_sequent(s: &Sequent3, ctx: &Context, yes: &str, no: &str) -> Answer {
    match prove(s) {
        Ok(p) => {
            let c = Certificate::Proof(p);
            let text = ctx.render(format!("{yes}\n"), json!({ "result": yes, "certificate": cert_json(&c) }));
            Answer { code: 0, text, certificate: Some(c) }
        }
        Err(_) => {
            let r = refute(&AntiSequent3::from(s)).expect("unprovable sequents are refutable");
            let w = countermodel_of(&r).expect("search produces well-formed refutations");
            let c = Certificate::Refutation(r);
            let text = ctx.render(
                format!("{no}\ncounter: {w}\n"),
                json!({ "result": no, "counter": w.to_string(), "certificate": cert_json(&c) }),
            );
            Answer { code: 1, text, certificate: Some(c) }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["luk3"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eval_prints_value() {
        assert_eq!(run_args(&["eval", "--interp", "p=u", "M p"]), (0, "t\n".into(), String::new()));
        let (code, out, _) = run_args(&["eval", "--interp", "p=u", "L p"]);
        assert_eq!((code, out.as_str()), (1, "f\n"));
    }

    #[test]
    fn valid_prints_counter() {
        let (code, out, _) = run_args(&["valid", "p | ~p"]);
        assert_eq!(code, 1);
        assert_eq!(out, "invalid\ncounter: p=u\n");
        assert_eq!(run_args(&["valid", "p -> p"]).0, 0);
    }

    #[test]
    fn input_errors_exit_2_without_stdout() {
        for args in [
            &["valid", "p |"][..],
            &["eval", "--interp", "p=t", "p & q"],
            &["eval", "--interp", "p=x", "p"],
            &["prove", "[p;p]"],
            &["frobnicate"],
            &["extensions", "/nonexistent/theory.dl3"],
        ] {
            let (code, out, err) = run_args(args);
            assert_eq!(code, 2, "{args:?}");
            assert!(out.is_empty(), "{args:?}: {out}");
            assert!(!err.is_empty());
        }
        let (_, _, err) = run_args(&["valid", "p |"]);
        assert!(err.contains("line 1, column 4"), "{err}");
        let (_, _, err) = run_args(&["eval", "--interp", "p=t", "p & q"]);
        assert!(err.contains("'q'"), "{err}");
    }

    #[test]
    fn json_axiom_certificate() {
        let (code, out, _) = run_args(&["--json", "prove", "[p;p;p]"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "{\"result\":\"provable\",\"certificate\":{\"rule\":\"axiom\",\"sequent\":\"[p ; p ; p]\",\"premises\":[]}}\n"
        );
    }
}
