//! Command-line driver. Every command prints one JSON report on stdout and
//! exits 0 when all requested checks pass, 2 when a check fails and 1 on a
//! usage or input error.

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::cohomology::{check_embedding_chain_map, first_order_deformation_check, loday_betti, DeformationComplex};
use crate::enveloping::TruncatedEnveloping;
use crate::error::{Error, Result};
use crate::examples::{example_scalar, EXAMPLES};
use crate::hopf::{cyclic_group_algebra, polynomial_hopf_k3, polynomial_primitive, s3_group_algebra, FilteredBialgebra};
use crate::io::{canonical_json, parse_comul_perturbation, parse_rack, parse_rack_perturbation, StructureFile};
use crate::linalg::SparseVec;
use crate::rack::{leibniz_of, RackBialgebra};
use crate::scalar::{parse_scalar, Ring, Scalar};
use crate::yd::YdRackStructure;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

const DEFAULT_MAX_DIM: usize = 64;

#[derive(Parser, Debug)]
#[command(name = "rackkit", version, about = "Exact checks for rack bialgebras, their enveloping algebras and deformation complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the rack bialgebra axioms and report cocommutativity.
    Check { file: String },
    /// List the built-in examples, or print one as a structure file.
    Examples { name: Option<String> },
    /// Truncated enveloping algebra: dimension series, coideal and action checks.
    Env {
        file: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 2)]
        slack: usize,
        /// Print only the dimension series and the stabilisation flag.
        #[arg(long)]
        series: bool,
    },
    /// Yetter-Drinfeld rack structure over a Hopf algebra.
    Ydcheck {
        file: String,
        /// k3:N, poly:VARS:N, cyclic:N, s3, or enveloping:N
        #[arg(long)]
        hopf: String,
        /// Images of the basis in H, e.g. "x=X,y=Y,z=Z,t=0"; not used for enveloping
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 2)]
        slack: usize,
    },
    /// The tetramodule over the truncated enveloping algebra and the map f.
    Lm {
        file: String,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 2)]
        slack: usize,
    },
    /// Coderivation spaces, differentials and Betti numbers of the deformation complex.
    Cohomology {
        file: String,
        #[arg(long, default_value_t = 2)]
        max_n: usize,
        #[arg(long)]
        betti: bool,
    },
    /// Check that extension by zero of Loday cochains is a chain map.
    LeibnizEmbed {
        file: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// First-order deformation over dual numbers.
    Deform {
        file: String,
        /// JSON file `label → [[left, right, scalar], …]` giving the ε part of Δ
        #[arg(long)]
        dcomul: Option<String>,
        /// JSON file `"a,b" → [[label, scalar], …]` giving the ε part of ◁
        #[arg(long)]
        drack: Option<String>,
    },
}

fn max_dim() -> Result<usize> {
    match std::env::var("RACKKIT_MAX_DIM") {
        Err(_) => Ok(DEFAULT_MAX_DIM),
        Ok(s) => s.trim().parse().map_err(|_| Error::parse("RACKKIT_MAX_DIM", format!("not a dimension: {s:?}"))),
    }
}

fn bound(what: &str, size: usize) -> Result<()> {
    let limit = max_dim()?;
    if size > limit {
        return Err(Error::ResourceBound { what: what.into(), size, limit });
    }
    Ok(())
}

fn read(path: &str) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// A path to a structure file, or the name of a built-in example.
fn load_rack(source: &str) -> Result<RackBialgebra<Scalar>> {
    let r = if !Path::new(source).exists() && EXAMPLES.iter().any(|e| e.name == source) {
        example_scalar(source)?
    } else {
        parse_rack(&read(source)?)?
    };
    bound("structure dimension", r.dim())?;
    Ok(r)
}

fn parse_carrier(carrier: &str) -> Result<FilteredBialgebra> {
    let bad = || Error::parse("--hopf", format!("unknown carrier {carrier:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let parts: Vec<&str> = carrier.split(':').collect();
    let h = match parts.as_slice() {
        ["k3", n] => polynomial_hopf_k3(num(n)?)?,
        ["poly", vars, n] => polynomial_primitive(&vars.split(',').collect::<Vec<_>>(), num(n)?)?,
        ["cyclic", n] => cyclic_group_algebra(num(n)?)?,
        ["s3"] => s3_group_algebra()?,
        _ => return Err(bad()),
    };
    bound("carrier dimension", h.dim())?;
    Ok(h)
}

/// `"X"`, `"2*X"`, `"-X+1/2*YZ"` or `"0"` over the basis labels of `h`.
fn parse_element(h: &FilteredBialgebra, field: &str, s: &str) -> Result<SparseVec<Scalar>> {
    let mut v = SparseVec::zero(h.dim());
    let s = s.replace(' ', "");
    if s == "0" {
        return Ok(v);
    }
    for term in s.replace('-', "+-").split('+').filter(|t| !t.is_empty()) {
        let (c, label) = match term.rsplit_once('*') {
            Some((c, l)) => (parse_scalar::<Scalar>(field, c)?, l),
            None => match term.strip_prefix('-') {
                Some(l) => (-Scalar::one(), l),
                None => (Scalar::one(), term),
            },
        };
        let k = h.index_of(label).ok_or_else(|| Error::parse(field, format!("unknown carrier label {label:?}")))?;
        v.add_term(k, c);
    }
    Ok(v)
}

fn parse_qmap(r: &RackBialgebra<Scalar>, h: &FilteredBialgebra, text: &str) -> Result<Vec<SparseVec<Scalar>>> {
    let mut images: Vec<Option<SparseVec<Scalar>>> = vec![None; r.dim()];
    images[r.unit()] = Some(h.one());
    for item in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (l, e) = item.split_once('=').ok_or_else(|| Error::parse("--q", format!("expected label=element, found {item:?}")))?;
        let l = l.trim();
        let k = r.coalgebra().index_of(l).ok_or_else(|| Error::parse("--q", format!("unknown label {l:?}")))?;
        if k != r.unit() && images[k].is_some() {
            return Err(Error::parse("--q", format!("duplicate entry for {l:?}")));
        }
        images[k] = Some(parse_element(h, &format!("--q.{l}"), e)?);
    }
    images
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| Error::parse("--q", format!("missing image of {:?}", r.label(k)))))
        .collect()
}

fn with_pass(pass: bool, mut body: Value) -> Value {
    body["pass"] = json!(pass);
    body
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn execute(cmd: Command) -> Result<Value> {
    match cmd {
        Command::Check { file } => {
            let r = load_rack(&file)?;
            let rep = r.check();
            Ok(with_pass(
                rep.all_hold(),
                json!({
                    "command": "check",
                    "dim": r.dim(),
                    "axioms": to_value(&rep)?,
                    "cocommutative": r.coalgebra().is_cocommutative(),
                }),
            ))
        }
        Command::Examples { name: None } => {
            let list: Vec<Value> = EXAMPLES.iter().map(|e| json!({"name": e.name, "description": e.description})).collect();
            Ok(with_pass(true, json!({"command": "examples", "examples": list})))
        }
        Command::Examples { name: Some(name) } => {
            let mut f = StructureFile::from_rack(&example_scalar(&name)?);
            f.metadata.insert("name".into(), json!(name));
            Ok(to_value(&f)?)
        }
        Command::Env { file, degree, slack, series } => {
            let r = load_rack(&file)?;
            let u = TruncatedEnveloping::build(&r, degree, slack)?;
            let action = u.check_action();
            let coideal_ok = !r.coalgebra().is_cocommutative() || u.coideal().holds();
            let pass = action.holds() && coideal_ok;
            if series {
                return Ok(with_pass(pass, json!({"command": "env", "dims": u.hilbert_series(), "stabilized": u.stabilized()})));
            }
            Ok(with_pass(pass, json!({"command": "env", "report": to_value(&u.report())?, "action": to_value(&action)?})))
        }
        Command::Ydcheck { file, hopf, q, slack } => {
            let r = load_rack(&file)?;
            let yd = match hopf.strip_prefix("enveloping:") {
                Some(n) => {
                    let d = n.parse().map_err(|_| Error::parse("--hopf", format!("bad degree {n:?}")))?;
                    TruncatedEnveloping::build(&r, d, slack)?.canonical_yd()?
                }
                None => {
                    let h = parse_carrier(&hopf)?;
                    let q = q.ok_or_else(|| Error::parse("--q", "required unless --hopf is enveloping:N"))?;
                    let images = parse_qmap(&r, &h, &q)?;
                    YdRackStructure::derived_from_images(r.clone(), h, images)?
                }
            };
            let rep = yd.check()?;
            let mut body = json!({"command": "ydcheck", "carrier_dim": yd.carrier().dim(), "yd": to_value(&rep)?});
            let mut pass = rep.all_hold();
            if r.coalgebra().is_cocommutative() {
                let co = yd.coaction_report()?;
                pass &= co.all_hold();
                body["coaction"] = to_value(&co)?;
            }
            Ok(with_pass(pass, body))
        }
        Command::Lm { file, degree, slack } => {
            let r = load_rack(&file)?;
            let u = TruncatedEnveloping::build(&r, degree, slack)?;
            let (m, rep) = u.lm_bialgebra_object()?;
            Ok(with_pass(rep.all_hold(), json!({"command": "lm", "dim": m.dim(), "tetramodule": to_value(&rep)?})))
        }
        Command::Cohomology { file, max_n, betti } => {
            let r = load_rack(&file)?;
            let cx = DeformationComplex::new(r)?;
            let rep = cx.report(max_n)?;
            let mut body = json!({
                "command": "cohomology",
                "coderivation_dims": rep.coderivation_dims,
                "ranks": rep.ranks,
                "d_squared_zero": rep.d_squared_zero,
            });
            if betti {
                body["betti"] = json!(rep.betti);
            }
            Ok(with_pass(rep.d_squared_zero.iter().all(|b| *b), body))
        }
        Command::LeibnizEmbed { file, n } => {
            let l = leibniz_of(&load_rack(&file)?)?;
            let mut reports = Vec::new();
            let mut pass = true;
            for k in 1..=n {
                let rep = check_embedding_chain_map(&l, k)?;
                pass &= rep.holds();
                reports.push(json!({"n": k, "report": to_value(&rep)?}));
            }
            Ok(with_pass(pass, json!({"command": "leibniz-embed", "embedding": reports, "loday_betti": loday_betti(&l, n)?})))
        }
        Command::Deform { file, dcomul, drack } => {
            let r = load_rack(&file)?;
            let labels = r.labels().to_vec();
            let d = r.dim();
            let dc = match dcomul {
                Some(p) => parse_comul_perturbation(&read(&p)?, &labels)?,
                None => vec![SparseVec::zero(d * d); d],
            };
            let dr = match drack {
                Some(p) => parse_rack_perturbation(&read(&p)?, &labels)?,
                None => vec![SparseVec::zero(d); d * d],
            };
            let (deformed, rep) = first_order_deformation_check(&r, &dc, &dr)?;
            Ok(with_pass(
                rep.all_hold(),
                json!({"command": "deform", "report": to_value(&rep)?, "structure": to_value(&StructureFile::from_rack(&deformed))?}),
            ))
        }
    }
}

/// Failures of a mathematical check, as opposed to bad input.
fn is_verification_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::AxiomViolation(_) | Error::ImageEscapes(_) | Error::NotVanishing(_) | Error::GeneratorActsNonzero(_)
    )
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = write!(if code == EXIT_PASS { out as &mut dyn Write } else { err as &mut dyn Write }, "{e}");
            return code;
        }
    };
    let (code, report) = match execute(cli.command) {
        Ok(v) => {
            let pass = v.get("pass").and_then(Value::as_bool).unwrap_or(true);
            (if pass { EXIT_PASS } else { EXIT_FAIL }, v)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let code = if is_verification_failure(&e) { EXIT_FAIL } else { EXIT_USAGE };
            (code, json!({"error": e.to_string(), "pass": false}))
        }
    };
    match canonical_json(&report) {
        Ok(s) => {
            let _ = out.write_all(s.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::serialize_rack;
    use crate::rack::nc5;

    fn run_args(args: &[&str]) -> (i32, Value) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["rackkit"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        let v = serde_json::from_slice(&out).unwrap_or(Value::Null);
        (code, v)
    }

    fn temp_file(name: &str, text: &str) -> String {
        let dir = std::env::temp_dir().join(format!("rackkit-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    #[test]
    fn check_nc5_file() {
        let p = temp_file("nc5.json", &serialize_rack(&nc5::<Scalar>()));
        let (code, v) = run_args(&["check", &p]);
        assert_eq!(code, 0);
        assert_eq!(v["cocommutative"], json!(false));
        for k in ["selfdist", "morphism", "counit_mult", "unit_right", "unit_left"] {
            assert_eq!(v["axioms"][k]["holds"], json!(true), "{k}");
        }
    }

    #[test]
    fn check_mutated_nc5_fails_with_counterexample() {
        let r = nc5::<Scalar>().with_product(1, 2, SparseVec::unit(5, 1)).unwrap();
        let p = temp_file("mutated_nc5.json", &serialize_rack(&r));
        let (code, v) = run_args(&["check", &p]);
        assert_eq!(code, 2);
        assert_eq!(v["axioms"]["morphism"]["holds"], json!(false));
        assert_eq!(v["axioms"]["morphism"]["counterexample"], json!(["x", "y"]));
    }

    #[test]
    fn env_series() {
        let (code, v) = run_args(&["env", "leibniz2", "--degree", "3", "--slack", "2", "--series"]);
        assert_eq!(code, 0);
        assert_eq!(v["dims"], json!([1, 2, 3, 4]));
        assert_eq!(v["stabilized"], json!(true));
    }

    #[test]
    fn examples_dump_and_list() {
        let (code, v) = run_args(&["examples"]);
        assert_eq!(code, 0);
        assert!(v["examples"].as_array().unwrap().len() >= 6);
        let (code, v) = run_args(&["examples", "nc5"]);
        assert_eq!(code, 0);
        assert_eq!(v["coproduct"]["x"][2], json!(["y", "z", "1"]));
        let (code, _) = run_args(&["examples", "nope"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn usage_and_parse_errors_exit_one() {
        assert_eq!(run_args(&["frobnicate"]).0, 1);
        assert_eq!(run_args(&["check"]).0, 1);
        let p = temp_file("bad.json", "{\"ring\": \"Q\"");
        let (code, v) = run_args(&["check", &p]);
        assert_eq!(code, 1);
        assert!(v["error"].is_string());
        assert_eq!(run_args(&["check", "/nonexistent/file.json"]).0, 1);
    }

    #[test]
    fn ydcheck_nc5_over_k3() {
        let (code, v) = run_args(&["ydcheck", "nc5", "--hopf", "k3:3", "--q", "x=X,y=Y,z=Z,t=0"]);
        assert_eq!(code, 0, "{v}");
        let (code, _) = run_args(&["ydcheck", "nc5", "--hopf", "k3:3", "--q", "x=Y,y=Y,z=Z,t=0"]);
        assert_eq!(code, 2);
        assert_eq!(run_args(&["ydcheck", "nc5", "--hopf", "k3:3", "--q", "x=W"]).0, 1);
    }

    #[test]
    fn ydcheck_over_enveloping_and_lm() {
        assert_eq!(run_args(&["ydcheck", "leibniz2", "--hopf", "enveloping:2"]).0, 0);
        let (code, v) = run_args(&["lm", "conjZ2", "--degree", "2"]);
        assert_eq!(code, 0, "{v}");
    }

    #[test]
    fn cohomology_and_embedding() {
        let (code, v) = run_args(&["cohomology", "abelian1", "--max-n", "2", "--betti"]);
        assert_eq!(code, 0);
        assert_eq!(v["d_squared_zero"], json!([true]));
        assert!(v["betti"].is_array());
        assert_eq!(run_args(&["cohomology", "nc5"]).0, 1);
        let (code, v) = run_args(&["leibniz-embed", "lie2", "--n", "2"]);
        assert_eq!(code, 0);
        assert_eq!(v["loday_betti"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn deform_nc5c0() {
        let p = temp_file("dcomul.json", r#"{"x": [["y", "z", "1"]]}"#);
        let (code, v) = run_args(&["deform", "nc5c0", "--dcomul", &p]);
        assert_eq!(code, 0);
        assert_eq!(v["structure"]["ring"], json!("Q[eps]"));
        let bad = temp_file("dcomul_bad.json", r#"{"y": [["x", "1", "1"]]}"#);
        assert_eq!(run_args(&["deform", "nc5c0", "--dcomul", &bad]).0, 2);
    }

    #[test]
    fn max_dim_is_enforced() {
        assert_eq!(bound("x", DEFAULT_MAX_DIM).ok(), Some(()));
        assert!(matches!(bound("x", DEFAULT_MAX_DIM + 1), Err(Error::ResourceBound { .. })));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_args(&["env", "lie2", "--degree", "2"]).1;
        let b = run_args(&["env", "lie2", "--degree", "2"]).1;
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn element_parser() {
        let h = polynomial_hopf_k3(2).unwrap();
        let v = parse_element(&h, "f", "-X+1/2*YZ").unwrap();
        assert_eq!(v.coeff(h.index_of("X").unwrap()), -Scalar::one());
        assert_eq!(v.coeff(h.index_of("YZ").unwrap()), Scalar::new(1, 2));
        assert!(parse_element(&h, "f", "2/4*X").is_err());
        assert!(parse_element(&h, "f", "0").unwrap().is_zero());
    }
}
