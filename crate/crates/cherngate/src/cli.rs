//! Command-line front end: file-driven, scriptable access to the checkers
//! and to the Schubert-calculus internals.
//!
//! Exit codes: 0 for success or a passing verdict, 1 for a failing verdict,
//! 2 for usage or validation errors.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bott_samelson::q_matrix;
use crate::error::{Error, Result};
use crate::gate::{
    buhstaber_bound, calibrate, check_dim4, check_dim5, check_flag, check_flag_weights,
    check_projective, check_torsion_free, check_wu, parse_flag_tuple, parse_model_tuple,
    CalibrationReport, Conventions, TorsionFreeOptions, Verdict,
};
use crate::manifold::{ingest_file, projective_space, FlagTarget};
use crate::root_system::{render_int_vec, CartanType, RootDatum};
use crate::weyl::{self, WeylElement, DEFAULT_GROUP_LIMIT};

#[derive(Parser, Debug)]
#[command(
    name = "cherngate",
    version,
    about = "Exact admissibility checks for candidate Chern classes of stable-rank bundles"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Path of the persisted calibration record
    #[arg(long, global = true, default_value = "cherngate-calibration.json")]
    config: PathBuf,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the root datum of a Cartan type (e.g. A2, A1xC3)
    Roots { ctype: String },
    /// Enumerate the Weyl group
    Weyl {
        ctype: String,
        /// Also print the Bruhat order as pairs
        #[arg(long)]
        bruhat: bool,
    },
    /// Print the structure-sheaf change-of-basis matrix as a JSON table
    Qmatrix {
        ctype: String,
        /// Preferred reduced word of the longest element, e.g. s1*s2*s1 or 121
        #[arg(long)]
        word: Option<String>,
    },
    /// Run an admissibility checker
    #[command(subcommand)]
    Check(CheckCmd),
    /// Run the convention-calibration suite and persist the chosen flags
    Calibrate { ctype: String },
    /// The coboundary-annihilation bound for a given q
    Buhstaber { q: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Cells,
    Weights,
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// Projective space of complex dimension n
    Pn {
        n: usize,
        /// Tuple file: lines `c<i> = <integer combo of basis names>`
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Flag manifold G/P for a parabolic subgroup
    Flag {
        ctype: String,
        /// Comma-separated 1-based simple-root indices generating P
        #[arg(long)]
        parabolic: Option<String>,
        /// Tuple file: lines `c<i> = <integer polynomial in x1..xr>`
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Cells)]
        route: Route,
    },
    /// User-supplied ring model
    Model {
        model: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
        /// Run the dimension-4 checker
        #[arg(long)]
        dim4: bool,
        /// Run the dimension-5 checker
        #[arg(long)]
        dim5: bool,
        /// Run the Wu-congruence checker
        #[arg(long)]
        wu: bool,
    },
}

/// Persisted calibration record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationConfig {
    pub conventions: Conventions,
    pub verified_types: Vec<String>,
}

pub fn load_calibration(path: &Path) -> Result<CalibrationConfig> {
    let text = std::fs::read_to_string(path).map_err(|_| Error::MissingCalibration)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("calibration file: {e}")))
}

fn store_calibration(path: &Path, report: &CalibrationReport) -> Result<CalibrationConfig> {
    let mut cfg = match load_calibration(path) {
        Ok(cfg) => cfg,
        Err(_) => CalibrationConfig {
            conventions: report.chosen,
            verified_types: Vec::new(),
        },
    };
    if cfg.conventions != report.chosen {
        return Err(Error::Internal(
            "existing calibration record disagrees with the new run".into(),
        ));
    }
    if !cfg.verified_types.contains(&report.datum) {
        cfg.verified_types.push(report.datum.clone());
        cfg.verified_types.sort();
    }
    let text = serde_json::to_string_pretty(&cfg).expect("serializable");
    std::fs::write(path, text + "\n")?;
    Ok(cfg)
}

/// Run the CLI on the given arguments; returns (exit code, stdout, stderr).
pub fn execute(argv: &[String]) -> (i32, String, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, rendered, String::new()),
                _ => (2, String::new(), rendered),
            };
        }
    };
    match dispatch(&cli) {
        Ok((code, out)) => (code, out, String::new()),
        Err(e) => (2, String::new(), format!("error: {e}\n")),
    }
}

/// Entry point used by the binary.
pub fn run(argv: Vec<String>) -> i32 {
    let (code, out, err) = execute(&argv);
    print!("{out}");
    eprint!("{err}");
    code
}

fn dispatch(cli: &Cli) -> Result<(i32, String)> {
    match &cli.cmd {
        Command::Roots { ctype } => {
            let ct: CartanType = ctype.parse()?;
            let datum = RootDatum::build(ct)?;
            Ok((0, render_roots(&datum, cli.json)))
        }
        Command::Weyl { ctype, bruhat } => {
            let ct: CartanType = ctype.parse()?;
            let datum = RootDatum::build(ct)?;
            let all = weyl::enumerate(&datum, DEFAULT_GROUP_LIMIT)?;
            Ok((0, render_weyl(&datum, &all, *bruhat, cli.json)))
        }
        Command::Qmatrix { ctype, word } => {
            let ct: CartanType = ctype.parse()?;
            let datum = RootDatum::build(ct)?;
            let parsed_word = match word {
                Some(w) => Some(WeylElement::parse_word(&datum, w)?),
                None => None,
            };
            let conventions = Conventions::calibrated();
            let q = q_matrix(
                &datum,
                parsed_word.as_deref(),
                conventions.schubert_indexing,
                DEFAULT_GROUP_LIMIT,
            )?;
            let json = serde_json::to_string_pretty(&q.to_json()).expect("serializable");
            Ok((0, json + "\n"))
        }
        Command::Check(check) => {
            let verdict = run_check(cli, check)?;
            let out = if cli.json {
                serde_json::to_string_pretty(&verdict).expect("serializable") + "\n"
            } else {
                verdict.render_text()
            };
            Ok((if verdict.pass { 0 } else { 1 }, out))
        }
        Command::Calibrate { ctype } => {
            let ct: CartanType = ctype.parse()?;
            let report = calibrate(&ct)?;
            let cfg = store_calibration(&cli.config, &report)?;
            let out = if cli.json {
                serde_json::to_string_pretty(&report).expect("serializable") + "\n"
            } else {
                let mut s = format!("datum: {}\n", report.datum);
                for o in &report.oracles {
                    s.push_str(&format!(
                        "  [{}] {}: {}\n",
                        if o.pass { "pass" } else { "FAIL" },
                        o.convention,
                        o.oracle
                    ));
                }
                s.push_str(&format!(
                    "chosen: rho-twist sign {:+}, schubert indexing {:?}\n",
                    report.chosen.rho_twist_sign, report.chosen.schubert_indexing
                ));
                s.push_str(&format!(
                    "calibration written to {} (verified: {})\n",
                    cli.config.display(),
                    cfg.verified_types.join(", ")
                ));
                s
            };
            Ok((0, out))
        }
        Command::Buhstaber { q } => {
            let m = buhstaber_bound(*q);
            if cli.json {
                Ok((0, format!("{{\n  \"q\": {q},\n  \"bound\": \"{m}\"\n}}\n")))
            } else {
                Ok((0, format!("{m}\n")))
            }
        }
    }
}

fn run_check(cli: &Cli, check: &CheckCmd) -> Result<Verdict> {
    match check {
        CheckCmd::Pn { n, tuple } => {
            let model = projective_space(*n);
            let text = std::fs::read_to_string(tuple)?;
            let t = parse_model_tuple(&model, &text)?;
            check_projective(*n, &t)
        }
        CheckCmd::Flag {
            ctype,
            parabolic,
            tuple,
            route,
        } => {
            let ct: CartanType = ctype.parse()?;
            let parabolic = parse_parabolic(parabolic.as_deref())?;
            let target = FlagTarget::new(ct, parabolic)?;
            let cfg = load_calibration(&cli.config).map_err(|_| {
                Error::Parse(format!(
                    "no calibration record at {}; run `cherngate calibrate A2` first",
                    cli.config.display()
                ))
            })?;
            let text = std::fs::read_to_string(tuple)?;
            let classes = parse_flag_tuple(&target, &text)?;
            match route {
                Route::Cells => {
                    check_flag(&target, &classes, &cfg.conventions, DEFAULT_GROUP_LIMIT)
                }
                Route::Weights => {
                    check_flag_weights(&target, &classes, &cfg.conventions, DEFAULT_GROUP_LIMIT)
                }
            }
        }
        CheckCmd::Model {
            model,
            tuple,
            dim4,
            dim5,
            wu,
        } => {
            let m = ingest_file(model)?;
            let text = std::fs::read_to_string(tuple)?;
            let t = parse_model_tuple(&m, &text)?;
            if [*dim4, *dim5, *wu].iter().filter(|b| **b).count() > 1 {
                return Err(Error::Parse(
                    "choose at most one of --dim4, --dim5, --wu".into(),
                ));
            }
            if *dim4 {
                check_dim4(&m, &t)
            } else if *dim5 {
                check_dim5(&m, &t)
            } else if *wu {
                check_wu(&m, &t)
            } else {
                check_torsion_free(&m, &t, &TorsionFreeOptions::default())
            }
        }
    }
}

fn parse_parabolic(s: Option<&str>) -> Result<Vec<usize>> {
    let Some(s) = s else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let i: usize = part
            .parse()
            .map_err(|_| Error::Parse(format!("bad parabolic index `{part}`")))?;
        if i == 0 {
            return Err(Error::Parse("parabolic indices are 1-based".into()));
        }
        out.push(i - 1);
    }
    Ok(out)
}

fn render_roots(datum: &RootDatum, json: bool) -> String {
    if json {
        let value = serde_json::json!({
            "type": datum.ctype.to_string(),
            "rank": datum.rank,
            "dim_gb": datum.num_positive(),
            "cartan": datum.cartan,
            "simple_roots": datum.simple_roots.iter().map(|r| r.wt.clone()).collect::<Vec<_>>(),
            "positive_roots": datum.positive_roots.iter().map(|r| r.wt.clone()).collect::<Vec<_>>(),
            "rho": datum.rho,
            "weyl_order": datum.ctype.weyl_order().to_string(),
        });
        serde_json::to_string_pretty(&value).expect("serializable") + "\n"
    } else {
        let mut s = String::new();
        s.push_str(&format!("type: {}\n", datum.ctype));
        s.push_str(&format!("rank: {}\n", datum.rank));
        s.push_str(&format!("dim G/B: {}\n", datum.num_positive()));
        s.push_str("cartan matrix:\n");
        for row in &datum.cartan {
            s.push_str(&format!("  {row:?}\n"));
        }
        let simples: Vec<String> = datum
            .simple_roots
            .iter()
            .map(|r| render_int_vec(&r.wt))
            .collect();
        s.push_str(&format!("simple roots: {}\n", simples.join(" ")));
        let positives: Vec<String> = datum
            .positive_roots
            .iter()
            .map(|r| render_int_vec(&r.wt))
            .collect();
        s.push_str(&format!("positive roots: {}\n", positives.join(" ")));
        s.push_str(&format!("rho: {}\n", render_int_vec(&datum.rho)));
        s.push_str(&format!("|W|: {}\n", datum.ctype.weyl_order()));
        s
    }
}

fn render_weyl(datum: &RootDatum, all: &[WeylElement], bruhat: bool, json: bool) -> String {
    if json {
        let elements: Vec<serde_json::Value> = all
            .iter()
            .map(|w| {
                serde_json::json!({
                    "word": w.render(),
                    "length": w.len(),
                    "key": w.key,
                })
            })
            .collect();
        let mut value = serde_json::json!({
            "type": datum.ctype.to_string(),
            "order": all.len(),
            "elements": elements,
        });
        if bruhat {
            let mut pairs = Vec::new();
            for u in all {
                for w in all {
                    if u != w && weyl::bruhat_leq(datum, u, w) {
                        pairs.push(serde_json::json!([u.render(), w.render()]));
                    }
                }
            }
            value["bruhat"] = serde_json::Value::Array(pairs);
        }
        serde_json::to_string_pretty(&value).expect("serializable") + "\n"
    } else {
        let mut s = format!("|W({})| = {}\n", datum.ctype, all.len());
        for w in all {
            s.push_str(&format!(
                "{}  len={}  key={}\n",
                w.render(),
                w.len(),
                render_int_vec(&w.key)
            ));
        }
        if bruhat {
            s.push_str("bruhat order (u < w):\n");
            for u in all {
                for w in all {
                    if u != w && weyl::bruhat_leq(datum, u, w) {
                        s.push_str(&format!("  {} < {}\n", u.render(), w.render()));
                    }
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = std::iter::once("cherngate".to_string())
            .chain(args.iter().map(|s| s.to_string()))
            .collect();
        execute(&argv)
    }

    #[test]
    fn buhstaber_cli() {
        let (code, out, _) = run_args(&["buhstaber", "7"]);
        assert_eq!(code, 0);
        assert_eq!(out, "12\n");
        let (code, out, _) = run_args(&["buhstaber", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1\n");
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_args(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        let (code, _, _) = run_args(&["roots", "Z9"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("cherngate"));
    }

    #[test]
    fn roots_deterministic() {
        let (c1, out1, _) = run_args(&["roots", "A2"]);
        let (c2, out2, _) = run_args(&["roots", "A2"]);
        assert_eq!(c1, 0);
        assert_eq!(out1, out2);
        assert!(out1.contains("positive roots"));
        let (c3, json, _) = run_args(&["--json", "roots", "A2"]);
        assert_eq!(c3, 0);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["weyl_order"], "6");
    }

    #[test]
    fn weyl_listing() {
        let (code, out, _) = run_args(&["weyl", "B2", "--bruhat"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("|W(B2)| = 8\n"));
        assert!(out.contains("e < s1"));
    }

    #[test]
    fn qmatrix_word_flag() {
        let (code, out, _) = run_args(&["qmatrix", "A2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["e"]["e"], "1");
        let (code2, out2, _) = run_args(&["qmatrix", "A2", "--word", "s1*s2*s1"]);
        assert_eq!(code2, 0);
        assert_eq!(out, out2);
        let (code3, _, _) = run_args(&["qmatrix", "A2", "--word", "s1*s1*s2"]);
        assert_eq!(code3, 2);
    }

    #[test]
    fn check_pn_flow() {
        let dir = tempfile::tempdir().unwrap();
        let tuple = dir.path().join("t.tuple");
        std::fs::write(&tuple, "c1 = 4 h\nc2 = 6 h2\nc3 = 4 h3\n").unwrap();
        let (code, out, _) = run_args(&["check", "pn", "3", "--tuple", tuple.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("verdict: PASS"));
        // a failing tuple exits 1
        std::fs::write(&tuple, "c2 = h2\n").unwrap();
        let (code, out, _) = run_args(&["check", "pn", "3", "--tuple", tuple.to_str().unwrap()]);
        assert!(out.contains("verdict"));
        // (0, h^2, 0) on P^3 integrates to an integer, so compute expectation
        let p3 = projective_space(3);
        let t = parse_model_tuple(&p3, "c2 = h2\n").unwrap();
        let expect = check_projective(3, &t).unwrap().pass;
        assert_eq!(code == 0, expect);
    }

    #[test]
    fn check_flag_requires_calibration() {
        let dir = tempfile::tempdir().unwrap();
        let tuple = dir.path().join("t.tuple");
        std::fs::write(&tuple, "c1 = x1 + x2\n").unwrap();
        let config = dir.path().join("calib.json");
        let (code, _, err) = run_args(&[
            "--config",
            config.to_str().unwrap(),
            "check",
            "flag",
            "A2",
            "--tuple",
            tuple.to_str().unwrap(),
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("calibrate"), "{err}");
        // calibrate, then the check runs
        let (code, out, err) = run_args(&[
            "--config",
            config.to_str().unwrap(),
            "calibrate",
            "A2",
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("chosen"));
        std::fs::write(&tuple, "c1 = 0\n").unwrap();
        let (code, out, err) = run_args(&[
            "--config",
            config.to_str().unwrap(),
            "check",
            "flag",
            "A2",
            "--tuple",
            tuple.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{out} {err}");
        assert!(out.contains("verdict: PASS"));
    }

    #[test]
    fn check_model_flow() {
        let dir = tempfile::tempdir().unwrap();
        let model = dir.path().join("p2.model");
        std::fs::write(
            &model,
            "name P2\ndim 2\nbasis 1 0\nbasis h 1\nbasis h2 2\nmult h h = h2\nintegrate h2 = 1\ntangent 1 = 3 h\ntangent 2 = 3 h2\n",
        )
        .unwrap();
        let tuple = dir.path().join("t.tuple");
        std::fs::write(&tuple, "c1 = h\nc2 = 2 h2\n").unwrap();
        let (code, out, err) = run_args(&[
            "check",
            "model",
            model.to_str().unwrap(),
            "--tuple",
            tuple.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{out} {err}");
        // conflicting mode flags
        let (code, _, _) = run_args(&[
            "check",
            "model",
            model.to_str().unwrap(),
            "--tuple",
            tuple.to_str().unwrap(),
            "--dim4",
            "--dim5",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn json_verdicts_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let tuple = dir.path().join("t.tuple");
        std::fs::write(&tuple, "c1 = 4 h\nc2 = 6 h2\nc3 = 4 h3\n").unwrap();
        let (code, out, _) = run_args(&[
            "--json",
            "check",
            "pn",
            "3",
            "--tuple",
            tuple.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let v: Verdict = serde_json::from_str(&out).unwrap();
        assert!(v.pass);
        assert_eq!(
            serde_json::to_string_pretty(&v).unwrap() + "\n",
            out
        );
    }
}
