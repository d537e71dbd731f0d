//! Command-line front end. Every command except `corpus` reads a group file
//! from `--group <path>` or standard input.

pub mod corpus;
pub mod format;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, enumerate, ClassRecord, FiniteGroup, GroupSpec, DEFAULT_CAP};
use crate::invariants::{InvariantRing, RgStatus};
use crate::mckay::{class_rg, full_report, poincare_polynomial, predict_homology, ReportOptions};
use crate::polyval::{parse_poly, Coordinates, MonomialValuation};
use crate::strata::{build_strata, semismall_table};

#[derive(Debug, Parser)]
#[command(name = "mckay", version, about = "McKay correspondence predictions for finite matrix groups")]
pub struct Cli {
    /// Group file (JSON); standard input when omitted.
    #[arg(long, global = true)]
    pub group: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Maximum number of group elements to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify SL(V) and Sp(V) membership; exits 3 outside SL(V).
    Check,
    /// Conjugacy classes with orders, weights, ages and fixed dimensions.
    Classes,
    /// Predicted Borel-Moore homology of a crepant resolution.
    Betti,
    /// Value of the monomial valuation of an element on a polynomial.
    Valuation {
        /// Index of the element in the enumerated group.
        #[arg(long)]
        element: usize,
        /// File holding the polynomial in text form.
        #[arg(long)]
        poly: PathBuf,
    },
    /// Fixed-subspace strata up to conjugacy.
    Strata,
    /// Ramification index of every class.
    Rg {
        /// Invariant degree bound (default |G|).
        #[arg(long)]
        degree_bound: Option<usize>,
    },
    /// Full report as JSON.
    Report {
        /// Output path, `-` for standard output.
        #[arg(long)]
        json: PathBuf,
        /// Invariant degree bound for r_g (default |G|).
        #[arg(long)]
        degree_bound: Option<usize>,
        /// Leave out the r_g certificates.
        #[arg(long)]
        no_rg: bool,
    },
    /// Print a built-in group, e.g. `cyclic(5)` or `cyclic_wreath(2,3)`.
    Corpus { name: String },
}

fn read_spec(cli: &Cli, stdin: &mut dyn Read) -> Result<GroupSpec> {
    let text = match &cli.group {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            s
        }
    };
    format::parse_group(&text)
}

fn load(cli: &Cli, stdin: &mut dyn Read) -> Result<(FiniteGroup, Vec<ClassRecord>)> {
    let group = enumerate(&read_spec(cli, stdin)?, cli.cap)?;
    let classes = conjugacy_classes(&group)?;
    Ok((group, classes))
}

fn weights_text(w: &[(u32, usize)]) -> String {
    w.iter()
        .map(|(a, m)| format!("{a}^{m}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `{4: 1, 2: 4}`, highest degree first.
pub fn betti_text(degrees: &std::collections::BTreeMap<u64, usize>) -> String {
    let parts: Vec<String> = degrees.iter().rev().map(|(d, n)| format!("{d}: {n}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    crate::par::set_threads(cli.threads);
    match &cli.command {
        Command::Corpus { name } => {
            let entry = corpus::lookup(name)?;
            writeln!(out, "{}", format::group_to_string(&entry.spec))?;
        }
        Command::Check => {
            let spec = read_spec(cli, stdin)?;
            let sl = spec.generators.iter().all(|g| g.det().is_one());
            let form = spec.form();
            writeln!(out, "dim: {}", spec.dim)?;
            writeln!(out, "sl: {sl}")?;
            if !sl {
                return Err(Error::NotSpecialLinear(
                    "a generator has determinant other than 1".into(),
                ));
            }
            let group = enumerate(&spec, cli.cap)?;
            let symplectic = form.as_ref().is_some_and(|j| group.check_symplectic(j));
            writeln!(out, "symplectic: {symplectic}")?;
            writeln!(out, "order: {}", group.len())?;
            writeln!(out, "exponent: {}", group.exponent())?;
        }
        Command::Classes => {
            let (_, classes) = load(cli, stdin)?;
            writeln!(out, "class\torder\tsize\tage\tfixed_dim\tweights")?;
            for (i, c) in classes.iter().enumerate() {
                writeln!(
                    out,
                    "{i}\t{}\t{}\t{}\t{}\t{}",
                    c.r,
                    c.size,
                    c.age,
                    c.fixed_dim,
                    weights_text(&c.weights)
                )?;
            }
        }
        Command::Betti => {
            let (group, classes) = load(cli, stdin)?;
            let h = predict_homology(&group, &classes)?;
            writeln!(out, "{}", betti_text(&h.degrees))?;
            writeln!(out, "ages: {:?}", poincare_polynomial(&classes)?)?;
            if h.conjectural {
                writeln!(err, "warning: group is not symplectic; prediction is conjectural only")?;
            }
        }
        Command::Valuation { element, poly } => {
            let group = enumerate(&read_spec(cli, stdin)?, cli.cap)?;
            if *element >= group.len() {
                return Err(Error::ElementIndex {
                    index: *element,
                    order: group.len(),
                });
            }
            let text = std::fs::read_to_string(poly)?;
            // the group may have been rescaled to a larger cyclotomic order
            let f = parse_poly(&text, group.dim(), group.cyclotomic_order())?;
            let v = MonomialValuation::from_element(group.element(*element))?;
            writeln!(out, "{}", v.v_eval(&f, Coordinates::Ambient)?)?;
        }
        Command::Strata => {
            let (group, classes) = load(cli, stdin)?;
            let poset = build_strata(&group, &classes)?;
            writeln!(out, "node\tdim\torbit\thalf_codim\tclasses")?;
            for (i, row) in semismall_table(&poset).iter().enumerate() {
                let cs: Vec<String> = row.classes.iter().map(ToString::to_string).collect();
                writeln!(
                    out,
                    "{i}\t{}\t{}\t{}\t{}",
                    row.dim,
                    row.orbit_size,
                    row.bound,
                    cs.join(",")
                )?;
            }
        }
        Command::Rg { degree_bound } => {
            let (group, classes) = load(cli, stdin)?;
            let ring = InvariantRing::new(&group);
            let bound = degree_bound.unwrap_or(group.len());
            // an explicit bound is taken literally
            let escalate = degree_bound.is_none();
            writeln!(out, "class\tr\tr_g\tstatus\tdegree\tnote")?;
            for (i, c) in classes.iter().enumerate() {
                let cert = class_rg(&ring, c, bound, escalate)?;
                let rg = match (cert.status, cert.rg) {
                    (RgStatus::Exact, Some(rg)) => rg.to_string(),
                    _ => format!("{} | r_g | {}", cert.r, cert.rg_bound),
                };
                let status = match cert.status {
                    RgStatus::Exact => "exact",
                    RgStatus::LowerConfidence => "lower_confidence",
                };
                writeln!(
                    out,
                    "{i}\t{}\t{rg}\t{status}\t{}\t{}",
                    cert.r, cert.degree_used, cert.note
                )?;
            }
        }
        Command::Report {
            json,
            degree_bound,
            no_rg,
        } => {
            let group = enumerate(&read_spec(cli, stdin)?, cli.cap)?;
            let options = ReportOptions {
                degree_bound: *degree_bound,
                escalate: degree_bound.is_none(),
                skip_rg: *no_rg,
            };
            let report = full_report(&group, &options)?;
            let text = serde_json::to_string_pretty(&report)?;
            if json.as_os_str() == "-" {
                writeln!(out, "{text}")?;
            } else {
                std::fs::write(json, text + "\n")?;
            }
            if report.group.conjectural_only {
                writeln!(err, "warning: group is not symplectic; prediction is conjectural only")?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str], input: &str) -> (Result<()>, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("mckay").chain(args.iter().copied())).unwrap();
        let mut out = vec![];
        let mut err = vec![];
        let res = run(&cli, &mut input.as_bytes(), &mut out, &mut err);
        (
            res,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn corpus_json(name: &str) -> String {
        exec(&["corpus", name], "").1
    }

    #[test]
    fn cyclic_five_betti() {
        let (res, out, _) = exec(&["betti"], &corpus_json("cyclic(5)"));
        res.unwrap();
        assert_eq!(out.lines().next(), Some("{4: 1, 2: 4}"));
    }

    #[test]
    fn mu4_rg_and_check() {
        let mu4 = corpus_json("mu4_counterexample");
        let (res, out, _) = exec(&["rg"], &mu4);
        res.unwrap();
        let row = out.lines().find(|l| l.split('\t').nth(1) == Some("2")).unwrap();
        let cols: Vec<&str> = row.split('\t').collect();
        assert_eq!((cols[2], cols[3]), ("4", "exact"));

        let (res, out, _) = exec(&["check"], &mu4);
        res.unwrap();
        assert!(out.contains("sl: true") && out.contains("symplectic: false"));
        let (_, _, err) = exec(&["betti"], &mu4);
        assert!(err.contains("conjectural"));
    }

    #[test]
    fn symmetric_three_classes() {
        let (res, out, _) = exec(&["classes"], &corpus_json("symmetric_pairs(3)"));
        res.unwrap();
        let ages: Vec<&str> = out.lines().skip(1).map(|l| l.split('\t').nth(3).unwrap()).collect();
        assert_eq!(ages, ["0", "1", "2"]);
    }

    #[test]
    fn check_rejects_non_sl() {
        let text = r#"{"cyclotomic_order": 3, "dim": 2, "generators": [[[[[0, 1], [1, 1]], 0], [0, 1]]]}"#;
        let (res, out, _) = exec(&["check"], text);
        assert!(out.contains("sl: false"));
        assert_eq!(res.unwrap_err().exit_code(), 3);
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(exec(&["classes"], "not json").0.unwrap_err().exit_code(), 2);
        assert_eq!(exec(&["corpus", "nope(1)"], "").0.unwrap_err().exit_code(), 2);
        let big = corpus_json("symmetric_pairs(4)");
        assert_eq!(exec(&["--cap", "10", "classes"], &big).0.unwrap_err().exit_code(), 4);
    }

    #[test]
    fn strata_table() {
        let (res, out, _) = exec(&["strata"], &corpus_json("symmetric_pairs(2)"));
        res.unwrap();
        let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split('\t').collect()).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0][1], rows[0][3]), ("4", "0"));
        assert_eq!((rows[1][1], rows[1][3]), ("2", "1"));
    }

    #[test]
    fn report_to_stdout() {
        let (res, out, _) = exec(&["report", "--json", "-"], &corpus_json("cyclic(3)"));
        res.unwrap();
        let r: crate::mckay::McKayReport = serde_json::from_str(&out).unwrap();
        assert_eq!(r.classes.len(), 3);
    }
}
