//! Batch front end: read a document, run one analysis, write one report.
//!
//! Exit status 0 means the analysis finished (a refusal at the horizon is
//! still a finished analysis), 2 means the input was rejected, and 3 means an
//! internal certificate failed to replay.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::factorization::{factor_main, factor_quotient, factor_subgroup, Evidence, LevelMap};
use crate::fgab::{FgAbGroup, Homomorphism};
use crate::grid::{analyze, finset_grid_fixture, straighten, unbounded_colim_h1_grid};
use crate::steenrod::{
    cycle, cycle_cover, solenoid_tower, steenrod_report, telescope, SimplicialComplex,
};
use crate::towers::{lim, ml_decide, PeriodicTower};

pub mod doc;
pub mod report;

use doc::{Document, GridDoc, Input, PolyhedralTowerDoc, TowerDoc};
use report::*;

#[derive(Parser, Debug)]
#[command(
    name = "protower",
    version,
    about = "Exact analyses of towers and grids of finitely generated abelian groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    /// Search window for trivializing indices.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: u64,
    /// Largest input size, counted in groups or complexes, that is accepted.
    #[arg(long, global = true, default_value_t = 4096)]
    pub budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Mittag-Leffler verdict, lim and lim¹ of a tower document.
    AnalyzeTower { input: String },
    /// Lim cores, colimit verdict and trivializing indices of a grid.
    AnalyzeGrid { input: String },
    /// Factorization certificates of a level map.
    Factorize { input: String },
    /// Milnor sequence report for a polyhedral tower.
    Steenrod {
        input: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Emit a generated document: solenoid, telescope, finset-grid
    /// (alias convergent-sequence), unbounded-colim or scalar.
    Fixture {
        name: String,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
    },
    /// Straighten a raw sequence of inv-morphisms into a grid.
    Straighten { input: String },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::AnalyzeTower { .. } => "analyze-tower",
            Verb::AnalyzeGrid { .. } => "analyze-grid",
            Verb::Factorize { .. } => "factorize",
            Verb::Steenrod { .. } => "steenrod",
            Verb::Fixture { .. } => "fixture",
            Verb::Straighten { .. } => "straighten",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = dispatch(cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, &text)
            .map(|_| String::new())
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => Ok(text),
    });
    match result {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Input(m)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Internal(m)) => Outcome {
            code: 3,
            stdout: String::new(),
            stderr: format!("internal verification failed: {m}\n"),
        },
    }
}

/// A path, `-` for standard input, or an inline document.
fn read_input(arg: &str) -> Run<Input> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| Failure::Input(format!("cannot read {arg}: {e}")))?
    };
    doc::parse(&text).map_err(Failure::Input)
}

fn within_budget(size: usize, budget: usize) -> Run<()> {
    if size > budget {
        return Err(Failure::Input(format!(
            "input of size {size} exceeds the budget {budget}"
        )));
    }
    Ok(())
}

fn wrong_kind(verb: &str, expected: &str) -> Failure {
    Failure::Input(format!("{verb} expects a {expected} document"))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn emit<T: Serialize>(
    cli: &Cli,
    verb: &'static str,
    result: T,
    human: impl FnOnce(&T) -> String,
) -> String {
    match cli.format {
        Format::Machine => json(&Report {
            schema: doc::SCHEMA,
            tool: "protower",
            version: env!("CARGO_PKG_VERSION"),
            verb,
            horizon: cli.horizon as usize,
            result,
        }),
        Format::Human => human(&result),
    }
}

fn dispatch(cli: &Cli) -> Run<String> {
    let verb = cli.verb.name();
    let horizon = cli.horizon as usize;
    match &cli.verb {
        Verb::AnalyzeTower { input } => {
            let Input::Tower(d) = read_input(input)? else {
                return Err(wrong_kind(verb, "tower"));
            };
            let t = d.to_tower()?;
            within_budget(t.distinct_levels(), cli.budget)?;
            Ok(emit(cli, verb, tower_report(&t)?, human_tower))
        }
        Verb::AnalyzeGrid { input } => match read_input(input)? {
            Input::Grid(d) => {
                let g = d.to_grid()?;
                within_budget(
                    g.columns().iter().map(PeriodicTower::distinct_levels).sum(),
                    cli.budget,
                )?;
                Ok(emit(
                    cli,
                    verb,
                    grid_report(&analyze(&g, horizon)?),
                    human_grid,
                ))
            }
            Input::FinSetGrid(g) => {
                within_budget(g.columns.len() * (g.horizon() + 1), cli.budget)?;
                Ok(emit(
                    cli,
                    verb,
                    finset_grid_report(g.analyze()?),
                    human_finset,
                ))
            }
            _ => Err(wrong_kind(verb, "grid or finset-grid")),
        },
        Verb::Factorize { input } => {
            let Input::LevelMap(d) = read_input(input)? else {
                return Err(wrong_kind(verb, "level-map"));
            };
            let parsed = d.to_level_map()?;
            within_budget(parsed.map.source().distinct_levels(), cli.budget)?;
            Ok(emit(
                cli,
                verb,
                factor_report(&parsed.map, parsed.through)?,
                human_factor,
            ))
        }
        Verb::Steenrod { input, degree } => {
            let Input::PolyhedralTower(d) = read_input(input)? else {
                return Err(wrong_kind(verb, "polyhedral-tower"));
            };
            within_budget(d.prefix.len() + 2, cli.budget)?;
            let r = steenrod_report(&d.to_tower()?, *degree)?;
            Ok(emit(cli, verb, SteenrodSummary::of(&r), human_steenrod))
        }
        Verb::Fixture {
            name,
            p,
            depth,
            n,
            m,
            k,
        } => fixture(name, *p, *depth, *n, *m, *k),
        Verb::Straighten { input } => {
            let Input::RawSequence(d) = read_input(input)? else {
                return Err(wrong_kind(verb, "raw-sequence"));
            };
            let raw = d.to_raw()?;
            within_budget(raw.towers.len() * (raw.depth() + 1), cli.budget)?;
            let s = straighten(&raw)?;
            s.replay()?;
            let r = StraightenReport {
                reindex: s.reindex.clone(),
                replay: true,
                grid: GridDoc::of(&s.grid),
            };
            Ok(emit(cli, verb, r, human_straighten))
        }
    }
}

/// `factor_main` runs on the supplied factorization, or on `f = id ∘ f`
/// when the source is Mittag-Leffler and the target has trivial lim.
fn factor_report(
    f: &LevelMap,
    through: Option<(LevelMap, LevelMap, Evidence)>,
) -> Run<FactorReport> {
    let quotient = CertificateReport::of(&factor_quotient(f)?);
    let subgroup = CertificateReport::of(&factor_subgroup(f)?);
    let main = match through {
        Some((g, h, ev)) => MainOutcome::Factored {
            certificate: CertificateReport::of(&factor_main(f, &g, &h, ev)?),
        },
        None => {
            let source_ml = ml_decide(f.source()).is_ml();
            let target_lim_zero = lim(f.target())?.is_trivial();
            if source_ml && target_lim_zero {
                let id = LevelMap::identity(f.target());
                let c = factor_main(f, f, &id, Evidence::SourceMl)?;
                MainOutcome::Factored {
                    certificate: CertificateReport::of(&c),
                }
            } else {
                let reason = if source_ml {
                    "the target has nontrivial lim and no factorization was supplied"
                } else {
                    "the source is not Mittag-Leffler and no factorization was supplied"
                };
                MainOutcome::NotApplicable {
                    reason: reason.into(),
                }
            }
        }
    };
    Ok(FactorReport {
        quotient,
        subgroup,
        main,
    })
}

fn fixture(
    name: &str,
    p: Option<usize>,
    depth: Option<usize>,
    n: Option<usize>,
    m: Option<usize>,
    k: Option<i64>,
) -> Run<String> {
    Ok(match name {
        "solenoid" => {
            let t = solenoid_tower(p.unwrap_or(3), depth.unwrap_or(2))?;
            json(&Document::new("polyhedral-tower", PolyhedralTowerDoc::of(&t)))
        }
        "telescope" => {
            let (p, depth) = (p.unwrap_or(3), depth.unwrap_or(2));
            let sizes: Vec<usize> = (0..=depth).rev().map(|i| 3 * p.pow(i as u32)).collect();
            let circles = sizes.iter().map(|&s| cycle(s)).collect::<crate::Result<Vec<SimplicialComplex>>>()?;
            let maps = circles.windows(2).map(|w| cycle_cover(&w[0], &w[1])).collect::<crate::Result<Vec<_>>>()?;
            let (t, _) = telescope(&circles, &maps)?;
            json(&Document::new("complex", t.to_doc()))
        }
        "finset-grid" | "convergent-sequence" => {
            json(&Document::new("finset-grid", finset_grid_fixture(n.unwrap_or(3))?))
        }
        "unbounded-colim" => {
            let g = unbounded_colim_h1_grid(m.unwrap_or(1), n.unwrap_or(1))?;
            json(&Document::new("grid", GridDoc::of(&g)))
        }
        "scalar" => {
            let t = PeriodicTower::from_endo(Homomorphism::scalar(&FgAbGroup::free(1), k.unwrap_or(3)))?;
            json(&Document::new("tower", TowerDoc::of(&t)))
        }
        other => {
            return Err(Failure::Input(format!(
                "unknown fixture `{other}`; known: solenoid, telescope, finset-grid, convergent-sequence, unbounded-colim, scalar"
            )))
        }
    })
}

fn human_tower(r: &TowerReport) -> String {
    let mut s = format!(
        "tower: prefix {}, period {}, loop group {}\n",
        r.prefix_len,
        r.period,
        show_group(&r.loop_group)
    );
    s += &format!(
        "mittag-leffler: {} (constant index {})\n",
        r.mittag_leffler.verdict, r.mittag_leffler.constant_index.0
    );
    s += &format!("lim: {}\n", show_group(&r.lim.group));
    s += &format!(
        "lim1: {}\n",
        if r.limone_vanishes {
            "vanishes"
        } else {
            "nonvanishing"
        }
    );
    s += &match r.pro_trivial.witness {
        Some(w) if r.pro_trivial.trivial => format!("pro-trivial: yes, loop power {w} is zero\n"),
        _ => "pro-trivial: no\n".to_string(),
    };
    s
}

fn show_index(k: &Option<usize>) -> String {
    k.map_or("none".into(), |k| k.to_string())
}

fn human_grid(r: &GridReport) -> String {
    let mut s = String::new();
    for (j, c) in r.columns.iter().enumerate() {
        s += &format!(
            "column {j}: lim {}, ML {}\n",
            show_group(&c.lim.group),
            c.mittag_leffler
        );
    }
    s += &format!(
        "colim: {}\n",
        if r.colim.trivial {
            "trivial"
        } else {
            "nontrivial"
        }
    );
    for (j, k) in r.trivializing_indices.iter().enumerate() {
        s += &format!("k({j}) = {}\n", show_index(k));
    }
    s
}

fn human_finset(r: &FinSetGridReport) -> String {
    let sizes: Vec<String> = r.gamma_sizes.iter().map(|n| n.to_string()).collect();
    let mut s = format!("|Γ_j|: {}\n", sizes.join(" "));
    s += &format!(
        "colim: {}\n",
        if r.colim_trivial {
            "trivial"
        } else {
            "nontrivial"
        }
    );
    for (j, k) in r.trivializing_indices.iter().enumerate() {
        s += &format!("k({j}) = {}\n", show_index(k));
    }
    s
}

fn human_flags(c: &CertificateReport, indent: &str, s: &mut String) {
    for f in &c.flags {
        *s += &format!("{indent}{}: {}\n", f.name, f.holds);
    }
    for st in &c.stages {
        *s += &format!("{indent}stage {:?}\n", st.kind);
        human_flags(st, &format!("{indent}  "), s);
    }
}

fn human_factor(r: &FactorReport) -> String {
    let mut s = String::new();
    for (name, c) in [("quotient", &r.quotient), ("subgroup", &r.subgroup)] {
        s += &format!("{name}:\n");
        human_flags(c, "  ", &mut s);
    }
    match &r.main {
        MainOutcome::Factored { certificate } => {
            s += "main:\n";
            human_flags(certificate, "  ", &mut s);
            s += &format!(
                "  witness shift: {}\n",
                show_index(&certificate.pro_trivial_witness)
            );
        }
        MainOutcome::NotApplicable { reason } => s += &format!("main: not applicable, {reason}\n"),
    }
    s
}

fn human_steenrod(r: &SteenrodSummary) -> String {
    let mut s = format!(
        "degree {}: lim part {}\n",
        r.degree,
        show_group(&r.lim_part)
    );
    s += &format!(
        "lim1 of H_{}: {}\n",
        r.degree + 1,
        if r.limone_vanishes {
            "vanishes"
        } else {
            "nonvanishing"
        }
    );
    if let Some(h) = &r.homology {
        s += &format!("H_{}: {}\n", r.degree, show_group(h));
    }
    s += &format!("{}\n", r.note);
    s
}

fn human_straighten(r: &StraightenReport) -> String {
    let mut s = format!(
        "straightened into {} columns; replay {}\n",
        r.grid.columns.len(),
        if r.replay { "ok" } else { "failed" }
    );
    for (j, row) in r.reindex.iter().enumerate() {
        let row: Vec<String> = row.iter().map(|i| i.to_string()).collect();
        s += &format!("column {j}: rows {}\n", row.join(" "));
    }
    s
}
