//! Command-line options and script execution.

use std::fmt::Write;

use calc_core::cells::CoefficientPolicy;
use calc_core::engine::{check_truth, eliminate_quantifiers, EngineConfig, SolverResult, Stats, Unknown};
use calc_core::formula::OrderingHeuristic;
use calc_core::implicants::{BooleanMode, SelectionMetric};
use calc_core::poly::Var;
use clap::{Parser, ValueEnum};

use crate::parse::{parse, Query, Script};
use crate::print;
use crate::verify::{show_point, verify_qe};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Follow the script's command.
    #[default]
    Auto,
    /// Decide the assertions; free variables are existential.
    Check,
    /// Eliminate quantifiers; free variables are parameters.
    Qe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BooleanArg {
    Eval,
    Propagate,
    Explore,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SelectionArg {
    Size,
    Sotd,
    Rsotd,
    Features,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    MaxUnivariate,
    Features,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProjectionArg {
    /// Coefficients down to the first one nonzero at the sample.
    Required,
    /// Every coefficient.
    All,
}

/// Decides SMT-LIB sentences and eliminates quantifiers over the reals.
#[derive(Clone, Debug, Parser)]
#[command(name = "calc", version)]
pub struct Args {
    /// Script file; standard input when omitted.
    pub file: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = BooleanArg::Propagate)]
    pub boolean: BooleanArg,
    #[arg(long, value_enum, default_value_t = SelectionArg::Sotd)]
    pub selection: SelectionArg,
    #[arg(long = "var-order", value_enum, default_value_t = OrderArg::MaxUnivariate)]
    pub var_order: OrderArg,
    /// Check a QE result at N sampled parameter points.
    #[arg(long, value_name = "N")]
    pub verify: Option<usize>,
    /// Seed for the verifier's parameter points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print search counters as key=value lines.
    #[arg(long)]
    pub stats: bool,
    /// Keep at most N candidate implicants per reason set.
    #[arg(long, value_name = "N")]
    pub budget: Option<usize>,
    #[arg(long, value_enum, default_value_t = ProjectionArg::Required)]
    pub projection: ProjectionArg,
    /// Not supported; QE output keeps indexed root expressions.
    #[arg(long, hide = true)]
    pub no_root_atoms: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub mode: ModeArg,
    pub engine: EngineConfig,
    pub verify: Option<usize>,
    pub seed: u64,
    pub stats: bool,
}

impl Args {
    pub fn options(&self) -> Result<Options, String> {
        if self.no_root_atoms {
            return Err("--no-root-atoms is not supported: removing indexed root expressions from QE output \
                        is out of scope, so results keep atoms of the form (< x (root p j x))"
                .to_string());
        }
        let engine = EngineConfig {
            boolean: match self.boolean {
                BooleanArg::Eval => BooleanMode::Eval,
                BooleanArg::Propagate => BooleanMode::Propagate,
                BooleanArg::Explore => BooleanMode::Explore,
            },
            metric: match self.selection {
                SelectionArg::Size => SelectionMetric::Size,
                SelectionArg::Sotd => SelectionMetric::Sotd,
                SelectionArg::Rsotd => SelectionMetric::ReverseSotd,
                SelectionArg::Features => SelectionMetric::Features,
            },
            ordering: match self.var_order {
                OrderArg::MaxUnivariate => OrderingHeuristic::MaxUnivariate,
                OrderArg::Features => OrderingHeuristic::Features,
            },
            budget: self.budget,
            coefficients: match self.projection {
                ProjectionArg::Required => CoefficientPolicy::Required,
                ProjectionArg::All => CoefficientPolicy::All,
            },
            ..Default::default()
        };
        Ok(Options {
            mode: self.mode,
            engine,
            verify: self.verify,
            seed: self.seed,
            stats: self.stats,
        })
    }
}

/// What a run printed and its exit code: 0 decided, 2 unknown, 1 error.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run_text(text: &str, opts: &Options) -> Outcome {
    match parse(text) {
        Ok(s) => run(&s, opts),
        Err(e) => Outcome {
            stderr: format!("error: {e}\n"),
            code: 1,
            ..Default::default()
        },
    }
}

fn stats_lines(out: &mut String, stats: &Stats) {
    for (k, v) in stats.entries() {
        writeln!(out, "{k}={v}").unwrap();
    }
}

fn unknown_diagnostic(u: &Unknown, name: &dyn Fn(Var) -> String) -> String {
    format!(
        "unknown: the polynomial {} vanishes identically over the partial sample {}\n",
        print::polynomial(&u.poly, name),
        u.sample
    )
}

/// Executes the script's first check-sat or eliminate-quantifiers command
/// over the assertions before it.
pub fn run(script: &Script, opts: &Options) -> Outcome {
    let mut out = Outcome::default();
    let Some((query, f)) = script.query() else {
        return out;
    };
    let name = |v: Var| script.name(v);
    let qe = match opts.mode {
        ModeArg::Auto => query == Query::EliminateQuantifiers,
        ModeArg::Check => false,
        ModeArg::Qe => true,
    };
    let stats = if qe {
        let (r, stats) = eliminate_quantifiers(&f, &opts.engine);
        match r {
            Ok(o) => {
                writeln!(out.stdout, "{}", print::formula(&o.formula, &name)).unwrap();
                if let Some(n) = opts.verify {
                    let report = verify_qe(&f, &o.formula, n, opts.seed, &opts.engine);
                    writeln!(out.stderr, "verify: {report}").unwrap();
                    for p in &report.skipped {
                        writeln!(out.stderr, "verify: skipped undecided point {}", show_point(p, &name)).unwrap();
                    }
                    for d in &report.failures {
                        writeln!(
                            out.stderr,
                            "verify: disagreement at {}: input is {}, output is {:?}",
                            show_point(&d.point, &name),
                            d.input,
                            d.output
                        )
                        .unwrap();
                    }
                    if !report.passed() {
                        out.code = 1;
                    }
                }
            }
            Err(u) => {
                writeln!(out.stdout, "unknown").unwrap();
                out.stderr.push_str(&unknown_diagnostic(&u, &name));
                out.code = 2;
            }
        }
        stats
    } else {
        let (r, stats) = check_truth(&f, &opts.engine);
        writeln!(out.stdout, "{r}").unwrap();
        if let SolverResult::Unknown(u) = &r {
            out.stderr.push_str(&unknown_diagnostic(u, &name));
            out.code = 2;
        }
        stats
    };
    if opts.stats {
        stats_lines(&mut out.stdout, &stats);
    }
    out
}
