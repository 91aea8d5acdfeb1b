use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use cqms::compress::{cocommutation_residual, isometry_residual};
use cqms::corep::{check_multiplicative_unitaries, PeterWeyl};
use cqms::error::{Error, Result};
use cqms::hopf::FiniteQuantumGroup;
use cqms::io::{read_family, read_input, AlgebraKind};
use cqms::linalg::{r, CVec};
use cqms::lipnorm::PolyhedralSeminorm;
use cqms::mk::CertifiedLipNorm;
use cqms::sampling;
use cqms::sweep::{self, Context, Row, RowConfig, StateChoice, Truncation};

#[derive(Parser, Debug)]
#[command(name = "cqms", version, about = "Spectral truncations of finite quantum groups and their metric bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the Hopf axioms (and the Peter-Weyl data with --pw).
    Check {
        #[command(flatten)]
        common: Common,
        /// Also validate the irreducible corepresentations and completeness.
        #[arg(long)]
        pw: bool,
    },
    /// Peter-Weyl decomposition and the multiplicative unitaries for a selection.
    Pw {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        lambda: String,
    },
    /// Build a truncation and certify its induced coactions.
    Truncate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        lambda: String,
    },
    /// Truncation bound, criterion value and brackets for one selection.
    Bound {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "all")]
        lambda: String,
    },
    /// One row per selection of a chain.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        state: StateArgs,
        /// `prefix`, `frequency`, or selections separated by `;` such as `0;0,1,7;all`.
        #[arg(long, default_value = "prefix")]
        chain: String,
        /// Write 0 in the runtime column so that output is reproducible byte for byte.
        #[arg(long)]
        no_runtime: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    /// `metric` (functions on the group), `length` (group algebra) or `file:PATH`.
    #[arg(long, default_value = "metric")]
    seminorm: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
struct StateArgs {
    #[arg(long, value_enum, default_value_t = StateKind::Canonical)]
    state: StateKind,
    /// Comma separated coordinates in H_Λ for `--state explicit`.
    #[arg(long, allow_hyphen_values = true)]
    vector: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum StateKind {
    Canonical,
    Optimized,
    Explicit,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn algebra_kind(seminorm: &str) -> AlgebraKind {
    if seminorm == "length" {
        AlgebraKind::Group
    } else {
        AlgebraKind::Function
    }
}

fn load(common: &Common) -> Result<FiniteQuantumGroup> {
    read_input(&common.input)?.build(algebra_kind(&common.seminorm))
}

fn seminorm(common: &Common, g: &FiniteQuantumGroup) -> Result<PolyhedralSeminorm> {
    match common.seminorm.as_str() {
        "metric" => PolyhedralSeminorm::lip_from_metric(g),
        "length" => PolyhedralSeminorm::lip_fourier(g),
        s => match s.strip_prefix("file:") {
            Some(path) => read_family(std::path::Path::new(path))?.seminorm(g.dim()),
            None => Err(Error::Config(format!("unknown seminorm {s:?}; use metric, length or file:PATH"))),
        },
    }
}

fn out(common: &Common, text: &str) -> Result<()> {
    match &common.output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn state_choice(args: &StateArgs) -> Result<StateChoice> {
    Ok(match args.state {
        StateKind::Canonical => StateChoice::Canonical,
        StateKind::Optimized => StateChoice::Optimized,
        StateKind::Explicit => {
            let spec = args
                .vector
                .as_deref()
                .ok_or_else(|| Error::Config("--state explicit needs --vector".into()))?;
            let vals = spec
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad vector entry {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let v = CVec::from_iterator(vals.len(), vals.iter().map(|&x| r(x)));
            let nrm = v.norm();
            if (nrm - 1.0).abs() > 1e-12 {
                eprintln!("note: state vector has norm {nrm}; it is normalised");
            }
            StateChoice::Explicit(v)
        }
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Check { common, pw } => {
            let g = load(&common)?;
            let rep = g.check_axioms();
            if let Some(e) = rep.failure(common.tol) {
                return Err(e);
            }
            let mut text = format!("all axioms pass (max residual {:.1e})\n", rep.max_residual());
            text += &format!(
                "dimension {}, representation dimension {}, Podles ranks {:?} of {}\n",
                rep.dim, g.rep_dim(), rep.podles_ranks, rep.podles_target
            );
            if pw {
                let p = PeterWeyl::new(&g, common.tol)?;
                let dims = p.irrep_dims();
                text += &format!(
                    "Peter-Weyl complete: {} irreducibles, sum of squared dimensions {} = {}\n",
                    dims.len(),
                    dims.iter().map(|d| d * d).sum::<usize>(),
                    g.dim()
                );
            }
            out(&common, &text)
        }
        Command::Pw { common, lambda } => {
            let g = load(&common)?;
            let p = PeterWeyl::new(&g, common.tol)?;
            let sel = sweep::parse_lambda(&lambda, p.irrep_dims().len())?;
            let proj = p.projector(&sel)?;
            let rep = check_multiplicative_unitaries(&g, p.gns(), &proj.projection);
            let mut text = String::new();
            for (k, d) in p.irrep_dims().iter().enumerate() {
                text += &format!("irrep {k}: dimension {d}\n");
            }
            text += &format!("orthogonality residual {:.3e}\n", p.orthogonality_residual());
            text += &format!("selection {:?}: H_Λ of dimension {}\n", sel, proj.basis.ncols());
            text += &format!("multiplicative unitaries: max residual {:.3e}\n", rep.max());
            if rep.max() > common.tol.max(1e-8) {
                return Err(Error::Certification { what: "multiplicative unitaries".into(), residual: rep.max(), tol: common.tol });
            }
            out(&common, &text)
        }
        Command::Truncate { common, lambda } => {
            let g = load(&common)?;
            let p = PeterWeyl::new(&g, common.tol)?;
            let sel = sweep::parse_lambda(&lambda, p.irrep_dims().len())?;
            let tr = Truncation::new(&g, &p, &sel, common.tol)?;
            let t = &tr.system;
            let ra = tr.alpha.check(&g);
            let rb = tr.beta.check(&g);
            let iso = sampling::elements(g.dim(), 20.min(common.samples), common.seed)
                .iter()
                .map(|a| isometry_residual(&g, t, a))
                .fold(0.0, f64::max);
            let mut text = format!(
                "H_Λ dimension {}, operator system dimension {}, kernel of τ {}\n",
                t.hilbert_dim(),
                t.dim(),
                t.kernel().ncols()
            );
            for (name, rep) in [("right", &ra), ("left", &rb)] {
                text += &format!(
                    "{name} coaction: well-definedness {:.3e}, coaction {:.3e}, counit {:.3e}, Podles rank {}/{}, fixed points {}\n",
                    rep.well_definedness, rep.coaction, rep.counit, rep.podles_rank, rep.podles_target, rep.fixed_point_dim
                );
            }
            text += &format!("cocommutation {:.3e}\n", cocommutation_residual(&tr.alpha, &tr.beta));
            text += &format!("isometry residual {:.3e}\n", iso);
            out(&common, &text)
        }
        Command::Bound { common, state, lambda } => {
            let g = load(&common)?;
            let p = PeterWeyl::new(&g, common.tol)?;
            let lip = CertifiedLipNorm::new(&g, &seminorm(&common, &g)?, common.tol)?;
            let ctx = Context::new(&g, &p, &lip, common.samples, common.seed)?;
            let sel = sweep::parse_lambda(&lambda, p.irrep_dims().len())?;
            let cfg = RowConfig { state: state_choice(&state)?, samples: common.samples, seed: common.seed, tol: common.tol };
            let row = sweep::analyse(&ctx, &sel, &cfg)?;
            let text = match common.format {
                Format::Csv => format!("{}\n{}\n", Row::HEADER, row.csv()),
                Format::Text => format!(
                    "Λ = {{{}}}, system dimension {}\nB = {:.12}\nr = {:.12} (upper bound via criterion)\ndiameter of A in [{:.12}, {:.12}]\ndiameter of the truncation in [{:.12}, {:.12}]\nbound inequalities: max residual {:.3e}\nsampled lower bounds n=1: {:.6}, n=2: {:.6}\n",
                    row.lambda_id().replace(';', ","),
                    row.dim_sys,
                    row.bound_b,
                    row.criterion_r,
                    ctx.diam_a.lower,
                    ctx.diam_a.upper,
                    row.diam_lower,
                    row.diam_upper,
                    row.c1_max_residual,
                    row.n1_lower,
                    row.n2_lower
                ),
            };
            out(&common, &text)
        }
        Command::Sweep { common, state, chain, no_runtime } => {
            let g = load(&common)?;
            let p = PeterWeyl::new(&g, common.tol)?;
            let lip = CertifiedLipNorm::new(&g, &seminorm(&common, &g)?, common.tol)?;
            let chain = sweep::parse_chain(&chain, &g)?;
            let ctx = Context::new(&g, &p, &lip, common.samples, common.seed)?;
            let choice = state_choice(&state)?;
            let rows = chain
                .par_iter()
                .enumerate()
                .map(|(i, sel)| {
                    let cfg = RowConfig {
                        state: choice.clone(),
                        samples: common.samples,
                        seed: common.seed + i as u64,
                        tol: common.tol,
                    };
                    sweep::analyse(&ctx, sel, &cfg)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut text = String::new();
            match common.format {
                Format::Csv => {
                    text += Row::HEADER;
                    text.push('\n');
                    for mut row in rows {
                        if no_runtime {
                            row.runtime_ms = 0;
                        }
                        text += &row.csv();
                        text.push('\n');
                    }
                }
                Format::Text => {
                    for row in rows {
                        text += &format!(
                            "Λ = {{{}}}: dim {}, B = {:.9}, r = {:.9}, diam in [{:.6}, {:.6}], residual {:.2e}\n",
                            row.lambda_id().replace(';', ","),
                            row.dim_sys,
                            row.bound_b,
                            row.criterion_r,
                            row.diam_lower,
                            row.diam_upper,
                            row.c1_max_residual
                        );
                    }
                }
            }
            out(&common, &text)
        }
    }
}
