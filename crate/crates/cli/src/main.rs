use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hrpairs::bogomolov::{
    bogomolov_value, curvature_trials, extension_identity, slope, trace_check, CurvatureConfig, CurvatureMatrix,
    SheafClassData,
};
use hrpairs::demo::{demo_delv, demo_fulger_lehmann, demo_non_hr_limit, matrix_text, DemoReport};
use hrpairs::exterior::Form;
use hrpairs::hrcheck::{
    gram, has_hr_property, is_hr_pair, pointwise_hr_pair, pos_cone_contains, sample_search, signature, SearchConfig,
    TrialRecord,
};
use hrpairs::linalg::rank;
use hrpairs::parallel::Execution;
use hrpairs::ring::{eval_in, free_ring, relation_ring, Model, RingElement, RingSpec};
use hrpairs::scalar::{parse_rational, Scalar};
use hrpairs::symfunc::{derived, schur, segre_classes, twist_chern, ChernVector, Partition};
use hrpairs::verdict::Verdict;

#[derive(Parser)]
#[command(name = "hrpairs", version, about = "Hodge-Riemann and Bogomolov pair checks in finite intersection rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args, Clone)]
struct Opts {
    /// Seed for randomized verbs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Relative zero threshold for the float backend.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Backend::Exact)]
    backend: Backend,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Run trials on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Schur polynomial s_λ in the elementary basis.
    Schur {
        #[arg(long, value_delimiter = ',')]
        partition: Vec<usize>,
        #[arg(long)]
        vars: usize,
    },
    /// Derived polynomial s_λ^(i): the t^i coefficient of s_λ(x + t).
    Derived {
        #[arg(long, value_delimiter = ',')]
        partition: Vec<usize>,
        #[arg(long)]
        vars: usize,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Chern classes of A<t h> for generic c_1..c_e.
    Twist {
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Segre classes s_0..s_k of generic c_1..c_e.
    Segre {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Ring construction from a spec file.
    Ring {
        #[command(subcommand)]
        action: RingAction,
    },
    /// Matrix of α, β ↦ ∫αβη on degree 1.
    Gram {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
    },
    /// Inertia of the Gram form; with --h, the full HR property.
    Signature {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    HrPair {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eta1: String,
        #[arg(long, allow_hyphen_values = true)]
        eta2: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Whether β lies in the positive cone of η.
    PosCone {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    Slope {
        spec: PathBuf,
        /// `{rank, c1, c2}` inline or a path to it.
        #[arg(long)]
        sheaf: String,
        #[arg(long, allow_hyphen_values = true)]
        eta1: String,
    },
    Discriminant {
        spec: PathBuf,
        #[arg(long)]
        sheaf: String,
    },
    /// ∫Δ(E)·η; fails when negative.
    Bogomolov {
        spec: PathBuf,
        #[arg(long)]
        sheaf: String,
        #[arg(long, allow_hyphen_values = true)]
        eta2: String,
    },
    ExtensionIdentity {
        spec: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Checks `{f0, omega1, omega2}` from a file, or runs random trials.
    TraceCheck {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        e: usize,
        #[arg(long)]
        higgs: bool,
    },
    /// Random Kähler data for (s_λ, s'_λ) tested against ω_std.
    SampleSearch {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        e: usize,
        #[arg(long, value_delimiter = ',')]
        partition: Vec<usize>,
        /// Re-check a trial record printed by an earlier run.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
}

#[derive(Subcommand)]
enum RingAction {
    Check { spec: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    Delv,
    FulgerLehmann,
    NonHrLimit,
}

/// Pass, fail/degenerate; errors become exit 2 in `main`.
struct Report {
    pass: bool,
    human: String,
    json: Value,
}

impl Report {
    fn ok(human: String, json: Value) -> Self {
        Report { pass: true, human, json }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_spec(path: &Path) -> anyhow::Result<Model<num::BigRational>> {
    let spec = RingSpec::from_json_str(&read(path)?).with_context(|| format!("{}", path.display()))?;
    relation_ring(&spec).with_context(|| format!("{}", path.display()))
}

fn json_arg(src: &str) -> anyhow::Result<Value> {
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else {
        read(Path::new(src))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from `{src}`"))
}

fn el<F: Scalar>(model: &Model<F>, src: &str) -> anyhow::Result<RingElement<F>> {
    eval_in(model, src).with_context(|| format!("evaluating `{src}`"))
}

fn sheaf<F: Scalar>(model: &Model<F>, src: &str) -> anyhow::Result<SheafClassData<F>> {
    Ok(SheafClassData::from_json(model, &json_arg(src)?)?)
}

fn verdict_report(v: Verdict) -> Report {
    Report {
        pass: v.is_pass(),
        human: v.to_string(),
        json: v.to_json(),
    }
}

fn exec(opts: &Opts) -> Execution {
    if opts.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn tol<F: Scalar>(opts: &Opts) -> f64 {
    if F::EXACT {
        0.0
    } else {
        opts.tolerance
    }
}

/// Ring verbs, generic over the backend.
fn ring_verb<F: Scalar>(m: &Model<F>, cmd: &Command, opts: &Opts) -> anyhow::Result<Report> {
    let t = tol::<F>(opts);
    Ok(match cmd {
        Command::Gram { eta, .. } => {
            let q = gram(&el(m, eta)?)?;
            let names = m.basis_names(1).to_vec();
            Report::ok(
                format!("basis {}\n{}", names.join(", "), matrix_text(&q.matrix)),
                json!({"basis": names, "matrix": q.matrix.to_rows().iter().map(|r| r.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>()}),
            )
        }
        Command::Signature { eta, h, .. } => {
            let eta = el(m, eta)?;
            match h {
                Some(h) => verdict_report(has_hr_property(&eta, &el(m, h)?, t)?),
                None => {
                    let i = signature(&gram(&eta)?.matrix, t);
                    Report::ok(
                        format!("({}, {}, {})", i.positive, i.zero, i.negative),
                        json!({"signature": [i.positive, i.zero, i.negative]}),
                    )
                }
            }
        }
        Command::HrPair { eta1, eta2, h, .. } => verdict_report(is_hr_pair(&el(m, eta1)?, &el(m, eta2)?, &el(m, h)?, t)?),
        Command::PosCone { beta, eta, h, .. } => {
            let r = pos_cone_contains(&el(m, beta)?, &el(m, eta)?, &el(m, h)?, t)?;
            Report {
                pass: r.contains,
                human: format!(
                    "contains   {}\n∫βηh       {}\n∫β²η       {}",
                    r.contains, r.beta_eta_h, r.beta_sq_eta
                ),
                json: json!({"contains": r.contains, "beta_eta_h": r.beta_eta_h.to_json(), "beta_sq_eta": r.beta_sq_eta.to_json()}),
            }
        }
        Command::Slope { sheaf: s, eta1, .. } => {
            let mu = slope(&sheaf(m, s)?, &el(m, eta1)?)?;
            Report::ok(mu.to_string(), json!({"slope": mu.to_json()}))
        }
        Command::Discriminant { sheaf: s, .. } => {
            let delta = sheaf(m, s)?.discriminant()?;
            Report::ok(delta.to_string(), json!({"discriminant": delta.to_strings()}))
        }
        Command::Bogomolov { sheaf: s, eta2, .. } => {
            let v = bogomolov_value(&sheaf(m, s)?, &el(m, eta2)?)?;
            Report {
                pass: v.to_f64() >= -t * v.abs_f64().max(1.0),
                human: v.to_string(),
                json: json!({"value": v.to_json()}),
            }
        }
        Command::ExtensionIdentity { f, g, .. } => {
            let id = extension_identity(&sheaf(m, f)?, &sheaf(m, g)?)?;
            let zero = id.residual.is_negligible(t);
            Report {
                pass: zero,
                human: format!("xi        {}\nlhs       {}\nrhs       {}\nresidual  {}", id.xi, id.lhs, id.rhs, id.residual),
                json: json!({
                    "xi": id.xi.to_strings(),
                    "lhs": id.lhs.to_strings(),
                    "rhs": id.rhs.to_strings(),
                    "residual": id.residual.to_strings(),
                    "zero": zero,
                }),
            }
        }
        _ => unreachable!("not a ring verb"),
    })
}

fn spec_of(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Gram { spec, .. }
        | Command::Signature { spec, .. }
        | Command::HrPair { spec, .. }
        | Command::PosCone { spec, .. }
        | Command::Slope { spec, .. }
        | Command::Discriminant { spec, .. }
        | Command::Bogomolov { spec, .. }
        | Command::ExtensionIdentity { spec, .. } => Some(spec),
        _ => None,
    }
}

fn generic_chern(rank: usize, dim: usize, with_h: bool) -> anyhow::Result<(Model<num::BigRational>, ChernVector<RingElement<num::BigRational>>)> {
    let mut gens: Vec<(String, usize)> = (1..=rank).map(|k| (format!("c{k}"), k)).collect();
    if with_h {
        gens.push(("h".into(), 1));
    }
    let refs: Vec<(&str, usize)> = gens.iter().map(|(n, k)| (n.as_str(), *k)).collect();
    let m = free_ring(&refs, dim)?;
    let c = ChernVector::new((1..=rank).map(|k| RingElement::named(&m, &format!("c{k}"))).collect::<Result<_, _>>()?)?;
    Ok((m, c))
}

fn lines_report(items: Vec<(String, String)>) -> Report {
    let human = items.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join("\n");
    let json = Value::Object(items.into_iter().map(|(k, v)| (k, Value::String(v))).collect());
    Report::ok(human, json)
}

fn demo(report: DemoReport) -> Report {
    Report {
        pass: report.pass,
        human: report.lines.join("\n"),
        json: json!({"demo": report.name, "lines": report.lines, "pass": report.pass}),
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let opts = &cli.opts;
    if let Some(path) = spec_of(&cli.command) {
        let model = load_spec(path)?;
        return match opts.backend {
            Backend::Exact => ring_verb(&model, &cli.command, opts),
            Backend::Float => ring_verb(&Arc::new(model.to_f64()), &cli.command, opts),
        };
    }
    Ok(match &cli.command {
        Command::Schur { partition, vars } => {
            let p = schur(&Partition::new(partition.clone())?, *vars);
            Report::ok(p.to_string(), json!({"schur": p.to_string()}))
        }
        Command::Derived { partition, vars, order } => {
            let p = derived(&schur(&Partition::new(partition.clone())?, *vars), *order)?;
            Report::ok(p.to_string(), json!({"derived": p.to_string()}))
        }
        Command::Twist { rank, t } => {
            let t = parse_rational(t)?;
            let (m, c) = generic_chern(*rank, *rank, true)?;
            let twisted = twist_chern(&c, &t, &RingElement::named(&m, "h")?)?;
            lines_report((1..=*rank).map(|k| (format!("c{k}"), twisted.class(k).to_string())).collect())
        }
        Command::Segre { rank, degree } => {
            let (_, c) = generic_chern(*rank, *degree, false)?;
            let s = segre_classes(&c, *degree)?;
            lines_report(s.iter().enumerate().map(|(k, x)| (format!("s{k}"), x.to_string())).collect())
        }
        Command::Ring { action: RingAction::Check { spec } } => {
            let m = load_spec(spec)?;
            let ranks: Vec<usize> = (0..=m.dim()).map(|k| m.rank(k)).collect();
            let pairing: Vec<usize> = (0..=m.dim()).map(|k| rank(m.pairing(k), 0.0)).collect();
            let perfect = pairing.iter().zip(&ranks).all(|(p, r)| p == r);
            let labels: Vec<&str> = m.label_names().collect();
            Report::ok(
                format!(
                    "dimension  {}\nranks      {:?}\npairing    {:?}\nperfect    {}\nlabels     {}",
                    m.dim(),
                    ranks,
                    pairing,
                    perfect,
                    labels.join(", ")
                ),
                json!({"dimension": m.dim(), "ranks": ranks, "pairing_ranks": pairing, "perfect_pairing": perfect, "labels": labels}),
            )
        }
        Command::TraceCheck { input, d, r, e, higgs } => match input {
            Some(path) => {
                let v: Value = serde_json::from_str(&read(path)?).with_context(|| format!("{}", path.display()))?;
                let field = |k: &str| v.get(k).ok_or_else(|| anyhow!("{}: missing `{k}`", path.display()));
                let f0 = CurvatureMatrix::<f64>::from_json(field("f0")?, None)?;
                let omega1 = Form::<f64>::from_json(field("omega1")?, Some(f0.dim()))?;
                let omega2 = Form::<f64>::from_json(field("omega2")?, Some(f0.dim()))?;
                let rep = trace_check(&f0, &omega1, &omega2, opts.tolerance)?;
                Report {
                    pass: rep.nonnegative,
                    human: format!(
                        "total      {:.6e}\nmin term   {:.6e}\nscale      {:.6e}\nflat       {}",
                        rep.total, rep.min_term, rep.scale, rep.projectively_flat
                    ),
                    json: serde_json::to_value(&rep)?,
                }
            }
            None => {
                let config = CurvatureConfig {
                    d: *d,
                    r: *r,
                    e: *e,
                    trials: opts.trials,
                    seed: opts.seed,
                    higgs: *higgs,
                    tolerance: opts.tolerance,
                };
                let s = curvature_trials(&config, exec(opts))?;
                Report {
                    pass: s.all_nonnegative,
                    human: format!(
                        "seed {} trials {} d {} r {} e {} higgs {}\nall nonnegative  {}\nworst total/scale {:.6e}",
                        config.seed,
                        config.trials,
                        config.d,
                        config.r,
                        config.e,
                        config.higgs,
                        s.all_nonnegative,
                        s.worst_total.unwrap_or(0.0)
                    ),
                    json: serde_json::to_value(&s)?,
                }
            }
        },
        Command::SampleSearch { d, e, partition, replay } => {
            let partition = if partition.is_empty() { vec![d.saturating_sub(1)] } else { partition.clone() };
            match replay {
                Some(path) => {
                    let rec: TrialRecord =
                        serde_json::from_str(&read(path)?).with_context(|| format!("{}", path.display()))?;
                    let forms = rec
                        .forms
                        .iter()
                        .map(|f| Form::<f64>::from_json(f, None))
                        .collect::<Result<Vec<_>, _>>()?;
                    let Some(first) = forms.first() else { bail!("{}: record has no forms", path.display()) };
                    let dim = first.dim();
                    let (s, ds) = hrpairs::symfunc::schur_pair(&Partition::new(partition)?, &forms)?;
                    let v = pointwise_hr_pair(&s, &ds, &Form::kahler_std(dim), opts.tolerance)?;
                    let same = v == rec.verdict;
                    let mut r = verdict_report(v);
                    r.human.push_str(&format!("matches record: {same}\n"));
                    r.pass &= same;
                    r
                }
                None => {
                    let config = SearchConfig {
                        d: *d,
                        e: *e,
                        partition,
                        trials: opts.trials,
                        seed: opts.seed,
                        tolerance: opts.tolerance,
                    };
                    let rep = sample_search(&config, exec(opts))?;
                    Report {
                        pass: rep.all_pass(),
                        human: format!(
                            "seed {} trials {} d {} e {} λ {:?}\npass {} fail {} degenerate {}\nworst margin {:.6e} (trial {})",
                            config.seed,
                            config.trials,
                            config.d,
                            config.e,
                            config.partition,
                            rep.passes,
                            rep.fails,
                            rep.degenerate,
                            rep.worst_margin.unwrap_or(f64::NAN),
                            rep.worst_trial.map_or("-".into(), |t| t.to_string())
                        ),
                        json: serde_json::to_value(&rep)?,
                    }
                }
            }
        }
        Command::Demo { name } => demo(match name {
            DemoName::Delv => demo_delv()?,
            DemoName::FulgerLehmann => demo_fulger_lehmann()?,
            DemoName::NonHrLimit => demo_non_hr_limit()?,
        }),
        _ => unreachable!("ring verbs are dispatched above"),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = if cli.opts.json {
                serde_json::to_string_pretty(&report.json).expect("reports serialize")
            } else {
                report.human.trim_end().to_string()
            };
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
