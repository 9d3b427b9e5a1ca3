//! The `entdist` command line: builds the example states, runs the
//! collective and brute-force pipelines, and emits tables, CSV grids and
//! JSON verdicts.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::collective::{
    collective_entanglement, tightness_check, virtual_state, CollectiveMoments, PairData,
};
use crate::error::{Error, Result};
use crate::oracle::{self, Verdict, BOUND_TOL};
use crate::pairmeasures::Measure;
use crate::states::{self, Partition, State};

#[derive(Debug, Parser)]
#[command(
    name = "entdist",
    about = "Entanglement between spin ensembles from collective observables",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Negativity,
    Concurrence,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Measure {
        match m {
            MeasureArg::Negativity => Measure::Negativity,
            MeasureArg::Concurrence => Measure::Concurrence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Pick by file extension: `.json` is pair data, anything else a
    /// state vector.
    Auto,
    Statevec,
    Pairdata,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Entanglement monotone to evaluate.
    #[arg(long, value_enum, default_value = "negativity")]
    pub measure: MeasureArg,

    /// Also run the brute-force pair average and check the bound.
    #[arg(long)]
    pub oracle: bool,

    /// Tolerance for the bound and equality checks.
    #[arg(long, default_value_t = BOUND_TOL)]
    pub tolerance: f64,

    /// Seed recorded in reports (randomized suites live in the tests; the
    /// commands themselves are deterministic).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write the report (JSON, or CSV for sweeps) to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Require equal sample sizes.
    #[arg(long = "strict-paper")]
    pub strict_paper: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symmetric state with a fixed number of excitations.
    Dicke {
        /// Total number of qubits.
        #[arg(long)]
        total: usize,
        /// Number of excited qubits.
        #[arg(long)]
        excitations: usize,
        /// Sites per sample; samples are the first and second blocks.
        #[arg(long = "sample-size")]
        sample_size: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Generalized singlet of two blocks of equal size.
    Singlet {
        /// Sites per sample (the state spans twice as many qubits).
        #[arg(long = "sample-size")]
        sample_size: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Generalized singlet mixed with classically anticorrelated pairs.
    Mixture {
        #[arg(long = "sample-size")]
        sample_size: usize,
        /// Weight of the singlet in the mixture.
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// CSV grid of the mixture entanglement over spin length and mixing
    /// weight, computed through the collective pipeline.
    Sweep {
        /// Largest spin length s = n/2 in the grid.
        #[arg(long = "s-max", default_value_t = 25.0)]
        s_max: f64,
        /// Number of steps in the mixing weight (inclusive endpoints).
        #[arg(long = "p-steps", default_value_t = 10)]
        p_steps: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Full report for a state-vector or pair-data file.
    Analyze {
        /// Input file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: InputFormat,
        /// Sites of sample A (state-vector inputs only).
        #[arg(long = "a-sites", value_delimiter = ',')]
        a_sites: Option<Vec<usize>>,
        /// Sites of sample B (state-vector inputs only).
        #[arg(long = "b-sites", value_delimiter = ',')]
        b_sites: Option<Vec<usize>>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Bound and tightness verdict for a file input, as JSON.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: InputFormat,
        #[arg(long = "a-sites", value_delimiter = ',')]
        a_sites: Option<Vec<usize>>,
        #[arg(long = "b-sites", value_delimiter = ',')]
        b_sites: Option<Vec<usize>>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Resolved run options shared by the command handlers.
struct RunConfig {
    measure: Measure,
    oracle: bool,
    tolerance: f64,
    seed: u64,
    out: Option<PathBuf>,
    strict_paper: bool,
}

impl RunConfig {
    fn from_common(common: &CommonArgs) -> Result<Self> {
        if common.tolerance <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                common.tolerance
            )));
        }
        Ok(Self {
            measure: common.measure.into(),
            oracle: common.oracle,
            tolerance: common.tolerance,
            seed: common.seed,
            out: common.out.clone(),
            strict_paper: common.strict_paper,
        })
    }
}

struct Outcome {
    lines: Vec<String>,
    json: serde_json::Value,
    csv: Option<String>,
    out: Option<PathBuf>,
    /// Pretty-print the JSON to stdout (verdict commands).
    print_json: bool,
    ok: bool,
}

fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

/// Entry point used by `main`; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            if let Some(csv) = &outcome.csv {
                match &outcome.out {
                    Some(path) => {
                        if let Err(e) = std::fs::write(path, csv) {
                            println!("{}", json!({ "error": e.to_string() }));
                            return 1;
                        }
                        println!("wrote {}", path.display());
                    }
                    None => print!("{csv}"),
                }
            } else if let Some(path) = &outcome.out {
                let pretty = serde_json::to_string_pretty(&outcome.json).unwrap();
                if let Err(e) = std::fs::write(path, pretty) {
                    println!("{}", json!({ "error": e.to_string() }));
                    return 1;
                }
                println!("wrote {}", path.display());
            }
            if outcome.print_json {
                println!("{}", serde_json::to_string_pretty(&outcome.json).unwrap());
            }
            if outcome.ok {
                0
            } else {
                if !outcome.print_json {
                    println!("{}", serde_json::to_string(&outcome.json).unwrap());
                }
                1
            }
        }
        Err(e) => {
            println!("{}", json!({ "error": e.to_string() }));
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Dicke {
            total,
            excitations,
            sample_size,
            common,
        } => cmd_dicke(*total, *excitations, *sample_size, &RunConfig::from_common(common)?),
        Command::Singlet {
            sample_size,
            common,
        } => cmd_singlet(*sample_size, &RunConfig::from_common(common)?),
        Command::Mixture {
            sample_size,
            p,
            common,
        } => cmd_mixture(*sample_size, *p, &RunConfig::from_common(common)?),
        Command::Sweep {
            s_max,
            p_steps,
            common,
        } => cmd_sweep(*s_max, *p_steps, &RunConfig::from_common(common)?),
        Command::Analyze {
            input,
            format,
            a_sites,
            b_sites,
            common,
        } => cmd_analyze(
            input,
            *format,
            a_sites.as_deref(),
            b_sites.as_deref(),
            &RunConfig::from_common(common)?,
        ),
        Command::Verify {
            input,
            format,
            a_sites,
            b_sites,
            common,
        } => cmd_verify(
            input,
            *format,
            a_sites.as_deref(),
            b_sites.as_deref(),
            &RunConfig::from_common(common)?,
        ),
    }
}

/// Runs the collective pipeline on a built example state and optionally the
/// brute-force check, assembling the common parts of the report.
fn example_outcome(
    name: &str,
    state: &State,
    partition: &Partition,
    cfg: &RunConfig,
    mut extra_lines: Vec<String>,
    mut extra_json: serde_json::Map<String, serde_json::Value>,
) -> Result<Outcome> {
    if cfg.strict_paper && partition.n_a() != partition.n_b() {
        return Err(Error::InvalidArgument(format!(
            "--strict-paper requires equal sample sizes, got {} and {}",
            partition.n_a(),
            partition.n_b()
        )));
    }
    let pd = state.extract_pair_data(partition)?;
    let cm = CollectiveMoments::from_pair_data(&pd);
    let e_ab = collective_entanglement(&cm, cfg.measure)?;

    let mut lines = vec![
        format!("state: {name}"),
        format!(
            "samples: A = {:?}, B = {:?}",
            partition.a_sites(),
            partition.b_sites()
        ),
        format!("measure: {}", cfg.measure),
        format!("e_ab = {}", sig(e_ab)),
    ];
    lines.append(&mut extra_lines);

    let mut ok = true;
    let mut json = serde_json::Map::new();
    json.insert("state".into(), json!(name));
    json.insert("measure".into(), json!(cfg.measure));
    json.insert("e_ab".into(), json!(e_ab));
    json.insert("seed".into(), json!(cfg.seed));
    json.insert("tolerance".into(), json!(cfg.tolerance));
    json.append(&mut extra_json);

    // The concurrence of the virtual state obeys the monogamy cap 2/n.
    if cfg.measure == Measure::Concurrence {
        let cap = 2.0 / partition.n_a().min(partition.n_b()) as f64;
        let within = e_ab <= cap + cfg.tolerance;
        lines.push(format!(
            "concurrence cap 2/n = {}: {}",
            sig(cap),
            if within { "ok" } else { "exceeded" }
        ));
        json.insert("concurrence_cap".into(), json!(cap));
        ok &= within;
    }

    if cfg.oracle {
        let mut verdict = oracle::verify_bounds(state, partition, cfg.measure)?;
        verdict.seed = Some(cfg.seed);
        let bound_ok = verdict.margin >= -cfg.tolerance;
        lines.push(format!("e_bar = {}", sig(verdict.e_bar)));
        lines.push(format!("margin = {}", sig(verdict.margin)));
        lines.push(format!(
            "bound check: {}",
            if bound_ok { "ok" } else { "violated" }
        ));
        if let Some(eq) = verdict.prop2_equality {
            lines.push(format!(
                "predicted equality: {}",
                if eq { "confirmed" } else { "violated" }
            ));
        }
        ok &= verdict.passed() && bound_ok;
        json.insert("verdict".into(), serde_json::to_value(&verdict)?);
    }

    Ok(Outcome {
        lines,
        json: serde_json::Value::Object(json),
        csv: None,
        out: cfg.out.clone(),
        print_json: false,
        ok,
    })
}

fn cmd_dicke(total: usize, excitations: usize, sample_size: usize, cfg: &RunConfig) -> Result<Outcome> {
    if !(2..=states::MAX_QUBITS).contains(&total) {
        return Err(Error::InvalidArgument(format!(
            "total qubits must be between 2 and {}, got {total}",
            states::MAX_QUBITS
        )));
    }
    if sample_size == 0 || 2 * sample_size > total {
        return Err(Error::InvalidArgument(format!(
            "sample size must be between 1 and {}, got {sample_size}",
            total / 2
        )));
    }
    let state = State::from(states::dicke(total, excitations)?);
    let partition = Partition::contiguous(sample_size, sample_size)?;
    example_outcome(
        &format!("|{total};{excitations}> ({total} qubits, {excitations} excited)"),
        &state,
        &partition,
        cfg,
        vec![],
        serde_json::Map::new(),
    )
}

fn cmd_singlet(sample_size: usize, cfg: &RunConfig) -> Result<Outcome> {
    let state = State::from(states::generalized_singlet(sample_size)?);
    let partition = Partition::contiguous(sample_size, sample_size)?;
    let pd = state.extract_pair_data(&partition)?;
    let cm = CollectiveMoments::from_pair_data(&pd);
    let t = *cm.t();
    let extra_lines = vec![format!(
        "t diagonal = ({}, {}, {})",
        sig(t[0][0]),
        sig(t[1][1]),
        sig(t[2][2])
    )];
    let mut extra_json = serde_json::Map::new();
    extra_json.insert("t_diag".into(), json!([t[0][0], t[1][1], t[2][2]]));
    example_outcome(
        &format!("generalized singlet (n = {sample_size}, {} qubits)", 2 * sample_size),
        &state,
        &partition,
        cfg,
        extra_lines,
        extra_json,
    )
}

/// Critical sample size: entanglement survives only below it.
fn critical_sample_size(p: f64) -> Option<usize> {
    if p >= 1.0 {
        None
    } else {
        Some(((1.0 + p) / (1.0 - p)).ceil() as usize)
    }
}

fn cmd_mixture(sample_size: usize, p: f64, cfg: &RunConfig) -> Result<Outcome> {
    let state = State::from(states::singlet_noise_mixture(sample_size, p)?);
    let partition = Partition::contiguous(sample_size, sample_size)?;
    let pd = state.extract_pair_data(&partition)?;
    let cm = CollectiveMoments::from_pair_data(&pd);
    let t_zz = cm.t()[2][2];
    let n_c = critical_sample_size(p);
    let extra_lines = vec![
        format!("t_zz = {}", sig(t_zz)),
        match n_c {
            Some(n_c) => format!("critical sample size n_c = {n_c}"),
            None => "critical sample size n_c = infinity".into(),
        },
    ];
    let mut extra_json = serde_json::Map::new();
    extra_json.insert("p".into(), json!(p));
    extra_json.insert("t_zz".into(), json!(t_zz));
    extra_json.insert("n_c".into(), json!(n_c));
    example_outcome(
        &format!("noisy singlet (n = {sample_size}, p = {p})"),
        &state,
        &partition,
        cfg,
        extra_lines,
        extra_json,
    )
}

/// Normalized moments of the noisy singlet, in closed form. This is what
/// lets the sweep go far beyond register sizes that fit in memory.
pub fn mixture_moments(sample_size: usize, p: f64) -> Result<CollectiveMoments> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "mixing weight must lie in [0, 1], got {p}"
        )));
    }
    let n = sample_size as f64;
    let txy = -p * (n + 2.0) / (3.0 * n);
    let tzz = -p * (n - 1.0) / (3.0 * n) - 1.0 / n;
    let mut t = [[0.0; 3]; 3];
    t[0][0] = txy;
    t[1][1] = txy;
    t[2][2] = tzz;
    CollectiveMoments::from_normalized([0.0; 3], [0.0; 3], t, sample_size, sample_size)
}

fn cmd_sweep(s_max: f64, p_steps: usize, cfg: &RunConfig) -> Result<Outcome> {
    if p_steps == 0 {
        return Err(Error::InvalidArgument("p-steps must be positive".into()));
    }
    let n_max = (2.0 * s_max).floor() as usize;
    if n_max == 0 {
        return Err(Error::InvalidArgument(format!(
            "s-max must be at least 0.5, got {s_max}"
        )));
    }
    if cfg.oracle {
        if 2 * n_max > states::MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "--oracle sweeps are capped at s-max = {} (register limit)",
                states::MAX_QUBITS as f64 / 4.0
            )));
        }
    } else if n_max > 20_000 {
        return Err(Error::InvalidArgument(
            "analytic sweeps are capped at s-max = 10000".into(),
        ));
    }

    use rayon::prelude::*;
    let grid: Vec<(usize, usize)> = (1..=n_max)
        .flat_map(|n| (0..=p_steps).map(move |i| (n, i)))
        .collect();
    let rows: Vec<String> = grid
        .par_iter()
        .map(|&(n, i)| {
            let p = i as f64 / p_steps as f64;
            let cm = mixture_moments(n, p)?;
            let e_ab = collective_entanglement(&cm, cfg.measure)?;
            if cfg.oracle {
                let state = State::from(states::singlet_noise_mixture(n, p)?);
                let report = oracle::average_pair_entanglement(
                    &state,
                    &Partition::contiguous(n, n)?,
                    cfg.measure,
                )?;
                if report.margin < -cfg.tolerance {
                    return Err(Error::InvalidArgument(format!(
                        "bound violated at n = {n}, p = {p}: margin {}",
                        report.margin
                    )));
                }
            }
            Ok(format!("{},{},{}", n as f64 / 2.0, p, sig(e_ab)))
        })
        .collect::<Result<_>>()?;

    let mut csv = String::from("s,p,e_ab\n");
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    Ok(Outcome {
        lines: vec![format!(
            "sweep: {} rows (s up to {}, {} p values){}",
            n_max * (p_steps + 1),
            n_max as f64 / 2.0,
            p_steps + 1,
            if cfg.oracle { ", oracle checked" } else { "" }
        )],
        json: json!({ "rows": n_max * (p_steps + 1), "seed": cfg.seed }),
        csv: Some(csv),
        out: cfg.out.clone(),
        print_json: false,
        ok: true,
    })
}

enum LoadedInput {
    Statevec(State, Partition),
    Pairs(PairData),
}

fn load_input(
    input: &std::path::Path,
    format: InputFormat,
    a_sites: Option<&[usize]>,
    b_sites: Option<&[usize]>,
    cfg: &RunConfig,
) -> Result<LoadedInput> {
    let format = match format {
        InputFormat::Auto => {
            if input.extension().is_some_and(|e| e == "json") {
                InputFormat::Pairdata
            } else {
                InputFormat::Statevec
            }
        }
        other => other,
    };
    match format {
        InputFormat::Pairdata => {
            let pd = PairData::load_json(input)?;
            if cfg.strict_paper && pd.n_a() != pd.n_b() {
                return Err(Error::InvalidArgument(format!(
                    "--strict-paper requires equal sample sizes, got {} and {}",
                    pd.n_a(),
                    pd.n_b()
                )));
            }
            Ok(LoadedInput::Pairs(pd))
        }
        InputFormat::Statevec | InputFormat::Auto => {
            let pure = states::load_statevec(input)?;
            let n = pure.num_qubits();
            let partition = match (a_sites, b_sites) {
                (Some(a), Some(b)) => Partition::new(a.to_vec(), b.to_vec())?,
                (None, None) => {
                    if n < 2 {
                        return Err(Error::InvalidArgument(
                            "need at least two qubits to form two samples".into(),
                        ));
                    }
                    Partition::contiguous(n / 2, n - n / 2)?
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "provide both --a-sites and --b-sites, or neither".into(),
                    ))
                }
            };
            partition.validate_for(n)?;
            if cfg.strict_paper && partition.n_a() != partition.n_b() {
                return Err(Error::InvalidArgument(format!(
                    "--strict-paper requires equal sample sizes, got {} and {}",
                    partition.n_a(),
                    partition.n_b()
                )));
            }
            Ok(LoadedInput::Statevec(State::from(pure), partition))
        }
    }
}

fn format_triple(v: &[f64; 3]) -> String {
    format!("({:+.6}, {:+.6}, {:+.6})", v[0], v[1], v[2])
}

fn cmd_analyze(
    input: &std::path::Path,
    format: InputFormat,
    a_sites: Option<&[usize]>,
    b_sites: Option<&[usize]>,
    cfg: &RunConfig,
) -> Result<Outcome> {
    let loaded = load_input(input, format, a_sites, b_sites, cfg)?;
    let (pd, source, oracle_verdict) = match &loaded {
        LoadedInput::Statevec(state, partition) => {
            let pd = state.extract_pair_data(partition)?;
            let verdict = if cfg.oracle {
                Some(oracle::verify_bounds(state, partition, cfg.measure)?)
            } else {
                None
            };
            (
                pd,
                format!(
                    "state vector, {} qubits, A = {:?}, B = {:?}",
                    state.num_qubits(),
                    partition.a_sites(),
                    partition.b_sites()
                ),
                verdict,
            )
        }
        LoadedInput::Pairs(pd) => {
            let verdict = if cfg.oracle {
                Some(oracle::verify_bounds_from_data(pd, cfg.measure)?)
            } else {
                None
            };
            (
                pd.clone(),
                format!("pair data, samples of size {} and {}", pd.n_a(), pd.n_b()),
                verdict,
            )
        }
    };

    let cm = CollectiveMoments::from_pair_data(&pd);
    let vs = virtual_state(&cm)?;
    let negativity = vs.negativity()?;
    let concurrence = vs.concurrence()?;
    let report = tightness_check(&pd);

    let mut lines = vec![
        format!("input: {} ({source})", input.display()),
        format!("collective moments (hbar = 1):"),
        format!("  S_A = {}", format_triple(cm.spin_a())),
        format!("  S_B = {}", format_triple(cm.spin_b())),
    ];
    for (i, axis) in ["x", "y", "z"].iter().enumerate() {
        lines.push(format!(
            "  T_{axis}* = ({:+.6}, {:+.6}, {:+.6})",
            cm.corr()[i][0],
            cm.corr()[i][1],
            cm.corr()[i][2]
        ));
    }
    lines.push("normalized:".to_string());
    lines.push(format!("  s_a = {}", format_triple(cm.s_a())));
    lines.push(format!("  s_b = {}", format_triple(cm.s_b())));
    for (i, axis) in ["x", "y", "z"].iter().enumerate() {
        lines.push(format!(
            "  t_{axis}* = ({:+.6}, {:+.6}, {:+.6})",
            cm.t()[i][0],
            cm.t()[i][1],
            cm.t()[i][2]
        ));
    }
    lines.push("virtual two-qubit state:".into());
    for row in 0..4 {
        let cells: Vec<String> = (0..4)
            .map(|col| {
                let v = vs.matrix().get(row, col);
                format!("{:+.6}{:+.6}i", v.re, v.im)
            })
            .collect();
        lines.push(format!("  [{}]", cells.join(", ")));
    }
    lines.push(format!("negativity = {}", sig(negativity)));
    lines.push(format!("concurrence = {}", sig(concurrence)));
    lines.push(format!(
        "structure: uniform_z={} locked_xy={} zz_sign={} transverse_zero={}",
        report.conditions.uniform_z_bloch,
        report.conditions.locked_xy_sign,
        report.conditions.constant_zz_sign,
        report.conditions.transverse_terms_vanish
    ));
    match &report.closed_forms {
        Some(cf) => {
            lines.push(format!(
                "correlation sign = {}, closed-form bound = {}, gap = {}",
                cf.sign,
                sig(cf.bound),
                sig(cf.gap)
            ));
        }
        None => lines.push("correlation sign: undetermined".into()),
    }
    lines.push(format!(
        "bound is tight (equals pair average): {}",
        report.equality_holds
    ));

    let mut ok = true;
    let mut json = serde_json::Map::new();
    json.insert("input".into(), json!(input.display().to_string()));
    json.insert("measure".into(), json!(cfg.measure));
    json.insert("seed".into(), json!(cfg.seed));
    json.insert("spin_a".into(), json!(cm.spin_a()));
    json.insert("spin_b".into(), json!(cm.spin_b()));
    json.insert("corr".into(), json!(cm.corr()));
    json.insert("s_a".into(), json!(cm.s_a()));
    json.insert("s_b".into(), json!(cm.s_b()));
    json.insert("t".into(), json!(cm.t()));
    json.insert("negativity".into(), json!(negativity));
    json.insert("concurrence".into(), json!(concurrence));
    json.insert("tightness".into(), serde_json::to_value(&report)?);

    if let Some(mut verdict) = oracle_verdict {
        verdict.seed = Some(cfg.seed);
        lines.push(format!("e_bar = {}", sig(verdict.e_bar)));
        lines.push(format!("margin = {}", sig(verdict.margin)));
        ok &= verdict.passed() && verdict.margin >= -cfg.tolerance;
        json.insert("verdict".into(), serde_json::to_value(&verdict)?);
    }

    Ok(Outcome {
        lines,
        json: serde_json::Value::Object(json),
        csv: None,
        out: cfg.out.clone(),
        print_json: false,
        ok,
    })
}

fn cmd_verify(
    input: &std::path::Path,
    format: InputFormat,
    a_sites: Option<&[usize]>,
    b_sites: Option<&[usize]>,
    cfg: &RunConfig,
) -> Result<Outcome> {
    let loaded = load_input(input, format, a_sites, b_sites, cfg)?;
    let mut verdict: Verdict = match &loaded {
        LoadedInput::Statevec(state, partition) => {
            oracle::verify_bounds(state, partition, cfg.measure)?
        }
        LoadedInput::Pairs(pd) => oracle::verify_bounds_from_data(pd, cfg.measure)?,
    };
    verdict.seed = Some(cfg.seed);
    let ok = verdict.passed();
    Ok(Outcome {
        lines: vec![],
        json: serde_json::to_value(&verdict)?,
        csv: None,
        out: cfg.out.clone(),
        print_json: true,
        ok,
    })
}
