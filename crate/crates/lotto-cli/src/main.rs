//! Command-line front end over the `lotto` crate: equilibrium payoffs and
//! strategies, opponent investment, budget randomization, commander
//! assignment, CSV parameter sweeps, and oracle certification.
//!
//! Every command reads JSON, calls the library, and prints the result with
//! 9-significant-digit numbers; no computation happens here.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use lotto::bernoulli::{bl_equilibrium_strategy, bl_payoff_nocost, classify_region};
use lotto::commander::{
    det_assign_fixed_budget, det_assign_per_unit, general_setting_performance,
    rand_assign_fixed_budget, rand_assign_per_unit, AssignmentResult, Setting,
};
use lotto::complete_info::{ci_equilibrium_strategy, ci_payoff_cost, ci_payoff_nocost};
use lotto::cost::{bl_payoff_cost, classify_regime};
use lotto::game::{BernoulliEndowment, OpponentParams};
use lotto::io::{format_sig, round_sig, CommanderFile, GameFile, StrategyFile};
use lotto::oracle::{
    best_response_value_a, best_response_value_b, exact_payoff, monte_carlo_payoff,
    verify_equilibrium, VerificationReport,
};
use lotto::randomize::{optimal_randomization, optimal_randomization_fixed_p, RandomizationResult};
use lotto::strategy::{Component, MixedStrategy, Segment, StrategyProfile};
use lotto::{Error, GameSpec64, MixedStrategy64, StrategyProfile64};

#[derive(Parser)]
#[command(name = "lotto", version, about = "Resource-allocation game calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrium payoffs for a game description.
    Payoff {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equilibrium strategy profile for a game description.
    Strategy {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Opponent's optimal resource investment under a per-unit cost.
    Invest {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal two-point budget randomization at the game file's mean endowment.
    Randomize {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Commander assignment over a two-front instance.
    Commander {
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Starting grid size for the general-setting search.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameter sweep written as CSV.
    Sweep {
        sweep: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Starting grid size for general-setting rows.
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Certify the computed equilibrium with the best-response oracle.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = 20001)]
        grid: usize,
        /// Monte Carlo sample count; adds a simulation row to the report.
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Certification threshold; defaults to 1e-4 times the total value.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Test hook: scale the high type's support by 1.1 before checking.
        #[arg(long)]
        perturb: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Det,
    Rand,
    General,
}

/// Failure classes mapped onto process exit codes.
enum Failure {
    Validation(String),
    Setting(String),
    Io(String),
    Certification(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Setting(_) => 3,
            Failure::Io(_) => 4,
            Failure::Certification(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m)
            | Failure::Setting(m)
            | Failure::Io(m)
            | Failure::Certification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SettingMismatch { .. } => Failure::Setting(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Payoff { spec, out } => cmd_payoff(&spec, out.as_deref()),
        Command::Strategy { spec, out } => cmd_strategy(&spec, out.as_deref()),
        Command::Invest { spec, out } => cmd_invest(&spec, out.as_deref()),
        Command::Randomize { spec, out } => cmd_randomize(&spec, out.as_deref()),
        Command::Commander {
            instance,
            mode,
            grid,
            out,
        } => cmd_commander(&instance, mode, grid, out.as_deref()),
        Command::Sweep { sweep, out, grid } => cmd_sweep(&sweep, &out, grid),
        Command::Verify {
            spec,
            grid,
            mc,
            seed,
            tolerance,
            perturb,
            out,
        } => cmd_verify(&spec, grid, mc, seed, tolerance, perturb, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn read_game(path: &Path) -> Result<GameFile, Failure> {
    let file: GameFile = serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    file.validate()?;
    Ok(file)
}

fn read_commander(path: &Path) -> Result<CommanderFile, Failure> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Rounds every float in the tree to the printed precision so JSON and CSV
/// digits agree; infinities become the string "inf" as in input files.
fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("f64 number");
                if x.is_finite() {
                    *v = json!(round_sig(x));
                } else {
                    *v = json!(format_sig(x));
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn emit_json(out: Option<&Path>, mut v: Value) -> Result<(), Failure> {
    round_json(&mut v);
    let mut text = serde_json::to_string_pretty(&v).expect("plain value tree");
    text.push('\n');
    emit(out, &text)
}

fn strategy_json(s: &MixedStrategy64) -> Value {
    serde_json::to_value(StrategyFile::from_strategy(s)).expect("strategy serializes")
}

/// The opponent's equilibrium resource level: the stated budget when
/// resources are free, the optimal capped investment when they carry a
/// per-unit cost.
fn equilibrium_level(file: &GameFile, phi: f64) -> Result<f64, Failure> {
    let b = file.opponent.b;
    let c = file.opponent.c;
    if c > 0.0 {
        if file.is_degenerate() {
            Ok(ci_payoff_cost(file.mean_endowment(), b, c, phi)?.opponent_spend)
        } else {
            Ok(bl_payoff_cost(&file.endowment()?, b, c, phi)?.opponent_spend)
        }
    } else {
        Ok(b)
    }
}

/// Equilibrium profile at the opponent level, including the conceded limit:
/// at level 0 the opponent sits at zero and each allocator type spreads
/// uniformly up to twice its budget (an atom at zero for a zero budget).
fn equilibrium_profile(file: &GameFile, level: f64) -> Result<StrategyProfile64, Failure> {
    let spread = |budget: f64| -> Result<MixedStrategy64, Failure> {
        if budget > 0.0 {
            Ok(MixedStrategy::uniform(0.0, 2.0 * budget)?)
        } else {
            Ok(MixedStrategy::atom(0.0)?)
        }
    };
    if file.is_degenerate() {
        let mean = file.mean_endowment();
        if level > 0.0 {
            let (f_a, f_b) = ci_equilibrium_strategy(mean, level)?;
            Ok(StrategyProfile::new(f_a.clone(), f_a, f_b))
        } else {
            let f_a = spread(mean)?;
            Ok(StrategyProfile::new(
                f_a.clone(),
                f_a,
                MixedStrategy::atom(0.0)?,
            ))
        }
    } else {
        let e = file.endowment()?;
        if level > 0.0 {
            Ok(bl_equilibrium_strategy(&e, level)?)
        } else {
            Ok(StrategyProfile::new(
                spread(e.high())?,
                spread(e.low())?,
                MixedStrategy::atom(0.0)?,
            ))
        }
    }
}

/// Region tag describing which payoff branch applies at the opponent level.
fn region_tag(file: &GameFile, level: f64) -> Result<String, Failure> {
    if file.is_degenerate() {
        return Ok("CI".into());
    }
    if level > 0.0 {
        Ok(classify_region(&file.endowment()?, level)?.name().into())
    } else {
        Ok("saturated".into())
    }
}

fn cmd_payoff(path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let file = read_game(path)?;
    let phi = file.battlefields()?.total();
    let b = file.opponent.b;
    let c = file.opponent.c;
    let report = if file.is_degenerate() {
        let mean = file.mean_endowment();
        if c > 0.0 {
            let outcome = ci_payoff_cost(mean, b, c, phi)?;
            json!({
                "region": "CI",
                "pi_A": outcome.payoffs.a,
                "pi_B": outcome.payoffs.b,
                "opponent_spend": outcome.opponent_spend,
            })
        } else {
            let payoffs = ci_payoff_nocost(mean, b, phi)?;
            json!({
                "region": "CI",
                "pi_A": payoffs.a,
                "pi_B": payoffs.b,
                "opponent_spend": b,
            })
        }
    } else {
        let e = file.endowment()?;
        if c > 0.0 {
            let outcome = bl_payoff_cost(&e, b, c, phi)?;
            json!({
                "region": region_tag(&file, outcome.opponent_spend)?,
                "regime": classify_regime(&e, c, phi)?.name(),
                "pi_A": outcome.payoffs.a,
                "pi_B": outcome.payoffs.b,
                "opponent_spend": outcome.opponent_spend,
                "lambda_threshold": outcome.lambda_threshold,
            })
        } else {
            let payoffs = bl_payoff_nocost(&e, b, phi)?;
            json!({
                "region": classify_region(&e, b)?.name(),
                "pi_A": payoffs.a,
                "pi_B": payoffs.b,
                "opponent_spend": b,
            })
        }
    };
    emit_json(out, report)
}

fn cmd_strategy(path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let file = read_game(path)?;
    let phi = file.battlefields()?.total();
    let level = equilibrium_level(&file, phi)?;
    let profile = equilibrium_profile(&file, level)?;
    emit_json(
        out,
        json!({
            "region": region_tag(&file, level)?,
            "opponent_spend": level,
            "f_a_high": strategy_json(&profile.f_a_high),
            "f_a_low": strategy_json(&profile.f_a_low),
            "f_b": strategy_json(&profile.f_b),
        }),
    )
}

fn cmd_invest(path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let file = read_game(path)?;
    let phi = file.battlefields()?.total();
    let b = file.opponent.b;
    let c = file.opponent.c;
    if c <= 0.0 {
        return Err(Failure::Validation(
            "investment analysis needs a positive opponent unit cost".into(),
        ));
    }
    let report = if file.is_degenerate() {
        let outcome = ci_payoff_cost(file.mean_endowment(), b, c, phi)?;
        json!({
            "region": "CI",
            "b_star": outcome.opponent_spend,
            "pi_A": outcome.payoffs.a,
            "pi_B": outcome.payoffs.b,
        })
    } else {
        let e = file.endowment()?;
        let outcome = bl_payoff_cost(&e, b, c, phi)?;
        json!({
            "regime": classify_regime(&e, c, phi)?.name(),
            "b_star": outcome.opponent_spend,
            "pi_A": outcome.payoffs.a,
            "pi_B": outcome.payoffs.b,
            "lambda_threshold": outcome.lambda_threshold,
        })
    };
    emit_json(out, report)
}

fn randomization_json(r: &RandomizationResult<f64>) -> Value {
    json!({
        "high": r.randomization.high,
        "low": r.randomization.low,
        "p_high": r.randomization.p_high,
        "pi_A": r.payoff_a,
        "pi_B": r.payoff_b,
    })
}

fn cmd_randomize(path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let file = read_game(path)?;
    let phi = file.battlefields()?.total();
    let b = file.opponent.b;
    let c = file.opponent.c;
    let mean = file.mean_endowment();
    let free = optimal_randomization(mean, b, c, phi)?;
    let fixed = if file.is_degenerate() {
        Value::Null
    } else {
        let r = optimal_randomization_fixed_p(mean, b, c, file.endowment.p, phi)?;
        randomization_json(&r)
    };
    emit_json(
        out,
        json!({
            "mean": mean,
            "free": randomization_json(&free),
            "fixed_p": fixed,
        }),
    )
}

fn assignment_json(setting: Setting, mode: &str, r: &AssignmentResult<f64>) -> Value {
    let support: Vec<Value> = r
        .distribution
        .support()
        .iter()
        .map(|(pt, prob)| json!({"a1": pt[0], "a2": pt[1], "prob": prob}))
        .collect();
    json!({
        "setting": setting.name(),
        "mode": mode,
        "W": r.performance,
        "expected_spend": r.expected_spend,
        "support": support,
    })
}

fn cmd_commander(path: &Path, mode: Mode, grid: usize, out: Option<&Path>) -> Result<(), Failure> {
    let inst = read_commander(path)?.to_instance()?;
    let setting = inst.setting();
    let report = match mode {
        Mode::Det | Mode::Rand => {
            let det = mode == Mode::Det;
            let result = match setting {
                Setting::FixedBudget => {
                    if det {
                        det_assign_fixed_budget(&inst)?
                    } else {
                        rand_assign_fixed_budget(&inst)?
                    }
                }
                Setting::PerUnit => {
                    if det {
                        det_assign_per_unit(&inst)?
                    } else {
                        rand_assign_per_unit(&inst)?
                    }
                }
                Setting::General => {
                    return Err(Error::SettingMismatch {
                        detail: "closed-form assignment needs a fixed-budget or per-unit instance",
                    }
                    .into())
                }
            };
            assignment_json(setting, if det { "det" } else { "rand" }, &result)
        }
        Mode::General => {
            let (w_det, w_rand) = general_setting_performance(&inst, grid)?;
            let (phi1, phi2) = inst.front_values();
            json!({
                "setting": setting.name(),
                "mode": "general",
                "W_det": w_det,
                "W_rand": w_rand,
                "ratio": ratio_of(w_det, w_rand),
                "grid_tolerance": 1e-4 * (phi1 + phi2),
            })
        }
    };
    emit_json(out, report)
}

fn ratio_of(w_det: f64, w_rand: f64) -> f64 {
    if w_det > 0.0 {
        w_rand / w_det
    } else if w_rand > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum SweepParameter {
    OpponentCost,
    CommanderCost,
}

#[derive(Deserialize)]
struct RangeSpec {
    lo: f64,
    hi: f64,
    steps: usize,
}

#[derive(Deserialize)]
struct SweepFile {
    parameter: SweepParameter,
    range: RangeSpec,
    instance: Value,
}

fn linspace(r: &RangeSpec) -> Result<Vec<f64>, Failure> {
    if !r.lo.is_finite() || !r.hi.is_finite() || r.lo >= r.hi {
        return Err(Failure::Validation(format!(
            "sweep range needs finite lo < hi, got [{}, {}]",
            r.lo, r.hi
        )));
    }
    if r.steps < 2 {
        return Err(Failure::Validation(format!(
            "sweep needs at least 2 steps, got {}",
            r.steps
        )));
    }
    let span = r.hi - r.lo;
    let last = r.steps - 1;
    Ok((0..r.steps)
        .map(|i| {
            if i == last {
                r.hi
            } else {
                r.lo + span * i as f64 / last as f64
            }
        })
        .collect())
}

fn cmd_sweep(path: &Path, out: &Path, grid: usize) -> Result<(), Failure> {
    let sweep: SweepFile = serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let cs = linspace(&sweep.range)?;
    let mut csv = String::new();
    match sweep.parameter {
        SweepParameter::CommanderCost => {
            let base: CommanderFile = serde_json::from_value(sweep.instance)
                .map_err(|e| Failure::Validation(format!("sweep instance: {e}")))?;
            csv.push_str("c,W_det,W_rand,ratio,setting\n");
            let rows: Vec<Result<String, Failure>> = cs
                .par_iter()
                .map(|&c| {
                    let inst = CommanderFile { c, ..base.clone() }.to_instance()?;
                    let (w_det, w_rand) = match inst.setting() {
                        Setting::PerUnit => (
                            det_assign_per_unit(&inst)?.performance,
                            rand_assign_per_unit(&inst)?.performance,
                        ),
                        _ => general_setting_performance(&inst, grid)?,
                    };
                    Ok(format!(
                        "{},{},{},{},{}",
                        format_sig(c),
                        format_sig(w_det),
                        format_sig(w_rand),
                        format_sig(ratio_of(w_det, w_rand)),
                        inst.setting().name()
                    ))
                })
                .collect();
            for row in rows {
                csv.push_str(&row?);
                csv.push('\n');
            }
        }
        SweepParameter::OpponentCost => {
            let base: GameFile = serde_json::from_value(sweep.instance)
                .map_err(|e| Failure::Validation(format!("sweep instance: {e}")))?;
            base.validate_endowment()?;
            let phi = base.battlefields()?.total();
            let b = base.opponent.b;
            let mean = base.mean_endowment();
            csv.push_str("c,pi_a_fixed,pi_a_opt,pi_a_ci,pi_b_fixed,pi_b_opt,pi_b_ci\n");
            let rows: Vec<Result<String, Failure>> = cs
                .par_iter()
                .map(|&c| {
                    OpponentParams::new(b, c)?;
                    let fixed = if base.is_degenerate() {
                        ci_payoff_cost(mean, b, c, phi)?.payoffs
                    } else {
                        bl_payoff_cost(&base.endowment()?, b, c, phi)?.payoffs
                    };
                    let opt = optimal_randomization(mean, b, c, phi)?;
                    let ci = ci_payoff_cost(mean, b, c, phi)?.payoffs;
                    Ok(format!(
                        "{},{},{},{},{},{},{}",
                        format_sig(c),
                        format_sig(fixed.a),
                        format_sig(opt.payoff_a),
                        format_sig(ci.a),
                        format_sig(fixed.b),
                        format_sig(opt.payoff_b),
                        format_sig(ci.b)
                    ))
                })
                .collect();
            for row in rows {
                csv.push_str(&row?);
                csv.push('\n');
            }
        }
    }
    fs::write(out, csv).map_err(|e| Failure::Io(format!("cannot write {}: {e}", out.display())))
}

/// Scales a strategy's support by the factor, keeping weights. Used by the
/// --perturb negative-control hook.
fn scale_support(s: &MixedStrategy64, factor: f64) -> MixedStrategy64 {
    let comps = s
        .components()
        .iter()
        .map(|c| Component {
            weight: c.weight,
            segment: match c.segment {
                Segment::Atom(a) => Segment::Atom(a * factor),
                Segment::Uniform(lo, hi) => Segment::Uniform(lo * factor, hi * factor),
            },
        })
        .collect();
    MixedStrategy::new(comps).expect("scaled strategy stays valid")
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    path: &Path,
    grid: usize,
    mc: Option<usize>,
    seed: u64,
    tolerance: Option<f64>,
    perturb: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let file = read_game(path)?;
    let phi = file.battlefields()?.total();
    let threshold = tolerance.unwrap_or(1e-4 * phi);
    let b = file.opponent.b;
    let c = file.opponent.c;
    let level = equilibrium_level(&file, phi)?;
    let mut profile = equilibrium_profile(&file, level)?;
    if perturb {
        profile.f_a_high = scale_support(&profile.f_a_high, 1.1);
    }

    let (report, mc_spec) = if file.is_degenerate() {
        let mean = file.mean_endowment();
        let f_a = &profile.f_a_high;
        let realized = exact_payoff(f_a, &profile.f_b, phi);
        let value_b = (phi - realized) - c * profile.f_b.mean();
        let br_a = best_response_value_a(&profile.f_b, mean, phi, grid);
        let br_b = best_response_value_b(f_a, f_a, 0.5, b, c, phi, grid);
        let e_a = (br_a - realized).max(0.0);
        let e_b = (br_b - value_b).max(0.0);
        let report = VerificationReport {
            value_a: realized,
            value_b,
            exploitability_a_high: e_a,
            exploitability_a_low: e_a,
            exploitability_b: e_b,
            epsilon: e_a.max(e_b),
            grid_points: grid,
        };
        // Simulation only reads the type probability and battlefields, and
        // both types play the same strategy here, so a nominal split of the
        // mean stands in for the degenerate endowment.
        let spread = mean.max(1.0) * 1e-6;
        let e = BernoulliEndowment::new(mean + spread, (mean - spread).max(0.0), 0.5)
            .expect("synthetic two-point split");
        let spec = GameSpec64::new(file.battlefields()?, e, file.opponent()?);
        (report, spec)
    } else {
        let spec = file.to_game_spec()?;
        let report = verify_equilibrium(&profile, &spec, grid);
        (report, spec)
    };

    let mut body = json!({
        "value_a": report.value_a,
        "value_b": report.value_b,
        "exploitability_a_high": report.exploitability_a_high,
        "exploitability_a_low": report.exploitability_a_low,
        "exploitability_b": report.exploitability_b,
        "epsilon": report.epsilon,
        "grid_points": report.grid_points,
        "threshold": threshold,
        "certified": report.epsilon <= threshold,
    });
    if let Some(n) = mc {
        let (estimate, stderr) = monte_carlo_payoff(&profile, &mc_spec, n, seed);
        body["monte_carlo"] = json!({
            "samples": n,
            "seed": seed,
            "estimate": estimate,
            "stderr": stderr,
            "within_3se": (estimate - report.value_a).abs() <= 3.0 * stderr,
        });
    }
    emit_json(out, body)?;
    if report.epsilon <= threshold {
        Ok(())
    } else {
        Err(Failure::Certification(format!(
            "epsilon {} exceeds threshold {}",
            format_sig(report.epsilon),
            format_sig(threshold)
        )))
    }
}
