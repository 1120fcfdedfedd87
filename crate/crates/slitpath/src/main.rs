use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use slitpath::cavity::{
    atom_conditioned_curves, build_two_cavity_state, eraser_curves, AtomLevel, OutcomeSequence,
    Sign,
};
use slitpath::config::RunConfig;
use slitpath::curve::Grid;
use slitpath::paths::PhysicalParams;
use slitpath::quach::{self, AmplitudeSet, QuachInputs};
use slitpath::validate::run_checks;

const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

const USAGE: &str = "usage: slitpath <paths|eraser|quach|validate> \
[--config FILE] [--out FILE] [--born-violation DELTA]";

struct Cli {
    command: String,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    born_violation: Option<f64>,
}

fn parse_args(args: &[String]) -> Result<Cli, String> {
    let mut it = args.iter();
    let command = it.next().ok_or_else(|| USAGE.to_string())?.clone();
    if !matches!(command.as_str(), "paths" | "eraser" | "quach" | "validate") {
        return Err(format!("unknown command {command:?}\n{USAGE}"));
    }
    let mut cli = Cli {
        command,
        config: None,
        out: None,
        born_violation: None,
    };
    while let Some(flag) = it.next() {
        let mut value = |name: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("{name} needs a value\n{USAGE}"))
        };
        match flag.as_str() {
            "--config" => cli.config = Some(PathBuf::from(value("--config")?)),
            "--out" => cli.out = Some(PathBuf::from(value("--out")?)),
            "--born-violation" => {
                let raw = value("--born-violation")?;
                let delta: f64 = raw
                    .parse()
                    .map_err(|_| format!("--born-violation: not a number: {raw:?}\n{USAGE}"))?;
                cli.born_violation = Some(delta);
            }
            other => return Err(format!("unknown flag {other:?}\n{USAGE}")),
        }
    }
    if cli.born_violation.is_some() && cli.command != "quach" {
        return Err(format!(
            "--born-violation only applies to the quach command\n{USAGE}"
        ));
    }
    Ok(cli)
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("SLITPATH_THREADS") {
        if let Ok(n) = raw.parse::<usize>() {
            if n >= 1 {
                // ignore failure: the global pool can only be set once
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match parse_args(&args) {
        Ok(cli) => cli,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("slitpath: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command.as_str() {
        "paths" => cmd_paths(&cfg, out_path(&cli, &cfg, "paths.csv")),
        "eraser" => cmd_eraser(&cfg, out_path(&cli, &cfg, "eraser.csv")),
        "quach" => cmd_quach(&cfg, out_path(&cli, &cfg, "quach.csv"), cli.born_violation),
        "validate" => return cmd_validate(&cfg),
        _ => unreachable!(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("slitpath: {e}");
            ExitCode::from(1)
        }
    }
}

fn load_config(cli: &Cli) -> slitpath::Result<RunConfig> {
    match &cli.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

fn out_path(cli: &Cli, cfg: &RunConfig, default: &str) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(default))
}

fn run_grid(cfg: &RunConfig) -> Grid {
    match cfg.grid_halfwidth {
        Some(hw) => Grid::symmetric(hw, cfg.grid_points),
        None => Grid::auto(&cfg.params, cfg.grid_points),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

struct CsvWriter {
    lines: Vec<String>,
}

impl CsvWriter {
    fn new(cfg: &RunConfig) -> Self {
        let p: &PhysicalParams = &cfg.params;
        let mut lines = vec![
            format!("# slitpath v{ARTIFACT_VERSION}"),
            format!("# mass_over_hbar = {}", fmt(p.mass_over_hbar)),
            format!("# slit_separation = {}", fmt(p.d)),
            format!("# source_width = {}", fmt(p.sigma0)),
            format!("# slit_width = {}", fmt(p.beta)),
            format!("# time_to_slits = {}", fmt(p.t)),
            format!("# time_to_screen = {}", fmt(p.tau)),
            format!("# loop_time = {}", fmt(p.epsilon)),
            format!("# gamma_t = {}", fmt(cfg.gamma_t)),
            format!("# grid_points = {}", cfg.grid_points),
        ];
        if let Some(hw) = cfg.grid_halfwidth {
            lines.push(format!("# grid_halfwidth = {}", fmt(hw)));
        }
        Self { lines }
    }

    fn meta(&mut self, key: &str, value: f64) {
        self.lines.push(format!("# {key} = {}", fmt(value)));
    }

    fn header(&mut self, columns: &[&str]) {
        self.lines.push(columns.join(","));
    }

    fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| fmt(v)).collect();
        self.lines.push(cells.join(","));
    }

    fn write(self, path: &Path) -> slitpath::Result<()> {
        let mut file = std::fs::File::create(path)?;
        for line in &self.lines {
            file.write_all(line.as_bytes())?;
            file.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn cmd_paths(cfg: &RunConfig, out: PathBuf) -> slitpath::Result<()> {
    let grid = run_grid(cfg);
    let state = build_two_cavity_state(&cfg.params)?;
    let (p_g, p_e) = atom_conditioned_curves(&state, &grid);
    let g0 = p_g.value_at_center();
    let mut csv = CsvWriter::new(cfg);
    csv.meta("normalization_n2", state.normalization);
    csv.meta("p_g_center", g0);
    csv.header(&["x", "p_g", "p_e", "p_e_over_p_g0"]);
    for i in 0..grid.xs.len() {
        csv.row(&[grid.xs[i], p_g.values[i], p_e.values[i], p_e.values[i] / g0]);
    }
    csv.write(&out)
}

fn cmd_eraser(cfg: &RunConfig, out: PathBuf) -> slitpath::Result<()> {
    let grid = run_grid(cfg);
    let state = build_two_cavity_state(&cfg.params)?;
    let (_, p_e) = atom_conditioned_curves(&state, &grid);
    let curves = eraser_curves(&state, &grid, cfg.gamma_t)?;
    let get = |clicks: Vec<Sign>| -> slitpath::Result<&slitpath::curve::ProbabilityCurve> {
        Ok(&curves[&(AtomLevel::Excited, OutcomeSequence::new(clicks)?)])
    };
    let pp = get(vec![Sign::Plus, Sign::Plus])?;
    let mm = get(vec![Sign::Minus, Sign::Minus])?;
    let pm = get(vec![Sign::Plus, Sign::Minus])?;
    let mp = get(vec![Sign::Minus, Sign::Plus])?;
    let mut csv = CsvWriter::new(cfg);
    csv.meta("normalization_n2", state.normalization);
    csv.header(&["x", "fringes", "antifringes", "sum", "p_e"]);
    for i in 0..grid.xs.len() {
        let fringes = pp.values[i] + mm.values[i];
        let anti = pm.values[i] + mp.values[i];
        csv.row(&[grid.xs[i], fringes, anti, fringes + anti, p_e.values[i]]);
    }
    csv.write(&out)
}

#[allow(clippy::needless_range_loop)] // one index drives seven parallel columns
fn cmd_quach(cfg: &RunConfig, out: PathBuf, born_violation: Option<f64>) -> slitpath::Result<()> {
    let grid = run_grid(cfg);
    let amps = AmplitudeSet::from_params(&cfg.params, &grid)?;
    let mut inputs = QuachInputs::from_amplitudes(&amps);
    if let Some(delta) = born_violation {
        inputs = inputs.perturbed(delta);
    }
    let i_ab = quach::quach_parameter(&inputs)?;
    let mut csv = CsvWriter::new(cfg);
    if let Some(delta) = born_violation {
        csv.meta("born_violation", delta);
    }
    csv.meta("norm_p_ab", inputs.p_ab.norm_constant);
    csv.meta("norm_p_d_a", inputs.p_da.norm_constant);
    csv.meta("norm_p_d_b", inputs.p_db.norm_constant);
    csv.meta("norm_p_d_ab", inputs.p_dab.norm_constant);
    csv.meta("norm_p_d_a_d_b", inputs.p_dadb.norm_constant);
    csv.header(&["x", "p_ab", "p_d_a", "p_d_b", "p_d_ab", "p_d_a_d_b", "i_ab"]);
    for i in 0..grid.xs.len() {
        csv.row(&[
            grid.xs[i],
            inputs.p_ab.values[i],
            inputs.p_da.values[i],
            inputs.p_db.values[i],
            inputs.p_dab.values[i],
            inputs.p_dadb.values[i],
            i_ab[i],
        ]);
    }
    csv.write(&out)?;
    let ratio = i_ab.iter().map(|v| v.abs()).fold(0.0, f64::max) / inputs.p_ab.max_value();
    println!("max|I_AB| / max(P_AB) = {}", fmt(ratio));
    Ok(())
}

fn cmd_validate(cfg: &RunConfig) -> ExitCode {
    let results = run_checks(cfg);
    let mut failed = 0usize;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<48}  {}", r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} checks, {} failed", results.len(), failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
