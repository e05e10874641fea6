//! Command-line front end: config ingestion, experiment orchestration,
//! and CSV/JSON report emission.
//!
//! Subcommands: `measure`, `sweep`, `verify`, `analytic`, `spectrum`.
//! Runs are described by a JSON config document
//!
//! ```json
//! {"n": 5, "j_xy": [1,2,2,1], "j_z": [0,0,0,0],
//!  "sector": 3, "pairs": [[1,3]], "seed": 42}
//! ```
//!
//! with command-line flags overriding file fields. Numeric CSV output is
//! printed with 17 significant digits so that files round-trip and diff
//! cleanly; identical config and seed produce byte-identical output.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 degeneracy abort,
//! 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, Momentum, TwoParticleState};
use crate::diag::{ground_state_with_tol, SectorChoice, DEGENERACY_TOL};
use crate::error::Error;
use crate::measures;
use crate::model::{build_tb_fermion, build_xxz_spin, CouplingSet};
use crate::verify::{run_full_battery, EnsembleConfig};

/// Sector selector as written in config files: an n_up integer or "auto".
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SectorSpec {
    Fixed(usize),
    Named(String),
}

impl Default for SectorSpec {
    fn default() -> Self {
        SectorSpec::Named("auto".to_string())
    }
}

impl SectorSpec {
    fn resolve(&self) -> Result<SectorChoice, CliError> {
        match self {
            SectorSpec::Fixed(n_up) => Ok(SectorChoice::Fixed(*n_up)),
            SectorSpec::Named(s) if s == "auto" => Ok(SectorChoice::Auto),
            SectorSpec::Named(s) => Err(CliError::Usage(format!(
                "sector must be an integer or \"auto\", got {s:?}"
            ))),
        }
    }
}

/// Pair list as written in config files: explicit [[i, j], ...] or "all".
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PairsSpec {
    Explicit(Vec<(usize, usize)>),
    Named(String),
}

impl Default for PairsSpec {
    fn default() -> Self {
        PairsSpec::Named("all".to_string())
    }
}

impl PairsSpec {
    fn resolve(&self, n: usize) -> Result<Vec<(usize, usize)>, CliError> {
        let pairs = match self {
            PairsSpec::Explicit(pairs) => pairs.clone(),
            PairsSpec::Named(s) if s == "all" => {
                let mut pairs = Vec::new();
                for i in 1..n {
                    for j in (i + 1)..=n {
                        pairs.push((i, j));
                    }
                }
                pairs
            }
            PairsSpec::Named(s) => {
                return Err(CliError::Usage(format!(
                    "pairs must be a list of [i, j] or \"all\", got {s:?}"
                )))
            }
        };
        for &(i, j) in &pairs {
            if i == 0 || i >= j || j > n {
                return Err(CliError::Usage(format!(
                    "pair ({i}, {j}) invalid for an {n}-site chain"
                )));
            }
        }
        Ok(pairs)
    }
}

fn default_seed() -> u64 {
    42
}

/// One experiment: chain, couplings, sector, pairs, seed. Serializable so
/// that a run can be reproduced from its config file alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_xy: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_z: Option<Vec<f64>>,
    #[serde(default)]
    pub sector: SectorSpec,
    #[serde(default)]
    pub pairs: PairsSpec,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Optional override of the degeneracy tolerance (energy units).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracy_tol: Option<f64>,
}

impl ExperimentConfig {
    pub fn with_n(n: usize) -> Self {
        ExperimentConfig {
            n,
            j_xy: None,
            j_z: None,
            sector: SectorSpec::default(),
            pairs: PairsSpec::default(),
            seed: default_seed(),
            degeneracy_tol: None,
        }
    }

    /// Couplings with defaults: uniform J = 1 transverse, Jᶻ = 0.
    pub fn couplings(&self) -> Result<CouplingSet, CliError> {
        if self.n < 2 {
            return Err(CliError::Usage(format!(
                "chain length must be at least 2, got {}",
                self.n
            )));
        }
        let j_xy = self
            .j_xy
            .clone()
            .unwrap_or_else(|| vec![1.0; self.n - 1]);
        let j_z = self.j_z.clone().unwrap_or_else(|| vec![0.0; j_xy.len()]);
        let couplings = CouplingSet::new(j_xy, j_z)?;
        if couplings.n_sites() != self.n {
            return Err(CliError::Usage(format!(
                "{} bonds configured for an {}-site chain",
                couplings.bonds(),
                self.n
            )));
        }
        Ok(couplings)
    }

    pub fn tolerance(&self) -> f64 {
        self.degeneracy_tol.unwrap_or(DEGENERACY_TOL)
    }
}

/// One measured pair, as emitted by `measure` and `sweep`.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub i: usize,
    pub j: usize,
    pub nn_flag: bool,
    pub u_plus: f64,
    pub u_minus: f64,
    pub z: f64,
    pub x_plus: f64,
    pub x_minus: f64,
    pub z_f: f64,
    pub concurrence: f64,
    pub mode_concurrence: f64,
    pub c_minus_mc: f64,
}

impl ReportRow {
    fn from_measure(m: &measures::PairMeasure) -> Self {
        ReportRow {
            i: m.i,
            j: m.j,
            nn_flag: m.is_nearest_neighbor(),
            u_plus: m.spin.u_plus,
            u_minus: m.spin.u_minus,
            z: m.spin.z,
            x_plus: m.fermion.x_plus,
            x_minus: m.fermion.x_minus,
            z_f: m.fermion.z_f,
            concurrence: m.concurrence,
            mode_concurrence: m.mode_concurrence,
            c_minus_mc: m.concurrence - m.mode_concurrence,
        }
    }

    const CSV_HEADER: &'static str = "i,j,nn_flag,u_plus,u_minus,z,x_plus,x_minus,z_f,concurrence,mode_concurrence,c_minus_mc";

    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.i,
            self.j,
            self.nn_flag as u8,
            fmt(self.u_plus),
            fmt(self.u_minus),
            fmt(self.z),
            fmt(self.x_plus),
            fmt(self.x_minus),
            fmt(self.z_f),
            fmt(self.concurrence),
            fmt(self.mode_concurrence),
            fmt(self.c_minus_mc),
        )
    }
}

/// Sweep rows carry the grid value and a degeneracy flag in front of the
/// measured columns.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub anisotropy: f64,
    pub degenerate: bool,
    #[serde(flatten)]
    pub row: ReportRow,
}

impl SweepRow {
    const CSV_HEADER: &'static str = "anisotropy,degenerate,i,j,nn_flag,u_plus,u_minus,z,x_plus,x_minus,z_f,concurrence,mode_concurrence,c_minus_mc";

    fn csv_line(&self) -> String {
        format!(
            "{},{},{}",
            fmt(self.anisotropy),
            self.degenerate as u8,
            self.row.csv_line()
        )
    }
}

/// Rows of the `analytic` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticRow {
    pub i: usize,
    pub j: usize,
    pub z: f64,
    pub z_f: f64,
    pub concurrence: f64,
    pub mode_concurrence: f64,
    /// |z| ≥ |Z| within 1e-12.
    pub z_dominates: bool,
}

impl AnalyticRow {
    const CSV_HEADER: &'static str = "i,j,z,z_f,concurrence,mode_concurrence,z_dominates";

    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.i,
            self.j,
            fmt(self.z),
            fmt(self.z_f),
            fmt(self.concurrence),
            fmt(self.mode_concurrence),
            self.z_dominates as u8,
        )
    }
}

/// Rows of the `spectrum` subcommand: per-sector eigenvalues of both
/// pictures side by side.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub n_up: usize,
    pub level: usize,
    pub energy_spin: f64,
    pub energy_fermion: f64,
    pub abs_diff: f64,
}

impl SpectrumRow {
    const CSV_HEADER: &'static str = "n_up,level,energy_spin,energy_fermion,abs_diff";

    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.n_up,
            self.level,
            fmt(self.energy_spin),
            fmt(self.energy_fermion),
            fmt(self.abs_diff),
        )
    }
}

/// 17 significant digits: round-trip safe for f64.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(io::Error),
    Json(serde_json::Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Json(e) => write!(f, "config error: {e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Degenerate { .. }) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "jwchain",
    version,
    about = "Pairwise entanglement in spin-1/2 chains and their Jordan-Wigner fermion counterparts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure concurrence and mode concurrence on ground-state pairs
    Measure(MeasureArgs),
    /// Re-measure across a grid of Ising/transverse coupling ratios
    Sweep(SweepArgs),
    /// Run the verification battery; exits 3 on any suite failure
    Verify(VerifyArgs),
    /// Closed-form two-particle correlators of the uniform chain
    Analytic(AnalyticArgs),
    /// Sector spectra of the spin chain and its fermion counterpart
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON config file; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Chain length
    #[arg(long)]
    pub n: Option<usize>,
    /// Sector n_up, or "auto" to scan all sectors
    #[arg(long)]
    pub sector: Option<String>,
    /// Semicolon-separated pairs "i,j;i,j" or "all"
    #[arg(long)]
    pub pairs: Option<String>,
    /// Seed recorded in config round-trips and used by `verify`
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Abort (exit 2) when the pinned sector's ground state is degenerate
    #[arg(long)]
    pub strict_degeneracy: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated grid of Jᶻ/J ratios, e.g. "0,0.5,1,2"
    #[arg(long)]
    pub grid: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Ensemble seed
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of random chains in the ensemble
    #[arg(long, default_value_t = 100)]
    pub draws: usize,
    /// Output path for the JSON summary (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// Chain length
    #[arg(long)]
    pub n: usize,
    /// First momentum index (1..=n)
    #[arg(long)]
    pub k1: usize,
    /// Second momentum index (1..=n), distinct from k1
    #[arg(long)]
    pub k2: usize,
    /// Semicolon-separated pairs "i,j;i,j" or "all" (default all)
    #[arg(long)]
    pub pairs: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_sector_flag(s: &str) -> Result<SectorSpec, CliError> {
    if s == "auto" {
        return Ok(SectorSpec::Named("auto".to_string()));
    }
    s.parse::<usize>()
        .map(SectorSpec::Fixed)
        .map_err(|_| CliError::Usage(format!("sector must be an integer or \"auto\", got {s:?}")))
}

fn parse_pairs_flag(s: &str) -> Result<PairsSpec, CliError> {
    if s == "all" {
        return Ok(PairsSpec::Named("all".to_string()));
    }
    let mut pairs = Vec::new();
    for part in s.split(';').filter(|p| !p.is_empty()) {
        let mut it = part.split(',');
        let (i, j) = (it.next(), it.next());
        match (i, j, it.next()) {
            (Some(i), Some(j), None) => {
                let i = i.trim().parse::<usize>();
                let j = j.trim().parse::<usize>();
                match (i, j) {
                    (Ok(i), Ok(j)) => pairs.push((i, j)),
                    _ => {
                        return Err(CliError::Usage(format!(
                            "cannot parse pair {part:?}; expected \"i,j\""
                        )))
                    }
                }
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "cannot parse pair {part:?}; expected \"i,j\""
                )))
            }
        }
    }
    if pairs.is_empty() {
        return Ok(PairsSpec::Explicit(Vec::new()));
    }
    Ok(PairsSpec::Explicit(pairs))
}

fn parse_grid_flag(s: &str) -> Result<Vec<f64>, CliError> {
    let mut grid = Vec::new();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        grid.push(part.trim().parse::<f64>().map_err(|_| {
            CliError::Usage(format!("cannot parse grid value {part:?}"))
        })?);
    }
    if grid.is_empty() {
        return Err(CliError::Usage("grid must contain at least one value".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(
            "grid values must be strictly increasing".into(),
        ));
    }
    Ok(grid)
}

/// Load the config file (if any) and apply flag overrides.
fn resolve_config(common: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str::<ExperimentConfig>(&text)?
        }
        None => {
            let n = common.n.ok_or_else(|| {
                CliError::Usage("either --config or --n is required".to_string())
            })?;
            ExperimentConfig::with_n(n)
        }
    };
    if let Some(n) = common.n {
        config.n = n;
    }
    if let Some(sector) = &common.sector {
        config.sector = parse_sector_flag(sector)?;
    }
    if let Some(pairs) = &common.pairs {
        config.pairs = parse_pairs_flag(pairs)?;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn write_output(out: &Option<PathBuf>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, contents)?,
        None => io::stdout().write_all(contents.as_bytes())?,
    }
    Ok(())
}

fn render<T: Serialize>(
    format: OutputFormat,
    header: &str,
    rows: &[T],
    csv_line: impl Fn(&T) -> String,
) -> Result<String, CliError> {
    match format {
        OutputFormat::Csv => {
            let mut text = String::from(header);
            text.push('\n');
            for row in rows {
                text.push_str(&csv_line(row));
                text.push('\n');
            }
            Ok(text)
        }
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(rows)?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Ground-state rows for every requested pair.
pub fn cmd_measure(
    config: &ExperimentConfig,
    strict_degeneracy: bool,
) -> Result<Vec<ReportRow>, CliError> {
    let couplings = config.couplings()?;
    let choice = config.sector.resolve()?;
    // an ambiguous cross-sector tie always aborts; a tie inside a pinned
    // sector aborts only on request
    let strict = strict_degeneracy || matches!(choice, SectorChoice::Auto);
    let report = ground_state_with_tol(
        build_xxz_spin,
        &couplings,
        choice,
        strict,
        config.tolerance(),
    )?;
    let pairs = config.pairs.resolve(config.n)?;
    let mut rows = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        let m = measures::measure_pair(&report.state, i, j)?;
        rows.push(ReportRow::from_measure(&m));
    }
    Ok(rows)
}

/// Sweep rows over a grid of anisotropy ratios; each grid point is an
/// independent ground-state problem, evaluated in parallel but emitted in
/// grid order. Degenerate points are flagged, never skipped.
pub fn cmd_sweep(config: &ExperimentConfig, grid: &[f64]) -> Result<Vec<SweepRow>, CliError> {
    if grid.is_empty() {
        return Err(CliError::Usage("grid must contain at least one value".into()));
    }
    let couplings = config.couplings()?;
    let choice = config.sector.resolve()?;
    let pairs = config.pairs.resolve(config.n)?;
    let tol = config.tolerance();
    let results: Vec<Result<Vec<SweepRow>, CliError>> = grid
        .par_iter()
        .map(|&ratio| {
            let point = couplings.with_anisotropy(ratio);
            let report =
                ground_state_with_tol(build_xxz_spin, &point, choice, false, tol)
                    .map_err(CliError::from)?;
            let mut rows = Vec::with_capacity(pairs.len());
            for &(i, j) in &pairs {
                let m = measures::measure_pair(&report.state, i, j).map_err(CliError::from)?;
                rows.push(SweepRow {
                    anisotropy: ratio,
                    degenerate: report.degenerate,
                    row: ReportRow::from_measure(&m),
                });
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Closed-form rows for a two-particle state of the uniform chain.
pub fn cmd_analytic(args: &AnalyticArgs) -> Result<Vec<AnalyticRow>, CliError> {
    if args.k1 == args.k2 {
        return Err(CliError::Usage(
            "momentum indices must be distinct (Pauli exclusion)".to_string(),
        ));
    }
    let k1 = Momentum::new(args.n, args.k1)?;
    let k2 = Momentum::new(args.n, args.k2)?;
    let state = TwoParticleState::new(k1, k2)?;
    let psi = state.state_vector()?;
    let pairs = match &args.pairs {
        Some(s) => parse_pairs_flag(s)?,
        None => PairsSpec::default(),
    }
    .resolve(args.n)?;
    let mut rows = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        let z = analytic::two_particle_spin_correlation(&k1, &k2, i, j)?;
        let z_f = analytic::two_particle_fermion_correlation(&k1, &k2, i, j)?;
        let m = measures::measure_pair(&psi, i, j)?;
        rows.push(AnalyticRow {
            i,
            j,
            z,
            z_f,
            concurrence: m.concurrence,
            mode_concurrence: m.mode_concurrence,
            z_dominates: z.abs() >= z_f.abs() - 1e-12,
        });
    }
    Ok(rows)
}

/// Eigenvalues of both pictures for the configured sector(s).
pub fn cmd_spectrum(config: &ExperimentConfig) -> Result<Vec<SpectrumRow>, CliError> {
    let couplings = config.couplings()?;
    let sectors: Vec<usize> = match config.sector.resolve()? {
        SectorChoice::Fixed(n_up) => vec![n_up],
        SectorChoice::Auto => (0..=config.n).collect(),
    };
    let mut rows = Vec::new();
    for n_up in sectors {
        let basis = crate::basis::enumerate_sector(config.n, n_up)?;
        let spin = crate::diag::eigensystem(&build_xxz_spin(&couplings, &basis)?)?;
        let fermion = crate::diag::eigensystem(&build_tb_fermion(&couplings, &basis)?)?;
        for (level, (es, ef)) in spin.values().iter().zip(fermion.values()).enumerate() {
            rows.push(SpectrumRow {
                n_up,
                level,
                energy_spin: *es,
                energy_fermion: *ef,
                abs_diff: (es - ef).abs(),
            });
        }
    }
    Ok(rows)
}

fn run_measure(args: &MeasureArgs) -> Result<(), CliError> {
    let config = resolve_config(&args.common)?;
    let rows = cmd_measure(&config, args.strict_degeneracy)?;
    let text = render(
        args.common.format,
        ReportRow::CSV_HEADER,
        &rows,
        ReportRow::csv_line,
    )?;
    write_output(&args.common.out, &text)
}

fn run_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let config = resolve_config(&args.common)?;
    let grid = parse_grid_flag(&args.grid)?;
    let rows = cmd_sweep(&config, &grid)?;
    let text = render(
        args.common.format,
        SweepRow::CSV_HEADER,
        &rows,
        SweepRow::csv_line,
    )?;
    write_output(&args.common.out, &text)
}

fn run_verify(args: &VerifyArgs) -> Result<bool, CliError> {
    let cfg = EnsembleConfig {
        draws: args.draws,
        seed: args.seed,
        ..Default::default()
    };
    let outcome = run_full_battery(&cfg)?;
    let mut text = serde_json::to_string_pretty(&outcome)?;
    text.push('\n');
    write_output(&args.out, &text)?;
    Ok(outcome.all_passed)
}

fn run_analytic(args: &AnalyticArgs) -> Result<(), CliError> {
    let rows = cmd_analytic(args)?;
    let text = render(
        args.format,
        AnalyticRow::CSV_HEADER,
        &rows,
        AnalyticRow::csv_line,
    )?;
    write_output(&args.out, &text)
}

fn run_spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let config = resolve_config(&args.common)?;
    let rows = cmd_spectrum(&config)?;
    let text = render(
        args.common.format,
        SpectrumRow::CSV_HEADER,
        &rows,
        SpectrumRow::csv_line,
    )?;
    write_output(&args.common.out, &text)
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Measure(args) => run_measure(args).map(|()| 0),
        Command::Sweep(args) => run_sweep(args).map(|()| 0),
        Command::Verify(args) => run_verify(args).map(|passed| if passed { 0 } else { 3 }),
        Command::Analytic(args) => run_analytic(args).map(|()| 0),
        Command::Spectrum(args) => run_spectrum(args).map(|()| 0),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_site_config() -> ExperimentConfig {
        ExperimentConfig {
            n: 5,
            j_xy: Some(vec![1.0, 2.0, 2.0, 1.0]),
            j_z: Some(vec![0.0; 4]),
            sector: SectorSpec::Fixed(3),
            pairs: PairsSpec::Explicit(vec![(1, 3), (1, 2)]),
            seed: 42,
            degeneracy_tol: None,
        }
    }

    #[test]
    fn measure_reproduces_reference_values() {
        let rows = cmd_measure(&five_site_config(), false).unwrap();
        assert_eq!(rows.len(), 2);
        let r13 = &rows[0];
        assert!((r13.concurrence - (4.0 - 14.0f64.sqrt()) / 9.0).abs() < 1e-12);
        assert_eq!(r13.mode_concurrence, 0.0);
        assert!(!r13.nn_flag);
        let r12 = &rows[1];
        assert!(r12.nn_flag);
        assert_eq!(r12.c_minus_mc, 0.0);
    }

    #[test]
    fn two_site_xy_ground_state_is_maximally_entangled() {
        let config = ExperimentConfig {
            n: 2,
            sector: SectorSpec::Fixed(1),
            pairs: PairsSpec::Explicit(vec![(1, 2)]),
            ..ExperimentConfig::with_n(2)
        };
        let rows = cmd_measure(&config, false).unwrap();
        assert!((rows[0].concurrence - 1.0).abs() < 1e-12);
        assert!((rows[0].mode_concurrence - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_holds_the_inequality_per_point() {
        let mut config = ExperimentConfig::with_n(6);
        config.sector = SectorSpec::Fixed(3);
        config.pairs = PairsSpec::Explicit(vec![(1, 4)]);
        let rows = cmd_sweep(&config, &[0.0, 0.5, 1.0, 2.0]).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert!(row.row.c_minus_mc >= -1e-10);
        }
        let anisotropies: Vec<f64> = rows.iter().map(|r| r.anisotropy).collect();
        assert_eq!(anisotropies, vec![0.0, 0.5, 1.0, 2.0]);
    }

    #[test]
    fn sweep_with_empty_pairs_yields_no_rows() {
        let mut config = ExperimentConfig::with_n(4);
        config.sector = SectorSpec::Fixed(2);
        config.pairs = PairsSpec::Explicit(Vec::new());
        let rows = cmd_sweep(&config, &[1.0]).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn single_point_sweep_matches_measure() {
        let mut config = five_site_config();
        config.j_z = None;
        let sweep = cmd_sweep(&config, &[0.0]).unwrap();
        let measure = cmd_measure(&config, false).unwrap();
        for (s, m) in sweep.iter().zip(&measure) {
            assert_eq!(s.row.concurrence, m.concurrence);
            assert_eq!(s.row.z_f, m.z_f);
        }
    }

    #[test]
    fn auto_sector_degeneracy_aborts() {
        let mut config = ExperimentConfig::with_n(3);
        config.j_xy = Some(vec![0.0, 0.0]);
        config.j_z = Some(vec![0.0, 0.0]);
        let err = cmd_measure(&config, false).unwrap_err();
        match err {
            CliError::Core(Error::Degenerate { .. }) => {}
            other => panic!("expected degeneracy abort, got {other:?}"),
        }
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn analytic_rows_flag_the_dominating_correlator() {
        let args = AnalyticArgs {
            n: 8,
            k1: 1,
            k2: 2,
            pairs: Some("2,5".to_string()),
            format: OutputFormat::Csv,
            out: None,
        };
        let rows = cmd_analytic(&args).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].z.abs() > rows[0].z_f.abs());
        assert!(rows[0].z_dominates);

        let args = AnalyticArgs {
            n: 7,
            k1: 1,
            k2: 7,
            pairs: Some("2,5".to_string()),
            format: OutputFormat::Csv,
            out: None,
        };
        let rows = cmd_analytic(&args).unwrap();
        assert!(rows[0].z.abs() < 1e-14);
        assert!(rows[0].z_f.abs() < 1e-14);
    }

    #[test]
    fn analytic_rejects_equal_momenta() {
        let args = AnalyticArgs {
            n: 6,
            k1: 2,
            k2: 2,
            pairs: None,
            format: OutputFormat::Csv,
            out: None,
        };
        assert!(matches!(cmd_analytic(&args), Err(CliError::Usage(_))));
    }

    #[test]
    fn spectrum_rows_agree_between_pictures() {
        let mut config = ExperimentConfig::with_n(4);
        config.j_xy = Some(vec![1.0, 0.5, 1.5]);
        config.j_z = Some(vec![0.3, -0.2, 0.9]);
        let rows = cmd_spectrum(&config).unwrap();
        assert_eq!(rows.len(), 16); // sum over sectors = 2^4
        for row in rows {
            assert!(row.abs_diff < 1e-10);
        }
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = five_site_config();
        let text = serde_json::to_string(&config).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.n, config.n);
        assert_eq!(back.sector, config.sector);
        assert_eq!(back.pairs, config.pairs);
        assert_eq!(back.seed, config.seed);
        let rows_a = cmd_measure(&config, false).unwrap();
        let rows_b = cmd_measure(&back, false).unwrap();
        for (a, b) in rows_a.iter().zip(&rows_b) {
            assert_eq!(a.csv_line(), b.csv_line());
        }
    }

    #[test]
    fn schema_example_parses() {
        let text = r#"{"n": 5, "j_xy": [1, 2, 2, 1], "j_z": [0, 0, 0, 0],
                       "sector": 3, "pairs": [[1, 3]], "seed": 7}"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(config.sector, SectorSpec::Fixed(3));
        assert_eq!(config.pairs, PairsSpec::Explicit(vec![(1, 3)]));
        assert_eq!(config.seed, 7);
        let text = r#"{"n": 4, "sector": "auto", "pairs": "all"}"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(config.sector, SectorSpec::default());
        assert_eq!(config.pairs, PairsSpec::default());
        assert_eq!(config.seed, 42);
    }

    #[test]
    fn flag_parsers() {
        assert_eq!(
            parse_pairs_flag("1,3;2,4").unwrap(),
            PairsSpec::Explicit(vec![(1, 3), (2, 4)])
        );
        assert!(parse_pairs_flag("1;2").is_err());
        assert!(parse_pairs_flag("1,2,3").is_err());
        assert_eq!(parse_grid_flag("0,0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_grid_flag("1,0.5").is_err());
        assert!(parse_grid_flag("").is_err());
        assert!(parse_sector_flag("auto").is_ok());
        assert_eq!(parse_sector_flag("3").unwrap(), SectorSpec::Fixed(3));
        assert!(parse_sector_flag("full").is_err());
    }

    #[test]
    fn csv_floats_round_trip() {
        for x in [2.0 / 9.0, (4.0 - 14.0f64.sqrt()) / 9.0, -1.0 / 3.0, 1e-17] {
            let printed = fmt(x);
            let back: f64 = printed.parse().unwrap();
            assert_eq!(back, x);
        }
    }
}
