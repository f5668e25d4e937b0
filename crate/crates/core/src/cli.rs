//! Command-line frontend. Every subcommand writes CSV (and sometimes JSON)
//! into an output directory together with a manifest that `replay` can
//! rerun.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::grid::Grid;
use crate::hopfgen::{self, GenDeformation, Profile, WindowConvention};
use crate::io::{Cell, Manifest, OutputSet, Table};
use crate::matrep;
use crate::qnum::Deformation;
use crate::repcls::{self, MRule, RepDescriptor};
use crate::schrod::eigen::{eigensolve_cells, eigensolve_values, self_residual, EigenResult};
use crate::schrod::potential::{build_potential_with, PotentialForm, PotentialProfile, Regime};
use crate::schrod::realization::{Constants, F1Branch, F2Branch, RealizationFns};

/// `println!` that ignores a closed stdout.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

pub const OUT_DIR_ENV: &str = "SUQ2_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARGS: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "suq2", version, about = "Representations and potentials of su_q(2)")]
pub struct Cli {
    /// Output directory; falls back to $SUQ2_OUT_DIR, then `.`.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Base name of the output files; defaults to the subcommand.
    #[arg(long, global = true)]
    pub name: Option<String>,
    /// key=value defaults for the subcommand's flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Representation classes for one c or a range of c.
    Classify(ClassifyArgs),
    /// Matrices of a representation and the algebra residuals.
    Rep(RepArgs),
    /// Potential V(r; m, s) from the differential realization.
    Potential(PotentialArgs),
    /// Lowest eigenpairs of -d^2 + V.
    Spectrum(SpectrumArgs),
    /// [2m] against s.
    Flow(FlowArgs),
    /// Casimir level-set sections and their connectivity.
    Surface(SurfaceArgs),
    /// Hopf checks and unitarity window of the generalized deformation.
    Hopf(HopfArgs),
    /// Rerun a manifest and compare the output digests.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Rep(_) => "rep",
            Command::Potential(_) => "potential",
            Command::Spectrum(_) => "spectrum",
            Command::Flow(_) => "flow",
            Command::Surface(_) => "surface",
            Command::Hopf(_) => "hopf",
            Command::Replay(_) => "replay",
        }
    }

    fn args_json(&self) -> Result<serde_json::Value> {
        Ok(match self {
            Command::Classify(a) => serde_json::to_value(a)?,
            Command::Rep(a) => serde_json::to_value(a)?,
            Command::Potential(a) => serde_json::to_value(a)?,
            Command::Spectrum(a) => serde_json::to_value(a)?,
            Command::Flow(a) => serde_json::to_value(a)?,
            Command::Surface(a) => serde_json::to_value(a)?,
            Command::Hopf(a) => serde_json::to_value(a)?,
            Command::Replay(a) => serde_json::to_value(a)?,
        })
    }

    fn from_json(command: &str, args: serde_json::Value) -> Result<Self> {
        Ok(match command {
            "classify" => Command::Classify(serde_json::from_value(args)?),
            "rep" => Command::Rep(serde_json::from_value(args)?),
            "potential" => Command::Potential(serde_json::from_value(args)?),
            "spectrum" => Command::Spectrum(serde_json::from_value(args)?),
            "flow" => Command::Flow(serde_json::from_value(args)?),
            "surface" => Command::Surface(serde_json::from_value(args)?),
            "hopf" => Command::Hopf(serde_json::from_value(args)?),
            other => return Err(Error::Parse(format!("manifest names unknown command {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    /// A single Casimir value.
    #[arg(long, conflicts_with = "c_range")]
    pub c: Option<f64>,
    /// start:stop:step
    #[arg(long)]
    pub c_range: Option<String>,
    /// Labels are listed for |m| <= window.
    #[arg(long, default_value_t = 10.0)]
    pub window: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long)]
    pub c: f64,
    /// `lo:hi` for the labels lo, lo+1, ..., hi, or `finite` for the finite
    /// representation at this c.
    #[arg(long, default_value = "finite", allow_hyphen_values = true)]
    pub basis: String,
    /// Exit with status 3 when a defining residual exceeds `tol`.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum F1Choice {
    Tan,
    Tanh,
    ConstantPlus,
    ConstantMinus,
    Linear,
}

impl From<F1Choice> for F1Branch {
    fn from(c: F1Choice) -> Self {
        match c {
            F1Choice::Tan => F1Branch::Tan,
            F1Choice::Tanh => F1Branch::Tanh,
            F1Choice::ConstantPlus => F1Branch::Constant { sigma: 1.0 },
            F1Choice::ConstantMinus => F1Branch::Constant { sigma: -1.0 },
            F1Choice::Linear => F1Branch::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum F2Choice {
    Sech,
    Exponential,
    Secant,
    Cosine,
    Constant,
    Zero,
}

impl From<F2Choice> for F2Branch {
    fn from(c: F2Choice) -> Self {
        match c {
            F2Choice::Sech => F2Branch::Sech,
            F2Choice::Exponential => F2Branch::Exponential,
            F2Choice::Secant => F2Branch::Secant,
            F2Choice::Cosine => F2Branch::CosineLiteral,
            F2Choice::Constant => F2Branch::Constant,
            F2Choice::Zero => F2Branch::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeChoice {
    Near0,
    NearPi,
    NearHalfPi,
}

impl From<RegimeChoice> for Regime {
    fn from(c: RegimeChoice) -> Self {
        match c {
            RegimeChoice::Near0 => Regime::Near0,
            RegimeChoice::NearPi => Regime::NearPi,
            RegimeChoice::NearHalfPi => Regime::NearHalfPi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormChoice {
    Derived,
    TermList,
    TermListSecond,
}

impl From<FormChoice> for PotentialForm {
    fn from(c: FormChoice) -> Self {
        match c {
            FormChoice::Derived => PotentialForm::Derived,
            FormChoice::TermList => PotentialForm::TermList { second_derivative: false },
            FormChoice::TermListSecond => PotentialForm::TermList { second_derivative: true },
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PotentialArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    /// f1 branch; the one with f1(0) = 0 by default.
    #[arg(long, value_enum)]
    pub f1: Option<F1Choice>,
    /// f2 branch; the partner of f1 by default.
    #[arg(long, value_enum)]
    pub f2: Option<F2Choice>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub d1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub d2: f64,
    #[arg(long = "amp1", default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp1: f64,
    #[arg(long = "amp2", default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp2: f64,
    #[arg(long = "amp3", default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp3: f64,
    #[arg(long = "amp4", default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp4: f64,
    /// start:stop:step in r.
    #[arg(long, default_value = "-10:10:0.01", allow_hyphen_values = true)]
    pub grid: String,
    /// Chosen from cos s when absent.
    #[arg(long, value_enum)]
    pub regime: Option<RegimeChoice>,
    #[arg(long, value_enum, default_value_t = FormChoice::Derived)]
    pub form: FormChoice,
}

impl PotentialArgs {
    pub fn build(&self) -> Result<PotentialProfile> {
        let d = Deformation::new(self.s)?;
        let grid = Grid::parse_spec(&self.grid)?;
        let b1: F1Branch = self.f1.map(Into::into).unwrap_or_else(|| F1Branch::canonical(&d));
        let b2: F2Branch = self.f2.map(Into::into).unwrap_or_else(|| F2Branch::paired(b1));
        let constants = Constants {
            d1: self.d1,
            d2: self.d2,
            amp: [self.amp1, self.amp2, self.amp3, self.amp4],
        };
        let fns = RealizationFns::new(&d, self.m, b1, b2, constants, grid)?;
        let regime = self.regime.map(Into::into).unwrap_or_else(|| Regime::for_s(&d));
        build_potential_with(&d, self.m, &fns, regime, self.form.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumModel {
    /// The realization potential built from the potential flags.
    Realization,
    /// V = 0 on the grid.
    Box,
    /// V = -lambda (lambda + 1) / cosh^2 r.
    PoschlTeller,
    /// Columns r, V read from --input.
    Csv,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[arg(long, value_enum, default_value_t = SpectrumModel::Realization)]
    pub model: SpectrumModel,
    /// Number of states per cell.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, value_enum)]
    pub f1: Option<F1Choice>,
    #[arg(long, value_enum)]
    pub f2: Option<F2Choice>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp1: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp2: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp3: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp4: f64,
    #[arg(long, default_value = "-10:10:0.01", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, default_value_t = 2.0)]
    pub lambda: f64,
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FlowArgs {
    #[arg(long, default_value_t = 4.0)]
    pub m_max: f64,
    /// Number of s samples spread evenly inside (0, pi).
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    /// start:stop:step, overriding --points.
    #[arg(long)]
    pub s_grid: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub c: f64,
    /// Write the section at this s; without it, sweep s for the transition.
    #[arg(long)]
    pub s: Option<f64>,
    /// start:stop:step in J_z; three periods by default.
    #[arg(long, allow_hyphen_values = true)]
    pub jz_grid: Option<String>,
    /// Number of s samples inside (0, pi) for the sweep.
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileChoice {
    Sech,
    Constant,
    Covariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionChoice {
    Consistent,
    Literal,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HopfArgs {
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = ProfileChoice::Sech)]
    pub profile: ProfileChoice,
    #[arg(long, default_value_t = 0.8)]
    pub f_lo: f64,
    #[arg(long, default_value_t = 1.3)]
    pub f_hi: f64,
    /// b for the constant profile, f0 for the covariant one.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = 9)]
    pub dim: usize,
    /// First label; centred on zero by default.
    #[arg(long, allow_negative_numbers = true)]
    pub m0: Option<f64>,
    #[arg(long, value_enum, default_value_t = ConventionChoice::Consistent)]
    pub convention: ConventionChoice,
    /// Exit with status 3 when coassociativity or counit exceed 1e-10.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Outcome of a subcommand before it is turned into an exit status.
#[derive(Debug)]
pub struct Outcome {
    pub outputs: OutputSet,
    pub verified: bool,
    pub summary: Vec<String>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnitarityViolation { .. } | Error::NoUnitaryTruncation { .. } => EXIT_VERIFY,
        Error::Numerical(_) => EXIT_NUMERIC,
        _ => EXIT_ARGS,
    }
}

/// Insert `--key value` pairs from a key=value config file after the
/// subcommand name, skipping keys the user already passed.
pub fn apply_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let strs: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    for (i, a) in strs.iter().enumerate() {
        if a == "--config" {
            path = strs.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path)?;
    let names = ["classify", "rep", "potential", "spectrum", "flow", "surface", "hopf", "replay"];
    let Some(pos) = strs.iter().skip(1).position(|a| names.contains(&a.as_str())).map(|p| p + 1) else {
        return Ok(args);
    };
    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{path}:{}: expected key=value", n + 1)))?;
        let flag = format!("--{}", k.trim().replace('_', "-"));
        let given = strs.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match v.trim() {
            "true" => extra.push(flag),
            "false" => {}
            v => extra.push(format!("{flag}={v}")),
        }
    }
    let mut out = args;
    for (j, e) in extra.into_iter().enumerate() {
        out.insert(pos + 1 + j, e.into());
    }
    Ok(out)
}

fn resolve_out_dir(flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Parse `argv` (program name first) and run. Returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match apply_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ARGS;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ARGS } else { EXIT_OK };
        }
    };
    let out_dir = resolve_out_dir(cli.out_dir.as_deref());
    let name = cli.name.clone().unwrap_or_else(|| cli.command.name().to_string());
    match execute(&cli.command, &out_dir, &name) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Run one command, write its manifest and return the exit status.
pub fn execute(cmd: &Command, out_dir: &Path, name: &str) -> Result<i32> {
    if let Command::Replay(a) = cmd {
        return replay(&a.manifest, out_dir);
    }
    let outcome = dispatch(cmd, out_dir, name)?;
    let manifest = Manifest {
        tool: "suq2".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cmd.name().into(),
        name: name.into(),
        args: cmd.args_json()?,
        outputs: outcome.outputs.files.clone(),
    };
    let mpath = outcome.outputs.dir.join(format!("{name}.manifest.json"));
    std::fs::write(&mpath, manifest.to_json()?)?;
    for line in &outcome.summary {
        say!("{line}");
    }
    for file in outcome.outputs.files.keys() {
        say!("wrote {}", outcome.outputs.dir.join(file).display());
    }
    say!("wrote {}", mpath.display());
    Ok(if outcome.verified { EXIT_OK } else { EXIT_VERIFY })
}

fn replay(path: &Path, out_dir: &Path) -> Result<i32> {
    let m = Manifest::read(path)?;
    let cmd = Command::from_json(&m.command, m.args.clone())?;
    let outcome = dispatch(&cmd, out_dir, &m.name)?;
    let mut same = true;
    for (file, digest) in &m.outputs {
        match outcome.outputs.files.get(file) {
            Some(d) if d == digest => say!("match {file}"),
            Some(_) => {
                say!("differs {file}");
                same = false;
            }
            None => {
                say!("missing {file}");
                same = false;
            }
        }
    }
    Ok(if same && outcome.outputs.files.len() == m.outputs.len() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

fn dispatch(cmd: &Command, out_dir: &Path, name: &str) -> Result<Outcome> {
    let outputs = OutputSet::new(out_dir)?;
    match cmd {
        Command::Classify(a) => cmd_classify(a, outputs, name),
        Command::Rep(a) => cmd_rep(a, outputs, name),
        Command::Potential(a) => cmd_potential(a, outputs, name),
        Command::Spectrum(a) => cmd_spectrum(a, outputs, name),
        Command::Flow(a) => cmd_flow(a, outputs, name),
        Command::Surface(a) => cmd_surface(a, outputs, name),
        Command::Hopf(a) => cmd_hopf(a, outputs, name),
        Command::Replay(_) => Err(Error::Parse("replay cannot be nested".into())),
    }
}

fn band(th: &repcls::Thresholds, c: f64) -> &'static str {
    if c > th.c0 {
        "above_c0"
    } else if c > th.c1 {
        "c1_to_c0"
    } else if c >= th.c2 {
        "c2_to_c1"
    } else {
        "below_c2"
    }
}

fn join_labels(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(";")
}

fn descriptor_row(th: &repcls::Thresholds, r: &RepDescriptor, window: f64) -> Vec<Cell> {
    let (m0, period, labels) = match &r.m_rule {
        MRule::Unbounded { period } => (f64::NAN, *period, "all_but_forbidden".to_string()),
        MRule::Lattice { m0, period, .. } => (*m0, *period as f64, join_labels(&r.labels_in(-window, window))),
        MRule::Finite(v) => (v[0], f64::NAN, join_labels(v)),
    };
    let opt = |x: Option<i64>| x.map(Cell::Int).unwrap_or_else(|| Cell::Text(String::new()));
    vec![
        r.c.into(),
        band(th, r.c).into(),
        r.class.to_string().into(),
        opt(r.n.map(|n| n as i64)),
        opt(r.k),
        m0.into(),
        period.into(),
        r.strange.into(),
        opt(r.distinct_ladder_values.map(|n| n as i64)),
        labels.into(),
    ]
}

fn cmd_classify(a: &ClassifyArgs, mut out: OutputSet, name: &str) -> Result<Outcome> {
    let d = Deformation::new(a.s)?;
    let cs: Vec<f64> = match (a.c, &a.c_range) {
        (Some(c), None) => vec![c],
        (None, Some(spec)) => Grid::parse_spec(spec)?.points(),
        _ => return Err(Error::Parse("give exactly one of --c and --c-range".into())),
    };
    let th = repcls::thresholds(&d);
    let rows: Vec<Vec<RepDescriptor>> = cs.par_iter().map(|&c| repcls::classify(&d, c)).collect();
    let mut t = Table::new(&[
        "c", "band", "class", "n", "k", "m0", "period", "strange", "distinct_ladder_values", "labels",
    ]);
    let mut count = 0;
    for r in rows.iter().flatten() {
        t.push(descriptor_row(&th, r, a.window));
        count += 1;
    }
    out.write_table(&format!("{name}.csv"), &t)?;
    Ok(Outcome {
        outputs: out,
        verified: true,
        summary: vec![format!(
            "s = {}  c0 = {:.12}  c1 = {:.12}  c2 = {:.12}  rows = {count}",
            a.s, th.c0, th.c1, th.c2
        )],
    })
}

fn parse_basis(spec: &str) -> Result<(i64, i64)> {
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("basis {spec:?} is not lo:hi or finite")))?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{x:?}: {e}")));
    let (lo, hi) = (p(lo)?, p(hi)?);
    if hi < lo {
        return Err(Error::Parse(format!("basis {spec:?} is empty")));
    }
    Ok((((lo * 2.0).round()) as i64, ((hi * 2.0).round()) as i64))
}

fn cmd_rep(a: &RepArgs, mut out: OutputSet, name: &str) -> Result<Outcome> {
    let d = Deformation::new(a.s)?;
    let labels: Vec<f64> = if a.basis == "finite" {
        let descs = repcls::classify(&d, a.c);
        let finite = descs
            .iter()
            .find_map(|r| match &r.m_rule {
                MRule::Finite(v) if v.len() > 1 || r.n == Some(0) => Some(v.clone()),
                _ => None,
            })
            .ok_or_else(|| Error::Domain(format!("no finite representation at c = {}", a.c)))?;
        finite
    } else {
        let (lo2, hi2) = parse_basis(&a.basis)?;
        if (hi2 - lo2) % 2 != 0 {
            return Err(Error::Parse("basis ends must differ by an integer".into()));
        }
        (0..=(hi2 - lo2) / 2).map(|i| lo2 as f64 / 2.0 + i as f64).collect()
    };
    let t = matrep::build_rep(&d, a.c, &labels)?;
    let report = matrep::verify_algebra(&t, &d, a.c);
    let worst = report.max_defining_residual();
    if !worst.is_finite() {
        return Err(Error::Numerical("non-finite residual".into()));
    }
    #[derive(Serialize)]
    struct RepJson {
        jz: matrep::MatrixJson,
        jp: matrep::MatrixJson,
        jm: matrep::MatrixJson,
        report: matrep::AlgebraReport,
    }
    out.write_json(
        &format!("{name}.json"),
        &RepJson { jz: t.jz.to_json(), jp: t.jp.to_json(), jm: t.jm.to_json(), report },
    )?;
    let mut tab = Table::new(&["check", "value"]);
    let v = serde_json::to_value(report)?;
    if let serde_json::Value::Object(map) = v {
        for (k, val) in map {
            let cell = match val {
                serde_json::Value::Number(n) => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
                serde_json::Value::Bool(b) => b.into(),
                other => Cell::Text(other.to_string()),
            };
            tab.push(vec![k.into(), cell]);
        }
    }
    out.write_table(&format!("{name}.csv"), &tab)?;
    let verified = !a.verify || worst <= a.tol;
    Ok(Outcome {
        outputs: out,
        verified,
        summary: vec![format!(
            "dim = {}  truncated = {}  max defining residual = {worst:.3e}",
            labels.len(),
            report.truncated
        )],
    })
}

fn potential_table(p: &PotentialProfile) -> Table {
    let mut t = Table::new(&["r", "V", "masked"]);
    for i in 0..p.grid.count {
        t.push(vec![p.grid.at(i).into(), p.values[i].into(), p.mask[i].into()]);
    }
    t
}

fn nan_on_unmasked(p: &PotentialProfile) -> bool {
    p.unmasked().any(|i| !p.values[i].is_finite())
}

fn cmd_potential(a: &PotentialArgs, mut out: OutputSet, name: &str) -> Result<Outcome> {
    let p = a.build()?;
    if nan_on_unmasked(&p) {
        return Err(Error::Numerical("potential is not finite on unmasked samples".into()));
    }
    let t = potential_table(&p);
    out.write_table(&format!("{name}.csv"), &t)?;
    out.write_json(&format!("{name}.params.json"), &p.params)?;
    let masked = p.mask.iter().filter(|&&m| m).count();
    Ok(Outcome {
        outputs: out,
        verified: true,
        summary: vec![format!(
            "branches {}/{}  samples = {}  masked = {masked}",
            p.params.f1_branch.name(),
            p.params.f2_branch.name(),
            p.grid.count
        )],
    })
}

fn read_potential_csv(path: &Path) -> Result<(Vec<f64>, Grid)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let ri = header.iter().position(|h| *h == "r").ok_or_else(|| Error::Parse("no r column".into()))?;
    let vi = header.iter().position(|h| *h == "V").ok_or_else(|| Error::Parse("no V column".into()))?;
    let mut r = Vec::new();
    let mut v = Vec::new();
    for (n, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        let get = |i: usize| -> Result<f64> {
            cols.get(i)
                .ok_or_else(|| Error::Parse(format!("line {}: missing column", n + 2)))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 2)))
        };
        r.push(get(ri)?);
        v.push(get(vi)?);
    }
    if r.len() < 2 {
        return Err(Error::InsufficientGrid("fewer than two rows".into()));
    }
    let step = (r[r.len() - 1] - r[0]) / (r.len() - 1) as f64;
    Ok((v, Grid::new(r[0], step, r.len())?))
}

fn cmd_spectrum(a: &SpectrumArgs, mut out: OutputSet, name: &str) -> Result<Outcome> {
    let (values, results): (Vec<f64>, Vec<EigenResult>) = match a.model {
        SpectrumModel::Realization => {
            let pa = PotentialArgs {
                s: a.s.ok_or_else(|| Error::Parse("--s is required for the realization model".into()))?,
                m: a.m.ok_or_else(|| Error::Parse("--m is required for the realization model".into()))?,
                f1: a.f1,
                f2: a.f2,
                d1: 0.0,
                d2: 0.0,
                amp1: a.amp1,
                amp2: a.amp2,
                amp3: a.amp3,
                amp4: a.amp4,
                grid: a.grid.clone(),
                regime: None,
                form: FormChoice::Derived,
            };
            let p = pa.build()?;
            let res = eigensolve_cells(&p, a.n)?;
            (p.values, res)
        }
        SpectrumModel::Box | SpectrumModel::PoschlTeller => {
            let g = Grid::parse_spec(&a.grid)?;
            let lam = a.lambda;
            let v: Vec<f64> = match a.model {
                SpectrumModel::Box => vec![0.0; g.count],
                _ => g.points().iter().map(|r| -lam * (lam + 1.0) / r.cosh().powi(2)).collect(),
            };
            let res = eigensolve_values(&v, g, a.n)?;
            (v, vec![res])
        }
        SpectrumModel::Csv => {
            let path = a.input.as_ref().ok_or_else(|| Error::Parse("--input is required for csv".into()))?;
            let (v, g) = read_potential_csv(path)?;
            let res = eigensolve_values(&v, g, a.n)?;
            (v, vec![res])
        }
    };
    let mut levels = Table::new(&["cell", "r_start", "r_stop", "k", "eigenvalue", "self_residual"]);
    let mut vectors_header = vec!["cell".to_string(), "r".to_string()];
    vectors_header.extend((0..a.n).map(|k| format!("psi_{k}")));
    let mut vectors = Table { header: vectors_header, rows: Vec::new() };
    for (cell, res) in results.iter().enumerate() {
        for (k, e) in res.eigenvalues.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::Numerical(format!("eigenvalue {k} of cell {cell} is not finite")));
            }
            levels.push(vec![
                cell.into(),
                res.grid.start.into(),
                res.grid.stop().into(),
                k.into(),
                (*e).into(),
                self_residual(&values, res, k).into(),
            ]);
        }
        for i in 0..res.grid.count {
            let mut row: Vec<Cell> = vec![cell.into(), res.grid.at(i).into()];
            row.extend(res.eigenvectors.iter().map(|v| Cell::Num(v[i])));
            vectors.push(row);
        }
    }
    out.write_table(&format!("{name}.csv"), &levels)?;
    out.write_table(&format!("{name}_vectors.csv"), &vectors)?;
    Ok(Outcome {
        outputs: out,
        verified: true,
        summary: vec![format!("cells = {}  states per cell = {}", results.len(), a.n)],
    })
}

fn open_interval_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|i| std::f64::consts::PI * i as f64 / (points + 1) as f64).collect()
}

fn cmd_flow(a: &FlowArgs, mut out: OutputSet, name: &str) -> Result<Outcome> {
    let s_grid = match &a.s_grid {
        Some(spec) => Grid::parse_spec(spec)?.points(),
        None => open_interval_grid(a.points),
    };
    let f = geometry::spectral_flow(a.m_max, &s_grid)?;
    let mut t = Table::new(&["s", "m", "value"]);
    for (j, m) in f.m.iter().enumerate() {
        for (i, s) in f.s.iter().enumerate() {
            t.push(vec![(*s).into(), (*m).into(), f.curves[j][i].into()]);
        }
    }
    out.write_table(&format!("{name}.csv"), &t)?;
    let mut c = Table::new(&["s", "m1", "m2", "kind", "gap"]);
    for x in &f.crossings {
        let kind = match x.kind {
            geometry::CrossingKind::SignChange => "sign_change",
            geometry::CrossingKind::Touch => "touch",
        };
        c.push(vec![x.s.into(), x.m1.into(), x.m2.into(), kind.into(), 0.0.into()]);
    }
    for x in &f.near_crossings {
        c.push(vec![x.s.into(), x.m1.into(), x.m2.into(), "near".into(), x.gap.into()]);
    }
    out.write_table(&format!("{name}_crossings.csv"), &c)?;
    Ok(Outcome {
        outputs: out,
        verified: true,
        summary: vec![format!(
            "curves = {}  crossings = {}  max |[2m]| sin s = {:.15}",
            f.curves.len(),
            f.crossings.len(),
            f.bound_ratio()
        )],
    })
}

fn cmd_surface(a: &SurfaceArgs, mut out: OutputSet, name: &str) -> Result<Outcome> {
    match a.s {
        Some(s) => {
            let d = Deformation::new(s)?;
            let grid = match &a.jz_grid {
                Some(spec) => Grid::parse_spec(spec)?,
                None => geometry::default_window(&d, 3000)?,
            };
            let sec = geometry::level_section(&d, a.c, grid)?;
            let mut t = Table::new(&["jz", "jx_plus", "jx_minus", "mask"]);
            for (i, jx) in sec.jx.iter().enumerate() {
                let (p, m) = jx.map(|x| (x, -x)).unwrap_or((f64::NAN, f64::NAN));
                t.push(vec![grid.at(i).into(), p.into(), m.into(), jx.is_none().into()]);
            }
            out.write_table(&format!("{name}.csv"), &t)?;
            Ok(Outcome {
                outputs: out,
                verified: true,
                summary: vec![format!("{:?} with {} components", sec.connectivity, sec.components)],
            })
        }
        None => {
            let s_grid = open_interval_grid(a.points);
            let tr = geometry::topology_transition(a.c, &s_grid)?;
            let mut t = Table::new(&["s", "connected"]);
            for (s, class) in &tr.classes {
                t.push(vec![(*s).into(), (*class == geometry::Connectivity::Connected).into()]);
            }
            out.write_table(&format!("{name}.csv"), &t)?;
            let line = match tr.s_star {
                Some(x) => format!(
                    "transition s* = {x:.6} (closed form {:.6})",
                    geometry::transition_closed_form(a.c)
                ),
                None => "no transition".into(),
            };
            Ok(Outcome { outputs: out, verified: true, summary: vec![line] })
        }
    }
}

fn cmd_hopf(a: &HopfArgs, mut out: OutputSet, name: &str) -> Result<Outcome> {
    let profile = match a.profile {
        ProfileChoice::Sech => Profile::Sech { f_lo: a.f_lo, f_hi: a.f_hi },
        ProfileChoice::Constant => Profile::Constant { b: a.b },
        ProfileChoice::Covariant => Profile::Covariant { f0: a.b },
    };
    let gd = GenDeformation::new(a.alpha, profile)?;
    let conv = match a.convention {
        ConventionChoice::Consistent => WindowConvention::Consistent,
        ConventionChoice::Literal => WindowConvention::Literal,
    };
    let m0 = a.m0.unwrap_or(-((a.dim as f64 - 1.0) / 2.0).floor());
    let rep = hopfgen::build_gen_rep(&gd, m0, a.dim, a.c)?;
    let report = hopfgen::hopf_axiom_report(&gd, &rep);
    let c_min = hopfgen::c_min(&gd, conv);
    let mut t = Table::new(&["check", "value", "asserted"]);
    let rows: [(&str, f64, bool); 8] = [
        ("coassociativity", report.coassociativity, true),
        ("counit", report.counit, true),
        ("antipode_sqrt_f", report.antipode_sqrt_f, false),
        ("antipode_f", report.antipode_f, false),
        ("homomorphism", report.homomorphism, false),
        ("eq_covariance", report.eq_covariance, false),
        ("commutator", report.commutator, false),
        ("casimir_spread", report.casimir_spread, false),
    ];
    for (k, v, asserted) in rows {
        t.push(vec![k.into(), v.into(), asserted.into()]);
    }
    t.push(vec!["q1".into(), gd.q1.into(), false.into()]);
    t.push(vec!["c_min".into(), c_min.into(), false.into()]);
    if let Ok(w) = hopfgen::unitarity_window_with(a.c, &gd, conv) {
        for (k, v) in [("big_l1", w.big_l1), ("big_l2", w.big_l2), ("l1", w.l1), ("l2", w.l2)] {
            t.push(vec![k.into(), v.into(), false.into()]);
        }
    }
    out.write_table(&format!("{name}.csv"), &t)?;
    let ok = report.coassociativity < 1e-10 && report.counit < 1e-10;
    Ok(Outcome {
        outputs: out,
        verified: !a.verify || ok,
        summary: vec![format!(
            "coassociativity = {:.3e}  counit = {:.3e}  antipode (g = sqrt f) = {:.3e}",
            report.coassociativity, report.counit, report.antipode_sqrt_f
        )],
    })
}
