//! One function per subcommand: read inputs, run the library, and return
//! the report and plot data.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use horolab::auxiliary::{construct_small_section, height_profile, GermSource, ProblemTemplate, TargetRule, VanishingProblem};
use horolab::connection::{local_solution_basis, DerivationField, DifferentialSystem};
use horolab::exact::rational::{factorial, format_rational, parse_rational};
use horolab::exact::{Rational, TruncatedSeries};
use horolab::independence::{integer_relation_search, subspace_dimension_estimate, RealValue, RelationQuery};
use horolab::isomono::{
    corrected_basis, corrected_family, displayed_basis, displayed_family, run_family, FamilyDocument, FamilyParameters,
    FamilyRun, SymMatrix,
};
use horolab::lg::{certify_lg, check_e_section, coefficient_growth_order, slope_sum_profile, E_SECTION_TOLERANCE};
use horolab::nevanlinna::{log_grid, nevanlinna_suite, AnalyticMap, ExhaustionFunction, LevelConvention};
use horolab::zero_lemma::{nonvanishing_wedge_indices, zero_lemma_check};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::manifest::{Artifacts, CsvTable, RunManifest};
use crate::Output;

/// Conjugacy residual below which the isomonodromy runs report `PASS`.
const CONJUGACY_TOLERANCE: f64 = 1e-6;

#[derive(Debug)]
pub enum CliError {
    Core(horolab::Error),
    Input(String),
}

impl CliError {
    /// Machine-readable error kind: the library variant name, or `input`.
    pub fn kind(&self) -> String {
        match self {
            CliError::Core(e) => {
                let dbg = format!("{e:?}");
                dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
            }
            CliError::Input(_) => "input".to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) => write!(f, "{m}"),
        }
    }
}

impl From<horolab::Error> for CliError {
    fn from(e: horolab::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Copies every field of the argument struct into the manifest.
fn echo<T: Serialize>(manifest: &mut RunManifest, args: &T) {
    if let Value::Object(map) = to_value(args) {
        for (k, v) in map {
            manifest.param(&k, v);
        }
    }
}

fn read_system(path: &Path, manifest: &mut RunManifest) -> CliResult<DifferentialSystem> {
    manifest.input(path);
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(DifferentialSystem::from_json_str(&text)?)
}

fn rational(text: &str) -> CliResult<Rational> {
    Ok(parse_rational(text.trim())?)
}

/// `"0,1,1/2"`.
fn rational_list(text: &str) -> CliResult<Vec<Rational>> {
    text.split(',').map(rational).collect()
}

/// One vector per point, separated by `;`: `"1,1;1,0"`. Defaults to the
/// all-ones vector at every point.
fn initial_vectors(text: Option<&str>, points: usize, m: usize) -> CliResult<Vec<Vec<Rational>>> {
    let Some(t) = text else {
        return Ok(vec![vec![Rational::from_integer(1.into()); m]; points]);
    };
    let v: Vec<Vec<Rational>> = t.split(';').map(rational_list).collect::<CliResult<_>>()?;
    if v.len() != points || v.iter().any(|r| r.len() != m) {
        return Err(input(format!("--initial needs {points} vector(s) of length {m}")));
    }
    Ok(v)
}

/// `"a:b"` as the inclusive range `a..=b`.
fn degree_range(text: &str) -> CliResult<Vec<usize>> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| input(format!("expected lo:hi, got {text:?}")))?;
    let p = |s: &str| s.trim().parse::<usize>().map_err(|_| input(format!("bad degree {s:?}")));
    let (a, b) = (p(a)?, p(b)?);
    if a > b {
        return Err(input(format!("empty degree range {text}")));
    }
    Ok((a..=b).collect())
}

/// `"min:max:steps"` as log-spaced radii.
fn radius_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || input(format!("expected min:max:steps, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(bad());
    }
    Ok(log_grid(lo, hi, n))
}

fn degrees(degree: Option<usize>, range: Option<&str>) -> CliResult<Vec<usize>> {
    match (degree, range) {
        (Some(x), None) => Ok(vec![x]),
        (None, Some(r)) => degree_range(r),
        _ => Err(input("give exactly one of --degree and --degrees")),
    }
}

#[derive(Args, Serialize)]
pub struct SolveArgs {
    /// System JSON: `{"rank": m, "matrix": [[expr]]}`.
    #[arg(long)]
    pub system: PathBuf,
    /// Base point.
    #[arg(long, default_value = "0")]
    pub points: String,
    /// Truncation order `T`.
    #[arg(long, default_value_t = 10)]
    pub truncation: usize,
    /// Initial vector; without it the full local basis is returned.
    #[arg(long)]
    pub initial: Option<String>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

pub fn solve(a: &SolveArgs, manifest: &mut RunManifest) -> CliResult<Artifacts> {
    echo(manifest, a);
    let sys = read_system(&a.system, manifest)?;
    let base = rational(&a.points)?;
    let basis: Vec<Vec<TruncatedSeries>> = match &a.initial {
        Some(_) => vec![sys.solve_series(&base, &initial_vectors(a.initial.as_deref(), 1, sys.rank())?[0], a.truncation)?],
        None => local_solution_basis(&sys, &base, a.truncation)?,
    };
    let mut csv = CsvTable::new(&["solution", "component", "k", "coefficient"]);
    for (i, sol) in basis.iter().enumerate() {
        for (j, comp) in sol.iter().enumerate() {
            for (k, c) in comp.coeffs().iter().enumerate() {
                csv.push(vec![i.to_string(), j.to_string(), k.to_string(), format_rational(c)]);
            }
        }
    }
    Ok(Artifacts {
        report: json!({
            "system": to_value(&sys.to_document()),
            "base_point": format_rational(&base),
            "truncation": a.truncation,
            "solutions": to_value(&basis),
        }),
        csv: Some(csv),
    })
}

/// Coefficient sequences that need no system.
#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinGerm {
    /// `sum z^j / j!`.
    Exp,
    /// `sum z^(2j) / j!`.
    ExpZ2,
    /// `sum z^j / (j!)^2`.
    InvFactorialSq,
}

impl BuiltinGerm {
    fn series(self, order: usize) -> TruncatedSeries {
        let zero = Rational::from_integer(0.into());
        TruncatedSeries::from_fn(zero.clone(), order, |j| match self {
            BuiltinGerm::Exp => Rational::new(1.into(), factorial(j as u64)),
            BuiltinGerm::ExpZ2 if j % 2 == 0 => Rational::new(1.into(), factorial(j as u64 / 2)),
            BuiltinGerm::ExpZ2 => zero.clone(),
            BuiltinGerm::InvFactorialSq => Rational::new(1.into(), factorial(j as u64).pow(2)),
        })
    }
}

#[derive(Args, Serialize)]
pub struct CertifyArgs {
    /// Germs from a system's solution at `--points`.
    #[arg(long, conflicts_with = "germ")]
    pub system: Option<PathBuf>,
    /// A built-in germ instead of a system.
    #[arg(long, value_enum)]
    pub germ: Option<BuiltinGerm>,
    #[arg(long, default_value = "0")]
    pub points: String,
    #[arg(long)]
    pub initial: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub truncation: usize,
    /// Type `alpha` of the bound `|a_i|_p <= C_p^i / |i!|_p^alpha`.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// Number of points `s` of the section for the growth balance.
    #[arg(long, default_value_t = 1)]
    pub sheets: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

pub fn certify(a: &CertifyArgs, manifest: &mut RunManifest) -> CliResult<Artifacts> {
    echo(manifest, a);
    let germs = match (&a.system, a.germ) {
        (Some(path), None) => {
            let sys = read_system(path, manifest)?;
            let init = initial_vectors(a.initial.as_deref(), 1, sys.rank())?;
            sys.solve_series(&rational(&a.points)?, &init[0], a.truncation)?
        }
        (None, Some(g)) => vec![g.series(a.truncation)],
        _ => return Err(input("give exactly one of --system and --germ")),
    };
    let alpha = rational(&a.alpha)?;
    let cert = certify_lg(&germs, &alpha)?;
    let t = a.truncation;
    let mut orders = vec![t / 4, t / 2, t];
    orders.retain(|&o| o >= 2);
    orders.dedup();
    let profile = slope_sum_profile(&germs, &alpha, &orders)?;
    // The order of a tuple is the largest order among its entire components.
    let growth = germs
        .iter()
        .filter_map(|g| coefficient_growth_order(g).ok())
        .max_by(|x, y| x.rho.total_cmp(&y.rho));
    let balance = growth.as_ref().map(|g| check_e_section(&cert, g, a.sheets, E_SECTION_TOLERANCE));
    let mut csv = CsvTable::new(&["truncation", "slope_sum"]);
    for (o, s) in &profile {
        csv.push(vec![o.to_string(), s.to_string()]);
    }
    Ok(Artifacts {
        report: json!({
            "certificate": to_value(&cert),
            "slope_profile": profile.iter().map(|(o, s)| json!({"truncation": o, "slope_sum": s})).collect::<Vec<_>>(),
            "growth": to_value(&growth),
            "e_section": to_value(&balance),
        }),
        csv: Some(csv),
    })
}

#[derive(Args, Serialize)]
pub struct ConstructArgs {
    #[arg(long)]
    pub system: PathBuf,
    /// Degree bound `x` of the section.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Height profile over `lo:hi` instead of a single degree.
    #[arg(long, conflicts_with = "degree")]
    pub degrees: Option<String>,
    /// Comma-separated points.
    #[arg(long, default_value = "0")]
    pub points: String,
    /// Vanishing order required at each point; defaults to the largest one
    /// that still leaves a non-zero solution.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub initial: Option<String>,
    /// Germ truncation; defaults to `order + degree + 2`.
    #[arg(long)]
    pub truncation: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

pub fn construct(a: &ConstructArgs, manifest: &mut RunManifest) -> CliResult<Artifacts> {
    echo(manifest, a);
    let sys = read_system(&a.system, manifest)?;
    let points = rational_list(&a.points)?;
    let initial = initial_vectors(a.initial.as_deref(), points.len(), sys.rank())?;
    let xs = degrees(a.degree, a.degrees.as_deref())?;
    if xs.len() == 1 {
        let x = xs[0];
        let nu = a.order.unwrap_or_else(|| TargetRule::Maximal.target(sys.rank(), x, points.len()));
        let order = a.truncation.unwrap_or(nu + x + 2);
        let germs = points
            .iter()
            .zip(&initial)
            .map(|(p, y0)| sys.solve_series(p, y0, order))
            .collect::<horolab::Result<Vec<_>>>()?;
        let prob = VanishingProblem { points: points.clone(), germs, degree: x, target_orders: vec![nu; points.len()] };
        let c = construct_small_section(&prob)?;
        let mut csv = CsvTable::new(&["component", "k", "coefficient"]);
        for (j, comp) in c.section.components().iter().enumerate() {
            for (k, v) in comp.coeffs().iter().enumerate() {
                csv.push(vec![j.to_string(), k.to_string(), format_rational(v)]);
            }
        }
        return Ok(Artifacts {
            report: json!({
                "degree": x,
                "points": points.iter().map(format_rational).collect::<Vec<_>>(),
                "unknowns": prob.unknowns(),
                "constraints": prob.constraints(),
                "germ_truncation": order,
                "construction": to_value(&c),
            }),
            csv: Some(csv),
        });
    }
    if a.order.is_some() || a.truncation.is_some() {
        return Err(input("--order and --truncation apply to a single --degree only"));
    }
    let template = ProblemTemplate {
        points,
        source: GermSource::System { system: sys, initial },
        rule: TargetRule::Maximal,
    };
    let prof = height_profile(&template, &xs)?;
    let mut csv = CsvTable::new(&["x", "log_height", "achieved_order", "target_order", "kernel_dimension"]);
    for r in &prof.rows {
        csv.push(vec![
            r.x.to_string(),
            r.log_height.to_string(),
            r.achieved_order.to_string(),
            r.target_order.to_string(),
            r.kernel_dimension.to_string(),
        ]);
    }
    Ok(Artifacts { report: json!({ "height_profile": to_value(&prof) }), csv: Some(csv) })
}

#[derive(Args, Serialize)]
pub struct ZeroLemmaArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, conflicts_with = "degree")]
    pub degrees: Option<String>,
    /// The point where the constructed section vanishes.
    #[arg(long, default_value = "0")]
    pub points: String,
    #[arg(long)]
    pub initial: Option<String>,
    /// Point at which a non-vanishing wedge of the tower is sought.
    #[arg(long, default_value = "1")]
    pub wedge_at: String,
    /// Largest tower index for the wedge; defaults to `m + x + 2`.
    #[arg(long)]
    pub bound: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

pub fn zero_lemma(a: &ZeroLemmaArgs, manifest: &mut RunManifest) -> CliResult<Artifacts> {
    echo(manifest, a);
    let sys = read_system(&a.system, manifest)?;
    let q = rational(&a.points)?;
    let wedge_at = rational(&a.wedge_at)?;
    let initial = initial_vectors(a.initial.as_deref(), 1, sys.rank())?;
    let der = DerivationField::for_system(&sys);
    let template = ProblemTemplate {
        points: vec![q.clone()],
        source: GermSource::System { system: sys.clone(), initial },
        rule: TargetRule::Maximal,
    };
    let m = sys.rank();
    let mut rows = Vec::new();
    let mut csv = CsvTable::new(&["x", "rank", "ord", "measured_c", "ord_drop_holds", "wedge_indices"]);
    for x in degrees(a.degree, a.degrees.as_deref())? {
        let prob = template.instantiate(x)?;
        let c = construct_small_section(&prob)?;
        let rep = zero_lemma_check(&c.section, &sys, &der, &q, &prob.germs[0], x)?;
        let bound = a.bound.unwrap_or(m + x + 2);
        let wedge = nonvanishing_wedge_indices(&c.section, &sys, &der, &wedge_at, bound);
        let indices = match &wedge {
            Ok(w) => w.indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
            Err(_) => String::new(),
        };
        csv.push(vec![
            x.to_string(),
            rep.rank.to_string(),
            rep.ord_q.to_string(),
            rep.measured_c.to_string(),
            rep.ord_drop_holds.to_string(),
            indices,
        ]);
        rows.push(json!({
            "section": to_value(&c.section),
            "tower": to_value(&rep),
            "wedge_bound": bound,
            "wedge": match wedge {
                Ok(w) => to_value(&w),
                Err(e) => json!({ "error": e.to_string() }),
            },
        }));
    }
    Ok(Artifacts {
        report: json!({ "wedge_at": format_rational(&wedge_at), "rows": rows }),
        csv: Some(csv),
    })
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Level `2 log r`: `B(r)` is the disc of radius `r` for one pole.
    Calibrated,
    /// Level `log r`.
    Raw,
}

#[derive(Args, Serialize)]
pub struct GrowthArgs {
    /// `z`, `exp`, `exp2`, `exp(c*z^k)` or a real constant.
    #[arg(long, default_value = "exp")]
    pub map: String,
    /// Target value `a` of the proximity and counting functions.
    #[arg(long, default_value_t = 1.0)]
    pub target: f64,
    /// Radii as `min:max:steps`, log-spaced.
    #[arg(long, conflicts_with = "rmax")]
    pub rgrid: Option<String>,
    /// Shorthand for `--rgrid 1:rmax:25`.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Samples per level curve.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "calibrated")]
    pub convention: Convention,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

fn analytic_map(text: &str) -> CliResult<AnalyticMap> {
    Ok(match text.trim() {
        "exp" => AnalyticMap::exp_z(),
        "exp2" => AnalyticMap::exp_z2(),
        other => AnalyticMap::parse(other)?,
    })
}

pub fn growth(a: &GrowthArgs, manifest: &mut RunManifest) -> CliResult<Artifacts> {
    echo(manifest, a);
    let f = analytic_map(&a.map)?;
    let grid = match (&a.rgrid, a.rmax) {
        (Some(g), _) => radius_grid(g)?,
        (None, Some(r)) => radius_grid(&format!("1:{r}:25"))?,
        (None, None) => radius_grid("1:100:25")?,
    };
    let convention = match a.convention {
        Convention::Calibrated => LevelConvention::Calibrated,
        Convention::Raw => LevelConvention::Raw,
    };
    let exh = ExhaustionFunction::at_infinity(Complex64::new(0.0, 0.0));
    let rep = nevanlinna_suite(&f, Complex64::new(a.target, 0.0), &exh, &grid, a.samples, convention, None)?;
    let mut csv = CsvTable::new(&["r", "T", "N", "m", "residual", "mass"]);
    for r in &rep.rows {
        csv.push(
            [r.r, r.characteristic, r.counting, r.proximity, r.fmt_residual, r.mass]
                .iter()
                .map(|v| v.to_string())
                .collect(),
        );
    }
    Ok(Artifacts {
        report: json!({
            "map": a.map,
            "residual_spread": rep.residual_spread(),
            "suite": to_value(&rep),
        }),
        csv: Some(csv),
    })
}

#[derive(Args, Serialize)]
pub struct IndependenceArgs {
    /// Comma-separated constants: `e`, `pi`, `exp(q)`, `log(q)`, `sqrt(q)`,
    /// rationals or decimals.
    #[arg(long)]
    pub values: String,
    /// Total degree of the monomials searched.
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    /// Largest absolute coefficient of a relation.
    #[arg(long, default_value_t = 100)]
    pub height: u64,
    /// Working precision in decimal digits.
    #[arg(long, default_value_t = 100)]
    pub precision: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

/// Splits on commas outside parentheses.
fn split_values(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

pub fn independence(a: &IndependenceArgs, manifest: &mut RunManifest) -> CliResult<Artifacts> {
    echo(manifest, a);
    let values: Vec<RealValue> = split_values(&a.values)
        .into_iter()
        .map(RealValue::parse)
        .collect::<horolab::Result<_>>()?;
    let query = RelationQuery { values: values.clone(), degree: a.degree, height_bound: a.height, precision: a.precision };
    let search = integer_relation_search(&query)?;
    let dim = subspace_dimension_estimate(&values, a.degree, a.height, a.precision)?;
    Ok(Artifacts {
        report: json!({ "search": to_value(&search), "dimension": to_value(&dim) }),
        csv: None,
    })
}

#[derive(Args, Serialize, Clone)]
pub struct FamilyValues {
    #[arg(long, default_value = "1/2")]
    pub a: String,
    #[arg(long, default_value = "1/3")]
    pub b: String,
    #[arg(long, default_value = "1")]
    pub c: String,
    /// First family member.
    #[arg(long, default_value = "1")]
    pub x0: String,
    /// Second family member.
    #[arg(long, default_value = "2")]
    pub x1: String,
    /// Working precision of the monodromy integration, decimal digits.
    #[arg(long, default_value_t = 30)]
    pub precision: usize,
}

impl FamilyValues {
    fn parameters(&self) -> CliResult<FamilyParameters> {
        Ok(FamilyParameters { a: rational(&self.a)?, b: rational(&self.b)?, c: rational(&self.c)? })
    }
}

#[derive(Args, Serialize)]
pub struct IsomonoArgs {
    /// Family JSON: name, params, reading, dz_part, dx_part.
    #[arg(long)]
    pub family: PathBuf,
    /// JSON list of matrices to test against the deformation equation.
    #[arg(long)]
    pub basis: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub values: FamilyValues,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run_summary(run: &FamilyRun) -> Value {
    let conj = run.conjugacy.conjugate && run.conjugacy.residual <= CONJUGACY_TOLERANCE;
    json!({
        "integrability": verdict(run.integrability.integrable),
        "basis": verdict(run.basis_checks.iter().all(|&b| b)),
        "conjugacy": verdict(conj),
        "conjugacy_residual": run.conjugacy.residual,
        "run": to_value(run),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, manifest: &mut RunManifest) -> CliResult<T> {
    manifest.input(path);
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn isomono(a: &IsomonoArgs, manifest: &mut RunManifest) -> CliResult<Artifacts> {
    echo(manifest, a);
    let doc: FamilyDocument = read_json(&a.family, manifest)?;
    let family = doc.build()?;
    let basis = match &a.basis {
        Some(p) => {
            let raw: Vec<Vec<Vec<String>>> = read_json(p, manifest)?;
            let params: Vec<&str> = doc.params.iter().map(String::as_str).collect();
            raw.iter().map(|m| SymMatrix::parse(m, &params)).collect::<horolab::Result<Vec<_>>>()?
        }
        None => Vec::new(),
    };
    let v = &a.values;
    let run = run_family(&family, &basis, &v.parameters()?, &rational(&v.x0)?, &rational(&v.x1)?, v.precision)?;
    Ok(Artifacts { report: run_summary(&run), csv: None })
}

#[derive(Args, Serialize)]
pub struct ExampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub values: FamilyValues,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

pub fn example(a: &ExampleArgs, manifest: &mut RunManifest) -> CliResult<Artifacts> {
    echo(manifest, a);
    let v = &a.values;
    let (p, x0, x1) = (v.parameters()?, rational(&v.x0)?, rational(&v.x1)?);
    let printed = run_family(&displayed_family(), &displayed_basis(), &p, &x0, &x1, v.precision)?;
    let corrected = run_family(&corrected_family(), &corrected_basis(), &p, &x0, &x1, v.precision)?;
    Ok(Artifacts {
        report: json!({
            "as_printed": run_summary(&printed),
            "corrected": run_summary(&corrected),
        }),
        csv: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists_respect_parentheses() {
        assert_eq!(split_values("e,exp(2),log(3/2)"), ["e", "exp(2)", "log(3/2)"]);
    }

    #[test]
    fn grids_and_ranges() {
        let g = radius_grid("1:100:3").unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert!(radius_grid("10:1:5").is_err());
        assert!(radius_grid("1:10").is_err());
        assert_eq!(degree_range("2:4").unwrap(), [2, 3, 4]);
        assert!(degree_range("4:2").is_err());
        assert!(degrees(Some(2), Some("2:3")).is_err());
    }

    #[test]
    fn initial_vector_shapes() {
        let v = initial_vectors(Some("1,0;1/2,1"), 2, 2).unwrap();
        assert_eq!(v[1][0], Rational::new(1.into(), 2.into()));
        assert!(initial_vectors(Some("1,0"), 2, 2).is_err());
        assert_eq!(initial_vectors(None, 1, 3).unwrap(), vec![vec![Rational::from_integer(1.into()); 3]]);
    }

    #[test]
    fn error_kinds() {
        assert_eq!(CliError::Core(horolab::Error::NoData).kind(), "NoData");
        assert_eq!(CliError::Core(horolab::Error::BoundTooSmall(3)).kind(), "BoundTooSmall");
        assert_eq!(input("x").kind(), "input");
    }
}
