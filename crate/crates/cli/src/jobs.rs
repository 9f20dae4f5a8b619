//! Job schema and dispatch.
//!
//! Every command reads its own params struct. Schema errors carry a JSON
//! path such as `params.F[0]`; errors raised by the decision procedures are
//! reported with their message and no path.

use std::fmt;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use sigmatorus::arith::gcd_u64;
use sigmatorus::babbitt::{babbitt_finite, babbitt_quadratic_function_field, MonomialMap};
use sigmatorus::difference::{classify, is_modular};
use sigmatorus::field::{Field, Rationals};
use sigmatorus::hahn::artin_schreier::artin_schreier_reduce_to;
use sigmatorus::hahn::json::{exponent_from, exponent_json, series_from, series_json, FieldSpec, GroupSpec, JsonField, Rat, TermsSpec};
use sigmatorus::hahn::{newton_lift_traced, sigma_action, ExponentGroup, HahnSeries, Outcome};
use sigmatorus::obstruction::{obstruct, DatumSpec, Verdict};
use sigmatorus::recurrence::{eigenvalue_power_of_p, find_recurrent_direction, Budget, Recurrence};
use sigmatorus::torsion::{endo_from_diffmatrix, phi_map, report};
use sigmatorus::{DiffMatrix, IntLaurent, RatMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Modular,
    Torsion,
    Recurrence,
    HahnEval,
    AsReduce,
    Obstruct,
    Babbitt,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        f.write_str(&name)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Decided,
    Inconclusive,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub enum JobError {
    /// Malformed input; `path` points at the offending field when known.
    Schema { path: Option<String>, message: String },
    /// The input parsed but the procedure rejected it.
    Domain(sigmatorus::Error),
    /// A bug: the job panicked.
    Internal(String),
}

impl JobError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        JobError::Schema { path: Some(path.into()), message: message.into() }
    }

    pub fn to_json(&self) -> Value {
        match self {
            JobError::Schema { path, message } => {
                let mut m = Map::new();
                m.insert("kind".into(), "schema".into());
                m.insert("message".into(), message.clone().into());
                if let Some(p) = path {
                    m.insert("path".into(), p.clone().into());
                }
                Value::Object(m)
            }
            JobError::Domain(e) => json!({ "kind": "domain", "message": e.to_string() }),
            JobError::Internal(m) => json!({ "kind": "internal", "message": m }),
        }
    }
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JobError::Schema { path: Some(p), message } => write!(f, "{p}: {message}"),
            JobError::Schema { path: None, message } => f.write_str(message),
            JobError::Domain(e) => write!(f, "{e}"),
            JobError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<sigmatorus::Error> for JobError {
    fn from(e: sigmatorus::Error) -> Self {
        JobError::Domain(e)
    }
}

type JobResult<T> = Result<T, JobError>;

/// Run-wide settings that are not part of a job's params.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub seed: u64,
    pub budget_scale: f64,
}

pub struct JobOutput {
    pub status: Status,
    pub report: Value,
}

fn join_path(prefix: &str, path: &serde_path_to_error::Path) -> String {
    let p = path.to_string();
    if p == "." {
        prefix.to_string()
    } else if p.starts_with('[') {
        format!("{prefix}{p}")
    } else {
        format!("{prefix}.{p}")
    }
}

/// Deserializes `v`, reporting failures relative to `prefix`.
fn parse<T: DeserializeOwned>(v: &Value, prefix: &str) -> JobResult<T> {
    serde_path_to_error::deserialize(v).map_err(|e| JobError::at(join_path(prefix, e.path()), e.inner().to_string()))
}

/// Parses one job line or document.
pub fn parse_job(text: &str) -> JobResult<JobSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().to_string();
        if e.inner().is_syntax() || e.inner().is_eof() || path == "." {
            JobError::Schema { path: None, message }
        } else {
            JobError::at(path, message)
        }
    })
}

fn ser<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

pub fn execute(job: &JobSpec, ctx: &Context) -> JobResult<JobOutput> {
    let params = if job.params.is_null() { Value::Object(Map::new()) } else { job.params.clone() };
    if !params.is_object() {
        return Err(JobError::at("params", "expected an object"));
    }
    let ctx = Context { seed: job.seed.unwrap_or(ctx.seed), ..*ctx };
    match job.command {
        Command::Classify => run_classify(&params),
        Command::Modular => run_modular(&params),
        Command::Torsion => run_torsion(&params),
        Command::Recurrence => run_recurrence(&params, &ctx),
        Command::HahnEval => run_hahn(&params),
        Command::AsReduce => run_as_reduce(&params),
        Command::Obstruct => run_obstruct(&params, &ctx),
        Command::Babbitt => run_babbitt(&params),
    }
}

fn decided(report: Value) -> JobResult<JobOutput> {
    Ok(JobOutput { status: Status::Decided, report })
}

fn need<T>(x: Option<T>, path: &str) -> JobResult<T> {
    x.ok_or_else(|| JobError::at(path, "missing field"))
}

/// Rows of Laurent entries, or a flat list of `k²` entries in row-major order.
fn diff_matrix(v: &Value, path: &str) -> JobResult<DiffMatrix> {
    let rows = match parse::<Vec<Vec<IntLaurent>>>(v, path) {
        Ok(rows) => rows,
        Err(rows_err) => {
            let flat: Vec<IntLaurent> = parse(v, path).map_err(|_| rows_err)?;
            let k = (flat.len() as f64).sqrt().round() as usize;
            if k * k != flat.len() || k == 0 {
                return Err(JobError::at(path, format!("flat matrix has {} entries, not a positive square", flat.len())));
            }
            flat.chunks(k).map(<[IntLaurent]>::to_vec).collect()
        }
    };
    Ok(DiffMatrix::from_rows(rows)?)
}

fn rat_matrix(rows: &[Vec<Rat>]) -> JobResult<RatMatrix> {
    Ok(RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|q| q.0.clone()).collect()).collect())?)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BudgetSpec {
    horizon: Option<u64>,
    orbit_steps: Option<u64>,
    samples: Option<usize>,
    j_max: Option<u32>,
}

impl BudgetSpec {
    fn build(&self, ctx: &Context) -> Budget {
        let d = Budget::default();
        let b = Budget {
            horizon: self.horizon.unwrap_or(d.horizon),
            orbit_steps: self.orbit_steps.unwrap_or(d.orbit_steps),
            samples: self.samples.unwrap_or(d.samples),
            j_max: self.j_max.unwrap_or(d.j_max),
            seed: ctx.seed,
        };
        b.scaled(ctx.budget_scale)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct ClassifyParams {
    #[serde(default)]
    F: Option<Value>,
    #[serde(default)]
    f: Option<IntLaurent>,
    p: u64,
}

fn run_classify(params: &Value) -> JobResult<JobOutput> {
    let ps: ClassifyParams = parse(params, "params")?;
    let f = match (&ps.F, ps.f) {
        (Some(m), None) => diff_matrix(m, "params.F")?,
        (None, Some(f)) => DiffMatrix::from_rows(vec![vec![f]])?,
        _ => return Err(JobError::at("params", "give exactly one of F (matrix) and f (single equation)")),
    };
    decided(ser(&classify(&f, ps.p)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModularParams {
    f: IntLaurent,
    p: u64,
}

fn run_modular(params: &Value) -> JobResult<JobOutput> {
    let ps: ModularParams = parse(params, "params")?;
    decided(ser(&is_modular(&ps.f, ps.p)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct TorsionParams {
    F: Value,
    n: u64,
    #[serde(default)]
    s: Option<u64>,
    /// Kernel elements to push through `φ`.
    #[serde(default)]
    phi: Vec<Vec<u64>>,
}

fn run_torsion(params: &Value) -> JobResult<JobOutput> {
    let ps: TorsionParams = parse(params, "params")?;
    let f = diff_matrix(&ps.F, "params.F")?;
    let Some(s) = ps.s else {
        if !ps.phi.is_empty() {
            return Err(JobError::at("params.phi", "phi needs a fixed s"));
        }
        // every unit s mod n
        let units = (1..ps.n.max(2)).filter(|s| gcd_u64(*s, ps.n) == 1);
        let reports = units.map(|s| Ok(ser(&report(&endo_from_diffmatrix(&f, ps.n, s)?)))).collect::<JobResult<Vec<_>>>()?;
        return decided(json!({ "n": ps.n, "sweep": reports }));
    };
    let e = endo_from_diffmatrix(&f, ps.n, s)?;
    let mut out = ser(&report(&e));
    if !ps.phi.is_empty() {
        let images = ps
            .phi
            .iter()
            .map(|x| Ok(json!({ "element": x, "coset": ser(&phi_map(&e, x)?) })))
            .collect::<JobResult<Vec<_>>>()?;
        out["phi"] = Value::Array(images);
    }
    decided(out)
}

fn default_eps() -> f64 {
    1e-4
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RecurrenceParams {
    A: Vec<Vec<Rat>>,
    #[serde(default = "default_eps")]
    eps: f64,
    #[serde(default)]
    budget: BudgetSpec,
    /// Also run the exact power-of-`p` eigenvalue detector.
    #[serde(default)]
    p: Option<u64>,
}

fn run_recurrence(params: &Value, ctx: &Context) -> JobResult<JobOutput> {
    let ps: RecurrenceParams = parse(params, "params")?;
    let a = rat_matrix(&ps.A)?;
    let budget = ps.budget.build(ctx);
    let found = find_recurrent_direction::<f64>(&a, ps.eps, &budget)?;
    let status = match found {
        Recurrence::Found(_) => Status::Decided,
        Recurrence::BudgetExhausted { .. } => Status::Inconclusive,
    };
    let mut out = ser(&found);
    if let Some(p) = ps.p {
        out["power_of_p"] = ser(&eigenvalue_power_of_p(&a, p, budget.j_max)?);
    }
    Ok(JobOutput { status, report: out })
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum HahnOp {
    Add,
    Sub,
    Mul,
    Pow,
    Invert,
    Valuation,
    Truncate,
    Newton,
    Sigma,
    Frobenius,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HahnParams {
    op: HahnOp,
    #[serde(default = "FieldSpec::rational")]
    field: FieldSpec,
    #[serde(default)]
    group: GroupSpec,
    #[serde(default)]
    a: Option<TermsSpec>,
    #[serde(default)]
    b: Option<TermsSpec>,
    #[serde(default)]
    n: Option<u32>,
    #[serde(default)]
    cutoff: Option<Vec<Rat>>,
    #[serde(default)]
    gamma: Option<Vec<Rat>>,
    /// Newton: polynomial coefficients in ascending degree.
    #[serde(default)]
    poly: Option<Vec<TermsSpec>>,
    #[serde(default)]
    start: Option<TermsSpec>,
    /// Sigma: rational matrix acting on exponent coordinates.
    #[serde(default)]
    matrix: Option<Vec<Vec<Rat>>>,
    #[serde(default)]
    frobenius: u32,
}

fn run_hahn(params: &Value) -> JobResult<JobOutput> {
    let ps: HahnParams = parse(params, "params")?;
    let group = ps.group.build()?;
    let report = if ps.field.p == 0 { hahn_eval(Rationals, &group, &ps)? } else { hahn_eval(ps.field.build_finite()?, &group, &ps)? };
    decided(report)
}

fn hahn_eval<F: JsonField>(field: F, group: &Arc<ExponentGroup>, ps: &HahnParams) -> JobResult<Value> {
    let series = |spec: &Option<TermsSpec>, path: &str| -> JobResult<HahnSeries<F>> {
        Ok(series_from(&field, group, need(spec.as_ref(), path)?)?)
    };
    let exponent = |e: &Option<Vec<Rat>>, path: &str| -> JobResult<_> { Ok(exponent_from(group, need(e.as_ref(), path)?)?) };
    let out = |s: &HahnSeries<F>| json!({ "result": ser(&series_json(s)) });
    Ok(match ps.op {
        HahnOp::Add => out(&series(&ps.a, "params.a")?.add(&series(&ps.b, "params.b")?)?),
        HahnOp::Sub => out(&series(&ps.a, "params.a")?.sub(&series(&ps.b, "params.b")?)?),
        HahnOp::Mul => out(&series(&ps.a, "params.a")?.mul(&series(&ps.b, "params.b")?)?),
        HahnOp::Pow => out(&series(&ps.a, "params.a")?.pow(need(ps.n, "params.n")?)?),
        HahnOp::Invert => out(&series(&ps.a, "params.a")?.invert_to(&exponent(&ps.cutoff, "params.cutoff")?)?),
        HahnOp::Truncate => out(&series(&ps.a, "params.a")?.truncate(&exponent(&ps.gamma, "params.gamma")?)?),
        HahnOp::Frobenius => out(&series(&ps.a, "params.a")?.frobenius()?),
        HahnOp::Sigma => {
            let m = rat_matrix(need(ps.matrix.as_ref(), "params.matrix")?)?;
            out(&sigma_action(&series(&ps.a, "params.a")?, &m, ps.frobenius)?)
        }
        HahnOp::Valuation => {
            let a = series(&ps.a, "params.a")?;
            json!({
                "valuation": ser(&exponent_json(&a.valuation()?)),
                "leading_coeff": ser(&field.coeff_json(&a.leading_coeff()?)),
            })
        }
        HahnOp::Newton => {
            let poly = need(ps.poly.as_ref(), "params.poly")?
                .iter()
                .enumerate()
                .map(|(i, c)| series_from(&field, group, c).map_err(|e| JobError::at(format!("params.poly[{i}]"), e.to_string())))
                .collect::<JobResult<Vec<_>>>()?;
            let trace = newton_lift_traced(&poly, &series(&ps.start, "params.start")?, &exponent(&ps.cutoff, "params.cutoff")?)?;
            json!({
                "result": ser(&series_json(&trace.root)),
                "residuals": trace.residuals.iter().map(|e| ser(&exponent_json(e))).collect::<Vec<_>>(),
            })
        }
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AsParams {
    field: FieldSpec,
    #[serde(default)]
    group: GroupSpec,
    b: TermsSpec,
    #[serde(default)]
    cutoff: Option<Vec<Rat>>,
}

fn run_as_reduce(params: &Value) -> JobResult<JobOutput> {
    let ps: AsParams = parse(params, "params")?;
    let field = ps.field.build_finite()?;
    let group = ps.group.build()?;
    let b = series_from(&field, &group, &ps.b)?;
    let cutoff = ps.cutoff.as_deref().map(|c| exponent_from(&group, c)).transpose()?;
    let cert = artin_schreier_reduce_to(&b, cutoff.as_ref())?;
    decided(json!({
        "outcome": ser(&cert.outcome),
        "solution": cert.solution.as_ref().map(|s| ser(&series_json(s))),
        "obstruction_exponents": cert.obstruction_exponents.iter().map(|e| ser(&exponent_json(e))).collect::<Vec<_>>(),
        "reduced": ser(&series_json(&cert.reduced)),
        "residue_extension": cert.residue_extension,
        "ramified": cert.outcome == Outcome::Obstructed,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct ObstructParams {
    f: IntLaurent,
    p: u64,
    J: Vec<Vec<i64>>,
    /// Packed field-element indices, one per entry of `J`; all ones if absent.
    #[serde(default)]
    coeffs: Option<Vec<Rat>>,
    #[serde(default)]
    field: Option<FieldSpec>,
    #[serde(default = "default_eps")]
    eps: f64,
    #[serde(default)]
    budget: BudgetSpec,
    #[serde(default)]
    group: Option<GroupSpec>,
}

fn run_obstruct(params: &Value, ctx: &Context) -> JobResult<JobOutput> {
    let ps: ObstructParams = parse(params, "params")?;
    let field = ps.field.clone().unwrap_or(FieldSpec::finite(ps.p, 1)).build_finite()?;
    let coeffs = match &ps.coeffs {
        Some(c) if c.len() != ps.J.len() => {
            return Err(JobError::at("params.coeffs", format!("{} coefficients for {} exponent vectors", c.len(), ps.J.len())))
        }
        Some(c) => c.iter().map(|x| field.parse_coeff(x)).collect::<sigmatorus::Result<Vec<_>>>()?,
        None => vec![field.one(); ps.J.len()],
    };
    let group = ps.group.as_ref().map(GroupSpec::build).transpose()?;
    let spec = DatumSpec { field, terms: ps.J.iter().cloned().zip(coeffs).collect(), group };
    let r = obstruct(&ps.f, ps.p, &spec, ps.eps, &ps.budget.build(ctx))?;
    let status = match r.verdict {
        Verdict::Obstructed => Status::Decided,
        Verdict::Inconclusive => Status::Inconclusive,
    };
    Ok(JobOutput { status, report: ser(&r) })
}

#[derive(Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
#[allow(non_snake_case)]
enum BabbittParams {
    Finite {
        field: FieldSpec,
        /// Ascending coefficients as packed element indices.
        P: Vec<Rat>,
        #[serde(default)]
        e: u32,
    },
    Quadratic {
        field: FieldSpec,
        num: Vec<Rat>,
        #[serde(default)]
        den: Option<Vec<Rat>>,
        #[serde(default)]
        c: Option<Rat>,
        d: u32,
        #[serde(default)]
        frobenius: u32,
    },
}

fn coeffs<F: JsonField>(field: &F, cs: &[Rat], path: &str) -> JobResult<Vec<F::Elem>> {
    cs.iter()
        .enumerate()
        .map(|(i, c)| field.parse_coeff(c).map_err(|e| JobError::at(format!("{path}[{i}]"), e.to_string())))
        .collect()
}

fn run_babbitt(params: &Value) -> JobResult<JobOutput> {
    let ps: BabbittParams = parse(params, "params")?;
    let r = match ps {
        BabbittParams::Finite { field, P, e } => {
            let field = field.build_finite()?;
            babbitt_finite(&field, &coeffs(&field, &P, "params.P")?, e)?
        }
        BabbittParams::Quadratic { field, num, den, c, d, frobenius } => {
            let field = field.build_finite()?;
            let c = match c {
                Some(c) => field.parse_coeff(&c).map_err(|e| JobError::at("params.c", e.to_string()))?,
                None => field.one(),
            };
            let den = match den {
                Some(den) => coeffs(&field, &den, "params.den")?,
                None => vec![field.one()],
            };
            let sigma = MonomialMap { c, d, frobenius };
            babbitt_quadratic_function_field(&field, &coeffs(&field, &num, "params.num")?, &den, &sigma)?
        }
    };
    decided(ser(&r))
}
