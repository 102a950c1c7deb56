//! Verification battery, parameter sweeps and report emission.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::dw::{self, DwResult, Method, Weights, Witness};
use crate::error::{Error, Result};
use crate::estimate::ConstantEstimate;
use crate::moduli;
use crate::spaces::{Space, SpaceSpec};

/// Significant digits of every real in emitted reports.
pub const SIGNIFICANT_DIGITS: usize = 12;
/// Threshold of `delta(eps) = 0` in the characteristic of convexity.
pub const ZERO_TOL: f64 = 1e-4;
/// Agreement required between two estimators of the same constant.
pub const CROSS_CHECK_TOL: f64 = 0.02;

/// Parses and validates a JSON space description.
pub fn parse_space_spec(text: &str) -> Result<SpaceSpec> {
    let spec: SpaceSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Space::new(spec.clone())?;
    Ok(spec)
}

/// Grid sizes and slack of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Fast,
    Thorough,
}

impl Profile {
    pub fn n_grid(&self) -> usize {
        match self {
            Profile::Fast => 256,
            Profile::Thorough => 1024,
        }
    }

    pub fn slack(&self) -> f64 {
        match self {
            Profile::Fast => 0.03,
            Profile::Thorough => 0.02,
        }
    }

    pub fn s_points(&self) -> usize {
        64
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Profile::Fast),
            "thorough" => Ok(Profile::Thorough),
            other => Err(Error::Parse(format!("unknown profile `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        })
    }
}

/// One inequality `lhs <= rhs + slack` or `lhs >= rhs - slack`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub refs: String,
}

impl Check {
    pub fn new(name: &str, lhs: f64, relation: Relation, rhs: f64, slack: f64, refs: &str) -> Self {
        let pass = match relation {
            Relation::Le => lhs <= rhs + slack,
            Relation::Ge => lhs >= rhs - slack,
        };
        Check {
            name: name.to_string(),
            lhs,
            relation,
            rhs,
            slack,
            pass,
            refs: refs.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub space: SpaceSpec,
    pub weights: Weights,
    pub profile: Profile,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn named<T>(check: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Check {
        check: check.to_string(),
        source: Box::new(e),
    })
}

/// Runs every estimator on `spec` and checks the inequalities relating them.
/// Failing checks never abort the battery.
pub fn run_verify(spec: &SpaceSpec, w: Weights, profile: Profile) -> Result<VerificationReport> {
    let space = Space::new(spec.clone())?;
    let (n, sp, slack) = (profile.n_grid(), profile.s_points(), profile.slack());
    let (a, b, sum) = (w.alpha(), w.beta(), w.sum());

    let dw = named("dw-t-form", dw::dw_general(&space, w, n))?.value();
    let dw_direct = named("dw-direct", dw::dw_direct(&space, w, n, sp))?.value();
    let dwb = named("dwb-t-form", dw::dw_b(&space, w, n))?.value();
    let dwb_direct = named("dwb-direct", dw::dw_b_direct(&space, w, n, sp))?.value();
    let e0 = named("eps0", moduli::eps0(&space, n, ZERO_TOL))?.value();
    let j = named("james-direct", moduli::james_direct(&space, n))?.value();
    let j_delta = named("james-via-delta", moduli::james_via_delta(&space, n))?.value();
    let rp0 = named("rho-prime0", moduli::rho_prime0(&space, n))?.value();
    let mu = named("rectangular", moduli::rect_constant(&space, n, sp))?.value();
    let psi = named("psi-inf", dw::psi_inf(&space, n, sp))?.value();

    use Relation::{Ge, Le};
    let checks = vec![
        Check::new(
            "dw-lower-weight-sum",
            dw,
            Ge,
            sum,
            slack,
            "DW >= alpha+beta",
        ),
        Check::new(
            "dw-upper-double-weight-sum",
            dw,
            Le,
            2.0 * sum,
            slack,
            "DW <= 2(alpha+beta)",
        ),
        Check::new(
            "dw-lower-eps0",
            dw,
            Ge,
            sum * e0.max(1.0),
            slack,
            "DW >= (alpha+beta) max{eps0, 1}",
        ),
        Check::new(
            "dw-upper-james",
            dw,
            Le,
            sum + sum / 2.0 * j,
            slack,
            "DW <= (alpha+beta) + (alpha+beta)/2 J",
        ),
        Check::new(
            "dw-lower-smoothness",
            dw,
            Ge,
            sum * (2.0 * rp0).max(1.0),
            slack,
            "DW >= (alpha+beta) max{2 rho'(0), 1}",
        ),
        Check::new(
            "dwb-lower-weight-sum",
            dwb,
            Ge,
            sum,
            slack,
            "DW_B >= alpha+beta",
        ),
        Check::new(
            "dwb-upper-weights",
            dwb,
            Le,
            (2.0 * a + b).max(a + 2.0 * b),
            slack,
            "DW_B <= max{2alpha+beta, alpha+2beta}",
        ),
        Check::new(
            "dwb-lower-rectangular",
            dwb,
            Ge,
            a.min(b) * mu,
            slack,
            "DW_B >= min{alpha, beta} mu(X)",
        ),
        Check::new(
            "dwb-upper-rectangular",
            dwb,
            Le,
            2.0 * a.max(b) * mu,
            slack,
            "DW_B <= 2 max{alpha, beta} mu(X)",
        ),
        Check::new("dwb-below-dw", dwb, Le, dw, CROSS_CHECK_TOL, "DW_B <= DW"),
        Check::new(
            "dw-t-form-vs-direct",
            (dw - dw_direct).abs(),
            Le,
            0.0,
            CROSS_CHECK_TOL,
            "|DW t-form - DW direct| = 0",
        ),
        Check::new(
            "dwb-t-form-vs-direct",
            (dwb - dwb_direct).abs(),
            Le,
            0.0,
            CROSS_CHECK_TOL,
            "|DW_B t-form - DW_B direct| = 0",
        ),
        Check::new(
            "james-direct-vs-delta",
            (j - j_delta).abs(),
            Le,
            0.0,
            CROSS_CHECK_TOL,
            "J = sup{eps : delta(eps) <= 1 - eps/2}",
        ),
        Check::new(
            "psi-inf-value",
            (psi - 2.0).abs(),
            Le,
            0.0,
            CROSS_CHECK_TOL,
            "Psi_inf = 2",
        ),
    ];
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        space: spec.clone(),
        weights: w,
        profile,
        checks,
        all_pass,
    })
}

/// One row of the `X_mu` sweep: the DW estimate between the two bounds
/// `max{2(alpha+beta) sqrt(mu^2 - 1), alpha+beta}` and
/// `(alpha+beta) + (alpha+beta)/2 min{2, mu sqrt 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub mu: f64,
    pub lower_bound: f64,
    pub estimate: f64,
    pub upper_bound: f64,
}

/// Upper end of the admissible `mu` range, with room for a rounded `sqrt 2`.
const MU_MAX: f64 = std::f64::consts::SQRT_2 + 1e-12;

pub fn xmu_bounds(mu: f64, w: Weights) -> (f64, f64) {
    let sum = w.sum();
    let lower = (2.0 * sum * (mu * mu - 1.0).max(0.0).sqrt()).max(sum);
    let upper = sum + sum / 2.0 * (mu * std::f64::consts::SQRT_2).min(2.0);
    (lower, upper)
}

pub fn sweep_mu(mu_values: &[f64], w: Weights, profile: Profile) -> Result<Vec<SweepRow>> {
    if let Some(bad) = mu_values.iter().find(|m| !(**m >= 1.0 && **m <= MU_MAX)) {
        return Err(Error::param("mu", format!("{bad} is not in [1, sqrt 2]")));
    }
    mu_values
        .iter()
        .map(|&mu| {
            let space = Space::xmu(mu.min(std::f64::consts::SQRT_2))?;
            let estimate = dw::dw_general(&space, w, profile.n_grid())?.value();
            let (lower_bound, upper_bound) = xmu_bounds(mu, w);
            Ok(SweepRow {
                mu,
                lower_bound,
                estimate,
                upper_bound,
            })
        })
        .collect()
}

/// `steps` equally spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..steps)
            .map(|k| {
                if k == steps - 1 {
                    to
                } else {
                    from + (to - from) * k as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

/// The constants computable by [`compute_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantName {
    Dw,
    DwB,
    DwS,
    DwI,
    MsB,
    PsiInf,
    Delta,
    Eps0,
    James,
    Rho,
    RhoPrime0,
    Rect,
}

impl ConstantName {
    pub const ALL: [ConstantName; 12] = [
        ConstantName::Dw,
        ConstantName::DwB,
        ConstantName::DwS,
        ConstantName::DwI,
        ConstantName::MsB,
        ConstantName::PsiInf,
        ConstantName::Delta,
        ConstantName::Eps0,
        ConstantName::James,
        ConstantName::Rho,
        ConstantName::RhoPrime0,
        ConstantName::Rect,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConstantName::Dw => "dw",
            ConstantName::DwB => "dw-b",
            ConstantName::DwS => "dw-s",
            ConstantName::DwI => "dw-i",
            ConstantName::MsB => "ms-b",
            ConstantName::PsiInf => "psi-inf",
            ConstantName::Delta => "delta",
            ConstantName::Eps0 => "eps0",
            ConstantName::James => "james",
            ConstantName::Rho => "rho",
            ConstantName::RhoPrime0 => "rho-prime0",
            ConstantName::Rect => "rect",
        }
    }
}

impl FromStr for ConstantName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConstantName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown constant `{s}`")))
    }
}

/// Estimator variant for constants that have two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// t-form for the DW family, direct search for the James constant.
    #[default]
    Primary,
    /// Direct form for the DW family, the modulus of convexity for the James constant.
    Alternate,
}

/// Parameters of [`compute_constant`]; unused ones are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantParams {
    pub weights: Weights,
    pub n_grid: usize,
    pub s_points: usize,
    pub eps: f64,
    pub t: f64,
    pub zero_tol: f64,
    pub variant: Variant,
}

impl Default for ConstantParams {
    fn default() -> Self {
        ConstantParams {
            weights: Weights::unit(),
            n_grid: Profile::Fast.n_grid(),
            s_points: 64,
            eps: 1.0,
            t: 0.5,
            zero_tol: ZERO_TOL,
            variant: Variant::Primary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantReport {
    pub name: ConstantName,
    pub space: SpaceSpec,
    pub estimate: ConstantEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

pub fn compute_constant(
    name: ConstantName,
    spec: &SpaceSpec,
    p: &ConstantParams,
) -> Result<ConstantReport> {
    let space = Space::new(spec.clone())?;
    let (n, sp, w) = (p.n_grid, p.s_points, p.weights);
    let alt = p.variant == Variant::Alternate;
    let dw_result: Option<DwResult> = match name {
        ConstantName::Dw if alt => Some(dw::dw_direct(&space, w, n, sp)?),
        ConstantName::Dw => Some(dw::dw_general(&space, w, n)?),
        ConstantName::DwB if alt => Some(dw::dw_b_direct(&space, w, n, sp)?),
        ConstantName::DwB => Some(dw::dw_b(&space, w, n)?),
        ConstantName::DwS => Some(dw::dw_s(&space, n, sp)?),
        ConstantName::DwI => Some(dw::dw_i(&space, n, sp)?),
        ConstantName::MsB => Some(dw::ms_b(&space, n, sp)?),
        ConstantName::PsiInf => Some(dw::psi_inf(&space, n, sp)?),
        _ => None,
    };
    let (estimate, method, witness) = match dw_result {
        Some(r) => (r.estimate, Some(r.method), Some(r.witness)),
        None => {
            let e = match name {
                ConstantName::Delta => moduli::delta(&space, p.eps, n)?,
                ConstantName::Eps0 => moduli::eps0(&space, n, p.zero_tol)?,
                ConstantName::James if alt => moduli::james_via_delta(&space, n)?,
                ConstantName::James => moduli::james_direct(&space, n)?,
                ConstantName::Rho => moduli::rho(&space, p.t, n)?,
                ConstantName::RhoPrime0 => moduli::rho_prime0(&space, n)?,
                ConstantName::Rect => moduli::rect_constant(&space, n, sp)?,
                _ => unreachable!("DW family handled above"),
            };
            (e, None, None)
        }
    };
    Ok(ConstantReport {
        name,
        space: spec.clone(),
        estimate,
        method,
        witness,
    })
}

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

pub enum Report<'a> {
    Verify(&'a VerificationReport),
    Sweep(&'a [SweepRow]),
    Constant(&'a ConstantReport),
}

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            let r = round_sig(num.as_f64().expect("f64 number"));
            if let Some(n) = serde_json::Number::from_f64(r) {
                *num = n;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty JSON with every real rounded to [`SIGNIFICANT_DIGITS`] digits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("reports serialize");
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn real(x: f64) -> String {
    round_sig(x).to_string()
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// Renders a report. Output is a pure function of the report.
pub fn emit_report(report: Report<'_>, format: Format) -> String {
    match (report, format) {
        (Report::Verify(r), Format::Json) => to_json(r),
        (Report::Sweep(rows), Format::Json) => to_json(&rows),
        (Report::Constant(c), Format::Json) => to_json(c),
        (Report::Verify(r), Format::Csv) => csv_text(
            &["name", "lhs", "relation", "rhs", "slack", "pass", "refs"],
            r.checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        real(c.lhs),
                        c.relation.to_string(),
                        real(c.rhs),
                        real(c.slack),
                        c.pass.to_string(),
                        c.refs.clone(),
                    ]
                })
                .collect(),
        ),
        (Report::Sweep(rows), Format::Csv) => csv_text(
            &["mu", "lower_bound", "estimate", "upper_bound"],
            rows.iter()
                .map(|r| {
                    vec![
                        real(r.mu),
                        real(r.lower_bound),
                        real(r.estimate),
                        real(r.upper_bound),
                    ]
                })
                .collect(),
        ),
        (Report::Constant(c), Format::Csv) => {
            let e = &c.estimate;
            let kind = serde_json::to_value(e.kind()).expect("kind serializes");
            let bias = serde_json::to_value(e.bias()).expect("bias serializes");
            let mut row = vec![
                c.name.as_str().to_string(),
                real(e.value()),
                kind.as_str().unwrap_or_default().to_string(),
                e.grid().to_string(),
                e.refined().to_string(),
                bias.as_str().unwrap_or_default().to_string(),
            ];
            let (u, v, p) = match &c.witness {
                Some(wt) => (
                    wt.u.coords()
                        .iter()
                        .map(|x| real(*x))
                        .collect::<Vec<_>>()
                        .join(" "),
                    wt.v.coords()
                        .iter()
                        .map(|x| real(*x))
                        .collect::<Vec<_>>()
                        .join(" "),
                    real(wt.t_or_s),
                ),
                None => Default::default(),
            };
            row.extend([u, v, p]);
            csv_text(
                &[
                    "name", "value", "kind", "grid", "refined", "bias", "u", "v", "t_or_s",
                ],
                vec![row],
            )
        }
    }
}
