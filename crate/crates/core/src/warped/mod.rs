//! Warped products `F = sqrt(F1^2 + f^2 F2^2)`, cylinders, and the conformal
//! factor families that make a cylinder R-Einstein.

mod warp_fn;

use serde::{Deserialize, Serialize};

pub use warp_fn::{WarpFunction, WarpKind};

use crate::conformal::{deform, lce_residual, ConformalFactor, FactorKind};
use crate::connection::chern_coefficients;
use crate::curvature::{einstein_residual, hh_curvature, scal_h};
use crate::error::{GeometryError, Result};
use crate::jet::{DiffConfig, Jet};
use crate::metric::{fundamental_tensor, Family, MetricSpec};
use crate::sampling::Sampler;
use crate::tensor::BundlePoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarpedSpec {
    pub base: MetricSpec,
    pub fiber: MetricSpec,
    pub warp: WarpFunction,
}

/// `R x M2` with `F = sqrt(dt^2 + F2^2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderSpec {
    pub fiber: MetricSpec,
}

impl CylinderSpec {
    pub fn dim(&self) -> usize {
        self.fiber.dim() + 1
    }

    pub fn metric(&self) -> Result<MetricSpec> {
        build_warped(MetricSpec::euclidean(1), self.fiber.clone(), WarpFunction::one())
    }
}

impl WarpedSpec {
    pub fn metric(&self) -> Result<MetricSpec> {
        build_warped(self.base.clone(), self.fiber.clone(), self.warp.clone())
    }
}

/// Either `{"cylinder": {"fiber": ..}}` or `{"base", "fiber", "warp"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WarpedInput {
    Cylinder { cylinder: CylinderSpec },
    Warped(WarpedSpec),
}

impl WarpedInput {
    pub fn metric(&self) -> Result<MetricSpec> {
        match self {
            WarpedInput::Cylinder { cylinder } => cylinder.metric(),
            WarpedInput::Warped(w) => w.metric(),
        }
    }

    pub fn cylinder(&self) -> Option<&CylinderSpec> {
        match self {
            WarpedInput::Cylinder { cylinder } => Some(cylinder),
            WarpedInput::Warped(_) => None,
        }
    }
}

/// The warped product; the warp must be positive on the base chart box.
pub fn build_warped(base: MetricSpec, fiber: MetricSpec, warp: WarpFunction) -> Result<MetricSpec> {
    warp.validate(base.dim())?;
    let bx = base.chart_box();
    let mut corner = vec![0.0; bx.len()];
    for mask in 0..1usize << bx.len() {
        for (i, (lo, hi)) in bx.iter().enumerate() {
            corner[i] = if mask >> i & 1 == 0 { *lo } else { *hi };
        }
        warp.positive_value(&corner)?;
    }
    let mid: Vec<f64> = bx.iter().map(|(a, b)| 0.5 * (a + b)).collect();
    warp.positive_value(&mid)?;
    MetricSpec::new(
        base.dim() + fiber.dim(),
        Family::Warped {
            base: Box::new(base),
            fiber: Box::new(fiber),
            warp,
        },
    )
}

fn parts(spec: &MetricSpec) -> Result<(&MetricSpec, &MetricSpec, &WarpFunction)> {
    match spec.family() {
        Family::Warped { base, fiber, warp } => Ok((base, fiber, warp)),
        _ => Err(GeometryError::InvalidMetric(format!(
            "expected a warped metric, got `{}`",
            spec.family_name()
        ))),
    }
}

fn split(p: &BundlePoint, k: usize) -> Result<(BundlePoint, BundlePoint)> {
    Ok((
        BundlePoint::new(p.x()[..k].to_vec(), p.y()[..k].to_vec())?,
        BundlePoint::new(p.x()[k..].to_vec(), p.y()[k..].to_vec())?,
    ))
}

/// Deviation of `g` from `diag(g1, f^2 g2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockResidual {
    pub off_diagonal: f64,
    pub base_block: f64,
    pub fiber_block: f64,
}

impl BlockResidual {
    pub fn max(&self) -> f64 {
        self.off_diagonal.max(self.base_block).max(self.fiber_block)
    }
}

pub fn block_residual(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<BlockResidual> {
    let (base, fiber, warp) = parts(spec)?;
    let k = base.dim();
    let n = spec.dim();
    let (pb, pf) = split(p, k)?;
    let g = fundamental_tensor(spec, p, cfg)?.g;
    let g1 = fundamental_tensor(base, &pb, cfg)?.g;
    let g2 = fundamental_tensor(fiber, &pf, cfg)?.g;
    let f2 = warp.positive_value(&p.x()[..k])?.powi(2);
    let mut r = BlockResidual {
        off_diagonal: 0.0,
        base_block: 0.0,
        fiber_block: 0.0,
    };
    for i in 0..n {
        for j in 0..n {
            let v = g.get(&[i, j]);
            match (i < k, j < k) {
                (true, true) => r.base_block = r.base_block.max((v - g1.get(&[i, j])).abs()),
                (false, false) => {
                    r.fiber_block = r.fiber_block.max((v - f2 * g2.get(&[i - k, j - k])).abs())
                }
                _ => r.off_diagonal = r.off_diagonal.max(v.abs()),
            }
        }
    }
    Ok(r)
}

/// Connection and curvature identities of a warped product at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpedConnectionResidual {
    /// `max |Gamma^a_bc - Gamma1^a_bc|` over base indices.
    pub base_block: f64,
    /// `max |Gamma^al_(a be) - (d_a f / f) delta^al_be|`, both lower orders.
    pub mixed_block: f64,
    /// `max |R_lijk|` with `l, i, k` on the base and `j` on the fiber.
    pub curvature_mixed: f64,
}

pub fn warped_connection_residual(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<WarpedConnectionResidual> {
    let (base, _, warp) = parts(spec)?;
    let k = base.dim();
    let n = spec.dim();
    let (pb, _) = split(p, k)?;
    let gam = chern_coefficients(spec, p, cfg)?;
    let gam1 = chern_coefficients(base, &pb, cfg)?;

    let xs: Vec<Jet> = (0..k).map(|i| Jet::variable(k, 1, i, p.x()[i])).collect();
    let f = warp.eval_jet(&xs);
    let dlog: Vec<f64> = (0..k)
        .map(|a| Ok(f.partial_wrt(&[a])? / f.value()))
        .collect::<Result<_>>()?;

    let mut base_block = 0.0f64;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                base_block = base_block.max((gam.gamma(a, b, c) - gam1.gamma(a, b, c)).abs());
            }
        }
    }
    let mut mixed_block = 0.0f64;
    for al in k..n {
        for be in k..n {
            let want = |a: usize| if al == be { dlog[a] } else { 0.0 };
            for a in 0..k {
                mixed_block = mixed_block
                    .max((gam.gamma(al, a, be) - want(a)).abs())
                    .max((gam.gamma(al, be, a) - want(a)).abs());
            }
        }
    }
    let r = hh_curvature(spec, p, cfg)?;
    let mut curvature_mixed = 0.0f64;
    for l in 0..k {
        for i in 0..k {
            for kk in 0..k {
                for j in k..n {
                    curvature_mixed = curvature_mixed.max(r.get(&[l, i, j, kk]).abs());
                }
            }
        }
    }
    Ok(WarpedConnectionResidual {
        base_block,
        mixed_block,
        curvature_mixed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OdeKind {
    /// `phi = a t + b`, `s* = 0`; params `[a, b]`.
    Linear,
    /// `phi = cosh(sqrt(s*) t + g)`, `s* > 0`; params `[g]`.
    Cosh,
    /// `phi = mu cos(sqrt(-s*) t + th)`, `s* < 0`; params `[mu, th]`.
    Cos,
}

/// `phi'' = s* phi`, equivalently `u'' - u'^2 + s* = 0` for `u = -log phi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeFamily {
    pub s_star: f64,
    pub family: OdeKind,
    pub params: Vec<f64>,
}

/// `|s*|` below this counts as zero when matching a family.
pub const S_STAR_ZERO: f64 = 1e-6;

impl OdeFamily {
    pub fn new(s_star: f64, family: OdeKind, params: Vec<f64>) -> Result<OdeFamily> {
        let need = match family {
            OdeKind::Linear | OdeKind::Cos => 2,
            OdeKind::Cosh => 1,
        };
        if params.len() != need || params.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::Config(format!(
                "{family:?} family takes {need} finite parameters, got {:?}",
                params
            )));
        }
        let ok = match family {
            OdeKind::Linear => s_star.abs() <= S_STAR_ZERO,
            OdeKind::Cosh => s_star > S_STAR_ZERO,
            OdeKind::Cos => s_star < -S_STAR_ZERO,
        };
        if !ok {
            return Err(GeometryError::Case(format!(
                "{family:?} family does not match s* = {s_star}"
            )));
        }
        Ok(OdeFamily { s_star, family, params })
    }

    /// `u = -log phi`.
    pub fn factor(&self) -> ConformalFactor {
        let p = &self.params;
        match self.family {
            OdeKind::Linear if p[0] == 0.0 => ConformalFactor::constant(-p[1].ln()),
            OdeKind::Linear => ConformalFactor::new(FactorKind::LogLinear, p.clone()),
            OdeKind::Cosh => ConformalFactor::new(FactorKind::LogCosh, vec![self.s_star.sqrt(), p[0]]),
            OdeKind::Cos => ConformalFactor::new(FactorKind::LogCos, vec![p[0], (-self.s_star).sqrt(), p[1]]),
        }
    }

    fn u_jet(&self, t: f64) -> Result<Jet> {
        self.factor().eval_jet(&[Jet::variable(1, 2, 0, t)])
    }

    pub fn phi(&self, t: f64) -> Result<f64> {
        Ok((-self.u_jet(t)?.value()).exp())
    }

    /// `|phi'' - s* phi|` at `t`, from jets of `exp(-u)`.
    pub fn phi_residual(&self, t: f64) -> Result<f64> {
        let phi = (-&self.u_jet(t)?).exp();
        Ok((phi.partial_wrt(&[0, 0])? - self.s_star * phi.value()).abs())
    }

    /// `|u'' - u'^2 + s*|` at `t`.
    pub fn u_residual(&self, t: f64) -> Result<f64> {
        let u = self.u_jet(t)?;
        let du = u.partial_wrt(&[0])?;
        Ok((u.partial_wrt(&[0, 0])? - du * du + self.s_star).abs())
    }

    /// Largest subinterval of `window` around its midpoint where `phi >= floor`.
    /// Only the cosine family shrinks; the others fail on a non-positive value.
    pub fn admissible_window(&self, window: (f64, f64), floor: f64) -> Result<(f64, f64)> {
        let (lo, hi) = window;
        match self.family {
            OdeKind::Cos => {
                let (mu, th) = (self.params[0], self.params[1]);
                if mu <= floor {
                    return Err(GeometryError::Domain {
                        function: "cos profile amplitude",
                        value: mu,
                    });
                }
                let b = (-self.s_star).sqrt();
                let reach = (floor / mu).acos();
                // phi >= floor on |b t + th| <= reach, taking the branch nearest the window.
                let center = ((b * 0.5 * (lo + hi) + th) / (2.0 * std::f64::consts::PI)).round()
                    * 2.0
                    * std::f64::consts::PI;
                let a = (center - reach - th) / b;
                let z = (center + reach - th) / b;
                let out = (lo.max(a), hi.min(z));
                if out.0 >= out.1 {
                    return Err(GeometryError::Domain {
                        function: "cos profile window",
                        value: self.phi(0.5 * (lo + hi))?,
                    });
                }
                Ok(out)
            }
            OdeKind::Linear => {
                let worst = self.params[0] * if self.params[0] < 0.0 { hi } else { lo } + self.params[1];
                if worst <= 0.0 {
                    return Err(GeometryError::Domain {
                        function: "linear profile",
                        value: worst,
                    });
                }
                Ok(window)
            }
            OdeKind::Cosh => Ok(window),
        }
    }
}

/// Factor for one of the three cylinder cases, with its admissible window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseFactor {
    pub ode: OdeFamily,
    pub factor: ConformalFactor,
    pub window: (f64, f64),
}

pub const PHI_FLOOR: f64 = 0.05;

pub fn cylinder_case_factor(s_star: f64, family: OdeKind, params: &[f64], window: (f64, f64)) -> Result<CaseFactor> {
    let ode = OdeFamily::new(s_star, family, params.to_vec())?;
    let window = ode.admissible_window(window, PHI_FLOOR)?;
    Ok(CaseFactor {
        factor: ode.factor(),
        ode,
        window,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberCheck {
    pub max_einstein_residual: f64,
    pub scal: f64,
    pub scal_spread: f64,
    pub einstein: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderReport {
    pub family: OdeKind,
    pub params: Vec<f64>,
    pub fiber: FiberCheck,
    pub s_star: f64,
    pub factor: Option<CaseFactor>,
    pub t_grid: Vec<f64>,
    pub max_phi_residual: f64,
    pub max_u_residual: f64,
    pub max_einstein_residual: f64,
    /// `max |L_0j|, |L_j0|` of the conformal residual, `j >= 1`.
    pub max_mixed_lce: f64,
    pub tolerance: f64,
    /// `None` when the fiber precondition fails.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderRun {
    pub grid: usize,
    pub seed: u64,
    pub window: (f64, f64),
    pub tolerance: f64,
    pub fiber_tolerance: f64,
}

impl Default for CylinderRun {
    fn default() -> Self {
        CylinderRun {
            grid: 20,
            seed: 0,
            window: (-1.0, 1.0),
            tolerance: 1e-4,
            fiber_tolerance: 1e-6,
        }
    }
}

fn grid(window: (f64, f64), count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.5 * (window.0 + window.1)];
    }
    let step = (window.1 - window.0) / (count - 1) as f64;
    (0..count).map(|i| window.0 + step * i as f64).collect()
}

fn cylinder_samples(cylinder: &CylinderSpec, run: &CylinderRun) -> Result<(MetricSpec, Vec<BundlePoint>)> {
    let n = cylinder.dim();
    if n < 3 {
        return Err(GeometryError::Dimension(format!("cylinder cases need dimension >= 3, got {n}")));
    }
    let metric = cylinder.metric()?;
    let mut sampler = Sampler::new(run.grid, run.seed);
    let mut bx = metric.chart_box();
    bx[0] = run.window;
    sampler.chart_box = Some(bx);
    let raw = sampler.sample(&metric)?;
    Ok((metric, raw))
}

fn fiber_check_at(cylinder: &CylinderSpec, raw: &[BundlePoint], run: &CylinderRun, cfg: &DiffConfig) -> Result<(FiberCheck, f64)> {
    let n = cylinder.dim();
    let mut fe = 0.0f64;
    let mut scals = Vec::with_capacity(raw.len());
    for p in raw {
        let q = BundlePoint::new(p.x()[1..].to_vec(), p.y()[1..].to_vec())?;
        fe = fe.max(einstein_residual(&cylinder.fiber, &q, cfg)?);
        scals.push(scal_h(&cylinder.fiber, &q, cfg)?);
    }
    let scal = scals.iter().sum::<f64>() / scals.len() as f64;
    let spread = scals.iter().fold(0.0f64, |m, s| m.max((s - scal).abs()));
    let fiber = FiberCheck {
        max_einstein_residual: fe,
        scal,
        scal_spread: spread,
        einstein: fe <= run.fiber_tolerance && spread <= 1e3 * run.fiber_tolerance,
    };
    Ok((fiber, scal / ((n - 1) * (n - 2)) as f64))
}

/// Fiber R-Einstein test and `s* = Scal2 / ((n-1)(n-2))` from the measured
/// fiber scalar curvature.
pub fn fiber_check(cylinder: &CylinderSpec, run: &CylinderRun, cfg: &DiffConfig) -> Result<(FiberCheck, f64)> {
    let (_, raw) = cylinder_samples(cylinder, run)?;
    fiber_check_at(cylinder, &raw, run, cfg)
}

/// Check that `e^u F` is R-Einstein on the cylinder over `t`-grid points,
/// with `u` from the family matching the fiber's measured `s*`.
pub fn verify_cylinder_case(
    cylinder: &CylinderSpec,
    family: OdeKind,
    params: &[f64],
    run: &CylinderRun,
    cfg: &DiffConfig,
) -> Result<CylinderReport> {
    let n = cylinder.dim();
    let (metric, raw) = cylinder_samples(cylinder, run)?;
    let (fiber, s_star) = fiber_check_at(cylinder, &raw, run, cfg)?;
    let mut report = CylinderReport {
        family,
        params: params.to_vec(),
        fiber,
        s_star,
        factor: None,
        t_grid: Vec::new(),
        max_phi_residual: 0.0,
        max_u_residual: 0.0,
        max_einstein_residual: 0.0,
        max_mixed_lce: 0.0,
        tolerance: run.tolerance,
        pass: None,
    };
    if !report.fiber.einstein {
        return Ok(report);
    }

    let case = cylinder_case_factor(s_star, family, params, run.window)?;
    let ts = grid(case.window, run.grid);
    let deformed = deform(&metric, &case.factor)?;
    for (t, p) in ts.iter().zip(&raw) {
        let mut x = p.x().to_vec();
        x[0] = *t;
        let q = BundlePoint::new(x, p.y().to_vec())?;
        report.max_phi_residual = report.max_phi_residual.max(case.ode.phi_residual(*t)?);
        report.max_u_residual = report.max_u_residual.max(case.ode.u_residual(*t)?);
        report.max_einstein_residual = report.max_einstein_residual.max(einstein_residual(&deformed, &q, cfg)?);
        let l = lce_residual(&metric, &case.factor, &q, cfg)?;
        for j in 1..n {
            report.max_mixed_lce = report.max_mixed_lce.max(l.get(&[0, j]).abs()).max(l.get(&[j, 0]).abs());
        }
    }
    report.pass = Some(
        report.max_einstein_residual <= run.tolerance
            && report.max_mixed_lce <= run.tolerance
            && report.max_phi_residual <= 1e-9
            && report.max_u_residual <= 1e-8,
    );
    report.t_grid = ts;
    report.factor = Some(case);
    Ok(report)
}
