//! Finsler metric families, their energy `F^2` on jets, and the fiberwise
//! tensors derived from it.

pub(crate) mod fundamental;
mod poly;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::conformal::ConformalFactor;
use crate::error::{GeometryError, Result};
use crate::jet::{lift, seed_indices, DiffConfig, Jet, Seed};
use crate::tensor::{inf_norm, BundlePoint};
use crate::warped::WarpFunction;

pub use fundamental::{cartan_tensor, fundamental_tensor, mean_cartan_norm, FundamentalTensor};
pub use poly::{Poly, Term};

/// Non-quadratic Minkowski norms on `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinkowskiKind {
    /// `F = (sum y_i^4)^(1/4)`. Not strongly convex on the coordinate axes.
    Quartic,
    /// `F^2 = |y|^2 + lambda (sum y_i^4)^(1/2)`.
    QuarticPerturbed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Euclidean,
    /// `F^2 = a_ij(x) y^i y^j`.
    RiemannianQuadratic { matrix: Vec<Vec<Poly>> },
    /// Hyperspherical chart of the round sphere of radius `r`:
    /// `r^2 (dx1^2 + sin^2 x1 dx2^2 + sin^2 x1 sin^2 x2 dx3^2 + ..)`.
    RoundSphereChart { radius: f64 },
    /// Upper half-space `r^2 |dx|^2 / (x^n)^2`.
    HyperbolicChart { radius: f64 },
    /// `F = alpha + b_i(x) y^i` over a Riemannian `alpha`.
    Randers { alpha: Box<MetricSpec>, b: Vec<Poly> },
    MinkowskiNorm { norm: MinkowskiKind, lambda: f64 },
    /// `F^2 = F1^2 + f^2 F2^2` on base x fiber.
    Warped {
        base: Box<MetricSpec>,
        fiber: Box<MetricSpec>,
        warp: WarpFunction,
    },
    /// `e^u F`.
    Conformal { base: Box<MetricSpec>, factor: ConformalFactor },
}

/// A validated metric on one chart of dimension `dim`.
///
/// JSON form: `{"family": "...", "dim": n, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct MetricSpec {
    dim: usize,
    family: Family,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    family: String,
    dim: usize,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    params: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticParams {
    matrix: Vec<Vec<Poly>>,
}

fn one() -> f64 {
    1.0
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadiusParams {
    #[serde(default = "one")]
    radius: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RandersParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<MetricSpec>,
    b: Vec<Poly>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MinkowskiParams {
    norm: MinkowskiKind,
    #[serde(default)]
    lambda: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WarpedParams {
    base: MetricSpec,
    fiber: MetricSpec,
    warp: WarpFunction,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConformalParams {
    base: MetricSpec,
    factor: ConformalFactor,
}

fn params<T: serde::de::DeserializeOwned>(family: &str, v: Value) -> std::result::Result<T, String> {
    serde_json::from_value(v).map_err(|e| format!("params of family `{family}`: {e}"))
}

impl TryFrom<RawSpec> for MetricSpec {
    type Error = String;

    fn try_from(raw: RawSpec) -> std::result::Result<MetricSpec, String> {
        let f = raw.family.as_str();
        let family = match f {
            "euclidean" => Family::Euclidean,
            "riemannian_quadratic" => {
                let p: QuadraticParams = params(f, raw.params)?;
                Family::RiemannianQuadratic { matrix: p.matrix }
            }
            "round_sphere_chart" | "hyperbolic_chart" => {
                let v = if raw.params.is_null() { Value::Object(Default::default()) } else { raw.params };
                let p: RadiusParams = params(f, v)?;
                if f == "round_sphere_chart" {
                    Family::RoundSphereChart { radius: p.radius }
                } else {
                    Family::HyperbolicChart { radius: p.radius }
                }
            }
            "randers" => {
                let p: RandersParams = params(f, raw.params)?;
                let alpha = p.alpha.unwrap_or_else(|| MetricSpec::euclidean(raw.dim));
                Family::Randers {
                    alpha: Box::new(alpha),
                    b: p.b,
                }
            }
            "minkowski_norm" => {
                let p: MinkowskiParams = params(f, raw.params)?;
                Family::MinkowskiNorm {
                    norm: p.norm,
                    lambda: p.lambda,
                }
            }
            "warped" => {
                let p: WarpedParams = params(f, raw.params)?;
                Family::Warped {
                    base: Box::new(p.base),
                    fiber: Box::new(p.fiber),
                    warp: p.warp,
                }
            }
            "conformal" => {
                let p: ConformalParams = params(f, raw.params)?;
                Family::Conformal {
                    base: Box::new(p.base),
                    factor: p.factor,
                }
            }
            other => return Err(format!("unknown metric family `{other}`")),
        };
        MetricSpec::new(raw.dim, family).map_err(|e| e.to_string())
    }
}

impl From<MetricSpec> for RawSpec {
    fn from(s: MetricSpec) -> RawSpec {
        let family = s.family_name().to_string();
        let to = |v: std::result::Result<Value, serde_json::Error>| v.expect("metric params serialize");
        let params = match s.family {
            Family::Euclidean => Value::Null,
            Family::RiemannianQuadratic { matrix } => to(serde_json::to_value(QuadraticParams { matrix })),
            Family::RoundSphereChart { radius } | Family::HyperbolicChart { radius } => {
                to(serde_json::to_value(RadiusParams { radius }))
            }
            Family::Randers { alpha, b } => to(serde_json::to_value(RandersParams { alpha: Some(*alpha), b })),
            Family::MinkowskiNorm { norm, lambda } => to(serde_json::to_value(MinkowskiParams { norm, lambda })),
            Family::Warped { base, fiber, warp } => to(serde_json::to_value(WarpedParams {
                base: *base,
                fiber: *fiber,
                warp,
            })),
            Family::Conformal { base, factor } => to(serde_json::to_value(ConformalParams { base: *base, factor })),
        };
        RawSpec {
            family,
            dim: s.dim,
            params,
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(GeometryError::InvalidMetric(msg.into()))
}

impl MetricSpec {
    pub fn new(dim: usize, family: Family) -> Result<MetricSpec> {
        if dim == 0 {
            return invalid("dimension must be at least 1");
        }
        match &family {
            Family::Euclidean => {}
            Family::RiemannianQuadratic { matrix } => {
                if matrix.len() != dim || matrix.iter().any(|r| r.len() != dim) {
                    return invalid(format!("quadratic metric needs a {dim}x{dim} matrix"));
                }
                if matrix.iter().flatten().any(|p| p.arity() > dim) {
                    return invalid("matrix entry uses more variables than the chart");
                }
            }
            Family::RoundSphereChart { radius } | Family::HyperbolicChart { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return invalid(format!("radius must be positive, got {radius}"));
                }
            }
            Family::Randers { alpha, b } => {
                if alpha.dim != dim || b.len() != dim {
                    return invalid("randers alpha and b must match the chart dimension");
                }
                if !alpha.is_riemannian() {
                    return invalid("randers alpha must be Riemannian");
                }
                if b.iter().any(|p| p.arity() > dim) {
                    return invalid("b uses more variables than the chart");
                }
            }
            Family::MinkowskiNorm { norm, lambda } => {
                if *norm == MinkowskiKind::QuarticPerturbed && !(*lambda >= 0.0 && lambda.is_finite()) {
                    return invalid(format!("lambda must be nonnegative, got {lambda}"));
                }
            }
            Family::Warped { base, fiber, warp } => {
                if base.dim + fiber.dim != dim {
                    return invalid(format!(
                        "warped dimension {dim} differs from base {} + fiber {}",
                        base.dim, fiber.dim
                    ));
                }
                warp.validate(base.dim)?;
            }
            Family::Conformal { base, factor } => {
                if base.dim != dim {
                    return invalid("conformal base must match the chart dimension");
                }
                factor.validate(dim)?;
            }
        }
        Ok(MetricSpec { dim, family })
    }

    pub fn euclidean(dim: usize) -> MetricSpec {
        MetricSpec::new(dim.max(1), Family::Euclidean).expect("euclidean is valid")
    }

    pub fn round_sphere(dim: usize, radius: f64) -> Result<MetricSpec> {
        MetricSpec::new(dim, Family::RoundSphereChart { radius })
    }

    pub fn hyperbolic(dim: usize, radius: f64) -> Result<MetricSpec> {
        MetricSpec::new(dim, Family::HyperbolicChart { radius })
    }

    pub fn quadratic(matrix: Vec<Vec<Poly>>) -> Result<MetricSpec> {
        MetricSpec::new(matrix.len(), Family::RiemannianQuadratic { matrix })
    }

    pub fn randers(alpha: MetricSpec, b: Vec<Poly>) -> Result<MetricSpec> {
        MetricSpec::new(
            alpha.dim,
            Family::Randers {
                alpha: Box::new(alpha),
                b,
            },
        )
    }

    pub fn minkowski(dim: usize, norm: MinkowskiKind, lambda: f64) -> Result<MetricSpec> {
        MetricSpec::new(dim, Family::MinkowskiNorm { norm, lambda })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Euclidean => "euclidean",
            Family::RiemannianQuadratic { .. } => "riemannian_quadratic",
            Family::RoundSphereChart { .. } => "round_sphere_chart",
            Family::HyperbolicChart { .. } => "hyperbolic_chart",
            Family::Randers { .. } => "randers",
            Family::MinkowskiNorm { .. } => "minkowski_norm",
            Family::Warped { .. } => "warped",
            Family::Conformal { .. } => "conformal",
        }
    }

    /// Structural test: the energy is quadratic in `y`.
    pub fn is_riemannian(&self) -> bool {
        match &self.family {
            Family::Euclidean
            | Family::RiemannianQuadratic { .. }
            | Family::RoundSphereChart { .. }
            | Family::HyperbolicChart { .. } => true,
            Family::Randers { b, .. } => b.iter().all(Poly::is_zero),
            Family::MinkowskiNorm { .. } => false,
            Family::Warped { base, fiber, .. } => base.is_riemannian() && fiber.is_riemannian(),
            Family::Conformal { base, .. } => base.is_riemannian(),
        }
    }

    /// Default sampling box for chart positions.
    pub fn chart_box(&self) -> Vec<(f64, f64)> {
        let n = self.dim;
        match &self.family {
            Family::RoundSphereChart { .. } => (0..n)
                .map(|i| if i + 1 < n { (0.6, 2.5) } else { (-1.0, 1.0) })
                .collect(),
            Family::HyperbolicChart { .. } => (0..n)
                .map(|i| if i + 1 < n { (-1.0, 1.0) } else { (0.5, 2.0) })
                .collect(),
            Family::Randers { alpha, .. } => alpha.chart_box(),
            Family::Conformal { base, .. } => base.chart_box(),
            Family::Warped { base, fiber, .. } => {
                let mut b = base.chart_box();
                b.extend(fiber.chart_box());
                b
            }
            _ => vec![(-1.0, 1.0); n],
        }
    }

    /// Domain checks at `(x, y)` beyond the slit-bundle condition.
    pub fn check_point(&self, p: &BundlePoint) -> Result<()> {
        if p.dim() != self.dim {
            return Err(GeometryError::Dimension(format!(
                "point of dimension {} for a metric of dimension {}",
                p.dim(),
                self.dim
            )));
        }
        self.check(p.x(), p.y())
    }

    fn check(&self, x: &[f64], y: &[f64]) -> Result<()> {
        let n = self.dim;
        match &self.family {
            Family::RoundSphereChart { .. } => {
                for (i, &v) in x.iter().enumerate().take(n.saturating_sub(1)) {
                    if !(v > 0.0 && v < std::f64::consts::PI) {
                        return Err(GeometryError::Chart(format!(
                            "sphere chart needs 0 < x^{} < pi, got {v}",
                            i + 1
                        )));
                    }
                }
            }
            Family::HyperbolicChart { .. } => {
                if x[n - 1] <= 0.0 {
                    return Err(GeometryError::Chart(format!(
                        "half-space chart needs x^{n} > 0, got {}",
                        x[n - 1]
                    )));
                }
            }
            Family::Randers { alpha, b } => {
                alpha.check(x, y)?;
                let norm = randers_b_norm(alpha, b, x, y)?;
                if norm >= 1.0 {
                    return invalid(format!("randers |b|_alpha = {norm} must be < 1 at x = {x:?}"));
                }
            }
            Family::Warped { base, fiber, warp } => {
                let k = base.dim;
                if inf_norm(&y[..k]) < 1e-9 * inf_norm(y) {
                    return Err(GeometryError::SlitDomain { block: "base" });
                }
                if inf_norm(&y[k..]) < 1e-9 * inf_norm(y) {
                    return Err(GeometryError::SlitDomain { block: "fiber" });
                }
                warp.positive_value(&x[..k])?;
                base.check(&x[..k], &y[..k])?;
                fiber.check(&x[k..], &y[k..])?;
            }
            Family::Conformal { base, factor } => {
                base.check(x, y)?;
                let u = factor.value(x)?;
                if !u.is_finite() {
                    return Err(GeometryError::Domain {
                        function: "conformal factor",
                        value: u,
                    });
                }
            }
            Family::Euclidean | Family::RiemannianQuadratic { .. } | Family::MinkowskiNorm { .. } => {}
        }
        Ok(())
    }

    /// `F^2` on jets of the bundle coordinates. Does not run domain checks.
    pub fn energy(&self, x: &[Jet], y: &[Jet]) -> Result<Jet> {
        let zero = y[0].lift_constant(0.0);
        let sum = |it: &mut dyn Iterator<Item = Jet>| it.fold(zero.clone(), |a, b| &a + &b);
        match &self.family {
            Family::Euclidean => Ok(sum(&mut y.iter().map(|v| v * v))),
            Family::RiemannianQuadratic { matrix } => {
                let mut acc = zero.clone();
                for (i, row) in matrix.iter().enumerate() {
                    for (j, a) in row.iter().enumerate() {
                        acc = &acc + &(&a.eval_jet(x, &zero) * &(&y[i] * &y[j]));
                    }
                }
                Ok(acc)
            }
            Family::RoundSphereChart { radius } => {
                let mut weight = zero.lift_constant(radius * radius);
                let mut acc = zero.clone();
                for i in 0..self.dim {
                    acc = &acc + &(&weight * &(&y[i] * &y[i]));
                    if i + 1 < self.dim {
                        let s = x[i].sin();
                        weight = &weight * &(&s * &s);
                    }
                }
                Ok(acc)
            }
            Family::HyperbolicChart { radius } => {
                let last = &x[self.dim - 1];
                let w = (last * last).recip()?.scale(radius * radius);
                Ok(&w * &sum(&mut y.iter().map(|v| v * v)))
            }
            Family::Randers { alpha, b } => {
                let a = alpha.energy(x, y)?.sqrt()?;
                let beta = b
                    .iter()
                    .zip(y)
                    .fold(zero.clone(), |acc, (bi, yi)| &acc + &(&bi.eval_jet(x, &zero) * yi));
                let f = &a + &beta;
                Ok(&f * &f)
            }
            Family::MinkowskiNorm { norm, lambda } => {
                let q = sum(&mut y.iter().map(|v| (v * v).powi(2)));
                match norm {
                    MinkowskiKind::Quartic => q.sqrt(),
                    MinkowskiKind::QuarticPerturbed => {
                        let e = sum(&mut y.iter().map(|v| v * v));
                        Ok(&e + &q.sqrt()?.scale(*lambda))
                    }
                }
            }
            Family::Warped { base, fiber, warp } => {
                let k = base.dim;
                let e1 = base.energy(&x[..k], &y[..k])?;
                let e2 = fiber.energy(&x[k..], &y[k..])?;
                let f = warp.eval_jet(&x[..k]);
                Ok(&e1 + &(&(&f * &f) * &e2))
            }
            Family::Conformal { base, factor } => {
                let u = factor.eval_jet(x)?;
                Ok(&u.scale(2.0).exp() * &base.energy(x, y)?)
            }
        }
    }

    /// `F` on jets, with domain checks at the expansion point.
    pub fn finsler_jet(&self, p: &BundlePoint, x: &[Jet], y: &[Jet]) -> Result<Jet> {
        self.check_point(p)?;
        self.energy(x, y)?.sqrt()
    }
}

/// `|b|_alpha` at `x`, using the fiber Hessian of `alpha^2`.
fn randers_b_norm(alpha: &MetricSpec, b: &[Poly], x: &[f64], y: &[f64]) -> Result<f64> {
    let n = alpha.dim;
    let p = BundlePoint::new(x.to_vec(), y.to_vec())?;
    let cfg = DiffConfig {
        jet_order: 2,
        ..DiffConfig::default()
    };
    let (xj, yj) = lift(&p, &seed_indices(n, Seed::Fiber), 2, &cfg)?;
    let e = alpha.energy(&xj, &yj)?;
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| 0.5 * e.partial_wrt(&[i, j]).unwrap_or(f64::NAN));
    let bv = nalgebra::DVector::from_iterator(n, b.iter().map(|p| p.eval(x)));
    let inv = a
        .try_inverse()
        .ok_or_else(|| GeometryError::InvalidMetric("randers alpha is singular".into()))?;
    Ok((bv.transpose() * inv * &bv)[(0, 0)].max(0.0).sqrt())
}

/// `F(x, y)`.
pub fn eval_f(spec: &MetricSpec, p: &BundlePoint) -> Result<f64> {
    spec.check_point(p)?;
    let x: Vec<Jet> = p.x().iter().map(|&v| Jet::constant(1, 0, v)).collect();
    let y: Vec<Jet> = p.y().iter().map(|&v| Jet::constant(1, 0, v)).collect();
    let e = spec.energy(&x, &y)?.value();
    if !(e > 0.0) {
        return invalid(format!("F^2 = {e} is not positive"));
    }
    Ok(e.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &[f64], y: &[f64]) -> BundlePoint {
        BundlePoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_norm() {
        let s = MetricSpec::euclidean(2);
        assert_eq!(eval_f(&s, &pt(&[0.0, 0.0], &[3.0, 4.0])).unwrap(), 5.0);
    }

    #[test]
    fn randers_value() {
        let s = MetricSpec::randers(MetricSpec::euclidean(2), vec![Poly::constant(0.5), Poly::constant(0.0)]).unwrap();
        assert!((eval_f(&s, &pt(&[0.0, 0.0], &[1.0, 0.0])).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn randers_convexity_checked_per_point() {
        let s = MetricSpec::randers(MetricSpec::euclidean(1), vec![Poly::monomial(1.0, 0, 1)]).unwrap();
        assert!(eval_f(&s, &pt(&[0.5], &[1.0])).is_ok());
        assert!(matches!(
            eval_f(&s, &pt(&[1.5], &[1.0])),
            Err(GeometryError::InvalidMetric(_))
        ));
    }

    #[test]
    fn sphere_chart_matches_quadratic_form() {
        let s = MetricSpec::round_sphere(2, 2.0).unwrap();
        let (t, y) = (1.1f64, [0.3, -0.7]);
        let expect = (4.0 * (y[0] * y[0] + t.sin().powi(2) * y[1] * y[1])).sqrt();
        assert!((eval_f(&s, &pt(&[t, 0.2], &y)).unwrap() - expect).abs() < 1e-14);
        assert!(matches!(eval_f(&s, &pt(&[-0.1, 0.2], &y)), Err(GeometryError::Chart(_))));
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"family": "randers", "dim": 2,
            "params": {"alpha": {"family": "hyperbolic_chart", "dim": 2},
                       "b": [0.1, [{"c": 0.2, "pow": [1]}]]}}"#;
        let s: MetricSpec = serde_json::from_str(text).unwrap();
        assert_eq!(s.family_name(), "randers");
        let back: MetricSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);
        let e: MetricSpec = serde_json::from_str(r#"{"family": "euclidean", "dim": 3}"#).unwrap();
        assert_eq!(e.dim(), 3);
    }

    #[test]
    fn json_errors_name_the_problem() {
        let err = serde_json::from_str::<MetricSpec>(r#"{"family": "torus", "dim": 2}"#).unwrap_err();
        assert!(err.to_string().contains("torus"));
        let err = serde_json::from_str::<MetricSpec>(r#"{"family": "round_sphere_chart", "dim": 2, "params": {"radius": -1}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("radius"));
    }

    #[test]
    fn warped_rejects_degenerate_blocks() {
        let s = MetricSpec::new(
            2,
            Family::Warped {
                base: Box::new(MetricSpec::euclidean(1)),
                fiber: Box::new(MetricSpec::euclidean(1)),
                warp: WarpFunction::one(),
            },
        )
        .unwrap();
        assert!(matches!(
            eval_f(&s, &pt(&[0.0, 0.0], &[1.0, 0.0])),
            Err(GeometryError::SlitDomain { block: "fiber" })
        ));
        assert!((eval_f(&s, &pt(&[0.0, 0.0], &[3.0, 4.0])).unwrap() - 5.0).abs() < 1e-15);
    }
}
