use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::jet::Jet;
use crate::metric::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// `[c]`: `u = c`.
    Constant,
    /// `[c0, c1, .., cn]`: `u = c0 + sum c_i x^i`.
    Affine,
    /// `[s, g]`: `u = -log cosh(s t + g)`.
    LogCosh,
    /// `[mu, s, th]`: `u = -log(mu cos(s t + th))`.
    LogCos,
    /// `[a, b]`: `u = -log(a t + b)`.
    LogLinear,
    /// `[a, b]`: `u = log(a t + b)`.
    Log,
    /// Either `terms` (multivariate) or `coeffs` as a polynomial in `t`.
    Poly,
}

/// A conformal factor `u(x)`; the deformed metric is `e^u F`.
///
/// Profile kinds depend on `t = x^1` only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalFactor {
    pub kind: FactorKind,
    #[serde(default)]
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Poly>,
}

impl ConformalFactor {
    pub fn new(kind: FactorKind, coeffs: Vec<f64>) -> ConformalFactor {
        ConformalFactor {
            kind,
            coeffs,
            terms: None,
        }
    }

    pub fn constant(c: f64) -> ConformalFactor {
        ConformalFactor::new(FactorKind::Constant, vec![c])
    }

    pub fn zero() -> ConformalFactor {
        ConformalFactor::constant(0.0)
    }

    pub fn polynomial(p: Poly) -> ConformalFactor {
        ConformalFactor {
            kind: FactorKind::Poly,
            coeffs: Vec::new(),
            terms: Some(p),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let need = match self.kind {
            FactorKind::Constant => Some(1),
            FactorKind::LogCosh | FactorKind::LogLinear | FactorKind::Log => Some(2),
            FactorKind::LogCos => Some(3),
            FactorKind::Affine | FactorKind::Poly => None,
        };
        let bad = |msg: String| Err(GeometryError::Config(format!("conformal factor {:?}: {msg}", self.kind)));
        if let Some(k) = need {
            if self.coeffs.len() != k {
                return bad(format!("expected {k} coefficients, got {}", self.coeffs.len()));
            }
        }
        if self.kind == FactorKind::Affine && (self.coeffs.is_empty() || self.coeffs.len() > dim + 1) {
            return bad(format!("expected 1..={} coefficients", dim + 1));
        }
        if self.kind == FactorKind::Poly {
            match &self.terms {
                Some(p) if p.arity() > dim => return bad("polynomial uses more variables than the chart".into()),
                None if self.coeffs.is_empty() => return bad("needs `terms` or `coeffs`".into()),
                _ => {}
            }
        }
        if self.coeffs.iter().any(|c| !c.is_finite()) {
            return bad("non-finite coefficient".into());
        }
        Ok(())
    }

    /// `u` on jets of the chart position.
    pub fn eval_jet(&self, x: &[Jet]) -> Result<Jet> {
        let t = &x[0];
        let c = &self.coeffs;
        Ok(match self.kind {
            FactorKind::Constant => t.lift_constant(c[0]),
            FactorKind::Affine => c[1..]
                .iter()
                .zip(x)
                .fold(t.lift_constant(c[0]), |acc, (ci, xi)| &acc + &xi.scale(*ci)),
            FactorKind::LogCosh => -&t.scale(c[0]).add_scalar(c[1]).cosh().ln()?,
            FactorKind::LogCos => {
                let phi = t.scale(c[1]).add_scalar(c[2]).cos().scale(c[0]);
                -&phi.ln().map_err(|_| GeometryError::Domain {
                    function: "log_cos factor",
                    value: phi.value(),
                })?
            }
            FactorKind::LogLinear => {
                let phi = t.scale(c[0]).add_scalar(c[1]);
                -&phi.ln().map_err(|_| GeometryError::Domain {
                    function: "log_linear factor",
                    value: phi.value(),
                })?
            }
            FactorKind::Log => {
                let a = t.scale(c[0]).add_scalar(c[1]);
                a.ln().map_err(|_| GeometryError::Domain {
                    function: "log factor",
                    value: a.value(),
                })?
            }
            FactorKind::Poly => match &self.terms {
                Some(p) => p.eval_jet(x, t),
                None => c
                    .iter()
                    .rev()
                    .fold(t.lift_constant(0.0), |acc, ci| (&acc * t).add_scalar(*ci)),
            },
        })
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let jets: Vec<Jet> = x.iter().map(|&v| Jet::constant(1, 0, v)).collect();
        self.eval_jet(&jets).map(|j| j.value())
    }

    /// `(u, du, d^2u)` at `x` by plain partial derivatives.
    pub fn derivatives(&self, x: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>)> {
        let n = x.len();
        let jets: Vec<Jet> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(n, 2, i, v))
            .collect();
        let u = self.eval_jet(&jets)?;
        let grad = (0..n).map(|i| u.partial_wrt(&[i])).collect::<Result<Vec<_>>>()?;
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                hess[i * n + j] = u.partial_wrt(&[i, j])?;
            }
        }
        Ok((u.value(), grad, hess))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let f: ConformalFactor = serde_json::from_str(r#"{"kind": "log_cosh", "coeffs": [1.0, 0.0]}"#).unwrap();
        f.validate(3).unwrap();
        assert!((f.value(&[0.5, 0.0, 0.0]).unwrap() + 0.5f64.cosh().ln()).abs() < 1e-15);
    }

    #[test]
    fn constant_has_no_derivatives() {
        let (u, g, h) = ConformalFactor::constant(0.7).derivatives(&[0.1, 0.2]).unwrap();
        assert_eq!(u, 0.7);
        assert!(g.iter().chain(&h).all(|v| *v == 0.0));
    }

    #[test]
    fn log_cosh_solves_riccati() {
        let f = ConformalFactor::new(FactorKind::LogCosh, vec![1.0, 0.0]);
        for t in [-1.0, 0.0, 0.7] {
            let (_, g, h) = f.derivatives(&[t]).unwrap();
            assert!((h[0] - g[0] * g[0] + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn univariate_poly_coeffs() {
        let f = ConformalFactor::new(FactorKind::Poly, vec![1.0, 0.0, 2.0]);
        f.validate(2).unwrap();
        assert_eq!(f.value(&[3.0, 9.0]).unwrap(), 19.0);
    }

    #[test]
    fn log_cos_domain() {
        let f = ConformalFactor::new(FactorKind::LogCos, vec![1.0, 1.0, 0.0]);
        assert!(matches!(f.value(&[2.0]), Err(GeometryError::Domain { .. })));
        assert!(ConformalFactor::new(FactorKind::LogCos, vec![1.0]).validate(1).is_err());
    }
}
