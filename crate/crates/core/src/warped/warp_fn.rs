use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::jet::Jet;
use crate::metric::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarpKind {
    /// `[c]`
    Constant,
    /// `[c0, c1, ..]`: `c0 + sum c_i x^i` over base coordinates.
    Affine,
    /// `[a, b, c]`: `a cosh(b t + c)`.
    Cosh,
    /// `[a, b, c]`: `a cos(b t + c)`.
    Cos,
    /// `[a, b]`: `a e^(b t)`.
    Exp,
    /// `terms`, or `coeffs` as a polynomial in `t`.
    Poly,
}

/// Warping function `f` on the base of a warped product; `t = x^1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpFunction {
    pub kind: WarpKind,
    #[serde(default)]
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Poly>,
}

impl WarpFunction {
    pub fn new(kind: WarpKind, coeffs: Vec<f64>) -> WarpFunction {
        WarpFunction {
            kind,
            coeffs,
            terms: None,
        }
    }

    pub fn one() -> WarpFunction {
        WarpFunction::new(WarpKind::Constant, vec![1.0])
    }

    pub fn validate(&self, base_dim: usize) -> Result<()> {
        let need = match self.kind {
            WarpKind::Constant => Some(1),
            WarpKind::Exp => Some(2),
            WarpKind::Cosh | WarpKind::Cos => Some(3),
            WarpKind::Affine | WarpKind::Poly => None,
        };
        let bad = |msg: String| Err(GeometryError::Config(format!("warp {:?}: {msg}", self.kind)));
        if let Some(k) = need {
            if self.coeffs.len() != k {
                return bad(format!("expected {k} coefficients, got {}", self.coeffs.len()));
            }
        }
        if self.kind == WarpKind::Affine && (self.coeffs.is_empty() || self.coeffs.len() > base_dim + 1) {
            return bad(format!("expected 1..={} coefficients", base_dim + 1));
        }
        if self.kind == WarpKind::Poly {
            match &self.terms {
                Some(p) if p.arity() > base_dim => return bad("polynomial uses more variables than the base".into()),
                None if self.coeffs.is_empty() => return bad("needs `terms` or `coeffs`".into()),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn eval_jet(&self, x: &[Jet]) -> Jet {
        let t = &x[0];
        let c = &self.coeffs;
        match self.kind {
            WarpKind::Constant => t.lift_constant(c[0]),
            WarpKind::Affine => c[1..]
                .iter()
                .zip(x)
                .fold(t.lift_constant(c[0]), |acc, (ci, xi)| &acc + &xi.scale(*ci)),
            WarpKind::Cosh => t.scale(c[1]).add_scalar(c[2]).cosh().scale(c[0]),
            WarpKind::Cos => t.scale(c[1]).add_scalar(c[2]).cos().scale(c[0]),
            WarpKind::Exp => t.scale(c[1]).exp().scale(c[0]),
            WarpKind::Poly => match &self.terms {
                Some(p) => p.eval_jet(x, t),
                None => c
                    .iter()
                    .rev()
                    .fold(t.lift_constant(0.0), |acc, ci| (&acc * t).add_scalar(*ci)),
            },
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let jets: Vec<Jet> = x.iter().map(|&v| Jet::constant(1, 0, v)).collect();
        self.eval_jet(&jets).value()
    }

    /// `f` at `x`, rejecting non-positive values.
    pub fn positive_value(&self, x: &[f64]) -> Result<f64> {
        let v = self.value(x);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(GeometryError::InvalidWarp { value: v })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_evaluate() {
        assert_eq!(WarpFunction::one().value(&[3.0]), 1.0);
        let e = WarpFunction::new(WarpKind::Exp, vec![2.0, 1.0]);
        assert!((e.value(&[1.0]) - 2.0 * 1f64.exp()).abs() < 1e-14);
        let a = WarpFunction::new(WarpKind::Affine, vec![1.0, 2.0, 3.0]);
        assert_eq!(a.value(&[1.0, 1.0]), 6.0);
    }

    #[test]
    fn non_positive_rejected() {
        let c = WarpFunction::new(WarpKind::Cos, vec![1.0, 1.0, 0.0]);
        assert!(matches!(c.positive_value(&[2.0]), Err(GeometryError::InvalidWarp { .. })));
    }
}
