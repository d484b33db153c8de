use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::tensor::{BundlePoint, TensorValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FdScheme {
    /// `(f(p+h) - f(p-h)) / 2h`, error `O(h^2)`.
    Central2,
    /// Richardson extrapolation of two central differences, error `O(h^4)`.
    Central4Richardson,
}

/// Differentiation settings shared by the jet core and the outer stencil.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffConfig {
    pub jet_order: usize,
    pub fd_step: f64,
    pub fd_scheme: FdScheme,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            jet_order: 4,
            fd_step: 1e-4,
            fd_scheme: FdScheme::Central4Richardson,
        }
    }
}

impl DiffConfig {
    pub fn validate(&self) -> Result<()> {
        if self.jet_order < 2 || self.jet_order > super::MAX_JET_ORDER {
            return Err(GeometryError::Config(format!(
                "jet order must lie in 2..={}, got {}",
                super::MAX_JET_ORDER,
                self.jet_order
            )));
        }
        if !(self.fd_step > 1e-8 && self.fd_step < 1e-1) {
            return Err(GeometryError::Config(format!(
                "finite-difference step must lie in (1e-8, 1e-1), got {}",
                self.fd_step
            )));
        }
        Ok(())
    }
}

/// Componentwise derivative of a tensor field along bundle coordinate
/// `direction` (`0..n` for `x`, `n..2n` for `y`).
pub fn outer_fd<F>(field: F, point: &BundlePoint, direction: usize, cfg: &DiffConfig) -> Result<TensorValue>
where
    F: Fn(&BundlePoint) -> Result<TensorValue>,
{
    let h = cfg.fd_step;
    let eval = |offset: f64| -> Result<TensorValue> {
        point
            .shifted(direction, offset)
            .and_then(|p| field(&p))
            .map_err(|e| GeometryError::Stencil {
                coordinate: direction,
                offset,
                source: Box::new(e),
            })
    };
    let central = |step: f64| -> Result<TensorValue> {
        let plus = eval(step)?;
        let minus = eval(-step)?;
        Ok(plus.sub(&minus)?.scale(0.5 / step))
    };
    let derivative = match cfg.fd_scheme {
        FdScheme::Central2 => central(h)?,
        FdScheme::Central4Richardson => {
            let fine = central(h)?;
            let coarse = central(2.0 * h)?;
            fine.scale(4.0 / 3.0).sub(&coarse.scale(1.0 / 3.0))?
        }
    };
    TensorValue::from_components(derivative.signature(), point, derivative.into_components())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Signature;

    fn point() -> BundlePoint {
        BundlePoint::new(vec![1.0, 2.0], vec![0.3, 0.4]).unwrap()
    }

    #[test]
    fn constant_field_has_zero_derivative() {
        let f = |p: &BundlePoint| Ok(TensorValue::from_fn(Signature::new(2, 0, 0), p, |_| 3.5));
        let d = outer_fd(f, &point(), 1, &DiffConfig::default()).unwrap();
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn bilinear_component() {
        let f = |p: &BundlePoint| Ok(TensorValue::scalar(p, p.x()[0] * p.x()[1]));
        let d = outer_fd(f, &point(), 0, &DiffConfig::default()).unwrap();
        assert!((d.components()[0] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn quadratic_field_within_1e_9() {
        let f = |p: &BundlePoint| {
            let (x, y) = (p.x(), p.y());
            Ok(TensorValue::from_components(
                Signature::new(1, 0, 0),
                p,
                vec![x[0] * x[0] + 3.0 * x[0] * x[1], y[1] * x[1] * x[1]],
            )?)
        };
        for scheme in [FdScheme::Central2, FdScheme::Central4Richardson] {
            let cfg = DiffConfig {
                fd_scheme: scheme,
                ..DiffConfig::default()
            };
            let d = outer_fd(f, &point(), 1, &cfg).unwrap();
            assert!((d.components()[0] - 3.0).abs() < 1e-9);
            assert!((d.components()[1] - 2.0 * 0.4 * 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn richardson_is_fourth_order() {
        let f = |p: &BundlePoint| Ok(TensorValue::scalar(p, p.x()[0].sin()));
        let cfg = DiffConfig {
            fd_step: 1e-2,
            ..DiffConfig::default()
        };
        let d = outer_fd(f, &point(), 0, &cfg).unwrap();
        assert!((d.components()[0] - 1.0f64.cos()).abs() < 1e-9);
    }

    #[test]
    fn stencil_failure_reports_location() {
        let f = |p: &BundlePoint| {
            if p.x()[0] > 1.0 {
                Err(GeometryError::Chart("outside".into()))
            } else {
                Ok(TensorValue::scalar(p, 0.0))
            }
        };
        match outer_fd(f, &point(), 0, &DiffConfig::default()) {
            Err(GeometryError::Stencil { coordinate: 0, offset, .. }) => assert!(offset > 0.0),
            other => panic!("expected stencil error, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        assert!(DiffConfig::default().validate().is_ok());
        assert!(DiffConfig { jet_order: 1, ..DiffConfig::default() }.validate().is_err());
        assert!(DiffConfig { fd_step: 0.5, ..DiffConfig::default() }.validate().is_err());
    }
}
