//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Jet`] carries every Taylor coefficient of a scalar up to a fixed total
//! order in a fixed set of variables. Arithmetic on jets is exact up to that
//! order, so mixed partial derivatives of arbitrary compositions can be read
//! off the coefficients without any step-size error.
//!
//! Derivatives beyond the jet order are taken by [`outer_fd`], a finite
//! difference stencil over whole tensor fields.

mod fd;
mod layout;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use fd::{outer_fd, DiffConfig, FdScheme};
pub use layout::{monomial_count, Layout};

use crate::error::{GeometryError, Result};
use crate::tensor::BundlePoint;
use layout::factorial;

/// Largest supported total order.
pub const MAX_JET_ORDER: usize = 8;

#[derive(Clone)]
pub struct Jet {
    layout: Arc<Layout>,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.nvars())
            .field("order", &self.order())
            .field("value", &self.value())
            .finish()
    }
}

impl Jet {
    pub fn constant(nvars: usize, order: usize, value: f64) -> Jet {
        let layout = Layout::get(nvars, order);
        let mut coeffs = vec![0.0; layout.len()];
        coeffs[0] = value;
        Jet { layout, coeffs }
    }

    /// The independent variable `var`, expanded around `value`.
    pub fn variable(nvars: usize, order: usize, var: usize, value: f64) -> Jet {
        assert!(var < nvars, "variable index {var} out of range for {nvars} variables");
        let mut jet = Jet::constant(nvars, order, value);
        if order > 0 {
            let mut e = vec![0u8; nvars];
            e[var] = 1;
            let idx = jet.layout.index_of(&e).expect("degree-one monomial");
            jet.coeffs[idx] = 1.0;
        }
        jet
    }

    /// A constant sharing this jet's variables and order.
    pub fn lift_constant(&self, value: f64) -> Jet {
        let mut coeffs = vec![0.0; self.coeffs.len()];
        coeffs[0] = value;
        Jet {
            layout: Arc::clone(&self.layout),
            coeffs,
        }
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars()
    }

    pub fn order(&self) -> usize {
        self.layout.order()
    }

    /// The underlying scalar (coefficient of the zero multi-index).
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Taylor coefficient for the monomial with the given exponents.
    pub fn coeff(&self, exponents: &[u8]) -> Option<f64> {
        self.layout.index_of(exponents).map(|i| self.coeffs[i])
    }

    /// Mixed partial derivative `d^|alpha| f / dx^alpha` at the expansion point.
    pub fn partial(&self, exponents: &[u8]) -> Result<f64> {
        let requested = exponents.iter().map(|&e| e as usize).sum();
        let idx = self
            .layout
            .index_of(exponents)
            .ok_or(GeometryError::Capability {
                requested,
                available: self.order(),
            })?;
        Ok(self.coeffs[idx] * self.layout.factorial(idx))
    }

    /// Partial derivative with respect to the listed variables (repeats allowed).
    pub fn partial_wrt(&self, vars: &[usize]) -> Result<f64> {
        let mut e = vec![0u8; self.nvars()];
        for &v in vars {
            e[v] += 1;
        }
        self.partial(&e)
    }

    /// Keep only the terms of total degree `<= order`.
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order() {
            return self.clone();
        }
        let layout = Layout::get(self.nvars(), order);
        let coeffs = self.coeffs[..layout.len()].to_vec();
        Jet { layout, coeffs }
    }

    /// Exact derivative with respect to `var`; the result loses one order.
    pub fn derivative(&self, var: usize) -> Result<Jet> {
        if self.order() == 0 {
            return Err(GeometryError::Capability {
                requested: 1,
                available: 0,
            });
        }
        let layout = Layout::get(self.nvars(), self.order() - 1);
        let mut coeffs = vec![0.0; layout.len()];
        for &(src, dst, factor) in self.layout.derivative_map(var) {
            coeffs[dst as usize] += factor * self.coeffs[src as usize];
        }
        Ok(Jet { layout, coeffs })
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            layout: Arc::clone(&self.layout),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    fn binary(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        assert_eq!(self.nvars(), other.nvars(), "jets over different variable sets");
        let (layout, n) = if self.order() <= other.order() {
            (Arc::clone(&self.layout), self.coeffs.len())
        } else {
            (Arc::clone(&other.layout), other.coeffs.len())
        };
        let coeffs = self.coeffs[..n]
            .iter()
            .zip(&other.coeffs[..n])
            .map(|(a, b)| f(*a, *b))
            .collect();
        Jet { layout, coeffs }
    }

    fn product(&self, other: &Jet) -> Jet {
        assert_eq!(self.nvars(), other.nvars(), "jets over different variable sets");
        let layout = if self.order() <= other.order() {
            Arc::clone(&self.layout)
        } else {
            Arc::clone(&other.layout)
        };
        let mut coeffs = vec![0.0; layout.len()];
        let (a, b) = (&self.coeffs, &other.coeffs);
        for &(i, j, k) in layout.products() {
            coeffs[k as usize] += a[i as usize] * b[j as usize];
        }
        Jet { layout, coeffs }
    }

    /// `f(a0 + h) = sum_k f^(k)(a0) h^k / k!`, given `derivs[k] = f^(k)(a0)`.
    fn compose(&self, derivs: &[f64]) -> Jet {
        let order = self.order();
        debug_assert_eq!(derivs.len(), order + 1);
        let h = self.add_scalar(-self.value());
        let mut acc = self.lift_constant(derivs[order] / factorial(order));
        for k in (0..order).rev() {
            acc = (&acc * &h).add_scalar(derivs[k] / factorial(k));
        }
        acc
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&vec![e; self.order() + 1])
    }

    pub fn ln(&self) -> Result<Jet> {
        let a = self.value();
        if !(a > 0.0) {
            return Err(GeometryError::Domain {
                function: "log",
                value: a,
            });
        }
        let mut d = Vec::with_capacity(self.order() + 1);
        d.push(a.ln());
        for k in 1..=self.order() {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            d.push(sign * factorial(k - 1) / a.powi(k as i32));
        }
        Ok(self.compose(&d))
    }

    /// Real power `a^p`. Integer exponents accept negative bases.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        let a = self.value();
        let integral = p.fract() == 0.0;
        if a == 0.0 && !(integral && p >= 0.0) {
            return Err(GeometryError::Domain {
                function: "pow",
                value: a,
            });
        }
        if a < 0.0 && !integral {
            return Err(GeometryError::Domain {
                function: "pow",
                value: a,
            });
        }
        let mut d = Vec::with_capacity(self.order() + 1);
        let mut falling = 1.0;
        for k in 0..=self.order() {
            let e = p - k as f64;
            let base = if integral { a.powi(e as i32) } else { a.powf(e) };
            d.push(if falling == 0.0 { 0.0 } else { falling * base });
            falling *= p - k as f64;
        }
        Ok(self.compose(&d))
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let a = self.value();
        if !(a > 0.0) {
            return Err(GeometryError::Domain {
                function: "sqrt",
                value: a,
            });
        }
        self.powf(0.5)
    }

    pub fn recip(&self) -> Result<Jet> {
        let a = self.value();
        if a == 0.0 {
            return Err(GeometryError::Domain {
                function: "recip",
                value: a,
            });
        }
        self.powf(-1.0)
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        Ok(self * &other.recip()?)
    }

    pub fn powi(&self, k: u32) -> Jet {
        let mut acc = self.lift_constant(1.0);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        self.compose(&(0..=self.order()).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        self.compose(&(0..=self.order()).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    pub fn cosh(&self) -> Jet {
        let (c, s) = (self.value().cosh(), self.value().sinh());
        self.compose(&(0..=self.order()).map(|k| if k % 2 == 0 { c } else { s }).collect::<Vec<_>>())
    }

    pub fn sinh(&self) -> Jet {
        let (c, s) = (self.value().cosh(), self.value().sinh());
        self.compose(&(0..=self.order()).map(|k| if k % 2 == 0 { s } else { c }).collect::<Vec<_>>())
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.binary(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.binary(rhs, |a, b| a - b)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.product(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}

/// Sum of jets; `None` for an empty iterator.
pub fn jet_sum<'a>(mut it: impl Iterator<Item = &'a Jet>) -> Option<Jet> {
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, j| &acc + j))
}

/// Which bundle coordinates become independent jet variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seed {
    /// All `2n` coordinates: `x^1..x^n` then `y^1..y^n`.
    Both,
    Position,
    Fiber,
}

/// Seeded coordinate jets at `point`.
///
/// Returns `(x, y)` jets over the variable set selected by `seed_vars`: each
/// entry of `seed_vars` is a bundle coordinate index (`0..n` for `x`,
/// `n..2n` for `y`) and becomes one jet variable, in the listed order.
/// Coordinates that are not seeded are constants.
pub fn lift(
    point: &BundlePoint,
    seed_vars: &[usize],
    order: usize,
    cfg: &DiffConfig,
) -> Result<(Vec<Jet>, Vec<Jet>)> {
    if order > cfg.jet_order {
        return Err(GeometryError::Capability {
            requested: order,
            available: cfg.jet_order,
        });
    }
    if seed_vars.is_empty() {
        return Err(GeometryError::Config("lift needs at least one seed variable".into()));
    }
    let n = point.dim();
    let nvars = seed_vars.len();
    let coordinate = |c: usize| -> f64 {
        if c < n {
            point.x()[c]
        } else {
            point.y()[c - n]
        }
    };
    let mut jets: Vec<Jet> = (0..2 * n)
        .map(|c| Jet::constant(nvars, order, coordinate(c)))
        .collect();
    for (var, &c) in seed_vars.iter().enumerate() {
        if c >= 2 * n {
            return Err(GeometryError::Config(format!(
                "seed coordinate {c} out of range for dimension {n}"
            )));
        }
        jets[c] = Jet::variable(nvars, order, var, coordinate(c));
    }
    let y = jets.split_off(n);
    Ok((jets, y))
}

/// Seed variables for the common cases.
pub fn seed_indices(n: usize, seed: Seed) -> Vec<usize> {
    match seed {
        Seed::Both => (0..2 * n).collect(),
        Seed::Position => (0..n).collect(),
        Seed::Fiber => (n..2 * n).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(order: usize) -> DiffConfig {
        DiffConfig {
            jet_order: order,
            ..DiffConfig::default()
        }
    }

    #[test]
    fn bilinear_monomial() {
        let p = BundlePoint::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        let (_, y) = lift(&p, &seed_indices(2, Seed::Fiber), 2, &cfg(4)).unwrap();
        let f = &y[0] * &y[1];
        assert_eq!(f.partial_wrt(&[0, 1]).unwrap(), 1.0);
    }

    #[test]
    fn third_derivative_of_exp() {
        let p = BundlePoint::new(vec![0.3], vec![1.0]).unwrap();
        let (x, _) = lift(&p, &[0], 3, &cfg(4)).unwrap();
        let f = x[0].exp();
        assert!((f.partial_wrt(&[0, 0, 0]).unwrap() - 0.3f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn mixed_partial_of_y_squared_sin_x() {
        let p = BundlePoint::new(vec![0.4], vec![0.7]).unwrap();
        let (x, y) = lift(&p, &seed_indices(1, Seed::Both), 4, &cfg(4)).unwrap();
        let f = &(&y[0] * &y[0]) * &x[0].sin();
        let d = f.partial_wrt(&[0, 1, 1]).unwrap();
        assert!((d - 2.0 * 0.4f64.cos()).abs() < 1e-13);
    }

    #[test]
    fn euclidean_norm_gradient() {
        let p = BundlePoint::new(vec![0.0, 0.0], vec![3.0, 4.0]).unwrap();
        let (_, y) = lift(&p, &seed_indices(2, Seed::Fiber), 2, &cfg(4)).unwrap();
        let f = (&(&y[0] * &y[0]) + &(&y[1] * &y[1])).sqrt().unwrap();
        assert!((f.value() - 5.0).abs() < 1e-15);
        assert!((f.partial_wrt(&[0]).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn cosh_series_at_zero() {
        let t = Jet::variable(1, 4, 0, 0.0);
        let c = t.cosh();
        assert_eq!(c.value(), 1.0);
        assert_eq!(c.partial_wrt(&[0]).unwrap(), 0.0);
        assert_eq!(c.partial_wrt(&[0, 0]).unwrap(), 1.0);
    }

    #[test]
    fn sqrt_domain_error_names_function() {
        let t = Jet::variable(1, 2, 0, -1.0);
        match t.sqrt() {
            Err(GeometryError::Domain { function, .. }) => assert_eq!(function, "sqrt"),
            other => panic!("expected domain error, got {other:?}"),
        }
        assert!(Jet::variable(1, 2, 0, 0.0).ln().is_err());
    }

    #[test]
    fn lift_rejects_excess_order() {
        let p = BundlePoint::new(vec![0.0], vec![1.0]).unwrap();
        assert!(matches!(
            lift(&p, &[0], 5, &cfg(4)),
            Err(GeometryError::Capability { requested: 5, available: 4 })
        ));
    }

    #[test]
    fn derivative_drops_one_order() {
        let t = Jet::variable(2, 3, 0, 0.5);
        let s = Jet::variable(2, 3, 1, -0.2);
        let f = &(&t * &t) * &s;
        let d = f.derivative(0).unwrap();
        assert_eq!(d.order(), 2);
        assert!((d.value() - 2.0 * 0.5 * -0.2).abs() < 1e-15);
        assert!((d.partial_wrt(&[1]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_partials_share_storage() {
        let a = Jet::variable(2, 3, 0, 0.3);
        let b = Jet::variable(2, 3, 1, 1.1);
        let f = (&a * &b).sin();
        assert_eq!(
            f.partial_wrt(&[0, 1]).unwrap().to_bits(),
            f.partial_wrt(&[1, 0]).unwrap().to_bits()
        );
    }

    #[test]
    fn powf_matches_closed_form() {
        let t = Jet::variable(1, 4, 0, 2.0);
        let f = t.powf(-1.5).unwrap();
        // d^3/dt^3 t^-1.5 = (-1.5)(-2.5)(-3.5) t^-4.5
        let expected = -1.5 * -2.5 * -3.5 * 2.0f64.powf(-4.5);
        assert!((f.partial_wrt(&[0, 0, 0]).unwrap() - expected).abs() < 1e-14);
    }
}
