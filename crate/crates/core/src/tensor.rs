//! Points of the slit tangent bundle and dense tensor values attached to them.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// A point `(x, y)` of the slit tangent bundle in one chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct BundlePoint {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl TryFrom<RawPoint> for BundlePoint {
    type Error = GeometryError;

    fn try_from(r: RawPoint) -> Result<BundlePoint> {
        BundlePoint::new(r.x, r.y)
    }
}

impl BundlePoint {
    /// Rejects mismatched lengths and fibers too close to the zero section
    /// (`|y|_inf < 1e-6 * max(1, |x|_inf)`).
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<BundlePoint> {
        if x.len() != y.len() || x.is_empty() {
            return Err(GeometryError::Dimension(format!(
                "bundle point needs x and y of equal nonzero length, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(GeometryError::Config("bundle point has non-finite coordinates".into()));
        }
        let norm = inf_norm(&y);
        let scale = inf_norm(&x).max(1.0);
        if norm < 1e-6 * scale {
            return Err(GeometryError::SlitBundle { norm });
        }
        Ok(BundlePoint { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Bundle coordinate `c`: `x^c` for `c < n`, else `y^(c-n)`.
    pub fn coordinate(&self, c: usize) -> f64 {
        let n = self.dim();
        if c < n {
            self.x[c]
        } else {
            self.y[c - n]
        }
    }

    /// Copy with bundle coordinate `c` shifted by `delta`.
    pub fn shifted(&self, c: usize, delta: f64) -> Result<BundlePoint> {
        let (mut x, mut y) = (self.x.clone(), self.y.clone());
        let n = self.dim();
        if c < n {
            x[c] += delta;
        } else if c < 2 * n {
            y[c - n] += delta;
        } else {
            return Err(GeometryError::Dimension(format!(
                "bundle coordinate {c} out of range for dimension {n}"
            )));
        }
        BundlePoint::new(x, y)
    }

    /// `(x, c y)`.
    pub fn scaled_fiber(&self, c: f64) -> Result<BundlePoint> {
        BundlePoint::new(self.x.clone(), self.y.iter().map(|v| v * c).collect())
    }
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, a| m.max(a.abs()))
}

/// Index signature `(p1, p2; q)`: pullback-covariant slots, horizontal slots,
/// contravariant slots. Lower slots are stored first (pullback then
/// horizontal), followed by the upper slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub pullback: usize,
    pub horizontal: usize,
    pub upper: usize,
}

impl Signature {
    pub const fn new(pullback: usize, horizontal: usize, upper: usize) -> Signature {
        Signature {
            pullback,
            horizontal,
            upper,
        }
    }

    pub const SCALAR: Signature = Signature::new(0, 0, 0);

    pub fn rank(&self) -> usize {
        self.pullback + self.horizontal + self.upper
    }

    /// The slot kinds in storage order.
    pub fn slots(&self) -> Vec<SlotKind> {
        let mut v = vec![SlotKind::Pullback; self.pullback];
        v.extend(std::iter::repeat(SlotKind::Horizontal).take(self.horizontal));
        v.extend(std::iter::repeat(SlotKind::Upper).take(self.upper));
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Pullback,
    Horizontal,
    Upper,
}

/// Dense components of a tensor at a bundle point, row-major over slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorValue {
    signature: Signature,
    dim: usize,
    components: Vec<f64>,
    base: BundlePoint,
}

impl TensorValue {
    pub fn zeros(signature: Signature, base: &BundlePoint) -> TensorValue {
        let dim = base.dim();
        TensorValue {
            signature,
            dim,
            components: vec![0.0; dim.pow(signature.rank() as u32)],
            base: base.clone(),
        }
    }

    pub fn from_components(
        signature: Signature,
        base: &BundlePoint,
        components: Vec<f64>,
    ) -> Result<TensorValue> {
        let dim = base.dim();
        let expected = dim.pow(signature.rank() as u32);
        if components.len() != expected {
            return Err(GeometryError::Dimension(format!(
                "tensor of signature {:?} in dimension {dim} needs {expected} components, got {}",
                signature,
                components.len()
            )));
        }
        Ok(TensorValue {
            signature,
            dim,
            components,
            base: base.clone(),
        })
    }

    /// Build from a component function over multi-indices.
    pub fn from_fn(
        signature: Signature,
        base: &BundlePoint,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> TensorValue {
        let mut t = TensorValue::zeros(signature, base);
        let rank = signature.rank();
        let mut idx = vec![0usize; rank];
        for c in t.components.iter_mut() {
            *c = f(&idx);
            increment(&mut idx, t.dim);
        }
        t
    }

    pub fn scalar(base: &BundlePoint, value: f64) -> TensorValue {
        TensorValue {
            signature: Signature::SCALAR,
            dim: base.dim(),
            components: vec![value],
            base: base.clone(),
        }
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> &BundlePoint {
        &self.base
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<f64> {
        self.components
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.signature.rank());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.components[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.components[o] = value;
    }

    pub fn max_abs(&self) -> f64 {
        inf_norm(&self.components)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> TensorValue {
        let mut out = self.clone();
        out.components.iter_mut().for_each(|c| *c = f(*c));
        out
    }

    pub fn scale(&self, s: f64) -> TensorValue {
        self.map(|c| c * s)
    }

    fn zip(&self, other: &TensorValue, f: impl Fn(f64, f64) -> f64) -> Result<TensorValue> {
        if self.signature != other.signature || self.dim != other.dim {
            return Err(GeometryError::Dimension(format!(
                "cannot combine tensors of signature {:?} and {:?}",
                self.signature, other.signature
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.components.iter_mut().zip(&other.components) {
            *a = f(*a, *b);
        }
        Ok(out)
    }

    pub fn add(&self, other: &TensorValue) -> Result<TensorValue> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TensorValue) -> Result<TensorValue> {
        self.zip(other, |a, b| a - b)
    }

    /// Contract upper slot `upper` with lower slot `lower` (absolute slot
    /// positions). Only one upper with one lower slot may be paired.
    pub fn contract(&self, upper: usize, lower: usize) -> Result<TensorValue> {
        let kinds = self.signature.slots();
        if upper >= kinds.len() || lower >= kinds.len() {
            return Err(GeometryError::Dimension("contraction slot out of range".into()));
        }
        if kinds[upper] != SlotKind::Upper || kinds[lower] == SlotKind::Upper {
            return Err(GeometryError::Dimension(
                "contraction must pair one upper slot with one lower slot".into(),
            ));
        }
        let mut sig = self.signature;
        sig.upper -= 1;
        match kinds[lower] {
            SlotKind::Pullback => sig.pullback -= 1,
            SlotKind::Horizontal => sig.horizontal -= 1,
            SlotKind::Upper => unreachable!(),
        }
        let rank = self.signature.rank();
        let mut out = TensorValue::zeros(sig, &self.base);
        let mut full = vec![0usize; rank];
        let mut reduced = vec![0usize; rank - 2];
        for _ in 0..out.components.len() {
            let mut acc = 0.0;
            for s in 0..self.dim {
                let mut r = reduced.iter();
                for (slot, v) in full.iter_mut().enumerate() {
                    *v = if slot == upper || slot == lower { s } else { *r.next().unwrap() };
                }
                acc += self.get(&full);
            }
            out.set(&reduced, acc);
            increment(&mut reduced, self.dim);
        }
        Ok(out)
    }
}

/// Odometer increment of a multi-index with extent `dim` in every slot.
pub(crate) fn increment(idx: &mut [usize], dim: usize) {
    for v in idx.iter_mut().rev() {
        *v += 1;
        if *v < dim {
            return;
        }
        *v = 0;
    }
}
