use serde::{Deserialize, Serialize};

use crate::jet::Jet;

/// One monomial `coeff * prod_i x_i^pow[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "c")]
    pub coeff: f64,
    #[serde(rename = "pow", default)]
    pub powers: Vec<u32>,
}

/// Polynomial in chart coordinates. Serialized either as a bare number
/// (constant) or as a list of `{"c": .., "pow": [..]}` terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "PolyRepr", into = "PolyRepr")]
pub struct Poly {
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PolyRepr {
    Constant(f64),
    Terms(Vec<Term>),
}

impl From<PolyRepr> for Poly {
    fn from(r: PolyRepr) -> Poly {
        match r {
            PolyRepr::Constant(c) => Poly::constant(c),
            PolyRepr::Terms(terms) => Poly { terms },
        }
    }
}

impl From<Poly> for PolyRepr {
    fn from(p: Poly) -> PolyRepr {
        match p.terms.as_slice() {
            [t] if t.powers.iter().all(|&e| e == 0) => PolyRepr::Constant(t.coeff),
            [] => PolyRepr::Constant(0.0),
            _ => PolyRepr::Terms(p.terms),
        }
    }
}

impl Poly {
    pub fn constant(c: f64) -> Poly {
        Poly {
            terms: vec![Term {
                coeff: c,
                powers: Vec::new(),
            }],
        }
    }

    pub fn new(terms: Vec<Term>) -> Poly {
        Poly { terms }
    }

    /// `coeff * x_var^power`.
    pub fn monomial(coeff: f64, var: usize, power: u32) -> Poly {
        let mut powers = vec![0; var + 1];
        powers[var] = power;
        Poly {
            terms: vec![Term { coeff, powers }],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn plus(mut self, other: Poly) -> Poly {
        self.terms.extend(other.terms);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0)
    }

    /// Highest variable index used, plus one.
    pub fn arity(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.powers.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.powers
                    .iter()
                    .enumerate()
                    .fold(t.coeff, |acc, (i, &e)| acc * x[i].powi(e as i32))
            })
            .sum()
    }

    /// Evaluate on jets; `zero` supplies the variable set and order.
    pub fn eval_jet(&self, x: &[Jet], zero: &Jet) -> Jet {
        let mut acc = zero.lift_constant(0.0);
        for t in &self.terms {
            let mut m = zero.lift_constant(t.coeff);
            for (i, &e) in t.powers.iter().enumerate() {
                if e > 0 {
                    m = &m * &x[i].powi(e);
                }
            }
            acc = &acc + &m;
        }
        acc
    }

    /// Exact partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let e = *t.powers.get(var)?;
                if e == 0 {
                    return None;
                }
                let mut powers = t.powers.clone();
                powers[var] -= 1;
                Some(Term {
                    coeff: t.coeff * e as f64,
                    powers,
                })
            })
            .collect();
        Poly { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let p: Poly = serde_json::from_str("2.5").unwrap();
        assert_eq!(p.eval(&[7.0]), 2.5);
        let q: Poly = serde_json::from_str(r#"[{"c": 1.0}, {"c": 3.0, "pow": [0, 2]}]"#).unwrap();
        assert_eq!(q.eval(&[5.0, 2.0]), 13.0);
        assert_eq!(q.arity(), 2);
    }

    #[test]
    fn derivative_of_monomials() {
        let p = Poly::monomial(2.0, 1, 3).plus(Poly::constant(1.0));
        let d = p.derivative(1);
        assert_eq!(d.eval(&[0.0, 2.0]), 24.0);
        assert!(p.derivative(0).is_zero());
    }

    #[test]
    fn jet_evaluation_matches_values() {
        let p = Poly::monomial(1.5, 0, 2).plus(Poly::monomial(-1.0, 1, 1));
        let x = vec![Jet::variable(2, 3, 0, 0.5), Jet::variable(2, 3, 1, 2.0)];
        let j = p.eval_jet(&x, &x[0]);
        assert!((j.value() - p.eval(&[0.5, 2.0])).abs() < 1e-15);
        assert!((j.partial_wrt(&[0, 0]).unwrap() - 3.0).abs() < 1e-15);
    }
}
