use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Monomial bookkeeping shared by every jet with the same `(nvars, order)`.
///
/// Monomials are stored in graded order (total degree first, then
/// lexicographic with the first variable varying slowest). Because the
/// enumeration of each degree does not depend on the truncation order, the
/// layout of order `k` is a prefix of the layout of order `k + 1`; truncation
/// is a slice operation.
#[derive(Debug)]
pub struct Layout {
    nvars: usize,
    order: usize,
    exponents: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
    /// `(i, j, k)`: coefficient `i` times coefficient `j` lands in `k`.
    products: Vec<(u32, u32, u32)>,
    /// Per variable: `(source, target in order - 1 layout, factor)`.
    derivatives: Vec<Vec<(u32, u32, f64)>>,
    /// `alpha!` for each monomial.
    factorials: Vec<f64>,
}

static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Layout>>>> = OnceLock::new();

/// Number of monomials of total degree `<= order` in `nvars` variables.
pub fn monomial_count(nvars: usize, order: usize) -> usize {
    binomial(nvars + order, order)
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn degree_block(nvars: usize, degree: usize, out: &mut Vec<Vec<u8>>) {
    fn rec(var: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if var + 1 == cur.len() {
            cur[var] = left as u8;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e as u8;
            rec(var + 1, left - e, cur, out);
        }
        cur[var] = 0;
    }
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return;
    }
    let mut cur = vec![0u8; nvars];
    rec(0, degree, &mut cur, out);
}

impl Layout {
    /// Shared layout for `(nvars, order)`, built on first use.
    pub fn get(nvars: usize, order: usize) -> Arc<Layout> {
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(l) = cache.lock().expect("layout cache poisoned").get(&(nvars, order)) {
            return Arc::clone(l);
        }
        let built = Arc::new(Layout::build(nvars, order));
        let mut guard = cache.lock().expect("layout cache poisoned");
        Arc::clone(guard.entry((nvars, order)).or_insert(built))
    }

    fn build(nvars: usize, order: usize) -> Layout {
        let mut exponents = Vec::with_capacity(monomial_count(nvars, order));
        let mut degree_end = Vec::with_capacity(order + 1);
        for d in 0..=order {
            degree_block(nvars, d, &mut exponents);
            degree_end.push(exponents.len());
        }
        let lookup: HashMap<Vec<u8>, usize> = exponents
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();

        let degree = |e: &[u8]| e.iter().map(|&v| v as usize).sum::<usize>();
        let mut products = Vec::new();
        let mut sum = vec![0u8; nvars];
        for (i, ei) in exponents.iter().enumerate() {
            let room = order - degree(ei);
            for (j, ej) in exponents[..degree_end[room]].iter().enumerate() {
                for v in 0..nvars {
                    sum[v] = ei[v] + ej[v];
                }
                let k = lookup[&sum];
                products.push((i as u32, j as u32, k as u32));
            }
        }

        let mut derivatives = vec![Vec::new(); nvars];
        if order > 0 {
            let lower = degree_end[order - 1];
            for (src, e) in exponents.iter().enumerate() {
                for (v, list) in derivatives.iter_mut().enumerate() {
                    if e[v] == 0 {
                        continue;
                    }
                    let mut t = e.clone();
                    t[v] -= 1;
                    let dst = lookup[&t];
                    debug_assert!(dst < lower);
                    list.push((src as u32, dst as u32, e[v] as f64));
                }
            }
        }

        let factorials = exponents
            .iter()
            .map(|e| e.iter().map(|&k| factorial(k as usize)).product())
            .collect();

        Layout {
            nvars,
            order,
            exponents,
            lookup,
            products,
            derivatives,
            factorials,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self, index: usize) -> &[u8] {
        &self.exponents[index]
    }

    pub fn index_of(&self, exponents: &[u8]) -> Option<usize> {
        self.lookup.get(exponents).copied()
    }

    pub(crate) fn products(&self) -> &[(u32, u32, u32)] {
        &self.products
    }

    pub(crate) fn derivative_map(&self, var: usize) -> &[(u32, u32, f64)] {
        &self.derivatives[var]
    }

    pub(crate) fn factorial(&self, index: usize) -> f64 {
        self.factorials[index]
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomials() {
        assert_eq!(Layout::get(8, 4).len(), 495);
        assert_eq!(Layout::get(2, 2).len(), 6);
        assert_eq!(Layout::get(3, 0).len(), 1);
    }

    #[test]
    fn lower_order_is_prefix() {
        let hi = Layout::get(4, 4);
        let lo = Layout::get(4, 3);
        for i in 0..lo.len() {
            assert_eq!(hi.exponents(i), lo.exponents(i));
        }
    }
}
