use finsler::connection::chern_coefficients;
use finsler::jet::DiffConfig;
use finsler::metric::{cartan_tensor, eval_f, fundamental_tensor};
use finsler::sampling::Sampler;
use finsler::tensor::BundlePoint;
use finsler::zoo::{self, ZooMetric};
use proptest::prelude::*;

fn pick(idx: usize, seed: u64) -> (ZooMetric, BundlePoint) {
    let all = zoo::all();
    let z = all[idx % all.len()].clone();
    let p = Sampler::new(1, seed).sample(&z.spec).unwrap().remove(0);
    (z, p)
}

fn scaled(p: &BundlePoint, c: f64) -> BundlePoint {
    BundlePoint::new(p.x().to_vec(), p.y().iter().map(|v| c * v).collect()).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(u, v)| (u - v).abs() <= tol * (1.0 + v.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn f_is_positively_homogeneous(idx in 0usize..64, seed in 0u64..1000, c in 0.1f64..5.0) {
        let (z, p) = pick(idx, seed);
        let a = eval_f(&z.spec, &p).unwrap();
        let b = eval_f(&z.spec, &scaled(&p, c)).unwrap();
        prop_assert!((b - c * a).abs() < 1e-12 * (1.0 + c * a), "{}", z.name);
    }

    #[test]
    fn fundamental_tensor_is_zero_homogeneous(idx in 0usize..64, seed in 0u64..1000, c in 0.1f64..5.0) {
        let (z, p) = pick(idx, seed);
        let cfg = DiffConfig::default();
        let g = fundamental_tensor(&z.spec, &p, &cfg).unwrap();
        let gc = fundamental_tensor(&z.spec, &scaled(&p, c), &cfg).unwrap();
        prop_assert!(close(gc.g.components(), g.g.components(), 1e-9), "{}", z.name);
        let n = p.dim();
        let mut yy = 0.0;
        for i in 0..n {
            for j in 0..n {
                yy += g.g.get(&[i, j]) * p.y()[i] * p.y()[j];
            }
        }
        prop_assert!((yy - g.f_value.powi(2)).abs() < 1e-10 * (1.0 + yy), "{}", z.name);
    }

    #[test]
    fn cartan_annihilates_y(idx in 0usize..64, seed in 0u64..1000) {
        let (z, p) = pick(idx, seed);
        let a = cartan_tensor(&z.spec, &p, &DiffConfig::default()).unwrap();
        let n = p.dim();
        for j in 0..n {
            for k in 0..n {
                let s: f64 = (0..n).map(|i| p.y()[i] * a.get(&[i, j, k])).sum();
                prop_assert!(s.abs() < 1e-9, "{}: y^i A_i{j}{k} = {s:e}", z.name);
            }
        }
    }

    #[test]
    fn spray_connection_degrees(idx in 0usize..64, seed in 0u64..1000, c in 0.2f64..4.0) {
        let (z, p) = pick(idx, seed);
        let cfg = DiffConfig::default();
        let a = chern_coefficients(&z.spec, &p, &cfg).unwrap();
        let b = chern_coefficients(&z.spec, &scaled(&p, c), &cfg).unwrap();
        let g2: Vec<f64> = a.spray.iter().map(|v| c * c * v).collect();
        let n1: Vec<f64> = a.nonlinear.iter().map(|v| c * v).collect();
        prop_assert!(close(&b.spray, &g2, 1e-9), "{}: spray", z.name);
        prop_assert!(close(&b.nonlinear, &n1, 1e-9), "{}: nonlinear", z.name);
        prop_assert!(close(&b.gamma, &a.gamma, 1e-9), "{}: gamma", z.name);
        // Euler relation N^i_j y^j = 2 G^i
        let n = p.dim();
        for i in 0..n {
            let s: f64 = (0..n).map(|j| a.n(i, j) * p.y()[j]).sum();
            prop_assert!((s - 2.0 * a.spray[i]).abs() < 1e-9 * (1.0 + s.abs()), "{}: Euler", z.name);
        }
    }
}

#[test]
fn sampler_is_seeded() {
    for z in zoo::all() {
        assert_eq!(Sampler::new(4, 9).sample(&z.spec).unwrap(), Sampler::new(4, 9).sample(&z.spec).unwrap());
    }
}
