mod common;

use std::f64::consts::TAU;

use common::{big, nonzero_poly};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use torsion_core::oracle::{cyclic_resultant, eval_at_torsion_point, vanishes_at_primitive_root, DensePoly, TorsionIndexVector};
use torsion_core::subtorus::contains_subtorus_deterministic;
use torsion_core::torsion::g_delta;
use torsion_core::{ProductSystem, SparsePoly};

fn complex_eval(f: &SparsePoly, m: u64, a: &[u64]) -> (f64, f64) {
    f.terms().fold((0.0, 0.0), |(re, im), (e, c)| {
        let k: u64 = e.iter().zip(a).map(|(x, y)| x.to_u64().unwrap() * y % m).sum::<u64>() % m;
        let angle = TAU * k as f64 / m as f64;
        let c = c.to_f64().unwrap();
        (re + c * angle.cos(), im + c * angle.sin())
    })
}

proptest! {
    #[test]
    fn primitive_root_test_matches_bar_reduction(f in nonzero_poly(1, 6, 80, 4), delta in 1u64..=60, plant in any::<bool>()) {
        // planting the cyclotomic factor makes YES cases frequent
        let f = if plant {
            let phi = torsion_core::oracle::cyclotomic(delta as usize);
            f.multiply(&SparsePoly::from_terms(1, phi.coeffs().iter().enumerate().map(|(i, c)| (vec![BigUint::from(i)], c.clone()))))
        } else {
            f
        };
        let g = g_delta(&big(delta)).unwrap();
        let sys = ProductSystem::new(vec![vec![f.clone(), g]]).unwrap();
        let bar = contains_subtorus_deterministic(&sys, &[big(delta)]).unwrap();
        prop_assert_eq!(vanishes_at_primitive_root(&f, &big(delta)).unwrap(), bar);
    }

    #[test]
    fn exact_evaluation_agrees_with_floating_point(
        system in prop::collection::vec(nonzero_poly(2, 5, 20, 5), 1..=2),
        m in 1u64..=40,
        a in prop::collection::vec(0u64..40, 2),
    ) {
        let a: Vec<u64> = a.iter().map(|x| x % m).collect();
        let exact = eval_at_torsion_point(&system, &TorsionIndexVector { m, a: a.clone() }).unwrap();
        let float_zero = system.iter().all(|f| {
            let (re, im) = complex_eval(f, m, &a);
            let scale = f.one_norm().to_f64().unwrap();
            re.hypot(im) <= 1e-6 * scale
        });
        prop_assert_eq!(exact, float_zero);
    }

    #[test]
    fn cyclic_resultant_matches_complex_product(f in nonzero_poly(1, 4, 10, 4), m in 1u64..=30) {
        let r = cyclic_resultant(&f, &big(m)).unwrap();
        let dense = DensePoly::from_sparse(&f).unwrap();
        let norm = f.one_norm().to_f64().unwrap();
        let values: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let angle = TAU * k as f64 / m as f64;
                dense.eval_complex(angle.cos(), angle.sin())
            })
            .collect();
        if r.sign == 0 {
            // a zero resultant is a root of f on the unit circle
            prop_assert!(values.iter().any(|(re, im)| re.hypot(*im) <= 1e-9 * norm));
            return Ok(());
        }
        let (re, im) = values.iter().fold((1.0f64, 0.0f64), |(a, b), (c, d)| (a * c - b * d, a * d + b * c));
        let magnitude = r.magnitude.to_f64().unwrap();
        prop_assert!(im.abs() <= 1e-6 * magnitude, "imaginary part {}", im);
        prop_assert!((re.abs() - magnitude).abs() <= 1e-6 * magnitude, "{} vs {}", re, magnitude);
        prop_assert_eq!(f64::from(r.sign), re.signum() * sign_correction(&f, m));
    }
}

/// `Res(f, x^m - 1) = (-1)^{m deg f} prod_k f(w^k)` for monic `x^m - 1`.
fn sign_correction(f: &SparsePoly, m: u64) -> f64 {
    if (f.total_degree().to_u64().unwrap() * m) % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}
