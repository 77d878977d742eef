mod common;

use common::{big, conforming_primes, nonzero_poly, poly, random_poly};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torsion_core::exec::ExecPolicy;
use torsion_core::oracle::{brute_force_torsion, cyclotomic, eval_at_torsion_point, DensePoly, TorsionIndexVector};
use torsion_core::primes::{distinct_prime_factors, divisors};
use torsion_core::torsion::{
    find_mod_root, g_delta, kps_bounds, torsion_univariate, verify_mod_root, RootBudget, RootOutcome,
    TorsionOutcome, TorsionWitness,
};
use torsion_core::{SparsePoly, TorsionInstance};

fn univariate_with_roots() -> impl Strategy<Value = (SparsePoly, u64)> {
    // half the cases get a planted cyclotomic factor so YES answers are common
    (nonzero_poly(1, 5, 40, 6), 1u64..=120, any::<bool>(), any::<u16>()).prop_map(|(f, d, plant, pick)| {
        if !plant {
            return (f, d);
        }
        let ds = divisors(&big(d)).unwrap();
        let delta = ds[pick as usize % ds.len()].clone();
        let phi = cyclotomic(usize::try_from(&delta).unwrap());
        let phi = SparsePoly::from_terms(
            1,
            phi.coeffs().iter().enumerate().map(|(i, c)| (vec![BigUint::from(i)], c.clone())),
        );
        (f.multiply(&phi), d)
    })
}

fn dense(f: &SparsePoly) -> DensePoly {
    DensePoly::from_sparse(f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn univariate_matches_brute_force((f, d) in univariate_with_roots(), g in poly(1, 3, 30, 4)) {
        let system = if g.is_zero() { vec![f] } else { vec![f.clone(), f.multiply(&g)] };
        let verdict = torsion_univariate(&system, &big(d), ExecPolicy::default()).unwrap();
        let inst = TorsionInstance::new(system, vec![big(d)]).unwrap();
        let exact = brute_force_torsion(&inst).unwrap();
        prop_assert_eq!(verdict.is_yes(), exact.is_some());
        if let TorsionOutcome::Yes(TorsionWitness::RootOfUnity { delta, index }) = &verdict.outcome {
            prop_assert!(big(d) % delta == BigUint::from(0u32));
            let index = index.as_ref().unwrap();
            prop_assert!(eval_at_torsion_point(inst.system(), index).unwrap());
            // no smaller order works
            for e in divisors(delta).unwrap().iter().filter(|e| *e < delta) {
                let a = u64::try_from(big(d) / e % big(d)).unwrap();
                let point = TorsionIndexVector { m: d, a: vec![a] };
                prop_assert!(!eval_at_torsion_point(inst.system(), &point).unwrap());
            }
        }
    }

    #[test]
    fn mod_root_witnesses_reverify(
        system in prop::collection::vec(nonzero_poly(2, 3, 6, 2), 1..=2),
        d in prop::collection::vec(1u64..=6, 2),
        seed in any::<u64>(),
    ) {
        let inst = TorsionInstance::new(system, vec![big(d[0]), big(d[1])]).unwrap();
        let m = inst.lcm_order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exact = brute_force_torsion(&inst).unwrap();
        for q in conforming_primes(&m, 500) {
            let budget = RootBudget { samples: 8, ..Default::default() };
            let search = find_mod_root(&inst, &q, &budget, &mut rng, ExecPolicy::default()).unwrap();
            match search.outcome {
                RootOutcome::Found(t) => prop_assert!(verify_mod_root(&inst, &q, &t)),
                RootOutcome::NotFound => prop_assert!(exact.is_none(), "q = {} missed an exact torsion point", q),
                RootOutcome::Inconclusive(r) => prop_assert!(false, "unbounded sweep gave up: {}", r),
            }
        }
    }
}

#[test]
fn g_delta_vanishes_exactly_at_non_primitive_roots() {
    for delta in 1..=200usize {
        let g = dense(&g_delta(&big(delta as u64)).unwrap());
        for e in (1..delta).filter(|e| delta % e == 0) {
            assert!(g.rem_monic(&cyclotomic(e)).is_zero(), "delta = {delta}, order {e}");
        }
        assert!(!g.rem_monic(&cyclotomic(delta)).is_zero(), "delta = {delta}");
        // exact division into x^delta - 1 holds precisely for 1 and prime powers
        let prime_power = distinct_prime_factors(&big(delta as u64)).unwrap().len() <= 1;
        let divides = DensePoly::x_pow_minus_one(delta).div_exact_monic(&g).is_some();
        assert_eq!(divides, prime_power, "delta = {delta}");
    }
}

#[test]
fn spurious_roots_stay_under_the_height_ceiling() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..400 {
        let f = random_poly(&mut rng, 2, 3, 5, 3);
        let d = [rng.gen_range(1..=6u64), rng.gen_range(1..=6u64)];
        let inst = TorsionInstance::new(vec![f], vec![big(d[0]), big(d[1])]).unwrap();
        if brute_force_torsion(&inst).unwrap().is_some() {
            continue;
        }
        checked += 1;
        let mut spurious = 0u64;
        for q in conforming_primes(&inst.lcm_order(), 500) {
            let search = find_mod_root(&inst, &q, &RootBudget::default(), &mut rng, ExecPolicy::default()).unwrap();
            if let RootOutcome::Found(t) = search.outcome {
                assert!(verify_mod_root(&inst, &q, &t));
                spurious += 1;
            }
        }
        let l = kps_bounds(&inst, 1.0).unwrap().l;
        assert!(big(spurious) <= l, "{spurious} spurious primes exceed L = {l}");
    }
    assert!(checked > 50, "too few torsion-free instances: {checked}");
}
