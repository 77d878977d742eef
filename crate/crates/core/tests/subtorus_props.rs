mod common;

use common::{big, poly};
use num_bigint::BigUint;
use proptest::prelude::*;
use torsion_core::subtorus::{
    contains_subtorus_deterministic, find_certificate, verify_certificate, CertificateOutcome, CertificateSearch,
};
use torsion_core::{ProductSystem, SparsePoly};

fn system() -> impl Strategy<Value = (ProductSystem, Vec<BigUint>)> {
    let product = prop::collection::vec(poly(2, 4, 12, 5).prop_filter("nonzero", |p| !p.is_zero()), 1..=3);
    (prop::collection::vec(product, 1..=3), prop::collection::vec(1u64..9, 1..=2)).prop_map(|(products, orders)| {
        (ProductSystem::new(products).unwrap(), orders.into_iter().map(big).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn certificates_verify_and_agree_with_reduction((sys, orders) in system()) {
        let report = find_certificate(&sys, &orders, &CertificateSearch::default()).unwrap();
        let contained = contains_subtorus_deterministic(&sys, &orders).unwrap();
        let p = &report.params;
        match &report.outcome {
            CertificateOutcome::Found(cert) => {
                prop_assert!(!contained);
                prop_assert!(verify_certificate(cert, &sys, &orders));
                prop_assert!(cert.q > p.norm_bound);
                prop_assert!(&cert.q + 1u32 > p.degree_bound);
                prop_assert_eq!(&cert.q % &p.lcm, BigUint::from(1u32) % &p.lcm);
            }
            CertificateOutcome::NotFound { q, .. } => {
                prop_assert!(contained);
                prop_assert!(*q > p.norm_bound);
                prop_assert!(q + 1u32 > p.degree_bound);
            }
            CertificateOutcome::Inconclusive { reason, .. } => {
                prop_assert!(false, "unbounded search gave up: {}", reason);
            }
        }
    }

    #[test]
    fn appending_a_defining_binomial_forces_containment((sys, orders) in system(), var in 0usize..2) {
        let var = var % orders.len();
        let binomial = SparsePoly::binomial_minus_one(sys.num_vars(), var, &orders[var]);
        let products: Vec<Vec<SparsePoly>> = sys
            .products()
            .iter()
            .map(|fs| fs.iter().cloned().chain([binomial.clone()]).collect())
            .collect();
        let extended = ProductSystem::new(products).unwrap();
        prop_assert!(contains_subtorus_deterministic(&extended, &orders).unwrap());
        let report = find_certificate(&extended, &orders, &CertificateSearch::default()).unwrap();
        let not_found = matches!(report.outcome, CertificateOutcome::NotFound { .. });
        prop_assert!(not_found);
    }

    #[test]
    fn tampered_certificates_are_rejected((sys, orders) in system()) {
        let report = find_certificate(&sys, &orders, &CertificateSearch::default()).unwrap();
        if let CertificateOutcome::Found(cert) = report.outcome {
            let mut bad = cert.clone();
            bad.value = (&cert.value + 1u32) % &cert.q;
            prop_assert!(!verify_certificate(&bad, &sys, &orders));
            let mut bad = cert.clone();
            bad.q += 2u32;
            prop_assert!(!verify_certificate(&bad, &sys, &orders));
        }
    }
}
