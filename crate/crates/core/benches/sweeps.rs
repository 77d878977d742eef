use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torsion_core::exec::ExecPolicy;
use torsion_core::instance::Instance;
use torsion_core::primes::ProgressionPrime;
use torsion_core::subtorus::{find_certificate, CertificateSearch};
use torsion_core::torsion::{find_mod_root, torsion_univariate, RootBudget};
use torsion_core::{ProductSystem, SparsePoly, TorsionInstance};

const POLICIES: [(&str, ExecPolicy); 2] = [("sequential", ExecPolicy::Sequential), ("parallel", ExecPolicy::Parallel)];

fn fixture(name: &str) -> Instance {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    Instance::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn poly(text: &str, n: usize) -> SparsePoly {
    SparsePoly::parse(text, n).unwrap()
}

/// A contained instance, so the certificate sweep visits every class.
fn certificate_sweep(c: &mut Criterion) {
    let orders = vec![BigUint::from(90u32), BigUint::from(84u32)];
    let sys = ProductSystem::new(vec![vec![
        poly("3*x1^7*x2^2 - 5*x1^3*x2^11 + x1*x2 + 2*x2^5 - 7", 2),
        poly("x1^90 - 1", 2),
    ]])
    .unwrap();
    let mut group = c.benchmark_group("find_certificate");
    group.sample_size(10);
    for (name, policy) in POLICIES {
        let search = CertificateSearch { samples: 0, policy, ..Default::default() };
        group.bench_function(BenchmarkId::new(name, "90x84"), |b| {
            b.iter(|| find_certificate(black_box(&sys), &orders, &search).unwrap())
        });
    }
    group.finish();
}

/// All 128 divisors of 510510 are scanned before answering NO.
fn univariate_scan(c: &mut Criterion) {
    let inst = fixture("sparse_510510.json");
    let system = inst.flat_system();
    let mut group = c.benchmark_group("torsion_univariate");
    group.sample_size(10);
    for (name, policy) in POLICIES {
        group.bench_function(BenchmarkId::new(name, "510510"), |b| {
            b.iter(|| torsion_univariate(black_box(&system), &inst.orders[0], policy).unwrap())
        });
    }
    group.finish();
}

/// A root-free system, so the sweep covers all 120 * 120 points.
fn mod_root_sweep(c: &mut Criterion) {
    let d = BigUint::from(120u32);
    let inst = TorsionInstance::new(
        vec![poly("x1^2 + x2^2 + 3", 2), poly("x1*x2 - 5", 2)],
        vec![d.clone(), d.clone()],
    )
    .unwrap();
    let q = (10_000u32..)
        .find_map(|k| ProgressionPrime::try_new(&d, &BigUint::from(k)))
        .unwrap()
        .q;
    let budget = RootBudget { samples: 0, ..Default::default() };
    let mut group = c.benchmark_group("find_mod_root");
    group.sample_size(10);
    for (name, policy) in POLICIES {
        group.bench_function(BenchmarkId::new(name, "120x120"), |b| {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            b.iter(|| find_mod_root(black_box(&inst), &q, &budget, &mut rng, policy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, certificate_sweep, univariate_scan, mod_root_sweep);
criterion_main!(benches);
