use std::fmt::Write as _;
use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::{BigInt, BigUint};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use torsion_core::exec::ExecPolicy;
use torsion_core::instance::Instance;
use torsion_core::oracle;
use torsion_core::primes::LinnikConfig;
use torsion_core::subtorus::{
    self, AlgorithmParams, CertificateOutcome, CertificateSearch, PrimeChoice, ProductSystem,
};
use torsion_core::torsion::{
    self, PrimePin, RootBudget, TorsionConfig, TorsionInstance, TorsionMode, TorsionOutcome, TorsionWitness,
};
use torsion_core::SparsePoly;

use crate::{Format, InputArgs, Mode, OracleArgs, OracleQuery, SearchArgs, SubtorusArgs, TorsionArgs};

/// Largest `prod d_i` for which containment is decided by exponent reduction.
const REDUCTION_LIMIT: u64 = 10_000_000;
const DEFAULT_SAMPLES: u64 = 1024;
const DEFAULT_SWEEP_CAP: u64 = 50_000_000;
const DEFAULT_K_CAP: u64 = 1_000_000;
const DEFAULT_TRIALS: u64 = 100;

pub struct Report {
    pub body: String,
    pub exit: u8,
}

impl Report {
    fn new(format: Format, text: String, json: Value, exit: u8) -> Report {
        let body = match format {
            Format::Text => text,
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&json).expect("serializable")),
        };
        Report { body, exit }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| anyhow!("invalid {what} entry {x:?}")))
        .collect()
}

fn parse_nat(s: &str, what: &str) -> Result<BigUint> {
    s.trim().parse().map_err(|_| anyhow!("invalid {what}: {s:?}"))
}

fn load(input: &InputArgs) -> Result<Instance> {
    let mut v: Value = match &input.input {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None if input.poly.is_empty() => bail!("no system given: use --input or --poly"),
        None => {
            let products: Vec<Vec<&str>> =
                input.poly.iter().map(|p| p.split(';').map(str::trim).collect()).collect();
            json!({ "system": products })
        }
    };
    if let Some(orders) = &input.orders {
        let orders: Vec<BigUint> = parse_list(orders, "order")?;
        v["orders"] = json!(orders.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    if let Some(dbars) = &input.dbars {
        let rows = dbars
            .split(';')
            .map(|r| parse_list::<BigInt>(r, "dbars"))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        v["dbars"] = json!(rows);
    }
    Ok(Instance::from_json(&v)?)
}

fn reject_overrides(search: &SearchArgs, extra: &[(&str, bool)]) -> Result<()> {
    if search.mode != Mode::Conformance {
        return Ok(());
    }
    let mut given: Vec<&str> = extra.iter().filter(|(_, set)| *set).map(|(name, _)| *name).collect();
    if search.sweep_cap.is_some() {
        given.insert(0, "--sweep-cap");
    }
    if !given.is_empty() {
        bail!("{} not allowed in conformance mode", given.join(", "));
    }
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn params_json(p: &AlgorithmParams) -> Value {
    json!({
        "N": p.norm_bound.to_string(),
        "D": p.degree_bound.to_string(),
        "M": p.modulus.to_string(),
        "L": p.lcm.to_string(),
    })
}

pub fn subtorus(args: &SubtorusArgs) -> Result<Report> {
    let search = &args.search;
    reject_overrides(search, &[])?;
    let inst = load(&args.input)?;
    let sys = ProductSystem::new(inst.system.clone())?;
    let mut text = String::new();
    let mut extra = json!({});

    let (sys, orders) = match &inst.dbars {
        Some(dbars) => {
            let general = subtorus::contains_subtorus_general(&sys, dbars)?;
            let orders = general.subtorus.orders.clone();
            writeln!(text, "subtorus: z_i^s_i = 1 with s = ({}) in transformed coordinates", join(&orders))?;
            extra["subtorus_orders"] = json!(orders.iter().map(ToString::to_string).collect::<Vec<_>>());
            (general.transformed, orders)
        }
        None => (sys, inst.orders.clone()),
    };

    let classes: BigUint = orders.iter().product();
    let decision = if classes <= BigUint::from(REDUCTION_LIMIT) {
        Some(subtorus::contains_subtorus_deterministic(&sys, &orders)?)
    } else {
        None
    };

    let prime = match (&search.pin_c, &search.pin_q) {
        (Some(c), _) => PrimeChoice::PinC(parse_nat(c, "--pin-c")?),
        (_, Some(q)) => PrimeChoice::PinQ(parse_nat(q, "--pin-q")?),
        _ => PrimeChoice::Search(LinnikConfig { c0: args.c0, cap_override: None }),
    };
    let config = CertificateSearch {
        prime,
        samples: search.samples.unwrap_or(DEFAULT_SAMPLES),
        sweep_cap: match search.mode {
            Mode::Conformance => None,
            Mode::Practical => Some(search.sweep_cap.unwrap_or(DEFAULT_SWEEP_CAP)),
        },
        seed: search.seed,
        policy: ExecPolicy::default(),
    };

    let method = if decision.is_some() { "reduction" } else { "certificate" };
    let (answer, exit, report) = if decision == Some(true) {
        ("YES", 0, None)
    } else {
        let report = subtorus::find_certificate(&sys, &orders, &config)?;
        let (answer, exit) = match (&report.outcome, decision) {
            (CertificateOutcome::Found(_), _) => ("NO", 1),
            (_, Some(false)) => ("NO", 1),
            (CertificateOutcome::NotFound { .. }, _) => ("YES", 0),
            (CertificateOutcome::Inconclusive { .. }, _) => ("INCONCLUSIVE", 2),
        };
        (answer, exit, Some(report))
    };

    let mut out = format!("{answer}\nmethod: {method}\n");
    out.push_str(&text);
    let mut j = json!({ "answer": answer, "method": method });
    if let Some(obj) = extra.as_object() {
        for (k, v) in obj {
            j[k] = v.clone();
        }
    }
    if let Some(report) = report {
        match &report.outcome {
            CertificateOutcome::Found(cert) => {
                let verified = subtorus::verify_certificate(cert, &sys, &orders);
                if !verified {
                    bail!("certificate {cert} failed verification");
                }
                writeln!(out, "certificate: {cert}")?;
                writeln!(out, "verified: {verified}")?;
                j["certificate"] = cert.to_json();
                j["verified"] = json!(verified);
            }
            CertificateOutcome::NotFound { q, c, .. } => {
                writeln!(out, "exhausted: q={q} c={c}")?;
                j["exhausted"] = json!({ "q": q.to_string(), "c": c.to_string() });
            }
            CertificateOutcome::Inconclusive { q, reason } => {
                writeln!(out, "certificate: none at q={q} ({reason})")?;
                j["inconclusive"] = json!({ "q": q.to_string(), "reason": reason });
            }
        }
        let p = &report.params;
        writeln!(out, "params: N={} D={} M={} L={}", p.norm_bound, p.degree_bound, p.modulus, p.lcm)?;
        writeln!(out, "samples: {} swept: {}", report.samples_tried, report.points_swept)?;
        j["params"] = params_json(p);
        j["samples_tried"] = json!(report.samples_tried);
        j["points_swept"] = json!(report.points_swept);
    }
    Ok(Report::new(args.input.format, out, j, exit))
}

fn torsion_instance(inst: &Instance) -> Result<TorsionInstance> {
    let polys: Vec<SparsePoly> = inst
        .system
        .iter()
        .map(|fs| fs.iter().fold(SparsePoly::constant(inst.num_vars, 1), |acc, f| acc.multiply(f)))
        .collect();
    Ok(TorsionInstance::new(polys, inst.orders.clone())?)
}

pub fn torsion(args: &TorsionArgs) -> Result<Report> {
    let search = &args.search;
    reject_overrides(search, &[("--k-cap", args.k_cap.is_some()), ("--trials", args.trials.is_some())])?;
    let inst = torsion_instance(&load(&args.input)?)?;

    let verdict = if inst.num_vars() == 1 {
        if search.pin_c.is_some() || search.pin_q.is_some() || !args.witness.is_empty() {
            bail!("--pin-c, --pin-q and --witness apply to multivariate inputs only");
        }
        torsion::torsion_univariate(inst.system(), &inst.orders()[0], ExecPolicy::default())?
    } else {
        let mode = match search.mode {
            Mode::Conformance => TorsionMode::Conformance,
            Mode::Practical => TorsionMode::Practical {
                k_cap: match &args.k_cap {
                    Some(k) => parse_nat(k, "--k-cap")?,
                    None => BigUint::from(DEFAULT_K_CAP),
                },
                trials: match &args.trials {
                    Some(t) => parse_nat(t, "--trials")?,
                    None => BigUint::from(DEFAULT_TRIALS),
                },
            },
        };
        let pin = match (&search.pin_c, &search.pin_q) {
            (Some(c), _) => Some(PrimePin::C(parse_nat(c, "--pin-c")?)),
            (_, Some(q)) => Some(PrimePin::Q(parse_nat(q, "--pin-q")?)),
            _ => None,
        };
        let hints = args
            .witness
            .iter()
            .map(|w| parse_list::<BigUint>(w, "--witness"))
            .collect::<Result<Vec<_>>>()?;
        let config = TorsionConfig {
            mode,
            aph_c: args.aph_c,
            pin,
            budget: RootBudget {
                hints,
                samples: search.samples.unwrap_or(DEFAULT_SAMPLES),
                sweep_cap: match search.mode {
                    Mode::Conformance => None,
                    Mode::Practical => Some(search.sweep_cap.unwrap_or(DEFAULT_SWEEP_CAP)),
                },
            },
            policy: ExecPolicy::default(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
        torsion::torsion_multivariate(&inst, &config, &mut rng)?
    };

    let mut j = verdict.to_json();
    let mut out = format!("{verdict}\n");
    if let TorsionOutcome::Yes(TorsionWitness::ModPrime { q, t }) = &verdict.outcome {
        let verified = torsion::verify_mod_root(&inst, q, t);
        if !verified {
            bail!("witness {verdict} failed verification");
        }
        writeln!(out, "verified: true")?;
        j["verified"] = json!(true);
    }
    let p = &verdict.provenance;
    writeln!(out, "algorithm: {}", p.algorithm)?;
    writeln!(out, "conforming: {}", p.conforming)?;
    writeln!(out, "M: {}", p.m)?;
    if let Some(n) = p.divisors_scanned {
        writeln!(out, "divisors scanned: {n}")?;
    }
    if let Some(b) = &p.bounds {
        writeln!(out, "bounds: E={} sigma={:.6} C={} L={} K={} J={}", b.e, b.sigma, b.c, b.l, b.k, b.j)?;
    }
    if let (Some(k), Some(t)) = (&p.k_cap, &p.trials) {
        writeln!(out, "sampling: K={k} J={t} draws=({})", join(&p.draws))?;
    }
    if let (Some(q), Some(c)) = (&p.q, &p.c) {
        writeln!(out, "prime: q={q} c={c}")?;
    }
    if let Some(s) = &p.search {
        writeln!(
            out,
            "search: hints={} samples={} swept={} space={}",
            s.hints_checked, s.samples_tried, s.points_swept, s.space
        )?;
    }
    let exit = match verdict.outcome {
        TorsionOutcome::Yes(_) => 0,
        TorsionOutcome::No => 1,
        TorsionOutcome::Inconclusive(_) => 2,
        TorsionOutcome::Failed(_) => 3,
    };
    Ok(Report::new(args.input.format, out, j, exit))
}

fn single_univariate(inst: &Instance) -> Result<(SparsePoly, BigUint)> {
    let polys = torsion_instance(inst)?;
    match (polys.system(), polys.orders()) {
        ([f], [d]) => Ok((f.clone(), d.clone())),
        _ => bail!("expected one univariate polynomial and one order"),
    }
}

pub fn oracle(args: &OracleArgs) -> Result<Report> {
    match &args.query {
        OracleQuery::Cyclotomic { m, format } => {
            if *m == 0 {
                bail!("cyclotomic index must be positive");
            }
            let phi = oracle::cyclotomic(*m);
            Ok(Report::new(*format, format!("{phi}\n"), json!({ "m": m, "poly": phi.to_string() }), 0))
        }
        OracleQuery::Resultant(input) => {
            let (f, d) = single_univariate(&load(input)?)?;
            let res = oracle::cyclic_resultant(&f, &d)?;
            let text = format!("|Res(f, x^{d} - 1)| = {}\nsign: {}\n", res.magnitude, res.sign);
            let j = json!({ "d": d.to_string(), "magnitude": res.magnitude.to_string(), "sign": res.sign });
            Ok(Report::new(input.format, text, j, 0))
        }
        OracleQuery::BruteForce { input, cap } => {
            let inst = torsion_instance(&load(input)?)?;
            match oracle::brute_force_torsion_capped(&inst, *cap)? {
                Some(idx) => {
                    let j = json!({ "found": true, "M": idx.m, "a": idx.a });
                    Ok(Report::new(input.format, format!("{idx}\n"), j, 0))
                }
                None => Ok(Report::new(input.format, "none\n".into(), json!({ "found": false }), 1)),
            }
        }
        OracleQuery::Exceptional { input, q } => {
            let (f, d) = single_univariate(&load(input)?)?;
            let q = parse_nat(q, "--q")?;
            let hit = oracle::exceptional_prime_check(&f, &d, &q)?;
            let j = json!({ "q": q.to_string(), "d": d.to_string(), "exceptional": hit });
            Ok(Report::new(input.format, format!("{hit}\n"), j, 0))
        }
    }
}
