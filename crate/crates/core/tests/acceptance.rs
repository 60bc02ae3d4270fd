//! Acceptance suite. Runs every criterion in order and prints one line per
//! criterion; exits non-zero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use convex_growth::audit::{audit_corpus, Auditor, CsMode, Theorem, Verdict};
use convex_growth::energy::{energy_via_sums, energy_with};
use convex_growth::family::{derive_seed, generate, growth_scan, random_uniform, rng_from_seed, FamilyKind, FamilySpec};
use convex_growth::fixtures::{chain_entries, Fixtures};
use convex_growth::incidence::{build_instance, count_incidences_with, st_bound_holds};
use convex_growth::{ConvexFn, Exec, NumberSet, Scalar};
use num_bigint::BigInt;
use rand::Rng;

const SEED: u64 = 20_240_611;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn rational_set<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> NumberSet {
    let n = rng.gen_range(lo..=hi);
    random_uniform(rng, n, 1_000_000, 1_000_000, false).unwrap()
}

fn exact_inequalities() -> Outcome {
    let auditor = Auditor { digits: 30, exec: Exec::Sequential };
    let mut rng = rng_from_seed(derive_seed(SEED, 1));
    let start = Instant::now();
    let mut checks = 0usize;
    for i in 0..1000 {
        let a = rational_set(&mut rng, 2, 64);
        let b = rational_set(&mut rng, 2, 64);
        let mut reports = vec![auditor.lemma_e15(&a, &b).unwrap(), auditor.holder(&a).unwrap()];
        for mode in [CsMode::Sum, CsMode::Difference, CsMode::Cross(b.clone())] {
            reports.extend(auditor.cauchy_schwarz(&a, &mode).unwrap());
        }
        checks += reports.len();
        if let Some(r) = reports.iter().find(|r| r.verdict != Verdict::Pass) {
            return fail(format!("set {i}: {} {:?}: {} vs {}", r.name, r.verdict, r.lhs_decimal, r.rhs_decimal));
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return fail(format!("{checks} checks passed but took {t:.1?} (budget 60s)"));
    }
    pass(format!("{checks} exact checks on 1000 set pairs, 0 FAIL, {t:.1?}"))
}

/// `#{(a, b, a', b') : a - b = a' - b'}` by direct enumeration.
fn quadruple_oracle(a: &NumberSet, b: &NumberSet) -> u128 {
    let mut count = 0u128;
    for x in a {
        for y in b {
            let d = x - y;
            for x2 in a {
                for y2 in b {
                    if x2 - y2 == d {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn energy_oracle() -> Outcome {
    let mut rng = rng_from_seed(derive_seed(SEED, 2));
    for i in 0..100 {
        // small numerators so that coincidences actually occur
        let (na, nb) = (rng.gen_range(1..=16), rng.gen_range(1..=16));
        let a = random_uniform(&mut rng, na, 24, 3, false).unwrap();
        let b = random_uniform(&mut rng, nb, 24, 3, false).unwrap();
        let via_delta = energy_with(&a, &b, Exec::Sequential).unwrap();
        let via_sigma = energy_via_sums(&a, &b).unwrap();
        let brute = quadruple_oracle(&a, &b);
        if via_delta != brute || via_sigma != brute {
            return fail(format!("pair {i}: delta {via_delta}, sigma {via_sigma}, oracle {brute}"));
        }
    }
    pass("100 pairs: delta route = sigma route = quadruple count")
}

fn ap_closed_form() -> Outcome {
    for n in 2..=512i64 {
        let a = NumberSet::from_ints(0..n);
        let e = energy_with(&a, &a, Exec::Sequential).unwrap();
        let direct: u128 = (-(n - 1)..n).map(|s| ((n - s.abs()) as u128).pow(2)).sum();
        let closed = (2 * (n as u128).pow(3) + n as u128) / 3;
        if e != direct || e != closed {
            return fail(format!("n={n}: energy {e}, direct sum {direct}, closed form {closed}"));
        }
    }
    pass("E(AP_n) = (2n^3+n)/3 for n = 2..512")
}

/// Integer form of the incidence bound: with `x = I - 4P - L > 0`,
/// `x <= 4 (PL)^{2/3}` iff `x^3 <= 64 (PL)^2`.
fn st_oracle(i: u64, p: u64, l: u64) -> bool {
    let x = BigInt::from(i) - BigInt::from(4 * p + l);
    x <= BigInt::from(0) || x.pow(3) <= BigInt::from(64) * BigInt::from(p as u128 * l as u128).pow(2)
}

struct StInstance {
    f: ConvexFn,
    a: NumberSet,
    b: NumberSet,
    c: NumberSet,
}

fn small_set<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> NumberSet {
    let mut v = std::collections::BTreeSet::new();
    while v.len() < n {
        v.insert(rng.gen_range(lo..=hi));
    }
    NumberSet::from_ints(v)
}

fn st_instances() -> Vec<StInstance> {
    let mut rng = rng_from_seed(derive_seed(SEED, 4));
    (0..200)
        .map(|i| {
            let f = if i % 2 == 0 { ConvexFn::Square } else { ConvexFn::Reciprocal };
            let (na, nb, nc) = (rng.gen_range(1..=16), rng.gen_range(1..=16), rng.gen_range(1..=16));
            match (f, i % 4 < 2) {
                // dense integer grids, where curves share many points
                (ConvexFn::Square, true) => StInstance {
                    f,
                    a: small_set(&mut rng, na, 0, 20),
                    b: small_set(&mut rng, nb, -10, 10),
                    c: small_set(&mut rng, nc, -40, 40),
                },
                (_, true) => {
                    // A inside 1/k, B and C on a fine grid
                    let a = NumberSet::from_vec(
                        small_set(&mut rng, na, 1, 24).iter().map(Scalar::recip).collect(),
                    );
                    StInstance {
                        f,
                        a,
                        b: small_set(&mut rng, nb, -8, 8),
                        c: small_set(&mut rng, nc, -8, 8),
                    }
                }
                _ => StInstance {
                    f,
                    a: random_uniform(&mut rng, na, 1000, 12, true).unwrap(),
                    b: random_uniform(&mut rng, nb, 1000, 12, false).unwrap(),
                    c: random_uniform(&mut rng, nc, 1000, 12, false).unwrap(),
                },
            }
        })
        .collect()
}

fn st_bound(instances: &[StInstance]) -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cap_ok = true;
    let mut cap_detail = String::new();
    let mut max_through = 0;
    for (k, inst) in instances.iter().enumerate() {
        let (p, l) = build_instance(inst.f, &inst.a, &inst.b, &inst.c).unwrap();
        let r = count_incidences_with(&p, &l, &[1, 2, 3], Exec::Sequential, 30).unwrap();
        let exact = st_bound_holds(r.incidences, r.points, r.curves).unwrap();
        if !r.st_holds || !exact || !st_oracle(r.incidences, r.points, r.curves) {
            return (
                fail(format!("instance {k} ({}): I={} P={} L={}", inst.f, r.incidences, r.points, r.curves)),
                fail("not reached"),
            );
        }
        worst = worst.max(r.incidences as f64 / r.st_bound_decimal.parse::<f64>().unwrap());
        let cap = inst.b.len().min(inst.c.len()) as u64;
        max_through = max_through.max(r.max_curves_through_point);
        if r.max_curves_through_point > cap && cap_ok {
            cap_ok = false;
            cap_detail = format!("instance {k}: {} curves through a point, cap {cap}", r.max_curves_through_point);
        }
    }
    let t = start.elapsed();
    let st = if t > Duration::from_secs(120) {
        fail(format!("no violations but took {t:.1?} (budget 120s)"))
    } else {
        pass(format!("200 instances, 0 violations, max I/bound {worst:.4}, {t:.1?}"))
    };
    let cap = if cap_ok {
        pass(format!("200 instances, max curves through a point {max_through}"))
    } else {
        fail(cap_detail)
    };
    (st, cap)
}

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/chain_ratios.json")
}

fn chain_replays() -> Outcome {
    let auditor = Auditor { digits: 30, exec: Exec::default() };
    let mut observed = Vec::new();
    for n in [8usize, 16, 32, 64] {
        let families = [
            ("squares", FamilyKind::Squares, 0),
            ("random-convex", FamilyKind::RandomConvex(Default::default()), derive_seed(SEED, 6)),
        ];
        for (name, kind, seed) in families {
            let a = generate(&FamilySpec { kind, n, seed }).unwrap();
            for t in [Theorem::ImageDifference, Theorem::ImageSum, Theorem::MixedSum] {
                let r = auditor.theorem(t, ConvexFn::Square, &a, None).unwrap();
                if !r.passed {
                    let s = r.steps.iter().find(|s| !s.passed()).unwrap();
                    return fail(format!("{name} n={n} {t}: step {} failed", s.name));
                }
                for (k, v) in chain_entries(&format!("{name}/n={n}"), &r) {
                    let x: f64 = v.parse().unwrap_or(f64::NAN);
                    if !(x.is_finite() && x > 0.0) {
                        return fail(format!("{k}: ratio {v} is not finite and positive"));
                    }
                    observed.push((k, v));
                }
            }
        }
    }
    let path = fixture_path();
    match Fixtures::load(&path).unwrap() {
        None => {
            let mut f = Fixtures::default();
            f.insert(observed.clone());
            f.save(&path).unwrap();
            pass(format!("{} ratios recorded; fixture created at {}", observed.len(), path.display()))
        }
        Some(f) => {
            let drift = f.drift(&observed);
            match drift.first() {
                None => pass(format!("24 chains PASS, {} ratios within 10% of fixtures", observed.len())),
                Some(b) => fail(format!(
                    "{} ratios drifted, e.g. {}: stored {} observed {}",
                    drift.len(),
                    b.key,
                    b.stored,
                    b.observed
                )),
            }
        }
    }
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_convex-growth")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("search.json");
    std::fs::write(
        &cfg,
        r#"{"objective":"diffProdRatio","setSize":10,"iterations":200,"seed":11,"restarts":4,"init":"geometric:3/2"}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let first = run_cli(&["search", "--config", cfg]);
    let second = run_cli(&["search", "--config", cfg]);
    let parallel = run_cli(&["search", "--config", cfg, "--workers", "4"]);
    if first.0 != 0 || first.1.is_empty() {
        return fail(format!("search exited with {}", first.0));
    }
    if first.1 != second.1 {
        return fail("two identical search runs produced different traces");
    }
    if first.1 != parallel.1 {
        return fail("search with 4 workers differs from single-threaded");
    }

    // library-level parallel vs sequential on audits and scans
    let inputs: Vec<(String, NumberSet)> = (0..8)
        .map(|i| {
            let a = generate(&FamilySpec {
                kind: FamilyKind::RandomConvex(Default::default()),
                n: 12 + i,
                seed: derive_seed(SEED, 70 + i as u64),
            })
            .unwrap();
            (format!("set{i:02}"), a)
        })
        .collect();
    let render = |exec: Exec| -> String {
        let auditor = Auditor { digits: 30, exec };
        audit_corpus(&auditor, Theorem::ImageSum, ConvexFn::Square, &inputs)
            .into_iter()
            .map(|(id, r)| format!("{id} {}\n", serde_json::to_string(&r.unwrap()).unwrap()))
            .collect()
    };
    if render(Exec::Sequential) != render(Exec::Parallel) {
        return fail("parallel audit corpus differs from sequential");
    }
    let scan = |exec| growth_scan(&FamilyKind::Squares, ConvexFn::Square, &[16, 32, 64], 0, 30, exec).unwrap().to_tsv();
    if scan(Exec::Sequential) != scan(Exec::Parallel) {
        return fail("parallel scan differs from sequential");
    }
    let audit_cli = |workers: &str| {
        let paths: Vec<String> = inputs
            .iter()
            .map(|(id, a)| {
                let p = dir.path().join(format!("{id}.txt"));
                std::fs::write(&p, a.to_text()).unwrap();
                p.to_str().unwrap().to_string()
            })
            .collect();
        let mut args = vec!["audit", "--theorem", "T1", "--workers", workers, "--input"];
        args.extend(paths.iter().map(String::as_str));
        run_cli(&args)
    };
    if audit_cli("1") != audit_cli("4") {
        return fail("audit CLI with 4 workers differs from single-threaded");
    }
    pass(format!("search traces byte-identical ({} bytes); workers=4 matches workers=1", first.1.len()))
}

fn growth_sanity() -> Outcome {
    let sizes = [64, 128, 256, 512];
    let sq = growth_scan(&FamilyKind::Squares, ConvexFn::Square, &sizes, 0, 30, Exec::default()).unwrap();
    let ap = growth_scan(&FamilyKind::Ap, ConvexFn::Square, &sizes, 0, 30, Exec::default()).unwrap();
    let d = sq.fitted_slope("diffset").unwrap();
    let s = ap.fitted_slope("sumset").unwrap();
    let detail = format!("squares |A-A| slope {d:.4}, AP |A+A| slope {s:.4}");
    if d >= 1.4 && (s - 1.0).abs() <= 0.01 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut run = |name: &'static str, f: &dyn Fn() -> Outcome| {
        let o = f();
        println!("[{}] {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        results.push((name, o));
    };
    run("1 exact inequality suite", &exact_inequalities);
    run("2 energy oracle equivalence", &energy_oracle);
    run("3 AP closed form", &ap_closed_form);
    let instances = st_instances();
    let (st, cap) = st_bound(&instances);
    run("4 incidence bound", &|| Outcome { ok: st.ok, detail: st.detail.clone() });
    run("5 rich-point cap", &|| Outcome { ok: cap.ok, detail: cap.detail.clone() });
    run("6 chain replays", &chain_replays);
    run("7 determinism", &determinism);
    run("8 growth sanity", &growth_sanity);
    let failed = results.iter().filter(|(_, o)| !o.ok).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
