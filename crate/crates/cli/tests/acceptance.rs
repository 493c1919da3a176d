//! Acceptance gate: one test per criterion, one pass line each.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use hl_core::exponents::{
    classify_tuple, conjugate, exponents_critical_iso, exponents_main, exponents_ot,
    exponents_paulino, proven_tuples, regularity_shift, rp_alpha,
    rp_delta, Admissibility,
};
use hl_core::instance::HLInstance;
use hl_core::lab::{perturb_scan, ratio_curve, GrowthExperiment, GrowthVerdict, NormMethod};
use hl_core::norm::{estimate_norm, exact_norm, BallSpec, DEFAULT_BUDGET, DEFAULT_TOL};
use hl_core::scalar::{ExtScalar, Rat};
use hl_core::tensor::{derive_seed, ksz_sample, lift_form, CoefficientTensor};

fn sc(s: &str) -> ExtScalar {
    s.parse().unwrap()
}

fn scl(parts: &[&str]) -> Vec<ExtScalar> {
    parts.iter().map(|p| sc(p)).collect()
}

fn hl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hl"))
}

fn json_values(row: &serde_json::Value) -> Vec<ExtScalar> {
    serde_json::from_value(row["s"]["values"].clone()).unwrap()
}

#[test]
fn criterion_1_table_1_reproduction() {
    let start = Instant::now();
    let out = hl()
        .args(["table", "-m", "9", "-p", "10", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let row = |name: &str| {
        rows.iter()
            .find(|r| r["theorem"] == name && r["applicable"] == true)
            .unwrap_or_else(|| panic!("missing applicable row {name}"))
    };
    assert_eq!(json_values(row("dimant")), vec![sc("10"); 9]);
    assert_eq!(
        json_values(row("ar")),
        scl(&["10", "90/13", "90/17", "30/7", "18/5", "90/29", "90/33", "90/37", "90/41"])
    );
    let main_row = row("main");
    assert_eq!(
        json_values(main_row),
        scl(&["10", "5", "10/3", "5/2", "2", "2", "2", "2", "2"])
    );
    assert_eq!(main_row["s"]["k0"], 5);

    let pretty = hl().args(["table", "-m", "9", "-p", "10"]).output().unwrap();
    let text = String::from_utf8(pretty.stdout).unwrap();
    for decimals in ["6.92", "5.29", "4.28", "3.6", "3.10", "2.72", "2.43", "2.19"] {
        assert!(text.contains(decimals), "pretty table misses {decimals}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1: PASS (table -m 9 -p 10 exact + decimals, {elapsed:?})");
}

#[test]
fn criterion_2_table_2_reproduction() {
    let inst = HLInstance::isotropic(9, sc("10"))
        .unwrap()
        .with_summing(sc("1"), sc("2"))
        .unwrap();
    let s = hl_core::exponents::exponents_vector(&inst).unwrap();
    assert_eq!(
        s.values,
        scl(&["10", "5", "10/3", "5/2", "2", "2", "2", "2", "2"])
    );
    println!("criterion 2: PASS (vector (r,q)=(1,2), m=9, p=10)");
}

#[test]
fn criterion_3_table_3_reproduction() {
    let trunc2 = |x: f64| format!("{:.2}", (x * 100.0).trunc() / 100.0);
    let paulino = exponents_paulino(10).unwrap();
    assert!(paulino.values[0].is_infinite());
    assert_eq!(paulino.values[1], sc("10"));
    let expected = ["6.92", "5.29", "4.28", "3.60", "3.10", "2.72", "2.43", "2.19"];
    for (k, want) in (3..=10).zip(expected) {
        assert_eq!(trunc2(paulino.at(k).to_f64()), want, "paulino s_{k}");
    }
    let critical = exponents_critical_iso(10).unwrap();
    assert_eq!(critical.values[0], ExtScalar::INF);
    assert_eq!(
        critical.values[1..].to_vec(),
        scl(&["10", "5", "10/3", "5/2", "2", "2", "2", "2", "2"])
    );
    assert_eq!(critical.k0, Some(6));
    println!("criterion 3: PASS (Table 3 Paulino decimals + critical corollary, k0 = 6)");
}

#[test]
fn criterion_4_littlewood_four_thirds_bound() {
    let start = Instant::now();
    let ball = BallSpec::new(scl(&["inf", "inf"])).unwrap();
    let t43 = scl(&["4/3", "4/3"]);
    let sqrt2 = 2f64.sqrt();
    for n in [2usize, 4, 8, 16] {
        for trial in 0..100u64 {
            let tensor = ksz_sample(2, n, derive_seed(4, n as u64, trial));
            let mixed = tensor.mixed_norm(&t43).unwrap();
            let norm = exact_norm(&tensor, &ball, DEFAULT_BUDGET).unwrap().value;
            let ratio = mixed / norm;
            assert!(
                ratio <= sqrt2 + 1e-9,
                "ratio {ratio} exceeds sqrt(2) at n = {n}, trial {trial}"
            );
        }
    }
    let hadamard =
        CoefficientTensor::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
    let mixed = hadamard.mixed_norm(&t43).unwrap();
    let norm = exact_norm(&hadamard, &ball, DEFAULT_BUDGET).unwrap().value;
    assert!(((mixed / norm) - sqrt2).abs() < 1e-12, "Hadamard ratio off");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("criterion 4: PASS (400 KSZ + Hadamard ratios <= sqrt(2), {elapsed:?})");
}

#[test]
fn criterion_5_growth_detection() {
    let start = Instant::now();
    let base = GrowthExperiment {
        m: 2,
        p: BallSpec::new(scl(&["inf", "inf"])).unwrap(),
        t: scl(&["1", "1"]),
        n_list: vec![4, 8, 16, 32, 64],
        trials: 20,
        seed: 5,
        norm_method: NormMethod::default(),
    };
    let growing = ratio_curve(&base).unwrap();
    assert!(
        (0.35..=0.65).contains(&growing.slope),
        "slope {} outside [0.35, 0.65]",
        growing.slope
    );
    assert_eq!(growing.verdict, GrowthVerdict::Growing);

    let mut bounded_exp = base.clone();
    bounded_exp.t = scl(&["4/3", "4/3"]);
    let bounded = ratio_curve(&bounded_exp).unwrap();
    assert!(
        (-0.05..=0.05).contains(&bounded.slope),
        "slope {} outside [-0.05, 0.05]",
        bounded.slope
    );
    assert_eq!(bounded.verdict, GrowthVerdict::Bounded);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "criterion 5: PASS (slopes {:.3} Growing / {:.3} Bounded, {elapsed:?})",
        growing.slope, bounded.slope
    );
}

#[test]
fn criterion_6_oracle_equivalence() {
    let ball = BallSpec::new(scl(&["inf", "inf"])).unwrap();
    let mut matches = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<f64> = (0..9).map(|_| StandardNormal.sample(&mut rng)).collect();
        let tensor = CoefficientTensor::new(vec![3, 3], entries).unwrap();
        let exact = exact_norm(&tensor, &ball, DEFAULT_BUDGET).unwrap().value;
        let ms = estimate_norm(&tensor, &ball, 50, seed, DEFAULT_TOL)
            .unwrap()
            .value;
        assert!(ms <= exact + 1e-9, "multistart exceeds oracle at seed {seed}");
        assert!(ms >= 0.98 * exact, "multistart below 0.98x at seed {seed}");
        if (exact - ms).abs() <= 1e-9 {
            matches += 1;
        }
    }
    assert!(matches >= 18, "only {matches}/20 matched within 1e-9");
    println!("criterion 6: PASS (multistart matched oracle on {matches}/20, never above)");
}

#[test]
fn criterion_7_global_sharpness_scan() {
    let inst = HLInstance::isotropic(3, sc("4")).unwrap();
    let s = exponents_main(&inst).unwrap();
    assert_eq!(s.values, scl(&["4", "2", "2"]));
    let scan = perturb_scan(&s, &inst, &scl(&["1/100", "1/10"])).unwrap();
    assert_eq!(scan.len(), 6);
    for entry in &scan {
        assert_eq!(
            entry.classification,
            Admissibility::NonAdmissible,
            "coordinate {} eps {} not NonAdmissible",
            entry.coordinate,
            entry.eps
        );
    }
    assert_eq!(
        classify_tuple(&s, &inst).unwrap(),
        Admissibility::Admissible
    );
    println!("criterion 7: PASS (all 6 decreases of (4,2,2) NonAdmissible, base Admissible)");
}

#[test]
fn criterion_8_identity_chain() {
    let (shifted, valid) =
        regularity_shift(&sc("2"), &scl(&["1", "2"]), &scl(&["4/3", "2"])).unwrap();
    assert!(valid);
    assert_eq!(shifted.values, scl(&["4", "2"]));
    let inst = HLInstance::new(scl(&["4", "2"])).unwrap();
    assert_eq!(exponents_main(&inst).unwrap().values, shifted.values);
    assert_eq!(
        exponents_ot(&sc("4"), &sc("2")).unwrap().values,
        shifted.values
    );
    let mut checked = 0;
    for a in 1..=10i64 {
        for b in 1..=10i64 {
            // p1 = 1 + a/5, eps = p1 * b / 11 keeps 0 < eps < p1
            let p1 = ExtScalar::from_rat(Rat::new(5 + a, 5)).unwrap();
            let eps = ExtScalar::from_rat(p1.as_rat().unwrap() * Rat::new(b, 11)).unwrap();
            let delta = rp_delta(&p1, &eps).unwrap();
            let p2 = ExtScalar::from_rat(p1.as_rat().unwrap() + eps.as_rat().unwrap()).unwrap();
            let alpha = rp_alpha(&p1, &p2).unwrap();
            let lhs = p1.as_rat().unwrap() + delta.as_rat().unwrap();
            assert_eq!(lhs, alpha.as_rat().unwrap(), "p1 = {p1}, eps = {eps}");
            checked += 1;
        }
    }
    assert_eq!(checked, 100);
    println!("criterion 8: PASS (shift = main = ot on (4,2); rp identity on 100 grid points)");
}

#[test]
fn criterion_9_property_suite() {
    // conjugate involution
    for num in 1..=40i64 {
        for den in 1..=5i64 {
            let r = Rat::new(num, den);
            if r < Rat::new(1, 1) {
                continue;
            }
            let p = ExtScalar::from_rat(r).unwrap();
            assert_eq!(conjugate(&conjugate(&p).unwrap()).unwrap(), p);
        }
    }
    assert_eq!(conjugate(&ExtScalar::INF).unwrap(), sc("1"));
    assert_eq!(conjugate(&sc("1")).unwrap(), ExtScalar::INF);

    // mixed-norm monotonicity in each exponent: 50 tensors x 10 pairs
    let pairs: Vec<(Vec<ExtScalar>, Vec<ExtScalar>)> = (0..10)
        .map(|i| {
            let lo = Rat::new(4 + i, 4);
            let hi = lo + Rat::new(i + 1, 3);
            (
                vec![ExtScalar::from_rat(lo).unwrap(); 2],
                vec![ExtScalar::from_rat(hi).unwrap(); 2],
            )
        })
        .collect();
    for seed in 0..50u64 {
        let t = ksz_sample(2, 4, seed);
        for (lo, hi) in &pairs {
            let a = t.mixed_norm(lo).unwrap();
            let b = t.mixed_norm(hi).unwrap();
            assert!(b <= a * (1.0 + 1e-12), "monotonicity broken at seed {seed}");
        }
    }

    // weak decrease of every theorem tuple over a 200-instance grid
    let mut instances = 0;
    'outer: for m in 2..=5usize {
        for num in 2..=60i64 {
            for den in 1..=2i64 {
                let r = Rat::new(num, den);
                if r <= Rat::new(1, 1) {
                    continue;
                }
                let inst =
                    HLInstance::isotropic(m, ExtScalar::from_rat(r).unwrap()).unwrap();
                for tuple in proven_tuples(&inst) {
                    assert!(tuple.is_weakly_decreasing(), "{tuple} not decreasing");
                }
                instances += 1;
                if instances >= 200 {
                    break 'outer;
                }
            }
        }
    }
    assert!(instances >= 200);

    // lift preserves trailing mixed norms on 10 fixtures
    for seed in 0..10u64 {
        let t = ksz_sample(2, 3, seed);
        let lifted = lift_form(&t, 1, 3).unwrap();
        let spec = scl(&["2", "2"]);
        let mut lifted_spec = vec![ExtScalar::INF];
        lifted_spec.extend(spec.iter().cloned());
        let a = t.mixed_norm(&spec).unwrap();
        let b = lifted.mixed_norm(&lifted_spec).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.max(1.0), "lift changed the norm");
    }

    println!("criterion 9: PASS (involution, monotonicity, weak decrease, lift preservation)");
}
