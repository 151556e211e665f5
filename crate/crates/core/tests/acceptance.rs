//! Acceptance gate: every empirical guarantee the solver promises, run
//! over a 567-instance seeded corpus (n = 2..8, mixed edge densities and
//! release ranges, zero-length and zero-weight jobs included). Each test
//! prints a PASS line with the measured extremes when run with
//! `--nocapture`.

mod common;

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::rows;
use sched_core::alpha::{self, sample_alpha};
use sched_core::exact;
use sched_core::instance::{generate_random, GenParams, Instance, Job};
use sched_core::lp;
use sched_core::report::{ratio, ALG_RATIO_BOUND, LP_OPT_FLOOR, RATIO_TOL};

#[test]
fn criterion_1_approximation_guarantee_against_exact_optimum() {
    let rows = rows();
    assert!(rows.len() >= 500, "corpus must hold at least 500 instances");
    assert!(
        rows.iter().any(|r| (0..r.inst.n()).any(|j| r.inst.p(j) == 0.0)),
        "corpus must include zero-length jobs"
    );
    assert!(
        rows.iter().any(|r| (0..r.inst.n()).any(|j| r.inst.w(j) == 0.0)),
        "corpus must include zero-weight jobs"
    );
    let mut worst = f64::NEG_INFINITY;
    for row in rows {
        let r = ratio(row.best.cost, row.opt.cost);
        worst = worst.max(r);
        assert!(
            r <= ALG_RATIO_BOUND + RATIO_TOL,
            "seed {}: alg/opt = {r} exceeds {ALG_RATIO_BOUND}",
            row.params.seed
        );
    }
    println!("PASS criterion 1: alg/opt <= {ALG_RATIO_BOUND} on {} instances (worst {worst:.6})", rows.len());
}

#[test]
fn criterion_2_lp_gap_within_proven_range() {
    let rows = rows();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for row in rows {
        let r = ratio(row.lp.objective, row.opt.cost);
        lo = lo.min(r);
        hi = hi.max(r);
        assert!(
            r >= LP_OPT_FLOOR - RATIO_TOL,
            "seed {}: lp/opt = {r} below {LP_OPT_FLOOR}",
            row.params.seed
        );
        assert!(
            r <= 1.0 + RATIO_TOL,
            "seed {}: lp/opt = {r} above 1 (relaxation not a lower bound)",
            row.params.seed
        );
    }
    println!("PASS criterion 2: lp/opt in [{LP_OPT_FLOOR}, 1] on {} instances (range [{lo:.6}, {hi:.6}])", rows.len());
}

#[test]
fn criterion_3_double_speed_dominance_and_speed1_baseline() {
    let rows = rows();
    for row in rows {
        for j in 0..row.inst.n() {
            let c2 = row.pmtn.completion_time(j);
            assert!(
                c2 <= row.lp.c_star[j] + 1e-6,
                "seed {}: job {j}: double-speed completion {c2} exceeds C* {}",
                row.params.seed,
                row.lp.c_star[j]
            );
            let c1 = row.speed1.completion_time(j);
            assert!(
                c1 <= 2.0 * row.lp.c_star[j] + 1e-6,
                "seed {}: job {j}: speed-1 completion {c1} exceeds 2 C* {}",
                row.params.seed,
                2.0 * row.lp.c_star[j]
            );
        }
        assert!(row.pmtn_cost <= row.lp.objective + 1e-6);
    }
    println!("PASS criterion 3: C'_j <= C*_j and speed-1 C_j <= 2 C*_j on {} instances", rows.len());
}

#[test]
fn criterion_4_completion_bound_pointwise_and_inequality_five() {
    let rows = &rows()[..50];
    let mut checked = 0u64;
    for (i, row) in rows.iter().enumerate() {
        // Inequality (5): the source completion dominates the half
        // processed-work sum at every completion.
        for k in 0..row.inst.n() {
            let eta = row.profile.eta_fractions(k);
            let half_work: f64 = (0..row.inst.n()).map(|j| eta[j] * row.inst.p(j) / 2.0).sum();
            assert!(
                row.profile.completion(k) >= half_work - 1e-9,
                "seed {}: job {k} violates the busy-work lower bound",
                row.params.seed
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + i as u64);
        for _ in 0..200 {
            let a = sample_alpha(rng.gen());
            let res = alpha::alpha_schedule(&row.inst, &row.profile, a).unwrap();
            for k in 0..row.inst.n() {
                let bound = alpha::lemma2_bound(&row.inst, &row.profile, k, a);
                let realized = res.schedule.completion_time(k);
                assert!(
                    realized <= bound + 1e-9,
                    "seed {}: job {k} at alpha {a}: realized {realized} > bound {bound}",
                    row.params.seed
                );
                checked += 1;
            }
        }
    }
    println!("PASS criterion 4: completion bound held pointwise over {checked} (job, alpha) pairs");
}

#[test]
fn criterion_5_separation_oracle_exact_against_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(70_007);
    let mut found = 0usize;
    for case in 0..200 {
        let n = 2 + (case % 11);
        let inst = generate_random(GenParams {
            n,
            p_max: 10,
            r_max: [0, 5, 30][case % 3],
            w_max: 10,
            edge_prob: [0.0, 0.2, 0.5][case % 3],
            seed: 9_000 + case as u64,
        });
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..45.0)).collect();
        let brute = exact::brute_force_separation(&c, &inst, exact::DEFAULT_SEP_LIMIT).unwrap();
        let cuts = lp::separate(&c, &inst, 0.0);
        match brute {
            None => assert!(cuts.is_empty(), "case {case}: spurious cut"),
            Some(w) => {
                found += 1;
                assert!(!cuts.is_empty(), "case {case}: missed violation {}", w.violation);
                let max_cut = cuts
                    .iter()
                    .map(|cut| lp::cut_violation(cut, &c, &inst))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!(
                    (max_cut - w.violation).abs() <= 1e-9,
                    "case {case}: prefix max {max_cut} vs enumerated max {}",
                    w.violation
                );
                // The subset's own minimum release value must carry a cut at
                // least as violated as the enumerated witness.
                let r_star = w.set.iter().map(|&j| inst.r(j)).fold(f64::INFINITY, f64::min);
                let at_r = cuts
                    .iter()
                    .filter(|cut| cut.r == r_star)
                    .map(|cut| lp::cut_violation(cut, &c, &inst))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!(
                    at_r >= w.violation - 1e-9,
                    "case {case}: cut at r_min(S*) too weak: {at_r} vs {}",
                    w.violation
                );
            }
        }
    }
    println!("PASS criterion 5: oracle matches subset enumeration on 200 cases ({found} with violations)");
}

#[test]
fn criterion_6_density_machinery() {
    // Closed-form endpoints.
    assert_eq!(alpha::cdf(1.0), 1.0, "F(1) must be exactly 1");
    assert_eq!(alpha::cdf(0.0), 0.0);

    // Inverse-CDF consistency on a 1000-point grid.
    for i in 0..1000 {
        let u = i as f64 / 999.0;
        let a = sample_alpha(u);
        assert!(a > 0.0 && a <= 1.0);
        assert!(
            (alpha::cdf(a) - u).abs() <= 1e-12,
            "F(sample({u})) = {} drifts",
            alpha::cdf(a)
        );
    }

    // Integral identity of the density against Simpson quadrature.
    let simpson = |eta: f64| {
        let steps = 2000;
        let h = eta / steps as f64;
        let g = |x: f64| alpha::density(x) * (1.0 + (x - eta) / 2.0);
        let mut acc = g(0.0) + g(eta);
        for i in 1..steps {
            acc += g(h * i as f64) * if i % 2 == 0 { 2.0 } else { 4.0 };
        }
        acc * h / 3.0
    };
    for i in 0..=10 {
        let eta = i as f64 / 10.0;
        let closed = eta / (2.0 * (alpha::sqrt_e() - 1.0));
        assert!(
            (simpson(eta) - closed).abs() <= 1e-8,
            "integral identity off at eta {eta}"
        );
    }

    // Monte Carlo mean vs the exact expectation on ten fixtures, mostly
    // ones whose alpha order actually changes.
    let rows = rows();
    let mut fixtures: Vec<&common::Row> = rows
        .iter()
        .filter(|r| !r.profile.breakpoints().is_empty())
        .take(8)
        .collect();
    fixtures.extend(rows.iter().filter(|r| r.profile.breakpoints().is_empty()).take(2));
    assert_eq!(fixtures.len(), 10);
    for (i, row) in fixtures.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(60_000 + i as u64);
        let draws = 100_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..draws {
            let res =
                alpha::alpha_schedule(&row.inst, &row.profile, sample_alpha(rng.gen())).unwrap();
            sum += res.cost;
            sumsq += res.cost * res.cost;
        }
        let mean = sum / draws as f64;
        let var = (sumsq - sum * sum / draws as f64) / (draws as f64 - 1.0);
        let se = (var.max(0.0) / draws as f64).sqrt();
        assert!(
            (mean - row.expected).abs() <= 3.0 * se + 1e-9,
            "seed {}: Monte Carlo mean {mean} vs expectation {} (se {se})",
            row.params.seed,
            row.expected
        );
    }
    println!("PASS criterion 6: density, inverse sampling, integral identity, Monte Carlo agreement");
}

#[test]
fn criterion_7_expectation_bound_and_derandomized_dominance() {
    let rows = rows();
    for row in rows {
        assert!(
            row.expected <= ALG_RATIO_BOUND * row.pmtn_cost + 1e-6,
            "seed {}: E[cost] = {} exceeds ratio * pmtn cost {}",
            row.params.seed,
            row.expected,
            ALG_RATIO_BOUND * row.pmtn_cost
        );
        assert!(
            row.best.cost <= row.expected + 1e-9,
            "seed {}: derandomized cost {} above expectation {}",
            row.params.seed,
            row.best.cost,
            row.expected
        );
    }
    println!("PASS criterion 7: E[cost] <= {ALG_RATIO_BOUND} * pmtn cost and min <= mean on {} instances", rows.len());
}

#[test]
fn criterion_8_hand_verified_fixtures() {
    fn inst(jobs: &[(f64, f64, f64)], prec: &[(usize, usize)]) -> Instance {
        Instance::new(
            jobs.iter()
                .enumerate()
                .map(|(id, &(p, r, w))| Job { id, p, r, w })
                .collect(),
            prec.iter().copied(),
        )
    }
    let opts = sched_core::pipeline::SolveOptions {
        exact: true,
        ..Default::default()
    };

    let two_job = inst(&[(2.0, 0.0, 1.0), (1.0, 0.0, 2.0)], &[]);
    let rep = sched_core::pipeline::solve_pipeline(&two_job, &opts).unwrap();
    assert!((rep.lp.objective - 3.0).abs() < 1e-9);
    assert!((rep.pmtn.cost - 2.5).abs() < 1e-9);
    assert!((rep.alpha.cost - 5.0).abs() < 1e-9);
    assert!((rep.exact.as_ref().unwrap().cost - 5.0).abs() < 1e-9);

    let single = inst(&[(2.0, 0.0, 3.0)], &[]);
    let rep = sched_core::pipeline::solve_pipeline(&single, &opts).unwrap();
    assert!((rep.lp.objective - 3.0).abs() < 1e-9);
    assert!((rep.alpha.cost - 6.0).abs() < 1e-9);

    let preempt = inst(&[(4.0, 0.0, 1.0), (1.0, 1.0, 1.0)], &[]);
    let lp_sol = lp::solve_lp_relaxation(&preempt, lp::DEFAULT_TOL_SEP).unwrap();
    let order = lp::lp_list_order(&lp_sol, &preempt).unwrap();
    assert_eq!(order, vec![1, 0]);
    let pmtn = sched_core::schedule::preemptive_list_schedule(&preempt, &order, 2.0).unwrap();
    let profile = alpha::AlphaProfile::from_schedule(&preempt, &pmtn, &order).unwrap();
    assert_eq!(profile.breakpoints(), vec![0.5]);
    assert_eq!(alpha::alpha_order(&preempt, &profile, 0.25), vec![0, 1]);
    assert_eq!(alpha::alpha_order(&preempt, &profile, 0.75), vec![1, 0]);
    let best = alpha::derandomized_best(&preempt, &profile).unwrap();
    assert_eq!(best.cost, 8.0);
    let expected = alpha::expected_cost(&preempt, &profile).unwrap();
    assert!((expected - 8.438).abs() <= 1e-3, "E = {expected}");

    println!("PASS criterion 8: hand-verified fixtures reproduce exactly");
}

#[test]
fn criterion_9_reports_are_byte_identical_across_runs() {
    let bin = env!("CARGO_BIN_EXE_sched");
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/sample.inst");

    let solve = |extra: &[&str]| {
        let out = Command::new(bin)
            .arg("solve")
            .arg(fixture)
            .args(extra)
            .output()
            .expect("spawn sched");
        assert!(out.status.success(), "solve failed: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    assert_eq!(solve(&[]), solve(&[]));
    assert_eq!(
        solve(&["--alpha", "random", "--seed", "11"]),
        solve(&["--alpha", "random", "--seed", "11"])
    );

    let bench = || {
        let out = Command::new(bin)
            .args(["bench", "--count", "24", "--n", "6", "--seed", "3", "--edge-prob", "0.3"])
            .output()
            .expect("spawn sched");
        assert!(out.status.success());
        out.stdout
    };
    let first = bench();
    assert_eq!(first, bench());
    assert!(first.starts_with(b"instance,seed,n,lp_bound"));

    println!("PASS criterion 9: solve and bench reports byte-identical for fixed seeds");
}
