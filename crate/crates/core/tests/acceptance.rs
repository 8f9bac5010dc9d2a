//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::{matchings, to_association};
use hetsnet::channel::sample_scenario;
use hetsnet::harness::{
    aggregate, run_experiment, write_csv, Algorithm, ExperimentSpec, Summary, Sweep, SweepParam, TrialRecord,
};
use hetsnet::{
    count_combinations, is_feasible, solve_bf, solve_bnb, Association, IlpInstance, NetworkConfig, Scenario,
    WeightMode, WeightState, WeightVector,
};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn run_spec(spec: &ExperimentSpec) -> (Vec<TrialRecord>, Summary) {
    let recs = run_experiment(spec).expect("valid acceptance spec");
    let summary = aggregate(&recs).expect("records present");
    (recs, summary)
}

fn mean(summary: &Summary, v: f64, a: Algorithm) -> f64 {
    summary.get(v, a).expect("row present").mean_associated
}

fn random_weights(rng: &mut ChaCha8Rng, k: usize, n: usize) -> WeightVector {
    let w: Vec<f64> = (0..k).map(|_| 1.0 / (1.0 + rng.random_range(0..6) as f64)).collect();
    WeightVector::per_su(&w, n)
}

fn exact_pair(scn: &Scenario, w: &WeightVector) -> Result<(), String> {
    let bf = solve_bf(scn, None, u64::MAX).unwrap();
    let bnb = solve_bnb(scn, None).unwrap();
    if bf.objective != bnb.objective {
        return Err(format!("unweighted BF {} vs BnB {} ({})", bf.objective, bnb.objective, scn.gain_hash()));
    }
    let wbf = solve_bf(scn, Some(w), u64::MAX).unwrap();
    let wbnb = solve_bnb(scn, Some(w)).unwrap();
    if wbf.objective != wbnb.objective {
        return Err(format!("weighted BF {} vs BnB {} ({})", wbf.objective, wbnb.objective, scn.gain_hash()));
    }
    Ok(())
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut cases = 0;
    let mut nonzero = 0;
    for k in 1..=4 {
        for n in 1..=4 {
            for seed in 0..50 {
                let cfg = NetworkConfig { k, n, seed, ..NetworkConfig::default() };
                let scn = sample_scenario(&cfg, &mut cfg.rng());
                let w = random_weights(&mut rng, k, n);
                if let Err(e) = exact_pair(&scn, &w) {
                    return verdict(false, format!("K={k} N={n} seed {seed}: {e}"));
                }
                nonzero += usize::from(solve_bnb(&scn, None).unwrap().objective > 0.0);
                cases += 1;
            }
        }
    }
    for i in 0..200 {
        let cfg = NetworkConfig {
            k: rng.random_range(1..=6),
            n: rng.random_range(1..=6),
            gamma_db: rng.random_range(0.0..40.0),
            beta_db: rng.random_range(-5.0..10.0),
            seed: 10_000 + i,
            ..NetworkConfig::default()
        };
        let scn = sample_scenario(&cfg, &mut cfg.rng());
        let w = random_weights(&mut rng, cfg.k, cfg.n);
        if let Err(e) = exact_pair(&scn, &w) {
            return verdict(false, format!("random case {i} K={} N={}: {e}", cfg.k, cfg.n));
        }
        cases += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        secs < 120.0,
        format!("{cases} scenarios ({nonzero} of 800 exhaustive ones non-trivial), 0 mismatches, {secs:.1}s (limit 120s)"),
    )
}

fn criterion_2() -> Verdict {
    let mut checked = 0;
    let mut built = 0;
    let mut seed = 0u64;
    let mut pick = ChaCha8Rng::seed_from_u64(202);
    while built < 20 {
        let cfg = NetworkConfig { k: pick.random_range(1..=4), n: pick.random_range(1..=4), seed, ..NetworkConfig::default() };
        seed += 1;
        let scn = sample_scenario(&cfg, &mut cfg.rng());
        let Ok(inst) = IlpInstance::build(&scn) else { continue };
        built += 1;
        for m in matchings(cfg.k, cfg.n) {
            let a = to_association(cfg.n, &m);
            checked += 1;
            if inst.matrix_feasible(&a) != is_feasible(&scn, &a) {
                return verdict(false, format!("disagreement on {m:?} ({})", scn.gain_hash()));
            }
        }
    }
    verdict(true, format!("20 scenarios, {checked} associations, 0 disagreements at tolerance 1e-9"))
}

fn criterion_3() -> Verdict {
    for k in 1..=5 {
        for n in 1..=5 {
            let enumerated = matchings(k, n).len() - 1;
            if count_combinations(k, n) != BigUint::from(enumerated) {
                return verdict(false, format!("C({k},{n}) = {} but enumerator found {enumerated}", count_combinations(k, n)));
            }
        }
    }
    verdict(true, "25 (K, N) pairs match the enumerator; C(2,2)=6, C(3,2)=12")
}

fn fig3_spec() -> ExperimentSpec {
    ExperimentSpec {
        base: NetworkConfig { k: 6, ..NetworkConfig::default() },
        sweep: Sweep { param: SweepParam::N, values: (2..=8).map(f64::from).collect() },
        algorithms: vec![Algorithm::Bnb, Algorithm::Umrcg, Algorithm::MaxSinr, Algorithm::MinInterf],
        trials: 500,
        ..ExperimentSpec::default()
    }
}

fn criterion_4(recs: &[TrialRecord], summary: &Summary) -> Verdict {
    let mut exact: BTreeMap<(u64, usize), f64> = BTreeMap::new();
    for r in recs.iter().filter(|r| r.algorithm == Algorithm::Bnb) {
        exact.insert((r.sweep_value as u64, r.trial), r.objective);
    }
    let violations = recs
        .iter()
        .filter(|r| r.algorithm == Algorithm::Umrcg && r.objective > exact[&(r.sweep_value as u64, r.trial)])
        .count();
    let mut worst = (f64::INFINITY, 0.0);
    for v in summary.sweep_values() {
        let ratio = mean(summary, v, Algorithm::Umrcg) / mean(summary, v, Algorithm::Bnb);
        if ratio < worst.0 {
            worst = (ratio, v);
        }
    }
    verdict(
        worst.0 >= 0.9 && violations == 0,
        format!(
            "min UMRCG/BnB ratio {:.4} at N={} (need >= 0.90), {violations} paired instances with greedy > exact",
            worst.0, worst.1
        ),
    )
}

/// Mean and standard error of the paired per-trial difference `a - b` at one
/// sweep point, plus how many trials each side won.
fn paired(recs: &[TrialRecord], v: f64, a: Algorithm, b: Algorithm) -> (f64, f64, usize, usize) {
    let mut by_trial: BTreeMap<usize, [f64; 2]> = BTreeMap::new();
    for r in recs.iter().filter(|r| r.sweep_value == v) {
        if r.algorithm == a {
            by_trial.entry(r.trial).or_default()[0] = r.objective;
        } else if r.algorithm == b {
            by_trial.entry(r.trial).or_default()[1] = r.objective;
        }
    }
    let d: Vec<f64> = by_trial.values().map(|[x, y]| x - y).collect();
    let m = d.len() as f64;
    let mean = d.iter().sum::<f64>() / m;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let wins = d.iter().filter(|x| **x > 0.0).count();
    let losses = d.iter().filter(|x| **x < 0.0).count();
    (mean, (var / m).sqrt(), wins, losses)
}

fn criterion_5(recs: &[TrialRecord], summary: &Summary) -> Verdict {
    let mut passed = true;
    let mut worst = Vec::new();
    for other in [Algorithm::MaxSinr, Algorithm::MinInterf] {
        let mut w: Option<(f64, f64, f64, usize, usize)> = None;
        for v in summary.sweep_values() {
            let margin = mean(summary, v, Algorithm::Umrcg) - mean(summary, v, other);
            passed &= margin >= 0.0;
            if w.is_none_or(|x| margin < x.0) {
                let (_, se, wins, losses) = paired(recs, v, Algorithm::Umrcg, other);
                w = Some((margin, v, se, wins, losses));
            }
        }
        let (margin, v, se, wins, losses) = w.expect("sweep values present");
        worst.push(format!(
            "over {other}: min margin {margin:+.4} at N={v} (paired stderr {se:.4}, UMRCG better in {wins} trials, worse in {losses})"
        ));
    }
    verdict(passed, worst.join("; "))
}

fn criterion_6() -> Verdict {
    let gammas: Vec<f64> = (0..=8).map(|i| 5.0 * f64::from(i)).collect();
    let spec = ExperimentSpec {
        base: NetworkConfig { k: 6, n: 6, gamma0_db: 40.0, ..NetworkConfig::default() },
        sweep: Sweep { param: SweepParam::GammaDb, values: gammas.clone() },
        algorithms: vec![Algorithm::Bnb],
        trials: 500,
        ..ExperimentSpec::default()
    };
    let (_, summary) = run_spec(&spec);
    let curve: Vec<f64> = gammas.iter().map(|&g| mean(&summary, g, Algorithm::Bnb)).collect();
    let peak = curve.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let argmax: Vec<f64> = gammas.iter().zip(&curve).filter(|(_, m)| **m == peak).map(|(g, _)| *g).collect();
    let interior = argmax.iter().any(|g| *g > gammas[0] && *g < gammas[gammas.len() - 1]);

    let low = ExperimentSpec {
        base: NetworkConfig { gamma0_db: 10.0, ..spec.base },
        sweep: Sweep { param: SweepParam::GammaDb, values: vec![40.0] },
        ..spec.clone()
    };
    let (_, low_summary) = run_spec(&low);
    let at40_low = mean(&low_summary, 40.0, Algorithm::Bnb);
    let at40_high = curve[curve.len() - 1];
    let curve_txt: Vec<String> = curve.iter().map(|m| format!("{m:.3}")).collect();
    verdict(
        interior && at40_high > at40_low,
        format!(
            "maximum {peak:.3} at gamma {argmax:?} dB (interior: {interior}); at 40 dB: gamma0=40 {at40_high:.3} vs gamma0=10 {at40_low:.3}; curve [{}]",
            curve_txt.join(", ")
        ),
    )
}

fn criterion_7() -> Verdict {
    let betas: Vec<f64> = (-2..=4).map(|i| 5.0 * f64::from(i)).collect();
    let spec = ExperimentSpec {
        sweep: Sweep { param: SweepParam::Beta0Db, values: betas.clone() },
        algorithms: vec![Algorithm::Bnb, Algorithm::Umrcg],
        trials: 500,
        ..ExperimentSpec::default()
    };
    let (_, summary) = run_spec(&spec);
    let mut worst = (f64::INFINITY, String::new());
    for alg in [Algorithm::Bnb, Algorithm::Umrcg] {
        for pair in betas.windows(2) {
            let (a, b) = (summary.get(pair[0], alg).unwrap(), summary.get(pair[1], alg).unwrap());
            let slack = a.stderr_associated.max(b.stderr_associated);
            let margin = a.mean_associated + slack - b.mean_associated;
            if margin < worst.0 {
                worst = (margin, format!("{alg} {} -> {} dB", pair[0], pair[1]));
            }
        }
    }
    let ends = |alg| (summary.get(betas[0], alg).unwrap().mean_associated, summary.get(20.0, alg).unwrap().mean_associated);
    let (b0, b1) = ends(Algorithm::Bnb);
    let (u0, u1) = ends(Algorithm::Umrcg);
    verdict(
        worst.0 >= 0.0,
        format!(
            "smallest slack {:.4} ({}); BnB {b0:.3} -> {b1:.3}, UMRCG {u0:.3} -> {u1:.3} over -10..20 dB",
            worst.0, worst.1
        ),
    )
}

fn criterion_8() -> Verdict {
    let ks = [2.0, 4.0, 6.0, 8.0, 10.0];
    let base = ExperimentSpec {
        base: NetworkConfig { n: 6, ..NetworkConfig::default() },
        sweep: Sweep { param: SweepParam::K, values: ks.to_vec() },
        algorithms: vec![Algorithm::Umrcg, Algorithm::Wmrcg],
        trials: 500,
        slots: 200,
        window: 50,
        fixed_sbs: true,
        hold_users: true,
        ..ExperimentSpec::default()
    };
    let (_, su) = run_spec(&ExperimentSpec { weight_mode: WeightMode::PerSu, ..base.clone() });
    let (_, sbs) = run_spec(&ExperimentSpec { weight_mode: WeightMode::PerSbs, ..base });

    let mut ok = true;
    let (mut su_gain, mut sbs_gain) = (f64::INFINITY, f64::INFINITY);
    let mut count = (f64::INFINITY, 0.0, "");
    for &k in &ks {
        for (summary, mode) in [(&su, "per-SU"), (&sbs, "per-SBS")] {
            let (u, w) = (summary.get(k, Algorithm::Umrcg).unwrap(), summary.get(k, Algorithm::Wmrcg).unwrap());
            let gain = if mode == "per-SU" {
                w.jain_su.unwrap_or(0.0) - u.jain_su.unwrap_or(0.0)
            } else {
                w.jain_sbs.unwrap_or(0.0) - u.jain_sbs.unwrap_or(0.0)
            };
            if mode == "per-SU" {
                su_gain = su_gain.min(gain);
            } else {
                sbs_gain = sbs_gain.min(gain);
            }
            let margin = u.mean_associated - w.mean_associated;
            if margin < count.0 {
                count = (margin, k, mode);
            }
            ok &= gain >= 0.0 && margin >= 0.0;
        }
    }
    verdict(
        ok,
        format!(
            "K in {ks:?}: min Jain gain SU {su_gain:+.4}, SBS {sbs_gain:+.4}; min (unweighted - weighted) count {:+.6} at K={} {}",
            count.0, count.1, count.2
        ),
    )
}

fn criterion_9() -> Verdict {
    let (k, n) = (6, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut checks = 0u64;
    for window in [1, 7, 50, 499, 600] {
        for mode in [WeightMode::PerSu, WeightMode::PerSbs] {
            let mut state = WeightState::new(window, mode, k, n);
            let mut history: Vec<Vec<(usize, usize)>> = Vec::new();
            for _ in 0..500 {
                let mut sus: Vec<usize> = (0..k).collect();
                let mut sbss: Vec<usize> = (0..n).collect();
                sus.shuffle(&mut rng);
                sbss.shuffle(&mut rng);
                let size = rng.random_range(0..=n.min(k));
                let pairs: Vec<_> = sus.into_iter().zip(sbss).take(size).collect();
                state.push(Association::from_pairs(k, n, &pairs).unwrap());
                history.push(pairs);

                let recent = &history[history.len().saturating_sub(window)..];
                let entities = if mode == WeightMode::PerSu { k } else { n };
                let weights = state.weights();
                for e in 0..entities {
                    let c = recent
                        .iter()
                        .filter(|p| p.iter().any(|&(s, b)| if mode == WeightMode::PerSu { s == e } else { b == e }))
                        .count();
                    checks += 1;
                    if weights[e] != 1.0 / (1.0 + c as f64) {
                        return verdict(false, format!("T={window} {mode:?} entity {e}: {} vs 1/(1+{c})", weights[e]));
                    }
                }
            }
        }
    }
    verdict(true, format!("{checks} weights equal the naive recount exactly (T in 1, 7, 50, 499, 600)"))
}

fn criterion_10() -> Verdict {
    let specs = [
        fig3_spec(),
        ExperimentSpec {
            base: NetworkConfig { k: 5, n: 4, seed: 77, ..NetworkConfig::default() },
            sweep: Sweep { param: SweepParam::BetaDb, values: vec![-5.0, 0.0, 5.0] },
            algorithms: vec![Algorithm::Wbnb, Algorithm::Wmrcg, Algorithm::Umrcg],
            trials: 20,
            slots: 30,
            weight_mode: WeightMode::PerSbs,
            fixed_sbs: true,
            ..ExperimentSpec::default()
        },
    ];
    for (i, spec) in specs.iter().enumerate() {
        let bytes = || {
            let mut out = Vec::new();
            write_csv(&run_experiment(spec).unwrap(), &mut out).unwrap();
            out
        };
        if bytes() != bytes() {
            return verdict(false, format!("library run {i} differs between runs"));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let cli = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hetsnet"))
            .args(["run", "--sweep", "gamma0_db=10,40", "--trials", "50", "--algorithms", "BnB,UMRCG,WMRCG", "--seed", "3"])
            .arg("--out")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    let (a, b) = (cli("a.csv"), cli("b.csv"));
    verdict(a == b, format!("2 library specs and 1 CLI run reproduce byte-identical CSV ({} bytes from CLI)", a.len()))
}

fn main() -> ExitCode {
    let (fig3_records, fig3_summary) = run_spec(&fig3_spec());
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("1 exactness (BF == BnB)", Box::new(criterion_1)),
        ("2 matrix form == SINR", Box::new(criterion_2)),
        ("3 combination count", Box::new(criterion_3)),
        ("4 greedy near-optimality", Box::new(|| criterion_4(&fig3_records, &fig3_summary))),
        ("5 baseline ordering", Box::new(|| criterion_5(&fig3_records, &fig3_summary))),
        ("6 non-monotonicity in gamma", Box::new(criterion_6)),
        ("7 threshold monotonicity", Box::new(criterion_7)),
        ("8 fairness", Box::new(criterion_8)),
        ("9 weight-window oracle", Box::new(criterion_9)),
        ("10 determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let v = check();
        failed += usize::from(!v.passed);
        println!(
            "{} criterion {name}: {} [{:.1}s]",
            if v.passed { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
