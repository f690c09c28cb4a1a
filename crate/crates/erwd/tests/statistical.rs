//! Sampling-level invariants: the simulator against the exact recursions,
//! kernel locality, the conditional-mean identity, and the almost-sure
//! stabilization heuristic.

use erwd::analytic::exact_moments;
use erwd::mc::{path_stabilization, run, Functional, McConfig};
use erwd::params::{InitialLaw, MemoryRegime, ModelParams, ZeroRecallPolicy};
use erwd::rng::RngStream;
use erwd::verify::{moment_check, MomentKind, Tolerance};
use erwd::walk::{next_step, simulate};

fn params() -> ModelParams {
    ModelParams::new(0.5, 0.3, 0.2).unwrap()
}

/// Monte Carlo agrees with the exact recursions at the same finite n, across
/// the whole regime x policy grid (self-consistency at 4 sigma).
#[test]
fn mc_matches_exact_moments_across_the_grid() {
    let n = 1000;
    let m = 10_000;
    let mut seed = 0xC0FFEE;
    for regime in MemoryRegime::ALL {
        for policy in ZeroRecallPolicy::ALL {
            seed += 1;
            let series =
                exact_moments(&params(), regime, policy, InitialLaw::ThreePoint, n).unwrap();
            let config = McConfig {
                params: params(),
                regime,
                policy,
                init: InitialLaw::ThreePoint,
                horizon: n,
                replicas: m,
                seed,
                functional: Functional::SnOverSqrtN,
                fy: None,
            };
            let stats = run(&config).unwrap();
            let scale = n as f64;
            let mean = moment_check(
                format!("{regime}/{policy} mean"),
                &stats,
                MomentKind::Mean,
                series.mean(n) / scale.sqrt(),
                4.0,
                0.0,
                Tolerance::SePlusBias,
                "",
            )
            .unwrap();
            assert!(mean.pass, "{}: {} vs {}", mean.name, mean.statistic, mean.threshold);
            let second = moment_check(
                format!("{regime}/{policy} second"),
                &stats,
                MomentKind::SecondMoment,
                series.second_moment(n) / scale,
                4.0,
                0.0,
                Tolerance::SePlusBias,
                "",
            )
            .unwrap();
            assert!(second.pass, "{}: {} vs {}", second.name, second.statistic, second.threshold);
        }
    }
}

/// Conditioning on steps outside the memory set leaves the next-step law
/// unchanged: first-step memory, so the second step carries no information
/// about the third.
#[test]
fn kernel_locality_first_step_memory() {
    let m = 400_000u64;
    let mut counts = [[0u64; 3]; 2]; // [x2 = +1 / -1][x3 bucket]
    for replica in 0..m {
        let t = simulate(
            &params(),
            MemoryRegime::FirstStep,
            ZeroRecallPolicy::Propagate,
            InitialLaw::ThreePoint,
            3,
            &RngStream::new(0xA11CE, replica),
        )
        .unwrap();
        if t.steps[0] != 1 {
            continue;
        }
        let group = match t.steps[1] {
            1 => 0,
            -1 => 1,
            _ => continue,
        };
        let bucket = match t.steps[2] {
            1 => 0,
            -1 => 1,
            _ => 2,
        };
        counts[group][bucket] += 1;
    }
    let n0: u64 = counts[0].iter().sum();
    let n1: u64 = counts[1].iter().sum();
    for bucket in 0..3 {
        let f0 = counts[0][bucket] as f64 / n0 as f64;
        let f1 = counts[1][bucket] as f64 / n1 as f64;
        let pooled = (counts[0][bucket] + counts[1][bucket]) as f64 / (n0 + n1) as f64;
        let se = (pooled * (1.0 - pooled) * (1.0 / n0 as f64 + 1.0 / n1 as f64)).sqrt();
        assert!(
            (f0 - f1).abs() <= 4.0 * se,
            "bucket {bucket}: {f0} vs {f1} (se {se})"
        );
    }
}

/// Same locality check for first-and-last memory: given the first and the
/// current last step, the middle step is forgotten.
#[test]
fn kernel_locality_first_and_last_memory() {
    let m = 400_000u64;
    let mut counts = [[0u64; 3]; 2]; // [x2 = +1 / -1][x4 bucket]
    for replica in 0..m {
        let t = simulate(
            &params(),
            MemoryRegime::FirstAndLast,
            ZeroRecallPolicy::SymmetricResample,
            InitialLaw::ThreePoint,
            4,
            &RngStream::new(0xB0B, replica),
        )
        .unwrap();
        // condition on the memory (X1, X3) = (1, 1) and split by X2
        if t.steps[0] != 1 || t.steps[2] != 1 {
            continue;
        }
        let group = match t.steps[1] {
            1 => 0,
            -1 => 1,
            _ => continue,
        };
        let bucket = match t.steps[3] {
            1 => 0,
            -1 => 1,
            _ => 2,
        };
        counts[group][bucket] += 1;
    }
    let n0: u64 = counts[0].iter().sum();
    let n1: u64 = counts[1].iter().sum();
    for bucket in 0..3 {
        let f0 = counts[0][bucket] as f64 / n0 as f64;
        let f1 = counts[1][bucket] as f64 / n1 as f64;
        let pooled = (counts[0][bucket] + counts[1][bucket]) as f64 / (n0 + n1) as f64;
        let se = (pooled * (1.0 - pooled) * (1.0 / n0 as f64 + 1.0 / n1 as f64)).sqrt();
        assert!(
            (f0 - f1).abs() <= 4.0 * se,
            "bucket {bucket}: {f0} vs {f1} (se {se})"
        );
    }
}

/// Empirical conditional mean of a drawn step equals (p-q) · mean(memory)
/// under both policies, for memories with and without zeros.
#[test]
fn conditional_mean_identity_over_memories() {
    let pr = params();
    let memories: [&[i8]; 6] = [
        &[1],
        &[0],
        &[1, 1, 0],
        &[1, -1, 0, 0],
        &[0, 0, 1],
        &[-1, -1, 1, 0, 1],
    ];
    let draws = 1_000_000;
    for (idx, memory) in memories.iter().enumerate() {
        let mem_mean =
            memory.iter().map(|&s| s as f64).sum::<f64>() / memory.len() as f64;
        let target = pr.drift() * mem_mean;
        for policy in ZeroRecallPolicy::ALL {
            let mut rng = RngStream::new(0xD1CE + idx as u64, 0).walk_rng();
            let mut sum = 0.0f64;
            let mut sq = 0.0f64;
            for _ in 0..draws {
                let s = next_step(memory, &pr, policy, &mut rng).unwrap() as f64;
                sum += s;
                sq += s * s;
            }
            let mean = sum / draws as f64;
            let var = sq / draws as f64 - mean * mean;
            let se = (var / draws as f64).sqrt().max(1e-9);
            assert!(
                (mean - target).abs() <= 4.0 * se,
                "memory {memory:?} {policy}: {mean} vs {target}"
            );
        }
    }
}

/// Almost-sure stabilization heuristic in the superdiffusive phase: the
/// normalized path moves much less between late checkpoints than between
/// early ones.
#[test]
fn superdiffusive_paths_stabilize() {
    let pr = ModelParams::new(0.8, 0.05, 0.15).unwrap();
    let config = McConfig {
        params: pr,
        regime: MemoryRegime::Full,
        policy: ZeroRecallPolicy::SymmetricResample,
        init: InitialLaw::ThreePoint,
        horizon: 100_000,
        replicas: 200,
        seed: 0xFADE,
        functional: Functional::SnOverNPow,
        fy: None,
    };
    let rows = path_stabilization(&config, &[100, 1000, 10_000, 100_000]).unwrap();
    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(|a, b| a.total_cmp(b));
        v[v.len() / 2]
    };
    let early = median(rows.iter().map(|r| (r[0] - r[1]).abs()).collect());
    let late = median(rows.iter().map(|r| (r[2] - r[3]).abs()).collect());
    assert!(late < early, "late oscillation {late} vs early {early}");
}
