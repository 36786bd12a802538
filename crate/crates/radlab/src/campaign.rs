//! Randomized verification campaigns: for each case, draw seeded
//! admissible instances, sweep the applicable parameter grid, and
//! aggregate violations, inconclusive trials, minimum slack, and the
//! worst witness into a [`Report`].
//!
//! Trials fan out across a rayon pool whose size is capped by the
//! `RADLAB_THREADS` environment variable; each trial derives its own
//! child seed, so the aggregated report is bit-identical no matter how
//! many workers run.

use rayon::prelude::*;

use radlab_core::blockops::OffDiagonalPair;
use radlab_core::catalogue::{
    descriptor, evaluate_case_sweep, CaseError, CaseId, CaseInputs, CaseParams, CaseResult,
    CaseStatus, OptBudget, Relation,
};
use radlab_core::linalg::ComplexMatrix;
use radlab_core::randgen::{child_seed, generate, unit_vector, GenSpec, MatrixKind, Stream};

use crate::report::{CaseReport, Report, WorstWitness};

/// Settings for one `verify` run.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub cases: Vec<CaseId>,
    pub trials: usize,
    /// Upper bound on every block dimension drawn for instances.
    pub dim_max: usize,
    pub seed: u64,
    /// Worker threads; 0 means use the available parallelism. The
    /// `RADLAB_THREADS` environment variable caps the result.
    pub threads: usize,
    /// Restarts for the best-found extrema inside case evaluations.
    pub restarts: usize,
    /// Probe switch: relax `I10`'s `p >= q > 1` ordering constraint and
    /// add `p = 1.2` points to its grid.
    pub relax_p_ordering: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            cases: CaseId::ALL.to_vec(),
            trials: 100,
            dim_max: 3,
            seed: 42,
            threads: 0,
            restarts: 32,
            relax_p_ordering: false,
        }
    }
}

/// Outcome of a campaign: the report plus the exit-policy summary.
#[derive(Debug, Clone)]
pub struct CampaignOutcome {
    pub report: Report,
    /// Violations in any case other than `I20s` fail the run.
    pub unexpected_violations: bool,
    /// Human-readable notes about expected findings (`I20s`).
    pub findings: Vec<String>,
}

fn effective_threads(requested: usize) -> usize {
    let base = if requested > 0 {
        requested
    } else {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    };
    match std::env::var("RADLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(cap) if cap >= 1 => base.min(cap),
        _ => base,
    }
}

/// Run the campaign. The aggregated numbers depend only on
/// `(cases, trials, dim_max, seed, restarts)`, not on the worker count.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignOutcome, CaseError> {
    let started = std::time::Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(effective_threads(cfg.threads))
        .build()
        .expect("building the worker pool");

    let mut cases = Vec::with_capacity(cfg.cases.len());
    let mut unexpected = false;
    let mut findings = Vec::new();
    for &case in &cfg.cases {
        let mut grid = param_grid(case);
        if cfg.relax_p_ordering && case == CaseId::I10 {
            // Conjugate of 1.2 is 6, so p < q here; r keeps p r >= 2.
            let r_min = 2.0f64 / 1.2;
            for r in [r_min, r_min + 1.0] {
                for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    grid.push(CaseParams::default().with_p(1.2).with_r(r).with_alpha(alpha));
                }
            }
        }
        let outcomes: Result<Vec<TrialOutcome>, CaseError> = pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|trial| run_trial(case, trial, cfg, &grid))
                .collect()
        });
        let aggregated = aggregate(case, cfg, &outcomes?);
        if aggregated.violations > 0 {
            if case == CaseId::I20s {
                findings.push(format!(
                    "FINDING (expected): {case} as stated is violated in {}/{} trials \
                     (min slack {:.6e}); the proof-backed constant is case I20p",
                    aggregated.violations, aggregated.trials, aggregated.min_slack
                ));
            } else {
                unexpected = true;
            }
        }
        cases.push(aggregated);
    }

    Ok(CampaignOutcome {
        report: Report {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed: cfg.seed,
            cases,
            wall_time_seconds: started.elapsed().as_secs_f64(),
        },
        unexpected_violations: unexpected,
        findings,
    })
}

struct TrialOutcome {
    violated: bool,
    inconclusive: bool,
    min_slack: f64,
    max_ratio: f64,
    worst: WorstWitness,
}

fn run_trial(
    case: CaseId,
    trial: usize,
    cfg: &CampaignConfig,
    grid: &[CaseParams],
) -> Result<TrialOutcome, CaseError> {
    let child = child_seed(cfg.seed, case.as_str(), trial as u64);
    let (inputs, mut budget) = sample_inputs(case, trial, cfg.dim_max, cfg.restarts, child);
    budget.relax_p_ordering = cfg.relax_p_ordering;
    let results = evaluate_case_sweep(case, &inputs, grid, &budget)?;

    let mut violated = false;
    let mut inconclusive = false;
    let mut min_slack = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut worst: Option<&CaseResult> = None;
    for res in &results {
        match res.status {
            CaseStatus::Violated => violated = true,
            CaseStatus::Inconclusive => inconclusive = true,
            _ => {}
        }
        max_ratio = max_ratio.max(eval_ratio(res));
        if res.slack < min_slack {
            min_slack = res.slack;
            worst = Some(res);
        }
    }
    let worst = worst.expect("parameter grids are nonempty");
    Ok(TrialOutcome {
        violated,
        inconclusive,
        min_slack,
        max_ratio,
        worst: WorstWitness {
            trial,
            lhs: worst.lhs,
            rhs: worst.rhs,
            mid: worst.mid,
            slack: worst.slack,
            status: worst.status.to_string(),
            params: worst.params,
            budget,
            inputs,
        },
    })
}

fn aggregate(case: CaseId, cfg: &CampaignConfig, outcomes: &[TrialOutcome]) -> CaseReport {
    let mut violations = 0;
    let mut inconclusive = 0;
    let mut min_slack = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut worst: Option<&TrialOutcome> = None;
    for out in outcomes {
        if out.violated {
            violations += 1;
        } else if out.inconclusive {
            inconclusive += 1;
        }
        max_ratio = max_ratio.max(out.max_ratio);
        if out.min_slack < min_slack {
            min_slack = out.min_slack;
            worst = Some(out);
        }
    }
    CaseReport {
        case_id: case.as_str().to_string(),
        trials: cfg.trials,
        violations,
        inconclusive,
        min_slack,
        max_ratio,
        worst: worst.map(|o| o.worst.clone()),
    }
}

/// Binding ratio of one evaluation: `lhs/rhs`, or the worse of the two
/// sides for a two-sided case. Values above one mean violation.
pub fn eval_ratio(res: &CaseResult) -> f64 {
    fn guard(num: f64, den: f64) -> f64 {
        if den.abs() > 1e-300 {
            num / den
        } else if num.abs() <= 1e-300 {
            1.0
        } else {
            f64::MAX
        }
    }
    match res.mid {
        Some(mid) => guard(res.lhs, mid).max(guard(mid, res.rhs)),
        None => guard(res.lhs, res.rhs),
    }
}

/// The per-case parameter grid swept for every trial: `p` over
/// `{1.2, 2, 3}` (filtered by the case's constraints), `r` at the
/// case minimum and one above, `alpha` over five points, `m` over
/// `{1, 2, 3}`, applied where the case uses each parameter.
pub fn param_grid(case: CaseId) -> Vec<CaseParams> {
    const ALPHAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
    let d = CaseParams::default;
    match case {
        CaseId::I1 | CaseId::I3 | CaseId::S4 | CaseId::E11 | CaseId::I19 => vec![d()],
        CaseId::I2 => [2u32, 3, 4].iter().map(|&n| d().with_n_power(n)).collect(),
        CaseId::I4 | CaseId::I10 => {
            // p >= q rules out p = 1.2; the r minimum is max(1, 2/p).
            let mut out = Vec::new();
            for p in [2.0f64, 3.0] {
                let r_min = (2.0 / p).max(1.0);
                for r in [r_min, r_min + 1.0] {
                    for alpha in ALPHAS {
                        out.push(d().with_p(p).with_r(r).with_alpha(alpha));
                    }
                }
            }
            out
        }
        CaseId::S1 => {
            let mut out = Vec::new();
            for p in [1.2, 2.0, 3.0] {
                for r in [1.0, 2.0] {
                    out.push(d().with_p(p).with_r(r));
                }
            }
            out
        }
        CaseId::S2 => {
            let mut out = Vec::new();
            for p in [1.2, 2.0, 3.0] {
                for m in [1u32, 2, 3] {
                    out.push(d().with_p(p).with_m(m));
                }
            }
            out
        }
        CaseId::S3 => [0.5, 1.0, 2.0].iter().map(|&r| d().with_r(r)).collect(),
        CaseId::S5 => ALPHAS.iter().map(|&a| d().with_alpha(a)).collect(),
        CaseId::I12 => {
            let mut out = Vec::new();
            for p in [2.0, 3.0] {
                for r in [1.0, 2.0] {
                    for alpha in ALPHAS {
                        out.push(d().with_p(p).with_r(r).with_alpha(alpha));
                    }
                }
            }
            out
        }
        CaseId::I13 | CaseId::I14 => {
            let mut out = Vec::new();
            for r in [1.0, 2.0] {
                for alpha in ALPHAS {
                    out.push(d().with_r(r).with_alpha(alpha));
                }
            }
            out
        }
        CaseId::I15 => {
            let mut out = Vec::new();
            for p in [2.0, 3.0] {
                for alpha in ALPHAS {
                    out.push(d().with_p(p).with_alpha(alpha));
                }
            }
            out
        }
        CaseId::I16 => [2.0, 3.0].iter().map(|&p| d().with_p(p)).collect(),
        CaseId::I17 => {
            let mut out = Vec::new();
            for m in [1u32, 2, 3] {
                for p in [2.0, 3.0] {
                    if p < m as f64 {
                        continue;
                    }
                    for r in [m as f64, m as f64 + 1.0] {
                        for alpha in ALPHAS {
                            out.push(d().with_p(p).with_m(m).with_r(r).with_alpha(alpha));
                        }
                    }
                }
            }
            out
        }
        CaseId::I18 => [1.0, 2.0].iter().map(|&r| d().with_r(r)).collect(),
        CaseId::I20s | CaseId::I20p | CaseId::E21 => {
            [2.0, 3.0, 4.0].iter().map(|&r| d().with_r(r)).collect()
        }
    }
}

fn draw(kind: MatrixKind, rows: usize, cols: usize, s: &mut Stream) -> ComplexMatrix {
    generate(&GenSpec {
        kind,
        rows,
        cols,
        scale: 1.0,
        seed: s.next_u64(),
    })
    .expect("admissible generator spec")
}

fn dim(s: &mut Stream, dim_max: usize) -> usize {
    1 + s.next_below(dim_max)
}

/// Draw one admissible instance for `case`. Deterministic in `child`.
pub fn sample_inputs(
    case: CaseId,
    trial: usize,
    dim_max: usize,
    restarts: usize,
    child: u64,
) -> (CaseInputs, OptBudget) {
    let mut s = Stream::new(child);
    let inputs = match case {
        CaseId::I1 | CaseId::I2 | CaseId::I3 | CaseId::I4 | CaseId::I14 => {
            let n = dim(&mut s, dim_max);
            CaseInputs::Matrix(draw(MatrixKind::Ginibre, n, n, &mut s))
        }
        CaseId::S1 | CaseId::S2 => {
            let (g1, g2) = s.next_gaussian_pair();
            CaseInputs::Scalars {
                a: g1 * g1,
                b: g2 * g2,
            }
        }
        CaseId::S3 => {
            let n = dim(&mut s, dim_max);
            let t = draw(MatrixKind::Psd, n, n, &mut s);
            let x = unit_vector(n, s.next_u64());
            CaseInputs::MatrixVector { t, x }
        }
        CaseId::S4 => {
            let n = dim(&mut s, dim_max);
            let t = draw(MatrixKind::Hermitian, n, n, &mut s);
            let x = unit_vector(n, s.next_u64());
            CaseInputs::MatrixVector { t, x }
        }
        CaseId::S5 => {
            let n = dim(&mut s, dim_max);
            let t = draw(MatrixKind::Ginibre, n, n, &mut s);
            let x = unit_vector(n, s.next_u64());
            let y = unit_vector(n, s.next_u64());
            CaseInputs::MatrixVectors { t, x, y }
        }
        CaseId::I10 | CaseId::I12 | CaseId::I13 | CaseId::I17 => {
            let n1 = dim(&mut s, dim_max);
            let n2 = dim(&mut s, dim_max);
            let b = draw(MatrixKind::Ginibre, n1, n2, &mut s);
            let c = draw(MatrixKind::Ginibre, n2, n1, &mut s);
            CaseInputs::Pair(OffDiagonalPair::new(b, c).expect("compatible blocks"))
        }
        CaseId::E11 => {
            let n = dim(&mut s, dim_max);
            let b = draw(MatrixKind::Psd, n, n, &mut s);
            let c = draw(MatrixKind::Psd, n, n, &mut s);
            CaseInputs::Pair(OffDiagonalPair::new(b, c).expect("compatible blocks"))
        }
        CaseId::I15 => {
            let count = 1 + s.next_below(3);
            let n1 = dim(&mut s, dim_max);
            let n2 = dim(&mut s, dim_max);
            let pairs = (0..count)
                .map(|_| {
                    let b = draw(MatrixKind::Ginibre, n1, n2, &mut s);
                    let c = draw(MatrixKind::Ginibre, n2, n1, &mut s);
                    OffDiagonalPair::new(b, c).expect("compatible blocks")
                })
                .collect();
            CaseInputs::Pairs(pairs)
        }
        CaseId::I16 => {
            let count = 1 + s.next_below(3);
            let n = dim(&mut s, dim_max);
            let ms = (0..count)
                .map(|_| draw(MatrixKind::Ginibre, n, n, &mut s))
                .collect();
            CaseInputs::Matrices(ms)
        }
        CaseId::I18 => {
            let na = dim(&mut s, dim_max);
            let nd = dim(&mut s, dim_max);
            CaseInputs::DiagBlocks {
                a: draw(MatrixKind::Ginibre, na, na, &mut s),
                d: draw(MatrixKind::Ginibre, nd, nd, &mut s),
            }
        }
        CaseId::I19 => {
            let n = dim(&mut s, dim_max);
            let a = draw(MatrixKind::Ginibre, n, n, &mut s);
            let b = draw(MatrixKind::Ginibre, n, n, &mut s);
            // Odd trials exercise the A = D, B = C specialization.
            if trial % 2 == 1 {
                CaseInputs::FullBlocks {
                    a: a.clone(),
                    b: b.clone(),
                    c: b,
                    d: a,
                }
            } else {
                CaseInputs::FullBlocks {
                    a,
                    b,
                    c: draw(MatrixKind::Ginibre, n, n, &mut s),
                    d: draw(MatrixKind::Ginibre, n, n, &mut s),
                }
            }
        }
        CaseId::I20s | CaseId::I20p => {
            let n = dim(&mut s, dim_max);
            let b = draw(MatrixKind::Ginibre, n, n, &mut s);
            let c = draw(MatrixKind::Ginibre, n, n, &mut s);
            CaseInputs::Pair(OffDiagonalPair::new(b, c).expect("compatible blocks"))
        }
        CaseId::E21 => {
            let n = 2 + s.next_below(2 * dim_max - 1);
            CaseInputs::Matrix(draw(MatrixKind::NilpotentOffdiag, n, n, &mut s))
        }
    };
    let budget = OptBudget {
        restarts,
        seed: s.next_u64(),
        relax_p_ordering: false,
    };
    (inputs, budget)
}

/// True when the descriptor declares a `<=` or two-sided relation (the
/// inequality campaign's notion of a checkable bound).
pub fn is_le_case(case: CaseId) -> bool {
    !matches!(descriptor(case).relation, Relation::Equality)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_admissible() {
        use radlab_core::catalogue::evaluate_case;
        for &case in &CaseId::ALL {
            let grid = param_grid(case);
            assert!(!grid.is_empty());
            let (inputs, budget) = sample_inputs(case, 0, 2, 8, 1234);
            for params in &grid {
                // No constraint rejections on the default grid.
                evaluate_case(case, &inputs, params, &budget).unwrap();
            }
        }
    }

    #[test]
    fn samplers_are_deterministic() {
        for &case in &CaseId::ALL {
            let a = sample_inputs(case, 5, 3, 8, 99);
            let b = sample_inputs(case, 5, 3, 8, 99);
            assert_eq!(a.0, b.0);
            assert_eq!(a.1, b.1);
        }
    }

    #[test]
    fn small_campaign_smoke() {
        let cfg = CampaignConfig {
            cases: vec![CaseId::I3, CaseId::E11, CaseId::I20s],
            trials: 8,
            dim_max: 2,
            seed: 7,
            threads: 1,
            restarts: 8,
        relax_p_ordering: false,
        };
        let out = run_campaign(&cfg).unwrap();
        assert_eq!(out.report.cases.len(), 3);
        assert!(!out.unexpected_violations);
        let i20s = &out.report.cases[2];
        assert!(i20s.violations > 0, "I20s should be a finding");
        assert!(!out.findings.is_empty());
        for case in &out.report.cases[..2] {
            assert_eq!(case.violations, 0, "{}", case.case_id);
            assert!(case.violations + case.inconclusive <= case.trials);
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let base = CampaignConfig {
            cases: vec![CaseId::I13, CaseId::I15],
            trials: 6,
            dim_max: 2,
            seed: 11,
            threads: 1,
            restarts: 8,
        relax_p_ordering: false,
        };
        let mut wide = base.clone();
        wide.threads = 4;
        let a = run_campaign(&base).unwrap().report;
        let b = run_campaign(&wide).unwrap().report;
        for (x, y) in a.cases.iter().zip(&b.cases) {
            assert_eq!(x.min_slack.to_bits(), y.min_slack.to_bits());
            assert_eq!(x.max_ratio.to_bits(), y.max_ratio.to_bits());
            assert_eq!(x.violations, y.violations);
        }
    }

    #[test]
    fn worst_witness_replays_to_recorded_slack() {
        use radlab_core::catalogue::evaluate_case;
        let cfg = CampaignConfig {
            cases: vec![CaseId::I10],
            trials: 5,
            dim_max: 3,
            seed: 21,
            threads: 1,
            restarts: 8,
        relax_p_ordering: false,
        };
        let out = run_campaign(&cfg).unwrap();
        let worst = out.report.cases[0].worst.as_ref().unwrap();
        let replay = evaluate_case(
            CaseId::I10,
            &worst.inputs,
            &worst.params,
            &worst.budget,
        )
        .unwrap();
        assert!((replay.slack - worst.slack).abs() <= 1e-12);
    }
}
