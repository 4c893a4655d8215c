//! Brute-force ground truth for small instances.
//!
//! Everything here certifies the fast paths: exact doubling dimension by
//! exhaustive set cover, the exact low-dimensional-mapping optimum by subset
//! enumeration, an exact LP reference via the dense simplex, Monte-Carlo
//! Rademacher estimators whose per-draw suprema are computed exactly, and
//! the feasibility witness that transfers a mapping solution into the
//! program's variables. Size caps keep the whole certification suite under
//! a few minutes; exceeding them is an error, not a silent fallback.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::program::LdmProgram;
use crate::rng::CounterRng;
use crate::sample::MetricSample;
use crate::simplex::{self, LinearProgram, LpOutcome, LpRow, PivotRule, RowSense};
use crate::{Error, Result};

/// Exact doubling dimension is exponential in n; cap it.
pub const EXACT_DDIM_CAP: usize = 12;
/// Subset enumeration cap for the exact mapping optimum.
pub const BRUTE_LDM_CAP: usize = 10;
/// Cap for the exact per-draw Lipschitz supremum.
pub const MC_LIPSCHITZ_CAP: usize = 24;
/// Variable cap for the reference LP path.
pub const REFERENCE_LP_CAP: usize = 200;

/// Exact doubling dimension of the whole sample (n ≤ 12).
pub fn exact_ddim(sample: &MetricSample) -> Result<f64> {
    let all: Vec<usize> = (0..sample.len()).collect();
    exact_ddim_subset(sample, &all)
}

/// Exact doubling dimension of the sub-metric on `subset` (|subset| ≤ 12).
///
/// log2 of the exact doubling constant: the maximum over centers x in the
/// subset and radii drawn from its pairwise distances of the minimum number
/// of half-radius balls (centered at subset points) covering B(x, r).
pub fn exact_ddim_subset(sample: &MetricSample, subset: &[usize]) -> Result<f64> {
    let m = subset.len();
    if m == 0 {
        return Err(Error::EmptySample);
    }
    if m > EXACT_DDIM_CAP {
        return Err(Error::ScaleExceeded { what: "exact_ddim", limit: EXACT_DDIM_CAP, actual: m });
    }
    if m == 1 {
        return Ok(0.0);
    }

    let mut lambda = 1usize;
    for &x in subset {
        for &y in subset {
            let r = sample.dist(x, y);
            if r <= 0.0 {
                continue;
            }
            // Members of the closed ball B(x, r), as positions in `subset`.
            let members: Vec<usize> =
                (0..m).filter(|&p| sample.dist(x, subset[p]) <= r).collect();
            if members.len() <= lambda {
                continue; // cannot beat the current maximum
            }
            let cover = min_cover_size(sample, subset, &members, r / 2.0);
            lambda = lambda.max(cover);
        }
    }
    Ok((lambda as f64).log2())
}

/// Minimum number of radius-`r` balls centered at subset points covering the
/// member positions, by exhaustive search over cover sizes 1, 2, 3, … with
/// early exit.
fn min_cover_size(sample: &MetricSample, subset: &[usize], members: &[usize], r: f64) -> usize {
    let k = members.len();
    debug_assert!(k < 32);
    let full: u32 = (1u32 << k) - 1;

    // Candidate masks, one per potential center; keep maximal ones only.
    let mut masks: Vec<u32> = Vec::new();
    for &y in subset {
        let mut mask = 0u32;
        for (pos, &p) in members.iter().enumerate() {
            if sample.dist(y, subset[p]) <= r {
                mask |= 1 << pos;
            }
        }
        if mask != 0 {
            masks.push(mask);
        }
    }
    masks.sort_unstable();
    masks.dedup();
    let kept: Vec<u32> = masks
        .iter()
        .copied()
        .filter(|&a| !masks.iter().any(|&b| b != a && b & a == a))
        .collect();
    let mut masks = kept;
    // Largest first helps the search exit early.
    masks.sort_by_key(|m| core::cmp::Reverse(m.count_ones()));

    for size in 1..=k {
        if cover_dfs(&masks, full, size) {
            return size;
        }
    }
    k
}

fn cover_dfs(masks: &[u32], uncovered: u32, budget: usize) -> bool {
    if uncovered == 0 {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let bit = uncovered.trailing_zeros();
    for &mask in masks {
        if mask & (1 << bit) != 0 && cover_dfs(masks, uncovered & !mask, budget - 1) {
            return true;
        }
    }
    false
}

/// Exact mapping optimum: enumerate all nonempty subsets T, keep those with
/// exact doubling dimension at most `d_target`, return the one minimizing
/// the multiplicity-weighted normalized mapping cost. Ties resolve to the
/// lexicographically smallest index list.
pub fn brute_force_ldm(sample: &MetricSample, d_target: f64) -> Result<(Vec<usize>, f64)> {
    let n = sample.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if n > BRUTE_LDM_CAP {
        return Err(Error::ScaleExceeded {
            what: "brute_force_ldm",
            limit: BRUTE_LDM_CAP,
            actual: n,
        });
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
        let dd = exact_ddim_subset(sample, &subset)?;
        if dd > d_target + 1e-9 {
            continue;
        }
        let mut cost = 0.0;
        for j in 0..n {
            let (_, d) = sample.nearest_in(j, &subset);
            cost += sample.multiplicity(j) as f64 * d;
        }
        let better = match &best {
            None => true,
            Some((bc, bs)) => cost < bc - 1e-15 || ((cost - bc).abs() <= 1e-15 && subset < *bs),
        };
        if better {
            best = Some((cost, subset));
        }
    }
    let (cost, subset) = best.expect("singletons always qualify");
    Ok((subset, cost))
}

/// Exact reference optimum of the relaxed program (≤ 200 variables).
///
/// The box constraints become explicit upper-bound rows; the program's own
/// rows translate directly. Used only by tests and the oracle surface.
pub fn reference_lp(prog: &LdmProgram, rule: PivotRule) -> Result<LpOutcome> {
    let nv = prog.layout.num_vars;
    if nv > REFERENCE_LP_CAP {
        return Err(Error::ScaleExceeded {
            what: "reference_lp",
            limit: REFERENCE_LP_CAP,
            actual: nv,
        });
    }
    let mut rows: Vec<LpRow> = Vec::with_capacity(prog.rows.len() + nv);
    for row in &prog.rows {
        rows.push(LpRow {
            coeffs: row.terms.clone(),
            sense: match row.sense {
                crate::program::Sense::Le => RowSense::Le,
                crate::program::Sense::Ge => RowSense::Ge,
            },
            rhs: row.rhs,
        });
    }
    for v in 0..nv {
        rows.push(LpRow { coeffs: vec![(v, 1.0)], sense: RowSense::Le, rhs: 1.0 });
    }
    let lp = LinearProgram { num_vars: nv, objective: prog.objective.clone(), rows };
    simplex::solve(&lp, rule)
}

/// Assignment transferring a mapping solution `t_subset` into the program.
///
/// Builds a nested sub-hierarchy of the instance hierarchy that represents
/// the subset at every scale, sets the matching indicators to 1, and gives
/// every point the minimal cost its rows demand. A repair pass then closes
/// any residual covering or monotone-support deficit by selecting the
/// offending row's center (the paper-style covering constants do not quite
/// close at adjacent levels); indicators only move up and costs only
/// shrink, so the pass terminates and the objective never grows.
pub fn feasibility_witness(
    sample: &MetricSample,
    hierarchy: &crate::hierarchy::NetHierarchy,
    prog: &LdmProgram,
    t_subset: &[usize],
) -> Result<Vec<f64>> {
    if t_subset.is_empty() {
        return Err(Error::EmptySample);
    }
    let h = hierarchy;
    let t = h.t;
    let num_z = prog.layout.num_z;

    // 1-covering hierarchy of the subset at the instance scales.
    let mut sub_levels: Vec<Vec<usize>> = Vec::with_capacity(t + 1);
    sub_levels.push(vec![t_subset[0]]);
    for i in 1..=t {
        let r = h.radius(i);
        let mut level = sub_levels[i - 1].clone();
        for &p in t_subset {
            if level.contains(&p) {
                continue;
            }
            if level.iter().all(|&q| sample.dist(p, q) >= r) {
                level.push(p);
            }
        }
        level.sort_unstable();
        sub_levels.push(level);
    }

    // Extend into a sub-hierarchy of `hierarchy`: keep previous selections,
    // and for each subset net point not represented within 2·2^{-i}, adopt
    // its nearest net point of S_i.
    let mut selected: Vec<Vec<usize>> = Vec::with_capacity(t + 1);
    selected.push(h.levels[0].clone());
    for i in 1..=t {
        let r2 = 2.0 * h.radius(i);
        let mut level = selected[i - 1].clone();
        for &v in &sub_levels[i] {
            if !level.iter().any(|&q| sample.dist(v, q) <= r2) {
                let w = crate::hierarchy::nearest_in_level(h, sample, v, i);
                if !level.contains(&w) {
                    level.push(w);
                }
            }
        }
        level.sort_unstable();
        selected.push(level);
    }

    let mut x = vec![0.0; prog.layout.num_vars];
    for (i, level) in selected.iter().enumerate() {
        for &l in level {
            x[prog.layout.z(i, l)] = 1.0;
        }
    }

    for _pass in 0..=num_z {
        assign_min_costs(prog, &mut x);
        let Some((idx, _)) = prog.first_violated_row(&x, 1e-9) else {
            return Ok(x);
        };
        let row = &prog.rows[idx];
        match row.kind {
            crate::program::RowKind::Covering
            | crate::program::RowKind::CostLevel
            | crate::program::RowKind::Monotone => {
                let i = row.level;
                let center = prog.neighborhoods.centers[i][row.point];
                let mut changed = false;
                // A net point of S_i belongs to every deeper level too.
                for k in i..=t {
                    let var = prog.layout.z(k, center);
                    if x[var] != 1.0 {
                        x[var] = 1.0;
                        changed = true;
                    }
                }
                if !changed {
                    return Err(Error::NoCertificate(
                        "witness repair made no progress".to_string(),
                    ));
                }
            }
            _ => {
                return Err(Error::NoCertificate(format!(
                    "witness violates a non-repairable row: {:?}",
                    row.kind
                )));
            }
        }
    }
    Err(Error::NoCertificate("witness repair did not converge".to_string()))
}

/// Give every point the minimal cost consistent with its floor and
/// per-level rows under the current indicators.
fn assign_min_costs(prog: &LdmProgram, x: &mut [f64]) {
    let t = prog.t;
    for j in 0..prog.n {
        // At the deepest level every point is its own net point.
        let zt = x[prog.layout.z(t, j)];
        let mut c = prog.delta_eff * (1.0 - zt);
        for i in 0..=t {
            let fsum = prog.set_sum(&prog.neighborhoods.f[i][j], x);
            let need = (1.0 - zt - fsum) * 0.5f64.powi(i as i32);
            c = c.max(need);
        }
        x[prog.layout.c(j)] = c.max(0.0).min(1.0);
    }
}

/// Monte-Carlo Rademacher estimate for the unit-norm linear class.
///
/// Per draw the supremum over the unit ball is exactly ‖Σ σ_i x_i‖₂ / n.
/// Returns (mean, standard error).
pub fn mc_rademacher_linear(rows: &[Vec<f64>], draws: usize, seed: u64) -> (f64, f64) {
    let n = rows.len();
    assert!(n > 0 && draws > 0);
    let dim = rows[0].len();
    let mut rng = CounterRng::new(seed).stream(0x6d63_6c69_6e);
    let mut values = Vec::with_capacity(draws);
    let mut acc = vec![0.0f64; dim];
    for _ in 0..draws {
        acc.iter_mut().for_each(|v| *v = 0.0);
        for row in rows {
            let s = rng.next_sign();
            for (a, &v) in acc.iter_mut().zip(row.iter()) {
                *a += s * v;
            }
        }
        let norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
        values.push(norm / n as f64);
    }
    mean_stderr(&values)
}

/// Monte-Carlo Rademacher estimate for L-Lipschitz [-1,1]-valued functions
/// on the sample; the per-draw supremum is computed exactly by the
/// reference solver on the system |f_i - f_j| ≤ L·ρ_ij, |f_i| ≤ 1 (n ≤ 24).
pub fn mc_rademacher_lipschitz(
    sample: &MetricSample,
    l: f64,
    draws: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let n = sample.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if n > MC_LIPSCHITZ_CAP {
        return Err(Error::ScaleExceeded {
            what: "mc_rademacher_lipschitz",
            limit: MC_LIPSCHITZ_CAP,
            actual: n,
        });
    }

    // Shift to g = f + 1 ∈ [0, 2]: nonnegative variables and a feasible
    // slack basis, no phase-1 work per draw.
    let mut rows: Vec<LpRow> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                rows.push(LpRow {
                    coeffs: vec![(i, 1.0), (j, -1.0)],
                    sense: RowSense::Le,
                    rhs: l * sample.dist(i, j),
                });
            }
        }
        rows.push(LpRow { coeffs: vec![(i, 1.0)], sense: RowSense::Le, rhs: 2.0 });
    }

    let mut rng = CounterRng::new(seed).stream(0x6d63_6c69_70);
    let mut values = Vec::with_capacity(draws);
    let mut sigma = vec![0.0f64; n];
    for _ in 0..draws {
        let mut sigma_sum = 0.0;
        for s in sigma.iter_mut() {
            *s = rng.next_sign();
            sigma_sum += *s;
        }
        let lp = LinearProgram {
            num_vars: n,
            objective: sigma.iter().map(|&s| -s).collect(),
            rows: rows.clone(),
        };
        match simplex::solve(&lp, PivotRule::Dantzig)? {
            LpOutcome::Optimal { objective, .. } => {
                let sup = -objective - sigma_sum;
                values.push(sup / n as f64);
            }
            other => {
                return Err(Error::NoCertificate(format!(
                    "per-draw supremum LP returned {other:?}"
                )))
            }
        }
    }
    Ok(mean_stderr(&values))
}

fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Bundle of oracle outputs for one instance, for the CLI oracle surface.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Exact doubling dimension of the sample.
    pub exact_ddim: f64,
    /// Exact mapping optimum: subset indices and normalized weighted cost.
    pub ldm_optimum: (Vec<usize>, f64),
    /// Exact optimum of the relaxed program.
    pub lp_optimum: f64,
    /// Monte-Carlo Lipschitz Rademacher estimate at L = 1, when within cap:
    /// (mean, standard error, draws).
    pub rademacher_estimate: Option<(f64, f64, usize)>,
}

/// Run the full oracle battery on a small instance.
pub fn oracle_report(
    sample: &MetricSample,
    prog: &LdmProgram,
    d_target: f64,
    seed: u64,
) -> Result<OracleResult> {
    let exact = exact_ddim(sample)?;
    let ldm = brute_force_ldm(sample, d_target)?;
    let lp = match reference_lp(prog, PivotRule::Bland)? {
        LpOutcome::Optimal { objective, .. } => objective,
        other => {
            return Err(Error::NoCertificate(format!("reference LP returned {other:?}")));
        }
    };
    let rade = if sample.len() <= MC_LIPSCHITZ_CAP {
        let draws = 200;
        let (mean, se) = mc_rademacher_lipschitz(sample, 1.0, draws, seed)?;
        Some((mean, se, draws))
    } else {
        None
    };
    Ok(OracleResult {
        exact_ddim: exact,
        ldm_optimum: ldm,
        lp_optimum: lp,
        rademacher_estimate: rade,
    })
}
