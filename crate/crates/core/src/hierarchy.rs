//! Nested net hierarchies S_0 ⊆ … ⊆ S_t with packing and c-covering.
//!
//! Level i is a 2^{-i}-net: members are pairwise at least 2^{-i} apart
//! (packing) and every member of level i+1 lies within c·2^{-i} of some
//! member of level i (covering). The greedy construction achieves c = 1,
//! which is what the LDM program requires.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::sample::MetricSample;
use crate::{Error, Result};

/// Absolute slack for the covering check. The top level covers at radius
/// c·2^0 = diam, where a pair realizing the diameter sits exactly on the
/// boundary; the strict inequality is unattainable there.
pub const COVER_TOL: f64 = 1e-9;

/// A nested net hierarchy over a normalized sample.
#[derive(Debug, Clone)]
pub struct NetHierarchy {
    /// Point indices per level, ascending; `levels[0]` is a singleton and
    /// `levels[t]` is every (deduplicated) point.
    pub levels: Vec<Vec<usize>>,
    /// Deepest level: `max(1, ceil(log2(1/delta)))`, or 0 for one point.
    pub t: usize,
    /// Covering parameter achieved by construction.
    pub c: f64,
    /// For each level i ≥ 1, a covering parent in level i-1 per member.
    pub parent: Vec<BTreeMap<usize, usize>>,
}

impl NetHierarchy {
    /// True iff point `p` is a member of level `i`.
    pub fn contains(&self, i: usize, p: usize) -> bool {
        self.levels[i].binary_search(&p).is_ok()
    }

    /// Net radius of level `i`.
    pub fn radius(&self, i: usize) -> f64 {
        0.5f64.powi(i as i32)
    }
}

/// First violated hierarchy invariant, with its witness.
#[derive(Debug, Clone, PartialEq)]
pub enum HierarchyViolation {
    /// `levels[0]` is not a singleton.
    BottomNotSingleton,
    /// A point of level `i` is missing from level `i + 1`.
    NotNested { level: usize, point: usize },
    /// Top level does not contain every point.
    TopIncomplete { point: usize },
    /// Two members of level `i` closer than 2^{-i}.
    Packing { level: usize, a: usize, b: usize, dist: f64 },
    /// A member of level `i + 1` farther than c·2^{-i} from all of level `i`.
    Covering { level: usize, point: usize, nearest: f64 },
}

/// Outcome of [`validate_hierarchy`].
#[derive(Debug, Clone)]
pub struct HierarchyReport {
    /// True iff nested + packing + covering all hold.
    pub pass: bool,
    /// First violation in deterministic scan order.
    pub violation: Option<HierarchyViolation>,
}

/// Build a hierarchy by greedy net extraction.
///
/// Levels are constructed top-down. Level i is seeded with level i-1 and
/// then scans all points in ascending index order, admitting a point iff it
/// is at least 2^{-i} from everything already admitted. A rejected point is
/// strictly within 2^{-i} of a member, so the construction 1-covers; `c` is
/// recorded on the result for the validator.
pub fn build_hierarchy(sample: &MetricSample, c: f64) -> Result<NetHierarchy> {
    if c < 1.0 {
        return Err(Error::InvalidParameter("covering parameter c must be >= 1".to_string()));
    }
    let n = sample.len();
    if n == 1 {
        return Ok(NetHierarchy { levels: vec![vec![0]], t: 0, c, parent: Vec::new() });
    }
    let delta = sample.delta();
    if delta <= 0.0 {
        return Err(Error::InvalidParameter("duplicates not collapsed".to_string()));
    }

    let t = ((1.0 / delta).log2().ceil() as usize).max(1);
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(t + 1);
    levels.push(vec![0]);
    for i in 1..=t {
        let r = 0.5f64.powi(i as i32);
        let mut level = levels[i - 1].clone();
        for p in 0..n {
            if level.binary_search(&p).is_ok() {
                continue;
            }
            if level.iter().all(|&q| sample.dist(p, q) >= r) {
                level.push(p);
                level.sort_unstable();
            }
        }
        levels.push(level);
    }

    let mut parent: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(t);
    for i in 1..=t {
        let r = c * 0.5f64.powi(i as i32 - 1);
        let mut map = BTreeMap::new();
        for &p in &levels[i] {
            let (q, d) = sample.nearest_in(p, &levels[i - 1]);
            debug_assert!(d < r + COVER_TOL, "construction must {c}-cover");
            let _ = r;
            map.insert(p, q);
        }
        parent.push(map);
    }

    Ok(NetHierarchy { levels, t, c, parent })
}

/// Check nestedness, packing and c-covering, reporting the first violation.
pub fn validate_hierarchy(h: &NetHierarchy, sample: &MetricSample) -> HierarchyReport {
    let fail = |v: HierarchyViolation| HierarchyReport { pass: false, violation: Some(v) };

    if h.levels.is_empty() || h.levels[0].len() != 1 {
        return fail(HierarchyViolation::BottomNotSingleton);
    }
    for i in 0..h.t {
        for &p in &h.levels[i] {
            if !h.contains(i + 1, p) {
                return fail(HierarchyViolation::NotNested { level: i, point: p });
            }
        }
    }
    for p in 0..sample.len() {
        if !h.contains(h.t, p) {
            return fail(HierarchyViolation::TopIncomplete { point: p });
        }
    }
    for (i, level) in h.levels.iter().enumerate() {
        let r = h.radius(i);
        for (ai, &a) in level.iter().enumerate() {
            for &b in level.iter().skip(ai + 1) {
                let d = sample.dist(a, b);
                if d < r - COVER_TOL {
                    return fail(HierarchyViolation::Packing { level: i, a, b, dist: d });
                }
            }
        }
    }
    for i in 0..h.t {
        let r = h.c * h.radius(i);
        for &p in &h.levels[i + 1] {
            let (_, d) = sample.nearest_in(p, &h.levels[i]);
            if d >= r + COVER_TOL {
                return fail(HierarchyViolation::Covering { level: i, point: p, nearest: d });
            }
        }
    }
    HierarchyReport { pass: true, violation: None }
}

/// Nearest member of level `i` to point `v`; ties break to the smaller index.
///
/// For a 1-covering hierarchy the returned distance is below 2·2^{-i}: the
/// covering chain from level t up to level i telescopes to
/// c·(2^{-i} + … + 2^{-t}) < 2c·2^{-i}.
pub fn nearest_in_level(h: &NetHierarchy, sample: &MetricSample, v: usize, i: usize) -> usize {
    debug_assert!(i <= h.t);
    let (q, _) = sample.nearest_in(v, &h.levels[i]);
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{sample_1d, sample_from_coords as sample_2d};

    #[test]
    fn single_point_degenerates() {
        let s = sample_1d(&[0.3]);
        let h = build_hierarchy(&s, 1.0).unwrap();
        assert_eq!(h.t, 0);
        assert_eq!(h.levels, vec![vec![0]]);
        assert!(validate_hierarchy(&h, &s).pass);
    }

    #[test]
    fn two_points_get_the_t_floor() {
        let s = sample_1d(&[0.0, 1.0]);
        let h = build_hierarchy(&s, 1.0).unwrap();
        assert_eq!(h.t, 1);
        assert_eq!(h.levels[0], vec![0]);
        assert_eq!(h.levels[1], vec![0, 1]);
        assert!(validate_hierarchy(&h, &s).pass);
    }

    #[test]
    fn segment_8_points() {
        let xs: Vec<f64> = (0..8).map(|i| i as f64 / 7.0).collect();
        let s = sample_1d(&xs);
        let h = build_hierarchy(&s, 1.0).unwrap();
        assert_eq!(h.t, 3); // delta = 1/7, ceil(log2 7) = 3
        for i in 0..h.t {
            assert!(h.levels[i].len() <= h.levels[i + 1].len());
        }
        assert_eq!(h.levels[3].len(), 8);
        assert!(validate_hierarchy(&h, &s).pass);
    }

    #[test]
    fn validator_catches_packing_violation() {
        let xs: Vec<f64> = (0..8).map(|i| i as f64 / 7.0).collect();
        let s = sample_1d(&xs);
        let mut h = build_hierarchy(&s, 1.0).unwrap();
        // Points 0 and 1 are 1/7 < 2^{-1} apart: injecting 1 into level 1
        // breaks packing there.
        if !h.contains(1, 1) {
            h.levels[1].push(1);
            h.levels[1].sort_unstable();
            // keep it nested
            for i in 2..=h.t {
                if !h.contains(i, 1) {
                    h.levels[i].push(1);
                    h.levels[i].sort_unstable();
                }
            }
        }
        let rep = validate_hierarchy(&h, &s);
        assert!(!rep.pass);
        assert!(matches!(rep.violation, Some(HierarchyViolation::Packing { .. })));
    }

    #[test]
    fn validator_catches_nesting_violation() {
        let xs: Vec<f64> = (0..8).map(|i| i as f64 / 7.0).collect();
        let s = sample_1d(&xs);
        let mut h = build_hierarchy(&s, 1.0).unwrap();
        // Remove a level-1 point from level 2.
        let p = *h.levels[1].last().unwrap();
        h.levels[2].retain(|&q| q != p);
        let rep = validate_hierarchy(&h, &s);
        assert!(!rep.pass);
        assert!(matches!(rep.violation, Some(HierarchyViolation::NotNested { .. })));
    }

    #[test]
    fn nearest_in_level_basics() {
        let xs: Vec<f64> = (0..8).map(|i| i as f64 / 7.0).collect();
        let s = sample_1d(&xs);
        let h = build_hierarchy(&s, 1.0).unwrap();
        // A net member is its own nearest neighbor.
        for i in 0..=h.t {
            for &p in &h.levels[i] {
                assert_eq!(nearest_in_level(&h, &s, p, i), p);
            }
        }
        // Rightmost point reaches S_1 within 2 * 2^{-1}.
        let w = nearest_in_level(&h, &s, 7, 1);
        assert!(s.dist(7, w) < 2.0 * h.radius(1));
    }

    #[test]
    fn nearest_in_level_distance_bound_random() {
        for seed in 0..10u64 {
            let coords = crate::testutil::random_unit_square(30, 900 + seed);
            let s = sample_2d(coords);
            let h = build_hierarchy(&s, 1.0).unwrap();
            assert!(validate_hierarchy(&h, &s).pass, "seed {seed}");
            for i in 0..=h.t {
                for v in 0..s.len() {
                    let w = nearest_in_level(&h, &s, v, i);
                    assert!(
                        s.dist(v, w) < 2.0 * h.radius(i),
                        "seed {seed} level {i} point {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn level_sizes_respect_covering_bound() {
        use crate::sample::{covering_number_bound, estimate_ddim};
        for seed in 0..5u64 {
            let coords = crate::testutil::random_unit_square(40, 300 + seed);
            let s = sample_2d(coords);
            let h = build_hierarchy(&s, 1.0).unwrap();
            let est = estimate_ddim(&s).value;
            for (i, level) in h.levels.iter().enumerate() {
                let eps = 0.5 * h.radius(i);
                let bound = covering_number_bound(est, 1.0, eps).unwrap();
                assert!(
                    level.len() as f64 <= bound + 1e-9,
                    "seed {seed} level {i}: {} > {bound}",
                    level.len()
                );
            }
        }
    }

    #[test]
    fn permuted_rebuild_still_valid() {
        let coords = crate::testutil::random_unit_square(25, 77);
        let s = sample_2d(coords.clone());
        let h = build_hierarchy(&s, 1.0).unwrap();
        assert!(validate_hierarchy(&h, &s).pass);
        let permuted: Vec<Vec<f64>> =
            (0..coords.len()).map(|i| coords[(i + 11) % coords.len()].clone()).collect();
        let sp = sample_2d(permuted);
        let hp = build_hierarchy(&sp, 1.0).unwrap();
        assert!(validate_hierarchy(&hp, &sp).pass);
    }
}
