//! Finite metric samples: validation, normalization, doubling-dimension
//! estimation and covering-number bounds.
//!
//! A [`RawSample`] is what ingestion produces: ids, pairwise distances
//! (explicit vectors or a distance matrix) and optional ±1 labels. Turning
//! it into a [`MetricSample`] validates the metric axioms, collapses
//! duplicate points (distance zero) into representatives carrying a
//! multiplicity, and rescales so the diameter is exactly 1.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::rng::CounterRng;
use crate::{Error, Result};

/// Full triangle check up to this size; randomized sampling beyond.
const FULL_TRIANGLE_LIMIT: usize = 200;
/// Per-center radius scan up to this size; logarithmic grid beyond.
const FULL_RADIUS_LIMIT: usize = 512;
/// Radii in the logarithmic fallback grid.
const GRID_RADII: usize = 64;
/// Triangle violations below `TRIANGLE_TOL * diam` are floating-point slack.
const TRIANGLE_TOL: f64 = 1e-9;

/// A triangle-inequality violation: `dist(a, b) > dist(a, via) + dist(via, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleViolation {
    /// First endpoint id.
    pub a: String,
    /// Second endpoint id.
    pub b: String,
    /// Intermediate point whose detour is shorter than the direct distance.
    pub via: String,
    /// Direct distance.
    pub direct: f64,
    /// Detour length through `via`.
    pub detour: f64,
}

/// Outcome of [`validate_metric`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// True iff all checked axioms hold.
    pub pass: bool,
    /// Number of triangle triples examined.
    pub checked_triples: usize,
    /// True when every triple was checked (small samples).
    pub exhaustive: bool,
    /// First violation found, in deterministic scan order.
    pub violation: Option<TriangleViolation>,
}

/// Ingested sample before validation and normalization.
#[derive(Debug, Clone)]
pub struct RawSample {
    ids: Vec<String>,
    dist: Vec<f64>,
    n: usize,
    labels: Option<Vec<f64>>,
    coords: Option<Vec<Vec<f64>>>,
}

impl RawSample {
    /// Build from coordinate vectors under the Euclidean distance.
    pub fn from_points(
        ids: Vec<String>,
        coords: Vec<Vec<f64>>,
        labels: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if ids.len() != n {
            return Err(Error::InvalidParameter("ids/points length mismatch".to_string()));
        }
        let dim = coords[0].len();
        for (i, row) in coords.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::MalformedDistances(format!(
                    "point {} has {} coordinates, expected {}",
                    ids[i],
                    row.len(),
                    dim
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::MalformedDistances(format!("non-finite coordinate at {}", ids[i])));
            }
        }
        check_labels(&labels, n)?;
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(&coords[i], &coords[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(RawSample { ids, dist, n, labels, coords: Some(coords) })
    }

    /// Build from an explicit square distance matrix.
    pub fn from_matrix(
        ids: Vec<String>,
        matrix: Vec<Vec<f64>>,
        labels: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if ids.len() != n {
            return Err(Error::InvalidParameter("ids/matrix length mismatch".to_string()));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedDistances(format!(
                    "row {} has {} entries, expected {} (matrix not square)",
                    ids[i],
                    row.len(),
                    n
                )));
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let d = matrix[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::MalformedDistances(format!(
                        "entry ({}, {}) is {}",
                        ids[i], ids[j], d
                    )));
                }
                dist[i * n + j] = d;
            }
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::MalformedDistances(format!("nonzero diagonal at {}", ids[i])));
            }
            for j in (i + 1)..n {
                if dist[i * n + j] != dist[j * n + i] {
                    return Err(Error::MalformedDistances(format!(
                        "asymmetric at ({}, {})",
                        ids[i], ids[j]
                    )));
                }
            }
        }
        check_labels(&labels, n)?;
        Ok(RawSample { ids, dist, n, labels, coords: None })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    /// True iff the sample has no points (unreachable after construction).
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Raw distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    fn diameter(&self) -> f64 {
        let mut d = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                d = f64::max(d, self.dist(i, j));
            }
        }
        d
    }
}

fn check_labels(labels: &Option<Vec<f64>>, n: usize) -> Result<()> {
    if let Some(ls) = labels {
        if ls.len() != n {
            return Err(Error::InvalidParameter("labels length mismatch".to_string()));
        }
        for &y in ls {
            if y != 1.0 && y != -1.0 {
                return Err(Error::InvalidParameter(format!("label {y} is not -1 or +1")));
            }
        }
    }
    Ok(())
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Check the metric axioms of a raw sample.
///
/// Symmetry and zero diagonal are enforced at construction, so the work here
/// is the triangle inequality: every triple for n ≤ 200, `10 n²` seeded
/// random triples beyond. Violations smaller than `1e-9 · diam` are ignored.
pub fn validate_metric(sample: &RawSample, seed: u64) -> ValidationReport {
    let n = sample.n;
    let tol = TRIANGLE_TOL * sample.diameter();
    let mut checked = 0usize;

    let check = |a: usize, b: usize, via: usize| -> Option<TriangleViolation> {
        let direct = sample.dist(a, b);
        let detour = sample.dist(a, via) + sample.dist(via, b);
        if direct > detour + tol {
            return Some(TriangleViolation {
                a: sample.ids[a].clone(),
                b: sample.ids[b].clone(),
                via: sample.ids[via].clone(),
                direct,
                detour,
            });
        }
        None
    };

    if n <= FULL_TRIANGLE_LIMIT {
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    checked += 1;
                    if let Some(v) = check(i, j, k) {
                        return ValidationReport {
                            pass: false,
                            checked_triples: checked,
                            exhaustive: true,
                            violation: Some(v),
                        };
                    }
                }
            }
        }
        ValidationReport { pass: true, checked_triples: checked, exhaustive: true, violation: None }
    } else {
        let mut rng = CounterRng::new(seed).stream(0x7269_616e_676c_65);
        let trials = 10 * n * n;
        for _ in 0..trials {
            let i = rng.next_index(n);
            let j = rng.next_index(n);
            let k = rng.next_index(n);
            if i == j || j == k || i == k {
                continue;
            }
            checked += 1;
            if let Some(v) = check(i, j, k) {
                return ValidationReport {
                    pass: false,
                    checked_triples: checked,
                    exhaustive: false,
                    violation: Some(v),
                };
            }
        }
        ValidationReport { pass: true, checked_triples: checked, exhaustive: false, violation: None }
    }
}

/// Validated, deduplicated sample rescaled to diameter 1.
///
/// Duplicate points are collapsed into a representative that carries a
/// multiplicity; all mapping-cost sums downstream weight by it. Distances
/// are stored normalized; `scale_factor` recovers original units.
#[derive(Debug, Clone)]
pub struct MetricSample {
    ids: Vec<String>,
    dist: Vec<f64>,
    n: usize,
    multiplicity: Vec<u32>,
    label_sum: Vec<f64>,
    labeled: bool,
    scale_factor: f64,
    delta: f64,
    n_original: usize,
    coords: Option<Vec<Vec<f64>>>,
}

impl MetricSample {
    /// Validate, deduplicate and normalize a raw sample.
    ///
    /// `seed` drives the randomized triangle check on large inputs.
    pub fn from_raw(raw: &RawSample, seed: u64) -> Result<Self> {
        let report = validate_metric(raw, seed);
        if !report.pass {
            let v = report.violation.expect("failed validation carries a violation");
            return Err(Error::MetricViolation(format!(
                "triangle violated by ({}, {}, {}): {} > {}",
                v.a, v.b, v.via, v.direct, v.detour
            )));
        }
        let n_raw = raw.n;

        // Collapse exact-zero distances; representative is the first point of
        // each duplicate class in input order.
        let mut rep_of = vec![usize::MAX; n_raw];
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n_raw {
            let mut assigned = None;
            for (ri, &r) in reps.iter().enumerate() {
                if raw.dist(r, i) == 0.0 {
                    assigned = Some(ri);
                    break;
                }
            }
            match assigned {
                Some(ri) => rep_of[i] = ri,
                None => {
                    rep_of[i] = reps.len();
                    reps.push(i);
                }
            }
        }
        let n = reps.len();

        let mut multiplicity = vec![0u32; n];
        let mut label_sum = vec![0.0; n];
        for i in 0..n_raw {
            let r = rep_of[i];
            multiplicity[r] += 1;
            if let Some(ls) = &raw.labels {
                label_sum[r] += ls[i];
            }
        }

        let mut diam = 0.0f64;
        for a in 0..n {
            for b in (a + 1)..n {
                diam = diam.max(raw.dist(reps[a], reps[b]));
            }
        }
        let scale_factor = if diam > 0.0 { diam } else { 1.0 };

        let mut dist = vec![0.0; n * n];
        let mut delta = f64::INFINITY;
        for a in 0..n {
            for b in 0..n {
                let d = raw.dist(reps[a], reps[b]) / scale_factor;
                dist[a * n + b] = d;
                if a != b {
                    delta = delta.min(d);
                }
            }
        }
        if n == 1 {
            delta = 0.0;
        }

        let coords = raw
            .coords
            .as_ref()
            .map(|cs| reps.iter().map(|&r| cs[r].clone()).collect::<Vec<_>>());

        Ok(MetricSample {
            ids: reps.iter().map(|&r| raw.ids[r].clone()).collect(),
            dist,
            n,
            multiplicity,
            label_sum,
            labeled: raw.labels.is_some(),
            scale_factor,
            delta,
            n_original: n_raw,
            coords,
        })
    }

    /// Number of representatives (deduplicated points).
    pub fn len(&self) -> usize {
        self.n
    }

    /// True iff there are no points (unreachable after construction).
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of points before deduplication.
    pub fn n_original(&self) -> usize {
        self.n_original
    }

    /// Normalized distance (diameter-1 units).
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Distance in original units.
    pub fn dist_original(&self, i: usize, j: usize) -> f64 {
        self.dist(i, j) * self.scale_factor
    }

    /// Minimum positive normalized distance (0 for a single point).
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Multiplier recovering original units from normalized distances.
    pub fn scale_factor(&self) -> f64 {
        self.scale_factor
    }

    /// Representative ids.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Duplicate multiplicity per representative.
    pub fn multiplicity(&self, i: usize) -> u32 {
        self.multiplicity[i]
    }

    /// True iff labels were supplied.
    pub fn is_labeled(&self) -> bool {
        self.labeled
    }

    /// Mean label of the originals collapsed into representative `i`,
    /// a value in [-1, 1].
    pub fn mean_label(&self, i: usize) -> f64 {
        self.label_sum[i] / self.multiplicity[i] as f64
    }

    /// Sum of labels collapsed into representative `i`.
    pub fn label_sum(&self, i: usize) -> f64 {
        self.label_sum[i]
    }

    /// Original coordinates of representative `i`, when ingested from points.
    pub fn coords(&self, i: usize) -> Option<&[f64]> {
        self.coords.as_ref().map(|cs| cs[i].as_slice())
    }

    /// Normalized distance from `i` to the nearest member of `set`.
    /// Ties resolve to the smallest index; empty set yields `(usize::MAX, ∞)`.
    pub fn nearest_in(&self, i: usize, set: &[usize]) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        for &s in set {
            let d = self.dist(i, s);
            if d < best.1 {
                best = (s, d);
            }
        }
        best
    }
}

/// Packing-based doubling-dimension estimate with its witness.
#[derive(Debug, Clone, PartialEq)]
pub struct DdimEstimate {
    /// log2 of the largest greedy half-radius packing found.
    pub value: f64,
    /// `(center index, radius, packing size)` achieving the maximum.
    pub witness: (usize, f64, usize),
}

/// Estimate the doubling dimension of the whole sample.
///
/// See [`estimate_ddim_subset`]; this uses every point.
pub fn estimate_ddim(sample: &MetricSample) -> DdimEstimate {
    let all: Vec<usize> = (0..sample.len()).collect();
    estimate_ddim_subset(sample, &all)
}

/// Estimate the doubling dimension of the sub-metric on `subset`.
///
/// The value is log2 of the maximum, over centers `x` in the subset and a
/// deterministic radius scan, of the size of a greedy maximal packing of the
/// closed ball `B(x, r)` with pairwise separation strictly greater than
/// `r/2`. A maximal such packing is also an `r/2`-cover of the ball, so the
/// estimate certifies the covering-number bound (`Lemma 1` style recursion).
///
/// Radii scanned per center: the distances from that center, their doubles,
/// and the dyadic scales `2^{-k} * diam`; beyond 512 points a logarithmic
/// grid of 64 radii is used. The greedy scan admits ball members in order of
/// ascending distance from the center, ties broken by ascending point index,
/// which makes the value invariant under permutations of the input.
pub fn estimate_ddim_subset(sample: &MetricSample, subset: &[usize]) -> DdimEstimate {
    assert!(!subset.is_empty(), "ddim of an empty subset");
    let m = subset.len();
    if m == 1 {
        return DdimEstimate { value: 0.0, witness: (subset[0], 0.0, 1) };
    }

    let mut diam = 0.0f64;
    let mut min_pos = f64::INFINITY;
    for (a, &i) in subset.iter().enumerate() {
        for &j in subset.iter().skip(a + 1) {
            let d = sample.dist(i, j);
            diam = diam.max(d);
            if d > 0.0 {
                min_pos = min_pos.min(d);
            }
        }
    }

    let grid: Option<Vec<f64>> = if m > FULL_RADIUS_LIMIT {
        let lo = min_pos.max(1e-300);
        let hi = 2.0 * diam;
        let ratio = (hi / lo).ln();
        Some(
            (0..GRID_RADII)
                .map(|k| lo * (ratio * k as f64 / (GRID_RADII - 1) as f64).exp())
                .collect(),
        )
    } else {
        None
    };

    let dyadics: Vec<f64> = {
        let mut v = Vec::new();
        if diam > 0.0 && min_pos.is_finite() {
            let levels = (1.0 / (min_pos / diam)).log2().ceil().max(0.0) as usize;
            for k in 0..=levels {
                v.push(diam * 0.5f64.powi(k as i32));
            }
        }
        v
    };

    let mut best = DdimEstimate { value: 0.0, witness: (subset[0], 0.0, 1) };
    let mut by_dist: Vec<(f64, usize)> = Vec::with_capacity(m);
    let mut radii: Vec<f64> = Vec::new();

    for &x in subset {
        by_dist.clear();
        for &p in subset {
            by_dist.push((sample.dist(x, p), p));
        }
        by_dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

        radii.clear();
        match &grid {
            Some(g) => radii.extend_from_slice(g),
            None => {
                for &(d, _) in &by_dist {
                    if d > 0.0 {
                        radii.push(d);
                        radii.push(2.0 * d);
                    }
                }
                radii.extend_from_slice(&dyadics);
            }
        }
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        radii.dedup();

        let mut admitted: Vec<usize> = Vec::new();
        for &r in &radii {
            if r <= 0.0 {
                continue;
            }
            admitted.clear();
            let half = r / 2.0;
            for &(d, p) in &by_dist {
                if d > r {
                    break;
                }
                if admitted.iter().all(|&q| sample.dist(p, q) > half) {
                    admitted.push(p);
                }
            }
            if admitted.len() > best.witness.2 {
                best = DdimEstimate {
                    value: (admitted.len() as f64).log2(),
                    witness: (x, r, admitted.len()),
                };
            }
        }
    }
    best
}

/// Covering-number bound `(2 · diam / eps)^ddim`, clamped to 1 when a single
/// ball suffices (`eps >= 2 · diam`).
pub fn covering_number_bound(ddim: f64, diam: f64, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if ddim < 0.0 || diam < 0.0 {
        return Err(Error::InvalidParameter("ddim and diam must be nonnegative".to_string()));
    }
    if eps >= 2.0 * diam {
        return Ok(1.0);
    }
    Ok((2.0 * diam / eps).powf(ddim))
}

/// Greedy set of centers such that every point lies within `eps` of one.
///
/// Scans points in ascending index order, opening a new center whenever a
/// point is uncovered. The size upper-bounds the true covering number.
pub fn exact_greedy_cover(sample: &MetricSample, eps: f64) -> Vec<usize> {
    let mut centers: Vec<usize> = Vec::new();
    for p in 0..sample.len() {
        if !centers.iter().any(|&c| sample.dist(p, c) <= eps) {
            centers.push(p);
        }
    }
    centers
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    use crate::testutil::{random_unit_square, sample_from_coords};

    #[test]
    fn equilateral_passes() {
        let m = vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ];
        let raw = RawSample::from_matrix(ids(3), m, None).unwrap();
        assert!(validate_metric(&raw, 0).pass);
    }

    #[test]
    fn triangle_violation_reported() {
        // d(a,b)=1, d(b,c)=1, d(a,c)=3: direct a-c beats the detour via b.
        let m = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        let raw = RawSample::from_matrix(
            vec!["a".to_string(), "b".to_string(), "c".to_string()],
            m,
            None,
        )
        .unwrap();
        let rep = validate_metric(&raw, 0);
        assert!(!rep.pass);
        let v = rep.violation.unwrap();
        assert_eq!((v.a.as_str(), v.b.as_str(), v.via.as_str()), ("a", "c", "b"));
        assert_eq!(v.direct, 3.0);
        assert_eq!(v.detour, 2.0);
    }

    #[test]
    fn random_euclidean_passes() {
        // Euclidean distances always satisfy the axioms.
        let coords = random_unit_square(20, 42);
        let raw = RawSample::from_points(ids(20), coords, None).unwrap();
        let rep = validate_metric(&raw, 0);
        assert!(rep.pass);
        assert!(rep.exhaustive);
    }

    #[test]
    fn malformed_matrix_rejected() {
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(matches!(
            RawSample::from_matrix(ids(2), asym, None),
            Err(Error::MalformedDistances(_))
        ));
        let nonsquare = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(matches!(
            RawSample::from_matrix(ids(2), nonsquare, None),
            Err(Error::MalformedDistances(_))
        ));
        assert!(matches!(
            RawSample::from_points(Vec::new(), Vec::new(), None),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn duplicates_collapse_with_multiplicity() {
        let coords = vec![vec![0.0], vec![1.0], vec![0.0], vec![0.0]];
        let raw = RawSample::from_points(ids(4), coords, Some(vec![1.0, -1.0, 1.0, -1.0])).unwrap();
        let s = MetricSample::from_raw(&raw, 0).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.n_original(), 4);
        assert_eq!(s.multiplicity(0), 3);
        assert_eq!(s.multiplicity(1), 1);
        assert!((s.mean_label(0) - (1.0 + 1.0 - 1.0) / 3.0).abs() < 1e-15);
        assert_eq!(s.delta(), 1.0);
    }

    #[test]
    fn normalization_round_trip() {
        let coords = random_unit_square(15, 7)
            .into_iter()
            .map(|p| p.into_iter().map(|x| 13.7 * x).collect())
            .collect::<Vec<Vec<f64>>>();
        let raw = RawSample::from_points(ids(15), coords, None).unwrap();
        let s = MetricSample::from_raw(&raw, 0).unwrap();
        let mut max_norm = 0.0f64;
        for i in 0..s.len() {
            for j in 0..s.len() {
                max_norm = max_norm.max(s.dist(i, j));
                let orig = raw.dist(i, j);
                if orig > 0.0 {
                    let rel = (s.dist_original(i, j) - orig).abs() / orig;
                    assert!(rel <= 1e-12, "round-trip error {rel}");
                }
            }
        }
        assert!((max_norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn ddim_single_point() {
        let s = sample_from_coords(vec![vec![0.0]]);
        let est = estimate_ddim(&s);
        assert_eq!(est.value, 0.0);
        assert_eq!(est.witness.2, 1);
    }

    #[test]
    fn ddim_two_points() {
        let s = sample_from_coords(vec![vec![0.0], vec![1.0]]);
        let est = estimate_ddim(&s);
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ddim_segment_16() {
        // Brute-force over the scanned (center, radius) pairs never packs
        // more than 4 points on an even grid, so the estimate is at most 2.
        let coords: Vec<Vec<f64>> = (0..16).map(|i| vec![i as f64 / 15.0]).collect();
        let s = sample_from_coords(coords);
        let est = estimate_ddim(&s);
        assert!(est.value <= 2.0 + 1e-12, "segment estimate {}", est.value);
        assert!(est.value >= 1.0);
    }

    #[test]
    fn ddim_unit_square_corners() {
        // Ball of radius sqrt(2) at a corner holds all 4 corners, pairwise
        // separated by at least 1 > sqrt(2)/2.
        let s = sample_from_coords(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ]);
        let est = estimate_ddim(&s);
        assert!((est.value - 2.0).abs() < 1e-12, "got {}", est.value);
        assert_eq!(est.witness.2, 4);
    }

    #[test]
    fn ddim_permutation_invariant() {
        let coords = random_unit_square(24, 3);
        let s = sample_from_coords(coords.clone());
        let base = estimate_ddim(&s).value;
        // A few fixed permutations.
        for shift in [1usize, 7, 13] {
            let permuted: Vec<Vec<f64>> =
                (0..coords.len()).map(|i| coords[(i + shift) % coords.len()].clone()).collect();
            let sp = sample_from_coords(permuted);
            assert_eq!(estimate_ddim(&sp).value, base);
        }
    }

    #[test]
    fn covering_bound_examples() {
        assert_eq!(covering_number_bound(3.0, 1.0, 2.0).unwrap(), 1.0);
        assert!((covering_number_bound(1.0, 1.0, 0.5).unwrap() - 4.0).abs() < 1e-12);
        assert!((covering_number_bound(2.0, 2.0, 1.0).unwrap() - 16.0).abs() < 1e-12);
        assert!(covering_number_bound(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn greedy_cover_examples() {
        // eps >= diameter: one center.
        let s = sample_from_coords(random_unit_square(10, 5));
        assert_eq!(exact_greedy_cover(&s, 1.0).len(), 1);

        // Two tight clusters distance ~1 apart, eps between scales: 2 centers.
        let mut coords = Vec::new();
        for k in 0..3 {
            coords.push(vec![0.01 * k as f64, 0.0]);
        }
        for k in 0..3 {
            coords.push(vec![1.0 + 0.01 * k as f64, 0.0]);
        }
        let s2 = sample_from_coords(coords);
        assert_eq!(exact_greedy_cover(&s2, 0.1).len(), 2);

        // eps below the minimum distance: every point its own center.
        let eps = s2.delta() / 2.0;
        assert_eq!(exact_greedy_cover(&s2, eps).len(), s2.len());
    }

    #[test]
    fn lemma1_invariant_cover_vs_bound() {
        // |greedy cover| <= (2/eps)^ddim_est on normalized samples, all eps.
        for seed in 0..6u64 {
            let s = sample_from_coords(random_unit_square(20 + 5 * seed as usize, 100 + seed));
            let est = estimate_ddim(&s).value;
            for step in 1..40 {
                let eps = step as f64 * 0.05;
                let cover = exact_greedy_cover(&s, eps).len() as f64;
                let bound = covering_number_bound(est, 1.0, eps).unwrap();
                assert!(
                    cover <= bound + 1e-9,
                    "seed {seed} eps {eps}: cover {cover} > bound {bound}"
                );
            }
        }
    }
}
