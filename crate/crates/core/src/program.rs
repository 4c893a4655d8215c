//! The low-dimensional-mapping relaxation: variables, neighborhoods and
//! constraint rows.
//!
//! Variables: one indicator z per (level, net point) of a 1-covering
//! hierarchy, plus one cost variable c per point. A point absent from a
//! level is identified with its level center (the nearest net point), so
//! the variable count stays at most n·(t+1) + n.
//!
//! Neighborhoods E/F/G/H of a point at a level collect the level's
//! variables within radius e/f/g/h · 2^{-i} of the point's center, for the
//! fixed radii e = 7, f = 12, g = 114, h = f + g = 126.
//!
//! Rows (the integrality constraint is relaxed to the [0,1] box, kept as
//! variable bounds rather than rows):
//!
//! - nesting:   z^i ≤ z^{i+1} per net point and level
//! - covering:  Σ_{E^i_j} z ≥ z^t_j per point and level
//! - packing:   Σ_{F^i_j} z ≤ (2f)^{D'}, likewise G with (2g)^{D'} and
//!              H with (2h)^{D'}
//! - cost:      z^t_j + c_j/δ ≥ 1, and z^t_j + c_j·2^i + Σ_{F^i_j} z ≥ 1
//!              per level
//! - monotone:  Σ_{F^i_j} z ≥ (2f)^{-D'} Σ_{F^k_j} z for i < k
//!
//! Objective: minimize Σ multiplicity_j · c_j.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use crate::hierarchy::NetHierarchy;
use crate::sample::MetricSample;
use crate::{Error, Result};

/// Covering radius factor.
pub const RADIUS_E: f64 = 7.0;
/// Near packing radius factor.
pub const RADIUS_F: f64 = 12.0;
/// Wide packing radius factor.
pub const RADIUS_G: f64 = 114.0;
/// Widest packing radius factor, h = f + g.
pub const RADIUS_H: f64 = RADIUS_F + RADIUS_G;

/// Dimension bound used in packing right-hand sides: log2(2^{3D} + 1).
pub fn d_prime(d_target: f64) -> f64 {
    3.0 * d_target + (1.0 + (-3.0 * d_target).exp2()).log2()
}

/// An LDM instance: sample, 1-covering hierarchy and target dimension.
#[derive(Debug)]
pub struct LdmInstance<'a> {
    /// Normalized, deduplicated sample.
    pub sample: &'a MetricSample,
    /// 1-covering hierarchy over the sample.
    pub hierarchy: &'a NetHierarchy,
    /// Target doubling dimension D ≥ 1.
    pub d_target: f64,
    /// log2(2^{3D} + 1), in (3D, 3D + 1].
    pub d_prime: f64,
    /// Set when D exceeds log2 n (the instance is trivially satisfiable).
    pub warning: Option<String>,
}

impl<'a> LdmInstance<'a> {
    /// Validate the target dimension and pair it with the inputs.
    pub fn new(
        sample: &'a MetricSample,
        hierarchy: &'a NetHierarchy,
        d_target: f64,
    ) -> Result<Self> {
        if !(d_target >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "target dimension must be >= 1, got {d_target}"
            )));
        }
        let n = sample.len() as f64;
        let warning = if n > 1.0 && d_target > n.log2() {
            Some(format!("D = {d_target} exceeds log2(n) = {}: trivial instance", n.log2()))
        } else {
            None
        };
        Ok(LdmInstance { sample, hierarchy, d_target, d_prime: d_prime(d_target), warning })
    }
}

/// Per-(level, point) neighborhood variable sets.
#[derive(Debug, Clone)]
pub struct Neighborhoods {
    /// `centers[i][j]`: the level-i net point standing for point j.
    pub centers: Vec<Vec<usize>>,
    /// E variable-index lists per `[level][point]`, ascending.
    pub e: Vec<Vec<Vec<usize>>>,
    /// F sets, see `e`.
    pub f: Vec<Vec<Vec<usize>>>,
    /// G sets, see `e`.
    pub g: Vec<Vec<Vec<usize>>>,
    /// H sets, see `e`.
    pub h: Vec<Vec<Vec<usize>>>,
}

/// Variable layout shared by the program and its consumers.
#[derive(Debug, Clone)]
pub struct VarLayout {
    /// Variable index → (level, net point).
    pub z_vars: Vec<(usize, usize)>,
    /// Level → net point → variable index.
    pub z_index: Vec<BTreeMap<usize, usize>>,
    /// Number of z variables; cost variable j lives at `num_z + j`.
    pub num_z: usize,
    /// Total variable count (z then c).
    pub num_vars: usize,
}

impl VarLayout {
    fn build(h: &NetHierarchy, n: usize) -> Self {
        let mut z_vars = Vec::new();
        let mut z_index = Vec::with_capacity(h.t + 1);
        for level in &h.levels {
            let mut map = BTreeMap::new();
            for &p in level {
                map.insert(p, z_vars.len());
                z_vars.push((z_index.len(), p));
            }
            z_index.push(map);
        }
        let num_z = z_vars.len();
        VarLayout { z_vars, z_index, num_z, num_vars: num_z + n }
    }

    /// Variable index of z^i_l for a net point l ∈ S_i.
    pub fn z(&self, level: usize, point: usize) -> usize {
        self.z_index[level][&point]
    }

    /// Variable index of the cost variable c_j.
    pub fn c(&self, j: usize) -> usize {
        self.num_z + j
    }
}

/// Build the E/F/G/H neighborhoods for every (level, point).
///
/// The center of point j at level i is j itself when j ∈ S_i, otherwise its
/// nearest net point of S_i (within 2·2^{-i} for a 1-covering hierarchy).
/// Each set collects the level-i variables within its radius of the center,
/// so every set contains the center's own variable.
pub fn build_neighborhoods(inst: &LdmInstance<'_>) -> Neighborhoods {
    let s = inst.sample;
    let h = inst.hierarchy;
    let n = s.len();
    let layout = VarLayout::build(h, n);

    let mut centers = Vec::with_capacity(h.t + 1);
    let mut e = Vec::with_capacity(h.t + 1);
    let mut f = Vec::with_capacity(h.t + 1);
    let mut g = Vec::with_capacity(h.t + 1);
    let mut hh = Vec::with_capacity(h.t + 1);

    for i in 0..=h.t {
        let r = h.radius(i);
        let mut lvl_centers = Vec::with_capacity(n);
        let mut le = Vec::with_capacity(n);
        let mut lf = Vec::with_capacity(n);
        let mut lg = Vec::with_capacity(n);
        let mut lh = Vec::with_capacity(n);
        for j in 0..n {
            let center = if h.contains(i, j) {
                j
            } else {
                crate::hierarchy::nearest_in_level(h, s, j, i)
            };
            lvl_centers.push(center);
            let mut se = Vec::new();
            let mut sf = Vec::new();
            let mut sg = Vec::new();
            let mut sh = Vec::new();
            for &k in &h.levels[i] {
                let d = s.dist(center, k);
                let var = layout.z(i, k);
                if d <= RADIUS_E * r {
                    se.push(var);
                }
                if d <= RADIUS_F * r {
                    sf.push(var);
                }
                if d <= RADIUS_G * r {
                    sg.push(var);
                }
                if d <= RADIUS_H * r {
                    sh.push(var);
                }
            }
            le.push(se);
            lf.push(sf);
            lg.push(sg);
            lh.push(sh);
        }
        centers.push(lvl_centers);
        e.push(le);
        f.push(lf);
        g.push(lg);
        hh.push(lh);
    }
    Neighborhoods { centers, e, f, g, h: hh }
}

/// Constraint family a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowKind {
    /// z^i ≤ z^{i+1}
    Nesting,
    /// Σ_{E^i_j} z ≥ z^t_j
    Covering,
    /// Σ_{F^i_j} z ≤ (2f)^{D'}
    PackF,
    /// Σ_{G^i_j} z ≤ (2g)^{D'}
    PackG,
    /// Σ_{H^i_j} z ≤ (2h)^{D'}
    PackH,
    /// z^t_j + c_j/δ ≥ 1
    CostFloor,
    /// z^t_j + c_j·2^i + Σ_{F^i_j} z ≥ 1
    CostLevel,
    /// Σ_{F^i_j} z ≥ (2f)^{-D'} Σ_{F^k_j} z
    Monotone,
}

/// Direction of a program row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// LHS ≤ rhs
    Le,
    /// LHS ≥ rhs
    Ge,
}

/// One emitted row, terms combined per variable.
#[derive(Debug, Clone)]
pub struct ProgramRow {
    /// Family tag.
    pub kind: RowKind,
    /// Level the row quantifies over.
    pub level: usize,
    /// Second level for monotone rows (equals `level` elsewhere).
    pub level_hi: usize,
    /// Point index the row quantifies over.
    pub point: usize,
    /// `(variable, coefficient)` pairs, ascending by variable.
    pub terms: Vec<(usize, f64)>,
    /// Row direction.
    pub sense: Sense,
    /// Right-hand side.
    pub rhs: f64,
}

/// The relaxed program: rows, objective and the index structures that
/// rounding and auditing need. Variable bounds are the [0,1] box.
#[derive(Debug, Clone)]
pub struct LdmProgram {
    /// Variable layout (z then c).
    pub layout: VarLayout,
    /// Neighborhood sets and centers.
    pub neighborhoods: Neighborhoods,
    /// All rows, grouped by family in emission order.
    pub rows: Vec<ProgramRow>,
    /// Objective coefficients (multiplicity on each c_j).
    pub objective: Vec<f64>,
    /// Minimum distance used in the cost floor (1 for a single point).
    pub delta_eff: f64,
    /// Target dimension.
    pub d_target: f64,
    /// log2(2^{3D} + 1).
    pub d_prime: f64,
    /// Deepest hierarchy level.
    pub t: usize,
    /// Number of points.
    pub n: usize,
    /// Row counts per family.
    pub census: BTreeMap<&'static str, usize>,
    /// Set when the instance is trivial (D > log2 n).
    pub warning: Option<String>,
}

impl LdmProgram {
    /// Packing right-hand side `(2r)^{D'}`, rounded up so floating-point
    /// underestimation cannot make a valid witness infeasible.
    pub fn packing_rhs(&self, radius_factor: f64) -> f64 {
        (2.0 * radius_factor).powf(self.d_prime).ceil()
    }

    /// Sum of a variable set under an assignment.
    pub fn set_sum(&self, vars: &[usize], x: &[f64]) -> f64 {
        vars.iter().map(|&v| x[v]).sum()
    }

    /// Objective value of an assignment.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x.iter()).map(|(c, v)| c * v).sum()
    }

    /// Evaluate every row; returns the first (index, violation amount) where
    /// the violation exceeds `tol`.
    pub fn first_violated_row(&self, x: &[f64], tol: f64) -> Option<(usize, f64)> {
        for (idx, row) in self.rows.iter().enumerate() {
            let lhs: f64 = row.terms.iter().map(|&(v, a)| a * x[v]).sum();
            let gap = match row.sense {
                Sense::Le => lhs - row.rhs,
                Sense::Ge => row.rhs - lhs,
            };
            if gap > tol {
                return Some((idx, gap));
            }
        }
        None
    }
}

fn combine(terms: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    let mut map: BTreeMap<usize, f64> = BTreeMap::new();
    for (v, a) in terms {
        *map.entry(v).or_insert(0.0) += a;
    }
    map.into_iter().filter(|&(_, a)| a != 0.0).collect()
}

/// Content key for duplicate-row elimination: identical terms, sense and
/// right-hand side. Identified variables make textually distinct rows
/// coincide (e.g. packing rows of two points sharing a level center).
type RowKey = (u8, Vec<(usize, u64)>, u64);

fn row_key(row: &ProgramRow) -> RowKey {
    (
        matches!(row.sense, Sense::Le) as u8,
        row.terms.iter().map(|&(v, a)| (v, a.to_bits())).collect(),
        row.rhs.to_bits(),
    )
}

/// Materialize all constraint rows and the objective for an instance.
pub fn build_program(inst: &LdmInstance<'_>) -> Result<LdmProgram> {
    let s = inst.sample;
    let h = inst.hierarchy;
    let n = s.len();
    let t = h.t;
    let nb = build_neighborhoods(inst);
    let layout = VarLayout::build(h, n);

    let dp = inst.d_prime;
    let rhs_f = (2.0 * RADIUS_F).powf(dp).ceil();
    let rhs_g = (2.0 * RADIUS_G).powf(dp).ceil();
    let rhs_h = (2.0 * RADIUS_H).powf(dp).ceil();
    let alpha = (2.0 * RADIUS_F).powf(-dp);
    // A single point has no minimum positive distance; its cost floor
    // degenerates to z + c >= 1 at the unit scale.
    let delta_eff = if n == 1 { 1.0 } else { s.delta() };

    let mut rows: Vec<ProgramRow> = Vec::new();
    let mut census: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut seen: BTreeSet<RowKey> = BTreeSet::new();
    let push = |rows: &mut Vec<ProgramRow>,
                    census: &mut BTreeMap<&'static str, usize>,
                    seen: &mut BTreeSet<RowKey>,
                    name: &'static str,
                    row: ProgramRow| {
        if seen.insert(row_key(&row)) {
            rows.push(row);
            *census.entry(name).or_insert(0) += 1;
        }
    };

    // (2) nesting
    for i in 0..t {
        for &l in &h.levels[i] {
            push(&mut rows, &mut census, &mut seen, "nesting", ProgramRow {
                kind: RowKind::Nesting,
                level: i,
                level_hi: i + 1,
                point: l,
                terms: vec![(layout.z(i, l), 1.0), (layout.z(i + 1, l), -1.0)],
                sense: Sense::Le,
                rhs: 0.0,
            });
        }
    }

    // (3) covering
    for i in 0..=t {
        for j in 0..n {
            let mut terms: Vec<(usize, f64)> = nb.e[i][j].iter().map(|&v| (v, 1.0)).collect();
            terms.push((layout.z(t, j), -1.0));
            push(&mut rows, &mut census, &mut seen, "covering", ProgramRow {
                kind: RowKind::Covering,
                level: i,
                level_hi: i,
                point: j,
                terms: combine(terms),
                sense: Sense::Ge,
                rhs: 0.0,
            });
        }
    }

    // (4)-(6) packing
    for (kind, name, sets, rhs) in [
        (RowKind::PackF, "pack_f", &nb.f, rhs_f),
        (RowKind::PackG, "pack_g", &nb.g, rhs_g),
        (RowKind::PackH, "pack_h", &nb.h, rhs_h),
    ] {
        for i in 0..=t {
            for j in 0..n {
                push(&mut rows, &mut census, &mut seen, name, ProgramRow {
                    kind,
                    level: i,
                    level_hi: i,
                    point: j,
                    terms: sets[i][j].iter().map(|&v| (v, 1.0)).collect(),
                    sense: Sense::Le,
                    rhs,
                });
            }
        }
    }

    // (7) cost floor
    for j in 0..n {
        push(&mut rows, &mut census, &mut seen, "cost_floor", ProgramRow {
            kind: RowKind::CostFloor,
            level: t,
            level_hi: t,
            point: j,
            terms: vec![(layout.z(t, j), 1.0), (layout.c(j), 1.0 / delta_eff)],
            sense: Sense::Ge,
            rhs: 1.0,
        });
    }

    // (8) per-level cost
    for i in 0..=t {
        let scale = (i as f64).exp2();
        for j in 0..n {
            let mut terms: Vec<(usize, f64)> = vec![(layout.z(t, j), 1.0), (layout.c(j), scale)];
            terms.extend(nb.f[i][j].iter().map(|&v| (v, 1.0)));
            push(&mut rows, &mut census, &mut seen, "cost_level", ProgramRow {
                kind: RowKind::CostLevel,
                level: i,
                level_hi: i,
                point: j,
                terms: combine(terms),
                sense: Sense::Ge,
                rhs: 1.0,
            });
        }
    }

    // (9) monotone support
    for i in 0..=t {
        for k in (i + 1)..=t {
            for j in 0..n {
                let mut terms: Vec<(usize, f64)> = nb.f[i][j].iter().map(|&v| (v, 1.0)).collect();
                terms.extend(nb.f[k][j].iter().map(|&v| (v, -alpha)));
                push(&mut rows, &mut census, &mut seen, "monotone", ProgramRow {
                    kind: RowKind::Monotone,
                    level: i,
                    level_hi: k,
                    point: j,
                    terms,
                    sense: Sense::Ge,
                    rhs: 0.0,
                });
            }
        }
    }

    let mut objective = vec![0.0; layout.num_vars];
    for j in 0..n {
        objective[layout.c(j)] = s.multiplicity(j) as f64;
    }

    Ok(LdmProgram {
        layout,
        neighborhoods: nb,
        rows,
        objective,
        delta_eff,
        d_target: inst.d_target,
        d_prime: dp,
        t,
        n,
        census,
        warning: inst.warning.clone(),
    })
}

impl LdmProgram {
    fn var_name(&self, v: usize) -> String {
        if v < self.layout.num_z {
            let (i, p) = self.layout.z_vars[v];
            format!("z[{i},{p}]")
        } else {
            format!("c[{}]", v - self.layout.num_z)
        }
    }
}

impl fmt::Display for LdmProgram {
    /// Plain-text listing, one row per line, for the reference solver and
    /// for debugging.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "min")?;
        let mut first = true;
        for (v, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                write!(out, "{} {c}*{}", if first { "" } else { " +" }, self.var_name(v))?;
                first = false;
            }
        }
        writeln!(out)?;
        for row in &self.rows {
            let mut first = true;
            for &(v, a) in &row.terms {
                if first {
                    write!(out, "{a}*{}", self.var_name(v))?;
                    first = false;
                } else if a < 0.0 {
                    write!(out, " - {}*{}", -a, self.var_name(v))?;
                } else {
                    write!(out, " + {a}*{}", self.var_name(v))?;
                }
            }
            let sense = match row.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
            };
            writeln!(out, " {sense} {}", row.rhs)?;
        }
        Ok(())
    }
}
