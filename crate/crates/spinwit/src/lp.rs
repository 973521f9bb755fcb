//! Linear programming over the witness feasible regions, vertex enumeration
//! and the feasible-region / coefficient-region duality.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Slack tolerance for feasibility and active-constraint detection.
pub const LP_TOL: f64 = 1e-9;
/// Largest number of constraint subsets the brute-force enumerator will try.
pub const ENUMERATION_GUARD: u128 = 1_000_000;
const PIVOT_TOL: f64 = 1e-11;
// Half-width of the artificial box used to enumerate vertices of unboxed systems.
const ARTIFICIAL_BOX: f64 = 64.0;

/// `normal · P + offset ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    pub fn slack(&self, p: &[f64]) -> f64 {
        self.offset + self.normal.iter().zip(p).map(|(g, x)| g * x).sum::<f64>()
    }

    /// Rescaled so the offset is 1, for comparing systems; `None` if the
    /// offset is not positive.
    pub fn normalized(&self) -> Option<Halfspace> {
        (self.offset > 0.0).then(|| {
            Halfspace::new(self.normal.iter().map(|g| g / self.offset).collect(), 1.0)
        })
    }
}

/// Minimize `offset + objective · P` subject to the halfspaces and `|P_k| ≤ box_bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub offset: f64,
    pub halfspaces: Vec<Halfspace>,
    pub box_bound: f64,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, offset: f64, halfspaces: Vec<Halfspace>) -> Result<Self> {
        let n = objective.len();
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: h.normal.len() });
        }
        Ok(LpProblem { objective, offset, halfspaces, box_bound: 1.0 })
    }

    pub fn dim(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub optimum: f64,
    pub argmin: Vec<f64>,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    // reduced costs; the last entry holds minus the objective value
    obj: Vec<f64>,
    basis: Vec<usize>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in &mut self.rows[r] {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            let f = row[c];
            if i != r && f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[r] = c;
    }

    fn set_costs(&mut self, costs: &[f64]) {
        let w = self.width();
        self.obj = vec![0.0; w + 1];
        self.obj[..costs.len()].copy_from_slice(costs);
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = self.obj[b];
            if cb != 0.0 {
                for (v, rv) in self.obj.iter_mut().zip(&self.rows[r]) {
                    *v -= cb * rv;
                }
            }
        }
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving variable on ties.
    fn run(&mut self, allowed: usize) -> Outcome {
        let w = self.width();
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j] < -PIVOT_TOL) else {
                return Outcome::Optimal;
            };
            let mut best: Option<(f64, usize, usize)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[c] > PIVOT_TOL {
                    let ratio = row[w] / row[c];
                    let better = match best {
                        None => true,
                        Some((br, _, bb)) => {
                            ratio < br - PIVOT_TOL
                                || (ratio <= br + PIVOT_TOL && self.basis[r] < bb)
                        }
                    };
                    if better {
                        best = Some((ratio, r, self.basis[r]));
                    }
                }
            }
            match best {
                Some((_, r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded,
            }
        }
    }
}

/// Two-phase simplex on the shifted variables `x = P + box_bound ≥ 0`.
pub fn simplex_min(problem: &LpProblem) -> Result<LpSolution> {
    let n = problem.dim();
    if let Some(h) = problem.halfspaces.iter().find(|h| h.normal.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: h.normal.len() });
    }
    let b = problem.box_bound;
    if !(b > 0.0) {
        return Err(Error::Domain("box bound must be positive".into()));
    }
    // rows a·x ≤ rhs
    let mut lhs: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for h in &problem.halfspaces {
        lhs.push(h.normal.iter().map(|g| -g).collect());
        rhs.push(h.offset - b * h.normal.iter().sum::<f64>());
    }
    for j in 0..n {
        let mut row = vec![0.0; n];
        row[j] = 1.0;
        lhs.push(row);
        rhs.push(2.0 * b);
    }
    let m = lhs.len();
    let negative: Vec<usize> = (0..m).filter(|&i| rhs[i] < 0.0).collect();
    let n_art = negative.len();
    let w = n + m + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0;
    for i in 0..m {
        let mut row = vec![0.0; w + 1];
        let flip = if rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = flip * lhs[i][j];
        }
        row[n + i] = flip;
        row[w] = flip * rhs[i];
        if flip < 0.0 {
            row[n + m + art] = 1.0;
            basis.push(n + m + art);
            art += 1;
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, obj: vec![0.0; w + 1], basis };

    if n_art > 0 {
        let mut costs = vec![0.0; w];
        for c in costs.iter_mut().skip(n + m) {
            *c = 1.0;
        }
        t.set_costs(&costs);
        t.run(w);
        if -t.obj[w] > LP_TOL {
            return Ok(LpSolution { status: LpStatus::Infeasible, optimum: f64::NAN, argmin: vec![] });
        }
        for r in 0..m {
            if t.basis[r] >= n + m {
                if let Some(c) = (0..n + m).find(|&c| t.rows[r][c].abs() > PIVOT_TOL) {
                    t.pivot(r, c);
                }
            }
        }
    }

    let mut costs = vec![0.0; w];
    costs[..n].copy_from_slice(&problem.objective);
    t.set_costs(&costs);
    if let Outcome::Unbounded = t.run(n + m) {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            optimum: f64::NEG_INFINITY,
            argmin: vec![],
        });
    }
    let mut x = vec![0.0; n];
    for (r, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rows[r][w];
        }
    }
    let argmin: Vec<f64> = x.iter().map(|v| v - b).collect();
    let optimum = problem.offset
        + problem.objective.iter().zip(&argmin).map(|(c, p)| c * p).sum::<f64>();
    Ok(LpSolution { status: LpStatus::Optimal, optimum, argmin })
}

fn box_halfspaces(n: usize, bound: f64) -> Vec<Halfspace> {
    (0..n)
        .flat_map(|j| {
            [1.0, -1.0].into_iter().map(move |s| {
                let mut g = vec![0.0; n];
                g[j] = s;
                Halfspace::new(g, bound)
            })
        })
        .collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn sort_points(points: &mut [Vec<f64>]) {
    points.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        if i / 64 >= self.0.len() {
            self.0.resize(i / 64 + 1, 0);
        }
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn contains(&self, sub: &Bits) -> bool {
        sub.0.iter().enumerate().all(|(i, s)| s & !self.0.get(i).copied().unwrap_or(0) == 0)
    }
}

struct Vertex {
    point: Vec<f64>,
    active: Bits,
}

fn active_set(point: &[f64], cons: &[Halfspace]) -> Bits {
    let mut b = Bits::new(cons.len());
    for (i, h) in cons.iter().enumerate() {
        if h.slack(point).abs() <= LP_TOL {
            b.set(i);
        }
    }
    b
}

/// Vertices of `{P : halfspaces} ∩ box` by incremental double description.
///
/// With `box_bound = None` the system must be bounded on its own; an artificial
/// box is used internally and [`Error::Unbounded`] is returned if it is touched.
pub fn vertex_enumerate(
    dim: usize,
    halfspaces: &[Halfspace],
    box_bound: Option<f64>,
) -> Result<Vec<Vec<f64>>> {
    if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: h.normal.len() });
    }
    if dim == 0 {
        return Ok(vec![vec![]]);
    }
    let bound = box_bound.unwrap_or(ARTIFICIAL_BOX);
    let mut cons = box_halfspaces(dim, bound);
    let n_box = cons.len();
    let mut verts: Vec<Vertex> = (0u64..1 << dim)
        .map(|mask| {
            let point: Vec<f64> = (0..dim)
                .map(|j| if mask >> j & 1 == 1 { bound } else { -bound })
                .collect();
            let active = active_set(&point, &cons);
            Vertex { point, active }
        })
        .collect();

    for h in halfspaces {
        let idx = cons.len();
        cons.push(h.clone());
        let slacks: Vec<f64> = verts.iter().map(|v| h.slack(&v.point)).collect();
        if slacks.iter().all(|&s| s >= -LP_TOL) {
            for (v, s) in verts.iter_mut().zip(&slacks) {
                if s.abs() <= LP_TOL {
                    v.active.set(idx);
                }
            }
            continue;
        }
        let plus: Vec<usize> = (0..verts.len()).filter(|&i| slacks[i] > LP_TOL).collect();
        let minus: Vec<usize> = (0..verts.len()).filter(|&i| slacks[i] < -LP_TOL).collect();
        let mut fresh: Vec<Vec<f64>> = Vec::new();
        for &u in &plus {
            for &w in &minus {
                let common = verts[u].active.and(&verts[w].active);
                if (common.count() as usize) < dim - 1 {
                    continue;
                }
                let adjacent = !verts
                    .iter()
                    .enumerate()
                    .any(|(z, v)| z != u && z != w && v.active.contains(&common));
                if adjacent {
                    let t = slacks[u] / (slacks[u] - slacks[w]);
                    let p: Vec<f64> = verts[u]
                        .point
                        .iter()
                        .zip(&verts[w].point)
                        .map(|(a, b)| a + t * (b - a))
                        .collect();
                    fresh.push(p);
                }
            }
        }
        let mut next: Vec<Vertex> = Vec::new();
        for (i, v) in verts.into_iter().enumerate() {
            if slacks[i] >= -LP_TOL {
                next.push(v);
            }
        }
        for p in fresh {
            if !next.iter().any(|v| close(&v.point, &p, LP_TOL)) {
                next.push(Vertex { point: p, active: Bits::new(0) });
            }
        }
        for v in &mut next {
            v.active = active_set(&v.point, &cons);
        }
        verts = next;
    }

    if box_bound.is_none() && verts.iter().any(|v| (0..n_box).any(|i| v.active.get(i))) {
        return Err(Error::Unbounded);
    }
    let mut points: Vec<Vec<f64>> =
        verts.into_iter().map(|v| polish(&v.point, &v.active, &cons)).collect();
    sort_points(&mut points);
    Ok(points)
}

/// Re-solves the active constraints of a vertex in the least-squares sense to
/// remove roundoff accumulated by successive cuts.
fn polish(point: &[f64], active: &Bits, cons: &[Halfspace]) -> Vec<f64> {
    let rows: Vec<&Halfspace> = (0..cons.len()).filter(|&i| active.get(i)).map(|i| &cons[i]).collect();
    let n = point.len();
    if rows.len() < n {
        return point.to_vec();
    }
    let a = DMatrix::from_fn(rows.len(), n, |r, c| rows[r].normal[c]);
    let b = DVector::from_fn(rows.len(), |r, _| -rows[r].offset);
    match a.svd(true, true).solve(&b, 1e-12) {
        Ok(x) if close(x.as_slice(), point, 1e-7) => x.iter().copied().collect(),
        _ => point.to_vec(),
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Vertices by trying every `dim`-subset of constraints (halfspaces plus box).
pub fn vertex_enumerate_bruteforce(
    dim: usize,
    halfspaces: &[Halfspace],
    box_bound: f64,
) -> Result<Vec<Vec<f64>>> {
    let mut cons = halfspaces.to_vec();
    cons.extend(box_halfspaces(dim, box_bound));
    let subsets = binomial(cons.len(), dim);
    if subsets > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{subsets} constraint subsets exceed the guard of {ENUMERATION_GUARD}"
        )));
    }
    let mut points: Vec<Vec<f64>> = Vec::new();
    for subset in (0..cons.len()).combinations(dim) {
        let a = DMatrix::from_fn(dim, dim, |r, c| cons[subset[r]].normal[c]);
        let b = DVector::from_fn(dim, |r, _| -cons[subset[r]].offset);
        let Some(x) = a.lu().solve(&b) else { continue };
        let x: Vec<f64> = x.iter().copied().collect();
        if x.iter().any(|v| !v.is_finite()) {
            continue;
        }
        if cons.iter().all(|h| h.slack(&x) >= -LP_TOL) && !points.iter().any(|p| close(p, &x, LP_TOL)) {
            // a singular system can pass LU with a huge solution; verify the
            // chosen constraints are actually tight
            if subset.iter().all(|&i| cons[i].slack(&x).abs() <= LP_TOL) {
                points.push(x);
            }
        }
    }
    sort_points(&mut points);
    Ok(points)
}

/// A region held both as halfspaces and as the vertices of that halfspace
/// system. The `|P_k| ≤ 1` box is not part of either list; LP solves add it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    pub vertices: Vec<Vec<f64>>,
}

impl Polytope {
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        let vertices = vertex_enumerate(dim, &halfspaces, None)?;
        Ok(Polytope { dim, halfspaces, vertices })
    }

    pub fn min_slack(&self, p: &[f64]) -> f64 {
        self.halfspaces.iter().map(|h| h.slack(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.min_slack(p) >= -LP_TOL
    }

    /// The boxed LP `min offset + objective · P` over this region.
    pub fn lp(&self, objective: Vec<f64>, offset: f64) -> Result<LpProblem> {
        LpProblem::new(objective, offset, self.halfspaces.clone())
    }

    /// Vertices of the region intersected with the `|P_k| ≤ 1` box.
    pub fn boxed_vertices(&self) -> Result<Vec<Vec<f64>>> {
        vertex_enumerate(self.dim, &self.halfspaces, Some(1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionFamily {
    Kind1,
    Kind2,
    Approx1,
    Approx2,
}

impl RegionFamily {
    pub const ALL: [RegionFamily; 4] =
        [RegionFamily::Kind1, RegionFamily::Kind2, RegionFamily::Approx1, RegionFamily::Approx2];

    /// Number of expectation coordinates `P_k`.
    pub fn dim(self, d: usize) -> usize {
        match self {
            RegionFamily::Kind1 => d + 1,
            RegionFamily::Kind2 => 3 * d / 2,
            RegionFamily::Approx1 => d + 2,
            RegionFamily::Approx2 => 3 * d / 2 + 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RegionFamily::Kind1 => "kind1",
            RegionFamily::Kind2 => "kind2",
            RegionFamily::Approx1 => "approx1",
            RegionFamily::Approx2 => "approx2",
        }
    }
}

impl std::str::FromStr for RegionFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RegionFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown region family {s}")))
    }
}

fn check_even(d: usize) -> Result<()> {
    if d < 2 || d % 2 == 1 {
        return Err(Error::Domain(format!("region needs an even d >= 2, got {d}")));
    }
    Ok(())
}

/// `offset + Σ_{k ∈ coords} s_k P_k ≥ 0` for every sign pattern.
fn signed_sums(n: usize, coords: &[usize], offset: f64) -> Vec<Halfspace> {
    (0u64..1 << coords.len())
        .map(|mask| {
            let mut g = vec![0.0; n];
            for (b, &k) in coords.iter().enumerate() {
                g[k] = if mask >> b & 1 == 0 { 1.0 } else { -1.0 };
            }
            Halfspace::new(g, offset)
        })
        .collect()
}

pub fn kind1_halfspaces(d: usize) -> Result<Vec<Halfspace>> {
    check_even(d)?;
    let n = d + 1;
    Ok(signed_sums(n, &(0..n).collect::<Vec<_>>(), 1.0))
}

/// One coordinate from each commuting set, with independent indices.
pub fn kind2_halfspaces(d: usize) -> Result<Vec<Halfspace>> {
    check_even(d)?;
    let h = d / 2;
    let mut out = Vec::new();
    for a in 0..h {
        for b in 0..h {
            for c in 0..h {
                out.extend(signed_sums(3 * h, &[a, h + b, d + c], 1.0));
            }
        }
    }
    Ok(out)
}

/// The sub-system with a shared index `j` across the three sets.
pub fn kind2_aligned_halfspaces(d: usize) -> Result<Vec<Halfspace>> {
    check_even(d)?;
    let h = d / 2;
    Ok((0..h).flat_map(|j| signed_sums(3 * h, &[j, h + j, d + j], 1.0)).collect())
}

pub fn approx1_halfspaces(d: usize) -> Result<Vec<Halfspace>> {
    check_even(d)?;
    let n = d + 2;
    Ok(signed_sums(n, &(0..n).collect::<Vec<_>>(), 2f64.sqrt()))
}

pub fn approx2_halfspaces(d: usize) -> Result<Vec<Halfspace>> {
    check_even(d)?;
    let h = d / 2;
    let n = 3 * h + 1;
    Ok((0..h).flat_map(|j| signed_sums(n, &[j, h + j, d + j, 3 * h], 2.0)).collect())
}

pub fn region_halfspaces(family: RegionFamily, d: usize) -> Result<Vec<Halfspace>> {
    match family {
        RegionFamily::Kind1 => kind1_halfspaces(d),
        RegionFamily::Kind2 => kind2_halfspaces(d),
        RegionFamily::Approx1 => approx1_halfspaces(d),
        RegionFamily::Approx2 => approx2_halfspaces(d),
    }
}

pub fn feasible_region(family: RegionFamily, d: usize) -> Result<Polytope> {
    Polytope::from_halfspaces(family.dim(d), region_halfspaces(family, d)?)
}

pub fn feasible_region_kind1(d: usize) -> Result<Polytope> {
    feasible_region(RegionFamily::Kind1, d)
}

pub fn feasible_region_kind2(d: usize) -> Result<Polytope> {
    feasible_region(RegionFamily::Kind2, d)
}

pub fn feasible_region_approx1(d: usize) -> Result<Polytope> {
    feasible_region(RegionFamily::Approx1, d)
}

pub fn feasible_region_approx2(d: usize) -> Result<Polytope> {
    feasible_region(RegionFamily::Approx2, d)
}

/// Coefficient vectors `a` with `a_0 + a · P ≥ 0` on the whole region: one
/// halfspace per vertex of `feasible`.
pub fn ssnnev_region(feasible: &Polytope, a0: f64) -> Result<Polytope> {
    let origin = vec![0.0; feasible.dim];
    if feasible.min_slack(&origin) <= LP_TOL {
        return Err(Error::Domain("feasible region must contain the origin strictly".into()));
    }
    let halfspaces = feasible.vertices.iter().map(|v| Halfspace::new(v.clone(), a0)).collect();
    Polytope::from_halfspaces(feasible.dim, halfspaces)
}

/// Order-insensitive comparison of two halfspace systems after scaling offsets to 1.
pub fn same_halfspace_system(a: &[Halfspace], b: &[Halfspace], tol: f64) -> bool {
    let norm = |s: &[Halfspace]| -> Option<Vec<Vec<f64>>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for h in s {
            let g = h.normalized()?.normal;
            if !out.iter().any(|p| close(p, &g, tol)) {
                out.push(g);
            }
        }
        Some(out)
    };
    match (norm(a), norm(b)) {
        (Some(x), Some(y)) => same_point_set(&x, &y, tol),
        _ => false,
    }
}

/// Order-insensitive comparison of two point sets.
pub fn same_point_set(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| close(p, q, tol)))
        && b.iter().all(|q| a.iter().any(|p| close(p, q, tol)))
}
