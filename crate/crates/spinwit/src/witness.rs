//! Witness families: coefficient layouts, the optimal witnesses of each
//! family, classification, optimality and decomposability.

use std::str::FromStr;

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gamma::{build_chiral4, build_euclidean_gammas, commuting_sets, CommutingSets, Representation};
use crate::lp::{region_halfspaces, simplex_min, LpProblem, LpSolution, LpStatus, RegionFamily, LP_TOL};
use crate::operator::{
    hermitian_eigen, hermitian_eigenvalues, hermiticity_defect, kind1_levels, kind2_levels, kron_all,
    real_phase_inv_i, trace_product, HermitianOperator, ProductSum, ProductTerm, EIG_TOL,
};
use crate::states;
use crate::{CMatrix, CVector, Error, Result};

/// Partial-transpose eigenvalues at or above `-PT_TOL` (relative to the
/// largest coefficient) count as nonnegative.
pub const PT_TOL: f64 = 1e-10;
// Dense projector products and spanning sets are only formed up to this dimension.
const CERTIFICATE_DIM_CAP: usize = 1024;
const ZERO_TOL: f64 = 1e-9;
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "kind1")]
    Kind1,
    #[serde(rename = "kind2")]
    Kind2,
    #[serde(rename = "approx1")]
    ApproxKind1,
    #[serde(rename = "approx2")]
    ApproxKind2,
    #[serde(rename = "oddm1")]
    OddM1,
    #[serde(rename = "oddm2")]
    OddM2,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Kind1,
        Family::Kind2,
        Family::ApproxKind1,
        Family::ApproxKind2,
        Family::OddM1,
        Family::OddM2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Kind1 => "kind1",
            Family::Kind2 => "kind2",
            Family::ApproxKind1 => "approx1",
            Family::ApproxKind2 => "approx2",
            Family::OddM1 => "oddm1",
            Family::OddM2 => "oddm2",
        }
    }

    /// Number of coefficients including `a_0`.
    pub fn coeff_len(self, d: usize) -> usize {
        let h = d / 2;
        match self {
            Family::Kind1 | Family::OddM1 => d + 2,
            Family::Kind2 | Family::OddM2 => 3 * h + 1,
            Family::ApproxKind1 => d + 3,
            Family::ApproxKind2 => 3 * h + 2,
        }
    }

    /// Region whose LP decides the sign on separable states.
    pub fn region(self) -> RegionFamily {
        match self {
            Family::Kind1 | Family::OddM1 => RegionFamily::Kind1,
            Family::Kind2 | Family::OddM2 => RegionFamily::Kind2,
            Family::ApproxKind1 => RegionFamily::Approx1,
            Family::ApproxKind2 => RegionFamily::Approx2,
        }
    }

    fn odd_m(self) -> bool {
        matches!(self, Family::OddM1 | Family::OddM2)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown witness family {s}")))
    }
}

/// Commuting set supplying the last-factor operators of the odd-m first kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetChoice {
    #[default]
    C1,
    C2,
    C3,
}

impl SetChoice {
    fn pick(self, sets: &CommutingSets) -> Vec<CMatrix> {
        let set = match self {
            SetChoice::C1 => &sets.c1,
            SetChoice::C2 => &sets.c2,
            SetChoice::C3 => &sets.c3,
        };
        set.iter().map(|e| e.matrix.clone()).collect()
    }
}

impl FromStr for SetChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c1" => Ok(SetChoice::C1),
            "c2" => Ok(SetChoice::C2),
            "c3" => Ok(SetChoice::C3),
            _ => Err(Error::Domain(format!("unknown commuting set {s}"))),
        }
    }
}

/// A witness candidate `a_0 I + Σ a_k Q_k` of one family.
///
/// Coefficient layouts (after `a_0`):
/// - `kind1`: `γ_1..γ_d, γ_S` tensor powers. In the chiral representation
///   (`m = 2`, `d = 4` only) the blocks are `γ^μ ⊗ γ^μ` for `μ = 0,1,2,3,5`.
/// - `kind2`: `A'_1..A'_{3d/2}` tensor powers.
/// - `approx1`: the `kind1` blocks, then `(-iγ_1γ_2)^{⊗m}`.
/// - `approx2`: the `kind2` blocks, then `(A'_1 A'_2)^{⊗m}`.
/// - `oddm1`: `γ_i^{⊗m-1} ⊗ A'_i` and `γ_{d/2+i}^{⊗m-1} ⊗ A'_i` for
///   `i = 1..d/2`, then `γ_S^{⊗m-1} ⊗ I`.
/// - `oddm2`: `A'_i^{⊗m-1} ⊗ A'_i`, `A'_{d/2+i}^{⊗m-1} ⊗ A'_i`,
///   `A'_{d+i}^{⊗m-1} ⊗ I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub family: Family,
    pub m: usize,
    pub d: usize,
    pub rep: Representation,
    #[serde(default)]
    pub odd_set: SetChoice,
    pub coeffs: Vec<f64>,
}

impl WitnessSpec {
    /// Euclidean spec, validated.
    pub fn new(family: Family, m: usize, d: usize, coeffs: Vec<f64>) -> Result<Self> {
        let spec =
            WitnessSpec { family, m, d, rep: Representation::Euclidean, odd_set: SetChoice::C1, coeffs };
        spec.validate()?;
        Ok(spec)
    }

    /// First-kind witness on the chiral generators (`m = 2`, `d = 4`).
    pub fn chiral_kind1(coeffs: Vec<f64>) -> Result<Self> {
        let spec = WitnessSpec {
            family: Family::Kind1,
            m: 2,
            d: 4,
            rep: Representation::Chiral4,
            odd_set: SetChoice::C1,
            coeffs,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_odd_set(mut self, set: SetChoice) -> Self {
        self.odd_set = set;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (m, d) = (self.m, self.d);
        if d < 2 || d % 2 == 1 {
            return Err(Error::Domain(format!("witness families need an even d >= 2, got {d}")));
        }
        if self.family.odd_m() {
            if m < 3 || m % 2 == 0 {
                return Err(Error::Domain(format!("odd-m families need an odd m >= 3, got {m}")));
            }
        } else if m < 2 || m % 2 == 1 {
            return Err(Error::Domain(format!("{} needs an even m >= 2, got {m}", self.family.name())));
        }
        if self.rep == Representation::Chiral4 && !(self.family == Family::Kind1 && m == 2 && d == 4) {
            return Err(Error::UnsupportedRepresentation(
                "the chiral representation is only used for the first kind at m = 2, d = 4".into(),
            ));
        }
        let n = self.family.coeff_len(d);
        if self.coeffs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.coeffs.len() });
        }
        if self.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        if self.coeffs[0] < 0.0 {
            return Err(Error::Domain("a_0 must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn local_dim(&self) -> usize {
        1 << (self.d / 2)
    }

    /// Largest coefficient magnitude, used to make tolerances scale-free.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |s, c| s.max(c.abs())).max(f64::MIN_POSITIVE)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|a| *a *= c);
        out
    }

    /// Tensor factors of every non-identity block, in coefficient order.
    pub fn blocks(&self) -> Result<Vec<Vec<CMatrix>>> {
        self.validate()?;
        let (m, d, h) = (self.m, self.d, self.d / 2);
        let power = |l: &CMatrix| vec![l.clone(); m];
        let head = |l: &CMatrix, last: &CMatrix| {
            let mut f = vec![l.clone(); m - 1];
            f.push(last.clone());
            f
        };
        let id = CMatrix::identity(self.local_dim(), self.local_dim());
        Ok(match (self.family, self.rep) {
            (Family::Kind1, Representation::Chiral4) => build_chiral4().gammas.iter().map(power).collect(),
            (Family::Kind1, _) => build_euclidean_gammas(d)?.gammas.iter().map(power).collect(),
            (Family::ApproxKind1, _) => {
                let g = build_euclidean_gammas(d)?.gammas;
                let h12 = (&g[0] * &g[1]).map(|z| -z * I);
                g.iter().chain(std::iter::once(&h12)).map(power).collect()
            }
            (Family::Kind2, _) => commuting_sets(d)?.primed_matrices().iter().map(power).collect(),
            (Family::ApproxKind2, _) => {
                let a = commuting_sets(d)?.primed_matrices();
                let l = &a[0] * &a[1];
                a.iter().chain(std::iter::once(&l)).map(power).collect()
            }
            (Family::OddM1, _) => {
                let g = build_euclidean_gammas(d)?.gammas;
                let last = self.odd_set.pick(&commuting_sets(d)?);
                (0..h)
                    .map(|i| head(&g[i], &last[i]))
                    .chain((0..h).map(|i| head(&g[h + i], &last[i])))
                    .chain(std::iter::once(head(&g[d], &id)))
                    .collect()
            }
            (Family::OddM2, _) => {
                let a = commuting_sets(d)?.primed_matrices();
                (0..h)
                    .map(|i| head(&a[i], &a[i]))
                    .chain((0..h).map(|i| head(&a[h + i], &a[i])))
                    .chain((0..h).map(|i| head(&a[d + i], &id)))
                    .collect()
            }
        })
    }

    pub fn product_sum(&self) -> Result<ProductSum> {
        let terms = self
            .blocks()?
            .into_iter()
            .zip(&self.coeffs[1..])
            .map(|(factors, &coeff)| ProductTerm { coeff, factors })
            .collect();
        ProductSum::new(self.m, self.local_dim(), self.coeffs[0], terms)
    }

    pub fn matrix(&self) -> Result<HermitianOperator> {
        self.product_sum()?.to_operator()
    }
}

fn signs(bits: &[u8]) -> Result<Vec<f64>> {
    bits.iter()
        .map(|&b| match b {
            0 => Ok(1.0),
            1 => Ok(-1.0),
            _ => Err(Error::Domain(format!("bits must be 0 or 1, got {b}"))),
        })
        .collect()
}

fn check_bits(bits: &[u8], n: usize) -> Result<Vec<f64>> {
    if bits.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: bits.len() });
    }
    signs(bits)
}

/// `a_0 = 1`, `a_k = (-1)^{i_k}`, `a_{d+1} = -(-i)^{md/2} (-1)^{Σ i_k}`.
pub fn optimal_kind1(m: usize, d: usize, bits: &[u8]) -> Result<WitnessSpec> {
    let s = check_bits(bits, d)?;
    let phase = real_phase_inv_i(m * d / 2)?;
    let prod: f64 = s.iter().product();
    let mut coeffs = vec![1.0];
    coeffs.extend(&s);
    coeffs.push(-phase * prod);
    WitnessSpec::new(Family::Kind1, m, d, coeffs)
}

/// Chiral first-kind optimal witness `I + Σ_μ (-1)^{i_μ} γ^μ⊗γ^μ + (-1)^{Σ i} γ^5⊗γ^5`,
/// bits indexed by `μ = 0..3`. Lorentz covariant for every bit pattern.
pub fn optimal_kind1_chiral(bits: &[u8]) -> Result<WitnessSpec> {
    let s = check_bits(bits, 4)?;
    let prod: f64 = s.iter().product();
    let mut coeffs = vec![1.0];
    coeffs.extend(&s);
    coeffs.push(prod);
    WitnessSpec::chiral_kind1(coeffs)
}

/// `a'_j = (-1)^{i_1}`, `a'_{j+d/2} = (-1)^{i_2}`, `a'_{j+d} = -(-1)^{m/2+i_1+i_2}`.
pub fn optimal_kind2(m: usize, d: usize, i1: u8, i2: u8, j: usize) -> Result<WitnessSpec> {
    let h = d / 2;
    if j < 1 || j > h {
        return Err(Error::Domain(format!("j = {j} outside 1..={h}")));
    }
    let s = signs(&[i1, i2])?;
    let mpar = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut coeffs = vec![0.0; 3 * h + 1];
    coeffs[0] = 1.0;
    coeffs[j] = s[0];
    coeffs[j + h] = s[1];
    coeffs[j + d] = -mpar * s[0] * s[1];
    WitnessSpec::new(Family::Kind2, m, d, coeffs)
}

/// `I + (-1)^{i_1} γ_1^{⊗m} + (-1)^{i_2} γ_2^{⊗m} + (-1)^{i_1+i_2} (-iγ_1γ_2)^{⊗m}`.
pub fn optimal_approx1(m: usize, d: usize, i1: u8, i2: u8) -> Result<WitnessSpec> {
    let s = signs(&[i1, i2])?;
    let mut coeffs = vec![0.0; d + 3];
    coeffs[0] = 1.0;
    coeffs[1] = s[0];
    coeffs[2] = s[1];
    coeffs[d + 2] = s[0] * s[1];
    WitnessSpec::new(Family::ApproxKind1, m, d, coeffs)
}

/// Second-kind optimal witness with the `(A'_1A'_2)^{⊗m}` term, bits `i_1..i_{d/2+1}`.
pub fn optimal_approx2(m: usize, d: usize, bits: &[u8]) -> Result<WitnessSpec> {
    let h = d / 2;
    let s = check_bits(bits, h + 1)?;
    let sk = |k: usize| s[k - 1];
    let mpar = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut coeffs = vec![0.0; 3 * h + 2];
    coeffs[0] = 1.0;
    for k in 1..=h + 1 {
        coeffs[k] = sk(k);
    }
    for k in 2..=h {
        coeffs[h + k] = sk(1) * sk(h + 1) * sk(k);
    }
    for k in 1..=h {
        coeffs[d + k] = mpar * sk(h + 1) * sk(k);
    }
    coeffs[3 * h + 1] = sk(1) * sk(2);
    WitnessSpec::new(Family::ApproxKind2, m, d, coeffs)
}

pub fn build_odd_m_kind1(m: usize, d: usize, coeffs: Vec<f64>) -> Result<WitnessSpec> {
    WitnessSpec::new(Family::OddM1, m, d, coeffs)
}

pub fn build_odd_m_kind2(m: usize, d: usize, coeffs: Vec<f64>) -> Result<WitnessSpec> {
    WitnessSpec::new(Family::OddM2, m, d, coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PositiveOperator,
    #[serde(rename = "ew")]
    EW,
    #[serde(rename = "not_ew")]
    NotEW,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decomposability {
    Decomposable,
    NonDecomposable,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessClass {
    pub verdict: Verdict,
    pub min_eig: f64,
    pub min_over_feasible: f64,
    /// Smallest closed-form eigenvalue, for the families that have one.
    pub closed_form_min: Option<f64>,
    pub optimal: bool,
    pub decomposable: Decomposability,
}

/// Minimum of `a_0 + Σ a_k P_k` over the family's feasible region.
pub fn min_over_feasible(spec: &WitnessSpec) -> Result<LpSolution> {
    spec.validate()?;
    let halfspaces = region_halfspaces(spec.family.region(), spec.d)?;
    let problem = LpProblem::new(spec.coeffs[1..].to_vec(), spec.coeffs[0], halfspaces)?;
    let sol = simplex_min(&problem)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Domain(format!("feasible-region LP ended {:?}", sol.status)));
    }
    Ok(sol)
}

fn closed_form_min(spec: &WitnessSpec) -> Result<Option<f64>> {
    if spec.rep != Representation::Euclidean {
        return Ok(None);
    }
    let levels = match spec.family {
        Family::Kind1 => kind1_levels(&spec.coeffs, spec.m, spec.d)?,
        Family::Kind2 => kind2_levels(&spec.coeffs, spec.m, spec.d)?,
        _ => return Ok(None),
    };
    Ok(levels.into_iter().map(|(v, _)| v).reduce(f64::min))
}

fn verdict_of(spec: &WitnessSpec, min_eig: f64, lp_min: f64) -> Verdict {
    let s = spec.scale();
    if min_eig >= -EIG_TOL * s {
        Verdict::PositiveOperator
    } else if lp_min >= -LP_TOL * s {
        Verdict::EW
    } else {
        Verdict::NotEW
    }
}

pub fn classify(spec: &WitnessSpec) -> Result<WitnessClass> {
    let ps = spec.product_sum()?;
    let min_eig = ps.spectrum()?.min_eigenvalue;
    let min_over_feasible = min_over_feasible(spec)?.optimum;
    let closed_form_min = closed_form_min(spec)?;
    let verdict = verdict_of(spec, min_eig, min_over_feasible);
    let (optimal, decomposable) = match verdict {
        Verdict::EW => {
            let optimal = match optimality_inner(spec, &ps, min_eig, min_over_feasible) {
                Ok(r) => r.optimal,
                Err(Error::Unsupported(_)) => false,
                Err(e) => return Err(e),
            };
            (optimal, decomposability_inner(spec, &ps, min_eig)?.verdict)
        }
        Verdict::PositiveOperator => (false, Decomposability::Decomposable),
        Verdict::NotEW => (false, Decomposability::Undetermined),
    };
    Ok(WitnessClass { verdict, min_eig, min_over_feasible, closed_form_min, optimal, decomposable })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub optimal: bool,
    pub is_witness: bool,
    pub on_boundary: bool,
    /// The joint `+1` eigenspace of all signed blocks is empty.
    pub null_space: bool,
    /// Rank of the zero-expectation product vectors found, when computed.
    pub spanning_rank: Option<usize>,
    pub dim: usize,
    /// For witnesses strictly inside the region, `W − εP` is still a witness
    /// for every projector `P` at this `ε`.
    pub falsifier_epsilon: Option<f64>,
}

pub fn check_optimality(spec: &WitnessSpec) -> Result<bool> {
    Ok(optimality_report(spec)?.optimal)
}

/// Optimality of a first- or second-kind witness.
///
/// A witness on the region boundary is certified optimal when either the
/// joint `+1` eigenspace of its signed blocks is empty, or the product
/// vectors with zero expectation span the whole space.
pub fn optimality_report(spec: &WitnessSpec) -> Result<OptimalityReport> {
    let ps = spec.product_sum()?;
    let min_eig = ps.spectrum()?.min_eigenvalue;
    let lp_min = min_over_feasible(spec)?.optimum;
    optimality_inner(spec, &ps, min_eig, lp_min)
}

fn optimality_inner(
    spec: &WitnessSpec,
    ps: &ProductSum,
    min_eig: f64,
    lp_min: f64,
) -> Result<OptimalityReport> {
    if !matches!(spec.family, Family::Kind1 | Family::Kind2) {
        return Err(Error::Unsupported(format!(
            "optimality is only certified for kind1 and kind2, not {}",
            spec.family.name()
        )));
    }
    let dim = ps.dim()?;
    let mut report = OptimalityReport {
        optimal: false,
        is_witness: verdict_of(spec, min_eig, lp_min) == Verdict::EW,
        on_boundary: lp_min.abs() <= LP_TOL * spec.scale(),
        null_space: false,
        spanning_rank: None,
        dim,
        falsifier_epsilon: None,
    };
    if lp_min > LP_TOL * spec.scale() {
        report.falsifier_epsilon = Some(lp_min);
    }
    if !report.is_witness || !report.on_boundary {
        return Ok(report);
    }
    let a0 = spec.coeffs[0];
    let blocks: Vec<(f64, CMatrix)> =
        hermitian_blocks(spec)?.into_iter().map(|(c, l)| (c / a0, l)).collect();
    let mut normalized = ps.clone();
    normalized.identity = 1.0;
    normalized.terms.iter_mut().for_each(|t| t.coeff /= a0);
    report.null_space = null_space_certificate(&blocks, spec.m)?;
    if !report.null_space {
        report.spanning_rank = spanning_rank(&blocks, spec.m, &normalized)?;
    }
    report.optimal = report.null_space || report.spanning_rank == Some(dim);
    Ok(report)
}

/// `(c, L)` pairs with Hermitian `L` such that block `k` is `c L^{⊗m}`.
fn hermitian_blocks(spec: &WitnessSpec) -> Result<Vec<(f64, CMatrix)>> {
    let mpar = if (spec.m / 2) % 2 == 0 { 1.0 } else { -1.0 };
    spec.blocks()?
        .into_iter()
        .zip(&spec.coeffs[1..])
        .map(|(factors, &c)| {
            let l = &factors[0];
            if hermiticity_defect(l) <= 1e-12 {
                Ok((c, l.clone()))
            } else if (l + l.adjoint()).norm() <= 1e-12 * l.norm() {
                Ok((c * mpar, l.map(|z| z * I)))
            } else {
                Err(Error::NotHermitian(hermiticity_defect(l)))
            }
        })
        .collect()
}

fn is_unit(c: f64) -> bool {
    (c.abs() - 1.0).abs() <= ZERO_TOL
}

fn null_space_certificate(blocks: &[(f64, CMatrix)], m: usize) -> Result<bool> {
    let active: Vec<&(f64, CMatrix)> = blocks.iter().filter(|(c, _)| c.abs() > ZERO_TOL).collect();
    if active.len() < 2 || active.iter().any(|(c, _)| !is_unit(*c)) {
        return Ok(false);
    }
    let local = active[0].1.nrows();
    let dim = local.pow(m as u32);
    if dim > CERTIFICATE_DIM_CAP {
        return Ok(false);
    }
    let id = CMatrix::identity(dim, dim);
    let half = |c: f64, l: &CMatrix| (&id + kron_all(&vec![l.clone(); m]).map(|z| z * c)).map(|z| z * 0.5);
    let (last, first) = active.split_last().expect("at least two blocks");
    let q = first.iter().fold(id.clone(), |q, (c, l)| q * half(*c, l));
    let rest = &q * half(last.0, &last.1);
    Ok(q.trace().re > 0.5 && rest.norm() <= ZERO_TOL * dim as f64)
}

fn commutes(a: &CMatrix, b: &CMatrix) -> bool {
    (a * b - b * a).norm() <= 1e-9
}

fn anticommutes(a: &CMatrix, b: &CMatrix) -> bool {
    (a * b + b * a).norm() <= 1e-9
}

/// Eigenvectors of `target` that also diagonalize every matrix in `others`
/// commuting with it, each tagged with its `target` eigenvalue.
fn joint_eigvecs(target: &CMatrix, others: &[&CMatrix]) -> Result<Vec<(f64, CVector)>> {
    let commuting: Vec<&&CMatrix> = others.iter().filter(|o| commutes(target, o)).collect();
    let n = commuting.len().max(1) as f64;
    let mut probe = target.clone();
    for (j, o) in commuting.iter().enumerate() {
        // generic weights, summing to less than half the ±1 gap
        let w = 0.4 / n * (0.5 + ((j as f64 + 2.0).sqrt() * 7.0).fract() * 0.5);
        probe += o.map(|z| z * w);
    }
    let (_, vecs) = hermitian_eigen(&probe)?;
    Ok(vecs
        .column_iter()
        .map(|c| {
            let v: CVector = c.into_owned();
            (v.dotc(&(target * &v)).re, v)
        })
        .collect())
}

fn spanning_rank(blocks: &[(f64, CMatrix)], m: usize, ps: &ProductSum) -> Result<Option<usize>> {
    let dim = ps.dim()?;
    if dim > CERTIFICATE_DIM_CAP {
        return Ok(None);
    }
    let nonzero: Vec<&CMatrix> = blocks.iter().filter(|(c, _)| c.abs() > ZERO_TOL).map(|(_, l)| l).collect();
    let active: Vec<&(f64, CMatrix)> = blocks.iter().filter(|(c, _)| is_unit(*c)).collect();
    let mut products: Vec<Vec<CVector>> = Vec::new();

    // apex states: eigenvectors of one block with eigenvalue product -sign(c)
    for (c, l) in &active {
        let eig = joint_eigvecs(l, &nonzero)?;
        let plus: Vec<&CVector> = eig.iter().filter(|(v, _)| *v > 0.0).map(|(_, x)| x).collect();
        let minus: Vec<&CVector> = eig.iter().filter(|(v, _)| *v < 0.0).map(|(_, x)| x).collect();
        for mask in 0u32..1 << m {
            let negative = mask.count_ones() % 2 == 1;
            if negative != (*c > 0.0) {
                continue;
            }
            let sets: Vec<&Vec<&CVector>> =
                (0..m).map(|p| if mask >> p & 1 == 0 { &plus } else { &minus }).collect();
            for combo in sets.iter().map(|s| s.iter()).multi_cartesian_product() {
                products.push(combo.into_iter().map(|v| (*v).clone()).collect());
            }
        }
    }

    // facet states for two factors: +1 eigenvectors of Σ n_k L_k and of Σ(-c_k n_k) L_k
    if m == 2 {
        for size in 2..=3 {
            for group in active.iter().combinations(size) {
                let pairwise = group.iter().tuple_combinations().all(|(a, b)| anticommutes(&a.1, &b.1));
                if !pairwise {
                    continue;
                }
                let norm = (size as f64).sqrt();
                for mask in 0u32..1 << size {
                    let n: Vec<f64> =
                        (0..size).map(|k| if mask >> k & 1 == 0 { 1.0 } else { -1.0 } / norm).collect();
                    let zero = CMatrix::zeros(ps.local_dim, ps.local_dim);
                    let first = group.iter().zip(&n).fold(zero.clone(), |acc, ((_, l), nk)| acc + l.map(|z| z * *nk));
                    let second =
                        group.iter().zip(&n).fold(zero, |acc, ((c, l), nk)| acc + l.map(|z| z * (-c * nk)));
                    let u: Vec<CVector> = joint_eigvecs(&first, &nonzero)?
                        .into_iter()
                        .filter(|(v, _)| *v > 0.0)
                        .map(|(_, x)| x)
                        .collect();
                    let w: Vec<CVector> = joint_eigvecs(&second, &nonzero)?
                        .into_iter()
                        .filter(|(v, _)| *v > 0.0)
                        .map(|(_, x)| x)
                        .collect();
                    for (a, b) in u.iter().cartesian_product(&w) {
                        products.push(vec![a.clone(), b.clone()]);
                    }
                }
            }
        }
    }

    let mut gram = CMatrix::zeros(dim, dim);
    for locals in products.iter().filter(|l| ps.product_expectation(l).abs() <= ZERO_TOL) {
        let mut v = locals[0].clone();
        for f in &locals[1..] {
            v = v.kronecker(f);
        }
        gram += &v * v.adjoint();
    }
    let eig = hermitian_eigenvalues(&gram)?;
    let top = eig.last().copied().unwrap_or(0.0);
    Ok(Some(eig.iter().filter(|&&x| x > 1e-9 * top.max(1.0)).count()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub state: String,
    pub detection: f64,
    pub state_min_eigenvalue: f64,
    pub state_pt_min_eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub verdict: Decomposability,
    pub min_eigenvalue: f64,
    pub pt_min_eigenvalues: Vec<f64>,
    /// How a Decomposable verdict was certified.
    pub certificate: Option<Certificate>,
    /// A PPT state detected by the witness, when one was found.
    pub evidence: Option<Evidence>,
}

/// Why a witness is known to be decomposable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// `W ≥ 0`.
    Positive,
    /// `W^{T_k} ≥ 0` for the listed 1-based subsystem.
    PartialTranspose(usize),
    /// `W = W_+ + W_-` with `W_± = (I ± K^{⊗m}) W / 2` for a local involution
    /// `K` commuting with every block; each piece is positive or has a
    /// positive partial transpose on the listed subsystem (0 for positive).
    SectorSplit { pieces: Vec<usize> },
}

/// Decomposable when the witness or one of its partial transposes is
/// positive; non-decomposable when it detects one of the PPT vertex states;
/// undetermined otherwise.
pub fn decomposability(spec: &WitnessSpec) -> Result<DecompositionReport> {
    let ps = spec.product_sum()?;
    let min_eig = ps.spectrum()?.min_eigenvalue;
    decomposability_inner(spec, &ps, min_eig)
}

/// Splits `W` along the `±1` eigenspaces of `K^{⊗m}`, where `K` is the
/// (phase-fixed) product of the active local blocks. Returns, per piece, 0 when
/// it is positive or the subsystem whose partial transpose is positive.
fn sector_split(ps: &ProductSum, tol: f64) -> Result<Option<Vec<usize>>> {
    let active: Vec<&ProductTerm> = ps.terms.iter().filter(|t| t.coeff.abs() > ZERO_TOL).collect();
    let locals: Vec<&CMatrix> = active.iter().map(|t| &t.factors[0]).collect();
    if locals.len() < 2 || active.iter().any(|t| t.factors.iter().any(|f| f != &t.factors[0])) {
        return Ok(None);
    }
    let n = ps.local_dim;
    let id = CMatrix::identity(n, n);
    let mut k = locals.iter().fold(id.clone(), |acc, l| acc * *l);
    let sq = &k * &k;
    if (&sq + &id).norm() <= 1e-9 {
        k = k.map(|z| z * I);
    } else if (&sq - &id).norm() > 1e-9 {
        return Ok(None);
    }
    if (&k - &id).norm() <= 1e-9 || (&k + &id).norm() <= 1e-9 || !locals.iter().all(|l| commutes(&k, l)) {
        return Ok(None);
    }
    let mut pieces = Vec::new();
    for sign in [1.0, -1.0] {
        let mut terms = vec![ProductTerm { coeff: sign * ps.identity / 2.0, factors: vec![k.clone(); ps.m] }];
        for t in &active {
            terms.push(ProductTerm { coeff: t.coeff / 2.0, factors: t.factors.clone() });
            terms.push(ProductTerm {
                coeff: sign * t.coeff / 2.0,
                factors: t.factors.iter().map(|f| &k * f).collect(),
            });
        }
        let piece = ProductSum::new(ps.m, n, ps.identity / 2.0, terms)?;
        if piece.spectrum()?.min_eigenvalue >= -tol {
            pieces.push(0);
        } else if let Some(j) = piece.min_partial_transpose_eigenvalues()?.iter().position(|&v| v >= -tol) {
            pieces.push(j + 1);
        } else {
            return Ok(None);
        }
    }
    Ok(Some(pieces))
}

fn decomposability_inner(spec: &WitnessSpec, ps: &ProductSum, min_eig: f64) -> Result<DecompositionReport> {
    let pt = ps.min_partial_transpose_eigenvalues()?;
    let tol = PT_TOL * spec.scale();
    let mut report = DecompositionReport {
        verdict: Decomposability::Undetermined,
        min_eigenvalue: min_eig,
        pt_min_eigenvalues: pt.clone(),
        certificate: None,
        evidence: None,
    };
    if min_eig >= -tol {
        report.certificate = Some(Certificate::Positive);
    } else if let Some(k) = pt.iter().position(|&v| v >= -tol) {
        report.certificate = Some(Certificate::PartialTranspose(k + 1));
    } else if let Some(pieces) = sector_split(ps, tol)? {
        report.certificate = Some(Certificate::SectorSplit { pieces });
    }
    if report.certificate.is_some() {
        report.verdict = Decomposability::Decomposable;
        return Ok(report);
    }
    let w = ps.to_matrix()?;
    for (label, state) in states::ppt_candidates(spec.m, spec.d)? {
        let rho = state.product_sum()?;
        let value = trace_product(&w, &rho.to_matrix()?).re;
        if value >= -tol || report.evidence.as_ref().is_some_and(|e| value >= e.detection) {
            continue;
        }
        let smin = rho.spectrum()?.min_eigenvalue;
        let spt = rho.min_partial_transpose_eigenvalues()?;
        if smin < -PT_TOL || spt.iter().any(|&v| v < -PT_TOL) {
            continue;
        }
        report.evidence = Some(Evidence {
            state: label,
            detection: value,
            state_min_eigenvalue: smin,
            state_pt_min_eigenvalues: spt,
        });
    }
    if report.evidence.is_some() {
        report.verdict = Decomposability::NonDecomposable;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn all_bits(n: usize) -> Vec<Vec<u8>> {
        (0u32..1 << n).map(|mask| (0..n).map(|k| (mask >> k & 1) as u8).collect()).collect()
    }

    #[test]
    fn chiral_pattern_for_bits_0111() {
        let w = optimal_kind1_chiral(&[0, 1, 1, 1]).unwrap();
        assert_eq!(w.coeffs, vec![1.0, 1.0, -1.0, -1.0, -1.0, -1.0]);
    }

    #[test]
    fn euclidean_kind1_coefficients() {
        let w = optimal_kind1(2, 4, &[0, 1, 1, 1]).unwrap();
        assert_eq!(w.coeffs, vec![1.0, 1.0, -1.0, -1.0, -1.0, 1.0]);
        let w = optimal_kind1(2, 2, &[1, 0]).unwrap();
        // i^{-2} = -1, so the last coefficient is Π s = -1
        assert_eq!(w.coeffs, vec![1.0, -1.0, 1.0, -1.0]);
        assert!(optimal_kind1(2, 4, &[0, 1]).is_err());
        assert!(optimal_kind1(2, 4, &[0, 1, 2, 0]).is_err());
    }

    #[test]
    fn kind1_all_ones_min_eig() {
        let w = optimal_kind1(2, 4, &[1, 1, 1, 1]).unwrap();
        let c = classify(&w).unwrap();
        assert_abs_diff_eq!(c.min_eig, -4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c.closed_form_min.unwrap(), -4.0, epsilon = 1e-12);
        assert_eq!(c.verdict, Verdict::EW);
        assert_abs_diff_eq!(c.min_over_feasible, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn every_kind1_optimal_is_a_boundary_witness() {
        for bits in all_bits(4) {
            let c = classify(&optimal_kind1(2, 4, &bits).unwrap()).unwrap();
            assert_eq!(c.verdict, Verdict::EW, "{bits:?}");
            assert!(c.min_eig < 0.0);
            assert_abs_diff_eq!(c.min_over_feasible, 0.0, epsilon = 1e-9);
            let c = classify(&optimal_kind1_chiral(&bits).unwrap()).unwrap();
            assert_eq!(c.verdict, Verdict::EW, "chiral {bits:?}");
            assert_abs_diff_eq!(c.min_over_feasible, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn kind2_eq_3_39() {
        let w = optimal_kind2(2, 4, 1, 1, 1).unwrap();
        assert_eq!(w.coeffs, vec![1.0, -1.0, 0.0, -1.0, 0.0, 1.0, 0.0]);
        let c = classify(&w).unwrap();
        assert_abs_diff_eq!(c.min_eig, -2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c.min_over_feasible, 0.0, epsilon = 1e-9);
        assert_eq!(c.verdict, Verdict::EW);
        assert!(optimal_kind2(2, 4, 0, 0, 3).is_err());
        assert!(optimal_kind2(2, 4, 0, 0, 0).is_err());
    }

    #[test]
    fn trivial_and_violating_classifications() {
        let mut a = vec![0.0; 6];
        a[0] = 1.0;
        let c = classify(&WitnessSpec::new(Family::Kind1, 2, 4, a).unwrap()).unwrap();
        assert_eq!(c.verdict, Verdict::PositiveOperator);
        assert_eq!(c.decomposable, Decomposability::Decomposable);
        let c = classify(&WitnessSpec::new(Family::Kind1, 2, 4, vec![1.0, 1.5, 0.0, 0.0, 0.0, 0.0]).unwrap())
            .unwrap();
        assert_eq!(c.verdict, Verdict::NotEW);
        assert_abs_diff_eq!(c.min_over_feasible, 1.0 - 1.5, epsilon = 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(WitnessSpec::new(Family::Kind1, 2, 4, vec![-1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
        assert!(WitnessSpec::new(Family::Kind1, 2, 4, vec![1.0; 5]).is_err());
        assert!(WitnessSpec::new(Family::Kind1, 3, 4, vec![1.0; 6]).is_err());
        assert!(WitnessSpec::new(Family::OddM1, 2, 4, vec![1.0; 6]).is_err());
        assert!(build_odd_m_kind1(3, 2, vec![1.0; 4]).is_ok());
        let mut spec = optimal_kind2(2, 4, 0, 0, 1).unwrap();
        spec.rep = Representation::Chiral4;
        assert!(matches!(spec.validate(), Err(Error::UnsupportedRepresentation(_))));
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }

    #[test]
    fn optimality_certificates() {
        for bits in [[0, 1, 1, 1], [1, 1, 1, 1], [0, 0, 0, 0]] {
            let r = optimality_report(&optimal_kind1(2, 4, &bits).unwrap()).unwrap();
            assert!(r.optimal && r.null_space, "{bits:?} {r:?}");
            let r = optimality_report(&optimal_kind1_chiral(&bits).unwrap()).unwrap();
            assert!(r.optimal && r.null_space, "chiral {bits:?} {r:?}");
        }
        let r = optimality_report(&optimal_kind2(2, 4, 1, 1, 1).unwrap()).unwrap();
        assert!(r.optimal && r.null_space);
        // for j = 2 the three blocks multiply to a non-scalar K; zero product
        // vectors span only 14 of 16 dimensions
        let r = optimality_report(&optimal_kind2(2, 4, 0, 1, 2).unwrap()).unwrap();
        assert!(!r.optimal && !r.null_space && r.on_boundary);
        assert_eq!(r.spanning_rank, Some(14));
    }

    #[test]
    fn interior_and_face_witnesses_are_not_optimal() {
        let mut w = optimal_kind1(2, 4, &[1, 0, 1, 1]).unwrap();
        w.coeffs[1..].iter_mut().for_each(|a| *a *= 0.5);
        let r = optimality_report(&w).unwrap();
        assert!(!r.optimal && !r.on_boundary);
        assert_abs_diff_eq!(r.falsifier_epsilon.unwrap(), 0.5, epsilon = 1e-9);

        let face = WitnessSpec::new(Family::Kind1, 2, 4, vec![1.0, -1.0, -1.0, 0.0, 0.0, 0.0]).unwrap();
        let r = optimality_report(&face).unwrap();
        assert!(r.is_witness && r.on_boundary && !r.optimal, "{r:?}");
        assert!(r.spanning_rank.unwrap() < 16);
    }

    #[test]
    fn optimality_rejects_other_families() {
        let w = optimal_approx1(2, 4, 0, 0).unwrap();
        assert!(matches!(check_optimality(&w), Err(Error::Unsupported(_))));
    }

    #[test]
    fn kind1_is_non_decomposable_at_d4() {
        let r = decomposability(&optimal_kind1(2, 4, &[1, 1, 1, 1]).unwrap()).unwrap();
        assert_eq!(r.verdict, Decomposability::NonDecomposable);
        assert_abs_diff_eq!(r.evidence.unwrap().detection, -2.0 / 3.0, epsilon = 1e-10);
        assert!(r.pt_min_eigenvalues.iter().all(|&v| v <= -2.0 + 1e-10));
        let r = decomposability(&optimal_kind1_chiral(&[0, 1, 1, 1]).unwrap()).unwrap();
        assert_eq!(r.verdict, Decomposability::NonDecomposable);
        assert_abs_diff_eq!(r.evidence.unwrap().detection, -2.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn kind1_at_d2_and_kind2_are_decomposable() {
        for bits in all_bits(2) {
            let r = decomposability(&optimal_kind1(2, 2, &bits).unwrap()).unwrap();
            assert_eq!(r.verdict, Decomposability::Decomposable);
        }
        for (i1, i2) in [(0, 0), (1, 0), (1, 1)] {
            let r = decomposability(&optimal_kind2(2, 4, i1, i2, 1).unwrap()).unwrap();
            assert_eq!(r.verdict, Decomposability::Decomposable);
            assert!(r.pt_min_eigenvalues.iter().all(|&v| v >= -PT_TOL));
            let r = decomposability(&optimal_kind2(2, 4, i1, i2, 2).unwrap()).unwrap();
            assert_eq!(r.verdict, Decomposability::Decomposable);
            assert!(matches!(r.certificate, Some(Certificate::SectorSplit { .. })), "{r:?}");
            assert!(r.pt_min_eigenvalues.iter().all(|&v| (v + 2.0).abs() < 1e-10));
        }
    }

    #[test]
    fn approx_partial_transposes() {
        // both partial transposes of the first approximate family are positive
        let r = decomposability(&optimal_approx1(2, 4, 0, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.pt_min_eigenvalues[0], 0.0, epsilon = 1e-10);
        assert_eq!(r.verdict, Decomposability::Decomposable);
        let ps = optimal_approx2(2, 4, &[0, 0, 0]).unwrap().product_sum().unwrap();
        let pt = ps.min_partial_transpose_eigenvalues().unwrap();
        assert_abs_diff_eq!(pt[0], -4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(pt[1], -4.0, epsilon = 1e-10);
    }

    #[test]
    fn approx1_against_its_region() {
        let c = classify(&optimal_approx1(2, 4, 0, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(c.min_eig, -2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c.min_over_feasible, 1.0 - 2f64.sqrt(), epsilon = 1e-9);
        assert_eq!(c.verdict, Verdict::NotEW);
    }

    #[test]
    fn approx2_optimal_is_positive() {
        for bits in all_bits(3) {
            let c = classify(&optimal_approx2(2, 4, &bits).unwrap()).unwrap();
            assert_eq!(c.verdict, Verdict::PositiveOperator, "{bits:?}");
        }
    }

    #[test]
    fn odd_m_blocks() {
        let id = build_odd_m_kind1(3, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap().matrix().unwrap();
        assert!((id.matrix - CMatrix::identity(8, 8)).norm() < 1e-15);
        for spec in [
            build_odd_m_kind1(3, 2, vec![1.0, 0.3, -0.2, 0.5]).unwrap(),
            build_odd_m_kind1(3, 4, vec![1.0; 6]).unwrap().with_odd_set(SetChoice::C3),
            build_odd_m_kind2(3, 4, vec![1.0; 7]).unwrap(),
        ] {
            let mats: Vec<CMatrix> = spec.blocks().unwrap().iter().map(|f| kron_all(f)).collect();
            for (a, b) in mats.iter().tuple_combinations() {
                assert!((a * b - b * a).norm() < 1e-12);
            }
            assert!(spec.matrix().is_ok());
        }
    }

    #[test]
    fn scaling_keeps_verdicts() {
        let w = optimal_kind2(2, 4, 0, 1, 2).unwrap();
        let a = classify(&w).unwrap();
        let b = classify(&w.scaled(7.5)).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.decomposable, b.decomposable);
        assert_eq!(a.optimal, b.optimal);
    }
}
