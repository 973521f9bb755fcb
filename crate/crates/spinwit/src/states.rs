//! Helicity, Bell-type, iso-concurrence and EPR states, Bell-states-diagonal
//! density matrices, PPT tests, region classification and concurrence.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::gamma::{algebra_elements, build_chiral4, build_euclidean_gammas, pauli, Representation};
use crate::operator::{
    hermitian_eigen, hermitian_eigenvalues, kind1_levels, partial_transpose_matrix, trace_product,
    HermitianOperator, ProductSum, ProductTerm,
};
use crate::witness::{optimal_kind1, optimal_kind1_chiral, optimal_kind2, Family, WitnessSpec};
use crate::{CMatrix, CVector, Error, Result};

/// Eigenvalues at or above `-STATE_TOL` count as nonnegative for states.
pub const STATE_TOL: f64 = 1e-10;
/// A witness detects a state when `Tr(Wρ) < -DETECTION_TOL`.
pub const DETECTION_TOL: f64 = 1e-10;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The four helicity spinors.
pub fn helicity_basis() -> [CVector; 4] {
    let v = |a: [f64; 4]| CVector::from_iterator(4, a.iter().map(|&x| c(x * FRAC_1_SQRT_2)));
    [
        v([1.0, 0.0, 1.0, 0.0]),
        v([0.0, 1.0, 0.0, -1.0]),
        v([1.0, 0.0, -1.0, 0.0]),
        v([0.0, 1.0, 0.0, 1.0]),
    ]
}

fn pair(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// `(|p_a p_a⟩ ± |p_b p_b⟩)/√2`, 0-based helicity indices.
fn psi(p: &[CVector; 4], a: usize, b: usize, sign: f64) -> CVector {
    (pair(&p[a], &p[a]) + pair(&p[b], &p[b]).map(|z| z * sign)).map(|z| z * FRAC_1_SQRT_2)
}

/// `(|p_a p_b⟩ ± |p_b p_a⟩)/√2`.
fn phi(p: &[CVector; 4], a: usize, b: usize, sign: f64) -> CVector {
    (pair(&p[a], &p[b]) + pair(&p[b], &p[a]).map(|z| z * sign)).map(|z| z * FRAC_1_SQRT_2)
}

/// The `k`-th (1-based) of the sixteen iso-concurrence states at angle `theta`.
/// At `theta = π/4` these are the Bell-type states.
pub fn iso_concurrence_state(k: usize, theta: f64) -> Result<CVector> {
    if !(1..=16).contains(&k) {
        return Err(Error::Domain(format!("state index {k} outside 1..=16")));
    }
    let p = helicity_basis();
    let pairs = [
        (false, (0, 1), (2, 3), 1.0),
        (false, (0, 1), (2, 3), -1.0),
        (true, (0, 1), (2, 3), 1.0),
        (true, (0, 1), (2, 3), -1.0),
        (true, (0, 2), (1, 3), 1.0),
        (true, (0, 2), (1, 3), -1.0),
        (true, (0, 3), (1, 2), 1.0),
        (true, (0, 3), (1, 2), -1.0),
    ];
    let (is_phi, (a, b), (e, f), sign) = pairs[(k - 1) / 2];
    let build = |x, y| if is_phi { phi(&p, x, y, sign) } else { psi(&p, x, y, sign) };
    let (u, v) = (build(a, b), build(e, f));
    let (cs, sn) = (theta.cos(), theta.sin());
    Ok(if k % 2 == 1 {
        u.map(|z| z * cs) + v.map(|z| z * sn)
    } else {
        u.map(|z| z * -sn) + v.map(|z| z * cs)
    })
}

pub fn bell_states() -> Vec<CVector> {
    (1..=16)
        .map(|k| iso_concurrence_state(k, std::f64::consts::FRAC_PI_4).expect("index in range"))
        .collect()
}

/// `(|p_4 p_1⟩ − i|p_1 p_4⟩)/√2`, unit normalized.
pub fn epr_state() -> CVector {
    let p = helicity_basis();
    (pair(&p[3], &p[0]) - pair(&p[0], &p[3]).map(|z| z * I)).map(|z| z * FRAC_1_SQRT_2)
}

/// `|φ_-⟩^{(1,4)} = (|p_1 p_4⟩ − |p_4 p_1⟩)/√2`.
pub fn phi_minus_14() -> CVector {
    phi(&helicity_basis(), 0, 3, -1.0)
}

/// The fifteen non-identity labels `A_1..A_15` in the chiral representation:
/// `γ^0..γ^3, γ^5`, then the products `γ^0γ^1, γ^0γ^2, -iγ^0γ^3, iγ^1γ^2,
/// -iγ^1γ^3, iγ^2γ^3, -iγ^0γ^5, γ^1γ^5, γ^2γ^5, γ^3γ^5`.
pub fn chiral_algebra() -> Vec<CMatrix> {
    let g = build_chiral4().gammas;
    let prod = |a: usize, b: usize, ph: Complex64| (&g[a] * &g[b]).map(|z| z * ph);
    let mut out = g.clone();
    out.extend([
        prod(0, 1, ONE),
        prod(0, 2, ONE),
        prod(0, 3, -I),
        prod(1, 2, I),
        prod(1, 3, -I),
        prod(2, 3, I),
        prod(0, 4, -I),
        prod(1, 4, ONE),
        prod(2, 4, ONE),
        prod(3, 4, ONE),
    ]);
    out
}

/// Which tensor-power blocks carry the coefficients `b_1, b_2, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSet {
    /// Every non-identity euclidean algebra element.
    Full,
    /// `γ_1..γ_d, γ_S`.
    Kind1,
    /// `A'_1..A'_{3d/2}`.
    Kind2,
    /// `Kind1` plus `-iγ_1γ_2`.
    Approx1,
    /// `Kind2` plus `A'_1A'_2`.
    Approx2,
    /// `γ^0, γ^1, γ^2, γ^3, γ^5` (`m = 2`, `d = 4`).
    Chiral,
    /// The fifteen chiral algebra labels (`m = 2`, `d = 4`).
    ChiralFull,
}

impl LabelSet {
    pub fn count(self, d: usize) -> usize {
        match self {
            LabelSet::Full => (1 << d) - 1,
            LabelSet::Kind1 => d + 1,
            LabelSet::Kind2 => 3 * d / 2,
            LabelSet::Approx1 => d + 2,
            LabelSet::Approx2 => 3 * d / 2 + 1,
            LabelSet::Chiral => 5,
            LabelSet::ChiralFull => 15,
        }
    }
}

impl std::str::FromStr for LabelSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "full" => LabelSet::Full,
            "kind1" => LabelSet::Kind1,
            "kind2" => LabelSet::Kind2,
            "approx1" => LabelSet::Approx1,
            "approx2" => LabelSet::Approx2,
            "chiral" => LabelSet::Chiral,
            "chiralfull" => LabelSet::ChiralFull,
            _ => return Err(Error::Domain(format!("unknown label set {s}"))),
        })
    }
}

/// `ρ = b_0 I + Σ_μ b_μ A_μ^{⊗m}` over a label set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsdState {
    pub m: usize,
    pub d: usize,
    pub labels: LabelSet,
    /// `b_0` followed by one coefficient per label.
    pub coeffs: Vec<f64>,
}

impl BsdState {
    pub fn new(m: usize, d: usize, labels: LabelSet, coeffs: Vec<f64>) -> Result<Self> {
        if m < 2 || m % 2 == 1 || d < 2 || d % 2 == 1 {
            return Err(Error::Domain(format!("BSD states need even m and d, got m={m}, d={d}")));
        }
        if matches!(labels, LabelSet::Chiral | LabelSet::ChiralFull) && (m, d) != (2, 4) {
            return Err(Error::UnsupportedRepresentation("chiral labels need m = 2, d = 4".into()));
        }
        let n = labels.count(d) + 1;
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: coeffs.len() });
        }
        let b0 = 0.5f64.powi((m * d / 2) as i32);
        if (coeffs[0] - b0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("b_0 = {} but unit trace needs {b0}", coeffs[0])));
        }
        Ok(BsdState { m, d, labels, coeffs })
    }

    /// Prepends the unit-trace `b_0 = 2^{-md/2}`.
    pub fn from_labels(m: usize, d: usize, labels: LabelSet, b: &[f64]) -> Result<Self> {
        let mut coeffs = vec![0.5f64.powi((m * d / 2) as i32)];
        coeffs.extend_from_slice(b);
        BsdState::new(m, d, labels, coeffs)
    }

    pub fn dim(&self) -> usize {
        1 << (self.m * self.d / 2)
    }

    pub fn blocks(&self) -> Result<Vec<Vec<CMatrix>>> {
        label_blocks(self.labels, self.m, self.d)
    }

    pub fn product_sum(&self) -> Result<ProductSum> {
        let terms = self
            .blocks()?
            .into_iter()
            .zip(&self.coeffs[1..])
            .map(|(factors, &coeff)| ProductTerm { coeff, factors })
            .collect();
        ProductSum::new(self.m, 1 << (self.d / 2), self.coeffs[0], terms)
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        self.product_sum()?.to_matrix()
    }

    pub fn operator(&self) -> Result<HermitianOperator> {
        self.product_sum()?.to_operator()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.product_sum()?.spectrum()?.min_eigenvalue)
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -STATE_TOL)
    }

    /// PPT flag per subsystem.
    pub fn ppt(&self) -> Result<Vec<bool>> {
        Ok(self
            .product_sum()?
            .min_partial_transpose_eigenvalues()?
            .into_iter()
            .map(|v| v >= -STATE_TOL)
            .collect())
    }
}

fn label_blocks(labels: LabelSet, m: usize, d: usize) -> Result<Vec<Vec<CMatrix>>> {
    let power = |l: &CMatrix| vec![l.clone(); m];
    let family_blocks = |family: Family| {
        let spec = WitnessSpec {
            family,
            m,
            d,
            rep: Representation::Euclidean,
            odd_set: Default::default(),
            coeffs: vec![0.0; family.coeff_len(d)],
        };
        spec.blocks()
    };
    match labels {
        LabelSet::Full => Ok(algebra_elements(&build_euclidean_gammas(d)?)?
            .iter()
            .skip(1)
            .map(|e| power(&e.matrix))
            .collect()),
        LabelSet::Kind1 => family_blocks(Family::Kind1),
        LabelSet::Kind2 => family_blocks(Family::Kind2),
        LabelSet::Approx1 => family_blocks(Family::ApproxKind1),
        LabelSet::Approx2 => family_blocks(Family::ApproxKind2),
        LabelSet::Chiral => Ok(build_chiral4().gammas.iter().map(power).collect()),
        LabelSet::ChiralFull => Ok(chiral_algebra().iter().map(power).collect()),
    }
}

/// `Tr(ρ A_μ⊗A_ν)/16` over the identity and the fifteen chiral labels.
pub fn expansion_matrix(rho: &CMatrix) -> Result<Vec<Vec<Complex64>>> {
    if rho.shape() != (16, 16) {
        return Err(Error::DimensionMismatch { expected: 16, got: rho.nrows() });
    }
    let mut labels = vec![CMatrix::identity(4, 4)];
    labels.extend(chiral_algebra());
    Ok(labels
        .iter()
        .map(|a| labels.iter().map(|b| trace_product(rho, &a.kronecker(b)) / 16.0).collect())
        .collect())
}

/// `Σ_i w_i |Ψ_i⟩⟨Ψ_i|` over the Bell-type states, expanded on the chiral labels.
pub fn bsd_from_mixture(weights: &[f64]) -> Result<BsdState> {
    if weights.len() != 16 {
        return Err(Error::DimensionMismatch { expected: 16, got: weights.len() });
    }
    if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::Domain("weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("weights sum to {total}, not 1")));
    }
    let mut rho = CMatrix::zeros(16, 16);
    for (w, v) in weights.iter().zip(bell_states()) {
        rho += (&v * v.adjoint()).map(|z| z * *w);
    }
    let e = expansion_matrix(&rho)?;
    let b: Vec<f64> = (1..16).map(|k| e[k][k].re).collect();
    BsdState::from_labels(2, 4, LabelSet::ChiralFull, &b)
}

fn sign(bit: u32) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Chiral PPT vertex states `(1/16) I + (1/48) Σ b_μ γ^μ⊗γ^μ` with
/// `b = ((-1)^{j_0}, …, (-1)^{j_3}, -(-1)^{Σ j})`; entry `mask` has `j_k` = bit `k`.
pub fn vertex_states_kind1_chiral() -> Vec<BsdState> {
    (0u32..16)
        .map(|mask| {
            let s: Vec<f64> = (0..4).map(|k| sign(mask >> k)).collect();
            let prod: f64 = s.iter().product();
            let mut b: Vec<f64> = s.iter().map(|x| x / 48.0).collect();
            b.push(-prod / 48.0);
            BsdState::from_labels(2, 4, LabelSet::Chiral, &b).expect("valid layout")
        })
        .collect()
}

/// Euclidean first-kind vertex states `b_k = c x_k`, `b_{d+1} = c i^{-md/2} Π x`,
/// `c = 1/((d-1) 2^{md/2})`, for every sign vector `x`.
pub fn vertex_states_kind1(m: usize, d: usize) -> Result<Vec<BsdState>> {
    let phase = crate::operator::real_phase_inv_i(m * d / 2)?;
    let scale = 1.0 / ((d as f64 - 1.0) * 2f64.powi((m * d / 2) as i32));
    (0u32..1 << d)
        .map(|mask| {
            let x: Vec<f64> = (0..d as u32).map(|k| sign(mask >> k)).collect();
            let prod: f64 = x.iter().product();
            let mut b: Vec<f64> = x.iter().map(|v| v * scale).collect();
            b.push(phase * prod * scale);
            BsdState::from_labels(m, d, LabelSet::Kind1, &b)
        })
        .collect()
}

/// For `m = 2`, `d = 4` the chiral vertex states; otherwise the euclidean
/// vertex states that pass the positivity and PPT checks.
pub fn vertex_ppt_states_kind1(m: usize, d: usize) -> Result<Vec<BsdState>> {
    if (m, d) == (2, 4) {
        return Ok(vertex_states_kind1_chiral());
    }
    let mut out = Vec::new();
    for s in vertex_states_kind1(m, d)? {
        if s.is_valid()? && s.ppt()?.iter().all(|&p| p) {
            out.push(s);
        }
    }
    Ok(out)
}

/// `2^{-md/2}((-1)^{i_1}, (-1)^{i_2}, 0, …, 0, -(-1)^{i_1+i_2})` on the
/// `approx1` labels, the last entry multiplying `(-iγ_1γ_2)^{⊗m}`.
pub fn vertex_states_approx1(m: usize, d: usize) -> Result<Vec<BsdState>> {
    let b0 = 0.5f64.powi((m * d / 2) as i32);
    (0u32..4)
        .map(|mask| {
            let (s1, s2) = (sign(mask), sign(mask >> 1));
            let mut b = vec![0.0; d + 2];
            b[0] = s1 * b0;
            b[1] = s2 * b0;
            b[d + 1] = -s1 * s2 * b0;
            BsdState::from_labels(m, d, LabelSet::Approx1, &b)
        })
        .collect()
}

/// `2^{-md/2}((-1)^{i_1}, (-1)^{i_2}, 0, …, 0, (-1)^{i_1+i_2})` on the `approx2` labels.
pub fn vertex_states_approx2(m: usize, d: usize) -> Result<Vec<BsdState>> {
    let b0 = 0.5f64.powi((m * d / 2) as i32);
    let n = 3 * d / 2 + 1;
    (0u32..4)
        .map(|mask| {
            let (s1, s2) = (sign(mask), sign(mask >> 1));
            let mut b = vec![0.0; n];
            b[0] = s1 * b0;
            b[1] = s2 * b0;
            b[n - 1] = s1 * s2 * b0;
            BsdState::from_labels(m, d, LabelSet::Approx2, &b)
        })
        .collect()
}

/// Labelled vertex states searched for non-decomposability evidence. They
/// are not filtered here.
pub fn ppt_candidates(m: usize, d: usize) -> Result<Vec<(String, BsdState)>> {
    let mut out = Vec::new();
    let bits = |mask: usize, n: usize| (0..n).map(|k| ((mask >> k) & 1).to_string()).collect::<String>();
    if (m, d) == (2, 4) {
        for (k, s) in vertex_states_kind1_chiral().into_iter().enumerate() {
            out.push((format!("kind1-chiral-vertex-{}", bits(k, 4)), s));
        }
    }
    for (k, s) in vertex_states_kind1(m, d)?.into_iter().enumerate() {
        out.push((format!("kind1-vertex-{}", bits(k, d)), s));
    }
    for (k, s) in vertex_states_approx1(m, d)?.into_iter().enumerate() {
        out.push((format!("approx1-vertex-{}", bits(k, 2)), s));
    }
    for (k, s) in vertex_states_approx2(m, d)?.into_iter().enumerate() {
        out.push((format!("approx2-vertex-{}", bits(k, 2)), s));
    }
    Ok(out)
}

/// PPT flag per subsystem of a density matrix on `m` factors of `local_dim`.
pub fn ppt_check(rho: &HermitianOperator) -> Result<Vec<bool>> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let min = hermitian_eigenvalues(&rho.matrix)?[0];
    if min < -STATE_TOL {
        return Err(Error::InvalidState(format!("minimum eigenvalue {min} is negative")));
    }
    (1..=rho.m)
        .map(|k| {
            let pt = partial_transpose_matrix(&rho.matrix, rho.local_dim, rho.m, k)?;
            Ok(hermitian_eigenvalues(&pt)?[0] >= -STATE_TOL)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Invalid,
    Separable,
    DetectedEntangled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub witness: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub region: Region,
    pub min_eigenvalue: f64,
    /// Smallest `Tr(Wρ)` over the family's optimal witnesses.
    pub min_detection: f64,
    /// Witnesses with `Tr(Wρ) < 0`.
    pub detections: Vec<Detection>,
}

fn family_optimal_witnesses(state: &BsdState, family: Family) -> Result<Vec<(String, WitnessSpec)>> {
    let (m, d) = (state.m, state.d);
    let bits = |mask: u32, n: usize| -> Vec<u8> { (0..n).map(|k| (mask >> k & 1) as u8).collect() };
    let label = |b: &[u8]| b.iter().map(|x| x.to_string()).collect::<String>();
    match (family, state.labels) {
        (Family::Kind1, LabelSet::Kind1) => (0u32..1 << d)
            .map(|mask| {
                let b = bits(mask, d);
                Ok((format!("kind1-{}", label(&b)), optimal_kind1(m, d, &b)?))
            })
            .collect(),
        (Family::Kind1, LabelSet::Chiral) => (0u32..16)
            .map(|mask| {
                let b = bits(mask, 4);
                Ok((format!("kind1-chiral-{}", label(&b)), optimal_kind1_chiral(&b)?))
            })
            .collect(),
        (Family::Kind2, LabelSet::Kind2) => {
            let mut out = Vec::new();
            for j in 1..=d / 2 {
                for mask in 0u32..4 {
                    let (i1, i2) = ((mask & 1) as u8, (mask >> 1 & 1) as u8);
                    out.push((format!("kind2-{i1}{i2}-j{j}"), optimal_kind2(m, d, i1, i2, j)?));
                }
            }
            Ok(out)
        }
        _ => Err(Error::Domain(format!(
            "region classification needs matching labels: {:?} labels against {} witnesses",
            state.labels,
            family.name()
        ))),
    }
}

/// Places a restricted-family state in the witness family's region
/// decomposition: invalid, inside every witness halfspace, or detected.
pub fn region_classify(state: &BsdState, family: Family) -> Result<RegionReport> {
    let witnesses = family_optimal_witnesses(state, family)?;
    let dim = state.dim() as f64;
    let min_eigenvalue = if state.labels == LabelSet::Kind1 {
        // closed form keeps large grids cheap
        kind1_levels(&state.coeffs, state.m, state.d)?
            .into_iter()
            .map(|(v, _)| v)
            .fold(f64::INFINITY, f64::min)
    } else {
        state.min_eigenvalue()?
    };
    let mut detections = Vec::new();
    let mut min_detection = f64::INFINITY;
    for (name, w) in witnesses {
        // blocks are orthonormal involutions: Tr(Wρ) = dim · Σ a_μ b_μ
        let value = dim * w.coeffs.iter().zip(&state.coeffs).map(|(a, b)| a * b).sum::<f64>();
        min_detection = min_detection.min(value);
        if value < -DETECTION_TOL {
            detections.push(Detection { witness: name, value });
        }
    }
    let region = if min_eigenvalue < -STATE_TOL {
        Region::Invalid
    } else if detections.is_empty() {
        Region::Separable
    } else {
        Region::DetectedEntangled
    };
    Ok(RegionReport { region, min_eigenvalue, min_detection, detections })
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn wootters_concurrence(rho: &CMatrix) -> Result<f64> {
    if rho.shape() != (4, 4) {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.nrows() });
    }
    let (vals, vecs) = hermitian_eigen(rho)?;
    if vals[0] < -STATE_TOL {
        return Err(Error::InvalidState(format!("minimum eigenvalue {} is negative", vals[0])));
    }
    let root = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        vals.iter().map(|&v| c(v.max(0.0).sqrt())),
    ));
    let sqrt_rho = &vecs * root * vecs.adjoint();
    let sy = &pauli()[1];
    let yy = sy.kronecker(sy);
    let tilde = &yy * rho.conjugate() * &yy;
    let r = &sqrt_rho * tilde * &sqrt_rho;
    let r = (&r + r.adjoint()).map(|z| z * 0.5);
    let mut lam: Vec<f64> = hermitian_eigenvalues(&r)?.into_iter().map(|x| x.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Haar-random unit vector of dimension `dim`.
pub fn random_local_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let n = v.norm();
    v.map(|z| z / n)
}

pub fn random_product_locals<R: Rng + ?Sized>(rng: &mut R, m: usize, local_dim: usize) -> Vec<CVector> {
    (0..m).map(|_| random_local_state(rng, local_dim)).collect()
}

/// Tensor product of `m` independent Haar-random local states; fixed by `seed`.
pub fn random_pure_product(m: usize, local_dim: usize, seed: u64) -> CVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let locals = random_product_locals(&mut rng, m, local_dim);
    locals[1..].iter().fold(locals[0].clone(), |acc, v| acc.kronecker(v))
}

/// One row of the two-qubit region scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub region: Region,
    pub min_detection: f64,
    pub concurrence: Option<f64>,
}

/// Grid over `b_k ∈ [-1/4, 1/4]` for `ρ = I/4 + Σ b_k σ_k⊗σ_k`.
pub fn region_scan_d2(resolution: f64) -> Result<Vec<ScanRow>> {
    if !(resolution > 0.0 && resolution <= 0.5) {
        return Err(Error::Domain(format!("resolution {resolution} outside (0, 0.5]")));
    }
    let steps = (0.5 / resolution).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|n| -0.25 + n as f64 * resolution).filter(|b| *b <= 0.25 + 1e-12).collect();
    let mut rows = Vec::new();
    for &b1 in &grid {
        for &b2 in &grid {
            for &b3 in &grid {
                let state = BsdState::from_labels(2, 2, LabelSet::Kind1, &[b1, b2, b3])?;
                let report = region_classify(&state, Family::Kind1)?;
                let concurrence = if report.region == Region::Invalid {
                    None
                } else {
                    Some(wootters_concurrence(&state.matrix()?)?)
                };
                rows.push(ScanRow { b1, b2, b3, region: report.region, min_detection: report.min_detection, concurrence });
            }
        }
    }
    Ok(rows)
}
