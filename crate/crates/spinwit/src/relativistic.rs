//! Lorentz boosts of two-spinor states in the chiral representation, the
//! Hilbert-Schmidt measure and the witness built from a closest-separable pair.

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gamma::build_chiral4;
use crate::operator::{hermitian_eigen, hermitian_eigenvalues, hermiticity_defect, hs_norm, trace_product};
use crate::states::{random_product_locals, STATE_TOL};
use crate::witness::optimal_kind1_chiral;
use crate::{CMatrix, CVector, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Tolerance on `|p̂| = 1`.
pub const DIRECTION_TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn scaled(m: &CMatrix, s: f64) -> CMatrix {
    m.map(|z| z * s)
}

/// Rapidity `xi` along the unit direction `p_hat`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostParams {
    pub xi: f64,
    pub p_hat: [f64; 3],
}

impl BoostParams {
    pub fn new(xi: f64, p_hat: [f64; 3]) -> Result<Self> {
        let norm = p_hat.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !xi.is_finite() || (norm - 1.0).abs() > DIRECTION_TOL {
            return Err(Error::Domain(format!("need finite rapidity and unit direction, got xi={xi}, |p|={norm}")));
        }
        Ok(BoostParams { xi, p_hat })
    }

    /// Boost along the z axis.
    pub fn z(xi: f64) -> Self {
        BoostParams { xi, p_hat: [0.0, 0.0, 1.0] }
    }
}

/// Spinor representation of the boost in the chiral basis.
pub fn boost_matrix(params: &BoostParams) -> CMatrix {
    let t = (params.xi / 2.0).tanh();
    let [p1, p2, p3] = params.p_hat;
    let pm = Complex64::new(p1, -p2) * t;
    let pp = Complex64::new(p1, p2) * t;
    let (a, b) = (c(1.0 - p3 * t), c(1.0 + p3 * t));
    let z = c(0.0);
    #[rustfmt::skip]
    let m = CMatrix::from_row_slice(4, 4, &[
        a, -pm, z, z,
        -pp, b, z, z,
        z, z, b, pm,
        z, z, pp, a,
    ]);
    scaled(&m, (params.xi / 2.0).cosh())
}

/// The real Lorentz matrix `Λ` with `D^{-1} γ^μ D = Λ^μ_ν γ^ν`, read off by
/// trace projection, and the residual of that expansion.
pub fn lorentz_matrix(params: &BoostParams) -> (Matrix4<f64>, f64) {
    let g = build_chiral4().gammas;
    let d = boost_matrix(params);
    let dinv = d.clone().try_inverse().expect("boosts are invertible");
    let metric = [1.0, -1.0, -1.0, -1.0];
    let mut lam = Matrix4::zeros();
    let mut residual: f64 = 0.0;
    for mu in 0..4 {
        let conj = &dinv * &g[mu] * &d;
        let mut rebuilt = CMatrix::zeros(4, 4);
        for nu in 0..4 {
            // (γ^ν)^2 = g^{νν}
            let coeff = trace_product(&conj, &g[nu]) / (4.0 * metric[nu]);
            lam[(mu, nu)] = coeff.re;
            residual = residual.max(coeff.im.abs());
            rebuilt += scaled(&g[nu], coeff.re);
        }
        residual = residual.max((conj - rebuilt).norm());
    }
    (lam, residual)
}

/// `(D⊗D) ρ (D†⊗D†)` divided by its trace.
pub fn boost_state(rho: &CMatrix, params: &BoostParams) -> Result<CMatrix> {
    check_density(rho)?;
    let d = boost_matrix(params);
    let dd = d.kronecker(&d);
    let out = &dd * rho * dd.adjoint();
    let tr = out.trace().re;
    Ok(scaled(&out, 1.0 / tr))
}

fn check_density(rho: &CMatrix) -> Result<()> {
    if rho.shape() != (16, 16) {
        return Err(Error::DimensionMismatch { expected: 16, got: rho.nrows() });
    }
    let defect = hermiticity_defect(rho);
    if defect > 1e-12 {
        return Err(Error::NotHermitian(defect));
    }
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let min = hermitian_eigenvalues(rho)?[0];
    if min < -STATE_TOL {
        return Err(Error::InvalidState(format!("minimum eigenvalue {min} is negative")));
    }
    Ok(())
}

fn gg(k: usize) -> CMatrix {
    let g = &build_chiral4().gammas[k];
    g.kronecker(g)
}

/// `I + γ^0⊗γ^0 − γ^1⊗γ^1 − γ^2⊗γ^2 − γ^3⊗γ^3 − γ^5⊗γ^5`.
pub fn rest_witness() -> CMatrix {
    optimal_kind1_chiral(&[0, 1, 1, 1])
        .and_then(|w| w.matrix())
        .expect("fixed chiral witness")
        .matrix
}

/// `(I − (γ^0⊗γ^0 − γ^1⊗γ^1 − γ^2⊗γ^2 − γ^3⊗γ^3 − γ^5⊗γ^5)/3)/16`, a PPT
/// entangled state detected by [`rest_witness`].
pub fn rest_entangled_state() -> CMatrix {
    let inner = gg(0) - gg(1) - gg(2) - gg(3) - gg(4);
    scaled(&(CMatrix::identity(16, 16) - scaled(&inner, 1.0 / 3.0)), 1.0 / 16.0)
}

/// `(5I − γ^0⊗γ^0 + γ^1⊗γ^1 + γ^2⊗γ^2 + γ^3⊗γ^3 + γ^5⊗γ^5)/80`.
pub fn rest_separable_state() -> CMatrix {
    let inner = -gg(0) + gg(1) + gg(2) + gg(3) + gg(4);
    scaled(&(scaled(&CMatrix::identity(16, 16), 5.0) + inner), 1.0 / 80.0)
}

/// `ρ − Tr(ρW) W + ε I` with `ε = Tr(ρW)(Tr W² − 1)/Tr W`, then divided by its
/// trace. Returns the normalized state and `⟨ρ_s, ρ_s − ρ⟩` recomputed for it.
pub fn closest_separable(rho_ent: &CMatrix, w_raw: &CMatrix) -> Result<(CMatrix, f64)> {
    check_density(rho_ent)?;
    if w_raw.shape() != rho_ent.shape() {
        return Err(Error::DimensionMismatch { expected: rho_ent.nrows(), got: w_raw.nrows() });
    }
    let t = trace_product(rho_ent, w_raw).re;
    if t >= -STATE_TOL {
        return Err(Error::Domain(format!("witness does not detect the state: Tr(Wρ) = {t}")));
    }
    let tr_w = w_raw.trace().re;
    let tr_w2 = trace_product(w_raw, w_raw).re;
    let eps = t * (tr_w2 - 1.0) / tr_w;
    let n = rho_ent.nrows();
    let raw = rho_ent - scaled(w_raw, t) + scaled(&CMatrix::identity(n, n), eps);
    let tr = raw.trace().re;
    let rho_s = scaled(&raw, 1.0 / tr);
    let epsilon = trace_product(&rho_s.adjoint(), &(&rho_s - rho_ent)).re;
    Ok((rho_s, epsilon))
}

/// `(ρ_s − ρ − ⟨ρ_s, ρ_s − ρ⟩ I)/‖ρ_s − ρ‖`.
pub fn witness_from_pair(rho_s: &CMatrix, rho_ent: &CMatrix) -> Result<CMatrix> {
    if rho_s.shape() != rho_ent.shape() {
        return Err(Error::DimensionMismatch { expected: rho_ent.nrows(), got: rho_s.nrows() });
    }
    let diff = rho_s - rho_ent;
    let norm = hs_norm(&diff);
    if norm <= 1e-14 {
        return Err(Error::Domain("states coincide".into()));
    }
    let e = trace_product(&rho_s.adjoint(), &diff).re;
    let n = diff.nrows();
    Ok(scaled(&(diff - scaled(&CMatrix::identity(n, n), e)), 1.0 / norm))
}

/// `-Tr(ρ W)` for a witness normalized as in [`witness_from_pair`].
pub fn hs_measure(rho_ent: &CMatrix, w: &CMatrix) -> f64 {
    -trace_product(rho_ent, w).re
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsResult {
    pub measure: f64,
    /// `‖ρ_s − ρ‖`.
    pub distance: f64,
    #[serde(skip)]
    pub closest_separable: CMatrix,
    #[serde(skip)]
    pub entangled: CMatrix,
    #[serde(skip)]
    pub optimal_witness: CMatrix,
    pub epsilon: f64,
    /// `Tr(ρ_s W)`, zero when the pair is in contact with the witness plane.
    pub contact: f64,
}

/// Boosts the rest-frame entangled state and its separable partner and
/// rebuilds the witness and measure in the moving frame.
pub fn hs_pipeline(params: &BoostParams) -> Result<HsResult> {
    let (rho_s0, _) = closest_separable(&rest_entangled_state(), &rest_witness())?;
    let rho_ent = boost_state(&rest_entangled_state(), params)?;
    let rho_s = boost_state(&rho_s0, params)?;
    let w = witness_from_pair(&rho_s, &rho_ent)?;
    let diff = &rho_s - &rho_ent;
    Ok(HsResult {
        measure: hs_measure(&rho_ent, &w),
        distance: hs_norm(&diff),
        epsilon: trace_product(&rho_s.adjoint(), &diff).re,
        contact: trace_product(&rho_s, &w).re,
        closest_separable: rho_s,
        entangled: rho_ent,
        optimal_witness: w,
    })
}

fn tanh_poly(xi: f64) -> f64 {
    let t2 = (xi / 2.0).tanh().powi(2);
    5.0 * (1.0 + t2.powi(4)) + 28.0 * (t2 + t2.powi(3)) + 126.0 * t2 * t2
}

/// `cosh⁴(ξ/2)/(30 cosh²ξ) · √s(ξ)`.
pub fn closed_form_measure(xi: f64) -> f64 {
    (xi / 2.0).cosh().powi(4) / (30.0 * xi.cosh().powi(2)) * tanh_poly(xi).sqrt()
}

/// `−cosh⁸(ξ/2)/(600 cosh⁴ξ) · s(ξ)`.
pub fn closed_form_epsilon(xi: f64) -> f64 {
    -(xi / 2.0).cosh().powi(8) / (600.0 * xi.cosh().powi(4)) * tanh_poly(xi)
}

struct BoostedTerms {
    cross: CMatrix,
    quad: CMatrix,
    g03_sum: CMatrix,
    g03_pair: CMatrix,
    common: CMatrix,
    t: f64,
    a: f64,
    pre: f64,
}

fn boosted_terms(xi: f64) -> BoostedTerms {
    let g = build_chiral4().gammas;
    let (g0, g1, g2, g3, g5) = (&g[0], &g[1], &g[2], &g[3], &g[4]);
    let k = |a: &CMatrix, b: &CMatrix| a.kronecker(b);
    let g03 = g0 * g3;
    let (g25, g15, g12) = (g2 * g5, g1 * g5, g1 * g2);
    let cross = k(g1, &g25) + k(&g25, g1) - k(g2, &g15) - k(&g15, g2) - k(g5, &g12) - k(&g12, g5);
    let quad = k(&g15, &g15) + k(&g25, &g25) + k(&g12, &g12);
    let id4 = CMatrix::identity(4, 4);
    let t = (xi / 2.0).tanh();
    let (a, b) = (1.0 + t * t, 1.0 - t * t);
    let common = scaled(&(k(g3, g3) - k(g0, g0)), b * b) + scaled(&(k(g1, g1) + k(g2, g2) + k(g5, g5)), a * a)
        - cross.map(|z| z * I * (2.0 * t * a))
        - scaled(&quad, 4.0 * t * t);
    BoostedTerms {
        g03_sum: k(&id4, &g03) + k(&g03, &id4),
        g03_pair: k(&g03, &g03),
        cross,
        quad,
        common,
        t,
        a,
        pre: (xi / 2.0).cosh().powi(4) / xi.cosh().powi(2),
    }
}

/// The boosted entangled state written out on the chiral algebra (z boost).
pub fn boosted_entangled_closed_form(xi: f64) -> CMatrix {
    let b = boosted_terms(xi);
    let id = CMatrix::identity(16, 16);
    let body = scaled(&id, b.a * b.a)
        + scaled(&b.g03_sum, 2.0 * b.t * b.a)
        + scaled(&b.g03_pair, 4.0 * b.t * b.t)
        + scaled(&b.common, 1.0 / 3.0);
    scaled(&body, b.pre / 16.0)
}

/// The boosted separable partner written out on the chiral algebra (z boost).
pub fn boosted_separable_closed_form(xi: f64) -> CMatrix {
    let b = boosted_terms(xi);
    let id = CMatrix::identity(16, 16);
    let body = scaled(&id, 5.0 * b.a * b.a)
        + scaled(&b.g03_sum, 10.0 * b.t * b.a)
        + scaled(&b.g03_pair, 20.0 * b.t * b.t)
        + b.common;
    scaled(&body, b.pre / 80.0)
}

/// The moving-frame witness written out on the chiral algebra (z boost), for
/// a pair at Hilbert-Schmidt distance `distance`.
pub fn boosted_witness_closed_form(xi: f64, distance: f64) -> CMatrix {
    let b = boosted_terms(xi);
    let g = build_chiral4().gammas;
    let k = |x: &CMatrix| x.kronecker(x);
    let t2 = b.t * b.t;
    let body = scaled(&CMatrix::identity(16, 16), 180.0 * distance * distance / b.pre)
        + scaled(&(k(&g[0]) - k(&g[3])), (1.0 - t2).powi(2))
        - scaled(&(k(&g[1]) + k(&g[2]) + k(&g[4])), b.a * b.a)
        + b.cross.map(|z| z * I * (2.0 * b.t * b.a))
        + scaled(&b.quad, 4.0 * t2);
    scaled(&body, b.pre / (120.0 * distance))
}

/// One rapidity of the boost sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub xi: f64,
    pub measure: f64,
    pub distance: f64,
    pub epsilon: f64,
    pub contact: f64,
    pub closed_form_measure: f64,
    pub closed_form_epsilon: f64,
}

pub fn boost_sweep(grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&xi| {
            if !xi.is_finite() {
                return Err(Error::Domain(format!("rapidity {xi} is not finite")));
            }
            let r = hs_pipeline(&BoostParams::z(xi))?;
            Ok(SweepRow {
                xi,
                measure: r.measure,
                distance: r.distance,
                epsilon: r.epsilon,
                contact: r.contact,
                closed_form_measure: closed_form_measure(xi),
                closed_form_epsilon: closed_form_epsilon(xi),
            })
        })
        .collect()
}

/// True when `(D^{-1}⊗D^{-1}) W (D⊗D) = W` within `1e-10`.
pub fn lorentz_invariance_check(w: &CMatrix, params: &BoostParams) -> Result<bool> {
    if w.shape() != (16, 16) {
        return Err(Error::DimensionMismatch { expected: 16, got: w.nrows() });
    }
    let d = boost_matrix(params);
    let dinv = d.clone().try_inverse().ok_or_else(|| Error::Domain("singular boost".into()))?;
    let conj = dinv.kronecker(&dinv) * w * d.kronecker(&d);
    Ok((conj - w).norm() <= 1e-10 * w.norm().max(1.0))
}

/// Weights `w_{μ,±} ≥ 0` with `ρ = Σ w_{μ,±} (I ± γ^μ⊗γ^μ)/16` (least squares over
/// the ten product mixtures), and the reconstruction residual.
pub fn product_mixture_weights(rho: &CMatrix) -> Result<(Vec<f64>, f64)> {
    if rho.shape() != (16, 16) {
        return Err(Error::DimensionMismatch { expected: 16, got: rho.nrows() });
    }
    let id = CMatrix::identity(16, 16);
    let basis: Vec<CMatrix> = (0..5)
        .flat_map(|k| {
            let gk = gg(k);
            [scaled(&(&id + &gk), 1.0 / 16.0), scaled(&(&id - &gk), 1.0 / 16.0)]
        })
        .collect();
    let n = basis.len();
    let gram = DMatrix::from_fn(n, n, |i, j| trace_product(&basis[i].adjoint(), &basis[j]).re);
    let rhs = DVector::from_fn(n, |i, _| trace_product(&basis[i].adjoint(), rho).re);
    // the ten mixtures span only six directions; the pseudo-inverse picks the
    // minimum-norm weights
    let weights = gram.pseudo_inverse(1e-12).map_err(|e| Error::Domain(e.to_string()))? * rhs;
    let rebuilt = basis.iter().zip(weights.iter()).fold(CMatrix::zeros(16, 16), |acc, (b, w)| acc + scaled(b, *w));
    Ok((weights.iter().copied().collect(), (rebuilt - rho).norm()))
}

/// Smallest `⟨α⊗β|W|α⊗β⟩` found for a two-spinor operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductMinimum {
    pub value: f64,
    pub samples: usize,
    #[serde(skip)]
    pub locals: Vec<CVector>,
}

fn product_value(w: &CMatrix, a: &CVector, b: &CVector) -> f64 {
    let v = a.kronecker(b);
    v.dotc(&(w * &v)).re
}

/// `⟨β|W|β⟩` as an operator on the first factor, or on the second when `first` is false.
fn reduced(w: &CMatrix, v: &CVector, first: bool) -> CMatrix {
    CMatrix::from_fn(4, 4, |r, col| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                let (row, cc) = if first { (r * 4 + i, col * 4 + j) } else { (i * 4 + r, j * 4 + col) };
                acc += v[i].conj() * w[(row, cc)] * v[j];
            }
        }
        acc
    })
}

/// Seeded random search over product vectors, then alternating exact
/// minimization (each step replaces one factor by the lowest eigenvector of
/// the reduced operator) from the best `refine` samples.
pub fn product_minimum(w: &CMatrix, samples: usize, refine: usize, seed: u64) -> Result<ProductMinimum> {
    if w.shape() != (16, 16) {
        return Err(Error::DimensionMismatch { expected: 16, got: w.nrows() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<(f64, CVector, CVector)> = Vec::with_capacity(refine + 1);
    for _ in 0..samples {
        let l = random_product_locals(&mut rng, 2, 4);
        let value = product_value(w, &l[0], &l[1]);
        if pool.len() < refine.max(1) || value < pool.last().map_or(f64::INFINITY, |p| p.0) {
            pool.push((value, l[0].clone(), l[1].clone()));
            pool.sort_by(|x, y| x.0.total_cmp(&y.0));
            pool.truncate(refine.max(1));
        }
    }
    let mut best = (f64::INFINITY, CVector::zeros(4), CVector::zeros(4));
    for (mut value, mut a, mut b) in pool {
        for _ in 0..200 {
            let (_, va) = hermitian_eigen(&reduced(w, &b, true))?;
            a = va.column(0).into_owned();
            let (_, vb) = hermitian_eigen(&reduced(w, &a, false))?;
            b = vb.column(0).into_owned();
            let next = product_value(w, &a, &b);
            let done = (value - next).abs() < 1e-15;
            value = next;
            if done {
                break;
            }
        }
        if value < best.0 {
            best = (value, a, b);
        }
    }
    Ok(ProductMinimum { value: best.0, samples, locals: vec![best.1, best.2] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() <= tol)
    }

    #[test]
    fn identity_boost_and_z_boost() {
        let id = CMatrix::identity(4, 4);
        assert!(close(&boost_matrix(&BoostParams::z(0.0)), &id, 1e-15));
        let [_, _, sz] = crate::gamma::pauli();
        let zz = sz.kronecker(&sz);
        let t = 0.5f64.tanh();
        let expect = scaled(&(CMatrix::identity(4, 4) - scaled(&zz, t)), 0.5f64.cosh());
        let d = boost_matrix(&BoostParams::z(1.0));
        assert!(close(&d, &expect, 1e-12));
        assert!(close(&d, &d.adjoint(), 1e-15));
        assert!(BoostParams::new(1.0, [0.0, 0.0, 2.0]).is_err());
    }

    #[test]
    fn boost_matches_exponential_generator() {
        let p = [0.3, 0.4, (0.75f64).sqrt()];
        let params = BoostParams::new(0.7, p).unwrap();
        let [sx, sy, sz] = crate::gamma::pauli();
        let sp = scaled(&sx, p[0]) + scaled(&sy, p[1]) + scaled(&sz, p[2]);
        let mut gen = CMatrix::zeros(4, 4);
        gen.view_mut((0, 0), (2, 2)).copy_from(&sp);
        gen.view_mut((2, 2), (2, 2)).copy_from(&(-sp));
        // σ·p̂ squares to I, so exp(-ξ/2 G) = cosh(ξ/2) I − sinh(ξ/2) G
        let expect = scaled(&CMatrix::identity(4, 4), 0.35f64.cosh()) - scaled(&gen, 0.35f64.sinh());
        assert!(close(&boost_matrix(&params), &expect, 1e-12));
    }

    #[test]
    fn gammas_transform_as_vectors() {
        let (lam, residual) = lorentz_matrix(&BoostParams::z(0.9));
        assert!(residual < 1e-12);
        let g = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
        assert!((lam.transpose() * g * lam - g).norm() < 1e-12);
        assert_abs_diff_eq!(lam[(0, 0)], 0.9f64.cosh(), epsilon = 1e-12);
        assert_abs_diff_eq!(lam[(0, 3)].abs(), 0.9f64.sinh(), epsilon = 1e-12);
    }

    #[test]
    fn rest_frame_pipeline() {
        let (rho_s, eps) = closest_separable(&rest_entangled_state(), &rest_witness()).unwrap();
        assert!(close(&rho_s, &rest_separable_state(), 1e-14));
        assert_abs_diff_eq!(eps, -1.0 / 120.0, epsilon = 1e-14);
        let w = witness_from_pair(&rho_s, &rest_entangled_state()).unwrap();
        assert!(close(&w, &scaled(&rest_witness(), 1.0 / (4.0 * 5f64.sqrt())), 1e-14));
        assert_abs_diff_eq!(hs_measure(&rest_entangled_state(), &w), 5f64.sqrt() / 30.0, epsilon = 1e-14);
        assert!(witness_from_pair(&rho_s, &rho_s).is_err());
        assert!(closest_separable(&rest_separable_state(), &rest_witness()).is_err());
    }

    #[test]
    fn separable_partner_is_a_product_mixture() {
        let (w, residual) = product_mixture_weights(&rest_separable_state()).unwrap();
        assert!(residual < 1e-12);
        assert!(w.iter().all(|&x| x >= -1e-12), "{w:?}");
        let (w, _) = product_mixture_weights(&rest_entangled_state()).unwrap();
        assert!(w.iter().any(|&x| x < 0.0));
    }

    #[test]
    fn boosted_states_match_closed_forms() {
        for xi in [0.0, 0.5, 1.0, 2.0] {
            let r = hs_pipeline(&BoostParams::z(xi)).unwrap();
            assert!(close(&r.entangled, &boosted_entangled_closed_form(xi), 1e-12));
            assert!(close(&r.closest_separable, &boosted_separable_closed_form(xi), 1e-12));
            assert!(close(&r.optimal_witness, &boosted_witness_closed_form(xi, r.distance), 1e-12));
            assert_abs_diff_eq!(r.measure, closed_form_measure(xi), epsilon = 1e-12);
            assert_abs_diff_eq!(r.epsilon, closed_form_epsilon(xi), epsilon = 1e-12);
            assert!(r.contact.abs() < 1e-12);
        }
    }

    #[test]
    fn invariance_of_the_covariant_witness() {
        let w = rest_witness();
        assert!(lorentz_invariance_check(&w, &BoostParams::z(1.3)).unwrap());
        assert!(lorentz_invariance_check(&w, &BoostParams::z(0.0)).unwrap());
        let g1 = gg(1);
        let flipped = &w + scaled(&g1, 2.0);
        // a z boost leaves γ^1 alone, so the flip only shows along x
        assert!(lorentz_invariance_check(&flipped, &BoostParams::z(1.0)).unwrap());
        let x = BoostParams::new(1.0, [1.0, 0.0, 0.0]).unwrap();
        assert!(!lorentz_invariance_check(&flipped, &x).unwrap());
        assert!(lorentz_invariance_check(&w, &x).unwrap());
    }

    #[test]
    fn product_minimum_of_the_rest_witness_is_zero() {
        let w = scaled(&rest_witness(), 1.0 / (4.0 * 5f64.sqrt()));
        let r = product_minimum(&w, 2000, 20, 1).unwrap();
        assert!(r.value > -1e-9 && r.value < 1e-6, "{}", r.value);
    }

    #[test]
    fn boost_state_rejects_non_states() {
        assert!(boost_state(&CMatrix::identity(16, 16), &BoostParams::z(1.0)).is_err());
        let rho = rest_entangled_state();
        assert!(close(&boost_state(&rho, &BoostParams::z(0.0)).unwrap(), &rho, 1e-15));
    }
}
