//! Dirac gamma matrices, their product algebra and the three commuting sets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{CMatrix, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Euclidean,
    Chiral4,
}

/// Generators for dimension `d`.
///
/// Euclidean, even `d`: `γ_1..γ_d` followed by `γ_S`. Euclidean, odd `d`: the
/// `d-1` basis followed by its `γ_S`. Chiral: `γ^0, γ^1, γ^2, γ^3, γ^5`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaBasis {
    pub d: usize,
    pub rep: Representation,
    pub gammas: Vec<CMatrix>,
}

impl GammaBasis {
    pub fn local_dim(&self) -> usize {
        self.gammas[0].nrows()
    }

    /// Dimension used by the rest of the crate: odd `d` is folded to `d - 1`.
    pub fn d_effective(&self) -> usize {
        self.d - self.d % 2
    }

    /// The chirality element (last generator).
    pub fn gamma_s(&self) -> &CMatrix {
        self.gammas.last().expect("basis is never empty")
    }
}

pub fn pauli() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Builds the euclidean generators by the inductive doubling
/// `γ'_k = σ_1 ⊗ γ_k` (old generators and old `γ_S`), then `σ_2 ⊗ I`, `σ_3 ⊗ I`.
pub fn build_euclidean_gammas(d: usize) -> Result<GammaBasis> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {d}")));
    }
    let [s1, s2, s3] = pauli();
    let mut gammas = vec![s1.clone(), s2.clone(), s3.clone()];
    let mut current = 2;
    while current + 2 <= d {
        let id = CMatrix::identity(gammas[0].nrows(), gammas[0].ncols());
        let mut next: Vec<CMatrix> = gammas.iter().map(|g| s1.kronecker(g)).collect();
        next.push(s2.kronecker(&id));
        next.push(s3.kronecker(&id));
        gammas = next;
        current += 2;
    }
    Ok(GammaBasis { d, rep: Representation::Euclidean, gammas })
}

/// The chiral representation `γ^0 = σ_x⊗I`, `γ^k = iσ_y⊗σ_k`, `γ^5 = iγ^0γ^1γ^2γ^3`.
pub fn build_chiral4() -> GammaBasis {
    let [sx, sy, sz] = pauli();
    let id = CMatrix::identity(2, 2);
    let g0 = sx.kronecker(&id);
    let isy = sy.map(|z| z * I);
    let g1 = isy.kronecker(&sx);
    let g2 = isy.kronecker(&sy);
    let g3 = isy.kronecker(&sz);
    let g5 = (&g0 * &g1 * &g2 * &g3).map(|z| z * I);
    GammaBasis { d: 4, rep: Representation::Chiral4, gammas: vec![g0, g1, g2, g3, g5] }
}

/// A power of `i`, stored as an exponent modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_power(q: i64) -> Self {
        match q.rem_euclid(4) {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn power(self) -> i64 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn value(self) -> Complex64 {
        match self {
            Phase::One => ONE,
            Phase::I => I,
            Phase::MinusOne => -ONE,
            Phase::MinusI => -I,
        }
    }
}

/// `phase · γ_{i1}⋯γ_{ik}` with ascending 1-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub index_set: Vec<usize>,
    pub phase: Phase,
    pub matrix: CMatrix,
}

fn product(basis: &GammaBasis, indices: &[usize]) -> CMatrix {
    let n = basis.local_dim();
    indices
        .iter()
        .fold(CMatrix::identity(n, n), |acc, &i| acc * &basis.gammas[i - 1])
}

fn element(basis: &GammaBasis, indices: Vec<usize>, phase: Phase) -> AlgebraElement {
    let matrix = product(basis, &indices).map(|z| z * phase.value());
    AlgebraElement { index_set: indices, phase, matrix }
}

/// Exact check: every entry of `m` equals the conjugate of its mirror.
pub fn is_hermitian_exact(m: &CMatrix) -> bool {
    m.nrows() == m.ncols() && *m == m.adjoint()
}

/// All `2^d` products of the generators, ordered by size then lexicographically.
///
/// Each product is multiplied by the smallest power of `i` that makes it
/// Hermitian. For odd `d` the products run over the `d - 1` generators.
pub fn algebra_elements(basis: &GammaBasis) -> Result<Vec<AlgebraElement>> {
    if basis.rep != Representation::Euclidean {
        return Err(Error::UnsupportedRepresentation(
            "algebra elements are only built for the euclidean representation".into(),
        ));
    }
    let d = basis.d_effective();
    let mut subsets: Vec<Vec<usize>> = (0u64..1 << d)
        .map(|mask| (1..=d).filter(|&i| mask >> (i - 1) & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(subsets
        .into_iter()
        .map(|s| {
            let raw = product(basis, &s);
            let phase = if is_hermitian_exact(&raw) { Phase::One } else { Phase::I };
            element(basis, s, phase)
        })
        .collect())
}

/// The commuting sets `C1`, `C2`, `C3`, each of size `d/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingSets {
    pub d: usize,
    pub c1: Vec<AlgebraElement>,
    pub c2: Vec<AlgebraElement>,
    pub c3: Vec<AlgebraElement>,
}

impl CommutingSets {
    /// `A'_1 .. A'_{3d/2}`: `C1` then `C2` then `C3`.
    pub fn primed(&self) -> Vec<&AlgebraElement> {
        self.c1.iter().chain(&self.c2).chain(&self.c3).collect()
    }

    pub fn primed_matrices(&self) -> Vec<CMatrix> {
        self.primed().into_iter().map(|e| e.matrix.clone()).collect()
    }
}

/// `C1_k = i^{-k} γ_1⋯γ_{2k}`, `C2 = {γ_1} ∪ {i^{-k-1} γ_1γ_3⋯γ_{2k}}`,
/// `C3 = {γ_2} ∪ {i^{-k+1} γ_2γ_3⋯γ_{2k}}` for `k = 2..d/2`.
pub fn commuting_sets(d: usize) -> Result<CommutingSets> {
    if d < 2 || d % 2 == 1 {
        return Err(Error::Domain(format!("commuting sets need an even d >= 2, got {d}")));
    }
    let basis = build_euclidean_gammas(d)?;
    let h = d / 2;
    let c1 = (1..=h)
        .map(|k| element(&basis, (1..=2 * k).collect(), Phase::from_power(-(k as i64))))
        .collect();
    let anchored = |anchor: usize, shift: i64| {
        let mut set = vec![element(&basis, vec![anchor], Phase::One)];
        for k in 2..=h {
            let mut idx = vec![anchor];
            idx.extend(3..=2 * k);
            set.push(element(&basis, idx, Phase::from_power(-(k as i64) + shift)));
        }
        set
    };
    Ok(CommutingSets { d, c1, c2: anchored(1, -1), c3: anchored(2, 1) })
}

/// A relation that failed in [`verify_clifford`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub relation: String,
    pub indices: Vec<usize>,
}

impl Violation {
    fn new(relation: &str, indices: &[usize]) -> Self {
        Violation { relation: relation.to_string(), indices: indices.to_vec() }
    }
}

fn scaled_identity(n: usize, c: Complex64) -> CMatrix {
    CMatrix::from_diagonal_element(n, n, c)
}

/// Checks every defining relation with exact equality. Indices in the report
/// are 1-based positions in `basis.gammas`.
pub fn verify_clifford(basis: &GammaBasis) -> Vec<Violation> {
    match basis.rep {
        Representation::Euclidean => verify_euclidean(basis),
        Representation::Chiral4 => verify_chiral(basis),
    }
}

fn verify_euclidean(basis: &GammaBasis) -> Vec<Violation> {
    let mut out = Vec::new();
    let g = &basis.gammas;
    let n = basis.local_dim();
    let expected_len = basis.d_effective() + 1;
    if g.len() != expected_len {
        out.push(Violation::new("generator_count", &[g.len()]));
        return out;
    }
    if g.iter().any(|m| m.nrows() != n || m.ncols() != n) {
        out.push(Violation::new("shape", &[]));
        return out;
    }
    for (i, gi) in g.iter().enumerate() {
        if !is_hermitian_exact(gi) {
            out.push(Violation::new("hermiticity", &[i + 1]));
        }
        let parity = if i % 2 == 0 { ONE } else { -ONE };
        if gi.transpose() != gi.map(|z| z * parity) {
            out.push(Violation::new("symmetry_parity", &[i + 1]));
        }
        for (j, gj) in g.iter().enumerate().skip(i) {
            let anti = gi * gj + gj * gi;
            let target = if i == j { scaled_identity(n, ONE * 2.0) } else { CMatrix::zeros(n, n) };
            if anti != target {
                let name = if i == j { "square_identity" } else { "anticommutation" };
                out.push(Violation::new(name, &[i + 1, j + 1]));
            }
        }
    }
    let d = basis.d_effective();
    let idx: Vec<usize> = (1..=d).collect();
    let gs = product(basis, &idx).map(|z| z * Phase::from_power(-((d / 2) as i64)).value());
    if gs != g[d] {
        out.push(Violation::new("gamma_s_product", &[d + 1]));
    }
    out
}

fn verify_chiral(basis: &GammaBasis) -> Vec<Violation> {
    let mut out = Vec::new();
    let g = &basis.gammas;
    if g.len() != 5 || g.iter().any(|m| m.nrows() != 4 || m.ncols() != 4) {
        out.push(Violation::new("shape", &[]));
        return out;
    }
    let metric = [1.0, -1.0, -1.0, -1.0];
    for mu in 0..4 {
        let herm = g[mu].adjoint() == g[mu].map(|z| z * metric[mu]);
        if !herm {
            out.push(Violation::new("signature_hermiticity", &[mu + 1]));
        }
        for nu in mu..4 {
            let anti = &g[mu] * &g[nu] + &g[nu] * &g[mu];
            let target = if mu == nu {
                scaled_identity(4, ONE * (2.0 * metric[mu]))
            } else {
                CMatrix::zeros(4, 4)
            };
            if anti != target {
                out.push(Violation::new("anticommutation", &[mu + 1, nu + 1]));
            }
        }
        let anti5 = &g[mu] * &g[4] + &g[4] * &g[mu];
        if anti5 != CMatrix::zeros(4, 4) {
            out.push(Violation::new("anticommutation", &[mu + 1, 5]));
        }
    }
    let g5 = (&g[0] * &g[1] * &g[2] * &g[3]).map(|z| z * I);
    if g5 != g[4] {
        out.push(Violation::new("gamma5_product", &[5]));
    }
    if &g[4] * &g[4] != scaled_identity(4, ONE) || !is_hermitian_exact(&g[4]) {
        out.push(Violation::new("gamma5_involution", &[5]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anticommute(a: &CMatrix, b: &CMatrix) -> bool {
        (a * b + b * a).iter().all(|z| *z == ZERO)
    }

    #[test]
    fn d2_is_pauli() {
        let b = build_euclidean_gammas(2).unwrap();
        assert_eq!(b.gammas, pauli().to_vec());
    }

    #[test]
    fn d4_shape_and_involutions() {
        let b = build_euclidean_gammas(4).unwrap();
        assert_eq!(b.gammas.len(), 5);
        for g in &b.gammas {
            assert_eq!(g.shape(), (4, 4));
            assert_eq!(g * g, CMatrix::identity(4, 4));
        }
    }

    #[test]
    fn odd_d_uses_folded_basis() {
        let b = build_euclidean_gammas(5).unwrap();
        assert_eq!(b.gammas.len(), 5);
        assert_eq!(b.local_dim(), 4);
        assert!(verify_clifford(&b).is_empty());
    }

    #[test]
    fn rejects_small_d() {
        assert!(matches!(build_euclidean_gammas(1), Err(Error::Domain(_))));
    }

    #[test]
    fn chiral_relations() {
        let c = build_chiral4();
        let [_, _, sz] = pauli();
        assert_eq!(c.gammas[4], -sz.kronecker(&CMatrix::identity(2, 2)));
        assert_eq!(&c.gammas[1] * &c.gammas[1], -CMatrix::identity(4, 4));
        assert!(anticommute(&c.gammas[0], &c.gammas[4]));
        assert!(verify_clifford(&c).is_empty());
    }

    #[test]
    fn d6_verifies_and_perturbation_is_caught() {
        let mut b = build_euclidean_gammas(6).unwrap();
        assert!(verify_clifford(&b).is_empty());
        let (r, c) = (0..8)
            .flat_map(|r| (0..8).map(move |c| (r, c)))
            .find(|&(r, c)| b.gammas[2][(r, c)] != ZERO)
            .unwrap();
        b.gammas[2][(r, c)] = -b.gammas[2][(r, c)];
        assert!(!verify_clifford(&b).is_empty());
    }

    #[test]
    fn algebra_d2() {
        let b = build_euclidean_gammas(2).unwrap();
        let els = algebra_elements(&b).unwrap();
        let sets: Vec<Vec<usize>> = els.iter().map(|e| e.index_set.clone()).collect();
        assert_eq!(sets, vec![vec![], vec![1], vec![2], vec![1, 2]]);
        let [s1, s2, s3] = pauli();
        assert_eq!(els[1].matrix, s1);
        assert_eq!(els[2].matrix, s2);
        // iσ1σ2 = -σ3
        assert_eq!(els[3].matrix, -s3);
        assert_eq!(els[3].phase, Phase::I);
    }

    #[test]
    fn algebra_rejects_chiral() {
        assert!(matches!(
            algebra_elements(&build_chiral4()),
            Err(Error::UnsupportedRepresentation(_))
        ));
    }

    #[test]
    fn commuting_sets_d4_literal() {
        let cs = commuting_sets(4).unwrap();
        let b = build_euclidean_gammas(4).unwrap();
        let g = |i: usize| b.gammas[i - 1].clone();
        let mi = |m: CMatrix| m.map(|z| z * -I);
        let pi = |m: CMatrix| m.map(|z| z * I);
        assert_eq!(cs.c1[0].matrix, mi(g(1) * g(2)));
        assert_eq!(cs.c1[1].matrix, -(g(1) * g(2) * g(3) * g(4)));
        assert_eq!(cs.c2[0].matrix, g(1));
        assert_eq!(cs.c2[1].matrix, pi(g(1) * g(3) * g(4)));
        assert_eq!(cs.c3[0].matrix, g(2));
        assert_eq!(cs.c3[1].matrix, mi(g(2) * g(3) * g(4)));
    }

    #[test]
    fn commuting_sets_rejects_odd() {
        assert!(commuting_sets(5).is_err());
    }
}
