//! Tensor-power operators, spectra, partial transposes and expectation values.

use std::collections::HashMap;

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;

use crate::{CMatrix, CVector, Error, Result};

/// Largest Hilbert-space dimension accepted by default.
pub const DEFAULT_DIM_CAP: usize = 4096;
/// Relative Frobenius tolerance for hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Absolute tolerance for eigenvalue comparisons.
pub const EIG_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-9;
// Entries below this are treated as structural zeros when splitting into blocks.
const BLOCK_ZERO: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    pub m: usize,
    pub local_dim: usize,
    pub matrix: CMatrix,
}

/// `‖M − M†‖_F / ‖M‖_F`, or the absolute defect for a zero matrix.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let diff = (m - m.adjoint()).norm();
    let scale = m.norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

fn checked_dim(local_dim: usize, m: usize, cap: usize) -> Result<usize> {
    if m < 1 {
        return Err(Error::Domain("number of factors must be at least 1".into()));
    }
    let mut dim: usize = 1;
    for _ in 0..m {
        dim = dim.checked_mul(local_dim).filter(|&x| x <= cap).ok_or(Error::Capacity {
            dim: local_dim.saturating_pow(m as u32),
            cap,
        })?;
    }
    Ok(dim)
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix, m: usize, local_dim: usize) -> Result<Self> {
        let dim = checked_dim(local_dim, m, usize::MAX)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.nrows() });
        }
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(HermitianOperator { m, local_dim, matrix })
    }

    pub fn identity(m: usize, local_dim: usize) -> Result<Self> {
        let dim = checked_dim(local_dim, m, DEFAULT_DIM_CAP)?;
        Ok(HermitianOperator { m, local_dim, matrix: CMatrix::identity(dim, dim) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    let mut it = factors.iter();
    let first = it.next().expect("at least one factor").clone();
    it.fold(first, |acc, f| acc.kronecker(f))
}

pub fn tensor_power(a: &CMatrix, m: usize) -> Result<HermitianOperator> {
    tensor_power_capped(a, m, DEFAULT_DIM_CAP)
}

/// `A ⊗ ⋯ ⊗ A` (`m` factors). `A` itself need not be Hermitian as long as the
/// power is, e.g. `γ^1 ⊗ γ^1` in the chiral representation.
pub fn tensor_power_capped(a: &CMatrix, m: usize, cap: usize) -> Result<HermitianOperator> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: a.ncols() });
    }
    checked_dim(a.nrows(), m, cap)?;
    let factors = vec![a.clone(); m];
    HermitianOperator::new(kron_all(&factors), m, a.nrows())
}

/// `a_0 I + Σ a_i Q_i`.
pub fn assemble(coeffs: &[f64], ops: &[HermitianOperator]) -> Result<HermitianOperator> {
    if coeffs.len() != ops.len() + 1 {
        return Err(Error::DimensionMismatch { expected: ops.len() + 1, got: coeffs.len() });
    }
    let first = ops.first().ok_or_else(|| Error::Domain("no operators to assemble".into()))?;
    let (m, local_dim, dim) = (first.m, first.local_dim, first.dim());
    let mut out = CMatrix::from_diagonal_element(dim, dim, Complex64::new(coeffs[0], 0.0));
    for (c, op) in coeffs[1..].iter().zip(ops) {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: op.dim() });
        }
        out += op.matrix.map(|z| z * *c);
    }
    Ok(HermitianOperator { m, local_dim, matrix: out })
}

/// Transposes tensor factor `subsystem` (1-based) of a `local_dim^m` matrix.
pub fn partial_transpose_matrix(
    mat: &CMatrix,
    local_dim: usize,
    m: usize,
    subsystem: usize,
) -> Result<CMatrix> {
    if subsystem < 1 || subsystem > m {
        return Err(Error::Domain(format!("subsystem {subsystem} outside 1..={m}")));
    }
    let dim = mat.nrows();
    let stride = local_dim.pow((m - subsystem) as u32);
    let digit = |x: usize| (x / stride) % local_dim;
    Ok(CMatrix::from_fn(dim, dim, |r, c| {
        let (dr, dc) = (digit(r), digit(c));
        let r0 = r - dr * stride + dc * stride;
        let c0 = c - dc * stride + dr * stride;
        mat[(r0, c0)]
    }))
}

pub fn partial_transpose(op: &HermitianOperator, subsystem: usize) -> Result<HermitianOperator> {
    let matrix = partial_transpose_matrix(&op.matrix, op.local_dim, op.m, subsystem)?;
    Ok(HermitianOperator { m: op.m, local_dim: op.local_dim, matrix })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
}

impl Spectrum {
    fn from_values(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let min_eigenvalue = eigenvalues.first().copied().unwrap_or(f64::NAN);
        Spectrum { eigenvalues, min_eigenvalue }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn components(mut self) -> Vec<Vec<usize>> {
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..self.0.len() {
            let r = self.find(i);
            groups.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }
}

/// Row-wise sparse view used to split an operator into its decoupled blocks.
type SparseRows = Vec<HashMap<usize, Complex64>>;

fn block_eigenvalues(rows: &SparseRows) -> Vec<f64> {
    let n = rows.len();
    let mut uf = UnionFind::new(n);
    for (r, row) in rows.iter().enumerate() {
        for (&c, v) in row {
            if v.norm() > BLOCK_ZERO {
                uf.union(r, c);
            }
        }
    }
    let mut values = Vec::with_capacity(n);
    for comp in uf.components() {
        let pos: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let k = comp.len();
        let mut block = CMatrix::zeros(k, k);
        for (i, &g) in comp.iter().enumerate() {
            for (c, v) in &rows[g] {
                if let Some(&j) = pos.get(c) {
                    block[(i, j)] = *v;
                }
            }
        }
        if k == 1 {
            values.push(block[(0, 0)].re);
        } else {
            values.extend(block.symmetric_eigenvalues().iter().copied());
        }
    }
    values
}

fn dense_rows(mat: &CMatrix) -> SparseRows {
    (0..mat.nrows())
        .map(|r| {
            (0..mat.ncols())
                .filter(|&c| mat[(r, c)].norm() > BLOCK_ZERO)
                .map(|c| (c, mat[(r, c)]))
                .collect()
        })
        .collect()
}

/// Eigenvalues of a Hermitian matrix, ascending. Decoupled blocks are
/// diagonalized separately.
pub fn hermitian_eigenvalues(mat: &CMatrix) -> Result<Vec<f64>> {
    let defect = hermiticity_defect(mat);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let mut v = block_eigenvalues(&dense_rows(mat));
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Full eigendecomposition: ascending eigenvalues and matching eigenvector columns.
pub fn hermitian_eigen(mat: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let defect = hermiticity_defect(mat);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let eig = SymmetricEigen::new(mat.clone());
    let mut order: Vec<usize> = (0..mat.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(mat.nrows(), mat.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

pub fn spectrum(op: &HermitianOperator) -> Result<Spectrum> {
    Ok(Spectrum::from_values(hermitian_eigenvalues(&op.matrix)?))
}

/// Sorted pairwise comparison of two multisets.
pub fn multiset_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

fn sign(bit: u64) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `i^{-n}` for a nonnegative even `n`, as a real number.
pub fn real_phase_inv_i(n: usize) -> Result<f64> {
    match n % 4 {
        0 => Ok(1.0),
        2 => Ok(-1.0),
        _ => Err(Error::Domain(format!("i^-{n} is not real"))),
    }
}

fn check_even_md(m: usize, d: usize) -> Result<()> {
    if d < 2 || d % 2 == 1 {
        return Err(Error::Domain(format!("closed form needs even d >= 2, got {d}")));
    }
    if m < 2 || m % 2 == 1 {
        return Err(Error::Domain(format!(
            "closed form needs even m (odd tensor powers anticommute), got {m}"
        )));
    }
    Ok(())
}

fn expand_levels(levels: Vec<(f64, usize)>, m: usize, d: usize) -> Result<Vec<f64>> {
    checked_dim(1 << (d / 2), m, DEFAULT_DIM_CAP)?;
    let mut out: Vec<f64> = levels
        .into_iter()
        .flat_map(|(v, k)| std::iter::repeat(v).take(k))
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Eigenvalue levels of `a_0 I + Σ_k a_k γ_k^{⊗m} + a_{d+1} γ_S^{⊗m}` with multiplicities.
pub fn kind1_levels(a: &[f64], m: usize, d: usize) -> Result<Vec<(f64, usize)>> {
    check_even_md(m, d)?;
    if a.len() != d + 2 {
        return Err(Error::DimensionMismatch { expected: d + 2, got: a.len() });
    }
    let phase = real_phase_inv_i(m * d / 2)?;
    let mult = 1usize << (m * d / 2 - d);
    Ok((0u64..1 << d)
        .map(|bits| {
            let mut v = a[0];
            for k in 0..d {
                v += sign(bits >> k) * a[k + 1];
            }
            v += phase * sign(bits.count_ones() as u64) * a[d + 1];
            (v, mult)
        })
        .collect())
}

pub fn closed_form_spectrum_kind1(a: &[f64], m: usize, d: usize) -> Result<Vec<f64>> {
    expand_levels(kind1_levels(a, m, d)?, m, d)
}

/// Eigenvalue levels of `a'_0 I + Σ_k a'_k A'_k^{⊗m}` over the commuting sets.
pub fn kind2_levels(a: &[f64], m: usize, d: usize) -> Result<Vec<(f64, usize)>> {
    check_even_md(m, d)?;
    let h = d / 2;
    if a.len() != 3 * h + 1 {
        return Err(Error::DimensionMismatch { expected: 3 * h + 1, got: a.len() });
    }
    let mpar = sign((m / 2) as u64);
    let mult = 1usize << (m * d / 2 - h - 1);
    Ok((0u64..1 << (h + 1))
        .map(|bits| {
            let s = |k: usize| sign(bits >> (k - 1));
            let mut v = a[0];
            for k in 1..=h + 1 {
                v += s(k) * a[k];
            }
            for k in 2..=h {
                v += s(1) * s(h + 1) * s(k) * a[h + k];
            }
            for k in 1..=h {
                v += mpar * s(h + 1) * s(k) * a[d + k];
            }
            (v, mult)
        })
        .collect())
}

pub fn closed_form_spectrum_kind2(a: &[f64], m: usize, d: usize) -> Result<Vec<f64>> {
    expand_levels(kind2_levels(a, m, d)?, m, d)
}

#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Density(&'a CMatrix),
    Pure(&'a CVector),
}

/// `Tr(W ρ)` or `⟨ψ|W|ψ⟩`.
pub fn expectation(op: &HermitianOperator, state: StateRef<'_>) -> Result<f64> {
    let dim = op.dim();
    match state {
        StateRef::Density(rho) => {
            if rho.nrows() != dim || rho.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: rho.nrows() });
            }
            let tr = rho.trace();
            if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
                return Err(Error::InvalidState(format!("trace {tr} is not 1")));
            }
            Ok(trace_product(&op.matrix, rho).re)
        }
        StateRef::Pure(psi) => {
            if psi.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: psi.len() });
            }
            let n = psi.norm();
            if (n - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidState(format!("vector norm {n} is not 1")));
            }
            Ok(psi.dotc(&(&op.matrix * psi)).re)
        }
    }
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `⟨A, B⟩ = Tr(A† B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: b.nrows() });
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

pub fn hs_norm(a: &CMatrix) -> f64 {
    a.norm()
}

/// `coeff · F_1 ⊗ ⋯ ⊗ F_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub coeff: f64,
    pub factors: Vec<CMatrix>,
}

/// `identity · I + Σ terms`, kept in factored form so large operators never
/// need a dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSum {
    pub m: usize,
    pub local_dim: usize,
    pub identity: f64,
    pub terms: Vec<ProductTerm>,
}

impl ProductSum {
    /// `a_0 I + Σ_k a_k L_k^{⊗m}`.
    pub fn tensor_powers(a0: f64, coeffs: &[f64], locals: &[CMatrix], m: usize) -> Result<Self> {
        if coeffs.len() != locals.len() {
            return Err(Error::DimensionMismatch { expected: locals.len(), got: coeffs.len() });
        }
        let local_dim = locals.first().map_or(1, |l| l.nrows());
        let terms = coeffs
            .iter()
            .zip(locals)
            .map(|(&c, l)| ProductTerm { coeff: c, factors: vec![l.clone(); m] })
            .collect();
        ProductSum::new(m, local_dim, a0, terms)
    }

    pub fn new(m: usize, local_dim: usize, identity: f64, terms: Vec<ProductTerm>) -> Result<Self> {
        for t in &terms {
            if t.factors.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: t.factors.len() });
            }
            if let Some(f) = t.factors.iter().find(|f| f.shape() != (local_dim, local_dim)) {
                return Err(Error::DimensionMismatch { expected: local_dim, got: f.nrows() });
            }
        }
        Ok(ProductSum { m, local_dim, identity, terms })
    }

    pub fn dim(&self) -> Result<usize> {
        checked_dim(self.local_dim, self.m, DEFAULT_DIM_CAP)
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let dim = self.dim()?;
        let mut out = CMatrix::from_diagonal_element(dim, dim, Complex64::new(self.identity, 0.0));
        for t in &self.terms {
            if t.coeff != 0.0 {
                out += kron_all(&t.factors).map(|z| z * t.coeff);
            }
        }
        Ok(out)
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_matrix()?, self.m, self.local_dim)
    }

    /// Transposes factor `subsystem` (1-based) of every term.
    pub fn partial_transpose(&self, subsystem: usize) -> Result<Self> {
        if subsystem < 1 || subsystem > self.m {
            return Err(Error::Domain(format!("subsystem {subsystem} outside 1..={}", self.m)));
        }
        let mut out = self.clone();
        for t in &mut out.terms {
            t.factors[subsystem - 1] = t.factors[subsystem - 1].transpose();
        }
        Ok(out)
    }

    fn sparse_rows(&self) -> Result<SparseRows> {
        let dim = self.dim()?;
        let mut rows: SparseRows = vec![HashMap::new(); dim];
        for (r, row) in rows.iter_mut().enumerate() {
            row.insert(r, Complex64::new(self.identity, 0.0));
        }
        for t in &self.terms {
            if t.coeff == 0.0 {
                continue;
            }
            let nz: Vec<Vec<(usize, usize, Complex64)>> = t
                .factors
                .iter()
                .map(|f| {
                    let mut v = Vec::new();
                    for r in 0..f.nrows() {
                        for c in 0..f.ncols() {
                            if f[(r, c)].norm() > 0.0 {
                                v.push((r, c, f[(r, c)]));
                            }
                        }
                    }
                    v
                })
                .collect();
            let mut partial = vec![(0usize, 0usize, Complex64::new(t.coeff, 0.0))];
            for f in &nz {
                let mut next = Vec::with_capacity(partial.len() * f.len());
                for &(r0, c0, v0) in &partial {
                    for &(r, c, v) in f {
                        next.push((r0 * self.local_dim + r, c0 * self.local_dim + c, v0 * v));
                    }
                }
                partial = next;
            }
            for (r, c, v) in partial {
                *rows[r].entry(c).or_insert(Complex64::new(0.0, 0.0)) += v;
            }
        }
        Ok(rows)
    }

    /// Spectrum through block decomposition of the sparse pattern; never forms
    /// the dense matrix.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let rows = self.sparse_rows()?;
        let mut scale: f64 = 0.0;
        let mut defect: f64 = 0.0;
        for (r, row) in rows.iter().enumerate() {
            for (&c, v) in row {
                scale += v.norm_sqr();
                let mirror = rows[c].get(&r).copied().unwrap_or_default();
                defect += (v - mirror.conj()).norm_sqr();
            }
        }
        let rel = if scale > 0.0 { (defect / scale).sqrt() } else { defect.sqrt() };
        if rel > HERMITIAN_TOL {
            return Err(Error::NotHermitian(rel));
        }
        Ok(Spectrum::from_values(block_eigenvalues(&rows)))
    }

    /// `⟨ψ_1 ⊗ ⋯ ⊗ ψ_m| W |ψ_1 ⊗ ⋯ ⊗ ψ_m⟩` for unit local vectors.
    pub fn product_expectation(&self, locals: &[CVector]) -> f64 {
        let mut total = self.identity;
        for t in &self.terms {
            let mut p = Complex64::new(t.coeff, 0.0);
            for (f, v) in t.factors.iter().zip(locals) {
                p *= v.dotc(&(f * v));
            }
            total += p.re;
        }
        total
    }

    /// Minimum eigenvalue over every single-subsystem partial transpose.
    pub fn min_partial_transpose_eigenvalues(&self) -> Result<Vec<f64>> {
        (1..=self.m)
            .map(|k| Ok(self.partial_transpose(k)?.spectrum()?.min_eigenvalue))
            .collect()
    }
}
