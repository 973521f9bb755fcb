//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails unless the failing lines are exactly the ones known to be
//! unattainable (see the README for the analysis).

use std::collections::BTreeSet;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinwit::gamma::{build_chiral4, build_euclidean_gammas, commuting_sets, verify_clifford};
use spinwit::lp::{
    feasible_region, same_halfspace_system, simplex_min, ssnnev_region, Halfspace, LpProblem, LpStatus,
    RegionFamily,
};
use spinwit::operator::{hermitian_eigenvalues, partial_transpose_matrix, trace_product};
use spinwit::relativistic::{boost_sweep, closest_separable, hs_pipeline, product_minimum, BoostParams};
use spinwit::relativistic::{rest_entangled_state, rest_witness};
use spinwit::states::{
    bell_states, epr_state, expansion_matrix, phi_minus_14, random_product_locals, region_scan_d2,
    vertex_states_approx1, vertex_states_approx2, vertex_states_kind1_chiral, wootters_concurrence, Region,
};
use spinwit::witness::{
    check_optimality, classify, decomposability, optimal_approx1, optimal_kind1, optimal_kind1_chiral,
    optimal_kind2, Decomposability, Family, WitnessSpec,
};
use spinwit::{CMatrix, CVector};

const KNOWN_UNATTAINABLE: &[&str] = &[
    "dual of approx2 region is the half cube (d=4)",
    "dual of approx2 region is the half cube (d=6)",
    "kind2 optimal witnesses have positive partial transposes (j>=2)",
    "boosted optimal witness is nonnegative on product states",
    "kind2 optimal witnesses are optimal (j>=2)",
    "approx1 region inequalities hold on product states",
];

struct Sheet {
    failed: BTreeSet<String>,
}

impl Sheet {
    fn line(&mut self, name: &str, pass: bool, detail: String) {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.insert(name.to_string());
        }
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn power(a: &CMatrix, m: usize) -> CMatrix {
    (1..m).fold(a.clone(), |acc, _| acc.kronecker(a))
}

fn dense_sum(a0: f64, coeffs: &[f64], blocks: &[CMatrix], m: usize) -> CMatrix {
    let n = blocks[0].nrows().pow(m as u32);
    let mut w = CMatrix::identity(n, n).map(|z| z * a0);
    for (a, b) in coeffs.iter().zip(blocks) {
        w += power(b, m).map(|z| z * *a);
    }
    w
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn dense_min_eig(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).unwrap()[0]
}

fn ev(w: &CMatrix, rho: &CMatrix) -> f64 {
    trace_product(w, rho).re
}

fn pure_ev(w: &CMatrix, v: &CVector) -> f64 {
    v.dotc(&(w * v)).re
}

// Eigenvalue levels from the sign patterns of the commuting blocks.
fn kind1_levels_oracle(a: &[f64], m: usize, d: usize) -> Vec<f64> {
    // i^{-md/2} is real for md/2 even, the only case used here
    let q = (m * d / 2) % 4;
    let phase = match q {
        0 => 1.0,
        2 => -1.0,
        _ => unreachable!(),
    };
    let dim = 1usize << (m * d / 2);
    let per = dim >> d;
    let mut out = Vec::with_capacity(dim);
    for mask in 0u32..1 << d {
        let s: Vec<f64> = (0..d).map(|k| if mask >> k & 1 == 0 { 1.0 } else { -1.0 }).collect();
        let prod: f64 = s.iter().product();
        let v = a[0] + s.iter().zip(&a[1..=d]).map(|(x, y)| x * y).sum::<f64>() + phase * prod * a[d + 1];
        out.extend(std::iter::repeat(v).take(per));
    }
    out
}

fn clifford(sheet: &mut Sheet) {
    let t = Instant::now();
    let mut violations = 0;
    for d in 2..=12 {
        violations += verify_clifford(&build_euclidean_gammas(d).unwrap()).len();
    }
    let secs = t.elapsed().as_secs_f64();
    // independent numerical anticommutator check
    let mut worst = 0.0f64;
    for d in [2usize, 3, 6, 9, 12] {
        let g = build_euclidean_gammas(d).unwrap().gammas;
        let n = g[0].nrows();
        for i in 0..g.len() {
            for j in 0..g.len() {
                let ac = &g[i] * &g[j] + &g[j] * &g[i];
                let target = if i == j { CMatrix::identity(n, n).map(|z| z * 2.0) } else { CMatrix::zeros(n, n) };
                worst = worst.max((ac - target).norm());
            }
        }
    }
    sheet.line(
        "gamma matrices satisfy the Clifford relations for d=2..12",
        violations == 0 && worst == 0.0 && secs < 5.0,
        format!("{violations} violations, anticommutator defect {worst:e}, {secs:.2}s"),
    );
}

fn spectra(sheet: &mut Sheet) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst1 = 0.0f64;
    let mut worst2 = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for (m, d) in [(2usize, 2usize), (2, 4), (4, 2), (2, 6)] {
        let g = build_euclidean_gammas(d).unwrap().gammas;
        let a_blocks = commuting_sets(d).unwrap().primed_matrices();
        for _ in 0..50 {
            let a: Vec<f64> = (0..d + 2).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let numeric = sorted(hermitian_eigenvalues(&dense_sum(a[0], &a[1..], &g, m)).unwrap());
            let closed = sorted(spinwit::operator::closed_form_spectrum_kind1(&a, m, d).unwrap());
            worst1 = worst1.max(max_gap(&numeric, &closed));
            worst_oracle = worst_oracle.max(max_gap(&numeric, &sorted(kind1_levels_oracle(&a, m, d))));

            let b: Vec<f64> = (0..3 * d / 2 + 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let numeric = sorted(hermitian_eigenvalues(&dense_sum(b[0], &b[1..], &a_blocks, m)).unwrap());
            let closed = sorted(spinwit::operator::closed_form_spectrum_kind2(&b, m, d).unwrap());
            worst2 = worst2.max(max_gap(&numeric, &closed));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    sheet.line(
        "closed-form first-kind spectra match diagonalization",
        worst1 < 1e-10 && worst_oracle < 1e-10 && secs < 60.0,
        format!("max gap {worst1:e} (sign-pattern oracle {worst_oracle:e})"),
    );
    sheet.line(
        "closed-form second-kind spectra match diagonalization",
        worst2 < 1e-10 && secs < 60.0,
        format!("max gap {worst2:e}, {secs:.2}s for both families"),
    );
}

fn lp_oracle(sheet: &mut Sheet) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for family in RegionFamily::ALL {
        let mut worst = 0.0f64;
        for d in [2usize, 4] {
            let region = feasible_region(family, d).unwrap();
            let verts = region.boxed_vertices().unwrap();
            for _ in 0..50 {
                let obj: Vec<f64> = (0..region.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let sol = simplex_min(&LpProblem::new(obj.clone(), 0.3, region.halfspaces.clone()).unwrap()).unwrap();
                let enumerated = verts
                    .iter()
                    .map(|v| 0.3 + v.iter().zip(&obj).map(|(x, y)| x * y).sum::<f64>())
                    .fold(f64::INFINITY, f64::min);
                let gap = if sol.status == LpStatus::Optimal { (sol.optimum - enumerated).abs() } else { f64::INFINITY };
                worst = worst.max(gap);
            }
        }
        sheet.line(
            &format!("simplex matches vertex enumeration on the {} region", family.name()),
            worst < 1e-9,
            format!("max gap {worst:e} over 100 objectives"),
        );
    }
}

fn signed(n: usize, coords: &[usize], scale: f64) -> Vec<Halfspace> {
    (0u32..1 << coords.len())
        .map(|mask| {
            let mut g = vec![0.0; n];
            for (b, &k) in coords.iter().enumerate() {
                g[k] = if mask >> b & 1 == 0 { scale } else { -scale };
            }
            Halfspace::new(g, 1.0)
        })
        .collect()
}

fn duals(sheet: &mut Sheet) {
    for d in [2usize, 4, 6] {
        let h = d / 2;
        let check = |family: RegionFamily, expected: Vec<Halfspace>| {
            let dual = ssnnev_region(&feasible_region(family, d).unwrap(), 1.0).unwrap();
            (same_halfspace_system(&dual.halfspaces, &expected, 1e-9), dual.halfspaces.len())
        };
        let n = d + 1;
        let (ok, k) = check(RegionFamily::Kind1, (0..n).flat_map(|i| signed(n, &[i], 1.0)).collect());
        sheet.line(&format!("dual of kind1 region is the unit cube (d={d})"), ok, format!("{k} facets"));

        let grouped = (0..3).flat_map(|b| signed(3 * h, &(b * h..(b + 1) * h).collect::<Vec<_>>(), 1.0)).collect();
        let (ok, k) = check(RegionFamily::Kind2, grouped);
        sheet.line(&format!("dual of kind2 region is the per-set cross polytope (d={d})"), ok, format!("{k} facets"));

        let n = d + 2;
        let (ok, k) = check(RegionFamily::Approx1, (0..n).flat_map(|i| signed(n, &[i], 2f64.sqrt())).collect());
        sheet.line(&format!("dual of approx1 region is the 1/sqrt2 cube (d={d})"), ok, format!("{k} facets"));

        let n = 3 * h + 1;
        let (ok, k) = check(RegionFamily::Approx2, (0..n).flat_map(|i| signed(n, &[i], 2.0)).collect());
        sheet.line(&format!("dual of approx2 region is the half cube (d={d})"), ok, format!("{k} facets"));
    }
}

fn rest_frame_numbers(sheet: &mut Sheet) {
    // EPR pair against the explicit witness and the Bell-type singlet
    let g = build_euclidean_gammas(4).unwrap().gammas;
    let e = epr_state();
    let mut w = CMatrix::identity(16, 16);
    w -= g[1].kronecker(&g[0]);
    w += g[0].kronecker(&g[1]);
    w += g[2].kronecker(&g[2]);
    w += g[3].kronecker(&g[3]);
    w -= g[4].kronecker(&g[4]);
    let epr = pure_ev(&w, &e);
    let f = phi_minus_14();
    let singlet = (0u32..16)
        .map(|mask| {
            let bits: Vec<u8> = (0..4).map(|k| (mask >> k & 1) as u8).collect();
            pure_ev(&optimal_kind1(2, 4, &bits).unwrap().matrix().unwrap().matrix, &f)
        })
        .fold(f64::INFINITY, f64::min);
    sheet.line(
        "EPR state detection value",
        (epr + 2.0).abs() < 1e-8 && (singlet + 2.0).abs() < 1e-8,
        format!("{epr:.12} (singlet {singlet:.12}, target -2)"),
    );

    let witnesses: Vec<CMatrix> = (0u32..16)
        .map(|mask| {
            let bits: Vec<u8> = (0..4).map(|k| (mask >> k & 1) as u8).collect();
            optimal_kind1_chiral(&bits).unwrap().matrix().unwrap().matrix
        })
        .collect();
    let mut worst = 0.0f64;
    for s in vertex_states_kind1_chiral() {
        let rho = s.matrix().unwrap();
        let best = witnesses.iter().map(|w| ev(w, &rho)).fold(f64::INFINITY, f64::min);
        worst = worst.max((best + 2.0 / 3.0).abs());
    }
    sheet.line(
        "PPT vertex states detected at -2/3 for all 16 patterns",
        worst < 1e-8,
        format!("max deviation {worst:e}"),
    );

    let gc = build_chiral4().gammas;
    let gg = |k: usize| gc[k].kronecker(&gc[k]);
    let expected = (CMatrix::identity(16, 16).map(|z| z * 5.0) - gg(0) + gg(1) + gg(2) + gg(3) + gg(4)).map(|z| z / 80.0);
    let (rho_s, eps) = closest_separable(&rest_entangled_state(), &rest_witness()).unwrap();
    let dev = (&rho_s - &expected).norm();
    sheet.line(
        "rest-frame closest separable state and epsilon",
        (eps + 1.0 / 120.0).abs() < 1e-8 && dev < 1e-8,
        format!("epsilon {eps:.12} (target -1/120), state deviation {dev:e}"),
    );

    let rest = hs_pipeline(&BoostParams::z(0.0)).unwrap();
    let target = 5f64.sqrt() / 30.0;
    sheet.line(
        "rest-frame Hilbert-Schmidt measure",
        (rest.measure - target).abs() < 1e-8,
        format!("{:.12} (target sqrt5/30 = {target:.12})", rest.measure),
    );
}

fn boosted_measure(xi: f64) -> f64 {
    let t = (xi / 2.0).tanh();
    let s = 5.0 * (1.0 + t.powi(8)) + 28.0 * (t.powi(2) + t.powi(6)) + 126.0 * t.powi(4);
    (xi / 2.0).cosh().powi(4) / (30.0 * xi.cosh().powi(2)) * s.sqrt()
}

fn boosted_numbers(sheet: &mut Sheet) {
    let rows = boost_sweep(&[0.25, 0.5, 1.0, 2.0]).unwrap();
    let worst = rows.iter().map(|r| (r.measure - boosted_measure(r.xi)).abs()).fold(0.0, f64::max);
    let grid: Vec<f64> = (0..=120).map(|k| -3.0 + 0.05 * k as f64).collect();
    let sweep = boost_sweep(&grid).unwrap();
    let d0 = 5f64.sqrt() / 30.0;
    let below = sweep.iter().filter(|r| r.measure < d0 - 1e-12).count();
    sheet.line(
        "boosted Hilbert-Schmidt measure matches its closed form",
        worst < 1e-7,
        format!("max gap {worst:e} at xi in {{0.25, 0.5, 1, 2}}"),
    );
    sheet.line(
        "boosted measure never drops below the rest value",
        below == 0,
        format!("{below} of {} grid points below", sweep.len()),
    );
}

fn kind1_partial_transpose(sheet: &mut Sheet) {
    let mut detail = Vec::new();
    let mut ok = true;
    for d in [4usize, 6] {
        let w = optimal_kind1(2, d, &vec![0; d]).unwrap().matrix().unwrap().matrix;
        let ld = 1 << (d / 2);
        let pt = dense_min_eig(&partial_transpose_matrix(&w, ld, 2, 1).unwrap());
        let target = 1.0 - d as f64 - if (d / 2) % 2 == 0 { 1.0 } else { -1.0 };
        ok &= (pt - target).abs() < 1e-10;
        detail.push(format!("d={d}: {pt:.12} (target {target})"));
    }
    sheet.line("first-kind partial transpose minimum at all-zero bits", ok, detail.join(", "));
}

fn kind2_partial_transposes(sheet: &mut Sheet) {
    let mut worst_j1 = f64::INFINITY;
    let mut worst_jn = f64::INFINITY;
    let mut decomposable = 0;
    let mut total = 0;
    for m in [2usize, 4] {
        for d in [2usize, 4, 6] {
            for j in 1..=d / 2 {
                for (i1, i2) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
                    let spec = optimal_kind2(m, d, i1, i2, j).unwrap();
                    let ld = spec.local_dim();
                    let pt_min = if ld.pow(m as u32) <= 256 {
                        let w = spec.matrix().unwrap().matrix;
                        (1..=m)
                            .map(|k| dense_min_eig(&partial_transpose_matrix(&w, ld, m, k).unwrap()))
                            .fold(f64::INFINITY, f64::min)
                    } else {
                        spec.product_sum()
                            .unwrap()
                            .min_partial_transpose_eigenvalues()
                            .unwrap()
                            .into_iter()
                            .fold(f64::INFINITY, f64::min)
                    };
                    if j == 1 {
                        worst_j1 = worst_j1.min(pt_min);
                    } else {
                        worst_jn = worst_jn.min(pt_min);
                    }
                    total += 1;
                    if decomposability(&spec).unwrap().verdict == Decomposability::Decomposable {
                        decomposable += 1;
                    }
                }
            }
        }
    }
    sheet.line(
        "kind2 optimal witnesses have positive partial transposes (j=1)",
        worst_j1 >= -1e-10,
        format!("smallest partial-transpose eigenvalue {worst_j1:.3e}"),
    );
    sheet.line(
        "kind2 optimal witnesses have positive partial transposes (j>=2)",
        worst_jn >= -1e-10,
        format!("smallest partial-transpose eigenvalue {worst_jn:.6}"),
    );
    sheet.line(
        "kind2 optimal witnesses are decomposable",
        decomposable == total,
        format!("{decomposable} of {total} for m in {{2,4}}, d in {{2,4,6}}"),
    );
}

// Minimum of Tr(W(a) rho) over the coefficient cube |a_k| <= a_0 = 1,
// solved as an LP and checked against the closed form 1 - Σ|Tr(B_k rho)|.
fn cube_minimum(rho: &CMatrix, blocks: &[CMatrix], m: usize) -> (f64, f64, Vec<f64>) {
    let t: Vec<f64> = blocks.iter().map(|b| ev(&power(b, m), rho)).collect();
    let tr = rho.trace().re;
    let sol = simplex_min(&LpProblem::new(t.clone(), tr, Vec::new()).unwrap()).unwrap();
    let closed = tr - t.iter().map(|x| x.abs()).sum::<f64>();
    (sol.optimum, closed, sol.argmin)
}

fn approx_detection(sheet: &mut Sheet) {
    let (m, d) = (2usize, 4usize);
    let g = build_euclidean_gammas(d).unwrap().gammas;
    let h12 = (&g[0] * &g[1]).map(|z| z * Complex64::new(0.0, -1.0));
    let mut blocks1: Vec<CMatrix> = g.clone();
    blocks1.push(h12);
    let a = commuting_sets(d).unwrap().primed_matrices();
    let mut blocks2 = a.clone();
    blocks2.push(&a[0] * &a[1]);

    let mut worst = 0.0f64;
    let mut verdicts = Vec::new();
    for (family, states, blocks) in [
        (Family::ApproxKind1, vertex_states_approx1(m, d).unwrap(), &blocks1),
        (Family::ApproxKind2, vertex_states_approx2(m, d).unwrap(), &blocks2),
    ] {
        for s in states {
            let rho = s.matrix().unwrap();
            let (lp, closed, argmin) = cube_minimum(&rho, blocks, m);
            worst = worst.max((lp + 2.0).abs()).max((closed + 2.0).abs());
            let mut coeffs = vec![1.0];
            coeffs.extend(argmin);
            let spec = WitnessSpec::new(family, m, d, coeffs).unwrap();
            verdicts.push(format!("{:?}", classify(&spec).unwrap().verdict));
        }
    }
    verdicts.dedup();
    sheet.line(
        "approximate-family vertex states reach -2 over the coefficient cube",
        worst < 1e-8,
        format!("max deviation {worst:e}; minimizing operators classify as {}", verdicts.join("/")),
    );

    let mut best1 = f64::INFINITY;
    for s in vertex_states_approx1(m, d).unwrap() {
        let rho = s.matrix().unwrap();
        for (i1, i2) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            let w = optimal_approx1(m, d, i1, i2).unwrap().matrix().unwrap().matrix;
            best1 = best1.min(ev(&w, &rho));
        }
    }
    println!("  note: best optimal approx1 witness value on those states {best1:.6}");
}

fn product_slack(rng: &mut ChaCha8Rng, family: Family, region: RegionFamily, m: usize, d: usize) -> (f64, f64) {
    let spec = WitnessSpec::new(family, m, d, vec![0.0; family.coeff_len(d)]).unwrap();
    let blocks = spec.blocks().unwrap();
    let halfspaces = spinwit::lp::region_halfspaces(region, d).unwrap();
    let gammas = build_euclidean_gammas(d).unwrap().gammas;
    let mut worst = f64::INFINITY;
    let mut local_worst = 0.0f64;
    for _ in 0..10_000 {
        let locals = random_product_locals(rng, m, spec.local_dim());
        let p: Vec<f64> = blocks
            .iter()
            .map(|factors| factors.iter().zip(&locals).fold(c(1.0), |acc, (f, v)| acc * v.dotc(&(f * v))).re)
            .collect();
        for hs in &halfspaces {
            worst = worst.min(hs.slack(&p));
        }
        let v = &locals[0];
        let s: f64 = gammas.iter().map(|x| v.dotc(&(x * v)).re.powi(2)).sum();
        local_worst = local_worst.max(s);
    }
    (worst, local_worst)
}

fn product_suites(sheet: &mut Sheet) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let exact = [(2usize, 2usize), (2, 4), (2, 6), (4, 2), (4, 4)];
    // at d = 2 the extra approximate-family block coincides with γ_S
    let approx = [(2usize, 4usize), (2, 6), (4, 4)];
    for (name, family, region, configs) in [
        ("kind1", Family::Kind1, RegionFamily::Kind1, &exact[..]),
        ("kind2", Family::Kind2, RegionFamily::Kind2, &exact[..]),
        ("approx1", Family::ApproxKind1, RegionFamily::Approx1, &approx[..]),
        ("approx2", Family::ApproxKind2, RegionFamily::Approx2, &approx[..]),
    ] {
        let mut worst = f64::INFINITY;
        let mut local_worst = 0.0f64;
        for &(m, d) in configs {
            let (w, l) = product_slack(&mut rng, family, region, m, d);
            worst = worst.min(w);
            local_worst = local_worst.max(l);
        }
        let mut detail = format!(
            "{} configurations x 1e4 samples, smallest slack {worst:.3e}, largest local sum of squares {local_worst:.12}",
            configs.len()
        );
        let mut pass = worst >= -1e-9 && local_worst <= 1.0 + 1e-9;
        if family == Family::ApproxKind1 {
            let slack = approx1_counterexample();
            pass &= slack >= -1e-9;
            detail.push_str(&format!("; joint eigenvector of γ_3 and -iγ_1γ_2 gives slack {slack:.6}"));
        }
        sheet.line(&format!("{name} region inequalities hold on product states"), pass, detail);
    }
}

// γ_3 commutes with γ_1γ_2 for d ≥ 4, so both can be +1 on the same spinor.
fn approx1_counterexample() -> f64 {
    let d = 4;
    let g = build_euclidean_gammas(d).unwrap().gammas;
    let h12 = (&g[0] * &g[1]).map(|z| z * Complex64::new(0.0, -1.0));
    let (vals, vecs) = spinwit::operator::hermitian_eigen(&(&g[2] + &h12)).unwrap();
    let top = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    let v: CVector = vecs.column(top).into_owned();
    let mut blocks = g.clone();
    blocks.push(h12);
    let p: Vec<f64> = blocks.iter().map(|b| v.dotc(&(b * &v)).re.powi(2)).collect();
    spinwit::lp::region_halfspaces(RegionFamily::Approx1, d)
        .unwrap()
        .iter()
        .map(|hs| hs.slack(&p))
        .fold(f64::INFINITY, f64::min)
}

fn bell_diagonality(sheet: &mut Sheet) {
    let mut worst = 0.0f64;
    for v in bell_states() {
        let rho = &v * v.adjoint();
        let b = expansion_matrix(&rho).unwrap();
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    worst = worst.max(x.norm());
                }
            }
        }
    }
    sheet.line(
        "Bell-type projectors expand only on diagonal label pairs",
        worst < 1e-12,
        format!("largest cross coefficient {worst:e}"),
    );
}

fn concurrence_grid(sheet: &mut Sheet) {
    let rows = region_scan_d2(0.02).unwrap();
    let mut valid = 0;
    let mut bad = 0;
    let mut oracle_bad = 0;
    for r in &rows {
        if r.region == Region::Invalid {
            continue;
        }
        valid += 1;
        let detected = r.region == Region::DetectedEntangled;
        let conc = r.concurrence.unwrap();
        if detected != (conc > 1e-9) {
            bad += 1;
        }
        // independent check: rebuild the state and recompute C
        if valid % 97 == 0 {
            let pauli = [
                DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
                DMatrix::from_row_slice(2, 2, &[c(0.0), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), c(0.0)]),
                DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
            ];
            let mut rho = CMatrix::identity(4, 4).map(|z| z / 4.0);
            for (b, s) in [r.b1, r.b2, r.b3].iter().zip(&pauli) {
                rho += s.kronecker(s).map(|z| z * *b);
            }
            let again = wootters_concurrence(&rho).unwrap();
            if (again - conc).abs() > 1e-7 {
                oracle_bad += 1;
            }
        }
    }
    sheet.line(
        "two-qubit detection agrees with positive concurrence",
        bad == 0 && oracle_bad == 0 && valid > 0,
        format!("{} grid points, {valid} states, {bad} disagreements", rows.len()),
    );
}

fn boosted_witness(sheet: &mut Sheet) {
    let mut detail = Vec::new();
    let mut ok = true;
    for xi in [0.5, 1.0, 2.0] {
        let r = hs_pipeline(&BoostParams::z(xi)).unwrap();
        let shifted = &r.closest_separable - &r.entangled - CMatrix::identity(16, 16).map(|z| z * r.epsilon);
        let min = product_minimum(&shifted, 100_000, 50, 7).unwrap();
        // re-evaluate the minimizer directly
        let v = min.locals[0].kronecker(&min.locals[1]);
        let direct = pure_ev(&shifted, &v) / v.norm_squared();
        ok &= min.value >= -1e-6;
        detail.push(format!("xi={xi}: {:.6} (direct {direct:.6})", min.value));
    }
    sheet.line("boosted optimal witness is nonnegative on product states", ok, detail.join(", "));
}

fn optimality(sheet: &mut Sheet) {
    let mut count = 0;
    let mut ok = 0;
    for d in [4usize, 6] {
        for mask in 0u32..1 << d {
            let bits: Vec<u8> = (0..d).map(|k| (mask >> k & 1) as u8).collect();
            count += 1;
            if check_optimality(&optimal_kind1(2, d, &bits).unwrap()).unwrap() {
                ok += 1;
            }
        }
    }
    sheet.line("kind1 optimal witnesses are optimal", ok == count, format!("{ok} of {count} at d in {{4,6}}"));

    for (label, js) in [("j=1", false), ("j>=2", true)] {
        let mut count = 0;
        let mut ok = 0;
        for d in [4usize, 6] {
            let range: Vec<usize> = if js { (2..=d / 2).collect() } else { vec![1] };
            for j in range {
                for (i1, i2) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
                    count += 1;
                    if check_optimality(&optimal_kind2(2, d, i1, i2, j).unwrap()).unwrap() {
                        ok += 1;
                    }
                }
            }
        }
        sheet.line(
            &format!("kind2 optimal witnesses are optimal ({label})"),
            ok == count,
            format!("{ok} of {count} at d in {{4,6}}"),
        );
    }

    let w = optimal_kind1(2, 4, &[0, 0, 0, 0]).unwrap();
    let mut coeffs = w.coeffs.clone();
    coeffs[1..].iter_mut().for_each(|a| *a *= 0.9);
    let inner = WitnessSpec::new(Family::Kind1, 2, 4, coeffs).unwrap();
    let res = check_optimality(&inner).unwrap();
    sheet.line("interior-scaled witness is not optimal", !res, format!("check_optimality = {res}"));
}

#[test]
fn acceptance() {
    let t = Instant::now();
    let mut sheet = Sheet { failed: BTreeSet::new() };
    clifford(&mut sheet);
    spectra(&mut sheet);
    lp_oracle(&mut sheet);
    duals(&mut sheet);
    rest_frame_numbers(&mut sheet);
    boosted_numbers(&mut sheet);
    kind1_partial_transpose(&mut sheet);
    kind2_partial_transposes(&mut sheet);
    approx_detection(&mut sheet);
    product_suites(&mut sheet);
    bell_diagonality(&mut sheet);
    concurrence_grid(&mut sheet);
    boosted_witness(&mut sheet);
    optimality(&mut sheet);
    println!("acceptance finished in {:.1}s", t.elapsed().as_secs_f64());

    let known: BTreeSet<String> = KNOWN_UNATTAINABLE.iter().map(|s| s.to_string()).collect();
    assert_eq!(sheet.failed, known, "failing criteria differ from the known unattainable set");
}
