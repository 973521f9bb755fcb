//! Property suites behind `verify-all`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use spinwit::gamma::{build_euclidean_gammas, commuting_sets, verify_clifford, GammaBasis};
use spinwit::lp::{
    feasible_region, region_halfspaces, same_point_set, simplex_min, ssnnev_region, LpProblem, LpStatus, RegionFamily,
};
use spinwit::operator::{
    closed_form_spectrum_kind1, closed_form_spectrum_kind2, hermitian_eigenvalues, kron_all, multiset_eq, EIG_TOL,
};
use spinwit::states::{random_local_state, random_product_locals};
use spinwit::witness::{Family, WitnessSpec};
use spinwit::CMatrix;

use crate::reproduce::SCHEMA_VERSION;
use crate::Failure;

const SLACK_TOL: f64 = 1e-9;
const MAX_LISTED: usize = 20;

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteReport>,
    /// Statements that sampling refutes; reported, not counted.
    pub known_deviations: Vec<String>,
    pub passed: bool,
}

struct Tally {
    name: &'static str,
    checked: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, checked: 0, failed: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(what());
            }
        }
    }

    fn done(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            checked: self.checked,
            failed: self.failed,
            passed: self.failed == 0,
            failures: self.failures,
        }
    }
}

pub fn verify_all(seed: u64, samples: usize, inject: Option<usize>) -> Result<Manifest, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = vec![
        clifford(inject)?,
        spectra(&mut rng)?,
        lp_vs_enumeration(&mut rng)?,
        product_bounds(&mut rng, samples)?,
        duality()?,
    ];
    let passed = suites.iter().all(|s| s.passed);
    Ok(Manifest {
        schema_version: SCHEMA_VERSION,
        seed,
        samples,
        suites,
        known_deviations: vec![
            "approx1 region inequality fails on product states for d >= 4 (γ_3 commutes with γ_1γ_2)".into(),
        ],
        passed,
    })
}

fn clifford(inject: Option<usize>) -> Result<SuiteReport, Failure> {
    let mut t = Tally::new("clifford_relations");
    for d in 2..=12 {
        let mut basis: GammaBasis = build_euclidean_gammas(d)?;
        if let Some(k) = inject {
            if k == 0 || k > basis.gammas.len() {
                return Err(Failure::Usage(format!("generator {k} outside 1..={}", basis.gammas.len())));
            }
            basis.gammas[k - 1] = basis.gammas[k - 1].map(|z| -z);
        }
        let violations = verify_clifford(&basis);
        t.check(violations.is_empty(), || {
            let names: Vec<String> =
                violations.iter().map(|v| format!("{}{:?}", v.relation, v.indices)).collect();
            format!("d={d}: {}", names.join(", "))
        });
    }
    Ok(t.done())
}

fn dense(a0: f64, coeffs: &[f64], blocks: &[CMatrix], m: usize) -> CMatrix {
    let n = blocks[0].nrows().pow(m as u32);
    let mut w = CMatrix::identity(n, n).map(|z| z * a0);
    for (a, b) in coeffs.iter().zip(blocks) {
        w += kron_all(&vec![b.clone(); m]).map(|z| z * *a);
    }
    w
}

fn spectra(rng: &mut ChaCha8Rng) -> Result<SuiteReport, Failure> {
    let mut t = Tally::new("spectrum_oracles");
    for (m, d) in [(2usize, 2usize), (2, 4), (4, 2), (2, 6)] {
        let g = build_euclidean_gammas(d)?.gammas;
        let a_blocks = commuting_sets(d)?.primed_matrices();
        for _ in 0..50 {
            let a: Vec<f64> = (0..d + 2).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let numeric = hermitian_eigenvalues(&dense(a[0], &a[1..], &g, m))?;
            let closed = closed_form_spectrum_kind1(&a, m, d)?;
            t.check(multiset_eq(&numeric, &closed, EIG_TOL), || format!("kind1 m={m} d={d} a={a:?}"));

            let b: Vec<f64> = (0..3 * d / 2 + 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let numeric = hermitian_eigenvalues(&dense(b[0], &b[1..], &a_blocks, m))?;
            let closed = closed_form_spectrum_kind2(&b, m, d)?;
            t.check(multiset_eq(&numeric, &closed, EIG_TOL), || format!("kind2 m={m} d={d} a={b:?}"));
        }
    }
    Ok(t.done())
}

fn lp_vs_enumeration(rng: &mut ChaCha8Rng) -> Result<SuiteReport, Failure> {
    let mut t = Tally::new("lp_vs_enumeration");
    for family in RegionFamily::ALL {
        for d in [2usize, 4] {
            let region = feasible_region(family, d)?;
            let verts = region.boxed_vertices()?;
            for _ in 0..50 {
                let obj: Vec<f64> = (0..region.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let sol = simplex_min(&LpProblem::new(obj.clone(), 0.0, region.halfspaces.clone())?)?;
                let best = verts
                    .iter()
                    .map(|v| v.iter().zip(&obj).map(|(x, y)| x * y).sum::<f64>())
                    .fold(f64::INFINITY, f64::min);
                let ok = sol.status == LpStatus::Optimal && (sol.optimum - best).abs() <= 1e-9;
                t.check(ok, || format!("{} d={d}: simplex {} vs vertices {best}", family.name(), sol.optimum));
            }
        }
    }
    Ok(t.done())
}

fn expectation(f: &CMatrix, v: &spinwit::CVector) -> Complex64 {
    v.dotc(&(f * v))
}

fn product_bounds(rng: &mut ChaCha8Rng, samples: usize) -> Result<SuiteReport, Failure> {
    let mut t = Tally::new("product_state_bounds");
    // local sum of squared generator expectations
    for d in [2usize, 4, 6] {
        let g = build_euclidean_gammas(d)?.gammas;
        for _ in 0..samples {
            let v = random_local_state(rng, 1 << (d / 2));
            let s: f64 = g.iter().map(|x| expectation(x, &v).re.powi(2)).sum();
            t.check(s <= 1.0 + SLACK_TOL, || format!("d={d}: local sum {s}"));
        }
    }
    // exact regions and the second approximate region
    let configs: [(Family, RegionFamily, &[(usize, usize)]); 3] = [
        (Family::Kind1, RegionFamily::Kind1, &[(2, 2), (2, 4), (2, 6), (4, 2), (4, 4)]),
        (Family::Kind2, RegionFamily::Kind2, &[(2, 2), (2, 4), (2, 6), (4, 2), (4, 4)]),
        (Family::ApproxKind2, RegionFamily::Approx2, &[(2, 4), (2, 6), (4, 4)]),
    ];
    for (family, region, shapes) in configs {
        for &(m, d) in shapes {
            let spec = WitnessSpec::new(family, m, d, vec![0.0; family.coeff_len(d)])?;
            let blocks = spec.blocks()?;
            let halfspaces = region_halfspaces(region, d)?;
            for _ in 0..samples {
                let locals = random_product_locals(rng, m, spec.local_dim());
                let p: Vec<f64> = blocks
                    .iter()
                    .map(|fs| fs.iter().zip(&locals).fold(Complex64::new(1.0, 0.0), |acc, (f, v)| acc * expectation(f, v)).re)
                    .collect();
                let slack = halfspaces.iter().map(|h| h.slack(&p)).fold(f64::INFINITY, f64::min);
                t.check(slack >= -SLACK_TOL, || format!("{} m={m} d={d}: slack {slack}", region.name()));
            }
        }
    }
    // local bounds behind the approximate regions, d = 4
    let g = build_euclidean_gammas(4)?.gammas;
    let h12 = (&g[0] * &g[1]).map(|z| z * Complex64::new(0.0, -1.0));
    let a = commuting_sets(4)?.primed_matrices();
    let a12 = &a[0] * &a[1];
    for _ in 0..samples {
        let v = random_local_state(rng, 4);
        // γ_1, γ_2 and -iγ_1γ_2 pairwise anticommute
        let b: Vec<f64> = [&g[0], &g[1], &h12].iter().map(|x| expectation(x, &v).re).collect();
        let sq = b.iter().map(|x| x * x).sum::<f64>();
        t.check(sq <= 1.0 + SLACK_TOL, || format!("anticommuting triple {sq}"));
        // (1 ± A'_1)(1 ± A'_2) is positive for commuting involutions
        let (x, y, xy) = (expectation(&a[0], &v).re, expectation(&a[1], &v).re, expectation(&a12, &v).re);
        for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let val = 1.0 + s1 * x + s2 * y + s1 * s2 * xy;
            t.check(val >= -SLACK_TOL, || format!("commuting pair ({s1}, {s2}): {val}"));
        }
    }
    Ok(t.done())
}

fn duality() -> Result<SuiteReport, Failure> {
    let mut t = Tally::new("duality_round_trip");
    for family in RegionFamily::ALL {
        for d in [2usize, 4] {
            let region = feasible_region(family, d)?;
            let dual = ssnnev_region(&region, 1.0)?;
            let back = ssnnev_region(&dual, 1.0)?;
            t.check(same_point_set(&back.vertices, &region.vertices, 1e-9), || {
                format!("{} d={d}: {} vertices back, {} expected", family.name(), back.vertices.len(), region.vertices.len())
            });
        }
    }
    Ok(t.done())
}
