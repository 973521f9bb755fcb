use serde::Serialize;
use serde_json::json;

use spinwit::gamma::{build_chiral4, build_euclidean_gammas, verify_clifford, GammaBasis};
use spinwit::lp::{region_halfspaces, simplex_min, LpProblem, RegionFamily};
use spinwit::operator::trace_product;
use spinwit::relativistic::{
    closed_form_epsilon, closed_form_measure, hs_pipeline, lorentz_invariance_check, BoostParams,
};
use spinwit::states::{region_classify, region_scan_d2, BsdState, LabelSet};
use spinwit::witness::{
    classify, decomposability, optimal_approx1, optimal_approx2, optimal_kind1, optimal_kind1_chiral, optimal_kind2,
    optimality_report, Family, WitnessSpec,
};
use spinwit::CMatrix;

use crate::args::{
    BoostAction, Cli, Command, Format, LpAction, RegionAction, Rep, StateAction, StateArgs, WitnessAction,
    WitnessArgs,
};
use crate::output::Outcome;
use crate::{reproduce, suite, Failure};

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let table = cli.format.unwrap_or(Format::Csv);
    let tabular = matches!(
        cli.command,
        Command::Region { .. } | Command::Boost { action: BoostAction::Sweep { .. } }
    );
    if cli.format == Some(Format::Csv) && !tabular {
        return Err(Failure::Usage("csv output is only available for region scan and boost sweep".into()));
    }
    match &cli.command {
        Command::Gamma { dim, rep, verify } => gamma(*dim as usize, *rep, *verify),
        Command::Spectrum(w) => {
            let spec = witness_spec(w)?;
            Outcome::json(&spec.product_sum()?.spectrum()?.eigenvalues, true)
        }
        Command::Lp { action: LpAction::Solve { region, dim, objective } } => lp_solve(region, *dim, objective),
        Command::Witness { action } => witness(action),
        Command::State { action } => state(action),
        Command::Region { action: RegionAction::Scan { resolution } } => {
            if !(*resolution > 0.0 && *resolution <= 0.25) {
                return Err(Failure::Usage(format!("resolution must lie in (0, 0.25], got {resolution}")));
            }
            Outcome::rows(&scan_rows(*resolution)?, table)
        }
        Command::Boost { action } => boost(action, table),
        Command::Reproduce { scenario } => reproduce::run(*scenario),
        Command::VerifyAll { seed, samples, inject_sign_error } => {
            let manifest = suite::verify_all(*seed, *samples, *inject_sign_error)?;
            let ok = manifest.passed;
            Outcome::json(&manifest, ok)
        }
    }
}

pub fn parse_bits(s: &str) -> Result<Vec<u8>, Failure> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Failure::Usage(format!("bit string {s:?} may only contain 0 and 1"))),
        })
        .collect()
}

fn parse<T: std::str::FromStr<Err = spinwit::Error>>(s: &str) -> Result<T, Failure> {
    Ok(s.parse::<T>()?)
}

fn matrix_entries(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

fn gamma(dim: usize, rep: Rep, verify: bool) -> Result<Outcome, Failure> {
    let basis: GammaBasis = match rep {
        Rep::Euclidean => build_euclidean_gammas(dim)?,
        Rep::Chiral4 if dim == 4 => build_chiral4(),
        Rep::Chiral4 => return Err(Failure::Usage("the chiral representation needs --dim 4".into())),
    };
    let violations = verify.then(|| verify_clifford(&basis));
    let ok = violations.as_ref().is_none_or(|v| v.is_empty());
    let report = json!({
        "d": basis.d,
        "rep": basis.rep,
        "local_dim": basis.local_dim(),
        "generators": basis.gammas.len(),
        "matrices": basis.gammas.iter().map(matrix_entries).collect::<Vec<_>>(),
        "violations": violations,
    });
    Outcome::json(&report, ok)
}

fn witness_spec(w: &WitnessArgs) -> Result<WitnessSpec, Failure> {
    let family: Family = parse(&w.family)?;
    if w.chiral {
        if family != Family::Kind1 {
            return Err(Failure::Usage("--chiral applies to the kind1 family only".into()));
        }
        return Ok(WitnessSpec::chiral_kind1(w.coeffs.clone())?);
    }
    Ok(WitnessSpec::new(family, w.m, w.d, w.coeffs.clone())?)
}

fn lp_solve(region: &str, dim: usize, objective: &[f64]) -> Result<Outcome, Failure> {
    let family: RegionFamily = parse(region)?;
    let n = family.dim(dim);
    if objective.len() != n + 1 {
        return Err(Failure::Usage(format!("objective needs {} entries (a_0 then {n} more), got {}", n + 1, objective.len())));
    }
    let problem = LpProblem::new(objective[1..].to_vec(), objective[0], region_halfspaces(family, dim)?)?;
    Outcome::json(&simplex_min(&problem)?, true)
}

fn witness_report(spec: &WitnessSpec) -> Result<Outcome, Failure> {
    let class = classify(spec)?;
    let decomposition = decomposability(spec)?;
    let optimality = match spec.family {
        Family::Kind1 | Family::Kind2 => Some(optimality_report(spec)?),
        _ => None,
    };
    let report = json!({
        "spec": spec,
        "classification": class,
        "decomposition": decomposition,
        "optimality": optimality,
    });
    Outcome::json(&report, true)
}

fn witness(action: &WitnessAction) -> Result<Outcome, Failure> {
    match action {
        WitnessAction::Optimal { family, m, d, bits, j, chiral } => {
            let family: Family = parse(family)?;
            let b = parse_bits(bits)?;
            let spec = match family {
                Family::Kind1 if *chiral => optimal_kind1_chiral(&b)?,
                Family::Kind1 => optimal_kind1(*m, *d, &b)?,
                Family::Kind2 => match b.as_slice() {
                    [i1, i2] => optimal_kind2(*m, *d, *i1, *i2, *j)?,
                    _ => return Err(Failure::Usage("kind2 takes two bits i1 i2 plus --j".into())),
                },
                Family::ApproxKind1 => match b.as_slice() {
                    [i1, i2] => optimal_approx1(*m, *d, *i1, *i2)?,
                    _ => return Err(Failure::Usage("approx1 takes two bits".into())),
                },
                Family::ApproxKind2 => optimal_approx2(*m, *d, &b)?,
                _ => return Err(Failure::Usage(format!("no optimal construction for {}", family.name()))),
            };
            witness_report(&spec)
        }
        WitnessAction::Classify(w) => witness_report(&witness_spec(w)?),
    }
}

fn build_state(s: &StateArgs) -> Result<BsdState, Failure> {
    let labels: LabelSet = parse(&s.labels)?;
    let (m, d) = if matches!(labels, LabelSet::Chiral | LabelSet::ChiralFull) { (2, 4) } else { (s.m, s.d) };
    Ok(BsdState::from_labels(m, d, labels, &s.coeffs)?)
}

fn state(action: &StateAction) -> Result<Outcome, Failure> {
    match action {
        StateAction::Build(s) => {
            let st = build_state(s)?;
            let report = json!({
                "state": st,
                "valid": st.is_valid()?,
                "min_eigenvalue": st.min_eigenvalue()?,
                "ppt": if st.is_valid()? { Some(st.ppt()?) } else { None },
            });
            Outcome::json(&report, true)
        }
        StateAction::Classify { state, family } => {
            let st = build_state(state)?;
            Outcome::json(&region_classify(&st, parse(family)?)?, true)
        }
        StateAction::Detect { state, family, witness_bits, j } => {
            let st = build_state(state)?;
            let b = parse_bits(witness_bits)?;
            let family: Family = parse(family)?;
            let spec = match (family, st.labels) {
                (Family::Kind1, LabelSet::Chiral | LabelSet::ChiralFull) => optimal_kind1_chiral(&b)?,
                (Family::Kind1, _) => optimal_kind1(st.m, st.d, &b)?,
                (Family::Kind2, _) => match b.as_slice() {
                    [i1, i2] => optimal_kind2(st.m, st.d, *i1, *i2, *j)?,
                    _ => return Err(Failure::Usage("kind2 takes two witness bits plus --j".into())),
                },
                (Family::ApproxKind1, _) => match b.as_slice() {
                    [i1, i2] => optimal_approx1(st.m, st.d, *i1, *i2)?,
                    _ => return Err(Failure::Usage("approx1 takes two witness bits".into())),
                },
                (Family::ApproxKind2, _) => optimal_approx2(st.m, st.d, &b)?,
                _ => return Err(Failure::Usage(format!("no optimal construction for {}", family.name()))),
            };
            let w = spec.matrix()?.matrix;
            let rho = st.matrix()?;
            if w.shape() != rho.shape() {
                return Err(Failure::Usage("witness and state act on different spaces".into()));
            }
            let value = trace_product(&w, &rho).re;
            let report = json!({
                "witness": spec,
                "value": value,
                "detected": value < -spinwit::states::DETECTION_TOL,
                "valid_state": st.is_valid()?,
            });
            Outcome::json(&report, true)
        }
    }
}

#[derive(Serialize)]
struct ScanCsv {
    b1: f64,
    b2: f64,
    b3: f64,
    region: String,
    min_detection: f64,
    concurrence: Option<f64>,
}

fn scan_rows(resolution: f64) -> Result<Vec<ScanCsv>, Failure> {
    Ok(region_scan_d2(resolution)?
        .into_iter()
        .map(|r| ScanCsv {
            b1: r.b1,
            b2: r.b2,
            b3: r.b3,
            region: serde_json::to_value(r.region)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            min_detection: r.min_detection,
            concurrence: r.concurrence,
        })
        .collect())
}

#[derive(Serialize)]
struct SweepCsv {
    xi: f64,
    measure: f64,
    distance: f64,
    epsilon: f64,
    contact_residual: f64,
    closed_form_measure: Option<f64>,
    closed_form_epsilon: Option<f64>,
}

fn boost(action: &BoostAction, table: Format) -> Result<Outcome, Failure> {
    match action {
        BoostAction::Sweep { xi_min, xi_max, steps, direction } => {
            if *steps == 0 || !(xi_min.is_finite() && xi_max.is_finite()) || xi_max < xi_min {
                return Err(Failure::Usage("need finite xi-min <= xi-max and at least one step".into()));
            }
            let along_z = direction.unit() == [0.0, 0.0, 1.0];
            let rows = (0..*steps)
                .map(|k| {
                    let xi = if *steps == 1 {
                        *xi_min
                    } else {
                        xi_min + (xi_max - xi_min) * k as f64 / (*steps - 1) as f64
                    };
                    let r = hs_pipeline(&BoostParams::new(xi, direction.unit())?)?;
                    Ok(SweepCsv {
                        xi,
                        measure: r.measure,
                        distance: r.distance,
                        epsilon: r.epsilon,
                        contact_residual: r.contact,
                        closed_form_measure: along_z.then(|| closed_form_measure(xi)),
                        closed_form_epsilon: along_z.then(|| closed_form_epsilon(xi)),
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            Outcome::rows(&rows, table)
        }
        BoostAction::CheckInvariance { bits, xi, direction } => {
            let b = parse_bits(bits)?;
            let w = optimal_kind1_chiral(&b)?.matrix()?.matrix;
            let params = BoostParams::new(*xi, direction.unit())?;
            let invariant = lorentz_invariance_check(&w, &params)?;
            Outcome::json(&json!({ "bits": bits, "xi": xi, "direction": direction.unit(), "invariant": invariant }), invariant)
        }
    }
}
