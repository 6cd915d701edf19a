//! Validation suite: every closed form against its oracle, every identity
//! against its tolerance, and the documented negative results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angular_momentum::{build_orbital, epsilon3};
use crate::covariant::{
    b_vector, boost, covariant_body, identity_residuals, inertia_tensor_covariant, inverse_sqrt_inertia,
    jacobi_transform, pauli_lubanski, random_system, FourVector, ParticleSystem, Units,
};
use crate::dirac_gyroscope::{
    self as dirac, build_dirac_hamiltonian, closed_form_lines, dirac_energy_spherical, f_symmetric_with,
    fit_spin_orbit, hamiltonian_from_root, inertia_root, kinetic_labels, kinetic_operator, nonabelian_energy,
    nonrelativistic_operator, printed_j2_for_branch, spherical_j2_for_branch, spinor_chi_nonabelian,
    spinor_residual, squared_residual_of, DiracGyroParams, DiracSpace, DiscriminantSign, SpinOrbitForm,
    Variant, SPIN_ORBIT_COEFFICIENT,
};
use crate::error::{Error, Result};
use crate::kg_gyroscope::{kg_energies_numeric, kg_lines_symmetric, GyroParams, Sign};
use crate::operator_algebra::{c, eig_hermitian, OperatorMatrix};

use super::config::RunConfig;

pub const VALIDATION_L_MAX: u32 = 10;
pub const SQUARED_L_MAX: u32 = 5;
pub const SPECTRUM_TOL: f64 = 1e-10;
pub const SQUARED_TOL: f64 = 1e-12;
pub const NR_SCALE: f64 = 1e6;
/// Allowed excess over the second-order Taylor remainder.
pub const TAYLOR_FACTOR: f64 = 1.01;
pub const COVARIANT_SYSTEMS: usize = 200;
pub const COVARIANT_N_MAX: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    /// Residual must not exceed the tolerance.
    Pass,
    /// Residual must exceed the tolerance (literal variants that are wrong).
    ExpectedFailure,
    /// The computation must be refused with the named error.
    ExpectedError,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub expectation: Expectation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &str, residual: f64, tolerance: f64, expectation: Expectation) -> Self {
        let pass = match expectation {
            Expectation::Pass => residual <= tolerance,
            Expectation::ExpectedFailure => !(residual <= tolerance),
            Expectation::ExpectedError => unreachable!("use Check::expected_error"),
        };
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass,
            expectation,
            value: None,
            detail: None,
        }
    }

    fn from_result(name: &str, r: Result<f64>, tolerance: f64) -> Self {
        match r {
            Ok(x) => Self::new(name, x, tolerance, Expectation::Pass),
            Err(e) => Self {
                detail: Some(e.to_string()),
                ..Self::new(name, f64::INFINITY, tolerance, Expectation::Pass)
            },
        }
    }

    fn expected_failure(name: &str, r: Result<f64>, tolerance: f64) -> Self {
        match r {
            Ok(x) => Self::new(name, x, tolerance, Expectation::ExpectedFailure),
            Err(e) => Self {
                detail: Some(e.to_string()),
                ..Self::new(name, f64::INFINITY, tolerance, Expectation::ExpectedFailure)
            },
        }
    }

    fn expected_error(name: &str, r: Result<FourVector>, want: fn(&Error) -> bool) -> Self {
        let (pass, detail) = match r {
            Err(e) => (want(&e), e.to_string()),
            Ok(v) => (false, format!("unexpected success: {:?}", v.0)),
        };
        Self {
            name: name.into(),
            residual: if pass { 0.0 } else { f64::INFINITY },
            tolerance: 0.0,
            pass,
            expectation: Expectation::ExpectedError,
            value: None,
            detail: Some(detail),
        }
    }

    fn with_value(mut self, v: Option<f64>) -> Self {
        self.value = v;
        self
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

/// Conventions fixed by the oracles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub ladder: String,
    pub transverse_coupling: String,
    pub discriminant: String,
    pub branch_mapping: String,
    pub spin_orbit: String,
    pub spin_orbit_coefficient: Option<f64>,
    pub nonabelian_spinor: String,
    pub inertia_sign: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub params: GyroParams,
    pub checks: Vec<Check>,
    pub conventions: Conventions,
    pub all_pass: bool,
}

/// Test hooks for negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FaultInjection {
    /// Scale `Ī₁₁` by 1.05 before building the Hamiltonian.
    pub corrupt_inertia_root: bool,
}

fn max_rel_sorted(closed: &mut [f64], numeric: &mut [f64]) -> f64 {
    if closed.len() != numeric.len() {
        return f64::INFINITY;
    }
    closed.sort_by(f64::total_cmp);
    numeric.sort_by(f64::total_cmp);
    closed
        .iter()
        .zip(numeric.iter())
        .map(|(a, b)| (a - b).abs() / a.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn symmetrized(p: &GyroParams) -> GyroParams {
    GyroParams {
        inertia: [p.inertia[0], p.inertia[0], p.inertia[2]],
        ..*p
    }
}

fn spherical(p: &GyroParams) -> GyroParams {
    GyroParams {
        inertia: [p.inertia[0]; 3],
        ..*p
    }
}

/// Symmetric but not spherical, for checks that need `I₁ ≠ I₃`.
fn oblate(p: &GyroParams) -> GyroParams {
    let s = symmetrized(p);
    if s.is_spherical() {
        GyroParams {
            inertia: [s.inertia[0], s.inertia[0], 2.0 * s.inertia[0]],
            ..s
        }
    } else {
        s
    }
}

pub fn angular_commutation_residual(l_max: u32, hbar: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        let ops = build_orbital(l, hbar);
        let comps = ops.components();
        let scale = hbar * hbar * (1.0 + l as f64).powi(2);
        for i in 0..3 {
            for j in 0..3 {
                let mut want = OperatorMatrix::zeros(ops.dim());
                for k in 0..3 {
                    want = &want + &comps[k].scale(c(0.0, hbar * epsilon3(i, j, k)));
                }
                worst = worst.max(comps[i].commutator(comps[j]).max_abs_diff(&want) / scale);
            }
        }
    }
    worst
}

pub fn kg_closed_vs_numeric(l_max: u32, p: &GyroParams) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        let mut closed: Vec<f64> = kg_lines_symmetric(l, p)?.iter().map(|x| x.energy).collect();
        let mut numeric: Vec<f64> = kg_energies_numeric(l, p)?.iter().map(|x| x.energy).collect();
        worst = worst.max(max_rel_sorted(&mut closed, &mut numeric));
    }
    Ok(worst)
}

fn numeric_dirac(l: u32, p: &DiracGyroParams) -> Result<Vec<f64>> {
    Ok(eig_hermitian(&build_dirac_hamiltonian(l, p)?)?.eigenvalues)
}

/// Spherical formula with multiplicity `2j + 1` per sign.
pub fn dirac_spherical_vs_numeric(l_max: u32, p: &GyroParams) -> Result<f64> {
    let dp = DiracGyroParams::abelian(*p)?;
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        let j2s = if l == 0 { vec![1] } else { vec![2 * l + 1, 2 * l - 1] };
        let mut closed = Vec::new();
        for j2 in j2s {
            let (ep, em) = dirac_energy_spherical(l, j2, p)?;
            for _ in 0..=j2 {
                closed.push(ep);
                closed.push(em);
            }
        }
        worst = worst.max(max_rel_sorted(&mut closed, &mut numeric_dirac(l, &dp)?));
    }
    Ok(worst)
}

pub fn dirac_closed_vs_numeric(l_max: u32, p: &DiracGyroParams) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        let lines = closed_form_lines(l, p)?
            .ok_or_else(|| Error::InvalidParams("no closed form for these parameters".into()))?;
        let mut closed: Vec<f64> = lines.iter().map(|x| x.energy).collect();
        worst = worst.max(max_rel_sorted(&mut closed, &mut numeric_dirac(l, p)?));
    }
    Ok(worst)
}

/// Symmetric spectrum rebuilt from the literal discriminant sign.
pub fn dirac_printed_discriminant_vs_numeric(l_max: u32, p: &DiracGyroParams) -> Result<f64> {
    let mc2 = p.rest_energy();
    let cp = p.coupling();
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        let mut closed = Vec::new();
        for (mj2, b) in kinetic_labels(l) {
            let f = f_symmetric_with(l, mj2, b, &cp, DiscriminantSign::Printed)?;
            let e = (f * f + mc2 * mc2).sqrt();
            closed.extend([e, -e]);
        }
        worst = worst.max(max_rel_sorted(&mut closed, &mut numeric_dirac(l, p)?));
    }
    Ok(worst)
}

/// Symmetric closed form in the spherical limit against the spherical
/// formula, with `j` assigned by `mapping`.
pub fn branch_mapping_residual(l_max: u32, p: &GyroParams, mapping: fn(u32, u8) -> Option<u32>) -> Result<f64> {
    let dp = DiracGyroParams::abelian(*p)?;
    let mut worst: f64 = 0.0;
    for l in 1..=l_max {
        for (mj2, b) in kinetic_labels(l) {
            let Some(j2) = mapping(l, b) else {
                return Ok(f64::INFINITY);
            };
            let sym = dirac::dirac_energy_symmetric(l, mj2, b, &dp)?.plus.line.energy;
            let sph = dirac_energy_spherical(l, j2, p)?.0;
            worst = worst.max((sym - sph).abs() / sph);
        }
    }
    Ok(worst)
}

/// Largest relative spread of `E₊` over `m_j` at fixed `(l, branch)`.
pub fn spherical_mj_spread(l_max: u32, p: &GyroParams) -> Result<f64> {
    let dp = DiracGyroParams::abelian(*p)?;
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        for branch in [1u8, 2] {
            let e: Vec<f64> = kinetic_labels(l)
                .into_iter()
                .filter(|(_, b)| *b == branch)
                .map(|(m, b)| dirac::dirac_energy_symmetric(l, m, b, &dp).map(|x| x.plus.line.energy))
                .collect::<Result<_>>()?;
            if let (Some(lo), Some(hi)) = (
                e.iter().copied().reduce(f64::min),
                e.iter().copied().reduce(f64::max),
            ) {
                worst = worst.max((hi - lo) / hi);
            }
        }
    }
    Ok(worst)
}

pub fn nonabelian_vz_residual(l_max: u32, p: &GyroParams) -> Result<f64> {
    let dp = DiracGyroParams::nonabelian(*p, [0.0, 0.0, 1.0])?;
    let mc2 = p.rest_energy();
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        for (mj2, b) in kinetic_labels(l) {
            let lvl = dirac::dirac_energy_nonabelian(l, mj2, b, &dp)?;
            let want = (lvl.plus.kinetic_eigenvalue + mc2).abs();
            worst = worst.max((lvl.plus.line.energy - want).abs() / want.max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

/// `max |E_nonabelian(v = x̂) − E_abelian| / |E|` over closed forms.
pub fn nonabelian_v3_zero_residual(l_max: u32, p: &GyroParams) -> Result<f64> {
    let ab = DiracGyroParams::abelian(*p)?;
    let na = DiracGyroParams::nonabelian(*p, [1.0, 0.0, 0.0])?;
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        for (mj2, b) in kinetic_labels(l) {
            let x = dirac::dirac_energy_symmetric(l, mj2, b, &ab)?.plus.line.energy;
            let y = dirac::dirac_energy_nonabelian(l, mj2, b, &na)?.plus.line.energy;
            worst = worst.max((x - y).abs() / x);
        }
    }
    Ok(worst)
}

/// Residual of the literal `(1/E)(σ·v F + σ₃Mc²)|+⟩` spinor, and of the one used here.
pub fn nonabelian_spinor_residuals(f: f64, v: [f64; 3], mc2: f64) -> Result<(f64, f64)> {
    let e = nonabelian_energy(f, v[2], mc2);
    let [s1, s2, s3] = crate::operator_algebra::pauli();
    let h = &(&(&s1.scale_real(v[0] * f) + &s2.scale_real(v[1] * f)) + &s3.scale_real(v[2] * f)) + &s3.scale_real(mc2);
    let col = h.column(0);
    let n = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let printed = [col[0] / n, col[1] / n];
    let ours = spinor_chi_nonabelian(f, v, Sign::Plus, mc2)?;
    Ok((spinor_residual(f, v, mc2, e, &printed) / e, spinor_residual(f, v, mc2, e, &ours) / e))
}

pub fn squared_identity_residual(l_max: u32, p: &GyroParams, fault: FaultInjection) -> Result<f64> {
    let dp = DiracGyroParams::abelian(*p)?;
    let mut root = inertia_root(&dp);
    if fault.corrupt_inertia_root {
        root.entries[0][0] = root.entries[0][0].scale_real(1.05);
    }
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        let h = hamiltonian_from_root(l, p, &root)?;
        worst = worst.max(squared_residual_of(&h, l, p, SpinOrbitForm::Cofactor, SPIN_ORBIT_COEFFICIENT));
    }
    Ok(worst)
}

pub fn spectral_symmetry_residual(l_max: u32, p: &DiracGyroParams) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        let e = numeric_dirac(l, p)?;
        let n = e.len();
        let scale = e[n - 1].abs();
        for k in 0..n {
            worst = worst.max((e[k] + e[n - 1 - k]).abs() / scale);
        }
    }
    Ok(worst)
}

/// `max ‖[H, X]‖ / (‖H‖‖X‖)` for `X ∈ {L², J₃}` (abelian) or `K` (non-abelian).
pub fn commutator_residual(l_max: u32, p: &DiracGyroParams) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in 1..=l_max {
        let h = build_dirac_hamiltonian(l, p)?;
        let space = DiracSpace::new(l, p.base().hbar);
        let ops = match p.variant() {
            Variant::Abelian => vec![space.lsq(), space.j3()],
            Variant::NonAbelian { .. } => vec![space.lift_spin_orbital(&kinetic_operator(l, &p.coupling()))],
        };
        for x in ops {
            let r = h.commutator(&x).frobenius_norm() / (h.frobenius_norm() * x.frobenius_norm());
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

/// Worst violation of `−T²/(2Mc²)·1.01 ≤ E − Mc² − T ≤ 0`, in units of the
/// bound, for paired relativistic `E` and non-relativistic `T` lists.
fn taylor_violation(mc2: f64, mut energies: Vec<f64>, mut kinetic: Vec<f64>) -> f64 {
    energies.sort_by(f64::total_cmp);
    kinetic.sort_by(f64::total_cmp);
    if energies.len() != kinetic.len() {
        return f64::INFINITY;
    }
    // rounding of E near Mc² and of the eigenvalues
    let slack = 64.0 * f64::EPSILON * mc2;
    let mut worst: f64 = 0.0;
    for (e, t) in energies.into_iter().zip(kinetic) {
        let rem = e - mc2 - t;
        let bound = TAYLOR_FACTOR * t * t / (2.0 * mc2);
        let over = (rem - slack).max(0.0) + (-rem - bound - slack).max(0.0);
        worst = worst.max(over / bound.max(slack));
    }
    worst
}

pub fn kg_nonrelativistic(l_max: u32, p: &GyroParams) -> Result<f64> {
    let heavy = p.with_mass(p.mass * NR_SCALE);
    let mc2 = heavy.rest_energy();
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        let e: Vec<f64> = kg_energies_numeric(l, &heavy)?
            .iter()
            .filter(|x| x.labels.sign == Sign::Plus)
            .map(|x| x.energy)
            .collect();
        // ½ΣI⁻¹L² from its own matrix
        let ops = build_orbital(l, p.hbar);
        let mut rotor = OperatorMatrix::zeros(ops.dim());
        for (li, i) in ops.components().into_iter().zip(p.inertia) {
            rotor = &rotor + &li.matmul(li).scale_real(0.5 / i);
        }
        let t = eig_hermitian(&rotor)?.eigenvalues;
        worst = worst.max(taylor_violation(mc2, e, t));
    }
    Ok(worst)
}

pub fn dirac_nonrelativistic(l_max: u32, p: &GyroParams) -> Result<f64> {
    let heavy = p.with_mass(p.mass * NR_SCALE);
    let dp = DiracGyroParams::abelian(heavy)?;
    let mc2 = heavy.rest_energy();
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        let e: Vec<f64> = numeric_dirac(l, &dp)?.into_iter().filter(|x| *x > 0.0).collect();
        let t = eig_hermitian(&nonrelativistic_operator(l, p))?.eigenvalues;
        worst = worst.max(taylor_violation(mc2, e, t));
    }
    Ok(worst)
}

pub fn classical_nonrelativistic(p: &GyroParams, samples: usize, seed: u64) -> Result<f64> {
    let heavy = p.with_mass(p.mass * NR_SCALE);
    let mc2 = heavy.rest_energy();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let l = [0; 3].map(|_| rng.gen_range(-3.0..3.0) * p.hbar);
        let e = crate::covariant::classical_energy(l, &heavy)?;
        let t = 0.5 * l.iter().zip(p.inertia).map(|(l, i)| l * l / i).sum::<f64>();
        worst = worst.max(taylor_violation(mc2, vec![e], vec![t]));
    }
    Ok(worst)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CovariantSuite {
    pub jacobi: f64,
    pub w_dot_p: f64,
    pub b_dot_p: f64,
    pub rest_frame_b_squared: f64,
    pub mass_shell: f64,
    pub covariance: f64,
    pub boost_metric: f64,
}

/// Identity residuals over `count` random systems with `3 ≤ N ≤ n_max`,
/// each boosted by a random velocity below `max_speed`.
pub fn covariant_suite(count: usize, n_max: usize, max_speed: f64, seed: u64) -> Result<CovariantSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CovariantSuite::default();
    for _ in 0..count {
        let n = rng.gen_range(3..=n_max);
        let dir = [0; 3].map(|_| rng.gen_range(-1.0..1.0f64));
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        let speed = if max_speed > 0.0 { rng.gen_range(0.0..max_speed) } else { 0.0 };
        let v = dir.map(|x| x / norm * speed);
        let sys = random_system(&mut rng, n, 1.0, v)?;
        let r = identity_residuals(&sys)?;
        out.jacobi = out.jacobi.max(r.jacobi);
        out.w_dot_p = out.w_dot_p.max(r.w_dot_p);
        out.b_dot_p = out.b_dot_p.max(r.b_dot_p);
        out.rest_frame_b_squared = out.rest_frame_b_squared.max(r.rest_frame_b_squared);
        out.mass_shell = out.mass_shell.max(r.mass_shell);

        // compute-then-boost against boost-then-compute
        let lam = boost([0.3, -0.2, 0.4], 1.0)?;
        out.boost_metric = out.boost_metric.max(lam.metric_residual());
        let moved = sys.boosted(&lam);
        let body = covariant_body(&sys)?;
        let body_b = covariant_body(&moved)?;
        let w_t = body.pauli_lubanski.transformed(&lam);
        let dw = (body_b.pauli_lubanski - w_t).euclidean_norm() / w_t.euclidean_norm();
        let b_t = b_vector(&sys)?.transformed(&lam);
        let db = (b_vector(&moved)? - b_t).euclidean_norm() / b_t.euclidean_norm();
        let root = inverse_sqrt_inertia(&inertia_tensor_covariant(&body.centered, &body.velocity), &body.velocity, 1.0)?;
        let root_b = inverse_sqrt_inertia(
            &inertia_tensor_covariant(&body_b.centered, &body_b.velocity),
            &body_b.velocity,
            1.0,
        )?;
        let di = root_b.max_abs_diff(&root.boosted(&lam)) / root_b.frobenius_norm();
        out.covariance = out.covariance.max(dw).max(db).max(di);
    }
    Ok(out)
}

/// Spinning two-body system: its moment about the axis vanishes.
pub fn dumbbell() -> ParticleSystem {
    let on_shell = |px: f64, py: f64| FourVector::new((1.0 + px * px + py * py).sqrt(), px, py, 0.0);
    ParticleSystem::new(
        vec![1.0, 1.0],
        vec![FourVector::new(0.0, 1.0, 0.0, 0.0), FourVector::new(0.0, -1.0, 0.0, 0.0)],
        vec![on_shell(0.0, 0.3), on_shell(0.0, -0.3)],
        Units::Natural,
    )
    .expect("valid dumbbell")
}

fn single_particle_b(seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sys = random_system(&mut rng, 1, 2.0, [0.2, 0.1, 0.0])?;
    let jac = jacobi_transform(&sys);
    debug_assert!(jac.relative_positions.is_empty());
    let b = b_vector(&sys)?;
    let w = pauli_lubanski(&jac.momentum, &crate::covariant::angular_tensor(&sys.shifted(&jac.center)));
    Ok(b.euclidean_norm() + w.euclidean_norm())
}

pub fn run_validation(cfg: &RunConfig, fault: FaultInjection) -> ValidationReport {
    let p = cfg.params;
    let l = VALIDATION_L_MAX;
    let sym = symmetrized(&p);
    let obl = oblate(&p);
    let sph = spherical(&p);
    let mut checks = Vec::new();

    checks.push(Check::from_result(
        "eigensolver_reconstruction",
        DiracGyroParams::abelian(p).and_then(|dp| {
            let h = build_dirac_hamiltonian(l, &dp)?;
            let eig = eig_hermitian(&h)?;
            Ok((eig.max_residual(&h) / h.frobenius_norm()).max(eig.orthonormality_residual()))
        }),
        SPECTRUM_TOL,
    ));
    checks.push(Check::new(
        "angular_momentum_commutators",
        angular_commutation_residual(l, p.hbar),
        1e-12,
        Expectation::Pass,
    ));
    checks.push(Check::from_result("kg_closed_vs_numeric", kg_closed_vs_numeric(l, &sym), SPECTRUM_TOL));
    checks.push(Check::from_result(
        "dirac_spherical_vs_numeric",
        dirac_spherical_vs_numeric(l, &sph),
        SPECTRUM_TOL,
    ));
    checks.push(Check::from_result(
        "dirac_symmetric_vs_numeric",
        DiracGyroParams::abelian(obl).and_then(|dp| dirac_closed_vs_numeric(l, &dp)),
        SPECTRUM_TOL,
    ));
    checks.push(
        Check::expected_failure(
            "dirac_symmetric_printed_discriminant",
            DiracGyroParams::abelian(obl).and_then(|dp| dirac_printed_discriminant_vs_numeric(l, &dp)),
            SPECTRUM_TOL,
        )
        .with_detail("literal m_j^2 coefficient 4(c1'^2 - c3^2) is expected to disagree with diagonalization"),
    );
    checks.push(Check::from_result(
        "dirac_branch_mapping",
        branch_mapping_residual(l, &sph, spherical_j2_for_branch),
        SPECTRUM_TOL,
    ));
    checks.push(
        Check::expected_failure(
            "dirac_branch_mapping_printed",
            branch_mapping_residual(l, &sph, printed_j2_for_branch),
            SPECTRUM_TOL,
        )
        .with_detail("literal j = l + (-1)^i/2 is expected to swap the branches"),
    );
    checks.push(Check::from_result(
        "dirac_spherical_mj_independence",
        spherical_mj_spread(l, &sph),
        SPECTRUM_TOL,
    ));
    let mut vs = vec![[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.6, 0.0, 0.8]];
    if let (Some(v), super::config::VariantKind::Nonabelian) = (cfg.v, cfg.variant) {
        vs.push(v);
    }
    checks.push(Check::from_result(
        "dirac_nonabelian_vs_numeric",
        vs.iter().try_fold(0.0f64, |acc, v| {
            let dp = DiracGyroParams::nonabelian(obl, *v)?;
            Ok(acc.max(dirac_closed_vs_numeric(l, &dp)?))
        }),
        SPECTRUM_TOL,
    ));
    checks.push(Check::from_result(
        "dirac_nonabelian_v3_zero_matches_abelian",
        nonabelian_v3_zero_residual(l, &obl),
        1e-15,
    ));
    checks.push(Check::from_result("dirac_nonabelian_vz_perfect_square", nonabelian_vz_residual(l, &obl), 1e-12));
    let spinors = nonabelian_spinor_residuals(1.0, [0.6, 0.0, 0.8], 1.0);
    checks.push(Check::from_result(
        "dirac_nonabelian_spinor",
        spinors.clone().map(|(_, ours)| ours),
        1e-12,
    ));
    checks.push(
        Check::expected_failure(
            "dirac_nonabelian_spinor_printed",
            spinors.map(|(printed, _)| printed),
            1e-12,
        )
        .with_detail("(1/E)(sigma.v F + sigma3 Mc^2)|+> is expected not to be an eigenvector"),
    );

    let squared = [p, GyroParams { inertia: [1.0, 2.0, 3.0], ..p }];
    checks.push(Check::from_result(
        "squared_hamiltonian_identity",
        squared
            .iter()
            .try_fold(0.0f64, |acc, q| Ok(acc.max(squared_identity_residual(SQUARED_L_MAX, q, fault)?))),
        SQUARED_TOL,
    ));
    let fit = DiracGyroParams::abelian(squared[1]).and_then(|dp| {
        let h = build_dirac_hamiltonian(2, &dp)?;
        Ok(fit_spin_orbit(&h, 2, &squared[1], SpinOrbitForm::Cofactor))
    });
    let k = fit.as_ref().ok().and_then(|f| f.coefficient);
    checks.push(
        Check::from_result(
            "spin_orbit_coefficient_fit",
            fit.map(|f| f.coefficient.map_or(f64::INFINITY, |k| (k - SPIN_ORBIT_COEFFICIENT).abs())),
            1e-10,
        )
        .with_value(k),
    );
    checks.push(
        Check::expected_failure(
            "squared_hamiltonian_printed_form",
            DiracGyroParams::abelian(squared[1]).and_then(|dp| {
                let h = build_dirac_hamiltonian(2, &dp)?;
                Ok(squared_residual_of(&h, 2, &squared[1], SpinOrbitForm::Diagonal, 1.0))
            }),
            SQUARED_TOL,
        )
        .with_detail("-Mc^2 sum I_i^-1 L_i S_i is expected to fail for I1 != I3"),
    );
    checks.push(Check::from_result(
        "dirac_spectral_symmetry",
        DiracGyroParams::abelian(p).and_then(|dp| spectral_symmetry_residual(l, &dp)),
        SPECTRUM_TOL,
    ));
    checks.push(Check::from_result(
        "dirac_symmetric_commutators",
        DiracGyroParams::abelian(obl).and_then(|dp| commutator_residual(l, &dp)),
        1e-11,
    ));
    checks.push(Check::from_result(
        "dirac_nonabelian_commutes_with_k",
        DiracGyroParams::nonabelian(obl, [0.6, 0.0, 0.8]).and_then(|dp| commutator_residual(l, &dp)),
        1e-11,
    ));
    checks.push(Check::from_result("kg_nonrelativistic_limit", kg_nonrelativistic(l, &p), 1.0));
    checks.push(Check::from_result("dirac_nonrelativistic_limit", dirac_nonrelativistic(l, &p), 1.0));
    checks.push(Check::from_result(
        "classical_nonrelativistic_limit",
        classical_nonrelativistic(&p, 1000, 7),
        1.0,
    ));

    let rest = covariant_suite(COVARIANT_SYSTEMS, COVARIANT_N_MAX, 0.0, 11);
    let moving = covariant_suite(COVARIANT_SYSTEMS, COVARIANT_N_MAX, 0.9, 12);
    type Pick = fn(&CovariantSuite) -> f64;
    let picks: [(&str, Pick, f64, f64); 7] = [
        ("jacobi_identity", |s| s.jacobi, 1e-12, 1e-12),
        ("w_dot_p", |s| s.w_dot_p, 1e-10, 1e-9),
        ("b_dot_p", |s| s.b_dot_p, 1e-10, 1e-9),
        ("rest_frame_b_squared", |s| s.rest_frame_b_squared, 1e-10, 1e-9),
        ("mass_shell", |s| s.mass_shell, 1e-10, 1e-9),
        ("frame_covariance", |s| s.covariance, 1e-9, 1e-9),
        ("boost_metric", |s| s.boost_metric, 1e-12, 1e-12),
    ];
    for (name, pick, tol_rest, tol_moving) in picks {
        checks.push(Check::from_result(
            &format!("covariant_{name}"),
            rest.as_ref().map(pick).map_err(Clone::clone),
            tol_rest,
        ));
        checks.push(Check::from_result(
            &format!("covariant_{name}_boosted"),
            moving.as_ref().map(pick).map_err(Clone::clone),
            tol_moving,
        ));
    }
    checks.push(Check::from_result("covariant_single_particle_b_zero", single_particle_b(5), 0.0));
    checks.push(Check::expected_error("covariant_dumbbell_degenerate", b_vector(&dumbbell()), |e| {
        matches!(e, Error::DegenerateInertia { .. })
    }));

    let all_pass = checks.iter().all(|c| c.pass);
    ValidationReport {
        params: p,
        checks,
        conventions: Conventions {
            ladder: "plain: L± = L1 ± iL2 reproduces the Hamiltonian with c1 = (c/ħ)√(M/I1), c3 = (2c/ħ)√(M/I3)"
                .into(),
            transverse_coupling: "c1' = 2·c1 in the √2-normalized convention; c1' = c3 is the spherical top".into(),
            discriminant: "m_j^2 coefficient 4(c3^2 − c1'^2); the literal 4(c1'^2 − c3^2) fails off the sphere"
                .into(),
            branch_mapping: "i = 1 ↔ j = l + 1/2, i = 2 ↔ j = l − 1/2".into(),
            spin_orbit: "−k·Mc² Σ_k (I_i I_j)^(−1/2) L_k S_k over the two other axes".into(),
            spin_orbit_coefficient: k,
            nonabelian_spinor: "χ± ∝ (h + E±)|+⟩, h = F σ·v + Mc² σ3".into(),
            inertia_sign: "I^μν = Σ m(η^μν r⊥² − r⊥^μ r⊥^ν), positive spatial block at rest".into(),
        },
        all_pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::Command;

    #[test]
    fn defaults_pass() {
        let report = run_validation(&RunConfig::defaults(Command::Validate), FaultInjection::default());
        for c in &report.checks {
            assert!(c.pass, "{c:?}");
        }
        assert!(report.all_pass);
        assert!((report.conventions.spin_orbit_coefficient.unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn corrupted_root_fails_squared_check() {
        let fault = FaultInjection {
            corrupt_inertia_root: true,
        };
        let report = run_validation(&RunConfig::defaults(Command::Validate), fault);
        let sq = report.checks.iter().find(|c| c.name == "squared_hamiltonian_identity").unwrap();
        assert!(!sq.pass);
        assert!(!report.all_pass);
    }
}
