//! Classical covariant kinematics of a free rigid system of point particles.
//!
//! Metric `η = diag(−1, +1, +1, +1)`. [`FourVector`] stores contravariant
//! components `x^μ` with `x⁰ = ct` for positions and `p⁰ = E/c` for momenta.
//! Rank-two tensors store upper indices and transform as `T → ΛTΛᵀ`.
//!
//! The covariant inertia tensor uses the sign that makes its rest-frame
//! spatial block positive:
//! `I^μν = Σ m (η^μν r⊥·r⊥ − r⊥^μ r⊥^ν)`, giving `Σ m(δ_ij r² − r_i r_j)` at rest.
//! `Ī` is the inverse square root on the subspace orthogonal to `u` and null
//! along `u`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kg_gyroscope::GyroParams;
use crate::operator_algebra::{eig_hermitian, OperatorMatrix};

pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;
/// Relative threshold on principal moments below which `Ī` is refused.
pub const INERTIA_DEGENERACY: f64 = 1e-10;

const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

pub type Mat4 = [[f64; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector([x0, x1, x2, x3])
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    /// `x_μ = η_μν x^ν`
    pub fn lower(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|m| ETA[m] * self.0[m])
    }

    pub fn scale(&self, s: f64) -> Self {
        FourVector(self.0.map(|x| x * s))
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn transformed(&self, lambda: &LorentzMatrix) -> Self {
        FourVector(mat_vec(&lambda.0, &self.0))
    }
}

impl std::ops::Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector([0, 1, 2, 3].map(|m| self.0[m] + o.0[m]))
    }
}

impl std::ops::Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector([0, 1, 2, 3].map(|m| self.0[m] - o.0[m]))
    }
}

/// `a·b = −a⁰b⁰ + a¹b¹ + a²b² + a³b³`
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    (0..4).map(|m| ETA[m] * a.0[m] * b.0[m]).sum()
}

fn mat_vec(m: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    [0, 1, 2, 3].map(|i| (0..4).map(|j| m[i][j] * v[j]).sum())
}

fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn transpose(a: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

fn eta_matrix() -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for m in 0..4 {
        out[m][m] = ETA[m];
    }
    out
}

fn frobenius(a: &Mat4) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Active transformation `x^μ → Λ^μ_ν x^ν`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMatrix(pub Mat4);

impl LorentzMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LorentzMatrix(m)
    }

    pub fn compose(&self, other: &LorentzMatrix) -> Self {
        LorentzMatrix(mat_mul(&self.0, &other.0))
    }

    /// `max |ΛᵀηΛ − η|`
    pub fn metric_residual(&self) -> f64 {
        let eta = eta_matrix();
        let m = mat_mul(&transpose(&self.0), &mat_mul(&eta, &self.0));
        max_abs_diff(&m, &eta)
    }
}

/// Pure boost giving a body at rest the velocity `v` (units of `c`).
pub fn boost(v: [f64; 3], c: f64) -> Result<LorentzMatrix> {
    let beta = v.map(|x| x / c);
    let b2: f64 = beta.iter().map(|x| x * x).sum();
    let speed = b2.sqrt();
    if !speed.is_finite() || speed >= 1.0 - 1e-12 {
        return Err(Error::SuperluminalVelocity {
            speed: speed * c,
            c,
        });
    }
    let gamma = 1.0 / (1.0 - b2).sqrt();
    let mut m = LorentzMatrix::identity().0;
    m[0][0] = gamma;
    for i in 0..3 {
        m[0][i + 1] = gamma * beta[i];
        m[i + 1][0] = gamma * beta[i];
        for j in 0..3 {
            // (γ−1)β_iβ_j/β² written as γ²β_iβ_j/(γ+1) to stay finite at β → 0
            m[i + 1][j + 1] += gamma * gamma / (gamma + 1.0) * beta[i] * beta[j];
        }
    }
    Ok(LorentzMatrix(m))
}

/// Boost taking the timelike unit `u` to `(1, 0, 0, 0)`.
pub fn rest_frame_boost(u: &FourVector, c: f64) -> Result<LorentzMatrix> {
    let v = u.spatial().map(|x| -x * c / u.0[0]);
    boost(v, c)
}

/// Rank-two tensor with upper indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovariantTensor2 {
    pub components: Mat4,
    pub symmetric: bool,
}

impl CovariantTensor2 {
    pub fn zeros(symmetric: bool) -> Self {
        Self {
            components: [[0.0; 4]; 4],
            symmetric,
        }
    }

    pub fn metric() -> Self {
        Self {
            components: eta_matrix(),
            symmetric: true,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.components)
    }

    /// `max |T^μν − T^νμ|`
    pub fn symmetry_residual(&self) -> f64 {
        max_abs_diff(&self.components, &transpose(&self.components))
    }

    /// `max |T^μν + T^νμ|`
    pub fn antisymmetry_residual(&self) -> f64 {
        let t = transpose(&self.components);
        self.components
            .iter()
            .flatten()
            .zip(t.iter().flatten())
            .map(|(a, b)| (a + b).abs())
            .fold(0.0, f64::max)
    }

    pub fn boosted(&self, lambda: &LorentzMatrix) -> Self {
        Self {
            components: mat_mul(&lambda.0, &mat_mul(&self.components, &transpose(&lambda.0))),
            symmetric: self.symmetric,
        }
    }

    /// `T^μν η_νρ x^ρ`
    pub fn contract(&self, x: &FourVector) -> FourVector {
        FourVector(mat_vec(&self.components, &x.lower()))
    }

    /// `(T η S)^μν`
    pub fn chain(&self, other: &CovariantTensor2) -> CovariantTensor2 {
        let lowered = mat_mul(&eta_matrix(), &other.components);
        CovariantTensor2 {
            components: mat_mul(&self.components, &lowered),
            symmetric: false,
        }
    }

    pub fn max_abs_diff(&self, other: &CovariantTensor2) -> f64 {
        max_abs_diff(&self.components, &other.components)
    }

    /// Spatial 3×3 block.
    pub fn spatial(&self) -> [[f64; 3]; 3] {
        [0, 1, 2].map(|i| [0, 1, 2].map(|j| self.components[i + 1][j + 1]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Natural,
    Si,
}

impl Units {
    pub fn c(self) -> f64 {
        match self {
            Units::Natural => 1.0,
            Units::Si => SPEED_OF_LIGHT_SI,
        }
    }
}

/// Free particles; gauge potentials are identically zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct ParticleSystem {
    pub masses: Vec<f64>,
    pub positions: Vec<FourVector>,
    pub momenta: Vec<FourVector>,
    #[serde(default)]
    pub units: Units,
}

#[derive(Deserialize)]
struct RawSystem {
    masses: Vec<f64>,
    positions: Vec<FourVector>,
    momenta: Vec<FourVector>,
    #[serde(default)]
    units: Units,
}

impl TryFrom<RawSystem> for ParticleSystem {
    type Error = Error;
    fn try_from(raw: RawSystem) -> Result<Self> {
        ParticleSystem::new(raw.masses, raw.positions, raw.momenta, raw.units)
    }
}

impl ParticleSystem {
    pub fn new(masses: Vec<f64>, positions: Vec<FourVector>, momenta: Vec<FourVector>, units: Units) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidParams("a particle system needs at least one particle".into()));
        }
        if positions.len() != masses.len() || momenta.len() != masses.len() {
            return Err(Error::InvalidParams(format!(
                "{} masses, {} positions, {} momenta",
                masses.len(),
                positions.len(),
                momenta.len()
            )));
        }
        if masses.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(Error::InvalidParams("masses must be finite and positive".into()));
        }
        if positions.iter().chain(&momenta).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("four-vector components must be finite".into()));
        }
        Ok(Self {
            masses,
            positions,
            momenta,
            units,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("system", e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn c(&self) -> f64 {
        self.units.c()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn gauge_potentials(&self) -> Vec<FourVector> {
        vec![FourVector::ZERO; self.len()]
    }

    /// `π = p − A`
    pub fn mechanical_momenta(&self) -> Vec<FourVector> {
        self.momenta.iter().zip(self.gauge_potentials()).map(|(p, a)| *p - a).collect()
    }

    pub fn boosted(&self, lambda: &LorentzMatrix) -> Self {
        Self {
            masses: self.masses.clone(),
            positions: self.positions.iter().map(|x| x.transformed(lambda)).collect(),
            momenta: self.momenta.iter().map(|x| x.transformed(lambda)).collect(),
            units: self.units,
        }
    }

    pub fn shifted(&self, origin: &FourVector) -> Self {
        Self {
            positions: self.positions.iter().map(|x| *x - *origin).collect(),
            ..self.clone()
        }
    }
}

/// Orthogonal `N×N` particle-space matrix: rows `0..N−1` are the relative
/// coordinates, the last row the center.
pub fn jacobi_matrix(n: usize) -> Vec<Vec<f64>> {
    let mut g = vec![vec![0.0; n]; n];
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        for entry in g[l - 1].iter_mut().take(l) {
            *entry = norm;
        }
        g[l - 1][l] = -(l as f64) * norm;
    }
    let w = 1.0 / (n as f64).sqrt();
    g[n - 1].iter_mut().for_each(|x| *x = w);
    g
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiCoordinates {
    pub center: FourVector,
    pub momentum: FourVector,
    pub relative_positions: Vec<FourVector>,
    pub relative_momenta: Vec<FourVector>,
}

fn combine(rows: &[Vec<f64>], xs: &[FourVector]) -> Vec<FourVector> {
    rows.iter()
        .map(|row| row.iter().zip(xs).fold(FourVector::ZERO, |acc, (w, x)| acc + x.scale(*w)))
        .collect()
}

/// Mass-weighted Jacobi transform: `q = √(m/M) r`, `p̃ = √(M/m) p`, then the
/// orthogonal [`jacobi_matrix`].
pub fn jacobi_transform(sys: &ParticleSystem) -> JacobiCoordinates {
    let m_tot = sys.total_mass();
    let q: Vec<FourVector> = sys
        .positions
        .iter()
        .zip(&sys.masses)
        .map(|(r, m)| r.scale((m / m_tot).sqrt()))
        .collect();
    let pt: Vec<FourVector> = sys
        .mechanical_momenta()
        .iter()
        .zip(&sys.masses)
        .map(|(p, m)| p.scale((m_tot / m).sqrt()))
        .collect();
    let g = jacobi_matrix(sys.len());
    let mut rq = combine(&g, &q);
    let mut rp = combine(&g, &pt);
    let center = rq.pop().expect("N >= 1");
    let momentum = rp.pop().expect("N >= 1");
    JacobiCoordinates {
        center,
        momentum,
        relative_positions: rq,
        relative_momenta: rp,
    }
}

/// `|Σ (M/m) π·π − P·P − Σ ṗ·ṗ|`, relative to the Euclidean size of the first sum.
pub fn jacobi_identity_residual(sys: &ParticleSystem) -> f64 {
    let m_tot = sys.total_mass();
    let pi = sys.mechanical_momenta();
    let mut lhs = 0.0;
    let mut scale = 0.0;
    for (p, m) in pi.iter().zip(&sys.masses) {
        lhs += m_tot / m * minkowski_dot(p, p);
        scale += m_tot / m * p.euclidean_norm().powi(2);
    }
    let jac = jacobi_transform(sys);
    let rhs: f64 = minkowski_dot(&jac.momentum, &jac.momentum)
        + jac.relative_momenta.iter().map(|p| minkowski_dot(p, p)).sum::<f64>();
    if scale == 0.0 {
        return 0.0;
    }
    (lhs - rhs).abs() / scale
}

/// `u = P/√(−P·P)` (contravariant; `u_μ = (−1, 0, 0, 0)` at rest).
pub fn four_velocity(p: &FourVector) -> Result<FourVector> {
    let norm = minkowski_dot(p, p);
    if !(norm < 0.0) {
        return Err(Error::NotTimelike { norm });
    }
    let u = p.scale(1.0 / (-norm).sqrt());
    // future-pointing
    Ok(if u.0[0] < 0.0 { u.scale(-1.0) } else { u })
}

/// `x⊥ = x + u (u·x)`, the part of `x` orthogonal to `u` (for `u·u = −1`).
pub fn transverse_project(x: &FourVector, u: &FourVector) -> FourVector {
    *x + u.scale(minkowski_dot(u, x))
}

/// `I^μν = Σ m (η^μν r⊥·r⊥ − r⊥^μ r⊥^ν)` over the given positions.
pub fn inertia_tensor_covariant(sys: &ParticleSystem, u: &FourVector) -> CovariantTensor2 {
    let mut out = CovariantTensor2::zeros(true);
    let eta = eta_matrix();
    for (r, m) in sys.positions.iter().zip(&sys.masses) {
        let rp = transverse_project(r, u);
        let r2 = minkowski_dot(&rp, &rp);
        for mu in 0..4 {
            for nu in 0..4 {
                out.components[mu][nu] += m * (eta[mu][nu] * r2 - rp.0[mu] * rp.0[nu]);
            }
        }
    }
    out
}

/// Real symmetric 3×3 eigen-decomposition, ascending; columns of the second
/// value are the eigenvectors.
pub fn symmetric_eigen3(s: &[[f64; 3]; 3]) -> Result<([f64; 3], [[f64; 3]; 3])> {
    let rows: Vec<&[f64]> = s.iter().map(|r| r.as_slice()).collect();
    let eig = eig_hermitian(&OperatorMatrix::from_real_rows(&rows))?;
    let mut axes = [[0.0; 3]; 3];
    for k in 0..3 {
        let v = eig.eigenvector(k);
        // fix the phase so the largest component is real and positive
        let big = v.iter().copied().fold(v[0], |a, b| if b.norm() > a.norm() { b } else { a });
        let phase = big.conj() / big.norm();
        for i in 0..3 {
            axes[i][k] = (v[i] * phase).re;
        }
    }
    Ok(([eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]], axes))
}

/// Inverse square root of `I` orthogonal to `u`, null along `u`.
pub fn inverse_sqrt_inertia(inertia: &CovariantTensor2, u: &FourVector, c: f64) -> Result<CovariantTensor2> {
    let to_rest = rest_frame_boost(u, c)?;
    let back = boost(u.spatial().map(|x| x * c / u.0[0]), c)?;
    let rest = inertia.boosted(&to_rest);
    let s = rest.spatial();
    let (moments, axes) = symmetric_eigen3(&s)?;
    let threshold = INERTIA_DEGENERACY * rest.frobenius_norm();
    if let Some(&bad) = moments.iter().find(|&&m| !(m > threshold)) {
        return Err(Error::DegenerateInertia { moment: bad, threshold });
    }
    let mut root = CovariantTensor2::zeros(true);
    for i in 0..3 {
        for j in 0..3 {
            root.components[i + 1][j + 1] = (0..3).map(|k| axes[i][k] * axes[j][k] / moments[k].sqrt()).sum();
        }
    }
    Ok(root.boosted(&back))
}

fn wedge_sum(rs: &[FourVector], ps: &[FourVector]) -> CovariantTensor2 {
    let mut out = CovariantTensor2::zeros(false);
    for (r, p) in rs.iter().zip(ps) {
        for mu in 0..4 {
            for nu in 0..4 {
                out.components[mu][nu] += r.0[mu] * p.0[nu] - r.0[nu] * p.0[mu];
            }
        }
    }
    out
}

/// `M^μν = Σ r^μ p^ν − r^ν p^μ` over particles.
pub fn angular_tensor(sys: &ParticleSystem) -> CovariantTensor2 {
    wedge_sum(&sys.positions, &sys.mechanical_momenta())
}

/// `M^μν` from Jacobi variables, all `N` terms.
pub fn angular_tensor_jacobi(sys: &ParticleSystem) -> CovariantTensor2 {
    let jac = jacobi_transform(sys);
    let mut rs = jac.relative_positions.clone();
    let mut ps = jac.relative_momenta.clone();
    rs.push(jac.center);
    ps.push(jac.momentum);
    wedge_sum(&rs, &ps)
}

/// `M^μν` from the relative Jacobi variables only (the center term dropped).
pub fn angular_tensor_relative(sys: &ParticleSystem) -> CovariantTensor2 {
    let jac = jacobi_transform(sys);
    wedge_sum(&jac.relative_positions, &jac.relative_momenta)
}

/// Levi-Civita symbol with lower indices, `ε_0123 = 1`.
pub fn epsilon4(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let idx = [a, b, c, d];
    let mut sign = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] == idx[j] {
                return 0.0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `W^μ = η^μα (−½ ε_ανσρ P^ν M^σρ)`
pub fn pauli_lubanski(p: &FourVector, m: &CovariantTensor2) -> FourVector {
    let mut lower = [0.0; 4];
    for (alpha, w) in lower.iter_mut().enumerate() {
        for nu in 0..4 {
            for sigma in 0..4 {
                for rho in 0..4 {
                    *w -= 0.5 * epsilon4(alpha, nu, sigma, rho) * p.0[nu] * m.components[sigma][rho];
                }
            }
        }
    }
    FourVector([0, 1, 2, 3].map(|a| ETA[a] * lower[a]))
}

/// Quantities the covariant construction is assembled from.
#[derive(Clone, Debug, PartialEq)]
pub struct CovariantBody {
    pub momentum: FourVector,
    pub velocity: FourVector,
    /// Positions relative to the Jacobi center.
    pub centered: ParticleSystem,
    pub angular: CovariantTensor2,
    pub pauli_lubanski: FourVector,
}

pub fn covariant_body(sys: &ParticleSystem) -> Result<CovariantBody> {
    let jac = jacobi_transform(sys);
    let velocity = four_velocity(&jac.momentum)?;
    let centered = sys.shifted(&jac.center);
    let angular = angular_tensor(&centered);
    let w = pauli_lubanski(&jac.momentum, &angular);
    Ok(CovariantBody {
        momentum: jac.momentum,
        velocity,
        centered,
        angular,
        pauli_lubanski: w,
    })
}

/// `B^μ = √(M/(−P·P)) Ī^μρ W_ρ`
pub fn b_vector(sys: &ParticleSystem) -> Result<FourVector> {
    let body = covariant_body(sys)?;
    let w = body.pauli_lubanski;
    let scale = body.momentum.euclidean_norm() * body.angular.frobenius_norm();
    // no intrinsic angular momentum: B vanishes regardless of Ī
    if w.euclidean_norm() <= 1e-15 * scale {
        return Ok(FourVector::ZERO);
    }
    let inertia = inertia_tensor_covariant(&body.centered, &body.velocity);
    let root = inverse_sqrt_inertia(&inertia, &body.velocity, sys.c())?;
    let p2 = minkowski_dot(&body.momentum, &body.momentum);
    Ok(root.contract(&w).scale((sys.total_mass() / -p2).sqrt()))
}

/// Rest-frame 3-vector description: principal moments and axes of
/// `Σ m(δ r² − r r)`, and angular momentum `Σ r × p` in both lab-rest and
/// principal-axis components.
#[derive(Clone, Debug, PartialEq)]
pub struct RestFrameBody {
    pub moments: [f64; 3],
    pub axes: [[f64; 3]; 3],
    pub angular_momentum: [f64; 3],
    pub angular_momentum_body: [f64; 3],
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn rest_frame_body(sys: &ParticleSystem) -> Result<RestFrameBody> {
    let jac = jacobi_transform(sys);
    let u = four_velocity(&jac.momentum)?;
    let rest = sys.shifted(&jac.center).boosted(&rest_frame_boost(&u, sys.c())?);
    let mut inertia = [[0.0; 3]; 3];
    let mut l = [0.0; 3];
    for ((r, p), m) in rest.positions.iter().zip(rest.mechanical_momenta()).zip(&rest.masses) {
        let r = r.spatial();
        let r2: f64 = r.iter().map(|x| x * x).sum();
        for i in 0..3 {
            for j in 0..3 {
                inertia[i][j] += m * (if i == j { r2 } else { 0.0 } - r[i] * r[j]);
            }
        }
        let lr = cross(r, p.spatial());
        for i in 0..3 {
            l[i] += lr[i];
        }
    }
    let (moments, axes) = symmetric_eigen3(&inertia)?;
    let body = [0, 1, 2].map(|k| (0..3).map(|i| axes[i][k] * l[i]).sum());
    Ok(RestFrameBody {
        moments,
        axes,
        angular_momentum: l,
        angular_momentum_body: body,
    })
}

/// `E = √(Mc² Σ I_i⁻¹ L_i² + (Mc²)²)`
pub fn classical_energy(l_body: [f64; 3], params: &GyroParams) -> Result<f64> {
    params.validate()?;
    let mc2 = params.rest_energy();
    let rotor: f64 = l_body.iter().zip(params.inertia).map(|(l, i)| l * l / i).sum();
    Ok((mc2 * rotor + mc2 * mc2).sqrt())
}

/// `M Σ I_i⁻¹ L_i²`; axes carrying no angular momentum are skipped so a
/// zero moment only matters when it is actually excited.
fn rotor_quadratic_form(body: &RestFrameBody, mass: f64) -> Result<f64> {
    let threshold = INERTIA_DEGENERACY * body.moments.iter().map(|m| m * m).sum::<f64>().sqrt();
    let l_norm = body.angular_momentum.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut sum = 0.0;
    for (l, i) in body.angular_momentum_body.iter().zip(body.moments) {
        if l.abs() <= 1e-14 * l_norm {
            continue;
        }
        if !(i > threshold) {
            return Err(Error::DegenerateInertia { moment: i, threshold });
        }
        sum += l * l / i;
    }
    Ok(mass * sum)
}

/// Classical energy of the system from its rest-frame principal description.
pub fn system_energy(sys: &ParticleSystem) -> Result<f64> {
    let body = rest_frame_body(sys)?;
    let m = sys.total_mass();
    let c = sys.c();
    let l_scale = sys
        .positions
        .iter()
        .zip(&sys.momenta)
        .map(|(r, p)| r.euclidean_norm() * p.euclidean_norm())
        .sum::<f64>();
    if body.angular_momentum_body.iter().all(|l| l.abs() <= 1e-15 * l_scale) {
        return Ok(m * c * c);
    }
    let params = GyroParams::new(1.0, c, m, body.moments)?;
    classical_energy(body.angular_momentum_body, &params)
}

/// `B·B` and `M Σ I_i⁻¹ L_i²` (rest-frame 3-vector route).
pub fn rest_frame_reduction(sys: &ParticleSystem) -> Result<(f64, f64)> {
    let b = b_vector(sys)?;
    let body = rest_frame_body(sys)?;
    let direct = rotor_quadratic_form(&body, sys.total_mass())?;
    Ok((minkowski_dot(&b, &b), direct))
}

/// `|(P+B)·(P+B) + (Mc)²| / (Mc)²` with `P = (E/c) u`.
pub fn mass_shell_residual(sys: &ParticleSystem) -> Result<f64> {
    let c = sys.c();
    let m = sys.total_mass();
    let body = covariant_body(sys)?;
    let b = b_vector(sys)?;
    let e = system_energy(sys)?;
    let p = body.velocity.scale(e / c);
    let total = p + b;
    let mc = m * c;
    Ok((minkowski_dot(&total, &total) + mc * mc).abs() / (mc * mc))
}

/// Residuals of every invariant for one system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub jacobi: f64,
    pub w_dot_p: f64,
    pub b_dot_p: f64,
    pub rest_frame_b_squared: f64,
    pub mass_shell: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        [self.jacobi, self.w_dot_p, self.b_dot_p, self.rest_frame_b_squared, self.mass_shell]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn identity_residuals(sys: &ParticleSystem) -> Result<IdentityResiduals> {
    let body = covariant_body(sys)?;
    let p = body.momentum;
    let w = body.pauli_lubanski;
    let b = b_vector(sys)?;
    let pn = p.euclidean_norm();
    let w_dot_p = minkowski_dot(&w, &p).abs() / (pn * w.euclidean_norm()).max(f64::MIN_POSITIVE);
    let b_dot_p = minkowski_dot(&b, &p).abs() / (pn * b.euclidean_norm()).max(f64::MIN_POSITIVE);
    let (bb, direct) = rest_frame_reduction(sys)?;
    let rest_frame_b_squared = (bb - direct).abs() / direct.abs().max(f64::MIN_POSITIVE);
    Ok(IdentityResiduals {
        jacobi: jacobi_identity_residual(sys),
        w_dot_p,
        b_dot_p,
        rest_frame_b_squared: if direct == 0.0 { bb.abs() } else { rest_frame_b_squared },
        mass_shell: mass_shell_residual(sys)?,
    })
}

/// Random rigid-looking system: `N` particles spread over a box of size
/// `extent`, on-shell momenta, then boosted by `velocity` (units of `c`).
pub fn random_system<R: rand::Rng>(rng: &mut R, n: usize, extent: f64, velocity: [f64; 3]) -> Result<ParticleSystem> {
    let c = 1.0;
    let mut masses = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    let mut momenta = Vec::with_capacity(n);
    for _ in 0..n {
        let m = rng.gen_range(0.5..2.0);
        let x = [0; 3].map(|_| rng.gen_range(-extent..extent));
        let p = [0; 3].map(|_| rng.gen_range(-0.5..0.5) * m * c);
        let p0 = (m * m * c * c + p.iter().map(|q| q * q).sum::<f64>()).sqrt();
        masses.push(m);
        positions.push(FourVector::new(0.0, x[0], x[1], x[2]));
        momenta.push(FourVector::new(p0, p[0], p[1], p[2]));
    }
    let sys = ParticleSystem::new(masses, positions, momenta, Units::Natural)?;
    Ok(sys.boosted(&boost(velocity, c)?))
}
