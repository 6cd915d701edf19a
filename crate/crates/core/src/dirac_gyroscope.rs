//! Dirac gyroscope at the center of mass.
//!
//! The ground truth is the matrix Hamiltonian
//! `H = √M c Σ_ij α_i Ī_ij L_j + β₃Mc²` on (big/small) ⊗ (spin) ⊗ (orbital),
//! built from first principles. Two inertia roots are supported:
//!
//! - abelian: `Ī = diag(I₁^{-1/2}, I₂^{-1/2}, I₃^{-1/2})`,
//! - non-abelian (`I₁ = I₂`): `Ī = β₁(β·v̂) diag(I₁^{-1/2}, I₁^{-1/2}, I₃^{-1/2})`.
//!
//! For symmetric tops the Hamiltonian reduces to `β₁K + β₃Mc²` (abelian) or
//! `(β·v̂)K + β₃Mc²` (non-abelian) with
//! `K = c₁(S₊L₋ + S₋L₊) + c₃S₃L₃`, `c₁ = (c/ħ)√(M/I₁)`, `c₃ = (2c/ħ)√(M/I₃)`.
//! Expanding `H` shows that these couplings reproduce it exactly with *plain*
//! ladders `L± = L₁ ± iL₂`. In the √2-normalized convention the same operator
//! has transverse coupling `2c₁`, and only there is `c₁ = c₃` the spherical top.
//!
//! Closed forms implemented here and the conventions they were fixed with:
//!
//! - `K` eigenvalues on the `m_j` block `{|l,m_j−½⟩|↑⟩, |l,m_j+½⟩|↓⟩}`:
//!   `F = −(ħ²/4)[c₃ + (−1)^i √(c₃² + 4c₁'² l(l+1) + 4(c₃² − c₁'²)(m_j² − ¼))]`
//!   with `c₁'` the √2-convention coupling. The `m_j²` coefficient is
//!   `4(c₃² − c₁'²)`; the opposite sign disagrees with diagonalization away
//!   from the spherical point ([`DiscriminantSign::Printed`] keeps it for
//!   comparison).
//! - In the spherical limit branch `i = 1` is `j = l + ½` and `i = 2` is
//!   `j = l − ½`.
//! - `H² = Mc²[Σ I_i⁻¹L_i² − 2 Σ_k (I_i I_j)^{-1/2} L_k S_k] + M²c⁴` with
//!   `{i, j, k}` a permutation: the spin-orbit weight of axis `k` is the
//!   product of the other two inverse root moments and the coefficient is 2.
//! - Non-abelian spinors are `(h + E)|±⟩` normalized, `h = F σ·v̂ + Mc²σ₃`.

use serde::{Deserialize, Serialize};

use crate::angular_momentum::{
    build_dirac_blocks, build_orbital, ladder_from, spin_half, AngularOperators, DiracBlocks,
    LadderConvention, OrbitalBasis,
};
use crate::error::{Error, Result};
use crate::kg_gyroscope::{GyroParams, LineLabels, Sign, SpectralLine};
use crate::operator_algebra::{c, eig_hermitian, kron, pauli, OperatorMatrix, C64};

/// Spin-orbit coefficient obtained by expanding `H²` with `α_iα_j = δ_ij + (2i/ħ)ε_ijk S_k`.
pub const SPIN_ORBIT_COEFFICIENT: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Variant {
    Abelian,
    #[serde(rename = "nonabelian")]
    NonAbelian { v: [f64; 3] },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiracGyroParams {
    base: GyroParams,
    variant: Variant,
    c1: f64,
    c3: f64,
}

impl DiracGyroParams {
    pub fn abelian(base: GyroParams) -> Result<Self> {
        Self::new(base, Variant::Abelian)
    }

    pub fn nonabelian(base: GyroParams, v: [f64; 3]) -> Result<Self> {
        Self::new(base, Variant::NonAbelian { v })
    }

    pub fn new(base: GyroParams, variant: Variant) -> Result<Self> {
        base.validate()?;
        if let Variant::NonAbelian { v } = variant {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParams(format!("v must be a unit vector, |v| = {norm}")));
            }
            if !base.is_symmetric() {
                return Err(Error::NotSymmetric {
                    shape: "symmetric (I1 = I2)",
                    inertia: base.inertia,
                });
            }
        }
        let c1 = base.c / base.hbar * (base.mass / base.inertia[0]).sqrt();
        let c3 = 2.0 * base.c / base.hbar * (base.mass / base.inertia[2]).sqrt();
        Ok(Self {
            base,
            variant,
            c1,
            c3,
        })
    }

    pub fn base(&self) -> &GyroParams {
        &self.base
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `(c/ħ)√(M/I₁)`
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// `(2c/ħ)√(M/I₃)`
    pub fn c3(&self) -> f64 {
        self.c3
    }

    pub fn v(&self) -> Option<[f64; 3]> {
        match self.variant {
            Variant::Abelian => None,
            Variant::NonAbelian { v } => Some(v),
        }
    }

    pub fn rest_energy(&self) -> f64 {
        self.base.rest_energy()
    }

    pub fn coupling(&self) -> KineticCoupling {
        KineticCoupling {
            c1: self.c1,
            c3: self.c3,
            hbar: self.base.hbar,
            ladder: LadderConvention::Plain,
        }
    }
}

/// Operators of one `l` shell in the full Dirac-gyroscope space.
#[derive(Clone, Debug)]
pub struct DiracSpace {
    pub l: u32,
    pub blocks: DiracBlocks,
    pub orbital: AngularOperators,
}

impl DiracSpace {
    pub fn new(l: u32, hbar: f64) -> Self {
        Self {
            l,
            blocks: build_dirac_blocks(hbar),
            orbital: build_orbital(l, hbar),
        }
    }

    pub fn orbital_dim(&self) -> usize {
        self.orbital.dim()
    }

    pub fn dim(&self) -> usize {
        4 * self.orbital_dim()
    }

    /// `op ⊗ 1_orbital` for a 4×4 Dirac-space operator.
    pub fn lift_dirac(&self, op: &OperatorMatrix) -> OperatorMatrix {
        kron(op, &OperatorMatrix::identity(self.orbital_dim()))
    }

    /// `1₄ ⊗ op` for an orbital operator.
    pub fn lift_orbital(&self, op: &OperatorMatrix) -> OperatorMatrix {
        kron(&OperatorMatrix::identity(4), op)
    }

    /// `1₂ ⊗ op` for an operator on spin ⊗ orbital.
    pub fn lift_spin_orbital(&self, op: &OperatorMatrix) -> OperatorMatrix {
        kron(&OperatorMatrix::identity(2), op)
    }

    /// `J₃ = L₃ + S₃`
    pub fn j3(&self) -> OperatorMatrix {
        &self.lift_orbital(&self.orbital.l3) + &self.lift_dirac(&self.blocks.s[2])
    }

    pub fn lsq(&self) -> OperatorMatrix {
        self.lift_orbital(&self.orbital.lsq)
    }

    /// `Σ_k w_k L_k S_k`
    pub fn weighted_spin_orbit(&self, weights: [f64; 3]) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(self.dim());
        for k in 0..3 {
            let term = kron(&self.blocks.s[k], self.orbital.components()[k]);
            out = &out + &term.scale_real(weights[k]);
        }
        out
    }

    /// `Σ_i w_i L_i²`
    pub fn weighted_rotor(&self, weights: [f64; 3]) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(self.orbital_dim());
        for (li, w) in self.orbital.components().into_iter().zip(weights) {
            out = &out + &li.matmul(li).scale_real(w);
        }
        self.lift_orbital(&out)
    }
}

/// `Ī_ij` as 4×4 Dirac-space operators.
#[derive(Clone, Debug)]
pub struct InertiaRoot {
    pub entries: [[OperatorMatrix; 3]; 3],
}

impl InertiaRoot {
    /// `Ī_ij = δ_ij w_i · factor`
    pub fn diagonal(weights: [f64; 3], factor: &OperatorMatrix) -> Self {
        let entries = [0, 1, 2].map(|i| {
            [0, 1, 2].map(|j| {
                if i == j {
                    factor.scale_real(weights[i])
                } else {
                    OperatorMatrix::zeros(factor.dim())
                }
            })
        });
        Self { entries }
    }

    /// Largest entry of `Ī†Ī − I⁻¹ ⊗ 1₄`.
    pub fn inverse_residual(&self, inertia: [f64; 3]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let mut sum = OperatorMatrix::zeros(4);
                for k in 0..3 {
                    sum = &sum + &self.entries[k][i].adjoint().matmul(&self.entries[k][j]);
                }
                let want = if i == j { 1.0 / inertia[i] } else { 0.0 };
                worst = worst.max(sum.max_abs_diff(&OperatorMatrix::identity(4).scale_real(want)));
            }
        }
        worst
    }
}

pub fn inverse_root_moments(inertia: [f64; 3]) -> [f64; 3] {
    inertia.map(|i| 1.0 / i.sqrt())
}

/// The inertia root prescribed by the variant.
pub fn inertia_root(params: &DiracGyroParams) -> InertiaRoot {
    let weights = inverse_root_moments(params.base.inertia);
    let blocks = build_dirac_blocks(params.base.hbar);
    match params.variant {
        Variant::Abelian => InertiaRoot::diagonal(weights, &OperatorMatrix::identity(4)),
        Variant::NonAbelian { v } => {
            let factor = blocks.beta[0].matmul(&beta_dot(&blocks, v));
            InertiaRoot::diagonal(weights, &factor)
        }
    }
}

/// `β·v`
pub fn beta_dot(blocks: &DiracBlocks, v: [f64; 3]) -> OperatorMatrix {
    let mut out = OperatorMatrix::zeros(4);
    for (b, vi) in blocks.beta.iter().zip(v) {
        out = &out + &b.scale_real(vi);
    }
    out
}

/// `√M c Σ_ij α_i Ī_ij ⊗ L_j + β₃Mc²` for an arbitrary root.
pub fn hamiltonian_from_root(l: u32, base: &GyroParams, root: &InertiaRoot) -> Result<OperatorMatrix> {
    base.validate()?;
    let space = DiracSpace::new(l, base.hbar);
    let mut kinetic = OperatorMatrix::zeros(space.dim());
    for i in 0..3 {
        for j in 0..3 {
            let dirac = space.blocks.alpha[i].matmul(&root.entries[i][j]);
            if dirac.frobenius_norm() == 0.0 {
                continue;
            }
            kinetic = &kinetic + &kron(&dirac, space.orbital.components()[j]);
        }
    }
    let mass = space.lift_dirac(&space.blocks.mass_term).scale_real(base.rest_energy());
    Ok(&kinetic.scale_real(base.mass.sqrt() * base.c) + &mass)
}

/// The `4(2l+1)`-dimensional Hamiltonian.
pub fn build_dirac_hamiltonian(l: u32, params: &DiracGyroParams) -> Result<OperatorMatrix> {
    hamiltonian_from_root(l, &params.base, &inertia_root(params))
}

/// Couplings of `K = c₁(S₊L₋ + S₋L₊) + c₃S₃L₃` and the ladder normalization
/// `c₁` refers to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KineticCoupling {
    pub c1: f64,
    pub c3: f64,
    pub hbar: f64,
    pub ladder: LadderConvention,
}

impl KineticCoupling {
    /// Transverse coupling expressed for √2-normalized ladders.
    pub fn c1_sqrt2(&self) -> f64 {
        match self.ladder {
            LadderConvention::Sqrt2 => self.c1,
            LadderConvention::Plain => 2.0 * self.c1,
        }
    }
}

/// `K` on spin ⊗ orbital (dimension `2(2l+1)`).
pub fn kinetic_operator(l: u32, coupling: &KineticCoupling) -> OperatorMatrix {
    let orb = build_orbital(l, coupling.hbar);
    let spin = spin_half(coupling.hbar);
    let (lp, lm) = ladder_from(&orb.l1, &orb.l2, coupling.ladder);
    let (sp, sm) = ladder_from(&spin[0], &spin[1], coupling.ladder);
    let transverse = &kron(&sp, &lm) + &kron(&sm, &lp);
    let axial = kron(&spin[2], &orb.l3);
    &transverse.scale_real(coupling.c1) + &axial.scale_real(coupling.c3)
}

/// `β₁ ⊗ K + β₃Mc²` (abelian) or `(β·v) ⊗ K + β₃Mc²` (non-abelian).
///
/// Independent route to the symmetric-top Hamiltonian.
pub fn hamiltonian_from_kinetic(l: u32, params: &DiracGyroParams) -> Result<OperatorMatrix> {
    if !params.base.is_symmetric() {
        return Err(Error::NotSymmetric {
            shape: "symmetric (I1 = I2)",
            inertia: params.base.inertia,
        });
    }
    let k = kinetic_operator(l, &params.coupling());
    let [s1, s2, s3] = pauli();
    let front = match params.variant {
        Variant::Abelian => s1,
        Variant::NonAbelian { v } => &(&s1.scale_real(v[0]) + &s2.scale_real(v[1])) + &s3.scale_real(v[2]),
    };
    let mass = kron(&s3, &OperatorMatrix::identity(k.dim())).scale_real(params.rest_energy());
    Ok(&kron(&front, &k) + &mass)
}

/// Which spin-orbit weights multiply `L_k S_k` in the squared-Hamiltonian identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinOrbitForm {
    /// `I_k⁻¹`, the literal diagonal weights.
    Diagonal,
    /// `(I_i I_j)^{-1/2}` over the two other axes.
    Cofactor,
}

impl SpinOrbitForm {
    pub fn weights(self, inertia: [f64; 3]) -> [f64; 3] {
        match self {
            SpinOrbitForm::Diagonal => inertia.map(|i| 1.0 / i),
            SpinOrbitForm::Cofactor => {
                let r = inverse_root_moments(inertia);
                [r[1] * r[2], r[0] * r[2], r[0] * r[1]]
            }
        }
    }
}

/// `Mc²ΣI_i⁻¹L_i² − k·Mc²Σ w_k L_k S_k + M²c⁴`
pub fn squared_hamiltonian_reference(l: u32, base: &GyroParams, form: SpinOrbitForm, k: f64) -> OperatorMatrix {
    let space = DiracSpace::new(l, base.hbar);
    let mc2 = base.rest_energy();
    let rotor = space.weighted_rotor(base.inertia.map(|i| 1.0 / i));
    let so = space.weighted_spin_orbit(form.weights(base.inertia));
    let rest = OperatorMatrix::identity(space.dim()).scale_real(mc2 * mc2);
    &(&rotor.scale_real(mc2) - &so.scale_real(k * mc2)) + &rest
}

/// `‖H² − reference‖_F / ‖H²‖_F` for a given Hamiltonian.
pub fn squared_residual_of(h: &OperatorMatrix, l: u32, base: &GyroParams, form: SpinOrbitForm, k: f64) -> f64 {
    let h2 = h.matmul(h);
    let reference = squared_hamiltonian_reference(l, base, form, k);
    (&h2 - &reference).frobenius_norm() / h2.frobenius_norm().max(f64::MIN_POSITIVE)
}

/// Squared-Hamiltonian identity residual with the cofactor weights and
/// coefficient [`SPIN_ORBIT_COEFFICIENT`].
pub fn squared_hamiltonian_residual(l: u32, params: &DiracGyroParams) -> Result<f64> {
    if params.variant != Variant::Abelian {
        return Err(Error::InvalidParams("squared-Hamiltonian identity needs the abelian variant".into()));
    }
    let h = build_dirac_hamiltonian(l, params)?;
    Ok(squared_residual_of(&h, l, &params.base, SpinOrbitForm::Cofactor, SPIN_ORBIT_COEFFICIENT))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinOrbitFit {
    /// Least-squares coefficient; `None` when the spin-orbit operator vanishes (`l = 0`).
    pub coefficient: Option<f64>,
    /// Identity residual at the fitted coefficient.
    pub residual: f64,
}

/// Least-squares fit of `k` in `H² − Mc²ΣI⁻¹L² − M²c⁴ = −k Mc² Σ w_k L_k S_k`.
pub fn fit_spin_orbit(h: &OperatorMatrix, l: u32, base: &GyroParams, form: SpinOrbitForm) -> SpinOrbitFit {
    let h2 = h.matmul(h);
    let without = squared_hamiltonian_reference(l, base, form, 0.0);
    let diff = &h2 - &without;
    let space = DiracSpace::new(l, base.hbar);
    let t = space.weighted_spin_orbit(form.weights(base.inertia)).scale_real(base.rest_energy());
    let tt: f64 = t.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let scale = h2.frobenius_norm().max(f64::MIN_POSITIVE);
    if tt == 0.0 {
        return SpinOrbitFit {
            coefficient: None,
            residual: diff.frobenius_norm() / scale,
        };
    }
    let td: f64 = t.as_slice().iter().zip(diff.as_slice()).map(|(a, b)| (a.conj() * b).re).sum();
    let k = -td / tt;
    let residual = (&diff + &t.scale_real(k)).frobenius_norm() / scale;
    SpinOrbitFit {
        coefficient: Some(k),
        residual,
    }
}

/// `j(j+1) − l(l+1) − ¾`, the eigenvalue of `(σ·L)/ħ` on `|j(l,½)⟩`.
pub fn spin_orbit_factor(l: u32, j2: u32) -> f64 {
    let j = j2 as f64 / 2.0;
    let lf = l as f64;
    j * (j + 1.0) - lf * (lf + 1.0) - 0.75
}

/// Spherical-top energies `(E₊, E₋)` for `j = l ± ½` (`j2 = 2j`).
pub fn dirac_energy_spherical(l: u32, j2: u32, params: &GyroParams) -> Result<(f64, f64)> {
    params.validate()?;
    if !params.is_spherical() {
        return Err(Error::NotSymmetric {
            shape: "spherical (I1 = I2 = I3)",
            inertia: params.inertia,
        });
    }
    if j2 % 2 == 0 || !(j2 == 2 * l + 1 || (l > 0 && j2 == 2 * l - 1)) {
        return Err(Error::BadQuantumNumbers(format!("j = {}/2 is not l ± 1/2 for l = {l}", j2)));
    }
    let kappa = spin_orbit_factor(l, j2);
    let mc2 = params.rest_energy();
    let e = (params.hbar * params.hbar * mc2 / params.inertia[0] * kappa * kappa + mc2 * mc2).sqrt();
    Ok((e, -e))
}

/// `2j` of the spherical-limit level a symmetric-top branch connects to:
/// branch 1 is `j = l + ½`, branch 2 is `j = l − ½`.
pub fn spherical_j2_for_branch(l: u32, branch: u8) -> Option<u32> {
    match branch {
        1 => Some(2 * l + 1),
        2 if l > 0 => Some(2 * l - 1),
        _ => None,
    }
}

/// The literal `j = l + (−1)^i ½` assignment, kept to show it is reversed.
pub fn printed_j2_for_branch(l: u32, branch: u8) -> Option<u32> {
    match branch {
        1 if l > 0 => Some(2 * l - 1),
        2 => Some(2 * l + 1),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscriminantSign {
    /// `4(c₃² − c₁'²)(m_j² − ¼)`, agrees with diagonalization.
    Resolved,
    /// `4(c₁'² − c₃²)(m_j² − ¼)` as printed.
    Printed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// One uncoupled state, `|m_j| = l + ½`.
    Edge,
    /// Two coupled states.
    Interior,
}

/// Checks `(l, m_j, branch)` names a state and classifies its `K` block.
pub fn block_kind(l: u32, mj2: i32, branch: u8) -> Result<BlockKind> {
    let edge = 2 * l as i32 + 1;
    if mj2 % 2 == 0 || mj2.abs() > edge {
        return Err(Error::BadQuantumNumbers(format!(
            "m_j = {}/2 is not a half-integer with |m_j| <= l + 1/2 for l = {l}",
            mj2
        )));
    }
    let kind = if mj2.abs() == edge { BlockKind::Edge } else { BlockKind::Interior };
    match (kind, branch) {
        (_, 1) | (BlockKind::Interior, 2) => Ok(kind),
        (BlockKind::Edge, 2) => Err(Error::BadQuantumNumbers(format!(
            "edge state m_j = {}/2 has a single branch",
            mj2
        ))),
        _ => Err(Error::BadQuantumNumbers(format!("branch must be 1 or 2, got {branch}"))),
    }
}

/// Every `(2m_j, branch)` of shell `l` in row order.
pub fn kinetic_labels(l: u32) -> Vec<(i32, u8)> {
    let edge = 2 * l as i32 + 1;
    let mut out = Vec::new();
    let mut mj2 = -edge;
    while mj2 <= edge {
        if mj2.abs() == edge {
            out.push((mj2, 1));
        } else {
            out.push((mj2, 1));
            out.push((mj2, 2));
        }
        mj2 += 2;
    }
    out
}

/// Eigenvalue `F` of `K` for `(l, m_j, branch)`.
pub fn f_symmetric(l: u32, mj2: i32, branch: u8, coupling: &KineticCoupling) -> Result<f64> {
    f_symmetric_with(l, mj2, branch, coupling, DiscriminantSign::Resolved)
}

pub fn f_symmetric_with(
    l: u32,
    mj2: i32,
    branch: u8,
    coupling: &KineticCoupling,
    sign: DiscriminantSign,
) -> Result<f64> {
    let h2 = coupling.hbar * coupling.hbar;
    let c3 = coupling.c3;
    if block_kind(l, mj2, branch)? == BlockKind::Edge {
        // diagonal element ħ²c₃ l/2 of either edge state
        return Ok(h2 * c3 * l as f64 / 2.0);
    }
    let c1 = coupling.c1_sqrt2();
    let lf = l as f64;
    let mj = mj2 as f64 / 2.0;
    let asym = match sign {
        DiscriminantSign::Resolved => c3 * c3 - c1 * c1,
        DiscriminantSign::Printed => c1 * c1 - c3 * c3,
    };
    let disc = c3 * c3 + 4.0 * c1 * c1 * lf * (lf + 1.0) + 4.0 * asym * (mj * mj - 0.25);
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    let parity = if branch == 1 { -1.0 } else { 1.0 };
    Ok(-h2 / 4.0 * (c3 + parity * disc.sqrt()))
}

/// Amplitudes of `φ` on `{|l,m_j−½⟩|↑⟩, |l,m_j+½⟩|↓⟩}`.
///
/// Magnitudes follow `√((2F + ħ²c₃(m_j+½))/(4F + ħ²c₃))` and
/// `√((2F − ħ²c₃(m_j−½))/(4F + ħ²c₃))`; the relative sign is the one the
/// 2×2 block requires.
pub fn orbital_amplitudes(l: u32, mj2: i32, branch: u8, f: f64, coupling: &KineticCoupling) -> Result<[f64; 2]> {
    let edge = 2 * l as i32 + 1;
    if block_kind(l, mj2, branch)? == BlockKind::Edge {
        return Ok(if mj2 == edge { [1.0, 0.0] } else { [0.0, 1.0] });
    }
    let h2c3 = coupling.hbar * coupling.hbar * coupling.c3;
    let mj = mj2 as f64 / 2.0;
    let denom = 4.0 * f + h2c3;
    let up = ((2.0 * f + h2c3 * (mj + 0.5)) / denom).max(0.0).sqrt();
    let down = ((2.0 * f - h2c3 * (mj - 0.5)) / denom).max(0.0).sqrt();
    let k11 = h2c3 * (mj - 0.5) / 2.0;
    let down = if f - k11 >= 0.0 { down } else { -down };
    let norm = (up * up + down * down).sqrt();
    Ok([up / norm, down / norm])
}

/// Big/small spinor of `f σ₁ + Mc² σ₃` for the `sign` energy.
pub fn spinor_chi(f: f64, sign: Sign, rest_energy: f64) -> Result<[C64; 2]> {
    let e = sign.factor() * (f * f + rest_energy * rest_energy).sqrt();
    if e == 0.0 {
        return Err(Error::DegenerateEnergy);
    }
    let big = ((e + rest_energy) / (2.0 * e)).max(0.0).sqrt();
    let small = ((e - rest_energy) / (2.0 * e)).max(0.0).sqrt();
    let small = if (e - rest_energy) * f >= 0.0 { small } else { -small };
    Ok([c(big, 0.0), c(small, 0.0)])
}

/// `‖(fσ·v + Mc²σ₃)χ − Eχ‖`
pub fn spinor_residual(f: f64, v: [f64; 3], rest_energy: f64, energy: f64, chi: &[C64; 2]) -> f64 {
    let h = spinor_hamiltonian(f, v, rest_energy);
    let hx = h.apply(chi);
    hx.iter().zip(chi).map(|(a, b)| (a - b * energy).norm_sqr()).sum::<f64>().sqrt()
}

fn spinor_hamiltonian(f: f64, v: [f64; 3], rest_energy: f64) -> OperatorMatrix {
    let [s1, s2, s3] = pauli();
    let sv = &(&s1.scale_real(v[0]) + &s2.scale_real(v[1])) + &s3.scale_real(v[2]);
    &sv.scale_real(f) + &s3.scale_real(rest_energy)
}

/// `E² = F² + M²c⁴ + 2v₃FMc²`
pub fn nonabelian_energy(f: f64, v3: f64, rest_energy: f64) -> f64 {
    // written as a sum of squares so |v₃| ≤ 1 never gives a negative radicand
    let a = f * v3 + rest_energy;
    (a * a + f * f * (1.0 - v3 * v3).max(0.0)).sqrt()
}

/// Normalized `(h + E)|±⟩` for `h = f σ·v + Mc²σ₃`.
pub fn spinor_chi_nonabelian(f: f64, v: [f64; 3], sign: Sign, rest_energy: f64) -> Result<[C64; 2]> {
    let e = sign.factor() * nonabelian_energy(f, v[2], rest_energy);
    if e == 0.0 {
        return Err(Error::DegenerateEnergy);
    }
    let h = spinor_hamiltonian(f, v, rest_energy);
    let shifted = &h + &OperatorMatrix::identity(2).scale_real(e);
    let a = shifted.column(0);
    let b = shifted.column(1);
    let norm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let (col, n) = if norm(&a) >= norm(&b) { (a.clone(), norm(&a)) } else { (b.clone(), norm(&b)) };
    if n == 0.0 {
        return Err(Error::DegenerateEnergy);
    }
    Ok([col[0] / n, col[1] / n])
}

/// One closed-form eigenstate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiracEigenpair {
    pub line: SpectralLine,
    pub kinetic_eigenvalue: f64,
    pub spinor_chi: [C64; 2],
    pub orbital_part: [f64; 2],
}

impl DiracEigenpair {
    /// `χ ⊗ φ` in the full (big/small) ⊗ (spin) ⊗ (orbital) basis.
    pub fn state_vector(&self) -> Vec<C64> {
        let l = self.line.labels.l;
        let basis = OrbitalBasis::new(l);
        let dorb = basis.dim();
        let mj2 = self.line.labels.m2;
        let mut phi = vec![c(0.0, 0.0); 2 * dorb];
        if let Some(i) = basis.index_of(mj2 - 1) {
            phi[i] = c(self.orbital_part[0], 0.0);
        }
        if let Some(i) = basis.index_of(mj2 + 1) {
            phi[dorb + i] = c(self.orbital_part[1], 0.0);
        }
        let mut psi = Vec::with_capacity(4 * dorb);
        for chi in self.spinor_chi {
            psi.extend(phi.iter().map(|&p| chi * p));
        }
        psi
    }
}

/// Positive and negative closed-form states of one `(l, m_j, branch)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiracLevel {
    pub plus: DiracEigenpair,
    pub minus: DiracEigenpair,
}

fn level(
    l: u32,
    mj2: i32,
    branch: u8,
    params: &DiracGyroParams,
    energy: impl Fn(f64) -> f64,
    spinor: impl Fn(f64, Sign) -> Result<[C64; 2]>,
) -> Result<DiracLevel> {
    let coupling = params.coupling();
    let f = f_symmetric(l, mj2, branch, &coupling)?;
    let orbital_part = orbital_amplitudes(l, mj2, branch, f, &coupling)?;
    let e = energy(f);
    let make = |sign: Sign| -> Result<DiracEigenpair> {
        Ok(DiracEigenpair {
            line: SpectralLine {
                labels: LineLabels {
                    l,
                    m2: mj2,
                    branch: Some(branch),
                    sign,
                },
                energy: sign.factor() * e,
            },
            kinetic_eigenvalue: f,
            spinor_chi: spinor(f, sign)?,
            orbital_part,
        })
    };
    Ok(DiracLevel {
        plus: make(Sign::Plus)?,
        minus: make(Sign::Minus)?,
    })
}

/// Symmetric-top (`I₁ = I₂`) abelian states `E = ±√(F² + M²c⁴)`.
pub fn dirac_energy_symmetric(l: u32, mj2: i32, branch: u8, params: &DiracGyroParams) -> Result<DiracLevel> {
    if params.variant != Variant::Abelian {
        return Err(Error::InvalidParams("symmetric closed form needs the abelian variant".into()));
    }
    if !params.base.is_symmetric() {
        return Err(Error::NotSymmetric {
            shape: "symmetric (I1 = I2)",
            inertia: params.base.inertia,
        });
    }
    let mc2 = params.rest_energy();
    level(
        l,
        mj2,
        branch,
        params,
        |f| (f * f + mc2 * mc2).sqrt(),
        |f, sign| spinor_chi(f, sign, mc2),
    )
}

/// Non-abelian states `E = ±√(F² + M²c⁴ + 2v₃FMc²)`.
pub fn dirac_energy_nonabelian(l: u32, mj2: i32, branch: u8, params: &DiracGyroParams) -> Result<DiracLevel> {
    let Some(v) = params.v() else {
        return Err(Error::InvalidParams("non-abelian closed form needs the nonabelian variant".into()));
    };
    let mc2 = params.rest_energy();
    let lvl = level(
        l,
        mj2,
        branch,
        params,
        |f| nonabelian_energy(f, v[2], mc2),
        |f, sign| spinor_chi_nonabelian(f, v, sign, mc2),
    )?;
    Ok(lvl)
}

/// All closed-form lines of shell `l` in row order, if the parameters admit them.
pub fn closed_form_lines(l: u32, params: &DiracGyroParams) -> Result<Option<Vec<SpectralLine>>> {
    let solve = match params.variant {
        Variant::Abelian if !params.base.is_symmetric() => return Ok(None),
        Variant::Abelian => dirac_energy_symmetric,
        Variant::NonAbelian { .. } => dirac_energy_nonabelian,
    };
    let mut lines = Vec::new();
    for (mj2, branch) in kinetic_labels(l) {
        let lvl = solve(l, mj2, branch, params)?;
        lines.push(lvl.plus.line);
        lines.push(lvl.minus.line);
    }
    Ok(Some(lines))
}

/// Eigenvalues of [`build_dirac_hamiltonian`] as ordinal-labelled lines.
pub fn dirac_energies_numeric(l: u32, params: &DiracGyroParams) -> Result<Vec<SpectralLine>> {
    let h = build_dirac_hamiltonian(l, params)?;
    let eig = eig_hermitian(&h)?;
    Ok(ordinal_lines(l, &eig.eigenvalues))
}

/// Ascending eigenvalues → lines. Positive energies are numbered upward from
/// zero, negative ones by increasing magnitude.
pub fn ordinal_lines(l: u32, eigenvalues: &[f64]) -> Vec<SpectralLine> {
    let mut plus: Vec<f64> = eigenvalues.iter().copied().filter(|e| *e >= 0.0).collect();
    let mut minus: Vec<f64> = eigenvalues.iter().copied().filter(|e| *e < 0.0).collect();
    plus.sort_by(f64::total_cmp);
    minus.sort_by(|a, b| b.total_cmp(a));
    let mut out = Vec::with_capacity(eigenvalues.len());
    for (sign, list) in [(Sign::Plus, plus), (Sign::Minus, minus)] {
        for (k, energy) in list.into_iter().enumerate() {
            out.push(SpectralLine {
                labels: LineLabels {
                    l,
                    m2: 2 * k as i32,
                    branch: None,
                    sign,
                },
                energy,
            });
        }
    }
    out.sort_by_key(|line| line.labels.sort_key());
    out
}

/// `½[ΣI_i⁻¹L_i² − 2Σ_k (I_iI_j)^{-1/2} L_k S_k]` on spin ⊗ orbital: the
/// rotor-plus-spin-orbit energy `E − Mc²` tends to for large `Mc²`.
pub fn nonrelativistic_operator(l: u32, base: &GyroParams) -> OperatorMatrix {
    let orb = build_orbital(l, base.hbar);
    let spin = spin_half(base.hbar);
    let id2 = OperatorMatrix::identity(2);
    let cof = SpinOrbitForm::Cofactor.weights(base.inertia);
    let mut out = OperatorMatrix::zeros(2 * orb.dim());
    for k in 0..3 {
        let lk = orb.components()[k];
        let rotor = kron(&id2, &lk.matmul(lk)).scale_real(1.0 / base.inertia[k]);
        let so = kron(&spin[k], lk).scale_real(SPIN_ORBIT_COEFFICIENT * cof[k]);
        out = &out + &(&rotor - &so);
    }
    out.scale_real(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_algebra::hermiticity_residual;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn natural(inertia: [f64; 3]) -> GyroParams {
        GyroParams::natural(1.0, inertia).unwrap()
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn l_zero_is_pure_mass_term() {
        let p = DiracGyroParams::abelian(GyroParams::new(0.5, 2.0, 3.0, [1.0, 2.0, 3.0]).unwrap()).unwrap();
        let h = build_dirac_hamiltonian(0, &p).unwrap();
        assert_eq!(h, OperatorMatrix::diagonal(&[12.0, 12.0, -12.0, -12.0]));
        let e = sorted(dirac_energies_numeric(0, &p).unwrap().iter().map(|l| l.energy).collect());
        assert_eq!(e, vec![-12.0, -12.0, 12.0, 12.0]);
        assert_eq!(squared_hamiltonian_residual(0, &p).unwrap(), 0.0);
    }

    #[test]
    fn spherical_l1_spectrum() {
        let base = natural([1.0; 3]);
        let p = DiracGyroParams::abelian(base).unwrap();
        let eig = eig_hermitian(&build_dirac_hamiltonian(1, &p).unwrap()).unwrap();
        let (r2, r5) = (2f64.sqrt(), 5f64.sqrt());
        let want = sorted(
            [[-r2; 4].as_slice(), &[r2; 4], &[-r5; 2], &[r5; 2]].concat(),
        );
        for (g, w) in eig.eigenvalues.iter().zip(want) {
            assert!(rel(*g, w) < 1e-12, "{g} vs {w}");
        }
        assert!((dirac_energy_spherical(1, 3, &base).unwrap().0 - r2).abs() < 1e-15);
        assert!((dirac_energy_spherical(1, 1, &base).unwrap().0 - r5).abs() < 1e-15);
        assert_eq!(dirac_energy_spherical(0, 1, &base).unwrap(), (1.0, -1.0));
    }

    #[test]
    fn spherical_errors() {
        let base = natural([1.0; 3]);
        assert!(matches!(dirac_energy_spherical(1, 5, &base), Err(Error::BadQuantumNumbers(_))));
        assert!(matches!(dirac_energy_spherical(0, 0, &base), Err(Error::BadQuantumNumbers(_))));
        assert!(matches!(dirac_energy_spherical(2, 4, &base), Err(Error::BadQuantumNumbers(_))));
        assert!(matches!(
            dirac_energy_spherical(1, 1, &natural([1.0, 1.0, 2.0])),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn hamiltonian_is_hermitian_for_random_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let inertia = [rng.gen_range(0.2..4.0), rng.gen_range(0.2..4.0), rng.gen_range(0.2..4.0)];
            let base = GyroParams::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.1..5.0), inertia)
                .unwrap();
            let l = rng.gen_range(0..=5);
            let h = build_dirac_hamiltonian(l, &DiracGyroParams::abelian(base).unwrap()).unwrap();
            assert!(hermiticity_residual(&h) <= 1e-12);
            let sym = GyroParams { inertia: [inertia[0], inertia[0], inertia[2]], ..base };
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let v = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            let h = build_dirac_hamiltonian(l, &DiracGyroParams::nonabelian(sym, v).unwrap()).unwrap();
            assert!(hermiticity_residual(&h) <= 1e-12);
        }
    }

    #[test]
    fn plain_ladders_reproduce_the_expansion() {
        for inertia in [[1.0, 1.0, 2.0], [0.7, 0.7, 3.1], [2.0, 2.0, 2.0]] {
            let base = GyroParams::new(0.8, 1.7, 2.3, inertia).unwrap();
            for l in 0..=4 {
                let p = DiracGyroParams::abelian(base).unwrap();
                let direct = build_dirac_hamiltonian(l, &p).unwrap();
                let via_k = hamiltonian_from_kinetic(l, &p).unwrap();
                assert!(direct.max_abs_diff(&via_k) < 1e-12 * direct.frobenius_norm().max(1.0));

                let p = DiracGyroParams::nonabelian(base, [0.6, 0.0, 0.8]).unwrap();
                let direct = build_dirac_hamiltonian(l, &p).unwrap();
                let via_k = hamiltonian_from_kinetic(l, &p).unwrap();
                assert!(direct.max_abs_diff(&via_k) < 1e-12 * direct.frobenius_norm().max(1.0));
            }
        }
        // √2 ladders with the same c₁ do not reproduce H at l ≥ 1
        let p = DiracGyroParams::abelian(natural([1.0, 1.0, 2.0])).unwrap();
        let direct = kinetic_operator(2, &p.coupling());
        let other = kinetic_operator(
            2,
            &KineticCoupling {
                ladder: LadderConvention::Sqrt2,
                ..p.coupling()
            },
        );
        assert!(direct.max_abs_diff(&other) > 0.1);
    }

    #[test]
    fn nonabelian_root_squares_to_inverse_inertia() {
        let p = DiracGyroParams::nonabelian(natural([0.5, 0.5, 2.0]), [0.0, 0.6, 0.8]).unwrap();
        assert!(inertia_root(&p).inverse_residual([0.5, 0.5, 2.0]) < 1e-15);
    }

    #[test]
    fn f_symmetric_examples() {
        let sph = KineticCoupling {
            c1: 1.3,
            c3: 1.3,
            hbar: 1.0,
            ladder: LadderConvention::Sqrt2,
        };
        for mj2 in [-1, 1] {
            assert!((f_symmetric(1, mj2, 1, &sph).unwrap() - 1.3 / 2.0).abs() < 1e-14);
            assert!((f_symmetric(1, mj2, 2, &sph).unwrap() + 1.3).abs() < 1e-14);
        }
        assert_eq!(f_symmetric(0, 1, 1, &sph).unwrap(), 0.0);
        assert_eq!(f_symmetric(0, -1, 1, &sph).unwrap(), 0.0);
        assert!(matches!(f_symmetric(1, 0, 1, &sph), Err(Error::BadQuantumNumbers(_))));
        assert!(matches!(f_symmetric(1, 5, 1, &sph), Err(Error::BadQuantumNumbers(_))));
        assert!(matches!(f_symmetric(1, 3, 2, &sph), Err(Error::BadQuantumNumbers(_))));
        assert!(matches!(f_symmetric(1, 1, 3, &sph), Err(Error::BadQuantumNumbers(_))));
    }

    #[test]
    fn f_symmetric_matches_kinetic_diagonalization() {
        for (inertia, h) in [([1.0, 1.0, 2.0], 1.0), ([0.4, 0.4, 3.0], 0.7), ([2.0, 2.0, 0.3], 1.2)] {
            let base = GyroParams::new(h, 1.1, 0.9, inertia).unwrap();
            let p = DiracGyroParams::abelian(base).unwrap();
            let cp = p.coupling();
            for l in 0..=6 {
                let numeric = eig_hermitian(&kinetic_operator(l, &cp)).unwrap().eigenvalues;
                let closed = sorted(
                    kinetic_labels(l)
                        .into_iter()
                        .map(|(m, b)| f_symmetric(l, m, b, &cp).unwrap())
                        .collect(),
                );
                assert_eq!(numeric.len(), closed.len());
                for (a, b) in numeric.iter().zip(&closed) {
                    assert!((a - b).abs() < 1e-11 * (1.0 + b.abs()), "l={l}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn printed_discriminant_disagrees_off_sphere() {
        let p = DiracGyroParams::abelian(natural([1.0, 1.0, 2.0])).unwrap();
        let cp = p.coupling();
        let resolved = f_symmetric_with(2, 3, 1, &cp, DiscriminantSign::Resolved).unwrap();
        let printed = f_symmetric_with(2, 3, 1, &cp, DiscriminantSign::Printed).unwrap();
        assert!((resolved - printed).abs() > 1e-3);
        // the two conventions agree on the spherical top
        let p = DiracGyroParams::abelian(natural([1.0; 3])).unwrap();
        let cp = p.coupling();
        for (m, b) in kinetic_labels(3) {
            let a = f_symmetric_with(3, m, b, &cp, DiscriminantSign::Resolved).unwrap();
            let z = f_symmetric_with(3, m, b, &cp, DiscriminantSign::Printed).unwrap();
            assert!((a - z).abs() < 1e-13);
        }
    }

    #[test]
    fn closed_form_states_are_eigenvectors() {
        for (base, v) in [
            (natural([1.0, 1.0, 2.0]), None),
            (GyroParams::new(0.7, 1.3, 2.0, [0.5, 0.5, 1.5]).unwrap(), None),
            (natural([1.0, 1.0, 2.0]), Some([0.6, 0.0, 0.8])),
            (natural([1.5, 1.5, 0.4]), Some([0.0, 0.0, 1.0])),
            (natural([1.5, 1.5, 0.4]), Some([0.48, 0.64, 0.6])),
        ] {
            let p = match v {
                None => DiracGyroParams::abelian(base).unwrap(),
                Some(v) => DiracGyroParams::nonabelian(base, v).unwrap(),
            };
            for l in 0..=3 {
                let h = build_dirac_hamiltonian(l, &p).unwrap();
                for (mj2, branch) in kinetic_labels(l) {
                    let lvl = match v {
                        None => dirac_energy_symmetric(l, mj2, branch, &p).unwrap(),
                        Some(_) => dirac_energy_nonabelian(l, mj2, branch, &p).unwrap(),
                    };
                    for pair in [&lvl.plus, &lvl.minus] {
                        let psi = pair.state_vector();
                        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
                        assert!((norm - 1.0).abs() < 1e-12);
                        let hpsi = h.apply(&psi);
                        let res: f64 = hpsi
                            .iter()
                            .zip(&psi)
                            .map(|(a, b)| (a - b * pair.line.energy).norm_sqr())
                            .sum::<f64>()
                            .sqrt();
                        assert!(res < 1e-10 * h.frobenius_norm(), "l={l} mj2={mj2} b={branch} res={res:e}");
                        let chi_norm: f64 = pair.spinor_chi.iter().map(|z| z.norm_sqr()).sum();
                        let orb_norm: f64 = pair.orbital_part.iter().map(|z| z * z).sum();
                        assert!((chi_norm - 1.0).abs() < 1e-12 && (orb_norm - 1.0).abs() < 1e-12);
                        let f = pair.kinetic_eigenvalue;
                        let mc2 = p.rest_energy();
                        let e2 = match v {
                            None => f * f + mc2 * mc2,
                            Some(v) => f * f + mc2 * mc2 + 2.0 * v[2] * f * mc2,
                        };
                        assert!(rel(pair.line.energy.powi(2), e2) < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn spinor_examples() {
        assert_eq!(spinor_chi(0.0, Sign::Plus, 1.0).unwrap(), [c(1.0, 0.0), c(0.0, 0.0)]);
        let r2 = 2f64.sqrt();
        let chi = spinor_chi(1.0, Sign::Plus, 1.0).unwrap();
        assert!((chi[0].re - ((r2 + 1.0) / (2.0 * r2)).sqrt()).abs() < 1e-15);
        assert!((chi[1].re - ((r2 - 1.0) / (2.0 * r2)).sqrt()).abs() < 1e-15);
        assert!(spinor_residual(1.0, [1.0, 0.0, 0.0], 1.0, r2, &chi) < 1e-12);
        let minus = spinor_chi(1.0, Sign::Minus, 1.0).unwrap();
        // components swap roles under E → −E
        assert!((minus[0].norm() - chi[1].norm()).abs() < 1e-15);
        assert!((minus[1].norm() - chi[0].norm()).abs() < 1e-15);
        assert!(spinor_residual(1.0, [1.0, 0.0, 0.0], 1.0, -r2, &minus) < 1e-12);
        for f in [-2.5, -0.3, 0.7, 4.0] {
            for sign in [Sign::Plus, Sign::Minus] {
                let chi = spinor_chi(f, sign, 0.8).unwrap();
                let e = sign.factor() * (f * f + 0.64f64).sqrt();
                assert!(spinor_residual(f, [1.0, 0.0, 0.0], 0.8, e, &chi) < 1e-12);
            }
        }
        assert_eq!(spinor_chi(0.0, Sign::Plus, 0.0), Err(Error::DegenerateEnergy));
    }

    #[test]
    fn printed_nonabelian_spinor_is_not_an_eigenvector() {
        // (1/E)(σ·v F + σ₃Mc²)|+⟩ as printed, versus the (h + E)|+⟩ used here
        let (f, v, mc2) = (1.0, [0.6, 0.0, 0.8], 1.0);
        let e = nonabelian_energy(f, v[2], mc2);
        let printed = spinor_hamiltonian(f, v, mc2).column(0);
        let n = printed.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let printed = [printed[0] / n, printed[1] / n];
        assert!(spinor_residual(f, v, mc2, e, &printed) > 0.1);
        let ours = spinor_chi_nonabelian(f, v, Sign::Plus, mc2).unwrap();
        assert!(spinor_residual(f, v, mc2, e, &ours) < 1e-14);
    }

    #[test]
    fn nonabelian_degenerate_energy() {
        // v = ẑ, F = −Mc² gives E = 0
        assert_eq!(nonabelian_energy(-1.0, 1.0, 1.0), 0.0);
        assert_eq!(spinor_chi_nonabelian(-1.0, [0.0, 0.0, 1.0], Sign::Plus, 1.0), Err(Error::DegenerateEnergy));
    }

    #[test]
    fn parameter_errors() {
        let asym = natural([1.0, 2.0, 3.0]);
        assert!(matches!(DiracGyroParams::nonabelian(asym, [0.0, 0.0, 1.0]), Err(Error::NotSymmetric { .. })));
        assert!(matches!(
            DiracGyroParams::nonabelian(natural([1.0; 3]), [0.0, 0.0, 2.0]),
            Err(Error::InvalidParams(_))
        ));
        let p = DiracGyroParams::abelian(asym).unwrap();
        assert!(matches!(dirac_energy_symmetric(1, 1, 1, &p), Err(Error::NotSymmetric { .. })));
        assert!(matches!(dirac_energy_nonabelian(1, 1, 1, &p), Err(Error::InvalidParams(_))));
        assert_eq!(closed_form_lines(1, &p).unwrap(), None);
    }

    #[test]
    fn squared_hamiltonian_coefficient() {
        for (inertia, l) in [([1.0; 3], 1), ([1.0, 2.0, 3.0], 2), ([0.5, 1.7, 4.0], 3)] {
            let base = natural(inertia);
            let p = DiracGyroParams::abelian(base).unwrap();
            assert!(squared_hamiltonian_residual(l, &p).unwrap() <= 1e-12);
            let h = build_dirac_hamiltonian(l, &p).unwrap();
            let fit = fit_spin_orbit(&h, l, &base, SpinOrbitForm::Cofactor);
            assert!((fit.coefficient.unwrap() - 2.0).abs() < 1e-12);
            assert!(fit.residual <= 1e-12);
        }
        // literal diagonal weights only work on the sphere
        let base = natural([1.0, 2.0, 3.0]);
        let h = build_dirac_hamiltonian(2, &DiracGyroParams::abelian(base).unwrap()).unwrap();
        let fit = fit_spin_orbit(&h, 2, &base, SpinOrbitForm::Diagonal);
        assert!(fit.residual > 1e-3);
        assert!(squared_residual_of(&h, 2, &base, SpinOrbitForm::Diagonal, 1.0) > 1e-3);
    }

    #[test]
    fn conserved_quantities() {
        let sym = DiracGyroParams::abelian(natural([0.8, 0.8, 2.2])).unwrap();
        let na = DiracGyroParams::nonabelian(natural([0.8, 0.8, 2.2]), [0.6, 0.0, 0.8]).unwrap();
        for l in 0..=4 {
            let space = DiracSpace::new(l, 1.0);
            let h = build_dirac_hamiltonian(l, &sym).unwrap();
            let scale = h.frobenius_norm();
            assert!(h.commutator(&space.lsq()).frobenius_norm() <= 1e-11 * scale * space.lsq().frobenius_norm().max(1.0));
            assert!(h.commutator(&space.j3()).frobenius_norm() <= 1e-11 * scale * space.j3().frobenius_norm().max(1.0));
            let h = build_dirac_hamiltonian(l, &na).unwrap();
            let k = space.lift_spin_orbital(&kinetic_operator(l, &na.coupling()));
            let bound = 1e-11 * h.frobenius_norm() * k.frobenius_norm().max(1.0);
            assert!(h.commutator(&k).frobenius_norm() <= bound);
        }
    }

    #[test]
    fn asymmetric_spectrum_is_symmetric_about_zero() {
        let p = DiracGyroParams::abelian(natural([1.0, 2.0, 3.0])).unwrap();
        let e = eig_hermitian(&build_dirac_hamiltonian(2, &p).unwrap()).unwrap().eigenvalues;
        let n = e.len();
        for k in 0..n {
            assert!((e[k] + e[n - 1 - k]).abs() <= 1e-10 * e[n - 1 - k].abs());
        }
    }

    #[test]
    fn ordinal_labels_pair_up() {
        let lines = ordinal_lines(1, &[-3.0, -1.0, 1.0, 3.0]);
        let labels: Vec<(i32, Sign, f64)> = lines.iter().map(|l| (l.labels.m2, l.labels.sign, l.energy)).collect();
        assert_eq!(
            labels,
            vec![(0, Sign::Plus, 1.0), (0, Sign::Minus, -1.0), (2, Sign::Plus, 3.0), (2, Sign::Minus, -3.0)]
        );
    }
}
