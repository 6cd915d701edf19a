//! Angular-momentum matrices on `|l,m⟩`, spin one-half, and Dirac-space blocks.
//!
//! Dirac space is ordered as (big/small doublet) ⊗ (spin doublet): the `β_i`
//! act on the first factor and the spin operators on the second. Full
//! gyroscope spaces append the orbital factor last.

use crate::operator_algebra::{c, kron, pauli, OperatorMatrix, C64};

/// Normalization of `L± = (L₁ ± iL₂)/n` with `n = 1` (plain) or `n = √2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderConvention {
    Plain,
    Sqrt2,
}

impl LadderConvention {
    pub fn divisor(self) -> f64 {
        match self {
            LadderConvention::Plain => 1.0,
            LadderConvention::Sqrt2 => std::f64::consts::SQRT_2,
        }
    }
}

/// Basis `m = −l … +l`, ascending. Magnetic numbers are kept doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitalBasis {
    pub l: u32,
}

impl OrbitalBasis {
    pub fn new(l: u32) -> Self {
        Self { l }
    }

    pub fn dim(&self) -> usize {
        2 * self.l as usize + 1
    }

    /// `2m` of basis state `index`.
    pub fn doubled_m(&self, index: usize) -> i32 {
        2 * (index as i32 - self.l as i32)
    }

    /// Index of the state with `2m = m2`, if it exists.
    pub fn index_of(&self, m2: i32) -> Option<usize> {
        let l2 = 2 * self.l as i32;
        if m2 % 2 != 0 || m2.abs() > l2 {
            return None;
        }
        Some(((m2 + l2) / 2) as usize)
    }
}

/// `L₁, L₂, L₃` and `L² = ΣL_i²` (computed from the products) on one `l` shell.
#[derive(Clone, Debug)]
pub struct AngularOperators {
    pub l: u32,
    pub hbar: f64,
    pub l1: OperatorMatrix,
    pub l2: OperatorMatrix,
    pub l3: OperatorMatrix,
    pub lsq: OperatorMatrix,
}

impl AngularOperators {
    pub fn components(&self) -> [&OperatorMatrix; 3] {
        [&self.l1, &self.l2, &self.l3]
    }

    pub fn dim(&self) -> usize {
        self.l3.dim()
    }
}

pub fn build_orbital(l: u32, hbar: f64) -> AngularOperators {
    let basis = OrbitalBasis::new(l);
    let dim = basis.dim();
    let lf = l as f64;
    let mut raise = OperatorMatrix::zeros(dim);
    let mut l3 = OperatorMatrix::zeros(dim);
    for i in 0..dim {
        let m = basis.doubled_m(i) as f64 / 2.0;
        l3[(i, i)] = c(hbar * m, 0.0);
        if i + 1 < dim {
            // ⟨m+1|L+|m⟩
            raise[(i + 1, i)] = c(hbar * (lf * (lf + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let lower = raise.adjoint();
    let l1 = (&raise + &lower).scale_real(0.5);
    let l2 = (&raise - &lower).scale(c(0.0, -0.5));
    let lsq = &(&l1.matmul(&l1) + &l2.matmul(&l2)) + &l3.matmul(&l3);
    AngularOperators {
        l,
        hbar,
        l1,
        l2,
        l3,
        lsq,
    }
}

/// `(L+, L−)` built from `L₁, L₂` with the requested normalization.
pub fn ladder(ops: &AngularOperators, convention: LadderConvention) -> (OperatorMatrix, OperatorMatrix) {
    ladder_from(&ops.l1, &ops.l2, convention)
}

pub fn ladder_from(
    x: &OperatorMatrix,
    y: &OperatorMatrix,
    convention: LadderConvention,
) -> (OperatorMatrix, OperatorMatrix) {
    let iy = y.scale(c(0.0, 1.0));
    let n = 1.0 / convention.divisor();
    ((x + &iy).scale_real(n), (x - &iy).scale_real(n))
}

/// Spin one-half `S_i = (ħ/2)σ_i` on the 2-dim spin factor.
pub fn spin_half(hbar: f64) -> [OperatorMatrix; 3] {
    pauli().map(|s| s.scale_real(hbar / 2.0))
}

/// 4×4 blocks on (big/small) ⊗ (spin).
#[derive(Clone, Debug)]
pub struct DiracBlocks {
    pub hbar: f64,
    /// `(ħ/2) 1₂ ⊗ σ_i`
    pub s: [OperatorMatrix; 3],
    /// `σ_i ⊗ 1₂`
    pub beta: [OperatorMatrix; 3],
    /// `(2/ħ) β₁ S_i = σ₁ ⊗ σ_i`
    pub alpha: [OperatorMatrix; 3],
    /// Mass-term matrix, equal to `β₃`.
    pub mass_term: OperatorMatrix,
}

pub fn build_dirac_blocks(hbar: f64) -> DiracBlocks {
    let sigma = pauli();
    let one = OperatorMatrix::identity(2);
    let s = sigma.clone().map(|p| kron(&one, &p).scale_real(hbar / 2.0));
    let beta = sigma.clone().map(|p| kron(&p, &one));
    let alpha = [0, 1, 2].map(|i| beta[0].matmul(&s[i]).scale_real(2.0 / hbar));
    let mass_term = beta[2].clone();
    DiracBlocks {
        hbar,
        s,
        beta,
        alpha,
        mass_term,
    }
}

/// Levi-Civita symbol on three indices.
pub fn epsilon3(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn i_unit() -> C64 {
    c(0.0, 1.0)
}
