//! Klein-Gordon gyroscope at the center of mass.
//!
//! The stationary operator is `Mc² Σ I_i⁻¹ L_i²` with eigenvalues `E² − M²c⁴`.
//! Symmetric tops (`I₁ = I₂`) have the closed form
//! `E = ±√(Mc²ħ²[I₁⁻¹ l(l+1) + (I₃⁻¹ − I₁⁻¹) m²] + M²c⁴)`; asymmetric tops
//! are only solved numerically.

use serde::{Deserialize, Serialize};

use crate::angular_momentum::build_orbital;
use crate::error::{Error, Result};
use crate::operator_algebra::{eig_hermitian, OperatorMatrix};

/// Relative tolerance for deciding `I₁ = I₂` (and `I₁ = I₃`).
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Physical constants and principal moments of inertia.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GyroParams {
    pub hbar: f64,
    pub c: f64,
    pub mass: f64,
    pub inertia: [f64; 3],
}

impl Default for GyroParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            mass: 1.0,
            inertia: [1.0; 3],
        }
    }
}

impl GyroParams {
    pub fn new(hbar: f64, c: f64, mass: f64, inertia: [f64; 3]) -> Result<Self> {
        let p = Self {
            hbar,
            c,
            mass,
            inertia,
        };
        p.validate()?;
        Ok(p)
    }

    /// `ħ = c = 1` with the given mass and moments.
    pub fn natural(mass: f64, inertia: [f64; 3]) -> Result<Self> {
        Self::new(1.0, 1.0, mass, inertia)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [("hbar", self.hbar), ("c", self.c), ("mass", self.mass)];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        for (i, &v) in self.inertia.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "moment of inertia I{} must be positive, got {v}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c * self.c
    }

    pub fn is_symmetric(&self) -> bool {
        approx_eq(self.inertia[0], self.inertia[1])
    }

    pub fn is_spherical(&self) -> bool {
        self.is_symmetric() && approx_eq(self.inertia[0], self.inertia[2])
    }

    pub fn with_mass(mut self, mass: f64) -> Self {
        self.mass = mass;
        self
    }
}

fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= SYMMETRY_TOL * a.abs().max(b.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Quantum labels of one spectral line.
///
/// `m2` is twice the projection (`m` for Klein-Gordon, `m_j` for Dirac). For
/// lines that come only from diagonalization (asymmetric tops) the projection
/// is not a good quantum number and `m2 / 2` is the ordinal of the level inside
/// its `l` shell instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineLabels {
    pub l: u32,
    pub m2: i32,
    pub branch: Option<u8>,
    pub sign: Sign,
}

impl LineLabels {
    pub fn m(&self) -> f64 {
        self.m2 as f64 / 2.0
    }

    /// Row order: l asc, m asc, branch asc, sign + before −.
    pub fn sort_key(&self) -> (u32, i32, u8, Sign) {
        (self.l, self.m2, self.branch.unwrap_or(0), self.sign)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub labels: LineLabels,
    pub energy: f64,
}

/// `Mc² Σ I_i⁻¹ L_i²` on the `2l+1` states of shell `l`.
pub fn build_kg_operator(l: u32, params: &GyroParams) -> Result<OperatorMatrix> {
    params.validate()?;
    let ops = build_orbital(l, params.hbar);
    let mut h = OperatorMatrix::zeros(ops.dim());
    for (li, moment) in ops.components().into_iter().zip(params.inertia) {
        h = &h + &li.matmul(li).scale_real(1.0 / moment);
    }
    Ok(h.scale_real(params.rest_energy()))
}

/// Closed-form symmetric-top energies `(E₊, E₋)`.
pub fn kg_energy_symmetric(l: u32, m: i32, params: &GyroParams) -> Result<(f64, f64)> {
    params.validate()?;
    if !params.is_symmetric() {
        return Err(Error::NotSymmetric {
            shape: "symmetric (I1 = I2)",
            inertia: params.inertia,
        });
    }
    if m.unsigned_abs() > l {
        return Err(Error::BadQuantumNumbers(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let [i1, _, i3] = params.inertia;
    let (lf, mf) = (l as f64, m as f64);
    let mc2 = params.rest_energy();
    let h2 = params.hbar * params.hbar;
    let rot = mc2 * h2 * (lf * (lf + 1.0) / i1 + (1.0 / i3 - 1.0 / i1) * mf * mf);
    let e = (rot + mc2 * mc2).sqrt();
    Ok((e, -e))
}

/// Symmetric-top lines for every `m` of shell `l`, in row order.
pub fn kg_lines_symmetric(l: u32, params: &GyroParams) -> Result<Vec<SpectralLine>> {
    let mut lines = Vec::with_capacity(2 * (2 * l as usize + 1));
    for m in -(l as i32)..=(l as i32) {
        let (ep, em) = kg_energy_symmetric(l, m, params)?;
        for (sign, energy) in [(Sign::Plus, ep), (Sign::Minus, em)] {
            lines.push(SpectralLine {
                labels: LineLabels {
                    l,
                    m2: 2 * m,
                    branch: None,
                    sign,
                },
                energy,
            });
        }
    }
    Ok(lines)
}

/// `±√(λ + M²c⁴)` for every eigenvalue `λ` of [`build_kg_operator`].
///
/// Lines are labelled by ordinal: the k-th lowest level gets `m = k − l`.
pub fn kg_energies_numeric(l: u32, params: &GyroParams) -> Result<Vec<SpectralLine>> {
    let h = build_kg_operator(l, params)?;
    let eig = eig_hermitian(&h)?;
    let mc2 = params.rest_energy();
    let mut lines = Vec::with_capacity(2 * eig.dim());
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        // λ ≥ 0 analytically; clamp rounding below zero
        let e = (lambda.max(0.0) + mc2 * mc2).sqrt();
        let m2 = 2 * (k as i32 - l as i32);
        for (sign, energy) in [(Sign::Plus, e), (Sign::Minus, -e)] {
            lines.push(SpectralLine {
                labels: LineLabels {
                    l,
                    m2,
                    branch: None,
                    sign,
                },
                energy,
            });
        }
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_energies(lines: &[SpectralLine]) -> Vec<f64> {
        let mut e: Vec<f64> = lines.iter().map(|l| l.energy).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn l_zero() {
        let p = GyroParams::natural(2.0, [1.0, 3.0, 0.5]).unwrap();
        assert_eq!(build_kg_operator(0, &p).unwrap(), OperatorMatrix::zeros(1));
        let lines = kg_energies_numeric(0, &p).unwrap();
        assert_eq!(sorted_energies(&lines), vec![-2.0, 2.0]);
        let (ep, em) = kg_energy_symmetric(0, 0, &GyroParams::natural(2.0, [1.0, 1.0, 5.0]).unwrap()).unwrap();
        assert_eq!((ep, em), (2.0, -2.0));
    }

    #[test]
    fn spherical_l1_operator_is_casimir() {
        let p = GyroParams::default();
        let h = build_kg_operator(1, &p).unwrap();
        assert!(h.max_abs_diff(&OperatorMatrix::identity(3).scale_real(2.0)) < 1e-14);
        let lines = kg_energies_numeric(1, &p).unwrap();
        let pos: Vec<f64> = lines.iter().filter(|l| l.labels.sign == Sign::Plus).map(|l| l.energy).collect();
        assert_eq!(pos.len(), 3);
        assert!(pos.iter().all(|e| (e - 3f64.sqrt()).abs() < 1e-14));
    }

    #[test]
    fn asymmetric_l1_classic_levels() {
        // l = 1 levels of an asymmetric top: ħ²(1/I_a + 1/I_b) for each pair
        let p = GyroParams::natural(1.0, [1.0, 2.0, 3.0]).unwrap();
        let eig = eig_hermitian(&build_kg_operator(1, &p).unwrap()).unwrap();
        let want = [1.0 / 2.0 + 1.0 / 3.0, 1.0 + 1.0 / 3.0, 1.0 + 1.0 / 2.0];
        for (got, w) in eig.eigenvalues.iter().zip(want) {
            assert!((got - w).abs() < 1e-13, "{got} vs {w}");
        }
    }

    #[test]
    fn symmetric_plug_in_values() {
        let p = GyroParams::default();
        let (e, _) = kg_energy_symmetric(1, 0, &p).unwrap();
        assert!((e - 1.7320508075688772).abs() < 1e-15);
        let p = GyroParams::natural(1.0, [1.0, 1.0, 2.0]).unwrap();
        let (e, em) = kg_energy_symmetric(1, 1, &p).unwrap();
        assert!((e - 2.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(em, -e);
    }

    #[test]
    fn symmetric_closed_form_matches_numeric() {
        for inertia in [[1.0, 1.0, 2.0], [2.5, 2.5, 0.7], [0.5, 0.5, 0.5]] {
            let p = GyroParams::new(0.9, 1.3, 0.4, inertia).unwrap();
            for l in 0..=6 {
                let closed = sorted_energies(&kg_lines_symmetric(l, &p).unwrap());
                let numeric = sorted_energies(&kg_energies_numeric(l, &p).unwrap());
                for (a, b) in closed.iter().zip(&numeric) {
                    assert!((a - b).abs() <= 1e-10 * b.abs());
                }
            }
        }
    }

    #[test]
    fn plus_minus_m_degenerate() {
        let p = GyroParams::natural(1.0, [1.5, 1.5, 0.3]).unwrap();
        for l in 0..5u32 {
            for m in 0..=l as i32 {
                let a = kg_energy_symmetric(l, m, &p).unwrap().0;
                let b = kg_energy_symmetric(l, -m, &p).unwrap().0;
                assert!((a - b).abs() <= 1e-12 * a);
            }
        }
    }

    #[test]
    fn kg_operator_commutes_with_casimir() {
        let p = GyroParams::new(1.1, 0.7, 2.0, [0.6, 1.9, 3.3]).unwrap();
        for l in 0..=8 {
            let h = build_kg_operator(l, &p).unwrap();
            let ops = build_orbital(l, p.hbar);
            assert!(h.commutator(&ops.lsq).frobenius_norm() <= 1e-12 * h.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn errors() {
        let asym = GyroParams::natural(1.0, [1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(kg_energy_symmetric(1, 0, &asym), Err(Error::NotSymmetric { .. })));
        let sym = GyroParams::default();
        assert!(matches!(kg_energy_symmetric(1, 2, &sym), Err(Error::BadQuantumNumbers(_))));
        assert!(matches!(GyroParams::natural(1.0, [1.0, 0.0, 1.0]), Err(Error::InvalidParams(_))));
        let bad = GyroParams {
            inertia: [1.0, -1.0, 1.0],
            ..GyroParams::default()
        };
        assert!(matches!(build_kg_operator(1, &bad), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn ordering_follows_sign_of_inertia_difference() {
        // I₃ < I₁: energies grow with |m|
        let p = GyroParams::natural(1.0, [2.0, 2.0, 0.5]).unwrap();
        for l in 1..6u32 {
            let e: Vec<f64> = (0..=l as i32).map(|m| kg_energy_symmetric(l, m, &p).unwrap().0).collect();
            assert!(e.windows(2).all(|w| w[0] < w[1]));
        }
        // I₃ > I₁: energies fall with |m|
        let p = GyroParams::natural(1.0, [0.5, 0.5, 2.0]).unwrap();
        let e: Vec<f64> = (0..=3).map(|m| kg_energy_symmetric(3, m, &p).unwrap().0).collect();
        assert!(e.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn non_relativistic_limit() {
        let base = GyroParams::natural(1.0, [1.2, 1.2, 0.8]).unwrap();
        let p = base.with_mass(1e6);
        let [i1, _, i3] = p.inertia;
        for l in 0..6u32 {
            for m in -(l as i32)..=(l as i32) {
                let (e, _) = kg_energy_symmetric(l, m, &p).unwrap();
                let (lf, mf) = (l as f64, m as f64);
                let kinetic = 0.5 * (lf * (lf + 1.0) / i1 + (1.0 / i3 - 1.0 / i1) * mf * mf);
                let mc2 = p.rest_energy();
                let residual = (e - mc2 - kinetic).abs();
                assert!(residual <= kinetic * kinetic / (2.0 * mc2) * 1.01, "l={l} m={m} {residual:e}");
            }
        }
    }
}
