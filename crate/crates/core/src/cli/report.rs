//! Covariant report for one particle system.

use serde::Serialize;

use crate::covariant::{
    b_vector, covariant_body, identity_residuals, rest_frame_body, system_energy, FourVector, IdentityResiduals,
    ParticleSystem, Units,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovariantReport {
    pub particles: usize,
    pub total_mass: f64,
    pub c: f64,
    pub momentum: FourVector,
    pub velocity: FourVector,
    pub pauli_lubanski: FourVector,
    pub b: FourVector,
    pub principal_moments: [f64; 3],
    pub angular_momentum_body: [f64; 3],
    pub energy: f64,
    pub residuals: IdentityResiduals,
}

/// Three equal masses on a unit circle, spinning about `z`.
pub fn default_system() -> ParticleSystem {
    let s3 = 3f64.sqrt() / 2.0;
    let p = 0.2;
    let xs = [[1.0, 0.0], [-0.5, s3], [-0.5, -s3]];
    let ps = [[0.0, p], [-s3 * p, -0.5 * p], [s3 * p, -0.5 * p]];
    let positions = xs.iter().map(|x| FourVector::new(0.0, x[0], x[1], 0.0)).collect();
    let momenta = ps
        .iter()
        .map(|q| FourVector::new((1.0 + q[0] * q[0] + q[1] * q[1]).sqrt(), q[0], q[1], 0.0))
        .collect();
    ParticleSystem::new(vec![1.0; 3], positions, momenta, Units::Natural).expect("valid default system")
}

pub fn covariant_report(sys: &ParticleSystem) -> Result<CovariantReport> {
    let body = covariant_body(sys)?;
    let rest = rest_frame_body(sys)?;
    Ok(CovariantReport {
        particles: sys.len(),
        total_mass: sys.total_mass(),
        c: sys.c(),
        momentum: body.momentum,
        velocity: body.velocity,
        pauli_lubanski: body.pauli_lubanski,
        b: b_vector(sys)?,
        principal_moments: rest.moments,
        angular_momentum_body: rest.angular_momentum_body,
        energy: system_energy(sys)?,
        residuals: identity_residuals(sys)?,
    })
}

pub fn load_system(path: &std::path::Path) -> Result<ParticleSystem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config("system", format!("cannot read {}: {e}", path.display())))?;
    ParticleSystem::from_json(&text)
}

/// `quantity,value` rows.
pub fn report_csv(r: &CovariantReport) -> String {
    use super::table::fmt_num;
    let mut out = String::from("quantity,value\n");
    let mut put = |k: String, v: f64| out.push_str(&format!("{k},{}\n", fmt_num(v)));
    put("particles".into(), r.particles as f64);
    put("total_mass".into(), r.total_mass);
    put("c".into(), r.c);
    for (name, v) in [("P", r.momentum), ("u", r.velocity), ("W", r.pauli_lubanski), ("B", r.b)] {
        for (mu, x) in v.0.iter().enumerate() {
            put(format!("{name}{mu}"), *x);
        }
    }
    for i in 0..3 {
        put(format!("I{}", i + 1), r.principal_moments[i]);
    }
    for i in 0..3 {
        put(format!("L{}", i + 1), r.angular_momentum_body[i]);
    }
    put("energy".into(), r.energy);
    let s = &r.residuals;
    for (k, v) in [
        ("residual_jacobi", s.jacobi),
        ("residual_w_dot_p", s.w_dot_p),
        ("residual_b_dot_p", s.b_dot_p),
        ("residual_rest_frame_b_squared", s.rest_frame_b_squared),
        ("residual_mass_shell", s.mass_shell),
    ] {
        put(k.into(), v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_report() {
        let r = covariant_report(&default_system()).unwrap();
        assert!(r.residuals.max() < 1e-10);
        assert!(r.energy > 3.0);
        assert_eq!(report_csv(&r).lines().count(), 1 + 3 + 16 + 6 + 1 + 5);
    }
}
