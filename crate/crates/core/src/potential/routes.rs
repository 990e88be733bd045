//! Frequency integrands of the cross and scattering terms, evaluated two
//! ways: from the contracted Green tensors and from the explicit
//! wavenumber integrals.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::greens::{bulk_green_scaled, scattering_green_scaled, Geometry, LayerStack};
use crate::materials::MaterialModel;
use crate::quadrature::{integrate_iterated_2d, integrate_semi_infinite, Domain, Tolerance};
use crate::specfun::bessel_j012;

use super::AtomPair;

fn require_positive(u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("frequency must be positive, got {u}")))
    }
}

/// `dU1/du` from the contraction of `u^2 G0` with `u^2 G1`.
pub fn cross_integrand_contracted(
    stack: &LayerStack,
    atoms: &AtomPair,
    geom: &Geometry,
    u: f64,
    tol: &Tolerance,
) -> Result<f64> {
    require_positive(u)?;
    let g0 = bulk_green_scaled(&MaterialModel::Vacuum, geom.point_a(), geom.point_b(), u)?;
    let g1 = scattering_green_scaled(stack, geom, u, tol)?.tensor;
    let aa = atoms.a.polarizability_iu(u) * atoms.b.polarizability_iu(u);
    Ok(-aa * g0.contract(&g1) / PI)
}

/// `dU2/du` from the contraction of `u^2 G1` with itself.
pub fn scatter_integrand_contracted(
    stack: &LayerStack,
    atoms: &AtomPair,
    geom: &Geometry,
    u: f64,
    tol: &Tolerance,
) -> Result<f64> {
    require_positive(u)?;
    let g1 = scattering_green_scaled(stack, geom, u, tol)?.tensor;
    let aa = atoms.a.polarizability_iu(u) * atoms.b.polarizability_iu(u);
    Ok(-aa * g1.contract(&g1) / (2.0 * PI))
}

fn q_scale(u: f64, z_plus: f64) -> f64 {
    (1.0 / z_plus).max(u).min(4.0 / z_plus)
}

/// `dU1/du` from the explicit single wavenumber integral.
pub fn cross_integrand_explicit(
    stack: &LayerStack,
    atoms: &AtomPair,
    geom: &Geometry,
    u: f64,
    tol: &Tolerance,
) -> Result<f64> {
    require_positive(u)?;
    let frozen = stack.at_frequency(u)?;
    let (x, z, zp, l) = (geom.x_sep().abs(), geom.z_sep(), geom.z_plus(), geom.l());
    let xi = 1.0 / (l * u);
    let f = 1.0 + xi + xi * xi;
    let g = 1.0 + 3.0 * xi + 3.0 * xi * xi;
    let (x2l, z2l) = (x * x / (l * l), z * z / (l * l));
    let k2 = u * u;
    let integrand = |q: f64| {
        let (rs, rp) = frozen.reflection(q);
        let b = (k2 + q * q).sqrt();
        let [j0, _, j2] = bessel_j012(q * x);
        let t0 = (2.0 * f - g * x2l) * (rs / b - b * rp / k2) - 2.0 * (f - g * z2l) * q * q * rp / (b * k2);
        let t2 = -g * x2l * (rs / b + b * rp / k2);
        q * (-b * zp).exp() * (t0 * j0 + t2 * j2)
    };
    let r = integrate_semi_infinite(integrand, 0.0, q_scale(u, zp), tol);
    if !r.converged {
        return Err(Error::Nonconvergence {
            context: format!("explicit cross integrand at u = {u:e}"),
            value: r.value,
            error: r.error_estimate,
        });
    }
    let aa = atoms.a.polarizability_iu(u) * atoms.b.polarizability_iu(u);
    Ok(-aa * u.powi(4) * (-l * u).exp() * r.value / (32.0 * PI.powi(3) * l))
}

/// `dU2/du` from the explicit double wavenumber integral.
pub fn scatter_integrand_explicit(
    stack: &LayerStack,
    atoms: &AtomPair,
    geom: &Geometry,
    u: f64,
    tol: &Tolerance,
) -> Result<f64> {
    require_positive(u)?;
    let frozen = stack.at_frequency(u)?;
    let (x, zp) = (geom.x_sep().abs(), geom.z_plus());
    let k2 = u * u;
    let k4 = k2 * k2;
    let integrand = |q: f64, p: f64| {
        let (rs, rp) = frozen.reflection(q);
        let (rs2, rp2) = frozen.reflection(p);
        let b = (k2 + q * q).sqrt();
        let b2 = (k2 + p * p).sqrt();
        let jq = bessel_j012(q * x);
        let jp = bessel_j012(p * x);
        let c0 = rs * rs2 / (b * b2) + rp * rp2 / k4 * (b * b2 + 2.0 * q * q * p * p / (b * b2))
            - b2 * rs * rp2 / (b * k2)
            - b * rs2 * rp / (b2 * k2);
        let c1 = 4.0 * q * p * rp * rp2 / k4;
        let c2 = rs * rs2 / (b * b2) + b * b2 * rp * rp2 / k4 + b2 * rs * rp2 / (b * k2) + b * rs2 * rp / (b2 * k2);
        q * p * (-(b + b2) * zp).exp() * (c0 * jq[0] * jp[0] + c1 * jq[1] * jp[1] + c2 * jq[2] * jp[2])
    };
    let domain = Domain::SemiInfinite {
        start: 0.0,
        scale: q_scale(u, zp),
    };
    let r = integrate_iterated_2d(integrand, domain, domain, tol, tol)?;
    if !r.converged {
        return Err(Error::Nonconvergence {
            context: format!("explicit scattering integrand at u = {u:e}"),
            value: r.value,
            error: r.error_estimate,
        });
    }
    let aa = atoms.a.polarizability_iu(u) * atoms.b.polarizability_iu(u);
    Ok(-aa * u.powi(4) * r.value / (64.0 * PI.powi(3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::MaterialModel;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn routes_agree_above_dielectric() {
        let stack = LayerStack::half_space(MaterialModel::dielectric(3.0, 1.0, 0.001).unwrap()).unwrap();
        let atoms = AtomPair::reference();
        let tol = Tolerance::new(1e-9, 0.0, 4000).unwrap();
        for (g, u) in [
            (Geometry::new(0.0, 0.3, 0.4, 0.5).unwrap(), 1.3),
            (Geometry::vertical(0.2, 0.6).unwrap(), 0.4),
        ] {
            let a = cross_integrand_contracted(&stack, &atoms, &g, u, &tol).unwrap();
            let b = cross_integrand_explicit(&stack, &atoms, &g, u, &tol).unwrap();
            assert!(close(a, b, 1e-7), "{a} vs {b}");
            let a = scatter_integrand_contracted(&stack, &atoms, &g, u, &tol).unwrap();
            let b = scatter_integrand_explicit(&stack, &atoms, &g, u, &tol).unwrap();
            assert!(close(a, b, 1e-6), "{a} vs {b}");
        }
    }
}
