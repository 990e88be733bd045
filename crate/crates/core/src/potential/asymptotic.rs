//! Closed-form limits of the two-atom potential, kept apart from the full
//! numerics.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::greens::Geometry;
use crate::materials::MaterialModel;
use crate::quadrature::{integrate_iterated_2d, integrate_semi_infinite, Domain, Tolerance};
use crate::specfun::{a_integral, b_integral, m_integral, m_integral_small_x, AbParams, Sign};

use super::{AtomPair, Energy, PotentialBreakdown};

/// Coefficients of the retarded and nonretarded power laws.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AsymptoticCoefficients {
    /// Retarded bulk coefficient, `U = -c_r / l^7`.
    pub c_r: f64,
    /// Nonretarded bulk coefficient, `U = -c_nr / l^6`.
    pub c_nr: f64,
    /// Dielectric half space, cross term.
    pub c1_nr: f64,
    /// Dielectric half space, scattering term.
    pub c2_nr: f64,
    /// Magnetic half space.
    pub c3_nr: f64,
}

/// Tolerance of the coefficient integrals.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-10;

fn coefficient_integral<F: FnMut(f64) -> f64>(f: F, atoms: &AtomPair, what: &str) -> Result<f64> {
    let tol = Tolerance::new(COEFFICIENT_TOLERANCE, 0.0, 4000)?;
    let r = integrate_semi_infinite(f, 0.0, atoms.min_frequency(), &tol);
    if !r.converged {
        return Err(Error::Nonconvergence {
            context: format!("{what} coefficient"),
            value: r.value,
            error: r.error_estimate,
        });
    }
    Ok(r.value)
}

impl AsymptoticCoefficients {
    /// `c_r` and `c_nr` for atoms in `medium`; the half-space coefficients
    /// are filled in when `surface` is given.
    pub fn compute(atoms: &AtomPair, medium: &MaterialModel, surface: Option<&MaterialModel>) -> Result<Self> {
        medium.validate()?;
        let (eps0, mu0) = medium.response_iu(0.0)?;
        let n0 = (eps0 * mu0).sqrt();
        let c_r = 23.0 * atoms.static_product() / (64.0 * PI.powi(3) * n0 * eps0 * eps0);
        let pre = 1.0 / (16.0 * PI.powi(3));
        let aa = |u: f64| atoms.a.polarizability_iu(u) * atoms.b.polarizability_iu(u);
        let c_nr = 3.0
            * pre
            * coefficient_integral(
                |u| {
                    let eps = medium.permittivity_iu(u).expect("validated medium");
                    aa(u) / (eps * eps)
                },
                atoms,
                "nonretarded bulk",
            )?;
        let mut c = AsymptoticCoefficients {
            c_r,
            c_nr,
            ..Default::default()
        };
        if let Some(s) = surface {
            s.validate()?;
            if s.is_perfect() {
                return Err(Error::Mismatch(format!(
                    "half-space coefficients need a finite response, got {}",
                    s.name()
                )));
            }
            let ratio = |u: f64| {
                let e = s.permittivity_iu(u).expect("validated surface");
                (e - 1.0) / (e + 1.0)
            };
            c.c1_nr = pre * coefficient_integral(|u| aa(u) * ratio(u), atoms, "dielectric cross")?;
            c.c2_nr = 3.0 * pre * coefficient_integral(|u| aa(u) * ratio(u).powi(2), atoms, "dielectric scattering")?;
            c.c3_nr = pre / 4.0
                * coefficient_integral(
                    |u| {
                        let m = s.permeability_iu(u).expect("validated surface");
                        u * u * aa(u) * (m - 1.0) * (m - 3.0) / (m + 1.0)
                    },
                    atoms,
                    "magnetic",
                )?;
        }
        Ok(c)
    }
}

/// Closed-form limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticCase {
    /// Ideal plate, retarded, lateral separation small compared with `Z+`.
    PlateRetardedGeneral,
    /// Ideal plate, retarded, one atom much closer to the plate than the other.
    PlateRetardedFar,
    /// Ideal plate, nonretarded.
    PlateNonretardedGeneral,
    /// Ideal plate, nonretarded, both atoms at equal height.
    PlateNonretardedParallel,
    /// Ideal plate, nonretarded, one atom above the other.
    PlateNonretardedVertical,
    /// Half space, retarded, cross term from static reflection coefficients.
    HalfSpaceRetardedU1,
    /// Half space, retarded, scattering term from static reflection coefficients.
    HalfSpaceRetardedU2,
    /// Non-magnetic half space, nonretarded.
    HalfSpaceNonretardedDielectric,
    /// Non-magnetic half space, nonretarded, `l` small compared with `Z+`.
    HalfSpaceNonretardedDielectricSmallL,
    /// Non-electric half space, nonretarded.
    HalfSpaceNonretardedMagnetic,
    /// Non-electric half space, nonretarded, `X` small compared with `Z+`.
    HalfSpaceNonretardedMagneticSmallX,
}

impl AsymptoticCase {
    pub const ALL: [AsymptoticCase; 11] = [
        AsymptoticCase::PlateRetardedGeneral,
        AsymptoticCase::PlateRetardedFar,
        AsymptoticCase::PlateNonretardedGeneral,
        AsymptoticCase::PlateNonretardedParallel,
        AsymptoticCase::PlateNonretardedVertical,
        AsymptoticCase::HalfSpaceRetardedU1,
        AsymptoticCase::HalfSpaceRetardedU2,
        AsymptoticCase::HalfSpaceNonretardedDielectric,
        AsymptoticCase::HalfSpaceNonretardedDielectricSmallL,
        AsymptoticCase::HalfSpaceNonretardedMagnetic,
        AsymptoticCase::HalfSpaceNonretardedMagneticSmallX,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AsymptoticCase::PlateRetardedGeneral => "plate_retarded_general",
            AsymptoticCase::PlateRetardedFar => "plate_retarded_za_ll_zb",
            AsymptoticCase::PlateNonretardedGeneral => "plate_nonretarded_general",
            AsymptoticCase::PlateNonretardedParallel => "plate_nonretarded_parallel",
            AsymptoticCase::PlateNonretardedVertical => "plate_nonretarded_vertical",
            AsymptoticCase::HalfSpaceRetardedU1 => "halfspace_retarded_u1",
            AsymptoticCase::HalfSpaceRetardedU2 => "halfspace_retarded_u2",
            AsymptoticCase::HalfSpaceNonretardedDielectric => "halfspace_nonretarded_dielectric",
            AsymptoticCase::HalfSpaceNonretardedDielectricSmallL => "halfspace_nonretarded_dielectric_small_l",
            AsymptoticCase::HalfSpaceNonretardedMagnetic => "halfspace_nonretarded_magnetic",
            AsymptoticCase::HalfSpaceNonretardedMagneticSmallX => "halfspace_nonretarded_magnetic_small_x",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

fn parts(u0: f64, u1: f64, u2: f64) -> PotentialBreakdown {
    PotentialBreakdown {
        u0,
        u1,
        u2,
        total: u0 + u1 + u2,
        ..Default::default()
    }
}

/// Retarded ideal plate, `X << Z+`; `sign` is `r_p` of the plate.
pub fn plate_retarded(geom: &Geometry, c_r: f64, sign: f64) -> PotentialBreakdown {
    let (x, l, zp) = (geom.x_sep(), geom.l(), geom.z_plus());
    parts(
        -c_r / l.powi(7),
        sign * 32.0 / 23.0 * c_r * (x * x + 6.0 * l * l) / (l.powi(3) * zp * (l + zp).powi(5)),
        -c_r / zp.powi(7),
    )
}

/// Retarded ideal plate with `z_A << z_B` on a common normal.
pub fn plate_retarded_far(l: f64, c_r: f64, sign: f64) -> PotentialBreakdown {
    let u0 = -c_r / l.powi(7);
    parts(u0, -sign * 6.0 / 23.0 * u0, u0)
}

/// Nonretarded ideal plate.
pub fn plate_nonretarded(geom: &Geometry, c_nr: f64, sign: f64) -> PotentialBreakdown {
    let (x, z, zp) = (geom.x_sep(), geom.z_sep(), geom.z_plus());
    let (l, lp) = (geom.l(), geom.l_plus());
    let (x2, z2, zp2) = (x * x, z * z, zp * zp);
    let num = 4.0 * x2 * x2 - 2.0 * z2 * zp2 + x2 * (zp2 + z2);
    parts(
        -c_nr / l.powi(6),
        sign * c_nr * num / (3.0 * l.powi(5) * lp.powi(5)),
        -c_nr / lp.powi(6),
    )
}

/// Nonretarded ideal plate, atoms at equal height with separation `l`.
pub fn plate_nonretarded_parallel(l: f64, z_plus: f64, c_nr: f64, sign: f64) -> PotentialBreakdown {
    let s = l * l + z_plus * z_plus;
    parts(
        -c_nr / l.powi(6),
        sign * c_nr * (4.0 * l * l + z_plus * z_plus) / (3.0 * l.powi(3) * s.powf(2.5)),
        -c_nr / s.powi(3),
    )
}

/// Nonretarded ideal plate, atoms on a common normal with separation `l`.
pub fn plate_nonretarded_vertical(l: f64, z_plus: f64, c_nr: f64, sign: f64) -> PotentialBreakdown {
    parts(
        -c_nr / l.powi(6),
        -sign * 2.0 * c_nr / (3.0 * z_plus.powi(3) * l.powi(3)),
        -c_nr / z_plus.powi(6),
    )
}

/// Ratio `z_B / z_A` at which the nonretarded vertical scattering terms
/// cancel above an ideal permeable plate.
pub fn vertical_threshold_nonretarded() -> f64 {
    1.0 + 2.0 / (1.5f64.cbrt() - 1.0)
}

/// Nonretarded dielectric half space.
pub fn halfspace_nonretarded_dielectric(geom: &Geometry, c_nr: f64, c1: f64, c2: f64) -> PotentialBreakdown {
    let (x, z, zp) = (geom.x_sep(), geom.z_sep(), geom.z_plus());
    let (l, lp) = (geom.l(), geom.l_plus());
    let (x2, z2, zp2) = (x * x, z * z, zp * zp);
    let num = 4.0 * x2 * x2 - 2.0 * z2 * zp2 + x2 * (z2 + zp2);
    parts(-c_nr / l.powi(6), num * c1 / (l.powi(5) * lp.powi(5)), -c2 / lp.powi(6))
}

/// Nonretarded dielectric half space, `l << Z+`.
pub fn halfspace_nonretarded_dielectric_small_l(geom: &Geometry, c_nr: f64, c1: f64) -> PotentialBreakdown {
    let (x, z, zp, l) = (geom.x_sep(), geom.z_sep(), geom.z_plus(), geom.l());
    parts(-c_nr / l.powi(6), (x * x - 2.0 * z * z) * c1 / (l.powi(5) * zp.powi(3)), 0.0)
}

/// Nonretarded magnetic half space; the scattering term does not contribute.
pub fn halfspace_nonretarded_magnetic(geom: &Geometry, c_nr: f64, c3: f64) -> PotentialBreakdown {
    let (x, z, zp) = (geom.x_sep(), geom.z_sep(), geom.z_plus());
    let (l, lp) = (geom.l(), geom.l_plus());
    // l+ - Z+ written without cancellation.
    let gap = x * x / (lp + zp);
    let num = z * z - 2.0 * x * x + 3.0 * zp * gap;
    parts(-c_nr / l.powi(6), num * c3 / (l.powi(5) * lp), 0.0)
}

/// Nonretarded magnetic half space, `X << Z+`.
pub fn halfspace_nonretarded_magnetic_small_x(geom: &Geometry, c_nr: f64, c3: f64) -> PotentialBreakdown {
    let (x, z, zp, l) = (geom.x_sep(), geom.z_sep(), geom.z_plus(), geom.l());
    parts(-c_nr / l.powi(6), (2.0 * z * z - x * x) * c3 / (2.0 * l.powi(5) * zp), 0.0)
}

/// Static reflection coefficients as functions of `v = b / u >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticReflection {
    Perfect { rs: f64, rp: f64 },
    Medium { eps: f64, mu: f64 },
}

impl StaticReflection {
    pub fn of(material: &MaterialModel) -> Result<Self> {
        material.validate()?;
        if let Some((rs, rp)) = material.perfect_coefficients() {
            return Ok(StaticReflection::Perfect { rs, rp });
        }
        let (eps, mu) = material.response_iu(0.0)?;
        Ok(StaticReflection::Medium { eps, mu })
    }

    /// `(r_s(v), r_p(v))`.
    pub fn at(&self, v: f64) -> (f64, f64) {
        match *self {
            StaticReflection::Perfect { rs, rp } => (rs, rp),
            StaticReflection::Medium { eps, mu } => {
                let root = (eps * mu - 1.0 + v * v).sqrt();
                ((mu * v - root) / (mu * v + root), (eps * v - root) / (eps * v + root))
            }
        }
    }
}

fn v_scale(geom: &Geometry) -> f64 {
    1.0 + geom.l() / geom.z_plus()
}

/// Retarded cross term above a half space.
pub fn halfspace_retarded_u1(
    geom: &Geometry,
    alpha_product: f64,
    refl: StaticReflection,
    tol: &Tolerance,
) -> Result<Energy> {
    let (x, z, zp, l) = (geom.x_sep(), geom.z_sep(), geom.z_plus(), geom.l());
    let (x2, z2) = (x * x, z * z);
    let mixed = z2 - 2.0 * x2;
    let mut failure = None;
    let integrand = |v: f64| {
        let p = AbParams {
            a: l + v * zp,
            beta: x.abs() * (v * v - 1.0).max(0.0).sqrt(),
        };
        let ab = || -> Result<[f64; 9]> {
            Ok([
                a_integral(3, Sign::Plus, p)?,
                a_integral(4, Sign::Plus, p)?,
                a_integral(5, Sign::Plus, p)?,
                a_integral(3, Sign::Minus, p)?,
                a_integral(4, Sign::Minus, p)?,
                a_integral(5, Sign::Minus, p)?,
                b_integral(3, p)?,
                b_integral(4, p)?,
                b_integral(5, p)?,
            ])
        };
        let [a3p, a4p, a5p, a3m, a4m, a5m, b3, b4, b5] = match ab() {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                return 0.0;
            }
        };
        let (rs, rp) = refl.at(v);
        let v2 = v * v;
        let p_part = v2 * (z2 * a5m + mixed * (a4m / l + a3m / (l * l)) + l * l * a5p + l * a4p + a3p)
            + 2.0 * (v2 - 1.0) * (x2 * b5 + (x2 - 2.0 * z2) * (b4 / l + b3 / (l * l)));
        let s_part = z2 * a5p + mixed * (a4p / l + a3p / (l * l)) + l * l * a5m + l * a4m + a3m;
        p_part * rp - s_part * rs
    };
    let r = integrate_semi_infinite(integrand, 1.0, v_scale(geom), tol);
    if let Some(e) = failure {
        return Err(e);
    }
    if !r.converged {
        return Err(Error::Nonconvergence {
            context: "retarded half-space cross term".into(),
            value: r.value,
            error: r.error_estimate,
        });
    }
    let pre = alpha_product / (32.0 * PI.powi(3) * l.powi(3));
    Ok(Energy {
        value: pre * r.value,
        error: pre.abs() * r.error_estimate,
    })
}

/// Retarded scattering term above a half space. Uses the small-`X` form of
/// the `M_n` integrals when `X` vanishes and their quadrature otherwise.
pub fn halfspace_retarded_u2(
    geom: &Geometry,
    alpha_product: f64,
    refl: StaticReflection,
    tol: &Tolerance,
) -> Result<Energy> {
    let (x, zp) = (geom.x_sep(), geom.z_plus());
    let inner_tol = tol.with_rel(tol.rel * 1e-2).with_abs(0.0);
    // Scaled by Z+^7 so that the double integral is of order one.
    let scale7 = zp.powi(7);
    let mut failure = None;
    let integrand = |v: f64, w: f64| {
        let m = |n: u32| -> Result<f64> {
            if x == 0.0 {
                Ok(m_integral_small_x(n, v, w, zp))
            } else {
                m_integral(n, v, w, x, zp, &inner_tol)
            }
        };
        let ms = match (m(0), m(1), m(2)) {
            (Ok(a), Ok(b), Ok(c)) => [a, b, c],
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                failure.get_or_insert(e);
                return 0.0;
            }
        };
        let (rs, rp) = refl.at(v);
        let (rs2, rp2) = refl.at(w);
        let (v2, w2) = (v * v, w * w);
        let t0 = rp * rp2 * (3.0 * v2 * w2 - 2.0 * (v2 + w2) + 2.0) + rs * rs2 - rs * rp2 * w2 - rp * rs2 * v2;
        let t1 = 4.0 * v * w * (v2 - 1.0).sqrt() * (w2 - 1.0).sqrt() * rp * rp2;
        let t2 = rs * rs2 + rp * rp2 * v2 * w2 + rs * rp2 * w2 + rp * rs2 * v2;
        scale7 * (t0 * ms[0] + t1 * ms[1] + t2 * ms[2])
    };
    let domain = Domain::SemiInfinite { start: 1.0, scale: 1.0 };
    let r = integrate_iterated_2d(integrand, domain, domain, tol, &tol.with_abs(0.0));
    if let Some(e) = failure {
        return Err(e);
    }
    let r = r?;
    let pre = -alpha_product / (64.0 * PI.powi(3) * scale7);
    if !r.converged {
        return Err(Error::Nonconvergence {
            context: "retarded half-space scattering term".into(),
            value: pre * r.value,
            error: pre.abs() * r.error_estimate,
        });
    }
    Ok(Energy {
        value: pre * r.value,
        error: pre.abs() * r.error_estimate,
    })
}

fn plate_sign(case: AsymptoticCase, material: &MaterialModel) -> Result<f64> {
    material
        .perfect_coefficients()
        .map(|(_, rp)| rp)
        .ok_or_else(|| Error::Mismatch(format!("{} needs an ideal plate, got {}", case.name(), material.name())))
}

fn require_geometry(case: AsymptoticCase, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Mismatch(format!("{} needs {what}", case.name())))
    }
}

fn purely(material: &MaterialModel, electric: bool) -> bool {
    match *material {
        MaterialModel::Constant { eps, mu } => {
            if electric {
                mu == 1.0
            } else {
                eps == 1.0
            }
        }
        MaterialModel::DrudeLorentz { electric: e, magnetic: m } => {
            if electric {
                m.plasma == 0.0
            } else {
                e.plasma == 0.0
            }
        }
        MaterialModel::Vacuum => true,
        _ => false,
    }
}

/// Evaluates one closed-form limit for atoms in vacuum above a half space of
/// `material`.
pub fn u_asymptotic(
    case: AsymptoticCase,
    material: &MaterialModel,
    atoms: &AtomPair,
    geom: &Geometry,
    tol: &Tolerance,
) -> Result<PotentialBreakdown> {
    let vacuum = MaterialModel::Vacuum;
    let (x, z) = (geom.x_sep(), geom.z_sep());
    match case {
        AsymptoticCase::PlateRetardedGeneral | AsymptoticCase::PlateRetardedFar => {
            let sign = plate_sign(case, material)?;
            let c_r = 23.0 * atoms.static_product() / (64.0 * PI.powi(3));
            if case == AsymptoticCase::PlateRetardedGeneral {
                Ok(plate_retarded(geom, c_r, sign))
            } else {
                require_geometry(case, x == 0.0, "atoms on a common normal")?;
                Ok(plate_retarded_far(geom.l(), c_r, sign))
            }
        }
        AsymptoticCase::PlateNonretardedGeneral
        | AsymptoticCase::PlateNonretardedParallel
        | AsymptoticCase::PlateNonretardedVertical => {
            let sign = plate_sign(case, material)?;
            let c = AsymptoticCoefficients::compute(atoms, &vacuum, None)?;
            match case {
                AsymptoticCase::PlateNonretardedGeneral => Ok(plate_nonretarded(geom, c.c_nr, sign)),
                AsymptoticCase::PlateNonretardedParallel => {
                    require_geometry(case, z == 0.0, "atoms at equal height")?;
                    Ok(plate_nonretarded_parallel(geom.l(), geom.z_plus(), c.c_nr, sign))
                }
                _ => {
                    require_geometry(case, x == 0.0, "atoms on a common normal")?;
                    Ok(plate_nonretarded_vertical(geom.l(), geom.z_plus(), c.c_nr, sign))
                }
            }
        }
        AsymptoticCase::HalfSpaceRetardedU1 | AsymptoticCase::HalfSpaceRetardedU2 => {
            let refl = StaticReflection::of(material)?;
            let a0 = atoms.static_product();
            let c_r = 23.0 * a0 / (64.0 * PI.powi(3));
            let u0 = -c_r / geom.l().powi(7);
            let mut b = parts(u0, 0.0, 0.0);
            if case == AsymptoticCase::HalfSpaceRetardedU1 {
                let e = halfspace_retarded_u1(geom, a0, refl, tol)?;
                b.u1 = e.value;
                b.err1 = e.error;
            } else {
                let e = halfspace_retarded_u2(geom, a0, refl, tol)?;
                b.u2 = e.value;
                b.err2 = e.error;
            }
            b.total = b.u0 + b.u1 + b.u2;
            Ok(b)
        }
        AsymptoticCase::HalfSpaceNonretardedDielectric | AsymptoticCase::HalfSpaceNonretardedDielectricSmallL => {
            if !purely(material, true) {
                return Err(Error::Mismatch(format!(
                    "{} needs a non-magnetic medium, got {}",
                    case.name(),
                    material.name()
                )));
            }
            let c = AsymptoticCoefficients::compute(atoms, &vacuum, Some(material))?;
            if case == AsymptoticCase::HalfSpaceNonretardedDielectric {
                Ok(halfspace_nonretarded_dielectric(geom, c.c_nr, c.c1_nr, c.c2_nr))
            } else {
                Ok(halfspace_nonretarded_dielectric_small_l(geom, c.c_nr, c.c1_nr))
            }
        }
        AsymptoticCase::HalfSpaceNonretardedMagnetic | AsymptoticCase::HalfSpaceNonretardedMagneticSmallX => {
            if !purely(material, false) {
                return Err(Error::Mismatch(format!(
                    "{} needs a non-electric medium, got {}",
                    case.name(),
                    material.name()
                )));
            }
            let c = AsymptoticCoefficients::compute(atoms, &vacuum, Some(material))?;
            if case == AsymptoticCase::HalfSpaceNonretardedMagnetic {
                Ok(halfspace_nonretarded_magnetic(geom, c.c_nr, c.c3_nr))
            } else {
                Ok(halfspace_nonretarded_magnetic_small_x(geom, c.c_nr, c.c3_nr))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_atom_coefficients() {
        let c = AsymptoticCoefficients::compute(&AtomPair::reference(), &MaterialModel::Vacuum, None).unwrap();
        assert!((c.c_nr - 1.0 / (48.0 * PI * PI)).abs() < 1e-12 * c.c_nr);
        assert!((c.c_r - 23.0 * 4.0 / 9.0 / (64.0 * PI.powi(3))).abs() < 1e-15);
    }

    #[test]
    fn far_ratios() {
        let u = plate_retarded_far(3.0, 1.0, 1.0);
        assert!((u.total / u.u0 - 40.0 / 23.0).abs() < 1e-14);
        let u = plate_retarded_far(3.0, 1.0, -1.0);
        assert!((u.total / u.u0 - 52.0 / 23.0).abs() < 1e-14);
    }

    #[test]
    fn special_geometries_match_general_form() {
        for sign in [1.0, -1.0] {
            let g = Geometry::parallel(0.3, 0.7).unwrap();
            let a = plate_nonretarded(&g, 1.0, sign);
            let b = plate_nonretarded_parallel(0.7, 0.6, 1.0, sign);
            assert!((a.total - b.total).abs() < 1e-12 * a.total.abs());
            let g = Geometry::vertical(0.3, 0.7).unwrap();
            let a = plate_nonretarded(&g, 1.0, sign);
            let b = plate_nonretarded_vertical(0.7, 1.3, 1.0, sign);
            assert!((a.total - b.total).abs() < 1e-12 * a.total.abs());
        }
    }

    #[test]
    fn vertical_threshold_is_a_root() {
        let t = vertical_threshold_nonretarded();
        assert!((t - 14.82).abs() < 5e-3);
        let g = Geometry::vertical(1.0, t - 1.0).unwrap();
        let u = plate_nonretarded(&g, 1.0, -1.0);
        assert!((u.u1 + u.u2).abs() < 1e-12 * u.u2.abs());
    }

    #[test]
    fn magnetic_small_x_limit() {
        let g = Geometry::new(0.0, 1.0, 1e-4, 1.5).unwrap();
        let a = halfspace_nonretarded_magnetic(&g, 1.0, 1.0);
        let b = halfspace_nonretarded_magnetic_small_x(&g, 1.0, 1.0);
        assert!((a.u1 / b.u1 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn static_coefficients() {
        let r = StaticReflection::Medium { eps: 4.0, mu: 1.0 };
        let (rs, rp) = r.at(1.0);
        assert!((rs - (1.0 - 2.0) / 3.0).abs() < 1e-15);
        assert!((rp - (4.0 - 2.0) / 6.0).abs() < 1e-15);
        let (rs, rp) = r.at(1e9);
        assert!(rs.abs() < 1e-15);
        assert!((rp - 0.6).abs() < 1e-15);
    }

    #[test]
    fn case_checks() {
        let atoms = AtomPair::reference();
        let g = Geometry::parallel(1.0, 1.0).unwrap();
        let tol = Tolerance::default();
        let diel = MaterialModel::dielectric(3.0, 1.0, 0.001).unwrap();
        assert!(u_asymptotic(AsymptoticCase::PlateNonretardedGeneral, &diel, &atoms, &g, &tol).is_err());
        assert!(u_asymptotic(AsymptoticCase::HalfSpaceNonretardedMagnetic, &diel, &atoms, &g, &tol).is_err());
        assert!(u_asymptotic(AsymptoticCase::PlateNonretardedVertical, &MaterialModel::PerfectConductor, &atoms, &g, &tol).is_err());
        for c in AsymptoticCase::ALL {
            assert_eq!(AsymptoticCase::from_name(c.name()), Some(c));
        }
    }
}
