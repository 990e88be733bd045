//! Two-atom van der Waals potentials: bulk part, cross term and scattering
//! term, the single-atom potential, and forces.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::greens::{bulk_green_scaled, scattering_components, Geometry, GreenTensor, LayerStack};
use crate::materials::{AtomModel, MaterialModel};
use crate::quadrature::{integrate_semi_infinite, integrate_semi_infinite_vec, Tolerance};

pub mod asymptotic;
mod force;
pub mod routes;

pub use force::{force, interatomic_force, interatomic_force_with_error, Which};

/// The two interacting atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomPair {
    pub a: AtomModel,
    pub b: AtomModel,
}

impl AtomPair {
    pub fn new(a: AtomModel, b: AtomModel) -> Self {
        AtomPair { a, b }
    }

    pub fn identical(atom: AtomModel) -> Self {
        AtomPair {
            a: atom.clone(),
            b: atom,
        }
    }

    /// Two identical two-level atoms with unit frequency and squared dipole.
    pub fn reference() -> Self {
        Self::identical(AtomModel::reference())
    }

    pub fn swapped(&self) -> Self {
        AtomPair {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub(crate) fn static_product(&self) -> f64 {
        self.a.static_polarizability() * self.b.static_polarizability()
    }

    /// `alpha_A(iu) alpha_B(iu) / (alpha_A(0) alpha_B(0))`.
    pub(crate) fn normalized_product(&self, u: f64) -> f64 {
        self.a.polarizability_iu(u) * self.b.polarizability_iu(u) / self.static_product()
    }

    pub(crate) fn min_frequency(&self) -> f64 {
        self.a.min_frequency().min(self.b.min_frequency())
    }
}

/// An energy with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Energy {
    pub value: f64,
    pub error: f64,
}

/// `U_AB = U0 + U1 + U2` with per-part error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PotentialBreakdown {
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    pub total: f64,
    pub err0: f64,
    pub err1: f64,
    pub err2: f64,
}

impl PotentialBreakdown {
    fn from_parts(u0: Energy, u1: Energy, u2: Energy) -> Self {
        PotentialBreakdown {
            u0: u0.value,
            u1: u1.value,
            u2: u2.value,
            total: u0.value + u1.value + u2.value,
            err0: u0.error,
            err1: u1.error,
            err2: u2.error,
        }
    }

    pub fn total_error(&self) -> f64 {
        self.err0 + self.err1 + self.err2
    }

    /// `U_AB / U0` and its error estimate.
    pub fn ratio(&self) -> (f64, f64) {
        let r = self.total / self.u0;
        let err = r.abs() * (self.total_error() / self.total.abs() + self.err0 / self.u0.abs());
        (r, err)
    }
}

/// What surrounds the atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum Scene {
    /// Both atoms embedded in an unbounded homogeneous medium.
    Bulk(MaterialModel),
    /// Both atoms in the vacuum region above a planar stack.
    Layered(LayerStack),
}

fn check_tol(tol: &Tolerance) -> Result<()> {
    Tolerance::new(tol.rel, tol.abs, tol.max_panels).map(|_| ())
}

fn nonconvergence(context: String, value: f64, error: f64) -> Error {
    Error::Nonconvergence { context, value, error }
}

/// Potential of two atoms a distance `l` apart inside a bulk medium.
pub fn u_bulk(medium: &MaterialModel, atoms: &AtomPair, l: f64, tol: &Tolerance) -> Result<Energy> {
    check_tol(tol)?;
    medium.validate()?;
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidParameter(format!("separation must be positive, got {l}")));
    }
    let (eps0, mu0) = medium.response_iu(0.0)?;
    let n0 = (eps0 * mu0).sqrt();
    let integrand = |u: f64| {
        let (eps, mu) = medium.response_iu(u).expect("validated medium");
        let x = (eps * mu).sqrt() * u * l;
        let poly = 3.0 + x * (6.0 + x * (5.0 + x * (2.0 + x)));
        atoms.normalized_product(u) / (eps * eps) * (-2.0 * x).exp() * poly
    };
    let scale = (0.5 / (n0 * l)).min(atoms.min_frequency());
    let r = integrate_semi_infinite(integrand, 0.0, scale, &tol.with_abs(0.0));
    let pre = -atoms.static_product() / (16.0 * PI.powi(3) * l.powi(6));
    if !r.converged {
        return Err(nonconvergence(
            format!("bulk potential at l = {l:e}"),
            pre * r.value,
            pre.abs() * r.error_estimate,
        ));
    }
    Ok(Energy {
        value: pre * r.value,
        error: pre.abs() * r.error_estimate,
    })
}

/// Free-space potential `U0` of the pair.
pub fn u0_free(atoms: &AtomPair, geom: &Geometry, tol: &Tolerance) -> Result<Energy> {
    u_bulk(&MaterialModel::Vacuum, atoms, geom.l(), tol)
}

/// Inner (wavenumber) and outer (frequency) tolerances. Integrands are
/// normalized, so only relative targets are used.
fn split_tolerance(tol: &Tolerance) -> (Tolerance, Tolerance) {
    let inner = tol.with_abs(0.0);
    (inner, inner.with_rel(10.0 * tol.rel))
}

/// `(U1, U2)` from one pass over the frequency axis.
fn scattering_parts(stack: &LayerStack, atoms: &AtomPair, geom: &Geometry, tol: &Tolerance) -> Result<(Energy, Energy)> {
    check_tol(tol)?;
    let geom = Geometry::new(geom.x_a, geom.z_a, geom.x_b, geom.z_b)?;
    if stack.is_vacuum() {
        return Ok((Energy::default(), Energy::default()));
    }
    let (inner, outer) = split_tolerance(tol);
    let l = geom.l();
    let zp = geom.z_plus();
    let lp = geom.l_plus();
    let x_sep = geom.x_sep();
    let d = [x_sep, 0.0, geom.z_sep()];
    let norm1 = 1.0 / (l.powi(3) * lp.powi(3));
    let norm2 = 1.0 / lp.powi(6);

    let mut failure: Option<Error> = None;
    let integrand = |u: f64| -> [f64; 4] {
        if failure.is_some() {
            return [0.0; 4];
        }
        let frozen = match stack.at_frequency(u) {
            Ok(f) => f,
            Err(e) => {
                failure = Some(e);
                return [0.0; 4];
            }
        };
        let r = scattering_components(&frozen, x_sep, zp, &inner);
        if !r.converged {
            failure = Some(Error::InnerNonconvergence {
                abscissa: u,
                value: r.value.iter().fold(0.0, |m, v| m.max(v.abs())),
                error: r.error_estimate.iter().fold(0.0, |m, v| m.max(*v)),
            });
            return [0.0; 4];
        }
        let g0 = bulk_green_scaled(&MaterialModel::Vacuum, [0.0; 3], d, u).expect("distinct points");
        let [xx, yy, xz, zz] = r.value;
        let [exx, eyy, exz, ezz] = r.error_estimate;
        let g1 = GreenTensor::planar(xx, yy, zz, xz);
        let cross = g0.contract(&g1);
        let square = g1.contract(&g1);
        let cross_err = g0.get(0, 0).abs() * exx
            + g0.get(1, 1).abs() * eyy
            + g0.get(2, 2).abs() * ezz
            + (g0.get(0, 2).abs() + g0.get(2, 0).abs()) * exz;
        let square_err = 2.0 * (xx.abs() * exx + yy.abs() * eyy + zz.abs() * ezz + 2.0 * xz.abs() * exz);
        let aa = atoms.normalized_product(u);
        [
            -aa * cross / (PI * norm1),
            -aa * square / (2.0 * PI * norm2),
            aa * cross_err / (PI * norm1),
            aa * square_err / (2.0 * PI * norm2),
        ]
    };
    let scale = (0.5 / l).min(1.0 / zp).min(atoms.min_frequency());
    let r = integrate_semi_infinite_vec(integrand, 0.0, scale, &outer, 2);
    if let Some(e) = failure {
        return Err(e);
    }
    let a0 = atoms.static_product();
    let u1 = Energy {
        value: a0 * norm1 * r.value[0],
        error: a0 * norm1 * (r.error_estimate[0] + r.value[2].abs()),
    };
    let u2 = Energy {
        value: a0 * norm2 * r.value[1],
        error: a0 * norm2 * (r.error_estimate[1] + r.value[3].abs()),
    };
    if !r.converged {
        return Err(nonconvergence(
            format!("scattering potential at l = {l:e}, Z+ = {zp:e}"),
            u1.value + u2.value,
            u1.error + u2.error,
        ));
    }
    Ok((u1, u2))
}

/// Cross term `U1` between the free-space and scattering Green tensors.
pub fn u1_cross(stack: &LayerStack, atoms: &AtomPair, geom: &Geometry, tol: &Tolerance) -> Result<Energy> {
    Ok(scattering_parts(stack, atoms, geom, tol)?.0)
}

/// Pure scattering term `U2`.
pub fn u2_scatter(stack: &LayerStack, atoms: &AtomPair, geom: &Geometry, tol: &Tolerance) -> Result<Energy> {
    Ok(scattering_parts(stack, atoms, geom, tol)?.1)
}

/// Full two-atom potential above a layer stack.
pub fn u_total(stack: &LayerStack, atoms: &AtomPair, geom: &Geometry, tol: &Tolerance) -> Result<PotentialBreakdown> {
    let u0 = u0_free(atoms, geom, tol)?;
    let (u1, u2) = scattering_parts(stack, atoms, geom, tol)?;
    Ok(PotentialBreakdown::from_parts(u0, u1, u2))
}

/// Two-atom potential in either kind of scene. In a bulk medium the whole
/// potential is reported as `u0`.
pub fn evaluate(scene: &Scene, atoms: &AtomPair, geom: &Geometry, tol: &Tolerance) -> Result<PotentialBreakdown> {
    match scene {
        Scene::Bulk(medium) => {
            let u0 = u_bulk(medium, atoms, geom.l(), tol)?;
            Ok(PotentialBreakdown::from_parts(u0, Energy::default(), Energy::default()))
        }
        Scene::Layered(stack) => u_total(stack, atoms, geom, tol),
    }
}

/// Single-atom (Casimir-Polder) potential of `atom` at height `z`.
pub fn u_single_atom(stack: &LayerStack, atom: &AtomModel, z: f64, tol: &Tolerance) -> Result<Energy> {
    check_tol(tol)?;
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::InvalidParameter(format!("atom must sit above the surface, got z = {z}")));
    }
    if stack.is_vacuum() {
        return Ok(Energy::default());
    }
    let (inner, outer) = split_tolerance(tol);
    let zp = 2.0 * z;
    let norm = 1.0 / zp.powi(3);
    let a0 = atom.static_polarizability();
    let mut failure: Option<Error> = None;
    let integrand = |u: f64| -> [f64; 2] {
        if failure.is_some() {
            return [0.0; 2];
        }
        let frozen = match stack.at_frequency(u) {
            Ok(f) => f,
            Err(e) => {
                failure = Some(e);
                return [0.0; 2];
            }
        };
        let r = scattering_components(&frozen, 0.0, zp, &inner);
        if !r.converged {
            failure = Some(Error::InnerNonconvergence {
                abscissa: u,
                value: r.value.iter().fold(0.0, |m, v| m.max(v.abs())),
                error: r.error_estimate.iter().fold(0.0, |m, v| m.max(*v)),
            });
            return [0.0; 2];
        }
        let a = atom.polarizability_iu(u) / a0;
        let [xx, yy, _, zz] = r.value;
        let [exx, eyy, _, ezz] = r.error_estimate;
        [a * (xx + yy + zz) / (2.0 * PI * norm), a * (exx + eyy + ezz) / (2.0 * PI * norm)]
    };
    let scale = (1.0 / zp).min(atom.min_frequency());
    let r = integrate_semi_infinite_vec(integrand, 0.0, scale, &outer, 1);
    if let Some(e) = failure {
        return Err(e);
    }
    let e = Energy {
        value: a0 * norm * r.value[0],
        error: a0 * norm * (r.error_estimate[0] + r.value[1].abs()),
    };
    if !r.converged {
        return Err(nonconvergence(format!("single-atom potential at z = {z:e}"), e.value, e.error));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn bulk_nonretarded_coefficient() {
        let atoms = AtomPair::reference();
        let l = 1e-3;
        let u = u_bulk(&MaterialModel::Vacuum, &atoms, l, &tol()).unwrap();
        // C_nr = 3/(16 pi^3) int alpha^2 du = 1/(48 pi^2) for the reference atom.
        let want = -1.0 / (48.0 * PI * PI) / l.powi(6);
        assert!((u.value / want - 1.0).abs() < 1e-4);
    }

    #[test]
    fn bulk_is_attractive_and_decreasing() {
        let atoms = AtomPair::reference();
        let m = MaterialModel::dielectric(2.0, 1.5, 0.1).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for &l in &[0.01, 0.1, 1.0, 10.0] {
            let u = u_bulk(&m, &atoms, l, &tol()).unwrap().value;
            assert!(u < 0.0 && u > prev);
            prev = u;
        }
    }

    #[test]
    fn vacuum_stack_has_no_scattering() {
        let atoms = AtomPair::reference();
        let g = Geometry::parallel(0.1, 0.3).unwrap();
        let b = u_total(&LayerStack::vacuum(), &atoms, &g, &tol()).unwrap();
        assert_eq!(b.u1, 0.0);
        assert_eq!(b.u2, 0.0);
        assert_eq!(b.total, b.u0);
        assert_eq!(
            u_single_atom(&LayerStack::vacuum(), &atoms.a, 0.3, &tol()).unwrap().value,
            0.0
        );
    }

    #[test]
    fn perfect_plate_nonretarded_closed_forms() {
        let atoms = AtomPair::reference();
        let c_nr = 1.0 / (48.0 * PI * PI);
        let stack = LayerStack::half_space(MaterialModel::PerfectConductor).unwrap();
        let g = Geometry::new(0.0, 1e-3, 6e-4, 1.4e-3).unwrap();
        let b = u_total(&stack, &atoms, &g, &tol()).unwrap();
        let (x, z, zp) = (g.x_sep(), g.z_sep(), g.z_plus());
        let (l, lp) = (g.l(), g.l_plus());
        let u1 = (4.0 * x.powi(4) - 2.0 * z * z * zp * zp + x * x * (zp * zp + z * z)) / (3.0 * l.powi(5) * lp.powi(5)) * c_nr;
        let u2 = -c_nr / lp.powi(6);
        assert!((b.u1 / u1 - 1.0).abs() < 0.01, "{} vs {}", b.u1, u1);
        assert!((b.u2 / u2 - 1.0).abs() < 0.01, "{} vs {}", b.u2, u2);
    }

    #[test]
    fn single_atom_scales_as_inverse_cube() {
        let atom = AtomModel::reference();
        let stack = LayerStack::half_space(MaterialModel::PerfectConductor).unwrap();
        let u1 = u_single_atom(&stack, &atom, 1e-4, &tol()).unwrap().value;
        let u2 = u_single_atom(&stack, &atom, 2e-4, &tol()).unwrap().value;
        assert!((u1 / u2 - 8.0).abs() < 8e-3);
        // Image-dipole result -d^2 / (48 pi z^3).
        assert!((u1 / (-1.0 / (48.0 * PI * 1e-12)) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn single_atom_attracted_to_dielectric() {
        let atom = AtomModel::reference();
        let stack = LayerStack::half_space(MaterialModel::dielectric(3.0, 1.0, 0.001).unwrap()).unwrap();
        for &z in &[0.01, 0.1, 1.0, 10.0] {
            assert!(u_single_atom(&stack, &atom, z, &tol()).unwrap().value < 0.0);
        }
    }
}
