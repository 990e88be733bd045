//! Forces as finite-difference gradients of the potentials.

use crate::error::{Error, Result};
use crate::greens::{Geometry, LayerStack};
use crate::quadrature::Tolerance;

use super::{u_single_atom, u_total, AtomPair};

/// Atom on which a force acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    A,
    B,
}

/// Relative step used when none is given, in units of `min(l, z_A, z_B)`.
const DEFAULT_STEP: f64 = 1e-4;

fn shifted(geom: &Geometry, which: Which, axis: usize, h: f64) -> Result<Geometry> {
    let (mut xa, mut za, mut xb, mut zb) = (geom.x_a, geom.z_a, geom.x_b, geom.z_b);
    match (which, axis) {
        (Which::A, 0) => xa += h,
        (Which::A, _) => za += h,
        (Which::B, 0) => xb += h,
        (Which::B, _) => zb += h,
    }
    Geometry::new(xa, za, xb, zb)
}

fn stencil_tolerance(tol: &Tolerance) -> Tolerance {
    tol.with_rel((tol.rel * 1e-2).max(1e-12))
}

/// `-dU/dr` along x and z by central differences with one Richardson step,
/// together with the size of that Richardson correction.
fn gradient<F>(mut potential: F, geom: &Geometry, which: Which, step: Option<f64>) -> Result<([f64; 3], [f64; 3])>
where
    F: FnMut(&Geometry) -> Result<f64>,
{
    let h = match step {
        Some(h) if h.is_finite() && h > 0.0 => h,
        Some(h) => return Err(Error::InvalidParameter(format!("step must be positive, got {h}"))),
        None => DEFAULT_STEP * geom.l().min(geom.z_a).min(geom.z_b),
    };
    let mut out = [0.0; 3];
    let mut err = [0.0; 3];
    for (axis, slot) in [(0, 0), (2, 2)] {
        let mut central = |h: f64| -> Result<f64> {
            let up = potential(&shifted(geom, which, axis, h)?)?;
            let down = potential(&shifted(geom, which, axis, -h)?)?;
            Ok((up - down) / (2.0 * h))
        };
        let coarse = central(h)?;
        let fine = central(0.5 * h)?;
        out[slot] = -(4.0 * fine - coarse) / 3.0;
        err[slot] = (fine - coarse).abs() / 3.0;
    }
    Ok((out, err))
}

/// Force on one atom from the two-atom potential alone.
pub fn interatomic_force(
    which: Which,
    stack: &LayerStack,
    atoms: &AtomPair,
    geom: &Geometry,
    tol: &Tolerance,
    step: Option<f64>,
) -> Result<[f64; 3]> {
    Ok(interatomic_force_with_error(which, stack, atoms, geom, tol, step)?.0)
}

/// [`interatomic_force`] with the magnitude of the Richardson correction
/// per component.
pub fn interatomic_force_with_error(
    which: Which,
    stack: &LayerStack,
    atoms: &AtomPair,
    geom: &Geometry,
    tol: &Tolerance,
    step: Option<f64>,
) -> Result<([f64; 3], [f64; 3])> {
    let t = stencil_tolerance(tol);
    gradient(|g| Ok(u_total(stack, atoms, g, &t)?.total), geom, which, step)
}

/// Total force on one atom: the two-atom part plus its own single-atom
/// potential.
pub fn force(
    which: Which,
    stack: &LayerStack,
    atoms: &AtomPair,
    geom: &Geometry,
    tol: &Tolerance,
    step: Option<f64>,
) -> Result<[f64; 3]> {
    let mut f = interatomic_force(which, stack, atoms, geom, tol, step)?;
    let t = stencil_tolerance(tol);
    let (atom, z) = match which {
        Which::A => (&atoms.a, geom.z_a),
        Which::B => (&atoms.b, geom.z_b),
    };
    let h = step.unwrap_or(DEFAULT_STEP * geom.l().min(geom.z_a).min(geom.z_b));
    let single = |z: f64| -> Result<f64> { Ok(u_single_atom(stack, atom, z, &t)?.value) };
    let coarse = (single(z + h)? - single(z - h)?) / (2.0 * h);
    let fine = (single(z + 0.5 * h)? - single(z - 0.5 * h)?) / h;
    f[2] -= (4.0 * fine - coarse) / 3.0;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn vacuum_force_is_central_and_balanced() {
        let atoms = AtomPair::reference();
        let stack = LayerStack::vacuum();
        let l = 1e-3;
        let g = Geometry::parallel(0.5, l).unwrap();
        let tol = Tolerance::default();
        let fa = force(Which::A, &stack, &atoms, &g, &tol, None).unwrap();
        let fb = force(Which::B, &stack, &atoms, &g, &tol, None).unwrap();
        let c_nr = 1.0 / (48.0 * PI * PI);
        let want = 6.0 * c_nr / l.powi(7);
        // Atom A sits at smaller x and is pulled towards B.
        assert!((fa[0] / want - 1.0).abs() < 0.02, "{fa:?} vs {want}");
        assert!((fa[0] + fb[0]).abs() < 1e-6 * want);
        assert!(fa[2].abs() < 1e-6 * want);
    }

    #[test]
    fn rejects_bad_step() {
        let g = Geometry::parallel(0.5, 0.1).unwrap();
        let r = force(Which::A, &LayerStack::vacuum(), &AtomPair::reference(), &g, &Tolerance::default(), Some(0.0));
        assert!(r.is_err());
    }
}
