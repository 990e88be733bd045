//! Browser bindings: ratio curves for the demo page.

use vdw_core::figures::{Orientation, PRESET_DAMPING, PRESET_PLASMA, PRESET_TRANSVERSE};
use vdw_core::potential::asymptotic::plate_nonretarded;
use vdw_core::potential::u_total;
use vdw_core::{AtomPair, Geometry, LayerStack, MaterialModel, Tolerance};
use wasm_bindgen::prelude::*;

/// `points` logarithmically spaced values from `lo` to `hi`.
pub fn log_points(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(format!("need 0 < lo < hi, got {lo} and {hi}"));
    }
    if !(2..=400).contains(&points) {
        return Err(format!("points must lie in 2..=400, got {points}"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let n = (points - 1) as f64;
    Ok((0..points).map(|k| (a + (b - a) * k as f64 / n).exp()).collect())
}

fn orientation(vertical: bool) -> Orientation {
    if vertical {
        Orientation::Vertical
    } else {
        Orientation::Parallel
    }
}

fn geometry(o: Orientation, z: f64, l: f64) -> Result<Geometry, String> {
    match o {
        Orientation::Parallel => Geometry::parallel(z, l),
        Orientation::Vertical => Geometry::vertical(z, l),
    }
    .map_err(|e| e.to_string())
}

/// `eps(iu)` or `mu(iu)` of the preset Drude-Lorentz medium on `[0, u_max]`.
pub fn response_curve(plasma: f64, transverse: f64, damping: f64, u_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(u_max > 0.0 && u_max.is_finite()) || !(2..=2000).contains(&points) {
        return Err("need u_max > 0 and 2..=2000 points".into());
    }
    let m = MaterialModel::dielectric(plasma, transverse, damping).map_err(|e| e.to_string())?;
    (0..points)
        .map(|k| m.permittivity_iu(u_max * k as f64 / (points - 1) as f64).map_err(|e| e.to_string()))
        .collect()
}

/// Nonretarded `U / U0` above an ideal plate, in closed form.
pub fn plate_curve(conductor: bool, vertical: bool, z: f64, separations: &[f64]) -> Result<Vec<f64>, String> {
    let sign = if conductor { 1.0 } else { -1.0 };
    separations
        .iter()
        .map(|&l| {
            let b = plate_nonretarded(&geometry(orientation(vertical), z, l)?, 1.0, sign);
            Ok(b.total / b.u0)
        })
        .collect()
}

/// `U / U0` above the preset Drude-Lorentz half space by full quadrature;
/// points that fail to converge are NaN.
pub fn halfspace_curve(magnetic: bool, vertical: bool, z: f64, separations: &[f64], rel_tol: f64) -> Result<Vec<f64>, String> {
    let material = if magnetic {
        MaterialModel::magnetic(PRESET_PLASMA, PRESET_TRANSVERSE, PRESET_DAMPING)
    } else {
        MaterialModel::dielectric(PRESET_PLASMA, PRESET_TRANSVERSE, PRESET_DAMPING)
    }
    .map_err(|e| e.to_string())?;
    let stack = LayerStack::half_space(material).map_err(|e| e.to_string())?;
    let tol = Tolerance::default().with_rel(rel_tol);
    let atoms = AtomPair::reference();
    separations
        .iter()
        .map(|&l| {
            let g = geometry(orientation(vertical), z, l)?;
            Ok(u_total(&stack, &atoms, &g, &tol).map(|b| b.ratio().0).unwrap_or(f64::NAN))
        })
        .collect()
}

fn js(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = logPoints)]
pub fn log_points_js(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    js(log_points(lo, hi, points))
}

#[wasm_bindgen(js_name = responseCurve)]
pub fn response_curve_js(plasma: f64, transverse: f64, damping: f64, u_max: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    js(response_curve(plasma, transverse, damping, u_max, points))
}

#[wasm_bindgen(js_name = plateCurve)]
pub fn plate_curve_js(conductor: bool, vertical: bool, z: f64, separations: Vec<f64>) -> Result<Vec<f64>, JsValue> {
    js(plate_curve(conductor, vertical, z, &separations))
}

#[wasm_bindgen(js_name = halfspaceCurve)]
pub fn halfspace_curve_js(
    magnetic: bool,
    vertical: bool,
    z: f64,
    separations: Vec<f64>,
    rel_tol: f64,
) -> Result<Vec<f64>, JsValue> {
    js(halfspace_curve(magnetic, vertical, z, &separations, rel_tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plate_limits() {
        let l = log_points(1e-4, 1e-1, 4).unwrap();
        let c = plate_curve(true, false, 1e-3, &l).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-3);
        assert!(log_points(1.0, 0.5, 3).is_err());
    }

    #[test]
    fn halfspace_curve_matches_figure_trend() {
        let r = halfspace_curve(false, false, 0.01, &[0.05, 0.5], 1e-5).unwrap();
        assert!(r.iter().all(|x| *x > 0.0 && *x < 1.0));
    }

    #[test]
    fn response_starts_at_static_value() {
        let r = response_curve(3.0, 1.0, 0.001, 10.0, 11).unwrap();
        assert!((r[0] - 10.0).abs() < 1e-12);
        assert!(r.windows(2).all(|w| w[1] < w[0]));
    }
}
