//! Green tensors of bulk media and planar multilayers at imaginary frequency.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::quadrature::{integrate_vec, Tolerance, VecQuadResult};
use crate::specfun::bessel_j012;

/// Positions of the two atoms in the xz-plane of the vacuum region above a stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub x_a: f64,
    pub z_a: f64,
    pub x_b: f64,
    pub z_b: f64,
}

impl Geometry {
    pub fn new(x_a: f64, z_a: f64, x_b: f64, z_b: f64) -> Result<Self> {
        let g = Geometry { x_a, z_a, x_b, z_b };
        if ![x_a, z_a, x_b, z_b].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite coordinates in {g:?}")));
        }
        if !(z_a > 0.0 && z_b > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "atoms must sit above the surface, got z_A = {z_a}, z_B = {z_b}"
            )));
        }
        if g.l() == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        Ok(g)
    }

    /// Both atoms at height `z`, laterally separated by `l`.
    pub fn parallel(z: f64, l: f64) -> Result<Self> {
        Self::new(0.0, z, l, z)
    }

    /// Atom A at height `z_a`, atom B directly above it at `z_a + l`.
    pub fn vertical(z_a: f64, l: f64) -> Result<Self> {
        Self::new(0.0, z_a, 0.0, z_a + l)
    }

    pub fn x_sep(&self) -> f64 {
        self.x_b - self.x_a
    }

    pub fn z_sep(&self) -> f64 {
        self.z_b - self.z_a
    }

    pub fn z_plus(&self) -> f64 {
        self.z_a + self.z_b
    }

    pub fn l(&self) -> f64 {
        self.x_sep().hypot(self.z_sep())
    }

    pub fn l_plus(&self) -> f64 {
        self.x_sep().hypot(self.z_plus())
    }

    pub fn point_a(&self) -> [f64; 3] {
        [self.x_a, 0.0, self.z_a]
    }

    pub fn point_b(&self) -> [f64; 3] {
        [self.x_b, 0.0, self.z_b]
    }
}

/// Real 3x3 tensor indexed by `x, y, z`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GreenTensor(pub [[f64; 3]; 3]);

impl GreenTensor {
    pub fn zero() -> Self {
        GreenTensor([[0.0; 3]; 3])
    }

    /// Tensor with the planar-geometry pattern: `xz = -zx`, no `y` coupling.
    pub fn planar(xx: f64, yy: f64, zz: f64, xz: f64) -> Self {
        GreenTensor([[xx, 0.0, xz], [0.0, yy, 0.0], [-xz, 0.0, zz]])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        GreenTensor(t)
    }

    /// `sum_ij a_ij b_ij`.
    pub fn contract(&self, other: &GreenTensor) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(r, s)| r.iter().zip(s.iter()).map(|(a, b)| a * b).sum::<f64>())
            .sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        GreenTensor(self.0.map(|row| row.map(|v| v * s)))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `u^2 G0(rA, rB, iu)` in a homogeneous medium, finite at `u = 0`.
pub fn bulk_green_scaled(medium: &MaterialModel, ra: [f64; 3], rb: [f64; 3], u: f64) -> Result<GreenTensor> {
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::InvalidParameter(format!("frequency must be non-negative, got {u}")));
    }
    let d = [rb[0] - ra[0], rb[1] - ra[1], rb[2] - ra[2]];
    let l = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    if l == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let (eps, mu) = medium.response_iu(u)?;
    let n = (eps * mu).sqrt();
    Ok(bulk_scaled_from(n, mu, d, l, u))
}

fn bulk_scaled_from(n: f64, mu: f64, d: [f64; 3], l: f64, u: f64) -> GreenTensor {
    let nl = n * l;
    let f = u * u + u / nl + 1.0 / (nl * nl);
    let g = u * u + 3.0 * u / nl + 3.0 / (nl * nl);
    let pre = mu / (4.0 * PI * l) * (-n * u * l).exp();
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            t[i][j] = pre * (f * delta - g * d[i] * d[j] / (l * l));
        }
    }
    GreenTensor(t)
}

/// Bulk Green tensor `G0(rA, rB, iu)` for `u > 0`.
pub fn bulk_green(medium: &MaterialModel, ra: [f64; 3], rb: [f64; 3], u: f64) -> Result<GreenTensor> {
    if !(u > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "the bulk Green tensor diverges at u = 0; use bulk_green_scaled (got u = {u})"
        )));
    }
    Ok(bulk_green_scaled(medium, ra, rb, u)?.scaled(1.0 / (u * u)))
}

/// One layer of a planar stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    pub material: MaterialModel,
    pub thickness: f64,
}

/// Planar stack: semi-infinite substrate (layer 0), finite films, and the
/// vacuum half space (layer N) that hosts the atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    materials: Vec<MaterialModel>,
    thickness: Vec<f64>,
}

impl LayerStack {
    /// `films` are listed from the substrate upwards.
    pub fn new(substrate: MaterialModel, films: Vec<Layer>) -> Result<Self> {
        substrate.validate()?;
        let mut materials = vec![substrate];
        let mut thickness = vec![f64::INFINITY];
        for f in films {
            f.material.validate()?;
            if !(f.thickness.is_finite() && f.thickness > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "film thickness must be positive and finite, got {}",
                    f.thickness
                )));
            }
            materials.push(f.material);
            thickness.push(f.thickness);
        }
        materials.push(MaterialModel::Vacuum);
        thickness.push(f64::INFINITY);
        Ok(LayerStack { materials, thickness })
    }

    pub fn half_space(material: MaterialModel) -> Result<Self> {
        Self::new(material, Vec::new())
    }

    pub fn vacuum() -> Self {
        Self::half_space(MaterialModel::Vacuum).expect("vacuum is valid")
    }

    /// Materials of layers `0..=N`; the last one is vacuum.
    pub fn materials(&self) -> &[MaterialModel] {
        &self.materials
    }

    /// Thicknesses of layers `0..=N`; the outer two are infinite.
    pub fn thicknesses(&self) -> &[f64] {
        &self.thickness
    }

    /// True when nothing in the stack can reflect.
    pub fn is_vacuum(&self) -> bool {
        self.materials.iter().all(|m| match m {
            MaterialModel::Vacuum => true,
            MaterialModel::Constant { eps, mu } => *eps == 1.0 && *mu == 1.0,
            MaterialModel::DrudeLorentz { electric, magnetic } => {
                electric.plasma == 0.0 && magnetic.plasma == 0.0
            }
            _ => false,
        })
    }

    /// Layer responses at one imaginary frequency.
    pub fn at_frequency(&self, u: f64) -> Result<FrozenStack> {
        let mut layers = Vec::with_capacity(self.materials.len());
        for m in &self.materials {
            layers.push(match m.perfect_coefficients() {
                Some((rs, rp)) => LayerResponse::Perfect { rs, rp },
                None => {
                    let (eps, mu) = m.response_iu(u)?;
                    LayerResponse::Finite { eps, mu }
                }
            });
        }
        Ok(FrozenStack {
            u,
            layers,
            thickness: self.thickness.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum LayerResponse {
    Finite { eps: f64, mu: f64 },
    Perfect { rs: f64, rp: f64 },
}

/// A [`LayerStack`] with its response functions evaluated at a fixed `u`.
#[derive(Debug, Clone)]
pub struct FrozenStack {
    u: f64,
    layers: Vec<LayerResponse>,
    thickness: Vec<f64>,
}

impl FrozenStack {
    /// `(r_s, r_p)` at the top interface for transverse wavenumber `q`.
    pub fn reflection(&self, q: f64) -> (f64, f64) {
        let u2 = self.u * self.u;
        let q2 = q * q;
        let mut r = (0.0, 0.0);
        for j in 1..self.layers.len() {
            r = match (self.layers[j - 1], self.layers[j]) {
                (LayerResponse::Perfect { rs, rp }, _) => (rs, rp),
                (_, LayerResponse::Perfect { .. }) => (0.0, 0.0),
                (LayerResponse::Finite { eps: e0, mu: m0 }, LayerResponse::Finite { eps: e1, mu: m1 }) => {
                    let n0 = e0 * m0;
                    let n1 = e1 * m1;
                    let b0 = (u2 * n0 + q2).sqrt();
                    let b1 = (u2 * n1 + q2).sqrt();
                    let damp = if r == (0.0, 0.0) {
                        0.0
                    } else {
                        (-2.0 * b0 * self.thickness[j - 1]).exp()
                    };
                    let interface = |l0: f64, l1: f64| Interface {
                        plus: l0 * b1 + l1 * b0,
                        // l0^2 b1^2 - l1^2 b0^2 expanded, so that nearly equal terms never subtract.
                        squares: u2 * (l0 * l0 * n1 - l1 * l1 * n0) + q2 * (l0 * l0 - l1 * l1),
                    };
                    (
                        interface(m0, m1).step(damp * r.0),
                        interface(e0, e1).step(damp * r.1),
                    )
                }
            };
        }
        r
    }
}

/// One interface of the reflection recurrence: `plus = l0 b1 + l1 b0` and
/// `squares = l0^2 b1^2 - l1^2 b0^2`.
struct Interface {
    plus: f64,
    squares: f64,
}

impl Interface {
    /// Reflection at the interface given the damped coefficient from below.
    fn step(&self, below: f64) -> f64 {
        let minus = self.squares / self.plus;
        (minus + self.plus * below) / (self.plus + minus * below)
    }
}

/// `(r_s, r_p)` of the stack at transverse wavenumber `q` and frequency `iu`.
pub fn reflection_coefficients(stack: &LayerStack, q: f64, u: f64) -> Result<(f64, f64)> {
    if !(q >= 0.0 && u >= 0.0 && q.is_finite() && u.is_finite()) || (q == 0.0 && u == 0.0) {
        return Err(Error::InvalidParameter(format!(
            "reflection needs q >= 0 and u >= 0, not both zero; got q = {q}, u = {u}"
        )));
    }
    Ok(stack.at_frequency(u)?.reflection(q))
}

/// Scaled scattering tensor `u^2 G1` with its quadrature error bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledGreen {
    pub tensor: GreenTensor,
    pub error: GreenTensor,
}

/// Number of decay lengths kept in the transverse-wavenumber integral.
const ENVELOPE_DECAY: f64 = 48.0;

/// Lateral separation, relative to `Z+`, above which panels follow the Bessel oscillation.
const OSCILLATION_THRESHOLD: f64 = 0.1;

/// Breakpoints for the q-integral: geometric towards the envelope peak, then
/// every half Bessel period when the kernel oscillates.
pub(crate) fn q_breakpoints(u: f64, x_sep: f64, z_plus: f64) -> Vec<f64> {
    let reach = u + ENVELOPE_DECAY / z_plus;
    let q_max = (reach * reach - u * u).sqrt();
    let mut pts: Vec<f64> = [0.0, 1.0 / 32.0, 1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0, 1.0]
        .iter()
        .map(|f| f * q_max)
        .collect();
    let x = x_sep.abs();
    if x > OSCILLATION_THRESHOLD * z_plus {
        let step = PI / x;
        let mut q = step;
        while q < q_max {
            pts.push(q);
            q += step;
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * q_max);
    }
    pts
}

/// `[xx, yy, xz, zz]` of `u^2 G1` by direct q-quadrature.
pub(crate) fn scattering_components(
    frozen: &FrozenStack,
    x_sep: f64,
    z_plus: f64,
    tol: &Tolerance,
) -> VecQuadResult<4> {
    let u = frozen.u;
    let u2 = u * u;
    let x = x_sep.abs();
    let sx = x_sep.signum();
    let integrand = |q: f64| {
        let (rs, rp) = frozen.reflection(q);
        let b = (u2 + q * q).sqrt();
        let e = (-b * z_plus).exp();
        if e == 0.0 || b == 0.0 {
            return [0.0; 4];
        }
        let [j0, j1, j2] = bessel_j012(q * x);
        let s = u2 * rs / b;
        let qe = q * e;
        [
            qe * ((j0 + j2) * s - b * (j0 - j2) * rp) / (8.0 * PI),
            qe * ((j0 - j2) * s - b * (j0 + j2) * rp) / (8.0 * PI),
            -sx * q * qe * j1 * rp / (4.0 * PI),
            -q * q * qe * j0 * rp / (4.0 * PI * b),
        ]
    };
    integrate_vec(integrand, &q_breakpoints(u, x, z_plus), tol, 4)
}

fn check_geometry_tol(geom: &Geometry, tol: &Tolerance) -> Result<()> {
    if !(geom.z_a > 0.0 && geom.z_b > 0.0) {
        return Err(Error::InvalidParameter("atoms must sit above the surface".into()));
    }
    if !(tol.rel > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", tol.rel)));
    }
    Ok(())
}

/// `u^2 G1(rA, rB, iu)`, finite at `u = 0`.
pub fn scattering_green_scaled(stack: &LayerStack, geom: &Geometry, u: f64, tol: &Tolerance) -> Result<ScaledGreen> {
    check_geometry_tol(geom, tol)?;
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::InvalidParameter(format!("frequency must be non-negative, got {u}")));
    }
    if stack.is_vacuum() {
        return Ok(ScaledGreen {
            tensor: GreenTensor::zero(),
            error: GreenTensor::zero(),
        });
    }
    let frozen = stack.at_frequency(u)?;
    let r = scattering_components(&frozen, geom.x_sep(), geom.z_plus(), tol);
    if !r.converged {
        return Err(Error::Nonconvergence {
            context: format!("scattering Green tensor at u = {u:e}"),
            value: r.value.iter().fold(0.0, |m, v| m.max(v.abs())),
            error: r.error_estimate.iter().fold(0.0, |m, v| m.max(*v)),
        });
    }
    let [xx, yy, xz, zz] = r.value;
    let [exx, eyy, exz, ezz] = r.error_estimate;
    Ok(ScaledGreen {
        tensor: GreenTensor::planar(xx, yy, zz, xz),
        error: GreenTensor([[exx, 0.0, exz], [0.0, eyy, 0.0], [exz, 0.0, ezz]]),
    })
}

/// Scattering Green tensor `G1(rA, rB, iu)` for `u > 0`.
pub fn scattering_green(stack: &LayerStack, geom: &Geometry, u: f64, tol: &Tolerance) -> Result<GreenTensor> {
    if !(u > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "the scattering Green tensor diverges at u = 0; use scattering_green_scaled (got u = {u})"
        )));
    }
    Ok(scattering_green_scaled(stack, geom, u, tol)?.tensor.scaled(1.0 / (u * u)))
}

/// Limiting regimes with closed-form scattering tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticRegime {
    /// Ideal reflector, lateral separation small compared with `Z+`.
    RetardedSmallXPerfect,
    /// Ideal reflector, all distances small compared with `1/u`.
    NonretardedPerfect,
    /// Non-magnetic half space, nonretarded.
    NonretardedDielectric,
    /// Non-electric half space, nonretarded.
    NonretardedMagnetic,
}

/// Closed-form `G1(rA, rB, iu)` above a half space of `material`.
pub fn scattering_green_asymptotic(
    regime: AsymptoticRegime,
    material: &MaterialModel,
    geom: &Geometry,
    u: f64,
) -> Result<GreenTensor> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::InvalidParameter(format!("frequency must be positive, got {u}")));
    }
    let x = geom.x_sep();
    let zp = geom.z_plus();
    let lp = geom.l_plus();
    let inv_u2 = 1.0 / (u * u);
    match regime {
        AsymptoticRegime::RetardedSmallXPerfect | AsymptoticRegime::NonretardedPerfect => {
            let (rs, rp) = material.perfect_coefficients().ok_or_else(|| {
                Error::Mismatch(format!("{regime:?} needs an ideal reflector, got {}", material.name()))
            })?;
            if regime == AsymptoticRegime::RetardedSmallXPerfect {
                let t = 1.0 / (zp * u);
                let e = (-zp * u).exp();
                let xx = e / (8.0 * PI * zp) * (rs - (1.0 + 2.0 * t + 2.0 * t * t) * rp);
                let zz = -e / (2.0 * PI * zp) * (t + t * t) * rp;
                Ok(GreenTensor::planar(xx, xx, zz, 0.0))
            } else {
                Ok(image_tensor(x, zp, lp, rp * inv_u2))
            }
        }
        AsymptoticRegime::NonretardedDielectric => {
            let (eps, mu) = pointwise(material, regime, u)?;
            if mu != 1.0 {
                return Err(Error::Mismatch(format!("dielectric regime needs mu = 1, got mu(iu) = {mu}")));
            }
            Ok(image_tensor(x, zp, lp, (eps - 1.0) / (eps + 1.0) * inv_u2))
        }
        AsymptoticRegime::NonretardedMagnetic => {
            let (eps, mu) = pointwise(material, regime, u)?;
            if eps != 1.0 {
                return Err(Error::Mismatch(format!("magnetic regime needs eps = 1, got eps(iu) = {eps}")));
            }
            let m = (mu - 1.0) / (mu + 1.0);
            let k = mu - 1.0;
            // (l+ - Z+) / X^2 = 1 / (l+ + Z+), finite as X -> 0.
            let s = lp + zp;
            let xx = m / (4.0 * PI * s) + k * zp / (16.0 * PI * lp * s);
            let yy = k / (16.0 * PI * s) + m * zp / (4.0 * PI * lp * s);
            let xz = k * x / (16.0 * PI * lp * s);
            let zz = k / (16.0 * PI * lp);
            Ok(GreenTensor::planar(xx, yy, zz, xz))
        }
    }
}

fn pointwise(material: &MaterialModel, regime: AsymptoticRegime, u: f64) -> Result<(f64, f64)> {
    if material.is_perfect() {
        return Err(Error::Mismatch(format!(
            "{regime:?} needs a material with finite response, got {}",
            material.name()
        )));
    }
    material.response_iu(u)
}

/// Static image-dipole tensor scaled by `weight`.
fn image_tensor(x: f64, zp: f64, lp: f64, weight: f64) -> GreenTensor {
    let c = weight / (4.0 * PI * lp.powi(5));
    GreenTensor::planar(
        c * (2.0 * x * x - zp * zp),
        -weight / (4.0 * PI * lp.powi(3)),
        c * (x * x - 2.0 * zp * zp),
        -c * 3.0 * x * zp,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default().with_rel(1e-10).with_abs(0.0)
    }

    #[test]
    fn vacuum_trace_polynomial() {
        let l = 0.7;
        for &u in &[0.0, 0.3, 2.0, 9.0] {
            let g = bulk_green_scaled(&MaterialModel::Vacuum, [0.0; 3], [0.3, -0.2, l], u).unwrap();
            let r = (0.3f64 * 0.3 + 0.2 * 0.2 + l * l).sqrt();
            let x = u * r;
            let want = 2.0 * (3.0 + 6.0 * x + 5.0 * x * x + 2.0 * x.powi(3) + x.powi(4)) * (-2.0 * x).exp()
                / (16.0 * PI * PI * r.powi(6));
            assert!((g.contract(&g) - want).abs() < 1e-13 * want);
        }
    }

    #[test]
    fn bulk_swap_is_transpose() {
        let m = MaterialModel::dielectric(2.0, 1.0, 0.1).unwrap();
        let a = [0.1, 0.2, 0.3];
        let b = [-0.4, 0.5, 1.0];
        let g = bulk_green(&m, a, b, 0.8).unwrap();
        assert_eq!(g, bulk_green(&m, b, a, 0.8).unwrap().transpose());
        assert!(bulk_green(&m, a, a, 0.8).is_err());
    }

    #[test]
    fn bulk_decays_at_high_frequency() {
        let g = bulk_green(&MaterialModel::Vacuum, [0.0; 3], [0.0, 0.0, 1.0], 800.0).unwrap();
        assert!(g.max_abs() < 1e-300);
    }

    #[test]
    fn vacuum_stack_reflects_nothing() {
        assert_eq!(reflection_coefficients(&LayerStack::vacuum(), 1.0, 1.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn perfect_reflectors() {
        let c = LayerStack::half_space(MaterialModel::PerfectConductor).unwrap();
        let p = LayerStack::half_space(MaterialModel::PerfectPermeable).unwrap();
        assert_eq!(reflection_coefficients(&c, 0.3, 2.0).unwrap(), (-1.0, 1.0));
        assert_eq!(reflection_coefficients(&p, 0.3, 2.0).unwrap(), (1.0, -1.0));
    }

    #[test]
    fn static_dielectric_at_normal_incidence() {
        let s = LayerStack::half_space(MaterialModel::constant(10.0, 1.0).unwrap()).unwrap();
        let (_, rp) = reflection_coefficients(&s, 0.0, 1.0).unwrap();
        let want = (10.0 - 10f64.sqrt()) / (10.0 + 10f64.sqrt());
        assert!((rp - want).abs() < 1e-15);
        assert!((want - 0.519_493_853_295_915_6).abs() < 1e-12);
    }

    #[test]
    fn half_space_closed_form() {
        let m = MaterialModel::drude_lorentz(
            crate::materials::Resonance::new(3.0, 1.0, 0.01).unwrap(),
            crate::materials::Resonance::new(2.0, 1.5, 0.0).unwrap(),
        )
        .unwrap();
        let s = LayerStack::half_space(m).unwrap();
        let (u, q) = (0.7, 1.3);
        let (e, mu) = m.response_iu(u).unwrap();
        let b = (u * u + q * q).sqrt();
        let b0 = (u * u * e * mu + q * q).sqrt();
        let (rs, rp) = reflection_coefficients(&s, q, u).unwrap();
        assert!((rs - (mu * b - b0) / (mu * b + b0)).abs() < 1e-15);
        assert!((rp - (e * b - b0) / (e * b + b0)).abs() < 1e-15);
    }

    #[test]
    fn rejects_origin() {
        assert!(reflection_coefficients(&LayerStack::vacuum(), 0.0, 0.0).is_err());
    }

    #[test]
    fn image_dipole_limits() {
        let s = LayerStack::half_space(MaterialModel::PerfectConductor).unwrap();
        let g = Geometry::new(0.0, 0.01, 0.004, 0.02).unwrap();
        let u = 1e-3 / g.z_plus();
        let num = scattering_green(&s, &g, u, &tol()).unwrap();
        let cf = scattering_green_asymptotic(AsymptoticRegime::NonretardedPerfect, &MaterialModel::PerfectConductor, &g, u)
            .unwrap();
        for (i, j) in [(0, 0), (1, 1), (2, 2), (0, 2), (2, 0)] {
            let d = (num.get(i, j) - cf.get(i, j)).abs();
            assert!(d < 1e-5 * cf.max_abs(), "component {i}{j}: {} vs {}", num.get(i, j), cf.get(i, j));
        }
    }

    #[test]
    fn retarded_small_x_limit() {
        for material in [MaterialModel::PerfectConductor, MaterialModel::PerfectPermeable] {
            let s = LayerStack::half_space(material).unwrap();
            let g = Geometry::new(0.0, 1.0, 3e-3, 2.0).unwrap();
            for &u in &[0.2, 1.0, 4.0] {
                let num = scattering_green(&s, &g, u, &tol()).unwrap();
                let cf = scattering_green_asymptotic(AsymptoticRegime::RetardedSmallXPerfect, &material, &g, u).unwrap();
                for k in 0..3 {
                    let rel = (num.get(k, k) - cf.get(k, k)).abs() / cf.get(k, k).abs();
                    assert!(rel < 1e-3, "{material:?} u = {u} component {k}: {rel}");
                }
            }
        }
    }

    #[test]
    fn asymptotic_regime_checks() {
        let g = Geometry::parallel(0.1, 0.2).unwrap();
        let diel = MaterialModel::constant(3.0, 1.0).unwrap();
        let t = scattering_green_asymptotic(AsymptoticRegime::NonretardedDielectric, &diel, &g, 2.0).unwrap();
        let lp = g.l_plus();
        let want = (g.x_sep().powi(2) - 2.0 * g.z_plus().powi(2)) / lp.powi(5) / (4.0 * PI) * 0.5 / 4.0;
        assert!((t.get(2, 2) - want).abs() < 1e-14 * want.abs());

        let mag1 = MaterialModel::constant(1.0, 1.0).unwrap();
        let z = scattering_green_asymptotic(AsymptoticRegime::NonretardedMagnetic, &mag1, &g, 2.0).unwrap();
        assert_eq!(z.max_abs(), 0.0);

        assert!(scattering_green_asymptotic(AsymptoticRegime::NonretardedPerfect, &diel, &g, 1.0).is_err());
        assert!(scattering_green_asymptotic(
            AsymptoticRegime::NonretardedDielectric,
            &MaterialModel::constant(2.0, 2.0).unwrap(),
            &g,
            1.0
        )
        .is_err());
    }

    #[test]
    fn conductor_off_diagonal_sign() {
        let g = Geometry::parallel(0.1, 0.2).unwrap();
        let t = scattering_green_asymptotic(AsymptoticRegime::NonretardedPerfect, &MaterialModel::PerfectConductor, &g, 1.0)
            .unwrap();
        let want = -3.0 * g.x_sep() * g.z_plus() / (4.0 * PI * g.l_plus().powi(5));
        assert!((t.get(0, 2) - want).abs() < 1e-14 * want.abs());
        assert_eq!(t.get(2, 0), -t.get(0, 2));
    }
}
