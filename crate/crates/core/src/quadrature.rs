//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! All integrators are deterministic: the subdivision order depends only on the
//! integrand values, and the final sums are taken in abscissa order.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Error targets and subdivision budget for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    /// Maximum number of bisections performed after the initial panels.
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-8,
            abs: 1e-14,
            max_panels: 2000,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_panels: usize) -> Result<Self> {
        if !(rel.is_finite() && rel > 0.0 && abs.is_finite() && abs >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be finite with rel > 0 and abs >= 0, got rel = {rel}, abs = {abs}"
            )));
        }
        Ok(Tolerance {
            rel,
            abs,
            max_panels,
        })
    }

    pub fn with_rel(self, rel: f64) -> Self {
        Tolerance { rel, ..self }
    }

    pub fn with_abs(self, abs: f64) -> Self {
        Tolerance { abs, ..self }
    }

    /// Error target for an integral with value `value` and absolute integral `l1`.
    fn target(&self, value: f64, l1: f64) -> f64 {
        (self.rel * value.abs())
            .max(self.abs)
            .max(ROUNDOFF_GUARD * l1)
            .max(RESOLUTION_FLOOR)
    }
}

/// Errors below this size are lost to gradual underflow and always accepted.
const RESOLUTION_FLOOR: f64 = f64::MIN_POSITIVE / f64::EPSILON;

/// Below this multiple of the integral of |f| no error estimate is meaningful.
const ROUNDOFF_GUARD: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Result of integrating an `N`-component integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecQuadResult<const N: usize> {
    pub value: [f64; N],
    pub error_estimate: [f64; N],
    pub evaluations: usize,
    pub converged: bool,
}

impl<const N: usize> VecQuadResult<N> {
    pub fn component(&self, k: usize) -> QuadResult {
        QuadResult {
            value: self.value[k],
            error_estimate: self.error_estimate[k],
            evaluations: self.evaluations,
            converged: self.converged,
        }
    }
}

/// Integration domain for the iterated integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { a: f64, b: f64 },
    /// `[start, inf)`; `scale` is the length over which the integrand decays.
    SemiInfinite { start: f64, scale: f64 },
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for the nodes `XGK[1]`, `XGK[3]`, `XGK[5]` and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
    l1: [f64; N],
}

fn kronrod<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Panel<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut fv1 = [[0.0; N]; 7];
    let mut fv2 = [[0.0; N]; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        fv1[j] = f(centre - dx);
        fv2[j] = f(centre + dx);
    }

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let mut l1 = [0.0; N];
    for k in 0..N {
        let mut resk = WGK[7] * fc[k];
        let mut resg = WG[3] * fc[k];
        let mut resabs = WGK[7] * fc[k].abs();
        for j in 0..7 {
            let s = fv1[j][k] + fv2[j][k];
            resk += WGK[j] * s;
            resabs += WGK[j] * (fv1[j][k].abs() + fv2[j][k].abs());
            if j % 2 == 1 {
                resg += WG[j / 2] * s;
            }
        }
        let mean = 0.5 * resk;
        let mut resasc = WGK[7] * (fc[k] - mean).abs();
        for j in 0..7 {
            resasc += WGK[j] * ((fv1[j][k] - mean).abs() + (fv2[j][k] - mean).abs());
        }
        let h = half.abs();
        resasc *= h;
        resabs *= h;
        let mut err = ((resk - resg) * half).abs();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * resabs);
        }
        value[k] = resk * half;
        error[k] = err;
        l1[k] = resabs;
    }
    Panel { a, b, value, error, l1 }
}

/// Heap entry ordered by key, ties broken towards the lower panel index.
struct Entry {
    key: f64,
    index: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Adaptive integration of a vector-valued integrand over the consecutive
/// intervals of `points`.
///
/// Only the first `active` components steer refinement and decide convergence;
/// the remaining ones are integrated on the same panels.
pub fn integrate_vec<const N: usize, F>(
    mut f: F,
    points: &[f64],
    tol: &Tolerance,
    active: usize,
) -> VecQuadResult<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let active = active.min(N);
    let mut panels: Vec<Panel<N>> = Vec::with_capacity(points.len() + tol.max_panels + 1);
    for w in points.windows(2) {
        if w[1] > w[0] {
            panels.push(kronrod(&mut f, w[0], w[1]));
        }
    }
    let mut evaluations = 15 * panels.len();
    if panels.is_empty() {
        return VecQuadResult {
            value: [0.0; N],
            error_estimate: [0.0; N],
            evaluations,
            converged: true,
        };
    }

    let mut total = [0.0; N];
    let mut total_err = [0.0; N];
    let mut total_l1 = [0.0; N];
    for p in &panels {
        for k in 0..N {
            total[k] += p.value[k];
            total_err[k] += p.error[k];
            total_l1[k] += p.l1[k];
        }
    }
    if !total.iter().chain(total_err.iter()).all(|v| v.is_finite()) {
        return VecQuadResult {
            value: total,
            error_estimate: [f64::INFINITY; N],
            evaluations,
            converged: false,
        };
    }

    let mut scale = [f64::MIN_POSITIVE; N];
    for k in 0..active {
        scale[k] = tol.target(total[k], total_l1[k]).max(f64::MIN_POSITIVE);
    }
    let key = |p: &Panel<N>| -> f64 {
        (0..active)
            .map(|k| p.error[k] / scale[k])
            .fold(0.0, f64::max)
    };
    let done = |val: &[f64; N], err: &[f64; N], l1: &[f64; N]| -> bool {
        (0..active).all(|k| err[k] <= tol.target(val[k], l1[k]))
    };

    let mut heap: BinaryHeap<Entry> = panels
        .iter()
        .enumerate()
        .map(|(index, p)| Entry { key: key(p), index })
        .collect();

    let mut splits = 0;
    let mut finite = true;
    while !done(&total, &total_err, &total_l1) && splits < tol.max_panels {
        let Some(Entry { index, .. }) = heap.pop() else {
            break;
        };
        let p = panels[index];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            continue;
        }
        let left = kronrod(&mut f, p.a, mid);
        let right = kronrod(&mut f, mid, p.b);
        evaluations += 30;
        splits += 1;
        for k in 0..N {
            total[k] += left.value[k] + right.value[k] - p.value[k];
            total_err[k] += left.error[k] + right.error[k] - p.error[k];
            total_l1[k] += left.l1[k] + right.l1[k] - p.l1[k];
        }
        if !total.iter().chain(total_err.iter()).all(|v| v.is_finite()) {
            finite = false;
            break;
        }
        panels[index] = left;
        panels.push(right);
        heap.push(Entry {
            key: key(&left),
            index,
        });
        heap.push(Entry {
            key: key(&right),
            index: panels.len() - 1,
        });
    }

    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let mut l1 = [0.0; N];
    for p in &panels {
        for k in 0..N {
            value[k] += p.value[k];
            error[k] += p.error[k];
            l1[k] += p.l1[k];
        }
    }
    VecQuadResult {
        value,
        error_estimate: error,
        evaluations,
        converged: finite && done(&value, &error, &l1),
    }
}

fn scalar<F: FnMut(f64) -> f64>(mut f: F) -> impl FnMut(f64) -> [f64; 1] {
    move |x| [f(x)]
}

/// Integrates `f` over `[a, b]`.
pub fn integrate_interval<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: &Tolerance) -> QuadResult {
    integrate_with_breakpoints(f, &[a, b], tol)
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the given panels.
pub fn integrate_with_breakpoints<F: FnMut(f64) -> f64>(
    f: F,
    points: &[f64],
    tol: &Tolerance,
) -> QuadResult {
    integrate_vec(scalar(f), points, tol, 1).component(0)
}

/// Breakpoints of the map `x = start + scale * t / (1 - t)` in `t`.
const SEMI_INFINITE_BREAKS: [f64; 3] = [0.0, 0.5, 1.0];

/// Integrates a vector-valued `f` over `[start, inf)` through the map
/// `x = start + scale * t / (1 - t)`.
pub fn integrate_semi_infinite_vec<const N: usize, F>(
    mut f: F,
    start: f64,
    scale: f64,
    tol: &Tolerance,
    active: usize,
) -> VecQuadResult<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let mapped = move |t: f64| {
        let s = 1.0 - t;
        let x = start + scale * t / s;
        let jac = scale / (s * s);
        let mut v = f(x);
        for c in v.iter_mut() {
            *c *= jac;
        }
        v
    };
    integrate_vec(mapped, &SEMI_INFINITE_BREAKS, tol, active)
}

/// Integrates `f` over `[start, inf)`; `scale` is the decay length of `f`.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    f: F,
    start: f64,
    scale: f64,
    tol: &Tolerance,
) -> QuadResult {
    integrate_semi_infinite_vec(scalar(f), start, scale, tol, 1).component(0)
}

fn integrate_domain_vec<const N: usize, F>(
    f: F,
    domain: Domain,
    tol: &Tolerance,
    active: usize,
) -> VecQuadResult<N>
where
    F: FnMut(f64) -> [f64; N],
{
    match domain {
        Domain::Finite { a, b } => integrate_vec(f, &[a, b], tol, active),
        Domain::SemiInfinite { start, scale } => integrate_semi_infinite_vec(f, start, scale, tol, active),
    }
}

/// Integrates `f` over `domain`.
pub fn integrate_domain<F: FnMut(f64) -> f64>(f: F, domain: Domain, tol: &Tolerance) -> QuadResult {
    integrate_domain_vec(scalar(f), domain, tol, 1).component(0)
}

/// Iterated integral `int_outer dx int_inner dy f(x, y)`.
///
/// The reported error is the outer estimate plus the outer integral of the
/// inner error estimates. An inner integral that fails to converge aborts the
/// whole evaluation.
pub fn integrate_iterated_2d<F>(
    mut f: F,
    outer: Domain,
    inner: Domain,
    outer_tol: &Tolerance,
    inner_tol: &Tolerance,
) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> f64,
{
    let mut failure: Option<Error> = None;
    let mut evaluations = 0;
    let res = integrate_domain_vec::<2, _>(
        |x| {
            if failure.is_some() {
                return [0.0, 0.0];
            }
            let r = integrate_domain(|y| f(x, y), inner, inner_tol);
            evaluations += r.evaluations;
            if !r.converged {
                failure = Some(Error::InnerNonconvergence {
                    abscissa: x,
                    value: r.value,
                    error: r.error_estimate,
                });
            }
            [r.value, r.error_estimate]
        },
        outer,
        outer_tol,
        1,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(QuadResult {
        value: res.value[0],
        error_estimate: res.error_estimate[0] + res.value[1].abs(),
        evaluations,
        converged: res.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_interval(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, &Tolerance::default());
        assert!(r.converged);
        assert!((r.value - (32.0 - 8.0)).abs() < 1e-13);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn gaussian_tail() {
        let r = integrate_semi_infinite(|x| (-x * x).exp(), 0.0, 1.0, &Tolerance::default());
        assert!(r.converged);
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate_interval(|x| 1.0 / x.sqrt(), 0.0, 1.0, &Tolerance::default());
        assert!(r.converged, "{r:?}");
        assert!((r.value - 2.0).abs() < 1e-7);
        assert!((r.value - 2.0).abs() <= 3.0 * r.error_estimate);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tol = Tolerance {
            rel: 1e-14,
            abs: 0.0,
            max_panels: 3,
        };
        let r = integrate_interval(|x| (50.0 * x).sin() / (1e-3 + x), 0.0, 20.0, &tol);
        assert!(!r.converged);
        assert_eq!(r.evaluations, 15 * 7);
    }

    #[test]
    fn vector_components_share_panels() {
        let r = integrate_vec(|x| [x.exp(), x.cos(), 1.0], &[0.0, 1.0, 3.0], &Tolerance::default(), 2);
        assert!(r.converged);
        assert!((r.value[0] - (3f64.exp() - 1.0)).abs() < 1e-12);
        assert!((r.value[1] - 3f64.sin()).abs() < 1e-13);
        assert!((r.value[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn iterated_gaussian() {
        let r = integrate_iterated_2d(
            |x, y| (-(x * x + y * y)).exp(),
            Domain::SemiInfinite { start: 0.0, scale: 1.0 },
            Domain::Finite { a: 0.0, b: 10.0 },
            &Tolerance::default().with_rel(1e-7),
            &Tolerance::default(),
        )
        .unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-9);
    }

    #[test]
    fn inner_failure_names_abscissa() {
        let inner = Tolerance {
            rel: 1e-15,
            abs: 0.0,
            max_panels: 1,
        };
        let e = integrate_iterated_2d(
            |x, y| (x * 40.0 * y).sin() / (y + 1e-4),
            Domain::Finite { a: 1.0, b: 2.0 },
            Domain::Finite { a: 0.0, b: 5.0 },
            &Tolerance::default(),
            &inner,
        )
        .unwrap_err();
        assert!(matches!(e, Error::InnerNonconvergence { abscissa, .. } if (1.0..=2.0).contains(&abscissa)));
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (x * 3.0).sin().abs().sqrt() * (-x).exp();
        let a = integrate_semi_infinite(f, 0.0, 1.0, &Tolerance::default());
        let b = integrate_semi_infinite(f, 0.0, 1.0, &Tolerance::default());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
    }
}
