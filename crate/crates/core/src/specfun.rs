//! Bessel functions of the first kind and the Laplace-Bessel integrals that
//! appear in the retarded half-space potentials.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, integrate_with_breakpoints, Tolerance};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// `J_n(x)` for `n` in {0, 1, 2} and `x >= 0`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    if n > 2 {
        return Err(Error::InvalidParameter(format!("Bessel order must be 0, 1 or 2, got {n}")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("Bessel argument must be finite and non-negative, got {x}")));
    }
    Ok(bessel_j012(x)[n as usize])
}

/// `[J_0(x), J_1(x), J_2(x)]` for `x >= 0`, sharing work between orders.
pub fn bessel_j012(x: f64) -> [f64; 3] {
    let x = x.abs();
    if x < SERIES_LIMIT {
        [series(0, x), series(1, x), series(2, x)]
    } else if x < ASYMPTOTIC_LIMIT {
        miller_012(x)
    } else {
        let j0 = hankel_asymptotic(0.0, x);
        let j1 = hankel_asymptotic(1.0, x);
        [j0, j1, 2.0 * j1 / x - j0]
    }
}

fn series(n: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= h / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = -h * h;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + n as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Backward recurrence normalized by `J_0 + 2 sum_k J_2k = 1`; returns `J_0..=J_n`.
fn miller_orders(n: usize, x: f64) -> Vec<f64> {
    let top = 2 * ((x as usize + n + 46) / 2);
    let mut out = vec![0.0; n + 1];
    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut norm = 0.0;
    for k in (1..=top).rev() {
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        let order = k - 1;
        if order <= n {
            out[order] = cur;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            for o in out.iter_mut() {
                *o *= 1e-250;
            }
        }
    }
    norm += cur;
    out.iter().map(|v| v / norm).collect()
}

fn miller_012(x: f64) -> [f64; 3] {
    let v = miller_orders(2, x);
    [v[0], v[1], v[2]]
}

fn hankel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    for k in 1..40u32 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() && k > 2 {
            break;
        }
        term = next;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Which Laplace-Bessel integral: `A_{n+}`, `A_{n-}` or `B_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbKind {
    A(Sign),
    B,
}

/// Arguments of the Laplace-Bessel integrals: decay rate `a` and Bessel
/// argument scale `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbParams {
    pub a: f64,
    pub beta: f64,
}

impl AbParams {
    fn check(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::Divergent(format!(
                "Laplace-Bessel integral needs a > 0, got a = {}",
                self.a
            )));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidParameter(format!("beta must be non-negative, got {}", self.beta)));
        }
        Ok(())
    }
}

fn check_order(n: u32) -> Result<()> {
    if (3..=5).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("closed forms exist for n = 3, 4, 5, got {n}")))
    }
}

/// Closed form of
/// `A_{n+-} = int_0^inf du u^n e^{-a u} [J_0(beta u) +- J_2(beta u)]` and
/// `B_n = int_0^inf du u^n e^{-a u} J_0(beta u)` for `n` in 3..=5.
pub fn ab_closed_form(kind: AbKind, n: u32, p: AbParams) -> Result<f64> {
    check_order(n)?;
    p.check()?;
    let (a, b2) = (p.a, p.beta * p.beta);
    let a2 = a * a;
    let r2 = a2 + b2;
    let v = match (kind, n) {
        (AbKind::A(Sign::Plus), 3) => 6.0 * a / r2.powf(2.5),
        (AbKind::A(Sign::Minus), 3) => 6.0 * (a2 * a - 4.0 * a * b2) / r2.powf(3.5),
        (AbKind::A(Sign::Plus), 4) => 6.0 * (4.0 * a2 - b2) / r2.powf(3.5),
        (AbKind::A(Sign::Minus), 4) => 6.0 * (4.0 * a2 * a2 - 27.0 * a2 * b2 + 4.0 * b2 * b2) / r2.powf(4.5),
        (AbKind::A(Sign::Plus), 5) => 30.0 * (4.0 * a2 * a - 3.0 * a * b2) / r2.powf(4.5),
        (AbKind::A(Sign::Minus), 5) => {
            30.0 * (4.0 * a2 * a2 * a - 41.0 * a2 * a * b2 + 18.0 * a * b2 * b2) / r2.powf(5.5)
        }
        (AbKind::B, 3) => 3.0 * a * (2.0 * a2 - 3.0 * b2) / r2.powf(3.5),
        (AbKind::B, 4) => 3.0 * (8.0 * a2 * a2 - 24.0 * a2 * b2 + 3.0 * b2 * b2) / r2.powf(4.5),
        (AbKind::B, 5) => 15.0 * a * (8.0 * a2 * a2 - 40.0 * a2 * b2 + 15.0 * b2 * b2) / r2.powf(5.5),
        _ => unreachable!(),
    };
    Ok(v)
}

/// `A_{n+-}(a, beta)` in closed form.
pub fn a_integral(n: u32, sign: Sign, p: AbParams) -> Result<f64> {
    ab_closed_form(AbKind::A(sign), n, p)
}

/// `B_n(a, beta)` in closed form.
pub fn b_integral(n: u32, p: AbParams) -> Result<f64> {
    ab_closed_form(AbKind::B, n, p)
}

/// Direct quadrature of the integral behind [`ab_closed_form`].
pub fn ab_quadrature_oracle(kind: AbKind, n: u32, p: AbParams, tol: &Tolerance) -> Result<f64> {
    check_order(n)?;
    p.check()?;
    let sign = match kind {
        AbKind::A(Sign::Plus) => 1.0,
        AbKind::A(Sign::Minus) => -1.0,
        AbKind::B => 0.0,
    };
    let nf = n as f64;
    let f = |u: f64| {
        let [j0, _, j2] = bessel_j012(p.beta * u);
        u.powi(n as i32) * (-p.a * u).exp() * (j0 + sign * j2)
    };
    // u^n e^{-a u} falls below 1e-18 of its peak value (at n / a) beyond this point.
    let mut upper = (nf + 45.0) / p.a;
    while nf * (upper * p.a / nf).ln() - (upper * p.a - nf) > -41.5 {
        upper *= 1.2;
    }
    let mut points = vec![0.0];
    if p.beta > 0.0 {
        let step = std::f64::consts::PI / p.beta;
        let mut x = step;
        while x < upper {
            points.push(x);
            x += step;
        }
    }
    points.push(upper);
    let r = integrate_with_breakpoints(f, &points, tol);
    if !r.converged {
        return Err(Error::Nonconvergence {
            context: "Laplace-Bessel oracle".into(),
            value: r.value,
            error: r.error_estimate,
        });
    }
    Ok(r.value)
}

/// `M_n = int_0^inf du u^6 e^{-(v + v') Z_+ u} J_n(beta u) J_n(beta' u)` with
/// `beta = X sqrt(v^2 - 1)` and `beta' = X sqrt(v'^2 - 1)`.
pub fn m_integral(n: u32, v: f64, v_prime: f64, x_sep: f64, z_plus: f64, tol: &Tolerance) -> Result<f64> {
    if n > 2 {
        return Err(Error::InvalidParameter(format!("order must be 0, 1 or 2, got {n}")));
    }
    if !(v >= 1.0 && v_prime >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "v and v' must be at least 1, got {v} and {v_prime}"
        )));
    }
    let decay = (v + v_prime) * z_plus;
    if !(decay.is_finite() && decay > 0.0) {
        return Err(Error::Divergent(format!("M integral needs (v + v') Z+ > 0, got {decay}")));
    }
    let beta = x_sep.abs() * (v * v - 1.0).sqrt();
    let beta_p = x_sep.abs() * (v_prime * v_prime - 1.0).sqrt();
    let k = n as usize;
    let f = |u: f64| {
        let a = bessel_j012(beta * u);
        let b = bessel_j012(beta_p * u);
        u.powi(6) * (-decay * u).exp() * a[k] * b[k]
    };
    let r = integrate_semi_infinite(f, 0.0, 6.0 / decay, tol);
    if !r.converged {
        return Err(Error::Nonconvergence {
            context: format!("M_{n} integral"),
            value: r.value,
            error: r.error_estimate,
        });
    }
    Ok(r.value)
}

/// Small-separation limit of [`m_integral`]: `720 / ((v + v') Z_+)^7` for
/// `n = 0`, zero otherwise.
pub fn m_integral_small_x(n: u32, v: f64, v_prime: f64, z_plus: f64) -> f64 {
    if n == 0 {
        720.0 / ((v + v_prime) * z_plus).powi(7)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // scipy.special.jv, cross-checked against mpmath at 30 digits
        let cases: [(u32, f64, f64); 12] = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (1, 1.0, 0.440_050_585_744_933_55),
            (2, 1.0, 0.114_903_484_931_900_5),
            (0, 7.9, 0.194_361_844_841_278_24),
            (1, 10.0, 0.043_472_746_168_861_6),
            (2, 12.5, -0.173_361_463_438_782_66),
            (0, 24.9, 0.083_245_968_353_015_49),
            (1, 25.0, -0.125_350_249_580_289_9),
            (2, 40.0, -0.001_064_974_682_358_039_6),
            (0, 100.0, 0.019_985_850_304_223_12),
            (1, 1234.5, 0.018_217_508_337_392_498),
            (2, 1e-3, 1.249_999_895_833_336_6e-7),
        ];
        for (n, x, want) in cases {
            let got = bessel_j(n, x).unwrap();
            assert!((got - want).abs() < 1e-13, "J{n}({x}) = {got}, want {want}");
            assert!((bessel_j012(x)[n as usize] - want).abs() < 1e-13);
        }
    }

    #[test]
    fn origin_and_first_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(2, 0.0).unwrap(), 0.0);
        assert!(bessel_j(0, 2.404_825_557_695_773).unwrap().abs() < 1e-14);
    }

    #[test]
    fn domain_is_checked() {
        assert!(bessel_j(3, 1.0).is_err());
        assert!(bessel_j(0, -1.0).is_err());
    }

    #[test]
    fn regimes_join_smoothly() {
        for &edge in &[SERIES_LIMIT, ASYMPTOTIC_LIMIT] {
            let below = bessel_j012(edge * (1.0 - 4.0 * f64::EPSILON));
            let above = bessel_j012(edge);
            for k in 0..3 {
                assert!((below[k] - above[k]).abs() < 1e-13, "order {k} at {edge}");
            }
        }
    }

    #[test]
    fn closed_forms_at_zero_beta() {
        let p = AbParams { a: 1.0, beta: 0.0 };
        assert_eq!(ab_closed_form(AbKind::A(Sign::Plus), 3, p).unwrap(), 6.0);
        let p2 = AbParams { a: 2.0, beta: 0.0 };
        for n in 3..=5u32 {
            let fact: f64 = (1..=n).map(f64::from).product();
            let want = fact / 2f64.powi(n as i32 + 1);
            for kind in [AbKind::A(Sign::Plus), AbKind::A(Sign::Minus), AbKind::B] {
                let got = ab_closed_form(kind, n, p2).unwrap();
                assert!((got - want).abs() < 1e-14 * want, "{kind:?} {n}");
            }
        }
    }

    #[test]
    fn closed_form_sample_points() {
        let a5 = a_integral(5, Sign::Minus, AbParams { a: 2.0, beta: 1.0 }).unwrap();
        assert!((a5 - 30.0 * (4.0 * 32.0 - 41.0 * 8.0 + 18.0 * 2.0) / 5f64.powf(5.5)).abs() < 1e-15);
        assert!((a5 + 0.704_093_084_755_133_8).abs() < 1e-12);
        let b4 = b_integral(4, AbParams { a: 1.0, beta: 1.0 }).unwrap();
        assert!((b4 + 39.0 / 2f64.powf(4.5)).abs() < 1e-14);
    }

    #[test]
    fn closed_form_domain() {
        let bad = AbParams { a: -1.0, beta: 0.5 };
        assert!(matches!(ab_closed_form(AbKind::B, 3, bad), Err(Error::Divergent(_))));
        assert!(ab_closed_form(AbKind::B, 2, AbParams { a: 1.0, beta: 0.0 }).is_err());
    }

    #[test]
    fn oracle_at_zero_beta() {
        let tol = Tolerance::default().with_rel(1e-10).with_abs(0.0);
        let v = ab_quadrature_oracle(AbKind::A(Sign::Plus), 3, AbParams { a: 1.0, beta: 0.0 }, &tol).unwrap();
        assert!((v - 6.0).abs() < 6e-10);
    }

    #[test]
    fn m_integral_limits() {
        let tol = Tolerance::default().with_rel(1e-10);
        let v = m_integral(0, 1.0, 1.0, 0.0, 1.0, &tol).unwrap();
        assert!((v - 720.0 / 128.0).abs() < 1e-8);
        assert!(m_integral(1, 1.5, 2.0, 0.0, 2.0, &tol).unwrap().abs() < 1e-15);
        assert!(m_integral(0, 1.0, 1.0, 0.1, 0.0, &tol).is_err());
    }
}
