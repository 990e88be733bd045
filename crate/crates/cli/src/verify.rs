//! Exact and high-precision identity checks behind `vdw verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vdw_core::ptverify::{rational, verify_with_table, DenominatorTable, Factor, Frequencies, CHECK_NAMES};
use vdw_core::specfun::{ab_closed_form, ab_quadrature_oracle, bessel_j012, AbKind, AbParams, Sign};
use vdw_core::{Error, Tolerance};

pub const AB_TOLERANCE: f64 = 1e-8;
pub const BESSEL_TOLERANCE: f64 = 1e-12;
pub const AB_A: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const AB_BETA: [f64; 4] = [0.0, 0.5, 1.0, 3.0];

/// One line of the report.
#[derive(Debug, Clone)]
pub struct Row {
    pub class: String,
    pub cases: usize,
    pub failures: usize,
    pub detail: String,
}

impl Row {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub struct Options {
    pub seed: u64,
    pub trials: usize,
    pub bessel_points: usize,
    pub corrupt: Option<String>,
}

fn random_rational(rng: &mut ChaCha8Rng) -> vdw_core::ptverify::Rational {
    rational(rng.gen_range(1..=1000), rng.gen_range(1..=1000))
}

/// Random positive quadruples with `omega != omega'`.
pub fn random_quadruples(seed: u64, n: usize) -> Vec<Frequencies> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b, w, wp) = (
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
        );
        if w != wp {
            out.push(Frequencies::new(a, b, w, wp).expect("positive by construction"));
        }
    }
    out
}

/// The standard table, or one with the first factor of `label` replaced.
pub fn table(corrupt: Option<&str>) -> Result<DenominatorTable, Error> {
    let t = DenominatorTable::standard();
    let Some(label) = corrupt else { return Ok(t) };
    let current = t
        .by_label(label)
        .ok_or_else(|| Error::InvalidParameter(format!("no denominator labelled {label}")))?
        .factors[0];
    let replacement = if current == Factor::All { Factor::Atoms } else { Factor::All };
    t.with_factor(label, 0, replacement)
}

fn identity_rows(table: &DenominatorTable, quads: &[Frequencies], class: &str) -> Vec<Row> {
    let mut failures = [0usize; CHECK_NAMES.len()];
    let mut first = vec![String::new(); CHECK_NAMES.len()];
    for f in quads {
        let record = verify_with_table(table, f).expect("quadruples avoid the pole");
        for (k, c) in record.checks.iter().enumerate() {
            if !c.holds() {
                failures[k] += 1;
                if first[k].is_empty() {
                    first[k] = format!(
                        "at ({}, {}, {}, {}): {} != {}",
                        f.omega_a, f.omega_b, f.omega, f.omega_p, c.lhs, c.rhs
                    );
                }
            }
        }
    }
    CHECK_NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| Row {
            class: format!("{class}: {name}"),
            cases: quads.len(),
            failures: failures[k],
            detail: if failures[k] == 0 { "exact".into() } else { first[k].clone() },
        })
        .collect()
}

fn pole_row(table: &DenominatorTable) -> Row {
    let f = Frequencies::from_integers(1, 2, 3, 3).expect("positive");
    let excluded = matches!(verify_with_table(table, &f), Err(Error::PrincipalValuePole));
    Row {
        class: "omega = omega' excluded".into(),
        cases: 1,
        failures: usize::from(!excluded),
        detail: if excluded { "rejected".into() } else { "accepted".into() },
    }
}

/// Closed forms against quadrature; the mismatch is measured relative to the
/// value, with a floor at `1e-6` of `n! / a^(n+1)` where the value vanishes.
fn ab_row() -> Row {
    let tol = Tolerance::new(1e-12, 0.0, 4000).expect("valid tolerance");
    let (mut cases, mut failures, mut worst) = (0, 0, 0.0f64);
    let mut first = String::new();
    for kind in [AbKind::A(Sign::Plus), AbKind::A(Sign::Minus), AbKind::B] {
        for n in 3..=5u32 {
            for a in AB_A {
                for beta in AB_BETA {
                    let p = AbParams { a, beta };
                    cases += 1;
                    let scale = (1..=n).product::<u32>() as f64 / a.powi(n as i32 + 1);
                    let result = ab_closed_form(kind, n, p).and_then(|c| Ok((c, ab_quadrature_oracle(kind, n, p, &tol)?)));
                    let rel = match result {
                        Ok((c, o)) => (c - o).abs() / o.abs().max(1e-6 * scale),
                        Err(_) => f64::INFINITY,
                    };
                    worst = worst.max(rel);
                    if !(rel <= AB_TOLERANCE) {
                        failures += 1;
                        if first.is_empty() {
                            first = format!("{kind:?} n={n} a={a} beta={beta}: rel {rel:.3e}");
                        }
                    }
                }
            }
        }
    }
    Row {
        class: "Laplace-Bessel closed forms vs quadrature".into(),
        cases,
        failures,
        detail: if failures == 0 { format!("max rel {worst:.3e}") } else { first },
    }
}

/// `J_1(x)/x = (J_0(x) + J_2(x))/2` at random points in (0, 40).
fn bessel_row(seed: u64, points: usize) -> Row {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_be55);
    let (mut failures, mut worst) = (0, 0.0f64);
    for _ in 0..points {
        let x: f64 = rng.gen_range(1e-3..40.0);
        let [j0, j1, j2] = bessel_j012(x);
        let d = (j1 / x - 0.5 * (j0 + j2)).abs();
        worst = worst.max(d);
        if !(d <= BESSEL_TOLERANCE) {
            failures += 1;
        }
    }
    Row {
        class: "Bessel recurrence J1/x = (J0+J2)/2".into(),
        cases: points,
        failures,
        detail: format!("max abs {worst:.3e}"),
    }
}

pub fn run(opts: &Options) -> Result<Vec<Row>, Error> {
    let table = table(opts.corrupt.as_deref())?;
    let examples = [
        Frequencies::from_integers(1, 2, 3, 5)?,
        Frequencies::from_integers(1, 1, 2, 7)?,
    ];
    let mut rows = identity_rows(&table, &examples, "examples");
    rows.extend(identity_rows(&table, &random_quadruples(opts.seed, opts.trials), "random"));
    rows.push(pole_row(&table));
    rows.push(ab_row());
    rows.push(bessel_row(opts.seed, opts.bessel_points));
    Ok(rows)
}

pub fn render(rows: &[Row]) -> String {
    let width = rows.iter().map(|r| r.class.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        out += &format!(
            "{:<4} {:<width$}  {:>4}/{:<4} {}\n",
            if r.passed() { "PASS" } else { "FAIL" },
            r.class,
            r.cases - r.failures,
            r.cases,
            r.detail,
        );
    }
    out
}
