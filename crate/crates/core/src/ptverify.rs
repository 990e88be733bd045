//! Exact bookkeeping of the fourth-order energy denominators.
//!
//! The twelve denominators of the ten intermediate-state cases are summed in
//! rational arithmetic and compared with their compact form. Where the
//! compact form only holds under the symmetric double frequency integral,
//! the individual terms that get `omega <-> omega'` swapped are named
//! explicitly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`].
pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The four frequencies entering a denominator: the two atomic transition
/// frequencies and the two photon frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Frequencies {
    pub omega_a: Rational,
    pub omega_b: Rational,
    pub omega: Rational,
    pub omega_p: Rational,
}

impl Frequencies {
    pub fn new(omega_a: Rational, omega_b: Rational, omega: Rational, omega_p: Rational) -> Result<Self> {
        let f = Frequencies {
            omega_a,
            omega_b,
            omega,
            omega_p,
        };
        for (name, v) in [
            ("omega_A", &f.omega_a),
            ("omega_B", &f.omega_b),
            ("omega", &f.omega),
            ("omega'", &f.omega_p),
        ] {
            if !v.is_positive() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(f)
    }

    pub fn from_integers(a: i64, b: i64, w: i64, wp: i64) -> Result<Self> {
        Self::new(rational(a, 1), rational(b, 1), rational(w, 1), rational(wp, 1))
    }

    /// The same frequencies with `omega` and `omega'` interchanged.
    pub fn swapped(&self) -> Self {
        Frequencies {
            omega: self.omega_p.clone(),
            omega_p: self.omega.clone(),
            ..self.clone()
        }
    }

    /// The same frequencies with the two atoms interchanged.
    pub fn mirrored(&self) -> Self {
        Frequencies {
            omega_a: self.omega_b.clone(),
            omega_b: self.omega_a.clone(),
            ..self.clone()
        }
    }
}

/// One factor of an energy denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// `omega_A + omega`
    AOmega,
    /// `omega_A + omega'`
    AOmegaP,
    /// `omega_B + omega`
    BOmega,
    /// `omega_B + omega'`
    BOmegaP,
    /// `omega + omega'`
    Photons,
    /// `omega_A + omega_B`
    Atoms,
    /// `omega_A + omega_B + omega + omega'`
    All,
}

impl Factor {
    pub fn value(&self, f: &Frequencies) -> Rational {
        match self {
            Factor::AOmega => &f.omega_a + &f.omega,
            Factor::AOmegaP => &f.omega_a + &f.omega_p,
            Factor::BOmega => &f.omega_b + &f.omega,
            Factor::BOmegaP => &f.omega_b + &f.omega_p,
            Factor::Photons => &f.omega + &f.omega_p,
            Factor::Atoms => &f.omega_a + &f.omega_b,
            Factor::All => &f.omega_a + &f.omega_b + &f.omega + &f.omega_p,
        }
    }

    /// The factor with the roles of the two atoms exchanged.
    pub fn mirror(&self) -> Factor {
        match self {
            Factor::AOmega => Factor::BOmega,
            Factor::AOmegaP => Factor::BOmegaP,
            Factor::BOmega => Factor::AOmega,
            Factor::BOmegaP => Factor::AOmegaP,
            other => *other,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Factor::AOmega => "(wA+w)",
            Factor::AOmegaP => "(wA+w')",
            Factor::BOmega => "(wB+w)",
            Factor::BOmegaP => "(wB+w')",
            Factor::Photons => "(w+w')",
            Factor::Atoms => "(wA+wB)",
            Factor::All => "(wA+wB+w+w')",
        };
        f.write_str(s)
    }
}

pub const DENOMINATOR_LABELS: [&str; 12] = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii"];

/// Product of three factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Denominator {
    /// Index 0..12 into [`DENOMINATOR_LABELS`].
    pub index: usize,
    pub factors: [Factor; 3],
}

impl Denominator {
    pub fn label(&self) -> &'static str {
        DENOMINATOR_LABELS[self.index]
    }

    pub fn value(&self, f: &Frequencies) -> Result<Rational> {
        let v = self.factors.iter().fold(Rational::one(), |acc, x| acc * x.value(f));
        if v.is_zero() {
            return Err(Error::InvalidParameter(format!("denominator D_{} vanishes", self.label())));
        }
        Ok(v)
    }

    pub fn mirror(&self) -> [Factor; 3] {
        self.factors.map(|x| x.mirror())
    }
}

/// Which atom is excited and how many photons are present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct State {
    pub a_excited: bool,
    pub b_excited: bool,
    pub photons: u8,
}

impl State {
    const fn new(a_excited: bool, b_excited: bool, photons: u8) -> Self {
        State {
            a_excited,
            b_excited,
            photons,
        }
    }

    pub fn mirror(&self) -> State {
        State::new(self.b_excited, self.a_excited, self.photons)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = if self.a_excited { "n_A" } else { "0_A" };
        let b = if self.b_excited { "m_B" } else { "0_B" };
        write!(f, "|{a},{b}>|{} photon(s)>", self.photons)
    }
}

/// One row of the intermediate-state table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntermediateCase {
    /// 1..=10
    pub case_id: usize,
    pub states: [State; 3],
    pub denominators: Vec<Denominator>,
}

/// The ten cases with their twelve denominators; factors may be edited to
/// exercise the failure path of [`verify_with_table`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenominatorTable {
    cases: Vec<IntermediateCase>,
}

impl DenominatorTable {
    pub fn standard() -> Self {
        use Factor::*;
        let a1 = State::new(true, false, 1);
        let b1 = State::new(false, true, 1);
        let rows: [(State, State, State, &[[Factor; 3]]); 10] = [
            (
                a1,
                State::new(false, false, 2),
                b1,
                &[[AOmegaP, Photons, BOmegaP], [AOmegaP, Photons, BOmega]],
            ),
            (a1, State::new(true, true, 0), b1, &[[AOmegaP, Atoms, BOmega]]),
            (a1, State::new(true, true, 0), a1, &[[AOmegaP, Atoms, AOmega]]),
            (a1, State::new(true, true, 2), b1, &[[AOmegaP, All, BOmegaP]]),
            (a1, State::new(true, true, 2), a1, &[[AOmegaP, All, AOmega]]),
            (
                b1,
                State::new(false, false, 2),
                a1,
                &[[BOmegaP, Photons, AOmegaP], [BOmegaP, Photons, AOmega]],
            ),
            (b1, State::new(true, true, 0), a1, &[[BOmegaP, Atoms, AOmega]]),
            (b1, State::new(true, true, 0), b1, &[[BOmegaP, Atoms, BOmega]]),
            (b1, State::new(true, true, 2), a1, &[[BOmegaP, All, AOmegaP]]),
            (b1, State::new(true, true, 2), b1, &[[BOmegaP, All, BOmega]]),
        ];
        let mut index = 0;
        let cases = rows
            .iter()
            .enumerate()
            .map(|(k, (s1, s2, s3, ds))| IntermediateCase {
                case_id: k + 1,
                states: [*s1, *s2, *s3],
                denominators: ds
                    .iter()
                    .map(|factors| {
                        let d = Denominator {
                            index,
                            factors: *factors,
                        };
                        index += 1;
                        d
                    })
                    .collect(),
            })
            .collect();
        DenominatorTable { cases }
    }

    pub fn cases(&self) -> &[IntermediateCase] {
        &self.cases
    }

    pub fn denominators(&self) -> impl Iterator<Item = &Denominator> {
        self.cases.iter().flat_map(|c| c.denominators.iter())
    }

    /// Denominator by its label, `"i"` through `"xii"`.
    pub fn by_label(&self, label: &str) -> Option<&Denominator> {
        self.denominators().find(|d| d.label() == label)
    }

    /// Replaces one factor of one denominator.
    pub fn with_factor(mut self, label: &str, slot: usize, factor: Factor) -> Result<Self> {
        let d = self
            .cases
            .iter_mut()
            .flat_map(|c| c.denominators.iter_mut())
            .find(|d| d.label() == label)
            .ok_or_else(|| Error::InvalidParameter(format!("no denominator labelled {label}")))?;
        if slot > 2 {
            return Err(Error::InvalidParameter(format!("factor slot must be 0, 1 or 2, got {slot}")));
        }
        d.factors[slot] = factor;
        Ok(self)
    }

    fn inverse(&self, label: &str, f: &Frequencies) -> Result<Rational> {
        let d = self
            .by_label(label)
            .ok_or_else(|| Error::InvalidParameter(format!("no denominator labelled {label}")))?;
        Ok(d.value(f)?.recip())
    }

    fn inverse_sum(&self, labels: &[&str], f: &Frequencies) -> Result<Rational> {
        labels.iter().try_fold(Rational::zero(), |acc, l| Ok(acc + self.inverse(l, f)?))
    }
}

/// The ten intermediate-state cases.
pub fn enumerate_cases() -> Vec<IntermediateCase> {
    DenominatorTable::standard().cases
}

/// Case obtained by exchanging the roles of the two atoms.
pub fn mirror_case(case_id: usize) -> Result<usize> {
    match case_id {
        1..=5 => Ok(case_id + 5),
        6..=10 => Ok(case_id - 5),
        _ => Err(Error::InvalidParameter(format!("case id must be in 1..=10, got {case_id}"))),
    }
}

/// Value of denominator `which` (0 or 1) of case `case_id`.
pub fn denominator_value(case_id: usize, which: usize, f: &Frequencies) -> Result<Rational> {
    let cases = enumerate_cases();
    let case = cases
        .get(case_id.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidParameter(format!("case id must be in 1..=10, got {case_id}")))?;
    let d = case.denominators.get(which).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "case {case_id} has {} denominator(s), asked for index {which}",
            case.denominators.len()
        ))
    })?;
    d.value(f)
}

/// Outcome of one exact sub-identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Check {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// All sub-identities checked for one frequency quadruple.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofRecord {
    pub frequencies: Frequencies,
    pub checks: Vec<Check>,
}

impl ProofRecord {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::holds)
    }
}

pub const CHECK_NAMES: [&str; 8] = [
    "B1 partial sum",
    "B2 symmetrized grouping",
    "B3 partial sum",
    "B4 partial sum",
    "B5 cancellation of second terms",
    "B5 symmetrized grouping",
    "grand total",
    "symmetrized whole sum",
];

fn inv(x: Rational) -> Rational {
    x.recip()
}

/// Pieces of the compact forms, as functions of the frequencies.
struct Pieces;

impl Pieces {
    fn plus(f: &Frequencies) -> Rational {
        inv(&f.omega + &f.omega_p)
    }

    fn minus(f: &Frequencies) -> Rational {
        inv(&f.omega - &f.omega_p)
    }

    /// First and second term of the partial sum over ii, iii, iv, viii, ix, x.
    fn b1_terms(f: &Frequencies) -> (Rational, Rational) {
        let atoms = inv(&f.omega_a + &f.omega_b);
        let first = &atoms
            * (inv(&f.omega_a + &f.omega) + inv(&f.omega_b + &f.omega))
            * (Self::plus(f) - Self::minus(f));
        let second = &atoms
            * (inv(&f.omega_a + &f.omega_p) + inv(&f.omega_b + &f.omega_p))
            * (Self::plus(f) + Self::minus(f));
        (first, second)
    }

    fn b2_rhs(f: &Frequencies) -> Rational {
        rational(2, 1)
            * inv(&f.omega_a + &f.omega_b)
            * (inv(&f.omega_a + &f.omega) + inv(&f.omega_b + &f.omega))
            * (Self::plus(f) - Self::minus(f))
    }

    fn pair_first(f: &Frequencies) -> Rational {
        inv((&f.omega_a + &f.omega_p) * (&f.omega_b + &f.omega_p)) * (Self::plus(f) + Self::minus(f))
    }

    fn b3_second(f: &Frequencies) -> Rational {
        -inv((&f.omega_b + &f.omega_p) * (&f.omega_a + &f.omega) * (&f.omega - &f.omega_p))
    }

    fn b4_second(f: &Frequencies) -> Rational {
        -inv((&f.omega_a + &f.omega_p) * (&f.omega_b + &f.omega) * (&f.omega - &f.omega_p))
    }

    fn b5_rhs(f: &Frequencies) -> Rational {
        rational(2, 1) * inv((&f.omega_a + &f.omega) * (&f.omega_b + &f.omega)) * (Self::plus(f) - Self::minus(f))
    }

    fn total_rhs(f: &Frequencies) -> Rational {
        rational(4, 1) * (&f.omega_a + &f.omega_b + &f.omega)
            / ((&f.omega_a + &f.omega_b) * (&f.omega_a + &f.omega) * (&f.omega_b + &f.omega))
            * (Self::plus(f) - Self::minus(f))
    }
}

const GROUP_ONE: [&str; 6] = ["ii", "iii", "viii", "ix", "iv", "x"];
const GROUP_THREE: [&str; 3] = ["i", "v", "vi"];
const GROUP_FOUR: [&str; 3] = ["vii", "xi", "xii"];

/// Checks every sub-identity against `table`, without stopping at failures.
pub fn verify_with_table(table: &DenominatorTable, f: &Frequencies) -> Result<ProofRecord> {
    if f.omega == f.omega_p {
        return Err(Error::PrincipalValuePole);
    }
    let s = f.swapped();
    let mut checks = Vec::with_capacity(CHECK_NAMES.len());
    let mut push = |name: &'static str, lhs: Rational, rhs: Rational| checks.push(Check { name, lhs, rhs });

    let (first, second) = Pieces::b1_terms(f);
    let group_one = table.inverse_sum(&GROUP_ONE, f)?;
    push(CHECK_NAMES[0], group_one, &first + &second);
    // Only the second term of the partial sum is swapped.
    let (_, second_swapped) = Pieces::b1_terms(&s);
    push(CHECK_NAMES[1], &first + &second_swapped, Pieces::b2_rhs(f));

    let three = table.inverse_sum(&GROUP_THREE, f)?;
    let four = table.inverse_sum(&GROUP_FOUR, f)?;
    push(CHECK_NAMES[2], three, Pieces::pair_first(f) + Pieces::b3_second(f));
    push(CHECK_NAMES[3], four, Pieces::pair_first(f) + Pieces::b4_second(f));
    // The second term of the B4 sum is swapped; both first terms are swapped.
    push(
        CHECK_NAMES[4],
        Pieces::b3_second(f) + Pieces::b4_second(&s),
        Rational::zero(),
    );
    push(
        CHECK_NAMES[5],
        rational(2, 1) * Pieces::pair_first(&s) + Pieces::b3_second(f) + Pieces::b4_second(&s),
        Pieces::b5_rhs(f),
    );

    push(CHECK_NAMES[6], Pieces::b2_rhs(f) + Pieces::b5_rhs(f), Pieces::total_rhs(f));

    let all: Vec<&str> = DENOMINATOR_LABELS.to_vec();
    let whole = table.inverse_sum(&all, f)? + table.inverse_sum(&all, &s)?;
    push(CHECK_NAMES[7], whole, Pieces::total_rhs(f) + Pieces::total_rhs(&s));

    Ok(ProofRecord {
        frequencies: f.clone(),
        checks,
    })
}

/// Verifies the denominator summation identity for one quadruple; the first
/// failing sub-identity is reported with both sides.
pub fn verify_sum_identity(f: &Frequencies) -> Result<ProofRecord> {
    let record = verify_with_table(&DenominatorTable::standard(), f)?;
    if let Some(c) = record.checks.iter().find(|c| !c.holds()) {
        return Err(Error::Mismatch(format!("{}: lhs = {}, rhs = {}", c.name, c.lhs, c.rhs)));
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, w: i64, wp: i64) -> Frequencies {
        Frequencies::from_integers(a, b, w, wp).unwrap()
    }

    #[test]
    fn table_shape() {
        let cases = enumerate_cases();
        assert_eq!(cases.len(), 10);
        assert_eq!(cases.iter().map(|c| c.denominators.len()).sum::<usize>(), 12);
        assert_eq!(cases[0].denominators.len(), 2);
        assert_eq!(cases[5].denominators.len(), 2);
        assert_eq!(mirror_case(4).unwrap(), 9);
        assert!(mirror_case(11).is_err());
    }

    #[test]
    fn sample_denominators() {
        let f = q(1, 2, 3, 5);
        assert_eq!(denominator_value(2, 0, &f).unwrap(), rational(90, 1));
        assert_eq!(denominator_value(4, 0, &f).unwrap(), rational(462, 1));
        assert!(denominator_value(2, 1, &f).is_err());
        assert!(denominator_value(0, 0, &f).is_err());
    }

    #[test]
    fn mirror_maps_denominators() {
        let table = DenominatorTable::standard();
        for case in table.cases() {
            let m = &table.cases()[mirror_case(case.case_id).unwrap() - 1];
            for (d, e) in case.denominators.iter().zip(&m.denominators) {
                let mut a = d.mirror();
                let mut b = e.factors;
                a.sort_by_key(|x| *x as u8);
                b.sort_by_key(|x| *x as u8);
                assert_eq!(a, b, "D_{} vs D_{}", d.label(), e.label());
                assert_eq!(case.states.map(|s| s.mirror()), m.states);
            }
        }
        let f = q(1, 2, 3, 5);
        let di = denominator_value(1, 0, &f).unwrap();
        let dvii = denominator_value(6, 0, &f.mirrored()).unwrap();
        assert_eq!(di, dvii);
    }

    #[test]
    fn identity_holds_on_examples() {
        assert!(verify_sum_identity(&q(1, 2, 3, 5)).unwrap().passed());
        assert!(verify_sum_identity(&q(1, 1, 2, 7)).unwrap().passed());
        assert_eq!(verify_sum_identity(&q(1, 2, 3, 3)), Err(Error::PrincipalValuePole));
        assert!(Frequencies::from_integers(0, 1, 2, 3).is_err());
    }

    #[test]
    fn corrupted_table_fails() {
        let table = DenominatorTable::standard().with_factor("v", 1, Factor::Atoms).unwrap();
        let r = verify_with_table(&table, &q(1, 2, 3, 5)).unwrap();
        assert!(!r.passed());
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.holds()).map(|c| c.name).collect();
        assert_eq!(failed, vec!["B3 partial sum", "symmetrized whole sum"]);
    }
}
