//! Response functions on the imaginary frequency axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single Drude-Lorentz resonance, `plasma^2 / (transverse^2 + u^2 + damping * u)`
/// on the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub plasma: f64,
    pub transverse: f64,
    pub damping: f64,
}

impl Resonance {
    /// A resonance with zero oscillator strength.
    pub const OFF: Resonance = Resonance {
        plasma: 0.0,
        transverse: 1.0,
        damping: 0.0,
    };

    pub fn new(plasma: f64, transverse: f64, damping: f64) -> Result<Self> {
        let r = Resonance {
            plasma,
            transverse,
            damping,
        };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        let finite = self.plasma.is_finite() && self.transverse.is_finite() && self.damping.is_finite();
        if !finite || self.plasma < 0.0 || self.transverse < 0.0 || self.damping < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "resonance parameters must be finite and non-negative, got {self:?}"
            )));
        }
        if self.plasma > 0.0 && self.transverse == 0.0 && self.damping == 0.0 {
            return Err(Error::InvalidParameter(
                "a lossless resonance at zero frequency has an unbounded static response".into(),
            ));
        }
        Ok(())
    }

    pub fn susceptibility_iu(&self, u: f64) -> f64 {
        if self.plasma == 0.0 {
            return 0.0;
        }
        let p2 = self.plasma * self.plasma;
        p2 / (self.transverse * self.transverse + u * u + self.damping * u)
    }
}

/// Material occupying a bulk medium or one layer of a planar stack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MaterialModel {
    Vacuum,
    /// Frequency-independent permittivity and permeability.
    Constant { eps: f64, mu: f64 },
    DrudeLorentz {
        electric: Resonance,
        magnetic: Resonance,
    },
    /// Ideal reflector with `r_s = -1`, `r_p = +1`; only meaningful as a layer.
    PerfectConductor,
    /// Ideal reflector with `r_s = +1`, `r_p = -1`; only meaningful as a layer.
    PerfectPermeable,
}

impl MaterialModel {
    pub fn constant(eps: f64, mu: f64) -> Result<Self> {
        let m = MaterialModel::Constant { eps, mu };
        m.validate()?;
        Ok(m)
    }

    pub fn drude_lorentz(electric: Resonance, magnetic: Resonance) -> Result<Self> {
        let m = MaterialModel::DrudeLorentz { electric, magnetic };
        m.validate()?;
        Ok(m)
    }

    /// Purely electric Drude-Lorentz medium (`mu = 1`).
    pub fn dielectric(plasma: f64, transverse: f64, damping: f64) -> Result<Self> {
        Self::drude_lorentz(Resonance::new(plasma, transverse, damping)?, Resonance::OFF)
    }

    /// Purely magnetic Drude-Lorentz medium (`eps = 1`).
    pub fn magnetic(plasma: f64, transverse: f64, damping: f64) -> Result<Self> {
        Self::drude_lorentz(Resonance::OFF, Resonance::new(plasma, transverse, damping)?)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MaterialModel::Constant { eps, mu } => {
                if !(eps.is_finite() && mu.is_finite() && eps >= 1.0 && mu >= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "constant medium needs finite eps >= 1 and mu >= 1, got eps = {eps}, mu = {mu}"
                    )));
                }
                Ok(())
            }
            MaterialModel::DrudeLorentz { electric, magnetic } => {
                electric.validate()?;
                magnetic.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn is_perfect(&self) -> bool {
        matches!(self, MaterialModel::PerfectConductor | MaterialModel::PerfectPermeable)
    }

    /// `(r_s, r_p)` of an ideal reflector, `None` for ordinary media.
    pub fn perfect_coefficients(&self) -> Option<(f64, f64)> {
        match self {
            MaterialModel::PerfectConductor => Some((-1.0, 1.0)),
            MaterialModel::PerfectPermeable => Some((1.0, -1.0)),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MaterialModel::Vacuum => "vacuum",
            MaterialModel::Constant { .. } => "constant",
            MaterialModel::DrudeLorentz { .. } => "drude_lorentz",
            MaterialModel::PerfectConductor => "perfect_conductor",
            MaterialModel::PerfectPermeable => "perfect_permeable",
        }
    }

    /// Returns `(eps(iu), mu(iu))`.
    pub fn response_iu(&self, u: f64) -> Result<(f64, f64)> {
        match *self {
            MaterialModel::Vacuum => Ok((1.0, 1.0)),
            MaterialModel::Constant { eps, mu } => Ok((eps, mu)),
            MaterialModel::DrudeLorentz { electric, magnetic } => Ok((
                1.0 + electric.susceptibility_iu(u),
                1.0 + magnetic.susceptibility_iu(u),
            )),
            MaterialModel::PerfectConductor => Err(Error::NoPointwiseResponse("perfect_conductor")),
            MaterialModel::PerfectPermeable => Err(Error::NoPointwiseResponse("perfect_permeable")),
        }
    }

    pub fn permittivity_iu(&self, u: f64) -> Result<f64> {
        Ok(self.response_iu(u)?.0)
    }

    pub fn permeability_iu(&self, u: f64) -> Result<f64> {
        Ok(self.response_iu(u)?.1)
    }

    pub fn refractive_index_iu(&self, u: f64) -> Result<f64> {
        let (eps, mu) = self.response_iu(u)?;
        Ok((eps * mu).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub frequency: f64,
    /// Squared modulus of the transition dipole matrix element.
    pub dipole_sq: f64,
}

/// Isotropic ground-state atom described by its dipole transitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomModel {
    transitions: Vec<Transition>,
}

impl AtomModel {
    pub fn new(transitions: Vec<Transition>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::InvalidParameter("an atom needs at least one transition".into()));
        }
        for t in &transitions {
            if !(t.frequency.is_finite() && t.frequency > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "transition frequency must be positive, got {}",
                    t.frequency
                )));
            }
            if !(t.dipole_sq.is_finite() && t.dipole_sq > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "squared dipole moment must be positive, got {}",
                    t.dipole_sq
                )));
            }
        }
        Ok(AtomModel { transitions })
    }

    pub fn two_level(frequency: f64, dipole_sq: f64) -> Result<Self> {
        Self::new(vec![Transition {
            frequency,
            dipole_sq,
        }])
    }

    /// Two-level atom with unit frequency and unit squared dipole moment.
    pub fn reference() -> Self {
        Self::two_level(1.0, 1.0).expect("unit parameters are valid")
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// `alpha(iu) = (2/3) sum_n omega_n d_n^2 / (omega_n^2 + u^2)`.
    pub fn polarizability_iu(&self, u: f64) -> f64 {
        let u2 = u * u;
        2.0 / 3.0
            * self
                .transitions
                .iter()
                .map(|t| t.frequency * t.dipole_sq / (t.frequency * t.frequency + u2))
                .sum::<f64>()
    }

    pub fn static_polarizability(&self) -> f64 {
        self.polarizability_iu(0.0)
    }

    pub fn min_frequency(&self) -> f64 {
        self.transitions.iter().map(|t| t.frequency).fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drude_lorentz_values() {
        let m = MaterialModel::dielectric(3.0, 1.0, 0.001).unwrap();
        let eps = m.permittivity_iu(1.0).unwrap();
        assert!((eps - (1.0 + 9.0 / 2.001)).abs() < 1e-15);
        assert_eq!(m.permeability_iu(1.0).unwrap(), 1.0);
        assert_eq!(m.permittivity_iu(0.0).unwrap(), 10.0);
    }

    #[test]
    fn refractive_index_is_root_of_product() {
        let m = MaterialModel::drude_lorentz(
            Resonance::new(2.0, 1.0, 0.1).unwrap(),
            Resonance::new(1.0, 2.0, 0.0).unwrap(),
        )
        .unwrap();
        for &u in &[0.0, 0.3, 1.0, 7.0] {
            let (e, mu) = m.response_iu(u).unwrap();
            assert!((m.refractive_index_iu(u).unwrap() - (e * mu).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn perfect_kinds_have_no_pointwise_response() {
        assert_eq!(
            MaterialModel::PerfectConductor.permittivity_iu(1.0),
            Err(Error::NoPointwiseResponse("perfect_conductor"))
        );
        assert!(MaterialModel::PerfectPermeable.refractive_index_iu(0.5).is_err());
    }

    #[test]
    fn constant_medium_bounds() {
        assert!(MaterialModel::constant(0.5, 1.0).is_err());
        assert!(MaterialModel::constant(2.0, 0.9).is_err());
        assert!(MaterialModel::constant(2.0, 1.0).is_ok());
        assert!(MaterialModel::dielectric(-1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn two_level_polarizability() {
        let a = AtomModel::reference();
        assert!((a.static_polarizability() - 2.0 / 3.0).abs() < 1e-16);
        assert!((a.polarizability_iu(1.0) - 1.0 / 3.0).abs() < 1e-16);
        assert!(AtomModel::two_level(0.0, 1.0).is_err());
        assert!(AtomModel::new(vec![]).is_err());
    }
}
