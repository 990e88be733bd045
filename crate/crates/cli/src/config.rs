//! TOML scenario files.

use std::fmt;
use std::path::Path;

use serde::Deserialize;
use vdw_core::figures::{check_grid, Orientation};
use vdw_core::greens::Layer;
use vdw_core::materials::Transition;
use vdw_core::potential::asymptotic::AsymptoticCase;
use vdw_core::{AtomModel, AtomPair, Geometry, LayerStack, MaterialModel, Resonance, Scene, Tolerance};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub scene: Option<SceneSection>,
    pub material: Option<MaterialSpec>,
    #[serde(default)]
    pub layers: Vec<LayerSpec>,
    pub atom: Option<AtomSpec>,
    pub atom_a: Option<AtomSpec>,
    pub atom_b: Option<AtomSpec>,
    pub geometry: Option<GeometrySpec>,
    pub sweep: Option<SweepSpec>,
    pub quad: Option<QuadSpec>,
    pub eval: Option<EvalSpec>,
    pub figure: Option<FigureSpec>,
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSection {
    pub kind: SceneKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneKind {
    Bulk,
    Layers,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MaterialSpec {
    Vacuum,
    Constant {
        eps: f64,
        #[serde(default = "one")]
        mu: f64,
    },
    DrudeLorentz {
        #[serde(default)]
        omega_pe: f64,
        #[serde(default = "one")]
        omega_te: f64,
        #[serde(default, alias = "gamma_e")]
        omega_ge: f64,
        #[serde(default)]
        omega_pm: f64,
        #[serde(default = "one")]
        omega_tm: f64,
        #[serde(default, alias = "gamma_m")]
        omega_gm: f64,
    },
    PerfectConductor,
    PerfectPermeable,
}

fn one() -> f64 {
    1.0
}

impl MaterialSpec {
    pub fn build(&self) -> Result<MaterialModel, ConfigError> {
        let m = match *self {
            MaterialSpec::Vacuum => Ok(MaterialModel::Vacuum),
            MaterialSpec::Constant { eps, mu } => MaterialModel::constant(eps, mu),
            MaterialSpec::DrudeLorentz {
                omega_pe,
                omega_te,
                omega_ge,
                omega_pm,
                omega_tm,
                omega_gm,
            } => Resonance::new(omega_pe, omega_te, omega_ge).and_then(|e| {
                MaterialModel::drude_lorentz(e, Resonance::new(omega_pm, omega_tm, omega_gm)?)
            }),
            MaterialSpec::PerfectConductor => Ok(MaterialModel::PerfectConductor),
            MaterialSpec::PerfectPermeable => Ok(MaterialModel::PerfectPermeable),
        };
        m.map_err(|e| ConfigError(format!("[material]: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    pub thickness: f64,
    pub material: MaterialSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    #[serde(alias = "frequency")]
    pub omega10: Option<f64>,
    #[serde(alias = "dipole_sq")]
    pub d2: Option<f64>,
    /// Several transitions as `[[omega, d2], ...]`.
    pub transitions: Option<Vec<[f64; 2]>>,
}

impl AtomSpec {
    fn build(&self, section: &str) -> Result<AtomModel, ConfigError> {
        let transitions = match (&self.transitions, self.omega10, self.d2) {
            (Some(t), None, None) => t
                .iter()
                .map(|&[frequency, dipole_sq]| Transition { frequency, dipole_sq })
                .collect(),
            (None, Some(frequency), Some(dipole_sq)) => vec![Transition { frequency, dipole_sq }],
            (None, None, _) => return err(format!("[{section}] missing key `omega10`")),
            (None, _, None) => return err(format!("[{section}] missing key `d2`")),
            _ => return err(format!("[{section}] give either `transitions` or `omega10` and `d2`")),
        };
        AtomModel::new(transitions).map_err(|e| ConfigError(format!("[{section}]: {e}")))
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub x_a: Option<f64>,
    pub z_a: Option<f64>,
    pub x_b: Option<f64>,
    pub z_b: Option<f64>,
    pub orientation: Option<Orientation>,
    pub z: Option<f64>,
    pub l: Option<f64>,
}

fn need(v: Option<f64>, section: &str, key: &str) -> Result<f64, ConfigError> {
    v.ok_or_else(|| ConfigError(format!("[{section}] missing key `{key}`")))
}

impl GeometrySpec {
    fn build(&self) -> Result<Geometry, ConfigError> {
        let g = if let Some(o) = self.orientation {
            if self.x_a.is_some() || self.z_a.is_some() || self.x_b.is_some() || self.z_b.is_some() {
                return err("[geometry] give either `orientation`, `z`, `l` or explicit coordinates, not both");
            }
            let z = need(self.z, "geometry", "z")?;
            let l = need(self.l, "geometry", "l")?;
            match o {
                Orientation::Parallel => Geometry::parallel(z, l),
                Orientation::Vertical => Geometry::vertical(z, l),
            }
        } else {
            if self.z.is_some() || self.l.is_some() {
                return err("[geometry] `z` and `l` need `orientation`");
            }
            Geometry::new(
                self.x_a.unwrap_or(0.0),
                need(self.z_a, "geometry", "z_a")?,
                need(self.x_b, "geometry", "x_b")?,
                need(self.z_b, "geometry", "z_b")?,
            )
        };
        g.map_err(|e| ConfigError(format!("[geometry]: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        points: usize,
        #[serde(default)]
        spacing: Spacing,
    },
}

impl GridSpec {
    pub fn build(&self, name: &str) -> Result<Vec<f64>, ConfigError> {
        let grid = match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Range {
                start,
                stop,
                points,
                spacing,
            } => {
                if *points == 0 {
                    return err(format!("{name}: `points` must be positive"));
                }
                if *points == 1 {
                    vec![*start]
                } else if *spacing == Spacing::Log {
                    if !(*start > 0.0 && *stop > 0.0) {
                        return err(format!("{name}: logarithmic grids need positive limits"));
                    }
                    let (lo, hi) = (start.log10(), stop.log10());
                    let n = points - 1;
                    (0..=n).map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / n as f64)).collect()
                } else {
                    let n = points - 1;
                    (0..=n).map(|k| start + (stop - start) * k as f64 / n as f64).collect()
                }
            }
        };
        check_grid(name, &grid).map_err(|e| ConfigError(format!("{e}")))?;
        Ok(grid)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub orientation: Orientation,
    pub z: GridSpec,
    pub l: GridSpec,
    #[serde(default)]
    pub forces: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSpec {
    pub rel: Option<f64>,
    pub abs: Option<f64>,
    pub max_panels: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSpec {
    #[serde(default)]
    pub asymptotic: Vec<String>,
    #[serde(default)]
    pub forces: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureSpec {
    pub heights: Option<GridSpec>,
    pub separations: Option<GridSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<String>,
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub atoms: AtomPair,
    pub scene: Scene,
    pub geometry: Option<Geometry>,
    pub sweep: Option<Sweep>,
    pub tol: Tolerance,
    pub asymptotic: Vec<AsymptoticCase>,
    pub forces: bool,
    pub output: Option<String>,
    /// Substrate material, used by the closed-form comparisons.
    pub material: MaterialModel,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub orientation: Orientation,
    pub z: Vec<f64>,
    pub l: Vec<f64>,
    pub forces: bool,
}

pub fn parse(text: &str) -> Result<RawConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))
}

pub fn load(path: &Path) -> Result<RawConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| ConfigError(format!("{}: {}", path.display(), e.0)))
}

impl RawConfig {
    pub fn atoms(&self) -> Result<Option<AtomPair>, ConfigError> {
        match (&self.atom, &self.atom_a, &self.atom_b) {
            (Some(a), None, None) => Ok(Some(AtomPair::identical(a.build("atom")?))),
            (None, Some(a), Some(b)) => Ok(Some(AtomPair::new(a.build("atom_a")?, b.build("atom_b")?))),
            (None, None, None) => Ok(None),
            (None, Some(_), None) => err("missing section [atom_b]"),
            (None, None, Some(_)) => err("missing section [atom_a]"),
            _ => err("give either [atom] or both [atom_a] and [atom_b]"),
        }
    }

    pub fn tolerance(&self, rel_override: Option<f64>) -> Result<Tolerance, ConfigError> {
        let d = Tolerance::default();
        let q = self.quad.as_ref();
        let rel = rel_override.or(q.and_then(|q| q.rel)).unwrap_or(d.rel);
        let abs = q.and_then(|q| q.abs).unwrap_or(d.abs);
        let panels = q.and_then(|q| q.max_panels).unwrap_or(d.max_panels);
        Tolerance::new(rel, abs, panels).map_err(|e| ConfigError(format!("[quad]: {e}")))
    }

    pub fn scenario(&self, rel_override: Option<f64>) -> Result<Scenario, ConfigError> {
        let kind = match &self.scene {
            Some(s) => s.kind,
            None => return err("missing section [scene]"),
        };
        let material = match &self.material {
            Some(m) => m.build()?,
            None => return err("missing section [material]"),
        };
        let scene = match kind {
            SceneKind::Bulk => {
                if !self.layers.is_empty() {
                    return err("[[layers]] only apply to scene kind `layers`");
                }
                if material.is_perfect() {
                    return err(format!("[material]: {} cannot fill a bulk medium", material.name()));
                }
                Scene::Bulk(material)
            }
            SceneKind::Layers => {
                let mut films = Vec::with_capacity(self.layers.len());
                for (k, l) in self.layers.iter().enumerate() {
                    let m = l
                        .material
                        .build()
                        .map_err(|e| ConfigError(format!("[[layers]] entry {}: {}", k + 1, e.0)))?;
                    films.push(Layer {
                        material: m,
                        thickness: l.thickness,
                    });
                }
                Scene::Layered(LayerStack::new(material, films).map_err(|e| ConfigError(format!("[[layers]]: {e}")))?)
            }
        };
        let atoms = self.atoms()?.ok_or_else(|| ConfigError("missing section [atom]".into()))?;
        let geometry = self.geometry.as_ref().map(GeometrySpec::build).transpose()?;
        let sweep = match &self.sweep {
            Some(s) => Some(Sweep {
                orientation: s.orientation,
                z: s.z.build("[sweep] z")?,
                l: s.l.build("[sweep] l")?,
                forces: s.forces,
            }),
            None => None,
        };
        let eval = self.eval.as_ref();
        let asymptotic = eval
            .map(|e| e.asymptotic.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|n| {
                AsymptoticCase::from_name(n).ok_or_else(|| ConfigError(format!("[eval] unknown asymptotic case `{n}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Scenario {
            atoms,
            scene,
            geometry,
            sweep,
            tol: self.tolerance(rel_override)?,
            asymptotic,
            forces: eval.map(|e| e.forces).unwrap_or(false),
            output: self.output.as_ref().and_then(|o| o.path.clone()),
            material,
        })
    }
}
