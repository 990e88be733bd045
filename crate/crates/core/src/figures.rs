//! Ratio sweeps over the interatomic separation for two identical two-level
//! atoms above a Drude-Lorentz half space.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::{Geometry, LayerStack};
use crate::materials::MaterialModel;
use crate::potential::{interatomic_force_with_error, u_total, AtomPair, Which};
use crate::quadrature::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig5a,
    Fig5b,
    Fig6a,
    Fig6b,
    Fig7a,
    Fig7b,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig6a,
        FigureId::Fig6b,
        FigureId::Fig7a,
        FigureId::Fig7b,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig5a => "fig5a",
            FigureId::Fig5b => "fig5b",
            FigureId::Fig6a => "fig6a",
            FigureId::Fig6b => "fig6b",
            FigureId::Fig7a => "fig7a",
            FigureId::Fig7b => "fig7b",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Arrangement of the two atoms relative to the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Both atoms at height `z`, separated along the surface.
    Parallel,
    /// Atom A at height `z`, atom B above it.
    Vertical,
}

/// What is normalized to its free-space value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Potential,
    /// Normal component of the interatomic force on atom A.
    ForceOnA,
}

/// Parameters of one figure; every field may be overridden.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: FigureId,
    pub material: MaterialModel,
    pub orientation: Orientation,
    pub quantity: Quantity,
    pub atoms: AtomPair,
    /// Height of atom A (both atoms in the parallel case).
    pub heights: Vec<f64>,
    pub separations: Vec<f64>,
}

/// Drude-Lorentz parameters shared by all presets.
pub const PRESET_PLASMA: f64 = 3.0;
pub const PRESET_TRANSVERSE: f64 = 1.0;
pub const PRESET_DAMPING: f64 = 0.001;
pub const PRESET_HEIGHTS: [f64; 3] = [0.01, 0.2, 1.0];

/// `n` points per decade from `10^lo` to `10^hi`.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi - lo) * per_decade as f64).round() as usize;
    (0..=n)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / n as f64))
        .collect()
}

impl FigurePreset {
    pub fn standard(id: FigureId) -> Self {
        let electric = matches!(id, FigureId::Fig5a | FigureId::Fig6a | FigureId::Fig7a);
        let material = if electric {
            MaterialModel::dielectric(PRESET_PLASMA, PRESET_TRANSVERSE, PRESET_DAMPING)
        } else {
            MaterialModel::magnetic(PRESET_PLASMA, PRESET_TRANSVERSE, PRESET_DAMPING)
        }
        .expect("preset parameters are valid");
        let orientation = match id {
            FigureId::Fig5a | FigureId::Fig5b => Orientation::Parallel,
            _ => Orientation::Vertical,
        };
        let quantity = match id {
            FigureId::Fig7a | FigureId::Fig7b => Quantity::ForceOnA,
            _ => Quantity::Potential,
        };
        FigurePreset {
            id,
            material,
            orientation,
            quantity,
            atoms: AtomPair::reference(),
            heights: PRESET_HEIGHTS.to_vec(),
            separations: log_grid(-3.0, 1.0, 8),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        check_grid("heights", &self.heights)?;
        check_grid("separations", &self.separations)
    }

    fn geometry(&self, z: f64, l: f64) -> Result<Geometry> {
        match self.orientation {
            Orientation::Parallel => Geometry::parallel(z, l),
            Orientation::Vertical => Geometry::vertical(z, l),
        }
    }
}

/// Grids must be finite, positive and strictly increasing.
pub fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(format!("{name} grid is empty")));
    }
    if grid.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidParameter(format!("{name} grid must be finite and positive")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(format!("{name} grid must be strictly increasing")));
    }
    Ok(())
}

/// One point of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureRow {
    pub l: f64,
    pub z: f64,
    pub ratio: f64,
    pub err: f64,
    pub converged: bool,
    /// Failure description when `converged` is false.
    pub message: Option<String>,
}

/// Maps `f` over `items` on at most `workers` threads, keeping input order.
pub fn ordered_map<T, R, F>(items: &[T], workers: Option<usize>, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let run = || items.par_iter().map(&f).collect::<Vec<R>>();
    match workers {
        None => Ok(run()),
        Some(0) => Err(Error::InvalidParameter("worker count must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(run))
        }
    }
}

fn point(preset: &FigurePreset, stack: &LayerStack, z: f64, l: f64, tol: &Tolerance) -> Result<(f64, f64)> {
    let geom = preset.geometry(z, l)?;
    match preset.quantity {
        Quantity::Potential => Ok(u_total(stack, &preset.atoms, &geom, tol)?.ratio()),
        Quantity::ForceOnA => {
            let (f, e) = interatomic_force_with_error(Which::A, stack, &preset.atoms, &geom, tol, None)?;
            let vacuum = LayerStack::vacuum();
            let (f0, e0) = interatomic_force_with_error(Which::A, &vacuum, &preset.atoms, &geom, tol, None)?;
            let ratio = f[2] / f0[2];
            Ok((ratio, ratio.abs() * (e[2] / f[2].abs() + e0[2] / f0[2].abs())))
        }
    }
}

/// Evaluates every (height, separation) pair of `preset`; failed points are
/// kept with `converged = false`.
pub fn run_figure(preset: &FigurePreset, tol: &Tolerance, workers: Option<usize>) -> Result<Vec<FigureRow>> {
    preset.validate()?;
    let stack = LayerStack::half_space(preset.material)?;
    let grid: Vec<(f64, f64)> = preset
        .heights
        .iter()
        .flat_map(|&z| preset.separations.iter().map(move |&l| (z, l)))
        .collect();
    ordered_map(&grid, workers, |&(z, l)| match point(preset, &stack, z, l, tol) {
        Ok((ratio, err)) => FigureRow {
            l,
            z,
            ratio,
            err,
            converged: true,
            message: None,
        },
        Err(e) => FigureRow {
            l,
            z,
            ratio: f64::NAN,
            err: f64::NAN,
            converged: false,
            message: Some(e.to_string()),
        },
    })
}
