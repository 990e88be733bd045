mod config;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use config::{ConfigError, RawConfig, Scenario};
use vdw_core::figures::{ordered_map, run_figure, FigureId, FigurePreset, Orientation};
use vdw_core::potential::asymptotic::u_asymptotic;
use vdw_core::potential::{evaluate, force, u0_free, Which};
use vdw_core::{Error, Geometry, PotentialBreakdown, Scene, Tolerance};

const EXIT_CONFIG: u8 = 1;
const EXIT_NONCONVERGENCE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Relative tolerance of figure runs unless overridden.
const FIGURE_REL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "vdw", version, about = "Van der Waals potentials between two atoms near planar bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Relative quadrature tolerance, overriding the config file.
    #[arg(long, global = true, value_name = "X")]
    rel_tol: Option<f64>,

    /// Worker threads for sweeps and figures.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Seed for the random checks of `verify`.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the potential at one geometry.
    Eval,
    /// Evaluate the potential over a grid of heights and separations.
    Sweep,
    /// Reproduce the data of one figure preset.
    Figure {
        /// fig5a, fig5b, fig6a, fig6b, fig7a or fig7b.
        which: String,
    },
    /// Run the exact and high-precision identity checks.
    Verify {
        /// Random frequency quadruples.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Replace one factor of the named denominator before checking.
        #[arg(long, hide = true, value_name = "LABEL")]
        corrupt_denominator: Option<String>,
    },
}

enum Failure {
    Config(String),
    Numerics(String),
    Verify,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Nonconvergence { .. } | Error::InnerNonconvergence { .. } => Failure::Numerics(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerics(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_NONCONVERGENCE)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(r) = cli.rel_tol {
        if !(r > 0.0 && r < 1.0) {
            return Err(Failure::Config(format!("--rel-tol must lie in (0, 1), got {r}")));
        }
    }
    if cli.workers == Some(0) {
        return Err(Failure::Config("--workers must be positive".into()));
    }
    match &cli.command {
        Command::Eval => {
            let s = scenario(cli)?;
            let text = eval(&s)?;
            emit(cli, s.output.as_deref(), &text)
        }
        Command::Sweep => {
            let s = scenario(cli)?;
            let (text, failed) = sweep(&s, cli.workers)?;
            emit(cli, s.output.as_deref(), &text)?;
            if failed {
                return Err(Failure::Numerics("some sweep rows did not converge".into()));
            }
            Ok(())
        }
        Command::Figure { which } => {
            let raw = match &cli.config {
                Some(p) => config::load(p)?,
                None => RawConfig::default(),
            };
            let (text, failed) = figure(which, &raw, cli)?;
            emit(cli, raw.output.as_ref().and_then(|o| o.path.as_deref()), &text)?;
            if failed {
                return Err(Failure::Numerics("some figure rows did not converge".into()));
            }
            Ok(())
        }
        Command::Verify {
            trials,
            corrupt_denominator,
        } => {
            let rows = verify::run(&verify::Options {
                seed: cli.seed,
                trials: *trials,
                bessel_points: 1000,
                corrupt: corrupt_denominator.clone(),
            })?;
            emit(cli, None, &verify::render(&rows))?;
            if rows.iter().all(verify::Row::passed) {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
    }
}

fn scenario(cli: &Cli) -> Result<Scenario, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Config("this subcommand needs --config PATH".into()))?;
    Ok(config::load(path)?.scenario(cli.rel_tol)?)
}

fn emit(cli: &Cli, configured: Option<&str>, text: &str) -> Result<(), Failure> {
    let target = cli.out.clone().or_else(|| configured.map(PathBuf::from));
    match target {
        Some(p) => std::fs::write(&p, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::Config(format!("cannot write output: {e}")))
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Ratio of the total potential to its free-space value, with its error.
fn vacuum_ratio(s: &Scenario, geom: &Geometry, b: &PotentialBreakdown) -> Result<(f64, f64), Error> {
    match &s.scene {
        Scene::Layered(_) => Ok(b.ratio()),
        Scene::Bulk(_) => {
            let free = u0_free(&s.atoms, geom, &s.tol)?;
            let r = b.total / free.value;
            Ok((r, r.abs() * (b.total_error() / b.total.abs() + free.error / free.value.abs())))
        }
    }
}

fn forces(s: &Scenario, geom: &Geometry) -> Result<[[f64; 3]; 2], Failure> {
    let Scene::Layered(stack) = &s.scene else {
        return Err(Failure::Config("forces need scene kind `layers`".into()));
    };
    Ok([
        force(Which::A, stack, &s.atoms, geom, &s.tol, None)?,
        force(Which::B, stack, &s.atoms, geom, &s.tol, None)?,
    ])
}

fn eval(s: &Scenario) -> Result<String, Failure> {
    let geom = s
        .geometry
        .ok_or_else(|| Failure::Config("missing section [geometry]".into()))?;
    let b = evaluate(&s.scene, &s.atoms, &geom, &s.tol)?;
    let (ratio, ratio_err) = vacuum_ratio(s, &geom, &b)?;
    let mut lines = vec![
        ("u0", b.u0),
        ("u1", b.u1),
        ("u2", b.u2),
        ("total", b.total),
        ("err0", b.err0),
        ("err1", b.err1),
        ("err2", b.err2),
        ("ratio", ratio),
        ("ratio_err", ratio_err),
    ]
    .into_iter()
    .map(|(k, v)| format!("{k} = {}", num(v)))
    .collect::<Vec<_>>();
    if s.forces {
        let [fa, fb] = forces(s, &geom)?;
        for (name, f) in [("force_a", fa), ("force_b", fb)] {
            lines.push(format!("{name}_x = {}", num(f[0])));
            lines.push(format!("{name}_z = {}", num(f[2])));
        }
    }
    if !s.asymptotic.is_empty() {
        let Scene::Layered(stack) = &s.scene else {
            return Err(Failure::Config("asymptotic comparisons need scene kind `layers`".into()));
        };
        if stack.materials().len() != 2 {
            return Err(Failure::Config("asymptotic comparisons need a bare half space".into()));
        }
        for case in &s.asymptotic {
            let a = u_asymptotic(*case, &s.material, &s.atoms, &geom, &s.tol)?;
            let name = case.name();
            lines.push(format!("{name}.u1 = {}", num(a.u1)));
            lines.push(format!("{name}.u2 = {}", num(a.u2)));
            lines.push(format!("{name}.total = {}", num(a.total)));
            lines.push(format!("{name}.numeric_over_closed = {}", num((b.u1 + b.u2) / (a.u1 + a.u2))));
        }
    }
    Ok(lines.join("\n") + "\n")
}

fn geometry(o: Orientation, z: f64, l: f64) -> Result<Geometry, Error> {
    match o {
        Orientation::Parallel => Geometry::parallel(z, l),
        Orientation::Vertical => Geometry::vertical(z, l),
    }
}

fn sweep(s: &Scenario, workers: Option<usize>) -> Result<(String, bool), Failure> {
    let sw = s
        .sweep
        .as_ref()
        .ok_or_else(|| Failure::Config("missing section [sweep]".into()))?;
    if sw.forces && !matches!(s.scene, Scene::Layered(_)) {
        return Err(Failure::Config("forces need scene kind `layers`".into()));
    }
    let grid: Vec<(f64, f64)> = sw.z.iter().flat_map(|&z| sw.l.iter().map(move |&l| (z, l))).collect();
    let point = |&(z, l): &(f64, f64)| -> Result<Vec<f64>, Failure> {
        let geom = geometry(sw.orientation, z, l)?;
        let b = evaluate(&s.scene, &s.atoms, &geom, &s.tol)?;
        let (ratio, err) = vacuum_ratio(s, &geom, &b)?;
        let mut v = vec![b.u0, b.u1, b.u2, b.total, ratio, err];
        if sw.forces {
            let [fa, fb] = forces(s, &geom)?;
            v.extend([fa[0], fa[2], fb[0], fb[2]]);
        }
        Ok(v)
    };
    let results = ordered_map(&grid, workers, point)?;
    let mut header = String::from("l,z,u0,u1,u2,total,ratio,err,converged");
    if sw.forces {
        header += ",force_a_x,force_a_z,force_b_x,force_b_z";
    }
    let width = if sw.forces { 10 } else { 6 };
    let mut out = header + "\n";
    let mut failed = false;
    for (&(z, l), r) in grid.iter().zip(results) {
        let (values, ok) = match r {
            Ok(v) => (v, true),
            Err(Failure::Config(m)) => return Err(Failure::Config(m)),
            Err(Failure::Numerics(m)) => {
                eprintln!("row l = {l:e}, z = {z:e}: {m}");
                failed = true;
                (vec![f64::NAN; width], false)
            }
            Err(Failure::Verify) => unreachable!(),
        };
        let mut fields = vec![num(l), num(z)];
        fields.extend(values.iter().copied().map(num));
        fields.push(ok.to_string());
        out += &(fields.join(",") + "\n");
    }
    Ok((out, failed))
}

fn figure(which: &str, raw: &RawConfig, cli: &Cli) -> Result<(String, bool), Failure> {
    let id = FigureId::from_name(which).ok_or_else(|| {
        let names: Vec<_> = FigureId::ALL.iter().map(FigureId::name).collect();
        Failure::Config(format!("unknown figure `{which}`; expected one of {}", names.join(", ")))
    })?;
    let mut preset = FigurePreset::standard(id);
    if let Some(m) = &raw.material {
        preset.material = m.build()?;
    }
    if let Some(atoms) = raw.atoms()? {
        preset.atoms = atoms;
    }
    if let Some(f) = &raw.figure {
        if let Some(h) = &f.heights {
            preset.heights = h.build("[figure] heights")?;
        }
        if let Some(l) = &f.separations {
            preset.separations = l.build("[figure] separations")?;
        }
    }
    let configured_rel = raw.quad.as_ref().and_then(|q| q.rel);
    let tol: Tolerance = raw.tolerance(cli.rel_tol.or(configured_rel).or(Some(FIGURE_REL)))?;
    let rows = run_figure(&preset, &tol, cli.workers)?;
    let mut out = String::from("l_over_c_omega10,z_label,ratio,err,converged\n");
    let mut failed = false;
    for r in &rows {
        if let Some(m) = &r.message {
            eprintln!("row l = {:e}, z = {}: {m}", r.l, r.z);
            failed = true;
        }
        out += &format!("{},{},{},{},{}\n", num(r.l), r.z, num(r.ratio), num(r.err), r.converged);
    }
    Ok((out, failed))
}
