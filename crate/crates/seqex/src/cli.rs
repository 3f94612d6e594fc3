//! Command-line front end: `run`, `stability`, `convergence`, `lowmach`
//! and `cases`
//!
//! Flags override a `--config` file, which overrides the built-in defaults.
//! Every subcommand writes its artifacts (CSV tables, VTK snapshots,
//! gnuplot scripts) into the output directory together with a SHA-256
//! manifest; with a single thread, reruns of the same configuration are
//! byte-identical. `SEQEX_THREADS` caps the worker count from the
//! environment.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cases::{
    self, build_case, convergence_rate, l1_error, lowmach_run, riemann_problem, CaseId, GAMMA,
};
use crate::config::{parse_config_into, Command, ConfigError, Family, RunConfig, Solver};
use crate::euler::{self, compute_dt, velocities, EulerError, EulerState2};
use crate::grid::{BoundaryPolicy, Field, Grid};
use crate::maxwell::{self, MaxwellError, MaxwellState2};
use crate::output::{num, render_gnuplot, render_vtk_fields, Curve, Manifest, Table};
use crate::riemann::{sample_with_star, solve_star, RiemannError};
use crate::scheme::SchemeId;
use crate::stability::{self, StabilityError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Maxwell(#[from] MaxwellError),
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Riemann(#[from] RiemannError),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "seqex",
    version,
    about = "Structured-grid sequential-explicit solvers and their stability toolbox"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Integrate a field scheme or a flow case in time and dump profiles,
    /// series and snapshots
    Run(CommonArgs),
    /// Measure step-size bounds: the per-scheme table or the flow-solver
    /// background-velocity map
    Stability(StabilityArgs),
    /// Refine the smooth vortex and report mean-error convergence rates
    Convergence(CommonArgs),
    /// Run the slow vortex across Mach numbers and report the norm scaling
    Lowmach(CommonArgs),
    /// List the flow cases with their domains and defaults
    Cases(CommonArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Scheme name (yee, yee-collocated, yee-explicit, yee-extended,
    /// yee-staggered, central, central-extended, upwind, statpres, yee-3d)
    /// or `euler` for the flow solver
    #[arg(long)]
    scheme: Option<String>,
    /// Flow case: sod, lax, leveque, gresho, vortex, kh
    #[arg(long)]
    case: Option<String>,
    /// Cells along x
    #[arg(long)]
    nx: Option<usize>,
    /// Cells along y (derived from the case aspect ratio when omitted)
    #[arg(long)]
    ny: Option<usize>,
    /// Courant number (defaults to the scheme's 0.9-safety value or the
    /// case's published one)
    #[arg(long, allow_negative_numbers = true)]
    cfl: Option<f64>,
    /// Final time
    #[arg(long = "t-end", allow_negative_numbers = true)]
    t_end: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (capped by SEQEX_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    /// Flat key=value configuration file applied before the flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Mach number for the vortex cases
    #[arg(long)]
    mach: Option<f64>,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sweep family: `maxwell` (per-scheme table) or `euler` (velocity map)
    #[arg(long)]
    family: Option<String>,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output and picks the code.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (command, common, family) = match &cli.command {
        Cmd::Run(c) => (Command::Run, c, None),
        Cmd::Stability(s) => (Command::Stability, &s.common, s.family.as_deref()),
        Cmd::Convergence(c) => (Command::Convergence, c, None),
        Cmd::Lowmach(c) => (Command::LowMach, c, None),
        Cmd::Cases(c) => (Command::Cases, c, None),
    };
    let cfg = build_config(command, common, family)?;
    init_threads(&cfg);

    let mut man = Manifest::new(&cfg.out);
    match cfg.command {
        Command::Run => cmd_run(&cfg, &mut man)?,
        Command::Stability => cmd_stability(&cfg, &mut man)?,
        Command::Convergence => cmd_convergence(&cfg, &mut man)?,
        Command::LowMach => cmd_lowmach(&cfg, &mut man)?,
        Command::Cases => cmd_cases(&cfg, &mut man)?,
    }
    let manifest_path = man.write()?;
    println!("manifest: {}", manifest_path.display());
    Ok(())
}

fn build_config(
    command: Command,
    args: &CommonArgs,
    family: Option<&str>,
) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(command);
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        cfg = parse_config_into(cfg, &text)?;
    }
    if let Some(s) = &args.scheme {
        let solver: Solver = s
            .parse()
            .map_err(|e| CliError::Usage(format!("--scheme: {e}")))?;
        cfg.set_solver(solver);
    }
    if let Some(c) = &args.case {
        cfg.set_case(c)
            .map_err(|e| CliError::Usage(format!("--case: {e}")))?;
    }
    if let Some(f) = family {
        cfg.family = f
            .parse()
            .map_err(|e: String| CliError::Usage(format!("--family: {e}")))?;
    }
    if args.mach.is_some() {
        cfg.mach = args.mach;
    }
    if args.nx.is_some() {
        cfg.nx = args.nx;
    }
    if args.ny.is_some() {
        cfg.ny = args.ny;
    }
    if args.cfl.is_some() {
        cfg.cfl = args.cfl;
    }
    if args.t_end.is_some() {
        cfg.t_end = args.t_end;
    }
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Resolve the worker count (flag/key, capped by SEQEX_THREADS) and size
/// the global pool. Later calls in the same process keep the first pool.
fn init_threads(cfg: &RunConfig) {
    let env_cap = std::env::var("SEQEX_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    let threads = match (cfg.threads, env_cap) {
        (Some(t), Some(cap)) => Some(t.min(cap)),
        (Some(t), None) => Some(t),
        (None, cap) => cap,
    };
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn common_meta(table: &mut Table, cfg: &RunConfig) {
    table.meta("generator", format!("seqex {}", env!("CARGO_PKG_VERSION")));
    table.meta("command", cfg.command.name());
}

fn case_slug(case: &CaseId) -> String {
    match case {
        CaseId::Sod => "sod".into(),
        CaseId::Lax => "lax".into(),
        CaseId::Leveque => "leveque".into(),
        CaseId::GreshoVortex(m) => format!("gresho_m{m:e}"),
        CaseId::SmoothVortex(m) => format!("vortex_m{m:e}"),
        CaseId::KelvinHelmholtz => "kh".into(),
    }
}

// ---------------------------------------------------------------- run

fn cmd_run(cfg: &RunConfig, man: &mut Manifest) -> Result<(), CliError> {
    match cfg.solver {
        Solver::Euler => run_euler(cfg, man),
        Solver::Maxwell(scheme) => run_maxwell(cfg, scheme, man),
    }
}

fn run_euler(cfg: &RunConfig, man: &mut Manifest) -> Result<(), CliError> {
    let case = cfg.case()?;
    let grid = cfg.euler_grid()?;
    let cfl = cfg.effective_cfl();
    let t_end = cfg.effective_t_end();
    let slug = case_slug(&case);

    let mut state = build_case(&case, &grid)?;
    let frozen = grid
        .bc
        .iter()
        .any(|&b| b == BoundaryPolicy::Frozen)
        .then(|| state.clone());

    let mut series = Table::new(&["t", "dt", "mass", "energy"]);
    common_meta(&mut series, cfg);
    series.meta("case", case);
    series.meta("nx", grid.nx).meta("ny", grid.ny);
    series.meta("cfl", num(cfl)).meta("t_end", num(t_end));
    series.meta("gamma", num(GAMMA));
    let mut record = |t: f64, dt: f64, st: &EulerState2| {
        let tot = st.totals(&grid);
        series.push_nums(&[t, dt, tot[0], tot[3]]);
    };
    record(0.0, 0.0, &state);

    // Evenly spaced snapshot times, the final time always included.
    let shots = cfg.snapshots.max(1);
    let mut snap_times: Vec<f64> = (1..=shots).map(|k| t_end * k as f64 / shots as f64).collect();
    let mut emitted = Vec::new();
    if t_end == 0.0 {
        snap_times.clear();
        emitted.push(emit_euler_fields(man, &slug, 0, &state, &grid, 0.0)?);
    }

    let mut t = 0.0;
    let mut shot = 0usize;
    while t < t_end {
        let dt = compute_dt(&state, &grid, GAMMA, cfl)?.min(t_end - t);
        euler::step(&mut state, &grid, dt, GAMMA, frozen.as_ref())?;
        t += dt;
        record(t, dt, &state);
        while shot < snap_times.len() && t >= snap_times[shot] - 1e-12 {
            shot += 1;
            if is_tube(&case) {
                continue; // tubes get the final profile below, not VTK frames
            }
            emitted.push(emit_euler_fields(man, &slug, shot, &state, &grid, t)?);
        }
    }

    let series_name = format!("run_{slug}_series.csv");
    man.emit(&series_name, &series.render())?;
    man.emit(
        &format!("run_{slug}_series.plt"),
        &render_gnuplot(
            &series_name,
            &format!("{case}: conserved totals"),
            "t",
            "total",
            &[Curve::new(1, 3, "mass"), Curve::new(1, 4, "energy")],
            false,
        ),
    )?;

    if is_tube(&case) {
        emit_tube_profiles(cfg, man, &case, &slug, &state, &grid, t_end)?;
    }
    println!(
        "run {case}: {} cells to t = {}, artifacts {}",
        grid.nx * grid.ny,
        num(t_end),
        man.names().len()
    );
    let _ = emitted;
    Ok(())
}

fn is_tube(case: &CaseId) -> bool {
    matches!(case, CaseId::Sod | CaseId::Lax | CaseId::Leveque)
}

fn emit_euler_fields(
    man: &mut Manifest,
    slug: &str,
    shot: usize,
    state: &EulerState2,
    grid: &Grid,
    t: f64,
) -> Result<String, CliError> {
    let (u, v) = velocities(state, grid);
    let mut p = Field::new(grid, crate::grid::Layout::Cell);
    p.map_interior(|i, j, _, _| state.prim_at(i, j, GAMMA).p);
    let name = format!("run_{slug}_fields_{shot:03}.vtk");
    man.emit(
        &name,
        &render_vtk_fields(
            &format!("t = {}", num(t)),
            grid,
            &[("rho", &state.rho), ("p", &p), ("u", &u), ("v", &v)],
        ),
    )?;
    Ok(name)
}

fn emit_tube_profiles(
    cfg: &RunConfig,
    man: &mut Manifest,
    case: &CaseId,
    slug: &str,
    state: &EulerState2,
    grid: &Grid,
    t_end: f64,
) -> Result<(), CliError> {
    let mut profile = Table::new(&["x", "rho", "u", "p"]);
    common_meta(&mut profile, cfg);
    profile.meta("case", case).meta("t_end", num(t_end));
    for i in 0..grid.nx as isize {
        let (x, _, _) = state.rho.position(grid, i, 0, 0);
        let w = state.prim_at(i, 0, GAMMA);
        profile.push_nums(&[x, w.rho, w.u, w.p]);
    }
    let profile_name = format!("run_{slug}_profile.csv");
    man.emit(&profile_name, &profile.render())?;

    // Exact self-similar reference at the same sample points.
    let rp = riemann_problem(case).expect("tube case");
    let star = solve_star(&rp)?;
    let mut exact = Table::new(&["x", "rho", "u", "p"]);
    common_meta(&mut exact, cfg);
    exact.meta("case", case).meta("t_end", num(t_end));
    exact.meta("solution", "exact similarity reference");
    for i in 0..grid.nx as isize {
        let (x, _, _) = state.rho.position(grid, i, 0, 0);
        let w = if t_end > 0.0 {
            sample_with_star(&rp, &star, (x - 0.5) / t_end)
        } else if x < 0.5 {
            rp.left
        } else {
            rp.right
        };
        exact.push_nums(&[x, w.rho, w.u, w.p]);
    }
    man.emit(&format!("run_{slug}_exact.csv"), &exact.render())?;

    man.emit(
        &format!("run_{slug}_profile.plt"),
        &render_gnuplot(
            &profile_name,
            &format!("{case} at t = {}", num(t_end)),
            "x",
            "value",
            &[
                Curve::new(1, 2, "rho"),
                Curve::new(1, 3, "u"),
                Curve::new(1, 4, "p"),
            ],
            false,
        ),
    )?;
    Ok(())
}

fn run_maxwell(cfg: &RunConfig, scheme: SchemeId, man: &mut Manifest) -> Result<(), CliError> {
    if scheme.is_three_d() {
        return Err(CliError::Usage(
            "the 3D scheme has no time-domain driver here; use `stability` for its bound"
                .to_string(),
        ));
    }
    let nx = cfg.effective_nx();
    let ny = cfg.ny.unwrap_or(nx);
    let grid = Grid::periodic_2d(nx, ny, 1.0 / nx as f64, 1.0 / ny as f64);
    let cfl = cfg.effective_cfl();
    let t_end = cfg.effective_t_end();
    let dt = cfl * grid.dx.min(grid.dy);
    let alias = scheme.alias();

    use std::f64::consts::TAU;
    let mut state = MaxwellState2::from_fns(
        scheme,
        &grid,
        |x, y| (TAU * x).cos() * (TAU * y).cos(),
        |_, y| (TAU * y).sin(),
        |x, _| -(TAU * x).sin(),
    )?;
    let seqexp = scheme.is_sequential_explicit();
    let inv0 = seqexp.then(|| maxwell::discrete_involution(&state, &grid)).transpose()?;

    let columns: &[&str] = if seqexp {
        &["t", "l2", "energy", "involution_drift"]
    } else {
        &["t", "l2"]
    };
    let mut series = Table::new(columns);
    common_meta(&mut series, cfg);
    series.meta("scheme", scheme.name());
    series.meta("nx", nx).meta("ny", ny);
    series.meta("cfl", num(cfl)).meta("dt", num(dt)).meta("t_end", num(t_end));

    let steps = if t_end > 0.0 { (t_end / dt).ceil() as usize } else { 0 };
    let mut t = 0.0;
    for k in 0..=steps {
        if k > 0 {
            maxwell::step(&mut state, &grid, dt)?;
            t += dt;
        }
        if seqexp {
            // Two-level conserved energy needs the next state as well.
            let mut next = state.clone();
            maxwell::step(&mut next, &grid, dt)?;
            let h = maxwell::conserved_energy(&state, &next, &grid)?;
            let inv = maxwell::discrete_involution(&state, &grid)?;
            let drift = inv.linf_diff(inv0.as_ref().expect("seeded involution"));
            series.push_nums(&[t, state.l2(&grid), h, drift]);
        } else {
            series.push_nums(&[t, state.l2(&grid)]);
        }
    }

    let series_name = format!("run_{alias}_series.csv");
    man.emit(&series_name, &series.render())?;
    man.emit(
        &format!("run_{alias}_series.plt"),
        &render_gnuplot(
            &series_name,
            &format!("{} on {nx}x{ny}, CFL {}", scheme.name(), num(cfl)),
            "t",
            "norm",
            &[Curve::new(1, 2, "l2")],
            false,
        ),
    )?;
    for (name, field) in [("bz", &state.bz), ("ex", &state.ex), ("ey", &state.ey)] {
        man.emit(
            &format!("run_{alias}_{name}.vtk"),
            &render_vtk_fields(&format!("{name} at t = {}", num(t)), &grid, &[(name, field)]),
        )?;
    }
    println!(
        "run {}: {steps} steps of dt = {} on {nx}x{ny}",
        scheme.name(),
        num(dt)
    );
    Ok(())
}

// ---------------------------------------------------------------- stability

fn cmd_stability(cfg: &RunConfig, man: &mut Manifest) -> Result<(), CliError> {
    match cfg.family {
        Family::Maxwell => stability_table(cfg, man),
        Family::Euler => stability_map(cfg, man),
    }
}

fn stability_table(cfg: &RunConfig, man: &mut Manifest) -> Result<(), CliError> {
    let mut table = Table::new(&["scheme", "alias", "cfl_max_measured", "cfl_max_exact"]);
    common_meta(&mut table, cfg);
    table.meta("beta_samples", cfg.beta_samples);
    table.meta("bisect_tol", num(1e-4));

    let mut rows: Vec<(SchemeId, usize)> = SchemeId::SEQ_EXP_2D
        .iter()
        .map(|&s| (s, cfg.beta_samples))
        .collect();
    rows.push((SchemeId::UpwindSplit, cfg.beta_samples));
    // The 3D sweep cubes the sample count; a coarser axis keeps it quick.
    rows.push((SchemeId::YeeExtended3D, cfg.beta_samples.min(48)));

    for (scheme, samples) in rows {
        let measured = stability::cfl_max(scheme, samples, 1e-4)?;
        table.push(vec![
            scheme.name().to_string(),
            scheme.alias().to_string(),
            num(measured),
            num(scheme.cfl_max()),
        ]);
        println!(
            "{:24} cfl_max = {:.4} (exact {:.4})",
            scheme.name(),
            measured,
            scheme.cfl_max()
        );
    }
    man.emit("stability_table.csv", &table.render())?;
    Ok(())
}

fn stability_map(cfg: &RunConfig, man: &mut Manifest) -> Result<(), CliError> {
    let speeds: Vec<f64> = (0..=4).map(|k| 0.5 * k as f64).collect();
    let rows = crate::euler_lin::euler_max_dt_map(&speeds, &speeds, 1.0, GAMMA, 1.0, cfg.beta_res, 1e-2);
    let mut table = Table::new(&["ubar", "vbar", "dt_measured", "dt_formula", "ratio"]);
    common_meta(&mut table, cfg);
    table.meta("cbar", num(1.0)).meta("gamma", num(GAMMA));
    table.meta("dx", num(1.0)).meta("beta_res", num(cfg.beta_res));
    for r in &rows {
        table.push_nums(&[r.ubar, r.vbar, r.measured, r.formula, r.measured / r.formula]);
    }
    man.emit("stability_map.csv", &table.render())?;
    println!(
        "flow-solver step-bound map: {} backgrounds, measured/formula in [{:.3}, {:.3}]",
        rows.len(),
        rows.iter().map(|r| r.measured / r.formula).fold(f64::INFINITY, f64::min),
        rows.iter().map(|r| r.measured / r.formula).fold(0.0f64, f64::max),
    );
    Ok(())
}

// ---------------------------------------------------------------- convergence

fn cmd_convergence(cfg: &RunConfig, man: &mut Manifest) -> Result<(), CliError> {
    let mach = cfg.effective_mach();
    let case = CaseId::SmoothVortex(mach);
    let setup = case.setup();
    let cfl = cfg.cfl.unwrap_or(setup.default_cfl);
    let t_end = cfg.t_end.unwrap_or(setup.default_t_end);

    let mut table = Table::new(&["n", "dx", "err_rho", "err_mx", "err_my", "err_e"]);
    common_meta(&mut table, cfg);
    table.meta("case", case).meta("cfl", num(cfl)).meta("t_end", num(t_end));

    let mut spacings = Vec::new();
    let mut errs: [Vec<f64>; 4] = Default::default();
    for &n in &cfg.grids {
        let grid = setup.grid_with(n);
        let initial = build_case(&case, &grid)?;
        let mut state = initial.clone();
        let mut t = 0.0;
        while t < t_end {
            let dt = compute_dt(&state, &grid, GAMMA, cfl)?.min(t_end - t);
            euler::step(&mut state, &grid, dt, GAMMA, None)?;
            t += dt;
        }
        let e = [
            l1_error(&state.rho, &initial.rho),
            l1_error(&state.mx, &initial.mx),
            l1_error(&state.my, &initial.my),
            l1_error(&state.e, &initial.e),
        ];
        spacings.push(grid.dx);
        table.push(vec![
            n.to_string(),
            num(grid.dx),
            num(e[0]),
            num(e[1]),
            num(e[2]),
            num(e[3]),
        ]);
        for (store, v) in errs.iter_mut().zip(e) {
            store.push(v);
        }
        println!("n = {n:4}: err_rho = {:.3e}", e[0]);
    }
    if spacings.len() >= 3 {
        for (name, err) in ["rho", "mx", "my", "e"].iter().zip(&errs) {
            table.meta(&format!("rate_{name}"), num(convergence_rate(&spacings, err)));
        }
    }
    let csv = "convergence_vortex.csv";
    man.emit(csv, &table.render())?;
    man.emit(
        "convergence_vortex.plt",
        &render_gnuplot(
            csv,
            &format!("smooth vortex, Mach {mach}: mean error vs spacing"),
            "dx",
            "mean error",
            &[
                Curve::new(2, 3, "rho"),
                Curve::new(2, 4, "mx"),
                Curve::new(2, 5, "my"),
                Curve::new(2, 6, "e"),
            ],
            true,
        ),
    )?;
    Ok(())
}

// ---------------------------------------------------------------- lowmach

fn cmd_lowmach(cfg: &RunConfig, man: &mut Manifest) -> Result<(), CliError> {
    let nx = cfg.nx.unwrap_or(50);
    let setup = CaseId::GreshoVortex(0.1).setup();
    let grid = setup.grid_with(nx);
    let cfl = cfg.cfl.unwrap_or(setup.default_cfl);
    let t_end = cfg.t_end.unwrap_or(setup.default_t_end);

    let mut summary = Table::new(&["mach", "avg_divergence", "avg_pressure_gradient"]);
    common_meta(&mut summary, cfg);
    summary.meta("nx", grid.nx).meta("cfl", num(cfl)).meta("t_end", num(t_end));

    let mut finals = Vec::new();
    let mut averages = Vec::new();
    for &mach in &cfg.machs {
        let (series, last) = lowmach_run(mach, &grid, cfl, t_end, 50)?;
        let mut table = Table::new(&["t", "divergence", "pressure_gradient"]);
        common_meta(&mut table, cfg);
        table.meta("mach", num(mach));
        for s in &series {
            table.push_nums(&[s.t, s.divergence, s.pressure_gradient]);
        }
        man.emit(&format!("lowmach_m{mach:e}.csv"), &table.render())?;

        let (avg_div, avg_pg) = cases::time_averages(&series);
        summary.push_nums(&[mach, avg_div, avg_pg]);
        averages.push((mach, avg_div, avg_pg));
        finals.push((mach, last));
        println!("mach {mach:e}: avg divergence {avg_div:.3e}, avg rescaled dp {avg_pg:.3e}");
    }
    for pair in averages.windows(2) {
        let (m0, d0, p0) = pair[0];
        let (m1, d1, p1) = pair[1];
        summary.meta(
            &format!("divergence_ratio_{m0:e}_{m1:e}"),
            num(d0 / d1),
        );
        summary.meta(
            &format!("pressure_gradient_ratio_{m0:e}_{m1:e}"),
            num(p0 / p1),
        );
    }
    if finals.len() >= 2 {
        let (ma, sa) = (finals[0].0, &finals[0].1);
        let (mb, sb) = (finals[finals.len() - 1].0, &finals[finals.len() - 1].1);
        summary.meta(
            &format!("velocity_rel_l1_{ma:e}_{mb:e}"),
            num(normalized_velocity_diff(sa, sb, &grid)),
        );
    }
    let csv = "lowmach_summary.csv";
    man.emit(csv, &summary.render())?;
    man.emit(
        "lowmach_summary.plt",
        &render_gnuplot(
            csv,
            "slow-vortex norm scaling with the Mach number",
            "Mach",
            "time-averaged norm",
            &[Curve::new(1, 2, "divergence"), Curve::new(1, 3, "rescaled dp")],
            true,
        ),
    )?;
    Ok(())
}

/// Relative mean difference of the Mach-normalized velocity fields of two
/// runs on the same grid. The slow-vortex velocity is O(1) at every Mach
/// number (only the background pressure carries the Mach scaling), so the
/// raw fields are the Mach-normalized quantities and compare directly.
pub fn normalized_velocity_diff(a: &EulerState2, b: &EulerState2, grid: &Grid) -> f64 {
    let (ua, va) = velocities(a, grid);
    let (ub, vb) = velocities(b, grid);
    let mut diff = 0.0;
    let mut scale = 0.0;
    ua.for_interior(|i, j, _, uav| {
        let (ubv, vav, vbv) = (ub.at2(i, j), va.at2(i, j), vb.at2(i, j));
        diff += (uav - ubv).abs() + (vav - vbv).abs();
        scale += ubv.abs() + vbv.abs();
    });
    diff / scale
}

// ---------------------------------------------------------------- cases

fn cmd_cases(cfg: &RunConfig, man: &mut Manifest) -> Result<(), CliError> {
    let mut table = Table::new(&["case", "lx", "ly", "nx_default", "t_end_default", "cfl_default"]);
    common_meta(&mut table, cfg);
    for case in CaseId::catalog() {
        let s = case.setup();
        table.push(vec![
            case_slug(&case),
            num(s.lengths[0]),
            num(s.lengths[1]),
            s.default_nx.to_string(),
            num(s.default_t_end),
            num(s.default_cfl),
        ]);
        println!(
            "{:14} domain {} x {}  nx = {:5}  t_end = {:5}  cfl = {}",
            case_slug(&case),
            s.lengths[0],
            s.lengths[1],
            s.default_nx,
            s.default_t_end,
            s.default_cfl
        );
    }
    man.emit("cases.csv", &table.render())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> i32 {
        run_from_args(std::iter::once("seqex").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run(&["run", "--scheme", "nonsense", "--out", "/tmp/unused"]), 2);
        assert_eq!(run(&["bogus-subcommand"]), 2);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o");
        assert_eq!(
            run(&["run", "--cfl=-1", "--out", out.to_str().unwrap()]),
            2
        );
    }

    #[test]
    fn cases_listing_emits_csv_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("cases");
        assert_eq!(run(&["cases", "--out", out.to_str().unwrap()]), 0);
        let csv = std::fs::read_to_string(out.join("cases.csv")).unwrap();
        assert!(csv.contains("sod"));
        assert!(csv.lines().any(|l| l.starts_with("case,")));
        let manifest = std::fs::read_to_string(out.join("manifest.txt")).unwrap();
        assert!(manifest.contains("cases.csv"));
    }

    #[test]
    fn sod_initial_condition_dump_matches_the_diaphragm() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("sod0");
        assert_eq!(
            run(&[
                "run",
                "--scheme",
                "euler",
                "--case",
                "sod",
                "--nx",
                "64",
                "--t-end",
                "0",
                "--out",
                out.to_str().unwrap(),
            ]),
            0
        );
        let csv = std::fs::read_to_string(out.join("run_sod_profile.csv")).unwrap();
        let mut data = csv.lines().filter(|l| !l.starts_with('#'));
        assert_eq!(data.next().unwrap(), "x,rho,u,p");
        let first: Vec<f64> = data
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(&first[1..], &[1.0, 0.0, 1.0]);
    }
}
