//! One function per command. Each returns a detailed table plus a single
//! summary row, which is what a sweep collects.

use std::f64::consts::PI;

use serde_json::{json, Value};
use vacuumlab::casimir::{
    pressure_1p1_quad, pressure_1p1_series, pressure_3p1, pressure_dirichlet_comb, pressure_euler_maclaurin,
    to_physical_pressure,
};
use vacuumlab::cavity::{resonance_roots, scattering_coeffs, CavityConfig, Side};
use vacuumlab::coulomb::{first_sign_change, potential};
use vacuumlab::deltaseq::{fourier_integral, power_filtering_integral, theta, total_mass, DeltaFamily, Limit};
use vacuumlab::oscillator::{kn_average, mirror_image_term, radiative_shift, renyi_poisson_table, shannon_poisson_pmf};
use vacuumlab::validate::run_all;
use vacuumlab::vacuum::{make_box_profile, make_lorentz_profile, physical_charge, VacuumProfile};

use crate::config::{grid_points, need, positive, Command, ProfileName, RunConfig, ShapeName, Units, MAX_POINTS};
use crate::error::{CliError, Result};
use crate::output::{col, Cell, Column, Table};

#[derive(Debug, Clone)]
pub struct Run {
    pub table: Table,
    pub summary: Vec<(Column, Cell)>,
    /// set by `validate` when some criterion fails
    pub failed: bool,
    pub summary_json: Option<Value>,
}

impl Run {
    fn from_single_row(table: Table) -> Run {
        let summary = table
            .columns
            .iter()
            .cloned()
            .zip(table.rows[0].iter().cloned())
            .collect();
        Run {
            table,
            summary,
            failed: false,
            summary_json: None,
        }
    }
}

/// Keys each command reads; a sweep may only vary these.
pub fn keys_for(cmd: Command) -> &'static [&'static str] {
    match cmd {
        Command::Delta => &["n", "j", "a", "abs_tol", "rel_tol"],
        Command::Coulomb => &["lambda2", "y0", "k1", "k2", "q", "rmin", "rmax", "points"],
        Command::Cavity => &["alpha", "beta", "gap", "kmin", "kmax", "points"],
        Command::Casimir => &["alpha", "gap", "lambda2", "y0", "dims", "abs_tol", "rel_tol"],
        Command::Stats => &["oscillators", "N", "nmax"],
        Command::Shift => &["lambda2", "y0", "k1", "k2", "q", "gap", "abs_tol", "rel_tol"],
        Command::Validate | Command::Sweep => &[],
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<Run> {
    match cfg.command()? {
        Command::Delta => delta(cfg),
        Command::Coulomb => coulomb(cfg),
        Command::Cavity => cavity(cfg),
        Command::Casimir => casimir(cfg),
        Command::Stats => stats(cfg),
        Command::Shift => shift(cfg),
        Command::Validate => validate(),
        Command::Sweep => sweep(cfg),
    }
}

fn length(cfg: &RunConfig, v: f64) -> f64 {
    v * cfg.units().to_planck()
}

fn wavenumber(cfg: &RunConfig, v: f64) -> f64 {
    v / cfg.units().to_planck()
}

fn limit_cell(l: vacuumlab::Result<Limit>) -> Result<Cell> {
    match l {
        Ok(Limit::Finite(v)) => Ok(Cell::Num(v)),
        Ok(Limit::Divergent) => Ok(Cell::Text("divergent".into())),
        Err(vacuumlab::Error::Unsupported(_)) => Ok(Cell::Text("unsupported".into())),
        Err(e) => Err(e.into()),
    }
}

fn delta(cfg: &RunConfig) -> Result<Run> {
    let shape = need(cfg.shape, "shape")?;
    let n = need(cfg.n, "n")?;
    let j = cfg.j.unwrap_or(1);
    let a = cfg.a.unwrap_or(0.0);
    let fam = match shape {
        ShapeName::Lambda => DeltaFamily::lambda(n),
        ShapeName::M => DeltaFamily::m_shape(n, a),
        ShapeName::Shifted => DeltaFamily::shifted_pair(n, j),
        ShapeName::Pv => DeltaFamily::principal_value(n),
    };
    fam.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let spec = cfg.quadrature()?;
    let mass = limit_cell(total_mass(&fam, &spec).map(Limit::Finite))?;
    let step = limit_cell(power_filtering_integral(&fam, 1, theta, &spec))?;
    let fourier = limit_cell(fourier_integral(&fam, &spec).map(Limit::Finite))?;
    let squared = limit_cell(power_filtering_integral(&fam, 2, |_| 1.0, &spec))?;
    let name = match shape {
        ShapeName::Lambda => "lambda",
        ShapeName::M => "m",
        ShapeName::Shifted => "shifted",
        ShapeName::Pv => "pv",
    };
    let mut t = Table::new(vec![
        col("shape", "delta family"),
        col("n", "sequence index"),
        col("j", "shift of the pair (shifted family)"),
        col("a", "value at the origin (M family)"),
        col("mass", "integral of the n-th member over the line"),
        col("step_filter", "limit of the filtering integral of the unit step, expected 1/2"),
        col("fourier_integral", "integral of the n-th member's Fourier image over the line"),
        col("squared", "limit of the integral of the squared delta against 1"),
    ]);
    t.meta("command", "delta");
    t.push(vec![name.into(), n.into(), j.into(), a.into(), mass, step, fourier, squared]);
    Ok(Run::from_single_row(t))
}

struct ProfileParams {
    profile: VacuumProfile,
    cells: Vec<Cell>,
}

fn profile_columns() -> Vec<Column> {
    vec![
        col("profile", "vacuum profile kind"),
        col("lambda2", "infrared parameter of the exponential profile"),
        col("y0", "ultraviolet length of the exponential profile, input units"),
        col("k1", "inner shell radius, inverse input units"),
        col("k2", "outer shell radius, inverse input units"),
    ]
}

fn profile(cfg: &RunConfig) -> Result<ProfileParams> {
    let kind = need(cfg.profile, "profile")?;
    let bad = |e: vacuumlab::Error| CliError::Config(e.to_string());
    Ok(match kind {
        ProfileName::Lorentz => {
            let l2 = need(cfg.lambda2, "lambda2")?;
            let y0 = need(cfg.y0, "y0")?;
            ProfileParams {
                profile: make_lorentz_profile(l2, length(cfg, y0)).map_err(bad)?,
                cells: vec!["lorentz".into(), l2.into(), y0.into(), Cell::Missing, Cell::Missing],
            }
        }
        ProfileName::Box => {
            let k1 = need(cfg.k1, "k1")?;
            let k2 = need(cfg.k2, "k2")?;
            ProfileParams {
                profile: make_box_profile(wavenumber(cfg, k1), wavenumber(cfg, k2)).map_err(bad)?,
                cells: vec!["box".into(), Cell::Missing, Cell::Missing, k1.into(), k2.into()],
            }
        }
    })
}

fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo * (hi / lo).powf(i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

fn coulomb(cfg: &RunConfig) -> Result<Run> {
    let pp = profile(cfg)?;
    let q = cfg.q.unwrap_or(1.0);
    let rmin = positive(need(cfg.rmin, "rmin")?, "rmin")?;
    let rmax = positive(need(cfg.rmax, "rmax")?, "rmax")?;
    if rmax <= rmin {
        return Err(CliError::Config(format!("need rmin < rmax (got {rmin}, {rmax})")));
    }
    let points = grid_points(cfg.points, 50)?;
    let units = cfg.units();
    let q_ph = physical_charge(q, &pp.profile);
    let mut cols = profile_columns();
    cols.extend([
        col("q", "bare charge"),
        col(&format!("r_{}", units.suffix()), "distance from the charge, input units"),
        col("v", "vacuum-averaged potential energy of a second charge q, Planck units"),
        col("v_coulomb", "point-charge value -q_ph^2/(4 pi r), Planck units"),
    ]);
    let mut t = Table::new(cols);
    t.meta("command", "coulomb");
    for r in geometric_grid(rmin, rmax, points) {
        let rp = length(cfg, r);
        let v = potential(&pp.profile, q, rp)?;
        let mut row = pp.cells.clone();
        row.extend([q.into(), r.into(), v.into(), (-q_ph * q_ph / (4.0 * PI * rp)).into()]);
        t.push(row);
    }
    let zero = match first_sign_change(|r| potential(&pp.profile, q, r), length(cfg, rmin), 400) {
        Ok(r) => Some(r * units.from_planck()),
        Err(vacuumlab::Error::NoSignChange(..)) => None,
        Err(e) => return Err(e.into()),
    };
    let zero_col = col(
        &format!("sign_change_r_{}", units.suffix()),
        "first radius beyond rmin where the potential changes sign, input units",
    );
    t.meta(&zero_col.name, Cell::from(zero).render());
    let mut summary: Vec<(Column, Cell)> = profile_columns().into_iter().zip(pp.cells.clone()).collect();
    summary.push((col("q", "bare charge"), q.into()));
    summary.push((zero_col, zero.into()));
    let json = json!({
        "profile": pp.cells[0].render(),
        "q": q,
        "units": units.suffix(),
        "sign_change_r": zero,
    });
    Ok(Run {
        table: t,
        summary,
        failed: false,
        summary_json: Some(json),
    })
}

fn cavity_config(cfg: &RunConfig) -> Result<(CavityConfig, f64, f64, f64)> {
    let alpha = need(cfg.alpha, "alpha")?;
    let beta = cfg.beta.unwrap_or(alpha);
    let l = need(cfg.gap, "gap")?;
    let c = CavityConfig::new(wavenumber(cfg, alpha), wavenumber(cfg, beta), length(cfg, l))
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok((c, alpha, beta, l))
}

fn cavity(cfg: &RunConfig) -> Result<Run> {
    let (c, alpha, beta, l) = cavity_config(cfg)?;
    let kmin = positive(cfg.kmin.unwrap_or(0.01), "kmin")?;
    let kmax = positive(cfg.kmax.unwrap_or(10.0), "kmax")?;
    if kmax <= kmin {
        return Err(CliError::Config(format!("need kmin < kmax (got {kmin}, {kmax})")));
    }
    let points = grid_points(cfg.points, 50)?;
    let mut t = Table::new(vec![
        col("alpha", "left barrier strength, inverse input units"),
        col("beta", "right barrier strength, inverse input units"),
        col("L", "barrier separation, input units"),
        col("k", "wavenumber, inverse input units"),
        col("reflection", "|B|^2 for incidence from the left"),
        col("transmission", "|E|^2 for incidence from the left"),
        col("unitarity_dev", "|B|^2 + |E|^2 - 1"),
    ]);
    t.meta("command", "cavity");
    let mut worst = 0.0f64;
    for i in 0..points {
        let k = kmin + (kmax - kmin) * i as f64 / (points - 1) as f64;
        let s = scattering_coeffs(wavenumber(cfg, k), &c, Side::Left)?;
        let (rb, te) = (s.b.norm_sqr(), s.e.norm_sqr());
        let dev = rb + te - 1.0;
        worst = worst.max(dev.abs());
        t.push(vec![alpha.into(), beta.into(), l.into(), k.into(), rb.into(), te.into(), dev.into()]);
    }
    let mut first = None;
    if let Ok(res) = resonance_roots(&c, 0..=5) {
        for r in &res {
            let k = r.k * cfg.units().to_planck();
            t.meta(
                &format!("resonance branch {} sign {:+}", r.branch, r.sign),
                format!("{:e}{:+e}i (residual {:.1e})", k.re, k.im, r.residual),
            );
            if first.is_none() && k.norm() > 1e-12 {
                first = Some(k);
            }
        }
    }
    let summary = vec![
        (col("alpha", "left barrier strength"), alpha.into()),
        (col("beta", "right barrier strength"), beta.into()),
        (col("L", "barrier separation"), l.into()),
        (col("max_unitarity_dev", "largest | |B|^2 + |E|^2 - 1 | on the grid"), worst.into()),
        (col("resonance_re", "first nonzero resonance, real part"), first.map(|k| k.re).into()),
        (col("resonance_im", "first nonzero resonance, imaginary part"), first.map(|k| k.im).into()),
    ];
    Ok(Run {
        table: t,
        summary,
        failed: false,
        summary_json: None,
    })
}

fn casimir(cfg: &RunConfig) -> Result<Run> {
    let spec = cfg.quadrature()?;
    let l_in = positive(need(cfg.gap, "gap")?, "gap")?;
    let l = length(cfg, l_in);
    match cfg.dims.unwrap_or(1) {
        1 => {
            let alpha = positive(need(cfg.alpha, "alpha")?, "alpha")?;
            let a = wavenumber(cfg, alpha);
            let mut t = Table::new(vec![
                col("alpha", "barrier strength, inverse input units"),
                col("L", "plate separation, input units"),
                col("p_series", "1+1 pressure, term-by-term series on the imaginary axis"),
                col("p_quad", "1+1 pressure, direct quadrature of the S-matrix form"),
                col("p_comb16", "Dirichlet comb value -pi/(16 L^2)"),
                col("p_em24", "Euler-MacLaurin value -pi/(24 L^2)"),
            ]);
            t.meta("command", "casimir");
            t.meta("dims", 1);
            t.meta("sign", "negative pressure pulls the plates together");
            let row = vec![
                alpha.into(),
                l_in.into(),
                pressure_1p1_series(a, l, &spec)?.into(),
                pressure_1p1_quad(a, l, &spec)?.into(),
                pressure_dirichlet_comb(l, PI / (2.0 * l), 1)?.into(),
                pressure_euler_maclaurin(l)?.into(),
            ];
            t.push(row);
            Ok(Run::from_single_row(t))
        }
        3 => {
            if cfg.profile == Some(ProfileName::Box) {
                return Err(CliError::Config("3+1 pressure needs the lorentz profile".into()));
            }
            let l2 = need(cfg.lambda2, "lambda2")?;
            let y0 = need(cfg.y0, "y0")?;
            let prof = make_lorentz_profile(l2, length(cfg, y0)).map_err(|e| CliError::Config(e.to_string()))?;
            let br = pressure_3p1(&prof, l, &spec)?;
            let mut t = Table::new(vec![
                col("lambda2", "infrared parameter"),
                col("y0", "ultraviolet length, input units"),
                col("L", "plate separation, input units"),
                col("z", "profile peak Z"),
                col("total", "3+1 pressure, Planck units"),
                col("leading", "-Z pi^2/(240 L^4)"),
                col("y0_corrections", "finite-y0 corrections"),
                col("lambda2_correction", "infrared-parameter correction"),
                col("terms_used", "mode-sum terms"),
                col("total_pa", "total converted to pascal"),
            ]);
            t.meta("command", "casimir");
            t.meta("dims", 3);
            t.push(vec![
                l2.into(),
                y0.into(),
                l_in.into(),
                prof.z.into(),
                br.total.into(),
                br.leading.into(),
                br.y0_corrections.into(),
                br.lambda2_correction.into(),
                (br.terms_used as u64).into(),
                to_physical_pressure(br.total).into(),
            ]);
            Ok(Run::from_single_row(t))
        }
        d => Err(CliError::Config(format!("'dims' must be 1 or 3, got {d}"))),
    }
}

fn stats(cfg: &RunConfig) -> Result<Run> {
    let probs = cfg.probs.clone().ok_or_else(|| CliError::Config("missing 'probs'".into()))?;
    let w = cfg
        .intensities
        .clone()
        .ok_or_else(|| CliError::Config("missing 'intensities'".into()))?;
    let n_osc = need(cfg.oscillators, "oscillators")?;
    let nmax = cfg.nmax.unwrap_or(30).min(MAX_POINTS as u64) as usize;
    let bad = |e: vacuumlab::Error| CliError::Config(e.to_string());
    let table = renyi_poisson_table(&probs, &w, n_osc, nmax).map_err(bad)?;
    let mut t = Table::new(vec![
        col("n", "photon number"),
        col("N", "number of oscillators"),
        col("p_renyi", "finite-N excitation probability"),
        col("p_shannon", "Poisson limit with parameter sum p_i w_i"),
        col("gap", "p_renyi - p_shannon"),
    ]);
    t.meta("command", "stats");
    t.meta("probs", format!("{probs:?}"));
    t.meta("intensities", format!("{w:?}"));
    let mut worst = 0.0f64;
    for (n, p) in table.iter().enumerate() {
        let s = shannon_poisson_pmf(&probs, &w, n as u64).map_err(bad)?;
        worst = worst.max((p - s).abs());
        t.push(vec![(n as u64).into(), n_osc.into(), (*p).into(), s.into(), (p - s).into()]);
    }
    let mean = kn_average(1.0, &probs, &w).map_err(bad)?;
    let summary = vec![
        (col("N", "number of oscillators"), n_osc.into()),
        (col("nmax", "largest photon number compared"), (nmax as u64).into()),
        (col("mean_intensity", "sum p_i w_i"), mean.into()),
        (col("shannon_gap", "max over n of |p_renyi - p_shannon|"), worst.into()),
    ];
    Ok(Run {
        table: t,
        summary,
        failed: false,
        summary_json: None,
    })
}

fn shift(cfg: &RunConfig) -> Result<Run> {
    let pp = profile(cfg)?;
    let q = cfg.q.unwrap_or(1.0);
    let spec = cfg.quadrature()?;
    let gap = cfg.gap.map(|g| positive(g, "gap")).transpose()?;
    let free = radiative_shift(&pp.profile, q, None, &spec)?;
    let (plane, image) = match gap {
        Some(g) => {
            let gp = length(cfg, g);
            (
                Some(radiative_shift(&pp.profile, q, Some(gp), &spec)?),
                Some(mirror_image_term(&pp.profile, q, gp)?),
            )
        }
        None => (None, None),
    };
    let mut cols = profile_columns();
    cols.extend([
        col("q", "bare charge"),
        col("gap", "distance to the Dirichlet plane, input units"),
        col("free", "averaged radiative shift without the plane, Planck units"),
        col("plane", "averaged radiative shift with the plane"),
        col("image", "(q/2) times the averaged potential at twice the gap"),
        col("mirror_residual", "plane - free - image"),
    ]);
    let mut t = Table::new(cols);
    t.meta("command", "shift");
    let mut row = pp.cells;
    let resid = plane.zip(image).map(|(p, i)| p - free - i);
    row.extend([q.into(), Cell::from(gap), free.into(), plane.into(), image.into(), resid.into()]);
    t.push(row);
    Ok(Run::from_single_row(t))
}

fn validate() -> Result<Run> {
    let reports = run_all();
    let mut t = Table::new(vec![
        col("criterion", "acceptance criterion number"),
        col("name", "what is checked"),
        col("expected", "target value"),
        col("measured", "measured value or residual"),
        col("tolerance", "allowed deviation"),
        col("pass", "true when within tolerance"),
        col("detail", "supporting numbers"),
    ]);
    t.meta("command", "validate");
    let mut failed = false;
    for r in &reports {
        failed |= !r.pass;
        t.push(vec![
            (r.criterion as u64).into(),
            r.name.as_str().into(),
            r.expected.into(),
            r.measured.into(),
            r.tolerance.into(),
            if r.pass { "true" } else { "false" }.into(),
            r.detail.as_str().into(),
        ]);
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    t.meta("passed", format!("{passed}/{}", reports.len()));
    Ok(Run {
        summary: vec![(col("passed", "criteria passed"), (passed as u64).into())],
        table: t,
        failed,
        summary_json: Some(serde_json::to_value(&reports)?),
    })
}

fn sweep(cfg: &RunConfig) -> Result<Run> {
    let target = need(cfg.target, "target")?;
    if matches!(target, Command::Sweep | Command::Validate) {
        return Err(CliError::Config(format!("cannot sweep '{target:?}'").to_lowercase()));
    }
    let param = cfg
        .parameter
        .clone()
        .ok_or_else(|| CliError::Config("missing 'parameter'".into()))?;
    if !keys_for(target).contains(&param.as_str()) {
        return Err(CliError::Config(format!(
            "'{param}' is not a parameter of {target:?}; choose from {:?}",
            keys_for(target)
        )));
    }
    let values = cfg.values.clone().unwrap_or_default();
    if values.is_empty() {
        return Err(CliError::Config("sweep needs at least one value".into()));
    }
    if values.len() > MAX_POINTS {
        return Err(CliError::Config(format!("at most {MAX_POINTS} sweep values")));
    }
    let mut configs = Vec::with_capacity(values.len());
    for &v in &values {
        let mut c = cfg.clone();
        c.command = Some(target);
        c.target = None;
        c.set_number(&param, v)?;
        configs.push(c);
    }
    let runs = run_parallel(&configs)?;
    // the swept key leads the row unless the summary already carries it
    let echoed = runs[0].summary.iter().any(|(c, _)| c.name == param);
    let mut cols = if echoed { Vec::new() } else { vec![col(&param, "swept value")] };
    cols.extend(runs[0].summary.iter().map(|(c, _)| c.clone()));
    let mut t = Table::new(cols);
    t.meta("command", "sweep");
    t.meta("target", format!("{target:?}").to_lowercase());
    t.meta("parameter", &param);
    for (v, run) in values.iter().zip(&runs) {
        let mut row = if echoed { Vec::new() } else { vec![Cell::Num(*v)] };
        row.extend(run.summary.iter().map(|(_, c)| c.clone()));
        t.push(row);
    }
    Ok(Run {
        summary: Vec::new(),
        table: t,
        failed: false,
        summary_json: None,
    })
}

/// Rows are independent; compute them on scoped threads and keep order.
fn run_parallel(configs: &[RunConfig]) -> Result<Vec<Run>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(configs.len());
    let chunk = configs.len().div_ceil(workers);
    let results: Vec<Vec<Result<Run>>> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(dispatch).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    results.into_iter().flatten().collect()
}

pub fn describe_units(u: Units) -> &'static str {
    match u {
        Units::Planck => "lengths in Planck lengths",
        Units::M => "lengths in metres",
        Units::Km => "lengths in kilometres",
        Units::Au => "lengths in astronomical units",
    }
}
