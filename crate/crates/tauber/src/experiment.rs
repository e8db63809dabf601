//! Named experiment runs over the bundled instances, each emitting one
//! deterministic CSV table: value convergence sweeps, certificate batteries,
//! the shift/embedding bound suite, and the scalar oracle comparison.
//!
//! Identical configurations produce byte-identical output: grids are walked
//! in declaration order, the sampling seed is fixed, and floats print
//! through one 12-digit formatter.

use std::fmt;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::certificate::{certificate_a, certificate_b, certificate_csv, CertificateReport};
use crate::error::{Error, Result};
use crate::fmt::fmt12;
use crate::game::{embed, random_trajectory, GameSpec};
use crate::kernel::{self, DEFAULT_TAIL_TOL};
use crate::scalar::{abel_fun, abel_seq, cesaro_seq, BoundedSequence, EventuallyPeriodic};
use crate::value::{avg_value_family, disc_value, Bound};

pub const DEFAULT_N_GRID: [u64; 3] = [10, 100, 1000];
pub const DEFAULT_K_LIST: [u32; 2] = [8, 16];
pub const DEFAULT_TOL: f64 = 1e-10;
/// Abel tail tolerance for re-evaluating payoffs on finite witness plays,
/// loose enough that the needed horizon fits inside every best-response
/// trajectory.
pub const WITNESS_TAIL_TOL: f64 = 1e-8;

/// Fixed sampling seed; part of the byte-determinism contract.
const SAMPLE_SEED: u64 = 42;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Convergence,
    Certificates,
    Bounds,
    Hardy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Mode::Convergence => "convergence",
            Mode::Certificates => "certificates",
            Mode::Bounds => "bounds",
            Mode::Hardy => "hardy",
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub instance: String,
    pub mode: Mode,
    /// Horizon grid; discount parameters couple to it as `mu = 1 - e^{-1/n}`.
    pub n_grid: Vec<u64>,
    /// Certificate levels; horizons default to `T = k^2`.
    pub k_list: Vec<u32>,
    /// Certified iteration tolerance for discounted tables.
    pub tol: f64,
}

impl RunConfig {
    pub fn new(instance: impl Into<String>, mode: Mode) -> Self {
        RunConfig {
            instance: instance.into(),
            mode,
            n_grid: DEFAULT_N_GRID.to_vec(),
            k_list: DEFAULT_K_LIST.to_vec(),
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub csv: String,
    /// Every mandatory check of the mode passed.
    pub all_pass: bool,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    if cfg.n_grid.is_empty() || cfg.n_grid.contains(&0) {
        return Err(Error::BadParameter(
            "horizon grid must be nonempty and positive".into(),
        ));
    }
    if cfg.k_list.is_empty() {
        return Err(Error::BadParameter("k list must be nonempty".into()));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::BadParameter(format!(
            "tolerance {} must be positive",
            cfg.tol
        )));
    }
    let spec = catalog::by_name(&cfg.instance)?;
    match cfg.mode {
        Mode::Convergence => run_convergence(&spec, cfg),
        Mode::Certificates => run_certificates(&spec, cfg),
        Mode::Bounds => run_bounds(&spec, cfg),
        Mode::Hardy => run_hardy(cfg),
    }
}

/// Values of both families at coupled parameters, one row per state plus a
/// sup-norm row per horizon. Mandatory checks: bound ordering and range.
fn run_convergence(spec: &GameSpec, cfg: &RunConfig) -> Result<RunOutput> {
    let max_n = *cfg.n_grid.iter().max().unwrap();
    let v_lo = avg_value_family(spec, max_n, Bound::Lower)?;
    let v_hi = avg_value_family(spec, max_n, Bound::Upper)?;
    let mut csv = String::from(
        "n,mu,state,v_lower,v_upper,w_lower,w_upper,tauber_gap,avg_saddle_gap,disc_saddle_gap\n",
    );
    let mut all_pass = true;
    // Discounted tables carry a certified iteration error; twice that plus
    // rounding is the honest ordering grace.
    let grace = 2.0 * cfg.tol + 1e-12;
    for &n in &cfg.n_grid {
        let mu = -(-1.0 / n as f64).exp_m1();
        let vl = v_lo.values(n)?;
        let vu = v_hi.values(n)?;
        let wl = disc_value(spec, mu, Bound::Lower, cfg.tol)?.values;
        let wu = disc_value(spec, mu, Bound::Upper, cfg.tol)?.values;
        let mut sup = [0.0f64; 3];
        for s in 0..spec.num_states() {
            let gaps = [(vl[s] - wl[s]).abs(), vu[s] - vl[s], wu[s] - wl[s]];
            for (acc, g) in sup.iter_mut().zip(gaps) {
                *acc = acc.max(g);
            }
            all_pass &= vl[s] <= vu[s] + grace && wl[s] <= wu[s] + grace;
            for v in [vl[s], vu[s], wl[s], wu[s]] {
                all_pass &= (-grace..=1.0 + grace).contains(&v);
            }
            let _ = writeln!(
                csv,
                "{n},{},{s},{},{},{},{},{},{},{}",
                fmt12(mu),
                fmt12(vl[s]),
                fmt12(vu[s]),
                fmt12(wl[s]),
                fmt12(wu[s]),
                fmt12(gaps[0]),
                fmt12(gaps[1]),
                fmt12(gaps[2]),
            );
        }
        let _ = writeln!(
            csv,
            "{n},{},sup,,,,,{},{},{}",
            fmt12(mu),
            fmt12(sup[0]),
            fmt12(sup[1]),
            fmt12(sup[2]),
        );
    }
    Ok(RunOutput { csv, all_pass })
}

/// Both constructions at every requested level, horizons `T = k^2`.
/// Mandatory checks: every certificate passes, including its density
/// comparisons.
fn run_certificates(spec: &GameSpec, cfg: &RunConfig) -> Result<RunOutput> {
    let mut reports: Vec<CertificateReport> = Vec::new();
    for &k in &cfg.k_list {
        let t = (k as f64) * (k as f64);
        reports.push(certificate_a(spec, k, t, cfg.tol, WITNESS_TAIL_TOL)?);
    }
    for &k in &cfg.k_list {
        let t = (k as f64) * (k as f64);
        reports.push(certificate_b(spec, k, t, cfg.tol)?);
    }
    let all_pass = reports.iter().all(|r| r.pass && r.near_pass());
    Ok(RunOutput {
        csv: certificate_csv(&reports),
        all_pass,
    })
}

fn push_bound_row(
    csv: &mut String,
    all_pass: &mut bool,
    check: &str,
    instance: &str,
    params: &str,
    b: kernel::BoundCheck,
) {
    *all_pass &= b.pass();
    let _ = writeln!(
        csv,
        "{check},{instance},{params},{},{},{},{}",
        fmt12(b.lhs),
        fmt12(b.bound),
        fmt12(b.margin()),
        b.pass()
    );
}

/// Shift-robustness and embedding-consistency bounds over sampled plays,
/// phases and horizons. Mandatory checks: every row.
fn run_bounds(spec: &GameSpec, _cfg: &RunConfig) -> Result<RunOutput> {
    const HORIZONS: [f64; 2] = [10.0, 100.0];
    const LAMBDAS: [f64; 2] = [0.1, 0.01];
    const S_GRID: [f64; 4] = [0.0, 0.25, 0.5, 0.9];
    const R_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.9, 1.0];
    const TRAJECTORIES: usize = 25;

    let steps = kernel::abel_states_needed(
        LAMBDAS.iter().fold(f64::INFINITY, |a, &b| a.min(b)),
        DEFAULT_TAIL_TOL,
        1.0,
    ) as u64
        + 128;
    let mut csv = String::from("check,instance,params,lhs,bound,margin,pass\n");
    let mut all_pass = true;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for j in 0..TRAJECTORIES {
        let s0 = j % spec.num_states();
        let y = random_trajectory(spec, s0, steps, &mut rng)?;
        let z = embed(&y, 0.0)?;
        for t_end in HORIZONS {
            for lambda in LAMBDAS {
                for s in S_GRID {
                    for r in R_GRID {
                        let rep =
                            kernel::shift_bound_check(&z, t_end, lambda, s, r, DEFAULT_TAIL_TOL)?;
                        let params =
                            format!("traj={j};s={s};r={r};T={t_end};lambda={lambda}");
                        push_bound_row(
                            &mut csv,
                            &mut all_pass,
                            "shift_abel",
                            spec.name(),
                            &params,
                            rep.abel,
                        );
                        push_bound_row(
                            &mut csv,
                            &mut all_pass,
                            "shift_cesaro",
                            spec.name(),
                            &params,
                            rep.cesaro,
                        );
                    }
                    let rep =
                        kernel::embedding_consistency(&y, s, t_end, lambda, DEFAULT_TAIL_TOL)?;
                    let params = format!("traj={j};s={s};T={t_end};lambda={lambda}");
                    push_bound_row(
                        &mut csv,
                        &mut all_pass,
                        "embed_average",
                        spec.name(),
                        &params,
                        rep.average,
                    );
                    push_bound_row(
                        &mut csv,
                        &mut all_pass,
                        "embed_discounted",
                        spec.name(),
                        &params,
                        rep.discounted,
                    );
                }
            }
        }
    }
    Ok(RunOutput { csv, all_pass })
}

/// The scalar oracle on the alternating sequence: the Cesàro/Abel gap at
/// weight `1/n` against the bound `2/n`, densely up to 4096 and then on a
/// stride of 97, capped by the largest grid entry; plus the step-function
/// evaluator against the sequence evaluator at matched parameters.
/// Mandatory checks: every row.
fn run_hardy(cfg: &RunConfig) -> Result<RunOutput> {
    let cap = *cfg.n_grid.iter().max().unwrap();
    let alt = BoundedSequence::alternating01();
    let fun = EventuallyPeriodic::new(vec![], vec![0.0, 1.0])?.step_function();
    let mut csv = String::from("check,param,value_a,value_b,lhs,bound,pass\n");
    let mut all_pass = true;
    let row = |csv: &mut String, all_pass: &mut bool, check: &str, param: String, a: f64, b: f64, bound: f64| {
        let lhs = (a - b).abs();
        let pass = lhs <= bound;
        *all_pass &= pass;
        let _ = writeln!(
            csv,
            "{check},{param},{},{},{},{},{pass}",
            fmt12(a),
            fmt12(b),
            fmt12(lhs),
            fmt12(bound)
        );
    };
    // The weight 1/n must stay below 1, so the sweep starts at n = 2.
    let mut n = 2u64;
    while n <= cap {
        let ces = cesaro_seq(&alt, n)?;
        let ab = abel_seq(&alt, 1.0 / n as f64, DEFAULT_TAIL_TOL)?;
        row(&mut csv, &mut all_pass, "gap", n.to_string(), ces, ab, 2.0 / n as f64);
        n = if n < 4096 { n + 1 } else { n + 97 };
    }
    for lambda in [0.5f64, 0.1, 0.05, 0.01, 1e-3] {
        let mu = -(-lambda).exp_m1();
        let from_fun = abel_fun(&fun, lambda, DEFAULT_TAIL_TOL)?;
        let from_seq = abel_seq(&alt, mu, DEFAULT_TAIL_TOL)?;
        row(
            &mut csv,
            &mut all_pass,
            "fun_vs_seq",
            format!("{lambda}"),
            from_fun,
            from_seq,
            1e-10,
        );
    }
    Ok(RunOutput { csv, all_pass })
}
