//! Guarantee transfer certificates.
//!
//! Construction A turns a guarantee for long-run averages into one for
//! discounted payoffs; construction B goes the other way. Each one selects
//! deterministic parameters, concatenates near-optimal block policies into a
//! single published schedule, and the engine then certifies the transferred
//! guarantee against an exact best response, with every analytic slack and
//! every discretization budget stated explicitly in the report.

use std::fmt;

use crate::error::{Error, Result};
use crate::fmt::fmt12;
use crate::game::{embed, EmbeddedProcess, GameSpec, Side, SwitchSchedule};
use crate::kernel::{self, BoundCheck};
use crate::value::{
    avg_value_family, best_response, best_response_bolza, bolza_plan, AvgValueFamily,
    BestResponseResult, BolzaSpec, Bound, FamilyKind, PayoffSpec, TabulatedFamily,
};

/// Which direction the guarantee is transferred.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Average guarantee made to protect the discounted payoff.
    AvgToDisc,
    /// Discounted guarantee made to protect the average payoff.
    DiscToAvg,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::AvgToDisc => write!(f, "A"),
            Construction::DiscToAvg => write!(f, "B"),
        }
    }
}

/// Parameters of construction A at level k over horizon T.
///
/// `ln p = (5/4) ln k / k` pins the whole chain
/// `1/k < ln k/k < ln p < p-1 < p ln p < 2 ln k/k` for every k >= 3:
/// the binding link is `(5/4) e^{(5/4)x} < 2` at `x = ln k/k <= ln 3/3`.
#[derive(Clone, Debug)]
pub struct ParamsA {
    pub k: u32,
    pub t_horizon: f64,
    pub p: f64,
    /// Discount rate of the protected payoff, `1/T`.
    pub lambda: f64,
    /// Block length `T (p - 1) / p`, so that `(T - delta) / T = 1/p`.
    pub delta: f64,
    /// Switch times `tau_i = i delta` for i = 0..=k.
    pub tau: Vec<f64>,
    /// Switch steps `n_i = round(tau_i)`.
    pub switch_steps: Vec<u64>,
    /// Rounded block length `n_1`; drives the discretization slack.
    pub delta_hat: u64,
}

pub fn select_params_a(k: u32, t_horizon: f64) -> Result<ParamsA> {
    if k < 3 {
        return Err(Error::ChainViolated(format!(
            "the parameter chain needs ln k > 1, so k >= 3 (got k = {k})"
        )));
    }
    if !(t_horizon > 0.0 && t_horizon.is_finite()) {
        return Err(Error::BadParameter(format!(
            "horizon {t_horizon} must be positive and finite"
        )));
    }
    let kf = k as f64;
    let ln_p = 1.25 * kf.ln() / kf;
    let p = ln_p.exp();
    let links = [
        ("1/k < ln k / k", 1.0 / kf, kf.ln() / kf),
        ("ln k / k < ln p", kf.ln() / kf, ln_p),
        ("ln p < p - 1", ln_p, p - 1.0),
        ("p - 1 < p ln p", p - 1.0, p * ln_p),
        ("p ln p < 2 ln k / k", p * ln_p, 2.0 * kf.ln() / kf),
    ];
    for (name, lo, hi) in links {
        if !(lo < hi) {
            return Err(Error::ChainViolated(format!(
                "link {name} fails at k = {k}: {lo} >= {hi}"
            )));
        }
    }
    let delta = t_horizon * (p - 1.0) / p;
    let tau: Vec<f64> = (0..=k).map(|i| i as f64 * delta).collect();
    let switch_steps: Vec<u64> = tau.iter().map(|t| t.round() as u64).collect();
    let delta_hat = switch_steps[1];
    if delta_hat < 4 {
        return Err(Error::BadParameter(format!(
            "horizon {t_horizon} too small for k = {k}: rounded block length {delta_hat} < 4"
        )));
    }
    for w in switch_steps.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::BadParameter(format!(
                "rounded switch steps must increase, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(ParamsA {
        k,
        t_horizon,
        p,
        lambda: 1.0 / t_horizon,
        delta,
        tau,
        switch_steps,
        delta_hat,
    })
}

/// Parameters of construction B at level k over horizon T.
///
/// M > 1 solves `M ln M = k` (unique since the left side is increasing);
/// `p = e^{1/M}` then gives `p^{-k} = 1/M` exactly, and the geometric block
/// lengths `t_i = (T/M) p^{-i}` sum to `tau_k < T`.
#[derive(Clone, Debug)]
pub struct ParamsB {
    pub k: u32,
    pub t_horizon: f64,
    pub m_big: f64,
    pub p: f64,
    /// Rate of the guaranteed discounted family at the coarsest block, `1/T`.
    pub lambda: f64,
    /// Block lengths `t_i = (T/M) p^{-i}` for i = 0..=k.
    pub t_lens: Vec<f64>,
    /// Switch times: partial sums of `t_i`, for i = 0..=k.
    pub tau: Vec<f64>,
    /// Switch steps `n_i = round(tau_i)`.
    pub switch_steps: Vec<u64>,
    /// Rounded block lengths `n_{i+1} - n_i` for i = 0..k-1.
    pub step_lens: Vec<u64>,
}

/// The unique root of `M ln M = k` on (1, k + 2), bisected to width 1e-12.
fn solve_m(k: f64) -> f64 {
    let mut lo = 1.0;
    let mut hi = k + 2.0;
    // (k + 2) ln(k + 2) > k for every k >= 1, so the root is bracketed.
    for _ in 0..200 {
        if hi - lo <= 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid * mid.ln() < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn select_params_b(k: u32, t_horizon: f64) -> Result<ParamsB> {
    if k < 2 {
        return Err(Error::BadParameter(format!(
            "construction B needs k >= 2, got {k}"
        )));
    }
    if !(t_horizon > 0.0 && t_horizon.is_finite()) {
        return Err(Error::BadParameter(format!(
            "horizon {t_horizon} must be positive and finite"
        )));
    }
    let kf = k as f64;
    let m_big = solve_m(kf);
    let p = (1.0 / m_big).exp();
    let drift = (p.powi(-(k as i32)) - 1.0 / m_big).abs();
    if drift > 1e-9 {
        return Err(Error::ChainViolated(format!(
            "p^-k = 1/M fails: drift {drift}"
        )));
    }
    let pinch = (1.0 - p / m_big) / (m_big * (1.0 - 1.0 / p));
    if !(pinch < 1.0) {
        return Err(Error::ChainViolated(format!(
            "(1 - p/M) / (M (1 - 1/p)) < 1 fails: {pinch}"
        )));
    }
    let t0 = t_horizon / m_big;
    let t_lens: Vec<f64> = (0..=k).map(|i| t0 * p.powi(-(i as i32))).collect();
    let mut tau = Vec::with_capacity(k as usize + 1);
    tau.push(0.0);
    for i in 0..k as usize {
        tau.push(tau[i] + t_lens[i]);
    }
    if !(tau[k as usize] <= t_horizon) {
        return Err(Error::ChainViolated(format!(
            "tau_k = {} exceeds the horizon {t_horizon}",
            tau[k as usize]
        )));
    }
    if t_lens[k as usize].round() < 2.0 {
        return Err(Error::BadParameter(format!(
            "horizon {t_horizon} too small for k = {k}: smallest block rounds below 2"
        )));
    }
    let switch_steps: Vec<u64> = tau.iter().map(|t| t.round() as u64).collect();
    let mut step_lens = Vec::with_capacity(k as usize);
    for i in 0..k as usize {
        if switch_steps[i + 1] <= switch_steps[i] {
            return Err(Error::BadParameter(format!(
                "block {i} rounds to zero steps ({} to {})",
                switch_steps[i],
                switch_steps[i + 1]
            )));
        }
        step_lens.push(switch_steps[i + 1] - switch_steps[i]);
    }
    Ok(ParamsB {
        k,
        t_horizon,
        m_big,
        p,
        lambda: 1.0 / t_horizon,
        t_lens,
        tau,
        switch_steps,
        step_lens,
    })
}

/// A published maximizer schedule with the metadata the verifier needs.
#[derive(Clone, Debug)]
pub struct BuiltStrategy {
    pub construction: Construction,
    pub k: u32,
    pub t_horizon: f64,
    pub schedule: SwitchSchedule,
    /// Switch steps `n_0..n_k` the blocks start at.
    pub block_starts: Vec<u64>,
    /// The block length whose reciprocal enters the discretization slack:
    /// `delta_hat` for construction A, `min t_hat_i` for construction B.
    pub slack_steps: u64,
}

/// Construction A schedule: one block policy, replayed on every block.
///
/// The block policy is the `delta_hat`-step plan optimal for the payoff
/// `(1/T) sum of stage payoffs + ((T - delta_hat)/T) v_lower(rest)`; the
/// same plan restarts at each switch step, its last step padding blocks that
/// round one step long, and the final copy persists as the stationary tail.
pub fn build_strategy_ut(
    spec: &GameSpec,
    params: &ParamsA,
    family: &AvgValueFamily,
) -> Result<BuiltStrategy> {
    if family.bound() != Bound::Lower {
        return Err(Error::TableMismatch(
            "construction A needs the lower average value family".into(),
        ));
    }
    let t_hat = params.t_horizon.round() as u64;
    if t_hat <= params.delta_hat {
        return Err(Error::BadParameter(format!(
            "rounded horizon {t_hat} must exceed the block length {}",
            params.delta_hat
        )));
    }
    let tail_h = t_hat - params.delta_hat;
    let weight = (params.t_horizon - params.delta_hat as f64) / params.t_horizon;
    let terminal: Vec<f64> = family
        .values(tail_h)
        .map_err(|_| {
            Error::MissingTable(format!(
                "average value table at horizon {tail_h} (block policy terminal)"
            ))
        })?
        .iter()
        .map(|v| weight * v)
        .collect();
    let block = BolzaSpec {
        horizon: params.delta_hat,
        stage_weight: 1.0 / params.t_horizon,
        discount_per_step: 1.0,
        terminal,
    };
    let plan = bolza_plan(spec, &block, Bound::Lower)?;
    let stack = &plan.policies;
    let mut segments = Vec::new();
    for i in 0..params.k as usize {
        let start = params.switch_steps[i];
        let end = params.switch_steps[i + 1];
        for j in 0..end - start {
            let idx = (j as usize).min(stack.len() - 1);
            segments.push((start + j, stack[idx].clone()));
        }
    }
    let last = params.switch_steps[params.k as usize];
    for (j, policy) in stack.iter().enumerate() {
        segments.push((last + j as u64, policy.clone()));
    }
    Ok(BuiltStrategy {
        construction: Construction::AvgToDisc,
        k: params.k,
        t_horizon: params.t_horizon,
        schedule: SwitchSchedule::new(segments)?,
        block_starts: params.switch_steps.clone(),
        slack_steps: params.delta_hat,
    })
}

/// The discount matching the rate of block i, `mu_i = 1 - exp(-lambda p^i)`.
pub fn block_discount(params: &ParamsB, i: u32) -> f64 {
    -(-params.lambda * params.p.powi(i as i32)).exp_m1()
}

/// Construction B schedule: k distinct block policies.
///
/// Block i plays the `t_hat_i`-step plan optimal for the payoff
/// `mu_i sum of (1 - mu_i)^j stage payoffs + (1 - mu_i)^{t_hat_i} w_lower`;
/// each block length matches its plan exactly, and the last policy of the
/// final block persists as the stationary tail.
pub fn build_strategy_ul(
    spec: &GameSpec,
    params: &ParamsB,
    family: &TabulatedFamily,
) -> Result<BuiltStrategy> {
    if family.kind() != FamilyKind::Discounted || family.bound() != Bound::Lower {
        return Err(Error::TableMismatch(
            "construction B needs the lower discounted value family".into(),
        ));
    }
    let mut segments = Vec::new();
    for i in 0..params.k {
        let mu = block_discount(params, i);
        let table = family.lookup(mu).map_err(|_| {
            Error::MissingTable(format!(
                "discounted value table at discount {mu} (block {i})"
            ))
        })?;
        let block = BolzaSpec::discounted_step(mu, params.step_lens[i as usize], table);
        let plan = bolza_plan(spec, &block, Bound::Lower)?;
        let start = params.switch_steps[i as usize];
        for (j, policy) in plan.policies.iter().enumerate() {
            segments.push((start + j as u64, policy.clone()));
        }
    }
    Ok(BuiltStrategy {
        construction: Construction::DiscToAvg,
        k: params.k,
        t_horizon: params.t_horizon,
        schedule: SwitchSchedule::new(segments)?,
        block_starts: params.switch_steps.clone(),
        slack_steps: *params.step_lens.iter().min().unwrap(),
    })
}

/// The payoff a certificate protects.
#[derive(Copy, Clone, Debug)]
pub enum GuaranteePayoff {
    Discounted { lambda: f64 },
    Average { t_end: f64 },
}

/// One verified certificate. `pass` holds exactly when every state satisfies
/// `achieved >= target - paper_slack - disc_slack`.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub construction: Construction,
    pub k: u32,
    pub t_horizon: f64,
    pub target: Vec<f64>,
    pub achieved: Vec<f64>,
    pub paper_slack: f64,
    pub disc_slack: f64,
    pub pass: bool,
    pub response: BestResponseResult,
    /// Density-comparison checks per start state; the construction pipelines
    /// fill these, a bare verify leaves them empty.
    pub near_checks: Vec<NearPayoffCheck>,
}

impl CertificateReport {
    /// Worst-state distance above the slack-adjusted target (negative when
    /// the certificate fails).
    pub fn margin(&self) -> f64 {
        self.achieved
            .iter()
            .zip(&self.target)
            .map(|(a, t)| a - (t - self.paper_slack - self.disc_slack))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn near_pass(&self) -> bool {
        self.near_checks
            .iter()
            .all(|c| c.near.pass() && c.guarantee.pass())
    }
}

/// Certifies that the published schedule protects `target` up to the two
/// slacks, by computing the opponent's exact best response.
///
/// Continuous payoffs are mapped onto the discrete play they embed into:
/// a discounted rate lambda becomes the per-step discount `1 - exp(-lambda)`
/// (their weighted sums coincide on phase-0 embeddings), an average horizon
/// T becomes the `round(T)`-step mean.
pub fn verify_guarantee(
    spec: &GameSpec,
    built: &BuiltStrategy,
    payoff: GuaranteePayoff,
    target: &[f64],
    paper_slack: f64,
    tol: f64,
) -> Result<CertificateReport> {
    if built.schedule.side() != Side::Max {
        return Err(Error::WrongSide {
            expected: Side::Max,
            got: built.schedule.side(),
        });
    }
    if target.len() != spec.num_states() {
        return Err(Error::TableMismatch(format!(
            "target covers {} states, game has {}",
            target.len(),
            spec.num_states()
        )));
    }
    let payoff_spec = match payoff {
        GuaranteePayoff::Discounted { lambda } => {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::BadParameter(format!(
                    "rate {lambda} must be positive and finite"
                )));
            }
            PayoffSpec::Discounted {
                discount: -(-lambda).exp_m1(),
                tol,
            }
        }
        GuaranteePayoff::Average { t_end } => {
            if !(t_end >= 1.0 && t_end.is_finite()) {
                return Err(Error::BadParameter(format!(
                    "horizon {t_end} must be >= 1 and finite"
                )));
            }
            PayoffSpec::Average {
                horizon: t_end.round() as u64,
            }
        }
    };
    let response = best_response(spec, &built.schedule, payoff_spec)?;
    let disc_slack = 8.0 / built.slack_steps as f64;
    let pass = response
        .values
        .iter()
        .zip(target)
        .all(|(a, t)| *a >= t - paper_slack - disc_slack);
    Ok(CertificateReport {
        construction: built.construction,
        k: built.k,
        t_horizon: built.t_horizon,
        target: target.to_vec(),
        achieved: response.values.clone(),
        paper_slack,
        disc_slack,
        pass,
        response,
        near_checks: Vec::new(),
    })
}

/// Density-comparison checks on one play: `near` bounds the distance between
/// the blockwise-weighted payoff c(z) and the protected payoff, `guarantee`
/// bounds how far c(z) may fall below the target at the start state.
#[derive(Copy, Clone, Debug)]
pub struct NearPayoffCheck {
    pub near: BoundCheck,
    pub guarantee: BoundCheck,
}

/// Construction A near payoff: `(1/T) integral of p^{-i} g over block i`,
/// plus `p^{-k}` times the tail guarantee at the exit state.
pub fn near_payoff_a(z: &EmbeddedProcess, params: &ParamsA, tail_table: &[f64]) -> Result<f64> {
    let k = params.k as usize;
    let mut c = 0.0;
    for i in 0..k {
        c += params.p.powi(-(i as i32)) / params.t_horizon
            * kernel::integrate_payoff(z, params.tau[i], params.tau[i + 1])?;
    }
    let (exit, _) = z.state_at(params.tau[k])?;
    Ok(c + params.p.powi(-(k as i32)) * tail_table[exit])
}

/// Construction B near payoff: `lambda integral of exp(-lambda p^i (t -
/// tau_i)) g over block i`, plus `p^{-k}` times the tail guarantee.
pub fn near_payoff_b(z: &EmbeddedProcess, params: &ParamsB, tail_table: &[f64]) -> Result<f64> {
    let k = params.k as usize;
    let mut c = 0.0;
    for i in 0..k {
        let rate = params.lambda * params.p.powi(i as i32);
        c += params.lambda
            * kernel::integrate_payoff_exp(z, params.tau[i], params.tau[i + 1], rate)?;
    }
    let (exit, _) = z.state_at(params.tau[k])?;
    Ok(c + params.p.powi(-(k as i32)) * tail_table[exit])
}

fn near_checks_a(
    z: &EmbeddedProcess,
    params: &ParamsA,
    tail_table: &[f64],
    target: &[f64],
    disc_slack: f64,
    tail_tol: f64,
) -> Result<NearPayoffCheck> {
    let c = near_payoff_a(z, params, tail_table)?;
    let bw = kernel::abel(z, params.lambda, tail_tol)?;
    let lnk_k = (params.k as f64).ln() / params.k as f64;
    let start = z.state_at(0.0)?.0;
    Ok(NearPayoffCheck {
        near: BoundCheck {
            lhs: c - bw,
            bound: 3.0 * lnk_k,
            slack: tail_tol + 1e-9,
        },
        guarantee: BoundCheck {
            lhs: target[start] - c,
            bound: 2.0 * lnk_k + disc_slack,
            slack: 1e-9,
        },
    })
}

fn near_checks_b(
    z: &EmbeddedProcess,
    params: &ParamsB,
    tail_table: &[f64],
    target: &[f64],
    disc_slack: f64,
) -> Result<NearPayoffCheck> {
    let c = near_payoff_b(z, params, tail_table)?;
    let av = kernel::cesaro(z, params.t_horizon)?;
    let start = z.state_at(0.0)?.0;
    Ok(NearPayoffCheck {
        near: BoundCheck {
            lhs: c - av,
            bound: 1.0 / params.m_big,
            slack: 1e-9,
        },
        guarantee: BoundCheck {
            lhs: target[start] - c,
            bound: 2.0 / params.k as f64 + disc_slack,
            slack: 1e-9,
        },
    })
}

/// End-to-end construction A: the k-block schedule built from the lower
/// average family protects the discounted payoff at rate `1/T` within
/// `5 ln k / k` plus the discretization slack.
pub fn certificate_a(
    spec: &GameSpec,
    k: u32,
    t_horizon: f64,
    tol: f64,
    tail_tol: f64,
) -> Result<CertificateReport> {
    let params = select_params_a(k, t_horizon)?;
    let t_hat = t_horizon.round() as u64;
    let family = avg_value_family(spec, t_hat, Bound::Lower)?;
    let built = build_strategy_ut(spec, &params, &family)?;
    let target = family.values(t_hat)?;
    let paper_slack = 5.0 * (k as f64).ln() / k as f64;
    let mut report = verify_guarantee(
        spec,
        &built,
        GuaranteePayoff::Discounted {
            lambda: params.lambda,
        },
        &target,
        paper_slack,
        tol,
    )?;
    let tail_table = family.values(t_hat - params.delta_hat)?;
    for traj in &report.response.trajectories {
        let z = embed(traj, 0.0)?;
        report.near_checks.push(near_checks_a(
            &z,
            &params,
            &tail_table,
            &target,
            report.disc_slack,
            tail_tol,
        )?);
    }
    Ok(report)
}

/// End-to-end construction B: the k-block schedule built from the lower
/// discounted family protects the T-average payoff within `1/M + 2/k` plus
/// the discretization slack.
pub fn certificate_b(
    spec: &GameSpec,
    k: u32,
    t_horizon: f64,
    tol: f64,
) -> Result<CertificateReport> {
    let params = select_params_b(k, t_horizon)?;
    let mus: Vec<f64> = (0..=k).map(|i| block_discount(&params, i)).collect();
    let family = TabulatedFamily::discounted(spec, &mus, Bound::Lower, tol)?;
    let built = build_strategy_ul(spec, &params, &family)?;
    let target = family.lookup(mus[0])?.to_vec();
    let paper_slack = 1.0 / params.m_big + 2.0 / params.k as f64;
    let mut report = verify_guarantee(
        spec,
        &built,
        GuaranteePayoff::Average {
            t_end: params.t_horizon,
        },
        &target,
        paper_slack,
        tol,
    )?;
    let tail_table = family.lookup(mus[params.k as usize])?.to_vec();
    for traj in &report.response.trajectories {
        let z = embed(traj, 0.0)?;
        report.near_checks.push(near_checks_b(
            &z,
            &params,
            &tail_table,
            &target,
            report.disc_slack,
        )?);
    }
    Ok(report)
}

/// One row per state: construction,k,T,state,target,achieved,paper_slack,
/// disc_slack,pass.
pub fn certificate_csv<'a>(reports: impl IntoIterator<Item = &'a CertificateReport>) -> String {
    let mut out = String::from("construction,k,T,state,target,achieved,paper_slack,disc_slack,pass\n");
    for r in reports {
        for s in 0..r.target.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.construction,
                r.k,
                r.t_horizon,
                s,
                fmt12(r.target[s]),
                fmt12(r.achieved[s]),
                fmt12(r.paper_slack),
                fmt12(r.disc_slack),
                r.pass
            ));
        }
    }
    out
}

/// One compared parameter pair of a slow-variation check.
#[derive(Copy, Clone, Debug)]
pub struct SlowVariationPair {
    pub gamma: f64,
    pub gamma_p: f64,
    /// Worst-state one-sided difference; nonnegative means no value is lost
    /// when the parameter coarsens by the factor p.
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct SlowVariationReport {
    pub kind: FamilyKind,
    pub p: f64,
    pub pairs: Vec<SlowVariationPair>,
    pub worst: f64,
    pub pass: bool,
}

/// Checks the one-sided variation of a value family under parameter ratio p:
/// averages must not decrease from T to pT, discounted values must not
/// decrease from rate p*lambda to lambda, each by more than `tol`.
pub fn slow_variation_check(
    family: &TabulatedFamily,
    p: f64,
    tol: f64,
) -> Result<SlowVariationReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::BadParameter(format!(
            "variation ratio {p} must exceed 1"
        )));
    }
    // Work on the scale where the pair (gamma, p gamma) lives: the horizon
    // itself for averages, the rate -ln(1 - mu) for discounts.
    let gammas: Vec<f64> = match family.kind() {
        FamilyKind::Average => family.params(),
        FamilyKind::Discounted => family.params().iter().map(|mu| -(1.0 - mu).ln()).collect(),
    };
    let mut pairs = Vec::new();
    let mut worst = f64::INFINITY;
    for (i, &g) in gammas.iter().enumerate() {
        for (j, &gp) in gammas.iter().enumerate() {
            if i == j || (gp - p * g).abs() > 1e-9 * p * g {
                continue;
            }
            let (coarse, fine) = match family.kind() {
                // U_{pT} - U_T.
                FamilyKind::Average => (&family.entries()[j].1, &family.entries()[i].1),
                // U_lambda - U_{p lambda}: the smaller rate is the coarser
                // parameter.
                FamilyKind::Discounted => (&family.entries()[i].1, &family.entries()[j].1),
            };
            let margin = coarse
                .iter()
                .zip(fine)
                .map(|(c, f)| c - f)
                .fold(f64::INFINITY, f64::min);
            worst = worst.min(margin);
            pairs.push(SlowVariationPair {
                gamma: g,
                gamma_p: gp,
                margin,
            });
        }
    }
    if pairs.is_empty() {
        return Err(Error::GridTooSmall(format!(
            "no parameter pairs at ratio {p} among {} grid points",
            gammas.len()
        )));
    }
    Ok(SlowVariationReport {
        kind: family.kind(),
        p,
        pairs,
        worst,
        pass: worst >= -tol,
    })
}

/// One subsolution probe: a window of `h` steps continued by the table at
/// `gamma` (a horizon for averages, a stored discount otherwise).
#[derive(Copy, Clone, Debug)]
pub struct SubsolutionProbe {
    pub h: u64,
    pub gamma: f64,
    /// Smallest eps that makes the shifted table a protected guarantee of
    /// the window game.
    pub needed_eps: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct SubsolutionReport {
    pub probes: Vec<SubsolutionProbe>,
    pub pass: bool,
}

/// Tests whether `family - eps` is a protected guarantee of each probed
/// window game: the maximizer publishes the window-optimal plan, the
/// opponent best-responds, and the probe records the eps actually needed.
pub fn subsolution_check(
    spec: &GameSpec,
    family: &TabulatedFamily,
    eps: f64,
    probes: &[(u64, f64)],
) -> Result<SubsolutionReport> {
    let mut out = Vec::with_capacity(probes.len());
    for &(h, gamma) in probes {
        let table = family.lookup(gamma)?;
        let (block, shifted) = match family.kind() {
            FamilyKind::Average => {
                let n = gamma.round() as u64;
                let shifted = family.lookup((n + h) as f64)?;
                (BolzaSpec::average_step(n, h, table), shifted)
            }
            // The discounted window keeps its parameter, so the shifted
            // table is the probed one.
            FamilyKind::Discounted => (BolzaSpec::discounted_step(gamma, h, table), table),
        };
        let plan = bolza_plan(spec, &block, Bound::Lower)?;
        let segments = plan
            .policies
            .iter()
            .enumerate()
            .map(|(j, p)| (j as u64, p.clone()))
            .collect();
        let published = SwitchSchedule::new(segments)?;
        let guaranteed = best_response_bolza(spec, &published, &block)?;
        let needed_eps = shifted
            .iter()
            .zip(&guaranteed)
            .map(|(u, g)| u - g)
            .fold(0.0, f64::max);
        out.push(SubsolutionProbe {
            h,
            gamma,
            needed_eps,
            pass: needed_eps <= eps,
        });
    }
    Ok(SubsolutionReport {
        pass: out.iter().all(|p| p.pass),
        probes: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::game::Policy;
    use crate::value::disc_value;

    const TOL: f64 = 1e-10;
    const TAIL: f64 = 1e-8;

    #[test]
    fn params_a_frozen_values_at_k10_t100() {
        let p = select_params_a(10, 100.0).unwrap();
        // ln p = 0.125 ln 10, evaluated independently.
        assert!((p.p - 1.3335214).abs() <= 1e-6);
        assert!((p.delta - 25.0105).abs() <= 1e-3);
        assert_eq!(&p.switch_steps[..5], &[0, 25, 50, 75, 100]);
        assert_eq!(p.delta_hat, 25);
        assert_eq!(p.tau.len(), 11);
        assert!((p.tau[10] - 10.0 * p.delta).abs() <= 1e-9);
    }

    #[test]
    fn params_a_rejections() {
        // ln 2 < 1 breaks the first chain link.
        assert!(matches!(
            select_params_a(2, 100.0),
            Err(Error::ChainViolated(_))
        ));
        // The chain is tightest at k = 3 and still holds.
        assert!(select_params_a(3, 400.0).is_ok());
        // Rounded block length below 4.
        assert!(matches!(
            select_params_a(10, 10.0),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn params_b_frozen_values_at_k2() {
        let p = select_params_b(2, 16.0).unwrap();
        assert!((p.m_big * p.m_big.ln() - 2.0).abs() <= 1e-9);
        assert!((p.m_big - 2.3459).abs() <= 1e-3);
        assert!((p.p - 1.5315).abs() <= 1e-3);
        // t_0 = 16/M, then the geometric decay.
        assert!((p.t_lens[0] - 16.0 / p.m_big).abs() <= 1e-9);
        assert!((p.t_lens[1] - p.t_lens[0] / p.p).abs() <= 1e-9);
        assert!(p.tau[2] <= 16.0);
        assert_eq!(p.step_lens.len(), 2);
        assert!(p.step_lens.iter().all(|&t| t >= 1));
    }

    #[test]
    fn params_b_rejections() {
        assert!(select_params_b(1, 64.0).is_err());
        // t_k = T / M^2 rounds below 2.
        assert!(matches!(
            select_params_b(2, 4.0),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn params_b_block_rates_stay_tabulated() {
        let p = select_params_b(8, 64.0).unwrap();
        // lambda p^k = M/T, the coarsest rate the tail table needs.
        let top = p.lambda * p.p.powi(p.k as i32);
        assert!((top - p.m_big / p.t_horizon).abs() <= 1e-9);
        for i in 0..=p.k {
            let mu = block_discount(&p, i);
            assert!(mu > 0.0 && mu < 1.0);
        }
    }

    #[test]
    fn certificate_a_on_constant_game() {
        let g = catalog::const_game(0.7).unwrap();
        let report = certificate_a(&g, 8, 64.0, TOL, TAIL).unwrap();
        assert!(report.pass);
        assert!(report.near_pass());
        for s in 0..g.num_states() {
            assert!((report.achieved[s] - 0.7).abs() <= 1e-9);
            assert!((report.target[s] - 0.7).abs() <= 1e-12);
        }
    }

    #[test]
    fn certificate_b_on_constant_game() {
        let g = catalog::const_game(0.7).unwrap();
        let report = certificate_b(&g, 8, 64.0, TOL).unwrap();
        assert!(report.pass);
        assert!(report.near_pass());
        for s in 0..g.num_states() {
            assert!((report.achieved[s] - 0.7).abs() <= 1e-9);
        }
    }

    #[test]
    fn certificate_a_on_the_forced_cycle() {
        // Transitions are uncontrolled, so the achieved discounted value is
        // the closed form of the alternating play no matter the policies.
        let g = catalog::cycle01();
        let report = certificate_a(&g, 8, 64.0, TOL, TAIL).unwrap();
        assert!(report.pass);
        assert!(report.near_pass());
        let mu = -(-1.0f64 / 64.0).exp_m1();
        let closed = (1.0 - mu) / (2.0 - mu);
        assert!((report.achieved[0] - closed).abs() <= 1e-9);
        assert!((report.target[0] - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn certificate_b_on_the_forced_cycle() {
        let g = catalog::cycle01();
        let report = certificate_b(&g, 4, 36.0, TOL).unwrap();
        assert!(report.pass);
        assert!(report.near_pass());
        // 36 steps of the forced alternation average to exactly 1/2.
        assert!((report.achieved[0] - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn sabotaged_schedule_fails_verification() {
        // nonergodic2 lets the maximizer lock payoff 0.9, so the lower
        // average target from the start state is near 0.9; a published
        // policy that locks 0.2 instead cannot reach it once the slacks
        // shrink below the difference.
        let g = catalog::nonergodic2();
        let params = select_params_a(32, 1024.0).unwrap();
        let family = avg_value_family(&g, 1024, Bound::Lower).unwrap();
        let honest = build_strategy_ut(&g, &params, &family).unwrap();
        let sabotage = BuiltStrategy {
            schedule: SwitchSchedule::stationary(
                Policy::new(&g, Side::Max, vec![0, 0, 0]).unwrap(),
            ),
            ..honest.clone()
        };
        let target = family.values(1024).unwrap();
        let paper_slack = 5.0 * 32f64.ln() / 32.0;
        let bad = verify_guarantee(
            &g,
            &sabotage,
            GuaranteePayoff::Discounted {
                lambda: params.lambda,
            },
            &target,
            paper_slack,
            TOL,
        )
        .unwrap();
        assert!(!bad.pass);
        assert!(bad.margin() < 0.0);
        // The honest schedule passes under the same target and slacks.
        let good = verify_guarantee(
            &g,
            &honest,
            GuaranteePayoff::Discounted {
                lambda: params.lambda,
            },
            &target,
            paper_slack,
            TOL,
        )
        .unwrap();
        assert!(good.pass);
    }

    #[test]
    fn verify_rejects_minimizer_schedules() {
        let g = catalog::matching();
        let params = select_params_a(8, 64.0).unwrap();
        let built = BuiltStrategy {
            construction: Construction::AvgToDisc,
            k: 8,
            t_horizon: 64.0,
            schedule: SwitchSchedule::stationary(Policy::first_action(&g, Side::Min)),
            block_starts: params.switch_steps.clone(),
            slack_steps: params.delta_hat,
        };
        let target = vec![0.0; g.num_states()];
        assert!(matches!(
            verify_guarantee(
                &g,
                &built,
                GuaranteePayoff::Discounted { lambda: 1.0 / 64.0 },
                &target,
                0.5,
                TOL
            ),
            Err(Error::WrongSide { .. })
        ));
    }

    #[test]
    fn passing_reports_reproduce_from_their_witnesses() {
        let g = catalog::ergodic5();
        let report = certificate_a(&g, 8, 64.0, TOL, TAIL).unwrap();
        assert!(report.pass);
        let mu = -(-1.0f64 / 64.0).exp_m1();
        for (s, traj) in report.response.trajectories.iter().enumerate() {
            let mut acc = 0.0;
            let mut weight = mu;
            for t in 0..traj.len() {
                acc += weight * traj.payoff(t);
                weight *= 1.0 - mu;
            }
            // The discarded tail is below the iteration tolerance.
            assert!(
                (acc - report.achieved[s]).abs() <= 1e-9,
                "state {s}: {acc} vs {}",
                report.achieved[s]
            );
        }
    }

    #[test]
    fn slow_variation_of_the_cycle_average_family() {
        let g = catalog::cycle01();
        let fam = avg_value_family(&g, 512, Bound::Lower).unwrap();
        let grid: Vec<u64> = (3..=9).map(|e| 1 << e).collect();
        let tab = TabulatedFamily::from_avg_family(&fam, &grid).unwrap();
        let report = slow_variation_check(&tab, 2.0, 1e-12).unwrap();
        assert!(report.pass);
        assert_eq!(report.pairs.len(), 6);
        // Even horizons hit 1/2 exactly on both states, so margins vanish.
        assert!(report.worst.abs() <= 1e-12);
    }

    #[test]
    fn slow_variation_of_a_discounted_family() {
        let g = catalog::const_game(0.4).unwrap();
        let lambdas = [0.4f64, 0.2, 0.1, 0.05];
        let mus: Vec<f64> = lambdas.iter().map(|l| -(-*l).exp_m1()).collect();
        let tab = TabulatedFamily::discounted(&g, &mus, Bound::Lower, 1e-13).unwrap();
        let report = slow_variation_check(&tab, 2.0, 1e-10).unwrap();
        assert!(report.pass);
        assert!(report.worst.abs() <= 1e-10);
        // A lonely grid cannot form pairs.
        let lone = TabulatedFamily::discounted(&g, &[0.5], Bound::Lower, 1e-13).unwrap();
        assert!(matches!(
            slow_variation_check(&lone, 2.0, 1e-10),
            Err(Error::GridTooSmall(_))
        ));
    }

    #[test]
    fn subsolution_holds_exactly_on_saddle_families() {
        let g = catalog::cycle01();
        let fam = avg_value_family(&g, 32, Bound::Lower).unwrap();
        let tab = TabulatedFamily::from_avg_family(&fam, &[4, 5, 8, 10, 16, 20]).unwrap();
        let probes = [(1u64, 4.0), (2, 8.0), (4, 16.0)];
        let report = subsolution_check(&g, &tab, 1e-9, &probes).unwrap();
        assert!(report.pass);
        for p in &report.probes {
            assert!(p.needed_eps <= 1e-12, "probe ({}, {})", p.h, p.gamma);
        }
    }

    #[test]
    fn subsolution_eps_tracks_the_saddle_gap() {
        // The lower discounted family of the matching game is an exact
        // subsolution; the upper one misses by mu times the saddle gap.
        let g = catalog::matching();
        let mu = 0.3;
        let lower = TabulatedFamily::discounted(&g, &[mu], Bound::Lower, 1e-13).unwrap();
        let report = subsolution_check(&g, &lower, 1e-9, &[(1, mu)]).unwrap();
        assert!(report.pass);

        let upper = TabulatedFamily::discounted(&g, &[mu], Bound::Upper, 1e-13).unwrap();
        let gap = disc_value(&g, mu, Bound::Upper, 1e-13).unwrap().values[0]
            - disc_value(&g, mu, Bound::Lower, 1e-13).unwrap().values[0];
        let miss = subsolution_check(&g, &upper, 1e-9, &[(1, mu)]).unwrap();
        assert!(!miss.pass);
        assert!(
            (miss.probes[0].needed_eps - mu * gap).abs() <= 1e-9,
            "needed {} vs mu * gap {}",
            miss.probes[0].needed_eps,
            mu * gap
        );
    }

    #[test]
    fn csv_rows_are_stable() {
        let g = catalog::const_game(0.5).unwrap();
        // Iterated tightly enough that the 12-digit print lands on 0.5.
        let report = certificate_b(&g, 2, 16.0, 1e-13).unwrap();
        let csv = certificate_csv([&report]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "construction,k,T,state,target,achieved,paper_slack,disc_slack,pass"
        );
        let first = lines.next().unwrap();
        let fields: Vec<&str> = first.split(',').collect();
        assert_eq!(fields[0], "B");
        assert_eq!(fields[1], "2");
        assert_eq!(fields[2], "16");
        assert_eq!(fields[3], "0");
        assert_eq!(fields[4], "0.500000000000");
        assert_eq!(fields[8], "true");
    }
}
