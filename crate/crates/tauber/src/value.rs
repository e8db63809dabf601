//! Exact values of the average and discounted families, Bolza (finite horizon
//! plus terminal) games, and best responses against published schedules.
//!
//! Conventions, fixed across the crate:
//! - `avg(n)` weighs the first `n` stage payoffs by `1/n`; the horizon-0 value
//!   is identically 0 and only anchors the recursion.
//! - `disc(mu)` weighs step `t` by `mu * (1 - mu)^t`.
//! - Lower values announce the maximizer (max-min per stage), upper values the
//!   minimizer (min-max). Ties break toward the lowest action index, so every
//!   computed policy is deterministic and reproducible.

use crate::error::{Error, Result};
use crate::fmt::fmt12;
use crate::game::{simulate, Action, GameSpec, Policy, Side, State, SwitchSchedule, Trajectory};
use std::fmt;

/// Which player announces first: `Lower` is max-min, `Upper` is min-max.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Lower,
    Upper,
}

impl Bound {
    /// The side whose guarantee the bound describes.
    pub fn announcer(self) -> Side {
        match self {
            Bound::Lower => Side::Max,
            Bound::Upper => Side::Min,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Lower => write!(f, "lower"),
            Bound::Upper => write!(f, "upper"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Average,
    Discounted,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Average => write!(f, "average"),
            FamilyKind::Discounted => write!(f, "discounted"),
        }
    }
}

/// A payoff family member: `avg(n)` or `disc(mu)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Family {
    Average { horizon: u64 },
    Discounted { discount: f64 },
}

impl Family {
    pub fn kind(self) -> FamilyKind {
        match self {
            Family::Average { .. } => FamilyKind::Average,
            Family::Discounted { .. } => FamilyKind::Discounted,
        }
    }

    fn parameter_label(self) -> String {
        match self {
            Family::Average { horizon } => horizon.to_string(),
            Family::Discounted { discount } => fmt12(discount),
        }
    }
}

/// A per-state value vector for one family member and one bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable {
    pub family: Family,
    pub bound: Bound,
    pub values: Vec<f64>,
}

/// Renders tables as CSV with columns `family,parameter,side,state,value`,
/// states ascending; byte-identical across runs.
pub fn value_tables_csv<'a>(tables: impl IntoIterator<Item = &'a ValueTable>) -> String {
    let mut out = String::from("family,parameter,side,state,value\n");
    for t in tables {
        for (s, v) in t.values.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t.family.kind(),
                t.family.parameter_label(),
                t.bound,
                s,
                fmt12(*v)
            ));
        }
    }
    out
}

/// One-stage minimax of `cont` over the action pairs at `s`; returns the
/// value and the announcing side's optimal action (lowest index on ties).
fn stage(spec: &GameSpec, s: State, cont: &[f64], bound: Bound) -> (f64, Action) {
    match bound {
        Bound::Lower => {
            let mut best = f64::NEG_INFINITY;
            let mut best_a = 0;
            for a in 0..spec.action_count(Side::Max, s) {
                let mut inner = f64::INFINITY;
                for b in 0..spec.action_count(Side::Min, s) {
                    let v = cont[spec.next_unchecked(s, a, b)];
                    if v < inner {
                        inner = v;
                    }
                }
                if inner > best {
                    best = inner;
                    best_a = a;
                }
            }
            (best, best_a)
        }
        Bound::Upper => {
            let mut best = f64::INFINITY;
            let mut best_b = 0;
            for b in 0..spec.action_count(Side::Min, s) {
                let mut inner = f64::NEG_INFINITY;
                for a in 0..spec.action_count(Side::Max, s) {
                    let v = cont[spec.next_unchecked(s, a, b)];
                    if v > inner {
                        inner = v;
                    }
                }
                if inner < best {
                    best = inner;
                    best_b = b;
                }
            }
            (best, best_b)
        }
    }
}

/// The n-step average values for every horizon `1..=max_horizon`, kept as
/// unnormalized payoff sums so integer-payoff instances stay exact.
#[derive(Clone, Debug)]
pub struct AvgValueFamily {
    bound: Bound,
    // sums[i] holds n * avg-value for n = i + 1.
    sums: Vec<Vec<f64>>,
}

/// Tabulates the whole average family up to `max_horizon` in one backward pass.
pub fn avg_value_family(spec: &GameSpec, max_horizon: u64, bound: Bound) -> Result<AvgValueFamily> {
    if max_horizon == 0 {
        return Err(Error::BadParameter("average horizon must be positive".into()));
    }
    let n = spec.num_states();
    let mut sums = Vec::with_capacity(max_horizon as usize);
    let mut prev = vec![0.0; n];
    for _ in 0..max_horizon {
        let mut cur = vec![0.0; n];
        for (s, slot) in cur.iter_mut().enumerate() {
            *slot = spec.payoff(s) + stage(spec, s, &prev, bound).0;
        }
        sums.push(cur.clone());
        prev = cur;
    }
    Ok(AvgValueFamily { bound, sums })
}

impl AvgValueFamily {
    pub fn bound(&self) -> Bound {
        self.bound
    }

    pub fn max_horizon(&self) -> u64 {
        self.sums.len() as u64
    }

    pub fn value(&self, horizon: u64, s: State) -> Result<f64> {
        Ok(self.values(horizon)?[s])
    }

    pub fn values(&self, horizon: u64) -> Result<Vec<f64>> {
        if horizon == 0 || horizon > self.max_horizon() {
            return Err(Error::MissingTable(format!(
                "average horizon {horizon} (family covers 1..={})",
                self.max_horizon()
            )));
        }
        let sums = &self.sums[horizon as usize - 1];
        Ok(sums.iter().map(|v| v / horizon as f64).collect())
    }

    pub fn table(&self, horizon: u64) -> Result<ValueTable> {
        Ok(ValueTable {
            family: Family::Average { horizon },
            bound: self.bound,
            values: self.values(horizon)?,
        })
    }
}

/// The n-step average value table.
pub fn avg_value(spec: &GameSpec, horizon: u64, bound: Bound) -> Result<ValueTable> {
    avg_value_family(spec, horizon, bound)?.table(horizon)
}

/// One application of the discounted Bellman operator,
/// `w'(s) = mu g(s) + (1 - mu) val w(next)`. Exposed because its contraction
/// factor `1 - mu` is a tested property.
pub fn disc_bellman_step(spec: &GameSpec, mu: f64, bound: Bound, w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; spec.num_states()];
    for (s, slot) in out.iter_mut().enumerate() {
        *slot = mu * spec.payoff(s) + (1.0 - mu) * stage(spec, s, w, bound).0;
    }
    out
}

fn check_discount(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::BadParameter(format!(
            "discount {mu} must lie in (0, 1]"
        )));
    }
    Ok(())
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The discounted value table, iterated to a certified sup-norm error <= tol:
/// iteration stops once successive iterates differ by at most
/// `tol * mu / (1 - mu)`, which bounds the distance to the fixed point by
/// `tol` through the contraction factor `1 - mu`.
pub fn disc_value(spec: &GameSpec, mu: f64, bound: Bound, tol: f64) -> Result<ValueTable> {
    check_discount(mu)?;
    if !(tol > 0.0) {
        return Err(Error::BadParameter(format!("tolerance {tol} must be > 0")));
    }
    // +inf when mu == 1. Floored at machine epsilon: below one ulp the
    // iterates can no longer move, so the certified error is
    // max(tol, eps (1 - mu) / mu), far inside every pinned tolerance.
    let threshold = (tol * mu / (1.0 - mu)).max(f64::EPSILON);
    let mut w = vec![0.0; spec.num_states()];
    // First-step change is at most mu, later steps contract by 1 - mu, so the
    // estimate suffices in exact arithmetic. Near the threshold the deltas
    // are ulp-quantized and plateau for stretches, so pad the estimate
    // before declaring a numerical fault.
    let cap = if mu < 1.0 {
        let est = ((tol / (1.0 - mu)).ln() / (1.0 - mu).ln()).ceil().max(4.0);
        (est * 1.1) as u64 + 64
    } else {
        4
    };
    for _ in 0..cap {
        let next = disc_bellman_step(spec, mu, bound, &w);
        let delta = sup_diff(&next, &w);
        w = next;
        if delta <= threshold {
            return Ok(ValueTable {
                family: Family::Discounted { discount: mu },
                bound,
                values: w,
            });
        }
    }
    Err(Error::BadParameter(format!(
        "discounted value iteration failed to converge (mu = {mu}, tol = {tol})"
    )))
}

/// An h-step game with per-step weight `stage_weight * discount_per_step^t`
/// on the stage payoff and weight `discount_per_step^h` on `terminal` at the
/// final state. `discount_per_step = 1` gives the average-family shape.
#[derive(Clone, Debug)]
pub struct BolzaSpec {
    pub horizon: u64,
    pub stage_weight: f64,
    pub discount_per_step: f64,
    pub terminal: Vec<f64>,
}

impl BolzaSpec {
    /// The h-step average continuation: stage weight `1 / (n + h)` and
    /// terminal `n / (n + h) * table`. With the n-step value as `table`, its
    /// value is exactly the (n + h)-step value.
    pub fn average_step(n: u64, h: u64, table: &[f64]) -> BolzaSpec {
        let total = (n + h) as f64;
        BolzaSpec {
            horizon: h,
            stage_weight: 1.0 / total,
            discount_per_step: 1.0,
            terminal: table.iter().map(|v| v * n as f64 / total).collect(),
        }
    }

    /// The h-step discounted continuation: stage weight `mu`, per-step
    /// discount `1 - mu`, terminal `table`. With the mu-discounted value as
    /// `table`, its value is again the mu-discounted value.
    pub fn discounted_step(mu: f64, h: u64, table: &[f64]) -> BolzaSpec {
        BolzaSpec {
            horizon: h,
            stage_weight: mu,
            discount_per_step: 1.0 - mu,
            terminal: table.to_vec(),
        }
    }
}

fn check_bolza(spec: &GameSpec, b: &BolzaSpec) -> Result<()> {
    if b.horizon == 0 {
        return Err(Error::BadParameter("Bolza horizon must be positive".into()));
    }
    if !(b.stage_weight >= 0.0 && b.stage_weight.is_finite()) {
        return Err(Error::BadParameter(format!(
            "stage weight {} must be finite and >= 0",
            b.stage_weight
        )));
    }
    if !(b.discount_per_step > 0.0 && b.discount_per_step <= 1.0) {
        return Err(Error::BadParameter(format!(
            "per-step discount {} must lie in (0, 1]",
            b.discount_per_step
        )));
    }
    if b.terminal.len() != spec.num_states() {
        return Err(Error::BadParameter(format!(
            "terminal covers {} states, game has {}",
            b.terminal.len(),
            spec.num_states()
        )));
    }
    Ok(())
}

/// A Bolza value together with the announcing side's optimal per-step
/// policies (`policies[j]` plays at step `j`).
#[derive(Clone, Debug)]
pub struct BolzaPlan {
    pub values: Vec<f64>,
    pub policies: Vec<Policy>,
}

/// Backward induction for the Bolza game. The recursion is kept in
/// "current value" form `V_j = stage_weight * g + d * val V_{j+1}` with
/// `V_h = terminal`, which equals the weighted-sum payoff at `j = 0`.
pub fn bolza_plan(spec: &GameSpec, b: &BolzaSpec, bound: Bound) -> Result<BolzaPlan> {
    check_bolza(spec, b)?;
    let side = bound.announcer();
    let mut v = b.terminal.clone();
    let mut policies_rev: Vec<Policy> = Vec::with_capacity(b.horizon as usize);
    for _ in 0..b.horizon {
        let mut nv = vec![0.0; spec.num_states()];
        let mut choice = vec![0; spec.num_states()];
        for s in 0..spec.num_states() {
            let (val, act) = stage(spec, s, &v, bound);
            nv[s] = b.stage_weight * spec.payoff(s) + b.discount_per_step * val;
            choice[s] = act;
        }
        policies_rev.push(Policy::new(spec, side, choice)?);
        v = nv;
    }
    policies_rev.reverse();
    Ok(BolzaPlan {
        values: v,
        policies: policies_rev,
    })
}

/// The Bolza game value per start state.
pub fn bolza_value(spec: &GameSpec, b: &BolzaSpec, bound: Bound) -> Result<Vec<f64>> {
    Ok(bolza_plan(spec, b, bound)?.values)
}

/// The payoff a best response optimizes.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum PayoffSpec {
    Average { horizon: u64 },
    Discounted { discount: f64, tol: f64 },
}

/// Exact inner optimum against a published schedule, with a witness.
#[derive(Clone, Debug)]
pub struct BestResponseResult {
    pub payoff: PayoffSpec,
    /// The responder's optimal payoff from each start state (the published
    /// side's guarantee there).
    pub values: Vec<f64>,
    pub witness: SwitchSchedule,
    /// `trajectories[s]` is the play of published vs witness from state `s`,
    /// long enough to reproduce `values[s]` within the iteration tolerance.
    pub trajectories: Vec<Trajectory>,
}

fn check_schedule(spec: &GameSpec, sched: &SwitchSchedule) -> Result<()> {
    for (_, p) in sched.segments() {
        if p.choices().len() != spec.num_states() {
            return Err(Error::BadParameter(format!(
                "schedule policy covers {} states, game has {}",
                p.choices().len(),
                spec.num_states()
            )));
        }
        for s in 0..spec.num_states() {
            let count = spec.action_count(p.side(), s);
            if p.choose(s) >= count {
                return Err(Error::BadAction {
                    side: p.side(),
                    state: s,
                    action: p.choose(s),
                    count,
                });
            }
        }
    }
    Ok(())
}

/// One backward step for the responder: the published action is forced, the
/// responder optimizes the continuation. Returns value and responder action.
fn respond_stage(
    spec: &GameSpec,
    s: State,
    published: &Policy,
    cont: &[f64],
    responder: Side,
) -> (f64, Action) {
    match responder {
        Side::Min => {
            let a = published.choose(s);
            let mut best = f64::INFINITY;
            let mut best_b = 0;
            for b in 0..spec.action_count(Side::Min, s) {
                let v = cont[spec.next_unchecked(s, a, b)];
                if v < best {
                    best = v;
                    best_b = b;
                }
            }
            (best, best_b)
        }
        Side::Max => {
            let b = published.choose(s);
            let mut best = f64::NEG_INFINITY;
            let mut best_a = 0;
            for a in 0..spec.action_count(Side::Max, s) {
                let v = cont[spec.next_unchecked(s, a, b)];
                if v > best {
                    best = v;
                    best_a = a;
                }
            }
            (best, best_a)
        }
    }
}

fn simulate_pair(
    spec: &GameSpec,
    s0: State,
    published: &SwitchSchedule,
    witness: &SwitchSchedule,
    horizon: u64,
) -> Result<Trajectory> {
    if published.side() == Side::Max {
        simulate(spec, s0, published, witness, horizon)
    } else {
        simulate(spec, s0, witness, published, horizon)
    }
}

/// The exact best response to `published` under `payoff`.
///
/// Average payoffs run a time-expanded backward induction over the horizon.
/// Discounted payoffs solve the stationary tail by certified value iteration
/// (sup-norm error <= tol), then walk the switch steps backward, so the
/// returned values are the inner optimum up to `tol`.
pub fn best_response(
    spec: &GameSpec,
    published: &SwitchSchedule,
    payoff: PayoffSpec,
) -> Result<BestResponseResult> {
    check_schedule(spec, published)?;
    let responder = published.side().opponent();
    let ns = spec.num_states();
    match payoff {
        PayoffSpec::Average { horizon } => {
            if horizon == 0 {
                return Err(Error::BadParameter(
                    "average best response needs a positive horizon".into(),
                ));
            }
            let mut v = vec![0.0; ns];
            let mut policies_rev = Vec::with_capacity(horizon as usize);
            for t in (0..horizon).rev() {
                let pub_pol = published.policy_at(t);
                let mut nv = vec![0.0; ns];
                let mut choice = vec![0; ns];
                for s in 0..ns {
                    let (val, act) = respond_stage(spec, s, pub_pol, &v, responder);
                    nv[s] = spec.payoff(s) + val;
                    choice[s] = act;
                }
                policies_rev.push(Policy::new(spec, responder, choice)?);
                v = nv;
            }
            let values: Vec<f64> = v.iter().map(|x| x / horizon as f64).collect();
            let segments = policies_rev
                .into_iter()
                .rev()
                .enumerate()
                .map(|(t, p)| (t as u64, p))
                .collect();
            let witness = SwitchSchedule::new(segments)?;
            let trajectories = (0..ns)
                .map(|s0| simulate_pair(spec, s0, published, &witness, horizon))
                .collect::<Result<Vec<_>>>()?;
            Ok(BestResponseResult {
                payoff,
                values,
                witness,
                trajectories,
            })
        }
        PayoffSpec::Discounted { discount: mu, tol } => {
            check_discount(mu)?;
            if !(tol > 0.0) {
                return Err(Error::BadParameter(format!("tolerance {tol} must be > 0")));
            }
            // Stationary tail: fixed point of the forced Bellman operator.
            let tail_pol = published.tail();
            let forced_step = |w: &[f64]| -> Vec<f64> {
                let mut out = vec![0.0; ns];
                for (s, slot) in out.iter_mut().enumerate() {
                    let (val, _) = respond_stage(spec, s, tail_pol, w, responder);
                    *slot = mu * spec.payoff(s) + (1.0 - mu) * val;
                }
                out
            };
            let threshold = (tol * mu / (1.0 - mu)).max(f64::EPSILON);
            let cap = if mu < 1.0 {
                ((tol / (1.0 - mu)).ln() / (1.0 - mu).ln()).ceil().max(4.0) as u64 + 16
            } else {
                4
            };
            let mut w = vec![0.0; ns];
            let mut converged = false;
            for _ in 0..cap {
                let next = forced_step(&w);
                let delta = sup_diff(&next, &w);
                w = next;
                if delta <= threshold {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::BadParameter(format!(
                    "best-response tail iteration failed to converge (mu = {mu})"
                )));
            }
            let mut tail_choice = vec![0; ns];
            for (s, slot) in tail_choice.iter_mut().enumerate() {
                *slot = respond_stage(spec, s, tail_pol, &w, responder).1;
            }
            let tail_witness = Policy::new(spec, responder, tail_choice)?;

            // Backward through the published switch steps.
            let last_start = published.segments().last().unwrap().0;
            let mut v = w;
            let mut policies_rev = Vec::with_capacity(last_start as usize);
            for t in (0..last_start).rev() {
                let pub_pol = published.policy_at(t);
                let mut nv = vec![0.0; ns];
                let mut choice = vec![0; ns];
                for s in 0..ns {
                    let (val, act) = respond_stage(spec, s, pub_pol, &v, responder);
                    nv[s] = mu * spec.payoff(s) + (1.0 - mu) * val;
                    choice[s] = act;
                }
                policies_rev.push(Policy::new(spec, responder, choice)?);
                v = nv;
            }
            let mut segments: Vec<(u64, Policy)> = policies_rev
                .into_iter()
                .rev()
                .enumerate()
                .map(|(t, p)| (t as u64, p))
                .collect();
            segments.push((last_start, tail_witness));
            let witness = SwitchSchedule::new(segments)?;

            // Long enough that the discarded tail weighs at most tol.
            let tail_steps = if mu < 1.0 {
                (tol.ln() / (1.0 - mu).ln()).ceil().max(1.0) as u64
            } else {
                1
            };
            let horizon = last_start + tail_steps;
            let trajectories = (0..ns)
                .map(|s0| simulate_pair(spec, s0, published, &witness, horizon))
                .collect::<Result<Vec<_>>>()?;
            Ok(BestResponseResult {
                payoff,
                values: v,
                witness,
                trajectories,
            })
        }
    }
}

/// Best response in an h-step Bolza game: the published schedule is forced on
/// steps `0..h`, the responder optimizes, weights follow `b`.
pub fn best_response_bolza(
    spec: &GameSpec,
    published: &SwitchSchedule,
    b: &BolzaSpec,
) -> Result<Vec<f64>> {
    check_schedule(spec, published)?;
    check_bolza(spec, b)?;
    let responder = published.side().opponent();
    let mut v = b.terminal.clone();
    for t in (0..b.horizon).rev() {
        let pub_pol = published.policy_at(t);
        let mut nv = vec![0.0; spec.num_states()];
        for s in 0..spec.num_states() {
            let (val, _) = respond_stage(spec, s, pub_pol, &v, responder);
            nv[s] = b.stage_weight * spec.payoff(s) + b.discount_per_step * val;
        }
        v = nv;
    }
    Ok(v)
}

/// `sup_s (upper - lower)`; never negative by the minimax inequality (up to
/// twice the iteration tolerance for discounted tables). Rejects tables from
/// different family members or with swapped bounds.
pub fn saddle_gap(lower: &ValueTable, upper: &ValueTable) -> Result<f64> {
    if lower.bound != Bound::Lower || upper.bound != Bound::Upper {
        return Err(Error::TableMismatch(format!(
            "expected (lower, upper), got ({}, {})",
            lower.bound, upper.bound
        )));
    }
    if lower.family != upper.family {
        return Err(Error::TableMismatch(format!(
            "families differ: {:?} vs {:?}",
            lower.family, upper.family
        )));
    }
    if lower.values.len() != upper.values.len() {
        return Err(Error::TableMismatch(format!(
            "state counts differ: {} vs {}",
            lower.values.len(),
            upper.values.len()
        )));
    }
    Ok(lower
        .values
        .iter()
        .zip(&upper.values)
        .map(|(l, u)| u - l)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// A sparse grid of value tables for one family and one bound, keyed by the
/// family parameter (horizon as f64, or discount).
#[derive(Clone, Debug)]
pub struct TabulatedFamily {
    kind: FamilyKind,
    bound: Bound,
    entries: Vec<(f64, Vec<f64>)>,
}

impl TabulatedFamily {
    /// Discounted tables at the given discounts, each iterated to `tol`.
    pub fn discounted(spec: &GameSpec, mus: &[f64], bound: Bound, tol: f64) -> Result<Self> {
        let mut entries = Vec::with_capacity(mus.len());
        for &mu in mus {
            entries.push((mu, disc_value(spec, mu, bound, tol)?.values));
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        entries.dedup_by(|a, b| a.0 == b.0);
        Ok(TabulatedFamily {
            kind: FamilyKind::Discounted,
            bound,
            entries,
        })
    }

    /// Average tables drawn from a dense family at the grid horizons.
    pub fn from_avg_family(fam: &AvgValueFamily, grid: &[u64]) -> Result<Self> {
        let mut entries = Vec::with_capacity(grid.len());
        for &n in grid {
            entries.push((n as f64, fam.values(n)?));
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        entries.dedup_by(|a, b| a.0 == b.0);
        Ok(TabulatedFamily {
            kind: FamilyKind::Average,
            bound: fam.bound(),
            entries,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn bound(&self) -> Bound {
        self.bound
    }

    pub fn entries(&self) -> &[(f64, Vec<f64>)] {
        &self.entries
    }

    pub fn params(&self) -> Vec<f64> {
        self.entries.iter().map(|(p, _)| *p).collect()
    }

    /// The table at `param`, matched within relative 1e-9.
    pub fn lookup(&self, param: f64) -> Result<&[f64]> {
        let tol = 1e-9 * param.abs().max(1.0);
        self.entries
            .iter()
            .find(|(p, _)| (p - param).abs() <= tol)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| Error::MissingTable(format!("{} parameter {param}", self.kind)))
    }
}
