//! Evaluation kernels: exact Cesàro and Abel means of embedded plays, their
//! discrete counterparts, and the uniform bounds that tie the four together.
//!
//! Embedded payoffs are piecewise constant on unit-aligned segments, so every
//! integral here is an exact finite sum; the only approximation anywhere is
//! the Abel tail truncated at `exp(-lambda t*) <= tail_tol`, and that error
//! budget is carried into every pass/fail slack.

use crate::error::{Error, Result};
use crate::game::{embed, EmbeddedProcess, Trajectory};
use crate::value::FamilyKind;

/// Default certified truncation for Abel-type tails.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// A payoff-weighting kernel: time density `rho`, horizon map, and survival
/// factor after an initial window of length `h`.
///
/// - average, parameter `gamma = T`: `rho = 1/T` on `[0, T]` (the boundary
///   point belongs to the closed side), 0 after; window shifts the horizon to
///   `T + h` and survives with weight `T / (T + h)`.
/// - discounted, parameter `gamma = lambda`: `rho(t) = lambda exp(-lambda t)`;
///   the horizon parameter is unchanged and the window survives with weight
///   `exp(-lambda h)`.
#[derive(Copy, Clone, Debug)]
pub struct KernelFamily {
    pub kind: FamilyKind,
    pub gamma: f64,
}

impl KernelFamily {
    pub fn new(kind: FamilyKind, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::BadParameter(format!(
                "kernel parameter {gamma} must be positive and finite"
            )));
        }
        Ok(KernelFamily { kind, gamma })
    }

    pub fn density(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        match self.kind {
            FamilyKind::Average => {
                if t <= self.gamma {
                    1.0 / self.gamma
                } else {
                    0.0
                }
            }
            FamilyKind::Discounted => self.gamma * (-self.gamma * t).exp(),
        }
    }

    /// The parameter of the kernel that continues after a window of length `h`.
    pub fn horizon_shift(&self, h: f64) -> f64 {
        match self.kind {
            FamilyKind::Average => self.gamma + h,
            FamilyKind::Discounted => self.gamma,
        }
    }

    /// Weight surviving past a window of length `h`; strictly between
    /// `max(0, 1 - h rho(0))` and 1 for `h > 0`.
    pub fn survival(&self, h: f64) -> f64 {
        match self.kind {
            FamilyKind::Average => self.gamma / (self.gamma + h),
            FamilyKind::Discounted => (-self.gamma * h).exp(),
        }
    }

    /// `integral of rho over [0, x]`; reaches 1 (exactly for the average kind).
    pub fn mass_up_to(&self, x: f64) -> f64 {
        match self.kind {
            FamilyKind::Average => (x.min(self.gamma) / self.gamma).min(1.0),
            FamilyKind::Discounted => -(-self.gamma * x).exp_m1(),
        }
    }
}

/// Walks the unit-aligned constant-payoff segments of `z` across `[a, b)` and
/// feeds each `(t0, t1, payoff)` to `f`. Exact: segment ends are computed from
/// the integer step index, never accumulated.
fn walk_segments(
    z: &EmbeddedProcess,
    a: f64,
    b: f64,
    mut f: impl FnMut(f64, f64, f64),
) -> Result<()> {
    if !(a >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::BadParameter(format!(
            "integration range [{a}, {b}) must be finite with a >= 0"
        )));
    }
    if b <= a {
        return Ok(());
    }
    let s = z.offset();
    let mut k = (a + s).floor() as usize;
    let mut t0 = a;
    while t0 < b {
        if k >= z.base().len() {
            return Err(Error::TrajectoryTooShort {
                have: z.base().len(),
                need: k + 1,
            });
        }
        let t1 = ((k + 1) as f64 - s).min(b);
        f(t0, t1, z.base().payoff(k));
        t0 = t1;
        k += 1;
    }
    Ok(())
}

/// `(1/T) integral of g(z(t)) over [0, T]`, exact.
pub fn cesaro(z: &EmbeddedProcess, t_end: f64) -> Result<f64> {
    if !(t_end > 0.0) {
        return Err(Error::BadParameter(format!(
            "Cesàro horizon {t_end} must be positive"
        )));
    }
    Ok(integrate_payoff(z, 0.0, t_end)? / t_end)
}

/// `lambda integral of exp(-lambda t) g(z(t)) over [0, inf)`, truncated at
/// `t* = -ln(tail_tol)/lambda`. Since payoffs lie in [0, 1], the discarded
/// tail is in `[0, tail_tol]`.
pub fn abel(z: &EmbeddedProcess, lambda: f64, tail_tol: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::BadParameter(format!(
            "Abel rate {lambda} must be positive and finite"
        )));
    }
    check_tail_tol(tail_tol)?;
    let t_star = -tail_tol.ln() / lambda;
    abel_partial(z, lambda, t_star)
}

/// `lambda integral of exp(-lambda t) g(z(t)) over [0, h]`, exact.
pub fn abel_partial(z: &EmbeddedProcess, lambda: f64, h: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::BadParameter(format!(
            "Abel rate {lambda} must be positive and finite"
        )));
    }
    let mut acc = 0.0;
    walk_segments(z, 0.0, h, |t0, t1, g| {
        acc += g * ((-lambda * t0).exp() - (-lambda * t1).exp());
    })?;
    Ok(acc)
}

/// `integral of g(z(t)) over [a, b)`, exact.
pub fn integrate_payoff(z: &EmbeddedProcess, a: f64, b: f64) -> Result<f64> {
    let mut acc = 0.0;
    walk_segments(z, a, b, |t0, t1, g| acc += g * (t1 - t0))?;
    Ok(acc)
}

/// `integral of exp(-rate (t - a)) g(z(t)) over [a, b)`, exact.
pub fn integrate_payoff_exp(z: &EmbeddedProcess, a: f64, b: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::BadParameter(format!(
            "decay rate {rate} must be positive and finite"
        )));
    }
    let mut acc = 0.0;
    walk_segments(z, a, b, |t0, t1, g| {
        acc += g * ((-rate * (t0 - a)).exp() - (-rate * (t1 - a)).exp()) / rate;
    })?;
    Ok(acc)
}

fn check_tail_tol(tail_tol: f64) -> Result<()> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::BadParameter(format!(
            "tail tolerance {tail_tol} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// States a trajectory must hold so `cesaro(embed(y, s), t_end)` is defined.
pub fn cesaro_states_needed(t_end: f64, offset: f64) -> usize {
    (t_end + offset).ceil().max(1.0) as usize
}

/// States a trajectory must hold so `abel(embed(y, s), lambda, tail_tol)` is
/// defined.
pub fn abel_states_needed(lambda: f64, tail_tol: f64, offset: f64) -> usize {
    cesaro_states_needed(-tail_tol.ln() / lambda, offset)
}

/// Steps needed so the discrete discounted tail weighs at most `tail_tol`.
pub fn disc_steps_needed(mu: f64, tail_tol: f64) -> usize {
    if mu >= 1.0 {
        return 1;
    }
    (tail_tol.ln() / (1.0 - mu).ln()).ceil().max(1.0) as usize
}

/// `(1/n) sum of the first n stage payoffs`, exact.
pub fn discrete_avg(y: &Trajectory, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::BadParameter("average length must be positive".into()));
    }
    if y.len() < n as usize {
        return Err(Error::TrajectoryTooShort {
            have: y.len(),
            need: n as usize,
        });
    }
    Ok(y.payoffs()[..n as usize].iter().sum::<f64>() / n as f64)
}

/// `mu sum of (1 - mu)^t g(y(t))`, truncated once the remaining weight
/// `(1 - mu)^N` drops to `tail_tol`; the discarded tail is in `[0, tail_tol]`.
pub fn discrete_disc(y: &Trajectory, mu: f64, tail_tol: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::BadParameter(format!(
            "discount {mu} must lie in (0, 1]"
        )));
    }
    check_tail_tol(tail_tol)?;
    let n = disc_steps_needed(mu, tail_tol);
    if y.len() < n {
        return Err(Error::TrajectoryTooShort {
            have: y.len(),
            need: n,
        });
    }
    let mut acc = 0.0;
    let mut weight = mu;
    for t in 0..n {
        acc += weight * y.payoff(t);
        weight *= 1.0 - mu;
    }
    Ok(acc)
}

/// The four means of one play at matched parameters: continuous Cesàro and
/// Abel of the phase-0 embedding next to the discrete n-step average and
/// mu-discounted sum with `mu = 1 - exp(-lambda)`, i.e. `lambda = -ln(1-mu)`.
#[derive(Copy, Clone, Debug)]
pub struct MeanReport {
    pub cesaro: f64,
    pub abel: f64,
    pub discrete_avg: f64,
    pub discrete_disc: f64,
}

pub fn discrete_means(y: &Trajectory, n: u64, mu: f64, tail_tol: f64) -> Result<MeanReport> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::BadParameter(format!(
            "discount {mu} must lie in (0, 1) to match an Abel rate"
        )));
    }
    let lambda = -(1.0 - mu).ln();
    let z = embed(y, 0.0)?;
    Ok(MeanReport {
        cesaro: cesaro(&z, n as f64)?,
        abel: abel(&z, lambda, tail_tol)?,
        discrete_avg: discrete_avg(y, n)?,
        discrete_disc: discrete_disc(y, mu, tail_tol)?,
    })
}

/// One verified inequality: `lhs <= bound` up to an explicit numerical slack
/// (truncation budget plus rounding). The margin says how far from tight.
#[derive(Copy, Clone, Debug)]
pub struct BoundCheck {
    pub lhs: f64,
    pub bound: f64,
    pub slack: f64,
}

impl BoundCheck {
    pub fn margin(&self) -> f64 {
        self.bound - self.lhs
    }

    pub fn pass(&self) -> bool {
        self.lhs <= self.bound + self.slack
    }
}

/// Shift robustness of the two continuous means: for `s, r` in [0, 1],
/// `|abel(z) - abel(z_s)| <= 2 lambda` and
/// `|cesaro(z, T + r) - cesaro(z_s, T)| <= 4 / T`.
#[derive(Copy, Clone, Debug)]
pub struct ShiftBoundReport {
    pub abel: BoundCheck,
    pub cesaro: BoundCheck,
}

impl ShiftBoundReport {
    pub fn pass(&self) -> bool {
        self.abel.pass() && self.cesaro.pass()
    }
}

pub fn shift_bound_check(
    z: &EmbeddedProcess,
    t_end: f64,
    lambda: f64,
    s: f64,
    r: f64,
    tail_tol: f64,
) -> Result<ShiftBoundReport> {
    if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&r) {
        return Err(Error::BadParameter(format!(
            "shifts s = {s}, r = {r} must lie in [0, 1]"
        )));
    }
    if !(t_end > 0.0) {
        return Err(Error::BadParameter(format!(
            "horizon {t_end} must be positive"
        )));
    }
    let zs = z.shift(s)?;
    let abel_lhs = (abel(z, lambda, tail_tol)? - abel(&zs, lambda, tail_tol)?).abs();
    let ces_lhs = (cesaro(z, t_end + r)? - cesaro(&zs, t_end)?).abs();
    Ok(ShiftBoundReport {
        abel: BoundCheck {
            lhs: abel_lhs,
            bound: 2.0 * lambda,
            slack: 2.0 * tail_tol + 1e-12,
        },
        cesaro: BoundCheck {
            lhs: ces_lhs,
            bound: 4.0 / t_end,
            slack: 1e-12,
        },
    })
}

/// Consistency of the discrete means with their embedded evaluations at any
/// phase `s`: `|avg(floor(T) + 1) - cesaro(z[y,s], T)| <= 4 / T` and
/// `|disc(1 - exp(-lambda)) - abel(z[y,s], lambda)| <= 2 lambda`.
#[derive(Copy, Clone, Debug)]
pub struct EmbeddingReport {
    pub average: BoundCheck,
    pub discounted: BoundCheck,
}

impl EmbeddingReport {
    pub fn pass(&self) -> bool {
        self.average.pass() && self.discounted.pass()
    }
}

pub fn embedding_consistency(
    y: &Trajectory,
    s: f64,
    t_end: f64,
    lambda: f64,
    tail_tol: f64,
) -> Result<EmbeddingReport> {
    if !(t_end > 0.0) {
        return Err(Error::BadParameter(format!(
            "horizon {t_end} must be positive"
        )));
    }
    let z = embed(y, s)?;
    let n = t_end.floor() as u64 + 1;
    let avg_lhs = (discrete_avg(y, n)? - cesaro(&z, t_end)?).abs();
    let mu = -(-lambda).exp_m1();
    let disc_lhs = (discrete_disc(y, mu, tail_tol)? - abel(&z, lambda, tail_tol)?).abs();
    Ok(EmbeddingReport {
        average: BoundCheck {
            lhs: avg_lhs,
            bound: 4.0 / t_end,
            slack: 1e-12,
        },
        discounted: BoundCheck {
            lhs: disc_lhs,
            bound: 2.0 * lambda,
            slack: 2.0 * tail_tol + 1e-12,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::game::{random_trajectory, Trajectory};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn forced_cycle(len: usize) -> Trajectory {
        let g = catalog::cycle01();
        let mut states = vec![0usize];
        for t in 0..len - 1 {
            states.push(1 - states[t]);
        }
        Trajectory::from_states(&g, states).unwrap()
    }

    #[test]
    fn cesaro_at_integer_horizons_is_the_discrete_average() {
        let y = forced_cycle(64);
        let z = embed(&y, 0.0).unwrap();
        for n in [1u64, 2, 5, 32, 63] {
            let c = cesaro(&z, n as f64).unwrap();
            let d = discrete_avg(&y, n).unwrap();
            assert!((c - d).abs() <= 1e-13, "n = {n}: {c} vs {d}");
        }
    }

    #[test]
    fn abel_matches_the_discrete_discounted_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in [catalog::ergodic5(), catalog::matching()] {
            for mu in [0.5, 0.2, 0.05] {
                let lambda = -(1.0f64 - mu).ln();
                let need = abel_states_needed(lambda, DEFAULT_TAIL_TOL, 0.0) + 1;
                let y = random_trajectory(&g, 0, need as u64, &mut rng).unwrap();
                let z = embed(&y, 0.0).unwrap();
                let a = abel(&z, lambda, DEFAULT_TAIL_TOL).unwrap();
                let d = discrete_disc(&y, mu, DEFAULT_TAIL_TOL).unwrap();
                assert!(
                    (a - d).abs() <= 3.0 * DEFAULT_TAIL_TOL,
                    "{} mu = {mu}: {a} vs {d}",
                    g.name()
                );
            }
        }
    }

    #[test]
    fn abel_on_constant_payoff_is_the_payoff() {
        let g = catalog::const_game(0.7).unwrap();
        let y = Trajectory::from_states(&g, vec![0; abel_states_needed(0.1, 1e-12, 0.0) + 1])
            .unwrap();
        let z = embed(&y, 0.0).unwrap();
        let a = abel(&z, 0.1, 1e-12).unwrap();
        assert!((a - 0.7).abs() <= 0.7 * 1e-12 + 1e-13);
    }

    #[test]
    fn window_decompositions_hold_exactly() {
        // Average: (T+h) cesaro(z, T+h) splits into the window integral plus
        // T cesaro(z_h, T). Discounted: abel(z) = abel_partial(z, h) +
        // exp(-lambda h) abel(z_h).
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = catalog::ergodic5();
        let y = random_trajectory(&g, 2, 4000, &mut rng).unwrap();
        let z = embed(&y, 0.375).unwrap();
        for h in [0.5, 1.0, 2.3] {
            let t_end = 31.0;
            let zh = z.shift(h).unwrap();
            let lhs = cesaro(&z, t_end + h).unwrap();
            let window = integrate_payoff(&z, 0.0, h).unwrap() / (t_end + h);
            let rhs = window + t_end / (t_end + h) * cesaro(&zh, t_end).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12, "average h = {h}");

            let lambda = 0.05;
            let full = abel(&z, lambda, 1e-13).unwrap();
            let head = abel_partial(&z, lambda, h).unwrap();
            let tail = (-lambda * h).exp() * abel(&zh, lambda, 1e-13).unwrap();
            assert!((full - (head + tail)).abs() <= 3e-13, "discounted h = {h}");
        }
    }

    #[test]
    fn kernel_identities() {
        // gamma * h stays well under exp-underflow so the strict survival
        // pinch is meaningful in floating point.
        for kind in [FamilyKind::Average, FamilyKind::Discounted] {
            for gamma in [0.5, 1.0, 10.0, 64.0] {
                let k = KernelFamily::new(kind, gamma).unwrap();
                // Total mass reaches 1 (average: exactly at gamma).
                assert!((k.mass_up_to(gamma + 30.0 / gamma) - 1.0).abs() <= 1e-12);
                for h in [0.25, 1.0, 7.5] {
                    let sigma = k.survival(h);
                    // Survival pinch: max(0, 1 - h rho(0)) < sigma < 1.
                    assert!(sigma < 1.0, "{kind} gamma = {gamma} h = {h}");
                    assert!(
                        sigma > (1.0 - h * k.density(0.0)).max(0.0),
                        "{kind} gamma = {gamma} h = {h}"
                    );
                    // Window shift: rho_{gamma_h}(h + t) = sigma rho_gamma(t).
                    let shifted = KernelFamily::new(kind, k.horizon_shift(h)).unwrap();
                    for t in [0.0, 0.3, gamma / 2.0, gamma, gamma + 0.7] {
                        let lhs = shifted.density(h + t);
                        let rhs = sigma * k.density(t);
                        assert!(
                            (lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()),
                            "{kind} gamma = {gamma} h = {h} t = {t}: {lhs} vs {rhs}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn shift_bounds_hold_on_sampled_plays() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for g in catalog::all() {
            let need = abel_states_needed(0.1, DEFAULT_TAIL_TOL, 1.0) + 16;
            let y = random_trajectory(&g, 0, need as u64, &mut rng).unwrap();
            let z = embed(&y, 0.5).unwrap();
            for s in [0.0, 0.5, 1.0] {
                for r in [0.0, 0.25, 1.0] {
                    let rep = shift_bound_check(&z, 10.0, 0.1, s, r, DEFAULT_TAIL_TOL).unwrap();
                    assert!(rep.pass(), "{} s = {s} r = {r}", g.name());
                }
            }
        }
    }

    #[test]
    fn shift_bound_is_zero_on_constant_payoff() {
        let g = catalog::const_game(0.4).unwrap();
        let need = abel_states_needed(0.2, DEFAULT_TAIL_TOL, 1.0) + 4;
        let y = Trajectory::from_states(&g, vec![0; need]).unwrap();
        let z = embed(&y, 0.0).unwrap();
        let rep = shift_bound_check(&z, 5.0, 0.2, 0.75, 0.5, DEFAULT_TAIL_TOL).unwrap();
        assert!(rep.abel.lhs <= 1e-12);
        assert!(rep.cesaro.lhs <= 1e-12);
        assert!(rep.abel.margin() > 0.0 && rep.cesaro.margin() > 0.0);
    }

    #[test]
    fn embedding_consistency_on_cycle() {
        let y = forced_cycle(abel_states_needed(0.05, DEFAULT_TAIL_TOL, 1.0) + 4);
        let rep = embedding_consistency(&y, 0.25, 10.5, 0.05, DEFAULT_TAIL_TOL).unwrap();
        assert!(rep.pass());
        assert!(rep.average.bound == 4.0 / 10.5);
        assert!(rep.discounted.bound == 0.1);
    }

    #[test]
    fn discrete_means_on_the_alternating_play() {
        let y = forced_cycle(disc_steps_needed(0.5, DEFAULT_TAIL_TOL) + 4);
        let rep = discrete_means(&y, 4, 0.5, DEFAULT_TAIL_TOL).unwrap();
        assert!((rep.discrete_avg - 0.5).abs() <= 1e-15);
        let closed = (1.0 - 0.5) / (2.0 - 0.5);
        assert!((rep.discrete_disc - closed).abs() <= DEFAULT_TAIL_TOL + 1e-13);
        // Matched parameters agree across the embedding.
        assert!((rep.cesaro - rep.discrete_avg).abs() <= 1e-13);
        assert!((rep.abel - rep.discrete_disc).abs() <= 3.0 * DEFAULT_TAIL_TOL);
    }

    #[test]
    fn integrators_reject_bad_input() {
        let y = forced_cycle(8);
        let z = embed(&y, 0.0).unwrap();
        assert!(cesaro(&z, 0.0).is_err());
        assert!(abel(&z, -0.1, 1e-12).is_err());
        assert!(abel(&z, 0.1, 0.0).is_err());
        assert!(matches!(
            cesaro(&z, 9.5),
            Err(Error::TrajectoryTooShort { .. })
        ));
        assert!(discrete_avg(&y, 9).is_err());
        assert!(discrete_disc(&y, 0.5, 1e-30).is_err());
        assert!(shift_bound_check(&z, 4.0, 0.1, 1.5, 0.0, 1e-12).is_err());
    }

    #[test]
    fn states_needed_helpers_are_tight() {
        let y = forced_cycle(10);
        let z = embed(&y, 0.25).unwrap();
        // 9.75 + 0.25 = 10 states exactly suffice.
        assert_eq!(cesaro_states_needed(9.75, 0.25), 10);
        assert!(cesaro(&z, 9.75).is_ok());
        assert_eq!(cesaro_states_needed(9.8, 0.25), 11);
        assert!(cesaro(&z, 9.8).is_err());
        let need = abel_states_needed(0.5, 1e-12, 0.0);
        assert_eq!(need, ((1e-12f64).ln() / -0.5).ceil() as usize);
    }
}
