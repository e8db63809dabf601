//! Scalar sanity oracle: Cesàro and Abel means of bounded sequences and of
//! step functions on the half-line, independent of the game machinery.
//!
//! Eventually-periodic instances carry closed-form reference values and a
//! hand-derivable Hardy constant; arbitrary generators only get bound checks.

use crate::error::{Error, Result};

/// A bounded real sequence, indexed from 1, with declared bounds `[lo, hi]`.
pub struct BoundedSequence {
    lo: f64,
    hi: f64,
    gen: Box<dyn Fn(u64) -> f64 + Send + Sync>,
}

impl BoundedSequence {
    pub fn new(
        lo: f64,
        hi: f64,
        gen: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::BadParameter(format!(
                "sequence bounds [{lo}, {hi}] must be finite and ordered"
            )));
        }
        Ok(BoundedSequence {
            lo,
            hi,
            gen: Box::new(gen),
        })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(c, c, move |_| c)
    }

    /// 0, 1, 0, 1, ... (first term 0).
    pub fn alternating01() -> Self {
        Self::new(0.0, 1.0, |i| ((i + 1) % 2) as f64).unwrap()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// The i-th term, i >= 1. Panics if the generator leaves the declared
    /// bounds: every certificate downstream assumes them.
    pub fn term(&self, i: u64) -> f64 {
        assert!(i >= 1, "sequence terms are indexed from 1");
        let a = (self.gen)(i);
        assert!(
            a >= self.lo && a <= self.hi,
            "term {i} = {a} escapes the declared bounds [{}, {}]",
            self.lo,
            self.hi
        );
        a
    }
}

/// `(1/n) (a_1 + ... + a_n)`, exact.
pub fn cesaro_seq(a: &BoundedSequence, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::BadParameter("Cesàro length must be positive".into()));
    }
    Ok((1..=n).map(|i| a.term(i)).sum::<f64>() / n as f64)
}

/// `lambda sum of (1-lambda)^{i-1} a_i`, truncated once the remaining weight
/// drops to `tail_tol` and completed with the midpoint of the bounds, so the
/// result is within `tail_tol (hi - lo) / 2` of the full series.
pub fn abel_seq(a: &BoundedSequence, lambda: f64, tail_tol: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::BadParameter(format!(
            "Abel weight {lambda} must lie in (0, 1)"
        )));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::BadParameter(format!(
            "tail tolerance {tail_tol} must lie in (0, 1)"
        )));
    }
    let n = (tail_tol.ln() / (1.0 - lambda).ln()).ceil().max(1.0) as u64;
    let mut acc = 0.0;
    let mut weight = lambda;
    for i in 1..=n {
        acc += weight * a.term(i);
        weight *= 1.0 - lambda;
    }
    // weight / lambda = (1 - lambda)^n is what the truncated tail weighs.
    Ok(acc + weight / lambda * (a.lo + a.hi) / 2.0)
}

/// A sequence that repeats a finite cycle after a finite preamble. This is
/// the only shape with closed-form reference values.
#[derive(Clone, Debug)]
pub struct EventuallyPeriodic {
    preamble: Vec<f64>,
    cycle: Vec<f64>,
}

impl EventuallyPeriodic {
    pub fn new(preamble: Vec<f64>, cycle: Vec<f64>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::BadParameter("cycle must be nonempty".into()));
        }
        if preamble.iter().chain(&cycle).any(|v| !v.is_finite()) {
            return Err(Error::BadParameter("terms must be finite".into()));
        }
        Ok(EventuallyPeriodic { preamble, cycle })
    }

    pub fn bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in self.preamble.iter().chain(&self.cycle) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    pub fn cycle_mean(&self) -> f64 {
        self.cycle.iter().sum::<f64>() / self.cycle.len() as f64
    }

    pub fn sequence(&self) -> BoundedSequence {
        let (lo, hi) = self.bounds();
        let preamble = self.preamble.clone();
        let cycle = self.cycle.clone();
        BoundedSequence::new(lo, hi, move |i| {
            let t = (i - 1) as usize;
            if t < preamble.len() {
                preamble[t]
            } else {
                cycle[(t - preamble.len()) % cycle.len()]
            }
        })
        .unwrap()
    }

    /// The step function taking the same values on unit intervals.
    pub fn step_function(&self) -> StepFunction {
        let unit = |vals: &[f64]| vals.iter().map(|&v| (1.0, v)).collect();
        StepFunction::new(unit(&self.preamble), unit(&self.cycle)).unwrap()
    }

    /// A constant C with `|cesaro_seq(n) - abel_seq(1/n)| <= C/n` for all n:
    /// both means sit within `E/n` resp. `E lambda` of the cycle mean, where
    /// E bounds every partial sum of the centered sequence.
    pub fn hardy_constant(&self) -> f64 {
        let (lo, hi) = self.bounds();
        let mean = self.cycle_mean();
        let mut dev: f64 = 0.0;
        let mut partial = 0.0;
        for &v in &self.cycle {
            partial += v - mean;
            dev = dev.max(partial.abs());
        }
        2.0 * (self.preamble.len() as f64 * (hi - lo) + dev)
    }
}

/// A piecewise-constant payoff on the half-line: finitely many explicit
/// pieces, then a cycle of pieces repeating forever. Pieces are
/// `(length, value)` with positive length.
#[derive(Clone, Debug)]
pub struct StepFunction {
    preamble: Vec<(f64, f64)>,
    cycle: Vec<(f64, f64)>,
    preamble_len: f64,
    cycle_len: f64,
}

impl StepFunction {
    pub fn new(preamble: Vec<(f64, f64)>, cycle: Vec<(f64, f64)>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::BadParameter("cycle must be nonempty".into()));
        }
        for &(len, value) in preamble.iter().chain(&cycle) {
            if !(len > 0.0 && len.is_finite() && value.is_finite()) {
                return Err(Error::BadParameter(format!(
                    "piece ({len}, {value}) must have positive finite length and finite value"
                )));
            }
        }
        let preamble_len = preamble.iter().map(|p| p.0).sum();
        let cycle_len = cycle.iter().map(|p| p.0).sum();
        Ok(StepFunction {
            preamble,
            cycle,
            preamble_len,
            cycle_len,
        })
    }

    pub fn value_at(&self, t: f64) -> f64 {
        assert!(t >= 0.0 && t.is_finite());
        let mut u = t;
        for &(len, value) in &self.preamble {
            if u < len {
                return value;
            }
            u -= len;
        }
        let mut u = (t - self.preamble_len) % self.cycle_len;
        for &(len, value) in &self.cycle {
            if u < len {
                return value;
            }
            u -= len;
        }
        self.cycle.last().unwrap().1
    }
}

/// `(1/T) integral of g over [0, T]`, exact: whole cycles in bulk, the two
/// ragged ends piece by piece.
pub fn cesaro_fun(g: &StepFunction, t_end: f64) -> Result<f64> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::BadParameter(format!(
            "Cesàro horizon {t_end} must be positive and finite"
        )));
    }
    let mut acc = 0.0;
    let mut t = 0.0;
    for &(len, value) in &g.preamble {
        if t >= t_end {
            break;
        }
        acc += value * (len.min(t_end - t));
        t += len;
    }
    if t_end > g.preamble_len {
        let rest = t_end - g.preamble_len;
        let whole = (rest / g.cycle_len).floor();
        let cycle_integral: f64 = g.cycle.iter().map(|&(len, v)| len * v).sum();
        acc += whole * cycle_integral;
        let mut u = rest - whole * g.cycle_len;
        for &(len, value) in &g.cycle {
            if u <= 0.0 {
                break;
            }
            acc += value * len.min(u);
            u -= len;
        }
    }
    Ok(acc / t_end)
}

/// `lambda integral of exp(-lambda t) g over [0, inf)`. The periodic part
/// sums as a geometric series, so the value is exact; `tail_tol` is accepted
/// for interface parity with the sequence evaluator, which must truncate.
pub fn abel_fun(g: &StepFunction, lambda: f64, tail_tol: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::BadParameter(format!(
            "Abel rate {lambda} must be positive and finite"
        )));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::BadParameter(format!(
            "tail tolerance {tail_tol} must lie in (0, 1)"
        )));
    }
    let mut acc = 0.0;
    let mut t = 0.0;
    for &(len, value) in &g.preamble {
        acc += value * ((-lambda * t).exp() - (-lambda * (t + len)).exp());
        t += len;
    }
    let mut one_cycle = 0.0;
    let mut u = 0.0;
    for &(len, value) in &g.cycle {
        one_cycle += value * ((-lambda * u).exp() - (-lambda * (u + len)).exp());
        u += len;
    }
    // Repeats at t, t + L, t + 2L, ... with ratio exp(-lambda L).
    acc += (-lambda * t).exp() * one_cycle / -(-lambda * g.cycle_len).exp_m1();
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::embed;
    use crate::kernel;
    use crate::{catalog, game::Trajectory};

    const TAIL: f64 = 1e-12;

    #[test]
    fn cesaro_seq_closed_forms() {
        let c = BoundedSequence::constant(0.3).unwrap();
        assert_eq!(cesaro_seq(&c, 7).unwrap(), 0.3);

        let alt = BoundedSequence::alternating01();
        assert_eq!(cesaro_seq(&alt, 4).unwrap(), 0.5);
        assert_eq!(cesaro_seq(&alt, 5).unwrap(), 0.4);

        let head = EventuallyPeriodic::new(vec![1.0, 1.0, 1.0], vec![0.0]).unwrap();
        assert_eq!(cesaro_seq(&head.sequence(), 6).unwrap(), 0.5);
    }

    #[test]
    fn abel_seq_closed_forms() {
        let c = BoundedSequence::constant(0.3).unwrap();
        // Truncation plus midpoint completion is exact on constants.
        for lambda in [0.9, 0.5, 0.01] {
            assert!((abel_seq(&c, lambda, TAIL).unwrap() - 0.3).abs() <= 1e-14);
        }

        let alt = BoundedSequence::alternating01();
        for lambda in [0.5, 0.1, 0.01, 1e-3] {
            let v = abel_seq(&alt, lambda, TAIL).unwrap();
            let closed = (1.0 - lambda) / (2.0 - lambda);
            assert!(
                (v - closed).abs() <= TAIL + 1e-12,
                "lambda = {lambda}: {v} vs {closed}"
            );
        }

        // Near lambda = 1 all weight sits on the first term.
        let near_one = abel_seq(&alt, 1.0 - 1e-9, TAIL).unwrap();
        assert!(near_one.abs() <= 1e-8);
    }

    #[test]
    fn abel_seq_rejects_bad_parameters() {
        let alt = BoundedSequence::alternating01();
        assert!(abel_seq(&alt, 0.0, TAIL).is_err());
        assert!(abel_seq(&alt, 1.0, TAIL).is_err());
        assert!(abel_seq(&alt, 0.5, 0.0).is_err());
        assert!(cesaro_seq(&alt, 0).is_err());
    }

    #[test]
    #[should_panic(expected = "escapes the declared bounds")]
    fn generator_outside_bounds_panics() {
        let bad = BoundedSequence::new(0.0, 1.0, |i| i as f64).unwrap();
        let _ = cesaro_seq(&bad, 3);
    }

    #[test]
    fn cesaro_fun_closed_forms() {
        // Indicator of [0, 1) with period 2.
        let ind = StepFunction::new(vec![], vec![(1.0, 1.0), (1.0, 0.0)]).unwrap();
        for k in [1u32, 2, 5, 40] {
            let t = 2.0 * k as f64;
            assert!((cesaro_fun(&ind, t).unwrap() - 0.5).abs() <= 1e-14);
        }
        assert!((cesaro_fun(&ind, 3.0).unwrap() - 2.0 / 3.0).abs() <= 1e-14);

        let frac = StepFunction::new(vec![], vec![(0.5, 1.0), (1.5, 0.0)]).unwrap();
        assert!((cesaro_fun(&frac, 2.0).unwrap() - 0.25).abs() <= 1e-14);

        let c = StepFunction::new(vec![], vec![(1.0, 0.8)]).unwrap();
        assert!((cesaro_fun(&c, 13.25).unwrap() - 0.8).abs() <= 1e-14);
        assert!((abel_fun(&c, 0.3, TAIL).unwrap() - 0.8).abs() <= 1e-13);
    }

    #[test]
    fn abel_fun_matches_abel_seq_on_unit_samples() {
        let shapes = [
            EventuallyPeriodic::new(vec![], vec![0.0, 1.0]).unwrap(),
            EventuallyPeriodic::new(vec![1.0, 1.0, 1.0], vec![0.2, 0.9, 0.4]).unwrap(),
        ];
        for ep in &shapes {
            let seq = ep.sequence();
            let fun = ep.step_function();
            for mu in [0.7, 0.3, 0.05, 1e-3] {
                // Sampling at unit times maps the continuous rate lambda to
                // the discrete weight mu = 1 - exp(-lambda).
                let lambda = -(1.0f64 - mu).ln();
                let from_fun = abel_fun(&fun, lambda, TAIL).unwrap();
                // abel_fun weights each sample by mu (1-mu)^{i-1} already,
                // since exp(-lambda(i-1)) - exp(-lambda i) = (1-mu)^{i-1} mu.
                let from_seq = abel_seq(&seq, mu, TAIL).unwrap();
                assert!(
                    (from_fun - from_seq).abs() <= TAIL + 1e-12,
                    "mu = {mu}: {from_fun} vs {from_seq}"
                );
            }
        }
    }

    #[test]
    fn oracle_agrees_with_the_kernel_integrators() {
        // The alternating step function is the phase-0 embedding of the
        // forced play of the 0/1 cycle instance.
        let g = catalog::cycle01();
        let n = kernel::abel_states_needed(0.05, TAIL, 0.0) + 2;
        let states: Vec<usize> = (0..n).map(|t| t % 2).collect();
        let y = Trajectory::from_states(&g, states).unwrap();
        let z = embed(&y, 0.0).unwrap();
        let fun = EventuallyPeriodic::new(vec![], vec![0.0, 1.0])
            .unwrap()
            .step_function();
        for t_end in [4.0, 7.5, 100.0] {
            let a = kernel::cesaro(&z, t_end).unwrap();
            let b = cesaro_fun(&fun, t_end).unwrap();
            assert!((a - b).abs() <= 1e-10, "T = {t_end}: {a} vs {b}");
        }
        for lambda in [0.5, 0.05] {
            let a = kernel::abel(&z, lambda, TAIL).unwrap();
            let b = abel_fun(&fun, lambda, TAIL).unwrap();
            assert!((a - b).abs() <= 1e-10, "lambda = {lambda}: {a} vs {b}");
        }
    }

    #[test]
    fn hardy_constant_bounds_the_gap() {
        let shapes = [
            EventuallyPeriodic::new(vec![], vec![0.0, 1.0]).unwrap(),
            EventuallyPeriodic::new(vec![1.0, 1.0, 1.0], vec![0.2, 0.9, 0.4]).unwrap(),
            EventuallyPeriodic::new(vec![0.5], vec![0.9, 0.0, 0.0, 0.6, 0.3]).unwrap(),
        ];
        for ep in &shapes {
            let c = ep.hardy_constant();
            let seq = ep.sequence();
            for n in (2u64..=64).chain([101, 515, 1024, 4097]) {
                let ces = cesaro_seq(&seq, n).unwrap();
                let ab = abel_seq(&seq, 1.0 / n as f64, TAIL).unwrap();
                assert!(
                    (ces - ab).abs() <= c / n as f64 + TAIL + 1e-12,
                    "n = {n}: |{ces} - {ab}| > {c}/n"
                );
            }
        }
        // The alternating constant is 1, comfortably inside the generic 2.
        assert!((shapes[0].hardy_constant() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn step_function_shape_checks() {
        assert!(StepFunction::new(vec![], vec![]).is_err());
        assert!(StepFunction::new(vec![(0.0, 1.0)], vec![(1.0, 0.0)]).is_err());
        assert!(StepFunction::new(vec![], vec![(1.0, f64::NAN)]).is_err());
        let f = StepFunction::new(vec![(0.5, 0.2)], vec![(1.0, 1.0), (1.0, 0.0)]).unwrap();
        assert_eq!(f.value_at(0.25), 0.2);
        assert_eq!(f.value_at(0.5), 1.0);
        assert_eq!(f.value_at(1.5), 0.0);
        assert_eq!(f.value_at(2.5), 1.0);
    }
}
