//! Channel capacity by alternating maximization.
//!
//! The iteration `p(x) <- p(x) exp(D(W_x || W_p)) / Z` increases `I(p, W)`
//! monotonically. Every iterate also yields the upper bound
//! `max_x D(W_x || W_p) >= C(W)`, so the gap between the two bounds is a
//! certificate: when it drops below `tol` the capacity is known to within `tol`.
//! The same update handles cq channels, with quantum relative entropies.

use serde::Serialize;

use crate::channel::{output_average, Channel, LogReference, Prepared, ProbDist, State};
use crate::error::{dim_check, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Floor applied to the input distribution before each update.
const MASS_FLOOR: f64 = 1e-300;

/// Capacity with certifying bounds. `value` is the midpoint of `[lower, upper]`.
#[derive(Clone, Debug, Serialize)]
pub struct CapacityResult {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    #[serde(serialize_with = "serialize_dist")]
    pub p_star: ProbDist,
    #[serde(skip)]
    pub sigma_star: State,
    pub iterations: usize,
}

fn serialize_dist<S: serde::Serializer>(p: &ProbDist, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.probs())
}

/// One step of the iteration, reported to observers.
#[derive(Clone, Copy, Debug)]
pub struct Step {
    pub iteration: usize,
    pub lower: f64,
    pub upper: f64,
}

/// `(I(p, W), max_x D(W_x || W_p))`; the capacity lies between the two.
pub fn capacity_bounds(channel: &Channel, p: &ProbDist) -> Result<(f64, f64)> {
    dim_check(channel.input_count(), p.len())?;
    let outputs = channel.outputs();
    let prepared: Vec<_> = outputs.iter().map(Prepared::new).collect();
    let (lower, upper, _) = evaluate(channel, p, &prepared)?;
    Ok((lower, upper))
}

/// Returns `(I(p,W), max_x D(W_x||W_p), per-input divergences)`.
fn evaluate(channel: &Channel, p: &ProbDist, prepared: &[Prepared<'_>]) -> Result<(f64, f64, Vec<f64>)> {
    let wp = output_average(p, channel)?;
    let reference = LogReference::new(&wp);
    let divs: Vec<f64> = prepared.iter().map(|w| w.divergence(&reference)).collect();
    let lower = p
        .probs()
        .iter()
        .zip(&divs)
        .filter(|(&px, _)| px > 0.0)
        .map(|(&px, &d)| px * d)
        .sum::<f64>();
    let upper = divs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lower, upper, divs))
}

/// Runs the iteration from the uniform distribution until the duality gap is
/// at most `tol`. See [`arimoto_blahut_observed`].
pub fn arimoto_blahut(channel: &Channel, tol: f64, max_iter: usize) -> Result<CapacityResult> {
    arimoto_blahut_observed(channel, tol, max_iter, |_| {})
}

/// Like [`arimoto_blahut`], calling `observe` with the bounds of every iterate.
///
/// Returns [`Error::NotConverged`] carrying the best iterate when `max_iter`
/// updates are not enough. A channel whose outputs all coincide has capacity
/// zero and returns immediately.
pub fn arimoto_blahut_observed<F>(channel: &Channel, tol: f64, max_iter: usize, mut observe: F) -> Result<CapacityResult>
where
    F: FnMut(Step),
{
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let k = channel.input_count();
    let outputs = channel.outputs();
    let prepared: Vec<_> = outputs.iter().map(Prepared::new).collect();

    if is_degenerate(&outputs) {
        let p = ProbDist::uniform(k);
        let sigma = output_average(&p, channel)?;
        return Ok(CapacityResult {
            value: 0.0,
            lower: 0.0,
            upper: 0.0,
            gap: 0.0,
            p_star: p,
            sigma_star: sigma,
            iterations: 0,
        });
    }

    let mut weights = vec![1.0 / k as f64; k];
    let mut iteration = 0;
    loop {
        let p = ProbDist::from_trusted(weights.clone());
        let (lower, upper, divs) = evaluate(channel, &p, &prepared)?;
        observe(Step { iteration, lower, upper });
        let gap = upper - lower;
        if gap <= tol || iteration >= max_iter {
            let sigma_star = output_average(&p, channel)?;
            let result = CapacityResult {
                value: 0.5 * (lower + upper),
                lower,
                upper,
                gap,
                p_star: p,
                sigma_star,
                iterations: iteration,
            };
            return if gap <= tol { Ok(result) } else { Err(Error::NotConverged(Box::new(result))) };
        }
        weights = update(&weights, &divs);
        iteration += 1;
    }
}

/// `p(x) exp(D_x)` normalized, computed in the log domain.
fn update(weights: &[f64], divs: &[f64]) -> Vec<f64> {
    let logs: Vec<f64> = weights
        .iter()
        .zip(divs)
        .map(|(&w, &d)| {
            let w = w.max(MASS_FLOOR);
            // W_p >= p(x) W_x, so D(W_x || W_p) <= -ln p(x); an infinite value
            // only comes from the support threshold and is replaced by that bound.
            let d = if d.is_finite() { d } else { -w.ln() };
            w.ln() + d
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let unnorm: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = unnorm.iter().sum();
    unnorm.into_iter().map(|u| u / z).collect()
}

fn is_degenerate(outputs: &[State]) -> bool {
    let first = &outputs[0];
    outputs[1..].iter().all(|o| match (first, o) {
        (State::Classical(a), State::Classical(b)) => a.probs() == b.probs(),
        (State::Quantum(a), State::Quantum(b)) => a.matrix() == b.matrix(),
        _ => false,
    })
}
