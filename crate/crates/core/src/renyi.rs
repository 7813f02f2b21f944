//! Rényi overlaps `phi(s|a||b) = Tr a^{1-s} b^s` and the strong-converse exponent.
//!
//! Powers of `b` are taken on its support. For `s < 0` the overlap is infinite
//! exactly when `a` has mass outside the support of `b`. By convention
//! `phi(0|a||b) = 1`.

use serde::Serialize;

use crate::channel::{relative_entropy, Channel, State, SUPPORT_EPS};
use crate::error::{Error, Result};

pub const DEFAULT_S_LO: f64 = -8.0;
pub const DEFAULT_GRID_POINTS: usize = 257;
const REFINE_ROUNDS: usize = 3;
const REFINE_SHRINK: f64 = 8.0;
const MIN_BRACKET: f64 = 1e-12;

/// Spectral data of a pair `(a, b)`: `phi(s) = sum w exp((1-s) ln λ + s ln μ)`.
#[derive(Clone, Debug)]
pub struct Overlap {
    terms: Vec<(f64, f64, f64)>,
    escapes: bool,
}

impl Overlap {
    pub fn new(a: &State, b: &State) -> Result<Self> {
        crate::channel::check_pair(a, b)?;
        Ok(match (a, b) {
            (State::Classical(a), State::Classical(b)) => {
                let mut terms = Vec::new();
                let mut escapes = false;
                for (&p, &q) in a.probs().iter().zip(b.probs()) {
                    if p == 0.0 {
                        continue;
                    }
                    if q > SUPPORT_EPS {
                        terms.push((p.ln(), q.ln(), 1.0));
                    } else if p > SUPPORT_EPS {
                        escapes = true;
                    }
                }
                Overlap { terms, escapes }
            }
            (State::Quantum(a), State::Quantum(b)) => {
                let sa = a.spectrum();
                let sb = b.spectrum();
                let cross = sa.vectors.adjoint() * &sb.vectors;
                let mut terms = Vec::new();
                let mut outside = 0.0;
                for (i, &lambda) in sa.values.iter().enumerate() {
                    if lambda <= SUPPORT_EPS {
                        continue;
                    }
                    for (j, &mu) in sb.values.iter().enumerate() {
                        let w = cross[(i, j)].norm_sqr();
                        if mu > SUPPORT_EPS {
                            terms.push((lambda.ln(), mu.ln(), w));
                        } else {
                            outside += lambda * w;
                        }
                    }
                }
                Overlap { terms, escapes: outside > SUPPORT_EPS }
            }
            _ => unreachable!(),
        })
    }

    /// Whether `a` has mass outside the support of `b`.
    pub fn escapes(&self) -> bool {
        self.escapes
    }

    pub fn eval(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 1.0;
        }
        if s < 0.0 && self.escapes {
            return f64::INFINITY;
        }
        self.terms.iter().map(|&(la, lb, w)| w * ((1.0 - s) * la + s * lb).exp()).sum()
    }
}

/// `phi(s|a||b)`.
pub fn phi(s: f64, a: &State, b: &State) -> Result<f64> {
    Ok(Overlap::new(a, b)?.eval(s))
}

/// Overlaps of every channel output against one reference state.
#[derive(Clone, Debug)]
pub struct ChannelOverlap {
    per_input: Vec<Overlap>,
}

impl ChannelOverlap {
    pub fn new(channel: &Channel, sigma: &State) -> Result<Self> {
        channel.check_state(sigma)?;
        let per_input = channel.outputs().iter().map(|w| Overlap::new(w, sigma)).collect::<Result<_>>()?;
        Ok(ChannelOverlap { per_input })
    }

    /// `max_x phi(s|W_x||sigma)`.
    pub fn eval(&self, s: f64) -> f64 {
        self.per_input.iter().map(|o| o.eval(s)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `phi(s|W||sigma) = max_x phi(s|W_x||sigma)`.
pub fn phi_channel(s: f64, channel: &Channel, sigma: &State) -> Result<f64> {
    Ok(ChannelOverlap::new(channel, sigma)?.eval(s))
}

/// One-sided slope of `log phi(s|W||sigma)` at zero from the left,
/// `log phi(-h)/h`, paired with `max_x D(W_x||sigma)`.
pub fn phi_slope_check(channel: &Channel, sigma: &State, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0 && h <= 0.01) {
        return Err(Error::InvalidArgument(format!("step must lie in (0, 0.01], got {h}")));
    }
    channel.check_state(sigma)?;
    let mut exact = f64::NEG_INFINITY;
    for (x, w) in channel.outputs().iter().enumerate() {
        let d = relative_entropy(w, sigma)?;
        if d.is_infinite() {
            return Err(Error::InfiniteDivergence { input: x });
        }
        exact = exact.max(d);
    }
    let numeric = phi_channel(-h, channel, sigma)?.ln() / h;
    Ok((numeric, exact))
}

/// Rate and search grid for [`sc_exponent`].
#[derive(Clone, Copy, Debug)]
pub struct ExponentQuery {
    pub rate: f64,
    pub s_lo: f64,
    pub grid_points: usize,
}

impl ExponentQuery {
    pub fn new(rate: f64) -> Self {
        ExponentQuery { rate, s_lo: DEFAULT_S_LO, grid_points: DEFAULT_GRID_POINTS }
    }

    fn validate(&self) -> Result<()> {
        if !self.rate.is_finite() {
            return Err(Error::InvalidArgument("rate must be finite".into()));
        }
        if !(self.s_lo < 0.0 && self.s_lo.is_finite()) {
            return Err(Error::InvalidArgument(format!("s_lo must be negative, got {}", self.s_lo)));
        }
        if self.grid_points < 3 {
            return Err(Error::InvalidArgument("grid needs at least 3 points".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TraceRow {
    pub s: f64,
    pub phi: f64,
    pub log_phi: f64,
    pub objective: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentResult {
    pub rate: f64,
    pub exponent: f64,
    pub s_star: f64,
    /// Every evaluated point, sorted by `s`.
    pub trace: Vec<TraceRow>,
}

/// The objective `(-s r - log phi(s|W||sigma)) / (1 - s)`; `-inf` where `phi` is infinite.
pub fn exponent_objective(rate: f64, s: f64, phi_value: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    if phi_value.is_infinite() {
        return f64::NEG_INFINITY;
    }
    (-s * rate - phi_value.ln()) / (1.0 - s)
}

/// Maximizes the strong-converse objective over `s` in `[s_lo, 0]`.
///
/// A uniform grid is followed by three refinement rounds, each shrinking the
/// bracket around the incumbent by 8x. While the incumbent is still the
/// endpoint `s = 0` with objective 0, shrinking continues toward 0 so that
/// rates barely above `max_x D(W_x||sigma)` still produce a positive exponent.
/// Ties go to the smaller `s`.
pub fn sc_exponent(query: &ExponentQuery, channel: &Channel, sigma: &State) -> Result<ExponentResult> {
    query.validate()?;
    let overlap = ChannelOverlap::new(channel, sigma)?;
    let mut trace: Vec<TraceRow> = Vec::new();
    let mut best = (0.0f64, f64::NEG_INFINITY);

    let scan = |lo: f64, hi: f64, trace: &mut Vec<TraceRow>, best: &mut (f64, f64)| {
        for s in grid(lo, hi, query.grid_points) {
            let phi = overlap.eval(s);
            let objective = exponent_objective(query.rate, s, phi);
            trace.push(TraceRow { s, phi, log_phi: phi.ln(), objective });
            if objective > best.1 || (objective == best.1 && s < best.0) {
                *best = (s, objective);
            }
        }
    };

    scan(query.s_lo, 0.0, &mut trace, &mut best);
    let mut width = -query.s_lo;
    for _ in 0..REFINE_ROUNDS {
        width /= REFINE_SHRINK;
        let (lo, hi) = bracket(best.0, width, query.s_lo);
        scan(lo, hi, &mut trace, &mut best);
    }
    while best.0 == 0.0 && best.1 <= 0.0 && width > MIN_BRACKET {
        width /= REFINE_SHRINK;
        scan(-width, 0.0, &mut trace, &mut best);
    }

    trace.sort_by(|a, b| a.s.total_cmp(&b.s));
    trace.dedup_by(|a, b| a.s == b.s);
    Ok(ExponentResult { rate: query.rate, exponent: best.1.max(0.0), s_star: best.0, trace })
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let last = points - 1;
    (0..points).map(move |k| if k == last { hi } else { lo + (hi - lo) * k as f64 / last as f64 })
}

fn bracket(center: f64, width: f64, s_lo: f64) -> (f64, f64) {
    let lo = (center - 0.5 * width).max(s_lo);
    let hi = (center + 0.5 * width).min(0.0);
    (lo, hi)
}
