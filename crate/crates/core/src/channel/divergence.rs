use super::state::{DensityMatrix, ProbDist, State, SUPPORT_EPS};
use super::Channel;
use crate::error::{dim_check, Error, Result};
use crate::linalg::{self, CMatrix};

/// `log b` restricted to the support of `b`, plus what lies outside it.
/// Lets one reference state be compared against many others cheaply.
#[derive(Clone, Debug)]
pub(crate) enum LogReference {
    Classical {
        /// `ln b_y` where `b_y > SUPPORT_EPS`, `-inf` elsewhere.
        log: Vec<f64>,
    },
    Quantum {
        /// `sum ln(mu) |v><v|` over eigenvalues `mu > SUPPORT_EPS`.
        log: CMatrix,
        /// Projector onto the complement of the support, if nontrivial.
        kernel: Option<CMatrix>,
    },
}

impl LogReference {
    pub(crate) fn new(b: &State) -> Self {
        match b {
            State::Classical(b) => LogReference::Classical {
                log: b.probs().iter().map(|&p| if p > SUPPORT_EPS { p.ln() } else { f64::NEG_INFINITY }).collect(),
            },
            State::Quantum(b) => {
                let spec = b.spectrum();
                let log = spec.apply(f64::ln, |mu| mu > SUPPORT_EPS);
                let kernel = spec
                    .values
                    .iter()
                    .any(|&mu| mu <= SUPPORT_EPS)
                    .then(|| spec.apply(|_| 1.0, |mu| mu <= SUPPORT_EPS));
                LogReference::Quantum { log, kernel }
            }
        }
    }
}

/// A state with its `Tr a log a` precomputed.
#[derive(Clone, Debug)]
pub(crate) struct Prepared<'a> {
    pub state: &'a State,
    neg_entropy: f64,
}

impl<'a> Prepared<'a> {
    pub(crate) fn new(state: &'a State) -> Self {
        let neg_entropy = match state {
            State::Classical(p) => p.probs().iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum(),
            State::Quantum(rho) => rho.eigenvalues().iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum(),
        };
        Prepared { state, neg_entropy }
    }

    /// `D(self || reference)`; the variants are assumed to agree.
    pub(crate) fn divergence(&self, reference: &LogReference) -> f64 {
        match (self.state, reference) {
            (State::Classical(a), LogReference::Classical { log }) => classical_divergence(a.probs(), log),
            (State::Quantum(a), LogReference::Quantum { log, kernel }) => {
                if let Some(kernel) = kernel {
                    if linalg::trace_product(a.matrix(), kernel) > SUPPORT_EPS {
                        return f64::INFINITY;
                    }
                }
                let value = self.neg_entropy - linalg::trace_product(a.matrix(), log);
                value.max(0.0)
            }
            _ => unreachable!("variant checked by caller"),
        }
    }
}

fn classical_divergence(a: &[f64], log_b: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&p, &lq) in a.iter().zip(log_b) {
        if p == 0.0 {
            continue;
        }
        if lq == f64::NEG_INFINITY {
            if p > SUPPORT_EPS {
                return f64::INFINITY;
            }
            continue;
        }
        sum += p * (p.ln() - lq);
    }
    sum.max(0.0)
}

pub(crate) fn check_pair(a: &State, b: &State) -> Result<()> {
    match (a, b) {
        (State::Classical(_), State::Classical(_)) | (State::Quantum(_), State::Quantum(_)) => dim_check(a.dim(), b.dim()),
        _ => Err(Error::VariantMismatch),
    }
}

/// Relative entropy `D(a || b)` in nats.
///
/// Infinite exactly when `a` has mass above `1e-12` outside the support of `b`.
pub fn relative_entropy(a: &State, b: &State) -> Result<f64> {
    check_pair(a, b)?;
    Ok(Prepared::new(a).divergence(&LogReference::new(b)))
}

/// `W_p = sum_x p(x) W_x`.
pub fn output_average(p: &ProbDist, channel: &Channel) -> Result<State> {
    dim_check(channel.input_count(), p.len())?;
    let w = p.probs();
    if let Some(rows) = channel.rows() {
        let k = channel.output_dim();
        let mut out = vec![0.0; k];
        for (px, row) in w.iter().zip(rows) {
            for (o, r) in out.iter_mut().zip(row.probs()) {
                *o += px * r;
            }
        }
        Ok(State::Classical(ProbDist::from_trusted(out)))
    } else {
        let states = channel.states().expect("cq channel");
        Ok(State::Quantum(DensityMatrix::mixture(w, states)?))
    }
}

/// `I(p, W) = sum_x p(x) D(W_x || W_p)`.
pub fn mutual_information(p: &ProbDist, channel: &Channel) -> Result<f64> {
    let wp = output_average(p, channel)?;
    j_functional(p, &wp, channel)
}

/// `J(p, sigma, W) = sum_x p(x) D(W_x || sigma)`; inputs with `p(x) = 0` do not contribute.
pub fn j_functional(p: &ProbDist, sigma: &State, channel: &Channel) -> Result<f64> {
    dim_check(channel.input_count(), p.len())?;
    channel.check_state(sigma)?;
    let reference = LogReference::new(sigma);
    let mut total = 0.0;
    for (x, &px) in p.probs().iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        let wx = channel.output(x);
        let d = Prepared::new(&wx).divergence(&reference);
        if d.is_infinite() {
            return Ok(f64::INFINITY);
        }
        total += px * d;
    }
    Ok(total)
}
