//! Channels, states and the divergences every other module is built on.
//!
//! All entropic quantities are in nats.

mod divergence;
mod state;

pub use divergence::{j_functional, mutual_information, output_average, relative_entropy};
pub(crate) use divergence::{check_pair, LogReference, Prepared};
pub use state::{DensityMatrix, ProbDist, State, MATRIX_TOL, PROB_TOL, SUPPORT_EPS};

use crate::error::{dim_check, Error, Result};
use state::check_distribution;

/// Which of the two channel families a [`Channel`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Classical,
    Cq,
}

#[derive(Clone, Debug)]
enum Outputs {
    Classical(Vec<ProbDist>),
    Cq(Vec<DensityMatrix>),
}

/// A classical channel (row-stochastic matrix, rows indexed by input) or a
/// classical-quantum channel (one density matrix per input).
#[derive(Clone, Debug)]
pub struct Channel {
    outputs: Outputs,
}

impl Channel {
    /// Validates a row-stochastic matrix. Rows are never renormalized.
    pub fn classical(matrix: Vec<Vec<f64>>) -> Result<Self> {
        dim_check_inputs(matrix.len())?;
        let width = matrix[0].len();
        let mut rows = Vec::with_capacity(matrix.len());
        for (row, probs) in matrix.into_iter().enumerate() {
            dim_check(width, probs.len())?;
            check_distribution(&probs).map_err(|(sum, min)| Error::NonStochasticRow { row, sum, min })?;
            rows.push(ProbDist::from_trusted(probs));
        }
        Ok(Channel { outputs: Outputs::Classical(rows) })
    }

    pub fn cq(states: Vec<DensityMatrix>) -> Result<Self> {
        dim_check_inputs(states.len())?;
        let d = states[0].dim();
        for s in &states {
            dim_check(d, s.dim())?;
        }
        Ok(Channel { outputs: Outputs::Cq(states) })
    }

    /// Binary symmetric channel with crossover probability `q`.
    pub fn binary_symmetric(q: f64) -> Self {
        Self::classical(vec![vec![1.0 - q, q], vec![q, 1.0 - q]]).expect("crossover in [0, 1]")
    }

    /// Noiseless channel on `k` symbols.
    pub fn identity(k: usize) -> Self {
        let rows = (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self::classical(rows).expect("identity rows are stochastic")
    }

    pub fn kind(&self) -> ChannelKind {
        match self.outputs {
            Outputs::Classical(_) => ChannelKind::Classical,
            Outputs::Cq(_) => ChannelKind::Cq,
        }
    }

    pub fn input_count(&self) -> usize {
        match &self.outputs {
            Outputs::Classical(rows) => rows.len(),
            Outputs::Cq(states) => states.len(),
        }
    }

    /// Output alphabet size, or Hilbert space dimension for cq channels.
    pub fn output_dim(&self) -> usize {
        match &self.outputs {
            Outputs::Classical(rows) => rows[0].len(),
            Outputs::Cq(states) => states[0].dim(),
        }
    }

    pub fn rows(&self) -> Option<&[ProbDist]> {
        match &self.outputs {
            Outputs::Classical(rows) => Some(rows),
            Outputs::Cq(_) => None,
        }
    }

    pub fn states(&self) -> Option<&[DensityMatrix]> {
        match &self.outputs {
            Outputs::Classical(_) => None,
            Outputs::Cq(states) => Some(states),
        }
    }

    /// `W_x` as a [`State`].
    pub fn output(&self, x: usize) -> State {
        match &self.outputs {
            Outputs::Classical(rows) => State::Classical(rows[x].clone()),
            Outputs::Cq(states) => State::Quantum(states[x].clone()),
        }
    }

    pub fn outputs(&self) -> Vec<State> {
        (0..self.input_count()).map(|x| self.output(x)).collect()
    }

    /// Checks that `state` lives on this channel's output space.
    pub fn check_state(&self, state: &State) -> Result<()> {
        match (self.kind(), state) {
            (ChannelKind::Classical, State::Classical(_)) | (ChannelKind::Cq, State::Quantum(_)) => {
                dim_check(self.output_dim(), state.dim())
            }
            _ => Err(Error::VariantMismatch),
        }
    }

    /// Product probability `W^{(n)}_{x^n}(y^n)` evaluated letter by letter.
    /// Classical channels only.
    pub fn word_probability(&self, input: &[usize], output: &[usize]) -> f64 {
        let rows = self.rows().expect("word_probability on a classical channel");
        input.iter().zip(output).fold(1.0, |acc, (&x, &y)| acc * rows[x].probs()[y])
    }

    /// `W^{(n)}_{x^n}`: the product distribution (mixed radix, last letter
    /// least significant) or the tensor-product density matrix.
    pub fn word_output(&self, input: &[usize]) -> State {
        assert!(!input.is_empty());
        match &self.outputs {
            Outputs::Classical(rows) => {
                let k = rows[0].len();
                let total = k.pow(input.len() as u32);
                let mut out = Vec::with_capacity(total);
                let mut digits = vec![0usize; input.len()];
                for _ in 0..total {
                    out.push(self.word_probability(input, &digits));
                    increment(&mut digits, k);
                }
                State::Classical(ProbDist::from_trusted(out))
            }
            Outputs::Cq(states) => {
                let mut acc = states[input[0]].clone();
                for &x in &input[1..] {
                    acc = acc.tensor(&states[x]);
                }
                State::Quantum(acc)
            }
        }
    }
}

fn dim_check_inputs(count: usize) -> Result<()> {
    if count < 2 {
        Err(Error::DimensionMismatch { expected: 2, got: count })
    } else {
        Ok(())
    }
}

/// Default cap on the number of stored entries when materializing an extension.
pub const DEFAULT_MATERIALIZE_BUDGET: u128 = 1 << 26;

/// The i.i.d. extension `W^{(n)}` over inputs `X^n`, materialized.
///
/// Input words and output words are both enumerated in mixed-radix order
/// with the last letter least significant.
pub fn iid_extend(channel: &Channel, n: usize) -> Result<Channel> {
    iid_extend_within(channel, n, DEFAULT_MATERIALIZE_BUDGET)
}

pub fn iid_extend_within(channel: &Channel, n: usize, budget: u128) -> Result<Channel> {
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be at least 1".into()));
    }
    if n == 1 {
        return Ok(channel.clone());
    }
    let inputs = (channel.input_count() as u128).checked_pow(n as u32);
    let outputs = (channel.output_dim() as u128).checked_pow(n as u32);
    let entries = match (inputs, outputs, channel.kind()) {
        (Some(i), Some(o), ChannelKind::Classical) => i.checked_mul(o),
        (Some(i), Some(o), ChannelKind::Cq) => o.checked_mul(o).and_then(|oo| oo.checked_mul(i)),
        _ => None,
    }
    .unwrap_or(u128::MAX);
    if entries > budget {
        return Err(Error::BudgetExceeded { needed: entries, budget });
    }
    let k = channel.input_count();
    let count = k.pow(n as u32);
    let mut word = vec![0usize; n];
    let mut outs = Vec::with_capacity(count);
    for _ in 0..count {
        outs.push(channel.word_output(&word));
        increment(&mut word, k);
    }
    let outputs = match channel.kind() {
        ChannelKind::Classical => Outputs::Classical(
            outs.into_iter()
                .map(|s| match s {
                    State::Classical(p) => p,
                    State::Quantum(_) => unreachable!(),
                })
                .collect(),
        ),
        ChannelKind::Cq => Outputs::Cq(
            outs.into_iter()
                .map(|s| match s {
                    State::Quantum(rho) => rho,
                    State::Classical(_) => unreachable!(),
                })
                .collect(),
        ),
    };
    Ok(Channel { outputs })
}

/// Mixed-radix increment, last digit least significant. Wraps to all zeros.
pub fn increment(digits: &mut [usize], radix: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return;
        }
        *d = 0;
    }
}

/// Mixed-radix index of `digits` (last digit least significant).
pub fn word_index(digits: &[usize], radix: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * radix + d)
}

/// Inverse of [`word_index`].
pub fn word_digits(mut index: usize, radix: usize, n: usize) -> Vec<usize> {
    let mut digits = vec![0; n];
    for d in digits.iter_mut().rev() {
        *d = index % radix;
        index /= radix;
    }
    digits
}
