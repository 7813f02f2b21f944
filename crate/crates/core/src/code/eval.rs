use serde::Serialize;

use super::{DecoderKind, ListCode};
use crate::channel::{increment, Channel, State};
use crate::error::{Error, Result};
use crate::exact;
use crate::linalg::{self, CMatrix};

/// Upper bound on elementary operations for exact evaluation.
pub const EXACT_BUDGET: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodeMetrics {
    pub p_e: f64,
    /// Probability of correct decoding, `1 - p_e`.
    pub success: f64,
}

impl CodeMetrics {
    pub(crate) fn from_error(p_e: f64) -> Self {
        CodeMetrics { p_e, success: 1.0 - p_e }
    }
}

/// Probability that message `i` is missing from the decoded list, for every `i`:
/// `W^{(n)}_{phi(i)}(Z_i)` or `Tr W^{(n)}_{phi(i)} Z_i`, where `Z_i` collects
/// the decision regions (POVM elements) whose list does not contain `i`.
///
/// Summing the complement makes a message that is always listed score exactly
/// zero. Two messages with the same codeword and the same regions get
/// bit-identical values.
pub fn message_errors(code: &ListCode, channel: &Channel) -> Result<Vec<f64>> {
    code.check_channel(channel)?;
    let n = code.block_length();
    let n_msgs = code.message_count();
    let k = channel.output_dim();
    match code.decoder().kind() {
        DecoderKind::Classical(lists) => {
            let ops = lists.len() as u128 * n_msgs as u128 * n as u128;
            check_budget(ops)?;
            let mut error = vec![0.0; n_msgs];
            let mut listed = vec![false; n_msgs];
            let mut y = vec![0usize; n];
            for list in lists {
                list.iter().for_each(|&i| listed[i] = true);
                for (i, e) in error.iter_mut().enumerate() {
                    if !listed[i] {
                        *e += channel.word_probability(code.encoder().codeword(i), &y);
                    }
                }
                list.iter().for_each(|&i| listed[i] = false);
                increment(&mut y, k);
            }
            Ok(error)
        }
        DecoderKind::Quantum(elements) => {
            let d = elements[0].operator.nrows() as u128;
            check_budget(n_msgs as u128 * d * d * (elements.len() as u128 + 1))?;
            let mut error = Vec::with_capacity(n_msgs);
            for i in 0..n_msgs {
                let State::Quantum(w) = channel.word_output(code.encoder().codeword(i)) else {
                    return Err(Error::VariantMismatch);
                };
                let mut z = CMatrix::zeros(d as usize, d as usize);
                for e in elements.iter().filter(|e| !e.subset.contains(&i)) {
                    z += &e.operator;
                }
                error.push(linalg::trace_product(w.matrix(), &z));
            }
            Ok(error)
        }
    }
}

/// `Y_i = sum of elements whose subset contains i`, summed in element order.
pub(crate) fn aggregate_povm<'a, I>(elements: I, n_msgs: usize) -> Vec<CMatrix>
where
    I: Iterator<Item = (&'a Vec<usize>, &'a CMatrix)> + Clone,
{
    let d = elements.clone().next().map_or(0, |(_, m)| m.nrows());
    let mut y = vec![CMatrix::zeros(d, d); n_msgs];
    for (subset, op) in elements {
        for &i in subset {
            y[i] += op;
        }
    }
    y
}

pub(crate) fn check_budget(needed: u128) -> Result<()> {
    if needed > EXACT_BUDGET {
        Err(Error::BudgetExceeded { needed, budget: EXACT_BUDGET })
    } else {
        Ok(())
    }
}

/// Exact average error probability of a list code.
///
/// The average over messages is rounded once from its exact value, so it does
/// not depend on message order or on repeated messages.
pub fn error_probability(code: &ListCode, channel: &Channel) -> Result<CodeMetrics> {
    let error = message_errors(code, channel)?;
    Ok(CodeMetrics::from_error(exact::mean(&error)))
}
