//! The hypothesis-testing reduction behind the converse bound.
//!
//! For a code with `N` messages, the joint objects are
//! `R = (1/N) sum_i |i><i| (x) W_{phi(i)}` and `S = (1/N) sum_i |i><i| (x) sigma^n`,
//! and the test is `T = sum_i |i><i| (x) Y_i`. Then `R(T) = 1 - P_e` and
//! `S(T) = L/N`, and monotonicity of the Rényi overlap under the two-outcome
//! measurement `{T, 1 - T}` yields
//! `(1 - P_e)^{1-s} N^{-s} L^s <= phi(s|W||sigma)^n` for `s <= 0`.

use serde::Serialize;

use super::eval::{aggregate_povm, check_budget};
use super::{error_probability, DecoderKind, ListCode};
use crate::channel::{increment, Channel, State, PROB_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::renyi::{ChannelOverlap, Overlap};

/// Absolute slack allowed before a margin counts as a violation.
pub const VIOLATION_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RstSummary {
    /// `R(T)`, equal to `1 - P_e`.
    pub r_of_t: f64,
    /// `S(T)`.
    pub s_of_t: f64,
    /// `L / N`.
    pub expected_s_of_t: f64,
    /// `max |sum_i Y_i - L I|`, quantum codes only.
    pub quantum_resolution_residual: Option<f64>,
    /// `|sigma^n(union of Y_i) - 1|`, classical codes only.
    pub coverage_residual: Option<f64>,
}

/// Product probabilities `sigma^n(y)` for every output word, in index order.
fn sigma_word_probs(sigma: &[f64], n: usize) -> Vec<f64> {
    let k = sigma.len();
    let total = k.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut y = vec![0usize; n];
    for _ in 0..total {
        out.push(y.iter().fold(1.0, |acc, &l| acc * sigma[l]));
        increment(&mut y, k);
    }
    out
}

fn quantum_parts<'a>(code: &'a ListCode, channel: &Channel, sigma: &State) -> Result<(&'a [super::PovmElement], State)> {
    let DecoderKind::Quantum(elements) = code.decoder().kind() else { unreachable!() };
    let d = elements[0].operator.nrows() as u128;
    check_budget(d * d * d * (code.message_count() as u128 + 1))?;
    channel.check_state(sigma)?;
    Ok((elements, sigma.power(code.block_length())))
}

/// Evaluates `R(T)` and `S(T)` by summing over the pairs `(i, y)` in `T`.
pub fn build_rst(code: &ListCode, channel: &Channel, sigma: &State) -> Result<RstSummary> {
    code.check_channel(channel)?;
    channel.check_state(sigma)?;
    let n_msgs = code.message_count() as f64;
    let expected_s_of_t = code.list_size() as f64 / n_msgs;
    match (code.decoder().kind(), sigma) {
        (DecoderKind::Classical(lists), State::Classical(sig)) => {
            check_budget(lists.len() as u128 * code.list_size() as u128 * code.block_length() as u128)?;
            let n = code.block_length();
            let k = channel.output_dim();
            let sig_n = sigma_word_probs(sig.probs(), n);
            let (mut r, mut s, mut covered) = (0.0, 0.0, 0.0);
            let mut y = vec![0usize; n];
            for (idx, list) in lists.iter().enumerate() {
                if !list.is_empty() {
                    covered += sig_n[idx];
                }
                for &i in list {
                    r += channel.word_probability(code.encoder().codeword(i), &y);
                    s += sig_n[idx];
                }
                increment(&mut y, k);
            }
            Ok(RstSummary {
                r_of_t: r / n_msgs,
                s_of_t: s / n_msgs,
                expected_s_of_t,
                quantum_resolution_residual: None,
                coverage_residual: Some((covered - 1.0).abs()),
            })
        }
        (DecoderKind::Quantum(_), State::Quantum(_)) => {
            let (elements, sig_n) = quantum_parts(code, channel, sigma)?;
            let State::Quantum(sig_n) = sig_n else { unreachable!() };
            let y = aggregate_povm(elements.iter().map(|e| (&e.subset, &e.operator)), code.message_count());
            let (mut r, mut s) = (0.0, 0.0);
            let d = sig_n.dim();
            let mut resolution = CMatrix::zeros(d, d);
            for (i, y_i) in y.iter().enumerate() {
                let State::Quantum(w) = channel.word_output(code.encoder().codeword(i)) else { unreachable!() };
                r += linalg::trace_product(w.matrix(), y_i);
                s += linalg::trace_product(sig_n.matrix(), y_i);
                resolution += y_i;
            }
            let target = linalg::identity(d) * num_complex::Complex64::new(code.list_size() as f64, 0.0);
            Ok(RstSummary {
                r_of_t: r / n_msgs,
                s_of_t: s / n_msgs,
                expected_s_of_t,
                quantum_resolution_residual: Some(linalg::max_abs_diff(&resolution, &target)),
                coverage_residual: None,
            })
        }
        _ => Err(Error::VariantMismatch),
    }
}

/// `r^{1-s} q^s` with `0^{1-s} = 0` for `s <= 0` and `q^s = inf` when `q = 0`, `s < 0`.
fn overlap_term(r: f64, q: f64, s: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    if s == 0.0 {
        return r;
    }
    if q == 0.0 {
        return if s < 0.0 { f64::INFINITY } else { 0.0 };
    }
    ((1.0 - s) * r.ln() + s * q.ln()).exp()
}

/// The three sides of the monotonicity step at one `s`:
/// `pair_term <= binary <= full`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DataProcessing {
    pub s: f64,
    /// `R(T)^{1-s} S(T)^s`.
    pub pair_term: f64,
    /// The overlap of the measured two-outcome distributions.
    pub binary: f64,
    /// The overlap of the joint objects `R`, `S`.
    pub full: f64,
}

pub fn data_processing_check(code: &ListCode, channel: &Channel, sigma: &State, s: f64) -> Result<DataProcessing> {
    if s > 0.0 {
        return Err(Error::InvalidArgument(format!("s must be <= 0, got {s}")));
    }
    let rst = build_rst(code, channel, sigma)?;
    let n_msgs = code.message_count() as f64;
    let (r, q) = (rst.r_of_t, rst.s_of_t);
    let pair_term = overlap_term(r, q, s);
    // Rounding can leave 1 - R(T) a few ulps above zero when the complement is
    // empty; treat masses below the probability tolerance as zero.
    let complement = |v: f64| if 1.0 - v <= PROB_TOL { 0.0 } else { 1.0 - v };
    let binary = pair_term + overlap_term(complement(r), complement(q), s);
    let full = match sigma {
        State::Classical(sig) => {
            let n = code.block_length();
            let k = channel.output_dim();
            let sig_n = sigma_word_probs(sig.probs(), n);
            let mut total = 0.0;
            for w in code.encoder().codewords() {
                let mut y = vec![0usize; n];
                for &q in &sig_n {
                    total += overlap_term(channel.word_probability(w, &y) / n_msgs, q / n_msgs, s);
                    increment(&mut y, k);
                }
            }
            total
        }
        State::Quantum(_) => {
            let (_, sig_n) = quantum_parts(code, channel, sigma)?;
            // The n_msgs factors cancel: (1/N)^{1-s} (1/N)^s = 1/N per block.
            let mut total = 0.0;
            for w in code.encoder().codewords() {
                total += Overlap::new(&channel.word_output(w), &sig_n)?.eval(s);
            }
            total / n_msgs
        }
    };
    Ok(DataProcessing { s, pair_term, binary, full })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub s: f64,
    /// `(1 - P_e)^{1-s} N^{-s} L^s`.
    pub lhs: f64,
    /// `phi(s|W||sigma)^n`.
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    pub violated: bool,
}

fn check_s_list(s_list: &[f64]) -> Result<()> {
    if s_list.is_empty() {
        return Err(Error::InvalidArgument("s list is empty".into()));
    }
    if let Some(s) = s_list.iter().find(|s| !(**s <= 0.0)) {
        return Err(Error::InvalidArgument(format!("s values must be <= 0, got {s}")));
    }
    Ok(())
}

/// Evaluates `(1 - P_e)^{1-s} N^{-s} L^s <= phi(s|W||sigma)^n` at each `s`.
pub fn verify_converse_bound(code: &ListCode, channel: &Channel, sigma: &State, s_list: &[f64]) -> Result<BoundReport> {
    check_s_list(s_list)?;
    channel.check_state(sigma)?;
    let success = error_probability(code, channel)?.success;
    let overlap = ChannelOverlap::new(channel, sigma)?;
    let n = code.block_length() as f64;
    let ln_n = (code.message_count() as f64).ln();
    let ln_l = (code.list_size() as f64).ln();
    let rows: Vec<BoundRow> = s_list
        .iter()
        .map(|&s| {
            let lhs = if success <= 0.0 {
                0.0
            } else {
                ((1.0 - s) * success.ln() - s * ln_n + s * ln_l).exp()
            };
            let rhs = (n * overlap.eval(s).ln()).exp();
            BoundRow { s, lhs, rhs, margin: rhs - lhs }
        })
        .collect();
    let violated = rows.iter().any(|r| r.margin < -VIOLATION_SLACK);
    Ok(BoundReport { rows, violated })
}

/// Upper bound on `1 - P_e` for any `L`-list code of length `n` with `N`
/// messages: `min(1, min_s exp((n ln phi(s) + s ln(N/L)) / (1 - s)))`.
pub fn converse_success_bound(
    channel: &Channel,
    sigma: &State,
    n: usize,
    messages: f64,
    list_size: f64,
    s_grid: &[f64],
) -> Result<f64> {
    check_s_list(s_grid)?;
    let overlap = ChannelOverlap::new(channel, sigma)?;
    let ln_ratio = (messages / list_size).ln();
    let mut best: f64 = 1.0;
    for &s in s_grid {
        let v = ((n as f64 * overlap.eval(s).ln() + s * ln_ratio) / (1.0 - s)).exp();
        if v.is_finite() {
            best = best.min(v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ProbDist;
    use crate::code::{lift_code, make_list_decoder_ml, Encoder, ListDecoder, PovmElement};
    use crate::channel::DensityMatrix;
    use num_complex::Complex64;

    fn bsc_ml() -> (Channel, ListCode) {
        let w = Channel::binary_symmetric(0.1);
        let enc = Encoder::new(1, vec![vec![0], vec![1]]).unwrap();
        let dec = make_list_decoder_ml(&enc, &w, 1).unwrap();
        (w, ListCode::new(enc, dec).unwrap())
    }

    #[test]
    fn rst_on_bsc() {
        let (w, code) = bsc_ml();
        let rst = build_rst(&code, &w, &State::Classical(ProbDist::uniform(2))).unwrap();
        assert!((rst.r_of_t - 0.9).abs() < 1e-12);
        assert_eq!(rst.s_of_t, 0.5);
        assert!(rst.coverage_residual.unwrap() <= 1e-12);
    }

    #[test]
    fn bound_rows_on_bsc() {
        let (w, code) = bsc_ml();
        let report = verify_converse_bound(&code, &w, &State::Classical(ProbDist::uniform(2)), &[0.0, -1.0]).unwrap();
        assert!(!report.violated);
        assert!((report.rows[0].lhs - 0.9).abs() < 1e-12);
        assert_eq!(report.rows[0].rhs, 1.0);
        assert!((report.rows[1].lhs - 1.62).abs() < 1e-12);
        assert!((report.rows[1].rhs - 1.64).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_s_lists() {
        let (w, code) = bsc_ml();
        let sigma = State::Classical(ProbDist::uniform(2));
        assert!(verify_converse_bound(&code, &w, &sigma, &[]).is_err());
        assert!(verify_converse_bound(&code, &w, &sigma, &[0.5]).is_err());
        assert!(verify_converse_bound(&code, &w, &sigma, &[f64::NAN]).is_err());
    }

    #[test]
    fn data_processing_chain() {
        let w = Channel::binary_symmetric(0.2);
        let enc = Encoder::new(2, vec![vec![0, 1], vec![1, 1], vec![0, 0]]).unwrap();
        let dec = make_list_decoder_ml(&enc, &w, 2).unwrap();
        let code = ListCode::new(enc, dec).unwrap();
        let sigma = State::Classical(ProbDist::new(vec![0.3, 0.7]).unwrap());
        for s in [0.0, -0.3, -1.0, -2.5] {
            let dp = data_processing_check(&code, &w, &sigma, s).unwrap();
            assert!(dp.pair_term <= dp.binary * (1.0 + 1e-12));
            assert!(dp.binary <= dp.full * (1.0 + 1e-12), "{dp:?}");
        }
    }

    #[test]
    fn quantum_resolution_of_lifted_code() {
        let ket = |i: usize| {
            let mut psi = vec![Complex64::new(0.0, 0.0); 2];
            psi[i] = Complex64::new(1.0, 0.0);
            DensityMatrix::pure(&psi).unwrap()
        };
        let w = Channel::cq(vec![ket(0), ket(1)]).unwrap();
        let elements = (0..2).map(|i| PovmElement { subset: vec![i], operator: ket(i).matrix().clone() }).collect();
        let enc = Encoder::new(1, vec![vec![0], vec![1]]).unwrap();
        let base = ListCode::new(enc, ListDecoder::quantum(1, elements).unwrap()).unwrap();
        let lifted = lift_code(&base, 2).unwrap();
        let sigma = State::Quantum(DensityMatrix::maximally_mixed(2));
        let rst = build_rst(&lifted, &w, &sigma).unwrap();
        assert!(rst.quantum_resolution_residual.unwrap() <= 1e-10);
        assert!((rst.s_of_t - 0.5).abs() <= 1e-10);
        assert!((rst.r_of_t - 1.0).abs() <= 1e-12);
        let dp = data_processing_check(&lifted, &w, &sigma, -0.5).unwrap();
        assert!(dp.binary <= dp.full * (1.0 + 1e-12));
    }

    #[test]
    fn success_bound_is_at_most_one() {
        let w = Channel::binary_symmetric(0.1);
        let sigma = State::Classical(ProbDist::uniform(2));
        let grid = [-2.0, -1.0, -0.5, -0.1, 0.0];
        assert_eq!(converse_success_bound(&w, &sigma, 4, 2.0, 1.0, &grid).unwrap(), 1.0);
        assert!(converse_success_bound(&w, &sigma, 40, (0.6f64 * 40.0).exp(), 1.0, &grid).unwrap() < 0.5);
    }
}
