use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ml::{in_top_list, LikelihoodModel};
use super::{message_errors, DecoderKind, Encoder, ListCode};
use crate::channel::{word_index, Channel, ProbDist};
use crate::error::{Error, Result};
use crate::exact;
use crate::rng::{sample_index, stream, Domain};

/// Random codebook with i.i.d. letters drawn from `p`.
///
/// Codeword `i` comes from its own stream, so each codeword depends only on
/// `(seed, i)`.
pub fn random_code(p: &ProbDist, n: usize, messages: usize, seed: u64) -> Result<Encoder> {
    let codewords = (0..messages)
        .map(|i| {
            let mut rng = stream(seed, Domain::Codebook, i as u64);
            (0..n).map(|_| sample_index(&mut rng, p.probs())).collect()
        })
        .collect();
    Encoder::new(n, codewords)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    /// Binomial standard error `sqrt(p (1 - p) / trials)`.
    pub stderr: f64,
    pub trials: usize,
}

impl McEstimate {
    fn from_counts(hits: u64, trials: usize) -> Self {
        let p = hits as f64 / trials as f64;
        McEstimate { estimate: p, stderr: (p * (1.0 - p) / trials as f64).sqrt(), trials }
    }
}

fn sample_word<R: Rng>(rng: &mut R, rows: &[ProbDist], input: &[usize], out: &mut [usize]) {
    for (y, &x) in out.iter_mut().zip(input) {
        *y = sample_index(rng, rows[x].probs());
    }
}

/// Monte-Carlo estimate of the error of the maximum-likelihood list decoder.
///
/// Trial `t` draws a uniform message, passes its codeword through the channel
/// and checks whether the message ranks among the `L` most likely (ties to
/// the smaller id). Trials use independent streams, so the estimate does not
/// depend on the thread count.
pub fn mc_error_probability(
    encoder: &Encoder,
    channel: &Channel,
    list_size: usize,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    let model = LikelihoodModel::new(channel)?;
    let rows = channel.rows().ok_or(Error::VariantMismatch)?;
    encoder.check_alphabet(channel.input_count())?;
    let n_msgs = encoder.message_count();
    if list_size == 0 || list_size > n_msgs {
        return Err(Error::InvalidCode(format!("list size {list_size} must lie in 1..={n_msgs}")));
    }
    if trials < 100 {
        return Err(Error::InvalidArgument(format!("at least 100 trials required, got {trials}")));
    }
    let n = encoder.block_length();
    let errors: u64 = (0..trials as u64)
        .into_par_iter()
        .map_init(
            || (vec![0usize; n], vec![0.0; n_msgs], vec![0u32; model.classes()]),
            |(y, scores, counts), t| {
                let mut rng = stream(seed, Domain::ErrorTrial, t);
                let i = rng.random_range(0..n_msgs);
                sample_word(&mut rng, rows, encoder.codeword(i), y);
                for (j, s) in scores.iter_mut().enumerate() {
                    *s = model.log_likelihood_with(encoder.codeword(j), y, counts);
                }
                u64::from(!in_top_list(scores, i, list_size))
            },
        )
        .sum();
    Ok(McEstimate::from_counts(errors, trials))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerandomizeReport {
    pub empirical: f64,
    pub stderr: f64,
    /// `delta / L`, with `delta` the exact success probability of the list code.
    pub predicted: f64,
    pub trials: usize,
}

/// Simulates turning a list code into a conventional one by guessing a
/// uniformly chosen member of the decoded list.
pub fn derandomize(code: &ListCode, channel: &Channel, trials: usize, seed: u64) -> Result<DerandomizeReport> {
    let DecoderKind::Classical(lists) = code.decoder().kind() else {
        return Err(Error::VariantMismatch);
    };
    let rows = channel.rows().ok_or(Error::VariantMismatch)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial required".into()));
    }
    let delta = 1.0 - exact::mean(&message_errors(code, channel)?);
    let list_size = code.list_size();
    let n = code.block_length();
    let n_msgs = code.message_count();
    let k = channel.output_dim();
    let hits: u64 = (0..trials as u64)
        .into_par_iter()
        .map_init(
            || vec![0usize; n],
            |y, t| {
                let mut rng = stream(seed, Domain::Derandomize, t);
                let i = rng.random_range(0..n_msgs);
                sample_word(&mut rng, rows, code.encoder().codeword(i), y);
                let guess = lists[word_index(y, k)][rng.random_range(0..list_size)];
                u64::from(guess == i)
            },
        )
        .sum();
    let est = McEstimate::from_counts(hits, trials);
    Ok(DerandomizeReport { empirical: est.estimate, stderr: est.stderr, predicted: delta / list_size as f64, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{error_probability, lift_code, make_list_decoder_ml, ListDecoder};

    #[test]
    fn random_code_is_deterministic() {
        let p = ProbDist::uniform(3);
        let a = random_code(&p, 5, 7, 11).unwrap();
        let b = random_code(&p, 5, 7, 11).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_code(&p, 5, 7, 12).unwrap());
        let prefix = random_code(&p, 5, 3, 11).unwrap();
        assert_eq!(&a.codewords()[..3], prefix.codewords());
    }

    #[test]
    fn point_mass_code_is_constant() {
        let code = random_code(&ProbDist::point_mass(3, 2), 4, 5, 0).unwrap();
        assert!(code.codewords().iter().flatten().all(|&x| x == 2));
        assert_eq!(random_code(&ProbDist::uniform(2), 6, 1, 0).unwrap().message_count(), 1);
    }

    #[test]
    fn trivial_estimates() {
        let w = Channel::identity(2);
        let enc = Encoder::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(mc_error_probability(&enc, &w, 1, 500, 3).unwrap().estimate, 0.0);
        let bsc = Channel::binary_symmetric(0.3);
        assert_eq!(mc_error_probability(&enc, &bsc, 3, 500, 3).unwrap().estimate, 0.0);
        assert!(mc_error_probability(&enc, &bsc, 1, 99, 3).is_err());
    }

    #[test]
    fn mc_matches_exact() {
        let w = Channel::binary_symmetric(0.1);
        let enc = random_code(&ProbDist::uniform(2), 6, 4, 5).unwrap();
        let exact = error_probability(&ListCode::new(enc.clone(), make_list_decoder_ml(&enc, &w, 1).unwrap()).unwrap(), &w)
            .unwrap()
            .p_e;
        let mc = mc_error_probability(&enc, &w, 1, 20_000, 9).unwrap();
        let sd = (exact * (1.0 - exact) / 20_000.0).sqrt();
        assert!((mc.estimate - exact).abs() <= 2.576 * sd, "{mc:?} vs {exact}");
    }

    #[test]
    fn derandomize_predictions() {
        let w = Channel::binary_symmetric(0.1);
        let enc = Encoder::new(1, vec![vec![0], vec![1]]).unwrap();
        let both = ListCode::new(enc.clone(), ListDecoder::classical(2, vec![vec![0, 1], vec![0, 1]]).unwrap()).unwrap();
        assert_eq!(derandomize(&both, &w, 10, 1).unwrap().predicted, 0.5);
        let base = ListCode::new(enc.clone(), make_list_decoder_ml(&enc, &w, 1).unwrap()).unwrap();
        assert!((derandomize(&base, &w, 10, 1).unwrap().predicted - 0.9).abs() < 1e-15);
        let lifted = lift_code(&base, 2).unwrap();
        let r = derandomize(&lifted, &w, 20_000, 1).unwrap();
        assert!((r.predicted - 0.45).abs() < 1e-15);
        assert!((r.empirical - r.predicted).abs() <= 3.0 * r.stderr);
    }
}
