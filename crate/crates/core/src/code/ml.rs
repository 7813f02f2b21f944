use super::eval::check_budget;
use super::{Encoder, ListDecoder};
use crate::channel::{increment, Channel};
use crate::error::{Error, Result};

/// Word log-likelihoods in a canonical form.
///
/// The distinct entries of the channel matrix are sorted and numbered; the
/// log-likelihood of a word pair is `sum_k c_k ln v_k`, where `c_k` counts the
/// letters whose transition probability equals `v_k`, summed in class order.
/// Likelihoods that are equal as products of the same multiset of entries
/// therefore compare equal bit for bit, and ties are decided by message id only.
#[derive(Clone, Debug)]
pub struct LikelihoodModel {
    /// `class[x][y]` indexes into `log_value`.
    class: Vec<Vec<usize>>,
    log_value: Vec<f64>,
}

impl LikelihoodModel {
    pub fn new(channel: &Channel) -> Result<Self> {
        let rows = channel.rows().ok_or(Error::VariantMismatch)?;
        let mut values: Vec<f64> = rows.iter().flat_map(|r| r.probs().iter().copied()).collect();
        values.sort_by(f64::total_cmp);
        values.dedup_by(|a, b| a.to_bits() == b.to_bits());
        let class = rows
            .iter()
            .map(|r| {
                r.probs()
                    .iter()
                    .map(|v| values.binary_search_by(|probe| probe.total_cmp(v)).expect("value present"))
                    .collect()
            })
            .collect();
        let log_value = values.iter().map(|v| if *v > 0.0 { v.ln() } else { f64::NEG_INFINITY }).collect();
        Ok(LikelihoodModel { class, log_value })
    }

    pub fn classes(&self) -> usize {
        self.log_value.len()
    }

    /// `ln W^{(n)}_{x^n}(y^n)` in canonical form, using `counts` as scratch
    /// (length [`classes`](Self::classes)).
    pub fn log_likelihood_with(&self, input: &[usize], output: &[usize], counts: &mut [u32]) -> f64 {
        counts.iter_mut().for_each(|c| *c = 0);
        for (&x, &y) in input.iter().zip(output) {
            counts[self.class[x][y]] += 1;
        }
        let mut total = 0.0;
        for (&c, &lv) in counts.iter().zip(&self.log_value) {
            if c > 0 {
                total += c as f64 * lv;
            }
        }
        total
    }

    pub fn log_likelihood(&self, input: &[usize], output: &[usize]) -> f64 {
        let mut counts = vec![0; self.classes()];
        self.log_likelihood_with(input, output, &mut counts)
    }
}

/// Whether message `i` ranks among the top `list_size` likelihoods, with ties
/// going to the smaller id.
pub(crate) fn in_top_list(scores: &[f64], i: usize, list_size: usize) -> bool {
    let own = scores[i];
    let mut ahead = 0;
    for (j, &v) in scores.iter().enumerate() {
        if v > own || (v == own && j < i) {
            ahead += 1;
            if ahead >= list_size {
                return false;
            }
        }
    }
    true
}

/// The sorted top-`list_size` messages for one score vector.
pub(crate) fn top_list(scores: &[f64], list_size: usize) -> Vec<usize> {
    let rank = |a: &usize, b: &usize| scores[*b].total_cmp(&scores[*a]).then(a.cmp(b));
    let mut ids: Vec<usize> = (0..scores.len()).collect();
    if list_size < ids.len() {
        ids.select_nth_unstable_by(list_size - 1, rank);
        ids.truncate(list_size);
    }
    ids.sort_unstable();
    ids
}

/// Maximum-likelihood list decoder: each output word lists the `list_size`
/// most likely messages, ties broken toward the smaller id. Classical only.
pub fn make_list_decoder_ml(encoder: &Encoder, channel: &Channel, list_size: usize) -> Result<ListDecoder> {
    let model = LikelihoodModel::new(channel)?;
    encoder.check_alphabet(channel.input_count())?;
    let n_msgs = encoder.message_count();
    if list_size == 0 || list_size > n_msgs {
        return Err(Error::InvalidCode(format!("list size {list_size} must lie in 1..={n_msgs}")));
    }
    let n = encoder.block_length();
    let k = channel.output_dim();
    let words = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    check_budget(words.saturating_mul(n_msgs as u128).saturating_mul(n as u128))?;
    let mut counts = vec![0; model.classes()];
    let mut scores = vec![0.0; n_msgs];
    let mut y = vec![0usize; n];
    let mut lists = Vec::with_capacity(words as usize);
    for _ in 0..words {
        for (i, s) in scores.iter_mut().enumerate() {
            *s = model.log_likelihood_with(encoder.codeword(i), &y, &mut counts);
        }
        lists.push(top_list(&scores, list_size));
        increment(&mut y, k);
    }
    ListDecoder::classical(list_size, lists)
}
