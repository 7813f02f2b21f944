use super::{DecoderKind, Encoder, ListCode, ListDecoder, PovmElement};
use crate::error::{Error, Result};

/// Turns a conventional code into an `L`-list code with `N * L` messages.
///
/// Message `j L + r` is sent with the base codeword of `j`, and the base
/// decision region (or POVM element) of `j` decodes to the block
/// `{j L, ..., j L + L - 1}`. The error probability is unchanged.
pub fn lift_code(base: &ListCode, list_size: usize) -> Result<ListCode> {
    if base.list_size() != 1 {
        return Err(Error::InvalidCode(format!("base code must have list size 1, has {}", base.list_size())));
    }
    if list_size == 0 {
        return Err(Error::InvalidCode("list size must be at least 1".into()));
    }
    if list_size == 1 {
        return Ok(base.clone());
    }
    let block = |j: usize| (j * list_size..(j + 1) * list_size).collect::<Vec<_>>();
    let codewords = base
        .encoder()
        .codewords()
        .iter()
        .flat_map(|w| std::iter::repeat_n(w.clone(), list_size))
        .collect();
    let encoder = Encoder::new(base.block_length(), codewords)?;
    let decoder = match base.decoder().kind() {
        DecoderKind::Classical(lists) => {
            ListDecoder::classical(list_size, lists.iter().map(|l| block(l[0])).collect())?
        }
        DecoderKind::Quantum(elements) => ListDecoder::quantum(
            list_size,
            elements
                .iter()
                .map(|e| PovmElement { subset: block(e.subset[0]), operator: e.operator.clone() })
                .collect(),
        )?,
    };
    ListCode::new(encoder, decoder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Channel;
    use crate::code::{error_probability, make_list_decoder_ml};

    #[test]
    fn bsc_lift_keeps_error() {
        let w = Channel::binary_symmetric(0.1);
        let enc = Encoder::new(1, vec![vec![0], vec![1]]).unwrap();
        let base = ListCode::new(enc.clone(), make_list_decoder_ml(&enc, &w, 1).unwrap()).unwrap();
        let lifted = lift_code(&base, 3).unwrap();
        assert_eq!(lifted.message_count(), 6);
        assert_eq!(lifted.list_size(), 3);
        let a = error_probability(&base, &w).unwrap().p_e;
        let b = error_probability(&lifted, &w).unwrap().p_e;
        assert_eq!(a.to_bits(), b.to_bits());
        assert!((b - 0.1).abs() < 1e-15);
    }

    #[test]
    fn list_size_one_is_identity() {
        let enc = Encoder::new(1, vec![vec![0], vec![1]]).unwrap();
        let base = ListCode::new(enc, ListDecoder::classical(1, vec![vec![1], vec![0]]).unwrap()).unwrap();
        let same = lift_code(&base, 1).unwrap();
        assert_eq!(same.encoder(), base.encoder());
    }

    #[test]
    fn rejects_list_base() {
        let enc = Encoder::new(1, vec![vec![0], vec![1]]).unwrap();
        let base = ListCode::new(enc, ListDecoder::classical(2, vec![vec![0, 1], vec![0, 1]]).unwrap()).unwrap();
        assert!(lift_code(&base, 2).is_err());
    }
}
