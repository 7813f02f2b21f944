//! List codes over classical and cq channels.
//!
//! Messages are indexed from 0 internally (the JSON format uses 1-based ids).
//! A classical list decoder is a total map from output words (mixed-radix
//! index, last letter least significant) to sorted lists of `L` distinct
//! messages; a quantum one is a POVM indexed by sorted `L`-subsets.

mod converse;
mod eval;
mod lift;
mod ml;
mod sim;

pub use converse::{
    build_rst, converse_success_bound, data_processing_check, verify_converse_bound, BoundReport, BoundRow,
    DataProcessing, RstSummary, VIOLATION_SLACK,
};
pub use eval::{error_probability, message_errors, CodeMetrics, EXACT_BUDGET};
pub use lift::lift_code;
pub use ml::{make_list_decoder_ml, LikelihoodModel};
pub use sim::{derandomize, mc_error_probability, random_code, DerandomizeReport, McEstimate};

use std::collections::BTreeSet;

use crate::channel::{Channel, ChannelKind, MATRIX_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Spectrum};

/// Codewords of block length `n`, one per message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoder {
    n: usize,
    codewords: Vec<Vec<usize>>,
}

impl Encoder {
    pub fn new(n: usize, codewords: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCode("block length must be at least 1".into()));
        }
        if codewords.is_empty() {
            return Err(Error::InvalidCode("encoder has no messages".into()));
        }
        if let Some(i) = codewords.iter().position(|w| w.len() != n) {
            return Err(Error::InvalidCode(format!("codeword {} has length {}, expected {n}", i + 1, codewords[i].len())));
        }
        Ok(Encoder { n, codewords })
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    pub fn message_count(&self) -> usize {
        self.codewords.len()
    }

    pub fn codeword(&self, message: usize) -> &[usize] {
        &self.codewords[message]
    }

    pub fn codewords(&self) -> &[Vec<usize>] {
        &self.codewords
    }

    fn check_alphabet(&self, inputs: usize) -> Result<()> {
        for (i, w) in self.codewords.iter().enumerate() {
            if let Some(&x) = w.iter().find(|&&x| x >= inputs) {
                return Err(Error::InvalidCode(format!("codeword {} uses input {x}, alphabet has {inputs}", i + 1)));
            }
        }
        Ok(())
    }
}

/// One element of a list-decoding POVM.
#[derive(Clone, Debug)]
pub struct PovmElement {
    pub subset: Vec<usize>,
    pub operator: CMatrix,
}

#[derive(Clone, Debug)]
pub enum DecoderKind {
    /// `lists[y]` is the sorted list decoded from output word `y`.
    Classical(Vec<Vec<usize>>),
    Quantum(Vec<PovmElement>),
}

#[derive(Clone, Debug)]
pub struct ListDecoder {
    list_size: usize,
    kind: DecoderKind,
}

impl ListDecoder {
    pub fn classical(list_size: usize, lists: Vec<Vec<usize>>) -> Result<Self> {
        check_list_size(list_size)?;
        if lists.is_empty() {
            return Err(Error::InvalidCode("decoder map is empty".into()));
        }
        for (y, list) in lists.iter().enumerate() {
            check_subset(list, list_size).map_err(|e| Error::InvalidCode(format!("output word {y}: {e}")))?;
        }
        Ok(ListDecoder { list_size, kind: DecoderKind::Classical(lists) })
    }

    /// Validates positivity of each element, distinct subsets and completeness.
    pub fn quantum(list_size: usize, elements: Vec<PovmElement>) -> Result<Self> {
        check_list_size(list_size)?;
        let Some(first) = elements.first() else {
            return Err(Error::InvalidCode("POVM has no elements".into()));
        };
        let d = first.operator.nrows();
        let mut seen = BTreeSet::new();
        let mut total = CMatrix::zeros(d, d);
        for (k, e) in elements.iter().enumerate() {
            check_subset(&e.subset, list_size).map_err(|msg| Error::InvalidCode(format!("element {k}: {msg}")))?;
            if !seen.insert(e.subset.clone()) {
                return Err(Error::InvalidCode(format!("element {k}: subset {:?} repeated", e.subset)));
            }
            if e.operator.nrows() != d || e.operator.ncols() != d {
                return Err(Error::DimensionMismatch { expected: d, got: e.operator.nrows() });
            }
            let dev = linalg::hermitian_deviation(&e.operator);
            if dev > MATRIX_TOL {
                return Err(Error::NotHermitian(dev));
            }
            let min = Spectrum::of_hermitian(&e.operator).values.into_iter().fold(f64::INFINITY, f64::min);
            if min < -MATRIX_TOL {
                return Err(Error::NotPositiveSemidefinite(min));
            }
            total += &e.operator;
        }
        let residual = linalg::max_abs_diff(&total, &linalg::identity(d));
        if residual > MATRIX_TOL {
            return Err(Error::InvalidCode(format!("POVM elements sum to identity only within {residual:e}")));
        }
        Ok(ListDecoder { list_size, kind: DecoderKind::Quantum(elements) })
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn kind(&self) -> &DecoderKind {
        &self.kind
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.kind, DecoderKind::Classical(_))
    }

    fn max_message(&self) -> Option<usize> {
        match &self.kind {
            DecoderKind::Classical(lists) => lists.iter().flatten().copied().max(),
            DecoderKind::Quantum(elements) => elements.iter().flat_map(|e| e.subset.iter()).copied().max(),
        }
    }
}

fn check_list_size(list_size: usize) -> Result<()> {
    if list_size == 0 {
        Err(Error::InvalidCode("list size must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_subset(list: &[usize], list_size: usize) -> std::result::Result<(), String> {
    if list.len() != list_size {
        return Err(format!("list has {} entries, expected {list_size}", list.len()));
    }
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return Err("list must be strictly increasing".into());
    }
    Ok(())
}

/// An encoder together with a list decoder over the same messages.
#[derive(Clone, Debug)]
pub struct ListCode {
    encoder: Encoder,
    decoder: ListDecoder,
}

impl ListCode {
    pub fn new(encoder: Encoder, decoder: ListDecoder) -> Result<Self> {
        let n_msgs = encoder.message_count();
        if decoder.list_size() > n_msgs {
            return Err(Error::InvalidCode(format!(
                "list size {} exceeds message count {n_msgs}",
                decoder.list_size()
            )));
        }
        if let Some(m) = decoder.max_message() {
            if m >= n_msgs {
                return Err(Error::InvalidCode(format!("decoder refers to message {} of {n_msgs}", m + 1)));
            }
        }
        Ok(ListCode { encoder, decoder })
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    pub fn decoder(&self) -> &ListDecoder {
        &self.decoder
    }

    pub fn block_length(&self) -> usize {
        self.encoder.block_length()
    }

    pub fn message_count(&self) -> usize {
        self.encoder.message_count()
    }

    pub fn list_size(&self) -> usize {
        self.decoder.list_size()
    }

    /// Checks that the code can be used over `channel`: matching variant,
    /// input letters in range, and a decoder covering the whole output space.
    pub fn check_channel(&self, channel: &Channel) -> Result<()> {
        self.encoder.check_alphabet(channel.input_count())?;
        let n = self.block_length() as u32;
        let space = (channel.output_dim() as u128).checked_pow(n).unwrap_or(u128::MAX);
        match (&self.decoder.kind, channel.kind()) {
            (DecoderKind::Classical(lists), ChannelKind::Classical) => {
                if lists.len() as u128 != space {
                    return Err(Error::InvalidCode(format!(
                        "decoder covers {} output words, channel has {space}",
                        lists.len()
                    )));
                }
                Ok(())
            }
            (DecoderKind::Quantum(elements), ChannelKind::Cq) => {
                let d = elements[0].operator.nrows() as u128;
                if d != space {
                    return Err(Error::DimensionMismatch { expected: space as usize, got: d as usize });
                }
                Ok(())
            }
            _ => Err(Error::VariantMismatch),
        }
    }
}
