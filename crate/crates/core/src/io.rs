//! JSON formats for channels, states and list codes.
//!
//! Channels: `{"kind":"classical","matrix":[[...],...]}` (rows are inputs) or
//! `{"kind":"cq","states":[{"re":[[...]],"im":[[...]]},...]}`.
//! States: `{"kind":"classical","probs":[...]}` or `{"kind":"quantum","re":...,"im":...}`.
//! Codes: `{"n":..,"N":..,"L":..,"encoder":[[letters]],"decoder":{...}}` with
//! 1-based message ids; a classical decoder is `{"kind":"classical","map":[[ids]]}`
//! indexed by output word, a quantum one is
//! `{"kind":"quantum","elements":[{"subset":[ids],"re":..,"im":..}]}`.
//! The imaginary part is optional everywhere and defaults to zero.
//!
//! Nothing is renormalized: values outside tolerance are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{Channel, DensityMatrix, ProbDist, State};
use crate::code::{DecoderKind, Encoder, ListCode, ListDecoder, PovmElement};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixParts {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixParts {
    fn to_matrix(&self) -> Result<CMatrix> {
        linalg::from_parts(&self.re, self.im.as_deref())
            .ok_or_else(|| Error::InvalidArgument("matrix must be square with matching real and imaginary parts".into()))
    }

    fn from_matrix(m: &CMatrix) -> Self {
        let (re, im) = linalg::to_parts(m);
        let im = if im.iter().flatten().all(|v| *v == 0.0) { None } else { Some(im) };
        MatrixParts { re, im }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelFile {
    Classical { matrix: Vec<Vec<f64>> },
    Cq { states: Vec<MatrixParts> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateFile {
    Classical { probs: Vec<f64> },
    Quantum(MatrixParts),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DecoderFile {
    Classical { map: Vec<Vec<usize>> },
    Quantum { elements: Vec<ElementFile> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementFile {
    pub subset: Vec<usize>,
    #[serde(flatten)]
    pub operator: MatrixParts,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFile {
    pub n: usize,
    #[serde(rename = "N")]
    pub messages: usize,
    #[serde(rename = "L")]
    pub list_size: usize,
    pub encoder: Vec<Vec<usize>>,
    pub decoder: DecoderFile,
}

/// Builds a validated channel from its parsed description.
pub fn validate_channel(raw: &ChannelFile) -> Result<Channel> {
    match raw {
        ChannelFile::Classical { matrix } => Channel::classical(matrix.clone()),
        ChannelFile::Cq { states } => {
            let states = states.iter().map(|s| DensityMatrix::new(s.to_matrix()?)).collect::<Result<Vec<_>>>()?;
            Channel::cq(states)
        }
    }
}

pub fn channel_to_file(channel: &Channel) -> ChannelFile {
    match (channel.rows(), channel.states()) {
        (Some(rows), _) => ChannelFile::Classical { matrix: rows.iter().map(|r| r.probs().to_vec()).collect() },
        (None, Some(states)) => {
            ChannelFile::Cq { states: states.iter().map(|s| MatrixParts::from_matrix(s.matrix())).collect() }
        }
        (None, None) => unreachable!(),
    }
}

pub fn parse_channel(text: &str) -> Result<Channel> {
    validate_channel(&serde_json::from_str(text)?)
}

pub fn parse_state(text: &str) -> Result<State> {
    match serde_json::from_str(text)? {
        StateFile::Classical { probs } => Ok(State::Classical(ProbDist::new(probs)?)),
        StateFile::Quantum(parts) => Ok(State::Quantum(DensityMatrix::new(parts.to_matrix()?)?)),
    }
}

pub fn state_to_file(state: &State) -> StateFile {
    match state {
        State::Classical(p) => StateFile::Classical { probs: p.probs().to_vec() },
        State::Quantum(rho) => StateFile::Quantum(MatrixParts::from_matrix(rho.matrix())),
    }
}

fn to_zero_based(ids: &[usize], n_msgs: usize) -> Result<Vec<usize>> {
    ids.iter()
        .map(|&id| {
            if id == 0 || id > n_msgs {
                Err(Error::InvalidCode(format!("message id {id} outside 1..={n_msgs}")))
            } else {
                Ok(id - 1)
            }
        })
        .collect()
}

pub fn code_from_file(raw: &CodeFile) -> Result<ListCode> {
    if raw.encoder.len() != raw.messages {
        return Err(Error::InvalidCode(format!("N = {} but encoder has {} codewords", raw.messages, raw.encoder.len())));
    }
    let encoder = Encoder::new(raw.n, raw.encoder.clone())?;
    let decoder = match &raw.decoder {
        DecoderFile::Classical { map } => ListDecoder::classical(
            raw.list_size,
            map.iter().map(|ids| to_zero_based(ids, raw.messages)).collect::<Result<_>>()?,
        )?,
        DecoderFile::Quantum { elements } => ListDecoder::quantum(
            raw.list_size,
            elements
                .iter()
                .map(|e| {
                    Ok(PovmElement { subset: to_zero_based(&e.subset, raw.messages)?, operator: e.operator.to_matrix()? })
                })
                .collect::<Result<_>>()?,
        )?,
    };
    ListCode::new(encoder, decoder)
}

pub fn code_to_file(code: &ListCode) -> CodeFile {
    let one_based = |ids: &[usize]| ids.iter().map(|i| i + 1).collect::<Vec<_>>();
    let decoder = match code.decoder().kind() {
        DecoderKind::Classical(lists) => DecoderFile::Classical { map: lists.iter().map(|l| one_based(l)).collect() },
        DecoderKind::Quantum(elements) => DecoderFile::Quantum {
            elements: elements
                .iter()
                .map(|e| ElementFile { subset: one_based(&e.subset), operator: MatrixParts::from_matrix(&e.operator) })
                .collect(),
        },
    };
    CodeFile {
        n: code.block_length(),
        messages: code.message_count(),
        list_size: code.list_size(),
        encoder: code.encoder().codewords().to_vec(),
        decoder,
    }
}

pub fn parse_code(text: &str) -> Result<ListCode> {
    code_from_file(&serde_json::from_str(text)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

pub fn read_channel(path: &Path) -> Result<Channel> {
    parse_channel(&read(path)?)
}

pub fn read_state(path: &Path) -> Result<State> {
    parse_state(&read(path)?)
}

pub fn read_code(path: &Path) -> Result<ListCode> {
    parse_code(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelKind;

    #[test]
    fn classical_channel_roundtrip() {
        let w = parse_channel(r#"{"kind":"classical","matrix":[[0.9,0.1],[0.1,0.9]]}"#).unwrap();
        assert_eq!(w.kind(), ChannelKind::Classical);
        let text = serde_json::to_string(&channel_to_file(&w)).unwrap();
        assert_eq!(parse_channel(&text).unwrap().rows(), w.rows());
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            parse_channel(r#"{"kind":"classical","matrix":[[0.5,0.6],[0.5,0.5]]}"#),
            Err(Error::NonStochasticRow { .. })
        ));
        assert!(matches!(parse_channel("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn cq_channel_with_optional_imaginary_part() {
        let text = r#"{"kind":"cq","states":[
            {"re":[[1,0],[0,0]]},
            {"re":[[0.5,0.5],[0.5,0.5]],"im":[[0,0],[0,0]]}]}"#;
        let w = parse_channel(text).unwrap();
        assert_eq!(w.output_dim(), 2);
        let not_hermitian = r#"{"kind":"cq","states":[
            {"re":[[1,0],[0,0]]},
            {"re":[[0.5,0.5],[0.5,0.5]],"im":[[0,0.1],[0.1,0]]}]}"#;
        assert!(matches!(parse_channel(not_hermitian), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn states() {
        assert!(parse_state(r#"{"kind":"classical","probs":[0.5,0.5]}"#).unwrap().is_classical());
        let q = parse_state(r#"{"kind":"quantum","re":[[0.5,0],[0,0.5]]}"#).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(matches!(parse_state(r#"{"kind":"quantum","re":[[0.6,0],[0,0.5]]}"#), Err(Error::TraceNotOne(_))));
    }

    #[test]
    fn code_roundtrip_uses_one_based_ids() {
        let text = r#"{"n":1,"N":2,"L":1,"encoder":[[0],[1]],
            "decoder":{"kind":"classical","map":[[1],[2]]}}"#;
        let code = parse_code(text).unwrap();
        let DecoderKind::Classical(lists) = code.decoder().kind() else { panic!() };
        assert_eq!(lists, &vec![vec![0], vec![1]]);
        let back = serde_json::to_value(code_to_file(&code)).unwrap();
        assert_eq!(back["decoder"]["map"], serde_json::json!([[1], [2]]));
        assert_eq!(back["N"], 2);
        let bad = text.replace("[[1],[2]]", "[[0],[2]]");
        assert!(parse_code(&bad).is_err());
    }

    #[test]
    fn quantum_code() {
        let text = r#"{"n":1,"N":2,"L":1,"encoder":[[0],[1]],
            "decoder":{"kind":"quantum","elements":[
                {"subset":[1],"re":[[1,0],[0,0]]},
                {"subset":[2],"re":[[0,0],[0,1]]}]}}"#;
        let code = parse_code(text).unwrap();
        assert!(!code.decoder().is_classical());
        let again = parse_code(&serde_json::to_string(&code_to_file(&code)).unwrap()).unwrap();
        assert_eq!(again.message_count(), 2);
    }
}
