#![allow(dead_code)]

use listcap_core::channel::{Channel, DensityMatrix, ProbDist, State};
use listcap_core::code::{Encoder, ListCode, ListDecoder, PovmElement};
use listcap_core::linalg::CMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Flat Dirichlet draw.
pub fn random_probs<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|v| v / total).collect()
}

pub fn random_dist<R: Rng>(rng: &mut R, k: usize) -> ProbDist {
    ProbDist::new(random_probs(rng, k)).unwrap()
}

pub fn random_classical<R: Rng>(rng: &mut R, max_x: usize, max_y: usize) -> Channel {
    let x = rng.random_range(2..=max_x);
    let y = rng.random_range(2..=max_y);
    Channel::classical((0..x).map(|_| random_probs(rng, y)).collect()).unwrap()
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn ginibre<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian(rng), gaussian(rng)))
}

/// `G G^dagger / Tr` for a `d x rank` Ginibre matrix.
pub fn random_density<R: Rng>(rng: &mut R, d: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, d, rank);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.map(|z| z / tr)).unwrap()
}

pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    ginibre(rng, d, d).qr().q()
}

pub fn random_cq<R: Rng>(rng: &mut R, max_x: usize, max_d: usize, full_rank: bool) -> Channel {
    let x = rng.random_range(2..=max_x);
    let d = rng.random_range(2..=max_d);
    let states = (0..x)
        .map(|_| {
            let rank = if full_rank { d } else { rng.random_range(1..=d) };
            random_density(rng, d, rank)
        })
        .collect();
    Channel::cq(states).unwrap()
}

/// A cq channel of mutually commuting states `U diag(p_x) U^dagger` and the
/// classical channel of the diagonals `p_x`.
pub fn commuting_pair<R: Rng>(rng: &mut R, max_x: usize, max_d: usize) -> (Channel, Channel) {
    let x = rng.random_range(2..=max_x);
    let d = rng.random_range(2..=max_d);
    let u = random_unitary(rng, d);
    let rows: Vec<Vec<f64>> = (0..x).map(|_| random_probs(rng, d)).collect();
    let states = rows
        .iter()
        .map(|p| {
            let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                d,
                p.iter().map(|&v| Complex64::new(v, 0.0)),
            ));
            DensityMatrix::new(&u * diag * u.adjoint()).unwrap()
        })
        .collect();
    (Channel::cq(states).unwrap(), Channel::classical(rows).unwrap())
}

pub fn random_encoder<R: Rng>(rng: &mut R, inputs: usize, n: usize, messages: usize) -> Encoder {
    Encoder::new(n, (0..messages).map(|_| (0..n).map(|_| rng.random_range(0..inputs)).collect()).collect()).unwrap()
}

/// A uniformly random `size`-subset of `0..universe`, sorted.
pub fn random_subset<R: Rng>(rng: &mut R, universe: usize, size: usize) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..universe).collect();
    for i in 0..size {
        let j = rng.random_range(i..universe);
        ids.swap(i, j);
    }
    ids.truncate(size);
    ids.sort_unstable();
    ids
}

/// Random total classical list decoder over `words` output words.
pub fn random_classical_decoder<R: Rng>(rng: &mut R, words: usize, messages: usize, list_size: usize) -> ListDecoder {
    ListDecoder::classical(list_size, (0..words).map(|_| random_subset(rng, messages, list_size)).collect()).unwrap()
}

/// Projective measurement in a random basis, with basis vectors dealt out to
/// messages at random (some messages may get the zero operator).
pub fn random_projective_decoder<R: Rng>(rng: &mut R, dim: usize, messages: usize) -> ListDecoder {
    let u = random_unitary(rng, dim);
    let mut ops = vec![CMatrix::zeros(dim, dim); messages];
    for k in 0..dim {
        let owner = if k < messages { k } else { rng.random_range(0..messages) };
        let v = u.column(k);
        ops[owner] += v * v.adjoint();
    }
    let elements = ops.into_iter().enumerate().map(|(i, operator)| PovmElement { subset: vec![i], operator }).collect();
    ListDecoder::quantum(1, elements).unwrap()
}

/// A conventional (list size 1) code over a random cq channel with `d^n <= max_dim`.
pub fn random_quantum_base<R: Rng>(rng: &mut R, max_d: usize, max_n: usize, max_dim: usize) -> (Channel, ListCode) {
    loop {
        let channel = random_cq(rng, 3, max_d, false);
        let d = channel.output_dim();
        let n = rng.random_range(1..=max_n);
        let dim = d.pow(n as u32);
        if dim > max_dim {
            continue;
        }
        let messages = rng.random_range(1..=4);
        let encoder = random_encoder(rng, channel.input_count(), n, messages);
        let decoder = random_projective_decoder(rng, dim, messages);
        return (channel, ListCode::new(encoder, decoder).unwrap());
    }
}

pub fn uniform_state(k: usize) -> State {
    State::Classical(ProbDist::uniform(k))
}

/// Binary entropy in nats.
pub fn h2(q: f64) -> f64 {
    -q * q.ln() - (1.0 - q) * (1.0 - q).ln()
}
