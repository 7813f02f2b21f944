//! Rate sweeps with random codes, and plain-text output helpers.

use serde::Serialize;

use crate::capacity::{arimoto_blahut, CapacityResult, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::channel::Channel;
use crate::code::{converse_success_bound, error_probability, make_list_decoder_ml, mc_error_probability, random_code, ListCode};
use crate::error::{Error, Result};
use crate::exact;
use crate::renyi::{DEFAULT_GRID_POINTS, DEFAULT_S_LO};
use crate::rng::{derive_seed, Domain};

/// Default cap on `N * |Y|^n` for exact scoring.
pub const DEFAULT_EXACT_BUDGET: u128 = 10_000_000;
/// Cap on `trials * N * n` for Monte-Carlo points.
pub const MC_BUDGET: u128 = 20_000_000_000;
/// Largest message count a sweep point may use.
pub const MAX_MESSAGES: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ListRule {
    Fixed(usize),
    /// `L_n = ceil(exp(rho n))`.
    Exponential(f64),
}

impl ListRule {
    pub fn list_size(&self, n: usize) -> f64 {
        match *self {
            ListRule::Fixed(l) => l as f64,
            ListRule::Exponential(rho) => (rho * n as f64).exp().ceil(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub rates: Vec<f64>,
    pub lengths: Vec<usize>,
    pub list_rule: ListRule,
    pub trials: usize,
    pub seed: u64,
    /// Independent codebooks per point; their errors are averaged.
    pub codebooks: usize,
    pub exact_budget: u128,
}

impl SweepConfig {
    pub fn new(rates: Vec<f64>, lengths: Vec<usize>) -> Self {
        SweepConfig { rates, lengths, list_rule: ListRule::Fixed(1), trials: 10_000, seed: 0, codebooks: 1, exact_budget: DEFAULT_EXACT_BUDGET }
    }

    fn validate(&self) -> Result<()> {
        if self.rates.is_empty() || self.lengths.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one rate and one block length".into()));
        }
        if let Some(r) = self.rates.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidArgument(format!("rates must be positive, got {r}")));
        }
        if self.codebooks == 0 {
            return Err(Error::InvalidArgument("at least one codebook per point required".into()));
        }
        if self.trials / self.codebooks < 100 {
            return Err(Error::InvalidArgument("each codebook needs at least 100 Monte-Carlo trials".into()));
        }
        if self.lengths.contains(&0) {
            return Err(Error::InvalidArgument("block lengths must be at least 1".into()));
        }
        match self.list_rule {
            ListRule::Fixed(0) => Err(Error::InvalidArgument("list size must be at least 1".into())),
            ListRule::Exponential(rho) if !(rho >= 0.0 && rho.is_finite()) => {
                Err(Error::InvalidArgument(format!("list exponent must be >= 0, got {rho}")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
    Skipped,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::MonteCarlo => "monte_carlo",
            Method::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepRow {
    pub target_rate: f64,
    pub n: usize,
    #[serde(rename = "N")]
    pub messages: u64,
    #[serde(rename = "L")]
    pub list_size: u64,
    /// `(1/n) ln(N/L)` of the code actually used.
    pub rate: f64,
    pub p_e: f64,
    pub stderr: f64,
    pub one_minus_pe: f64,
    /// Smallest converse bound on `1 - P_e` over the s-grid.
    pub converse_rhs_min: f64,
    pub method: Method,
}

pub struct Sweep {
    pub capacity: CapacityResult,
    pub rows: Vec<SweepRow>,
}

/// The default s-grid used for converse columns.
pub fn default_s_grid() -> Vec<f64> {
    let last = DEFAULT_GRID_POINTS - 1;
    (0..DEFAULT_GRID_POINTS)
        .map(|k| if k == last { 0.0 } else { DEFAULT_S_LO * (last - k) as f64 / last as f64 })
        .collect()
}

/// Random-coding sweep over `rates x lengths` with codes drawn from the
/// capacity-achieving input distribution. Rows follow the order of `rates`,
/// then `lengths`.
pub fn run_sweep(channel: &Channel, config: &SweepConfig) -> Result<Sweep> {
    config.validate()?;
    if channel.rows().is_none() {
        return Err(Error::VariantMismatch);
    }
    let capacity = match arimoto_blahut(channel, DEFAULT_TOL, DEFAULT_MAX_ITER) {
        Ok(c) => c,
        Err(Error::NotConverged(best)) => *best,
        Err(e) => return Err(e),
    };
    let grid = default_s_grid();
    let k = channel.output_dim() as u128;
    let mut rows = Vec::new();
    for &rate in &config.rates {
        for &n in &config.lengths {
            let list_size = config.list_rule.list_size(n);
            let messages = (list_size * (n as f64 * rate).exp()).ceil();
            let mut row = SweepRow {
                target_rate: rate,
                n,
                messages: messages as u64,
                list_size: list_size as u64,
                rate: (messages / list_size).ln() / n as f64,
                p_e: f64::NAN,
                stderr: f64::NAN,
                one_minus_pe: f64::NAN,
                converse_rhs_min: f64::NAN,
                method: Method::Skipped,
            };
            if messages > MAX_MESSAGES {
                rows.push(row);
                continue;
            }
            let (n_msgs, l) = (messages as usize, list_size as usize);
            row.converse_rhs_min = converse_success_bound(channel, &capacity.sigma_star, n, messages, list_size, &grid)?;
            let exact_ops = k.checked_pow(n as u32).map(|w| w.saturating_mul(n_msgs as u128));
            let mc_ops = (config.trials as u128) * (n_msgs as u128) * (n as u128);
            let point = [n as u64, n_msgs as u64, l as u64];
            let code_seed = |c: usize| derive_seed(config.seed, Domain::Sweep, &[point[0], point[1], point[2], c as u64, 0]);
            let trial_seed = |c: usize| derive_seed(config.seed, Domain::Sweep, &[point[0], point[1], point[2], c as u64, 1]);
            if exact_ops.is_some_and(|ops| ops <= config.exact_budget) {
                let mut errors = Vec::with_capacity(config.codebooks);
                for c in 0..config.codebooks {
                    let encoder = random_code(&capacity.p_star, n, n_msgs, code_seed(c))?;
                    let decoder = make_list_decoder_ml(&encoder, channel, l)?;
                    errors.push(error_probability(&ListCode::new(encoder, decoder)?, channel)?.p_e);
                }
                row.p_e = exact::mean(&errors);
                row.stderr = sample_stderr(&errors, row.p_e);
                row.method = Method::Exact;
            } else if mc_ops <= MC_BUDGET {
                let per_code = config.trials / config.codebooks;
                let mut failures = 0.0;
                for c in 0..config.codebooks {
                    let encoder = random_code(&capacity.p_star, n, n_msgs, code_seed(c))?;
                    let est = mc_error_probability(&encoder, channel, l, per_code, trial_seed(c))?;
                    failures += (est.estimate * per_code as f64).round();
                }
                let total = (per_code * config.codebooks) as f64;
                row.p_e = failures / total;
                row.stderr = (row.p_e * (1.0 - row.p_e) / total).sqrt();
                row.method = Method::MonteCarlo;
            } else {
                rows.push(row);
                continue;
            }
            row.one_minus_pe = 1.0 - row.p_e;
            rows.push(row);
        }
    }
    Ok(Sweep { capacity, rows })
}

/// Standard error of the mean over codebooks; zero for a single codebook.
fn sample_stderr(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = values.len() as f64;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0) / m).sqrt()
}

/// `x` with 12 significant digits, in the style of C's `%.12g`.
pub fn format_g(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        trim_zeros(format!("{:.*}", (DIGITS - 1 - exp) as usize, x))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub const SWEEP_HEADER: &str = "target_rate,n,N,L,rate,p_e,stderr,one_minus_pe,converse_rhs_min,method";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            format_g(r.target_rate),
            r.n.to_string(),
            r.messages.to_string(),
            r.list_size.to_string(),
            format_g(r.rate),
            format_g(r.p_e),
            format_g(r.stderr),
            format_g(r.one_minus_pe),
            format_g(r.converse_rhs_min),
            r.method.as_str().to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
