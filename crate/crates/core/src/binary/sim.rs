//! Monte Carlo simulation of two-user time-shared precancellation.
//!
//! A fair coin `A_i` picks, per channel use, whose interference is
//! precancelled: `X_i = B_i xor S_{1,i}` when `A_i = 1`, else
//! `X_i = B_i xor S_{2,i}`. User 1 then sees `B` cleanly on `{A = 1}` and
//! through `S_1 xor S_2` on `{A = 0}`; user 2 the other way round. The coin
//! sequence is shared with both decoders.
//!
//! Trial `t` draws all of its randomness from [`trial_rng`]`(seed, t)`, so
//! reports do not depend on the number of worker threads.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entropy::{h2, xor_convolve};
use crate::error::{Error, Result};
use crate::rng::trial_rng;

use super::BinaryChannelSpec;

/// Largest codebook decoded by exhaustive maximum likelihood.
pub const CODEBOOK_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CodebookKind {
    /// Every bit of every codeword i.i.d. fair, redrawn each trial.
    #[default]
    Random,
    /// Messages `0..M` of a random affine code `c = mG xor d`, redrawn each trial.
    RandomLinear,
}

/// Blocklength, rate, trial count and seed of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeRun {
    n: usize,
    rate: f64,
    trials: usize,
    seed: u64,
    codebook: CodebookKind,
    codewords: usize,
}

impl SchemeRun {
    pub fn new(n: usize, rate: f64, trials: usize, seed: u64) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidRun(format!("blocklength {n} must be even and at least 2")));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidRun(format!("rate {rate} must lie in (0, 1]")));
        }
        if trials == 0 {
            return Err(Error::InvalidRun("at least one trial is required".into()));
        }
        // Shave a hair off so that e.g. n = 30, R = 0.1 yields 8 words, not 9.
        let exact = (n as f64 * rate).exp2();
        let codewords = (exact - exact * 1e-12).ceil();
        if codewords > CODEBOOK_CAP as f64 {
            return Err(Error::Infeasible {
                codewords: exact,
                cap: CODEBOOK_CAP,
            });
        }
        Ok(Self {
            n,
            rate,
            trials,
            seed,
            codebook: CodebookKind::Random,
            codewords: codewords as usize,
        })
    }

    pub fn with_codebook(mut self, kind: CodebookKind) -> Self {
        self.codebook = kind;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn codebook(&self) -> CodebookKind {
        self.codebook
    }

    /// `ceil(2^(n R))`.
    pub fn codewords(&self) -> usize {
        self.codewords
    }
}

/// Aggregate result of [`simulate_scheme`].
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeReport {
    pub n: usize,
    pub rate: f64,
    pub trials: usize,
    pub codewords: usize,
    pub crossover: CrossoverReport,
    /// Frame errors of user 1 and user 2 over all trials.
    pub frame_errors: [usize; 2],
    /// Trials in which at least one user failed.
    pub frame_errors_any: usize,
}

impl SchemeReport {
    pub fn frame_error_rate(&self, user: usize) -> f64 {
        self.frame_errors[user] as f64 / self.trials as f64
    }

    pub fn frame_error_rate_any(&self) -> f64 {
        self.frame_errors_any as f64 / self.trials as f64
    }
}

/// Empirical crossover statistics of user 1 pooled over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverReport {
    /// Total size of the precancelled sets `{A = 1}`.
    pub clean_symbols: u64,
    pub clean_flips: u64,
    /// Total size of the interfered sets `{A = 0}`.
    pub interfered_symbols: u64,
    pub interfered_flips: u64,
    /// Predicted flip probability on the interfered set, `q' * p`.
    pub predicted_crossover: f64,
    /// Predicted flip probability on the clean set, `p`.
    pub predicted_clean_crossover: f64,
}

impl CrossoverReport {
    /// Flip frequency of `Y_1` against `B` on `{A = 0}`.
    pub fn empirical_crossover(&self) -> f64 {
        ratio(self.interfered_flips, self.interfered_symbols)
    }

    pub fn empirical_clean_crossover(&self) -> f64 {
        ratio(self.clean_flips, self.clean_symbols)
    }

    /// Binomial standard deviation of [`Self::empirical_crossover`] under the prediction.
    pub fn sigma(&self) -> f64 {
        let q = self.predicted_crossover;
        (q * (1.0 - q) / self.interfered_symbols.max(1) as f64).sqrt()
    }

    /// Plug-in estimate `(1 - H(p^))/2 + (1 - H(q'^))/2`.
    pub fn empirical_mi(&self) -> f64 {
        0.5 * (1.0 - h2(self.empirical_clean_crossover())) + 0.5 * (1.0 - h2(self.empirical_crossover()))
    }

    /// `(1 - H(p))/2 + (1 - H(q' * p))/2`.
    pub fn predicted_mi(&self) -> f64 {
        0.5 * (1.0 - h2(self.predicted_clean_crossover)) + 0.5 * (1.0 - h2(self.predicted_crossover))
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Packed bit vector of fixed length.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn zeros(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut b = Self {
            words: (0..n.div_ceil(64)).map(|_| rng.random()).collect(),
        };
        b.trim(n);
        b
    }

    fn trim(&mut self, n: usize) {
        if !n.is_multiple_of(64) {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
    }

    fn set(&mut self, i: usize, bit: bool) {
        if bit {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    fn xor_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Popcount of `(self xor other) & mask`.
    fn masked_distance(&self, other: &Bits, mask: &Bits) -> u64 {
        self.words
            .iter()
            .zip(&other.words)
            .zip(&mask.words)
            .map(|((a, b), m)| ((a ^ b) & m).count_ones() as u64)
            .sum()
    }
}

/// One channel realization: the coin sequence and both received words.
struct Transmission {
    coin: Bits,
    not_coin: Bits,
    y: [Bits; 2],
}

fn transmit(spec: &BinaryChannelSpec, codeword: &Bits, n: usize, rng: &mut ChaCha8Rng) -> Transmission {
    let p = spec.noise_or_zero();
    let coin = Bits::random(n, rng);
    let mut not_coin = coin.clone();
    for w in &mut not_coin.words {
        *w = !*w;
    }
    not_coin.trim(n);

    let mut y = [Bits::zeros(n), Bits::zeros(n)];
    let mut s = [0u8; 2];
    for i in 0..n {
        spec.sample_states(rng, &mut s);
        let b = codeword.get(i) as u8;
        let x = if coin.get(i) { b ^ s[0] } else { b ^ s[1] };
        for (k, yk) in y.iter_mut().enumerate() {
            let z = if p > 0.0 { rng.random_bool(p) as u8 } else { 0 };
            yk.set(i, x ^ s[k] ^ z == 1);
        }
    }
    Transmission { coin, not_coin, y }
}

/// Per-set weight in the ML metric: the decoder maximizes
/// `sum_sets d ln(eps) + (m - d) ln(1 - eps)`, with `d` disagreements out
/// of `m` positions. Degenerate `eps in {0, 1}` become hard constraints.
#[derive(Debug, Clone, Copy)]
enum SetWeight {
    /// Every disagreement is impossible.
    NoFlips,
    /// Every agreement is impossible.
    AllFlips,
    /// Cost per disagreement, `ln((1 - eps)/eps)`.
    Soft(f64),
}

impl SetWeight {
    fn new(eps: f64) -> Self {
        if eps == 0.0 {
            Self::NoFlips
        } else if eps == 1.0 {
            Self::AllFlips
        } else {
            Self::Soft(((1.0 - eps) / eps).ln())
        }
    }

    /// Adds the contribution of `d` disagreements out of `m` to `(hard, soft)`.
    fn charge(self, d: u64, m: u64, hard: &mut u64, soft: &mut f64) {
        match self {
            Self::NoFlips => *hard += d,
            Self::AllFlips => *hard += m - d,
            Self::Soft(w) => *soft += d as f64 * w,
        }
    }
}

/// Exhaustive ML over the codebook; ties go to the lowest index.
fn decode(codebook: &[Bits], y: &Bits, sets: [(&Bits, SetWeight); 2]) -> usize {
    let sizes = [sets[0].0.count_ones(), sets[1].0.count_ones()];
    let mut best = (u64::MAX, f64::INFINITY);
    let mut best_index = 0;
    for (index, c) in codebook.iter().enumerate() {
        let mut hard = 0;
        let mut soft = 0.0;
        for ((mask, weight), m) in sets.iter().zip(sizes) {
            weight.charge(c.masked_distance(y, mask), m, &mut hard, &mut soft);
        }
        if hard < best.0 || (hard == best.0 && soft < best.1) {
            best = (hard, soft);
            best_index = index;
        }
    }
    best_index
}

fn draw_codebook(run: &SchemeRun, rng: &mut ChaCha8Rng) -> Vec<Bits> {
    let n = run.n;
    match run.codebook {
        CodebookKind::Random => (0..run.codewords).map(|_| Bits::random(n, rng)).collect(),
        CodebookKind::RandomLinear => {
            let dims = usize::BITS - (run.codewords - 1).leading_zeros();
            let generator: Vec<Bits> = (0..dims).map(|_| Bits::random(n, rng)).collect();
            let dither = Bits::random(n, rng);
            (0..run.codewords)
                .map(|m| {
                    let mut c = dither.clone();
                    for (j, g) in generator.iter().enumerate() {
                        if (m >> j) & 1 == 1 {
                            c.xor_assign(g);
                        }
                    }
                    c
                })
                .collect()
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct TrialCounts {
    clean_symbols: u64,
    clean_flips: u64,
    interfered_symbols: u64,
    interfered_flips: u64,
    errors: [bool; 2],
}

impl TrialCounts {
    fn observe(tx: &Transmission, codeword: &Bits) -> Self {
        Self {
            clean_symbols: tx.coin.count_ones(),
            clean_flips: tx.y[0].masked_distance(codeword, &tx.coin),
            interfered_symbols: tx.not_coin.count_ones(),
            interfered_flips: tx.y[0].masked_distance(codeword, &tx.not_coin),
            errors: [false; 2],
        }
    }
}

fn predicted(spec: &BinaryChannelSpec) -> Result<(f64, f64)> {
    let p = spec.noise_or_zero();
    Ok((p, xor_convolve(spec.xor_crossover()?, p)))
}

fn require_two_users(spec: &BinaryChannelSpec) -> Result<()> {
    if spec.users() == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedUsers {
            op: "simulate_scheme",
            k: spec.users(),
        })
    }
}

fn crossover_report(counts: &[TrialCounts], clean: f64, interfered: f64) -> CrossoverReport {
    CrossoverReport {
        clean_symbols: counts.iter().map(|c| c.clean_symbols).sum(),
        clean_flips: counts.iter().map(|c| c.clean_flips).sum(),
        interfered_symbols: counts.iter().map(|c| c.interfered_symbols).sum(),
        interfered_flips: counts.iter().map(|c| c.interfered_flips).sum(),
        predicted_crossover: interfered,
        predicted_clean_crossover: clean,
    }
}

/// Runs the full scheme: random codebook, encoding, channel and exhaustive
/// ML decoding at both receivers, `run.trials()` times.
pub fn simulate_scheme(spec: &BinaryChannelSpec, run: &SchemeRun) -> Result<SchemeReport> {
    require_two_users(spec)?;
    let (eps_clean, eps_interfered) = predicted(spec)?;
    let clean = SetWeight::new(eps_clean);
    let interfered = SetWeight::new(eps_interfered);

    let counts: Vec<TrialCounts> = (0..run.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(run.seed, t);
            let codebook = draw_codebook(run, &mut rng);
            let message = rng.random_range(0..codebook.len());
            let tx = transmit(spec, &codebook[message], run.n, &mut rng);
            let mut counts = TrialCounts::observe(&tx, &codebook[message]);
            let decoded = [
                decode(&codebook, &tx.y[0], [(&tx.coin, clean), (&tx.not_coin, interfered)]),
                decode(&codebook, &tx.y[1], [(&tx.not_coin, clean), (&tx.coin, interfered)]),
            ];
            counts.errors = decoded.map(|d| d != message);
            counts
        })
        .collect();

    let frame_errors = [0, 1].map(|k| counts.iter().filter(|c| c.errors[k]).count());
    Ok(SchemeReport {
        n: run.n,
        rate: run.rate,
        trials: run.trials,
        codewords: run.codewords,
        crossover: crossover_report(&counts, eps_clean, eps_interfered),
        frame_errors,
        frame_errors_any: counts.iter().filter(|c| c.errors[0] || c.errors[1]).count(),
    })
}

/// Encoding and channel only, with an uncoded uniform `B`: measures the
/// crossover statistics at blocklengths far beyond the decoding cap.
pub fn measure_crossover(spec: &BinaryChannelSpec, n: usize, trials: usize, seed: u64) -> Result<CrossoverReport> {
    require_two_users(spec)?;
    if n == 0 || trials == 0 {
        return Err(Error::InvalidRun("blocklength and trial count must be positive".into()));
    }
    let (eps_clean, eps_interfered) = predicted(spec)?;
    let counts: Vec<TrialCounts> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let b = Bits::random(n, &mut rng);
            let tx = transmit(spec, &b, n, &mut rng);
            TrialCounts::observe(&tx, &b)
        })
        .collect();
    Ok(crossover_report(&counts, eps_clean, eps_interfered))
}
