//! Probabilistic partition growth.
//!
//! Two samplers are provided. The division sampler grows a partition one
//! dot at a time; after n steps its law is exactly the Jordan-form law of
//! a uniform unit upper-triangular n×n matrix over F_p. From a partition λ
//! the dot goes to column 1 with probability p^{−λ'_1} and to column j > 1
//! with probability p^{−λ'_j} − p^{−λ'_{j−1}}.
//!
//! The coin sampler flips a sequence of coins, coin N landing heads with
//! probability p^{−N}; every head adds a dot to a column strictly beyond
//! the last column this coin has grown (S = j+1 with probability
//! p^{−λ'_{j+1}}, S = s > j+1 with probability p^{−λ'_s} − p^{−λ'_{s−1}}),
//! and the first tail of a coin retires it. Its limit law assigns a
//! partition λ of any size the mass
//!
//!   (1/p)_∞ / ( p^{Σ(λ'_i)²} Π_i (1/p)_{m_i(λ)} ),
//!
//! the fixed-p limit of the per-size laws: summing the size-n normalization
//! identity Σ_{λ⊢n} 1/(p^{Σ(λ'_i)²} Π (1/p)_{m_i}) = 1/(p^n (1/p)_n) over
//! all n and applying the q-exponential identity
//! Σ_{n≥0} q^n/((1−q)⋯(1−q^n)) = Π_{i≥1} (1−q^i)^{−1} at q = 1/p shows the
//! total mass is (1/p)_∞^{−1}, so (1/p)_∞ normalizes. The sampler truncates
//! at a configurable coin limit and the residual head probability
//! Σ_{i>limit} p^{−i} bounds the truncation bias.
//!
//! Sampling is exact: every transition draws a uniform integer below the
//! common denominator p^k — materialized lazily as base-p digits — and
//! selects by cumulative comparison. No floating point touches the sample
//! path. The generator is ChaCha12 seeded from a u64; per-trial streams
//! are derived with SplitMix64 so parallel aggregation is reproducible.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::measures::{class_weight, JordanDistribution};
use crate::partition::Partition;
use crate::qseries::{euler_inf, geometric_tail, inv_pow, Rational};
use crate::{Error, Result};

/// The deterministic stream generator behind every sampler.
pub type SampleRng = ChaCha12Rng;

/// Default seed for CLI-facing commands; fixed so repeat runs are
/// byte-identical.
pub const DEFAULT_SEED: u64 = 1;

/// SplitMix64 round, the documented stream-derivation mix.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Seed for worker stream `stream` derived from a master seed; stable
/// across releases.
pub fn derive_stream_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0xa076_1d64_78bd_642f)))
}

pub fn rng_for_stream(seed: u64, stream: u64) -> SampleRng {
    SampleRng::seed_from_u64(derive_stream_seed(seed, stream))
}

/// Draws a uniform integer below p^cap as lazy base-p digits and returns
/// how many leading digits are zero. P(result ≥ m) = p^{−m} for m ≤ cap,
/// which is the only statistic the growth rules consume.
fn leading_zero_digits(rng: &mut SampleRng, p: u64, cap: usize) -> usize {
    for drawn in 0..cap {
        if rng.random_range(0..p) != 0 {
            return drawn;
        }
    }
    cap
}

/// Exact column-choice law of the division rule at partition λ:
/// column 1 carries p^{−λ'_1}; column j > 1 carries p^{−λ'_j} − p^{−λ'_{j−1}}.
/// Zero entries are omitted and the values sum to exactly 1.
pub fn borodin_column_probs(lambda: &Partition, p: u64) -> BTreeMap<usize, Rational> {
    let mut probs = BTreeMap::new();
    probs.insert(1, inv_pow(p, lambda.conjugate_part(1)));
    for col in 2..=lambda.part(1) + 1 {
        let value = inv_pow(p, lambda.conjugate_part(col)) - inv_pow(p, lambda.conjugate_part(col - 1));
        if value != Rational::from_integer(0.into()) {
            probs.insert(col, value);
        }
    }
    probs
}

/// Exact column-choice law of the coin rule when the last column grown by
/// the active coin is `j` (0 before its first head): S = j+1 carries
/// p^{−λ'_{j+1}}, and S = s > j+1 carries p^{−λ'_s} − p^{−λ'_{s−1}}.
pub fn coin_column_probs(lambda: &Partition, p: u64, j: usize) -> BTreeMap<usize, Rational> {
    let mut probs = BTreeMap::new();
    probs.insert(j + 1, inv_pow(p, lambda.conjugate_part(j + 1)));
    for col in j + 2..=lambda.part(1) + 1 {
        let value = inv_pow(p, lambda.conjugate_part(col)) - inv_pow(p, lambda.conjugate_part(col - 1));
        if value != Rational::from_integer(0.into()) {
            probs.insert(col, value);
        }
    }
    probs
}

/// Shared exact sampling step for both column rules: with Z leading zero
/// digits drawn below p^{λ'_{j+1}}, the chosen column is the least
/// s ≥ j+1 with λ'_s ≤ Z. The cumulative thresholds are exactly the
/// telescoping sums of the column law.
fn choose_column(rng: &mut SampleRng, lambda: &Partition, p: u64, j: usize) -> usize {
    let cap = lambda.conjugate_part(j + 1);
    let zeros = leading_zero_digits(rng, p, cap);
    let mut col = j + 1;
    while lambda.conjugate_part(col) > zeros {
        col += 1;
    }
    col
}

/// Division-rule growth state: after k steps from the empty partition the
/// current partition has exactly k cells.
pub struct BorodinSampler {
    p: u64,
    current: Partition,
    steps: usize,
    rng: SampleRng,
}

impl BorodinSampler {
    pub fn new(p: u64, seed: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
        }
        Ok(BorodinSampler {
            p,
            current: Partition::empty(),
            steps: 0,
            rng: SampleRng::seed_from_u64(seed),
        })
    }

    pub fn current(&self) -> &Partition {
        &self.current
    }

    /// Adds one dot according to the column law.
    pub fn step(&mut self) {
        let col = choose_column(&mut self.rng, &self.current, self.p, 0);
        self.current = self.current.add_cell_in_column(col);
        self.steps += 1;
        debug_assert_eq!(self.current.size(), self.steps);
    }
}

/// A partition of n drawn by the division rule; its law is the triangular
/// Jordan distribution at (n, p).
pub fn borodin_sample(n: usize, p: u64, seed: u64) -> Result<Partition> {
    let mut sampler = BorodinSampler::new(p, seed)?;
    for _ in 0..n {
        sampler.step();
    }
    Ok(sampler.current.clone())
}

/// Coin-rule growth state: the active coin index, and the last column the
/// active coin has grown (0 before its first head).
pub struct CoinSampler {
    p: u64,
    current: Partition,
    coin: usize,
    last_col: usize,
    limit: usize,
    rng: SampleRng,
}

impl CoinSampler {
    pub fn new(p: u64, seed: u64, coin_limit: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
        }
        if coin_limit < 1 {
            return Err(Error::InvalidParameter("coin limit must be at least 1".into()));
        }
        Ok(CoinSampler {
            p,
            current: Partition::empty(),
            coin: 1,
            last_col: 0,
            limit: coin_limit,
            rng: SampleRng::seed_from_u64(seed),
        })
    }

    /// Runs coins 1..=limit to exhaustion and returns the grown partition.
    /// A coin is flipped repeatedly — every head grows a column strictly
    /// beyond its previous one — until its first tail retires it.
    pub fn run(mut self) -> Partition {
        while self.coin <= self.limit {
            let heads = leading_zero_digits(&mut self.rng, self.p, self.coin) == self.coin;
            if !heads {
                self.coin += 1;
                self.last_col = 0;
                continue;
            }
            let col = choose_column(&mut self.rng, &self.current, self.p, self.last_col);
            assert!(col > self.last_col, "coin growth must move strictly right");
            self.current = self.current.add_cell_in_column(col);
            self.last_col = col;
        }
        self.current
    }
}

/// One draw from the truncated coin process.
pub fn coin_sample(p: u64, seed: u64, coin_limit: usize) -> Result<Partition> {
    Ok(CoinSampler::new(p, seed, coin_limit)?.run())
}

/// Σ_{i>limit} p^{−i}: an upper bound on the probability that any retired
/// coin beyond the truncation point would have come up heads at all.
pub fn coin_truncation_bias(p: u64, coin_limit: usize) -> Rational {
    geometric_tail(p, coin_limit)
}

/// Mass the coin process's limit law puts on λ, with (1/p)_∞ truncated at
/// `terms` factors.
pub fn coin_limit_law_prob(lambda: &Partition, p: u64, terms: usize) -> Rational {
    euler_inf(p, terms) * class_weight(lambda, p)
}

/// Which sampler to run, in the CLI's spec-string form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SamplerSpec {
    Borodin { n: usize, p: u64 },
    Coins { p: u64, limit: usize },
}

impl fmt::Display for SamplerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerSpec::Borodin { n, p } => write!(f, "borodin:n={n},p={p}"),
            SamplerSpec::Coins { p, limit } => write!(f, "coins:p={p},limit={limit}"),
        }
    }
}

impl FromStr for SamplerSpec {
    type Err = Error;

    /// Parses `borodin:n=<n>,p=<p>` or `coins:p=<p>,limit=<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad sampler spec {s:?}"));
        let (head, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let mut fields = BTreeMap::new();
        for piece in rest.split(',') {
            let (key, value) = piece.split_once('=').ok_or_else(bad)?;
            let value: u64 = value.trim().parse().map_err(|_| bad())?;
            fields.insert(key.trim().to_string(), value);
        }
        match head.trim() {
            "borodin" => {
                let n = *fields.get("n").ok_or_else(bad)? as usize;
                let p = *fields.get("p").ok_or_else(bad)?;
                if fields.len() != 2 {
                    return Err(bad());
                }
                Ok(SamplerSpec::Borodin { n, p })
            }
            "coins" => {
                let p = *fields.get("p").ok_or_else(bad)?;
                let limit = fields.get("limit").copied().unwrap_or(64) as usize;
                if fields.len() > 2 {
                    return Err(bad());
                }
                Ok(SamplerSpec::Coins { p, limit })
            }
            _ => Err(bad()),
        }
    }
}

impl SamplerSpec {
    fn draw(&self, seed: u64, trial: u64) -> Result<Partition> {
        let stream = derive_stream_seed(seed, trial);
        match *self {
            SamplerSpec::Borodin { n, p } => borodin_sample(n, p, stream),
            SamplerSpec::Coins { p, limit } => coin_sample(p, stream, limit),
        }
    }
}

/// Seeded empirical distribution: `trials` independent draws with per-trial
/// derived streams, aggregated in parallel. Deterministic for a fixed seed
/// regardless of thread schedule.
pub fn empirical_distribution(
    spec: &SamplerSpec,
    trials: u64,
    seed: u64,
) -> Result<BTreeMap<Partition, u64>> {
    if trials < 1 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    // Validate parameters once up front so worker errors cannot hide.
    spec.draw(seed, 0)?;
    let counts = (0..trials)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<Partition, u64>, trial| {
            let sample = spec.draw(seed, trial).expect("parameters validated above");
            *acc.entry(sample).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut left, right| {
            for (key, count) in right {
                *left.entry(key).or_insert(0) += count;
            }
            left
        });
    Ok(counts)
}

/// Exact inverse-CDF sampler over a Jordan distribution. Every probability
/// has a p-power denominator (it is an integer class count over the group
/// order), so a draw is a uniform integer below the common denominator p^K
/// compared against exact cumulative thresholds.
pub struct DistributionSampler {
    p: u64,
    digits: usize,
    /// Cumulative weights scaled by p^K, paired with outcomes, ascending.
    thresholds: Vec<(num_bigint::BigInt, Partition)>,
}

impl DistributionSampler {
    pub fn new(dist: &JordanDistribution) -> Self {
        use crate::qseries::{is_power_of, pow_of};
        use num_traits::One;
        let mut digits = 0usize;
        for (lambda, prob) in dist.iter_revlex() {
            let denom = prob.denom();
            assert!(
                is_power_of(dist.p(), denom) || denom.is_one(),
                "denominator of prob({lambda}) is not a power of p"
            );
            let mut k = 0usize;
            let mut d = denom.clone();
            let p_int = num_bigint::BigInt::from(dist.p());
            while !d.is_one() {
                d /= &p_int;
                k += 1;
            }
            digits = digits.max(k);
        }
        let scale = pow_of(dist.p(), digits);
        let mut acc = num_bigint::BigInt::from(0);
        let mut thresholds = Vec::new();
        for (lambda, prob) in dist.iter_revlex() {
            let weight = (prob * crate::qseries::rational_int(scale.clone())).to_integer();
            acc += weight;
            thresholds.push((acc.clone(), lambda.clone()));
        }
        assert_eq!(acc, scale, "weights must exhaust the common denominator");
        DistributionSampler {
            p: dist.p(),
            digits,
            thresholds,
        }
    }

    /// One exact draw.
    pub fn draw(&self, rng: &mut SampleRng) -> Partition {
        let mut value = num_bigint::BigInt::from(0);
        for _ in 0..self.digits {
            value = value * self.p + rng.random_range(0..self.p);
        }
        for (threshold, lambda) in &self.thresholds {
            if &value < threshold {
                return lambda.clone();
            }
        }
        unreachable!("cumulative thresholds cover the draw range")
    }
}

/// Exact total-variation distance between empirical frequencies and an
/// exact distribution: ½ Σ_λ |count_λ/trials − prob_λ|.
pub fn total_variation(
    counts: &BTreeMap<Partition, u64>,
    trials: u64,
    dist: &JordanDistribution,
) -> Rational {
    let trials = Rational::from_integer(trials.into());
    let mut keys: std::collections::BTreeSet<Partition> = counts.keys().cloned().collect();
    for (lambda, _) in dist.iter_revlex() {
        keys.insert(lambda.clone());
    }
    let mut total = Rational::from_integer(0.into());
    for lambda in keys {
        let freq = Rational::from_integer(counts.get(&lambda).copied().unwrap_or(0).into()) / &trials;
        let prob = if lambda.size() == dist.n() {
            dist.prob(&lambda).clone()
        } else {
            Rational::from_integer(0.into())
        };
        let diff = freq - prob;
        total += if diff < Rational::from_integer(0.into()) { -diff } else { diff };
    }
    total / Rational::from_integer(2.into())
}
