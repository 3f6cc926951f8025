//! Eigenvalue statistics of the permutation action on lines.
//!
//! A type-λ unipotent matrix permutes the (p^n−1)/(p−1) projective lines;
//! each orbit of size p^r contributes one eigenvalue at every p^r-th root
//! of unity. For 0 < θ < 1, X^θ counts the eigenvalues in the half-open
//! arc (1, e^{2πiθ}]: an orbit of size p^r contributes ⌊p^r θ⌋ of them and
//! fixed lines contribute none, since the arc excludes 1. The telescoped
//! statistics
//!
//!   X_r = (p^{λ'_1+⋯+λ'_r} − p^{λ'_1+⋯+λ'_{r−1}})/(p−1)
//!
//! recover X^θ through X^θ = Σ_{r≥1} (X_{p^{r−1}+1}+⋯+X_{p^r})/p^r ⌊p^r θ⌋,
//! and their means have closed forms under both matrix models:
//! p^r (1−p^{−(n−r+1)})⋯(1−p^{−n})/(p−1) for the full unipotent model and
//! (p−1)^{r−1} C(n,r) for the triangular model. θ is kept rational so the
//! floors are exact, including at boundary eigenvalues.

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Zero};

use crate::lines::orbit_profile_formula;
use crate::measures::{gl_unipotent_dist, triangular_dist, JordanDistribution, Model};
use crate::partition::Partition;
use crate::qseries::{inv_pow, pow_of, rational_int, Rational};
use crate::{Error, Result};

/// Parameters of an arc-mean query; θ must lie strictly between 0 and 1.
#[derive(Debug, Clone)]
pub struct ArcQuery {
    pub model: Model,
    pub n: usize,
    pub p: u64,
    pub theta: Rational,
}

impl ArcQuery {
    pub fn new(model: Model, n: usize, p: u64, theta: Rational) -> Result<Self> {
        check_theta(&theta)?;
        Ok(ArcQuery { model, n, p, theta })
    }
}

fn check_theta(theta: &Rational) -> Result<()> {
    if theta <= &Rational::zero() || theta >= &Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "theta must satisfy 0 < theta < 1, got {theta}"
        )));
    }
    Ok(())
}

/// X_r(λ): zero for r beyond the largest part (the prefix sums saturate),
/// hence for all r > |λ|.
pub fn x_r(lambda: &Partition, p: u64, r: usize) -> BigInt {
    assert!(r >= 1, "X_r is defined for r >= 1");
    let hi = pow_of(p, lambda.conjugate_prefix_sum(r));
    let lo = pow_of(p, lambda.conjugate_prefix_sum(r - 1));
    (hi - lo) / BigInt::from(p - 1)
}

/// ⌊p^r θ⌋ computed exactly on rationals.
fn floor_power_theta(p: u64, r: u32, theta: &Rational) -> BigInt {
    let scaled = theta * rational_int(pow_of(p, r as usize));
    scaled.floor().to_integer()
}

/// X^θ(λ) via the telescoped X_r sums, each block divided by its orbit size.
pub fn x_theta_from_telescope(lambda: &Partition, p: u64, theta: &Rational) -> Result<BigInt> {
    check_theta(theta)?;
    let mut total = BigInt::zero();
    let mut r = 1u32;
    loop {
        let lower = p.pow(r - 1) as usize;
        if lower >= lambda.part(1) {
            break;
        }
        let upper = (p.pow(r) as usize).min(lambda.part(1));
        let mut block = BigInt::zero();
        for k in lower + 1..=upper {
            block += x_r(lambda, p, k);
        }
        let orbit_size = pow_of(p, r as usize);
        let (orbits, rem) = block.div_rem(&orbit_size);
        assert!(rem.is_zero(), "telescoped block must fill whole orbits");
        total += orbits * floor_power_theta(p, r, theta);
        r += 1;
    }
    Ok(total)
}

/// X^θ(λ) directly from the orbit profile: Σ_r orbits_r · ⌊p^r θ⌋.
pub fn x_theta_from_orbits(lambda: &Partition, p: u64, theta: &Rational) -> Result<BigInt> {
    check_theta(theta)?;
    let profile = orbit_profile_formula(lambda, p);
    let mut total = BigInt::zero();
    for (&r, orbits) in &profile.orbit_counts() {
        if r >= 1 {
            total += orbits * floor_power_theta(p, r, theta);
        }
    }
    Ok(total)
}

/// X^θ(λ), computed both ways; the two routes must agree.
pub fn x_theta(lambda: &Partition, p: u64, theta: &Rational) -> Result<BigInt> {
    let telescoped = x_theta_from_telescope(lambda, p, theta)?;
    let via_orbits = x_theta_from_orbits(lambda, p, theta)?;
    assert_eq!(
        telescoped, via_orbits,
        "X^θ routes disagree at λ = {lambda}, p = {p}, θ = {theta}"
    );
    Ok(telescoped)
}

/// Distribution of a model at (n, p).
pub fn model_dist(model: Model, n: usize, p: u64) -> Result<JordanDistribution> {
    match model {
        Model::GlUnipotent => gl_unipotent_dist(n, p),
        Model::Triangular => triangular_dist(n, p),
    }
}

/// E(X_r) by exact summation over a model distribution.
pub fn mean_xr_exact_over(dist: &JordanDistribution, r: usize) -> Rational {
    let mut total = Rational::zero();
    for (lambda, prob) in dist.iter_revlex() {
        total += prob * rational_int(x_r(lambda, dist.p(), r));
    }
    total
}

/// E(X_r) by exact summation, constructing the distribution.
pub fn mean_xr_exact(model: Model, n: usize, p: u64, r: usize) -> Result<Rational> {
    Ok(mean_xr_exact_over(&model_dist(model, n, p)?, r))
}

fn check_r_range(n: usize, r: usize) -> Result<()> {
    if r < 1 || r > n {
        return Err(Error::InvalidParameter(format!(
            "r must satisfy 1 <= r <= n = {n}, got {r}"
        )));
    }
    Ok(())
}

/// Closed form of E(X_r) under the full unipotent model:
/// p^r (1−p^{−(n−r+1)}) ⋯ (1−p^{−n}) / (p−1).
pub fn mean_xr_gl_closed(n: usize, p: u64, r: usize) -> Result<Rational> {
    check_r_range(n, r)?;
    let mut value = rational_int(pow_of(p, r)) / rational_int(BigInt::from(p - 1));
    for k in n - r + 1..=n {
        value *= Rational::one() - inv_pow(p, k);
    }
    Ok(value)
}

/// Closed form of E(X_r) under the triangular model: (p−1)^{r−1} C(n,r).
pub fn mean_xr_tn_closed(n: usize, p: u64, r: usize) -> Result<Rational> {
    check_r_range(n, r)?;
    let coeff = BigInt::from(p - 1).pow((r - 1) as u32);
    Ok(rational_int(coeff * binomial(BigInt::from(n), BigInt::from(r))))
}

/// 1 − p^{−k} for any integer k, including k ≤ 0 where p^{−k} is a positive
/// power; keeping the literal factors lets closed forms be probed outside
/// their stated ranges.
fn one_minus_inv_pow_signed(p: u64, k: i64) -> Rational {
    if k >= 0 {
        Rational::one() - inv_pow(p, k as usize)
    } else {
        Rational::one() - rational_int(pow_of(p, (-k) as usize))
    }
}

/// Closed form of E(X_r X_s) under the full unipotent model for
/// 1 ≤ r ≤ s ≤ n:
/// (p^{r+s−1}/(p−1)) [ (p/(p−1)) Π_{k=n−s−r+1}^{n} (1−p^{−k})
///                     + Σ_{a=0}^{r−1} Π_{k=n−a−s+1}^{n} (1−p^{−k}) ].
/// Evaluated literally for r+s > n as well; agreement there is reported as
/// a finding, not assumed.
pub fn second_moment_gl_closed(n: usize, p: u64, r: usize, s: usize) -> Result<Rational> {
    if r < 1 || s < r || s > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= r <= s <= n, got r = {r}, s = {s}, n = {n}"
        )));
    }
    let n = n as i64;
    let (r, s) = (r as i64, s as i64);
    let p_minus_one = rational_int(BigInt::from(p - 1));
    let prefactor = rational_int(pow_of(p, (r + s - 1) as usize)) / &p_minus_one;

    let product = |from: i64| -> Rational {
        let mut acc = Rational::one();
        for k in from..=n {
            acc *= one_minus_inv_pow_signed(p, k);
        }
        acc
    };

    let mut bracket = rational_int(BigInt::from(p)) / &p_minus_one * product(n - s - r + 1);
    for a in 0..r {
        bracket += product(n - a - s + 1);
    }
    Ok(prefactor * bracket)
}

/// E(X_r X_s) by exact summation over a distribution.
pub fn second_moment_exact_over(dist: &JordanDistribution, r: usize, s: usize) -> Rational {
    let mut total = Rational::zero();
    for (lambda, prob) in dist.iter_revlex() {
        total += prob * rational_int(x_r(lambda, dist.p(), r) * x_r(lambda, dist.p(), s));
    }
    total
}

/// Exact arc mean together with its closed-form envelope.
#[derive(Debug, Clone)]
pub struct ArcMeanBounds {
    /// Σ_λ prob(λ) X^θ(λ).
    pub exact: Rational,
    /// θ (p^n − 1)/(p − 1), the leading term.
    pub leading: Rational,
    /// Model-specific lower bound; see [`mean_arc_over`].
    pub lower: Rational,
    /// The leading term itself bounds the mean above under both models.
    pub upper: Rational,
}

impl ArcMeanBounds {
    pub fn contains_exact(&self) -> bool {
        self.lower <= self.exact && self.exact <= self.upper
    }
}

/// Arc-mean bounds over an explicit distribution.
///
/// The upper bound is termwise: ⌊p^r θ⌋ ≤ p^r θ makes X^θ ≤ θ·(total
/// lines). For the lower bound, write B_r = X_{p^{r−1}+1}+⋯+X_{p^r}; then
/// X^θ = Σ_{r≥1} (B_r/p^r)(p^r θ − {p^r θ}) exactly, the fixed lines (the
/// X_1 mass) never contributing since the arc excludes the eigenvalue 1.
/// Dropping each fractional part to 1 gives, for the full unipotent model,
///
///   E(X^θ) ≥ θ(total lines − E(X_1)) − Σ_{r≥1} E(B_r)/p^r,
///
/// evaluated with the closed-form means. The θ·E(X_1) subtraction is
/// required: without it the bound fails at finite n (already at n = 3,
/// p = 2, θ = 7/10), though it is absorbed by the error term
/// asymptotically. The triangular model uses the cruder published form
/// leading − p Σ_{r=1}^n (p−1)^{r−1} C(n,r)/r, whose r = 1 term already
/// covers the X_1 mass.
pub fn mean_arc_over(dist: &JordanDistribution, theta: &Rational) -> Result<ArcMeanBounds> {
    check_theta(theta)?;
    let n = dist.n();
    let p = dist.p();

    let mut exact = Rational::zero();
    for (lambda, prob) in dist.iter_revlex() {
        exact += prob * rational_int(x_theta(lambda, p, theta)?);
    }

    let total_lines = rational_int((pow_of(p, n) - BigInt::one()) / BigInt::from(p - 1));
    let leading = theta * &total_lines;

    let correction = match dist.model() {
        Model::GlUnipotent => {
            let mut total = theta * mean_xr_gl_closed(n, p, 1)?;
            let mut r = 1u32;
            loop {
                let lower = p.pow(r - 1) as usize;
                if lower >= n {
                    break;
                }
                let upper = (p.pow(r) as usize).min(n);
                let mut block = Rational::zero();
                for k in lower + 1..=upper {
                    block += mean_xr_gl_closed(n, p, k)?;
                }
                total += block * inv_pow(p, r as usize);
                r += 1;
            }
            total
        }
        Model::Triangular => {
            let mut total = Rational::zero();
            for r in 1..=n {
                total += mean_xr_tn_closed(n, p, r)? / rational_int(BigInt::from(r));
            }
            total * rational_int(BigInt::from(p))
        }
    };

    Ok(ArcMeanBounds {
        lower: &leading - correction,
        upper: leading.clone(),
        exact,
        leading,
    })
}

/// Arc-mean bounds for a model at (n, p).
pub fn mean_arc(query: &ArcQuery) -> Result<ArcMeanBounds> {
    mean_arc_over(&model_dist(query.model, query.n, query.p)?, &query.theta)
}
