//! Exact q-series arithmetic at q = 1/p.
//!
//! Provides the finite products (1/p)_r = (1−1/p)⋯(1−1/p^r), truncations of
//! the infinite product (1/p)_∞, principal specializations of
//! Hall-Littlewood polynomials, and direct evaluation of P_λ(x_1..x_n; t)
//! at rational points via the coset-sum formula
//!
//!   P_λ = Σ_{w ∈ S_n/S_n^λ} w( x^λ Π_{λ_i > λ_j} (x_i − t x_j)/(x_i − x_j) ).
//!
//! Everything is exact `BigRational` arithmetic. Repeated x-values make
//! individual coset terms blow up even though the sum is finite; in that
//! case the sum is carried out over rational functions in one formal
//! perturbation variable and evaluated at zero after cancellation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::limits::MAX_HL_VARS;
use crate::partition::Partition;
use crate::{Error, Result};

/// Arbitrary-precision rational, the carrier for every probability and
/// identity in this crate. Displays as `num/den` in lowest terms, or as a
/// bare integer when the denominator is 1.
pub type Rational = num_rational::BigRational;

/// p^k as a big integer.
pub fn pow_of(p: u64, k: usize) -> BigInt {
    BigInt::from(p).pow(k as u32)
}

/// p^{−k} as an exact rational.
pub fn inv_pow(p: u64, k: usize) -> Rational {
    Rational::new(BigInt::one(), pow_of(p, k))
}

/// Rational from an integer-valued big int.
pub fn rational_int(value: BigInt) -> Rational {
    Rational::from_integer(value)
}

/// (1/p)_r = Π_{i=1..r} (1 − p^{−i}); the empty product is 1.
pub fn poch_inv(p: u64, r: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 1..=r {
        acc *= Rational::one() - inv_pow(p, i);
    }
    acc
}

/// Truncation of (1/p)_∞ after `terms` factors.
///
/// The tail estimate |(1/p)_∞ − (1/p)_terms| ≤ p^{−terms}/(p−1) < p^{−terms}
/// holds because dropping the remaining factors inflates the product by at
/// most Σ_{i>terms} p^{−i}.
pub fn euler_inf(p: u64, terms: usize) -> Rational {
    poch_inv(p, terms)
}

/// Σ_{i>k} p^{−i} = p^{−k}/(p−1), the geometric tail used for truncation
/// bias bounds.
pub fn geometric_tail(p: u64, k: usize) -> Rational {
    inv_pow(p, k) / Rational::from_integer(BigInt::from(p - 1))
}

/// The principal specialization P_λ(1/p, 1/p², 1/p³, …; 1/p), via the
/// closed form p^{n(λ)} / (p^{Σ_j (λ'_j)²} Π_i (1/p)_{m_i(λ)}).
pub fn hl_principal(lambda: &Partition, p: u64) -> Rational {
    let numerator = rational_int(pow_of(p, lambda.n_stat()));
    let mut denominator = rational_int(pow_of(p, lambda.sum_conjugate_squares()));
    for (_, mult) in lambda.multiplicities() {
        denominator *= poch_inv(p, mult);
    }
    numerator / denominator
}

/// The shifted specialization P_λ(1, 1/p, 1/p², …; 1/p), via its own
/// product form p^{|λ|+n(λ)} Π_i 1/(p^{(λ'_i)²} (1/p)_{m_i(λ)}).
///
/// This equals p^{|λ|} times [`hl_principal`]; the factor relationship is
/// verified in tests rather than assumed, since the two closed forms are
/// transcribed independently.
pub fn hl_principal_shifted(lambda: &Partition, p: u64) -> Rational {
    let mut acc = rational_int(pow_of(p, lambda.size() + lambda.n_stat()));
    for i in 1..=lambda.part(1) {
        let col = lambda.conjugate_part(i);
        acc /= rational_int(pow_of(p, col * col));
        acc /= poch_inv(p, lambda.multiplicity(i));
    }
    acc
}

/// Evaluates P_λ(x_1, …, x_n; t) at rational points with the default
/// variable-count bound.
pub fn hl_evaluate(lambda: &Partition, xs: &[Rational], t: &Rational) -> Result<Rational> {
    hl_evaluate_bounded(lambda, xs, t, MAX_HL_VARS)
}

/// Evaluates P_λ(x_1, …, x_n; t) with an explicit variable-count bound.
///
/// The sum runs over distinct rearrangements of λ padded with zeros (one
/// coset representative each). With pairwise distinct x-values every
/// denominator is nonzero and the evaluation is direct; with repeated
/// values the terms are summed as rational functions in a perturbation
/// variable and the (finite) limit is taken after exact cancellation.
pub fn hl_evaluate_bounded(
    lambda: &Partition,
    xs: &[Rational],
    t: &Rational,
    max_vars: usize,
) -> Result<Rational> {
    let n = xs.len();
    if n > max_vars {
        return Err(Error::BoundExceeded {
            what: "hl_evaluate variables",
            requested: n as u128,
            limit: max_vars as u128,
        });
    }
    if lambda.len() > n {
        return Err(Error::InvalidParameter(format!(
            "partition {lambda} has more parts than the {n} variables supplied"
        )));
    }

    let mut padded: Vec<usize> = lambda.parts().to_vec();
    padded.resize(n, 0);
    // Group sizes of equal exponents, in the descending order of `padded`.
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &value in &padded {
        match groups.last_mut() {
            Some((gv, count)) if *gv == value => *count += 1,
            _ => groups.push((value, 1)),
        }
    }

    let has_duplicates = (0..n).any(|a| (a + 1..n).any(|b| xs[a] == xs[b]));
    if !has_duplicates {
        let mut total = Rational::zero();
        for_each_rearrangement(&groups, n, &mut |exponents| {
            let mut term = Rational::one();
            for (idx, &e) in exponents.iter().enumerate() {
                if e > 0 {
                    term *= xs[idx].pow(e as i32);
                }
            }
            for a in 0..n {
                for b in 0..n {
                    if exponents[a] > exponents[b] {
                        term *= (&xs[a] - t * &xs[b]) / (&xs[a] - &xs[b]);
                    }
                }
            }
            total += term;
        });
        return Ok(total);
    }

    // Perturb x_k to x_k + (k+1)·ε and sum exactly in Q(ε).
    let mut total = RatFn::zero();
    for_each_rearrangement(&groups, n, &mut |exponents| {
        let mut num = Poly::constant(Rational::one());
        let mut den = Poly::constant(Rational::one());
        for (idx, &e) in exponents.iter().enumerate() {
            let base = Poly::linear(xs[idx].clone(), Rational::from_integer(BigInt::from(idx as i64 + 1)));
            for _ in 0..e {
                num = num.mul(&base);
            }
        }
        for a in 0..n {
            for b in 0..n {
                if exponents[a] > exponents[b] {
                    let ca = Rational::from_integer(BigInt::from(a as i64 + 1));
                    let cb = Rational::from_integer(BigInt::from(b as i64 + 1));
                    num = num.mul(&Poly::linear(&xs[a] - t * &xs[b], &ca - t * &cb));
                    den = den.mul(&Poly::linear(&xs[a] - &xs[b], ca - cb));
                }
            }
        }
        total = total.add(&RatFn { num, den });
    });
    let reduced = total.reduce();
    let den_at_zero = reduced.den.at_zero();
    if den_at_zero.is_zero() {
        return Err(Error::Degenerate(
            "coset sum does not cancel at the supplied points".into(),
        ));
    }
    Ok(reduced.num.at_zero() / den_at_zero)
}

/// Calls `visit` with each distinct rearrangement of the grouped exponents
/// over `n` variable slots (equivalently, one representative per coset of
/// the stabilizer).
fn for_each_rearrangement(groups: &[(usize, usize)], n: usize, visit: &mut impl FnMut(&[usize])) {
    let mut exponents = vec![usize::MAX; n];
    fill_group(groups, 0, n, &mut exponents, visit);
}

fn fill_group(
    groups: &[(usize, usize)],
    g: usize,
    n: usize,
    exponents: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if g == groups.len() {
        visit(exponents);
        return;
    }
    let (value, count) = groups[g];
    let free: Vec<usize> = (0..n).filter(|&i| exponents[i] == usize::MAX).collect();
    let mut chosen = Vec::with_capacity(count);
    choose(&free, 0, count, &mut chosen, &mut |subset: &[usize]| {
        for &idx in subset {
            exponents[idx] = value;
        }
        fill_group(groups, g + 1, n, exponents, visit);
        for &idx in subset {
            exponents[idx] = usize::MAX;
        }
    });
}

fn choose(
    pool: &[usize],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        visit(chosen);
        return;
    }
    for idx in start..=pool.len().saturating_sub(remaining) {
        chosen.push(pool[idx]);
        choose(pool, idx + 1, remaining - 1, chosen, visit);
        chosen.pop();
    }
}

/// Dense univariate polynomial over the rationals, ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
struct Poly(Vec<Rational>);

impl Poly {
    fn zero() -> Self {
        Poly(Vec::new())
    }

    fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    fn linear(c0: Rational, c1: Rational) -> Self {
        let mut poly = Poly(vec![c0, c1]);
        poly.trim();
        poly
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn at_zero(&self) -> Rational {
        self.0.first().cloned().unwrap_or_else(Rational::zero)
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut coeffs = vec![Rational::zero(); self.0.len().max(other.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            coeffs[i] += c;
        }
        let mut poly = Poly(coeffs);
        poly.trim();
        poly
    }

    fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut poly = Poly(coeffs);
        poly.trim();
        poly
    }

    /// Polynomial remainder; the divisor must be nonzero.
    fn rem(&self, divisor: &Poly) -> Poly {
        assert!(!divisor.is_zero());
        let mut rem = self.clone();
        let lead = divisor.0.last().unwrap().clone();
        while !rem.is_zero() && rem.degree() >= divisor.degree() {
            let shift = rem.degree() - divisor.degree();
            let factor = rem.0.last().unwrap() / &lead;
            for (i, c) in divisor.0.iter().enumerate() {
                let updated = &rem.0[i + shift] - &(c * &factor);
                rem.0[i + shift] = updated;
            }
            rem.trim();
        }
        rem
    }

    /// Monic gcd by the Euclidean algorithm.
    fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        if x.is_zero() {
            return x;
        }
        let lead = x.0.last().unwrap().clone();
        for c in &mut x.0 {
            *c /= lead.clone();
        }
        x
    }

    /// Exact quotient; panics on a nonzero remainder.
    fn div_exact(&self, divisor: &Poly) -> Poly {
        assert!(!divisor.is_zero());
        let mut rem = self.clone();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(divisor.0.len()) + 1];
        let lead = divisor.0.last().unwrap().clone();
        while !rem.is_zero() && rem.degree() >= divisor.degree() {
            let shift = rem.degree() - divisor.degree();
            let factor = rem.0.last().unwrap() / &lead;
            quot[shift] = factor.clone();
            for (i, c) in divisor.0.iter().enumerate() {
                let updated = &rem.0[i + shift] - &(c * &factor);
                rem.0[i + shift] = updated;
            }
            rem.trim();
        }
        assert!(rem.is_zero(), "inexact polynomial division");
        let mut poly = Poly(quot);
        poly.trim();
        poly
    }
}

/// Quotient of two polynomials in the perturbation variable.
struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::constant(Rational::one()),
        }
    }

    fn add(&self, other: &RatFn) -> RatFn {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFn { num, den }.reduce()
    }

    fn reduce(self) -> RatFn {
        if self.num.is_zero() {
            return RatFn {
                num: Poly::zero(),
                den: Poly::constant(Rational::one()),
            };
        }
        let g = Poly::gcd(&self.num, &self.den);
        if g.degree() == 0 {
            return self;
        }
        RatFn {
            num: self.num.div_exact(&g),
            den: self.den.div_exact(&g),
        }
    }
}

/// True when `value` is an integer and a pure power of p; used by callers
/// asserting p-adic structure.
pub fn is_power_of(p: u64, value: &BigInt) -> bool {
    if value.is_negative() || value.is_zero() {
        return false;
    }
    let p = BigInt::from(p);
    let mut v = value.clone();
    while v > BigInt::one() {
        if (&v % &p).is_zero() {
            v /= &p;
        } else {
            return false;
        }
    }
    v.is_one()
}
