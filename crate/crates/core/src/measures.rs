//! Exact Jordan-type distributions for the two random-matrix models, and
//! the p-group counting quantities and identities they rest on.
//!
//! For a uniform unipotent element of GL(n,p) the class-λ probability is
//!
//!   p^n (1/p)_n / ( p^{Σ(λ'_i)²} Π_i (1/p)_{m_i(λ)} ),
//!
//! and for a uniform unit upper-triangular matrix it is
//!
//!   P_λ(1, 1/p, 1/p², …; 1/p) · Σ_S Π_{j=1}^n (1 − p^{−m*(Λ_j)}),
//!
//! the sum running over standard Young tableaux S of shape λ. The tableau
//! sum is evaluated by dynamic programming over the subdiagram lattice;
//! the per-tableau route is kept as a test oracle. An equivalent route
//! through the number of maximal subgroup chains of an abelian p-group of
//! type λ is exposed for cross-checking.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::limits::{MAX_GL_DIST_N, MAX_TRIANGULAR_DIST_N};
use crate::partition::{enumerate_partitions, Partition};
use crate::pgroup::AbelianPGroup;
use crate::qseries::{hl_principal, hl_principal_shifted, inv_pow, poch_inv, pow_of, rational_int, Rational};
use crate::report::CheckResult;
use crate::{Error, Result};

/// Which random-matrix model a distribution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Uniform over the unipotent elements of GL(n,p).
    GlUnipotent,
    /// Uniform over unit upper-triangular n×n matrices over F_p.
    Triangular,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::GlUnipotent => write!(f, "gl-unipotent"),
            Model::Triangular => write!(f, "triangular"),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gl" | "gl-unipotent" | "glunipotent" => Ok(Model::GlUnipotent),
            "triangular" | "t" | "tnp" => Ok(Model::Triangular),
            other => Err(Error::InvalidParameter(format!("unknown model {other:?}"))),
        }
    }
}

/// Exact distribution of Jordan types over the partitions of n.
#[derive(Debug, Clone)]
pub struct JordanDistribution {
    model: Model,
    n: usize,
    p: u64,
    probs: std::collections::BTreeMap<Partition, Rational>,
}

impl JordanDistribution {
    fn assemble(
        model: Model,
        n: usize,
        p: u64,
        prob_of: impl Fn(&Partition) -> Rational,
    ) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
        }
        if n < 1 {
            return Err(Error::InvalidParameter("distribution needs n >= 1".into()));
        }
        let mut probs = std::collections::BTreeMap::new();
        let mut total = Rational::zero();
        for lambda in enumerate_partitions(n)? {
            let prob = prob_of(&lambda);
            assert!(
                !prob.is_negative() && prob <= Rational::one(),
                "probability out of range for {lambda}"
            );
            total += &prob;
            probs.insert(lambda, prob);
        }
        assert!(total.is_one(), "{model} masses sum to {total}, not 1");
        Ok(JordanDistribution { model, n, p, probs })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Probability of Jordan type λ; panics unless |λ| = n.
    pub fn prob(&self, lambda: &Partition) -> &Rational {
        self.probs
            .get(lambda)
            .unwrap_or_else(|| panic!("{lambda} is not a partition of {}", self.n))
    }

    /// (λ, probability) pairs in reverse-lexicographic order of λ.
    pub fn iter_revlex(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.probs.iter().rev()
    }
}

/// Jordan-type distribution of a uniform unipotent element of GL(n,p).
pub fn gl_unipotent_dist(n: usize, p: u64) -> Result<JordanDistribution> {
    if n > MAX_GL_DIST_N {
        return Err(Error::BoundExceeded {
            what: "gl_unipotent_dist",
            requested: n as u128,
            limit: MAX_GL_DIST_N as u128,
        });
    }
    JordanDistribution::assemble(Model::GlUnipotent, n, p, |lambda| gl_prob(lambda, p))
}

/// Class probability from class sizes and the count of unipotent elements.
fn gl_prob(lambda: &Partition, p: u64) -> Rational {
    let n = lambda.size();
    let numerator = rational_int(pow_of(p, n)) * poch_inv(p, n);
    let mut denominator = rational_int(pow_of(p, lambda.sum_conjugate_squares()));
    for (_, mult) in lambda.multiplicities() {
        denominator *= poch_inv(p, mult);
    }
    numerator / denominator
}

/// The same probability through the Hall-Littlewood specialization,
/// p^n (1/p)_n P_λ(1/p, 1/p², …; 1/p) / p^{n(λ)}; kept separate so the two
/// transcriptions check each other.
pub fn gl_prob_hl_form(lambda: &Partition, p: u64) -> Rational {
    let n = lambda.size();
    rational_int(pow_of(p, n)) * poch_inv(p, n) * hl_principal(lambda, p)
        / rational_int(pow_of(p, lambda.n_stat()))
}

/// Jordan-form distribution of a uniform unit upper-triangular matrix.
pub fn triangular_dist(n: usize, p: u64) -> Result<JordanDistribution> {
    if n > MAX_TRIANGULAR_DIST_N {
        return Err(Error::BoundExceeded {
            what: "triangular_dist",
            requested: n as u128,
            limit: MAX_TRIANGULAR_DIST_N as u128,
        });
    }
    JordanDistribution::assemble(Model::Triangular, n, p, |lambda| {
        hl_principal_shifted(lambda, p) * tableau_weight_sum(lambda, p)
    })
}

/// Σ over standard Young tableaux S of shape λ of Π_j (1 − p^{−m*(Λ_j)}),
/// computed by memoized recursion over subdiagrams: each growth step into μ
/// through a corner in column c carries weight 1 − p^{−(#parts of μ equal to c)}.
pub fn tableau_weight_sum(lambda: &Partition, p: u64) -> Rational {
    let mut memo: HashMap<Partition, Rational> = HashMap::new();
    weight_sum_memo(lambda, p, &mut memo)
}

fn weight_sum_memo(shape: &Partition, p: u64, memo: &mut HashMap<Partition, Rational>) -> Rational {
    if shape.is_empty() {
        return Rational::one();
    }
    if let Some(value) = memo.get(shape) {
        return value.clone();
    }
    let mut total = Rational::zero();
    for (row, col) in shape.corners() {
        let weight = Rational::one() - inv_pow(p, shape.multiplicity(col));
        let smaller = shape.remove_corner_at_row(row);
        total += weight * weight_sum_memo(&smaller, p, memo);
    }
    memo.insert(shape.clone(), total.clone());
    total
}

/// Triangular class probability via the chain-count route,
/// (p−1)^n P_λ(1/p, …; 1/p) chain_λ(p) / p^{n(λ)}.
pub fn triangular_prob_chain_form(lambda: &Partition, p: u64) -> Result<Rational> {
    let n = lambda.size();
    let chains = chain_count(lambda, p)?;
    Ok(
        rational_int(BigInt::from(p - 1).pow(n as u32)) * hl_principal(lambda, p)
            * rational_int(chains)
            / rational_int(pow_of(p, lambda.n_stat())),
    )
}

/// Number of maximal-length subgroup chains in an abelian p-group of type
/// λ: p^{n(λ)} / (1−1/p)^n times the tableau weight sum. The rational
/// expression must collapse to an integer; anything else is a bug.
pub fn chain_count(lambda: &Partition, p: u64) -> Result<BigInt> {
    if lambda.size() > MAX_TRIANGULAR_DIST_N {
        return Err(Error::BoundExceeded {
            what: "chain_count",
            requested: lambda.size() as u128,
            limit: MAX_TRIANGULAR_DIST_N as u128,
        });
    }
    let n = lambda.size();
    let one_minus = Rational::one() - inv_pow(p, 1);
    let mut value = rational_int(pow_of(p, lambda.n_stat())) * tableau_weight_sum(lambda, p);
    for _ in 0..n {
        value /= &one_minus;
    }
    assert!(value.is_integer(), "chain count for {lambda} is {value}, not an integer");
    Ok(value.to_integer())
}

/// Number of subgroups of type (r) in an abelian p-group of type λ:
/// (p^{λ'_1+⋯+λ'_r} − p^{λ'_1+⋯+λ'_{r−1}}) / (p^r − p^{r−1}), which counts
/// elements of order exactly p^r and divides out the generator count of a
/// cyclic subgroup. Zero once r exceeds λ_1.
pub fn subgroup_count_type_r(lambda: &Partition, p: u64, r: usize) -> BigInt {
    assert!(r >= 1, "type (r) needs r >= 1");
    if r > lambda.part(1) {
        return BigInt::zero();
    }
    let elements = pow_of(p, lambda.conjugate_prefix_sum(r)) - pow_of(p, lambda.conjugate_prefix_sum(r - 1));
    let generators = pow_of(p, r) - pow_of(p, r - 1);
    let (quot, rem) = num_integer::Integer::div_rem(&elements, &generators);
    assert!(rem.is_zero(), "element count not divisible by generator count");
    quot
}

/// Brute-force count of subgroups of type μ in an abelian p-group of type
/// λ, by full lattice enumeration.
pub fn subgroups_of_type_oracle(lambda: &Partition, p: u64, mu: &Partition) -> Result<u64> {
    let group = AbelianPGroup::new(lambda, p)?;
    Ok(group.type_census().get(mu).copied().unwrap_or(0))
}

/// Exact check of the normalization identity
/// Σ_{λ⊢n} 1/(p^{Σ(λ'_i)²} Π_i (1/p)_{m_i(λ)}) = 1/(p^n (1/p)_n).
pub fn verify_sum_identity(n: usize, p: u64) -> Result<CheckResult> {
    let mut lhs = Rational::zero();
    for lambda in enumerate_partitions(n)? {
        lhs += class_weight(&lambda, p);
    }
    let rhs = Rational::one() / (rational_int(pow_of(p, n)) * poch_inv(p, n));
    Ok(CheckResult::new(
        "normalization-sum",
        &[("n", n.to_string()), ("p", p.to_string())],
        &lhs,
        &rhs,
        lhs == rhs,
    ))
}

/// 1/(p^{Σ(λ'_i)²} Π_i (1/p)_{m_i(λ)}), the weight each type carries in the
/// summation identities.
pub fn class_weight(lambda: &Partition, p: u64) -> Rational {
    let mut denominator = rational_int(pow_of(p, lambda.sum_conjugate_squares()));
    for (_, mult) in lambda.multiplicities() {
        denominator *= poch_inv(p, mult);
    }
    Rational::one() / denominator
}

/// Exact check of the weighted subgroup-count identity: summing the number
/// of type-μ subgroups of G_λ against the class weights over λ ⊢ n equals
/// the product of the weight of μ and the normalization constant at n−|μ|.
///
/// Subgroup counts come from the closed form when μ has a single part (or
/// is empty) and from the lattice oracle otherwise.
pub fn verify_likemac(n: usize, mu: &Partition, p: u64) -> Result<CheckResult> {
    if mu.size() > n {
        return Err(Error::InvalidParameter(format!(
            "subgroup type {mu} larger than the ambient size {n}"
        )));
    }
    let mut lhs = Rational::zero();
    for lambda in enumerate_partitions(n)? {
        let count: BigInt = if mu.is_empty() {
            BigInt::one()
        } else if mu.len() == 1 {
            subgroup_count_type_r(&lambda, p, mu.part(1))
        } else {
            BigInt::from(subgroups_of_type_oracle(&lambda, p, mu)?)
        };
        lhs += rational_int(count) * class_weight(&lambda, p);
    }
    let tail = n - mu.size();
    let rhs = class_weight(mu, p) / (rational_int(pow_of(p, tail)) * poch_inv(p, tail));
    Ok(CheckResult::new(
        "subgroup-sum",
        &[
            ("n", n.to_string()),
            ("p", p.to_string()),
            ("mu", mu.to_string()),
        ],
        &lhs,
        &rhs,
        lhs == rhs,
    ))
}

/// Exact check of subgroup/quotient duality in G_λ: the number of subgroups
/// of type ν with quotient of type μ equals the number of subgroups of type
/// μ with quotient of type ν.
pub fn verify_duality(lambda: &Partition, p: u64, mu: &Partition, nu: &Partition) -> Result<CheckResult> {
    let group = AbelianPGroup::new(lambda, p)?;
    let census = group.type_cotype_census();
    let forward = census.get(&(nu.clone(), mu.clone())).copied().unwrap_or(0);
    let swapped = census.get(&(mu.clone(), nu.clone())).copied().unwrap_or(0);
    Ok(CheckResult::new(
        "hall-duality",
        &[
            ("lambda", lambda.to_string()),
            ("p", p.to_string()),
            ("mu", mu.to_string()),
            ("nu", nu.to_string()),
        ],
        forward,
        swapped,
        forward == swapped,
    ))
}
