//! The permutation action of unipotent matrices on projective lines:
//! closed-form orbit profiles, plus the brute-force oracles (line-orbit
//! enumeration, full matrix censuses, fixed complete flags).
//!
//! For a unipotent matrix of type λ every orbit on lines has size p^r, and
//! the number of LINES lying in orbits of size p^r is
//!
//!   (p^{λ'_1} − 1)/(p − 1)                                  for r = 0,
//!   (p^{λ'_1+⋯+λ'_{p^r}} − p^{λ'_1+⋯+λ'_{p^{r−1}}})/(p − 1) for r ≥ 1,
//!
//! the difference of the fixed-line counts of M^{p^r} and M^{p^{r−1}}.
//! Orbit counts follow by dividing by p^r; the enumeration oracle checks
//! both readings, and the divisibility is asserted.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::limits::{
    cell_cap, DEFAULT_GL_CELLS, DEFAULT_LINE_CELLS, DEFAULT_TRIANGULAR_CELLS, MAX_FLAG_N,
    MAX_FLAG_P,
};
use crate::matrix::{check_oracle_field, mod_inverse, MatrixFp};
use crate::partition::Partition;
use crate::qseries::{is_power_of, pow_of};
use crate::{Error, Result};

/// How many projective lines lie in orbits of each size p^r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineOrbitProfile {
    p: u64,
    /// r ↦ number of lines in orbits of size p^r; zero entries omitted.
    lines: BTreeMap<u32, BigInt>,
}

impl LineOrbitProfile {
    pub fn new(p: u64, lines: BTreeMap<u32, BigInt>) -> Self {
        let profile = LineOrbitProfile {
            p,
            lines: lines.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        };
        for (&r, count) in &profile.lines {
            let (orbits, rem) = count.div_rem(&pow_of(p, r as usize));
            assert!(rem.is_zero() && !orbits.is_zero(), "lines in size-p^{r} orbits must fill whole orbits");
        }
        profile
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// r ↦ line count.
    pub fn lines(&self) -> &BTreeMap<u32, BigInt> {
        &self.lines
    }

    pub fn lines_at(&self, r: u32) -> BigInt {
        self.lines.get(&r).cloned().unwrap_or_else(BigInt::zero)
    }

    /// r ↦ orbit count = lines_r / p^r.
    pub fn orbit_counts(&self) -> BTreeMap<u32, BigInt> {
        self.lines
            .iter()
            .map(|(&r, count)| (r, count / pow_of(self.p, r as usize)))
            .collect()
    }

    pub fn total_lines(&self) -> BigInt {
        self.lines.values().sum()
    }
}

/// p^k saturated at `cap`; prefix sums of λ' only need the exact value of
/// p^k while it is below λ_1.
fn pow_capped(p: u64, k: u32, cap: usize) -> usize {
    let mut acc: usize = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(p as usize);
        if acc >= cap {
            return cap;
        }
    }
    acc
}

/// Closed-form orbit profile of the type-λ action on the lines of F_p^n.
pub fn orbit_profile_formula(lambda: &Partition, p: u64) -> LineOrbitProfile {
    let p_minus_one = BigInt::from(p - 1);
    let mut lines = BTreeMap::new();
    let fixed = (pow_of(p, lambda.conjugate_part(1)) - BigInt::one()) / &p_minus_one;
    if !fixed.is_zero() {
        lines.insert(0u32, fixed);
    }
    let cap = lambda.part(1) + 1;
    let mut r = 1u32;
    loop {
        let lower = pow_capped(p, r - 1, cap);
        if lower >= lambda.part(1) {
            break;
        }
        let upper = pow_capped(p, r, cap);
        let count = (pow_of(p, lambda.conjugate_prefix_sum(upper))
            - pow_of(p, lambda.conjugate_prefix_sum(lower)))
            / &p_minus_one;
        if !count.is_zero() {
            lines.insert(r, count);
        }
        r += 1;
    }
    LineOrbitProfile::new(p, lines)
}

/// Canonical projective representatives: nonzero vectors whose first
/// nonzero coordinate is 1, in lexicographic order of the full vector.
fn canonical_lines(p: u64, n: usize) -> Vec<Vec<u64>> {
    let mut reps = Vec::new();
    for lead in (0..n).rev() {
        // first nonzero coordinate at position `lead`
        let free = n - lead - 1;
        let count = p.pow(free as u32);
        for code in 0..count {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            let mut rest = code;
            for idx in (lead + 1..n).rev() {
                v[idx] = rest % p;
                rest /= p;
            }
            reps.push(v);
        }
    }
    reps.sort();
    reps
}

fn canonicalize(mut v: Vec<u64>, p: u64) -> Vec<u64> {
    let lead = v.iter().position(|&c| c != 0).expect("zero vector has no line");
    let scale = mod_inverse(v[lead], p);
    for c in &mut v {
        *c = *c * scale % p;
    }
    v
}

/// Follows the permutation a matrix induces on lines and tallies orbit
/// sizes; every orbit size must be a power of p.
pub fn brute_force_line_orbits(m: &MatrixFp) -> Result<LineOrbitProfile> {
    let p = m.p();
    let n = m.dim();
    let line_count = (pow_of(p, n) - BigInt::one()) / BigInt::from(p - 1);
    let cap = BigInt::from(cell_cap(DEFAULT_LINE_CELLS));
    if line_count > cap {
        return Err(Error::BoundExceeded {
            what: "projective line enumeration",
            requested: line_count.try_into().unwrap_or(u128::MAX),
            limit: cell_cap(DEFAULT_LINE_CELLS) as u128,
        });
    }
    let reps = canonical_lines(p, n);
    let index: BTreeMap<Vec<u64>, usize> =
        reps.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let successor: Vec<usize> = reps
        .iter()
        .map(|v| index[&canonicalize(m.apply(v), p)])
        .collect();

    let mut seen = vec![false; reps.len()];
    let mut lines: BTreeMap<u32, BigInt> = BTreeMap::new();
    for start in 0..reps.len() {
        if seen[start] {
            continue;
        }
        let mut size = 0u64;
        let mut cursor = start;
        loop {
            seen[cursor] = true;
            size += 1;
            cursor = successor[cursor];
            if cursor == start {
                break;
            }
        }
        let size_int = BigInt::from(size);
        assert!(
            is_power_of(p, &size_int),
            "orbit of size {size} under a unipotent action is not a power of {p}"
        );
        let mut r = 0u32;
        let mut s = size;
        while s > 1 {
            s /= p;
            r += 1;
        }
        *lines.entry(r).or_insert_with(BigInt::zero) += size_int;
    }
    let profile = LineOrbitProfile::new(p, lines);
    assert_eq!(profile.total_lines(), line_count);
    Ok(profile)
}

/// Number of lines fixed by `m` (orbit size 1), directly.
pub fn count_fixed_lines(m: &MatrixFp) -> Result<BigInt> {
    Ok(brute_force_line_orbits(m)?.lines_at(0))
}

/// All unit upper-triangular n×n matrices over F_p, each exactly once.
pub fn enumerate_triangular(n: usize, p: u64) -> Result<impl Iterator<Item = MatrixFp>> {
    check_oracle_field(p, n)?;
    let slots = n * (n - 1) / 2;
    let total = (p as u128).pow(slots as u32);
    let cap = cell_cap(DEFAULT_TRIANGULAR_CELLS) as u128;
    if total > cap {
        return Err(Error::BoundExceeded {
            what: "triangular enumeration",
            requested: total,
            limit: cap,
        });
    }
    let positions: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Ok((0..total).map(move |code| {
        let mut m = MatrixFp::identity(p, n).unwrap();
        let mut rest = code;
        for &(i, j) in &positions {
            m.set(i, j, (rest % p as u128) as u64);
            rest /= p as u128;
        }
        m
    }))
}

/// All unipotent elements of GL(n,p), by filtering every n×n matrix on
/// (M−I)^n = 0; nilpotence of M−I already forces invertibility. The count
/// must come out to p^{n(n−1)}.
pub fn enumerate_unipotent_gl(n: usize, p: u64) -> Result<impl Iterator<Item = MatrixFp>> {
    check_oracle_field(p, n)?;
    let total = (p as u128).pow((n * n) as u32);
    let cap = cell_cap(DEFAULT_GL_CELLS) as u128;
    if total > cap {
        return Err(Error::BoundExceeded {
            what: "unipotent GL enumeration",
            requested: total,
            limit: cap,
        });
    }
    Ok((0..total).filter_map(move |code| {
        let mut entries = vec![0u64; n * n];
        let mut rest = code;
        for entry in entries.iter_mut() {
            *entry = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        let m = MatrixFp::new(p, n, entries).unwrap();
        m.is_unipotent().then_some(m)
    }))
}

/// Census of Jordan types over a stream of unipotent matrices.
pub fn jordan_census(matrices: impl Iterator<Item = MatrixFp>) -> Result<BTreeMap<Partition, u64>> {
    let mut census = BTreeMap::new();
    for m in matrices {
        let ty = crate::matrix::jordan_type(&m)?;
        *census.entry(ty).or_insert(0) += 1;
    }
    Ok(census)
}

/// Row-reduced basis of a subspace, supporting membership tests.
#[derive(Clone, Debug, PartialEq)]
struct Subspace {
    p: u64,
    n: usize,
    basis: Vec<Vec<u64>>, // reduced row echelon, pivots strictly increasing
}

impl Subspace {
    fn zero(p: u64, n: usize) -> Self {
        Subspace { p, n, basis: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the basis; a zero result means membership.
    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for row in &self.basis {
            let pivot = row.iter().position(|&c| c != 0).expect("basis rows are nonzero");
            if v[pivot] != 0 {
                let factor = v[pivot];
                for (vc, rc) in v.iter_mut().zip(row) {
                    *vc = (*vc + (self.p - factor % self.p) * rc) % self.p;
                }
            }
        }
        v
    }

    fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&c| c == 0)
    }

    /// Span of this subspace and one extra vector (assumed outside).
    fn extended(&self, v: &[u64]) -> Subspace {
        let mut reduced = self.reduce(v.to_vec());
        let pivot = reduced.iter().position(|&c| c != 0).expect("vector already inside");
        let inv = mod_inverse(reduced[pivot], self.p);
        for c in &mut reduced {
            *c = *c * inv % self.p;
        }
        let mut basis = self.basis.clone();
        // Back-substitute so earlier rows keep zeros in the new pivot column.
        for row in &mut basis {
            if row[pivot] != 0 {
                let factor = row[pivot];
                for (rc, nc) in row.iter_mut().zip(&reduced) {
                    *rc = (*rc + (self.p - factor) * nc) % self.p;
                }
            }
        }
        basis.push(reduced);
        basis.sort_by_key(|row| row.iter().position(|&c| c != 0));
        Subspace { p: self.p, n: self.n, basis }
    }

    fn is_invariant_under(&self, m: &MatrixFp) -> bool {
        self.basis.iter().all(|row| self.contains(&m.apply(row)))
    }
}

/// Number of complete flags 0 ⊂ V_1 ⊂ ⋯ ⊂ V_n fixed by `m` (every V_i
/// invariant). Flags are enumerated without regard to `m`, and invariance
/// of the whole chain is tested at the end.
pub fn count_fixed_flags(m: &MatrixFp) -> Result<u64> {
    let p = m.p();
    let n = m.dim();
    if n > MAX_FLAG_N || p > MAX_FLAG_P {
        return Err(Error::BoundExceeded {
            what: "flag enumeration",
            requested: (n as u128) << 32 | p as u128,
            limit: (MAX_FLAG_N as u128) << 32 | MAX_FLAG_P as u128,
        });
    }
    let all_vectors: Vec<Vec<u64>> = (0..p.pow(n as u32))
        .map(|code| {
            let mut v = vec![0u64; n];
            let mut rest = code;
            for c in v.iter_mut() {
                *c = rest % p;
                rest /= p;
            }
            v
        })
        .collect();

    let mut count = 0u64;
    let mut chain: Vec<Subspace> = Vec::new();
    extend_flags(m, &all_vectors, &Subspace::zero(p, n), &mut chain, &mut count);
    Ok(count)
}

fn extend_flags(
    m: &MatrixFp,
    all_vectors: &[Vec<u64>],
    current: &Subspace,
    chain: &mut Vec<Subspace>,
    count: &mut u64,
) {
    if current.dim() == m.dim() {
        if chain.iter().all(|v| v.is_invariant_under(m)) {
            *count += 1;
        }
        return;
    }
    // One extension per line of the quotient: dedupe reduced representatives.
    let mut seen = std::collections::BTreeSet::new();
    for v in all_vectors {
        let reduced = current.reduce(v.clone());
        if reduced.iter().all(|&c| c == 0) {
            continue;
        }
        let canonical = canonicalize(reduced, current.p);
        if !seen.insert(canonical.clone()) {
            continue;
        }
        let bigger = current.extended(&canonical);
        chain.push(bigger.clone());
        extend_flags(m, all_vectors, &bigger, chain, count);
        chain.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{jordan_matrix, jordan_type};
    use crate::partition::enumerate_partitions;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn profile(p_val: u64, entries: &[(u32, i64)]) -> LineOrbitProfile {
        LineOrbitProfile::new(
            p_val,
            entries.iter().map(|&(r, c)| (r, BigInt::from(c))).collect(),
        )
    }

    #[test]
    fn formula_examples() {
        // Identity fixes every line.
        assert_eq!(
            orbit_profile_formula(&p(&[1, 1, 1]), 2),
            profile(2, &[(0, 7)])
        );
        assert_eq!(orbit_profile_formula(&p(&[2]), 2), profile(2, &[(0, 1), (1, 2)]));
        assert_eq!(
            orbit_profile_formula(&p(&[2, 1]), 2),
            profile(2, &[(0, 3), (1, 4)])
        );
        assert_eq!(
            orbit_profile_formula(&p(&[4]), 2),
            profile(2, &[(0, 1), (1, 2), (2, 12)])
        );
    }

    #[test]
    fn brute_force_matches_formula_up_to_5() {
        for p_val in [2u64, 3] {
            for n in 1..=5 {
                for lambda in enumerate_partitions(n).unwrap() {
                    let m = jordan_matrix(&lambda, p_val).unwrap();
                    let enumerated = brute_force_line_orbits(&m).unwrap();
                    let predicted = orbit_profile_formula(&lambda, p_val);
                    assert_eq!(enumerated, predicted, "λ = {lambda}, p = {p_val}");
                    let total = (pow_of(p_val, n) - BigInt::one()) / BigInt::from(p_val - 1);
                    assert_eq!(enumerated.total_lines(), total);
                }
            }
        }
    }

    #[test]
    fn fixed_line_differences_recover_the_profile() {
        // lines_r = fix(M^{p^r}) − fix(M^{p^{r−1}}) for r ≥ 1.
        for p_val in [2u64, 3] {
            for n in 1..=4 {
                for lambda in enumerate_partitions(n).unwrap() {
                    let m = jordan_matrix(&lambda, p_val).unwrap();
                    let profile = orbit_profile_formula(&lambda, p_val);
                    let max_r = profile.lines().keys().max().copied().unwrap_or(0);
                    for r in 1..=max_r {
                        let fixed_hi = count_fixed_lines(&m.pow(p_val.pow(r))).unwrap();
                        let fixed_lo = count_fixed_lines(&m.pow(p_val.pow(r - 1))).unwrap();
                        assert_eq!(
                            profile.lines_at(r),
                            fixed_hi - fixed_lo,
                            "λ = {lambda}, p = {p_val}, r = {r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn triangular_enumeration_counts() {
        assert_eq!(enumerate_triangular(2, 2).unwrap().count(), 2);
        assert_eq!(enumerate_triangular(4, 2).unwrap().count(), 64);
        assert_eq!(enumerate_triangular(3, 3).unwrap().count(), 27);
        let all: Vec<MatrixFp> = enumerate_triangular(3, 2).unwrap().collect();
        let distinct: std::collections::BTreeSet<String> =
            all.iter().map(|m| m.to_string()).collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|m| m.is_unipotent()));
    }

    #[test]
    fn unipotent_gl_count_is_p_to_n_n_minus_1() {
        for (n, p_val) in [(2usize, 2u64), (2, 3), (2, 5), (3, 2), (3, 3)] {
            let count = enumerate_unipotent_gl(n, p_val).unwrap().count() as u128;
            assert_eq!(
                count,
                (p_val as u128).pow((n * (n - 1)) as u32),
                "n = {n}, p = {p_val}"
            );
        }
    }

    #[test]
    fn censuses_are_typed_correctly() {
        let census = jordan_census(enumerate_unipotent_gl(2, 2).unwrap()).unwrap();
        assert_eq!(census[&p(&[1, 1])], 1);
        assert_eq!(census[&p(&[2])], 3);
    }

    #[test]
    fn flag_counts() {
        for p_val in [2u64, 3] {
            let id = MatrixFp::identity(p_val, 2).unwrap();
            assert_eq!(count_fixed_flags(&id).unwrap(), p_val + 1);
            let j2 = jordan_matrix(&p(&[2]), p_val).unwrap();
            assert_eq!(count_fixed_flags(&j2).unwrap(), 1);
        }
        let j3 = jordan_matrix(&p(&[3]), 2).unwrap();
        assert_eq!(count_fixed_flags(&j3).unwrap(), 1);
        // Total flag count over F_2^3: (2³−1)(2²−1) / (2−1)² = 21.
        let id3 = MatrixFp::identity(2, 3).unwrap();
        assert_eq!(count_fixed_flags(&id3).unwrap(), 21);
    }

    #[test]
    fn triangular_probability_flag_route() {
        // Census probabilities equal
        // (p−1)^n P_λ(1/p,…;1/p) fix_λ(p) / p^{n(λ)} for n ≤ 4, p ≤ 3.
        use crate::measures::triangular_dist;
        use crate::qseries::{hl_principal, rational_int, Rational};
        for p_val in [2u64, 3] {
            for n in 1..=4 {
                let dist = triangular_dist(n, p_val).unwrap();
                for lambda in enumerate_partitions(n).unwrap() {
                    let flags = count_fixed_flags(&jordan_matrix(&lambda, p_val).unwrap()).unwrap();
                    let via_flags = rational_int(BigInt::from(p_val - 1).pow(n as u32))
                        * hl_principal(&lambda, p_val)
                        * rational_int(BigInt::from(flags))
                        / rational_int(pow_of(p_val, lambda.n_stat()));
                    assert_eq!(
                        dist.prob(&lambda),
                        &via_flags,
                        "λ = {lambda}, p = {p_val}"
                    );
                    let _: &Rational = dist.prob(&lambda);
                }
            }
        }
    }

    #[test]
    fn scale_bounds() {
        assert!(brute_force_line_orbits(&MatrixFp::identity(7, 6).unwrap()).is_ok());
        assert!(enumerate_triangular(6, 7).is_err());
        assert!(count_fixed_flags(&MatrixFp::identity(5, 2).unwrap()).is_err());
        assert!(count_fixed_flags(&MatrixFp::identity(2, 5).unwrap()).is_err());
    }

    #[test]
    fn type_census_via_random_conjugates() {
        // Conjugates of the block representative land in the same census bin.
        let m = jordan_matrix(&p(&[3, 1]), 2).unwrap();
        assert_eq!(jordan_type(&m).unwrap(), p(&[3, 1]));
    }
}
