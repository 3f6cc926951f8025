//! Brute-force abelian p-group oracle.
//!
//! Realizes the group ⊕_i Z/p^{λ_i} on explicit element indices, enumerates
//! the full subgroup lattice by closing generating sets, and classifies
//! subgroups and quotients by type from order statistics: in a finite
//! abelian p-group of type μ the number of elements killed by p^k is
//! p^{μ'_1 + ⋯ + μ'_k}, which pins down μ.

use std::collections::{HashMap, HashSet};

use crate::limits::{cell_cap, DEFAULT_GROUP_CELLS};
use crate::partition::Partition;
use crate::{Error, Result};

/// Set of elements of a group of order ≤ 2^12, as a bitset over indices.
pub type ElementSet = Vec<u64>;

/// The abelian p-group of type λ with all elements materialized.
pub struct AbelianPGroup {
    p: u64,
    lambda: Partition,
    radices: Vec<u64>,
    order: u64,
    /// times_p[g] = index of p·g; drives order statistics.
    times_p: Vec<u32>,
    /// ord_exp[g] = least k with p^k·g = 0.
    ord_exp: Vec<u8>,
}

fn is_small_prime(p: u64) -> bool {
    p >= 2 && (2..p).all(|d| !p.is_multiple_of(d))
}

impl AbelianPGroup {
    pub fn new(lambda: &Partition, p: u64) -> Result<Self> {
        if !is_small_prime(p) {
            return Err(Error::InvalidParameter(format!(
                "group oracle requires a prime, got {p}"
            )));
        }
        let cap = cell_cap(DEFAULT_GROUP_CELLS);
        let mut order: u64 = 1;
        for &part in lambda.parts() {
            for _ in 0..part {
                order = order.checked_mul(p).filter(|&o| o <= cap).ok_or(
                    Error::BoundExceeded {
                        what: "abelian p-group order",
                        requested: u128::from(order) * u128::from(p),
                        limit: u128::from(cap),
                    },
                )?;
            }
        }
        let radices: Vec<u64> = lambda.parts().iter().map(|&part| p.pow(part as u32)).collect();

        let mut times_p = vec![0u32; order as usize];
        for g in 0..order {
            let mut coords = decode(g, &radices);
            for (c, &radix) in coords.iter_mut().zip(&radices) {
                *c = (*c * p) % radix;
            }
            times_p[g as usize] = encode(&coords, &radices) as u32;
        }

        let mut ord_exp = vec![0u8; order as usize];
        for (g, exp) in ord_exp.iter_mut().enumerate() {
            let mut k = 0u8;
            let mut cur = g as u32;
            while cur != 0 {
                cur = times_p[cur as usize];
                k += 1;
            }
            *exp = k;
        }

        Ok(AbelianPGroup {
            p,
            lambda: lambda.clone(),
            radices,
            order,
            times_p,
            ord_exp,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn group_type(&self) -> &Partition {
        &self.lambda
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let ca = decode(a, &self.radices);
        let cb = decode(b, &self.radices);
        let sum: Vec<u64> = ca
            .iter()
            .zip(&cb)
            .zip(&self.radices)
            .map(|((x, y), &radix)| (x + y) % radix)
            .collect();
        encode(&sum, &self.radices)
    }

    fn words(&self) -> usize {
        (self.order as usize).div_ceil(64)
    }

    fn singleton_zero(&self) -> ElementSet {
        let mut set = vec![0u64; self.words()];
        set_bit(&mut set, 0);
        set
    }

    /// ⟨H ∪ {g}⟩ for a subgroup H: the union of translates H + k·g.
    fn extend(&self, subgroup: &ElementSet, g: u64) -> ElementSet {
        let mut result = subgroup.clone();
        let mut shift = g;
        while !get_bit(&result, shift as usize) {
            for h in iter_bits(subgroup, self.order as usize) {
                set_bit(&mut result, self.add(h as u64, shift) as usize);
            }
            shift = self.add(shift, g);
        }
        result
    }

    /// Every subgroup, including the trivial one and the whole group,
    /// sorted by (order, bit pattern) for determinism.
    pub fn subgroups(&self) -> Vec<ElementSet> {
        let trivial = self.singleton_zero();
        let mut seen: HashSet<ElementSet> = HashSet::new();
        seen.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while let Some(current) = frontier.pop() {
            for g in 1..self.order {
                if !get_bit(&current, g as usize) {
                    let bigger = self.extend(&current, g);
                    if seen.insert(bigger.clone()) {
                        frontier.push(bigger);
                    }
                }
            }
        }
        let mut all: Vec<ElementSet> = seen.into_iter().collect();
        all.sort_by_key(|set| (count_bits(set), set.clone()));
        all
    }

    /// Type of a subgroup from its order statistics.
    pub fn subgroup_type(&self, subgroup: &ElementSet) -> Partition {
        let max_exp = self.lambda.part(1);
        let mut killed = vec![0u64; max_exp + 1];
        for h in iter_bits(subgroup, self.order as usize) {
            killed[self.ord_exp[h] as usize] += 1;
        }
        let mut cumulative = 0u64;
        let mut col_sums = Vec::with_capacity(max_exp + 1);
        for count in &killed {
            cumulative += count;
            col_sums.push(log_exact(self.p, cumulative));
        }
        type_from_cumulative_logs(&col_sums)
    }

    /// Type of the quotient G/H from coset order statistics: the count of
    /// g with p^k·g ∈ H, divided by |H|, is the number of quotient elements
    /// killed by p^k.
    pub fn quotient_type(&self, subgroup: &ElementSet) -> Partition {
        let h_order = count_bits(subgroup) as u64;
        let max_exp = self.lambda.part(1);
        let mut col_sums = Vec::with_capacity(max_exp + 1);
        for k in 0..=max_exp {
            let mut in_h = 0u64;
            for g in 0..self.order {
                let mut cur = g as u32;
                for _ in 0..k {
                    cur = self.times_p[cur as usize];
                }
                if get_bit(subgroup, cur as usize) {
                    in_h += 1;
                }
            }
            assert_eq!(in_h % h_order, 0, "cosets partition the preimage");
            col_sums.push(log_exact(self.p, in_h / h_order));
        }
        type_from_cumulative_logs(&col_sums)
    }

    /// Count of subgroups per type.
    pub fn type_census(&self) -> std::collections::BTreeMap<Partition, u64> {
        let mut census = std::collections::BTreeMap::new();
        for subgroup in self.subgroups() {
            *census.entry(self.subgroup_type(&subgroup)).or_insert(0) += 1;
        }
        census
    }

    /// Count of subgroups per (subgroup type, quotient type) pair.
    pub fn type_cotype_census(
        &self,
    ) -> std::collections::BTreeMap<(Partition, Partition), u64> {
        let mut census = std::collections::BTreeMap::new();
        for subgroup in self.subgroups() {
            let key = (self.subgroup_type(&subgroup), self.quotient_type(&subgroup));
            *census.entry(key).or_insert(0) += 1;
        }
        census
    }

    /// Number of maximal subgroup chains (every step of index p) from the
    /// trivial subgroup to the whole group, by path counting on the lattice.
    pub fn maximal_chain_count(&self) -> u64 {
        let subgroups = self.subgroups();
        let mut chains: HashMap<usize, u64> = HashMap::new();
        chains.insert(0, 1); // subgroups[0] is trivial after the sort
        for (idx, subgroup) in subgroups.iter().enumerate().skip(1) {
            let order = count_bits(subgroup) as u64;
            let mut total = 0u64;
            for (jdx, smaller) in subgroups.iter().enumerate() {
                if count_bits(smaller) as u64 * self.p == order && is_subset(smaller, subgroup) {
                    total += chains[&jdx];
                }
            }
            chains.insert(idx, total);
        }
        chains[&(subgroups.len() - 1)]
    }
}

/// Recovers a type from cumulative logs: col_sums[k] = μ'_1 + ⋯ + μ'_k.
fn type_from_cumulative_logs(col_sums: &[usize]) -> Partition {
    let mut cols = Vec::new();
    for k in 1..col_sums.len() {
        let col = col_sums[k] - col_sums[k - 1];
        if col == 0 {
            break;
        }
        cols.push(col);
    }
    Partition::new(cols).conjugate()
}

fn log_exact(p: u64, value: u64) -> usize {
    let mut v = value;
    let mut log = 0;
    while v > 1 {
        assert_eq!(v % p, 0, "subgroup size {value} is not a power of {p}");
        v /= p;
        log += 1;
    }
    log
}

fn decode(mut g: u64, radices: &[u64]) -> Vec<u64> {
    radices
        .iter()
        .map(|&radix| {
            let coord = g % radix;
            g /= radix;
            coord
        })
        .collect()
}

fn encode(coords: &[u64], radices: &[u64]) -> u64 {
    coords
        .iter()
        .zip(radices)
        .rev()
        .fold(0u64, |acc, (&coord, &radix)| acc * radix + coord)
}

fn set_bit(set: &mut ElementSet, idx: usize) {
    set[idx / 64] |= 1 << (idx % 64);
}

fn get_bit(set: &ElementSet, idx: usize) -> bool {
    set[idx / 64] >> (idx % 64) & 1 == 1
}

fn count_bits(set: &ElementSet) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn is_subset(small: &ElementSet, big: &ElementSet) -> bool {
    small.iter().zip(big).all(|(s, b)| s & !b == 0)
}

fn iter_bits(set: &ElementSet, len: usize) -> impl Iterator<Item = usize> + '_ {
    (0..len).filter(move |&idx| get_bit(set, idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn elementary_abelian_subgroup_counts() {
        // Subspace counts of F_p^2 and F_p^3: 1 + (p+1) + 1 and
        // 1 + (p²+p+1) + (p²+p+1) + 1.
        for p_val in [2u64, 3, 5] {
            let g2 = AbelianPGroup::new(&p(&[1, 1]), p_val).unwrap();
            assert_eq!(g2.subgroups().len() as u64, 1 + (p_val + 1) + 1);
            let g3 = AbelianPGroup::new(&p(&[1, 1, 1]), p_val).unwrap();
            let planes = p_val * p_val + p_val + 1;
            assert_eq!(g3.subgroups().len() as u64, 2 + 2 * planes);
        }
    }

    #[test]
    fn cyclic_group_lattice_is_a_chain() {
        let g = AbelianPGroup::new(&p(&[3]), 2).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.subgroups().len(), 4);
        assert_eq!(g.maximal_chain_count(), 1);
        let census = g.type_census();
        assert_eq!(census[&Partition::empty()], 1);
        assert_eq!(census[&p(&[1])], 1);
        assert_eq!(census[&p(&[2])], 1);
        assert_eq!(census[&p(&[3])], 1);
    }

    #[test]
    fn z4_times_z2_structure() {
        let g = AbelianPGroup::new(&p(&[2, 1]), 2).unwrap();
        assert_eq!(g.order(), 8);
        let census = g.type_census();
        // Three involutions give three order-2 subgroups; order-4 subgroups
        // are two cyclic and one Klein.
        assert_eq!(census[&p(&[1])], 3);
        assert_eq!(census[&p(&[2])], 2);
        assert_eq!(census[&p(&[1, 1])], 1);
        assert_eq!(census[&p(&[2, 1])], 1);
        assert_eq!(g.maximal_chain_count(), 5);
    }

    #[test]
    fn quotient_types_in_z4_times_z2() {
        let g = AbelianPGroup::new(&p(&[2, 1]), 2).unwrap();
        let census = g.type_cotype_census();
        // Quotient by the Klein subgroup is Z/2; by a cyclic C4 it is Z/2;
        // quotients by the three involutions: by p·(Z4 part) the quotient is
        // (1,1), by the other two it is (2).
        assert_eq!(census[&(p(&[1, 1]), p(&[1]))], 1);
        assert_eq!(census[&(p(&[2]), p(&[1]))], 2);
        assert_eq!(census[&(p(&[1]), p(&[1, 1]))], 1);
        assert_eq!(census[&(p(&[1]), p(&[2]))], 2);
        assert_eq!(census[&(Partition::empty(), p(&[2, 1]))], 1);
        assert_eq!(census[&(p(&[2, 1]), Partition::empty())], 1);
    }

    #[test]
    fn klein_chain_count() {
        let g = AbelianPGroup::new(&p(&[1, 1]), 3).unwrap();
        assert_eq!(g.maximal_chain_count(), 4); // p + 1 middle subgroups
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(matches!(
            AbelianPGroup::new(&p(&[13]), 2),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(AbelianPGroup::new(&p(&[1]), 6).is_err());
    }
}
