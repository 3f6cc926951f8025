//! Dense square matrices over a small prime field, for the brute-force
//! oracles: Jordan-type classification by ranks of powers of M − I, and
//! the standard block representative of each unipotent class.

use std::fmt;
use std::str::FromStr;

use crate::limits::{MAX_MATRIX_N, MAX_MATRIX_P};
use crate::partition::Partition;
use crate::{Error, Result};

/// An n×n matrix over F_p, row-major, with p a prime at oracle scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFp {
    p: u64,
    n: usize,
    entries: Vec<u64>,
}

pub(crate) fn is_small_prime(p: u64) -> bool {
    p >= 2 && (2..p).all(|d| !p.is_multiple_of(d))
}

pub(crate) fn check_oracle_field(p: u64, n: usize) -> Result<()> {
    if !is_small_prime(p) || p > MAX_MATRIX_P {
        return Err(Error::InvalidParameter(format!(
            "matrix oracles need a prime p <= {MAX_MATRIX_P}, got {p}"
        )));
    }
    if n > MAX_MATRIX_N {
        return Err(Error::BoundExceeded {
            what: "matrix dimension",
            requested: n as u128,
            limit: MAX_MATRIX_N as u128,
        });
    }
    Ok(())
}

impl MatrixFp {
    pub fn new(p: u64, n: usize, entries: Vec<u64>) -> Result<Self> {
        check_oracle_field(p, n)?;
        if entries.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(MatrixFp { p, n, entries })
    }

    pub fn identity(p: u64, n: usize) -> Result<Self> {
        let mut m = MatrixFp::new(p, n, vec![0; n * n])?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.n + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: u64) {
        self.entries[row * self.n + col] = value % self.p;
    }

    pub fn mul(&self, other: &MatrixFp) -> MatrixFp {
        assert_eq!(self.p, other.p);
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] = (entries[i * n + j] + a * other.entries[k * n + j]) % self.p;
                }
            }
        }
        MatrixFp { p: self.p, n, entries }
    }

    pub fn pow(&self, mut exponent: u64) -> MatrixFp {
        let mut base = self.clone();
        let mut acc = MatrixFp::identity(self.p, self.n).unwrap();
        while exponent > 0 {
            if exponent & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exponent >>= 1;
        }
        acc
    }

    /// M − I over F_p.
    pub fn minus_identity(&self) -> MatrixFp {
        let mut out = self.clone();
        for i in 0..self.n {
            let d = out.entries[i * self.n + i];
            out.entries[i * self.n + i] = (d + self.p - 1) % self.p;
        }
        out
    }

    /// Rank over F_p by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let p = self.p;
        let mut a = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| a[r * n + col] != 0);
            let Some(pivot_row) = pivot else { continue };
            for j in 0..n {
                a.swap(rank * n + j, pivot_row * n + j);
            }
            let inv = mod_inverse(a[rank * n + col], p);
            for j in 0..n {
                a[rank * n + j] = a[rank * n + j] * inv % p;
            }
            for r in 0..n {
                if r != rank && a[r * n + col] != 0 {
                    let factor = a[r * n + col];
                    for j in 0..n {
                        a[r * n + j] = (a[r * n + j] + (p - factor) * a[rank * n + j]) % p;
                    }
                }
            }
            rank += 1;
            if rank == n {
                break;
            }
        }
        rank
    }

    /// (M − I)^n = 0, i.e. all eigenvalues are 1.
    pub fn is_unipotent(&self) -> bool {
        let nil = self.minus_identity().pow(self.n as u64);
        nil.entries.iter().all(|&e| e == 0)
    }

    /// Image of a column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.entries[i * self.n + j] * v[j] % self.p)
                    .sum::<u64>()
                    % self.p
            })
            .collect()
    }
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime and a nonzero mod p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

impl fmt::Display for MatrixFp {
    /// Rows separated by ';', entries by ',': `1,1;0,1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.n {
            if row > 0 {
                write!(f, ";")?;
            }
            for col in 0..self.n {
                if col > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(row, col))?;
            }
        }
        Ok(())
    }
}

/// Parses the `1,1;0,1` text form; the field size must be supplied
/// separately since entries do not determine it.
pub fn parse_matrix(text: &str, p: u64) -> Result<MatrixFp> {
    let rows: Vec<&str> = text.trim().split(';').collect();
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for row in &rows {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != n {
            return Err(Error::InvalidParameter(format!(
                "matrix rows must all have {n} entries: {text:?}"
            )));
        }
        for cell in cells {
            let value: u64 = cell.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("bad matrix entry {cell:?} in {text:?}"))
            })?;
            entries.push(value);
        }
    }
    MatrixFp::new(p, n, entries)
}

impl FromStr for MatrixFp {
    type Err = Error;

    /// Parses `p:1,1;0,1`, a field-size prefix followed by the row form.
    fn from_str(s: &str) -> Result<Self> {
        let (p_text, body) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("matrix needs a p: prefix: {s:?}")))?;
        let p: u64 = p_text
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad field size {p_text:?}")))?;
        parse_matrix(body, p)
    }
}

/// The block-diagonal unipotent representative of class λ: one
/// upper-bidiagonal block of size λ_i per part.
pub fn jordan_matrix(lambda: &Partition, p: u64) -> Result<MatrixFp> {
    let n = lambda.size();
    let mut m = MatrixFp::identity(p, n)?;
    let mut offset = 0;
    for &part in lambda.parts() {
        for k in 0..part - 1 {
            m.set(offset + k, offset + k + 1, 1);
        }
        offset += part;
    }
    Ok(m)
}

/// Jordan type of a unipotent matrix from ranks of powers of N = M − I:
/// with r_k = rank(N^k), the number of blocks of size k is
/// r_{k−1} − 2 r_k + r_{k+1}.
pub fn jordan_type(m: &MatrixFp) -> Result<Partition> {
    if !m.is_unipotent() {
        return Err(Error::NotUnipotent);
    }
    let n = m.dim();
    let nil = m.minus_identity();
    let mut ranks = Vec::with_capacity(n + 2);
    ranks.push(n); // rank of N^0
    let mut power = MatrixFp::identity(m.p(), n).unwrap();
    for _ in 1..=n + 1 {
        power = power.mul(&nil);
        ranks.push(power.rank());
    }
    let mut parts = Vec::new();
    for k in (1..=n).rev() {
        let blocks = ranks[k - 1] + ranks[k + 1] - 2 * ranks[k];
        for _ in 0..blocks {
            parts.push(k);
        }
    }
    Ok(Partition::new(parts))
}
