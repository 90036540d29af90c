//! Divisor sums, binomial coefficients and triangular representation counts.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator. Displays as `p/q`, or `p` when the denominator is 1.
pub type ExactRational = BigRational;

/// True iff `m = k(k+1)/2` for some `k ≥ 0`, i.e. `8m + 1` is a perfect square.
pub fn is_triangular(m: u64) -> bool {
    let disc = 8 * u128::from(m) + 1;
    let root = disc.sqrt();
    root * root == disc
}

/// Triangular numbers `0, 1, 3, 6, …` not exceeding `limit`.
pub fn triangular_numbers(limit: u64) -> impl Iterator<Item = u64> {
    (0u64..)
        .map(|k| k * (k + 1) / 2)
        .take_while(move |&t| t <= limit)
}

/// Positive divisors of `n` in increasing order (trial division up to √n).
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `D(n) = Σ_{d|n} (1 + 2(−1)^d) / d`.
///
/// Odd divisors contribute `−1/d`, even divisors `3/d`.
pub fn divisor_sum(n: u64) -> ExactRational {
    divisors(n)
        .into_iter()
        .map(|d| {
            let num = if d % 2 == 0 { 3 } else { -1 };
            ExactRational::new(BigInt::from(num), BigInt::from(d))
        })
        .fold(ExactRational::zero(), |acc, t| acc + t)
}

/// `C(n, r)`, zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    // Each prefix product is C(n-r+i, i), so every division is exact.
    (1..=r).fold(BigUint::one(), |acc, i| acc * (n - r + i) / i)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial_signed(n: u64, r: u64) -> BigInt {
    BigInt::from(binomial(n, r))
}

/// Table of `t_r(m)` for `1 ≤ r ≤ max_r`, `0 ≤ m ≤ max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripRepTable {
    max_n: usize,
    // rows[r - 1][m] = t_r(m)
    rows: Vec<Vec<BigUint>>,
}

impl TripRepTable {
    /// Row 1 is the triangular indicator; row `r` is row `r − 1` convolved
    /// with the triangular support of `Ψ`.
    pub fn build(max_n: usize, max_r: usize) -> Self {
        let tri: Vec<usize> = triangular_numbers(max_n as u64)
            .map(|t| t as usize)
            .collect();
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_r);
        if max_r > 0 {
            let mut first = vec![BigUint::zero(); max_n + 1];
            for &t in &tri {
                first[t] = BigUint::one();
            }
            rows.push(first);
        }
        for _ in 1..max_r {
            let prev = rows.last().expect("row 1 exists");
            let next = (0..=max_n)
                .map(|m| {
                    tri.iter()
                        .take_while(|&&t| t <= m)
                        .fold(BigUint::zero(), |acc, &t| acc + &prev[m - t])
                })
                .collect();
            rows.push(next);
        }
        Self { max_n, rows }
    }

    /// Wraps precomputed rows (`rows[r-1][m] = t_r(m)`). Only the shape is
    /// validated, which lets callers inject faults into otherwise correct
    /// tables.
    pub fn from_rows(rows: Vec<Vec<BigUint>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::MalformedTable("no rows".into()));
        };
        let width = first.len();
        if width == 0 {
            return Err(Error::MalformedTable("empty rows".into()));
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != width) {
            return Err(Error::MalformedTable(format!(
                "row {} has {} entries, expected {width}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(Self {
            max_n: width - 1,
            rows,
        })
    }

    pub fn into_rows(self) -> Vec<Vec<BigUint>> {
        self.rows
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn max_r(&self) -> usize {
        self.rows.len()
    }

    /// `t_r(m)`, or `None` outside the table (including `r = 0`).
    pub fn get(&self, r: usize, m: usize) -> Option<&BigUint> {
        self.rows.get(r.checked_sub(1)?)?.get(m)
    }

    pub fn row(&self, r: usize) -> Option<&[BigUint]> {
        self.rows.get(r.checked_sub(1)?).map(Vec::as_slice)
    }

    pub(crate) fn require(&self, n: usize, r: usize) -> Result<()> {
        if n > self.max_n || r > self.max_r() {
            return Err(Error::InsufficientTable {
                needed: format!("n={n}, r={r}"),
                available: format!("n<={}, r<={}", self.max_n, self.max_r()),
            });
        }
        Ok(())
    }
}

pub fn trep_table(max_n: usize, max_r: usize) -> TripRepTable {
    TripRepTable::build(max_n, max_r)
}

/// Counts ordered `r`-tuples of triangular numbers (0 allowed) summing to
/// `n` by direct enumeration. Shares no code with the series machinery.
pub fn trep_oracle(n: u64, r: u32) -> BigUint {
    let tri: Vec<u64> = triangular_numbers(n).collect();
    fn count(remaining: u64, slots: u32, tri: &[u64]) -> BigUint {
        if slots == 0 {
            return if remaining == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        tri.iter()
            .take_while(|&&t| t <= remaining)
            .map(|&t| count(remaining - t, slots - 1, tri))
            .sum()
    }
    count(n, r, &tri)
}

/// Right side of the main identity, `Σ_{r=1}^{n} (−1)^r/r · C(n,r) · t_r(n)`.
pub fn theorem_rhs(n: usize, table: &TripRepTable) -> Result<ExactRational> {
    table.require(n, n)?;
    let mut acc = ExactRational::zero();
    for r in 1..=n {
        let t = BigInt::from(table.get(r, n).expect("bounds checked").clone());
        let mut num = binomial_signed(n as u64, r as u64) * t;
        if r % 2 == 1 {
            num = -num;
        }
        acc += ExactRational::new(num, BigInt::from(r));
    }
    Ok(acc)
}

/// Both sides of `Σ_{k=r}^{n} C(k,r)/k = C(n,r)/r`.
pub fn binomial_identity_sides(n: u64, r: u64) -> (ExactRational, ExactRational) {
    assert!(1 <= r && r <= n, "binomial identity needs 1 <= r <= n");
    let lhs = (r..=n)
        .map(|k| ExactRational::new(binomial_signed(k, r), BigInt::from(k)))
        .fold(ExactRational::zero(), |acc, t| acc + t);
    let rhs = ExactRational::new(binomial_signed(n, r), BigInt::from(r));
    (lhs, rhs)
}

/// Whether `Σ_{k=r}^{n} C(k,r)/k = C(n,r)/r` holds; requires `1 ≤ r ≤ n`.
pub fn binomial_identity_check(n: u64, r: u64) -> bool {
    let (lhs, rhs) = binomial_identity_sides(n, r);
    lhs == rhs
}

/// Both sides of Pascal's rule in the form `C(k, r−1) = C(k+1, r) − C(k, r)`,
/// with `C(k, −1) = 0`.
pub fn pascal_sides(k: u64, r: u64) -> (BigInt, BigInt) {
    let lhs = match r.checked_sub(1) {
        Some(r1) => binomial_signed(k, r1),
        None => BigInt::zero(),
    };
    let rhs = binomial_signed(k + 1, r) - binomial_signed(k, r);
    (lhs, rhs)
}

pub fn pascal_check(k: u64, r: u64) -> bool {
    let (lhs, rhs) = pascal_sides(k, r);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn triangular_membership() {
        assert!(is_triangular(6));
        assert!(is_triangular(0));
        assert!(!is_triangular(7));
        let listed: Vec<u64> = triangular_numbers(30).collect();
        assert_eq!(listed, vec![0, 1, 3, 6, 10, 15, 21, 28]);
        for m in 0..=30 {
            assert_eq!(is_triangular(m), listed.contains(&m), "m={m}");
        }
    }

    #[test]
    fn triangular_test_near_u64_max() {
        // k(k+1)/2 for the largest k whose value fits in u64.
        let k: u128 = 6_074_000_999;
        let t = u64::try_from(k * (k + 1) / 2).unwrap();
        assert!(is_triangular(t));
        assert!(!is_triangular(t - 1));
        assert!(!is_triangular(u64::MAX));
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
        assert_eq!(divisors(13), vec![1, 13]);
    }

    #[test]
    fn divisor_sum_examples() {
        assert_eq!(divisor_sum(1), rat(-1, 1));
        assert_eq!(divisor_sum(2), rat(1, 2));
        assert_eq!(divisor_sum(3), rat(-4, 3));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(7, 0), BigUint::one());
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(
            binomial(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn trep_table_examples() {
        let t = trep_table(10, 4);
        assert_eq!(t.get(2, 7), Some(&BigUint::from(2u32)));
        assert_eq!(t.get(3, 3), Some(&BigUint::from(4u32)));
        for r in 1..=4 {
            assert_eq!(t.get(r, 0), Some(&BigUint::one()));
        }
        assert_eq!(t.get(0, 0), None);
        assert_eq!(t.get(5, 0), None);
        assert_eq!(t.get(1, 11), None);
        // 0 counts as a summand: 1 = 0+1 = 1+0.
        assert_eq!(t.get(2, 1), Some(&BigUint::from(2u32)));
    }

    #[test]
    fn trep_oracle_examples() {
        assert_eq!(trep_oracle(7, 2), BigUint::from(2u32));
        assert_eq!(trep_oracle(0, 5), BigUint::one());
        assert_eq!(trep_oracle(2, 2), BigUint::one());
        assert_eq!(trep_oracle(3, 3), BigUint::from(4u32));
    }

    #[test]
    fn theorem_rhs_examples() {
        let t = trep_table(3, 3);
        assert_eq!(theorem_rhs(1, &t).unwrap(), rat(-1, 1));
        assert_eq!(theorem_rhs(2, &t).unwrap(), rat(1, 2));
        assert_eq!(theorem_rhs(3, &t).unwrap(), rat(-4, 3));
    }

    #[test]
    fn theorem_rhs_insufficient_table() {
        let narrow = trep_table(10, 2);
        assert!(matches!(
            theorem_rhs(3, &narrow),
            Err(Error::InsufficientTable { .. })
        ));
        let short = trep_table(2, 10);
        assert!(matches!(
            theorem_rhs(3, &short),
            Err(Error::InsufficientTable { .. })
        ));
    }

    #[test]
    fn binomial_identity_examples() {
        assert_eq!(binomial_identity_sides(1, 1), (rat(1, 1), rat(1, 1)));
        assert_eq!(binomial_identity_sides(3, 2), (rat(3, 2), rat(3, 2)));
        assert_eq!(binomial_identity_sides(3, 1), (rat(3, 1), rat(3, 1)));
        assert!(binomial_identity_check(3, 2));
    }

    #[test]
    fn pascal_edges() {
        assert!(pascal_check(0, 0));
        assert!(pascal_check(5, 0));
        assert!(pascal_check(5, 5));
        assert_eq!(pascal_sides(4, 2), (BigInt::from(4), BigInt::from(4)));
    }

    #[test]
    fn from_rows_validates_shape() {
        assert!(matches!(
            TripRepTable::from_rows(vec![]),
            Err(Error::MalformedTable(_))
        ));
        let ragged = vec![vec![BigUint::one(); 3], vec![BigUint::one(); 2]];
        assert!(matches!(
            TripRepTable::from_rows(ragged),
            Err(Error::MalformedTable(_))
        ));
        let t = trep_table(5, 3);
        let back = TripRepTable::from_rows(t.clone().into_rows()).unwrap();
        assert_eq!(back, t);
    }
}
