//! Partial Bell polynomials `B_{n,k}(x_1, …, x_{n−k+1})` at integer points.
//!
//! The main use is the point `x_i = Ψ^{(i)}(0)`, where `B_{n,k}` links the
//! derivatives of `log Ψ` (Faà di Bruno) to the representation counts
//! `t_r(n)`. Any integer point is accepted so the recurrence can be checked
//! against the definition sum elsewhere.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numbers::{binomial, factorial, ExactRational, TripRepTable};
use crate::series::psi_series;
use crate::{Error, Result};

/// The evaluation point `x_1, …, x_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativePoint {
    // values[i - 1] = x_i
    values: Vec<BigInt>,
}

impl DerivativePoint {
    pub fn new(values: Vec<BigInt>) -> Self {
        Self { values }
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self::new(values.iter().copied().map(BigInt::from).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `x_i` for `1 ≤ i ≤ len`.
    pub fn x(&self, i: usize) -> Option<&BigInt> {
        self.values.get(i.checked_sub(1)?)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Multiplies every coordinate by `c`.
    pub fn scaled(&self, c: &BigInt) -> Self {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }
}

/// `x_i = Ψ^{(i)}(0) = i! · [q^i]Ψ`, which is `i!` at triangular `i` and 0
/// elsewhere.
pub fn psi_derivative_point(m: usize) -> DerivativePoint {
    let psi = psi_series(m);
    let values = (1..=m).map(|i| &psi.coeffs()[i] * factorial(i)).collect();
    DerivativePoint::new(values)
}

/// `B_{n,k}` for `0 ≤ k ≤ n ≤ max_n` at a fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellTable {
    // entries[n][k], k <= n
    entries: Vec<Vec<BigInt>>,
}

impl BellTable {
    /// Fills the table with
    /// `B_{n,k} = Σ_{i=1}^{n−k+1} C(n−1, i−1) · x_i · B_{n−i, k−1}`,
    /// starting from `B_{0,0} = 1` and `B_{n,0} = 0`.
    ///
    /// # Panics
    ///
    /// Panics if the point has fewer than `max_n` coordinates.
    pub fn build(point: &DerivativePoint, max_n: usize) -> Self {
        assert!(
            point.len() >= max_n,
            "point has {} coordinates, need {max_n}",
            point.len()
        );
        let mut entries: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        entries.push(vec![BigInt::one()]);
        for n in 1..=max_n {
            let mut row = vec![BigInt::zero(); n + 1];
            for (i, x) in point.values()[..n].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let i = i + 1;
                let weight = BigInt::from(binomial(n as u64 - 1, i as u64 - 1)) * x;
                let below = &entries[n - i];
                // k ranges over 1..=n-i+1, i.e. k-1 over the whole row below.
                for (k_minus_1, b) in below.iter().enumerate() {
                    if !b.is_zero() {
                        row[k_minus_1 + 1] += &weight * b;
                    }
                }
            }
            entries.push(row);
        }
        Self { entries }
    }

    pub fn max_n(&self) -> usize {
        self.entries.len() - 1
    }

    /// `B_{n,k}`, or `None` when `k > n` or `n > max_n`.
    pub fn get(&self, n: usize, k: usize) -> Option<&BigInt> {
        self.entries.get(n)?.get(k)
    }

    fn require(&self, n: usize) -> Result<()> {
        if n > self.max_n() {
            return Err(Error::InsufficientTable {
                needed: format!("n={n}"),
                available: format!("n<={}", self.max_n()),
            });
        }
        Ok(())
    }
}

pub fn bell_table(point: &DerivativePoint, max_n: usize) -> BellTable {
    BellTable::build(point, max_n)
}

/// Evaluates `B_{n,k}` straight from the definition
///
/// ```text
/// Σ n! / ∏ ℓ_i! · ∏ (x_i / i!)^{ℓ_i}   over Σ i·ℓ_i = n, Σ ℓ_i = k
/// ```
///
/// in exact rationals. Used only to validate [`BellTable`].
pub fn bell_oracle(point: &DerivativePoint, n: usize, k: usize) -> Result<BigInt> {
    if n == 0 && k == 0 {
        return Ok(BigInt::one());
    }
    if k == 0 || k > n {
        return Ok(BigInt::zero());
    }
    let max_part = n - k + 1;
    assert!(
        point.len() >= max_part,
        "point has {} coordinates, need {max_part}",
        point.len()
    );
    let scaled: Vec<ExactRational> = (1..=max_part)
        .map(|i| ExactRational::new(point.values()[i - 1].clone(), factorial(i)))
        .collect();
    let n_fact = ExactRational::from_integer(factorial(n));

    let mut total = ExactRational::zero();
    let mut mult = vec![0usize; max_part + 1];
    enumerate_multiplicities(n, k, max_part, &mut mult, &mut |mult| {
        let mut term = n_fact.clone();
        for (i, &l) in mult.iter().enumerate().skip(1) {
            if l == 0 {
                continue;
            }
            term /= ExactRational::from_integer(factorial(l));
            term *= num_traits::pow(scaled[i - 1].clone(), l);
        }
        total += term;
    });

    if !total.is_integer() {
        return Err(Error::NonIntegerResult {
            n,
            k,
            value: total.to_string(),
        });
    }
    Ok(total.to_integer())
}

/// Visits every `(ℓ_1, …, ℓ_max)` with `Σ i·ℓ_i = weight`, `Σ ℓ_i = parts`.
/// Fills part sizes from `largest` downward.
fn enumerate_multiplicities(
    weight: usize,
    parts: usize,
    largest: usize,
    mult: &mut [usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    if parts == 0 {
        if weight == 0 {
            visit(mult);
        }
        return;
    }
    if largest == 0 || weight < parts || weight > parts * largest {
        return;
    }
    let most = (weight / largest).min(parts);
    for l in (0..=most).rev() {
        mult[largest] = l;
        enumerate_multiplicities(weight - l * largest, parts - l, largest - 1, mult, visit);
    }
    mult[largest] = 0;
}

/// `(1/n!) Σ_{k=1}^{n} (−1)^k (k−1)! B_{n,k}`, which equals the divisor sum
/// `Σ_{d|n} (1 + 2(−1)^d)/d` at the `Ψ` point.
pub fn lemma1_lhs_via_bell(table: &BellTable, n: usize) -> Result<ExactRational> {
    let derivative = faa_di_bruno_log_derivative(table, n)?;
    Ok(-derivative / ExactRational::from_integer(factorial(n)))
}

/// `(n!/k!) Σ_{r=1}^{k} (−1)^{k−r} C(k,r) t_r(n)`.
pub fn lemma2_rhs(n: usize, k: usize, table: &TripRepTable) -> Result<BigInt> {
    if k == 0 || k > n {
        return Err(Error::OutOfRange {
            name: "k",
            reason: format!("need 1 <= k <= n, got k={k}, n={n}"),
        });
    }
    table.require(n, k)?;
    let mut sum = BigInt::zero();
    for r in 1..=k {
        let term = BigInt::from(binomial(k as u64, r as u64))
            * BigInt::from(table.get(r, n).expect("bounds checked").clone());
        if (k - r).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let falling = ((k + 1)..=n).fold(BigInt::one(), |acc, i| acc * i);
    Ok(falling * sum)
}

/// `(d/dq)^n log Ψ(q)` at `q = 0` by Faà di Bruno:
/// `Σ_{k=1}^{n} f^{(k)}(1) B_{n,k}` with `f = log`, `f^{(k)}(1) = (−1)^{k−1}(k−1)!`.
pub fn faa_di_bruno_log_derivative(table: &BellTable, n: usize) -> Result<ExactRational> {
    table.require(n)?;
    let mut acc = BigInt::zero();
    let mut k_minus_1_fact = BigInt::one();
    for k in 1..=n {
        if k > 1 {
            k_minus_1_fact *= k - 1;
        }
        let term = &k_minus_1_fact * table.get(n, k).expect("bounds checked");
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(ExactRational::from_integer(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::trep_table;

    fn rat(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn psi_point() {
        let p = psi_derivative_point(6);
        assert_eq!(p, DerivativePoint::from_i64s(&[1, 0, 6, 0, 0, 720]));
        assert_eq!(p.x(1), Some(&int(1)));
        assert_eq!(p.x(2), Some(&int(0)));
        assert_eq!(p.x(0), None);
    }

    #[test]
    fn table_small_entries() {
        let t = bell_table(&psi_derivative_point(6), 6);
        assert_eq!(t.get(3, 1), Some(&int(6)));
        assert_eq!(t.get(3, 3), Some(&int(1)));
        assert_eq!(t.get(3, 2), Some(&int(0)));
        assert_eq!(t.get(0, 0), Some(&int(1)));
        assert_eq!(t.get(4, 0), Some(&int(0)));
        assert_eq!(t.get(3, 4), None);
    }

    #[test]
    fn table_matches_classical_polynomials() {
        // B_{4,2} = 4 x1 x3 + 3 x2^2, B_{5,2} = 5 x1 x4 + 10 x2 x3.
        let p = DerivativePoint::from_i64s(&[2, 3, 5, 7, 11]);
        let t = bell_table(&p, 5);
        assert_eq!(t.get(4, 2), Some(&int(4 * 2 * 5 + 3 * 9)));
        assert_eq!(t.get(5, 2), Some(&int(5 * 2 * 7 + 10 * 3 * 5)));
        // B_{4,3} = 6 x1^2 x2
        assert_eq!(t.get(4, 3), Some(&int(6 * 4 * 3)));
    }

    #[test]
    fn oracle_examples() {
        let p = psi_derivative_point(6);
        assert_eq!(bell_oracle(&p, 3, 2).unwrap(), int(0));
        assert_eq!(bell_oracle(&p, 1, 1).unwrap(), int(1));
        assert_eq!(bell_oracle(&p, 6, 1).unwrap(), int(720));
        assert_eq!(bell_oracle(&p, 0, 0).unwrap(), int(1));
        assert_eq!(bell_oracle(&p, 4, 0).unwrap(), int(0));
        assert_eq!(bell_oracle(&p, 2, 3).unwrap(), int(0));
    }

    #[test]
    fn oracle_counts_set_partitions_at_all_ones() {
        // B_{n,k}(1,1,…) is the Stirling number of the second kind.
        let p = DerivativePoint::from_i64s(&[1; 10]);
        assert_eq!(bell_oracle(&p, 10, 3).unwrap(), int(9330));
        assert_eq!(bell_oracle(&p, 7, 4).unwrap(), int(350));
    }

    #[test]
    fn lemma1_examples() {
        let t = bell_table(&psi_derivative_point(3), 3);
        assert_eq!(lemma1_lhs_via_bell(&t, 1).unwrap(), rat(-1, 1));
        assert_eq!(lemma1_lhs_via_bell(&t, 2).unwrap(), rat(1, 2));
        assert_eq!(lemma1_lhs_via_bell(&t, 3).unwrap(), rat(-4, 3));
        assert!(matches!(
            lemma1_lhs_via_bell(&t, 4),
            Err(Error::InsufficientTable { .. })
        ));
    }

    #[test]
    fn faa_di_bruno_examples() {
        let t = bell_table(&psi_derivative_point(3), 3);
        assert_eq!(faa_di_bruno_log_derivative(&t, 1).unwrap(), rat(1, 1));
        assert_eq!(faa_di_bruno_log_derivative(&t, 2).unwrap(), rat(-1, 1));
        assert_eq!(faa_di_bruno_log_derivative(&t, 3).unwrap(), rat(8, 1));
    }

    #[test]
    fn lemma2_examples() {
        let trep = trep_table(3, 3);
        assert_eq!(lemma2_rhs(3, 1, &trep).unwrap(), int(6));
        assert_eq!(lemma2_rhs(3, 3, &trep).unwrap(), int(1));
        assert_eq!(lemma2_rhs(2, 2, &trep).unwrap(), int(1));
    }

    #[test]
    fn lemma2_errors() {
        let trep = trep_table(3, 2);
        assert!(matches!(
            lemma2_rhs(3, 3, &trep),
            Err(Error::InsufficientTable { .. })
        ));
        assert!(matches!(
            lemma2_rhs(3, 0, &trep),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            lemma2_rhs(2, 3, &trep),
            Err(Error::OutOfRange { .. })
        ));
    }
}
