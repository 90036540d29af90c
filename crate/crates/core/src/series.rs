//! Truncated formal power series over big integers.
//!
//! A series of order `N` stores the `N + 1` coefficients of `q^0..=q^N` and
//! represents a class modulo `q^(N+1)`. Binary operations on series of
//! different orders truncate to the smaller order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numbers::{is_triangular, ExactRational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    ///
    /// Panics if `coeffs` is empty, since a series of order `N` always has
    /// `N + 1` coefficients.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series needs at least one coefficient"
        );
        Self { coeffs }
    }

    pub fn from_i64s(order: usize, coeffs: &[i64]) -> Self {
        let mut out = Self::zero(order);
        for (slot, &c) in out.coeffs.iter_mut().zip(coeffs) {
            *slot = BigInt::from(c);
        }
        out
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, BigInt::one())
    }

    /// `c·q^exp`, or zero when `exp` exceeds the order.
    pub fn monomial(order: usize, exp: usize, c: BigInt) -> Self {
        let mut out = Self::zero(order);
        if exp <= order {
            out.coeffs[exp] = c;
        }
        out
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&BigInt> {
        self.coeffs.get(i)
    }

    /// Reduces to a smaller order. Orders larger than the current one are
    /// clamped, since the dropped information cannot be recovered.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        Self {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    fn nonzero_terms(&self) -> Vec<(usize, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Cauchy product truncated at the smaller order. The outer loop runs over
    /// the nonzero coefficients of the sparser operand.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let (sparse, dense) = {
            let a = self.nonzero_terms();
            let b = other.nonzero_terms();
            if a.len() <= b.len() {
                (a, other)
            } else {
                (b, self)
            }
        };
        let mut out = Self::zero(order);
        for (i, a) in sparse {
            if i > order {
                break;
            }
            for (j, b) in dense.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    /// `self^exp` by binary exponentiation; `exp = 0` gives the constant 1.
    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse at the same order.
    ///
    /// Only series with constant term `±1` have an inverse with integer
    /// coefficients; anything else is [`Error::NonUnitConstantTerm`].
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.abs() != BigInt::one() {
            return Err(Error::NonUnitConstantTerm(c0.to_string()));
        }
        let terms: Vec<(usize, &BigInt)> = self
            .nonzero_terms()
            .into_iter()
            .filter(|&(i, _)| i > 0)
            .collect();
        let order = self.order();
        let mut inv: Vec<BigInt> = Vec::with_capacity(order + 1);
        // c0 is its own inverse.
        inv.push(c0.clone());
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for &(k, a) in terms.iter().take_while(|(k, _)| *k <= n) {
                acc += a * &inv[n - k];
            }
            inv.push(-(acc * c0));
        }
        Ok(Self { coeffs: inv })
    }

    /// Formal logarithm of a series with constant term 1.
    ///
    /// Solves `A·L' = A'` coefficientwise. Writing `c_n = n·L[n]`, the
    /// recurrence `c_n = n·a_n − Σ_{k=1}^{n−1} c_k·a_{n−k}` stays in the
    /// integers; the only division is the final `L[n] = c_n / n`.
    pub fn formal_log(&self) -> Result<RationalSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstantTerm(self.coeffs[0].to_string()));
        }
        let order = self.order();
        let terms: Vec<(usize, &BigInt)> = self
            .nonzero_terms()
            .into_iter()
            .filter(|&(i, _)| i > 0)
            .collect();
        let mut scaled: Vec<BigInt> = vec![BigInt::zero(); order + 1];
        for n in 1..=order {
            let mut c = BigInt::from(n) * &self.coeffs[n];
            for &(j, a) in terms.iter().take_while(|(j, _)| *j < n) {
                c -= &scaled[n - j] * a;
            }
            scaled[n] = c;
        }
        let coeffs = scaled
            .into_iter()
            .enumerate()
            .map(|(n, c)| {
                if n == 0 {
                    ExactRational::zero()
                } else {
                    ExactRational::new(c, BigInt::from(n))
                }
            })
            .collect();
        Ok(RationalSeries { coeffs })
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: Self) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl fmt::Display for TruncatedSeries {
    /// Renders the coefficient list, e.g. `[1, 1, 0, 1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Truncated series with exact rational coefficients, as produced by
/// [`TruncatedSeries::formal_log`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<ExactRational>,
}

impl RationalSeries {
    pub fn from_coeffs(coeffs: Vec<ExactRational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series needs at least one coefficient"
        );
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&ExactRational> {
        self.coeffs.get(i)
    }
}

/// `Ψ(q) = Σ_{k≥0} q^{k(k+1)/2}` truncated at `order`.
pub fn psi_series(order: usize) -> TruncatedSeries {
    let coeffs = (0..=order)
        .map(|i| {
            if is_triangular(i as u64) {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    TruncatedSeries { coeffs }
}

/// `1 + sign·q^exp` truncated at `order`.
fn binomial_factor(order: usize, exp: usize, sign: i64) -> TruncatedSeries {
    let mut f = TruncatedSeries::one(order);
    if exp <= order {
        f.coeffs[exp] = BigInt::from(sign);
    }
    f
}

/// `∏_{j≥1} (1 + q^j)^2 (1 − q^j)` truncated at `order`.
///
/// Factor `j` is `1 + O(q^j)`, so factors beyond `j = order` are the identity
/// modulo `q^(order+1)`.
pub fn product_form_a(order: usize) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(order);
    for j in 1..=order {
        let plus = binomial_factor(order, j, 1);
        let minus = binomial_factor(order, j, -1);
        acc = acc.mul(&plus).mul(&plus).mul(&minus);
    }
    acc
}

/// `∏_{j≥1} (1 − q^{2j})^2 / (1 − q^j)` truncated at `order`.
pub fn product_form_b(order: usize) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(order);
    for j in 1..=order {
        let even = binomial_factor(order, 2 * j, -1);
        let denom = binomial_factor(order, j, -1)
            .invert()
            .expect("1 - q^j has unit constant term");
        acc = acc.mul(&even).mul(&even).mul(&denom);
    }
    acc
}
