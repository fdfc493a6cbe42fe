use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::{add, mul, sub, IntMatrix};
use crate::error::{Error, Result};

/// Integer polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![1] }
    }

    /// `t - c`
    pub fn linear(c: i64) -> Self {
        IntPolynomial::new(vec![-c, 1])
    }

    /// `t^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[0] = -1;
        c[n] = 1;
        IntPolynomial::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn eval(&self, t: i64) -> Result<i64> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0i64, |acc, &c| add(mul(acc, t)?, c))
    }

    pub fn mul(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        if self.is_zero() || other.is_zero() {
            return Ok(IntPolynomial::zero());
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add(out[i + j], mul(a, b)?)?;
            }
        }
        Ok(IntPolynomial::new(out))
    }

    pub fn pow(&self, k: u32) -> Result<IntPolynomial> {
        (0..k).try_fold(IntPolynomial::one(), |acc, _| acc.mul(self))
    }

    /// Division by a monic divisor: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> Result<(IntPolynomial, IntPolynomial)> {
        if !divisor.is_monic() {
            return Err(Error::NotMonic);
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((IntPolynomial::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd];
            quot[k] = q;
            if q != 0 {
                for (j, &c) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = sub(rem[k + j], mul(q, c)?)?;
                }
            }
        }
        rem.truncate(dd);
        Ok((IntPolynomial::new(quot), IntPolynomial::new(rem)))
    }
}

impl From<Vec<i64>> for IntPolynomial {
    fn from(c: Vec<i64>) -> Self {
        IntPolynomial::new(c)
    }
}

impl From<IntPolynomial> for Vec<i64> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `det(tI - m)` by the Faddeev-LeVerrier recurrence. The divisions by `k`
/// are exact over the integers and are checked as such.
pub fn char_poly(m: &IntMatrix) -> Result<IntPolynomial> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![0i64; n + 1];
    coeffs[n] = 1;
    // M_1 = I, c_{n-1} = -tr(A); M_k = A M_{k-1} + c_{n-k+1} I
    let mut mk = IntMatrix::identity(n);
    for k in 1..=n {
        let am = m.mul(&mk)?;
        let tr = am.trace()?;
        let kk = k as i64;
        if tr % kk != 0 {
            return Err(Error::Inconsistent(
                "non-integral Faddeev-LeVerrier step".into(),
            ));
        }
        let c = -(tr / kk);
        coeffs[n - k] = c;
        let mut next = am;
        for i in 0..n {
            next.set(i, i, add(next.get(i, i), c)?);
        }
        mk = next;
    }
    Ok(IntPolynomial::new(coeffs))
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// The `d`-th cyclotomic polynomial, from `t^d - 1 = prod_{e | d} Phi_e`.
pub fn cyclotomic(d: u64) -> IntPolynomial {
    assert!(d >= 1, "cyclotomic index must be positive");
    let mut p = IntPolynomial::x_pow_minus_one(d as usize);
    for e in divisors(d) {
        if e < d {
            let (q, r) = p
                .div_rem_monic(&cyclotomic(e))
                .expect("cyclotomic polynomials are monic");
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p
}

/// A polynomial written as `prod Phi_d^m * remainder`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloFactorization {
    /// index `d` -> multiplicity `m`
    pub factors: BTreeMap<u64, u32>,
    pub remainder: IntPolynomial,
}

impl CycloFactorization {
    pub fn from_factors<I: IntoIterator<Item = (u64, u32)>>(factors: I) -> Self {
        let mut map = BTreeMap::new();
        for (d, m) in factors {
            if m > 0 {
                *map.entry(d).or_insert(0) += m;
            }
        }
        CycloFactorization {
            factors: map,
            remainder: IntPolynomial::one(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.remainder == IntPolynomial::one()
    }

    pub fn multiplicity(&self, d: u64) -> u32 {
        self.factors.get(&d).copied().unwrap_or(0)
    }

    /// Degree of the factored polynomial.
    pub fn degree(&self) -> usize {
        let cyc: u64 = self
            .factors
            .iter()
            .map(|(&d, &m)| euler_phi(d) * u64::from(m))
            .sum();
        cyc as usize + self.remainder.degree().unwrap_or(0)
    }

    pub fn expand(&self) -> Result<IntPolynomial> {
        self.factors
            .iter()
            .try_fold(self.remainder.clone(), |acc, (&d, &m)| {
                acc.mul(&cyclotomic(d).pow(m)?)
            })
    }

    /// Compact form such as `Phi5*Phi1^2`; the empty product prints as `1`.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .rev()
            .map(|(&d, &m)| {
                if m == 1 {
                    format!("Phi{d}")
                } else {
                    format!("Phi{d}^{m}")
                }
            })
            .collect();
        if !self.is_complete() {
            parts.push(format!("({})", self.remainder));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for CycloFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloFactorization({})", self.label())
    }
}

/// Greedy exact division by `Phi_d` for `d` in `candidates` until none divides.
pub fn cyclo_factorize(p: &IntPolynomial, candidates: &[u64]) -> Result<CycloFactorization> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let mut rest = p.clone();
    let mut factors = BTreeMap::new();
    let mut cands: Vec<u64> = candidates.to_vec();
    cands.sort_unstable();
    cands.dedup();
    for d in cands.into_iter().rev() {
        let phi = cyclotomic(d);
        loop {
            if rest.degree() < phi.degree() {
                break;
            }
            let (q, r) = rest.div_rem_monic(&phi)?;
            if !r.is_zero() {
                break;
            }
            rest = q;
            *factors.entry(d).or_insert(0) += 1;
        }
    }
    Ok(CycloFactorization {
        factors,
        remainder: rest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::new(c.to_vec())
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), poly(&[-1, 1]));
        assert_eq!(cyclotomic(2), poly(&[1, 1]));
        assert_eq!(cyclotomic(4), poly(&[1, 0, 1]));
        assert_eq!(cyclotomic(9), poly(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(cyclotomic(6), poly(&[1, -1, 1]));
    }

    #[test]
    fn char_poly_basic() {
        assert_eq!(
            char_poly(&IntMatrix::identity(2)).unwrap(),
            poly(&[1, -2, 1])
        );
        assert_eq!(
            char_poly(&IntMatrix::diagonal(&[1, -1])).unwrap(),
            poly(&[-1, 0, 1])
        );
        assert!(char_poly(&IntMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn factorize_known_profiles() {
        let f = cyclo_factorize(&poly(&[1, -1, 0, 0, 0, -1, 1]), &[1, 5]).unwrap();
        assert_eq!(f.factors, BTreeMap::from([(1, 2), (5, 1)]));
        assert!(f.is_complete());
        let f = cyclo_factorize(&poly(&[-1, 1]), &[1]).unwrap();
        assert_eq!(f.factors, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn factorize_leaves_remainder() {
        // t^2 + 2 has no cyclotomic factor
        let f = cyclo_factorize(&poly(&[2, 0, 1]), &[1, 2, 4]).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.remainder, poly(&[2, 0, 1]));
        assert_eq!(f.degree(), 2);
        assert_eq!(cyclo_factorize(&poly(&[2, 2]), &[1]), Err(Error::NotMonic));
    }

    #[test]
    fn display() {
        assert_eq!(cyclotomic(9).to_string(), "t^6 + t^3 + 1");
        assert_eq!(poly(&[1, -1, 0, 0, 0, -1, 1]).to_string(), "t^6 - t^5 - t + 1");
        assert_eq!(
            CycloFactorization::from_factors([(5, 1), (1, 2)]).label(),
            "Phi5*Phi1^2"
        );
    }

    #[test]
    fn totient() {
        let phis: Vec<u64> = (1..=12).map(euler_phi).collect();
        assert_eq!(phis, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }
}
