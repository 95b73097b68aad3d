//! Truncated power series in `q` and `q̄` with [`ZLoop`] coefficients.
//!
//! Truncation is by total degree: a series of truncation `N` keeps the
//! monomials `q^n q̄^m` with `n + m <= N`. Every operation re-truncates, and
//! combining series of different truncation is an error.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::apoly::{owned_binop, APoly};
use super::scalar::ExactScalar;
use super::zloop::ZLoop;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiSeries {
    truncation: u32,
    terms: BTreeMap<(u32, u32), ZLoop>,
}

impl BiSeries {
    pub fn zero(truncation: u32) -> Self {
        BiSeries {
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(truncation: u32) -> Self {
        BiSeries::constant(ZLoop::one(), truncation)
    }

    pub fn constant(c: ZLoop, truncation: u32) -> Self {
        BiSeries::monomial(0, 0, c, truncation)
    }

    /// `c * q^n * q̄^m`, or zero when `n + m` exceeds the truncation.
    pub fn monomial(n: u32, m: u32, c: ZLoop, truncation: u32) -> Self {
        let mut s = BiSeries::zero(truncation);
        s.add_term(n, m, &c);
        s
    }

    pub fn q(truncation: u32) -> Self {
        BiSeries::monomial(1, 0, ZLoop::one(), truncation)
    }

    pub fn qbar(truncation: u32) -> Self {
        BiSeries::monomial(0, 1, ZLoop::one(), truncation)
    }

    pub fn from_terms<I>(truncation: u32, iter: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), ZLoop)>,
    {
        let mut s = BiSeries::zero(truncation);
        for ((n, m), c) in iter {
            s.add_term(n, m, &c);
        }
        s
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn add_term(&mut self, n: u32, m: u32, c: &ZLoop) {
        if n + m > self.truncation || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(n, m)) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&(n, m));
                }
            }
            None => {
                self.terms.insert((n, m), c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, n: u32, m: u32) -> ZLoop {
        self.terms.get(&(n, m)).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, n: u32, m: u32) -> Option<&ZLoop> {
        self.terms.get(&(n, m))
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &ZLoop)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Drops terms above the new (smaller or equal) truncation.
    pub fn truncate(&self, truncation: u32) -> BiSeries {
        BiSeries::from_terms(
            truncation,
            self.terms
                .iter()
                .filter(|(&(n, m), _)| n + m <= truncation)
                .map(|(&k, c)| (k, c.clone())),
        )
    }

    fn check(&self, other: &BiSeries) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch {
                left: self.truncation,
                right: other.truncation,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check(other)?;
        let mut out = self.clone();
        for (&(n, m), c) in &other.terms {
            out.add_term(n, m, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check(other)?;
        let mut out = self.clone();
        for (&(n, m), c) in &other.terms {
            out.add_term(n, m, &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check(other)?;
        let mut out = BiSeries::zero(self.truncation);
        for (&(n1, m1), x) in &self.terms {
            let room = self.truncation - n1 - m1;
            for (&(n2, m2), y) in &other.terms {
                if n2 + m2 <= room {
                    out.add_term(n1 + n2, m1 + m2, &(x * y));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ZLoop) -> BiSeries {
        BiSeries::from_terms(self.truncation, self.terms.iter().map(|(&k, x)| (k, x * c)))
    }

    pub fn scale_apoly(&self, p: &APoly) -> BiSeries {
        BiSeries::from_terms(
            self.truncation,
            self.terms.iter().map(|(&k, x)| (k, x.scale(p))),
        )
    }

    pub fn scale_scalar(&self, c: &ExactScalar) -> BiSeries {
        BiSeries::from_terms(
            self.truncation,
            self.terms.iter().map(|(&k, x)| (k, x.scale_scalar(c))),
        )
    }

    pub fn map_coeffs(&self, f: impl Fn(u32, u32, &ZLoop) -> ZLoop) -> BiSeries {
        BiSeries::from_terms(
            self.truncation,
            self.terms.iter().map(|(&(n, m), x)| ((n, m), f(n, m, x))),
        )
    }

    /// A series is a unit iff its constant coefficient is a unit of the
    /// coefficient ring (a nonzero monomial in `z` and `a`).
    pub fn inv(&self) -> Result<BiSeries> {
        let c0 = self.coeff(0, 0);
        let u = c0
            .inv()
            .map_err(|_| Error::NonUnit(format!("series with constant term {c0}")))?;
        let n_max = self.truncation;
        let mut out: BTreeMap<(u32, u32), ZLoop> = BTreeMap::new();
        out.insert((0, 0), u.clone());
        let neg_u = -&u;
        for d in 1..=n_max {
            for n in 0..=d {
                let m = d - n;
                let mut acc = ZLoop::zero();
                for (&(i, j), s) in self.terms.range((0, 1)..) {
                    if i > n || j > m {
                        continue;
                    }
                    if let Some(x) = out.get(&(n - i, m - j)) {
                        acc = &acc + &(s * x);
                    }
                }
                let val = &neg_u * &acc;
                if !val.is_zero() {
                    out.insert((n, m), val);
                }
            }
        }
        Ok(BiSeries {
            truncation: n_max,
            terms: out,
        })
    }

    /// Complex conjugation on `|z| = 1`: `q <-> q̄`, `z -> 1/z`, `a` real.
    pub fn bar(&self) -> BiSeries {
        BiSeries {
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .map(|(&(n, m), c)| ((m, n), c.invert_z()))
                .collect(),
        }
    }

    /// `z -> -z` in every coefficient.
    pub fn negate_z(&self) -> BiSeries {
        BiSeries {
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, c.negate_z()))
                .collect(),
        }
    }

    fn derive(&self, holo: bool) -> BiSeries {
        // On q^n q̄^m a^k: ∂₁ gives n·(...) - k·a^{k-1}(...), since ∂₁ a = -1.
        BiSeries::from_terms(
            self.truncation,
            self.terms.iter().map(|(&(n, m), c)| {
                let weight = ExactScalar::from_int(if holo { n } else { m } as i64);
                let d = c.map_apoly(|p| &p.scale(&weight) - &p.derivative());
                ((n, m), d)
            }),
        )
    }

    /// `∂/∂t¹` with `q = e^{t¹}` and `a = -t¹ - t̄¹ - 4γ`.
    pub fn d1(&self) -> BiSeries {
        self.derive(true)
    }

    /// `∂/∂t̄¹`.
    pub fn d1bar(&self) -> BiSeries {
        self.derive(false)
    }

    /// `log s` for a series with constant term exactly 1.
    pub fn log(&self) -> Result<BiSeries> {
        if self.coeff(0, 0) != ZLoop::one() {
            return Err(Error::NonUnit(
                "log needs a series with constant term 1".into(),
            ));
        }
        let x = self - &BiSeries::one(self.truncation);
        let mut out = BiSeries::zero(self.truncation);
        let mut power = x.clone();
        for k in 1..=self.truncation as i64 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = &out + &power.scale_scalar(&ExactScalar::new(sign, k));
            power = &power * &x;
        }
        Ok(out)
    }

    /// `exp s` for a series with zero constant term.
    pub fn exp(&self) -> Result<BiSeries> {
        if !self.coeff(0, 0).is_zero() {
            return Err(Error::NotNilpotentSeries);
        }
        let mut out = BiSeries::one(self.truncation);
        let mut power = BiSeries::one(self.truncation);
        let mut fact = ExactScalar::one();
        for k in 1..=self.truncation as i64 {
            power = &power * self;
            fact = fact * ExactScalar::from_int(k);
            out = &out + &power.scale_scalar(&fact.recip()?);
        }
        Ok(out)
    }
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.truncation + 1);
        }
        for ((n, m), c) in &self.terms {
            write!(f, "q^{n} qb^{m} ({c}) + ")?;
        }
        write!(f, "O({})", self.truncation + 1)
    }
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSeries[{self}]")
    }
}

// Operator forms panic on a truncation mismatch; use the `checked_*`
// methods where mixed truncations can reach the call.
impl<'a> Add<&'a BiSeries> for &'a BiSeries {
    type Output = BiSeries;
    fn add(self, rhs: &'a BiSeries) -> BiSeries {
        self.checked_add(rhs).expect("BiSeries add")
    }
}

impl<'a> Sub<&'a BiSeries> for &'a BiSeries {
    type Output = BiSeries;
    fn sub(self, rhs: &'a BiSeries) -> BiSeries {
        self.checked_sub(rhs).expect("BiSeries sub")
    }
}

impl<'a> Mul<&'a BiSeries> for &'a BiSeries {
    type Output = BiSeries;
    fn mul(self, rhs: &'a BiSeries) -> BiSeries {
        self.checked_mul(rhs).expect("BiSeries mul")
    }
}

impl Neg for &BiSeries {
    type Output = BiSeries;
    fn neg(self) -> BiSeries {
        BiSeries {
            truncation: self.truncation,
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Neg for BiSeries {
    type Output = BiSeries;
    fn neg(self) -> BiSeries {
        -&self
    }
}

owned_binop!(Add, add, BiSeries);
owned_binop!(Sub, sub, BiSeries);
owned_binop!(Mul, mul, BiSeries);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    fn qpoly(n: u32, coeffs: &[(u32, u32, i64)]) -> BiSeries {
        BiSeries::from_terms(
            n,
            coeffs
                .iter()
                .map(|&(i, j, c)| ((i, j), ZLoop::scalar(rat(c, 1)))),
        )
    }

    #[test]
    fn geometric_series_inverse() {
        let s = qpoly(3, &[(0, 0, 1), (1, 0, 1)]);
        let expected = qpoly(3, &[(0, 0, 1), (1, 0, -1), (2, 0, 1), (3, 0, -1)]);
        assert_eq!(s.inv().unwrap(), expected);
        assert!(qpoly(3, &[(1, 0, 1)]).inv().is_err());
    }

    #[test]
    fn truncation_mismatch_is_an_error() {
        let x = BiSeries::q(2);
        let y = BiSeries::q(3);
        assert!(matches!(
            x.checked_mul(&y),
            Err(Error::TruncationMismatch { left: 2, right: 3 })
        ));
        assert!(x.checked_add(&y).is_err());
    }

    #[test]
    fn bar_swaps_and_inverts_z() {
        let s = BiSeries::monomial(1, 0, ZLoop::z(), 3);
        assert_eq!(s.bar(), BiSeries::monomial(0, 1, ZLoop::term(-1, 0, rat(1, 1)), 3));
        let a = BiSeries::constant(ZLoop::from_apoly(APoly::a()), 3);
        assert_eq!(a.bar(), a);
    }

    #[test]
    fn derivative_monomial_rules() {
        let qa = BiSeries::monomial(1, 0, ZLoop::from_apoly(APoly::a()), 3);
        let expected = &qa - &BiSeries::q(3);
        assert_eq!(qa.d1(), expected);
        let a2 = BiSeries::constant(ZLoop::from_apoly(APoly::monomial(2, rat(1, 1))), 3);
        assert_eq!(
            a2.d1bar(),
            BiSeries::constant(ZLoop::from_apoly(APoly::monomial(1, rat(-2, 1))), 3)
        );
    }

    #[test]
    fn log_of_one_plus_q() {
        let s = qpoly(3, &[(0, 0, 1), (1, 0, 1)]);
        let expected = BiSeries::from_terms(
            3,
            [
                ((1, 0), ZLoop::scalar(rat(1, 1))),
                ((2, 0), ZLoop::scalar(rat(-1, 2))),
                ((3, 0), ZLoop::scalar(rat(1, 3))),
            ],
        );
        assert_eq!(s.log().unwrap(), expected);
        assert!(qpoly(3, &[(0, 0, 2)]).log().is_err());
    }

    #[test]
    fn exp_round_trip() {
        assert_eq!(BiSeries::zero(4).exp().unwrap(), BiSeries::one(4));
        let s = qpoly(4, &[(0, 0, 1), (1, 0, 1), (0, 1, 1)]);
        assert_eq!(s.log().unwrap().exp().unwrap(), s);
        assert!(BiSeries::one(2).exp().is_err());
    }
}
