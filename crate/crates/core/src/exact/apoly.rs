//! Laurent polynomials in the real variable `a`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// A Laurent polynomial `Σ c_k a^k` with rational coefficients.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct APoly {
    terms: BTreeMap<i32, ExactScalar>,
}

impl APoly {
    pub fn zero() -> Self {
        APoly::default()
    }

    pub fn one() -> Self {
        APoly::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        APoly::monomial(0, c)
    }

    /// The variable `a` itself.
    pub fn a() -> Self {
        APoly::monomial(1, ExactScalar::one())
    }

    pub fn monomial(exp: i32, c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        APoly { terms }
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i32, ExactScalar)>>(iter: I) -> Self {
        let mut p = APoly::zero();
        for (k, c) in iter {
            p.add_term(k, &c);
        }
        p
    }

    /// Integer-coefficient polynomial `c[0] + c[1] a + ...`.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        APoly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (k as i32, ExactScalar::from_int(c))),
        )
    }

    pub fn add_term(&mut self, exp: i32, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> ExactScalar {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &ExactScalar)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// True when no negative power of `a` occurs.
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().is_none_or(|k| k >= 0)
    }

    pub fn leading_coeff(&self) -> Option<&ExactScalar> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, c: &ExactScalar) -> APoly {
        if c.is_zero() {
            return APoly::zero();
        }
        APoly {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Multiplies by `a^shift`.
    pub fn shift(&self, shift: i32) -> APoly {
        APoly {
            terms: self.terms.iter().map(|(&k, v)| (k + shift, v.clone())).collect(),
        }
    }

    /// A unit of `Q[a, 1/a]` is a nonzero monomial.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn inv(&self) -> Result<APoly> {
        if !self.is_unit() {
            return Err(Error::NonUnit(format!("APoly {self}")));
        }
        let (&k, c) = self.terms.iter().next().unwrap();
        Ok(APoly::monomial(-k, c.recip()?))
    }

    /// `d/da`.
    pub fn derivative(&self) -> APoly {
        APoly::from_terms(
            self.terms
                .iter()
                .filter(|(&k, _)| k != 0)
                .map(|(&k, c)| (k - 1, c * &ExactScalar::from_int(k as i64))),
        )
    }

    /// Substitutes `a -> a + shift`; only defined for genuine polynomials.
    pub fn translate(&self, shift: &ExactScalar) -> Result<APoly> {
        if !self.is_polynomial() {
            return Err(Error::InvalidArgument(
                "translation of a Laurent polynomial".into(),
            ));
        }
        let mut out = APoly::zero();
        for (&k, c) in &self.terms {
            // (a + s)^k by the binomial theorem
            let mut binom = ExactScalar::one();
            for j in 0..=k {
                let term = c * &binom * shift.pow(k - j);
                out.add_term(j, &term);
                binom = binom * ExactScalar::from_int((k - j) as i64)
                    / ExactScalar::from_int((j + 1) as i64);
            }
        }
        Ok(out)
    }

    pub fn eval_f64(&self, a: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&k, c)| c.to_f64() * a.powi(k))
            .sum()
    }

    pub fn eval(&self, a: &ExactScalar) -> Result<ExactScalar> {
        let mut acc = ExactScalar::zero();
        for (&k, c) in &self.terms {
            if k < 0 && a.is_zero() {
                return Err(Error::NonUnit("evaluating a^-k at a = 0".into()));
            }
            acc += &(c * &a.pow(k));
        }
        Ok(acc)
    }
}

impl fmt::Display for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c:?}")?,
                1 => write!(f, "({c:?})a")?,
                _ => write!(f, "({c:?})a^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "APoly[{self}]")
    }
}

impl<'a> Add<&'a APoly> for &'a APoly {
    type Output = APoly;
    fn add(self, rhs: &'a APoly) -> APoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }
}

impl<'a> Sub<&'a APoly> for &'a APoly {
    type Output = APoly;
    fn sub(self, rhs: &'a APoly) -> APoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a APoly> for &'a APoly {
    type Output = APoly;
    fn mul(self, rhs: &'a APoly) -> APoly {
        let (Some(lo1), Some(hi1), Some(lo2), Some(hi2)) =
            (self.min_exp(), self.max_exp(), rhs.min_exp(), rhs.max_exp())
        else {
            return APoly::zero();
        };
        let lo = lo1 + lo2;
        let mut dense = vec![ExactScalar::zero(); (hi1 + hi2 - lo + 1) as usize];
        for (&i, x) in &self.terms {
            for (&j, y) in &rhs.terms {
                dense[(i + j - lo) as usize] += &(x * y);
            }
        }
        APoly {
            terms: dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i32 + lo, c))
                .collect(),
        }
    }
}

impl Neg for &APoly {
    type Output = APoly;
    fn neg(self) -> APoly {
        APoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                (&self).$m(rhs)
            }
        }
    };
}
pub(crate) use owned_binop;

owned_binop!(Add, add, APoly);
owned_binop!(Sub, sub, APoly);
owned_binop!(Mul, mul, APoly);

impl Neg for APoly {
    type Output = APoly;
    fn neg(self) -> APoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    #[test]
    fn zero_coefficients_are_pruned() {
        let p = APoly::from_ints(&[1, 2]);
        let q = APoly::from_ints(&[0, -2]);
        assert_eq!((&p + &q).len(), 1);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn laurent_product() {
        let a = APoly::a();
        let ainv = a.inv().unwrap();
        assert_eq!(&a * &ainv, APoly::one());
        assert!(APoly::from_ints(&[1, 1]).inv().is_err());
    }

    #[test]
    fn derivative_of_laurent_terms() {
        let p = APoly::from_terms([(-1, rat(1, 1)), (0, rat(5, 1)), (2, rat(3, 1))]);
        let dp = p.derivative();
        assert_eq!(dp, APoly::from_terms([(-2, rat(-1, 1)), (1, rat(6, 1))]));
    }

    #[test]
    fn translation_matches_binomial() {
        // (a+1)^2 = a^2 + 2a + 1
        let p = APoly::monomial(2, rat(1, 1));
        assert_eq!(p.translate(&rat(1, 1)).unwrap(), APoly::from_ints(&[1, 2, 1]));
    }
}
