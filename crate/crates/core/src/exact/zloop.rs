//! Laurent polynomials in the loop variable `z` with [`APoly`] coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::apoly::{owned_binop, APoly};
use super::scalar::ExactScalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZLoop {
    terms: BTreeMap<i32, APoly>,
}

impl ZLoop {
    pub fn zero() -> Self {
        ZLoop::default()
    }

    pub fn one() -> Self {
        ZLoop::from_apoly(APoly::one())
    }

    pub fn from_apoly(p: APoly) -> Self {
        ZLoop::monomial(0, p)
    }

    pub fn scalar(c: ExactScalar) -> Self {
        ZLoop::from_apoly(APoly::constant(c))
    }

    /// `p * z^exp`.
    pub fn monomial(exp: i32, p: APoly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(exp, p);
        }
        ZLoop { terms }
    }

    /// `c * z^zexp * a^aexp`.
    pub fn term(zexp: i32, aexp: i32, c: ExactScalar) -> Self {
        ZLoop::monomial(zexp, APoly::monomial(aexp, c))
    }

    pub fn z() -> Self {
        ZLoop::term(1, 0, ExactScalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, APoly)>>(iter: I) -> Self {
        let mut z = ZLoop::zero();
        for (k, p) in iter {
            z.add_term(k, &p);
        }
        z
    }

    pub fn add_term(&mut self, exp: i32, p: &APoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v = &*v + p;
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, p.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> APoly {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &APoly)> + '_ {
        self.terms.iter().map(|(&k, p)| (k, p))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// True when only `z^0` occurs (or the loop is zero).
    pub fn is_z_free(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    /// Splits into the part with `z`-exponents `>= 1` and the part with `<= 0`.
    pub fn z_split(&self) -> (ZLoop, ZLoop) {
        let pos = self.terms.range(1..).map(|(&k, p)| (k, p.clone())).collect();
        let nonpos = self.terms.range(..=0).map(|(&k, p)| (k, p.clone())).collect();
        (ZLoop { terms: pos }, ZLoop { terms: nonpos })
    }

    /// `z -> 1/z` (complex conjugation on the unit circle; `a` is real).
    pub fn invert_z(&self) -> ZLoop {
        ZLoop {
            terms: self.terms.iter().map(|(&k, p)| (-k, p.clone())).collect(),
        }
    }

    /// `z -> -z`.
    pub fn negate_z(&self) -> ZLoop {
        ZLoop {
            terms: self
                .terms
                .iter()
                .map(|(&k, p)| (k, if k % 2 == 0 { p.clone() } else { -p }))
                .collect(),
        }
    }

    /// Multiplies by `z^shift`.
    pub fn shift(&self, shift: i32) -> ZLoop {
        ZLoop {
            terms: self.terms.iter().map(|(&k, p)| (k + shift, p.clone())).collect(),
        }
    }

    pub fn scale(&self, p: &APoly) -> ZLoop {
        ZLoop::from_terms(self.terms.iter().map(|(&k, q)| (k, q * p)))
    }

    pub fn scale_scalar(&self, c: &ExactScalar) -> ZLoop {
        if c.is_zero() {
            return ZLoop::zero();
        }
        ZLoop {
            terms: self.terms.iter().map(|(&k, q)| (k, q.scale(c))).collect(),
        }
    }

    pub fn map_apoly(&self, f: impl Fn(&APoly) -> APoly) -> ZLoop {
        ZLoop::from_terms(self.terms.iter().map(|(&k, p)| (k, f(p))))
    }

    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().next().unwrap().is_unit()
    }

    /// Units of `Q[z, 1/z, a, 1/a]` are the nonzero monomials.
    pub fn inv(&self) -> Result<ZLoop> {
        if self.terms.len() != 1 {
            return Err(Error::NonUnit(format!("ZLoop {self}")));
        }
        let (&k, p) = self.terms.iter().next().unwrap();
        Ok(ZLoop::monomial(-k, p.inv()?))
    }
}

impl fmt::Display for ZLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, p) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "[{p}]")?,
                _ => write!(f, "[{p}]z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ZLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZLoop[{self}]")
    }
}

impl<'a> Add<&'a ZLoop> for &'a ZLoop {
    type Output = ZLoop;
    fn add(self, rhs: &'a ZLoop) -> ZLoop {
        let mut out = self.clone();
        for (&k, p) in &rhs.terms {
            out.add_term(k, p);
        }
        out
    }
}

impl<'a> Sub<&'a ZLoop> for &'a ZLoop {
    type Output = ZLoop;
    fn sub(self, rhs: &'a ZLoop) -> ZLoop {
        let mut out = self.clone();
        for (&k, p) in &rhs.terms {
            out.add_term(k, &-p);
        }
        out
    }
}

impl<'a> Mul<&'a ZLoop> for &'a ZLoop {
    type Output = ZLoop;
    fn mul(self, rhs: &'a ZLoop) -> ZLoop {
        let mut out = ZLoop::zero();
        for (&i, p) in &self.terms {
            for (&j, q) in &rhs.terms {
                out.add_term(i + j, &(p * q));
            }
        }
        out
    }
}

impl Neg for &ZLoop {
    type Output = ZLoop;
    fn neg(self) -> ZLoop {
        ZLoop {
            terms: self.terms.iter().map(|(&k, p)| (k, -p)).collect(),
        }
    }
}

impl Neg for ZLoop {
    type Output = ZLoop;
    fn neg(self) -> ZLoop {
        -&self
    }
}

owned_binop!(Add, add, ZLoop);
owned_binop!(Sub, sub, ZLoop);
owned_binop!(Mul, mul, ZLoop);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    fn zl(terms: &[(i32, i32, i64)]) -> ZLoop {
        let mut z = ZLoop::zero();
        for &(zk, ak, c) in terms {
            z = &z + &ZLoop::term(zk, ak, rat(c, 1));
        }
        z
    }

    #[test]
    fn split_examples() {
        // a z^2 + 3 + z^-1
        let p = zl(&[(2, 1, 1), (0, 0, 3), (-1, 0, 1)]);
        let (pos, nonpos) = p.z_split();
        assert_eq!(pos, zl(&[(2, 1, 1)]));
        assert_eq!(nonpos, zl(&[(0, 0, 3), (-1, 0, 1)]));

        let (pos, nonpos) = ZLoop::zero().z_split();
        assert!(pos.is_zero() && nonpos.is_zero());

        let (pos, nonpos) = zl(&[(1, 0, 1), (-1, 0, -1)]).z_split();
        assert_eq!(pos, ZLoop::z());
        assert_eq!(nonpos, zl(&[(-1, 0, -1)]));
    }

    #[test]
    fn difference_of_squares() {
        // (a + z/a)(a - z/a) = a^2 - z^2/a^2
        let x = zl(&[(0, 1, 1), (1, -1, 1)]);
        let y = zl(&[(0, 1, 1), (1, -1, -1)]);
        assert_eq!(&x * &y, zl(&[(0, 2, 1), (2, -2, -1)]));
    }

    #[test]
    fn monomial_inverse() {
        let m = ZLoop::term(-3, 2, rat(-5, 7));
        assert_eq!(&m * &m.inv().unwrap(), ZLoop::one());
        assert!(zl(&[(0, 0, 1), (1, 0, 1)]).inv().is_err());
    }

    #[test]
    fn negate_z_flips_odd_powers() {
        let p = zl(&[(1, 0, 2), (2, 0, 3), (-1, 0, 1)]);
        assert_eq!(p.negate_z(), zl(&[(1, 0, -2), (2, 0, 3), (-1, 0, -1)]));
    }
}
