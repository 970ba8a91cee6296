use std::fmt;

use super::{RingElem, Scalar};

/// re + i·im over a real scalar ring.
#[derive(Clone, PartialEq)]
pub struct ComplexScalar<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> ComplexScalar<S> {
    pub fn new(re: S, im: S) -> Self {
        ComplexScalar { re, im }
    }

    pub fn real(re: S) -> Self {
        ComplexScalar { re, im: S::zero() }
    }

    pub fn imag(im: S) -> Self {
        ComplexScalar { re: S::zero(), im }
    }

    pub fn i() -> Self {
        Self::imag(S::one())
    }

    pub fn conj(&self) -> Self {
        ComplexScalar {
            re: self.re.clone(),
            im: self.im.neg_ref(),
        }
    }

    /// |z|² = re² + im².
    pub fn norm_sqr(&self) -> S {
        self.re
            .mul_ref(&self.re)
            .add_ref(&self.im.mul_ref(&self.im))
    }

    pub fn scale(&self, s: &S) -> Self {
        ComplexScalar {
            re: self.re.mul_ref(s),
            im: self.im.mul_ref(s),
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr().inv()?;
        Some(self.conj().scale(&n))
    }
}

impl<S: Scalar> fmt::Debug for ComplexScalar<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl<S: Scalar> RingElem for ComplexScalar<S> {
    fn zero() -> Self {
        ComplexScalar {
            re: S::zero(),
            im: S::zero(),
        }
    }
    fn one() -> Self {
        Self::real(S::one())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        ComplexScalar {
            re: self.re.add_ref(&rhs.re),
            im: self.im.add_ref(&rhs.im),
        }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        ComplexScalar {
            re: self.re.sub_ref(&rhs.re),
            im: self.im.sub_ref(&rhs.im),
        }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.im.is_zero() {
            return rhs.scale(&self.re);
        }
        if rhs.im.is_zero() {
            return self.scale(&rhs.re);
        }
        ComplexScalar {
            re: self.re.mul_ref(&rhs.re).sub_ref(&self.im.mul_ref(&rhs.im)),
            im: self.re.mul_ref(&rhs.im).add_ref(&self.im.mul_ref(&rhs.re)),
        }
    }
    fn neg_ref(&self) -> Self {
        ComplexScalar {
            re: self.re.neg_ref(),
            im: self.im.neg_ref(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn cq() -> impl Strategy<Value = ComplexScalar<Rational>> {
        (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
            .prop_map(|(a, b, c, d)| ComplexScalar::new(Rational::new(a, b), Rational::new(c, d)))
    }

    proptest! {
        #[test]
        fn conjugation_is_multiplicative_involution(z in cq(), w in cq()) {
            prop_assert_eq!(z.conj().conj(), z.clone());
            prop_assert_eq!(z.mul_ref(&w).conj(), z.conj().mul_ref(&w.conj()));
            prop_assert!(!z.norm_sqr().is_negative());
        }
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = ComplexScalar::<Rational>::i();
        assert_eq!(
            i.mul_ref(&i),
            ComplexScalar::real(Rational::from_integer(-1))
        );
        let z = ComplexScalar::new(Rational::new(3, 1), Rational::new(4, 1));
        assert_eq!(z.mul_ref(&z.inv().unwrap()), ComplexScalar::one());
    }
}
