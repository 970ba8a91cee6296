use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Rational, RingElem, Scalar, ScalarError};

/// The field Q(√c, √(1−c)) for a fixed rational c ∈ [0, 1].
///
/// When one of c, 1−c, c(1−c) is a rational square the four-element basis is
/// linearly dependent. Elements are then kept in a canonical reduced form, so
/// coefficient equality is still field equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    c: Rational,
    one_minus_c: Rational,
    prod: Rational,
    sqrt_c: Option<Rational>,
    sqrt_1mc: Option<Rational>,
    sqrt_prod: Option<Rational>,
}

impl Tower {
    pub fn new(c: Rational) -> Result<Arc<Tower>, ScalarError> {
        if c.is_negative() || c > Rational::one() {
            return Err(ScalarError::Domain(format!(
                "tower parameter c={c} outside [0,1]"
            )));
        }
        let one_minus_c = c.one_minus();
        let prod = &c * &one_minus_c;
        Ok(Arc::new(Tower {
            sqrt_c: c.sqrt_exact(),
            sqrt_1mc: one_minus_c.sqrt_exact(),
            sqrt_prod: prod.sqrt_exact(),
            c,
            one_minus_c,
            prod,
        }))
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// True when {1, √c, √(1−c), √(c(1−c))} is a Q-basis of the field.
    pub fn is_free(&self) -> bool {
        self.sqrt_c.is_none() && self.sqrt_1mc.is_none() && self.sqrt_prod.is_none()
    }

    pub fn sqrt_c(self: &Arc<Self>) -> TowerScalar {
        TowerScalar::from_parts(
            self,
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
            Rational::zero(),
        )
    }

    pub fn sqrt_one_minus_c(self: &Arc<Self>) -> TowerScalar {
        TowerScalar::from_parts(
            self,
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
        )
    }

    /// A = √(c(1−c)).
    pub fn sqrt_prod(self: &Arc<Self>) -> TowerScalar {
        TowerScalar::from_parts(
            self,
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
        )
    }

    pub fn constant(self: &Arc<Self>, q: Rational) -> TowerScalar {
        TowerScalar::from_parts(
            self,
            q,
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        )
    }
}

/// a + b√c + d√(1−c) + e√(c(1−c)).
///
/// `tower == None` marks a pure rational that combines with any tower.
#[derive(Clone)]
pub struct TowerScalar {
    tower: Option<Arc<Tower>>,
    a: Rational,
    b: Rational,
    d: Rational,
    e: Rational,
}

fn same_tower(x: &Arc<Tower>, y: &Arc<Tower>) -> bool {
    Arc::ptr_eq(x, y) || x.c == y.c
}

impl TowerScalar {
    pub fn rational(q: Rational) -> Self {
        TowerScalar {
            tower: None,
            a: q,
            b: Rational::zero(),
            d: Rational::zero(),
            e: Rational::zero(),
        }
    }

    pub fn from_parts(
        tower: &Arc<Tower>,
        a: Rational,
        b: Rational,
        d: Rational,
        e: Rational,
    ) -> Self {
        let mut x = TowerScalar {
            tower: Some(tower.clone()),
            a,
            b,
            d,
            e,
        };
        x.normalize();
        x
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        self.tower.as_ref()
    }

    /// Coefficients (a, b, d, e) in canonical form.
    pub fn parts(&self) -> (&Rational, &Rational, &Rational, &Rational) {
        (&self.a, &self.b, &self.d, &self.e)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.d.is_zero() && self.e.is_zero()
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    fn normalize(&mut self) {
        let Some(t) = self.tower.clone() else {
            return;
        };
        if t.is_free() {
            return;
        }
        if !self.e.is_zero() {
            let e = std::mem::take(&mut self.e);
            if let Some(u) = &t.sqrt_prod {
                self.a = &self.a + &(&e * u);
            } else if let Some(s) = &t.sqrt_c {
                // √(c(1−c)) = s·√(1−c)
                self.d = &self.d + &(&e * s);
            } else if let Some(v) = &t.sqrt_1mc {
                self.b = &self.b + &(&e * v);
            } else {
                self.e = e;
            }
        }
        if !self.b.is_zero() {
            if let Some(s) = &t.sqrt_c {
                let b = std::mem::take(&mut self.b);
                self.a = &self.a + &(&b * s);
            }
        }
        if !self.d.is_zero() {
            if let Some(v) = &t.sqrt_1mc {
                let d = std::mem::take(&mut self.d);
                self.a = &self.a + &(&d * v);
            } else if let Some(u) = &t.sqrt_prod {
                // Here c ≠ 0 and √(1−c) = u/√c = (u/c)·√c.
                let d = std::mem::take(&mut self.d);
                self.b = &self.b + &(&(&d * u) / &t.c);
            }
        }
    }

    fn join(&self, rhs: &Self) -> Result<Option<Arc<Tower>>, ScalarError> {
        match (&self.tower, &rhs.tower) {
            (Some(x), Some(y)) if !same_tower(x, y) => {
                Err(ScalarError::TowerMismatch(x.c.to_string(), y.c.to_string()))
            }
            (Some(x), _) => Ok(Some(x.clone())),
            (None, y) => Ok(y.clone()),
        }
    }

    fn build(
        tower: Option<Arc<Tower>>,
        a: Rational,
        b: Rational,
        d: Rational,
        e: Rational,
    ) -> Self {
        let mut x = TowerScalar { tower, a, b, d, e };
        x.normalize();
        x
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let t = self.join(rhs)?;
        Ok(Self::build(
            t,
            &self.a + &rhs.a,
            &self.b + &rhs.b,
            &self.d + &rhs.d,
            &self.e + &rhs.e,
        ))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let t = self.join(rhs)?;
        Ok(Self::build(
            t,
            &self.a - &rhs.a,
            &self.b - &rhs.b,
            &self.d - &rhs.d,
            &self.e - &rhs.e,
        ))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let t = self.join(rhs)?;
        let Some(tw) = t.clone() else {
            return Ok(Self::rational(&self.a * &rhs.a));
        };
        if self.is_rational() {
            return Ok(Self::build(
                t,
                &self.a * &rhs.a,
                &self.a * &rhs.b,
                &self.a * &rhs.d,
                &self.a * &rhs.e,
            ));
        }
        if rhs.is_rational() {
            return Ok(Self::build(
                t,
                &self.a * &rhs.a,
                &self.b * &rhs.a,
                &self.d * &rhs.a,
                &self.e * &rhs.a,
            ));
        }
        let (a1, b1, d1, e1) = (&self.a, &self.b, &self.d, &self.e);
        let (a2, b2, d2, e2) = (&rhs.a, &rhs.b, &rhs.d, &rhs.e);
        let c = &tw.c;
        let c1 = &tw.one_minus_c;
        let a =
            &(&(a1 * a2) + &(c * &(b1 * b2))) + &(&(c1 * &(d1 * d2)) + &(&tw.prod * &(e1 * e2)));
        let b = &(&(a1 * b2) + &(b1 * a2)) + &(c1 * &(&(d1 * e2) + &(e1 * d2)));
        let d = &(&(a1 * d2) + &(d1 * a2)) + &(c * &(&(b1 * e2) + &(e1 * b2)));
        let e = &(&(a1 * e2) + &(e1 * a2)) + &(&(b1 * d2) + &(d1 * b2));
        Ok(Self::build(t, a, b, d, e))
    }

    fn conj(&self, flip_b: bool, flip_d: bool) -> Self {
        let f = |x: &Rational, on: bool| if on { -x } else { x.clone() };
        TowerScalar {
            tower: self.tower.clone(),
            a: self.a.clone(),
            b: f(&self.b, flip_b),
            d: f(&self.d, flip_d),
            e: f(&self.e, flip_b ^ flip_d),
        }
    }

    /// Inverse via the product of the three nontrivial conjugates over the norm.
    pub fn checked_inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.is_rational() {
            let r = self.a.recip().ok_or(ScalarError::DivisionByZero)?;
            return Ok(Self::build(
                self.tower.clone(),
                r,
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
            ));
        }
        let others = self
            .conj(true, false)
            .checked_mul(&self.conj(false, true))?
            .checked_mul(&self.conj(true, true))?;
        let norm = self.checked_mul(&others)?;
        debug_assert!(norm.is_rational(), "norm form left the base field");
        let r = norm.a.recip().ok_or(ScalarError::DivisionByZero)?;
        others.checked_mul(&TowerScalar::rational(r))
    }

    /// Reinterpret an element of the tower for 1−c as an element of `target` (tower for c).
    pub fn remap_complement(&self, target: &Arc<Tower>) -> Result<Self, ScalarError> {
        match &self.tower {
            None => Ok(self.clone()),
            Some(t) => {
                if t.c != target.one_minus_c {
                    return Err(ScalarError::TowerMismatch(
                        t.c.to_string(),
                        target.one_minus_c.to_string(),
                    ));
                }
                Ok(Self::from_parts(
                    target,
                    self.a.clone(),
                    self.d.clone(),
                    self.b.clone(),
                    self.e.clone(),
                ))
            }
        }
    }

    pub fn eval_f64(&self) -> f64 {
        let Some(t) = &self.tower else {
            return self.a.to_f64();
        };
        let c = t.c.to_f64();
        self.a.to_f64()
            + self.b.to_f64() * c.sqrt()
            + self.d.to_f64() * (1.0 - c).sqrt()
            + self.e.to_f64() * (c * (1.0 - c)).sqrt()
    }
}

impl PartialEq for TowerScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.a != other.a || self.b != other.b || self.d != other.d || self.e != other.e {
            return false;
        }
        match (&self.tower, &other.tower) {
            (Some(x), Some(y)) => same_tower(x, y) || self.is_rational(),
            _ => true,
        }
    }
}

impl fmt::Debug for TowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for TowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        write!(f, "[{}, {}, {}, {}]", self.a, self.b, self.d, self.e)
    }
}

impl RingElem for TowerScalar {
    fn zero() -> Self {
        TowerScalar::rational(Rational::zero())
    }
    fn one() -> Self {
        TowerScalar::rational(Rational::one())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("tower mismatch")
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("tower mismatch")
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("tower mismatch")
    }
    fn neg_ref(&self) -> Self {
        TowerScalar {
            tower: self.tower.clone(),
            a: -&self.a,
            b: -&self.b,
            d: -&self.d,
            e: -&self.e,
        }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.d.is_zero() && self.e.is_zero()
    }
}

impl Scalar for TowerScalar {
    const EXACT: bool = true;
    const RING: super::Ring = super::Ring::Tower;

    fn from_rational(q: &Rational) -> Self {
        TowerScalar::rational(q.clone())
    }
    fn inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
    fn to_f64(&self) -> f64 {
        self.eval_f64()
    }
    fn to_json_string(&self) -> String {
        self.to_string()
    }
    fn sqrt_pair(c: &Rational) -> Result<(Self, Self), ScalarError> {
        let t = Tower::new(c.clone())?;
        Ok((t.sqrt_c(), t.sqrt_one_minus_c()))
    }
}

macro_rules! tower_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for TowerScalar {
            type Output = TowerScalar;
            fn $method(self, rhs: TowerScalar) -> TowerScalar {
                self.$checked(&rhs).expect("tower mismatch")
            }
        }
        impl<'a> $tr<&'a TowerScalar> for &'a TowerScalar {
            type Output = TowerScalar;
            fn $method(self, rhs: &'a TowerScalar) -> TowerScalar {
                self.$checked(rhs).expect("tower mismatch")
            }
        }
    };
}

tower_op!(Add, add, checked_add);
tower_op!(Sub, sub, checked_sub);
tower_op!(Mul, mul, checked_mul);

impl Neg for TowerScalar {
    type Output = TowerScalar;
    fn neg(self) -> TowerScalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn tw(n: i64, d: i64) -> Arc<Tower> {
        Tower::new(q(n, d)).unwrap()
    }

    #[test]
    fn sqrt_c_times_sqrt_one_minus_c_is_prod() {
        let t = tw(1, 3);
        let p = &t.sqrt_c() * &t.sqrt_one_minus_c();
        assert_eq!(p.parts(), (&q(0, 1), &q(0, 1), &q(0, 1), &q(1, 1)));
    }

    #[test]
    fn half_tower_squares_to_half() {
        let t = tw(1, 2);
        let s = t.sqrt_c();
        assert_eq!(&s * &s, TowerScalar::rational(q(1, 2)));
        // At c = 1/2 the two square roots coincide.
        assert_eq!(t.sqrt_c(), t.sqrt_one_minus_c());
        assert_eq!(t.sqrt_prod(), TowerScalar::rational(q(1, 2)));
    }

    #[test]
    fn difference_of_squares_third() {
        let t = tw(1, 3);
        let one = TowerScalar::one();
        let s = t.sqrt_c();
        assert_eq!(&(&one + &s) * &(&one - &s), TowerScalar::rational(q(2, 3)));
    }

    #[test]
    fn zero_tests() {
        let t = tw(1, 3);
        assert!(t.constant(q(0, 1)).is_zero());
        assert!(!t.constant(q(1, 2)).is_zero());
        // √c·√c − c vanishes; the reduced form of a genuinely nonzero value does not.
        let s = t.sqrt_c();
        assert!((&(&s * &s) - &t.constant(q(1, 3))).is_zero());
        let x = TowerScalar::from_parts(&t, q(-1, 3), q(0, 1), q(0, 1), q(1, 1));
        assert!(!x.is_zero());
        let unit = TowerScalar::from_parts(&t, q(2, 1), q(1, 1), q(-1, 1), q(3, 1));
        assert!(!(&x * &unit).is_zero());
    }

    #[test]
    fn mismatched_towers_error() {
        let a = tw(1, 3).sqrt_c();
        let b = tw(2, 5).sqrt_c();
        assert!(matches!(
            a.checked_mul(&b),
            Err(ScalarError::TowerMismatch(_, _))
        ));
    }

    #[test]
    fn endpoint_towers_collapse_to_rationals() {
        let t = tw(1, 1);
        assert_eq!(t.sqrt_c(), TowerScalar::one());
        assert!(t.sqrt_one_minus_c().is_zero());
        let t0 = tw(0, 1);
        assert!(t0.sqrt_c().is_zero());
        assert_eq!(t0.sqrt_one_minus_c(), TowerScalar::one());
    }

    #[test]
    fn square_c_reduces() {
        let t = tw(1, 4);
        assert!(!t.is_free());
        assert_eq!(t.sqrt_c(), TowerScalar::rational(q(1, 2)));
        let x = &t.sqrt_prod() - &(&t.sqrt_one_minus_c() * &t.constant(q(1, 2)));
        assert!(x.is_zero());
    }

    #[test]
    fn complement_remap_swaps_roots() {
        let t = tw(1, 3);
        let u = tw(2, 3);
        let x = TowerScalar::from_parts(&u, q(1, 1), q(2, 1), q(3, 1), q(4, 1));
        let y = x.remap_complement(&t).unwrap();
        assert_eq!(y.parts(), (&q(1, 1), &q(3, 1), &q(2, 1), &q(4, 1)));
        assert!((x.eval_f64() - y.eval_f64()).abs() < 1e-12);
    }

    fn small_q() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=9).prop_map(|(n, d)| Rational::new(n, d))
    }

    fn element(t: Arc<Tower>) -> impl Strategy<Value = TowerScalar> {
        (small_q(), small_q(), small_q(), small_q())
            .prop_map(move |(a, b, d, e)| TowerScalar::from_parts(&t, a, b, d, e))
    }

    fn towers() -> impl Strategy<Value = Arc<Tower>> {
        prop_oneof![
            Just(tw(1, 3)),
            Just(tw(2, 5)),
            Just(tw(1, 2)),
            Just(tw(1, 4)),
            Just(tw(1, 5)),
            Just(tw(3, 7)),
        ]
    }

    fn triple() -> impl Strategy<Value = (TowerScalar, TowerScalar, TowerScalar)> {
        towers().prop_flat_map(|t| (element(t.clone()), element(t.clone()), element(t)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms((x, y, z) in triple()) {
            prop_assert!((&(&(&x * &y) * &z) - &(&x * &(&y * &z))).is_zero());
            prop_assert!((&(&x * &(&y + &z)) - &(&(&x * &y) + &(&x * &z))).is_zero());
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        }

        #[test]
        fn inverse_is_two_sided((x, _, _) in triple()) {
            prop_assume!(!x.is_zero());
            let inv = x.checked_inv().unwrap();
            prop_assert_eq!(&x * &inv, TowerScalar::one());
        }

        #[test]
        fn float_evaluation_is_a_homomorphism((x, y, _) in triple()) {
            let p = (&x * &y).eval_f64();
            let scale = 1.0 + x.eval_f64().abs() * y.eval_f64().abs();
            prop_assert!((p - x.eval_f64() * y.eval_f64()).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn exact_and_float_zero_tests_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut tried = 0;
        while tried < 100 {
            let den = rng.random_range(2i64..60);
            let num = rng.random_range(1i64..den);
            let c = q(num, den);
            let t = Tower::new(c).unwrap();
            if !t.is_free() {
                continue;
            }
            tried += 1;
            let s = t.sqrt_c();
            let v = t.sqrt_one_minus_c();
            let zero = &(&(&s * &v) * &(&s * &v)) - &t.constant(&q(num, den) * &q(den - num, den));
            assert!(zero.is_zero() && zero.eval_f64().abs() < 1e-12);
            let coeffs: Vec<i64> = (0..4).map(|_| rng.random_range(-5i64..=5)).collect();
            let x = TowerScalar::from_parts(
                &t,
                q(coeffs[0], 1),
                q(coeffs[1], 1),
                q(coeffs[2], 1),
                q(coeffs[3], 1),
            );
            assert_eq!(
                x.is_zero(),
                x.eval_f64().abs() < 1e-12,
                "c={num}/{den} x={x}"
            );
        }
    }
}
