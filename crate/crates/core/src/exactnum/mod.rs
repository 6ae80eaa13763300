//! Exact scalars: rationals and multiquadratic surds.
//!
//! Nothing downstream of this module makes a decision from a floating-point
//! value; `to_f64` exists for display only.

mod quad;
mod rational;

use std::fmt;

use thiserror::Error;

pub use quad::{solve_quadratic, sqrt_rational, square_decompose, QuadNum};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("square root of negative rational {0}")]
    NegativeRadicand(Rational),
    #[error("negative discriminant {0}")]
    NegativeDiscriminant(Rational),
    #[error("leading coefficient of quadratic is zero")]
    ZeroLeadingCoefficient,
    #[error("radicand of {0} does not fit in 64 bits")]
    RadicandOverflow(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational {0:?}")]
    Rational(String),
    #[error("malformed quadratic surd {0:?}")]
    Quad(String),
}

/// Exact ordered field element usable as a point coordinate.
pub trait Scalar: Clone + Ord + fmt::Display + fmt::Debug + Send + Sync + From<Rational> {
    fn zero() -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn as_rational(&self) -> Option<Rational>;
}

macro_rules! scalar_impl {
    ($t:ty, $as_rational:expr) => {
        impl Scalar for $t {
            fn zero() -> Self {
                <$t>::zero()
            }
            fn add_ref(&self, rhs: &Self) -> Self {
                self + rhs
            }
            fn sub_ref(&self, rhs: &Self) -> Self {
                self - rhs
            }
            fn mul_ref(&self, rhs: &Self) -> Self {
                self * rhs
            }
            fn as_rational(&self) -> Option<Rational> {
                $as_rational(self)
            }
        }
    };
}
scalar_impl!(Rational, |x: &Rational| Some(x.clone()));
scalar_impl!(QuadNum, QuadNum::to_rational);

/// Squared Euclidean distance between two points of equal dimension.
pub fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| {
        let d = x.sub_ref(y);
        acc.add_ref(&d.mul_ref(&d))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| Rational::new(p, q))
    }

    fn quad() -> impl Strategy<Value = QuadNum> {
        let radicands = prop::sample::select(vec![1u64, 2, 3, 5, 6, 10, 15, 21]);
        prop::collection::vec((rational(), radicands), 0..4).prop_map(|terms| {
            terms.into_iter().fold(QuadNum::zero(), |acc, (c, r)| {
                &acc + &QuadNum::term(c, r).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.recip(), Rational::one());
            }
        }

        #[test]
        fn quad_ring_axioms(a in quad(), b in quad(), c in quad()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn quad_float_agreement(a in quad(), b in quad()) {
            let prod = &a * &b;
            let expect = a.to_f64() * b.to_f64();
            prop_assert!((prod.to_f64() - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
            let sum = &a + &b;
            prop_assert!((sum.to_f64() - (a.to_f64() + b.to_f64())).abs() < 1e-9);
        }

        #[test]
        fn quad_order_matches_float(a in quad(), b in quad()) {
            let diff = a.to_f64() - b.to_f64();
            if diff.abs() > 1e-9 {
                prop_assert_eq!(a.cmp(&b), diff.partial_cmp(&0.0).unwrap());
            }
        }

        #[test]
        fn sqrt_squares_back(p in 0i64..5000, q in 1i64..500) {
            let r = Rational::new(p, q);
            let root = sqrt_rational(&r).unwrap();
            prop_assert_eq!(root.square(), QuadNum::from(r));
        }

        #[test]
        fn text_round_trip(a in quad()) {
            let text = a.to_string();
            prop_assert_eq!(text.parse::<QuadNum>().unwrap(), a);
        }

        #[test]
        fn rational_quad_lossless(a in rational()) {
            prop_assert_eq!(QuadNum::from(a.clone()).to_rational(), Some(a));
        }
    }
}
