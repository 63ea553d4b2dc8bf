//! Coordinate vectors for divisor classes on the resolution and on the
//! singular surface. The two lattices get distinct types so a class can never
//! be fed to the wrong intersection form.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{serde_rat_vec, Rat};

macro_rules! class_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(#[serde(with = "serde_rat_vec")] pub Vec<Rat>);

        impl $name {
            pub fn zero(len: usize) -> Self {
                Self(vec![Rat::zero(); len])
            }

            pub fn unit(len: usize, index: usize) -> Self {
                let mut v = Self::zero(len);
                v.0[index] = crate::rational::one();
                v
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn coords(&self) -> &[Rat] {
                &self.0
            }

            pub fn scale(&self, s: &Rat) -> Self {
                Self(self.0.iter().map(|v| v * s).collect())
            }

            /// `self + s * other`
            pub fn add_scaled(&self, s: &Rat, other: &Self) -> Self {
                assert_eq!(self.len(), other.len(), "class length mismatch");
                Self(
                    self.0
                        .iter()
                        .zip(&other.0)
                        .map(|(a, b)| if b.is_zero() { a.clone() } else { a + s * b })
                        .collect(),
                )
            }

            pub fn is_integral(&self) -> bool {
                self.0.iter().all(|v| v.is_integer())
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                assert_eq!(self.len(), rhs.len(), "class length mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                assert_eq!(self.len(), rhs.len(), "class length mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                &self + &rhs
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                &self - &rhs
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|v| -v).collect())
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                -&self
            }
        }

        impl Mul<&$name> for &Rat {
            type Output = $name;
            fn mul(self, rhs: &$name) -> $name {
                rhs.scale(self)
            }
        }
    };
}

class_vector!(
    /// Class on the resolution, over the basis `(Q, F, E1, ..., E(m+4))`.
    DivisorClass
);

class_vector!(
    /// Class on the singular surface, over the pushforward basis `(F, E1, ..., E(m+4))`.
    SingularClass
);
