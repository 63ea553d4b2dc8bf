//! Passing between the resolution and the singular surface `S`, which has one
//! point of type `1/m(1,1)` where `Q` is contracted.
//!
//! Classes on `S` live in the pushforward basis `(F, E1, ..., E(m+4))`;
//! intersection numbers on `S` are those of numerical pullbacks.

use crate::classes::{DivisorClass, SingularClass};
use crate::curves::CurveRef;
use crate::error::{Error, Result};
use crate::picard::{SurfaceLattice, SurfaceModel, Q_INDEX};
use crate::rational::{int, Rat};

impl SurfaceModel {
    pub fn singular_rank(&self) -> usize {
        self.m() + 5
    }

    pub fn singular_zero(&self) -> SingularClass {
        SingularClass::zero(self.singular_rank())
    }

    pub fn singular_from(&self, coords: Vec<Rat>) -> Result<SingularClass> {
        if coords.len() != self.singular_rank() {
            return Err(Error::InvalidClass(format!(
                "expected {} coordinates on S, got {}",
                self.singular_rank(),
                coords.len()
            )));
        }
        Ok(SingularClass(coords))
    }

    fn check_singular(&self, d: &SingularClass) -> Result<()> {
        if d.len() != self.singular_rank() {
            return Err(Error::InvalidClass(format!(
                "class on S has {} coordinates, expected {}",
                d.len(),
                self.singular_rank()
            )));
        }
        Ok(())
    }

    /// Drops the `Q` coordinate.
    pub fn pushforward(&self, d: &DivisorClass) -> Result<SingularClass> {
        self.check_class(d)?;
        Ok(SingularClass(d.coords()[1..].to_vec()))
    }

    fn lift(&self, d: &SingularClass) -> DivisorClass {
        let mut coords = Vec::with_capacity(self.rank());
        coords.push(int(0));
        coords.extend(d.coords().iter().cloned());
        DivisorClass(coords)
    }

    /// Numerical pullback: the lift corrected by a multiple of `Q` so the
    /// result is orthogonal to `Q`.
    pub fn pullback(&self, d: &SingularClass) -> Result<DivisorClass> {
        self.check_singular(d)?;
        let mut lifted = self.lift(d);
        let c = self.dot(&lifted, &self.q()) / int(self.m() as i64);
        lifted.0[Q_INDEX] += c;
        Ok(lifted)
    }

    pub fn intersect_on_s(&self, a: &SingularClass, b: &SingularClass) -> Result<Rat> {
        let pa = self.pullback(a)?;
        let pb = self.pullback(b)?;
        Ok(self.dot(&pa, &pb))
    }

    pub fn canonical_s(&self) -> SingularClass {
        self.pushforward(self.canonical())
            .expect("canonical class has lattice rank")
    }

    /// Coefficient `c` with `pullback(K_S) = K + c*Q`.
    pub fn discrepancy(&self) -> Rat {
        let pulled = self
            .pullback(&self.canonical_s())
            .expect("canonical class has lattice rank");
        &pulled.coords()[Q_INDEX] - &self.canonical().coords()[Q_INDEX]
    }

    /// Image on `S` of a catalogued curve.
    pub fn image_of(&self, curve: &CurveRef) -> Result<SingularClass> {
        self.pushforward(&self.class_of(curve)?)
    }
}

/// Q-linear equivalence on `S`: equality in the pushforward basis.
pub fn qlinear_equal_s(a: &SingularClass, b: &SingularClass) -> bool {
    a == b
}
