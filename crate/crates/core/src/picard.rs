//! Intersection lattice of the minimal resolution of `S_m`, the blow-up of
//! `P(1,1,m)` at `m+4` general points.
//!
//! Basis order is fixed as `(Q, F, E1, ..., E(m+4))`: `Q` is the `(-m)`-curve
//! over the singular point, `F` the fiber class of the ruling having `Q` as a
//! section, and `Ei` the fiber components disjoint from `Q`.

use num_traits::Zero;
use serde::Serialize;

use crate::classes::DivisorClass;
use crate::curves::{CurveKind, CurveRef};
use crate::error::{Error, Result};
use crate::linalg::{self, Inertia};
use crate::rational::{int, one, serde_rat, Rat};

/// Symmetric bilinear form stored as its nonzero upper-triangle entries.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionForm {
    rank: usize,
    entries: Vec<(usize, usize, Rat)>,
}

impl IntersectionForm {
    pub fn from_matrix(gram: &[Vec<Rat>]) -> Self {
        let rank = gram.len();
        let mut entries = Vec::new();
        for i in 0..rank {
            assert_eq!(gram[i].len(), rank, "gram matrix must be square");
            for j in i..rank {
                assert_eq!(gram[i][j], gram[j][i], "gram matrix must be symmetric");
                if !gram[i][j].is_zero() {
                    entries.push((i, j, gram[i][j].clone()));
                }
            }
        }
        IntersectionForm { rank, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> Vec<Vec<Rat>> {
        let mut g = vec![vec![Rat::zero(); self.rank]; self.rank];
        for (i, j, v) in &self.entries {
            g[*i][*j] = v.clone();
            g[*j][*i] = v.clone();
        }
        g
    }

    /// `a^T G b`; panics on a length mismatch.
    pub fn pair(&self, a: &[Rat], b: &[Rat]) -> Rat {
        assert!(a.len() == self.rank && b.len() == self.rank);
        let mut sum = Rat::zero();
        for (i, j, g) in &self.entries {
            if !a[*i].is_zero() && !b[*j].is_zero() {
                sum += g * &a[*i] * &b[*j];
            }
            if i != j && !a[*j].is_zero() && !b[*i].is_zero() {
                sum += g * &a[*j] * &b[*i];
            }
        }
        sum
    }

    pub fn signature(&self) -> Inertia {
        linalg::inertia(&self.matrix())
    }

    /// Extends by `extra` new orthogonal generators of square `-1`.
    pub fn with_exceptional(&self, extra: usize) -> Self {
        let mut entries = self.entries.clone();
        for k in 0..extra {
            entries.push((self.rank + k, self.rank + k, int(-1)));
        }
        IntersectionForm {
            rank: self.rank + extra,
            entries,
        }
    }
}

/// A smooth rational surface lattice together with its canonical class.
pub trait SurfaceLattice {
    fn form(&self) -> &IntersectionForm;
    fn canonical(&self) -> &DivisorClass;

    fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> Rat {
        self.form().pair(a.coords(), b.coords())
    }

    fn arithmetic_genus(&self, d: &DivisorClass) -> Rat {
        one() + (self.dot(d, d) + self.dot(d, self.canonical())) / int(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveProfile {
    #[serde(with = "serde_rat")]
    pub self_intersection: Rat,
    #[serde(with = "serde_rat")]
    pub dot_k: Rat,
    #[serde(with = "serde_rat")]
    pub dot_q: Rat,
    #[serde(with = "serde_rat")]
    pub fiber_degree: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveCatalogEntry {
    pub curve: CurveRef,
    pub class: DivisorClass,
    pub profile: CurveProfile,
}

#[derive(Debug, Clone)]
pub struct SurfaceModel {
    m: usize,
    form: IntersectionForm,
    canonical: DivisorClass,
    catalog: Vec<CurveCatalogEntry>,
}

impl SurfaceLattice for SurfaceModel {
    fn form(&self) -> &IntersectionForm {
        &self.form
    }

    fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }
}

pub const Q_INDEX: usize = 0;
pub const F_INDEX: usize = 1;

impl SurfaceModel {
    /// Builds the resolution lattice for `m >= 2`.
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}")));
        }
        let n = m + 4;
        let rank = m + 6;
        let mut gram = vec![vec![Rat::zero(); rank]; rank];
        gram[Q_INDEX][Q_INDEX] = -int(m as i64);
        gram[Q_INDEX][F_INDEX] = one();
        gram[F_INDEX][Q_INDEX] = one();
        for i in 1..=n {
            gram[1 + i][1 + i] = int(-1);
        }
        let form = IntersectionForm::from_matrix(&gram);
        let mut canonical = DivisorClass::zero(rank);
        canonical.0[Q_INDEX] = int(-2);
        canonical.0[F_INDEX] = -int(m as i64 + 2);
        for i in 1..=n {
            canonical.0[1 + i] = one();
        }
        let mut model = SurfaceModel {
            m,
            form,
            canonical,
            catalog: Vec::new(),
        };
        model.catalog = model.default_catalog();
        Ok(model)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of singular fibers, `m + 4`.
    pub fn num_fibers(&self) -> usize {
        self.m + 4
    }

    pub fn rank(&self) -> usize {
        self.m + 6
    }

    pub fn gram(&self) -> Vec<Vec<Rat>> {
        self.form.matrix()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        let mut labels = vec!["Q".to_string(), "F".to_string()];
        labels.extend((1..=self.num_fibers()).map(|i| format!("E{i}")));
        labels
    }

    pub fn catalog(&self) -> &[CurveCatalogEntry] {
        &self.catalog
    }

    pub fn e_index(&self, i: usize) -> usize {
        debug_assert!((1..=self.num_fibers()).contains(&i));
        1 + i
    }

    pub fn zero_class(&self) -> DivisorClass {
        DivisorClass::zero(self.rank())
    }

    pub fn q(&self) -> DivisorClass {
        DivisorClass::unit(self.rank(), Q_INDEX)
    }

    pub fn f(&self) -> DivisorClass {
        DivisorClass::unit(self.rank(), F_INDEX)
    }

    pub fn e(&self, i: usize) -> DivisorClass {
        DivisorClass::unit(self.rank(), self.e_index(i))
    }

    /// Builds a class from integer coordinates in basis order.
    pub fn class_from_ints(&self, coords: &[i64]) -> Result<DivisorClass> {
        self.class_from(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn class_from(&self, coords: Vec<Rat>) -> Result<DivisorClass> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidClass(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        Ok(DivisorClass(coords))
    }

    pub(crate) fn check_class(&self, d: &DivisorClass) -> Result<()> {
        if d.len() != self.rank() {
            return Err(Error::InvalidClass(format!(
                "class has {} coordinates, lattice rank is {}",
                d.len(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rat> {
        self.check_class(a)?;
        self.check_class(b)?;
        Ok(self.dot(a, b))
    }

    /// Riemann-Roch on a rational surface: `1 + D.(D - K)/2`.
    pub fn euler_characteristic(&self, d: &DivisorClass) -> Result<Rat> {
        self.check_class(d)?;
        let d_minus_k = d - &self.canonical;
        Ok(one() + self.dot(d, &d_minus_k) / int(2))
    }

    pub fn genus(&self, d: &DivisorClass) -> Result<Rat> {
        self.check_class(d)?;
        Ok(self.arithmetic_genus(d))
    }

    fn check_fiber(&self, i: usize) -> Result<()> {
        if !(1..=self.num_fibers()).contains(&i) {
            return Err(Error::InvalidParameter(format!(
                "fiber index {i} outside 1..={}",
                self.num_fibers()
            )));
        }
        Ok(())
    }

    fn check_kept(&self, kind: CurveKind, kept: &[usize], expected: usize) -> Result<()> {
        if kept.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "{} needs {expected} kept fibers, got {}",
                kind.label(),
                kept.len()
            )));
        }
        for (k, &i) in kept.iter().enumerate() {
            self.check_fiber(i)?;
            if kept[..k].contains(&i) {
                return Err(Error::InvalidParameter(format!("repeated fiber index {i}")));
            }
        }
        Ok(())
    }

    /// `Q + coeff*F - sum of Ei over fibers not in kept`.
    fn section_class(&self, coeff: i64, kept: &[usize]) -> DivisorClass {
        let mut d = self.q();
        d.0[F_INDEX] = int(coeff);
        for i in 1..=self.num_fibers() {
            if !kept.contains(&i) {
                d.0[self.e_index(i)] = int(-1);
            }
        }
        d
    }

    /// Class of a catalogued curve on the resolution.
    pub fn class_of(&self, curve: &CurveRef) -> Result<DivisorClass> {
        let m = self.m as i64;
        let p = &curve.params;
        let no_params = |d: DivisorClass| -> Result<DivisorClass> {
            if p.is_empty() {
                Ok(d)
            } else {
                Err(Error::InvalidParameter(format!("{curve} takes no indices")))
            }
        };
        match curve.kind {
            CurveKind::Q => no_params(self.q()),
            CurveKind::F => no_params(self.f()),
            CurveKind::Gamma => no_params(self.section_class(m + 2, &[])),
            CurveKind::E | CurveKind::EPrime => {
                if p.len() != 1 {
                    return Err(Error::InvalidParameter(format!("{curve} needs one index")));
                }
                self.check_fiber(p[0])?;
                let e = self.e(p[0]);
                Ok(if curve.kind == CurveKind::E { e } else { &self.f() - &e })
            }
            CurveKind::EDoublePrime => {
                if p.len() != 5 {
                    return Err(Error::InvalidParameter(format!(
                        "{curve} needs a fiber index and four B fibers"
                    )));
                }
                self.check_fiber(p[0])?;
                self.check_kept(CurveKind::B, &p[1..], 4)?;
                if !p[1..].contains(&p[0]) {
                    return Err(Error::InvalidParameter(format!(
                        "{curve}: fiber {} is not one of the B fibers",
                        p[0]
                    )));
                }
                Ok(&self.section_class(m, &p[1..]) - &self.e(p[0]))
            }
            CurveKind::C => {
                self.check_kept(curve.kind, p, 1)?;
                Ok(self.section_class(m + 1, p))
            }
            CurveKind::Cq => {
                self.check_kept(curve.kind, p, 2)?;
                Ok(self.section_class(m + 1, p))
            }
            CurveKind::CqAlt => {
                self.check_kept(curve.kind, p, 2)?;
                Ok(self.section_class(m, p))
            }
            CurveKind::B => {
                self.check_kept(curve.kind, p, 4)?;
                Ok(self.section_class(m, p))
            }
        }
    }

    pub fn profile(&self, d: &DivisorClass) -> CurveProfile {
        CurveProfile {
            self_intersection: self.dot(d, d),
            dot_k: self.dot(d, &self.canonical),
            dot_q: self.dot(d, &self.q()),
            fiber_degree: self.dot(d, &self.f()),
        }
    }

    /// Catalog lookup; the profile is evaluated through the Gram matrix.
    pub fn named_class(&self, curve: &CurveRef) -> Result<CurveCatalogEntry> {
        let curve = curve.clone().with_defaults();
        let class = self.class_of(&curve)?;
        Ok(CurveCatalogEntry {
            profile: self.profile(&class),
            curve,
            class,
        })
    }

    fn default_catalog(&self) -> Vec<CurveCatalogEntry> {
        let n = self.num_fibers();
        let mut names = vec![CurveRef::q(), CurveRef::f()];
        for i in 1..=n {
            names.push(CurveRef::e(i));
            names.push(CurveRef::e_prime(i));
        }
        for i in 1..=4 {
            names.push(CurveRef::e_double_prime(i, [1, 2, 3, 4]));
        }
        names.extend([
            CurveRef::gamma(),
            CurveRef::c(1),
            CurveRef::cq([1, 2]),
            CurveRef::cq_alt([1, 2]),
            CurveRef::b([1, 2, 3, 4]),
        ]);
        names
            .iter()
            .map(|c| self.named_class(c).expect("default catalog names are valid"))
            .collect()
    }
}
