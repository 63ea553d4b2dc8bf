//! Effective-cone model and Fujita classification of polarizations.
//!
//! The cone is generated by `Q` and the numerical `(-1)`-classes of bounded
//! fiber degree. Every such class `D` has `chi(D) = 1` and `K - D` meets the
//! nef fiber class negatively, so `h^0(D) >= 1`: the generators are effective.
//! Whether they generate the whole cone is not known for every `m`, so the
//! model is flagged best-effort.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::classes::{DivisorClass, SingularClass};
use crate::curves::CurveRef;
use crate::error::{Error, Result};
use crate::linalg::{self, Solution};
use crate::lp::{LinearProgram, LpOutcome};
use crate::picard::{SurfaceLattice, SurfaceModel, F_INDEX, Q_INDEX};
use crate::rational::{int, serde_opt_rat, serde_rat, Rat};

pub const DEFAULT_FIBER_BOUND: usize = 2;

#[derive(Debug, Clone, Serialize)]
pub struct EffectiveConeModel {
    pub m: usize,
    pub generators: Vec<DivisorClass>,
    pub fiber_degree_bound: usize,
    /// Always true: completeness of the generator list is not certified.
    pub best_effort: bool,
}

impl EffectiveConeModel {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains_generator(&self, d: &DivisorClass) -> bool {
        self.generators.binary_search(d).is_ok()
    }
}

/// All integral `(-1)`-classes of fiber degree `0..=bound`, plus `Q`, sorted
/// lexicographically by coordinates.
pub fn enumerate_negative_classes(
    model: &SurfaceModel,
    fiber_degree_bound: usize,
) -> Result<EffectiveConeModel> {
    if fiber_degree_bound < 1 {
        return Err(Error::InvalidParameter(
            "fiber-degree bound must be >= 1".into(),
        ));
    }
    let m = model.m() as i64;
    let n = model.num_fibers();
    let mut generators = vec![model.q()];
    for alpha in 0..=fiber_degree_bound as i64 {
        // D = aQ + bF + sum g_i E_i with D^2 = D.K = -1 reduces to
        // sum (2 g_i + a)^2 = 4 + 4a - 8a^2 + n a^2 and 2b = a(m-2) + 1 - sum g_i.
        let budget = 4 + 4 * alpha - 8 * alpha * alpha + (n as i64) * alpha * alpha;
        if budget < 0 {
            continue;
        }
        let mut u = vec![0i64; n];
        let mut found = Vec::new();
        odd_even_squares(&mut u, 0, budget, alpha.rem_euclid(2), &mut found);
        for u in found {
            let gammas: Vec<i64> = u.iter().map(|&ui| (ui - alpha) / 2).collect();
            let twice_beta = alpha * (m - 2) + 1 - gammas.iter().sum::<i64>();
            if twice_beta.rem_euclid(2) != 0 {
                continue;
            }
            let mut coords = vec![alpha, twice_beta / 2];
            coords.extend(&gammas);
            let d = model.class_from_ints(&coords)?;
            debug_assert_eq!(model.dot(&d, &d), int(-1));
            debug_assert_eq!(model.dot(&d, model.canonical()), int(-1));
            generators.push(d);
        }
    }
    generators.sort();
    generators.dedup();
    Ok(EffectiveConeModel {
        m: model.m(),
        generators,
        fiber_degree_bound,
        best_effort: true,
    })
}

/// Enumerates integer vectors with entries of fixed parity and the given sum of squares.
fn odd_even_squares(u: &mut Vec<i64>, pos: usize, remaining: i64, parity: i64, out: &mut Vec<Vec<i64>>) {
    if pos == u.len() {
        if remaining == 0 {
            out.push(u.clone());
        }
        return;
    }
    let slots = (u.len() - pos) as i64;
    // every later entry has square >= parity
    if remaining < slots * parity {
        return;
    }
    let mut bound = 0;
    while (bound + 1) * (bound + 1) <= remaining {
        bound += 1;
    }
    for v in -bound..=bound {
        if v.rem_euclid(2) != parity {
            continue;
        }
        u[pos] = v;
        odd_even_squares(u, pos + 1, remaining - v * v, parity, out);
    }
    u[pos] = 0;
}

/// Answer of an exact cone-membership query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Membership {
    /// `v = sum c_j G_j` with every listed `c_j > 0`.
    Member { coefficients: Vec<MemberTerm> },
    /// A class `N` with `N.G_j >= 0` for all generators and `N.v < 0`.
    Separated { functional: DivisorClass },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberTerm {
    pub generator: usize,
    #[serde(with = "serde_rat")]
    pub coefficient: Rat,
}

/// Converts a coordinate covector `y` into the class `N` with `N.x = y.x`.
fn covector_to_class(model: &SurfaceModel, y: &[Rat]) -> DivisorClass {
    let inv = linalg::inverse(&model.gram()).expect("resolution lattice is unimodular");
    DivisorClass(
        inv.iter()
            .map(|row| crate::lp::dot(row, y))
            .collect(),
    )
}

fn generator_columns(rows: usize, gens: &[&DivisorClass]) -> Vec<Vec<Rat>> {
    (0..rows)
        .map(|i| gens.iter().map(|g| g.coords()[i].clone()).collect())
        .collect()
}

pub fn cone_membership(
    model: &SurfaceModel,
    v: &DivisorClass,
    cone: &EffectiveConeModel,
) -> Result<Membership> {
    model.check_class(v)?;
    let gens: Vec<&DivisorClass> = cone.generators.iter().collect();
    let lp = LinearProgram {
        rows: generator_columns(model.rank(), &gens),
        rhs: v.coords().to_vec(),
        cost: vec![Rat::zero(); gens.len()],
    };
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Ok(Membership::Member {
            coefficients: x
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(generator, coefficient)| MemberTerm { generator, coefficient })
                .collect(),
        }),
        LpOutcome::Infeasible { farkas } => Ok(Membership::Separated {
            functional: covector_to_class(model, &farkas),
        }),
        LpOutcome::Unbounded { .. } => unreachable!("feasibility problem has zero cost"),
    }
}

/// Re-checks a membership certificate by direct arithmetic.
pub fn verify_membership(
    model: &SurfaceModel,
    v: &DivisorClass,
    cone: &EffectiveConeModel,
    cert: &Membership,
) -> bool {
    match cert {
        Membership::Member { coefficients } => {
            let mut sum = model.zero_class();
            for t in coefficients {
                if !t.coefficient.is_positive() || t.generator >= cone.len() {
                    return false;
                }
                sum = sum.add_scaled(&t.coefficient, &cone.generators[t.generator]);
            }
            &sum == v
        }
        Membership::Separated { functional } => {
            model.dot(functional, v).is_negative()
                && cone
                    .generators
                    .iter()
                    .all(|g| !model.dot(functional, g).is_negative())
        }
    }
}

/// Nakai-Moishezon screen of `H` against the enumerated curves.
pub fn ampleness_screen(
    model: &SurfaceModel,
    h: &SingularClass,
    cone: &EffectiveConeModel,
) -> Result<()> {
    let pulled = model.pullback(h)?;
    let square = model.dot(&pulled, &pulled);
    if !square.is_positive() {
        return Err(Error::NotAmple(format!("H^2 = {square} is not positive")));
    }
    let q = model.q();
    for g in cone.generators.iter().filter(|g| **g != q) {
        let d = model.dot(&pulled, g);
        if !d.is_positive() {
            return Err(Error::NotAmple(format!(
                "H.G = {d} for generator {}",
                describe(model, g)
            )));
        }
    }
    for extra in [CurveRef::b([1, 2, 3, 4]), CurveRef::f()] {
        let d = model.dot(&pulled, &model.class_of(&extra)?);
        if !d.is_positive() {
            return Err(Error::NotAmple(format!("H.{extra} = {d}")));
        }
    }
    Ok(())
}

fn describe(model: &SurfaceModel, g: &DivisorClass) -> String {
    match recognize(model, g, None) {
        Some(c) => c.to_string(),
        None => format!("{:?}", g.coords().iter().map(crate::rational::fmt_rat).collect::<Vec<_>>()),
    }
}

/// Names a class when it matches a catalogued curve.
pub fn recognize(model: &SurfaceModel, d: &DivisorClass, b_fibers: Option<[usize; 4]>) -> Option<CurveRef> {
    let n = model.num_fibers();
    let mut candidates = vec![CurveRef::q(), CurveRef::f(), CurveRef::gamma()];
    for i in 1..=n {
        candidates.push(CurveRef::e(i));
        candidates.push(CurveRef::e_prime(i));
        candidates.push(CurveRef::c(i));
    }
    if let Some(t) = b_fibers {
        candidates.push(CurveRef::b(t));
        candidates.extend(t.iter().map(|&i| CurveRef::e_double_prime(i, t)));
    }
    candidates
        .into_iter()
        .find(|c| model.class_of(c).ok().as_ref() == Some(d))
}

/// Optimal Fujita value with both halves of its LP certificate: a
/// decomposition of `K + mu H` over the generators, and a functional `N`
/// with `N.G >= 0` for all generators, `N.(K + mu H) = 0` and `N.H > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FujitaCertificate {
    #[serde(with = "serde_rat")]
    pub mu: Rat,
    pub decomposition: Vec<MemberTerm>,
    pub functional: DivisorClass,
}

pub fn fujita_certificate(
    model: &SurfaceModel,
    h: &SingularClass,
    cone: &EffectiveConeModel,
) -> Result<FujitaCertificate> {
    let h_pulled = model.pullback(h)?;
    let k_pulled = model.pullback(&model.canonical_s())?;
    let mut gens: Vec<&DivisorClass> = Vec::with_capacity(cone.len() + 1);
    let neg_h = -&h_pulled;
    gens.push(&neg_h);
    gens.extend(cone.generators.iter());
    let mut cost = vec![Rat::zero(); gens.len()];
    cost[0] = int(1);
    let lp = LinearProgram {
        rows: generator_columns(model.rank(), &gens),
        rhs: k_pulled.coords().to_vec(),
        cost,
    };
    match lp.solve() {
        LpOutcome::Optimal { x, dual, .. } => {
            let mu = x[0].clone();
            if !mu.is_positive() {
                return Err(Error::ConeModelInsufficient(
                    "K lies in the generated cone".into(),
                ));
            }
            let functional = covector_to_class(
                model,
                &dual.iter().map(|v| -v).collect::<Vec<_>>(),
            );
            let decomposition = x[1..]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(generator, c)| MemberTerm { generator, coefficient: c.clone() })
                .collect();
            Ok(FujitaCertificate { mu, decomposition, functional })
        }
        LpOutcome::Infeasible { .. } => Err(Error::ConeModelInsufficient(
            "K + tH is outside the generated cone for every t".into(),
        )),
        LpOutcome::Unbounded { .. } => Err(Error::ConeModelInsufficient(
            "Fujita program is unbounded".into(),
        )),
    }
}

/// Re-checks a Fujita certificate by direct arithmetic.
pub fn verify_fujita_certificate(
    model: &SurfaceModel,
    h: &SingularClass,
    cone: &EffectiveConeModel,
    cert: &FujitaCertificate,
) -> bool {
    let (Ok(h_pulled), Ok(k_pulled)) = (model.pullback(h), model.pullback(&model.canonical_s()))
    else {
        return false;
    };
    let v = k_pulled.add_scaled(&cert.mu, &h_pulled);
    let member = Membership::Member { coefficients: cert.decomposition.clone() };
    (v.is_zero() && cert.decomposition.is_empty() || verify_membership(model, &v, cone, &member))
        && model.dot(&cert.functional, &v).is_zero()
        && model.dot(&cert.functional, &h_pulled).is_positive()
        && cone
            .generators
            .iter()
            .all(|g| !model.dot(&cert.functional, g).is_negative())
}

/// Smallest `t` with `K_S + t H` in the generated cone.
pub fn fujita_invariant(
    model: &SurfaceModel,
    h: &SingularClass,
    cone: &EffectiveConeModel,
) -> Result<Rat> {
    ampleness_screen(model, h, cone)?;
    fujita_certificate(model, h, cone).map(|c| c.mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FujitaFace {
    /// Indices into the cone's generator list, ascending.
    pub generators: Vec<usize>,
    /// Dimension of the span of the face's images on `S`.
    pub rank: usize,
}

/// Minimal face containing `K_S + mu H`, tested generator by generator.
pub fn fujita_face(
    model: &SurfaceModel,
    h: &SingularClass,
    mu: &Rat,
    cone: &EffectiveConeModel,
) -> Result<FujitaFace> {
    let FujitaCertificate { mu: lp_mu, functional: support, .. } = fujita_certificate(model, h, cone)?;
    if &lp_mu != mu {
        return Err(Error::InvalidParameter(format!(
            "mu = {mu} is not the Fujita invariant ({lp_mu})"
        )));
    }
    let v_s = &model.canonical_s() + &h.scale(mu);
    let v = model.pullback(&v_s)?;
    if v.is_zero() {
        return Ok(FujitaFace { generators: vec![], rank: 0 });
    }
    // Any decomposition of v only uses generators on the supporting hyperplane.
    let candidates: Vec<usize> = (0..cone.len())
        .filter(|&j| model.dot(&support, &cone.generators[j]).is_zero())
        .collect();
    let cand_gens: Vec<&DivisorClass> = candidates.iter().map(|&j| &cone.generators[j]).collect();
    let mut in_face = vec![false; candidates.len()];
    for k in 0..candidates.len() {
        if in_face[k] {
            continue;
        }
        // maximize t subject to sum c_j G_j + t G_k = v
        let mut cols = cand_gens.clone();
        cols.push(cand_gens[k]);
        let mut cost = vec![Rat::zero(); cols.len()];
        *cost.last_mut().unwrap() = int(-1);
        let lp = LinearProgram {
            rows: generator_columns(model.rank(), &cols),
            rhs: v.coords().to_vec(),
            cost,
        };
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => {
                if x.last().unwrap().is_positive() {
                    in_face[k] = true;
                }
                for (j, c) in x[..candidates.len()].iter().enumerate() {
                    if c.is_positive() {
                        in_face[j] = true;
                    }
                }
            }
            LpOutcome::Infeasible { .. } => {
                return Err(Error::ConeModelInsufficient(
                    "K + mu H is not in the cone spanned by its supporting face".into(),
                ))
            }
            LpOutcome::Unbounded { .. } => {
                return Err(Error::ConeModelInsufficient(
                    "face program unbounded: the generated cone is not pointed".into(),
                ))
            }
        }
    }
    let generators: Vec<usize> = candidates
        .iter()
        .zip(&in_face)
        .filter(|(_, &f)| f)
        .map(|(&j, _)| j)
        .collect();
    let images: Vec<Vec<Rat>> = generators
        .iter()
        .map(|&j| model.pushforward(&cone.generators[j]).map(|c| c.0))
        .collect::<Result<_>>()?;
    Ok(FujitaFace {
        rank: linalg::rank(&images),
        generators,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PolarizationType {
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceCoefficient {
    /// Strict transform on the resolution.
    pub class: DivisorClass,
    pub image: SingularClass,
    pub name: Option<CurveRef>,
    pub through_singular_point: bool,
    #[serde(with = "serde_rat")]
    pub coefficient: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FujitaResult {
    #[serde(with = "serde_rat")]
    pub mu: Rat,
    pub face: Vec<DivisorClass>,
    pub rank: usize,
    pub kind: PolarizationType,
    /// `r_H^sm` for type B, `l_H^sm` for type C.
    pub smooth_count: usize,
    /// `l_H` for type C, `r_H` for type B (number of nonzero coefficients).
    pub support_count: usize,
    #[serde(with = "serde_opt_rat")]
    pub a: Option<Rat>,
    /// Fiber class of the conic bundle (type C only), normalized to `B.(-K_S) = 2`.
    pub fiber_class: Option<SingularClass>,
    pub coefficients: Vec<FaceCoefficient>,
    pub best_effort: bool,
}

/// Upper bound on a face coefficient: `1` off the singular point, `2/(m-1)` through it.
pub fn coefficient_bound(m: usize, through_singular_point: bool) -> Rat {
    if through_singular_point {
        Rat::new(2.into(), (m as i64 - 1).into())
    } else {
        int(1)
    }
}

pub fn classify_polarization(
    model: &SurfaceModel,
    h: &SingularClass,
    cone: &EffectiveConeModel,
) -> Result<FujitaResult> {
    let mu = fujita_invariant(model, h, cone)?;
    let face = fujita_face(model, h, &mu, cone)?;
    let v_s = &model.canonical_s() + &h.scale(&mu);
    let q = model.q();

    // Curves of the face on S, one representative per image (prefer the
    // strict transform, i.e. the class meeting Q the most).
    let mut curves: Vec<(DivisorClass, SingularClass)> = Vec::new();
    for &j in &face.generators {
        let g = &cone.generators[j];
        if *g == q {
            continue;
        }
        // a class meeting Q negatively contains Q and is not a curve of the face
        if model.dot(g, &q).is_negative() {
            continue;
        }
        let image = model.pushforward(g)?;
        match curves.iter_mut().find(|(_, im)| *im == image) {
            Some(entry) => {
                if model.dot(g, &q) > model.dot(&entry.0, &q) {
                    entry.0 = g.clone();
                }
            }
            None => curves.push((g.clone(), image)),
        }
    }
    let images: Vec<Vec<Rat>> = curves.iter().map(|(_, im)| im.0.clone()).collect();
    let basis_idx = linalg::independent_subset(&images);
    let gram = |idx: &[usize]| -> Result<Vec<Vec<Rat>>> {
        idx.iter()
            .map(|&a| {
                idx.iter()
                    .map(|&b| model.intersect_on_s(&curves[a].1, &curves[b].1))
                    .collect()
            })
            .collect()
    };
    let span_gram = gram(&basis_idx)?;
    let through = |d: &DivisorClass| model.dot(d, &q).is_positive();
    let m = model.m();

    if linalg::is_negative_definite(&span_gram) {
        if basis_idx.len() != curves.len() {
            return Err(Error::UnrecognizedFace(
                "negative-definite face with linearly dependent curves".into(),
            ));
        }
        let a = match linalg::solve_columns(&images, v_s.coords()) {
            Solution::Unique(a) => a,
            _ => {
                return Err(Error::UnrecognizedFace(
                    "K + mu H is not supported on the face curves".into(),
                ))
            }
        };
        let coefficients: Vec<FaceCoefficient> = curves
            .iter()
            .zip(a)
            .map(|((class, image), coefficient)| FaceCoefficient {
                name: recognize(model, class, None),
                through_singular_point: through(class),
                class: class.clone(),
                image: image.clone(),
                coefficient,
            })
            .collect();
        for c in &coefficients {
            let bound = coefficient_bound(m, c.through_singular_point);
            if !c.coefficient.is_positive() || c.coefficient >= bound {
                return Err(Error::UnrecognizedFace(format!(
                    "coefficient {} outside (0, {bound})",
                    c.coefficient
                )));
            }
        }
        let smooth = coefficients.iter().filter(|c| !c.through_singular_point).count();
        let r = coefficients.len();
        if r > m + 4 || r - smooth > m - 1 {
            return Err(Error::UnrecognizedFace(format!(
                "type B counts out of range: r = {r}, r_sm = {smooth}"
            )));
        }
        return Ok(FujitaResult {
            mu,
            face: face.generators.iter().map(|&j| cone.generators[j].clone()).collect(),
            rank: face.rank,
            kind: PolarizationType::B,
            smooth_count: smooth,
            support_count: r,
            a: None,
            fiber_class: None,
            coefficients,
            best_effort: cone.best_effort,
        });
    }

    // Conic bundle: the span carries a one-dimensional radical, the fiber class.
    let inertia = linalg::inertia(&span_gram);
    if inertia.positive != 0 || inertia.zero != 1 {
        return Err(Error::UnrecognizedFace(format!(
            "face form has inertia {inertia:?}, expected semidefinite with 1-dim radical"
        )));
    }
    let radical = match linalg::solve_columns(&span_gram, &vec![Rat::zero(); span_gram.len()]) {
        Solution::Underdetermined(_) => null_vector(&span_gram),
        _ => None,
    }
    .ok_or_else(|| Error::UnrecognizedFace("could not extract fiber class".into()))?;
    let mut fiber = model.singular_zero();
    for (w, &idx) in radical.iter().zip(&basis_idx) {
        fiber = fiber.add_scaled(w, &curves[idx].1);
    }
    let minus_k = -&model.canonical_s();
    let degree = model.intersect_on_s(&fiber, &minus_k)?;
    if degree.is_zero() {
        return Err(Error::UnrecognizedFace("fiber class is K-trivial".into()));
    }
    let fiber = fiber.scale(&(int(2) / degree));

    // maximize a subject to a*B + sum a_L L = v, all >= 0
    let mut cols: Vec<Vec<Rat>> = vec![fiber.0.clone()];
    cols.extend(images.iter().cloned());
    let rows: Vec<Vec<Rat>> = (0..model.singular_rank())
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut cost = vec![Rat::zero(); cols.len()];
    cost[0] = int(-1);
    let lp = LinearProgram {
        rows,
        rhs: v_s.coords().to_vec(),
        cost,
    };
    let x = match lp.solve() {
        LpOutcome::Optimal { x, .. } => x,
        _ => {
            return Err(Error::UnrecognizedFace(
                "no decomposition K + mu H = aB + sum a_i L_i on the face".into(),
            ))
        }
    };
    let a = x[0].clone();
    if !a.is_positive() {
        return Err(Error::UnrecognizedFace("fiber coefficient a is not positive".into()));
    }
    let b_fibers = recognize_b_fibers(model, &fiber);
    let coefficients: Vec<FaceCoefficient> = curves
        .iter()
        .zip(&x[1..])
        .filter(|(_, c)| !c.is_zero())
        .map(|((class, image), c)| FaceCoefficient {
            name: recognize(model, class, b_fibers),
            through_singular_point: through(class),
            class: class.clone(),
            image: image.clone(),
            coefficient: c.clone(),
        })
        .collect();
    for c in &coefficients {
        let bound = coefficient_bound(m, c.through_singular_point);
        if c.coefficient >= bound {
            return Err(Error::UnrecognizedFace(format!(
                "coefficient {} not below {bound}",
                c.coefficient
            )));
        }
    }
    let smooth = coefficients.iter().filter(|c| !c.through_singular_point).count();
    if smooth > 4 {
        return Err(Error::UnrecognizedFace(format!("l_sm = {smooth} exceeds 4")));
    }
    Ok(FujitaResult {
        mu,
        face: face.generators.iter().map(|&j| cone.generators[j].clone()).collect(),
        rank: face.rank,
        kind: PolarizationType::C,
        smooth_count: smooth,
        support_count: coefficients.len(),
        a: Some(a),
        fiber_class: Some(fiber),
        coefficients,
        best_effort: cone.best_effort,
    })
}

/// A nonzero kernel vector of a square matrix, when one exists.
fn null_vector(m: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let n = m.len();
    // Fix each coordinate to 1 in turn and solve for the rest.
    for free in 0..n {
        let cols: Vec<Vec<Rat>> = (0..n)
            .filter(|&j| j != free)
            .map(|j| m.iter().map(|row| row[j].clone()).collect())
            .collect();
        let rhs: Vec<Rat> = m.iter().map(|row| -row[free].clone()).collect();
        let rest = match linalg::solve_columns(&cols, &rhs) {
            Solution::Unique(x) | Solution::Underdetermined(x) => x,
            Solution::Inconsistent => continue,
        };
        let mut v = Vec::with_capacity(n);
        let mut it = rest.into_iter();
        for j in 0..n {
            v.push(if j == free { int(1) } else { it.next().unwrap() });
        }
        return Some(v);
    }
    None
}

/// Fibers `T` with `fiber = B[T]` on `S`, when the fiber class is of that shape.
fn recognize_b_fibers(model: &SurfaceModel, fiber: &SingularClass) -> Option<[usize; 4]> {
    let lifted = model.pullback(fiber).ok()?;
    if lifted.coords()[Q_INDEX] != int(1) || lifted.coords()[F_INDEX] != int(model.m() as i64) {
        return None;
    }
    let kept: Vec<usize> = (1..=model.num_fibers())
        .filter(|&i| lifted.coords()[model.e_index(i)].is_zero())
        .collect();
    let t: [usize; 4] = kept.try_into().ok()?;
    (model.class_of(&CurveRef::b(t)).ok()? == lifted).then_some(t)
}
