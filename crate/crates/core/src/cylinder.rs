//! Polar-cylinder boundary divisors for polarizations given in decomposition
//! form `H = -K_S + a B + sum a_i L_i`, and their independent verification.
//!
//! Coefficients are solved exactly on each construction's support with a few
//! coefficients pinned as functions of `epsilon`; the closed-form coefficient
//! lists are evaluated alongside and their exact residuals recorded.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::blowdown::verify_lemma_configuration;
use crate::classes::SingularClass;
use crate::curves::{CurveKind, CurveRef};
use crate::error::{Error, Result};
use crate::linalg::{self, Solution};
use crate::lp::{LinearProgram, LpOutcome};
use crate::picard::{SurfaceLattice, SurfaceModel};
use crate::rational::{fmt_rat, int, serde_opt_rat, serde_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub curve: CurveRef,
    #[serde(with = "serde_rat")]
    pub a: Rat,
}

impl DecompositionTerm {
    pub fn new(curve: CurveRef, a: Rat) -> Self {
        DecompositionTerm { curve, a }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "1-1")]
    AllSmooth,
    #[serde(rename = "1-2")]
    SeveralSmooth,
    #[serde(rename = "1-3")]
    TwoSmooth,
    #[serde(rename = "1-4")]
    OneSmooth,
    #[serde(rename = "2-reduction")]
    Reduction,
    #[serde(rename = "2-fiber")]
    Fiber,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::AllSmooth => "1-1",
            CaseTag::SeveralSmooth => "1-2",
            CaseTag::TwoSmooth => "1-3",
            CaseTag::OneSmooth => "1-4",
            CaseTag::Reduction => "2-reduction",
            CaseTag::Fiber => "2-fiber",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpenSetModel {
    #[serde(rename = "A1×A1*")]
    LineTimesPuncturedLine,
    #[serde(rename = "A1×A1**")]
    LineTimesTwicePuncturedLine,
    #[serde(rename = "A1×(A1 minus 4 points)")]
    LineTimesFourPuncturedLine,
}

/// Open-set model of the complement for a case; reductions inherit the
/// model of the inner construction.
pub fn expected_open_set(case: CaseTag, inner: Option<CaseTag>) -> Option<OpenSetModel> {
    match case {
        CaseTag::AllSmooth | CaseTag::SeveralSmooth | CaseTag::OneSmooth => {
            Some(OpenSetModel::LineTimesPuncturedLine)
        }
        CaseTag::TwoSmooth => Some(OpenSetModel::LineTimesTwicePuncturedLine),
        CaseTag::Fiber => Some(OpenSetModel::LineTimesFourPuncturedLine),
        CaseTag::Reduction => match inner? {
            CaseTag::Reduction | CaseTag::Fiber => None,
            c => expected_open_set(c, None),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryTerm {
    pub curve: CurveRef,
    #[serde(with = "serde_rat")]
    pub coefficient: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpsilonPolicy {
    /// Half of the supremum of the admissible interval.
    HalfSupremum,
    /// A fixed value, which must lie strictly inside the admissible interval.
    Fixed(Rat),
    /// A fraction in `(0, 1)` of the supremum.
    FractionOfSupremum(Rat),
}

impl EpsilonPolicy {
    fn choose(&self, supremum: &Rat) -> Result<Rat> {
        let eps = match self {
            EpsilonPolicy::HalfSupremum => supremum / int(2),
            EpsilonPolicy::Fixed(e) => e.clone(),
            EpsilonPolicy::FractionOfSupremum(f) => {
                if !f.is_positive() || *f >= int(1) {
                    return Err(Error::InvalidParameter(format!(
                        "epsilon fraction {f} must lie in (0, 1)"
                    )));
                }
                supremum * f
            }
        };
        if !eps.is_positive() || eps >= *supremum {
            return Err(Error::InvalidParameter(format!(
                "epsilon {eps} outside the admissible interval (0, {supremum})"
            )));
        }
        Ok(eps)
    }
}

/// A closed-form coefficient list evaluated against `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteralComparison {
    pub label: String,
    pub terms: Vec<BoundaryTerm>,
    /// `sum coeff * class - H` on `S`.
    pub residual: SingularClass,
    pub exact: bool,
    pub note: Option<String>,
}

impl LiteralComparison {
    /// Anything that departs from the solved certificate.
    pub fn is_discrepancy(&self) -> bool {
        !self.exact || self.note.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderCertificate {
    pub m: usize,
    pub case: CaseTag,
    pub inner_case: Option<CaseTag>,
    pub boundary: Vec<BoundaryTerm>,
    #[serde(with = "serde_rat")]
    pub epsilon: Rat,
    pub open_set_model: OpenSetModel,
    pub polarization: SingularClass,
    #[serde(with = "serde_opt_rat", default)]
    pub a: Option<Rat>,
    pub b_fibers: Option<[usize; 4]>,
    /// Fibers in construction order: smooth curves first by decreasing `a_i`.
    pub fiber_order: Vec<usize>,
    pub literal_comparisons: Vec<LiteralComparison>,
    pub notes: Vec<String>,
    pub transcript: Vec<TranscriptEntry>,
}

impl CylinderCertificate {
    pub fn discrepancies(&self) -> Vec<&LiteralComparison> {
        self.literal_comparisons
            .iter()
            .filter(|c| c.is_discrepancy())
            .collect()
    }

    pub fn coefficient(&self, curve: &CurveRef) -> Option<&Rat> {
        self.boundary
            .iter()
            .find(|t| &t.curve == curve)
            .map(|t| &t.coefficient)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<TranscriptEntry>,
}

fn combine(model: &SurfaceModel, terms: &[BoundaryTerm]) -> Result<SingularClass> {
    let mut sum = model.singular_zero();
    for t in terms {
        sum = sum.add_scaled(&t.coefficient, &model.image_of(&t.curve)?);
    }
    Ok(sum)
}

fn fmt_vec(v: &SingularClass) -> String {
    let parts: Vec<String> = v.coords().iter().map(fmt_rat).collect();
    format!("[{}]", parts.join(", "))
}

fn sorted_terms(mut terms: Vec<BoundaryTerm>) -> Vec<BoundaryTerm> {
    terms.sort_by(|a, b| a.curve.cmp(&b.curve));
    terms
}

/// Solves `sum c_k class_k = H` on the given support with some coefficients
/// fixed. Every support curve must receive a strictly positive coefficient.
pub fn solve_on_support(
    model: &SurfaceModel,
    h: &SingularClass,
    support: &[CurveRef],
    pins: &[(CurveRef, Rat)],
) -> Result<Vec<BoundaryTerm>> {
    if h.len() != model.singular_rank() {
        return Err(Error::InvalidClass(format!(
            "polarization has {} coordinates, expected {}",
            h.len(),
            model.singular_rank()
        )));
    }
    let mut seen = support.to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() != support.len() {
        return Err(Error::InvalidParameter("support lists a curve twice".into()));
    }
    let images: Vec<SingularClass> = support
        .iter()
        .map(|c| model.image_of(c))
        .collect::<Result<_>>()?;
    let mut rhs = h.clone();
    for (curve, value) in pins {
        let k = support.iter().position(|c| c == curve).ok_or_else(|| {
            Error::InvalidParameter(format!("pinned curve {curve} is not in the support"))
        })?;
        rhs = rhs.add_scaled(&-value, &images[k]);
    }
    let free: Vec<usize> = (0..support.len())
        .filter(|&k| !pins.iter().any(|(c, _)| c == &support[k]))
        .collect();
    let columns: Vec<Vec<Rat>> = free.iter().map(|&k| images[k].0.clone()).collect();
    let values = match linalg::solve_columns(&columns, rhs.coords()) {
        Solution::Unique(x) => x,
        Solution::Underdetermined(_) => positive_solution(&columns, rhs.coords()).ok_or_else(|| {
            Error::InfeasibleSupport("no strictly positive solution on the support".into())
        })?,
        Solution::Inconsistent => {
            return Err(Error::InfeasibleSupport(format!(
                "H is not a combination of {}",
                support.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
            )))
        }
    };
    let mut terms: Vec<BoundaryTerm> = pins
        .iter()
        .map(|(c, v)| BoundaryTerm { curve: c.clone(), coefficient: v.clone() })
        .collect();
    terms.extend(free.iter().zip(values).map(|(&k, v)| BoundaryTerm {
        curve: support[k].clone(),
        coefficient: v,
    }));
    if let Some(bad) = terms.iter().find(|t| !t.coefficient.is_positive()) {
        return Err(Error::InfeasibleSupport(format!(
            "{} receives coefficient {}",
            bad.curve,
            fmt_rat(&bad.coefficient)
        )));
    }
    Ok(sorted_terms(terms))
}

/// Maximizes the smallest coefficient; returns a solution when it is positive.
fn positive_solution(columns: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    // x_k = t + y_k with t, y >= 0; maximize t.
    let k = columns.len();
    let rows: Vec<Vec<Rat>> = (0..rhs.len())
        .map(|i| {
            let mut row: Vec<Rat> = vec![columns.iter().map(|c| c[i].clone()).sum()];
            row.extend(columns.iter().map(|c| c[i].clone()));
            row
        })
        .collect();
    let mut cost = vec![Rat::zero(); k + 1];
    cost[0] = int(-1);
    let lp = LinearProgram { rows, rhs: rhs.to_vec(), cost };
    let x = match lp.solve() {
        LpOutcome::Optimal { x, .. } => x,
        LpOutcome::Unbounded { x, ray } => x.iter().zip(&ray).map(|(a, b)| a + b).collect(),
        LpOutcome::Infeasible { .. } => return None,
    };
    if !x[0].is_positive() {
        return None;
    }
    Some(x[1..].iter().map(|y| &x[0] + y).collect())
}

fn term(curve: CurveRef, coefficient: Rat) -> BoundaryTerm {
    BoundaryTerm { curve, coefficient }
}

fn compare(
    model: &SurfaceModel,
    h: &SingularClass,
    label: &str,
    terms: Vec<BoundaryTerm>,
    note: Option<String>,
) -> Result<LiteralComparison> {
    let residual = &combine(model, &terms)? - h;
    Ok(LiteralComparison {
        label: label.to_string(),
        exact: residual.is_zero(),
        terms: sorted_terms(terms),
        residual,
        note,
    })
}

struct Case1Build {
    case: CaseTag,
    boundary: Vec<BoundaryTerm>,
    epsilon: Rat,
    order: Vec<usize>,
    comparisons: Vec<LiteralComparison>,
}

/// Boundary for `H = -K_S + sum a_i L_i` with `smooth` curves `E_i` and
/// through-`p` curves `E_j'`, dispatching on the number of smooth curves.
fn build_case1(
    model: &SurfaceModel,
    h: &SingularClass,
    smooth: &[(usize, Rat)],
    through: &[(usize, Rat)],
    policy: &EpsilonPolicy,
) -> Result<Case1Build> {
    let n = model.num_fibers();
    let m = model.m() as i64;
    let s = smooth.len();
    let mut sm = smooth.to_vec();
    sm.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    let mut order: Vec<usize> = sm.iter().map(|x| x.0).collect();
    let rest: Vec<usize> = (1..=n).filter(|i| !order.contains(i)).collect();
    order.extend(rest);
    // a[p] for construction positions p = 0..n
    let a: Vec<Rat> = order
        .iter()
        .enumerate()
        .map(|(p, fiber)| {
            if p < s {
                sm[p].1.clone()
            } else {
                through
                    .iter()
                    .find(|(j, _)| j == fiber)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(Rat::zero)
            }
        })
        .collect();
    let e = |p: usize| CurveRef::e(order[p]);
    let ep = |p: usize| CurveRef::e_prime(order[p]);
    let one = int(1);

    let (case, supremum) = match s {
        _ if s == n => (CaseTag::AllSmooth, a[n - 1].clone()),
        3.. => (CaseTag::SeveralSmooth, a[s - 1].clone()),
        2 => (CaseTag::TwoSmooth, std::cmp::min(one.clone(), a[1].clone()) / int(2)),
        1 => (CaseTag::OneSmooth, std::cmp::min(one.clone(), a[0].clone()) / int(2)),
        _ => return Err(Error::HypothesisNotMet("no smooth curve in the decomposition".into())),
    };
    let eps = policy.choose(&supremum)?;

    let mut support = vec![CurveRef::gamma()];
    let pins: Vec<(CurveRef, Rat)>;
    let mut comparisons = Vec::new();
    match case {
        CaseTag::AllSmooth | CaseTag::SeveralSmooth => {
            let a_s = &a[s - 1];
            support.push(CurveRef::f());
            support.extend((0..s).map(e));
            support.extend((s..n).map(ep));
            pins = vec![(CurveRef::gamma(), &one - a_s + &eps)];
            let mut lit = vec![
                term(CurveRef::gamma(), &one - a_s + &eps),
                term(
                    CurveRef::f(),
                    int(if s == n { m + 2 } else { s as i64 - 2 }) * (a_s - &eps),
                ),
            ];
            lit.extend((0..s).map(|p| term(e(p), &a[p] - a_s + &eps)));
            lit.extend((s..n).map(|p| term(ep(p), a_s + &a[p] - &eps)));
            comparisons.push(compare(model, h, "closed-form coefficients", lit, None)?);
        }
        CaseTag::TwoSmooth => {
            let cq = CurveRef::cq([order[0], order[1]]);
            let cq_alt = CurveRef::cq_alt([order[0], order[1]]);
            support.extend([CurveRef::f(), cq.clone(), e(0), e(1)]);
            support.extend((2..n).map(ep));
            pins = vec![
                (CurveRef::gamma(), &one - int(2) * &eps),
                (cq.clone(), eps.clone()),
            ];
            let variant = |sec: &CurveRef, e_shift: &Rat| {
                let mut lit = vec![
                    term(CurveRef::gamma(), &one - int(2) * &eps),
                    term(CurveRef::f(), int(2) * &eps),
                    term(sec.clone(), eps.clone()),
                    term(e(0), &a[0] - e_shift),
                    term(e(1), &a[1] - e_shift),
                ];
                lit.extend((2..n).map(|p| term(ep(p), &a[p] + &eps)));
                lit
            };
            let two_eps = int(2) * &eps;
            let alt_note = Some(format!(
                "{cq_alt} has self-intersection -2 and K-degree 0 on the resolution, not a 0-curve"
            ));
            comparisons.push(compare(
                model,
                h,
                "closed-form coefficients with the 0-curve section (fiber coefficient m+1)",
                variant(&cq, &two_eps),
                None,
            )?);
            comparisons.push(compare(
                model,
                h,
                "closed-form coefficients with the fiber-coefficient-m section",
                variant(&cq_alt, &two_eps),
                alt_note.clone(),
            )?);
            comparisons.push(compare(
                model,
                h,
                "equivalence-chain coefficients (a_i - epsilon) with the 0-curve section",
                variant(&cq, &eps),
                None,
            )?);
            comparisons.push(compare(
                model,
                h,
                "equivalence-chain coefficients (a_i - epsilon) with the fiber-coefficient-m section",
                variant(&cq_alt, &eps),
                alt_note,
            )?);
        }
        CaseTag::OneSmooth => {
            let c = CurveRef::c(order[0]);
            support.extend([c.clone(), e(0)]);
            support.extend((1..n).map(ep));
            pins = vec![
                (CurveRef::gamma(), &one - int(2) * &eps),
                (c.clone(), eps.clone()),
            ];
            let mut lit = vec![
                term(CurveRef::gamma(), &one - int(2) * &eps),
                term(c, eps.clone()),
                term(e(0), &a[0] - int(2) * &eps),
            ];
            lit.extend((1..n).map(|p| term(ep(p), &a[p] + &eps)));
            comparisons.push(compare(model, h, "closed-form coefficients", lit, None)?);
        }
        CaseTag::Reduction | CaseTag::Fiber => unreachable!(),
    }
    let boundary = solve_on_support(model, h, &support, &pins)?;
    Ok(Case1Build {
        case,
        boundary,
        epsilon: eps,
        order,
        comparisons,
    })
}

fn bound_for(model: &SurfaceModel, curve: &CurveRef) -> Rat {
    match curve.kind {
        CurveKind::E => int(1),
        _ => Rat::new(2.into(), (model.m() as i64 - 1).into()),
    }
}

type FiberCoefficients = Vec<(usize, Rat)>;

/// Checks names, fibers and coefficient ranges; returns (smooth, through-p)
/// lists of `(fiber, a)` with zero coefficients dropped.
fn split_terms(
    model: &SurfaceModel,
    terms: &[DecompositionTerm],
    allow_zero: bool,
) -> Result<(FiberCoefficients, FiberCoefficients)> {
    let n = model.num_fibers();
    let mut fibers = Vec::new();
    let mut smooth = Vec::new();
    let mut through = Vec::new();
    for t in terms {
        let fiber = match (t.curve.kind, t.curve.fiber()) {
            (CurveKind::E | CurveKind::EPrime, Some(i)) if (1..=n).contains(&i) => i,
            _ => {
                return Err(Error::InvalidDecomposition(format!(
                    "{} is not an admissible support curve (expected E<i> or E<i>' with 1 <= i <= {n})",
                    t.curve
                )))
            }
        };
        if fibers.contains(&fiber) {
            return Err(Error::InvalidDecomposition(format!(
                "fiber {fiber} appears more than once"
            )));
        }
        fibers.push(fiber);
        let bound = bound_for(model, &t.curve);
        let low_ok = if allow_zero { !t.a.is_negative() } else { t.a.is_positive() };
        if !low_ok || t.a >= bound {
            return Err(Error::InvalidDecomposition(format!(
                "coefficient {} of {} outside {}0, {bound})",
                fmt_rat(&t.a),
                t.curve,
                if allow_zero { "[" } else { "(" }
            )));
        }
        if t.a.is_zero() {
            continue;
        }
        if t.curve.kind == CurveKind::E {
            smooth.push((fiber, t.a.clone()));
        } else {
            through.push((fiber, t.a.clone()));
        }
    }
    Ok((smooth, through))
}

fn decomposition_class(model: &SurfaceModel, terms: &[DecompositionTerm]) -> Result<SingularClass> {
    let mut h = -&model.canonical_s();
    for t in terms {
        h = h.add_scaled(&t.a, &model.image_of(&t.curve)?);
    }
    Ok(h)
}

/// Type `B(r)` polarization `H = -K_S + sum a_i L_i` with `s` smooth curves.
pub fn construct_type_b(
    model: &SurfaceModel,
    terms: &[DecompositionTerm],
    s: usize,
    policy: &EpsilonPolicy,
) -> Result<CylinderCertificate> {
    let (smooth, through) = split_terms(model, terms, false)?;
    if smooth.len() != s {
        return Err(Error::InvalidDecomposition(format!(
            "s = {s} but the decomposition has {} smooth curves",
            smooth.len()
        )));
    }
    if s == 0 {
        return Err(Error::HypothesisNotMet(
            "type B construction needs at least one smooth curve (s > 0)".into(),
        ));
    }
    let images: Vec<SingularClass> = terms
        .iter()
        .map(|t| model.image_of(&t.curve))
        .collect::<Result<_>>()?;
    let gram: Vec<Vec<Rat>> = images
        .iter()
        .map(|x| images.iter().map(|y| model.intersect_on_s(x, y)).collect())
        .collect::<Result<_>>()?;
    if !linalg::is_negative_definite(&gram) {
        return Err(Error::InvalidDecomposition(format!(
            "support is not contractible ({} curves through the singular point, at most {} allowed)",
            through.len(),
            model.m() - 1
        )));
    }
    let h = decomposition_class(model, terms)?;
    let built = build_case1(model, &h, &smooth, &through, policy)?;
    let cert = CylinderCertificate {
        m: model.m(),
        case: built.case,
        inner_case: None,
        open_set_model: expected_open_set(built.case, None).unwrap(),
        boundary: built.boundary,
        epsilon: built.epsilon,
        polarization: h,
        a: None,
        b_fibers: None,
        fiber_order: built.order,
        literal_comparisons: built.comparisons,
        notes: vec![],
        transcript: vec![],
    };
    finish(model, cert)
}

/// Type `C(l)` polarization `H = -K_S + a B[T] + sum a_i L_i`, where the
/// smooth curves are `E_i` with `i` in `T` and the others are `E_j'` off `T`.
pub fn construct_type_c(
    model: &SurfaceModel,
    a: &Rat,
    terms: &[DecompositionTerm],
    s: usize,
    b_fibers: [usize; 4],
    policy: &EpsilonPolicy,
) -> Result<CylinderCertificate> {
    let n = model.num_fibers();
    let mut t_sorted = b_fibers;
    t_sorted.sort_unstable();
    if t_sorted.windows(2).any(|w| w[0] == w[1]) || t_sorted.iter().any(|&i| !(1..=n).contains(&i)) {
        return Err(Error::InvalidDecomposition(format!(
            "B fibers {b_fibers:?} must be four distinct fibers in 1..={n}"
        )));
    }
    if !a.is_positive() {
        return Err(Error::InvalidDecomposition(format!("a = {} must be positive", fmt_rat(a))));
    }
    for t in terms {
        let ok = match (t.curve.kind, t.curve.fiber()) {
            (CurveKind::E, Some(i)) => t_sorted.contains(&i),
            (CurveKind::EPrime, Some(j)) => !t_sorted.contains(&j),
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidDecomposition(format!(
                "{} is not a support curve for B{t_sorted:?}",
                t.curve
            )));
        }
    }
    let (smooth, through) = split_terms(model, terms, true)?;
    if smooth.len() != s {
        return Err(Error::InvalidDecomposition(format!(
            "s = {s} but the decomposition has {} smooth curves with positive coefficient",
            smooth.len()
        )));
    }
    if s == 0 && *a <= int(3) {
        return Err(Error::HypothesisNotMet(format!(
            "type C construction needs s > 0 or a > 3 (s = 0, a = {})",
            fmt_rat(a)
        )));
    }
    let b_class = model.image_of(&CurveRef::b(t_sorted))?;
    let h = decomposition_class(model, terms)?.add_scaled(a, &b_class);
    let outside: Vec<usize> = (1..=n).filter(|j| !t_sorted.contains(j)).collect();

    let cert = if s > 0 {
        let reduced = h.add_scaled(&-a, &b_class);
        let inner = build_case1(model, &reduced, &smooth, &through, policy)?;
        let mut boundary = inner.boundary;
        for &j in &outside {
            let c = CurveRef::e_prime(j);
            match boundary.iter_mut().find(|t| t.curve == c) {
                Some(t) => t.coefficient += a,
                None => boundary.push(term(c, a.clone())),
            }
        }
        let mut comparisons = Vec::new();
        for cmp in inner.comparisons {
            let mut lit = cmp.terms;
            for &j in &outside {
                lit.push(term(CurveRef::e_prime(j), a.clone()));
            }
            comparisons.push(compare(
                model,
                &h,
                &format!("{} plus a on every E_j' off B", cmp.label),
                merge_terms(lit),
                cmp.note,
            )?);
        }
        CylinderCertificate {
            m: model.m(),
            case: CaseTag::Reduction,
            inner_case: Some(inner.case),
            open_set_model: expected_open_set(CaseTag::Reduction, Some(inner.case)).unwrap(),
            boundary: sorted_terms(boundary),
            epsilon: inner.epsilon,
            polarization: h,
            a: Some(a.clone()),
            b_fibers: Some(t_sorted),
            fiber_order: inner.order,
            literal_comparisons: comparisons,
            notes: vec![],
            transcript: vec![],
        }
    } else {
        let supremum = (a - int(3)) / int(4);
        let eps = policy.choose(&supremum)?;
        let mut support = vec![CurveRef::f()];
        let mut pins = vec![(CurveRef::f(), int(2))];
        for &i in &t_sorted {
            support.push(CurveRef::e(i));
            support.push(CurveRef::e_double_prime(i, t_sorted));
            pins.push((CurveRef::e(i), eps.clone()));
        }
        support.extend(outside.iter().map(|&j| CurveRef::e_prime(j)));
        let boundary = solve_on_support(model, &h, &support, &pins)?;

        let base = a - int(3) - int(4) * &eps;
        let fiber_terms = |tail: &dyn Fn(usize) -> Rat| {
            let mut lit = vec![term(CurveRef::f(), int(2))];
            for &i in &t_sorted {
                lit.push(term(CurveRef::e(i), eps.clone()));
                lit.push(term(CurveRef::e_double_prime(i, t_sorted), int(1) + &eps));
            }
            lit.extend(outside.iter().map(|&j| term(CurveRef::e_prime(j), tail(j))));
            lit
        };
        let a_j = |j: usize| {
            through
                .iter()
                .find(|(f, _)| *f == j)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Rat::zero)
        };
        let mut notes = Vec::new();
        if !through.is_empty() {
            notes.push(
                "added a_j E_j' for the through-p curves of the decomposition; \
                 the closed form alone is equivalent to -K_S + aB"
                    .to_string(),
            );
        }
        let comparisons = vec![
            compare(model, &h, "closed-form coefficients", fiber_terms(&|_| base.clone()), None)?,
            compare(
                model,
                &h,
                "closed-form coefficients plus a_j on E_j'",
                fiber_terms(&|j| &base + a_j(j)),
                None,
            )?,
            compare(
                model,
                &h,
                "equivalence-chain coefficient a - 3 + 4 epsilon on E_j'",
                fiber_terms(&|j| a - int(3) + int(4) * &eps + a_j(j)),
                None,
            )?,
        ];
        CylinderCertificate {
            m: model.m(),
            case: CaseTag::Fiber,
            inner_case: None,
            open_set_model: OpenSetModel::LineTimesFourPuncturedLine,
            boundary,
            epsilon: eps,
            polarization: h,
            a: Some(a.clone()),
            b_fibers: Some(t_sorted),
            fiber_order: (1..=n).collect(),
            literal_comparisons: comparisons,
            notes,
            transcript: vec![],
        }
    };
    finish(model, cert)
}

fn merge_terms(terms: Vec<BoundaryTerm>) -> Vec<BoundaryTerm> {
    let mut out: Vec<BoundaryTerm> = Vec::new();
    for t in sorted_terms(terms) {
        match out.last_mut() {
            Some(last) if last.curve == t.curve => last.coefficient += t.coefficient,
            _ => out.push(t),
        }
    }
    out
}

fn finish(model: &SurfaceModel, mut cert: CylinderCertificate) -> Result<CylinderCertificate> {
    let h = cert.polarization.clone();
    let report = check_certificate(model, &cert, &h);
    if !report.passed {
        return Err(failure(&report));
    }
    cert.transcript = report.checks;
    Ok(cert)
}

fn failure(report: &VerificationReport) -> Error {
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.check, c.detail))
        .collect();
    Error::VerificationFailure(failed.join("; "))
}

/// Re-checks a certificate from scratch; fails with the first violated facts.
pub fn verify_certificate(
    model: &SurfaceModel,
    cert: &CylinderCertificate,
    h: &SingularClass,
) -> Result<VerificationReport> {
    let report = check_certificate(model, cert, h);
    if report.passed {
        Ok(report)
    } else {
        Err(failure(&report))
    }
}

struct Checks(Vec<TranscriptEntry>);

impl Checks {
    fn push(&mut self, check: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(TranscriptEntry {
            check: check.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

/// All verification checks, collected without stopping at the first failure.
pub fn check_certificate(
    model: &SurfaceModel,
    cert: &CylinderCertificate,
    h: &SingularClass,
) -> VerificationReport {
    let mut checks = Checks(Vec::new());
    checks.push(
        "lattice",
        cert.m == model.m() && h.len() == model.singular_rank(),
        format!("certificate m = {}, model m = {}", cert.m, model.m()),
    );
    if !checks.0[0].passed {
        return VerificationReport { passed: false, checks: checks.0 };
    }
    checks.push(
        "polarization recorded",
        &cert.polarization == h,
        fmt_vec(&cert.polarization),
    );
    match combine(model, &cert.boundary) {
        Ok(sum) => {
            let residual = &sum - h;
            checks.push(
                "D ~ H",
                residual.is_zero(),
                format!("residual {}", fmt_vec(&residual)),
            );
        }
        Err(e) => checks.push("D ~ H", false, e.to_string()),
    }
    let negative: Vec<String> = cert
        .boundary
        .iter()
        .filter(|t| !t.coefficient.is_positive())
        .map(|t| format!("{} = {}", t.curve, fmt_rat(&t.coefficient)))
        .collect();
    checks.push("coefficients positive", negative.is_empty(), negative.join(", "));
    let distinct = cert.boundary.windows(2).all(|w| w[0].curve < w[1].curve);
    checks.push("boundary curves distinct and sorted", distinct, "");
    checks.push(
        "epsilon positive",
        cert.epsilon.is_positive(),
        fmt_rat(&cert.epsilon),
    );
    let expected = expected_open_set(cert.case, cert.inner_case);
    checks.push(
        "open-set model",
        expected == Some(cert.open_set_model),
        format!("expected {expected:?}, got {:?}", cert.open_set_model),
    );
    if let Err(e) = check_configuration(model, cert, &mut checks) {
        checks.push("configuration", false, e.to_string());
    }
    let passed = checks.0.iter().all(|c| c.passed);
    VerificationReport { passed, checks: checks.0 }
}

fn check_configuration(model: &SurfaceModel, cert: &CylinderCertificate, checks: &mut Checks) -> Result<()> {
    let n = model.num_fibers();
    let has = |c: &CurveRef| cert.boundary.iter().any(|t| &t.curve == c);
    let kinds = |k: CurveKind| -> Vec<usize> {
        cert.boundary
            .iter()
            .filter(|t| t.curve.kind == k)
            .filter_map(|t| t.curve.fiber())
            .collect()
    };
    let q = model.q();
    let effective = match cert.case {
        CaseTag::Reduction => cert.inner_case.ok_or_else(|| {
            Error::VerificationFailure("reduction certificate without an inner case".into())
        })?,
        c => c,
    };
    if matches!(cert.case, CaseTag::Reduction | CaseTag::Fiber) {
        let t = cert
            .b_fibers
            .ok_or_else(|| Error::VerificationFailure("type C certificate without B fibers".into()))?;
        let missing: Vec<usize> = (1..=n)
            .filter(|j| !t.contains(j) && !has(&CurveRef::e_prime(*j)))
            .collect();
        checks.push(
            "every E_j' off the fibration support is in the boundary",
            missing.is_empty(),
            format!("missing fibers {missing:?}"),
        );
    }

    let smooth = kinds(CurveKind::E);
    let through = kinds(CurveKind::EPrime);
    let fiber_members = |checks: &mut Checks| -> Result<()> {
        // exactly one component of each singular fiber, pairwise disjoint
        let mut all: Vec<usize> = smooth.iter().chain(&through).copied().collect();
        all.sort_unstable();
        checks.push(
            "one component of every singular fiber",
            all == (1..=n).collect::<Vec<_>>(),
            format!("fibers {all:?}"),
        );
        let classes: Vec<_> = smooth
            .iter()
            .map(|&i| model.class_of(&CurveRef::e(i)))
            .chain(through.iter().map(|&j| model.class_of(&CurveRef::e_prime(j))))
            .collect::<Result<_>>()?;
        let disjoint = (0..classes.len())
            .all(|x| (x + 1..classes.len()).all(|y| model.dot(&classes[x], &classes[y]).is_zero()));
        checks.push("fiber components pairwise disjoint", disjoint, "");
        Ok(())
    };
    let gamma_checks = |checks: &mut Checks| -> Result<()> {
        let g = model.class_of(&CurveRef::gamma())?;
        checks.push("Gamma in boundary", has(&CurveRef::gamma()), "");
        checks.push(
            "Gamma is a 0-curve meeting Q twice",
            model.dot(&g, &g).is_zero() && model.dot(&g, &q) == int(2),
            format!("Gamma^2 = {}, Gamma.Q = {}", model.dot(&g, &g), model.dot(&g, &q)),
        );
        Ok(())
    };
    let replay = |checks: &mut Checks, lemma: u8, t: Option<usize>| {
        let r = verify_lemma_configuration(lemma, model.m(), t);
        checks.push(
            &format!("contraction replay (lemma {lemma})"),
            r.is_ok(),
            r.err().map(|e| e.to_string()).unwrap_or_default(),
        );
    };

    match effective {
        CaseTag::AllSmooth | CaseTag::SeveralSmooth => {
            gamma_checks(checks)?;
            checks.push("F in boundary", has(&CurveRef::f()), "");
            fiber_members(checks)?;
            let t = smooth.len();
            checks.push("at least two smooth curves", t >= 2, format!("{t}"));
            checks.push(
                "case tag matches smooth count",
                (effective == CaseTag::AllSmooth) == (t == n),
                format!("{t} of {n}"),
            );
            if (2..=n).contains(&t) {
                replay(checks, 1, Some(t));
            }
        }
        CaseTag::TwoSmooth => {
            gamma_checks(checks)?;
            checks.push("F in boundary", has(&CurveRef::f()), "");
            fiber_members(checks)?;
            let sections: Vec<&CurveRef> = cert
                .boundary
                .iter()
                .map(|t| &t.curve)
                .filter(|c| c.kind == CurveKind::Cq)
                .collect();
            let mut sm = smooth.clone();
            sm.sort_unstable();
            let ok = sections.len() == 1 && sections[0].params == sm;
            checks.push(
                "0-curve section through q keeps the two smooth fibers",
                ok,
                format!("sections {sections:?}, smooth fibers {sm:?}"),
            );
            if ok {
                let c = model.class_of(sections[0])?;
                checks.push(
                    "section is a 0-curve meeting Q once",
                    model.dot(&c, &c).is_zero() && model.dot(&c, &q) == int(1),
                    format!("square {}, dot Q {}", model.dot(&c, &c), model.dot(&c, &q)),
                );
            }
            replay(checks, 2, None);
        }
        CaseTag::OneSmooth => {
            gamma_checks(checks)?;
            fiber_members(checks)?;
            let sections: Vec<&CurveRef> = cert
                .boundary
                .iter()
                .map(|t| &t.curve)
                .filter(|c| c.kind == CurveKind::C)
                .collect();
            let ok = sections.len() == 1 && smooth.len() == 1 && sections[0].params == smooth;
            checks.push(
                "(-1)-section keeps the smooth fiber",
                ok,
                format!("sections {sections:?}, smooth fibers {smooth:?}"),
            );
            if ok {
                let c = model.class_of(sections[0])?;
                checks.push(
                    "section is a (-1)-curve",
                    model.dot(&c, &c) == int(-1) && model.dot(&c, model.canonical()) == int(-1),
                    format!("square {}", model.dot(&c, &c)),
                );
            }
            replay(checks, 3, None);
        }
        CaseTag::Fiber => {
            let t = cert.b_fibers.unwrap();
            let b = model.class_of(&CurveRef::b(t))?;
            checks.push("F in boundary", has(&CurveRef::f()), "");
            let f = model.f();
            checks.push(
                "F is a section of the conic bundle",
                model.dot(&f, &b) == int(1),
                format!("F.B = {}", model.dot(&f, &b)),
            );
            for &i in &t {
                let e = CurveRef::e(i);
                let e2 = CurveRef::e_double_prime(i, t);
                let sum = &model.class_of(&e)? + &model.class_of(&e2)?;
                checks.push(
                    &format!("singular fiber {e} + {e2} = B"),
                    has(&e) && has(&e2) && sum == b,
                    "",
                );
            }
            let mut last = q.clone();
            for j in (1..=n).filter(|j| !t.contains(j)) {
                last = &last + &model.class_of(&CurveRef::e_prime(j))?;
            }
            checks.push("fifth singular fiber Q + sum E_j' = B", last == b, "");
            let extra: Vec<String> = cert
                .boundary
                .iter()
                .filter(|x| {
                    !(x.curve == CurveRef::f()
                        || t.iter().any(|&i| {
                            x.curve == CurveRef::e(i) || x.curve == CurveRef::e_double_prime(i, t)
                        })
                        || (x.curve.kind == CurveKind::EPrime
                            && !t.contains(&x.curve.fiber().unwrap_or(0))))
                })
                .map(|x| x.curve.to_string())
                .collect();
            checks.push(
                "boundary consists of F and fiber components",
                extra.is_empty(),
                extra.join(", "),
            );
        }
        CaseTag::Reduction => unreachable!(),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn model(m: usize) -> SurfaceModel {
        SurfaceModel::new(m).unwrap()
    }

    fn terms(spec: &[(&str, Rat)]) -> Vec<DecompositionTerm> {
        spec.iter()
            .map(|(c, a)| DecompositionTerm::new(c.parse().unwrap(), a.clone()))
            .collect()
    }

    fn coeff(cert: &CylinderCertificate, name: &str) -> Rat {
        cert.coefficient(&name.parse().unwrap()).cloned().unwrap()
    }

    #[test]
    fn all_smooth_example() {
        let s = model(2);
        let t: Vec<_> = (1..=6).map(|i| DecompositionTerm::new(CurveRef::e(i), rat(1, 2))).collect();
        let cert = construct_type_b(&s, &t, 6, &EpsilonPolicy::HalfSupremum).unwrap();
        assert_eq!(cert.case, CaseTag::AllSmooth);
        assert_eq!(cert.epsilon, rat(1, 4));
        assert_eq!(coeff(&cert, "Gamma"), rat(3, 4));
        assert_eq!(coeff(&cert, "F"), int(1));
        for i in 1..=6 {
            assert_eq!(coeff(&cert, &format!("E{i}")), rat(1, 4));
        }
        assert_eq!(cert.boundary.len(), 8);
        assert!(cert.discrepancies().is_empty());
        verify_certificate(&s, &cert, &cert.polarization).unwrap();
    }

    #[test]
    fn one_smooth_example() {
        let s = model(3);
        let cert = construct_type_b(&s, &terms(&[("E1", rat(1, 2))]), 1, &EpsilonPolicy::HalfSupremum)
            .unwrap();
        assert_eq!(cert.case, CaseTag::OneSmooth);
        assert_eq!(cert.epsilon, rat(1, 8));
        assert_eq!(coeff(&cert, "Gamma"), rat(3, 4));
        assert_eq!(coeff(&cert, "C[1]"), rat(1, 8));
        assert_eq!(coeff(&cert, "E1"), rat(1, 4));
        for i in 2..=7 {
            assert_eq!(coeff(&cert, &format!("E{i}'")), rat(1, 8));
        }
        assert_eq!(cert.open_set_model, OpenSetModel::LineTimesPuncturedLine);
    }

    #[test]
    fn no_smooth_curve_is_rejected() {
        let s = model(2);
        let err = construct_type_b(&s, &[], 0, &EpsilonPolicy::HalfSupremum).unwrap_err();
        assert_eq!(err.kind(), "hypothesis-not-met");
        let err = construct_type_b(&s, &terms(&[("E1'", rat(1, 2))]), 0, &EpsilonPolicy::HalfSupremum)
            .unwrap_err();
        assert_eq!(err.kind(), "hypothesis-not-met");
    }

    #[test]
    fn bad_decompositions() {
        let s = model(3);
        let p = EpsilonPolicy::HalfSupremum;
        for (spec, k) in [
            (vec![("E1", int(1))], 1),
            (vec![("E1", int(0))], 1),
            (vec![("E1", rat(1, 2)), ("E2'", int(1))], 1),
            (vec![("E1", rat(1, 2)), ("E1'", rat(1, 3))], 1),
            (vec![("E1", rat(1, 2)), ("Gamma", rat(1, 3))], 1),
            (vec![("E1", rat(1, 2))], 2),
            // three curves through p on m = 3 are not contractible
            (vec![("E1", rat(1, 2)), ("E2'", rat(1, 2)), ("E3'", rat(1, 2)), ("E4'", rat(1, 2))], 1),
        ] {
            let err = construct_type_b(&s, &terms(&spec), k, &p).unwrap_err();
            assert_eq!(err.kind(), "invalid-decomposition", "{spec:?}");
        }
    }

    #[test]
    fn two_smooth_reconciliation() {
        let s = model(2);
        let cert = construct_type_b(
            &s,
            &terms(&[("E1", rat(1, 2)), ("E2", rat(1, 2))]),
            2,
            &EpsilonPolicy::Fixed(rat(1, 8)),
        )
        .unwrap();
        assert_eq!(cert.case, CaseTag::TwoSmooth);
        assert_eq!(cert.open_set_model, OpenSetModel::LineTimesTwicePuncturedLine);
        let eps = rat(1, 8);
        assert_eq!(coeff(&cert, "F"), eps);
        assert_eq!(coeff(&cert, "Cq[1,2]"), eps);
        let f = s.image_of(&CurveRef::f()).unwrap();
        let e12 = &s.image_of(&CurveRef::e(1)).unwrap() + &s.image_of(&CurveRef::e(2)).unwrap();
        let c = &cert.literal_comparisons;
        assert_eq!(c[0].residual, f.scale(&eps));
        assert!(c[1].exact && c[1].note.is_some());
        assert_eq!(c[2].residual, &f.scale(&eps) + &e12.scale(&eps));
        assert_eq!(c[3].residual, e12.scale(&eps));
        assert_eq!(cert.discrepancies().len(), 4);
    }

    #[test]
    fn several_smooth_with_through_curves() {
        let s = model(4);
        let t = terms(&[
            ("E3", rat(1, 5)),
            ("E1", rat(2, 3)),
            ("E2", rat(1, 2)),
            ("E5'", rat(1, 3)),
            ("E7'", rat(1, 4)),
        ]);
        let cert = construct_type_b(&s, &t, 3, &EpsilonPolicy::HalfSupremum).unwrap();
        assert_eq!(cert.case, CaseTag::SeveralSmooth);
        assert_eq!(&cert.fiber_order[..3], &[1, 2, 3]);
        assert_eq!(cert.epsilon, rat(1, 10));
        // F coefficient (s-2)(a_s - eps)
        assert_eq!(coeff(&cert, "F"), rat(1, 10));
        assert_eq!(coeff(&cert, "E5'"), rat(1, 5) + rat(1, 3) - rat(1, 10));
        assert_eq!(coeff(&cert, "E4'"), rat(1, 10));
        assert!(cert.discrepancies().is_empty());
    }

    #[test]
    fn type_c_fiber_example() {
        let s = model(2);
        let cert = construct_type_c(&s, &int(4), &[], 0, [1, 2, 3, 4], &EpsilonPolicy::HalfSupremum)
            .unwrap();
        assert_eq!(cert.case, CaseTag::Fiber);
        assert_eq!(cert.epsilon, rat(1, 8));
        assert_eq!(coeff(&cert, "F"), int(2));
        for i in 1..=4 {
            assert_eq!(coeff(&cert, &format!("E{i}")), rat(1, 8));
            assert_eq!(coeff(&cert, &format!("E{i}''[1,2,3,4]")), rat(9, 8));
        }
        assert_eq!(coeff(&cert, "E5'"), rat(1, 2));
        assert_eq!(coeff(&cert, "E6'"), rat(1, 2));
        assert!(cert.literal_comparisons[0].exact);
        assert!(!cert.literal_comparisons[2].exact);
    }

    #[test]
    fn type_c_fiber_adds_through_terms() {
        let s = model(3);
        let t = terms(&[("E6'", rat(1, 2))]);
        let cert = construct_type_c(&s, &int(5), &t, 0, [1, 2, 3, 4], &EpsilonPolicy::HalfSupremum)
            .unwrap();
        assert_eq!(coeff(&cert, "E6'"), int(1) + rat(1, 2));
        assert_eq!(cert.notes.len(), 1);
        let lit = &cert.literal_comparisons[0];
        let e6 = s.image_of(&CurveRef::e_prime(6)).unwrap();
        assert_eq!(lit.residual, -&e6.scale(&rat(1, 2)));
    }

    #[test]
    fn type_c_reduction_example() {
        let s = model(3);
        let t = terms(&[("E1", rat(1, 2)), ("E2", rat(1, 3))]);
        let cert = construct_type_c(&s, &int(1), &t, 2, [1, 2, 3, 4], &EpsilonPolicy::HalfSupremum)
            .unwrap();
        assert_eq!(cert.case, CaseTag::Reduction);
        assert_eq!(cert.inner_case, Some(CaseTag::TwoSmooth));
        assert_eq!(cert.open_set_model, OpenSetModel::LineTimesTwicePuncturedLine);
        for j in 5..=7 {
            assert!(coeff(&cert, &format!("E{j}'")) > int(1));
        }
    }

    #[test]
    fn type_c_hypotheses() {
        let s = model(2);
        let p = EpsilonPolicy::HalfSupremum;
        assert_eq!(
            construct_type_c(&s, &int(3), &[], 0, [1, 2, 3, 4], &p).unwrap_err().kind(),
            "hypothesis-not-met"
        );
        let t = terms(&[("E5", rat(1, 2))]);
        assert_eq!(
            construct_type_c(&s, &int(1), &t, 1, [1, 2, 3, 4], &p).unwrap_err().kind(),
            "invalid-decomposition"
        );
        // a zero smooth coefficient does not count towards s
        let t = terms(&[("E1", int(0))]);
        assert_eq!(
            construct_type_c(&s, &int(2), &t, 0, [1, 2, 3, 4], &p).unwrap_err().kind(),
            "hypothesis-not-met"
        );
    }

    #[test]
    fn solve_on_support_basics() {
        let s = model(2);
        let minus_k = -&s.canonical_s();
        let err = solve_on_support(&s, &minus_k, &[CurveRef::e(1)], &[]).unwrap_err();
        assert_eq!(err.kind(), "infeasible-support");
        let sol = solve_on_support(&s, &minus_k, &[CurveRef::gamma()], &[]).unwrap();
        assert_eq!(sol, vec![term(CurveRef::gamma(), int(1))]);
        // underdetermined: F = E1 + E1' = E2 + E2'
        let f = s.image_of(&CurveRef::f()).unwrap();
        let sup = [CurveRef::e(1), CurveRef::e_prime(1), CurveRef::e(2), CurveRef::e_prime(2)];
        let sol = solve_on_support(&s, &f, &sup, &[]).unwrap();
        assert!(sol.iter().all(|t| t.coefficient.is_positive()));
        assert_eq!(combine(&s, &sol).unwrap(), f);
    }

    #[test]
    fn perturbed_certificate_fails() {
        let s = model(2);
        let t: Vec<_> = (1..=6).map(|i| DecompositionTerm::new(CurveRef::e(i), rat(1, 2))).collect();
        let mut cert = construct_type_b(&s, &t, 6, &EpsilonPolicy::HalfSupremum).unwrap();
        cert.boundary[0].coefficient += rat(1, 1000);
        let h = cert.polarization.clone();
        let err = verify_certificate(&s, &cert, &h).unwrap_err();
        assert!(err.to_string().contains("residual"), "{err}");
    }

    #[test]
    fn certificate_round_trips_through_json() {
        let s = model(3);
        let t = terms(&[("E1", rat(1, 2)), ("E2", rat(1, 3))]);
        let cert = construct_type_c(&s, &int(1), &t, 2, [1, 2, 3, 4], &EpsilonPolicy::HalfSupremum)
            .unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: CylinderCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        verify_certificate(&s, &back, &cert.polarization).unwrap();
    }
}
