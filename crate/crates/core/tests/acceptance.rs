//! Acceptance gate: one line per criterion, exact arithmetic, wall-clock limits.
//!
//! Runs without the libtest harness so the summary lines always reach stdout.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use polcyl_core::blowdown::{contract_image, extend_two_point_blowup, verify_lemma_configuration};
use polcyl_core::cone::{
    classify_polarization, cone_membership, enumerate_negative_classes, fujita_certificate,
    fujita_face, verify_fujita_certificate, verify_membership, EffectiveConeModel,
    PolarizationType,
};
use polcyl_core::cylinder::{
    construct_type_b, construct_type_c, verify_certificate, CaseTag, CylinderCertificate,
    DecompositionTerm, EpsilonPolicy, OpenSetModel,
};
use polcyl_core::linalg;
use polcyl_core::rational::{int, rat};
use polcyl_core::{
    CurveKind, CurveRef, DivisorClass, Rat, SingularClass, SurfaceLattice, SurfaceModel,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn model(m: usize) -> SurfaceModel {
    SurfaceModel::new(m).expect("m >= 2")
}

fn image(s: &SurfaceModel, c: &CurveRef) -> SingularClass {
    s.image_of(c).expect("catalogued curve")
}

/// Uniform rational in the open interval `(0, bound)`.
fn open_unit(rng: &mut ChaCha8Rng, bound: &Rat) -> Rat {
    let q: i64 = rng.gen_range(2..=40);
    let p: i64 = rng.gen_range(1..q);
    bound * rat(p, q)
}

fn through_bound(m: usize) -> Rat {
    rat(2, m as i64 - 1)
}

// ---------------------------------------------------------------- criterion 1

fn catalog_invariants() -> Outcome {
    let mut through = 0;
    let mut off = 0;
    for m in 2..=12usize {
        let s = model(m);
        let n = s.num_fibers();
        let mi = m as i64;
        let ks = s.canonical_s();
        let mut curves = Vec::new();
        for i in 1..=n {
            curves.extend([CurveRef::e(i), CurveRef::e_prime(i), CurveRef::c(i)]);
        }
        for i in 1..=4 {
            curves.push(CurveRef::e_double_prime(i, [1, 2, 3, 4]));
        }
        for c in curves {
            let g = s.class_of(&c).unwrap();
            let l = s.pushforward(&g).unwrap();
            let sq = s.intersect_on_s(&l, &l).unwrap();
            let dk = s.intersect_on_s(&l, &ks).unwrap();
            if s.dot(&g, &s.q()).is_positive() {
                through += 1;
                ensure!(
                    sq == rat(-(mi - 1), mi) && dk == rat(-2, mi),
                    "m={m} {c}: L^2 = {sq}, L.K = {dk}"
                );
            } else {
                off += 1;
                ensure!(sq == int(-1) && dk == int(-1), "m={m} {c}: L^2 = {sq}, L.K = {dk}");
            }
        }
    }
    Ok(format!("{through} curves through p, {off} smooth (-1)-curves"))
}

// ---------------------------------------------------------------- criterion 2

fn gamma_numerics() -> Outcome {
    for m in 2..=12usize {
        let s = model(m);
        let d = s.class_of(&CurveRef::gamma()).unwrap();
        ensure!(s.intersect(&d, &d).unwrap().is_zero(), "m={m}: square");
        ensure!(s.intersect(&d, s.canonical()).unwrap() == int(-2), "m={m}: K-degree");
        ensure!(s.intersect(&d, &s.q()).unwrap() == int(2), "m={m}: meets Q");
        let bound = s.euler_characteristic(&d).unwrap() - int(1);
        ensure!(bound == int(1), "m={m}: RR bound {bound}");
        ensure!(s.genus(&d).unwrap().is_zero(), "m={m}: genus");
    }
    Ok("m=2..12".into())
}

// ---------------------------------------------------------------- criterion 3

struct Draw {
    terms: Vec<DecompositionTerm>,
    s: usize,
    a: Option<Rat>,
    b_fibers: [usize; 4],
}

fn polarization_of(s: &SurfaceModel, d: &Draw) -> SingularClass {
    let mut h = -&s.canonical_s();
    if let Some(a) = &d.a {
        h = h.add_scaled(a, &image(s, &CurveRef::b(d.b_fibers)));
    }
    for t in &d.terms {
        h = h.add_scaled(&t.a, &image(s, &t.curve));
    }
    h
}

fn draw_type_b(rng: &mut ChaCha8Rng, m: usize, s_count: usize) -> Draw {
    let n = m + 4;
    let mut fibers: Vec<usize> = (1..=n).collect();
    fibers.shuffle(rng);
    let mut terms: Vec<DecompositionTerm> = fibers[..s_count]
        .iter()
        .map(|&i| DecompositionTerm::new(CurveRef::e(i), open_unit(rng, &int(1))))
        .collect();
    let max_through = (m - 1).min(n - s_count);
    let k = rng.gen_range(0..=max_through);
    for &j in &fibers[s_count..s_count + k] {
        terms.push(DecompositionTerm::new(CurveRef::e_prime(j), open_unit(rng, &through_bound(m))));
    }
    Draw { terms, s: s_count, a: None, b_fibers: [1, 2, 3, 4] }
}

fn draw_type_c(rng: &mut ChaCha8Rng, m: usize, s_count: usize, a: Rat) -> Draw {
    let n = m + 4;
    let mut fibers: Vec<usize> = (1..=n).collect();
    fibers.shuffle(rng);
    let mut t = [fibers[0], fibers[1], fibers[2], fibers[3]];
    t.sort_unstable();
    let mut terms: Vec<DecompositionTerm> = fibers[..s_count]
        .iter()
        .map(|&i| DecompositionTerm::new(CurveRef::e(i), open_unit(rng, &int(1))))
        .collect();
    for &j in &fibers[4..] {
        let a_j = if rng.gen_bool(0.5) { Rat::zero() } else { open_unit(rng, &through_bound(m)) };
        terms.push(DecompositionTerm::new(CurveRef::e_prime(j), a_j));
    }
    Draw { terms, s: s_count, a: Some(a), b_fibers: t }
}

fn build(s: &SurfaceModel, d: &Draw, policy: &EpsilonPolicy) -> polcyl_core::Result<CylinderCertificate> {
    match &d.a {
        None => construct_type_b(s, &d.terms, d.s, policy),
        Some(a) => construct_type_c(s, a, &d.terms, d.s, d.b_fibers, policy),
    }
}

/// Checks one draw at two epsilon values with an oracle independent of the
/// certificate's own transcript.
fn check_draw(s: &SurfaceModel, d: &Draw, case: CaseTag, inner: Option<CaseTag>) -> Result<(), String> {
    let h = polarization_of(s, d);
    let mut epsilons = Vec::new();
    for policy in [EpsilonPolicy::HalfSupremum, EpsilonPolicy::FractionOfSupremum(rat(1, 3))] {
        let cert = build(s, d, &policy).map_err(|e| format!("construction failed: {e}"))?;
        ensure!(cert.case == case && cert.inner_case == inner, "case {} inner {:?}", cert.case, cert.inner_case);
        let mut sum = s.singular_zero();
        for t in &cert.boundary {
            ensure!(t.coefficient.is_positive(), "{} has coefficient {}", t.curve, t.coefficient);
            sum = sum.add_scaled(&t.coefficient, &image(s, &t.curve));
        }
        ensure!(sum == h, "D - H = {:?}", (&sum - &h).coords());
        verify_certificate(s, &cert, &h).map_err(|e| e.to_string())?;
        // support regime
        let smooth: Vec<usize> = d
            .terms
            .iter()
            .filter(|t| t.curve.kind == CurveKind::E && t.a.is_positive())
            .filter_map(|t| t.curve.fiber())
            .collect();
        let required: Vec<usize> = match d.a {
            None => (1..=s.num_fibers()).filter(|j| !smooth.contains(j)).collect(),
            Some(_) => (1..=s.num_fibers()).filter(|j| !d.b_fibers.contains(j)).collect(),
        };
        for j in required {
            let c = cert.coefficient(&CurveRef::e_prime(j));
            ensure!(c.is_some_and(|v| v.is_positive()), "E{j}' missing from the boundary");
        }
        epsilons.push(cert.epsilon.clone());
    }
    ensure!(epsilons[0] != epsilons[1], "epsilon choices coincide");
    Ok(())
}

fn cylinder_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut count = 0;
    for m in 2..=8usize {
        let n = m + 4;
        let s = model(m);
        for k in 0..100 {
            check_draw(&s, &draw_type_b(&mut rng, m, n), CaseTag::AllSmooth, None)
                .map_err(|e| format!("1-1 m={m}: {e}"))?;
            let sc = rng.gen_range(3..n);
            check_draw(&s, &draw_type_b(&mut rng, m, sc), CaseTag::SeveralSmooth, None)
                .map_err(|e| format!("1-2 m={m} s={sc}: {e}"))?;
            check_draw(&s, &draw_type_b(&mut rng, m, 1), CaseTag::OneSmooth, None)
                .map_err(|e| format!("1-4 m={m}: {e}"))?;
            let sr = 1 + k % 4;
            let inner = match sr {
                1 => CaseTag::OneSmooth,
                2 => CaseTag::TwoSmooth,
                _ => CaseTag::SeveralSmooth,
            };
            let a = open_unit(&mut rng, &int(6));
            check_draw(&s, &draw_type_c(&mut rng, m, sr, a), CaseTag::Reduction, Some(inner))
                .map_err(|e| format!("2-reduction m={m} s={sr}: {e}"))?;
            let a = int(3) + open_unit(&mut rng, &int(5));
            check_draw(&s, &draw_type_c(&mut rng, m, 0, a), CaseTag::Fiber, None)
                .map_err(|e| format!("2-fiber m={m}: {e}"))?;
            count += 5;
        }
    }
    Ok(format!("{count} draws, each verified at two epsilon values"))
}

// ---------------------------------------------------------------- criterion 4

fn two_smooth_reconciliation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut records = 0;
    for m in 2..=8usize {
        let s = model(m);
        let f = image(&s, &CurveRef::f());
        for _ in 0..100 {
            let d = draw_type_b(&mut rng, m, 2);
            let h = polarization_of(&s, &d);
            let cert = build(&s, &d, &EpsilonPolicy::HalfSupremum).map_err(|e| e.to_string())?;
            ensure!(cert.case == CaseTag::TwoSmooth, "case {}", cert.case);
            ensure!(cert.open_set_model == OpenSetModel::LineTimesTwicePuncturedLine, "open set");
            verify_certificate(&s, &cert, &h).map_err(|e| e.to_string())?;
            let eps = &cert.epsilon;
            ensure!(cert.coefficient(&CurveRef::f()) == Some(eps), "F coefficient is not epsilon");
            let disc = cert.discrepancies();
            ensure!(!disc.is_empty(), "no discrepancy recorded");
            let zero_curve = &cert.literal_comparisons[0];
            ensure!(zero_curve.residual == f.scale(eps), "residual with the 0-curve section");
            let alt = &cert.literal_comparisons[1];
            ensure!(alt.exact && alt.note.is_some(), "square -2 alternative not recorded");
            let alt_curve = alt.terms.iter().find(|t| t.curve.kind == CurveKind::CqAlt).unwrap();
            let c = s.class_of(&alt_curve.curve).unwrap();
            ensure!(s.dot(&c, &c) == int(-2), "alternative class square");
            records += disc.len();
        }
    }
    Ok(format!("700 certificates, {records} discrepancy records"))
}

// ---------------------------------------------------------------- criterion 5

fn blowdown_replay() -> Outcome {
    let mut runs = 0;
    for m in 2..=8usize {
        let bm = extend_two_point_blowup(&model(m));
        for t in 2..=m + 4 {
            let r = verify_lemma_configuration(1, m, Some(t)).map_err(|e| e.to_string())?;
            let seq = &r.sequence;
            ensure!(seq.final_rank == 2 && seq.final_k_squared == int(8), "lemma 1 m={m} t={t}");
            let sq = |l: &str| {
                let c = seq.image(l).unwrap();
                bm.dot(c, c)
            };
            let tt = t as i64;
            ensure!(
                sq("Qbar") == int(2 - tt) && sq("L2").is_zero() && sq("Gammabar") == int(tt - 2),
                "lemma 1 m={m} t={t}: image squares"
            );
            ensure!(seq.initial_rank - seq.final_rank == seq.steps.len(), "step count");
            runs += 1;
        }
        let r = verify_lemma_configuration(2, m, None).map_err(|e| e.to_string())?;
        let seq = &r.sequence;
        ensure!(seq.final_rank == 2 && seq.final_k_squared == int(8), "lemma 2 m={m}");
        let squares: Vec<Rat> = ["Qbar", "Gammabar", "L1", "L2"]
            .iter()
            .map(|l| {
                let c = seq.image(l).unwrap();
                bm.dot(c, c)
            })
            .collect();
        ensure!(squares == vec![int(0), int(0), int(0), int(-1)], "lemma 2 m={m}: {squares:?}");
        let r = verify_lemma_configuration(3, m, None).map_err(|e| e.to_string())?;
        let seq = &r.sequence;
        let s = model(m);
        let (q, g) = (seq.image("Q").unwrap(), seq.image("Gamma").unwrap());
        ensure!(seq.final_rank == 1 && seq.final_k_squared == int(9), "lemma 3 m={m}");
        ensure!(
            s.dot(q, q) == int(4) && s.dot(g, g) == int(1) && s.dot(g, q) == int(2),
            "lemma 3 m={m}: conic, line, tangency"
        );
        runs += 2;
    }
    Ok(format!("{runs} contraction pipelines"))
}

// ---------------------------------------------------------------- criterion 6

fn fiber_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for _ in 0..50 {
        let m = rng.gen_range(2..=12usize);
        let s = model(m);
        let n = m + 4;
        let a = int(3) + open_unit(&mut rng, &int(10));
        let eps = open_unit(&mut rng, &((&a - int(3)) / int(4)));
        let mut fibers: Vec<usize> = (1..=n).collect();
        fibers.shuffle(&mut rng);
        let mut t = [fibers[0], fibers[1], fibers[2], fibers[3]];
        t.sort_unstable();
        let mut d = image(&s, &CurveRef::f()).scale(&int(2));
        for &i in &t {
            d = d.add_scaled(&eps, &image(&s, &CurveRef::e(i)));
            d = d.add_scaled(&(int(1) + &eps), &image(&s, &CurveRef::e_double_prime(i, t)));
        }
        let tail = &a - int(3) - int(4) * &eps;
        for j in (1..=n).filter(|j| !t.contains(j)) {
            d = d.add_scaled(&tail, &image(&s, &CurveRef::e_prime(j)));
        }
        let target = (-&s.canonical_s()).add_scaled(&a, &image(&s, &CurveRef::b(t)));
        ensure!(d == target, "m={m} a={a} eps={eps}");
        let cert = construct_type_c(&s, &a, &[], 0, t, &EpsilonPolicy::Fixed(eps.clone()))
            .map_err(|e| e.to_string())?;
        let mut sum = s.singular_zero();
        for b in &cert.boundary {
            sum = sum.add_scaled(&b.coefficient, &image(&s, &b.curve));
        }
        ensure!(sum == d, "certificate differs from the closed form");
    }
    Ok("50 random (m, a, epsilon, B fibers)".into())
}

// ---------------------------------------------------------------- criterion 7

fn check_classification(
    s: &SurfaceModel,
    h: &SingularClass,
    cone: &EffectiveConeModel,
) -> Result<polcyl_core::cone::FujitaResult, String> {
    let res = classify_polarization(s, h, cone).map_err(|e| e.to_string())?;
    let cert = fujita_certificate(s, h, cone).map_err(|e| e.to_string())?;
    ensure!(verify_fujita_certificate(s, h, cone, &cert), "Fujita certificate fails");
    ensure!(cert.mu == res.mu, "mu mismatch");
    let v = &s.canonical_s() + &h.scale(&res.mu);
    let mut rhs = s.singular_zero();
    if let (Some(a), Some(b)) = (&res.a, &res.fiber_class) {
        rhs = rhs.add_scaled(a, b);
        ensure!(s.intersect_on_s(b, b).unwrap().is_zero(), "fiber class is not a 0-class");
    }
    for c in &res.coefficients {
        rhs = rhs.add_scaled(&c.coefficient, &c.image);
    }
    ensure!(rhs == v, "K + mu H differs from the decomposition");
    ensure!(res.rank <= s.m() + 4, "rank {}", res.rank);
    match res.kind {
        PolarizationType::B => {
            let imgs: Vec<&SingularClass> = res.coefficients.iter().map(|c| &c.image).collect();
            let gram: Vec<Vec<Rat>> = imgs
                .iter()
                .map(|x| imgs.iter().map(|y| s.intersect_on_s(x, y).unwrap()).collect())
                .collect();
            ensure!(gram.is_empty() || linalg::is_negative_definite(&gram), "type B Gram");
            let through = res.coefficients.iter().filter(|c| c.through_singular_point).count();
            ensure!(through < s.m(), "r - r_sm = {through}");
        }
        PolarizationType::C => ensure!(res.smooth_count <= 4, "l_sm = {}", res.smooth_count),
    }
    Ok(res)
}

fn random_ample(rng: &mut ChaCha8Rng, s: &SurfaceModel) -> SingularClass {
    let m = s.m();
    let n = m + 4;
    let mut fibers: Vec<usize> = (1..=n).collect();
    fibers.shuffle(rng);
    let mut h = -&s.canonical_s();
    let k_smooth = rng.gen_range(0..=4usize);
    for &i in &fibers[..k_smooth] {
        h = h.add_scaled(&open_unit(rng, &int(1)), &image(s, &CurveRef::e(i)));
    }
    let k_through = rng.gen_range(0..m);
    for &j in &fibers[k_smooth..k_smooth + k_through] {
        h = h.add_scaled(&open_unit(rng, &through_bound(m)), &image(s, &CurveRef::e_prime(j)));
    }
    if rng.gen_bool(0.3) {
        h = h.add_scaled(&open_unit(rng, &int(4)), &image(s, &CurveRef::b([1, 2, 3, 4])));
    }
    h
}

fn fujita_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let cones: Vec<(SurfaceModel, EffectiveConeModel)> = (2..=3)
        .map(|m| {
            let s = model(m);
            let c = enumerate_negative_classes(&s, 2).unwrap();
            (s, c)
        })
        .collect();
    for (s, cone) in &cones {
        let h = -&s.canonical_s();
        let res = check_classification(s, &h, cone)?;
        ensure!(res.mu == int(1) && res.face.is_empty() && res.rank == 0, "mu(-K) for m={}", s.m());
        let face = fujita_face(s, &h, &int(1), cone).map_err(|e| e.to_string())?;
        ensure!(face.generators.is_empty(), "face of -K");
        for a in [rat(1, 3), int(1), rat(7, 2), int(4)] {
            let h = (-&s.canonical_s()).add_scaled(&a, &image(s, &CurveRef::b([1, 2, 3, 4])));
            let res = check_classification(s, &h, cone)?;
            ensure!(res.kind == PolarizationType::C, "-K + {a} B not type C");
            ensure!(res.a.as_ref() == Some(&a), "a recovered as {:?}", res.a);
        }
    }
    let mut redraws = 0;
    let mut tested = 0;
    while tested < 50 {
        let (s, cone) = &cones[tested % 2];
        let h = random_ample(&mut rng, s);
        let r1 = match check_classification(s, &h, cone) {
            Ok(r) => r,
            Err(e) if e.contains("ampleness") => {
                redraws += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let c = open_unit(&mut rng, &int(5));
        let r2 = check_classification(s, &h.scale(&c), cone)?;
        ensure!(&r2.mu * &c == r1.mu, "scaling law");
        ensure!(r1.kind == r2.kind && r1.face == r2.face && r1.rank == r2.rank, "scaling changed the face");
        tested += 1;
    }
    let mut memberships = 0;
    for (s, cone) in &cones {
        for _ in 0..50 {
            let coords: Vec<i64> = (0..s.rank()).map(|_| rng.gen_range(-4..=4)).collect();
            let v = s.class_from_ints(&coords).unwrap();
            let cert = cone_membership(s, &v, cone).map_err(|e| e.to_string())?;
            ensure!(verify_membership(s, &v, cone, &cert), "membership certificate fails");
            memberships += 1;
        }
    }
    Ok(format!(
        "50 scaled pairs ({redraws} non-ample redraws), {memberships} membership certificates"
    ))
}

// ---------------------------------------------------------------- criterion 8

fn random_class(rng: &mut ChaCha8Rng, len: usize) -> DivisorClass {
    DivisorClass(
        (0..len)
            .map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=9)))
            .collect(),
    )
}

fn structural() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for _ in 0..1000 {
        let s = model(rng.gen_range(2..=12));
        let (a, b) = (random_class(&mut rng, s.rank()), random_class(&mut rng, s.rank()));
        let q = s.q();
        let lhs = s
            .intersect_on_s(&s.pushforward(&a).unwrap(), &s.pushforward(&b).unwrap())
            .unwrap();
        let rhs = s.dot(&a, &b) + s.dot(&a, &q) * s.dot(&b, &q) / int(s.m() as i64);
        ensure!(lhs == rhs, "projection formula");
    }
    for _ in 0..1000 {
        let s = model(rng.gen_range(2..=12));
        let coords: Vec<i64> = (0..s.rank()).map(|_| rng.gen_range(-30..=30)).collect();
        let d = s.class_from_ints(&coords).unwrap();
        ensure!(
            s.euler_characteristic(&d).unwrap()
                == s.euler_characteristic(&(s.canonical() - &d)).unwrap(),
            "Riemann-Roch symmetry"
        );
    }
    let mut steps = 0;
    for (lemma, t) in [(1u8, Some(4usize)), (2, None), (3, None)] {
        let m = 2;
        let r = verify_lemma_configuration(lemma, m, t).map_err(|e| e.to_string())?;
        let base = model(m);
        let bm = extend_two_point_blowup(&base);
        let lattice: &dyn SurfaceLattice = if lemma == 3 { &base } else { &bm };
        let len = lattice.form().rank();
        for step in &r.sequence.steps {
            let e = &step.class;
            for _ in 0..1000 {
                let (d1, d2) = (random_class(&mut rng, len), random_class(&mut rng, len));
                let i1 = contract_image(lattice, &d1, e);
                let i2 = contract_image(lattice, &d2, e);
                ensure!(
                    lattice.dot(&i1, &i2) == lattice.dot(&d1, &d2) + lattice.dot(&d1, e) * lattice.dot(&d2, e),
                    "contraction identity at {}",
                    step.label
                );
            }
            steps += 1;
        }
    }
    Ok(format!("1000 + 1000 samples, 1000 pairs at each of {steps} contraction steps"))
}

// ---------------------------------------------------------------------- gate

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1", "catalog intersection numbers on S", Duration::from_secs(1), catalog_invariants),
        ("2", "anticanonical 0-curve numerics", Duration::from_secs(1), gamma_numerics),
        ("3", "cylinder constructions (random sweep)", Duration::from_secs(30), cylinder_sweep),
        ("4", "two-smooth-curve reconciliation", Duration::from_secs(5), two_smooth_reconciliation),
        ("5", "blow-down replay", Duration::from_secs(5), blowdown_replay),
        ("6", "conic-bundle boundary identity", Duration::from_secs(1), fiber_identity),
        ("7", "Fujita invariant and LP certificates", Duration::from_secs(10), fujita_suite),
        ("8", "structural identities", Duration::from_secs(10), structural),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panic: {:?}", p.downcast_ref::<String>())));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {name} [{elapsed:.2?} < {limit:?}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id}: {name} [{elapsed:.2?}] {why}");
            }
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 8 criteria passed");
}
