use polcyl_core::blowdown::lemma_report;
use polcyl_core::cone::{
    classify_polarization, enumerate_negative_classes, fujita_certificate, recognize,
    verify_fujita_certificate, PolarizationType,
};
use polcyl_core::cylinder::{
    check_certificate, construct_type_b, construct_type_c, CylinderCertificate, DecompositionTerm,
    EpsilonPolicy,
};
use polcyl_core::rational::{fmt_rat, int, parse_rat, rat};
use polcyl_core::{CurveKind, CurveRef, Error, Rat, Result, SingularClass, SurfaceLattice, SurfaceModel};
use serde_json::{json, Value};

use crate::spec::{parse_spec, resolve, DeclaredType, Decomposition};
use crate::{error_json, is_input_error, Status};

type Reply = Result<(Status, Value)>;

fn read_input(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("cannot read {path}: {e}")))
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Failed
    }
}

pub(crate) fn surface(m: usize) -> Reply {
    let model = SurfaceModel::new(m)?;
    let labels = model.basis_labels();
    let ks = model.canonical_s();
    let catalog: Vec<Value> = model
        .catalog()
        .iter()
        .map(|entry| {
            let image = model.pushforward(&entry.class).expect("catalog class");
            json!({
                "curve": entry.curve,
                "class": entry.class,
                "profile": entry.profile,
                "image": image,
                "image_square": fmt_rat(&model.intersect_on_s(&image, &image).expect("same lattice")),
                "image_dot_k": fmt_rat(&model.intersect_on_s(&image, &ks).expect("same lattice")),
            })
        })
        .collect();
    let gram: Vec<Vec<String>> = model.gram().iter().map(|r| r.iter().map(fmt_rat).collect()).collect();
    Ok((
        Status::Ok,
        json!({
            "m": m,
            "rank": model.rank(),
            "basis": labels,
            "singular_basis": labels[1..].to_vec(),
            "gram": gram,
            "canonical": model.canonical(),
            "canonical_s": ks,
            "k_s_squared": fmt_rat(&model.intersect_on_s(&ks, &ks)?),
            "discrepancy": fmt_rat(&model.discrepancy()),
            "catalog": catalog,
        }),
    ))
}

pub(crate) fn classify(input: &str, fiber_bound: usize) -> Reply {
    let pol = resolve(&parse_spec(&read_input(input)?)?)?;
    let model = &pol.model;
    let cone = enumerate_negative_classes(model, fiber_bound)?;
    let result = classify_polarization(model, &pol.h, &cone)?;
    let certificate = fujita_certificate(model, &pol.h, &cone)?;
    let verified = verify_fujita_certificate(model, &pol.h, &cone, &certificate);
    let declared_matches = pol.decomposition.as_ref().map(|d| {
        let declared = match d.kind {
            DeclaredType::B => PolarizationType::B,
            DeclaredType::C => PolarizationType::C,
        };
        declared == result.kind && (d.a.is_none() || d.a == result.a)
    });
    let ok = verified && declared_matches != Some(false);
    Ok((
        status(ok),
        json!({
            "m": model.m(),
            "polarization": pol.h,
            "fiber_bound": fiber_bound,
            "cone_generators": cone.len(),
            "best_effort": cone.best_effort,
            "result": result,
            "fujita_certificate": certificate,
            "fujita_certificate_verified": verified,
            "declared_type_matches": declared_matches,
        }),
    ))
}

/// Reads a decomposition off a classification: `mu H = -K_S + ...`.
fn decomposition_from_vector(model: &SurfaceModel, h: &SingularClass) -> Result<(Rat, Decomposition)> {
    let cone = enumerate_negative_classes(model, polcyl_core::cone::DEFAULT_FIBER_BOUND)?;
    let res = classify_polarization(model, h, &cone)?;
    let mut terms = Vec::new();
    for c in &res.coefficients {
        match &c.name {
            Some(curve) if matches!(curve.kind, CurveKind::E | CurveKind::EPrime) => {
                terms.push((curve.clone(), c.coefficient.clone()))
            }
            _ => {
                return Err(Error::UnrecognizedFace(format!(
                    "face curve {:?} is not an E_i or E_i'",
                    c.name.as_ref().map(|n| n.to_string())
                )))
            }
        }
    }
    let (kind, b_fibers) = match res.kind {
        PolarizationType::B => (DeclaredType::B, [1, 2, 3, 4]),
        PolarizationType::C => {
            let fiber = res.fiber_class.as_ref().expect("type C carries a fiber class");
            let found = four_subsets(model.num_fibers())
                .into_iter()
                .find(|t| model.image_of(&CurveRef::b(*t)).ok().as_ref() == Some(fiber))
                .ok_or_else(|| Error::UnrecognizedFace("fiber class is not a catalogued B".into()))?;
            (DeclaredType::C, found)
        }
    };
    Ok((res.mu, Decomposition { kind, a: res.a, b_fibers, terms }))
}

fn four_subsets(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

fn build(model: &SurfaceModel, d: &Decomposition, policy: &EpsilonPolicy) -> Result<CylinderCertificate> {
    let terms: Vec<DecompositionTerm> =
        d.terms.iter().map(|(c, a)| DecompositionTerm::new(c.clone(), a.clone())).collect();
    match &d.a {
        None => construct_type_b(model, &terms, d.smooth_count(), policy),
        Some(a) => construct_type_c(model, a, &terms, d.smooth_count(), d.b_fibers, policy),
    }
}

pub(crate) fn cylinder(input: &str, epsilon: Option<&str>) -> Reply {
    let policy = match epsilon {
        None => EpsilonPolicy::HalfSupremum,
        Some(text) => EpsilonPolicy::Fixed(
            parse_rat(text).map_err(|e| Error::InvalidParameter(format!("bad epsilon {e}")))?,
        ),
    };
    let pol = resolve(&parse_spec(&read_input(input)?)?)?;
    let model = &pol.model;
    let (scale, decomposition) = match pol.decomposition {
        Some(d) => (int(1), d),
        None => decomposition_from_vector(model, &pol.h)?,
    };
    let cert = match build(model, &decomposition, &policy) {
        Ok(c) => c,
        Err(e) if is_input_error(&e) => return Err(e),
        Err(e) => {
            return Ok((
                Status::Failed,
                json!({ "m": model.m(), "reason": e.kind(), "error": error_json(&e) }),
            ))
        }
    };
    let target = pol.h.scale(&scale);
    let verification = check_certificate(model, &cert, &target);
    Ok((
        status(verification.passed),
        json!({
            "m": model.m(),
            "polarization": pol.h,
            "scaled_by": fmt_rat(&scale),
            "certificate": cert,
            "verification": verification,
        }),
    ))
}

pub(crate) fn blowdown(lemma: u8, m: usize, t: Option<usize>) -> Reply {
    let report = lemma_report(lemma, m, t)?;
    Ok((status(report.passed), json!({ "report": report })))
}

pub(crate) fn enumerate_curves(m: usize, fiber_bound: usize) -> Reply {
    let model = SurfaceModel::new(m)?;
    let cone = enumerate_negative_classes(&model, fiber_bound)?;
    let generators: Vec<Value> = cone
        .generators
        .iter()
        .map(|g| {
            json!({
                "class": g,
                "name": recognize(&model, g, None),
                "profile": model.profile(g),
                "image": model.pushforward(g).expect("same lattice"),
            })
        })
        .collect();
    Ok((
        Status::Ok,
        json!({
            "m": m,
            "fiber_bound": fiber_bound,
            "best_effort": cone.best_effort,
            "count": generators.len(),
            "generators": generators,
        }),
    ))
}

struct Line {
    passed: bool,
    label: String,
    detail: String,
}

fn line(passed: bool, label: String, detail: impl Into<String>) -> Line {
    Line { passed, label, detail: detail.into() }
}

fn catalog_line(model: &SurfaceModel) -> Line {
    let m = model.m() as i64;
    let ks = model.canonical_s();
    let mut bad = Vec::new();
    for entry in model.catalog() {
        if !matches!(entry.curve.kind, CurveKind::E | CurveKind::EPrime | CurveKind::C) {
            continue;
        }
        let l = model.pushforward(&entry.class).expect("catalog class");
        let sq = model.intersect_on_s(&l, &l).expect("same lattice");
        let dk = model.intersect_on_s(&l, &ks).expect("same lattice");
        let expected = if model.dot(&entry.class, &model.q()) > int(0) {
            (rat(-(m - 1), m), rat(-2, m))
        } else {
            (int(-1), int(-1))
        };
        if (sq, dk) != expected {
            bad.push(entry.curve.to_string());
        }
    }
    line(bad.is_empty(), format!("catalog m={}", model.m()), bad.join(", "))
}

fn gamma_line(model: &SurfaceModel) -> Line {
    let d = model.class_of(&CurveRef::gamma()).expect("Gamma is catalogued");
    let got = [
        model.dot(&d, &d),
        model.dot(&d, model.canonical()),
        model.dot(&d, &model.q()),
        model.euler_characteristic(&d).expect("same lattice") - int(1),
    ];
    let ok = got == [int(0), int(-2), int(2), int(1)];
    let detail: Vec<String> = got.iter().map(fmt_rat).collect();
    line(ok, format!("gamma m={}", model.m()), detail.join(" "))
}

/// Fixed admissible draws exercising every construction branch.
fn case_draws(m: usize) -> Vec<(String, Decomposition)> {
    let n = m + 4;
    let e = |i: usize, a: Rat| (CurveRef::e(i), a);
    let ep = |j: usize| (CurveRef::e_prime(j), rat(1, m as i64));
    let b = |terms, a: Option<Rat>| Decomposition {
        kind: if a.is_some() { DeclaredType::C } else { DeclaredType::B },
        a,
        b_fibers: [1, 2, 3, 4],
        terms,
    };
    let mut draws = vec![
        ("1-1".to_string(), b((1..=n).map(|i| e(i, rat(i as i64, n as i64 + 1))).collect(), None)),
        ("1-2".into(), b(vec![e(1, rat(1, 2)), e(2, rat(1, 3)), e(3, rat(1, 4)), ep(4)], None)),
        ("1-3".into(), b(vec![e(1, rat(1, 2)), e(2, rat(1, 3)), ep(3)], None)),
        ("1-4".into(), b(vec![e(1, rat(2, 3)), ep(2)], None)),
    ];
    for s in 1..=4 {
        let mut terms: Vec<_> = (1..=s).map(|i| e(i, rat(1, i as i64 + 1))).collect();
        terms.push(ep(5));
        draws.push((format!("2-reduction s={s}"), b(terms, Some(int(2)))));
    }
    draws.push(("2-fiber".into(), b(vec![ep(5)], Some(int(4)))));
    draws
}

fn case_lines(model: &SurfaceModel) -> Vec<Line> {
    let mut out = Vec::new();
    for (label, d) in case_draws(model.m()) {
        let label = format!("case {label} m={}", model.m());
        let mut ok = true;
        let mut detail = Vec::new();
        for policy in [EpsilonPolicy::HalfSupremum, EpsilonPolicy::FractionOfSupremum(rat(1, 3))] {
            match build(model, &d, &policy) {
                Ok(cert) => {
                    let report = check_certificate(model, &cert, &cert.polarization);
                    ok &= report.passed;
                    let disc = cert.discrepancies().len();
                    let note = if disc > 0 { format!(", {disc} literal discrepancies") } else { String::new() };
                    detail.push(format!("case {} eps {}{note}", cert.case, fmt_rat(&cert.epsilon)));
                }
                Err(e) => {
                    ok = false;
                    detail.push(e.to_string());
                }
            }
        }
        out.push(line(ok, label, detail.join("; ")));
    }
    out
}

fn lemma_line(lemma: u8, m: usize, t: Option<usize>) -> Line {
    let label = match t {
        Some(t) => format!("lemma {lemma} m={m} t={t}"),
        None => format!("lemma {lemma} m={m}"),
    };
    match lemma_report(lemma, m, t) {
        Ok(r) => {
            let failed: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
            let detail = format!("{} checks, K^2 {}", r.checks.len(), fmt_rat(&r.sequence.final_k_squared));
            line(r.passed, label, if failed.is_empty() { detail } else { failed.join(", ") })
        }
        Err(e) => line(false, label, e.to_string()),
    }
}

pub(crate) fn verify_paper(m_from: usize, m_to: usize) -> Reply {
    if m_from < 2 || m_from > m_to {
        return Err(Error::InvalidParameter(format!("need 2 <= m-from <= m-to, got {m_from}..{m_to}")));
    }
    // grouped the same way for every run: lemmas by (lemma, m, t), then the rest by m
    let mut lines = Vec::new();
    for m in m_from..=m_to {
        for t in 2..=m + 4 {
            lines.push(lemma_line(1, m, Some(t)));
        }
    }
    for lemma in [2, 3] {
        for m in m_from..=m_to {
            lines.push(lemma_line(lemma, m, None));
        }
    }
    for m in m_from..=m_to {
        let model = SurfaceModel::new(m)?;
        lines.push(catalog_line(&model));
        lines.push(gamma_line(&model));
        lines.extend(case_lines(&model));
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    let rendered: Vec<String> = lines
        .iter()
        .map(|l| {
            let tag = if l.passed { "PASS" } else { "FAIL" };
            if l.detail.is_empty() {
                format!("{tag} {}", l.label)
            } else {
                format!("{tag} {} ({})", l.label, l.detail)
            }
        })
        .collect();
    Ok((
        status(failed == 0),
        json!({
            "m_from": m_from,
            "m_to": m_to,
            "total": lines.len(),
            "failed": failed,
            "lines": rendered,
        }),
    ))
}
