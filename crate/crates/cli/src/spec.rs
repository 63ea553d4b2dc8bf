//! Input files: a polarization given either by its decomposition or by raw
//! coordinates over `(F, E1, .., En)` on the singular surface.

use polcyl_core::rational::{int, parse_rat};
use polcyl_core::{CurveKind, CurveRef, Error, Rat, Result, SingularClass, SurfaceModel};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum DeclaredType {
    B,
    C,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SpecTerm {
    pub curve: String,
    pub a: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SpecBody {
    Decomposition {
        #[serde(rename = "type")]
        kind: DeclaredType,
        #[serde(default)]
        a: Option<String>,
        #[serde(default)]
        b_fibers: Option<[usize; 4]>,
        #[serde(default)]
        coefficients: Vec<SpecTerm>,
    },
    Vector {
        coords: Vec<String>,
    },
}

#[derive(Debug, Clone, Deserialize)]
pub struct PolarizationSpec {
    pub m: usize,
    #[serde(flatten)]
    pub body: SpecBody,
}

/// A validated decomposition `H = -K_S (+ a B) + sum a_i L_i`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub kind: DeclaredType,
    pub a: Option<Rat>,
    pub b_fibers: [usize; 4],
    pub terms: Vec<(CurveRef, Rat)>,
}

impl Decomposition {
    /// Number of smooth curves carrying a positive coefficient.
    pub fn smooth_count(&self) -> usize {
        self.terms
            .iter()
            .filter(|(c, a)| c.kind == CurveKind::E && *a > int(0))
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct Polarization {
    pub model: SurfaceModel,
    pub h: SingularClass,
    pub decomposition: Option<Decomposition>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn rational(text: &str) -> Result<Rat> {
    parse_rat(text).map_err(|e| invalid(format!("bad rational {e}")))
}

pub fn parse_spec(text: &str) -> Result<PolarizationSpec> {
    serde_json::from_str(text).map_err(|e| invalid(format!("bad polarization spec: {e}")))
}

pub fn resolve(spec: &PolarizationSpec) -> Result<Polarization> {
    let model = SurfaceModel::new(spec.m)?;
    match &spec.body {
        SpecBody::Vector { coords } => {
            let coords = coords.iter().map(|c| rational(c)).collect::<Result<Vec<_>>>()?;
            let h = model.singular_from(coords)?;
            Ok(Polarization { model, h, decomposition: None })
        }
        SpecBody::Decomposition { kind, a, b_fibers, coefficients } => {
            let d = validate(&model, *kind, a.as_deref(), *b_fibers, coefficients)?;
            let mut h = -&model.canonical_s();
            if let Some(a) = &d.a {
                h = h.add_scaled(a, &model.image_of(&CurveRef::b(d.b_fibers))?);
            }
            for (c, a) in &d.terms {
                h = h.add_scaled(a, &model.image_of(c)?);
            }
            Ok(Polarization { model, h, decomposition: Some(d) })
        }
    }
}

fn validate(
    model: &SurfaceModel,
    kind: DeclaredType,
    a: Option<&str>,
    b_fibers: Option<[usize; 4]>,
    coefficients: &[SpecTerm],
) -> Result<Decomposition> {
    let m = model.m();
    let n = model.num_fibers();
    let a = match (kind, a) {
        (DeclaredType::B, Some(_)) => return Err(invalid("type B takes no fiber coefficient a")),
        (DeclaredType::B, None) => None,
        (DeclaredType::C, None) => return Err(invalid("type C needs a fiber coefficient a")),
        (DeclaredType::C, Some(text)) => {
            let a = rational(text)?;
            if a <= int(0) {
                return Err(invalid(format!("a = {text} must be positive")));
            }
            Some(a)
        }
    };
    let b_fibers = b_fibers.unwrap_or([1, 2, 3, 4]);
    let mut sorted = b_fibers;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.iter().any(|&i| i == 0 || i > n) {
        return Err(invalid(format!("b_fibers {b_fibers:?} must be 4 distinct fibers in 1..={n}")));
    }
    let through_bound = Rat::new(2.into(), (m as i64 - 1).into());
    let mut terms = Vec::new();
    let mut seen = Vec::new();
    for t in coefficients {
        let curve: CurveRef = t.curve.parse().map_err(|e| invalid(format!("unknown curve {e}")))?;
        model.class_of(&curve)?;
        let coefficient = rational(&t.a)?;
        let fiber = match curve.kind {
            CurveKind::E | CurveKind::EPrime => curve.fiber().unwrap_or(0),
            _ => return Err(invalid(format!("{curve} cannot appear in a decomposition"))),
        };
        if seen.contains(&fiber) {
            return Err(invalid(format!("fiber {fiber} appears twice")));
        }
        seen.push(fiber);
        let bound = if curve.kind == CurveKind::E { int(1) } else { through_bound.clone() };
        let lower_ok = match kind {
            DeclaredType::B => coefficient > int(0),
            DeclaredType::C => coefficient >= int(0),
        };
        if !lower_ok || coefficient >= bound {
            return Err(invalid(format!("coefficient {} of {curve} outside its range below {bound}", t.a)));
        }
        terms.push((curve, coefficient));
    }
    Ok(Decomposition { kind, a, b_fibers: sorted, terms })
}
