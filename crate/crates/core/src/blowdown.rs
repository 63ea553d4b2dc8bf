//! Lattice-level replay of the blow-ups at the tangency point and the
//! subsequent contractions onto Hirzebruch surfaces and the plane.
//!
//! Contracting a `(-1)`-class `e` is modelled by pulling images back: a
//! tracked class `D` becomes `D + (D.e) e`, which is orthogonal to `e` and
//! keeps intersection numbers of images computable in the original lattice.

use num_traits::Zero;
use serde::Serialize;

use crate::classes::DivisorClass;
use crate::curves::CurveRef;
use crate::error::{Error, Result};
use crate::picard::{IntersectionForm, SurfaceLattice, SurfaceModel};
use crate::rational::{int, serde_rat, Rat};

/// The resolution blown up at `q` and at the infinitely near point on the
/// common tangent of `Q` and `Gamma`. Coordinates are those of the base
/// followed by the total-transform exceptional classes `e1`, `e2`.
#[derive(Debug, Clone)]
pub struct BlowupModel {
    base: SurfaceModel,
    form: IntersectionForm,
    canonical: DivisorClass,
}

impl SurfaceLattice for BlowupModel {
    fn form(&self) -> &IntersectionForm {
        &self.form
    }

    fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }
}

impl BlowupModel {
    pub fn base(&self) -> &SurfaceModel {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    /// Total transform of a base class.
    pub fn embed(&self, d: &DivisorClass) -> Result<DivisorClass> {
        if d.len() != self.base.rank() {
            return Err(Error::InvalidClass(format!(
                "base class has {} coordinates, expected {}",
                d.len(),
                self.base.rank()
            )));
        }
        let mut coords = d.coords().to_vec();
        coords.extend([Rat::zero(), Rat::zero()]);
        Ok(DivisorClass(coords))
    }

    pub fn e1(&self) -> DivisorClass {
        DivisorClass::unit(self.rank(), self.rank() - 2)
    }

    pub fn e2(&self) -> DivisorClass {
        DivisorClass::unit(self.rank(), self.rank() - 1)
    }

    fn base_curve(&self, c: &CurveRef) -> DivisorClass {
        self.embed(&self.base.class_of(c).expect("catalogued curve"))
            .expect("base rank")
    }

    pub fn q_bar(&self) -> DivisorClass {
        &(&self.base_curve(&CurveRef::q()) - &self.e1()) - &self.e2()
    }

    pub fn gamma_bar(&self) -> DivisorClass {
        &(&self.base_curve(&CurveRef::gamma()) - &self.e1()) - &self.e2()
    }

    pub fn f_bar(&self) -> DivisorClass {
        &self.base_curve(&CurveRef::f()) - &self.e1()
    }

    /// Strict transform of the 0-curve through `q` keeping fibers `keep`.
    pub fn cq_bar(&self, keep: [usize; 2]) -> DivisorClass {
        &self.base_curve(&CurveRef::cq(keep)) - &self.e1()
    }

    pub fn l1(&self) -> DivisorClass {
        &self.e1() - &self.e2()
    }

    pub fn l2(&self) -> DivisorClass {
        self.e2()
    }

    /// Strict transform of a catalogued curve not passing through `q`.
    pub fn unchanged(&self, c: &CurveRef) -> Result<DivisorClass> {
        self.embed(&self.base.class_of(c)?)
    }
}

pub fn extend_two_point_blowup(model: &SurfaceModel) -> BlowupModel {
    let form = model.form().with_exceptional(2);
    let mut coords = model.canonical().coords().to_vec();
    coords.extend([int(1), int(1)]);
    let bm = BlowupModel {
        base: model.clone(),
        form,
        canonical: DivisorClass(coords),
    };
    debug_assert_eq!(bm.dot(&bm.l1(), &bm.l1()), int(-2));
    debug_assert_eq!(bm.dot(&bm.gamma_bar(), &bm.q_bar()), int(0));
    bm
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionStep {
    pub label: String,
    /// Pulled-back image of the contracted curve at its turn.
    pub class: DivisorClass,
    #[serde(with = "serde_rat")]
    pub k_squared_after: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackedImage {
    pub label: String,
    pub class: DivisorClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionSequence {
    pub steps: Vec<ContractionStep>,
    pub initial_rank: usize,
    pub final_rank: usize,
    #[serde(with = "serde_rat")]
    pub initial_k_squared: Rat,
    #[serde(with = "serde_rat")]
    pub final_k_squared: Rat,
    pub final_canonical: DivisorClass,
    pub images: Vec<TrackedImage>,
}

impl ContractionSequence {
    pub fn image(&self, label: &str) -> Option<&DivisorClass> {
        self.images.iter().find(|t| t.label == label).map(|t| &t.class)
    }
}

/// `D + (D.e) e`, the pulled-back image of `D` after contracting `e`.
pub fn contract_image<L: SurfaceLattice + ?Sized>(
    lattice: &L,
    d: &DivisorClass,
    e: &DivisorClass,
) -> DivisorClass {
    d.add_scaled(&lattice.dot(d, e), e)
}

/// Contracts the listed classes in order, re-evaluating each at its turn.
pub fn contract_set<L: SurfaceLattice + ?Sized>(
    lattice: &L,
    classes: &[(String, DivisorClass)],
    tracked: &[(String, DivisorClass)],
) -> Result<ContractionSequence> {
    let rank = lattice.form().rank();
    for (label, c) in classes.iter().chain(tracked) {
        if c.len() != rank {
            return Err(Error::InvalidClass(format!(
                "{label} has {} coordinates, lattice rank is {rank}",
                c.len()
            )));
        }
    }
    let mut k = lattice.canonical().clone();
    let initial_k_squared = lattice.dot(&k, &k);
    let mut pending: Vec<DivisorClass> = classes.iter().map(|(_, c)| c.clone()).collect();
    let mut images: Vec<DivisorClass> = tracked.iter().map(|(_, c)| c.clone()).collect();
    let mut steps = Vec::with_capacity(classes.len());
    for idx in 0..pending.len() {
        let e = pending[idx].clone();
        let square = lattice.dot(&e, &e);
        let k_deg = lattice.dot(&e, &k);
        if square != int(-1) || k_deg != int(-1) {
            return Err(Error::NotContractible {
                label: classes[idx].0.clone(),
                square: crate::rational::fmt_rat(&square),
            });
        }
        for later in pending.iter_mut().skip(idx + 1) {
            *later = contract_image(lattice, later, &e);
        }
        for img in images.iter_mut() {
            *img = contract_image(lattice, img, &e);
        }
        k = contract_image(lattice, &k, &e);
        steps.push(ContractionStep {
            label: classes[idx].0.clone(),
            class: e,
            k_squared_after: lattice.dot(&k, &k),
        });
    }
    Ok(ContractionSequence {
        initial_rank: rank,
        final_rank: rank - steps.len(),
        initial_k_squared,
        final_k_squared: lattice.dot(&k, &k),
        final_canonical: k,
        steps,
        images: tracked
            .iter()
            .zip(images)
            .map(|((label, _), class)| TrackedImage { label: label.clone(), class })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    #[serde(with = "serde_rat")]
    pub expected: Rat,
    #[serde(with = "serde_rat")]
    pub actual: Rat,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: u8,
    pub m: usize,
    pub t: Option<usize>,
    pub sequence: ContractionSequence,
    pub checks: Vec<LemmaCheck>,
    pub passed: bool,
}

/// Runs one of the three contraction pipelines and checks its numerical claims.
///
/// Lemma 1 (`2 <= t <= m+4`): onto the Hirzebruch surface of degree `t-2`.
/// Lemma 2: onto a Hirzebruch surface, boundary `(Qbar, Gammabar, L1, L2)`.
/// Lemma 3: onto the plane, `Q` becoming a conic tangent to the line `Gamma`.
pub fn verify_lemma_configuration(lemma: u8, m: usize, t: Option<usize>) -> Result<LemmaReport> {
    let report = lemma_report(lemma, m, t)?;
    if report.passed {
        Ok(report)
    } else {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.actual))
            .collect();
        Err(Error::VerificationFailure(failed.join("; ")))
    }
}

/// Same as [`verify_lemma_configuration`] but returns failing reports instead of an error.
pub fn lemma_report(lemma: u8, m: usize, t: Option<usize>) -> Result<LemmaReport> {
    let model = SurfaceModel::new(m)?;
    let n = model.num_fibers();
    let mut checks = Vec::new();
    let mut check = |name: String, expected: Rat, actual: Rat| {
        checks.push(LemmaCheck {
            passed: expected == actual,
            name,
            expected,
            actual,
        });
    };
    let sequence;
    match lemma {
        1 => {
            let t = t.ok_or_else(|| Error::InvalidParameter("lemma 1 needs t".into()))?;
            if !(2..=n).contains(&t) {
                return Err(Error::InvalidParameter(format!(
                    "lemma 1 needs 2 <= t <= {n}, got {t}"
                )));
            }
            let bm = extend_two_point_blowup(&model);
            let mut contract = Vec::new();
            for i in 1..=t {
                contract.push((format!("E{i}"), bm.unchanged(&CurveRef::e(i))?));
            }
            for j in t + 1..=n {
                contract.push((format!("E{j}'"), bm.unchanged(&CurveRef::e_prime(j))?));
            }
            contract.push(("Fbar".into(), bm.f_bar()));
            contract.push(("L1".into(), bm.l1()));
            let tracked = vec![
                ("Qbar".to_string(), bm.q_bar()),
                ("L2".to_string(), bm.l2()),
                ("Gammabar".to_string(), bm.gamma_bar()),
            ];
            sequence = contract_set(&bm, &contract, &tracked)?;
            let img = |l: &str| sequence.image(l).unwrap().clone();
            let (q, l2, g) = (img("Qbar"), img("L2"), img("Gammabar"));
            let tt = t as i64;
            check("final rank".into(), int(2), int(sequence.final_rank as i64));
            check("K^2".into(), int(8), sequence.final_k_squared.clone());
            check("Qbar^2".into(), int(-(tt - 2)), bm.dot(&q, &q));
            check("L2^2".into(), int(0), bm.dot(&l2, &l2));
            check("Gammabar^2".into(), int(tt - 2), bm.dot(&g, &g));
            check("Qbar.Gammabar".into(), int(0), bm.dot(&q, &g));
            check("Qbar.L2".into(), int(1), bm.dot(&q, &l2));
            check("Gammabar.L2".into(), int(1), bm.dot(&g, &l2));
        }
        2 => {
            if t.is_some() {
                return Err(Error::InvalidParameter("lemma 2 takes no t".into()));
            }
            let bm = extend_two_point_blowup(&model);
            let mut contract = vec![
                ("Fbar".to_string(), bm.f_bar()),
                ("Cqbar".to_string(), bm.cq_bar([1, 2])),
                ("E1".to_string(), bm.unchanged(&CurveRef::e(1))?),
                ("E2".to_string(), bm.unchanged(&CurveRef::e(2))?),
            ];
            for j in 3..=n {
                contract.push((format!("E{j}'"), bm.unchanged(&CurveRef::e_prime(j))?));
            }
            let tracked = vec![
                ("Qbar".to_string(), bm.q_bar()),
                ("Gammabar".to_string(), bm.gamma_bar()),
                ("L1".to_string(), bm.l1()),
                ("L2".to_string(), bm.l2()),
            ];
            sequence = contract_set(&bm, &contract, &tracked)?;
            let imgs: Vec<DivisorClass> = tracked
                .iter()
                .map(|(l, _)| sequence.image(l).unwrap().clone())
                .collect();
            check("final rank".into(), int(2), int(sequence.final_rank as i64));
            check("K^2".into(), int(8), sequence.final_k_squared.clone());
            let expected_sq = [0, 0, 0, -1];
            for (k, (label, _)) in tracked.iter().enumerate() {
                check(
                    format!("{label}^2"),
                    int(expected_sq[k]),
                    bm.dot(&imgs[k], &imgs[k]),
                );
            }
            // L2 is a (-1)-curve meeting each of the three others once; those
            // three are pairwise disjoint.
            for a in 0..4 {
                for b in a + 1..4 {
                    let expected = if b == 3 { 1 } else { 0 };
                    check(
                        format!("{}.{}", tracked[a].0, tracked[b].0),
                        int(expected),
                        bm.dot(&imgs[a], &imgs[b]),
                    );
                }
            }
        }
        3 => {
            if t.is_some() {
                return Err(Error::InvalidParameter("lemma 3 takes no t".into()));
            }
            let mut contract = vec![
                ("C[1]".to_string(), model.class_of(&CurveRef::c(1))?),
                ("E1".to_string(), model.e(1)),
            ];
            for j in 2..=n {
                contract.push((format!("E{j}'"), model.class_of(&CurveRef::e_prime(j))?));
            }
            let tracked = vec![
                ("Q".to_string(), model.q()),
                ("Gamma".to_string(), model.class_of(&CurveRef::gamma())?),
            ];
            sequence = contract_set(&model, &contract, &tracked)?;
            let q = sequence.image("Q").unwrap().clone();
            let g = sequence.image("Gamma").unwrap().clone();
            check("final rank".into(), int(1), int(sequence.final_rank as i64));
            check("K^2".into(), int(9), sequence.final_k_squared.clone());
            check("Q^2".into(), int(4), model.dot(&q, &q));
            check("Gamma^2".into(), int(1), model.dot(&g, &g));
            check("Gamma.Q".into(), int(2), model.dot(&g, &q));
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "lemma must be 1, 2 or 3, got {other}"
            )))
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(LemmaReport {
        lemma,
        m,
        t,
        sequence,
        checks,
        passed,
    })
}
