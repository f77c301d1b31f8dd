//! Classification of reduced summands: the exceptional non-hyperbolic
//! families, the unknot, or candidate status.
//!
//! The exceptional verdicts are:
//!   I   — boundary of a single unknotted band,
//!   II  — two isotopic components each bounding a twice-punctured disk,
//!   III — the pretzel P(p,q,r,−1) (or its mirror) with 1/p + 1/q + 1/r ≥ 1.
//! Everything else is a candidate and goes on to the angle pipeline.

use crate::presentation::{Bracelet, LinkPresentation, PortRef, PresentationError};
use crate::reducer::{self, ReduceError};
use crate::slope::{Slope, SlopeError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("bracelet is not a large unaugmented band")]
    NotLarge,
    #[error("summand is not in reduced form: {0}")]
    NotReduced(String),
    #[error("presentation is not a star of one band with trivial tangles")]
    NotMontesinos,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

/// |intersection| of a compression curve of the block with the ascending
/// (`n_a`) and descending (`n_b`) arc families on its boundary torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionNumbers {
    pub n_a: i64,
    pub n_b: i64,
}

/// In the torus model of the block boundary, the compression curve is the
/// straight segment from the origin to (d, k); ascending arcs lie on the
/// lines y = x + c and descending arcs on the lines y = c.
pub fn intersection_numbers(b: &Bracelet) -> Result<IntersectionNumbers, ClassifyError> {
    if b.degree < 3 || b.aug != 0 {
        return Err(ClassifyError::NotLarge);
    }
    let d = b.degree as i64;
    let k = b.half_twists;
    Ok(IntersectionNumbers {
        n_a: (d - k).abs(),
        n_b: k.abs(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Unknot,
    FamilyI {
        half_twists: i64,
    },
    FamilyII {
        reason: String,
    },
    FamilyIII {
        p: i64,
        q: i64,
        r: i64,
        reflected: bool,
    },
    Candidate,
}

impl Verdict {
    pub fn is_hyperbolic_candidate(&self) -> bool {
        matches!(self, Verdict::Candidate)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub notes: Vec<String>,
    /// For candidates: the summand itself (ready for decomposition).
    #[serde(skip)]
    pub presentation: Option<LinkPresentation>,
}

/// The star-shaped normal form of a Montesinos summand: one unaugmented
/// band of degree ≥ 3, all tangle slopes twisted into (0, 1), possibly a
/// global reflection so at least one slope lies in (0, 1/2].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontesinosForm {
    pub degree: usize,
    pub half_twists: i64,
    pub slopes: Vec<Slope>,
    pub reflected: bool,
}

/// Whether the summand is a star: exactly one large unaugmented bracelet of
/// degree ≥ 3 with every neighbor a trivial tangle.
pub fn montesinos_hub(p: &LinkPresentation) -> Option<usize> {
    let mut hub = None;
    for b in p.bracelets.values() {
        if b.is_tangle() {
            continue;
        }
        if b.degree >= 3 && b.aug == 0 && hub.is_none() {
            hub = Some(b.id);
        } else {
            return None;
        }
    }
    hub
}

/// Normalize a Montesinos star: bring every transported tangle slope into
/// (0, 1) by marking twists (moving the excess into the band count), then
/// reflect if no slope lies in (0, 1/2].
pub fn normalize_montesinos(
    p: &LinkPresentation,
) -> Result<(MontesinosForm, LinkPresentation), ClassifyError> {
    let hub = montesinos_hub(p).ok_or(ClassifyError::NotMontesinos)?;
    let mut q = p.clone();
    for port in q.ports_of(hub) {
        let u = q.far_slope_at(port)?;
        if u.is_infinity() {
            return Err(ClassifyError::NotReduced(format!(
                "tangle at {port} sits at the crossing slope"
            )));
        }
        let t = u.floor()?;
        q.twist_port(port, t)?;
        let moved = q.far_slope_at(port)?;
        if moved.is_integer() {
            return Err(ClassifyError::NotReduced(format!(
                "tangle at {port} is a Farey neighbor of the crossing slope"
            )));
        }
    }
    let slopes = |q: &LinkPresentation| -> Result<Vec<Slope>, ClassifyError> {
        q.ports_of(hub)
            .into_iter()
            .map(|port| Ok(q.far_slope_at(port)?))
            .collect()
    };
    let mut reflected = false;
    let mut current = slopes(&q)?;
    let any_low = |ss: &[Slope]| ss.iter().any(|s| 2 * s.numer() <= s.denom());
    if !any_low(&current) {
        q = q.mirror()?;
        reflected = true;
        current = slopes(&q)?;
    }
    let hub_b = q.bracelet(hub)?.clone();
    Ok((
        MontesinosForm {
            degree: hub_b.degree,
            half_twists: hub_b.half_twists,
            slopes: current,
            reflected,
        },
        q,
    ))
}

/// Decide the verdict for one reduced summand.
pub fn classify(p: &LinkPresentation) -> Result<Classification, ClassifyError> {
    if !p.is_valid() {
        return Err(ClassifyError::NotReduced("invalid presentation".into()));
    }
    if !reducer::satisfies_distance_table(p)? {
        return Err(ClassifyError::NotReduced(
            "minimum-distance table violated".into(),
        ));
    }
    let mut notes = Vec::new();

    // Any bracelet augmented at least twice carries two isotopic parallel
    // components bounding twice-punctured disks.
    if let Some(b) = p.bracelets.values().find(|b| b.aug >= 2) {
        return Ok(Classification {
            verdict: Verdict::FamilyII {
                reason: format!(
                    "bracelet {} is augmented {} times (parallel isotopic circles)",
                    b.id, b.aug
                ),
            },
            notes,
            presentation: None,
        });
    }

    // A single closed band.
    if p.bracelets.len() == 1 {
        let b = p.bracelets.values().next().unwrap();
        if b.degree == 0 && b.aug == 0 {
            let r = b.half_twists;
            if r.abs() == 1 {
                return Ok(Classification {
                    verdict: Verdict::Unknot,
                    notes,
                    presentation: None,
                });
            }
            if r == 0 {
                notes.push("two-component unlink (flat closed band)".into());
            }
            return Ok(Classification {
                verdict: Verdict::FamilyI { half_twists: r },
                notes,
                presentation: None,
            });
        }
        if b.degree == 0 && b.aug == 1 {
            let r = b.half_twists;
            let reflected = r < 0;
            let r_abs = r.abs();
            return Ok(match r_abs {
                0 => Classification {
                    verdict: Verdict::FamilyII {
                        reason: "flat augmented closed band (composite; unreachable from \
                                 unaugmented input)"
                            .into(),
                    },
                    notes,
                    presentation: None,
                },
                1 => {
                    notes.push(
                        "augmented band with one half-twist: boundary of a band with four \
                         half-twists"
                            .into(),
                    );
                    Classification {
                        verdict: Verdict::FamilyI { half_twists: 4 },
                        notes,
                        presentation: None,
                    }
                }
                _ => Classification {
                    verdict: Verdict::FamilyIII {
                        p: r_abs,
                        q: 2,
                        r: 2,
                        reflected,
                    },
                    notes,
                    presentation: None,
                },
            });
        }
    }

    // Montesinos patterns.
    if montesinos_hub(p).is_some() {
        let (form, normalized) = normalize_montesinos(p)?;
        if let Some(v) = montesinos_exceptional(&form) {
            return Ok(Classification {
                verdict: v,
                notes,
                presentation: None,
            });
        }
        // Also probe the mirror pattern (the reflected flag toggles).
        let (mirror_form, _) = normalize_montesinos(&normalized.mirror()?)?;
        if let Some(v) = montesinos_exceptional(&mirror_form) {
            let v = match v {
                Verdict::FamilyIII { p, q, r, reflected } => Verdict::FamilyIII {
                    p,
                    q,
                    r,
                    reflected: !reflected,
                },
                other => other,
            };
            return Ok(Classification {
                verdict: v,
                notes,
                presentation: None,
            });
        }
    }

    Ok(Classification {
        verdict: Verdict::Candidate,
        notes,
        presentation: Some(p.clone()),
    })
}

/// The exceptional Montesinos patterns in normalized form: degree 4 with
/// every slope 1/2 and two half-twists (family II), and degree 3 with
/// slopes 1/p, 1/q, 1/r, one half-twist and 1/p + 1/q + 1/r ≥ 1
/// (family III).
fn montesinos_exceptional(form: &MontesinosForm) -> Option<Verdict> {
    if form.degree == 4
        && form.half_twists == 2
        && form.slopes.iter().all(|s| *s == Slope::new(1, 2).unwrap())
    {
        return Some(Verdict::FamilyII {
            reason: "degree-4 band, all tangles at slope 1/2, two half-twists".into(),
        });
    }
    if form.degree == 3 && form.half_twists == 1 && form.slopes.iter().all(|s| s.numer() == 1) {
        let (x1, x2, x3) = (
            form.slopes[0].denom(),
            form.slopes[1].denom(),
            form.slopes[2].denom(),
        );
        // 1/x1 + 1/x2 + 1/x3 ≥ 1  ⇔  x2·x3 + x1·x3 + x1·x2 ≥ x1·x2·x3.
        if x2 * x3 + x1 * x3 + x1 * x2 >= x1 * x2 * x3 {
            let mut xs = [x1, x2, x3];
            xs.sort();
            return Some(Verdict::FamilyIII {
                p: xs[0],
                q: xs[1],
                r: xs[2],
                reflected: form.reflected,
            });
        }
    }
    None
}

/// Full pipeline helper: reduce and classify every summand.
pub fn reduce_and_classify(
    input: &LinkPresentation,
) -> Result<(reducer::ReductionResult, Vec<Classification>), ClassifyError> {
    let red = reducer::reduce(input)?;
    let mut out = Vec::new();
    for s in &red.summands {
        out.push(classify(s)?);
    }
    Ok((red, out))
}

/// Build a Montesinos star presentation (identity gluings).
pub fn montesinos_presentation(k: i64, slopes: &[Slope]) -> LinkPresentation {
    let mut p = LinkPresentation::new();
    let hub = p.add_bracelet(LinkPresentation::band(slopes.len(), 0, k));
    for (i, s) in slopes.iter().enumerate() {
        let t = p.add_bracelet(LinkPresentation::tangle(*s));
        p.glue(
            PortRef {
                bracelet: hub,
                port: i,
            },
            PortRef {
                bracelet: t,
                port: 0,
            },
            crate::slope::GluingMap::identity(),
        );
    }
    p
}

/// Build a two-bridge presentation from two tangle slopes on a shared
/// sphere (identity gluing).
pub fn twobridge_presentation(s1: Slope, s2: Slope) -> LinkPresentation {
    let mut p = LinkPresentation::new();
    let a = p.add_bracelet(LinkPresentation::tangle(s1));
    let b = p.add_bracelet(LinkPresentation::tangle(s2));
    p.glue(
        PortRef {
            bracelet: a,
            port: 0,
        },
        PortRef {
            bracelet: b,
            port: 0,
        },
        crate::slope::GluingMap::identity(),
    );
    p
}
