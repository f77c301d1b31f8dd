//! Machine-readable run reports and standalone certificates.
//!
//! Every document carries `"schema": "arborhyp/1"`. A certificate embeds
//! the edge classes and angle values it claims, so `verify` can replay it
//! without recomputing the decomposition.

use crate::angles::{Angle, AngleAssignment, BandAngles};
use crate::classifier::Classification;
use crate::decomposer::{BlockDecomposition, EdgeClass, Slot, TetKind};
use crate::presentation::LinkPresentation;
use crate::reducer::TraceEntry;
use crate::verifier::{self, VerificationReport};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "arborhyp/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateBlock {
    pub index: usize,
    pub bracelet: usize,
    pub degree: usize,
    pub augmented: bool,
    pub deck_twists: i64,
    pub a: Vec<Angle>,
    pub b: Vec<Angle>,
    pub c: Vec<Angle>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateTet {
    pub id: usize,
    pub kind: TetKind,
    pub angles: [Angle; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateRegion {
    pub index: usize,
    pub kind: String,
    pub wedge: i64,
    pub route: String,
    pub w: Option<Vec<Angle>>,
}

/// A self-contained hyperbolicity certificate: the combinatorial edge
/// classes of the decomposition together with exact angle values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub kind: String,
    pub epsilon: Angle,
    pub mirrored: bool,
    pub cusps: usize,
    pub blocks: Vec<CertificateBlock>,
    pub tets: Vec<CertificateTet>,
    pub edge_classes: Vec<EdgeClass>,
    pub regions: Vec<CertificateRegion>,
}

pub fn make_certificate(
    decomp: &BlockDecomposition,
    assignment: &AngleAssignment,
) -> Certificate {
    let blocks = decomp
        .blocks
        .iter()
        .map(|b| {
            let ba = &assignment.blocks[b.index];
            CertificateBlock {
                index: b.index,
                bracelet: b.bracelet,
                degree: b.degree,
                augmented: b.augmented,
                deck_twists: b.deck_twists,
                a: ba.a.clone(),
                b: ba.b.clone(),
                c: ba.c.clone(),
            }
        })
        .collect();
    let tets = decomp
        .tets
        .iter()
        .map(|t| CertificateTet {
            id: t.id,
            kind: t.kind,
            angles: assignment.tets[&t.id].clone(),
        })
        .collect();
    let regions = decomp
        .regions
        .iter()
        .map(|r| CertificateRegion {
            index: r.index,
            kind: format!("{:?}", r.kind),
            wedge: r.wedge(),
            route: assignment
                .routes
                .iter()
                .find(|s| s.starts_with(&format!("region {}:", r.index)))
                .cloned()
                .unwrap_or_default(),
            w: assignment.w[r.index]
                .as_ref()
                .map(|w| w.values.clone()),
        })
        .collect();
    Certificate {
        schema: SCHEMA.to_string(),
        kind: "certificate".to_string(),
        epsilon: assignment.epsilon.clone(),
        mirrored: decomp.mirrored,
        cusps: decomp.cusps,
        blocks,
        tets,
        edge_classes: decomp.edge_classes.clone(),
        regions,
    }
}

/// Replay verification of a standalone certificate: edge sums, tetrahedron
/// positivity, and the block conditions, from the embedded data alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplayReport {
    pub edge_sums_ok: bool,
    pub offending_classes: Vec<usize>,
    pub tets_ok: bool,
    pub blocks_ok: bool,
    pub pass: bool,
}

pub fn verify_certificate(cert: &Certificate) -> ReplayReport {
    let tet_angles: std::collections::BTreeMap<usize, &[Angle; 3]> =
        cert.tets.iter().map(|t| (t.id, &t.angles)).collect();
    let block_angles: std::collections::BTreeMap<usize, BandAngles> = cert
        .blocks
        .iter()
        .map(|b| {
            (
                b.index,
                BandAngles {
                    a: b.a.clone(),
                    b: b.b.clone(),
                    c: b.c.clone(),
                },
            )
        })
        .collect();
    let slot_value = |s: &Slot| -> Option<Angle> {
        match s {
            Slot::Layer { tet, role } => tet_angles.get(tet).map(|t| match role {
                crate::decomposer::LayerRole::NewVertex => t[0].clone(),
                crate::decomposer::LayerRole::OldPivot => t[1].clone(),
                crate::decomposer::LayerRole::Diagonal => t[2].clone(),
            }),
            Slot::Cone { tet, role } => tet_angles.get(tet).map(|t| match role {
                crate::decomposer::ConeRole::Ascending => t[0].clone(),
                crate::decomposer::ConeRole::Descending => t[1].clone(),
                crate::decomposer::ConeRole::Crossing => t[2].clone(),
            }),
            Slot::BandInterior { block, band, slot } => {
                let ba = block_angles.get(block)?;
                let ang = match slot {
                    crate::decomposer::AbSlot::A => ba.a.get(*band)?,
                    crate::decomposer::AbSlot::B => ba.b.get(*band)?,
                };
                Some(&Angle::pi() - ang)
            }
            Slot::CrossingInterior { block, line } => {
                let ba = block_angles.get(block)?;
                let d = ba.c.len();
                let c = ba.c.get((*line + d - 1) % d)?;
                Some((&Angle::pi() - c).scale(2))
            }
        }
    };
    let mut offending = Vec::new();
    for ec in &cert.edge_classes {
        let mut total = Angle::zero();
        let mut missing = false;
        for s in &ec.slots {
            match slot_value(s) {
                Some(v) => total = &total + &v,
                None => missing = true,
            }
        }
        if missing || total != Angle::two_pi() {
            offending.push(ec.id);
        }
    }
    let tets_ok = cert.tets.iter().all(|t| {
        let sum = crate::angles::asum(t.angles.iter().cloned());
        sum == Angle::pi() && t.angles.iter().all(|x| x.is_positive())
    });
    let blocks_ok = cert.blocks.iter().all(|b| {
        if b.augmented {
            return true;
        }
        let ba = &block_angles[&b.index];
        let rep = verifier::verify_block_conditions(b.degree, b.deck_twists, ba);
        rep.local_convexity_ok && rep.vertex_sums_ok && rep.bending_ok
    });
    ReplayReport {
        edge_sums_ok: offending.is_empty(),
        offending_classes: offending.clone(),
        tets_ok,
        blocks_ok,
        pass: offending.is_empty() && tets_ok && blocks_ok,
    }
}

// ---------------------------------------------------------------------
// Whole-run report.

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionStats {
    pub blocks: usize,
    pub tetrahedra: usize,
    pub edge_classes: usize,
    pub cusps: usize,
    pub mirrored: bool,
    pub audit_ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummandReport {
    pub presentation: serde_json::Value,
    pub classification: Classification,
    pub verdict_text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub kind: String,
    pub input: String,
    pub trace: Vec<TraceEntry>,
    pub summands: Vec<SummandReport>,
}

pub fn verdict_text(c: &Classification) -> String {
    use crate::classifier::Verdict::*;
    match &c.verdict {
        Unknot => "unknot".to_string(),
        FamilyI { half_twists } => {
            format!("non-hyperbolic: family I (band with {half_twists} half-twists)")
        }
        FamilyII { reason } => format!("non-hyperbolic: family II ({reason})"),
        FamilyIII { p, q, r, reflected } => format!(
            "non-hyperbolic: family III ({p},{q},{r}){}",
            if *reflected { " reflected" } else { "" }
        ),
        Candidate => "candidate (hyperbolic if certified)".to_string(),
    }
}

pub fn stats_of(d: &BlockDecomposition) -> DecompositionStats {
    DecompositionStats {
        blocks: d.blocks.len(),
        tetrahedra: d.tets.len(),
        edge_classes: d.edge_classes.len(),
        cusps: d.cusps,
        mirrored: d.mirrored,
        audit_ok: d.audit.ok(),
    }
}

pub fn presentation_json(p: &LinkPresentation) -> serde_json::Value {
    crate::dsl::emit_json(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::assign;
    use crate::classifier::twobridge_presentation;
    use crate::decomposer::assemble;
    use crate::slope::Slope;

    #[test]
    fn certificate_replays_standalone() {
        let p = twobridge_presentation(Slope::infinity(), Slope::new(2, 5).unwrap());
        let d = assemble(&p).unwrap();
        let a = assign(&d).unwrap();
        let cert = make_certificate(&d, &a);
        let rep = verify_certificate(&cert);
        assert!(rep.pass);
        // Round-trip through JSON.
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        let rep2 = verify_certificate(&back);
        assert_eq!(rep.pass, rep2.pass);
        assert_eq!(rep.offending_classes, rep2.offending_classes);
    }

    #[test]
    fn tampered_certificate_fails() {
        let p = twobridge_presentation(Slope::infinity(), Slope::new(2, 5).unwrap());
        let d = assemble(&p).unwrap();
        let a = assign(&d).unwrap();
        let mut cert = make_certificate(&d, &a);
        // Perturb one tetrahedron angle by π/1000.
        let old = cert.tets[0].angles[0].clone();
        cert.tets[0].angles[0] = &old + &Angle::pi_frac(1, 1000);
        let rep = verify_certificate(&cert);
        assert!(!rep.pass);
        assert!(!rep.offending_classes.is_empty() || !rep.tets_ok);
    }
}
