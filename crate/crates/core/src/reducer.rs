//! Simplification of bracelet presentations to reduced form.
//!
//! The rewrite steps, in order: (1) remove 2-bracelets, (2) remove needless
//! 1-bracelets, (3) undo connected sums, repeating to a fixed point; then
//! (5) create augmented bracelets, (6) combine large bracelets glued with
//! equal preferred slopes, (7) form 0-bracelets. Each applied rewrite
//! strictly decreases the Conway sphere count, so the driver terminates.
//! Step (3) splits the presentation into multiple output links.
//!
//! Twist bookkeeping is fixed by three requirements: twisting a port marking
//! by t drops both the slope seen there and the band's half-twist count by
//! t; mirroring the link maps a degree-d band's count k to d − k; and the
//! Montesinos pattern calibrations for the exceptional families. The
//! updates below are the unique affine rules consistent with those.

use crate::presentation::{
    Bracelet, BraceletId, GluingEdge, LinkPresentation, PortRef, PresentationError,
};
use crate::slope::{common_neighbors, wedge, GluingMap, Slope, SlopeError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("no matching configuration for this step")]
    NoMatch,
    #[error("presentation is invalid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: u8,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionResult {
    pub summands: Vec<LinkPresentation>,
    pub trace: Vec<TraceEntry>,
}

pub enum Outcome {
    Rewritten(LinkPresentation, TraceEntry),
    Split(Vec<LinkPresentation>, TraceEntry),
}

/// Compose the maps around a 2-bracelet: neighbor → port 0, through the
/// band (s ↦ k − s), port 1 → other neighbor.
fn compose_through_two_bracelet(
    m_into: &GluingMap,
    k: i64,
    m_out: &GluingMap,
) -> Result<GluingMap, SlopeError> {
    m_out.compose(&GluingMap::through_band(k))?.compose(m_into)
}

/// Step (1): remove an unaugmented 2-bracelet sitting between two others.
pub fn step_remove_two_bracelets(p: &LinkPresentation) -> Result<Outcome, ReduceError> {
    for id in p.ids() {
        let b = &p.bracelets[&id];
        if b.degree != 2 || b.aug != 0 {
            continue;
        }
        let p0 = PortRef {
            bracelet: id,
            port: 0,
        };
        let p1 = PortRef {
            bracelet: id,
            port: 1,
        };
        let e0 = *p.edge_at(p0).ok_or(ReduceError::NoMatch)?;
        let e1 = *p.edge_at(p1).ok_or(ReduceError::NoMatch)?;
        let x = e0.other_end(p0).unwrap();
        let y = e1.other_end(p1).unwrap();
        let m_into = e0.map_from(x)?; // x → port 0
        let m_out = e1.map_from(p1)?; // port 1 → y
        let composed = compose_through_two_bracelet(&m_into, b.half_twists, &m_out)?;
        let mut next = p.clone();
        next.remove_bracelet(id);
        next.glue(x, y, composed);
        return Ok(Outcome::Rewritten(
            next,
            TraceEntry {
                step: 1,
                detail: format!("removed 2-bracelet {} between {} and {}", id, x, y),
            },
        ));
    }
    Err(ReduceError::NoMatch)
}

/// Step (2): remove a 1-bracelet whose slope, transported to the far band
/// marking, is a Farey neighbor of the crossing slope (i.e. an integer).
pub fn step_remove_needless_one(p: &LinkPresentation) -> Result<Outcome, ReduceError> {
    for id in p.ids() {
        let t = &p.bracelets[&id];
        if !t.is_tangle() {
            continue;
        }
        let tp = PortRef {
            bracelet: id,
            port: 0,
        };
        let Some(edge) = p.edge_at(tp) else { continue };
        let bp = edge.other_end(tp).unwrap();
        let b = p.bracelets[&bp.bracelet].clone();
        if b.degree < 2 || b.aug != 0 {
            continue;
        }
        let u = p.far_slope_at(bp)?;
        if !u.is_integer() {
            continue;
        }
        let u = u.numer();
        let mut next = p.clone();
        next.remove_bracelet(id);
        if b.degree == 2 {
            // The band closes up into a trivial tangle seen from the other
            // port: slope k − u there.
            let other = PortRef {
                bracelet: bp.bracelet,
                port: 1 - bp.port,
            };
            let slope = Slope::integer(b.half_twists - u);
            let nb = next.bracelets.get_mut(&bp.bracelet).unwrap();
            nb.degree = 1;
            nb.half_twists = 0;
            nb.tangle_slope = Some(slope);
            remap_port(&mut next, other, 0);
        } else {
            let nb = next.bracelets.get_mut(&bp.bracelet).unwrap();
            nb.degree -= 1;
            nb.half_twists -= u;
            close_port_gap(&mut next, bp);
        }
        return Ok(Outcome::Rewritten(
            next,
            TraceEntry {
                step: 2,
                detail: format!(
                    "absorbed integer-slope tangle {} (slope {}) into bracelet {}",
                    id, u, bp.bracelet
                ),
            },
        ));
    }
    Err(ReduceError::NoMatch)
}

/// Step (3): a 1-bracelet whose transported slope equals the far crossing
/// slope splits the link into d − 1 connected summands.
pub fn step_undo_connected_sums(p: &LinkPresentation) -> Result<Outcome, ReduceError> {
    for id in p.ids() {
        let t = &p.bracelets[&id];
        if !t.is_tangle() {
            continue;
        }
        let tp = PortRef {
            bracelet: id,
            port: 0,
        };
        let Some(edge) = p.edge_at(tp) else { continue };
        let bp = edge.other_end(tp).unwrap();
        let b = p.bracelets[&bp.bracelet].clone();
        if b.degree < 2 || b.aug != 0 {
            continue;
        }
        let u = p.far_slope_at(bp)?;
        if !u.is_infinity() {
            continue;
        }
        // Each other neighbor of b keeps its subtree, re-glued to a fresh
        // tangle whose slope is the crossing-segment slope at that sphere.
        let mut summands = Vec::new();
        for port in p.ports_of(b.id) {
            if port == bp {
                continue;
            }
            let e = *p.edge_at(port).ok_or(ReduceError::NoMatch)?;
            let far = e.other_end(port).unwrap();
            let mut sub = subtree_of(p, far, b.id);
            let fresh = sub.add_bracelet(LinkPresentation::tangle(Slope::infinity()));
            // The fresh tangle occupies the old block port, so the old edge
            // matrix (port coords → far coords) is reused.
            sub.glue(
                PortRef {
                    bracelet: fresh,
                    port: 0,
                },
                far,
                e.map_from(port)?,
            );
            summands.push(sub);
        }
        return Ok(Outcome::Split(
            summands,
            TraceEntry {
                step: 3,
                detail: format!(
                    "cut connected sum at bracelet {} (tangle {} matched the crossing slope)",
                    b.id, id
                ),
            },
        ));
    }
    Err(ReduceError::NoMatch)
}

/// Step (5): a 3-bracelet with two trivial tangles at wedge 2 from the
/// crossing slope (equivalently: not neighbors, but sharing exactly two
/// common Farey neighbors with it) becomes a once-augmented 1-bracelet.
pub fn step_create_augmented(p: &LinkPresentation) -> Result<Outcome, ReduceError> {
    for id in p.ids() {
        let b = p.bracelets[&id].clone();
        if b.degree != 3 || b.aug != 0 {
            continue;
        }
        let mut halves: Vec<(PortRef, Slope)> = Vec::new();
        for port in p.ports_of(id) {
            let Some(e) = p.edge_at(port) else { continue };
            let far = e.other_end(port).unwrap();
            if !p.bracelets[&far.bracelet].is_tangle() {
                continue;
            }
            let u = p.far_slope_at(port)?;
            if u.is_infinity() {
                continue;
            }
            let not_neighbor = wedge(&u, &Slope::infinity()) > 1;
            let two_common = common_neighbors(&u, &Slope::infinity()).unwrap_or(0) == 2;
            if not_neighbor && two_common {
                halves.push((port, u));
            }
        }
        if halves.len() < 2 {
            continue;
        }
        // Deterministic tie-break: the two smallest port indices.
        halves.sort_by_key(|(port, _)| port.port);
        let (p1, u1) = halves[0];
        let (p2, u2) = halves[1];
        let kept = p
            .ports_of(id)
            .into_iter()
            .find(|q| *q != p1 && *q != p2)
            .expect("degree-3 bracelet has a third port");
        let kept_edge = *p.edge_at(kept).ok_or(ReduceError::NoMatch)?;
        let far = kept_edge.other_end(kept).unwrap();

        // The crossing slope of the new augmented band, seen in the old
        // marking of the kept sphere, is the integer t0 = k − u1 − u2.
        let t0 = Slope::new(b.half_twists * 2 - u1.numer() - u2.numer(), 2)?;
        debug_assert!(t0.is_integer(), "two half-integers sum to an integer");
        let t0 = t0.numer();
        // Re-mark the kept sphere so the new crossing slope is ∞ and the
        // old crossing slope ∞ becomes the strand slope 0.
        let n = GluingMap::new([[0, 1], [1, -t0]])?;

        let mut next = p.clone();
        let tangle1 = p.edge_at(p1).unwrap().other_end(p1).unwrap().bracelet;
        let tangle2 = p.edge_at(p2).unwrap().other_end(p2).unwrap().bracelet;
        next.remove_bracelet(tangle1);
        next.remove_bracelet(tangle2);
        {
            let nb = next.bracelets.get_mut(&id).unwrap();
            nb.degree = 1;
            nb.aug = 1;
            nb.half_twists = 0;
            nb.arcs_slope = Some(0);
        }
        next.gluings.retain(|e| !e.involves(id));
        let new_port = PortRef {
            bracelet: id,
            port: 0,
        };
        let old_to_far = kept_edge.map_from(kept)?;
        next.glue(new_port, far, old_to_far.compose(&n.inverse()?)?);
        return Ok(Outcome::Rewritten(
            next,
            TraceEntry {
                step: 5,
                detail: format!(
                    "augmented bracelet {} from tangles at slopes {} and {}",
                    id, u1, u2
                ),
            },
        ));
    }
    Err(ReduceError::NoMatch)
}

/// Step (6): combine two large bracelets glued with equal preferred slopes
/// into a single (d + d' − 2)-bracelet augmented (n + n') times.
pub fn step_combine_large(p: &LinkPresentation) -> Result<Outcome, ReduceError> {
    for e in &p.gluings {
        let ba = p.bracelets[&e.a.bracelet].clone();
        let bb = p.bracelets[&e.b.bracelet].clone();
        if !ba.is_large() || !bb.is_large() || ba.is_tangle() || bb.is_tangle() {
            continue;
        }
        // Equal preferred slopes: the matrix fixes ∞.
        if e.map.apply(&Slope::infinity())? != Slope::infinity() {
            continue;
        }
        let mut next = p.clone();
        merge_blocks(&mut next, *e)?;
        return Ok(Outcome::Rewritten(
            next,
            TraceEntry {
                step: 6,
                detail: format!(
                    "merged bracelets {} and {} across {} ~ {}",
                    e.a.bracelet, e.b.bracelet, e.a, e.b
                ),
            },
        ));
    }
    Err(ReduceError::NoMatch)
}

/// Merge the two large bracelets joined by `edge` (whose map fixes ∞).
///
/// With the junction in the band-reversing form σ ↦ c − σ the merged
/// half-twist count is k + k' − c; a junction of the form σ ↦ σ + c is
/// first normalized by reflecting the far bracelet.
fn merge_blocks(p: &mut LinkPresentation, edge: GluingEdge) -> Result<(), ReduceError> {
    let [[a, b_ent], [c_ent, d_ent]] = edge.map.entries;
    if c_ent != 0 {
        return Err(ReduceError::Invalid(
            "merge junction does not fix the crossing slope".into(),
        ));
    }
    let eps = a * d_ent;
    if eps == 1 {
        let far = edge.b.bracelet;
        p.reflect_bracelet(far)?;
        let new_edge = *p
            .gluings
            .iter()
            .find(|e| (e.a, e.b) == (edge.a, edge.b) || (e.a, e.b) == (edge.b, edge.a))
            .expect("junction edge survives reflection");
        return merge_blocks(p, new_edge);
    }
    let c = b_ent * d_ent;
    let x = p.bracelets[&edge.a.bracelet].clone();
    let y = p.bracelets[&edge.b.bracelet].clone();
    let k_merged = x.half_twists + y.half_twists - c;

    // New port order: x's ports after the junction in band order, then y's.
    let mut order: Vec<PortRef> = Vec::new();
    for i in 1..x.degree {
        order.push(PortRef {
            bracelet: x.id,
            port: (edge.a.port + i) % x.degree,
        });
    }
    for j in 1..y.degree {
        order.push(PortRef {
            bracelet: y.id,
            port: (edge.b.port + j) % y.degree,
        });
    }

    let mut remaining: Vec<GluingEdge> = Vec::new();
    for g in &p.gluings {
        if (g.a, g.b) == (edge.a, edge.b) || (g.a, g.b) == (edge.b, edge.a) {
            continue;
        }
        remaining.push(*g);
    }
    // Rewire the ordered ports onto the merged bracelet. Old port refs are
    // unique, so a single pass with a marker id avoids collisions.
    let marker = usize::MAX;
    for (new_idx, old_port) in order.iter().enumerate() {
        for g in remaining.iter_mut() {
            for side in [&mut g.a, &mut g.b] {
                if *side == *old_port {
                    *side = PortRef {
                        bracelet: marker,
                        port: new_idx,
                    };
                }
            }
        }
    }
    for g in remaining.iter_mut() {
        for side in [&mut g.a, &mut g.b] {
            if side.bracelet == marker {
                side.bracelet = x.id;
            }
        }
    }
    let degree = x.degree + y.degree - 2;
    let aug = x.aug + y.aug;
    let merged = Bracelet {
        id: x.id,
        degree,
        aug,
        half_twists: k_merged,
        tangle_slope: None,
        arcs_slope: None,
    };
    p.bracelets.remove(&y.id);
    p.bracelets.insert(x.id, merged);
    p.gluings = remaining;
    Ok(())
}

/// Step (7): two trivial tangles whose slopes share a Farey neighbor close
/// into a 0-bracelet; a trivial tangle Farey-adjacent to an augmented
/// 1-bracelet closes into an augmented 0-bracelet.
pub fn step_zero_bracelets(p: &LinkPresentation) -> Result<Outcome, ReduceError> {
    for e in &p.gluings {
        let ba = p.bracelets[&e.a.bracelet].clone();
        let bb = p.bracelets[&e.b.bracelet].clone();
        if ba.is_tangle() && bb.is_tangle() {
            let s = ba.tangle_slope.unwrap();
            let far = p.far_slope_at(e.a)?;
            let close = s == far || common_neighbors(&s, &far).unwrap_or(0) >= 1;
            if close {
                let r = s.signed_wedge(&far);
                let mut next = LinkPresentation::new();
                next.add_bracelet(LinkPresentation::band(0, 0, r));
                return Ok(Outcome::Rewritten(
                    next,
                    TraceEntry {
                        step: 7,
                        detail: format!(
                            "closed tangles {} and {} into a 0-bracelet with {} half-twists",
                            e.a.bracelet, e.b.bracelet, r
                        ),
                    },
                ));
            }
        }
        for (aug_port, tan_port) in [(e.a, e.b), (e.b, e.a)] {
            let aug = &p.bracelets[&aug_port.bracelet];
            let tan = &p.bracelets[&tan_port.bracelet];
            if !(aug.degree == 1 && aug.aug >= 1 && tan.is_tangle()) {
                continue;
            }
            let t1 = p.far_slope_at(aug_port)?;
            if !t1.is_integer() {
                continue;
            }
            let r = t1.numer() - aug.arcs_slope.unwrap_or(0);
            let n = aug.aug;
            let mut next = LinkPresentation::new();
            next.add_bracelet(LinkPresentation::band(0, n, r));
            return Ok(Outcome::Rewritten(
                next,
                TraceEntry {
                    step: 7,
                    detail: format!(
                        "closed augmented bracelet {} with tangle {} into B(0,{}) with {} half-twists",
                        aug_port.bracelet, tan_port.bracelet, n, r
                    ),
                },
            ));
        }
    }
    Err(ReduceError::NoMatch)
}

/// Extract the connected component containing `start`, with `cut` removed.
fn subtree_of(p: &LinkPresentation, start: PortRef, cut: BraceletId) -> LinkPresentation {
    let mut keep = std::collections::BTreeSet::new();
    let mut stack = vec![start.bracelet];
    while let Some(v) = stack.pop() {
        if v == cut || !keep.insert(v) {
            continue;
        }
        for e in &p.gluings {
            if e.a.bracelet == v && e.b.bracelet != cut {
                stack.push(e.b.bracelet);
            }
            if e.b.bracelet == v && e.a.bracelet != cut {
                stack.push(e.a.bracelet);
            }
        }
    }
    let mut out = p.clone();
    let ids = out.ids();
    for id in ids {
        if !keep.contains(&id) {
            out.remove_bracelet(id);
        }
    }
    out
}

/// After deleting port `gone`, shift the higher ports of the same bracelet
/// down by one (cyclic band order is preserved).
fn close_port_gap(p: &mut LinkPresentation, gone: PortRef) {
    for e in p.gluings.iter_mut() {
        for side in [&mut e.a, &mut e.b] {
            if side.bracelet == gone.bracelet && side.port > gone.port {
                side.port -= 1;
            }
        }
    }
}

fn remap_port(p: &mut LinkPresentation, old: PortRef, new_port: usize) {
    for e in p.gluings.iter_mut() {
        for side in [&mut e.a, &mut e.b] {
            if *side == old {
                side.port = new_port;
            }
        }
    }
}

/// Run the full simplification to a fixed point, splitting connected sums.
pub fn reduce(input: &LinkPresentation) -> Result<ReductionResult, ReduceError> {
    let violations = input.validate();
    if !violations.is_empty() {
        return Err(ReduceError::Invalid(
            violations
                .iter()
                .map(|v| v.message.clone())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    let mut trace = Vec::new();
    let mut summands = Vec::new();
    let mut work = vec![input.clone()];
    while let Some(current) = work.pop() {
        let before = current.conway_sphere_count();
        match apply_first(&current)? {
            Some(Outcome::Rewritten(next, entry)) => {
                assert!(
                    next.conway_sphere_count() < before,
                    "rewrite must shrink the sphere count"
                );
                trace.push(entry);
                work.push(next);
            }
            Some(Outcome::Split(parts, entry)) => {
                for part in &parts {
                    assert!(part.conway_sphere_count() < before);
                }
                trace.push(entry);
                work.extend(parts);
            }
            None => summands.push(current),
        }
    }
    summands.sort_by_key(|s| format!("{:?}", s.ids()));
    Ok(ReductionResult { summands, trace })
}

fn apply_first(p: &LinkPresentation) -> Result<Option<Outcome>, ReduceError> {
    let steps: [fn(&LinkPresentation) -> Result<Outcome, ReduceError>; 6] = [
        step_remove_two_bracelets,
        step_remove_needless_one,
        step_undo_connected_sums,
        step_create_augmented,
        step_combine_large,
        step_zero_bracelets,
    ];
    for step in steps.iter() {
        match step(p) {
            Ok(outcome) => return Ok(Some(outcome)),
            Err(ReduceError::NoMatch) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Farey-distance class (0, 1, 2, or 3 = "at least three") between the two
/// preferred slopes across a gluing edge.
pub fn distance_class(p: &LinkPresentation, e: &GluingEdge) -> Result<u8, ReduceError> {
    let sa = p.bracelets[&e.a.bracelet].preferred_slope();
    let sb = p.far_slope_at(e.a)?;
    Ok(if sa == sb {
        0
    } else if wedge(&sa, &sb) == 1 {
        1
    } else if common_neighbors(&sa, &sb).unwrap_or(0) >= 1 {
        2
    } else {
        3
    })
}

/// Check the minimum-distance table on a reduced summand: tangle–tangle ≥ 3,
/// tangle–large ≥ 2, large–large ≥ 1, and no unaugmented 2-bracelets.
pub fn satisfies_distance_table(p: &LinkPresentation) -> Result<bool, ReduceError> {
    for b in p.bracelets.values() {
        if b.degree == 2 && b.aug == 0 {
            return Ok(false);
        }
    }
    for e in &p.gluings {
        let ba = &p.bracelets[&e.a.bracelet];
        let bb = &p.bracelets[&e.b.bracelet];
        let need = if ba.is_tangle() && bb.is_tangle() {
            3
        } else if ba.is_tangle() || bb.is_tangle() {
            2
        } else {
            1
        };
        if distance_class(p, e)? < need {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slope::Slope;

    fn sl(n: i64, d: i64) -> Slope {
        Slope::new(n, d).unwrap()
    }

    pub fn montesinos(k: i64, slopes: &[Slope]) -> LinkPresentation {
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
                GluingMap::identity(),
            );
        }
        p
    }

    pub fn twobridge(s1: Slope, s2: Slope) -> LinkPresentation {
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
            GluingMap::identity(),
        );
        p
    }

    #[test]
    fn chain_composition_matches_two_step_transport() {
        let mut p = LinkPresentation::new();
        let t1 = p.add_bracelet(LinkPresentation::tangle(sl(1, 3)));
        let mid = p.add_bracelet(LinkPresentation::band(2, 0, 2));
        let t2 = p.add_bracelet(LinkPresentation::tangle(sl(2, 5)));
        let m1 = GluingMap::new([[1, 1], [0, 1]]).unwrap();
        let m2 = GluingMap::new([[0, 1], [1, 0]]).unwrap();
        p.glue(
            PortRef {
                bracelet: t1,
                port: 0,
            },
            PortRef {
                bracelet: mid,
                port: 0,
            },
            m1,
        );
        p.glue(
            PortRef {
                bracelet: mid,
                port: 1,
            },
            PortRef {
                bracelet: t2,
                port: 0,
            },
            m2,
        );
        let Ok(Outcome::Rewritten(next, _)) = step_remove_two_bracelets(&p) else {
            panic!("expected rewrite");
        };
        let composed = next.gluings[0];
        let through = GluingMap::through_band(2);
        let from_t1 = if composed.a.bracelet == t1 {
            composed.map_from(composed.a).unwrap()
        } else {
            composed.map_from(composed.b).unwrap()
        };
        for probe in [sl(0, 1), sl(1, 1), Slope::infinity(), sl(3, 7)] {
            let two_step = m2
                .apply(&through.apply(&m1.apply(&probe).unwrap()).unwrap())
                .unwrap();
            assert_eq!(two_step, from_t1.apply(&probe).unwrap());
        }
    }

    #[test]
    fn no_two_bracelet_means_no_match() {
        let p = montesinos(1, &[sl(1, 2), sl(1, 3), sl(1, 7)]);
        assert!(matches!(
            step_remove_two_bracelets(&p),
            Err(ReduceError::NoMatch)
        ));
    }

    #[test]
    fn needless_one_drops_degree_and_twists() {
        let p = montesinos(1, &[sl(3, 1), sl(1, 3), sl(2, 5)]);
        let Ok(Outcome::Rewritten(next, _)) = step_remove_needless_one(&p) else {
            panic!()
        };
        let hub = &next.bracelets[&0];
        assert_eq!(hub.degree, 2);
        assert_eq!(hub.half_twists, 1 - 3);
    }

    #[test]
    fn tangle_at_distance_two_is_not_needless() {
        let p = montesinos(0, &[sl(1, 2), sl(1, 3), sl(2, 5)]);
        assert!(matches!(
            step_remove_needless_one(&p),
            Err(ReduceError::NoMatch)
        ));
    }

    #[test]
    fn connected_sum_splits_into_two() {
        let p = montesinos(0, &[Slope::infinity(), sl(1, 2), sl(1, 3)]);
        let Ok(Outcome::Split(parts, _)) = step_undo_connected_sums(&p) else {
            panic!()
        };
        assert_eq!(parts.len(), 2);
        for part in &parts {
            assert!(part.is_valid(), "{:?}", part.validate());
            assert_eq!(part.conway_sphere_count(), 1);
        }
    }

    #[test]
    fn augmentation_from_two_half_integer_tangles() {
        let p = montesinos(1, &[sl(1, 2), sl(1, 2), sl(1, 5)]);
        let Ok(Outcome::Rewritten(next, _)) = step_create_augmented(&p) else {
            panic!()
        };
        let aug = next
            .bracelets
            .values()
            .find(|b| b.aug == 1)
            .expect("an augmented bracelet");
        assert_eq!(aug.degree, 1);
        assert_eq!(aug.arcs_slope, Some(0));
        assert!(next.is_valid(), "{:?}", next.validate());
    }

    #[test]
    fn no_augmentation_when_slopes_disagree() {
        let p = montesinos(1, &[sl(1, 2), sl(1, 3), sl(1, 5)]);
        assert!(matches!(
            step_create_augmented(&p),
            Err(ReduceError::NoMatch)
        ));
    }

    #[test]
    fn combine_two_large_blocks() {
        let mut p = LinkPresentation::new();
        let x = p.add_bracelet(LinkPresentation::band(3, 0, 1));
        let y = p.add_bracelet(LinkPresentation::band(3, 0, 2));
        // Junction fixing ∞ in the band-reversing form σ ↦ 1 − σ (c = 1).
        p.glue(
            PortRef {
                bracelet: x,
                port: 0,
            },
            PortRef {
                bracelet: y,
                port: 0,
            },
            GluingMap::reflect_unit(),
        );
        for (host, port) in [(x, 1), (x, 2), (y, 1), (y, 2)] {
            let t = p.add_bracelet(LinkPresentation::tangle(sl(1, 5)));
            p.glue(
                PortRef {
                    bracelet: host,
                    port,
                },
                PortRef {
                    bracelet: t,
                    port: 0,
                },
                GluingMap::identity(),
            );
        }
        let Ok(Outcome::Rewritten(next, _)) = step_combine_large(&p) else {
            panic!()
        };
        let merged = &next.bracelets[&x];
        assert_eq!(merged.degree, 4);
        assert_eq!(merged.aug, 0);
        assert_eq!(merged.half_twists, 1 + 2 - 1);
        assert!(next.is_valid(), "{:?}", next.validate());
    }

    #[test]
    fn combine_augmented_with_plain_block() {
        let mut p = LinkPresentation::new();
        let x = p.add_bracelet(LinkPresentation::band(1, 1, 0));
        let y = p.add_bracelet(LinkPresentation::band(3, 0, 0));
        p.glue(
            PortRef {
                bracelet: x,
                port: 0,
            },
            PortRef {
                bracelet: y,
                port: 0,
            },
            GluingMap::reflect_unit(),
        );
        for port in [1, 2] {
            let t = p.add_bracelet(LinkPresentation::tangle(sl(1, 5)));
            p.glue(
                PortRef {
                    bracelet: y,
                    port,
                },
                PortRef {
                    bracelet: t,
                    port: 0,
                },
                GluingMap::identity(),
            );
        }
        let Ok(Outcome::Rewritten(next, _)) = step_combine_large(&p) else {
            panic!()
        };
        let merged = &next.bracelets[&x];
        assert_eq!((merged.degree, merged.aug), (2, 1));
        assert!(next.is_valid());
    }

    #[test]
    fn zero_bracelet_from_close_tangles() {
        let p = twobridge(sl(0, 1), sl(1, 1));
        let Ok(Outcome::Rewritten(next, _)) = step_zero_bracelets(&p) else {
            panic!()
        };
        let b = next.bracelets.values().next().unwrap();
        assert_eq!(b.degree, 0);
        assert_eq!(b.half_twists.abs(), 1);
    }

    #[test]
    fn distant_tangles_do_not_close() {
        let p = twobridge(Slope::infinity(), sl(2, 5));
        assert!(matches!(step_zero_bracelets(&p), Err(ReduceError::NoMatch)));
    }

    #[test]
    fn reduce_terminates_and_satisfies_table() {
        let cases = vec![
            montesinos(1, &[sl(1, 2), sl(1, 3), sl(1, 7)]),
            montesinos(1, &[sl(1, 2), sl(1, 2), sl(1, 4)]),
            montesinos(0, &[sl(3, 1), sl(1, 3), sl(2, 5)]),
            twobridge(Slope::infinity(), sl(2, 5)),
            twobridge(Slope::infinity(), sl(1, 3)),
        ];
        for p in cases {
            let out = reduce(&p).unwrap();
            assert!(!out.summands.is_empty());
            for s in &out.summands {
                assert!(s.is_valid(), "summand invalid: {:?}", s.validate());
                assert!(satisfies_distance_table(s).unwrap());
            }
        }
    }

    #[test]
    fn p22n_reduces_to_augmented_zero_bracelet() {
        for n in 2..=6 {
            let p = montesinos(1, &[sl(1, 2), sl(1, 2), sl(1, n)]);
            let out = reduce(&p).unwrap();
            assert_eq!(out.summands.len(), 1);
            let s = &out.summands[0];
            assert_eq!(s.bracelets.len(), 1);
            let b = s.bracelets.values().next().unwrap();
            assert_eq!((b.degree, b.aug), (0, 1), "P(2,2,{n})");
            assert_eq!(b.half_twists.abs(), n, "P(2,2,{n}) twist count");
        }
    }

    #[test]
    fn p22n_with_extra_twists_stays_unreduced() {
        // Extra band twists break the Farey-neighbor condition, so the
        // augmented bracelet and the remaining tangle stay apart.
        let p = montesinos(-2, &[sl(1, 2), sl(1, 2), sl(1, 2)]);
        let out = reduce(&p).unwrap();
        assert_eq!(out.summands.len(), 1);
        let s = &out.summands[0];
        assert_eq!(s.bracelets.len(), 2);
        assert!(s.bracelets.values().any(|b| b.aug == 1 && b.degree == 1));
        assert!(satisfies_distance_table(s).unwrap());
    }

    #[test]
    fn trefoil_twobridge_closes_to_three_twists() {
        let p = twobridge(Slope::infinity(), sl(1, 3));
        let out = reduce(&p).unwrap();
        assert_eq!(out.summands.len(), 1);
        let b = out.summands[0].bracelets.values().next().unwrap();
        assert_eq!((b.degree, b.aug), (0, 0));
        assert_eq!(b.half_twists.abs(), 3);
    }
}
