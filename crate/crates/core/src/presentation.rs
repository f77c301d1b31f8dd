//! Data model for generalized arborescent links: a tree of bracelets glued
//! along Conway spheres.
//!
//! Every port of a band-type bracelet carries the normalized marking:
//! preferred (crossing) slope ∞, descending edge slope 0, ascending edge
//! slope 1. All of a band's twisting lives in its `half_twists` parameter
//! and in the gluing matrices. A trivial tangle stores its preferred slope
//! directly; a once-augmented 1-bracelet stores the integer slope of its
//! strand pair relative to the normalized port marking.

use crate::slope::{GluingMap, Slope, SlopeError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

pub type BraceletId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("unknown bracelet id {0}")]
    UnknownBracelet(BraceletId),
    #[error("port {1} of bracelet {0} is not glued")]
    OpenPort(BraceletId, usize),
    #[error("slope arithmetic failed: {0}")]
    Slope(#[from] SlopeError),
    #[error("presentation is invalid: {0}")]
    Invalid(String),
}

/// One vertex of the presentation tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bracelet {
    pub id: BraceletId,
    /// Number of boundary Conway spheres.
    pub degree: usize,
    /// Number of augmentation circles.
    pub aug: usize,
    /// Band twisting parameter. Meaningful for degree 0 (the twist count of
    /// the closed band) and for bands of degree ≥ 2 (the deck parameter of
    /// the associated solid torus).
    pub half_twists: i64,
    /// Preferred slope of a trivial tangle (degree 1, unaugmented), in its
    /// port marking.
    pub tangle_slope: Option<Slope>,
    /// Strand-pair slope of an augmented 1-bracelet, in the normalized port
    /// marking where the crossing slope is ∞. Always an integer.
    pub arcs_slope: Option<i64>,
}

impl Bracelet {
    pub fn is_tangle(&self) -> bool {
        self.degree == 1 && self.aug == 0
    }

    /// A bracelet is large when degree ≥ 3 or it is augmented.
    pub fn is_large(&self) -> bool {
        self.degree >= 3 || self.aug >= 1
    }

    /// Preferred slope at any of this bracelet's ports, in that port's own
    /// marking: the tangle slope for trivial tangles, ∞ for everything with
    /// a band (crossing-segment slope).
    pub fn preferred_slope(&self) -> Slope {
        if self.is_tangle() {
            self.tangle_slope.expect("validated tangle has a slope")
        } else {
            Slope::infinity()
        }
    }
}

/// One side of a gluing: (bracelet, port index).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct PortRef {
    pub bracelet: BraceletId,
    pub port: usize,
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}.{}", self.bracelet, self.port)
    }
}

/// An edge of the tree: a Conway-sphere gluing. The matrix translates slope
/// coordinates from the `a` port marking to the `b` port marking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingEdge {
    pub a: PortRef,
    pub b: PortRef,
    pub map: GluingMap,
}

impl GluingEdge {
    pub fn involves(&self, id: BraceletId) -> bool {
        self.a.bracelet == id || self.b.bracelet == id
    }

    pub fn other_end(&self, p: PortRef) -> Option<PortRef> {
        if self.a == p {
            Some(self.b)
        } else if self.b == p {
            Some(self.a)
        } else {
            None
        }
    }

    /// The matrix taking slopes in the marking of port `p` to the marking
    /// of the opposite port.
    pub fn map_from(&self, p: PortRef) -> Result<GluingMap, SlopeError> {
        if self.a == p {
            Ok(self.map)
        } else {
            self.map.inverse()
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LinkPresentation {
    pub bracelets: BTreeMap<BraceletId, Bracelet>,
    pub gluings: Vec<GluingEdge>,
    next_id: BraceletId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub message: String,
}

impl LinkPresentation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_bracelet(&mut self, mut b: Bracelet) -> BraceletId {
        let id = self.next_id;
        b.id = id;
        self.next_id += 1;
        self.bracelets.insert(id, b);
        id
    }

    pub fn band(degree: usize, aug: usize, half_twists: i64) -> Bracelet {
        Bracelet {
            id: 0,
            degree,
            aug,
            half_twists,
            tangle_slope: None,
            arcs_slope: if degree == 1 && aug >= 1 { Some(0) } else { None },
        }
    }

    pub fn tangle(slope: Slope) -> Bracelet {
        Bracelet {
            id: 0,
            degree: 1,
            aug: 0,
            half_twists: 0,
            tangle_slope: Some(slope),
            arcs_slope: None,
        }
    }

    pub fn glue(&mut self, a: PortRef, b: PortRef, map: GluingMap) {
        self.gluings.push(GluingEdge { a, b, map });
    }

    pub fn bracelet(&self, id: BraceletId) -> Result<&Bracelet, PresentationError> {
        self.bracelets
            .get(&id)
            .ok_or(PresentationError::UnknownBracelet(id))
    }

    /// Number of Conway spheres = number of gluing edges; the termination
    /// measure of the reducer.
    pub fn conway_sphere_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn edge_at(&self, p: PortRef) -> Option<&GluingEdge> {
        self.gluings.iter().find(|e| e.a == p || e.b == p)
    }

    /// Structural validation; an empty report means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen: BTreeMap<PortRef, usize> = BTreeMap::new();
        for e in &self.gluings {
            for p in [e.a, e.b] {
                *seen.entry(p).or_insert(0) += 1;
                match self.bracelets.get(&p.bracelet) {
                    None => out.push(Violation {
                        message: format!("gluing references unknown bracelet {}", p.bracelet),
                    }),
                    Some(b) => {
                        if p.port >= b.degree {
                            out.push(Violation {
                                message: format!(
                                    "port {} out of range for degree-{} bracelet {}",
                                    p.port, b.degree, p.bracelet
                                ),
                            });
                        }
                    }
                }
            }
            if e.a.bracelet == e.b.bracelet {
                out.push(Violation {
                    message: format!("self-gluing on bracelet {}", e.a.bracelet),
                });
            }
            match e.map.det() {
                Some(d) if d.abs() == 1 => {}
                Some(d) => out.push(Violation {
                    message: format!("non-unimodular gluing matrix (det {d}) on {} ~ {}", e.a, e.b),
                }),
                None => out.push(Violation {
                    message: "gluing matrix overflow".into(),
                }),
            }
        }
        for (p, count) in &seen {
            if *count > 1 {
                out.push(Violation {
                    message: format!("port {p} glued {count} times"),
                });
            }
        }
        for b in self.bracelets.values() {
            for port in 0..b.degree {
                let p = PortRef {
                    bracelet: b.id,
                    port,
                };
                if !seen.contains_key(&p) {
                    out.push(Violation {
                        message: format!("open port {p}"),
                    });
                }
            }
            if b.is_tangle() && b.tangle_slope.is_none() {
                out.push(Violation {
                    message: format!("trivial tangle {} without a slope", b.id),
                });
            }
            if !b.is_tangle() && b.tangle_slope.is_some() {
                out.push(Violation {
                    message: format!("non-tangle bracelet {} carries a tangle slope", b.id),
                });
            }
        }
        // Tree check: connected and |E| = |V| − 1.
        if !self.bracelets.is_empty() {
            if self.gluings.len() + 1 != self.bracelets.len() {
                out.push(Violation {
                    message: format!(
                        "gluing graph is not a tree: {} vertices, {} edges",
                        self.bracelets.len(),
                        self.gluings.len()
                    ),
                });
            } else if !self.is_connected() {
                out.push(Violation {
                    message: "gluing graph is disconnected".into(),
                });
            }
        }
        out
    }

    fn is_connected(&self) -> bool {
        let Some(start) = self.bracelets.keys().next() else {
            return true;
        };
        let mut seen: BTreeSet<BraceletId> = BTreeSet::new();
        let mut stack = vec![*start];
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            for e in &self.gluings {
                if e.a.bracelet == v && !seen.contains(&e.b.bracelet) {
                    stack.push(e.b.bracelet);
                }
                if e.b.bracelet == v && !seen.contains(&e.a.bracelet) {
                    stack.push(e.a.bracelet);
                }
            }
        }
        seen.len() == self.bracelets.len()
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Preferred slope of the bracelet on the far side of the gluing at
    /// port `p`, expressed in the marking of `p`.
    pub fn far_slope_at(&self, p: PortRef) -> Result<Slope, PresentationError> {
        let edge = self
            .edge_at(p)
            .ok_or(PresentationError::OpenPort(p.bracelet, p.port))?;
        let q = edge.other_end(p).expect("edge_at returned this edge");
        let pref = self.bracelet(q.bracelet)?.preferred_slope();
        let to_here = edge.map_from(q)?;
        Ok(to_here.apply(&pref)?)
    }

    /// Re-mark port `p` by `t` twists about the crossing slope: every slope
    /// seen at `p` drops by `t` and the band's half-twist count drops by `t`.
    pub fn twist_port(&mut self, p: PortRef, t: i64) -> Result<(), PresentationError> {
        if t == 0 {
            return Ok(());
        }
        let tw = GluingMap::twist(t);
        let tw_inv = GluingMap::twist(-t);
        let mut found = false;
        for e in self.gluings.iter_mut() {
            if e.a == p {
                e.map = e.map.compose(&tw)?;
                found = true;
                break;
            }
            if e.b == p {
                e.map = tw_inv.compose(&e.map)?;
                found = true;
                break;
            }
        }
        if !found {
            return Err(PresentationError::OpenPort(p.bracelet, p.port));
        }
        let b = self
            .bracelets
            .get_mut(&p.bracelet)
            .ok_or(PresentationError::UnknownBracelet(p.bracelet))?;
        b.half_twists -= t;
        if let Some(a) = b.arcs_slope.as_mut() {
            *a -= t;
        }
        Ok(())
    }

    /// Apply an arbitrary marking change `n` at port `p` (new coordinates =
    /// n(old coordinates)). The caller is responsible for updating any
    /// bracelet fields the re-marking touches.
    pub fn remark_port(&mut self, p: PortRef, n: &GluingMap) -> Result<(), PresentationError> {
        let n_inv = n.inverse()?;
        for e in self.gluings.iter_mut() {
            if e.a == p {
                e.map = e.map.compose(&n_inv)?;
                return Ok(());
            }
            if e.b == p {
                e.map = n.compose(&e.map)?;
                return Ok(());
            }
        }
        Err(PresentationError::OpenPort(p.bracelet, p.port))
    }

    /// Reflect a band-type bracelet in place: the deck parameter becomes
    /// d − k and every port marking is composed with s ↦ 1 − s.
    pub fn reflect_bracelet(&mut self, id: BraceletId) -> Result<(), PresentationError> {
        let b = self
            .bracelets
            .get(&id)
            .ok_or(PresentationError::UnknownBracelet(id))?
            .clone();
        let r = GluingMap::reflect_unit();
        for port in 0..b.degree {
            self.remark_port(PortRef { bracelet: id, port }, &r)?;
        }
        let bm = self.bracelets.get_mut(&id).unwrap();
        if bm.is_tangle() {
            let s = bm.tangle_slope.expect("tangle slope");
            bm.tangle_slope = Some(s.reflect_unit());
        } else {
            bm.half_twists = bm.degree as i64 - bm.half_twists;
            if let Some(a) = bm.arcs_slope.as_mut() {
                *a = 1 - *a;
            }
        }
        Ok(())
    }

    /// The mirror image of the whole presentation.
    pub fn mirror(&self) -> Result<LinkPresentation, PresentationError> {
        let mut out = self.clone();
        let ids: Vec<BraceletId> = out.bracelets.keys().copied().collect();
        for id in ids {
            out.reflect_bracelet(id)?;
        }
        Ok(out)
    }

    /// Remove a bracelet and every edge touching it.
    pub fn remove_bracelet(&mut self, id: BraceletId) {
        self.bracelets.remove(&id);
        self.gluings.retain(|e| !e.involves(id));
    }

    /// Bracelet ids in deterministic order.
    pub fn ids(&self) -> Vec<BraceletId> {
        self.bracelets.keys().copied().collect()
    }

    /// Neighbors of a bracelet as (my port, edge index).
    pub fn ports_of(&self, id: BraceletId) -> Vec<PortRef> {
        (0..self.bracelets[&id].degree)
            .map(|port| PortRef { bracelet: id, port })
            .collect()
    }
}
