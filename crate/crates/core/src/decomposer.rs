//! Combinatorial block decomposition of a candidate link complement.
//!
//! Each large bracelet becomes a solid-torus block whose boundary bands are
//! subdivided into triangles (or a square with an artificially chosen
//! diagonal, when the neighbor is glued directly). Each gluing edge of the
//! tree becomes a region: a stack of tetrahedron layers indexed by the
//! Farey triangles between the two preferred slopes, with folds closing the
//! stack at trivial-tangle ends. Global ideal-edge classes are computed by
//! union-find over arc identifications; every interior class must later
//! receive dihedral angles summing to exactly 2π.
//!
//! Conventions. In every normalized band marking the crossing slope is ∞,
//! the descending slot is 0 and the ascending slot is 1. Puncture labels
//! live in (Z/2)²: an arc of reduced slope y/x starting at label ℓ ends at
//! ℓ + (x, y) mod 2. The two arcs of a slope pair are copy 0 (the one
//! through label (0,0)) and copy 1.

use crate::classifier::{self, Verdict};
use crate::farey::{self, FareyError, FareyPath, Letter};
use crate::presentation::{BraceletId, LinkPresentation, PortRef, PresentationError};
use crate::slope::{GluingMap, Slope, SlopeError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

pub type TetId = usize;
pub type Label = (u8, u8);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("presentation is not a candidate: {0}")]
    NotCandidate(String),
    #[error("bracelet {0} is not large")]
    NotLarge(BraceletId),
    #[error("bracelet {0} is not augmented")]
    NotAugmented(BraceletId),
    #[error("slopes are Farey neighbors or equal; no tangle region exists")]
    SlopeTooClose,
    #[error("structural audit failed: {0}")]
    Audit(String),
    #[error(transparent)]
    Farey(#[from] FareyError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Classify(#[from] classifier::ClassifyError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AbSlot {
    A,
    B,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum LayerRole {
    NewVertex,
    OldPivot,
    Diagonal,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ConeRole {
    Ascending,
    Descending,
    Crossing,
}

/// One dihedral-angle contribution to an edge class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Slot {
    /// Angle of a layer tetrahedron at the given role's edge pair.
    Layer { tet: TetId, role: LayerRole },
    /// Angle of a cone tetrahedron of an augmented block.
    Cone { tet: TetId, role: ConeRole },
    /// Interior angle π − a (or π − b) of a solid torus at a band edge.
    BandInterior {
        block: usize,
        band: usize,
        slot: AbSlot,
    },
    /// Interior angle 2(π − c) of a solid torus at a crossing edge
    /// (the two identified edges of the cover each carry π − c).
    CrossingInterior { block: usize, line: usize },
}

/// Identifier of an ideal arc before identification.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum ArcKey {
    Region {
        region: usize,
        slope: Slope,
        copy: u8,
    },
    Band {
        block: usize,
        band: usize,
        slot: AbSlot,
        copy: u8,
    },
    Crossing {
        block: usize,
        line: usize,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeClass {
    pub id: usize,
    pub slots: Vec<Slot>,
    pub summary: String,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum TetKind {
    Layer {
        region: usize,
        layer: usize,
        copy: u8,
    },
    Cone {
        block: usize,
        band: usize,
        face: u8,
    },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tetrahedron {
    pub id: TetId,
    pub kind: TetKind,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum RegionKind {
    /// Farey-neighbor preferred slopes: the blocks share square faces.
    Direct,
    /// Two large blocks separated by m ≥ 1 tetrahedron layers.
    Product,
    /// Block to trivial tangle: layers 1..m−1 and a fold at the far end.
    TangleFold,
    /// Trivial tangle to trivial tangle: layers 2..m−1, folds at both ends.
    TwoBridge,
}

/// Per-layer data of a region: the tetrahedron pair over Farey edge e_i.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LayerInfo {
    pub index: usize,
    pub tets: [TetId; 2],
    pub letters: (Letter, Letter),
    pub hinge: bool,
    /// Slope at the new-vertex side pair (q_{i−1}).
    pub new_slope: Slope,
    /// Slope at the old-pivot side pair.
    pub pivot_slope: Slope,
    /// Bottom diagonal slope (vertex of T_{i−1} dropped across e_i).
    pub bottom_slope: Slope,
    /// Top diagonal slope (q_i).
    pub top_slope: Slope,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoldRecord {
    /// Index of the folded pleated surface.
    pub surface: usize,
    /// Slope of the edges the fold identifies faces across.
    pub drop_slope: Slope,
    /// The two slopes whose four arcs collapse to a single edge.
    pub merged: (Slope, Slope),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Region {
    pub index: usize,
    pub edge_index: usize,
    pub kind: RegionKind,
    pub near: PortRef,
    pub far: PortRef,
    /// Geodesic path in the near-port marking (None for Direct).
    pub path: Option<FareyPath>,
    pub layers: Vec<LayerInfo>,
    pub fold_near: Option<FoldRecord>,
    pub fold_far: Option<FoldRecord>,
}

impl Region {
    pub fn m(&self) -> usize {
        self.path.as_ref().map(|p| p.m()).unwrap_or(0)
    }

    pub fn wedge(&self) -> i64 {
        self.path
            .as_ref()
            .map(|p| crate::slope::wedge(&p.source, &p.target))
            .unwrap_or(1)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Band {
    pub region: usize,
    /// Slope of the ascending slot in this band's marking: 1, or ±1 for the
    /// artificially chosen diagonal of a square band.
    pub a_slot_slope: Slope,
    /// Square bands come from direct gluings; their ascending slot carries
    /// dihedral angle zero.
    pub square: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Block {
    pub index: usize,
    pub bracelet: BraceletId,
    pub degree: usize,
    pub augmented: bool,
    pub deck_twists: i64,
    pub bands: Vec<Band>,
    /// 4·degree cone tetrahedra when augmented.
    pub cone_tets: Vec<TetId>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AuditReport {
    pub face_classes: usize,
    pub face_pairing_ok: bool,
    pub tet_slot_closure_ok: bool,
    pub euler_ok: bool,
    pub euler_value: i64,
    pub messages: Vec<String>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.face_pairing_ok && self.tet_slot_closure_ok && self.euler_ok
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockDecomposition {
    /// Port-normalized (and possibly mirrored) copy of the input summand.
    pub presentation: LinkPresentation,
    pub mirrored: bool,
    pub blocks: Vec<Block>,
    pub regions: Vec<Region>,
    pub tets: Vec<Tetrahedron>,
    pub edge_classes: Vec<EdgeClass>,
    pub cusps: usize,
    pub audit: AuditReport,
}

impl BlockDecomposition {
    pub fn block_of(&self, id: BraceletId) -> Option<&Block> {
        self.blocks.iter().find(|b| b.bracelet == id)
    }

    pub fn tet_count(&self) -> usize {
        self.tets.len()
    }
}

// ---------------------------------------------------------------------
// Small generic union-find over hashable keys.

pub(crate) struct UnionFind<K: std::hash::Hash + Eq + Clone> {
    parent: HashMap<K, K>,
}

impl<K: std::hash::Hash + Eq + Clone> UnionFind<K> {
    pub(crate) fn new() -> Self {
        UnionFind {
            parent: HashMap::new(),
        }
    }

    pub(crate) fn find(&mut self, k: &K) -> K {
        let p = match self.parent.get(k) {
            None => {
                self.parent.insert(k.clone(), k.clone());
                return k.clone();
            }
            Some(p) => p.clone(),
        };
        if p == *k {
            return p;
        }
        let root = self.find(&p);
        self.parent.insert(k.clone(), root.clone());
        root
    }

    pub(crate) fn union(&mut self, a: &K, b: &K) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent.insert(ra, rb);
        }
    }

    pub(crate) fn insert(&mut self, k: &K) {
        self.find(k);
    }

    pub(crate) fn keys(&self) -> Vec<K> {
        self.parent.keys().cloned().collect()
    }
}

// ---------------------------------------------------------------------
// Label algebra on the four punctures of a marked sphere.

pub fn parity(s: &Slope) -> Label {
    (
        (s.denom().rem_euclid(2)) as u8,
        (s.numer().rem_euclid(2)) as u8,
    )
}

fn ladd(a: Label, b: Label) -> Label {
    (a.0 ^ b.0, a.1 ^ b.1)
}

const ALL_LABELS: [Label; 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// Endpoint labels of the `copy`-th arc of a slope pair.
pub fn arc_endpoints(s: &Slope, copy: u8) -> (Label, Label) {
    let v = parity(s);
    if copy == 0 {
        ((0, 0), v)
    } else {
        let u = *ALL_LABELS
            .iter()
            .find(|l| **l != (0, 0) && **l != v)
            .expect("two labels remain");
        (u, ladd(u, v))
    }
}

/// Which copy of a slope pair has the given endpoint set.
fn copy_of_endpoints(e: (Label, Label)) -> u8 {
    if e.0 == (0, 0) || e.1 == (0, 0) {
        0
    } else {
        1
    }
}

// ---------------------------------------------------------------------
// Candidate preparation.

/// Whether the summand is a star of one large unaugmented bracelet and
/// trivial tangles (the delicate case of the angle construction).
pub fn strongly_montesinos(p: &LinkPresentation) -> bool {
    classifier::montesinos_hub(p).is_some()
}

/// Normalize every band port so the transported far slope lies in [0, 1);
/// mirror a strongly Montesinos presentation first when its normalized deck
/// parameter would make the descending intersection number exceed the
/// ascending one.
pub fn prepare_candidate(
    p: &LinkPresentation,
) -> Result<(LinkPresentation, bool), DecomposeError> {
    let mut q = normalize_ports(p)?;
    let mut mirrored = false;
    if let Some(hub) = classifier::montesinos_hub(&q) {
        let b = q.bracelet(hub)?;
        let d = b.degree as i64;
        let k = b.half_twists;
        let (na, nb) = ((d - k).abs(), k.abs());
        if nb > na {
            q = q.mirror()?;
            q = normalize_ports(&q)?;
            mirrored = true;
        }
    }
    Ok((q, mirrored))
}

fn normalize_ports(p: &LinkPresentation) -> Result<LinkPresentation, DecomposeError> {
    let mut q = p.clone();
    for id in q.ids() {
        if q.bracelets[&id].is_tangle() {
            continue;
        }
        for port in q.ports_of(id) {
            let u = q.far_slope_at(port)?;
            if u.is_infinity() {
                return Err(DecomposeError::NotCandidate(format!(
                    "equal preferred slopes across {port}: presentation is not reduced"
                )));
            }
            let t = u.floor()?;
            q.twist_port(port, t)?;
        }
    }
    Ok(q)
}

// ---------------------------------------------------------------------
// Assembly.

struct Builder {
    blocks: Vec<Block>,
    regions: Vec<Region>,
    tets: Vec<Tetrahedron>,
    arcs: UnionFind<ArcKey>,
    arc_slots: Vec<(ArcKey, Slot)>,
    faces: UnionFind<FaceKey>,
    face_sides: Vec<(FaceKey, String)>,
    punctures: UnionFind<PunctureKey>,
    radial_classes: Vec<EdgeClass>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum FaceKey {
    Surface {
        region: usize,
        surface: usize,
        missing: Label,
    },
    Band {
        block: usize,
        band: usize,
        missing: Label,
    },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum PunctureKey {
    Block {
        block: usize,
        line: usize,
        parity: u8,
    },
    Region {
        region: usize,
        label: Label,
    },
    Apex {
        block: usize,
    },
}

impl Builder {
    fn new() -> Self {
        Builder {
            blocks: Vec::new(),
            regions: Vec::new(),
            tets: Vec::new(),
            arcs: UnionFind::new(),
            arc_slots: Vec::new(),
            faces: UnionFind::new(),
            face_sides: Vec::new(),
            punctures: UnionFind::new(),
            radial_classes: Vec::new(),
        }
    }

    fn new_tet(&mut self, kind: TetKind) -> TetId {
        let id = self.tets.len();
        self.tets.push(Tetrahedron { id, kind });
        id
    }

    /// Canonical puncture of a block: wrapping past the last line shifts
    /// the vertical parity by the deck twist count.
    fn block_puncture(&self, block: usize, line: usize, parity_y: i64) -> PunctureKey {
        let b = &self.blocks[block];
        let d = b.degree;
        let (line, shift) = if line >= d {
            (line - d, b.deck_twists)
        } else {
            (line, 0)
        };
        PunctureKey::Block {
            block,
            line,
            parity: ((parity_y + shift).rem_euclid(2)) as u8,
        }
    }
}

/// Build the full decomposition for a candidate summand.
pub fn assemble(input: &LinkPresentation) -> Result<BlockDecomposition, DecomposeError> {
    let cls = classifier::classify(input)?;
    if !matches!(cls.verdict, Verdict::Candidate) {
        return Err(DecomposeError::NotCandidate(format!(
            "classified as {:?}",
            cls.verdict
        )));
    }
    let (p, mirrored) = prepare_candidate(input)?;
    let mut bld = Builder::new();

    // Blocks for every large bracelet, in id order.
    let mut block_of: BTreeMap<BraceletId, usize> = BTreeMap::new();
    for id in p.ids() {
        let b = &p.bracelets[&id];
        if b.is_tangle() {
            continue;
        }
        if !b.is_large() {
            return Err(DecomposeError::NotCandidate(format!(
                "bracelet {id} is neither a tangle nor large"
            )));
        }
        let index = bld.blocks.len();
        block_of.insert(id, index);
        bld.blocks.push(Block {
            index,
            bracelet: id,
            degree: b.degree,
            augmented: b.aug >= 1,
            deck_twists: b.half_twists,
            bands: vec![
                Band {
                    region: usize::MAX,
                    a_slot_slope: Slope::one(),
                    square: false,
                };
                b.degree
            ],
            cone_tets: Vec::new(),
        });
    }

    // Regions for every gluing edge.
    for (edge_index, edge) in p.gluings.iter().enumerate() {
        let a_is_tangle = p.bracelets[&edge.a.bracelet].is_tangle();
        let b_is_tangle = p.bracelets[&edge.b.bracelet].is_tangle();
        let (near, far) = match (a_is_tangle, b_is_tangle) {
            (true, false) => (edge.b, edge.a),
            _ => (edge.a, edge.b),
        };
        let region_index = bld.regions.len();
        let region = if a_is_tangle && b_is_tangle {
            build_two_bridge_region(&p, region_index, edge_index, near, far, &mut bld)?
        } else if a_is_tangle || b_is_tangle {
            build_tangle_region_inner(&p, region_index, edge_index, near, far, &mut bld)?
        } else {
            build_block_junction(&p, region_index, edge_index, near, far, &mut bld)?
        };
        for port in [near, far] {
            if let Some(&bi) = block_of.get(&port.bracelet) {
                bld.blocks[bi].bands[port.port].region = region.index;
            }
        }
        bld.regions.push(region);
    }

    // Band subdivisions, block-side identifications, interior slots.
    wire_blocks(&p, &block_of, &mut bld)?;

    // Cone tetrahedra for augmented blocks.
    for bi in 0..bld.blocks.len() {
        if bld.blocks[bi].augmented {
            build_augmented_cone_inner(&mut bld, bi);
        }
    }

    // Collect edge classes (deterministic order by smallest member).
    let mut by_root: HashMap<ArcKey, Vec<ArcKey>> = HashMap::new();
    for k in bld.arcs.keys() {
        let r = bld.arcs.find(&k);
        by_root.entry(r).or_default().push(k);
    }
    let slot_list = std::mem::take(&mut bld.arc_slots);
    let mut slots_by_root: HashMap<ArcKey, Vec<Slot>> = HashMap::new();
    for (arc, slot) in slot_list {
        let r = bld.arcs.find(&arc);
        slots_by_root.entry(r).or_default().push(slot);
    }
    let mut groups: BTreeMap<ArcKey, (Vec<ArcKey>, Vec<Slot>)> = BTreeMap::new();
    for (root, mut members) in by_root {
        members.sort();
        let slots = slots_by_root.remove(&root).unwrap_or_default();
        groups.insert(members[0].clone(), (members, slots));
    }
    let mut edge_classes: Vec<EdgeClass> = Vec::new();
    for (_, (members, slots)) in groups {
        edge_classes.push(EdgeClass {
            id: edge_classes.len(),
            slots,
            summary: format!("{:?}", members),
        });
    }
    for mut rc in std::mem::take(&mut bld.radial_classes) {
        rc.id = edge_classes.len();
        edge_classes.push(rc);
    }

    let audit = run_audits(&bld, &edge_classes);

    let mut cusp_roots: std::collections::HashSet<PunctureKey> = Default::default();
    for k in bld.punctures.keys() {
        let r = bld.punctures.find(&k);
        cusp_roots.insert(r);
    }

    let decomp = BlockDecomposition {
        presentation: p,
        mirrored,
        blocks: bld.blocks,
        regions: bld.regions,
        tets: bld.tets,
        edge_classes,
        cusps: cusp_roots.len(),
        audit,
    };
    if !decomp.audit.ok() {
        return Err(DecomposeError::Audit(decomp.audit.messages.join("; ")));
    }
    Ok(decomp)
}

/// Per-layer structural data from a path; `lo..=hi` is the layer range.
fn layer_infos(
    path: &FareyPath,
    lo: usize,
    hi: usize,
    region: usize,
    bld: &mut Builder,
) -> Vec<LayerInfo> {
    let mut out = Vec::new();
    if lo > hi || hi == 0 {
        return out;
    }
    for i in lo..=hi {
        let e = path.edges[i];
        let q_prev = path.opposite_vertices[i - 1];
        let pivot_prev = if e.0 == q_prev { e.1 } else { e.0 };
        let bottom = path.triangles[i - 1]
            .opposite(e)
            .expect("entry edge on previous triangle");
        let top = path.opposite_vertices[i];
        let letters = (
            path.letters[i - 1].expect("letter below layer"),
            path.letters[i].expect("letter above layer"),
        );
        let t0 = bld.new_tet(TetKind::Layer {
            region,
            layer: i,
            copy: 0,
        });
        let t1 = bld.new_tet(TetKind::Layer {
            region,
            layer: i,
            copy: 1,
        });
        out.push(LayerInfo {
            index: i,
            tets: [t0, t1],
            letters,
            hinge: letters.0 != letters.1,
            new_slope: q_prev,
            pivot_slope: pivot_prev,
            bottom_slope: bottom,
            top_slope: top,
        });
    }
    out
}

/// Emit the six edge slots and four face incidences per layer tetrahedron.
fn emit_layer_slots(region: usize, layers: &[LayerInfo], bld: &mut Builder) {
    for li in layers {
        for (copy, tet) in li.tets.iter().enumerate() {
            let c = copy as u8;
            let bot = ArcKey::Region {
                region,
                slope: li.bottom_slope,
                copy: c,
            };
            let top = ArcKey::Region {
                region,
                slope: li.top_slope,
                copy: 1 - c,
            };
            for arc in [bot, top] {
                bld.arcs.insert(&arc);
                bld.arc_slots.push((
                    arc,
                    Slot::Layer {
                        tet: *tet,
                        role: LayerRole::Diagonal,
                    },
                ));
            }
            for (slope, role) in [
                (li.new_slope, LayerRole::NewVertex),
                (li.pivot_slope, LayerRole::OldPivot),
            ] {
                for gamma in 0..2u8 {
                    let arc = ArcKey::Region {
                        region,
                        slope,
                        copy: gamma,
                    };
                    bld.arcs.insert(&arc);
                    bld.arc_slots.push((arc, Slot::Layer { tet: *tet, role }));
                }
            }
            // Faces: the bottom two miss the complement of this copy's
            // bottom-arc endpoints; the top two miss exactly the endpoints.
            let (e0, e1) = arc_endpoints(&li.bottom_slope, c);
            for l in ALL_LABELS {
                let is_endpoint = l == e0 || l == e1;
                let fk = FaceKey::Surface {
                    region,
                    surface: if is_endpoint { li.index } else { li.index - 1 },
                    missing: l,
                };
                bld.faces.insert(&fk);
                bld.face_sides.push((
                    fk,
                    format!("tet {tet} {}", if is_endpoint { "top" } else { "bottom" }),
                ));
            }
        }
    }
}

/// Merge the fold's four arcs into one class and pair punctures and faces
/// across the drop direction.
fn apply_fold(
    region: usize,
    surface: usize,
    drop: Slope,
    merged: (Slope, Slope),
    bld: &mut Builder,
) -> FoldRecord {
    let mk = |slope: Slope, copy: u8| ArcKey::Region {
        region,
        slope,
        copy,
    };
    let base = mk(merged.0, 0);
    bld.arcs.insert(&base);
    for (slope, copy) in [(merged.0, 1u8), (merged.1, 0), (merged.1, 1)] {
        let k = mk(slope, copy);
        bld.arcs.insert(&k);
        bld.arcs.union(&base, &k);
    }
    let v = parity(&drop);
    for l in ALL_LABELS {
        let a = PunctureKey::Region { region, label: l };
        let b = PunctureKey::Region {
            region,
            label: ladd(l, v),
        };
        bld.punctures.insert(&a);
        bld.punctures.insert(&b);
        bld.punctures.union(&a, &b);
    }
    let mut seen: Vec<Label> = Vec::new();
    for l in ALL_LABELS {
        if seen.contains(&l) {
            continue;
        }
        let partner = ladd(l, v);
        seen.push(l);
        seen.push(partner);
        let fa = FaceKey::Surface {
            region,
            surface,
            missing: l,
        };
        let fb = FaceKey::Surface {
            region,
            surface,
            missing: partner,
        };
        bld.faces.insert(&fa);
        bld.faces.insert(&fb);
        bld.faces.union(&fa, &fb);
    }
    FoldRecord {
        surface,
        drop_slope: drop,
        merged,
    }
}

/// Identify a region's boundary pleated surface with a block band:
/// arcs, faces, and punctures, with labels mapped by `to_port`.
fn wire_region_to_band(
    region: usize,
    surface: usize,
    region_slopes: (Slope, Slope, Slope), // (crossing, ascending, descending)
    block: usize,
    band: usize,
    to_port: &GluingMap,
    bld: &mut Builder,
) {
    let (s_cross, s_a, s_b) = region_slopes;
    let degree = bld.blocks[block].degree;
    for copy in 0..2u8 {
        let (e0, _) = arc_endpoints(&s_cross, copy);
        let img0 = to_port.label_action(e0);
        let cross_key = ArcKey::Crossing {
            block,
            line: (band + img0.0 as usize) % degree,
        };
        let rk = ArcKey::Region {
            region,
            slope: s_cross,
            copy,
        };
        bld.arcs.insert(&rk);
        bld.arcs.insert(&cross_key);
        bld.arcs.union(&rk, &cross_key);
        for (slope, slot) in [(s_a, AbSlot::A), (s_b, AbSlot::B)] {
            let (f0, f1) = arc_endpoints(&slope, copy);
            let far_copy = copy_of_endpoints((to_port.label_action(f0), to_port.label_action(f1)));
            let bk = ArcKey::Band {
                block,
                band,
                slot,
                copy: far_copy,
            };
            let rk = ArcKey::Region {
                region,
                slope,
                copy,
            };
            bld.arcs.insert(&rk);
            bld.arcs.insert(&bk);
            bld.arcs.union(&rk, &bk);
        }
    }
    for l in ALL_LABELS {
        let fk = FaceKey::Surface {
            region,
            surface,
            missing: l,
        };
        let bk = FaceKey::Band {
            block,
            band,
            missing: to_port.label_action(l),
        };
        bld.faces.insert(&fk);
        bld.faces.insert(&bk);
        bld.faces.union(&fk, &bk);
        let img = to_port.label_action(l);
        let pk = bld.block_puncture(block, band + img.0 as usize, img.1 as i64);
        let rk = PunctureKey::Region { region, label: l };
        bld.punctures.insert(&rk);
        bld.punctures.insert(&pk);
        bld.punctures.union(&rk, &pk);
    }
}

fn build_tangle_region_inner(
    p: &LinkPresentation,
    index: usize,
    edge_index: usize,
    near: PortRef,
    far: PortRef,
    bld: &mut Builder,
) -> Result<Region, DecomposeError> {
    let u = p.far_slope_at(near)?;
    let w = crate::slope::wedge(&Slope::infinity(), &u);
    if w < 2 {
        return Err(DecomposeError::SlopeTooClose);
    }
    let path = farey::farey_path_with(&Slope::infinity(), &u, Some(Slope::zero()), false)?;
    let m = path.m();
    let layers = layer_infos(&path, 1, m.saturating_sub(1), index, bld);
    emit_layer_slots(index, &layers, bld);
    let drop = path.triangles[m - 1]
        .opposite(
            path.triangles[m - 1]
                .shared_edge(&path.triangles[m])
                .expect("consecutive triangles"),
        )
        .expect("drop vertex");
    let e_m = path.edges[m];
    // For m = 1 the fold acts on the block's own sphere; that band-level
    // bookkeeping happens in wire_blocks.
    let fold = if m >= 2 {
        Some(apply_fold(index, m - 1, drop, e_m, bld))
    } else {
        Some(FoldRecord {
            surface: 0,
            drop_slope: drop,
            merged: e_m,
        })
    };
    Ok(Region {
        index,
        edge_index,
        kind: RegionKind::TangleFold,
        near,
        far,
        path: Some(path),
        layers,
        fold_near: None,
        fold_far: fold,
    })
}

fn build_two_bridge_region(
    p: &LinkPresentation,
    index: usize,
    edge_index: usize,
    near: PortRef,
    far: PortRef,
    bld: &mut Builder,
) -> Result<Region, DecomposeError> {
    let s1 = p.bracelets[&near.bracelet].preferred_slope();
    let s2 = p.far_slope_at(near)?;
    let path = farey::farey_path_with(&s1, &s2, None, false)?;
    let m = path.m();
    if m < 3 {
        return Err(DecomposeError::NotCandidate(format!(
            "two-bridge slopes share a common Farey neighbor (m = {m})"
        )));
    }
    let layers = layer_infos(&path, 2, m - 1, index, bld);
    emit_layer_slots(index, &layers, bld);
    let drop_far = path.triangles[m - 1]
        .opposite(
            path.triangles[m - 1]
                .shared_edge(&path.triangles[m])
                .expect("shared edge"),
        )
        .expect("drop vertex");
    let fold_far = apply_fold(index, m - 1, drop_far, path.edges[m], bld);
    let drop_near = path.triangles[1]
        .opposite(
            path.triangles[1]
                .shared_edge(&path.triangles[0])
                .expect("shared edge"),
        )
        .expect("near drop vertex");
    let fold_near = apply_fold(index, 1, drop_near, path.edges[1], bld);
    Ok(Region {
        index,
        edge_index,
        kind: RegionKind::TwoBridge,
        near,
        far,
        path: Some(path),
        layers,
        fold_near: Some(fold_near),
        fold_far: Some(fold_far),
    })
}

fn build_block_junction(
    p: &LinkPresentation,
    index: usize,
    edge_index: usize,
    near: PortRef,
    far: PortRef,
    bld: &mut Builder,
) -> Result<Region, DecomposeError> {
    let u = p.far_slope_at(near)?;
    if u == Slope::zero() {
        return Ok(Region {
            index,
            edge_index,
            kind: RegionKind::Direct,
            near,
            far,
            path: None,
            layers: Vec::new(),
            fold_near: None,
            fold_far: None,
        });
    }
    let edge = p.edge_at(near).expect("edge exists");
    let g = edge.map_from(near)?; // near coords → far coords
    let b_far = g.inverse()?.apply(&Slope::zero())?;
    let path = farey::farey_path_with(&Slope::infinity(), &u, Some(Slope::zero()), true)?;
    let path = farey::with_exit_convention(&path, b_far)?;
    let m = path.m();
    let layers = layer_infos(&path, 1, m, index, bld);
    emit_layer_slots(index, &layers, bld);
    Ok(Region {
        index,
        edge_index,
        kind: RegionKind::Product,
        near,
        far,
        path: Some(path),
        layers,
        fold_near: None,
        fold_far: None,
    })
}

/// Subdivide bands, connect block boundaries to their regions, and emit the
/// solid-torus interior slots.
fn wire_blocks(
    p: &LinkPresentation,
    block_of: &BTreeMap<BraceletId, usize>,
    bld: &mut Builder,
) -> Result<(), DecomposeError> {
    let regions = bld.regions.clone();

    // Square bands and their diagonal slopes.
    for region in &regions {
        if region.kind != RegionKind::Direct {
            continue;
        }
        let edge = p.edge_at(region.near).expect("edge");
        let g = edge.map_from(region.near)?;
        let nb = block_of[&region.near.bracelet];
        let fb = block_of[&region.far.bracelet];
        let far_diag = g.apply(&Slope::one())?;
        debug_assert_eq!(far_diag.denom(), 1);
        debug_assert_eq!(far_diag.numer().abs(), 1);
        bld.blocks[nb].bands[region.near.port].square = true;
        bld.blocks[nb].bands[region.near.port].a_slot_slope = Slope::one();
        bld.blocks[fb].bands[region.far.port].square = true;
        bld.blocks[fb].bands[region.far.port].a_slot_slope = far_diag;
    }

    for region in &regions {
        match region.kind {
            RegionKind::Direct => {
                let edge = p.edge_at(region.near).expect("edge");
                let g = edge.map_from(region.near)?;
                let nb = block_of[&region.near.bracelet];
                let fb = block_of[&region.far.bracelet];
                let (npt, fpt) = (region.near.port, region.far.port);
                let nd = bld.blocks[nb].degree;
                let fd = bld.blocks[fb].degree;
                for copy in 0..2u8 {
                    // Near crossing ↔ far descending.
                    let (e0, e1) = arc_endpoints(&Slope::infinity(), copy);
                    let far_copy =
                        copy_of_endpoints((g.label_action(e0), g.label_action(e1)));
                    let near_cross = ArcKey::Crossing {
                        block: nb,
                        line: (npt + e0.0 as usize) % nd,
                    };
                    let far_desc = ArcKey::Band {
                        block: fb,
                        band: fpt,
                        slot: AbSlot::B,
                        copy: far_copy,
                    };
                    bld.arcs.insert(&near_cross);
                    bld.arcs.insert(&far_desc);
                    bld.arcs.union(&near_cross, &far_desc);

                    // Near descending ↔ far crossing.
                    let (z0, _) = arc_endpoints(&Slope::zero(), copy);
                    let far_line = (fpt + g.label_action(z0).0 as usize) % fd;
                    let near_desc = ArcKey::Band {
                        block: nb,
                        band: npt,
                        slot: AbSlot::B,
                        copy,
                    };
                    let far_cross = ArcKey::Crossing {
                        block: fb,
                        line: far_line,
                    };
                    bld.arcs.insert(&near_desc);
                    bld.arcs.insert(&far_cross);
                    bld.arcs.union(&near_desc, &far_cross);

                    // Diagonals together.
                    let (d0, d1) = arc_endpoints(&Slope::one(), copy);
                    let far_dcopy =
                        copy_of_endpoints((g.label_action(d0), g.label_action(d1)));
                    let near_diag = ArcKey::Band {
                        block: nb,
                        band: npt,
                        slot: AbSlot::A,
                        copy,
                    };
                    let far_diag = ArcKey::Band {
                        block: fb,
                        band: fpt,
                        slot: AbSlot::A,
                        copy: far_dcopy,
                    };
                    bld.arcs.insert(&near_diag);
                    bld.arcs.insert(&far_diag);
                    bld.arcs.union(&near_diag, &far_diag);
                }
                for l in ALL_LABELS {
                    let img = g.label_action(l);
                    let fa = FaceKey::Band {
                        block: nb,
                        band: npt,
                        missing: l,
                    };
                    let fbk = FaceKey::Band {
                        block: fb,
                        band: fpt,
                        missing: img,
                    };
                    bld.faces.insert(&fa);
                    bld.faces.insert(&fbk);
                    bld.faces.union(&fa, &fbk);
                    let pa = bld.block_puncture(nb, npt + l.0 as usize, l.1 as i64);
                    let pb = bld.block_puncture(fb, fpt + img.0 as usize, img.1 as i64);
                    bld.punctures.insert(&pa);
                    bld.punctures.insert(&pb);
                    bld.punctures.union(&pa, &pb);
                }
            }
            RegionKind::Product => {
                let path = region.path.as_ref().unwrap();
                let nb = block_of[&region.near.bracelet];
                wire_region_to_band(
                    region.index,
                    0,
                    (Slope::infinity(), path.entry_a(), path.entry_b()),
                    nb,
                    region.near.port,
                    &GluingMap::identity(),
                    bld,
                );
                let edge = p.edge_at(region.near).expect("edge");
                let g = edge.map_from(region.near)?;
                let fb = block_of[&region.far.bracelet];
                let a_far = path.exit_a().expect("product path has exit data");
                let b_far = path.exit_b().expect("product path has exit data");
                wire_region_to_band(
                    region.index,
                    path.m(),
                    (path.target, a_far, b_far),
                    fb,
                    region.far.port,
                    &g,
                    bld,
                );
            }
            RegionKind::TangleFold => {
                let path = region.path.as_ref().unwrap();
                let nb = block_of[&region.near.bracelet];
                if path.m() == 1 {
                    // The block's own sphere folds onto itself.
                    let base = ArcKey::Band {
                        block: nb,
                        band: region.near.port,
                        slot: AbSlot::A,
                        copy: 0,
                    };
                    bld.arcs.insert(&base);
                    for (slot, copy) in [(AbSlot::A, 1u8), (AbSlot::B, 0), (AbSlot::B, 1)] {
                        let k = ArcKey::Band {
                            block: nb,
                            band: region.near.port,
                            slot,
                            copy,
                        };
                        bld.arcs.insert(&k);
                        bld.arcs.union(&base, &k);
                    }
                    let v = parity(&Slope::infinity());
                    for l in ALL_LABELS {
                        let a =
                            bld.block_puncture(nb, region.near.port + l.0 as usize, l.1 as i64);
                        let lm = ladd(l, v);
                        let b =
                            bld.block_puncture(nb, region.near.port + lm.0 as usize, lm.1 as i64);
                        bld.punctures.insert(&a);
                        bld.punctures.insert(&b);
                        bld.punctures.union(&a, &b);
                    }
                    let mut seen: Vec<Label> = Vec::new();
                    for l in ALL_LABELS {
                        if seen.contains(&l) {
                            continue;
                        }
                        let partner = ladd(l, v);
                        seen.push(l);
                        seen.push(partner);
                        let fa = FaceKey::Band {
                            block: nb,
                            band: region.near.port,
                            missing: l,
                        };
                        let fbk = FaceKey::Band {
                            block: nb,
                            band: region.near.port,
                            missing: partner,
                        };
                        bld.faces.insert(&fa);
                        bld.faces.insert(&fbk);
                        // The two block-interior sides of the glued pair
                        // are this class's two incidences.
                        bld.faces.union(&fa, &fbk);
                    }
                } else {
                    wire_region_to_band(
                        region.index,
                        0,
                        (Slope::infinity(), path.entry_a(), path.entry_b()),
                        nb,
                        region.near.port,
                        &GluingMap::identity(),
                        bld,
                    );
                }
            }
            RegionKind::TwoBridge => {}
        }
    }

    // Solid-torus interior slots (cone slots replace these for augmented
    // blocks) and block-side face incidences.
    for b in bld.blocks.clone() {
        if !b.augmented {
            for line in 0..b.degree {
                let k = ArcKey::Crossing {
                    block: b.index,
                    line,
                };
                bld.arcs.insert(&k);
                bld.arc_slots.push((
                    k,
                    Slot::CrossingInterior {
                        block: b.index,
                        line,
                    },
                ));
            }
        }
        for band in 0..b.degree {
            if !b.augmented {
                for slot in [AbSlot::A, AbSlot::B] {
                    for copy in 0..2u8 {
                        let k = ArcKey::Band {
                            block: b.index,
                            band,
                            slot,
                            copy,
                        };
                        bld.arcs.insert(&k);
                        bld.arc_slots.push((
                            k,
                            Slot::BandInterior {
                                block: b.index,
                                band,
                                slot,
                            },
                        ));
                    }
                }
                for l in ALL_LABELS {
                    let fk = FaceKey::Band {
                        block: b.index,
                        band,
                        missing: l,
                    };
                    bld.faces.insert(&fk);
                    bld.face_sides
                        .push((fk, format!("solid torus {} band {band}", b.index)));
                }
            }
        }
        for line in 0..b.degree {
            for parity_y in 0..2 {
                let pk = bld.block_puncture(b.index, line, parity_y);
                bld.punctures.insert(&pk);
            }
        }
    }
    Ok(())
}

/// Cone an augmented block's bands to its drilled core: four tetrahedra per
/// band carrying angles at the band's edges and at the radial edges.
fn build_augmented_cone_inner(bld: &mut Builder, block: usize) {
    let b = bld.blocks[block].clone();
    let apex = PunctureKey::Apex { block };
    bld.punctures.insert(&apex);
    let mut radial_slots: BTreeMap<(usize, u8), Vec<Slot>> = BTreeMap::new();
    let mut cone_tets = Vec::new();
    for band in 0..b.degree {
        for (face_idx, missing) in ALL_LABELS.iter().enumerate() {
            let tet = bld.new_tet(TetKind::Cone {
                block,
                band,
                face: face_idx as u8,
            });
            cone_tets.push(tet);
            let fk = FaceKey::Band {
                block,
                band,
                missing: *missing,
            };
            bld.faces.insert(&fk);
            bld.face_sides.push((fk, format!("cone tet {tet}")));
            let verts: Vec<Label> = ALL_LABELS
                .iter()
                .copied()
                .filter(|l| l != missing)
                .collect();
            for (slope_sym, role, arc_slot) in [
                (
                    b.bands[band].a_slot_slope,
                    ConeRole::Ascending,
                    Some(AbSlot::A),
                ),
                (Slope::zero(), ConeRole::Descending, Some(AbSlot::B)),
                (Slope::infinity(), ConeRole::Crossing, None),
            ] {
                let copy = (0..2u8)
                    .find(|c| {
                        let (x, y) = arc_endpoints(&slope_sym, *c);
                        x != *missing && y != *missing
                    })
                    .expect("one arc avoids the missing label");
                let key = match arc_slot {
                    Some(slot) => ArcKey::Band {
                        block,
                        band,
                        slot,
                        copy,
                    },
                    None => {
                        let (x, _) = arc_endpoints(&Slope::infinity(), copy);
                        ArcKey::Crossing {
                            block,
                            line: (band + x.0 as usize) % b.degree,
                        }
                    }
                };
                bld.arcs.insert(&key);
                bld.arc_slots.push((key, Slot::Cone { tet, role }));
                // Radial edge at the face vertex off this base edge, with
                // the same dihedral angle (opposite edges of the cone tet).
                let (x, y) = arc_endpoints(&slope_sym, copy);
                let v = verts
                    .iter()
                    .find(|l| **l != x && **l != y)
                    .expect("vertex off the edge");
                let pk = bld.block_puncture(block, band + v.0 as usize, v.1 as i64);
                let PunctureKey::Block { line, parity, .. } = pk else {
                    unreachable!()
                };
                radial_slots
                    .entry((line, parity))
                    .or_default()
                    .push(Slot::Cone { tet, role });
                bld.punctures.insert(&PunctureKey::Block {
                    block,
                    line,
                    parity,
                });
            }
        }
    }
    bld.blocks[block].cone_tets = cone_tets;
    for ((line, par), slots) in radial_slots {
        let id = bld.radial_classes.len();
        bld.radial_classes.push(EdgeClass {
            id,
            slots,
            summary: format!("radial edge at block {block} line {line} parity {par}"),
        });
    }
}

fn run_audits(bld: &Builder, edge_classes: &[EdgeClass]) -> AuditReport {
    let mut messages = Vec::new();

    // Every tetrahedron contributes exactly six edge slots.
    let mut tet_slot_count: BTreeMap<TetId, usize> = BTreeMap::new();
    for ec in edge_classes {
        for s in &ec.slots {
            match s {
                Slot::Layer { tet, .. } | Slot::Cone { tet, .. } => {
                    *tet_slot_count.entry(*tet).or_insert(0) += 1;
                }
                _ => {}
            }
        }
    }
    let mut tet_slot_closure_ok = true;
    for t in &bld.tets {
        let n = tet_slot_count.get(&t.id).copied().unwrap_or(0);
        if n != 6 {
            tet_slot_closure_ok = false;
            messages.push(format!(
                "tetrahedron {} has {} edge slots (want 6)",
                t.id, n
            ));
        }
    }

    // Every face class carries exactly two incidences.
    let mut face_uf = UnionFind {
        parent: bld.faces.parent.clone(),
    };
    let mut by_root: HashMap<FaceKey, usize> = HashMap::new();
    for (fk, _) in &bld.face_sides {
        let r = face_uf.find(fk);
        *by_root.entry(r).or_insert(0) += 1;
    }
    let mut all_roots: std::collections::HashSet<FaceKey> = Default::default();
    for k in face_uf.keys() {
        let r = face_uf.find(&k);
        all_roots.insert(r);
    }
    let mut face_pairing_ok = true;
    for root in &all_roots {
        let n = by_root.get(root).copied().unwrap_or(0);
        if n != 2 {
            face_pairing_ok = false;
            messages.push(format!(
                "face class {:?} has {} incidences (want 2)",
                root, n
            ));
        }
    }
    let face_classes = all_roots.len();

    // Euler count through the cone model of each solid torus: 2d radial
    // edges and 6d cone faces per block, 4d cone cells, plus a core vertex
    // and core loop for unaugmented blocks. The pinched complex satisfies
    // V_real − E + F − C = 0.
    let mut v_real: i64 = 0;
    let mut extra_e: i64 = 0;
    let mut extra_f: i64 = 0;
    let mut extra_c: i64 = 0;
    for b in &bld.blocks {
        let d = b.degree as i64;
        extra_f += 6 * d;
        if !b.augmented {
            v_real += 1;
            extra_e += 2 * d + 1;
            extra_c += 4 * d;
        }
    }
    let e_total = edge_classes.len() as i64 + extra_e;
    let f_total = face_classes as i64 + extra_f;
    let c_total = bld.tets.len() as i64 + extra_c;
    let euler_value = v_real - e_total + f_total - c_total;
    let euler_ok = euler_value == 0;
    if !euler_ok {
        messages.push(format!(
            "Euler check failed: V {v_real} − E {e_total} + F {f_total} − C {c_total} = \
             {euler_value} (want 0)"
        ));
    }

    AuditReport {
        face_classes,
        face_pairing_ok,
        tet_slot_closure_ok,
        euler_ok,
        euler_value,
        messages,
    }
}

// ---------------------------------------------------------------------
// Standalone count helpers for the construction pieces.

/// Tetrahedra in a product region over the given path: two per layer.
pub fn product_region_tet_count(path: &FareyPath) -> usize {
    2 * path.m()
}

/// Tetrahedra realizing a trivial tangle over the given path.
pub fn tangle_region_tet_count(path: &FareyPath) -> Result<usize, DecomposeError> {
    if crate::slope::wedge(&path.source, &path.target) < 2 {
        return Err(DecomposeError::SlopeTooClose);
    }
    Ok(2 * (path.m() - 1))
}

/// Cone tetrahedra of an augmented block of the given degree.
pub fn augmented_cone_tet_count(degree: usize) -> usize {
    4 * degree
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{montesinos_presentation, twobridge_presentation};

    fn sl(n: i64, d: i64) -> Slope {
        Slope::new(n, d).unwrap()
    }

    #[test]
    fn figure_eight_scale_two_bridge() {
        let p = twobridge_presentation(Slope::infinity(), sl(2, 5));
        let d = assemble(&p).unwrap();
        assert_eq!(d.tet_count(), 2);
        assert_eq!(d.edge_classes.len(), 2);
        assert_eq!(d.cusps, 1);
        assert!(d.audit.ok());
    }

    #[test]
    fn pretzel_237_counts() {
        let p = montesinos_presentation(1, &[sl(1, 2), sl(1, 3), sl(1, 7)]);
        let d = assemble(&p).unwrap();
        // Paths of lengths m = 1, 2, 6 contribute 2(m−1) tetrahedra each.
        assert_eq!(d.tet_count(), 2 + 10);
        assert_eq!(d.cusps, 1);
        assert!(d.audit.ok(), "{:?}", d.audit.messages);
    }

    #[test]
    fn direct_gluing_of_two_blocks() {
        let mut p = LinkPresentation::new();
        let x = p.add_bracelet(LinkPresentation::band(3, 0, 0));
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
            GluingMap::swap(),
        );
        for (host, port) in [(x, 1), (x, 2), (y, 1), (y, 2)] {
            let t = p.add_bracelet(LinkPresentation::tangle(sl(2, 5)));
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
        let d = assemble(&p).unwrap();
        let direct = d
            .regions
            .iter()
            .find(|r| r.kind == RegionKind::Direct)
            .expect("a direct junction");
        assert!(direct.layers.is_empty());
        for b in &d.blocks {
            assert!(b.bands[0].square);
        }
        assert!(d.audit.ok(), "{:?}", d.audit.messages);
    }

    #[test]
    fn product_region_layer_count() {
        let mut p = LinkPresentation::new();
        let x = p.add_bracelet(LinkPresentation::band(3, 0, 0));
        let y = p.add_bracelet(LinkPresentation::band(3, 0, 0));
        let m = GluingMap::basis_to_infinity(&sl(2, 5)).unwrap();
        p.glue(
            PortRef {
                bracelet: x,
                port: 0,
            },
            PortRef {
                bracelet: y,
                port: 0,
            },
            m.inverse().unwrap(),
        );
        for (host, port) in [(x, 1), (x, 2), (y, 1), (y, 2)] {
            let t = p.add_bracelet(LinkPresentation::tangle(sl(1, 3)));
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
        let d = assemble(&p).unwrap();
        let product = d
            .regions
            .iter()
            .find(|r| r.kind == RegionKind::Product)
            .expect("product region");
        assert!(product.layers.len() >= 1);
        assert_eq!(
            product.layers.len(),
            product.path.as_ref().unwrap().m(),
            "one layer per crossed Farey edge"
        );
        assert!(d.audit.ok(), "{:?}", d.audit.messages);
    }

    #[test]
    fn augmented_candidate_has_cone_tets() {
        let p = montesinos_presentation(-2, &[sl(1, 2), sl(1, 2), sl(1, 2)]);
        let (_, cls) = classifier::reduce_and_classify(&p).unwrap();
        assert!(matches!(cls[0].verdict, Verdict::Candidate));
        let cand = cls[0].presentation.clone().unwrap();
        let d = assemble(&cand).unwrap();
        let aug = d.blocks.iter().find(|b| b.augmented).expect("aug block");
        assert_eq!(aug.cone_tets.len(), 4);
        assert!(d.audit.ok(), "{:?}", d.audit.messages);
    }

    #[test]
    fn non_candidate_is_rejected() {
        let p = montesinos_presentation(1, &[sl(1, 2), sl(1, 3), sl(1, 6)]);
        let red = crate::reducer::reduce(&p).unwrap();
        assert!(matches!(
            assemble(&red.summands[0]),
            Err(DecomposeError::NotCandidate(_))
        ));
    }

    #[test]
    fn tangle_fold_m1_has_no_tets() {
        let p = montesinos_presentation(1, &[sl(1, 2), sl(1, 3), sl(1, 7)]);
        let d = assemble(&p).unwrap();
        let m1 = d
            .regions
            .iter()
            .find(|r| r.wedge() == 2)
            .expect("wedge-2 region");
        assert!(m1.layers.is_empty());
        assert_eq!(m1.m(), 1);
    }

    #[test]
    fn two_bridge_m2_rejected() {
        let p = twobridge_presentation(Slope::infinity(), sl(1, 2));
        assert!(assemble(&p).is_err());
    }
}
