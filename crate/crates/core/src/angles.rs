//! Exact angle assignments for block decompositions.
//!
//! All angles are rational multiples of π, stored as exact rationals in
//! π-units (so a straight angle is 1 and a full turn is 2). The engine
//! chooses band angles (a_i, b_i) per block from the case analysis of the
//! candidate's shape, builds the transverse w-parameters of each region
//! either in closed form or by an exact linear-feasibility solve, and
//! produces one positive angle triple per tetrahedron.

use crate::classifier;
use crate::decomposer::{
    AbSlot, BlockDecomposition, ConeRole, DecomposeError, LayerRole, RegionKind, Slot, TetId,
    TetKind,
};
use crate::farey::{FareyPath, Letter};
use crate::slope::{wedge, Slope};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AngleError {
    #[error("band angle outside its admissible range")]
    RangeViolation,
    #[error("slopes are too close (wedge below 2) for a tangle region")]
    SlopeTooClose,
    #[error("no positive angle assignment exists for this region")]
    Infeasible,
    #[error("input is one of the excluded exceptional configurations")]
    Exceptional,
    #[error("angle assignment failed: {0}")]
    AssignmentFailed(String),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// An exact angle in units of π.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(pub BigRational);

/// Serialized as exact numerator/denominator strings in units of π.
impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Angle", 2)?;
        st.serialize_field("numer", &self.0.numer().to_string())?;
        st.serialize_field("denom", &self.0.denom().to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            numer: String,
            denom: String,
        }
        let raw = Raw::deserialize(d)?;
        let n: BigInt = raw
            .numer
            .parse()
            .map_err(|_| serde::de::Error::custom("bad numerator"))?;
        let m: BigInt = raw
            .denom
            .parse()
            .map_err(|_| serde::de::Error::custom("bad denominator"))?;
        if m.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Angle(BigRational::new(n, m)))
    }
}

impl Angle {
    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    pub fn pi() -> Self {
        Angle(BigRational::one())
    }

    pub fn two_pi() -> Self {
        Angle(BigRational::from_integer(BigInt::from(2)))
    }

    /// The angle (n/d)·π.
    pub fn pi_frac(n: i64, d: i64) -> Self {
        Angle(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Angle(r)
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn half(&self) -> Angle {
        Angle(&self.0 / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn scale(&self, n: i64) -> Angle {
        Angle(&self.0 * BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·π", self.0)
    }
}

impl std::ops::Add for &Angle {
    type Output = Angle;
    fn add(self, rhs: &Angle) -> Angle {
        Angle(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &Angle {
    type Output = Angle;
    fn sub(self, rhs: &Angle) -> Angle {
        Angle(&self.0 - &rhs.0)
    }
}

pub fn asum(values: impl IntoIterator<Item = Angle>) -> Angle {
    let mut acc = BigRational::zero();
    for v in values {
        acc += v.0;
    }
    Angle(acc)
}

/// Exterior band angles of one block: a_i at the ascending pairs, b_i at
/// the descending pairs, and the derived crossing angles c_{i,i+1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandAngles {
    pub a: Vec<Angle>,
    pub b: Vec<Angle>,
    pub c: Vec<Angle>,
}

/// Derive the crossing angles c_{i,i+1} = π − (a_i + a_{i+1} + b_i +
/// b_{i+1})/2 so the angles around each ideal vertex sum to 2π. Requires
/// 0 ≤ a_i < π, 0 ≤ b_i < π and 0 < a_i + b_i ≤ π for every band.
pub fn band_edge_angles(a: &[Angle], b: &[Angle]) -> Result<BandAngles, AngleError> {
    if a.len() != b.len() || a.is_empty() {
        return Err(AngleError::RangeViolation);
    }
    let d = a.len();
    let pi = Angle::pi();
    for i in 0..d {
        let sum = &a[i] + &b[i];
        if a[i].0.is_negative()
            || b[i].0.is_negative()
            || a[i] >= pi
            || b[i] >= pi
            || !sum.is_positive()
            || sum > pi
        {
            return Err(AngleError::RangeViolation);
        }
    }
    let mut c = Vec::with_capacity(d);
    for i in 0..d {
        let j = (i + 1) % d;
        let total = asum([a[i].clone(), a[j].clone(), b[i].clone(), b[j].clone()]);
        c.push(&pi - &total.half());
    }
    Ok(BandAngles {
        a: a.to_vec(),
        b: b.to_vec(),
        c,
    })
}

/// Girth condition (d − 2)π > Σ max(a_i, b_i): a sufficient bound for all
/// compression curves of a degree-d solid torus.
pub fn girth_check(a: &[Angle], b: &[Angle], d: usize) -> bool {
    let lhs = Angle::pi_frac(d as i64 - 2, 1);
    let sum = asum(
        a.iter()
            .zip(b)
            .map(|(x, y)| if x >= y { x.clone() } else { y.clone() }),
    );
    lhs > sum
}

/// The angles of a layer tetrahedron from the three consecutive transverse
/// parameters (u, w, v) = (w_{i−1}, w_i, w_{i+1}). Role-based: `new_vertex`
/// sits at the side pair of the vertex just created below this layer,
/// `old_pivot` at the other side pair, `diagonal` at the two exchange
/// diagonals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerAngles {
    pub new_vertex: Angle,
    pub old_pivot: Angle,
    pub diagonal: Angle,
    pub positive: bool,
}

impl LayerAngles {
    pub fn by_role(&self, role: LayerRole) -> &Angle {
        match role {
            LayerRole::NewVertex => &self.new_vertex,
            LayerRole::OldPivot => &self.old_pivot,
            LayerRole::Diagonal => &self.diagonal,
        }
    }
}

pub fn layer_roles(u: &Angle, w: &Angle, v: &Angle, hinge: bool) -> Result<LayerAngles, AngleError> {
    if !w.is_positive() || *w >= Angle::pi() {
        return Err(AngleError::RangeViolation);
    }
    let (new_vertex, old_pivot) = if hinge {
        // (u + w − v)/2 and (−u + w + v)/2.
        ((&(u + w) - v).half(), (&(v + w) - u).half())
    } else {
        // (u + v)/2 and (2w − u − v)/2.
        ((u + v).half(), (&(w + w) - &(u + v)).half())
    };
    let diagonal = &Angle::pi() - w;
    let positive =
        new_vertex.is_positive() && old_pivot.is_positive() && diagonal.is_positive();
    Ok(LayerAngles {
        new_vertex,
        old_pivot,
        diagonal,
        positive,
    })
}

/// Table form: (x, y, z) with x at the right end of the crossed Farey edge
/// and y at the left end, by the letters on the two adjacent triangles.
pub fn layer_angles(
    u: &Angle,
    w: &Angle,
    v: &Angle,
    letters: (Letter, Letter),
) -> Result<(Angle, Angle, Angle, bool), AngleError> {
    let hinge = letters.0 != letters.1;
    let la = layer_roles(u, w, v, hinge)?;
    // With letter L below, the pivot lies to the left, so the right end is
    // the new vertex.
    let (x, y) = match letters.0 {
        Letter::L => (la.new_vertex.clone(), la.old_pivot.clone()),
        Letter::R => (la.old_pivot.clone(), la.new_vertex.clone()),
    };
    Ok((x, y, la.diagonal.clone(), la.positive))
}

/// Transverse parameter sequence of one region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WSequence {
    pub kind: RegionKind,
    /// values[j] = w_{start + j}.
    pub start: usize,
    pub values: Vec<Angle>,
}

impl WSequence {
    pub fn get(&self, i: usize) -> &Angle {
        &self.values[i - self.start]
    }

    pub fn end(&self) -> usize {
        self.start + self.values.len() - 1
    }
}

/// Hinge flags per layer index, extracted from a path.
fn hinge_at(path: &FareyPath, i: usize) -> bool {
    path.is_hinge(i).unwrap_or(false)
}

/// Check the range/concavity/hinge conditions for all layers `lo..=hi`.
pub fn w_conditions_hold(path: &FareyPath, w: &WSequence, lo: usize, hi: usize) -> bool {
    if lo > hi {
        return true;
    }
    for i in lo..=hi {
        let (u, ww, v) = (w.get(i - 1), w.get(i), w.get(i + 1));
        match layer_roles(u, ww, v, hinge_at(path, i)) {
            Ok(la) if la.positive => {}
            _ => return false,
        }
    }
    true
}

/// Build the transverse parameters of a product region from the boundary
/// value ε on both sides: (ε, 2ε, …, 2ε, ε) with a concave quadratic bump
/// at the interior non-hinge indices.
pub fn construct_w_product(path: &FareyPath, eps: &Angle) -> WSequence {
    let m = path.m();
    let two_eps = eps.scale(2);
    let mut values = Vec::with_capacity(m + 2);
    values.push(eps.clone());
    for i in 1..=m {
        let mut w = two_eps.clone();
        if i > 1 && i < m && !hinge_at(path, i) {
            let profile = (i as i64) * ((m as i64) + 1 - i as i64);
            let denom = 4 * ((m as i64) + 2) * ((m as i64) + 2);
            let bump = Angle(&eps.0 * BigRational::new(BigInt::from(profile), BigInt::from(denom)));
            w = &w + &bump;
        }
        values.push(w);
    }
    values.push(eps.clone());
    WSequence {
        kind: RegionKind::Product,
        start: 0,
        values,
    }
}

/// Whether a trivial tangle at the far end of `path` admits positive layer
/// angles with boundary band angles (a, b): either the slopes are at wedge
/// two and a + b = π exactly, or a·(B∧s') + b·(A∧s') > π > a + b.
pub fn tangle_feasible(a: &Angle, b: &Angle, path: &FareyPath) -> Result<bool, AngleError> {
    let w = wedge(&path.source, &path.target);
    if w < 2 {
        return Err(AngleError::SlopeTooClose);
    }
    let sum = a + b;
    if w == 2 {
        return Ok(sum == Angle::pi());
    }
    let beta_m = wedge(&path.entry_b(), &path.target);
    let alpha_m = wedge(&path.entry_a(), &path.target);
    let v_m = &a.scale(beta_m) + &b.scale(alpha_m);
    Ok(v_m > Angle::pi() && sum < Angle::pi())
}

/// The critical sequence v_i = a·β_i + b·α_i of a tangle path.
pub fn critical_sequence(a: &Angle, b: &Angle, path: &FareyPath) -> Vec<Angle> {
    let (alphas, betas) = path.alpha_beta();
    alphas
        .iter()
        .zip(&betas)
        .map(|(al, be)| &a.scale(*be) + &b.scale(*al))
        .collect()
}

/// Build the tangle-region transverse parameters: w_i = f(v_i) for the
/// quadratic f that is increasing, strictly concave and 1-Lipschitz on
/// [v_1, v_m] with f(v_1) = v_1 and f(v_m) = π.
pub fn construct_w_tangle(
    a: &Angle,
    b: &Angle,
    path: &FareyPath,
) -> Result<WSequence, AngleError> {
    if !tangle_feasible(a, b, path)? {
        return Err(AngleError::Infeasible);
    }
    let m = path.m();
    if m == 1 {
        return Ok(WSequence {
            kind: RegionKind::TangleFold,
            start: 0,
            values: vec![a.clone(), Angle::pi()],
        });
    }
    let v = critical_sequence(a, b, path);
    let pi = Angle::pi();
    let v1 = v[1].clone();
    let vm = v[m].clone();
    let big_p = &pi - &v1; // π − v₁ > 0
    let big_l = &vm - &v1; // v_m − v₁ > 0
    let three_half_p = Angle(&big_p.0 * BigRational::new(BigInt::from(3), BigInt::from(2)));
    let lambda = if three_half_p >= big_l {
        BigRational::one()
    } else {
        &three_half_p.0 / &big_l.0
    };
    // μ = (λL − P)/L²; strict concavity needs μ > 0, which follows from
    // v_m > π.
    let mu = (&lambda * &big_l.0 - &big_p.0) / (&big_l.0 * &big_l.0);
    let f = |t: &Angle| -> Angle {
        let dt = &t.0 - &v1.0;
        Angle(&v1.0 + &lambda * &dt - &mu * &dt * &dt)
    };
    let mut values = Vec::with_capacity(m + 1);
    values.push(a.clone());
    for vi in v.iter().take(m + 1).skip(1) {
        values.push(f(vi));
    }
    // Exactness at the pinned end.
    debug_assert_eq!(values[m], pi);
    let w = WSequence {
        kind: RegionKind::TangleFold,
        start: 0,
        values,
    };
    if w_conditions_hold(path, &w, 1, m - 1) {
        Ok(w)
    } else {
        solve_w_feasibility(&[(0, a.clone()), (1, a + b), (m, Angle::pi())], path, 1, m - 1)
            .ok_or(AngleError::Infeasible)
    }
}

/// Exact feasibility for the chain conditions with pinned boundary values.
///
/// Finds, by Fourier–Motzkin elimination with an added slack variable, a
/// strictly feasible interior point of the system consisting of the range
/// conditions 0 < w_i < π at the free indices and the concavity/hinge
/// conditions at layer indices `lo..=hi`. Returns None when no strictly
/// positive slack exists.
pub fn solve_w_feasibility(
    pins: &[(usize, Angle)],
    path: &FareyPath,
    lo: usize,
    hi: usize,
) -> Option<WSequence> {
    let pinned: BTreeMap<usize, Angle> = pins.iter().cloned().collect();
    let min_index = *pinned.keys().min()?;
    let max_index = *pinned.keys().max()?;
    // Two flat pins at adjacent indices mean a single pleated surface
    // folded from both sides at once: no interior point exists.
    let pi = Angle::pi();
    for (&i, v) in &pinned {
        if let Some(w) = pinned.get(&(i + 1)) {
            if *v >= pi && *w >= pi {
                return None;
            }
        }
    }
    let free: Vec<usize> = (min_index..=max_index)
        .filter(|i| !pinned.contains_key(i))
        .collect();
    // Constraint: Σ coeff_j · w_{free_j} + const + t ≤ 0.
    #[derive(Clone, Debug)]
    struct Row {
        coeffs: Vec<BigRational>,
        constant: BigRational,
        slack: BigRational, // coefficient of t (0 or 1)
    }
    let nfree = free.len();
    let var_of = |i: usize| free.iter().position(|j| *j == i);
    let term = |rows: &mut Vec<Row>, entries: &[(usize, i64)], constant: BigRational| -> bool {
        // entries over w-indices; constant added; row means expr + t ≤ 0.
        let mut coeffs = vec![BigRational::zero(); nfree];
        let mut cst = constant;
        for (wi, c) in entries {
            let c = BigRational::from_integer(BigInt::from(*c));
            match var_of(*wi) {
                Some(j) => coeffs[j] += c,
                None => match pinned.get(wi) {
                    Some(v) => cst += c * &v.0,
                    None => return false,
                },
            }
        }
        rows.push(Row {
            coeffs,
            constant: cst,
            slack: BigRational::one(),
        });
        true
    };
    let mut rows: Vec<Row> = Vec::new();
    // Range conditions at free indices: 0 < w_i < π, i.e. −w_i + t ≤ 0 and
    // w_i − π + t ≤ 0.
    for &i in &free {
        if !term(&mut rows, &[(i, -1)], BigRational::zero()) {
            return None;
        }
        if !term(&mut rows, &[(i, 1)], -BigRational::one()) {
            return None;
        }
    }
    // Layer conditions.
    if lo <= hi {
        for i in lo..=hi {
            let ok = if hinge_at(path, i) {
                term(
                    &mut rows,
                    &[(i + 1, 1), (i - 1, -1), (i, -1)],
                    BigRational::zero(),
                ) && term(
                    &mut rows,
                    &[(i - 1, 1), (i + 1, -1), (i, -1)],
                    BigRational::zero(),
                )
            } else {
                term(
                    &mut rows,
                    &[(i - 1, 1), (i + 1, 1), (i, -2)],
                    BigRational::zero(),
                )
            };
            if !ok {
                return None;
            }
        }
    }

    // Fourier–Motzkin: eliminate free variables in order, keeping bounds
    // for back-substitution.
    let mut bounds_per_var: Vec<(Vec<Row>, Vec<Row>)> = Vec::new(); // (lower, upper)
    let mut current = rows;
    for j in 0..nfree {
        let mut lower: Vec<Row> = Vec::new(); // rows with negative coeff: w_j ≥ …
        let mut upper: Vec<Row> = Vec::new(); // rows with positive coeff: w_j ≤ …
        let mut rest: Vec<Row> = Vec::new();
        for r in current {
            let c = r.coeffs[j].clone();
            if c.is_zero() {
                rest.push(r);
            } else if c.is_positive() {
                upper.push(r);
            } else {
                lower.push(r);
            }
        }
        // Combine each (lower, upper) pair.
        for lo_row in &lower {
            for up_row in &upper {
                let cl = -lo_row.coeffs[j].clone(); // positive
                let cu = up_row.coeffs[j].clone(); // positive
                let mut coeffs = vec![BigRational::zero(); nfree];
                for (idx, co) in coeffs.iter_mut().enumerate() {
                    *co = &lo_row.coeffs[idx] * &cu + &up_row.coeffs[idx] * &cl;
                }
                coeffs[j] = BigRational::zero();
                let constant = &lo_row.constant * &cu + &up_row.constant * &cl;
                let slack = &lo_row.slack * &cu + &up_row.slack * &cl;
                rest.push(Row {
                    coeffs,
                    constant,
                    slack,
                });
            }
        }
        bounds_per_var.push((lower, upper));
        current = rest;
        if current.len() > 4000 {
            return None; // defensive cap; chains stay tiny in practice
        }
    }
    // Remaining rows involve only t: constant + slack·t ≤ 0.
    let mut t_max: Option<BigRational> = None;
    for r in &current {
        if r.slack.is_zero() {
            if r.constant.is_positive() {
                return None;
            }
            continue;
        }
        let bound = -&r.constant / &r.slack;
        t_max = Some(match t_max {
            None => bound,
            Some(cur) => {
                if bound < cur {
                    bound
                } else {
                    cur
                }
            }
        });
    }
    let t_max = t_max.unwrap_or_else(|| BigRational::one());
    if !t_max.is_positive() {
        return None;
    }
    let t = t_max / BigRational::from_integer(BigInt::from(2));

    // Back-substitute in reverse order, picking interval midpoints.
    let mut assignment = vec![BigRational::zero(); nfree];
    for j in (0..nfree).rev() {
        let (lower, upper) = &bounds_per_var[j];
        let eval = |r: &Row| -> BigRational {
            let mut acc = r.constant.clone() + &r.slack * &t;
            for idx in (j + 1)..nfree {
                acc += &r.coeffs[idx] * &assignment[idx];
            }
            acc
        };
        let mut lo_bound: Option<BigRational> = None;
        for r in lower {
            let c = -r.coeffs[j].clone();
            let v = eval(r) / &c;
            lo_bound = Some(match lo_bound {
                None => v,
                Some(cur) => {
                    if v > cur {
                        v
                    } else {
                        cur
                    }
                }
            });
        }
        let mut hi_bound: Option<BigRational> = None;
        for r in upper {
            let c = r.coeffs[j].clone();
            let v = -eval(r) / &c;
            hi_bound = Some(match hi_bound {
                None => v,
                Some(cur) => {
                    if v < cur {
                        v
                    } else {
                        cur
                    }
                }
            });
        }
        assignment[j] = match (lo_bound, hi_bound) {
            (Some(l), Some(h)) => (&l + &h) / BigRational::from_integer(BigInt::from(2)),
            (Some(l), None) => l + BigRational::one(),
            (None, Some(h)) => h - BigRational::one(),
            (None, None) => BigRational::new(BigInt::from(1), BigInt::from(2)),
        };
    }

    let mut values = Vec::new();
    for i in min_index..=max_index {
        match pinned.get(&i) {
            Some(v) => values.push(v.clone()),
            None => values.push(Angle(assignment[var_of(i).unwrap()].clone())),
        }
    }
    let out = WSequence {
        kind: RegionKind::TwoBridge,
        start: min_index,
        values,
    };
    if lo <= hi && !w_conditions_hold(path, &out, lo, hi) {
        return None;
    }
    Some(out)
}

// ---------------------------------------------------------------------
// Whole-decomposition assignment.

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AngleAssignment {
    pub epsilon: Angle,
    /// Per-block band angles, parallel to `decomp.blocks`.
    pub blocks: Vec<BandAngles>,
    /// Angle triples per tetrahedron, indexed by role discriminant:
    /// layer tets use (new_vertex, old_pivot, diagonal); cone tets use
    /// (ascending, descending, crossing).
    pub tets: BTreeMap<TetId, [Angle; 3]>,
    /// Per-region transverse parameters (None for direct gluings).
    pub w: Vec<Option<WSequence>>,
    /// Human-readable construction route per region and block.
    pub routes: Vec<String>,
}

impl AngleAssignment {
    /// The exact value a slot contributes to its edge class.
    pub fn slot_value(&self, slot: &Slot) -> Option<Angle> {
        match slot {
            Slot::Layer { tet, role } => {
                let t = self.tets.get(tet)?;
                Some(match role {
                    LayerRole::NewVertex => t[0].clone(),
                    LayerRole::OldPivot => t[1].clone(),
                    LayerRole::Diagonal => t[2].clone(),
                })
            }
            Slot::Cone { tet, role } => {
                let t = self.tets.get(tet)?;
                Some(match role {
                    ConeRole::Ascending => t[0].clone(),
                    ConeRole::Descending => t[1].clone(),
                    ConeRole::Crossing => t[2].clone(),
                })
            }
            Slot::BandInterior { block, band, slot } => {
                let ba = self.blocks.get(*block)?;
                let ang = match slot {
                    AbSlot::A => ba.a.get(*band)?,
                    AbSlot::B => ba.b.get(*band)?,
                };
                Some(&Angle::pi() - ang)
            }
            Slot::CrossingInterior { block, line } => {
                // The crossing line l lies between bands l−1 and l, so it
                // carries c_{l−1,l}.
                let ba = self.blocks.get(*block)?;
                let d = ba.c.len();
                let c = ba.c.get((*line + d - 1) % d)?;
                Some((&Angle::pi() - c).scale(2))
            }
        }
    }
}

/// Context of one block port for the angle choice.
enum PortContext {
    DirectJunction,
    LayeredJunction,
    Tangle { wedge: i64, slope: Slope },
}

fn port_context(decomp: &BlockDecomposition, block: usize, band: usize) -> PortContext {
    let region = &decomp.regions[decomp.blocks[block].bands[band].region];
    match region.kind {
        RegionKind::Direct => PortContext::DirectJunction,
        RegionKind::Product => PortContext::LayeredJunction,
        RegionKind::TangleFold => PortContext::Tangle {
            wedge: region.wedge(),
            slope: region.path.as_ref().unwrap().target,
        },
        RegionKind::TwoBridge => unreachable!("two-bridge regions have no block ports"),
    }
}

/// Choose the band angles (a_i, b_i) of every block for the given ε,
/// following the case analysis: balance values at tangle ports plus the
/// girth condition where it holds, and the explicit small-parameter tables
/// in the delicate star-shaped cases.
pub fn choose_block_angles(
    decomp: &BlockDecomposition,
    eps: &Angle,
) -> Result<(Vec<BandAngles>, Vec<String>), AngleError> {
    let mut out = Vec::new();
    let mut routes = Vec::new();
    let p = &decomp.presentation;
    let sm_hub = classifier::montesinos_hub(p);
    for block in &decomp.blocks {
        let d = block.degree;
        let is_sm_hub = sm_hub == Some(block.bracelet) && !block.augmented;
        // Balance-style default values.
        let balanced: Vec<(Angle, Angle)> = (0..d)
            .map(|band| match port_context(decomp, block.index, band) {
                PortContext::DirectJunction => (Angle::zero(), eps.clone()),
                PortContext::LayeredJunction => (eps.clone(), eps.clone()),
                PortContext::Tangle { wedge, .. } => {
                    if wedge == 2 {
                        (Angle::pi_frac(1, 2), Angle::pi_frac(1, 2))
                    } else {
                        let v = &Angle::pi_frac(1, wedge) + eps;
                        (v.clone(), v)
                    }
                }
            })
            .collect();
        let a: Vec<Angle> = balanced.iter().map(|x| x.0.clone()).collect();
        let b: Vec<Angle> = balanced.iter().map(|x| x.1.clone()).collect();
        let girth_needed = !block.augmented;
        let girth = !girth_needed || girth_check(&a, &b, d);
        if girth {
            out.push(band_edge_angles(&a, &b)?);
            routes.push(format!(
                "block {}: balance values at tangle ports{}",
                block.bracelet,
                if girth_needed { ", girth condition holds" } else { " (augmented)" }
            ));
            continue;
        }
        if !is_sm_hub {
            return Err(AngleError::AssignmentFailed(format!(
                "girth condition fails on non-star block {}",
                block.bracelet
            )));
        }
        // Delicate star cases, by the intersection numbers of the
        // normalized deck parameter.
        let k = block.deck_twists;
        let n_a = (d as i64 - k).abs();
        let n_b = k.abs();
        let slopes: Vec<Slope> = (0..d)
            .map(|band| match port_context(decomp, block.index, band) {
                PortContext::Tangle { slope, .. } => slope,
                _ => unreachable!("star block has only tangle ports"),
            })
            .collect();
        let (alphas, betas, route) = if n_a.max(n_b) >= 3 {
            // Steep family: (a, b) = (π − αε, βε) with β = α at wedge-2
            // ports and β = 2α/3 otherwise.
            let mut alphas = Vec::new();
            let mut betas = Vec::new();
            for s in &slopes {
                if s.denom() == 2 {
                    alphas.push(Angle::pi_frac(3, 1).0);
                    betas.push(Angle::pi_frac(3, 1).0);
                } else {
                    alphas.push(BigRational::from_integer(BigInt::from(3)));
                    betas.push(BigRational::from_integer(BigInt::from(2)));
                }
            }
            (
                alphas,
                betas,
                format!(
                    "star block {}: steep family (intersection numbers {}, {})",
                    block.bracelet, n_a, n_b
                ),
            )
        } else if d == 3 && (n_a, n_b) == (2, 1) {
            // Explicit tables; a port with numerator ≥ 2 goes last.
            let mut order: Vec<usize> = (0..3).collect();
            order.sort_by_key(|&i| (slopes[i].numer() >= 2, slopes[i].denom() != 2));
            let last = *order
                .iter()
                .find(|&&i| slopes[i].numer() >= 2)
                .ok_or(AngleError::Exceptional)?;
            let first_half = (0..3).find(|&i| slopes[i].denom() == 2);
            let mut alphas = vec![BigRational::zero(); 3];
            let mut betas = vec![BigRational::zero(); 3];
            let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
            match first_half {
                Some(i_half) => {
                    // (β) = ((1+m)ε, ε, με), (α) = ((1+m)ε, (x₂−1−μ)ε, Mε)
                    // with (μ, m, M) = (1/4, 1/3, 3).
                    let i_mid = (0..3).find(|&i| i != i_half && i != last).unwrap();
                    let x2 = slopes[i_mid].denom();
                    betas[i_half] = q(4, 3);
                    alphas[i_half] = q(4, 3);
                    betas[i_mid] = q(1, 1);
                    alphas[i_mid] = q(x2, 1) - q(5, 4);
                    betas[last] = q(1, 4);
                    alphas[last] = q(3, 1);
                }
                None => {
                    // All denominators are 3: (β) = (ε, ε, με),
                    // (α) = ((2−μ)ε, (2−μ)ε, Mε) with (μ, M) = (1/3, 3).
                    let others: Vec<usize> = (0..3).filter(|&i| i != last).collect();
                    for &i in &others {
                        betas[i] = q(1, 1);
                        alphas[i] = q(5, 3);
                    }
                    betas[last] = q(1, 3);
                    alphas[last] = q(3, 1);
                }
            }
            (
                alphas,
                betas,
                format!(
                    "star block {}: degree-3 table, intersection numbers (2, 1)",
                    block.bracelet
                ),
            )
        } else {
            // Degree 4 with (2, 2) always passes the girth with balance
            // values unless every slope is 1/2, which is exceptional; any
            // other combination reaching here is a defect.
            return Err(AngleError::Exceptional);
        };
        let a: Vec<Angle> = alphas
            .iter()
            .map(|al| &Angle::pi() - &Angle(al * &eps.0))
            .collect();
        let b: Vec<Angle> = betas.iter().map(|be| Angle(be * &eps.0)).collect();
        out.push(band_edge_angles(&a, &b)?);
        routes.push(route);
    }
    Ok((out, routes))
}

/// Compute the per-layer tetrahedron angles of a region from its w-values.
fn region_tet_angles(
    decomp: &BlockDecomposition,
    region_index: usize,
    w: &WSequence,
    tets: &mut BTreeMap<TetId, [Angle; 3]>,
) -> Result<(), AngleError> {
    let region = &decomp.regions[region_index];
    let path = region.path.as_ref().expect("layered region has a path");
    for li in &region.layers {
        let i = li.index;
        let la = layer_roles(w.get(i - 1), w.get(i), w.get(i + 1), li.hinge)?;
        if !la.positive {
            return Err(AngleError::Infeasible);
        }
        for t in li.tets {
            tets.insert(
                t,
                [
                    la.new_vertex.clone(),
                    la.old_pivot.clone(),
                    la.diagonal.clone(),
                ],
            );
        }
    }
    let _ = path;
    Ok(())
}

/// Band angles of the two boundary blocks of a region, as seen from the
/// near side: (a, b) for the near band and (a', b') for the far one.
fn junction_band_angles(
    decomp: &BlockDecomposition,
    blocks: &[BandAngles],
    region_index: usize,
) -> ((Angle, Angle), (Angle, Angle)) {
    let region = &decomp.regions[region_index];
    let near_block = decomp
        .blocks
        .iter()
        .position(|b| b.bracelet == region.near.bracelet)
        .expect("near block exists");
    let near = (
        blocks[near_block].a[region.near.port].clone(),
        blocks[near_block].b[region.near.port].clone(),
    );
    let far = decomp
        .blocks
        .iter()
        .position(|b| b.bracelet == region.far.bracelet)
        .map(|fb| {
            (
                blocks[fb].a[region.far.port].clone(),
                blocks[fb].b[region.far.port].clone(),
            )
        })
        .unwrap_or((Angle::zero(), Angle::zero()));
    (near, far)
}

/// Construct a full assignment for the decomposition: block band angles,
/// transverse sequences, layer angles and cone angles, retrying with a
/// halved ε until every strict inequality is satisfied.
pub fn assign(decomp: &BlockDecomposition) -> Result<AngleAssignment, AngleError> {
    assign_from(decomp, &Angle::pi_frac(1, 16))
}

/// Like [`assign`], starting the ε-halving schedule from a chosen value.
pub fn assign_from(
    decomp: &BlockDecomposition,
    start: &Angle,
) -> Result<AngleAssignment, AngleError> {
    if !start.is_positive() || *start >= Angle::pi() {
        return Err(AngleError::RangeViolation);
    }
    let mut eps = start.clone();
    let mut last_err: Option<AngleError> = None;
    for _ in 0..12 {
        match try_assign(decomp, &eps) {
            Ok(a) => return Ok(a),
            Err(e) => {
                last_err = Some(e);
                eps = eps.half();
            }
        }
    }
    Err(AngleError::AssignmentFailed(format!(
        "no ε in the halving schedule worked: {:?}",
        last_err
    )))
}

fn try_assign(decomp: &BlockDecomposition, eps: &Angle) -> Result<AngleAssignment, AngleError> {
    let (blocks, mut routes) = if decomp.blocks.is_empty() {
        (Vec::new(), vec!["two-bridge: no blocks".to_string()])
    } else {
        choose_block_angles(decomp, eps)?
    };
    let mut tets: BTreeMap<TetId, [Angle; 3]> = BTreeMap::new();
    let mut w_out: Vec<Option<WSequence>> = Vec::new();

    for region in &decomp.regions {
        match region.kind {
            RegionKind::Direct => {
                w_out.push(None);
                routes.push(format!("region {}: direct square gluing", region.index));
            }
            RegionKind::Product => {
                let path = region.path.as_ref().unwrap();
                let m = path.m();
                let ((a, b), (ap, bp)) = junction_band_angles(decomp, &blocks, region.index);
                let w = if (&a, &b, &ap, &bp) == (eps, eps, eps, eps) {
                    let w = construct_w_product(path, eps);
                    if w_conditions_hold(path, &w, 1, m) {
                        routes.push(format!(
                            "region {}: product construction at ε = {}",
                            region.index, eps
                        ));
                        w
                    } else {
                        let pins = [
                            (0, a.clone()),
                            (1, &a + &b),
                            (m, &ap + &bp),
                            (m + 1, ap.clone()),
                        ];
                        routes.push(format!(
                            "region {}: product construction fell back to chain solve",
                            region.index
                        ));
                        solve_w_feasibility(&pins, path, 1, m).ok_or(AngleError::Infeasible)?
                    }
                } else {
                    let pins = [
                        (0, a.clone()),
                        (1, &a + &b),
                        (m, &ap + &bp),
                        (m + 1, ap.clone()),
                    ];
                    routes.push(format!("region {}: chain solve", region.index));
                    solve_w_feasibility(&pins, path, 1, m).ok_or(AngleError::Infeasible)?
                };
                region_tet_angles(decomp, region.index, &w, &mut tets)?;
                w_out.push(Some(w));
            }
            RegionKind::TangleFold => {
                let path = region.path.as_ref().unwrap();
                let ((a, b), _) = junction_band_angles(decomp, &blocks, region.index);
                let w = construct_w_tangle(&a, &b, path)?;
                region_tet_angles(decomp, region.index, &w, &mut tets)?;
                routes.push(format!(
                    "region {}: tangle construction (wedge {})",
                    region.index,
                    region.wedge()
                ));
                w_out.push(Some(w));
            }
            RegionKind::TwoBridge => {
                let path = region.path.as_ref().unwrap();
                let m = path.m();
                let pins = [(1, Angle::pi()), (m, Angle::pi())];
                let w = solve_w_feasibility(&pins, path, 2, m - 1)
                    .ok_or(AngleError::Infeasible)?;
                region_tet_angles(decomp, region.index, &w, &mut tets)?;
                routes.push(format!(
                    "region {}: two-bridge chain solve (m = {m})",
                    region.index
                ));
                w_out.push(Some(w));
            }
        }
    }

    // Cone angles for augmented blocks: ((π−a)/2, (π−b)/2, (a+b)/2).
    for block in &decomp.blocks {
        if !block.augmented {
            continue;
        }
        let ba = &blocks[block.index];
        for &tet in &block.cone_tets {
            let TetKind::Cone { band, .. } = decomp.tets[tet].kind else {
                unreachable!()
            };
            let a = &ba.a[band];
            let b = &ba.b[band];
            let asc = (&Angle::pi() - a).half();
            let desc = (&Angle::pi() - b).half();
            let cross = (a + b).half();
            if !asc.is_positive() || !desc.is_positive() || !cross.is_positive() {
                return Err(AngleError::Infeasible);
            }
            tets.insert(tet, [asc, desc, cross]);
        }
    }

    Ok(AngleAssignment {
        epsilon: eps.clone(),
        blocks,
        tets,
        w: w_out,
        routes,
    })
}
