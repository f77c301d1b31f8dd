//! Combinatorics of the Farey complex: triangles, geodesic triangle paths
//! between two slopes, and the turning (R/L) word along a path.
//!
//! A path from `s` to `s'` is the sequence of Farey triangles T₀ … T_m
//! crossed by the geodesic, with s ∈ T₀ and s' ∈ T_m. Two boundary
//! conventions extend the intrinsic data: an artificial entry edge
//! e₀ = (s, B) on T₀, and, when requested, an artificial exit edge
//! e_{m+1} = (s', B') on T_m. They pin down turning letters on the first
//! and last triangles so that index arithmetic is uniform along the path.

use crate::slope::{cyclically_positive, wedge, GluingMap, Slope, SlopeError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FareyError {
    #[error("the two slopes are equal")]
    EqualSlopes,
    #[error("slope arithmetic failed: {0}")]
    Slope(#[from] SlopeError),
    #[error("endpoint convention slope {0} is not a vertex of the end triangle")]
    BadEndpointConvention(Slope),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Letter {
    R,
    L,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::R => Letter::L,
            Letter::L => Letter::R,
        }
    }
}

/// An unordered triple of pairwise Farey-neighbor slopes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FareyTriangle {
    pub vertices: [Slope; 3],
}

impl FareyTriangle {
    pub fn new(vertices: [Slope; 3]) -> Option<Self> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if wedge(&vertices[i], &vertices[j]) != 1 {
                    return None;
                }
            }
        }
        Some(FareyTriangle { vertices })
    }

    pub fn contains(&self, s: &Slope) -> bool {
        self.vertices.contains(s)
    }

    pub fn shared_edge(&self, other: &FareyTriangle) -> Option<(Slope, Slope)> {
        let mut shared: Vec<Slope> = self
            .vertices
            .iter()
            .filter(|v| other.contains(v))
            .copied()
            .collect();
        if shared.len() == 2 {
            shared.sort();
            Some((shared[0], shared[1]))
        } else {
            None
        }
    }

    /// The vertex not lying on the given edge.
    pub fn opposite(&self, edge: (Slope, Slope)) -> Option<Slope> {
        let rest: Vec<Slope> = self
            .vertices
            .iter()
            .filter(|v| **v != edge.0 && **v != edge.1)
            .copied()
            .collect();
        if rest.len() == 1 {
            Some(rest[0])
        } else {
            None
        }
    }

    pub fn same_vertex_set(&self, other: &FareyTriangle) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }
}

/// The triangle path of the Farey geodesic from `source` to `target`,
/// together with the entry/exit edge conventions and turning letters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FareyPath {
    pub source: Slope,
    pub target: Slope,
    /// T₀ … T_m. For Farey neighbors (m = 0) this is a single triangle
    /// containing both endpoints.
    pub triangles: Vec<FareyTriangle>,
    /// e₀ … e_{m+1}; e_i = T_{i−1} ∩ T_i for 1 ≤ i ≤ m, plus the artificial
    /// entry edge e₀ = (source, B) and exit edge e_{m+1} = (target, B')
    /// (the latter only when an exit convention is set).
    pub edges: Vec<(Slope, Slope)>,
    /// q_i: the vertex of T_i not on e_i. q₀ is the "ascending" slope A,
    /// and q_m = target.
    pub opposite_vertices: Vec<Slope>,
    /// pivot_i = e_i ∩ e_{i+1}: the vertex the path turns around while
    /// crossing T_i. Defined for 0 ≤ i ≤ m − 1 always, and for i = m when
    /// an exit convention is set.
    pub pivots: Vec<Option<Slope>>,
    /// Turning letter per triangle; `None` on T_m if no exit convention.
    pub letters: Vec<Option<Letter>>,
    pub has_exit_convention: bool,
}

impl FareyPath {
    /// Number of interior Farey edges, i.e. the index m.
    pub fn m(&self) -> usize {
        self.triangles.len() - 1
    }

    /// The "descending" entry slope B with e₀ = (source, B).
    pub fn entry_b(&self) -> Slope {
        let (a, b) = self.edges[0];
        if a == self.source {
            b
        } else {
            a
        }
    }

    /// The ascending entry slope A = q₀.
    pub fn entry_a(&self) -> Slope {
        self.opposite_vertices[0]
    }

    /// The exit slope B' with e_{m+1} = (target, B'), if set.
    pub fn exit_b(&self) -> Option<Slope> {
        if !self.has_exit_convention {
            return None;
        }
        let (a, b) = *self.edges.last().unwrap();
        Some(if a == self.target { b } else { a })
    }

    /// The exit slope A': the vertex of T_m other than target and B'.
    pub fn exit_a(&self) -> Option<Slope> {
        let b = self.exit_b()?;
        self.triangles
            .last()
            .unwrap()
            .vertices
            .iter()
            .find(|v| **v != self.target && **v != b)
            .copied()
    }

    /// Whether index i (1 ≤ i ≤ m with exit convention, else 1 ≤ i ≤ m−1)
    /// is a hinge: the triangles adjacent to e_i carry different letters.
    pub fn is_hinge(&self, i: usize) -> Option<bool> {
        let a = self.letters.get(i - 1).copied().flatten()?;
        let b = self.letters.get(i).copied().flatten()?;
        Some(a != b)
    }

    /// The R/L word as a string (letters that are defined, in order).
    pub fn word(&self) -> String {
        self.letters
            .iter()
            .flatten()
            .map(|l| match l {
                Letter::R => 'R',
                Letter::L => 'L',
            })
            .collect()
    }

    /// The wedge sequences α_i = A ∧ q_i and β_i = B ∧ q_i.
    pub fn alpha_beta(&self) -> (Vec<i64>, Vec<i64>) {
        let a = self.entry_a();
        let b = self.entry_b();
        let alphas = self
            .opposite_vertices
            .iter()
            .map(|q| wedge(&a, q))
            .collect();
        let betas = self
            .opposite_vertices
            .iter()
            .map(|q| wedge(&b, q))
            .collect();
        (alphas, betas)
    }

    /// Reverse the path (target becomes source). Endpoint conventions are
    /// recomputed canonically.
    pub fn reversed(&self) -> Result<FareyPath, FareyError> {
        farey_path(&self.target, &self.source)
    }
}

fn mediant(a: &Slope, b: &Slope) -> Result<Slope, SlopeError> {
    let n = a
        .numer()
        .checked_add(b.numer())
        .ok_or(SlopeError::Overflow)?;
    let d = a
        .denom()
        .checked_add(b.denom())
        .ok_or(SlopeError::Overflow)?;
    Slope::new(n, d)
}

/// Whether `s` lies strictly between `a` and `b` in the normalized picture
/// where all three are finite and a < s < b or b < s < a numerically.
fn strictly_between(s: &Slope, a: &Slope, b: &Slope) -> bool {
    let sa = s.signed_wedge(a).signum();
    let sb = s.signed_wedge(b).signum();
    sa * sb < 0
}

/// Geodesic triangle path in the Farey complex with the canonical entry /
/// exit conventions (B on the clockwise side of the oriented geodesic).
pub fn farey_path(s: &Slope, t: &Slope) -> Result<FareyPath, FareyError> {
    farey_path_with(s, t, None, true)
}

/// Geodesic triangle path with explicit entry slope B (must be a vertex of
/// T₀ other than `s`) and optionally the exit convention.
pub fn farey_path_with(
    s: &Slope,
    t: &Slope,
    entry_b: Option<Slope>,
    with_exit: bool,
) -> Result<FareyPath, FareyError> {
    if s == t {
        return Err(FareyError::EqualSlopes);
    }
    // Normalize s to infinity; the image of t is y/x with x = wedge(s, t).
    let u = GluingMap::basis_to_infinity(s)?;
    let uinv = u.inverse()?;
    let img = u.apply(t)?;
    let n = img.floor().expect("image of distinct slope is finite");

    let mut triangles_norm: Vec<FareyTriangle> = Vec::new();
    let t0 = FareyTriangle::new([Slope::infinity(), Slope::integer(n), Slope::integer(n + 1)])
        .expect("base triangle");
    triangles_norm.push(t0);
    if img.denom() > 1 {
        // Stern–Brocot descent toward img between the current interval ends.
        let mut lo = Slope::integer(n);
        let mut hi = Slope::integer(n + 1);
        loop {
            let med = mediant(&lo, &hi)?;
            triangles_norm.push(FareyTriangle::new([lo, hi, med]).expect("descent triangle"));
            if med == img {
                break;
            }
            if strictly_between(&img, &lo, &med) {
                hi = med;
            } else {
                lo = med;
            }
        }
    }

    // Map back to the original coordinates.
    let triangles: Vec<FareyTriangle> = triangles_norm
        .iter()
        .map(|tri| {
            let vs: Vec<Slope> = tri
                .vertices
                .iter()
                .map(|v| uinv.apply(v).expect("unimodular image"))
                .collect();
            FareyTriangle::new([vs[0], vs[1], vs[2]]).expect("triangle survives basis change")
        })
        .collect();

    assemble_path(s, t, triangles, entry_b, with_exit)
}

/// Build the edge/pivot/letter data on top of a triangle sequence.
fn assemble_path(
    s: &Slope,
    t: &Slope,
    triangles: Vec<FareyTriangle>,
    entry_b: Option<Slope>,
    with_exit: bool,
) -> Result<FareyPath, FareyError> {
    let m = triangles.len() - 1;

    // Interior edges e_1..e_m.
    let mut interior: Vec<(Slope, Slope)> = Vec::new();
    for i in 1..=m {
        let e = triangles[i - 1]
            .shared_edge(&triangles[i])
            .expect("consecutive path triangles share an edge");
        interior.push(e);
    }

    // Entry convention. Default: B is the vertex of T0 on the clockwise
    // side of the geodesic (negative cyclic triple).
    let b0 = match entry_b {
        Some(b) => {
            if !triangles[0].contains(&b) || b == *s {
                return Err(FareyError::BadEndpointConvention(b));
            }
            b
        }
        None => {
            let candidates: Vec<Slope> = triangles[0]
                .vertices
                .iter()
                .filter(|v| **v != *s)
                .copied()
                .collect();
            *candidates
                .iter()
                .find(|v| !cyclically_positive(s, t, v))
                .unwrap_or(&candidates[0])
        }
    };
    let e0 = sorted_pair(*s, b0);

    // Exit convention: B' is the clockwise-side vertex of T_m (other than t).
    let exit_edge = if with_exit {
        let candidates: Vec<Slope> = triangles[m]
            .vertices
            .iter()
            .filter(|v| **v != *t)
            .copied()
            .collect();
        let bp = *candidates
            .iter()
            .find(|v| !cyclically_positive(s, t, v))
            .unwrap_or(&candidates[0]);
        Some(sorted_pair(*t, bp))
    } else {
        None
    };

    let mut edges = Vec::with_capacity(m + 2);
    edges.push(e0);
    edges.extend(interior.iter().copied());
    if let Some(e) = exit_edge {
        edges.push(e);
    }

    // q_i = vertex of T_i opposite e_i  (e_0 is the artificial entry edge).
    let mut opposite_vertices = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let q = triangles[i]
            .opposite(edges[i])
            .expect("edge lies on its triangle");
        opposite_vertices.push(q);
    }

    // pivot_i = e_i ∩ e_{i+1}, wherever e_{i+1} exists.
    let mut pivots: Vec<Option<Slope>> = Vec::with_capacity(m + 1);
    for i in 0..=m {
        if i + 1 < edges.len() {
            pivots.push(shared_vertex(edges[i], edges[i + 1]));
        } else {
            pivots.push(None);
        }
    }

    // Letters from the side of the pivot relative to the oriented geodesic.
    let letters: Vec<Option<Letter>> = pivots
        .iter()
        .map(|p| {
            p.map(|pivot| {
                if cyclically_positive(s, t, &pivot) {
                    Letter::L
                } else {
                    Letter::R
                }
            })
        })
        .collect();

    Ok(FareyPath {
        source: *s,
        target: *t,
        triangles,
        edges,
        opposite_vertices,
        pivots,
        letters,
        has_exit_convention: with_exit,
    })
}

fn sorted_pair(a: Slope, b: Slope) -> (Slope, Slope) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn shared_vertex(e: (Slope, Slope), f: (Slope, Slope)) -> Option<Slope> {
    if e.0 == f.0 || e.0 == f.1 {
        Some(e.0)
    } else if e.1 == f.0 || e.1 == f.1 {
        Some(e.1)
    } else {
        None
    }
}

/// Replace the artificial entry edge by e₀ = (source, b) and recompute the
/// dependent data (q₀, pivot₀, letter₀). Used when a port marking dictates
/// which neighbor of the source plays the descending role.
pub fn with_entry_convention(path: &FareyPath, b: Slope) -> Result<FareyPath, FareyError> {
    assemble_path(
        &path.source,
        &path.target,
        path.triangles.clone(),
        Some(b),
        path.has_exit_convention,
    )
}

/// Replace the artificial exit edge by e_{m+1} = (target, b'), recomputing
/// pivot_m and letter_m.
pub fn with_exit_convention(path: &FareyPath, bp: Slope) -> Result<FareyPath, FareyError> {
    if !path.triangles.last().unwrap().contains(&bp) || bp == path.target {
        return Err(FareyError::BadEndpointConvention(bp));
    }
    let mut out = assemble_path(
        &path.source,
        &path.target,
        path.triangles.clone(),
        Some(path.entry_b()),
        true,
    )?;
    let m = out.m();
    let exit = sorted_pair(out.target, bp);
    out.edges[m + 1] = exit;
    out.pivots[m] = shared_vertex(out.edges[m], exit);
    out.letters[m] = out.pivots[m].map(|pivot| {
        if cyclically_positive(&out.source, &out.target, &pivot) {
            Letter::L
        } else {
            Letter::R
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(n: i64, d: i64) -> Slope {
        Slope::new(n, d).unwrap()
    }

    #[test]
    fn neighbors_give_degenerate_path() {
        let p = farey_path(&sl(0, 1), &sl(1, 1)).unwrap();
        assert_eq!(p.m(), 0);
        assert!(p.triangles[0].contains(&sl(0, 1)));
        assert!(p.triangles[0].contains(&sl(1, 1)));
    }

    #[test]
    fn path_to_one_half() {
        let p = farey_path(&Slope::infinity(), &sl(1, 2)).unwrap();
        assert_eq!(p.m(), 1);
        assert!(p.triangles[0].same_vertex_set(
            &FareyTriangle::new([Slope::infinity(), sl(0, 1), sl(1, 1)]).unwrap()
        ));
        assert!(p.triangles[1]
            .same_vertex_set(&FareyTriangle::new([sl(0, 1), sl(1, 1), sl(1, 2)]).unwrap()));
    }

    #[test]
    fn path_to_two_fifths() {
        let p = farey_path(&Slope::infinity(), &sl(2, 5)).unwrap();
        assert_eq!(p.m(), 3);
        let expect: Vec<[Slope; 3]> = vec![
            [Slope::infinity(), sl(0, 1), sl(1, 1)],
            [sl(0, 1), sl(1, 1), sl(1, 2)],
            [sl(0, 1), sl(1, 2), sl(1, 3)],
            [sl(1, 3), sl(1, 2), sl(2, 5)],
        ];
        for (tri, vs) in p.triangles.iter().zip(expect) {
            assert!(tri.same_vertex_set(&FareyTriangle::new(vs).unwrap()));
        }
        // Entry convention: B = 0 (clockwise side), so A = q0 = 1.
        assert_eq!(p.entry_b(), sl(0, 1));
        assert_eq!(p.entry_a(), sl(1, 1));
        // q_m is the target.
        assert_eq!(*p.opposite_vertices.last().unwrap(), sl(2, 5));
    }

    #[test]
    fn hinge_structure_matches_wedge_recurrences() {
        // Along any path the sequences α_i = A ∧ q_i, β_i = B ∧ q_i satisfy
        // the critical recurrences: doubled at non-hinges, Fibonacci-style
        // at hinges.
        for (n, d) in [(2, 5), (3, 7), (5, 8), (7, 16), (5, 12), (9, 23)] {
            let p = farey_path(&Slope::infinity(), &sl(n, d)).unwrap();
            let (al, be) = p.alpha_beta();
            for i in 1..p.m() {
                let hinge = p.is_hinge(i).unwrap();
                if hinge {
                    assert_eq!(al[i + 1], al[i] + al[i - 1], "alpha hinge at {i}");
                    assert_eq!(be[i + 1], be[i] + be[i - 1], "beta hinge at {i}");
                } else {
                    assert_eq!(al[i + 1] + al[i - 1], 2 * al[i], "alpha flat at {i}");
                    assert_eq!(be[i + 1] + be[i - 1], 2 * be[i], "beta flat at {i}");
                }
            }
        }
    }

    #[test]
    fn wedge_additivity_along_path() {
        // If p q r is a Farey triangle and u is on the far side, then
        // u ∧ r = u ∧ p + u ∧ q for the vertex r opposite the entry edge.
        let path = farey_path(&Slope::infinity(), &sl(7, 16)).unwrap();
        for i in 1..=path.m() {
            let (p, q) = path.edges[i];
            let r = path.opposite_vertices[i];
            let u = path.source;
            assert_eq!(
                wedge(&u, &r),
                wedge(&u, &p) + wedge(&u, &q),
                "additivity at triangle {i}"
            );
        }
    }

    #[test]
    fn reversal_reverses_triangles() {
        let p = farey_path(&Slope::infinity(), &sl(2, 5)).unwrap();
        let r = p.reversed().unwrap();
        assert_eq!(p.m(), r.m());
        for (a, b) in p.triangles.iter().zip(r.triangles.iter().rev()) {
            assert!(a.same_vertex_set(b));
        }
    }
}
