//! Exact arithmetic on slopes, i.e. points of P¹(Q) = Q ∪ {∞}, and on the
//! unimodular 2×2 integer matrices that move them around.
//!
//! A slope is stored as a reduced fraction `numer/denom` with `denom >= 0`;
//! infinity is the canonical `1/0`. The wedge `s ∧ s'` (absolute determinant
//! of the two columns) is the basic currency: it vanishes exactly on equal
//! slopes and equals 1 exactly on Farey neighbors.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlopeError {
    #[error("slope 0/0 is unrepresentable")]
    ZeroZero,
    #[error("the two slopes are equal")]
    EqualSlopes,
    #[error("matrix is not unimodular (|det| = {0})")]
    NotUnimodular(i64),
    #[error("integer overflow in slope arithmetic")]
    Overflow,
    #[error("expected a finite slope, got infinity")]
    Infinite,
}

/// A point of P¹(Q): a reduced fraction with nonnegative denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub struct Slope {
    numer: i64,
    denom: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Slope {
    /// Canonicalize `numer/denom`: gcd reduced, denominator nonnegative,
    /// infinity stored as 1/0. The pair (0, 0) is rejected.
    pub fn new(numer: i64, denom: i64) -> Result<Self, SlopeError> {
        if numer == 0 && denom == 0 {
            return Err(SlopeError::ZeroZero);
        }
        let g = gcd(numer, denom);
        let (mut n, mut d) = (numer / g, denom / g);
        if d < 0 || (d == 0 && n < 0) {
            n = -n;
            d = -d;
        }
        Ok(Slope { numer: n, denom: d })
    }

    pub fn infinity() -> Self {
        Slope { numer: 1, denom: 0 }
    }

    pub fn integer(n: i64) -> Self {
        Slope { numer: n, denom: 1 }
    }

    pub fn zero() -> Self {
        Slope::integer(0)
    }

    pub fn one() -> Self {
        Slope::integer(1)
    }

    pub fn numer(&self) -> i64 {
        self.numer
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn is_infinity(&self) -> bool {
        self.denom == 0
    }

    pub fn is_integer(&self) -> bool {
        self.denom == 1
    }

    /// Integer part of a finite slope.
    pub fn floor(&self) -> Result<i64, SlopeError> {
        if self.denom == 0 {
            return Err(SlopeError::Infinite);
        }
        Ok(self.numer.div_euclid(self.denom))
    }

    /// Shift by an integer: p/q + t.
    pub fn shift(&self, t: i64) -> Result<Self, SlopeError> {
        let n = self
            .denom
            .checked_mul(t)
            .and_then(|x| x.checked_add(self.numer))
            .ok_or(SlopeError::Overflow)?;
        Slope::new(n, self.denom)
    }

    /// The map s ↦ 1 − s (exchanges 0 and 1, fixes ∞).
    pub fn reflect_unit(&self) -> Self {
        Slope {
            numer: self.denom - self.numer,
            denom: self.denom,
        }
        .renormalize()
    }

    fn renormalize(self) -> Self {
        Slope::new(self.numer, self.denom).expect("renormalize of valid slope")
    }

    /// Signed determinant | n  n' ; d  d' |. Antisymmetric; the wedge is its
    /// absolute value.
    pub fn signed_wedge(&self, other: &Slope) -> i64 {
        self.numer * other.denom - self.denom * other.numer
    }
}

/// Absolute determinant of the two reduced fractions. Zero iff equal,
/// one iff Farey neighbors.
pub fn wedge(s: &Slope, t: &Slope) -> i64 {
    s.signed_wedge(t).abs()
}

/// True when (a, b, c) are in positive cyclic order on the circle P¹(Q),
/// with the convention that the reals sit in increasing order and ∞ closes
/// the circle.
pub fn cyclically_positive(a: &Slope, b: &Slope, c: &Slope) -> bool {
    let s1 = a.signed_wedge(b).signum();
    let s2 = b.signed_wedge(c).signum();
    let s3 = c.signed_wedge(a).signum();
    s1 * s2 * s3 > 0
}

/// Number of slopes that are Farey neighbors of both inputs.
///
/// For distinct slopes the count is 2 (wedge ≤ 2), and for wedge ≥ 3 it is
/// 1 or 0 depending on whether the numerator of the normalized difference is
/// ±1 mod the wedge.
pub fn common_neighbors(s: &Slope, t: &Slope) -> Result<usize, SlopeError> {
    Ok(common_neighbor_list(s, t)?.len())
}

/// The actual common Farey neighbors (there are at most two).
pub fn common_neighbor_list(s: &Slope, t: &Slope) -> Result<Vec<Slope>, SlopeError> {
    if s == t {
        return Err(SlopeError::EqualSlopes);
    }
    // Send s to infinity by a unimodular change of basis; neighbors of
    // infinity are the integers, so common neighbors of (∞, y/x) are the
    // integers n with |nx − y| = 1.
    let u = GluingMap::basis_to_infinity(s)?;
    let img = u.apply(t)?;
    let (y, x) = (img.numer(), img.denom());
    let mut out = Vec::new();
    debug_assert!(x > 0);
    for delta in [-1i64, 1] {
        let target = y + delta;
        if target.rem_euclid(x) == 0 {
            let n = target / x;
            let candidate = u.inverse()?.apply(&Slope::integer(n))?;
            if !out.contains(&candidate) {
                out.push(candidate);
            }
        }
    }
    out.sort();
    Ok(out)
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 0 {
            write!(f, "inf")
        } else if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

/// A 2×2 integer matrix with determinant ±1, acting on slopes by fractional
/// linear maps on (numerator, denominator) column vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingMap {
    /// Row-major entries [[a, b], [c, d]]; slope y/x maps to (ay+bx)/(cy+dx).
    pub entries: [[i64; 2]; 2],
}

impl GluingMap {
    pub fn new(entries: [[i64; 2]; 2]) -> Result<Self, SlopeError> {
        let m = GluingMap { entries };
        let det = m.det().ok_or(SlopeError::Overflow)?;
        if det.abs() != 1 {
            return Err(SlopeError::NotUnimodular(det));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        GluingMap {
            entries: [[1, 0], [0, 1]],
        }
    }

    /// Twist about infinity: s ↦ s + t.
    pub fn twist(t: i64) -> Self {
        GluingMap {
            entries: [[1, t], [0, 1]],
        }
    }

    /// s ↦ 1/s (swaps 0 and ∞, fixes ±1).
    pub fn swap() -> Self {
        GluingMap {
            entries: [[0, 1], [1, 0]],
        }
    }

    /// s ↦ 1 − s (swaps 0 and 1, fixes ∞).
    pub fn reflect_unit() -> Self {
        GluingMap {
            entries: [[-1, 1], [0, 1]],
        }
    }

    /// s ↦ −s (fixes 0 and ∞).
    pub fn negate() -> Self {
        GluingMap {
            entries: [[-1, 0], [0, 1]],
        }
    }

    /// Transport through a 2-band with `k` half-twists: s ↦ k − s.
    pub fn through_band(k: i64) -> Self {
        GluingMap {
            entries: [[-1, k], [0, 1]],
        }
    }

    /// A unimodular matrix sending the given slope to infinity.
    pub fn basis_to_infinity(s: &Slope) -> Result<Self, SlopeError> {
        // Extended gcd: find (r, t) with p·t − q·r = 1 for s = p/q.
        let (p, q) = (s.numer(), s.denom());
        let (mut old_r, mut r) = (p, q);
        let (mut old_s, mut s1) = (1i64, 0i64);
        let (mut old_t, mut t1) = (0i64, 1i64);
        while r != 0 {
            let quo = old_r / r;
            (old_r, r) = (r, old_r - quo * r);
            (old_s, s1) = (s1, old_s - quo * s1);
            (old_t, t1) = (t1, old_t - quo * t1);
        }
        // old_r = ±1 = p·old_s + q·old_t.
        let sign = old_r.signum();
        let (u, v) = (old_s * sign, old_t * sign);
        // [[u, v], [−q, p]] maps (p, q) to (1, 0) and has det up + vq = 1.
        GluingMap::new([[u, v], [-q, p]])
    }

    pub fn det(&self) -> Option<i64> {
        let [[a, b], [c, d]] = self.entries;
        a.checked_mul(d)?.checked_sub(b.checked_mul(c)?)
    }

    pub fn apply(&self, s: &Slope) -> Result<Slope, SlopeError> {
        let [[a, b], [c, d]] = self.entries;
        let n = a
            .checked_mul(s.numer())
            .and_then(|x| b.checked_mul(s.denom()).and_then(|y| x.checked_add(y)))
            .ok_or(SlopeError::Overflow)?;
        let m = c
            .checked_mul(s.numer())
            .and_then(|x| d.checked_mul(s.denom()).and_then(|y| x.checked_add(y)))
            .ok_or(SlopeError::Overflow)?;
        Slope::new(n, m)
    }

    pub fn compose(&self, inner: &GluingMap) -> Result<Self, SlopeError> {
        let a = self.entries;
        let b = inner.entries;
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc: i64 = 0;
                for k in 0..2 {
                    let term = a[i][k].checked_mul(b[k][j]).ok_or(SlopeError::Overflow)?;
                    acc = acc.checked_add(term).ok_or(SlopeError::Overflow)?;
                }
                out[i][j] = acc;
            }
        }
        GluingMap::new(out)
    }

    pub fn inverse(&self) -> Result<Self, SlopeError> {
        let det = self.det().ok_or(SlopeError::Overflow)?;
        let [[a, b], [c, d]] = self.entries;
        // adj / det with det = ±1.
        GluingMap::new([[d * det, -b * det], [-c * det, a * det]])
    }

    /// Action on the mod-2 puncture labels (x-parity, y-parity) of a
    /// 4-punctured sphere: an arc of reduced slope y/x starting at label ℓ
    /// ends at ℓ + (x, y).
    pub fn label_action(&self, label: (u8, u8)) -> (u8, u8) {
        let [[a, b], [c, d]] = self.entries;
        // (x', y') = (c·y + d·x, a·y + b·x) mod 2.
        let (x, y) = (label.0 as i64, label.1 as i64);
        (
            ((c * y + d * x).rem_euclid(2)) as u8,
            ((a * y + b * x).rem_euclid(2)) as u8,
        )
    }
}

impl fmt::Debug for GluingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", a, b, c, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(n: i64, d: i64) -> Slope {
        Slope::new(n, d).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(sl(4, 6), sl(2, 3));
        assert_eq!(sl(1, 0), Slope::infinity());
        assert_eq!(sl(-3, 0), Slope::infinity());
        assert_eq!(sl(2, -4), sl(-1, 2));
        assert_eq!(Slope::new(0, 0), Err(SlopeError::ZeroZero));
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&Slope::infinity(), &sl(3, 7)), 7);
        assert_eq!(wedge(&sl(1, 2), &sl(1, 3)), 1);
        assert_eq!(wedge(&sl(0, 1), &sl(2, 5)), 2);
        assert_eq!(wedge(&sl(2, 5), &sl(2, 5)), 0);
    }

    #[test]
    fn common_neighbor_counts() {
        let inf = Slope::infinity();
        assert_eq!(common_neighbors(&sl(0, 1), &inf).unwrap(), 2);
        assert_eq!(common_neighbors(&inf, &sl(1, 2)).unwrap(), 2);
        assert_eq!(common_neighbors(&inf, &sl(2, 5)).unwrap(), 0);
        assert_eq!(common_neighbors(&inf, &sl(1, 3)).unwrap(), 1);
        assert_eq!(
            common_neighbor_list(&inf, &sl(1, 2)).unwrap(),
            vec![sl(0, 1), sl(1, 1)]
        );
        assert_eq!(common_neighbors(&inf, &inf), Err(SlopeError::EqualSlopes));
    }

    #[test]
    fn gluing_action() {
        let id = GluingMap::identity();
        assert_eq!(id.apply(&sl(3, 5)).unwrap(), sl(3, 5));
        let swap = GluingMap::swap();
        assert_eq!(swap.apply(&sl(0, 1)).unwrap(), Slope::infinity());
        let t = GluingMap::twist(1);
        assert_eq!(t.apply(&sl(0, 1)).unwrap(), sl(1, 1));
        assert_eq!(t.apply(&sl(1, 2)).unwrap(), sl(3, 2));
        assert!(GluingMap::new([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn basis_to_infinity_sends_slope_home() {
        for (n, d) in [(2, 5), (-3, 7), (1, 0), (0, 1), (13, 8), (-9, 0)] {
            let s = sl(n, d);
            let u = GluingMap::basis_to_infinity(&s).unwrap();
            assert_eq!(u.apply(&s).unwrap(), Slope::infinity());
            assert_eq!(u.det().unwrap(), 1);
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let m = GluingMap::new([[3, 2], [4, 3]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.compose(&inv).unwrap(), GluingMap::identity());
        assert_eq!(inv.compose(&m).unwrap(), GluingMap::identity());
    }

    #[test]
    fn cyclic_order_on_circle() {
        let inf = Slope::infinity();
        // 1 lies to the left of the geodesic from ∞ to 1/2, 0 to the right.
        assert!(cyclically_positive(&inf, &sl(1, 2), &sl(1, 1)));
        assert!(!cyclically_positive(&inf, &sl(1, 2), &sl(0, 1)));
        assert!(cyclically_positive(&sl(1, 1), &sl(2, 1), &sl(3, 1)));
        assert!(!cyclically_positive(&sl(3, 1), &sl(2, 1), &sl(1, 1)));
    }
}
