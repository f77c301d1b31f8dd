//! Independent brute-force oracles.
//!
//! Everything in this module recomputes a quantity of the main pipeline by
//! a different route — exhaustive enumeration, breadth-first search, or a
//! direct geometric count — so the two paths can be compared exactly. The
//! implementations here deliberately avoid the algorithms they check.

use crate::angles::{Angle, BandAngles};
use crate::farey::FareyTriangle;
use crate::slope::{wedge, Slope};
use num_rational::BigRational;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// All slopes with denominator ≤ bound and numerator bounded accordingly,
/// plus infinity.
pub fn bounded_slopes(bound: i64) -> Vec<Slope> {
    let mut out = vec![Slope::infinity()];
    for d in 1..=bound {
        for n in -(bound * 2)..=(bound * 2) {
            if let Ok(s) = Slope::new(n, d) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Farey neighbors of `s` with denominators within the bound, by scan.
pub fn neighbors_by_scan(s: &Slope, bound: i64) -> Vec<Slope> {
    bounded_slopes(bound)
        .into_iter()
        .filter(|u| wedge(u, s) == 1)
        .collect()
}

/// Common Farey neighbors of two slopes by exhaustive scan. The scan bound
/// (sum of the two denominators, at least 2) covers every common neighbor:
/// a common neighbor is a mediant-type combination of the two inputs.
pub fn common_neighbors_by_scan(s: &Slope, t: &Slope) -> Vec<Slope> {
    let bound = (s.denom() + t.denom()).max(2) + 1;
    bounded_slopes(bound)
        .into_iter()
        .filter(|u| wedge(u, s) == 1 && wedge(u, t) == 1)
        .collect()
}

/// Triangle path between two slopes by breadth-first search over the Farey
/// triangles with bounded vertex denominators. Returns the triangle count
/// minus one (the path length m) and the triangles themselves.
pub fn farey_path_by_bfs(s: &Slope, t: &Slope, bound: i64) -> Option<Vec<FareyTriangle>> {
    let verts = bounded_slopes(bound);
    // All triangles on the bounded vertex set.
    let mut triangles: Vec<[Slope; 3]> = Vec::new();
    let n = verts.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if wedge(&verts[i], &verts[j]) != 1 {
                continue;
            }
            for v in verts.iter().skip(j + 1) {
                if wedge(&verts[i], v) == 1 && wedge(&verts[j], v) == 1 {
                    triangles.push([verts[i], verts[j], *v]);
                }
            }
        }
    }
    let index_of: HashMap<BTreeSet<Slope>, usize> = triangles
        .iter()
        .enumerate()
        .map(|(i, tr)| (tr.iter().copied().collect(), i))
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); triangles.len()];
    for (i, tr) in triangles.iter().enumerate() {
        for (j, other) in triangles.iter().enumerate().skip(i + 1) {
            let shared = tr.iter().filter(|v| other.contains(v)).count();
            if shared == 2 {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let _ = index_of;
    let starts: Vec<usize> = triangles
        .iter()
        .enumerate()
        .filter(|(_, tr)| tr.contains(s))
        .map(|(i, _)| i)
        .collect();
    let mut prev: Vec<Option<usize>> = vec![None; triangles.len()];
    let mut seen: Vec<bool> = vec![false; triangles.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for i in &starts {
        seen[*i] = true;
        queue.push_back(*i);
    }
    while let Some(cur) = queue.pop_front() {
        if triangles[cur].contains(t) {
            // Reconstruct.
            let mut chain = vec![cur];
            let mut at = cur;
            while let Some(p) = prev[at] {
                chain.push(p);
                at = p;
            }
            chain.reverse();
            return Some(
                chain
                    .into_iter()
                    .map(|i| FareyTriangle::new(triangles[i]).expect("valid triangle"))
                    .collect(),
            );
        }
        for &nb in &adj[cur] {
            if !seen[nb] {
                seen[nb] = true;
                prev[nb] = Some(cur);
                queue.push_back(nb);
            }
        }
    }
    None
}

/// Intersection numbers of the compression curve with the ascending and
/// descending arc families, by counting lattice-line crossings of the
/// straight segment from (δ, δ') to (d + δ, k + δ') for a generic offset.
pub fn intersection_numbers_by_count(d: i64, k: i64) -> (i64, i64) {
    // Descending lines y = c: crossings of the y-interval (δ', k + δ').
    // With δ' irrational-like (1/3 works since k is an integer), the count
    // is |k|. Ascending lines y = x + c: substitute z = y − x.
    let count_crossings = |from_num: i64, from_den: i64, delta: i64| -> i64 {
        // Crossings of line-family z = c by the segment from from_num/from_den
        // to from_num/from_den + delta: count integers strictly between.
        let lo = BigRational::new(from_num.into(), from_den.into());
        let hi = &lo + BigRational::from_integer(delta.into());
        let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
        let mut count = 0;
        let mut c = a.ceil().to_integer();
        while BigRational::from_integer(c.clone()) < b {
            if BigRational::from_integer(c.clone()) > a {
                count += 1;
            }
            c += 1;
        }
        count
    };
    let n_b = count_crossings(1, 3, k);
    let n_a = count_crossings(1, 3, k - d);
    (n_a, n_b)
}

/// Minimal total bending over non-backtracking closed walks in the
/// compression class, by bounded-depth exhaustive search. A straight
/// representative crosses d vertical, |k| horizontal and |d − k| diagonal
/// edges, so the depth bound d + |k| + |d − k| + 2d leaves generous room
/// for detours. Independent of the Dijkstra implementation in the
/// verifier.
pub fn min_bending_by_enumeration(degree: usize, deck_twists: i64, angles: &BandAngles) -> Angle {
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    struct St {
        col: i64,
        row: i64,
        upper: bool,
    }
    let d = degree as i64;
    let k = deck_twists;
    let max_len = (d + k.abs() + (d - k).abs() + 2 * d) as usize;
    let weight = |col: i64, upper: bool, step: u8| -> BigRational {
        let band = col.rem_euclid(d) as usize;
        match step {
            0 => angles.a[band].0.clone(),
            1 => angles.b[band].0.clone(),
            _ => {
                let line = if upper { col } else { col + 1 };
                angles.c[(line - 1).rem_euclid(d) as usize].0.clone()
            }
        }
    };
    let advance = |s: St, step: u8| -> St {
        match (step, s.upper) {
            (0, up) => St { upper: !up, ..s },
            (1, true) => St {
                row: s.row + 1,
                upper: false,
                ..s
            },
            (1, false) => St {
                row: s.row - 1,
                upper: true,
                ..s
            },
            (_, true) => St {
                col: s.col - 1,
                upper: false,
                ..s
            },
            (_, false) => St {
                col: s.col + 1,
                upper: true,
                ..s
            },
        }
    };
    let mut best: Option<BigRational> = None;
    for col0 in 0..d {
        for upper0 in [false, true] {
            let start = St {
                col: col0,
                row: 0,
                upper: upper0,
            };
            let goal = St {
                col: col0 + d,
                row: k,
                upper: upper0,
            };
            // Depth-first over (state, last step, length, cost), pruned by
            // the current best.
            let mut stack: Vec<(St, u8, usize, BigRational, u8)> = Vec::new();
            for first in 0..3u8 {
                let w = weight(start.col, start.upper, first);
                stack.push((advance(start, first), first, 1, w, first));
            }
            while let Some((st, last, len, cost, first)) = stack.pop() {
                if let Some(b) = &best {
                    if cost >= *b {
                        continue;
                    }
                }
                if st == goal && first != last {
                    best = Some(cost.clone());
                    continue;
                }
                if len == max_len {
                    continue;
                }
                for step in 0..3u8 {
                    if step == last {
                        continue;
                    }
                    let w = weight(st.col, st.upper, step);
                    stack.push((advance(st, step), step, len + 1, &cost + &w, first));
                }
            }
        }
    }
    Angle(best.expect("bounded search finds a compression walk"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::farey_path;
    use crate::slope::common_neighbor_list;

    fn sl(n: i64, d: i64) -> Slope {
        Slope::new(n, d).unwrap()
    }

    #[test]
    fn common_neighbors_match_scan() {
        let pairs = [
            (Slope::infinity(), sl(2, 5)),
            (Slope::infinity(), sl(1, 2)),
            (sl(0, 1), Slope::infinity()),
            (sl(1, 3), sl(2, 5)),
            (sl(1, 2), sl(1, 3)),
            (sl(-3, 7), sl(1, 2)),
        ];
        for (s, t) in pairs {
            let fast = common_neighbor_list(&s, &t).unwrap();
            let slow = common_neighbors_by_scan(&s, &t);
            let fast_set: BTreeSet<Slope> = fast.into_iter().collect();
            let slow_set: BTreeSet<Slope> = slow.into_iter().collect();
            assert_eq!(fast_set, slow_set, "common neighbors of {s}, {t}");
        }
    }

    #[test]
    fn path_matches_bfs_oracle() {
        for (s, t) in [
            (Slope::infinity(), sl(2, 5)),
            (Slope::infinity(), sl(1, 3)),
            (sl(0, 1), sl(3, 5)),
            (sl(1, 2), sl(4, 7)),
        ] {
            let fast = farey_path(&s, &t).unwrap();
            let slow = farey_path_by_bfs(&s, &t, 8).expect("bfs finds the path");
            assert_eq!(fast.triangles.len(), slow.len(), "path length {s} → {t}");
            for (a, b) in fast.triangles.iter().zip(&slow) {
                assert!(a.same_vertex_set(b), "triangle mismatch on {s} → {t}");
            }
        }
    }

    #[test]
    fn intersection_count_matches_formula() {
        for d in 3..=5i64 {
            for k in -4..=4i64 {
                let (na, nb) = intersection_numbers_by_count(d, k);
                assert_eq!(na, (d - k).abs(), "n_a at (d, k) = ({d}, {k})");
                assert_eq!(nb, k.abs(), "n_b at (d, k) = ({d}, {k})");
            }
        }
    }
}
