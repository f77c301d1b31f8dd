//! Acceptance suite: one test per criterion, each printing a pass line.
//! All tolerances are exact (rational π-unit arithmetic); no criterion
//! uses a numeric epsilon.

mod common;

use arborhyp::angles::{
    assign, construct_w_tangle, critical_sequence, tangle_feasible, Angle, AngleError,
};
use arborhyp::classifier::{
    classify, montesinos_presentation, reduce_and_classify, twobridge_presentation, Verdict,
};
use arborhyp::decomposer::assemble;
use arborhyp::dsl;
use arborhyp::farey::farey_path;
use arborhyp::oracle;
use arborhyp::presentation::LinkPresentation;
use arborhyp::reducer::reduce;
use arborhyp::report::{make_certificate, verify_certificate};
use arborhyp::slope::{common_neighbors, Slope};
use arborhyp::verifier::{
    combinatorial_area, min_bending, verify, CurveClass, DualCrossing, NormalCurve,
};
use common::{random_band_angles, random_presentation, rng};
use rand::Rng;
use std::time::Instant;

fn sl(n: i64, d: i64) -> Slope {
    Slope::new(n, d).unwrap()
}

fn verdict_of(p: &LinkPresentation) -> Vec<Verdict> {
    let (_, cls) = reduce_and_classify(p).unwrap();
    cls.into_iter().map(|c| c.verdict).collect()
}

/// Criterion 1: the family-III boundary table.
#[test]
fn criterion_1_exceptional_boundary_table() {
    let t0 = Instant::now();
    let non_hyperbolic: Vec<Vec<i64>> = vec![
        vec![2, 3, 6],
        vec![2, 4, 4],
        vec![3, 3, 3],
        vec![2, 2, 2],
        vec![2, 2, 3],
        vec![2, 2, 4],
        vec![2, 2, 5],
        vec![2, 2, 6],
    ];
    for xs in &non_hyperbolic {
        let p = dsl::parse(&format!("pretzel({},{},{})", xs[0], xs[1], xs[2])).unwrap();
        let v = verdict_of(&p);
        assert_eq!(v.len(), 1, "pretzel{xs:?}");
        assert!(
            matches!(v[0], Verdict::FamilyIII { .. }),
            "pretzel{xs:?} must be non-hyperbolic, got {:?}",
            v[0]
        );
    }
    for xs in [[2, 3, 7], [2, 4, 5], [3, 3, 4]] {
        let p = dsl::parse(&format!("pretzel({},{},{})", xs[0], xs[1], xs[2])).unwrap();
        let v = verdict_of(&p);
        assert!(
            matches!(v[0], Verdict::Candidate),
            "pretzel{xs:?} must be a candidate, got {:?}",
            v[0]
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}");
    println!("criterion 1 (exceptional boundary table): PASS in {elapsed:?}");
}

/// Criterion 2: family II detection.
#[test]
fn criterion_2_family_ii() {
    let p = dsl::parse("montesinos(twists=2; 1/2, 1/2, 1/2, 1/2)").unwrap();
    let v = verdict_of(&p);
    assert!(matches!(v[0], Verdict::FamilyII { .. }), "got {:?}", v[0]);

    // Any presentation containing a bracelet augmented at least twice.
    let mut q = LinkPresentation::new();
    q.add_bracelet(LinkPresentation::band(0, 2, 3));
    assert!(matches!(
        classify(&q).unwrap().verdict,
        Verdict::FamilyII { .. }
    ));
    let mut q = LinkPresentation::new();
    let a = q.add_bracelet(LinkPresentation::band(1, 2, 0));
    let t = q.add_bracelet(LinkPresentation::tangle(sl(2, 5)));
    q.glue(
        arborhyp::presentation::PortRef {
            bracelet: a,
            port: 0,
        },
        arborhyp::presentation::PortRef {
            bracelet: t,
            port: 0,
        },
        arborhyp::slope::GluingMap::identity(),
    );
    assert!(matches!(
        classify(&q).unwrap().verdict,
        Verdict::FamilyII { .. }
    ));
    println!("criterion 2 (family II detection): PASS");
}

/// Criterion 3: connected sums split and the trivial band is the unknot.
#[test]
fn criterion_3_connected_sum_and_unknot() {
    // A tangle at the crossing slope forces the step that undoes sums.
    let p = dsl::parse("montesinos(twists=0; inf, 1/2, 1/3)").unwrap();
    let (red, cls) = reduce_and_classify(&p).unwrap();
    assert!(red.summands.len() >= 2, "got {} summands", red.summands.len());
    assert_eq!(red.summands.len(), cls.len());
    for c in &cls {
        assert!(
            !matches!(c.verdict, Verdict::Candidate),
            "torus-link summands expected, got {:?}",
            c.verdict
        );
    }
    // A closed band with a single half-twist is the unknot.
    let mut q = LinkPresentation::new();
    q.add_bracelet(LinkPresentation::band(0, 0, 1));
    assert!(matches!(classify(&q).unwrap().verdict, Verdict::Unknot));
    let mut q = LinkPresentation::new();
    q.add_bracelet(LinkPresentation::band(0, 0, -1));
    assert!(matches!(classify(&q).unwrap().verdict, Verdict::Unknot));
    println!("criterion 3 (prime factorization and unknot): PASS");
}

/// Criterion 4: the two-bridge dichotomy over all wedges up to 13.
#[test]
fn criterion_4_two_bridge_dichotomy() {
    let t0 = Instant::now();
    let mut candidates = 0usize;
    let mut closed = 0usize;
    for q in 1..=13i64 {
        for p in -13..=13i64 {
            let Ok(s) = Slope::new(p, q) else { continue };
            if s.denom() != q {
                continue; // not reduced at this wedge
            }
            let pres = twobridge_presentation(Slope::infinity(), s);
            let v = verdict_of(&pres);
            assert_eq!(v.len(), 1);
            let has_common = common_neighbors(&Slope::infinity(), &s).unwrap_or(2) >= 1;
            if has_common {
                closed += 1;
                assert!(
                    matches!(v[0], Verdict::FamilyI { .. } | Verdict::Unknot),
                    "(∞, {s}) shares a neighbor but classified {:?}",
                    v[0]
                );
            } else {
                candidates += 1;
                assert!(
                    matches!(v[0], Verdict::Candidate),
                    "(∞, {s}) has no common neighbor but classified {:?}",
                    v[0]
                );
                // Every candidate receives a verified certificate.
                let red = reduce(&pres).unwrap();
                let d = assemble(&red.summands[0]).unwrap();
                let a = assign(&d).unwrap();
                let rep = verify(&d, &a).unwrap();
                assert!(rep.pass, "(∞, {s}) certificate failed verification");
            }
        }
    }
    assert!(candidates > 20 && closed > 10);
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() <= 10, "took {elapsed:?}");
    println!(
        "criterion 4 (two-bridge dichotomy, {candidates} candidates / {closed} closed): \
         PASS in {elapsed:?}"
    );
}

/// Criterion 5: certificate soundness over a random candidate corpus.
#[test]
fn criterion_5_certificate_soundness() {
    let t0 = Instant::now();
    let mut r = rng(0x5eed);
    let mut verified = 0usize;
    let mut attempts = 0usize;
    while verified < 200 {
        attempts += 1;
        assert!(attempts < 4000, "generator failed to reach 200 candidates");
        let p = random_presentation(&mut r, 12);
        if p.bracelets.len() > 6 {
            continue;
        }
        let Ok((_, cls)) = reduce_and_classify(&p) else {
            continue;
        };
        for c in cls {
            if !matches!(c.verdict, Verdict::Candidate) {
                continue;
            }
            let cand = c.presentation.unwrap();
            let d = assemble(&cand).unwrap_or_else(|e| {
                panic!("decomposition failed on {}: {e}", dsl::emit(&cand))
            });
            let a = assign(&d).unwrap_or_else(|e| {
                panic!("assignment failed on {}: {e:?}", dsl::emit(&cand))
            });
            let rep = verify(&d, &a).unwrap();
            assert!(
                rep.pass,
                "verification failed on {}: edges {:?}, tets {:?}",
                dsl::emit(&cand),
                rep.edge_sums.offending,
                rep.tet_failures
            );
            // The standalone certificate replays to the same verdict.
            let cert = make_certificate(&d, &a);
            assert!(verify_certificate(&cert).pass);
            verified += 1;
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() <= 60, "took {elapsed:?}");
    println!(
        "criterion 5 (certificate soundness, {verified} candidates from {attempts} draws): \
         PASS in {elapsed:?}"
    );
}

/// Criterion 6: the exact feasibility boundary for tangle regions.
#[test]
fn criterion_6_tangle_feasibility_iff() {
    let t0 = Instant::now();
    let mut checked = 0usize;
    for w in 2..=12i64 {
        // A couple of slopes per wedge.
        let mut targets = vec![Slope::new(1, w).unwrap()];
        if w > 2 {
            targets.push(Slope::new(w - 1, w).unwrap());
        }
        if w > 4 {
            targets.push(Slope::new(3, w).unwrap());
        }
        for s in targets {
            if s.denom() != w {
                continue;
            }
            let path = farey_path(&Slope::infinity(), &s).unwrap();
            let beta_m = arborhyp::slope::wedge(&path.entry_b(), &path.target);
            let alpha_m = arborhyp::slope::wedge(&path.entry_a(), &path.target);
            for na in 1..=8i64 {
                for nb in 1..=(8 - na) {
                    let a = Angle::pi_frac(na, 8);
                    let b = Angle::pi_frac(nb, 8);
                    let sum = &a + &b;
                    let expected = if w == 2 {
                        sum == Angle::pi()
                    } else {
                        let vm = &a.scale(beta_m) + &b.scale(alpha_m);
                        vm > Angle::pi() && sum < Angle::pi()
                    };
                    assert_eq!(
                        tangle_feasible(&a, &b, &path).unwrap(),
                        expected,
                        "feasibility mismatch at wedge {w}, a = {a}, b = {b}"
                    );
                    let built = construct_w_tangle(&a, &b, &path);
                    match (expected, built) {
                        (true, Ok(_)) => {}
                        (false, Err(AngleError::Infeasible)) => {}
                        (e, other) => panic!(
                            "construction mismatch at wedge {w}, a = {a}, b = {b}: expected \
                             feasible = {e}, got {:?}",
                            other.map(|_| "ok")
                        ),
                    }
                    checked += 1;
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() <= 10, "took {elapsed:?}");
    println!("criterion 6 (tangle feasibility boundary, {checked} grid points): PASS in {elapsed:?}");
}

/// Criterion 7: the shortest-walk computation agrees with exhaustive
/// enumeration on every small block.
#[test]
fn criterion_7_min_bending_oracle() {
    let t0 = Instant::now();
    let mut r = rng(0xbead);
    let mut runs = 0usize;
    for d in 3..=5usize {
        for k in -4..=4i64 {
            for _ in 0..100 {
                let (a, b) = random_band_angles(&mut r, d);
                let Ok(angles) = arborhyp::angles::band_edge_angles(&a, &b) else {
                    continue;
                };
                let fast = min_bending(d, k, &angles);
                let slow = oracle::min_bending_by_enumeration(d, k, &angles);
                assert_eq!(
                    fast, slow,
                    "minimum mismatch at d = {d}, k = {k}, a = {a:?}, b = {b:?}"
                );
                runs += 1;
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() <= 60, "took {elapsed:?}");
    println!("criterion 7 (bending oracle equivalence, {runs} blocks): PASS in {elapsed:?}");
}

/// Criterion 8: the closed form for the steep degree-3 family.
#[test]
fn criterion_8_steep_family_closed_form() {
    let mut r = rng(0xf00d);
    for run in 0..50 {
        // α_i ≥ β_i > 0 rationals, ε small against their size.
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        for _ in 0..3 {
            let be = r.gen_range(1..=6i64);
            let al = r.gen_range(be..=(be + 6));
            alphas.push(al);
            betas.push(be);
        }
        let scale: i64 = 16 * (alphas.iter().sum::<i64>() + betas.iter().sum::<i64>());
        let eps = Angle::pi_frac(1, scale);
        let a: Vec<Angle> = alphas
            .iter()
            .map(|al| &Angle::pi() - &eps.scale(*al))
            .collect();
        let b: Vec<Angle> = betas.iter().map(|be| eps.scale(*be)).collect();
        let angles = arborhyp::angles::band_edge_angles(&a, &b).unwrap();
        let expected_slack = (0..3)
            .map(|i| alphas[i] - betas[(i + 1) % 3] - betas[(i + 2) % 3])
            .min()
            .unwrap();
        let expected = &Angle::two_pi() + &eps.scale(expected_slack);
        let got = min_bending(3, 1, &angles);
        assert_eq!(
            got, expected,
            "closed form mismatch in run {run}: α = {alphas:?}, β = {betas:?}"
        );
    }
    println!("criterion 8 (steep-family closed form, 50 runs): PASS");
}

/// Criterion 9: zero-area fixtures and additivity of combinatorial area.
#[test]
fn criterion_9_zero_area_fixtures() {
    // Blocks from the named corpus plus random ones.
    let mut fixtures: Vec<(usize, i64, arborhyp::angles::BandAngles)> = Vec::new();
    for text in ["pretzel(2,3,7)", "montesinos(twists=2; 1/2, 1/3, 2/5, 3/7, 1/2)"] {
        let p = dsl::parse(text).unwrap();
        let (_, cls) = reduce_and_classify(&p).unwrap();
        for c in cls {
            if let Some(cand) = c.presentation {
                let d = assemble(&cand).unwrap();
                let a = assign(&d).unwrap();
                for blk in &d.blocks {
                    if !blk.augmented {
                        fixtures.push((
                            blk.degree,
                            blk.deck_twists,
                            a.blocks[blk.index].clone(),
                        ));
                    }
                }
            }
        }
    }
    let mut r = rng(0xa43a);
    for _ in 0..20 {
        let d = r.gen_range(3..=5usize);
        let (a, b) = random_band_angles(&mut r, d);
        if let Ok(angles) = arborhyp::angles::band_edge_angles(&a, &b) {
            fixtures.push((d, r.gen_range(-3..=3), angles));
        }
    }
    assert!(fixtures.len() >= 12);
    for (d, k, angles) in &fixtures {
        // Vertex links: around each ideal vertex the crossings are the two
        // crossing edges and the four band edges; area = 2π − 2π·χ(disk)·…
        for i in 0..*d {
            let prev = (i + d - 1) % d;
            let link = NormalCurve {
                crossings: vec![
                    DualCrossing::Crossing(prev),
                    DualCrossing::Crossing(prev),
                    DualCrossing::Ascending(prev),
                    DualCrossing::Descending(prev),
                    DualCrossing::Ascending(i),
                    DualCrossing::Descending(i),
                ],
                class: CurveClass::PunctureLoop,
            };
            let area = combinatorial_area(&link, angles, 1);
            assert!(area.is_zero(), "vertex link area {area} at band {i}");
        }
        // Boundary bigon: four boundary edges at π/2 around a disk.
        let bigon = NormalCurve {
            crossings: vec![DualCrossing::Boundary; 4],
            class: CurveClass::Closed,
        };
        assert!(combinatorial_area(&bigon, angles, 1).is_zero());
        // Compression disk: area equals the bending excess over 2π.
        let (value, witness) = arborhyp::verifier::min_bending_curve(*d, *k, angles);
        let area = combinatorial_area(&witness, angles, 1);
        assert_eq!(area, &value - &Angle::two_pi());
        // Gauss–Bonnet additivity on glued fixtures: the d vertex links
        // tile the boundary torus (χ = 0), and a cycle of bigons tubes an
        // interior edge (annulus, χ = 0); both totals are exactly zero.
        let torus_total = (0..*d).fold(Angle::zero(), |acc, i| {
            let prev = (i + d - 1) % d;
            let link = NormalCurve {
                crossings: vec![
                    DualCrossing::Crossing(prev),
                    DualCrossing::Crossing(prev),
                    DualCrossing::Ascending(prev),
                    DualCrossing::Descending(prev),
                    DualCrossing::Ascending(i),
                    DualCrossing::Descending(i),
                ],
                class: CurveClass::PunctureLoop,
            };
            &acc + &combinatorial_area(&link, angles, 1)
        });
        assert_eq!(torus_total, &Angle::two_pi().scale(0) - &Angle::zero());
        let tube_total = (0..4).fold(Angle::zero(), |acc, _| {
            let bigon = NormalCurve {
                crossings: vec![DualCrossing::Boundary; 4],
                class: CurveClass::Closed,
            };
            &acc + &combinatorial_area(&bigon, angles, 1)
        });
        assert!(tube_total.is_zero());
    }
    println!(
        "criterion 9 (zero-area fixtures on {} blocks): PASS",
        fixtures.len()
    );
}
