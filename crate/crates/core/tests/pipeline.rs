use arborhyp::angles::assign;
use arborhyp::classifier::{montesinos_presentation, twobridge_presentation};
use arborhyp::decomposer::assemble;
use arborhyp::slope::Slope;
use arborhyp::verifier::verify;

fn sl(n: i64, d: i64) -> Slope {
    Slope::new(n, d).unwrap()
}

#[test]
fn figure_eight_end_to_end() {
    let p = twobridge_presentation(Slope::infinity(), sl(2, 5));
    let d = assemble(&p).unwrap();
    let a = assign(&d).unwrap();
    let rep = verify(&d, &a).unwrap();
    assert!(rep.edge_sums.ok, "edge sums: {:?}", rep.edge_sums.offending);
    assert!(rep.tets_ok);
    assert!(rep.pass);
}

#[test]
fn pretzel_237_end_to_end() {
    let p = montesinos_presentation(1, &[sl(1, 2), sl(1, 3), sl(1, 7)]);
    let d = assemble(&p).unwrap();
    let a = assign(&d).unwrap();
    let rep = verify(&d, &a).unwrap();
    assert!(rep.edge_sums.ok, "edge sums: {:?}", rep.edge_sums.offending);
    assert!(rep.tets_ok, "tets: {:?}", rep.tet_failures);
    for b in &rep.block_reports {
        assert!(b.bending_ok, "bending: {} {:?}", b.min_bending, b.messages);
    }
    assert!(rep.pass);
}

use arborhyp::classifier::{reduce_and_classify, Verdict};
use arborhyp::presentation::{LinkPresentation, PortRef};
use arborhyp::slope::GluingMap;

fn run_candidate(p: &LinkPresentation) {
    let (_, cls) = reduce_and_classify(p).unwrap();
    for c in cls {
        if matches!(c.verdict, Verdict::Candidate) {
            let cand = c.presentation.unwrap();
            let d = assemble(&cand).unwrap();
            let a = assign(&d).unwrap_or_else(|e| panic!("assign failed: {e:?}"));
            let rep = verify(&d, &a).unwrap();
            assert!(rep.pass, "verification failed: edge {:?}, tets {:?}, blocks {:?}",
                rep.edge_sums.offending, rep.tet_failures,
                rep.block_reports.iter().filter(|b| !b.bending_ok || !b.vertex_sums_ok || !b.local_convexity_ok).map(|b| b.messages.clone()).collect::<Vec<_>>());
        }
    }
}

#[test]
fn augmented_candidate_end_to_end() {
    // Reduces through augmentation to an augmented 1-bracelet + tangle.
    run_candidate(&montesinos_presentation(-2, &[sl(1, 2), sl(1, 2), sl(1, 2)]));
    run_candidate(&montesinos_presentation(3, &[sl(1, 2), sl(1, 2), sl(2, 7)]));
}

#[test]
fn delicate_star_tables_end_to_end() {
    // Degree 3, deck 1, denominators (3,3,3) with a numerator-2 slope:
    // the explicit small-parameter table case.
    run_candidate(&montesinos_presentation(1, &[sl(1, 3), sl(1, 3), sl(2, 3)]));
    // x1 = 2 branch: (2, 3, 7)-denominators with a numerator >= 2.
    run_candidate(&montesinos_presentation(1, &[sl(1, 2), sl(1, 3), sl(2, 7)]));
    run_candidate(&montesinos_presentation(1, &[sl(1, 2), sl(2, 3), sl(2, 5)]));
    // Mirrored delicate case: deck parameter 2 = reflected 1.
    run_candidate(&montesinos_presentation(2, &[sl(1, 3), sl(1, 3), sl(2, 3)]));
    // Steep family: deck 0 and deck 3.
    run_candidate(&montesinos_presentation(0, &[sl(1, 3), sl(2, 3), sl(3, 4)]));
    run_candidate(&montesinos_presentation(3, &[sl(1, 3), sl(2, 3), sl(3, 4)]));
    // Degree 4 and 5 stars.
    run_candidate(&montesinos_presentation(1, &[sl(1, 2), sl(1, 2), sl(1, 2), sl(1, 2)]));
    run_candidate(&montesinos_presentation(2, &[sl(1, 2), sl(1, 2), sl(1, 2), sl(1, 3)]));
    run_candidate(&montesinos_presentation(2, &[sl(1, 2), sl(1, 3), sl(2, 5), sl(3, 7), sl(1, 2)]));
}

#[test]
fn two_block_trees_end_to_end() {
    // Product region between two degree-3 blocks.
    let mut p = LinkPresentation::new();
    let x = p.add_bracelet(LinkPresentation::band(3, 0, 0));
    let y = p.add_bracelet(LinkPresentation::band(3, 0, 1));
    let m = GluingMap::basis_to_infinity(&sl(2, 5)).unwrap().inverse().unwrap();
    p.glue(PortRef { bracelet: x, port: 0 }, PortRef { bracelet: y, port: 0 }, m);
    for (host, port, s) in [(x, 1, sl(1, 3)), (x, 2, sl(2, 5)), (y, 1, sl(1, 2)), (y, 2, sl(3, 7))] {
        let t = p.add_bracelet(LinkPresentation::tangle(s));
        p.glue(PortRef { bracelet: host, port }, PortRef { bracelet: t, port: 0 }, GluingMap::identity());
    }
    run_candidate(&p);

    // Direct gluing (wedge one junction).
    let mut p = LinkPresentation::new();
    let x = p.add_bracelet(LinkPresentation::band(3, 0, 0));
    let y = p.add_bracelet(LinkPresentation::band(3, 0, 0));
    p.glue(PortRef { bracelet: x, port: 0 }, PortRef { bracelet: y, port: 0 }, GluingMap::swap());
    for (host, port, s) in [(x, 1, sl(1, 3)), (x, 2, sl(2, 5)), (y, 1, sl(1, 2)), (y, 2, sl(3, 7))] {
        let t = p.add_bracelet(LinkPresentation::tangle(s));
        p.glue(PortRef { bracelet: host, port }, PortRef { bracelet: t, port: 0 }, GluingMap::identity());
    }
    run_candidate(&p);
}

#[test]
fn two_bridge_family_end_to_end() {
    for (n, d) in [(2, 5), (3, 7), (5, 12), (7, 10), (4, 11), (5, 13)] {
        run_candidate(&twobridge_presentation(Slope::infinity(), sl(n, d)));
    }
}
