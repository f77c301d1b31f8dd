//! Shared test support: seeded random generators for presentations and
//! angle data.

use arborhyp::classifier::{montesinos_presentation, twobridge_presentation};
use arborhyp::presentation::{LinkPresentation, PortRef};
use arborhyp::slope::{GluingMap, Slope};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
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

/// Random reduced slope with denominator in [2, max_den].
pub fn random_tangle_slope(r: &mut ChaCha8Rng, max_den: i64) -> Slope {
    loop {
        let q = r.gen_range(2..=max_den);
        let p = r.gen_range(1..(3 * q));
        if gcd(p, q) == 1 {
            return Slope::new(p, q).unwrap();
        }
    }
}

/// Random unimodular matrix as a short product of twists and the swap.
pub fn random_unimodular(r: &mut ChaCha8Rng) -> GluingMap {
    let mut m = GluingMap::identity();
    for _ in 0..r.gen_range(1..4) {
        let t = GluingMap::twist(r.gen_range(-3..=3));
        m = m.compose(&t).unwrap();
        if r.gen_bool(0.6) {
            m = m.compose(&GluingMap::swap()).unwrap();
        }
    }
    m
}

/// A random presentation drawn from a mix of shapes. Not necessarily a
/// candidate; the caller reduces and classifies.
pub fn random_presentation(r: &mut ChaCha8Rng, max_den: i64) -> LinkPresentation {
    match r.gen_range(0..5) {
        0 => {
            // Two-bridge.
            twobridge_presentation(Slope::infinity(), random_tangle_slope(r, max_den))
        }
        1 | 2 => {
            // Montesinos star, degree 3 to 5.
            let d = r.gen_range(3..=5);
            let k = r.gen_range(-3..=3);
            let slopes: Vec<Slope> = (0..d).map(|_| random_tangle_slope(r, max_den)).collect();
            montesinos_presentation(k, &slopes)
        }
        3 => {
            // Star with two half-integer tangles: reduces through the
            // augmentation step.
            let k = r.gen_range(-3..=3);
            let s3 = random_tangle_slope(r, max_den);
            montesinos_presentation(
                k,
                &[
                    Slope::new(r.gen_range(0..3) * 2 + 1, 2).unwrap(),
                    Slope::new(1, 2).unwrap(),
                    s3,
                ],
            )
        }
        _ => {
            // Two blocks joined by a random junction, tangles elsewhere.
            let mut p = LinkPresentation::new();
            let d1 = r.gen_range(3..=4);
            let d2 = r.gen_range(3..=4);
            let x = p.add_bracelet(LinkPresentation::band(d1, 0, r.gen_range(-2..=2)));
            let y = p.add_bracelet(LinkPresentation::band(d2, 0, r.gen_range(-2..=2)));
            p.glue(
                PortRef {
                    bracelet: x,
                    port: 0,
                },
                PortRef {
                    bracelet: y,
                    port: 0,
                },
                random_unimodular(r),
            );
            for (host, d) in [(x, d1), (y, d2)] {
                for port in 1..d {
                    let t = p.add_bracelet(LinkPresentation::tangle(random_tangle_slope(
                        r, max_den,
                    )));
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
            }
            p
        }
    }
}

/// Random band-angle vectors (a, b) satisfying the admissible range of a
/// block: 0 ≤ a, b < π and 0 < a + b ≤ π, all exact rationals.
pub fn random_band_angles(
    r: &mut ChaCha8Rng,
    degree: usize,
) -> (Vec<arborhyp::angles::Angle>, Vec<arborhyp::angles::Angle>) {
    use arborhyp::angles::Angle;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for _ in 0..degree {
        // Denominator up to 24, ensuring a + b ≤ π strictly positive.
        let den = r.gen_range(4..=24i64);
        let ai = r.gen_range(0..den);
        let max_b = den - ai;
        let bi = r.gen_range(if ai == 0 { 1 } else { 0 }..=max_b);
        a.push(Angle::pi_frac(ai, den));
        b.push(Angle::pi_frac(bi, den));
    }
    (a, b)
}
