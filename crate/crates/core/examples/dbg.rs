use arborhyp::angles::{assign, Angle};
use arborhyp::classifier::montesinos_presentation;
use arborhyp::decomposer::assemble;
use arborhyp::slope::Slope;

fn sl(n: i64, d: i64) -> Slope { Slope::new(n, d).unwrap() }

fn main() {
    let p = montesinos_presentation(1, &[sl(1, 2), sl(1, 3), sl(1, 7)]);
    let d = assemble(&p).unwrap();
    let a = assign(&d).unwrap();
    for r in &d.regions {
        println!("region {} kind {:?} wedge {} near {:?}", r.index, r.kind, r.wedge(), r.near);
        if let Some(path) = &r.path {
            println!("  path {} -> {}: triangles {:?}", path.source, path.target,
                path.triangles.iter().map(|t| t.vertices).collect::<Vec<_>>());
            println!("  letters {:?}", path.letters);
        }
        for li in &r.layers {
            println!("  layer {} hinge {} new {} pivot {} bot {} top {}", li.index, li.hinge, li.new_slope, li.pivot_slope, li.bottom_slope, li.top_slope);
        }
    }
    println!("block angles: {:?}", a.blocks);
    println!("w: {:?}", a.w);
    for ec in &d.edge_classes {
        let mut total = Angle::zero();
        for s in &ec.slots {
            total = &total + &a.slot_value(s).unwrap();
        }
        let ok = total == Angle::two_pi();
        if !ok {
            println!("CLASS {} sum {} slots:", ec.id, total);
            for s in &ec.slots {
                println!("   {:?} = {}", s, a.slot_value(s).unwrap());
            }
            println!("   members: {}", ec.summary);
        }
    }
}
