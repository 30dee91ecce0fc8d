// Einstein constants and nullity spaces.

use curvlab::instances::{block_j, case4_instance, rng};
use curvlab::kahler::{einstein_check, KahlerClass};
use curvlab::linalg::standard_complex_structure;
use curvlab::tensor::{build_model, build_r1, build_ra, nullity_space, CurvatureTensor, Tau};

pub fn run_example() -> curvlab::Result<()> {
    let j = standard_complex_structure(6)?;
    let r = &build_r1(6) + &build_ra(&j.as_skew());
    println!("R1 + R_J in d=6: {:?}", einstein_check(&r, 1e-9));
    let r = build_model(1.0, Tau::Plus, &block_j(&[2.0, 0.5])?)?;
    println!("unequal blocks: {:?}", einstein_check(&r, 1e-9));
    println!("zero tensor: {:?}", einstein_check(&CurvatureTensor::zeros(4), 1e-9));

    let inst = case4_instance(8, &mut rng(2))?;
    let n = nullity_space(&inst.model.r);
    if let KahlerClass::Case4 { w, .. } = &inst.expected {
        println!(
            "c R_(J pi_W) in d=8: nullity dimension {}, angle to W-perp {:.1e}",
            n.dim(),
            n.max_principal_angle(&w.complement())
        );
    }
    println!("R1: nullity dimension {}", nullity_space(&build_r1(4)).dim());
    Ok(())
}

fn main() -> curvlab::Result<()> {
    run_example()
}
