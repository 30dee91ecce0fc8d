// The four Kähler cases, and a rejection.

use curvlab::instances::{case2_instance, case3_instance, case4_instance, quaternion_j, rng};
use curvlab::kahler::{classify_kahler, commute_type, KahlerClass};
use curvlab::linalg::standard_complex_structure;
use curvlab::tensor::{build_model, build_r1, Tau};

fn describe(c: &KahlerClass) -> String {
    match c {
        KahlerClass::Case1 { kappa } => format!("case 1, kappa {kappa:.6}"),
        KahlerClass::Case2 { kappa, tau, mu1, mu2, .. } => {
            format!("case 2, kappa {kappa:.6}, tau {tau:?}, mu1 {mu1:.6}, mu2 {mu2:.6}")
        }
        KahlerClass::Case3 { kappa } => format!("case 3, kappa {kappa:.6}"),
        KahlerClass::Case4 { c, w } => format!("case 4, c {c:.6}, dim W {}", w.dim()),
    }
}

pub fn run_example() -> curvlab::Result<()> {
    let mut g = rng(5);
    let j2 = standard_complex_structure(2)?;
    println!("d=2, -0.5 R1: {}", describe(&classify_kahler(&(&build_r1(2) * -0.5), &j2, 1e-9)?));

    for inst in [case2_instance(&mut g)?, case3_instance(6, &mut g)?, case4_instance(6, &mut g)?] {
        let got = classify_kahler(&inst.model.r, &inst.j, 1e-9)?;
        println!("expected {}\n     got {}", describe(&inst.expected), describe(&got));
    }

    let j = standard_complex_structure(4)?;
    match classify_kahler(&build_r1(4), &j, 1e-9) {
        Err(e) => println!("R1 with J: {e}"),
        Ok(c) => println!("unexpected {c:?}"),
    }
    let q = quaternion_j();
    println!("quaternion-j vs J: {:?}", commute_type(&q, &j, 1e-9));
    match classify_kahler(&build_model(1.0, Tau::Plus, &q)?, &j, 1e-9) {
        Err(e) => println!("R1 + R_Q with J: {e}"),
        Ok(c) => println!("unexpected {c:?}"),
    }
    Ok(())
}

fn main() -> curvlab::Result<()> {
    run_example()
}
