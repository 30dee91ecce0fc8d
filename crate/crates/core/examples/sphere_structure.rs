// How `D[A]` splits along a great circle from the kernel sphere to the range sphere.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

use curvlab::distribution::{sphere_structure_check, SphereFrame};
use curvlab::instances::j_on;
use curvlab::linalg::{basis_vector, standard_complex_structure, Subspace};

pub fn run_example() -> curvlab::Result<()> {
    let e = |i| basis_vector(4, i);
    let j = standard_complex_structure(4)?;
    let w = Subspace::new(4, vec![e(0), e(1)])?;
    let a = j_on(&j, &w)?;

    println!("k=e3, m=e1, T=pi/4: angle {:.1e}", sphere_structure_check(&a, &e(2), &e(0), FRAC_PI_4)?);
    println!("k=e4, m=e2, T=pi/6: angle {:.1e}", sphere_structure_check(&a, &e(3), &e(1), FRAC_PI_6)?);

    let f = SphereFrame::new(&a, &e(2), &e(0))?;
    println!(
        "K in D_m: {:.1e}, M in D_k: {:.1e}, codimension of D_m in T_m S_M: {}",
        f.kernel_in_dm(),
        f.range_in_dk(),
        f.tangent_codimension()
    );

    match sphere_structure_check(&j.as_skew(), &e(0), &e(1), 0.3) {
        Err(err) => println!("nondegenerate A: {err}"),
        Ok(x) => println!("unexpected {x}"),
    }
    Ok(())
}

fn main() -> curvlab::Result<()> {
    run_example()
}
