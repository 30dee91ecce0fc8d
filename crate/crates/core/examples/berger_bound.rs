// The mixed-curvature bound and the Kähler identities.

use curvlab::instances::{block_j, quaternion_j};
use curvlab::kahler::{identity_residuals, relations_residuals};
use curvlab::linalg::{basis_vector, standard_complex_structure};
use curvlab::tensor::{berger_check, build_model, build_r1, build_ra, mixed_component, Tau};

pub fn run_example() -> curvlab::Result<()> {
    let e: Vec<_> = (0..4).map(|i| basis_vector(4, i)).collect();
    let frame = [&e[0], &e[1], &e[2], &e[3]];
    let j = standard_complex_structure(4)?;
    let r = &build_r1(4) + &build_ra(&j.as_skew());
    println!(
        "R1 + R_J: mixed component {}, slack against [1, 4] {}",
        mixed_component(&r, frame),
        berger_check(&r, frame, 1.0, 4.0)?
    );

    // Frame (u, Au, Ju, JAu) for the anticommuting A.
    let q = quaternion_j();
    let rq = build_model(1.0, Tau::Plus, &q)?;
    let qframe = [&e[0], &e[2], &e[1], &e[3]];
    println!(
        "R1 + R_Q: mixed component {}, slack {}",
        mixed_component(&rq, qframe),
        berger_check(&rq, qframe, 1.0, 4.0)?
    );

    let (one, two) = identity_residuals(1.0, 1.0, &block_j(&[2.0, 0.5])?, &j, &e[0], &e[2])?;
    println!("identities, Kähler case: {one:.1e} {two:.1e}");
    let (one, two) = identity_residuals(1.0, 1.0, &q, &j, &e[0], &e[2])?;
    println!("identities, anticommuting A: {one} {two}");
    let (three, four) = relations_residuals(1.0, 1.0, 3.0, 3.0, &e[0], &e[2], &j)?;
    println!("relations with mu1 mu2 != kappa/tau: {three} {four}");
    Ok(())
}

fn main() -> curvlab::Result<()> {
    run_example()
}
