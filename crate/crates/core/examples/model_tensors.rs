// Building `κR₁ + τR_A` and checking the curvature identities.

use curvlab::instances::block_j;
use curvlab::linalg::{basis_vector, random_skew, standard_complex_structure};
use curvlab::tensor::{build_model, build_r1, build_ra, ricci, sectional, validate_symmetries, Tau};

pub fn run_example() -> curvlab::Result<()> {
    let e = |i| basis_vector(4, i);

    let r1 = build_r1(4);
    println!("R1: sec(e1,e2) = {}", sectional(&r1, &e(0), &e(1))?);

    let j = standard_complex_structure(4)?;
    let rj = build_ra(&j.as_skew());
    println!("R_J(e1,e2,e2,e1) = {}", rj.get(0, 1, 1, 0));

    // κ = 1, τ = 1, A = J scaled by 2 and 1/2 on the two complex lines.
    let a = block_j(&[2.0, 0.5])?;
    let r = build_model(1.0, Tau::Plus, &a)?;
    let rep = validate_symmetries(&r, Some(&j))?;
    println!(
        "model: antisymmetry {:e}, pair exchange {:e}, Bianchi {:e}, Kähler {:e}",
        rep.antisymmetry_residual,
        rep.pair_exchange_residual,
        rep.bianchi_residual,
        rep.kahler_residual.unwrap_or(f64::NAN)
    );
    println!("model: sec(e1,e2) = {}, sec(e1,e3) = {}", sectional(&r, &e(0), &e(1))?, sectional(&r, &e(0), &e(2))?);
    println!("model: Ric(e1,e1) = {}", ricci(&r).matrix()[(0, 0)]);

    // The normalization rejects τ = 0 with A ≠ 0.
    match build_model(2.0, Tau::Zero, &random_skew(4, 1)) {
        Err(err) => println!("tau = 0 with A ≠ 0: {err}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

fn main() -> curvlab::Result<()> {
    run_example()
}
