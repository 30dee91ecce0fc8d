// Jacobi operators, the constant κ, and the extremal curvature λ.

use curvlab::instances::block_j;
use curvlab::isotropy::{almost_isotropy_scan, eigenspace_at, extremal_curvature, kappa_at};
use curvlab::linalg::{basis_vector, random_skew};
use curvlab::tensor::{build_model, build_r1, build_ra, jacobi_operator, Tau};

pub fn run_example() -> curvlab::Result<()> {
    let r = build_model(1.0, Tau::Plus, &block_j(&[2.0, 0.5])?)?;
    for i in 0..4 {
        let s = basis_vector(4, i);
        let spec = jacobi_operator(&r, &s)?.spectrum();
        let (kappa, mult) = kappa_at(&r, &s, 1e-9)?;
        println!(
            "s = e{}: spectrum {:?}, kappa {kappa} (x{mult}), lambda {}",
            i + 1,
            spec.values.iter().map(|v| (v * 1e12).round() / 1e12).collect::<Vec<_>>(),
            extremal_curvature(&r, kappa, &s)?
        );
    }
    let e = eigenspace_at(&r, 1.0, &basis_vector(4, 0), 1e-9)?;
    println!("kappa-eigenspace at e1 has dimension {}", e.dim());

    let scan = almost_isotropy_scan(&build_model(-2.0, Tau::Plus, &random_skew(6, 3))?, 64, 1, 1e-9)?;
    println!(
        "random model in d=6: almost isotropic {}, kappa {:.12}, worst rank residual {:e}",
        scan.is_almost_isotropic, scan.kappa, scan.worst_rank_residual
    );

    // A sum of two unrelated R_A terms is not almost isotropic.
    let broken = &build_r1(6) + &(&(&build_ra(&random_skew(6, 4)) + &build_ra(&random_skew(6, 5))) * 0.5);
    let scan = almost_isotropy_scan(&broken, 64, 1, 1e-9)?;
    println!("R1 + 0.5(R_A + R_A'): almost isotropic {}, failure {:?}", scan.is_almost_isotropic, scan.failure);
    Ok(())
}

fn main() -> curvlab::Result<()> {
    run_example()
}
