// Reading `(κ, τ, A)` back off a tensor.

use curvlab::instances::{block_disjoint_skew, kernel_skew, random_model, rng, SkewKind};
use curvlab::isotropy::recover_decomposition;
use curvlab::tensor::build_r1;

pub fn run_example() -> curvlab::Result<()> {
    let mut g = rng(11);
    for kind in [SkewKind::Gaussian, SkewKind::BlockDisjoint, SkewKind::WithKernel] {
        let m = random_model(6, kind, false, &mut g);
        let dec = recover_decomposition(&m.r, 1e-9)?;
        let sign_err = (dec.a.matrix() - m.a.matrix()).amax().min((dec.a.matrix() + m.a.matrix()).amax());
        println!(
            "{kind:?}: kappa {:+.6} (true {:+.6}), tau {:?} (true {:?}), |A - ±A_true| {:.1e}, residual {:.1e}",
            dec.kappa, m.kappa, dec.tau, m.tau, sign_err, dec.residual
        );
    }

    let dec = recover_decomposition(&(&build_r1(5) * 3.0), 1e-9)?;
    println!("3 R1 in d=5: kappa {}, tau {:?}, A zero {}", dec.kappa, dec.tau, dec.a.is_zero());

    // Blocks that share no basis index: the relative sign comes from mixed probes.
    let a = block_disjoint_skew(8, &mut g);
    let r = curvlab::tensor::build_model(0.5, curvlab::tensor::Tau::Minus, &a)?;
    println!("block-disjoint d=8: residual {:.1e}", recover_decomposition(&r, 1e-9)?.residual);
    let a = kernel_skew(8, &mut g);
    println!("kernel dimension of a generated A: {}", a.kernel(1e-10).dim());
    Ok(())
}

fn main() -> curvlab::Result<()> {
    run_example()
}
