// Tangency along great circles and fitting `[A]` to distribution samples.

use curvlab::distribution::{
    distribution_at, fit_skew_from_samples, planted_samples, projective_angle, tangency_profile, time_grid,
    unstructured_samples,
};
use curvlab::instances::{kernel_skew, rng};
use curvlab::linalg::{basis_vector, standard_complex_structure};

pub fn run_example() -> curvlab::Result<()> {
    let j = standard_complex_structure(4)?.as_skew();
    let e = |i| basis_vector(4, i);
    let d = distribution_at(&j, &e(0))?;
    println!("D[J] at e1 has dimension {}", d.dim());

    let times = time_grid(1000);
    println!("tangent start:     {:?}", tangency_profile(&j, &e(0), &e(2), &times)?);
    println!("non-tangent start: {:?}", tangency_profile(&j, &e(0), &e(1), &times)?);

    let fit = fit_skew_from_samples(&planted_samples(&j, 40, 1)?)?;
    println!(
        "planted D[J]: angle {:.1e}, residual {:.1e}, gap {:.3}",
        projective_angle(&fit.a, &j),
        fit.residual,
        fit.gap
    );

    let a = kernel_skew(6, &mut rng(3));
    let fit = fit_skew_from_samples(&planted_samples(&a, 60, 2)?)?;
    println!("planted singular D[A], d=6: angle {:.1e}, gap {:.3}", projective_angle(&fit.a, &a), fit.gap);

    let fit = fit_skew_from_samples(&unstructured_samples(4, 40, 2, 5)?)?;
    println!("random tangents: residual {:.3}", fit.residual);
    Ok(())
}

fn main() -> curvlab::Result<()> {
    run_example()
}
