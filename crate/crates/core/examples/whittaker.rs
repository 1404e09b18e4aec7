//! Generalized Whittaker functions: the beta functional, point values,
//! Bessel line integrals and the archimedean Fourier-Jacobi integral.

use qsk::exact::Mat2;
use qsk::pairspace::Pair;
use qsk::whittaker::linalg::ident8;
use qsk::whittaker::{arch_functional_form, beta, bessel_line_fit, beta_zero_search, whittaker_eval_real, KNorm};

fn main() -> qsk::Result<()> {
    let b = Pair::new(Mat2([[1.0, 0.0], [0.0, 1.0]]), Mat2([[0.0, -1.0], [1.0, 0.0]]));
    println!("beta(1) for [I, (0,-1;1,0)] = {}", beta(&b, &ident8())?);
    let w = whittaker_eval_real(&b, &ident8(), 2, KNorm::Scaled)?;
    for v in -2..=2 {
        println!("  W component v = {v:>2}: {:.6e}", w.get(v));
    }
    let indefinite = Pair::new(Mat2([[1.0, 0.0], [0.0, -1.0]]), Mat2([[0.0, 1.0], [1.0, 0.0]]));
    if let Some(wit) = beta_zero_search(&indefinite, 1e-9, 3) {
        println!("indefinite pair: |beta| = {:.1e} at a Levi element", wit.beta_abs);
    }
    for v in 0..=3 {
        let fit = bessel_line_fit(v, &[0.5, 1.0, 2.0, 4.0], KNorm::Scaled)?;
        println!("I({v}, c): phase ({:.3}, {:.3}), kappa {:.6}, lambda {:.6}", fit.phase[0], fit.phase[1], fit.kappa, fit.lambda);
    }
    for (alpha, n) in [(2, 1), (4, 1), (2, 2)] {
        let c = arch_functional_form(alpha, n, (1, 1, 0), 2, KNorm::Scaled)?;
        println!("archimedean integral (alpha, n) = ({alpha}, {n}): t-ratio {:.1e}, rate {:.1e}, phase {:.1e}", c.t_ratio, c.rate, c.phase);
    }
    Ok(())
}
