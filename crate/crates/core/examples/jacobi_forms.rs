//! Index-one Jacobi forms: generators, cusp bases, Taylor coefficients and
//! the modular transformation law.

use num_complex::Complex64 as C64;
use qsk::exact::Mat2;
use qsk::jacobi::{first_nonvanishing_nu, taylor_lambda, transformation_check, JacobiRing};
use qsk::qseries::dim_sk;

fn main() -> qsk::Result<()> {
    let ring = JacobiRing::new(42)?;
    let phi10 = ring.phi10_1();
    println!("phi_10,1 coefficients c(n, r), n <= 3:");
    for n in 0..=3 {
        let row: Vec<String> = (-3..=3).map(|r| phi10.coeff(n, r).map(|c| c.to_string()).unwrap_or_default()).collect();
        println!("  n = {n}: {row:?}");
    }
    let s = Mat2::new(0, -1, 1, 0);
    for ell in (10..=20).step_by(2) {
        let basis = ring.cusp_basis(ell)?;
        print!("weight {ell}: dim {} (dim S_{} = {})", basis.len(), 2 * ell - 2, dim_sk(2 * ell - 2));
        for f in &basis {
            let nu0 = first_nonvanishing_nu(f, 20)?.unwrap_or(0);
            let lam = taylor_lambda(f, nu0, 20)?;
            let res = transformation_check(f, &s, C64::new(0.0, 2.0), C64::new(0.1, 0.0), 40, 1.0, 1e-8)?;
            print!("; {}: nu0 = {nu0}, lambda leading {}, S-residual {:.1e}", f.name, lam.series.coeff(1)?, res.residual);
        }
        println!();
    }
    Ok(())
}
