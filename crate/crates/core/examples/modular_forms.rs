//! Exact q-expansions: Eisenstein series, the discriminant and cusp bases.

use num_rational::BigRational;
use qsk::qseries::{cusp_basis, delta, dim_mk, dim_sk, eisenstein, is_in_space};

fn main() -> qsk::Result<()> {
    let n = 12;
    let e4 = eisenstein(4, n)?;
    let e6 = eisenstein(6, n)?;
    let d = delta(n)?;
    let lhs = e4.pow(3).sub(&e6.pow(2));
    let rhs = d.scale(&BigRational::from_integer(1728.into()));
    println!("E4^3 - E6^2 == 1728 Delta through q^{n}: {}", lhs == rhs);
    println!("Delta: {:?}", d.coeffs().iter().take(8).map(|c| c.to_string()).collect::<Vec<_>>());
    for k in (12..=38).step_by(2) {
        println!("weight {k:>2}: dim M = {}, dim S = {}, cusp basis size {}", dim_mk(k), dim_sk(k), cusp_basis(k as u32, 10)?.len());
    }
    let cert = is_in_space(&e4.mul(&e6), 10)?;
    println!("E4 E6 in M_10: {} (checked through q^{})", cert.in_space, cert.checked_through);
    Ok(())
}
