//! The Maass lift to genus two and its Fourier-Jacobi view.

use qsk::jacobi::JacobiRing;
use qsk::siegel::{fj_slice, maass_lift, mprime_hecke_classifier, MPrimeCoeffTable};

fn main() -> qsk::Result<()> {
    let ring = JacobiRing::new(60)?;
    let phi = ring.cusp_basis(10)?.remove(0);
    let s = maass_lift(&phi, 240)?;
    println!("weight {} Siegel cusp form, bound {}", s.weight, s.bound);
    for t in [(1, 1, 1), (1, 0, 1), (1, 1, 2), (2, 2, 2), (2, 0, 3), (3, 3, 3)] {
        println!("  B[{t:?}] = {}", s.get(t)?);
    }
    let a = MPrimeCoeffTable::from_siegel(&s, 20)?;
    let slice = fj_slice(&a, 1)?;
    let first: Vec<String> = slice.iter().take(6).map(|((n, r), v)| format!("({n},{r}):{v}")).collect();
    println!("first Fourier-Jacobi slice: {}", first.join(" "));
    let rep = mprime_hecke_classifier(&a, 10)?;
    println!("Hecke-bound classifier: {} (tail/burn-in ratio {:.2e}/{:.2e})", rep.verdict.label(), rep.tail_max_ratio, rep.burn_in_max_ratio);
    Ok(())
}
