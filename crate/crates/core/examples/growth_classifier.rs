//! Cusp versus non-cusp by coefficient growth against the Hecke bound.

use num_rational::BigRational;
use qsk::jacobi::{cusp_classifier, JacobiRing};
use qsk::pairspace::q_of_b;
use qsk::quaternionic::{cuspidality_classifier, Family, QuatCoeffTable};

fn main() -> qsk::Result<()> {
    let ring = JacobiRing::new(501)?;
    for (name, phi, ell) in [("phi_10,1", ring.phi10_1(), 10), ("phi_12,1", ring.phi12_1(), 12), ("E4 E6,1", ring.noncusp_weight10(), 10)] {
        let r = cusp_classifier(&phi, ell, 2000)?;
        println!("{name:<9} {:<22} slope {:?}", r.verdict.label(), r.growth_slope.map(|s| (s * 1000.0).round() / 1000.0));
    }
    let synthetic = QuatCoeffTable::from_fn(20, 400, Family::Primitive, |b| BigRational::from_integer(q_of_b(b).into()).pow(20));
    let r = cuspidality_classifier(&synthetic, 20)?;
    println!("Q(B)^20   {:<22} slope {:?}", r.verdict.label(), r.growth_slope);
    Ok(())
}
