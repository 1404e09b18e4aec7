//! The quaternionic theta lift and every check run on it. Writes the table
//! to `$QSK_OUT_DIR` (default: the working directory).

use qsk::jacobi::JacobiRing;
use qsk::quaternionic::{
    constant_term_table, cuspidality_classifier, fj_assemble, maass_relation_check, primitive_vanishing_detector, spezialschar_test, theta_lift, Family,
};
use qsk::siegel::maass_lift;

fn main() -> qsk::Result<()> {
    let ring = JacobiRing::new(60)?;
    let phi = ring.cusp_basis(20)?.remove(0);
    let siegel = maass_lift(&phi, 200)?;
    let table = theta_lift(&siegel, 200, Family::Full)?;
    println!("weight 20 lift: {} coefficients with Q(B) <= 200", table.len());

    let maass = maass_relation_check(&table, 200)?;
    println!("Maass relations: pass = {}, checked {}", maass.pass, maass.checked);
    let sp = spezialschar_test(&table, 200);
    println!("Spezialschar: pass = {}, {} T-groups, largest {}", sp.pass, sp.groups, sp.largest_group);
    let v = primitive_vanishing_detector(&table, 50);
    if let Some(w) = v.witnesses.first() {
        println!("nonzero primitive coefficient at Q = {}: {}", w.norm, w.value);
    }
    println!("constant terms vanish: {}", constant_term_table(&table, 3, 1)?.all_zero);
    println!("Fourier-Jacobi coefficient (n,alpha) = (1,2) at S = (1,2,1): {}", fj_assemble(&table, 1, 2, (1, 2, 1))?);

    let prim = theta_lift(&siegel, 200, Family::Primitive)?;
    let rep = cuspidality_classifier(&prim, 20)?;
    println!("cuspidality: {} (slope {:?})", rep.verdict.label(), rep.growth_slope);

    let path = qsk::cli::out_dir().join("theta_lift_w20.json");
    std::fs::write(&path, serde_json::to_string_pretty(&table.to_json()).expect("json"))
        .map_err(|e| qsk::Error::Parse(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}
