//! Hermite and Smith normal forms, Hecke representatives and right divisors.

use qsk::exact::{all_right_divisors, hecke_coset_reps, hnf, sigma, snf_invariant_factors, IntMatrix, Mat2};
use qsk::pairspace::Pair;

fn main() -> qsk::Result<()> {
    let m = IntMatrix::from_rows(&[vec![2, 4], vec![1, 3]]);
    let (h, u) = hnf(&m);
    println!("HNF of [[2,4],[1,3]]: {h:?} (U = {u:?})");
    let m3 = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    println!("invariant factors: {:?}", snf_invariant_factors(&m3));

    for n in [1, 2, 6, 12] {
        let reps = hecke_coset_reps(n)?;
        println!("det {n}: {} representatives (sigma_1 = {})", reps.len(), sigma(1, n as u64));
    }

    let b = Pair::new(Mat2::new(2, 0, 0, 4), Mat2::new(0, -2, 6, 2));
    for (r, quotient) in all_right_divisors(&b) {
        println!("r = {:?}  B r^-1 = {:?}", r.0, (quotient.t1.0, quotient.t2.0));
    }
    Ok(())
}
