//! Invariants of an integral pair `B = [T1, T2]`.

use qsk::exact::Mat2;
use qsk::pairspace::{is_pos_def, is_primitive, is_slice_primitive, psd_status, q_of_b, t_triple, Pair};

fn main() -> qsk::Result<()> {
    let pairs = [
        ("[I, J]", Pair::new(Mat2::identity(), Mat2::new(0, -1, 1, 0))),
        ("[I, (0,-3;2,-1)]", Pair::new(Mat2::identity(), Mat2::new(0, -3, 2, -1))),
        ("[2I, 2J]", Pair::new(Mat2::new(2, 0, 0, 2), Mat2::new(0, -2, 2, 0))),
        ("indefinite", Pair::new(Mat2::new(0, 1, -1, 0), Mat2::new(0, 0, 1, 1))),
        ("[(2,0;0,0),(0,1;0,0)]", Pair::new(Mat2::new(2, 0, 0, 0), Mat2::new(0, 1, 0, 0))),
    ];
    println!("{:<24} {:>14} {:>5} {:>9} {:>15} {:>8}  status", "B", "T(B)", "Q", "primitive", "slice-primitive", "pos-def");
    for (name, b) in pairs {
        let status = psd_status(&b.to_q(), 1e-9, 1)?;
        println!(
            "{name:<24} {:>14} {:>5} {:>9} {:>15} {:>8}  {}",
            format!("{:?}", t_triple(&b)),
            q_of_b(&b),
            is_primitive(&b)?,
            is_slice_primitive(&b),
            is_pos_def(&b),
            status.label()
        );
    }
    Ok(())
}
