//! Canonical forms: vectors of the split lattice of signature (3,3), rank
//! three pairs, and the rank of a pair viewed as a 2x2x2 cube.

use qsk::exact::Mat2;
use qsk::orbits::{rank_int, reduce_pair_rank3, reduce_v33, CubeTransform, V33Vector};
use qsk::pairspace::{q_of_b, t_triple, Pair};

fn main() -> qsk::Result<()> {
    for y in [[0, 0, 6, 4, 0, 0], [3, 0, 5, -2, 7, 1], [0, 2, 0, 0, 4, 0]] {
        let c = reduce_v33(&V33Vector(y))?;
        println!("{y:?}: {:?} n = {}, alpha = {}, representative {:?}", c.kind, c.n, c.alpha, c.vector().0);
    }

    let base = Pair::new(Mat2::identity(), Mat2::new(0, -1, 1, 0));
    let scramble = CubeTransform { left: Mat2::new(2, 1, 1, 1), right: Mat2::new(1, -3, 0, 1), pair: Mat2::new(5, 2, 2, 1) };
    let b = scramble.apply(&base);
    let red = reduce_pair_rank3(&b)?;
    println!("scrambled B = {:?}, Q = {}", (b.t1.0, b.t2.0), q_of_b(&b));
    println!("canonical (alpha, n, m, r) = ({}, {}, {}, {}), T = {:?}", red.alpha, red.n, red.m, red.r, t_triple(&red.pair()));

    let examples = [
        Pair::new(Mat2::new(1, 0, 0, 0), Mat2::zero()),
        Pair::new(Mat2::new(1, 0, 0, 0), Mat2::new(0, 0, 0, 1)),
        Pair::new(Mat2::new(1, 0, 0, 0), Mat2::new(0, 1, 1, 0)),
        base,
    ];
    for e in &examples {
        println!("rank of {:?} = {}", (e.t1.0, e.t2.0), rank_int(e)?);
    }
    Ok(())
}
