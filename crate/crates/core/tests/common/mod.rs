#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rectmod::constructions::examples::{embed_bottom_left, ex3_right, hooks_vertical};
use rectmod::constructions::random::random_rectangle_module;
use rectmod::grid_module::{GridModule, Interval};
use rectmod::linalg::{rank, solve, Field, Matrix};

/// A uniformly random invertible `d x d` matrix and its inverse.
pub fn invertible(rng: &mut ChaCha8Rng, f: Field, d: usize) -> (Matrix, Matrix) {
    loop {
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.gen_range(0..f.modulus()) as i64).collect())
            .collect();
        let m = Matrix::from_rows_with_cols(f, d, &rows);
        if rank(&m) == d {
            let cols: Vec<Vec<u32>> = (0..d)
                .map(|i| {
                    let mut e = vec![0; d];
                    e[i] = 1;
                    solve(&m, &e).unwrap()
                })
                .collect();
            return (m, Matrix::from_columns(f, d, &cols));
        }
    }
}

/// The same module in random pointwise bases.
pub fn scramble(g: &GridModule, seed: u64) -> GridModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (bases, inverses): (Vec<Matrix>, Vec<Matrix>) = g.points().map(|p| invertible(&mut rng, g.field(), g.dim(p))).unzip();
    g.change_basis(&bases, &inverses)
}

/// A random direct sum of rectangles on an `n x m` grid, sometimes with a
/// copy of a hook module in the corner, in scrambled bases.
pub fn mixed_module(f: Field, n: usize, m: usize, seed: u64) -> GridModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(0..5);
    let (mut g, _) = random_rectangle_module(f, n, m, count, seed);
    if n >= 3 && m >= 2 && rng.gen_bool(0.3) {
        g = g.direct_sum(&embed_bottom_left(&ex3_right(f), n, m)).unwrap();
    }
    if n >= 2 && m >= 3 && rng.gen_bool(0.3) {
        g = g.direct_sum(&embed_bottom_left(&hooks_vertical(f), n, m)).unwrap();
    }
    scramble(&g, seed ^ 0x5eed)
}

/// A direct sum of interval modules of the 2x2 square with the given
/// multiplicities (in [`Interval::ALL`] order).
pub fn square_sum(f: Field, mult: &[usize]) -> GridModule {
    let mut g = GridModule::zero(f, 2, 2);
    for (&i, &k) in Interval::ALL.iter().zip(mult) {
        for _ in 0..k {
            g = g.direct_sum(&i.module(f)).unwrap();
        }
    }
    g
}
