//! Seeded random fixtures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bifiltration::Bifiltration;
use crate::grid_module::{GridModule, Point};
use crate::linalg::Field;

/// A random 1-critical bifiltration of a complex of dimension at most 2
/// with at most `max_simplices` simplices on an `n x m` grid.
pub fn random_bifiltration(seed: u64, n: usize, m: usize, max_simplices: usize) -> Bifiltration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts = rng.gen_range(1..=max_simplices.clamp(1, 8)) as u32;
    let mut simplices: Vec<(Vec<u32>, Point)> = (0..verts)
        .map(|v| (vec![v], Point::new(rng.gen_range(1..=n), rng.gen_range(1..=m))))
        .collect();
    let mut edges: Vec<Vec<u32>> = (0..verts).flat_map(|a| (a + 1..verts).map(move |b| vec![a, b])).collect();
    edges.shuffle(&mut rng);
    let budget = max_simplices.saturating_sub(simplices.len());
    let n_edges = rng.gen_range(0..=edges.len().min(budget));
    edges.truncate(n_edges);
    edges.sort();
    let mut triangles: Vec<Vec<u32>> = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        for f in &edges[i + 1..] {
            if e[0] == f[0] && edges.contains(&vec![e[1], f[1]]) {
                triangles.push(vec![e[0], e[1], f[1]]);
            }
        }
    }
    triangles.shuffle(&mut rng);
    let budget = budget - n_edges;
    let n_tri = rng.gen_range(0..=triangles.len().min(budget));
    triangles.truncate(n_tri);
    triangles.sort();
    for s in edges.into_iter().chain(triangles) {
        let faces = (0..s.len()).map(|k| {
            let mut f = s.clone();
            f.remove(k);
            f
        });
        let floor = faces
            .map(|f| simplices.iter().find(|(g, _)| *g == f).expect("face present").1)
            .reduce(Point::join)
            .expect("at least one face");
        let bump = |rng: &mut ChaCha8Rng, c: usize, top: usize| {
            if rng.gen_bool(0.5) {
                c
            } else {
                rng.gen_range(c..=top)
            }
        };
        let g = Point::new(bump(&mut rng, floor.x, n), bump(&mut rng, floor.y, m));
        simplices.push((s, g));
    }
    Bifiltration::new(simplices, n, m).expect("generated bifiltration is valid")
}

/// A uniformly random rectangle `lo <= hi` in an `n x m` grid.
pub fn random_rectangle(rng: &mut impl Rng, n: usize, m: usize) -> (Point, Point) {
    let mut side = |len: usize| {
        let a = rng.gen_range(1..=len);
        let b = rng.gen_range(1..=len);
        (a.min(b), a.max(b))
    };
    let (x0, x1) = side(n);
    let (y0, y1) = side(m);
    (Point::new(x0, y0), Point::new(x1, y1))
}

/// Direct sum of `count` random rectangle modules, with the rectangles used.
pub fn random_rectangle_module(field: Field, n: usize, m: usize, count: usize, seed: u64) -> (GridModule, Vec<(Point, Point)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rects: Vec<(Point, Point)> = (0..count).map(|_| random_rectangle(&mut rng, n, m)).collect();
    let module = rects.iter().fold(GridModule::zero(field, n, m), |acc, &(lo, hi)| {
        acc.direct_sum(&GridModule::rectangle(field, n, m, lo, hi))
            .expect("same grid")
    });
    (module, rects)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bifiltrations_are_deterministic_and_bounded() {
        for seed in 0..50 {
            let a = random_bifiltration(seed, 5, 4, 20);
            let b = random_bifiltration(seed, 5, 4, 20);
            assert_eq!(a.grades(), b.grades());
            assert!(a.len() <= 20);
            assert_eq!(a.extent(), (5, 4));
        }
    }

    #[test]
    fn rectangle_modules_have_the_sampled_dimensions() {
        let f = Field::new(3).unwrap();
        let (g, rects) = random_rectangle_module(f, 4, 5, 6, 9);
        assert_eq!(rects.len(), 6);
        for p in g.points() {
            let want = rects.iter().filter(|(lo, hi)| lo.leq(p) && p.leq(*hi)).count();
            assert_eq!(g.dim(p), want);
        }
        assert!(g.is_valid());
        assert_eq!(random_rectangle_module(f, 3, 3, 0, 1).0.total_dim(), 0);
    }
}
