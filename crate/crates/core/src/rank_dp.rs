//! The rank invariant of a module from a free resolution, by prefix-count
//! dynamic programming over the grid, and 1-parameter barcodes.

use rayon::prelude::*;

use crate::error::{ModuleError, ResolutionError};
use crate::grid_module::{GridModule, Point, RankInvariant};
use crate::resolution::FreeResolution;

/// How much of the resolution enters the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// `#{i : grade(gamma_i) <= s}` only.
    Generators,
    /// Generators minus relations.
    Relations,
    /// Generators minus relations plus relations on relations.
    All,
}

/// Signed counts for every pair of grid points (comparable or not).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedTable {
    n: usize,
    m: usize,
    generators: Vec<i64>,
    /// `corrections[idx(t) * n * m + idx(s)]`
    corrections: Vec<i32>,
}

impl SignedTable {
    fn idx(&self, p: Point) -> usize {
        (p.y - 1) * self.n + (p.x - 1)
    }

    pub fn extent(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn get(&self, s: Point, t: Point) -> i64 {
        let k = self.n * self.m;
        self.generators[self.idx(s)] + self.corrections[self.idx(t) * k + self.idx(s)] as i64
    }
}

/// In-place 2-D prefix sums of a row-major `n x m` table (x fastest).
fn prefix_2d<T: Copy + std::ops::AddAssign + std::ops::Sub<Output = T> + std::ops::Add<Output = T>>(
    table: &mut [T],
    n: usize,
    m: usize,
) {
    for y in 0..m {
        for x in 0..n {
            let i = y * n + x;
            if x > 0 {
                let left = table[i - 1];
                table[i] += left;
            }
            if y > 0 {
                let below = table[i - n];
                table[i] += below;
            }
            if x > 0 && y > 0 {
                let diag = table[i - n - 1];
                table[i] = table[i] - diag;
            }
        }
    }
}

/// The dynamic-programming tables up to `stage`.
pub fn signed_rank_table(r: &FreeResolution, stage: Stage) -> Result<SignedTable, ResolutionError> {
    let (n, m) = r.extent();
    let k = n * m;
    let idx = |p: Point| (p.y - 1) * n + (p.x - 1);

    let mut generators = vec![0i64; k];
    for &g in r.gens().grades() {
        generators[idx(g)] += 1;
    }
    prefix_2d(&mut generators, n, m);

    let mut corrections = vec![0i32; k * k];
    if stage != Stage::Generators {
        for (lub, &grade) in r.relation_lubs()?.into_iter().zip(r.rels().grades()) {
            corrections[idx(grade) * k + idx(lub)] -= 1;
        }
    }
    if stage == Stage::All {
        for (lub, &grade) in r.relrel_lubs()?.into_iter().zip(r.relrels().grades()) {
            corrections[idx(grade) * k + idx(lub)] += 1;
        }
    }
    if stage != Stage::Generators && k > 0 {
        // over s, independently for every t
        corrections.par_chunks_mut(k).for_each(|row| prefix_2d(row, n, m));
        // over t, one whole row of s values at a time
        for ty in 0..m {
            for tx in 0..n {
                let i = ty * n + tx;
                let (before, rest) = corrections.split_at_mut(i * k);
                let row = &mut rest[..k];
                let left = (tx > 0).then(|| &before[(i - 1) * k..i * k]);
                let below = (ty > 0).then(|| &before[(i - n) * k..(i - n + 1) * k]);
                let diag = (tx > 0 && ty > 0).then(|| &before[(i - n - 1) * k..(i - n) * k]);
                row.par_iter_mut().enumerate().for_each(|(j, v)| {
                    if let Some(l) = left {
                        *v += l[j];
                    }
                    if let Some(b) = below {
                        *v += b[j];
                    }
                    if let Some(d) = diag {
                        *v -= d[j];
                    }
                });
            }
        }
    }
    Ok(SignedTable {
        n,
        m,
        generators,
        corrections,
    })
}

/// `r(s,t) = #{gamma <= s} - #{eta : lub <= s, grade <= t} + #{zeta : lub <= s, grade <= t}`.
pub fn rank_from_resolution(r: &FreeResolution) -> Result<RankInvariant, ResolutionError> {
    let table = signed_rank_table(r, Stage::All)?;
    let (n, m) = r.extent();
    let mut out = RankInvariant::zeros(n, m);
    for (s, t) in out.pairs().collect::<Vec<_>>() {
        let value = table.get(s, t);
        if value < 0 {
            return Err(ResolutionError::NegativeRank { s, t, value });
        }
        out.set(s, t, value as u32);
    }
    Ok(out)
}

/// A bar `[s, t]` of a 1-parameter module with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bar1d {
    pub start: usize,
    pub end: usize,
    pub mult: u32,
}

/// Barcode of a module on an `n x 1` grid by inclusion-exclusion on its ranks.
pub fn rank_1d(module: &GridModule) -> Result<Vec<Bar1d>, ModuleError> {
    let (n, m) = module.extent();
    if m != 1 {
        return Err(ModuleError::NotOneParameter(n, m));
    }
    let r = module.rank_invariant_naive();
    let r = |s: isize, t: isize| r.value(s, 1, t, 1);
    let mut bars = Vec::new();
    for s in 1..=n as isize {
        for t in s..=n as isize {
            let value = r(s, t) - r(s - 1, t) - r(s, t + 1) + r(s - 1, t + 1);
            if value < 0 {
                return Err(ModuleError::NegativeBar {
                    s: s as usize,
                    t: t as usize,
                    value,
                });
            }
            if value > 0 {
                bars.push(Bar1d {
                    start: s as usize,
                    end: t as usize,
                    mult: value as u32,
                });
            }
        }
    }
    Ok(bars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifiltration::Bifiltration;
    use crate::constructions::examples::ex1;
    use crate::constructions::random::random_bifiltration;
    use crate::linalg::{Field, Matrix};
    use crate::resolution::free_resolution;

    fn pt(x: usize, y: usize) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn single_free_generator() {
        let f = Field::gf2();
        let r = FreeResolution::new(
            f,
            4,
            4,
            vec![pt(1, 1)],
            vec![],
            vec![],
            Matrix::zeros(f, 1, 0),
            Matrix::zeros(f, 0, 0),
        )
        .unwrap();
        let rank = rank_from_resolution(&r).unwrap();
        assert!(rank.entries().all(|(_, _, v)| v == 1));
    }

    #[test]
    fn merge_fixture() {
        let f = Bifiltration::new(vec![(vec![0], pt(1, 2)), (vec![1], pt(2, 1)), (vec![0, 1], pt(2, 2))], 2, 2).unwrap();
        let r = rank_from_resolution(&free_resolution(&f, Field::gf2(), 0).unwrap()).unwrap();
        assert_eq!(r.get(pt(2, 1), pt(2, 2)), 1);
        assert_eq!(r.get(pt(2, 2), pt(2, 2)), 1);
        assert_eq!(r.get(pt(1, 2), pt(2, 2)), 1);
        assert_eq!(r.get(pt(1, 1), pt(2, 2)), 0);
        assert_eq!(r, f.homology_module(Field::gf2(), 0).rank_invariant_naive());
    }

    #[test]
    fn naive_relations_would_overcount() {
        // u at (1,1), v at (3,1), w at (1,3); edges uv at (3,1) and vw at (3,3)
        let f = Bifiltration::new(
            vec![
                (vec![0], pt(1, 1)),
                (vec![1], pt(3, 1)),
                (vec![2], pt(1, 3)),
                (vec![0, 1], pt(3, 1)),
                (vec![1, 2], pt(3, 3)),
            ],
            3,
            3,
        )
        .unwrap();
        let r = rank_from_resolution(&free_resolution(&f, Field::gf2(), 0).unwrap()).unwrap();
        assert_eq!(r.get(pt(1, 3), pt(3, 3)), 1);
        assert_eq!(r, f.homology_module(Field::gf2(), 0).rank_invariant_naive());
    }

    #[test]
    fn rectangle_sum_fixture() {
        // two components: one born at (1,1), one at (2,2) dying into it at (3,3)
        let f = Bifiltration::new(vec![(vec![0], pt(1, 1)), (vec![1], pt(2, 2)), (vec![0, 1], pt(3, 3))], 3, 3).unwrap();
        let r = rank_from_resolution(&free_resolution(&f, Field::gf2(), 0).unwrap()).unwrap();
        let fd = Field::gf2();
        let expected = GridModule::rectangle(fd, 3, 3, pt(1, 1), pt(3, 3))
            .rank_invariant_naive()
            .add(&GridModule::indicator(fd, 3, 3, |p| pt(2, 2).leq(p) && !pt(3, 3).leq(p)).rank_invariant_naive());
        assert_eq!(r, expected);
    }

    #[test]
    fn generator_stage_is_constant_in_t() {
        for seed in 0..20 {
            let f = random_bifiltration(seed, 4, 3, 15);
            let r = free_resolution(&f, Field::gf2(), 0).unwrap();
            let table = signed_rank_table(&r, Stage::Generators).unwrap();
            for s in f.points() {
                let direct = r.gens().count_leq(s) as i64;
                for t in f.points() {
                    assert_eq!(table.get(s, t), direct);
                }
            }
        }
    }

    #[test]
    fn stages_count_what_they_claim() {
        for seed in 0..20 {
            let f = random_bifiltration(seed, 4, 4, 20);
            let r = free_resolution(&f, Field::gf2(), 0).unwrap();
            let rel = signed_rank_table(&r, Stage::Relations).unwrap();
            let lubs = r.relation_lubs().unwrap();
            for s in f.points() {
                for t in f.points() {
                    let eta = (0..lubs.len())
                        .filter(|&j| lubs[j].leq(s) && r.rels().grade(j).leq(t))
                        .count() as i64;
                    assert_eq!(rel.get(s, t), r.gens().count_leq(s) as i64 - eta);
                }
            }
        }
    }

    #[test]
    fn example_1_barcode() {
        let bars = rank_1d(&ex1(Field::new(3).unwrap())).unwrap();
        assert_eq!(
            bars,
            vec![
                Bar1d {
                    start: 1,
                    end: 2,
                    mult: 1
                },
                Bar1d {
                    start: 1,
                    end: 3,
                    mult: 1
                }
            ]
        );
    }

    #[test]
    fn one_parameter_trivia() {
        let f = Field::gf2();
        assert!(rank_1d(&GridModule::zero(f, 4, 1)).unwrap().is_empty());
        let bar = GridModule::rectangle(f, 5, 1, pt(2, 1), pt(4, 1));
        assert_eq!(
            rank_1d(&bar).unwrap(),
            vec![Bar1d {
                start: 2,
                end: 4,
                mult: 1
            }]
        );
        assert!(matches!(
            rank_1d(&GridModule::zero(f, 2, 2)),
            Err(ModuleError::NotOneParameter(2, 2))
        ));
    }
}
