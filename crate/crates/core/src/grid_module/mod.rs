//! Persistence modules over a finite grid `[1,n] x [1,m]`.
//!
//! Only the maps along unit edges are stored; longer internal maps are
//! products along a monotone lattice path, which is well defined once every
//! unit square commutes (see [`GridModule::validate`]).

mod exactness;
mod hom;
mod square;

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::ModuleError;
use crate::linalg::{rank, Field, Matrix};

pub use exactness::{is_strongly_exact, is_weakly_exact_algebraic, is_weakly_exact_geometric, ExactnessFailure, FailureKind};
pub use hom::{hom_basis, hom_dim, Morphism};
pub use square::{decompose_square, invariants_of_square, square_barcodes, Interval, SquareBarcode, SquareInvariants};

/// A grid index, 1-based in both coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: usize,
    pub y: usize,
}

impl Point {
    pub const fn new(x: usize, y: usize) -> Self {
        Point { x, y }
    }

    /// Product order.
    pub fn leq(self, other: Point) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    /// Coordinate-wise maximum.
    pub fn join(self, other: Point) -> Point {
        Point::new(self.x.max(other.x), self.y.max(other.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Shape violations and non-commuting squares found by [`GridModule::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The unit square with lower-left corner at this point does not commute.
    NonCommuting(Point),
    Shape {
        kind: &'static str,
        at: Point,
        got: (usize, usize),
        want: (usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonCommuting(p) => write!(f, "square at {p} does not commute"),
            Violation::Shape { kind, at, got, want } => {
                write!(
                    f,
                    "{kind} at {at} has shape {}x{}, expected {}x{}",
                    got.0, got.1, want.0, want.1
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridModule {
    field: Field,
    n: usize,
    m: usize,
    dims: Vec<usize>,
    /// `(x,y) -> (x+1,y)`, indexed by [`GridModule::hidx`].
    hmaps: Vec<Matrix>,
    /// `(x,y) -> (x,y+1)`, indexed by [`GridModule::idx`].
    vmaps: Vec<Matrix>,
}

impl GridModule {
    /// A module with the given pointwise dimensions and all maps zero.
    pub fn with_dims(field: Field, n: usize, m: usize, dim: impl Fn(Point) -> usize) -> Self {
        assert!(n >= 1 && m >= 1, "grid must be nonempty");
        let dims: Vec<usize> = (1..=m)
            .flat_map(|y| (1..=n).map(move |x| Point::new(x, y)))
            .map(&dim)
            .collect();
        let d = |x: usize, y: usize| dims[(y - 1) * n + (x - 1)];
        let mut hmaps = Vec::with_capacity((n - 1) * m);
        for y in 1..=m {
            for x in 1..n {
                hmaps.push(Matrix::zeros(field, d(x + 1, y), d(x, y)));
            }
        }
        let mut vmaps = Vec::with_capacity(n * (m - 1));
        for y in 1..m {
            for x in 1..=n {
                vmaps.push(Matrix::zeros(field, d(x, y + 1), d(x, y)));
            }
        }
        GridModule {
            field,
            n,
            m,
            dims,
            hmaps,
            vmaps,
        }
    }

    pub fn zero(field: Field, n: usize, m: usize) -> Self {
        GridModule::with_dims(field, n, m, |_| 0)
    }

    /// The module that is `k` on `support` with identity maps inside it.
    ///
    /// Only commutes when the support is convex, which holds for rectangles
    /// and for the intervals used in this crate.
    pub fn indicator(field: Field, n: usize, m: usize, support: impl Fn(Point) -> bool) -> Self {
        let mut g = GridModule::with_dims(field, n, m, |p| support(p) as usize);
        for p in g.points() {
            if g.dim(p) == 0 {
                continue;
            }
            if p.x < n && g.dim(Point::new(p.x + 1, p.y)) == 1 {
                g.set_hmap(p, Matrix::identity(field, 1)).unwrap();
            }
            if p.y < m && g.dim(Point::new(p.x, p.y + 1)) == 1 {
                g.set_vmap(p, Matrix::identity(field, 1)).unwrap();
            }
        }
        g
    }

    /// Indicator module of the rectangle `[lo, hi]`.
    pub fn rectangle(field: Field, n: usize, m: usize, lo: Point, hi: Point) -> Self {
        assert!(lo.leq(hi), "empty rectangle {lo}..{hi}");
        GridModule::indicator(field, n, m, |p| lo.leq(p) && p.leq(hi))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Grid extents `(n, m)`.
    pub fn extent(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn contains(&self, p: Point) -> bool {
        (1..=self.n).contains(&p.x) && (1..=self.m).contains(&p.y)
    }

    /// All grid points, x varying fastest.
    pub fn points(&self) -> impl Iterator<Item = Point> {
        let n = self.n;
        (1..=self.m).flat_map(move |y| (1..=n).map(move |x| Point::new(x, y)))
    }

    #[inline]
    fn idx(&self, p: Point) -> usize {
        (p.y - 1) * self.n + (p.x - 1)
    }

    #[inline]
    fn hidx(&self, p: Point) -> usize {
        (p.y - 1) * (self.n - 1) + (p.x - 1)
    }

    pub fn dim(&self, p: Point) -> usize {
        self.dims[self.idx(p)]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    /// Map `p -> p + (1,0)`.
    pub fn hmap(&self, p: Point) -> &Matrix {
        assert!(p.x < self.n && self.contains(p));
        &self.hmaps[self.hidx(p)]
    }

    /// Map `p -> p + (0,1)`.
    pub fn vmap(&self, p: Point) -> &Matrix {
        assert!(p.y < self.m && self.contains(p));
        &self.vmaps[self.idx(p)]
    }

    pub fn set_hmap(&mut self, p: Point, mat: Matrix) -> Result<(), ModuleError> {
        if !(self.contains(p) && p.x < self.n) {
            return Err(ModuleError::OutOfGrid(Point::new(p.x + 1, p.y), self.n, self.m));
        }
        let want = (self.dim(Point::new(p.x + 1, p.y)), self.dim(p));
        self.check_map("hmap", p, &mat, want)?;
        let i = self.hidx(p);
        self.hmaps[i] = mat;
        Ok(())
    }

    pub fn set_vmap(&mut self, p: Point, mat: Matrix) -> Result<(), ModuleError> {
        if !(self.contains(p) && p.y < self.m) {
            return Err(ModuleError::OutOfGrid(Point::new(p.x, p.y + 1), self.n, self.m));
        }
        let want = (self.dim(Point::new(p.x, p.y + 1)), self.dim(p));
        self.check_map("vmap", p, &mat, want)?;
        let i = self.idx(p);
        self.vmaps[i] = mat;
        Ok(())
    }

    fn check_map(&self, kind: &'static str, at: Point, mat: &Matrix, want: (usize, usize)) -> Result<(), ModuleError> {
        if mat.field() != self.field {
            return Err(ModuleError::FieldMismatch(mat.field().modulus(), self.field.modulus()));
        }
        if mat.shape() != want {
            return Err(ModuleError::Shape {
                kind,
                at,
                got: mat.shape(),
                want,
            });
        }
        Ok(())
    }

    /// Every shape mismatch and non-commuting unit square.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for p in self.points() {
            if p.x < self.n {
                let want = (self.dim(Point::new(p.x + 1, p.y)), self.dim(p));
                let got = self.hmap(p).shape();
                if got != want {
                    out.push(Violation::Shape {
                        kind: "hmap",
                        at: p,
                        got,
                        want,
                    });
                }
            }
            if p.y < self.m {
                let want = (self.dim(Point::new(p.x, p.y + 1)), self.dim(p));
                let got = self.vmap(p).shape();
                if got != want {
                    out.push(Violation::Shape {
                        kind: "vmap",
                        at: p,
                        got,
                        want,
                    });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for p in self.points() {
            if p.x < self.n && p.y < self.m {
                let right_up = self.vmap(Point::new(p.x + 1, p.y)).mul(self.hmap(p));
                let up_right = self.hmap(Point::new(p.x, p.y + 1)).mul(self.vmap(p));
                if right_up != up_right {
                    out.push(Violation::NonCommuting(p));
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Internal map `M_s -> M_t`, following the path right then up.
    pub fn composite_map(&self, s: Point, t: Point) -> Result<Matrix, ModuleError> {
        for p in [s, t] {
            if !self.contains(p) {
                return Err(ModuleError::OutOfGrid(p, self.n, self.m));
            }
        }
        if !s.leq(t) {
            return Err(ModuleError::NotComparable { s, t });
        }
        let mut acc = Matrix::identity(self.field, self.dim(s));
        for x in s.x..t.x {
            acc = self.hmap(Point::new(x, s.y)).mul(&acc);
        }
        for y in s.y..t.y {
            acc = self.vmap(Point::new(t.x, y)).mul(&acc);
        }
        Ok(acc)
    }

    /// All internal maps out of `s`, indexed like [`GridModule::points`];
    /// entries for points not above `s` are `None`.
    fn composites_from(&self, s: Point) -> Vec<Option<Matrix>> {
        let mut out: Vec<Option<Matrix>> = vec![None; self.n * self.m];
        let mut row = Matrix::identity(self.field, self.dim(s));
        for x in s.x..=self.n {
            if x > s.x {
                row = self.hmap(Point::new(x - 1, s.y)).mul(&row);
            }
            let mut col = row.clone();
            for y in s.y..=self.m {
                if y > s.y {
                    col = self.vmap(Point::new(x, y - 1)).mul(&col);
                }
                out[self.idx(Point::new(x, y))] = Some(col.clone());
            }
        }
        out
    }

    /// Brute-force rank invariant: one rank computation per comparable pair.
    pub fn rank_invariant_naive(&self) -> RankInvariant {
        self.rank_invariant_naive_until(None).expect("no deadline was given")
    }

    /// As [`GridModule::rank_invariant_naive`], giving up (returning `None`)
    /// once `deadline` has passed.
    pub fn rank_invariant_naive_until(&self, deadline: Option<Instant>) -> Option<RankInvariant> {
        let expired = AtomicBool::new(false);
        let points: Vec<Point> = self.points().collect();
        let rows: Vec<Vec<(Point, u32)>> = points
            .par_iter()
            .map(|&s| {
                if expired.load(Ordering::Relaxed) {
                    return Vec::new();
                }
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    expired.store(true, Ordering::Relaxed);
                    return Vec::new();
                }
                self.composites_from(s)
                    .into_iter()
                    .zip(&points)
                    .filter_map(|(c, &t)| c.map(|c| (t, rank(&c) as u32)))
                    .collect()
            })
            .collect();
        if expired.load(Ordering::Relaxed) {
            return None;
        }
        let mut r = RankInvariant::zeros(self.n, self.m);
        for (&s, row) in points.iter().zip(rows) {
            for (t, v) in row {
                r.set(s, t, v);
            }
        }
        Some(r)
    }

    /// Restriction to the subgrid `xs x ys`; maps become composites between
    /// consecutive selected indices.
    pub fn restrict(&self, xs: &[usize], ys: &[usize]) -> Result<GridModule, ModuleError> {
        if xs.is_empty() || ys.is_empty() {
            return Err(ModuleError::EmptySelection);
        }
        let ok = |v: &[usize], max: usize| v.windows(2).all(|w| w[0] < w[1]) && v[0] >= 1 && *v.last().unwrap() <= max;
        if !ok(xs, self.n) || !ok(ys, self.m) {
            return Err(ModuleError::BadSelection);
        }
        let at = |p: Point| Point::new(xs[p.x - 1], ys[p.y - 1]);
        let mut g = GridModule::with_dims(self.field, xs.len(), ys.len(), |p| self.dim(at(p)));
        for p in g.points().collect::<Vec<_>>() {
            if p.x < xs.len() {
                let map = self.composite_map(at(p), at(Point::new(p.x + 1, p.y)))?;
                g.set_hmap(p, map)?;
            }
            if p.y < ys.len() {
                let map = self.composite_map(at(p), at(Point::new(p.x, p.y + 1)))?;
                g.set_vmap(p, map)?;
            }
        }
        Ok(g)
    }

    /// Pointwise dual: the grid is reflected in both coordinates and every
    /// map is transposed.
    pub fn dualize(&self) -> GridModule {
        let (n, m) = (self.n, self.m);
        let flip = |p: Point| Point::new(n + 1 - p.x, m + 1 - p.y);
        let mut g = GridModule::with_dims(self.field, n, m, |p| self.dim(flip(p)));
        for p in self.points() {
            // the edge p -> p+e1 becomes flip(p+e1) -> flip(p)
            if p.x < n {
                g.set_hmap(flip(Point::new(p.x + 1, p.y)), self.hmap(p).transpose()).unwrap();
            }
            if p.y < m {
                g.set_vmap(flip(Point::new(p.x, p.y + 1)), self.vmap(p).transpose()).unwrap();
            }
        }
        g
    }

    /// The same module with the two grid axes swapped.
    pub fn transpose(&self) -> GridModule {
        let swap = |p: Point| Point::new(p.y, p.x);
        let mut g = GridModule::with_dims(self.field, self.m, self.n, |p| self.dim(swap(p)));
        for p in self.points() {
            if p.x < self.n {
                g.set_vmap(swap(p), self.hmap(p).clone()).unwrap();
            }
            if p.y < self.m {
                g.set_hmap(swap(p), self.vmap(p).clone()).unwrap();
            }
        }
        g
    }

    pub fn direct_sum(&self, other: &GridModule) -> Result<GridModule, ModuleError> {
        if self.extent() != other.extent() {
            return Err(ModuleError::GridMismatch(self.n, self.m, other.n, other.m));
        }
        if self.field != other.field {
            return Err(ModuleError::FieldMismatch(self.field.modulus(), other.field.modulus()));
        }
        let mut g = GridModule::with_dims(self.field, self.n, self.m, |p| self.dim(p) + other.dim(p));
        for p in self.points() {
            if p.x < self.n {
                g.set_hmap(p, self.hmap(p).block_diag(other.hmap(p)))?;
            }
            if p.y < self.m {
                g.set_vmap(p, self.vmap(p).block_diag(other.vmap(p)))?;
            }
        }
        Ok(g)
    }

    /// Changes basis at each point: `M'_t = P_t M_t`, so every map `A` on an
    /// edge `s -> t` becomes `P_t A P_s^{-1}`.
    pub fn change_basis(&self, bases: &[Matrix], inverses: &[Matrix]) -> GridModule {
        let mut g = self.clone();
        for p in self.points() {
            let i = self.idx(p);
            if p.x < self.n {
                let q = Point::new(p.x + 1, p.y);
                let map = bases[self.idx(q)].mul(self.hmap(p)).mul(&inverses[i]);
                g.set_hmap(p, map).unwrap();
            }
            if p.y < self.m {
                let q = Point::new(p.x, p.y + 1);
                let map = bases[self.idx(q)].mul(self.vmap(p)).mul(&inverses[i]);
                g.set_vmap(p, map).unwrap();
            }
        }
        g
    }
}

/// Table of ranks `r(s,t)` for every comparable pair of a grid.
#[derive(Clone, PartialEq, Eq)]
pub struct RankInvariant {
    n: usize,
    m: usize,
    /// `data[idx(s) * n * m + idx(t)]`; entries for incomparable pairs stay 0.
    data: Vec<u32>,
}

impl fmt::Debug for RankInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RankInvariant {}x{} {{", self.n, self.m)?;
        for (s, t, r) in self.entries() {
            if r != 0 {
                write!(f, " {s}->{t}:{r}")?;
            }
        }
        write!(f, " }}")
    }
}

impl RankInvariant {
    pub fn zeros(n: usize, m: usize) -> Self {
        let k = n * m;
        RankInvariant {
            n,
            m,
            data: vec![0; k * k],
        }
    }

    pub fn extent(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    #[inline]
    fn idx(&self, p: Point) -> usize {
        (p.y - 1) * self.n + (p.x - 1)
    }

    fn in_grid(&self, p: Point) -> bool {
        (1..=self.n).contains(&p.x) && (1..=self.m).contains(&p.y)
    }

    /// `r(s,t)`; panics unless `s <= t` inside the grid.
    pub fn get(&self, s: Point, t: Point) -> u32 {
        assert!(self.in_grid(s) && self.in_grid(t) && s.leq(t), "no rank for {s} -> {t}");
        self.data[self.idx(s) * self.n * self.m + self.idx(t)]
    }

    /// `r(s,t)` with signed coordinates; any index outside the grid reads as 0.
    pub fn value(&self, sx: isize, sy: isize, tx: isize, ty: isize) -> i64 {
        let inside = |x: isize, y: isize| x >= 1 && y >= 1 && x as usize <= self.n && y as usize <= self.m;
        if !inside(sx, sy) || !inside(tx, ty) || sx > tx || sy > ty {
            return 0;
        }
        let s = Point::new(sx as usize, sy as usize);
        let t = Point::new(tx as usize, ty as usize);
        self.get(s, t) as i64
    }

    pub fn set(&mut self, s: Point, t: Point, r: u32) {
        assert!(self.in_grid(s) && self.in_grid(t) && s.leq(t), "no rank for {s} -> {t}");
        let k = self.n * self.m;
        let i = self.idx(s) * k + self.idx(t);
        self.data[i] = r;
    }

    /// Every comparable pair in lexicographic order of `(s_x, s_y, t_x, t_y)`.
    pub fn pairs(&self) -> impl Iterator<Item = (Point, Point)> {
        comparable_pairs(self.n, self.m)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Point, Point, u32)> + '_ {
        self.pairs().map(move |(s, t)| (s, t, self.get(s, t)))
    }

    /// Pointwise sum, as for a direct sum of modules.
    pub fn add(&self, other: &RankInvariant) -> RankInvariant {
        assert_eq!(self.extent(), other.extent());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RankInvariant { data, ..*self }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }
}

/// Comparable pairs `s <= t` of an `n x m` grid in lexicographic order.
pub fn comparable_pairs(n: usize, m: usize) -> impl Iterator<Item = (Point, Point)> {
    (1..=n).flat_map(move |sx| {
        (1..=m).flat_map(move |sy| (sx..=n).flat_map(move |tx| (sy..=m).map(move |ty| (Point::new(sx, sy), Point::new(tx, ty)))))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::examples;

    fn gf2() -> Field {
        Field::gf2()
    }

    #[test]
    fn validate_examples() {
        assert!(examples::ex2(gf2()).validate().is_empty());
        assert!(GridModule::zero(gf2(), 3, 3).validate().is_empty());

        // flip one vmap entry of the example 2 module
        let mut bad = examples::ex2(gf2());
        let p = Point::new(1, 1);
        let mut v = bad.vmap(p).clone();
        v.set(0, 0, 1 - v.get(0, 0));
        bad.set_vmap(p, v).unwrap();
        assert_eq!(bad.validate(), vec![Violation::NonCommuting(p)]);
    }

    #[test]
    fn composite_examples() {
        let ex1 = examples::ex1(gf2());
        let s = Point::new(1, 1);
        assert_eq!(ex1.composite_map(s, s).unwrap(), Matrix::identity(gf2(), 2));
        assert_eq!(rank(&ex1.composite_map(s, Point::new(3, 1)).unwrap()), 1);
        assert_eq!(&ex1.composite_map(s, Point::new(2, 1)).unwrap(), ex1.hmap(s));
        assert!(matches!(
            ex1.composite_map(Point::new(2, 1), s),
            Err(ModuleError::NotComparable { .. })
        ));
    }

    #[test]
    fn naive_rank_of_indicator() {
        let k = GridModule::rectangle(gf2(), 3, 3, Point::new(1, 1), Point::new(2, 2));
        let r = k.rank_invariant_naive();
        for (s, t, v) in r.entries() {
            let inside = |p: Point| p.leq(Point::new(2, 2));
            assert_eq!(v, (inside(s) && inside(t)) as u32, "{s} {t}");
        }
    }

    #[test]
    fn ex3_modules_share_rank_invariant() {
        let l = examples::ex3_left(gf2()).rank_invariant_naive();
        let r = examples::ex3_right(gf2()).rank_invariant_naive();
        assert_eq!(l, r);
    }

    #[test]
    fn direct_sum_adds_ranks() {
        let f = gf2();
        let a = examples::ex3_right(f);
        let b = GridModule::rectangle(f, 3, 2, Point::new(2, 1), Point::new(3, 2));
        let s = a.direct_sum(&b).unwrap();
        assert!(s.is_valid());
        assert_eq!(
            s.rank_invariant_naive(),
            a.rank_invariant_naive().add(&b.rank_invariant_naive())
        );
        assert_eq!(a.direct_sum(&GridModule::zero(f, 3, 2)).unwrap(), a);
        assert!(a.direct_sum(&GridModule::zero(f, 2, 2)).is_err());
    }

    #[test]
    fn restrict_examples() {
        let a = examples::ex3_right(gf2());
        assert_eq!(a.restrict(&[1, 2, 3], &[1, 2]).unwrap(), a);
        let row = a.restrict(&[1, 2, 3], &[2]).unwrap();
        assert_eq!(row.extent(), (3, 1));
        assert_eq!(row.dim(Point::new(2, 1)), 2);
        assert!(matches!(a.restrict(&[], &[1]), Err(ModuleError::EmptySelection)));
    }

    #[test]
    fn dualize_examples() {
        let f = gf2();
        let k = GridModule::rectangle(f, 4, 3, Point::new(1, 2), Point::new(2, 3));
        let reflected = GridModule::rectangle(f, 4, 3, Point::new(3, 1), Point::new(4, 2));
        assert_eq!(k.dualize(), reflected);
        assert_eq!(GridModule::zero(f, 2, 3).dualize(), GridModule::zero(f, 2, 3));

        let a = examples::ex3_right(f);
        let d = a.dualize();
        assert!(d.is_valid());
        assert_eq!(d.dualize(), a);
        for p in a.points() {
            assert_eq!(d.dim(Point::new(4 - p.x, 3 - p.y)), a.dim(p));
        }
        assert_eq!(hom_dim(&d, &d).unwrap(), hom_dim(&a, &a).unwrap());
    }
}
