//! Rectangle barcodes recovered from a rank invariant by inclusion-exclusion.
//!
//! For a rectangle-decomposable module the recovered multiset is its
//! decomposition. For other modules the output is only a diagnostic: a
//! negative multiplicity proves the module is not rectangle-decomposable,
//! but a clean result proves nothing.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::grid_module::{comparable_pairs, GridModule, Point, RankInvariant};

/// A multiset of rectangles `[s, t]`, `s <= t`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RectangleBarcode {
    entries: BTreeMap<(Point, Point), u32>,
}

impl RectangleBarcode {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rectangles(rects: &[(Point, Point)]) -> Self {
        let mut b = Self::new();
        for &(s, t) in rects {
            b.add(s, t, 1);
        }
        b
    }

    pub fn add(&mut self, s: Point, t: Point, mult: u32) {
        assert!(s.leq(t), "empty rectangle {s}..{t}");
        if mult > 0 {
            *self.entries.entry((s, t)).or_insert(0) += mult;
        }
    }

    pub fn get(&self, s: Point, t: Point) -> u32 {
        self.entries.get(&(s, t)).copied().unwrap_or(0)
    }

    /// `(s, t, multiplicity)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Point, Point, u32)> + '_ {
        self.entries.iter().map(|(&(s, t), &k)| (s, t, k))
    }

    /// Number of distinct rectangles.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of rectangles counted with multiplicity.
    pub fn total(&self) -> u32 {
        self.entries.values().sum()
    }

    /// Number of rectangles (with multiplicity) containing `p`.
    pub fn dim_at(&self, p: Point) -> u32 {
        self.entries()
            .filter(|(s, t, _)| s.leq(p) && p.leq(*t))
            .map(|(_, _, k)| k)
            .sum()
    }

    /// Multiset union.
    pub fn union(&self, other: &RectangleBarcode) -> RectangleBarcode {
        let mut out = self.clone();
        for (s, t, k) in other.entries() {
            out.add(s, t, k);
        }
        out
    }

    /// Rank invariant of the direct sum of the rectangle modules.
    pub fn rank_invariant(&self, n: usize, m: usize) -> RankInvariant {
        let mut r = RankInvariant::zeros(n, m);
        for (a, b) in comparable_pairs(n, m) {
            let v: u32 = self
                .entries()
                .filter(|(s, t, _)| s.leq(a) && b.leq(*t))
                .map(|(_, _, k)| k)
                .sum();
            r.set(a, b, v);
        }
        r
    }
}

impl fmt::Display for RectangleBarcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, t, k) in self.entries() {
            writeln!(f, "{s}..{t} x{k}")?;
        }
        Ok(())
    }
}

/// `m(s, t+)`: summands with lower-left corner `s` whose support contains `t`.
pub fn corner_count(r: &RankInvariant, s: Point, t: Point) -> i64 {
    let (sx, sy, tx, ty) = (s.x as isize, s.y as isize, t.x as isize, t.y as isize);
    r.value(sx, sy, tx, ty) - r.value(sx - 1, sy, tx, ty) - r.value(sx, sy - 1, tx, ty) + r.value(sx - 1, sy - 1, tx, ty)
}

/// Corner count at a possibly out-of-grid upper point, which reads as 0.
fn corner_count_at(r: &RankInvariant, s: Point, tx: usize, ty: usize) -> i64 {
    let (n, m) = r.extent();
    if tx > n || ty > m {
        0
    } else {
        corner_count(r, s, Point::new(tx, ty))
    }
}

fn multiplicity_via_corners(r: &RankInvariant, s: Point, t: Point) -> i64 {
    corner_count(r, s, t) - corner_count_at(r, s, t.x + 1, t.y) - corner_count_at(r, s, t.x, t.y + 1)
        + corner_count_at(r, s, t.x + 1, t.y + 1)
}

/// The sixteen-term alternating sum over `r(s - a, t + b)`, `a, b` in `{0,1}^2`.
pub fn multiplicity_direct(r: &RankInvariant, s: Point, t: Point) -> i64 {
    let mut total = 0;
    for ax in 0..2isize {
        for ay in 0..2isize {
            for bx in 0..2isize {
                for by in 0..2isize {
                    let sign = if (ax + ay + bx + by) % 2 == 0 { 1 } else { -1 };
                    total += sign * r.value(s.x as isize - ax, s.y as isize - ay, t.x as isize + bx, t.y as isize + by);
                }
            }
        }
    }
    total
}

/// Multiplicity of the rectangle `[s, t]`, computed through corner counts
/// and checked against [`multiplicity_direct`].
pub fn multiplicity(r: &RankInvariant, s: Point, t: Point) -> i64 {
    let via = multiplicity_via_corners(r, s, t);
    assert_eq!(
        via,
        multiplicity_direct(r, s, t),
        "inclusion-exclusion forms disagree at {s}..{t}"
    );
    via
}

/// Result of [`decompose`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    pub barcode: RectangleBarcode,
    /// Pairs with a negative multiplicity, in lexicographic order.
    pub negatives: Vec<(Point, Point, i64)>,
}

impl Decomposition {
    /// No negative multiplicity was found.
    pub fn is_clean(&self) -> bool {
        self.negatives.is_empty()
    }
}

/// Multiplicities at every comparable pair; positive ones form the barcode.
pub fn decompose(r: &RankInvariant) -> Decomposition {
    let (n, m) = r.extent();
    let pairs: Vec<(Point, Point)> = comparable_pairs(n, m).collect();
    let values: Vec<i64> = pairs.par_iter().map(|&(s, t)| multiplicity(r, s, t)).collect();
    let mut out = Decomposition::default();
    for (&(s, t), &v) in pairs.iter().zip(&values) {
        if v > 0 {
            out.barcode.add(s, t, v as u32);
        } else if v < 0 {
            out.negatives.push((s, t, v));
        }
    }
    out
}

/// First grid point where the barcode's pointwise dimension differs from
/// `r(t, t)`.
pub fn dimension_audit(b: &RectangleBarcode, r: &RankInvariant) -> Option<Point> {
    let (n, m) = r.extent();
    (1..=m)
        .flat_map(|y| (1..=n).map(move |x| Point::new(x, y)))
        .find(|&p| b.dim_at(p) != r.get(p, p))
}

/// As [`dimension_audit`], against the dimensions of a module.
pub fn module_audit(b: &RectangleBarcode, module: &GridModule) -> Option<Point> {
    module.points().find(|&p| b.dim_at(p) as usize != module.dim(p))
}
