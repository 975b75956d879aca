//! Restrictions of the indecomposable grid module to subgrids missing one
//! row or column, and the interval decompositions they should have.

use crate::error::ConstructionError;
use crate::grid_module::{GridModule, Point};
use crate::linalg::Field;

use super::examples::indecgrid;
use super::kan::{phi, ran_extension, GridEmbedding};
use super::poset::{dart, PosetModule};

/// Which line of the `(n+1) x (n+1)` grid is dropped (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Missing {
    Column(usize),
    Row(usize),
}

impl Missing {
    /// Every single-line deletion of the `(n+1) x (n+1)` grid.
    pub fn all(n: usize) -> Vec<Missing> {
        (1..=n + 1)
            .map(Missing::Column)
            .chain((1..=n + 1).map(Missing::Row))
            .collect()
    }

    fn line(self) -> usize {
        match self {
            Missing::Column(c) | Missing::Row(c) => c,
        }
    }

    /// Position of `p` after the deletion, if it survives.
    fn shift(self, p: Point) -> Option<Point> {
        let down = |v: usize, at: usize| (v != at).then(|| if v < at { v } else { v - 1 });
        match self {
            Missing::Column(c) => down(p.x, c).map(|x| Point::new(x, p.y)),
            Missing::Row(r) => down(p.y, r).map(|y| Point::new(p.x, y)),
        }
    }

    fn extent(self, n: usize) -> (usize, usize) {
        match self {
            Missing::Column(_) => (n, n + 1),
            Missing::Row(_) => (n + 1, n),
        }
    }
}

fn lines(n: usize, missing: Missing) -> (Vec<usize>, Vec<usize>) {
    let full: Vec<usize> = (1..=n + 1).collect();
    let rest: Vec<usize> = full.iter().copied().filter(|&v| v != missing.line()).collect();
    match missing {
        Missing::Column(_) => (rest, full),
        Missing::Row(_) => (full, rest),
    }
}

fn check_line(n: usize, missing: Missing) -> Result<(), ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::TooSmall(n));
    }
    if !(1..=n + 1).contains(&missing.line()) {
        return Err(ConstructionError::BadPoset(format!("{missing:?} is not a line of the grid")));
    }
    Ok(())
}

/// The restriction of `indecgrid(n)` to the grid without the given line.
pub fn restrict_indecgrid(field: Field, n: usize, missing: Missing) -> Result<GridModule, ConstructionError> {
    check_line(n, missing)?;
    let (xs, ys) = lines(n, missing);
    Ok(indecgrid(field, n)?.restrict(&xs, &ys)?)
}

/// The dart elements (0-based) whose image survives the deletion.
fn surviving(n: usize, missing: Missing) -> Vec<usize> {
    let e = phi(n).expect("n >= 2");
    (0..n + 2).filter(|&u| missing.shift(e.point(u)).is_some()).collect()
}

/// The interval decomposition of [`restrict_indecgrid`]: for every surviving
/// anti-diagonal point `(j, n+2-j)`, the interval made of that point and the
/// region `x + y > n + 2`, restricted to the smaller grid.
pub fn expected_restriction(field: Field, n: usize, missing: Missing) -> Result<GridModule, ConstructionError> {
    check_line(n, missing)?;
    let (xs, ys) = lines(n, missing);
    let (w, h) = missing.extent(n);
    let mut out = GridModule::zero(field, w, h);
    for u in surviving(n, missing).into_iter().filter(|&u| u <= n) {
        let j = u + 1;
        let full = GridModule::indicator(field, n + 1, n + 1, |p| p.x + p.y > n + 2 || p == Point::new(j, n + 2 - j));
        out = out.direct_sum(&full.restrict(&xs, &ys)?)?;
    }
    Ok(out)
}

/// The corestriction of the dart embedding to the grid without a line that
/// avoids the top. `None` for line `n+1`, which contains the top.
pub fn sub_embedding(n: usize, missing: Missing) -> Result<Option<GridEmbedding>, ConstructionError> {
    check_line(n, missing)?;
    if missing.line() == n + 1 {
        return Ok(None);
    }
    let e = phi(n)?;
    let keep = surviving(n, missing);
    let poset = e.poset().induced(&keep);
    let points = keep
        .iter()
        .map(|&u| missing.shift(e.point(u)).expect("kept points survive"))
        .collect();
    let (w, h) = missing.extent(n);
    Ok(Some(GridEmbedding::new(poset, w, h, points)?))
}

/// `Ran` of the restricted dart along [`sub_embedding`], and the direct sum
/// of the `Ran` of its interval summands `k` on `{j, n+2}`.
pub fn ran_on_subgrid(field: Field, n: usize, missing: Missing) -> Result<Option<(GridModule, GridModule)>, ConstructionError> {
    let Some(sub) = sub_embedding(n, missing)? else {
        return Ok(None);
    };
    let keep = surviving(n, missing);
    let restricted = dart(field, n)?.restrict(&keep);
    let whole = ran_extension(&restricted, &sub)?;
    let top = keep.len() - 1;
    let (w, h) = missing.extent(n);
    let mut sum = GridModule::zero(field, w, h);
    for j in 0..top {
        let k = PosetModule::indicator(field, sub.poset().clone(), |u| u == j || u == top)?;
        sum = sum.direct_sum(&ran_extension(&k, &sub)?)?;
    }
    Ok(Some((whole, sum)))
}
