//! The named modules used throughout the tests and the CLI.

use crate::error::ConstructionError;
use crate::grid_module::{GridModule, Point};
use crate::linalg::{Field, Matrix};

/// Names accepted by [`example`].
pub const CATALOGUE: &[&str] = &[
    "ex1",
    "ex2",
    "ex3-left",
    "ex3-right",
    "ex4-left",
    "ex4-right",
    "hooks-horizontal",
    "hooks-vertical",
    "hooks-horizontal-dual",
    "hooks-vertical-dual",
    "indecgrid",
    "zero",
];

/// Looks up a module by name. `n` is only used by `indecgrid` (default 2).
pub fn example(name: &str, field: Field, n: Option<usize>) -> Result<GridModule, ConstructionError> {
    Ok(match name {
        "ex1" => ex1(field),
        "ex2" => ex2(field),
        "ex3-left" => ex3_left(field),
        "ex3-right" | "hooks-horizontal" => ex3_right(field),
        "ex4-left" => ex4_left(field),
        "ex4-right" => ex4_right(field),
        "hooks-vertical" => hooks_vertical(field),
        "hooks-horizontal-dual" => ex3_right(field).dualize(),
        "hooks-vertical-dual" => hooks_vertical(field).dualize(),
        "indecgrid" => indecgrid(field, n.unwrap_or(2))?,
        "zero" => GridModule::zero(field, 2, 2),
        other => return Err(ConstructionError::UnknownExample(other.to_string())),
    })
}

fn mat(f: Field, rows: &[&[i64]]) -> Matrix {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    Matrix::from_rows(f, &rows)
}

/// Builds a module from a dims table given top row first, as the diagrams
/// are drawn, plus lists of horizontal and vertical maps keyed by source.
fn build(f: Field, dims_top_first: &[&[usize]], h: &[((usize, usize), Matrix)], v: &[((usize, usize), Matrix)]) -> GridModule {
    let m = dims_top_first.len();
    let n = dims_top_first[0].len();
    let mut g = GridModule::with_dims(f, n, m, |p| dims_top_first[m - p.y][p.x - 1]);
    for ((x, y), a) in h {
        g.set_hmap(Point::new(*x, *y), a.clone()).expect("example map shape");
    }
    for ((x, y), a) in v {
        g.set_vmap(Point::new(*x, *y), a.clone()).expect("example map shape");
    }
    debug_assert!(g.is_valid());
    g
}

/// `k^2 -> k^2 -> k` on a 3x1 grid.
pub fn ex1(f: Field) -> GridModule {
    build(
        f,
        &[&[2, 2, 1]],
        &[((1, 1), mat(f, &[&[1, 1], &[0, 1]])), ((2, 1), mat(f, &[&[1, -1]]))],
        &[],
    )
}

/// The left-hand square before the change of basis.
pub fn ex2(f: Field) -> GridModule {
    build(
        f,
        &[&[2, 2], &[1, 1]],
        &[((1, 1), mat(f, &[&[1]])), ((1, 2), mat(f, &[&[1, -1], &[0, 1]]))],
        &[((1, 1), mat(f, &[&[1], &[1]])), ((2, 1), mat(f, &[&[0], &[1]]))],
    )
}

fn ex3(f: Field, top_left: Matrix) -> GridModule {
    build(
        f,
        &[&[1, 2, 1], &[0, 1, 1]],
        &[((1, 2), top_left), ((2, 2), mat(f, &[&[1, 0]])), ((2, 1), mat(f, &[&[1]]))],
        &[((2, 1), mat(f, &[&[1], &[0]])), ((3, 1), mat(f, &[&[1]]))],
    )
}

/// Decomposes into two interval summands.
pub fn ex3_left(f: Field) -> GridModule {
    ex3(f, mat(f, &[&[1], &[0]]))
}

/// Indecomposable, with the same rank invariant as [`ex3_left`].
pub fn ex3_right(f: Field) -> GridModule {
    ex3(f, mat(f, &[&[1], &[1]]))
}

fn ex4(f: Field, top_right: Matrix) -> GridModule {
    build(
        f,
        &[&[1, 2, 2], &[0, 1, 1]],
        &[
            ((1, 2), mat(f, &[&[1], &[0]])),
            ((2, 2), top_right),
            ((2, 1), mat(f, &[&[1]])),
        ],
        &[((2, 1), mat(f, &[&[0], &[1]])), ((3, 1), mat(f, &[&[0], &[1]]))],
    )
}

/// Strongly exact.
pub fn ex4_left(f: Field) -> GridModule {
    ex4(f, Matrix::identity(f, 2))
}

/// Weakly but not strongly exact.
pub fn ex4_right(f: Field) -> GridModule {
    ex4(f, mat(f, &[&[0, 0], &[0, 1]]))
}

/// The 2x3 analogue of [`ex3_right`].
pub fn hooks_vertical(f: Field) -> GridModule {
    build(
        f,
        &[&[1, 1], &[1, 2], &[0, 1]],
        &[((1, 3), mat(f, &[&[1]])), ((1, 2), mat(f, &[&[1], &[0]]))],
        &[
            ((1, 2), mat(f, &[&[1]])),
            ((2, 2), mat(f, &[&[1, 0]])),
            ((2, 1), mat(f, &[&[1], &[1]])),
        ],
    )
}

/// Inclusion of the `i`-th axis `k -> k^n` (1-based).
pub fn axis(f: Field, n: usize, i: usize) -> Matrix {
    let mut m = Matrix::zeros(f, n, 1);
    m.set(i - 1, 0, 1);
    m
}

/// Diagonal embedding `k -> k^n`.
pub fn diagonal(f: Field, n: usize) -> Matrix {
    Matrix::from_columns(f, n, &[vec![1; n]])
}

/// The explicit `(n+1) x (n+1)` module that is indecomposable while all its
/// restrictions to strict subgrids are interval-decomposable.
pub fn indecgrid(f: Field, n: usize) -> Result<GridModule, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::TooSmall(n));
    }
    let side = n + 1;
    let dim = |p: Point| match (p.x + p.y).cmp(&(n + 2)) {
        std::cmp::Ordering::Less => 0,
        std::cmp::Ordering::Equal => 1,
        std::cmp::Ordering::Greater => n,
    };
    let mut g = GridModule::with_dims(f, side, side, dim);
    for p in g.points().collect::<Vec<_>>() {
        match dim(p) {
            0 => {}
            1 => {
                let i = p.x;
                if i <= n {
                    g.set_hmap(p, axis(f, n, i))?;
                    if p.y < side {
                        g.set_vmap(p, axis(f, n, i))?;
                    }
                } else {
                    g.set_vmap(p, diagonal(f, n))?;
                }
            }
            _ => {
                if p.x < side {
                    g.set_hmap(p, Matrix::identity(f, n))?;
                }
                if p.y < side {
                    g.set_vmap(p, Matrix::identity(f, n))?;
                }
            }
        }
    }
    Ok(g)
}

/// Copies `module` into the bottom-left corner of a larger `n x m` grid,
/// with zero spaces elsewhere.
pub fn embed_bottom_left(module: &GridModule, n: usize, m: usize) -> GridModule {
    let (a, b) = module.extent();
    assert!(a <= n && b <= m);
    let inside = |p: Point| p.x <= a && p.y <= b;
    let mut g = GridModule::with_dims(module.field(), n, m, |p| if inside(p) { module.dim(p) } else { 0 });
    for p in module.points() {
        if p.x < a {
            g.set_hmap(p, module.hmap(p).clone()).unwrap();
        }
        if p.y < b {
            g.set_vmap(p, module.vmap(p).clone()).unwrap();
        }
    }
    g
}
