//! Natural transformations between grid modules.

use crate::error::ModuleError;
use crate::linalg::{kernel_vectors, Matrix};

use super::{GridModule, Point};

/// A family of pointwise matrices `phi_t: A_t -> B_t`, indexed like
/// [`GridModule::points`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub maps: Vec<Matrix>,
}

/// Offsets of each point's block of unknowns in the flattened system.
fn layout(a: &GridModule, b: &GridModule) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(a.n * a.m);
    let mut total = 0;
    for p in a.points() {
        offsets.push(total);
        total += a.dim(p) * b.dim(p);
    }
    (offsets, total)
}

/// Constraint rows `B(e) phi_p - phi_q A(e) = 0` for one edge `p -> q`.
fn edge_rows(
    rows: &mut Vec<Vec<u32>>,
    total: usize,
    (op, oq): (usize, usize),
    ea: &Matrix,
    eb: &Matrix,
    (da_p, db_p, da_q, db_q): (usize, usize, usize, usize),
) {
    let f = ea.field();
    for i in 0..db_q {
        for j in 0..da_p {
            let mut row = vec![0u32; total];
            // (B(e) phi_p)[i][j] = sum_k B[i][k] phi_p[k][j]
            for k in 0..db_p {
                let c = eb.get(i, k);
                if c != 0 {
                    let slot = &mut row[op + k * da_p + j];
                    *slot = f.add(*slot, c);
                }
            }
            // (phi_q A(e))[i][j] = sum_k phi_q[i][k] A[k][j]
            for k in 0..da_q {
                let c = ea.get(k, j);
                if c != 0 {
                    let slot = &mut row[oq + i * da_q + k];
                    *slot = f.sub(*slot, c);
                }
            }
            if row.iter().any(|&v| v != 0) {
                rows.push(row);
            }
        }
    }
}

fn check_compatible(a: &GridModule, b: &GridModule) -> Result<(), ModuleError> {
    if a.extent() != b.extent() {
        return Err(ModuleError::GridMismatch(a.n, a.m, b.n, b.m));
    }
    if a.field != b.field {
        return Err(ModuleError::FieldMismatch(a.field.modulus(), b.field.modulus()));
    }
    Ok(())
}

/// A basis of `Hom(A, B)`.
pub fn hom_basis(a: &GridModule, b: &GridModule) -> Result<Vec<Morphism>, ModuleError> {
    check_compatible(a, b)?;
    let (offsets, total) = layout(a, b);
    let at = |p: Point| offsets[a.idx(p)];
    let mut rows = Vec::new();
    for p in a.points() {
        let mut edges = Vec::new();
        if p.x < a.n {
            edges.push((Point::new(p.x + 1, p.y), a.hmap(p), b.hmap(p)));
        }
        if p.y < a.m {
            edges.push((Point::new(p.x, p.y + 1), a.vmap(p), b.vmap(p)));
        }
        for (q, ea, eb) in edges {
            let dims = (a.dim(p), b.dim(p), a.dim(q), b.dim(q));
            edge_rows(&mut rows, total, (at(p), at(q)), ea, eb, dims);
        }
    }
    let system = Matrix::from_columns(a.field, total, &rows).transpose();
    let basis = kernel_vectors(&system)
        .into_iter()
        .map(|v| {
            let maps = a
                .points()
                .map(|p| {
                    let (da, db) = (a.dim(p), b.dim(p));
                    let o = at(p);
                    let mut m = Matrix::zeros(a.field, db, da);
                    for i in 0..db {
                        for j in 0..da {
                            m.set(i, j, v[o + i * da + j]);
                        }
                    }
                    m
                })
                .collect();
            Morphism { maps }
        })
        .collect();
    Ok(basis)
}

/// `dim Hom(A, B)`.
pub fn hom_dim(a: &GridModule, b: &GridModule) -> Result<usize, ModuleError> {
    Ok(hom_basis(a, b)?.len())
}
