//! Dense exact linear algebra over prime fields.
//!
//! The modulus is a runtime value carried by [`Field`], so a single build
//! serves 𝔽_2 as well as larger primes. Every [`Matrix`] remembers its field;
//! mixing fields is a programming error and panics.
//!
//! Subspaces are stored in reduced column echelon form, which makes them
//! canonical: two [`Subspace`]s are equal iff they span the same space.

use std::fmt;

use crate::error::LinalgError;

/// Largest supported modulus, `2^31 - 1`.
pub const MAX_MODULUS: u32 = 2_147_483_647;

/// A prime field 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

impl Field {
    /// Builds 𝔽_p, rejecting composite or out-of-range moduli.
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if !(2..=MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(LinalgError::BadModulus(p));
        }
        Ok(Field { p })
    }

    pub const fn gf2() -> Self {
        Field { p: 2 }
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        // extended Euclid on signed 64-bit
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        self.reduce(t0)
    }

    /// Signed representative in `(-p/2, p/2]`, used for display.
    pub fn signed(self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Default for Field {
    fn default() -> Self {
        Field::gf2()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} over {} [", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ";")?;
            }
            for c in 0..self.cols {
                write!(f, " {}", self.field.signed(self.get(r, c)))?;
            }
        }
        write!(f, " ]")
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing mod p.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows_with_cols(field, cols, rows)
    }

    /// Like [`Matrix::from_rows`] but with an explicit column count, so that
    /// `r x 0` and `0 x c` shapes can be expressed.
    pub fn from_rows_with_cols(field: Field, cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.reduce(v));
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.p);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let p = self.field.p as u64;
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                let rrow = rhs.row(k);
                for (slot, &b) in acc.iter_mut().zip(rrow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.set(i, j, v as u32);
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "shape mismatch in apply");
        let p = self.field.p as u64;
        (0..self.rows)
            .map(|i| {
                let s = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                s as u32
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { data, ..*self }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { data, ..*self }
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..rhs.cols {
                out.set(r, self.cols + c, rhs.get(r, c));
            }
        }
        out
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix {
            field: self.field,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows + rhs.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..rhs.rows {
            for c in 0..rhs.cols {
                out.set(self.rows + r, self.cols + c, rhs.get(r, c));
            }
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            self.swap_rows(lead, pr);
            let inv = f.inv(self.get(lead, c));
            self.scale_row(lead, inv);
            for r in 0..self.rows {
                if r != lead {
                    let factor = self.get(r, c);
                    if factor != 0 {
                        self.row_axpy(r, lead, f.neg(factor));
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, k: u32) {
        let f = self.field;
        for v in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *v = f.mul(*v, k);
        }
    }

    /// row[dst] += k * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, k: u32) {
        let f = self.field;
        let cols = self.cols;
        for c in 0..cols {
            let s = self.data[src * cols + c];
            if s != 0 {
                let d = &mut self.data[dst * cols + c];
                *d = f.add(*d, f.mul(s, k));
            }
        }
    }
}

/// Rank over the field of `m`.
pub fn rank(m: &Matrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // eliminate along the shorter side
    if m.rows > m.cols {
        m.transpose().rref().1.len()
    } else {
        m.rref().1.len()
    }
}

/// A subspace of 𝔽_p^ambient, canonically represented.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    /// Columns in reduced column echelon form.
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, ambient, 0),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
        }
    }

    /// Span of the columns of `m`.
    pub fn span(m: &Matrix) -> Self {
        image_basis(m)
    }

    /// Span of the given vectors.
    pub fn span_vectors(field: Field, ambient: usize, vecs: &[Vec<u32>]) -> Self {
        image_basis(&Matrix::from_columns(field, ambient, vecs))
    }

    pub fn field(&self) -> Field {
        self.basis.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    /// Canonical basis, one vector per column.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        solve(&self.basis, v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && (0..self.dim()).all(|c| other.contains(&self.basis.column(c)))
    }
}

/// Basis of the null space of `m`, as a subspace of 𝔽_p^cols.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let vecs = kernel_vectors(m);
    Subspace::span_vectors(m.field, m.cols, &vecs)
}

/// Null-space basis read off the RREF: one vector per free column,
/// in increasing free-column order.
pub fn kernel_vectors(m: &Matrix) -> Vec<Vec<u32>> {
    let f = m.field;
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; m.cols];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(row, free));
        }
        out.push(v);
    }
    out
}

/// Column space of `m`, as a subspace of 𝔽_p^rows.
pub fn image_basis(m: &Matrix) -> Subspace {
    let (r, pivots) = m.transpose().rref();
    let basis = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>()).transpose();
    Subspace { ambient: m.rows, basis }
}

pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    check_ambient(a, b)?;
    Ok(image_basis(&a.basis.hstack(&b.basis)))
}

/// Intersection via the kernel of `[A | -B]`, projected through `A`.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    check_ambient(a, b)?;
    let stacked = a.basis.hstack(&b.basis.scale(a.field().neg(1)));
    let ker = kernel_vectors(&stacked);
    let da = a.dim();
    let vecs: Vec<Vec<u32>> = ker.iter().map(|x| a.basis.apply(&x[..da])).collect();
    Ok(Subspace::span_vectors(a.field(), a.ambient, &vecs))
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<(), LinalgError> {
    if a.ambient != b.ambient {
        return Err(LinalgError::AmbientMismatch(a.ambient, b.ambient));
    }
    assert_eq!(a.field(), b.field(), "field mismatch");
    Ok(())
}

/// Some `x` with `m x = b`, or `None` when `b` is outside the image of `m`.
pub fn solve(m: &Matrix, b: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(m.rows, b.len(), "solve: length mismatch");
    let bm = Matrix::from_columns(m.field, m.rows, &[b.to_vec()]);
    let (r, pivots) = m.hstack(&bm).rref();
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![0u32; m.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(row, m.cols);
    }
    Some(x)
}

/// Precomputed elimination of a fixed matrix, for solving many right-hand
/// sides against the same `m`.
#[derive(Clone, Debug)]
pub struct Solver {
    field: Field,
    cols: usize,
    /// Row operations: `transform * m = rref`.
    transform: Matrix,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(m: &Matrix) -> Self {
        let aug = m.hstack(&Matrix::identity(m.field, m.rows));
        let (r, piv) = aug.rref();
        let pivots: Vec<usize> = piv.into_iter().filter(|&c| c < m.cols).collect();
        let all_rows: Vec<usize> = (0..m.rows).collect();
        let tcols: Vec<usize> = (m.cols..m.cols + m.rows).collect();
        Solver {
            field: m.field,
            cols: m.cols,
            transform: r.select(&all_rows, &tcols),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let y = self.transform.apply(b);
        if y[self.pivots.len()..].iter().any(|&v| v != 0) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (row, &pc) in self.pivots.iter().enumerate() {
            x[pc] = y[row];
        }
        debug_assert!(x.iter().all(|&v| v < self.field.p));
        Some(x)
    }
}

/// Greedily extends the columns of `current` by vectors of `candidates`,
/// returning the candidates that were independent of everything before them.
pub fn extend_basis(field: Field, ambient: usize, current: &[Vec<u32>], candidates: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut echelon = Echelon::new(field, ambient);
    for v in current {
        echelon.insert(v);
    }
    candidates.iter().filter(|v| echelon.insert(v)).cloned().collect()
}

/// Incremental row-echelon accumulator for independence tests.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    ambient: usize,
    /// (pivot index, normalized vector) with pivot entry 1.
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(field: Field, ambient: usize) -> Self {
        Echelon {
            field,
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut w = v.to_vec();
        for (piv, row) in &self.rows {
            let c = w[*piv];
            if c != 0 {
                let k = f.neg(c);
                for (wi, &ri) in w.iter_mut().zip(row) {
                    if ri != 0 {
                        *wi = f.add(*wi, f.mul(ri, k));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(w[piv]);
        let w: Vec<u32> = w.iter().map(|&x| f.mul(x, inv)).collect();
        // keep earlier rows reduced at the new pivot
        for (_, row) in &mut self.rows {
            let c = row[piv];
            if c != 0 {
                let k = f.neg(c);
                for (ri, &wi) in row.iter_mut().zip(&w) {
                    if wi != 0 {
                        *ri = f.add(*ri, f.mul(wi, k));
                    }
                }
            }
        }
        self.rows.push((piv, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..p).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn field_rejects_composites() {
        assert!(Field::new(4).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(MAX_MODULUS).is_ok());
        assert_eq!(f(101).inv(100), 100);
        assert_eq!(f(7).mul(3, f(7).inv(3)), 1);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(Field::gf2(), 3)), 3);
        let ex1 = Matrix::from_rows(Field::gf2(), &[vec![1, 1], vec![0, 1]]);
        assert_eq!(rank(&ex1), 2);
        assert_eq!(rank(&Matrix::zeros(Field::gf2(), 4, 7)), 0);
    }

    #[test]
    fn kernel_examples() {
        let m = Matrix::from_rows(f(5), &[vec![1, -1]]);
        let k = kernel_basis(&m);
        assert_eq!(k, Subspace::span_vectors(f(5), 2, &[vec![1, 1]]));
        assert_eq!(kernel_basis(&Matrix::identity(f(5), 3)).dim(), 0);

        // enumerate F_2^2 and keep the vectors killed by [[1,1],[0,0]]
        let m = Matrix::from_rows(Field::gf2(), &[vec![1, 1], vec![0, 0]]);
        let killed: Vec<Vec<u32>> = all_vectors(2, 2)
            .into_iter()
            .filter(|v| m.apply(v).iter().all(|&x| x == 0))
            .collect();
        assert_eq!(killed.len(), 2);
        assert_eq!(kernel_basis(&m), Subspace::span_vectors(Field::gf2(), 2, &killed));
    }

    #[test]
    fn image_examples() {
        assert_eq!(
            image_basis(&Matrix::identity(Field::gf2(), 3)),
            Subspace::full(Field::gf2(), 3)
        );
        assert_eq!(image_basis(&Matrix::zeros(Field::gf2(), 3, 2)).dim(), 0);
        let m = Matrix::from_rows(Field::gf2(), &[vec![1, 1], vec![1, 1], vec![0, 1]]);
        let reachable: Vec<Vec<u32>> = all_vectors(2, 2).iter().map(|x| m.apply(x)).collect();
        assert_eq!(image_basis(&m), Subspace::span_vectors(Field::gf2(), 3, &reachable));
        assert_eq!(image_basis(&m).dim(), 2);
    }

    #[test]
    fn sum_and_intersection() {
        let g = Field::gf2();
        let x = Subspace::span_vectors(g, 2, &[vec![1, 0]]);
        let y = Subspace::span_vectors(g, 2, &[vec![0, 1]]);
        assert_eq!(sum(&x, &y).unwrap().dim(), 2);
        assert_eq!(intersect(&x, &y).unwrap().dim(), 0);
        assert_eq!(sum(&x, &x).unwrap(), x);
        assert_eq!(intersect(&x, &x).unwrap(), x);

        let f3 = f(3);
        let a = Subspace::span_vectors(f3, 3, &[vec![1, 1, 0]]);
        let b = Subspace::span_vectors(f3, 3, &[vec![1, 1, 0], vec![0, 0, 1]]);
        let common = all_vectors(3, 3)
            .into_iter()
            .filter(|v| a.contains(v) && b.contains(v))
            .count();
        assert_eq!(common, 3); // 3^1 elements
        assert_eq!(intersect(&a, &b).unwrap().dim(), 1);

        let z = Subspace::zero(g, 3);
        assert!(matches!(sum(&x, &z), Err(LinalgError::AmbientMismatch(2, 3))));
    }

    #[test]
    fn solve_examples() {
        let g = f(7);
        let id = Matrix::identity(g, 3);
        assert_eq!(solve(&id, &[1, 2, 3]), Some(vec![1, 2, 3]));
        let m = Matrix::from_rows(g, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(solve(&m, &[0, 0]), Some(vec![0, 0]));
        assert_eq!(solve(&m, &[1, 0]), None);
        let s = Solver::new(&m);
        assert_eq!(s.solve(&[1, 0]), None);
        let x = s.solve(&[3, 6]).unwrap();
        assert_eq!(m.apply(&x), vec![3, 6]);
    }

    #[test]
    fn echelon_tracks_span() {
        let g = Field::gf2();
        let mut e = Echelon::new(g, 3);
        assert!(e.insert(&[1, 1, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 0, 1]));
        assert!(e.contains(&[1, 0, 1]));
        assert_eq!(e.dim(), 2);
    }

    /// Every operation against brute-force enumeration of F_2^n for n <= 4.
    #[test]
    fn exhaustive_gf2_small() {
        use rand::{Rng, SeedableRng};
        let g = Field::gf2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..2)).collect()).collect();
            let m = Matrix::from_rows(g, &data);
            let domain = all_vectors(2, cols);
            let killed = domain.iter().filter(|v| m.apply(v).iter().all(|&x| x == 0)).count();
            let image: std::collections::HashSet<Vec<u32>> = domain.iter().map(|v| m.apply(v)).collect();
            assert_eq!(1usize << kernel_basis(&m).dim(), killed);
            assert_eq!(1usize << rank(&m), image.len());
            for b in all_vectors(2, rows) {
                assert_eq!(solve(&m, &b).is_some(), image.contains(&b));
            }
        }
    }
}
