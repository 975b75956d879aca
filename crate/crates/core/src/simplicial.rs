//! Finite simplicial complexes and homology bases of their subcomplexes.
//!
//! Chains are vectors over *all* `p`-simplices of the ambient complex, so
//! cycles of different subcomplexes live in one coordinate space and
//! inclusion-induced maps need no re-indexing.

use std::collections::HashMap;

use crate::error::BifiltrationError;
use crate::linalg::{kernel_vectors, Echelon, Field, Matrix, Solver};

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// Simplex indices grouped by dimension, in input order.
    by_dim: Vec<Vec<usize>>,
    /// Position of each simplex inside its `by_dim` group.
    pos: Vec<usize>,
}

impl SimplicialComplex {
    /// Checks vertex order, duplicates and closure under faces.
    pub fn new(simplices: Vec<Vec<u32>>) -> Result<Self, BifiltrationError> {
        let mut index = HashMap::with_capacity(simplices.len());
        for (i, s) in simplices.iter().enumerate() {
            if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(BifiltrationError::Unsorted(s.clone()));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(BifiltrationError::Duplicate(s.clone()));
            }
        }
        let mut by_dim: Vec<Vec<usize>> = Vec::new();
        let mut pos = Vec::with_capacity(simplices.len());
        for (i, s) in simplices.iter().enumerate() {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            pos.push(by_dim[d].len());
            by_dim[d].push(i);
        }
        let complex = SimplicialComplex {
            simplices,
            index,
            by_dim,
            pos,
        };
        for (i, s) in complex.simplices.iter().enumerate() {
            for face in facets(s) {
                if !complex.index.contains_key(&face) {
                    return Err(BifiltrationError::MissingFace {
                        simplex: complex.simplices[i].clone(),
                        face,
                    });
                }
            }
        }
        Ok(complex)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, i: usize) -> &[u32] {
        &self.simplices[i]
    }

    pub fn simplices(&self) -> &[Vec<u32>] {
        &self.simplices
    }

    pub fn dim_of(&self, i: usize) -> usize {
        self.simplices[i].len() - 1
    }

    pub fn find(&self, vertices: &[u32]) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    /// Indices of the `p`-simplices.
    pub fn cells(&self, p: usize) -> &[usize] {
        self.by_dim.get(p).map_or(&[], |v| v.as_slice())
    }

    /// Position of a simplex among the simplices of its dimension.
    pub fn position(&self, i: usize) -> usize {
        self.pos[i]
    }

    /// Codimension-1 faces of simplex `i` with their boundary signs.
    pub fn boundary(&self, i: usize) -> Vec<(usize, bool)> {
        let s = &self.simplices[i];
        if s.len() == 1 {
            return Vec::new();
        }
        facets(s)
            .enumerate()
            .map(|(k, face)| (self.index[&face], k % 2 == 1))
            .collect()
    }

    /// Boundary matrix `C_p -> C_{p-1}` over all simplices (rows: `(p-1)`-cells).
    pub fn boundary_matrix(&self, field: Field, p: usize) -> Matrix {
        let cols = self.cells(p);
        let rows = if p == 0 { 0 } else { self.cells(p - 1).len() };
        let mut m = Matrix::zeros(field, rows, cols.len());
        if p == 0 {
            return m;
        }
        for (j, &c) in cols.iter().enumerate() {
            for (face, negative) in self.boundary(c) {
                let v = if negative { field.neg(1) } else { 1 };
                m.set(self.pos[face], j, v);
            }
        }
        m
    }

    /// Whether the simplices selected by `member` form a subcomplex.
    pub fn is_subcomplex(&self, member: impl Fn(usize) -> bool) -> bool {
        (0..self.len())
            .filter(|&i| member(i))
            .all(|i| self.boundary(i).iter().all(|&(f, _)| member(f)))
    }

    /// Homology basis of the subcomplex selected by `member` in degree `p`.
    pub fn homology(&self, field: Field, p: usize, member: impl Fn(usize) -> bool) -> HomologyBasis {
        let ambient = self.cells(p).len();
        let upper = self.boundary_matrix(field, p + 1);
        let upper_cols: Vec<usize> = self
            .cells(p + 1)
            .iter()
            .enumerate()
            .filter(|&(_, &c)| member(c))
            .map(|(j, _)| j)
            .collect();
        let live: Vec<usize> = self
            .cells(p)
            .iter()
            .enumerate()
            .filter(|&(_, &c)| member(c))
            .map(|(j, _)| j)
            .collect();
        let lower = self.boundary_matrix(field, p).select_columns(&live);
        let cycles: Vec<Vec<u32>> = kernel_vectors(&lower)
            .into_iter()
            .map(|k| {
                let mut v = vec![0u32; ambient];
                for (&j, &x) in live.iter().zip(&k) {
                    v[j] = x;
                }
                v
            })
            .collect();
        HomologyBasis::complete(field, ambient, upper.select_columns(&upper_cols).columns(), cycles)
    }
}

/// Facets of a sorted simplex, the `k`-th one omitting vertex `k`.
fn facets(s: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    let n = if s.len() > 1 { s.len() } else { 0 };
    (0..n).map(move |k| {
        let mut f = s.to_vec();
        f.remove(k);
        f
    })
}

/// A basis of `H_p` given by cycles that complete a basis of the boundaries.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    field: Field,
    ambient: usize,
    n_boundaries: usize,
    cycles: Vec<Vec<u32>>,
    /// Solves against `[boundaries | cycles]`.
    solver: Solver,
}

impl HomologyBasis {
    /// Greedy completion: boundaries first, then the given cycles.
    pub fn complete(field: Field, ambient: usize, boundaries: Vec<Vec<u32>>, cycles: Vec<Vec<u32>>) -> Self {
        let mut ech = Echelon::new(field, ambient);
        let bounds: Vec<Vec<u32>> = boundaries.into_iter().filter(|b| ech.insert(b)).collect();
        let reps: Vec<Vec<u32>> = cycles.into_iter().filter(|z| ech.insert(z)).collect();
        let mut all = bounds.clone();
        all.extend(reps.iter().cloned());
        let solver = Solver::new(&Matrix::from_columns(field, ambient, &all));
        HomologyBasis {
            field,
            ambient,
            n_boundaries: bounds.len(),
            cycles: reps,
            solver,
        }
    }

    pub fn dim(&self) -> usize {
        self.cycles.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Representative cycles, one per basis class.
    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    /// Coordinates of the class of cycle `z`; `None` when `z` is not a cycle
    /// of this subcomplex.
    pub fn coordinates(&self, z: &[u32]) -> Option<Vec<u32>> {
        self.solver.solve(z).map(|x| x[self.n_boundaries..].to_vec())
    }

    /// Matrix of the map induced by an inclusion of subcomplexes.
    pub fn induced_map(&self, target: &HomologyBasis) -> Matrix {
        assert_eq!(self.ambient, target.ambient);
        let cols: Vec<Vec<u32>> = self
            .cycles
            .iter()
            .map(|z| target.coordinates(z).expect("source cycle must be a cycle of the target"))
            .collect();
        Matrix::from_columns(self.field, target.dim(), &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> SimplicialComplex {
        SimplicialComplex::new(vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn closure_is_checked() {
        assert!(matches!(
            SimplicialComplex::new(vec![vec![0], vec![0, 1]]),
            Err(BifiltrationError::MissingFace { .. })
        ));
        assert!(matches!(
            SimplicialComplex::new(vec![vec![1, 0]]),
            Err(BifiltrationError::Unsorted(_))
        ));
        assert!(matches!(
            SimplicialComplex::new(vec![vec![0], vec![0]]),
            Err(BifiltrationError::Duplicate(_))
        ));
    }

    #[test]
    fn boundary_squares_to_zero() {
        let f = Field::new(7).unwrap();
        let k = SimplicialComplex::new(vec![
            vec![0],
            vec![1],
            vec![2],
            vec![3],
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 3],
            vec![1, 3],
            vec![2, 3],
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 3],
            vec![1, 2, 3],
            vec![0, 1, 2, 3],
        ])
        .unwrap();
        for p in 1..=3 {
            assert!(k.boundary_matrix(f, p).mul(&k.boundary_matrix(f, p + 1)).is_zero());
        }
        // a solid tetrahedron is acyclic
        assert_eq!(k.homology(f, 0, |_| true).dim(), 1);
        assert_eq!(k.homology(f, 1, |_| true).dim(), 0);
        assert_eq!(k.homology(f, 2, |_| true).dim(), 0);
        // its boundary sphere has H_2 = k
        assert_eq!(k.homology(f, 2, |i| i < 14).dim(), 1);
    }

    #[test]
    fn circle_homology_and_inclusions() {
        let f = Field::gf2();
        let k = circle();
        let full = k.homology(f, 1, |_| true);
        assert_eq!(full.dim(), 1);
        assert_eq!(k.homology(f, 0, |_| true).dim(), 1);
        let path = k.homology(f, 0, |i| i != 5);
        assert_eq!(path.dim(), 1);
        let points = k.homology(f, 0, |i| i < 3);
        assert_eq!(points.dim(), 3);
        let m = points.induced_map(&path);
        assert_eq!(m.shape(), (1, 3));
        assert_eq!(crate::linalg::rank(&m), 1);
    }
}
