//! Modules over finite posets given by Hasse diagrams.

use crate::error::ConstructionError;
use crate::linalg::{kernel_vectors, Field, Matrix};

use super::examples::{axis, diagonal};

/// A finite poset on `0..len` given by its cover relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    len: usize,
    covers: Vec<(usize, usize)>,
    /// `below[a][b]` iff `a <= b`.
    below: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Rejects out-of-range elements, cycles and covers implied by
    /// transitivity.
    #[allow(clippy::needless_range_loop)]
    pub fn new(len: usize, covers: Vec<(usize, usize)>) -> Result<Self, ConstructionError> {
        let bad = |m: String| Err(ConstructionError::BadPoset(m));
        let mut below = vec![vec![false; len]; len];
        for (a, row) in below.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in &covers {
            if a >= len || b >= len {
                return bad(format!("cover {a} -> {b} outside 0..{len}"));
            }
            if a == b {
                return bad(format!("loop at {a}"));
            }
            below[a][b] = true;
        }
        // transitive closure
        for k in 0..len {
            for a in 0..len {
                if below[a][k] {
                    for b in 0..len {
                        if below[k][b] {
                            below[a][b] = true;
                        }
                    }
                }
            }
        }
        for a in 0..len {
            for b in a + 1..len {
                if below[a][b] && below[b][a] {
                    return bad(format!("cycle through {a} and {b}"));
                }
            }
        }
        for &(a, b) in &covers {
            if (0..len).any(|c| c != a && c != b && below[a][c] && below[c][b]) {
                return bad(format!("{a} -> {b} is not a cover"));
            }
        }
        Ok(FinitePoset { len, covers, below })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[a][b]
    }

    /// The induced subposet on `keep` (increasing), renumbered `0..keep.len()`.
    pub fn induced(&self, keep: &[usize]) -> FinitePoset {
        let k = keep.len();
        let lt = |i: usize, j: usize| i != j && self.leq(keep[i], keep[j]);
        let covers = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .filter(|&(i, j)| lt(i, j) && !(0..k).any(|c| lt(i, c) && lt(c, j)))
            .collect();
        FinitePoset::new(k, covers).expect("induced subposet")
    }

    /// A chain from `a` to `b` through covers, when `a <= b`.
    fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if !self.leq(a, b) {
            return None;
        }
        let mut out = Vec::new();
        let mut cur = a;
        while cur != b {
            let (i, &(_, next)) = self
                .covers
                .iter()
                .enumerate()
                .find(|(_, &(u, v))| u == cur && self.leq(v, b))
                .expect("a cover towards b");
            out.push(i);
            cur = next;
        }
        Some(out)
    }
}

/// A representation of a finite poset: a space per element and a map per
/// cover, commuting along all paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetModule {
    field: Field,
    poset: FinitePoset,
    dims: Vec<usize>,
    /// One map per cover, in the poset's cover order.
    maps: Vec<Matrix>,
}

impl PosetModule {
    pub fn new(field: Field, poset: FinitePoset, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self, ConstructionError> {
        let bad = |m: String| Err(ConstructionError::BadPosetModule(m));
        if dims.len() != poset.len() || maps.len() != poset.covers().len() {
            return bad("one dimension per element and one map per cover".into());
        }
        for (&(a, b), mat) in poset.covers().iter().zip(&maps) {
            if mat.shape() != (dims[b], dims[a]) {
                return bad(format!("map {a} -> {b} has shape {:?}", mat.shape()));
            }
        }
        let module = PosetModule {
            field,
            poset,
            dims,
            maps,
        };
        module.check_commutes()?;
        Ok(module)
    }

    /// Every pair of paths between the same endpoints composes to the same
    /// map. It suffices to compare each cover-first path with the chosen one.
    fn check_commutes(&self) -> Result<(), ConstructionError> {
        for a in 0..self.poset.len() {
            for b in 0..self.poset.len() {
                if a == b || !self.poset.leq(a, b) {
                    continue;
                }
                let want = self.map(a, b);
                for (i, &(u, v)) in self.poset.covers().iter().enumerate() {
                    if u == a && self.poset.leq(v, b) {
                        let got = self.map(v, b).mul(&self.maps[i]);
                        if got != want {
                            return Err(ConstructionError::BadPosetModule(format!("paths {a} -> {b} disagree")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Indicator module of `support`.
    pub fn indicator(field: Field, poset: FinitePoset, support: impl Fn(usize) -> bool) -> Result<Self, ConstructionError> {
        let dims: Vec<usize> = (0..poset.len()).map(|u| support(u) as usize).collect();
        let maps = poset
            .covers()
            .iter()
            .map(|&(a, b)| {
                if dims[a] == 1 && dims[b] == 1 {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zeros(field, dims[b], dims[a])
                }
            })
            .collect();
        PosetModule::new(field, poset, dims, maps)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn dim(&self, u: usize) -> usize {
        self.dims[u]
    }

    pub fn cover_map(&self, i: usize) -> &Matrix {
        &self.maps[i]
    }

    /// The structure map `a -> b`; panics unless `a <= b`.
    pub fn map(&self, a: usize, b: usize) -> Matrix {
        let path = self.poset.path(a, b).expect("comparable elements");
        path.iter()
            .fold(Matrix::identity(self.field, self.dims[a]), |acc, &i| self.maps[i].mul(&acc))
    }

    /// Restriction to the induced subposet on `keep` (increasing).
    pub fn restrict(&self, keep: &[usize]) -> PosetModule {
        let poset = self.poset.induced(keep);
        let maps = poset.covers().iter().map(|&(i, j)| self.map(keep[i], keep[j])).collect();
        let dims = keep.iter().map(|&u| self.dims[u]).collect();
        PosetModule::new(self.field, poset, dims, maps).expect("restriction of a valid module")
    }
}

/// The dart poset on elements `1..=n+2`, stored at indices `0..=n+1`:
/// every `i <= n+1` is covered by `n+2`.
pub fn dart_poset(n: usize) -> Result<FinitePoset, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::TooSmall(n));
    }
    FinitePoset::new(n + 2, (0..=n).map(|i| (i, n + 1)).collect())
}

/// `k` at `1..=n+1`, `k^n` at `n+2`; axis inclusions from `1..=n`, the
/// diagonal from `n+1`.
pub fn dart(field: Field, n: usize) -> Result<PosetModule, ConstructionError> {
    let poset = dart_poset(n)?;
    let mut dims = vec![1; n + 1];
    dims.push(n);
    let mut maps: Vec<Matrix> = (1..=n).map(|i| axis(field, n, i)).collect();
    maps.push(diagonal(field, n));
    PosetModule::new(field, poset, dims, maps)
}

/// `dim Hom(a, b)`: solutions of `B(e) f_u = f_v A(e)` over all covers `e: u -> v`.
pub fn hom_dim_poset(a: &PosetModule, b: &PosetModule) -> Result<usize, ConstructionError> {
    if a.poset != b.poset || a.field != b.field {
        return Err(ConstructionError::PosetMismatch);
    }
    let f = a.field;
    let mut offsets = Vec::with_capacity(a.poset.len());
    let mut total = 0;
    for u in 0..a.poset.len() {
        offsets.push(total);
        total += b.dims[u] * a.dims[u];
    }
    // unknown (r, c) of f_u sits at offsets[u] + r * dim a_u + c
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (i, &(u, v)) in a.poset.covers().iter().enumerate() {
        let (ea, eb) = (&a.maps[i], &b.maps[i]);
        for r in 0..b.dims[v] {
            for c in 0..a.dims[u] {
                let mut row = vec![0u32; total];
                // (B(e) f_u)[r][c] = sum_k B[r][k] f_u[k][c]
                for k in 0..b.dims[u] {
                    let idx = offsets[u] + k * a.dims[u] + c;
                    row[idx] = f.add(row[idx], eb.get(r, k));
                }
                // (f_v A(e))[r][c] = sum_k f_v[r][k] A[k][c]
                for k in 0..a.dims[v] {
                    let idx = offsets[v] + r * a.dims[v] + k;
                    row[idx] = f.sub(row[idx], ea.get(k, c));
                }
                rows.push(row);
            }
        }
    }
    if total == 0 {
        return Ok(0);
    }
    let system = Matrix::from_columns(f, total, &rows).transpose();
    Ok(kernel_vectors(&system).len())
}
