//! Right Kan extensions of poset modules along grid embeddings.

use crate::error::ConstructionError;
use crate::grid_module::{GridModule, Point};
use crate::linalg::{kernel_vectors, Matrix, Solver};

use super::poset::{dart_poset, FinitePoset, PosetModule};

/// An injective, order-preserving and order-reflecting map from a finite
/// poset into the `n x m` grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridEmbedding {
    poset: FinitePoset,
    n: usize,
    m: usize,
    points: Vec<Point>,
}

impl GridEmbedding {
    pub fn new(poset: FinitePoset, n: usize, m: usize, points: Vec<Point>) -> Result<Self, ConstructionError> {
        let bad = |m: String| Err(ConstructionError::NotFaithful(m));
        if points.len() != poset.len() {
            return bad(format!("{} points for {} elements", points.len(), poset.len()));
        }
        for (u, p) in points.iter().enumerate() {
            if p.x < 1 || p.y < 1 || p.x > n || p.y > m {
                return bad(format!("element {u} lands outside the grid at {p}"));
            }
        }
        for a in 0..points.len() {
            for b in 0..points.len() {
                if a != b && points[a] == points[b] {
                    return bad(format!("elements {a} and {b} both land on {}", points[a]));
                }
                if poset.leq(a, b) != points[a].leq(points[b]) {
                    return bad(format!("order between {a} and {b} is not preserved and reflected"));
                }
            }
        }
        Ok(GridEmbedding { poset, n, m, points })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn extent(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn point(&self, u: usize) -> Point {
        self.points[u]
    }
}

/// The embedding of the dart into the `(n+1) x (n+1)` grid: element `i`
/// goes to `(i, n+2-i)` and the top to `(n+1, n+1)`.
pub fn phi(n: usize) -> Result<GridEmbedding, ConstructionError> {
    let poset = dart_poset(n)?;
    let mut points: Vec<Point> = (1..=n + 1).map(|i| Point::new(i, n + 2 - i)).collect();
    points.push(Point::new(n + 1, n + 1));
    GridEmbedding::new(poset, n + 1, n + 1, points)
}

/// The limit of `module` over `{u : e(u) >= t}`, as compatible families.
struct Limit {
    upset: Vec<usize>,
    /// Start of each upset element's block in the product.
    offsets: Vec<usize>,
    /// Basis of the limit, one column per vector.
    basis: Matrix,
}

fn limit_at(module: &PosetModule, e: &GridEmbedding, t: Point) -> Limit {
    let f = module.field();
    let upset: Vec<usize> = (0..e.poset().len()).filter(|&u| t.leq(e.point(u))).collect();
    let mut offsets = Vec::with_capacity(upset.len());
    let mut total = 0;
    for &u in &upset {
        offsets.push(total);
        total += module.dim(u);
    }
    let block = |u: usize| offsets[upset.iter().position(|&w| w == u).unwrap()];
    // one block row N(e) v_u - v_u' per cover inside the upset
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (i, &(u, v)) in e.poset().covers().iter().enumerate() {
        if !(upset.contains(&u) && upset.contains(&v)) {
            continue;
        }
        let map = module.cover_map(i);
        for r in 0..module.dim(v) {
            let mut row = vec![0u32; total];
            for c in 0..module.dim(u) {
                row[block(u) + c] = map.get(r, c);
            }
            let k = block(v) + r;
            row[k] = f.sub(row[k], 1);
            rows.push(row);
        }
    }
    let basis = if rows.is_empty() {
        Matrix::identity(f, total)
    } else {
        let system = Matrix::from_columns(f, total, &rows).transpose();
        Matrix::from_columns(f, total, &kernel_vectors(&system))
    };
    Limit { upset, offsets, basis }
}

/// Restricts the limit cone at `from` to the smaller upset of `to` and
/// rewrites it in the basis of the limit at `to`.
fn restriction(module: &PosetModule, from: &Limit, to: &Limit) -> Matrix {
    let f = module.field();
    let mut keep = Vec::new();
    for &u in &to.upset {
        let at = from.offsets[from.upset.iter().position(|&w| w == u).unwrap()];
        keep.extend(at..at + module.dim(u));
    }
    let projected = from.basis.select_rows(&keep);
    let solver = Solver::new(&to.basis);
    let columns: Vec<Vec<u32>> = projected
        .columns()
        .iter()
        .map(|v| solver.solve(v).expect("a compatible family restricts to one"))
        .collect();
    Matrix::from_columns(f, to.basis.cols(), &columns)
}

/// `(Ran_e N)_t = lim N|{u : e(u) >= t}`, with the limit over an empty
/// upset taken to be zero.
pub fn ran_extension(module: &PosetModule, e: &GridEmbedding) -> Result<GridModule, ConstructionError> {
    if module.poset() != e.poset() {
        return Err(ConstructionError::PosetMismatch);
    }
    let (n, m) = e.extent();
    let limits: Vec<Limit> = (1..=m)
        .flat_map(|y| (1..=n).map(move |x| Point::new(x, y)))
        .map(|t| limit_at(module, e, t))
        .collect();
    let at = |p: Point| &limits[(p.y - 1) * n + (p.x - 1)];
    let mut g = GridModule::with_dims(module.field(), n, m, |p| at(p).basis.cols());
    for p in g.points().collect::<Vec<_>>() {
        if p.x < n {
            g.set_hmap(p, restriction(module, at(p), at(Point::new(p.x + 1, p.y))))?;
        }
        if p.y < m {
            g.set_vmap(p, restriction(module, at(p), at(Point::new(p.x, p.y + 1))))?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::examples::indecgrid;
    use crate::constructions::poset::{dart, hom_dim_poset};
    use crate::grid_module::hom_dim;
    use crate::linalg::Field;

    #[test]
    fn phi_is_fully_faithful() {
        for n in 2..=5 {
            let e = phi(n).unwrap();
            assert_eq!(e.point(n + 1), Point::new(n + 1, n + 1));
            assert_eq!(e.point(0), Point::new(1, n + 1));
        }
    }

    #[test]
    fn unfaithful_embeddings_are_rejected() {
        let chain = FinitePoset::new(2, vec![(0, 1)]).unwrap();
        // incomparable images
        assert!(GridEmbedding::new(chain.clone(), 3, 3, vec![Point::new(1, 2), Point::new(2, 1)]).is_err());
        assert!(GridEmbedding::new(chain.clone(), 3, 3, vec![Point::new(1, 1), Point::new(1, 1)]).is_err());
        assert!(GridEmbedding::new(chain.clone(), 2, 2, vec![Point::new(1, 1), Point::new(3, 1)]).is_err());
        let antichain = FinitePoset::new(2, vec![]).unwrap();
        // comparable images of incomparable elements
        assert!(GridEmbedding::new(antichain, 3, 3, vec![Point::new(1, 1), Point::new(2, 2)]).is_err());
    }

    #[test]
    fn ran_of_the_dart_is_the_grid_module() {
        let f = Field::new(101).unwrap();
        for n in 2..=4 {
            let ran = ran_extension(&dart(f, n).unwrap(), &phi(n).unwrap()).unwrap();
            assert!(ran.is_valid());
            assert_eq!(ran, indecgrid(f, n).unwrap());
        }
    }

    #[test]
    fn empty_upsets_give_zero() {
        let f = Field::gf2();
        let p = FinitePoset::new(1, vec![]).unwrap();
        let e = GridEmbedding::new(p.clone(), 3, 3, vec![Point::new(2, 2)]).unwrap();
        let point = PosetModule::indicator(f, p, |_| true).unwrap();
        let g = ran_extension(&point, &e).unwrap();
        assert_eq!(g, GridModule::rectangle(f, 3, 3, Point::new(1, 1), Point::new(2, 2)));
    }

    #[test]
    fn extension_preserves_endomorphisms() {
        let f = Field::new(101).unwrap();
        for n in 2..=3 {
            let e = phi(n).unwrap();
            let mut modules = vec![dart(f, n).unwrap()];
            for j in 0..=n {
                modules.push(PosetModule::indicator(f, e.poset().clone(), |u| u == j || u == n + 1).unwrap());
            }
            for module in modules {
                let ran = ran_extension(&module, &e).unwrap();
                assert_eq!(hom_dim(&ran, &ran).unwrap(), hom_dim_poset(&module, &module).unwrap());
            }
        }
    }

    #[test]
    fn ran_of_a_two_element_interval() {
        // k on {1, n+2}: the anti-diagonal point (1, n+1) and everything above
        // the anti-diagonal
        let f = Field::gf2();
        for n in 2..=4 {
            let e = phi(n).unwrap();
            let k = PosetModule::indicator(f, e.poset().clone(), |u| u == 0 || u == n + 1).unwrap();
            let want = GridModule::indicator(f, n + 1, n + 1, |p| p == Point::new(1, n + 1) || p.x + p.y > n + 2);
            assert_eq!(ran_extension(&k, &e).unwrap(), want);
        }
    }
}
