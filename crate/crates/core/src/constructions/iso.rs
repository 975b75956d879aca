//! One-sided randomized isomorphism test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid_module::{hom_basis, GridModule};
use crate::linalg::{rank, Matrix};

pub const DEFAULT_TRIALS: usize = 64;

/// Outcome of [`iso_test`]. There is no negative verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// A random morphism (at the 1-based trial) was invertible at every point.
    Confirmed {
        trial: usize,
    },
    Undetermined(String),
}

impl IsoVerdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, IsoVerdict::Confirmed { .. })
    }
}

/// Samples random combinations of a basis of `Hom(a, b)` and looks for one
/// that is invertible everywhere. Equal modules are confirmed at trial 1.
pub fn iso_test(a: &GridModule, b: &GridModule, trials: usize, seed: u64) -> IsoVerdict {
    if a.extent() != b.extent() {
        return IsoVerdict::Undetermined(format!("grids {:?} and {:?} differ", a.extent(), b.extent()));
    }
    if a.field() != b.field() {
        return IsoVerdict::Undetermined("modules over different fields".into());
    }
    if let Some(p) = a.points().find(|&p| a.dim(p) != b.dim(p)) {
        return IsoVerdict::Undetermined(format!("dimensions differ at {p}: {} vs {}", a.dim(p), b.dim(p)));
    }
    if a == b {
        return IsoVerdict::Confirmed { trial: 1 };
    }
    let basis = match hom_basis(a, b) {
        Ok(basis) => basis,
        Err(e) => return IsoVerdict::Undetermined(e.to_string()),
    };
    if basis.is_empty() {
        return if a.total_dim() == 0 {
            IsoVerdict::Confirmed { trial: 1 }
        } else {
            IsoVerdict::Undetermined("Hom(A, B) is zero".into())
        };
    }
    let f = a.field();
    let points: Vec<_> = a.points().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 1..=trials {
        let coeffs: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..f.modulus())).collect();
        let invertible = points.iter().enumerate().all(|(i, &p)| {
            let d = a.dim(p);
            let map = basis
                .iter()
                .zip(&coeffs)
                .fold(Matrix::zeros(f, d, d), |acc, (h, &c)| acc.add(&h.maps[i].scale(c)));
            rank(&map) == d
        });
        if invertible {
            return IsoVerdict::Confirmed { trial };
        }
    }
    IsoVerdict::Undetermined(format!("no invertible morphism in {trials} trials"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::examples::{ex3_left, ex3_right, indecgrid};
    use crate::grid_module::Point;
    use crate::linalg::Field;

    #[test]
    fn identical_modules() {
        let f = Field::new(101).unwrap();
        let g = indecgrid(f, 3).unwrap();
        assert_eq!(iso_test(&g, &g, DEFAULT_TRIALS, 0), IsoVerdict::Confirmed { trial: 1 });
    }

    #[test]
    fn change_of_basis_is_detected() {
        let f = Field::new(101).unwrap();
        let g = indecgrid(f, 2).unwrap();
        // swap the two coordinates wherever the space is 2-dimensional
        let swap = Matrix::from_rows(f, &[vec![0, 1], vec![1, 0]]);
        let bases: Vec<Matrix> = g
            .points()
            .map(|p| {
                if g.dim(p) == 2 {
                    swap.clone()
                } else {
                    Matrix::identity(f, g.dim(p))
                }
            })
            .collect();
        let h = g.change_basis(&bases, &bases);
        assert_ne!(g, h);
        assert!(iso_test(&g, &h, DEFAULT_TRIALS, 7).is_confirmed());
    }

    #[test]
    fn dimension_mismatch_is_undetermined() {
        let f = Field::new(101).unwrap();
        let (a, b, c) = (Point::new(1, 1), Point::new(2, 1), Point::new(1, 2));
        let kab = GridModule::rectangle(f, 2, 2, a, b);
        let kac = GridModule::rectangle(f, 2, 2, a, c);
        let verdict = iso_test(&kab, &kac, DEFAULT_TRIALS, 0);
        assert!(
            matches!(verdict, IsoVerdict::Undetermined(ref why) if why.contains("(2,1)")),
            "{verdict:?}"
        );
    }

    #[test]
    fn same_dimensions_different_modules() {
        let f = Field::new(101).unwrap();
        let verdict = iso_test(&ex3_left(f), &ex3_right(f), DEFAULT_TRIALS, 0);
        assert!(!verdict.is_confirmed());
    }
}
