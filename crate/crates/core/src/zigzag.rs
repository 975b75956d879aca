//! Zigzag persistence: complexes connected by inclusions pointing either way.
//!
//! The barcode is computed on the homology zigzag module by a left-to-right
//! sweep that keeps, at the current station, a basis adapted to the interval
//! decomposition of everything seen so far.

use std::fmt;
use std::sync::Arc;

use crate::error::BifiltrationError;
use crate::linalg::{kernel_vectors, rank, solve, Echelon, Field, Matrix};
use crate::simplicial::{HomologyBasis, SimplicialComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Station `k` includes into station `k+1`.
    Forward,
    /// Station `k+1` includes into station `k`.
    Backward,
}

/// One arrow: the simplices inserted (forward) or deleted (backward).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub direction: Direction,
    pub simplices: Vec<usize>,
}

/// A sequence of subcomplexes of one ambient complex.
#[derive(Clone, Debug)]
pub struct ZigzagComplex {
    complex: Arc<SimplicialComplex>,
    initial: Vec<usize>,
    steps: Vec<Step>,
}

impl ZigzagComplex {
    pub fn new(complex: Arc<SimplicialComplex>, initial: Vec<usize>, steps: Vec<Step>) -> Self {
        ZigzagComplex { complex, initial, steps }
    }

    /// One station per event; the first event must be an insertion and
    /// produces the first station.
    pub fn from_events(complex: Arc<SimplicialComplex>, events: &[(Direction, usize)]) -> Self {
        let (first, rest) = events.split_first().expect("at least one event");
        assert_eq!(first.0, Direction::Forward, "the first event must insert");
        let steps = rest
            .iter()
            .map(|&(direction, s)| Step {
                direction,
                simplices: vec![s],
            })
            .collect();
        ZigzagComplex::new(complex, vec![first.1], steps)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn station_count(&self) -> usize {
        self.steps.len() + 1
    }

    fn masks(&self) -> Vec<Vec<bool>> {
        let mut cur = vec![false; self.complex.len()];
        for &i in &self.initial {
            cur[i] = true;
        }
        let mut out = vec![cur.clone()];
        for step in &self.steps {
            let on = step.direction == Direction::Forward;
            for &i in &step.simplices {
                cur[i] = on;
            }
            out.push(cur.clone());
        }
        out
    }

    /// Sorted simplex indices present at station `k` (0-based).
    pub fn station(&self, k: usize) -> Vec<usize> {
        let mask = &self.masks()[k];
        (0..mask.len()).filter(|&i| mask[i]).collect()
    }

    /// Checks that every station is a complex and every step really inserts
    /// absent simplices or deletes present ones.
    pub fn validate(&self) -> Result<(), BifiltrationError> {
        let masks = self.masks();
        let bad = |step: usize, reason: String| BifiltrationError::BadZigzag { step, reason };
        for (k, mask) in masks.iter().enumerate() {
            if !self.complex.is_subcomplex(|i| mask[i]) {
                return Err(bad(k, "station is not closed under faces".into()));
            }
        }
        for (k, step) in self.steps.iter().enumerate() {
            let before = &masks[k];
            for &i in &step.simplices {
                let ok = match step.direction {
                    Direction::Forward => !before[i],
                    Direction::Backward => before[i],
                };
                if !ok {
                    return Err(bad(
                        k + 1,
                        format!("simplex {:?} cannot be {:?}", self.complex.simplex(i), step.direction),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The homology zigzag module in degree `p`.
    pub fn module(&self, field: Field, p: usize) -> ZigzagModule {
        let bases: Vec<HomologyBasis> = self
            .masks()
            .iter()
            .map(|mask| self.complex.homology(field, p, |i| mask[i]))
            .collect();
        let arrows = self
            .steps
            .iter()
            .enumerate()
            .map(|(k, step)| {
                let m = match step.direction {
                    Direction::Forward => bases[k].induced_map(&bases[k + 1]),
                    Direction::Backward => bases[k + 1].induced_map(&bases[k]),
                };
                (step.direction, m)
            })
            .collect();
        ZigzagModule {
            field,
            dims: bases.iter().map(|b| b.dim()).collect(),
            arrows,
        }
    }
}

/// A zigzag of vector spaces. Arrow `k` joins stations `k` and `k+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagModule {
    pub field: Field,
    pub dims: Vec<usize>,
    pub arrows: Vec<(Direction, Matrix)>,
}

/// A closed range of stations, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub birth: usize,
    pub death: usize,
}

impl Bar {
    pub fn spans(&self, i: usize, j: usize) -> bool {
        self.birth <= i && j <= self.death
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.birth, self.death)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZigzagBarcode {
    /// Sorted by `(birth, death)`.
    pub bars: Vec<Bar>,
}

impl ZigzagBarcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort();
        ZigzagBarcode { bars }
    }

    /// Number of bars containing every station of `[i, j]`.
    pub fn count_spanning(&self, i: usize, j: usize) -> usize {
        assert!(i <= j, "empty station range [{i}, {j}]");
        self.bars.iter().filter(|b| b.spans(i, j)).count()
    }

    /// Number of bars alive at station `k`.
    pub fn dim_at(&self, k: usize) -> usize {
        self.count_spanning(k, k)
    }

    /// The barcode of the reversed zigzag over `stations` stations.
    pub fn reversed(&self, stations: usize) -> ZigzagBarcode {
        let flip = |k: usize| stations - 1 - k;
        ZigzagBarcode::new(
            self.bars
                .iter()
                .map(|b| Bar {
                    birth: flip(b.death),
                    death: flip(b.birth),
                })
                .collect(),
        )
    }
}

/// Free-standing form of [`ZigzagBarcode::count_spanning`].
pub fn count_spanning(b: &ZigzagBarcode, i: usize, j: usize) -> usize {
    b.count_spanning(i, j)
}

/// Barcode of a simplicial zigzag in degree `p`.
pub fn zigzag_barcode(z: &ZigzagComplex, field: Field, p: usize) -> ZigzagBarcode {
    z.module(field, p).barcode()
}

struct Live {
    birth: usize,
    /// Bars with a smaller key may be added to bars with a larger key
    /// without breaking the decomposition of the prefix.
    key: i64,
    vector: Vec<u32>,
}

impl ZigzagModule {
    pub fn station_count(&self) -> usize {
        self.dims.len()
    }

    /// The reversed zigzag: station `k` becomes station `len-1-k`.
    pub fn reversed(&self) -> ZigzagModule {
        let flip = |d: Direction| match d {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        ZigzagModule {
            field: self.field,
            dims: self.dims.iter().rev().copied().collect(),
            arrows: self.arrows.iter().rev().map(|(d, m)| (flip(*d), m.clone())).collect(),
        }
    }

    /// Interval decomposition of the module.
    pub fn barcode(&self) -> ZigzagBarcode {
        let f = self.field;
        let unit = |d: usize, i: usize| {
            let mut v = vec![0u32; d];
            v[i] = 1;
            v
        };
        let mut done = Vec::new();
        let mut live: Vec<Live> = (0..self.dims[0])
            .map(|i| Live {
                birth: 0,
                key: 0,
                vector: unit(self.dims[0], i),
            })
            .collect();
        for (k, (direction, map)) in self.arrows.iter().enumerate() {
            let next_dim = self.dims[k + 1];
            live.sort_by_key(|b| b.key);
            let mut next = Vec::new();
            match direction {
                Direction::Forward => {
                    // reduced images with their pivot; earlier rows are zero at later pivots
                    let mut rows: Vec<(usize, Vec<u32>)> = Vec::new();
                    for bar in live {
                        let image = map.apply(&bar.vector);
                        let mut r = image.clone();
                        for (piv, row) in &rows {
                            let c = r[*piv];
                            if c != 0 {
                                for (x, &y) in r.iter_mut().zip(row) {
                                    *x = f.sub(*x, f.mul(c, y));
                                }
                            }
                        }
                        match r.iter().position(|&x| x != 0) {
                            None => done.push(Bar {
                                birth: bar.birth,
                                death: k,
                            }),
                            Some(piv) => {
                                let inv = f.inv(r[piv]);
                                rows.push((piv, r.iter().map(|&x| f.mul(x, inv)).collect()));
                                next.push(Live { vector: image, ..bar });
                            }
                        }
                    }
                    let mut ech = Echelon::new(f, next_dim);
                    for bar in &next {
                        ech.insert(&bar.vector);
                    }
                    for i in 0..next_dim {
                        let e = unit(next_dim, i);
                        if ech.insert(&e) {
                            next.push(Live {
                                birth: k + 1,
                                key: (k + 1) as i64,
                                vector: e,
                            });
                        }
                    }
                }
                Direction::Backward => {
                    let mut earlier: Vec<Vec<u32>> = Vec::new();
                    for bar in live {
                        let mut cols = map.columns();
                        cols.extend(earlier.iter().cloned());
                        let system = Matrix::from_columns(f, self.dims[k], &cols);
                        match solve(&system, &bar.vector) {
                            Some(x) => {
                                earlier.push(bar.vector);
                                next.push(Live {
                                    vector: x[..next_dim].to_vec(),
                                    birth: bar.birth,
                                    key: bar.key,
                                });
                            }
                            None => {
                                earlier.push(bar.vector);
                                done.push(Bar {
                                    birth: bar.birth,
                                    death: k,
                                });
                            }
                        }
                    }
                    for v in kernel_vectors(map) {
                        next.push(Live {
                            birth: k + 1,
                            key: -((k + 1) as i64),
                            vector: v,
                        });
                    }
                }
            }
            live = next;
        }
        let last = self.dims.len() - 1;
        done.extend(live.iter().map(|b| Bar {
            birth: b.birth,
            death: last,
        }));
        ZigzagBarcode::new(done)
    }

    /// Rank of the canonical map from the limit to the colimit of the
    /// restriction to stations `[i, j]`, which counts the bars spanning
    /// `[i, j]`. Brute force; used as an oracle.
    pub fn limit_colimit_rank(&self, i: usize, j: usize) -> usize {
        assert!(i <= j && j < self.dims.len());
        let f = self.field;
        let offsets: Vec<usize> = self.dims[i..=j]
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let total: usize = self.dims[i..=j].iter().sum();
        // each arrow a: src -> tgt yields the relation  map(x) at tgt  minus  x at src
        let mut lim_rows: Vec<Vec<u32>> = Vec::new();
        let mut colim_cols: Vec<Vec<u32>> = Vec::new();
        for k in i..j {
            let (dir, map) = &self.arrows[k];
            let (src, tgt) = match dir {
                Direction::Forward => (k, k + 1),
                Direction::Backward => (k + 1, k),
            };
            let (os, ot) = (offsets[src - i], offsets[tgt - i]);
            // limit constraints: map * v_src - v_tgt = 0, one row per target coordinate
            for r in 0..self.dims[tgt] {
                let mut row = vec![0u32; total];
                for c in 0..self.dims[src] {
                    row[os + c] = map.get(r, c);
                }
                row[ot + r] = f.sub(row[ot + r], 1);
                lim_rows.push(row);
            }
            // colimit relations: for each source basis vector
            for c in 0..self.dims[src] {
                let mut col = vec![0u32; total];
                for r in 0..self.dims[tgt] {
                    col[ot + r] = map.get(r, c);
                }
                col[os + c] = f.sub(col[os + c], 1);
                colim_cols.push(col);
            }
        }
        let constraints = Matrix::from_columns(f, total, &lim_rows).transpose();
        let limit = kernel_vectors(&constraints);
        // a limit element maps to the class of its component at station i
        let di = self.dims[i];
        let at_i: Vec<Vec<u32>> = limit
            .iter()
            .map(|v| {
                let mut w = vec![0u32; total];
                w[..di].copy_from_slice(&v[..di]);
                w
            })
            .collect();
        let relations = Matrix::from_columns(f, total, &colim_cols);
        let both = relations.hstack(&Matrix::from_columns(f, total, &at_i));
        rank(&both) - rank(&relations)
    }

    /// Barcode by inclusion-exclusion over [`ZigzagModule::limit_colimit_rank`].
    pub fn barcode_brute_force(&self) -> ZigzagBarcode {
        let n = self.dims.len();
        let c = |i: isize, j: isize| -> i64 {
            if i < 0 || j >= n as isize || i > j {
                0
            } else {
                self.limit_colimit_rank(i as usize, j as usize) as i64
            }
        };
        let mut bars = Vec::new();
        for i in 0..n as isize {
            for j in i..n as isize {
                let mult = c(i, j) - c(i - 1, j) - c(i, j + 1) + c(i - 1, j + 1);
                assert!(mult >= 0, "negative zigzag multiplicity");
                for _ in 0..mult {
                    bars.push(Bar {
                        birth: i as usize,
                        death: j as usize,
                    });
                }
            }
        }
        ZigzagBarcode::new(bars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bar(b: usize, d: usize) -> Bar {
        Bar { birth: b, death: d }
    }

    #[test]
    fn insert_insert_delete() {
        let k = Arc::new(SimplicialComplex::new(vec![vec![0], vec![1]]).unwrap());
        let z = ZigzagComplex::from_events(
            k,
            &[(Direction::Forward, 0), (Direction::Forward, 1), (Direction::Backward, 1)],
        );
        assert_eq!(z.station_count(), 3);
        assert!(z.validate().is_ok());
        let b = zigzag_barcode(&z, Field::gf2(), 0);
        assert_eq!(b.bars, vec![bar(0, 2), bar(1, 1)]);
        assert_eq!(b.count_spanning(0, 2), 1);
        assert_eq!(b.count_spanning(1, 1), 2);
    }

    #[test]
    fn constant_zigzag() {
        let k = Arc::new(SimplicialComplex::new(vec![vec![0], vec![1], vec![2], vec![0, 1]]).unwrap());
        let empty = |d| Step {
            direction: d,
            simplices: vec![],
        };
        let z = ZigzagComplex::new(
            k,
            vec![0, 1, 2, 3],
            vec![
                empty(Direction::Forward),
                empty(Direction::Backward),
                empty(Direction::Forward),
            ],
        );
        let b = zigzag_barcode(&z, Field::gf2(), 0);
        assert_eq!(b.bars, vec![bar(0, 3), bar(0, 3)]);
        assert!(zigzag_barcode(&z, Field::gf2(), 1).bars.is_empty());
    }

    #[test]
    fn circle_torn_down() {
        // build a triangle boundary, then delete its edges one at a time
        let k = Arc::new(SimplicialComplex::new(vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap());
        let mut events: Vec<(Direction, usize)> = (0..6).map(|i| (Direction::Forward, i)).collect();
        events.extend([3, 4, 5].iter().map(|&i| (Direction::Backward, i)));
        let z = ZigzagComplex::from_events(k, &events);
        assert!(z.validate().is_ok());
        let m = z.module(Field::gf2(), 1);
        let b = m.barcode();
        assert_eq!(b.bars, vec![bar(5, 5)]);
        assert_eq!(b, m.barcode_brute_force());
        let b0 = zigzag_barcode(&z, Field::gf2(), 0);
        assert_eq!(b0, z.module(Field::gf2(), 0).barcode_brute_force());
    }

    #[test]
    fn deleting_a_face_first_is_rejected() {
        let k = Arc::new(SimplicialComplex::new(vec![vec![0], vec![1], vec![0, 1]]).unwrap());
        let z = ZigzagComplex::from_events(
            k,
            &[
                (Direction::Forward, 0),
                (Direction::Forward, 1),
                (Direction::Forward, 2),
                (Direction::Backward, 0),
            ],
        );
        assert!(matches!(z.validate(), Err(BifiltrationError::BadZigzag { step: 3, .. })));
    }

    fn random_module(rng: &mut ChaCha8Rng, field: Field) -> ZigzagModule {
        let len = rng.gen_range(1..=6);
        let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=3)).collect();
        let arrows = (0..len - 1)
            .map(|k| {
                let dir = if rng.gen_bool(0.5) {
                    Direction::Forward
                } else {
                    Direction::Backward
                };
                let (r, c) = match dir {
                    Direction::Forward => (dims[k + 1], dims[k]),
                    Direction::Backward => (dims[k], dims[k + 1]),
                };
                let rows: Vec<Vec<i64>> = (0..r)
                    .map(|_| (0..c).map(|_| rng.gen_range(0..field.modulus() as i64)).collect())
                    .collect();
                (dir, Matrix::from_rows_with_cols(field, c, &rows))
            })
            .collect();
        ZigzagModule { field, dims, arrows }
    }

    fn random_matrix(rng: &mut ChaCha8Rng, f: Field, r: usize, c: usize) -> Matrix {
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(0..f.modulus() as i64)).collect())
            .collect();
        Matrix::from_rows_with_cols(f, c, &rows)
    }

    #[test]
    fn three_station_span_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Field::new(3).unwrap();
        for _ in 0..200 {
            let (a, b, c) = (rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(0..4));
            let d = rng.gen_range(0..4);
            // C -> D <- B
            let gamma = random_matrix(&mut rng, f, d, c);
            let delta = random_matrix(&mut rng, f, d, b);
            let cospan = ZigzagModule {
                field: f,
                dims: vec![c, d, b],
                arrows: vec![(Direction::Forward, gamma.clone()), (Direction::Backward, delta.clone())],
            };
            let meet = crate::linalg::intersect(&crate::linalg::image_basis(&gamma), &crate::linalg::image_basis(&delta))
                .unwrap()
                .dim();
            assert_eq!(cospan.barcode().count_spanning(0, 2), meet);
            // C <- A -> B
            let alpha = random_matrix(&mut rng, f, c, a);
            let beta = random_matrix(&mut rng, f, b, a);
            let span = ZigzagModule {
                field: f,
                dims: vec![c, a, b],
                arrows: vec![(Direction::Backward, alpha.clone()), (Direction::Forward, beta.clone())],
            };
            let joined = crate::linalg::sum(&crate::linalg::kernel_basis(&alpha), &crate::linalg::kernel_basis(&beta))
                .unwrap()
                .dim();
            assert_eq!(joined, a - span.barcode().count_spanning(0, 2));
        }
    }

    #[test]
    fn sweep_matches_limit_colimit_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2, 3, 5] {
            let f = Field::new(p).unwrap();
            for _ in 0..300 {
                let m = random_module(&mut rng, f);
                let b = m.barcode();
                assert_eq!(b, m.barcode_brute_force(), "{m:?}");
                for (k, &d) in m.dims.iter().enumerate() {
                    assert_eq!(b.dim_at(k), d);
                }
                assert_eq!(m.reversed().barcode(), b.reversed(m.station_count()));
            }
        }
    }
}
