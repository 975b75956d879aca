//! 1-critical simplicial bifiltrations over a finite grid.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::BifiltrationError;
use crate::grid_module::{GridModule, Point};
use crate::linalg::Field;
use crate::simplicial::{HomologyBasis, SimplicialComplex};
use crate::zigzag::{Direction, Step, ZigzagComplex};

/// Each simplex enters at a single grade and stays.
#[derive(Clone, Debug)]
pub struct Bifiltration {
    complex: Arc<SimplicialComplex>,
    grades: Vec<Point>,
    n: usize,
    m: usize,
    /// Original real values of the grid coordinates, when grades were normalized.
    labels: Option<(Vec<f64>, Vec<f64>)>,
}

impl Bifiltration {
    /// Simplices with grid grades on an explicit `n x m` grid.
    pub fn new(simplices: Vec<(Vec<u32>, Point)>, n: usize, m: usize) -> Result<Self, BifiltrationError> {
        if let Some(e) = violations(&simplices, n, m).into_iter().next() {
            return Err(e);
        }
        let (verts, grades): (Vec<Vec<u32>>, Vec<Point>) = simplices.into_iter().unzip();
        let complex = SimplicialComplex::new(verts)?;
        Ok(Bifiltration {
            complex: Arc::new(complex),
            grades,
            n,
            m,
            labels: None,
        })
    }

    /// Grid grades with the grid inferred from the largest coordinates.
    pub fn from_grades(simplices: Vec<(Vec<u32>, Point)>) -> Result<Self, BifiltrationError> {
        let n = simplices.iter().map(|(_, g)| g.x).max().unwrap_or(1);
        let m = simplices.iter().map(|(_, g)| g.y).max().unwrap_or(1);
        Bifiltration::new(simplices, n, m)
    }

    /// Real-valued grades. When every value is a positive integer the values
    /// are used as grid indices directly; otherwise each coordinate is
    /// replaced by its rank among the distinct values of that coordinate.
    pub fn from_real(simplices: Vec<(Vec<u32>, (f64, f64))>) -> Result<Self, BifiltrationError> {
        let integral = simplices.iter().all(|(_, (x, y))| {
            [x, y]
                .iter()
                .all(|v| v.fract() == 0.0 && **v >= 1.0 && **v <= u32::MAX as f64)
        });
        if integral {
            let grades = simplices
                .into_iter()
                .map(|(s, (x, y))| (s, Point::new(x as usize, y as usize)))
                .collect();
            return Bifiltration::from_grades(grades);
        }
        let distinct = |vals: Vec<f64>| {
            let mut v = vals;
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        let xs = distinct(simplices.iter().map(|(_, g)| g.0).collect());
        let ys = distinct(simplices.iter().map(|(_, g)| g.1).collect());
        let rank_of = |vals: &[f64], v: f64| vals.partition_point(|&w| w < v) + 1;
        let grades = simplices
            .into_iter()
            .map(|(s, (x, y))| (s, Point::new(rank_of(&xs, x), rank_of(&ys, y))))
            .collect();
        let mut b = Bifiltration::new(grades, xs.len().max(1), ys.len().max(1))?;
        b.labels = Some((xs, ys));
        Ok(b)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn shared_complex(&self) -> Arc<SimplicialComplex> {
        Arc::clone(&self.complex)
    }

    pub fn grade(&self, i: usize) -> Point {
        self.grades[i]
    }

    pub fn grades(&self) -> &[Point] {
        &self.grades
    }

    pub fn extent(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn labels(&self) -> Option<&(Vec<f64>, Vec<f64>)> {
        self.labels.as_ref()
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> {
        let n = self.n;
        (1..=self.m).flat_map(move |y| (1..=n).map(move |x| Point::new(x, y)))
    }

    /// Indices of the simplices present at `t`.
    pub fn complex_at(&self, t: Point) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.grades[i].leq(t)).collect()
    }

    pub fn homology_at(&self, field: Field, p: usize, t: Point) -> HomologyBasis {
        self.complex.homology(field, p, |i| self.grades[i].leq(t))
    }

    /// The degree-`p` homology module, one homology basis per grid point.
    pub fn homology_module(&self, field: Field, p: usize) -> GridModule {
        let points: Vec<Point> = self.points().collect();
        let bases: Vec<HomologyBasis> = points.par_iter().map(|&t| self.homology_at(field, p, t)).collect();
        let at = |q: Point| &bases[(q.y - 1) * self.n + (q.x - 1)];
        let mut g = GridModule::with_dims(field, self.n, self.m, |q| at(q).dim());
        for &q in &points {
            if q.x < self.n {
                g.set_hmap(q, at(q).induced_map(at(Point::new(q.x + 1, q.y)))).unwrap();
            }
            if q.y < self.m {
                g.set_vmap(q, at(q).induced_map(at(Point::new(q.x, q.y + 1)))).unwrap();
            }
        }
        g
    }

    /// Simplices present at `to` but not at `from`, for `from <= to`.
    fn difference(&self, from: Point, to: Point) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.grades[i].leq(to) && !self.grades[i].leq(from))
            .collect()
    }

    /// `F(1,l) -> ... -> F(j,l) <- F(j,l-1) <- ... <- F(j,1)` for `t = (j,l)`.
    pub fn row_zigzag(&self, t: Point) -> ZigzagComplex {
        let (j, l) = (t.x, t.y);
        let mut steps = Vec::new();
        for x in 2..=j {
            steps.push(Step {
                direction: Direction::Forward,
                simplices: self.difference(Point::new(x - 1, l), Point::new(x, l)),
            });
        }
        for y in (1..l).rev() {
            steps.push(Step {
                direction: Direction::Backward,
                simplices: self.difference(Point::new(j, y), Point::new(j, y + 1)),
            });
        }
        ZigzagComplex::new(self.shared_complex(), self.complex_at(Point::new(1, l)), steps)
    }

    /// `F(i,m) <- ... <- F(i,k) -> F(i+1,k) -> ... -> F(n,k)` for `s = (i,k)`.
    pub fn col_zigzag(&self, s: Point) -> ZigzagComplex {
        let (i, k) = (s.x, s.y);
        let mut steps = Vec::new();
        for y in (k..self.m).rev() {
            steps.push(Step {
                direction: Direction::Backward,
                simplices: self.difference(Point::new(i, y), Point::new(i, y + 1)),
            });
        }
        for x in i + 1..=self.n {
            steps.push(Step {
                direction: Direction::Forward,
                simplices: self.difference(Point::new(x - 1, k), Point::new(x, k)),
            });
        }
        ZigzagComplex::new(self.shared_complex(), self.complex_at(Point::new(i, self.m)), steps)
    }
}

/// Every problem with a list of graded simplices: unsorted or duplicate
/// simplices, grades outside the grid, missing faces and non-monotone grades.
pub fn violations(simplices: &[(Vec<u32>, Point)], n: usize, m: usize) -> Vec<BifiltrationError> {
    use std::collections::HashMap;
    let mut out = Vec::new();
    let mut grade_of: HashMap<&[u32], Point> = HashMap::new();
    for (s, g) in simplices {
        if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) {
            out.push(BifiltrationError::Unsorted(s.clone()));
            continue;
        }
        if !(1..=n).contains(&g.x) || !(1..=m).contains(&g.y) {
            out.push(BifiltrationError::OutOfGrid(*g, n, m));
        }
        if grade_of.insert(s.as_slice(), *g).is_some() {
            out.push(BifiltrationError::Duplicate(s.clone()));
        }
    }
    for (s, g) in simplices {
        if s.len() < 2 || s.windows(2).any(|w| w[0] >= w[1]) {
            continue;
        }
        for k in 0..s.len() {
            let mut face = s.clone();
            face.remove(k);
            match grade_of.get(face.as_slice()) {
                None => out.push(BifiltrationError::MissingFace {
                    simplex: s.clone(),
                    face,
                }),
                Some(fg) if !fg.leq(*g) => out.push(BifiltrationError::NonMonotone {
                    simplex: s.clone(),
                    grade: *g,
                    face,
                    face_grade: *fg,
                }),
                Some(_) => {}
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;

    fn p(x: usize, y: usize) -> Point {
        Point::new(x, y)
    }

    fn sx(v: &[u32], g: Point) -> (Vec<u32>, Point) {
        (v.to_vec(), g)
    }

    #[test]
    fn validation_examples() {
        assert!(Bifiltration::new(vec![sx(&[0], p(1, 1))], 1, 1).is_ok());
        let bad = vec![sx(&[0], p(2, 1)), sx(&[1], p(1, 1)), sx(&[0, 1], p(1, 1))];
        assert!(matches!(
            Bifiltration::new(bad, 2, 2),
            Err(BifiltrationError::NonMonotone { .. })
        ));
        let tri = vec![
            sx(&[0], p(1, 1)),
            sx(&[1], p(1, 1)),
            sx(&[2], p(1, 2)),
            sx(&[0, 1], p(2, 1)),
            sx(&[0, 2], p(1, 2)),
            sx(&[1, 2], p(2, 2)),
            sx(&[0, 1, 2], p(2, 2)),
        ];
        assert!(Bifiltration::new(tri, 2, 2).is_ok());
        let open = vec![sx(&[0], p(1, 1)), sx(&[0, 1], p(1, 1))];
        assert!(matches!(
            Bifiltration::new(open, 1, 1),
            Err(BifiltrationError::MissingFace { .. })
        ));
    }

    #[test]
    fn complex_at_examples() {
        let b = Bifiltration::new(
            vec![
                sx(&[0], p(1, 1)),
                sx(&[1], p(2, 1)),
                sx(&[2], p(1, 3)),
                sx(&[0, 1], p(2, 2)),
                sx(&[0, 2], p(3, 3)),
                sx(&[1, 2], p(2, 3)),
            ],
            3,
            3,
        )
        .unwrap();
        assert_eq!(b.complex_at(p(1, 1)), vec![0]);
        assert_eq!(b.complex_at(p(2, 2)), vec![0, 1, 3]);
        assert_eq!(b.complex_at(p(2, 3)), vec![0, 1, 2, 3, 5]);
        assert_eq!(b.complex_at(p(3, 3)).len(), 6);
        let later = Bifiltration::new(vec![sx(&[0], p(2, 2))], 2, 2).unwrap();
        assert!(later.complex_at(p(1, 2)).is_empty());
    }

    #[test]
    fn real_grades_are_normalized() {
        let b = Bifiltration::from_real(vec![(vec![0], (0.5, -1.0)), (vec![1], (0.25, 3.0)), (vec![0, 1], (0.5, 3.0))]).unwrap();
        assert_eq!(b.extent(), (2, 2));
        assert_eq!(b.grades(), &[p(2, 1), p(1, 2), p(2, 2)]);
        assert_eq!(b.labels().unwrap().0, vec![0.25, 0.5]);
    }

    #[test]
    fn homology_module_examples() {
        let f = Field::gf2();
        let empty = Bifiltration::new(vec![], 2, 2).unwrap();
        assert_eq!(empty.homology_module(f, 0), GridModule::zero(f, 2, 2));

        let circle: Vec<_> = [&[0][..], &[1], &[2], &[0, 1], &[1, 2], &[0, 2]]
            .iter()
            .map(|s| sx(s, p(1, 1)))
            .collect();
        let c = Bifiltration::new(circle, 2, 2).unwrap();
        let h1 = c.homology_module(f, 1);
        assert_eq!(h1, GridModule::rectangle(f, 2, 2, p(1, 1), p(2, 2)));
    }

    /// Component counts from union-find, used as an independent H_0 oracle.
    fn components(b: &Bifiltration, t: Point) -> usize {
        let live = b.complex_at(t);
        let mut parent: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        fn find(parent: &mut std::collections::HashMap<u32, u32>, v: u32) -> u32 {
            let mut r = v;
            while parent[&r] != r {
                r = parent[&r];
            }
            r
        }
        for &i in &live {
            let s = b.complex().simplex(i);
            if s.len() == 1 {
                parent.insert(s[0], s[0]);
            }
        }
        for &i in &live {
            let s = b.complex().simplex(i);
            if s.len() == 2 {
                let (a, c) = (find(&mut parent, s[0]), find(&mut parent, s[1]));
                parent.insert(a, c);
            }
        }
        let keys: Vec<u32> = parent.keys().copied().collect();
        let mut roots: Vec<u32> = keys.into_iter().map(|v| find(&mut parent, v)).collect();
        roots.sort();
        roots.dedup();
        roots.len()
    }

    #[test]
    fn merge_ranks_match_component_counting() {
        let f = Field::gf2();
        let b = Bifiltration::new(vec![sx(&[0], p(1, 2)), sx(&[1], p(2, 1)), sx(&[0, 1], p(2, 2))], 2, 2).unwrap();
        let h0 = b.homology_module(f, 0);
        for t in b.points() {
            assert_eq!(h0.dim(t), components(&b, t));
        }
        let r = h0.rank_invariant_naive();
        assert_eq!(r.get(p(2, 1), p(2, 2)), 1);
        assert_eq!(r.get(p(1, 2), p(2, 2)), 1);
        assert_eq!(r.get(p(2, 2), p(2, 2)), 1);
        assert_eq!(r.get(p(1, 1), p(2, 2)), 0);
    }

    #[test]
    fn bottom_row_matches_one_parameter_reduction() {
        // a filtration along the bottom row: three vertices, then edges closing a loop
        let f = Field::new(3).unwrap();
        let b = Bifiltration::new(
            vec![
                sx(&[0], p(1, 1)),
                sx(&[1], p(1, 1)),
                sx(&[2], p(2, 1)),
                sx(&[0, 1], p(2, 1)),
                sx(&[1, 2], p(3, 1)),
                sx(&[0, 2], p(4, 1)),
            ],
            4,
            2,
        )
        .unwrap();
        let h0 = b.homology_module(f, 0);
        let h1 = b.homology_module(f, 1);
        let dims: Vec<usize> = (1..=4).map(|x| h0.dim(p(x, 1))).collect();
        assert_eq!(dims, vec![2, 2, 1, 1]);
        assert_eq!(rank(&h0.composite_map(p(1, 1), p(3, 1)).unwrap()), 1);
        assert_eq!(rank(&h0.composite_map(p(1, 1), p(2, 1)).unwrap()), 1);
        let loops: Vec<usize> = (1..=4).map(|x| h1.dim(p(x, 1))).collect();
        assert_eq!(loops, vec![0, 0, 0, 1]);
    }

    #[test]
    fn euler_characteristic_matches() {
        let f = Field::new(5).unwrap();
        let b = Bifiltration::new(
            vec![
                sx(&[0], p(1, 1)),
                sx(&[1], p(2, 1)),
                sx(&[2], p(1, 2)),
                sx(&[0, 1], p(2, 1)),
                sx(&[0, 2], p(2, 2)),
                sx(&[1, 2], p(2, 2)),
                sx(&[0, 1, 2], p(3, 3)),
            ],
            3,
            3,
        )
        .unwrap();
        let mods: Vec<GridModule> = (0..=2).map(|d| b.homology_module(f, d)).collect();
        for t in b.points() {
            let betti: i64 = mods
                .iter()
                .enumerate()
                .map(|(d, m)| (-1i64).pow(d as u32) * m.dim(t) as i64)
                .sum();
            let cells: i64 = b
                .complex_at(t)
                .iter()
                .map(|&i| (-1i64).pow(b.complex().dim_of(i) as u32))
                .sum();
            assert_eq!(betti, cells, "at {t}");
        }
    }

    #[test]
    fn zigzags_reconstruct_stations() {
        let b = Bifiltration::new(
            vec![
                sx(&[0], p(1, 1)),
                sx(&[1], p(2, 1)),
                sx(&[2], p(1, 3)),
                sx(&[0, 1], p(2, 2)),
                sx(&[0, 2], p(3, 3)),
                sx(&[1, 2], p(2, 3)),
            ],
            3,
            3,
        )
        .unwrap();
        for t in b.points() {
            let z = b.row_zigzag(t);
            assert!(z.validate().is_ok());
            let mut expected: Vec<Point> = (1..=t.x).map(|x| p(x, t.y)).collect();
            expected.extend((1..t.y).rev().map(|y| p(t.x, y)));
            assert_eq!(z.station_count(), expected.len());
            for (k, q) in expected.iter().enumerate() {
                assert_eq!(z.station(k), b.complex_at(*q), "row zigzag at {t}, station {k}");
            }
            let z = b.col_zigzag(t);
            let mut expected: Vec<Point> = (t.y..=3).rev().map(|y| p(t.x, y)).collect();
            expected.extend((t.x + 1..=3).map(|x| p(x, t.y)));
            for (k, q) in expected.iter().enumerate() {
                assert_eq!(z.station(k), b.complex_at(*q), "column zigzag at {t}, station {k}");
            }
        }
        assert_eq!(b.row_zigzag(p(1, 1)).station_count(), 1);
    }
}
