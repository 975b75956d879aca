//! Free bigraded modules, graded matrices and free resolutions
//! `0 -> M_zeta -> M_eta -> M_gamma -> M -> 0` of bifiltration homology.

use std::time::Instant;

use rayon::prelude::*;

use crate::bifiltration::Bifiltration;
use crate::error::ResolutionError;
use crate::grid_module::{GridModule, Point};
use crate::linalg::{kernel_vectors, rank, Echelon, Field, Matrix, Solver};

/// A free module, given by the grades of its basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeModule {
    grades: Vec<Point>,
}

impl FreeModule {
    pub fn new(grades: Vec<Point>) -> Self {
        FreeModule { grades }
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn grade(&self, i: usize) -> Point {
        self.grades[i]
    }

    pub fn grades(&self) -> &[Point] {
        &self.grades
    }

    /// Basis elements alive at `t`.
    pub fn indices_leq(&self, t: Point) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.grades[i].leq(t)).collect()
    }

    pub fn count_leq(&self, t: Point) -> usize {
        self.grades.iter().filter(|g| g.leq(t)).count()
    }
}

/// A morphism of free modules; entry `(i, j)` may be nonzero only when the
/// grade of row `i` is below the grade of column `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    target: FreeModule,
    source: FreeModule,
    matrix: Matrix,
}

impl GradedMatrix {
    pub fn new(target: FreeModule, source: FreeModule, matrix: Matrix, which: &'static str) -> Result<Self, ResolutionError> {
        if matrix.shape() != (target.len(), source.len()) {
            return Err(ResolutionError::Shape(which));
        }
        for j in 0..source.len() {
            for i in 0..target.len() {
                if matrix.get(i, j) != 0 && !target.grade(i).leq(source.grade(j)) {
                    return Err(ResolutionError::Inhomogeneous {
                        which,
                        row: i,
                        col: j,
                        row_grade: target.grade(i),
                        col_grade: source.grade(j),
                    });
                }
            }
        }
        Ok(GradedMatrix { target, source, matrix })
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Join of the grades of the rows with a nonzero entry in column `j`.
    pub fn lub(&self, j: usize) -> Result<Point, ResolutionError> {
        self.lub_with(j, self.target.grades())
    }

    /// As [`GradedMatrix::lub`], with row `i` standing for `row_points[i]`.
    pub fn lub_with(&self, j: usize, row_points: &[Point]) -> Result<Point, ResolutionError> {
        (0..self.target.len())
            .filter(|&i| self.matrix.get(i, j) != 0)
            .map(|i| row_points[i])
            .reduce(Point::join)
            .ok_or(ResolutionError::ZeroColumn(j))
    }

    /// The submatrix on rows and columns alive at `t`.
    pub fn evaluate(&self, t: Point) -> Matrix {
        self.matrix.select(&self.target.indices_leq(t), &self.source.indices_leq(t))
    }
}

/// Free-standing form of [`GradedMatrix::lub`].
pub fn lub_of_column(mat: &GradedMatrix, j: usize) -> Result<Point, ResolutionError> {
    mat.lub(j)
}

/// `0 -> M_zeta --psi--> M_eta --phi--> M_gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeResolution {
    field: Field,
    n: usize,
    m: usize,
    phi: GradedMatrix,
    psi: GradedMatrix,
}

/// A resolution evaluated at one grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub gens: Vec<usize>,
    pub rels: Vec<usize>,
    pub relrels: Vec<usize>,
    pub phi: Matrix,
    pub psi: Matrix,
}

impl FreeResolution {
    /// Checks grades, shapes, homogeneity, `phi * psi = 0` and that no
    /// column is zero.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: Field,
        n: usize,
        m: usize,
        gens: Vec<Point>,
        rels: Vec<Point>,
        relrels: Vec<Point>,
        phi: Matrix,
        psi: Matrix,
    ) -> Result<Self, ResolutionError> {
        for &g in gens.iter().chain(&rels).chain(&relrels) {
            if !(1..=n).contains(&g.x) || !(1..=m).contains(&g.y) {
                return Err(ResolutionError::OutOfGrid(g, n, m));
            }
        }
        if phi.field() != field || psi.field() != field {
            return Err(ResolutionError::Shape("field"));
        }
        let phi = GradedMatrix::new(FreeModule::new(gens), FreeModule::new(rels.clone()), phi, "phi")?;
        let psi = GradedMatrix::new(FreeModule::new(rels), FreeModule::new(relrels), psi, "psi")?;
        if !phi.matrix.mul(&psi.matrix).is_zero() {
            return Err(ResolutionError::NotComplex);
        }
        let r = FreeResolution { field, n, m, phi, psi };
        r.relation_lubs()?;
        r.relrel_lubs()?;
        Ok(r)
    }

    pub fn empty(field: Field, n: usize, m: usize) -> Self {
        FreeResolution::new(
            field,
            n,
            m,
            vec![],
            vec![],
            vec![],
            Matrix::zeros(field, 0, 0),
            Matrix::zeros(field, 0, 0),
        )
        .expect("empty resolution")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn extent(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn gens(&self) -> &FreeModule {
        self.phi.target()
    }

    pub fn rels(&self) -> &FreeModule {
        self.phi.source()
    }

    pub fn relrels(&self) -> &FreeModule {
        self.psi.source()
    }

    pub fn phi(&self) -> &GradedMatrix {
        &self.phi
    }

    pub fn psi(&self) -> &GradedMatrix {
        &self.psi
    }

    /// `lub(eta_j)` for every relation.
    pub fn relation_lubs(&self) -> Result<Vec<Point>, ResolutionError> {
        (0..self.rels().len()).map(|j| self.phi.lub(j)).collect()
    }

    /// `lub(zeta_r)`: the join of `lub(eta_v)` over the support of `zeta_r`.
    pub fn relrel_lubs(&self) -> Result<Vec<Point>, ResolutionError> {
        let eta = self.relation_lubs()?;
        (0..self.relrels().len()).map(|r| self.psi.lub_with(r, &eta)).collect()
    }

    pub fn evaluate(&self, t: Point) -> Evaluation {
        let gens = self.gens().indices_leq(t);
        let rels = self.rels().indices_leq(t);
        let relrels = self.relrels().indices_leq(t);
        let phi = self.phi.matrix.select(&gens, &rels);
        let psi = self.psi.matrix.select(&rels, &relrels);
        Evaluation {
            gens,
            rels,
            relrels,
            phi,
            psi,
        }
    }

    fn points(&self) -> Vec<Point> {
        (1..=self.m)
            .flat_map(|y| (1..=self.n).map(move |x| Point::new(x, y)))
            .collect()
    }

    /// The module presented by `phi`, i.e. `coker phi` at every point.
    pub fn presented_module(&self) -> GridModule {
        self.presented_module_until(None).expect("no deadline")
    }

    /// As [`FreeResolution::presented_module`], giving up after `deadline`.
    pub fn presented_module_until(&self, deadline: Option<Instant>) -> Option<GridModule> {
        let f = self.field;
        let late = || deadline.is_some_and(|d| Instant::now() >= d);
        let quotients: Vec<Option<Quotient>> = self
            .points()
            .par_iter()
            .map(|&t| if late() { None } else { Some(Quotient::new(self, t)) })
            .collect();
        let quotients: Vec<Quotient> = quotients.into_iter().collect::<Option<_>>()?;
        let at = |q: Point| &quotients[(q.y - 1) * self.n + (q.x - 1)];
        let mut g = GridModule::with_dims(f, self.n, self.m, |q| at(q).reps.len());
        let mut pos = vec![usize::MAX; self.gens().len()];
        for q in self.points() {
            if late() {
                return None;
            }
            let src = at(q);
            for (next, horizontal) in [(Point::new(q.x + 1, q.y), true), (Point::new(q.x, q.y + 1), false)] {
                if next.x > self.n || next.y > self.m {
                    continue;
                }
                let dst = at(next);
                for (i, &gi) in dst.gens.iter().enumerate() {
                    pos[gi] = i;
                }
                let cols: Vec<Vec<u32>> = src
                    .reps
                    .iter()
                    .map(|v| {
                        let mut w = vec![0u32; dst.gens.len()];
                        for (i, &gi) in src.gens.iter().enumerate() {
                            w[pos[gi]] = v[i];
                        }
                        dst.coordinates(&w)
                    })
                    .collect();
                let mat = Matrix::from_columns(f, dst.reps.len(), &cols);
                if horizontal {
                    g.set_hmap(q, mat).unwrap();
                } else {
                    g.set_vmap(q, mat).unwrap();
                }
            }
        }
        Some(g)
    }
}

/// `coker phi_t`, with a basis of unit vectors completing the relations.
struct Quotient {
    gens: Vec<usize>,
    reps: Vec<Vec<u32>>,
    /// Solves against `[relations | reps]`.
    solver: Solver,
}

impl Quotient {
    fn new(r: &FreeResolution, t: Point) -> Self {
        let f = r.field;
        let ev = r.evaluate(t);
        let k = ev.gens.len();
        let mut cols = ev.phi.columns();
        let mut ech = Echelon::new(f, k);
        for c in &cols {
            ech.insert(c);
        }
        let reps: Vec<Vec<u32>> = (0..k)
            .map(|i| {
                let mut e = vec![0u32; k];
                e[i] = 1;
                e
            })
            .filter(|e| ech.insert(e))
            .collect();
        cols.extend(reps.iter().cloned());
        let solver = Solver::new(&Matrix::from_columns(f, k, &cols));
        Quotient {
            gens: ev.gens,
            reps,
            solver,
        }
    }

    fn coordinates(&self, w: &[u32]) -> Vec<u32> {
        let x = self.solver.solve(w).expect("relations and representatives span");
        x[x.len() - self.reps.len()..].to_vec()
    }
}

/// Colexicographic order: `y` first, then `x`.
fn colex(n: usize, m: usize) -> Vec<Point> {
    (1..=m).flat_map(|y| (1..=n).map(move |x| Point::new(x, y))).collect()
}

fn embed(len: usize, support: &[usize], v: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for (&i, &x) in support.iter().zip(v) {
        out[i] = x;
    }
    out
}

/// A free resolution of `H_p` of a bifiltration.
///
/// Generators are a graded basis of the cycles. Relations are chosen so that
/// those with `lub <= s` and grade `<= t` span exactly the generator
/// combinations below `s` that bound at `t`. Relations on relations are
/// chosen the same way for the kernel of `phi` as far as global
/// independence allows; see [`dp_deficiency`] for when that falls short.
pub fn free_resolution(f: &Bifiltration, field: Field, p: usize) -> Result<FreeResolution, ResolutionError> {
    let (n, m) = f.extent();
    let k = f.complex();
    let order = colex(n, m);
    let cells_p = k.cells(p);
    let cells_q = k.cells(p + 1);
    let grade_p: Vec<Point> = cells_p.iter().map(|&c| f.grade(c)).collect();
    let grade_q: Vec<Point> = cells_q.iter().map(|&c| f.grade(c)).collect();
    let lower = k.boundary_matrix(field, p);
    let upper = k.boundary_matrix(field, p + 1);
    let ambient = cells_p.len();
    let alive = |grades: &[Point], t: Point| -> Vec<usize> { (0..grades.len()).filter(|&i| grades[i].leq(t)).collect() };

    // generators: a graded basis of the cycles
    let mut gamma: Vec<Vec<u32>> = Vec::new();
    let mut gamma_grade: Vec<Point> = Vec::new();
    for &t in &order {
        let live = alive(&grade_p, t);
        if live.is_empty() {
            continue;
        }
        let mut ech = Echelon::new(field, ambient);
        for (g, gr) in gamma.iter().zip(&gamma_grade) {
            if gr.leq(t) {
                ech.insert(g);
            }
        }
        for z in kernel_vectors(&lower.select_columns(&live)) {
            let z = embed(ambient, &live, &z);
            if ech.insert(&z) {
                gamma.push(z);
                gamma_grade.push(t);
            }
        }
    }
    let ng = gamma.len();

    // relations, in generator coordinates
    let mut eta: Vec<Vec<u32>> = Vec::new();
    let mut eta_grade: Vec<Point> = Vec::new();
    let mut eta_lub: Vec<Point> = Vec::new();
    for &t in &order {
        let bounds = upper.select_columns(&alive(&grade_q, t));
        if bounds.cols() == 0 {
            continue;
        }
        for &s in order.iter().filter(|s| s.leq(t)) {
            let gs = alive(&gamma_grade, s);
            if gs.is_empty() {
                continue;
            }
            let cols: Vec<Vec<u32>> = gs.iter().map(|&i| gamma[i].clone()).collect();
            let system = Matrix::from_columns(field, ambient, &cols).hstack(&bounds);
            let mut ech = Echelon::new(field, ng);
            for j in 0..eta.len() {
                if eta_lub[j].leq(s) && eta_grade[j].leq(t) {
                    ech.insert(&eta[j]);
                }
            }
            for x in kernel_vectors(&system) {
                let v = embed(ng, &gs, &x[..gs.len()]);
                if v.iter().all(|&c| c == 0) {
                    continue;
                }
                if ech.insert(&v) {
                    let lub = gs
                        .iter()
                        .filter(|&&i| v[i] != 0)
                        .map(|&i| gamma_grade[i])
                        .reduce(Point::join)
                        .expect("nonzero");
                    eta.push(v);
                    eta_grade.push(t);
                    eta_lub.push(lub);
                }
            }
        }
    }
    let phi = Matrix::from_columns(field, ng, &eta);
    let ne = eta.len();

    // relations on relations: at every pair, as many new kernel vectors as
    // stay globally independent
    let mut zeta: Vec<Vec<u32>> = Vec::new();
    let mut zeta_lub: Vec<Point> = Vec::new();
    let mut zeta_grade: Vec<Point> = Vec::new();
    let mut global = Echelon::new(field, ne);
    for &t in &order {
        for &s in order.iter().filter(|s| s.leq(t)) {
            let es: Vec<usize> = (0..ne).filter(|&j| eta_lub[j].leq(s) && eta_grade[j].leq(t)).collect();
            if es.is_empty() {
                continue;
            }
            for x in kernel_vectors(&phi.select_columns(&es)) {
                let v = embed(ne, &es, &x);
                if global.insert(&v) {
                    let lub = es
                        .iter()
                        .filter(|&&j| v[j] != 0)
                        .map(|&j| eta_lub[j])
                        .reduce(Point::join)
                        .expect("nonzero");
                    zeta.push(v);
                    zeta_lub.push(lub);
                    zeta_grade.push(t);
                }
            }
        }
    }
    let psi = Matrix::from_columns(field, ne, &zeta);
    FreeResolution::new(field, n, m, gamma_grade, eta_grade, zeta_grade, phi, psi)
}

/// The pairs `s <= t` where the relations on relations with `lub <= s` and
/// grade `<= t` do not span the kernel of `phi` restricted to the relations
/// with `lub <= s` and grade `<= t`, with the missing dimension. The rank
/// dynamic program undercounts by exactly this amount there.
pub fn dp_deficiency(r: &FreeResolution) -> Result<Vec<(Point, Point, usize)>, ResolutionError> {
    let (n, m) = r.extent();
    let eta_lub = r.relation_lubs()?;
    let zeta_lub = r.relrel_lubs()?;
    let order = colex(n, m);
    let pairs: Vec<(Point, Point)> = order
        .iter()
        .flat_map(|&t| order.iter().filter(move |s| s.leq(t)).map(move |&s| (s, t)))
        .collect();
    Ok(pairs
        .par_iter()
        .filter_map(|&(s, t)| {
            let es: Vec<usize> = (0..r.rels().len())
                .filter(|&j| eta_lub[j].leq(s) && r.rels().grade(j).leq(t))
                .collect();
            let kernel = es.len() - rank(&r.phi().matrix().select_columns(&es));
            let have = (0..r.relrels().len())
                .filter(|&k| zeta_lub[k].leq(s) && r.relrels().grade(k).leq(t))
                .count();
            (kernel > have).then_some((s, t, kernel - have))
        })
        .collect())
}

/// Checks exactness of the evaluated sequence at every grid point, with
/// cokernel dimensions compared against `dims`. Reports the first failing
/// point in colexicographic order.
pub fn validate_exactness(r: &FreeResolution, dims: impl Fn(Point) -> usize + Sync) -> Result<(), ResolutionError> {
    let (n, m) = r.extent();
    colex(n, m)
        .par_iter()
        .find_map_first(|&t| {
            let ev = r.evaluate(t);
            let rank_psi = rank(&ev.psi);
            let rank_phi = rank(&ev.phi);
            let fail = |what| Some(ResolutionError::NotExact { t, what });
            if rank_psi != ev.relrels.len() {
                return fail("psi is not injective");
            }
            if !ev.phi.mul(&ev.psi).is_zero() || rank_psi != ev.rels.len() - rank_phi {
                return fail("ker phi differs from im psi");
            }
            if ev.gens.len() - rank_phi != dims(t) {
                return fail("coker phi has the wrong dimension");
            }
            None
        })
        .map_or(Ok(()), Err)
}

/// Exactness of `0 -> M_zeta -> M_eta -> M_gamma -> H_p(F) -> 0` pointwise.
pub fn validate_resolution(r: &FreeResolution, f: &Bifiltration, field: Field, p: usize) -> Result<(), ResolutionError> {
    if r.extent() != f.extent() {
        return Err(ResolutionError::Shape("grid"));
    }
    validate_exactness(r, |t| f.homology_at(field, p, t).dim())
}
