//! Rectangle-decomposability of bifiltration homology through zigzag
//! barcodes: compare the rank invariant with the image and kernel
//! invariants `iota` and `kappa` on every comparable pair.
//!
//! Station conventions. The row zigzag at `t = (j,l)` runs
//! `(1,l) -> ... -> (j,l) <- (j,l-1) <- ... <- (j,1)`, so `(x,l)` is station
//! `x-1` and `(j,y)` is station `j-1+l-y`. The column zigzag at `s = (i,k)`
//! runs `(i,m) <- ... <- (i,k) -> ... -> (n,k)`, so `(i,y)` is station `m-y`
//! and `(x,k)` is station `m-k+x-i`.

use std::fmt;

use rayon::prelude::*;

use crate::bifiltration::Bifiltration;
use crate::error::ResolutionError;
use crate::grid_module::{
    comparable_pairs, is_weakly_exact_algebraic, is_weakly_exact_geometric, ExactnessFailure, GridModule, Point, RankInvariant,
};
use crate::linalg::{image_basis, intersect, kernel_basis, sum, Field};
use crate::rank_dp::rank_from_resolution;
use crate::resolution::free_resolution;
use crate::zigzag::{zigzag_barcode, ZigzagBarcode};

/// `kappa(s,t) = dim(Ker rho_s^(s_x,t_y) + Ker rho_s^(t_x,s_y))` and
/// `iota(s,t) = dim(Im rho_(s_x,t_y)^t ∩ Im rho_(t_x,s_y)^t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaIota {
    pub kappa: RankInvariant,
    pub iota: RankInvariant,
}

/// Station of `(x, l)` or `(j, y)` on the row zigzag at `t = (j, l)`.
fn row_station(t: Point, p: Point) -> usize {
    if p.y == t.y {
        p.x - 1
    } else {
        debug_assert_eq!(p.x, t.x);
        t.x - 1 + t.y - p.y
    }
}

/// Station of `(i, y)` or `(x, k)` on the column zigzag at `s = (i, k)`.
fn col_station(s: Point, m: usize, p: Point) -> usize {
    if p.x == s.x {
        m - p.y
    } else {
        debug_assert_eq!(p.y, s.y);
        m - s.y + p.x - s.x
    }
}

/// `kappa` and `iota` from one row zigzag per `t` and one column zigzag per `s`.
pub fn kappa_iota_from_zigzags(f: &Bifiltration, field: Field, p: usize) -> KappaIota {
    let (n, m) = f.extent();
    let points: Vec<Point> = f.points().collect();
    let barcodes =
        |make: &(dyn Fn(Point) -> ZigzagBarcode + Sync)| -> Vec<ZigzagBarcode> { points.par_iter().map(|&q| make(q)).collect() };
    let rows = barcodes(&|t| zigzag_barcode(&f.row_zigzag(t), field, p));
    let cols = barcodes(&|s| zigzag_barcode(&f.col_zigzag(s), field, p));
    let at = |v: &[ZigzagBarcode], q: Point| v[(q.y - 1) * n + (q.x - 1)].clone();
    let mut kappa = RankInvariant::zeros(n, m);
    let mut iota = RankInvariant::zeros(n, m);
    for (s, t) in comparable_pairs(n, m) {
        let (b, c) = (Point::new(t.x, s.y), Point::new(s.x, t.y));
        let row = at(&rows, t);
        iota.set(s, t, row.count_spanning(row_station(t, c), row_station(t, b)) as u32);
        let col = at(&cols, s);
        let here = col_station(s, m, s);
        let dim_s = col.dim_at(here);
        let spanning = col.count_spanning(col_station(s, m, c), col_station(s, m, b));
        kappa.set(s, t, (dim_s - spanning) as u32);
    }
    KappaIota { kappa, iota }
}

/// `kappa` and `iota` by subspace arithmetic on an explicit module.
pub fn kappa_iota_direct(module: &GridModule) -> KappaIota {
    let (n, m) = module.extent();
    let pairs: Vec<(Point, Point)> = comparable_pairs(n, m).collect();
    let values: Vec<(u32, u32)> = pairs
        .par_iter()
        .map(|&(s, t)| {
            let (b, c) = (Point::new(t.x, s.y), Point::new(s.x, t.y));
            let map = |u, v| module.composite_map(u, v).expect("comparable");
            let kernels = sum(&kernel_basis(&map(s, b)), &kernel_basis(&map(s, c))).expect("same source");
            let images = intersect(&image_basis(&map(b, t)), &image_basis(&map(c, t))).expect("same target");
            (kernels.dim() as u32, images.dim() as u32)
        })
        .collect();
    let mut kappa = RankInvariant::zeros(n, m);
    let mut iota = RankInvariant::zeros(n, m);
    for (&(s, t), &(k, i)) in pairs.iter().zip(&values) {
        kappa.set(s, t, k);
        iota.set(s, t, i);
    }
    KappaIota { kappa, iota }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equality {
    /// `r(s,t) = iota(s,t)`
    Iota,
    /// `r(s,s) - r(s,t) = kappa(s,t)`
    Kappa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantFailure {
    pub s: Point,
    pub t: Point,
    pub equality: Equality,
    /// Left-hand side: `r(s,t)` or `r(s,s) - r(s,t)`.
    pub rank_side: i64,
    /// Right-hand side: `iota(s,t)` or `kappa(s,t)`.
    pub invariant_side: i64,
}

impl fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.equality {
            Equality::Iota => write!(
                f,
                "{} <= {}: r(s,t) = {} but iota(s,t) = {}",
                self.s, self.t, self.rank_side, self.invariant_side
            ),
            Equality::Kappa => write!(
                f,
                "{} <= {}: r(s,s) - r(s,t) = {} but kappa(s,t) = {}",
                self.s, self.t, self.rank_side, self.invariant_side
            ),
        }
    }
}

/// The first pair, in lexicographic order, where `r(s,t) = iota(s,t)` or
/// `r(s,s) - r(s,t) = kappa(s,t)` fails. `None` means rectangle-decomposable.
pub fn check_rectangle_decomposable(r: &RankInvariant, ki: &KappaIota) -> Option<InvariantFailure> {
    assert_eq!(r.extent(), ki.iota.extent(), "grid mismatch");
    let (n, m) = r.extent();
    comparable_pairs(n, m).find_map(|(s, t)| {
        let rst = r.get(s, t) as i64;
        let iota = ki.iota.get(s, t) as i64;
        if rst != iota {
            return Some(InvariantFailure {
                s,
                t,
                equality: Equality::Iota,
                rank_side: rst,
                invariant_side: iota,
            });
        }
        let lost = r.get(s, s) as i64 - rst;
        let kappa = ki.kappa.get(s, t) as i64;
        (lost != kappa).then_some(InvariantFailure {
            s,
            t,
            equality: Equality::Kappa,
            rank_side: lost,
            invariant_side: kappa,
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Zigzag,
    Algebraic,
    Geometric,
}

/// Why a module is not rectangle-decomposable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    Exactness(ExactnessFailure),
    Invariants(InvariantFailure),
}

impl Witness {
    pub fn pair(&self) -> (Point, Point) {
        match self {
            Witness::Exactness(e) => (e.s, e.t),
            Witness::Invariants(e) => (e.s, e.t),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Exactness(e) => e.fmt(f),
            Witness::Invariants(e) => e.fmt(f),
        }
    }
}

/// Checks an explicit module. The zigzag method has no zigzags to work
/// with here, so it compares the naive rank invariant with directly
/// computed `kappa` and `iota`.
pub fn check_module(module: &GridModule, method: Method) -> Option<Witness> {
    match method {
        Method::Algebraic => is_weakly_exact_algebraic(module).map(Witness::Exactness),
        Method::Geometric => is_weakly_exact_geometric(module).map(Witness::Exactness),
        Method::Zigzag => {
            check_rectangle_decomposable(&module.rank_invariant_naive(), &kappa_iota_direct(module)).map(Witness::Invariants)
        }
    }
}

/// Checks `H_p` of a bifiltration. The zigzag method takes the rank
/// invariant from a free resolution and `kappa`, `iota` from zigzag barcodes.
pub fn check_bifiltration(f: &Bifiltration, field: Field, p: usize, method: Method) -> Result<Option<Witness>, ResolutionError> {
    Ok(match method {
        Method::Zigzag => {
            let r = rank_from_resolution(&free_resolution(f, field, p)?)?;
            let ki = kappa_iota_from_zigzags(f, field, p);
            check_rectangle_decomposable(&r, &ki).map(Witness::Invariants)
        }
        other => check_module(&f.homology_module(field, p), other),
    })
}
