//! Local exactness conditions, checked square by square.
//!
//! Each checker returns the lexicographically smallest failing pair
//! `(s_x, s_y, t_x, t_y)`, or `None` when the module passes.

use std::fmt;

use rayon::prelude::*;

use crate::linalg::{image_basis, intersect, kernel_basis, rank, sum, Matrix};

use super::square::{decompose_square, invariants_of_square, Interval};
use super::{comparable_pairs, GridModule, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// `Im rho != Im gamma ∩ Im delta`
    Image,
    /// `Ker rho != Ker alpha + Ker beta`
    Kernel,
    /// The square contains a hook summand.
    Hook(Interval),
    /// `M_a -> M_b ⊕ M_c -> M_d` is not exact in the middle.
    Middle,
    /// The square invariants have no nonnegative solution.
    Inconsistent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactnessFailure {
    pub s: Point,
    pub t: Point,
    pub kind: FailureKind,
}

impl fmt::Display for ExactnessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            FailureKind::Image => "image of the diagonal differs from the intersection of images".to_string(),
            FailureKind::Kernel => "kernel of the diagonal differs from the sum of kernels".to_string(),
            FailureKind::Hook(i) => format!("square has a {i} summand"),
            FailureKind::Middle => "sequence is not exact at the middle term".to_string(),
            FailureKind::Inconsistent => "square invariants are inconsistent".to_string(),
        };
        write!(f, "{} <= {}: {}", self.s, self.t, what)
    }
}

fn first_failure(module: &GridModule, check: impl Fn(Point, Point) -> Option<FailureKind> + Sync) -> Option<ExactnessFailure> {
    let pairs: Vec<(Point, Point)> = comparable_pairs(module.n, module.m).collect();
    pairs
        .par_iter()
        .find_map_first(|&(s, t)| check(s, t).map(|kind| ExactnessFailure { s, t, kind }))
}

struct Corners {
    alpha: Matrix,
    beta: Matrix,
    gamma: Matrix,
    delta: Matrix,
    rho: Matrix,
}

fn corners(module: &GridModule, s: Point, t: Point) -> Corners {
    let (b, c) = (Point::new(t.x, s.y), Point::new(s.x, t.y));
    let map = |u, v| module.composite_map(u, v).expect("comparable corners");
    Corners {
        alpha: map(s, b),
        beta: map(s, c),
        gamma: map(b, t),
        delta: map(c, t),
        rho: map(s, t),
    }
}

/// Weak exactness via subspace equalities on every square.
pub fn is_weakly_exact_algebraic(module: &GridModule) -> Option<ExactnessFailure> {
    first_failure(module, |s, t| {
        let q = corners(module, s, t);
        let meet = intersect(&image_basis(&q.gamma), &image_basis(&q.delta)).expect("same target");
        if image_basis(&q.rho) != meet {
            return Some(FailureKind::Image);
        }
        let join = sum(&kernel_basis(&q.alpha), &kernel_basis(&q.beta)).expect("same source");
        if kernel_basis(&q.rho) != join {
            return Some(FailureKind::Kernel);
        }
        None
    })
}

/// Weak exactness as "no hook summand in any square".
pub fn is_weakly_exact_geometric(module: &GridModule) -> Option<ExactnessFailure> {
    first_failure(module, |s, t| {
        let inv = invariants_of_square(module, s, t).expect("comparable pair");
        match decompose_square(&inv) {
            Err(_) => Some(FailureKind::Inconsistent),
            Ok(bar) if bar.get(Interval::ABC) > 0 => Some(FailureKind::Hook(Interval::ABC)),
            Ok(bar) if bar.get(Interval::BCD) > 0 => Some(FailureKind::Hook(Interval::BCD)),
            Ok(_) => None,
        }
    })
}

/// Middle exactness of `M_a -> M_b ⊕ M_c -> M_d` on every square.
pub fn is_strongly_exact(module: &GridModule) -> Option<ExactnessFailure> {
    first_failure(module, |s, t| {
        let q = corners(module, s, t);
        let pairing = q.alpha.vstack(&q.beta);
        let difference = q.gamma.hstack(&q.delta.scale(module.field.neg(1)));
        let ker_dim = difference.cols() - rank(&difference);
        (ker_dim != rank(&pairing)).then_some(FailureKind::Middle)
    })
}
