//! Commutative squares and their 11 interval types.
//!
//! Corners are named `a = s`, `b = (t_x, s_y)`, `c = (s_x, t_y)`, `d = t`,
//! with maps `alpha: a->b`, `beta: a->c`, `gamma: b->d`, `delta: c->d`.

use std::fmt;

use crate::error::ModuleError;
use crate::linalg::{image_basis, intersect, kernel_basis, rank, sum, Field};

use super::{GridModule, Point};

/// The intervals of the 2x2 grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Interval {
    A,
    B,
    C,
    D,
    AB,
    AC,
    BD,
    CD,
    ABC,
    BCD,
    ABCD,
}

impl Interval {
    pub const ALL: [Interval; 11] = [
        Interval::A,
        Interval::B,
        Interval::C,
        Interval::D,
        Interval::AB,
        Interval::AC,
        Interval::BD,
        Interval::CD,
        Interval::ABC,
        Interval::BCD,
        Interval::ABCD,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Interval::A => "a",
            Interval::B => "b",
            Interval::C => "c",
            Interval::D => "d",
            Interval::AB => "ab",
            Interval::AC => "ac",
            Interval::BD => "bd",
            Interval::CD => "cd",
            Interval::ABC => "abc",
            Interval::BCD => "bcd",
            Interval::ABCD => "abcd",
        }
    }

    /// Whether the corner `a`, `b`, `c` or `d` lies in the interval.
    pub fn has(self, corner: char) -> bool {
        self.label().contains(corner)
    }

    /// All intervals except the two hooks are rectangles.
    pub fn is_rectangle(self) -> bool {
        !matches!(self, Interval::ABC | Interval::BCD)
    }

    fn index(self) -> usize {
        self as usize
    }

    /// The interval as a module on the 2x2 grid.
    pub fn module(self, field: Field) -> GridModule {
        let corner = |p: Point| match (p.x, p.y) {
            (1, 1) => 'a',
            (2, 1) => 'b',
            (1, 2) => 'c',
            _ => 'd',
        };
        GridModule::indicator(field, 2, 2, |p| self.has(corner(p)))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label())
    }
}

/// The eleven numbers that pin down a commutative square up to isomorphism.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SquareInvariants {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_c: usize,
    pub dim_d: usize,
    pub r_ab: usize,
    pub r_ac: usize,
    pub r_bd: usize,
    pub r_cd: usize,
    pub r_ad: usize,
    /// `dim (Im gamma ∩ Im delta)`
    pub i_d: usize,
    /// `dim (Ker alpha + Ker beta)`
    pub k_a: usize,
}

impl SquareInvariants {
    pub fn to_array(self) -> [usize; 11] {
        [
            self.dim_a, self.dim_b, self.dim_c, self.dim_d, self.r_ab, self.r_ac, self.r_bd, self.r_cd, self.r_ad, self.i_d,
            self.k_a,
        ]
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, o: SquareInvariants) -> SquareInvariants {
        let a = self.to_array();
        let b = o.to_array();
        let c: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        SquareInvariants {
            dim_a: c[0],
            dim_b: c[1],
            dim_c: c[2],
            dim_d: c[3],
            r_ab: c[4],
            r_ac: c[5],
            r_bd: c[6],
            r_cd: c[7],
            r_ad: c[8],
            i_d: c[9],
            k_a: c[10],
        }
    }
}

/// Multiplicity of each interval type in a square.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SquareBarcode {
    mult: [usize; 11],
}

impl SquareBarcode {
    pub fn get(&self, i: Interval) -> usize {
        self.mult[i.index()]
    }

    pub fn set(&mut self, i: Interval, v: usize) {
        self.mult[i.index()] = v;
    }

    pub fn total(&self) -> usize {
        self.mult.iter().sum()
    }

    pub fn hooks(&self) -> usize {
        self.get(Interval::ABC) + self.get(Interval::BCD)
    }

    /// Nonzero entries, in [`Interval::ALL`] order.
    pub fn entries(&self) -> Vec<(Interval, usize)> {
        Interval::ALL
            .iter()
            .map(|&i| (i, self.get(i)))
            .filter(|&(_, m)| m > 0)
            .collect()
    }
}

impl fmt::Display for SquareBarcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(|(i, m)| format!("{i}:{m}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The invariants of the square spanned by `s <= t`.
pub fn invariants_of_square(module: &GridModule, s: Point, t: Point) -> Result<SquareInvariants, ModuleError> {
    if !s.leq(t) {
        return Err(ModuleError::NotComparable { s, t });
    }
    let (a, b, c, d) = (s, Point::new(t.x, s.y), Point::new(s.x, t.y), t);
    let alpha = module.composite_map(a, b)?;
    let beta = module.composite_map(a, c)?;
    let gamma = module.composite_map(b, d)?;
    let delta = module.composite_map(c, d)?;
    let rho = module.composite_map(a, d)?;
    let i_d = intersect(&image_basis(&gamma), &image_basis(&delta))
        .expect("same target")
        .dim();
    let k_a = sum(&kernel_basis(&alpha), &kernel_basis(&beta)).expect("same source").dim();
    Ok(SquareInvariants {
        dim_a: module.dim(a),
        dim_b: module.dim(b),
        dim_c: module.dim(c),
        dim_d: module.dim(d),
        r_ab: rank(&alpha),
        r_ac: rank(&beta),
        r_bd: rank(&gamma),
        r_cd: rank(&delta),
        r_ad: rank(&rho),
        i_d,
        k_a,
    })
}

/// Solves for the interval multiplicities of a commutative square.
pub fn decompose_square(inv: &SquareInvariants) -> Result<SquareBarcode, ModuleError> {
    let v = |x: usize| x as i64;
    let abcd = v(inv.r_ad);
    let bcd = v(inv.i_d) - abcd;
    let bd = v(inv.r_bd) - bcd - abcd;
    let cd = v(inv.r_cd) - bcd - abcd;
    let abc = v(inv.dim_a) - v(inv.k_a) - abcd;
    let ab = v(inv.r_ab) - abc - abcd;
    let ac = v(inv.r_ac) - abc - abcd;
    let a = v(inv.k_a) - ab - ac;
    let b = v(inv.dim_b) - ab - abc - bd - bcd - abcd;
    let c = v(inv.dim_c) - ac - abc - cd - bcd - abcd;
    let d = v(inv.dim_d) - bd - cd - bcd - abcd;
    let solved = [a, b, c, d, ab, ac, bd, cd, abc, bcd, abcd];
    let mut out = SquareBarcode::default();
    for (&i, &m) in Interval::ALL.iter().zip(&solved) {
        if m < 0 {
            return Err(ModuleError::InconsistentInvariants {
                label: i.label(),
                value: m,
            });
        }
        out.set(i, m as usize);
    }
    Ok(out)
}

/// Barcodes of every nondegenerate square `s < t` (strictly in both
/// coordinates), in lexicographic order of `(s, t)`.
pub fn square_barcodes(module: &GridModule) -> Result<Vec<(Point, Point, SquareBarcode)>, ModuleError> {
    let (n, m) = module.extent();
    let mut out = Vec::new();
    for (s, t) in super::comparable_pairs(n, m) {
        if s.x < t.x && s.y < t.y {
            out.push((s, t, decompose_square(&invariants_of_square(module, s, t)?)?));
        }
    }
    Ok(out)
}
