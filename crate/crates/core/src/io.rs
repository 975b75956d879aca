//! Text formats: `.gmod`, `.bif`, `.fres`, `.rank`, `.barcode`, `.zbar`.
//!
//! All formats are line based. `#` starts a comment and blank lines are
//! ignored. Grid coordinates, matrix indices and zigzag stations are 1-based
//! in files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bifiltration::Bifiltration;
use crate::error::{FormatError, ParseError};
use crate::grid_module::{comparable_pairs, GridModule, Point, RankInvariant};
use crate::linalg::{Field, Matrix};
use crate::rect_decomp::RectangleBarcode;
use crate::resolution::FreeResolution;
use crate::zigzag::{Bar, ZigzagBarcode};

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines { inner: it.peekable() }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next()
    }

    fn peek(&mut self) -> Option<(usize, &'a str)> {
        self.inner.peek().copied()
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.next()
            .ok_or_else(|| ParseError::new(0, format!("unexpected end of input, expected {what}")))
    }

    /// A line `keyword v1 v2 ...` with exactly `count` numbers.
    fn keyword<T: std::str::FromStr>(&mut self, keyword: &str, count: usize) -> Result<(usize, Vec<T>), ParseError> {
        let (no, line) = self.expect(keyword)?;
        let mut words = line.split_whitespace();
        if words.next() != Some(keyword) {
            return Err(ParseError::new(no, format!("expected `{keyword}`")));
        }
        let values = numbers(no, &words.collect::<Vec<_>>().join(" "), Some(count))?;
        Ok((no, values))
    }
}

fn numbers<T: std::str::FromStr>(no: usize, text: &str, count: Option<usize>) -> Result<Vec<T>, ParseError> {
    let values: Vec<T> = text
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| ParseError::new(no, format!("bad number `{w}`"))))
        .collect::<Result<_, _>>()?;
    if let Some(c) = count {
        if values.len() != c {
            return Err(ParseError::new(no, format!("expected {c} values, found {}", values.len())));
        }
    }
    Ok(values)
}

fn header(lines: &mut Lines, name: &str) -> Result<(), ParseError> {
    match lines.next() {
        Some((_, l)) if l == name => Ok(()),
        Some((no, l)) => Err(ParseError::new(no, format!("expected header `{name}`, found `{l}`"))),
        None => Err(ParseError::new(0, format!("empty input, expected header `{name}`"))),
    }
}

fn field_line(lines: &mut Lines) -> Result<Field, FormatError> {
    let (no, v) = lines.keyword::<u32>("field", 1)?;
    Field::new(v[0]).map_err(|e| ParseError::new(no, e.to_string()).into())
}

fn grid_line(lines: &mut Lines) -> Result<(usize, usize), ParseError> {
    let (no, v) = lines.keyword::<usize>("grid", 2)?;
    if v[0] == 0 || v[1] == 0 {
        return Err(ParseError::new(no, "grid sides must be positive"));
    }
    Ok((v[0], v[1]))
}

fn point_in(no: usize, x: usize, y: usize, n: usize, m: usize) -> Result<Point, ParseError> {
    if x < 1 || y < 1 || x > n || y > m {
        return Err(ParseError::new(no, format!("point ({x},{y}) outside the {n}x{m} grid")));
    }
    Ok(Point::new(x, y))
}

/// Reads a `.gmod` module. Commutativity is not checked here; see
/// [`GridModule::validate`].
pub fn parse_gmod(text: &str) -> Result<GridModule, FormatError> {
    let mut lines = Lines::new(text);
    header(&mut lines, "gridmodule")?;
    let field = field_line(&mut lines)?;
    let (n, m) = grid_line(&mut lines)?;
    let mut dims = BTreeMap::new();
    while let Some((no, line)) = lines.peek() {
        if !line.starts_with("dim") {
            break;
        }
        lines.next();
        let v: Vec<usize> = numbers(no, line.trim_start_matches("dim"), Some(3))?;
        let p = point_in(no, v[0], v[1], n, m)?;
        if dims.insert(p, v[2]).is_some() {
            return Err(ParseError::new(no, format!("dimension at {p} given twice")).into());
        }
    }
    let dim = |p: Point| dims.get(&p).copied().unwrap_or(0);
    let mut g = GridModule::with_dims(field, n, m, dim);
    let mut seen = BTreeMap::new();
    while let Some((no, line)) = lines.next() {
        let mut words = line.split_whitespace();
        let kind = words.next().unwrap_or("");
        let v: Vec<usize> = numbers(no, &words.collect::<Vec<_>>().join(" "), Some(2))?;
        let p = point_in(no, v[0], v[1], n, m)?;
        let q = match kind {
            "hmap" if p.x < n => Point::new(p.x + 1, p.y),
            "vmap" if p.y < m => Point::new(p.x, p.y + 1),
            "hmap" | "vmap" => return Err(ParseError::new(no, format!("{kind} at {p} leaves the grid")).into()),
            other => return Err(ParseError::new(no, format!("expected hmap or vmap, found `{other}`")).into()),
        };
        if dim(p) == 0 || dim(q) == 0 {
            return Err(ParseError::new(no, format!("{kind} at {p} touches a zero space and is implied zero")).into());
        }
        if seen.insert((kind == "hmap", p), no).is_some() {
            return Err(ParseError::new(no, format!("{kind} at {p} given twice")).into());
        }
        let mut rows = Vec::with_capacity(dim(q));
        for _ in 0..dim(q) {
            let (rno, row) = lines.expect("a matrix row")?;
            rows.push(numbers::<i64>(rno, row, Some(dim(p)))?);
        }
        let mat = Matrix::from_rows_with_cols(field, dim(p), &rows);
        if kind == "hmap" {
            g.set_hmap(p, mat)?;
        } else {
            g.set_vmap(p, mat)?;
        }
    }
    for p in g.points() {
        let h = Point::new(p.x + 1, p.y);
        if p.x < n && dim(p) > 0 && dim(h) > 0 && !seen.contains_key(&(true, p)) {
            return Err(ParseError::new(0, format!("missing hmap at {p}")).into());
        }
        let v = Point::new(p.x, p.y + 1);
        if p.y < m && dim(p) > 0 && dim(v) > 0 && !seen.contains_key(&(false, p)) {
            return Err(ParseError::new(0, format!("missing vmap at {p}")).into());
        }
    }
    Ok(g)
}

fn write_matrix(out: &mut String, mat: &Matrix) {
    let f = mat.field();
    for r in 0..mat.rows() {
        let row: Vec<String> = mat.row(r).iter().map(|&v| f.signed(v).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn write_gmod(g: &GridModule) -> String {
    let (n, m) = g.extent();
    let mut out = format!("gridmodule\nfield {}\ngrid {n} {m}\n", g.field().modulus());
    for p in g.points().filter(|&p| g.dim(p) > 0) {
        let _ = writeln!(out, "dim {} {} {}", p.x, p.y, g.dim(p));
    }
    for p in g.points().filter(|&p| g.dim(p) > 0) {
        if p.x < n && g.dim(Point::new(p.x + 1, p.y)) > 0 {
            let _ = writeln!(out, "hmap {} {}", p.x, p.y);
            write_matrix(&mut out, g.hmap(p));
        }
        if p.y < m && g.dim(Point::new(p.x, p.y + 1)) > 0 {
            let _ = writeln!(out, "vmap {} {}", p.x, p.y);
            write_matrix(&mut out, g.vmap(p));
        }
    }
    out
}

/// Reads a `.bif` file: its field and the bifiltration.
pub fn parse_bif(text: &str) -> Result<(Field, Bifiltration), FormatError> {
    let mut lines = Lines::new(text);
    header(&mut lines, "bifiltration")?;
    let field = field_line(&mut lines)?;
    let mut simplices = Vec::new();
    while let Some((no, line)) = lines.next() {
        let (grade, verts) = line
            .split_once(';')
            .ok_or_else(|| ParseError::new(no, "expected `g_x g_y ; v0 v1 ...`"))?;
        let g: Vec<f64> = numbers(no, grade, Some(2))?;
        if g.iter().any(|v| !v.is_finite()) {
            return Err(ParseError::new(no, "grades must be finite").into());
        }
        let v: Vec<u32> = numbers(no, verts, None)?;
        if v.is_empty() {
            return Err(ParseError::new(no, "simplex without vertices").into());
        }
        simplices.push((v, (g[0], g[1])));
    }
    Ok((field, Bifiltration::from_real(simplices)?))
}

/// Writes grid grades, which read back verbatim.
pub fn write_bif(field: Field, f: &Bifiltration) -> String {
    let mut out = format!("bifiltration\nfield {}\n", field.modulus());
    for (i, s) in f.complex().simplices().iter().enumerate() {
        let g = f.grade(i);
        let v: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{} {} ; {}", g.x, g.y, v.join(" "));
    }
    out
}

fn grades_block(lines: &mut Lines, name: &str, n: usize, m: usize) -> Result<Vec<Point>, ParseError> {
    match lines.next() {
        Some((_, l)) if l == name => {}
        Some((no, l)) => return Err(ParseError::new(no, format!("expected `{name}`, found `{l}`"))),
        None => return Err(ParseError::new(0, format!("unexpected end of input, expected `{name}`"))),
    }
    let mut out = Vec::new();
    while let Some((no, line)) = lines.peek() {
        if !line.starts_with(|c: char| c.is_ascii_digit()) {
            break;
        }
        lines.next();
        let v: Vec<usize> = numbers(no, line, Some(2))?;
        out.push(point_in(no, v[0], v[1], n, m)?);
    }
    Ok(out)
}

fn triplets_block(lines: &mut Lines, name: &str, field: Field, rows: usize, cols: usize) -> Result<Matrix, ParseError> {
    match lines.next() {
        Some((_, l)) if l == name => {}
        Some((no, l)) => return Err(ParseError::new(no, format!("expected `{name}`, found `{l}`"))),
        None => return Err(ParseError::new(0, format!("unexpected end of input, expected `{name}`"))),
    }
    let mut mat = Matrix::zeros(field, rows, cols);
    while let Some((no, line)) = lines.peek() {
        if !line.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
            break;
        }
        lines.next();
        let v: Vec<i64> = numbers(no, line, Some(3))?;
        let (r, c) = (v[0], v[1]);
        if r < 1 || c < 1 || r as usize > rows || c as usize > cols {
            return Err(ParseError::new(
                no,
                format!("entry ({r}, {c}) outside a {rows}x{cols} matrix"),
            ));
        }
        mat.set(r as usize - 1, c as usize - 1, field.reduce(v[2]));
    }
    Ok(mat)
}

/// Reads a `.fres` resolution; [`FreeResolution::new`] re-validates it.
pub fn parse_fres(text: &str) -> Result<FreeResolution, FormatError> {
    let mut lines = Lines::new(text);
    header(&mut lines, "resolution")?;
    let field = field_line(&mut lines)?;
    let (n, m) = grid_line(&mut lines)?;
    let gens = grades_block(&mut lines, "gens", n, m)?;
    let rels = grades_block(&mut lines, "rels", n, m)?;
    let relrels = grades_block(&mut lines, "relrels", n, m)?;
    let phi = triplets_block(&mut lines, "phi", field, gens.len(), rels.len())?;
    let psi = triplets_block(&mut lines, "psi", field, rels.len(), relrels.len())?;
    if let Some((no, l)) = lines.next() {
        return Err(ParseError::new(no, format!("unexpected `{l}` after psi")).into());
    }
    Ok(FreeResolution::new(field, n, m, gens, rels, relrels, phi, psi)?)
}

pub fn write_fres(r: &FreeResolution) -> String {
    let (n, m) = r.extent();
    let mut out = format!("resolution\nfield {}\ngrid {n} {m}\n", r.field().modulus());
    for (name, grades) in [
        ("gens", r.gens().grades()),
        ("rels", r.rels().grades()),
        ("relrels", r.relrels().grades()),
    ] {
        let _ = writeln!(out, "{name}");
        for g in grades {
            let _ = writeln!(out, "{} {}", g.x, g.y);
        }
    }
    for (name, mat) in [("phi", r.phi().matrix()), ("psi", r.psi().matrix())] {
        let _ = writeln!(out, "{name}");
        for c in 0..mat.cols() {
            for row in 0..mat.rows() {
                let v = mat.get(row, c);
                if v != 0 {
                    let _ = writeln!(out, "{} {} {}", row + 1, c + 1, r.field().signed(v));
                }
            }
        }
    }
    out
}

/// One line per comparable pair, in lexicographic order.
pub fn write_rank(r: &RankInvariant) -> String {
    let mut out = String::new();
    for (s, t, v) in r.entries() {
        let _ = writeln!(out, "{} {} {} {} {v}", s.x, s.y, t.x, t.y);
    }
    out
}

/// Reads a `.rank` table. The grid is the largest point mentioned, and every
/// comparable pair of it must be listed exactly once.
pub fn parse_rank(text: &str) -> Result<RankInvariant, FormatError> {
    let mut lines = Lines::new(text);
    let mut rows = Vec::new();
    while let Some((no, line)) = lines.next() {
        let v: Vec<usize> = numbers(no, line, Some(5))?;
        let (s, t) = (Point::new(v[0], v[1]), Point::new(v[2], v[3]));
        if v[..4].contains(&0) || !s.leq(t) {
            return Err(ParseError::new(no, format!("{s} <= {t} is not a comparable pair of grid points")).into());
        }
        rows.push((no, s, t, v[4] as u32));
    }
    if rows.is_empty() {
        return Err(ParseError::new(0, "empty rank table").into());
    }
    let n = rows.iter().map(|r| r.2.x).max().unwrap();
    let m = rows.iter().map(|r| r.2.y).max().unwrap();
    let mut table = RankInvariant::zeros(n, m);
    let mut seen = std::collections::BTreeSet::new();
    for (no, s, t, v) in rows {
        if !seen.insert((s, t)) {
            return Err(ParseError::new(no, format!("pair {s} {t} listed twice")).into());
        }
        table.set(s, t, v);
    }
    if let Some((s, t)) = comparable_pairs(n, m).find(|p| !seen.contains(p)) {
        return Err(ParseError::new(0, format!("pair {s} {t} missing from the table")).into());
    }
    Ok(table)
}

pub fn write_barcode(b: &RectangleBarcode) -> String {
    let mut out = String::new();
    for (s, t, k) in b.entries() {
        let _ = writeln!(out, "{} {} {} {} {k}", s.x, s.y, t.x, t.y);
    }
    out
}

pub fn parse_barcode(text: &str) -> Result<RectangleBarcode, FormatError> {
    let mut lines = Lines::new(text);
    let mut b = RectangleBarcode::new();
    while let Some((no, line)) = lines.next() {
        let v: Vec<usize> = numbers(no, line, Some(5))?;
        let (s, t) = (Point::new(v[0], v[1]), Point::new(v[2], v[3]));
        if v[..4].contains(&0) || !s.leq(t) {
            return Err(ParseError::new(no, format!("{s}..{t} is not a rectangle of grid points")).into());
        }
        b.add(s, t, v[4] as u32);
    }
    Ok(b)
}

/// `degree birth death` per bar, stations 1-based.
pub fn write_zbar(degree: usize, b: &ZigzagBarcode) -> String {
    let mut out = String::new();
    for bar in &b.bars {
        let _ = writeln!(out, "{degree} {} {}", bar.birth + 1, bar.death + 1);
    }
    out
}

/// Bars of a `.zbar` file, grouped by degree.
pub fn parse_zbar(text: &str) -> Result<BTreeMap<usize, ZigzagBarcode>, FormatError> {
    let mut lines = Lines::new(text);
    let mut bars: BTreeMap<usize, Vec<Bar>> = BTreeMap::new();
    while let Some((no, line)) = lines.next() {
        let v: Vec<usize> = numbers(no, line, Some(3))?;
        if v[1] == 0 || v[1] > v[2] {
            return Err(ParseError::new(no, format!("bad bar [{}, {}]", v[1], v[2])).into());
        }
        bars.entry(v[0]).or_default().push(Bar {
            birth: v[1] - 1,
            death: v[2] - 1,
        });
    }
    Ok(bars.into_iter().map(|(d, b)| (d, ZigzagBarcode::new(b))).collect())
}
