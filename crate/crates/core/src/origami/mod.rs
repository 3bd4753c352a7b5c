//! Square-tiled (origami) translation surfaces.
//!
//! An origami on `n` cells is a pair of permutations: `h` sends a cell to its
//! right neighbour and `v` to its top neighbour. Horizontal cylinders are the
//! cycles of `h`, vertical cylinders the cycles of `v`; both families are listed
//! in canonical order (by smallest cell id) and named `A1..Ak` / `B1..Bl`.
//! The cylinder cores are the only curves the crate manipulates.

mod catalog;
mod extremal;
mod surface;

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::multicurve::IntersectionMatrix;

pub use catalog::{catalog, cross5, eierlegende_wollmilchsau, l_shaped, staircase};
pub use extremal::{
    curve_ext_bounds, distance_interval, foliation_ext, foliation_ext_of, kerckhoff_lower,
    proportionality, qc_upper, DISTANCE_TOL, PROPORTIONALITY_TOL,
};
pub use surface::{SurfaceError, WeightedSurface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrigamiError {
    #[error("origami must have at least one cell")]
    Empty,
    #[error("h has {h} entries but v has {v}")]
    LengthMismatch { h: usize, v: usize },
    #[error("{which} is not a permutation of 1..{n}")]
    NotBijective { which: &'static str, n: usize },
    #[error("surface is disconnected: h and v do not act transitively")]
    Disconnected,
    #[error("genus {genus} is too small (need genus >= 2)")]
    ComplexityTooLow { genus: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Horizontal,
    Vertical,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::Horizontal => Side::Vertical,
            Side::Vertical => Side::Horizontal,
        }
    }

    fn prefix(self) -> char {
        match self {
            Side::Horizontal => 'A',
            Side::Vertical => 'B',
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Horizontal => "horizontal",
            Side::Vertical => "vertical",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "horizontal" => Ok(Side::Horizontal),
            "vertical" => Ok(Side::Vertical),
            other => Err(alloc::format!("unknown side {other:?}")),
        }
    }
}

/// Identifies a cylinder core: `A3` is the third horizontal cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoreId {
    pub side: Side,
    pub index: usize,
}

impl CoreId {
    pub fn horizontal(index: usize) -> Self {
        Self {
            side: Side::Horizontal,
            index,
        }
    }

    pub fn vertical(index: usize) -> Self {
        Self {
            side: Side::Vertical,
            index,
        }
    }
}

impl fmt::Display for CoreId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side.prefix(), self.index + 1)
    }
}

impl FromStr for CoreId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let side = match s.chars().next() {
            Some('A') => Side::Horizontal,
            Some('B') => Side::Vertical,
            _ => return Err(alloc::format!("bad cylinder id {s:?}")),
        };
        let k: usize = s[1..]
            .parse()
            .map_err(|_| alloc::format!("bad cylinder id {s:?}"))?;
        if k == 0 {
            return Err(alloc::format!("cylinder ids are 1-based: {s:?}"));
        }
        Ok(CoreId { side, index: k - 1 })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    pub id: CoreId,
    /// Cells (0-based) in cycle order.
    pub squares: Vec<usize>,
}

impl Cylinder {
    pub fn combinatorial_length(&self) -> usize {
        self.squares.len()
    }
}

/// Combinatorial data of a permutation pair, computed without the genus
/// restriction that [`Origami`] enforces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combinatorics {
    pub horizontal: Vec<Cylinder>,
    pub vertical: Vec<Cylinder>,
    /// Cone angle of every vertex, in multiples of 2π.
    pub cone_angles: Vec<usize>,
    pub genus: usize,
    /// V − E + F of the square tiling.
    pub euler_characteristic: i64,
    cell_row: Vec<usize>,
    cell_col: Vec<usize>,
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

fn check_perm(p: &[usize], which: &'static str) -> Result<(), OrigamiError> {
    let n = p.len();
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || seen[x] {
            return Err(OrigamiError::NotBijective { which, n });
        }
        seen[x] = true;
    }
    Ok(())
}

/// Cycles of `p`, each starting at its smallest element, ordered by that element.
fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = p[x];
        }
        out.push(c);
    }
    out
}

impl Combinatorics {
    /// Analyses a zero-based permutation pair.
    pub fn analyze(h: &[usize], v: &[usize]) -> Result<Self, OrigamiError> {
        let n = h.len();
        if n == 0 {
            return Err(OrigamiError::Empty);
        }
        if v.len() != n {
            return Err(OrigamiError::LengthMismatch { h: n, v: v.len() });
        }
        check_perm(h, "h")?;
        check_perm(v, "v")?;

        // transitivity
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(c) = queue.pop_front() {
            for next in [h[c], v[c]] {
                if !seen[next] {
                    seen[next] = true;
                    reached += 1;
                    queue.push_back(next);
                }
            }
        }
        if reached != n {
            return Err(OrigamiError::Disconnected);
        }

        let mk = |side: Side, cs: Vec<Vec<usize>>| -> Vec<Cylinder> {
            cs.into_iter()
                .enumerate()
                .map(|(index, squares)| Cylinder {
                    id: CoreId { side, index },
                    squares,
                })
                .collect()
        };
        let horizontal = mk(Side::Horizontal, cycles(h));
        let vertical = mk(Side::Vertical, cycles(v));
        let mut cell_row = vec![0; n];
        let mut cell_col = vec![0; n];
        for c in &horizontal {
            for &s in &c.squares {
                cell_row[s] = c.id.index;
            }
        }
        for c in &vertical {
            for &s in &c.squares {
                cell_col[s] = c.id.index;
            }
        }

        // Corner walk around the bottom-left corner of each cell: step left,
        // down, right, up. Each orbit is one vertex and its length is the cone
        // angle in multiples of 2π.
        let hi = invert(h);
        let vi = invert(v);
        let walk: Vec<usize> = (0..n).map(|c| v[h[vi[hi[c]]]]).collect();
        let cone_angles: Vec<usize> = cycles(&walk).iter().map(Vec::len).collect();

        let vertices = cone_angles.len() as i64;
        let euler_characteristic = vertices - 2 * n as i64 + n as i64;
        let genus = ((2 - euler_characteristic) / 2) as usize;

        Ok(Self {
            horizontal,
            vertical,
            cone_angles,
            genus,
            euler_characteristic,
            cell_row,
            cell_col,
        })
    }

    /// Σ (cone angle / 2π − 1) over all vertices.
    pub fn angle_excess(&self) -> i64 {
        self.cone_angles.iter().map(|&m| m as i64 - 1).sum()
    }

    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        let mut m = Matrix::<u64>::zeros(self.horizontal.len(), self.vertical.len());
        for (&r, &c) in self.cell_row.iter().zip(&self.cell_col) {
            m[(r, c)] += 1;
        }
        IntersectionMatrix::from_matrix(m).expect("cylinder counts are positive")
    }
}

/// A validated origami of genus at least two.
#[derive(Debug, Clone)]
pub struct Origami {
    h: Vec<usize>,
    v: Vec<usize>,
    comb: Combinatorics,
    matrix: IntersectionMatrix,
}

impl PartialEq for Origami {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.v == other.v
    }
}

impl Eq for Origami {}

impl Origami {
    /// Zero-based permutation images.
    pub fn new(h: Vec<usize>, v: Vec<usize>) -> Result<Self, OrigamiError> {
        let comb = Combinatorics::analyze(&h, &v)?;
        if comb.genus < 2 {
            return Err(OrigamiError::ComplexityTooLow { genus: comb.genus });
        }
        let matrix = comb.intersection_matrix();
        Ok(Self { h, v, comb, matrix })
    }

    /// One-based permutation images, as in the JSON file format.
    pub fn from_one_based(h: &[usize], v: &[usize]) -> Result<Self, OrigamiError> {
        let n = h.len();
        let shift = |p: &[usize], which| {
            p.iter()
                .map(|&x| {
                    x.checked_sub(1)
                        .ok_or(OrigamiError::NotBijective { which, n })
                })
                .collect::<Result<Vec<_>, _>>()
        };
        Self::new(shift(h, "h")?, shift(v, "v")?)
    }

    /// Realizes a connected intersection pattern as an origami: one cell per
    /// unit of `n[i][j]`, numbered row-major, with rows as horizontal cycles and
    /// columns as vertical cycles. Vertical cylinders come back in canonical
    /// order, which can permute the columns of `n`.
    pub fn realize(n: &IntersectionMatrix) -> Result<Self, OrigamiError> {
        let mut cells_in_col: Vec<Vec<usize>> = vec![Vec::new(); n.cols()];
        let mut rows: Vec<Vec<usize>> = Vec::with_capacity(n.rows());
        let mut next = 0;
        for i in 0..n.rows() {
            let mut row = Vec::new();
            for (j, col) in cells_in_col.iter_mut().enumerate() {
                for _ in 0..n.get(i, j) {
                    row.push(next);
                    col.push(next);
                    next += 1;
                }
            }
            rows.push(row);
        }
        if next == 0 {
            return Err(OrigamiError::Empty);
        }
        let mut h = vec![0; next];
        let mut v = vec![0; next];
        for cyc in &rows {
            for (k, &c) in cyc.iter().enumerate() {
                h[c] = cyc[(k + 1) % cyc.len()];
            }
        }
        for cyc in &cells_in_col {
            for (k, &c) in cyc.iter().enumerate() {
                v[c] = cyc[(k + 1) % cyc.len()];
            }
        }
        Self::new(h, v)
    }

    /// The same surface turned a quarter turn clockwise: old vertical
    /// cylinders become horizontal ones (same cell sets, same canonical order).
    pub fn rotated(&self) -> Self {
        Self::new(self.v.clone(), invert(&self.h)).expect("rotation preserves validity")
    }

    pub fn squares(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn v(&self) -> &[usize] {
        &self.v
    }

    pub fn h_one_based(&self) -> Vec<usize> {
        self.h.iter().map(|x| x + 1).collect()
    }

    pub fn v_one_based(&self) -> Vec<usize> {
        self.v.iter().map(|x| x + 1).collect()
    }

    pub fn combinatorics(&self) -> &Combinatorics {
        &self.comb
    }

    pub fn genus(&self) -> usize {
        self.comb.genus
    }

    pub fn cone_angles(&self) -> &[usize] {
        &self.comb.cone_angles
    }

    pub fn cylinders(&self, side: Side) -> &[Cylinder] {
        match side {
            Side::Horizontal => &self.comb.horizontal,
            Side::Vertical => &self.comb.vertical,
        }
    }

    pub fn cylinder_count(&self, side: Side) -> usize {
        self.cylinders(side).len()
    }

    pub fn cylinder(&self, id: CoreId) -> Option<&Cylinder> {
        self.cylinders(id.side).get(id.index)
    }

    /// All cores, horizontal first, each family in canonical order.
    pub fn cores(&self) -> Vec<CoreId> {
        self.comb
            .horizontal
            .iter()
            .chain(&self.comb.vertical)
            .map(|c| c.id)
            .collect()
    }

    /// `n[i][j]` = number of cells shared by horizontal cylinder `i` and
    /// vertical cylinder `j`, which is also the geometric intersection number
    /// of their cores.
    pub fn intersection_matrix(&self) -> &IntersectionMatrix {
        &self.matrix
    }

    /// Intersection number of two cores.
    pub fn core_intersection(&self, a: CoreId, b: CoreId) -> u64 {
        match (a.side, b.side) {
            (Side::Horizontal, Side::Vertical) => self.matrix.get(a.index, b.index),
            (Side::Vertical, Side::Horizontal) => self.matrix.get(b.index, a.index),
            _ => 0,
        }
    }
}
