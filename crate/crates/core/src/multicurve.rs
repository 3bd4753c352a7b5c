//! Weighted multicurves supported on cylinder cores, their bilinear
//! intersection pairing, Busemann-point specifications and filling status.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::origami::{CoreId, Origami, Side};
use crate::weight::{Rational, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MulticurveError {
    #[error("intersection matrix must be non-empty with equal-length rows")]
    BadMatrix,
    #[error("expected curves on opposite sides, both are {0:?}")]
    SameSide(Side),
    #[error("matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("curves live on different origamis")]
    HostMismatch,
    #[error("{0} is not a cylinder of the host")]
    UnknownCylinder(CoreId),
    #[error("{0} is listed twice")]
    DuplicateComponent(CoreId),
    #[error("{0} is on the wrong side for this family")]
    WrongSide(CoreId),
    #[error("weight or coefficient on {0} is not positive")]
    NonPositive(CoreId),
    #[error("empty component set")]
    Empty,
}

/// Geometric intersection numbers `n_ij` between two families of disjoint cores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix(Matrix<u64>);

impl IntersectionMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self, MulticurveError> {
        Matrix::from_rows(rows)
            .map(Self)
            .ok_or(MulticurveError::BadMatrix)
    }

    pub fn from_matrix(m: Matrix<u64>) -> Result<Self, MulticurveError> {
        if m.rows() == 0 || m.cols() == 0 {
            return Err(MulticurveError::BadMatrix);
        }
        Ok(Self(m))
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &Matrix<u64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.rows())
            .map(|i| self.0.row(i).iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self, MulticurveError> {
        if rows.is_empty() || cols.is_empty() {
            return Err(MulticurveError::Empty);
        }
        Ok(Self(Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j])
        })))
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.0.map(|&x| x as f64)
    }
}

fn same_host(a: &Origami, b: &Origami) -> bool {
    core::ptr::eq(a, b) || a == b
}

/// `Σ w_i γ_i` over disjoint cores `γ_i` of one side of an origami.
#[derive(Debug, Clone)]
pub struct WeightedMulticurve<W = Rational> {
    host: Arc<Origami>,
    side: Side,
    components: Vec<(usize, W)>,
}

impl<W: PartialEq> PartialEq for WeightedMulticurve<W> {
    fn eq(&self, other: &Self) -> bool {
        same_host(&self.host, &other.host)
            && self.side == other.side
            && self.components == other.components
    }
}

impl<W: Weight> WeightedMulticurve<W> {
    /// Components are `(cylinder index, weight)` pairs on `side`; they are
    /// stored sorted by cylinder index.
    pub fn new(
        host: Arc<Origami>,
        side: Side,
        components: impl IntoIterator<Item = (usize, W)>,
    ) -> Result<Self, MulticurveError> {
        let mut components: Vec<(usize, W)> = components.into_iter().collect();
        if components.is_empty() {
            return Err(MulticurveError::Empty);
        }
        components.sort_by_key(|(i, _)| *i);
        let count = host.cylinder_count(side);
        for (k, (i, w)) in components.iter().enumerate() {
            let id = CoreId { side, index: *i };
            if *i >= count {
                return Err(MulticurveError::UnknownCylinder(id));
            }
            if k > 0 && components[k - 1].0 == *i {
                return Err(MulticurveError::DuplicateComponent(id));
            }
            if !w.is_positive() {
                return Err(MulticurveError::NonPositive(id));
            }
        }
        Ok(Self {
            host,
            side,
            components,
        })
    }

    /// A single core with unit weight.
    pub fn core(host: Arc<Origami>, id: CoreId) -> Result<Self, MulticurveError> {
        Self::new(host, id.side, [(id.index, W::from_count(1))])
    }

    /// One weight per cylinder of `side`, in canonical order.
    pub fn from_dense(
        host: Arc<Origami>,
        side: Side,
        weights: Vec<W>,
    ) -> Result<Self, MulticurveError> {
        let count = host.cylinder_count(side);
        if weights.len() != count {
            return Err(MulticurveError::DimensionMismatch {
                rows: weights.len(),
                cols: 1,
                expected_rows: count,
                expected_cols: 1,
            });
        }
        Self::new(host, side, weights.into_iter().enumerate())
    }

    pub fn host(&self) -> &Arc<Origami> {
        &self.host
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn components(&self) -> &[(usize, W)] {
        &self.components
    }

    pub fn ids(&self) -> impl Iterator<Item = CoreId> + '_ {
        let side = self.side;
        self.components.iter().map(move |(index, _)| CoreId {
            side,
            index: *index,
        })
    }

    /// Weights for every cylinder of the side, zero where absent.
    pub fn dense(&self) -> Vec<W> {
        let mut out = vec![W::zero(); self.host.cylinder_count(self.side)];
        for (i, w) in &self.components {
            out[*i] = w.clone();
        }
        out
    }

    pub fn is_full(&self) -> bool {
        self.components.len() == self.host.cylinder_count(self.side)
    }

    pub fn scaled(&self, r: &W) -> Self {
        Self {
            host: self.host.clone(),
            side: self.side,
            components: self
                .components
                .iter()
                .map(|(i, w)| (*i, w.mul(r)))
                .collect(),
        }
    }

    pub fn to_real(&self) -> WeightedMulticurve<f64> {
        WeightedMulticurve {
            host: self.host.clone(),
            side: self.side,
            components: self
                .components
                .iter()
                .map(|(i, w)| (*i, w.to_f64()))
                .collect(),
        }
    }
}

/// `Σ_{i,j} a_i n_ij b_j` for `a` on the rows' side and `b` on the columns'
/// side. `n` must be the host's core intersection matrix oriented with rows
/// on `a`'s side (pass the transpose when `a` is vertical).
pub fn pair_intersection<W: Weight>(
    a: &WeightedMulticurve<W>,
    b: &WeightedMulticurve<W>,
    n: &IntersectionMatrix,
) -> Result<W, MulticurveError> {
    if a.side == b.side {
        return Err(MulticurveError::SameSide(a.side));
    }
    if !same_host(&a.host, &b.host) {
        return Err(MulticurveError::HostMismatch);
    }
    let (rows, cols) = (a.host.cylinder_count(a.side), a.host.cylinder_count(b.side));
    if n.rows() != rows || n.cols() != cols {
        return Err(MulticurveError::DimensionMismatch {
            rows: n.rows(),
            cols: n.cols(),
            expected_rows: rows,
            expected_cols: cols,
        });
    }
    let mut acc = W::zero();
    for (i, wa) in &a.components {
        for (j, wb) in &b.components {
            let nij = n.get(*i, *j);
            if nij != 0 {
                acc = acc.add(&wa.mul(&W::from_count(nij)).mul(wb));
            }
        }
    }
    Ok(acc)
}

/// Geometric intersection number of two multicurves on the same host, using
/// the host's own matrix. Curves on the same side are disjoint.
pub fn intersection<W: Weight>(
    a: &WeightedMulticurve<W>,
    b: &WeightedMulticurve<W>,
) -> Result<W, MulticurveError> {
    if !same_host(&a.host, &b.host) {
        return Err(MulticurveError::HostMismatch);
    }
    match (a.side, b.side) {
        (Side::Horizontal, Side::Vertical) => pair_intersection(a, b, a.host.intersection_matrix()),
        (Side::Vertical, Side::Horizontal) => pair_intersection(b, a, a.host.intersection_matrix()),
        _ => Ok(W::zero()),
    }
}

/// A Busemann-point coefficient: exact when read from `p/q`, approximate when
/// read from a decimal.
#[derive(Debug, Clone, PartialEq)]
pub enum Coeff {
    Exact(Rational),
    Approx(f64),
}

impl Coeff {
    pub fn value(&self) -> f64 {
        match self {
            Coeff::Exact(r) => r.to_f64(),
            Coeff::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }
}

impl From<Rational> for Coeff {
    fn from(r: Rational) -> Self {
        Coeff::Exact(r)
    }
}

impl From<f64> for Coeff {
    fn from(x: f64) -> Self {
        Coeff::Approx(x)
    }
}

/// A boundary point given by `i(ξ,·)² = Σ c_i² i(γ_i,·)²` over disjoint cores
/// `γ_i` of one side.
#[derive(Debug, Clone)]
pub struct BusemannSpec {
    host: Arc<Origami>,
    side: Side,
    coeffs: Vec<(usize, Coeff)>,
}

impl BusemannSpec {
    pub fn new(
        host: Arc<Origami>,
        side: Side,
        coeffs: impl IntoIterator<Item = (usize, Coeff)>,
    ) -> Result<Self, MulticurveError> {
        let mut coeffs: Vec<(usize, Coeff)> = coeffs.into_iter().collect();
        if coeffs.is_empty() {
            return Err(MulticurveError::Empty);
        }
        coeffs.sort_by_key(|(i, _)| *i);
        let count = host.cylinder_count(side);
        for (k, (i, c)) in coeffs.iter().enumerate() {
            let id = CoreId { side, index: *i };
            if *i >= count {
                return Err(MulticurveError::UnknownCylinder(id));
            }
            if k > 0 && coeffs[k - 1].0 == *i {
                return Err(MulticurveError::DuplicateComponent(id));
            }
            let v = c.value();
            if !(v.is_finite() && v > 0.0) {
                return Err(MulticurveError::NonPositive(id));
            }
        }
        Ok(Self { host, side, coeffs })
    }

    /// Unit coefficients on every core of `side`.
    pub fn unit(host: Arc<Origami>, side: Side) -> Self {
        let n = host.cylinder_count(side);
        Self::new(
            host,
            side,
            (0..n).map(|i| (i, Coeff::Exact(Rational::from_count(1)))),
        )
        .expect("unit coefficients are valid")
    }

    pub fn host(&self) -> &Arc<Origami> {
        &self.host
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn coeffs(&self) -> &[(usize, Coeff)] {
        &self.coeffs
    }

    pub fn values(&self) -> Vec<(usize, f64)> {
        self.coeffs.iter().map(|(i, c)| (*i, c.value())).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|(_, c)| c.is_exact())
    }

    pub fn is_full(&self) -> bool {
        self.coeffs.len() == self.host.cylinder_count(self.side)
    }

    /// Every coefficient multiplied by `r > 0`.
    pub fn scaled(&self, r: f64) -> Self {
        Self {
            host: self.host.clone(),
            side: self.side,
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| {
                    let c = match c {
                        Coeff::Exact(q) => Coeff::Approx(q.to_f64() * r),
                        Coeff::Approx(x) => Coeff::Approx(x * r),
                    };
                    (*i, c)
                })
                .collect(),
        }
    }

    /// Same point viewed on the rotated origami (sides exchanged).
    pub fn rotated(&self, rotated_host: Arc<Origami>) -> Self {
        Self {
            host: rotated_host,
            side: self.side.opposite(),
            coeffs: self.coeffs.clone(),
        }
    }
}

/// Anything with a set of cores of one side on a host.
pub trait Supported {
    fn host(&self) -> &Origami;
    fn side(&self) -> Side;
    fn support(&self) -> Vec<usize>;
}

impl<W: Weight> Supported for WeightedMulticurve<W> {
    fn host(&self) -> &Origami {
        &self.host
    }
    fn side(&self) -> Side {
        self.side
    }
    fn support(&self) -> Vec<usize> {
        self.components.iter().map(|(i, _)| *i).collect()
    }
}

impl Supported for BusemannSpec {
    fn host(&self) -> &Origami {
        &self.host
    }
    fn side(&self) -> Side {
        self.side
    }
    fn support(&self) -> Vec<usize> {
        self.coeffs.iter().map(|(i, _)| *i).collect()
    }
}

/// How much of the filling hypothesis is certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillingStatus {
    /// Both families are the full core sets of a connected origami.
    FillingCertified,
    /// The restricted matrix is primitive, but only a proper subset of cores
    /// is used; topological filling is not checked.
    MatrixPrimitiveOnly,
    NotFilling,
}

impl FillingStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FillingStatus::FillingCertified => "FillingCertified",
            FillingStatus::MatrixPrimitiveOnly => "MatrixPrimitiveOnly",
            FillingStatus::NotFilling => "NotFilling",
        }
    }
}

/// No zero row, no zero column, and connected bipartite support graph.
pub fn support_is_connected(
    rows: usize,
    cols: usize,
    positive: impl Fn(usize, usize) -> bool,
) -> bool {
    if rows == 0 || cols == 0 {
        return false;
    }
    // union-find over rows ∪ cols
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut row_hit = vec![false; rows];
    let mut col_hit = vec![false; cols];
    for i in 0..rows {
        for j in 0..cols {
            if positive(i, j) {
                row_hit[i] = true;
                col_hit[j] = true;
                let (a, b) = (find(&mut parent, i), find(&mut parent, rows + j));
                parent[a] = b;
            }
        }
    }
    if row_hit.contains(&false) || col_hit.contains(&false) {
        return false;
    }
    let root = find(&mut parent, 0);
    (1..rows + cols).all(|x| find(&mut parent, x) == root)
}

/// Filling diagnosis for two families on opposite sides. `n` is the host's
/// intersection matrix (rows horizontal).
pub fn filling_status<A: Supported, B: Supported>(
    a: &A,
    b: &B,
    n: &IntersectionMatrix,
) -> Result<FillingStatus, MulticurveError> {
    if a.side() == b.side() {
        return Err(MulticurveError::SameSide(a.side()));
    }
    if !same_host(a.host(), b.host()) {
        return Err(MulticurveError::HostMismatch);
    }
    let host = a.host();
    let (hcount, vcount) = (
        host.cylinder_count(Side::Horizontal),
        host.cylinder_count(Side::Vertical),
    );
    if n.rows() != hcount || n.cols() != vcount {
        return Err(MulticurveError::DimensionMismatch {
            rows: n.rows(),
            cols: n.cols(),
            expected_rows: hcount,
            expected_cols: vcount,
        });
    }
    let (rows, cols) = if a.side() == Side::Horizontal {
        (a.support(), b.support())
    } else {
        (b.support(), a.support())
    };
    if rows.is_empty() || cols.is_empty() {
        return Err(MulticurveError::Empty);
    }
    let sub = n.submatrix(&rows, &cols)?;
    if !support_is_connected(sub.rows(), sub.cols(), |i, j| sub.get(i, j) > 0) {
        return Ok(FillingStatus::NotFilling);
    }
    if rows.len() == hcount && cols.len() == vcount {
        Ok(FillingStatus::FillingCertified)
    } else {
        Ok(FillingStatus::MatrixPrimitiveOnly)
    }
}
