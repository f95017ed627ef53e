//! Convex-body primitives in dimensions 1-3: gauges, radial and support
//! functions, volumes, shadows, chords, covariograms and affine images.
//!
//! Bodies are immutable after construction; all validation happens in the
//! constructors. Polytopes carry both a halfspace and a vertex
//! representation, kept consistent at build time, so the individual
//! operations are closed-form and cheap.

use crate::error::{Error, Result};
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Feasibility / dedup tolerance for the small-scale exact geometry.
const EPS: f64 = 1e-9;
/// Chords and clip intervals shorter than this count as empty.
const EPS_CHORD: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Small fixed-size linear algebra (dimensions 1-3)
// ---------------------------------------------------------------------------

/// A point or vector in dimension 1, 2 or 3. Three slots are always
/// allocated; coordinates past `dim` stay zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector {
    c: [f64; 3],
    dim: usize,
}

impl Vector {
    pub fn new1(x: f64) -> Self {
        Vector { c: [x, 0.0, 0.0], dim: 1 }
    }

    pub fn new2(x: f64, y: f64) -> Self {
        Vector { c: [x, y, 0.0], dim: 2 }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Vector { c: [x, y, z], dim: 3 }
    }

    pub fn zero(dim: usize) -> Self {
        Vector { c: [0.0; 3], dim }
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        match v.len() {
            1 => Ok(Self::new1(v[0])),
            2 => Ok(Self::new2(v[0], v[1])),
            3 => Ok(Self::new3(v[0], v[1], v[2])),
            d => Err(Error::Unsupported(format!("vector of dimension {d}"))),
        }
    }

    /// Standard basis vector `e_axis`.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut v = Self::zero(dim);
        v.c[axis] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim]
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.c[0] * other.c[0] + self.c[1] * other.c[1] + self.c[2] * other.c[2]
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }

    pub fn scaled(&self, s: f64) -> Vector {
        Vector {
            c: [self.c[0] * s, self.c[1] * s, self.c[2] * s],
            dim: self.dim,
        }
    }

    pub fn normalized(&self) -> Result<Vector> {
        let n = self.norm();
        if n < EPS_CHORD {
            return Err(Error::Domain("cannot normalize a (near-)zero vector".into()));
        }
        Ok(self.scaled(1.0 / n))
    }

    /// Counterclockwise rotation by 90 degrees (dimension 2 only).
    pub fn perp(&self) -> Vector {
        debug_assert_eq!(self.dim, 2);
        Vector::new2(-self.c[1], self.c[0])
    }

    pub fn cross(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim, 3);
        Vector::new3(
            self.c[1] * other.c[2] - self.c[2] * other.c[1],
            self.c[2] * other.c[0] - self.c[0] * other.c[2],
            self.c[0] * other.c[1] - self.c[1] * other.c[0],
        )
    }

    /// An arbitrary unit vector orthogonal to `self` (dimension 3).
    fn any_orthogonal(&self) -> Vector {
        debug_assert_eq!(self.dim, 3);
        let trial = if self.c[0].abs() < 0.9 {
            Vector::new3(1.0, 0.0, 0.0)
        } else {
            Vector::new3(0.0, 1.0, 0.0)
        };
        let v = self.cross(&trial);
        v.normalized().expect("orthogonal of unit vector")
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.c[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.c[i]
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, o: Vector) -> Vector {
        Vector {
            c: [self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2]],
            dim: self.dim,
        }
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, o: Vector) -> Vector {
        Vector {
            c: [self.c[0] - o.c[0], self.c[1] - o.c[1], self.c[2] - o.c[2]],
            dim: self.dim,
        }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        self.scaled(s)
    }
}

/// Square matrix in dimension 1-3, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix {
    m: [[f64; 3]; 3],
    dim: usize,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Matrix { m, dim }
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::Unsupported(format!("matrix of dimension {dim}")));
        }
        let mut m = Matrix::identity(dim);
        for (i, &d) in diag.iter().enumerate() {
            m.m[i][i] = d;
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if !(1..=3).contains(&dim) || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Unsupported("matrix must be square, dimension 1-3".into()));
        }
        let mut m = Matrix::identity(dim);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.m[i][j] = v;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.m[r][c]
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        match self.dim {
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = *self;
        for r in 0..3 {
            for c in 0..3 {
                t.m[r][c] = self.m[c][r];
            }
        }
        t
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let d = self.det();
        if d.abs() < 1e-14 {
            return Err(Error::Domain("matrix is singular".into()));
        }
        let m = &self.m;
        let inv = match self.dim {
            1 => Matrix::from_rows(&[vec![1.0 / d]])?,
            2 => Matrix::from_rows(&[
                vec![m[1][1] / d, -m[0][1] / d],
                vec![-m[1][0] / d, m[0][0] / d],
            ])?,
            _ => {
                let cof = |r1: usize, c1: usize, r2: usize, c2: usize| {
                    m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]
                };
                Matrix::from_rows(&[
                    vec![cof(1, 1, 2, 2) / d, -cof(0, 1, 2, 2) / d, cof(0, 1, 1, 2) / d],
                    vec![-cof(1, 0, 2, 2) / d, cof(0, 0, 2, 2) / d, -cof(0, 0, 1, 2) / d],
                    vec![cof(1, 0, 2, 1) / d, -cof(0, 0, 2, 1) / d, cof(0, 0, 1, 1) / d],
                ])?
            }
        };
        Ok(inv)
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero(self.dim);
        for r in 0..self.dim {
            let mut s = 0.0;
            for c in 0..self.dim {
                s += self.m[r][c] * v[c];
            }
            out[r] = s;
        }
        out
    }

    pub fn mul_mat(&self, o: &Matrix) -> Matrix {
        let mut out = Matrix::identity(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut s = 0.0;
                for k in 0..self.dim {
                    s += self.m[r][k] * o.m[k][c];
                }
                out.m[r][c] = s;
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.m[r][c] *= s;
            }
        }
        out
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy)]
pub struct Aabb {
    pub lo: Vector,
    pub hi: Vector,
}

impl Aabb {
    pub fn new(lo: Vector, hi: Vector) -> Self {
        debug_assert_eq!(lo.dim(), hi.dim());
        Aabb { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        let mut lo = self.lo;
        let mut hi = self.hi;
        for i in 0..self.dim() {
            lo[i] = lo[i].min(other.lo[i]);
            hi[i] = hi[i].max(other.hi[i]);
        }
        Aabb { lo, hi }
    }

    pub fn translated(&self, v: &Vector) -> Aabb {
        Aabb { lo: self.lo + *v, hi: self.hi + *v }
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.hi[i] - self.lo[i]).product()
    }
}

/// A unit direction vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    u: Vector,
}

impl Direction {
    /// Normalizes the input; rejects (near-)zero vectors.
    pub fn new(v: Vector) -> Result<Self> {
        Ok(Direction { u: v.normalized()? })
    }

    pub fn from_angle(theta: f64) -> Self {
        Direction { u: Vector::new2(theta.cos(), theta.sin()) }
    }

    pub fn basis(dim: usize, axis: usize) -> Self {
        Direction { u: Vector::basis(dim, axis) }
    }

    pub fn vector(&self) -> &Vector {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn flipped(&self) -> Direction {
        Direction { u: -self.u }
    }
}

/// Closed halfspace `normal . x <= offset` with unit normal.
#[derive(Debug, Clone, Copy)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes the normal to unit length (rescaling the offset).
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if n < EPS_CHORD {
            return Err(Error::InvalidBody("halfspace normal must be nonzero".into()));
        }
        Ok(Halfspace { normal: normal.scaled(1.0 / n), offset: offset / n })
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.normal.dot(x) <= self.offset + tol
    }
}

// ---------------------------------------------------------------------------
// Body
// ---------------------------------------------------------------------------

/// Representation family of a [`Body`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    HPolytope,
    VPolytope,
    Simplex,
    Ball,
    /// Affine image of a ball; arises from [`Body::affine_map`] applied to
    /// a ball with a non-similarity matrix.
    Ellipsoid,
}

#[derive(Debug, Clone)]
enum Shape {
    Polytope,
    Ball {
        center: Vector,
        radius: f64,
    },
    Ellipsoid {
        center: Vector,
        mat: Matrix,
        inv: Matrix,
        det_abs: f64,
    },
}

/// A convex body in dimension 1, 2 or 3: bounded with nonempty interior
/// (except for internal measure-zero degenerations produced by level sets
/// at `t = 0`, which every operation treats as volume 0).
#[derive(Debug, Clone)]
pub struct Body {
    dim: usize,
    kind: BodyKind,
    shape: Shape,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Vector>,
}

impl Body {
    // -- constructors ------------------------------------------------------

    /// Intersection of halfspaces `a_i . x <= b_i`. Must be bounded with
    /// nonempty interior.
    pub fn hpolytope(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Body> {
        check_dim(dim)?;
        let hs = dedup_halfspaces(halfspaces);
        if hs.len() < dim + 1 {
            return Err(Error::InvalidBody("too few halfspaces to bound a body".into()));
        }
        let verts = enumerate_vertices(dim, &hs);
        validate_polytope(dim, &hs, &verts)?;
        let verts = order_vertices(dim, verts);
        Ok(Body { dim, kind: BodyKind::HPolytope, shape: Shape::Polytope, halfspaces: hs, vertices: verts })
    }

    /// Convex hull of a finite point set with full-dimensional affine hull.
    pub fn vpolytope(dim: usize, vertices: Vec<Vector>) -> Result<Body> {
        check_dim(dim)?;
        let verts = dedup_points(vertices);
        let hs = hull_halfspaces(dim, &verts)?;
        let extreme = extreme_points(dim, &verts, &hs);
        validate_polytope(dim, &hs, &extreme)?;
        let extreme = order_vertices(dim, extreme);
        Ok(Body { dim, kind: BodyKind::VPolytope, shape: Shape::Polytope, halfspaces: hs, vertices: extreme })
    }

    /// Simplex on `dim + 1` affinely independent vertices.
    pub fn simplex(dim: usize, vertices: Vec<Vector>) -> Result<Body> {
        check_dim(dim)?;
        if vertices.len() != dim + 1 {
            return Err(Error::InvalidBody(format!(
                "simplex in dimension {dim} needs {} vertices, got {}",
                dim + 1,
                vertices.len()
            )));
        }
        if simplex_volume(dim, &vertices) < 1e-12 {
            return Err(Error::InvalidBody("simplex vertices are affinely dependent".into()));
        }
        let hs = hull_halfspaces(dim, &vertices)?;
        let verts = order_vertices(dim, vertices);
        Ok(Body { dim, kind: BodyKind::Simplex, shape: Shape::Polytope, halfspaces: hs, vertices: verts })
    }

    /// Euclidean ball with positive radius.
    pub fn ball(dim: usize, center: Vector, radius: f64) -> Result<Body> {
        check_dim(dim)?;
        if !(radius > 0.0) {
            return Err(Error::InvalidBody("ball radius must be positive".into()));
        }
        Ok(Body {
            dim,
            kind: BodyKind::Ball,
            shape: Shape::Ball { center, radius },
            halfspaces: Vec::new(),
            vertices: Vec::new(),
        })
    }

    /// `center + mat . B_2^n` for a nonsingular matrix.
    pub fn ellipsoid(dim: usize, center: Vector, mat: Matrix) -> Result<Body> {
        check_dim(dim)?;
        let inv = mat.inverse()?;
        let det_abs = mat.det().abs();
        Ok(Body {
            dim,
            kind: BodyKind::Ellipsoid,
            shape: Shape::Ellipsoid { center, mat, inv, det_abs },
            halfspaces: Vec::new(),
            vertices: Vec::new(),
        })
    }

    /// The degenerate set `{0}`, used internally for level sets at `t = 0`.
    pub(crate) fn degenerate_point(dim: usize) -> Body {
        Body {
            dim,
            kind: BodyKind::Ball,
            shape: Shape::Ball { center: Vector::zero(dim), radius: 0.0 },
            halfspaces: Vec::new(),
            vertices: Vec::new(),
        }
    }

    // -- accessors ---------------------------------------------------------

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        match &self.shape {
            Shape::Ball { radius, .. } => *radius <= 0.0,
            _ => false,
        }
    }

    fn scale_ref(&self) -> f64 {
        match &self.shape {
            Shape::Polytope => {
                1.0 + self
                    .halfspaces
                    .iter()
                    .map(|h| h.offset.abs())
                    .fold(0.0, f64::max)
            }
            Shape::Ball { center, radius } => 1.0 + center.norm() + radius,
            Shape::Ellipsoid { center, mat, .. } => 1.0 + center.norm() + mat.det().abs(),
        }
    }

    /// Membership with a relative tolerance.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        let t = tol * self.scale_ref();
        match &self.shape {
            Shape::Polytope => self.halfspaces.iter().all(|h| h.contains(x, t)),
            Shape::Ball { center, radius } => x.dist(center) <= radius + t,
            Shape::Ellipsoid { center, inv, .. } => inv.mul_vec(&(*x - *center)).norm() <= 1.0 + t,
        }
    }

    /// Whether the origin lies in the interior.
    pub fn origin_interior(&self) -> bool {
        match &self.shape {
            Shape::Polytope => self.halfspaces.iter().all(|h| h.offset > EPS * self.scale_ref()),
            Shape::Ball { center, radius } => center.norm() < radius - EPS_CHORD,
            Shape::Ellipsoid { center, inv, .. } => inv.mul_vec(center).norm() < 1.0 - EPS_CHORD,
        }
    }

    /// Arithmetic mean of the vertices (an interior point for polytopes).
    pub fn vertex_centroid(&self) -> Vector {
        match &self.shape {
            Shape::Polytope => {
                let mut c = Vector::zero(self.dim);
                for v in &self.vertices {
                    c = c + *v;
                }
                c.scaled(1.0 / self.vertices.len() as f64)
            }
            Shape::Ball { center, .. } => *center,
            Shape::Ellipsoid { center, .. } => *center,
        }
    }

    // -- spec operations ---------------------------------------------------

    /// Minkowski functional `inf { l > 0 : x in l K }`, with the
    /// conventions `|0|_K = 0` and `+inf` when no multiple of `K`
    /// reaches `x`.
    pub fn minkowski_functional(&self, x: &Vector) -> f64 {
        if x.norm() < EPS_CHORD {
            return 0.0;
        }
        match &self.shape {
            Shape::Polytope => {
                let scale = self.scale_ref();
                let mut lower = 0.0_f64;
                let mut upper = f64::INFINITY;
                for h in &self.halfspaces {
                    let ax = h.normal.dot(x);
                    let b = h.offset;
                    if b > EPS * scale {
                        lower = lower.max(ax / b);
                    } else if b < -EPS * scale {
                        if ax > 0.0 {
                            return f64::INFINITY;
                        }
                        upper = upper.min(ax / b);
                    } else if ax > EPS * scale {
                        return f64::INFINITY;
                    }
                }
                if lower <= upper * (1.0 + 1e-12) + 1e-300 {
                    lower
                } else {
                    f64::INFINITY
                }
            }
            Shape::Ball { center, radius } => gauge_ball(x, center, *radius),
            Shape::Ellipsoid { center, inv, .. } => {
                gauge_ball(&inv.mul_vec(x), &inv.mul_vec(center), 1.0)
            }
        }
    }

    /// Radial function `sup { l >= 0 : l u in K }`; requires the origin in
    /// the interior.
    pub fn radial(&self, u: &Direction) -> Result<f64> {
        if !self.origin_interior() {
            return Err(Error::Domain("radial function needs the origin in the interior".into()));
        }
        let g = self.minkowski_functional(u.vector());
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Domain("radial function undefined".into()));
        }
        Ok(1.0 / g)
    }

    /// Support value `max { u . x : x in K }` for an arbitrary vector `u`.
    pub fn support_value(&self, u: &Vector) -> f64 {
        match &self.shape {
            Shape::Polytope => self
                .vertices
                .iter()
                .map(|v| v.dot(u))
                .fold(f64::NEG_INFINITY, f64::max),
            Shape::Ball { center, radius } => center.dot(u) + radius * u.norm(),
            Shape::Ellipsoid { center, mat, .. } => {
                center.dot(u) + mat.transpose().mul_vec(u).norm()
            }
        }
    }

    /// `[min u.x, max u.x]` over the body.
    pub fn extent(&self, u: &Vector) -> (f64, f64) {
        (-self.support_value(&-*u), self.support_value(u))
    }

    pub fn bounding_box(&self) -> Aabb {
        let mut lo = Vector::zero(self.dim);
        let mut hi = Vector::zero(self.dim);
        for i in 0..self.dim {
            let e = Vector::basis(self.dim, i);
            let (a, b) = self.extent(&e);
            lo[i] = a;
            hi[i] = b;
        }
        Aabb::new(lo, hi)
    }

    /// Lebesgue measure. Exact formulas per representation; degenerate
    /// internal bodies report 0.
    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => ball_volume(self.dim, *radius),
            Shape::Ellipsoid { det_abs, .. } => det_abs * ball_volume(self.dim, 1.0),
            Shape::Polytope => {
                if self.kind == BodyKind::Simplex {
                    simplex_volume(self.dim, &self.vertices)
                } else {
                    polytope_volume(self.dim, &self.halfspaces, &self.vertices)
                }
            }
        }
    }

    /// `(dim-1)`-measure of the orthogonal shadow on the hyperplane
    /// `u^perp`. In dimension 1 the shadow is a single point; by the
    /// counting-measure convention its measure is 1.
    pub fn project_volume(&self, u: &Direction) -> f64 {
        match self.dim {
            1 => 1.0,
            2 => {
                let w = u.vector().perp();
                match &self.shape {
                    Shape::Polytope => {
                        let (a, b) = self.extent(&w);
                        (b - a).max(0.0)
                    }
                    Shape::Ball { radius, .. } => 2.0 * radius,
                    Shape::Ellipsoid { mat, .. } => 2.0 * mat.transpose().mul_vec(&w).norm(),
                }
            }
            _ => match &self.shape {
                Shape::Ball { radius, .. } => std::f64::consts::PI * radius * radius,
                Shape::Ellipsoid { mat, det_abs, .. } => {
                    // shadow of A B^3 on u^perp has area pi |det A| |A^-T u|
                    let at_inv_u = mat
                        .inverse()
                        .expect("ellipsoid matrix is nonsingular")
                        .transpose()
                        .mul_vec(u.vector());
                    std::f64::consts::PI * det_abs * at_inv_u.norm()
                }
                Shape::Polytope => {
                    let n = u.vector();
                    let e = n.any_orthogonal();
                    let f = n.cross(&e);
                    let pts: Vec<Vector> = self
                        .vertices
                        .iter()
                        .map(|v| Vector::new2(v.dot(&e), v.dot(&f)))
                        .collect();
                    let hull = hull2d(pts);
                    shoelace(&hull)
                }
            },
        }
    }

    /// Length of `K` intersected with the full line `{ y + l u }`.
    pub fn chord_length(&self, y: &Vector, u: &Direction) -> f64 {
        match self.line_clip(y, u) {
            Some((lo, hi)) => {
                let len = hi - lo;
                if len < EPS_CHORD {
                    0.0
                } else {
                    len
                }
            }
            None => 0.0,
        }
    }

    /// Measure of `{ l >= 0 : x + l u in K }`.
    pub fn one_sided_chord(&self, x: &Vector, u: &Direction) -> f64 {
        match self.line_clip(x, u) {
            Some((lo, hi)) => {
                let len = hi - lo.max(0.0);
                if len < EPS_CHORD {
                    0.0
                } else {
                    len
                }
            }
            None => 0.0,
        }
    }

    /// Clips the parametric line `y + l u` against the body, returning the
    /// parameter interval (or None when the line misses).
    fn line_clip(&self, y: &Vector, u: &Direction) -> Option<(f64, f64)> {
        match &self.shape {
            Shape::Polytope => {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                let scale = self.scale_ref();
                for h in &self.halfspaces {
                    let au = h.normal.dot(u.vector());
                    let ay = h.normal.dot(y);
                    if au.abs() < EPS_CHORD {
                        if ay > h.offset + EPS * scale {
                            return None;
                        }
                    } else {
                        let t = (h.offset - ay) / au;
                        if au > 0.0 {
                            hi = hi.min(t);
                        } else {
                            lo = lo.max(t);
                        }
                    }
                    if lo > hi {
                        return None;
                    }
                }
                Some((lo, hi))
            }
            Shape::Ball { center, radius } => {
                if *radius <= 0.0 {
                    return None;
                }
                quad_clip(&(*y - *center), u.vector(), *radius)
            }
            Shape::Ellipsoid { center, inv, .. } => {
                let p = inv.mul_vec(&(*y - *center));
                let d = inv.mul_vec(u.vector());
                quad_clip_dir(&p, &d, 1.0)
            }
        }
    }

    /// Body covariogram `g_K(x) = |K cap (x + K)|`.
    ///
    /// Polytopes stack the two constraint systems and measure the
    /// intersection exactly; balls use the lens closed form; ellipsoids
    /// pull back to the unit ball (`g_{AK}(x) = |det A| g_K(A^{-1} x)`).
    pub fn covariogram_body(&self, x: &Vector) -> f64 {
        match &self.shape {
            Shape::Polytope => {
                let mut stacked: Vec<Halfspace> = Vec::with_capacity(2 * self.halfspaces.len());
                for h in &self.halfspaces {
                    stacked.push(*h);
                    stacked.push(Halfspace { normal: h.normal, offset: h.offset + h.normal.dot(x) });
                }
                let hs = dedup_halfspaces(stacked);
                let verts = enumerate_vertices(self.dim, &hs);
                polytope_volume(self.dim, &hs, &order_vertices(self.dim, verts))
            }
            Shape::Ball { radius, .. } => ball_lens_volume(self.dim, *radius, x.norm()),
            Shape::Ellipsoid { inv, det_abs, .. } => {
                det_abs * ball_lens_volume(self.dim, 1.0, inv.mul_vec(x).norm())
            }
        }
    }

    /// Image `M K + v`. Polytopes map vertices and halfspaces; balls stay
    /// balls under similarities and become ellipsoids otherwise.
    pub fn affine_map(&self, m: &Matrix, v: &Vector) -> Result<Body> {
        let det = m.det();
        if det.abs() < 1e-14 {
            return Err(Error::Domain("affine map requires a nonsingular matrix".into()));
        }
        match &self.shape {
            Shape::Polytope => {
                let verts: Vec<Vector> = self.vertices.iter().map(|p| m.mul_vec(p) + *v).collect();
                match self.kind {
                    BodyKind::Simplex => Body::simplex(self.dim, verts),
                    BodyKind::VPolytope => Body::vpolytope(self.dim, verts),
                    _ => {
                        // transform halfspaces: a . M^-1 (z - v) <= b
                        let minv_t = m.inverse()?.transpose();
                        let hs = self
                            .halfspaces
                            .iter()
                            .map(|h| {
                                let n = minv_t.mul_vec(&h.normal);
                                Halfspace::new(n, h.offset + n.dot(v))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Body::hpolytope(self.dim, hs)
                    }
                }
            }
            Shape::Ball { center, radius } => {
                let c = m.mul_vec(center) + *v;
                // similarity check: M^T M = s^2 I
                let mt_m = m.transpose().mul_mat(m);
                let s2 = mt_m.at(0, 0);
                let mut similar = s2 > 0.0;
                for r in 0..self.dim {
                    for cc in 0..self.dim {
                        let want = if r == cc { s2 } else { 0.0 };
                        if (mt_m.at(r, cc) - want).abs() > 1e-12 * s2.max(1.0) {
                            similar = false;
                        }
                    }
                }
                if similar {
                    Body::ball(self.dim, c, radius * s2.sqrt())
                } else {
                    Body::ellipsoid(self.dim, c, m.scaled(*radius))
                }
            }
            Shape::Ellipsoid { center, mat, .. } => {
                Body::ellipsoid(self.dim, m.mul_vec(center) + *v, m.mul_mat(mat))
            }
        }
    }

    /// Dilation `t K` about the origin, `t >= 0`. `t = 0` yields the
    /// degenerate set `{0}`.
    pub fn scale(&self, t: f64) -> Body {
        assert!(t >= 0.0, "scale factor must be nonnegative");
        if t == 0.0 {
            return Body::degenerate_point(self.dim);
        }
        let shape = match &self.shape {
            Shape::Polytope => Shape::Polytope,
            Shape::Ball { center, radius } => Shape::Ball { center: center.scaled(t), radius: radius * t },
            Shape::Ellipsoid { center, mat, inv, det_abs } => Shape::Ellipsoid {
                center: center.scaled(t),
                mat: mat.scaled(t),
                inv: inv.scaled(1.0 / t),
                det_abs: det_abs * t.powi(self.dim as i32),
            },
        };
        Body {
            dim: self.dim,
            kind: self.kind,
            shape,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace { normal: h.normal, offset: h.offset * t })
                .collect(),
            vertices: self.vertices.iter().map(|v| v.scaled(t)).collect(),
        }
    }

    /// Translate by `v`.
    pub fn translated(&self, v: &Vector) -> Body {
        self.affine_map(&Matrix::identity(self.dim), v)
            .expect("identity map cannot fail")
    }

    /// Volume of the body cut by one extra halfspace. Exact for polytopes
    /// (stacked constraints), closed-form caps for balls and ellipsoids.
    pub fn clipped_volume(&self, cut: &Halfspace) -> f64 {
        match &self.shape {
            Shape::Polytope => {
                let mut hs = self.halfspaces.clone();
                hs.push(*cut);
                let hs = dedup_halfspaces(hs);
                let verts = enumerate_vertices(self.dim, &hs);
                polytope_volume(self.dim, &hs, &order_vertices(self.dim, verts))
            }
            Shape::Ball { center, radius } => {
                // distance from center to the cut plane, signed toward the kept side
                let d = cut.offset - cut.normal.dot(center);
                ball_cap_volume(self.dim, *radius, d)
            }
            Shape::Ellipsoid { center, mat, det_abs, .. } => {
                // pull the cut back to the unit ball: a.(c + A y) <= b
                let n = mat.transpose().mul_vec(&cut.normal);
                let nn = n.norm();
                if nn < EPS_CHORD {
                    return 0.0;
                }
                let d = (cut.offset - cut.normal.dot(center)) / nn;
                det_abs * ball_cap_volume(self.dim, 1.0, d)
            }
        }
    }
}

/// Gauge of a ball `center + radius B` evaluated at `x` (possibly inf).
fn gauge_ball(x: &Vector, center: &Vector, radius: f64) -> f64 {
    if radius <= 0.0 {
        return f64::INFINITY;
    }
    let xc = x.dot(center);
    let c2 = center.norm_sq();
    let x2 = x.norm_sq();
    let r2 = radius * radius;
    if c2 < r2 {
        // origin interior: single positive root
        ((xc * xc + (r2 - c2) * x2).sqrt() - xc) / (r2 - c2)
    } else {
        let disc = xc * xc - (c2 - r2) * x2;
        if disc < 0.0 {
            return f64::INFINITY;
        }
        let lo = (xc - disc.sqrt()) / (c2 - r2);
        let hi = (xc + disc.sqrt()) / (c2 - r2);
        if hi <= 0.0 {
            f64::INFINITY
        } else {
            lo.max(0.0)
        }
    }
}

/// Clip `p + l u` (unit `u`) against the centered ball of radius `r`.
fn quad_clip(p: &Vector, u: &Vector, r: f64) -> Option<(f64, f64)> {
    // |p + l u|^2 = r^2 with |u| = 1
    let b = p.dot(u);
    let c = p.norm_sq() - r * r;
    let disc = b * b - c;
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some((-b - s, -b + s))
}

/// Same, for a non-unit direction `d` (parameter is still the ambient
/// line parameter, assuming the original direction was unit).
fn quad_clip_dir(p: &Vector, d: &Vector, r: f64) -> Option<(f64, f64)> {
    let a = d.norm_sq();
    if a < EPS_CHORD * EPS_CHORD {
        return None;
    }
    let b = p.dot(d);
    let c = p.norm_sq() - r * r;
    let disc = b * b - a * c;
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some(((-b - s) / a, (-b + s) / a))
}

/// Volume of the n-ball of radius `r`.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    match dim {
        1 => 2.0 * r,
        2 => std::f64::consts::PI * r * r,
        _ => 4.0 / 3.0 * std::f64::consts::PI * r * r * r,
    }
}

/// Volume of the unit ball.
pub fn unit_ball_volume(dim: usize) -> f64 {
    ball_volume(dim, 1.0)
}

/// Volume of the intersection of two balls of equal radius `r` at center
/// distance `d` (the "lens").
fn ball_lens_volume(dim: usize, r: f64, d: f64) -> f64 {
    if d >= 2.0 * r || r <= 0.0 {
        return 0.0;
    }
    match dim {
        1 => 2.0 * r - d,
        2 => {
            let h = d / (2.0 * r);
            2.0 * r * r * h.acos() - 0.5 * d * (4.0 * r * r - d * d).sqrt()
        }
        _ => std::f64::consts::PI * (4.0 * r + d) * (2.0 * r - d) * (2.0 * r - d) / 12.0,
    }
}

/// Volume of `{x in r B : dist(x, plane) on kept side}` where the kept
/// region is at signed distance `>= -d` ... concretely: volume of the ball
/// portion on the side `{n.x <= b}` when the plane is at signed distance
/// `d = b - n.c` from the center (unit normal).
fn ball_cap_volume(dim: usize, r: f64, d: f64) -> f64 {
    if d >= r {
        return ball_volume(dim, r);
    }
    if d <= -r {
        return 0.0;
    }
    match dim {
        1 => d + r,
        2 => {
            // kept area = full disk minus the circular segment beyond
            // signed distance d from the center
            let seg = r * r * (d / r).acos() - d * (r * r - d * d).sqrt();
            std::f64::consts::PI * r * r - seg
        }
        _ => {
            // spherical cap of height h = r - d (the cut-away side), kept = full - cap
            let h = r - d;
            let cap = std::f64::consts::PI * h * h * (3.0 * r - h) / 3.0;
            ball_volume(3, r) - cap
        }
    }
}

// ---------------------------------------------------------------------------
// Polytope internals
// ---------------------------------------------------------------------------

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("bodies live in dimension 1-3, got {dim}")))
    }
}

/// Deduplicate halfspaces with (near-)equal unit normals, keeping the
/// tightest offset.
fn dedup_halfspaces(hs: Vec<Halfspace>) -> Vec<Halfspace> {
    let mut out: Vec<Halfspace> = Vec::with_capacity(hs.len());
    'outer: for h in hs {
        for o in out.iter_mut() {
            if o.normal.dist(&h.normal) < 1e-9 {
                o.offset = o.offset.min(h.offset);
                continue 'outer;
            }
        }
        out.push(h);
    }
    out
}

fn dedup_points(pts: Vec<Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(pts.len());
    'outer: for p in pts {
        for o in &out {
            if o.dist(&p) < 1e-9 {
                continue 'outer;
            }
        }
        out.push(p);
    }
    out
}

fn feasible(dim: usize, hs: &[Halfspace], x: &Vector, tol: f64) -> bool {
    let _ = dim;
    hs.iter().all(|h| h.normal.dot(x) <= h.offset + tol)
}

/// All vertices of the intersection of the halfspaces (empty when the
/// intersection is empty or lower-dimensional).
fn enumerate_vertices(dim: usize, hs: &[Halfspace]) -> Vec<Vector> {
    let scale = 1.0 + hs.iter().map(|h| h.offset.abs()).fold(0.0, f64::max);
    let tol = EPS * scale;
    let mut verts: Vec<Vector> = Vec::new();
    match dim {
        1 => {
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for h in hs {
                let a = h.normal[0];
                if a > 0.0 {
                    hi = hi.min(h.offset / a);
                } else {
                    lo = lo.max(h.offset / a);
                }
            }
            if lo.is_finite() && hi.is_finite() && hi - lo > tol {
                verts.push(Vector::new1(lo));
                verts.push(Vector::new1(hi));
            }
        }
        2 => {
            for i in 0..hs.len() {
                for j in (i + 1)..hs.len() {
                    let (a, b) = (&hs[i], &hs[j]);
                    let det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let x = (a.offset * b.normal[1] - b.offset * a.normal[1]) / det;
                    let y = (a.normal[0] * b.offset - b.normal[0] * a.offset) / det;
                    let p = Vector::new2(x, y);
                    if feasible(dim, hs, &p, tol) {
                        verts.push(p);
                    }
                }
            }
        }
        _ => {
            let n = hs.len();
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        if let Some(p) = solve3(&hs[i], &hs[j], &hs[k]) {
                            if feasible(dim, hs, &p, tol) {
                                verts.push(p);
                            }
                        }
                    }
                }
            }
        }
    }
    dedup_close(verts, 1e-8 * scale)
}

fn dedup_close(pts: Vec<Vector>, tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(pts.len());
    'outer: for p in pts {
        for o in &out {
            if o.dist(&p) < tol {
                continue 'outer;
            }
        }
        out.push(p);
    }
    out
}

fn solve3(a: &Halfspace, b: &Halfspace, c: &Halfspace) -> Option<Vector> {
    let m = Matrix::from_rows(&[
        a.normal.coords().to_vec(),
        b.normal.coords().to_vec(),
        c.normal.coords().to_vec(),
    ])
    .ok()?;
    let det = m.det();
    if det.abs() < 1e-12 {
        return None;
    }
    let inv = m.inverse().ok()?;
    Some(inv.mul_vec(&Vector::new3(a.offset, b.offset, c.offset)))
}

/// Sort dimension-2 vertex sets counterclockwise (other dims: unchanged).
fn order_vertices(dim: usize, mut verts: Vec<Vector>) -> Vec<Vector> {
    match dim {
        1 => {
            verts.sort_by(|a, b| a[0].total_cmp(&b[0]));
            verts
        }
        2 if verts.len() >= 3 => {
            let mut c = Vector::zero(2);
            for v in &verts {
                c = c + *v;
            }
            c = c.scaled(1.0 / verts.len() as f64);
            verts.sort_by(|a, b| {
                let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
                let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
                ta.total_cmp(&tb)
            });
            verts
        }
        _ => verts,
    }
}

fn validate_polytope(dim: usize, hs: &[Halfspace], verts: &[Vector]) -> Result<()> {
    if verts.len() < dim + 1 {
        return Err(Error::InvalidBody(
            "halfspace intersection is empty or lower-dimensional".into(),
        ));
    }
    // boundedness: the outward normals must positively span the space,
    // i.e. max_i a_i . d > 0 for every direction d (sampled).
    let probes: Vec<Vector> = match dim {
        1 => vec![Vector::new1(1.0), Vector::new1(-1.0)],
        2 => (0..64)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 64.0 + 0.013;
                Vector::new2(t.cos(), t.sin())
            })
            .collect(),
        _ => {
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            (0..256)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / 256.0;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let th = std::f64::consts::TAU * (i as f64 / golden).fract();
                    Vector::new3(r * th.cos(), r * th.sin(), z)
                })
                .collect()
        }
    };
    for d in &probes {
        let best = hs.iter().map(|h| h.normal.dot(d)).fold(f64::NEG_INFINITY, f64::max);
        if best <= 1e-6 {
            return Err(Error::InvalidBody("halfspace intersection is unbounded".into()));
        }
    }
    // nonempty interior: vertex centroid strictly feasible
    let mut c = Vector::zero(dim);
    for v in verts {
        c = c + *v;
    }
    c = c.scaled(1.0 / verts.len() as f64);
    let scale = 1.0 + hs.iter().map(|h| h.offset.abs()).fold(0.0, f64::max);
    for h in hs {
        if h.normal.dot(&c) > h.offset - 1e-10 * scale && verts.len() <= dim {
            return Err(Error::InvalidBody("polytope has empty interior".into()));
        }
    }
    Ok(())
}

/// Facet-defining halfspaces of the convex hull of a point set.
fn hull_halfspaces(dim: usize, verts: &[Vector]) -> Result<Vec<Halfspace>> {
    let scale = 1.0 + verts.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = EPS * scale;
    match dim {
        1 => {
            let lo = verts.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
            let hi = verts.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
            if hi - lo < tol {
                return Err(Error::InvalidBody("degenerate interval".into()));
            }
            Ok(vec![
                Halfspace::new(Vector::new1(1.0), hi)?,
                Halfspace::new(Vector::new1(-1.0), -lo)?,
            ])
        }
        2 => {
            let hull = hull2d(verts.to_vec());
            if hull.len() < 3 {
                return Err(Error::InvalidBody("points do not span dimension 2".into()));
            }
            let mut hs = Vec::with_capacity(hull.len());
            for i in 0..hull.len() {
                let a = hull[i];
                let b = hull[(i + 1) % hull.len()];
                let edge = b - a;
                // hull2d returns CCW, so the outward normal is the
                // clockwise rotation of the edge
                let n = Vector::new2(edge[1], -edge[0]);
                hs.push(Halfspace::new(n, n.dot(&a))?);
            }
            Ok(dedup_halfspaces(hs))
        }
        _ => {
            if verts.len() < 4 {
                return Err(Error::InvalidBody("need at least 4 points in dimension 3".into()));
            }
            let mut hs: Vec<Halfspace> = Vec::new();
            let n = verts.len();
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        let nrm = (verts[j] - verts[i]).cross(&(verts[k] - verts[i]));
                        if nrm.norm() < 1e-10 * scale * scale {
                            continue;
                        }
                        let b = nrm.dot(&verts[i]);
                        let mx = verts.iter().map(|v| nrm.dot(v)).fold(f64::NEG_INFINITY, f64::max);
                        let mn = verts.iter().map(|v| nrm.dot(v)).fold(f64::INFINITY, f64::min);
                        let span = nrm.norm() * scale;
                        if mx <= b + EPS * span {
                            hs.push(Halfspace::new(nrm, b)?);
                        } else if mn >= b - EPS * span {
                            hs.push(Halfspace::new(-nrm, -b)?);
                        }
                    }
                }
            }
            let hs = dedup_halfspaces(hs);
            if hs.len() < 4 {
                return Err(Error::InvalidBody("points do not span dimension 3".into()));
            }
            Ok(hs)
        }
    }
}

/// Extreme points: points lying on at least `dim` facet planes.
fn extreme_points(dim: usize, verts: &[Vector], hs: &[Halfspace]) -> Vec<Vector> {
    let scale = 1.0 + verts.iter().map(|v| v.norm()).fold(0.0, f64::max);
    verts
        .iter()
        .filter(|v| {
            let tight = hs
                .iter()
                .filter(|h| (h.normal.dot(v) - h.offset).abs() < 1e-7 * scale)
                .count();
            tight >= dim
        })
        .copied()
        .collect()
}

/// Andrew's monotone chain; returns the hull CCW without repetition.
pub fn hull2d(mut pts: Vec<Vector>) -> Vec<Vector> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| a.dist(b) < 1e-12);
    let n = pts.len();
    if n < 3 {
        return pts;
    }
    let cross = |o: &Vector, a: &Vector, b: &Vector| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<Vector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 1e-14 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Vector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 1e-14 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a CCW polygon.
pub fn shoelace(verts: &[Vector]) -> f64 {
    if verts.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..verts.len() {
        let a = &verts[i];
        let b = &verts[(i + 1) % verts.len()];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * acc.abs()
}

fn simplex_volume(dim: usize, verts: &[Vector]) -> f64 {
    let rows: Vec<Vec<f64>> = (1..=dim)
        .map(|i| (verts[i] - verts[0]).coords().to_vec())
        .collect();
    let m = Matrix::from_rows(&rows).expect("simplex edge matrix");
    let fact = [1.0, 1.0, 2.0, 6.0][dim];
    m.det().abs() / fact
}

/// Measure of a polytope given halfspaces and (ordered, for dim 2)
/// vertices. Degenerate inputs report 0.
fn polytope_volume(dim: usize, hs: &[Halfspace], verts: &[Vector]) -> f64 {
    match dim {
        1 => {
            if verts.len() < 2 {
                0.0
            } else {
                (verts[verts.len() - 1][0] - verts[0][0]).max(0.0)
            }
        }
        2 => shoelace(verts),
        _ => {
            if verts.len() < 4 {
                return 0.0;
            }
            let scale = 1.0 + verts.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let mut c = Vector::zero(3);
            for v in verts {
                c = c + *v;
            }
            c = c.scaled(1.0 / verts.len() as f64);
            let mut total = 0.0;
            for h in hs {
                let facet: Vec<&Vector> = verts
                    .iter()
                    .filter(|v| (h.normal.dot(v) - h.offset).abs() < 1e-7 * scale)
                    .collect();
                if facet.len() < 3 {
                    continue;
                }
                // order facet vertices by angle in the facet plane
                let mut fc = Vector::zero(3);
                for v in &facet {
                    fc = fc + **v;
                }
                fc = fc.scaled(1.0 / facet.len() as f64);
                let e = h.normal.any_orthogonal();
                let f = h.normal.cross(&e);
                let mut ordered: Vec<Vector> = facet.iter().map(|v| **v).collect();
                ordered.sort_by(|a, b| {
                    let pa = (*a - fc).dot(&f).atan2((*a - fc).dot(&e));
                    let pb = (*b - fc).dot(&f).atan2((*b - fc).dot(&e));
                    pa.total_cmp(&pb)
                });
                for i in 0..ordered.len() {
                    let a = ordered[i];
                    let b = ordered[(i + 1) % ordered.len()];
                    total += ((a - c).cross(&(b - c))).dot(&(fc - c)).abs() / 6.0;
                }
            }
            total
        }
    }
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// Named preset bodies shared with the CLI.
pub fn preset(name: &str) -> Option<Body> {
    let b = match name {
        "square" => Body::hpolytope(
            2,
            vec![
                Halfspace::new(Vector::new2(1.0, 0.0), 1.0).unwrap(),
                Halfspace::new(Vector::new2(-1.0, 0.0), 1.0).unwrap(),
                Halfspace::new(Vector::new2(0.0, 1.0), 1.0).unwrap(),
                Halfspace::new(Vector::new2(0.0, -1.0), 1.0).unwrap(),
            ],
        ),
        "cube" => {
            let mut hs = Vec::new();
            for i in 0..3 {
                hs.push(Halfspace::new(Vector::basis(3, i), 1.0).unwrap());
                hs.push(Halfspace::new(-Vector::basis(3, i), 1.0).unwrap());
            }
            Body::hpolytope(3, hs)
        }
        "disk" => Body::ball(2, Vector::zero(2), 1.0),
        "ball3" => Body::ball(3, Vector::zero(3), 1.0),
        "simplex2" => Body::simplex(
            2,
            vec![
                Vector::new2(-0.25, -0.25),
                Vector::new2(0.75, -0.25),
                Vector::new2(-0.25, 0.75),
            ],
        ),
        "simplex3" => Body::simplex(
            3,
            vec![
                Vector::new3(-0.25, -0.25, -0.25),
                Vector::new3(0.75, -0.25, -0.25),
                Vector::new3(-0.25, 0.75, -0.25),
                Vector::new3(-0.25, -0.25, 0.75),
            ],
        ),
        "triangle" => Body::simplex(
            2,
            vec![Vector::new2(0.0, 0.0), Vector::new2(1.0, 0.0), Vector::new2(0.0, 1.0)],
        ),
        "interval" => Body::hpolytope(
            1,
            vec![
                Halfspace::new(Vector::new1(1.0), 1.0).unwrap(),
                Halfspace::new(Vector::new1(-1.0), 1.0).unwrap(),
            ],
        ),
        "interval01" => Body::hpolytope(
            1,
            vec![
                Halfspace::new(Vector::new1(1.0), 1.0).unwrap(),
                Halfspace::new(Vector::new1(-1.0), 0.0).unwrap(),
            ],
        ),
        _ => return None,
    };
    Some(b.expect("presets are valid by construction"))
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 9] = [
    "square",
    "cube",
    "disk",
    "ball3",
    "simplex2",
    "simplex3",
    "triangle",
    "interval",
    "interval01",
];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn square() -> Body {
        preset("square").unwrap()
    }

    fn triangle() -> Body {
        preset("triangle").unwrap()
    }

    #[test]
    fn minkowski_examples() {
        let k = square();
        assert_abs_diff_eq!(k.minkowski_functional(&Vector::new2(2.0, 0.0)), 2.0, epsilon = 1e-12);
        let ball = preset("disk").unwrap();
        assert_abs_diff_eq!(
            ball.minkowski_functional(&Vector::new2(0.3, -0.4)),
            0.5,
            epsilon = 1e-12
        );
        assert_eq!(k.minkowski_functional(&Vector::zero(2)), 0.0);
    }

    #[test]
    fn minkowski_shifted_triangle_vertex() {
        // triangle (0,0),(1,0),(0,1) shifted by (-1/4,-1/4); x = (3/4,-1/4)
        // is a vertex, so the gauge there is exactly 1
        let k = preset("simplex2").unwrap();
        let x = Vector::new2(0.75, -0.25);
        let g = k.minkowski_functional(&x);
        // oracle: bisection on membership of x / lambda . K
        let mut lo = 0.5;
        let mut hi = 2.0;
        for _ in 0..80 {
            let m = 0.5 * (lo + hi);
            if k.scale(m).contains(&x, 1e-14) {
                hi = m;
            } else {
                lo = m;
            }
        }
        assert_abs_diff_eq!(g, hi, epsilon = 1e-9);
        assert_abs_diff_eq!(g, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn radial_examples() {
        let ball = preset("disk").unwrap();
        let u = Direction::from_angle(1.234);
        assert_abs_diff_eq!(ball.radial(&u).unwrap(), 1.0, epsilon = 1e-12);

        let k = square();
        let diag = Direction::new(Vector::new2(1.0, 1.0)).unwrap();
        let r = k.radial(&diag).unwrap();
        // oracle: membership bisection along the diagonal
        let mut lo = 1.0;
        let mut hi = 2.0;
        for _ in 0..80 {
            let m = 0.5 * (lo + hi);
            if k.contains(&diag.vector().scaled(m), 1e-14) {
                lo = m;
            } else {
                hi = m;
            }
        }
        assert_abs_diff_eq!(r, lo, epsilon = 1e-9);
        assert_abs_diff_eq!(r, 2.0_f64.sqrt(), epsilon = 1e-9);

        let seg = Body::hpolytope(
            1,
            vec![
                Halfspace::new(Vector::new1(1.0), 2.0).unwrap(),
                Halfspace::new(Vector::new1(-1.0), 2.0).unwrap(),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(
            seg.radial(&Direction::new(Vector::new1(-1.0)).unwrap()).unwrap(),
            2.0,
            epsilon = 1e-12
        );

        // origin on the boundary: radial errors out
        let k01 = preset("interval01").unwrap();
        assert!(k01.radial(&Direction::new(Vector::new1(1.0)).unwrap()).is_err());
    }

    #[test]
    fn radial_gauge_duality() {
        // rho_K(u) u lies on the boundary, so its gauge is 1; equivalently
        // rho_K(u) |u|_K = 1
        let bodies = [square(), preset("simplex2").unwrap(), preset("disk").unwrap()];
        for k in &bodies {
            for i in 0..32 {
                let u = Direction::from_angle(0.1 + std::f64::consts::TAU * i as f64 / 32.0);
                let rho = k.radial(&u).unwrap();
                assert_abs_diff_eq!(
                    k.minkowski_functional(&u.vector().scaled(rho)),
                    1.0,
                    epsilon = 1e-9
                );
                assert_abs_diff_eq!(rho * k.minkowski_functional(u.vector()), 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn support_examples() {
        assert_abs_diff_eq!(square().support_value(&Vector::new2(1.0, 0.0)), 1.0, epsilon = 1e-12);
        let b = Body::ball(2, Vector::new2(1.0, 0.0), 2.0).unwrap();
        assert_abs_diff_eq!(b.support_value(&Vector::new2(1.0, 0.0)), 3.0, epsilon = 1e-12);
        let s = 1.0 / 2.0_f64.sqrt();
        assert_abs_diff_eq!(
            triangle().support_value(&Vector::new2(s, s)),
            s,
            epsilon = 1e-12
        );
    }

    #[test]
    fn volume_examples() {
        assert_abs_diff_eq!(square().volume(), 4.0, epsilon = 1e-12);
        assert_relative_eq!(
            preset("ball3").unwrap().volume(),
            4.0 * std::f64::consts::PI / 3.0,
            max_relative = 1e-12
        );
        assert_abs_diff_eq!(triangle().volume(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(preset("cube").unwrap().volume(), 8.0, epsilon = 1e-9);
        assert_abs_diff_eq!(preset("simplex3").unwrap().volume(), 1.0 / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn cube_as_vpolytope_matches() {
        let mut verts = Vec::new();
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    verts.push(Vector::new3(sx, sy, sz));
                }
            }
        }
        let cube = Body::vpolytope(3, verts).unwrap();
        assert_abs_diff_eq!(cube.volume(), 8.0, epsilon = 1e-9);
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(cube.halfspaces().len(), 6);
    }

    #[test]
    fn project_examples() {
        let u = Direction::from_angle(0.7);
        assert_abs_diff_eq!(preset("disk").unwrap().project_volume(&u), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            triangle().project_volume(&Direction::basis(2, 0)),
            1.0,
            epsilon = 1e-12
        );
        // square: shadow length 2(|sin| + |cos|), oracle by vertex projection
        let k = square();
        for i in 0..24 {
            let th = 0.05 + i as f64 * 0.26;
            let u = Direction::from_angle(th);
            let expect = 2.0 * (th.sin().abs() + th.cos().abs());
            let w = u.vector().perp();
            let oracle = k
                .vertices()
                .iter()
                .map(|v| v.dot(&w))
                .fold(f64::NEG_INFINITY, f64::max)
                - k.vertices().iter().map(|v| v.dot(&w)).fold(f64::INFINITY, f64::min);
            assert_abs_diff_eq!(k.project_volume(&u), expect, epsilon = 1e-12);
            assert_abs_diff_eq!(oracle, expect, epsilon = 1e-12);
        }
        // dimension 3: unit ball shadow is pi, cube shadow along e3 is 4
        assert_abs_diff_eq!(
            preset("ball3").unwrap().project_volume(&Direction::basis(3, 2)),
            std::f64::consts::PI,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            preset("cube").unwrap().project_volume(&Direction::basis(3, 2)),
            4.0,
            epsilon = 1e-9
        );
        // dimension 1 convention
        assert_abs_diff_eq!(
            preset("interval").unwrap().project_volume(&Direction::new(Vector::new1(1.0)).unwrap()),
            1.0,
            epsilon = 0.0
        );
    }

    #[test]
    fn chord_examples() {
        let k = square();
        let e1 = Direction::basis(2, 0);
        assert_abs_diff_eq!(k.chord_length(&Vector::new2(0.0, 0.5), &e1), 2.0, epsilon = 1e-12);
        let disk = preset("disk").unwrap();
        assert_abs_diff_eq!(
            disk.chord_length(&Vector::new2(0.0, 0.0), &Direction::from_angle(2.1)),
            2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            disk.chord_length(&Vector::new2(0.0, 0.6), &e1),
            1.6,
            epsilon = 1e-12
        );
        // missing line
        assert_eq!(k.chord_length(&Vector::new2(0.0, 2.0), &e1), 0.0);
    }

    #[test]
    fn one_sided_chord_examples() {
        let k = square();
        let e1 = Direction::basis(2, 0);
        assert_abs_diff_eq!(k.one_sided_chord(&Vector::new2(0.0, 0.0), &e1), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(k.one_sided_chord(&Vector::new2(-1.0, 0.0), &e1), 2.0, epsilon = 1e-12);
        let disk = preset("disk").unwrap();
        assert_abs_diff_eq!(
            disk.one_sided_chord(&Vector::new2(0.5, 0.0), &e1),
            0.5,
            epsilon = 1e-12
        );
        // ray starting outside and missing
        assert_eq!(k.one_sided_chord(&Vector::new2(2.0, 0.0), &e1), 0.0);
    }

    #[test]
    fn covariogram_examples() {
        let k01 = preset("interval01").unwrap();
        assert_abs_diff_eq!(k01.covariogram_body(&Vector::new1(0.5)), 0.5, epsilon = 1e-12);
        let unit_sq = Body::hpolytope(
            2,
            vec![
                Halfspace::new(Vector::new2(1.0, 0.0), 1.0).unwrap(),
                Halfspace::new(Vector::new2(-1.0, 0.0), 0.0).unwrap(),
                Halfspace::new(Vector::new2(0.0, 1.0), 1.0).unwrap(),
                Halfspace::new(Vector::new2(0.0, -1.0), 0.0).unwrap(),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(
            unit_sq.covariogram_body(&Vector::new2(0.5, 0.5)),
            0.25,
            epsilon = 1e-12
        );
        assert_eq!(square().covariogram_body(&Vector::new2(10.0, 0.0)), 0.0);
        assert_abs_diff_eq!(square().covariogram_body(&Vector::zero(2)), 4.0, epsilon = 1e-12);
        // ball lens, both dims
        let disk = preset("disk").unwrap();
        let g = disk.covariogram_body(&Vector::new2(1.0, 0.0));
        let expect = 2.0 * (0.5_f64).acos() - 0.5 * (3.0_f64).sqrt();
        assert_abs_diff_eq!(g, expect, epsilon = 1e-12);
        let b3 = preset("ball3").unwrap();
        assert_relative_eq!(
            b3.covariogram_body(&Vector::zero(3)),
            4.0 * std::f64::consts::PI / 3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn covariogram_is_even() {
        let k = preset("simplex2").unwrap();
        for (x, y) in [(0.3, 0.1), (-0.2, 0.4), (0.55, -0.3)] {
            let v = Vector::new2(x, y);
            assert_abs_diff_eq!(
                k.covariogram_body(&v),
                k.covariogram_body(&-v),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn affine_examples() {
        let k = square();
        let id = Matrix::identity(2);
        let same = k.affine_map(&id, &Vector::zero(2)).unwrap();
        assert_abs_diff_eq!(same.volume(), 4.0, epsilon = 1e-12);

        let double = k.affine_map(&Matrix::diagonal(&[2.0, 2.0]).unwrap(), &Vector::zero(2)).unwrap();
        assert_abs_diff_eq!(double.volume(), 16.0, epsilon = 1e-12);

        let shear = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let sheared = triangle().affine_map(&shear, &Vector::zero(2)).unwrap();
        assert_abs_diff_eq!(sheared.volume(), 0.5, epsilon = 1e-12);

        // singular map rejected
        let sing = Matrix::from_rows(&[vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!(k.affine_map(&sing, &Vector::zero(2)).is_err());

        // ball -> ellipse
        let disk = preset("disk").unwrap();
        let ell = disk
            .affine_map(&Matrix::diagonal(&[1.0, 3.0]).unwrap(), &Vector::zero(2))
            .unwrap();
        assert_eq!(ell.kind(), BodyKind::Ellipsoid);
        assert_relative_eq!(ell.volume(), 3.0 * std::f64::consts::PI, max_relative = 1e-12);
        // similarity keeps the ball representation
        let rot = Matrix::from_rows(&[vec![0.0, -2.0], vec![2.0, 0.0]]).unwrap();
        let big = disk.affine_map(&rot, &Vector::new2(1.0, 0.0)).unwrap();
        assert_eq!(big.kind(), BodyKind::Ball);
        assert_relative_eq!(big.volume(), 4.0 * std::f64::consts::PI, max_relative = 1e-12);
    }

    #[test]
    fn ellipse_operations() {
        let disk = preset("disk").unwrap();
        let m = Matrix::diagonal(&[1.0, 3.0]).unwrap();
        let e = disk.affine_map(&m, &Vector::zero(2)).unwrap();
        // projection extent along w = perp(u)
        let u = Direction::basis(2, 0);
        assert_abs_diff_eq!(e.project_volume(&u), 6.0, epsilon = 1e-12);
        let u2 = Direction::basis(2, 1);
        assert_abs_diff_eq!(e.project_volume(&u2), 2.0, epsilon = 1e-12);
        // gauge
        assert_abs_diff_eq!(e.minkowski_functional(&Vector::new2(0.0, 3.0)), 1.0, epsilon = 1e-12);
        // chord through the center along e2 has length 6
        assert_abs_diff_eq!(e.chord_length(&Vector::zero(2), &u2), 6.0, epsilon = 1e-12);
        // covariogram at 0 is the area
        assert_relative_eq!(
            e.covariogram_body(&Vector::zero(2)),
            3.0 * std::f64::consts::PI,
            max_relative = 1e-12
        );
    }

    #[test]
    fn translation_invariance_of_shadows_and_chords() {
        let k = triangle();
        let v = Vector::new2(0.37, -1.21);
        let kt = k.translated(&v);
        for i in 0..16 {
            let u = Direction::from_angle(0.2 + i as f64 * 0.39);
            assert_abs_diff_eq!(k.project_volume(&u), kt.project_volume(&u), epsilon = 1e-12);
            let y = Vector::new2(0.1, 0.2);
            assert_abs_diff_eq!(
                k.chord_length(&y, &u),
                kt.chord_length(&(y + v), &u),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn hpolytope_rejects_unbounded_and_empty() {
        // halfplane only: unbounded
        let r = Body::hpolytope(
            2,
            vec![
                Halfspace::new(Vector::new2(1.0, 0.0), 1.0).unwrap(),
                Halfspace::new(Vector::new2(0.0, 1.0), 1.0).unwrap(),
            ],
        );
        assert!(r.is_err());
        // empty intersection
        let r = Body::hpolytope(
            2,
            vec![
                Halfspace::new(Vector::new2(1.0, 0.0), -2.0).unwrap(),
                Halfspace::new(Vector::new2(-1.0, 0.0), -2.0).unwrap(),
                Halfspace::new(Vector::new2(0.0, 1.0), 1.0).unwrap(),
                Halfspace::new(Vector::new2(0.0, -1.0), 1.0).unwrap(),
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn clipped_volume_halves_the_square() {
        let k = square();
        let cut = Halfspace::new(Vector::new2(1.0, 0.0), 0.0).unwrap();
        assert_abs_diff_eq!(k.clipped_volume(&cut), 2.0, epsilon = 1e-12);
        let disk = preset("disk").unwrap();
        let cut0 = Halfspace::new(Vector::new2(0.0, 1.0), 0.0).unwrap();
        assert_relative_eq!(
            disk.clipped_volume(&cut0),
            std::f64::consts::PI / 2.0,
            max_relative = 1e-12
        );
        let b3 = preset("ball3").unwrap();
        let cut_half = Halfspace::new(Vector::new3(0.0, 0.0, 1.0), 0.5).unwrap();
        // kept volume = full - cap of height 1/2: cap = pi h^2 (3r - h)/3
        let cap = std::f64::consts::PI * 0.25 * (3.0 - 0.5) / 3.0;
        assert_relative_eq!(
            b3.clipped_volume(&cut_half),
            4.0 * std::f64::consts::PI / 3.0 - cap,
            max_relative = 1e-12
        );
    }

    #[test]
    fn scale_and_degenerate() {
        let k = square();
        let half = k.scale(0.5);
        assert_abs_diff_eq!(half.volume(), 1.0, epsilon = 1e-12);
        let point = k.scale(0.0);
        assert!(point.is_degenerate());
        assert_eq!(point.volume(), 0.0);
        assert_eq!(point.project_volume(&Direction::basis(2, 0)), 0.0);
        assert_eq!(point.chord_length(&Vector::new2(0.0, 0.0), &Direction::basis(2, 0)), 0.0);
    }

    #[test]
    fn preset_table_is_complete() {
        for name in PRESET_NAMES {
            assert!(preset(name).is_some(), "{name}");
        }
        assert!(preset("dodecahedron").is_none());
        // simplex presets contain the origin in the interior
        assert!(preset("simplex2").unwrap().origin_interior());
        assert!(preset("simplex3").unwrap().origin_interior());
    }
}
