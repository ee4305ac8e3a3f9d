use nalgebra::{DMatrix, Point2, Vector2};

/// An oriented straight edge from `start` to `end`. The edge coordinate is
/// `ξ = s / h_e`, `s` the arc length from the midpoint towards `end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeFrame {
    pub start: Point2<f64>,
    pub end: Point2<f64>,
}

impl EdgeFrame {
    pub fn new(start: Point2<f64>, end: Point2<f64>) -> Self {
        Self { start, end }
    }

    pub fn midpoint(&self) -> Point2<f64> {
        nalgebra::center(&self.start, &self.end)
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }

    pub fn tangent(&self) -> Vector2<f64> {
        (self.end - self.start) / self.length()
    }

    /// Tangent rotated by −90°; outward for a counterclockwise traversal.
    pub fn normal(&self) -> Vector2<f64> {
        let t = self.tangent();
        Vector2::new(t.y, -t.x)
    }

    pub fn point_at(&self, xi: f64) -> Point2<f64> {
        self.midpoint() + (self.end - self.start) * xi
    }
}

/// The set `M_i^e` of scaled monomials `(s / h_e)^j`, `j = 0..=i`.
#[derive(Clone, Copy, Debug)]
pub struct EdgeMonomialBasis {
    pub frame: EdgeFrame,
    pub degree: usize,
}

impl EdgeMonomialBasis {
    pub fn new(frame: EdgeFrame, degree: usize) -> Self {
        Self { frame, degree }
    }

    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Rows are points given by arc length from the midpoint.
    pub fn eval(&self, arc: &[f64]) -> DMatrix<f64> {
        let h = self.frame.length();
        DMatrix::from_fn(arc.len(), self.len(), |i, j| (arc[i] / h).powi(j as i32))
    }
}

/// `∫_{-1/2}^{1/2} ξ^p dξ`.
pub fn edge_monomial_integral(p: usize) -> f64 {
    if p % 2 == 1 {
        0.0
    } else {
        2.0 * 0.5f64.powi(p as i32 + 1) / (p as f64 + 1.0)
    }
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// A polynomial in the edge coordinate `ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgePoly {
    coeffs: Vec<f64>,
}

impl EdgePoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![0.0; degree + 1])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, xi: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * xi + c)
    }

    /// `d/dξ`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| j as f64 * c)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(poly_mul(&self.coeffs, &other.coeffs))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Self::new(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `∫_{-1/2}^{1/2} p(ξ) dξ`; multiply by `h_e` for the arc-length integral.
    pub fn integrate(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * edge_monomial_integral(j))
            .sum()
    }
}
