//! Flat metrics of arbitrary signature and index gymnastics on momenta.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::jet::{linear_combination, Scalar};

const SYMMETRY_TOL: f64 = 1e-12;
const DET_FLOOR: f64 = 1e-12;
const INVERSE_TOL: f64 = 1e-12;

/// Names accepted by [`Metric::preset`].
pub const PRESETS: [&str; 4] = ["minkowski4", "lightcone2", "lightcone3", "offdiag5"];

/// A symmetric invertible metric `g_{μν}` together with its inverse `g^{μν}`.
///
/// Index 0 is the time-like slot; 1..n are the spatial slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    n: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Metric {
    /// Builds a metric from its covariant components.
    ///
    /// The input is symmetrized by `(g + gᵀ)/2`; an asymmetry above `1e-12`
    /// is rejected, as is `|det g| < 1e-12`.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if rows.iter().any(|row| row.len() != n) {
            return Err(Error::NotSquare { n });
        }
        let mut lower = vec![0.0; n * n];
        let mut asymmetry: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                asymmetry = asymmetry.max((rows[i][j] - rows[j][i]).abs());
                lower[i * n + j] = 0.5 * (rows[i][j] + rows[j][i]);
            }
        }
        if asymmetry > SYMMETRY_TOL || asymmetry.is_nan() {
            return Err(Error::Asymmetric(asymmetry));
        }

        let g = DMatrix::from_row_slice(n, n, &lower);
        let det = g.determinant();
        if !(det.abs() >= DET_FLOOR) {
            return Err(Error::NonInvertible(det.abs()));
        }
        let inv = g.clone().try_inverse().ok_or(Error::NonInvertible(det.abs()))?;
        let mut upper = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                upper[i * n + j] = 0.5 * (inv[(i, j)] + inv[(j, i)]);
            }
        }
        let metric = Metric { n, lower, upper };
        if metric.inverse_defect() > INVERSE_TOL {
            return Err(Error::NonInvertible(det.abs()));
        }
        Ok(metric)
    }

    /// `diag(1, -1, ..., -1)` in `n` dimensions.
    pub fn minkowski(n: usize) -> Result<Self> {
        Metric::new(&diag_minkowski(n))
    }

    /// The anti-diagonal light-cone block in slots (0, 1), with `-1` on the
    /// remaining diagonal. `g00 = 0`.
    pub fn lightcone(n: usize) -> Result<Self> {
        let mut rows = diag_minkowski(n);
        if n >= 2 {
            rows[0][0] = 0.0;
            rows[1][1] = 0.0;
            rows[0][1] = 1.0;
            rows[1][0] = 1.0;
        }
        Metric::new(&rows)
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "minkowski4" => Metric::minkowski(4),
            "lightcone2" => Metric::lightcone(2),
            "lightcone3" => Metric::lightcone(3),
            "offdiag5" => {
                let mut rows = diag_minkowski(5);
                rows[0][1] = 0.3;
                rows[1][0] = 0.3;
                Metric::new(&rows)
            }
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `g_{μν}`
    pub fn lower(&self, mu: usize, nu: usize) -> f64 {
        self.lower[mu * self.n + nu]
    }

    /// `g^{μν}`
    pub fn upper(&self, mu: usize, nu: usize) -> f64 {
        self.upper[mu * self.n + nu]
    }

    pub fn g00(&self) -> f64 {
        self.lower(0, 0)
    }

    /// Whether `g00 = 0` (within `1e-12`), the condition for the Weyl extension.
    pub fn is_null_time(&self) -> bool {
        self.g00().abs() <= SYMMETRY_TOL
    }

    pub fn lower_rows(&self) -> Vec<Vec<f64>> {
        self.lower.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn upper_rows(&self) -> Vec<Vec<f64>> {
        self.upper.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Max-entry deviation of `g^{..} g_{..}` from the identity.
    pub fn inverse_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| self.upper(i, k) * self.lower(k, j)).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - id).abs());
            }
        }
        worst
    }

    pub fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n, found })
        }
    }

    /// `p^μ = g^{μν} p_ν`
    pub fn raise<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|mu| linear_combination((0..self.n).map(|nu| self.upper(mu, nu)), p))
            .collect()
    }

    /// `p_μ = g_{μν} p^ν`
    pub fn lower_index<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|mu| linear_combination((0..self.n).map(|nu| self.lower(mu, nu)), p))
            .collect()
    }

    /// `g^{0s} p_s` over spatial `s`.
    pub fn time_space<S: Scalar>(&self, p: &[S]) -> S {
        linear_combination((1..self.n).map(|s| self.upper(0, s)), &p[1..])
    }

    /// `g^{rs} p_r p_s` over spatial `r, s`.
    pub fn spatial_form<S: Scalar>(&self, p: &[S]) -> S {
        let mut acc = p[0].zero_like();
        for r in 1..self.n {
            let row = linear_combination((1..self.n).map(|s| self.upper(r, s)), &p[1..]);
            acc = acc + row * p[r].clone();
        }
        acc
    }

    /// `g^{μν} p_μ p_ν`, generic over the scalar type.
    pub fn mass_squared<S: Scalar>(&self, p: &[S]) -> Result<S> {
        self.check_dim(p.len())?;
        let up = self.raise(p);
        let mut acc = p[0].zero_like();
        for (a, b) in p.iter().zip(up) {
            acc = acc + a.clone() * b;
        }
        Ok(acc)
    }
}

fn diag_minkowski(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == j, i) {
                    (false, _) => 0.0,
                    (true, 0) => 1.0,
                    (true, _) => -1.0,
                })
                .collect()
        })
        .collect()
}

/// The classical mass-squared Casimir `M² = g^{μν} P_μ P_ν`.
pub fn mass_squared(metric: &Metric, p: &[f64]) -> Result<f64> {
    metric.mass_squared(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minkowski_is_self_inverse() {
        let m = Metric::minkowski(4).unwrap();
        assert_eq!(m.lower_rows(), m.upper_rows());
        assert_eq!(m.g00(), 1.0);
    }

    #[test]
    fn lightcone_inverse() {
        let m = Metric::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(m.upper_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(m.is_null_time());
        assert_eq!(m, Metric::preset("lightcone2").unwrap());
    }

    #[test]
    fn singular_rejected() {
        let err = Metric::new(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NonInvertible(_)));
    }

    #[test]
    fn shape_errors() {
        assert_eq!(Metric::new(&[vec![1.0]]).unwrap_err(), Error::DimensionTooSmall(1));
        assert_eq!(
            Metric::new(&[vec![1.0, 0.0], vec![0.0]]).unwrap_err(),
            Error::NotSquare { n: 2 }
        );
        assert!(matches!(
            Metric::new(&[vec![1.0, 0.2], vec![0.0, -1.0]]).unwrap_err(),
            Error::Asymmetric(_)
        ));
        assert!(matches!(Metric::preset("euclid7"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let m = Metric::new(&[vec![1.0, 0.3], vec![0.3 + 1e-14, -1.0]]).unwrap();
        assert_eq!(m.lower(0, 1), m.lower(1, 0));
    }

    #[test]
    fn offdiag_preset() {
        let m = Metric::preset("offdiag5").unwrap();
        assert_eq!(m.dim(), 5);
        assert_eq!(m.lower(0, 1), 0.3);
        assert!(m.upper(0, 1) != 0.0);
        assert!(m.inverse_defect() < 1e-12);
    }

    #[test]
    fn mass_squared_examples() {
        let mink = Metric::minkowski(4).unwrap();
        let m2 = mass_squared(&mink, &[1.0, 0.6, 0.0, 0.0]).unwrap();
        assert!((m2 - 0.64).abs() < 1e-15);
        assert_eq!(mass_squared(&mink, &[0.0; 4]).unwrap(), 0.0);
        let lc = Metric::preset("lightcone2").unwrap();
        assert_eq!(mass_squared(&lc, &[1.0, 0.5]).unwrap(), 1.0);
        assert!(matches!(
            mass_squared(&lc, &[1.0, 0.5, 0.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn raise_then_lower() {
        for name in PRESETS {
            let m = Metric::preset(name).unwrap();
            let p: Vec<f64> = (0..m.dim()).map(|i| 0.7 - 0.31 * i as f64).collect();
            let back = m.lower_index(&m.raise(&p));
            for (a, b) in p.iter().zip(&back) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
