//! Second-order truncated jets and the [`Scalar`] abstraction.
//!
//! A [`Jet`] carries a value together with its gradient and Hessian with
//! respect to the `n` momentum components at a fixed base point. Arithmetic on
//! jets applies the Leibniz and chain rules truncated at order two, so any
//! function written against [`Scalar`] can be evaluated either on plain `f64`
//! or on jets to obtain exact first and second partials.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Numbers that the realization and deformation formulas can be evaluated on.
pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn value(&self) -> f64;

    /// A constant with the same shape as `self`.
    fn constant_like(&self, c: f64) -> Self;

    fn exp(&self) -> Self;
    fn sinh(&self) -> Self;

    /// Natural logarithm, failing for non-positive arguments.
    fn try_ln(&self) -> Result<Self>;

    /// Square root, failing outside the region where it is differentiable to
    /// the carried order.
    fn try_sqrt(&self) -> Result<Self>;

    fn zero_like(&self) -> Self {
        self.constant_like(0.0)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }

    fn constant_like(&self, c: f64) -> Self {
        c
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }

    fn try_ln(&self) -> Result<Self> {
        if *self > 0.0 {
            Ok(self.ln())
        } else {
            Err(Error::Domain { op: "ln", arg: *self })
        }
    }

    fn try_sqrt(&self) -> Result<Self> {
        if *self >= 0.0 {
            Ok(self.sqrt())
        } else {
            Err(Error::Domain { op: "sqrt", arg: *self })
        }
    }
}

// value, gradient, then the upper Hessian triangle row by row.
type Buf = SmallVec<[f64; 28]>;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    n: usize,
    data: Buf,
}

fn tri_len(n: usize) -> usize {
    n * (n + 1) / 2
}

fn tri_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i.saturating_sub(1)) / 2 - i + j
}

impl Jet {
    pub fn constant(n: usize, c: f64) -> Self {
        let mut data = Buf::from_elem(0.0, 1 + n + tri_len(n));
        data[0] = c;
        Jet { n, data }
    }

    /// The coordinate function `p_index`, valued `x` at the base point.
    pub fn variable(n: usize, index: usize, x: f64) -> Self {
        assert!(index < n, "variable index {index} out of range for n = {n}");
        let mut jet = Jet::constant(n, x);
        jet.data[1 + index] = 1.0;
        jet
    }

    /// Seeds one jet per coordinate of `base`.
    pub fn variables(base: &[f64]) -> Vec<Jet> {
        let n = base.len();
        base.iter()
            .enumerate()
            .map(|(i, &x)| Jet::variable(n, i, x))
            .collect()
    }

    /// Builds a jet from explicit parts. `hess` is symmetrized.
    pub fn from_parts(value: f64, grad: &[f64], hess: &[Vec<f64>]) -> Self {
        let n = grad.len();
        assert_eq!(hess.len(), n, "hessian must be {n}x{n}");
        let mut jet = Jet::constant(n, value);
        jet.data[1..=n].copy_from_slice(grad);
        for i in 0..n {
            assert_eq!(hess[i].len(), n, "hessian must be {n}x{n}");
            for j in i..n {
                jet.data[1 + n + tri_index(n, i, j)] = 0.5 * (hess[i][j] + hess[j][i]);
            }
        }
        jet
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn grad(&self, i: usize) -> f64 {
        self.data[1 + i]
    }

    pub fn gradient(&self) -> &[f64] {
        &self.data[1..=self.n]
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.data[1 + self.n + tri_index(self.n, i, j)]
    }

    pub fn hessian(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.hess(i, j)).collect())
            .collect()
    }

    /// `∂_index` of this jet, reduced to order one: the result's value and
    /// gradient are exact, its Hessian is zero.
    pub fn derivative(&self, index: usize) -> Jet {
        let n = self.n;
        let mut out = Jet::constant(n, self.grad(index));
        for j in 0..n {
            out.data[1 + j] = self.hess(index, j);
        }
        out
    }

    /// Applies a scalar function given its value and first two derivatives at
    /// `self.value()`.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet {
        let n = self.n;
        let mut out = Jet::constant(n, f0);
        for i in 0..n {
            out.data[1 + i] = f1 * self.grad(i);
        }
        for i in 0..n {
            for j in i..n {
                let k = 1 + n + tri_index(n, i, j);
                out.data[k] = f1 * self.data[k] + f2 * self.grad(i) * self.grad(j);
            }
        }
        out
    }

    pub fn recip(&self) -> Jet {
        let v = self.value();
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    fn check_shape(&self, other: &Jet) {
        assert_eq!(self.n, other.n, "jets over different dimensions");
    }
}

impl Scalar for Jet {
    fn value(&self) -> f64 {
        self.data[0]
    }

    fn constant_like(&self, c: f64) -> Self {
        Jet::constant(self.n, c)
    }

    fn exp(&self) -> Self {
        let e = self.value().exp();
        self.chain(e, e, e)
    }

    fn sinh(&self) -> Self {
        let v = self.value();
        self.chain(v.sinh(), v.cosh(), v.sinh())
    }

    fn try_ln(&self) -> Result<Self> {
        let v = self.value();
        if v > 0.0 {
            Ok(self.chain(v.ln(), 1.0 / v, -1.0 / (v * v)))
        } else {
            Err(Error::Domain { op: "ln", arg: v })
        }
    }

    fn try_sqrt(&self) -> Result<Self> {
        let v = self.value();
        if v > 0.0 {
            let s = v.sqrt();
            Ok(self.chain(s, 0.5 / s, -0.25 / (s * v)))
        } else {
            Err(Error::Domain { op: "sqrt", arg: v })
        }
    }
}

impl Add for Jet {
    type Output = Jet;

    fn add(mut self, rhs: Jet) -> Jet {
        self.check_shape(&rhs);
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;

    fn sub(mut self, rhs: Jet) -> Jet {
        self.check_shape(&rhs);
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;

    fn mul(self, rhs: Jet) -> Jet {
        self.check_shape(&rhs);
        let n = self.n;
        let (a, b) = (self.value(), rhs.value());
        let mut out = Jet::constant(n, a * b);
        for i in 0..n {
            out.data[1 + i] = a * rhs.grad(i) + b * self.grad(i);
        }
        for i in 0..n {
            for j in i..n {
                let k = 1 + n + tri_index(n, i, j);
                out.data[k] = a * rhs.data[k]
                    + b * self.data[k]
                    + self.grad(i) * rhs.grad(j)
                    + rhs.grad(i) * self.grad(j);
            }
        }
        out
    }
}

impl Div for Jet {
    type Output = Jet;

    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;

    fn neg(mut self) -> Jet {
        for a in self.data.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;

    fn add(mut self, rhs: f64) -> Jet {
        self.data[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;

    fn sub(mut self, rhs: f64) -> Jet {
        self.data[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;

    fn mul(mut self, rhs: f64) -> Jet {
        for a in self.data.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;

    fn div(self, rhs: f64) -> Jet {
        self * (1.0 / rhs)
    }
}

/// Evaluates `f` on coordinate jets seeded at `base`.
pub fn jet_eval<F>(f: F, base: &[f64]) -> Result<Jet>
where
    F: FnOnce(&[Jet]) -> Result<Jet>,
{
    f(&Jet::variables(base))
}

/// Jacobian of a momentum-space map at `base`; entry `[r][s]` is
/// `∂ out_r / ∂ in_s`.
pub fn jacobian<F>(map: F, base: &[f64]) -> Result<Vec<Vec<f64>>>
where
    F: FnOnce(&[Jet]) -> Result<Vec<Jet>>,
{
    let out = map(&Jet::variables(base))?;
    Ok(out.iter().map(|jet| jet.gradient().to_vec()).collect())
}

/// `Σ coeffs[i] * xs[i]`, skipping zero coefficients.
pub(crate) fn linear_combination<S: Scalar>(coeffs: impl IntoIterator<Item = f64>, xs: &[S]) -> S {
    let mut acc = xs[0].zero_like();
    for (c, x) in coeffs.into_iter().zip(xs) {
        if c != 0.0 {
            acc = acc + x.clone() * c;
        }
    }
    acc
}
