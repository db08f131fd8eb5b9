//! Truncated power series.
//!
//! A series of order `N` stores coefficients of `z^0..=z^N`. Binary
//! operations return the smaller of the two orders; nothing is ever
//! silently extended past what the inputs determine.

use crate::error::{Error, Result};
use crate::scalar::Coeff;

#[derive(Debug, Clone)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> TruncatedSeries<T> {
    /// Series from coefficients `c[0], c[1], ...`. Empty input gives the zero
    /// series of order 0.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = T::one();
        s
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    /// The series `z` of given order.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^n`; zero past the order.
    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Lowers the order. Raising it is an error.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderExceeded {
                requested: order,
                available: self.order(),
            });
        }
        Ok(TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    /// Pads with zeros, treating the series as a polynomial.
    pub fn pad_polynomial(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(self.order()) + 1, T::zero());
        TruncatedSeries { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Multiplies by `z`, raising the order by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }

    /// `1/f` for `f(0) != 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::InvalidParameter(
                "reciprocal of a series with zero constant term".into(),
            ));
        }
        let inv0 = T::one() / c0;
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `f(g(z))` for `g(0) = 0`. The result order is `min(f, g)`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let n = self.order().min(g.order());
        Ok(horner(&self.coeffs[..=n], &g.truncate(n)?))
    }

    /// `f(g(z))` where `f` is a polynomial, so `g(0)` may be nonzero. The
    /// result has the order of `g`.
    pub fn compose_polynomial(&self, g: &Self) -> Self {
        horner(&self.coeffs, g)
    }

    /// Coefficientwise comparison up to the common order, using
    /// [`Coeff::close_to`].
    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        let n = self.order().min(other.order());
        (0..=n).all(|k| self.coeffs[k].close_to(&other.coeffs[k], tol))
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries<U> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

fn horner<T: Coeff>(f: &[T], g: &TruncatedSeries<T>) -> TruncatedSeries<T> {
    let n = g.order();
    let mut acc = TruncatedSeries::<T>::zero(n);
    for c in f.iter().rev() {
        acc = acc.mul(g);
        acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
    }
    acc
}

/// Equality is coefficientwise up to the common order.
impl<T: PartialEq> PartialEq for TruncatedSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().min(other.coeffs.len()) - 1;
        self.coeffs[..=n] == other.coeffs[..=n]
    }
}

/// Coefficients `b_0..=b_order` of the multiplicative inverse `B` of
/// `C(z) = 1/z + R(z)`, where `B(z) = sum b_n z^(n+1)`.
///
/// Needs `order <= R.order() + 1`.
pub fn mult_inverse_c<T: Coeff>(
    r: &TruncatedSeries<T>,
    order: usize,
) -> Result<TruncatedSeries<T>> {
    if order > r.order() + 1 {
        return Err(Error::OrderExceeded {
            requested: order,
            available: r.order() + 1,
        });
    }
    // 1 + z R(z), whose reciprocal is B(z)/z
    r.shift_up().truncate(order)?.add_one().reciprocal()
}

/// Inverse of [`mult_inverse_c`]: recovers `R` (order `N-1`) from `b_0..=b_N`.
pub fn r_from_inverse<T: Coeff>(b: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
    if b.coeff(0) != T::one() {
        return Err(Error::LeadingCoefficient);
    }
    if b.order() == 0 {
        return Err(Error::OrderOutOfRange {
            got: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let c = b.reciprocal()?;
    Ok(TruncatedSeries::new(c.coeffs[1..].to_vec()))
}

/// Free cumulants from moments: `M(0..=N)` gives `R` of order `N-1` with
/// `R(z) = sum r(n) z^(n-1)`.
///
/// Solves `M(z) = 1 + sum_n r(n) (z M(z))^n` one coefficient at a time.
pub fn r_from_moments<T: Coeff>(moments: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
    if moments.coeff(0) != T::one() {
        return Err(Error::NotNormalized);
    }
    let n = moments.order();
    if n == 0 {
        return Err(Error::OrderOutOfRange {
            got: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let h = moments.shift_up().truncate(n)?;
    // powers[k] = h^k
    let mut powers = vec![TruncatedSeries::<T>::one(n), h.clone()];
    for k in 2..n {
        let next = powers[k - 1].mul(&h);
        powers.push(next);
    }
    let mut r: Vec<T> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut acc = moments.coeff(m);
        for (k, rk) in r.iter().enumerate() {
            acc = acc - rk.clone() * powers[k + 1].coeff(m);
        }
        r.push(acc);
    }
    Ok(TruncatedSeries::new(r))
}

/// Moments `M(0..=order)` from `R` by iterating `M = 1 + zM R(zM)`.
///
/// Needs `order <= R.order() + 1`.
pub fn moments_from_r<T: Coeff>(
    r: &TruncatedSeries<T>,
    order: usize,
) -> Result<TruncatedSeries<T>> {
    if order > r.order() + 1 {
        return Err(Error::OrderExceeded {
            requested: order,
            available: r.order() + 1,
        });
    }
    // C(w) = 1 + w R(w)
    let c = r.shift_up().truncate(order)?.add_one();
    let mut m = TruncatedSeries::<T>::one(order);
    for _ in 0..order {
        let g = m.shift_up().truncate(order)?;
        m = c.compose(&g)?;
    }
    Ok(m)
}

impl<T: Coeff> TruncatedSeries<T> {
    fn add_one(mut self) -> Self {
        self.coeffs[0] = self.coeffs[0].clone() + T::one();
        self
    }
}
