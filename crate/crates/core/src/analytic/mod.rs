//! Subordination recursions on moment series.
//!
//! Everything is expressed through moment series `M(w) = sum M(n) w^n`, with
//! `G(z) = w M(w)` at `w = 1/z`. The relation `G = 1/(z - K)` becomes
//! `M = 1/(1 - w K)`, and `R(G(z))` becomes `R(w M(w))`.

mod density;

use std::fmt;
use std::str::FromStr;

pub use density::{stieltjes_density, Atom, DensityGrid, MeixnerArray};

use crate::cells::{other, Cell, Shape};
use crate::error::{Error, Result};
use crate::moments::DistributionArray;
use crate::scalar::Coeff;
use crate::series::{moments_from_r, TruncatedSeries};

/// A law given by name or by its free cumulants.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedLaw<T> {
    /// Centered semicircle of variance `a`: `R(z) = a z`.
    Semicircle(T),
    /// Dirac mass at `b`: `R(z) = b`.
    PointMass(T),
    /// Free cumulants `r(1), r(2), ...`.
    Cumulants(Vec<T>),
}

impl<T: Coeff> NamedLaw<T> {
    pub fn cumulants(&self) -> Vec<T> {
        match self {
            NamedLaw::Semicircle(a) => vec![T::zero(), a.clone()],
            NamedLaw::PointMass(b) => vec![b.clone()],
            NamedLaw::Cumulants(r) => r.clone(),
        }
    }
}

/// Moment series of the subordinate laws `G*_{i,j}`, one per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Subordination<T> {
    star: [TruncatedSeries<T>; 4],
    k: [TruncatedSeries<T>; 4],
}

impl<T: Coeff> Subordination<T> {
    /// Moments of `G*_{i,j}`.
    pub fn star(&self, cell: Cell) -> &TruncatedSeries<T> {
        &self.star[cell.index()]
    }

    /// `K_{i,j}(w) = R_{i,j}(w M*_{i,j}(w))`.
    pub fn k(&self, cell: Cell) -> &TruncatedSeries<T> {
        &self.k[cell.index()]
    }
}

// Blocks directly inside a block labelled (i,j) are labelled (i,j) or (ibar,i).
fn partner(cell: Cell) -> Cell {
    Cell::new(other(cell.row), cell.row)
}

/// Solves `G*_x = 1/(z - K_x - K_y)` with `y` the partner of `x`, for all
/// four cells at once (cells outside the shape have `R = 0`).
pub fn solve_subordination<T: Coeff>(
    array: &DistributionArray<T>,
    order: usize,
) -> Result<Subordination<T>> {
    let r: [TruncatedSeries<T>; 4] = std::array::from_fn(|k| array.r_series(Cell::ALL[k], order));
    let mut star: [TruncatedSeries<T>; 4] = std::array::from_fn(|_| TruncatedSeries::one(order));
    let mut k: [TruncatedSeries<T>; 4] = std::array::from_fn(|_| TruncatedSeries::zero(order));
    // every pass fixes one more coefficient
    for _ in 0..=order {
        for c in 0..4 {
            let g = star[c].shift_up().truncate(order)?;
            k[c] = r[c].compose(&g)?;
        }
        star = std::array::from_fn(|c| {
            let cell = Cell::ALL[c];
            let sum = k[c].add(&k[partner(cell).index()]);
            geometric(&sum, order)
        });
    }
    Ok(Subordination { star, k })
}

// 1/(1 - w s(w))
fn geometric<T: Coeff>(s: &TruncatedSeries<T>, order: usize) -> TruncatedSeries<T> {
    let d = TruncatedSeries::one(order).sub(&s.shift_up().truncate(order).expect("order"));
    d.reciprocal().expect("constant term is one")
}

/// Moments `M(0..=order)` of the sum: `G = 1/(z - sum_j K_{j,j})`.
pub fn master_cauchy<T: Coeff>(
    array: &DistributionArray<T>,
    order: usize,
) -> Result<TruncatedSeries<T>> {
    let sub = solve_subordination(array, order)?;
    let k = sub.k(Cell::new(1, 1)).add(sub.k(Cell::new(2, 2)));
    Ok(geometric(&k, order))
}

/// The five binary convolutions reachable by shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvolutionKind {
    Free,
    Monotone,
    Boolean,
    SFree,
    Orthogonal,
}

impl ConvolutionKind {
    pub const ALL: [ConvolutionKind; 5] = [
        ConvolutionKind::Free,
        ConvolutionKind::Monotone,
        ConvolutionKind::Boolean,
        ConvolutionKind::SFree,
        ConvolutionKind::Orthogonal,
    ];

    pub fn shape(self) -> Shape {
        match self {
            ConvolutionKind::Free => Shape::square(),
            ConvolutionKind::Monotone => Shape::lower_triangular(),
            ConvolutionKind::Boolean => Shape::diagonal(),
            ConvolutionKind::SFree => Shape::upper_anti_triangular(),
            ConvolutionKind::Orthogonal => Shape::column(),
        }
    }
}

impl fmt::Display for ConvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvolutionKind::Free => "free",
            ConvolutionKind::Monotone => "monotone",
            ConvolutionKind::Boolean => "boolean",
            ConvolutionKind::SFree => "s_free",
            ConvolutionKind::Orthogonal => "orthogonal",
        })
    }
}

impl FromStr for ConvolutionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConvolutionKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Moments of a binary convolution together with the outcome of its
/// closed-form cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct Convolution<T> {
    pub kind: ConvolutionKind,
    pub moments: TruncatedSeries<T>,
    pub closed_form_holds: bool,
}

/// The row-identical array of a kind: row `i` carries law `i`.
pub fn convolution_array<T: Coeff>(
    kind: ConvolutionKind,
    mu1: &[T],
    mu2: &[T],
) -> Result<DistributionArray<T>> {
    DistributionArray::row_identical(kind.shape(), mu1, mu2)
}

/// Builds the array of a kind and returns its master moments, checked
/// against the closed-form equation of the kind.
pub fn binary_convolution<T: Coeff>(
    kind: ConvolutionKind,
    mu1: &[T],
    mu2: &[T],
    order: usize,
) -> Result<Convolution<T>> {
    let array = convolution_array(kind, mu1, mu2)?;
    let moments = master_cauchy(&array, order)?;
    let rhs = closed_form(kind, mu1, mu2, &moments, order)?;
    Ok(Convolution {
        kind,
        closed_form_holds: moments.close_to(&rhs, 1e-9),
        moments,
    })
}

fn r_of<T: Coeff>(mu: &[T], order: usize) -> TruncatedSeries<T> {
    TruncatedSeries::new(mu.to_vec())
        .pad_polynomial(order)
        .truncate(order)
        .expect("padded")
}

// R(w M(w))
fn r_at<T: Coeff>(mu: &[T], m: &TruncatedSeries<T>, order: usize) -> Result<TruncatedSeries<T>> {
    r_of(mu, order).compose(&m.shift_up().truncate(order)?)
}

/// Moments of a single law from its cumulants.
pub fn law_moments<T: Coeff>(mu: &[T], order: usize) -> Result<TruncatedSeries<T>> {
    moments_from_r(&r_of(mu, order), order)
}

/// Right-hand side of the closed-form equation of a kind, evaluated with
/// the candidate moments `m`:
///
/// * free: `G = 1/(z - R1(G) - R2(G))`
/// * monotone: `G = 1/(z - R1(G) - R2(G2))`
/// * boolean: `G = 1/(z - R1(G1) - R2(G2))`
/// * s-free: `G = 1/(z - R1(G_free))`, with `G_free` the free convolution
/// * orthogonal: `G = 1/(z - R1(G_mono))`, with `G_mono` the monotone one
pub fn closed_form<T: Coeff>(
    kind: ConvolutionKind,
    mu1: &[T],
    mu2: &[T],
    m: &TruncatedSeries<T>,
    order: usize,
) -> Result<TruncatedSeries<T>> {
    let k = match kind {
        ConvolutionKind::Free => r_at(mu1, m, order)?.add(&r_at(mu2, m, order)?),
        ConvolutionKind::Monotone => {
            r_at(mu1, m, order)?.add(&r_at(mu2, &law_moments(mu2, order)?, order)?)
        }
        ConvolutionKind::Boolean => r_at(mu1, &law_moments(mu1, order)?, order)?.add(&r_at(
            mu2,
            &law_moments(mu2, order)?,
            order,
        )?),
        ConvolutionKind::SFree => {
            let free = master_cauchy(&convolution_array(ConvolutionKind::Free, mu1, mu2)?, order)?;
            r_at(mu1, &free, order)?
        }
        ConvolutionKind::Orthogonal => {
            let mono = master_cauchy(
                &convolution_array(ConvolutionKind::Monotone, mu1, mu2)?,
                order,
            )?;
            r_at(mu1, &mono, order)?
        }
    };
    Ok(geometric(&k, order))
}

/// Monotone convolution by composition of reciprocal Cauchy transforms,
/// `F = F1 o F2`, which reads `M(w) = M2(w) M1(w M2(w))`.
pub fn monotone_by_composition<T: Coeff>(
    mu1: &[T],
    mu2: &[T],
    order: usize,
) -> Result<TruncatedSeries<T>> {
    let m1 = law_moments(mu1, order)?;
    let m2 = law_moments(mu2, order)?;
    let u = m2.shift_up().truncate(order)?;
    Ok(m2.mul(&m1.compose(&u)?))
}

/// Boolean convolution by additivity of `1 - 1/M`.
pub fn boolean_by_self_energy<T: Coeff>(
    mu1: &[T],
    mu2: &[T],
    order: usize,
) -> Result<TruncatedSeries<T>> {
    let eta = |mu: &[T]| -> Result<TruncatedSeries<T>> {
        Ok(TruncatedSeries::one(order).sub(&law_moments(mu, order)?.reciprocal()?))
    };
    let sum = eta(mu1)?.add(&eta(mu2)?);
    TruncatedSeries::one(order).sub(&sum).reciprocal()
}

/// Free convolution by adding R-transforms.
pub fn free_by_r_addition<T: Coeff>(
    mu1: &[T],
    mu2: &[T],
    order: usize,
) -> Result<TruncatedSeries<T>> {
    moments_from_r(&r_of(mu1, order).add(&r_of(mu2, order)), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn semicircles_free() {
        let s = vec![q(0), q(1)];
        let c = binary_convolution(ConvolutionKind::Free, &s, &s, 6).unwrap();
        assert_eq!(
            c.moments,
            TruncatedSeries::from_i64(&[1, 0, 2, 0, 8, 0, 40])
        );
        assert!(c.closed_form_holds);
    }

    #[test]
    fn semicircles_monotone_fourth_moment() {
        let s = vec![q(0), q(1)];
        let m = monotone_by_composition(&s, &s, 4).unwrap();
        assert_eq!(m, TruncatedSeries::from_i64(&[1, 0, 2, 0, 7]));
        let c = binary_convolution(ConvolutionKind::Monotone, &s, &s, 4).unwrap();
        assert_eq!(c.moments, m);
    }

    #[test]
    fn kinds_parse() {
        assert_eq!(
            "s_free".parse::<ConvolutionKind>().unwrap(),
            ConvolutionKind::SFree
        );
        assert!(matches!(
            "tensor".parse::<ConvolutionKind>(),
            Err(Error::UnknownKind(_))
        ));
    }

    #[test]
    fn point_masses_boolean() {
        // delta_1 boolean delta_2 has M(1) = 3, M(2) = 1 + 4 + ... via eta additivity
        let m = boolean_by_self_energy(&[q(1)], &[q(2)], 3).unwrap();
        let c = binary_convolution(ConvolutionKind::Boolean, &[q(1)], &[q(2)], 3).unwrap();
        assert_eq!(c.moments, m);
        assert_eq!(m.coeff(1), q(3));
    }
}
