//! Moments as sums over non-crossing partitions.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cells::{Cell, Shape};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_nc, for_each_coloring, Admissibility, ColoredNCPartition};
use crate::scalar::Coeff;
use crate::series::TruncatedSeries;

/// Free cumulants `r(1..=p)` for every cell of a shape.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionArray<T> {
    shape: Shape,
    cumulants: BTreeMap<Cell, Vec<T>>,
    order: usize,
}

impl<T: Coeff> DistributionArray<T> {
    /// Every cell of `shape` needs an entry and no other cell may have one.
    /// Sequences are padded with zeros to a common length.
    pub fn new(shape: Shape, cumulants: BTreeMap<Cell, Vec<T>>) -> Result<Self> {
        for cell in cumulants.keys() {
            if !shape.contains(*cell) {
                return Err(Error::InvalidShape(format!(
                    "cell {cell} is outside the shape"
                )));
            }
        }
        for cell in shape.cells() {
            if !cumulants.contains_key(&cell) {
                return Err(Error::InvalidShape(format!(
                    "cell {cell} has no distribution"
                )));
            }
        }
        let order = cumulants.values().map(Vec::len).max().unwrap_or(0);
        let cumulants = cumulants
            .into_iter()
            .map(|(c, mut v)| {
                v.resize(order, T::zero());
                (c, v)
            })
            .collect();
        Ok(DistributionArray {
            shape,
            cumulants,
            order,
        })
    }

    /// Row `i` of the shape gets cumulants `rows[i-1]`.
    pub fn row_identical(shape: Shape, row1: &[T], row2: &[T]) -> Result<Self> {
        let map = shape
            .cells()
            .map(|c| {
                (
                    c,
                    if c.row == 1 {
                        row1.to_vec()
                    } else {
                        row2.to_vec()
                    },
                )
            })
            .collect();
        Self::new(shape, map)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Length of the stored cumulant sequences.
    pub fn cumulant_order(&self) -> usize {
        self.order
    }

    /// `r_cell(n)`, zero outside the shape or past the stored order.
    pub fn r(&self, cell: Cell, n: usize) -> T {
        if n == 0 {
            return T::zero();
        }
        self.cumulants
            .get(&cell)
            .and_then(|v| v.get(n - 1).cloned())
            .unwrap_or_else(T::zero)
    }

    /// `R_cell(z) = sum r(n) z^(n-1)` as a series of given order.
    pub fn r_series(&self, cell: Cell, order: usize) -> TruncatedSeries<T> {
        TruncatedSeries::new((1..=order + 1).map(|n| self.r(cell, n)).collect())
    }

    pub fn cumulants(&self) -> &BTreeMap<Cell, Vec<T>> {
        &self.cumulants
    }
}

/// Scalar moments `M(0..=m)` from free cumulants `r(1..)`, summing over
/// non-crossing partitions.
pub fn moments_from_cumulants<T: Coeff>(r: &[T], m: usize) -> Result<TruncatedSeries<T>> {
    let mut out = vec![T::one()];
    for n in 1..=m {
        let mut total = T::zero();
        for p in enumerate_nc(n)?.iter() {
            let mut term = T::one();
            for size in p.block_sizes() {
                term = term * r.get(size - 1).cloned().unwrap_or_else(T::zero);
            }
            total = total + term;
        }
        out.push(total);
    }
    Ok(TruncatedSeries::new(out))
}

/// Product of the label cumulants over the blocks.
pub fn partition_contribution<T: Coeff>(p: &ColoredNCPartition, array: &DistributionArray<T>) -> T {
    let mut term = T::one();
    for (size, label) in p.partition.block_sizes().into_iter().zip(&p.labels) {
        term = term * array.r(*label, size);
    }
    term
}

/// Moments `M(0..=m)` of the sum of the array in the vacuum state.
pub fn smf_moments<T: Coeff>(array: &DistributionArray<T>, m: usize) -> Result<TruncatedSeries<T>> {
    smf_moments_with(array, m, Admissibility::Standard)
}

/// [`smf_moments`] under a chosen admissibility rule.
pub fn smf_moments_with<T: Coeff>(
    array: &DistributionArray<T>,
    m: usize,
    rule: Admissibility,
) -> Result<TruncatedSeries<T>> {
    let mut out = vec![T::one()];
    for n in 1..=m {
        let parts = enumerate_nc(n)?;
        // per-partition sums in parallel, combined in enumeration order
        let terms: Vec<T> = parts
            .par_iter()
            .map(|p| {
                let sizes = p.block_sizes();
                let mut sum = T::zero();
                for_each_coloring(p, array.shape(), rule, |_, labels| {
                    let mut term = T::one();
                    for (size, label) in sizes.iter().zip(labels) {
                        term = term * array.r(*label, *size);
                        if term.is_zero() {
                            break;
                        }
                    }
                    sum = sum.clone() + term;
                });
                sum
            })
            .collect();
        out.push(terms.into_iter().fold(T::zero(), |a, b| a + b));
    }
    Ok(TruncatedSeries::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_admissible;
    use crate::scalar::ratio;
    use num::rational::BigRational;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn semicircle_moments_are_catalan() {
        let m = moments_from_cumulants(&[q(0), q(1)], 8).unwrap();
        assert_eq!(m, TruncatedSeries::from_i64(&[1, 0, 1, 0, 2, 0, 5, 0, 14]));
    }

    #[test]
    fn array_rejects_cells_outside_shape() {
        let mut map = BTreeMap::new();
        map.insert(Cell::new(1, 1), vec![q(1)]);
        map.insert(Cell::new(1, 2), vec![q(1)]);
        assert!(DistributionArray::new(Shape::diagonal(), map).is_err());
    }

    #[test]
    fn array_requires_every_cell() {
        let mut map = BTreeMap::new();
        map.insert(Cell::new(1, 1), vec![q(1)]);
        assert!(DistributionArray::new(Shape::diagonal(), map).is_err());
    }

    #[test]
    fn smf_matches_sum_of_contributions() {
        let mut map = BTreeMap::new();
        map.insert(Cell::new(1, 1), vec![q(1), q(2), q(-1)]);
        map.insert(Cell::new(1, 2), vec![ratio(1, 2), q(0), q(3)]);
        map.insert(Cell::new(2, 1), vec![q(-2), q(1)]);
        map.insert(Cell::new(2, 2), vec![q(0), q(1), q(1)]);
        let array = DistributionArray::new(Shape::square(), map).unwrap();
        let fast = smf_moments(&array, 6).unwrap();
        for n in 1..=6 {
            let slow = enumerate_admissible(n, Shape::square(), Admissibility::Standard)
                .unwrap()
                .iter()
                .map(|p| partition_contribution(p, &array))
                .fold(q(0), |a, b| a + b);
            assert_eq!(fast.coeff(n), slow, "n = {n}");
        }
    }

    #[test]
    fn first_moments_by_hand() {
        let mut map = BTreeMap::new();
        map.insert(Cell::new(1, 1), vec![q(1), q(2)]);
        map.insert(Cell::new(2, 1), vec![q(5), q(7)]);
        map.insert(Cell::new(2, 2), vec![q(3), q(4)]);
        let array = DistributionArray::new(Shape::lower_triangular(), map).unwrap();
        let m = smf_moments(&array, 2).unwrap();
        // M(1) = r11(1) + r22(1); M(2) = r11(2) + r22(2) + M(1)^2
        assert_eq!(m.coeff(1), q(4));
        assert_eq!(m.coeff(2), q(2 + 4 + 16));
    }
}
