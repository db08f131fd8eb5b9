//! The unit algebra: diagonal operators spanned by four minimal projections.

use std::ops::Index;

use crate::cells::Cell;
use crate::scalar::Coeff;

/// Minimal projections of the unit algebra.
///
/// `Q11` projects onto the vacuum, `Q21` onto words starting with `(1,1)`,
/// `Q12` onto words starting with `(2,2)`, `Q22` onto words starting with an
/// off-diagonal letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Q {
    Q11,
    Q12,
    Q21,
    Q22,
}

impl Q {
    pub const ALL: [Q; 4] = [Q::Q11, Q::Q12, Q::Q21, Q::Q22];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Q::Q11 => "q11",
            Q::Q12 => "q12",
            Q::Q21 => "q21",
            Q::Q22 => "q22",
        }
    }
}

/// `sum beta_q q` over the four projections.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitElement<T> {
    beta: [T; 4],
}

impl<T: Coeff> UnitElement<T> {
    pub fn new(beta: [T; 4]) -> Self {
        UnitElement { beta }
    }

    pub fn zero() -> Self {
        UnitElement::new([T::zero(), T::zero(), T::zero(), T::zero()])
    }

    pub fn identity() -> Self {
        UnitElement::scalar(T::one())
    }

    pub fn scalar(c: T) -> Self {
        UnitElement::new([c.clone(), c.clone(), c.clone(), c])
    }

    pub fn projection(q: Q) -> Self {
        let mut u = Self::zero();
        u.beta[q.index()] = T::one();
        u
    }

    fn from_qs(qs: &[Q]) -> Self {
        qs.iter()
            .fold(Self::zero(), |u, &q| u.add(&Self::projection(q)))
    }

    /// The unit `1_{i,j}` of a cell.
    pub fn unit(cell: Cell) -> Self {
        match (cell.row, cell.col) {
            (1, 1) => Self::from_qs(&[Q::Q11, Q::Q21]),
            (2, 2) => Self::from_qs(&[Q::Q11, Q::Q12]),
            (1, 2) => Self::from_qs(&[Q::Q12, Q::Q22]),
            _ => Self::from_qs(&[Q::Q21, Q::Q22]),
        }
    }

    /// Projection onto the vacuum.
    pub fn vacuum() -> Self {
        Self::projection(Q::Q11)
    }

    /// Projection onto words whose first letter is `(j,j)`.
    pub fn diagonal_words(j: u8) -> Self {
        Self::projection(if j == 1 { Q::Q21 } else { Q::Q12 })
    }

    /// The compression projection of a cell: `1 - 1_{1,1} 1_{2,2}` on the
    /// diagonal and `1 - 1_{j,j}` off it.
    pub fn compression(cell: Cell) -> Self {
        let one = Self::identity();
        if cell.is_diagonal() {
            one.sub(&Self::unit(Cell::new(1, 1)).mul(&Self::unit(Cell::new(2, 2))))
        } else {
            one.sub(&Self::unit(Cell::new(cell.col, cell.col)))
        }
    }

    pub fn beta(&self, q: Q) -> &T {
        &self.beta[q.index()]
    }

    pub fn add(&self, o: &Self) -> Self {
        UnitElement::new(std::array::from_fn(|k| {
            self.beta[k].clone() + o.beta[k].clone()
        }))
    }

    pub fn sub(&self, o: &Self) -> Self {
        UnitElement::new(std::array::from_fn(|k| {
            self.beta[k].clone() - o.beta[k].clone()
        }))
    }

    pub fn mul(&self, o: &Self) -> Self {
        UnitElement::new(std::array::from_fn(|k| {
            self.beta[k].clone() * o.beta[k].clone()
        }))
    }

    pub fn scale(&self, c: &T) -> Self {
        UnitElement::new(std::array::from_fn(|k| self.beta[k].clone() * c.clone()))
    }

    pub fn is_projection(&self) -> bool {
        self.beta.iter().all(|b| b.is_zero() || b.is_one())
    }
}

impl<T> Index<Q> for UnitElement<T> {
    type Output = T;
    fn index(&self, q: Q) -> &T {
        &self.beta[q as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    type U = UnitElement<BigRational>;

    #[test]
    fn units_in_terms_of_projections() {
        let one = U::identity();
        assert_eq!(U::unit(Cell::new(1, 2)), one.sub(&U::unit(Cell::new(1, 1))));
        assert_eq!(U::unit(Cell::new(2, 1)), one.sub(&U::unit(Cell::new(2, 2))));
        for c in Cell::ALL {
            assert!(U::unit(c).is_projection());
            assert!(U::compression(c).is_projection());
        }
        assert_eq!(U::compression(Cell::new(1, 1)), one.sub(&U::vacuum()));
    }
}
