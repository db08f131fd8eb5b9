//! Unit-valued R-transforms and their multiplicative inverses.

use std::collections::BTreeMap;

use crate::cells::{Cell, Shape};
use crate::error::{Error, Result};
use crate::fock::{Factor, FockModel, State, UnitElement, Q};
use crate::moments::DistributionArray;
use crate::scalar::Coeff;
use crate::series::{mult_inverse_c, r_from_inverse, r_from_moments, TruncatedSeries};

/// A power series with coefficients in the unit algebra, stored as one
/// scalar series per minimal projection.
///
/// Equality is componentwise up to the common order.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSeries<T> {
    comps: [TruncatedSeries<T>; 4],
}

impl<T: Coeff> UnitSeries<T> {
    pub fn from_components(comps: [TruncatedSeries<T>; 4]) -> Self {
        UnitSeries { comps }
    }

    /// `s` times the identity.
    pub fn scalar(s: TruncatedSeries<T>) -> Self {
        UnitSeries {
            comps: std::array::from_fn(|_| s.clone()),
        }
    }

    pub fn component(&self, q: Q) -> &TruncatedSeries<T> {
        &self.comps[q.index()]
    }

    pub fn order(&self) -> usize {
        self.comps.iter().map(TruncatedSeries::order).min().unwrap()
    }

    pub fn coeff(&self, n: usize) -> UnitElement<T> {
        UnitElement::new(std::array::from_fn(|k| self.comps[k].coeff(n)))
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        let mut comps = self.comps.clone();
        for c in comps.iter_mut() {
            *c = c.truncate(order)?;
        }
        Ok(UnitSeries { comps })
    }

    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        (0..4).all(|k| self.comps[k].close_to(&other.comps[k], tol))
    }
}

/// `R_A = sum R_{i,j} 1_{i,j}`, of given order.
pub fn assemble_matricial_r<T: Coeff>(array: &DistributionArray<T>, order: usize) -> UnitSeries<T> {
    let comps = std::array::from_fn(|k| {
        let q = Q::ALL[k];
        array
            .shape()
            .cells()
            .filter(|c| !UnitElement::<T>::unit(*c)[q].is_zero())
            .fold(TruncatedSeries::zero(order), |acc, c| {
                acc.add(&array.r_series(c, order))
            })
    });
    UnitSeries { comps }
}

/// Componentwise inverse `b_0..=b_order` of `1/z + R`.
pub fn invert_c<T: Coeff>(r: &UnitSeries<T>, order: usize) -> Result<UnitSeries<T>> {
    let mut comps = r.comps.clone();
    for c in comps.iter_mut() {
        *c = mult_inverse_c(c, order)?;
    }
    Ok(UnitSeries { comps })
}

/// `R` back from its inverse series.
pub fn r_from_unit_inverse<T: Coeff>(b: &UnitSeries<T>) -> Result<UnitSeries<T>> {
    let mut comps = b.comps.clone();
    for c in comps.iter_mut() {
        *c = r_from_inverse(c)?;
    }
    Ok(UnitSeries { comps })
}

/// `S_m` for `m = 1..=m_max`: the sum over `k` and over `n_1 + ... + n_k =
/// m - k` of `<b_{n_1} X b_{n_2} X ... X b_{n_k} xi, xi>`, where `X` is the
/// product `kernel` and `xi` the state vector.
pub fn alternating_sums<T: Coeff>(
    model: &FockModel<T>,
    state: State,
    kernel: &[Factor<T>],
    b: &UnitSeries<T>,
    m_max: usize,
) -> Result<Vec<T>> {
    if m_max > b.order() + 1 {
        return Err(Error::OrderExceeded {
            requested: m_max,
            available: b.order() + 1,
        });
    }
    // the deepest term has m_max - 1 kernels
    let mut deepest = Vec::new();
    for _ in 1..m_max {
        deepest.extend(kernel.iter().cloned());
    }
    model.state_moment(state, &deepest)?;

    let start = model.basis_vector(&state.word())?;
    let i0 = *start.keys().next().unwrap();
    let bs: Vec<Factor<T>> = (0..m_max).map(|n| Factor::Unit(b.coeff(n))).collect();
    let mut sums = vec![T::zero(); m_max + 1];
    // terms are built from the right: b_n, then either stop or apply X
    let mut stack = vec![(start, 0usize)];
    while let Some((v, used)) = stack.pop() {
        for (n, bn) in bs.iter().enumerate().take(m_max - used) {
            let total = used + n + 1;
            let w = model.apply(bn, &v);
            if w.is_empty() {
                continue;
            }
            if let Some(x) = w.get(&i0) {
                sums[total] = sums[total].clone() + x.clone();
            }
            if total < m_max {
                let mut u = w;
                for f in kernel.iter().rev() {
                    u = model.apply(f, &u);
                }
                if !u.is_empty() {
                    stack.push((u, total));
                }
            }
        }
    }
    sums.remove(0);
    Ok(sums)
}

/// Residuals of the inverse identity for the sum in the vacuum state;
/// expected `1, 0, 0, ...`.
pub fn verify_sum_inverse<T: Coeff>(
    model: &FockModel<T>,
    b: &UnitSeries<T>,
    m_max: usize,
) -> Result<Vec<T>> {
    alternating_sums(model, State::Vacuum, &[Factor::Sum], b, m_max)
}

/// The compressed sum `P A P` for a cell, with its compression projection.
pub fn compressed_sum<T: Coeff>(cell: Cell) -> Vec<Factor<T>> {
    let p = Factor::Unit(UnitElement::compression(cell));
    vec![p.clone(), Factor::Sum, p]
}

/// The state paired with the compressed sum of a cell: `e_{i,i}` for cell
/// `(i, j)`.
pub fn compressed_state(cell: Cell) -> State {
    State::Diagonal(cell.row)
}

/// Residuals of the inverse identity for each compressed sum in its state;
/// each is expected to be `1, 0, 0, ...`.
pub fn verify_compressed_inverses<T: Coeff>(
    model: &FockModel<T>,
    shape: Shape,
    b: &UnitSeries<T>,
    m_max: usize,
) -> Result<BTreeMap<Cell, Vec<T>>> {
    shape
        .cells()
        .map(|cell| {
            alternating_sums(
                model,
                compressed_state(cell),
                &compressed_sum(cell),
                b,
                m_max,
            )
            .map(|s| (cell, s))
        })
        .collect()
}

/// True when `residuals` is `1, 0, 0, ...` up to `tol` (exact for rationals).
pub fn is_unit_residual<T: Coeff>(residuals: &[T], tol: f64) -> bool {
    residuals.iter().enumerate().all(|(k, x)| {
        let want = if k == 0 { T::one() } else { T::zero() };
        x.close_to(&want, tol)
    })
}

/// Recovers `R_A` of given order from mixed moments of the model alone.
///
/// The vacuum, `e_{1,1}` and `e_{2,2}` recursions give the `q11`, `q21` and
/// `q12` components of each `b_m`; the `q22` component follows from the
/// linear relation between the components of `R_A`.
pub fn reconstruct_unique<T: Coeff>(
    model: &FockModel<T>,
    shape: Shape,
    order: usize,
) -> Result<UnitSeries<T>> {
    let n = order + 1;
    let recursions: [(State, Vec<Factor<T>>, Q); 3] = [
        (State::Vacuum, vec![Factor::Sum], Q::Q11),
        (State::Diagonal(1), compressed_sum(Cell::new(1, 1)), Q::Q21),
        (State::Diagonal(2), compressed_sum(Cell::new(2, 2)), Q::Q12),
    ];
    let mut comps: [Vec<T>; 4] = std::array::from_fn(|_| vec![T::one()]);
    for t in 1..=n {
        for c in comps.iter_mut() {
            c.push(T::zero());
        }
        let b = UnitSeries {
            comps: comps.clone().map(TruncatedSeries::new),
        };
        for (state, kernel, q) in &recursions {
            // with b_t = 0 the sum of order t + 1 is minus the wanted value
            let s = alternating_sums(model, *state, kernel, &b, t + 1)?;
            comps[q.index()][t] = -s[t].clone();
        }
        let c: Vec<TruncatedSeries<T>> = [Q::Q11, Q::Q21, Q::Q12]
            .iter()
            .map(|q| TruncatedSeries::new(comps[q.index()].clone()).reciprocal())
            .collect::<Result<_>>()?;
        let mut c22 = c[1].add(&c[2]).sub(&c[0]).into_coeffs();
        c22[0] = T::one();
        let b22 = TruncatedSeries::new(c22).reciprocal()?;
        comps[Q::Q22.index()] = b22.into_coeffs();
    }
    let b = UnitSeries {
        comps: comps.map(TruncatedSeries::new),
    };
    let sum_ok = is_unit_residual(&verify_sum_inverse(model, &b, n)?, 1e-9);
    let compressed_ok = verify_compressed_inverses(model, shape, &b, n)?
        .values()
        .all(|r| is_unit_residual(r, 1e-9));
    if !(sum_ok && compressed_ok) {
        return Err(Error::Inconsistent(
            "reconstructed inverse fails the residual checks".into(),
        ));
    }
    r_from_unit_inverse(&b)
}

/// The scalar R-transform of the sum, as a multiple of the identity. It
/// satisfies the vacuum identity too, so that identity alone does not
/// determine `R_A`.
pub fn scalar_r_witness<T: Coeff>(model: &FockModel<T>, order: usize) -> Result<UnitSeries<T>> {
    let r = r_from_moments(&model.moments(order + 1)?)?;
    Ok(UnitSeries::scalar(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    type Q_ = BigRational;

    fn q(v: i64) -> Q_ {
        Q_::from_i64(v)
    }

    fn sample() -> DistributionArray<Q_> {
        let mut map = BTreeMap::new();
        map.insert(Cell::new(1, 1), vec![q(1), q(2), q(-1)]);
        map.insert(Cell::new(1, 2), vec![q(-2), q(1), q(0)]);
        map.insert(Cell::new(2, 1), vec![q(0), q(3), q(1)]);
        map.insert(Cell::new(2, 2), vec![q(2), q(1), q(2)]);
        DistributionArray::new(Shape::square(), map).unwrap()
    }

    #[test]
    fn assembled_components() {
        let r = assemble_matricial_r(&sample(), 2);
        // q11 -> R11 + R22, q21 -> R11 + R21, q12 -> R22 + R12, q22 -> R12 + R21
        assert_eq!(r.component(Q::Q11), &TruncatedSeries::from_i64(&[3, 3, 1]));
        assert_eq!(r.component(Q::Q21), &TruncatedSeries::from_i64(&[1, 5, 0]));
        assert_eq!(r.component(Q::Q12), &TruncatedSeries::from_i64(&[0, 2, 2]));
        assert_eq!(r.component(Q::Q22), &TruncatedSeries::from_i64(&[-2, 4, 1]));
    }

    #[test]
    fn constant_r_inverse() {
        let r = UnitSeries::scalar(TruncatedSeries::from_i64(&[5, 0]));
        let b = invert_c(&r, 2).unwrap();
        assert_eq!(b.coeff(1), UnitElement::scalar(q(-5)));
        assert_eq!(b.coeff(2), UnitElement::scalar(q(25)));
    }

    #[test]
    fn residuals_vanish() {
        let array = sample();
        let model = FockModel::build(&array, 6, q(1)).unwrap();
        let b = invert_c(&assemble_matricial_r(&array, 6), 7).unwrap();
        let s = verify_sum_inverse(&model, &b, 7).unwrap();
        assert!(is_unit_residual(&s, 0.0), "{s:?}");
        for (cell, s) in verify_compressed_inverses(&model, array.shape(), &b, 6).unwrap() {
            assert!(is_unit_residual(&s, 0.0), "{cell}: {s:?}");
        }
    }

    #[test]
    fn cell_states_of_the_distribution_array_do_not_satisfy_compressed_identity() {
        // the compression kills the vector of the cell's own state, so the
        // sums reduce to that state's value of b_{m-1}
        let array = sample();
        let model = FockModel::build(&array, 6, q(1)).unwrap();
        let b = invert_c(&assemble_matricial_r(&array, 4), 5).unwrap();
        let cell = Cell::new(1, 1);
        let s =
            alternating_sums(&model, State::of_cell(cell), &compressed_sum(cell), &b, 3).unwrap();
        assert!(!is_unit_residual(&s, 0.0));
    }

    #[test]
    fn reconstruction_round_trip() {
        let array = sample();
        let model = FockModel::build(&array, 8, q(2)).unwrap();
        let got = reconstruct_unique(&model, array.shape(), 5).unwrap();
        assert_eq!(got, assemble_matricial_r(&array, 5));
    }

    #[test]
    fn scalar_witness_also_satisfies_vacuum_identity() {
        let array = sample();
        let model = FockModel::build(&array, 7, q(1)).unwrap();
        let w = scalar_r_witness(&model, 6).unwrap();
        let b = invert_c(&w, 7).unwrap();
        assert!(is_unit_residual(
            &verify_sum_inverse(&model, &b, 7).unwrap(),
            0.0
        ));
        assert_ne!(w, assemble_matricial_r(&array, 6));
    }
}
