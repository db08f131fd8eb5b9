//! Randomized checks of the unit and freeness axioms on a model.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Factor, FockModel, State, UnitElement};
use crate::cells::Cell;
use crate::error::Result;
use crate::scalar::Coeff;

/// Outcome of [`axiom_check`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

const STATES: [State; 3] = [State::Vacuum, State::Diagonal(1), State::Diagonal(2)];

/// Checks the unit normalizations, the relation `l* l = alpha^2 1` below the
/// truncation boundary, unit factorization of the states, and `trials`
/// random products of up to `max_len` factors for the vanishing rules of
/// mixed moments. Factors are polynomials of degree at most two, so the
/// model needs depth `2 * max_len + 1`.
pub fn axiom_check<T: Coeff>(
    model: &FockModel<T>,
    trials: usize,
    max_len: usize,
    seed: u64,
) -> Result<AxiomReport> {
    let mut report = AxiomReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells: Vec<Cell> = model.cells.clone();

    // units: phi(1_ij) = delta_ij, phi_j(1_ik) = delta_jk
    for cell in Cell::ALL {
        let u = Factor::Unit(UnitElement::unit(cell));
        let v = model.state_moment(State::Vacuum, std::slice::from_ref(&u))?;
        let want = if cell.is_diagonal() {
            T::one()
        } else {
            T::zero()
        };
        report.record(v == want, || format!("phi(1{cell}) = {v:?}"));
        for j in [1, 2] {
            let v = model.state_moment(State::Diagonal(j), std::slice::from_ref(&u))?;
            let want = if cell.col == j { T::one() } else { T::zero() };
            report.record(v == want, || format!("phi_{j}(1{cell}) = {v:?}"));
        }
    }

    // l* l = alpha^2 1 on every word that can still be extended
    let a2 = model.alpha().clone() * model.alpha().clone();
    for cell in Cell::ALL {
        let unit = UnitElement::unit(cell);
        for w in model.basis().iter().filter(|w| w.len() < model.depth()) {
            let v = model.basis_vector(w)?;
            let lhs = model.apply(
                &Factor::Annihilate(cell),
                &model.apply(&Factor::Create(cell), &v),
            );
            let rhs = model.apply(&Factor::Unit(unit.scale(&a2)), &v);
            report.record(lhs == rhs, || format!("l*l != alpha^2 1 for {cell} on {w}"));
        }
    }

    for _ in 0..trials {
        let len = rng.gen_range(1..=max_len);
        let cells_seq = alternating_cells(&mut rng, &cells, len);
        let plain: Vec<Factor<T>> = cells_seq
            .iter()
            .map(|&c| random_poly(&mut rng, c))
            .collect();

        // unit factorization for basis-vector states
        let u1 = UnitElement::unit(*Cell::ALL.choose(&mut rng).unwrap());
        let u2 = UnitElement::unit(*Cell::ALL.choose(&mut rng).unwrap());
        for s in STATES {
            let mut f = vec![Factor::Unit(u1.clone())];
            f.extend(plain.iter().cloned());
            f.push(Factor::Unit(u2.clone()));
            let lhs = model.state_moment(s, &f)?;
            let rhs = model.state_moment(s, &[Factor::Unit(u1.clone())])?
                * model.state_moment(s, &plain)?
                * model.state_moment(s, &[Factor::Unit(u2.clone())])?;
            report.record(lhs == rhs, || format!("unit factorization fails in {s:?}"));
        }

        // centered alternating products vanish in the vacuum state
        let centered: Vec<Factor<T>> = plain
            .iter()
            .zip(&cells_seq)
            .map(|(f, &c)| center(model, f, c))
            .collect::<Result<_>>()?;
        let v = model.state_moment(State::Vacuum, &centered)?;
        report.record(v.is_zero(), || {
            format!("centered product over {cells_seq:?} gives {v:?}")
        });

        let last = *cells_seq.last().unwrap();
        // off-diagonal state, last factor diagonal in the other index
        for j in [1, 2] {
            if last.is_diagonal() && last.col != j {
                let v = model.state_moment(State::Diagonal(j), &plain)?;
                report.record(v.is_zero(), || {
                    format!("phi_{j} of product ending in {last} gives {v:?}")
                });
            }
        }
        // vacuum state, last factor off-diagonal
        if !last.is_diagonal() {
            let v = model.state_moment(State::Vacuum, &plain)?;
            report.record(v.is_zero(), || {
                format!("phi of product ending in {last} gives {v:?}")
            });
        }
        // a diagonal factor followed only by centered ones, in the vacuum
        // state (in a conjugate state a diagonal tail factor centered in the
        // vacuum need not be centered there)
        if let Some(k) = cells_seq[..len - 1].iter().rposition(|c| c.is_diagonal()) {
            let mut f = plain[..=k].to_vec();
            f.extend(centered[k + 1..].iter().cloned());
            let v = model.state_moment(State::Vacuum, &f)?;
            report.record(v.is_zero(), || {
                format!("{cells_seq:?} with centered tail after {k} gives {v:?}")
            });
        }
    }
    Ok(report)
}

fn alternating_cells(rng: &mut ChaCha8Rng, cells: &[Cell], len: usize) -> Vec<Cell> {
    let mut out: Vec<Cell> = Vec::with_capacity(len);
    while out.len() < len {
        let c = *cells.choose(rng).unwrap();
        if out.last() != Some(&c) || cells.len() == 1 {
            out.push(c);
        }
    }
    out
}

fn random_poly<T: Coeff>(rng: &mut ChaCha8Rng, cell: Cell) -> Factor<T> {
    let coeffs = (0..3).map(|_| T::from_i64(rng.gen_range(-2..=2))).collect();
    Factor::EntryPoly(cell, coeffs)
}

fn center<T: Coeff>(model: &FockModel<T>, f: &Factor<T>, cell: Cell) -> Result<Factor<T>> {
    let Factor::EntryPoly(_, coeffs) = f else {
        unreachable!()
    };
    let mean = model.state_moment(State::of_cell(cell), std::slice::from_ref(f))?;
    let mut coeffs = coeffs.clone();
    coeffs[0] = coeffs[0].clone() - mean;
    Ok(Factor::EntryPoly(cell, coeffs))
}
