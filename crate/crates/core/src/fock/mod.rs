//! Truncated Fock-space model of an array of Toeplitz operators.
//!
//! Basis words are sequences of letters `(i,j)`, leftmost outermost. A word
//! is valid when its last letter is diagonal and each change of letter goes
//! from an off-diagonal `(a,b)` to a letter starting with `b`. Words longer
//! than the model depth are dropped.

mod axioms;
mod units;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fmt::Write as _;

pub use axioms::{axiom_check, AxiomReport};
pub use units::{UnitElement, Q};

use crate::cells::{Cell, Color};
use crate::error::{Error, Result};
use crate::moments::DistributionArray;
use crate::scalar::Coeff;
use crate::series::{r_from_moments, TruncatedSeries};

/// A basis word; the empty word is the vacuum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Cell>);

impl Word {
    pub fn vacuum() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        let w = &self.0;
        if let Some(last) = w.last() {
            if !last.is_diagonal() {
                return false;
            }
        }
        w.windows(2).all(|p| can_precede(p[0], p[1]))
    }

    pub fn class(&self) -> Q {
        match self.0.first() {
            None => Q::Q11,
            Some(c) if *c == Cell::new(2, 2) => Q::Q12,
            Some(c) if *c == Cell::new(1, 1) => Q::Q21,
            Some(_) => Q::Q22,
        }
    }
}

fn can_precede(x: Cell, next: Cell) -> bool {
    x == next || (!x.is_diagonal() && x.col == next.row)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("Ω");
        }
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// The vector defining a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum State {
    /// The vacuum.
    Vacuum,
    /// The basis vector `e_{j,j}`.
    Diagonal(Color),
}

impl State {
    /// The state in which a single cell carries its own law: the vacuum on
    /// the diagonal, `e_{j,j}` for cell `(i,j)` off it.
    pub fn of_cell(cell: Cell) -> State {
        if cell.is_diagonal() {
            State::Vacuum
        } else {
            State::Diagonal(cell.col)
        }
    }

    pub fn word(self) -> Word {
        match self {
            State::Vacuum => Word::vacuum(),
            State::Diagonal(j) => Word(vec![Cell::new(j, j)]),
        }
    }
}

/// One factor of an operator product.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor<T> {
    /// The sum of all array entries.
    Sum,
    /// A single entry `a_{i,j}`.
    Entry(Cell),
    /// `c_0 1_{i,j} + sum_k c_k a_{i,j}^k`.
    EntryPoly(Cell, Vec<T>),
    Unit(UnitElement<T>),
    Create(Cell),
    Annihilate(Cell),
}

impl<T> Factor<T> {
    /// Largest number of letters the factor can add.
    fn reach(&self) -> usize {
        match self {
            Factor::Sum | Factor::Entry(_) | Factor::Create(_) => 1,
            Factor::EntryPoly(_, c) => c.len().saturating_sub(1),
            Factor::Unit(_) => 0,
            Factor::Annihilate(_) => 0,
        }
    }
}

/// Sparse vector over basis indices.
pub type Vector<T> = BTreeMap<usize, T>;

/// The Fock model of an array, truncated at a depth.
#[derive(Debug, Clone)]
pub struct FockModel<T> {
    depth: usize,
    alpha: T,
    cells: Vec<Cell>,
    basis: Vec<Word>,
    index: HashMap<Word, usize>,
    class: Vec<Q>,
    run: Vec<usize>,
    create: [Vec<Option<usize>>; 4],
    strip: Vec<Option<usize>>,
    // toeplitz[cell][k-1] multiplies (l*)^(k-1): r(k) / alpha^(k-1)
    toeplitz: [Vec<T>; 4],
}

impl<T: Coeff> FockModel<T> {
    /// Builds the model with creation weight `alpha > 0`, keeping words up
    /// to length `depth`.
    pub fn build(array: &DistributionArray<T>, depth: usize, alpha: T) -> Result<Self> {
        if alpha.to_f64() <= 0.0 {
            return Err(Error::InvalidParameter("alpha must be positive".into()));
        }
        let mut basis = vec![Word::vacuum()];
        let mut frontier = vec![Word::vacuum()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &frontier {
                for x in Cell::ALL {
                    if let Some(v) = prepend(x, w) {
                        next.push(v);
                    }
                }
            }
            basis.extend(next.iter().cloned());
            frontier = next;
        }
        let index: HashMap<Word, usize> = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let class = basis.iter().map(Word::class).collect();
        let run = basis
            .iter()
            .map(|w| w.0.iter().take_while(|c| Some(*c) == w.0.first()).count())
            .collect();
        let create = std::array::from_fn(|k| {
            let x = Cell::ALL[k];
            basis
                .iter()
                .map(|w| prepend(x, w).and_then(|v| index.get(&v).copied()))
                .collect()
        });
        let strip = basis
            .iter()
            .map(|w| (!w.is_empty()).then(|| index[&Word(w.0[1..].to_vec())]))
            .collect();
        let p = array.cumulant_order();
        let toeplitz = std::array::from_fn(|k| {
            let cell = Cell::ALL[k];
            let mut pow = T::one();
            let mut out = Vec::with_capacity(p);
            for n in 1..=p {
                out.push(array.r(cell, n) / pow.clone());
                pow = pow * alpha.clone();
            }
            out
        });
        Ok(FockModel {
            depth,
            alpha,
            cells: array.shape().cells().collect(),
            basis,
            index,
            class,
            run,
            create,
            strip,
            toeplitz,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn word_index(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn basis_vector(&self, w: &Word) -> Result<Vector<T>> {
        let i = self
            .word_index(w)
            .ok_or_else(|| Error::InvalidParameter(format!("word {w} is not in the basis")))?;
        Ok(BTreeMap::from([(i, T::one())]))
    }

    fn first_letter(&self, i: usize) -> Option<Cell> {
        self.basis[i].0.first().copied()
    }

    /// Applies one factor.
    pub fn apply(&self, f: &Factor<T>, v: &Vector<T>) -> Vector<T> {
        match f {
            Factor::Sum => {
                let mut out = Vector::new();
                for &cell in &self.cells {
                    self.add_entry(cell, v, &mut out);
                }
                out
            }
            Factor::Entry(cell) => {
                let mut out = Vector::new();
                self.add_entry(*cell, v, &mut out);
                out
            }
            Factor::EntryPoly(cell, coeffs) => {
                let mut out = Vector::new();
                let mut power = v.clone();
                for (k, c) in coeffs.iter().enumerate() {
                    if k == 0 {
                        power = self.apply(&Factor::Unit(UnitElement::unit(*cell)), v);
                    } else {
                        let mut next = Vector::new();
                        self.add_entry(*cell, &power, &mut next);
                        power = next;
                    }
                    for (i, x) in &power {
                        add_to(&mut out, *i, x.clone() * c.clone());
                    }
                }
                out
            }
            Factor::Unit(u) => v
                .iter()
                .filter_map(|(i, x)| {
                    let b = u[self.class[*i]].clone();
                    (!b.is_zero()).then(|| (*i, x.clone() * b))
                })
                .collect(),
            Factor::Create(cell) => {
                let mut out = Vector::new();
                for (i, x) in v {
                    if let Some(j) = self.create[cell.index()][*i] {
                        add_to(&mut out, j, x.clone() * self.alpha.clone());
                    }
                }
                out
            }
            Factor::Annihilate(cell) => {
                let mut out = Vector::new();
                for (i, x) in v {
                    if self.first_letter(*i) == Some(*cell) {
                        add_to(
                            &mut out,
                            self.strip[*i].unwrap(),
                            x.clone() * self.alpha.clone(),
                        );
                    }
                }
                out
            }
        }
    }

    // a = alpha l + sum_k s(k) (l*)^(k-1), with (l*)^0 the unit of the cell
    fn add_entry(&self, cell: Cell, v: &Vector<T>, out: &mut Vector<T>) {
        let k = cell.index();
        let unit = UnitElement::<T>::unit(cell);
        let coeffs = &self.toeplitz[k];
        for (i, x) in v {
            if let Some(j) = self.create[k][*i] {
                add_to(out, j, x.clone() * self.alpha.clone());
            }
            if coeffs.is_empty() {
                continue;
            }
            if !coeffs[0].is_zero() && !unit[self.class[*i]].is_zero() {
                add_to(out, *i, x.clone() * coeffs[0].clone());
            }
            if self.first_letter(*i) != Some(cell) {
                continue;
            }
            let mut target = *i;
            for c in coeffs.iter().skip(1).take(self.run[*i]) {
                target = self.strip[target].unwrap();
                if !c.is_zero() {
                    add_to(out, target, x.clone() * c.clone());
                }
            }
        }
    }

    /// `<f_1 ... f_n xi, xi>` for the state vector `xi`.
    pub fn state_moment(&self, state: State, factors: &[Factor<T>]) -> Result<T> {
        let start = state.word();
        let reach: usize = factors.iter().map(Factor::reach).sum();
        // a path must climb past the depth and still come back to be lost
        let needed = (start.len() + reach).saturating_sub(1);
        if needed > self.depth {
            return Err(Error::DepthExceeded {
                needed,
                depth: self.depth,
            });
        }
        let i0 = self.index[&start];
        let mut v = BTreeMap::from([(i0, T::one())]);
        for f in factors.iter().rev() {
            v = self.apply(f, &v);
            if v.is_empty() {
                return Ok(T::zero());
            }
        }
        Ok(v.get(&i0).cloned().unwrap_or_else(T::zero))
    }

    /// `M(0..=m)` of the sum in the vacuum state.
    pub fn moments(&self, m: usize) -> Result<TruncatedSeries<T>> {
        self.power_moments(State::Vacuum, &Factor::Sum, m)
    }

    /// `M(0..=m)` of one factor in a state, reusing powers.
    pub fn power_moments(
        &self,
        state: State,
        f: &Factor<T>,
        m: usize,
    ) -> Result<TruncatedSeries<T>> {
        let start = state.word();
        let needed = (start.len() + m * f.reach()).saturating_sub(1);
        if needed > self.depth {
            return Err(Error::DepthExceeded {
                needed,
                depth: self.depth,
            });
        }
        let i0 = self.index[&start];
        let mut v = BTreeMap::from([(i0, T::one())]);
        let mut out = vec![T::one()];
        for _ in 0..m {
            v = self.apply(f, &v);
            out.push(v.get(&i0).cloned().unwrap_or_else(T::zero));
        }
        Ok(TruncatedSeries::new(out))
    }

    /// Free cumulants `r(1..=m)` of one entry in its own state, as `R(z)`.
    pub fn single_cell_r(&self, cell: Cell, m: usize) -> Result<TruncatedSeries<T>> {
        let moments = self.power_moments(State::of_cell(cell), &Factor::Entry(cell), m)?;
        r_from_moments(&moments)
    }

    /// Basis listing, one word per line.
    pub fn dump_basis(&self) -> String {
        let mut s = String::new();
        for w in &self.basis {
            let _ = writeln!(s, "{w}");
        }
        s
    }

    /// Basis listing followed by the creation and annihilation tables.
    pub fn dump(&self) -> String {
        let mut s = String::from("# basis\n");
        s.push_str(&self.dump_basis());
        for &cell in &self.cells {
            let _ = writeln!(s, "# create {cell}");
            for (i, w) in self.basis.iter().enumerate() {
                if let Some(j) = self.create[cell.index()][i] {
                    let _ = writeln!(s, "{w} -> {}", self.basis[j]);
                }
            }
            let _ = writeln!(s, "# annihilate {cell}");
            for (i, w) in self.basis.iter().enumerate() {
                if self.first_letter(i) == Some(cell) {
                    let _ = writeln!(s, "{w} -> {}", self.basis[self.strip[i].unwrap()]);
                }
            }
        }
        s
    }
}

fn prepend(x: Cell, w: &Word) -> Option<Word> {
    let ok = match w.0.first() {
        None => x.is_diagonal(),
        Some(&first) => can_precede(x, first),
    };
    ok.then(|| {
        let mut v = Vec::with_capacity(w.len() + 1);
        v.push(x);
        v.extend_from_slice(&w.0);
        Word(v)
    })
}

fn add_to<T: Coeff>(v: &mut Vector<T>, i: usize, x: T) {
    if x.is_zero() {
        return;
    }
    match v.get_mut(&i) {
        Some(y) => {
            let s = y.clone() + x;
            if s.is_zero() {
                v.remove(&i);
            } else {
                *y = s;
            }
        }
        None => {
            v.insert(i, x);
        }
    }
}
