//! Cells `(i, j)` of a two-by-two array and shapes (sets of cells).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Row/column index, 1 or 2.
pub type Color = u8;

/// The other index: 1 ↔ 2.
pub fn other(c: Color) -> Color {
    3 - c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: Color,
    pub col: Color,
}

impl Cell {
    pub const ALL: [Cell; 4] = [
        Cell::new(1, 1),
        Cell::new(1, 2),
        Cell::new(2, 1),
        Cell::new(2, 2),
    ];

    pub const fn new(row: Color, col: Color) -> Cell {
        Cell { row, col }
    }

    pub fn is_diagonal(self) -> bool {
        self.row == self.col
    }

    /// Position in [`Cell::ALL`].
    pub fn index(self) -> usize {
        ((self.row - 1) * 2 + (self.col - 1)) as usize
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Parses `"i,j"`.
impl FromStr for Cell {
    type Err = Error;
    fn from_str(s: &str) -> Result<Cell> {
        let bad = || Error::Parse(format!("cell key `{s}`"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let row: Color = a.trim().parse().map_err(|_| bad())?;
        let col: Color = b.trim().parse().map_err(|_| bad())?;
        if !(1..=2).contains(&row) || !(1..=2).contains(&col) {
            return Err(bad());
        }
        Ok(Cell::new(row, col))
    }
}

/// A nonempty set of cells, the support of an array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    mask: u8,
}

impl Shape {
    pub fn new(cells: &[Cell]) -> Result<Shape> {
        let mask = cells.iter().fold(0u8, |m, c| m | (1 << c.index()));
        if mask == 0 {
            return Err(Error::InvalidShape("no cells".into()));
        }
        Ok(Shape { mask })
    }

    pub fn square() -> Shape {
        Shape { mask: 0b1111 }
    }

    pub fn diagonal() -> Shape {
        Shape::from_cells(&[(1, 1), (2, 2)])
    }

    /// No `(1,2)` cell.
    pub fn lower_triangular() -> Shape {
        Shape::from_cells(&[(1, 1), (2, 1), (2, 2)])
    }

    /// No `(2,2)` cell.
    pub fn upper_anti_triangular() -> Shape {
        Shape::from_cells(&[(1, 1), (1, 2), (2, 1)])
    }

    /// First column only.
    pub fn column() -> Shape {
        Shape::from_cells(&[(1, 1), (2, 1)])
    }

    fn from_cells(cells: &[(Color, Color)]) -> Shape {
        let cells: Vec<Cell> = cells.iter().map(|&(i, j)| Cell::new(i, j)).collect();
        Shape::new(&cells).expect("nonempty")
    }

    pub fn contains(self, c: Cell) -> bool {
        self.mask & (1 << c.index()) != 0
    }

    pub fn cells(self) -> impl Iterator<Item = Cell> {
        Cell::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    /// Named shape by its config name.
    pub fn named(name: &str) -> Result<Shape> {
        match name {
            "square" => Ok(Shape::square()),
            "diagonal" => Ok(Shape::diagonal()),
            "lower_triangular" => Ok(Shape::lower_triangular()),
            "upper_anti_triangular" => Ok(Shape::upper_anti_triangular()),
            "column" => Ok(Shape::column()),
            other => Err(Error::InvalidShape(format!("unknown shape `{other}`"))),
        }
    }
}
