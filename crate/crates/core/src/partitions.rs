//! Non-crossing partitions, colorings and cell labels.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::cells::{Cell, Color, Shape};
use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 14;

/// A non-crossing partition of `{1..m}`.
///
/// Stored as the block index of each point, blocks numbered by their
/// smallest element. Two partitions with the same blocks are equal however
/// they were built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NCPartition {
    assign: Vec<u8>,
}

impl NCPartition {
    /// Builds a partition from blocks in any order. Points are 1-based.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<NCPartition> {
        let m: usize = blocks.iter().map(Vec::len).sum();
        let mut owner = vec![usize::MAX; m];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidParameter("empty block".into()));
            }
            for &p in block {
                if p == 0 || p > m || owner[p - 1] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("bad point {p}")));
                }
                owner[p - 1] = b;
            }
        }
        // renumber blocks by first appearance
        let mut relabel = HashMap::new();
        let assign: Vec<u8> = owner
            .iter()
            .map(|&b| {
                let next = relabel.len() as u8;
                *relabel.entry(b).or_insert(next)
            })
            .collect();
        let p = NCPartition { assign };
        if !p.is_noncrossing() {
            return Err(Error::InvalidParameter("blocks cross".into()));
        }
        Ok(p)
    }

    pub fn points(&self) -> usize {
        self.assign.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.assign
            .iter()
            .map(|&b| b as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Block index of each point (0-based points).
    pub fn assignment(&self) -> &[u8] {
        &self.assign
    }

    /// Blocks as sorted 1-based point lists, ordered by smallest element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_blocks()];
        for (p, &b) in self.assign.iter().enumerate() {
            out[b as usize].push(p + 1);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.n_blocks()];
        for &b in &self.assign {
            out[b as usize] += 1;
        }
        out
    }

    /// Nearest outer block of each block, if any.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let n = self.n_blocks();
        let mut lo = vec![usize::MAX; n];
        let mut hi = vec![0; n];
        for (p, &b) in self.assign.iter().enumerate() {
            let b = b as usize;
            lo[b] = lo[b].min(p);
            hi[b] = hi[b].max(p);
        }
        (0..n)
            .map(|b| {
                // blocks are numbered by lo, so the deepest candidate has the largest index
                (0..b).rev().find(|&c| lo[c] < lo[b] && hi[b] < hi[c])
            })
            .collect()
    }

    fn is_noncrossing(&self) -> bool {
        let m = self.assign.len();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    for d in c + 1..m {
                        let (x, y) = (self.assign[a], self.assign[b]);
                        if x != y && self.assign[c] == x && self.assign[d] == y {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn nc_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<NCPartition>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<NCPartition>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All non-crossing partitions of `{1..m}`, `1 <= m <= 14`, in a fixed order.
pub fn enumerate_nc(m: usize) -> Result<Arc<Vec<NCPartition>>> {
    if !(1..=MAX_POINTS).contains(&m) {
        return Err(Error::OrderOutOfRange {
            got: m,
            min: 1,
            max: MAX_POINTS,
        });
    }
    if let Some(hit) = nc_cache().lock().unwrap().get(&m) {
        return Ok(hit.clone());
    }
    let mut out = Vec::new();
    let mut assign = Vec::with_capacity(m);
    let mut open = Vec::with_capacity(m);
    grow(m, &mut assign, &mut open, 0, &mut out);
    let out = Arc::new(out);
    nc_cache().lock().unwrap().insert(m, out.clone());
    Ok(out)
}

// A point may join any block still on the stack of open blocks; joining
// closes every block opened after it.
fn grow(m: usize, assign: &mut Vec<u8>, open: &mut Vec<u8>, used: u8, out: &mut Vec<NCPartition>) {
    if assign.len() == m {
        out.push(NCPartition {
            assign: assign.clone(),
        });
        return;
    }
    for depth in 0..open.len() {
        let b = open[depth];
        let saved: Vec<u8> = open.drain(depth + 1..).collect();
        assign.push(b);
        grow(m, assign, open, used, out);
        assign.pop();
        open.extend(saved);
    }
    open.push(used);
    assign.push(used);
    grow(m, assign, open, used + 1, out);
    assign.pop();
    open.pop();
}

/// Which colorings are kept besides the support check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Admissibility {
    /// Only require every label to lie in the shape. This is the rule that
    /// matches the Fock-space model.
    #[default]
    Standard,
    /// Also reject a block that shares its color with its nearest outer
    /// block while some outer block has another color.
    StrictNesting,
}

/// Label of each block. A block of color `i` gets `(i, j)` where `j` is the
/// color of its nearest differently colored outer block, or `(i, i)` when
/// there is none.
pub fn block_labels(partition: &NCPartition, coloring: &[Color]) -> Result<Vec<Cell>> {
    if coloring.len() != partition.n_blocks() {
        return Err(Error::InvalidParameter(format!(
            "coloring has {} entries for {} blocks",
            coloring.len(),
            partition.n_blocks()
        )));
    }
    if coloring.iter().any(|c| !(1..=2).contains(c)) {
        return Err(Error::InvalidParameter("colors must be 1 or 2".into()));
    }
    let parents = partition.parents();
    let mut labels: Vec<Cell> = Vec::with_capacity(coloring.len());
    for (b, &color) in coloring.iter().enumerate() {
        labels.push(child_label(
            parents[b].map(|p| (coloring[p], labels[p])),
            color,
        ));
    }
    Ok(labels)
}

fn child_label(parent: Option<(Color, Cell)>, color: Color) -> Cell {
    match parent {
        None => Cell::new(color, color),
        Some((pc, pl)) if pc == color => pl,
        Some((pc, _)) => Cell::new(color, pc),
    }
}

fn child_allowed(
    parent: Option<(Color, Cell)>,
    color: Color,
    label: Cell,
    shape: Shape,
    rule: Admissibility,
) -> bool {
    if !shape.contains(label) {
        return false;
    }
    match (rule, parent) {
        (Admissibility::StrictNesting, Some((pc, pl))) => !(pc == color && !pl.is_diagonal()),
        _ => true,
    }
}

/// A colored partition whose labels all lie in the shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredNCPartition {
    pub partition: NCPartition,
    pub coloring: Vec<Color>,
    pub labels: Vec<Cell>,
}

/// Labels the blocks and checks admissibility. `Ok(None)` means rejected.
pub fn label_and_admit(
    partition: &NCPartition,
    coloring: &[Color],
    shape: Shape,
    rule: Admissibility,
) -> Result<Option<ColoredNCPartition>> {
    let labels = block_labels(partition, coloring)?;
    let parents = partition.parents();
    for b in 0..labels.len() {
        let parent = parents[b].map(|p| (coloring[p], labels[p]));
        if !child_allowed(parent, coloring[b], labels[b], shape, rule) {
            return Ok(None);
        }
    }
    Ok(Some(ColoredNCPartition {
        partition: partition.clone(),
        coloring: coloring.to_vec(),
        labels,
    }))
}

/// Same as [`label_and_admit`] for blocks given with their colors in any
/// order.
pub fn label_colored_blocks(
    blocks: &[(Vec<usize>, Color)],
    shape: Shape,
    rule: Admissibility,
) -> Result<Option<ColoredNCPartition>> {
    let plain: Vec<Vec<usize>> = blocks.iter().map(|(b, _)| b.clone()).collect();
    let partition = NCPartition::from_blocks(&plain)?;
    let mut coloring = vec![0; partition.n_blocks()];
    for (block, color) in blocks {
        let min = *block.iter().min().expect("nonempty");
        coloring[partition.assignment()[min - 1] as usize] = *color;
    }
    label_and_admit(&partition, &coloring, shape, rule)
}

/// Visits every admissible coloring of `partition`, outer blocks first.
pub fn for_each_coloring(
    partition: &NCPartition,
    shape: Shape,
    rule: Admissibility,
    mut visit: impl FnMut(&[Color], &[Cell]),
) {
    let parents = partition.parents();
    let n = parents.len();
    let mut colors = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    walk(&parents, shape, rule, &mut colors, &mut labels, &mut visit);
}

fn walk(
    parents: &[Option<usize>],
    shape: Shape,
    rule: Admissibility,
    colors: &mut Vec<Color>,
    labels: &mut Vec<Cell>,
    visit: &mut impl FnMut(&[Color], &[Cell]),
) {
    let b = colors.len();
    if b == parents.len() {
        visit(colors, labels);
        return;
    }
    let parent = parents[b].map(|p| (colors[p], labels[p]));
    for color in [1, 2] {
        let label = child_label(parent, color);
        if child_allowed(parent, color, label, shape, rule) {
            colors.push(color);
            labels.push(label);
            walk(parents, shape, rule, colors, labels, visit);
            colors.pop();
            labels.pop();
        }
    }
}

/// Every admissible colored partition of `{1..m}`.
pub fn enumerate_admissible(
    m: usize,
    shape: Shape,
    rule: Admissibility,
) -> Result<Vec<ColoredNCPartition>> {
    let mut out = Vec::new();
    for p in enumerate_nc(m)?.iter() {
        for_each_coloring(p, shape, rule, |colors, labels| {
            out.push(ColoredNCPartition {
                partition: p.clone(),
                coloring: colors.to_vec(),
                labels: labels.to_vec(),
            })
        });
    }
    Ok(out)
}
