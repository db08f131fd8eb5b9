//! Densities from Cauchy transforms of the semicircle/point-mass family.

use num::complex::Complex64;

use crate::cells::Cell;
use crate::error::{Error, Result};
use crate::moments::DistributionArray;
use crate::scalar::Coeff;

/// Sampling grid for a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub eps: f64,
}

impl DensityGrid {
    pub fn new(min: f64, max: f64, points: usize, eps: f64) -> Result<Self> {
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::InvalidParameter("eps must be positive".into()));
        }
        if min.is_nan() || max.is_nan() || min >= max || points < 2 {
            return Err(Error::InvalidParameter(
                "grid needs min < max and at least two points".into(),
            ));
        }
        Ok(DensityGrid {
            min,
            max,
            points,
            eps,
        })
    }

    pub fn xs(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| self.min + step * k as f64)
            .collect()
    }
}

/// `-Im G(x + i eps) / pi` on the grid.
pub fn stieltjes_density(
    g: impl Fn(Complex64) -> Complex64,
    grid: &DensityGrid,
) -> Vec<(f64, f64)> {
    grid.xs()
        .into_iter()
        .map(|x| (x, -g(Complex64::new(x, grid.eps)).im / std::f64::consts::PI))
        .collect()
}

/// A point mass of the measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Arrays whose diagonal cells are shifted semicircles (`R = m + a z`) and
/// whose off-diagonal cells are point masses (`R = b`). Their subordinate
/// transforms solve quadratics, so `G` has a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeixnerArray {
    /// `(shift, variance)` of the diagonal cells `(1,1)` and `(2,2)`.
    pub diagonal: [(f64, f64); 2],
    /// Point masses of `(1,2)` and `(2,1)`.
    pub off: [f64; 2],
}

impl MeixnerArray {
    /// Diagonal `R_{1,1} = a z`, `R_{2,2} = d z`, off-diagonal `R_{1,2} = b`,
    /// `R_{2,1} = c`.
    pub fn new(a: f64, d: f64, b: f64, c: f64) -> Result<Self> {
        let m = MeixnerArray {
            diagonal: [(0.0, a), (0.0, d)],
            off: [b, c],
        };
        m.validate()?;
        Ok(m)
    }

    /// Reads the family from an array, failing for laws outside it.
    pub fn from_array<T: Coeff>(array: &DistributionArray<T>) -> Result<Self> {
        let outside = |cell: Cell| {
            Error::InvalidParameter(format!("cell {cell} is not in the closed-form family"))
        };
        let mut diagonal = [(0.0, 0.0); 2];
        let mut off = [0.0; 2];
        for cell in array.shape().cells() {
            let keep = if cell.is_diagonal() { 2 } else { 1 };
            if (keep + 1..=array.cumulant_order()).any(|n| !array.r(cell, n).is_zero()) {
                return Err(outside(cell));
            }
            if cell.is_diagonal() {
                diagonal[cell.row as usize - 1] =
                    (array.r(cell, 1).to_f64(), array.r(cell, 2).to_f64());
            } else {
                off[cell.row as usize - 1] = array.r(cell, 1).to_f64();
            }
        }
        let m = MeixnerArray { diagonal, off };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.diagonal.iter().any(|&(_, a)| a.is_nan() || a < 0.0) {
            return Err(Error::InvalidParameter(
                "semicircle variance must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    // g_j solves g = 1/(z - s - a g), s = shift + point mass of (jbar, j)
    fn center(&self, j: usize) -> f64 {
        let partner = if j == 0 { self.off[1] } else { self.off[0] };
        self.diagonal[j].0 + partner
    }

    fn star(&self, j: usize, z: Complex64) -> Complex64 {
        let a = self.diagonal[j].1;
        let u = z - self.center(j);
        if a == 0.0 {
            return 1.0 / u;
        }
        let r = 2.0 * a.sqrt();
        // principal roots of both factors keep the cut on [-r, r] and the
        // root asymptotic to u
        (u - (u - r).sqrt() * (u + r).sqrt()) / (2.0 * a)
    }

    /// `G(z) = 1/(z - sum_j (m_j + a_j G*_{j,j}(z)))`.
    pub fn cauchy(&self, z: Complex64) -> Complex64 {
        1.0 / self.denominator(z)
    }

    fn denominator(&self, z: Complex64) -> Complex64 {
        let mut d = z;
        for j in 0..2 {
            d -= self.diagonal[j].0 + self.diagonal[j].1 * self.star(j, z);
        }
        d
    }

    /// Intervals where some subordinate transform has its cut.
    pub fn cuts(&self) -> Vec<(f64, f64)> {
        let mut cuts: Vec<(f64, f64)> = (0..2)
            .filter(|&j| self.diagonal[j].1 > 0.0)
            .map(|j| {
                let r = 2.0 * self.diagonal[j].1.sqrt();
                (self.center(j) - r, self.center(j) + r)
            })
            .collect();
        cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for c in cuts {
            match merged.last_mut() {
                Some(last) if c.0 <= last.1 => last.1 = last.1.max(c.1),
                _ => merged.push(c),
            }
        }
        merged
    }

    /// Boundary value of the density, `-Im G(x + i0) / pi`.
    pub fn density(&self, x: f64) -> f64 {
        (-self.cauchy(Complex64::new(x, 0.0)).im / std::f64::consts::PI).max(0.0)
    }

    /// Sampled density at height `eps` above the axis.
    pub fn sample(&self, grid: &DensityGrid) -> Vec<(f64, f64)> {
        stieltjes_density(|z| self.cauchy(z), grid)
    }

    /// Real zeros of the denominator off the cuts, with their residues.
    pub fn atoms(&self) -> Vec<Atom> {
        let cuts = self.cuts();
        let radius = 4.0
            + self.off.iter().map(|b| b.abs()).sum::<f64>()
            + self
                .diagonal
                .iter()
                .map(|&(m, a)| m.abs() + 2.0 * a.sqrt())
                .sum::<f64>();
        let inside = |x: f64| cuts.iter().any(|&(lo, hi)| x >= lo && x <= hi);
        let d = |x: f64| self.denominator(Complex64::new(x, 0.0)).re;
        let steps = 40_000;
        let h = 2.0 * radius / steps as f64;
        let mut out: Vec<Atom> = Vec::new();
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..=steps {
            let x = -radius + h * k as f64;
            if inside(x) {
                prev = None;
                continue;
            }
            let y = d(x);
            if let Some((px, py)) = prev {
                if py == 0.0 || py.signum() != y.signum() {
                    let root = bisect(&d, px, x);
                    if let Some(atom) = self.atom_at(root) {
                        if out.last().is_none_or(|a| (a.location - root).abs() > h) {
                            out.push(atom);
                        }
                    }
                }
            }
            prev = Some((x, y));
        }
        out
    }

    fn atom_at(&self, x: f64) -> Option<Atom> {
        // D'(x) = 1 - sum_j a_j g_j'(x), with g' = -g^2 / (1 - a g^2)
        let mut slope = 1.0;
        for j in 0..2 {
            let a = self.diagonal[j].1;
            let g = self.star(j, Complex64::new(x, 0.0)).re;
            slope -= a * (-g * g / (1.0 - a * g * g));
        }
        let weight = 1.0 / slope;
        (weight.is_finite() && weight > 1e-12).then_some(Atom {
            location: x,
            weight,
        })
    }

    /// `int x^n dmu`: quadrature over the cuts plus the atoms.
    pub fn moment(&self, n: u32) -> f64 {
        let nodes = 4000;
        let mut total = 0.0;
        for (lo, hi) in self.cuts() {
            let (c, r) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
            // x = c + r cos(theta), midpoint rule in theta
            let mut s = 0.0;
            for k in 0..nodes {
                let t = std::f64::consts::PI * (k as f64 + 0.5) / nodes as f64;
                let x = c + r * t.cos();
                s += self.density(x) * x.powi(n as i32) * r * t.sin();
            }
            total += s * std::f64::consts::PI / nodes as f64;
        }
        total
            + self
                .atoms()
                .iter()
                .map(|a| a.weight * a.location.powi(n as i32))
                .sum::<f64>()
    }

    /// Total mass, which should be one.
    pub fn mass(&self) -> f64 {
        self.moment(0)
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
