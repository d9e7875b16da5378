//! Uniform radial mesh on `[2M, L]`.

use crate::error::{Result, SolverError};

/// Uniform mesh of `cells` finite volumes covering `[2M, L]`.
///
/// Interfaces are indexed `0..=cells` (interface `i` is `r_{i-1/2}`), and
/// cell `i` spans interfaces `i` and `i + 1`. Indices outside the interior
/// are accepted by the accessors so ghost cells can be addressed with the
/// same spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    mass: f64,
    r_right: f64,
    cells: usize,
    dr: f64,
    faces: Vec<f64>,
    centers: Vec<f64>,
}

impl Grid {
    pub fn new(mass: f64, r_right: f64, cells: usize) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(SolverError::InvalidGrid(format!("mass must be positive, got {mass}")));
        }
        if !(r_right > 2.0 * mass) || !r_right.is_finite() {
            return Err(SolverError::InvalidGrid(format!(
                "right endpoint {r_right} must exceed the horizon radius {}",
                2.0 * mass
            )));
        }
        if cells < 3 {
            return Err(SolverError::InvalidGrid(format!("need at least 3 cells, got {cells}")));
        }
        let r_left = 2.0 * mass;
        let dr = (r_right - r_left) / cells as f64;
        let mut faces: Vec<f64> = (0..=cells).map(|i| r_left + i as f64 * dr).collect();
        faces[cells] = r_right;
        let centers = faces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        Ok(Self { mass, r_right, cells, dr, faces, centers })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn r_left(&self) -> f64 {
        2.0 * self.mass
    }

    pub fn r_right(&self) -> f64 {
        self.r_right
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    /// Radius of interface `i`, i.e. `r_{i-1/2}`.
    pub fn face(&self, i: isize) -> f64 {
        if (0..=self.cells as isize).contains(&i) {
            self.faces[i as usize]
        } else {
            self.r_left() + i as f64 * self.dr
        }
    }

    /// Center `r_i` of cell `i`.
    pub fn center(&self, i: isize) -> f64 {
        if (0..self.cells as isize).contains(&i) {
            self.centers[i as usize]
        } else {
            0.5 * (self.face(i) + self.face(i + 1))
        }
    }

    pub fn cell(&self, i: isize) -> Cell {
        Cell { left: self.face(i), right: self.face(i + 1), center: self.center(i) }
    }
}

/// One finite volume `[left, right]` with its midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub left: f64,
    pub right: f64,
    pub center: f64,
}

impl Cell {
    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    /// Nodes of the two-point Gauss rule on this cell.
    pub fn gauss_nodes(&self) -> [f64; 2] {
        let h = 0.5 * self.width();
        let s = (1.0f64 / 3.0).sqrt();
        [self.left + h * (1.0 - s), self.left + h * (1.0 + s)]
    }
}
