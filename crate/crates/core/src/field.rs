//! n-dimensional arrays of color indices.

use thiserror::Error;

use crate::params::{GridParams, ParamsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("expected {expected} cells, got {actual}")]
    CellCount { expected: usize, actual: usize },
    #[error("cell {cell:?} holds color {color}, but only 0..={m} are allowed")]
    ColorOutOfRange { cell: Vec<u64>, color: u32, m: u32 },
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// Color index per lattice cell: `0` is background, `j` in `1..=m` puts the
/// cell in `S_j`. One index per cell keeps the color classes disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorField {
    params: GridParams,
    cells: Vec<u32>,
}

impl ColorField {
    /// All-background field.
    pub fn empty(params: GridParams) -> Self {
        let cells = vec![0; params.cell_count()];
        ColorField { params, cells }
    }

    /// Builds a field from row-major cell values (`m_1` slowest).
    pub fn from_cells(params: GridParams, cells: Vec<u32>) -> Result<Self, FieldError> {
        if cells.len() != params.cell_count() {
            return Err(FieldError::CellCount {
                expected: params.cell_count(),
                actual: cells.len(),
            });
        }
        if let Some(i) = cells.iter().position(|&c| c > params.m()) {
            return Err(FieldError::ColorOutOfRange {
                cell: params.cell_at(i),
                color: cells[i],
                m: params.m(),
            });
        }
        Ok(ColorField { params, cells })
    }

    pub(crate) fn from_cells_unchecked(params: GridParams, cells: Vec<u32>) -> Self {
        debug_assert_eq!(cells.len(), params.cell_count());
        ColorField { params, cells }
    }

    pub fn params(&self) -> &GridParams {
        &self.params
    }

    /// Row-major cell values.
    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn get(&self, cell: &[u64]) -> Result<u32, FieldError> {
        self.params.check_cell(cell)?;
        Ok(self.cells[self.params.linear_index(cell)])
    }

    pub fn set(&mut self, cell: &[u64], color: u32) -> Result<(), FieldError> {
        self.params.check_cell(cell)?;
        if color > self.params.m() {
            return Err(FieldError::ColorOutOfRange {
                cell: cell.to_vec(),
                color,
                m: self.params.m(),
            });
        }
        let i = self.params.linear_index(cell);
        self.cells[i] = color;
        Ok(())
    }

    /// Painted cells with their colors, in storage order.
    pub fn painted(&self) -> impl Iterator<Item = (Vec<u64>, u32)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.params.cell_at(i), c))
    }

    /// The color classes `S_1..S_m`; entry `j - 1` lists the cells of `S_j`.
    pub fn color_sets(&self) -> Vec<Vec<Vec<u64>>> {
        let mut sets = vec![Vec::new(); self.params.m() as usize];
        for (cell, color) in self.painted() {
            sets[color as usize - 1].push(cell);
        }
        sets
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|&c| c == 0)
    }
}
