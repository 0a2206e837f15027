//! Grid-based indirect message delivery.
//!
//! PEs are laid out row-major on a logical grid with `round(sqrt(p))` columns.
//! A message from `(i, j)` to `(k, l)` travels along the row to the proxy
//! `(i, l)` and then along the column to its destination. When the proxy falls
//! into the missing part of a ragged last row, the last row is read as an
//! extra column appended to the right of the grid: PE `(r - 1, j)` takes the
//! virtual position `(j, cols)` and picks its proxy along virtual row `j`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::PeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoutingError {
    #[error("grid needs at least one PE")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPos {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridShape {
    pub p: usize,
    pub cols: usize,
    pub rows: usize,
}

/// Integer `floor(sqrt(p) + 1/2)`.
fn rounded_sqrt(p: usize) -> usize {
    let mut c = (p as f64).sqrt() as usize;
    while c * c > p {
        c -= 1;
    }
    while (c + 1) * (c + 1) <= p {
        c += 1;
    }
    // sqrt(p) + 1/2 >= c + 1  <=>  p >= c^2 + c + 1/4  <=>  p > c^2 + c
    if p > c * c + c {
        c + 1
    } else {
        c
    }
}

pub fn grid_shape(p: usize) -> Result<GridShape, RoutingError> {
    if p == 0 {
        return Err(RoutingError::Empty);
    }
    let cols = rounded_sqrt(p);
    Ok(GridShape {
        p,
        cols,
        rows: p.div_ceil(cols),
    })
}

impl GridShape {
    pub fn pos(&self, pe: PeId) -> GridPos {
        GridPos {
            row: pe / self.cols,
            col: pe % self.cols,
        }
    }

    pub fn pe_at(&self, row: usize, col: usize) -> Option<PeId> {
        let pe = row * self.cols + col;
        (col < self.cols && pe < self.p).then_some(pe)
    }

    /// Number of PEs in the last row.
    pub fn last_row_len(&self) -> usize {
        self.p - (self.rows - 1) * self.cols
    }

    pub fn proxy_of(&self, src: PeId, dst: PeId) -> PeId {
        let s = self.pos(src);
        let d = self.pos(dst);
        let proxy = match self.pe_at(s.row, d.col) {
            Some(pe) => pe,
            None => {
                // Only the last row can be ragged. Its column index becomes the
                // virtual row, and virtual rows are always full rows.
                debug_assert_eq!(s.row, self.rows - 1);
                self.pe_at(s.col, d.col)
                    .expect("virtual row of a transposed PE is a full row")
            }
        };
        if proxy == dst {
            dst
        } else {
            proxy
        }
    }

    /// Hops from `src` to `dst`; the last hop is always `dst`.
    pub fn route(&self, src: PeId, dst: PeId) -> Vec<PeId> {
        let proxy = self.proxy_of(src, dst);
        if proxy == src || proxy == dst {
            vec![dst]
        } else {
            vec![proxy, dst]
        }
    }

    /// First hop only, without allocating.
    pub fn next_hop(&self, src: PeId, dst: PeId) -> PeId {
        let proxy = self.proxy_of(src, dst);
        if proxy == src {
            dst
        } else {
            proxy
        }
    }
}

pub fn proxy_of(src: PeId, dst: PeId, shape: &GridShape) -> PeId {
    shape.proxy_of(src, dst)
}

pub fn route(src: PeId, dst: PeId, shape: &GridShape) -> Vec<PeId> {
    shape.route(src, dst)
}
