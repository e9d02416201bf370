//! Gaussian elimination over `F_q`.
//!
//! Pivoting is deterministic: columns are scanned left to right and the first
//! row at or below the current rank with a nonzero entry becomes the pivot.

use rand::Rng;

use crate::gf::{Fe, FieldContext};

/// All solutions of an inhomogeneous system: `particular + span(basis)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSpace {
    pub particular: Vec<Fe>,
    pub basis: Vec<Vec<Fe>>,
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// A uniformly random solution.
    pub fn sample<R: Rng + ?Sized>(&self, field: &FieldContext, rng: &mut R) -> Vec<Fe> {
        let mut z = self.particular.clone();
        for v in &self.basis {
            let c = Fe(rng.gen_range(0..field.order()));
            if c.is_zero() {
                continue;
            }
            for (zi, &vi) in z.iter_mut().zip(v) {
                *zi = field.add(*zi, field.mul(c, vi));
            }
        }
        z
    }
}

/// Row echelon data of a matrix after reduction to RREF.
struct Reduced {
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

/// `row[j] -= factor * pivot[j]` for `j >= from`.
#[inline]
fn eliminate(field: &FieldContext, row: &mut [Fe], pivot: &[Fe], factor: Fe, from: usize) {
    let neg = field.neg(factor);
    for (r, &p) in row[from..].iter_mut().zip(&pivot[from..]) {
        if !p.is_zero() {
            *r = field.add(*r, field.mul(neg, p));
        }
    }
}

fn rref(field: &FieldContext, mut rows: Vec<Vec<Fe>>, cols: usize) -> Reduced {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = field.inv(rows[rank][col]);
        for v in rows[rank][col..].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col];
                eliminate(field, row, &pivot_row, factor, col);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    Reduced { rows, pivots }
}

pub fn rank(field: &FieldContext, rows: &[Vec<Fe>], cols: usize) -> usize {
    rref(field, rows.to_vec(), cols).pivots.len()
}

/// Solves `A z = b`, or `None` when the system is inconsistent.
pub fn solve(field: &FieldContext, a: &[Vec<Fe>], b: &[Fe], cols: usize) -> Option<SolutionSpace> {
    assert_eq!(a.len(), b.len());
    let augmented: Vec<Vec<Fe>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            debug_assert_eq!(row.len(), cols);
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let reduced = rref(field, augmented, cols + 1);
    if reduced.pivots.last() == Some(&cols) {
        return None;
    }
    let mut particular = vec![Fe::ZERO; cols];
    for (row, &pc) in reduced.rows.iter().zip(&reduced.pivots) {
        particular[pc] = row[cols];
    }
    let mut is_pivot = vec![false; cols];
    for &pc in &reduced.pivots {
        is_pivot[pc] = true;
    }
    let basis = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Fe::ZERO; cols];
            v[free] = Fe::ONE;
            for (row, &pc) in reduced.rows.iter().zip(&reduced.pivots) {
                v[pc] = field.neg(row[free]);
            }
            v
        })
        .collect();
    Some(SolutionSpace { particular, basis })
}
