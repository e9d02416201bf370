//! Affine embeddings `T: F_q^k -> F_q^n` and restrictions `f∘T`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::linalg;
use crate::oracle::{Answer, QueryAccess};
use crate::poly::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("cannot embed dimension {k} into dimension {n}")]
    DimensionTooLarge { n: usize, k: usize },
    #[error("oracle arity {oracle} does not match map codomain {map}")]
    Arity { oracle: usize, map: usize },
}

/// How affine maps are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AffineSampling {
    /// Every matrix entry and offset coordinate uniform, rank-deficient maps included.
    #[default]
    Uniform,
    /// Uniform over maps whose linear part has full column rank.
    Injective,
}

/// `x -> A x + b` with `A` an `n x k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    field: Field,
    n: usize,
    k: usize,
    /// row-major, `n` rows of `k`
    matrix: Vec<Fe>,
    offset: Vec<Fe>,
}

impl AffineMap {
    pub fn new(field: Field, n: usize, k: usize, matrix: Vec<Fe>, offset: Vec<Fe>) -> Self {
        assert_eq!(matrix.len(), n * k);
        assert_eq!(offset.len(), n);
        AffineMap { field, n, k, matrix, offset }
    }

    /// `x -> (x_1, .., x_k, 0, .., 0)`.
    pub fn identity_embedding(field: Field, n: usize, k: usize) -> Result<Self, SpaceError> {
        if k > n {
            return Err(SpaceError::DimensionTooLarge { n, k });
        }
        let mut matrix = vec![Fe::ZERO; n * k];
        for i in 0..k {
            matrix[i * k + i] = Fe::ONE;
        }
        Ok(AffineMap { field, n, k, matrix, offset: vec![Fe::ZERO; n] })
    }

    pub fn sample<R: Rng + ?Sized>(
        field: Field,
        n: usize,
        k: usize,
        sampling: AffineSampling,
        rng: &mut R,
    ) -> Result<Self, SpaceError> {
        if k > n || k == 0 {
            return Err(SpaceError::DimensionTooLarge { n, k });
        }
        let q = field.order();
        loop {
            let matrix: Vec<Fe> = (0..n * k).map(|_| Fe(rng.gen_range(0..q))).collect();
            let offset: Vec<Fe> = (0..n).map(|_| Fe(rng.gen_range(0..q))).collect();
            let map = AffineMap { field: field.clone(), n, k, matrix, offset };
            if sampling == AffineSampling::Uniform || map.is_injective() {
                return Ok(map);
            }
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.k)
    }

    pub fn offset(&self) -> &[Fe] {
        &self.offset
    }

    pub fn entry(&self, row: usize, col: usize) -> Fe {
        self.matrix[row * self.k + col]
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Fe>> = self.matrix.chunks(self.k).map(|r| r.to_vec()).collect();
        linalg::rank(&self.field, &rows, self.k)
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.k
    }

    pub fn apply(&self, x: &[Fe]) -> Point {
        let mut out = vec![Fe::ZERO; self.n];
        self.apply_into(x, &mut out);
        out
    }

    pub fn apply_into(&self, x: &[Fe], out: &mut [Fe]) {
        debug_assert_eq!(x.len(), self.k);
        let f = &self.field;
        for (i, slot) in out.iter_mut().enumerate() {
            let row = &self.matrix[i * self.k..(i + 1) * self.k];
            *slot = row
                .iter()
                .zip(x)
                .fold(self.offset[i], |acc, (&a, &xi)| f.add(acc, f.mul(a, xi)));
        }
    }
}

pub fn sample_affine<R: Rng + ?Sized>(
    field: Field,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<AffineMap, SpaceError> {
    AffineMap::sample(field, n, k, AffineSampling::Uniform, rng)
}

/// `f∘T`: every query at `x` becomes exactly one query at `T(x)`.
pub struct Restriction<'a, O: QueryAccess + ?Sized> {
    oracle: &'a mut O,
    map: &'a AffineMap,
}

pub fn restrict<'a, O: QueryAccess + ?Sized>(
    oracle: &'a mut O,
    map: &'a AffineMap,
) -> Result<Restriction<'a, O>, SpaceError> {
    if oracle.arity() != map.n {
        return Err(SpaceError::Arity { oracle: oracle.arity(), map: map.n });
    }
    Ok(Restriction { oracle, map })
}

impl<O: QueryAccess + ?Sized> QueryAccess for Restriction<'_, O> {
    fn field(&self) -> &Field {
        self.oracle.field()
    }

    fn arity(&self) -> usize {
        self.map.k
    }

    fn query(&mut self, x: &[Fe]) -> Answer {
        let y = self.map.apply(x);
        self.oracle.query(&y)
    }
}
