//! Linear algebra over the coefficient field: dense row reduction and an
//! incremental sparse echelon basis.

use std::collections::BTreeMap;

use crate::algebra::field::{Field, Scalar};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = field.mul(v, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = field.sub(v, &field.mul(&factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<Scalar>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Basis of `{v : M v = 0}` for the matrix with the given rows and `ncols` columns.
pub fn nullspace(field: &Field, rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); ncols];
            v[fc] = field.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = field.neg(&row[fc]);
            }
            v
        })
        .collect()
}

pub type SparseVec = BTreeMap<usize, Scalar>;

/// An echelon basis of a subspace of `K^N`, kept sparse. Each stored row is
/// monic at its pivot (its smallest index).
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    field: Field,
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new(field: Field) -> Self {
        SparseEchelon {
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    fn axpy(&self, v: &mut SparseVec, factor: &Scalar, row: &SparseVec) {
        for (k, c) in row {
            let t = self.field.mul(factor, c);
            let e = v.entry(*k).or_insert_with(|| self.field.zero());
            *e = self.field.sub(e, &t);
            if e.is_zero() {
                v.remove(k);
            }
        }
    }

    /// Reduces `v` until its leading index is not a pivot.
    pub fn reduce_lead(&self, mut v: SparseVec) -> SparseVec {
        while let Some((&k, c)) = v.iter().next() {
            match self.rows.get(&k) {
                Some(row) => {
                    let factor = c.clone();
                    self.axpy(&mut v, &factor, row);
                }
                None => break,
            }
        }
        v
    }

    /// Eliminates every pivot index from `v`.
    pub fn reduce_full(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            match next {
                Some((k, c)) => {
                    let row = &self.rows[&k];
                    self.axpy(&mut v, &c, row);
                    cursor = k + 1;
                }
                None => return v,
            }
        }
    }

    /// Adds `v` to the span; returns the new pivot if the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let mut v = self.reduce_lead(v);
        let (&k, c) = v.iter().next()?;
        let inv = self.field.inv(c).expect("nonzero lead");
        for val in v.values_mut() {
            *val = self.field.mul(val, &inv);
        }
        self.rows.insert(k, v);
        Some(k)
    }
}
