//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Two families of tools live here:
//!
//! * a dense [`Matrix`] with Gaussian elimination ([`solve_linear`],
//!   [`kernel`]) for small systems where every entry matters, and
//! * a sparse [`EchelonSpan`] keyed by an arbitrary ordered column type,
//!   used for span membership, span equality, and expressing elements as
//!   combinations of inserted generators.
//!
//! All elimination is deterministic: columns are processed in their given
//! order and pivots are chosen as the first nonzero candidate, so results
//! depend only on the input, never on iteration order of a hash map.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::{rat_one, Rat};

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, rat_one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j).clone();
                        out.set(i, j, cur + a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn plus(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn minus(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn scaled(&self, c: &Rat) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut t = Rat::zero();
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let t = a.get(pivot, j).clone();
                    a.set(pivot, j, a.get(col, j).clone());
                    a.set(col, j, t);
                    let t = inv.get(pivot, j).clone();
                    inv.set(pivot, j, inv.get(col, j).clone());
                    inv.set(col, j, t);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &p);
                inv.set(col, j, inv.get(col, j) / &p);
            }
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    for j in 0..n {
                        let v = a.get(r, j) - &f * a.get(col, j);
                        a.set(r, j, v);
                        let v = inv.get(r, j) - &f * inv.get(col, j);
                        inv.set(r, j, v);
                    }
                }
            }
        }
        Some(inv)
    }
}

/// Reduced row echelon form in place; returns the pivot column of each
/// surviving row.  Column order is fixed (left to right), pivot = first
/// row with a nonzero entry.
fn rref(m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row >= m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..m.cols {
                let t = m.get(p, j).clone();
                m.set(p, j, m.get(row, j).clone());
                m.set(row, j, t);
            }
        }
        let lead = m.get(row, col).clone();
        for j in col..m.cols {
            m.set(row, j, m.get(row, j) / &lead);
        }
        for r in 0..m.rows {
            if r != row && !m.get(r, col).is_zero() {
                let f = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = m.get(r, j) - &f * m.get(row, j);
                    m.set(r, j, v);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Solves `m · x = rhs` exactly.  Free variables are set to zero, so the
/// answer is deterministic; `None` means the system is inconsistent.
pub fn solve_linear(m: &Matrix, rhs: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(m.rows, rhs.len(), "rhs length mismatch");
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, rhs[i].clone());
    }
    let pivots = rref(&mut aug);
    // A pivot in the augmented column marks 0 = 1.
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); m.cols];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug.get(row, m.cols).clone();
    }
    Some(x)
}

/// Echelonized basis of the right null space `{x : m·x = 0}`.
pub fn kernel(m: &Matrix) -> Vec<Vec<Rat>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; m.cols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_set[free] {
            continue;
        }
        let mut x = vec![Rat::zero(); m.cols];
        x[free] = rat_one();
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = -a.get(row, free).clone();
        }
        basis.push(x);
    }
    basis
}

/// Sparse vector keyed by an ordered column type; zero entries are never
/// stored.
pub type SparseVec<K> = BTreeMap<K, Rat>;

pub fn sparse_from_dense(v: &[Rat]) -> SparseVec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec<usize>, len: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); len];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

fn sparse_axpy<K: Ord + Clone>(target: &mut SparseVec<K>, coeff: &Rat, source: &SparseVec<K>) {
    for (k, v) in source {
        let delta = coeff * v;
        match target.get_mut(k) {
            Some(entry) => {
                *entry += delta;
                if entry.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    target.insert(k.clone(), delta);
                }
            }
        }
    }
}

/// A subspace maintained in reduced echelon form over sparse vectors.
///
/// Rows are kept fully reduced with pivot coefficient 1 and strictly
/// increasing pivot keys, so the stored basis is the *unique* reduced
/// echelon basis of the span: two spans are equal iff their row lists are
/// equal.  Optionally tracks, for every basis row, its expression as a
/// combination of the vectors handed to [`EchelonSpan::insert`], which is
/// how membership certificates ("this element = Σ cᵢ·generatorᵢ") are
/// produced throughout the crate.
#[derive(Debug, Clone)]
pub struct EchelonSpan<K: Ord + Clone> {
    rows: Vec<SparseVec<K>>,
    combos: Option<Vec<SparseVec<usize>>>,
    inserted: usize,
}

impl<K: Ord + Clone> EchelonSpan<K> {
    pub fn new() -> Self {
        EchelonSpan {
            rows: Vec::new(),
            combos: None,
            inserted: 0,
        }
    }

    /// Like `new`, but every basis row remembers how it arose from the
    /// inserted generators.
    pub fn new_tracked() -> Self {
        EchelonSpan {
            rows: Vec::new(),
            combos: Some(Vec::new()),
            inserted: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    pub fn generators_seen(&self) -> usize {
        self.inserted
    }

    fn pivot(row: &SparseVec<K>) -> &K {
        row.keys().next().expect("empty row has no pivot")
    }

    /// Reduces `v` against the current basis.  Returns the residual and,
    /// when tracking, the combination of basis rows that was subtracted.
    fn reduce_internal(&self, v: SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut residual = v;
        let mut used: SparseVec<usize> = BTreeMap::new();
        // Rows are sorted by pivot; one pass suffices because each row's
        // pivot key cannot reappear after subtraction (full reduction).
        for (idx, row) in self.rows.iter().enumerate() {
            if residual.is_empty() {
                break;
            }
            let p = Self::pivot(row);
            if let Some(c) = residual.get(p).cloned() {
                let neg = -c.clone();
                sparse_axpy(&mut residual, &neg, row);
                used.insert(idx, c);
            }
        }
        (residual, used)
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        self.reduce_internal(v.clone()).0
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce_internal(v.clone()).0.is_empty()
    }

    /// Inserts a generator; returns `true` when the rank grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let gen_index = self.inserted;
        self.inserted += 1;
        let (mut residual, used) = self.reduce_internal(v);
        if residual.is_empty() {
            return false;
        }
        // Combination giving `residual` in terms of generators.
        let mut combo: SparseVec<usize> = BTreeMap::new();
        if let Some(track) = &self.combos {
            combo.insert(gen_index, rat_one());
            for (row_idx, c) in &used {
                let neg = -c.clone();
                sparse_axpy(&mut combo, &neg, &track[*row_idx]);
            }
        }
        // Normalize pivot to 1.
        let lead = Self::pivot(&residual).clone();
        let lead_coeff = residual.get(&lead).unwrap().clone();
        if !lead_coeff.is_one() {
            for val in residual.values_mut() {
                *val /= &lead_coeff;
            }
            if self.combos.is_some() {
                for val in combo.values_mut() {
                    *val /= &lead_coeff;
                }
            }
        }
        // Back-substitute into existing rows to keep full reduction.
        for idx in 0..self.rows.len() {
            let coeff = self.rows[idx].get(&lead).cloned();
            if let Some(c) = coeff {
                let neg = -c;
                sparse_axpy(&mut self.rows[idx], &neg, &residual);
                if let Some(track) = &mut self.combos {
                    let row_combo = combo.clone();
                    sparse_axpy(&mut track[idx], &neg, &row_combo);
                }
            }
        }
        // Insert keeping rows sorted by pivot key.
        let pos = self
            .rows
            .binary_search_by(|row| Self::pivot(row).cmp(&lead))
            .unwrap_err();
        self.rows.insert(pos, residual);
        if let Some(track) = &mut self.combos {
            track.insert(pos, combo);
        }
        true
    }

    /// Expresses `v` as a combination of the inserted generators.
    /// Requires tracking; `None` when `v` is outside the span.
    pub fn express(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let track = self
            .combos
            .as_ref()
            .expect("express() requires a tracked span");
        let (residual, used) = self.reduce_internal(v.clone());
        if !residual.is_empty() {
            return None;
        }
        let mut combo: SparseVec<usize> = BTreeMap::new();
        for (row_idx, c) in &used {
            sparse_axpy(&mut combo, c, &track[*row_idx]);
        }
        Some(combo)
    }

    /// Spans are equal iff the reduced echelon bases coincide.
    pub fn same_span(&self, other: &EchelonSpan<K>) -> bool {
        self.rows == other.rows
    }

    pub fn contains_span(&self, other: &EchelonSpan<K>) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

impl<K: Ord + Clone> Default for EchelonSpan<K> {
    fn default() -> Self {
        Self::new()
    }
}

/// Intersection of two spans over the same key space, computed from the
/// kernel of the stacked coefficient matrix.
pub fn span_intersection<K: Ord + Clone>(
    a: &EchelonSpan<K>,
    b: &EchelonSpan<K>,
) -> EchelonSpan<K> {
    let mut keys: Vec<K> = Vec::new();
    for row in a.rows().iter().chain(b.rows()) {
        for k in row.keys() {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    keys.sort();
    let key_index = |k: &K| keys.binary_search(k).unwrap();
    let (na, nb) = (a.dim(), b.dim());
    // Columns: coefficients on a's rows, then on b's rows; rows: keys.
    // Kernel vectors give Σ x·aᵢ = Σ y·bⱼ, i.e. intersection elements.
    let mut m = Matrix::zeros(keys.len(), na + nb);
    for (i, row) in a.rows().iter().enumerate() {
        for (k, v) in row {
            m.set(key_index(k), i, v.clone());
        }
    }
    for (j, row) in b.rows().iter().enumerate() {
        for (k, v) in row {
            m.set(key_index(k), na + j, -v.clone());
        }
    }
    let mut out = EchelonSpan::new();
    for null in kernel(&m) {
        let mut vec: SparseVec<K> = BTreeMap::new();
        for (i, row) in a.rows().iter().enumerate() {
            if !null[i].is_zero() {
                sparse_axpy(&mut vec, &null[i], row);
            }
        }
        out.insert(vec);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    }

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn solve_underdetermined_sets_free_vars_to_zero() {
        let sol = solve_linear(&m(&[&[1, 1]]), &v(&[2])).unwrap();
        assert_eq!(sol, v(&[2, 0]));
    }

    #[test]
    fn solve_detects_inconsistency() {
        assert!(solve_linear(&m(&[&[1, 1], &[1, 1]]), &v(&[1, 2])).is_none());
    }

    #[test]
    fn solve_verifies() {
        let a = m(&[&[2, 1, -1], &[-3, -1, 2], &[-2, 1, 2]]);
        let sol = solve_linear(&a, &v(&[8, -11, -3])).unwrap();
        assert_eq!(a.mul_vec(&sol), v(&[8, -11, -3]));
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let basis = kernel(&a);
        assert_eq!(basis.len(), 2);
        for x in &basis {
            assert!(a.mul_vec(x).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn inverse_round_trips() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn echelon_span_is_insert_order_independent() {
        let vecs: Vec<SparseVec<usize>> = vec![
            sparse_from_dense(&v(&[1, 2, 0])),
            sparse_from_dense(&v(&[0, 1, 1])),
            sparse_from_dense(&v(&[1, 3, 1])),
        ];
        let mut s1 = EchelonSpan::new();
        let mut s2 = EchelonSpan::new();
        for x in &vecs {
            s1.insert(x.clone());
        }
        for x in vecs.iter().rev() {
            s2.insert(x.clone());
        }
        assert_eq!(s1.dim(), 2);
        assert!(s1.same_span(&s2));
    }

    #[test]
    fn tracked_combination_reconstructs_element() {
        let gens: Vec<SparseVec<usize>> = vec![
            sparse_from_dense(&v(&[1, 1, 0])),
            sparse_from_dense(&v(&[0, 1, 1])),
            sparse_from_dense(&v(&[1, 0, 0])),
        ];
        let mut span = EchelonSpan::new_tracked();
        for g in &gens {
            span.insert(g.clone());
        }
        let target = sparse_from_dense(&v(&[2, 1, 1]));
        let combo = span.express(&target).unwrap();
        let mut rebuilt: SparseVec<usize> = BTreeMap::new();
        for (gi, c) in &combo {
            sparse_axpy(&mut rebuilt, c, &gens[*gi]);
        }
        assert_eq!(rebuilt, target);
    }

    #[test]
    fn intersection_of_plane_and_plane_is_line() {
        // span{e1,e2} ∩ span{e2,e3} = span{e2}
        let mut a = EchelonSpan::new();
        a.insert(sparse_from_dense(&v(&[1, 0, 0])));
        a.insert(sparse_from_dense(&v(&[0, 1, 0])));
        let mut b = EchelonSpan::new();
        b.insert(sparse_from_dense(&v(&[0, 1, 0])));
        b.insert(sparse_from_dense(&v(&[0, 0, 1])));
        let i = span_intersection(&a, &b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&sparse_from_dense(&v(&[0, 1, 0]))));
    }
}
