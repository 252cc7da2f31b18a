//! Finite-dimensional associative algebras over the rationals, presented by
//! structure constants on an explicit basis.
//!
//! The multiplication table is the whole story: `table[i][j]` holds the
//! coordinates of `bᵢ·bⱼ`.  A declared unit is optional — several algebras
//! in this crate (zero pairings, degenerate examples) have none.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{kernel, solve_linear, sparse_from_dense, EchelonSpan, Matrix};
use crate::rational::{rat_one, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealSide {
    Left,
    Right,
    TwoSided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdAlgebra {
    pub dim: usize,
    /// `table[i][j]` = coordinates of the product of basis elements i and j.
    table: Vec<Vec<Vec<Rat>>>,
    pub unit: Option<Vec<Rat>>,
}

impl FdAlgebra {
    pub fn new(dim: usize, table: Vec<Vec<Vec<Rat>>>, unit: Option<Vec<Rat>>) -> Result<Self> {
        if table.len() != dim
            || table.iter().any(|row| row.len() != dim)
            || table
                .iter()
                .any(|row| row.iter().any(|entry| entry.len() != dim))
        {
            return Err(Error::input("multiplication table shape mismatch"));
        }
        if let Some(u) = &unit {
            if u.len() != dim {
                return Err(Error::input("unit vector has wrong dimension"));
            }
        }
        Ok(FdAlgebra { dim, table, unit })
    }

    /// The rationals as a one-dimensional algebra.
    pub fn field() -> Self {
        FdAlgebra {
            dim: 1,
            table: vec![vec![vec![rat_one()]]],
            unit: Some(vec![rat_one()]),
        }
    }

    /// Product of `n` copies of the rationals (orthogonal idempotent basis).
    pub fn diagonal(n: usize) -> Self {
        let mut table = vec![vec![vec![Rat::zero(); n]; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            row[i][i] = rat_one();
        }
        FdAlgebra {
            dim: n,
            table,
            unit: Some(vec![rat_one(); n]),
        }
    }

    /// Full matrix algebra on n×n matrices; basis = matrix units E(i,j) in
    /// row-major order.
    pub fn matrix_algebra(n: usize) -> Self {
        let dim = n * n;
        let idx = |i: usize, j: usize| i * n + j;
        let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        if j == k {
                            table[idx(i, j)][idx(k, l)][idx(i, l)] = rat_one();
                        }
                    }
                }
            }
        }
        let mut unit = vec![Rat::zero(); dim];
        for i in 0..n {
            unit[idx(i, i)] = rat_one();
        }
        FdAlgebra {
            dim,
            table,
            unit: Some(unit),
        }
    }

    /// Upper-triangular 2×2 matrices; basis E(1,1), E(1,2), E(2,2).
    pub fn upper_triangular2() -> Self {
        let mut table = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        table[0][0][0] = rat_one(); // E11·E11 = E11
        table[0][1][1] = rat_one(); // E11·E12 = E12
        table[1][2][1] = rat_one(); // E12·E22 = E12
        table[2][2][2] = rat_one(); // E22·E22 = E22
        let mut unit = vec![Rat::zero(); 3];
        unit[0] = rat_one();
        unit[2] = rat_one();
        FdAlgebra {
            dim: 3,
            table,
            unit: Some(unit),
        }
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[Rat] {
        &self.table[i][j]
    }

    pub fn zero_vec(&self) -> Vec<Rat> {
        vec![Rat::zero(); self.dim]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Rat> {
        let mut v = self.zero_vec();
        v[i] = rat_one();
        v
    }

    pub fn mul_vec(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = self.zero_vec();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &c * t;
                    }
                }
            }
        }
        out
    }

    /// Checks associativity on all basis triples and, when a unit is
    /// declared, its two-sided identity law.  The first violation is
    /// reported with the offending basis indices.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.table[i][j].clone();
                for k in 0..self.dim {
                    let left = self.mul_vec(&ij, &self.basis_vec(k));
                    let right = self.mul_vec(&self.basis_vec(i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::input(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        if let Some(u) = self.unit.clone() {
            for i in 0..self.dim {
                let b = self.basis_vec(i);
                if self.mul_vec(&u, &b) != b || self.mul_vec(&b, &u) != b {
                    return Err(Error::input(format!(
                        "declared unit is not an identity on basis element {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest subspace containing `generators` and closed under
    /// multiplication by basis elements on the requested side(s), computed
    /// as a fixpoint.  Returns the reduced echelon basis of that ideal.
    pub fn ideal_closure(&self, generators: &[Vec<Rat>], side: IdealSide) -> EchelonSpan<usize> {
        let mut span = EchelonSpan::new();
        for g in generators {
            assert_eq!(g.len(), self.dim, "generator dimension mismatch");
            span.insert(sparse_from_dense(g));
        }
        loop {
            let snapshot: Vec<Vec<Rat>> = span
                .rows()
                .iter()
                .map(|r| crate::linalg::sparse_to_dense(r, self.dim))
                .collect();
            let mut grew = false;
            for x in &snapshot {
                for i in 0..self.dim {
                    let b = self.basis_vec(i);
                    if matches!(side, IdealSide::Left | IdealSide::TwoSided)
                        && span.insert(sparse_from_dense(&self.mul_vec(&b, x)))
                    {
                        grew = true;
                    }
                    if matches!(side, IdealSide::Right | IdealSide::TwoSided)
                        && span.insert(sparse_from_dense(&self.mul_vec(x, &b)))
                    {
                        grew = true;
                    }
                }
            }
            if !grew {
                return span;
            }
        }
    }

    /// Two-sided identity element of the subspace spanned by `ideal_basis`,
    /// if one exists.  The input must actually be a two-sided ideal; a
    /// violating product is reported otherwise.  The zero ideal has unit 0.
    pub fn unit_of_ideal(&self, ideal_basis: &[Vec<Rat>]) -> Result<Option<Vec<Rat>>> {
        let mut span = EchelonSpan::new();
        for v in ideal_basis {
            assert_eq!(v.len(), self.dim, "ideal basis dimension mismatch");
            span.insert(sparse_from_dense(v));
        }
        for (vi, v) in ideal_basis.iter().enumerate() {
            for i in 0..self.dim {
                let b = self.basis_vec(i);
                let left = self.mul_vec(&b, v);
                if !span.contains(&sparse_from_dense(&left)) {
                    return Err(Error::input(format!(
                        "not an ideal: basis[{i}]·gen[{vi}] escapes the span"
                    )));
                }
                let right = self.mul_vec(v, &b);
                if !span.contains(&sparse_from_dense(&right)) {
                    return Err(Error::input(format!(
                        "not an ideal: gen[{vi}]·basis[{i}] escapes the span"
                    )));
                }
            }
        }
        if ideal_basis.is_empty() || span.dim() == 0 {
            return Ok(Some(self.zero_vec()));
        }
        let k = ideal_basis.len();
        // Unknowns: coefficients of u = Σ c·genₖ.  Equations: u·gⱼ = gⱼ and
        // gⱼ·u = gⱼ, coordinatewise.
        let mut eq_rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        for g in ideal_basis {
            let mut left_cols: Vec<Vec<Rat>> = Vec::with_capacity(k);
            let mut right_cols: Vec<Vec<Rat>> = Vec::with_capacity(k);
            for c in ideal_basis {
                left_cols.push(self.mul_vec(c, g));
                right_cols.push(self.mul_vec(g, c));
            }
            for coord in 0..self.dim {
                eq_rows.push((0..k).map(|c| left_cols[c][coord].clone()).collect());
                rhs.push(g[coord].clone());
                eq_rows.push((0..k).map(|c| right_cols[c][coord].clone()).collect());
                rhs.push(g[coord].clone());
            }
        }
        let m = Matrix::from_rows(eq_rows);
        Ok(solve_linear(&m, &rhs).map(|coeffs| {
            let mut u = self.zero_vec();
            for (c, g) in coeffs.iter().zip(ideal_basis) {
                for (ui, gi) in u.iter_mut().zip(g) {
                    *ui += c * gi;
                }
            }
            u
        }))
    }

    /// Matrix of left multiplication by `x` on the algebra itself.
    pub fn left_regular(&self, x: &[Rat]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul_vec(x, &self.basis_vec(j));
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Basis of `{x : trace(L_(a·x)) = 0 for all basis a}` — the radical in
    /// characteristic zero.  Exposed so tests can cross-examine it.
    pub fn radical_candidates(&self) -> Vec<Vec<Rat>> {
        // Bilinear form B[i][j] = trace(L_(bᵢ·bⱼ)); radical = right kernel.
        let mut form = Matrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                form.set(i, j, self.left_regular(&self.table[i][j]).trace());
            }
        }
        kernel(&form)
    }

    /// True iff the algebra has no nonzero nilpotent ideal.
    pub fn is_semiprime(&self) -> bool {
        self.radical_candidates().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn stock_algebras_validate() {
        for alg in [
            FdAlgebra::field(),
            FdAlgebra::diagonal(2),
            FdAlgebra::matrix_algebra(2),
            FdAlgebra::upper_triangular2(),
        ] {
            alg.validate().unwrap();
        }
    }

    #[test]
    fn validate_rejects_broken_unit() {
        let mut alg = FdAlgebra::diagonal(2);
        alg.unit = Some(vec![rat_one(), Rat::zero()]);
        assert!(alg.validate().is_err());
    }

    #[test]
    fn validate_rejects_nonassociative_table() {
        // b0·b0 = b1, b0·b1 = b0, everything else zero: (b0b0)b0 = b0 but
        // b0(b0b0) = b0·b1 = b0 — need a sharper break: set b1·b0 = b1.
        let mut table = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        table[0][0][1] = rat_one();
        table[0][1][0] = rat_one();
        table[1][0][1] = rat_one();
        let alg = FdAlgebra::new(2, table, None).unwrap();
        assert!(alg.validate().is_err());
    }

    #[test]
    fn matrix_units_multiply_correctly() {
        let alg = FdAlgebra::matrix_algebra(2);
        // E12·E21 = E11, E21·E12 = E22, E12·E12 = 0
        assert_eq!(alg.mul_vec(&alg.basis_vec(1), &alg.basis_vec(2)), alg.basis_vec(0));
        assert_eq!(alg.mul_vec(&alg.basis_vec(2), &alg.basis_vec(1)), alg.basis_vec(3));
        assert!(alg
            .mul_vec(&alg.basis_vec(1), &alg.basis_vec(1))
            .iter()
            .all(Rat::is_zero));
    }

    #[test]
    fn closure_grows_one_sided_to_two_sided() {
        let alg = FdAlgebra::matrix_algebra(2);
        // E11 generates the left ideal of first-column matrices (dim 2) but
        // the two-sided ideal is everything.
        let gens = vec![alg.basis_vec(0)];
        assert_eq!(alg.ideal_closure(&gens, IdealSide::Left).dim(), 2);
        assert_eq!(alg.ideal_closure(&gens, IdealSide::TwoSided).dim(), 4);
    }

    #[test]
    fn closure_is_monotone_and_idempotent() {
        let alg = FdAlgebra::upper_triangular2();
        let gens = vec![alg.basis_vec(1)];
        let once = alg.ideal_closure(&gens, IdealSide::TwoSided);
        let basis: Vec<Vec<Rat>> = once
            .rows()
            .iter()
            .map(|r| crate::linalg::sparse_to_dense(r, alg.dim))
            .collect();
        let twice = alg.ideal_closure(&basis, IdealSide::TwoSided);
        assert!(once.same_span(&twice));
        for g in &gens {
            assert!(once.contains(&sparse_from_dense(g)));
        }
    }

    #[test]
    fn unit_of_ideal_examples() {
        let ut = FdAlgebra::upper_triangular2();
        // span{E12} is a two-sided ideal with no unit.
        assert_eq!(ut.unit_of_ideal(&[ut.basis_vec(1)]).unwrap(), None);
        // The diagonal piece span{e1} of Q×Q has unit e1.
        let d = FdAlgebra::diagonal(2);
        assert_eq!(
            d.unit_of_ideal(&[d.basis_vec(0)]).unwrap(),
            Some(d.basis_vec(0))
        );
        // Zero ideal: unit is the zero element.
        assert_eq!(d.unit_of_ideal(&[]).unwrap(), Some(d.zero_vec()));
        // Not an ideal at all: E11 inside M2 is rejected.
        let m2 = FdAlgebra::matrix_algebra(2);
        assert!(m2.unit_of_ideal(&[m2.basis_vec(0)]).is_err());
    }

    #[test]
    fn unit_of_whole_algebra_is_declared_unit() {
        let alg = FdAlgebra::matrix_algebra(2);
        let basis: Vec<Vec<Rat>> = (0..4).map(|i| alg.basis_vec(i)).collect();
        assert_eq!(alg.unit_of_ideal(&basis).unwrap(), alg.unit);
    }

    #[test]
    fn semiprimeness_matches_wedderburn_expectations() {
        assert!(FdAlgebra::field().is_semiprime());
        assert!(FdAlgebra::diagonal(3).is_semiprime());
        assert!(FdAlgebra::matrix_algebra(2).is_semiprime());
        assert!(!FdAlgebra::upper_triangular2().is_semiprime());
    }

    #[test]
    fn radical_of_triangular_algebra_is_strictly_upper_part() {
        let ut = FdAlgebra::upper_triangular2();
        let rad = ut.radical_candidates();
        assert_eq!(rad.len(), 1);
        assert_eq!(rad[0], vec![rat_int(0), rat_int(1), rat_int(0)]);
    }
}
