//! Balanced tensor products and iterated tensor powers of a system.
//!
//! The balanced tensor of two bimodules is computed as an explicit
//! quotient: span the balancing relations `(a·r)⊗b − a⊗(r·b)` inside the
//! plain tensor space, take the complement of the pivot coordinates as
//! the quotient basis, and carry projection/section matrices so elements
//! can be moved between the plain and quotient pictures exactly.

use num_traits::Zero;

use super::{validate_system, FdBimodule, RSystem, SystemLabels};
use crate::error::{Error, Result};
use crate::fdalg::FdAlgebra;
use crate::linalg::{EchelonSpan, Matrix, SparseVec};
use crate::rational::{rat_one, Rat};

/// A balanced tensor product presented as a quotient of the plain
/// tensor space of the two factor bases.
#[derive(Debug, Clone)]
pub struct TensorSpace {
    pub left_dim: usize,
    pub right_dim: usize,
    /// Dimension of the quotient.
    pub dim: usize,
    /// Plain index of each quotient basis vector (a pure tensor).
    pub basis_plain: Vec<usize>,
    /// Quotient coordinates of each plain basis vector; `dim × plain`.
    pub projection: Matrix,
    /// Plain representative of each quotient basis vector; `plain × dim`.
    pub section: Matrix,
}

impl TensorSpace {
    pub fn plain_dim(&self) -> usize {
        self.left_dim * self.right_dim
    }

    pub fn plain_index(&self, i: usize, j: usize) -> usize {
        i * self.right_dim + j
    }

    pub fn project_plain(&self, plain: &[Rat]) -> Vec<Rat> {
        self.projection.mul_vec(plain)
    }

    /// Quotient coordinates of the pure tensor a ⊗ b.
    pub fn project_pair(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut plain = vec![Rat::zero(); self.plain_dim()];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    plain[self.plain_index(i, j)] = ai * bj;
                }
            }
        }
        self.project_plain(&plain)
    }

    pub fn lift(&self, v: &[Rat]) -> Vec<Rat> {
        self.section.mul_vec(v)
    }
}

/// Builds the balanced tensor of two bimodules over the given ring,
/// together with its induced bimodule structure (left action through the
/// left factor, right action through the right factor).
pub fn balanced_tensor(
    ring: &FdAlgebra,
    a: &FdBimodule,
    b: &FdBimodule,
    cap: usize,
) -> Result<(TensorSpace, FdBimodule)> {
    let plain = a.dim * b.dim;
    if plain > cap {
        return Err(Error::Resource(format!(
            "tensor dimension {plain} exceeds cap {cap}"
        )));
    }
    let pidx = |i: usize, j: usize| i * b.dim + j;
    let mut relations: EchelonSpan<usize> = EchelonSpan::new();
    for r in 0..ring.dim {
        let rv = ring.basis_vec(r);
        for i in 0..a.dim {
            let ar = a.act_right(&a.basis_vec(i), &rv);
            for j in 0..b.dim {
                let rb = b.act_left(&rv, &b.basis_vec(j));
                let mut rel: SparseVec<usize> = SparseVec::new();
                for (k, c) in ar.iter().enumerate() {
                    if !c.is_zero() {
                        *rel.entry(pidx(k, j)).or_insert_with(Rat::zero) += c;
                    }
                }
                for (l, c) in rb.iter().enumerate() {
                    if !c.is_zero() {
                        *rel.entry(pidx(i, l)).or_insert_with(Rat::zero) -= c;
                    }
                }
                rel.retain(|_, c| !c.is_zero());
                if !rel.is_empty() {
                    relations.insert(rel);
                }
            }
        }
    }
    let pivots: std::collections::BTreeSet<usize> = relations
        .rows()
        .iter()
        .map(|row| *row.keys().next().expect("echelon rows are nonzero"))
        .collect();
    let basis_plain: Vec<usize> = (0..plain).filter(|t| !pivots.contains(t)).collect();
    let dim = basis_plain.len();
    let pos_of: std::collections::BTreeMap<usize, usize> = basis_plain
        .iter()
        .enumerate()
        .map(|(pos, &t)| (t, pos))
        .collect();
    let mut projection = Matrix::zeros(dim, plain);
    for t in 0..plain {
        let mut e: SparseVec<usize> = SparseVec::new();
        e.insert(t, rat_one());
        let residual = relations.reduce(&e);
        for (key, val) in residual {
            projection.set(pos_of[&key], t, val);
        }
    }
    let mut section = Matrix::zeros(plain, dim);
    for (pos, &t) in basis_plain.iter().enumerate() {
        section.set(t, pos, rat_one());
    }
    let space = TensorSpace {
        left_dim: a.dim,
        right_dim: b.dim,
        dim,
        basis_plain,
        projection,
        section,
    };
    // Induced actions: act on the pure-tensor representative, project back.
    let mut left = vec![Vec::with_capacity(dim); ring.dim];
    let mut right = vec![Vec::with_capacity(ring.dim); dim];
    for r in 0..ring.dim {
        let rv = ring.basis_vec(r);
        for &t in &space.basis_plain {
            let (i, j) = (t / b.dim, t % b.dim);
            let ra = a.act_left(&rv, &a.basis_vec(i));
            let mut plain_vec = vec![Rat::zero(); plain];
            for (k, c) in ra.into_iter().enumerate() {
                if !c.is_zero() {
                    plain_vec[pidx(k, j)] = c;
                }
            }
            left[r].push(space.project_plain(&plain_vec));
        }
    }
    for (pos, &t) in space.basis_plain.iter().enumerate() {
        let (i, j) = (t / b.dim, t % b.dim);
        for r in 0..ring.dim {
            let rv = ring.basis_vec(r);
            let br = b.act_right(&b.basis_vec(j), &rv);
            let mut plain_vec = vec![Rat::zero(); plain];
            for (l, c) in br.into_iter().enumerate() {
                if !c.is_zero() {
                    plain_vec[pidx(i, l)] = c;
                }
            }
            right[pos].push(space.project_plain(&plain_vec));
        }
    }
    let module = FdBimodule { dim, left, right };
    Ok((space, module))
}

/// A tensor power of a system: the system whose modules are the n-fold
/// balanced powers, with the pairing extended through the recursion
/// (peel one factor off each outer end, pair the middles first).
#[derive(Debug, Clone)]
pub struct TensorPower {
    pub n: usize,
    pub system: RSystem,
    /// P ⊗ P^{n−1} presentation of the P power (n ≥ 2).
    pub p_embed: Option<TensorSpace>,
    /// Q^{n−1} ⊗ Q presentation of the Q power (n ≥ 2).
    pub q_embed: Option<TensorSpace>,
}

pub fn tensor_power(sys: &RSystem, n: usize, cap: usize) -> Result<TensorPower> {
    if n == 0 {
        let ring = sys.ring.clone();
        let module = FdBimodule::regular(&ring);
        let psi = (0..ring.dim)
            .map(|i| {
                (0..ring.dim)
                    .map(|j| ring.basis_product(i, j).to_vec())
                    .collect()
            })
            .collect();
        let ring_names: Vec<String> = (0..ring.dim).map(|i| sys.ring_label(i)).collect();
        let labels = SystemLabels {
            ring: ring_names.clone(),
            p: ring_names.clone(),
            q: ring_names,
        };
        return Ok(TensorPower {
            n: 0,
            system: RSystem {
                ring,
                p: module.clone(),
                q: module,
                psi,
                labels: Some(labels),
            },
            p_embed: None,
            q_embed: None,
        });
    }
    if n == 1 {
        return Ok(TensorPower {
            n: 1,
            system: sys.clone(),
            p_embed: None,
            q_embed: None,
        });
    }
    let prev = tensor_power(sys, n - 1, cap)?;
    let (q_space, q_mod) = balanced_tensor(&sys.ring, &prev.system.q, &sys.q, cap)?;
    let (p_space, p_mod) = balanced_tensor(&sys.ring, &sys.p, &prev.system.p, cap)?;
    let mut psi = vec![vec![sys.ring.zero_vec(); q_mod.dim]; p_mod.dim];
    for (xi, &pt) in p_space.basis_plain.iter().enumerate() {
        let (i, big_i) = (pt / prev.system.p.dim, pt % prev.system.p.dim);
        let pi = sys.p.basis_vec(i);
        for (eta, &qt) in q_space.basis_plain.iter().enumerate() {
            let (big_j, j) = (qt / sys.q.dim, qt % sys.q.dim);
            let inner = prev
                .system
                .pairing(&prev.system.p.basis_vec(big_i), &prev.system.q.basis_vec(big_j));
            let shifted = sys.p.act_right(&pi, &inner);
            psi[xi][eta] = sys.pairing(&shifted, &sys.q.basis_vec(j));
        }
    }
    let labels = SystemLabels {
        ring: (0..sys.ring.dim).map(|i| sys.ring_label(i)).collect(),
        p: p_space
            .basis_plain
            .iter()
            .map(|&pt| {
                let (i, big_i) = (pt / prev.system.p.dim, pt % prev.system.p.dim);
                format!("{}.{}", sys.p_label(i), prev.system.p_label(big_i))
            })
            .collect(),
        q: q_space
            .basis_plain
            .iter()
            .map(|&qt| {
                let (big_j, j) = (qt / sys.q.dim, qt % sys.q.dim);
                format!("{}.{}", prev.system.q_label(big_j), sys.q_label(j))
            })
            .collect(),
    };
    let system = RSystem {
        ring: sys.ring.clone(),
        p: p_mod,
        q: q_mod,
        psi,
        labels: Some(labels),
    };
    if let Err(msg) = validate_system(&system) {
        return Err(Error::internal(format!(
            "tensor power {n} failed validation: {msg}"
        )));
    }
    Ok(TensorPower {
        n,
        system,
        p_embed: Some(p_space),
        q_embed: Some(q_space),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use crate::rsystem::standard_system;
    use std::sync::Arc;

    fn arrow_sys() -> RSystem {
        standard_system(&Arc::new(
            DirectedGraph::build(&["v1", "v2"], &[("f1", "v1", "v2")]).unwrap(),
        ))
    }

    fn rose2_sys() -> RSystem {
        standard_system(&Arc::new(
            DirectedGraph::build(&["v"], &[("g1", "v", "v"), ("g2", "v", "v")]).unwrap(),
        ))
    }

    fn chain5_sys() -> RSystem {
        standard_system(&Arc::new(
            DirectedGraph::build(
                &["v1", "v2", "v3", "v4", "v5"],
                &[
                    ("f1", "v2", "v1"),
                    ("f2", "v2", "v3"),
                    ("f3", "v4", "v3"),
                    ("f4", "v5", "v4"),
                ],
            )
            .unwrap(),
        ))
    }

    #[test]
    fn single_edge_square_collapses() {
        let sys = arrow_sys();
        let p2 = tensor_power(&sys, 2, 512).unwrap();
        assert_eq!(p2.system.q.dim, 0);
        assert_eq!(p2.system.p.dim, 0);
    }

    #[test]
    fn chain_square_keeps_composable_pairs() {
        let sys = chain5_sys();
        let p2 = tensor_power(&sys, 2, 512).unwrap();
        assert_eq!(p2.system.q.dim, 1);
        assert_eq!(p2.system.p.dim, 1);
        let labels = p2.system.labels.as_ref().unwrap();
        assert_eq!(labels.q[0], "f4.f3");
        assert_eq!(labels.p[0], "f3*.f4*");
    }

    #[test]
    fn rose_powers_are_free() {
        let sys = rose2_sys();
        for (n, expect) in [(2usize, 4usize), (3, 8)] {
            let p = tensor_power(&sys, n, 512).unwrap();
            assert_eq!(p.system.q.dim, expect);
            assert_eq!(p.system.p.dim, expect);
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let sys = rose2_sys();
        assert!(matches!(
            tensor_power(&sys, 3, 4),
            Err(Error::Resource(_))
        ));
    }

    /// Enumerates every basis sequence pair and checks the
    /// quotient-machinery pairing against folding the pairing over
    /// elementary tensors from the inside out.
    fn check_fold_agreement(sys: &RSystem, n: usize) {
        let powers: Vec<TensorPower> = (1..=n).map(|k| tensor_power(sys, k, 512).unwrap()).collect();
        let pd = sys.p.dim;
        let qd = sys.q.dim;
        let total = pd.pow(n as u32) * qd.pow(n as u32);
        for mut code in 0..total {
            let mut p_seq = vec![0usize; n];
            let mut q_seq = vec![0usize; n];
            for s in p_seq.iter_mut() {
                *s = code % pd;
                code /= pd;
            }
            for s in q_seq.iter_mut() {
                *s = code % qd;
                code /= qd;
            }
            // Quotient coordinates of p_1 ⊗ ... ⊗ p_n (fold from the right)
            // and of q_n ⊗ ... ⊗ q_1 (append on the right).
            let mut prep = sys.p.basis_vec(p_seq[n - 1]);
            let mut qrep = sys.q.basis_vec(q_seq[n - 1]);
            for k in 2..=n {
                let p_embed = powers[k - 1].p_embed.as_ref().unwrap();
                let q_embed = powers[k - 1].q_embed.as_ref().unwrap();
                prep = p_embed.project_pair(&sys.p.basis_vec(p_seq[n - k]), &prep);
                qrep = q_embed.project_pair(&qrep, &sys.q.basis_vec(q_seq[n - k]));
            }
            let machinery = powers[n - 1].system.pairing(&prep, &qrep);
            // Direct fold: r ← ψ(p_n ⊗ q_n); then r ← ψ(p_k·r ⊗ q_k).
            let mut r = sys.pairing(&sys.p.basis_vec(p_seq[n - 1]), &sys.q.basis_vec(q_seq[n - 1]));
            for k in (0..n - 1).rev() {
                let shifted = sys.p.act_right(&sys.p.basis_vec(p_seq[k]), &r);
                r = sys.pairing(&shifted, &sys.q.basis_vec(q_seq[k]));
            }
            assert_eq!(machinery, r, "mismatch at {p_seq:?} / {q_seq:?}");
        }
    }

    #[test]
    fn power_pairing_matches_elementary_fold() {
        check_fold_agreement(&chain5_sys(), 2);
        check_fold_agreement(&rose2_sys(), 2);
        check_fold_agreement(&rose2_sys(), 3);
    }

    /// The cube pairing can also be computed by pairing the outer pair
    /// last: ψ₃(x⊗p₃, q₃⊗y) = ψ₂(x·ψ(p₃⊗q₃) ⊗ y) for elementary x, y.
    #[test]
    fn alternate_association_gives_the_same_pairing() {
        let sys = rose2_sys();
        let p2 = tensor_power(&sys, 2, 512).unwrap();
        let p3 = tensor_power(&sys, 3, 512).unwrap();
        let d = sys.p.dim;
        for i1 in 0..d {
            for i2 in 0..d {
                for i3 in 0..d {
                    for j1 in 0..d {
                        for j2 in 0..d {
                            for j3 in 0..d {
                                // Machinery coordinates at level 3.
                                let x2 = p2
                                    .p_embed
                                    .as_ref()
                                    .unwrap()
                                    .project_pair(&sys.p.basis_vec(i2), &sys.p.basis_vec(i3));
                                let prep = p3
                                    .p_embed
                                    .as_ref()
                                    .unwrap()
                                    .project_pair(&sys.p.basis_vec(i1), &x2);
                                let y2 = p2
                                    .q_embed
                                    .as_ref()
                                    .unwrap()
                                    .project_pair(&sys.q.basis_vec(j3), &sys.q.basis_vec(j2));
                                let qrep = p3
                                    .q_embed
                                    .as_ref()
                                    .unwrap()
                                    .project_pair(&y2, &sys.q.basis_vec(j1));
                                let level3 = p3.system.pairing(&prep, &qrep);
                                // Outer-pair-last: pair p3 with q3 first.
                                let x12 = p2
                                    .p_embed
                                    .as_ref()
                                    .unwrap()
                                    .project_pair(&sys.p.basis_vec(i1), &sys.p.basis_vec(i2));
                                let y21 = p2
                                    .q_embed
                                    .as_ref()
                                    .unwrap()
                                    .project_pair(&sys.q.basis_vec(j2), &sys.q.basis_vec(j1));
                                let inner = sys.pairing(&sys.p.basis_vec(i3), &sys.q.basis_vec(j3));
                                let shifted = p2.system.p.act_right(&x12, &inner);
                                let alt = p2.system.pairing(&shifted, &y21);
                                assert_eq!(level3, alt);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zeroth_power_is_the_ring() {
        let sys = chain5_sys();
        let p0 = tensor_power(&sys, 0, 512).unwrap();
        assert_eq!(p0.system.q.dim, sys.ring.dim);
        assert_eq!(p0.system.p.dim, sys.ring.dim);
        let unit = sys.ring.unit.clone().unwrap();
        assert_eq!(p0.system.pairing(&unit, &unit), unit);
    }
}
