//! Numerical irrep decomposition `W U(g) W† = ⊕_μ U_μ(g) ⊗ I_{n_μ}`.
//!
//! A random Hermitian matrix is twirled into the commutant; for a generic
//! draw every eigenspace of the twirl is a single irreducible subspace.
//! Eigenspaces are grouped into equivalence classes by character, and each
//! copy is rotated onto the first copy of its class through the unitary
//! polar factor of a Schur intertwiner.

use std::cmp::Ordering;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::linalg::{self, CMat, CVec};
use crate::random::{self, Rng};

use super::{regular_rep, UnitaryRep};

/// Number of reseeds attempted after the first failed decomposition.
pub const MAX_RESEEDS: u64 = 5;

/// Reconstruction residual accepted per element (operator norm).
const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Characters closer than this (max-abs over elements) are treated as the
/// same irrep.
const CHARACTER_TOL: f64 = 1e-6;

/// One irrep sector: the irrep matrices and how often it occurs.
#[derive(Debug, Clone)]
pub struct IrrepBlock {
    pub label: usize,
    pub dim: usize,
    pub mult: usize,
    pub mats: Vec<CMat>,
    /// Character value per conjugacy class, in the group's class order.
    pub character: Vec<Complex64>,
}

impl IrrepBlock {
    /// Character value at element `g`.
    pub fn char_at(&self, group: &GroupTable, g: usize) -> Complex64 {
        self.character[group.class_of(g)]
    }

    pub fn is_trivial(&self) -> bool {
        self.dim == 1 && self.character.iter().all(|z| (z - linalg::ONE).norm() < CHARACTER_TOL)
    }
}

/// Basis change `W` plus canonically ordered irrep blocks.
///
/// In the new basis the sector of block `μ` starts at `offsets[μ]` and its
/// index `(i, k)`, `i < d_μ`, `k < n_μ`, sits at `offsets[μ] + i·n_μ + k`.
#[derive(Debug, Clone)]
pub struct IrrepDecomposition {
    group: Arc<GroupTable>,
    basis: CMat,
    blocks: Vec<IrrepBlock>,
    offsets: Vec<usize>,
    seed: u64,
}

impl IrrepDecomposition {
    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// The unitary `W`.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn blocks(&self) -> &[IrrepBlock] {
        &self.blocks
    }

    pub fn block(&self, mu: usize) -> &IrrepBlock {
        &self.blocks[mu]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Seed that produced this decomposition (after any reseeding).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index range of sector `mu` in the decomposed basis.
    pub fn sector_range(&self, mu: usize) -> std::ops::Range<usize> {
        let b = &self.blocks[mu];
        self.offsets[mu]..self.offsets[mu] + b.dim * b.mult
    }

    /// `⊕_μ U_μ(g) ⊗ I_{n_μ}`.
    pub fn block_matrix(&self, g: usize) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for (mu, b) in self.blocks.iter().enumerate() {
            let off = self.offsets[mu];
            let blk = linalg::kron(&b.mats[g], &linalg::identity(b.mult));
            out.view_mut((off, off), (blk.nrows(), blk.ncols())).copy_from(&blk);
        }
        out
    }

    /// `U(g) = W† (⊕_μ U_μ(g) ⊗ I) W`.
    pub fn rep_matrix(&self, g: usize) -> CMat {
        self.basis.adjoint() * self.block_matrix(g) * &self.basis
    }

    /// `max_g ‖W U(g) W† − ⊕_μ U_μ(g) ⊗ I‖` in operator norm.
    pub fn reconstruction_residual(&self, rep: &UnitaryRep) -> f64 {
        self.group
            .elements()
            .map(|g| {
                let diff = &self.basis * rep.mat(g) * self.basis.adjoint() - self.block_matrix(g);
                linalg::op_norm(&diff)
            })
            .fold(0.0, f64::max)
    }

    /// Coordinates of `v` in sector `mu` as a `d_μ × n_μ` matrix
    /// `A[i][k] = (W v)[offset + i·n_μ + k]`.
    pub fn sector_matrix(&self, v: &CVec, mu: usize) -> CMat {
        let w = &self.basis * v;
        self.sector_matrix_in_basis(&w, mu)
    }

    pub(crate) fn sector_matrix_in_basis(&self, w: &CVec, mu: usize) -> CMat {
        let b = &self.blocks[mu];
        let off = self.offsets[mu];
        CMat::from_fn(b.dim, b.mult, |i, k| w[off + i * b.mult + k])
    }

    /// `W† (⊕_μ I_{d_μ} ⊗ V_μ) W` from one `n_μ × n_μ` matrix per block.
    pub fn invariant_operator(&self, per_block: &[CMat]) -> Result<CMat> {
        if per_block.len() != self.blocks.len() {
            return Err(Error::LabelMismatch(format!(
                "expected {} multiplicity-space matrices, got {}",
                self.blocks.len(),
                per_block.len()
            )));
        }
        let d = self.dim();
        let mut inner = CMat::zeros(d, d);
        for (mu, (b, v)) in self.blocks.iter().zip(per_block).enumerate() {
            if v.nrows() != b.mult || v.ncols() != b.mult {
                return Err(Error::dim(b.mult, v.nrows()));
            }
            let blk = linalg::kron(&linalg::identity(b.dim), v);
            let off = self.offsets[mu];
            inner.view_mut((off, off), (blk.nrows(), blk.ncols())).copy_from(&blk);
        }
        Ok(self.basis.adjoint() * inner * &self.basis)
    }

    /// Haar-random unitary on each multiplicity space, assembled into a
    /// G-invariant unitary on the full space.
    pub fn random_invariant_unitary(&self, rng: &mut Rng) -> CMat {
        let per: Vec<CMat> =
            self.blocks.iter().map(|b| random::random_unitary(b.mult, rng)).collect();
        self.invariant_operator(&per).expect("block shapes match")
    }

    /// Orthogonal projector onto the isotypic sector `mu`.
    pub fn projector(&self, mu: usize) -> CMat {
        let r = self.sector_range(mu);
        let rows = self.basis.rows(r.start, r.len());
        rows.adjoint() * rows
    }
}

#[derive(Debug)]
struct Copy {
    basis: CMat,
    mats: Vec<CMat>,
    chi: Vec<Complex64>,
}

/// Decompose `rep` into irreps. Deterministic in `seed`; on a detected
/// eigenvalue collision the seed is advanced up to [`MAX_RESEEDS`] times.
pub fn decompose(rep: &UnitaryRep, seed: u64) -> Result<IrrepDecomposition> {
    let mut last = String::new();
    for attempt in 0..=MAX_RESEEDS {
        let s = seed.wrapping_add(attempt);
        match try_decompose(rep, s) {
            Ok(dec) => return Ok(dec),
            Err(msg) => last = msg,
        }
    }
    Err(Error::NumericalDegeneracy(format!(
        "failed to separate eigenvalues after {MAX_RESEEDS} reseeds: {last}"
    )))
}

fn try_decompose(rep: &UnitaryRep, seed: u64) -> std::result::Result<IrrepDecomposition, String> {
    let group = rep.group().clone();
    let d = rep.dim();
    let order = group.order() as f64;
    let mut rng = random::rng(seed);

    let h = random::random_hermitian(d, &mut rng);
    let t = rep.twirl_operator(&h).map_err(|e| e.to_string())?;
    let (vals, vecs) = linalg::eigh(&t);

    let spread = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let gap_tol = 1e-9 * spread;
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=d {
        if k == d || vals[k] - vals[k - 1] > gap_tol {
            clusters.push((start, k));
            start = k;
        }
    }

    let mut copies = Vec::with_capacity(clusters.len());
    for &(a, b) in &clusters {
        let mut q = vecs.columns(a, b - a).into_owned();
        for mut col in q.column_iter_mut() {
            let big = col.iter().copied().fold(linalg::ZERO, |m, z| if z.norm() > m.norm() { z } else { m });
            if big.norm() > 0.0 {
                col *= big.conj() / big.norm();
            }
        }
        let mut mats = Vec::with_capacity(group.order());
        for g in group.elements() {
            let uq = rep.mat(g) * &q;
            let sub = q.adjoint() * &uq;
            let leak = linalg::max_abs(&(&uq - &q * &sub));
            if leak > RECONSTRUCTION_TOL {
                return Err(format!("eigenspace of size {} is not invariant (leak {leak:.2e})", b - a));
            }
            mats.push(sub);
        }
        let chi: Vec<Complex64> = mats.iter().map(linalg::trace).collect();
        let norm = chi.iter().map(|z| z.norm_sqr()).sum::<f64>() / order;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(format!(
                "eigenspace of size {} is reducible (character norm {norm:.6})",
                b - a
            ));
        }
        copies.push(Copy { basis: q, mats, chi });
    }

    // Equivalence classes by character.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, c) in copies.iter().enumerate() {
        let found = classes.iter_mut().find(|cls| {
            let r = &copies[cls[0]];
            r.chi.len() == c.chi.len()
                && r.basis.ncols() == c.basis.ncols()
                && r.chi.iter().zip(&c.chi).all(|(x, y)| (x - y).norm() < CHARACTER_TOL)
        });
        match found {
            Some(cls) => cls.push(i),
            None => classes.push(vec![i]),
        }
    }

    // Align every copy with the first copy of its class.
    for cls in &classes {
        let r = cls[0];
        let k = copies[r].basis.ncols();
        for &i in &cls[1..] {
            let mut aligned = None;
            for _ in 0..4 {
                let x = random::ginibre(k, k, &mut rng);
                let mut s = CMat::zeros(k, k);
                for g in group.elements() {
                    s += &copies[r].mats[g] * &x * copies[i].mats[g].adjoint();
                }
                let s = s.unscale(order);
                if linalg::op_norm(&s) > 1e-6 {
                    aligned = Some(linalg::polar_unitary(&s));
                    break;
                }
            }
            let p = aligned.ok_or("intertwiner vanished for all draws")?;
            let new_basis = &copies[i].basis * p.adjoint();
            copies[i].basis = new_basis;
        }
    }

    let class_char = |c: &Copy| -> Vec<Complex64> {
        group
            .conjugacy_classes()
            .iter()
            .map(|cl| snap(cl.iter().map(|&g| c.chi[g]).sum::<Complex64>() / cl.len() as f64))
            .collect()
    };
    let mut keyed: Vec<(usize, Vec<Complex64>, &Vec<usize>)> = classes
        .iter()
        .map(|cls| (copies[cls[0]].basis.ncols(), class_char(&copies[cls[0]]), cls))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| cmp_characters(&a.1, &b.1)));

    let mut basis_cols = CMat::zeros(d, d);
    let mut blocks = Vec::with_capacity(keyed.len());
    let mut offsets = Vec::with_capacity(keyed.len());
    let mut off = 0;
    for (label, (dim, character, cls)) in keyed.into_iter().enumerate() {
        let mult = cls.len();
        for (kk, &ci) in cls.iter().enumerate() {
            for i in 0..dim {
                basis_cols.set_column(off + i * mult + kk, &copies[ci].basis.column(i));
            }
        }
        blocks.push(IrrepBlock {
            label,
            dim,
            mult,
            mats: copies[cls[0]].mats.clone(),
            character,
        });
        offsets.push(off);
        off += dim * mult;
    }
    if off != d {
        return Err(format!("block dimensions sum to {off}, expected {d}"));
    }

    let dec = IrrepDecomposition { group, basis: basis_cols.adjoint(), blocks, offsets, seed };

    for g in dec.group.elements() {
        let diff = dec.basis() * rep.mat(g) * dec.basis().adjoint() - dec.block_matrix(g);
        if diff.norm() > RECONSTRUCTION_TOL && linalg::op_norm(&diff) > RECONSTRUCTION_TOL {
            return Err(format!("reconstruction residual too large at g={g}"));
        }
    }
    Ok(dec)
}

/// Character values are algebraic; parts within `1e-12` of zero are noise.
fn snap(z: Complex64) -> Complex64 {
    let f = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    Complex64::new(f(z.re), f(z.im))
}

/// Lexicographic order on character vectors, comparing real then imaginary
/// parts, with values closer than the character tolerance treated as equal.
fn cmp_characters(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > CHARACTER_TOL {
                return p.total_cmp(&q);
            }
        }
    }
    a.len().cmp(&b.len())
}

/// All one-dimensional representations of `group`, as per-element phases,
/// read off the 1-d blocks of the regular representation.
pub fn one_dim_reps(group: &Arc<GroupTable>) -> Result<Vec<Vec<Complex64>>> {
    let dec = decompose(&regular_rep(group.clone()), 0)?;
    Ok(one_dim_reps_of(&dec))
}

/// 1-d blocks of an existing decomposition as per-element phases.
pub fn one_dim_reps_of(dec: &IrrepDecomposition) -> Vec<Vec<Complex64>> {
    dec.blocks()
        .iter()
        .filter(|b| b.dim == 1)
        .map(|b| b.mats.iter().map(|m| m[(0, 0)]).collect())
        .collect()
}
