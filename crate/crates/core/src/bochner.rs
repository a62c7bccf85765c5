//! Positive-definiteness of functions on a finite group (exactly the
//! characteristic functions of states) and the GNS reconstruction of a
//! representation and cyclic vector realizing such a function.
//!
//! For finite groups the continuity requirement is vacuous.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::rep::{same_group, IrrepDecomposition, UnitaryRep};
use crate::state::{CharFunction, QuantumState};

/// Functions under test share the representation of characteristic
/// functions; no invariants are assumed.
pub type CandidateFunction = CharFunction;

/// Eigenvalues at or above `-PSD_TOL · max_μ ‖B^(μ)‖` count as zero.
pub const PSD_TOL: f64 = 1e-9;

/// Gram eigenvalues at or below `RANK_TOL · λ_max` are dropped.
pub const RANK_TOL: f64 = 1e-10;

const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct BochnerReport {
    pub positive_definite: bool,
    /// `f(e) = 1` within tolerance.
    pub normalized: bool,
    /// Smallest eigenvalue over all Fourier blocks and the block attaining it.
    pub min_eigenvalue: f64,
    pub min_block: usize,
    pub per_block_min: Vec<f64>,
    /// Largest anti-Hermitian part over the blocks.
    pub hermitian_residual: f64,
}

#[derive(Debug, Clone)]
pub struct GnsResult {
    pub rep: UnitaryRep,
    pub state: QuantumState,
    pub dim: usize,
}

/// `B^(μ) = d_μ · (1/|G|) Σ_g f(g) U_μ(g⁻¹)`.
pub fn fourier_blocks(f: &CandidateFunction, dec: &IrrepDecomposition) -> Result<Vec<CMat>> {
    if !same_group(f.group(), dec.group()) {
        return Err(Error::GroupMismatch);
    }
    let group = dec.group();
    let order = group.order() as f64;
    Ok(dec
        .blocks()
        .iter()
        .map(|b| {
            let mut acc = CMat::zeros(b.dim, b.dim);
            for g in group.elements() {
                acc += &b.mats[group.inv(g)] * f.at(g);
            }
            acc * Complex64::new(b.dim as f64 / order, 0.0)
        })
        .collect())
}

/// Decide positive-definiteness from the Fourier blocks over every irrep.
/// `dec` must contain every irrep, e.g. the regular representation's
/// decomposition.
pub fn is_positive_definite(f: &CandidateFunction, dec: &IrrepDecomposition) -> Result<BochnerReport> {
    let complete: usize = dec.blocks().iter().map(|b| b.dim * b.dim).sum();
    if complete != dec.group().order() {
        return Err(Error::InvalidParameter(
            "decomposition must contain every irrep (Σ d_μ² = |G|)".into(),
        ));
    }
    let blocks = fourier_blocks(f, dec)?;
    let scale = blocks.iter().map(linalg::op_norm).fold(0.0, f64::max);
    let tol = PSD_TOL * scale;
    let hermitian_residual = blocks.iter().map(linalg::hermitian_residual).fold(0.0, f64::max);
    let per_block_min: Vec<f64> = blocks
        .iter()
        .map(|b| linalg::eigvalsh(&linalg::hermitian_part(b))[0])
        .collect();
    let (min_block, min_eigenvalue) = per_block_min
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least the trivial irrep");
    Ok(BochnerReport {
        positive_definite: hermitian_residual <= tol && min_eigenvalue >= -tol,
        normalized: (f.at(0) - linalg::ONE).norm() <= NORM_TOL,
        min_eigenvalue,
        min_block,
        per_block_min,
        hermitian_residual,
    })
}

/// Translation Gram matrix `X[g][h] = f(g⁻¹h)`.
pub fn translation_gram(f: &CandidateFunction) -> CMat {
    let group = f.group();
    let n = group.order();
    CMat::from_fn(n, n, |g, h| f.at(group.mul(group.inv(g), h)))
}

/// Representation and cyclic vector with `⟨ψ|U(g)|ψ⟩ = f(g)`.
pub fn gns_construct(f: &CandidateFunction) -> Result<GnsResult> {
    if (f.at(0) - linalg::ONE).norm() > NORM_TOL {
        return Err(Error::InvalidCharFunction(format!("values[0] = 1 violated (got {})", f.at(0))));
    }
    let group = f.group().clone();
    let n = group.order();
    let x = translation_gram(f);
    let scale = linalg::max_abs(&x).max(1.0);
    if linalg::hermitian_residual(&x) > PSD_TOL * scale {
        return Err(Error::InvalidCharFunction(
            "positive definite violated: f(g⁻¹) = conj f(g) fails".into(),
        ));
    }
    let (vals, q) = linalg::eigh(&linalg::hermitian_part(&x));
    let top = vals[n - 1];
    if vals[0] < -PSD_TOL * top.max(1.0) {
        return Err(Error::InvalidCharFunction(format!(
            "positive definite violated: Gram matrix eigenvalue {:.3e}",
            vals[0]
        )));
    }
    let keep: Vec<usize> = (0..n).filter(|&k| vals[k] > RANK_TOL * top).collect();
    let r = keep.len();
    let mut qr = CMat::zeros(n, r);
    for (j, &k) in keep.iter().enumerate() {
        qr.set_column(j, &q.column(k));
    }
    let sqrt = CVec::from_iterator(r, keep.iter().map(|&k| Complex64::new(vals[k].sqrt(), 0.0)));
    let inv_sqrt = sqrt.map(|z| z.inv());
    // V = Λ^{1/2} Q†, columns v_g; U(k) = V P_k Q Λ^{-1/2}.
    let v = CMat::from_diagonal(&sqrt) * qr.adjoint();
    let right = &qr * CMat::from_diagonal(&inv_sqrt);
    let mats: Vec<CMat> = group
        .elements()
        .map(|k| {
            let vp = CMat::from_fn(r, n, |i, g| v[(i, group.mul(k, g))]);
            linalg::polar_unitary(&(vp * &right))
        })
        .collect();
    let mut mats = mats;
    mats[0] = linalg::identity(r);
    let rep = UnitaryRep::new(group, mats)
        .map_err(|e| Error::NumericalDegeneracy(format!("GNS representation failed validation ({e})")))?;
    let state = QuantumState::pure_normalized(v.column(0).into_owned())?;
    Ok(GnsResult { rep, state, dim: r })
}
