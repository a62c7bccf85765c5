//! Approximate unitary G-equivalence: fidelities of reductions, the optimal
//! overlap `max_V |⟨ψ₂|V|ψ₁⟩|` over G-invariant unitaries with an achieving
//! witness, and lower bounds from trace distances and characteristic
//! functions.

use num_complex::Complex64;

use crate::equivalence::aligned_witness;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::rep::IrrepDecomposition;
use crate::state::{charfunc_from_reduction, convolve, reduction_onto_irreps, CharFunction, IrrepReduction, QuantumState};

/// PSD tolerance (relative to the largest entry) for fidelity inputs.
const PSD_TOL: f64 = 1e-9;

/// Sectors whose reduction trace is below this are treated as absent.
const SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OverlapReport {
    pub optimal: f64,
    pub per_mu_fidelity: Vec<f64>,
    pub witness: CMat,
    pub bound_trace: f64,
    pub bound_charfunc_global: f64,
    pub bound_charfunc_per_mu: f64,
}

fn psd_sqrt(a: &CMat) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::InvalidParameter("fidelity needs square matrices".into()));
    }
    let scale = linalg::max_abs(a).max(1.0);
    if linalg::hermitian_residual(a) > PSD_TOL * scale {
        return Err(Error::InvalidParameter("fidelity input must be Hermitian".into()));
    }
    let (vals, vecs) = linalg::eigh(&linalg::hermitian_part(a));
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    if vals.first().is_some_and(|&l| l < -PSD_TOL * scale) {
        return Err(Error::InvalidParameter(format!(
            "fidelity input must be PSD (min eigenvalue {:.3e})",
            vals[0]
        )));
    }
    Ok(linalg::from_eigen(&vals, &vecs, |l| if l > 1e-14 * top { l.sqrt() } else { 0.0 }))
}

/// `Fid(A, B) = ‖√A √B‖₁`.
pub fn fidelity(a: &CMat, b: &CMat) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::dim(a.nrows(), b.nrows()));
    }
    Ok(linalg::trace_norm(&(psd_sqrt(a)? * psd_sqrt(b)?)))
}

/// Checks `‖A − B‖₁ ≥ tr A + tr B − 2 Fid(A, B)`.
pub fn trace_distance_fidelity_check(a: &CMat, b: &CMat) -> Result<bool> {
    let lhs = linalg::trace_norm(&(a - b));
    let rhs = linalg::trace(a).re + linalg::trace(b).re - 2.0 * fidelity(a, b)?;
    let scale = linalg::max_abs(a).max(linalg::max_abs(b)).max(1.0);
    Ok(lhs >= rhs - 1e-10 * scale * a.nrows() as f64)
}

fn pure_pair(psi1: &QuantumState, psi2: &QuantumState, dec: &IrrepDecomposition, op: &'static str) -> Result<()> {
    for s in [psi1, psi2] {
        s.require_pure(op)?;
        if s.dim() != dec.dim() {
            return Err(Error::dim(dec.dim(), s.dim()));
        }
    }
    Ok(())
}

fn reductions(
    psi1: &QuantumState,
    psi2: &QuantumState,
    dec: &IrrepDecomposition,
    op: &'static str,
) -> Result<(IrrepReduction, IrrepReduction)> {
    pure_pair(psi1, psi2, dec, op)?;
    Ok((reduction_onto_irreps(psi1, dec)?, reduction_onto_irreps(psi2, dec)?))
}

/// `1 − ½ Σ_μ ‖F₁^(μ) − F₂^(μ)‖₁`.
pub fn bound_from_trace_distance(psi1: &QuantumState, psi2: &QuantumState, dec: &IrrepDecomposition) -> Result<f64> {
    let (f1, f2) = reductions(psi1, psi2, dec, "bound_from_trace_distance")?;
    Ok(trace_bound(&f1, &f2))
}

fn trace_bound(f1: &IrrepReduction, f2: &IrrepReduction) -> f64 {
    let total: f64 = f1
        .blocks()
        .iter()
        .zip(f2.blocks())
        .map(|(a, b)| linalg::trace_norm(&(a - b)))
        .sum();
    1.0 - 0.5 * total
}

/// Component `χ^(μ) = d_μ (φ_μ ∗ χ)` of a function, with `φ_μ` the
/// character of block `mu`.
pub fn charfunc_component(chi: &CharFunction, dec: &IrrepDecomposition, mu: usize) -> Result<CharFunction> {
    let b = dec.block(mu);
    let group = dec.group();
    let phi = CharFunction::new(group.clone(), group.elements().map(|g| b.char_at(group, g)).collect())?;
    let conv = convolve(&phi, chi)?;
    let d = Complex64::new(b.dim as f64, 0.0);
    CharFunction::new(group.clone(), conv.values().iter().map(|z| z * d).collect())
}

fn mean_abs_diff(a: &CharFunction, b: &CharFunction) -> f64 {
    let n = a.values().len() as f64;
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).sum::<f64>() / n
}

/// Characteristic-function bounds `(global, per_mu)`:
/// `1 − ½ (Σ_μ d_μ²) avg_g |χ₁ − χ₂|` and
/// `1 − ½ Σ_μ d_μ² avg_g |χ₁^(μ) − χ₂^(μ)|`, both summed over the sectors
/// where either state has weight.
pub fn bound_from_charfunc(
    psi1: &QuantumState,
    psi2: &QuantumState,
    dec: &IrrepDecomposition,
) -> Result<(f64, f64)> {
    let (f1, f2) = reductions(psi1, psi2, dec, "bound_from_charfunc")?;
    charfunc_bounds(&f1, &f2, dec)
}

fn charfunc_bounds(f1: &IrrepReduction, f2: &IrrepReduction, dec: &IrrepDecomposition) -> Result<(f64, f64)> {
    let chi1 = charfunc_from_reduction(f1, dec)?;
    let chi2 = charfunc_from_reduction(f2, dec)?;
    let support: Vec<usize> = (0..dec.blocks().len())
        .filter(|&mu| {
            linalg::trace(f1.block(mu)).re > SUPPORT_TOL || linalg::trace(f2.block(mu)).re > SUPPORT_TOL
        })
        .collect();
    let dsq = |mu: usize| (dec.block(mu).dim * dec.block(mu).dim) as f64;
    let global = 1.0 - 0.5 * support.iter().map(|&mu| dsq(mu)).sum::<f64>() * mean_abs_diff(&chi1, &chi2);
    let mut per = 0.0;
    for &mu in &support {
        let c1 = charfunc_component(&chi1, dec, mu)?;
        let c2 = charfunc_component(&chi2, dec, mu)?;
        per += dsq(mu) * mean_abs_diff(&c1, &c2);
    }
    Ok((global, 1.0 - 0.5 * per))
}

/// Optimal overlap over G-invariant unitaries with the achieving witness and
/// the three lower bounds.
pub fn max_overlap(psi1: &QuantumState, psi2: &QuantumState, dec: &IrrepDecomposition) -> Result<OverlapReport> {
    let (f1, f2) = reductions(psi1, psi2, dec, "max_overlap")?;
    let (a, b) = (psi1.vector().expect("checked pure"), psi2.vector().expect("checked pure"));
    let (witness, per_mu_fidelity) = aligned_witness(a, b, dec);
    let optimal = per_mu_fidelity.iter().sum::<f64>().min(1.0);
    let (global, per) = charfunc_bounds(&f1, &f2, dec)?;
    Ok(OverlapReport {
        optimal,
        per_mu_fidelity,
        witness,
        bound_trace: trace_bound(&f1, &f2),
        bound_charfunc_global: global,
        bound_charfunc_per_mu: per,
    })
}
