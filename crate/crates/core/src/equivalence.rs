//! Deciding unitary G-equivalence and G-equivalence of pure states, with
//! explicit G-invariant unitary witnesses.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{twirl_channel, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::rep::{decompose, one_dim_reps_of, same_group, IrrepDecomposition, UnitaryRep};
use crate::state::{charfunc, reduction_onto_irreps, QuantumState, WeightState};

/// Default tolerance for equivalence decisions.
pub const EQUIV_TOL: f64 = 1e-8;

/// Characteristic-function values below this modulus count as zero.
pub const ZERO_CHI: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Equivalent,
    NotEquivalent,
    Inconclusive,
}

/// Outcome of an equivalence decision.
///
/// For G-equivalence the returned `one_dim_rep` ω satisfies
/// `χ_φ(g) = ω(g) χ_ψ(g)`.
#[derive(Debug, Clone)]
pub struct EquivalenceVerdict {
    pub status: Status,
    pub witness: Option<CMat>,
    pub one_dim_rep: Option<Vec<Complex64>>,
    pub certificate: Option<usize>,
}

impl EquivalenceVerdict {
    fn status(status: Status) -> Self {
        EquivalenceVerdict { status, witness: None, one_dim_rep: None, certificate: None }
    }

    pub fn is_equivalent(&self) -> bool {
        self.status == Status::Equivalent
    }
}

/// `X[i][j] = ⟨ψ_i|ψ_j⟩`.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub matrix: CMat,
}

fn pure_columns(states: &[QuantumState], op: &'static str) -> Result<CMat> {
    let d = states.first().map(|s| s.dim()).unwrap_or(0);
    let mut m = CMat::zeros(d, states.len());
    for (j, s) in states.iter().enumerate() {
        let v = s.require_pure(op)?;
        if v.len() != d {
            return Err(Error::dim(d, v.len()));
        }
        m.set_column(j, v);
    }
    Ok(m)
}

pub fn gram(states: &[QuantumState]) -> Result<GramMatrix> {
    let a = pure_columns(states, "gram")?;
    Ok(GramMatrix { matrix: a.adjoint() * a })
}

/// A unitary `V` with `V ψ_i = φ_i` for all `i`, present iff the Gram
/// matrices agree within `tol`.
pub fn unitary_set_interconversion(
    a: &[QuantumState],
    b: &[QuantumState],
    tol: f64,
) -> Result<Option<CMat>> {
    if a.len() != b.len() {
        return Err(Error::dim(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("state sets must be nonempty".into()));
    }
    let ma = pure_columns(a, "unitary_set_interconversion")?;
    let mb = pure_columns(b, "unitary_set_interconversion")?;
    if ma.nrows() != mb.nrows() {
        return Err(Error::dim(ma.nrows(), mb.nrows()));
    }
    let ga = ma.adjoint() * &ma;
    let gb = mb.adjoint() * &mb;
    if linalg::max_abs(&(&ga - &gb)) > tol {
        return Ok(None);
    }
    let d = ma.nrows();
    let svd = ma.clone().svd(true, true);
    let u = svd.u.expect("svd u requested");
    let v = svd.v_t.expect("svd v_t requested").adjoint();
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * smax).count();
    let qa = u.columns(0, rank).into_owned();
    let mut qb = &mb * v.columns(0, rank);
    for j in 0..rank {
        let s = svd.singular_values[j];
        qb.column_mut(j).unscale_mut(s);
    }
    let ca = linalg::complement_basis(&qa, 1e-10);
    let cb = linalg::complement_basis(&qb, 1e-10);
    if ca.ncols() != cb.ncols() || rank + ca.ncols() != d {
        return Err(Error::NumericalDegeneracy("span ranks of the two sets differ".into()));
    }
    let mut full_a = CMat::zeros(d, d);
    let mut full_b = CMat::zeros(d, d);
    full_a.columns_mut(0, rank).copy_from(&qa);
    full_a.columns_mut(rank, d - rank).copy_from(&ca);
    full_b.columns_mut(0, rank).copy_from(&qb);
    full_b.columns_mut(rank, d - rank).copy_from(&cb);
    Ok(Some(linalg::polar_unitary(&(full_b * full_a.adjoint()))))
}

/// Per-sector Uhlmann alignment: the multiplicity-space unitary `V_μ`
/// maximizing `Re⟨φ_μ|(I ⊗ V_μ)|ψ_μ⟩` and its value `‖B†A‖₁`, where `A`,
/// `B` are the `d_μ × n_μ` sector matrices and `(I ⊗ V)` acts as
/// `A ↦ A Vᵀ`.
pub(crate) fn align_sector(a: &CMat, b: &CMat) -> (CMat, f64) {
    let cross = b.adjoint() * a;
    let svd = cross.svd(true, true);
    let x = svd.u.expect("svd u requested");
    let y = svd.v_t.expect("svd v_t requested").adjoint();
    let vt = y * x.adjoint();
    (vt.transpose(), svd.singular_values.sum())
}

/// The G-invariant unitary maximizing `|⟨φ|Vψ⟩|` (every sector overlap made
/// real nonnegative), plus the per-sector overlaps.
pub(crate) fn aligned_witness(psi: &CVec, phi: &CVec, dec: &IrrepDecomposition) -> (CMat, Vec<f64>) {
    let w = dec.basis();
    let (wp, wf) = (w * psi, w * phi);
    let (per, fids): (Vec<CMat>, Vec<f64>) = (0..dec.blocks().len())
        .map(|mu| {
            align_sector(
                &dec.sector_matrix_in_basis(&wp, mu),
                &dec.sector_matrix_in_basis(&wf, mu),
            )
        })
        .unzip();
    (dec.invariant_operator(&per).expect("block shapes match"), fids)
}

fn check_pair<'a>(
    psi: &'a QuantumState,
    phi: &'a QuantumState,
    dim: usize,
    op: &'static str,
) -> Result<(&'a CVec, &'a CVec)> {
    let a = psi.require_pure(op)?;
    let b = phi.require_pure(op)?;
    if a.len() != dim {
        return Err(Error::dim(dim, a.len()));
    }
    if b.len() != dim {
        return Err(Error::dim(dim, b.len()));
    }
    Ok((a, b))
}

/// Unitary G-equivalence: equal reductions onto irreps. On success the
/// witness `V = W†(⊕ I ⊗ V_μ)W` satisfies `Vψ = φ`.
pub fn decide_unitary_g_equivalence(
    psi: &QuantumState,
    phi: &QuantumState,
    dec: &IrrepDecomposition,
    tol: f64,
) -> Result<EquivalenceVerdict> {
    let (a, b) = check_pair(psi, phi, dec.dim(), "decide_unitary_g_equivalence")?;
    let fa = reduction_onto_irreps(psi, dec)?;
    let fb = reduction_onto_irreps(phi, dec)?;
    if fa.max_trace_distance(&fb) > tol {
        return Ok(EquivalenceVerdict::status(Status::NotEquivalent));
    }
    let (v, _) = aligned_witness(a, b, dec);
    Ok(EquivalenceVerdict { witness: Some(v), ..EquivalenceVerdict::status(Status::Equivalent) })
}

/// G-equivalence of pure states: `χ_φ = ω χ_ψ` for some 1-d representation
/// ω. `dec` must contain every irrep of the group (for example the
/// decomposition of the regular representation).
pub fn decide_g_equivalence(
    psi: &QuantumState,
    phi: &QuantumState,
    r: &UnitaryRep,
    dec: &IrrepDecomposition,
    tol: f64,
) -> Result<EquivalenceVerdict> {
    check_pair(psi, phi, r.dim(), "decide_g_equivalence")?;
    if !same_group(r.group(), dec.group()) {
        return Err(Error::GroupMismatch);
    }
    let complete: usize = dec.blocks().iter().map(|b| b.dim * b.dim).sum();
    if complete != r.group().order() {
        return Err(Error::InvalidParameter(
            "decomposition must contain every irrep (Σ d_μ² = |G|)".into(),
        ));
    }
    let cpsi = charfunc(psi, r)?;
    let cphi = charfunc(phi, r)?;
    let (x, y) = (cpsi.values(), cphi.values());
    let zeros_agree = x.iter().zip(y).all(|(p, f)| (p.norm() <= ZERO_CHI) == (f.norm() <= ZERO_CHI));
    if zeros_agree {
        for omega in one_dim_reps_of(dec) {
            let fits = x
                .iter()
                .zip(y)
                .zip(&omega)
                .all(|((p, f), w)| p.norm() <= ZERO_CHI || (f - w * p).norm() <= tol);
            if fits {
                return Ok(EquivalenceVerdict {
                    one_dim_rep: Some(omega),
                    ..EquivalenceVerdict::status(Status::Equivalent)
                });
            }
        }
    }
    let nonvanishing = x.iter().chain(y).all(|z| z.norm() > ZERO_CHI);
    if !nonvanishing {
        return Ok(EquivalenceVerdict::status(Status::Inconclusive));
    }
    let certificate = x
        .iter()
        .zip(y)
        .map(|(p, f)| (p.norm() - f.norm()).abs())
        .enumerate()
        .filter(|&(_, d)| d > tol)
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(g, _)| g);
    Ok(EquivalenceVerdict { certificate, ..EquivalenceVerdict::status(Status::NotEquivalent) })
}

/// Integer `Δ` with `p_ψ(n) = p_φ(n + Δ)` for all `n`, if one exists.
pub fn u1_shift_equivalence(wpsi: &WeightState, wphi: &WeightState, tol: f64) -> Option<i64> {
    let support = |w: &WeightState| -> Vec<u32> {
        w.weights.iter().filter(|(_, p)| **p > tol).map(|(n, _)| *n).collect()
    };
    let (sa, sb) = (support(wpsi), support(wphi));
    let delta = *sb.first()? as i64 - *sa.first()? as i64;
    let shifted = |n: u32| -> f64 {
        let m = n as i64 + delta;
        if m < 0 { 0.0 } else { wphi.p(m as u32) }
    };
    let ok_a = sa.iter().chain(&sb).all(|&n| (wpsi.p(n) - shifted(n)).abs() <= tol);
    let ok_b = sb.iter().all(|&m| {
        let n = m as i64 - delta;
        n >= 0 && (wpsi.p(n as u32) - wphi.p(m)).abs() <= tol
    });
    (ok_a && ok_b).then_some(delta)
}

/// `E′ = (1/|G|) Σ_g U(g)†∘E∘U(g)`, a G-covariant channel.
pub fn covariant_map_from_plain_map(e: &QuantumChannel, r: &UnitaryRep) -> Result<QuantumChannel> {
    twirl_channel(e, r)
}

/// G-invariant unitary `V` with `VΠ = WΠ`, given that `WΠ` is a G-invariant
/// isometry on the range of the projector `Π`.
pub fn extend_isometry_to_ginv_unitary(w: &CMat, pi: &CMat, r: &UnitaryRep, tol: f64) -> Result<CMat> {
    let dec = decompose(r, 0)?;
    extend_isometry_with(w, pi, r, &dec, tol)
}

/// As [`extend_isometry_to_ginv_unitary`] with a precomputed decomposition.
pub fn extend_isometry_with(
    w: &CMat,
    pi: &CMat,
    r: &UnitaryRep,
    dec: &IrrepDecomposition,
    tol: f64,
) -> Result<CMat> {
    let d = r.dim();
    if w.shape() != (d, d) || pi.shape() != (d, d) {
        return Err(Error::dim(d, w.nrows().max(pi.nrows())));
    }
    if linalg::max_abs(&(pi * pi - pi)) > tol || linalg::hermitian_residual(pi) > tol {
        return Err(Error::NotInvariantIsometry("Π must be an orthogonal projector".into()));
    }
    let wp = w * pi;
    if linalg::max_abs(&(wp.adjoint() * &wp - pi)) > tol {
        return Err(Error::NotInvariantIsometry("ΠW†WΠ = Π violated".into()));
    }
    if r.commutator_residual(&wp) > tol {
        return Err(Error::NotInvariantIsometry("[WΠ, U(g)] = 0 violated".into()));
    }
    let basis = dec.basis();
    let m = basis * &wp * basis.adjoint();
    let p = basis * pi * basis.adjoint();
    let mut per = Vec::with_capacity(dec.blocks().len());
    for (b, &off) in dec.blocks().iter().zip(dec.offsets()) {
        let n = b.mult;
        let avg = |x: &CMat| {
            CMat::from_fn(n, n, |k, l| {
                (0..b.dim).map(|i| x[(off + i * n + k, off + i * n + l)]).sum::<Complex64>()
                    / b.dim as f64
            })
        };
        let (m_mu, p_mu) = (avg(&m), avg(&p));
        let c_in = linalg::complement_basis(&p_mu, 1e-8);
        let c_out = linalg::complement_basis(&m_mu, 1e-8);
        if c_in.ncols() != c_out.ncols() {
            return Err(Error::NotInvariantIsometry(format!(
                "rank mismatch on multiplicity space of block {}",
                b.label
            )));
        }
        per.push(linalg::polar_unitary(&(m_mu + c_out * c_in.adjoint())));
    }
    let v = dec.invariant_operator(&per)?;
    let res = linalg::max_abs(&(&v * pi - &wp));
    if res > tol.max(1e-8) {
        return Err(Error::NumericalDegeneracy(format!(
            "extension does not reproduce WΠ (residual {res:.3e})"
        )));
    }
    Ok(v)
}
