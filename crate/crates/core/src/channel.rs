//! Quantum channels in Kraus form, covariance checks via the Choi matrix,
//! group twirling, and the embedding of a channel between different spaces
//! into an endomorphic one.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::SubgroupRef;
use crate::linalg::{self, CMat};
use crate::rep::{direct_sum_rep, UnitaryRep};
use crate::state::QuantumState;

const TP_TOL: f64 = 1e-8;

/// Completely positive trace-preserving map stored by Kraus operators,
/// each `d_out × d_in`.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<CMat>,
}

/// Result of a covariance check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceCheck {
    pub covariant: bool,
    pub residual: f64,
}

impl QuantumChannel {
    /// Validates shapes and `Σ K†K = I`.
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("at least one Kraus operator required".into()))?;
        let (d_out, d_in) = first.shape();
        if d_in == 0 || d_out == 0 {
            return Err(Error::InvalidChannel("Kraus operators must be nonempty".into()));
        }
        if kraus.iter().any(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::InvalidChannel("all Kraus operators must share one shape".into()));
        }
        let c = QuantumChannel { d_in, d_out, kraus };
        let res = c.trace_preservation_residual();
        if res > TP_TOL * (d_in as f64).sqrt() {
            return Err(Error::InvalidChannel(format!(
                "Σ_k K†K = I (trace preservation) violated (residual {res:.3e})"
            )));
        }
        Ok(c)
    }

    pub(crate) fn from_parts(d_in: usize, d_out: usize, kraus: Vec<CMat>) -> Self {
        QuantumChannel { d_in, d_out, kraus }
    }

    pub fn identity(d: usize) -> Self {
        QuantumChannel { d_in: d, d_out: d, kraus: vec![linalg::identity(d)] }
    }

    /// `ρ ↦ V ρ V†`.
    pub fn unitary(v: &CMat) -> Result<Self> {
        if !v.is_square() || linalg::unitarity_residual(v) > TP_TOL {
            return Err(Error::InvalidChannel("conjugation matrix must be unitary".into()));
        }
        Ok(QuantumChannel { d_in: v.nrows(), d_out: v.nrows(), kraus: vec![v.clone()] })
    }

    /// Cyclic shift `|n⟩ ↦ |n + shift mod d⟩`. Covariant for the number
    /// representation of `Z_d` on `d` levels.
    pub fn shift(d: usize, shift: usize) -> Self {
        let s = CMat::from_fn(d, d, |i, j| if i == (j + shift) % d { linalg::ONE } else { linalg::ZERO });
        QuantumChannel { d_in: d, d_out: d, kraus: vec![s] }
    }

    /// Channel with Choi matrix `J = Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|)`; Kraus operators
    /// from the eigenvectors above `1e-12 · λ_max`.
    pub fn from_choi(choi: &CMat, d_in: usize, d_out: usize) -> Result<Self> {
        if choi.shape() != (d_in * d_out, d_in * d_out) {
            return Err(Error::dim(d_in * d_out, choi.nrows()));
        }
        let (vals, vecs) = linalg::eigh(&linalg::hermitian_part(choi));
        let top = vals.last().copied().unwrap_or(0.0);
        if vals[0] < -1e-9 * top.max(1.0) {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix PSD (complete positivity) violated (min eigenvalue {:.3e})",
                vals[0]
            )));
        }
        let kraus: Vec<CMat> = vals
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &l)| l > 1e-12 * top)
            .map(|(idx, &l)| {
                let s = l.sqrt();
                CMat::from_fn(d_out, d_in, |a, i| vecs[(i * d_out + a, idx)] * s)
            })
            .collect();
        QuantumChannel::new(kraus)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn is_endomorphic(&self) -> bool {
        self.d_in == self.d_out
    }

    /// `‖Σ K†K − I‖` (max-abs).
    pub fn trace_preservation_residual(&self) -> f64 {
        let sum = self
            .kraus
            .iter()
            .fold(CMat::zeros(self.d_in, self.d_in), |acc, k| acc + k.adjoint() * k);
        linalg::max_abs(&(sum - linalg::identity(self.d_in)))
    }

    /// `J = Σ_k vec(K) vec(K)†` with `vec(K)[i·d_out + a] = K[a][i]`.
    pub fn choi(&self) -> CMat {
        let n = self.d_in * self.d_out;
        let mut j = CMat::zeros(n, n);
        for k in &self.kraus {
            let v = CMat::from_fn(n, 1, |r, _| k[(r % self.d_out, r / self.d_out)]);
            j += &v * v.adjoint();
        }
        j
    }

    /// `‖J(self) − J(other)‖_F`.
    pub fn choi_distance(&self, other: &QuantumChannel) -> Result<f64> {
        if self.d_in != other.d_in || self.d_out != other.d_out {
            return Err(Error::dim(self.d_in * self.d_out, other.d_in * other.d_out));
        }
        Ok((self.choi() - other.choi()).norm())
    }

    /// `ρ ↦ Σ K ρ K†`.
    pub fn apply_matrix(&self, rho: &CMat) -> Result<CMat> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::dim(self.d_in, rho.nrows()));
        }
        Ok(self
            .kraus
            .iter()
            .fold(CMat::zeros(self.d_out, self.d_out), |acc, k| acc + k * rho * k.adjoint()))
    }

    /// Output state; single-Kraus channels keep pure inputs pure.
    pub fn apply(&self, s: &QuantumState) -> Result<QuantumState> {
        if s.dim() != self.d_in {
            return Err(Error::dim(self.d_in, s.dim()));
        }
        if let (Some(v), [k]) = (s.vector(), self.kraus.as_slice()) {
            return QuantumState::pure(k * v);
        }
        QuantumState::mixed(self.apply_matrix(&s.density())?)
    }

    /// Kraus operators `a K b` for every `K`.
    fn sandwich(&self, a: &CMat, b: &CMat) -> QuantumChannel {
        QuantumChannel {
            d_in: b.ncols(),
            d_out: a.nrows(),
            kraus: self.kraus.iter().map(|k| a * k * b).collect(),
        }
    }
}

fn check_rep_dims(c: &QuantumChannel, r_in: &UnitaryRep, r_out: &UnitaryRep) -> Result<()> {
    if !r_in.same_group(r_out) {
        return Err(Error::GroupMismatch);
    }
    if c.d_in != r_in.dim() {
        return Err(Error::dim(r_in.dim(), c.d_in));
    }
    if c.d_out != r_out.dim() {
        return Err(Error::dim(r_out.dim(), c.d_out));
    }
    Ok(())
}

/// Covariance residual `max_g ‖J(U_out(g)∘E∘U_in(g)†) − J(E)‖_F`.
pub fn is_g_covariant(
    c: &QuantumChannel,
    r_in: &UnitaryRep,
    r_out: &UnitaryRep,
    tol: f64,
) -> Result<CovarianceCheck> {
    check_rep_dims(c, r_in, r_out)?;
    let j = c.choi();
    let residual = r_in
        .group()
        .elements()
        .map(|g| {
            let moved = c.sandwich(r_out.mat(g), &r_in.mat(g).adjoint()).choi();
            (moved - &j).norm()
        })
        .fold(0.0, f64::max);
    Ok(CovarianceCheck { covariant: residual <= tol, residual })
}

/// `E′ = (1/|G|) Σ_g U(g)†∘E∘U(g)`, averaged at the Choi level.
pub fn twirl_channel(c: &QuantumChannel, r: &UnitaryRep) -> Result<QuantumChannel> {
    if !c.is_endomorphic() {
        return Err(Error::NonEndomorphic { d_in: c.d_in, d_out: c.d_out });
    }
    check_rep_dims(c, r, r)?;
    let n = c.d_in * c.d_out;
    let order = r.group().order() as f64;
    let mut j = CMat::zeros(n, n);
    for g in r.group().elements() {
        let u = r.mat(g);
        j += c.sandwich(&u.adjoint(), u).choi();
    }
    QuantumChannel::from_choi(&j.unscale(order), c.d_in, c.d_out)
}

/// `ρ ↦ (1/|K|) Σ_{k∈K} U(k) ρ U(k)†`.
pub fn uniform_twirl_over_subgroup(r: &UnitaryRep, k: &SubgroupRef) -> Result<QuantumChannel> {
    let k = SubgroupRef::new(r.group(), k.elements().iter().copied())?;
    let w = Complex64::new((k.len() as f64).sqrt().recip(), 0.0);
    let kraus = k.elements().iter().map(|&h| r.mat(h) * w).collect();
    Ok(QuantumChannel::from_parts(r.dim(), r.dim(), kraus))
}

/// Endomorphic extension on `H_in ⊕ H_out`:
/// `Ẽ(ρ) = ι_out E(Π_in ρ Π_in) ι_out† + (I/D) tr(Π_out ρ Π_out)` with
/// `D = d_in + d_out`. Covariant under `r_in ⊕ r_out` whenever `E` is.
pub fn embed_channel(c: &QuantumChannel, r_in: &UnitaryRep, r_out: &UnitaryRep) -> Result<QuantumChannel> {
    check_rep_dims(c, r_in, r_out)?;
    let (di, dout) = (c.d_in, c.d_out);
    let d = di + dout;
    let mut kraus: Vec<CMat> = c
        .kraus
        .iter()
        .map(|k| {
            let mut m = CMat::zeros(d, d);
            m.view_mut((di, 0), (dout, di)).copy_from(k);
            m
        })
        .collect();
    let w = Complex64::new((d as f64).sqrt().recip(), 0.0);
    for i in 0..d {
        for j in 0..dout {
            let mut m = CMat::zeros(d, d);
            m[(i, di + j)] = w;
            kraus.push(m);
        }
    }
    Ok(QuantumChannel::from_parts(d, d, kraus))
}

/// Representation on which [`embed_channel`]'s output is covariant.
pub fn embedded_rep(r_in: &UnitaryRep, r_out: &UnitaryRep) -> Result<UnitaryRep> {
    direct_sum_rep(r_in, r_out)
}
