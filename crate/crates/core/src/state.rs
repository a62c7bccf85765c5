//! Quantum states, characteristic functions `χ_ρ(g) = tr(ρ U(g))`, and
//! reductions onto irreps, together with the group Fourier transform that
//! maps one to the other.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupTable, SubgroupRef};
use crate::linalg::{self, CMat, CVec, ZERO};
use crate::rep::{same_group, IrrepDecomposition, UnitaryRep, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq)]
enum StateData {
    Pure(CVec),
    Mixed(CMat),
}

/// A pure state vector or a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    data: StateData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

impl QuantumState {
    /// Pure state; `‖vec‖ = 1` within tolerance.
    pub fn pure(vec: CVec) -> Result<Self> {
        if vec.is_empty() {
            return Err(Error::InvalidState("dimension must be positive".into()));
        }
        let n = vec.norm();
        if (n - 1.0).abs() > DEFAULT_TOL * 10.0 {
            return Err(Error::InvalidState(format!("pure: ‖vec‖ = 1 violated (norm {n})")));
        }
        Ok(QuantumState { data: StateData::Pure(vec) })
    }

    /// Pure state from an arbitrary nonzero vector, normalized.
    pub fn pure_normalized(vec: CVec) -> Result<Self> {
        let n = vec.norm();
        if vec.is_empty() || n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(QuantumState { data: StateData::Pure(vec.unscale(n)) })
    }

    /// Density matrix; Hermitian, PSD, unit trace within tolerance.
    pub fn mixed(rho: CMat) -> Result<Self> {
        if !rho.is_square() || rho.nrows() == 0 {
            return Err(Error::InvalidState("density matrix must be square and nonempty".into()));
        }
        let scale = linalg::max_abs(&rho).max(1.0);
        let tol = DEFAULT_TOL * 10.0 * scale;
        if linalg::hermitian_residual(&rho) > tol {
            return Err(Error::InvalidState("mixed: rho Hermitian violated".into()));
        }
        let tr = linalg::trace(&rho);
        if (tr - linalg::ONE).norm() > tol {
            return Err(Error::InvalidState(format!("mixed: tr rho = 1 violated (trace {tr})")));
        }
        let min = linalg::eigvalsh(&rho)[0];
        if min < -tol {
            return Err(Error::InvalidState(format!(
                "mixed: rho PSD (min eigenvalue >= -tol) violated (min eigenvalue {min:.3e})"
            )));
        }
        Ok(QuantumState { data: StateData::Mixed(linalg::hermitian_part(&rho)) })
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        QuantumState { data: StateData::Pure(linalg::basis_vector(dim, i)) }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        QuantumState { data: StateData::Mixed(linalg::identity(dim).unscale(dim as f64)) }
    }

    pub fn kind(&self) -> StateKind {
        match self.data {
            StateData::Pure(_) => StateKind::Pure,
            StateData::Mixed(_) => StateKind::Mixed,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.data, StateData::Pure(_))
    }

    pub fn dim(&self) -> usize {
        match &self.data {
            StateData::Pure(v) => v.len(),
            StateData::Mixed(m) => m.nrows(),
        }
    }

    /// State vector for pure states.
    pub fn vector(&self) -> Option<&CVec> {
        match &self.data {
            StateData::Pure(v) => Some(v),
            StateData::Mixed(_) => None,
        }
    }

    pub(crate) fn require_pure(&self, op: &'static str) -> Result<&CVec> {
        self.vector().ok_or(Error::PureOnly(op))
    }

    /// Density matrix (`|ψ⟩⟨ψ|` for pure states).
    pub fn density(&self) -> CMat {
        match &self.data {
            StateData::Pure(v) => v * v.adjoint(),
            StateData::Mixed(m) => m.clone(),
        }
    }

    /// `V ρ V†` (or `V|ψ⟩`) for a unitary `V`.
    pub fn transformed(&self, v: &CMat) -> Result<Self> {
        if v.nrows() != self.dim() || v.ncols() != self.dim() {
            return Err(Error::dim(self.dim(), v.nrows()));
        }
        Ok(QuantumState {
            data: match &self.data {
                StateData::Pure(x) => StateData::Pure(v * x),
                StateData::Mixed(m) => StateData::Mixed(v * m * v.adjoint()),
            },
        })
    }

    /// `tr(ρ X)` (or `⟨ψ|X|ψ⟩`).
    pub fn expectation(&self, x: &CMat) -> Complex64 {
        match &self.data {
            StateData::Pure(v) => v.dotc(&(x * v)),
            StateData::Mixed(m) => linalg::trace(&(m * x)),
        }
    }
}

/// A complex function on the group, stored densely per element.
#[derive(Debug, Clone)]
pub struct CharFunction {
    group: Arc<GroupTable>,
    values: Vec<Complex64>,
}

impl CharFunction {
    pub fn new(group: Arc<GroupTable>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::dim(group.order(), values.len()));
        }
        Ok(CharFunction { group, values })
    }

    /// Characteristic function of an operator on one irrep,
    /// `χ_A(g) = tr(A U_μ(g))`.
    pub fn of_operator(group: Arc<GroupTable>, a: &CMat, irrep: &[CMat]) -> Result<Self> {
        let values = irrep.iter().map(|u| linalg::trace(&(a * u))).collect();
        Self::new(group, values)
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, g: usize) -> Complex64 {
        self.values[g]
    }

    /// `max_g |self(g) − other(g)|`.
    pub fn max_diff(&self, other: &CharFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Check `χ(e) = 1` and `|χ(g)| <= 1`.
    pub fn check_state_derived(&self, tol: f64) -> Result<()> {
        if (self.values[0] - linalg::ONE).norm() > tol {
            return Err(Error::InvalidCharFunction(format!(
                "values[0] = 1 violated (got {})",
                self.values[0]
            )));
        }
        if let Some(g) = self.values.iter().position(|z| z.norm() > 1.0 + tol) {
            return Err(Error::InvalidCharFunction(format!("|values[g]| <= 1 violated at g={g}")));
        }
        Ok(())
    }

    pub fn pointwise_mul(&self, other: &CharFunction) -> Result<CharFunction> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(CharFunction { group: self.group.clone(), values })
    }
}

/// Reduction onto irreps: one `d_μ × d_μ` matrix per decomposition block.
#[derive(Debug, Clone)]
pub struct IrrepReduction {
    blocks: Vec<CMat>,
}

impl IrrepReduction {
    pub fn new(blocks: Vec<CMat>) -> Self {
        IrrepReduction { blocks }
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, mu: usize) -> &CMat {
        &self.blocks[mu]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn total_trace(&self) -> f64 {
        self.blocks.iter().map(|b| linalg::trace(b).re).sum()
    }

    /// `max_μ ‖F^(μ) − G^(μ)‖₁`.
    pub fn max_trace_distance(&self, other: &IrrepReduction) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| linalg::trace_norm(&(a - b)))
            .fold(0.0, f64::max)
    }

    /// Check each block Hermitian PSD and the traces summing to one.
    pub fn check(&self, tol: f64) -> Result<()> {
        for (mu, b) in self.blocks.iter().enumerate() {
            if linalg::hermitian_residual(b) > tol {
                return Err(Error::InvalidState(format!("F^({mu}) Hermitian violated")));
            }
            let min = linalg::eigvalsh(b).first().copied().unwrap_or(0.0);
            if min < -tol {
                return Err(Error::InvalidState(format!(
                    "F^({mu}) PSD violated (min eigenvalue {min:.3e})"
                )));
            }
        }
        let t = self.total_trace();
        if (t - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("Σ_μ tr F^(μ) = 1 violated (sum {t})")));
        }
        Ok(())
    }

    fn check_labels(&self, dec: &IrrepDecomposition) -> Result<()> {
        if self.blocks.len() != dec.blocks().len() {
            return Err(Error::LabelMismatch(format!(
                "reduction has {} blocks, decomposition has {}",
                self.blocks.len(),
                dec.blocks().len()
            )));
        }
        for (mu, (f, b)) in self.blocks.iter().zip(dec.blocks()).enumerate() {
            if f.nrows() != b.dim || f.ncols() != b.dim {
                return Err(Error::LabelMismatch(format!(
                    "F^({mu}) is {}x{}, irrep has dimension {}",
                    f.nrows(),
                    f.ncols(),
                    b.dim
                )));
            }
        }
        Ok(())
    }
}

fn check_rep_dim(s: &QuantumState, dim: usize) -> Result<()> {
    if s.dim() != dim {
        return Err(Error::dim(dim, s.dim()));
    }
    Ok(())
}

/// `χ_ρ(g) = tr(ρ U(g))`, or `⟨ψ|U(g)|ψ⟩` for pure states.
pub fn charfunc(s: &QuantumState, r: &UnitaryRep) -> Result<CharFunction> {
    check_rep_dim(s, r.dim())?;
    let values = r.mats().iter().map(|u| s.expectation(u)).collect();
    CharFunction::new(r.group().clone(), values)
}

/// `F^(μ) = tr_{N_μ}(Π_μ ρ Π_μ)` expressed in the decomposition basis.
pub fn reduction_onto_irreps(s: &QuantumState, dec: &IrrepDecomposition) -> Result<IrrepReduction> {
    check_rep_dim(s, dec.dim())?;
    let w = dec.basis();
    let blocks = match s.vector() {
        Some(v) => {
            let wv = w * v;
            (0..dec.blocks().len())
                .map(|mu| {
                    let a = dec.sector_matrix_in_basis(&wv, mu);
                    &a * a.adjoint()
                })
                .collect()
        }
        None => {
            let rho = w * s.density() * w.adjoint();
            dec.blocks()
                .iter()
                .zip(dec.offsets())
                .map(|(b, &off)| {
                    let n = b.mult;
                    CMat::from_fn(b.dim, b.dim, |i, j| {
                        (0..n).map(|k| rho[(off + i * n + k, off + j * n + k)]).sum()
                    })
                })
                .collect()
        }
    };
    Ok(IrrepReduction { blocks })
}

/// `χ(g) = Σ_μ tr(F^(μ) U_μ(g))`.
pub fn charfunc_from_reduction(red: &IrrepReduction, dec: &IrrepDecomposition) -> Result<CharFunction> {
    red.check_labels(dec)?;
    let group = dec.group().clone();
    let values = group
        .elements()
        .map(|g| {
            red.blocks
                .iter()
                .zip(dec.blocks())
                .map(|(f, b)| linalg::trace(&(f * &b.mats[g])))
                .sum()
        })
        .collect();
    CharFunction::new(group, values)
}

/// `F^(μ) = d_μ · (1/|G|) Σ_g f(g⁻¹) U_μ(g)`.
pub fn fourier_inverse(f: &CharFunction, dec: &IrrepDecomposition) -> Result<IrrepReduction> {
    if !same_group(f.group(), dec.group()) {
        return Err(Error::GroupMismatch);
    }
    let group = dec.group();
    let order = group.order() as f64;
    let blocks = dec
        .blocks()
        .iter()
        .map(|b| {
            let mut acc = CMat::zeros(b.dim, b.dim);
            for g in group.elements() {
                let w = f.at(group.inv(g));
                if w != ZERO {
                    acc += &b.mats[g] * w;
                }
            }
            acc * Complex64::new(b.dim as f64 / order, 0.0)
        })
        .collect();
    Ok(IrrepReduction { blocks })
}

/// Group convolution `(f1 ∗ f2)(g) = (1/|G|) Σ_h f1(g h⁻¹) f2(h)`.
pub fn convolve(f1: &CharFunction, f2: &CharFunction) -> Result<CharFunction> {
    if !same_group(f1.group(), f2.group()) {
        return Err(Error::GroupMismatch);
    }
    let group = f1.group().clone();
    let order = group.order() as f64;
    let values = group
        .elements()
        .map(|g| {
            group
                .elements()
                .map(|h| f1.at(group.mul(g, group.inv(h))) * f2.at(h))
                .sum::<Complex64>()
                / order
        })
        .collect();
    CharFunction::new(group, values)
}

/// Kronecker product of two states.
pub fn tensor_state(s1: &QuantumState, s2: &QuantumState) -> QuantumState {
    match (s1.vector(), s2.vector()) {
        (Some(a), Some(b)) => QuantumState { data: StateData::Pure(linalg::kron_vec(a, b)) },
        _ => QuantumState {
            data: StateData::Mixed(linalg::kron(&s1.density(), &s2.density())),
        },
    }
}

/// `Sym_G(ρ) = { g : ‖U(g) ρ U(g)† − ρ‖_F <= tol }`. The set is verified to
/// be a subgroup; a closure failure means `tol` is misconfigured.
pub fn symmetry_subgroup(s: &QuantumState, r: &UnitaryRep, tol: f64) -> Result<SubgroupRef> {
    check_rep_dim(s, r.dim())?;
    let rho = s.density();
    let members: Vec<usize> = r
        .group()
        .elements()
        .filter(|&g| (r.conjugate(g, &rho) - &rho).norm() <= tol)
        .collect();
    SubgroupRef::new(r.group(), members.iter().copied()).map_err(|e| {
        Error::Tolerance(format!(
            "symmetry set {members:?} is not closed at tol {tol:e} ({e})"
        ))
    })
}

/// Weight distribution of a state of the U(1) number model: `p(n)` is the
/// population of weight `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightState {
    pub weights: BTreeMap<u32, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<BTreeMap<u32, [f64; 2]>>,
}

impl WeightState {
    /// Validate `Σ p(n) = 1` and `p(n) >= 0`.
    pub fn new(weights: BTreeMap<u32, f64>) -> Result<Self> {
        let w = WeightState { weights, amplitudes: None };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let tol = DEFAULT_TOL * 10.0;
        if let Some((n, p)) = self.weights.iter().find(|(_, p)| **p < -tol || !p.is_finite()) {
            return Err(Error::InvalidState(format!("p(n) >= 0 violated at n={n} (p={p})")));
        }
        let total: f64 = self.weights.values().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("Σ p(n) = 1 violated (sum {total})")));
        }
        if let Some(a) = &self.amplitudes {
            for (n, z) in a {
                let p = self.p(*n);
                if (z[0] * z[0] + z[1] * z[1] - p).abs() > tol {
                    return Err(Error::InvalidState(format!(
                        "amplitude at n={n} does not match p(n)"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Pure weight state from amplitudes per weight (normalized).
    pub fn from_amplitudes(amps: &[(u32, Complex64)]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("all amplitudes vanish".into()));
        }
        let mut weights = BTreeMap::new();
        let mut amplitudes = BTreeMap::new();
        for &(n, z) in amps {
            let z = z / norm;
            *weights.entry(n).or_insert(0.0) += z.norm_sqr();
            amplitudes.insert(n, [z.re, z.im]);
        }
        let w = WeightState { weights, amplitudes: Some(amplitudes) };
        w.validate()?;
        Ok(w)
    }

    /// Weight distribution of a state on a weight representation with basis
    /// weights `basis_weights`.
    pub fn from_state(s: &QuantumState, basis_weights: &[u32]) -> Result<Self> {
        check_rep_dim(s, basis_weights.len())?;
        let rho = s.density();
        let mut weights = BTreeMap::new();
        for (j, &n) in basis_weights.iter().enumerate() {
            *weights.entry(n).or_insert(0.0) += rho[(j, j)].re;
        }
        WeightState::new(weights)
    }

    pub fn p(&self, n: u32) -> f64 {
        self.weights.get(&n).copied().unwrap_or(0.0)
    }

    /// Largest weight with nonzero population.
    pub fn max_weight(&self) -> u32 {
        self.weights.iter().rev().find(|(_, p)| **p > 0.0).map(|(n, _)| *n).unwrap_or(0)
    }

    /// Pure state on the number basis `0..dim` (amplitudes if present,
    /// otherwise `√p(n)`).
    pub fn to_pure_state(&self, dim: usize) -> Result<QuantumState> {
        if self.max_weight() as usize >= dim {
            return Err(Error::dim(self.max_weight() as usize + 1, dim));
        }
        let mut v = CVec::zeros(dim);
        for (&n, &p) in &self.weights {
            v[n as usize] = match self.amplitudes.as_ref().and_then(|a| a.get(&n)) {
                Some(z) => Complex64::new(z[0], z[1]),
                None => Complex64::new(p.max(0.0).sqrt(), 0.0),
            };
        }
        QuantumState::pure_normalized(v)
    }

    /// Distribution of the total weight of two independent systems.
    pub fn tensor(&self, other: &WeightState) -> WeightState {
        let mut weights = BTreeMap::new();
        for (&a, &pa) in &self.weights {
            for (&b, &pb) in &other.weights {
                *weights.entry(a + b).or_insert(0.0) += pa * pb;
            }
        }
        WeightState { weights, amplitudes: None }
    }

    /// `Σ_n p(n) n^k`.
    pub fn moment(&self, k: u32) -> f64 {
        self.weights.iter().map(|(&n, &p)| p * (n as f64).powi(k as i32)).sum()
    }

    /// `k`-th cumulant from the moment recursion
    /// `κ_m = μ_m − Σ_{j=1}^{m−1} C(m−1, j−1) κ_j μ_{m−j}`.
    pub fn cumulant(&self, k: u32) -> f64 {
        let moments: Vec<f64> = (0..=k).map(|j| self.moment(j)).collect();
        let mut kappa = vec![0.0; k as usize + 1];
        for m in 1..=k as usize {
            let mut acc = moments[m];
            for j in 1..m {
                acc -= binomial(m - 1, j - 1) * kappa[j] * moments[m - j];
            }
            kappa[m] = acc;
        }
        kappa[k as usize]
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Moments of the number operator: `Σ_n p(n) n^k`.
pub fn u1_moments(w: &WeightState, k: u32) -> f64 {
    w.moment(k)
}
