//! Unitary representations of finite groups and their irreducible
//! decomposition.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{self, GroupTable};
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::random;

mod decompose;

pub use decompose::{decompose, one_dim_reps, one_dim_reps_of, IrrepBlock, IrrepDecomposition, MAX_RESEEDS};

/// Base tolerance; equality checks scale it by `max(1, ‖input‖)`.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Homomorphism checks are exhaustive while `|G|²·d³` stays below this.
const EXHAUSTIVE_HOM_BUDGET: usize = 200_000_000;

/// Monomial form of a matrix: `U[i][perm[i]] = vals[i]`, zero elsewhere.
#[derive(Debug, Clone)]
struct Monomial {
    perm: Vec<usize>,
    vals: Vec<Complex64>,
}

impl Monomial {
    fn of(m: &CMat) -> Option<Self> {
        if !linalg::is_monomial(m) {
            return None;
        }
        let n = m.nrows();
        let mut perm = vec![0; n];
        let mut vals = vec![ZERO; n];
        for i in 0..n {
            let j = (0..n).find(|&j| m[(i, j)] != ZERO).expect("monomial row");
            perm[i] = j;
            vals[i] = m[(i, j)];
        }
        Some(Monomial { perm, vals })
    }

    /// `U X U†`.
    fn conjugate(&self, x: &CMat) -> CMat {
        let n = self.perm.len();
        CMat::from_fn(n, n, |i, j| {
            self.vals[i] * x[(self.perm[i], self.perm[j])] * self.vals[j].conj()
        })
    }
}

/// A unitary representation `g ↦ U(g)` of a finite group.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    group: Arc<GroupTable>,
    dim: usize,
    mats: Vec<CMat>,
    monomial: Option<Vec<Monomial>>,
}

impl UnitaryRep {
    /// Validate and wrap per-element matrices: `mats[0] = I`, each matrix
    /// unitary, and `mats[a]·mats[b] = mats[mul[a][b]]`.
    pub fn new(group: Arc<GroupTable>, mats: Vec<CMat>) -> Result<Self> {
        if mats.len() != group.order() {
            return Err(Error::InvalidRep(format!(
                "expected {} matrices (one per element), got {}",
                group.order(),
                mats.len()
            )));
        }
        let dim = mats[0].nrows();
        if dim == 0 {
            return Err(Error::InvalidRep("dimension must be positive".into()));
        }
        for (g, m) in mats.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidRep(format!(
                    "mats[{g}] is {}x{}, expected {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        let tol = DEFAULT_TOL * (dim as f64).sqrt().max(1.0);
        if linalg::max_abs(&(&mats[0] - linalg::identity(dim))) > tol {
            return Err(Error::InvalidRep("mats[0] = identity matrix violated".into()));
        }
        for (g, m) in mats.iter().enumerate() {
            let r = linalg::unitarity_residual(m);
            if r > tol {
                return Err(Error::InvalidRep(format!(
                    "unitarity ‖mats[g]·mats[g]† − I‖ <= tol violated at g={g} (residual {r:.3e})"
                )));
            }
        }
        let n = group.order();
        let check = |a: usize, b: usize| -> Result<()> {
            let r = linalg::max_abs(&(&mats[a] * &mats[b] - &mats[group.mul(a, b)]));
            if r > tol {
                return Err(Error::InvalidRep(format!(
                    "homomorphism ‖mats[a]·mats[b] − mats[mul[a][b]]‖ <= tol violated at ({a},{b}) (residual {r:.3e})"
                )));
            }
            Ok(())
        };
        if n.saturating_mul(n).saturating_mul(dim.pow(3)) <= EXHAUSTIVE_HOM_BUDGET {
            for a in 0..n {
                for b in 0..n {
                    check(a, b)?;
                }
            }
        } else {
            let mut rng = random::rng(0x4e9_5eed);
            let samples = (EXHAUSTIVE_HOM_BUDGET / dim.pow(3)).max(10 * n);
            for _ in 0..samples {
                let a = random::uniform_index(n, &mut rng);
                let b = random::uniform_index(n, &mut rng);
                check(a, b)?;
            }
        }
        Ok(Self::from_parts(group, mats))
    }

    /// Wrap matrices already known to form a unitary representation.
    pub(crate) fn from_parts(group: Arc<GroupTable>, mats: Vec<CMat>) -> Self {
        let dim = mats[0].nrows();
        let monomial = mats.iter().map(Monomial::of).collect::<Option<Vec<_>>>();
        UnitaryRep { group, dim, mats, monomial }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    pub fn mat(&self, g: usize) -> &CMat {
        &self.mats[g]
    }

    /// `tr U(g)` for every element.
    pub fn character(&self) -> Vec<Complex64> {
        self.mats.iter().map(linalg::trace).collect()
    }

    /// Dimension of the commutant, `(1/|G|) Σ_g |tr U(g)|²`; equals 1
    /// exactly for irreducible representations.
    pub fn commutant_dimension(&self) -> f64 {
        let n = self.group.order() as f64;
        self.character().iter().map(|z| z.norm_sqr()).sum::<f64>() / n
    }

    pub fn same_group(&self, other: &UnitaryRep) -> bool {
        same_group(&self.group, &other.group)
    }

    /// `U(g) X U(g)†`.
    pub fn conjugate(&self, g: usize, x: &CMat) -> CMat {
        match &self.monomial {
            Some(m) => m[g].conjugate(x),
            None => &self.mats[g] * x * self.mats[g].adjoint(),
        }
    }

    /// Group average `(1/|G|) Σ_g U(g) X U(g)†`; the result commutes with
    /// every `U(g)`.
    pub fn twirl_operator(&self, x: &CMat) -> Result<CMat> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(Error::dim(self.dim, x.nrows()));
        }
        let mut acc = CMat::zeros(self.dim, self.dim);
        for g in self.group.elements() {
            acc += self.conjugate(g, x);
        }
        Ok(acc.unscale(self.group.order() as f64))
    }

    /// `max_g ‖[X, U(g)]‖` (max-abs entry).
    pub fn commutator_residual(&self, x: &CMat) -> f64 {
        self.mats
            .iter()
            .map(|u| linalg::max_abs(&(x * u - u * x)))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn same_group(a: &Arc<GroupTable>, b: &Arc<GroupTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Trivial representation of dimension `dim`.
pub fn trivial_rep(group: Arc<GroupTable>, dim: usize) -> UnitaryRep {
    let mats = vec![linalg::identity(dim); group.order()];
    UnitaryRep::from_parts(group, mats)
}

/// Left-regular representation: `U(g)|h⟩ = |gh⟩`.
pub fn regular_rep(group: Arc<GroupTable>) -> UnitaryRep {
    let n = group.order();
    let mats = group
        .elements()
        .map(|g| {
            let mut m = CMat::zeros(n, n);
            for h in 0..n {
                m[(group.mul(g, h), h)] = ONE;
            }
            m
        })
        .collect();
    UnitaryRep::from_parts(group, mats)
}

/// Permutation representation from an action: `U(g)|i⟩ = |action[g][i]⟩`.
pub fn permutation_rep(group: Arc<GroupTable>, action: &[Vec<usize>]) -> Result<UnitaryRep> {
    if action.len() != group.order() {
        return Err(Error::InvalidRep("one permutation per element required".into()));
    }
    let d = action[0].len();
    let mats = action
        .iter()
        .map(|p| {
            let mut m = CMat::zeros(d, d);
            for (i, &j) in p.iter().enumerate() {
                if j < d {
                    m[(j, i)] = ONE;
                }
            }
            m
        })
        .collect();
    UnitaryRep::new(group, mats)
}

/// Defining `n`-dimensional permutation representation of `S_n` on the
/// table produced by [`group::make_symmetric`].
pub fn symmetric_defining_rep(n: usize) -> Result<UnitaryRep> {
    let g = Arc::new(group::make_symmetric(n)?);
    let perms = group::permutations(n)
        .into_iter()
        .map(|p| p.into_iter().map(usize::from).collect())
        .collect::<Vec<Vec<usize>>>();
    permutation_rep(g, &perms)
}

/// Two-dimensional rotation/reflection representation of `D_n` on the table
/// produced by [`group::make_dihedral`].
pub fn dihedral_natural_rep(n: usize) -> Result<UnitaryRep> {
    let g = Arc::new(group::make_dihedral(n)?);
    let mats = g
        .elements()
        .map(|e| {
            let (f, k) = (e / n, e % n);
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let (s, c) = th.sin_cos();
            let rot = CMat::from_row_slice(
                2,
                2,
                &[linalg::c(c, 0.0), linalg::c(-s, 0.0), linalg::c(s, 0.0), linalg::c(c, 0.0)],
            );
            if f == 0 {
                rot
            } else {
                rot * CMat::from_diagonal(&linalg::CVec::from_vec(vec![ONE, -ONE]))
            }
        })
        .collect();
    UnitaryRep::new(g, mats)
}

/// `a(g) ⊗ b(g)`.
pub fn tensor_rep(a: &UnitaryRep, b: &UnitaryRep) -> Result<UnitaryRep> {
    if !a.same_group(b) {
        return Err(Error::GroupMismatch);
    }
    let mats = a.mats.iter().zip(&b.mats).map(|(x, y)| linalg::kron(x, y)).collect();
    Ok(UnitaryRep::from_parts(a.group.clone(), mats))
}

/// `a(g) ⊕ b(g)`.
pub fn direct_sum_rep(a: &UnitaryRep, b: &UnitaryRep) -> Result<UnitaryRep> {
    if !a.same_group(b) {
        return Err(Error::GroupMismatch);
    }
    let mats = a.mats.iter().zip(&b.mats).map(|(x, y)| linalg::direct_sum(x, y)).collect();
    Ok(UnitaryRep::from_parts(a.group.clone(), mats))
}

/// One-dimensional representation from per-element phases.
pub fn one_dim_rep(group: Arc<GroupTable>, phases: &[Complex64]) -> Result<UnitaryRep> {
    let mats = phases.iter().map(|&p| CMat::from_element(1, 1, p)).collect();
    UnitaryRep::new(group, mats)
}

/// Number-operator representation of `Z_N`: basis vector `j` carries weight
/// `weights[j]` and `U(k) = diag(e^{2πi·weights[j]·k/N})`. This is the
/// finite proxy for the U(1) phase-shift representation.
pub fn weight_rep(group: Arc<GroupTable>, weights: &[i64]) -> Result<UnitaryRep> {
    let n = group.order();
    if *group != group::make_cyclic(n)? {
        return Err(Error::InvalidParameter(
            "weight representations need the canonical cyclic table".into(),
        ));
    }
    if weights.is_empty() {
        return Err(Error::InvalidParameter("at least one weight required".into()));
    }
    let mats = (0..n)
        .map(|k| {
            let diag = weights
                .iter()
                .map(|&w| {
                    let e = (w.rem_euclid(n as i64) as usize * k) % n;
                    root_of_unity(e, n)
                })
                .collect::<Vec<_>>();
            CMat::from_diagonal(&linalg::CVec::from_vec(diag))
        })
        .collect();
    Ok(UnitaryRep::from_parts(group, mats))
}

/// Number representation on weights `0..dim`.
pub fn number_rep(group: Arc<GroupTable>, dim: usize) -> Result<UnitaryRep> {
    let w: Vec<i64> = (0..dim as i64).collect();
    weight_rep(group, &w)
}

/// `e^{2πi e/n}` with exact values at the quarter turns.
pub(crate) fn root_of_unity(e: usize, n: usize) -> Complex64 {
    let e = e % n;
    if e == 0 {
        return ONE;
    }
    if 2 * e == n {
        return -ONE;
    }
    if 4 * e == n {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * e == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    linalg::phase(2.0 * std::f64::consts::PI * e as f64 / n as f64)
}
