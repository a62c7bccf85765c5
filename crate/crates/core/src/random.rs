//! Seeded sampling of states, unitaries and channels.
//!
//! All randomness in the crate flows through an explicit [`Rng`] built from an
//! integer seed, so every run is reproducible.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{CMat, CVec};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian(n: usize, rng: &mut Rng) -> CMat {
    let g = ginibre(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the diagonal
/// phase correction.
pub fn random_unitary(n: usize, rng: &mut Rng) -> CMat {
    random_isometry(n, n, rng)
}

/// `rows × cols` matrix with orthonormal columns, `rows >= cols`.
pub fn random_isometry(rows: usize, cols: usize, rng: &mut Rng) -> CMat {
    assert!(rows >= cols, "isometry needs rows >= cols");
    if cols == 0 {
        return CMat::zeros(rows, 0);
    }
    let qr = ginibre(rows, cols, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= ph;
    }
    q
}

pub fn random_pure_vector(n: usize, rng: &mut Rng) -> CVec {
    let v = CVec::from_fn(n, |_, _| gaussian(rng));
    let norm = v.norm();
    v.unscale(norm)
}

/// Random unnormalized PSD matrix `G G†` with `G` of shape `n × rank`.
pub fn random_psd(n: usize, rank: usize, rng: &mut Rng) -> CMat {
    let g = ginibre(n, rank, rng);
    &g * g.adjoint()
}

/// Random density matrix of the given rank (trace one).
pub fn random_density(n: usize, rank: usize, rng: &mut Rng) -> CMat {
    let p = random_psd(n, rank, rng);
    let tr: f64 = p.diagonal().iter().map(|z| z.re).sum();
    p.unscale(tr)
}

/// Kraus operators of a random channel `d_in → d_out` with `k` operators,
/// taken as row blocks of a random isometry.
pub fn random_kraus(d_in: usize, d_out: usize, k: usize, rng: &mut Rng) -> Vec<CMat> {
    let iso = random_isometry(d_out * k, d_in, rng);
    (0..k)
        .map(|j| iso.rows(j * d_out, d_out).into_owned())
        .collect()
}

pub fn uniform_index(n: usize, rng: &mut Rng) -> usize {
    use rand::Rng as _;
    rng.random_range(0..n)
}

pub fn uniform_f64(rng: &mut Rng) -> f64 {
    use rand::Rng as _;
    rng.random::<f64>()
}
