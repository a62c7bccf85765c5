//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so every line is printed; exits nonzero on any failure.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;
use std::time::Instant;

use asymmetry::approx::{bound_from_charfunc, bound_from_trace_distance, fidelity, max_overlap, trace_distance_fidelity_check};
use asymmetry::bochner::{gns_construct, is_positive_definite, translation_gram};
use asymmetry::channel::{is_g_covariant, twirl_channel, QuantumChannel};
use asymmetry::equivalence::{decide_g_equivalence, decide_unitary_g_equivalence, u1_shift_equivalence, Status, EQUIV_TOL};
use asymmetry::group::{direct_product, make_cyclic, make_dihedral, make_symmetric, GroupTable};
use asymmetry::linalg::{self, c, CMat, CVec};
use asymmetry::random::{self, Rng};
use asymmetry::rep::{
    decompose, dihedral_natural_rep, direct_sum_rep, number_rep, regular_rep, symmetric_defining_rep, tensor_rep,
    trivial_rep, weight_rep,
};
use asymmetry::state::{
    charfunc, charfunc_from_reduction, fourier_inverse, reduction_onto_irreps, symmetry_subgroup, tensor_state,
    CharFunction, QuantumState, WeightState,
};
use asymmetry::{Error, IrrepDecomposition, UnitaryRep};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn ok<T>(r: asymmetry::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn groups() -> Vec<(&'static str, Arc<GroupTable>)> {
    let z2 = make_cyclic(2).unwrap();
    vec![
        ("Z2", Arc::new(z2.clone())),
        ("Z3", Arc::new(make_cyclic(3).unwrap())),
        ("Z6", Arc::new(make_cyclic(6).unwrap())),
        ("Klein", Arc::new(direct_product(&z2, &z2).unwrap())),
        ("S3", Arc::new(make_symmetric(3).unwrap())),
        ("S4", Arc::new(make_symmetric(4).unwrap())),
        ("D4", Arc::new(make_dihedral(4).unwrap())),
    ]
}

fn pure(d: usize, rng: &mut Rng) -> QuantumState {
    QuantumState::pure(random::random_pure_vector(d, rng)).unwrap()
}

fn mixed(d: usize, rng: &mut Rng) -> QuantumState {
    let rank = 1 + random::uniform_index(d, rng);
    QuantumState::mixed(random::random_density(d, rank, rng)).unwrap()
}

fn superposition(dim: usize, a: usize, b: usize) -> QuantumState {
    let mut v = CVec::zeros(dim);
    v[a] = c(FRAC_1_SQRT_2, 0.0);
    v[b] = c(FRAC_1_SQRT_2, 0.0);
    QuantumState::pure(v).unwrap()
}

/// Small non-regular representations used where missing irreps matter.
fn small_reps() -> Vec<(&'static str, UnitaryRep)> {
    let z6 = Arc::new(make_cyclic(6).unwrap());
    let d4 = dihedral_natural_rep(4).unwrap();
    let d4t = direct_sum_rep(&d4, &trivial_rep(d4.group().clone(), 1)).unwrap();
    vec![
        ("S3 defining", symmetric_defining_rep(3).unwrap()),
        ("S4 defining", symmetric_defining_rep(4).unwrap()),
        ("D4 natural+trivial", d4t),
        ("Z6 weights 1,2,4", weight_rep(z6.clone(), &[1, 2, 4]).unwrap()),
        ("Z6 weights 0,3,3,5", weight_rep(z6, &[0, 3, 3, 5]).unwrap()),
    ]
}

fn c1_decomposition() -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, g) in groups() {
        let r = regular_rep(g.clone());
        let dec = ok(decompose(&r, 0))?;
        let res = dec.reconstruction_residual(&r);
        worst = worst.max(res);
        ensure(res <= 1e-8, || format!("{name}: reconstruction residual {res:.3e}"))?;
        let sum: usize = dec.blocks().iter().map(|b| b.dim * b.dim).sum();
        ensure(sum == g.order(), || format!("{name}: Σd² = {sum} ≠ {}", g.order()))?;
        ensure(dec.blocks().len() == g.conjugacy_classes().len(), || {
            format!("{name}: {} blocks vs {} classes", dec.blocks().len(), g.conjugacy_classes().len())
        })?;
    }
    Ok(format!("7 regular reps, max residual {worst:.2e}"))
}

fn c2_fourier() -> Outcome {
    let mut rng = random::rng(2);
    let mut worst: f64 = 0.0;
    for (name, g) in groups() {
        let r = regular_rep(g.clone());
        let dec = ok(decompose(&r, 0))?;
        for i in 0..200 {
            let s = if i < 100 { pure(r.dim(), &mut rng) } else { mixed(r.dim(), &mut rng) };
            let chi = ok(charfunc(&s, &r))?;
            let red = ok(reduction_onto_irreps(&s, &dec))?;
            let e1 = ok(charfunc_from_reduction(&red, &dec))?.max_diff(&chi);
            let back = ok(fourier_inverse(&chi, &dec))?;
            let e2 = back
                .blocks()
                .iter()
                .zip(red.blocks())
                .map(|(a, b)| linalg::max_abs(&(a - b)))
                .fold(0.0, f64::max);
            worst = worst.max(e1).max(e2);
            ensure(e1 <= 1e-10 && e2 <= 1e-10, || format!("{name} state {i}: errors {e1:.3e}, {e2:.3e}"))?;
        }
    }
    Ok(format!("1400 states, max error {worst:.2e}"))
}

fn equivalence_reps() -> Vec<(&'static str, UnitaryRep)> {
    let s4 = symmetric_defining_rep(4).unwrap();
    vec![
        ("S3 regular", regular_rep(Arc::new(make_symmetric(3).unwrap()))),
        ("D4 regular", regular_rep(Arc::new(make_dihedral(4).unwrap()))),
        ("S4 defining x2", direct_sum_rep(&s4, &s4).unwrap()),
        ("Z6 weights", weight_rep(Arc::new(make_cyclic(6).unwrap()), &[0, 1, 1, 2, 2, 2]).unwrap()),
    ]
}

/// Random G-invariant unitary from the polar factor of a twirled matrix;
/// independent of any decomposition.
fn twirled_unitary(r: &UnitaryRep, rng: &mut Rng) -> CMat {
    let x = random::ginibre(r.dim(), r.dim(), rng);
    linalg::polar_unitary(&r.twirl_operator(&x).unwrap())
}

fn phase_free_error(v: &CMat, psi: &QuantumState, phi: &QuantumState) -> f64 {
    let out = v * psi.vector().unwrap();
    let f = phi.vector().unwrap();
    let ov = f.dotc(&out);
    let ph = if ov.norm() > 0.0 { ov / ov.norm() } else { linalg::ONE };
    (out - f * ph).norm()
}

fn c3_positive() -> Outcome {
    let mut rng = random::rng(3);
    let mut worst: f64 = 0.0;
    for (name, r) in equivalence_reps() {
        let dec = ok(decompose(&r, 0))?;
        for i in 0..25 {
            let psi = pure(r.dim(), &mut rng);
            let v = dec.random_invariant_unitary(&mut rng);
            ensure(r.commutator_residual(&v) < 1e-9, || format!("{name}: sampled V not invariant"))?;
            let phi = ok(psi.transformed(&v))?;
            let verdict = ok(decide_unitary_g_equivalence(&psi, &phi, &dec, EQUIV_TOL))?;
            ensure(verdict.status == Status::Equivalent, || format!("{name} pair {i}: {:?}", verdict.status))?;
            let w = verdict.witness.as_ref().ok_or("missing witness")?;
            let err = phase_free_error(w, &psi, &phi);
            let comm = r.commutator_residual(w);
            worst = worst.max(err);
            ensure(err <= 1e-8 && comm <= 1e-8, || format!("{name} pair {i}: map error {err:.3e}, commutator {comm:.3e}"))?;
        }
    }
    Ok(format!("100 pairs Equivalent, max witness error {worst:.2e}"))
}

fn c4_negative() -> Outcome {
    let mut rng = random::rng(4);
    let mut min_gap = f64::INFINITY;
    let mut count = 0;
    for (name, r) in equivalence_reps() {
        let dec = ok(decompose(&r, 0))?;
        let other = ok(decompose(&r, 17))?;
        while count < 25 * (1 + equivalence_reps().iter().position(|(n, _)| *n == name).unwrap()) {
            let psi = pure(r.dim(), &mut rng);
            let eps = 0.05 + 0.25 * random::uniform_f64(&mut rng);
            let xi = random::random_pure_vector(r.dim(), &mut rng);
            let moved = dec.random_invariant_unitary(&mut rng) * (psi.vector().unwrap() + xi * c(eps, 0.0));
            let phi = ok(QuantumState::pure_normalized(moved))?;
            let fa = ok(reduction_onto_irreps(&psi, &dec))?;
            let fb = ok(reduction_onto_irreps(&phi, &dec))?;
            let gap = fa.max_trace_distance(&fb);
            if gap < 1e-3 {
                continue;
            }
            min_gap = min_gap.min(gap);
            let verdict = ok(decide_unitary_g_equivalence(&psi, &phi, &dec, EQUIV_TOL))?;
            ensure(verdict.status == Status::NotEquivalent, || format!("{name}: gap {gap:.2e} judged {:?}", verdict.status))?;
            let opt = ok(max_overlap(&psi, &phi, &dec))?.optimal;
            for k in 0..200 {
                let v = if k % 2 == 0 { other.random_invariant_unitary(&mut rng) } else { twirled_unitary(&r, &mut rng) };
                let o = phi.vector().unwrap().dotc(&(&v * psi.vector().unwrap())).norm();
                ensure(o <= opt + 1e-8, || format!("{name}: sampled overlap {o} exceeds optimum {opt}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} pairs NotEquivalent (min reduction gap {min_gap:.2e}), 200 samples each below optimum"))
}

struct OverlapCase {
    psi1: QuantumState,
    psi2: QuantumState,
    dec: IrrepDecomposition,
}

fn overlap_cases() -> Vec<OverlapCase> {
    let mut rng = random::rng(5);
    let reps = [
        regular_rep(Arc::new(make_symmetric(3).unwrap())),
        regular_rep(Arc::new(make_dihedral(4).unwrap())),
    ];
    let mut out = Vec::new();
    for r in &reps {
        let dec = decompose(r, 0).unwrap();
        for _ in 0..50 {
            out.push(OverlapCase { psi1: pure(r.dim(), &mut rng), psi2: pure(r.dim(), &mut rng), dec: dec.clone() });
        }
    }
    out
}

fn c5_achievability(cases: &[OverlapCase]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, cs) in cases.iter().enumerate() {
        let rep = ok(max_overlap(&cs.psi1, &cs.psi2, &cs.dec))?;
        let achieved = cs.psi2.vector().unwrap().dotc(&(&rep.witness * cs.psi1.vector().unwrap())).norm();
        let f1 = ok(reduction_onto_irreps(&cs.psi1, &cs.dec))?;
        let f2 = ok(reduction_onto_irreps(&cs.psi2, &cs.dec))?;
        let mut fid_sum = 0.0;
        for mu in 0..cs.dec.blocks().len() {
            fid_sum += ok(fidelity(f1.block(mu), f2.block(mu)))?;
        }
        let err = (achieved - fid_sum).abs();
        worst = worst.max(err);
        ensure(err <= 1e-10, || format!("pair {i}: |⟨ψ₂|Vψ₁⟩| = {achieved}, Σ Fid = {fid_sum}"))?;
    }

    // 3-dim Z2 example
    let g = Arc::new(make_cyclic(2).unwrap());
    let sign = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]));
    let r = ok(UnitaryRep::new(g, vec![linalg::identity(3), sign]))?;
    let dec = ok(decompose(&r, 0))?;
    let psi1 = QuantumState::basis(3, 0);
    let psi2 = ok(QuantumState::pure(CVec::from_vec(vec![c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)])))?;
    let opt = ok(max_overlap(&psi1, &psi2, &dec))?.optimal;
    ensure((opt - FRAC_1_SQRT_2).abs() <= 1e-9, || format!("Z2 example optimum {opt}"))?;
    // oracle: grid over invariant unitaries diag(U₂(t, φ), e^{iβ}),
    // U₂ = [[cos t, −e^{−iφ} sin t], [e^{iφ} sin t, cos t]]
    let mut best: f64 = 0.0;
    let steps = 400;
    for i in 0..=steps {
        let t = PI * i as f64 / steps as f64;
        for j in 0..16 {
            let ph = 2.0 * PI * j as f64 / 16.0;
            let (s, co) = t.sin_cos();
            let u = CMat::from_row_slice(3, 3, &[
                c(co, 0.0), -linalg::phase(-ph) * s, c(0.0, 0.0),
                linalg::phase(ph) * s, c(co, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.0, 0.0), linalg::phase(ph),
            ]);
            debug_assert!(r.commutator_residual(&u) < 1e-12);
            best = best.max(psi2.vector().unwrap().dotc(&(&u * psi1.vector().unwrap())).norm());
        }
    }
    ensure((best - opt).abs() <= 1e-6, || format!("grid oracle {best} vs optimum {opt}"))?;
    Ok(format!("100 pairs, max |overlap − ΣFid| {worst:.2e}; Z2 example {opt:.12} (grid {best:.12})"))
}

fn c6_bounds(cases: &[OverlapCase]) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for (i, cs) in cases.iter().enumerate() {
        let opt = ok(max_overlap(&cs.psi1, &cs.psi2, &cs.dec))?.optimal;
        let bt = ok(bound_from_trace_distance(&cs.psi1, &cs.psi2, &cs.dec))?;
        let (bg, bp) = ok(bound_from_charfunc(&cs.psi1, &cs.psi2, &cs.dec))?;
        for (name, b) in [("trace", bt), ("charfunc global", bg), ("charfunc per-μ", bp)] {
            worst = worst.max(b - opt);
            ensure(b <= opt + 1e-8, || format!("pair {i}: {name} bound {b} > optimum {opt}"))?;
        }
    }
    let mut rng = random::rng(6);
    for i in 0..1000 {
        let d = 1 + random::uniform_index(6, &mut rng);
        let a = random::random_psd(d, 1 + random::uniform_index(d, &mut rng), &mut rng);
        let b = random::random_psd(d, 1 + random::uniform_index(d, &mut rng), &mut rng);
        ensure(ok(trace_distance_fidelity_check(&a, &b))?, || format!("PSD pair {i} violates the inequality"))?;
    }
    Ok(format!("300 bounds ≤ optimum (max bound − optimum {worst:.2e}); 1000 PSD pairs satisfy the trace/fidelity inequality"))
}

fn c7_u1_story() -> Outcome {
    let n = 16;
    let g = Arc::new(make_cyclic(n).unwrap());
    let r = ok(number_rep(g.clone(), n))?;
    let psi = superposition(n, 0, 1);
    let phi = superposition(n, 2, 3);
    let dec = ok(decompose(&r, 0))?;
    let u = ok(decide_unitary_g_equivalence(&psi, &phi, &dec, EQUIV_TOL))?;
    ensure(u.status == Status::NotEquivalent, || format!("unitary verdict {:?}", u.status))?;
    let reg = ok(decompose(&regular_rep(g), 0))?;
    let v = ok(decide_g_equivalence(&psi, &phi, &r, &reg, EQUIV_TOL))?;
    ensure(v.status == Status::Equivalent, || format!("G-equivalence verdict {:?}", v.status))?;
    let omega = v.one_dim_rep.ok_or("missing ω")?;
    let werr = omega
        .iter()
        .enumerate()
        .map(|(k, w)| (w - linalg::phase(4.0 * PI * k as f64 / n as f64)).norm())
        .fold(0.0, f64::max);
    ensure(werr <= 1e-10, || format!("ω deviates from e^(4πik/16) by {werr:.3e}"))?;
    let weights: Vec<u32> = (0..n as u32).collect();
    let wa = ok(WeightState::from_state(&psi, &weights))?;
    let wb = ok(WeightState::from_state(&phi, &weights))?;
    let delta = u1_shift_equivalence(&wa, &wb, 1e-9);
    ensure(delta == Some(2), || format!("Δ = {delta:?}"))?;
    let shift = QuantumChannel::shift(n, 2);
    let chk = ok(is_g_covariant(&shift, &r, &r, 1e-10))?;
    ensure(chk.covariant && chk.residual <= 1e-10, || format!("shift covariance residual {:.3e}", chk.residual))?;
    let out = ok(shift.apply(&psi))?;
    let serr = linalg::max_abs(&(out.density() - phi.density()));
    ensure(serr <= 1e-10, || format!("shifted state error {serr:.3e}"))?;
    Ok(format!("not unitarily equivalent; ω error {werr:.1e}; Δ = 2; shift residual {:.1e}, state error {serr:.1e}", chk.residual))
}

fn c8_mixed_counterexample() -> Outcome {
    let n = 16;
    let r = ok(number_rep(Arc::new(make_cyclic(n).unwrap()), n))?;
    let p = superposition(n, 0, 1);
    let mut rho = CMat::zeros(n, n);
    rho[(0, 0)] = c(0.5, 0.0);
    rho[(1, 1)] = c(0.5, 0.0);
    let m = ok(QuantumState::mixed(rho))?;
    let diff = ok(charfunc(&p, &r))?.max_diff(&ok(charfunc(&m, &r))?);
    ensure(diff <= 1e-12, || format!("characteristic functions differ by {diff:.3e}"))?;
    let dec = ok(decompose(&r, 0))?;
    let reg = ok(decompose(&regular_rep(r.group().clone()), 0))?;
    let e1 = decide_unitary_g_equivalence(&p, &m, &dec, EQUIV_TOL);
    let e2 = decide_g_equivalence(&m, &p, &r, &reg, EQUIV_TOL);
    ensure(matches!(e1, Err(Error::PureOnly(_))), || format!("unitary decider returned {e1:?}"))?;
    ensure(matches!(e2, Err(Error::PureOnly(_))), || format!("G-equivalence decider returned {e2:?}"))?;
    Ok(format!("χ difference {diff:.1e}; both deciders raise the pure-only error"))
}

fn gram_oracle_psd(f: &CharFunction) -> bool {
    let x = translation_gram(f);
    if linalg::hermitian_residual(&x) > 1e-9 {
        return false;
    }
    let vals = linalg::eigvalsh(&linalg::hermitian_part(&x));
    vals[0] >= -1e-9 * vals[vals.len() - 1].abs().max(1.0)
}

fn c9_bochner() -> Outcome {
    let mut rng = random::rng(9);
    let mut reps: Vec<UnitaryRep> = small_reps().into_iter().map(|(_, r)| r).collect();
    reps.push(regular_rep(Arc::new(make_symmetric(3).unwrap())));
    reps.push(regular_rep(Arc::new(make_dihedral(4).unwrap())));
    let decs: Vec<IrrepDecomposition> = reps.iter().map(|r| decompose(&regular_rep(r.group().clone()), 0).unwrap()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let k = i % reps.len();
        let r = &reps[k];
        let s = if i % 2 == 0 { pure(r.dim(), &mut rng) } else { mixed(r.dim(), &mut rng) };
        let chi = ok(charfunc(&s, r))?;
        let rep = ok(is_positive_definite(&chi, &decs[k]))?;
        ensure(rep.positive_definite && rep.normalized, || format!("state {i}: valid χ rejected (min eig {:.3e})", rep.min_eigenvalue))?;
        let gns = ok(gns_construct(&chi))?;
        let err = ok(charfunc(&gns.state, &gns.rep))?.max_diff(&chi);
        worst = worst.max(err);
        ensure(err <= 1e-9, || format!("state {i}: GNS χ error {err:.3e}"))?;
    }

    let small = small_reps();
    let mut detected = 0;
    for i in 0..100 {
        let (_, r) = &small[i % small.len()];
        let dec = ok(decompose(&regular_rep(r.group().clone()), 0))?;
        let chi = ok(charfunc(&pure(r.dim(), &mut rng), r))?;
        let g = 1 + random::uniform_index(r.group().order() - 1, &mut rng);
        let mut values = chi.values().to_vec();
        values[g] -= c(0.1, 0.0);
        let f = ok(CharFunction::new(r.group().clone(), values))?;
        let verdict = ok(is_positive_definite(&f, &dec))?.positive_definite;
        let oracle = gram_oracle_psd(&f);
        ensure(verdict == oracle, || format!("trial {i}: decider {verdict} vs Gram oracle {oracle}"))?;
        if !verdict {
            detected += 1;
        }
    }
    ensure(detected >= 95, || format!("only {detected}/100 perturbations detected"))?;
    Ok(format!("100 χ validated, max GNS error {worst:.2e}; {detected}/100 perturbations rejected, all verdicts match the Gram oracle"))
}

/// Pure state invariant (up to phase) under the cyclic subgroup generated
/// by a random element: a random vector inside one eigenspace of U(h).
fn symmetric_pure(r: &UnitaryRep, rng: &mut Rng) -> QuantumState {
    let h = random::uniform_index(r.group().order(), rng);
    let u = r.mat(h);
    let herm = linalg::hermitian_part(&(u + u.adjoint()));
    let anti = (u - u.adjoint()) * c(0.0, -0.5);
    // U(h) is normal; a generic real combination of its Hermitian and
    // anti-Hermitian parts shares its eigenspaces.
    let (vals, vecs) = linalg::eigh(&(herm + anti * c(std::f64::consts::E, 0.0)));
    let pick = random::uniform_index(vals.len(), rng);
    let mut v = CVec::zeros(r.dim());
    for (k, &l) in vals.iter().enumerate() {
        if (l - vals[pick]).abs() < 1e-9 {
            v += vecs.column(k) * random::gaussian(rng);
        }
    }
    QuantumState::pure_normalized(v).unwrap()
}

fn c10_properties() -> Outcome {
    let mut rng = random::rng(10);
    let mut cases: Vec<(&str, UnitaryRep)> = small_reps();
    cases.push(("Klein regular", regular_rep(groups()[3].1.clone())));
    cases.push(("S3 regular", regular_rep(Arc::new(make_symmetric(3).unwrap()))));
    cases.push(("Z2 regular", regular_rep(groups()[0].1.clone())));
    cases.push(("Z3 weights 0,1,1,2", weight_rep(groups()[1].1.clone(), &[0, 1, 1, 2]).unwrap()));
    let mut total = 0;
    let mut sym_nontrivial = 0;
    for (name, r) in &cases {
        let g = r.group().clone();
        let dec = ok(decompose(r, 0))?;
        let rr = ok(tensor_rep(r, r))?;
        for i in 0..50 {
            let s = match i % 3 {
                0 => pure(r.dim(), &mut rng),
                1 => mixed(r.dim(), &mut rng),
                _ => symmetric_pure(r, &mut rng),
            };
            let chi = ok(charfunc(&s, r))?;
            let at = |p: String| format!("{name} instance {i}: {p}");
            ensure((chi.at(0) - linalg::ONE).norm() <= 1e-12, || at(format!("χ(e) = {}", chi.at(0))))?;
            ensure(chi.values().iter().all(|z| z.norm() <= 1.0 + 1e-12), || at("|χ| > 1".into()))?;

            let s2 = mixed(r.dim(), &mut rng);
            let lhs = ok(charfunc(&tensor_state(&s, &s2), &rr))?;
            let rhs = ok(chi.pointwise_mul(&ok(charfunc(&s2, r))?))?;
            ensure(lhs.max_diff(&rhs) <= 1e-12, || at(format!("tensor residual {:.3e}", lhs.max_diff(&rhs))))?;

            let h = random::uniform_index(g.order(), &mut rng);
            let moved = ok(charfunc(&ok(s.transformed(r.mat(h)))?, r))?;
            for x in g.elements() {
                let expect = chi.at(g.mul(g.mul(g.inv(h), x), h));
                ensure((moved.at(x) - expect).norm() <= 1e-12, || at(format!("conjugate action fails at g={x}, h={h}")))?;
            }

            let v = dec.random_invariant_unitary(&mut rng);
            let inv = ok(charfunc(&ok(s.transformed(&v))?, r))?;
            ensure(inv.max_diff(&chi) <= 1e-10, || at("χ changed under an invariant unitary".into()))?;

            let rho = s.density();
            let mut sum = vec![linalg::ZERO; g.order()];
            for mu in 0..dec.blocks().len() {
                let p = dec.projector(mu);
                let part = &p * &rho * &p;
                for (x, acc) in sum.iter_mut().enumerate() {
                    *acc += linalg::trace(&(&part * r.mat(x)));
                }
            }
            let add = sum.iter().zip(chi.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            ensure(add <= 1e-10, || at(format!("sector additivity residual {add:.3e}")))?;

            let sym = ok(symmetry_subgroup(&s, r, 1e-8))?;
            if s.is_pure() {
                for x in g.elements() {
                    let unit = (chi.at(x).norm() - 1.0).abs() <= 1e-10;
                    ensure(unit == sym.contains(x), || at(format!("|χ|=1 vs symmetry disagree at g={x}")))?;
                }
            } else {
                for x in g.elements() {
                    if (chi.at(x).norm() - 1.0).abs() <= 1e-12 {
                        ensure(sym.contains(x), || at(format!("|χ(g)|=1 but g={x} not a symmetry")))?;
                    }
                }
            }
            if sym.len() > 1 {
                sym_nontrivial += 1;
            }
            total += 1;
        }
    }
    Ok(format!("{total} instances over {} reps ({sym_nontrivial} with nontrivial symmetry)", cases.len()))
}

fn c11_monotonicity() -> Outcome {
    let mut rng = random::rng(11);
    let reps: Vec<UnitaryRep> = vec![
        symmetric_defining_rep(3).unwrap(),
        number_rep(Arc::new(make_cyclic(4).unwrap()), 4).unwrap(),
        regular_rep(Arc::new(make_dihedral(3).unwrap())),
        small_reps().remove(2).1,
    ];
    let mut violations = 0;
    let mut nontrivial = 0;
    for ch in 0..20 {
        let r = &reps[ch % reps.len()];
        let d = r.dim();
        let raw = ok(QuantumChannel::new(random::random_kraus(d, d, 1 + ch % 4, &mut rng)))?;
        let e = ok(twirl_channel(&raw, r))?;
        let chk = ok(is_g_covariant(&e, r, r, 1e-10))?;
        ensure(chk.covariant, || format!("channel {ch}: twirl not covariant ({:.3e})", chk.residual))?;
        for i in 0..50 {
            let s = match i % 3 {
                0 => symmetric_pure(r, &mut rng),
                1 => {
                    // twirl a random state over a random cyclic subgroup
                    let h = random::uniform_index(r.group().order(), &mut rng);
                    let k = r.group().generated_subgroup(&[h]);
                    let rho = mixed(d, &mut rng).density();
                    let mut acc = CMat::zeros(d, d);
                    for &x in k.elements() {
                        acc += r.conjugate(x, &rho);
                    }
                    ok(QuantumState::mixed(acc.unscale(k.len() as f64)))?
                }
                _ => pure(d, &mut rng),
            };
            let before = ok(symmetry_subgroup(&s, r, 1e-8))?;
            let after = ok(symmetry_subgroup(&ok(e.apply(&s))?, r, 1e-8))?;
            if before.len() > 1 {
                nontrivial += 1;
            }
            if !before.is_subset_of(&after) {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("20 channels × 50 states, 0 violations ({nontrivial} inputs with nontrivial symmetry)"))
}

fn main() {
    let cases = overlap_cases();
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        ("decomposition correctness", Box::new(c1_decomposition)),
        ("Fourier round trip", Box::new(c2_fourier)),
        ("unitary equivalence, positive cases", Box::new(c3_positive)),
        ("unitary equivalence, negative cases", Box::new(c4_negative)),
        ("optimal overlap achievability", Box::new(|| c5_achievability(&cases))),
        ("overlap lower bounds", Box::new(|| c6_bounds(&cases))),
        ("U(1) narrative on Z16", Box::new(c7_u1_story)),
        ("mixed-state counterexample", Box::new(c8_mixed_counterexample)),
        ("positive definiteness and GNS", Box::new(c9_bochner)),
        ("characteristic function properties", Box::new(c10_properties)),
        ("symmetry monotonicity", Box::new(c11_monotonicity)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS [{:>2}] {name}: {msg} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {msg} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
