//! Ensembles of oscillators with indefinite frequency: a truncated Fock
//! realization used as a brute-force oracle, binomial frequency-of-success
//! statistics, Rényi-deformed Poisson photon counts, Kolmogorov–Nagumo
//! averages and radiative shifts of the vacuum energy.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use statrs::distribution::{Binomial, Discrete, Poisson};

use crate::coulomb;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::vacuum::{infrared_condition_check, VacuumProfile};

/// Default cap on the dimension of the N-fold tensor space.
pub const DEFAULT_DIMENSION_CAP: usize = 2_000_000;

/// Operators of one oscillator on span{|ω, n⟩ : ω ∈ Ω, 0 ≤ n ≤ n_max},
/// index ω·(n_max+1) + n. N-fold operators are applied slot by slot.
#[derive(Debug, Clone)]
pub struct TruncatedRep {
    pub omegas: Vec<f64>,
    pub weights: Vec<f64>,
    pub n_max: usize,
    pub n_osc: usize,
    /// a_ω on a single oscillator, one block per frequency
    pub lowering: Vec<DMatrix<f64>>,
    /// I_ω = |ω⟩⟨ω| ⊗ 1
    pub projector: Vec<DMatrix<f64>>,
    /// |ω⟩⟨ω| ⊗ â†â
    pub number: Vec<DMatrix<f64>>,
}

/// The N-fold operators a_ω(N), a_ω(N)†, I_ω(N), ñ_ω(N).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Lower(usize),
    Raise(usize),
    Success(usize),
    Number(usize),
}

pub fn build_rep(omegas: &[f64], weights: &[f64], n_max: usize, n_osc: usize) -> Result<TruncatedRep> {
    build_rep_capped(omegas, weights, n_max, n_osc, DEFAULT_DIMENSION_CAP)
}

pub fn build_rep_capped(
    omegas: &[f64],
    weights: &[f64],
    n_max: usize,
    n_osc: usize,
    cap: usize,
) -> Result<TruncatedRep> {
    if omegas.is_empty() || omegas.len() != weights.len() {
        return Err(Error::Domain("need one weight per frequency".into()));
    }
    if omegas.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::Domain("frequencies must be positive".into()));
    }
    for (i, a) in omegas.iter().enumerate() {
        if omegas[..i].contains(a) {
            return Err(Error::Domain(format!("frequency {a} repeated")));
        }
    }
    if weights.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain("weights must be probabilities summing to 1".into()));
    }
    if n_max == 0 || n_osc == 0 {
        return Err(Error::Domain("n_max and N must be positive".into()));
    }
    let d = omegas.len() * (n_max + 1);
    let dim = (d as f64).powi(n_osc as i32);
    if dim > cap as f64 {
        return Err(Error::DimensionCap {
            dim: dim.min(usize::MAX as f64) as usize,
            cap,
        });
    }
    let levels = n_max + 1;
    let mut lowering = Vec::new();
    let mut projector = Vec::new();
    let mut number = Vec::new();
    for w in 0..omegas.len() {
        let mut a = DMatrix::zeros(d, d);
        let mut p = DMatrix::zeros(d, d);
        let mut n = DMatrix::zeros(d, d);
        for k in 0..levels {
            let i = w * levels + k;
            p[(i, i)] = 1.0;
            n[(i, i)] = k as f64;
            if k > 0 {
                a[(i - 1, i)] = (k as f64).sqrt();
            }
        }
        lowering.push(a);
        projector.push(p);
        number.push(n);
    }
    Ok(TruncatedRep {
        omegas: omegas.to_vec(),
        weights: weights.to_vec(),
        n_max,
        n_osc,
        lowering,
        projector,
        number,
    })
}

impl TruncatedRep {
    pub fn single_dim(&self) -> usize {
        self.omegas.len() * (self.n_max + 1)
    }

    pub fn dim(&self) -> usize {
        self.single_dim().pow(self.n_osc as u32)
    }

    /// (frequency index, occupation) of each slot of a basis index.
    pub fn decode(&self, mut idx: usize) -> Vec<(usize, usize)> {
        let d = self.single_dim();
        let levels = self.n_max + 1;
        let mut out = vec![(0, 0); self.n_osc];
        for slot in (0..self.n_osc).rev() {
            let s = idx % d;
            idx /= d;
            out[slot] = (s / levels, s % levels);
        }
        out
    }

    /// (Σ_ω √p_ω |ω, 0⟩)^{⊗N}
    pub fn vacuum(&self) -> Vec<Complex64> {
        let d = self.single_dim();
        let levels = self.n_max + 1;
        let mut single = vec![0.0; d];
        for (w, &p) in self.weights.iter().enumerate() {
            single[w * levels] = p.sqrt();
        }
        let mut v = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..self.n_osc {
            let mut next = Vec::with_capacity(v.len() * d);
            for x in &v {
                for &s in &single {
                    next.push(x * s);
                }
            }
            v = next;
        }
        v
    }

    fn single(&self, op: Op) -> Result<(&DMatrix<f64>, bool, f64)> {
        let nf = self.n_osc as f64;
        let check = |w: usize| {
            if w < self.omegas.len() {
                Ok(())
            } else {
                Err(Error::Domain(format!("frequency index {w} out of range")))
            }
        };
        Ok(match op {
            Op::Lower(w) => {
                check(w)?;
                (&self.lowering[w], false, 1.0 / nf.sqrt())
            }
            Op::Raise(w) => {
                check(w)?;
                (&self.lowering[w], true, 1.0 / nf.sqrt())
            }
            Op::Success(w) => {
                check(w)?;
                (&self.projector[w], false, 1.0 / nf)
            }
            Op::Number(w) => {
                check(w)?;
                (&self.number[w], false, 1.0)
            }
        })
    }

    /// Apply an N-fold operator to a state vector.
    pub fn apply(&self, op: Op, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let (m, transpose, scale) = self.single(op)?;
        let d = self.single_dim();
        if v.len() != self.dim() {
            return Err(Error::Domain("state has the wrong dimension".into()));
        }
        // the single-oscillator blocks are sparse; walk their nonzeros only
        let mut entries = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let mij = if transpose { m[(j, i)] } else { m[(i, j)] };
                if mij != 0.0 {
                    entries.push((i, j, mij * scale));
                }
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for slot in 0..self.n_osc {
            let stride = d.pow((self.n_osc - 1 - slot) as u32);
            let block = stride * d;
            for base in (0..v.len()).step_by(block) {
                for &(i, j, mij) in &entries {
                    let src = base + j * stride;
                    let dst = base + i * stride;
                    for inner in 0..stride {
                        out[dst + inner] += v[src + inner] * mij;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Dense matrix of an N-fold operator (small spaces only).
    pub fn dense(&self, op: Op) -> Result<DMatrix<f64>> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.apply(op, &e)?;
            for i in 0..n {
                m[(i, j)] = col[i].re;
            }
            e[j] = Complex64::new(0.0, 0.0);
        }
        Ok(m)
    }

    /// Total excitation of a basis index.
    pub fn excitation(&self, idx: usize) -> usize {
        self.decode(idx).iter().map(|s| s.1).sum()
    }

    /// exp(Σ_ω α_ω a_ω(N)† − ᾱ_ω a_ω(N)) |O,N⟩ by Taylor series on the
    /// full vector.
    pub fn coherent_state(&self, alphas: &[Complex64]) -> Result<Vec<Complex64>> {
        if alphas.len() != self.omegas.len() {
            return Err(Error::Domain("need one amplitude per frequency".into()));
        }
        let gen = |v: &[Complex64]| -> Result<Vec<Complex64>> {
            let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
            for (w, &al) in alphas.iter().enumerate() {
                if al == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let up = self.apply(Op::Raise(w), v)?;
                let down = self.apply(Op::Lower(w), v)?;
                for i in 0..out.len() {
                    out[i] += al * up[i] - al.conj() * down[i];
                }
            }
            Ok(out)
        };
        let mut term = self.vacuum();
        let mut sum = term.clone();
        for k in 1..400 {
            let next = gen(&term)?;
            term = next.into_iter().map(|x| x / k as f64).collect();
            let norm: f64 = term.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
            }
            if norm < 1e-17 {
                return Ok(sum);
            }
        }
        Err(Error::NonConvergence("displacement series".into()))
    }
}

/// Frobenius norm of [a_ω(N), a_ω′(N)†] − δI_ω(N) and [a_ω(N), ñ_ω′(N)] − δa_ω(N)
/// on basis vectors whose every slot sits below the cutoff, maximized over
/// frequency pairs.
pub fn commutator_residual(rep: &TruncatedRep) -> Result<f64> {
    let n = rep.dim();
    let nw = rep.omegas.len();
    let mut worst = 0.0f64;
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for w in 0..nw {
        for w2 in 0..nw {
            let mut ladder = 0.0;
            let mut number = 0.0;
            for j in 0..n {
                if rep.decode(j).iter().any(|s| s.1 >= rep.n_max) {
                    continue;
                }
                e[j] = Complex64::new(1.0, 0.0);
                let ad = rep.apply(Op::Raise(w2), &e)?;
                let a_ad = rep.apply(Op::Lower(w), &ad)?;
                let a = rep.apply(Op::Lower(w), &e)?;
                let ad_a = rep.apply(Op::Raise(w2), &a)?;
                let id = rep.apply(Op::Success(w), &e)?;
                let nn = rep.apply(Op::Number(w2), &e)?;
                let a_n = rep.apply(Op::Lower(w), &nn)?;
                let n_a = rep.apply(Op::Number(w2), &a)?;
                let delta = if w == w2 { 1.0 } else { 0.0 };
                for i in 0..n {
                    ladder += (a_ad[i] - ad_a[i] - id[i] * delta).norm_sqr();
                    number += (a_n[i] - n_a[i] - a[i] * delta).norm_sqr();
                }
                e[j] = Complex64::new(0.0, 0.0);
            }
            worst = worst.max(ladder.sqrt()).max(number.sqrt());
        }
    }
    Ok(worst)
}

/// Eigenvalues of I_ω(N) from its dense matrix, ascending and deduplicated.
pub fn success_spectrum(rep: &TruncatedRep, w: usize) -> Result<Vec<f64>> {
    let m = rep.dense(Op::Success(w))?;
    let eig = SymmetricEigen::new(m);
    let mut v: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
    Ok(v)
}

/// ⟨ψ|Π_ω(s/N)|ψ⟩: weight of basis states in which exactly s slots carry ω.
pub fn projector_expectation(rep: &TruncatedRep, w: usize, s: usize, psi: &[Complex64]) -> f64 {
    psi.iter()
        .enumerate()
        .filter(|(i, _)| rep.decode(*i).iter().filter(|x| x.0 == w).count() == s)
        .map(|(_, x)| x.norm_sqr())
        .sum()
}

/// ⟨ψ|Π(n,N)|ψ⟩: weight of total excitation n.
pub fn excitation_probability(rep: &TruncatedRep, n: usize, psi: &[Complex64]) -> f64 {
    psi.iter()
        .enumerate()
        .filter(|(i, _)| rep.excitation(*i) == n)
        .map(|(_, x)| x.norm_sqr())
        .sum()
}

/// Smallest cutoff whose per-slot coherent tail w^{n+1}/(n+1)! is below `tol`.
pub fn cutoff_for_intensity(per_slot_intensity: f64, tol: f64) -> usize {
    let mut term = 1.0;
    let mut n = 0usize;
    loop {
        term *= per_slot_intensity / (n + 1) as f64;
        if term < tol || n > 200 {
            return n.max(1);
        }
        n += 1;
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("probability must lie in [0, 1], got {p}")))
    }
}

/// C(N,s) pˢ(1−p)^{N−s}.
pub fn binomial_projector_prob(p: f64, n: u64, s: u64) -> Result<f64> {
    check_probability(p)?;
    if s > n {
        return Ok(0.0);
    }
    let b = Binomial::new(p, n).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(b.pmf(s))
}

/// Σ_s F(s/N) C(N,s) pˢ(1−p)^{N−s}.
pub fn wlln_average<F: Fn(f64) -> f64>(f: F, p: f64, n: u64) -> Result<f64> {
    check_probability(p)?;
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let b = Binomial::new(p, n).map_err(|e| Error::Domain(e.to_string()))?;
    Ok((0..=n).map(|s| f(s as f64 / n as f64) * b.pmf(s)).sum())
}

fn check_distribution(probs: &[f64], values: &[f64]) -> Result<()> {
    if probs.is_empty() || probs.len() != values.len() {
        return Err(Error::Domain("need one probability per value".into()));
    }
    if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain("probabilities must sum to 1".into()));
    }
    Ok(())
}

/// Largest (|p|, n) accepted by the coefficient extraction.
pub const MAX_PMF_ORDER: usize = 4096;
pub const MAX_PMF_MODES: usize = 4096;

fn truncated_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n + 1 - i) {
            c[i + j] += x * y;
        }
    }
    c
}

/// p(n, N) = (1/n!) dⁿ/dλⁿ (Σᵢ pᵢ e^{λwᵢ/N})^N at λ = −1, by exact
/// extraction of Taylor coefficients in μ = λ + 1.
pub fn renyi_poisson_pmf(probs: &[f64], intensities: &[f64], n_osc: u64, n: usize) -> Result<f64> {
    Ok(renyi_poisson_table(probs, intensities, n_osc, n)?[n])
}

/// p(0..=n_max, N) in one pass.
pub fn renyi_poisson_table(probs: &[f64], intensities: &[f64], n_osc: u64, n_max: usize) -> Result<Vec<f64>> {
    check_distribution(probs, intensities)?;
    if intensities.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
        return Err(Error::Domain("intensities must be finite and >= 0".into()));
    }
    if n_osc == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    if n_max > MAX_PMF_ORDER || probs.len() > MAX_PMF_MODES {
        return Err(Error::CombinatorialCap(format!(
            "order {n_max} with {} modes exceeds the cap",
            probs.len()
        )));
    }
    let nf = n_osc as f64;
    // one factor: Σᵢ pᵢ e^{−wᵢ/N} (wᵢ/N)^k / k!
    let mut factor = vec![0.0; n_max + 1];
    for (&p, &w) in probs.iter().zip(intensities) {
        let x = w / nf;
        let mut t = p * (-x).exp();
        for (k, c) in factor.iter_mut().enumerate() {
            if k > 0 {
                t *= x / k as f64;
            }
            *c += t;
        }
    }
    let mut result = vec![0.0; n_max + 1];
    result[0] = 1.0;
    let mut base = factor;
    let mut e = n_osc;
    while e > 0 {
        if e & 1 == 1 {
            result = truncated_mul(&result, &base, n_max);
        }
        e >>= 1;
        if e > 0 {
            base = truncated_mul(&base, &base, n_max);
        }
    }
    Ok(result)
}

/// Poisson with parameter Σᵢ pᵢwᵢ, the N → ∞ limit.
pub fn shannon_poisson_pmf(probs: &[f64], intensities: &[f64], n: u64) -> Result<f64> {
    check_distribution(probs, intensities)?;
    let mean: f64 = probs.iter().zip(intensities).map(|(p, w)| p * w).sum();
    if mean == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let d = Poisson::new(mean).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(d.pmf(n))
}

/// (1/(1−q)) ln Σ pᵢ e^{(1−q)Aᵢ}; the arithmetic mean when |1−q| < 1e−8.
pub fn kn_average(q: f64, probs: &[f64], values: &[f64]) -> Result<f64> {
    check_distribution(probs, values)?;
    let t = 1.0 - q;
    if t.abs() < 1e-8 {
        return Ok(probs.iter().zip(values).map(|(p, a)| p * a).sum());
    }
    let m = values
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(a, _)| t * a)
        .fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = probs
        .iter()
        .zip(values)
        .filter(|(&p, _)| p > 0.0)
        .map(|(p, a)| p * (t * a - m).exp())
        .sum();
    Ok((m + s.ln()) / t)
}

/// |α|² = q² sin²(|k|Δt/2)/(|k|/2)².
pub fn source_intensity(q: f64, k_abs: f64, dt: f64) -> Result<f64> {
    if !(k_abs > 0.0) {
        return Err(Error::Domain(format!("|k| must be positive, got {k_abs}")));
    }
    let s = (0.5 * k_abs * dt).sin() / (0.5 * k_abs);
    Ok(q * q * s * s)
}

/// Average radiative shift of the vacuum energy for a static charge:
/// q²∫dk |O₀|²/|k|² in free space; with a Dirichlet plane at distance L
/// the factor (1 − cos 2k_zL) appears, angle-averaged to 1 − sin(2κL)/(2κL).
pub fn radiative_shift(
    profile: &VacuumProfile,
    q: f64,
    plane_gap: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !infrared_condition_check(profile, 2) {
        return Err(Error::Domain(
            "profile fails the infrared condition needed for the shift".into(),
        ));
    }
    let q2 = q * q;
    match plane_gap {
        None => profile.radial_integral(|k| q2 / k, None, spec),
        Some(l) => {
            if !(l > 0.0) {
                return Err(Error::Domain(format!("plane gap must be positive, got {l}")));
            }
            let period = PI / l;
            profile.radial_integral(
                |k| {
                    let u = 2.0 * k * l;
                    let damp = if u < 1e-4 { u * u / 6.0 } else { 1.0 - u.sin() / u };
                    q2 * damp / k
                },
                Some(period),
                spec,
            )
        }
    }
}

/// (q/2)⟨φ_gC(2L)⟩, the image-charge term.
pub fn mirror_image_term(profile: &VacuumProfile, q: f64, plane_gap: f64) -> Result<f64> {
    Ok(0.5 * coulomb::potential(profile, q, 2.0 * plane_gap)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ladder() {
        let rep = build_rep(&[1.0], &[1.0], 5, 1).unwrap();
        assert!(commutator_residual(&rep).unwrap() < 1e-14);
    }

    #[test]
    fn two_oscillator_spectrum() {
        let rep = build_rep(&[1.0, 2.0], &[0.5, 0.5], 1, 2).unwrap();
        let s = success_spectrum(&rep, 0).unwrap();
        assert_eq!(s.len(), 3);
        for (a, b) in s.iter().zip([0.0, 0.5, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pmf_n1_is_mixture_of_poissons() {
        let p = [0.3, 0.7];
        let w = [0.5, 2.0];
        for n in 0..6 {
            let got = renyi_poisson_pmf(&p, &w, 1, n).unwrap();
            let want: f64 = p
                .iter()
                .zip(&w)
                .map(|(p, w)| p * w.powi(n as i32) * (-w).exp() / (1..=n).product::<usize>() as f64)
                .sum();
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn dimension_cap() {
        assert!(matches!(
            build_rep_capped(&[1.0, 2.0], &[0.5, 0.5], 9, 6, 1000),
            Err(Error::DimensionCap { .. })
        ));
    }
}
