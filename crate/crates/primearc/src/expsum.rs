//! Direct evaluation of the smoothed exponential sums
//! S_{η,q}(x, α) = Σ_n Λ(n) e(αn) 1_{(n,q)=1} η(n/x),
//! the Dirichlet-type kernel, exact L² values, and the elementary
//! replacement lemmas relating different cutoffs and moduli.
//!
//! Phases e(αn) are formed by reducing αn mod 1 with an FMA two-product,
//! so the fractional part keeps full f64 accuracy even at n ~ 10⁹.

use crate::arith::{ArithTable, PrimorialCondition};
use crate::cutoffs::CutoffFn;
use crate::error::Error;
use crate::report::InequalityCheck;
use crate::Result;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Direct-summation cap (number of integers below the scale).
pub const DIRECT_CAP: f64 = 1e9;

/// Specification of one smoothed sum: scale, cutoff, coprimality screen.
///
/// `q0` is an explicit modulus; `primorial` adds the screen (n, P#) = 1
/// without materializing the primorial, standing in for moduli like
/// sqrt(x)# that overflow any fixed width.
#[derive(Debug, Clone)]
pub struct SumSpec {
    pub x: f64,
    pub eta: CutoffFn,
    pub q0: u64,
    pub primorial: Option<f64>,
}

impl SumSpec {
    pub fn new(x: f64, eta: CutoffFn, q0: u64) -> SumSpec {
        assert!(x >= 1.0 && q0 >= 1);
        SumSpec {
            x,
            eta,
            q0,
            primorial: None,
        }
    }

    pub fn with_primorial(mut self, p: f64) -> SumSpec {
        self.primorial = Some(p);
        self
    }
}

/// Value of a smoothed sum plus the count of nonzero summands.
#[derive(Debug, Clone, Copy)]
pub struct ExpSumValue {
    pub value: Complex64,
    pub terms: usize,
}

/// αn mod 1 with an FMA-exact two-product; result in [0, 1).
#[inline]
pub fn frac_mul(alpha: f64, n: f64) -> f64 {
    let hi = alpha * n;
    let lo = alpha.mul_add(n, -hi); // exact residual of the product
    let mut f = (hi - hi.floor()) + lo;
    if f >= 1.0 {
        f -= 1.0;
    } else if f < 0.0 {
        f += 1.0;
    }
    f
}

/// e(θ) for θ = αn, with exact argument reduction.
#[inline]
pub fn e_of(alpha: f64, n: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * frac_mul(alpha, n)).sin_cos();
    Complex64::new(c, s)
}

/// A prepared sum: the surviving (n, Λ(n)·η(n/x)) pairs, for repeated
/// evaluation over many α. Immutable and safe to share across threads.
pub struct PreparedSum {
    pub x: f64,
    terms: Vec<(u64, f64)>,
}

impl PreparedSum {
    pub fn build(table: &ArithTable, spec: &SumSpec) -> Result<PreparedSum> {
        if spec.x > DIRECT_CAP {
            return Err(Error::Resource(format!(
                "direct summation at x = {} exceeds cap {DIRECT_CAP}",
                spec.x
            )));
        }
        let (c, cp) = spec.eta.support();
        let lo = ((c * spec.x).floor().max(1.0)) as u64;
        let hi = (cp * spec.x).ceil() as u64;
        if lo < table.lo || hi > table.hi {
            return Err(Error::Domain(format!(
                "table window [{}, {}] does not cover support [{lo}, {hi}]",
                table.lo, table.hi
            )));
        }
        let screen = spec.primorial.map(PrimorialCondition::new);
        let mut terms = Vec::new();
        for (n, l) in table.prime_powers_in(lo, hi) {
            if spec.q0 > 1 && gcd(n, spec.q0) != 1 {
                continue;
            }
            if let Some(s) = &screen {
                if !s.admits(n) {
                    continue;
                }
            }
            let w = l * spec.eta.eval(n as f64 / spec.x);
            if w != 0.0 {
                terms.push((n, w));
            }
        }
        Ok(PreparedSum { x: spec.x, terms })
    }

    /// Σ w_n e(αn), Kahan-compensated, parallel over disjoint chunks with a
    /// deterministic reduction order.
    pub fn eval(&self, alpha: f64) -> ExpSumValue {
        let chunk = 16_384;
        let partials: Vec<Complex64> = self
            .terms
            .par_chunks(chunk)
            .map(|c| kahan_sum(c.iter().map(|&(n, w)| w * e_of(alpha, n as f64))))
            .collect();
        ExpSumValue {
            value: kahan_sum(partials.into_iter()),
            terms: self.terms.len(),
        }
    }

    /// Σ w_n² (the exact value of ∫ |S|² dα by Plancherel).
    pub fn weight_sq_sum(&self) -> f64 {
        kahan_sum_f64(self.terms.iter().map(|&(_, w)| w * w))
    }

    /// Σ w_n (= S(0)).
    pub fn weight_sum(&self) -> f64 {
        kahan_sum_f64(self.terms.iter().map(|&(_, w)| w))
    }

    pub fn terms(&self) -> &[(u64, f64)] {
        &self.terms
    }
}

fn kahan_sum(it: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut c = Complex64::new(0.0, 0.0);
    for v in it {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

pub(crate) fn kahan_sum_f64(it: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in it {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

#[inline]
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// S_{η,q}(x, α) by direct summation.
pub fn s_eval(table: &ArithTable, spec: &SumSpec, alpha: f64) -> Result<ExpSumValue> {
    Ok(PreparedSum::build(table, spec)?.eval(alpha))
}

/// Σ Λ(n)² η(n/x)² 1_{(n,q)=1} — the exact L² mass of S over the circle.
pub fn l2_exact(table: &ArithTable, spec: &SumSpec) -> Result<f64> {
    Ok(PreparedSum::build(table, spec)?.weight_sq_sum())
}

/// S_{η²,q}(x, 0) = Σ Λ(n) η(n/x)² 1_{(n,q)=1}.
pub fn s_eta_sq_zero(table: &ArithTable, spec: &SumSpec) -> Result<f64> {
    let p = PreparedSum::build(table, spec)?;
    Ok(kahan_sum_f64(p.terms.iter().map(|&(n, w)| {
        // w = Λ(n) η(n/x), so w · η(n/x) = Λ η²
        w * spec.eta.eval(n as f64 / spec.x)
    })))
}

/// Dirichlet-type kernel D_H(α) = Σ_{1 ≤ h ≤ H} e(hα), closed form.
pub fn dirichlet_kernel(h_max: f64, alpha: f64) -> Complex64 {
    assert!(h_max >= 1.0);
    let h = h_max.floor();
    let frac = alpha - alpha.floor();
    if frac == 0.0 {
        return Complex64::new(h, 0.0);
    }
    // e(α)(e(Hα) − 1)/(e(α) − 1), stable via sin form:
    // D_H = e((H+1)α/2) sin(πHα)/sin(πα)
    let s = (PI * h * frac).sin() / (PI * frac).sin();
    let phase = frac_mul(0.5 * (h + 1.0), frac);
    let (si, co) = (2.0 * PI * phase).sin_cos();
    Complex64::new(co, si) * s
}

/// Verifies |S_{η,q0} − S_{η,1}| ≤ ω(q0) ‖η‖_∞ log x, and the sqrt-x form
/// 2.52 √x ‖η‖_∞ when every prime factor of q0 is ≤ √x.
pub fn eta_smash_check(table: &ArithTable, spec: &SumSpec, alpha: f64) -> Result<InequalityCheck> {
    let with_q = s_eval(table, spec, alpha)?;
    let mut spec1 = spec.clone();
    spec1.q0 = 1;
    spec1.primorial = None;
    let without_q = s_eval(table, &spec1, alpha)?;
    let diff = (with_q.value - without_q.value).norm();
    let norms = spec.eta.norms();
    let omega_q = crate::arith::omega(spec.q0)
        + spec
            .primorial
            .map(|p| PrimorialCondition::new(p).primes().len() as u32)
            .unwrap_or(0);
    let rhs = omega_q as f64 * norms.linf * spec.x.ln();
    let mut check = InequalityCheck::new("q-replacement |S_q - S_1|", diff, rhs);
    // sqrt-x variant applies when all prime factors of q0 are ≤ √x
    let sqrt_x = spec.x.sqrt();
    let all_small = largest_prime_factor(spec.q0) as f64 <= sqrt_x
        && spec.primorial.map_or(true, |p| p <= sqrt_x);
    if all_small {
        let rhs2 = 2.52 * sqrt_x * norms.linf;
        check
            .hypotheses
            .push(("prime factors ≤ √x".to_string(), true));
        if rhs2 < rhs {
            return Ok(InequalityCheck::new("q-replacement, √x form", diff, rhs2)
                .with_hypothesis("prime factors ≤ √x", true));
        }
    }
    Ok(check)
}

fn largest_prime_factor(n: u64) -> u64 {
    let mut m = n;
    let mut best = 1;
    let mut p = 2u64;
    while p * p <= m {
        while m % p == 0 {
            best = p;
            m /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        best = m;
    }
    best
}

/// Verifies |S_{η,q}(x,α)| ≤ TV(η) · sup_{y ≤ x} |S_{1_{[0,1]},q}(y,α)|.
/// The sup is exact: the truncated sum is constant between prime powers,
/// so a single prefix-maximum pass over prime powers computes it.
pub fn etail_check(table: &ArithTable, spec: &SumSpec, alpha: f64) -> Result<InequalityCheck> {
    let lhs = s_eval(table, spec, alpha)?.value.norm();
    // prefix maxima of |Σ_{n ≤ y} Λ(n) e(αn) 1_{(n,q)=1}| over y ≤ x
    let screen = spec.primorial.map(PrimorialCondition::new);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut sup = 0.0f64;
    let hi = spec.x.floor() as u64;
    for (n, l) in table.prime_powers_in(1, hi) {
        if spec.q0 > 1 && gcd(n, spec.q0) != 1 {
            continue;
        }
        if let Some(s) = &screen {
            if !s.admits(n) {
                continue;
            }
        }
        acc += l * e_of(alpha, n as f64);
        sup = sup.max(acc.norm());
    }
    let rhs = spec.eta.norms().tv1 * sup;
    Ok(InequalityCheck::new("sharp-truncation comparison", lhs, rhs))
}
