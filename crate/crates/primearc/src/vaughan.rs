//! A variant of the Vaughan identity: the four-term convolution identity
//! for Λ, the Type II weight g(w) with its half-log correction, and the
//! Type I / Type II decomposition of the smoothed exponential sum with
//! explicitly constructed unimodular alignment coefficients.

use crate::arith::{divisors, spf_table, ArithTable};
use crate::cutoffs::CutoffFn;
use crate::error::Error;
use crate::expsum::{e_of, PreparedSum, SumSpec};
use crate::report::InequalityCheck;
use crate::Result;
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct VaughanParams {
    pub u: f64,
    pub v: f64,
}

/// The Type II weight g(w) = Σ_{b|w, b>V} Λ(b) − ½ log w.
#[derive(Debug, Clone, Copy)]
pub struct TypeIIWeight {
    pub w: u64,
    pub value: f64,
}

/// g(w) by factorization through a smallest-prime-factor table.
pub fn g_weight(w: u64, v: f64, spf: &[u32]) -> TypeIIWeight {
    assert!(w >= 1);
    let mut sum = 0.0;
    for b in divisors(w, spf) {
        if b as f64 > v {
            // Λ(b) ≠ 0 only for prime powers
            let l = lambda_of(b);
            sum += l;
        }
    }
    TypeIIWeight {
        w,
        value: sum - 0.5 * (w as f64).ln(),
    }
}

fn lambda_of(b: u64) -> f64 {
    if b < 2 {
        return 0.0;
    }
    let mut m = b;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (m as f64).ln()
}

/// Pointwise check of the convolution identity
/// Λ = μ1_{≤U} ∗ log − μ1_{≤U} ∗ Λ1_{≤V} ∗ 1 + μ1_{>U} ∗ Λ1_{>V} ∗ 1 + Λ1_{≤V}
/// for all n ≤ n_max; every convolution is accumulated independently by
/// sieve-style loops. Returns the max deviation as the lhs.
pub fn vaughan_identity_check(
    table: &ArithTable,
    n_max: u64,
    u: f64,
    v: f64,
) -> Result<InequalityCheck> {
    if n_max > 1_000_000 {
        return Err(Error::Resource("identity check capped at n ≤ 10^6".into()));
    }
    if table.lo > 1 || table.hi < n_max {
        return Err(Error::Domain("table must cover [1, n_max]".into()));
    }
    let n = n_max as usize;
    let u_cap = u.floor() as usize;
    let mut rhs_acc = vec![0.0f64; n + 1];

    // μ1_{≤U} ∗ log
    for d in 1..=u_cap.min(n) {
        let mu = table.mobius(d as u64) as f64;
        if mu == 0.0 {
            continue;
        }
        let mut k = 1usize;
        while d * k <= n {
            rhs_acc[d * k] += mu * (k as f64).ln();
            k += 1;
        }
    }

    // h = Λ1_{≤V} ∗ 1, then subtract μ1_{≤U} ∗ h
    let mut h = vec![0.0f64; n + 1];
    for b in 2..=(v.floor() as usize).min(n) {
        let l = table.lambda(b as u64);
        if l == 0.0 {
            continue;
        }
        let mut m = b;
        while m <= n {
            h[m] += l;
            m += b;
        }
    }
    for d in 1..=u_cap.min(n) {
        let mu = table.mobius(d as u64) as f64;
        if mu == 0.0 {
            continue;
        }
        let mut k = 1usize;
        while d * k <= n {
            rhs_acc[d * k] -= mu * h[k];
            k += 1;
        }
    }

    // g2 = Λ1_{>V} ∗ 1, then add μ1_{>U} ∗ g2
    let mut g2 = vec![0.0f64; n + 1];
    let v_floor = v.floor() as usize;
    for b in (v_floor + 1).max(2)..=n {
        let l = table.lambda(b as u64);
        if l == 0.0 {
            continue;
        }
        let mut m = b;
        while m <= n {
            g2[m] += l;
            m += b;
        }
    }
    for d in (u_cap + 1)..=n {
        let mu = table.mobius(d as u64) as f64;
        if mu == 0.0 {
            continue;
        }
        let mut k = 1usize;
        while d * k <= n {
            rhs_acc[d * k] += mu * g2[k];
            k += 1;
        }
    }

    // + Λ1_{≤V}
    for m in 2..=v_floor.min(n) {
        rhs_acc[m] += table.lambda(m as u64);
    }

    let mut max_dev = 0.0f64;
    for m in 1..=n {
        let dev = (rhs_acc[m] - table.lambda(m as u64)).abs();
        max_dev = max_dev.max(dev);
    }
    Ok(InequalityCheck::new(
        "Vaughan-variant convolution identity, max pointwise deviation",
        max_dev,
        1e-9,
    ))
}

/// Result of decomposing Σ Λ(n) F(n) with F(n) = e(αn) η₀(n/x) 1_{(n,2)=1}.
pub struct Decomposition {
    pub t_i: f64,
    pub t_ii: f64,
    /// Unimodular alignment coefficients c_d, indexed by odd d ≤ UV.
    pub c_d: Vec<(u64, Complex64)>,
    pub check: InequalityCheck,
}

/// Type I / Type II decomposition at (x, α) with the given (U, V).
///
/// T_I = Σ_{d ≤ UV odd} |Σ_{n odd} (log n + c_d log d) e(αdn) η₀(dn/x)|
/// with c_d the phase aligning the two inner sums (so the modulus equals
/// |Σ log n ...| + log d |Σ ...|), and
/// T_II = |Σ_{d>U odd} Σ_{w>V odd} μ(d) g(w) e(αdw) η₀(dw/x)|.
pub fn decompose(
    table: &ArithTable,
    x: f64,
    alpha: f64,
    params: VaughanParams,
) -> Result<Decomposition> {
    let (u, v) = (params.u, params.v);
    if x > crate::expsum::DIRECT_CAP {
        return Err(Error::Resource("decompose requires x within the direct cap".into()));
    }
    if table.lo > 1 || (table.hi as f64) < x {
        return Err(Error::Domain("table must cover [1, x]".into()));
    }
    let eta = CutoffFn::eta0();
    let uv = u * v;

    // Type I, parallel over odd d
    let ds: Vec<u64> = (1..=(uv.floor() as u64)).step_by(2).collect();
    let t_i_parts: Vec<(u64, f64, Complex64)> = ds
        .par_iter()
        .map(|&d| {
            let df = d as f64;
            let n_lo = (x / (4.0 * df)).floor().max(1.0) as u64;
            let n_hi = (x / df).ceil() as u64;
            let mut sum_log = Complex64::new(0.0, 0.0);
            let mut sum_one = Complex64::new(0.0, 0.0);
            let mut n = if n_lo % 2 == 0 { n_lo + 1 } else { n_lo };
            while n <= n_hi {
                let w = eta.eval(df * n as f64 / x);
                if w != 0.0 {
                    let ph = e_of(alpha, df * n as f64);
                    sum_log += w * (n as f64).ln() * ph;
                    sum_one += w * ph;
                }
                n += 2;
            }
            // c_d makes |sum_log + c_d log d sum_one| = |sum_log| + log d |sum_one|
            let c = if sum_log.norm() == 0.0 || sum_one.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                (sum_log / sum_log.norm()) * (sum_one / sum_one.norm()).conj()
            };
            let term = (sum_log + c * df.ln() * sum_one).norm();
            (d, term, c)
        })
        .collect();
    let t_i: f64 = t_i_parts.iter().map(|&(_, t, _)| t).sum();
    let c_d: Vec<(u64, Complex64)> = t_i_parts.iter().map(|&(d, _, c)| (d, c)).collect();

    // Type II: pairs d > U, w > V, both odd, dw in the support of η₀(·/x)
    let spf = spf_table((x / u).ceil() as usize + 1);
    let w_cap = (x / u).floor() as u64;
    let g: Vec<f64> = (0..=w_cap)
        .map(|w| if w >= 1 { g_weight(w, v, &spf).value } else { 0.0 })
        .collect();
    let d_min = (u.floor() as u64) + 1;
    let d_max = (x / v).floor() as u64;
    let ds2: Vec<u64> = (d_min..=d_max).filter(|d| d % 2 == 1).collect();
    let t_ii_c: Complex64 = ds2
        .par_iter()
        .map(|&d| {
            let mu = table.mobius(d) as f64;
            if mu == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let df = d as f64;
            let w_lo = ((x / (4.0 * df)).floor().max(v.floor())) as u64;
            let w_hi = ((x / df).ceil() as u64).min(w_cap);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut w = w_lo.max(v.floor() as u64 + 1);
            if w % 2 == 0 {
                w += 1;
            }
            while w <= w_hi {
                let e = eta.eval(df * w as f64 / x);
                if e != 0.0 {
                    acc += g[w as usize] * e * e_of(alpha, df * w as f64);
                }
                w += 2;
            }
            mu * acc
        })
        .reduce(|| Complex64::new(0.0, 0.0), |a, b| a + b);
    let t_ii = t_ii_c.norm();

    // the decomposed quantity itself
    let spec = SumSpec::new(x, eta, 2);
    let lhs = PreparedSum::build(table, &spec)?.eval(alpha).value.norm();

    let check = InequalityCheck::new("|Σ Λ F| ≤ T_I + T_II", lhs, t_i + t_ii)
        .with_hypothesis("UV ≤ x/4", uv <= x / 4.0)
        .with_hypothesis("UV² ≥ x", uv * v >= x)
        .with_hypothesis("U, V ≥ 40", u >= 40.0 && v >= 40.0);

    Ok(Decomposition {
        t_i,
        t_ii,
        c_d,
        check,
    })
}

/// The classical Type II sum (weight g + ½ log w) and the half-log boundary
/// term, for comparing the variant against classical Vaughan.
pub fn type_ii_classical(
    table: &ArithTable,
    x: f64,
    alpha: f64,
    params: VaughanParams,
) -> (f64, f64, f64) {
    let (u, v) = (params.u, params.v);
    let eta = CutoffFn::eta0();
    let spf = spf_table((x / u).ceil() as usize + 1);
    let d_min = (u.floor() as u64) + 1;
    let d_max = (x / v).floor() as u64;
    let mut new_sum = Complex64::new(0.0, 0.0);
    let mut classical = Complex64::new(0.0, 0.0);
    let mut halflog = Complex64::new(0.0, 0.0);
    for d in (d_min..=d_max).filter(|d| d % 2 == 1) {
        let mu = table.mobius(d) as f64;
        if mu == 0.0 {
            continue;
        }
        let df = d as f64;
        let w_hi = (x / df).ceil() as u64;
        let mut w = (v.floor() as u64) + 1;
        if w % 2 == 0 {
            w += 1;
        }
        while w <= w_hi {
            let e = eta.eval(df * w as f64 / x);
            if e != 0.0 {
                let ph = e * e_of(alpha, df * w as f64);
                let gv = g_weight(w, v, &spf).value;
                new_sum += mu * gv * ph;
                classical += mu * (gv + 0.5 * (w as f64).ln()) * ph;
                halflog += mu * 0.5 * (w as f64).ln() * ph;
            }
            w += 2;
        }
    }
    ((new_sum).norm(), classical.norm(), halflog.norm())
}
