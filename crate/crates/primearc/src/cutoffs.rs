//! Exact representations of the cutoff functions and their norms.
//!
//! Two piece families cover everything here: affine `a + b·t` and
//! log-affine `a + b·ln t`. The triangle-in-log cutoff (unit mass on
//! [1/4, 1]) is log-affine; the plateau cutoff on [0.1, 0.9] and the sharp
//! indicator are affine. Derivative norms follow the total-variation
//! convention: `tv1 = TV(f)` stands in for ‖f′‖₁ and `tv2 = TV(f′)` for
//! ‖f″‖₁, so breakpoint kinks contribute their jumps and no numerical
//! mollification is ever performed.

use crate::error::Error;
use crate::quad;
use crate::Result;
use num_complex::Complex64;
use std::f64::consts::PI;

pub const LN2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceForm {
    /// a + b·t
    Affine { a: f64, b: f64 },
    /// a + b·ln t  (requires t > 0)
    LogAffine { a: f64, b: f64 },
}

impl PieceForm {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            PieceForm::Affine { a, b } => a + b * t,
            PieceForm::LogAffine { a, b } => a + b * t.ln(),
        }
    }

    /// Pointwise derivative inside the piece.
    #[inline]
    pub fn deriv(&self, t: f64) -> f64 {
        match *self {
            PieceForm::Affine { b, .. } => b,
            PieceForm::LogAffine { b, .. } => b / t,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub form: PieceForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffKind {
    Eta0,
    Eta1,
    Indicator01,
    Custom,
}

/// A compactly supported piecewise cutoff with exact breakpoints.
#[derive(Debug, Clone)]
pub struct CutoffFn {
    pub kind: CutoffKind,
    pieces: Vec<Piece>,
}

/// Norm/total-variation bundle for a cutoff.
#[derive(Debug, Clone, Copy)]
pub struct CutoffNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    /// TV(f), housing ‖f′‖₁.
    pub tv1: f64,
    /// TV(f′), housing ‖f″‖₁ (infinite if f itself jumps).
    pub tv2: f64,
    /// sup |f′| (infinite if f jumps).
    pub linf_deriv: f64,
    /// ‖f·f′‖₁ as TV(f²)/2.
    pub l1_self_deriv: f64,
    /// ‖f′·f′ + f·f″‖₁ as TV(f·f′).
    pub l1_second_combo: f64,
}

impl CutoffFn {
    /// Triangle in log t: support [1/4, 1], unit mass, peak 4·ln2 at 1/2.
    pub fn eta0() -> CutoffFn {
        CutoffFn {
            kind: CutoffKind::Eta0,
            pieces: vec![
                Piece {
                    lo: 0.25,
                    hi: 0.5,
                    form: PieceForm::LogAffine { a: 8.0 * LN2, b: 4.0 },
                },
                Piece {
                    lo: 0.5,
                    hi: 1.0,
                    form: PieceForm::LogAffine { a: 0.0, b: -4.0 },
                },
            ],
        }
    }

    /// Plateau with linear ramps: support [0.1, 0.9], symmetric about 1/2.
    pub fn eta1() -> CutoffFn {
        CutoffFn {
            kind: CutoffKind::Eta1,
            pieces: vec![
                Piece {
                    lo: 0.1,
                    hi: 0.2,
                    form: PieceForm::Affine { a: -1.0, b: 10.0 },
                },
                Piece {
                    lo: 0.2,
                    hi: 0.8,
                    form: PieceForm::Affine { a: 1.0, b: 0.0 },
                },
                Piece {
                    lo: 0.8,
                    hi: 0.9,
                    form: PieceForm::Affine { a: 9.0, b: -10.0 },
                },
            ],
        }
    }

    /// Sharp cutoff 1 on [0, 1].
    pub fn indicator01() -> CutoffFn {
        CutoffFn {
            kind: CutoffKind::Indicator01,
            pieces: vec![Piece {
                lo: 0.0,
                hi: 1.0,
                form: PieceForm::Affine { a: 1.0, b: 0.0 },
            }],
        }
    }

    /// Custom cutoff from ordered pieces (affine / log-affine only).
    pub fn custom(pieces: Vec<Piece>) -> Result<CutoffFn> {
        if pieces.is_empty() {
            return Err(Error::Domain("custom cutoff needs at least one piece".into()));
        }
        for w in pieces.windows(2) {
            if w[0].hi > w[1].lo + 1e-15 {
                return Err(Error::Domain("custom cutoff pieces overlap".into()));
            }
        }
        for p in &pieces {
            if !p.lo.is_finite() || !p.hi.is_finite() || p.lo >= p.hi {
                return Err(Error::Domain("custom cutoff must have bounded support".into()));
            }
            if matches!(p.form, PieceForm::LogAffine { .. }) && p.lo <= 0.0 {
                return Err(Error::Domain("log-affine piece needs positive support".into()));
            }
        }
        Ok(CutoffFn {
            kind: CutoffKind::Custom,
            pieces,
        })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Support interval [c, c'].
    pub fn support(&self) -> (f64, f64) {
        (self.pieces[0].lo, self.pieces[self.pieces.len() - 1].hi)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.pieces.iter().map(|p| p.lo).collect();
        b.push(self.pieces[self.pieces.len() - 1].hi);
        b.dedup();
        b
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        for p in &self.pieces {
            if t >= p.lo && t <= p.hi {
                return p.form.eval(t);
            }
        }
        0.0
    }

    /// Does f jump at any breakpoint (limits from each side differ)?
    fn has_jump(&self) -> bool {
        let eps = 0.0;
        let _ = eps;
        let mut prev_val = 0.0;
        for p in &self.pieces {
            if (p.form.eval(p.lo) - prev_val).abs() > 1e-12 {
                return true;
            }
            prev_val = p.form.eval(p.hi);
        }
        prev_val.abs() > 1e-12
    }

    /// Exact norms by piecewise closed-form integration.
    pub fn norms(&self) -> CutoffNorms {
        let mut l1 = 0.0;
        let mut l2sq = 0.0;
        let mut linf: f64 = 0.0;
        let mut tv1 = 0.0;
        let mut tv2 = 0.0;
        let mut linf_deriv: f64 = 0.0;
        let mut self_tv = 0.0; // TV(f^2)/2
        let mut combo_tv = 0.0; // TV(f f')
        let jumps = self.has_jump();

        // interior (absolutely continuous) contributions
        for p in &self.pieces {
            l1 += integral_abs(&p.form, p.lo, p.hi);
            l2sq += integral_sq(&p.form, p.lo, p.hi);
            linf = linf.max(p.form.eval(p.lo).abs()).max(p.form.eval(p.hi).abs());
            tv1 += tv_of_form(&p.form, p.lo, p.hi);
            match p.form {
                PieceForm::Affine { .. } => {}
                PieceForm::LogAffine { b, .. } => {
                    // f' = b/t monotone; TV of f' over the piece
                    tv2 += (b / p.lo - b / p.hi).abs();
                }
            }
            linf_deriv = linf_deriv
                .max(p.form.deriv(p.lo).abs())
                .max(p.form.deriv(p.hi).abs());
            self_tv += 0.5 * tv_monotone_splits(&|t| p.form.eval(t) * p.form.eval(t), p.lo, p.hi);
            combo_tv += tv_monotone_splits(&|t| p.form.eval(t) * p.form.deriv(t), p.lo, p.hi);
        }

        // breakpoint jumps: f' and f·f' jump wherever slopes change; the
        // value jump of f itself feeds tv1
        let mut edges: Vec<(f64, f64, f64, f64, f64)> = Vec::new();
        // (t, f_left, f_right, f'_left, f'_right)
        for i in 0..=self.pieces.len() {
            let t = if i < self.pieces.len() {
                self.pieces[i].lo
            } else {
                self.pieces[i - 1].hi
            };
            let (fl, dl) = if i == 0 {
                (0.0, 0.0)
            } else {
                let p = &self.pieces[i - 1];
                (p.form.eval(t), p.form.deriv(t))
            };
            let (fr, dr) = if i == self.pieces.len() {
                (0.0, 0.0)
            } else {
                let p = &self.pieces[i];
                if (p.lo - t).abs() < 1e-300 || t >= p.lo {
                    (p.form.eval(t), p.form.deriv(t))
                } else {
                    (0.0, 0.0)
                }
            };
            edges.push((t, fl, fr, dl, dr));
        }
        for &(_, fl, fr, dl, dr) in &edges {
            tv1 += (fr - fl).abs();
            tv2 += (dr - dl).abs();
            self_tv += 0.5 * (fr * fr - fl * fl).abs();
            combo_tv += (fr * dr - fl * dl).abs();
        }

        CutoffNorms {
            l1,
            l2: l2sq.sqrt(),
            linf,
            tv1,
            tv2: if jumps { f64::INFINITY } else { tv2 },
            linf_deriv: if jumps { f64::INFINITY } else { linf_deriv },
            l1_self_deriv: self_tv,
            l1_second_combo: if jumps { f64::INFINITY } else { combo_tv },
        }
    }

    /// ∫ f(y) e(ξ y) dy: closed form on affine pieces, oscillation-aware
    /// adaptive quadrature (absolute error ≤ 1e−12) on log-affine pieces.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for p in &self.pieces {
            total += match p.form {
                PieceForm::Affine { a, b } => fourier_affine(a, b, p.lo, p.hi, xi),
                PieceForm::LogAffine { a, b } => {
                    let f = |t: f64| {
                        Complex64::from_polar(a + b * t.ln(), 2.0 * PI * xi * t)
                    };
                    quad::oscillatory_complex(&f, p.lo, p.hi, xi.abs(), 1e-13)
                }
            };
        }
        total
    }
}

/// ∫ f over [lo, hi] (signed).
fn integral_signed(form: &PieceForm, lo: f64, hi: f64) -> f64 {
    match *form {
        PieceForm::Affine { a, b } => a * (hi - lo) + 0.5 * b * (hi * hi - lo * lo),
        PieceForm::LogAffine { a, b } => {
            let anti = |t: f64| a * t + b * (t * t.ln() - t);
            anti(hi) - anti(lo)
        }
    }
}

/// ∫ |f| over [lo, hi], splitting at the interior root if any.
fn integral_abs(form: &PieceForm, lo: f64, hi: f64) -> f64 {
    let root = match *form {
        PieceForm::Affine { a, b } => {
            if b != 0.0 {
                Some(-a / b)
            } else {
                None
            }
        }
        PieceForm::LogAffine { a, b } => {
            if b != 0.0 {
                Some((-a / b).exp())
            } else {
                None
            }
        }
    };
    match root {
        Some(r) if r > lo && r < hi => {
            integral_signed(form, lo, r).abs() + integral_signed(form, r, hi).abs()
        }
        _ => integral_signed(form, lo, hi).abs(),
    }
}

/// ∫ f² over [lo, hi].
fn integral_sq(form: &PieceForm, lo: f64, hi: f64) -> f64 {
    match *form {
        PieceForm::Affine { a, b } => {
            let anti = |t: f64| a * a * t + a * b * t * t + b * b * t * t * t / 3.0;
            anti(hi) - anti(lo)
        }
        PieceForm::LogAffine { a, b } => {
            // ∫ (a + b ln t)² = a²t + 2ab(t ln t − t) + b²(t ln²t − 2t ln t + 2t)
            let anti = |t: f64| {
                let l = t.ln();
                a * a * t + 2.0 * a * b * (t * l - t) + b * b * (t * l * l - 2.0 * t * l + 2.0 * t)
            };
            anti(hi) - anti(lo)
        }
    }
}

/// TV of f over the open piece = ∫ |f'|.
fn tv_of_form(form: &PieceForm, lo: f64, hi: f64) -> f64 {
    match *form {
        PieceForm::Affine { b, .. } => b.abs() * (hi - lo),
        PieceForm::LogAffine { b, .. } => b.abs() * (hi / lo).ln(),
    }
}

/// TV of a smooth function on [lo, hi] whose derivative changes sign at
/// most a few times: locate sign changes of the numerical derivative on a
/// fine grid, then sum |endpoint differences| over monotone stretches.
/// The functions fed here (f², f·f′ for our piece families) have at most
/// two interior critical points, so a modest grid is exact in practice.
fn tv_monotone_splits<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> f64 {
    const GRID: usize = 4096;
    let h = (hi - lo) / GRID as f64;
    let mut crit = vec![lo];
    let mut prev_slope = 0.0;
    let mut prev_t = lo;
    for i in 1..=GRID {
        let t = lo + i as f64 * h;
        let slope = f(t) - f(prev_t);
        if i > 1 && slope * prev_slope < 0.0 {
            // refine the turning point by ternary-style bisection
            let (mut a, mut b) = (prev_t - h, t);
            for _ in 0..80 {
                let m1 = a + (b - a) / 3.0;
                let m2 = b - (b - a) / 3.0;
                let up = f(m2) - f(m1);
                if (up > 0.0) == (prev_slope > 0.0) {
                    a = m1;
                } else {
                    b = m2;
                }
            }
            crit.push(0.5 * (a + b));
        }
        prev_slope = slope;
        prev_t = t;
    }
    crit.push(hi);
    crit.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut tv = 0.0;
    for w in crit.windows(2) {
        tv += (f(w[1]) - f(w[0])).abs();
    }
    tv
}

/// ∫_{lo}^{hi} (a + b t) e(ξ t) dt in closed form, with a series fallback
/// for small |ξ|·len to dodge cancellation.
fn fourier_affine(a: f64, b: f64, lo: f64, hi: f64, xi: f64) -> Complex64 {
    let len = hi - lo;
    if (xi * len).abs() < 1e-5 {
        // Taylor in ξ around the midpoint, 4 terms: plenty below 1e-5
        let w = Complex64::new(0.0, 2.0 * PI * xi);
        let mut total = Complex64::new(0.0, 0.0);
        // ∫ (a+bt) t^k dt terms via moments about lo
        // f(t) e^{w t} ≈ e^{w lo} Σ_k w^k (t-lo)^k / k! (a + b t)
        let e0 = Complex64::from_polar(1.0, 2.0 * PI * xi * lo);
        let mut wk = Complex64::new(1.0, 0.0);
        let mut kfact = 1.0;
        for k in 0..6u32 {
            if k > 0 {
                wk *= w;
                kfact *= k as f64;
            }
            // ∫_0^len s^k (a + b(lo + s)) ds
            let m1 = len.powi(k as i32 + 1) / (k as f64 + 1.0);
            let m2 = len.powi(k as i32 + 2) / (k as f64 + 2.0);
            total += wk / kfact * ((a + b * lo) * m1 + b * m2);
        }
        return e0 * total;
    }
    let w = Complex64::new(0.0, 2.0 * PI * xi);
    let anti = |t: f64| {
        let e = Complex64::from_polar(1.0, 2.0 * PI * xi * t);
        e * (Complex64::new(a + b * t, 0.0) / w - Complex64::new(b, 0.0) / (w * w))
    };
    anti(hi) - anti(lo)
}

/// Verifies the factorization identity behind the triangle-in-log cutoff:
/// η₀(dw/x) = 4 ∫ 1_{[x/2W, x/W]}(d) 1_{[W/2, W]}(w) dW/W, both sides exact.
pub fn eta0_factorization_check(d: f64, w: f64, x: f64) -> crate::report::InequalityCheck {
    assert!(d > 0.0 && w > 0.0 && x > 0.0);
    let lhs = CutoffFn::eta0().eval(d * w / x);
    let lo = (x / (2.0 * d)).max(w);
    let hi = (x / d).min(2.0 * w);
    let rhs = if hi > lo { 4.0 * (hi / lo).ln() } else { 0.0 };
    let mut c = crate::report::InequalityCheck::new("eta0 factorization", (lhs - rhs).abs(), 1e-10);
    c.hypotheses.push(("positive inputs".into(), true));
    c
}

/// ∫ η₁(s) η₁(1 − s − t/K) ds, exact piecewise-polynomial value.
pub fn eta1_selfconv(t: f64, k_scale: f64) -> f64 {
    assert!(k_scale >= 1.0);
    let eta = CutoffFn::eta1();
    let tau = t / k_scale;
    // breakpoints of s → η₁(s) and of s → η₁(1 − s − τ)
    let mut nodes = eta.breakpoints();
    for b in eta.breakpoints() {
        nodes.push(1.0 - tau - b);
    }
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
    nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let f = |s: f64| eta.eval(s) * eta.eval(1.0 - s - tau);
    let mut total = 0.0;
    for wnd in nodes.windows(2) {
        let (a, b) = (wnd[0], wnd[1]);
        if b <= a {
            continue;
        }
        // product of two affine pieces: quadratic, Simpson is exact
        let m = 0.5 * (a + b);
        total += (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn eta0_eval_examples() {
        let e = CutoffFn::eta0();
        assert!((e.eval(0.5) - 4.0 * LN2).abs() < TOL);
        assert_eq!(e.eval(0.125), 0.0);
        assert_eq!(e.eval(1.5), 0.0);
        // closed form matches the defining expression on a grid
        for i in 0..1000 {
            let t = 0.2 + 0.81 * i as f64 / 1000.0;
            let want = 4.0 * (LN2 - (2.0 * t).ln().abs()).max(0.0);
            assert!((e.eval(t) - want).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn eta1_eval_and_symmetry() {
        let e = CutoffFn::eta1();
        assert_eq!(e.eval(0.5), 1.0);
        assert_eq!(e.eval(0.05), 0.0);
        assert!((e.eval(0.15) - 0.5).abs() < TOL);
        for i in 0..10_000 {
            let t = -0.2 + 1.4 * (i as f64) / 10_000.0;
            assert!((e.eval(1.0 - t) - e.eval(t)).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn eta0_norm_table() {
        let n = CutoffFn::eta0().norms();
        assert!((n.l1 - 1.0).abs() < TOL);
        assert!((n.linf - 4.0 * LN2).abs() < TOL);
        assert!((n.tv1 - 8.0 * LN2).abs() < TOL);
        assert!((n.linf_deriv - 16.0).abs() < TOL);
        assert!((n.tv2 - 48.0).abs() < TOL);
    }

    #[test]
    fn eta1_norm_table() {
        let n = CutoffFn::eta1().norms();
        assert!((n.l2 * n.l2 - 2.0 / 3.0).abs() < TOL);
        assert!((n.linf - 1.0).abs() < TOL);
        assert!((n.l1 - 0.7).abs() < TOL);
        assert!((n.linf_deriv - 10.0).abs() < TOL);
        assert!((n.tv1 - 2.0).abs() < TOL);
        assert!((n.l1_self_deriv - 1.0).abs() < 1e-9);
        assert!((n.tv2 - 40.0).abs() < TOL);
        assert!((n.l1_second_combo - 40.0).abs() < 1e-9);
    }

    #[test]
    fn indicator_norms() {
        let n = CutoffFn::indicator01().norms();
        assert!((n.l1 - 1.0).abs() < TOL);
        assert!((n.tv1 - 2.0).abs() < TOL);
        assert!(n.tv2.is_infinite());
        assert!(n.linf_deriv.is_infinite());
    }

    #[test]
    fn fourier_at_zero_is_mass() {
        assert!((CutoffFn::eta0().fourier(0.0).re - 1.0).abs() < 1e-11);
        assert!((CutoffFn::eta1().fourier(0.0).re - 0.7).abs() < TOL);
        assert!(CutoffFn::eta0().fourier(0.0).im.abs() < 1e-12);
    }

    #[test]
    fn fourier_decay_and_quadrature_crosscheck() {
        let e0 = CutoffFn::eta0();
        let n = e0.norms();
        let v = e0.fourier(100.0);
        assert!(v.norm() <= n.tv1 / (2.0 * PI * 100.0) + 1e-9);
        // independent quadrature oracle over the support
        let f = |t: f64| Complex64::from_polar(e0.eval(t), 2.0 * PI * 100.0 * t);
        let oracle = quad::oscillatory_complex(&f, 0.25, 1.0, 100.0, 1e-13);
        assert!((v - oracle).norm() < 1e-10);
        // k = 2 decay on a log grid
        let mut xi = 1.0;
        while xi <= 1e4 {
            let m = e0.fourier(xi).norm();
            assert!(
                m <= n.tv2 / (2.0 * PI * xi).powi(2) + 1e-11,
                "xi={xi} |F|={m}"
            );
            xi *= 3.7;
        }
    }

    #[test]
    fn fourier_eta1_closed_form_vs_quadrature() {
        let e1 = CutoffFn::eta1();
        for &xi in &[0.3, 2.0, 17.5, 123.0, -41.0] {
            let v = e1.fourier(xi);
            let f = |t: f64| Complex64::from_polar(e1.eval(t), 2.0 * PI * xi * t);
            let oracle = quad::oscillatory_complex(&f, 0.1, 0.9, xi.abs(), 1e-13);
            assert!((v - oracle).norm() < 1e-10, "xi={xi}");
        }
    }

    #[test]
    fn fourier_conjugate_symmetry() {
        let e0 = CutoffFn::eta0();
        for &xi in &[0.1, 1.7, 33.3, 250.0] {
            let a = e0.fourier(xi);
            let b = e0.fourier(-xi);
            assert!((a - b.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn factorization_identity() {
        let c = eta0_factorization_check(1.0, 1.0, 2.0);
        assert!(c.lhs < 1e-12); // both sides 4 ln 2, difference tiny
        let lhs = CutoffFn::eta0().eval(0.5);
        assert!((lhs - 4.0 * LN2).abs() < TOL);
        let c = eta0_factorization_check(1.0, 1.0, 8.0);
        assert!(c.lhs < 1e-12); // both sides 0

        // randomized triples + a midpoint-quadrature oracle for the W-integral
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = rng.gen_range(10.0..1e6);
            let r = rng.gen_range(0.25..1.0);
            let d = rng.gen_range(1.0..x / 4.0);
            let w = r * x / d;
            let c = eta0_factorization_check(d, w, x);
            assert!(c.lhs <= 1e-10, "dev {} at d={d} w={w} x={x}", c.lhs);
        }
        // oracle: midpoint rule on the indicator integrand for a few triples
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let x = rng.gen_range(10.0..1e4);
            let r = rng.gen_range(0.26..0.99);
            let d = rng.gen_range(1.0..x / 4.0);
            let w = r * x / d;
            let lhs = CutoffFn::eta0().eval(d * w / x);
            let n = 2_000_000usize;
            let (a, b) = (0.5 * w, 2.0 * w);
            let h = (b - a) / n as f64;
            let mut s = 0.0;
            for i in 0..n {
                let big_w = a + (i as f64 + 0.5) * h;
                let ind = (d >= x / (2.0 * big_w) && d <= x / big_w) as u32 as f64
                    * (w >= big_w / 2.0 && w <= big_w) as u32 as f64;
                s += ind / big_w * h;
            }
            assert!((4.0 * s - lhs).abs() < 1e-4, "quadrature oracle");
        }
    }

    #[test]
    fn selfconv_limits_and_bound() {
        // τ = 0 gives the L² mass by the reflection symmetry
        assert!((eta1_selfconv(0.0, 1e9) - 2.0 / 3.0).abs() < 1e-12);
        // |result − 2/3| ≤ 10|t|/K ≤ 10/K for |t| ≤ 1 (the Lipschitz budget)
        for &k in &[10.0, 100.0, 1000.0] {
            for i in -10..=10 {
                let t = i as f64 / 10.0;
                let v = eta1_selfconv(t, k);
                assert!(
                    (v - 2.0 / 3.0).abs() <= 10.0 / k + 1e-12,
                    "t={t} K={k} v={v}"
                );
            }
        }
        let v = eta1_selfconv(1.0, 1000.0);
        assert!((v - 2.0 / 3.0).abs() <= 0.01);
    }

    #[test]
    fn selfconv_vs_quadrature_grid() {
        let e1 = CutoffFn::eta1();
        for i in -10..=10 {
            let t = i as f64 / 10.0;
            let v = eta1_selfconv(t, 1000.0);
            let tau = t / 1000.0;
            let f = |s: f64| e1.eval(s) * e1.eval(1.0 - s - tau);
            // integrate between merged breakpoints so Simpson sees smooth spans
            let mut nodes = e1.breakpoints();
            for b in e1.breakpoints() {
                nodes.push(1.0 - tau - b);
            }
            nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut oracle = 0.0;
            for wnd in nodes.windows(2) {
                if wnd[1] > wnd[0] {
                    oracle += quad::adaptive_simpson(&f, wnd[0], wnd[1], 1e-14);
                }
            }
            assert!((v - oracle).abs() < 1e-10, "t={t}");
        }
    }

    proptest! {
        #[test]
        fn eta1_symmetry_prop(t in -0.5f64..1.5) {
            let e = CutoffFn::eta1();
            prop_assert!((e.eval(1.0 - t) - e.eval(t)).abs() < 1e-12);
        }

        #[test]
        fn eta0_nonnegative_and_supported(t in -1.0f64..2.0) {
            let e = CutoffFn::eta0();
            let v = e.eval(t);
            prop_assert!(v >= 0.0);
            if !(0.25..=1.0).contains(&t) {
                prop_assert_eq!(v, 0.0);
            }
        }

        #[test]
        fn fourier_bound_prop(xi in 0.5f64..500.0) {
            let e = CutoffFn::eta1();
            let n = e.norms();
            let v = e.fourier(xi).norm();
            prop_assert!(v <= (n.l1).min(n.tv1 / (2.0 * PI * xi)) + 1e-9);
        }
    }
}
