//! Adaptive quadrature used where no closed form exists: Fourier transforms
//! of log-affine cutoff pieces, arc integrals of |S|², and test oracles.

use num_complex::Complex64;

/// Adaptive Simpson on a real integrand.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    simpson_rec(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        left + right + err / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive Simpson on a complex integrand.
pub fn adaptive_simpson_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Complex64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    csimpson_rec(f, a, b, fa, fm, fb, csimpson(a, b, fa, fm, fb), tol, 50)
}

fn csimpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + 4.0 * fm + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn csimpson_rec<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = csimpson(a, m, fa, flm, fm);
    let right = csimpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if depth == 0 || err.norm() <= 15.0 * tol {
        left + right + err / 15.0
    } else {
        csimpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + csimpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Oscillation-aware driver: split `[a, b]` so each panel sees at most about
/// half a cycle of the frequency `cycles_per_unit`, then run adaptive Simpson
/// on each panel with a shared absolute budget.
pub fn oscillatory_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    cycles_per_unit: f64,
    tol: f64,
) -> Complex64 {
    let cycles = (cycles_per_unit.abs() * (b - a)).max(1.0);
    let panels = (2.0 * cycles).ceil().min(4e6) as usize;
    let h = (b - a) / panels as f64;
    let per_panel_tol = tol / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..panels {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == panels { b } else { lo + h };
        total += adaptive_simpson_complex(f, lo, hi, per_panel_tol);
    }
    total
}

/// Real integrals over a union of panels with a peak-aware initial split:
/// extra nodes are planted geometrically toward `peak` before adapting.
pub fn adaptive_with_peak<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    a: f64,
    b: f64,
    peak: f64,
    peak_width: f64,
    tol_rel: f64,
) -> f64 {
    let mut nodes = vec![a, b];
    if peak >= a && peak <= b && peak_width > 0.0 {
        let mut w = peak_width;
        while w < (b - a) {
            for s in [-1.0, 1.0] {
                let t = peak + s * w;
                if t > a && t < b {
                    nodes.push(t);
                }
            }
            w *= 2.0;
        }
        nodes.push(peak);
    }
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
    nodes.dedup();
    // first pass at a crude tolerance to size the budget
    let mut crude = 0.0;
    for wnd in nodes.windows(2) {
        crude += adaptive_simpson(f, wnd[0], wnd[1], 1e-3 * (wnd[1] - wnd[0]).abs() + 1e-300);
    }
    let budget = crude.abs().max(1e-300) * tol_rel;
    let mut total = 0.0;
    for wnd in nodes.windows(2) {
        total += adaptive_simpson(f, wnd[0], wnd[1], budget * (wnd[1] - wnd[0]) / (b - a));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_exact() {
        let v = adaptive_simpson(&|t: f64| 3.0 * t * t, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-10);
    }

    #[test]
    fn oscillatory_against_closed_form() {
        // ∫_0^1 e^{2πiξt} dt = (e^{2πiξ} − 1)/(2πiξ)
        let xi = 37.25;
        let f = |t: f64| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * xi * t);
        let got = oscillatory_complex(&f, 0.0, 1.0, xi, 1e-12);
        let w = Complex64::new(0.0, 2.0 * std::f64::consts::PI * xi);
        let want = (w.exp() - 1.0) / w;
        assert!((got - want).norm() < 1e-10);
    }

    #[test]
    fn peaky_integrand() {
        // Lorentzian of width 1e-5 at 0 over [-1e-2, 1e-2]
        let w = 1e-5;
        let f = |t: f64| w / (t * t + w * w);
        let got = adaptive_with_peak(&f, -1e-2, 1e-2, 0.0, w, 1e-8);
        let want = 2.0 * (1e-2f64 / w).atan();
        assert!((got - want).abs() / want < 1e-6, "{got} vs {want}");
    }
}
