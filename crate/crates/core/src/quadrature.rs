//! Composite Simpson quadrature and golden-section search.

/// Composite Simpson rule on `[a, b]` with `intervals` (rounded up to even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

/// Maximizer of a unimodal function on `[lo, hi]`, to within `tol` in the argument.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Coarse scan over `[lo, hi]` followed by golden-section refinement around the best sample.
pub fn scan_then_refine<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples: usize, tol: f64) -> (f64, f64) {
    let step = (hi - lo) / samples as f64;
    let best = (0..=samples)
        .map(|i| lo + step * i as f64)
        .map(|x| (x, f(x)))
        .fold((lo, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
    let a = (best.0 - step).max(lo);
    let b = (best.0 + step).min(hi);
    let refined = golden_section_max(&f, a, b, tol);
    if refined.1 >= best.1 {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, 2);
        assert!((v - (15.0 / 4.0 - 3.0 + 3.0)).abs() < 1e-13);
    }

    #[test]
    fn simpson_converges_on_sine() {
        let v = simpson(f64::sin, 0.0, std::f64::consts::PI, 1000);
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-14);
    }

    #[test]
    fn scan_handles_multimodal() {
        let f = |x: f64| (3.0 * x).sin() + 0.1 * x;
        let (x, _) = scan_then_refine(f, 0.0, 6.0, 200, 1e-10);
        // global maximum is on the last hump
        assert!(x > 4.0);
    }
}
