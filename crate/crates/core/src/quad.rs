//! Numerical integration: Gauss-Legendre rules, adaptive Gauss-Kronrod (7/15),
//! a semi-infinite mapping and double-exponential (tanh-sinh) quadrature for
//! algebraic endpoint singularities.

use crate::error::{Error, Result};
use std::collections::BinaryHeap;
use std::cmp::Ordering;

/// Default absolute tolerance used by the summation engines.
pub const DEFAULT_ABS_TOL: f64 = 1e-12;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

/// One Kronrod-15 panel: (integral, error estimate, integral of |f|).
pub fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    let mut rabs = (fc * WGK[7]).abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        rk += WGK[j] * (f1 + f2);
        rabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            rg += WG[j / 2] * (f1 + f2);
        }
    }
    let val = rk * h;
    let raw = ((rk - rg) * h).abs();
    let scale = rabs * h.abs();
    // QUADPACK-style rescaling of the Gauss/Kronrod difference
    let err = if scale > 0.0 && raw > 0.0 {
        scale * (200.0 * raw / scale).powf(1.5).min(1.0)
    } else {
        raw
    };
    (val, err.max(50.0 * f64::EPSILON * scale), scale)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }
    if b < a {
        let r = integrate(f, b, a, abs_tol, rel_tol)?;
        return Ok(QuadResult {
            value: -r.value,
            ..r
        });
    }
    let (v, e, ab) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, val: v, err: e, abs: ab });
    let mut total = v;
    let mut total_err = e;
    let mut total_abs = ab;
    let mut evals = 15;
    let max_panels = 4000;
    // below this the error estimate is dominated by rounding in the integrand
    let floor = |abs: f64| 100.0 * f64::EPSILON * abs;
    while total_err > abs_tol.max(rel_tol * total.abs()).max(floor(total_abs)) {
        if heap.len() >= max_panels {
            if !total.is_finite() {
                break;
            }
            return Err(Error::Quadrature(format!(
                "error estimate {total_err:e} after {max_panels} panels on [{a}, {b}]"
            )));
        }
        let p = heap.pop().expect("nonempty");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // interval cannot be split further; keep its estimate
            heap.push(Panel { err: 0.0, ..p });
            total_err = heap.iter().map(|q| q.err).sum();
            if heap.iter().all(|q| q.err == 0.0) {
                break;
            }
            continue;
        }
        let (v1, e1, a1) = gk15(f, p.a, m);
        let (v2, e2, a2) = gk15(f, m, p.b);
        evals += 30;
        heap.push(Panel { a: p.a, b: m, val: v1, err: e1, abs: a1 });
        heap.push(Panel { a: m, b: p.b, val: v2, err: e2, abs: a2 });
        // recompute to avoid drift
        total = 0.0;
        total_err = 0.0;
        total_abs = 0.0;
        let mut comp = 0.0;
        for q in heap.iter() {
            let y = q.val - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
            total_err += q.err;
            total_abs += q.abs;
        }
    }
    if !total.is_finite() {
        return Err(Error::Quadrature("non-finite integrand".into()));
    }
    Ok(QuadResult {
        value: total,
        error: total_err,
        evals,
    })
}

/// Integrates `f` over `[a, ∞)` through `x = a + (1 - s) / s`.
pub fn integrate_to_inf<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    let g = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let x = a + (1.0 - s) / s;
        let v = f(x) / (s * s);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(&g, 0.0, 1.0, abs_tol, rel_tol)
}

/// Tanh-sinh quadrature on `[a, b]`; `f` receives `(x, x - a, b - x)` so
/// integrands singular at an endpoint can use the accurate distance.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult> {
    let h_half = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let eval_at = |t: f64| -> f64 {
        // x = c + h tanh(pi/2 sinh t); distances via 1/(1+e^{2u})
        let u = half_pi * t.sinh();
        let w = half_pi * t.cosh() / u.cosh().powi(2);
        let e = (-2.0 * u.abs()).exp();
        let small = h_half * 2.0 * e / (1.0 + e); // distance to the nearer endpoint
        if small <= 0.0 || !w.is_finite() {
            return 0.0;
        }
        let (x, da, db) = if u >= 0.0 {
            (b - small, b - a - small, small)
        } else {
            (a + small, small, b - a - small)
        };
        let v = f(x, da, db) * w * h_half;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let tmax = 6.5;
    let mut h = 1.0;
    let mut sum = eval_at(0.0);
    let mut k = 1;
    while (k as f64) * h <= tmax {
        let t = k as f64 * h;
        sum += eval_at(t) + eval_at(-t);
        k += 1;
    }
    let mut prev = sum * h;
    let mut evals = 2 * k - 1;
    for level in 0..10 {
        h *= 0.5;
        let mut add = 0.0;
        let mut k = 1;
        while (k as f64) * h <= tmax {
            let t = k as f64 * h;
            add += eval_at(t) + eval_at(-t);
            k += 2;
            evals += 2;
        }
        sum += add;
        let cur = sum * h;
        let diff = (cur - prev).abs();
        if diff <= tol.max(1e-15 * cur.abs()) && level >= 2 {
            return Ok(QuadResult {
                value: cur,
                error: diff,
                evals,
            });
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!("tanh-sinh did not settle on [{a}, {b}]")))
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of absolute values of everything added (for rounding bounds).
    pub fn abs_total(&self) -> f64 {
        self.abs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_smooth_and_peaky() {
        let r = integrate(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-13, 0.0).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        let r = integrate(&|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10, 0.0).unwrap();
        let exact = 2.0 * 100.0 * (100.0f64).atan();
        assert!((r.value - exact).abs() < 1e-8);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_inf(&|x: f64| (-x).exp(), 1.0, 1e-13, 0.0).unwrap();
        assert!((r.value - (-1.0f64).exp()).abs() < 1e-13);
        let r = integrate_to_inf(&|x: f64| 1.0 / (1.0 + x * x), 0.0, 1e-12, 0.0).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // int_0^1 x^{-1/2} = 2, int_0^1 ln x = -1
        let r = tanh_sinh(&|_x, da: f64, _db| da.powf(-0.5), 0.0, 1.0, 1e-13).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let r = tanh_sinh(&|_x, da: f64, _db| da.ln(), 0.0, 1.0, 1e-13).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut k = KahanSum::new();
        k.add(1.0);
        for _ in 0..1000 {
            k.add(1e-17);
        }
        assert!((k.value() - (1.0 + 1e-14)).abs() < 1e-17);
    }
}
