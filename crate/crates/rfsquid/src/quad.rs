//! Quadrature rules.
//!
//! `tanh_sinh` handles integrable endpoint singularities such as the
//! inverse square root at a classical turning point. The integrand receives
//! the node together with its exact distances to both endpoints, so callers
//! can evaluate `E - U(phi)` without cancellation near a turning point.
//! `gauss_kronrod` is an adaptive G7/K15 rule for smooth integrands.

use std::f64::consts::FRAC_PI_2;

const T_MAX: f64 = 4.5;
const MAX_LEVEL: usize = 12;

/// Result of a vector-valued tanh-sinh integration.
#[derive(Debug, Clone, Copy)]
pub struct TanhSinh<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub levels: usize,
}

/// Integrates `f(x, x - a, b - x)` over `[a, b]`.
///
/// Converges when the change between successive step halvings is below
/// `0.1 * sqrt(rtol)` relative; double-exponential convergence makes the
/// actual error roughly the square of that change.
pub fn tanh_sinh<const N: usize, F>(f: F, a: f64, b: f64, rtol: f64) -> TanhSinh<N>
where
    F: Fn(f64, f64, f64) -> [f64; N],
{
    let half = 0.5 * (b - a);
    if half == 0.0 {
        return TanhSinh {
            value: [0.0; N],
            error: 0.0,
            levels: 0,
        };
    }
    let node = |t: f64, acc: &mut [f64; N]| {
        let s = FRAC_PI_2 * t.sinh();
        let q = (-2.0 * s.abs()).exp();
        // distance from the nearer endpoint in units of `half`
        let near = 2.0 * q / (1.0 + q);
        let w = FRAC_PI_2 * t.cosh() * 4.0 * q / ((1.0 + q) * (1.0 + q));
        if near == 0.0 || w == 0.0 {
            return;
        }
        let (x, da, db) = if s < 0.0 {
            let da = half * near;
            (a + da, da, 2.0 * half - da)
        } else {
            let db = half * near;
            (b - db, 2.0 * half - db, db)
        };
        let v = f(x, da, db);
        for i in 0..N {
            if v[i].is_finite() {
                acc[i] += w * v[i];
            }
        }
    };

    let mut sum = [0.0; N];
    node(0.0, &mut sum);
    let mut k = 1;
    while (k as f64) <= T_MAX {
        node(k as f64, &mut sum);
        node(-(k as f64), &mut sum);
        k += 1;
    }
    let mut h = 1.0;
    let mut prev = sum.map(|s| s * h * half);
    let mut delta_prev = f64::INFINITY;
    let tol = 0.1 * rtol.sqrt();
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut j = 1;
        loop {
            let t = j as f64 * h;
            if t > T_MAX {
                break;
            }
            node(t, &mut sum);
            node(-t, &mut sum);
            j += 2;
        }
        let cur = sum.map(|s| s * h * half);
        let scale = cur.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let delta = cur
            .iter()
            .zip(prev.iter())
            .fold(0.0f64, |m, (c, p)| m.max((c - p).abs()))
            / scale;
        if level >= 3 && (delta <= tol || delta == 0.0 || (delta <= 1e-3 && delta >= delta_prev)) {
            return TanhSinh {
                value: cur,
                error: (delta * delta).max(f64::EPSILON) * scale,
                levels: level,
            };
        }
        delta_prev = delta;
        prev = cur;
    }
    TanhSinh {
        value: prev,
        error: delta_prev * prev.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        levels: MAX_LEVEL,
    }
}

/// Scalar convenience wrapper around [`tanh_sinh`].
pub fn tanh_sinh_scalar<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, rtol: f64) -> f64 {
    tanh_sinh(|x, da, db| [f(x, da, db)], a, b, rtol).value[0]
}

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

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature with interval bisection.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, atol: f64, rtol: f64) -> (f64, f64) {
    let mut segs = vec![{
        let (v, e) = kronrod15(&f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..2000 {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= atol.max(rtol * total.abs()) {
            break;
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = segs.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            segs.push((lo, hi, kronrod15(&f, lo, hi).0, 0.0));
            continue;
        }
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
    }
    (segs.iter().map(|s| s.2).sum(), segs.iter().map(|s| s.3).sum())
}

/// Five-point Gauss–Legendre nodes and weights on `[-1, 1]`.
pub const GL5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Fixed five-point Gauss–Legendre rule on `[a, b]`.
pub fn gl5<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    GL5.iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}
