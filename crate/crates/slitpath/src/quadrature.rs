//! Adaptive Gauss-Kronrod quadrature for complex integrands, plus
//! Gauss-Legendre node generation for fixed-order rules.

use num_complex::Complex64;

use crate::{Error, Result};

// G7-K15 nodes and weights on [-1, 1] (positive half; symmetric).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One G7-K15 panel: returns (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kronrod = Complex64::ZERO;
    let mut gauss = Complex64::ZERO;
    for (j, &x) in XGK.iter().enumerate() {
        let dx = half * x;
        let v = if x == 0.0 {
            f(mid)
        } else {
            f(mid - dx) + f(mid + dx)
        };
        kronrod += WGK[j] * v;
        if j % 2 == 1 {
            gauss += WG[j / 2] * v;
        }
    }
    kronrod *= half;
    gauss *= half;
    ((kronrod), (kronrod - gauss).norm())
}

/// Adaptive Gauss-Kronrod integration of a complex integrand over `domain`,
/// refined by interval bisection until the estimated relative error is below
/// `tol`. Returns the value and the absolute error estimate.
///
/// The integrand must decay below `tol * peak` at the endpoints; otherwise
/// the truncation itself would dominate the requested tolerance and
/// [`Error::TruncationTooTight`] is reported.
pub fn quadrature_oracle<F: Fn(f64) -> Complex64>(
    f: F,
    domain: (f64, f64),
    tol: f64,
) -> Result<(Complex64, f64)> {
    let (a, b) = domain;
    // endpoint decay precondition against a coarse peak scan
    let mut peak: f64 = 0.0;
    for i in 0..=64 {
        let x = a + (b - a) * i as f64 / 64.0;
        peak = peak.max(f(x).norm());
    }
    let endpoint = f(a).norm().max(f(b).norm());
    if peak > 0.0 && endpoint > tol * peak {
        return Err(Error::TruncationTooTight {
            tol,
            endpoint: endpoint / peak,
        });
    }
    adaptive(f, a, b, tol)
}

/// Adaptive refinement without the endpoint-decay precondition; used for
/// time integrals whose integrand is largest at an endpoint.
pub(crate) fn adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(Complex64, f64)> {
    if a == b {
        return Ok((Complex64::ZERO, 0.0));
    }
    const MAX_INTERVALS: usize = 4000;
    // (neg error, a, b, value) ordered worst-first
    let mut intervals: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    let (v, e) = gk15(&f, a, b);
    intervals.push((a, b, v, e));
    loop {
        let total: Complex64 = intervals.iter().map(|t| t.2).sum();
        let err: f64 = intervals.iter().map(|t| t.3).sum();
        let scale = total.norm().max(f64::MIN_POSITIVE);
        if err <= tol * scale {
            return Ok((total, err));
        }
        if intervals.len() >= MAX_INTERVALS {
            return Err(Error::NonConvergent {
                achieved: err / scale,
                tol,
            });
        }
        // split the worst interval
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (ia, ib, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (ia + ib);
        let (v1, e1) = gk15(&f, ia, mid);
        let (v2, e2) = gk15(&f, mid, ib);
        intervals.push((ia, mid, v1, e1));
        intervals.push((mid, ib, v2, e2));
    }
}

/// Gauss-Legendre nodes and weights of order `n` on `[a, b]`.
///
/// Newton iteration on the Legendre polynomial recurrence; supports the
/// high orders used by the nested path-integral oracle.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..n {
        xs[i] = mid + half * xs[i];
        ws[i] *= half;
    }
    (xs, ws)
}
