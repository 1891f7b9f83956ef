//! Bessel functions of integer order and real positive argument.
//!
//! `J_n` comes from Miller's backward recurrence normalised by
//! `J_0 + 2 Σ J_{2k} = 1`. For `x <= SWITCH` the Neumann series gives `Y_0`
//! and its term-wise derivative gives `Y_1`; beyond `SWITCH` Hankel's
//! asymptotic expansion is used for orders 0 and 1. Higher `Y_n` follow from
//! forward recurrence, which is stable for the second kind.

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SWITCH: f64 = 25.0;

/// `J_0(x), ..., J_nmax(x)` for `x > 0`.
pub fn bessel_j_seq(nmax: usize, x: f64) -> Vec<f64> {
    assert!(x > 0.0, "bessel_j_seq needs x > 0");
    if x > SWITCH && (nmax as f64) < x {
        // Forward recurrence is stable below the turning point.
        let (j0, _) = hankel_asymptotic(0, x);
        let (j1, _) = hankel_asymptotic(1, x);
        let mut out = vec![j0, j1];
        for n in 1..nmax {
            let next = 2.0 * n as f64 / x * out[n] - out[n - 1];
            out.push(next);
        }
        out.truncate(nmax + 1);
        return out;
    }
    let start = {
        let m = (nmax as f64).max(x);
        let s = (m + 30.0 + 4.0 * m.sqrt()) as usize;
        s + (s & 1)
    };
    let mut vals = vec![0.0; start + 2];
    vals[start + 1] = 0.0;
    vals[start] = 1e-300;
    let mut norm = 0.0;
    for n in (1..=start).rev() {
        vals[n - 1] = 2.0 * n as f64 / x * vals[n] - vals[n + 1];
        // Rescale to stay in range.
        if vals[n - 1].abs() > 1e250 {
            for v in vals[n - 1..].iter_mut() {
                *v *= 1e-250;
            }
            norm *= 1e-250;
        }
        if (n - 1) % 2 == 0 && n - 1 > 0 {
            norm += 2.0 * vals[n - 1];
        }
    }
    norm += vals[0];
    vals.truncate(nmax + 1);
    vals.iter().map(|v| v / norm).collect()
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j(0, x)
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j(1, x)
}

pub fn bessel_j(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x > SWITCH && n <= 1 {
        return hankel_asymptotic(n, x).0;
    }
    bessel_j_seq(n, x)[n]
}

/// `(Y_0(x), Y_1(x))` for `x > 0`.
pub fn bessel_y01(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "Y_n is singular at 0");
    if x > SWITCH {
        return (hankel_asymptotic(0, x).1, hankel_asymptotic(1, x).1);
    }
    let kmax = ((x + 30.0 + 4.0 * x.sqrt()) as usize) / 2 + 1;
    let j = bessel_j_seq(2 * kmax + 1, x);
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let pi = std::f64::consts::PI;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for k in 1..=kmax {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
    }
    let y0 = 2.0 / pi * lg * j[0] - 4.0 / pi * s0;
    let y1 = -2.0 / pi * (j[0] / x - lg * j[1]) + 2.0 / pi * s1;
    (y0, y1)
}

/// `Y_0(x), ..., Y_nmax(x)`.
pub fn bessel_y_seq(nmax: usize, x: f64) -> Vec<f64> {
    let (y0, y1) = bessel_y01(x);
    let mut out = vec![y0, y1];
    for n in 1..nmax {
        let next = 2.0 * n as f64 / x * out[n] - out[n - 1];
        out.push(next);
    }
    out.truncate(nmax + 1);
    out
}

pub fn bessel_y(n: usize, x: f64) -> f64 {
    bessel_y_seq(n, x)[n]
}

/// Hankel function of the first kind `H_n^(1)(x) = J_n(x) + i Y_n(x)`.
pub fn hankel1(n: usize, x: f64) -> Complex64 {
    Complex64::new(bessel_j(n, x), bessel_y(n, x))
}

/// `(H_0^(1)(x), H_1^(1)(x))`, the pair needed by the 2-d Helmholtz kernel.
pub fn hankel1_01(x: f64) -> (Complex64, Complex64) {
    let (y0, y1) = bessel_y01(x);
    let (j0, j1) = if x > SWITCH {
        (hankel_asymptotic(0, x).0, hankel_asymptotic(1, x).0)
    } else {
        let j = bessel_j_seq(1, x);
        (j[0], j[1])
    };
    (Complex64::new(j0, y0), Complex64::new(j1, y1))
}

/// Hankel's large-argument expansion; returns `(J_n(x), Y_n(x))`.
fn hankel_asymptotic(n: usize, x: f64) -> (f64, f64) {
    let mu = 4.0 * (n * n) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last || term.abs() < 1e-17 {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let chi = x - (0.5 * n as f64 + 0.25) * std::f64::consts::PI;
    let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
    let (s, c) = chi.sin_cos();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}
