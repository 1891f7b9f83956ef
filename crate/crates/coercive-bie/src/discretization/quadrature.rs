//! Reference-element quadrature rules.
//!
//! Weights always sum to the measure of the reference element: 1 for the unit
//! interval, 1/2 for the unit simplex `{ξ₁, ξ₂ ≥ 0, ξ₁ + ξ₂ ≤ 1}`.

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub struct RulePoint {
    pub xi: [f64; 2],
    pub w: f64,
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub points: Vec<RulePoint>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss rule needs at least one point");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = 0.5 * (1.0 - z);
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[i] = 0.5 * wi;
        w[n - 1 - i] = 0.5 * wi;
    }
    if n == 1 {
        x[0] = 0.5;
        w[0] = 1.0;
    }
    (x, w)
}

/// Gauss rule on the unit interval.
pub fn interval_rule(n: usize) -> Rule {
    let (x, w) = gauss_legendre(n);
    Rule { points: x.iter().zip(&w).map(|(&x, &w)| RulePoint { xi: [x, 0.0], w }).collect() }
}

fn symmetric(orbits: &[(f64, f64, f64)]) -> Rule {
    // Each orbit: (a, b, weight) with barycentrics (a, b, 1-a-b) and permutations.
    let mut points = Vec::new();
    for &(a, b, w) in orbits {
        let c = 1.0 - a - b;
        let mut perms = vec![[a, b, c], [b, c, a], [c, a, b], [b, a, c], [a, c, b], [c, b, a]];
        perms.sort_by(|p, q| p.partial_cmp(q).unwrap());
        perms.dedup_by(|p, q| p.iter().zip(q.iter()).all(|(x, y)| (x - y).abs() < 1e-15));
        for p in perms {
            points.push(RulePoint { xi: [p[1], p[2]], w: 0.5 * w });
        }
    }
    Rule { points }
}

/// Collapsed (Duffy) Gauss product rule with `m²` points.
pub fn collapsed_rule(m: usize) -> Rule {
    let (x, w) = gauss_legendre(m);
    let mut points = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let s = x[i];
            let t = x[j];
            points.push(RulePoint { xi: [s, t * (1.0 - s)], w: w[i] * w[j] * (1.0 - s) });
        }
    }
    Rule { points }
}

/// Triangle rule: symmetric rules with 1, 3, 6 or 7 points, otherwise a
/// collapsed Gauss rule with at least `n` points.
pub fn triangle_rule(n: usize) -> Rule {
    match n {
        1 => symmetric(&[(1.0 / 3.0, 1.0 / 3.0, 1.0)]),
        3 => symmetric(&[(1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0)]),
        6 => symmetric(&[
            (0.445_948_490_915_965, 0.445_948_490_915_965, 0.223_381_589_678_011),
            (0.091_576_213_509_771, 0.091_576_213_509_771, 0.109_951_743_655_322),
        ]),
        7 => symmetric(&[
            (1.0 / 3.0, 1.0 / 3.0, 0.225),
            (0.470_142_064_105_115, 0.470_142_064_105_115, 0.132_394_152_788_506),
            (0.101_286_507_323_456, 0.101_286_507_323_456, 0.125_939_180_544_827),
        ]),
        _ => collapsed_rule((n as f64).sqrt().ceil() as usize),
    }
}

/// Regular rule on a reference element of dimension `dim - 1`.
pub fn panel_rule(dim: usize, n: usize) -> Rule {
    if dim == 2 {
        interval_rule(n)
    } else {
        triangle_rule(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for p in 0..2 * n {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                assert!((s - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn triangle_rules_sum_to_half() {
        for n in [1, 3, 6, 7, 16, 25] {
            let s: f64 = triangle_rule(n).points.iter().map(|p| p.w).sum();
            assert!((s - 0.5).abs() < 1e-14);
        }
    }
}
