use std::f64::consts::PI;

use coercive_bie::error::Error;
use coercive_bie::geometry::Point;
use coercive_bie::kernels::bessel::{bessel_j, bessel_y, hankel1_01};
use coercive_bie::kernels::{Helmholtz, Kernel, Laplace};
use num_complex::Complex64;

fn reference_table() -> Vec<(usize, f64, f64, f64)> {
    let text = include_str!("data/bessel_reference.txt");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn bessel_functions_match_high_precision_reference() {
    let table = reference_table();
    assert!(table.len() > 100);
    for (n, x, j, y) in table {
        let (jj, yy) = (bessel_j(n, x), bessel_y(n, x));
        assert!((jj - j).abs() <= 1e-10 * j.abs() + 1e-15, "J_{n}({x}) = {jj}, expected {j}");
        assert!((yy - y).abs() <= 1e-10 * y.abs(), "Y_{n}({x}) = {yy}, expected {y}");
    }
}

#[test]
fn hankel_pair_is_consistent_with_j_and_y() {
    for x in [0.05, 1.0, 24.99, 25.01, 60.0] {
        let (h0, h1) = hankel1_01(x);
        assert!((h0 - Complex64::new(bessel_j(0, x), bessel_y(0, x))).norm() < 1e-14 * h0.norm());
        assert!((h1 - Complex64::new(bessel_j(1, x), bessel_y(1, x))).norm() < 1e-14 * h1.norm());
    }
}

#[test]
fn laplace_values() {
    let l3 = Laplace::new(3).unwrap();
    let x = Point::zeros();
    let y = Point::new(1.0, 0.0, 0.0);
    assert!((l3.phi(&x, &y).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-16);
    assert!((l3.phi(&x, &y).unwrap() - 0.0795775).abs() < 1e-7);
    let l2 = Laplace::with_scale(2, 1.0).unwrap();
    assert_eq!(l2.phi(&x, &y).unwrap(), 0.0);
    assert!(matches!(l2.phi(&x, &x), Err(Error::Singular)));
    assert!(matches!(l3.grad_y_phi(&y, &y), Err(Error::Singular)));
}

#[test]
fn laplace_gradients() {
    let l3 = Laplace::new(3).unwrap();
    // x - y = (1, 0, 0).
    let g = l3.grad_y_phi(&Point::new(1.0, 0.0, 0.0), &Point::zeros()).unwrap();
    assert!((g[0] - 1.0 / (4.0 * PI)).abs() < 1e-16 && g[1] == 0.0 && g[2] == 0.0);
    // Finite-difference check of the gradient of the planar kernel.
    let l2 = Laplace::with_scale(2, 3.0).unwrap();
    let x = Point::new(0.3, -0.4, 0.0);
    let y = Point::new(1.1, 0.5, 0.0);
    let g = l2.grad_y_phi(&x, &y).unwrap();
    let h = 1e-6;
    for c in 0..2 {
        let mut e = Point::zeros();
        e[c] = h;
        let fd = (l2.phi(&x, &(y + e)).unwrap() - l2.phi(&x, &(y - e)).unwrap()) / (2.0 * h);
        assert!((fd - g[c]).abs() < 1e-8, "{fd} vs {}", g[c]);
    }
}

#[test]
fn helmholtz_low_frequency_limit() {
    let h = Helmholtz::new(3, 1e-6).unwrap();
    let l = Laplace::new(3).unwrap();
    let x = Point::zeros();
    let y = Point::new(0.0, 0.6, 0.8);
    let (hk, l0) = (h.phi(&x, &y).unwrap(), l.phi(&x, &y).unwrap());
    // e^{ikr}/(4πr) = 1/(4πr) + ik/(4π) + O(k²): the real parts agree to
    // O(k²) while the imaginary part is the constant k/(4π).
    assert!((hk.re - l0).abs() < 1e-8);
    assert!((hk.im - 1e-6 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn helmholtz_is_outgoing() {
    // ∂_rΦ/Φ → ik as r → ∞.
    for dim in [2, 3] {
        let k = 2.0;
        let kernel = Helmholtz::new(dim, k).unwrap();
        let r = 400.0;
        let (phi, g) = kernel.radial(r);
        // ∂_r Φ = -g r since ∇_y Φ = g (x - y).
        let ratio = -g * r / phi;
        assert!((ratio.im - k).abs() < 1e-2, "d={dim}: {ratio}");
        assert!(ratio.re.abs() < 2.0 / r);
    }
}

#[test]
fn helmholtz_rejects_bad_wavenumbers() {
    assert!(Helmholtz::new(2, 0.0).is_err());
    assert!(Helmholtz::new(4, 1.0).is_err());
    assert!(Laplace::with_scale(2, -1.0).is_err());
}
