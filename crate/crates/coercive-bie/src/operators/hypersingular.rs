//! Weak form of the hypersingular operator `H = ∂_n 𝒟` applied to smooth
//! boundary data.
//!
//! With `W = -H`, the Maue-type identity
//! `⟨W g, v⟩ = ⟨S curl_Γ g, curl_Γ v⟩ - k² ⟨S (n g), n v⟩`
//! is integrated by parts element by element so that discontinuous test
//! functions are allowed:
//!
//! * d=2: `⟨H g, ψ⟩_τ = [ψ S g']_{start}^{end} - ∫_τ ψ' S g' + k² ∫_τ ψ n·S(n g)`;
//! * d=3: `⟨H g, ψ⟩_τ = -∫_τ curl_Γ ψ · V - ∮_{∂τ} ψ V·t + k² ∫_τ ψ n·S(n g)`,
//!   with `V = S curl_Γ g`, `curl_Γ = ∇_Γ(·) × n` and `t` the counterclockwise
//!   edge tangent.
//!
//! `S` is evaluated pointwise on the boundary by [`layer_at`].

use nalgebra::DVector;
use rayon::prelude::*;

use super::pairs::{PairQuadrature, QuadratureSettings};
use super::potential::{layer_at, LayerKind};
use crate::discretization::quadrature::{interval_rule, triangle_rule};
use crate::discretization::Space;
use crate::error::{Error, Result};
use crate::geometry::{Panel, Point};
use crate::kernels::Kernel;
use crate::Scalar;
use nalgebra::ComplexField as _;

/// Smooth test weight `w` on a panel: returns `(w(x), ∂_t w(x))` with `t` the
/// panel tangent from its first to its second corner.
pub type TestWeight<'a> = &'a (dyn Fn(&Point, &Panel) -> (f64, f64) + Sync);

/// `⟨H g, ψ_i⟩` for data `g` with ambient gradient `grad_g`.
///
/// In d=3 the test space must be piecewise linear.
pub fn hypersingular_weak<K: Kernel>(
    kernel: &K,
    space: &Space,
    settings: QuadratureSettings,
    grad_g: impl Fn(&Point) -> [K::Value; 3] + Sync,
    g: impl Fn(&Point) -> K::Value + Sync,
) -> Result<DVector<K::Value>> {
    hypersingular_weak_weighted(kernel, space, settings, None, grad_g, g)
}

/// `⟨H g, w ψ_i⟩` for a smooth test weight `w` (d=2 only when a weight is given).
pub fn hypersingular_weak_weighted<K: Kernel>(
    kernel: &K,
    space: &Space,
    settings: QuadratureSettings,
    weight: Option<TestWeight>,
    grad_g: impl Fn(&Point) -> [K::Value; 3] + Sync,
    g: impl Fn(&Point) -> K::Value + Sync,
) -> Result<DVector<K::Value>> {
    let mesh = space.mesh();
    if kernel.dim() != mesh.dim() {
        return Err(Error::Dimension("kernel and mesh dimensions differ".into()));
    }
    if weight.is_some() && mesh.dim() != 2 {
        return Err(Error::Unsupported("weighted hypersingular form is implemented for d=2 only".into()));
    }
    let weight_at = |x: &Point, p: &Panel| weight.map_or((1.0, 0.0), |w| w(x, p));
    if mesh.dim() == 3 && space.degree() == 0 {
        return Err(Error::Unsupported(
            "the hypersingular weak form needs p=1 test functions in 3-d; use the indirect formulation for p=0"
                .into(),
        ));
    }
    let quad = PairQuadrature::new(mesh, settings);
    let k2 = kernel.wavenumber().powi(2);
    let nl = space.n_local();

    // Integrand components: curl_Γ g (3) and n g (3).
    let integrand = |y: &Point, p: &Panel| -> [K::Value; 6] {
        let gr = grad_g(y);
        let n = p.normal;
        let curl = [
            gr[1].scale(n.z) - gr[2].scale(n.y),
            gr[2].scale(n.x) - gr[0].scale(n.z),
            gr[0].scale(n.y) - gr[1].scale(n.x),
        ];
        let gy = g(y);
        [curl[0], curl[1], curl[2], gy.scale(n.x), gy.scale(n.y), gy.scale(n.z)]
    };
    let v_at = |x: &Point| layer_at(kernel, &quad, x, LayerKind::Single, integrand);
    let dot3 = |a: &Point, v: &[K::Value; 6], off: usize| -> K::Value {
        v[off].scale(a.x) + v[off + 1].scale(a.y) + v[off + 2].scale(a.z)
    };

    let interior = if mesh.dim() == 2 { interval_rule(8) } else { triangle_rule(16) };
    let edge_rule = interval_rule(8);
    let blocks: Vec<[K::Value; 3]> = (0..mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let p = mesh.panel(e);
            let mut out = [K::Value::ZERO; 3];
            // Surface curl of each local basis function (constant on τ).
            let curls: [Point; 3] = if space.degree() == 0 {
                [Point::zeros(); 3]
            } else if mesh.dim() == 2 {
                // curl_Γ ψ = ψ' (t × n) = -ψ' e_z with ψ' along the tangent.
                let d = 1.0 / p.area;
                [Point::new(0.0, 0.0, d), Point::new(0.0, 0.0, -d), Point::zeros()]
            } else {
                let [a, b, c] = p.corners;
                let grads = [b - c, c - a, a - b].map(|edge| -p.normal.cross(&edge) / (2.0 * p.area));
                grads.map(|gr| gr.cross(&p.normal))
            };
            for q in &interior.points {
                let x = p.map(q.xi);
                let v = v_at(&x);
                let w = q.w * p.jacobian();
                let vals = space.local_values(&p.shape(q.xi));
                let nv = dot3(&p.normal, &v, 3);
                let (wx, dw) = weight_at(&x, p);
                for a in 0..nl {
                    // curl_Γ(w ψ) = w curl_Γ ψ - ψ ∂_t w e_z in d=2.
                    let curl = wx * curls[a] - Point::new(0.0, 0.0, dw * vals[a]);
                    let mut s = -dot3(&curl, &v, 0);
                    s += nv.scale(k2 * wx * vals[a]);
                    out[a] += s.scale(w);
                }
            }
            if mesh.dim() == 2 {
                // [ψ V]: the curl formula above covers -∫ψ'Sg'; add point terms.
                for (end, sign) in [(p.corners[1], 1.0), (p.corners[0], -1.0)] {
                    let v = v_at(&end);
                    // S g' = -V_z.
                    let sg = -v[2];
                    let bary = if sign > 0.0 { [0.0, 1.0, 0.0] } else { [1.0, 0.0, 0.0] };
                    let vals = space.local_values(&bary);
                    let wx = weight_at(&end, p).0;
                    for a in 0..nl {
                        out[a] += sg.scale(sign * wx * vals[a]);
                    }
                }
            } else {
                for k in 0..3 {
                    let v0 = p.corners[k];
                    let v1 = p.corners[(k + 1) % 3];
                    let len = (v1 - v0).norm();
                    let t = (v1 - v0) / len;
                    for q in &edge_rule.points {
                        let s = q.xi[0];
                        let x = v0 + s * (v1 - v0);
                        let v = v_at(&x);
                        let mut bary = [0.0; 3];
                        bary[k] = 1.0 - s;
                        bary[(k + 1) % 3] = s;
                        let vals = space.local_values(&bary);
                        let vt = dot3(&t, &v, 0);
                        for a in 0..nl {
                            out[a] -= vt.scale(q.w * len * vals[a]);
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut b = DVector::<K::Value>::zeros(space.dim());
    for (e, blk) in blocks.iter().enumerate() {
        for a in 0..nl {
            b[space.dof(e, a)] = blk[a];
        }
    }
    Ok(b)
}
