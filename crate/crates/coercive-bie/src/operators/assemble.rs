//! Dense Galerkin assembly of the primitive boundary operators.
//!
//! Kernels are written through `∇_y Φ(x, y) = g(r) (x - y)`:
//!
//! | operator | kernel |
//! |---|---|
//! | `S` | `Φ` |
//! | `D` | `g (x - y)·n(y)` |
//! | `D'` | `-g (x - y)·n(x)` |
//! | `K_Z` | `g (x - y)·Z(y)` |
//! | `Z·∇_Γ S` | `-g (x - y)·Z_t(x)` |
//!
//! On a flat element `D` and `D'` vanish identically. `K_Z` and `Z·∇_Γ S` are
//! principal-value integrals there; their self-terms are computed from the
//! form symmetrised under `x ↔ y`, which is bounded.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::pairs::{PairClass, PairPoint, PairQuadrature, QuadratureSettings};
use crate::discretization::Space;
use crate::error::{Error, Result};
use crate::geometry::{Mesh, Point};
use crate::kernels::Kernel;
use crate::vector_field::VectorField;
use crate::Scalar;
use nalgebra::ComplexField as _;

/// Real weight applied on the test side, `(w S ψ_j, ψ_i)`.
pub type Weight<'a> = &'a (dyn Fn(&Point) -> f64 + Sync);

/// A primitive boundary operator.
#[derive(Clone, Copy)]
pub enum Op<'a> {
    S,
    D,
    Dprime,
    KZ(&'a VectorField),
    KZprime(&'a VectorField),
    GradSDotZ(&'a VectorField),
    /// Single layer multiplied on the left by a real function.
    WeightedS(Weight<'a>),
}

impl Op<'_> {
    pub fn tag(&self) -> &'static str {
        match self {
            Op::S => "S",
            Op::D => "D",
            Op::Dprime => "Dprime",
            Op::KZ(_) => "KZ",
            Op::KZprime(_) => "KZprime",
            Op::GradSDotZ(_) => "gradS_dot_Z",
            Op::WeightedS(_) => "weighted_S",
        }
    }
}

impl std::fmt::Debug for Op<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Kernel plus precomputed pair quadrature on one mesh.
pub struct Assembler<'m, K: Kernel> {
    kernel: K,
    quad: PairQuadrature<'m>,
}

impl<'m, K: Kernel> Assembler<'m, K> {
    pub fn new(kernel: K, mesh: &'m Mesh, settings: QuadratureSettings) -> Result<Self> {
        if kernel.dim() != mesh.dim() {
            return Err(Error::Dimension(format!(
                "kernel is {}-dimensional but the mesh is {}-dimensional",
                kernel.dim(),
                mesh.dim()
            )));
        }
        Ok(Assembler { kernel, quad: PairQuadrature::new(mesh, settings) })
    }

    pub fn kernel(&self) -> &K {
        &self.kernel
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.quad.mesh()
    }

    pub fn quadrature(&self) -> &PairQuadrature<'m> {
        &self.quad
    }

    /// `(Op ψ_j, ψ_i)` with `ψ_i` from `test` and `ψ_j` from `trial`.
    pub fn assemble(&self, op: Op, test: &Space, trial: &Space) -> Result<DMatrix<K::Value>> {
        Ok(self.assemble_many(&[op], test, trial)?.pop().expect("one matrix"))
    }

    /// Several operators in one sweep, sharing kernel evaluations.
    pub fn assemble_many(&self, ops: &[Op], test: &Space, trial: &Space) -> Result<Vec<DMatrix<K::Value>>> {
        for s in [test, trial] {
            if !std::ptr::eq(s.mesh(), self.mesh()) {
                return Err(Error::Dimension("space is defined on a different mesh".into()));
            }
        }
        // D' and K_Z' are transposes of D and K_Z with the roles of the spaces
        // swapped, so adjoint pairs agree to rounding.
        let direct: Vec<Op> =
            ops.iter().filter(|o| !matches!(o, Op::KZprime(_) | Op::Dprime)).copied().collect();
        let mut direct_mats = self.sweep(&direct, test, trial).into_iter();
        let mut out = Vec::with_capacity(ops.len());
        for op in ops {
            match op {
                Op::KZprime(z) => {
                    let m = self.sweep(&[Op::KZ(z)], trial, test).pop().expect("one matrix");
                    out.push(m.transpose());
                }
                Op::Dprime => {
                    let m = self.sweep(&[Op::D], trial, test).pop().expect("one matrix");
                    out.push(m.transpose());
                }
                _ => out.push(direct_mats.next().expect("matrix per operator")),
            }
        }
        Ok(out)
    }

    fn sweep(&self, ops: &[Op], test: &Space, trial: &Space) -> Vec<DMatrix<K::Value>> {
        let n_el = self.mesh().n_elements();
        let nt = test.n_local();
        let ns = trial.n_local();
        let cols = trial.dim();
        let nops = ops.len();
        if nops == 0 {
            return Vec::new();
        }
        // Row block of element i: [op][a][col].
        let rows: Vec<Vec<K::Value>> = (0..n_el)
            .into_par_iter()
            .map(|i| {
                let mut buf = vec![K::Value::ZERO; nops * nt * cols];
                let mut pts = Vec::new();
                let mut block = vec![K::Value::ZERO; nops * 9];
                for j in 0..n_el {
                    block.iter_mut().for_each(|v| *v = K::Value::ZERO);
                    self.pair(ops, test, trial, i, j, &mut pts, &mut block);
                    for k in 0..nops {
                        for a in 0..nt {
                            for b in 0..ns {
                                buf[(k * nt + a) * cols + trial.dof(j, b)] = block[k * 9 + a * 3 + b];
                            }
                        }
                    }
                }
                buf
            })
            .collect();
        let mut mats = vec![DMatrix::<K::Value>::zeros(test.dim(), cols); nops];
        for (i, buf) in rows.iter().enumerate() {
            for (k, m) in mats.iter_mut().enumerate() {
                for a in 0..nt {
                    let row = test.dof(i, a);
                    let src = &buf[(k * nt + a) * cols..(k * nt + a + 1) * cols];
                    for (c, v) in src.iter().enumerate() {
                        m[(row, c)] = *v;
                    }
                }
            }
        }
        mats
    }

    /// Accumulates the local blocks of pair `(i, j)` into `block[op][a][b]`.
    #[allow(clippy::too_many_arguments)]
    fn pair(
        &self,
        ops: &[Op],
        test: &Space,
        trial: &Space,
        i: usize,
        j: usize,
        pts: &mut Vec<PairPoint>,
        block: &mut [K::Value],
    ) {
        let mesh = self.mesh();
        let ni = mesh.panel(i).normal;
        let nj = mesh.panel(j).normal;
        let class = self.quad.classify(i, j, pts);
        let ctx = PairCtx { ops, test, trial, ni, nj, coincident: class == PairClass::Coincident };
        match class {
            PairClass::Separated { level } => {
                let pi = self.quad.element_points(i, level);
                let pj = self.quad.element_points(j, level);
                for p in pi {
                    for q in pj {
                        let pt = PairPoint { x: p.x, y: q.x, bx: p.b, by: q.b, w: p.w * q.w };
                        self.point(&ctx, &pt, block);
                    }
                }
            }
            _ => {
                for pt in pts.iter() {
                    self.point(&ctx, pt, block);
                }
            }
        }
    }

    #[inline]
    fn point(&self, ctx: &PairCtx, pt: &PairPoint, block: &mut [K::Value]) {
        let d = pt.x - pt.y;
        let r = d.norm();
        if r == 0.0 {
            return;
        }
        let (phi, g) = self.kernel.radial(r);
        let tx = ctx.test.local_values(&pt.bx);
        let sy = ctx.trial.local_values(&pt.by);
        let nt = ctx.test.n_local();
        let ns = ctx.trial.n_local();
        let add = |block: &mut [K::Value], k: usize, c: K::Value| {
            for a in 0..nt {
                for b in 0..ns {
                    block[k * 9 + a * 3 + b] += c.scale(tx[a] * sy[b]);
                }
            }
        };
        for (k, op) in ctx.ops.iter().enumerate() {
            match op {
                Op::S => add(block, k, phi.scale(pt.w)),
                Op::WeightedS(f) => add(block, k, phi.scale(pt.w * f(&pt.x))),
                Op::D if !ctx.coincident => add(block, k, g.scale(pt.w * d.dot(&ctx.nj))),
                Op::D => {}
                Op::KZ(z) if !ctx.coincident => {
                    add(block, k, g.scale(pt.w * d.dot(&z.eval(&pt.y, &ctx.nj))));
                }
                Op::GradSDotZ(z) if !ctx.coincident => {
                    let zx = z.eval(&pt.x, &ctx.ni);
                    let zt = zx - zx.dot(&ctx.ni) * ctx.ni;
                    add(block, k, g.scale(-pt.w * d.dot(&zt)));
                }
                Op::KZ(z) | Op::GradSDotZ(z) => {
                    // Same element: symmetrise under x <-> y. In-plane, d·Z_t = d·Z.
                    let zx = d.dot(&z.eval(&pt.x, &ctx.ni));
                    let zy = d.dot(&z.eval(&pt.y, &ctx.nj));
                    let ty = ctx.test.local_values(&pt.by);
                    let sx = ctx.trial.local_values(&pt.bx);
                    let kz = matches!(op, Op::KZ(_));
                    for a in 0..nt {
                        for b in 0..ns {
                            let (xy, yx) = (tx[a] * sy[b], ty[a] * sx[b]);
                            let v = if kz { xy * zy - yx * zx } else { yx * zy - xy * zx };
                            block[k * 9 + a * 3 + b] += g.scale(0.5 * pt.w * v);
                        }
                    }
                }
                Op::KZprime(_) | Op::Dprime => unreachable!("handled by transposition"),
            }
        }
    }
}

struct PairCtx<'a, 's> {
    ops: &'a [Op<'a>],
    test: &'s Space<'s>,
    trial: &'s Space<'s>,
    ni: Point,
    nj: Point,
    coincident: bool,
}
