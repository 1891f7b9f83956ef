//! Boundary integral operators: Galerkin matrices, the hypersingular weak
//! form, mean-value projections and potentials.

mod assemble;
mod hypersingular;
pub mod pairs;
mod potential;

use std::fmt::Write as _;

use nalgebra::DMatrix;

pub use assemble::{Assembler, Op, Weight};
pub use hypersingular::{hypersingular_weak, hypersingular_weak_weighted, TestWeight};
pub use pairs::{PairClass, PairQuadrature, QuadratureSettings};
pub use potential::{layer_at, LayerKind, PotentialField, PotentialKind};

use crate::discretization::Space;
use crate::error::{Error, Result};
use crate::Scalar;

/// Galerkin matrices of `P_Γ` (mean value) and `Q_Γ = I - P_Γ`:
/// `P_ij = (ψ_j, 1)(1, ψ_i) / |Γ|`, `Q = M - P`.
pub fn projection_matrices(space: &Space) -> (DMatrix<f64>, DMatrix<f64>) {
    let m = space.mass_matrix();
    let moments = &m * space.ones();
    let measure = space.mesh().measure();
    let p = &moments * moments.transpose() / measure;
    let q = m - &p;
    (p, q)
}

/// `BIE-MAT rows cols real|complex` followed by row-major entries; complex
/// entries are written as `re im`.
pub fn dump_matrix<T: Scalar>(m: &DMatrix<T>) -> String {
    let mut s = String::new();
    let kind = if T::IS_COMPLEX { "complex" } else { "real" };
    writeln!(s, "BIE-MAT {} {} {kind}", m.nrows(), m.ncols()).unwrap();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| {
                let (re, im) = m[(i, j)].parts();
                if T::IS_COMPLEX {
                    format!("{re:.17e} {im:.17e}")
                } else {
                    format!("{re:.17e}")
                }
            })
            .collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    s
}

/// Parses a matrix written by [`dump_matrix`].
pub fn parse_matrix<T: Scalar>(text: &str) -> Result<DMatrix<T>> {
    let bad = |msg: &str| Error::Config(format!("matrix dump: {msg}"));
    let mut tokens = text.split_whitespace();
    if tokens.next() != Some("BIE-MAT") {
        return Err(bad("missing BIE-MAT header"));
    }
    let mut num = |what: &str| -> Result<usize> {
        tokens.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(&format!("bad {what}")))
    };
    let rows = num("row count")?;
    let cols = num("column count")?;
    let complex = match tokens.next() {
        Some("real") => false,
        Some("complex") => true,
        _ => return Err(bad("kind must be real or complex")),
    };
    if complex && !T::IS_COMPLEX {
        return Err(bad("complex data cannot be read into a real matrix"));
    }
    let vals: Vec<f64> = tokens
        .map(|t| t.parse::<f64>().map_err(|_| bad(&format!("bad number {t:?}"))))
        .collect::<Result<_>>()?;
    let per = if complex { 2 } else { 1 };
    if vals.len() != rows * cols * per {
        return Err(bad(&format!("expected {} numbers, found {}", rows * cols * per, vals.len())));
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| {
        let k = (i * cols + j) * per;
        T::from_parts(vals[k], if complex { vals[k + 1] } else { 0.0 })
    }))
}
