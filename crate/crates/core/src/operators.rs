//! Nijenhuis, Rota-Baxter, and modified Rota-Baxter operators.
//!
//! Operator matrices act on column vectors: `matrix[i][j]` is the
//! coefficient of `e_i` in `N(e_j)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lts::{check_lts, LieTripleSystem};
use crate::rational::Rational;
use crate::report::Report;
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOperator {
    pub matrix: Matrix,
    pub weight: Option<Rational>,
}

impl LinearOperator {
    pub fn new(matrix: Matrix) -> Self {
        LinearOperator {
            matrix,
            weight: None,
        }
    }

    pub fn with_weight(matrix: Matrix, weight: Rational) -> Self {
        LinearOperator {
            matrix,
            weight: Some(weight),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

fn check_dims(l: &LieTripleSystem, n: &Matrix) -> Result<()> {
    if !n.is_square() || n.rows() != l.dim() {
        return Err(Error::Shape(format!(
            "operator is {}x{}, system has dimension {}",
            n.rows(),
            n.cols(),
            l.dim()
        )));
    }
    Ok(())
}

/// The three pieces of a deformed bracket, in `(x, y, z)`:
/// `A = [Nx,Ny,z] + [x,Ny,Nz] + [Nx,y,Nz]`,
/// `B = [Nx,y,z] + [x,Ny,z] + [x,y,Nz]`, `C = [x,y,z]`.
#[derive(Debug, Clone)]
pub struct BracketParts {
    pub a: Tensor,
    pub b: Tensor,
    pub c: Tensor,
}

pub fn bracket_parts(c: &Tensor, n: &Matrix) -> BracketParts {
    let n0 = c.apply_in(0, n);
    let n1 = c.apply_in(1, n);
    let n2 = c.apply_in(2, n);
    let a = n0
        .apply_in(1, n)
        .add(&n1.apply_in(2, n))
        .add(&n0.apply_in(2, n));
    let b = n0.add(&n1).add(&n2);
    BracketParts { a, b, c: c.clone() }
}

/// `[x,y,z]_N = A - N(B - N C)`.
pub fn induced_tensor(c: &Tensor, n: &Matrix) -> Tensor {
    let p = bracket_parts(c, n);
    p.a.sub(&p.b.sub(&p.c.apply_out(n)).apply_out(n))
}

/// `[Nx, Ny, Nz] - N [x,y,z]_N`.
pub fn nijenhuis_defect(c: &Tensor, n: &Matrix) -> Tensor {
    c.apply_in_all(n).sub(&induced_tensor(c, n).apply_out(n))
}

pub fn is_nijenhuis(l: &LieTripleSystem, n: &LinearOperator) -> Result<Report> {
    check_dims(l, &n.matrix)?;
    let c = l.bracket();
    let mut r = Report::new();
    r.compare(
        "Nijenhuis",
        &c.apply_in_all(&n.matrix),
        &induced_tensor(c, &n.matrix).apply_out(&n.matrix),
    );
    Ok(r)
}

fn weighted(p: &BracketParts, l1: &Rational, l2: &Rational) -> Tensor {
    p.a.add(&p.b.scale(l1)).add(&p.c.scale(l2))
}

/// `[Rx,Ry,Rz] = R(A + lambda B + lambda^2 C)`.
pub fn is_rota_baxter(l: &LieTripleSystem, r: &Matrix, lambda: &Rational) -> Result<Report> {
    check_dims(l, r)?;
    let c = l.bracket();
    let p = bracket_parts(c, r);
    let rhs = weighted(&p, lambda, &(lambda * lambda)).apply_out(r);
    let mut rep = Report::new();
    rep.compare("Rota-Baxter", &c.apply_in_all(r), &rhs);
    Ok(rep)
}

/// `[Rx,Ry,Rz] = R(A - lambda C) + lambda B`.
pub fn is_modified_rb(l: &LieTripleSystem, r: &Matrix, lambda: &Rational) -> Result<Report> {
    check_dims(l, r)?;
    let c = l.bracket();
    let p = bracket_parts(c, r);
    let rhs =
        p.a.sub(&p.c.scale(lambda))
            .apply_out(r)
            .add(&p.b.scale(lambda));
    let mut rep = Report::new();
    rep.compare("modified Rota-Baxter", &c.apply_in_all(r), &rhs);
    Ok(rep)
}

/// `2R + lambda id`, of weight `-lambda^2`.
pub fn rb_to_modified(r: &Matrix, lambda: &Rational) -> LinearOperator {
    let two = Rational::from_int(2);
    let m = r
        .scale(&two)
        .add(&Matrix::scalar(r.rows(), lambda))
        .expect("square operator");
    LinearOperator::with_weight(m, -(lambda * lambda))
}

#[derive(Debug, Clone, Serialize)]
pub struct InducedBracket {
    #[serde(skip)]
    pub bracket: Tensor,
    /// Whether the operator was Nijenhuis; without it the result need not be
    /// a Lie triple system.
    pub nijenhuis: bool,
    pub lts_report: Report,
    /// `N [x,y,z]_N = [Nx,Ny,Nz]` on all basis triples.
    pub morphism: bool,
}

pub fn induced_bracket(l: &LieTripleSystem, n: &LinearOperator) -> Result<InducedBracket> {
    check_dims(l, &n.matrix)?;
    let c = l.bracket();
    let bracket = induced_tensor(c, &n.matrix);
    let lts_report = check_lts(&bracket)?;
    let morphism = nijenhuis_defect(c, &n.matrix).is_zero();
    Ok(InducedBracket {
        bracket,
        nijenhuis: morphism,
        lts_report,
        morphism,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SquareShape {
    #[serde(rename = "N^2=0")]
    Zero,
    #[serde(rename = "N^2=N")]
    Idempotent,
    #[serde(rename = "N^2=id")]
    Involution,
    #[serde(rename = "N^2=-id")]
    AntiInvolution,
}

#[derive(Debug, Clone, Serialize)]
pub struct SquareCase {
    pub shape: SquareShape,
    /// The partner property, e.g. "Rota-Baxter weight 0".
    pub partner: String,
    pub nijenhuis: bool,
    pub partner_holds: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SquareReport {
    pub cases: Vec<SquareCase>,
    pub consistent: bool,
}

/// Detects the special square shapes and evaluates the matching equivalence.
pub fn classify_by_square(l: &LieTripleSystem, n: &Matrix) -> Result<SquareReport> {
    check_dims(l, n)?;
    let d = n.rows();
    let sq = n.mul(n)?;
    let id = Matrix::identity(d);
    let nij = is_nijenhuis(l, &LinearOperator::new(n.clone()))?.ok;
    let one = Rational::ONE;
    let mut cases = Vec::new();
    let mut add = |shape, partner: &str, holds: bool| {
        cases.push(SquareCase {
            shape,
            partner: partner.to_string(),
            nijenhuis: nij,
            partner_holds: holds,
            consistent: nij == holds,
        });
    };
    if sq.is_zero() {
        add(
            SquareShape::Zero,
            "Rota-Baxter weight 0",
            is_rota_baxter(l, n, &Rational::ZERO)?.ok,
        );
    }
    if sq == *n {
        add(
            SquareShape::Idempotent,
            "Rota-Baxter weight -1",
            is_rota_baxter(l, n, &-&one)?.ok,
        );
    }
    if sq == id {
        add(
            SquareShape::Involution,
            "modified Rota-Baxter weight -1",
            is_modified_rb(l, n, &-&one)?.ok,
        );
    }
    if sq == id.scale(&-&one) {
        add(
            SquareShape::AntiInvolution,
            "modified Rota-Baxter weight 1",
            is_modified_rb(l, n, &one)?.ok,
        );
    }
    let consistent = cases.iter().all(|c| c.consistent);
    Ok(SquareReport { cases, consistent })
}

pub const DEFAULT_BUDGET: u128 = 5_000_000;

/// All operators with entries in `values` that are Nijenhuis, in
/// lexicographic order of their row-major entries.
pub fn grid_search_nijenhuis(
    l: &LieTripleSystem,
    values: &[Rational],
    budget: u128,
) -> Result<Vec<LinearOperator>> {
    let mut vals = values.to_vec();
    vals.sort();
    vals.dedup();
    let n = l.dim();
    let cells = (n * n) as u32;
    let k = vals.len() as u128;
    let total = k.checked_pow(cells).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::Budget {
            needed: total,
            budget,
        });
    }
    if vals.is_empty() {
        return Ok(Vec::new());
    }
    let c = l.bracket();
    let found: Vec<u128> = (0..total as u64)
        .into_par_iter()
        .filter(|&code| {
            let m = grid_matrix(n, &vals, code as u128);
            nijenhuis_defect(c, &m).is_zero()
        })
        .map(|c| c as u128)
        .collect();
    // Codes enumerate in lexicographic order because the first matrix entry
    // is the most significant digit and `vals` is sorted.
    let mut found = found;
    found.sort_unstable();
    Ok(found
        .into_iter()
        .map(|code| LinearOperator::new(grid_matrix(n, &vals, code)))
        .collect())
}

fn grid_matrix(n: usize, vals: &[Rational], mut code: u128) -> Matrix {
    let k = vals.len() as u128;
    let mut e = vec![Rational::ZERO; n * n];
    for slot in (0..n * n).rev() {
        e[slot] = vals[(code % k) as usize].clone();
        code /= k;
    }
    Matrix::from_entries(n, n, e).expect("square grid matrix")
}
