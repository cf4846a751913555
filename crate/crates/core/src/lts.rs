//! Lie triple systems, Lie algebras, and representations.
//!
//! Index conventions, used everywhere (including JSON):
//! - bracket `c[m][i][j][k]`: coefficient of `e_m` in `[e_i, e_j, e_k]`;
//! - Lie bracket `b[m][i][j]`: coefficient of `e_m` in `[e_i, e_j]`;
//! - representation `theta[a][b][i][j]`: coefficient of `e_a` in
//!   `theta(e_i, e_j) e_b`. `D(x, y) = theta(y, x) - theta(x, y)` is always
//!   derived, never stored.
//!
//! Identities are checked on basis tuples, which suffices by multilinearity.

use crate::error::{Error, Result};
use crate::report::Report;
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieTripleSystem {
    c: Tensor,
}

impl LieTripleSystem {
    /// Validates the axioms; the error carries the first violated one.
    pub fn new(c: Tensor) -> Result<Self> {
        let r = check_lts(&c)?;
        if !r.ok {
            return Err(Error::Invalid(format!(
                "not a Lie triple system ({} violations, first: {})",
                r.violation_count,
                r.violations[0].detail_line()
            )));
        }
        Ok(LieTripleSystem { c })
    }

    pub fn abelian(n: usize) -> Self {
        LieTripleSystem {
            c: Tensor::zeros(&[n, n, n, n]),
        }
    }

    pub fn dim(&self) -> usize {
        self.c.out_dim()
    }

    pub fn bracket(&self) -> &Tensor {
        &self.c
    }

    pub fn into_bracket(self) -> Tensor {
        self.c
    }
}

impl crate::report::Violation {
    pub fn detail_line(&self) -> String {
        format!("{} at {:?}: {}", self.rule, self.witness, self.detail)
    }
}

fn check_bracket_shape(c: &Tensor) -> Result<usize> {
    let n = c.out_dim();
    if c.arity() != 3 || c.arg_dims().iter().any(|&d| d != n) {
        return Err(Error::Shape(format!(
            "bracket tensor must be n x n x n x n, got {:?}",
            c.dims()
        )));
    }
    Ok(n)
}

/// Alternation in the first two slots.
pub fn alternation_defect(c: &Tensor) -> Tensor {
    c.add(&c.rearrange(&[1, 0, 2]))
}

/// Cyclic sum over the last three slots.
pub fn cyclic_defect(t: &Tensor) -> Tensor {
    let a = t.arity();
    let mut l1: Vec<usize> = (0..a).collect();
    let mut l2 = l1.clone();
    // t(.., y, z, x) and t(.., z, x, y) as functions of (.., x, y, z)
    l1[a - 3] = a - 2;
    l1[a - 2] = a - 1;
    l1[a - 1] = a - 3;
    l2[a - 3] = a - 1;
    l2[a - 2] = a - 3;
    l2[a - 1] = a - 2;
    t.add(&t.rearrange(&l1)).add(&t.rearrange(&l2))
}

/// `[x1,x2,[x3,x4,x5]] - ([[x1,x2,x3],x4,x5] + [x3,[x1,x2,x4],x5] + [x3,x4,[x1,x2,x5]])`.
pub fn fundamental_defect(c: &Tensor) -> Tensor {
    let lhs = Tensor::nest(c, 2, &[0, 1], c, &[2, 3, 4]);
    let r1 = Tensor::nest(c, 0, &[3, 4], c, &[0, 1, 2]);
    let r2 = Tensor::nest(c, 1, &[2, 4], c, &[0, 1, 3]);
    let r3 = Tensor::nest(c, 2, &[2, 3], c, &[0, 1, 4]);
    lhs.sub(&r1).sub(&r2).sub(&r3)
}

pub fn check_lts(c: &Tensor) -> Result<Report> {
    check_bracket_shape(c)?;
    let mut r = Report::new();
    r.require_zero("A1", &alternation_defect(c));
    r.require_zero("A2", &cyclic_defect(c));
    r.require_zero("A3", &fundamental_defect(c));
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    b: Tensor,
}

impl LieAlgebra {
    pub fn new(b: Tensor) -> Result<Self> {
        let n = b.out_dim();
        if b.arity() != 2 || b.arg_dims().iter().any(|&d| d != n) {
            return Err(Error::Shape(format!(
                "Lie bracket must be n x n x n, got {:?}",
                b.dims()
            )));
        }
        let r = check_lie_algebra(&b);
        if !r.ok {
            return Err(Error::Invalid(format!(
                "not a Lie algebra: {}",
                r.violations[0].detail_line()
            )));
        }
        Ok(LieAlgebra { b })
    }

    /// Builds from entries `(i, j, m, v)` meaning `[e_i, e_j] += v e_m`,
    /// extended antisymmetrically.
    pub fn from_entries(n: usize, entries: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let mut b = Tensor::zeros(&[n, n, n]);
        for &(i, j, m, v) in entries {
            let v = crate::Rational::from_int(v);
            b.add_at(&[m, i, j], &v);
            b.add_at(&[m, j, i], &-&v);
        }
        Self::new(b)
    }

    pub fn dim(&self) -> usize {
        self.b.out_dim()
    }

    pub fn bracket(&self) -> &Tensor {
        &self.b
    }
}

fn check_lie_algebra(b: &Tensor) -> Report {
    let mut r = Report::new();
    r.require_zero("antisymmetry", &b.add(&b.rearrange(&[1, 0])));
    // [[x,y],z] + [[y,z],x] + [[z,x],y]
    let bb = b.compose_in(0, b);
    r.require_zero("Jacobi", &cyclic_defect(&bb));
    r
}

/// `[x, y, z] = [[x, y], z]`.
pub fn lts_from_lie_algebra(g: &LieAlgebra) -> Result<LieTripleSystem> {
    LieTripleSystem::new(g.b.compose_in(0, &g.b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    theta: Tensor,
}

impl Representation {
    /// Validates against `base`.
    pub fn new(base: &LieTripleSystem, theta: Tensor) -> Result<Self> {
        let r = check_representation(base, &theta)?;
        if !r.ok {
            return Err(Error::Invalid(format!(
                "not a representation: {}",
                r.violations[0].detail_line()
            )));
        }
        Ok(Representation { theta })
    }

    pub fn trivial(n: usize, m: usize) -> Self {
        Representation {
            theta: Tensor::zeros(&[m, m, n, n]),
        }
    }

    pub fn vdim(&self) -> usize {
        self.theta.out_dim()
    }

    pub fn base_dim(&self) -> usize {
        self.theta.arg_dims()[1]
    }

    pub fn theta(&self) -> &Tensor {
        &self.theta
    }

    pub fn d(&self) -> Tensor {
        d_from_theta(&self.theta)
    }
}

/// `D(x, y) = theta(y, x) - theta(x, y)`.
pub fn d_from_theta(theta: &Tensor) -> Tensor {
    theta.rearrange(&[0, 2, 1]).sub(theta)
}

/// `theta(x, y) z = [z, x, y]`.
pub fn adjoint_rep(l: &LieTripleSystem) -> Representation {
    Representation { theta: l.c.clone() }
}

fn check_theta_shape(n: usize, theta: &Tensor) -> Result<()> {
    let m = theta.out_dim();
    if theta.dims() != [m, m, n, n] {
        return Err(Error::Shape(format!(
            "theta must be m x m x {n} x {n}, got {:?}",
            theta.dims()
        )));
    }
    Ok(())
}

/// Both representation identities as tensors in `(v, x1, x2, x3, x4)`.
pub fn representation_defects(c: &Tensor, theta: &Tensor) -> (Tensor, Tensor) {
    let d = d_from_theta(theta);
    // theta(x3,x4) theta(x1,x2) - theta(x2,x4) theta(x1,x3)
    //   - theta(x1,[x2,x3,x4]) + D(x2,x3) theta(x1,x4)
    let e1 = Tensor::nest(theta, 0, &[3, 4], theta, &[0, 1, 2])
        .sub(&Tensor::nest(theta, 0, &[2, 4], theta, &[0, 1, 3]))
        .sub(&Tensor::nest(theta, 2, &[0, 1], c, &[2, 3, 4]))
        .add(&Tensor::nest(&d, 0, &[2, 3], theta, &[0, 1, 4]));
    // theta(x3,x4) D(x1,x2) - D(x1,x2) theta(x3,x4)
    //   + theta([x1,x2,x3],x4) + theta(x3,[x1,x2,x4])
    let e2 = Tensor::nest(theta, 0, &[3, 4], &d, &[0, 1, 2])
        .sub(&Tensor::nest(&d, 0, &[1, 2], theta, &[0, 3, 4]))
        .add(&Tensor::nest(theta, 1, &[0, 4], c, &[1, 2, 3]))
        .add(&Tensor::nest(theta, 2, &[0, 3], c, &[1, 2, 4]));
    (e1, e2)
}

/// Witness tuples are `(v, x1, x2, x3, x4)`.
pub fn check_representation(l: &LieTripleSystem, theta: &Tensor) -> Result<Report> {
    check_theta_shape(l.dim(), theta)?;
    let (e1, e2) = representation_defects(l.bracket(), theta);
    let mut r = Report::new();
    r.require_zero("rep-1", &e1);
    r.require_zero("rep-2", &e2);
    Ok(r)
}
