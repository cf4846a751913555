//! Representations of Nijenhuis Lie triple systems.
//!
//! With `theta` as a tensor in `(v, x, y)`, composition on the right by
//! `Nv` is precomposition in slot 0 and composition on the left is
//! postcomposition of the output.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lts::{check_representation, LieTripleSystem, Representation};
use crate::operators::{induced_tensor, is_nijenhuis, LinearOperator};
use crate::report::Report;
use crate::tensor::Tensor;

fn check_dims(l: &LieTripleSystem, n: &Matrix, theta: &Tensor, nv: &Matrix) -> Result<()> {
    let m = theta.out_dim();
    if n.rows() != l.dim() || !n.is_square() {
        return Err(Error::Shape("operator does not match the system".into()));
    }
    if theta.dims() != [m, m, l.dim(), l.dim()] {
        return Err(Error::Shape(format!("theta has dims {:?}", theta.dims())));
    }
    if nv.rows() != m || nv.cols() != m {
        return Err(Error::Shape(format!(
            "Nv is {}x{}, representation space has dimension {m}",
            nv.rows(),
            nv.cols()
        )));
    }
    Ok(())
}

/// `theta(Nx,Ny) Nv - Nv( theta(Nx,Ny) + theta(Nx,y) Nv + theta(x,Ny) Nv
///  - Nv theta(Nx,y) - Nv theta(x,Ny) - Nv theta(x,y) Nv + Nv^2 theta(x,y) )`.
pub fn nijenhuis_rep_defect(theta: &Tensor, n: &Matrix, nv: &Matrix) -> Tensor {
    let t_nn = theta.apply_in(1, n).apply_in(2, n);
    let t_nx = theta.apply_in(1, n);
    let t_ny = theta.apply_in(2, n);
    let lhs = t_nn.apply_in(0, nv);
    let inner = t_nn
        .add(&t_nx.apply_in(0, nv))
        .add(&t_ny.apply_in(0, nv))
        .sub(&t_nx.apply_out(nv))
        .sub(&t_ny.apply_out(nv))
        .sub(&theta.apply_in(0, nv).apply_out(nv))
        .add(&theta.apply_out(nv).apply_out(nv));
    lhs.sub(&inner.apply_out(nv))
}

/// Witness tuples are `(v, x, y)`.
pub fn check_nijenhuis_rep(
    l: &LieTripleSystem,
    n: &Matrix,
    theta: &Tensor,
    nv: &Matrix,
) -> Result<Report> {
    check_dims(l, n, theta, nv)?;
    let mut r = Report::new();
    r.require_zero("Nijenhuis-rep", &nijenhuis_rep_defect(theta, n, nv));
    Ok(r)
}

/// `theta(Nx,Ny) - Nv(theta(Nx,y) + theta(x,Ny) - Nv theta(x,y))`.
///
/// This is the action the Nijenhuis-operator differential is built from.
/// It is generally not a representation of the deformed system; see
/// [`induce_rep`] for the one that is.
pub fn twisted_theta(theta: &Tensor, n: &Matrix, nv: &Matrix) -> Tensor {
    let t_nn = theta.apply_in(1, n).apply_in(2, n);
    let mixed = theta.apply_in(1, n).add(&theta.apply_in(2, n));
    t_nn.sub(&mixed.sub(&theta.apply_out(nv)).apply_out(nv))
}

/// `theta(Nx,Ny) + theta(Nx,y)Nv + theta(x,Ny)Nv
///  - Nv(theta(Nx,y) + theta(x,Ny) + theta(x,y)Nv - Nv theta(x,y))`:
/// the action of `T` on `V` read off the deformed bracket of `T + V`
/// under `N + Nv`. Applied to `D` in place of `theta` it yields `D_N`.
pub fn deformed_theta(theta: &Tensor, n: &Matrix, nv: &Matrix) -> Tensor {
    let t_nn = theta.apply_in(1, n).apply_in(2, n);
    let mixed = theta.apply_in(1, n).add(&theta.apply_in(2, n));
    let right = mixed.apply_in(0, nv);
    let inner = mixed.add(&theta.apply_in(0, nv)).sub(&theta.apply_out(nv));
    t_nn.add(&right).sub(&inner.apply_out(nv))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedRep {
    pub theta: Tensor,
    pub d: Tensor,
}

/// `(theta_N, D_N)` for the deformed system `(T, [.,.,.]_N)`.
pub fn induce_rep(
    l: &LieTripleSystem,
    n: &Matrix,
    rep: &Representation,
    nv: &Matrix,
) -> Result<InducedRep> {
    let r = check_nijenhuis_rep(l, n, rep.theta(), nv)?;
    if !r.ok {
        return Err(Error::Precondition(format!(
            "not a Nijenhuis representation: {}",
            r.violations[0].detail_line()
        )));
    }
    Ok(InducedRep {
        theta: deformed_theta(rep.theta(), n, nv),
        d: deformed_theta(&rep.d(), n, nv),
    })
}

/// A Nijenhuis system with a Nijenhuis representation, validated once.
#[derive(Debug, Clone)]
pub struct NijenhuisContext {
    lts: LieTripleSystem,
    n: Matrix,
    rep: Representation,
    nv: Matrix,
}

impl NijenhuisContext {
    pub fn new(lts: LieTripleSystem, n: Matrix, rep: Representation, nv: Matrix) -> Result<Self> {
        check_dims(&lts, &n, rep.theta(), &nv)?;
        let nij = is_nijenhuis(&lts, &LinearOperator::new(n.clone()))?;
        if !nij.ok {
            return Err(Error::Precondition(format!(
                "operator is not Nijenhuis: {}",
                nij.violations[0].detail_line()
            )));
        }
        let rr = check_representation(&lts, rep.theta())?;
        if !rr.ok {
            return Err(Error::Precondition(format!(
                "not a representation: {}",
                rr.violations[0].detail_line()
            )));
        }
        let nr = check_nijenhuis_rep(&lts, &n, rep.theta(), &nv)?;
        if !nr.ok {
            return Err(Error::Precondition(format!(
                "not a Nijenhuis representation: {}",
                nr.violations[0].detail_line()
            )));
        }
        Ok(NijenhuisContext { lts, n, rep, nv })
    }

    pub fn lts(&self) -> &LieTripleSystem {
        &self.lts
    }

    pub fn n(&self) -> &Matrix {
        &self.n
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn nv(&self) -> &Matrix {
        &self.nv
    }

    pub fn dim(&self) -> usize {
        self.lts.dim()
    }

    pub fn vdim(&self) -> usize {
        self.rep.vdim()
    }

    pub fn induced_bracket(&self) -> Tensor {
        induced_tensor(self.lts.bracket(), &self.n)
    }
}
