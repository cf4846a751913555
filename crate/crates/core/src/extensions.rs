//! Abelian extensions of a Nijenhuis Lie triple system by a module with
//! zero bracket, in split coordinates `T + V`.
//!
//! Coordinates `0..n` are `T` and `n..n+m` are `V`. A section is an
//! `(n+m) x n` matrix whose top `n x n` block is the identity.

use crate::cohomology::{Coboundary, Cochain, Complex, NLieCochain};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lts::{check_lts, LieTripleSystem, Representation};
use crate::nrep::NijenhuisContext;
use crate::operators::{bracket_parts, induced_tensor, nijenhuis_defect};
use crate::rational::Rational;
use crate::report::Report;
use crate::tensor::Tensor;

/// A pair `(psi, chi)` of degrees 3 and 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionCocycle {
    pub psi: Cochain,
    pub chi: Cochain,
}

impl ExtensionCocycle {
    pub fn new(psi: Cochain, chi: Cochain) -> Result<Self> {
        NLieCochain::new(psi.clone(), Some(chi.clone()))?;
        Ok(ExtensionCocycle { psi, chi })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        ExtensionCocycle {
            psi: Cochain::zero(3, n, m),
            chi: Cochain::zero(1, n, m),
        }
    }

    pub fn to_pair(&self) -> NLieCochain {
        NLieCochain {
            f: self.psi.clone(),
            g: Some(self.chi.clone()),
        }
    }

    pub fn from_pair(p: NLieCochain) -> Result<Self> {
        match p.g {
            Some(chi) if p.f.degree() == 3 => Ok(ExtensionCocycle { psi: p.f, chi }),
            _ => Err(Error::Shape(
                "extension data is a pair of degrees (3, 1)".into(),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AbelianExtension {
    ctx: NijenhuisContext,
    total: Tensor,
    operator: Matrix,
}

#[derive(Debug, Clone)]
pub struct ExtensionCheck {
    pub lts: Report,
    pub nijenhuis: Report,
}

impl ExtensionCheck {
    pub fn ok(&self) -> bool {
        self.lts.ok && self.nijenhuis.ok
    }
}

fn embed_rows(n: usize, m: usize) -> (Matrix, Matrix) {
    let mut i_t = Matrix::zeros(n + m, n);
    for k in 0..n {
        i_t.set(k, k, Rational::ONE);
    }
    let mut i_v = Matrix::zeros(n + m, m);
    for k in 0..m {
        i_v.set(n + k, k, Rational::ONE);
    }
    (i_t, i_v)
}

fn projections(n: usize, m: usize) -> (Matrix, Matrix) {
    let (i_t, i_v) = embed_rows(n, m);
    (i_t.transpose(), i_v.transpose())
}

/// The bracket on `T + V` and the operator `N_chi`.
fn assemble(ctx: &NijenhuisContext, psi: &Tensor, chi: &Matrix) -> (Tensor, Matrix) {
    let (n, m) = (ctx.dim(), ctx.vdim());
    let (i_t, i_v) = embed_rows(n, m);
    let (p_t, p_v) = projections(n, m);
    let theta = ctx.rep().theta();
    let d = ctx.rep().d();
    let c = ctx.lts().bracket();
    // Each piece is written in T/V coordinates, then pushed forward and
    // pulled back along the coordinate maps.
    let lift = |t: &Tensor, out: &Matrix, ins: [&Matrix; 3]| {
        let mut t = t.apply_out(out);
        for (s, p) in ins.iter().enumerate() {
            t = t.apply_in(s, p);
        }
        t
    };
    let mut total = lift(c, &i_t, [&p_t, &p_t, &p_t]);
    total.add_assign(&lift(psi, &i_v, [&p_t, &p_t, &p_t]));
    // [u, y, z] = theta(y, z) u
    total.add_assign(&lift(theta, &i_v, [&p_v, &p_t, &p_t]));
    // [x, v, z] = -theta(x, z) v
    let t_mid = theta.rearrange(&[1, 0, 2]).neg();
    total.add_assign(&lift(&t_mid, &i_v, [&p_t, &p_v, &p_t]));
    // [x, y, w] = D(x, y) w
    let d_last = d.rearrange(&[2, 0, 1]);
    total.add_assign(&lift(&d_last, &i_v, [&p_t, &p_t, &p_v]));
    let zero = Matrix::zeros(n, m);
    let op = Matrix::block(ctx.n(), &zero, chi, ctx.nv()).expect("block shapes");
    (total, op)
}

impl AbelianExtension {
    pub fn context(&self) -> &NijenhuisContext {
        &self.ctx
    }

    pub fn total(&self) -> &Tensor {
        &self.total
    }

    pub fn operator(&self) -> &Matrix {
        &self.operator
    }

    pub fn base_dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn vdim(&self) -> usize {
        self.ctx.vdim()
    }

    /// `s(x) = (x, 0)`.
    pub fn canonical_section(&self) -> Matrix {
        embed_rows(self.base_dim(), self.vdim()).0
    }

    /// `s(x) = (x, gamma x)` for `gamma: T -> V` given as `m x n`.
    pub fn shifted_section(&self, gamma: &Matrix) -> Result<Matrix> {
        let (n, m) = (self.base_dim(), self.vdim());
        if gamma.rows() != m || gamma.cols() != n {
            return Err(Error::Shape(format!("gamma must be {m}x{n}")));
        }
        Matrix::block(
            &Matrix::identity(n),
            &Matrix::zeros(n, 0),
            gamma,
            &Matrix::zeros(m, 0),
        )
    }

    /// Axioms of the total system and the Nijenhuis identity for `N_chi`.
    pub fn check(&self) -> Result<ExtensionCheck> {
        let lts = check_lts(&self.total)?;
        let mut nijenhuis = Report::new();
        nijenhuis.require_zero("Nijenhuis", &nijenhuis_defect(&self.total, &self.operator));
        Ok(ExtensionCheck { lts, nijenhuis })
    }

    pub fn as_lts(&self) -> Result<LieTripleSystem> {
        LieTripleSystem::new(self.total.clone())
    }

    fn check_section(&self, s: &Matrix) -> Result<()> {
        let (n, m) = (self.base_dim(), self.vdim());
        if s.rows() != n + m || s.cols() != n {
            return Err(Error::Shape(format!(
                "section must be {}x{n}, got {}x{}",
                n + m,
                s.rows(),
                s.cols()
            )));
        }
        let (p_t, _) = projections(n, m);
        if p_t.mul(s)? != Matrix::identity(n) {
            return Err(Error::Precondition("p o s is not the identity".into()));
        }
        Ok(())
    }
}

/// Builds the bracket and operator on `T + V`; validity is not required.
pub fn build_extension(
    ctx: &NijenhuisContext,
    data: &ExtensionCocycle,
) -> Result<AbelianExtension> {
    let (n, m) = (ctx.dim(), ctx.vdim());
    for (c, deg) in [(&data.psi, 3), (&data.chi, 1)] {
        if c.degree() != deg || c.base_dim() != n || c.vdim() != m {
            return Err(Error::Shape(format!(
                "degree-{deg} component has dims {:?}, expected output {m} and arguments {n}",
                c.tensor().dims()
            )));
        }
    }
    let chi = data.chi.tensor().to_matrix()?;
    let (total, operator) = assemble(ctx, data.psi.tensor(), &chi);
    Ok(AbelianExtension {
        ctx: ctx.clone(),
        total,
        operator,
    })
}

/// `psi(x,y,z) = [sx,sy,sz] - s[x,y,z]` and `chi(x) = N^ s x - s N x`,
/// read in `V` coordinates.
pub fn extract_cocycle(ext: &AbelianExtension, s: &Matrix) -> Result<ExtensionCocycle> {
    ext.check_section(s)?;
    let (n, m) = (ext.base_dim(), ext.vdim());
    let (p_t, p_v) = projections(n, m);
    let raw = ext.total.apply_in_all(s);
    let lower = ext.ctx.lts().bracket().apply_out(s);
    let psi = raw.sub(&lower);
    let chi = ext.operator.mul(s)?.sub(&s.mul(ext.ctx.n())?)?;
    if !psi.apply_out(&p_t).is_zero() || !p_t.mul(&chi)?.is_zero() {
        return Err(Error::Invalid("extension data leaves the fiber".into()));
    }
    Ok(ExtensionCocycle {
        psi: Cochain::new(psi.apply_out(&p_v))?,
        chi: Cochain::new(Tensor::from_matrix(&p_v.mul(&chi)?))?,
    })
}

/// `theta~(x, y) u = [u, sx, sy]` with the fiber operator.
pub fn induced_representation(
    ext: &AbelianExtension,
    s: &Matrix,
) -> Result<(Representation, Matrix)> {
    ext.check_section(s)?;
    let (n, m) = (ext.base_dim(), ext.vdim());
    let (_, i_v) = embed_rows(n, m);
    let (_, p_v) = projections(n, m);
    let theta = ext
        .total
        .apply_in(0, &i_v)
        .apply_in(1, s)
        .apply_in(2, s)
        .apply_out(&p_v);
    let nv = p_v.mul(&ext.operator)?.mul(&i_v)?;
    let rep = Representation::new(ext.ctx.lts(), theta)
        .map_err(|e| Error::Precondition(format!("induced action: {e}")))?;
    let nr = crate::nrep::check_nijenhuis_rep(ext.ctx.lts(), ext.ctx.n(), rep.theta(), &nv)?;
    if !nr.ok {
        return Err(Error::Precondition(format!(
            "induced action is not a Nijenhuis representation: {}",
            nr.violations[0].detail_line()
        )));
    }
    Ok((rep, nv))
}

/// Outcome of an equivalence test.
#[derive(Debug, Clone)]
pub struct Equivalence {
    /// `gamma: T -> V` with `d gamma = c1 - c2`, as an `m x n` matrix.
    pub gamma: Option<Matrix>,
    /// Whether `eta(x, u) = (x, gamma x + u)` was confirmed to intertwine
    /// both brackets and operators.
    pub eta_verified: bool,
}

/// `eta` as an `(n+m) x (n+m)` matrix.
pub fn eta_matrix(gamma: &Matrix) -> Matrix {
    let (m, n) = (gamma.rows(), gamma.cols());
    Matrix::block(
        &Matrix::identity(n),
        &Matrix::zeros(n, m),
        gamma,
        &Matrix::identity(m),
    )
    .expect("block shapes")
}

/// Checks `eta [a,b,c]_1 = [eta a, eta b, eta c]_2` and `eta N_1 = N_2 eta`.
pub fn verify_morphism(
    e1: &AbelianExtension,
    e2: &AbelianExtension,
    eta: &Matrix,
) -> Result<Report> {
    let mut r = Report::new();
    r.compare(
        "bracket",
        &e1.total.apply_out(eta),
        &e2.total.apply_in_all(eta),
    );
    let lhs = Tensor::from_matrix(&eta.mul(&e1.operator)?);
    let rhs = Tensor::from_matrix(&e2.operator.mul(eta)?);
    r.compare("operator", &lhs, &rhs);
    Ok(r)
}

pub fn extensions_equivalent(
    ctx: &NijenhuisContext,
    c1: &ExtensionCocycle,
    c2: &ExtensionCocycle,
) -> Result<Equivalence> {
    let cx = Complex::new(ctx);
    for (name, c) in [("first", c1), ("second", c2)] {
        let r = cx.is_cocycle(&c.to_pair())?;
        if !r.ok {
            return Err(Error::Precondition(format!(
                "{name} pair is not a cocycle: {}",
                r.violations[0].detail_line()
            )));
        }
    }
    let diff = c1.to_pair().sub(&c2.to_pair());
    let gamma = match cx.coboundary_preimage(&diff)? {
        Some(Coboundary::Of(pre)) => pre.f.tensor().to_matrix()?,
        Some(Coboundary::Zero) | None => {
            return Ok(Equivalence {
                gamma: None,
                eta_verified: false,
            })
        }
    };
    let e1 = build_extension(ctx, c1)?;
    let e2 = build_extension(ctx, c2)?;
    let eta_verified = verify_morphism(&e1, &e2, &eta_matrix(&gamma))?.ok;
    Ok(Equivalence {
        gamma: Some(gamma),
        eta_verified,
    })
}

/// The `V`-component of the Nijenhuis defect of `N_chi` on three base
/// arguments.
pub fn operator_condition_defect(
    ctx: &NijenhuisContext,
    data: &ExtensionCocycle,
) -> Result<Tensor> {
    let ext = build_extension(ctx, data)?;
    let (n, m) = (ctx.dim(), ctx.vdim());
    let (i_t, _) = embed_rows(n, m);
    let (_, p_v) = projections(n, m);
    Ok(nijenhuis_defect(&ext.total, &ext.operator)
        .apply_in_all(&i_t)
        .apply_out(&p_v))
}

/// The commonly quoted expanded form of the operator condition on
/// `(psi, chi)`, left side minus right side in `(x, y, z)`. Its last term
/// applies `chi` to `[x,y,z]_N`. It differs from the true condition by
/// `-literal_condition_gap`.
pub fn literal_condition_defect(ctx: &NijenhuisContext, data: &ExtensionCocycle) -> Result<Tensor> {
    build_extension(ctx, data)?;
    let n = ctx.n();
    let nv = ctx.nv();
    let theta = ctx.rep().theta();
    let d = ctx.rep().d();
    let psi = data.psi.tensor();
    let chi_t = data.chi.tensor();
    let chi = chi_t.to_matrix()?;
    let tx = Tensor::nest(theta, 0, &[1, 2], chi_t, &[0]);
    let ty = Tensor::nest(theta, 0, &[0, 2], chi_t, &[1]);
    let tz = Tensor::nest(&d, 0, &[0, 1], chi_t, &[2]);
    let with = |t: &Tensor, slots: &[usize]| slots.iter().fold(t.clone(), |t, &s| t.apply_in(s, n));
    let lhs = psi
        .apply_in_all(n)
        .add(&with(&tx, &[1, 2]))
        .sub(&with(&ty, &[0, 2]))
        .add(&with(&tz, &[0, 1]));
    let pp = bracket_parts(psi, n);
    let nv2 = nv.mul(nv)?;
    let psi_part =
        pp.a.sub(&pp.b.apply_out(nv))
            .add(&pp.c.apply_out(&nv2))
            .apply_out(nv);
    let once = with(&tx, &[1])
        .sub(&with(&ty, &[0]))
        .add(&with(&tz, &[0]))
        .add(&with(&tx, &[2]))
        .sub(&with(&ty, &[2]))
        .add(&with(&tz, &[1]));
    let plain = tx.sub(&ty).add(&tz);
    let chi_part = once.sub(&plain.apply_out(nv)).apply_out(nv);
    let last = induced_tensor(ctx.lts().bracket(), n).apply_out(&chi);
    Ok(lhs.sub(&psi_part.add(&chi_part).add(&last)))
}

/// `Nv(chi(B) - chi(N C) - Nv chi(C))` with `B`, `C` the bracket parts.
pub fn literal_condition_gap(ctx: &NijenhuisContext, chi: &Cochain) -> Result<Tensor> {
    let chi = chi.tensor().to_matrix()?;
    let c = ctx.lts().bracket();
    let parts = bracket_parts(c, ctx.n());
    let t = parts
        .b
        .apply_out(&chi)
        .sub(&c.apply_out(ctx.n()).apply_out(&chi))
        .sub(&c.apply_out(&chi).apply_out(ctx.nv()));
    Ok(t.apply_out(ctx.nv()))
}
