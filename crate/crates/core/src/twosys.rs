//! Lie triple 2-systems, their Nijenhuis operators, and crossed modules.
//!
//! The graded bracket `l3` is stored as four tensors, one per placement of
//! the (at most one) `T1` argument:
//! - `l3_000(x, y, z)` in `T0`;
//! - `slot0(a, x, y)`, `slot1(x, a, y)`, `slot2(x, y, a)` in `T1`.
//!
//! Brackets with two or more `T1` arguments are zero by construction.

use serde::Serialize;

use crate::cohomology::{
    delta_tensor, partial_tensor, phi_raw, validate_cochain, Cochain, Complex, NLieCochain,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lts::{
    check_lts, check_representation, d_from_theta, fundamental_defect, LieTripleSystem,
    Representation,
};
use crate::nrep::{check_nijenhuis_rep, nijenhuis_rep_defect, NijenhuisContext};
use crate::operators::{induced_tensor, is_nijenhuis, nijenhuis_defect, LinearOperator};
use crate::report::Report;
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSystem {
    pub h: Matrix,
    pub l3_000: Tensor,
    pub slot0: Tensor,
    pub slot1: Tensor,
    pub slot2: Tensor,
    pub l5: Tensor,
}

fn expect_dims(name: &str, t: &Tensor, dims: &[usize]) -> Result<()> {
    if t.dims() != dims {
        return Err(Error::Shape(format!(
            "{name} has dims {:?}, expected {dims:?}",
            t.dims()
        )));
    }
    Ok(())
}

fn expect_matrix(name: &str, m: &Matrix, rows: usize, cols: usize) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::Shape(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl TwoSystem {
    /// Checks shapes only.
    pub fn new(
        h: Matrix,
        l3_000: Tensor,
        slot0: Tensor,
        slot1: Tensor,
        slot2: Tensor,
        l5: Tensor,
    ) -> Result<Self> {
        let (d0, d1) = (h.rows(), h.cols());
        expect_dims("l3_000", &l3_000, &[d0, d0, d0, d0])?;
        expect_dims("l3_t1slot0", &slot0, &[d1, d1, d0, d0])?;
        expect_dims("l3_t1slot1", &slot1, &[d1, d0, d1, d0])?;
        expect_dims("l3_t1slot2", &slot2, &[d1, d0, d0, d1])?;
        expect_dims("l5", &l5, &[d1, d0, d0, d0, d0, d0])?;
        Ok(TwoSystem {
            h,
            l3_000,
            slot0,
            slot1,
            slot2,
            l5,
        })
    }

    pub fn zero(d0: usize, d1: usize) -> Self {
        TwoSystem {
            h: Matrix::zeros(d0, d1),
            l3_000: Tensor::zeros(&[d0, d0, d0, d0]),
            slot0: Tensor::zeros(&[d1, d1, d0, d0]),
            slot1: Tensor::zeros(&[d1, d0, d1, d0]),
            slot2: Tensor::zeros(&[d1, d0, d0, d1]),
            l5: Tensor::zeros(&[d1, d0, d0, d0, d0, d0]),
        }
    }

    /// The mixed components read off an action: `l3(u, x, y) = theta(x,y)u`,
    /// `l3(x, u, y) = -theta(x,y)u`, `l3(x, y, u) = D(x,y)u`.
    pub fn mixed_from_action(theta: &Tensor) -> (Tensor, Tensor, Tensor) {
        let slot0 = theta.clone();
        let slot1 = theta.rearrange(&[1, 0, 2]).neg();
        let slot2 = d_from_theta(theta).rearrange(&[2, 0, 1]);
        (slot0, slot1, slot2)
    }

    pub fn dim0(&self) -> usize {
        self.h.rows()
    }

    pub fn dim1(&self) -> usize {
        self.h.cols()
    }

    pub fn is_skeletal(&self) -> bool {
        self.h.is_zero()
    }

    pub fn is_strict(&self) -> bool {
        self.l5.is_zero()
    }

    /// The component of `l3` for arguments whose `T1` slot is `one`.
    fn l3(&self, one: Option<usize>) -> &Tensor {
        match one {
            None => &self.l3_000,
            Some(0) => &self.slot0,
            Some(1) => &self.slot1,
            Some(_) => &self.slot2,
        }
    }

    /// `-l3(s1,s2,l3(s3,s4,s5)) + l3(s3,l3(s1,s2,s4),s5)
    ///  + l3(l3(s1,s2,s3),s4,s5) + l3(s3,s4,l3(s1,s2,s5))`,
    /// with `s_{one}` in `T1` (0-based) or all in `T0`.
    fn fundamental_rhs(&self, one: Option<usize>) -> Tensor {
        // (outer position, outer labels, inner labels, sign)
        let terms: [(usize, [usize; 2], [usize; 3], i8); 4] = [
            (2, [0, 1], [2, 3, 4], -1),
            (1, [2, 4], [0, 1, 3], 1),
            (0, [3, 4], [0, 1, 2], 1),
            (2, [2, 3], [0, 1, 4], 1),
        ];
        let mut out: Option<Tensor> = None;
        for (pos, ol, il, s) in terms {
            let inner_one = one.and_then(|i| il.iter().position(|&l| l == i));
            let outer_one = match one {
                None => None,
                Some(_) if inner_one.is_some() => Some(pos),
                Some(i) => {
                    let k = ol.iter().position(|&l| l == i).expect("label present");
                    Some(if k < pos { k } else { k + 1 })
                }
            };
            let t = Tensor::nest(self.l3(outer_one), pos, &ol, self.l3(inner_one), &il);
            let t = if s < 0 { t.neg() } else { t };
            out = Some(match out {
                None => t,
                Some(o) => o.add(&t),
            });
        }
        out.expect("four terms")
    }

    /// The left side of the seven-argument identity relating `l5` and `l3`.
    pub fn l11_defect(&self) -> Tensor {
        let (a, d2, c, f) = (&self.slot0, &self.slot2, &self.l3_000, &self.l5);
        let plus = [
            Tensor::nest(a, 0, &[5, 6], f, &[0, 1, 2, 3, 4]),
            Tensor::nest(d2, 2, &[0, 1], f, &[2, 3, 4, 5, 6]),
            Tensor::nest(d2, 2, &[4, 5], f, &[0, 1, 2, 3, 6]),
            Tensor::nest(f, 2, &[0, 1, 5, 6], c, &[2, 3, 4]),
            Tensor::nest(f, 3, &[0, 1, 4, 6], c, &[2, 3, 5]),
            Tensor::nest(f, 4, &[0, 1, 4, 5], c, &[2, 3, 6]),
        ];
        let minus = [
            Tensor::nest(a, 0, &[4, 6], f, &[0, 1, 2, 3, 5]),
            Tensor::nest(d2, 2, &[2, 3], f, &[0, 1, 4, 5, 6]),
            Tensor::nest(f, 0, &[3, 4, 5, 6], c, &[0, 1, 2]),
            Tensor::nest(f, 1, &[2, 4, 5, 6], c, &[0, 1, 3]),
            Tensor::nest(f, 2, &[2, 3, 5, 6], c, &[0, 1, 4]),
            Tensor::nest(f, 3, &[2, 3, 4, 6], c, &[0, 1, 5]),
            Tensor::nest(f, 4, &[2, 3, 4, 5], c, &[0, 1, 6]),
            Tensor::nest(f, 4, &[0, 1, 2, 3], c, &[4, 5, 6]),
        ];
        let mut dims = vec![self.dim0(); 8];
        dims[0] = self.dim1();
        let mut out = Tensor::zeros(&dims);
        plus.iter().for_each(|t| out.add_assign(t));
        minus.iter().for_each(|t| out.sub_assign(t));
        out
    }
}

/// `(N0, N1, N2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NijenhuisTwo {
    pub n0: Matrix,
    pub n1: Matrix,
    pub n2: Tensor,
}

impl NijenhuisTwo {
    pub fn new(g: &TwoSystem, n0: Matrix, n1: Matrix, n2: Tensor) -> Result<Self> {
        let (d0, d1) = (g.dim0(), g.dim1());
        expect_matrix("N0", &n0, d0, d0)?;
        expect_matrix("N1", &n1, d1, d1)?;
        expect_dims("N2", &n2, &[d1, d0, d0, d0])?;
        Ok(NijenhuisTwo { n0, n1, n2 })
    }

    pub fn is_strict(&self) -> bool {
        self.n2.is_zero()
    }
}

/// `(0, 0, 0)` on `g`.
pub fn two_system_zero_op(g: &TwoSystem) -> NijenhuisTwo {
    let (d0, d1) = (g.dim0(), g.dim1());
    NijenhuisTwo {
        n0: Matrix::zeros(d0, d0),
        n1: Matrix::zeros(d1, d1),
        n2: Tensor::zeros(&[d1, d0, d0, d0]),
    }
}

/// Axioms L1 through L11; witnesses are basis tuples in argument order.
pub fn check_2system(g: &TwoSystem) -> Report {
    let h = &g.h;
    let mut r = Report::new();
    // L1
    r.require_zero("L1", &g.l3_000.add(&g.l3_000.rearrange(&[1, 0, 2])));
    r.require_zero("L1", &g.slot2.add(&g.slot2.rearrange(&[1, 0, 2])));
    r.require_zero("L1", &g.slot0.add(&g.slot1.rearrange(&[1, 0, 2])));
    // L2
    r.compare("L2", &g.slot0.apply_out(h), &g.l3_000.apply_in(0, h));
    // L3
    r.compare("L3", &g.slot1.apply_in(0, h), &g.slot0.apply_in(1, h));
    r.compare("L3", &g.slot2.apply_in(0, h), &g.slot0.apply_in(2, h));
    r.compare("L3", &g.slot2.apply_in(1, h), &g.slot1.apply_in(2, h));
    // L4
    r.require_zero("L4", &crate::lts::cyclic_defect(&g.l3_000));
    let mixed = g
        .slot2
        .add(&g.slot1.rearrange(&[1, 2, 0]))
        .add(&g.slot0.rearrange(&[2, 0, 1]));
    r.require_zero("L4", &mixed);
    // L5
    r.compare("L5", &g.l5.apply_out(h), &g.fundamental_rhs(None));
    // L6 to L10
    for i in 0..5 {
        let rule = format!("L{}", 6 + i);
        r.compare(&rule, &g.l5.apply_in(i, h), &g.fundamental_rhs(Some(i)));
    }
    r.require_zero("L11", &g.l11_defect());
    r
}

#[derive(Debug, Clone, Serialize)]
pub struct NijenhuisTwoReport {
    pub ok: bool,
    /// Conditions (a) to (f), with (e) read as the Nijenhuis representation
    /// identity for the action `l3(a, x, y)`.
    pub conditions: Report,
    pub skeletal: bool,
    pub strict: bool,
    /// Condition (e) read with the action `l3(x, y, a)` instead.
    pub e_alternative: Report,
    /// Whether both readings of (e) give the same verdict.
    pub e_readings_agree: bool,
    /// Condition (f) in its literal expanded form.
    pub f_literal: Report,
}

/// The action `theta(x, y) a = l3(a, x, y)` in theta layout.
fn action(g: &TwoSystem) -> &Tensor {
    &g.slot0
}

/// `N1(...) - l3(N1 a, N0 x, N0 y) - N2(x, y, h a)` as a tensor in
/// `(a, x, y)`, for an action tensor in theta layout.
fn condition_e(theta: &Tensor, g: &TwoSystem, op: &NijenhuisTwo) -> Tensor {
    let n2h = op.n2.apply_in(2, &g.h).rearrange(&[1, 2, 0]);
    nijenhuis_rep_defect(theta, &op.n0, &op.n1).neg().sub(&n2h)
}

/// `partial N2 - phi l5`, the second component of the degree-5 differential
/// for the action `l3(a, x, y)`.
pub fn condition_f_defect(g: &TwoSystem, op: &NijenhuisTwo) -> Tensor {
    let dn2 = partial_tensor(&op.n2, &g.l3_000, &op.n0, action(g), &op.n1);
    dn2.sub(&phi_raw(&g.l5, &op.n0, &op.n1))
}

/// Condition (f) in its literal expanded form, left minus right, with the deformed
/// bracket `[.,.,.]_{N0}` abbreviating the long inner expressions.
pub fn condition_f_literal_defect(g: &TwoSystem, op: &NijenhuisTwo) -> Tensor {
    let (n0, n1, n2) = (&op.n0, &op.n1, &op.n2);
    let mu = induced_tensor(&g.l3_000, n0);
    let with = |t: Tensor, slots: &[usize]| slots.iter().fold(t, |t, &s| t.apply_in(s, n0));
    let lhs = [
        g.l5.apply_in_all(n0),
        with(Tensor::nest(&g.slot0, 0, &[3, 4], n2, &[0, 1, 2]), &[3, 4]),
        with(Tensor::nest(&g.slot1, 1, &[2, 4], n2, &[0, 1, 3]), &[2, 4]),
        with(Tensor::nest(&g.slot2, 2, &[2, 3], n2, &[0, 1, 4]), &[2, 3]),
        Tensor::nest(n2, 0, &[3, 4], &mu, &[0, 1, 2]),
        Tensor::nest(n2, 1, &[2, 4], &mu, &[0, 1, 3]),
        Tensor::nest(n2, 2, &[2, 3], &mu, &[0, 1, 4]),
    ];
    let rhs = [
        with(Tensor::nest(&g.slot2, 2, &[0, 1], n2, &[2, 3, 4]), &[0, 1]),
        Tensor::nest(n2, 2, &[0, 1], &mu, &[2, 3, 4]),
        g.l5.apply_out(n1),
    ];
    let mut out = g.l5.scale(&crate::Rational::ZERO);
    lhs.iter().for_each(|t| out.add_assign(t));
    rhs.iter().for_each(|t| out.sub_assign(t));
    out
}

pub fn check_nijenhuis_2system(g: &TwoSystem, op: &NijenhuisTwo) -> Result<NijenhuisTwoReport> {
    let base = check_2system(g);
    if !base.ok {
        return Err(Error::Precondition(format!(
            "not a Lie triple 2-system: {}",
            base.violations[0].detail_line()
        )));
    }
    NijenhuisTwo::new(g, op.n0.clone(), op.n1.clone(), op.n2.clone())?;
    let h = &g.h;
    let mut r = Report::new();
    let lhs = Tensor::from_matrix(&op.n0.mul(h)?);
    let rhs = Tensor::from_matrix(&h.mul(&op.n1)?);
    r.compare("(a)", &lhs, &rhs);
    let shape = validate_cochain(&op.n2, 3)?;
    for v in shape.violations.iter() {
        let rule = if v.rule == "alternation" {
            "(b)"
        } else {
            "(c)"
        };
        r.push(rule, v.witness.clone(), v.detail.clone());
    }
    r.violation_count += shape.violation_count.saturating_sub(shape.violations.len());
    // N0 [x,y,z]_{N0} - [N0x, N0y, N0z] = h N2
    r.compare(
        "(d)",
        &nijenhuis_defect(&g.l3_000, &op.n0).neg(),
        &op.n2.apply_out(h),
    );
    let e_primary = condition_e(action(g), g, op);
    r.require_zero("(e)", &e_primary);
    r.require_zero("(f)", &condition_f_defect(g, op));

    let d_action = g.slot2.rearrange(&[1, 2, 0]);
    let mut e_alternative = Report::new();
    e_alternative.require_zero("(e)", &condition_e(&d_action, g, op));
    let e_readings_agree = e_alternative.ok == e_primary.is_zero();
    if !e_readings_agree {
        r.note("condition (e): the two readings disagree on this instance");
    }
    let mut f_literal = Report::new();
    f_literal.require_zero("(f)", &condition_f_literal_defect(g, op));
    Ok(NijenhuisTwoReport {
        ok: r.ok,
        conditions: r,
        skeletal: g.is_skeletal(),
        strict: g.is_strict() && op.is_strict(),
        e_alternative,
        e_readings_agree,
        f_literal,
    })
}

/// A skeletal structure as the context `(T0, l3_000, N0; T1, l3(a,.,.), N1)`
/// and the pair `(l5, N2)`.
#[derive(Debug, Clone)]
pub struct SkeletalCocycle {
    pub context: NijenhuisContext,
    pub cochain: NLieCochain,
}

pub fn skeletal_to_cocycle(g: &TwoSystem, op: &NijenhuisTwo) -> Result<SkeletalCocycle> {
    if !g.is_skeletal() {
        return Err(Error::Precondition(
            "h is nonzero; the structure is not skeletal".into(),
        ));
    }
    let r = check_nijenhuis_2system(g, op)?;
    if !r.ok {
        return Err(Error::Precondition(format!(
            "not a Nijenhuis 2-system: {}",
            r.conditions.violations[0].detail_line()
        )));
    }
    let lts = LieTripleSystem::new(g.l3_000.clone())?;
    let rep = Representation::new(&lts, action(g).clone())?;
    let context = NijenhuisContext::new(lts, op.n0.clone(), rep, op.n1.clone())?;
    let f = Cochain::new(g.l5.clone())
        .map_err(|e| Error::Precondition(format!("l5 is not a degree-5 cochain: {e}")))?;
    let cochain = NLieCochain::new(f, Some(Cochain::new(op.n2.clone())?))?;
    Ok(SkeletalCocycle { context, cochain })
}

pub fn cocycle_to_skeletal(
    ctx: &NijenhuisContext,
    fg: &NLieCochain,
) -> Result<(TwoSystem, NijenhuisTwo)> {
    if fg.degree() != 5 {
        return Err(Error::Shape(format!(
            "degree {} given; skeletal data is a degree-5 pair",
            fg.degree()
        )));
    }
    let r = Complex::new(ctx).is_cocycle(fg)?;
    if !r.ok {
        return Err(Error::Precondition(format!(
            "not a cocycle: {}",
            r.violations[0].detail_line()
        )));
    }
    let (d0, d1) = (ctx.dim(), ctx.vdim());
    let (slot0, slot1, slot2) = TwoSystem::mixed_from_action(ctx.rep().theta());
    let g = TwoSystem::new(
        Matrix::zeros(d0, d1),
        ctx.lts().bracket().clone(),
        slot0,
        slot1,
        slot2,
        fg.f.tensor().clone(),
    )?;
    let n2 = fg.g.as_ref().expect("degree-5 pair").tensor().clone();
    let op = NijenhuisTwo::new(&g, ctx.n().clone(), ctx.nv().clone(), n2)?;
    Ok((g, op))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    pub base: Tensor,
    pub top: Tensor,
    pub h: Matrix,
    /// `lambda[c][a][x][y]`: coefficient of `e_c` in `Lambda(e_x, e_y) e_a`.
    pub lambda: Tensor,
    pub n0: Matrix,
    pub n1: Matrix,
}

impl CrossedModule {
    pub fn new(
        base: Tensor,
        top: Tensor,
        h: Matrix,
        lambda: Tensor,
        n0: Matrix,
        n1: Matrix,
    ) -> Result<Self> {
        let (d0, d1) = (h.rows(), h.cols());
        expect_dims("base bracket", &base, &[d0, d0, d0, d0])?;
        expect_dims("top bracket", &top, &[d1, d1, d1, d1])?;
        expect_dims("Lambda", &lambda, &[d1, d1, d0, d0])?;
        expect_matrix("N0", &n0, d0, d0)?;
        expect_matrix("N1", &n1, d1, d1)?;
        Ok(CrossedModule {
            base,
            top,
            h,
            lambda,
            n0,
            n1,
        })
    }

    pub fn dim0(&self) -> usize {
        self.h.rows()
    }

    pub fn dim1(&self) -> usize {
        self.h.cols()
    }
}

pub fn check_crossed_module(x: &CrossedModule) -> Result<Report> {
    let mut r = Report::new();
    let base_ok = {
        let b = check_lts(&x.base)?;
        let ok = b.ok;
        r.merge_prefixed("base ", b);
        ok
    };
    r.merge_prefixed("top ", check_lts(&x.top)?);
    r.compare(
        "h homomorphism",
        &x.top.apply_out(&x.h),
        &x.base.apply_in_all(&x.h),
    );
    let lhs = Tensor::from_matrix(&x.n0.mul(&x.h)?);
    let rhs = Tensor::from_matrix(&x.h.mul(&x.n1)?);
    r.compare("N0∘h = h∘N1", &lhs, &rhs);
    r.compare(
        "h(Λ(x,y)a) = [h(a),x,y]",
        &x.lambda.apply_out(&x.h),
        &x.base.apply_in(0, &x.h),
    );
    let hh = x.lambda.apply_in(1, &x.h).apply_in(2, &x.h);
    r.compare("Λ(h(a),h(b))c = [c,a,b]", &hh, &x.top);
    if base_ok {
        let lts = LieTripleSystem::new(x.base.clone())?;
        r.merge_prefixed(
            "base ",
            is_nijenhuis(&lts, &LinearOperator::new(x.n0.clone()))?,
        );
        r.merge(check_representation(&lts, &x.lambda)?);
        r.merge(check_nijenhuis_rep(&lts, &x.n0, &x.lambda, &x.n1)?);
    } else {
        r.note("representation conditions skipped: base is not a Lie triple system");
    }
    Ok(r)
}

/// `[a,b,c] = l3(h a, h b, c)` and `Lambda(x, y) c = l3(c, x, y)`.
pub fn strict_to_crossed_module(g: &TwoSystem, op: &NijenhuisTwo) -> Result<CrossedModule> {
    if !(g.is_strict() && op.is_strict()) {
        return Err(Error::Precondition(
            "l5 and N2 must vanish for a strict structure".into(),
        ));
    }
    let r = check_nijenhuis_2system(g, op)?;
    if !r.ok {
        return Err(Error::Precondition(format!(
            "not a Nijenhuis 2-system: {}",
            r.conditions.violations[0].detail_line()
        )));
    }
    let top = g.slot2.apply_in(0, &g.h).apply_in(1, &g.h);
    let x = CrossedModule::new(
        g.l3_000.clone(),
        top,
        g.h.clone(),
        g.slot0.clone(),
        op.n0.clone(),
        op.n1.clone(),
    )?;
    let xr = check_crossed_module(&x)?;
    if !xr.ok {
        return Err(Error::Invalid(format!(
            "constructed crossed module fails: {}",
            xr.violations[0].detail_line()
        )));
    }
    Ok(x)
}

/// Mixed components from `Lambda`, `l5 = 0`, `N2 = 0`.
pub fn crossed_module_to_strict(x: &CrossedModule) -> Result<(TwoSystem, NijenhuisTwo)> {
    let xr = check_crossed_module(x)?;
    if !xr.ok {
        return Err(Error::Precondition(format!(
            "not a crossed module: {}",
            xr.violations[0].detail_line()
        )));
    }
    let (d0, d1) = (x.dim0(), x.dim1());
    let (slot0, slot1, slot2) = TwoSystem::mixed_from_action(&x.lambda);
    let g = TwoSystem::new(
        x.h.clone(),
        x.base.clone(),
        slot0,
        slot1,
        slot2,
        Tensor::zeros(&[d1, d0, d0, d0, d0, d0]),
    )?;
    let op = NijenhuisTwo::new(
        &g,
        x.n0.clone(),
        x.n1.clone(),
        Tensor::zeros(&[d1, d0, d0, d0]),
    )?;
    let gr = check_2system(&g);
    if !gr.ok {
        return Err(Error::Invalid(format!(
            "the strict structure built from this crossed module fails {}",
            gr.violations[0].detail_line()
        )));
    }
    let nr = check_nijenhuis_2system(&g, &op)?;
    if !nr.ok {
        return Err(Error::Invalid(format!(
            "the strict structure built from this crossed module fails {}",
            nr.conditions.violations[0].detail_line()
        )));
    }
    Ok((g, op))
}

/// `delta l5` for the action `l3(a, x, y)`; equals the seven-argument
/// identity's defect when the mixed components come from one action.
pub fn l5_coboundary(g: &TwoSystem) -> Tensor {
    delta_tensor(&g.l5, &g.l3_000, action(g))
}

/// The defect of the five-argument identity of `l3_000` alone.
pub fn l3_fundamental_defect(g: &TwoSystem) -> Tensor {
    fundamental_defect(&g.l3_000)
}
