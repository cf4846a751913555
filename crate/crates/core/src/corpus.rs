//! Built-in systems, contexts, and fixtures.

use serde_json::Value;

use crate::cohomology::{Complex, NLieCochain};
use crate::error::Result;
use crate::extensions::{build_extension, ExtensionCocycle};
use crate::io;
use crate::linalg::Matrix;
use crate::lts::{adjoint_rep, lts_from_lie_algebra, LieAlgebra, LieTripleSystem, Representation};
use crate::nrep::NijenhuisContext;
use crate::operators::LinearOperator;
use crate::rational::Rational;
use crate::tensor::Tensor;
use crate::twosys::{
    cocycle_to_skeletal, crossed_module_to_strict, two_system_zero_op, CrossedModule,
};

/// `[e1, e2, e2] = e1`, with `[e2, e1, e2] = -e1` forced by alternation.
pub fn l2() -> LieTripleSystem {
    let mut c = Tensor::zeros(&[2, 2, 2, 2]);
    c.set(&[0, 0, 1, 1], Rational::ONE);
    c.set(&[0, 1, 0, 1], -Rational::ONE);
    LieTripleSystem::new(c).expect("L2 is a Lie triple system")
}

/// Lie algebras by structure constants `(i, j, m, v)`: `[e_i, e_j] += v e_m`.
/// Name, dimension, and structure constants of a Lie algebra.
pub type LieAlgebraData = (&'static str, usize, Vec<(usize, usize, usize, i64)>);

pub fn lie_algebras() -> Vec<LieAlgebraData> {
    vec![
        ("sl2", 3, vec![(2, 0, 0, 2), (2, 1, 1, -2), (0, 1, 2, 1)]),
        ("so3", 3, vec![(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)]),
        ("r3", 3, vec![(2, 0, 0, 1), (2, 1, 1, 1)]),
        ("r3b", 3, vec![(2, 0, 0, 1), (2, 1, 0, 1), (2, 1, 1, 1)]),
        ("aff2", 2, vec![(0, 1, 0, 1)]),
    ]
}

pub fn lie_system(name: &str) -> Option<LieTripleSystem> {
    let (_, n, e) = lie_algebras().into_iter().find(|(k, _, _)| *k == name)?;
    let g = LieAlgebra::from_entries(n, &e).expect("built-in Lie algebra");
    Some(lts_from_lie_algebra(&g).expect("built-in Lie algebra"))
}

pub fn systems() -> Vec<(String, LieTripleSystem)> {
    let mut out = vec![("L2".to_string(), l2())];
    for n in 1..=3 {
        out.push((format!("abelian{n}"), LieTripleSystem::abelian(n)));
    }
    for (name, _, _) in lie_algebras() {
        out.push((name.to_string(), lie_system(name).expect("listed")));
    }
    out
}

pub fn n01() -> Matrix {
    Matrix::from_ints(&[[0, 1], [0, 1]])
}

/// Nijenhuis systems with Nijenhuis representations, dimensions 1 to 3.
pub fn contexts() -> Vec<(&'static str, NijenhuisContext)> {
    let l = l2();
    let sl2 = lie_system("sl2").expect("listed");
    let sl2_n = Matrix::from_ints(&[[-1, -1, 1], [1, 0, -1], [1, 0, -1]]);
    let r3b = lie_system("r3b").expect("listed");
    let r3b_n = Matrix::from_ints(&[[-1, -1, -1], [0, -1, -1], [0, 0, -1]]);
    let build = |l: LieTripleSystem, n: Matrix, rep: Representation, nv: Matrix| {
        NijenhuisContext::new(l, n, rep, nv).expect("built-in context")
    };
    vec![
        (
            "abelian1-scalar",
            build(
                LieTripleSystem::abelian(1),
                Matrix::from_ints(&[[2]]),
                Representation::trivial(1, 2),
                Matrix::from_ints(&[[1, 1], [0, 1]]),
            ),
        ),
        (
            "L2-adjoint",
            build(l.clone(), n01(), adjoint_rep(&l), n01()),
        ),
        (
            "abelian2-trivial",
            build(
                LieTripleSystem::abelian(2),
                Matrix::zeros(2, 2),
                Representation::trivial(2, 1),
                Matrix::zeros(1, 1),
            ),
        ),
        (
            "sl2-adjoint",
            build(sl2.clone(), sl2_n.clone(), adjoint_rep(&sl2), sl2_n),
        ),
        (
            "r3b-adjoint",
            build(r3b.clone(), r3b_n.clone(), adjoint_rep(&r3b), r3b_n),
        ),
    ]
}

pub fn context(name: &str) -> Option<NijenhuisContext> {
    contexts()
        .into_iter()
        .find(|(k, _)| *k == name)
        .map(|(_, c)| c)
}

/// The first basis cocycle of the given degree that is not a coboundary.
pub fn nontrivial_cocycle(ctx: &NijenhuisContext, degree: usize) -> Result<Option<NLieCochain>> {
    let cx = Complex::new(ctx);
    for z in cx.cocycle_basis(degree) {
        if !cx.is_coboundary(&z)? {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// `T1 = T0`, `h = id`, adjoint action, `N1 = N0`.
pub fn identity_crossed_module(ctx_lts: &LieTripleSystem, n: &Matrix) -> CrossedModule {
    let d = ctx_lts.dim();
    CrossedModule::new(
        ctx_lts.bracket().clone(),
        ctx_lts.bracket().clone(),
        Matrix::identity(d),
        ctx_lts.bracket().clone(),
        n.clone(),
        n.clone(),
    )
    .expect("consistent shapes")
}

/// `h = 0` with an abelian top and the action of a Nijenhuis representation.
pub fn zero_map_crossed_module(ctx: &NijenhuisContext) -> CrossedModule {
    let (d0, d1) = (ctx.dim(), ctx.vdim());
    CrossedModule::new(
        ctx.lts().bracket().clone(),
        Tensor::zeros(&[d1, d1, d1, d1]),
        Matrix::zeros(d0, d1),
        ctx.rep().theta().clone(),
        ctx.n().clone(),
        ctx.nv().clone(),
    )
    .expect("consistent shapes")
}

/// Example files, each passing its own validator.
pub fn files() -> Result<Vec<(String, Value)>> {
    let mut out = Vec::new();
    for (name, l) in systems() {
        out.push((format!("{name}.json"), io::lts_to_json(l.bracket())));
    }
    let op = |m: Matrix| io::operator_to_json(&LinearOperator::new(m));
    out.push(("N01.json".into(), op(n01())));
    for n in 1..=3 {
        out.push((format!("zeroN{n}.json"), op(Matrix::zeros(n, n))));
        out.push((format!("idN{n}.json"), op(Matrix::identity(n))));
        let theta = Representation::trivial(n, 1);
        out.push((
            format!("trivialrep{n}.json"),
            io::representation_to_json(theta.theta(), Some(&Matrix::zeros(1, 1))),
        ));
    }
    let l = l2();
    out.push((
        "L2_adjoint.json".into(),
        io::representation_to_json(l.bracket(), Some(&n01())),
    ));
    for (name, ctx) in contexts() {
        out.push((format!("ctx_{name}_N.json"), op(ctx.n().clone())));
        out.push((
            format!("ctx_{name}_rep.json"),
            io::representation_to_json(ctx.rep().theta(), Some(ctx.nv())),
        ));
    }
    let ctx = context("L2-adjoint").expect("listed");
    let z3 = nontrivial_cocycle(&ctx, 3)?.expect("L2 has nontrivial degree-3 classes");
    let z5 = nontrivial_cocycle(&ctx, 5)?.expect("L2 has nontrivial degree-5 classes");
    out.push(("L2_cocycle3.json".into(), io::pair_to_json(&z3)));
    out.push(("L2_cocycle5.json".into(), io::pair_to_json(&z5)));
    let zero = ExtensionCocycle::zero(2, 2);
    out.push((
        "L2_semidirect.json".into(),
        io::extension_to_json(&build_extension(&ctx, &zero)?, &zero),
    ));
    let data = ExtensionCocycle::from_pair(z3)?;
    out.push((
        "L2_extension.json".into(),
        io::extension_to_json(&build_extension(&ctx, &data)?, &data),
    ));
    let (g, op5) = cocycle_to_skeletal(&ctx, &z5)?;
    out.push((
        "L2_skeletal.json".into(),
        io::two_system_to_json(&g, Some(&op5)),
    ));
    let x = identity_crossed_module(ctx.lts(), ctx.n());
    out.push(("L2_xmod.json".into(), io::crossed_module_to_json(&x)));
    let (s, sop) = crossed_module_to_strict(&x)?;
    out.push((
        "L2_strict.json".into(),
        io::two_system_to_json(&s, Some(&sop)),
    ));
    let g0 = crate::twosys::TwoSystem::zero(2, 1);
    out.push((
        "zero_2system.json".into(),
        io::two_system_to_json(&g0, Some(&two_system_zero_op(&g0))),
    ));
    Ok(out)
}
