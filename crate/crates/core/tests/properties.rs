mod common;

use common::gen;
use nlts::cohomology::{validate_cochain, Cochain, Complex, NLieCochain};
use nlts::corpus;
use nlts::extensions::{
    build_extension, extensions_equivalent, extract_cocycle, literal_condition_defect,
    literal_condition_gap, operator_condition_defect, ExtensionCocycle,
};
use nlts::io;
use nlts::lts::check_lts;
use nlts::operators::{
    classify_by_square, induced_bracket, is_nijenhuis, LinearOperator, SquareShape,
};
use nlts::twosys::{
    check_2system, check_crossed_module, check_nijenhuis_2system, cocycle_to_skeletal,
    condition_f_defect, crossed_module_to_strict, l5_coboundary, skeletal_to_cocycle,
    strict_to_crossed_module, NijenhuisTwo, TwoSystem,
};
use nlts::{Matrix, Rational};
use proptest::prelude::*;
use rand::Rng;

const CONTEXTS: [&str; 5] = [
    "abelian1-scalar",
    "L2-adjoint",
    "abelian2-trivial",
    "sl2-adjoint",
    "r3b-adjoint",
];

fn ctx_strategy() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&CONTEXTS[..])
}

fn valid(c: &Cochain) -> bool {
    validate_cochain(c.tensor(), c.degree()).unwrap().ok
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn differentials_square_to_zero(name in ctx_strategy(), seed in any::<u64>(), p in prop::sample::select(vec![1usize, 3])) {
        let ctx = corpus::context(name).unwrap();
        let cx = Complex::new(&ctx);
        let mut rng = gen::rng(seed);
        let f = gen::cochain(&mut rng, p, ctx.dim(), ctx.vdim());
        let df = cx.delta(&f).unwrap();
        prop_assert!(valid(&df));
        prop_assert!(cx.delta(&df).unwrap().is_zero());
        let pf = cx.partial(&f).unwrap();
        prop_assert!(valid(&pf));
        prop_assert!(cx.partial(&pf).unwrap().is_zero());
        let x = gen::pair(&mut rng, p, &ctx);
        let dx = cx.d(&x).unwrap();
        prop_assert!(valid(&dx.f) && dx.g.as_ref().is_none_or(valid));
        prop_assert!(cx.d(&dx).unwrap().is_zero());
    }

    #[test]
    fn phi_intertwines_the_coboundaries(name in ctx_strategy(), seed in any::<u64>(), p in prop::sample::select(vec![1usize, 3])) {
        let ctx = corpus::context(name).unwrap();
        let cx = Complex::new(&ctx);
        let f = gen::cochain(&mut gen::rng(seed), p, ctx.dim(), ctx.vdim());
        let lhs = cx.partial(&cx.phi(&f).unwrap()).unwrap();
        let rhs = cx.phi(&cx.delta(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn induced_bracket_of_nijenhuis_operator(sys in prop::sample::select(vec!["L2", "sl2", "r3b", "aff2", "so3"]), seed in any::<u64>()) {
        let l = corpus::systems().into_iter().find(|(k, _)| k == sys).unwrap().1;
        let mut rng = gen::rng(seed);
        let n = LinearOperator::new(gen::int_matrix(&mut rng, l.dim(), l.dim(), -2, 2));
        let nij = is_nijenhuis(&l, &n).unwrap().ok;
        let ib = induced_bracket(&l, &n).unwrap();
        prop_assert_eq!(ib.nijenhuis, nij);
        if nij {
            prop_assert!(ib.lts_report.ok);
            prop_assert!(ib.morphism);
        }
    }

    #[test]
    fn square_shapes_match_their_partner(sys in prop::sample::select(vec!["L2", "sl2", "r3b", "abelian3", "r3"]), seed in any::<u64>(), shape in 0usize..5) {
        let l = corpus::systems().into_iter().find(|(k, _)| k == sys).unwrap().1;
        let d = l.dim();
        let mut rng = gen::rng(seed);
        let base = match shape {
            0 => Matrix::zeros(d, d),
            1 => {
                let mut e = Matrix::zeros(d, d);
                e.set(0, d - 1, Rational::ONE);
                e
            }
            2 => diag(&(0..d).map(|_| rng.gen_range(0..=1)).collect::<Vec<_>>()),
            3 => diag(&(0..d).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect::<Vec<_>>()),
            _ => {
                prop_assume!(d % 2 == 0);
                let mut j = Matrix::zeros(d, d);
                for b in 0..d / 2 {
                    j.set(2 * b, 2 * b + 1, -Rational::ONE);
                    j.set(2 * b + 1, 2 * b, Rational::ONE);
                }
                j
            }
        };
        let n = gen::conjugate(&mut rng, &base);
        let r = classify_by_square(&l, &n).unwrap();
        let want = [SquareShape::Zero, SquareShape::Zero, SquareShape::Idempotent, SquareShape::Involution, SquareShape::AntiInvolution][shape];
        prop_assert!(r.cases.iter().any(|c| c.shape == want));
        prop_assert!(r.consistent, "{:?}", r.cases);
    }

    #[test]
    fn extension_is_valid_iff_cocycle(name in ctx_strategy(), seed in any::<u64>(), kind in 0usize..3) {
        let ctx = corpus::context(name).unwrap();
        let cx = Complex::new(&ctx);
        let mut rng = gen::rng(seed);
        let mut x = NLieCochain::zero(3, ctx.dim(), ctx.vdim());
        if kind != 1 {
            x = gen::cocycle(&mut rng, name, 3);
        }
        if kind != 0 {
            x = x.add(&gen::pair(&mut rng, 3, &ctx));
        }
        let data = ExtensionCocycle::from_pair(x.clone()).unwrap();
        let ext = build_extension(&ctx, &data).unwrap();
        let chk = ext.check().unwrap();
        let cyc = cx.is_cocycle(&x).unwrap();
        prop_assert_eq!(chk.ok(), cyc.ok);
        prop_assert_eq!(chk.lts.ok, !cyc.has_rule("delta"));
        // The section x -> (x, 0) recovers the data.
        prop_assert_eq!(extract_cocycle(&ext, &ext.canonical_section()).unwrap(), data.clone());
        // Operator condition: the true one is the second component of d, the
        // expanded literal form is off by exactly the gap term.
        let truth = operator_condition_defect(&ctx, &data).unwrap();
        prop_assert_eq!(truth.clone(), cx.d(&x).unwrap().g.unwrap().into_tensor());
        let lit = literal_condition_defect(&ctx, &data).unwrap();
        prop_assert_eq!(lit.sub(&truth), literal_condition_gap(&ctx, &data.chi).unwrap().neg());
        if chk.ok() {
            prop_assert!(check_lts(ext.total()).unwrap().ok);
        }
    }

    #[test]
    fn cohomologous_extensions_are_equivalent(name in ctx_strategy(), seed in any::<u64>()) {
        let ctx = corpus::context(name).unwrap();
        let cx = Complex::new(&ctx);
        let mut rng = gen::rng(seed);
        let z = gen::cocycle(&mut rng, name, 3);
        let gamma = gen::cochain(&mut rng, 1, ctx.dim(), ctx.vdim());
        let shifted = z.add(&cx.d(&NLieCochain::new(gamma, None).unwrap()).unwrap());
        let c1 = ExtensionCocycle::from_pair(z).unwrap();
        let c2 = ExtensionCocycle::from_pair(shifted).unwrap();
        let eq = extensions_equivalent(&ctx, &c1, &c2).unwrap();
        prop_assert!(eq.gamma.is_some());
        prop_assert!(eq.eta_verified);
    }

    #[test]
    fn other_sections_give_cohomologous_pairs(name in ctx_strategy(), seed in any::<u64>()) {
        let ctx = corpus::context(name).unwrap();
        let cx = Complex::new(&ctx);
        let mut rng = gen::rng(seed);
        let z = gen::cocycle(&mut rng, name, 3);
        let data = ExtensionCocycle::from_pair(z.clone()).unwrap();
        let ext = build_extension(&ctx, &data).unwrap();
        let gamma = gen::int_matrix(&mut rng, ctx.vdim(), ctx.dim(), -2, 2);
        let got = extract_cocycle(&ext, &ext.shifted_section(&gamma).unwrap()).unwrap().to_pair();
        prop_assert!(cx.is_cocycle(&got).unwrap().ok);
        prop_assert!(cx.is_coboundary(&got.sub(&z)).unwrap());
    }

    #[test]
    fn skeletal_structures_are_degree_five_cocycles(name in prop::sample::select(vec!["abelian1-scalar", "L2-adjoint", "abelian2-trivial"]), seed in any::<u64>(), perturb in any::<bool>()) {
        let ctx = corpus::context(name).unwrap();
        let cx = Complex::new(&ctx);
        let mut rng = gen::rng(seed);
        let mut x = gen::cocycle(&mut rng, name, 5);
        if perturb {
            x = x.add(&gen::pair(&mut rng, 5, &ctx));
        }
        let cyc = cx.is_cocycle(&x).unwrap();
        let (s0, s1, s2) = TwoSystem::mixed_from_action(ctx.rep().theta());
        let g = TwoSystem::new(Matrix::zeros(ctx.dim(), ctx.vdim()), ctx.lts().bracket().clone(), s0, s1, s2, x.f.tensor().clone()).unwrap();
        let op = NijenhuisTwo::new(&g, ctx.n().clone(), ctx.nv().clone(), x.g.as_ref().unwrap().tensor().clone()).unwrap();
        prop_assert_eq!(g.l11_defect(), l5_coboundary(&g));
        prop_assert_eq!(condition_f_defect(&g, &op), cx.d(&x).unwrap().g.unwrap().into_tensor());
        let base = check_2system(&g);
        prop_assert_eq!(base.ok, !cyc.has_rule("delta"));
        if base.ok {
            prop_assert_eq!(check_nijenhuis_2system(&g, &op).unwrap().ok, cyc.ok);
        }
        if cyc.ok {
            let (g2, op2) = cocycle_to_skeletal(&ctx, &x).unwrap();
            prop_assert_eq!(&g2, &g);
            let back = skeletal_to_cocycle(&g2, &op2).unwrap();
            prop_assert_eq!(back.cochain, x);
            prop_assert_eq!(back.context.rep(), ctx.rep());
        }
    }

    #[test]
    fn strict_structures_are_crossed_modules(sys in prop::sample::select(vec!["L2", "sl2", "r3b", "aff2"]), seed in any::<u64>()) {
        let l = corpus::systems().into_iter().find(|(k, _)| k == sys).unwrap().1;
        let mut rng = gen::rng(seed);
        let n = gen::int_matrix(&mut rng, l.dim(), l.dim(), -1, 1);
        prop_assume!(is_nijenhuis(&l, &LinearOperator::new(n.clone())).unwrap().ok);
        let x = corpus::identity_crossed_module(&l, &n);
        prop_assert!(check_crossed_module(&x).unwrap().ok);
        let (g, op) = crossed_module_to_strict(&x).unwrap();
        prop_assert!(check_2system(&g).ok);
        prop_assert_eq!(strict_to_crossed_module(&g, &op).unwrap(), x);
    }

    #[test]
    fn json_round_trips(name in ctx_strategy(), seed in any::<u64>()) {
        let ctx = corpus::context(name).unwrap();
        let (n, m) = (ctx.dim(), ctx.vdim());
        let mut rng = gen::rng(seed);
        let c = ctx.lts().bracket();
        prop_assert_eq!(&io::lts_from_json(&io::lts_to_json(c)).unwrap(), c);
        let op = LinearOperator::with_weight(ctx.n().clone(), gen::small(&mut rng));
        prop_assert_eq!(io::operator_from_json(&io::operator_to_json(&op)).unwrap(), op);
        let (t, nv) = io::representation_from_json(&io::representation_to_json(ctx.rep().theta(), Some(ctx.nv())), n).unwrap();
        prop_assert_eq!(&t, ctx.rep().theta());
        prop_assert_eq!(nv.as_ref(), Some(ctx.nv()));
        let x = gen::pair(&mut rng, 3, &ctx);
        let (f, g) = io::pair_from_json(&io::pair_to_json(&x), n, m).unwrap();
        prop_assert_eq!(&f, x.f.tensor());
        prop_assert_eq!(g.as_ref(), x.g.as_ref().map(|g| g.tensor()));
        let data = ExtensionCocycle::from_pair(x).unwrap();
        let ext = build_extension(&ctx, &data).unwrap();
        let input = io::extension_from_json(&io::extension_to_json(&ext, &data)).unwrap();
        prop_assert_eq!(&input.psi, data.psi.tensor());
        prop_assert_eq!(&input.n, ctx.n());
        let xm = corpus::zero_map_crossed_module(&ctx);
        prop_assert_eq!(io::crossed_module_from_json(&io::crossed_module_to_json(&xm)).unwrap(), xm);
    }
}

fn diag(d: &[i64]) -> Matrix {
    let mut m = Matrix::zeros(d.len(), d.len());
    for (i, &v) in d.iter().enumerate() {
        m.set(i, i, Rational::from_int(v));
    }
    m
}

#[test]
fn zero_map_crossed_modules_round_trip() {
    for (name, ctx) in corpus::contexts() {
        let x = corpus::zero_map_crossed_module(&ctx);
        assert!(check_crossed_module(&x).unwrap().ok, "{name}");
        let (g, op) = crossed_module_to_strict(&x).unwrap();
        assert_eq!(strict_to_crossed_module(&g, &op).unwrap(), x, "{name}");
        let twice = io::two_system_from_json(&io::two_system_to_json(&g, Some(&op))).unwrap();
        assert_eq!(twice.0, g);
        assert_eq!(twice.1, Some(op));
    }
}
