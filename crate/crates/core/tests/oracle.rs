//! Library kernels against the naive reference implementations.

mod common;

use common::{Ctx, Form};
use nlts::cohomology::{cochain_space_dim, Cochain, Complex, NLieCochain};
use nlts::corpus;
use nlts::linalg::rank;
use nlts::operators::{is_nijenhuis, LinearOperator};
use nlts::{Matrix, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_int(rng.gen_range(-3..=3))
}

#[test]
fn coboundaries_match_naive_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, ctx) in corpus::contexts() {
        let o = Ctx::from_context(&ctx);
        let cx = Complex::new(&ctx);
        for p in [1, 3] {
            for _ in 0..3 {
                let f = Cochain::from_coefficients(p, ctx.dim(), ctx.vdim(), || small(&mut rng));
                let of = Form::from_tensor(f.tensor());
                assert_eq!(
                    Form::from_tensor(cx.delta(&f).unwrap().tensor()),
                    common::delta(&o, &of),
                    "{name} delta p={p}"
                );
                assert_eq!(
                    Form::from_tensor(cx.partial(&f).unwrap().tensor()),
                    common::partial(&o, &of),
                    "{name} partial p={p}"
                );
                assert_eq!(
                    Form::from_tensor(cx.phi(&f).unwrap().tensor()),
                    common::phi(&o, &of),
                    "{name} phi p={p}"
                );
            }
        }
    }
}

#[test]
fn pair_differential_matches_naive_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ctx = corpus::context("L2-adjoint").unwrap();
    let o = Ctx::from_context(&ctx);
    let cx = Complex::new(&ctx);
    for p in [1, 3, 5] {
        let f = Cochain::from_coefficients(p, 2, 2, || small(&mut rng));
        let g = (p >= 3).then(|| Cochain::from_coefficients(p - 2, 2, 2, || small(&mut rng)));
        let og = g.as_ref().map(|g| Form::from_tensor(g.tensor()));
        let (a, b) = common::d_pair(&o, &Form::from_tensor(f.tensor()), og.as_ref());
        let d = cx.d(&NLieCochain::new(f, g).unwrap()).unwrap();
        assert_eq!(Form::from_tensor(d.f.tensor()), a, "p={p}");
        assert_eq!(Form::from_tensor(d.g.unwrap().tensor()), b, "p={p}");
    }
}

#[test]
fn cochain_space_dims_match_projector_rank() {
    for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 3)] {
        for p in [1, 3, 5] {
            if n == 3 && p == 5 && m == 3 {
                continue;
            }
            let span: Vec<_> = common::spanning_set(p, n, m)
                .into_iter()
                .map(|f| f.data)
                .collect();
            assert_eq!(
                cochain_space_dim(p, n, m),
                common::bareiss_rank(&span),
                "p={p} n={n} m={m}"
            );
        }
    }
}

#[test]
fn cohomology_matches_rank_oracle() {
    for (name, ctx) in corpus::contexts() {
        let o = Ctx::from_context(&ctx);
        let cx = Complex::new(&ctx);
        let top = if ctx.dim() <= 2 { 5 } else { 3 };
        for p in (1..=top).step_by(2) {
            assert_eq!(
                cx.cohomology_dim(p).unwrap().dim_h,
                common::cohomology(&o, p),
                "{name} H^{p}"
            );
        }
    }
}

#[test]
fn rank_matches_bareiss() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let rows = rng.gen_range(1..7);
        let cols = rng.gen_range(1..7);
        // Low-rank products make rank deficiency common.
        let k = rng.gen_range(1..=rows.min(cols));
        let a: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..k).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let b: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let prod: Vec<Vec<i64>> = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                    .collect()
            })
            .collect();
        let m = Matrix::from_ints(&prod);
        let oracle: Vec<_> = prod
            .iter()
            .map(|r| r.iter().map(|&x| common::q(x)).collect())
            .collect();
        assert_eq!(rank(&m), common::bareiss_rank(&oracle), "{prod:?}");
    }
}

#[test]
fn nijenhuis_check_matches_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (name, l) in corpus::systems() {
        let n = l.dim();
        let c = common::tensor_data(l.bracket());
        assert!(common::is_lts(&c, n), "{name}");
        for _ in 0..40 {
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-1..=1)).collect())
                .collect();
            let m = Matrix::from_ints(&rows);
            let lib = is_nijenhuis(&l, &LinearOperator::new(m.clone()))
                .unwrap()
                .ok;
            assert_eq!(
                lib,
                common::is_nijenhuis(&c, n, &common::matrix_rows(&m)),
                "{name} {rows:?}"
            );
        }
    }
}
