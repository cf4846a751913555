//! Random inputs for property runs, all driven by a seed.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use nlts::cohomology::{Cochain, Complex, NLieCochain};
use nlts::corpus;
use nlts::linalg::Matrix;
use nlts::nrep::NijenhuisContext;
use nlts::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_int(rng.gen_range(-3..=3))
}

pub fn cochain(rng: &mut ChaCha8Rng, p: usize, n: usize, m: usize) -> Cochain {
    Cochain::from_coefficients(p, n, m, || small(rng))
}

/// Random pair of odd degree `p`; degree 1 has no second component.
pub fn pair(rng: &mut ChaCha8Rng, p: usize, ctx: &NijenhuisContext) -> NLieCochain {
    let (n, m) = (ctx.dim(), ctx.vdim());
    let f = cochain(rng, p, n, m);
    let g = (p >= 3).then(|| cochain(rng, p - 2, n, m));
    NLieCochain::new(f, g).expect("consistent pair")
}

pub fn scale_pair(x: &NLieCochain, s: &Rational) -> NLieCochain {
    NLieCochain {
        f: x.f.scale(s),
        g: x.g.as_ref().map(|g| g.scale(s)),
    }
}

/// Cached cocycle bases per corpus context and degree.
pub fn cocycle_basis(name: &str, degree: usize) -> Vec<NLieCochain> {
    type Cache = Mutex<HashMap<(String, usize), Vec<NLieCochain>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&(name.to_string(), degree)) {
        return b.clone();
    }
    let ctx = corpus::context(name).expect("corpus context");
    let b = Complex::new(&ctx).cocycle_basis(degree);
    cache
        .lock()
        .unwrap()
        .insert((name.to_string(), degree), b.clone());
    b
}

/// Random nonzero-coefficient combination of a cocycle basis.
pub fn cocycle(rng: &mut ChaCha8Rng, name: &str, degree: usize) -> NLieCochain {
    let ctx = corpus::context(name).expect("corpus context");
    let mut z = NLieCochain::zero(degree, ctx.dim(), ctx.vdim());
    for b in cocycle_basis(name, degree) {
        z = z.add(&scale_pair(&b, &small(rng)));
    }
    z
}

/// A random integer matrix with determinant ±1 and its inverse.
pub fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> (Matrix, Matrix) {
    let mut p = Matrix::identity(n);
    let mut inv = Matrix::identity(n);
    if n < 2 {
        return (p, inv);
    }
    for _ in 0..4 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = rng.gen_range(-2i64..=2);
        let mut e = Matrix::identity(n);
        e.set(i, j, Rational::from_int(k));
        let mut einv = Matrix::identity(n);
        einv.set(i, j, Rational::from_int(-k));
        p = p.mul(&e).unwrap();
        inv = einv.mul(&inv).unwrap();
    }
    (p, inv)
}

pub fn conjugate(rng: &mut ChaCha8Rng, d: &Matrix) -> Matrix {
    let (p, inv) = unimodular(rng, d.rows());
    p.mul(d).unwrap().mul(&inv).unwrap()
}

pub fn int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> Matrix {
    let r: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect();
    Matrix::from_ints(&r)
}
