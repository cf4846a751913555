//! Shared inputs for the benchmarks.

use nlts::cohomology::{Cochain, NLieCochain};
use nlts::extensions::ExtensionCocycle;
use nlts::nrep::NijenhuisContext;
use nlts::{corpus, Rational};

pub fn context(name: &str) -> NijenhuisContext {
    corpus::context(name).expect("corpus context")
}

/// Deterministic dense-ish cochain: coefficients cycle through -2..=2.
pub fn cochain(degree: usize, ctx: &NijenhuisContext) -> Cochain {
    let mut k = 0i64;
    Cochain::from_coefficients(degree, ctx.dim(), ctx.vdim(), || {
        k += 1;
        Rational::from_int(k % 5 - 2)
    })
}

pub fn pair(degree: usize, ctx: &NijenhuisContext) -> NLieCochain {
    let g = (degree >= 3).then(|| cochain(degree - 2, ctx));
    NLieCochain::new(cochain(degree, ctx), g).expect("consistent pair")
}

/// A nontrivial degree-3 class of the context, as extension data.
pub fn extension_data(ctx: &NijenhuisContext) -> ExtensionCocycle {
    let z = corpus::nontrivial_cocycle(ctx, 3)
        .expect("kernel computation")
        .expect("nontrivial class");
    ExtensionCocycle::from_pair(z).expect("degree-3 pair")
}

pub fn grid() -> Vec<Rational> {
    [-1, 0, 1].iter().map(|&v| Rational::from_int(v)).collect()
}
