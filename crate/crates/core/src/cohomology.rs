//! Cochains, the Yamaguti coboundary, the Nijenhuis-operator differential,
//! the connecting map, and cohomology dimensions.
//!
//! A cochain of degree `p` is a tensor `f[a][i1]..[ip]`. For `p >= 3` it is
//! alternating in slots `p-2, p-1` (1-based) and its cyclic sum over the
//! last three slots vanishes. Those constraints only couple entries that
//! share the output index and the leading `p-3` arguments, so the
//! constrained space is a direct sum of copies of one `n^3`-dimensional
//! block kernel.
//!
//! The differential on pairs is `d(f, g) = (delta f, partial g + (-1)^k phi f)`
//! for `f` of degree `2k-1`; in degree 1 the second slot is empty.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, rank_of_rows, solve_combination, Matrix, SparseVec};
use crate::lts::{cyclic_defect, d_from_theta, LieTripleSystem, Representation};
use crate::nrep::{twisted_theta, NijenhuisContext};
use crate::operators::{bracket_parts, induced_tensor};
use crate::rational::Rational;
use crate::report::Report;
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    t: Tensor,
}

fn check_cochain_shape(t: &Tensor, degree: usize) -> Result<()> {
    if degree.is_multiple_of(2) {
        return Err(Error::Shape(format!("cochain degree {degree} is not odd")));
    }
    if t.arity() != degree {
        return Err(Error::Shape(format!(
            "tensor of arity {} given for degree {degree}",
            t.arity()
        )));
    }
    let n = t.arg_dims()[0];
    if t.arg_dims().iter().any(|&d| d != n) {
        return Err(Error::Shape(format!(
            "unequal argument dimensions {:?}",
            t.arg_dims()
        )));
    }
    Ok(())
}

/// Checks both symmetry constraints; witness tuples are argument tuples.
pub fn validate_cochain(t: &Tensor, degree: usize) -> Result<Report> {
    check_cochain_shape(t, degree)?;
    let mut r = Report::new();
    if degree >= 3 {
        let p = degree;
        let mut swap: Vec<usize> = (0..p).collect();
        swap.swap(p - 3, p - 2);
        r.require_zero("alternation", &t.add(&t.rearrange(&swap)));
        r.require_zero("cyclic", &cyclic_defect(t));
    }
    Ok(r)
}

impl Cochain {
    pub fn new(t: Tensor) -> Result<Self> {
        let degree = t.arity();
        let r = validate_cochain(&t, degree)?;
        if !r.ok {
            return Err(Error::Invalid(format!(
                "cochain violates a constraint: {}",
                r.violations[0].detail_line()
            )));
        }
        Ok(Cochain { t })
    }

    pub fn zero(degree: usize, n: usize, m: usize) -> Self {
        let mut dims = vec![m];
        dims.extend(std::iter::repeat_n(n, degree));
        Cochain {
            t: Tensor::zeros(&dims),
        }
    }

    /// A linear combination of the standard basis of the constrained space.
    pub fn from_coefficients(
        degree: usize,
        n: usize,
        m: usize,
        mut coeff: impl FnMut() -> Rational,
    ) -> Self {
        let basis = cochain_basis(degree, n, m);
        let mut c = Cochain::zero(degree, n, m);
        for v in basis.iter() {
            let a = coeff();
            if a.is_zero() {
                continue;
            }
            for (k, x) in v {
                let cur = c.t.data()[*k].clone();
                let idx = c.t.multi(*k);
                c.t.set(&idx, cur + &a * x);
            }
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.t.arity()
    }

    pub fn base_dim(&self) -> usize {
        self.t.arg_dims().first().copied().unwrap_or(0)
    }

    pub fn vdim(&self) -> usize {
        self.t.out_dim()
    }

    pub fn tensor(&self) -> &Tensor {
        &self.t
    }

    pub fn into_tensor(self) -> Tensor {
        self.t
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero()
    }

    pub fn add(&self, o: &Cochain) -> Cochain {
        Cochain {
            t: self.t.add(&o.t),
        }
    }

    pub fn sub(&self, o: &Cochain) -> Cochain {
        Cochain {
            t: self.t.sub(&o.t),
        }
    }

    pub fn scale(&self, s: &Rational) -> Cochain {
        Cochain { t: self.t.scale(s) }
    }

    /// Wraps a tensor without checking constraints.
    pub(crate) fn raw(t: Tensor) -> Self {
        Cochain { t }
    }
}

/// The constraint system on the last three slots, one row per equation.
fn block_constraints(n: usize) -> Matrix {
    let mut rows = Vec::new();
    let at = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut alt = vec![Rational::ZERO; n * n * n];
                alt[at(x, y, z)] += Rational::ONE;
                alt[at(y, x, z)] += Rational::ONE;
                rows.push(alt);
                let mut cyc = vec![Rational::ZERO; n * n * n];
                cyc[at(x, y, z)] += Rational::ONE;
                cyc[at(y, z, x)] += Rational::ONE;
                cyc[at(z, x, y)] += Rational::ONE;
                rows.push(cyc);
            }
        }
    }
    Matrix::from_rows(rows).expect("rectangular constraint system")
}

fn block_kernel(n: usize) -> Arc<Vec<SparseVec>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<SparseVec>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(k) = cache.lock().expect("cache lock").get(&n) {
        return k.clone();
    }
    let k: Vec<SparseVec> = kernel_basis(&block_constraints(n))
        .iter()
        .map(|v| crate::linalg::to_sparse(v))
        .collect();
    let k = Arc::new(k);
    cache.lock().expect("cache lock").insert(n, k.clone());
    k
}

/// Entries minus the rank of the constraint system.
pub fn cochain_space_dim(degree: usize, n: usize, m: usize) -> usize {
    if degree < 3 {
        return n.pow(degree as u32) * m;
    }
    let block = n * n * n - rank(&block_constraints(n));
    m * n.pow(degree as u32 - 3) * block
}

/// Basis of the constrained space as sparse vectors in tensor coordinates.
pub fn cochain_basis(degree: usize, n: usize, m: usize) -> Arc<Vec<SparseVec>> {
    type Key = (usize, usize, usize);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Vec<SparseVec>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().expect("cache lock").get(&(degree, n, m)) {
        return b.clone();
    }
    let basis: Vec<SparseVec> = if degree < 3 {
        (0..m * n.pow(degree as u32))
            .map(|k| vec![(k, Rational::ONE)])
            .collect()
    } else {
        let kernel = block_kernel(n);
        let blocks = m * n.pow(degree as u32 - 3);
        let bs = n * n * n;
        (0..blocks)
            .flat_map(|b| {
                kernel
                    .iter()
                    .map(move |v| v.iter().map(|(k, x)| (b * bs + k, x.clone())).collect())
            })
            .collect()
    };
    let basis = Arc::new(basis);
    cache
        .lock()
        .expect("cache lock")
        .insert((degree, n, m), basis.clone());
    basis
}

/// Operator data for one Yamaguti-type coboundary.
#[derive(Debug, Clone)]
struct Yamaguti {
    theta: Tensor,
    d: Tensor,
    /// Brackets fed into the cochain, each with an optional output map.
    inserts: Vec<(Tensor, Option<Matrix>)>,
}

fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        Rational::ONE
    } else {
        -Rational::ONE
    }
}

impl Yamaguti {
    fn apply(&self, f: &Tensor) -> Tensor {
        let p = f.arity();
        let q = p + 2;
        let k = (q - 1) / 2;
        let all: Vec<usize> = (0..p).collect();
        let mut out = Tensor::nest(&self.theta, 0, &[q - 2, q - 1], f, &all);
        let mut second: Vec<usize> = (0..p - 1).collect();
        second.push(q - 2);
        out.sub_assign(&Tensor::nest(&self.theta, 0, &[q - 3, q - 1], f, &second));
        for i in 1..=k {
            let (a, b) = (2 * i - 2, 2 * i - 1);
            let rest: Vec<usize> = (0..q).filter(|&l| l != a && l != b).collect();
            let t = Tensor::nest(&self.d, 0, &[a, b], f, &rest);
            out.add_assign(&t.scale(&sign(i + k)));
            let s = sign(k + i + 1);
            for j in (2 * i + 1)..=q {
                let target = j - 1;
                let pos = rest
                    .iter()
                    .position(|&l| l == target)
                    .expect("label present");
                let others: Vec<usize> = rest.iter().copied().filter(|&l| l != target).collect();
                for (br, post) in &self.inserts {
                    let mut t = Tensor::nest(f, pos, &others, br, &[a, b, target]);
                    if let Some(m) = post {
                        t = t.apply_out(m);
                    }
                    out.add_assign(&t.scale(&s));
                }
            }
        }
        out
    }
}

fn delta_data(c: &Tensor, theta: &Tensor) -> Yamaguti {
    Yamaguti {
        theta: theta.clone(),
        d: d_from_theta(theta),
        inserts: vec![(c.clone(), None)],
    }
}

fn partial_data(c: &Tensor, n: &Matrix, theta: &Tensor, nv: &Matrix) -> Yamaguti {
    let theta = twisted_theta(theta, n, nv);
    let d = d_from_theta(&theta);
    let parts = bracket_parts(c, n);
    let deformed = induced_tensor(c, n);
    let nc = parts.c.apply_out(n);
    let minus_nv = nv.scale(&-Rational::ONE);
    let nv2 = nv.mul(nv).expect("square Nv");
    Yamaguti {
        theta,
        d,
        inserts: vec![
            (deformed, None),
            (parts.b.sub(&nc), Some(minus_nv)),
            (parts.c, Some(nv2)),
        ],
    }
}

fn ctx_partial_data(ctx: &NijenhuisContext) -> Yamaguti {
    partial_data(ctx.lts().bracket(), ctx.n(), ctx.rep().theta(), ctx.nv())
}

/// The Yamaguti coboundary from raw structure tensors, without validation.
pub(crate) fn delta_tensor(f: &Tensor, c: &Tensor, theta: &Tensor) -> Tensor {
    delta_data(c, theta).apply(f)
}

/// The Nijenhuis-operator coboundary from raw tensors, without validation.
pub(crate) fn partial_tensor(
    g: &Tensor,
    c: &Tensor,
    n: &Matrix,
    theta: &Tensor,
    nv: &Matrix,
) -> Tensor {
    partial_data(c, n, theta, nv).apply(g)
}

fn require_valid(f: &Tensor) -> Result<()> {
    let r = validate_cochain(f, f.arity())?;
    if !r.ok {
        return Err(Error::Invalid(format!(
            "input cochain violates a constraint: {}",
            r.violations[0].detail_line()
        )));
    }
    Ok(())
}

fn check_against(f: &Cochain, n: usize, m: usize) -> Result<()> {
    if f.base_dim() != n || f.vdim() != m {
        return Err(Error::Shape(format!(
            "cochain over ({}, {}) used with system dimension {n} and module dimension {m}",
            f.base_dim(),
            f.vdim()
        )));
    }
    require_valid(f.tensor())
}

/// The Yamaguti coboundary of `f` with coefficients in `rep`.
pub fn delta(f: &Cochain, l: &LieTripleSystem, rep: &Representation) -> Result<Cochain> {
    check_against(f, l.dim(), rep.vdim())?;
    Ok(Cochain::raw(
        delta_data(l.bracket(), rep.theta()).apply(f.tensor()),
    ))
}

/// The coboundary of the Nijenhuis operator's complex.
pub fn partial(g: &Cochain, ctx: &NijenhuisContext) -> Result<Cochain> {
    check_against(g, ctx.dim(), ctx.vdim())?;
    Ok(Cochain::raw(ctx_partial_data(ctx).apply(g.tensor())))
}

/// `prod_i (R_i - L) f`, where `R_i` feeds `N` into slot `i` and `L`
/// postcomposes with `Nv`.
pub fn phi(f: &Cochain, n: &Matrix, nv: &Matrix) -> Result<Cochain> {
    if n.rows() != f.base_dim() || nv.rows() != f.vdim() {
        return Err(Error::Shape("operators do not match the cochain".into()));
    }
    require_valid(f.tensor())?;
    Ok(Cochain::raw(phi_raw(f.tensor(), n, nv)))
}

pub(crate) fn phi_raw(f: &Tensor, n: &Matrix, nv: &Matrix) -> Tensor {
    (0..f.arity()).fold(f.clone(), |g, s| g.apply_in(s, n).sub(&g.apply_out(nv)))
}

/// An element of `C^p` plus `C^{p-2}`; the second part is absent in degree 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NLieCochain {
    pub f: Cochain,
    pub g: Option<Cochain>,
}

impl NLieCochain {
    pub fn new(f: Cochain, g: Option<Cochain>) -> Result<Self> {
        match (&g, f.degree()) {
            (None, 1) => {}
            (Some(g), p) if p >= 3 && g.degree() + 2 == p => {
                if g.base_dim() != f.base_dim() || g.vdim() != f.vdim() {
                    return Err(Error::Shape("pair components over different spaces".into()));
                }
            }
            _ => {
                return Err(Error::Shape(format!(
                    "pair of degrees ({}, {:?}) is not (p, p-2)",
                    f.degree(),
                    g.as_ref().map(Cochain::degree)
                )))
            }
        }
        Ok(NLieCochain { f, g })
    }

    pub fn zero(degree: usize, n: usize, m: usize) -> Self {
        let g = (degree >= 3).then(|| Cochain::zero(degree - 2, n, m));
        NLieCochain {
            f: Cochain::zero(degree, n, m),
            g,
        }
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.as_ref().is_none_or(Cochain::is_zero)
    }

    pub fn sub(&self, o: &NLieCochain) -> NLieCochain {
        NLieCochain {
            f: self.f.sub(&o.f),
            g: match (&self.g, &o.g) {
                (Some(a), Some(b)) => Some(a.sub(b)),
                _ => None,
            },
        }
    }

    pub fn add(&self, o: &NLieCochain) -> NLieCochain {
        NLieCochain {
            f: self.f.add(&o.f),
            g: match (&self.g, &o.g) {
                (Some(a), Some(b)) => Some(a.add(b)),
                _ => None,
            },
        }
    }

    fn flatten(&self) -> SparseVec {
        let mut v = self.f.tensor().to_sparse();
        if let Some(g) = &self.g {
            let off = self.f.tensor().len();
            v.extend(
                g.tensor()
                    .to_sparse()
                    .into_iter()
                    .map(|(k, x)| (k + off, x)),
            );
        }
        v
    }
}

/// Precomputed differentials of one context.
#[derive(Debug, Clone)]
pub struct Complex {
    ctx: NijenhuisContext,
    delta: Yamaguti,
    partial: Yamaguti,
}

impl Complex {
    pub fn new(ctx: &NijenhuisContext) -> Self {
        Complex {
            ctx: ctx.clone(),
            delta: delta_data(ctx.lts().bracket(), ctx.rep().theta()),
            partial: ctx_partial_data(ctx),
        }
    }

    pub fn context(&self) -> &NijenhuisContext {
        &self.ctx
    }

    pub fn delta(&self, f: &Cochain) -> Result<Cochain> {
        check_against(f, self.ctx.dim(), self.ctx.vdim())?;
        Ok(Cochain::raw(self.delta.apply(f.tensor())))
    }

    pub fn partial(&self, g: &Cochain) -> Result<Cochain> {
        check_against(g, self.ctx.dim(), self.ctx.vdim())?;
        Ok(Cochain::raw(self.partial.apply(g.tensor())))
    }

    pub fn phi(&self, f: &Cochain) -> Result<Cochain> {
        phi(f, self.ctx.n(), self.ctx.nv())
    }

    pub fn d(&self, x: &NLieCochain) -> Result<NLieCochain> {
        let p = x.degree();
        let k = p.div_ceil(2);
        let first = self.delta(&x.f)?;
        let mut second = self.phi(&x.f)?.scale(&sign(k));
        if let Some(g) = &x.g {
            second = second.add(&self.partial(g)?);
        }
        Ok(NLieCochain {
            f: first,
            g: Some(second),
        })
    }

    fn basis_pair(&self, degree: usize, idx: usize) -> NLieCochain {
        let (n, m) = (self.ctx.dim(), self.ctx.vdim());
        let top = cochain_basis(degree, n, m);
        let mut x = NLieCochain::zero(degree, n, m);
        if idx < top.len() {
            x.f = Cochain::raw(Tensor::from_sparse(x.f.tensor().dims(), &top[idx]));
        } else {
            let low = cochain_basis(degree - 2, n, m);
            let g = x.g.as_ref().expect("lower component");
            let t = Tensor::from_sparse(g.tensor().dims(), &low[idx - top.len()]);
            x.g = Some(Cochain::raw(t));
        }
        x
    }

    pub fn pair_space_dim(&self, degree: usize) -> usize {
        let (n, m) = (self.ctx.dim(), self.ctx.vdim());
        let low = if degree >= 3 {
            cochain_space_dim(degree - 2, n, m)
        } else {
            0
        };
        cochain_space_dim(degree, n, m) + low
    }

    /// Images of the basis of the pair space under `d`, flattened.
    pub fn d_images(&self, degree: usize) -> Vec<SparseVec> {
        (0..self.pair_space_dim(degree))
            .into_par_iter()
            .map(|i| {
                let x = self.basis_pair(degree, i);
                let y = self.d_raw(&x);
                y.flatten()
            })
            .collect()
    }

    fn d_raw(&self, x: &NLieCochain) -> NLieCochain {
        let p = x.degree();
        let k = p.div_ceil(2);
        let first = self.delta.apply(x.f.tensor());
        let mut second = phi_raw(x.f.tensor(), self.ctx.n(), self.ctx.nv()).scale(&sign(k));
        if let Some(g) = &x.g {
            second.add_assign(&self.partial.apply(g.tensor()));
        }
        NLieCochain {
            f: Cochain::raw(first),
            g: Some(Cochain::raw(second)),
        }
    }

    pub fn d_rank(&self, degree: usize) -> usize {
        rank_of_rows(&self.d_images(degree))
    }

    pub fn cohomology_dim(&self, degree: usize) -> Result<CohomologyDims> {
        if ![1, 3, 5].contains(&degree) {
            return Err(Error::Unsupported(format!(
                "cohomology in degree {degree}; supported degrees are 1, 3, 5"
            )));
        }
        let dim = self.pair_space_dim(degree);
        let r = self.d_rank(degree);
        let boundaries = if degree == 1 {
            0
        } else {
            self.d_rank(degree - 2)
        };
        Ok(CohomologyDims {
            degree,
            dim_cochains: dim,
            dim_cocycles: dim - r,
            dim_coboundaries: boundaries,
            dim_h: dim - r - boundaries,
        })
    }

    fn check_pair(&self, x: &NLieCochain) -> Result<()> {
        check_against(&x.f, self.ctx.dim(), self.ctx.vdim())?;
        if let Some(g) = &x.g {
            check_against(g, self.ctx.dim(), self.ctx.vdim())?;
        }
        Ok(())
    }

    /// Witness rules are `delta` and `second`.
    pub fn is_cocycle(&self, x: &NLieCochain) -> Result<Report> {
        self.check_pair(x)?;
        let y = self.d_raw(x);
        let mut r = Report::new();
        r.require_zero("delta", y.f.tensor());
        if let Some(g) = &y.g {
            r.require_zero("second", g.tensor());
        }
        Ok(r)
    }

    /// A preimage under `d` when `x` is a coboundary.
    pub fn coboundary_preimage(&self, x: &NLieCochain) -> Result<Option<Coboundary>> {
        self.check_pair(x)?;
        let p = x.degree();
        if p == 1 {
            return Ok(x.is_zero().then_some(Coboundary::Zero));
        }
        let images = self.d_images(p - 2);
        let Some(coeffs) = solve_combination(&images, &x.flatten()) else {
            return Ok(None);
        };
        let (n, m) = (self.ctx.dim(), self.ctx.vdim());
        let mut pre = NLieCochain::zero(p - 2, n, m);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let b = self.basis_pair(p - 2, i);
                pre = pre.add(&NLieCochain {
                    f: b.f.scale(c),
                    g: b.g.map(|g| g.scale(c)),
                });
            }
        }
        Ok(Some(Coboundary::Of(pre)))
    }

    pub fn is_coboundary(&self, x: &NLieCochain) -> Result<bool> {
        Ok(self.coboundary_preimage(x)?.is_some())
    }

    /// A basis of the cocycles of the given degree.
    pub fn cocycle_basis(&self, degree: usize) -> Vec<NLieCochain> {
        let images = self.d_images(degree);
        let (n, m) = (self.ctx.dim(), self.ctx.vdim());
        // Kernel of the map whose columns are the images.
        let mut by_coord: std::collections::BTreeMap<usize, SparseVec> = Default::default();
        for (b, v) in images.iter().enumerate() {
            for (j, x) in v {
                by_coord.entry(*j).or_default().push((b, x.clone()));
            }
        }
        let rows: Vec<SparseVec> = by_coord.into_values().collect();
        let ker = crate::linalg::kernel_basis_sparse(&rows, images.len());
        ker.into_iter()
            .map(|coeffs| {
                let mut z = NLieCochain::zero(degree, n, m);
                for (i, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        let b = self.basis_pair(degree, i);
                        z = z.add(&NLieCochain {
                            f: b.f.scale(c),
                            g: b.g.map(|g| g.scale(c)),
                        });
                    }
                }
                z
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coboundary {
    /// Degree 1: only zero is a coboundary.
    Zero,
    Of(NLieCochain),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CohomologyDims {
    pub degree: usize,
    pub dim_cochains: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
}

pub fn d_nlie(x: &NLieCochain, ctx: &NijenhuisContext) -> Result<NLieCochain> {
    Complex::new(ctx).d(x)
}

pub fn cohomology_dim(ctx: &NijenhuisContext, degree: usize) -> Result<CohomologyDims> {
    Complex::new(ctx).cohomology_dim(degree)
}

pub fn is_cocycle(x: &NLieCochain, ctx: &NijenhuisContext) -> Result<Report> {
    Complex::new(ctx).is_cocycle(x)
}

pub fn is_coboundary(x: &NLieCochain, ctx: &NijenhuisContext) -> Result<bool> {
    Complex::new(ctx).is_coboundary(x)
}
