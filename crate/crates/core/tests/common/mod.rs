//! Test-only reference implementations. Everything here works on plain
//! `BigRational` arrays with naive basis-by-basis evaluation, so that it shares
//! no code paths with the library's tensor kernels or sparse elimination.

#![allow(dead_code, clippy::needless_range_loop)]

pub mod gen;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use nlts::nrep::NijenhuisContext;
use nlts::{Matrix, Rational, Tensor};

pub type Q = BigRational;
pub type Vector = Vec<Q>;
pub type Mat = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn from_lib(r: &Rational) -> Q {
    r.to_big()
}

pub fn tensor_data(t: &Tensor) -> Vec<Q> {
    t.data().iter().map(from_lib).collect()
}

pub fn matrix_rows(m: &Matrix) -> Mat {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(from_lib).collect())
        .collect()
}

fn zeros(n: usize) -> Vector {
    vec![Q::zero(); n]
}

fn basis(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Q::one();
    v
}

fn add(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(s: &Q, a: &[Q]) -> Vector {
    a.iter().map(|x| s * x).collect()
}

fn mat_vec(m: &Mat, v: &[Q]) -> Vector {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let k = b.len();
    let cols = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..k).map(|t| &row[t] * &b[t][j]).sum())
                .collect()
        })
        .collect()
}

fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| add(r, s)).collect()
}

fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| sub(r, s)).collect()
}

/// Plain data of a Nijenhuis context.
#[derive(Clone)]
pub struct Ctx {
    pub n: usize,
    pub m: usize,
    /// `c[mm][i][j][k]` flattened.
    pub c: Vec<Q>,
    /// `th[a][b][i][j]` flattened.
    pub th: Vec<Q>,
    pub nmat: Mat,
    pub nv: Mat,
}

impl Ctx {
    pub fn from_context(ctx: &NijenhuisContext) -> Ctx {
        Ctx {
            n: ctx.dim(),
            m: ctx.vdim(),
            c: tensor_data(ctx.lts().bracket()),
            th: tensor_data(ctx.rep().theta()),
            nmat: matrix_rows(ctx.n()),
            nv: matrix_rows(ctx.nv()),
        }
    }

    fn nx(&self, x: &[Q]) -> Vector {
        mat_vec(&self.nmat, x)
    }

    pub fn br(&self, x: &[Q], y: &[Q], z: &[Q]) -> Vector {
        bracket(&self.c, self.n, x, y, z)
    }

    fn theta(&self, x: &[Q], y: &[Q]) -> Mat {
        let (n, m) = (self.n, self.m);
        let mut out = vec![zeros(m); m];
        for a in 0..m {
            for b in 0..m {
                let mut s = Q::zero();
                for i in 0..n {
                    if x[i].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let t = &self.th[((a * m + b) * n + i) * n + j];
                        if !t.is_zero() && !y[j].is_zero() {
                            s += t * &x[i] * &y[j];
                        }
                    }
                }
                out[a][b] = s;
            }
        }
        out
    }

    /// `theta_N(x, y) = theta(Nx, Ny) - Nv (theta(Nx, y) + theta(x, Ny) - Nv theta(x, y))`.
    fn theta_n(&self, x: &[Q], y: &[Q]) -> Mat {
        let (nx, ny) = (self.nx(x), self.nx(y));
        let inner = mat_sub(
            &mat_add(&self.theta(&nx, y), &self.theta(x, &ny)),
            &mat_mul(&self.nv, &self.theta(x, y)),
        );
        mat_sub(&self.theta(&nx, &ny), &mat_mul(&self.nv, &inner))
    }
}

pub fn bracket(c: &[Q], n: usize, x: &[Q], y: &[Q], z: &[Q]) -> Vector {
    let mut out = zeros(n);
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            for k in 0..n {
                if z[k].is_zero() {
                    continue;
                }
                let w = &x[i] * &y[j] * &z[k];
                for (mm, o) in out.iter_mut().enumerate() {
                    let t = &c[((mm * n + i) * n + j) * n + k];
                    if !t.is_zero() {
                        *o += t * &w;
                    }
                }
            }
        }
    }
    out
}

/// A multilinear map `T^p -> V` stored as `data[a][i1]...[ip]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    pub p: usize,
    pub n: usize,
    pub m: usize,
    pub data: Vec<Q>,
}

impl Form {
    pub fn zero(p: usize, n: usize, m: usize) -> Form {
        Form {
            p,
            n,
            m,
            data: zeros(m * n.pow(p as u32)),
        }
    }

    pub fn from_tensor(t: &Tensor) -> Form {
        let d = t.dims();
        let n = if d.len() > 1 { d[1] } else { 0 };
        Form {
            p: d.len() - 1,
            n,
            m: d[0],
            data: tensor_data(t),
        }
    }

    fn idx(&self, a: usize, args: &[usize]) -> usize {
        args.iter().fold(a, |acc, &i| acc * self.n + i)
    }

    pub fn eval(&self, args: &[&[Q]]) -> Vector {
        let mut out = zeros(self.m);
        let per = self.n.pow(self.p as u32);
        let mut tuple = vec![0usize; self.p];
        for flat in 0..per {
            let mut r = flat;
            for s in (0..self.p).rev() {
                tuple[s] = r % self.n;
                r /= self.n;
            }
            let mut w = Q::one();
            for (s, &i) in tuple.iter().enumerate() {
                if args[s][i].is_zero() {
                    w = Q::zero();
                    break;
                }
                w *= &args[s][i];
            }
            if w.is_zero() {
                continue;
            }
            for (a, o) in out.iter_mut().enumerate() {
                let v = &self.data[a * per + flat];
                if !v.is_zero() {
                    *o += v * &w;
                }
            }
        }
        out
    }

    fn set_column(&mut self, args: &[usize], v: &[Q]) {
        for a in 0..self.m {
            let k = self.idx(a, args);
            self.data[k] = v[a].clone();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

fn tuples(n: usize, q: usize) -> Vec<Vec<usize>> {
    let total = n.pow(q as u32);
    (0..total)
        .map(|flat| {
            let mut t = vec![0; q];
            let mut r = flat;
            for s in (0..q).rev() {
                t[s] = r % n;
                r /= n;
            }
            t
        })
        .collect()
}

fn sign(e: usize) -> Q {
    if e.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Coboundary of a Yamaguti-type complex with action `theta` and a bracket
/// term `bracket_term(g, other args, slot, x, y, z)` standing for
/// `g` evaluated with `[x, y, z]` (or a deformation of it) placed at `slot`.
fn coboundary<T, B>(f: &Form, n: usize, theta: T, bracket_term: B) -> Form
where
    T: Fn(&[Q], &[Q]) -> Mat,
    B: Fn(&Form, &[Vector], usize, &Vector, &Vector, &Vector) -> Vector,
{
    let q_ = f.p + 2;
    let nn = (q_ - 1) / 2;
    let mut out = Form::zero(q_, n, f.m);
    for t in tuples(n, q_) {
        let xs: Vec<Vector> = t.iter().map(|&i| basis(n, i)).collect();
        let x = |k: usize| &xs[k - 1];
        let refs = |v: &[Vector]| -> Vec<Vector> { v.to_vec() };
        let ev = |args: &[Vector]| {
            let r: Vec<&[Q]> = args.iter().map(|a| a.as_slice()).collect();
            f.eval(&r)
        };
        let d = |a: &[Q], b: &[Q]| mat_sub(&theta(b, a), &theta(a, b));
        let head: Vec<Vector> = refs(&xs[..2 * nn - 1]);
        let mut v = mat_vec(&theta(x(2 * nn), x(2 * nn + 1)), &ev(&head));
        let mut second = refs(&xs[..2 * nn - 2]);
        second.push(x(2 * nn).clone());
        v = sub(
            &v,
            &mat_vec(&theta(x(2 * nn - 1), x(2 * nn + 1)), &ev(&second)),
        );
        for i in 1..=nn {
            let rest: Vec<Vector> = (0..q_)
                .filter(|&k| k != 2 * i - 2 && k != 2 * i - 1)
                .map(|k| xs[k].clone())
                .collect();
            v = add(
                &v,
                &scale(
                    &sign(i + nn),
                    &mat_vec(&d(x(2 * i - 1), x(2 * i)), &ev(&rest)),
                ),
            );
            for j in 2 * i + 1..=q_ {
                let others: Vec<Vector> = (1..=q_)
                    .filter(|&k| k != 2 * i - 1 && k != 2 * i)
                    .map(|k| x(k).clone())
                    .collect();
                let pos = j - 3;
                let term = bracket_term(f, &others, pos, x(2 * i - 1), x(2 * i), x(j));
                v = add(&v, &scale(&sign(nn + i + 1), &term));
            }
        }
        out.set_column(&t, &v);
    }
    out
}

fn with_slot(others: &[Vector], pos: usize, val: Vector) -> Vec<Vector> {
    let mut a = others.to_vec();
    a[pos] = val;
    a
}

fn eval_owned(f: &Form, args: &[Vector]) -> Vector {
    let r: Vec<&[Q]> = args.iter().map(|a| a.as_slice()).collect();
    f.eval(&r)
}

pub fn delta(ctx: &Ctx, f: &Form) -> Form {
    coboundary(
        f,
        ctx.n,
        |a, b| ctx.theta(a, b),
        |g, others, pos, a, b, c| eval_owned(g, &with_slot(others, pos, ctx.br(a, b, c))),
    )
}

/// Coboundary of the deformed complex: the twisted action and the bracket
/// terms `g(A) - g(NB) - Nv g(B) + g(N^2 C) + Nv g(NC) + Nv^2 g(C)`.
pub fn partial(ctx: &Ctx, g: &Form) -> Form {
    coboundary(
        g,
        ctx.n,
        |a, b| ctx.theta_n(a, b),
        |g, others, pos, a, b, c| {
            let (na, nb, nc) = (ctx.nx(a), ctx.nx(b), ctx.nx(c));
            let br = |x: &[Q], y: &[Q], z: &[Q]| ctx.br(x, y, z);
            let aa = add(&add(&br(&na, &nb, c), &br(a, &nb, &nc)), &br(&na, b, &nc));
            let bb = add(&add(&br(&na, b, c), &br(a, &nb, c)), &br(a, b, &nc));
            let cc = br(a, b, c);
            let gv = |v: Vector| eval_owned(g, &with_slot(others, pos, v));
            let nv = |v: Vector| mat_vec(&ctx.nv, &v);
            let mut t = gv(aa);
            t = sub(&t, &gv(ctx.nx(&bb)));
            t = sub(&t, &nv(gv(bb)));
            t = add(&t, &gv(ctx.nx(&ctx.nx(&cc))));
            t = add(&t, &nv(gv(ctx.nx(&cc))));
            add(&t, &nv(nv(gv(cc))))
        },
    )
}

/// `phi f (x1..xp) = sum over subsets S of (-1)^|S| Nv^|S| f(..., N x_k for k not in S, ...)`.
pub fn phi(ctx: &Ctx, f: &Form) -> Form {
    let mut out = Form::zero(f.p, f.n, f.m);
    for t in tuples(f.n, f.p) {
        let xs: Vec<Vector> = t.iter().map(|&i| basis(f.n, i)).collect();
        let mut v = zeros(f.m);
        for mask in 0..(1usize << f.p) {
            let args: Vec<Vector> = (0..f.p)
                .map(|k| {
                    if mask >> k & 1 == 1 {
                        xs[k].clone()
                    } else {
                        ctx.nx(&xs[k])
                    }
                })
                .collect();
            let s = mask.count_ones() as usize;
            let mut w = eval_owned(f, &args);
            for _ in 0..s {
                w = mat_vec(&ctx.nv, &w);
            }
            v = add(&v, &scale(&sign(s), &w));
        }
        out.set_column(&t, &v);
    }
    out
}

/// Image of the projector onto alternating, cyclic cochains applied to a
/// basis element. Maps onto the constrained space (6 times the identity there).
pub fn project(f: &Form) -> Form {
    if f.p < 3 {
        return f.clone();
    }
    let p = f.p;
    let permute = |src: &Form, perm: &dyn Fn(&[usize]) -> Vec<usize>| {
        let mut o = Form::zero(p, src.n, src.m);
        for t in tuples(src.n, p) {
            let s = perm(&t);
            for a in 0..src.m {
                let k = o.idx(a, &t);
                o.data[k] = src.data[src.idx(a, &s)].clone();
            }
        }
        o
    };
    // g(.., x, y, z) = f(.., x, y, z) - f(.., y, x, z)
    let swapped = permute(f, &|t| {
        let mut s = t.to_vec();
        s.swap(p - 3, p - 2);
        s
    });
    let g = Form {
        data: sub(&f.data, &swapped.data),
        ..f.clone()
    };
    // h = 2 g(x,y,z) - g(y,z,x) - g(z,x,y)
    let g1 = permute(&g, &|t| {
        let mut s = t.to_vec();
        s[p - 3] = t[p - 2];
        s[p - 2] = t[p - 1];
        s[p - 1] = t[p - 3];
        s
    });
    let g2 = permute(&g, &|t| {
        let mut s = t.to_vec();
        s[p - 3] = t[p - 1];
        s[p - 2] = t[p - 3];
        s[p - 1] = t[p - 2];
        s
    });
    let data = g
        .data
        .iter()
        .zip(&g1.data)
        .zip(&g2.data)
        .map(|((a, b), c)| q(2) * a - b - c)
        .collect();
    Form { data, ..f.clone() }
}

/// Spanning set of the constrained degree-p cochains.
pub fn spanning_set(p: usize, n: usize, m: usize) -> Vec<Form> {
    let len = m * n.pow(p as u32);
    (0..len)
        .map(|i| {
            let mut f = Form::zero(p, n, m);
            f.data[i] = Q::one();
            project(&f)
        })
        .collect()
}

/// Rank by Bareiss fraction-free elimination over the integers.
pub fn bareiss_rank(rows: &[Vector]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter()
                .map(|x| (x * Q::from_integer(l.clone())).to_integer())
                .collect()
        })
        .filter(|r: &Vec<BigInt>| r.iter().any(|x| !x.is_zero()))
        .collect();
    if a.is_empty() {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..a.len() {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

fn concat(parts: &[&Form]) -> Vector {
    parts.iter().flat_map(|f| f.data.iter().cloned()).collect()
}

/// `d(f, g) = (delta f, partial g + (-1)^k phi f)` with `k = ceil(p / 2)`.
pub fn d_pair(ctx: &Ctx, f: &Form, g: Option<&Form>) -> (Form, Form) {
    let k = f.p.div_ceil(2);
    let df = delta(ctx, f);
    let ph = phi(ctx, f);
    let mut second = Form {
        data: scale(&sign(k), &ph.data),
        ..ph
    };
    if let Some(g) = g {
        second.data = add(&second.data, &partial(ctx, g).data);
    }
    (df, second)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub cochains: usize,
    pub rank_d: usize,
}

/// Dimension of the pair space and rank of `d` in an odd degree.
pub fn degree_data(ctx: &Ctx, p: usize) -> Dims {
    let (n, m) = (ctx.n, ctx.m);
    let fs = spanning_set(p, n, m);
    let gs = if p >= 3 {
        spanning_set(p - 2, n, m)
    } else {
        Vec::new()
    };
    let mut space = Vec::new();
    let mut images = Vec::new();
    for f in &fs {
        space.push(concat(&[f, &Form::zero(p.saturating_sub(2), n, m)]));
        let (a, b) = d_pair(ctx, f, None);
        images.push(concat(&[&a, &b]));
    }
    for g in &gs {
        space.push(concat(&[&Form::zero(p, n, m), g]));
        let (a, b) = d_pair(ctx, &Form::zero(p, n, m), Some(g));
        images.push(concat(&[&a, &b]));
    }
    let cochains = if p >= 3 {
        bareiss_rank(&space)
    } else {
        bareiss_rank(&fs.iter().map(|f| f.data.clone()).collect::<Vec<_>>())
    };
    Dims {
        cochains,
        rank_d: bareiss_rank(&images),
    }
}

/// `dim H^p` for p in {1, 3, 5}.
pub fn cohomology(ctx: &Ctx, p: usize) -> usize {
    let here = degree_data(ctx, p);
    let below = if p >= 3 {
        degree_data(ctx, p - 2).rank_d
    } else {
        0
    };
    here.cochains - here.rank_d - below
}

/// Naive Nijenhuis check: `[Nx,Ny,Nz] = N(A - N B + N^2 C)` on basis triples.
pub fn is_nijenhuis(c: &[Q], n: usize, nmat: &Mat) -> bool {
    let nx = |v: &[Q]| mat_vec(nmat, v);
    for t in tuples(n, 3) {
        let (x, y, z) = (basis(n, t[0]), basis(n, t[1]), basis(n, t[2]));
        let br = |a: &[Q], b: &[Q], c_: &[Q]| bracket(c, n, a, b, c_);
        let lhs = br(&nx(&x), &nx(&y), &nx(&z));
        let aa = add(
            &add(&br(&nx(&x), &nx(&y), &z), &br(&x, &nx(&y), &nx(&z))),
            &br(&nx(&x), &y, &nx(&z)),
        );
        let bb = add(
            &add(&br(&nx(&x), &y, &z), &br(&x, &nx(&y), &z)),
            &br(&x, &y, &nx(&z)),
        );
        let cc = br(&x, &y, &z);
        let rhs = nx(&add(&sub(&aa, &nx(&bb)), &nx(&nx(&cc))));
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Naive check of the three Lie triple system axioms.
pub fn is_lts(c: &[Q], n: usize) -> bool {
    let br = |a: &[Q], b: &[Q], c_: &[Q]| bracket(c, n, a, b, c_);
    let e: Vec<Vector> = (0..n).map(|i| basis(n, i)).collect();
    for t in tuples(n, 3) {
        let (x, y, z) = (&e[t[0]], &e[t[1]], &e[t[2]]);
        if add(&br(x, y, z), &br(y, x, z)).iter().any(|v| !v.is_zero()) {
            return false;
        }
        if add(&add(&br(x, y, z), &br(y, z, x)), &br(z, x, y))
            .iter()
            .any(|v| !v.is_zero())
        {
            return false;
        }
    }
    for t in tuples(n, 5) {
        let (a, b, x, y, z) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
        let lhs = br(a, b, &br(x, y, z));
        let rhs = add(
            &add(&br(&br(a, b, x), y, z), &br(x, &br(a, b, y), z)),
            &br(x, y, &br(a, b, z)),
        );
        if lhs != rhs {
            return false;
        }
    }
    true
}
