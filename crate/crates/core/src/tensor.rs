//! Dense multilinear maps with exact coefficients.
//!
//! A tensor with dims `[d0, d1, .., dk]` stores a k-linear map whose output
//! lives in a `d0`-dimensional space; entry `[o, i1, .., ik]` is the
//! coefficient of `e_o` in the image of `(e_i1, .., e_ik)`. Storage is
//! row-major with the output index outermost. All products skip zero entries.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<Rational>,
}

fn product(d: &[usize]) -> usize {
    d.iter().product()
}

impl Tensor {
    pub fn zeros(dims: &[usize]) -> Self {
        assert!(!dims.is_empty(), "a tensor needs an output dimension");
        Tensor {
            dims: dims.to_vec(),
            data: vec![Rational::ZERO; product(dims)],
        }
    }

    pub fn from_data(dims: &[usize], data: Vec<Rational>) -> Result<Self> {
        if dims.is_empty() || data.len() != product(dims) {
            return Err(Error::Shape(format!(
                "{} entries for tensor dims {:?}",
                data.len(),
                dims
            )));
        }
        Ok(Tensor {
            dims: dims.to_vec(),
            data,
        })
    }

    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> Rational) -> Self {
        let mut t = Tensor::zeros(dims);
        let mut idx = vec![0; dims.len()];
        for k in 0..t.data.len() {
            t.data[k] = f(&idx);
            for p in (0..dims.len()).rev() {
                idx[p] += 1;
                if idx[p] < dims[p] {
                    break;
                }
                idx[p] = 0;
            }
        }
        t
    }

    pub fn from_sparse(dims: &[usize], v: &SparseVec) -> Self {
        let mut t = Tensor::zeros(dims);
        for (k, x) in v {
            t.data[*k] = x.clone();
        }
        t
    }

    /// A matrix viewed as a linear map (dims `[rows, cols]`).
    pub fn from_matrix(m: &Matrix) -> Self {
        Tensor {
            dims: vec![m.rows(), m.cols()],
            data: m.entries().to_vec(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.arity() != 1 {
            return Err(Error::Shape(format!(
                "arity {} tensor is not a matrix",
                self.arity()
            )));
        }
        Matrix::from_entries(self.dims[0], self.dims[1], self.data.clone())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn out_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn arity(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn arg_dims(&self) -> &[usize] {
        &self.dims[1..]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[Rational] {
        &self.data
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut f = 0;
        for (i, d) in idx.iter().zip(&self.dims) {
            debug_assert!(i < d);
            f = f * d + i;
        }
        f
    }

    pub fn multi(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for p in (0..self.dims.len()).rev() {
            idx[p] = flat % self.dims[p];
            flat /= self.dims[p];
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        &self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Rational) {
        let f = self.flat(idx);
        self.data[f] = v;
    }

    pub fn add_at(&mut self, idx: &[usize], v: &Rational) {
        let f = self.flat(idx);
        self.data[f] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.data.iter().enumerate().filter(|(_, x)| !x.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.nonzeros().count()
    }

    pub fn to_sparse(&self) -> SparseVec {
        self.nonzeros().map(|(k, x)| (k, x.clone())).collect()
    }

    /// Output coordinates at a fixed argument tuple.
    pub fn column(&self, args: &[usize]) -> Vec<Rational> {
        let mut idx = Vec::with_capacity(args.len() + 1);
        idx.push(0);
        idx.extend_from_slice(args);
        (0..self.out_dim())
            .map(|o| {
                idx[0] = o;
                self.get(&idx).clone()
            })
            .collect()
    }

    /// Argument tuples with a nonzero value, in lexicographic order.
    pub fn nonzero_arg_tuples(&self) -> Vec<Vec<usize>> {
        let inner = product(self.arg_dims());
        let mut hit = vec![false; inner];
        for (k, _) in self.nonzeros() {
            hit[k % inner] = true;
        }
        let probe = Tensor {
            dims: self.dims.clone(),
            data: Vec::new(),
        };
        hit.iter()
            .enumerate()
            .filter(|(_, h)| **h)
            .map(|(k, _)| probe.multi(k)[1..].to_vec())
            .collect()
    }

    fn same_shape(&self, other: &Tensor) {
        assert_eq!(self.dims, other.dims, "tensor shapes differ");
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        self.same_shape(other);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Tensor {
            dims: self.dims.clone(),
            data,
        }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        self.same_shape(other);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Tensor {
            dims: self.dims.clone(),
            data,
        }
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        self.same_shape(other);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &Tensor) {
        self.same_shape(other);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
    }

    pub fn scale(&self, s: &Rational) -> Tensor {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> Tensor {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    /// Precomposes argument `slot` with `m` (old dim x new dim).
    pub fn apply_in(&self, slot: usize, m: &Matrix) -> Tensor {
        let old = self.dims[slot + 1];
        assert_eq!(
            m.rows(),
            old,
            "operator rows must match the argument dimension"
        );
        let new = m.cols();
        let post = product(&self.dims[slot + 2..]);
        let mut dims = self.dims.clone();
        dims[slot + 1] = new;
        let mut out = Tensor::zeros(&dims);
        let cols: Vec<Vec<(usize, &Rational)>> = (0..old)
            .map(|p| {
                (0..new)
                    .map(|j| (j, m.get(p, j)))
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        for (k, v) in self.nonzeros() {
            let pi = k % post;
            let rest = k / post;
            let p = rest % old;
            let pre = rest / old;
            for (j, x) in &cols[p] {
                out.data[(pre * new + j) * post + pi] += v * *x;
            }
        }
        out
    }

    /// Precomposes every argument slot with `m`.
    pub fn apply_in_all(&self, m: &Matrix) -> Tensor {
        (0..self.arity()).fold(self.clone(), |t, s| t.apply_in(s, m))
    }

    /// Postcomposes the output with `m` (new dim x old dim).
    pub fn apply_out(&self, m: &Matrix) -> Tensor {
        let old = self.dims[0];
        assert_eq!(
            m.cols(),
            old,
            "operator columns must match the output dimension"
        );
        let new = m.rows();
        let inner = product(&self.dims[1..]);
        let mut dims = self.dims.clone();
        dims[0] = new;
        let mut out = Tensor::zeros(&dims);
        let rows: Vec<Vec<(usize, &Rational)>> = (0..old)
            .map(|a| {
                (0..new)
                    .map(|b| (b, m.get(b, a)))
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        for (k, v) in self.nonzeros() {
            let a = k / inner;
            let i = k % inner;
            for (b, x) in &rows[a] {
                out.data[b * inner + i] += v * *x;
            }
        }
        out
    }

    /// Feeds the output of `g` into argument `slot`; the arguments of `g`
    /// take the place of that slot.
    pub fn compose_in(&self, slot: usize, g: &Tensor) -> Tensor {
        let ds = self.dims[slot + 1];
        assert_eq!(
            g.out_dim(),
            ds,
            "inner output must match the argument dimension"
        );
        let post = product(&self.dims[slot + 2..]);
        let gsize = product(g.arg_dims());
        let mut dims = self.dims[..slot + 1].to_vec();
        dims.extend_from_slice(g.arg_dims());
        dims.extend_from_slice(&self.dims[slot + 2..]);
        let mut out = Tensor::zeros(&dims);
        let mut groups: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); ds];
        for (k, v) in g.nonzeros() {
            groups[k / gsize].push((k % gsize, v));
        }
        for (k, v) in self.nonzeros() {
            let pi = k % post;
            let rest = k / post;
            let p = rest % ds;
            let pre = rest / ds;
            for (gi, gv) in &groups[p] {
                out.data[(pre * gsize + gi) * post + pi] += v * *gv;
            }
        }
        out
    }

    /// Permutes arguments: old argument `k` becomes argument `labels[k]`.
    pub fn rearrange(&self, labels: &[usize]) -> Tensor {
        let n = self.arity();
        assert_eq!(labels.len(), n, "one label per argument");
        if labels.iter().enumerate().all(|(k, &l)| k == l) {
            return self.clone();
        }
        let mut dims = vec![0; n + 1];
        dims[0] = self.dims[0];
        for (k, &l) in labels.iter().enumerate() {
            dims[l + 1] = self.dims[k + 1];
        }
        let mut strides = vec![1; n + 1];
        for p in (0..n).rev() {
            strides[p] = strides[p + 1] * dims[p + 1];
        }
        let mut out = Tensor::zeros(&dims);
        for (k, v) in self.nonzeros() {
            let mut rest = k;
            let mut f = 0;
            for p in (0..n).rev() {
                let i = rest % self.dims[p + 1];
                rest /= self.dims[p + 1];
                f += i * strides[labels[p] + 1];
            }
            f += rest * strides[0];
            out.data[f] = v.clone();
        }
        out
    }

    /// Nests `inner` into argument `pos` of `outer` and orders arguments
    /// by label. `outer_labels` names the remaining outer arguments in
    /// order, `inner_labels` the arguments of `inner`.
    pub fn nest(
        outer: &Tensor,
        pos: usize,
        outer_labels: &[usize],
        inner: &Tensor,
        inner_labels: &[usize],
    ) -> Tensor {
        assert_eq!(outer_labels.len() + 1, outer.arity());
        assert_eq!(inner_labels.len(), inner.arity());
        let mut labels = outer_labels[..pos].to_vec();
        labels.extend_from_slice(inner_labels);
        labels.extend_from_slice(&outer_labels[pos..]);
        outer.compose_in(pos, inner).rearrange(&labels)
    }

    /// Evaluates on vectors, one per argument.
    pub fn eval(&self, args: &[&[Rational]]) -> Vec<Rational> {
        assert_eq!(args.len(), self.arity());
        let mut t = self.clone();
        for a in args.iter().rev() {
            let m = Matrix::from_entries(a.len(), 1, a.to_vec()).expect("column vector");
            let s = t.arity() - 1;
            t = t.apply_in(s, &m);
            t.dims.pop();
        }
        t.data
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor{:?}{{", self.dims)?;
        let mut first = true;
        for (k, v) in self.nonzeros() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{:?}: {}", self.multi(k), v)?;
        }
        write!(f, "}}")
    }
}
