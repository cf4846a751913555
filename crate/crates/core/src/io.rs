//! JSON payloads.
//!
//! Rationals are strings `"p/q"` or `"p"`; plain JSON integers are also
//! accepted on input. Tensors are nested arrays in storage order, output
//! index outermost. Readers check shapes but not axioms, so that checkers
//! can report on invalid structures.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::NLieCochain;
use crate::error::{Error, Result};
use crate::extensions::{AbelianExtension, ExtensionCocycle};
use crate::linalg::Matrix;
use crate::operators::LinearOperator;
use crate::rational::Rational;
use crate::tensor::Tensor;
use crate::twosys::{CrossedModule, NijenhuisTwo, TwoSystem};

fn parse_err(what: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {msg}"))
}

/// Parses text, keeping serde's line and column in the message.
pub fn parse(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(what, e))
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| parse_err(what, e))
}

fn rational(v: &Value, what: &str) -> Result<Rational> {
    from_value(v, what)
}

pub fn tensor_to_json(t: &Tensor) -> Value {
    fn go(t: &Tensor, depth: usize, offset: usize) -> Value {
        let dims = t.dims();
        if depth == dims.len() {
            return Value::String(t.data()[offset].to_string());
        }
        let stride: usize = dims[depth + 1..].iter().product();
        Value::Array(
            (0..dims[depth])
                .map(|i| go(t, depth + 1, offset + i * stride))
                .collect(),
        )
    }
    go(t, 0, 0)
}

/// Reads a nested array with the given dims.
pub fn tensor_from_json(v: &Value, dims: &[usize], what: &str) -> Result<Tensor> {
    fn go(
        v: &Value,
        dims: &[usize],
        path: &mut Vec<usize>,
        out: &mut Vec<Rational>,
        what: &str,
    ) -> Result<()> {
        if dims.is_empty() {
            out.push(rational(v, &format!("{what} at {path:?}"))?);
            return Ok(());
        }
        let arr = v
            .as_array()
            .ok_or_else(|| parse_err(what, format!("expected an array at {path:?}")))?;
        if arr.len() != dims[0] {
            return Err(parse_err(
                what,
                format!(
                    "expected length {} at {path:?}, found {}",
                    dims[0],
                    arr.len()
                ),
            ));
        }
        for (i, x) in arr.iter().enumerate() {
            path.push(i);
            go(x, &dims[1..], path, out, what)?;
            path.pop();
        }
        Ok(())
    }
    let mut data = Vec::with_capacity(dims.iter().product());
    go(v, dims, &mut Vec::new(), &mut data, what)?;
    Tensor::from_data(dims, data)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|r| {
                Value::Array(
                    r.into_iter()
                        .map(|x| Value::String(x.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
    let t = tensor_from_json(v, &[rows, cols], what)?;
    Matrix::from_entries(rows, cols, t.data().to_vec())
}

/// A square matrix whose size is read from the payload.
fn square_from_json(v: &Value, what: &str) -> Result<Matrix> {
    let n = v
        .as_array()
        .map(Vec::len)
        .ok_or_else(|| parse_err(what, "expected an array of rows"))?;
    matrix_from_json(v, n, n, what)
}

#[derive(Debug, Serialize, Deserialize)]
struct BracketEntry {
    i: usize,
    j: usize,
    k: usize,
    out: BTreeMap<usize, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LtsPayload {
    dim: usize,
    bracket: Vec<BracketEntry>,
}

pub fn lts_to_json(c: &Tensor) -> Value {
    let n = c.out_dim();
    let mut entries = Vec::new();
    for args in c.nonzero_arg_tuples() {
        let col = c.column(&args);
        let out = col
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(m, x)| (m, Value::String(x.to_string())))
            .collect();
        entries.push(BracketEntry {
            i: args[0],
            j: args[1],
            k: args[2],
            out,
        });
    }
    serde_json::to_value(LtsPayload {
        dim: n,
        bracket: entries,
    })
    .expect("serializable")
}

/// Reads a bracket; omitted triples are zero, repeated triples add up.
pub fn lts_from_json(v: &Value) -> Result<Tensor> {
    let p: LtsPayload = from_value(v, "system")?;
    let n = p.dim;
    let mut c = Tensor::zeros(&[n, n, n, n]);
    for e in &p.bracket {
        for (&m, x) in &e.out {
            if [e.i, e.j, e.k, m].iter().any(|&idx| idx >= n) {
                return Err(parse_err(
                    "system",
                    format!(
                        "index out of range in entry ({}, {}, {}) -> {m}",
                        e.i, e.j, e.k
                    ),
                ));
            }
            c.add_at(&[m, e.i, e.j, e.k], &rational(x, "system coefficient")?);
        }
    }
    Ok(c)
}

#[derive(Debug, Serialize, Deserialize)]
struct OperatorPayload {
    dim: usize,
    matrix: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<Rational>,
}

pub fn operator_to_json(op: &LinearOperator) -> Value {
    serde_json::to_value(OperatorPayload {
        dim: op.dim(),
        matrix: matrix_to_json(&op.matrix),
        weight: op.weight.clone(),
    })
    .expect("serializable")
}

pub fn operator_from_json(v: &Value) -> Result<LinearOperator> {
    let p: OperatorPayload = from_value(v, "operator")?;
    let m = matrix_from_json(&p.matrix, p.dim, p.dim, "operator matrix")?;
    Ok(LinearOperator {
        matrix: m,
        weight: p.weight,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct RepPayload {
    theta: Value,
    #[serde(rename = "Nv", default, skip_serializing_if = "Option::is_none")]
    nv: Option<Value>,
}

pub fn representation_to_json(theta: &Tensor, nv: Option<&Matrix>) -> Value {
    serde_json::to_value(RepPayload {
        theta: tensor_to_json(theta),
        nv: nv.map(matrix_to_json),
    })
    .expect("serializable")
}

/// `(theta, Nv)` over a base of dimension `n`.
pub fn representation_from_json(v: &Value, n: usize) -> Result<(Tensor, Option<Matrix>)> {
    let p: RepPayload = from_value(v, "representation")?;
    let m = p
        .theta
        .as_array()
        .map(Vec::len)
        .ok_or_else(|| parse_err("theta", "expected an array"))?;
    let theta = tensor_from_json(&p.theta, &[m, m, n, n], "theta")?;
    let nv =
        p.nv.as_ref()
            .map(|x| matrix_from_json(x, m, m, "Nv"))
            .transpose()?;
    Ok((theta, nv))
}

#[derive(Debug, Serialize, Deserialize)]
struct PairPayload {
    degree: usize,
    f: Value,
    #[serde(default)]
    g: Option<Value>,
}

pub fn pair_to_json(p: &NLieCochain) -> Value {
    serde_json::to_value(PairPayload {
        degree: p.degree(),
        f: tensor_to_json(p.f.tensor()),
        g: p.g.as_ref().map(|g| tensor_to_json(g.tensor())),
    })
    .expect("serializable")
}

/// The raw tensors of a pair over `(n, m)`; constraints are not checked.
pub fn pair_from_json(v: &Value, n: usize, m: usize) -> Result<(Tensor, Option<Tensor>)> {
    let p: PairPayload = from_value(v, "cochain pair")?;
    if p.degree.is_multiple_of(2) {
        return Err(parse_err(
            "cochain pair",
            format!("degree {} is not odd", p.degree),
        ));
    }
    let dims = |d: usize| {
        let mut v = vec![m];
        v.extend(std::iter::repeat_n(n, d));
        v
    };
    let f = tensor_from_json(&p.f, &dims(p.degree), "f")?;
    let g = match (p.degree, &p.g) {
        (1, None) | (1, Some(Value::Null)) => None,
        (1, Some(_)) => {
            return Err(parse_err(
                "cochain pair",
                "degree 1 has no second component",
            ))
        }
        (_, Some(g)) => Some(tensor_from_json(g, &dims(p.degree - 2), "g")?),
        (_, None) => return Err(parse_err("cochain pair", "missing second component g")),
    };
    Ok((f, g))
}

/// Base system with operator, fiber data, and the extension cocycle.
#[derive(Debug, Clone)]
pub struct ExtensionInput {
    pub bracket: Tensor,
    pub n: Matrix,
    pub theta: Tensor,
    pub nv: Matrix,
    pub psi: Tensor,
    pub chi: Matrix,
}

#[derive(Debug, Serialize, Deserialize)]
struct BasePayload {
    dim: usize,
    bracket: Vec<BracketEntry>,
    #[serde(rename = "N")]
    n: Value,
}

#[derive(Debug, Serialize, Deserialize)]
struct FiberPayload {
    vdim: usize,
    #[serde(rename = "Nv")]
    nv: Value,
    theta: Value,
}

#[derive(Debug, Serialize, Deserialize)]
struct ExtensionPayload {
    base: BasePayload,
    fiber: FiberPayload,
    psi: Value,
    chi: Value,
}

pub fn extension_from_json(v: &Value) -> Result<ExtensionInput> {
    let p: ExtensionPayload = from_value(v, "extension")?;
    let lts = serde_json::to_value(LtsPayload {
        dim: p.base.dim,
        bracket: p.base.bracket,
    })
    .expect("serializable");
    let bracket = lts_from_json(&lts)?;
    let (n, m) = (p.base.dim, p.fiber.vdim);
    Ok(ExtensionInput {
        bracket,
        n: matrix_from_json(&p.base.n, n, n, "base N")?,
        theta: tensor_from_json(&p.fiber.theta, &[m, m, n, n], "fiber theta")?,
        nv: matrix_from_json(&p.fiber.nv, m, m, "fiber Nv")?,
        psi: tensor_from_json(&p.psi, &[m, n, n, n], "psi")?,
        chi: matrix_from_json(&p.chi, m, n, "chi")?,
    })
}

pub fn extension_to_json(ext: &AbelianExtension, data: &ExtensionCocycle) -> Value {
    let ctx = ext.context();
    let lts: LtsPayload =
        serde_json::from_value(lts_to_json(ctx.lts().bracket())).expect("own payload");
    let chi = data.chi.tensor().to_matrix().expect("degree-1 cochain");
    serde_json::to_value(ExtensionPayload {
        base: BasePayload {
            dim: lts.dim,
            bracket: lts.bracket,
            n: matrix_to_json(ctx.n()),
        },
        fiber: FiberPayload {
            vdim: ctx.vdim(),
            nv: matrix_to_json(ctx.nv()),
            theta: tensor_to_json(ctx.rep().theta()),
        },
        psi: tensor_to_json(data.psi.tensor()),
        chi: matrix_to_json(&chi),
    })
    .expect("serializable")
}

#[derive(Debug, Serialize, Deserialize)]
struct TwoSystemPayload {
    dim0: usize,
    dim1: usize,
    h: Value,
    l3_000: Value,
    l3_t1slot0: Value,
    l3_t1slot1: Value,
    l3_t1slot2: Value,
    l5: Value,
    #[serde(rename = "N0", default, skip_serializing_if = "Option::is_none")]
    n0: Option<Value>,
    #[serde(rename = "N1", default, skip_serializing_if = "Option::is_none")]
    n1: Option<Value>,
    #[serde(rename = "N2", default, skip_serializing_if = "Option::is_none")]
    n2: Option<Value>,
}

pub fn two_system_to_json(g: &TwoSystem, op: Option<&NijenhuisTwo>) -> Value {
    serde_json::to_value(TwoSystemPayload {
        dim0: g.dim0(),
        dim1: g.dim1(),
        h: matrix_to_json(&g.h),
        l3_000: tensor_to_json(&g.l3_000),
        l3_t1slot0: tensor_to_json(&g.slot0),
        l3_t1slot1: tensor_to_json(&g.slot1),
        l3_t1slot2: tensor_to_json(&g.slot2),
        l5: tensor_to_json(&g.l5),
        n0: op.map(|o| matrix_to_json(&o.n0)),
        n1: op.map(|o| matrix_to_json(&o.n1)),
        n2: op.map(|o| tensor_to_json(&o.n2)),
    })
    .expect("serializable")
}

/// The structure and, when all of `N0`, `N1`, `N2` are present, its operator.
pub fn two_system_from_json(v: &Value) -> Result<(TwoSystem, Option<NijenhuisTwo>)> {
    let p: TwoSystemPayload = from_value(v, "2-system")?;
    let (d0, d1) = (p.dim0, p.dim1);
    let g = TwoSystem::new(
        matrix_from_json(&p.h, d0, d1, "h")?,
        tensor_from_json(&p.l3_000, &[d0, d0, d0, d0], "l3_000")?,
        tensor_from_json(&p.l3_t1slot0, &[d1, d1, d0, d0], "l3_t1slot0")?,
        tensor_from_json(&p.l3_t1slot1, &[d1, d0, d1, d0], "l3_t1slot1")?,
        tensor_from_json(&p.l3_t1slot2, &[d1, d0, d0, d1], "l3_t1slot2")?,
        tensor_from_json(&p.l5, &[d1, d0, d0, d0, d0, d0], "l5")?,
    )?;
    let op = match (&p.n0, &p.n1, &p.n2) {
        (Some(a), Some(b), Some(c)) => Some(NijenhuisTwo::new(
            &g,
            matrix_from_json(a, d0, d0, "N0")?,
            matrix_from_json(b, d1, d1, "N1")?,
            tensor_from_json(c, &[d1, d0, d0, d0], "N2")?,
        )?),
        (None, None, None) => None,
        _ => {
            return Err(parse_err(
                "2-system",
                "N0, N1 and N2 must be given together",
            ))
        }
    };
    Ok((g, op))
}

#[derive(Debug, Serialize, Deserialize)]
struct CrossedModulePayload {
    dim0: usize,
    dim1: usize,
    base: Value,
    top: Value,
    h: Value,
    #[serde(rename = "Lambda")]
    lambda: Value,
    #[serde(rename = "N0")]
    n0: Value,
    #[serde(rename = "N1")]
    n1: Value,
}

pub fn crossed_module_to_json(x: &CrossedModule) -> Value {
    serde_json::to_value(CrossedModulePayload {
        dim0: x.dim0(),
        dim1: x.dim1(),
        base: lts_to_json(&x.base),
        top: lts_to_json(&x.top),
        h: matrix_to_json(&x.h),
        lambda: tensor_to_json(&x.lambda),
        n0: matrix_to_json(&x.n0),
        n1: matrix_to_json(&x.n1),
    })
    .expect("serializable")
}

pub fn crossed_module_from_json(v: &Value) -> Result<CrossedModule> {
    let p: CrossedModulePayload = from_value(v, "crossed module")?;
    let (d0, d1) = (p.dim0, p.dim1);
    let base = lts_from_json(&p.base)?;
    let top = lts_from_json(&p.top)?;
    if base.out_dim() != d0 || top.out_dim() != d1 {
        return Err(parse_err(
            "crossed module",
            "bracket dimensions disagree with dim0/dim1",
        ));
    }
    CrossedModule::new(
        base,
        top,
        matrix_from_json(&p.h, d0, d1, "h")?,
        tensor_from_json(&p.lambda, &[d1, d1, d0, d0], "Lambda")?,
        matrix_from_json(&p.n0, d0, d0, "N0")?,
        matrix_from_json(&p.n1, d1, d1, "N1")?,
    )
}

/// A section or other free-standing matrix, given as rows.
pub fn section_from_json(v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    matrix_from_json(v, rows, cols, "section")
}

/// A square matrix given as rows.
pub fn square_matrix_from_json(v: &Value, what: &str) -> Result<Matrix> {
    square_from_json(v, what)
}

/// `{"gamma": matrix}` or `{"gamma": null}`.
pub fn gamma_to_json(gamma: Option<&Matrix>, eta_verified: bool) -> Value {
    json!({ "gamma": gamma.map(matrix_to_json), "eta_verified": eta_verified })
}
