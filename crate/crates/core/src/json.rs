//! JSON formats; rationals travel as `"p/q"` strings.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::complex::{Cell, Complex, Facet, Halfspace};
use crate::constructions::HingeTerm;
use crate::cpwl::{AffineMap, Cpwl};
use crate::error::{Error, Result};
use crate::nn::{Layer, ReluNetwork};
use crate::rat::{fmt_rat, parse_rat, Rat};
use crate::submodular::{SetFunction, WeightedGraph};

fn bad(what: &str) -> Error {
    Error::Parse(format!("expected {what}"))
}

pub fn rat_to_value(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn rat_from_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().unwrap().into())),
        _ => Err(bad("a rational as \"p/q\"")),
    }
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_value).collect())
}

fn rats_from(v: &Value) -> Result<Vec<Rat>> {
    v.as_array().ok_or_else(|| bad("an array of rationals"))?.iter().map(rat_from_value).collect()
}

fn ints_value(v: &[BigInt]) -> Vec<Value> {
    v.iter().map(|x| Value::String(x.to_string())).collect()
}

fn usize_of(v: &Value, key: &str) -> Result<usize> {
    v.get(key).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(&format!("integer field {key:?}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(&format!("field {key:?}")))
}

fn integral(r: Rat) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(bad("an integer normal"))
    }
}

pub fn complex_to_json(c: &Complex) -> Value {
    let cells: Vec<Value> = c
        .cells
        .iter()
        .map(|cell| {
            let ineqs: Vec<Value> = cell
                .ineqs
                .iter()
                .map(|h| {
                    let mut row = ints_value(&h.normal);
                    row.push(rat_to_value(&h.offset));
                    Value::Array(row)
                })
                .collect();
            json!({"id": cell.id, "ineqs": ineqs})
        })
        .collect();
    let facets: Vec<Value> = c
        .facets
        .iter()
        .map(|f| json!({"id": f.id, "normal": ints_value(&f.normal), "offset": rat_to_value(&f.offset), "pos": f.pos, "neg": f.neg}))
        .collect();
    json!({"dim": c.dim, "cells": cells, "facets": facets})
}

/// Rows `[ν…, c]` mean `⟨ν, x⟩ ≥ c`. Without `"facets"` the adjacency is computed.
/// The result is validated before it is returned.
pub fn complex_from_json(v: &Value) -> Result<Complex> {
    checked(complex_from_json_raw(v)?)
}

/// Parse without validating supplied facets.
pub fn complex_from_json_raw(v: &Value) -> Result<Complex> {
    let dim = usize_of(v, "dim")?;
    let mut cells = Vec::new();
    for (i, cv) in field(v, "cells")?.as_array().ok_or_else(|| bad("an array of cells"))?.iter().enumerate() {
        let id = cv.get("id").and_then(Value::as_u64).map_or(i, |x| x as usize);
        if id != i {
            return Err(Error::Invalid(format!("cell ids must be 0..m in order, found {id} at {i}")));
        }
        let mut ineqs = Vec::new();
        for row in field(cv, "ineqs")?.as_array().ok_or_else(|| bad("an array of inequalities"))? {
            let r = rats_from(row)?;
            if r.len() != dim + 1 {
                return Err(Error::DimMismatch { expected: dim + 1, got: r.len() });
            }
            ineqs.push(Halfspace::new(&r[..dim], r[dim].clone())?);
        }
        cells.push(Cell { id, ineqs });
    }
    let Some(fv) = v.get("facets") else {
        return Complex::assemble(dim, cells.into_iter().map(|c| c.ineqs).collect());
    };
    let mut facets = Vec::new();
    for (i, f) in fv.as_array().ok_or_else(|| bad("an array of facets"))?.iter().enumerate() {
        let normal = rats_from(field(f, "normal")?)?.into_iter().map(integral).collect::<Result<Vec<_>>>()?;
        let (pos, neg) = (usize_of(f, "pos")?, usize_of(f, "neg")?);
        if normal.len() != dim || pos >= cells.len() || neg >= cells.len() {
            return Err(Error::Invalid(format!("facet {i} is malformed")));
        }
        facets.push(Facet { id: i, normal, offset: rat_from_value(field(f, "offset")?)?, pos, neg });
    }
    Ok(Complex::from_parts(dim, cells, facets))
}

fn checked(c: Complex) -> Result<Complex> {
    let rep = c.validate();
    if rep.is_valid() {
        Ok(c)
    } else {
        Err(Error::Invalid(format!("invalid complex: {:?}", rep.violations)))
    }
}

pub fn function_to_json(f: &Cpwl) -> Value {
    let mut pieces = Map::new();
    for (i, p) in f.pieces.iter().enumerate() {
        pieces.insert(i.to_string(), json!({"a": rats(&p.a), "b": rat_to_value(&p.b)}));
    }
    json!({"complex": complex_to_json(&f.complex), "pieces": pieces})
}

/// `"complex"` is inline or a path resolved against `base`.
pub fn function_from_json(v: &Value, base: Option<&Path>) -> Result<Cpwl> {
    let cv = field(v, "complex")?;
    let complex = match cv {
        Value::String(p) => {
            let path = base.map_or_else(|| Path::new(p).to_path_buf(), |b| b.join(p));
            complex_from_json(&read_json(&path)?)?
        }
        _ => complex_from_json(cv)?,
    };
    function_on(Arc::new(complex), v)
}

/// Pieces of a function JSON placed on an already loaded complex.
pub fn function_on(complex: Arc<Complex>, v: &Value) -> Result<Cpwl> {
    let pv = field(v, "pieces")?.as_object().ok_or_else(|| bad("a map of pieces"))?;
    let mut pieces: Vec<Option<AffineMap>> = vec![None; complex.cells.len()];
    for (k, p) in pv {
        let id: usize = k.parse().map_err(|_| bad("numeric cell ids"))?;
        let slot = pieces.get_mut(id).ok_or_else(|| Error::Invalid(format!("no cell {id}")))?;
        let a = rats_from(field(p, "a")?)?;
        if a.len() != complex.dim {
            return Err(Error::DimMismatch { expected: complex.dim, got: a.len() });
        }
        *slot = Some(AffineMap::new(a, rat_from_value(field(p, "b")?)?));
    }
    let pieces = pieces
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| Error::Invalid(format!("missing piece for cell {i}"))))
        .collect::<Result<Vec<_>>>()?;
    let f = Cpwl::new(complex, pieces)?;
    if !f.is_continuous() {
        return Err(Error::Invalid(format!("discontinuous across facets {:?}", f.validate_continuity())));
    }
    Ok(f)
}

pub fn weights_to_json(w: &[Rat]) -> Value {
    Value::Object(w.iter().enumerate().map(|(i, x)| (i.to_string(), rat_to_value(x))).collect())
}

pub fn weights_from_json(v: &Value, facets: usize) -> Result<Vec<Rat>> {
    let m = v.as_object().ok_or_else(|| bad("a map of weights"))?;
    let mut w = vec![Rat::from_integer(0.into()); facets];
    for (k, x) in m {
        let id: usize = k.parse().map_err(|_| bad("numeric facet ids"))?;
        *w.get_mut(id).ok_or_else(|| Error::Invalid(format!("no facet {id}")))? = rat_from_value(x)?;
    }
    Ok(w)
}

pub fn set_function_to_json(f: &SetFunction) -> Value {
    let values: Map<String, Value> = f.values.iter().enumerate().map(|(m, v)| (m.to_string(), rat_to_value(v))).collect();
    json!({"n": f.n, "values": values})
}

pub fn set_function_from_json(v: &Value) -> Result<SetFunction> {
    let n = usize_of(v, "n")?;
    if n >= usize::BITS as usize {
        return Err(Error::Invalid("ground set too large".into()));
    }
    let m = field(v, "values")?.as_object().ok_or_else(|| bad("a map of values"))?;
    let mut vals: BTreeMap<usize, Rat> = BTreeMap::new();
    for (k, x) in m {
        vals.insert(k.parse().map_err(|_| bad("bitmask keys"))?, rat_from_value(x)?);
    }
    let values = (0..1usize << n)
        .map(|mask| vals.remove(&mask).ok_or_else(|| Error::Invalid(format!("missing value for mask {mask}"))))
        .collect::<Result<Vec<_>>>()?;
    if !vals.is_empty() {
        return Err(Error::Invalid("bitmask out of range".into()));
    }
    SetFunction::new(n, values)
}

pub fn graph_to_json(g: &WeightedGraph) -> Value {
    let edges: Vec<Value> = g.edges.iter().map(|(u, v, w)| json!([u, v, rat_to_value(w)])).collect();
    json!({"n": g.n, "edges": edges})
}

pub fn graph_from_json(v: &Value) -> Result<WeightedGraph> {
    let n = usize_of(v, "n")?;
    let mut edges = Vec::new();
    for e in field(v, "edges")?.as_array().ok_or_else(|| bad("an array of edges"))? {
        let e = e.as_array().filter(|e| e.len() == 3).ok_or_else(|| bad("edges [u, v, w]"))?;
        let (u, w) = (e[0].as_u64().ok_or_else(|| bad("vertex index"))? as usize, e[1].as_u64().ok_or_else(|| bad("vertex index"))? as usize);
        if u >= n || w >= n || u == w {
            return Err(Error::Invalid(format!("bad edge ({u}, {w})")));
        }
        edges.push((u, w, rat_from_value(&e[2])?));
    }
    Ok(WeightedGraph { n, edges })
}

pub fn network_to_json(net: &ReluNetwork) -> Value {
    let layers: Vec<Value> = net
        .layers
        .iter()
        .map(|l| json!({"W": l.w.iter().map(|r| rats(r)).collect::<Vec<_>>(), "b": rats(&l.b), "relu": l.relu}))
        .collect();
    json!({"input_dim": net.input_dim, "layers": layers})
}

/// Lossy float export.
pub fn network_to_json_f64(net: &ReluNetwork) -> Value {
    use crate::rat::to_f64;
    let layers: Vec<Value> = net
        .layers
        .iter()
        .map(|l| {
            json!({
                "W": l.w.iter().map(|r| r.iter().map(to_f64).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "b": l.b.iter().map(to_f64).collect::<Vec<_>>(),
                "relu": l.relu,
            })
        })
        .collect();
    json!({"dtype": "f64", "input_dim": net.input_dim, "layers": layers})
}

pub fn network_from_json(v: &Value) -> Result<ReluNetwork> {
    let mut layers = Vec::new();
    for l in field(v, "layers")?.as_array().ok_or_else(|| bad("an array of layers"))? {
        let w = field(l, "W")?.as_array().ok_or_else(|| bad("a weight matrix"))?.iter().map(rats_from).collect::<Result<Vec<_>>>()?;
        let b = rats_from(field(l, "b")?)?;
        let relu = field(l, "relu")?.as_bool().ok_or_else(|| bad("a boolean relu flag"))?;
        layers.push(Layer { w, b, relu });
    }
    let first_cols = layers.first().and_then(|l| l.w.first()).map(Vec::len);
    let input_dim = match v.get("input_dim") {
        Some(d) => d.as_u64().ok_or_else(|| bad("integer input_dim"))? as usize,
        None => first_cols.ok_or_else(|| bad("input_dim"))?,
    };
    let mut cols = input_dim;
    for (i, l) in layers.iter().enumerate() {
        if l.w.len() != l.b.len() || l.w.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid(format!("layer {i} has inconsistent shape")));
        }
        cols = l.b.len();
    }
    if layers.is_empty() {
        return Err(Error::Invalid("network has no layers".into()));
    }
    Ok(ReluNetwork { input_dim, layers })
}

/// `{"dim": n, "terms": [{"lambda", "a", "b", "c", "d"}]}` for `Σ λ·max(⟨a,x⟩+b, ⟨c,x⟩+d)`.
pub fn hinge_terms_from_json(v: &Value) -> Result<(usize, Vec<HingeTerm>)> {
    let dim = usize_of(v, "dim")?;
    let mut terms = Vec::new();
    for t in field(v, "terms")?.as_array().ok_or_else(|| bad("an array of terms"))? {
        let (a, c) = (rats_from(field(t, "a")?)?, rats_from(field(t, "c")?)?);
        if a.len() != dim || c.len() != dim {
            return Err(Error::DimMismatch { expected: dim, got: a.len().max(c.len()) });
        }
        terms.push(HingeTerm {
            lambda: rat_from_value(field(t, "lambda")?)?,
            a,
            b: rat_from_value(field(t, "b")?)?,
            c,
            d: rat_from_value(field(t, "d")?)?,
        });
    }
    Ok((dim, terms))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
