//! Set functions as CPWL functions on the braid fan via the Lovász extension.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::caps::Caps;
use crate::complex::{permutations, Complex};
use crate::cpwl::{AffineMap, Cpwl};
use crate::decomposition::{self, DecompPoint};
use crate::error::{Error, Result};
use crate::rat::{int, Rat};

/// Values indexed by bitmask (`bit i` set iff `i ∈ S`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    pub n: usize,
    pub values: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, Rat)>,
}

impl SetFunction {
    pub fn new(n: usize, values: Vec<Rat>) -> Result<SetFunction> {
        Caps::check("set function ground set", n, Caps::from_env().setfn_n)?;
        if values.len() != 1 << n {
            return Err(Error::DimMismatch { expected: 1 << n, got: values.len() });
        }
        Ok(SetFunction { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> Rat) -> SetFunction {
        SetFunction { n, values: (0..1usize << n).map(f).collect() }
    }

    pub fn get(&self, mask: usize) -> &Rat {
        &self.values[mask]
    }

    /// `F − F(∅)` together with the removed constant.
    pub fn normalized(&self) -> (SetFunction, Rat) {
        let c = self.values[0].clone();
        (SetFunction { n: self.n, values: self.values.iter().map(|v| v - &c).collect() }, c)
    }

    pub fn sub(&self, o: &SetFunction) -> Result<SetFunction> {
        if self.n != o.n {
            return Err(Error::DimMismatch { expected: self.n, got: o.n });
        }
        Ok(SetFunction { n: self.n, values: self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect() })
    }

    /// `F(S) = F(∅) + Σ_{i∈S} (F({i}) − F(∅))` for all `S`.
    pub fn is_modular(&self) -> bool {
        let e = &self.values[0];
        (0..1usize << self.n).all(|m| {
            let s: Rat = (0..self.n).filter(|i| m >> i & 1 == 1).map(|i| &self.values[1 << i] - e).sum();
            self.values[m] == s + e
        })
    }

    pub fn eq_mod_modular(&self, o: &SetFunction) -> bool {
        self.sub(o).map(|d| d.is_modular()).unwrap_or(false)
    }
}

fn braid_cache() -> &'static Mutex<BTreeMap<usize, Arc<Complex>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<Complex>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Shared braid fan; cell `id` is the permutation `permutations(n)[id]` read as `x_{π(1)} ≤ … ≤ x_{π(n)}`.
pub fn braid_complex(n: usize) -> Result<Arc<Complex>> {
    Caps::check("braid ground set", n, Caps::from_env().braid_n)?;
    if let Some(c) = braid_cache().lock().unwrap().get(&n) {
        return Ok(c.clone());
    }
    let c = Arc::new(Complex::braid(n)?);
    braid_cache().lock().unwrap().insert(n, c.clone());
    Ok(c)
}

fn mask_of(idx: &[usize]) -> usize {
    idx.iter().fold(0, |m, &i| m | 1 << i)
}

/// Affine piece on the chamber where `order` lists coordinates from largest to smallest.
fn chamber_map(f: &SetFunction, order: &[usize]) -> AffineMap {
    let mut a = vec![Rat::zero(); f.n];
    let mut prev = 0usize;
    for &i in order {
        let cur = prev | 1 << i;
        a[i] = &f.values[cur] - &f.values[prev];
        prev = cur;
    }
    AffineMap::new(a, f.values[0].clone())
}

pub fn lovasz(f: &SetFunction) -> Result<Cpwl> {
    if f.n < 2 {
        return Err(Error::Invalid("the braid fan needs n ≥ 2".into()));
    }
    let c = braid_complex(f.n)?;
    let pieces = permutations(f.n)
        .into_iter()
        .map(|p| {
            let desc: Vec<usize> = p.into_iter().rev().collect();
            chamber_map(f, &desc)
        })
        .collect();
    Cpwl::new(c, pieces)
}

/// Sort-based evaluation of the Lovász extension without building the fan.
pub fn lovasz_eval(f: &SetFunction, x: &[Rat]) -> Rat {
    let mut order: Vec<usize> = (0..f.n).collect();
    order.sort_by(|&i, &j| x[j].cmp(&x[i]).then(i.cmp(&j)));
    chamber_map(f, &order).eval(x)
}

pub fn indicator(n: usize, mask: usize) -> Vec<Rat> {
    (0..n).map(|i| if mask >> i & 1 == 1 { Rat::one() } else { Rat::zero() }).collect()
}

/// `F(S) = f(1_S)` for a function on the braid fan.
pub fn to_set_function(f: &Cpwl) -> Result<SetFunction> {
    let n = f.dim();
    if n < 2 || n > Caps::from_env().braid_n {
        return Err(Error::ComplexMismatch);
    }
    let c = braid_complex(n)?;
    if !Arc::ptr_eq(&f.complex, &c) && *f.complex != *c {
        return Err(Error::ComplexMismatch);
    }
    Ok(SetFunction::from_fn(n, |m| f.evaluate(&indicator(n, m))))
}

/// Local criterion `F(A+i) + F(A+j) ≥ F(A+i+j) + F(A)`.
pub fn is_submodular(f: &SetFunction) -> bool {
    let n = f.n;
    (0..1usize << n).all(|a| {
        (0..n).filter(|i| a >> i & 1 == 0).all(|i| {
            (i + 1..n)
                .filter(|j| a >> j & 1 == 0)
                .all(|j| &f.values[a | 1 << i] + &f.values[a | 1 << j] >= &f.values[a | 1 << i | 1 << j] + &f.values[a])
        })
    })
}

/// Exhaustive check over all pairs `A, B`.
pub fn is_submodular_brute(f: &SetFunction) -> bool {
    let m = 1usize << f.n;
    (0..m).all(|a| (0..m).all(|b| &f.values[a] + &f.values[b] >= &f.values[a | b] + &f.values[a & b]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompFlags {
    pub vertex: bool,
    pub reduced: bool,
    /// support certificate of a unique vertex
    pub irreducible: bool,
}

#[derive(Debug, Clone)]
pub struct SetDecomposition {
    pub g: SetFunction,
    pub h: SetFunction,
    pub point: DecompPoint,
    pub flags: DecompFlags,
}

/// `F = G − H` with `G`, `H` submodular, from the reduced decomposition of the Lovász extension.
pub fn decompose_set_function(f: &SetFunction) -> Result<SetDecomposition> {
    let lf = lovasz(f)?;
    let p = decomposition::solve_reduced(&lf)?;
    let flags = DecompFlags {
        vertex: decomposition::is_vertex(&lf, &p)?,
        reduced: decomposition::is_reduced(&p),
        irreducible: decomposition::unique_vertex_certificate(&lf, &p.g, &p.h)?,
    };
    Ok(SetDecomposition { g: to_set_function(&p.g)?, h: to_set_function(&p.h)?, point: p, flags })
}

pub fn cut_function(g: &WeightedGraph) -> SetFunction {
    SetFunction::from_fn(g.n, |m| {
        g.edges
            .iter()
            .filter(|(u, v, _)| (m >> u & 1) != (m >> v & 1))
            .map(|(_, _, w)| w.clone())
            .sum()
    })
}

/// Cut functions of the positive edges and of the negated negative edges.
pub fn cut_sign_split(g: &WeightedGraph) -> (SetFunction, SetFunction) {
    let pos = WeightedGraph { n: g.n, edges: g.edges.iter().filter(|e| e.2 > Rat::zero()).cloned().collect() };
    let neg = WeightedGraph {
        n: g.n,
        edges: g.edges.iter().filter(|e| e.2 < Rat::zero()).map(|(u, v, w)| (*u, *v, -w)).collect(),
    };
    (cut_function(&pos), cut_function(&neg))
}

/// Distinct greedy vertices of the base polytope of a submodular function.
pub fn greedy_vertices(g: &SetFunction) -> Result<BTreeSet<Vec<Rat>>> {
    if !is_submodular(g) {
        return Err(Error::NotSubmodular);
    }
    let (g, _) = g.normalized();
    Ok(permutations(g.n).into_iter().map(|order| chamber_map(&g, &order).a).collect())
}

/// Random set function with small integer values, for tests and demos.
pub fn random_set_function(n: usize, rng: &mut impl rand::Rng) -> SetFunction {
    SetFunction { n, values: (0..1usize << n).map(|_| int(rng.gen_range(-5..=5))).collect() }
}

pub fn subset_mask(idx: &[usize]) -> usize {
    mask_of(idx)
}
