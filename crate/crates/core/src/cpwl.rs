//! Continuous piecewise linear functions compatible with a complex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::rat::{self, bigs, Rat};

/// Scaled weight per facet id: `a_pos − a_neg = ω ν`.
pub type Weights = Vec<Rat>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineMap {
    pub a: Vec<Rat>,
    pub b: Rat,
}

impl AffineMap {
    pub fn new(a: Vec<Rat>, b: Rat) -> AffineMap {
        AffineMap { a, b }
    }

    pub fn zero(dim: usize) -> AffineMap {
        AffineMap { a: vec![Rat::zero(); dim], b: Rat::zero() }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        rat::dot(&self.a, x) + &self.b
    }

    pub fn add(&self, o: &AffineMap) -> AffineMap {
        AffineMap { a: rat::add(&self.a, &o.a), b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &AffineMap) -> AffineMap {
        AffineMap { a: rat::sub(&self.a, &o.a), b: &self.b - &o.b }
    }

    pub fn scale(&self, s: &Rat) -> AffineMap {
        AffineMap { a: rat::scale(&self.a, s), b: &self.b * s }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupportSets {
    pub plus: BTreeSet<usize>,
    pub minus: BTreeSet<usize>,
}

impl SupportSets {
    pub fn all(&self) -> BTreeSet<usize> {
        self.plus.union(&self.minus).copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coarsening {
    /// block label per cell
    pub blocks: Vec<usize>,
    pub piece_count: usize,
    pub component_count: usize,
}

#[derive(Debug, Clone)]
pub struct Cpwl {
    pub complex: Arc<Complex>,
    pub pieces: Vec<AffineMap>,
}

impl PartialEq for Cpwl {
    fn eq(&self, other: &Self) -> bool {
        self.same_complex(other) && self.pieces == other.pieces
    }
}

impl Cpwl {
    pub fn new(complex: Arc<Complex>, pieces: Vec<AffineMap>) -> Result<Cpwl> {
        if pieces.len() != complex.cells.len() {
            return Err(Error::DimMismatch { expected: complex.cells.len(), got: pieces.len() });
        }
        for p in &pieces {
            if p.a.len() != complex.dim {
                return Err(Error::WrongDim { expected: complex.dim, got: p.a.len() });
            }
        }
        Ok(Cpwl { complex, pieces })
    }

    pub fn affine(complex: Arc<Complex>, map: AffineMap) -> Cpwl {
        let pieces = vec![map; complex.cells.len()];
        Cpwl { complex, pieces }
    }

    pub fn zero(complex: Arc<Complex>) -> Cpwl {
        let d = complex.dim;
        Cpwl::affine(complex, AffineMap::zero(d))
    }

    /// Pieces read off a pointwise selector evaluated at each cell's interior point.
    pub fn from_pointwise(complex: Arc<Complex>, select: impl Fn(&[Rat]) -> AffineMap) -> Result<Cpwl> {
        let pieces = (0..complex.cells.len())
            .map(|c| {
                complex
                    .interior_point(c)
                    .map(|p| select(p))
                    .ok_or_else(|| Error::Invalid(format!("cell {c} has no interior point")))
            })
            .collect::<Result<Vec<_>>>()?;
        Cpwl::new(complex, pieces)
    }

    pub fn same_complex(&self, other: &Cpwl) -> bool {
        Arc::ptr_eq(&self.complex, &other.complex) || self.complex == other.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim
    }

    /// Facets across which the pieces do not glue continuously.
    pub fn validate_continuity(&self) -> Vec<usize> {
        self.complex.facets.iter().filter(|f| self.facet_lambda(f.id).is_none()).map(|f| f.id).collect()
    }

    pub fn is_continuous(&self) -> bool {
        self.validate_continuity().is_empty()
    }

    fn facet_lambda(&self, facet: usize) -> Option<Rat> {
        let f = &self.complex.facets[facet];
        let nu = bigs(&f.normal);
        let d = self.pieces[f.pos].sub(&self.pieces[f.neg]);
        let lambda = rat::dot(&d.a, &nu) / rat::big(&rat::norm_sq(&f.normal));
        let ok = rat::scale(&nu, &lambda) == d.a && d.b == -(&lambda * &f.offset);
        ok.then_some(lambda)
    }

    pub fn evaluate(&self, x: &[Rat]) -> Rat {
        let c = self.complex.locate(x).expect("complete complex covers every point");
        self.pieces[c].eval(x)
    }

    pub fn weights(&self) -> Weights {
        self.complex
            .facets
            .iter()
            .map(|f| {
                let d = rat::sub(&self.pieces[f.pos].a, &self.pieces[f.neg].a);
                rat::dot_int(&f.normal, &d) / rat::big(&rat::norm_sq(&f.normal))
            })
            .collect()
    }

    /// The function with the given weights whose piece on `base` is zero.
    pub fn from_weights(omega: &[Rat], complex: Arc<Complex>, base: usize) -> Result<Cpwl> {
        if omega.len() != complex.facets.len() {
            return Err(Error::DimMismatch { expected: complex.facets.len(), got: omega.len() });
        }
        for face in &complex.faces2 {
            if !face.closed || !rat::is_zero_vec(&complex.star_residual(face, omega)) {
                return Err(Error::NotBalanced { face: face.id });
            }
        }
        let n = complex.cells.len();
        let mut adj: Vec<Vec<usize>> = vec![vec![]; n];
        for f in &complex.facets {
            adj[f.pos].push(f.id);
            adj[f.neg].push(f.id);
        }
        let mut pieces: Vec<Option<AffineMap>> = vec![None; n];
        pieces[base] = Some(AffineMap::zero(complex.dim));
        let mut queue = VecDeque::from([base]);
        while let Some(q) = queue.pop_front() {
            let from = pieces[q].clone().unwrap();
            for &fid in &adj[q] {
                let f = &complex.facets[fid];
                let p = f.other(q);
                if pieces[p].is_some() {
                    continue;
                }
                let s = if p == f.pos { omega[fid].clone() } else { -omega[fid].clone() };
                let step = AffineMap { a: rat::scale(&bigs(&f.normal), &s), b: -(&s * &f.offset) };
                pieces[p] = Some(from.add(&step));
                queue.push_back(p);
            }
        }
        let pieces = pieces
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invalid("dual graph is disconnected".into()))?;
        let out = Cpwl { complex, pieces };
        let w = out.weights();
        if !out.is_continuous() || w != omega {
            let face = out
                .complex
                .facets
                .iter()
                .find(|f| out.facet_lambda(f.id).as_ref() != Some(&omega[f.id]))
                .and_then(|f| out.complex.faces2.iter().find(|t| t.star.iter().any(|&(_, g)| g == f.id)))
                .map(|t| t.id)
                .unwrap_or(0);
            return Err(Error::NotBalanced { face });
        }
        Ok(out)
    }

    pub fn is_convex(&self) -> bool {
        self.weights().iter().all(|w| !w.is_negative())
    }

    pub fn is_strictly_compatible(&self) -> bool {
        self.weights().iter().all(|w| w.is_positive())
    }

    pub fn supports(&self) -> SupportSets {
        supports_of(&self.weights())
    }

    pub fn coarsen(&self) -> Result<Coarsening> {
        let w = self.weights();
        if w.iter().any(|x| x.is_negative()) {
            return Err(Error::NotConvex);
        }
        Ok(self.blocks(&w))
    }

    /// Linearity-region partition; an upper bound on the pieces of a nonconvex function.
    pub fn blocks(&self, w: &[Rat]) -> Coarsening {
        let n = self.complex.cells.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for f in &self.complex.facets {
            if w[f.id].is_zero() {
                let (a, b) = (find(&mut parent, f.pos), find(&mut parent, f.neg));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut labels = BTreeMap::new();
        let blocks: Vec<usize> = (0..n)
            .map(|c| {
                let r = find(&mut parent, c);
                let k = labels.len();
                *labels.entry(r).or_insert(k)
            })
            .collect();
        let components: BTreeSet<&AffineMap> = self.pieces.iter().collect();
        Coarsening { blocks, piece_count: labels.len(), component_count: components.len() }
    }

    /// Number of linearity regions when convex; otherwise the cell count as an upper bound.
    pub fn piece_count(&self) -> (usize, bool) {
        match self.coarsen() {
            Ok(c) => (c.piece_count, true),
            Err(_) => (self.blocks(&self.weights()).piece_count, false),
        }
    }

    pub fn add(&self, o: &Cpwl) -> Result<Cpwl> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Cpwl) -> Result<Cpwl> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, s: &Rat) -> Cpwl {
        Cpwl { complex: self.complex.clone(), pieces: self.pieces.iter().map(|p| p.scale(s)).collect() }
    }

    pub fn add_affine(&self, m: &AffineMap) -> Cpwl {
        Cpwl { complex: self.complex.clone(), pieces: self.pieces.iter().map(|p| p.add(m)).collect() }
    }

    /// Same function with the piece on `base` subtracted everywhere.
    pub fn gauge(&self, base: usize) -> Cpwl {
        let m = self.pieces[base].clone();
        Cpwl { complex: self.complex.clone(), pieces: self.pieces.iter().map(|p| p.sub(&m)).collect() }
    }

    /// Equality up to adding an affine function.
    pub fn eq_mod_affine(&self, o: &Cpwl) -> bool {
        self.same_complex(o) && self.gauge(0).pieces == o.gauge(0).pieces
    }

    /// Same function on a refinement, given the parent cell of each new cell.
    pub fn pull_back(&self, refined: Arc<Complex>, ancestry: &[usize]) -> Cpwl {
        let pieces = ancestry.iter().map(|&p| self.pieces[p].clone()).collect();
        Cpwl { complex: refined, pieces }
    }

    /// Same function on another complex on which it is affine cellwise (checked by continuity).
    pub fn transfer(&self, target: Arc<Complex>) -> Result<Cpwl> {
        let out = Cpwl::from_pointwise(target, |x| {
            let c = self.complex.locate(x).expect("complete complex covers every point");
            self.pieces[c].clone()
        })?;
        if !out.is_continuous() {
            return Err(Error::Invalid("function is not affine on the cells of the target complex".into()));
        }
        Ok(out)
    }

    fn zip(&self, o: &Cpwl, op: impl Fn(&AffineMap, &AffineMap) -> AffineMap) -> Result<Cpwl> {
        if !self.same_complex(o) {
            return Err(Error::ComplexMismatch);
        }
        let pieces = self.pieces.iter().zip(&o.pieces).map(|(a, b)| op(a, b)).collect();
        Ok(Cpwl { complex: self.complex.clone(), pieces })
    }
}

pub fn supports_of(w: &[Rat]) -> SupportSets {
    let mut s = SupportSets::default();
    for (i, x) in w.iter().enumerate() {
        if x.is_positive() {
            s.plus.insert(i);
        } else if x.is_negative() {
            s.minus.insert(i);
        }
    }
    s
}

/// Whether `g_prime` coarsens `g` (support inclusion), and whether the inclusion is strict.
pub fn is_coarsening(g_prime: &Cpwl, g: &Cpwl) -> Result<(bool, bool)> {
    if !g_prime.same_complex(g) {
        return Err(Error::ComplexMismatch);
    }
    if !g_prime.is_convex() || !g.is_convex() {
        return Err(Error::NotConvex);
    }
    let a = g_prime.supports().plus;
    let b = g.supports().plus;
    let holds = a.is_subset(&b);
    Ok((holds, holds && a != b))
}
