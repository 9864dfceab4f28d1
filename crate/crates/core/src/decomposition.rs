//! Decomposition polyhedra: pairs of convex functions `(g, h)` with `f = g − h`
//! on a fixed complex, described through their facet weights.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::caps::Caps;
use crate::complex::Complex;
use crate::cpwl::{supports_of, Cpwl, Weights};
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{self, HPolyhedron, LinearProgram, LpResult, Row};
use crate::rat::{self, Rat};

/// `{ω_g balanced : ω_g ≥ 0, ω_g ≥ ω_f}`. Inequality `2σ` is `ω_g(σ) ≥ 0`,
/// inequality `2σ + 1` is `ω_g(σ) ≥ ω_f(σ)`.
#[derive(Debug, Clone)]
pub struct DecompPolyhedron {
    pub f: Cpwl,
    pub wf: Weights,
    pub hrep: HPolyhedron,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompPoint {
    pub g: Cpwl,
    pub h: Cpwl,
    pub wg: Weights,
    pub wh: Weights,
}

impl DecompPoint {
    /// Lift a weight vector for `g`; `h` is pinned to zero on cell 0 and `g = f + h`.
    pub fn from_wg(f: &Cpwl, wg: Weights) -> Result<DecompPoint> {
        let wf = f.weights();
        let wh: Weights = rat::sub(&wg, &wf);
        let h = Cpwl::from_weights(&wh, f.complex.clone(), 0)?;
        let g = f.add(&h)?;
        Ok(DecompPoint { g, h, wg, wh })
    }

    /// `(pieces of g, pieces of h)` from the coarsening of each convex part.
    pub fn pieces(&self) -> Result<(usize, usize)> {
        Ok((self.g.coarsen()?.piece_count, self.h.coarsen()?.piece_count))
    }

    pub fn is_feasible(&self, f: &Cpwl) -> bool {
        let wf = f.weights();
        self.wg.iter().all(|x| !x.is_negative())
            && self.wh.iter().all(|x| !x.is_negative())
            && rat::sub(&self.wg, &self.wh) == wf
            && self.g.sub(&self.h).map(|d| d == *f).unwrap_or(false)
    }
}

fn lower_bounds(wf: &[Rat]) -> Vec<Row> {
    let m = wf.len();
    let mut rows = Vec::with_capacity(2 * m);
    for (s, w) in wf.iter().enumerate() {
        let mut e = vec![Rat::zero(); m];
        e[s] = Rat::one();
        rows.push((e.clone(), Rat::zero()));
        rows.push((e, w.clone()));
    }
    rows
}

pub fn build(f: &Cpwl) -> DecompPolyhedron {
    let wf = f.weights();
    let m = wf.len();
    let equalities = f.complex.balancing_rows().into_iter().map(|r| (r, Rat::zero())).collect();
    let hrep = HPolyhedron { vars: m, equalities, inequalities: lower_bounds(&wf) };
    DecompPolyhedron { f: f.clone(), wf, hrep }
}

/// Minimizer of the all-ones functional on `ω_g`.
pub fn solve_reduced(f: &Cpwl) -> Result<DecompPoint> {
    solve_reduced_with(f, &vec![Rat::one(); f.complex.facets.len()])
}

/// Minimizer of `Σ c_σ ω_g(σ)` for a strictly positive `c`.
pub fn solve_reduced_with(f: &Cpwl, objective: &[Rat]) -> Result<DecompPoint> {
    if objective.len() != f.complex.facets.len() {
        return Err(Error::DimMismatch { expected: f.complex.facets.len(), got: objective.len() });
    }
    if objective.iter().any(|c| !c.is_positive()) {
        return Err(Error::Invalid("objective must be strictly positive on every facet".into()));
    }
    let d = build(f);
    let lp = LinearProgram {
        vars: d.hrep.vars,
        equalities: vec![],
        inequalities: d.hrep.inequalities.clone(),
        objective: objective.to_vec(),
    };
    match lp::solve_in(f.complex.weight_space(), &lp) {
        LpResult::Optimal { point, .. } => DecompPoint::from_wg(f, point),
        _ => Err(Error::Infeasible),
    }
}

/// All vertices of the decomposition polyhedron, sorted by `ω_g`.
pub fn enumerate(f: &Cpwl) -> Result<Vec<DecompPoint>> {
    enumerate_with(f, &Caps::from_env())
}

pub fn enumerate_with(f: &Cpwl, caps: &Caps) -> Result<Vec<DecompPoint>> {
    let d = build(f);
    let param = f.complex.weight_space();
    Caps::check("inequality count", d.hrep.inequalities.len(), caps.enum_ineqs)?;
    Caps::check("dimension after equality elimination", param.dim(), caps.enum_dim)?;
    let verts = lp::enumerate_in(param, &d.hrep.inequalities)?;
    if verts.is_empty() {
        return Err(Error::Infeasible);
    }
    verts.into_iter().map(|w| DecompPoint::from_wg(f, w)).collect()
}

/// Vertex test by the rank of the tight constraints.
pub fn is_vertex(f: &Cpwl, p: &DecompPoint) -> Result<bool> {
    if !p.is_feasible(f) {
        return Err(Error::Infeasible);
    }
    let d = build(f);
    Ok(lp::rank_of_tight_set(&d.hrep, &p.wg)? == d.hrep.vars)
}

/// True iff no nonzero convex `φ` with `ω_φ ≤ ω_g` and `ω_φ ≤ ω_h` exists.
pub fn is_reduced(p: &DecompPoint) -> bool {
    let c = &p.g.complex;
    let m = c.facets.len();
    if m == 0 {
        return true;
    }
    let mut inequalities = Vec::with_capacity(3 * m);
    for s in 0..m {
        let mut e = vec![Rat::zero(); m];
        e[s] = Rat::one();
        inequalities.push((e.clone(), Rat::zero()));
        let neg: Vec<Rat> = e.iter().map(|x| -x).collect();
        inequalities.push((neg.clone(), -p.wg[s].clone()));
        inequalities.push((neg, -p.wh[s].clone()));
    }
    let mut equalities: Vec<Row> = c.balancing_rows().into_iter().map(|r| (r, Rat::zero())).collect();
    equalities.push((vec![Rat::one(); m], Rat::one()));
    let lp = LinearProgram { vars: m, equalities, inequalities, objective: vec![Rat::zero(); m] };
    !matches!(lp::solve(&lp), LpResult::Optimal { .. })
}

/// Pareto-minimal vertices by `(pieces of g, pieces of h)`; ties kept.
pub fn minimal_set(f: &Cpwl) -> Result<Vec<DecompPoint>> {
    minimal_set_with(f, &Caps::from_env())
}

pub fn minimal_set_with(f: &Cpwl, caps: &Caps) -> Result<Vec<DecompPoint>> {
    let verts = enumerate_with(f, caps)?;
    let counts = verts.iter().map(|p| p.pieces()).collect::<Result<Vec<_>>>()?;
    let mut keep: Vec<((usize, usize), DecompPoint)> = verts
        .into_iter()
        .zip(&counts)
        .filter(|(_, &(a, b))| !counts.iter().any(|&(c, d)| c <= a && d <= b && (c, d) != (a, b)))
        .map(|(p, &k)| (k, p))
        .collect();
    keep.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.wg.cmp(&y.1.wg)));
    Ok(keep.into_iter().map(|(_, p)| p).collect())
}

/// Support certificate for a unique vertex: `supp(g) = supp⁺(f)` and `supp(h) = supp⁻(f)`.
pub fn unique_vertex_certificate(f: &Cpwl, g: &Cpwl, h: &Cpwl) -> Result<bool> {
    if !f.same_complex(g) || !f.same_complex(h) {
        return Err(Error::ComplexMismatch);
    }
    if g.sub(h)? != *f {
        return Err(Error::DecompositionMismatch);
    }
    if !g.is_convex() || !h.is_convex() {
        return Ok(false);
    }
    let sf = f.supports();
    Ok(g.supports().plus == sf.plus && h.supports().plus == sf.minus)
}

/// Balanced weights with every entry at least one, if the complex is regular.
pub fn regular_witness(c: &Complex) -> Option<Weights> {
    let m = c.facets.len();
    let inequalities = (0..m)
        .map(|s| {
            let mut e = vec![Rat::zero(); m];
            e[s] = Rat::one();
            (e, Rat::one())
        })
        .collect();
    let lp = LinearProgram { vars: m, equalities: vec![], inequalities, objective: vec![Rat::one(); m] };
    match lp::solve_in(c.weight_space(), &lp) {
        LpResult::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

pub fn is_regular(c: &Complex) -> bool {
    regular_witness(c).is_some()
}

/// `(f + λ g*, λ g*)` for a strictly convex witness `g*` and the least admissible `λ`.
pub fn decompose_via_regular(f: &Cpwl) -> Result<DecompPoint> {
    let w = regular_witness(&f.complex).ok_or(Error::NotRegular)?;
    let wf = f.weights();
    let lambda = wf
        .iter()
        .zip(&w)
        .map(|(a, b)| -a / b)
        .fold(Rat::zero(), |acc, x| if x > acc { x } else { acc });
    let wh = rat::scale(&w, &lambda);
    DecompPoint::from_wg(f, rat::add(&wf, &wh))
}

/// Smallest face of the decomposition polyhedron containing `p`, as the set of tight inequalities.
pub fn tight_constraints(f: &Cpwl, p: &DecompPoint) -> BTreeSet<usize> {
    lp::tight_set(&build(f).hrep.inequalities, &p.wg).into_iter().collect()
}

/// Positive part of the weights of `f`: the candidate unique vertex.
pub fn positive_part(f: &Cpwl) -> Weights {
    f.weights().iter().map(|w| if w.is_positive() { w.clone() } else { Rat::zero() }).collect()
}

/// Supports of a point's parts, as facet sets.
pub fn part_supports(p: &DecompPoint) -> (BTreeSet<usize>, BTreeSet<usize>) {
    (supports_of(&p.wg).plus, supports_of(&p.wh).plus)
}

/// Same decomposition re-expressed on a refinement.
pub fn pull_back(p: &DecompPoint, refined: Arc<Complex>, ancestry: &[usize]) -> DecompPoint {
    let g = p.g.pull_back(refined.clone(), ancestry);
    let h = p.h.pull_back(refined, ancestry);
    let (wg, wh) = (g.weights(), h.weights());
    DecompPoint { g, h, wg, wh }
}

/// Dimension of the weight space of balanced functions modulo affine ones.
pub fn weight_space_dim(c: &Complex) -> usize {
    linalg::nullspace(&c.balancing_rows(), c.facets.len()).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpwl::AffineMap;
    use crate::fixtures;
    use crate::rat::{int, ints};

    #[test]
    fn median_polyhedron_shape() {
        let d = build(&fixtures::median());
        assert_eq!(d.hrep.vars, 6);
        assert_eq!(d.hrep.inequalities.len(), 12);
        assert_eq!(d.hrep.equalities.len(), 2);
    }

    #[test]
    fn median_reduced_solution() {
        let f = fixtures::median();
        let p = solve_reduced(&f).unwrap();
        assert_eq!(p.wg, positive_part(&f));
        let neg_min = fixtures::max_of(f.complex.clone(), &[AffineMap::new(ints(&[-1, 0]), int(0)), AffineMap::new(ints(&[0, -1]), int(0)), AffineMap::zero(2)]);
        assert!(p.g.eq_mod_affine(&neg_min));
        assert!(p.h.eq_mod_affine(&fixtures::max_x1_x2_0(f.complex.clone())));
        assert!(p.is_feasible(&f));
        assert!(is_reduced(&p));
        assert!(is_vertex(&f, &p).unwrap());
        assert_eq!(p.pieces().unwrap(), (3, 3));
        assert!(unique_vertex_certificate(&f, &p.g, &p.h).unwrap());
        let e = enumerate(&f).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0], p);
        assert_eq!(minimal_set(&f).unwrap(), vec![p]);
    }

    #[test]
    fn convex_and_concave_inputs() {
        let c = fixtures::median().complex;
        let g = fixtures::max_x1_x2_0(c.clone());
        let p = solve_reduced(&g).unwrap();
        assert_eq!(p.g, g);
        assert_eq!(p.h, Cpwl::zero(c));
        assert!(is_reduced(&p));
        assert_eq!(minimal_set(&g).unwrap()[0].pieces().unwrap(), (3, 1));

        let hp = Arc::new(fixtures::halfplanes());
        let relu = fixtures::max_of(hp.clone(), &[AffineMap::new(ints(&[1, 0]), int(0)), AffineMap::zero(2)]);
        let p = solve_reduced(&relu.scale(&int(-1))).unwrap();
        assert!(p.g.eq_mod_affine(&Cpwl::zero(hp)));
        assert!(p.h.eq_mod_affine(&relu));
    }

    #[test]
    fn affine_input() {
        let c = fixtures::median().complex;
        let f = Cpwl::affine(c, AffineMap::new(ints(&[2, 3]), int(1)));
        let e = enumerate(&f).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].wg.iter().all(|w| w.is_zero()));
    }

    #[test]
    fn non_reduced_pair() {
        let f = fixtures::median();
        let psi = regular_witness(&f.complex).unwrap();
        let p = DecompPoint::from_wg(&f, rat::add(&positive_part(&f), &psi)).unwrap();
        assert!(p.is_feasible(&f));
        assert!(!is_reduced(&p));
        assert!(!is_vertex(&f, &p).unwrap());
        let q = decompose_via_regular(&f).unwrap();
        assert!(q.is_feasible(&f));
    }

    #[test]
    fn regularity() {
        assert!(is_regular(&fixtures::six_fan()));
        assert!(is_regular(&Complex::braid(3).unwrap()));
        let w = regular_witness(&fixtures::halfplanes()).unwrap();
        assert_eq!(w, vec![int(1)]);
    }

    #[test]
    fn certificate_mismatch() {
        let f = fixtures::median();
        let g = fixtures::max_x1_x2_0(f.complex.clone());
        assert_eq!(unique_vertex_certificate(&f, &g, &g), Err(Error::DecompositionMismatch));
    }

    #[test]
    fn one_dimensional_kinks() {
        let f = fixtures::line_function(&ints(&[0, 1, 2]), &ints(&[1, -1, 1])).unwrap();
        let e = enumerate(&f).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].wg, ints(&[1, 0, 1]));
        assert_eq!(e[0].wh, ints(&[0, 1, 0]));
    }
}
