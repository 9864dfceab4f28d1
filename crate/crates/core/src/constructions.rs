//! Named decomposition constructions: hyperplane extension, local maxima,
//! the planar minimal construction, sign splits and order statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::caps::Caps;
use crate::complex::{angle_cmp, Complex, Halfspace, Hyperplane};
use crate::cpwl::{AffineMap, Cpwl};
use crate::decomposition::DecompPoint;
use crate::error::{Error, Result};
use crate::fixtures::argmax;
use crate::lp::{self, LinearProgram, LpResult};
use crate::rat::{self, big, bigs, int, Rat};

fn point_from_parts(g: Cpwl, h: Cpwl) -> DecompPoint {
    let (wg, wh) = (g.weights(), h.weights());
    DecompPoint { g, h, wg, wh }
}

/// Decomposition together with the function it decomposes, on a common complex.
#[derive(Debug, Clone)]
pub struct Construction {
    pub f: Cpwl,
    pub point: DecompPoint,
}

impl Construction {
    fn checked(f: Cpwl, g: Cpwl, h: Cpwl) -> Result<Construction> {
        if g.sub(&h)? != f {
            return Err(Error::DecompositionMismatch);
        }
        Ok(Construction { f, point: point_from_parts(g, h) })
    }
}

/// Common refinement by the hyperplanes of all convex breakpoints; each facet
/// of `g` collects the weights of the convex breakpoints on its hyperplane.
pub fn hyperplane_extension(f: &Cpwl) -> Result<Construction> {
    let wf = f.weights();
    let mut plane_weight: BTreeMap<Hyperplane, Rat> = BTreeMap::new();
    for (s, w) in wf.iter().enumerate() {
        if w.is_positive() {
            *plane_weight.entry(f.complex.facets[s].hyperplane()).or_insert_with(Rat::zero) += w;
        }
    }
    let planes: Vec<Hyperplane> = plane_weight.keys().cloned().collect();
    let (refined, ancestry) = f.complex.refine(&planes)?;
    let refined = Arc::new(refined);
    let fq = f.pull_back(refined.clone(), &ancestry);
    let wg: Vec<Rat> = refined
        .facets
        .iter()
        .map(|s| plane_weight.get(&s.hyperplane()).cloned().unwrap_or_else(Rat::zero))
        .collect();
    let g = Cpwl::from_weights(&wg, refined, 0)?;
    let h = g.sub(&fq)?;
    if !h.is_convex() {
        return Err(Error::NotConvex);
    }
    Construction::checked(fq, g, h)
}

fn min_over(cell: &[Halfspace], dim: usize, obj: &AffineMap) -> Option<Rat> {
    let lp = LinearProgram {
        vars: dim,
        equalities: vec![],
        inequalities: cell.iter().map(|h| (bigs(&h.normal), h.offset.clone())).collect(),
        objective: obj.a.clone(),
    };
    match lp::solve(&lp) {
        LpResult::Optimal { value, .. } => Some(value + &obj.b),
        _ => None,
    }
}

/// `f = min_i max_{j ∈ M_i} f_j` turned into `g = Σ_i max_{M_i} f_j`, `h = max_i (g − g_i)`.
pub fn local_maxima(f: &Cpwl) -> Result<Construction> {
    let c = &f.complex;
    let maps: Vec<AffineMap> = f.pieces.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut groups: Vec<Vec<AffineMap>> = Vec::new();
    for cell in &c.cells {
        let fi = &f.pieces[cell.id];
        let m: Vec<AffineMap> = maps
            .iter()
            .filter(|fj| min_over(&cell.ineqs, c.dim, &fi.sub(fj)).map(|v| !v.is_negative()).unwrap_or(false))
            .cloned()
            .collect();
        groups.push(m);
    }
    let mut planes = BTreeSet::new();
    for (i, a) in maps.iter().enumerate() {
        for b in &maps[i + 1..] {
            let d = a.sub(b);
            if !rat::is_zero_vec(&d.a) {
                planes.insert(Hyperplane::new(&d.a, -d.b)?);
            }
        }
    }
    let planes: Vec<Hyperplane> = planes.into_iter().collect();
    let arr = Arc::new(Complex::arrangement(&planes, c.dim)?);
    let gi = |x: &[Rat]| -> Vec<AffineMap> { groups.iter().map(|m| argmax(m, x).clone()).collect() };
    let sum = |v: &[AffineMap]| v.iter().skip(1).fold(v[0].clone(), |acc, m| acc.add(m));
    let g = Cpwl::from_pointwise(arr.clone(), |x| sum(&gi(x)))?;
    let h = Cpwl::from_pointwise(arr.clone(), |x| {
        let parts = gi(x);
        let total = sum(&parts);
        let rest: Vec<AffineMap> = parts.iter().map(|p| total.sub(p)).collect();
        argmax(&rest, x).clone()
    })?;
    let fa = f.transfer(arr)?;
    Construction::checked(fa, g, h)
}

/// Planar weighted fan: rays in counterclockwise order with scaled weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFan2D {
    pub rays: Vec<[i64; 2]>,
    pub weights: Vec<Rat>,
}

fn rot90(v: [i64; 2]) -> [i64; 2] {
    [-v[1], v[0]]
}

fn primitive2(v: [i64; 2]) -> [i64; 2] {
    let g = num_integer::gcd(v[0], v[1]);
    [v[0] / g, v[1] / g]
}

impl WeightedFan2D {
    /// Sorts rays by angle, merges duplicates and inserts zero-weight rays into gaps of at least π.
    pub fn new(rays: &[[i64; 2]], weights: &[Rat]) -> Result<WeightedFan2D> {
        if rays.len() != weights.len() {
            return Err(Error::DimMismatch { expected: rays.len(), got: weights.len() });
        }
        let mut by_ray: BTreeMap<[i64; 2], Rat> = BTreeMap::new();
        for (r, w) in rays.iter().zip(weights) {
            if *r == [0, 0] {
                return Err(Error::ZeroVector);
            }
            *by_ray.entry(primitive2(*r)).or_insert_with(Rat::zero) += w;
        }
        let mut rays: Vec<[i64; 2]> = by_ray.keys().copied().collect();
        loop {
            rays.sort_by(|a, b| angle_cmp(*a, *b));
            let m = rays.len();
            let gap = (0..m).find(|&i| {
                let (a, b) = (rays[i], rays[(i + 1) % m]);
                m == 1 || a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128 <= 0
            });
            match gap {
                Some(i) => {
                    let fill = rot90(rays[i]);
                    if rays.contains(&fill) {
                        return Err(Error::Invalid("degenerate ray configuration".into()));
                    }
                    rays.push(fill);
                }
                None => break,
            }
            if rays.len() > 64 {
                return Err(Error::Invalid("could not complete the fan".into()));
            }
        }
        if rays.len() < 3 {
            return Err(Error::Invalid("a complete planar fan needs at least 3 rays".into()));
        }
        let weights = rays.iter().map(|r| by_ray.get(r).cloned().unwrap_or_else(Rat::zero)).collect();
        Ok(WeightedFan2D { rays, weights })
    }

    pub fn residual(&self) -> [Rat; 2] {
        let mut s = [Rat::zero(), Rat::zero()];
        for (r, w) in self.rays.iter().zip(&self.weights) {
            s[0] += w * int(r[0]);
            s[1] += w * int(r[1]);
        }
        s
    }

    pub fn is_balanced(&self) -> bool {
        self.residual().iter().all(|x| x.is_zero())
    }

    pub fn complex(&self) -> Result<Complex> {
        Complex::fan2d(&self.rays)
    }

    /// Facet weights on [`WeightedFan2D::complex`], matched by ray.
    pub fn facet_weights(&self, c: &Complex) -> Result<Vec<Rat>> {
        c.facets
            .iter()
            .map(|f| {
                let r = c.ray_of_facet(f.id).ok_or_else(|| Error::Invalid("facet without ray".into()))?;
                let r = [i64::try_from(&r[0]).unwrap(), i64::try_from(&r[1]).unwrap()];
                let k = self.rays.iter().position(|x| *x == r).ok_or_else(|| Error::Invalid("unknown ray".into()))?;
                Ok(self.weights[k].clone())
            })
            .collect()
    }

    /// The function with these weights, zero on cell 0.
    pub fn function(&self) -> Result<Cpwl> {
        if !self.is_balanced() {
            return Err(Error::NotBalanced { face: 0 });
        }
        let c = Arc::new(self.complex()?);
        let w = self.facet_weights(&c)?;
        Cpwl::from_weights(&w, c, 0)
    }
}

#[derive(Debug, Clone)]
pub struct Tran2d {
    pub fan: WeightedFan2D,
    /// inserted or reinforced ray with its closing weight
    pub closing: Option<([i64; 2], Rat)>,
    pub construction: Construction,
}

/// Minimal planar decomposition: positive weights closed by a single extra ray.
pub fn tran2d_minimal(wf: &WeightedFan2D) -> Result<Tran2d> {
    if !wf.is_balanced() {
        return Err(Error::NotBalanced { face: 0 });
    }
    let mut e = [Rat::zero(), Rat::zero()];
    for (r, w) in wf.rays.iter().zip(&wf.weights) {
        if w.is_positive() {
            let q = rot90(*r);
            e[0] -= w * int(q[0]);
            e[1] -= w * int(q[1]);
        }
    }
    let mut rays = wf.rays.clone();
    let mut wf_aug = wf.weights.clone();
    let mut wg: Vec<Rat> = wf.weights.iter().map(|w| if w.is_positive() { w.clone() } else { Rat::zero() }).collect();
    let mut closing = None;
    if !(e[0].is_zero() && e[1].is_zero()) {
        // rot−90 of the closing edge, scaled to a primitive integer ray
        let dir = rat::primitive_normal(&[e[1].clone(), -e[0].clone()])?;
        let v = [i64::try_from(&dir[0]).unwrap(), i64::try_from(&dir[1]).unwrap()];
        let q = rot90(v);
        let weight = if q[0] != 0 { &e[0] / int(q[0]) } else { &e[1] / int(q[1]) };
        match rays.iter().position(|r| *r == v) {
            Some(k) => wg[k] += &weight,
            None => {
                rays.push(v);
                wf_aug.push(Rat::zero());
                wg.push(weight.clone());
            }
        }
        closing = Some((v, weight));
    }
    let fan_f = WeightedFan2D::new(&rays, &wf_aug)?;
    let fan_g = WeightedFan2D::new(&rays, &wg)?;
    if !fan_g.is_balanced() {
        return Err(Error::NotBalanced { face: 0 });
    }
    let f = fan_f.function()?;
    let wgf = fan_g.facet_weights(&f.complex)?;
    let p = DecompPoint::from_wg(&f, wgf)?;
    let construction = Construction::checked(f, p.g, p.h)?;
    Ok(Tran2d { fan: fan_f, closing, construction })
}

/// The arrangement spanned by the breakpoint hyperplanes of `f`, with `f` on it.
pub fn breakpoint_arrangement(f: &Cpwl) -> Result<Cpwl> {
    let w = f.weights();
    let planes: BTreeSet<Hyperplane> =
        f.complex.facets.iter().filter(|s| !w[s.id].is_zero()).map(|s| s.hyperplane()).collect();
    let planes: Vec<Hyperplane> = planes.into_iter().collect();
    let arr = Arc::new(Complex::arrangement(&planes, f.dim())?);
    f.transfer(arr)
}

/// `λ · max(⟨a, x⟩ + b, ⟨c, x⟩ + d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HingeTerm {
    pub lambda: Rat,
    pub a: Vec<Rat>,
    pub b: Rat,
    pub c: Vec<Rat>,
    pub d: Rat,
}

impl HingeTerm {
    pub fn eval(&self, x: &[Rat]) -> Rat {
        let p = rat::dot(&self.a, x) + &self.b;
        let q = rat::dot(&self.c, x) + &self.d;
        &self.lambda * if p > q { p } else { q }
    }
}

/// Split a signed sum of two-term maxima by the sign of the merged coefficient per hyperplane.
pub fn sign_split(terms: &[HingeTerm], dim: usize) -> Result<Construction> {
    let mut affine = AffineMap::zero(dim);
    let mut kappa: BTreeMap<Hyperplane, Rat> = BTreeMap::new();
    for t in terms {
        if t.a.len() != dim || t.c.len() != dim {
            return Err(Error::WrongDim { expected: dim, got: t.a.len().max(t.c.len()) });
        }
        // λ max(p, q) = λ q + λ max(p − q, 0) and max(ℓ, 0) = κ max(ℓ̂, 0) or κ (max(ℓ̂, 0) − ℓ̂)
        affine = affine.add(&AffineMap::new(t.c.clone(), t.d.clone()).scale(&t.lambda));
        let mu = rat::sub(&t.a, &t.c);
        let beta = &t.b - &t.d;
        if rat::is_zero_vec(&mu) {
            if beta.is_positive() {
                affine = affine.add(&AffineMap::new(vec![Rat::zero(); dim], &beta * &t.lambda));
            }
            continue;
        }
        let (nu, sign) = rat::canonical_normal(&mu)?;
        let k = mu.iter().position(|x| !x.is_zero()).unwrap();
        let scale = (&mu[k] / big(&nu[k])).abs();
        let offset = -(&beta / &scale);
        let plane = Hyperplane { normal: nu.clone(), offset: offset.clone() };
        let coef = &t.lambda * &scale;
        if sign < 0 {
            let lhat = AffineMap::new(bigs(&nu), -offset.clone());
            affine = affine.sub(&lhat.scale(&coef));
        }
        *kappa.entry(plane).or_insert_with(Rat::zero) += coef;
    }
    kappa.retain(|_, k| !k.is_zero());
    let planes: Vec<Hyperplane> = kappa.keys().cloned().collect();
    let arr = Arc::new(Complex::arrangement(&planes, dim)?);
    let hinge_sum = |x: &[Rat], positive: bool| -> AffineMap {
        let mut m = AffineMap::zero(dim);
        for (p, k) in &kappa {
            if k.is_positive() != positive || !p.value(x).is_positive() {
                continue;
            }
            let k = if positive { k.clone() } else { -k.clone() };
            m = m.add(&AffineMap::new(bigs(&p.normal), -p.offset.clone()).scale(&k));
        }
        m
    };
    let g = Cpwl::from_pointwise(arr.clone(), |x| affine.add(&hinge_sum(x, true)))?;
    let h = Cpwl::from_pointwise(arr.clone(), |x| hinge_sum(x, false))?;
    let f = Cpwl::from_pointwise(arr, |x| {
        let mut m = affine.clone();
        for (p, k) in &kappa {
            if p.value(x).is_positive() {
                m = m.add(&AffineMap::new(bigs(&p.normal), -p.offset.clone()).scale(k));
            }
        }
        m
    })?;
    let out = Construction::checked(f, g, h)?;
    for t in terms {
        debug_assert!(out.f.complex.interior_point(0).map(|x| t.eval(x)).is_some());
    }
    Ok(out)
}

/// Value of a signed sum of hinge terms.
pub fn eval_terms(terms: &[HingeTerm], x: &[Rat]) -> Rat {
    terms.iter().map(|t| t.eval(x)).sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Sum of the `k` largest coordinates.
pub fn top_k_sum(x: &[Rat], k: usize) -> AffineMap {
    let n = x.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| x[j].cmp(&x[i]).then(i.cmp(&j)));
    let mut a = vec![Rat::zero(); n];
    for &i in &idx[..k] {
        a[i] = int(1);
    }
    AffineMap::new(a, Rat::zero())
}

/// The `k`-th largest coordinate on the complex of cells `x_j ≤ x_i ≤ x_l` (`l ∈ U`,
/// `|U| = k − 1`), with `g` the top-`k` sum and `h` the top-`(k−1)` sum.
pub fn order_statistic(n: usize, k: usize) -> Result<Construction> {
    order_statistic_with(n, k, &Caps::from_env())
}

pub fn order_statistic_with(n: usize, k: usize, caps: &Caps) -> Result<Construction> {
    Caps::check("order statistic dimension", n, caps.braid_n)?;
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    let mut cells = Vec::new();
    let mut coords = Vec::new();
    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        for u in subsets(n - 1, k - 1) {
            let upper: BTreeSet<usize> = u.iter().map(|&t| others[t]).collect();
            let mut ineqs = Vec::new();
            for &j in &others {
                let mut v = vec![0i64; n];
                if upper.contains(&j) {
                    v[j] = 1;
                    v[i] = -1;
                } else {
                    v[i] = 1;
                    v[j] = -1;
                }
                ineqs.push(Halfspace::from_ints(&v, Rat::zero())?);
            }
            cells.push(ineqs);
            coords.push(i);
        }
    }
    let c = Arc::new(Complex::assemble(n, cells)?);
    let pieces = coords
        .iter()
        .map(|&i| {
            let mut a = vec![Rat::zero(); n];
            a[i] = int(1);
            AffineMap::new(a, Rat::zero())
        })
        .collect();
    let f = Cpwl::new(c.clone(), pieces)?;
    let g = Cpwl::from_pointwise(c.clone(), |x| top_k_sum(x, k))?;
    let h = Cpwl::from_pointwise(c, |x| top_k_sum(x, k - 1))?;
    Construction::checked(f, g, h)
}

/// `Σ_{i<j} max(x_i, x_j)` on a complex in `R^n`.
pub fn pairwise_max_sum(c: Arc<Complex>) -> Result<Cpwl> {
    let n = c.dim;
    Cpwl::from_pointwise(c, |x| {
        let mut m = AffineMap::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let t = if x[i] >= x[j] { i } else { j };
                m.a[t] += int(1);
            }
        }
        m
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{self, unique_vertex_certificate};
    use crate::fixtures;
    use crate::rat::{frac, ints};

    fn hinge(lambda: Rat, a: &[i64], b: i64) -> HingeTerm {
        HingeTerm { lambda, a: ints(a), b: int(b), c: vec![Rat::zero(); a.len()], d: Rat::zero() }
    }

    #[test]
    fn median_hyperplane_extension() {
        let f = fixtures::median();
        let c = hyperplane_extension(&f).unwrap();
        assert_eq!(c.f.complex.cells.len(), 6);
        assert!(c.point.wg.iter().all(|w| *w == int(1)));
        let expect = sign_split(
            &[hinge(int(1), &[1, -1], 0), hinge(int(1), &[1, 0], 0), hinge(int(1), &[0, 1], 0)],
            2,
        )
        .unwrap();
        let e = expect.point.g.transfer(c.f.complex.clone()).unwrap();
        assert!(c.point.g.eq_mod_affine(&e));
        assert!(c.point.h.is_convex());
    }

    #[test]
    fn median_local_maxima_is_twice_extension() {
        let f = fixtures::median();
        let lm = local_maxima(&f).unwrap();
        let he = hyperplane_extension(&f).unwrap();
        let he_g = he.point.g.transfer(lm.f.complex.clone()).unwrap();
        assert!(lm.point.g.eq_mod_affine(&he_g.scale(&int(2))));
        assert!(lm.point.h.is_convex() && lm.point.g.is_convex());
    }

    #[test]
    fn local_maxima_on_convex_and_two_piece() {
        let c = fixtures::median().complex;
        let g = fixtures::max_x1_x2_0(c);
        let lm = local_maxima(&g).unwrap();
        assert!(lm.point.g.is_convex() && lm.point.h.is_convex());
        let relu = fixtures::max_of(
            Arc::new(fixtures::halfplanes()),
            &[AffineMap::new(ints(&[1, 0]), int(0)), AffineMap::zero(2)],
        );
        let lm = local_maxima(&relu.scale(&int(-1))).unwrap();
        assert!(lm.point.g.is_convex() && lm.point.h.is_convex());
    }

    #[test]
    fn extension_counts_every_facet_on_a_line() {
        // each line carries two convex facets, so every facet collects twice its weight
        let s = sign_split(&[hinge(int(1), &[1, 0], 0), hinge(int(2), &[0, 1], 1)], 2).unwrap();
        let c = hyperplane_extension(&s.f).unwrap();
        assert_eq!(c.point.g.weights(), rat::scale(&c.f.weights(), &int(2)));
        assert!(c.point.h.eq_mod_affine(&c.f));
    }

    #[test]
    fn tran_fixture() {
        let fan = WeightedFan2D::new(&[[1, 0], [0, 1], [1, 2], [2, 1]], &[int(1), int(1), frac(-1, 3), frac(-1, 3)])
            .unwrap();
        assert_eq!(fan.rays.len(), 6);
        assert!(fan.is_balanced());
        let t = tran2d_minimal(&fan).unwrap();
        assert_eq!(t.closing, Some(([-1, -1], int(1))));
        let p = &t.construction.point;
        assert_eq!(p.pieces().unwrap(), (3, 3));
        let reduced = decomposition::solve_reduced(&t.construction.f).unwrap();
        assert_eq!(reduced.wg, p.wg);
    }

    #[test]
    fn tran_convex_and_closed_inputs() {
        let fan = WeightedFan2D::new(&[[1, 0], [0, 1], [-1, -1]], &[int(1), int(1), int(1)]).unwrap();
        let t = tran2d_minimal(&fan).unwrap();
        assert_eq!(t.closing, None);
        assert_eq!(t.construction.point.g, t.construction.f);
        let bad = WeightedFan2D::new(&[[1, 0], [0, 1], [-1, -1]], &[int(1), int(2), int(1)]).unwrap();
        assert!(matches!(tran2d_minimal(&bad), Err(Error::NotBalanced { .. })));
    }

    #[test]
    fn sign_split_examples() {
        let s = sign_split(&[hinge(int(1), &[1, 0], 0), hinge(int(-1), &[0, 1], 0)], 2).unwrap();
        let relu = |v: &[i64]| fixtures::max_of(s.f.complex.clone(), &[AffineMap::new(ints(v), int(0)), AffineMap::zero(2)]);
        assert_eq!(s.point.g, relu(&[1, 0]));
        assert_eq!(s.point.h, relu(&[0, 1]));
        assert!(unique_vertex_certificate(&s.f, &s.point.g, &s.point.h).unwrap());
        let pos = sign_split(&[hinge(int(1), &[1, 0], 0), hinge(int(3), &[1, 1], -2)], 2).unwrap();
        assert_eq!(pos.point.g, pos.f);
        assert!(pos.point.wh.iter().all(|w| w.is_zero()));
        for x in [ints(&[1, 2]), ints(&[-3, 1]), ints(&[0, 5])] {
            let terms = [hinge(int(1), &[1, 0], 0), hinge(int(3), &[1, 1], -2)];
            assert_eq!(pos.f.evaluate(&x), eval_terms(&terms, &x));
        }
    }

    #[test]
    fn sign_split_merges_opposite_orientations() {
        // max(x,0) − max(−x,0) = x
        let s = sign_split(&[hinge(int(1), &[1], 0), hinge(int(-1), &[-1], 0)], 1).unwrap();
        assert_eq!(s.f.complex.cells.len(), 1);
        assert_eq!(s.f.evaluate(&ints(&[-4])), int(-4));
    }

    #[test]
    fn order_statistics() {
        let c = order_statistic(3, 2).unwrap();
        assert_eq!(c.f.complex.cells.len(), 6);
        assert!(c.f.complex.validate().is_valid());
        assert!(unique_vertex_certificate(&c.f, &c.point.g, &c.point.h).unwrap());
        let c4 = order_statistic(4, 2).unwrap();
        assert_eq!((c4.f.complex.cells.len(), c4.f.complex.facets.len()), (12, 18));
        assert_eq!(c4.point.g.coarsen().unwrap().component_count, 6);
        assert_eq!(c4.point.h.coarsen().unwrap().component_count, 4);
        let k1 = order_statistic(3, 1).unwrap();
        assert_eq!(k1.point.g, k1.f);
        assert!(k1.point.h.pieces.iter().all(|p| *p == AffineMap::zero(3)));
        for x in [ints(&[3, 1, 2]), ints(&[0, 0, 5]), ints(&[-1, 4, 4])] {
            let mut s = x.clone();
            s.sort();
            assert_eq!(c.f.evaluate(&x), s[1]);
        }
    }
}
