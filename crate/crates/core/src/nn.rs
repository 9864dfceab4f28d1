//! Exact ReLU network emission for CPWL functions.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cpwl::{AffineMap, Cpwl};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::rat::{frac, to_f64, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub w: Vec<Vec<Rat>>,
    pub b: Vec<Rat>,
    pub relu: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReluNetwork {
    pub input_dim: usize,
    pub layers: Vec<Layer>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkStats {
    /// number of affine layers
    pub depth: usize,
    /// widest hidden layer
    pub width: usize,
    /// total hidden units
    pub size: usize,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checked: usize,
    pub mismatches: Vec<Vec<Rat>>,
    pub max_rel_err: f64,
    pub float_ok: bool,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub const FLOAT_REL_TOL: f64 = 1e-9;

fn matvec(w: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    w.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn matmul(a: &[Vec<Rat>], b: &[Vec<Rat>], inner_cols: usize) -> Vec<Vec<Rat>> {
    a.iter()
        .map(|r| (0..inner_cols).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect())
        .collect()
}

fn ceil_log2(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

impl ReluNetwork {
    /// One linear layer computing the given maps.
    pub fn affine(n: usize, maps: &[AffineMap]) -> ReluNetwork {
        ReluNetwork {
            input_dim: n,
            layers: vec![Layer { w: maps.iter().map(|m| m.a.clone()).collect(), b: maps.iter().map(|m| m.b.clone()).collect(), relu: false }],
        }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn outputs(&self) -> usize {
        self.layers.last().map_or(self.input_dim, |l| l.b.len())
    }

    fn cols(&self, l: usize) -> usize {
        if l == 0 {
            self.input_dim
        } else {
            self.layers[l - 1].b.len()
        }
    }

    pub fn stats(&self) -> NetworkStats {
        let hidden: Vec<usize> = self.layers[..self.layers.len().saturating_sub(1)].iter().map(|l| l.b.len()).collect();
        NetworkStats { depth: self.depth(), width: hidden.iter().copied().max().unwrap_or(0), size: hidden.iter().sum() }
    }

    pub fn evaluate(&self, x: &[Rat]) -> Vec<Rat> {
        let mut v = x.to_vec();
        for l in &self.layers {
            v = matvec(&l.w, &v).into_iter().zip(&l.b).map(|(y, b)| y + b).collect();
            if l.relu {
                v.iter_mut().filter(|y| y.is_negative()).for_each(|y| *y = Rat::zero());
            }
        }
        v
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut v = x.to_vec();
        for l in &self.layers {
            v = l
                .w
                .iter()
                .zip(&l.b)
                .map(|(r, b)| r.iter().zip(&v).map(|(a, y)| to_f64(a) * y).sum::<f64>() + to_f64(b))
                .collect();
            if l.relu {
                v.iter_mut().for_each(|y| *y = y.max(0.0));
            }
        }
        v
    }

    pub fn eval_scalar(&self, x: &[Rat]) -> Rat {
        self.evaluate(x).swap_remove(0)
    }

    /// Replace the last affine layer `L` by `relu(G L)` followed by the linear layer `R`.
    fn extend(&mut self, g: Vec<Vec<Rat>>, r: Vec<Vec<Rat>>) {
        let m = self.outputs();
        let cols = self.cols(self.layers.len() - 1);
        let last = self.layers.last_mut().unwrap();
        let b = g.iter().map(|row| row.iter().zip(&last.b).map(|(x, y)| x * y).sum()).collect();
        last.w = matmul(&g, &last.w, cols);
        last.b = b;
        last.relu = true;
        debug_assert!(g.iter().all(|row| row.len() == m));
        let rows = r.len();
        self.layers.push(Layer { w: r, b: vec![Rat::zero(); rows], relu: false });
    }

    /// Compose the outputs with a linear map.
    pub fn map_outputs(&mut self, m: &[Vec<Rat>]) {
        let cols = self.cols(self.layers.len() - 1);
        let last = self.layers.last_mut().unwrap();
        last.b = matvec(m, &last.b);
        last.w = matmul(m, &last.w, cols);
    }

    /// Append an exact identity pass `y = relu(y) − relu(−y)`.
    pub fn pad_once(&mut self) {
        let m = self.outputs();
        let unit = |i: usize, s: i64| (0..m).map(|j| if i == j { Rat::from_integer(s.into()) } else { Rat::zero() }).collect::<Vec<_>>();
        let g = (0..m).map(|i| unit(i, 1)).chain((0..m).map(|i| unit(i, -1))).collect();
        let r = (0..m)
            .map(|i| (0..2 * m).map(|j| if j == i { Rat::one() } else if j == i + m { -Rat::one() } else { Rat::zero() }).collect())
            .collect();
        self.extend(g, r);
    }

    pub fn pad_to(&mut self, depth: usize) {
        while self.depth() < depth {
            self.pad_once();
        }
    }

    /// Halve the outputs by pairwise maxima; an odd leftover passes through.
    pub fn max_pairs(&mut self) {
        let m = self.outputs();
        let e = |i: usize, s: i64| (0..m).map(|j| if i == j { Rat::from_integer(s.into()) } else { Rat::zero() }).collect::<Vec<Rat>>();
        let mut g = Vec::new();
        let mut groups = Vec::new();
        for p in 0..m / 2 {
            let (u, v) = (2 * p, 2 * p + 1);
            let d: Vec<Rat> = e(u, 1).iter().zip(e(v, 1)).map(|(a, b)| a - b).collect();
            groups.push(vec![(g.len(), 1), (g.len() + 1, 1), (g.len() + 2, -1)]);
            g.extend([d, e(v, 1), e(v, -1)]);
        }
        if m % 2 == 1 {
            groups.push(vec![(g.len(), 1), (g.len() + 1, -1)]);
            g.extend([e(m - 1, 1), e(m - 1, -1)]);
        }
        let units = g.len();
        let r = groups
            .into_iter()
            .map(|gr| {
                let mut row = vec![Rat::zero(); units];
                for (j, s) in gr {
                    row[j] = Rat::from_integer(s.into());
                }
                row
            })
            .collect();
        self.extend(g, r);
    }

    /// Side-by-side networks of equal depth with concatenated outputs.
    pub fn parallel(nets: &[ReluNetwork]) -> Result<ReluNetwork> {
        let first = nets.first().ok_or(Error::EmptyList)?;
        let (n, depth) = (first.input_dim, first.depth());
        if nets.iter().any(|x| x.input_dim != n || x.depth() != depth) {
            return Err(Error::Invalid("parallel networks need equal input dimension and depth".into()));
        }
        let mut layers = Vec::new();
        for l in 0..depth {
            let total: usize = nets.iter().map(|x| x.cols(l)).sum();
            let mut w = Vec::new();
            let mut b = Vec::new();
            let mut off = 0;
            for x in nets {
                let c = x.cols(l);
                for (row, bias) in x.layers[l].w.iter().zip(&x.layers[l].b) {
                    if l == 0 {
                        w.push(row.clone());
                    } else {
                        let mut full = vec![Rat::zero(); total];
                        full[off..off + c].clone_from_slice(row);
                        w.push(full);
                    }
                    b.push(bias.clone());
                }
                off += c;
            }
            layers.push(Layer { w, b, relu: nets[0].layers[l].relu });
        }
        Ok(ReluNetwork { input_dim: n, layers })
    }

    /// Drop hidden units that are dead, constant or unused.
    pub fn prune(&mut self) {
        loop {
            let mut changed = false;
            for l in 0..self.layers.len().saturating_sub(1) {
                if !self.layers[l].relu {
                    continue;
                }
                let mut u = 0;
                while u < self.layers[l].b.len() {
                    let unused = self.layers[l + 1].w.iter().all(|r| r[u].is_zero());
                    let constant = self.layers[l].w[u].iter().all(|a| a.is_zero());
                    if !(unused || constant) {
                        u += 1;
                        continue;
                    }
                    let c = self.layers[l].b[u].clone().max(Rat::zero());
                    self.layers[l].w.remove(u);
                    self.layers[l].b.remove(u);
                    let next = &mut self.layers[l + 1];
                    for (row, bias) in next.w.iter_mut().zip(next.b.iter_mut()) {
                        *bias += &row[u] * &c;
                        row.remove(u);
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

/// Maximum of affine maps by a balanced tree of pair gadgets.
pub fn max_tree(n: usize, maps: &[AffineMap]) -> Result<ReluNetwork> {
    if maps.is_empty() {
        return Err(Error::EmptyList);
    }
    if let Some(m) = maps.iter().find(|m| m.a.len() != n) {
        return Err(Error::WrongDim { expected: n, got: m.a.len() });
    }
    let mut net = ReluNetwork::affine(n, maps);
    while net.outputs() > 1 {
        net.max_pairs();
    }
    net.prune();
    Ok(net)
}

/// Breakpoints `(t, slope jump)` with the leftmost and rightmost pieces.
pub type Breakpoints1d = (Vec<(Rat, Rat)>, AffineMap, AffineMap);

/// Breakpoints with slope jumps, and the leftmost and rightmost pieces, of a univariate function.
pub fn breakpoints_1d(f: &Cpwl) -> Result<Breakpoints1d> {
    if f.dim() != 1 {
        return Err(Error::WrongDim { expected: 1, got: f.dim() });
    }
    let w = f.weights();
    let mut bps: Vec<(Rat, Rat)> = f
        .complex
        .facets
        .iter()
        .map(|fc| (f.complex.facet_point(fc.id).expect("facet point")[0].clone(), w[fc.id].clone()))
        .collect();
    bps.sort();
    let piece_at = |x: Rat| {
        let c = f.complex.locate(&[x]).expect("complete complex");
        f.pieces[c].clone()
    };
    let lo = bps.first().map_or(Rat::zero(), |b| b.0.clone()) - Rat::one();
    let hi = bps.last().map_or(Rat::zero(), |b| b.0.clone()) + Rat::one();
    let (left, right) = (piece_at(lo), piece_at(hi));
    bps.retain(|b| !b.1.is_zero());
    Ok((bps, left, right))
}

fn one_hidden(units: Vec<(Rat, Rat, Rat)>, bias: Rat) -> ReluNetwork {
    // (input weight, input bias, output weight)
    let mut net = ReluNetwork {
        input_dim: 1,
        layers: vec![
            Layer { w: units.iter().map(|u| vec![u.0.clone()]).collect(), b: units.iter().map(|u| u.1.clone()).collect(), relu: true },
            Layer { w: vec![units.iter().map(|u| u.2.clone()).collect()], b: vec![bias], relu: false },
        ],
    };
    net.prune();
    net
}

/// Depth-two network for a convex univariate function.
pub fn convex_1d(f: &Cpwl) -> Result<ReluNetwork> {
    let (bps, left, right) = breakpoints_1d(f)?;
    if !f.is_convex() {
        return Err(Error::NotConvex);
    }
    let one = Rat::one();
    if bps.is_empty() {
        let a = left.a[0].clone();
        return Ok(one_hidden(vec![(one.clone(), Rat::zero(), a.clone()), (-one, Rat::zero(), -a)], left.b));
    }
    let k = bps.len();
    let (t1, tk) = (bps[0].0.clone(), bps[k - 1].0.clone());
    let mut lu: Vec<(Rat, Rat, Rat)> = bps.iter().map(|(t, d)| (one.clone(), -t.clone(), d.clone())).collect();
    lu[0].2 += &left.a[0];
    lu.push((-one.clone(), t1.clone(), -left.a[0].clone()));
    let left_net = one_hidden(lu, f.evaluate(&[t1]));
    let mut ru: Vec<(Rat, Rat, Rat)> = bps.iter().map(|(t, d)| (-one.clone(), t.clone(), d.clone())).collect();
    ru[k - 1].2 -= &right.a[0];
    ru.push((one, -tk.clone(), right.a[0].clone()));
    let right_net = one_hidden(ru, f.evaluate(&[tk]));
    Ok(if right_net.stats().size < left_net.stats().size { right_net } else { left_net })
}

/// Depth of the grouped construction.
pub fn grouped_depth(n: usize, r: usize, s: usize) -> usize {
    let inner = if n == 1 { 2 } else { ceil_log2(s) + 1 };
    inner + ceil_log2(r)
}

/// Distinct affine pieces of `f`.
pub fn components(f: &Cpwl) -> Vec<AffineMap> {
    f.pieces.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

fn max_1d(maps: &[AffineMap]) -> Result<Cpwl> {
    let mut ts = BTreeSet::new();
    for (i, p) in maps.iter().enumerate() {
        for q in &maps[i + 1..] {
            let da = &p.a[0] - &q.a[0];
            if !da.is_zero() {
                ts.insert((&q.b - &p.b) / da);
            }
        }
    }
    let ts: Vec<Rat> = ts.into_iter().collect();
    Ok(fixtures::max_of(Arc::new(fixtures::line(&ts)?), maps))
}

/// Max over `r` groups of at most `s` components each.
pub fn grouped_convex(f: &Cpwl, r: usize, s: usize) -> Result<ReluNetwork> {
    if !f.is_convex() {
        return Err(Error::NotConvex);
    }
    let comps = components(f);
    let k = comps.len();
    if r == 0 || s == 0 || r * s < k {
        return Err(Error::ParamsTooSmall { rs: r * s, k });
    }
    let n = f.dim();
    let inner_depth = grouped_depth(n, 1, s);
    let mut inner = Vec::with_capacity(r);
    for j in 0..r {
        let mut group: Vec<AffineMap> = comps.iter().skip(j).step_by(r).cloned().collect();
        if group.is_empty() {
            group.push(comps[0].clone());
        }
        let mut net = if n == 1 { convex_1d(&max_1d(&group)?)? } else { max_tree(n, &group)? };
        net.pad_to(inner_depth);
        inner.push(net);
    }
    let mut net = ReluNetwork::parallel(&inner)?;
    while net.outputs() > 1 {
        net.max_pairs();
    }
    net.prune();
    Ok(net)
}

/// `g − h` from two grouped branches run in parallel.
pub fn dc_network(g: &Cpwl, h: &Cpwl, r: usize, s: usize) -> Result<ReluNetwork> {
    let mut ng = grouped_convex(g, r, s)?;
    let mut nh = grouped_convex(h, r, s)?;
    let d = ng.depth().max(nh.depth());
    ng.pad_to(d);
    nh.pad_to(d);
    let mut net = ReluNetwork::parallel(&[ng, nh])?;
    net.map_outputs(&[vec![Rat::one(), -Rat::one()]]);
    net.prune();
    Ok(net)
}

pub fn random_point(n: usize, rng: &mut impl Rng) -> Vec<Rat> {
    (0..n).map(|_| frac(rng.gen_range(-60..=60), rng.gen_range(1..=9))).collect()
}

/// Exact comparison on cell and facet points plus seeded random samples; float agreement is advisory.
pub fn verify(net: &ReluNetwork, f: &Cpwl, samples: usize, seed: u64) -> VerifyReport {
    let c = &f.complex;
    let mut pts: Vec<Vec<Rat>> = (0..c.cells.len()).filter_map(|i| c.interior_point(i).cloned()).collect();
    pts.extend((0..c.facets.len()).filter_map(|i| c.facet_point(i).cloned()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pts.extend((0..samples).map(|_| random_point(f.dim(), &mut rng)));
    let mut mismatches = Vec::new();
    let mut max_rel_err = 0f64;
    for x in &pts {
        let want = f.evaluate(x);
        if net.eval_scalar(x) != want {
            mismatches.push(x.clone());
        }
        let xf: Vec<f64> = x.iter().map(to_f64).collect();
        let got = net.evaluate_f64(&xf)[0];
        let w = to_f64(&want);
        max_rel_err = max_rel_err.max((got - w).abs() / w.abs().max(1.0));
    }
    VerifyReport { checked: pts.len(), mismatches, max_rel_err, float_ok: max_rel_err <= FLOAT_REL_TOL }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ints};

    fn am(a: &[i64], b: i64) -> AffineMap {
        AffineMap::new(ints(a), int(b))
    }

    #[test]
    fn max_of_x_and_zero_is_one_relu() {
        let net = max_tree(1, &[am(&[1], 0), am(&[0], 0)]).unwrap();
        assert_eq!(net.stats(), NetworkStats { depth: 2, width: 1, size: 1 });
        for x in [-3, 0, 5] {
            assert_eq!(net.eval_scalar(&[int(x)]), int(x.max(0)));
        }
        assert_eq!(max_tree(1, &[am(&[2], 1)]).unwrap().depth(), 1);
        assert_eq!(max_tree(1, &[]), Err(Error::EmptyList));
    }

    #[test]
    fn max_tree_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=9 {
            let maps: Vec<AffineMap> = (0..k)
                .map(|_| AffineMap::new((0..2).map(|_| int(rng.gen_range(-4..=4))).collect(), int(rng.gen_range(-4..=4))))
                .collect();
            let net = max_tree(2, &maps).unwrap();
            let st = net.stats();
            assert_eq!(st.depth, ceil_log2(k) + 1);
            assert!(st.size <= 3 * (k - 1) + 2 * ceil_log2(k));
            for _ in 0..30 {
                let x = random_point(2, &mut rng);
                assert_eq!(net.eval_scalar(&x), fixtures::argmax(&maps, &x).eval(&x));
            }
        }
    }

    #[test]
    fn convex_1d_sizes() {
        let abs = max_1d(&[am(&[1], 0), am(&[-1], 0)]).unwrap();
        let net = convex_1d(&abs).unwrap();
        assert_eq!(net.stats(), NetworkStats { depth: 2, width: 2, size: 2 });
        // zero left slope: one unit per breakpoint
        let f = crate::fixtures::line_function(&ints(&[-2, 0, 1, 3]), &ints(&[1, 2, 1, 3])).unwrap();
        let net = convex_1d(&f).unwrap();
        assert_eq!(net.stats().size, 4);
        assert_eq!(net.depth(), 2);
        assert!(verify(&net, &f, 50, 1).pass());
        let shifted = f.add_affine(&am(&[5], -2));
        let net = convex_1d(&shifted).unwrap();
        assert_eq!(net.stats().size, 5);
        assert!(verify(&net, &shifted, 50, 1).pass());
        let nc = crate::fixtures::line_function(&ints(&[0]), &ints(&[-1])).unwrap();
        assert_eq!(convex_1d(&nc), Err(Error::NotConvex));
        assert_eq!(convex_1d(&crate::fixtures::median()), Err(Error::WrongDim { expected: 1, got: 2 }));
    }

    #[test]
    fn grouped_depth_formula() {
        use crate::complex::{Complex, Hyperplane};
        let hs = [Hyperplane::from_ints(&[1, -1], int(0)).unwrap(), Hyperplane::from_ints(&[1, 1], int(0)).unwrap()];
        let c = Arc::new(Complex::arrangement(&hs, 2).unwrap());
        let f = crate::fixtures::max_of(c, &[am(&[1, 0], 0), am(&[0, 1], 0), am(&[-1, 0], 0), am(&[0, -1], 0)]);
        assert_eq!(components(&f).len(), 4);
        for (r, s) in [(1, 4), (2, 2), (4, 1), (3, 2), (1, 5)] {
            let net = grouped_convex(&f, r, s).unwrap();
            assert_eq!(net.depth(), grouped_depth(2, r, s));
            assert!(verify(&net, &f, 40, 4).pass());
        }
        assert_eq!(grouped_convex(&f, 1, 3), Err(Error::ParamsTooSmall { rs: 3, k: 4 }));
        assert_eq!(grouped_convex(&crate::fixtures::median(), 2, 2), Err(Error::NotConvex));
    }

    #[test]
    fn grouped_1d() {
        let f = crate::fixtures::line_function(&ints(&[-3, -1, 0, 2, 5]), &ints(&[1, 1, 2, 1, 1])).unwrap();
        let k = components(&f).len();
        assert_eq!(k, 6);
        for (r, s) in [(1, 6), (2, 3), (3, 2), (6, 1), (4, 2)] {
            let net = grouped_convex(&f, r, s).unwrap();
            assert_eq!(net.depth(), grouped_depth(1, r, s));
            assert!(verify(&net, &f, 40, 2).pass());
        }
        assert_eq!(grouped_convex(&f, 2, 2), Err(Error::ParamsTooSmall { rs: 4, k: 6 }));
    }

    #[test]
    fn median_dc_network() {
        let f = crate::fixtures::median();
        let p = crate::decomposition::solve_reduced(&f).unwrap();
        let net = dc_network(&p.g, &p.h, 2, 2).unwrap();
        let rep = verify(&net, &f, 100, 5);
        assert!(rep.pass() && rep.float_ok);
        assert_eq!(net.depth(), grouped_depth(2, 2, 2));
    }
}
