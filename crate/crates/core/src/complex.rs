//! Complete polyhedral complexes with exact incidence structure.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{self, Param};
use crate::lp::{self, LinearProgram, LpResult};
use crate::rat::{self, bigs, canonical_normal, dot_int, primitive_normal, Rat};

/// `⟨normal, x⟩ ≥ offset` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub offset: Rat,
}

/// `{x : ⟨normal, x⟩ = offset}` with a primitive normal whose first nonzero entry is positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    pub normal: Vec<BigInt>,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: &[Rat], offset: Rat) -> Result<Halfspace> {
        let p = primitive_normal(normal)?;
        let k = normal.iter().position(|x| !x.is_zero()).unwrap();
        let lambda = rat::big(&p[k]) / &normal[k];
        Ok(Halfspace { normal: p, offset: offset * lambda })
    }

    pub fn from_ints(normal: &[i64], offset: Rat) -> Result<Halfspace> {
        Halfspace::new(&rat::ints(normal), offset)
    }

    pub fn slack(&self, x: &[Rat]) -> Rat {
        dot_int(&self.normal, x) - &self.offset
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn flipped(&self) -> Halfspace {
        Halfspace { normal: rat::neg_int(&self.normal), offset: -self.offset.clone() }
    }

    /// The bounding hyperplane and the orientation sign of this side.
    pub fn hyperplane(&self) -> (Hyperplane, i32) {
        if rat::orientation(&self.normal) > 0 {
            (Hyperplane { normal: self.normal.clone(), offset: self.offset.clone() }, 1)
        } else {
            (Hyperplane { normal: rat::neg_int(&self.normal), offset: -self.offset.clone() }, -1)
        }
    }
}

impl Hyperplane {
    pub fn new(normal: &[Rat], offset: Rat) -> Result<Hyperplane> {
        let (p, s) = canonical_normal(normal)?;
        let k = normal.iter().position(|x| !x.is_zero()).unwrap();
        let lambda = rat::big(&p[k]) / &normal[k];
        debug_assert!(s != 0);
        Ok(Hyperplane { normal: p, offset: offset * lambda })
    }

    pub fn from_ints(normal: &[i64], offset: Rat) -> Result<Hyperplane> {
        Hyperplane::new(&rat::ints(normal), offset)
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        dot_int(&self.normal, x) - &self.offset
    }

    pub fn positive_side(&self) -> Halfspace {
        Halfspace { normal: self.normal.clone(), offset: self.offset.clone() }
    }

    pub fn side(&self, sign: i32) -> Halfspace {
        if sign >= 0 {
            self.positive_side()
        } else {
            self.positive_side().flipped()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: usize,
    pub ineqs: Vec<Halfspace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub id: usize,
    pub normal: Vec<BigInt>,
    pub offset: Rat,
    /// cell on the side the normal points into
    pub pos: usize,
    pub neg: usize,
}

impl Facet {
    pub fn hyperplane(&self) -> Hyperplane {
        Hyperplane { normal: self.normal.clone(), offset: self.offset.clone() }
    }

    pub fn other(&self, cell: usize) -> usize {
        if cell == self.pos {
            self.neg
        } else {
            self.pos
        }
    }
}

/// A codimension-2 face with its cyclically ordered star. Entry `(c, f)` means
/// that crossing facet `f` from cell `c` leads to the next entry's cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Codim2Face {
    pub id: usize,
    pub point: Vec<Rat>,
    pub star: Vec<(usize, usize)>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotFullDimensional { cell: usize },
    RedundantInequality { cell: usize, index: usize },
    BadFacetNormal { facet: usize },
    FacetCellMismatch { facet: usize },
    BoundaryFacet { cell: usize, index: usize },
    DuplicateFacet { cell: usize, index: usize },
    Overlap { a: usize, b: usize },
    NotAFace { a: usize, b: usize },
    StarNotClosed { face: usize },
    BadCellId { cell: usize },
    Empty,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Complex {
    pub dim: usize,
    pub cells: Vec<Cell>,
    pub facets: Vec<Facet>,
    pub faces2: Vec<Codim2Face>,
    interior: Vec<Option<Vec<Rat>>>,
    facet_points: Vec<Option<Vec<Rat>>>,
    weight_space: OnceLock<Param>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.cells == other.cells && self.facets == other.facets
    }
}

/// Point `x` of `{ineqs}` with `ineqs[eq]` tight and all others strictly
/// satisfied, if one exists.
pub fn relative_interior(ineqs: &[Halfspace], eq: &[usize], dim: usize) -> Option<Vec<Rat>> {
    let mut equalities = Vec::new();
    let mut inequalities = Vec::new();
    for (i, h) in ineqs.iter().enumerate() {
        let mut row = bigs(&h.normal);
        if eq.contains(&i) {
            row.push(Rat::zero());
            equalities.push((row, h.offset.clone()));
        } else {
            row.push(-Rat::one());
            inequalities.push((row, h.offset.clone()));
        }
    }
    let mut cap = vec![Rat::zero(); dim];
    cap.push(-Rat::one());
    inequalities.push((cap, -Rat::one()));
    let mut objective = vec![Rat::zero(); dim];
    objective.push(-Rat::one());
    let lp = LinearProgram { vars: dim + 1, equalities, inequalities, objective };
    match lp::solve(&lp) {
        LpResult::Optimal { point, .. } if point[dim].is_positive() => Some(point[..dim].to_vec()),
        _ => None,
    }
}

fn contains_all(ineqs: &[Halfspace], x: &[Rat]) -> bool {
    ineqs.iter().all(|h| h.contains(x))
}

impl Complex {
    /// Build a complex from cell H-representations: normalizes and removes
    /// redundant inequalities, matches facets, and computes codimension-2 stars.
    pub fn assemble(dim: usize, cells: Vec<Vec<Halfspace>>) -> Result<Complex> {
        let mut clean = Vec::with_capacity(cells.len());
        let mut interior = Vec::with_capacity(cells.len());
        let mut ineq_points: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(cells.len());
        for (id, ineqs) in cells.into_iter().enumerate() {
            let set: BTreeSet<Halfspace> = ineqs.into_iter().collect();
            let ineqs: Vec<Halfspace> = set.into_iter().collect();
            let p = relative_interior(&ineqs, &[], dim)
                .ok_or_else(|| Error::Invalid(format!("cell {id} is not full-dimensional")))?;
            let mut kept = Vec::new();
            let mut points = Vec::new();
            for i in 0..ineqs.len() {
                if let Some(x) = relative_interior(&ineqs, &[i], dim) {
                    kept.push(ineqs[i].clone());
                    points.push(x);
                }
            }
            clean.push(Cell { id, ineqs: kept });
            interior.push(Some(p));
            ineq_points.push(points);
        }
        let mut by_plane: BTreeMap<Hyperplane, Vec<(usize, usize, i32)>> = BTreeMap::new();
        for c in &clean {
            for (i, h) in c.ineqs.iter().enumerate() {
                let (hp, s) = h.hyperplane();
                by_plane.entry(hp).or_default().push((c.id, i, s));
            }
        }
        let mut assigned: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut facets = Vec::new();
        let mut facet_points = Vec::new();
        for c in &clean {
            for (i, h) in c.ineqs.iter().enumerate() {
                if assigned.contains(&(c.id, i)) {
                    continue;
                }
                let (hp, s) = h.hyperplane();
                let x = &ineq_points[c.id][i];
                let partner = by_plane[&hp].iter().find(|&&(oc, oi, os)| {
                    os == -s && oc != c.id && !assigned.contains(&(oc, oi)) && contains_all(&clean[oc].ineqs, x)
                });
                if let Some(&(oc, oi, _)) = partner {
                    assigned.insert((c.id, i));
                    assigned.insert((oc, oi));
                    let (pos, neg) = if s > 0 { (c.id, oc) } else { (oc, c.id) };
                    facets.push(Facet { id: facets.len(), normal: hp.normal, offset: hp.offset, pos, neg });
                    facet_points.push(Some(x.clone()));
                }
            }
        }
        let mut cx = Complex {
            dim,
            cells: clean,
            facets,
            faces2: vec![],
            interior,
            facet_points,
            weight_space: OnceLock::new(),
        };
        cx.faces2 = cx.compute_faces2();
        Ok(cx)
    }

    /// Build from explicit cells and facets (as read from a file). Nothing is
    /// trusted; call [`Complex::validate`] for a report.
    pub fn from_parts(dim: usize, cells: Vec<Cell>, facets: Vec<Facet>) -> Complex {
        let interior = cells.iter().map(|c| relative_interior(&c.ineqs, &[], dim)).collect();
        let facet_points = facets
            .iter()
            .map(|f| {
                let mut ineqs = Vec::new();
                for cid in [f.pos, f.neg] {
                    if let Some(c) = cells.get(cid) {
                        ineqs.extend(c.ineqs.iter().cloned());
                    }
                }
                let h = f.hyperplane().positive_side();
                ineqs.retain(|x| *x != h && *x != h.flipped());
                ineqs.push(h);
                let k = ineqs.len() - 1;
                relative_interior(&ineqs, &[k], dim)
            })
            .collect();
        let mut cx = Complex {
            dim,
            cells,
            facets,
            faces2: vec![],
            interior,
            facet_points,
            weight_space: OnceLock::new(),
        };
        cx.faces2 = cx.compute_faces2();
        cx
    }

    pub fn interior_point(&self, cell: usize) -> Option<&Vec<Rat>> {
        self.interior[cell].as_ref()
    }

    pub fn facet_point(&self, facet: usize) -> Option<&Vec<Rat>> {
        self.facet_points[facet].as_ref()
    }

    pub fn cell_facets(&self, cell: usize) -> Vec<usize> {
        self.facets.iter().filter(|f| f.pos == cell || f.neg == cell).map(|f| f.id).collect()
    }

    pub fn contains(&self, cell: usize, x: &[Rat]) -> bool {
        contains_all(&self.cells[cell].ineqs, x)
    }

    /// Lowest-id cell containing `x`.
    pub fn locate(&self, x: &[Rat]) -> Option<usize> {
        self.cells.iter().position(|c| contains_all(&c.ineqs, x))
    }

    pub fn is_fan(&self) -> bool {
        self.cells.iter().all(|c| c.ineqs.iter().all(|h| h.offset.is_zero()))
    }

    fn compute_faces2(&self) -> Vec<Codim2Face> {
        if self.dim < 2 {
            return vec![];
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut faces = Vec::new();
        for c in &self.cells {
            let m = c.ineqs.len();
            for i in 0..m {
                for j in i + 1..m {
                    let rows = vec![bigs(&c.ineqs[i].normal), bigs(&c.ineqs[j].normal)];
                    if linalg::rank(&rows, self.dim) < 2 {
                        continue;
                    }
                    let Some(x) = relative_interior(&c.ineqs, &[i, j], self.dim) else { continue };
                    let star_cells: Vec<usize> =
                        self.cells.iter().filter(|d| contains_all(&d.ineqs, &x)).map(|d| d.id).collect();
                    if !seen.insert(star_cells.clone()) {
                        continue;
                    }
                    let id = faces.len();
                    faces.push(self.order_star(id, x, &star_cells));
                }
            }
        }
        faces
    }

    fn order_star(&self, id: usize, x: Vec<Rat>, star_cells: &[usize]) -> Codim2Face {
        let in_star: BTreeSet<usize> = star_cells.iter().copied().collect();
        let star_facets: Vec<usize> = self
            .facets
            .iter()
            .filter(|f| in_star.contains(&f.pos) && in_star.contains(&f.neg) && f.hyperplane().value(&x).is_zero())
            .map(|f| f.id)
            .collect();
        let mut adj: BTreeMap<usize, Vec<usize>> = star_cells.iter().map(|&c| (c, vec![])).collect();
        for &f in &star_facets {
            adj.get_mut(&self.facets[f].pos).unwrap().push(f);
            adj.get_mut(&self.facets[f].neg).unwrap().push(f);
        }
        let broken = Codim2Face { id, point: x.clone(), star: vec![], closed: false };
        if adj.values().any(|v| v.len() != 2) || star_cells.len() < 3 {
            return broken;
        }
        // orientation frame in the 2D quotient
        let u1 = bigs(&self.facets[star_facets[0]].normal);
        let Some(u2) = star_facets
            .iter()
            .map(|&f| bigs(&self.facets[f].normal))
            .find(|v| linalg::rank(&[u1.clone(), v.clone()], self.dim) == 2)
        else {
            return broken;
        };
        let proj = |y: &[Rat]| {
            let d = rat::sub(y, &x);
            (rat::dot(&u1, &d), rat::dot(&u2, &d))
        };
        let det = |a: &(Rat, Rat), b: &(Rat, Rat)| &a.0 * &b.1 - &a.1 * &b.0;
        let c0 = star_cells[0];
        let (Some(p0), Some(fa), Some(fb)) = (
            self.interior[c0].as_ref(),
            self.facet_points[adj[&c0][0]].as_ref(),
            self.facet_points[adj[&c0][1]].as_ref(),
        ) else {
            return broken;
        };
        let q0 = proj(p0);
        let first = if det(&q0, &proj(fa)).is_positive() {
            adj[&c0][0]
        } else if det(&q0, &proj(fb)).is_positive() {
            adj[&c0][1]
        } else {
            return broken;
        };
        let mut star = Vec::new();
        let (mut cell, mut facet) = (c0, first);
        loop {
            star.push((cell, facet));
            let next = self.facets[facet].other(cell);
            if next == c0 {
                break;
            }
            if star.len() > star_cells.len() {
                return broken;
            }
            let nf = if adj[&next][0] == facet { adj[&next][1] } else { adj[&next][0] };
            cell = next;
            facet = nf;
        }
        let closed = star.len() == star_cells.len();
        Codim2Face { id, point: x, star, closed }
    }

    /// Sign with which `λ_f ν_f` enters when stepping across `facet` out of `cell`.
    pub fn crossing_sign(&self, cell: usize, facet: usize) -> i32 {
        if self.facets[facet].neg == cell {
            1
        } else {
            -1
        }
    }

    /// `Σ ± λ_σ ν_σ` around a codimension-2 star.
    pub fn star_residual(&self, face: &Codim2Face, omega: &[Rat]) -> Vec<Rat> {
        let mut r = vec![Rat::zero(); self.dim];
        for &(c, f) in &face.star {
            let s = self.crossing_sign(c, f);
            for (ri, v) in r.iter_mut().zip(&self.facets[f].normal) {
                let t = &omega[f] * rat::big(v);
                if s > 0 {
                    *ri += t;
                } else {
                    *ri -= t;
                }
            }
        }
        r
    }

    /// Balancing equations on facet weights, one row per coordinate per codimension-2 face.
    pub fn balancing_rows(&self) -> Vec<Vec<Rat>> {
        let mut rows = Vec::new();
        for face in &self.faces2 {
            for k in 0..self.dim {
                let mut row = vec![Rat::zero(); self.facets.len()];
                for &(c, f) in &face.star {
                    let v = rat::big(&self.facets[f].normal[k]);
                    if self.crossing_sign(c, f) > 0 {
                        row[f] += v;
                    } else {
                        row[f] -= v;
                    }
                }
                if !rat::is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
        rows
    }

    /// Parametrization of the space of balanced weight functions.
    pub fn weight_space(&self) -> &Param {
        self.weight_space.get_or_init(|| {
            let m = self.facets.len();
            let basis = linalg::nullspace(&self.balancing_rows(), m);
            Param { x0: vec![Rat::zero(); m], basis }
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let n = self.dim;
        if self.cells.is_empty() {
            v.push(Violation::Empty);
        }
        for (i, c) in self.cells.iter().enumerate() {
            if c.id != i {
                v.push(Violation::BadCellId { cell: i });
            }
        }
        for c in &self.cells {
            if self.interior[c.id].is_none() {
                v.push(Violation::NotFullDimensional { cell: c.id });
                continue;
            }
            for i in 0..c.ineqs.len() {
                if relative_interior(&c.ineqs, &[i], n).is_none() {
                    v.push(Violation::RedundantInequality { cell: c.id, index: i });
                }
            }
        }
        let ncells = self.cells.len();
        let mut matched: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in &self.facets {
            let canon = canonical_normal(&bigs(&f.normal)).map(|(p, _)| p == f.normal).unwrap_or(false);
            if !canon {
                v.push(Violation::BadFacetNormal { facet: f.id });
            }
            if f.pos >= ncells || f.neg >= ncells || f.pos == f.neg {
                v.push(Violation::FacetCellMismatch { facet: f.id });
                continue;
            }
            let h = f.hyperplane().positive_side();
            let ip = self.cells[f.pos].ineqs.iter().position(|x| *x == h);
            let ineg = self.cells[f.neg].ineqs.iter().position(|x| *x == h.flipped());
            match (ip, ineg, &self.facet_points[f.id]) {
                (Some(a), Some(b), Some(_)) => {
                    *matched.entry((f.pos, a)).or_default() += 1;
                    *matched.entry((f.neg, b)).or_default() += 1;
                }
                _ => v.push(Violation::FacetCellMismatch { facet: f.id }),
            }
        }
        for c in &self.cells {
            for i in 0..c.ineqs.len() {
                match matched.get(&(c.id, i)).copied().unwrap_or(0) {
                    0 => v.push(Violation::BoundaryFacet { cell: c.id, index: i }),
                    1 => {}
                    _ => v.push(Violation::DuplicateFacet { cell: c.id, index: i }),
                }
            }
        }
        for a in 0..ncells {
            for b in a + 1..ncells {
                if self.interior[a].is_none() || self.interior[b].is_none() {
                    continue;
                }
                if let Some(x) = self.pair_violation(a, b) {
                    v.push(x);
                }
            }
        }
        for face in &self.faces2 {
            if !face.closed {
                v.push(Violation::StarNotClosed { face: face.id });
            }
        }
        ValidationReport { violations: v }
    }

    fn pair_violation(&self, a: usize, b: usize) -> Option<Violation> {
        let n = self.dim;
        let mut both: Vec<Halfspace> = self.cells[a].ineqs.clone();
        both.extend(self.cells[b].ineqs.iter().cloned());
        if relative_interior(&both, &[], n).is_some() {
            return Some(Violation::Overlap { a, b });
        }
        let inter = rows_of(&both, n);
        if !lp::is_feasible(&inter) {
            return None;
        }
        // implicit equalities of P ∩ Q
        let implicit: Vec<bool> = both.iter().map(|h| is_implicit(&inter, h)).collect();
        let na = self.cells[a].ineqs.len();
        let face_a = face_of(&self.cells[a].ineqs, &implicit[..na], n);
        let face_b = face_of(&self.cells[b].ineqs, &implicit[na..], n);
        let ok = contained(&face_a, &self.cells[b].ineqs) && contained(&face_b, &self.cells[a].ineqs);
        if ok {
            None
        } else {
            Some(Violation::NotAFace { a, b })
        }
    }

    // ---- generators ----

    /// Complex induced by an arrangement of affine hyperplanes.
    pub fn arrangement(hyperplanes: &[Hyperplane], dim: usize) -> Result<Complex> {
        Complex::arrangement_with(hyperplanes, dim, &Caps::from_env())
    }

    pub fn arrangement_with(hyperplanes: &[Hyperplane], dim: usize, caps: &Caps) -> Result<Complex> {
        Caps::check("arrangement dimension", dim, caps.arrangement_dim)?;
        Caps::check("hyperplane count", hyperplanes.len(), caps.arrangement_hyperplanes)?;
        let hs: Vec<Hyperplane> = hyperplanes.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let mut cells = Vec::new();
        sign_regions(&hs, dim, &mut vec![], &mut cells);
        Complex::assemble(dim, cells)
    }

    /// Common refinement with an arrangement; also returns the parent cell of every new cell.
    pub fn refine(&self, hyperplanes: &[Hyperplane]) -> Result<(Complex, Vec<usize>)> {
        self.refine_with(hyperplanes, &Caps::from_env())
    }

    pub fn refine_with(&self, hyperplanes: &[Hyperplane], caps: &Caps) -> Result<(Complex, Vec<usize>)> {
        Caps::check("arrangement dimension", self.dim, caps.arrangement_dim)?;
        Caps::check("hyperplane count", hyperplanes.len(), caps.arrangement_hyperplanes)?;
        let hs: Vec<Hyperplane> = hyperplanes.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let mut cells = Vec::new();
        let mut ancestry = Vec::new();
        for c in &self.cells {
            let mut out = Vec::new();
            sign_regions(&hs, self.dim, &mut c.ineqs.clone(), &mut out);
            ancestry.extend(std::iter::repeat_n(c.id, out.len()));
            cells.extend(out);
        }
        Ok((Complex::assemble(self.dim, cells)?, ancestry))
    }

    /// The braid fan: one cone `x_{π(1)} ≤ … ≤ x_{π(n)}` per permutation, in lexicographic order.
    pub fn braid(n: usize) -> Result<Complex> {
        Complex::braid_with(n, &Caps::from_env())
    }

    pub fn braid_with(n: usize, caps: &Caps) -> Result<Complex> {
        Caps::check("braid ground set", n, caps.braid_n)?;
        if n < 2 {
            return Err(Error::Invalid("braid fan needs n ≥ 2".into()));
        }
        let cells = permutations(n)
            .into_iter()
            .map(|p| {
                (0..n - 1)
                    .map(|i| {
                        let mut v = vec![0i64; n];
                        v[p[i + 1]] = 1;
                        v[p[i]] = -1;
                        Halfspace::from_ints(&v, Rat::zero()).unwrap()
                    })
                    .collect()
            })
            .collect();
        Complex::assemble(n, cells)
    }

    /// Complete fan in the plane from rays listed counterclockwise, consecutive angles below π.
    pub fn fan2d(rays: &[[i64; 2]]) -> Result<Complex> {
        let m = rays.len();
        if m < 3 {
            return Err(Error::Invalid("a complete 2D fan needs at least 3 rays".into()));
        }
        if !ccw_sorted(rays) {
            return Err(Error::Invalid("rays must be counterclockwise with gaps below π".into()));
        }
        let cells = (0..m)
            .map(|i| {
                let a = rays[i];
                let b = rays[(i + 1) % m];
                vec![
                    Halfspace::from_ints(&[-a[1], a[0]], Rat::zero()).unwrap(),
                    Halfspace::from_ints(&[b[1], -b[0]], Rat::zero()).unwrap(),
                ]
            })
            .collect();
        Complex::assemble(2, cells)
    }

    /// For a 2D fan: the primitive ray direction of a facet (pointing away from the origin).
    pub fn ray_of_facet(&self, facet: usize) -> Option<Vec<BigInt>> {
        let p = self.facet_points[facet].as_ref()?;
        primitive_normal(p).ok()
    }
}

fn rows_of(ineqs: &[Halfspace], n: usize) -> lp::HPolyhedron {
    lp::HPolyhedron {
        vars: n,
        equalities: vec![],
        inequalities: ineqs.iter().map(|h| (bigs(&h.normal), h.offset.clone())).collect(),
    }
}

fn is_implicit(p: &lp::HPolyhedron, h: &Halfspace) -> bool {
    let lp = LinearProgram {
        vars: p.vars,
        equalities: p.equalities.clone(),
        inequalities: p.inequalities.clone(),
        objective: bigs(&h.flipped().normal),
    };
    // max ⟨ν,x⟩ over the set equals the offset
    match lp::solve(&lp) {
        LpResult::Optimal { value, .. } => -value == h.offset,
        _ => false,
    }
}

fn face_of(ineqs: &[Halfspace], implicit: &[bool], n: usize) -> lp::HPolyhedron {
    let mut p = rows_of(ineqs, n);
    for (h, &imp) in ineqs.iter().zip(implicit) {
        if imp {
            p.equalities.push((bigs(&h.normal), h.offset.clone()));
        }
    }
    p
}

fn contained(face: &lp::HPolyhedron, ineqs: &[Halfspace]) -> bool {
    ineqs.iter().all(|h| {
        let lp = LinearProgram {
            vars: face.vars,
            equalities: face.equalities.clone(),
            inequalities: face.inequalities.clone(),
            objective: bigs(&h.normal),
        };
        match lp::solve(&lp) {
            LpResult::Optimal { value, .. } => value >= h.offset,
            LpResult::Infeasible(_) => true,
            LpResult::Unbounded { .. } => false,
        }
    })
}

fn sign_regions(hs: &[Hyperplane], dim: usize, prefix: &mut Vec<Halfspace>, out: &mut Vec<Vec<Halfspace>>) {
    sign_rec(hs, 0, dim, prefix, out);
}

fn sign_rec(hs: &[Hyperplane], i: usize, dim: usize, cur: &mut Vec<Halfspace>, out: &mut Vec<Vec<Halfspace>>) {
    if i == hs.len() {
        out.push(cur.clone());
        return;
    }
    for s in [1, -1] {
        cur.push(hs[i].side(s));
        if relative_interior(cur, &[], dim).is_some() {
            sign_rec(hs, i + 1, dim, cur, out);
        }
        cur.pop();
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![], &mut vec![false; n], &mut out);
    out
}

fn half(v: [i64; 2]) -> i32 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

/// Exact counterclockwise angle comparison relative to the positive x-axis.
pub fn angle_cmp(a: [i64; 2], b: [i64; 2]) -> std::cmp::Ordering {
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let cross = a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
    0.cmp(&cross)
}

fn ccw_sorted(rays: &[[i64; 2]]) -> bool {
    let m = rays.len();
    // consecutive turns strictly between 0 and π, winding exactly once
    let mut turns = 0;
    for i in 0..m {
        let a = rays[i];
        let b = rays[(i + 1) % m];
        let cross = a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
        if cross <= 0 {
            return false;
        }
        if angle_cmp(a, b) != std::cmp::Ordering::Less {
            turns += 1;
        }
    }
    turns == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ints};

    pub fn six_fan() -> Complex {
        Complex::fan2d(&[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]]).unwrap()
    }

    fn hp(v: &[i64], c: i64) -> Hyperplane {
        Hyperplane::from_ints(v, int(c)).unwrap()
    }

    #[test]
    fn six_sector_fan_is_valid() {
        let c = six_fan();
        assert_eq!(c.cells.len(), 6);
        assert_eq!(c.facets.len(), 6);
        assert_eq!(c.faces2.len(), 1);
        assert!(c.faces2[0].closed);
        assert_eq!(c.faces2[0].star.len(), 6);
        assert!(c.validate().is_valid(), "{:?}", c.validate());
    }

    #[test]
    fn incomplete_and_overlapping() {
        let half = Complex::assemble(2, vec![vec![Halfspace::from_ints(&[1, 0], int(0)).unwrap()]]).unwrap();
        let r = half.validate();
        assert!(r.violations.contains(&Violation::BoundaryFacet { cell: 0, index: 0 }));

        let a = Cell { id: 0, ineqs: vec![Halfspace::from_ints(&[1, 0], int(0)).unwrap()] };
        let b = Cell { id: 1, ineqs: vec![Halfspace::from_ints(&[1, 0], int(1)).unwrap()] };
        let c = Complex::from_parts(2, vec![a, b], vec![]);
        assert!(c.validate().violations.contains(&Violation::Overlap { a: 0, b: 1 }));
    }

    #[test]
    fn arrangements() {
        let one = Complex::arrangement(&[hp(&[1, 0], 0)], 2).unwrap();
        assert_eq!((one.cells.len(), one.facets.len()), (2, 1));
        let three = Complex::arrangement(&[hp(&[1, 0], 0), hp(&[0, 1], 0), hp(&[1, -1], 0)], 2).unwrap();
        assert_eq!((three.cells.len(), three.facets.len()), (6, 6));
        assert!(three.validate().is_valid());
        let braid3 = Complex::arrangement(&[hp(&[1, -1, 0], 0), hp(&[1, 0, -1], 0), hp(&[0, 1, -1], 0)], 3).unwrap();
        assert_eq!(braid3.cells.len(), 6);
    }

    #[test]
    fn refinements() {
        let one = Complex::arrangement(&[hp(&[1, 0], 0)], 2).unwrap();
        let (same, anc) = one.refine(&[hp(&[1, 0], 0)]).unwrap();
        assert_eq!(same.cells.len(), 2);
        assert_eq!(anc, vec![0, 1]);
        let (quad, _) = one.refine(&[hp(&[0, 1], 0)]).unwrap();
        assert_eq!(quad.cells.len(), 4);
        assert!(quad.validate().is_valid());
        let (eight, anc) = six_fan().refine(&[hp(&[1, 1], 0)]).unwrap();
        assert_eq!(eight.cells.len(), 8);
        assert!(eight.validate().is_valid());
        for (i, &p) in anc.iter().enumerate() {
            assert!(six_fan().contains(p, eight.interior_point(i).unwrap()));
        }
    }

    #[test]
    fn locate_ties_and_sectors() {
        let c = six_fan();
        // cell 0 is the cone between (1,0) and (1,1): 0 ≤ x2 ≤ x1
        assert_eq!(c.locate(&ints(&[2, 1])), Some(0));
        assert_eq!(c.locate(&ints(&[0, 0])), Some(0));
        // cell 3 is the cone between (-1,0) and (-1,-1): x1 ≤ x2 ≤ 0
        assert_eq!(c.locate(&ints(&[-3, -1])), Some(3));
    }

    #[test]
    fn braid_fans() {
        assert_eq!(Complex::braid(2).unwrap().cells.len(), 2);
        assert_eq!(Complex::braid(2).unwrap().facets.len(), 1);
        let b3 = Complex::braid(3).unwrap();
        assert_eq!((b3.cells.len(), b3.facets.len()), (6, 6));
        assert!(b3.validate().is_valid());
        assert_eq!(Complex::braid(4).unwrap().cells.len(), 24);
    }

    #[test]
    fn facet_orientation_points_into_pos() {
        let c = six_fan();
        for f in &c.facets {
            let p = c.interior_point(f.pos).unwrap();
            let q = c.interior_point(f.neg).unwrap();
            let d = rat::sub(p, q);
            assert!(rat::dot_int(&f.normal, &d).is_positive());
        }
    }

    #[test]
    fn fan2d_rejects_bad_orders() {
        assert!(Complex::fan2d(&[[1, 0], [0, 1], [-1, 0]]).is_err());
        assert!(Complex::fan2d(&[[1, 0], [0, -1], [-1, 1]]).is_err());
    }
}
