//! Exact rational linear programming and vertex enumeration.
//!
//! Problems are stated as `min c·x` subject to `E x = e` and `A x ≥ b`.
//! Equalities are eliminated first; the remaining problem in the free
//! parameters is solved through its dual in standard form with a dense
//! two-phase tableau simplex under Bland's rule.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{self, Param};
use crate::rat::{dot, Rat};

pub type Row = (Vec<Rat>, Rat);

#[derive(Debug, Clone, Default)]
pub struct HPolyhedron {
    pub vars: usize,
    pub equalities: Vec<Row>,
    /// `row·x ≥ rhs`
    pub inequalities: Vec<Row>,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub vars: usize,
    pub equalities: Vec<Row>,
    pub inequalities: Vec<Row>,
    /// minimized
    pub objective: Vec<Rat>,
}

/// Infeasibility proof: `u ≥ 0`, `Aᵀu + Eᵀv = 0` and `b·u + e·v > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Farkas {
    pub ineq: Vec<Rat>,
    pub eq: Vec<Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub enum LpResult {
    Optimal { point: Vec<Rat>, value: Rat, tight: Vec<usize> },
    Infeasible(Farkas),
    Unbounded { direction: Vec<Rat> },
}

impl LpResult {
    pub fn status(&self) -> Status {
        match self {
            LpResult::Optimal { .. } => Status::Optimal,
            LpResult::Infeasible(_) => Status::Infeasible,
            LpResult::Unbounded { .. } => Status::Unbounded,
        }
    }

    pub fn point(&self) -> Option<&Vec<Rat>> {
        match self {
            LpResult::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

impl Farkas {
    pub fn verify(&self, equalities: &[Row], inequalities: &[Row], vars: usize) -> bool {
        if self.ineq.len() != inequalities.len() || self.eq.len() != equalities.len() {
            return false;
        }
        if self.ineq.iter().any(Signed::is_negative) {
            return false;
        }
        let mut comb = vec![Rat::zero(); vars];
        let mut rhs = Rat::zero();
        for ((row, b), u) in inequalities.iter().zip(&self.ineq).chain(equalities.iter().zip(&self.eq)) {
            if u.is_zero() {
                continue;
            }
            for (c, a) in comb.iter_mut().zip(row) {
                *c += a * u;
            }
            rhs += b * u;
        }
        comb.iter().all(Zero::is_zero) && rhs.is_positive()
    }
}

impl LinearProgram {
    pub fn feasibility(h: &HPolyhedron) -> LinearProgram {
        LinearProgram {
            vars: h.vars,
            equalities: h.equalities.clone(),
            inequalities: h.inequalities.clone(),
            objective: vec![Rat::zero(); h.vars],
        }
    }
}

enum Reduced {
    Optimal(Vec<Rat>),
    Infeasible(Vec<Rat>),
    Unbounded(Vec<Rat>),
}

enum Std {
    Optimal(Vec<Rat>),
    Infeasible(Vec<Rat>),
    Unbounded(Vec<Rat>),
}

/// maximize `c·u` subject to `M u = r`, `u ≥ 0`; `M` has `d` rows and `p` columns.
/// `Optimal` carries the simplex multipliers, `Infeasible` a vector `y` with
/// `Mᵀy ≥ 0`, `r·y < 0`, and `Unbounded` a ray.
fn simplex_std(m: &[Vec<Rat>], r: &[Rat], c: &[Rat], p: usize) -> Std {
    let d = m.len();
    let width = p + d + 1;
    let rhs = p + d;
    let mut signs = vec![Rat::one(); d];
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(width);
        let flip = r[i].is_negative();
        if flip {
            signs[i] = -Rat::one();
        }
        row.extend(m[i][..p].iter().map(|x| if flip { -x.clone() } else { x.clone() }));
        for k in 0..d {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        row.push(if flip { -r[i].clone() } else { r[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (p..p + d).collect();

    // phase 1: maximize -Σ artificials
    let cost1: Vec<Rat> = (0..p + d).map(|j| if j >= p { -Rat::one() } else { Rat::zero() }).collect();
    run_phase(&mut t, &mut basis, &cost1, p + d, rhs);
    let value1: Rat = basis.iter().zip(&t).map(|(&b, row)| &cost1[b] * &row[rhs]).sum();
    if value1.is_negative() {
        // multipliers from the artificial columns, which hold B⁻¹
        let mut y = vec![Rat::zero(); d];
        for (k, &b) in basis.iter().enumerate() {
            if b >= p {
                for i in 0..d {
                    y[i] -= &t[k][p + i];
                }
            }
        }
        let y = y.into_iter().zip(&signs).map(|(v, s)| v * s).collect();
        return Std::Infeasible(y);
    }

    // drive artificials out of the basis; drop redundant rows
    let mut kept: Vec<usize> = (0..d).collect();
    let mut k = 0;
    while k < t.len() {
        if basis[k] >= p {
            if let Some(j) = (0..p).find(|&j| !t[k][j].is_zero()) {
                pivot(&mut t, &mut basis, k, j);
                k += 1;
            } else {
                t.remove(k);
                basis.remove(k);
                kept.remove(k);
            }
        } else {
            k += 1;
        }
    }

    // phase 2 over the real columns only
    let mut cost2 = c.to_vec();
    cost2.extend((0..d).map(|_| Rat::zero()));
    if let Some(j) = run_phase(&mut t, &mut basis, &cost2, p, rhs) {
        let mut ray = vec![Rat::zero(); p];
        ray[j] = Rat::one();
        for (row, &b) in t.iter().zip(&basis) {
            ray[b] = -row[j].clone();
        }
        return Std::Unbounded(ray);
    }

    // multipliers: (M'_{kept,B})ᵀ π' = c_B
    let kd = kept.len();
    let bt: Vec<Vec<Rat>> = basis
        .iter()
        .map(|&b| kept.iter().map(|&i| &m[i][b] * &signs[i]).collect())
        .collect();
    let cb: Vec<Rat> = basis.iter().map(|&b| c[b].clone()).collect();
    let pi = linalg::solve(&bt, &cb, kd).expect("basis matrix is nonsingular");
    let mut y = vec![Rat::zero(); d];
    for (v, &i) in pi.into_iter().zip(&kept) {
        y[i] = v * &signs[i];
    }
    Std::Optimal(y)
}

/// Bland-rule iterations maximizing `cost`; columns `< limit` may enter.
/// Returns the entering column of an unbounded ray, if any.
fn run_phase(t: &mut [Vec<Rat>], basis: &mut [usize], cost: &[Rat], limit: usize, rhs: usize) -> Option<usize> {
    loop {
        let mut entering = None;
        for j in 0..limit {
            if basis.contains(&j) {
                continue;
            }
            let mut z = cost[j].clone();
            for (row, &b) in t.iter().zip(basis.iter()) {
                if !row[j].is_zero() && !cost[b].is_zero() {
                    z -= &cost[b] * &row[j];
                }
            }
            if z.is_positive() {
                entering = Some(j);
                break;
            }
        }
        let j = entering?;
        let mut leave: Option<(usize, Rat)> = None;
        for (k, row) in t.iter().enumerate() {
            if row[j].is_positive() {
                let ratio = &row[rhs] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((lk, lr)) => ratio < *lr || (ratio == *lr && basis[k] < basis[*lk]),
                };
                if better {
                    leave = Some((k, ratio));
                }
            }
        }
        match leave {
            None => return Some(j),
            Some((k, _)) => pivot(t, basis, k, j),
        }
    }
}

fn pivot(t: &mut [Vec<Rat>], basis: &mut [usize], k: usize, j: usize) {
    let inv = Rat::one() / &t[k][j];
    for x in t[k].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    let nz: Vec<usize> = (0..t[k].len()).filter(|&c| !t[k][c].is_zero()).collect();
    let prow = t[k].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == k || row[j].is_zero() {
            continue;
        }
        let f = row[j].clone();
        for &c in &nz {
            let d = &f * &prow[c];
            row[c] -= d;
        }
    }
    basis[k] = j;
}

/// `min c·y` subject to `a y ≥ b` with `y` free.
fn solve_free(a: &[Vec<Rat>], b: &[Rat], c: &[Rat], d: usize) -> Reduced {
    let p = a.len();
    if d == 0 {
        return match b.iter().position(Signed::is_positive) {
            Some(j) => {
                let mut u = vec![Rat::zero(); p];
                u[j] = Rat::one();
                Reduced::Infeasible(u)
            }
            None => Reduced::Optimal(vec![]),
        };
    }
    // dual: max b·u  s.t. aᵀu = c, u ≥ 0
    let mt: Vec<Vec<Rat>> = (0..d).map(|k| a.iter().map(|row| row[k].clone()).collect()).collect();
    match simplex_std(&mt, c, b, p) {
        Std::Optimal(y) => Reduced::Optimal(y),
        Std::Unbounded(ray) => Reduced::Infeasible(ray),
        Std::Infeasible(dir) => {
            let zero = vec![Rat::zero(); d];
            match simplex_std(&mt, &zero, b, p) {
                Std::Unbounded(ray) => Reduced::Infeasible(ray),
                _ => Reduced::Unbounded(dir),
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> LpResult {
    let param = match linalg::eliminate(&lp.equalities, lp.vars) {
        Ok(p) => p,
        Err(mut v) => {
            let rhs: Rat = lp.equalities.iter().zip(&v).map(|((_, e), y)| e * y).sum();
            if rhs.is_negative() {
                v.iter_mut().for_each(|x| *x = -x.clone());
            }
            return LpResult::Infeasible(Farkas { ineq: vec![Rat::zero(); lp.inequalities.len()], eq: v });
        }
    };
    solve_in(&param, lp)
}

/// Solve with a precomputed parametrization of the equality system.
pub fn solve_in(param: &Param, lp: &LinearProgram) -> LpResult {
    let d = param.dim();
    let mut a = Vec::with_capacity(lp.inequalities.len());
    let mut b = Vec::with_capacity(lp.inequalities.len());
    for (row, rhs) in &lp.inequalities {
        let (r, k) = param.pull_row(row);
        a.push(r);
        b.push(rhs - k);
    }
    let c: Vec<Rat> = param.basis.iter().map(|v| dot(&lp.objective, v)).collect();
    match solve_free(&a, &b, &c, d) {
        Reduced::Optimal(y) => {
            let point = param.point(&y);
            let value = dot(&lp.objective, &point);
            let tight = tight_set(&lp.inequalities, &point);
            LpResult::Optimal { point, value, tight }
        }
        Reduced::Unbounded(y) => LpResult::Unbounded { direction: param.direction(&y) },
        Reduced::Infeasible(u) => LpResult::Infeasible(lift_farkas(lp, u)),
    }
}

fn lift_farkas(lp: &LinearProgram, u: Vec<Rat>) -> Farkas {
    let mut w = vec![Rat::zero(); lp.vars];
    for ((row, _), ui) in lp.inequalities.iter().zip(&u) {
        if ui.is_zero() {
            continue;
        }
        for (wj, aj) in w.iter_mut().zip(row) {
            *wj -= aj * ui;
        }
    }
    let eq = if lp.equalities.is_empty() {
        vec![]
    } else {
        let et: Vec<Vec<Rat>> = (0..lp.vars)
            .map(|j| lp.equalities.iter().map(|(r, _)| r[j].clone()).collect())
            .collect();
        linalg::solve(&et, &w, lp.equalities.len()).unwrap_or_else(|| vec![Rat::zero(); lp.equalities.len()])
    };
    Farkas { ineq: u, eq }
}

pub fn tight_set(inequalities: &[Row], x: &[Rat]) -> Vec<usize> {
    inequalities
        .iter()
        .enumerate()
        .filter(|(_, (row, rhs))| &dot(row, x) == rhs)
        .map(|(i, _)| i)
        .collect()
}

pub fn is_feasible(h: &HPolyhedron) -> bool {
    solve(&LinearProgram::feasibility(h)).status() == Status::Optimal
}

pub fn satisfies(h: &HPolyhedron, x: &[Rat]) -> bool {
    h.equalities.iter().all(|(r, e)| &dot(r, x) == e) && h.inequalities.iter().all(|(r, b)| &dot(r, x) >= b)
}

/// Rank of the equalities together with the inequalities tight at `x`.
pub fn rank_of_tight_set(h: &HPolyhedron, x: &[Rat]) -> Result<usize> {
    if !satisfies(h, x) {
        return Err(Error::Infeasible);
    }
    let mut rows: Vec<Vec<Rat>> = h.equalities.iter().map(|(r, _)| r.clone()).collect();
    for i in tight_set(&h.inequalities, x) {
        rows.push(h.inequalities[i].0.clone());
    }
    Ok(linalg::rank(&rows, h.vars))
}

pub fn enumerate_vertices(h: &HPolyhedron) -> Result<Vec<Vec<Rat>>> {
    enumerate_vertices_with(h, &Caps::from_env())
}

pub fn enumerate_vertices_with(h: &HPolyhedron, caps: &Caps) -> Result<Vec<Vec<Rat>>> {
    Caps::check("inequality count", h.inequalities.len(), caps.enum_ineqs)?;
    let param = match linalg::eliminate(&h.equalities, h.vars) {
        Ok(p) => p,
        Err(_) => return Ok(vec![]),
    };
    Caps::check("dimension after equality elimination", param.dim(), caps.enum_dim)?;
    enumerate_in(&param, &h.inequalities)
}

/// Vertex enumeration by the double description method on the homogenized cone.
pub fn enumerate_in(param: &Param, inequalities: &[Row]) -> Result<Vec<Vec<Rat>>> {
    enumerate_reduced(param, inequalities, double_description)
}

/// Vertex enumeration by depth-first basis search with rank and face-feasibility pruning.
/// Exponential on degenerate vertices; kept as an independent cross-check.
pub fn enumerate_in_bases(param: &Param, inequalities: &[Row]) -> Result<Vec<Vec<Rat>>> {
    enumerate_reduced(param, inequalities, |a, b, d| {
        let mut found = BTreeSet::new();
        dfs(a, b, d, 0, &mut Vec::new(), &mut found);
        found
    })
}

fn enumerate_reduced(
    param: &Param,
    inequalities: &[Row],
    run: impl Fn(&[Vec<Rat>], &[Rat], usize) -> BTreeSet<Vec<Rat>>,
) -> Result<Vec<Vec<Rat>>> {
    let d = param.dim();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (row, rhs) in inequalities {
        let (r, k) = param.pull_row(row);
        a.push(r);
        b.push(rhs - k);
    }
    let zero_obj = vec![Rat::zero(); d];
    match solve_free(&a, &b, &zero_obj, d) {
        Reduced::Optimal(_) => {}
        _ => return Ok(vec![]),
    }
    if d == 0 {
        return Ok(vec![param.x0.clone()]);
    }
    if linalg::rank(&a, d) < d {
        return Ok(vec![]);
    }
    // keep one representative per direction: the binding right-hand side
    let mut reps: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for (row, rhs) in a.iter().zip(&b) {
        let Some(lead) = row.iter().find(|x| !x.is_zero()) else { continue };
        let s = Rat::one() / lead.abs();
        let nr: Vec<Rat> = row.iter().map(|x| x * &s).collect();
        let nb = rhs * &s;
        match reps.iter_mut().find(|(r, _)| *r == nr) {
            Some(e) => {
                if nb > e.1 {
                    e.1 = nb;
                }
            }
            None => reps.push((nr, nb)),
        }
    }
    let ra: Vec<Vec<Rat>> = reps.iter().map(|(r, _)| r.clone()).collect();
    let rb: Vec<Rat> = reps.iter().map(|(_, v)| v.clone()).collect();
    Ok(run(&ra, &rb, d).into_iter().map(|y| param.point(&y)).collect())
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

fn int_row(r: &[Rat]) -> Vec<BigInt> {
    let l = r.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    r.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone)]
struct DdRay {
    v: Vec<BigInt>,
    zeros: Vec<u64>,
}

fn bit(z: &mut [u64], i: usize) {
    z[i / 64] |= 1 << (i % 64);
}

/// Vertices of `{y : a y ≥ b}` (full column rank) from the extreme rays of
/// `{(y, t) : a y − b t ≥ 0, t ≥ 0}` with `t > 0`.
fn double_description(a: &[Vec<Rat>], b: &[Rat], d: usize) -> BTreeSet<Vec<Rat>> {
    let dim = d + 1;
    let mut rows: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut h = r.clone();
            h.push(-v.clone());
            int_row(&h)
        })
        .collect();
    let mut t = vec![BigInt::zero(); dim];
    t[d] = BigInt::one();
    rows.push(t);
    let m = rows.len();
    let words = m.div_ceil(64);
    // initial simplicial cone from dim independent rows
    let as_rat = |r: &[BigInt]| r.iter().map(|x| Rat::from_integer(x.clone())).collect::<Vec<_>>();
    let mut basis: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<Vec<Rat>> = Vec::new();
    for i in (0..m).rev() {
        let mut trial = basis_rows.clone();
        trial.push(as_rat(&rows[i]));
        if linalg::rank(&trial, dim) == trial.len() {
            basis.push(i);
            basis_rows = trial;
            if basis.len() == dim {
                break;
            }
        }
    }
    let mut rays: Vec<DdRay> = Vec::with_capacity(dim);
    for j in 0..dim {
        let rhs: Vec<Rat> = (0..dim).map(|k| if k == j { Rat::one() } else { Rat::zero() }).collect();
        let x = linalg::solve(&basis_rows, &rhs, dim).expect("independent rows");
        let mut zeros = vec![0u64; words];
        for (k, &bi) in basis.iter().enumerate() {
            if k != j {
                bit(&mut zeros, bi);
            }
        }
        rays.push(DdRay { v: primitive(int_row(&x)), zeros });
    }
    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for i in (0..m).filter(|i| !in_basis.contains(i)) {
        let h = &rows[i];
        let vals: Vec<BigInt> = rays.iter().map(|r| idot(h, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut next: Vec<DdRay> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[n].zeros).map(|(x, y)| x & y).collect();
                if (common.iter().map(|w| w.count_ones()).sum::<u32>() as usize) + 2 < dim {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(k, r)| {
                    k == p || k == n || common.iter().zip(&r.zeros).any(|(c, z)| c & !z != 0)
                });
                if !adjacent {
                    continue;
                }
                let v: Vec<BigInt> = rays[n].v.iter().zip(&rays[p].v).map(|(x, y)| &vals[p] * x - &vals[n] * y).collect();
                let mut zeros = common;
                bit(&mut zeros, i);
                next.push(DdRay { v: primitive(v), zeros });
            }
        }
        let mut kept: Vec<DdRay> = Vec::with_capacity(rays.len() + next.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_zero() {
                bit(&mut r.zeros, i);
            }
            if !vals[k].is_negative() {
                kept.push(r);
            }
        }
        kept.extend(next);
        rays = kept;
    }
    rays.into_iter()
        .filter(|r| r.v[d].is_positive())
        .map(|r| {
            let t = Rat::from_integer(r.v[d].clone());
            r.v[..d].iter().map(|x| Rat::from_integer(x.clone()) / &t).collect()
        })
        .collect()
}

fn dfs(a: &[Vec<Rat>], b: &[Rat], d: usize, start: usize, chosen: &mut Vec<usize>, found: &mut BTreeSet<Vec<Rat>>) {
    if chosen.len() == d {
        let rows: Vec<Vec<Rat>> = chosen.iter().map(|&i| a[i].clone()).collect();
        let rhs: Vec<Rat> = chosen.iter().map(|&i| b[i].clone()).collect();
        if let Some(y) = linalg::solve(&rows, &rhs, d) {
            if a.iter().zip(b).all(|(r, v)| &dot(r, &y) >= v) {
                found.insert(y);
            }
        }
        return;
    }
    let current: Vec<Vec<Rat>> = chosen.iter().map(|&i| a[i].clone()).collect();
    for i in start..a.len() {
        if a.len() - i < d - chosen.len() {
            break;
        }
        let mut rows = current.clone();
        rows.push(a[i].clone());
        if linalg::rank(&rows, d) < rows.len() {
            continue;
        }
        chosen.push(i);
        if chosen.len() == d || face_nonempty(a, b, chosen, d) {
            dfs(a, b, d, i + 1, chosen, found);
        }
        chosen.pop();
    }
}

fn face_nonempty(a: &[Vec<Rat>], b: &[Rat], tight: &[usize], d: usize) -> bool {
    let lp = LinearProgram {
        vars: d,
        equalities: tight.iter().map(|&i| (a[i].clone(), b[i].clone())).collect(),
        inequalities: a.iter().cloned().zip(b.iter().cloned()).collect(),
        objective: vec![Rat::zero(); d],
    };
    solve(&lp).status() == Status::Optimal
}
