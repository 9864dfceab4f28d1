//! Placement of local minimal polygons around the rays of a 3D fan.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::lp::{self, Farkas, LinearProgram, LpResult, Row};
use crate::rat::{self, big, bigs, Rat};

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonEdge {
    /// facet with positive weight, or `None` for the closing edge
    pub facet: Option<usize>,
    pub vector: Vec<Rat>,
}

/// Edges in cyclic order around the ray of a codimension-2 face.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub face: usize,
    pub ray: Vec<BigInt>,
    pub edges: Vec<PolygonEdge>,
}

impl Polygon {
    pub fn closing(&self) -> Option<&PolygonEdge> {
        self.edges.iter().find(|e| e.facet.is_none())
    }
}

/// Linear identification system over one placement vector `x_τ ∈ R³` per face.
#[derive(Debug, Clone)]
pub struct GluingSystem {
    pub faces: Vec<usize>,
    pub polygons: Vec<Polygon>,
    pub equalities: Vec<Row>,
}

#[derive(Debug, Clone)]
pub enum Gluing {
    Feasible { system: GluingSystem, placements: BTreeMap<usize, Vec<Rat>> },
    Infeasible { system: GluingSystem, certificate: Farkas },
}

impl Gluing {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Gluing::Feasible { .. })
    }

    pub fn system(&self) -> &GluingSystem {
        match self {
            Gluing::Feasible { system, .. } | Gluing::Infeasible { system, .. } => system,
        }
    }

    /// Exact check of the Farkas certificate against the system.
    pub fn certificate_verifies(&self) -> bool {
        match self {
            Gluing::Infeasible { system, certificate } => {
                certificate.verify(&system.equalities, &[], 3 * system.faces.len())
            }
            Gluing::Feasible { .. } => false,
        }
    }
}

fn cross(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Counterclockwise angular order around `axis` starting from `reference`.
fn angle_order(axis: &[Rat], reference: &[Rat], a: &[Rat], b: &[Rat]) -> Ordering {
    let half = |v: &[Rat]| {
        let s = rat::dot(axis, &cross(reference, v));
        if s.is_positive() || (s.is_zero() && rat::dot(reference, v).is_positive()) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let s = rat::dot(axis, &cross(a, b));
    if s.is_positive() {
        Ordering::Less
    } else if s.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Rays (as codimension-2 faces) bounding each facet of a pointed 3D fan.
fn facet_rays(c: &Complex) -> Result<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); c.facets.len()];
    for t in &c.faces2 {
        for &(_, f) in &t.star {
            if !out[f].contains(&t.id) {
                out[f].push(t.id);
            }
        }
    }
    if out.iter().any(|r| r.len() != 2) {
        return Err(Error::Invalid("every facet of a pointed 3D fan has exactly two rays".into()));
    }
    Ok(out)
}

/// Build the local minimal polygons of `ω⁺` and the identification system, then solve it.
pub fn polygon_gluing(c: &Complex, omega: &[Rat]) -> Result<Gluing> {
    if c.dim != 3 || !c.is_fan() {
        return Err(Error::Invalid("polygon gluing needs a fan in R³".into()));
    }
    if omega.len() != c.facets.len() {
        return Err(Error::DimMismatch { expected: c.facets.len(), got: omega.len() });
    }
    for t in &c.faces2 {
        if !t.closed || !rat::is_zero_vec(&c.star_residual(t, omega)) {
            return Err(Error::NotBalanced { face: t.id });
        }
    }
    let rays_of = facet_rays(c)?;
    let ray_dir: Vec<Vec<Rat>> = c.faces2.iter().map(|t| t.point.clone()).collect();
    let mut polygons = Vec::new();
    // canonical start of each positive facet's segment inside each polygon
    let mut starts: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
    for t in &c.faces2 {
        let r = &ray_dir[t.id];
        let mut edges: Vec<(PolygonEdge, i32)> = Vec::new();
        let mut total = vec![Rat::zero(); 3];
        for &(_, s) in &t.star {
            let w = &omega[s];
            if !w.is_positive() {
                continue;
            }
            let other = rays_of[s].iter().find(|&&x| x != t.id).copied().unwrap();
            let nu = bigs(&c.facets[s].normal);
            let sign = if rat::dot(&cross(r, &ray_dir[other]), &nu).is_positive() { 1 } else { -1 };
            let v = rat::scale(&nu, &(w * Rat::from_integer(sign.into())));
            total = rat::add(&total, &v);
            edges.push((PolygonEdge { facet: Some(s), vector: v }, sign));
        }
        if edges.is_empty() {
            continue;
        }
        if !rat::is_zero_vec(&total) {
            let closing = total.iter().map(|x| -x).collect();
            edges.push((PolygonEdge { facet: None, vector: closing }, 0));
        }
        let reference = edges[0].0.vector.clone();
        edges.sort_by(|(a, _), (b, _)| {
            angle_order(r, &reference, &a.vector, &b.vector).then_with(|| a.facet.is_none().cmp(&b.facet.is_none()))
        });
        let mut p = vec![Rat::zero(); 3];
        for (e, sign) in &edges {
            if let Some(s) = e.facet {
                let q = if *sign > 0 { p.clone() } else { rat::add(&p, &e.vector) };
                starts.insert((s, t.id), q);
            }
            p = rat::add(&p, &e.vector);
        }
        let ray = rat::primitive_normal(r)?;
        polygons.push(Polygon { face: t.id, ray, edges: edges.into_iter().map(|(e, _)| e).collect() });
    }
    let faces: Vec<usize> = polygons.iter().map(|p| p.face).collect();
    let index: BTreeMap<usize, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let vars = 3 * faces.len();
    let mut equalities = Vec::new();
    for (s, w) in omega.iter().enumerate() {
        if !w.is_positive() {
            continue;
        }
        let (t1, t2) = (rays_of[s][0], rays_of[s][1]);
        let (q1, q2) = (&starts[&(s, t1)], &starts[&(s, t2)]);
        for k in 0..3 {
            let mut row = vec![Rat::zero(); vars];
            row[3 * index[&t1] + k] += big(&BigInt::from(1));
            row[3 * index[&t2] + k] -= big(&BigInt::from(1));
            equalities.push((row, &q2[k] - &q1[k]));
        }
    }
    let system = GluingSystem { faces, polygons, equalities };
    let lp = LinearProgram {
        vars,
        equalities: system.equalities.clone(),
        inequalities: vec![],
        objective: vec![Rat::zero(); vars],
    };
    Ok(match lp::solve(&lp) {
        LpResult::Optimal { point, .. } => {
            let placements = system.faces.iter().enumerate().map(|(i, &f)| (f, point[3 * i..3 * i + 3].to_vec())).collect();
            Gluing::Feasible { system, placements }
        }
        LpResult::Infeasible(certificate) => Gluing::Infeasible { system, certificate },
        LpResult::Unbounded { .. } => unreachable!("zero objective"),
    })
}
