//! Reference complexes and functions used by tests, examples and the CLI.

use std::sync::Arc;

use num_traits::Zero;

use crate::complex::{Complex, Halfspace, Hyperplane};
use crate::cpwl::{AffineMap, Cpwl};
use crate::error::Result;
use crate::rat::{int, ints, Rat};

/// The six-sector fan with rays ±e1, ±e2, ±(1,1); cell 0 is `0 ≤ x2 ≤ x1`, then counterclockwise
/// (cell 3 is `x1 ≤ x2 ≤ 0`).
pub fn six_fan() -> Complex {
    Complex::fan2d(&[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]]).expect("fixed fan")
}

/// Median of `(x1, x2, 0)` on the six-sector fan.
pub fn median() -> Cpwl {
    let c = Arc::new(six_fan());
    let e = |a: i64, b: i64| AffineMap::new(ints(&[a, b]), Rat::zero());
    let pieces = vec![e(0, 1), e(1, 0), e(0, 0), e(0, 1), e(1, 0), e(0, 0)];
    Cpwl::new(c, pieces).expect("fixed pieces")
}

/// `max(x1, x2, 0)` on a planar complex.
pub fn max_x1_x2_0(c: Arc<Complex>) -> Cpwl {
    max_of(c, &[AffineMap::new(ints(&[1, 0]), int(0)), AffineMap::new(ints(&[0, 1]), int(0)), AffineMap::zero(2)])
}

/// Pointwise maximum of affine maps, read off at cell interiors; ties pick the first maximizer.
pub fn max_of(c: Arc<Complex>, maps: &[AffineMap]) -> Cpwl {
    Cpwl::from_pointwise(c, |x| argmax(maps, x).clone()).expect("complex has interior points")
}

pub fn argmax<'a>(maps: &'a [AffineMap], x: &[Rat]) -> &'a AffineMap {
    let mut best = &maps[0];
    let mut bv = best.eval(x);
    for m in &maps[1..] {
        let v = m.eval(x);
        if v > bv {
            best = m;
            bv = v;
        }
    }
    best
}

/// `max_i (⟨a_i, x⟩ + b_i)` on the subdivision into the regions where each map attains the maximum.
pub fn max_affine(n: usize, maps: &[AffineMap]) -> Result<Cpwl> {
    let mut uniq: Vec<AffineMap> = maps.to_vec();
    uniq.sort();
    uniq.dedup();
    let mut cells = Vec::new();
    let mut pieces = Vec::new();
    for (i, m) in uniq.iter().enumerate() {
        let mut ineqs = Vec::new();
        let mut dominated = false;
        for (j, o) in uniq.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = crate::rat::sub(&m.a, &o.a);
            if d.iter().all(|x| x.is_zero()) {
                dominated |= o.b > m.b;
                continue;
            }
            ineqs.push(Halfspace::new(&d, &o.b - &m.b)?);
        }
        if !dominated && crate::complex::relative_interior(&ineqs, &[], n).is_some() {
            cells.push(ineqs);
            pieces.push(m.clone());
        }
    }
    if cells.is_empty() {
        return Err(crate::Error::EmptyList);
    }
    if cells.len() == 1 {
        return Ok(Cpwl::affine(Arc::new(Complex::arrangement(&[], n)?), pieces.swap_remove(0)));
    }
    Cpwl::new(Arc::new(Complex::assemble(n, cells)?), pieces)
}

/// Rays of the planar fan with weights (1, 1, -1/3, -1/3) used for the minimal 2D construction.
pub const TRAN_RAYS: [[i64; 2]; 4] = [[1, 0], [0, 1], [1, 2], [2, 1]];

pub fn tran_weights() -> Vec<Rat> {
    vec![int(1), int(1), crate::rat::frac(-1, 3), crate::rat::frac(-1, 3)]
}

/// The plane split by `x1 = 0`.
pub fn halfplanes() -> Complex {
    Complex::arrangement(&[Hyperplane::from_ints(&[1, 0], int(0)).unwrap()], 2).expect("fixed arrangement")
}

/// The real line cut at the given increasing breakpoints.
pub fn line(breakpoints: &[Rat]) -> Result<Complex> {
    let mut cells = Vec::new();
    let m = breakpoints.len();
    for i in 0..=m {
        let mut ineqs = Vec::new();
        if i > 0 {
            ineqs.push(Halfspace::new(&[int(1)], breakpoints[i - 1].clone())?);
        }
        if i < m {
            ineqs.push(Halfspace::new(&[int(-1)], -breakpoints[i].clone())?);
        }
        cells.push(ineqs);
    }
    Complex::assemble(1, cells)
}

/// 1D function with given slope changes at the breakpoints, zero on the leftmost cell.
pub fn line_function(breakpoints: &[Rat], kinks: &[Rat]) -> Result<Cpwl> {
    let c = Arc::new(line(breakpoints)?);
    let mut pieces = vec![AffineMap::zero(1)];
    for (t, k) in breakpoints.iter().zip(kinks) {
        let last = pieces.last().unwrap().clone();
        pieces.push(last.add(&AffineMap::new(vec![k.clone()], -(k * t))));
    }
    Cpwl::new(c, pieces)
}

/// Maximal cones of a pointed 3D fan with zero weight added on three cones `(−e_i, −e_j)`
/// so that the region outside the drawn hexagon splits into four orthant cones.
pub const COUNTEREXAMPLE_CONES: [[[i64; 3]; 3]; 28] = [
    [[0, 1, 0], [-1, 0, 0], [1, 2, 1]],
    [[0, 0, -1], [0, 1, 0], [1, 2, 1]],
    [[1, 0, 0], [0, 0, -1], [2, 1, 1]],
    [[0, -1, 0], [1, 0, 0], [2, 1, 1]],
    [[0, 0, 1], [0, -1, 0], [1, 1, 2]],
    [[-1, 0, 0], [0, 0, 1], [1, 1, 2]],
    [[-1, 0, 0], [0, 1, 1], [1, 2, 1]],
    [[0, 1, 1], [-1, 0, 0], [1, 1, 2]],
    [[0, 0, -1], [1, 1, 0], [2, 1, 1]],
    [[1, 1, 0], [0, 0, -1], [1, 2, 1]],
    [[0, -1, 0], [1, 0, 1], [1, 1, 2]],
    [[1, 0, 1], [0, -1, 0], [2, 1, 1]],
    [[1, 2, 1], [0, 1, 1], [1, 2, 2]],
    [[1, 1, 0], [1, 2, 1], [2, 2, 1]],
    [[2, 1, 1], [1, 1, 0], [2, 2, 1]],
    [[1, 0, 1], [2, 1, 1], [2, 1, 2]],
    [[1, 1, 2], [1, 0, 1], [2, 1, 2]],
    [[0, 1, 1], [1, 1, 2], [1, 2, 2]],
    [[1, 2, 1], [1, 2, 2], [1, 1, 1]],
    [[1, 2, 2], [1, 1, 2], [1, 1, 1]],
    [[1, 1, 2], [2, 1, 2], [1, 1, 1]],
    [[2, 1, 2], [2, 1, 1], [1, 1, 1]],
    [[2, 1, 1], [2, 2, 1], [1, 1, 1]],
    [[2, 2, 1], [1, 2, 1], [1, 1, 1]],
    [[-1, 0, 0], [0, 0, -1], [0, -1, 0]],
    [[-1, 0, 0], [0, 1, 0], [0, 0, -1]],
    [[0, 0, -1], [1, 0, 0], [0, -1, 0]],
    [[0, -1, 0], [0, 0, 1], [-1, 0, 0]],
];

fn cross3(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// H-representation of a pointed cone in R³ from its rays.
pub fn cone3(rays: &[[i64; 3]]) -> Result<Vec<Halfspace>> {
    let mut out = Vec::new();
    for (i, &a) in rays.iter().enumerate() {
        for &b in &rays[i + 1..] {
            let n = cross3(a, b);
            if n == [0, 0, 0] {
                continue;
            }
            let vals: Vec<i64> = rays.iter().map(|r| n[0] * r[0] + n[1] * r[1] + n[2] * r[2]).collect();
            if vals.iter().all(|&v| v >= 0) {
                out.push(Halfspace::from_ints(&n, Rat::zero())?);
            } else if vals.iter().all(|&v| v <= 0) {
                out.push(Halfspace::from_ints(&[-n[0], -n[1], -n[2]], Rat::zero())?);
            }
        }
    }
    Ok(out)
}

/// `max(0, max_{i≠j} min(x_i, x_j − x_i))` on the fan of [`COUNTEREXAMPLE_CONES`].
pub fn counterexample_function() -> Cpwl {
    let cells = COUNTEREXAMPLE_CONES.iter().map(|r| cone3(r).expect("fixed cone")).collect();
    let c = Arc::new(Complex::assemble(3, cells).expect("fixed fan"));
    let e = |v: [i64; 3]| AffineMap::new(ints(&v), Rat::zero());
    let pieces = COUNTEREXAMPLE_CONES
        .iter()
        .map(|rays| {
            let x: Vec<Rat> = (0..3).map(|k| int(rays.iter().map(|r| r[k]).sum())).collect();
            let mut cands = vec![AffineMap::zero(3)];
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        let mut xi = [0; 3];
                        xi[i] = 1;
                        let mut d = [0; 3];
                        d[j] = 1;
                        d[i] = -1;
                        let (a, b) = (e(xi), e(d));
                        cands.push(if a.eval(&x) <= b.eval(&x) { a } else { b });
                    }
                }
            }
            argmax(&cands, &x).clone()
        })
        .collect();
    Cpwl::new(c, pieces).expect("fixed pieces")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_values_match_sort() {
        let f = median();
        for x in -3..=3 {
            for y in -3..=3 {
                let mut v = [x, y, 0];
                v.sort();
                assert_eq!(f.evaluate(&ints(&[x, y])), int(v[1]));
            }
        }
    }

    #[test]
    fn counterexample_fan_shape_and_weights() {
        let f = counterexample_function();
        let c = &f.complex;
        assert_eq!((c.cells.len(), c.facets.len(), c.faces2.len()), (28, 42, 16));
        assert!(c.validate().is_valid());
        assert!(f.is_continuous());
        let w = f.weights();
        let mut by_pair = std::collections::BTreeMap::new();
        for t in &c.faces2 {
            for &(_, s) in &t.star {
                by_pair.entry(s).or_insert_with(Vec::new).push(t.point.clone());
            }
        }
        let expect = |a: [i64; 3], b: [i64; 3]| -> Rat {
            let sorted = |mut v: [i64; 3]| {
                v.sort();
                v
            };
            let (sa, sb) = (sorted(a), sorted(b));
            let unit = |v: [i64; 3]| v.iter().filter(|&&x| x != 0).count() == 1;
            let neg = |v: [i64; 3]| v.iter().any(|&x| x < 0);
            match (unit(a), unit(b)) {
                (true, true) if neg(a) && neg(b) => int(0),
                (true, true) => int(1),
                _ => {
                    let (u, o) = if unit(a) { (a, b) } else if unit(b) { (b, a) } else { ([0; 3], [0; 3]) };
                    if u != [0; 3] {
                        let so = sorted(o);
                        return match (neg(u), so) {
                            (true, [0, 1, 1]) => int(2),
                            (true, [1, 1, 2]) => int(-1),
                            (false, [1, 1, 2]) => int(1),
                            _ => panic!("unexpected cone {a:?} {b:?}"),
                        };
                    }
                    match (sa, sb) {
                        ([0, 1, 1], [1, 1, 2]) | ([1, 1, 2], [0, 1, 1]) => int(1),
                        ([1, 1, 2], [1, 2, 2]) | ([1, 2, 2], [1, 1, 2]) => int(-1),
                        ([1, 1, 1], _) | (_, [1, 1, 1]) => int(1),
                        ([0, 1, 1], [1, 2, 2]) | ([1, 2, 2], [0, 1, 1]) => int(0),
                        _ => panic!("unexpected cone {a:?} {b:?}"),
                    }
                }
            }
        };
        for (s, pts) in by_pair {
            let r: Vec<[i64; 3]> = pts
                .iter()
                .map(|p| {
                    let v = crate::rat::primitive_normal(p).unwrap();
                    [0, 1, 2].map(|k| i64::try_from(&v[k]).unwrap())
                })
                .collect();
            assert_eq!(w[s], expect(r[0], r[1]), "{r:?}");
        }
    }

    #[test]
    fn line_function_kinks() {
        let f = line_function(&ints(&[0, 1, 2]), &ints(&[1, -1, 1])).unwrap();
        assert!(f.is_continuous());
        assert_eq!(f.weights(), ints(&[1, -1, 1]));
        assert_eq!(f.evaluate(&ints(&[3])), int(2));
    }
}
