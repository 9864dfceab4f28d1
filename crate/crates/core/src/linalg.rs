//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rat::Rat;

/// Reduced row echelon form restricted to the first `ncols` columns.
/// Rows may be wider (an augmented right-hand side rides along).
pub struct Rref {
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

pub fn rref(mut m: Vec<Vec<Rat>>, ncols: usize) -> Rref {
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = Rat::one() / &m[rank][col];
        if !inv.is_one() {
            for x in m[rank].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let nz: Vec<usize> = (0..m[rank].len()).filter(|&j| !m[rank][j].is_zero()).collect();
        let piv = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for &j in &nz {
                let d = &f * &piv[j];
                row[j] -= d;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let rows = m.into_iter().take(rank).collect();
    Rref { rows, pivots }
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).pivots.len()
}

/// Basis of `{x : rows·x = 0}`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let r = rref(rows.to_vec(), ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); ncols];
        v[f] = Rat::one();
        for (row, &p) in r.rows.iter().zip(&r.pivots) {
            if !row[f].is_zero() {
                v[p] = -row[f].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `a·x = b` (free variables set to zero), if one exists.
pub fn solve(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let r = rref(aug, ncols);
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in r.rows.iter().zip(&r.pivots) {
        x[p] = row[ncols].clone();
    }
    for (row, rhs) in a.iter().zip(b) {
        if &crate::rat::dot(row, &x) != rhs {
            return None;
        }
    }
    Some(x)
}

/// Affine parametrization `x = x0 + Σ y_k basis[k]` of an equality system.
#[derive(Debug, Clone)]
pub struct Param {
    pub x0: Vec<Rat>,
    pub basis: Vec<Vec<Rat>>,
}

impl Param {
    pub fn free(m: usize) -> Param {
        let basis = (0..m)
            .map(|k| {
                let mut v = vec![Rat::zero(); m];
                v[k] = Rat::one();
                v
            })
            .collect();
        Param { x0: vec![Rat::zero(); m], basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn point(&self, y: &[Rat]) -> Vec<Rat> {
        let mut x = self.x0.clone();
        for (yk, bk) in y.iter().zip(&self.basis) {
            if yk.is_zero() {
                continue;
            }
            for (xi, bi) in x.iter_mut().zip(bk) {
                if !bi.is_zero() {
                    *xi += yk * bi;
                }
            }
        }
        x
    }

    pub fn direction(&self, y: &[Rat]) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.x0.len()];
        for (yk, bk) in y.iter().zip(&self.basis) {
            if yk.is_zero() {
                continue;
            }
            for (xi, bi) in x.iter_mut().zip(bk) {
                if !bi.is_zero() {
                    *xi += yk * bi;
                }
            }
        }
        x
    }

    /// Row `a` expressed in the parameters: `(a·basis_k)_k`, constant `a·x0`.
    pub fn pull_row(&self, a: &[Rat]) -> (Vec<Rat>, Rat) {
        let row = self.basis.iter().map(|b| crate::rat::dot(a, b)).collect();
        (row, crate::rat::dot(a, &self.x0))
    }
}

/// Parametrize `{x ∈ R^m : eqs}`. On inconsistency returns `y` with
/// `Σ y_i row_i = 0` and `Σ y_i rhs_i ≠ 0`.
pub fn eliminate(eqs: &[(Vec<Rat>, Rat)], m: usize) -> Result<Param, Vec<Rat>> {
    if eqs.is_empty() {
        return Ok(Param::free(m));
    }
    let rows: Vec<Vec<Rat>> = eqs.iter().map(|(r, _)| r.clone()).collect();
    let rhs: Vec<Rat> = eqs.iter().map(|(_, c)| c.clone()).collect();
    match solve(&rows, &rhs, m) {
        Some(x0) => Ok(Param { x0, basis: nullspace(&rows, m) }),
        None => Err(inconsistency_certificate(eqs, m)),
    }
}

fn inconsistency_certificate(eqs: &[(Vec<Rat>, Rat)], m: usize) -> Vec<Rat> {
    let k = eqs.len();
    let aug: Vec<Vec<Rat>> = eqs
        .iter()
        .enumerate()
        .map(|(i, (r, c))| {
            let mut row = r.clone();
            row.push(c.clone());
            row.extend((0..k).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    // eliminate on the first m columns only, then look for 0 = nonzero rows
    let mut m_rows = aug;
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..m_rows.len()).find(|&r| !m_rows[r][col].is_zero()) else {
            continue;
        };
        m_rows.swap(rank, p);
        let inv = Rat::one() / &m_rows[rank][col];
        for x in m_rows[rank].iter_mut() {
            *x *= &inv;
        }
        let piv = m_rows[rank].clone();
        for (i, row) in m_rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&piv) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        rank += 1;
    }
    for row in &m_rows[rank..] {
        if !row[m].is_zero() {
            return row[m + 1..].to_vec();
        }
    }
    vec![Rat::zero(); k]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{dot, ints};

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![ints(&[1, 2, 3]), ints(&[2, 4, 6]), ints(&[0, 1, 1])];
        assert_eq!(rank(&rows, 3), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
    }

    #[test]
    fn eliminate_consistent_and_not() {
        let eqs = vec![(ints(&[1, 1]), crate::rat::int(2))];
        let p = eliminate(&eqs, 2).unwrap();
        assert_eq!(p.dim(), 1);
        let x = p.point(&[crate::rat::int(5)]);
        assert_eq!(dot(&eqs[0].0, &x), crate::rat::int(2));

        let bad = vec![(ints(&[1, 1]), crate::rat::int(2)), (ints(&[2, 2]), crate::rat::int(3))];
        let y = eliminate(&bad, 2).unwrap_err();
        let comb: Vec<Rat> = (0..2)
            .map(|j| bad.iter().zip(&y).map(|((r, _), yi)| &r[j] * yi).sum())
            .collect();
        assert!(comb.iter().all(Zero::is_zero));
        let rhs: Rat = bad.iter().zip(&y).map(|((_, c), yi)| c * yi).sum();
        assert!(!rhs.is_zero());
    }
}
