//! Exact facet enumeration by the double-description method.
//!
//! For points `p_1..p_m` spanning `R^d` affinely, the facets of their convex
//! hull are the extreme rays of the pointed cone
//! `{ r in R^(d+1) : (1, p_i) . r >= 0 for all i }`.
//! Constraints are inserted one at a time; new rays are formed from adjacent
//! pairs straddling the inserted hyperplane. Adjacency uses the algebraic
//! test (the constraints tight at both rays have rank `d - 1`), which keeps
//! the method correct under the heavy degeneracy of lattice point sets.
//!
//! All arithmetic is on `i128` with overflow checks; every ray is kept
//! primitive (coordinates divided by their gcd).

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A facet `normal . x + offset >= 0` of the hull, with the indices of the
/// input points lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet {
    pub normal: Vec<i128>,
    pub offset: i128,
    pub incidence: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Box<[u64]>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)].into_boxed_slice())
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & b).collect())
    }

    fn count_and(&self, other: &Bits) -> u32 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a & b).count_ones()).sum()
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }
}

#[derive(Clone, Debug)]
struct Ray {
    coords: Vec<i128>,
    zeros: Bits,
}

fn overflow() -> Error {
    Error::Overflow("exact convex hull")
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter()
        .zip(b)
        .try_fold(0i128, |acc, (&x, &y)| x.checked_mul(y).and_then(|t| acc.checked_add(t)).ok_or_else(overflow))
}

fn make_primitive(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// Incremental row echelon form over the integers, used for rank tests.
#[derive(Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis; returns true if it was independent.
    pub(crate) fn insert(&mut self, row: &[i128]) -> Result<bool> {
        let mut r = row.to_vec();
        for (pivot, basis) in &self.rows {
            let f = r[*pivot];
            if f == 0 {
                continue;
            }
            let p = basis[*pivot];
            for (x, &b) in r.iter_mut().zip(basis) {
                *x = p
                    .checked_mul(*x)
                    .and_then(|u| f.checked_mul(b).and_then(|v| u.checked_sub(v)))
                    .ok_or_else(overflow)?;
            }
            make_primitive(&mut r);
        }
        match r.iter().position(|&x| x != 0) {
            Some(pivot) => {
                self.rows.push((pivot, r));
                Ok(true)
            }
            None => Ok(false),
        }
    }
}

/// Rank of a set of integer rows.
pub fn rank<'a>(rows: impl IntoIterator<Item = &'a [i128]>) -> Result<usize> {
    let mut e = Echelon::default();
    for r in rows {
        e.insert(r)?;
    }
    Ok(e.rank())
}

fn det(mut m: Vec<Vec<i128>>) -> Result<i128> {
    // Bareiss fraction-free elimination.
    let k = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for i in 0..k {
        if m[i][i] == 0 {
            match (i + 1..k).find(|&r| m[r][i] != 0) {
                Some(r) => {
                    m.swap(i, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for r in i + 1..k {
            for c in i + 1..k {
                let num = m[r][c]
                    .checked_mul(m[i][i])
                    .and_then(|u| m[r][i].checked_mul(m[i][c]).and_then(|v| u.checked_sub(v)))
                    .ok_or_else(overflow)?;
                m[r][c] = num / prev;
            }
        }
        prev = m[i][i];
    }
    Ok(sign * m[k - 1][k - 1])
}

/// Primitive generator of the one-dimensional kernel of a full-rank
/// `(k-1) x k` integer matrix, by cofactor expansion.
pub(crate) fn kernel_vector(rows: &[&[i128]]) -> Result<Vec<i128>> {
    let k = rows.len() + 1;
    let mut v = Vec::with_capacity(k);
    for skip in 0..k {
        let minor: Vec<Vec<i128>> =
            rows.iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != skip).map(|(_, &x)| x).collect()).collect();
        let d = det(minor)?;
        v.push(if skip % 2 == 0 { d } else { -d });
    }
    make_primitive(&mut v);
    Ok(v)
}

/// Computes all facets of the convex hull of `points` (each of dimension
/// `dim`). Fails with [`Error::DegenerateHull`] if the points do not span
/// `R^dim` affinely.
pub fn convex_hull_facets(points: &[Vec<i64>], dim: usize) -> Result<Vec<HullFacet>> {
    let width = dim + 1;
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|p| {
            assert_eq!(p.len(), dim, "point dimension mismatch");
            std::iter::once(1i128).chain(p.iter().map(|&x| i128::from(x))).collect()
        })
        .collect();
    let m = rows.len();

    let mut echelon = Echelon::default();
    let mut basis = Vec::with_capacity(width);
    for (i, r) in rows.iter().enumerate() {
        if echelon.insert(r)? {
            basis.push(i);
            if basis.len() == width {
                break;
            }
        }
    }
    if basis.len() < width {
        return Err(Error::DegenerateHull { dimension: basis.len().saturating_sub(1), expected: dim });
    }

    // Initial simplicial cone: ray j is tight on every basis row but row j.
    let mut rays = Vec::with_capacity(width);
    for (j, &bj) in basis.iter().enumerate() {
        let others: Vec<&[i128]> =
            basis.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &b)| rows[b].as_slice()).collect();
        let mut coords = kernel_vector(&others)?;
        if dot(&coords, &rows[bj])? < 0 {
            coords.iter_mut().for_each(|x| *x = -*x);
        }
        let mut zeros = Bits::new(m);
        basis.iter().filter(|&&b| b != bj).for_each(|&b| zeros.set(b));
        rays.push(Ray { coords, zeros });
    }

    let mut in_basis = vec![false; m];
    basis.iter().for_each(|&b| in_basis[b] = true);
    let need = (width - 2) as u32;

    for (idx, row) in rows.iter().enumerate() {
        if in_basis[idx] {
            continue;
        }
        let values: Vec<i128> = rays.par_iter().map(|r| dot(&r.coords, row)).collect::<Result<_>>()?;
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i] < 0).collect();
        if neg.is_empty() {
            for (r, &v) in rays.iter_mut().zip(&values) {
                if v == 0 {
                    r.zeros.set(idx);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i] > 0).collect();

        let created: Vec<Ray> = pos
            .par_iter()
            .map(|&p| {
                let mut out = Vec::new();
                for &q in &neg {
                    let (rp, rq) = (&rays[p], &rays[q]);
                    if rp.zeros.count_and(&rq.zeros) < need {
                        continue;
                    }
                    let common = rp.zeros.and(&rq.zeros);
                    let mut e = Echelon::default();
                    let mut adjacent = false;
                    for i in common.ones() {
                        e.insert(&rows[i])?;
                        if e.rank() >= need as usize {
                            adjacent = true;
                            break;
                        }
                    }
                    if !adjacent {
                        continue;
                    }
                    let (vp, vq) = (values[p], values[q]);
                    let mut coords = rp
                        .coords
                        .iter()
                        .zip(&rq.coords)
                        .map(|(&x, &y)| {
                            vp.checked_mul(y)
                                .and_then(|u| vq.checked_mul(x).and_then(|v| u.checked_sub(v)))
                                .ok_or_else(overflow)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    make_primitive(&mut coords);
                    let mut zeros = common;
                    zeros.set(idx);
                    out.push(Ray { coords, zeros });
                }
                Ok(out)
            })
            .collect::<Result<Vec<Vec<Ray>>>>()?
            .into_iter()
            .flatten()
            .collect();

        let mut next = Vec::with_capacity(rays.len() - neg.len() + created.len());
        for (mut r, &v) in rays.into_iter().zip(&values) {
            if v > 0 {
                next.push(r);
            } else if v == 0 {
                r.zeros.set(idx);
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
    }

    Ok(rays
        .into_iter()
        .map(|r| HullFacet { offset: r.coords[0], normal: r.coords[1..].to_vec(), incidence: r.zeros.ones().collect() })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<i64>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn square_has_four_edges() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[0, 0]]);
        let f = convex_hull_facets(&p, 2).unwrap();
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn cube_with_interior_and_face_points() {
        let mut p = Vec::new();
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    p.push(vec![x, y, z]);
                }
            }
        }
        let f = convex_hull_facets(&p, 3).unwrap();
        assert_eq!(f.len(), 6);
        for facet in &f {
            assert_eq!(facet.incidence.len(), 9);
        }
    }

    #[test]
    fn cross_polytope_in_four_dimensions() {
        let mut p = Vec::new();
        for i in 0..4 {
            for s in [-1, 1] {
                let mut v = vec![0; 4];
                v[i] = s;
                p.push(v);
            }
        }
        assert_eq!(convex_hull_facets(&p, 4).unwrap().len(), 16);
    }

    #[test]
    fn degenerate_input_reports_dimension() {
        let p = pts(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2], &[1, 0, 0]]);
        assert_eq!(convex_hull_facets(&p, 3), Err(Error::DegenerateHull { dimension: 2, expected: 3 }));
    }

    #[test]
    fn kernel_vector_is_orthogonal() {
        let a = [1i128, 2, 3];
        let b = [4i128, 5, 6];
        let v = kernel_vector(&[&a, &b]).unwrap();
        assert_eq!(dot(&v, &a).unwrap(), 0);
        assert_eq!(dot(&v, &b).unwrap(), 0);
        assert_eq!(v.iter().fold(0i128, |g, &x| g.gcd(&x)), 1);
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(det(vec![vec![2, 0], vec![0, 3]]).unwrap(), 6);
        assert_eq!(det(vec![vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(det(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).unwrap(), -3);
    }
}
