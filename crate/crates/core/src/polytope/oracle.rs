//! Brute-force facet enumeration used to cross-check the hull.
//!
//! Every 5-subset of vertices is tried: if it spans a hyperplane and all
//! vertices lie on one side of it, the hyperplane is a facet. Cost grows as
//! `C(2(n^2+1), 5)`, so it is only offered for small `n`.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;

use super::{to_inequality, vertices, DIMENSION};
use crate::error::{Error, Result};
use crate::model::BellInequality;

pub const BRUTEFORCE_FACET_LIMIT: u32 = 6;

const W: usize = DIMENSION + 1;
type Row = [i128; W];

/// Normal `(offset, a1..a5)` of the hyperplane through five homogeneous
/// points, or `None` when they are affinely dependent.
fn hyperplane(points: &[Row; DIMENSION]) -> Option<Row> {
    let mut m = *points;
    let mut pivots = [usize::MAX; DIMENSION];
    let mut row = 0;
    for col in 0..W {
        if row == DIMENSION {
            break;
        }
        let Some(p) = (row..DIMENSION).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, p);
        for r in 0..DIMENSION {
            if r != row && m[r][col] != 0 {
                let (f, g) = (m[r][col], m[row][col]);
                let pivot = m[row];
                for (x, p) in m[r].iter_mut().zip(pivot) {
                    *x = g * *x - f * p;
                }
                let d = m[r].iter().fold(0i128, |acc, &x| acc.gcd(&x));
                if d > 1 {
                    m[r].iter_mut().for_each(|x| *x /= d);
                }
            }
        }
        pivots[row] = col;
        row += 1;
    }
    if row < DIMENSION {
        return None;
    }
    let free = (0..W).find(|c| !pivots.contains(c))?;
    // Row i reads m[i][p_i] x_{p_i} + m[i][free] x_free = 0.
    let l = (0..DIMENSION).fold(1i128, |acc, i| acc.lcm(&m[i][pivots[i]]));
    let mut x = [0i128; W];
    x[free] = l;
    for i in 0..DIMENSION {
        x[pivots[i]] = -l / m[i][pivots[i]] * m[i][free];
    }
    let g = x.iter().fold(0i128, |acc, &v| acc.gcd(&v));
    x.iter_mut().for_each(|v| *v /= g);
    Some(x)
}

/// All facets of the polytope for `n <= 6`, in canonical sorted form.
pub fn facets_bruteforce(n: u32) -> Result<Vec<BellInequality>> {
    if n < 2 {
        return Err(Error::Precondition(format!("facet enumeration needs n >= 2, got {n}")));
    }
    if n > BRUTEFORCE_FACET_LIMIT {
        return Err(Error::TooLarge { what: "brute-force facet oracle", n, limit: BRUTEFORCE_FACET_LIMIT });
    }
    let rows: Vec<Row> = vertices(n)?
        .iter()
        .map(|v| {
            let c = v.coordinates();
            [1, c[0].into(), c[1].into(), c[2].into(), c[3].into(), c[4].into()]
        })
        .collect();
    let m = rows.len();

    let found: BTreeSet<Row> = (0..m)
        .into_par_iter()
        .map(|i0| {
            let mut local = BTreeSet::new();
            for i1 in i0 + 1..m {
                for i2 in i1 + 1..m {
                    for i3 in i2 + 1..m {
                        for i4 in i3 + 1..m {
                            let subset = [rows[i0], rows[i1], rows[i2], rows[i3], rows[i4]];
                            let Some(h) = hyperplane(&subset) else { continue };
                            let (mut pos, mut neg) = (false, false);
                            for r in &rows {
                                let s: i128 = h.iter().zip(r).map(|(a, b)| a * b).sum();
                                pos |= s > 0;
                                neg |= s < 0;
                                if pos && neg {
                                    break;
                                }
                            }
                            if pos && neg {
                                continue;
                            }
                            let oriented = if neg { h.map(|x| -x) } else { h };
                            local.insert(oriented);
                        }
                    }
                }
            }
            local
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });

    let mut out = found.iter().map(|h| to_inequality(n, &h[1..], h[0])).collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperplane_through_unit_simplex_face() {
        let p: [Row; 5] =
            [[1, 1, 0, 0, 0, 0], [1, 0, 1, 0, 0, 0], [1, 0, 0, 1, 0, 0], [1, 0, 0, 0, 1, 0], [1, 0, 0, 0, 0, 1]];
        let h = hyperplane(&p).unwrap();
        // x1 + ... + x5 = 1.
        let expect = [-1, 1, 1, 1, 1, 1];
        assert!(h == expect || h == expect.map(|x| -x), "{h:?}");
    }

    #[test]
    fn dependent_points_have_no_hyperplane() {
        let p: [Row; 5] =
            [[1, 0, 0, 0, 0, 0], [1, 1, 0, 0, 0, 0], [1, 2, 0, 0, 0, 0], [1, 0, 1, 0, 0, 0], [1, 0, 0, 1, 0, 0]];
        assert!(hyperplane(&p).is_none());
    }

    #[test]
    fn refuses_large_n() {
        assert!(matches!(facets_bruteforce(7), Err(Error::TooLarge { .. })));
    }
}
