//! The symmetric two-body local polytope: vertices and facets.
//!
//! Vertices are the images under [`phi`] of the boundary of the lattice
//! tetrahedron `{(a,b,c,d) : a+b+c+d = n}` (tuples with `abcd = 0`); there are
//! `2(n^2 + 1)` of them. Facets are the tight symmetric Bell inequalities.

mod hull;
mod oracle;

pub use hull::{convex_hull_facets, HullFacet};
pub use oracle::facets_bruteforce;

use crate::error::{Error, Result};
use crate::model::{phi, BellInequality, Coefficients, StrategyCounts, SymmetricVector};

/// Dimension of the symmetric polytope, independent of `n`.
pub const DIMENSION: usize = 5;

/// Reference facet counts and three-parameter class counts `(n, class, total)`.
pub const REFERENCE_FACET_COUNTS: [(u32, usize, usize); 4] =
    [(5, 16, 152), (10, 272, 2018), (15, 1208, 7744), (20, 3592, 21274)];

/// `2(n^2 + 1)`, the number of vertices.
pub fn vertex_count(n: u32) -> u64 {
    2 * (u64::from(n) * u64::from(n) + 1)
}

/// All strategy-count tuples on the boundary of the tetrahedron, in
/// lexicographic order.
pub fn enumerate_boundary_counts(n: u32) -> Result<Vec<StrategyCounts>> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(vertex_count(n) as usize);
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                let d = n - a - b - c;
                if a == 0 || b == 0 || c == 0 || d == 0 {
                    out.push(StrategyCounts::new(a, b, c, d, n)?);
                }
            }
        }
    }
    Ok(out)
}

/// Vertices of the symmetric polytope, in the order of
/// [`enumerate_boundary_counts`].
pub fn vertices(n: u32) -> Result<Vec<SymmetricVector>> {
    Ok(enumerate_boundary_counts(n)?.iter().map(phi).collect())
}

/// The complete facet list of the polytope for `n` parties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetList {
    pub n: u32,
    pub facets: Vec<BellInequality>,
    pub vertex_count: usize,
    incidence: Vec<Vec<usize>>,
}

impl FacetList {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Indices (into [`vertices`]) of the vertices saturating facet `i`.
    pub fn incidence(&self, i: usize) -> &[usize] {
        &self.incidence[i]
    }

    pub fn contains(&self, ineq: &BellInequality) -> bool {
        self.facets.binary_search(ineq).is_ok()
    }
}

/// Turns a hull facet `normal . v + offset >= 0` into a canonical inequality.
/// The third and fifth coordinates carry halved coefficients.
fn to_inequality(n: u32, normal: &[i128], offset: i128) -> Result<BellInequality> {
    let conv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("facet coefficients"));
    let coefficients = Coefficients::new(
        conv(normal[0])?,
        conv(normal[1])?,
        conv(2 * normal[2])?,
        conv(normal[3])?,
        conv(2 * normal[4])?,
    );
    BellInequality::new(n, coefficients, conv(offset)?)
}

/// Computes every facet of the polytope with exact arithmetic.
///
/// Facets are returned in canonical form sorted lexicographically by
/// `(alpha, beta, gamma, delta, epsilon, beta_c)`.
pub fn facets(n: u32) -> Result<FacetList> {
    if n < 2 {
        return Err(Error::Precondition(format!("facet enumeration needs n >= 2, got {n}")));
    }
    let verts = vertices(n)?;
    let points: Vec<Vec<i64>> = verts.iter().map(|v| v.coordinates().to_vec()).collect();
    let raw = convex_hull_facets(&points, DIMENSION).map_err(|e| match e {
        Error::DegenerateHull { dimension, expected } => {
            Error::Consistency(format!("vertex set for n = {n} has affine dimension {dimension}, expected {expected}"))
        }
        other => other,
    })?;
    let mut pairs = raw
        .into_iter()
        .map(|f| Ok((to_inequality(n, &f.normal, f.offset)?, f.incidence)))
        .collect::<Result<Vec<_>>>()?;
    pairs.sort_by_key(|a| a.0);
    let before = pairs.len();
    pairs.dedup_by(|a, b| a.0 == b.0);
    if pairs.len() != before {
        return Err(Error::Consistency(format!("hull produced {} duplicate facets", before - pairs.len())));
    }
    let (facets, incidence) = pairs.into_iter().unzip();
    Ok(FacetList { n, facets, vertex_count: verts.len(), incidence })
}

/// Outcome of a tightness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tightness {
    /// Saturated by `DIMENSION` affinely independent vertices: a facet.
    Tight { saturating: Vec<StrategyCounts> },
    /// Valid, but the saturating set spans less than a facet (or the
    /// inequality is trivial and every vertex saturates it).
    NotTight { saturating: Vec<StrategyCounts>, affine_rank: usize },
    /// Some vertex violates the inequality.
    Invalid { vertex: StrategyCounts, value_twice: i128 },
}

impl Tightness {
    pub fn is_tight(&self) -> bool {
        matches!(self, Tightness::Tight { .. })
    }

    pub fn saturating(&self) -> &[StrategyCounts] {
        match self {
            Tightness::Tight { saturating } | Tightness::NotTight { saturating, .. } => saturating,
            Tightness::Invalid { .. } => &[],
        }
    }
}

/// Decides whether `ineq` is a facet, returning the full saturating set.
pub fn is_tight(ineq: &BellInequality) -> Result<Tightness> {
    let n = ineq.n();
    let mut saturating = Vec::new();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for p in enumerate_boundary_counts(n)? {
        let v = phi(&p);
        let slack = ineq.slack_twice(&v)?;
        if slack < 0 {
            return Ok(Tightness::Invalid { vertex: p, value_twice: slack });
        }
        if slack == 0 {
            saturating.push(p);
            rows.push(std::iter::once(1).chain(v.coordinates().iter().map(|&x| i128::from(x))).collect());
        }
    }
    let rank = hull::rank(rows.iter().map(|r| r.as_slice()))?;
    // Homogeneous rank DIMENSION means DIMENSION affinely independent points
    // on a proper hyperplane; rank DIMENSION + 1 only happens when every
    // vertex saturates, i.e. the trivial inequality.
    if rank == DIMENSION {
        Ok(Tightness::Tight { saturating })
    } else {
        Ok(Tightness::NotTight { saturating, affine_rank: rank.saturating_sub(1) })
    }
}
