//! Combinatorial segments: non-revisiting facet paths in normal flag
//! complexes, built by recursing into vertex links along a shortest vertex
//! path (the pearls).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexcore::{bfs, ComplexError, Face, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HirschError {
    #[error("complex is not flag")]
    NotFlag,
    #[error("complex is not normal")]
    NotNormal,
    #[error("complex is not pure")]
    NotPure,
    #[error("{0:?} is not a facet")]
    NotAFacet(Face),
    #[error("target set is empty or unreachable")]
    Unreachable,
    #[error("last facet {last:?} shares no vertex with target facet {target:?}")]
    NoSharedVertex { last: Face, target: Face },
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A facet path with its necklace.
///
/// `facets` index into the host complex's facet list. `pearls[i]` is the
/// pearl `x_i`; `breakpoints[i]` is the position of the facet `X_i`, and the
/// final breakpoint is the position of the last facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetPath {
    pub facets: Vec<usize>,
    pub pearls: Vec<usize>,
    pub breakpoints: Vec<usize>,
}

impl FacetPath {
    pub fn len(&self) -> usize {
        self.facets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }
}

/// Path as raw facets, before indexing into a host complex.
#[derive(Clone, Debug)]
struct RawPath {
    facets: Vec<Face>,
    pearls: Vec<usize>,
    breakpoints: Vec<usize>,
}

impl RawPath {
    fn single(f: Face, pearl: usize) -> Self {
        RawPath { facets: vec![f], pearls: vec![pearl], breakpoints: vec![0, 0] }
    }

    /// Appends facets, skipping a repeated junction facet.
    fn extend(&mut self, more: &[Face]) {
        for f in more {
            if self.facets.last() != Some(f) {
                self.facets.push(f.clone());
            }
        }
    }
}

/// d_co(x, Y) in the 1-skeleton and the set p(x, Y) of nearest target vertices.
pub fn vertex_distance(c: &SimplicialComplex, x: usize, targets: &[usize]) -> Result<(usize, Vec<usize>), HirschError> {
    let dist = bfs(&c.graph(), &[x]);
    let best = targets.iter().filter_map(|&y| dist.get(y).copied().flatten()).min().ok_or(HirschError::Unreachable)?;
    let mut p: Vec<usize> = targets.iter().copied().filter(|&y| dist[y] == Some(best)).collect();
    p.sort_unstable();
    p.dedup();
    Ok((best, p))
}

fn lift(path: &[Face], x: usize) -> Vec<Face> {
    path.iter()
        .map(|f| {
            let mut g = f.clone();
            g.push(x);
            g.sort_unstable();
            g
        })
        .collect()
}

fn minus(f: &[usize], x: usize) -> Face {
    f.iter().copied().filter(|&v| v != x).collect()
}

/// Part 1: from facet `x_facet` to the vertex set `targets`.
fn segment_to_set(c: &SimplicialComplex, x_facet: &Face, targets: &BTreeSet<usize>) -> Result<RawPath, HirschError> {
    if targets.is_empty() {
        return Err(HirschError::Unreachable);
    }
    if c.dim() == 0 {
        let x = x_facet[0];
        if targets.contains(&x) {
            return Ok(RawPath::single(x_facet.clone(), x));
        }
        let used: BTreeSet<usize> = c.used_vertices().into_iter().collect();
        let y = *targets.iter().find(|y| used.contains(y)).ok_or(HirschError::Unreachable)?;
        return Ok(RawPath { facets: vec![x_facet.clone(), vec![y]], pearls: vec![x, y], breakpoints: vec![0, 1, 1] });
    }
    let graph = c.graph();
    let tvec: Vec<usize> = targets.iter().copied().collect();
    let to_target = bfs(&graph, &tvec);
    let x0 = *x_facet
        .iter()
        .filter(|&&v| to_target[v].is_some())
        .min_by_key(|&&v| (to_target[v].unwrap(), v))
        .ok_or(HirschError::Unreachable)?;
    let mut xi = x0;
    let mut yi: Vec<usize> = vertex_distance(c, x0, &tvec)?.1;
    let mut path = RawPath::single(x_facet.clone(), x0);
    let mut current = x_facet.clone();
    loop {
        if current.iter().any(|v| targets.contains(v)) {
            break;
        }
        let dist_y = bfs(&graph, &yi);
        let dx = dist_y[xi].ok_or(HirschError::Unreachable)?;
        let t_set: BTreeSet<usize> =
            graph[xi].iter().copied().filter(|&y| dist_y[y].map(|d| d + 1) == Some(dx)).collect();
        let link = c.link_unindexed(&[xi])?;
        let sub = segment_to_set(&link, &minus(&current, xi), &t_set)?;
        let lifted = lift(&sub.facets, xi);
        path.extend(&lifted);
        current = lifted.last().unwrap().clone();
        let next = *sub.facets.last().unwrap().iter().find(|v| t_set.contains(v)).ok_or(HirschError::Unreachable)?;
        yi = vertex_distance(c, next, &yi)?.1;
        xi = next;
        path.pearls.push(xi);
        path.breakpoints.pop();
        path.breakpoints.push(path.facets.len() - 1);
        path.breakpoints.push(path.facets.len() - 1);
    }
    Ok(path)
}

/// Part 2: from facet `x_facet` to facet `y_facet`.
fn segment_to_facet(c: &SimplicialComplex, x_facet: &Face, y_facet: &Face) -> Result<RawPath, HirschError> {
    let targets: BTreeSet<usize> = y_facet.iter().copied().collect();
    let mut path = segment_to_set(c, x_facet, &targets)?;
    let last = path.facets.last().unwrap().clone();
    if &last == y_facet {
        return Ok(path);
    }
    if c.dim() == 0 {
        return Err(HirschError::Unreachable);
    }
    let x_l = *last
        .iter()
        .find(|v| targets.contains(v))
        .ok_or_else(|| HirschError::NoSharedVertex { last: last.clone(), target: y_facet.clone() })?;
    let link = c.link_unindexed(&[x_l])?;
    let sub = segment_to_facet(&link, &minus(&last, x_l), &minus(y_facet, x_l))?;
    path.extend(&lift(&sub.facets, x_l));
    path.breakpoints.pop();
    path.breakpoints.push(path.facets.len() - 1);
    Ok(path)
}

/// Where a segment should end.
#[derive(Clone, Debug)]
pub enum SegmentTarget {
    Vertices(Vec<usize>),
    Facet(usize),
}

fn check_preconditions(c: &SimplicialComplex) -> Result<(), HirschError> {
    if !c.is_pure() {
        return Err(HirschError::NotPure);
    }
    if !c.is_flag() {
        return Err(HirschError::NotFlag);
    }
    if !c.is_normal()? {
        return Err(HirschError::NotNormal);
    }
    Ok(())
}

/// Combinatorial segment from facet `from` (an index into `c.facets`).
/// Checks that `c` is pure, flag and normal first.
pub fn combinatorial_segment(c: &SimplicialComplex, from: usize, to: &SegmentTarget) -> Result<FacetPath, HirschError> {
    check_preconditions(c)?;
    combinatorial_segment_unchecked(c, from, to)
}

/// As [`combinatorial_segment`] without the flag/normal checks.
pub fn combinatorial_segment_unchecked(
    c: &SimplicialComplex,
    from: usize,
    to: &SegmentTarget,
) -> Result<FacetPath, HirschError> {
    let x = c.facets.get(from).ok_or(HirschError::InvalidPath(format!("no facet {from}")))?.clone();
    let raw = match to {
        SegmentTarget::Vertices(ys) => segment_to_set(c, &x, &ys.iter().copied().collect())?,
        SegmentTarget::Facet(j) => {
            let y = c.facets.get(*j).ok_or(HirschError::InvalidPath(format!("no facet {j}")))?.clone();
            segment_to_facet(c, &x, &y)?
        }
    };
    let index: HashMap<&Face, usize> = c.facets.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let facets = raw
        .facets
        .iter()
        .map(|f| index.get(f).copied().ok_or_else(|| HirschError::NotAFacet(f.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FacetPath { facets, pearls: raw.pearls, breakpoints: raw.breakpoints })
}

/// Consecutive facets must be distinct and share a codimension-one face.
pub fn validate_path(c: &SimplicialComplex, path: &FacetPath) -> Result<(), HirschError> {
    let d = c.dim();
    for w in path.facets.windows(2) {
        let (a, b) = (&c.facets[w[0]], &c.facets[w[1]]);
        let shared = a.iter().filter(|v| b.contains(v)).count() as isize;
        if w[0] == w[1] || shared != d {
            return Err(HirschError::InvalidPath(format!("facets {} and {} are not adjacent", w[0], w[1])));
        }
    }
    if path.facets.iter().any(|&i| i >= c.facets.len()) {
        return Err(HirschError::InvalidPath("facet index out of range".into()));
    }
    Ok(())
}

/// For every vertex, the positions of facets containing it form an interval.
pub fn is_non_revisiting(c: &SimplicialComplex, path: &FacetPath) -> Result<bool, HirschError> {
    validate_path(c, path)?;
    let mut seen: HashMap<usize, (usize, usize, usize)> = HashMap::new();
    for (i, &f) in path.facets.iter().enumerate() {
        for &v in &c.facets[f] {
            let e = seen.entry(v).or_insert((i, i, 0));
            e.1 = i;
            e.2 += 1;
        }
    }
    Ok(seen.values().all(|&(lo, hi, n)| hi - lo + 1 == n))
}

/// Checks the star-containment lemma on the necklace: if a facet at position
/// `a` (pearl `x_i`, `i < ℓ`) contains `v` and a later pearl `x_j` lies in
/// St(v), every facet from `a` up to `X_j` contains `v`.
pub fn star_lemma_holds(c: &SimplicialComplex, path: &FacetPath) -> bool {
    let l = path.pearls.len() - 1;
    let graph = c.graph();
    let in_star = |v: usize, x: usize| v == x || graph[v].binary_search(&x).is_ok();
    for i in 0..l {
        for a in path.breakpoints[i]..path.breakpoints[i + 1] {
            for &v in &c.facets[path.facets[a]] {
                for j in i + 1..=l {
                    if in_star(v, path.pearls[j]) {
                        let end = path.breakpoints[j];
                        if !(a..=end).all(|b| c.facets[path.facets[b]].contains(&v)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Diameter of the facet-ridge graph.
pub fn dual_diameter(c: &SimplicialComplex) -> Result<usize, HirschError> {
    let g = c.dual_graph().map_err(|_| HirschError::NotPure)?;
    let mut diam = 0;
    for s in 0..g.len() {
        for d in bfs(&g, &[s]) {
            diam = diam.max(d.ok_or(HirschError::Disconnected)?);
        }
    }
    Ok(diam)
}

/// All-pairs facet distances in the dual graph.
pub fn dual_distances(c: &SimplicialComplex) -> Result<Vec<Vec<usize>>, HirschError> {
    let g = c.dual_graph().map_err(|_| HirschError::NotPure)?;
    (0..g.len()).map(|s| bfs(&g, &[s]).into_iter().map(|d| d.ok_or(HirschError::Disconnected)).collect()).collect()
}
