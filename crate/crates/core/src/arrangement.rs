//! Affine subspace arrangements with rational data: intersection posets,
//! rational simplicial homology and complement Betti numbers through the
//! Goresky–MacPherson sum over the intersection poset.

use std::collections::BTreeSet;

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexcore::{FacePoset, SimplicialComplex};
use crate::exactfield::{parse_rat, rat_to_string, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("hyperplane is not in general position with respect to the arrangement")]
    NotGeneric,
    #[error("degenerate hyperplane (zero normal)")]
    DegenerateHyperplane,
    #[error("cannot parse arrangement: {0}")]
    Parse(String),
}

type RatMat = Vec<Vec<Rat>>;

/// In-place reduced row echelon form; returns pivot columns.
#[allow(clippy::needless_range_loop)]
pub fn rat_rref(m: &mut RatMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(p, r);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        let t = &f * &m[r][j];
                        m[i][j] -= t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(pivots.len());
    pivots
}

pub fn rat_rank(m: &RatMat) -> usize {
    let mut c = m.clone();
    rat_rref(&mut c).len()
}

/// Kernel basis of `m` (vectors x with m·x = 0), given the column count.
pub fn rat_nullspace(m: &RatMat, cols: usize) -> RatMat {
    let mut r = m.clone();
    let pivots = rat_rref(&mut r);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

fn dotq(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Affine subspace `offset + span(basis)` in canonical form: the basis is in
/// reduced echelon form and the offset vanishes on the pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineSubspace {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<Rat>>,
    pub offset: Vec<Rat>,
}

impl AffineSubspace {
    pub fn new(basis: Vec<Vec<Rat>>, offset: Vec<Rat>) -> Result<Self, ArrangementError> {
        let d = offset.len();
        for b in &basis {
            if b.len() != d {
                return Err(ArrangementError::DimensionMismatch(d, b.len()));
            }
        }
        let mut rows = basis.clone();
        let pivots = rat_rref(&mut rows);
        if pivots.len() != basis.len() {
            return Err(ArrangementError::DependentBasis);
        }
        let mut off = offset;
        for (row, &pc) in rows.iter().zip(&pivots) {
            let f = off[pc].clone();
            if !f.is_zero() {
                for (o, r) in off.iter_mut().zip(row) {
                    *o -= &f * r;
                }
            }
        }
        Ok(AffineSubspace { ambient_dim: d, basis: rows, offset: off })
    }

    /// Convenience constructor from integer data.
    pub fn from_ints(basis: &[&[i64]], offset: &[i64]) -> Self {
        let q = |v: &[i64]| v.iter().map(|&x| Rat::from_integer(x.into())).collect::<Vec<_>>();
        AffineSubspace::new(basis.iter().map(|b| q(b)).collect(), q(offset)).unwrap()
    }

    pub fn point(p: Vec<Rat>) -> Self {
        AffineSubspace::new(Vec::new(), p).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Equations `A x = b` cutting out the subspace.
    pub fn equations(&self) -> (RatMat, Vec<Rat>) {
        let a = rat_nullspace(&self.basis, self.ambient_dim);
        let b = a.iter().map(|row| dotq(row, &self.offset)).collect();
        (a, b)
    }

    pub fn contains_point(&self, p: &[Rat]) -> bool {
        let (a, b) = self.equations();
        a.iter().zip(&b).all(|(row, rhs)| &dotq(row, p) == rhs)
    }

    /// True when `self ⊆ other`.
    pub fn is_subset_of(&self, other: &AffineSubspace) -> bool {
        if !other.contains_point(&self.offset) {
            return false;
        }
        let (a, _) = other.equations();
        self.basis.iter().all(|v| a.iter().all(|row| dotq(row, v).is_zero()))
    }

    pub fn intersect(&self, other: &AffineSubspace) -> Result<Option<AffineSubspace>, ArrangementError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(ArrangementError::DimensionMismatch(self.ambient_dim, other.ambient_dim));
        }
        let d = self.ambient_dim;
        let (a1, b1) = self.equations();
        let (a2, b2) = other.equations();
        let mut aug: RatMat = a1
            .into_iter()
            .zip(b1)
            .chain(a2.into_iter().zip(b2))
            .map(|(mut row, rhs)| {
                row.push(rhs);
                row
            })
            .collect();
        if aug.is_empty() {
            return Ok(Some(self.clone()));
        }
        let pivots = rat_rref(&mut aug);
        if pivots.contains(&d) {
            return Ok(None);
        }
        let mut offset = vec![Rat::zero(); d];
        for (row, &pc) in aug.iter().zip(&pivots) {
            offset[pc] = row[d].clone();
        }
        let coeffs: RatMat = aug.iter().map(|r| r[..d].to_vec()).collect();
        let basis = rat_nullspace(&coeffs, d);
        Ok(Some(AffineSubspace::new(basis, offset)?))
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    basis: Vec<Vec<String>>,
    offset: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ArrangementRepr {
    dim: usize,
    subspaces: Vec<SubspaceRepr>,
}

/// A subspace arrangement in R^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub dim: usize,
    pub subspaces: Vec<AffineSubspace>,
}

impl Arrangement {
    pub fn new(dim: usize, subspaces: Vec<AffineSubspace>) -> Result<Self, ArrangementError> {
        for s in &subspaces {
            if s.ambient_dim != dim {
                return Err(ArrangementError::DimensionMismatch(dim, s.ambient_dim));
            }
        }
        let mut uniq: Vec<AffineSubspace> = Vec::new();
        for s in subspaces {
            if !uniq.contains(&s) {
                uniq.push(s);
            }
        }
        Ok(Arrangement { dim, subspaces: uniq })
    }

    pub fn from_json(s: &str) -> Result<Self, ArrangementError> {
        let r: ArrangementRepr = serde_json::from_str(s).map_err(|e| ArrangementError::Parse(e.to_string()))?;
        let q = |v: &[String]| -> Result<Vec<Rat>, ArrangementError> {
            v.iter().map(|x| parse_rat(x).map_err(|e| ArrangementError::Parse(e.to_string()))).collect()
        };
        let mut subs = Vec::new();
        for s in &r.subspaces {
            let basis = s.basis.iter().map(|b| q(b)).collect::<Result<Vec<_>, _>>()?;
            subs.push(AffineSubspace::new(basis, q(&s.offset)?)?);
        }
        Arrangement::new(r.dim, subs)
    }

    pub fn to_json(&self) -> String {
        let s = |v: &[Rat]| v.iter().map(rat_to_string).collect::<Vec<_>>();
        let repr = ArrangementRepr {
            dim: self.dim,
            subspaces: self
                .subspaces
                .iter()
                .map(|a| SubspaceRepr { basis: a.basis.iter().map(|b| s(b)).collect(), offset: s(&a.offset) })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).unwrap()
    }
}

/// Nonempty intersections ordered by reverse inclusion.
#[derive(Clone, Debug)]
pub struct IntersectionPoset {
    pub nodes: Vec<AffineSubspace>,
    /// `below[q]` lists every `p` with `p < q`, i.e. `q ⊊ p`.
    pub below: Vec<Vec<usize>>,
    /// Cover pairs `(p, q)` with `p ⋖ q`.
    pub covers: Vec<(usize, usize)>,
}

impl IntersectionPoset {
    /// Order complex of the open lower interval `P_<q`.
    pub fn lower_order_complex(&self, q: usize) -> SimplicialComplex {
        let members: Vec<usize> = self.below[q].clone();
        let idx = |x: usize| members.iter().position(|&m| m == x);
        let elements = members.iter().map(|&m| (self.nodes[m].dim(), vec![m])).collect();
        let covers = self.covers.iter().filter_map(|&(p, r)| Some((idx(p)?, idx(r)?))).collect();
        FacePoset { elements, covers }.order_complex()
    }

    /// Rank function: dimension of each node.
    pub fn dims(&self) -> Vec<usize> {
        self.nodes.iter().map(AffineSubspace::dim).collect()
    }
}

/// All nonempty intersections of subfamilies of `arr`, deduplicated.
pub fn intersection_poset(arr: &Arrangement) -> Result<IntersectionPoset, ArrangementError> {
    let mut nodes: Vec<AffineSubspace> = arr.subspaces.clone();
    let mut seen: BTreeSet<AffineSubspace> = nodes.iter().cloned().collect();
    let mut frontier: Vec<AffineSubspace> = nodes.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for s in &arr.subspaces {
                if let Some(x) = f.intersect(s)? {
                    if seen.insert(x.clone()) {
                        next.push(x);
                    }
                }
            }
        }
        nodes.extend(next.iter().cloned());
        frontier = next;
    }
    nodes.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
    let n = nodes.len();
    let mut below = vec![Vec::new(); n];
    for q in 0..n {
        for p in 0..n {
            if p != q && nodes[q].is_subset_of(&nodes[p]) {
                below[q].push(p);
            }
        }
    }
    let mut covers = Vec::new();
    for q in 0..n {
        for &p in &below[q] {
            let skip = below[q].iter().any(|&r| r != p && below[r].contains(&p));
            if !skip {
                covers.push((p, q));
            }
        }
    }
    Ok(IntersectionPoset { nodes, below, covers })
}

/// Reduced rational Betti number β̃_k. The void complex has β̃_{−1} = 1.
pub fn betti_reduced_homology(c: &SimplicialComplex, k: isize) -> usize {
    if k < -1 {
        return 0;
    }
    let faces = c.faces_by_dim();
    let count = |j: isize| -> usize {
        if j == -1 {
            1
        } else if j < 0 || j as usize >= faces.len() {
            0
        } else {
            faces[j as usize].len()
        }
    };
    let ck = count(k);
    if ck == 0 {
        return 0;
    }
    ck - boundary_rank(&faces, k) - boundary_rank(&faces, k + 1)
}

/// Rank of the augmented boundary map from dimension `k` to `k − 1`.
fn boundary_rank(faces: &[BTreeSet<Vec<usize>>], k: isize) -> usize {
    if k < 0 || k as usize >= faces.len() {
        return 0;
    }
    let ku = k as usize;
    if ku == 0 {
        return usize::from(!faces[0].is_empty());
    }
    let lower: Vec<&Vec<usize>> = faces[ku - 1].iter().collect();
    let index = |f: &Vec<usize>| lower.binary_search(&f).unwrap();
    let mut rows: RatMat = Vec::with_capacity(faces[ku].len());
    for f in &faces[ku] {
        let mut row = vec![Rat::zero(); lower.len()];
        for skip in 0..f.len() {
            let mut g = f.clone();
            g.remove(skip);
            let sign = if skip % 2 == 0 { Rat::one() } else { -Rat::one() };
            row[index(&g)] = sign;
        }
        rows.push(row);
    }
    rat_rank(&rows)
}

/// Reduced Betti numbers β̃_0, …, β̃_top of a complex.
pub fn reduced_betti_vector(c: &SimplicialComplex) -> Vec<usize> {
    (0..=c.dim().max(0)).map(|k| betti_reduced_homology(c, k)).collect()
}

/// β̃_i of the complement R^d ∖ ∪arr by the Goresky–MacPherson sum.
pub fn gm_betti(arr: &Arrangement, i: usize) -> Result<usize, ArrangementError> {
    let poset = intersection_poset(arr)?;
    Ok(gm_betti_from_poset(&poset, arr.dim, i))
}

fn gm_betti_from_poset(poset: &IntersectionPoset, d: usize, i: usize) -> usize {
    let mut total = 0;
    for (q, node) in poset.nodes.iter().enumerate() {
        let deg = d as isize - 2 - i as isize - node.dim() as isize;
        if deg < -1 {
            continue;
        }
        total += betti_reduced_homology(&poset.lower_order_complex(q), deg);
    }
    total
}

/// Unreduced Betti numbers β_0, …, β_{d−1} of the complement.
pub fn complement_betti(arr: &Arrangement) -> Result<Vec<usize>, ArrangementError> {
    let poset = intersection_poset(arr)?;
    Ok((0..arr.dim).map(|i| gm_betti_from_poset(&poset, arr.dim, i) + usize::from(i == 0)).collect())
}

/// Compactly supported Euler characteristic of the union, by inclusion
/// and exclusion over subfamilies. Independent of the poset machinery.
pub fn union_euler_compact(arr: &Arrangement) -> Result<i64, ArrangementError> {
    let n = arr.subspaces.len();
    let mut total = 0i64;
    for mask in 1u64..(1 << n) {
        let mut cur: Option<AffineSubspace> = None;
        let mut empty = false;
        for (j, s) in arr.subspaces.iter().enumerate() {
            if mask >> j & 1 == 0 {
                continue;
            }
            let next = match cur.take() {
                None => Some(s.clone()),
                Some(c) => c.intersect(s)?,
            };
            if next.is_none() {
                empty = true;
                break;
            }
            cur = next;
        }
        if empty {
            continue;
        }
        let dim = cur.unwrap().dim();
        let chi_c = if dim.is_multiple_of(2) { 1 } else { -1 };
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        total += sign * chi_c;
    }
    Ok(total)
}

/// Euler characteristic of the complement via compact supports and duality.
pub fn complement_euler_by_cells(arr: &Arrangement) -> Result<i64, ArrangementError> {
    let parity = if arr.dim.is_multiple_of(2) { 1 } else { -1 };
    Ok(1 - parity * union_euler_compact(arr)?)
}

/// Hyperplane `{x : normal·x = value}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec<Rat>,
    pub value: Rat,
}

impl Hyperplane {
    pub fn as_subspace(&self) -> Result<AffineSubspace, ArrangementError> {
        let d = self.normal.len();
        let Some(j) = self.normal.iter().position(|x| !x.is_zero()) else {
            return Err(ArrangementError::DegenerateHyperplane);
        };
        let basis = rat_nullspace(&vec![self.normal.clone()], d);
        let mut offset = vec![Rat::zero(); d];
        offset[j] = &self.value / &self.normal[j];
        AffineSubspace::new(basis, offset)
    }
}

/// Every node meets H in dimension exactly one less (points must miss H).
pub fn is_generic_hyperplane(poset: &IntersectionPoset, h: &Hyperplane) -> Result<bool, ArrangementError> {
    let hs = h.as_subspace()?;
    for p in &poset.nodes {
        let got = p.intersect(&hs)?.map_or(-1, |x| x.dim() as isize);
        if got != p.dim() as isize - 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restriction of the arrangement to H, in coordinates of H ≅ R^{d−1}.
pub fn slice_arrangement(arr: &Arrangement, h: &Hyperplane) -> Result<Arrangement, ArrangementError> {
    let hs = h.as_subspace()?;
    let d1 = arr.dim - 1;
    // Express points of H as offset + Σ u_k basis_k and solve for u.
    let coords = |x: &[Rat]| -> Vec<Rat> {
        let diff: Vec<Rat> = x.iter().zip(&hs.offset).map(|(a, b)| a - b).collect();
        // The basis is in reduced echelon form: read u off the pivot columns.
        hs.basis
            .iter()
            .map(|row| {
                let pc = row.iter().position(|v| !v.is_zero()).unwrap();
                diff[pc].clone()
            })
            .collect()
    };
    let dir = |v: &[Rat]| -> Vec<Rat> {
        hs.basis
            .iter()
            .map(|row| {
                let pc = row.iter().position(|x| !x.is_zero()).unwrap();
                v[pc].clone()
            })
            .collect()
    };
    let mut subs = Vec::new();
    for s in &arr.subspaces {
        if let Some(x) = s.intersect(&hs)? {
            let basis = x.basis.iter().map(|b| dir(b)).collect();
            subs.push(AffineSubspace::new(basis, coords(&x.offset))?);
        }
    }
    Arrangement::new(d1, subs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzRow {
    pub degree: usize,
    pub ambient: usize,
    pub slice: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzReport {
    pub rows: Vec<LefschetzRow>,
    pub all_hold: bool,
}

/// Compares β_i(R^d ∖ 𝒜) with β_i(H ∖ 𝒜) for a generic hyperplane H.
pub fn lefschetz_inequality_check(arr: &Arrangement, h: &Hyperplane) -> Result<LefschetzReport, ArrangementError> {
    if h.normal.len() != arr.dim {
        return Err(ArrangementError::DimensionMismatch(arr.dim, h.normal.len()));
    }
    let poset = intersection_poset(arr)?;
    if !is_generic_hyperplane(&poset, h)? {
        return Err(ArrangementError::NotGeneric);
    }
    let big = complement_betti(arr)?;
    let small = complement_betti(&slice_arrangement(arr, h)?)?;
    let rows: Vec<LefschetzRow> = (0..arr.dim)
        .map(|i| {
            let s = small.get(i).copied().unwrap_or(0);
            LefschetzRow { degree: i, ambient: big[i], slice: s, holds: big[i] >= s }
        })
        .collect();
    let all_hold = rows.iter().all(|r| r.holds);
    Ok(LefschetzReport { rows, all_hold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat_int;

    fn pt(x: &[i64]) -> AffineSubspace {
        AffineSubspace::from_ints(&[], x)
    }

    #[test]
    fn poset_examples() {
        let one = Arrangement::new(2, vec![pt(&[0, 0])]).unwrap();
        assert_eq!(intersection_poset(&one).unwrap().nodes.len(), 1);
        let lines = Arrangement::new(
            2,
            vec![AffineSubspace::from_ints(&[&[1, 0]], &[0, 0]), AffineSubspace::from_ints(&[&[0, 1]], &[0, 0])],
        )
        .unwrap();
        let p = intersection_poset(&lines).unwrap();
        assert_eq!(p.nodes.len(), 3);
        let planes = Arrangement::new(
            4,
            vec![
                AffineSubspace::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0]], &[0, 0, 0, 0]),
                AffineSubspace::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1]], &[0, 0, 0, 0]),
                AffineSubspace::from_ints(&[&[1, 0, 1, 0], &[0, 1, 0, 1]], &[0, 0, 0, 0]),
            ],
        )
        .unwrap();
        assert_eq!(intersection_poset(&planes).unwrap().nodes.len(), 4);
    }

    #[test]
    fn homology_examples() {
        assert_eq!(betti_reduced_homology(&SimplicialComplex::empty(), -1), 1);
        assert_eq!(betti_reduced_homology(&SimplicialComplex::cycle(3), 1), 1);
        assert_eq!(betti_reduced_homology(&SimplicialComplex::cycle(3), 0), 0);
        let two_pts = SimplicialComplex::new(2, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(betti_reduced_homology(&two_pts, 0), 1);
        assert_eq!(betti_reduced_homology(&two_pts, -1), 0);
        let s2 = SimplicialComplex::simplex_boundary(4);
        assert_eq!(reduced_betti_vector(&s2), vec![0, 0, 1]);
    }

    #[test]
    fn crossing_lines_lower_interval() {
        let lines = Arrangement::new(
            2,
            vec![AffineSubspace::from_ints(&[&[1, 0]], &[0, 0]), AffineSubspace::from_ints(&[&[0, 1]], &[0, 0])],
        )
        .unwrap();
        let p = intersection_poset(&lines).unwrap();
        let q = p.nodes.iter().position(|n| n.dim() == 0).unwrap();
        assert_eq!(betti_reduced_homology(&p.lower_order_complex(q), 0), 1);
    }

    #[test]
    fn gm_examples() {
        let pts = Arrangement::new(2, (0..4).map(|i| pt(&[i, i * i])).collect()).unwrap();
        assert_eq!(gm_betti(&pts, 1).unwrap(), 4);
        let plane =
            Arrangement::new(4, vec![AffineSubspace::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0]], &[0; 4])]).unwrap();
        assert_eq!(gm_betti(&plane, 1).unwrap(), 1);
        let pair = Arrangement::new(
            4,
            vec![
                AffineSubspace::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1]], &[0; 4]),
                AffineSubspace::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0]], &[0; 4]),
            ],
        )
        .unwrap();
        assert_eq!(complement_betti(&pair).unwrap(), vec![1, 2, 1, 0]);
    }

    #[test]
    fn lefschetz_examples() {
        let empty = Arrangement::new(3, vec![]).unwrap();
        let h = Hyperplane { normal: vec![rat_int(1), rat_int(2), rat_int(3)], value: rat_int(1) };
        let r = lefschetz_inequality_check(&empty, &h).unwrap();
        assert_eq!(r.rows.iter().map(|x| x.ambient).collect::<Vec<_>>(), vec![1, 0, 0]);
        assert_eq!(r.rows.iter().map(|x| x.slice).collect::<Vec<_>>(), vec![1, 0, 0]);
        let pts = Arrangement::new(2, (0..3).map(|i| pt(&[i, 2 * i + 1])).collect()).unwrap();
        let line = Hyperplane { normal: vec![rat_int(1), rat_int(1)], value: rat_int(100) };
        let r = lefschetz_inequality_check(&pts, &line).unwrap();
        assert_eq!(r.rows[1].ambient, 3);
        assert_eq!(r.rows[1].slice, 0);
        assert!(r.all_hold);
        let bad = Hyperplane { normal: vec![rat_int(1), rat_int(0)], value: rat_int(0) };
        assert_eq!(lefschetz_inequality_check(&pts, &bad), Err(ArrangementError::NotGeneric));
    }

    #[test]
    fn euler_oracle_points_and_lines() {
        let pts = Arrangement::new(2, (0..5).map(|i| pt(&[i, 3 - i * i])).collect()).unwrap();
        let b = complement_betti(&pts).unwrap();
        assert_eq!(b[0] as i64 - b[1] as i64, complement_euler_by_cells(&pts).unwrap());
        // three coordinate axes in R^3 through the origin
        let axes = Arrangement::new(
            3,
            vec![
                AffineSubspace::from_ints(&[&[1, 0, 0]], &[0, 0, 0]),
                AffineSubspace::from_ints(&[&[0, 1, 0]], &[0, 0, 0]),
                AffineSubspace::from_ints(&[&[0, 0, 1]], &[0, 0, 0]),
            ],
        )
        .unwrap();
        let b = complement_betti(&axes).unwrap();
        let chi: i64 = b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        assert_eq!(chi, complement_euler_by_cells(&axes).unwrap());
        // complement of three concurrent lines in R^3 ≃ S^2 minus 6 points
        assert_eq!(b, vec![1, 5, 0]);
    }

    #[test]
    fn json_roundtrip() {
        let a = Arrangement::new(2, vec![pt(&[1, 2]), pt(&[3, 4])]).unwrap();
        let back = Arrangement::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
    }
}
