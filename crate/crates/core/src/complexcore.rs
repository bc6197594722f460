//! Finite combinatorial simplicial and cubical complexes.
//!
//! Faces are sorted vertex-id lists. Simplicial complexes are stored by their
//! facets; cubical complexes by their maximal cubes with corners listed in
//! bit order, so the corner with index `i` is obtained from the base corner by
//! stepping along every direction whose bit is set in `i`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Face = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("face {0:?} is not in the complex")]
    FaceNotInComplex(Face),
    #[error("complex is not pure")]
    NotPure,
    #[error("vertex id {0} out of range")]
    VertexOutOfRange(usize),
    #[error("cube with dimension {dim} has {corners} corners, expected 2^dim")]
    BadCube { dim: usize, corners: usize },
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    // both sorted
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

#[cfg(test)]
fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Keeps only inclusion-maximal sets, sorted and deduplicated.
fn maximal_sets(mut sets: Vec<Face>) -> Vec<Face> {
    for s in sets.iter_mut() {
        s.sort_unstable();
        s.dedup();
    }
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<Face> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| is_subset(&s, k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// Simplicial complex given by its facets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplicialComplex {
    #[serde(rename = "vertices")]
    pub num_vertices: usize,
    pub facets: Vec<Face>,
}

impl SimplicialComplex {
    /// Builds a complex, discarding non-maximal and duplicate facets. Empty
    /// faces are dropped, so `new(n, vec![])` is the void complex.
    pub fn new(num_vertices: usize, facets: Vec<Face>) -> Result<Self, ComplexError> {
        for f in &facets {
            if let Some(&v) = f.iter().find(|&&v| v >= num_vertices) {
                return Err(ComplexError::VertexOutOfRange(v));
            }
        }
        let facets = maximal_sets(facets.into_iter().filter(|f| !f.is_empty()).collect());
        Ok(SimplicialComplex { num_vertices, facets })
    }

    /// The empty complex (no faces besides ∅).
    pub fn empty() -> Self {
        SimplicialComplex { num_vertices: 0, facets: Vec::new() }
    }

    /// Full simplex on `n` vertices.
    pub fn simplex(n: usize) -> Self {
        SimplicialComplex { num_vertices: n, facets: vec![(0..n).collect()] }
    }

    /// Boundary of the simplex with `n` vertices.
    pub fn simplex_boundary(n: usize) -> Self {
        let facets = (0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect();
        SimplicialComplex::new(n, facets).unwrap()
    }

    /// Boundary of the `d`-dimensional cross-polytope on vertices `2i, 2i+1`.
    pub fn cross_polytope_boundary(d: usize) -> Self {
        let mut facets = Vec::new();
        for mask in 0..(1usize << d) {
            facets.push((0..d).map(|i| 2 * i + ((mask >> i) & 1)).collect());
        }
        SimplicialComplex::new(2 * d, facets).unwrap()
    }

    /// Cycle graph on `n ≥ 3` vertices.
    pub fn cycle(n: usize) -> Self {
        let facets = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        SimplicialComplex::new(n, facets).unwrap()
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize - 1).max().unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets.iter().all(|f| f.len() as isize - 1 == d)
    }

    /// Vertices that occur in some facet.
    pub fn used_vertices(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.facets.iter().flatten().copied().collect();
        s.into_iter().collect()
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.is_empty() || self.facets.iter().any(|g| is_subset(&f, g))
    }

    /// All nonempty faces, grouped by dimension.
    pub fn faces_by_dim(&self) -> Vec<BTreeSet<Face>> {
        let d = self.dim();
        let mut out: Vec<BTreeSet<Face>> = vec![BTreeSet::new(); (d + 1).max(0) as usize];
        for f in &self.facets {
            let n = f.len();
            for mask in 1usize..(1 << n) {
                let sub: Face = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                out[sub.len() - 1].insert(sub);
            }
        }
        out
    }

    pub fn all_faces(&self) -> Vec<Face> {
        self.faces_by_dim().into_iter().flatten().collect()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dim().iter().map(BTreeSet::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }

    /// St(face, C) as a subcomplex on the same vertex ids.
    pub fn star(&self, face: &[usize]) -> Result<SimplicialComplex, ComplexError> {
        let mut f = face.to_vec();
        f.sort_unstable();
        if !self.contains_face(&f) {
            return Err(ComplexError::FaceNotInComplex(f));
        }
        let facets = self.facets.iter().filter(|g| is_subset(&f, g)).cloned().collect();
        Ok(SimplicialComplex { num_vertices: self.num_vertices, facets })
    }

    /// Lk(face, C) on the original vertex ids (not reindexed).
    pub fn link_unindexed(&self, face: &[usize]) -> Result<SimplicialComplex, ComplexError> {
        let st = self.star(face)?;
        let facets = st.facets.iter().map(|g| g.iter().copied().filter(|v| !face.contains(v)).collect()).collect();
        SimplicialComplex::new(self.num_vertices, facets)
    }

    /// Lk(face, C) reindexed onto `0..m`, together with the map from new ids
    /// to old ids.
    pub fn link(&self, face: &[usize]) -> Result<(SimplicialComplex, Vec<usize>), ComplexError> {
        Ok(self.link_unindexed(face)?.compacted())
    }

    /// Relabels used vertices to `0..m` in increasing order.
    pub fn compacted(&self) -> (SimplicialComplex, Vec<usize>) {
        let used = self.used_vertices();
        let idx: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let facets = self.facets.iter().map(|f| f.iter().map(|v| idx[v]).collect()).collect();
        (SimplicialComplex::new(used.len(), facets).unwrap(), used)
    }

    /// Faces not meeting `vertices`, on the same ids.
    pub fn delete_vertices(&self, vertices: &[usize]) -> SimplicialComplex {
        let facets =
            self.facets.iter().map(|f| f.iter().copied().filter(|v| !vertices.contains(v)).collect()).collect();
        SimplicialComplex::new(self.num_vertices, facets).unwrap()
    }

    /// C − v.
    pub fn deletion(&self, v: usize) -> SimplicialComplex {
        self.delete_vertices(&[v])
    }

    /// Induced subcomplex on a vertex set.
    pub fn restriction(&self, vertices: &[usize]) -> SimplicialComplex {
        let keep: BTreeSet<usize> = vertices.iter().copied().collect();
        let drop: Vec<usize> = (0..self.num_vertices).filter(|v| !keep.contains(v)).collect();
        self.delete_vertices(&drop)
    }

    /// Cone with a new apex `num_vertices`.
    pub fn cone(&self) -> SimplicialComplex {
        let apex = self.num_vertices;
        let facets = if self.facets.is_empty() {
            vec![vec![apex]]
        } else {
            self.facets.iter().map(|f| f.iter().copied().chain([apex]).collect()).collect()
        };
        SimplicialComplex::new(apex + 1, facets).unwrap()
    }

    /// Adjacency lists of the 1-skeleton over all `num_vertices` ids.
    pub fn graph(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.num_vertices];
        for f in &self.facets {
            for (i, &u) in f.iter().enumerate() {
                for &w in &f[i + 1..] {
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Facet-ridge graph. Facets are indexed as in `self.facets`.
    pub fn dual_graph(&self) -> Result<Vec<Vec<usize>>, ComplexError> {
        if !self.is_pure() {
            return Err(ComplexError::NotPure);
        }
        Ok(dual_graph_of(&self.facets))
    }

    /// True when every clique of the 1-skeleton spans a face.
    pub fn is_flag(&self) -> bool {
        let adj = self.graph();
        let sets: Vec<BTreeSet<usize>> = adj.iter().map(|a| a.iter().copied().collect()).collect();
        let mut ok = true;
        let verts: BTreeSet<usize> = self.used_vertices().into_iter().collect();
        bron_kerbosch(&sets, BTreeSet::new(), verts, BTreeSet::new(), &mut |clique| {
            let c: Face = clique.iter().copied().collect();
            if !self.contains_face(&c) {
                ok = false;
            }
        });
        ok
    }

    /// Normality: the star of every face, the empty face included, has a
    /// connected dual graph. Requires purity.
    pub fn is_normal(&self) -> Result<bool, ComplexError> {
        if !self.is_pure() {
            return Err(ComplexError::NotPure);
        }
        if !connected(&dual_graph_of(&self.facets)) {
            return Ok(false);
        }
        for face in self.all_faces() {
            let star: Vec<Face> = self.facets.iter().filter(|g| is_subset(&face, g)).cloned().collect();
            if !connected(&dual_graph_of(&star)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn face_poset(&self) -> FacePoset {
        let mut elements: Vec<(usize, Face)> = Vec::new();
        for (d, layer) in self.faces_by_dim().into_iter().enumerate() {
            for f in layer {
                elements.push((d, f));
            }
        }
        let index: HashMap<Face, usize> = elements.iter().enumerate().map(|(i, (_, f))| (f.clone(), i)).collect();
        let mut covers = Vec::new();
        for (i, (_, f)) in elements.iter().enumerate() {
            if f.len() < 2 {
                continue;
            }
            for skip in 0..f.len() {
                let mut g = f.clone();
                g.remove(skip);
                covers.push((index[&g], i));
            }
        }
        covers.sort_unstable();
        FacePoset { elements, covers }
    }

    /// Barycentric subdivision; vertex `i` of the output is face `i` of
    /// [`SimplicialComplex::face_poset`].
    pub fn derived_subdivision(&self) -> SimplicialComplex {
        self.face_poset().order_complex()
    }

    /// Stellar subdivision at `face` with the new vertex `num_vertices`.
    pub fn stellar_subdivision(&self, face: &[usize]) -> Result<SimplicialComplex, ComplexError> {
        let mut tau = face.to_vec();
        tau.sort_unstable();
        if tau.is_empty() || !self.contains_face(&tau) {
            return Err(ComplexError::FaceNotInComplex(tau));
        }
        let w = self.num_vertices;
        let mut facets = Vec::new();
        for f in &self.facets {
            if !is_subset(&tau, f) {
                facets.push(f.clone());
                continue;
            }
            for &t in &tau {
                let mut g: Face = f.iter().copied().filter(|&x| x != t).collect();
                g.push(w);
                facets.push(g);
            }
        }
        SimplicialComplex::new(w + 1, facets)
    }

    /// Simplicial join with vertex ids of `other` shifted past ours.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let shift = self.num_vertices;
        let mut facets = Vec::new();
        let a = if self.facets.is_empty() { vec![vec![]] } else { self.facets.clone() };
        let b = if other.facets.is_empty() { vec![vec![]] } else { other.facets.clone() };
        for f in &a {
            for g in &b {
                facets.push(f.iter().copied().chain(g.iter().map(|v| v + shift)).collect());
            }
        }
        SimplicialComplex::new(shift + other.num_vertices, facets).unwrap()
    }
}

/// Facet-ridge adjacency for an arbitrary facet list.
pub fn dual_graph_of(facets: &[Face]) -> Vec<Vec<usize>> {
    let mut ridges: HashMap<Face, Vec<usize>> = HashMap::new();
    for (i, f) in facets.iter().enumerate() {
        for skip in 0..f.len() {
            let mut r = f.clone();
            r.remove(skip);
            ridges.entry(r).or_default().push(i);
        }
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); facets.len()];
    for owners in ridges.values() {
        for &a in owners {
            for &b in owners {
                if a != b && facets[a].len() == facets[b].len() {
                    adj[a].insert(b);
                }
            }
        }
    }
    adj.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// BFS distances from `src`; unreachable nodes get `None`.
pub fn bfs(adj: &[Vec<usize>], sources: &[usize]) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    let mut q = VecDeque::new();
    for &s in sources {
        if dist[s].is_none() {
            dist[s] = Some(0);
            q.push_back(s);
        }
    }
    while let Some(u) = q.pop_front() {
        let du = dist[u].unwrap();
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                q.push_back(w);
            }
        }
    }
    dist
}

pub fn connected(adj: &[Vec<usize>]) -> bool {
    adj.is_empty() || bfs(adj, &[0]).iter().all(Option::is_some)
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    r: BTreeSet<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    report: &mut dyn FnMut(&BTreeSet<usize>),
) {
    if p.is_empty() && x.is_empty() {
        if !r.is_empty() {
            report(&r);
        }
        return;
    }
    let pivot = p.iter().chain(x.iter()).max_by_key(|&&u| adj[u].intersection(&p).count()).copied().unwrap();
    let candidates: Vec<usize> = p.difference(&adj[pivot]).copied().collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.insert(v);
        let p2 = p.intersection(&adj[v]).copied().collect();
        let x2 = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(adj, r2, p2, x2, report);
        p.remove(&v);
        x.insert(v);
    }
}

/// Finite graded poset given by cover relations `(lower, upper)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePoset {
    /// (rank, vertex-set key) for each element.
    pub elements: Vec<(usize, Face)>,
    pub covers: Vec<(usize, usize)>,
}

impl FacePoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn down_covers(&self) -> Vec<Vec<usize>> {
        let mut down = vec![Vec::new(); self.len()];
        for &(lo, hi) in &self.covers {
            down[hi].push(lo);
        }
        down
    }

    /// Order complex: facets are the maximal chains.
    pub fn order_complex(&self) -> SimplicialComplex {
        let down = self.down_covers();
        let mut has_up = vec![false; self.len()];
        for &(lo, _) in &self.covers {
            has_up[lo] = true;
        }
        let mut facets = Vec::new();
        let mut chain = Vec::new();
        fn walk(u: usize, down: &[Vec<usize>], chain: &mut Vec<usize>, out: &mut Vec<Face>) {
            chain.push(u);
            if down[u].is_empty() {
                out.push(chain.clone());
            } else {
                for &w in &down[u] {
                    walk(w, down, chain, out);
                }
            }
            chain.pop();
        }
        for top in (0..self.len()).filter(|&i| !has_up[i]) {
            walk(top, &down, &mut chain, &mut facets);
        }
        SimplicialComplex::new(self.len(), facets).unwrap()
    }
}

/// A single cube: `2^dim` corner ids in bit order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cube {
    pub dim: usize,
    pub corners: Vec<usize>,
}

impl Cube {
    pub fn new(dim: usize, corners: Vec<usize>) -> Result<Self, ComplexError> {
        if corners.len() != 1 << dim {
            return Err(ComplexError::BadCube { dim, corners: corners.len() });
        }
        Ok(Cube { dim, corners })
    }

    pub fn key(&self) -> Face {
        let mut k = self.corners.clone();
        k.sort_unstable();
        k
    }

    /// All faces (including itself), each as a cube with inherited bit order.
    pub fn faces(&self) -> Vec<Cube> {
        let mut out = Vec::new();
        for free in 0usize..(1 << self.dim) {
            let fixed_bits: Vec<usize> = (0..self.dim).filter(|b| free >> b & 1 == 0).collect();
            let free_bits: Vec<usize> = (0..self.dim).filter(|b| free >> b & 1 == 1).collect();
            for val in 0usize..(1 << fixed_bits.len()) {
                let mut base = 0usize;
                for (i, &b) in fixed_bits.iter().enumerate() {
                    if val >> i & 1 == 1 {
                        base |= 1 << b;
                    }
                }
                let corners = (0usize..(1 << free_bits.len()))
                    .map(|sub| {
                        let mut idx = base;
                        for (i, &b) in free_bits.iter().enumerate() {
                            if sub >> i & 1 == 1 {
                                idx |= 1 << b;
                            }
                        }
                        self.corners[idx]
                    })
                    .collect();
                out.push(Cube { dim: free_bits.len(), corners });
            }
        }
        out
    }

    /// Codimension-one faces.
    pub fn facets(&self) -> Vec<Cube> {
        self.faces().into_iter().filter(|f| f.dim + 1 == self.dim).collect()
    }
}

/// Cubical complex given by its maximal cubes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicalComplex {
    #[serde(rename = "vertices")]
    pub num_vertices: usize,
    pub cubes: Vec<Cube>,
}

impl CubicalComplex {
    /// Keeps cubes that are not faces of other listed cubes.
    pub fn new(num_vertices: usize, cubes: Vec<Cube>) -> Result<Self, ComplexError> {
        for c in &cubes {
            if c.corners.len() != 1 << c.dim {
                return Err(ComplexError::BadCube { dim: c.dim, corners: c.corners.len() });
            }
            if let Some(&v) = c.corners.iter().find(|&&v| v >= num_vertices) {
                return Err(ComplexError::VertexOutOfRange(v));
            }
        }
        let mut proper: BTreeSet<Face> = BTreeSet::new();
        for c in &cubes {
            for f in c.faces() {
                if f.dim < c.dim {
                    proper.insert(f.key());
                }
            }
        }
        let mut seen = BTreeSet::new();
        let mut kept: Vec<Cube> =
            cubes.into_iter().filter(|c| !proper.contains(&c.key()) && seen.insert(c.key())).collect();
        kept.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.key().cmp(&b.key())));
        Ok(CubicalComplex { num_vertices, cubes: kept })
    }

    pub fn unit_cube(dim: usize) -> Self {
        CubicalComplex::new(1 << dim, vec![Cube { dim, corners: (0..1 << dim).collect() }]).unwrap()
    }

    pub fn dim(&self) -> isize {
        self.cubes.iter().map(|c| c.dim as isize).max().unwrap_or(-1)
    }

    /// Every face once, keyed by its sorted vertex set.
    pub fn faces(&self) -> BTreeMap<Face, Cube> {
        let mut out = BTreeMap::new();
        for c in &self.cubes {
            for f in c.faces() {
                out.entry(f.key()).or_insert(f);
            }
        }
        out
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.dim();
        let mut fv = vec![0; (d + 1).max(0) as usize];
        for f in self.faces().values() {
            fv[f.dim] += 1;
        }
        fv
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }

    pub fn face_poset(&self) -> FacePoset {
        let faces = self.faces();
        let mut elements: Vec<(usize, Face)> = faces.iter().map(|(k, c)| (c.dim, k.clone())).collect();
        elements.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let index: HashMap<Face, usize> = elements.iter().enumerate().map(|(i, (_, k))| (k.clone(), i)).collect();
        let mut covers = Vec::new();
        for (k, c) in &faces {
            for f in c.facets() {
                covers.push((index[&f.key()], index[k]));
            }
        }
        covers.sort_unstable();
        covers.dedup();
        FacePoset { elements, covers }
    }

    pub fn derived_subdivision(&self) -> SimplicialComplex {
        self.face_poset().order_complex()
    }

    /// Faces containing vertex `v`.
    pub fn star(&self, v: usize) -> CubicalComplex {
        let cubes = self.cubes.iter().filter(|c| c.corners.contains(&v)).cloned().collect();
        CubicalComplex::new(self.num_vertices, cubes).unwrap()
    }

    /// Faces of St(v) that avoid `v`: the boundary sphere of the star.
    pub fn star_rim(&self, v: usize) -> CubicalComplex {
        let mut cubes = Vec::new();
        for c in self.star(v).cubes {
            for f in c.faces() {
                if !f.corners.contains(&v) {
                    cubes.push(f);
                }
            }
        }
        CubicalComplex::new(self.num_vertices, cubes).unwrap()
    }

    /// Combinatorial vertex link: one vertex per edge at `v`, one simplex
    /// per cube at `v`. Returns the link and the edges (as vertex pairs)
    /// labelling its vertices.
    pub fn vertex_link(&self, v: usize) -> Result<(SimplicialComplex, Vec<[usize; 2]>), ComplexError> {
        let mut edges: BTreeSet<[usize; 2]> = BTreeSet::new();
        let mut simplices: Vec<Vec<[usize; 2]>> = Vec::new();
        let mut found = false;
        for c in &self.cubes {
            let Some(pos) = c.corners.iter().position(|&x| x == v) else { continue };
            found = true;
            let es: Vec<[usize; 2]> = (0..c.dim)
                .map(|b| {
                    let w = c.corners[pos ^ (1 << b)];
                    [v.min(w), v.max(w)]
                })
                .collect();
            edges.extend(es.iter().copied());
            simplices.push(es);
        }
        if !found {
            return Err(ComplexError::FaceNotInComplex(vec![v]));
        }
        let labels: Vec<[usize; 2]> = edges.into_iter().collect();
        let idx: HashMap<[usize; 2], usize> = labels.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let facets = simplices.into_iter().map(|s| s.iter().map(|e| idx[e]).collect()).collect();
        Ok((SimplicialComplex::new(labels.len(), facets)?, labels))
    }

    /// Vertex adjacency of the 1-skeleton.
    pub fn graph(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.num_vertices];
        for f in self.faces().values() {
            if f.dim == 1 {
                adj[f.corners[0]].insert(f.corners[1]);
                adj[f.corners[1]].insert(f.corners[0]);
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }
}

/// Random flag sphere of dimension `dim` grown from the cross-polytope
/// boundary by `steps` random edge subdivisions.
pub fn random_flag_sphere<R: Rng>(dim: usize, steps: usize, rng: &mut R) -> SimplicialComplex {
    let mut c = SimplicialComplex::cross_polytope_boundary(dim + 1);
    for _ in 0..steps {
        let edges: Vec<Face> = c.faces_by_dim().get(1).cloned().unwrap_or_default().into_iter().collect();
        let e = edges.choose(rng).expect("sphere has edges").clone();
        c = c.stellar_subdivision(&e).unwrap();
    }
    c
}

/// Random flag ball: a random flag sphere with one vertex star removed.
pub fn random_flag_ball<R: Rng>(dim: usize, steps: usize, rng: &mut R) -> SimplicialComplex {
    let s = random_flag_sphere(dim, steps, rng);
    let v = rng.gen_range(0..s.num_vertices);
    s.deletion(v).compacted().0
}

/// Random stacked subdivision of the `d`-simplex: repeatedly stellar-subdivide
/// a random facet.
pub fn random_stacked_simplex<R: Rng>(d: usize, steps: usize, rng: &mut R) -> SimplicialComplex {
    let mut c = SimplicialComplex::simplex(d + 1);
    for _ in 0..steps {
        let f = c.facets.choose(rng).unwrap().clone();
        c = c.stellar_subdivision(&f).unwrap();
    }
    c
}

/// Random subdivision of the `d`-simplex by stellar moves at random faces of
/// any dimension (edges, triangles, facets).
pub fn random_subdivided_simplex<R: Rng>(d: usize, steps: usize, rng: &mut R) -> SimplicialComplex {
    let mut c = SimplicialComplex::simplex(d + 1);
    for _ in 0..steps {
        let faces: Vec<Face> = c.all_faces().into_iter().filter(|f| f.len() >= 2).collect();
        let f = faces.choose(rng).unwrap().clone();
        c = c.stellar_subdivision(&f).unwrap();
    }
    c
}
