//! Discrete Morse matchings on face posets: acyclicity, critical cells,
//! collapse search, out-j collapses with their ledgers, non-evasiveness and
//! the source-elimination deformation of a complex onto a subcomplex.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexcore::{CubicalComplex, Face, FacePoset, SimplicialComplex};

/// Default node budget for searches.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("face {0:?} is not in the complex")]
    UnknownFace(Face),
    #[error("malformed pair: {0}")]
    MalformedPair(String),
    #[error("matching has a closed gradient path")]
    InvalidMatching,
    #[error("search exhausted after {nodes} nodes")]
    SearchExhausted { nodes: u64 },
    #[error("complex has {faces} faces, above the limit {limit}")]
    SizeLimitExceeded { faces: usize, limit: usize },
    #[error("face {0:?} of the subcomplex is matched outside it")]
    OutwardFacePresent(Face),
    #[error("target is not a subcomplex")]
    TargetNotSubcomplex,
}

/// Hasse diagram of a face poset, with covers indexed both ways.
#[derive(Clone, Debug)]
pub struct HasseDiagram {
    pub faces: Vec<Face>,
    pub dims: Vec<usize>,
    pub up: Vec<Vec<usize>>,
    pub down: Vec<Vec<usize>>,
    index: HashMap<Face, usize>,
}

impl HasseDiagram {
    pub fn from_poset(p: &FacePoset) -> Self {
        let n = p.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(lo, hi) in &p.covers {
            up[lo].push(hi);
            down[hi].push(lo);
        }
        let faces: Vec<Face> = p.elements.iter().map(|(_, f)| f.clone()).collect();
        let dims = p.elements.iter().map(|(d, _)| *d).collect();
        let index = faces.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        HasseDiagram { faces, dims, up, down, index }
    }

    pub fn of_simplicial(c: &SimplicialComplex) -> Self {
        HasseDiagram::from_poset(&c.face_poset())
    }

    pub fn of_cubical(c: &CubicalComplex) -> Self {
        HasseDiagram::from_poset(&c.face_poset())
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, f: &[usize]) -> Result<usize, MorseError> {
        let mut k = f.to_vec();
        k.sort_unstable();
        self.index.get(&k).copied().ok_or(MorseError::UnknownFace(k))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().map(|&d| if d % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// The opposite poset: covers reversed, ranks mirrored.
    pub fn dual(&self) -> HasseDiagram {
        let top = self.dims.iter().copied().max().unwrap_or(0);
        HasseDiagram {
            faces: self.faces.clone(),
            dims: self.dims.iter().map(|d| top - d).collect(),
            up: self.down.clone(),
            down: self.up.clone(),
            index: self.index.clone(),
        }
    }

    /// Indices of faces of a subcomplex given by its facets.
    pub fn subcomplex_indices(&self, sub: &SimplicialComplex) -> Result<Vec<bool>, MorseError> {
        let mut mark = vec![false; self.len()];
        for f in sub.all_faces() {
            let i = self.index_of(&f).map_err(|_| MorseError::TargetNotSubcomplex)?;
            mark[i] = true;
        }
        Ok(mark)
    }
}

/// Matching given by (face, coface) vertex-set keys.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseMatching {
    pub pairs: Vec<(Face, Face)>,
}

/// Faces of a subcomplex D matched with faces outside D, all of dimension j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutJLedger {
    pub j: usize,
    pub outward: Vec<Face>,
}

fn resolve(h: &HasseDiagram, m: &MorseMatching) -> Result<Vec<Option<usize>>, MorseError> {
    let mut partner = vec![None; h.len()];
    for (a, b) in &m.pairs {
        let (i, j) = (h.index_of(a)?, h.index_of(b)?);
        if !h.up[i].contains(&j) {
            return Err(MorseError::MalformedPair(format!("{a:?} is not a facet of {b:?}")));
        }
        if partner[i].is_some() || partner[j].is_some() {
            return Err(MorseError::MalformedPair(format!("face reused in pair ({a:?}, {b:?})")));
        }
        partner[i] = Some(j);
        partner[j] = Some(i);
    }
    Ok(partner)
}

/// Modified Hasse digraph: every cover points down except matched ones.
fn has_cycle(h: &HasseDiagram, partner: &[Option<usize>]) -> bool {
    let n = h.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for hi in 0..n {
        for &lo in &h.down[hi] {
            if partner[lo] == Some(hi) {
                out[lo].push(hi);
            } else {
                out[hi].push(lo);
            }
        }
    }
    let mut indeg = vec![0usize; n];
    for targets in &out {
        for &t in targets {
            indeg[t] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for &t in &out[u] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                stack.push(t);
            }
        }
    }
    seen != n
}

/// True iff the pairs are covers, disjoint, and there is no closed gradient path.
pub fn validate_matching(h: &HasseDiagram, m: &MorseMatching) -> Result<bool, MorseError> {
    let partner = resolve(h, m)?;
    Ok(!has_cycle(h, &partner))
}

/// Unmatched faces grouped by dimension.
pub fn critical_faces(h: &HasseDiagram, m: &MorseMatching) -> Result<Vec<Vec<Face>>, MorseError> {
    let partner = resolve(h, m)?;
    if has_cycle(h, &partner) {
        return Err(MorseError::InvalidMatching);
    }
    let top = h.dims.iter().copied().max().map_or(0, |d| d + 1);
    let mut out = vec![Vec::new(); top];
    for i in 0..h.len() {
        if partner[i].is_none() {
            out[h.dims[i]].push(h.faces[i].clone());
        }
    }
    Ok(out)
}

pub fn critical_counts(h: &HasseDiagram, m: &MorseMatching) -> Result<Vec<usize>, MorseError> {
    Ok(critical_faces(h, m)?.iter().map(Vec::len).collect())
}

/// Search settings.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub budget: u64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET, restarts: 32, seed: 0 }
    }
}

/// How a search succeeded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOutcome {
    Greedy,
    Backtracking { nodes: u64 },
    Restart { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseResult {
    pub matching: MorseMatching,
    pub outcome: SearchOutcome,
}

/// Mutable state of an elementary-collapse sequence.
struct Collapser<'a> {
    h: &'a HasseDiagram,
    alive: Vec<bool>,
    upcount: Vec<usize>,
    keep: Vec<bool>,
    /// Subcomplex D and the allowed outward dimension, for out-j collapses.
    sub: Option<(Vec<bool>, usize)>,
    rank: Vec<usize>,
    free: BTreeSet<(usize, usize)>,
    pairs: Vec<(usize, usize)>,
    remaining: usize,
}

impl<'a> Collapser<'a> {
    fn new(h: &'a HasseDiagram, keep: Vec<bool>, sub: Option<(Vec<bool>, usize)>, rank: Vec<usize>) -> Self {
        let upcount: Vec<usize> = h.up.iter().map(Vec::len).collect();
        let remaining = (0..h.len()).filter(|&i| !keep[i]).count();
        let mut c = Collapser {
            h,
            alive: vec![true; h.len()],
            upcount,
            keep,
            sub,
            rank,
            free: BTreeSet::new(),
            pairs: Vec::new(),
            remaining,
        };
        for i in 0..h.len() {
            c.refresh(i);
        }
        c
    }

    fn refresh(&mut self, i: usize) {
        let key = (self.rank[i], i);
        if self.alive[i] && !self.keep[i] && self.upcount[i] == 1 {
            self.free.insert(key);
        } else {
            self.free.remove(&key);
        }
    }

    fn partner_of(&self, s: usize) -> usize {
        *self.h.up[s].iter().find(|&&t| self.alive[t]).expect("free face has a coface")
    }

    fn is_outward(&self, s: usize, t: usize) -> bool {
        matches!(&self.sub, Some((d, _)) if d[s] && !d[t])
    }

    fn allowed(&self, s: usize, t: usize) -> bool {
        if self.keep[t] {
            return false;
        }
        match &self.sub {
            Some((d, j)) if d[s] && !d[t] => self.h.dims[s] == *j,
            _ => true,
        }
    }

    /// Allowed free pairs, inward ones first.
    fn candidates(&self) -> Vec<(usize, usize)> {
        let mut inward = Vec::new();
        let mut outward = Vec::new();
        for &(_, s) in &self.free {
            let t = self.partner_of(s);
            if !self.allowed(s, t) {
                continue;
            }
            if self.is_outward(s, t) {
                outward.push((s, t));
            } else {
                inward.push((s, t));
            }
        }
        inward.extend(outward);
        inward
    }

    fn first_candidate(&self) -> Option<(usize, usize)> {
        let mut fallback = None;
        for &(_, s) in &self.free {
            let t = self.partner_of(s);
            if !self.allowed(s, t) {
                continue;
            }
            if !self.is_outward(s, t) {
                return Some((s, t));
            }
            fallback.get_or_insert((s, t));
        }
        fallback
    }

    fn apply(&mut self, s: usize, t: usize) {
        for x in [s, t] {
            self.alive[x] = false;
            self.refresh(x);
        }
        for x in [s, t] {
            for k in 0..self.h.down[x].len() {
                let r = self.h.down[x][k];
                self.upcount[r] -= 1;
                self.refresh(r);
            }
        }
        self.pairs.push((s, t));
        self.remaining -= 2;
    }

    fn undo(&mut self) {
        let (s, t) = self.pairs.pop().expect("undo without move");
        for x in [s, t] {
            self.alive[x] = true;
        }
        for x in [s, t] {
            for k in 0..self.h.down[x].len() {
                let r = self.h.down[x][k];
                self.upcount[r] += 1;
                self.refresh(r);
            }
        }
        for x in [s, t] {
            self.refresh(x);
        }
        self.remaining += 2;
    }

    fn done(&self) -> bool {
        self.remaining == 0
    }

    fn greedy(&mut self, nodes: &mut u64) -> bool {
        while !self.done() {
            let Some((s, t)) = self.first_candidate() else { return false };
            self.apply(s, t);
            *nodes += 1;
        }
        true
    }

    fn backtrack(&mut self, nodes: &mut u64, budget: u64) -> bool {
        if self.done() {
            return true;
        }
        for (s, t) in self.candidates() {
            if *nodes >= budget {
                return false;
            }
            *nodes += 1;
            self.apply(s, t);
            if self.backtrack(nodes, budget) {
                return true;
            }
            self.undo();
        }
        false
    }

    fn matching(&self) -> MorseMatching {
        MorseMatching {
            pairs: self.pairs.iter().map(|&(s, t)| (self.h.faces[s].clone(), self.h.faces[t].clone())).collect(),
        }
    }
}

fn run_search(
    h: &HasseDiagram,
    keep: &[bool],
    sub: Option<(Vec<bool>, usize)>,
    cfg: &SearchConfig,
) -> Result<CollapseResult, MorseError> {
    let lex: Vec<usize> = (0..h.len()).collect();
    let mut nodes = 0u64;
    let mut c = Collapser::new(h, keep.to_vec(), sub.clone(), lex.clone());
    if c.greedy(&mut nodes) {
        return Ok(CollapseResult { matching: c.matching(), outcome: SearchOutcome::Greedy });
    }
    let mut c = Collapser::new(h, keep.to_vec(), sub.clone(), lex);
    let bt_budget = cfg.budget / 2;
    let mut bt_nodes = 0u64;
    if c.backtrack(&mut bt_nodes, bt_budget) {
        return Ok(CollapseResult { matching: c.matching(), outcome: SearchOutcome::Backtracking { nodes: bt_nodes } });
    }
    nodes += bt_nodes;
    for r in 0..cfg.restarts {
        if nodes >= cfg.budget {
            break;
        }
        let seed = cfg.seed.wrapping_add(r as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rank: Vec<usize> = (0..h.len()).collect();
        rank.shuffle(&mut rng);
        let mut c = Collapser::new(h, keep.to_vec(), sub.clone(), rank);
        if c.greedy(&mut nodes) {
            return Ok(CollapseResult { matching: c.matching(), outcome: SearchOutcome::Restart { seed } });
        }
    }
    Err(MorseError::SearchExhausted { nodes })
}

/// Where a collapse should end.
#[derive(Clone, Debug)]
pub enum CollapseTarget {
    /// Any single vertex; the lowest-id vertex is kept.
    Point,
    Vertex(usize),
    Subcomplex(SimplicialComplex),
}

/// Searches for a sequence of elementary collapses from the complex to the
/// target, encoded as a matching whose critical faces are exactly the target.
pub fn collapse_search(
    h: &HasseDiagram,
    target: &CollapseTarget,
    cfg: &SearchConfig,
) -> Result<CollapseResult, MorseError> {
    let mut keep = vec![false; h.len()];
    match target {
        CollapseTarget::Point => {
            if let Some(v) = (0..h.len()).find(|&i| h.dims[i] == 0) {
                keep[v] = true;
            }
        }
        CollapseTarget::Vertex(v) => keep[h.index_of(&[*v])?] = true,
        CollapseTarget::Subcomplex(s) => keep = h.subcomplex_indices(s)?,
    }
    run_search(h, &keep, None, cfg)
}

/// Collapse of the whole complex to a vertex of `d` in which every face of
/// `d` matched outside `d` has dimension `j`.
pub fn out_j_collapse(
    h: &HasseDiagram,
    d: &SimplicialComplex,
    j: usize,
    cfg: &SearchConfig,
) -> Result<(MorseMatching, OutJLedger), MorseError> {
    let in_d = h.subcomplex_indices(d)?;
    let mut keep = vec![false; h.len()];
    let base = d.used_vertices().first().map(|&v| h.index_of(&[v])).transpose()?;
    match base {
        Some(v) => keep[v] = true,
        None => {
            if let Some(v) = (0..h.len()).find(|&i| h.dims[i] == 0) {
                keep[v] = true;
            }
        }
    }
    let res = run_search(h, &keep, Some((in_d.clone(), j)), cfg)?;
    let ledger = ledger_of(h, &in_d, &res.matching, j)?;
    Ok((res.matching, ledger))
}

fn ledger_of(h: &HasseDiagram, in_d: &[bool], m: &MorseMatching, j: usize) -> Result<OutJLedger, MorseError> {
    let mut outward = Vec::new();
    for (a, b) in &m.pairs {
        let (i, k) = (h.index_of(a)?, h.index_of(b)?);
        if in_d[i] && !in_d[k] {
            outward.push(a.clone());
        }
    }
    Ok(OutJLedger { j, outward })
}

/// Outwardly matched faces of `d` under any matching.
pub fn outward_faces(h: &HasseDiagram, d: &SimplicialComplex, m: &MorseMatching) -> Result<Vec<Face>, MorseError> {
    let in_d = h.subcomplex_indices(d)?;
    Ok(ledger_of(h, &in_d, m, 0)?.outward)
}

/// Expected ledger size (−1)^j (χ(D) − 1).
pub fn expected_ledger_size(d: &SimplicialComplex, j: usize) -> i64 {
    let s = d.euler_characteristic() - 1;
    if j.is_multiple_of(2) {
        s
    } else {
        -s
    }
}

/// A step of the deformation of the complex onto the subcomplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeformationEvent {
    Collapse { face: Face, coface: Face },
    Attach { face: Face, dim: usize },
}

/// Repeatedly removes a source of the modified Hasse digraph with D contracted.
pub fn deformation_trace(
    h: &HasseDiagram,
    d: &SimplicialComplex,
    m: &MorseMatching,
) -> Result<Vec<DeformationEvent>, MorseError> {
    let partner = resolve(h, m)?;
    if has_cycle(h, &partner) {
        return Err(MorseError::InvalidMatching);
    }
    let in_d = if d.is_void() { vec![false; h.len()] } else { h.subcomplex_indices(d)? };
    for i in 0..h.len() {
        if let Some(p) = partner[i] {
            if in_d[i] && !in_d[p] {
                return Err(MorseError::OutwardFacePresent(h.faces[i].clone()));
            }
        }
    }
    let mut alive: Vec<bool> = (0..h.len()).map(|i| !in_d[i]).collect();
    let mut left = alive.iter().filter(|&&a| a).count();
    let mut events = Vec::new();
    let is_source = |s: usize, alive: &[bool]| -> bool {
        let up_ok = h.up[s].iter().all(|&t| !alive[t] || partner[s] == Some(t));
        let down_ok = h.down[s].iter().all(|&r| !(alive[r] && partner[s] == Some(r)));
        up_ok && down_ok
    };
    while left > 0 {
        let s = (0..h.len()).find(|&s| alive[s] && is_source(s, &alive)).ok_or(MorseError::InvalidMatching)?;
        match partner[s] {
            Some(t) if alive[t] && h.up[s].contains(&t) => {
                alive[s] = false;
                alive[t] = false;
                left -= 2;
                events.push(DeformationEvent::Collapse { face: h.faces[s].clone(), coface: h.faces[t].clone() });
            }
            _ => {
                alive[s] = false;
                left -= 1;
                events.push(DeformationEvent::Attach { face: h.faces[s].clone(), dim: h.dims[s] });
            }
        }
    }
    Ok(events)
}

/// Recursive non-evasiveness with memoization on relabelled facet lists.
pub struct NonEvasiveness {
    memo: HashMap<Vec<Vec<usize>>, bool>,
    pub face_limit: usize,
}

impl Default for NonEvasiveness {
    fn default() -> Self {
        NonEvasiveness { memo: HashMap::new(), face_limit: 20_000 }
    }
}

/// Relabels vertices by an iterated degree refinement, ties broken by id.
fn canonical_key(c: &SimplicialComplex) -> Vec<Vec<usize>> {
    let (c, _) = c.compacted();
    let n = c.num_vertices;
    let graph = c.graph();
    let mut color: Vec<u64> = (0..n)
        .map(|v| {
            let in_facets = c.facets.iter().filter(|f| f.contains(&v)).count() as u64;
            (graph[v].len() as u64) << 32 | in_facets
        })
        .collect();
    for _ in 0..2 {
        let mut sigs: Vec<(u64, Vec<u64>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u64> = graph[v].iter().map(|&w| color[w]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        color = sigs.drain(..).map(|s| uniq.binary_search(&s).unwrap() as u64).collect();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (color[v], v));
    let mut relabel = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let mut facets: Vec<Vec<usize>> = c
        .facets
        .iter()
        .map(|f| {
            let mut g: Vec<usize> = f.iter().map(|&v| relabel[v]).collect();
            g.sort_unstable();
            g
        })
        .collect();
    facets.sort();
    facets
}

impl NonEvasiveness {
    pub fn is_nonevasive(&mut self, c: &SimplicialComplex) -> Result<bool, MorseError> {
        let faces: usize = c.f_vector().iter().sum();
        if faces > self.face_limit {
            return Err(MorseError::SizeLimitExceeded { faces, limit: self.face_limit });
        }
        Ok(self.decide(c))
    }

    fn decide(&mut self, c: &SimplicialComplex) -> bool {
        let verts = c.used_vertices();
        if verts.len() <= 1 {
            return verts.len() == 1;
        }
        if c.dim() == 0 {
            return false;
        }
        if verts.iter().any(|v| c.facets.iter().all(|f| f.contains(v))) {
            return true;
        }
        let key = canonical_key(c);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let mut result = false;
        for &v in &verts {
            let link = c.link_unindexed(&[v]).expect("vertex in complex");
            if self.decide(&link) && self.decide(&c.deletion(v)) {
                result = true;
                break;
            }
        }
        self.memo.insert(key, result);
        result
    }
}

pub fn is_nonevasive(c: &SimplicialComplex) -> Result<bool, MorseError> {
    NonEvasiveness::default().is_nonevasive(c)
}
