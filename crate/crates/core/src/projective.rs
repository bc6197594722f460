//! Projective incidence constructions: flats with exact join and meet,
//! straight-line incidence programs, von Staudt gadgets, frame derivations
//! for lattice cubes and the 64-point configuration around the seed torus,
//! Lawrence extensions and subdirect cones.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cct::{layer_orbit, theta0, theta1};
use crate::exactfield::{
    dot, is_zero_vec, projective_normal, proportional, vec_add, vec_from_ints, vec_scale, vec_sub, FieldElem,
    FieldError, MatF, VecF,
};
use crate::solve_nullspace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProjError {
    #[error("step {step}: join of dependent flats")]
    DegenerateJoin { step: usize },
    #[error("step {step}: flats do not meet")]
    EmptyMeet { step: usize },
    #[error("step {step}: meet of nested or identical flats")]
    DegenerateMeet { step: usize },
    #[error("step {step}: reference {arg} is not an earlier value")]
    BadReference { step: usize, arg: usize },
    #[error("step {step}: needs at least two arguments")]
    Arity { step: usize },
    #[error("expected {expected} inputs, got {got}")]
    InputCount { expected: usize, got: usize },
    #[error("input {0} is the zero vector")]
    ZeroInput(usize),
    #[error("value {0} is not a point")]
    NotAPoint(usize),
    #[error("output lies at infinity")]
    OutputAtInfinity,
    #[error("coordinate {0} is not positive")]
    NonPositiveCoordinate(usize),
    #[error("dimension {0} is below 3")]
    DimensionTooSmall(usize),
    #[error("the zero polynomial has no functional arrangement")]
    ZeroPolynomial,
    #[error("polynomial does not vanish at the given value")]
    NotARoot,
    #[error("polynomial has no sign change on the isolating interval")]
    NoSignChange,
    #[error("cannot parse polynomial {0:?}")]
    BadPolynomial(String),
    #[error("point {0} is not a vertex of the hull")]
    NotAVertex(usize),
    #[error("free point {0} lies in the polytope")]
    FreePointInPolytope(usize),
    #[error("wedge hyperplane meets the polytope")]
    WedgeMeetsPolytope,
    #[error("wedge points do not span a hyperplane")]
    WedgeNotHyperplane,
    #[error("lift hyperplane does not separate apex and polytope")]
    SeparationFailure,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

// ---------------------------------------------------------------------------
// Flats

/// Linear subspace of homogeneous coordinate space, stored as RREF basis rows.
/// A point is a 1-dimensional flat, a line 2-dimensional, and so on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub ambient: usize,
    pub basis: Vec<VecF>,
}

fn rref_rows(rows: &[VecF], ambient: usize) -> Vec<VecF> {
    if rows.is_empty() {
        return Vec::new();
    }
    debug_assert!(rows.iter().all(|r| r.len() == ambient));
    let (r, piv) = MatF::from_rows(rows).rref();
    (0..piv.len()).map(|i| r.row(i)).collect()
}

/// Cross product of homogeneous triples: the line through two points or the
/// point on two lines.
pub fn cross3(u: &[FieldElem], v: &[FieldElem]) -> VecF {
    vec![&u[1] * &v[2] - &u[2] * &v[1], &u[2] * &v[0] - &u[0] * &v[2], &u[0] * &v[1] - &u[1] * &v[0]]
}

impl Flat {
    pub fn point(v: &[FieldElem]) -> Result<Flat, ProjError> {
        if is_zero_vec(v) {
            return Err(ProjError::ZeroInput(0));
        }
        Ok(Flat::span(&[v.to_vec()]))
    }

    pub fn span(rows: &[VecF]) -> Flat {
        let ambient = rows.first().map_or(0, Vec::len);
        Flat { ambient, basis: rref_rows(rows, ambient) }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_point(&self) -> bool {
        self.basis.len() == 1
    }

    /// Homogeneous coordinates in projective normal form, for points only.
    pub fn as_point(&self) -> Option<VecF> {
        self.is_point().then(|| projective_normal(&self.basis[0]))
    }

    /// Linear equations cutting out the flat.
    pub fn equations(&self) -> Vec<VecF> {
        if self.basis.is_empty() {
            return (0..self.ambient)
                .map(|i| (0..self.ambient).map(|j| FieldElem::from(i64::from(i == j))).collect())
                .collect();
        }
        solve_nullspace(&MatF::from_rows(&self.basis))
    }

    pub fn contains_vec(&self, v: &[FieldElem]) -> bool {
        self.equations().iter().all(|e| dot(e, v).is_zero())
    }

    pub fn contains(&self, other: &Flat) -> bool {
        let eqs = self.equations();
        other.basis.iter().all(|v| eqs.iter().all(|e| dot(e, v).is_zero()))
    }

    fn join_raw(&self, other: &Flat) -> Option<Flat> {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        let f = Flat::span(&rows);
        (f.rank() == self.rank() + other.rank()).then_some(f)
    }

    fn meet_raw(&self, other: &Flat) -> Result<Flat, bool> {
        if self.contains(other) || other.contains(self) {
            return Err(true);
        }
        // Planar lines: the meet is the cross product of their equations.
        if self.ambient == 3 && self.rank() == 2 && other.rank() == 2 {
            let l = cross3(&self.basis[0], &self.basis[1]);
            let m = cross3(&other.basis[0], &other.basis[1]);
            let p = cross3(&l, &m);
            return if is_zero_vec(&p) { Err(true) } else { Ok(Flat::point(&p).expect("nonzero")) };
        }
        let mut eqs = self.equations();
        eqs.extend(other.equations());
        let sol = solve_nullspace(&MatF::from_rows(&eqs));
        if sol.is_empty() {
            return Err(false);
        }
        Ok(Flat::span(&sol))
    }

    /// Span of two flats; fails unless the flats are independent.
    pub fn join(&self, other: &Flat) -> Result<Flat, ProjError> {
        self.join_raw(other).ok_or(ProjError::DegenerateJoin { step: 0 })
    }

    /// Intersection of two flats; fails if empty or if one contains the other.
    pub fn meet(&self, other: &Flat) -> Result<Flat, ProjError> {
        self.meet_raw(other).map_err(|nested| {
            if nested {
                ProjError::DegenerateMeet { step: 0 }
            } else {
                ProjError::EmptyMeet { step: 0 }
            }
        })
    }

    pub fn transform(&self, m: &MatF) -> Flat {
        let rows: Vec<VecF> = self.basis.iter().map(|v| m.apply(v)).collect();
        Flat::span(&rows)
    }
}

/// Homogenizes an affine point by appending 1.
pub fn homogenize(p: &[FieldElem]) -> VecF {
    let mut v = p.to_vec();
    v.push(FieldElem::one());
    v
}

/// Affine coordinates of a finite homogeneous point.
pub fn dehomogenize(p: &[FieldElem]) -> Option<VecF> {
    let last = p.last()?;
    if last.is_zero() {
        return None;
    }
    let inv = last.inv().ok()?;
    Some(p[..p.len() - 1].iter().map(|x| x * &inv).collect())
}

// ---------------------------------------------------------------------------
// Incidence programs

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Join,
    Meet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub op: Op,
    pub args: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// Straight-line program over join and meet. Inputs take ids `0..n`, step `i`
/// produces id `n + i`; every argument must refer to an earlier id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceProgram {
    pub inputs: Vec<String>,
    pub steps: Vec<Step>,
    pub outputs: Vec<usize>,
}

impl IncidenceProgram {
    pub fn num_values(&self) -> usize {
        self.inputs.len() + self.steps.len()
    }

    /// Checks that every reference points backwards.
    pub fn well_formed(&self) -> Result<(), ProjError> {
        let n = self.inputs.len();
        for (i, s) in self.steps.iter().enumerate() {
            if s.args.len() < 2 {
                return Err(ProjError::Arity { step: i });
            }
            if let Some(&a) = s.args.iter().find(|&&a| a >= n + i) {
                return Err(ProjError::BadReference { step: i, arg: a });
            }
        }
        if let Some(&o) = self.outputs.iter().find(|&&o| o >= self.num_values()) {
            return Err(ProjError::BadReference { step: self.steps.len(), arg: o });
        }
        Ok(())
    }

    /// Evaluates every value of the program on homogeneous input points.
    pub fn evaluate(&self, inputs: &[VecF]) -> Result<Vec<Flat>, ProjError> {
        self.well_formed()?;
        if inputs.len() != self.inputs.len() {
            return Err(ProjError::InputCount { expected: self.inputs.len(), got: inputs.len() });
        }
        let mut vals = Vec::with_capacity(self.num_values());
        for (i, v) in inputs.iter().enumerate() {
            vals.push(Flat::point(v).map_err(|_| ProjError::ZeroInput(i))?);
        }
        for (i, s) in self.steps.iter().enumerate() {
            let mut acc = vals[s.args[0]].clone();
            for &a in &s.args[1..] {
                acc = match s.op {
                    Op::Join => acc.join_raw(&vals[a]).ok_or(ProjError::DegenerateJoin { step: i })?,
                    Op::Meet => acc.meet_raw(&vals[a]).map_err(|nested| {
                        if nested {
                            ProjError::DegenerateMeet { step: i }
                        } else {
                            ProjError::EmptyMeet { step: i }
                        }
                    })?,
                };
            }
            vals.push(acc);
        }
        Ok(vals)
    }

    /// Output points in projective normal form.
    pub fn run(&self, inputs: &[VecF]) -> Result<Vec<VecF>, ProjError> {
        let vals = self.evaluate(inputs)?;
        self.outputs.iter().map(|&o| vals[o].as_point().ok_or(ProjError::NotAPoint(o))).collect()
    }

    /// Ids of named steps.
    pub fn named_steps(&self) -> Vec<(String, usize)> {
        let n = self.inputs.len();
        self.steps.iter().enumerate().filter_map(|(i, s)| s.name.clone().map(|name| (name, n + i))).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("program serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Incremental construction of an [`IncidenceProgram`].
#[derive(Clone, Debug, Default)]
pub struct ProgramBuilder {
    prog: IncidenceProgram,
    names: HashMap<String, usize>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an input; all inputs must precede the first step.
    pub fn input(&mut self, name: &str) -> usize {
        assert!(self.prog.steps.is_empty(), "inputs must be declared before steps");
        let id = self.prog.inputs.len();
        self.prog.inputs.push(name.to_string());
        self.names.insert(name.to_string(), id);
        id
    }

    fn push(&mut self, op: Op, args: &[usize], name: Option<&str>) -> usize {
        let id = self.prog.num_values();
        self.prog.steps.push(Step { op, args: args.to_vec(), name: name.map(str::to_string) });
        if let Some(n) = name {
            self.names.insert(n.to_string(), id);
        }
        id
    }

    pub fn join(&mut self, args: &[usize]) -> usize {
        self.push(Op::Join, args, None)
    }

    pub fn meet(&mut self, args: &[usize]) -> usize {
        self.push(Op::Meet, args, None)
    }

    pub fn meet_named(&mut self, name: &str, args: &[usize]) -> usize {
        self.push(Op::Meet, args, Some(name))
    }

    pub fn id(&self, name: &str) -> usize {
        *self.names.get(name).unwrap_or_else(|| panic!("unknown name {name}"))
    }

    pub fn ids(&self, names: &[&str]) -> Vec<usize> {
        names.iter().map(|n| self.id(n)).collect()
    }

    pub fn output(&mut self, id: usize) {
        self.prog.outputs.push(id);
    }

    pub fn finish(self) -> IncidenceProgram {
        self.prog
    }
}

// ---------------------------------------------------------------------------
// Named configurations and frame derivations

/// Finite list of named homogeneous points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedConfig {
    pub names: Vec<String>,
    pub points: Vec<VecF>,
}

impl NamedConfig {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn push(&mut self, name: &str, p: VecF) {
        self.names.push(name.to_string());
        self.points.push(p);
    }

    pub fn get(&self, name: &str) -> Option<&VecF> {
        self.names.iter().position(|n| n == name).map(|i| &self.points[i])
    }
}

/// Base point names plus a program whose named steps recover every other point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameDerivation {
    pub base: Vec<String>,
    pub program: IncidenceProgram,
}

impl FrameDerivation {
    /// Evaluates the program on the base points of `cfg` and collects the
    /// named results.
    pub fn derive(&self, cfg: &NamedConfig) -> Result<NamedConfig, ProjError> {
        let inputs = self
            .program
            .inputs
            .iter()
            .map(|n| cfg.get(n).cloned().ok_or_else(|| ProjError::UnknownPoint(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let vals = self.program.evaluate(&inputs)?;
        let mut out = NamedConfig::default();
        for (n, p) in self.program.inputs.iter().zip(inputs) {
            out.push(n, projective_normal(&p));
        }
        for (name, id) in self.program.named_steps() {
            out.push(&name, vals[id].as_point().ok_or(ProjError::NotAPoint(id))?);
        }
        Ok(out)
    }
}

/// True iff replaying the derivation from the base of `cfg` reproduces every
/// other point of `cfg` exactly (up to homogeneous scaling).
pub fn frame_replay(cfg: &NamedConfig, derivation: &FrameDerivation) -> Result<bool, ProjError> {
    if derivation.base.iter().any(|b| !derivation.program.inputs.contains(b)) {
        return Err(ProjError::InvalidConfig("base point missing from program inputs".into()));
    }
    let derived = derivation.derive(cfg)?;
    for (n, p) in cfg.names.iter().zip(&cfg.points) {
        match derived.get(n) {
            Some(q) if proportional(p, q) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Lattice cubes

/// All points of `{-1,0,1}^d` in lexicographic order.
pub fn lattice_qd(d: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                [-1, 0, 1].into_iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Scaled lattice cube `D/2 (Q^d + 1)` containing `p`, with its frame set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjConfig {
    pub points: Vec<VecF>,
    pub frame: Vec<VecF>,
}

pub fn proj_config(p: &[FieldElem]) -> Result<ProjConfig, ProjError> {
    let d = p.len();
    if d < 3 {
        return Err(ProjError::DimensionTooSmall(d));
    }
    if let Some(i) = p.iter().position(|x| x.sign() <= 0) {
        return Err(ProjError::NonPositiveCoordinate(i));
    }
    let half = FieldElem::frac(1, 2);
    let points = lattice_qd(d)
        .into_iter()
        .map(|v| v.iter().zip(p).map(|(&c, x)| x * &(&FieldElem::int(c + 1) * &half)).collect())
        .collect();
    let mut frame = vec![vec![FieldElem::zero(); d]];
    for i in 0..d {
        let mut e = vec![FieldElem::zero(); d];
        e[i] = p[i].clone();
        frame.push(e.clone());
        e[i] = &p[i] * &half;
        frame.push(e);
    }
    Ok(ProjConfig { points, frame })
}

fn q3_name(v: &[i64]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

/// `Q^3` with the derivation from the cube vertices and the origin: facet
/// centers as meets of diagonals, edge midpoints as meets of edges with the
/// plane through the origin and the two adjacent facet centers.
pub fn q3_frame() -> (NamedConfig, FrameDerivation) {
    let mut cfg = NamedConfig::default();
    for v in lattice_qd(3) {
        cfg.push(&q3_name(&v), homogenize(&vec_from_ints(&v)));
    }
    let mut b = ProgramBuilder::new();
    let mut base = Vec::new();
    for v in lattice_qd(3) {
        if v.iter().all(|&x| x != 0) || v.iter().all(|&x| x == 0) {
            base.push(q3_name(&v));
            b.input(&q3_name(&v));
        }
    }
    // facet centers
    for axis in 0..3 {
        for s in [1, -1] {
            let (j, k) = ((axis + 1) % 3, (axis + 2) % 3);
            let corner = |sj: i64, sk: i64| {
                let mut v = [0i64; 3];
                v[axis] = s;
                v[j] = sj;
                v[k] = sk;
                q3_name(&v)
            };
            let d1 = b.ids(&[&corner(1, 1), &corner(-1, -1)]);
            let d2 = b.ids(&[&corner(1, -1), &corner(-1, 1)]);
            let l1 = b.join(&d1);
            let l2 = b.join(&d2);
            let mut c = [0i64; 3];
            c[axis] = s;
            b.meet_named(&q3_name(&c), &[l1, l2]);
        }
    }
    // edge midpoints
    for v in lattice_qd(3) {
        let zeros: Vec<usize> = (0..3).filter(|&i| v[i] == 0).collect();
        if zeros.len() != 1 {
            continue;
        }
        let free = zeros[0];
        let mut u = v.clone();
        let mut w = v.clone();
        u[free] = 1;
        w[free] = -1;
        let fixed: Vec<usize> = (0..3).filter(|&i| i != free).collect();
        let centers: Vec<String> = fixed
            .iter()
            .map(|&i| {
                let mut c = vec![0; 3];
                c[i] = v[i];
                q3_name(&c)
            })
            .collect();
        let edge_ends = b.ids(&[&q3_name(&u), &q3_name(&w)]);
        let edge = b.join(&edge_ends);
        let plane_pts = b.ids(&["(0,0,0)", &centers[0], &centers[1]]);
        let plane = b.join(&plane_pts);
        b.meet_named(&q3_name(&v), &[edge, plane]);
    }
    (cfg, FrameDerivation { base, program: b.finish() })
}

// ---------------------------------------------------------------------------
// Von Staudt gadgets

/// The nine points of `Q^2 + 1` in the plane, homogeneous, named `q{x}{y}`.
pub fn planar_base() -> NamedConfig {
    let mut cfg = NamedConfig::default();
    for x in 0..3 {
        for y in 0..3 {
            cfg.push(&format!("q{x}{y}"), vec_from_ints(&[x, y, 1]));
        }
    }
    cfg
}

/// Homogeneous point `x e_1` of the plane.
pub fn on_axis(x: &FieldElem) -> VecF {
    vec![x.clone(), FieldElem::zero(), FieldElem::one()]
}

/// Builder for planar arithmetic over the `Q^2 + 1` frame. Frame lines are
/// created lazily so a program only contains the steps it uses.
pub struct StaudtBuilder {
    pub b: ProgramBuilder,
    frame: HashMap<&'static str, usize>,
    consts: BTreeMap<u64, usize>,
}

impl StaudtBuilder {
    /// Declares the nine base points followed by the named scalar inputs.
    pub fn new(scalars: &[&str]) -> Self {
        let mut b = ProgramBuilder::new();
        for n in planar_base().names {
            b.input(&n);
        }
        for s in scalars {
            b.input(s);
        }
        let mut consts = BTreeMap::new();
        consts.insert(0, b.id("q00"));
        consts.insert(1, b.id("q10"));
        StaudtBuilder { b, frame: HashMap::new(), consts }
    }

    fn frame_id(&mut self, key: &'static str) -> usize {
        if let Some(&id) = self.frame.get(key) {
            return id;
        }
        let o = self.b.id("q00");
        let q10 = self.b.id("q10");
        let p0 = self.b.id("q01");
        let p1 = self.b.id("q11");
        let id = match key {
            "xaxis" => self.b.join(&[o, q10]),
            "yaxis" => self.b.join(&[o, p0]),
            "aux" => self.b.join(&[p0, p1]),
            "yinf" => {
                let y = self.frame_id("yaxis");
                let side = self.b.join(&[q10, p1]);
                self.b.meet(&[y, side])
            }
            "xinf" => {
                let x = self.frame_id("xaxis");
                let a = self.frame_id("aux");
                self.b.meet(&[x, a])
            }
            "linf" => {
                let xi = self.frame_id("xinf");
                let yi = self.frame_id("yinf");
                self.b.join(&[xi, yi])
            }
            "antidiag" => {
                let l = self.b.join(&[q10, p0]);
                let linf = self.frame_id("linf");
                self.b.meet(&[l, linf])
            }
            _ => unreachable!("unknown frame element"),
        };
        self.frame.insert(key, id);
        id
    }

    /// Direction of the line from `(0,1)` to `(β,0)`, a point at infinity.
    fn slope_of(&mut self, beta: usize) -> usize {
        let p0 = self.b.id("q01");
        let l = self.b.join(&[p0, beta]);
        let linf = self.frame_id("linf");
        self.b.meet(&[l, linf])
    }

    pub fn add(&mut self, alpha: usize, beta: usize) -> usize {
        let yinf = self.frame_id("yinf");
        let aux = self.frame_id("aux");
        let vert = self.b.join(&[alpha, yinf]);
        let lifted = self.b.meet(&[vert, aux]);
        let dir = self.slope_of(beta);
        let l = self.b.join(&[lifted, dir]);
        let x = self.frame_id("xaxis");
        self.b.meet(&[l, x])
    }

    pub fn sub(&mut self, gamma: usize, beta: usize) -> usize {
        let dir = self.slope_of(beta);
        let l = self.b.join(&[gamma, dir]);
        let aux = self.frame_id("aux");
        let lifted = self.b.meet(&[l, aux]);
        let yinf = self.frame_id("yinf");
        let vert = self.b.join(&[lifted, yinf]);
        let x = self.frame_id("xaxis");
        self.b.meet(&[vert, x])
    }

    pub fn mul(&mut self, alpha: usize, beta: usize) -> usize {
        let anti = self.frame_id("antidiag");
        let y = self.frame_id("yaxis");
        let l = self.b.join(&[alpha, anti]);
        let on_y = self.b.meet(&[l, y]);
        let dir = self.slope_of(beta);
        let l2 = self.b.join(&[on_y, dir]);
        let x = self.frame_id("xaxis");
        self.b.meet(&[l2, x])
    }

    pub fn div(&mut self, gamma: usize, beta: usize) -> usize {
        let dir = self.slope_of(beta);
        let y = self.frame_id("yaxis");
        let l = self.b.join(&[gamma, dir]);
        let on_y = self.b.meet(&[l, y]);
        let anti = self.frame_id("antidiag");
        let l2 = self.b.join(&[on_y, anti]);
        let x = self.frame_id("xaxis");
        self.b.meet(&[l2, x])
    }

    /// The non-negative integer `k` on the axis, by repeated addition of 1.
    pub fn constant(&mut self, k: u64) -> usize {
        if let Some(&id) = self.consts.get(&k) {
            return id;
        }
        let prev = self.constant(k - 1);
        let one = self.consts[&1];
        let id = self.add(prev, one);
        self.consts.insert(k, id);
        id
    }

    /// The integer `k` on the axis; negative values by subtraction from 0.
    pub fn signed_constant(&mut self, k: i64) -> usize {
        let m = self.constant(k.unsigned_abs());
        if k >= 0 {
            m
        } else {
            let o = self.consts[&0];
            self.sub(o, m)
        }
    }

    pub fn finish(mut self, out: usize) -> IncidenceProgram {
        self.b.output(out);
        self.b.finish()
    }
}

fn two_input_gadget(f: fn(&mut StaudtBuilder, usize, usize) -> usize) -> IncidenceProgram {
    let mut s = StaudtBuilder::new(&["alpha", "beta"]);
    let (a, b) = (s.b.id("alpha"), s.b.id("beta"));
    let out = f(&mut s, a, b);
    s.finish(out)
}

pub fn gadget_add() -> IncidenceProgram {
    two_input_gadget(StaudtBuilder::add)
}

pub fn gadget_mul() -> IncidenceProgram {
    two_input_gadget(StaudtBuilder::mul)
}

pub fn gadget_sub() -> IncidenceProgram {
    two_input_gadget(StaudtBuilder::sub)
}

pub fn gadget_div() -> IncidenceProgram {
    two_input_gadget(StaudtBuilder::div)
}

/// Evaluates a planar program whose inputs are the base followed by scalars
/// placed on the first axis; returns the scalar of the first output.
pub fn eval_scalar(prog: &IncidenceProgram, scalars: &[FieldElem]) -> Result<FieldElem, ProjError> {
    let mut inputs = planar_base().points;
    inputs.extend(scalars.iter().map(on_axis));
    let out = prog.run(&inputs)?;
    let p = out.first().ok_or(ProjError::InvalidConfig("program has no output".into()))?;
    if !p[1].is_zero() {
        return Err(ProjError::InvalidConfig("output is off the first axis".into()));
    }
    let aff = dehomogenize(p).ok_or(ProjError::OutputAtInfinity)?;
    Ok(aff[0].clone())
}

/// Integer polynomial, coefficients from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPoly(pub Vec<i64>);

impl IntPoly {
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|&c| c != 0)
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.0.iter().rev().fold(FieldElem::zero(), |acc, &c| &(&acc * x) + &FieldElem::int(c))
    }

    /// Parses sums of terms like `3x^2`, `-x`, `+5`.
    pub fn parse(s: &str) -> Result<Self, ProjError> {
        let bad = || ProjError::BadPolynomial(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in t.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut coeffs: Vec<i64> = Vec::new();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coef, exp) = match body.find('x') {
                Some(i) => {
                    let c = body[..i].trim_end_matches('*');
                    let c: i64 = if c.is_empty() { 1 } else { c.parse().map_err(|_| bad())? };
                    let rest = &body[i + 1..];
                    let e: usize = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                    };
                    (c, e)
                }
                None => (body.parse::<i64>().map_err(|_| bad())?, 0),
            };
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, 0);
            }
            coeffs[exp] += if neg { -coef } else { coef };
        }
        Ok(IntPoly(coeffs))
    }
}

/// Program on the base and one scalar input `x` whose output is `ψ(x) e_1`,
/// assembled by Horner's rule from ADD, SUB and MUL gadgets.
pub fn compile_polynomial(psi: &IntPoly) -> Result<IncidenceProgram, ProjError> {
    let n = psi.degree().ok_or(ProjError::ZeroPolynomial)?;
    let mut s = StaudtBuilder::new(&["x"]);
    let x = s.b.id("x");
    let lead = psi.0[n];
    let mut acc = s.signed_constant(lead);
    let mut acc_is_one = lead == 1;
    for i in (0..n).rev() {
        acc = if acc_is_one { x } else { s.mul(acc, x) };
        acc_is_one = false;
        let c = psi.0[i];
        if c > 0 {
            let k = s.constant(c as u64);
            acc = s.add(acc, k);
        } else if c < 0 {
            let k = s.constant(c.unsigned_abs());
            acc = s.sub(acc, k);
        }
    }
    Ok(s.finish(acc))
}

// ---------------------------------------------------------------------------
// Coordinate configurations for algebraic numbers

#[derive(Clone, Debug)]
pub struct CoorConfig {
    pub zeta: FieldElem,
    pub config: NamedConfig,
    pub derivation: FrameDerivation,
    /// Sign change of ψ on the isolating interval; `None` when the degree
    /// exceeds 4 and the check is left to the caller.
    pub sign_change: Option<bool>,
}

/// Configuration containing `ζ e_1`, framed by `Q^2+1` together with the
/// rational endpoints `ζ⁻, ζ⁺` derived by division and the arrangement of ψ,
/// whose output coincides with the origin.
pub fn coor_config(zeta: &FieldElem, psi: &IntPoly, lo: (i64, i64), hi: (i64, i64)) -> Result<CoorConfig, ProjError> {
    if !psi.eval(zeta).is_zero() {
        return Err(ProjError::NotARoot);
    }
    let deg = psi.degree().ok_or(ProjError::ZeroPolynomial)?;
    let sign_change = if deg <= 4 {
        let l = psi.eval(&FieldElem::frac(lo.0, lo.1)).sign();
        let h = psi.eval(&FieldElem::frac(hi.0, hi.1)).sign();
        if l * h >= 0 {
            return Err(ProjError::NoSignChange);
        }
        Some(true)
    } else {
        None
    };
    let poly = compile_polynomial(psi)?;
    let mut s = StaudtBuilder::new(&["zeta"]);
    let endpoint = |s: &mut StaudtBuilder, (p, q): (i64, i64)| {
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        let num = s.signed_constant(p);
        let den = s.constant(q as u64);
        if q == 1 {
            num
        } else {
            s.div(num, den)
        }
    };
    let lo_id = endpoint(&mut s, lo);
    let hi_id = endpoint(&mut s, hi);
    // splice the polynomial program with x bound to zeta
    let offset = s.b.finish_len();
    let zeta_id = s.b.id("zeta");
    let n_in = poly.inputs.len();
    let remap = |a: usize| {
        if a < n_in - 1 {
            a
        } else if a == n_in - 1 {
            zeta_id
        } else {
            a - n_in + offset
        }
    };
    for st in &poly.steps {
        let args: Vec<usize> = st.args.iter().map(|&a| remap(a)).collect();
        match st.op {
            Op::Join => s.b.join(&args),
            Op::Meet => s.b.meet(&args),
        };
    }
    let out = remap(poly.outputs[0]);
    for (id, name) in [(lo_id, "zeta_lo"), (hi_id, "zeta_hi"), (out, "psi_out")] {
        s.b.name(id, name);
    }
    let mut prog = s.finish(out);
    prog.outputs = vec![lo_id, hi_id, out];
    let mut config = planar_base();
    config.push("zeta", on_axis(zeta));
    let vals = prog.evaluate(&config.points)?;
    let origin = config.get("q00").expect("origin").clone();
    if vals[out].as_point().is_none_or(|p| !proportional(&p, &origin)) {
        return Err(ProjError::NotARoot);
    }
    for (name, id) in prog.named_steps() {
        config.push(&name, vals[id].as_point().ok_or(ProjError::NotAPoint(id))?);
    }
    let derivation = FrameDerivation { base: prog.inputs.clone(), program: prog };
    Ok(CoorConfig { zeta: zeta.clone(), config, derivation, sign_change })
}

impl ProgramBuilder {
    fn finish_len(&self) -> usize {
        self.prog.num_values()
    }

    /// Attaches a name to an existing step; inputs keep their own names.
    pub fn name(&mut self, id: usize, name: &str) {
        let n = self.prog.inputs.len();
        if id >= n && self.prog.steps[id - n].name.is_none() {
            self.prog.steps[id - n].name = Some(name.to_string());
            self.names.insert(name.to_string(), id);
        }
    }
}

// ---------------------------------------------------------------------------
// Exact linear programming

/// Solves `A x = b, x >= 0` for feasibility with a phase-one simplex and
/// Bland's rule. Returns a feasible `x` when one exists.
pub fn feasible_point(a: &[VecF], b: &[FieldElem]) -> Option<VecF> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let mut t: Vec<VecF> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].sign() < 0;
        let mut row = vec![FieldElem::zero(); width];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = FieldElem::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // reduced costs of the phase-one objective
    let mut cost = vec![FieldElem::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..n + m).find(|&j| cost[j].sign() < 0) {
        let mut leave: Option<(usize, FieldElem)> = None;
        for i in 0..m {
            if t[i][enter].sign() > 0 {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { break };
        let piv = t[r][enter].inv().expect("positive pivot");
        t[r] = vec_scale(&t[r], &piv);
        for i in 0..m {
            if i != r && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                t[i] = vec_sub(&t[i], &vec_scale(&t[r], &f));
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            cost = vec_sub(&cost, &vec_scale(&t[r], &f));
        }
        basis[r] = enter;
    }
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![FieldElem::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Exact membership of `q` in the convex hull of `points` (affine coordinates).
pub fn in_convex_hull(points: &[VecF], q: &[FieldElem]) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = q.len();
    let mut a: Vec<VecF> = (0..d).map(|i| points.iter().map(|p| p[i].clone()).collect()).collect();
    a.push(vec![FieldElem::one(); points.len()]);
    let mut b = q.to_vec();
    b.push(FieldElem::one());
    feasible_point(&a, &b).is_some()
}

/// Indices of points that are not vertices of the hull of the list.
pub fn non_vertices(points: &[VecF]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            let others: Vec<VecF> =
                points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
            in_convex_hull(&others, &points[i])
        })
        .collect()
}

/// Dimension of the affine hull.
pub fn affine_dim(points: &[VecF]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let rows: Vec<VecF> = points.iter().map(|p| homogenize(p)).collect();
    MatF::from_rows(&rows).rank() - 1
}

// ---------------------------------------------------------------------------
// PP configurations and Lawrence extensions

/// A polytope given by its vertices together with free points outside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PPConfig {
    pub ambient_dim: usize,
    pub polytope_vertices: Vec<VecF>,
    pub free_points: Vec<VecF>,
}

impl PPConfig {
    pub fn validate(&self) -> Result<(), ProjError> {
        let d = self.ambient_dim;
        if self.polytope_vertices.iter().chain(&self.free_points).any(|p| p.len() != d) {
            return Err(ProjError::InvalidConfig(format!("points must have {d} coordinates")));
        }
        if let Some(&i) = non_vertices(&self.polytope_vertices).first() {
            return Err(ProjError::NotAVertex(i));
        }
        if let Some(i) = self.free_points.iter().position(|r| in_convex_hull(&self.polytope_vertices, r)) {
            return Err(ProjError::FreePointInPolytope(i));
        }
        Ok(())
    }

    pub fn polytope_dim(&self) -> usize {
        affine_dim(&self.polytope_vertices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawrenceExtension {
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<VecF>,
    /// Linear functional vanishing on the original polytope and positive on
    /// every lifted point, exposing the polytope as a face.
    pub face_functional: VecF,
}

/// Lifts every free point `r_i` to `r_i + e` and `r_i + 2e` on a private new
/// axis and certifies that all resulting points are hull vertices.
pub fn lawrence_extension(cfg: &PPConfig) -> Result<LawrenceExtension, ProjError> {
    cfg.validate()?;
    let d = cfg.ambient_dim;
    let k = cfg.free_points.len();
    let pad = |p: &VecF| {
        let mut v = p.clone();
        v.resize(d + k, FieldElem::zero());
        v
    };
    let mut vertices: Vec<VecF> = cfg.polytope_vertices.iter().map(pad).collect();
    for (i, r) in cfg.free_points.iter().enumerate() {
        for h in [1, 2] {
            let mut v = pad(r);
            v[d + i] = FieldElem::int(h);
            vertices.push(v);
        }
    }
    if let Some(&i) = non_vertices(&vertices).first() {
        return Err(ProjError::NotAVertex(i));
    }
    let mut face_functional = vec![FieldElem::zero(); d + k];
    for x in &mut face_functional[d..] {
        *x = FieldElem::one();
    }
    let np = cfg.polytope_vertices.len();
    let exposes = vertices.iter().enumerate().all(|(i, v)| {
        let s = dot(&face_functional, v).sign();
        if i < np {
            s == 0
        } else {
            s > 0
        }
    });
    if !exposes {
        return Err(ProjError::InvalidConfig("polytope is not exposed".into()));
    }
    Ok(LawrenceExtension { ambient_dim: d + k, dim: affine_dim(&vertices), vertices, face_functional })
}

/// Dimension and vertex count of a Lawrence extension.
pub fn lawrence_counts(dim_p: usize, f0_p: usize, f0_r: usize) -> (usize, usize) {
    (dim_p + f0_r, f0_p + 2 * f0_r)
}

// ---------------------------------------------------------------------------
// Weak projective triples and subdirect cones

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakTriple {
    pub ambient_dim: usize,
    pub polytope_vertices: Vec<VecF>,
    /// Indices into `polytope_vertices`.
    pub frame: Vec<usize>,
    pub free_points: Vec<VecF>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdirectCone {
    pub cone: PPConfig,
    pub apex: VecF,
    /// Lift hyperplane `normal · x = offset` in the enlarged space.
    pub lift_normal: VecF,
    pub lift_offset: FieldElem,
}

fn centroid(points: &[VecF]) -> VecF {
    let n = FieldElem::int(points.len() as i64).inv().expect("nonempty");
    let sum = points.iter().skip(1).fold(points[0].clone(), |acc, p| vec_add(&acc, p));
    vec_scale(&sum, &n)
}

/// Pyramid over the central projection of `P` onto a hyperplane through the
/// wedge hyperplane spanned by `wedge` (indices into the free points),
/// bundled with the frame and free points. The apex defaults to the
/// centroid of `P` raised by one unit on the new axis, and the lift
/// hyperplane rises with slope 1 toward the apex.
pub fn subdirect_cone(triple: &WeakTriple, wedge: &[usize], apex: Option<VecF>) -> Result<SubdirectCone, ProjError> {
    let d = triple.ambient_dim;
    let p = &triple.polytope_vertices;
    if p.is_empty() || triple.frame.iter().any(|&q| q >= p.len()) {
        return Err(ProjError::InvalidConfig("frame must index polytope vertices".into()));
    }
    let rows: Vec<VecF> = wedge
        .iter()
        .map(|&i| triple.free_points.get(i).map(|r| homogenize(r)))
        .collect::<Option<_>>()
        .ok_or_else(|| ProjError::InvalidConfig("wedge index out of range".into()))?;
    let eq = solve_nullspace(&MatF::from_rows(&rows));
    if eq.len() != 1 {
        return Err(ProjError::WedgeNotHyperplane);
    }
    // f(x) = a·x - c, oriented negative on P and scaled so f(centroid) = -1/2
    let mut a = eq[0][..d].to_vec();
    let mut c = -eq[0][d].clone();
    let f = |a: &VecF, c: &FieldElem, x: &[FieldElem]| &dot(a, x) - c;
    let signs: Vec<i32> = p.iter().map(|v| f(&a, &c, v).sign()).collect();
    if signs.contains(&0) || signs.iter().any(|&s| s != signs[0]) {
        return Err(ProjError::WedgeMeetsPolytope);
    }
    let b = centroid(p);
    let scale = (&FieldElem::frac(-1, 2) / &f(&a, &c, &b)).abs();
    let scale = if signs[0] > 0 { -scale } else { scale };
    a = vec_scale(&a, &scale);
    c = &c * &scale;
    let mut normal = a.clone();
    normal.push(FieldElem::one());
    let lift = |x: &VecF| {
        let mut v = x.clone();
        v.push(FieldElem::zero());
        v
    };
    let apex = apex.unwrap_or_else(|| {
        let mut v = b.clone();
        v.push(FieldElem::one());
        v
    });
    if apex.len() != d + 1 || apex[d].is_zero() {
        return Err(ProjError::InvalidConfig("apex must lie off the base space".into()));
    }
    let g = |x: &[FieldElem]| &dot(&normal, x) - &c;
    let gv = g(&apex);
    if gv.sign() <= 0 || p.iter().any(|v| g(&lift(v)).sign() >= 0) {
        return Err(ProjError::SeparationFailure);
    }
    let mut verts = vec![apex.clone()];
    for v in p {
        let lv = lift(v);
        let t = &gv / &(&gv - &g(&lv));
        verts.push(vec_add(&apex, &vec_scale(&vec_sub(&lv, &apex), &t)));
    }
    let mut free: Vec<VecF> = triple.frame.iter().map(|&q| lift(&p[q])).collect();
    free.extend(triple.free_points.iter().map(lift));
    Ok(SubdirectCone {
        cone: PPConfig { ambient_dim: d + 1, polytope_vertices: verts, free_points: free },
        apex,
        lift_normal: normal,
        lift_offset: c,
    })
}

/// Dimension and vertex count of the polytope obtained from a weak
/// projective triple by a subdirect cone followed by a Lawrence extension.
pub fn weak_triple_counts(dim_p: usize, f0_p: usize, f0_q: usize, f0_r: usize) -> (usize, usize) {
    lawrence_counts(dim_p + 1, f0_p + 1, f0_q + f0_r)
}

/// Vertex count of the points of the 64-point configuration that are not
/// vertices of the seed torus.
pub const K_FREE_POINTS: usize = 40;
/// Vertices of the seed torus, all of which frame the extended tori.
pub const K_FRAME_POINTS: usize = 24;

/// Dimension and vertex count of the projectively unique polytope with a face
/// equivalent to the symmetric torus polytope of width `n`.
pub fn pcctp_counts(n: usize) -> (usize, usize) {
    weak_triple_counts(4, 12 * (n + 1), K_FRAME_POINTS, K_FREE_POINTS)
}

// ---------------------------------------------------------------------------
// The 64-point configuration

fn fe(a: i64, b: i64, c: i64) -> FieldElem {
    // a + b√3, over c
    FieldElem::new(
        crate::exactfield::rat(a, c),
        crate::exactfield::rat(0, 1),
        crate::exactfield::rat(b, c),
        crate::exactfield::rat(0, 1),
    )
}

fn pt(x: [FieldElem; 4]) -> VecF {
    let mut v = x.to_vec();
    v.push(FieldElem::one());
    v
}

/// Base points: the vertices of the product of two triangles, and the corner
/// `(λ, λ, −2, 0, 1)` of the first square, whose scale λ is fixed by the
/// step-six coplanarity.
pub fn k_base(lambda: &FieldElem) -> NamedConfig {
    let z = FieldElem::zero;
    let mut cfg = NamedConfig::default();
    let tri = [(fe(-2, 0, 1), fe(0, 0, 1)), (fe(1, 0, 1), fe(0, 1, 1)), (fe(1, 0, 1), fe(0, -1, 1))];
    for (i, (x3, x4)) in tri.iter().enumerate() {
        let k = i + 1;
        cfg.push(&format!("a{k}+"), pt([FieldElem::one(), z(), x3.clone(), x4.clone()]));
        cfg.push(&format!("a{k}-"), pt([FieldElem::int(-1), z(), x3.clone(), x4.clone()]));
        cfg.push(&format!("oa{k}+"), pt([z(), FieldElem::one(), x3.clone(), x4.clone()]));
    }
    cfg.push("w1++", pt([lambda.clone(), lambda.clone(), FieldElem::int(-2), z()]));
    cfg
}

fn other(c: char) -> char {
    if c == '+' {
        '-'
    } else {
        '+'
    }
}

/// Derivation of the remaining 54 points from [`k_base`].
pub fn k_derivation() -> FrameDerivation {
    let base_cfg = k_base(&FieldElem::one());
    let mut b = ProgramBuilder::new();
    for n in &base_cfg.names {
        b.input(n);
    }
    let line = |b: &mut ProgramBuilder, p: &str, q: &str| {
        let ids = b.ids(&[p, q]);
        b.join(&ids)
    };
    let plane = |b: &mut ProgramBuilder, p: &str, q: &str, r: &str| {
        let l = line(b, p, q);
        let rid = b.id(r);
        b.join(&[l, rid])
    };
    // I: midpoints b_ij and the missing corners of the first product
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let l1 = line(&mut b, &format!("a{i}+"), &format!("a{j}-"));
        let l2 = line(&mut b, &format!("a{i}-"), &format!("a{j}+"));
        b.meet_named(&format!("b{i}{j}"), &[l1, l2]);
    }
    for (i, j) in [(1, 2), (2, 3), (3, 1)] {
        let bij = if i < j { format!("b{i}{j}") } else { format!("b{j}{i}") };
        let pl = plane(&mut b, &format!("a{i}+"), &format!("a{i}-"), &format!("oa{i}+"));
        let l = line(&mut b, &bij, &format!("oa{j}+"));
        b.meet_named(&format!("oa{i}-"), &[pl, l]);
    }
    // center of the triangle through two medians and the midpoint plane
    let m1 = plane(&mut b, "a1+", "a1-", "b23");
    let m2 = plane(&mut b, "a2+", "a2-", "b13");
    let axis = b.meet(&[m1, m2]);
    let mid = plane(&mut b, "b12", "b13", "b23");
    b.meet_named("b0", &[axis, mid]);
    // II: the antipodal product
    for s in ['+', '-'] {
        let t = other(s);
        for k in 1..=3 {
            let top = plane(&mut b, &format!("a1{s}"), &format!("a2{s}"), &format!("a3{s}"));
            let l = line(&mut b, "b0", &format!("a{k}{t}"));
            b.meet_named(&format!("ta{k}{s}"), &[top, l]);
        }
        for k in 1..=3 {
            let top = plane(&mut b, &format!("oa1{s}"), &format!("oa2{s}"), &format!("oa3{s}"));
            let l = line(&mut b, "b0", &format!("oa{k}{t}"));
            b.meet_named(&format!("ota{k}{s}"), &[top, l]);
        }
    }
    // III: layer one
    for s in ['+', '-'] {
        for (k, i, j) in [(1, 2, 3), (2, 1, 3), (3, 1, 2)] {
            let l1 = line(&mut b, &format!("a{k}{s}"), &format!("ta{k}{s}"));
            let l2 = line(&mut b, &format!("a{i}{s}"), &format!("a{j}{s}"));
            b.meet_named(&format!("psi{k}{s}"), &[l1, l2]);
        }
        for (k, i, j) in [(1, 2, 3), (2, 1, 3), (3, 1, 2)] {
            let l1 = line(&mut b, &format!("ota{k}{s}"), &format!("oa{k}{s}"));
            let l2 = line(&mut b, &format!("ota{i}{s}"), &format!("ota{j}{s}"));
            b.meet_named(&format!("otpsi{k}{s}"), &[l1, l2]);
        }
    }
    // IV: the first square from one corner
    let l1 = line(&mut b, "a1+", "a1-");
    let l2 = line(&mut b, "oa1+", "oa1-");
    b.meet_named("b1", &[l1, l2]);
    for (name, o2, o1) in [("b12++", "oa2+", "oa1+"), ("b12+-", "oa2-", "oa1-")] {
        let l1 = line(&mut b, "a1+", o2);
        let l2 = line(&mut b, "a2+", o1);
        b.meet_named(name, &[l1, l2]);
    }
    let square = plane(&mut b, "a1+", "a1-", "oa1+");
    let px = plane(&mut b, "b1", "b12", "b12++");
    let x_line = b.meet(&[px, square]);
    let py = plane(&mut b, "b1", "b12", "b12+-");
    let y_line = b.meet(&[py, square]);
    let h_line = line(&mut b, "a1+", "a1-");
    let v_line = line(&mut b, "oa1+", "oa1-");
    let l = line(&mut b, "w1++", "oa1-");
    b.meet_named("w_ab", &[l, h_line]);
    let l = line(&mut b, "w_ab", "oa1+");
    b.meet_named("w1+-", &[l, y_line]);
    let l = line(&mut b, "w1++", "a1-");
    b.meet_named("w_ad", &[l, v_line]);
    let l = line(&mut b, "w_ad", "a1+");
    b.meet_named("w1-+", &[l, y_line]);
    let l = line(&mut b, "w1+-", "a1-");
    b.meet_named("w_bc", &[l, v_line]);
    let l = line(&mut b, "w_bc", "a1+");
    b.meet_named("w1--", &[l, x_line]);
    // V: transfer of the square corners to the other squares
    let transfer = |b: &mut ProgramBuilder, target: &str, quad: [&str; 3], p: &str, q: &str, w: &str| {
        let sq = plane(b, quad[0], quad[1], quad[2]);
        let s1 = plane(b, "a1+", p, w);
        let s2 = plane(b, "oa1+", q, w);
        let m1 = b.meet(&[sq, s1]);
        let m2 = b.meet(&[sq, s2]);
        b.meet_named(target, &[m1, m2]);
    };
    for i in [2, 3] {
        for s in ["++", "--"] {
            let (ap, am, op) = (format!("a{i}+"), format!("a{i}-"), format!("oa{i}+"));
            transfer(&mut b, &format!("w{i}{s}"), [&ap, &am, &op], &ap, &op, &format!("w1{s}"));
        }
    }
    for i in 1..=3 {
        for s in ["+-", "-+"] {
            let (tp, tm, otp) = (format!("ta{i}+"), format!("ta{i}-"), format!("ota{i}+"));
            transfer(&mut b, &format!("tw{i}{s}"), [&tp, &tm, &otp], &tp, &otp, &format!("w1{s}"));
        }
    }
    // VII: points at infinity
    for (name, p, q, r, s) in [
        ("inf1", "a1+", "a2+", "a1-", "a2-"),
        ("inf2", "a3+", "a2+", "a3-", "a2-"),
        ("inf3", "a1+", "a1-", "a2+", "a2-"),
        ("inf4", "oa1+", "oa1-", "oa2+", "oa2-"),
    ] {
        let l1 = line(&mut b, p, q);
        let l2 = line(&mut b, r, s);
        b.meet_named(name, &[l1, l2]);
    }
    let prog = b.finish();
    FrameDerivation { base: prog.inputs.clone(), program: prog }
}

/// Exact coplanarity data for the six step-six points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoplanarityCertificate {
    pub lambda: FieldElem,
    pub points: Vec<VecF>,
    /// Maximal minors of the 6×5 matrix of points, one per omitted row.
    pub minors: Vec<FieldElem>,
}

impl CoplanarityCertificate {
    pub fn coplanar(&self) -> bool {
        self.minors.iter().all(FieldElem::is_zero)
    }
}

/// The six points that must share a hyperplane for the square scale λ.
pub fn step_six_points(lambda: &FieldElem) -> Vec<VecF> {
    let z = FieldElem::zero;
    let h = FieldElem::frac(1, 2);
    let s3 = FieldElem::sqrt3();
    let hs3 = &s3 * &h;
    let l = lambda.clone();
    vec![
        pt([FieldElem::one(), z(), FieldElem::one(), z()]),
        pt([z(), FieldElem::one(), h.clone(), hs3.clone()]),
        pt([z(), FieldElem::one(), h, -hs3]),
        pt([-l.clone(), l.clone(), FieldElem::int(2), z()]),
        pt([l.clone(), l.clone(), FieldElem::one(), s3.clone()]),
        pt([l.clone(), l, FieldElem::one(), -s3]),
    ]
}

pub fn step_six_certificate(lambda: &FieldElem) -> CoplanarityCertificate {
    let points = step_six_points(lambda);
    let minors = (0..points.len())
        .map(|skip| {
            let rows: Vec<VecF> =
                points.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, p)| p.clone()).collect();
            MatF::from_rows(&rows).det()
        })
        .collect();
    CoplanarityCertificate { lambda: lambda.clone(), points, minors }
}

/// Names of the points of the configuration that are vertices of the seed torus.
pub fn k_torus_names() -> Vec<String> {
    let mut out = Vec::new();
    for k in 1..=3 {
        for s in ['+', '-'] {
            out.push(format!("psi{k}{s}"));
            out.push(format!("otpsi{k}{s}"));
        }
    }
    for k in 1..=3 {
        out.push(format!("w{k}++"));
        out.push(format!("w{k}--"));
        out.push(format!("tw{k}+-"));
        out.push(format!("tw{k}-+"));
    }
    out
}

#[derive(Clone, Debug)]
pub struct KConfiguration {
    pub lambda: FieldElem,
    pub config: NamedConfig,
    pub derivation: FrameDerivation,
    pub certificate: CoplanarityCertificate,
    pub torus_names: Vec<String>,
}

impl KConfiguration {
    pub fn f0(&self) -> usize {
        self.config.len()
    }

    pub fn free_points(&self) -> Vec<String> {
        self.config.names.iter().filter(|n| !self.torus_names.contains(n)).cloned().collect()
    }

    /// Index of each torus point among the seed torus vertices, matched by
    /// exact coordinates.
    pub fn torus_correspondence(&self) -> Option<Vec<(String, usize)>> {
        let mut seed = layer_orbit(&theta0());
        seed.extend(layer_orbit(&theta1()));
        self.torus_names
            .iter()
            .map(|n| {
                let p = self.config.get(n)?;
                seed.iter().position(|q| proportional(p, q)).map(|i| (n.clone(), i))
            })
            .collect()
    }

    /// The points at infinity, which span the equatorial hyperplane.
    pub fn infinity_rank(&self) -> usize {
        let rows: Vec<VecF> = (1..=4).filter_map(|i| self.config.get(&format!("inf{i}")).cloned()).collect();
        MatF::from_rows(&rows).rank()
    }
}

/// Runs the scripted derivation for a given square scale λ.
pub fn build_k_configuration_with(lambda: &FieldElem) -> Result<KConfiguration, ProjError> {
    let derivation = k_derivation();
    let config = derivation.derive(&k_base(lambda))?;
    Ok(KConfiguration {
        lambda: lambda.clone(),
        config,
        derivation,
        certificate: step_six_certificate(lambda),
        torus_names: k_torus_names(),
    })
}

/// The configuration at the scale `√2 − 1` forced by the step-six coplanarity.
pub fn build_k_configuration() -> Result<KConfiguration, ProjError> {
    build_k_configuration_with(&FieldElem::q2(-1, 1, 1))
}

// ---------------------------------------------------------------------------
// Equivariance

/// Random invertible integer matrix with entries in `[-3, 3]`.
pub fn random_projective_map<R: Rng>(rng: &mut R, n: usize) -> MatF {
    loop {
        let mut m = MatF::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, FieldElem::int(rng.gen_range(-3..=3)));
            }
        }
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Replays `prog` on `inputs` and on their images under `map`, and checks
/// that the outputs correspond under `map`.
pub fn check_equivariance(prog: &IncidenceProgram, inputs: &[VecF], map: &MatF) -> Result<bool, ProjError> {
    let plain = prog.evaluate(inputs)?;
    let moved: Vec<VecF> = inputs.iter().map(|v| map.apply(v)).collect();
    let image = prog.evaluate(&moved)?;
    Ok(prog.outputs.iter().all(|&o| plain[o].transform(map) == image[o]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: i64) -> FieldElem {
        FieldElem::int(v)
    }

    #[test]
    fn join_and_meet_in_the_plane() {
        let p = Flat::point(&vec_from_ints(&[0, 0, 1])).unwrap();
        let q = Flat::point(&vec_from_ints(&[1, 1, 1])).unwrap();
        let r = Flat::point(&vec_from_ints(&[1, 0, 1])).unwrap();
        let s = Flat::point(&vec_from_ints(&[0, 1, 1])).unwrap();
        let m = p.join(&q).unwrap().meet(&r.join(&s).unwrap()).unwrap();
        assert_eq!(m.as_point().unwrap(), vec![FieldElem::frac(1, 2), FieldElem::frac(1, 2), x(1)]);
        assert!(p.join(&p).is_err());
        let l = p.join(&q).unwrap();
        assert_eq!(l.meet(&l), Err(ProjError::DegenerateMeet { step: 0 }));
    }

    #[test]
    fn program_rejects_forward_references() {
        let prog = IncidenceProgram {
            inputs: vec!["a".into(), "b".into()],
            steps: vec![Step { op: Op::Join, args: vec![0, 2], name: None }],
            outputs: vec![2],
        };
        assert_eq!(prog.well_formed(), Err(ProjError::BadReference { step: 0, arg: 2 }));
    }

    #[test]
    fn program_json_roundtrip() {
        let g = gadget_add();
        let s = g.to_json();
        assert!(s.contains("\"op\": \"join\""));
        assert_eq!(IncidenceProgram::from_json(&s).unwrap(), g);
    }

    #[test]
    fn gadgets_compute_arithmetic() {
        assert_eq!(eval_scalar(&gadget_add(), &[x(2), x(3)]).unwrap(), x(5));
        assert_eq!(eval_scalar(&gadget_mul(), &[x(2), x(3)]).unwrap(), x(6));
        assert_eq!(eval_scalar(&gadget_sub(), &[x(2), x(3)]).unwrap(), x(-1));
        assert_eq!(eval_scalar(&gadget_div(), &[x(2), x(3)]).unwrap(), FieldElem::frac(2, 3));
        let r2 = FieldElem::sqrt2();
        assert_eq!(eval_scalar(&gadget_mul(), &[r2.clone(), r2]).unwrap(), x(2));
        assert_eq!(eval_scalar(&gadget_add(), &[x(0), x(0)]).unwrap(), x(0));
        assert_eq!(eval_scalar(&gadget_mul(), &[x(0), x(4)]).unwrap(), x(0));
    }

    #[test]
    fn division_by_zero_is_not_finite() {
        assert!(eval_scalar(&gadget_div(), &[x(1), x(0)]).is_err());
    }

    #[test]
    fn polynomial_parsing() {
        assert_eq!(IntPoly::parse("x^2-2").unwrap(), IntPoly(vec![-2, 0, 1]));
        assert_eq!(IntPoly::parse("-3x^3 + x - 7").unwrap(), IntPoly(vec![-7, 1, 0, -3]));
        assert_eq!(IntPoly::parse("2*x").unwrap(), IntPoly(vec![0, 2]));
        assert!(IntPoly::parse("x^").is_err());
        assert!(IntPoly::parse("y").is_err());
    }

    #[test]
    fn compiled_polynomials() {
        let id = compile_polynomial(&IntPoly(vec![0, 1])).unwrap();
        assert!(id.steps.is_empty());
        assert_eq!(eval_scalar(&id, &[x(7)]).unwrap(), x(7));
        let p = compile_polynomial(&IntPoly(vec![-2, 0, 1])).unwrap();
        assert_eq!(eval_scalar(&p, &[FieldElem::sqrt2()]).unwrap(), x(0));
        let q = compile_polynomial(&IntPoly(vec![-3, 2])).unwrap();
        assert_eq!(eval_scalar(&q, &[FieldElem::frac(3, 2)]).unwrap(), x(0));
        let neg = compile_polynomial(&IntPoly(vec![1, 0, -2])).unwrap();
        assert_eq!(eval_scalar(&neg, &[x(3)]).unwrap(), x(-17));
        assert_eq!(compile_polynomial(&IntPoly(vec![0])), Err(ProjError::ZeroPolynomial));
    }

    #[test]
    fn coordinate_configurations() {
        let c = coor_config(&FieldElem::sqrt2(), &IntPoly(vec![-2, 0, 1]), (1, 1), (3, 2)).unwrap();
        assert_eq!(c.sign_change, Some(true));
        assert!(frame_replay(&c.config, &c.derivation).unwrap());
        assert_eq!(c.config.get("zeta_hi").unwrap(), &on_axis(&FieldElem::frac(3, 2)));
        let half = coor_config(&FieldElem::frac(1, 2), &IntPoly(vec![-1, 2]), (0, 1), (1, 1)).unwrap();
        assert!(half.config.get("zeta").is_some());
        assert_eq!(
            coor_config(&FieldElem::sqrt3(), &IntPoly(vec![-2, 0, 1]), (3, 2), (2, 1)).unwrap_err(),
            ProjError::NotARoot
        );
        assert_eq!(
            coor_config(&FieldElem::sqrt2(), &IntPoly(vec![-2, 0, 1]), (3, 2), (2, 1)).unwrap_err(),
            ProjError::NoSignChange
        );
    }

    #[test]
    fn lattice_and_proj_configs() {
        assert_eq!(lattice_qd(1), vec![vec![-1], vec![0], vec![1]]);
        assert_eq!(lattice_qd(3).len(), 27);
        let c = proj_config(&[x(2), x(2), x(2)]).unwrap();
        assert!(c.points.contains(&vec![x(2), x(2), x(2)]));
        assert!(c.points.contains(&vec![x(1), x(1), x(1)]));
        assert_eq!(proj_config(&[x(1), x(2), x(3)]).unwrap().frame.len(), 7);
        assert_eq!(proj_config(&[x(1), x(0), x(3)]), Err(ProjError::NonPositiveCoordinate(1)));
        assert_eq!(proj_config(&[x(1), x(1)]), Err(ProjError::DimensionTooSmall(2)));
    }

    #[test]
    fn cube_lattice_is_framed_by_vertices_and_center() {
        let (mut cfg, der) = q3_frame();
        assert_eq!(der.base.len(), 9);
        assert_eq!(der.program.named_steps().len(), 18);
        assert!(frame_replay(&cfg, &der).unwrap());
        let i = cfg.names.iter().position(|n| n == "(1,1,0)").unwrap();
        cfg.points[i][2] = FieldElem::frac(1, 7);
        assert!(!frame_replay(&cfg, &der).unwrap());
    }

    #[test]
    fn simplex_hull_membership() {
        let tri = vec![vec![x(0), x(0)], vec![x(2), x(0)], vec![x(0), x(2)]];
        assert!(in_convex_hull(&tri, &[x(1), x(1)]));
        assert!(in_convex_hull(&tri, &[x(0), x(0)]));
        assert!(!in_convex_hull(&tri, &[x(2), x(1)]));
        let sq = vec![
            vec![x(0), x(0)],
            vec![x(1), x(0)],
            vec![x(0), x(1)],
            vec![x(1), x(1)],
            vec![FieldElem::frac(1, 2), x(0)],
        ];
        assert_eq!(non_vertices(&sq), vec![4]);
    }

    #[test]
    fn lawrence_segment_and_triangle() {
        let seg =
            PPConfig { ambient_dim: 1, polytope_vertices: vec![vec![x(0)], vec![x(1)]], free_points: vec![vec![x(3)]] };
        let l = lawrence_extension(&seg).unwrap();
        assert_eq!((l.dim, l.vertices.len()), (2, 4));
        let tri = PPConfig {
            ambient_dim: 2,
            polytope_vertices: vec![vec![x(0), x(0)], vec![x(1), x(0)], vec![x(0), x(1)]],
            free_points: vec![vec![x(2), x(2)], vec![x(-1), x(3)]],
        };
        let l = lawrence_extension(&tri).unwrap();
        assert_eq!((l.dim, l.vertices.len()), (4, 7));
        assert_eq!((l.dim, l.vertices.len()), lawrence_counts(2, 3, 2));
        let inside = PPConfig { free_points: vec![vec![FieldElem::frac(1, 4), FieldElem::frac(1, 4)]], ..tri };
        assert_eq!(lawrence_extension(&inside), Err(ProjError::FreePointInPolytope(0)));
    }

    #[test]
    fn subdirect_cone_of_segment() {
        let t = WeakTriple {
            ambient_dim: 1,
            polytope_vertices: vec![vec![x(0)], vec![x(1)]],
            frame: vec![0, 1],
            free_points: vec![vec![x(3)], vec![x(5)]],
        };
        let sc = subdirect_cone(&t, &[0], None).unwrap();
        assert_eq!(sc.cone.polytope_vertices.len(), 3);
        assert!(non_vertices(&sc.cone.polytope_vertices).is_empty());
        let l = lawrence_extension(&sc.cone).unwrap();
        assert_eq!((l.dim, l.vertices.len()), weak_triple_counts(1, 2, 2, 2));
        let meets = WeakTriple { free_points: vec![vec![FieldElem::frac(1, 2)]], ..t.clone() };
        assert_eq!(subdirect_cone(&meets, &[0], None).unwrap_err(), ProjError::WedgeMeetsPolytope);
        let below = Some(vec![FieldElem::frac(1, 2), x(-1)]);
        assert_eq!(subdirect_cone(&t, &[0], below).unwrap_err(), ProjError::SeparationFailure);
    }

    #[test]
    fn k_configuration_scripted_points() {
        let k = build_k_configuration().unwrap();
        assert_eq!(k.f0(), 64);
        assert_eq!(k.free_points().len(), 40);
        let s3 = FieldElem::sqrt3();
        let h = FieldElem::frac(1, 2);
        let expect = [
            ("b0", vec![x(0), x(0), x(0), x(0), x(1)]),
            ("b23", vec![x(0), x(0), x(1), x(0), x(1)]),
            ("b12", vec![x(0), x(0), -h.clone(), &h * &s3, x(1)]),
            ("ta1+", vec![x(1), x(0), x(2), x(0), x(1)]),
            ("ta2+", vec![x(1), x(0), x(-1), -s3.clone(), x(1)]),
            ("oa1-", vec![x(0), x(-1), x(-2), x(0), x(1)]),
            ("psi1+", theta1()),
            ("otpsi2-", vec![x(0), x(-1), h.clone(), &h * &s3, x(1)]),
            ("b12++", vec![h.clone(), h.clone(), -h.clone(), &h * &s3, x(1)]),
            ("tw1+-", theta0()),
        ];
        for (n, v) in expect {
            assert_eq!(k.config.get(n).unwrap(), &v, "{n}");
        }
        let l = FieldElem::q2(-1, 1, 1);
        assert_eq!(k.config.get("w2--").unwrap(), &pt([-l.clone(), -l.clone(), x(1), s3.clone()]));
        assert_eq!(k.config.get("tw3-+").unwrap(), &pt([-l.clone(), l, x(-1), s3]));
        assert_eq!(k.infinity_rank(), 4);
        assert!((1..=4).all(|i| k.config.get(&format!("inf{i}")).unwrap()[4].is_zero()));
    }

    #[test]
    fn k_configuration_contains_seed_torus() {
        let k = build_k_configuration().unwrap();
        let corr = k.torus_correspondence().unwrap();
        let mut idx: Vec<usize> = corr.iter().map(|c| c.1).collect();
        idx.sort_unstable();
        assert_eq!(idx, (0..24).collect::<Vec<_>>());
        assert!(frame_replay(&k.config, &k.derivation).unwrap());
    }

    #[test]
    fn step_six_fixes_the_scale() {
        assert!(step_six_certificate(&FieldElem::q2(-1, 1, 1)).coplanar());
        assert!(step_six_certificate(&FieldElem::q2(-1, -1, 1)).coplanar());
        assert!(!step_six_certificate(&FieldElem::frac(1, 2)).coplanar());
        // at λ = 1/2 the two transfer lines of the second square coincide
        assert!(matches!(build_k_configuration_with(&FieldElem::frac(1, 2)), Err(ProjError::DegenerateMeet { .. })));
        let k = build_k_configuration_with(&FieldElem::frac(1, 3)).unwrap();
        assert!(!k.certificate.coplanar());
        assert!(k.torus_correspondence().is_none());
    }

    #[test]
    fn pcctp_arithmetic() {
        for n in 1..=10 {
            assert_eq!(pcctp_counts(n), (69, 12 * (n + 1) + 129));
        }
    }

    #[test]
    fn gadget_equivariance() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let g = gadget_mul();
        let mut inputs = planar_base().points;
        inputs.push(on_axis(&x(3)));
        inputs.push(on_axis(&FieldElem::sqrt2()));
        for _ in 0..3 {
            let m = random_projective_map(&mut rng, 3);
            assert!(check_equivariance(&g, &inputs, &m).unwrap());
        }
    }
}
