//! Cross-bedding cubical tori: the abstract quotient complexes, symmetric
//! realizations in the upper hemisphere of S⁴, the explicit iteration, the
//! layer-by-layer extension and the exact predicates used to certify it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexcore::{Cube, CubicalComplex, Face};
use crate::exactfield::{
    dot, normalize_last, proportional, reflection, rotation_r12, rotation_r34, solve_nullspace, vec_add, vec_from_ints,
    vec_scale, FieldElem, FieldError, MatF, Vec5,
};

/// Vertices per layer.
pub const LAYER_SIZE: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CctError {
    #[error("degenerate iteration input: {0}")]
    Degenerate(String),
    #[error("point at infinity")]
    PointAtInfinity,
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("predicate failed: {0}")]
    PredicateFailure(String),
    #[error("symmetry violated: {0}")]
    SymmetryViolation(String),
    #[error("facet {0:?} is not coplanar")]
    NonCoplanarFacet(Face),
    #[error("facet {facet:?} not exposed, witness vertex {witness}")]
    ExposureFailure { facet: Face, witness: usize },
    #[error("projection undefined for this point")]
    UndefinedProjection,
    #[error("reconstruction and iteration disagree at layer {0}")]
    CrossCheckMismatch(usize),
    #[error("width {0} too small for this operation")]
    WidthTooSmall(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Translation (−1,1,0) of the cube tiling.
pub const SHIFT_E: [i64; 3] = [-1, 1, 0];
/// Translation (0,−1,1) of the cube tiling.
pub const SHIFT_F: [i64; 3] = [0, -1, 1];

/// Quotient id of a lattice point, `None` outside layers `0..=width`.
pub fn vertex_id(v: [i64; 3], width: usize) -> Option<usize> {
    let s = v[0] + v[1] + v[2];
    if s < 0 || s as usize > width {
        return None;
    }
    // v = (0,0,s) + a·E + b·F, reduced modulo ⟨3E, 2E + 4F⟩
    let a = -v[0];
    let b = v[2] - s;
    let b_red = b.rem_euclid(4);
    let q = (b - b_red) / 4;
    let a_red = (a - 2 * q).rem_euclid(3);
    Some(LAYER_SIZE * s as usize + 4 * a_red as usize + b_red as usize)
}

/// Canonical lattice representative of a quotient id.
pub fn representative(id: usize) -> [i64; 3] {
    let s = (id / LAYER_SIZE) as i64;
    let a = ((id % LAYER_SIZE) / 4) as i64;
    let b = (id % 4) as i64;
    [-a, a - b, s + b]
}

fn shift(v: [i64; 3], d: [i64; 3]) -> [i64; 3] {
    [v[0] + d[0], v[1] + d[1], v[2] + d[2]]
}

fn unit(i: usize) -> [i64; 3] {
    let mut e = [0; 3];
    e[i] = 1;
    e
}

/// Abstract width-k torus 𝔗[k].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractCCT {
    pub width: usize,
    pub layers: Vec<usize>,
    pub complex: CubicalComplex,
}

pub fn abstract_cct(k: usize) -> AbstractCCT {
    let n = LAYER_SIZE * (k + 1);
    let mut cubes = Vec::new();
    for id in 0..n {
        let v = representative(id);
        let s = id / LAYER_SIZE;
        cubes.push(Cube { dim: 0, corners: vec![id] });
        for dim in 1..=3usize {
            if s + dim > k {
                break;
            }
            let dirs: Vec<Vec<usize>> = match dim {
                1 => vec![vec![0], vec![1], vec![2]],
                2 => vec![vec![0, 1], vec![0, 2], vec![1, 2]],
                _ => vec![vec![0, 1, 2]],
            };
            for d in dirs {
                let corners = (0..1usize << dim)
                    .map(|mask| {
                        let mut w = v;
                        for (bit, &axis) in d.iter().enumerate() {
                            if mask >> bit & 1 == 1 {
                                w = shift(w, unit(axis));
                            }
                        }
                        vertex_id(w, k).expect("corner within width")
                    })
                    .collect();
                cubes.push(Cube { dim, corners });
            }
        }
    }
    let complex = CubicalComplex::new(n, cubes).expect("valid cubes");
    AbstractCCT { width: k, layers: (0..n).map(|i| i / LAYER_SIZE).collect(), complex }
}

impl AbstractCCT {
    pub fn num_vertices(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, l: usize) -> std::ops::Range<usize> {
        l * LAYER_SIZE..(l + 1) * LAYER_SIZE
    }

    pub fn id(&self, v: [i64; 3]) -> Option<usize> {
        vertex_id(v, self.width)
    }

    pub fn up_neighbor(&self, id: usize, axis: usize) -> Option<usize> {
        self.id(shift(representative(id), unit(axis)))
    }

    /// Image under the x ↔ y swap.
    pub fn swap(&self, id: usize) -> usize {
        let v = representative(id);
        self.id([v[1], v[0], v[2]]).expect("swap keeps layer")
    }

    pub fn translate(&self, id: usize, d: [i64; 3]) -> usize {
        self.id(shift(representative(id), d)).expect("translation keeps layer")
    }

    /// 3-cubes by bit-ordered corners.
    pub fn three_cubes(&self) -> Vec<Cube> {
        self.complex.cubes.iter().filter(|c| c.dim == 3).cloned().collect()
    }
}

/// Closed-form f-vector of 𝔗[k].
pub fn f_vector_formula(k: usize) -> Vec<usize> {
    match k {
        0 => vec![12, 0, 0, 0],
        1 => vec![24, 36, 0, 0],
        _ => vec![12 * (k + 1), 36 * k, 36 * (k - 1), 12 * (k - 2)],
    }
}

/// Symmetry generators: images of E, F and the x ↔ y swap.
pub fn gen_e() -> MatF {
    rotation_r34().pow(4)
}

pub fn gen_f() -> MatF {
    rotation_r12().mul(&rotation_r34())
}

pub fn gen_swap() -> MatF {
    reflection(3)
}

/// The twelve rotations generated by r₃₄² and r₃₄r₁₂.
pub fn rotation_group() -> Vec<MatF> {
    let (e, f) = (gen_e(), gen_f());
    let mut out = Vec::new();
    for a in 0..3 {
        for b in 0..4 {
            out.push(e.pow(a).mul(&f.pow(b)));
        }
    }
    out
}

/// Orbit of a point, indexed like the vertices of a layer.
pub fn layer_orbit(base: &[FieldElem]) -> Vec<Vec5> {
    let (e, f) = (gen_e(), gen_f());
    (0..LAYER_SIZE)
        .map(|i| {
            let (a, b) = ((i / 4) as u32, (i % 4) as u32);
            e.pow(a).mul(&f.pow(b)).apply(base)
        })
        .collect()
}

pub fn theta0() -> Vec5 {
    vec![FieldElem::q2(-1, 1, 1), FieldElem::q2(1, -1, 1), FieldElem::int(2), FieldElem::zero(), FieldElem::one()]
}

pub fn theta1() -> Vec5 {
    vec_from_ints(&[1, 0, 1, 0, 1])
}

/// Coefficient of the explicit iteration.
pub fn mu(a: &[FieldElem], b: &[FieldElem]) -> Result<FieldElem, CctError> {
    let (a1, a2, a3) = (&a[0], &a[1], &a[2]);
    let (b1, b2, b3) = (&b[0], &b[1], &b[2]);
    if b3.is_zero() {
        return Err(CctError::Degenerate("third coordinate of b vanishes".into()));
    }
    let two = FieldElem::int(2);
    let three = FieldElem::int(3);
    let ab = a3 * b3;
    let bb = b3 * b3;
    let aa = a3 * a3;
    let num = &(&(&(&ab - &(&two * &bb)) * b2) + &(&(&ab - &bb) * b1)) - &(a2 * &bb);
    let den = &(&(&(&two * &(&ab - &bb)) * a1) - &(&(&(&two * &ab) - &bb) * a2))
        - &(&(&(&(&(&two * &aa) - &(&three * &ab)) + &bb) * b1)
            + &(&(&(&(&two * &aa) - &(&three * &ab)) + &(&two * &bb)) * b2));
    if den.is_zero() {
        return Err(CctError::Degenerate("denominator vanishes".into()));
    }
    Ok(num.checked_div(&den)?)
}

/// Layer-two vertex of the elementary extension spanned by `a` and `b`.
pub fn iterate(a: &[FieldElem], b: &[FieldElem]) -> Result<Vec5, CctError> {
    let m = mu(a, b)?;
    let r12 = rotation_r12();
    let r34 = rotation_r34();
    let plus = r12.mul(&r34).apply(b);
    let minus = r12.mul(&r34.pow(5)).apply(b);
    let mid = vec_scale(&vec_add(&plus, &minus), &FieldElem::frac(1, 2));
    let out = vec_add(&vec_scale(a, &m), &vec_scale(&mid, &(&FieldElem::one() - &m)));
    if out[4].is_zero() {
        return Err(CctError::PointAtInfinity);
    }
    Ok(normalize_last(&out)?)
}

/// κ₀ … κ_upto of the iteration chain.
pub fn kappa_chain(upto: usize) -> Result<Vec<Vec5>, CctError> {
    let r = rotation_r12().pow(2);
    let mut out = vec![theta0(), r.apply(&theta1())];
    while out.len() <= upto {
        let k = out.len();
        let next = r.apply(&iterate(&out[k - 2], &out[k - 1])?);
        out.push(next);
    }
    out.truncate(upto + 1);
    Ok(out)
}

/// λ with p(y) on the Clifford torus C_λ, exactly.
pub fn clifford_lambda_exact(p: &[FieldElem]) -> Result<FieldElem, CctError> {
    let low = &p[0].square() + &p[1].square();
    let high = &p[2].square() + &p[3].square();
    let total = &low + &high;
    if total.is_zero() {
        return Err(CctError::UndefinedProjection);
    }
    Ok((&FieldElem::int(2) * &high).checked_div(&total)?)
}

pub fn clifford_lambda(p: &[FieldElem]) -> Result<f64, CctError> {
    Ok(clifford_lambda_exact(p)?.to_f64())
}

/// Geometric width-k torus with exact homogeneous vertex coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoCCT {
    pub abstract_cct: AbstractCCT,
    pub coords: Vec<Vec5>,
    /// Iteration chain κ₀ … κ_width, one point per layer.
    pub chain: Vec<Vec5>,
}

fn squares_planar(t: &AbstractCCT, coords: &[Vec5]) -> bool {
    t.complex.faces().values().filter(|c| c.dim == 2).all(|c| {
        let rows: Vec<Vec5> = c.corners.iter().map(|&i| coords[i].clone()).collect();
        MatF::from_rows(&rows).rank() == 3
    })
}

pub fn seed_ct1() -> GeoCCT {
    let mut coords = layer_orbit(&theta0());
    coords.extend(layer_orbit(&theta1()));
    GeoCCT { abstract_cct: abstract_cct(1), coords, chain: kappa_chain(1).expect("seed chain") }
}

pub fn seed_ct3() -> Result<GeoCCT, CctError> {
    extend(&extend(&seed_ct1())?)
}

/// Symmetric torus of width n built from the seed by repeated extension.
pub fn ct_symmetric(n: usize) -> Result<GeoCCT, CctError> {
    let mut t = seed_ct1();
    while t.abstract_cct.width < n {
        t = extend(&t)?;
    }
    Ok(t)
}

/// Missing top vertex of a 3-cube from its three quads at that vertex.
pub fn reconstruct_top(known: &[Vec5; 7]) -> Result<Vec5, CctError> {
    // known: v+e1, v+e2, v+e3, v+e1+e2, v+e1+e3, v+e2+e3, v
    let quads = [[0, 3, 4], [1, 3, 5], [2, 4, 5]];
    let mut eqs = Vec::new();
    for q in quads {
        let rows: Vec<Vec5> = q.iter().map(|&i| known[i].clone()).collect();
        let ns = solve_nullspace(&MatF::from_rows(&rows));
        if ns.len() != 2 {
            return Err(CctError::DegenerateGeometry("quad vertices not independent".into()));
        }
        eqs.extend(ns);
    }
    let sol = solve_nullspace(&MatF::from_rows(&eqs));
    if sol.len() != 1 {
        return Err(CctError::DegenerateGeometry(format!("quad spans meet in dimension {}", sol.len())));
    }
    if sol[0][4].is_zero() {
        return Err(CctError::PointAtInfinity);
    }
    Ok(normalize_last(&sol[0])?)
}

/// Elementary extension by one layer.
pub fn extend(t: &GeoCCT) -> Result<GeoCCT, CctError> {
    let k = t.abstract_cct.width;
    let next = abstract_cct(k + 1);
    let r2 = rotation_r12().pow(2);
    let formula = r2.apply(&iterate(&t.chain[k - 1], &t.chain[k])?);
    let mut coords = t.coords.clone();
    if k == 1 {
        // no cubes yet: place the orbit so that every square is planar
        let mut found = None;
        for g in rotation_group() {
            let base = g.apply(&formula);
            if !base[3].is_zero() {
                continue;
            }
            let mut trial = coords.clone();
            trial.extend(layer_orbit(&base));
            if squares_planar(&next, &trial) {
                if found.is_some() {
                    return Err(CctError::DegenerateGeometry("ambiguous seed placement".into()));
                }
                found = Some(trial);
            }
        }
        coords = found.ok_or_else(|| CctError::DegenerateGeometry("no planar seed placement".into()))?;
    } else {
        if k >= 3 {
            let cert = ideal_report(t)?;
            if !cert.ideal() {
                return Err(CctError::PredicateFailure(format!("width {k} torus is not ideal: {cert:?}")));
            }
        }
        for id in next.layer(k + 1) {
            let top = representative(id);
            let v = shift(top, [-1, -1, -1]);
            let at = |d: [i64; 3]| -> Vec5 { t.coords[vertex_id(shift(v, d), k).unwrap()].clone() };
            let known = [
                at([1, 0, 0]),
                at([0, 1, 0]),
                at([0, 0, 1]),
                at([1, 1, 0]),
                at([1, 0, 1]),
                at([0, 1, 1]),
                at([0, 0, 0]),
            ];
            coords.push(reconstruct_top(&known)?);
        }
        let layer = &coords[next.layer(k + 1)];
        if !layer.contains(&formula) {
            return Err(CctError::CrossCheckMismatch(k + 1));
        }
    }
    let mut chain = t.chain.clone();
    chain.push(formula);
    let out = GeoCCT { abstract_cct: next, coords, chain };
    check_symmetry(&out)?;
    for c in out.abstract_cct.three_cubes() {
        if c.corners.iter().any(|&i| out.abstract_cct.layers[i] == k + 1) {
            cube_normal(&out, &c)?;
        }
    }
    Ok(out)
}

impl GeoCCT {
    pub fn width(&self) -> usize {
        self.abstract_cct.width
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len()
    }

    /// Image under s^{e₄}, relabelled through the x ↔ y swap.
    pub fn mirrored(&self) -> GeoCCT {
        let s = gen_swap();
        let coords = (0..self.coords.len()).map(|i| s.apply(&self.coords[self.abstract_cct.swap(i)])).collect();
        GeoCCT { abstract_cct: self.abstract_cct.clone(), coords, chain: self.chain.clone() }
    }

    /// Sub-torus on layers `lo..=hi`, relabelled to start at layer 0.
    pub fn window(&self, lo: usize, hi: usize) -> GeoCCT {
        let coords = self.coords[lo * LAYER_SIZE..(hi + 1) * LAYER_SIZE].to_vec();
        GeoCCT { abstract_cct: abstract_cct(hi - lo), coords, chain: self.chain[lo..=hi].to_vec() }
    }
}

/// The three relations of a symmetric torus as exact identities.
pub fn check_symmetry(t: &GeoCCT) -> Result<(), CctError> {
    let a = &t.abstract_cct;
    let (e, f, s) = (gen_e(), gen_f(), gen_swap());
    for id in 0..a.num_vertices() {
        let p = &t.coords[id];
        if t.coords[a.translate(id, SHIFT_E)] != e.apply(p) {
            return Err(CctError::SymmetryViolation(format!("translation (-1,1,0) at vertex {id}")));
        }
        if t.coords[a.translate(id, SHIFT_F)] != f.apply(p) {
            return Err(CctError::SymmetryViolation(format!("translation (0,-1,1) at vertex {id}")));
        }
        if t.coords[a.swap(id)] != s.apply(p) {
            return Err(CctError::SymmetryViolation(format!("reflection at vertex {id}")));
        }
    }
    Ok(())
}

/// No vertex on sp{e₁,e₂,e₅} or sp{e₃,e₄,e₅}.
pub fn check_fixed_point_free(t: &GeoCCT) -> bool {
    t.coords.iter().all(|p| !(p[0].is_zero() && p[1].is_zero()) && !(p[2].is_zero() && p[3].is_zero()))
}

type Dir = [FieldElem; 2];

fn cross2(u: &Dir, v: &Dir) -> FieldElem {
    &(&u[0] * &v[1]) - &(&u[1] * &v[0])
}

fn dot2(u: &Dir, v: &Dir) -> FieldElem {
    &(&u[0] * &v[0]) + &(&u[1] * &v[1])
}

fn low(p: &[FieldElem]) -> Dir {
    [p[0].clone(), p[1].clone()]
}

fn high(p: &[FieldElem]) -> Dir {
    [p[2].clone(), p[3].clone()]
}

fn same_dir(u: &Dir, v: &Dir) -> bool {
    cross2(u, v).is_zero() && dot2(u, v).sign() > 0
}

/// `x` strictly inside the shorter arc between directions `a` and `b`.
fn in_open_arc(x: &Dir, a: &Dir, b: &Dir) -> bool {
    let ab = cross2(a, b).sign();
    ab != 0 && cross2(a, x).sign() == ab && cross2(x, b).sign() == ab
}

/// Whether the origin lies in the convex hull of planar points.
fn origin_in_hull(pts: &[Dir]) -> bool {
    let zero = |p: &Dir| p[0].is_zero() && p[1].is_zero();
    if pts.iter().any(zero) {
        return true;
    }
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            let c = cross2(&pts[i], &pts[j]);
            if c.is_zero() && dot2(&pts[i], &pts[j]).sign() < 0 {
                return true;
            }
            for k in j + 1..n {
                let s1 = cross2(&pts[i], &pts[j]).sign();
                let s2 = cross2(&pts[j], &pts[k]).sign();
                let s3 = cross2(&pts[k], &pts[i]).sign();
                if s1 != 0 && s1 == s2 && s2 == s3 {
                    return true;
                }
            }
        }
    }
    false
}

/// Labelled star of a degree-three vertex for the injectivity criterion.
struct Corner {
    v: Vec5,
    u: Vec5,
    q: Vec5,
    r: Vec5,
    t: Vec5,
    s: Vec5,
    p: Vec5,
}

fn corner_criterion(c: &Corner) -> bool {
    let h = |p: &Vec5| high(p);
    let l = |p: &Vec5| low(p);
    let aligned = same_dir(&h(&c.s), &h(&c.r))
        && same_dir(&h(&c.p), &h(&c.v))
        && same_dir(&h(&c.v), &h(&c.u))
        && same_dir(&h(&c.t), &h(&c.q))
        && same_dir(&l(&c.t), &l(&c.s))
        && same_dir(&l(&c.q), &l(&c.r));
    if !aligned {
        return false;
    }
    let ordered = in_open_arc(&h(&c.p), &h(&c.s), &h(&c.t))
        && in_open_arc(&l(&c.v), &l(&c.u), &l(&c.p))
        && in_open_arc(&l(&c.r), &l(&c.u), &l(&c.p))
        && in_open_arc(&l(&c.s), &l(&c.u), &l(&c.r));
    if !ordered {
        return false;
    }
    let quads = [[&c.u, &c.t, &c.v, &c.q], [&c.u, &c.s, &c.v, &c.r], [&c.p, &c.q, &c.v, &c.r]];
    quads.iter().all(|q| {
        let lows: Vec<Dir> = q.iter().map(|p| low(p)).collect();
        let highs: Vec<Dir> = q.iter().map(|p| high(p)).collect();
        !origin_in_hull(&lows) && !origin_in_hull(&highs)
    })
}

/// Positive multiple of a nonzero direction with first nonzero entry ±1.
fn ray(d: &Dir) -> Dir {
    match d.iter().find(|x| !x.is_zero()) {
        Some(x) => {
            let inv = x.abs().inv().expect("nonzero");
            [&d[0] * &inv, &d[1] * &inv]
        }
        None => d.clone(),
    }
}

/// Injectivity criterion at one corner, trying every labelling of its star.
fn corner_transversal(t: &GeoCCT, id: usize) -> bool {
    let a = &t.abstract_cct;
    let v = representative(id);
    let at = |d: [i64; 3]| t.coords[a.id(shift(v, d)).unwrap()].clone();
    for ui in 0..3 {
        for qi in 0..3 {
            if qi == ui {
                continue;
            }
            let ri = 3 - ui - qi;
            let (eu, eq, er) = (unit(ui), unit(qi), unit(ri));
            let c = Corner {
                v: at([0, 0, 0]),
                u: at(eu),
                q: at(eq),
                r: at(er),
                t: at(shift(eu, eq)),
                s: at(shift(eu, er)),
                p: at(shift(eq, er)),
            };
            if corner_criterion(&c) {
                return true;
            }
        }
    }
    false
}

/// Transversality of every three-layer window via the corner criterion,
/// together with injectivity of the Clifford projection on vertices.
pub fn check_transversal(t: &GeoCCT) -> Result<bool, CctError> {
    check_symmetry(t)?;
    let k = t.width();
    if k < 2 {
        return Ok(true);
    }
    for i in 1..k {
        let lo = i - 1;
        for id in t.abstract_cct.layer(lo) {
            if !corner_transversal(t, id) {
                return Ok(false);
            }
        }
        let mut seen = std::collections::HashSet::new();
        for id in lo * LAYER_SIZE..(i + 2) * LAYER_SIZE {
            let p = &t.coords[id];
            if !seen.insert((ray(&low(p)), ray(&high(p)))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact sign of cos α for the slope at the last layer (negative = obtuse),
/// with the float angle for reporting.
pub fn slope_sign(t: &GeoCCT) -> Result<(i32, f64), CctError> {
    check_symmetry(t)?;
    let k = t.width();
    if k < 2 {
        return Err(CctError::WidthTooSmall(k));
    }
    let a = &t.abstract_cct;
    let graph = a.complex.graph();
    let mut sign = None;
    let mut angle = 0.0;
    for s_id in a.layer(k) {
        let t_id = a.translate(s_id, [1, -1, 0]);
        let u_id = graph[s_id]
            .iter()
            .copied()
            .find(|&w| a.layers[w] == k - 1 && graph[t_id].contains(&w))
            .ok_or_else(|| CctError::DegenerateGeometry("no common lower neighbour".into()))?;
        let proj = |i: usize| -> Vec<FieldElem> { t.coords[i][..4].to_vec() };
        let m = vec_add(&proj(s_id), &proj(t_id));
        let toward = vec![m[0].clone(), m[1].clone(), FieldElem::zero(), FieldElem::zero()];
        let u = proj(u_id);
        let mm = dot(&m, &m);
        let val = &(&dot(&toward, &u) * &mm) - &(&dot(&toward, &m) * &dot(&u, &m));
        let sg = val.sign();
        if *sign.get_or_insert(sg) != sg {
            return Err(CctError::SymmetryViolation("slope differs between vertices".into()));
        }
        // float angle between the tangent directions at m
        let mf: Vec<f64> = m.iter().map(FieldElem::to_f64).collect();
        let mn = mf.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mh: Vec<f64> = mf.iter().map(|x| x / mn).collect();
        let tangent = |x: Vec<f64>| -> Vec<f64> {
            let d: f64 = x.iter().zip(&mh).map(|(a, b)| a * b).sum();
            x.iter().zip(&mh).map(|(a, b)| a - d * b).collect()
        };
        let ta = tangent(toward.iter().map(FieldElem::to_f64).collect());
        let tb = tangent(u.iter().map(FieldElem::to_f64).collect());
        let norm = |x: &[f64]| x.iter().map(|y| y * y).sum::<f64>().sqrt();
        let c: f64 = ta.iter().zip(&tb).map(|(a, b)| a * b).sum::<f64>() / (norm(&ta) * norm(&tb));
        angle = c.clamp(-1.0, 1.0).acos();
    }
    Ok((sign.unwrap_or(0), angle))
}

pub fn check_slope_obtuse(t: &GeoCCT) -> Result<bool, CctError> {
    Ok(slope_sign(t)?.0 < 0)
}

/// The last layer faces C₀: every last-layer vertex lies strictly closer to
/// C₀ (smaller λ) than each of its neighbours in the previous layer.
pub fn check_oriented(t: &GeoCCT) -> Result<bool, CctError> {
    check_symmetry(t)?;
    let k = t.width();
    if k < 1 {
        return Err(CctError::WidthTooSmall(k));
    }
    let a = &t.abstract_cct;
    let graph = a.complex.graph();
    for x in a.layer(k) {
        let lx = clifford_lambda_exact(&t.coords[x])?;
        for &w in &graph[x] {
            if a.layers[w] == k - 1 && clifford_lambda_exact(&t.coords[w])? <= lx {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Results of the ideal-torus predicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealReport {
    pub symmetric: bool,
    pub fixed_point_free: bool,
    pub transversal: bool,
    pub slope_obtuse: bool,
    pub oriented: bool,
}

impl IdealReport {
    pub fn ideal(&self) -> bool {
        self.symmetric && self.fixed_point_free && self.transversal && self.slope_obtuse && self.oriented
    }
}

pub fn ideal_report(t: &GeoCCT) -> Result<IdealReport, CctError> {
    let symmetric = check_symmetry(t).is_ok();
    if !symmetric {
        return Ok(IdealReport {
            symmetric,
            fixed_point_free: check_fixed_point_free(t),
            transversal: false,
            slope_obtuse: false,
            oriented: false,
        });
    }
    let last = t.window(t.width().saturating_sub(2), t.width());
    Ok(IdealReport {
        symmetric,
        fixed_point_free: check_fixed_point_free(t),
        transversal: check_transversal(t)?,
        slope_obtuse: t.width() >= 2 && check_slope_obtuse(&last)?,
        oriented: check_oriented(t)?,
    })
}

/// Exposing normal of one 3-cube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetCertificate {
    pub facet: Face,
    pub normal: Vec5,
}

/// Normal of the hyperplane through a cube's corners, unoriented.
pub fn cube_normal(t: &GeoCCT, c: &Cube) -> Result<Vec5, CctError> {
    let rows: Vec<Vec5> = c.corners.iter().map(|&i| t.coords[i].clone()).collect();
    let ns = solve_nullspace(&MatF::from_rows(&rows));
    if ns.len() != 1 {
        return Err(CctError::NonCoplanarFacet(c.key()));
    }
    Ok(ns.into_iter().next().unwrap())
}

/// Global convex-position certificate: each 3-cube with a normal giving
/// every other vertex a strictly negative value.
pub fn check_convex_position(t: &GeoCCT) -> Result<Vec<FacetCertificate>, CctError> {
    if t.width() < 3 {
        return Err(CctError::WidthTooSmall(t.width()));
    }
    let mut out = Vec::new();
    for c in t.abstract_cct.three_cubes() {
        let mut n = cube_normal(t, &c)?;
        let key = c.key();
        let others: Vec<usize> = (0..t.num_vertices()).filter(|i| !key.contains(i)).collect();
        let first = others.first().copied().ok_or(CctError::WidthTooSmall(t.width()))?;
        if dot(&n, &t.coords[first]).sign() > 0 {
            n = vec_scale(&n, &FieldElem::int(-1));
        }
        for &w in &others {
            if dot(&n, &t.coords[w]).sign() >= 0 {
                return Err(CctError::ExposureFailure { facet: key, witness: w });
            }
        }
        out.push(FacetCertificate { facet: key, normal: n });
    }
    Ok(out)
}

/// Facet normal of the cube containing the first seed vertex.
pub fn seed_facet_normal() -> Vec5 {
    vec![
        FieldElem::q2(7, 5, 1),
        FieldElem::q2(-8, -5, 1),
        FieldElem::int(2),
        FieldElem::zero(),
        FieldElem::q2(-9, -5, 1),
    ]
}

pub fn normal_matches(n: &[FieldElem], expected: &[FieldElem]) -> bool {
    proportional(n, expected)
}

/// Vertex data and certificate of the 4-polytope conv CT^s[n].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CctpReport {
    pub n: usize,
    pub f0: usize,
    pub vertices: Vec<Vec5>,
    pub layers: Vec<usize>,
    pub ideal: Option<IdealReport>,
    pub certificate: Vec<FacetCertificate>,
    /// Four coordinates for each vertex of the width-1 seed.
    pub realization_space_bound: usize,
}

pub fn cctp(n: usize) -> Result<CctpReport, CctError> {
    if n == 0 {
        return Err(CctError::WidthTooSmall(0));
    }
    let t = ct_symmetric(n)?;
    let certificate = if n >= 3 { check_convex_position(&t)? } else { Vec::new() };
    let ideal = if n >= 2 { Some(ideal_report(&t)?) } else { None };
    Ok(CctpReport {
        n,
        f0: t.num_vertices(),
        vertices: t.coords.clone(),
        layers: t.abstract_cct.layers.clone(),
        ideal,
        certificate,
        realization_space_bound: 4 * 2 * LAYER_SIZE,
    })
}
