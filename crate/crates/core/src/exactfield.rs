//! Exact arithmetic over the rationals and the biquadratic field Q(√2, √3).
//!
//! Every coordinate used by the geometric modules is a [`FieldElem`]
//! `a + b·√2 + c·√3 + d·√6` with rational `a, b, c, d`. Signs are decided
//! exactly by repeated squaring against conjugates, so no predicate ever
//! depends on floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Builds `p/q` as a [`Rat`]. Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Formats a rational as `"p/q"` (denominator always present).
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a plain integer `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat, FieldError> {
    let bad = || FieldError::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

pub fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn rsign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of `a + b√2`.
fn sign_sqrt2(a: &Rat, b: &Rat) -> i32 {
    let sa = rsign(a);
    let sb = rsign(b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // a and b√2 have opposite signs: the larger square wins.
    let norm = a * a - rat_int(2) * b * b;
    sa * rsign(&norm)
}

/// Element `a + b√2 + c√3 + d√6` of Q(√2, √3).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElem {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl FieldElem {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        FieldElem { a, b, c, d }
    }

    pub fn zero() -> Self {
        FieldElem::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        FieldElem::from_rat(Rat::one())
    }

    pub fn from_rat(a: Rat) -> Self {
        FieldElem { a, b: Rat::zero(), c: Rat::zero(), d: Rat::zero() }
    }

    pub fn int(n: i64) -> Self {
        FieldElem::from_rat(rat_int(n))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        FieldElem::from_rat(rat(p, q))
    }

    pub fn sqrt2() -> Self {
        FieldElem::new(Rat::zero(), Rat::one(), Rat::zero(), Rat::zero())
    }

    pub fn sqrt3() -> Self {
        FieldElem::new(Rat::zero(), Rat::zero(), Rat::one(), Rat::zero())
    }

    pub fn sqrt6() -> Self {
        FieldElem::new(Rat::zero(), Rat::zero(), Rat::zero(), Rat::one())
    }

    /// `a + b√2` with small integer parts over a common denominator.
    pub fn q2(a: i64, b: i64, den: i64) -> Self {
        FieldElem::new(rat(a, den), rat(b, den), Rat::zero(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the element lies in Q(√2), i.e. carries no √3 or √6 part.
    pub fn in_q_sqrt2(&self) -> bool {
        self.c.is_zero() && self.d.is_zero()
    }

    /// Exact sign of the real number represented.
    pub fn sign(&self) -> i32 {
        // x = p + q√3 with p = a + b√2, q = c + d√2
        let sp = sign_sqrt2(&self.a, &self.b);
        let sq = sign_sqrt2(&self.c, &self.d);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // p² − 3q² in Q(√2)
        let two = rat_int(2);
        let three = rat_int(3);
        let pa = &self.a * &self.a + &two * &self.b * &self.b;
        let pb = &two * &self.a * &self.b;
        let qa = &self.c * &self.c + &two * &self.d * &self.d;
        let qb = &two * &self.c * &self.d;
        sp * sign_sqrt2(&(pa - &three * qa), &(pb - &three * qb))
    }

    /// Conjugate under √3 ↦ −√3.
    fn conj3(&self) -> Self {
        FieldElem::new(self.a.clone(), self.b.clone(), -self.c.clone(), -self.d.clone())
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let c3 = self.conj3();
        let n = self * &c3; // lies in Q(√2)
        let norm2 = &n.a * &n.a - rat_int(2) * &n.b * &n.b;
        let c2 = FieldElem::new(n.a.clone() / &norm2, -n.b.clone() / &norm2, Rat::zero(), Rat::zero());
        Ok(&c3 * &c2)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let s2 = std::f64::consts::SQRT_2;
        let s3 = 3f64.sqrt();
        let s6 = 6f64.sqrt();
        rat_f64(&self.a) + rat_f64(&self.b) * s2 + rat_f64(&self.c) * s3 + rat_f64(&self.d) * s6
    }

    pub fn scale(&self, r: &Rat) -> Self {
        FieldElem::new(&self.a * r, &self.b * r, &self.c * r, &self.d * r)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [(&self.a, ""), (&self.b, "√2"), (&self.c, "√3"), (&self.d, "√6")];
        let mut wrote = false;
        for (r, unit) in parts {
            if r.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(if r.is_negative() { " - " } else { " + " })?;
            } else if r.is_negative() {
                f.write_str("-")?;
            }
            let m = r.abs();
            if unit.is_empty() || !m.is_one() {
                write!(f, "{}", m)?;
            }
            f.write_str(unit)?;
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl FromStr for FieldElem {
    type Err = FieldError;

    /// Accepts a rational, or the tokens `sqrt2`, `sqrt3`, `sqrt6`, optionally
    /// as sums like `1+sqrt2` or `-1/2+sqrt3`; `√` may stand for `sqrt`.
    fn from_str(s: &str) -> Result<Self, FieldError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('√', "sqrt");
        if t.is_empty() {
            return Err(FieldError::BadRational(s.to_string()));
        }
        let mut acc = FieldElem::zero();
        let mut term = String::new();
        let flush = |term: &str, acc: &mut FieldElem| -> Result<(), FieldError> {
            if term.is_empty() {
                return Ok(());
            }
            let (neg, body) = match term.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, unit) = match body.find("sqrt") {
                Some(i) => {
                    let c = body[..i].trim_end_matches('*');
                    (if c.is_empty() { "1" } else { c }, &body[i..])
                }
                None => (body, ""),
            };
            let mut r = parse_rat(coef)?;
            if neg {
                r = -r;
            }
            let unit_elem = match unit {
                "" => FieldElem::one(),
                "sqrt2" | "sqrt(2)" => FieldElem::sqrt2(),
                "sqrt3" | "sqrt(3)" => FieldElem::sqrt3(),
                "sqrt6" | "sqrt(6)" => FieldElem::sqrt6(),
                _ => return Err(FieldError::BadRational(term.to_string())),
            };
            *acc = &*acc + &unit_elem.scale(&r);
            Ok(())
        };
        for (i, ch) in t.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !t[..i].ends_with('/') {
                flush(&term, &mut acc)?;
                term.clear();
            }
            term.push(ch);
        }
        flush(&term, &mut acc)?;
        Ok(acc)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    a: String,
    b: String,
    c: String,
    d: String,
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldRepr {
            a: rat_to_string(&self.a),
            b: rat_to_string(&self.b),
            c: rat_to_string(&self.c),
            d: rat_to_string(&self.d),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Either the four-component form, a textual form like "1+sqrt2", or an integer.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Input {
            Parts(FieldRepr),
            Text(String),
            Int(i64),
        }
        match Input::deserialize(d)? {
            Input::Parts(r) => {
                let p = |s: &str| parse_rat(s).map_err(D::Error::custom);
                Ok(FieldElem::new(p(&r.a)?, p(&r.b)?, p(&r.c)?, p(&r.d)?))
            }
            Input::Text(t) => t.parse().map_err(D::Error::custom),
            Input::Int(n) => Ok(FieldElem::int(n)),
        }
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        let two = rat_int(2);
        let three = rat_int(3);
        let six = rat_int(6);
        let a = a1 * a2 + &two * b1 * b2 + &three * c1 * c2 + &six * d1 * d2;
        let b = a1 * b2 + b1 * a2 + &three * (c1 * d2 + d1 * c2);
        let c = a1 * c2 + c1 * a2 + &two * (b1 * d2 + d1 * b2);
        let d = a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2;
        FieldElem::new(a, b, c, d)
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    /// Panics on division by zero; use [`FieldElem::checked_div`] otherwise.
    fn div(self, o: &FieldElem) -> FieldElem {
        self.checked_div(o).expect("division by zero in FieldElem")
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: FieldElem) -> FieldElem {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: &FieldElem) -> FieldElem {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $m(self, o: FieldElem) -> FieldElem {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, o: &FieldElem) {
        self.a += &o.a;
        self.b += &o.b;
        self.c += &o.c;
        self.d += &o.d;
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, o: &FieldElem) {
        self.a -= &o.a;
        self.b -= &o.b;
        self.c -= &o.c;
        self.d -= &o.d;
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::int(n)
    }
}

impl From<Rat> for FieldElem {
    fn from(r: Rat) -> Self {
        FieldElem::from_rat(r)
    }
}

/// Returns the sign of `x` as −1, 0 or +1.
pub fn field_sign(x: &FieldElem) -> i32 {
    x.sign()
}

/// A vector over the field. Points of S⁴₊ are length-5 vectors in homogeneous
/// coordinates with last entry 1.
pub type VecF = Vec<FieldElem>;
pub type Vec5 = VecF;

pub fn vec_from_ints(v: &[i64]) -> VecF {
    v.iter().map(|&x| FieldElem::int(x)).collect()
}

pub fn dot(u: &[FieldElem], v: &[FieldElem]) -> FieldElem {
    let mut acc = FieldElem::zero();
    for (x, y) in u.iter().zip(v) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc += &(x * y);
    }
    acc
}

pub fn vec_add(u: &[FieldElem], v: &[FieldElem]) -> VecF {
    u.iter().zip(v).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(u: &[FieldElem], v: &[FieldElem]) -> VecF {
    u.iter().zip(v).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(u: &[FieldElem], s: &FieldElem) -> VecF {
    u.iter().map(|x| x * s).collect()
}

pub fn is_zero_vec(u: &[FieldElem]) -> bool {
    u.iter().all(FieldElem::is_zero)
}

/// Rescales so the last coordinate is 1. Fails for points at infinity.
pub fn normalize_last(u: &[FieldElem]) -> Result<VecF, FieldError> {
    let last = u.last().ok_or(FieldError::Dimension { expected: 1, got: 0 })?;
    let inv = last.inv()?;
    Ok(vec_scale(u, &inv))
}

/// Projective normal form: last coordinate 1 when nonzero, otherwise the
/// first nonzero coordinate is made 1.
pub fn projective_normal(u: &[FieldElem]) -> VecF {
    if let Some(last) = u.last() {
        if !last.is_zero() {
            return vec_scale(u, &last.inv().unwrap());
        }
    }
    match u.iter().find(|x| !x.is_zero()) {
        Some(p) => vec_scale(u, &p.inv().unwrap()),
        None => u.to_vec(),
    }
}

/// True when `u` and `v` are nonzero multiples of each other.
pub fn proportional(u: &[FieldElem], v: &[FieldElem]) -> bool {
    if u.len() != v.len() || is_zero_vec(u) || is_zero_vec(v) {
        return false;
    }
    projective_normal(u) == projective_normal(v)
}

pub fn vec_to_f64(u: &[FieldElem]) -> Vec<f64> {
    u.iter().map(FieldElem::to_f64).collect()
}

/// Dense matrix over the field, row major.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MatF {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<FieldElem>,
}

impl MatF {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatF { rows, cols, entries: vec![FieldElem::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatF::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElem::one());
        }
        m
    }

    pub fn from_rows(rows: &[VecF]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            entries.extend(r.iter().cloned());
        }
        MatF { rows: rows.len(), cols, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElem) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> VecF {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_vecs(&self) -> Vec<VecF> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> MatF {
        let mut t = MatF::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &MatF) -> MatF {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut m = MatF::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = FieldElem::zero();
                for k in 0..self.cols {
                    let x = self.get(i, k);
                    let y = o.get(k, j);
                    if !x.is_zero() && !y.is_zero() {
                        acc += &(x * y);
                    }
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn apply(&self, v: &[FieldElem]) -> VecF {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(&self.entries[i * self.cols..(i + 1) * self.cols], v)).collect()
    }

    pub fn pow(&self, mut e: u32) -> MatF {
        let mut base = self.clone();
        let mut acc = MatF::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (MatF, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let x = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> FieldElem {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = FieldElem::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return FieldElem::zero();
            };
            if p != c {
                for j in 0..n {
                    m.entries.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let x = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, x);
                }
            }
        }
        det
    }
}

/// Basis of the kernel `{x : m·x = 0}`, one vector per free column.
pub fn solve_nullspace(m: &MatF) -> Vec<VecF> {
    let (r, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![FieldElem::zero(); m.cols];
            v[f] = FieldElem::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, f).clone();
            }
            v
        })
        .collect()
}

/// Quarter turn in the (x₁, x₂) plane, fixing x₃, x₄, x₅.
pub fn rotation_r12() -> MatF {
    let mut m = MatF::identity(5);
    m.set(0, 0, FieldElem::zero());
    m.set(0, 1, FieldElem::int(-1));
    m.set(1, 0, FieldElem::one());
    m.set(1, 1, FieldElem::zero());
    m
}

/// Sixth turn in the (x₃, x₄) plane, fixing x₁, x₂, x₅.
pub fn rotation_r34() -> MatF {
    let half = FieldElem::frac(1, 2);
    let s = FieldElem::sqrt3().scale(&rat(1, 2));
    let mut m = MatF::identity(5);
    m.set(2, 2, half.clone());
    m.set(2, 3, -s.clone());
    m.set(3, 2, s);
    m.set(3, 3, half);
    m
}

/// Reflection negating a single coordinate.
pub fn reflection(coord: usize) -> MatF {
    let mut m = MatF::identity(5);
    m.set(coord, coord, FieldElem::int(-1));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_examples() {
        assert_eq!(field_sign(&FieldElem::zero()), 0);
        assert_eq!(field_sign(&FieldElem::q2(-1, 1, 1)), 1);
        assert_eq!(field_sign(&FieldElem::q2(3, -4, 23)), -1);
    }

    #[test]
    fn sign_mixed_radicals() {
        // √6 − √2 − √3 ≈ −0.7
        let x = FieldElem::sqrt6() - FieldElem::sqrt2() - FieldElem::sqrt3();
        assert_eq!(x.sign(), -1);
        // 5 − 2√6 = (√3 − √2)² > 0
        let y = FieldElem::int(5) - FieldElem::sqrt6() * FieldElem::int(2);
        assert_eq!(y.sign(), 1);
        // √2 + √3 − √6 ≈ 0.7
        let z = FieldElem::sqrt2() + FieldElem::sqrt3() - FieldElem::sqrt6();
        assert_eq!(z.sign(), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let x = FieldElem::from_str("1/3 - 2sqrt2 + 5sqrt3 - 1/7sqrt6").unwrap();
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(FieldElem::zero().inv().is_err());
    }

    #[test]
    fn parse_and_display() {
        let x: FieldElem = "-1/2+sqrt3".parse().unwrap();
        assert_eq!(x, FieldElem::new(rat(-1, 2), rat_int(0), rat_int(1), rat_int(0)));
        assert_eq!(format!("{}", FieldElem::q2(-1, 1, 1)), "-1 + √2");
        assert_eq!(format!("{}", FieldElem::zero()), "0");
    }

    #[test]
    fn json_roundtrip() {
        let x = FieldElem::q2(16, -6, 23);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"16/23","b":"-6/23","c":"0/1","d":"0/1"}"#);
        let back: FieldElem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn nullspace_trivial_cases() {
        assert!(solve_nullspace(&MatF::identity(3)).is_empty());
        let z = MatF::zeros(1, 3);
        assert_eq!(solve_nullspace(&z).len(), 3);
    }

    #[test]
    fn nullspace_annihilates() {
        let m = MatF::from_rows(&[
            vec![FieldElem::int(1), FieldElem::sqrt2(), FieldElem::int(0)],
            vec![FieldElem::sqrt3(), FieldElem::sqrt6(), FieldElem::int(0)],
        ]);
        let ker = solve_nullspace(&m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(is_zero_vec(&m.apply(v)));
        }
    }

    #[test]
    fn rotations() {
        assert_eq!(rotation_r12().pow(4), MatF::identity(5));
        assert_eq!(rotation_r34().pow(6), MatF::identity(5));
        assert_ne!(rotation_r34().pow(3), MatF::identity(5));
        let p = vec_from_ints(&[1, 0, 1, 0, 1]);
        assert_eq!(rotation_r12().apply(&p), vec_from_ints(&[0, 1, 1, 0, 1]));
        let a = rotation_r12().mul(&rotation_r34());
        let b = rotation_r34().mul(&rotation_r12());
        assert_eq!(a, b);
    }

    #[test]
    fn determinant_matches_rank() {
        let m = MatF::from_rows(&[vec_from_ints(&[2, 0, 1]), vec_from_ints(&[1, 1, 0]), vec_from_ints(&[0, 3, 1])]);
        assert_eq!(m.det(), FieldElem::int(5));
        let s = MatF::from_rows(&[vec_from_ints(&[1, 2]), vec_from_ints(&[2, 4])]);
        assert!(s.det().is_zero());
        assert_eq!(s.rank(), 1);
    }
}
