use num::{Integer, One, Signed, Zero};
use polyforge::exactfield::rat_to_string;
use polyforge::FieldElem;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT_VERSION: &str = "polyforge/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subject {
    pub kind: String,
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Value,
}

/// A command's verdict: named checks with witnesses, plus the artifact data
/// needed to re-verify them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub version: String,
    pub subject: Subject,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(default)]
    pub data: Value,
}

impl CertificateBundle {
    pub fn new(kind: &str, params: Value) -> Self {
        CertificateBundle {
            version: FORMAT_VERSION.to_string(),
            subject: Subject { kind: kind.to_string(), params },
            checks: Vec::new(),
            pass: true,
            data: Value::Null,
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, witness: Value) {
        self.pass &= pass;
        self.checks.push(Check { name: name.to_string(), pass, witness });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }
}

/// Six significant digits, fixed notation for moderate magnitudes and
/// scientific notation otherwise.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let e: i32 = sci.rsplit('e').next().and_then(|t| t.parse().ok()).unwrap_or(0);
    if (-3..4).contains(&e) {
        format!("{:.*}", (5 - e) as usize, x)
    } else {
        sci
    }
}

/// Element of Q(√2) as `(a + b√2)/d` with a common denominator.
pub fn fmt_q2(x: &FieldElem) -> String {
    if !x.in_q_sqrt2() {
        return x.to_string();
    }
    let den = x.a.denom().lcm(x.b.denom());
    let a = (&x.a * num::BigRational::from_integer(den.clone())).to_integer();
    let b = (&x.b * num::BigRational::from_integer(den.clone())).to_integer();
    let mut terms = Vec::new();
    if !a.is_zero() {
        terms.push(a.to_string());
    }
    if !b.is_zero() {
        let mag = if b.abs().is_one() { "√2".to_string() } else { format!("{}√2", b.abs()) };
        match (terms.is_empty(), b.is_negative()) {
            (true, true) => terms.push(format!("-{mag}")),
            (true, false) => terms.push(mag),
            (false, true) => terms.push(format!("- {mag}")),
            (false, false) => terms.push(format!("+ {mag}")),
        }
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let num = terms.join(" ");
    if den.is_one() {
        num
    } else if terms.len() == 1 {
        format!("{num}/{den}")
    } else {
        format!("({num})/{den}")
    }
}

/// Exact element as a compact string for witnesses.
pub fn fmt_exact(x: &FieldElem) -> String {
    if x.in_q_sqrt2() {
        fmt_q2(x)
    } else {
        [&x.a, &x.b, &x.c, &x.d].iter().map(|r| rat_to_string(r)).collect::<Vec<_>>().join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits() {
        assert_eq!(sig6(1.8419828), "1.84198");
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(0.17094392), "0.170944");
        assert_eq!(sig6(1.7580082e-4), "1.75801e-4");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn q2_strings() {
        assert_eq!(fmt_q2(&FieldElem::q2(-1, 1, 1)), "-1 + √2");
        assert_eq!(fmt_q2(&FieldElem::q2(11, -7, 23)), "(11 - 7√2)/23");
        assert_eq!(fmt_q2(&FieldElem::q2(0, 6, 49)), "6√2/49");
        assert_eq!(fmt_q2(&FieldElem::q2(0, -1, 1)), "-√2");
        assert_eq!(fmt_q2(&FieldElem::zero()), "0");
    }
}
