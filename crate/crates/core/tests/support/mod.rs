//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use polyforge::FieldElem;

/// `(a + b√2)/den` for one table cell.
pub type Q2 = (i64, i64, i64);

pub fn q2(c: Q2) -> FieldElem {
    FieldElem::q2(c.0, c.1, c.2)
}

/// Iteration chain table: three coordinates per row (the fourth is 0, the
/// fifth 1) and the printed float λ.
pub const KAPPA_TABLE: [([Q2; 3], f64); 11] = [
    ([(-1, 1, 1), (1, -1, 1), (2, 0, 1)], 1.8419),
    ([(-1, 0, 1), (0, 0, 1), (1, 0, 1)], 1.0),
    ([(11, -7, 23), (9, 11, 23), (16, -6, 23)], 0.1709),
    ([(37, 11, 49), (-11, 6, 49), (22, -12, 49)], 0.0181),
    ([(-241, 145, 697), (-407, -241, 697), (260, -168, 697)], 1.7906e-2),
    ([(-457, -192, 679), (192, -111, 679), (202, -138, 679)], 1.7580e-3),
    ([(577, -341, 1837), (1155, 577, 1837), (464, -324, 1837)], 1.7247e-5),
    ([(25057, 11471, 38473), (-11471, 6708, 38473), (8116, -5712, 38473)], 1.6920e-6),
    ([(-233, 137, 761), (-487, -233, 761), (136, -96, 761)], 1.6598e-7),
    ([(-353893, -165588, 548089), (165588, -97098, 548089), (82564, -58344, 548089)], 1.6283e-8),
    ([(5033675, -2955751, 16549127), (10637625, 5033675, 16549127), (2108416, -1490520, 16549127)], 1.5974e-9),
];

pub fn kappa_row(i: usize) -> Vec<FieldElem> {
    let (c, _) = KAPPA_TABLE[i];
    vec![q2(c[0]), q2(c[1]), q2(c[2]), FieldElem::zero(), FieldElem::one()]
}

fn q2_f64(c: Q2) -> f64 {
    (c.0 as f64 + c.1 as f64 * std::f64::consts::SQRT_2) / c.2 as f64
}

/// λ of a table row in floating point: the Clifford torus parameter of the
/// radial projection, 2(x₃² + x₄²)/|x|².
pub fn lambda_oracle(i: usize) -> f64 {
    let (c, _) = KAPPA_TABLE[i];
    let x: Vec<f64> = c.iter().map(|&e| q2_f64(e)).collect();
    2.0 * x[2] * x[2] / (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
}

/// Agreement to `sig` significant figures.
pub fn same_sig_figs(a: f64, b: f64, sig: i32) -> bool {
    let round = |x: f64| {
        let e = x.abs().log10().floor() as i32;
        let scale = 10f64.powi(sig - 1 - e);
        ((x * scale).round(), e)
    };
    round(a) == round(b)
}

/// Facet-ridge distances by breadth-first search on facets that share all
/// but one vertex.
pub fn facet_distances(facets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = facets.len();
    let sets: Vec<BTreeSet<usize>> = facets.iter().map(|f| f.iter().copied().collect()).collect();
    let adjacent = |i: usize, j: usize| {
        sets[i].len() == sets[j].len() && sets[i].intersection(&sets[j]).count() + 1 == sets[i].len()
    };
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && adjacent(i, j)).collect()).collect();
    (0..n)
        .map(|s| {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        q.push_back(w);
                    }
                }
            }
            dist
        })
        .collect()
}

/// Number of faces of each dimension, by enumerating subsets of facets.
pub fn face_counts(facets: &[Vec<usize>]) -> Vec<usize> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in facets {
        for mask in 1u32..(1 << f.len()) {
            let s: Vec<usize> = (0..f.len()).filter(|b| mask >> b & 1 == 1).map(|b| f[b]).collect();
            seen.insert(s);
        }
    }
    let top = seen.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![0; top];
    for s in seen {
        out[s.len() - 1] += 1;
    }
    out
}

pub fn euler_from_counts(counts: &[usize]) -> i64 {
    counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}
