mod support;

use polyforge::complexcore::{random_stacked_simplex, random_subdivided_simplex, CubicalComplex, SimplicialComplex};
use polyforge::morse::{
    collapse_search, critical_counts, expected_ledger_size, out_j_collapse, outward_faces, validate_matching,
    CollapseTarget, HasseDiagram, MorseMatching, SearchConfig,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{euler_from_counts, face_counts};

fn assert_collapses_to_point(h: &HasseDiagram, seed: u64) {
    let cfg = SearchConfig { seed, ..SearchConfig::default() };
    let r = collapse_search(h, &CollapseTarget::Point, &cfg).expect("collapse within budget");
    assert!(validate_matching(h, &r.matching).unwrap());
    let counts = critical_counts(h, &r.matching).unwrap();
    assert_eq!(counts.iter().sum::<usize>(), 1);
    assert_eq!(counts[0], 1);
}

#[test]
fn subdivided_simplices_collapse() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..10 {
        let steps = rng.gen_range(1..=6);
        let c = random_subdivided_simplex(3, steps, &mut rng).derived_subdivision();
        assert_collapses_to_point(&HasseDiagram::of_simplicial(&c), i);
    }
}

#[test]
fn cube_and_its_subdivision_collapse() {
    let cube = CubicalComplex::unit_cube(3);
    assert_collapses_to_point(&HasseDiagram::of_cubical(&cube), 0);
    assert_collapses_to_point(&HasseDiagram::of_simplicial(&cube.derived_subdivision()), 0);
}

fn skeleton(c: &SimplicialComplex, j: usize) -> SimplicialComplex {
    let faces: Vec<Vec<usize>> = c.faces_by_dim().into_iter().take(j + 1).flatten().collect();
    SimplicialComplex::new(c.num_vertices, faces).unwrap()
}

fn boundary(c: &SimplicialComplex) -> SimplicialComplex {
    let d = c.dim() as usize;
    let ridges = &c.faces_by_dim()[d - 1];
    let faces: Vec<Vec<usize>> = ridges
        .iter()
        .filter(|r| c.facets.iter().filter(|f| r.iter().all(|v| f.contains(v))).count() == 1)
        .cloned()
        .collect();
    SimplicialComplex::new(c.num_vertices, faces).unwrap()
}

fn relabel(c: &SimplicialComplex, perm: &[usize]) -> SimplicialComplex {
    let facets = c.facets.iter().map(|f| f.iter().map(|&v| perm[v]).collect()).collect();
    SimplicialComplex::new(perm.len(), facets).unwrap()
}

/// Pairs (C, D, j) with C collapsible and D a subcomplex.
fn pairs() -> Vec<(SimplicialComplex, SimplicialComplex, usize)> {
    let mut out = Vec::new();
    for n in 2..=5 {
        let c = SimplicialComplex::simplex(n + 1);
        for j in 1..n {
            out.push((c.clone(), skeleton(&c, j), j));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for d in [2, 2, 3, 3] {
        let c = random_stacked_simplex(d, rng.gen_range(1..=4), &mut rng);
        out.push((c.clone(), boundary(&c), d - 1));
    }
    for _ in 0..3 {
        let c = random_subdivided_simplex(2, rng.gen_range(1..=4), &mut rng);
        out.push((c.clone(), skeleton(&c, 1), 1));
    }
    for k in [4, 5, 6] {
        let cyc = SimplicialComplex::cycle(k);
        out.push((cyc.cone(), cyc, 1));
    }
    out
}

#[test]
fn out_j_ledgers_are_matching_independent() {
    let cases = pairs();
    assert_eq!(cases.len(), 20);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut distinct = 0;
    for (i, (c, d, j)) in cases.into_iter().enumerate() {
        let chi = euler_from_counts(&face_counts(&d.facets));
        let expected = if j % 2 == 0 { chi - 1 } else { 1 - chi };
        assert_eq!(expected_ledger_size(&d, j), expected);
        let h = HasseDiagram::of_simplicial(&c);

        let cfg = SearchConfig { seed: i as u64, ..SearchConfig::default() };
        let (m1, ledger) = out_j_collapse(&h, &d, j, &cfg).unwrap();
        assert!(validate_matching(&h, &m1).unwrap());
        assert!(ledger.outward.iter().all(|f| f.len() == j + 1));
        assert_eq!(ledger.outward.len() as i64, expected, "pair {i}");

        // second sequence: search on a relabeled copy, then map back
        let mut perm: Vec<usize> = (0..c.num_vertices).collect();
        perm.shuffle(&mut rng);
        let mut inv = vec![0; perm.len()];
        for (a, &b) in perm.iter().enumerate() {
            inv[b] = a;
        }
        let hp = HasseDiagram::of_simplicial(&relabel(&c, &perm));
        let cfg2 = SearchConfig { seed: 1000 + i as u64, ..SearchConfig::default() };
        let (mp, _) = out_j_collapse(&hp, &relabel(&d, &perm), j, &cfg2).unwrap();
        let back = |f: &Vec<usize>| {
            let mut g: Vec<usize> = f.iter().map(|&v| inv[v]).collect();
            g.sort_unstable();
            g
        };
        let m2 = MorseMatching { pairs: mp.pairs.iter().map(|(a, b)| (back(a), back(b))).collect() };
        assert!(validate_matching(&h, &m2).unwrap());
        let out2 = outward_faces(&h, &d, &m2).unwrap();
        assert!(out2.iter().all(|f| f.len() == j + 1));
        assert_eq!(out2.len(), ledger.outward.len(), "pair {i}");
        let set = |m: &MorseMatching| m.pairs.iter().cloned().collect::<std::collections::BTreeSet<_>>();
        if set(&m1) != set(&m2) {
            distinct += 1;
        }
    }
    println!("{distinct} of 20 pairs collapsed along two different matchings");
    assert!(distinct >= 15);
}
