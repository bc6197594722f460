use polyforge::arrangement::{
    complement_betti, complement_euler_by_cells, gm_betti, intersection_poset, is_generic_hyperplane,
    lefschetz_inequality_check, AffineSubspace, Arrangement, Hyperplane,
};
use polyforge::exactfield::rat_int;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn betti(arr: &Arrangement, len: usize) -> Vec<usize> {
    let mut b = complement_betti(arr).unwrap();
    b.resize(len, 0);
    b
}

fn alternating(b: &[usize]) -> i64 {
    b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

#[test]
fn points_in_the_plane() {
    for n in 1..=6i64 {
        let pts = (0..n).map(|k| AffineSubspace::from_ints(&[], &[k, k * k])).collect();
        let arr = Arrangement::new(2, pts).unwrap();
        assert_eq!(betti(&arr, 2), vec![1, n as usize]);
        assert_eq!(gm_betti(&arr, 1).unwrap(), n as usize);
        assert_eq!(complement_euler_by_cells(&arr).unwrap(), 1 - n);
    }
}

#[test]
fn single_codim_two_plane() {
    let arr =
        Arrangement::new(4, vec![AffineSubspace::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0]], &[0, 0, 0, 0])]).unwrap();
    assert_eq!(gm_betti(&arr, 1).unwrap(), 1);
    assert_eq!(betti(&arr, 4), vec![1, 1, 0, 0]);
}

#[test]
fn two_coordinate_complex_lines() {
    // z₁ = 0 and z₂ = 0 in C² = R⁴: complement ≃ S¹ × S¹
    let z1 = AffineSubspace::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1]], &[0, 0, 0, 0]);
    let z2 = AffineSubspace::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0]], &[0, 0, 0, 0]);
    let arr = Arrangement::new(4, vec![z1, z2]).unwrap();
    assert_eq!(betti(&arr, 4), vec![1, 2, 1, 0]);
    assert_eq!(gm_betti(&arr, 1).unwrap(), 2);
    assert_eq!(gm_betti(&arr, 2).unwrap(), 1);
}

#[test]
fn three_concurrent_planes_poset() {
    let planes = vec![
        AffineSubspace::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0]], &[0, 0, 0, 0]),
        AffineSubspace::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1]], &[0, 0, 0, 0]),
        AffineSubspace::from_ints(&[&[1, 0, 1, 0], &[0, 1, 0, 1]], &[0, 0, 0, 0]),
    ];
    let arr = Arrangement::new(4, planes).unwrap();
    assert_eq!(intersection_poset(&arr).unwrap().nodes.len(), 4);
}

#[test]
fn lines_in_space() {
    // pairwise skew lines: complement ≃ wedge of n circles
    for n in 1..=4i64 {
        let lines = (0..n).map(|k| AffineSubspace::from_ints(&[&[1, k, 0]], &[0, 0, k])).collect();
        let arr = Arrangement::new(3, lines).unwrap();
        let b = betti(&arr, 3);
        assert_eq!(b, vec![1, n as usize, 0]);
        assert_eq!(alternating(&b), complement_euler_by_cells(&arr).unwrap());
    }
    // n concurrent lines: S² minus 2n points, a wedge of 2n − 1 circles
    for n in 1..=4i64 {
        let lines = (0..n).map(|k| AffineSubspace::from_ints(&[&[1, k, k * k]], &[0, 0, 0])).collect();
        let arr = Arrangement::new(3, lines).unwrap();
        let b = betti(&arr, 3);
        assert_eq!(b, vec![1, 2 * n as usize - 1, 0]);
        assert_eq!(alternating(&b), complement_euler_by_cells(&arr).unwrap());
    }
}

fn random_codim_two(rng: &mut ChaCha8Rng, count: usize) -> Arrangement {
    let mut subs = Vec::new();
    while subs.len() < count {
        let v = |rng: &mut ChaCha8Rng| (0..4).map(|_| rat_int(rng.gen_range(-3..=3))).collect::<Vec<_>>();
        let (a, b, o) = (v(rng), v(rng), v(rng));
        if let Ok(s) = AffineSubspace::new(vec![a, b], o) {
            if !subs.contains(&s) {
                subs.push(s);
            }
        }
    }
    Arrangement::new(4, subs).unwrap()
}

#[test]
fn lefschetz_on_random_arrangements() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let count = rng.gen_range(2..=4);
        let arr = random_codim_two(&mut rng, count);
        let poset = intersection_poset(&arr).unwrap();
        let h = loop {
            let h = Hyperplane {
                normal: (0..4).map(|_| rat_int(rng.gen_range(-5..=5))).collect(),
                value: rat_int(rng.gen_range(-7..=7)),
            };
            if h.normal.iter().any(|x| *x != rat_int(0)) && is_generic_hyperplane(&poset, &h).unwrap() {
                break h;
            }
        };
        let report = lefschetz_inequality_check(&arr, &h).unwrap();
        assert!(report.all_hold, "{report:?}");
        let b = betti(&arr, 4);
        assert_eq!(alternating(&b), complement_euler_by_cells(&arr).unwrap());
    }
}
