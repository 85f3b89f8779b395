use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use recforge::constructions::{
    entropy_bound_check, extract_ip, ip_violations, md_point, minimality_rows, rapid_ip, sm_point, validate_md,
    validate_sm, EntropyRow, GapRow,
};
use recforge::families::{difference_set, fs_set, piecewise_syndetic_witness};
use recforge::product::recurrence_desert;
use recforge::subshift::{generators, hitting_times, occurrences};
use recforge::{PointPrefix, WindowSet};

/// `{0}` plus runs growing by a random factor of at least 12, each run a
/// random fraction of its start.
fn growing_runs(seed: u64, h: usize) -> PointPrefix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = vec![0];
    let mut p: usize = rng.gen_range(3..=12);
    let mut first = true;
    while p < h {
        let len = if first { (p / 4).max(1) } else { p / rng.gen_range(2..=3) };
        members.extend((p..p + len).take_while(|&i| i < h));
        p *= rng.gen_range(12..=20);
        first = false;
    }
    PointPrefix::indicator(&WindowSet::from_unsorted(h, members).unwrap(), format!("runs{seed}"))
}

fn arithmetic_complement(seed: u64, h: usize) -> PointPrefix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = rng.gen_range(500..3000);
    let r = rng.gen_range(1..q);
    let f = WindowSet::from_predicate(h, |i| i == 0 || i % q != r).unwrap();
    PointPrefix::indicator(&f, format!("not {q}Z+{r}"))
}

#[test]
fn md_on_random_layouts() {
    for seed in 0..6 {
        let c = growing_runs(seed, 200_000);
        let (y, trace) = md_point(&c, 3).unwrap();
        assert!(trace.is_complete(), "seed {seed}: {:?}", trace.stop);
        assert!(y.support().is_subset_of(&c.support()));
        validate_md(&c, &y, &trace).unwrap();
        let a1 = &trace.stages[0].word;
        let occ = occurrences(&y, a1).unwrap();
        let w = piecewise_syndetic_witness(&occ, a1.len()).unwrap().unwrap();
        assert!(w.length() >= 10 * a1.len(), "seed {seed}: {w:?}");
        // Determinism.
        assert_eq!(md_point(&c, 3).unwrap().1, trace);
    }
}

#[test]
fn md_entropy_bound_four_stages() {
    let mut members = vec![0];
    let mut p = 4;
    while p < 300_000 {
        members.extend((p..p + p / 4).take_while(|&i| i < 300_000));
        p *= 4;
    }
    let c = PointPrefix::indicator(&WindowSet::from_unsorted(300_000, members).unwrap(), "4^j");
    let (y, trace) = md_point(&c, 4).unwrap();
    assert!(trace.is_complete());
    let rows = entropy_bound_check(&y, &trace).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(EntropyRow::holds), "{rows:?}");
}

#[test]
fn sm_on_arithmetic_complements() {
    for seed in 0..3 {
        let f = arithmetic_complement(seed, 300_000);
        let (y, trace) = sm_point(&f, 3).unwrap();
        assert!(trace.is_complete(), "{}: {:?}", f.label(), trace.stop);
        assert!(y.support().is_subset_of(&f.support()));
        validate_sm(&f, &y, &trace).unwrap();
        assert!(minimality_rows(&y, &trace).unwrap().iter().all(GapRow::holds));
        for st in &trace.stages {
            let hits = hitting_times(&y, &st.word, &st.word).unwrap();
            assert!(hits.contains(st.a()) && hits.contains(st.a() + 1));
        }
    }
}

#[test]
fn ip_extraction_on_standard_points() {
    let h = 1 << 14;
    let points = [
        generators::zeros(h).unwrap(),
        generators::periodic(&"01".parse().unwrap(), h).unwrap(),
        generators::thue_morse(h).unwrap(),
    ];
    for x in &points {
        let g = extract_ip(x, 4).unwrap();
        assert!(ip_violations(x, &g).unwrap().is_empty(), "{}", x.label());
    }
}

fn octaves(h: usize, parity: u32) -> PointPrefix {
    let f = WindowSet::from_predicate(h, |i| i > 0 && i.ilog2() % 2 == parity).unwrap();
    PointPrefix::indicator(&f, format!("octaves{parity}"))
}

#[test]
fn rapid_ip_in_octaves() {
    let f = octaves(1 << 16, 0);
    let r = rapid_ip(&f, 6).unwrap();
    assert!(r.stop.is_none());
    assert_eq!(r.gens.gens(), &[1, 5, 22, 92, 376, 1520]);
    let fs = fs_set(&r.gens, f.horizon()).unwrap();
    assert!(fs.is_subset_of(&f.support()));
    assert!(difference_set(&fs).is_subset_of(&f.support()));
}

#[test]
fn desert_depth_six() {
    let d = recurrence_desert(&octaves(1 << 16, 0), &octaves(1 << 16, 1), 6).unwrap();
    assert!(d.holds(), "{:?}", d.checks);
    assert!(d.joint.is_empty());
    assert_eq!(d.sums[0].len(), 63);
}
