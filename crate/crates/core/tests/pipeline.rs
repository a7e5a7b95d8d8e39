use capset_core::apsets::{self, PointSet};
use capset_core::gf::{row_space_intersection, FpMatrix, PrimeField, Space};
use capset_core::proof::{self, Branch};
use capset_core::{bounds, Precision};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn space(p: u32, n: usize) -> Space {
    Space::new(field(p), n).unwrap()
}

fn nine_cap() -> PointSet {
    let pts = [
        [0, 0, 0],
        [1, 0, 0],
        [0, 1, 0],
        [1, 1, 0],
        [0, 0, 1],
        [1, 0, 1],
        [2, 1, 1],
        [2, 2, 1],
        [2, 1, 2],
    ];
    let coords: Vec<Vec<u32>> = pts.iter().map(|p| p.to_vec()).collect();
    PointSet::from_coords(&space(3, 3), &coords).unwrap()
}

/// `{(x, y) : x ∈ A, y ∈ B}` in `F_p^{n+m}`; a product of progression-free
/// sets is progression-free.
fn product(a: &PointSet, b: &PointSet) -> PointSet {
    let n = a.space().n() + b.space().n();
    let coords: Vec<Vec<u32>> = a
        .coords()
        .iter()
        .flat_map(|x| b.coords().into_iter().map(move |y| [x.clone(), y].concat()))
        .collect();
    PointSet::from_coords(&space(a.space().p(), n), &coords).unwrap()
}

#[test]
fn random_subspaces_meet_in_the_expected_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f3 = field(3);
    for _ in 0..20 {
        let mut pick = |k: usize| -> Vec<Vec<u32>> {
            loop {
                let rows: Vec<Vec<u32>> = (0..k)
                    .map(|_| (0..9).map(|_| rng.random_range(0..3)).collect())
                    .collect();
                if FpMatrix::from_rows(f3, &rows).unwrap().rank() == k {
                    return rows;
                }
            }
        };
        let (u, w) = (pick(5), pick(7));
        let meet = row_space_intersection(f3, &u, &w).unwrap();
        assert!(meet.len() >= 3);
        // every basis vector lies in both spaces
        for v in &meet {
            for span in [&u, &w] {
                let mut rows = span.clone();
                let r = rows.len();
                rows.push(v.clone());
                assert_eq!(FpMatrix::from_rows(f3, &rows).unwrap().rank(), r);
            }
        }
    }
}

#[test]
fn product_cap_takes_the_positive_branch() {
    let cap = nine_cap();
    let big = product(&cap, &cap);
    assert_eq!(big.len(), 81);
    assert!(apsets::is_progression_free(&big).progression_free);

    let t = proof::run_theorem_main(&big).unwrap();
    assert_eq!(t.branch, Branch::PositiveV);
    assert!(t.all_pass(), "{:?}", t.failed_checks().collect::<Vec<_>>());
    assert_eq!(t.dims.dim_v.to_string(), "25");
    assert_eq!(t.conclusion.exact_bound.to_string(), "103");
    assert!(t.conclusion.holds);
    assert!(proof::verify_transcript(&t, Precision::default())
        .unwrap()
        .ok());
}

#[test]
fn greedy_sets_prove_and_verify_through_json() {
    for (p, n, seed) in [(3, 3, 1), (3, 6, 2), (5, 3, 3), (7, 3, 4)] {
        let a = apsets::greedy_progression_free(field(p), n, seed).unwrap();
        let t = proof::run_theorem_main(&a).unwrap();
        assert!(t.all_pass() && t.conclusion.holds, "p={p} n={n}");
        assert!((a.len() as f64) <= bounds::main_bound(field(p), n));
        let back = proof::ProofTranscript::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(proof::verify_transcript(&back, Precision::default())
            .unwrap()
            .ok());
    }
}

#[test]
fn point_sets_survive_both_text_forms() {
    let cap = nine_cap();
    assert_eq!(PointSet::parse(&cap.to_text()).unwrap(), cap);
    assert_eq!(PointSet::parse(&cap.to_json()).unwrap(), cap);
}
