use pcsp_core::catalog::all_symmetric_ternary;
use pcsp_core::instance::generate_planted;
use pcsp_core::structure::{symmetrize, RelStructure};
use pcsp_core::tract::*;
use pcsp_core::{check_coloring, hom_exists, hom_order_compare, named_template, HomOrder, Instance};
use proptest::prelude::*;

fn tiny_rows() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), 1..=3),
            proptest::collection::vec(-3i64..=3, 3),
        )
    })
}

/// Every assignment with entries in -3..=3.
fn bounded_solution(n: usize, rows: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<i64>> {
    let total = 7usize.pow(n as u32);
    (0..total).find_map(|code| {
        let x: Vec<i64> = (0..n).map(|i| (code / 7usize.pow(i as u32) % 7) as i64 - 3).collect();
        rows.iter()
            .zip(rhs)
            .all(|(r, b)| r.iter().zip(&x).map(|(a, v)| a * v).sum::<i64>() == *b)
            .then_some(x)
    })
}

proptest! {
    #[test]
    fn hnf_matches_bounded_search((n, rows, rhs) in tiny_rows()) {
        let rhs = rhs[..rows.len()].to_vec();
        let sys = IntAffineSystem::new(n, rows.clone(), rhs.clone()).unwrap();
        let solved = hnf_solve(&sys);
        if let Some(x) = &solved {
            prop_assert!(sys.is_solution(x));
        }
        if bounded_solution(n, &rows, &rhs).is_some() {
            prop_assert!(solved.is_some());
        }
    }

    #[test]
    fn gf3_matches_exhaustive(n in 1usize..=5, edges in proptest::collection::vec((0usize..5, 0usize..5, 0usize..5, 0u8..3), 0..6)) {
        let rows: Vec<([usize; 3], u8)> = edges.into_iter().map(|(a, b, c, r)| ([a % n, b % n, c % n], r)).collect();
        let sys = GF3System::new(n, rows.clone()).unwrap();
        let exhaustive = (0..3usize.pow(n as u32)).any(|code| {
            rows.iter().all(|(t, r)| t.iter().map(|&v| code / 3usize.pow(v as u32) % 3).sum::<usize>() % 3 == *r as usize)
        });
        let solved = gauss_gf3(&sys);
        prop_assert_eq!(solved.is_some(), exhaustive);
        if let Some(x) = solved {
            for (t, r) in &rows {
                prop_assert_eq!(t.iter().map(|&v| x[v]).sum::<u8>() % 3, *r);
            }
        }
    }

    // X -> B  =>  sym(X) -> sym(B);  sym(X) -> B  =>  X -> B;
    // X -> A  =>  sym(X) -> A for symmetric A.
    #[test]
    fn symmetrization_directions(
        x_tuples in proptest::collection::vec((0usize..4, 0usize..4, 0usize..4), 1..5),
        b_tuples in proptest::collection::vec((0usize..3, 0usize..3, 0usize..3), 1..5),
    ) {
        let x = RelStructure::ternary(4, x_tuples.into_iter().map(|(a, b, c)| [a, b, c])).unwrap();
        let b = RelStructure::ternary(3, b_tuples.into_iter().map(|(a, b, c)| [a, b, c])).unwrap();
        let (sx, sb) = (symmetrize(&x), symmetrize(&b));
        if hom_exists(&x, &b).unwrap() {
            prop_assert!(hom_exists(&sx, &sb).unwrap());
        }
        if hom_exists(&sx, &b).unwrap() {
            prop_assert!(hom_exists(&x, &b).unwrap());
        }
        if hom_exists(&x, &sb).unwrap() {
            prop_assert!(hom_exists(&sx, &sb).unwrap());
        }
    }
}

#[test]
fn symmetrized_target_is_not_a_full_reduction() {
    // sym(X) -> sym(B) holds although X -/-> B
    let b = RelStructure::ternary(2, [[0, 0, 1]]).unwrap();
    let x = RelStructure::ternary(2, [[0, 1, 0]]).unwrap();
    assert!(hom_exists(&symmetrize(&x), &symmetrize(&b)).unwrap());
    assert!(!hom_exists(&x, &b).unwrap());
}

#[test]
fn planted_instances_are_solved() {
    for seed in 0..200u64 {
        let nv = 3 + (seed as usize * 7) % 48;
        let ne = (seed as usize * 13) % 101;
        let (inst, witness) = generate_planted(nv, ne, seed).unwrap();
        assert!(check_coloring(&inst, &witness, &named_template("1in3").unwrap()).unwrap());
        let t2 = solve_t2(&inst).expect("promise holds");
        assert!(check_coloring(&inst, &t2, &named_template("T2").unwrap()).unwrap());
        let nae = solve_nae(&inst).expect("promise holds");
        assert!(check_coloring(&inst, &nae, &named_template("NAE").unwrap()).unwrap());
    }
}

#[test]
fn degenerate_edges() {
    let inst = Instance::new(3, vec![[0, 1, 2], [1, 1, 1]]).unwrap();
    assert_eq!(solve_t2(&inst), None);
    assert_eq!(solve_nae(&inst), None);
}

#[test]
fn classifier_trichotomy() {
    let lo3 = named_template("LO_3").unwrap();
    for b in all_symmetric_ternary(3) {
        let label = classify_template(&b).unwrap();
        let equivalent = hom_order_compare(&b, &lo3).unwrap() == HomOrder::Equivalent;
        assert_eq!(label == Complexity::Open, equivalent, "{}", b.encoding());
    }
}
