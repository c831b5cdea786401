//! Polynomial-time solvers for the tractable templates and the classifier for
//! three-element symmetric targets.
//!
//! `PCSP(1in3, B)` is solvable in polynomial time when `T2 -> B` (linear
//! equations modulo 3) or `NAE -> B` (integer affine relaxation with a
//! positivity threshold); a solution for `T2` or `NAE` is pushed through a
//! homomorphism into `B`.

mod gf3;
mod hnf;

use num_traits::Signed;
use serde::Serialize;

pub use gf3::{gauss_gf3, GF3System};
pub use hnf::{hnf_solve, IntAffineSystem};

use crate::catalog::named_template;
use crate::error::{Error, Result};
use crate::hom::{check_coloring, find_homomorphism, hom_exists};
use crate::instance::Instance;
use crate::structure::RelStructure;

fn template(name: &str) -> RelStructure {
    named_template(name).expect("catalog template")
}

/// Colours in `{0,1,2}` with every edge summing to 1 modulo 3, or `None`.
pub fn solve_t2(inst: &Instance) -> Option<Vec<usize>> {
    let rows = inst.edges().iter().map(|&e| (e, 1)).collect();
    let sys = GF3System::new(inst.variable_count(), rows).expect("instance indices are in range");
    let coloring: Vec<usize> = gauss_gf3(&sys)?.into_iter().map(usize::from).collect();
    assert!(
        check_coloring(inst, &coloring, &template("T2")).expect("complete coloring"),
        "GF(3) solution must be a T2-coloring"
    );
    Some(coloring)
}

/// Solves `x_a + x_b + x_c = 1` over the integers and colours `x ≥ 1` with 1.
/// No edge can be monochromatic: three 1s sum to at least 3, three 0s to at most 0.
pub fn solve_nae(inst: &Instance) -> Option<Vec<usize>> {
    let sys = IntAffineSystem::from_triples(inst.variable_count(), inst.edges()).expect("instance indices are in range");
    let x = hnf_solve(&sys)?;
    let coloring: Vec<usize> = x.iter().map(|v| v.is_positive() as usize).collect();
    assert!(
        check_coloring(inst, &coloring, &template("NAE")).expect("complete coloring"),
        "threshold of an integer solution must be an NAE-coloring"
    );
    Some(coloring)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    T2,
    Nae,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relaxed {
    pub route: Route,
    /// `None` when the relaxed solver found nothing.
    pub coloring: Option<Vec<usize>>,
}

/// Solves via `T2` or `NAE`, whichever maps to `b` (`prefer` first), then
/// composes with a homomorphism into `b`.
pub fn solve_via_relaxation(inst: &Instance, b: &RelStructure, prefer: Route) -> Result<Relaxed> {
    let order = match prefer {
        Route::T2 => [Route::T2, Route::Nae],
        Route::Nae => [Route::Nae, Route::T2],
    };
    for route in order {
        let name = match route {
            Route::T2 => "T2",
            Route::Nae => "NAE",
        };
        let Some(h) = find_homomorphism(&template(name), b)? else {
            continue;
        };
        let solved = match route {
            Route::T2 => solve_t2(inst),
            Route::Nae => solve_nae(inst),
        };
        let coloring = solved.map(|c| c.into_iter().map(|v| h.apply(v)).collect::<Vec<_>>());
        if let Some(c) = &coloring {
            assert!(check_coloring(inst, c, b)?, "composed coloring must be valid");
        }
        return Ok(Relaxed { route, coloring });
    }
    Err(Error::NoRelaxation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Complexity {
    P,
    NpHard,
    Open,
}

impl std::fmt::Display for Complexity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Complexity::P => "P",
            Complexity::NpHard => "NP-hard",
            Complexity::Open => "open",
        })
    }
}

/// Complexity of `PCSP(1in3, B)` for a symmetric ternary `B` on three
/// elements: P if `NAE -> B` or `T2 -> B` (or `B` has a constant tuple),
/// NP-hard if `B` maps to `T1`, `D1plus` or `D2plus`, open otherwise.
pub fn classify_template(b: &RelStructure) -> Result<Complexity> {
    if b.domain_size() != 3 {
        return Err(Error::WrongDomainSize {
            expected: 3,
            found: b.domain_size(),
        });
    }
    b.ternary_relation()?;
    if !b.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if b.has_constant_tuple() || hom_exists(&template("NAE"), b)? || hom_exists(&template("T2"), b)? {
        return Ok(Complexity::P);
    }
    for hard in ["T1", "D1plus", "D2plus"] {
        if hom_exists(b, &template(hard))? {
            return Ok(Complexity::NpHard);
        }
    }
    Ok(Complexity::Open)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_planted;

    #[test]
    fn t2_examples() {
        let one = Instance::new(3, vec![[0, 1, 2]]).unwrap();
        let c = solve_t2(&one).unwrap();
        assert_eq!(c.iter().sum::<usize>() % 3, 1);
        assert_eq!(solve_t2(&Instance::new(1, vec![[0, 0, 0]]).unwrap()), None);
        let empty = Instance::new(4, vec![]).unwrap();
        assert_eq!(solve_t2(&empty), Some(vec![0; 4]));
    }

    #[test]
    fn nae_examples() {
        let two = Instance::new(4, vec![[0, 1, 2], [0, 1, 3]]).unwrap();
        assert_eq!(solve_nae(&two), Some(vec![1, 0, 0, 0]));
        let repeated = Instance::new(2, vec![[0, 0, 1]]).unwrap();
        let c = solve_nae(&repeated).unwrap();
        assert_ne!(c[0], c[1]);
        assert_eq!(solve_nae(&Instance::new(1, vec![[0, 0, 0]]).unwrap()), None);
    }

    #[test]
    fn relaxation_routes() {
        let (inst, _) = generate_planted(20, 30, 7).unwrap();
        let s = solve_via_relaxation(&inst, &template("S"), Route::T2).unwrap();
        assert_eq!(s.route, Route::T2);
        assert!(check_coloring(&inst, s.coloring.as_ref().unwrap(), &template("S")).unwrap());
        let nae = solve_via_relaxation(&inst, &template("NAE"), Route::T2).unwrap();
        assert_eq!(nae.route, Route::Nae);
        let forced = solve_via_relaxation(&inst, &template("S"), Route::Nae).unwrap();
        assert_eq!(forced.route, Route::Nae);
        assert_eq!(
            solve_via_relaxation(&inst, &template("LO_3"), Route::T2),
            Err(Error::NoRelaxation)
        );
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(classify_template(&template("D1plus")).unwrap(), Complexity::NpHard);
        assert_eq!(classify_template(&template("S")).unwrap(), Complexity::P);
        assert_eq!(classify_template(&template("LO_3")).unwrap(), Complexity::Open);
        assert_eq!(classify_template(&template("T1")).unwrap(), Complexity::NpHard);
        assert!(matches!(
            classify_template(&template("CH")),
            Err(Error::WrongDomainSize { expected: 3, found: 4 })
        ));
        let ordered = RelStructure::ternary(3, [[0, 0, 1]]).unwrap();
        assert_eq!(classify_template(&ordered), Err(Error::NotSymmetric));
    }
}
