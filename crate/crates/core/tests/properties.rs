//! Algebraic invariants as property tests.

use ifm_core::audit::{minimize_witness, violation_at, AxiomId, Violation, Witness};
use ifm_core::contraction::{phi_from_k, psi_from_k};
use ifm_core::norm::{TConorm, TNorm};
use ifm_core::space::{standard_space, IFSpace, Point, PointDomain, TriangleMode};
use ifm_core::TOL;
use proptest::prelude::*;

const NORMS: [TNorm; 3] = [TNorm::Product, TNorm::Minimum, TNorm::Lukasiewicz];

fn unit() -> impl Strategy<Value = f64> {
    0.0f64..=1.0
}

fn norm() -> impl Strategy<Value = TNorm> {
    (0..3usize).prop_map(|i| NORMS[i].clone())
}

fn unit_space() -> IFSpace {
    standard_space(PointDomain::interval(0.0, 1.0).unwrap(), TNorm::Product, TConorm::ProbabilisticSum)
}

proptest! {
    #[test]
    fn tnorm_associative(n in norm(), a in unit(), b in unit(), c in unit()) {
        let l = n.eval(n.eval(a, b), c);
        let r = n.eval(a, n.eval(b, c));
        prop_assert!((l - r).abs() <= TOL, "{l} vs {r}");
    }

    #[test]
    fn tconorm_associative(n in norm(), a in unit(), b in unit(), c in unit()) {
        let s = n.dual();
        let l = s.eval(s.eval(a, b), c);
        let r = s.eval(a, s.eval(b, c));
        prop_assert!((l - r).abs() <= TOL, "{l} vs {r}");
    }

    #[test]
    fn norms_monotone(n in norm(), a in unit(), b in unit(), c in unit(), d in unit()) {
        let (a, c) = if a <= c { (a, c) } else { (c, a) };
        let (b, d) = if b <= d { (b, d) } else { (d, b) };
        prop_assert!(n.eval(a, b) <= n.eval(c, d) + TOL);
        let s = n.dual();
        prop_assert!(s.eval(a, b) <= s.eval(c, d) + TOL);
    }

    #[test]
    fn de_morgan_duality(n in norm(), a in unit(), b in unit()) {
        let lhs = n.dual().eval(a, b);
        let rhs = 1.0 - n.eval(1.0 - a, 1.0 - b);
        prop_assert!((lhs - rhs).abs() <= TOL);
    }

    #[test]
    fn norm_results_stay_in_unit_interval(n in norm(), a in unit(), b in unit()) {
        let v = n.eval(a, b);
        prop_assert!((0.0..=1.0).contains(&v));
        let w = n.dual().eval(a, b);
        prop_assert!((0.0..=1.0).contains(&w));
    }

    #[test]
    fn control_pair_from_k_are_inverse(k in 0.01f64..0.99, s in unit()) {
        let psi = psi_from_k(k).unwrap();
        let phi = phi_from_k(k).unwrap();
        prop_assert!((psi.eval(phi.eval(s)) - s).abs() <= 1e-12);
        prop_assert!((phi.eval(psi.eval(s)) - s).abs() <= 1e-12);
        if s > 0.0 && s < 1.0 {
            prop_assert!(psi.eval(s) < s && s < phi.eval(s));
        }
    }

    #[test]
    fn standard_space_non_archimedean(x in unit(), y in unit(), z in unit(), t in 0.01f64..100.0) {
        let space = unit_space();
        let (x, y, z) = (Point::Real(x), Point::Real(y), Point::Real(z));
        let (mxz, nxz) = space.mu_nu(&x, &z, t).unwrap();
        let (mxy, nxy) = space.mu_nu(&x, &y, t).unwrap();
        let (myz, nyz) = space.mu_nu(&y, &z, t).unwrap();
        prop_assert!(mxz >= mxy * myz - TOL);
        prop_assert!(nxz <= TConorm::ProbabilisticSum.eval(nxy, nyz) + TOL);
    }

    #[test]
    fn standard_grades_sum_to_one(x in unit(), y in unit(), t in 0.001f64..1000.0) {
        let (mu, nu) = unit_space().mu_nu(&Point::Real(x), &Point::Real(y), t).unwrap();
        prop_assert!((mu + nu - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mu_non_decreasing_in_t(x in unit(), y in unit(), t in 0.001f64..100.0, dt in 0.0f64..100.0) {
        let space = unit_space();
        let (x, y) = (Point::Real(x), Point::Real(y));
        let (m1, n1) = space.mu_nu(&x, &y, t).unwrap();
        let (m2, n2) = space.mu_nu(&x, &y, t + dt).unwrap();
        prop_assert!(m2 >= m1 - TOL && n2 <= n1 + TOL);
    }

    #[test]
    fn shrunk_witnesses_reproduce_and_are_fixpoints(x in unit(), y in unit(), t in 0.1f64..10.0) {
        // ν inflated by 20%, so μ + ν > 1 for distinct points.
        let space = IFSpace::custom(
            PointDomain::interval(0.0, 1.0).unwrap(),
            "clamped-nu",
            |x, y, t| t / (t + dist(x, y)),
            |x, y, t| (1.2 * dist(x, y) / (t + dist(x, y))).min(1.0),
            TNorm::Product,
            TConorm::ProbabilisticSum,
            TriangleMode::Archimedean,
        );
        let w = Witness { x: Point::Real(x), y: Point::Real(y), z: None, t, s: None, lhs: 0.0, rhs: 0.0 };
        let grid = [t];
        if let Some((lhs, rhs)) = violation_at(&space, AxiomId::I, &w, &grid).unwrap() {
            let v = Violation { axiom: AxiomId::I, witness: Witness { lhs, rhs, ..w } };
            let once = minimize_witness(&space, &v, &grid).unwrap();
            prop_assert!(violation_at(&space, AxiomId::I, &once, &grid).unwrap().is_some());
            let twice = minimize_witness(&space, &Violation { axiom: AxiomId::I, witness: once }, &grid).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}

fn dist(x: &Point, y: &Point) -> f64 {
    match (x, y) {
        (Point::Real(a), Point::Real(b)) => (a - b).abs(),
        _ => unreachable!(),
    }
}
