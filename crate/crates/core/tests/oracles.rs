//! Library results against brute-force computations that share no code with it.

use ifm_core::contraction::{phi_from_k, psi_from_k, SelfMap};
use ifm_core::norm::{TConorm, TNorm};
use ifm_core::solver::{detect_m_cauchy, edelstein_solve, IterationTrace, SolverConfig, StopReason};
use ifm_core::space::{standard_space, IFSpace, Point, PointDomain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn line(n: usize) -> IFSpace {
    standard_space(PointDomain::line(n).unwrap(), TNorm::Product, TConorm::ProbabilisticSum)
}

/// All maps `{0..n} -> {0..n}` in lexicographic order.
fn all_maps(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(n as u32)).map(move |mut code| {
        let mut images = vec![0; n];
        for slot in images.iter_mut() {
            *slot = code % n;
            code /= n;
        }
        images
    })
}

/// Length of the cycle the orbit of `seed` falls into.
fn naive_cycle_length(f: &[usize], seed: usize) -> usize {
    let mut x = seed;
    for _ in 0..f.len() {
        x = f[x];
    }
    let start = x;
    let mut len = 1;
    x = f[x];
    while x != start {
        x = f[x];
        len += 1;
    }
    len
}

#[test]
fn edelstein_matches_naive_orbits_on_all_five_point_maps() {
    let space = line(5);
    let config = SolverConfig::default();
    for f in all_maps(5) {
        let report = edelstein_solve(&space, &SelfMap::Table(f.clone()), &config).unwrap();
        let fixed: Vec<usize> = (0..5).filter(|&i| f[i] == i).collect();
        assert_eq!(report.fixed_point.is_some(), !fixed.is_empty(), "{f:?}");
        assert_eq!(report.unique, fixed.len() == 1 && (0..5).all(|s| naive_cycle_length(&f, s) == 1), "{f:?}");
        for (seed, outcome) in report.seeds.iter().enumerate() {
            assert_eq!(outcome.cycle_length, Some(naive_cycle_length(&f, seed)), "{f:?} from {seed}");
            if let Some(Point::Index(limit)) = outcome.limit {
                assert_eq!(f[limit], limit);
            }
        }
    }
}

#[test]
fn edelstein_cycle_lengths_on_six_point_permutations() {
    let space = line(6);
    let config = SolverConfig::default();
    for f in all_maps(6).filter(|f| {
        let mut seen = [false; 6];
        f.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
    }) {
        let report = edelstein_solve(&space, &SelfMap::Table(f.clone()), &config).unwrap();
        for (seed, outcome) in report.seeds.iter().enumerate() {
            assert_eq!(outcome.cycle_length, Some(naive_cycle_length(&f, seed)));
            assert_eq!(outcome.stop_reason == StopReason::Converged, f[seed] == seed);
        }
    }
}

/// On a finite line every distinct pair has `μ ≤ t / (t + 1/(n-1))`, so at a
/// small ε a window is M-Cauchy exactly when it is constant.
#[test]
fn m_cauchy_detector_matches_constancy_on_finite_domains() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=10 {
        let space = line(n);
        for _ in 0..200 {
            let len = rng.random_range(3..12);
            let points: Vec<Point> = (0..len).map(|_| Point::Index(rng.random_range(0..n))).collect();
            let trace = IterationTrace::from_points(&space, points.clone(), vec![1.0], StopReason::MaxIter).unwrap();
            for window in 1..=len {
                let tail = &points[len - window..];
                let constant = tail.iter().all(|p| *p == tail[0]);
                assert_eq!(detect_m_cauchy(&space, &trace, 1e-6, 1.0, window).unwrap(), constant, "{points:?} w={window}");
            }
        }
    }
}

/// The ν inequality in the form `1/ν_f - 1 ≤ (1/k)(1/ν - 1)` admits pairs
/// with `φ(ν_f) > ν`; the reversed form is the one the conversion needs.
#[test]
fn literal_nu_direction_breaks_the_conversion() {
    let k = 0.5;
    let phi = phi_from_k(k).unwrap();
    let (nu, nu_f) = (0.2, 0.9);
    assert!(1.0 / nu_f - 1.0 <= (1.0 / nu - 1.0) / k);
    assert!(phi.eval(nu_f) > nu);
}

#[test]
fn closed_forms_of_the_control_pair() {
    for k in [0.1, 0.5, 0.9] {
        let psi = psi_from_k(k).unwrap();
        let phi = phi_from_k(k).unwrap();
        for j in 0..=100 {
            let s = j as f64 / 100.0;
            let expect_psi = k * s / (1.0 - (1.0 - k) * s);
            let expect_phi = s / ((1.0 - k) * s + k);
            assert!((psi.eval(s) - expect_psi).abs() <= 1e-15);
            assert!((phi.eval(s) - expect_phi).abs() <= 1e-15);
        }
    }
}
