use num_complex::Complex64;
use rand::Rng;

use densitylab::bergman::{
    hyperbolic_distance, j_cocycle, kernel_inner_closed, kernel_inner_quadrature, kernel_orbit_gram, modular_covolume,
    modular_covolume_half, moebius_apply, normalized_kernel_gram, BergmanKernelSpec, FuchsianGroup, GramEntries,
    MoebiusMap, UHPoint,
};
use densitylab::quadrature::QuadOptions;
use densitylab::rng::{stream, SuiteRng};

fn pt(s: &str) -> UHPoint {
    UHPoint::parse(s).unwrap()
}

fn random_point(rng: &mut SuiteRng) -> UHPoint {
    UHPoint::from_xy(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..3.0)).unwrap()
}

fn random_word(rng: &mut SuiteRng, len: usize) -> MoebiusMap {
    (0..len).fold(MoebiusMap::identity(), |m, _| {
        let step = match rng.gen_range(0..3) {
            0 => MoebiusMap::s(),
            1 => MoebiusMap::t(),
            _ => MoebiusMap::t().inverse(),
        };
        m.compose(&step)
    })
}

#[test]
fn group_law_on_random_words() {
    let mut rng = stream(5, 1);
    for _ in 0..50 {
        let (a, b) = (random_word(&mut rng, 6), random_word(&mut rng, 6));
        let z = random_point(&mut rng);
        let lhs = moebius_apply(&a.compose(&b), &z);
        let rhs = moebius_apply(&a, &moebius_apply(&b, &z));
        assert!((lhs.z - rhs.z).norm() < 1e-12 * (1.0 + lhs.z.norm()));
        assert!((a.compose(&b).det() - 1.0).abs() < 1e-12);
    }
}

/// `j(m₁m₂, z)^α / (j(m₁, m₂z)^α j(m₂, z)^α)` is unimodular and its phase
/// does not depend on `z`.
#[test]
fn cocycle_phase_is_z_independent() {
    let mut rng = stream(5, 2);
    for alpha in [1.5, 2.0, 3.7, 12.0] {
        for _ in 0..5 {
            let (m1, m2) = (random_word(&mut rng, 4), random_word(&mut rng, 4));
            let ratios: Vec<Complex64> = (0..20)
                .map(|_| {
                    let z = random_point(&mut rng);
                    j_cocycle(&m1.compose(&m2), &z, alpha)
                        / (j_cocycle(&m1, &moebius_apply(&m2, &z), alpha) * j_cocycle(&m2, &z, alpha))
                })
                .collect();
            for r in &ratios {
                assert!((r.norm() - 1.0).abs() < 1e-10);
            }
            let spread = ratios.iter().map(|r| (r - ratios[0]).norm()).fold(0.0, f64::max);
            assert!(spread < 1e-10, "alpha {alpha}: spread {spread}");
        }
    }
}

#[test]
fn covolume_refinement_converges() {
    let a = modular_covolume(&QuadOptions::with_tol(1e-9, 1e-9)).unwrap().value;
    let b = modular_covolume(&QuadOptions::with_tol(1e-11, 1e-11)).unwrap().value;
    assert!((a - b).abs() < 1e-7);
    assert!((b - std::f64::consts::PI / 3.0).abs() < 1e-9);
    let half = modular_covolume_half(&QuadOptions::default()).unwrap().value;
    assert!((half - std::f64::consts::PI / 6.0).abs() < 1e-6);
}

#[test]
fn closed_form_gram_matches_quadrature() {
    let points = [pt("2i"), pt("0.5+i"), pt("-1+3i"), pt("0.3+0.6i")];
    let opts = QuadOptions::with_tol(1e-9, 1e-9);
    for alpha in [2.0, 4.5] {
        let closed = normalized_kernel_gram(alpha, &points, GramEntries::ClosedForm).unwrap();
        let quad = normalized_kernel_gram(alpha, &points, GramEntries::Quadrature(opts)).unwrap();
        let dev = closed.matrix.max_abs_diff(&quad.matrix);
        assert!(dev < 1e-6, "alpha {alpha}: {dev}");
        for a in &points {
            for b in &points {
                let (sa, sb) = (BergmanKernelSpec { alpha, w: *a }, BergmanKernelSpec { alpha, w: *b });
                let q = kernel_inner_quadrature(&sa, &sb, &opts).unwrap();
                let c = kernel_inner_closed(&sa, &sb);
                assert!((q - c).norm() < 1e-6 * c.norm().max(1e-3));
            }
        }
    }
}

#[test]
fn kernel_grams_are_positive_semidefinite() {
    let g = FuchsianGroup::psl2z();
    for alpha in [2.0, 6.0, 13.0] {
        let k = kernel_orbit_gram(alpha, &g, &pt("2i"), 2, GramEntries::ClosedForm).unwrap();
        assert!(k.spectrum.eigenvalues[0] >= -1e-8);
    }
    let k = kernel_orbit_gram(3.0, &g, &pt("2i"), 1, GramEntries::Quadrature(QuadOptions::with_tol(1e-8, 1e-8))).unwrap();
    assert!(k.spectrum.eigenvalues[0] >= -1e-8);
    assert_eq!(kernel_orbit_gram(3.0, &g, &pt("2i"), 0, GramEntries::ClosedForm).unwrap().matrix.rows(), 1);
}

#[test]
fn far_kernels_decouple() {
    let (a, b) = (pt("i"), pt("1e5i"));
    assert!(hyperbolic_distance(&a, &b) > 10.0);
    let g = normalized_kernel_gram(4.0, &[a, b], GramEntries::ClosedForm).unwrap();
    assert!(g.matrix[(0, 1)].norm() < 1e-3);
    let q = normalized_kernel_gram(4.0, &[a, b], GramEntries::Quadrature(QuadOptions::with_tol(1e-10, 1e-8))).unwrap();
    assert!(q.matrix[(0, 1)].norm() < 1e-3);
}

/// Recorded only: the smallest eigenvalue of a fixed orbit section at two
/// weights.
#[test]
fn lambda_min_trend() {
    let g = FuchsianGroup::psl2z();
    let low = kernel_orbit_gram(6.0, &g, &pt("2i"), 2, GramEntries::ClosedForm).unwrap();
    let high = kernel_orbit_gram(20.0, &g, &pt("2i"), 2, GramEntries::ClosedForm).unwrap();
    let (l6, l20) = (low.spectrum.eigenvalues[0], high.spectrum.eigenvalues[0]);
    println!("lambda_min alpha=6: {l6:.6e}, alpha=20: {l20:.6e}, trend up: {}", l20 > l6);
    assert!(l6 >= -1e-8 && l20 >= -1e-8);
}
