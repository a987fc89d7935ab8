//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any of them fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use densitylab::bergman::{
    bergman_classification, kernel_eval, kernel_inner_quadrature, modular_covolume, stabilizer_order,
    BergmanKernelSpec, FuchsianGroup, UHPoint,
};
use densitylab::cli::{invoke, Overrides};
use densitylab::density::{ExactScalar, KleppnerStatus, SymplecticLattice};
use densitylab::finite_wh::{
    coefficient_operator, expand_operator, report, verify_conjugation, wh_system, FiniteLattice, FiniteWHRep,
    WHCoefficients,
};
use densitylab::frame::{frame_operator, gram, orthonormalize_riesz, parsevalize, FrameSystem};
use densitylab::gabor::{gabor_gram, periodized_ortho_check, sandwich_check, zz_frame_bounds, PlaneLattice, Window};
use densitylab::quadrature::QuadOptions;
use densitylab::rng::{complex_vector, stream, SuiteRng};
use densitylab::ComplexMatrix;

const SEED: u64 = 0x5eed;
const SPECTRAL_TOL: f64 = 1e-10;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

type Check = fn() -> Outcome;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_dev(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

fn to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn identity_rows(n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|i| (0..n).map(|j| c64(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

/// `(M_l T_k g)(t) = e^{2πi lt/N} g(t - k)`, built from scratch.
fn wh_vector(g: &[Complex64], k: usize, l: usize) -> Vec<Complex64> {
    let n = g.len();
    (0..n)
        .map(|t| {
            let phase = 2.0 * PI * ((l * t) % n) as f64 / n as f64;
            Complex64::from_polar(1.0, phase) * g[(t + n - k) % n]
        })
        .collect()
}

/// `Σ_j v_j v_j*` as dense rows.
fn outer_sum(vs: &[Vec<Complex64>], n: usize) -> Vec<Vec<Complex64>> {
    let mut s = vec![vec![c64(0.0, 0.0); n]; n];
    for v in vs {
        for i in 0..n {
            for j in 0..n {
                s[i][j] += v[i] * v[j].conj();
            }
        }
    }
    s
}

fn inner_rows(vs: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    vs.iter()
        .map(|u| vs.iter().map(|v| v.iter().zip(u).map(|(a, b)| a * b.conj()).sum()).collect())
        .collect()
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn random_system(rng: &mut SuiteRng, dim: usize, count: usize) -> FrameSystem {
    FrameSystem::unlabeled(dim, (0..count).map(|_| complex_vector(rng, dim)).collect()).unwrap()
}

fn finite_orthogonality() -> Outcome {
    let start = Instant::now();
    let mut rng = stream(SEED, 1);
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        let rep = FiniteWHRep::new(n).unwrap();
        let lat = FiniteLattice::full(&rep);
        for _ in 0..5 {
            let g = complex_vector(&mut rng, n);
            let norm: f64 = g.iter().map(|z| z.norm_sqr()).sum();
            let want: Vec<Vec<Complex64>> = identity_rows(n)
                .into_iter()
                .map(|r| r.into_iter().map(|x| x * n as f64 * norm).collect())
                .collect();
            let lib = to_rows(&frame_operator(&wh_system(&rep, &lat, &g).unwrap()));
            let vs: Vec<_> = (0..n).flat_map(|k| (0..n).map(move |l| (k, l))).map(|(k, l)| wh_vector(&g, k, l)).collect();
            worst = worst.max(max_dev(&lib, &want)).max(max_dev(&outer_sum(&vs, n), &want));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst < 1e-11 && secs < 10.0, format!("max residual {worst:.2e}, {secs:.2} s"))
}

fn twisted_conjugation() -> Outcome {
    let mut rng = stream(SEED, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let rep = FiniteWHRep::new(n).unwrap();
        let ds = divisors(n);
        let lat = FiniteLattice::new(&rep, ds[rng.gen_range(0..ds.len())], ds[rng.gen_range(0..ds.len())]).unwrap();
        let gamma = lat.points()[rng.gen_range(0..lat.len())];
        let c = WHCoefficients {
            values: complex_vector(&mut rng, lat.len()),
        };
        worst = worst.max(verify_conjugation(&rep, &lat, gamma, &c).unwrap());
    }
    outcome(worst < 1e-12, format!("100 cases, max residual {worst:.2e}"))
}

fn operator_expansion() -> Outcome {
    let mut rng = stream(SEED, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let rep = FiniteWHRep::new(n).unwrap();
        let t = ComplexMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let c = expand_operator(&rep, &t).unwrap();
        // Rebuild Σ c_{kl} M_l T_k independently of the library.
        let mut back = vec![vec![c64(0.0, 0.0); n]; n];
        for (idx, (k, l)) in (0..n).flat_map(|k| (0..n).map(move |l| (k, l))).enumerate() {
            for j in 0..n {
                let mut e = vec![c64(0.0, 0.0); n];
                e[j] = c64(1.0, 0.0);
                let col = wh_vector(&e, k, l);
                for i in 0..n {
                    back[i][j] += c.values[idx] * col[i];
                }
            }
        }
        let lib = coefficient_operator(&rep, &FiniteLattice::full(&rep), &c).unwrap();
        worst = worst.max(lib.max_abs_diff(&t));
        if c.values.len() == n * n {
            worst = worst.max(max_dev(&back, &to_rows(&t)));
        } else {
            worst = f64::INFINITY;
        }
    }
    outcome(worst < 1e-12, format!("50 cases, max round-trip error {worst:.2e}"))
}

fn parsevalization() -> Outcome {
    let mut rng = stream(SEED, 4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let dim = rng.gen_range(1..=16);
        let count = dim + rng.gen_range(0..=dim);
        let p = parsevalize(&random_system(&mut rng, dim, count), SPECTRAL_TOL).unwrap();
        worst = worst.max(max_dev(&outer_sum(p.vectors(), dim), &identity_rows(dim)));
    }
    outcome(worst < 1e-10, format!("50 frames, max |S - I| {worst:.2e}"))
}

fn riesz_orthonormalization() -> Outcome {
    let mut rng = stream(SEED, 5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let dim = rng.gen_range(1..=16);
        let count = rng.gen_range(1..=dim);
        let o = orthonormalize_riesz(&random_system(&mut rng, dim, count), SPECTRAL_TOL).unwrap();
        worst = worst.max(max_dev(&inner_rows(o.vectors()), &identity_rows(count)));
    }
    outcome(worst < 1e-10, format!("50 systems, max |G - I| {worst:.2e}"))
}

fn critical_density() -> Outcome {
    let mut rng = stream(SEED, 6);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=8 {
        let rep = FiniteWHRep::new(n).unwrap();
        for a in divisors(n) {
            let lat = FiniteLattice::new(&rep, a, n / a).unwrap();
            let g = complex_vector(&mut rng, n);
            let p = parsevalize(&wh_system(&rep, &lat, &g).unwrap(), SPECTRAL_TOL).unwrap();
            let vs = p.vectors();
            worst = worst
                .max(max_dev(&outer_sum(vs, n), &identity_rows(n)))
                .max(max_dev(&inner_rows(vs), &identity_rows(vs.len())));
            cases += 1;
        }
    }
    let rep = FiniteWHRep::new(4).unwrap();
    let lat = FiniteLattice::new(&rep, 2, 2).unwrap();
    let s = 0.5f64.sqrt();
    let g = [c64(s, 0.0), c64(s, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
    let r = report(&rep, &lat, &g, SPECTRAL_TOL).unwrap();
    let explicit = max_dev(&to_rows(&gram(&wh_system(&rep, &lat, &g).unwrap())), &identity_rows(4));
    outcome(
        worst < 1e-10 && r.onb && explicit < 1e-15,
        format!("{cases} Parseval systems, max |G - I| {worst:.2e}; N=4 box window |G - I| {explicit:.1e}, onb {}", r.onb),
    )
}

fn zz_sandwich() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (p, q) in [(1, 4), (1, 2), (3, 4)] {
        let start = Instant::now();
        let r = zz_frame_bounds(&Window::Gaussian, p, q, 256, 16).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let vol = p as f64 / q as f64;
        let s = sandwich_check(&r, vol, &Window::Gaussian);
        // Independent restatement of A·vol ≤ ‖g‖² = 1 ≤ B·vol.
        let holds = r.a * vol <= 1.0 + 1e-6 && r.b * vol >= 1.0 - 1e-6 && r.a > 0.0;
        ok &= holds && s.holds && secs < 30.0;
        lines.push(format!("vol {p}/{q}: A {:.4} B {:.4} ({secs:.2} s)", r.a, r.b));
    }
    outcome(ok, lines.join("; "))
}

fn zz_degeneration() -> Outcome {
    let half = zz_frame_bounds(&Window::Gaussian, 1, 2, 256, 16).unwrap();
    let one = zz_frame_bounds(&Window::Gaussian, 1, 1, 256, 16).unwrap();
    let fine = zz_frame_bounds(&Window::Gaussian, 1, 1, 512, 16).unwrap();
    let scale = 1.0 / 0.5;
    let ok = half.a > 0.1 * scale && one.a < 0.05 * one.b && fine.a < one.a;
    outcome(
        ok,
        format!("A(1/2) {:.4} vs scale {scale}; A(1) {:.2e} (grid 256), {:.2e} (grid 512); B(1) {:.4}", half.a, one.a, fine.a, one.b),
    )
}

fn periodized() -> Outcome {
    let opts = QuadOptions::with_tol(1e-10, 1e-10);
    let mut ok = true;
    let mut parts = Vec::new();
    for (w, a, b) in [(Window::Gaussian, 1.0, 1.0), (Window::Gaussian, 2.0, 0.5), (Window::Box, 1.0, 1.0)] {
        let v = periodized_ortho_check(&w, &PlaneLattice::separable(a, b).unwrap(), &w, &opts).unwrap();
        ok &= (v - 1.0).abs() <= 5e-4;
        parts.push(format!("{} diag({a},{b}) {v:.6}", w.name()));
    }
    outcome(ok, parts.join("; "))
}

fn box_gram() -> Outcome {
    let g = gabor_gram(&Window::Box, &PlaneLattice::separable(1.0, 1.0).unwrap(), 2, &QuadOptions::default()).unwrap();
    let n = g.matrix.rows();
    let dev = max_dev(&to_rows(&g.matrix), &identity_rows(n));
    outcome(n == 25 && dev < 1e-10, format!("{n}x{n} Gram, max |G - I| {dev:.2e}"))
}

fn kleppner_grid() -> Outcome {
    let mut values: Vec<(i64, i64)> = Vec::new();
    for d in 1..=3i64 {
        for n in -3..=3i64 {
            let g = num_gcd(n.abs(), d);
            let r = (n / g, d / g);
            if !values.contains(&r) {
                values.push(r);
            }
        }
    }
    let mut bases = 0;
    let mut disagreements = 0;
    for &a in &values {
        for &b in &values {
            for &c in &values {
                for &d in &values {
                    // Skip singular bases: ad - bc = 0.
                    if a.0 * d.0 * b.1 * c.1 == b.0 * c.0 * a.1 * d.1 {
                        continue;
                    }
                    let entries = [a, b, c, d].iter().map(|&(n, m)| ExactScalar::from_ratio(n, m)).collect();
                    let l = SymplecticLattice::from_exact(2, entries).unwrap();
                    bases += 1;
                    if !l.kleppner_check().unwrap().agrees_with_brute(&l.kleppner_brute(10).unwrap(), 10) {
                        disagreements += 1;
                    }
                }
            }
        }
    }
    let irrational = SymplecticLattice::parse("sqrt(2),0;0,1").unwrap().kleppner_check().unwrap();
    let ok = values.len() == 15 && bases >= 2000 && disagreements == 0 && irrational.status == KleppnerStatus::Holds;
    outcome(
        ok,
        format!("{bases} bases, {disagreements} disagreements; diag(sqrt 2, 1) {}", irrational.status),
    )
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        num_gcd(b, a % b)
    }
}

/// Matrices of `SL(2,ℤ)` with entries in `[-r, r]` fixing `i`, modulo `±1`.
fn brute_stabilizer_at_i(r: i64) -> usize {
    let mut count = 0;
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    // (ai + b)/(ci + d) = i  ⇔  a = d and b = -c.
                    if a * d - b * c == 1 && a == d && b == -c {
                        count += 1;
                    }
                }
            }
        }
    }
    count / 2
}

fn modular_group() -> Outcome {
    let cov = modular_covolume(&QuadOptions::with_tol(1e-12, 1e-12)).unwrap().value;
    let g = FuchsianGroup::psl2z();
    let w = UHPoint::parse("2i").unwrap();
    let mut invariants = Vec::new();
    for alpha in [2.0, 7.0, 13.0] {
        let v = bergman_classification(alpha, &g, &w, 4).unwrap();
        invariants.push(v.generic.invariant.exact.map(|x| x.to_string()).unwrap_or_else(|| "none".into()));
    }
    let stab = stabilizer_order(&g, &UHPoint::parse("i").unwrap(), 4);
    let brute = brute_stabilizer_at_i(3);
    let ok = (cov - PI / 3.0).abs() < 1e-6 && invariants == ["1/12", "1/2", "1"] && stab == 2 && brute == 2;
    outcome(
        ok,
        format!("covolume {cov:.10} (pi/3 {:.10}); invariants {invariants:?}; stabilizer at i {stab} (brute {brute})", PI / 3.0),
    )
}

fn reproducing() -> Outcome {
    let mut rng = stream(SEED, 13);
    let opts = QuadOptions::with_tol(1e-8, 1e-8);
    let mut worst: f64 = 0.0;
    for (alpha, w) in [(2.0, "i"), (3.5, "0.5+2i")] {
        let wp = BergmanKernelSpec {
            alpha,
            w: UHPoint::parse(w).unwrap(),
        };
        let ratios: Vec<Complex64> = (0..10)
            .map(|_| {
                let z = UHPoint::parse(&format!("{}+{}i", rng.gen_range(-1.5..1.5), rng.gen_range(0.4..2.5))).unwrap();
                let kz = BergmanKernelSpec { alpha, w: z };
                kernel_inner_quadrature(&wp, &kz, &opts).unwrap() / kernel_eval(&wp, &z)
            })
            .collect();
        let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
        worst = worst.max(ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max));
    }
    outcome(worst < 1e-5, format!("2 kernels x 10 points, ratio spread {worst:.2e}"))
}

fn determinism() -> Outcome {
    let run = || {
        let over = Overrides {
            command: Some("suite".into()),
            seed: Some(SEED),
            ..Overrides::default()
        };
        invoke(None, over, false)
    };
    let (a, b) = (run(), run());
    let bin = |threads: &str| {
        std::process::Command::new(env!("CARGO_BIN_EXE_densitylab"))
            .args(["suite", "--seed", &SEED.to_string()])
            .env("DENSITYLAB_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let (c, d) = (bin("1"), bin("4"));
    let same = a.exit_code == 0 && a.output.is_some() && a.output == b.output;
    let same_bin = !c.is_empty() && c == d && a.output.as_deref().map(str::as_bytes) == Some(&c[..]);
    outcome(
        same && same_bin,
        format!("in-process identical {same}; binary identical across thread counts {same_bin}"),
    )
}

fn main() {
    let checks: [(&str, Check); 14] = [
        ("finite orthogonality", finite_orthogonality),
        ("twisted conjugation", twisted_conjugation),
        ("operator expansion", operator_expansion),
        ("parsevalize", parsevalization),
        ("orthonormalize riesz", riesz_orthonormalization),
        ("critical density onb", critical_density),
        ("zz sandwich", zz_sandwich),
        ("zz degeneration", zz_degeneration),
        ("periodized orthogonality", periodized),
        ("box gram", box_gram),
        ("kleppner oracle", kleppner_grid),
        ("modular group", modular_group),
        ("reproducing kernel", reproducing),
        ("determinism", determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.passed {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {} ({})", i + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", checks.len());
        std::process::exit(1);
    }
}
