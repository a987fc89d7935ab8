//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature for real and
//! complex integrands, with semi-infinite and nested two-dimensional
//! wrappers.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Values a quadrature rule can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
}

fn gk21<V: QuadValue>(f: &impl Fn(f64) -> V, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = V::zero();
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).magnitude();
    // |K21 - G10| overestimates the K21 error for smooth integrands.
    (value, err.max(50.0 * f64::EPSILON * value.magnitude()))
}

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

/// Integrates `f` over `[a, b]`, bisecting the segment with the largest
/// error estimate until `error ≤ max(abs_tol, rel_tol·|value|)`.
pub fn integrate<V: QuadValue>(f: impl Fn(f64) -> V, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult<V>> {
    if a == b {
        return Ok(QuadResult {
            value: V::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = gk21(&f, a, b);
    let mut segments = vec![Segment { a, b, value: v, error: e }];
    let mut evaluations = 21;
    loop {
        let total: V = segments.iter().fold(V::zero(), |acc, s| acc + s.value);
        let err: f64 = segments.iter().map(|s| s.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if err <= target {
            return Ok(QuadResult {
                value: total,
                error: err,
                evaluations,
            });
        }
        if segments.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure { tol: target, err });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, s)| {
                if s.error > be {
                    (i, s.error)
                } else {
                    (bi, be)
                }
            });
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            return Err(Error::QuadratureFailure { tol: target, err });
        }
        let (v1, e1) = gk21(&f, seg.a, mid);
        let (v2, e2) = gk21(&f, mid, seg.b);
        evaluations += 42;
        segments.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        segments.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
    }
}

/// `∫_a^∞ f` through `x = a + t/(1 - t)`.
pub fn integrate_to_infinity<V: QuadValue>(f: impl Fn(f64) -> V, a: f64, opts: &QuadOptions) -> Result<QuadResult<V>> {
    integrate(
        |t| {
            let s = 1.0 - t;
            let x = a + t / s;
            let v = f(x);
            if v.magnitude() == 0.0 {
                V::zero()
            } else {
                v * (1.0 / (s * s))
            }
        },
        0.0,
        1.0,
        opts,
    )
}

/// `∫_{x0}^{x1} ∫_{y0(x)}^{y1(x)} f(x, y) dy dx` with the inner integral
/// itself adaptive. The inner tolerance is a tenth of the outer one.
pub fn integrate_2d<V: QuadValue>(
    f: impl Fn(f64, f64) -> V,
    (x0, x1): (f64, f64),
    y_limits: impl Fn(f64) -> (f64, f64),
    opts: &QuadOptions,
) -> Result<QuadResult<V>> {
    let inner_opts = QuadOptions {
        abs_tol: opts.abs_tol * 0.1 / (x1 - x0).abs().max(1.0),
        rel_tol: opts.rel_tol * 0.1,
        max_intervals: opts.max_intervals,
    };
    let failure = std::cell::Cell::new(None);
    let evals = std::cell::Cell::new(0usize);
    let outer = integrate(
        |x| {
            let (y0, y1) = y_limits(x);
            match integrate(|y| f(x, y), y0, y1, &inner_opts) {
                Ok(r) => {
                    evals.set(evals.get() + r.evaluations);
                    r.value
                }
                Err(e) => {
                    failure.set(Some(e));
                    V::zero()
                }
            }
        },
        x0,
        x1,
        opts,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(QuadResult {
        value: outer.value,
        error: outer.error,
        evaluations: evals.get(),
    })
}
