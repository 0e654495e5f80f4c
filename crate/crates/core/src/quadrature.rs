//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub epsabs: T,
    pub epsrel: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadOptions<T> {
    fn default() -> Self {
        Self {
            epsabs: T::zero(),
            epsrel: T::lit(1e-10),
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

/// One 15-point Kronrod rule on `[a, b]`, with the embedded 7-point Gauss
/// difference as the error estimate.
pub fn gauss_kronrod_15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = (b - a) / T::lit(2.0);
    let centre = (a + b) / T::lit(2.0);
    let fc = f(centre);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * T::lit(x);
        let pair = f(centre - dx) + f(centre + dx);
        kronrod = kronrod + pair * T::lit(w);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrate `f` over the union of consecutive `breakpoints` intervals.
///
/// The breakpoints seed the initial partition; the interval with the
/// largest error estimate is bisected until
/// `error <= max(epsabs, epsrel * |value|)`.
pub fn integrate_with_breaks<T: Real, F: Fn(T) -> T>(
    f: F,
    breakpoints: &[T],
    opts: QuadOptions<T>,
) -> Result<QuadResult<T>> {
    if breakpoints.len() < 2 {
        return Ok(QuadResult {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }
    let mut segs: Vec<Segment<T>> = breakpoints
        .windows(2)
        .filter(|w| w[0] != w[1])
        .map(|w| {
            let (value, error) = gauss_kronrod_15(&f, w[0], w[1]);
            Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            }
        })
        .collect();

    loop {
        let value = segs.iter().fold(T::zero(), |s, g| s + g.value);
        let error = segs.iter().fold(T::zero(), |s, g| s + g.error);
        let target = opts.epsabs.max(opts.epsrel * value.abs());
        if error <= target {
            return Ok(QuadResult {
                value,
                error,
                intervals: segs.len(),
            });
        }
        if segs.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure {
                estimate: value.to_f64_lossy(),
                error: error.to_f64_lossy(),
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, g)| {
                if g.error > be {
                    (i, g.error)
                } else {
                    (bi, be)
                }
            });
        let seg = segs.swap_remove(worst);
        let mid = (seg.a + seg.b) / T::lit(2.0);
        if mid <= seg.a || mid >= seg.b {
            // Interval can no longer be split in this precision.
            return Err(Error::QuadratureFailure {
                estimate: value.to_f64_lossy(),
                error: error.to_f64_lossy(),
            });
        }
        for (a, b) in [(seg.a, mid), (mid, seg.b)] {
            let (value, error) = gauss_kronrod_15(&f, a, b);
            segs.push(Segment { a, b, value, error });
        }
    }
}

pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, opts: QuadOptions<T>) -> Result<QuadResult<T>> {
    integrate_with_breaks(f, &[a, b], opts)
}
