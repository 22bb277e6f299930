//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! Integrands are complex-valued; real integrands go through
//! [`integrate_real`]. The interval with the largest error estimate is
//! bisected until the summed estimate meets `max(abs_tol, rel_tol * |I|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

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

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of intervals kept at any time.
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F>(f: &mut F, lo: f64, hi: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "non-finite integrand on [{lo}, {hi}]"
        )));
    }
    Ok(Segment {
        lo,
        hi,
        value,
        error,
    })
}

/// Integrates `f` over the ordered `breakpoints` (at least two, strictly
/// increasing). Supplying breakpoints where the integrand changes scale
/// saves bisection work.
pub fn integrate_with_breaks<F>(
    mut f: F,
    breakpoints: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::QuadratureFailure(
            "breakpoints must be strictly increasing".into(),
        ));
    }
    let mut heap = BinaryHeap::with_capacity(breakpoints.len() * 4);
    let mut evaluations = 0usize;
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    for w in breakpoints.windows(2) {
        let seg = kronrod15(&mut f, w[0], w[1])?;
        evaluations += 15;
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure(format!(
                "tolerance {target:.3e} not met with {} intervals (error estimate {total_err:.3e})",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            return Err(Error::QuadratureFailure(format!(
                "interval [{}, {}] cannot be bisected further (error estimate {total_err:.3e})",
                worst.lo, worst.hi
            )));
        }
        let left = kronrod15(&mut f, worst.lo, mid)?;
        let right = kronrod15(&mut f, mid, worst.hi)?;
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    let (value, abs_error) = heap
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(QuadResult {
        value,
        abs_error,
        evaluations,
        intervals: heap.len(),
    })
}

pub fn integrate<F>(f: F, lo: f64, hi: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    integrate_with_breaks(f, &[lo, hi], opts)
}

/// Real-valued convenience wrapper; the result's imaginary part is zero.
pub fn integrate_real<F>(mut f: F, breakpoints: &[f64], opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_with_breaks(|x| f(x).map(|v| Complex64::new(v, 0.0)), breakpoints, opts)
}

/// `n + 1` breakpoints spaced geometrically between `lo > 0` and `hi`,
/// preceded by 0 when `include_zero` is set.
pub fn geometric_breaks(lo: f64, hi: f64, n: usize, include_zero: bool) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 2);
    if include_zero {
        out.push(0.0);
    }
    let ratio = (hi / lo).powf(1.0 / n as f64);
    let mut x = lo;
    for _ in 0..n {
        out.push(x);
        x *= ratio;
    }
    out.push(hi);
    out
}
