//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol·|I|)` or the panel cap is reached.
//! Semi-infinite ranges are mapped onto `[0, 1)` with `u = a + t/(1 − t)`;
//! the Kronrod nodes never touch the endpoints, so integrable endpoint
//! singularities are fine.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::math::{abs, pow};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
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

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-9,
            abs_tol: 1e-300,
            max_panels: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..3 {
        let jj = 2 * j + 1;
        let dx = half * XGK[jj];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jj] = f1;
        fv2[jj] = f2;
        gauss += WG[j] * (f1 + f2);
        kronrod += WGK[jj] * (f1 + f2);
    }
    for j in 0..4 {
        let jj = 2 * j;
        let dx = half * XGK[jj];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jj] = f1;
        fv2[jj] = f2;
        kronrod += WGK[jj] * (f1 + f2);
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * abs(fc - mean);
    for j in 0..7 {
        asc += WGK[j] * (abs(fv1[j] - mean) + abs(fv2[j] - mean));
    }
    let asc = asc * abs(half);
    let mut err = abs((kronrod - gauss) * half);
    if asc != 0.0 && err != 0.0 {
        let scale = pow(200.0 * err / asc, 1.5);
        err = if scale < 1.0 { asc * scale } else { asc };
    }
    let value = kronrod * half;
    let floor = 50.0 * f64::EPSILON * abs(value);
    Panel {
        a,
        b,
        value,
        error: err.max(floor),
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Integral {
    if a == b {
        return Integral {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
            converged: true,
        };
    }
    let first = kronrod15(&f, a, b);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut converged = false;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * abs(total));
        if total_err <= target {
            converged = true;
            break;
        }
        if heap.len() >= opts.max_panels {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b)) {
            // panel cannot be split further in f64
            heap.push(worst);
            break;
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed drift from the running updates.
    let mut value = 0.0;
    let mut err = 0.0;
    let panels = heap.len();
    for p in heap.iter() {
        value += p.value;
        err += p.error;
    }
    Integral {
        value,
        abs_error: err,
        panels,
        converged: converged || err <= opts.abs_tol.max(opts.rel_tol * abs(value)),
    }
}

/// Integrates `f` over `[a, ∞)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, opts: QuadOptions) -> Integral {
    let g = |t: f64| {
        let one_minus = 1.0 - t;
        let u = a + t / one_minus;
        let fu = f(u);
        if fu == 0.0 {
            0.0
        } else {
            fu / (one_minus * one_minus)
        }
    };
    integrate(g, 0.0, 1.0, opts)
}
