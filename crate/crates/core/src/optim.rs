//! Derivative-free minimization (Nelder–Mead).

use crate::math::abs;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop when the simplex's function values agree to this relative spread.
    pub f_tol: f64,
    /// ...and its vertices agree to this absolute spread.
    pub x_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iter: 2_000,
            f_tol: 1e-12,
            x_tol: 1e-9,
        }
    }
}

/// Standard Nelder–Mead with reflection 1, expansion 2, contraction ½ and
/// shrink ½. Non-finite objective values are treated as `+∞`, which lets the
/// caller express bounds by returning NaN or ∞ outside the feasible box.
pub fn nelder_mead<const N: usize, F>(
    f: F,
    start: [f64; N],
    step: [f64; N],
    opts: NelderMeadOptions,
) -> Minimum<N>
where
    F: Fn(&[f64; N]) -> f64,
{
    let eval = |x: &[f64; N]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    // N + 1 vertices; const generics cannot express N + 1 directly.
    let mut simplex: alloc::vec::Vec<([f64; N], f64)> = alloc::vec::Vec::with_capacity(N + 1);
    simplex.push((start, eval(&start)));
    for i in 0..N {
        let mut v = start;
        v[i] += step[i];
        simplex.push((v, eval(&v)));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[N].1;
        let f_spread = abs(worst - best);
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(simplex[0].0.iter()).map(|(a, b)| abs(a - b)))
            .fold(0.0, f64::max);
        if f_spread <= opts.f_tol * (abs(best) + 1e-300) && x_spread <= opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = [0.0; N];
        for (v, _) in &simplex[..N] {
            for j in 0..N {
                centroid[j] += v[j] / N as f64;
            }
        }
        let along = |t: f64| {
            let mut p = [0.0; N];
            for j in 0..N {
                p[j] = centroid[j] + t * (simplex[N].0[j] - centroid[j]);
            }
            p
        };

        let xr = along(-1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = eval(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[N].1 {
            let xc = along(-0.5);
            (xc, eval(&xc))
        } else {
            let xc = along(0.5);
            (xc, eval(&xc))
        };
        if fc < fr.min(simplex[N].1) {
            simplex[N] = (xc, fc);
            continue;
        }
        let anchor = simplex[0].0;
        for (v, fv) in simplex[1..].iter_mut() {
            for j in 0..N {
                v[j] = anchor[j] + 0.5 * (v[j] - anchor[j]);
            }
            *fv = eval(v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Minimum {
        x: simplex[0].0,
        value: simplex[0].1,
        iterations,
        converged,
    }
}
