//! Energy through the Coulson integral with closed-form kernels.
//!
//! For a dumbbell on `n` vertices the energy equals
//! `(1/pi) * integral_0^inf t^{-2} log K(t; alpha, beta) dt`, where
//! `K = |t^n P(i/t)|^2` has a closed form per parity case, built from
//! exact matching-count tables. Writing
//! `t^n P(i/t) = i^n (E(t) - i O(t))` with `E` even and `O` odd in `t`
//! covers all three cases:
//!
//! * even-even: `E = sum_k c_k(alpha, beta) t^{2k}`, `O = 0`;
//! * odd-odd:   `E = Z - alpha beta W`, `O = alpha X + beta Y`;
//! * mixed:     `E = Z - 2 alpha X`, `O = 2 beta (Y - 2 alpha W)`.
//!
//! The integral is split at `t = 1`. On `[1, inf)` the substitution
//! `t = 1/u` gives `integral_0^1 log K(1/u) du`, and factoring
//! `K(1/u) = u^{-2n} S(u)` with the reversed polynomial
//! `S(u) = (u^n E(1/u))^2 + (u^n O(1/u))^2` turns it into
//! `2n + integral_0^1 log S(u) du`. Both halves are proper integrals of
//! polynomial evaluations, stable at any order.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::charpoly::even_even_coeffs;
use crate::graphs::{DumbbellParams, ParityCase};
use crate::matchpoly::{dumbbell_component_polys, mrst_polys, MatchingCounts};
use crate::{Error, Result};

/// Mixed-case matching-count tables, densely indexed by `k` with the
/// parity shifts already applied: `whole[k] = m(D, k)`,
/// `minus_cr[k] = m(D - C_r, k - r/2)`,
/// `minus_cs[k] = m(D - C_s, k - (s-1)/2)`,
/// `path_interior[k] = m(P_{ell-1}, k - (r+s-1)/2)`.
#[derive(Debug, Clone)]
pub struct MixedCoeffs {
    pub whole: Vec<BigInt>,
    pub minus_cr: Vec<BigInt>,
    pub minus_cs: Vec<BigInt>,
    pub path_interior: Vec<BigInt>,
}

/// Build the mixed-case tables; requires the canonical orientation
/// (`r` even, `s` odd).
pub fn mixed_coeffs(params: &DumbbellParams) -> Result<MixedCoeffs> {
    let (r, s) = (params.r(), params.s());
    if r % 2 != 0 || s % 2 != 1 {
        return Err(Error::WrongParity {
            expected: "mixed (even r, odd s)",
            r,
            s,
        });
    }
    let (ell, n) = (params.ell(), params.n());
    let comp = dumbbell_component_polys(params);
    let table = |poly: &crate::matchpoly::IntPoly, verts: usize, shift: usize| {
        let counts = MatchingCounts::from_matching_poly(poly, verts);
        let mut out = vec![BigInt::zero(); shift];
        out.extend(counts.as_slice().iter().cloned());
        out
    };
    Ok(MixedCoeffs {
        whole: table(&comp.whole, n, 0),
        minus_cr: table(&comp.minus_cr, n - r, r / 2),
        minus_cs: table(&comp.minus_cs, n - s, (s - 1) / 2),
        path_interior: table(&comp.path_interior, ell - 1, (r + s - 1) / 2),
    })
}

/// Default absolute tolerance for [`coulson_energy`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Floor applied to kernel values before taking the logarithm. The
/// kernel is strictly positive for `t > 0`, but the reversed polynomial
/// may vanish at isolated quadrature-adjacent points when the adjacency
/// matrix is singular; the clamp keeps the integrable log singularity
/// finite without moving the result beyond tolerance.
const LOG_CLAMP: f64 = 1e-300;

#[derive(Debug, Clone)]
enum KernelForm {
    /// `c_k` quadruples of the bipartite case.
    EvenEven(Vec<[f64; 4]>),
    /// Dense coefficient tables: `z`, `w` over `t^{2k}`; `x`, `y` over
    /// `t^{2k+1}`.
    OddOdd {
        z: Vec<f64>,
        w: Vec<f64>,
        x: Vec<f64>,
        y: Vec<f64>,
    },
    /// Dense tables: `z`, `x` over `t^{2k}`; `y`, `w` over `t^{2k+1}`.
    Mixed {
        z: Vec<f64>,
        x: Vec<f64>,
        y: Vec<f64>,
        w: Vec<f64>,
    },
}

/// Closed-form Coulson kernel of one dumbbell, any parity case.
///
/// Construction converts the exact integer tables to floats once; all
/// matching counts at the supported orders are below `2^53`, so the
/// conversion is exact.
#[derive(Debug, Clone)]
pub struct Kernel {
    params: DumbbellParams,
    swapped: bool,
    form: KernelForm,
}

impl Kernel {
    /// Build the kernel for `params` (canonicalizing the mixed case).
    pub fn for_params(params: &DumbbellParams) -> Kernel {
        let (canon, swapped) = params.canonical();
        let (r, s) = (canon.r(), canon.s());
        let form = match canon.case() {
            ParityCase::EvenEven => {
                let coeffs = even_even_coeffs(&canon).expect("parity checked");
                KernelForm::EvenEven(coeffs.quads_f64())
            }
            ParityCase::OddOdd => {
                let polys = mrst_polys(&canon).expect("parity checked");
                let z = polys.whole.to_f64_coeffs();
                let table = |poly: &crate::matchpoly::IntPoly, shift: usize, scale: f64| {
                    let mut out = vec![0.0; shift];
                    out.extend(poly.to_f64_coeffs().iter().map(|c| scale * c));
                    out
                };
                let w = table(&polys.path_interior, (r + s) / 2, 4.0);
                let x = table(&polys.minus_cr, (r - 1) / 2, 2.0);
                let y = table(&polys.minus_cs, (s - 1) / 2, 2.0);
                KernelForm::OddOdd { z, w, x, y }
            }
            ParityCase::Mixed => {
                let mc = mixed_coeffs(&canon).expect("parity checked");
                let to_f64 = |v: &[BigInt]| -> Vec<f64> {
                    v.iter()
                        .map(|c| c.to_f64().expect("count fits f64"))
                        .collect()
                };
                KernelForm::Mixed {
                    z: to_f64(&mc.whole),
                    x: to_f64(&mc.minus_cr),
                    y: to_f64(&mc.minus_cs),
                    w: to_f64(&mc.path_interior),
                }
            }
        };
        Kernel {
            params: canon,
            swapped,
            form,
        }
    }

    /// Canonicalized parameters the kernel was built for.
    pub fn params(&self) -> &DumbbellParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn case(&self) -> ParityCase {
        self.params.case()
    }

    /// Whether `for_params` swapped the cycle order (mixed case input
    /// with the odd cycle first).
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    /// Fix `(alpha, beta)` and precompute the coefficient arrays used by
    /// repeated kernel evaluations.
    pub fn at(&self, alpha: f64, beta: f64) -> KernelEval {
        let n = self.n();
        let (e_half, o_half) = match &self.form {
            KernelForm::EvenEven(quads) => {
                let e = quads
                    .iter()
                    .map(|q| {
                        q[0] - 2.0 * alpha * q[1] - 2.0 * beta * q[2] + 4.0 * alpha * beta * q[3]
                    })
                    .collect();
                (e, Vec::new())
            }
            KernelForm::OddOdd { z, w, x, y } => {
                let len = z.len().max(w.len());
                let e = (0..len)
                    .map(|k| {
                        z.get(k).copied().unwrap_or(0.0)
                            - alpha * beta * w.get(k).copied().unwrap_or(0.0)
                    })
                    .collect();
                let len = x.len().max(y.len());
                let o = (0..len)
                    .map(|k| {
                        alpha * x.get(k).copied().unwrap_or(0.0)
                            + beta * y.get(k).copied().unwrap_or(0.0)
                    })
                    .collect();
                (e, o)
            }
            KernelForm::Mixed { z, x, y, w } => {
                let len = z.len().max(x.len());
                let e = (0..len)
                    .map(|k| {
                        z.get(k).copied().unwrap_or(0.0)
                            - 2.0 * alpha * x.get(k).copied().unwrap_or(0.0)
                    })
                    .collect();
                let len = y.len().max(w.len());
                let o = (0..len)
                    .map(|k| {
                        2.0 * beta
                            * (y.get(k).copied().unwrap_or(0.0)
                                - 2.0 * alpha * w.get(k).copied().unwrap_or(0.0))
                    })
                    .collect();
                (e, o)
            }
        };
        KernelEval::new(n, e_half, o_half)
    }

    /// Evaluate `K(t; alpha, beta)` once.
    pub fn eval(&self, t: f64, alpha: f64, beta: f64) -> f64 {
        self.at(alpha, beta).k_at(t)
    }

    /// Odd-odd building blocks `(Z, W, X, Y)` at `t`, when applicable.
    pub fn odd_odd_parts(&self, t: f64) -> Option<(f64, f64, f64, f64)> {
        match &self.form {
            KernelForm::OddOdd { z, w, x, y } => {
                let u = t * t;
                Some((
                    horner(z, u),
                    horner(w, u),
                    t * horner(x, u),
                    t * horner(y, u),
                ))
            }
            _ => None,
        }
    }

    /// Mixed-case building blocks `(Z, X, Y, W)` at `t`, when applicable.
    pub fn mixed_parts(&self, t: f64) -> Option<(f64, f64, f64, f64)> {
        match &self.form {
            KernelForm::Mixed { z, x, y, w } => {
                let u = t * t;
                Some((
                    horner(z, u),
                    horner(x, u),
                    t * horner(y, u),
                    t * horner(w, u),
                ))
            }
            _ => None,
        }
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Kernel with `(alpha, beta)` fixed: `K(t) = E(t)^2 + O(t)^2` with the
/// even part stored over `t^{2k}` and the odd part over `t^{2k+1}`,
/// plus the reversed arrays for the large-`t` half of the integral.
#[derive(Debug, Clone)]
pub struct KernelEval {
    n: usize,
    e_half: Vec<f64>,
    o_half: Vec<f64>,
    rev_a: Vec<f64>,
    rev_b: Vec<f64>,
}

impl KernelEval {
    fn new(n: usize, e_half: Vec<f64>, o_half: Vec<f64>) -> Self {
        let mut rev_a = vec![0.0; n + 1];
        for (k, &e) in e_half.iter().enumerate() {
            debug_assert!(2 * k <= n, "even part exceeds degree n");
            rev_a[n - 2 * k] = e;
        }
        let mut rev_b = vec![0.0; n + 1];
        for (k, &o) in o_half.iter().enumerate() {
            debug_assert!(2 * k < n || o == 0.0, "odd part exceeds degree n");
            if 2 * k < n {
                rev_b[n - 2 * k - 1] = o;
            }
        }
        KernelEval {
            n,
            e_half,
            o_half,
            rev_a,
            rev_b,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `K(t) = E(t)^2 + O(t)^2`. Safe for `t` up to moderate size; for
    /// the `t -> inf` regime use [`Self::k_reversed_at`].
    pub fn k_at(&self, t: f64) -> f64 {
        let u = t * t;
        let e = horner(&self.e_half, u);
        let o = t * horner(&self.o_half, u);
        e * e + o * o
    }

    /// The reversed kernel `S(u) = u^{2n} K(1/u)`, a polynomial in `u`
    /// evaluated directly (no overflow for small `u`).
    pub fn k_reversed_at(&self, u: f64) -> f64 {
        let a = horner(&self.rev_a, u);
        let b = horner(&self.rev_b, u);
        a * a + b * b
    }
}

/// Result of one Coulson-integral evaluation.
#[derive(Debug, Clone, Copy)]
pub struct CoulsonEnergy {
    /// The energy value.
    pub value: f64,
    /// Sum of the quadrature error estimates (already divided by pi).
    pub error_estimate: f64,
    /// Whether any kernel evaluation hit the log clamp.
    pub clamped: bool,
}

/// Energy by the Coulson route with diagnostics:
/// `(1/pi) (I1 + 2n + I2)` with `I1 = integral_0^1 log K(t) / t^2 dt`
/// and `I2 = integral_0^1 log S(u) du`.
pub fn coulson_energy_diag(
    kernel: &Kernel,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<CoulsonEnergy> {
    let eval = kernel.at(alpha, beta);
    let n = eval.n();
    let clamped = Cell::new(false);
    let log_of = |k: f64| {
        if k < LOG_CLAMP {
            clamped.set(true);
            LOG_CLAMP.ln()
        } else {
            k.ln()
        }
    };

    // Each half gets half of the total absolute budget tol * pi.
    let half_tol = 0.5 * tol * std::f64::consts::PI;
    let near = adaptive_gk(
        |t| {
            if t == 0.0 {
                0.0
            } else {
                log_of(eval.k_at(t)) / (t * t)
            }
        },
        half_tol,
    )?;
    let far = adaptive_gk(|u| log_of(eval.k_reversed_at(u)), half_tol)?;

    let value = (near.value + far.value + 2.0 * n as f64) / std::f64::consts::PI;
    Ok(CoulsonEnergy {
        value,
        error_estimate: (near.error + far.error) / std::f64::consts::PI,
        clamped: clamped.get(),
    })
}

/// Energy by the Coulson route (value only).
pub fn coulson_energy(kernel: &Kernel, alpha: f64, beta: f64, tol: f64) -> Result<f64> {
    Ok(coulson_energy_diag(kernel, alpha, beta, tol)?.value)
}

/// Convenience wrapper: build the kernel and integrate.
pub fn energy_coulson(params: &DumbbellParams, alpha: f64, beta: f64, tol: f64) -> Result<f64> {
    coulson_energy(&Kernel::for_params(params), alpha, beta, tol)
}

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Estimate {
    value: f64,
    error: f64,
}

/// One Gauss-Kronrod 15 pass over `[a, b]` with the QUADPACK error
/// rescaling.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = WGK[7] * fc;
    let mut resabs = resk.abs();
    let mut resg = WG[3] * fc;
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        let scale = (200.0 * error / resasc).powf(1.5);
        error = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Estimate { value, error }
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    est: Estimate,
    seq: u64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error && self.seq == other.seq
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
        self.est
            .error
            .total_cmp(&other.est.error)
            .then(self.seq.cmp(&other.seq).reverse())
    }
}

const MAX_SEGMENTS: usize = 4000;

/// Globally adaptive Gauss-Kronrod integration of `f` over `[0, 1]`,
/// bisecting the segment with the largest error estimate until the
/// total is below `tol`.
fn adaptive_gk(f: impl Fn(f64) -> f64, tol: f64) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let first = gk15(&f, 0.0, 1.0);
    if !first.value.is_finite() {
        return Err(Error::QuadratureFailed {
            tol,
            achieved: f64::INFINITY,
        });
    }
    let mut total_error = first.error;
    heap.push(Segment {
        a: 0.0,
        b: 1.0,
        est: first,
        seq,
    });

    while total_error > tol && heap.len() < MAX_SEGMENTS {
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval is at floating-point resolution; keep it as is
            heap.push(worst);
            break;
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        if !left.value.is_finite() || !right.value.is_finite() {
            return Err(Error::QuadratureFailed {
                tol,
                achieved: f64::INFINITY,
            });
        }
        total_error += left.error + right.error - worst.est.error;
        seq += 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            est: left,
            seq,
        });
        seq += 1;
        heap.push(Segment {
            a: mid,
            b: worst.b,
            est: right,
            seq,
        });
    }

    // Resum from segments for a numerically clean total.
    let segments = heap.into_vec();
    let value: f64 = segments.iter().map(|s| s.est.value).sum();
    let error: f64 = segments.iter().map(|s| s.est.error).sum();
    if error > tol.max(1e-12) * 10.0 {
        return Err(Error::QuadratureFailed {
            tol,
            achieved: error,
        });
    }
    Ok(Estimate { value, error })
}
