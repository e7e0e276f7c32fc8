//! Characteristic polynomials of gain graphs.
//!
//! For a dumbbell the characteristic polynomial collapses to four
//! matching polynomials weighted by the real parts of the two cycle
//! gains; `char_poly_dumbbell` assembles exactly that. As an
//! independent oracle, `char_poly_general` evaluates the cycle-union
//! expansion on any small gain graph by brute-force cycle enumeration.
//! The even-even case additionally exposes its coefficient quadruples,
//! which later feed the bipartite Coulson kernel.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::graphs::{cycle_case_sign, DumbbellParams, GainGraph, ParityCase};
use crate::matchpoly::{dumbbell_component_polys, matching_polynomial, IntPoly, MatchingCounts};
use crate::{Error, Result};

/// Vertex limit for the brute-force cycle-union oracle.
pub const GENERAL_ORACLE_LIMIT: usize = 20;

/// Dense real-coefficient polynomial, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        RealPoly { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients from the leading term down, as printed by the CLI.
    pub fn coeffs_high_to_low(&self) -> Vec<f64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Characteristic polynomial of a dumbbell gain graph from the four
/// component matching polynomials:
/// `P = m_D - 2a m_{D-C_r} - 2b m_{D-C_s} + 4ab m_{P_{ell-1}}`,
/// where `a`, `b` are the real parts of the cycle gains. Assembly stays
/// in exact integers until this final substitution.
pub fn char_poly_dumbbell(params: &DumbbellParams, a: f64, b: f64) -> RealPoly {
    let comp = dumbbell_component_polys(params);
    let n = params.n();
    let mut coeffs = vec![0.0; n + 1];
    let mut add = |poly: &IntPoly, factor: f64| {
        for (k, c) in poly.coeffs().iter().enumerate() {
            coeffs[k] += factor * c.to_f64().expect("count fits f64");
        }
    };
    add(&comp.whole, 1.0);
    add(&comp.minus_cr, -2.0 * a);
    add(&comp.minus_cs, -2.0 * b);
    add(&comp.path_interior, 4.0 * a * b);
    RealPoly::from_coeffs(coeffs)
}

/// A simple cycle as a vertex mask plus the real part of its gain.
#[derive(Debug, Clone, Copy)]
struct CycleTerm {
    mask: u64,
    re_gain: f64,
}

/// Enumerate all simple cycles of a gain graph, each exactly once.
/// Intermediate vertices are forced above the anchor vertex and the
/// two traversal orientations are deduplicated.
fn simple_cycles(graph: &GainGraph) -> Vec<CycleTerm> {
    let n = graph.n();
    let mut adj: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
    for e in graph.edges() {
        adj[e.u].push((e.v, e.gain));
        adj[e.v].push((e.u, e.gain.conj()));
    }
    for row in &mut adj {
        row.sort_by_key(|&(v, _)| v);
    }

    fn dfs(
        anchor: usize,
        cur: usize,
        mask: u64,
        gain: Complex64,
        adj: &[Vec<(usize, Complex64)>],
        path: &mut Vec<usize>,
        cycles: &mut Vec<CycleTerm>,
    ) {
        for &(nb, g) in &adj[cur] {
            if nb == anchor && path.len() >= 3 {
                if path[1] < path[path.len() - 1] {
                    cycles.push(CycleTerm {
                        mask,
                        re_gain: (gain * g).re,
                    });
                }
            } else if nb > anchor && mask >> nb & 1 == 0 {
                path.push(nb);
                dfs(anchor, nb, mask | 1 << nb, gain * g, adj, path, cycles);
                path.pop();
            }
        }
    }

    let mut cycles = Vec::new();
    let mut path = Vec::new();
    for anchor in 0..n {
        path.clear();
        path.push(anchor);
        dfs(
            anchor,
            anchor,
            1 << anchor,
            Complex64::new(1.0, 0.0),
            &adj,
            &mut path,
            &mut cycles,
        );
    }
    cycles
}

/// Characteristic polynomial of an arbitrary gain graph by the
/// cycle-union expansion
/// `P = m_G + sum_K (-2)^{#K} prod_{C in K} Re(gain(C)) m_{G-K}`,
/// where `K` runs over all nonempty sets of pairwise vertex-disjoint
/// cycles. Exponential in the cycle count; restricted to `n <= 20`.
pub fn char_poly_general(graph: &GainGraph) -> Result<RealPoly> {
    let n = graph.n();
    if n > GENERAL_ORACLE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: GENERAL_ORACLE_LIMIT,
        });
    }
    let skeleton = graph.skeleton();
    let mut coeffs = vec![0.0; n + 1];
    for (k, c) in matching_polynomial(skeleton).coeffs().iter().enumerate() {
        coeffs[k] = c.to_f64().expect("count fits f64");
    }

    let cycles = simple_cycles(graph);
    // Depth-first over subsets of pairwise disjoint cycles.
    let mut stack: Vec<(usize, u64, f64, u32)> = vec![(0, 0, 1.0, 0)];
    while let Some((start, mask, prod, count)) = stack.pop() {
        if count > 0 {
            let sub = skeleton.delete_mask(mask);
            let factor = (-2.0f64).powi(count as i32) * prod;
            for (k, c) in matching_polynomial(&sub).coeffs().iter().enumerate() {
                coeffs[k] += factor * c.to_f64().expect("count fits f64");
            }
        }
        for (i, cy) in cycles.iter().enumerate().skip(start) {
            if cy.mask & mask == 0 {
                stack.push((i + 1, mask | cy.mask, prod * cy.re_gain, count + 1));
            }
        }
    }
    Ok(RealPoly::from_coeffs(coeffs))
}

/// Even-even coefficient quadruples: for each `k` the exact integers
/// `(M_k, R_k, S_k, T_k)` behind
/// `c_k(alpha, beta) = M_k - 2 alpha R_k - 2 beta S_k + 4 alpha beta T_k`,
/// the `k`-th elementary symmetric function of the squared eigenvalues.
#[derive(Debug, Clone)]
pub struct EvenEvenCoeffs {
    n: usize,
    quads: Vec<[BigInt; 4]>,
}

impl EvenEvenCoeffs {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored quadruples, `n/2 + 1`.
    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// The exact `(M_k, R_k, S_k, T_k)`.
    pub fn quad(&self, k: usize) -> &[BigInt; 4] {
        &self.quads[k]
    }

    pub fn quads_f64(&self) -> Vec<[f64; 4]> {
        self.quads
            .iter()
            .map(|q| {
                let f = |x: &BigInt| x.to_f64().expect("count fits f64");
                [f(&q[0]), f(&q[1]), f(&q[2]), f(&q[3])]
            })
            .collect()
    }

    /// Evaluate `c_k(alpha, beta)`.
    pub fn c(&self, k: usize, alpha: f64, beta: f64) -> f64 {
        let q = &self.quads[k];
        let f = |x: &BigInt| x.to_f64().expect("count fits f64");
        f(&q[0]) - 2.0 * alpha * f(&q[1]) - 2.0 * beta * f(&q[2]) + 4.0 * alpha * beta * f(&q[3])
    }

    /// Reassemble `P = sum_k (-1)^k c_k(alpha, beta) x^{n-2k}`.
    pub fn char_poly(&self, alpha: f64, beta: f64) -> RealPoly {
        let mut coeffs = vec![0.0; self.n + 1];
        for k in 0..self.quads.len() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[self.n - 2 * k] = sign * self.c(k, alpha, beta);
        }
        RealPoly::from_coeffs(coeffs)
    }
}

/// Build the even-even coefficient quadruples of a dumbbell:
/// `M_k = m(D, k)`, `R_k = m(D - C_r, k - r/2)`,
/// `S_k = m(D - C_s, k - s/2)`, `T_k = m(P_{ell-1}, k - (r+s)/2)`,
/// out-of-range matching indices reading as zero.
pub fn even_even_coeffs(params: &DumbbellParams) -> Result<EvenEvenCoeffs> {
    if params.case() != ParityCase::EvenEven {
        return Err(Error::WrongParity {
            expected: "even-even",
            r: params.r(),
            s: params.s(),
        });
    }
    let (r, s, ell, n) = (params.r(), params.s(), params.ell(), params.n());
    let comp = dumbbell_component_polys(params);
    let whole = MatchingCounts::from_matching_poly(&comp.whole, n);
    let minus_cr = MatchingCounts::from_matching_poly(&comp.minus_cr, n - r);
    let minus_cs = MatchingCounts::from_matching_poly(&comp.minus_cs, n - s);
    let path = MatchingCounts::from_matching_poly(&comp.path_interior, ell - 1);

    let shifted = |counts: &MatchingCounts, k: usize, shift: usize| -> BigInt {
        if k >= shift {
            counts.count(k - shift)
        } else {
            BigInt::zero()
        }
    };
    let quads = (0..=n / 2)
        .map(|k| {
            [
                whole.count(k),
                shifted(&minus_cr, k, r / 2),
                shifted(&minus_cs, k, s / 2),
                shifted(&path, k, (r + s) / 2),
            ]
        })
        .collect();
    Ok(EvenEvenCoeffs { n, quads })
}

/// Map case coordinates `(alpha, beta)` back to the raw real parts
/// `(a, b)` of the cycle gains for `params`.
pub fn raw_from_case_coords(params: &DumbbellParams, alpha: f64, beta: f64) -> (f64, f64) {
    (
        cycle_case_sign(params.r()) * alpha,
        cycle_case_sign(params.s()) * beta,
    )
}
