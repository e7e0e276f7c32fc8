//! Exact integer matching-polynomial machinery.
//!
//! Everything here is exact: coefficients are arbitrary-precision
//! integers and no floating point enters until a caller converts. The
//! module covers general matching counts by the deletion recursion,
//! the path/cycle recurrences, the Fibonacci-type `f_j`/`g_j` recurrence
//! polynomials in `u = t^2`, and the dumbbell component polynomials
//! assembled from them.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::graphs::{DumbbellParams, SimpleGraph};
use crate::{Error, Result};

/// Dense univariate polynomial with exact integer coefficients, lowest
/// degree first. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(1)
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        IntPoly::from_i64s(&[0, 1])
    }

    pub fn constant(c: i64) -> Self {
        IntPoly::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k` (zero beyond the stored range).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().expect("BigInt converts to f64"))
            .collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().expect("BigInt converts to f64");
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64().expect("BigInt converts to f64");
        }
        acc
    }

    /// Multiply by `x^k`.
    pub fn shifted(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn scaled_i64(&self, c: i64) -> IntPoly {
        let c = BigInt::from(c);
        IntPoly::from_coeffs(self.coeffs.iter().map(|a| a * &c).collect())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

/// Exact matching counts `m(G, j)` for `j = 0 ..= max matching size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingCounts {
    counts: Vec<BigInt>,
}

impl MatchingCounts {
    /// `m(G, j)`; zero outside the stored range.
    pub fn count(&self, j: usize) -> BigInt {
        self.counts.get(j).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Largest `j` with `m(G, j) > 0`.
    pub fn max_size(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.counts
    }

    /// Recover counts from a matching polynomial of a graph on `n`
    /// vertices: `m(G, j)` is `(-1)^j` times the coefficient of `x^{n-2j}`.
    pub fn from_matching_poly(poly: &IntPoly, n: usize) -> Self {
        let mut counts = Vec::with_capacity(n / 2 + 1);
        for j in 0..=n / 2 {
            let c = poly.coeff(n - 2 * j);
            counts.push(if j % 2 == 0 { c } else { -c });
        }
        while counts.last().is_some_and(|c| c.is_zero()) && counts.len() > 1 {
            counts.pop();
        }
        MatchingCounts { counts }
    }
}

/// Exact matching counts by the deletion recursion
/// `m(G) = m(G - e) + x-shift of m(G - u - v)` for an edge `e = uv`,
/// memoized on the residual adjacency bitset.
pub fn matching_counts(g: &SimpleGraph) -> MatchingCounts {
    let mut adj = g.adjacency_bits().to_vec();
    let mut memo: HashMap<Vec<u64>, Vec<BigInt>> = HashMap::new();
    let counts = counts_rec(&mut adj, &mut memo);
    MatchingCounts { counts }
}

fn counts_rec(adj: &mut [u64], memo: &mut HashMap<Vec<u64>, Vec<BigInt>>) -> Vec<BigInt> {
    let Some(u) = adj.iter().position(|&m| m != 0) else {
        return vec![BigInt::one()];
    };
    if let Some(hit) = memo.get(adj as &[u64]) {
        return hit.clone();
    }
    let v = adj[u].trailing_zeros() as usize;

    // delete the edge u-v
    adj[u] &= !(1 << v);
    adj[v] &= !(1 << u);
    let without_edge = counts_rec(adj, memo);
    adj[u] |= 1 << v;
    adj[v] |= 1 << u;

    // delete both endpoints
    let (row_u, row_v) = (adj[u], adj[v]);
    let mut m = row_u;
    while m != 0 {
        let w = m.trailing_zeros() as usize;
        m &= m - 1;
        adj[w] &= !(1 << u);
    }
    let mut m = row_v;
    while m != 0 {
        let w = m.trailing_zeros() as usize;
        m &= m - 1;
        adj[w] &= !(1 << v);
    }
    adj[u] = 0;
    adj[v] = 0;
    let without_ends = counts_rec(adj, memo);
    adj[u] = row_u;
    adj[v] = row_v;
    let mut m = row_u;
    while m != 0 {
        let w = m.trailing_zeros() as usize;
        m &= m - 1;
        adj[w] |= 1 << u;
    }
    let mut m = row_v;
    while m != 0 {
        let w = m.trailing_zeros() as usize;
        m &= m - 1;
        adj[w] |= 1 << v;
    }

    let mut counts = vec![BigInt::zero(); without_edge.len().max(without_ends.len() + 1)];
    for (j, c) in without_edge.iter().enumerate() {
        counts[j] += c;
    }
    for (j, c) in without_ends.iter().enumerate() {
        counts[j + 1] += c;
    }
    while counts.last().is_some_and(|c| c.is_zero()) && counts.len() > 1 {
        counts.pop();
    }
    memo.insert(adj.to_vec(), counts.clone());
    counts
}

/// Matching polynomial `sum_j (-1)^j m(G,j) x^{n-2j}` of a simple graph.
pub fn matching_polynomial(g: &SimpleGraph) -> IntPoly {
    let n = g.n();
    let counts = matching_counts(g);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for j in 0..=counts.max_size() {
        let c = counts.count(j);
        coeffs[n - 2 * j] = if j % 2 == 0 { c } else { -c };
    }
    IntPoly::from_coeffs(coeffs)
}

/// Matching polynomial of the path on `j` vertices (`P_0` is the empty
/// graph with polynomial 1).
pub fn path_poly(j: usize) -> IntPoly {
    let mut prev = IntPoly::one(); // P_0
    if j == 0 {
        return prev;
    }
    let mut cur = IntPoly::x(); // P_1
    for _ in 2..=j {
        let next = &cur.shifted(1) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `path_poly` extended by the recurrence convention `P_{-1} -> 0`.
fn path_ext(j: isize) -> IntPoly {
    if j < 0 {
        debug_assert_eq!(j, -1, "only P_-1 is ever referenced");
        IntPoly::zero()
    } else {
        path_poly(j as usize)
    }
}

/// Matching polynomial of the cycle on `j >= 3` vertices,
/// `m_{C_j} = m_{P_j} - m_{P_{j-2}}`.
pub fn cycle_poly(j: usize) -> IntPoly {
    assert!(j >= 3, "cycle needs at least 3 vertices, got {j}");
    &path_poly(j) - &path_poly(j - 2)
}

/// Fibonacci-type recurrence polynomial in `u`:
/// `f_{-1} = 0`, `f_0 = 1`, `f_j = f_{j-1} + u f_{j-2}`.
pub fn f_poly(j: i64) -> IntPoly {
    assert!(j >= -1, "f_j is defined for j >= -1, got {j}");
    if j == -1 {
        return IntPoly::zero();
    }
    let mut prev = IntPoly::zero(); // f_-1
    let mut cur = IntPoly::one(); // f_0
    for _ in 1..=j {
        let next = &cur + &prev.shifted(1);
        prev = cur;
        cur = next;
    }
    cur
}

/// The pair `(f_j, g_j)` with `g_j = f_j + u f_{j-2}`, for `j >= 1`.
pub fn fg_polys(j: usize) -> (IntPoly, IntPoly) {
    assert!(j >= 1, "g_j is defined for j >= 1, got {j}");
    let f_jm2 = f_poly(j as i64 - 2);
    let f_j = f_poly(j as i64);
    let g_j = &f_j + &f_jm2.shifted(1);
    (f_j, g_j)
}

/// The four matching polynomials (in `x`) a dumbbell decomposes into:
/// the whole graph, the graph minus each cycle, and the path interior.
#[derive(Debug, Clone)]
pub struct DumbbellMatchingPolys {
    /// `m` of the whole dumbbell.
    pub whole: IntPoly,
    /// `m` of the dumbbell with the r-cycle's vertices deleted.
    pub minus_cr: IntPoly,
    /// `m` of the dumbbell with the s-cycle's vertices deleted.
    pub minus_cs: IntPoly,
    /// `m` of the path interior on `ell - 1` vertices.
    pub path_interior: IntPoly,
}

/// Assemble the dumbbell's component matching polynomials from path and
/// cycle polynomials via the coalescence product formulas.
///
/// Deleting one cycle leaves the other cycle with a pendant path:
/// `m_{D - C_r} = m_{P_{ell-1}} m_{C_s} - m_{P_{ell-2}} m_{P_{s-1}}`
/// (P with negative index reads as zero, so `ell = 1` degenerates to
/// `m_{C_s}`). For the whole graph with `ell = 1` the bridge-deletion
/// identity `m_D = m_{C_r} m_{C_s} - m_{P_{r-1}} m_{P_{s-1}}` applies;
/// for `ell >= 2` the three-term coalescence expansion does.
pub fn dumbbell_component_polys(params: &DumbbellParams) -> DumbbellMatchingPolys {
    let (r, s, ell) = (
        params.r() as isize,
        params.s() as isize,
        params.ell() as isize,
    );
    let p_ell1 = path_ext(ell - 1);
    let p_ell2 = path_ext(ell - 2);
    let p_r1 = path_ext(r - 1);
    let p_s1 = path_ext(s - 1);
    let c_r = cycle_poly(r as usize);
    let c_s = cycle_poly(s as usize);

    let minus_cr = &(&p_ell1 * &c_s) - &(&p_ell2 * &p_s1);
    let minus_cs = &(&p_ell1 * &c_r) - &(&p_ell2 * &p_r1);
    let whole = if ell == 1 {
        &(&c_r * &c_s) - &(&p_r1 * &p_s1)
    } else {
        let head = &(&p_ell1 * &c_r) * &c_s;
        let mid = &p_ell2 * &(&(&p_r1 * &c_s) + &(&p_s1 * &c_r));
        let tail = &(&path_ext(ell - 3) * &p_r1) * &p_s1;
        &(&head - &mid) + &tail
    };

    DumbbellMatchingPolys {
        whole,
        minus_cr,
        minus_cs,
        path_interior: p_ell1,
    }
}

/// The four recurrence polynomials in `u` that the odd-odd Coulson
/// kernel is built from. Each is the image of the corresponding
/// matching polynomial under `x = i/t`, with `u = t^2` and the powers
/// of `i` and `t` stripped off.
#[derive(Debug, Clone)]
pub struct OddOddPolys {
    /// Whole-dumbbell part (`Z(t)` is this at `u = t^2`).
    pub whole: IntPoly,
    /// Part for the dumbbell minus the r-cycle (enters `X(t)`).
    pub minus_cr: IntPoly,
    /// Part for the dumbbell minus the s-cycle (enters `Y(t)`).
    pub minus_cs: IntPoly,
    /// Path-interior part (enters `W(t)`).
    pub path_interior: IntPoly,
}

/// Build the odd-odd kernel polynomials from the `f`/`g` recurrences.
///
/// Requires both cycle lengths odd.
pub fn mrst_polys(params: &DumbbellParams) -> Result<OddOddPolys> {
    let (r, s, ell) = (params.r(), params.s(), params.ell());
    if r % 2 == 0 || s % 2 == 0 {
        return Err(Error::WrongParity {
            expected: "odd-odd",
            r,
            s,
        });
    }
    let f_ell1 = f_poly(ell as i64 - 1);
    let f_ell2 = f_poly(ell as i64 - 2);
    let f_r1 = f_poly(r as i64 - 1);
    let f_s1 = f_poly(s as i64 - 1);
    let (_, g_r) = fg_polys(r);
    let (_, g_s) = fg_polys(s);

    let path_interior = f_ell1.clone();
    let minus_cr = &(&f_ell1 * &g_s) + &(&f_ell2 * &f_s1).shifted(1);
    let minus_cs = &(&f_ell1 * &g_r) + &(&f_ell2 * &f_r1).shifted(1);
    let whole = if ell == 1 {
        &(&g_r * &g_s) + &(&f_r1 * &f_s1).shifted(1)
    } else {
        let head = &(&f_ell1 * &g_r) * &g_s;
        let mid = (&f_ell2 * &(&(&f_r1 * &g_s) + &(&f_s1 * &g_r))).shifted(1);
        let tail = (&(&f_poly(ell as i64 - 3) * &f_r1) * &f_s1).shifted(2);
        &(&head + &mid) + &tail
    };

    Ok(OddOddPolys {
        whole,
        minus_cr,
        minus_cs,
        path_interior,
    })
}

/// Binomial coefficient as a `BigInt` (test support and sanity bounds).
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::SimpleGraph;
    use proptest::prelude::*;

    /// Brute-force matching counts by enumerating all edge subsets.
    fn brute_counts(g: &SimpleGraph) -> Vec<BigInt> {
        let edges = g.edges();
        assert!(edges.len() <= 20, "brute force oracle is for small graphs");
        let mut counts = vec![BigInt::zero(); g.n() / 2 + 1];
        for subset in 0u32..1 << edges.len() {
            let mut used = 0u64;
            let mut ok = true;
            let mut size = 0;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    let m = 1 << u | 1 << v;
                    if used & m != 0 {
                        ok = false;
                        break;
                    }
                    used |= m;
                    size += 1;
                }
            }
            if ok {
                counts[size] += 1;
            }
        }
        while counts.last().is_some_and(|c| c.is_zero()) && counts.len() > 1 {
            counts.pop();
        }
        counts
    }

    fn dumbbell_skeleton(r: usize, s: usize, ell: usize) -> SimpleGraph {
        let p = DumbbellParams::new(r, s, ell).unwrap();
        crate::graphs::build_dumbbell(&p).skeleton().clone()
    }

    #[test]
    fn counts_of_small_graphs() {
        let p3 = matching_counts(&SimpleGraph::path(3).unwrap());
        assert_eq!(p3.as_slice(), &[BigInt::from(1), BigInt::from(2)]);
        let c4 = matching_counts(&SimpleGraph::cycle(4).unwrap());
        assert_eq!(
            c4.as_slice(),
            &[BigInt::from(1), BigInt::from(4), BigInt::from(2)]
        );
        let empty = matching_counts(&SimpleGraph::new(0).unwrap());
        assert_eq!(empty.as_slice(), &[BigInt::from(1)]);
    }

    #[test]
    fn d331_counts_match_brute_force() {
        let g = dumbbell_skeleton(3, 3, 1);
        let counts = matching_counts(&g);
        assert_eq!(counts.as_slice(), brute_counts(&g).as_slice());
        // frozen: 1 empty, 7 single edges, 11 pairs, 1 perfect matching
        assert_eq!(
            counts.as_slice(),
            &[
                BigInt::from(1),
                BigInt::from(7),
                BigInt::from(11),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn path_and_cycle_polys() {
        assert_eq!(path_poly(0), IntPoly::one());
        assert_eq!(path_poly(1), IntPoly::x());
        assert_eq!(path_poly(2), IntPoly::from_i64s(&[-1, 0, 1]));
        assert_eq!(cycle_poly(3), IntPoly::from_i64s(&[0, -3, 0, 1]));
        // m_{C_6} derived by brute-force enumeration on C_6
        let c6 = matching_polynomial(&SimpleGraph::cycle(6).unwrap());
        assert_eq!(c6, IntPoly::from_i64s(&[-2, 0, 9, 0, -6, 0, 1]));
        assert_eq!(cycle_poly(6), c6);
    }

    #[test]
    fn cycle_identity_up_to_30() {
        for j in 3..=30 {
            assert_eq!(cycle_poly(j), &path_poly(j) - &path_poly(j - 2));
            // and both agree with the general recursion
            let direct = matching_polynomial(&SimpleGraph::cycle(j).unwrap());
            assert_eq!(cycle_poly(j), direct, "cycle length {j}");
        }
    }

    #[test]
    fn f_and_g_basics() {
        assert_eq!(f_poly(-1), IntPoly::zero());
        assert_eq!(f_poly(0), IntPoly::one());
        assert_eq!(f_poly(2), IntPoly::from_i64s(&[1, 1]));
        let (f3, g3) = fg_polys(3);
        assert_eq!(f3, IntPoly::from_i64s(&[1, 2]));
        assert_eq!(g3, IntPoly::from_i64s(&[1, 3]));
    }

    #[test]
    fn path_poly_substitution_identity() {
        // t^j m_{P_j}(i/t) = i^j f_j(t^2)
        for &t in &[0.3_f64, 1.0, 2.7] {
            for j in 0..=20usize {
                let lhs =
                    path_poly(j).eval_complex(Complex64::new(0.0, 1.0 / t)) * t.powi(j as i32);
                let rhs = Complex64::i().powi(j as i32) * f_poly(j as i64).eval_f64(t * t);
                assert!(
                    (lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0),
                    "j={j}, t={t}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn q_euler_cassini_exact() {
        // f_m^2 - f_{m+1} f_{m-1} = (-1)^m u^m
        for m in 0..=40i64 {
            let lhs = &(&f_poly(m) * &f_poly(m)) - &(&f_poly(m + 1) * &f_poly(m - 1));
            let rhs = IntPoly::one()
                .shifted(m as usize)
                .scaled_i64(if m % 2 == 0 { 1 } else { -1 });
            assert_eq!(lhs, rhs, "m = {m}");
        }
    }

    #[test]
    fn component_polys_degenerate_cases() {
        // ell = 1: deleting C_r leaves exactly C_s
        let p = DumbbellParams::new(3, 3, 1).unwrap();
        let comp = dumbbell_component_polys(&p);
        assert_eq!(comp.minus_cr, cycle_poly(3));
        assert_eq!(comp.path_interior, IntPoly::one());
        // whole graph matches the general recursion
        assert_eq!(comp.whole, matching_polynomial(&dumbbell_skeleton(3, 3, 1)));
    }

    #[test]
    fn component_polys_match_recursion_on_5_7_4() {
        let p = DumbbellParams::new(5, 7, 4).unwrap();
        let comp = dumbbell_component_polys(&p);
        let g = dumbbell_skeleton(5, 7, 4);
        let oracle_whole = matching_polynomial(&g);
        let minus_cr: Vec<usize> = (0..5).collect();
        let oracle_minus_cr = matching_polynomial(&g.delete_vertices(&minus_cr));
        let s_off = 5 + 4 - 1;
        let minus_cs: Vec<usize> = (s_off..s_off + 7).collect();
        let oracle_minus_cs = matching_polynomial(&g.delete_vertices(&minus_cs));
        assert_eq!(comp.whole, oracle_whole);
        assert_eq!(comp.minus_cr, oracle_minus_cr);
        assert_eq!(comp.minus_cs, oracle_minus_cs);
        assert_eq!(comp.path_interior, path_poly(3));
    }

    #[test]
    fn component_polys_match_recursion_small_sweep() {
        // every triple with n <= 16
        for r in 3..=10 {
            for s in 3..=10 {
                for ell in 1..=10 {
                    if r + s + ell - 1 > 16 {
                        continue;
                    }
                    let p = DumbbellParams::new(r, s, ell).unwrap();
                    let comp = dumbbell_component_polys(&p);
                    let g = dumbbell_skeleton(r, s, ell);
                    assert_eq!(
                        comp.whole,
                        matching_polynomial(&g),
                        "whole mismatch at ({r},{s},{ell})"
                    );
                    let cr: Vec<usize> = p.r_cycle_vertices().collect();
                    assert_eq!(
                        comp.minus_cr,
                        matching_polynomial(&g.delete_vertices(&cr)),
                        "minus_cr mismatch at ({r},{s},{ell})"
                    );
                    let cs: Vec<usize> = p.s_cycle_vertices().collect();
                    assert_eq!(
                        comp.minus_cs,
                        matching_polynomial(&g.delete_vertices(&cs)),
                        "minus_cs mismatch at ({r},{s},{ell})"
                    );
                }
            }
        }
    }

    #[test]
    fn mrst_examples_for_331() {
        let p = DumbbellParams::new(3, 3, 1).unwrap();
        let polys = mrst_polys(&p).unwrap();
        assert_eq!(polys.path_interior, IntPoly::one());
        // M = g_3^2 + u f_2^2 = (1+3u)^2 + u(1+u)^2
        let (f2, _) = fg_polys(2);
        let (_, g3) = fg_polys(3);
        let expect = &(&g3 * &g3) + &(&f2 * &f2).shifted(1);
        assert_eq!(polys.whole, expect);
        // and its coefficients are the matching counts of the dumbbell
        let counts = matching_counts(&dumbbell_skeleton(3, 3, 1));
        assert_eq!(polys.whole.coeffs(), counts.as_slice());
    }

    #[test]
    fn mrst_rejects_even_cycles() {
        let p = DumbbellParams::new(4, 3, 1).unwrap();
        assert!(matches!(
            mrst_polys(&p),
            Err(crate::Error::WrongParity { .. })
        ));
    }

    #[test]
    fn kernel_cross_identity_352() {
        // R S - M T = u^2 f_2 f_4 for (r, s, ell) = (3, 5, 2)
        let p = DumbbellParams::new(3, 5, 2).unwrap();
        let polys = mrst_polys(&p).unwrap();
        let lhs = &(&polys.minus_cr * &polys.minus_cs) - &(&polys.whole * &polys.path_interior);
        let rhs = (&f_poly(2) * &f_poly(4)).shifted(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernel_cross_identity_sweep() {
        // R S - M T = (-1)^ell u^ell f_{r-1} f_{s-1}
        for r in (3..=7).step_by(2) {
            for s in (3..=7).step_by(2) {
                for ell in 1..=4 {
                    let p = DumbbellParams::new(r, s, ell).unwrap();
                    let polys = mrst_polys(&p).unwrap();
                    let lhs = &(&polys.minus_cr * &polys.minus_cs)
                        - &(&polys.whole * &polys.path_interior);
                    let core = &f_poly(r as i64 - 1) * &f_poly(s as i64 - 1);
                    let rhs = core
                        .shifted(ell)
                        .scaled_i64(if ell % 2 == 0 { 1 } else { -1 });
                    assert_eq!(lhs, rhs, "({r},{s},{ell})");
                }
            }
        }
    }

    #[test]
    fn mrst_coefficients_are_subgraph_counts() {
        // the u-polynomials carry the same counts as the x-polynomials
        for (r, s, ell) in [(3, 3, 2), (3, 5, 1), (5, 5, 3), (3, 7, 4)] {
            let p = DumbbellParams::new(r, s, ell).unwrap();
            let polys = mrst_polys(&p).unwrap();
            let comp = dumbbell_component_polys(&p);
            let n = p.n();
            let whole = MatchingCounts::from_matching_poly(&comp.whole, n);
            assert_eq!(polys.whole.coeffs(), whole.as_slice(), "({r},{s},{ell})");
            let minus_cr = MatchingCounts::from_matching_poly(&comp.minus_cr, n - r);
            assert_eq!(polys.minus_cr.coeffs(), minus_cr.as_slice());
        }
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
        (2..=max_n)
            .prop_flat_map(|n| {
                let pairs = n * (n - 1) / 2;
                (Just(n), prop::collection::vec(prop::bool::ANY, pairs))
            })
            .prop_map(|(n, include)| {
                let mut g = SimpleGraph::new(n).unwrap();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if include[k] {
                            g.add_edge(u, v);
                        }
                        k += 1;
                    }
                }
                g
            })
    }

    proptest! {
        #[test]
        fn counts_match_brute_force(g in arb_graph(7)) {
            let counts = matching_counts(&g);
            let brute = brute_counts(&g);
            prop_assert_eq!(counts.as_slice(), brute.as_slice());
        }

        #[test]
        fn counts_bounded_by_binomial(g in arb_graph(8)) {
            let counts = matching_counts(&g);
            let e = g.edge_count();
            prop_assert_eq!(counts.count(0), BigInt::from(1));
            prop_assert_eq!(counts.count(1), BigInt::from(e));
            for j in 0..=counts.max_size() {
                prop_assert!(counts.count(j) <= binomial(e, j));
                prop_assert!(counts.count(j) >= BigInt::zero());
            }
        }

        #[test]
        fn coalescence_identity(
            g in arb_graph(6),
            h in arb_graph(6),
            u_pick in 0usize..6,
            v_pick in 0usize..6,
        ) {
            let u = u_pick % g.n();
            let v = v_pick % h.n();
            // coalescence: identify u in G with v in H
            let gn = g.n();
            let hn = h.n();
            let mut c = SimpleGraph::new(gn + hn - 1).unwrap();
            for (a, b) in g.edges() {
                c.add_edge(a, b);
            }
            // relabel H: v -> u, others -> gn + rank among != v
            let relabel = |w: usize| -> usize {
                if w == v {
                    u
                } else if w < v {
                    gn + w
                } else {
                    gn + w - 1
                }
            };
            for (a, b) in h.edges() {
                c.add_edge(relabel(a), relabel(b));
            }
            let m_c = matching_polynomial(&c);
            let m_g = matching_polynomial(&g);
            let m_h = matching_polynomial(&h);
            let m_g_minus = matching_polynomial(&g.delete_vertices(&[u]));
            let m_h_minus = matching_polynomial(&h.delete_vertices(&[v]));
            let expect = &(&(&m_g * &m_h_minus) + &(&m_g_minus * &m_h))
                - &(&m_g_minus * &m_h_minus).shifted(1);
            prop_assert_eq!(m_c, expect);
        }
    }
}
