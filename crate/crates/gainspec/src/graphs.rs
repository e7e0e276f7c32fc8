//! Dumbbell graphs, gain assignments, and the eigenvalue energy route.
//!
//! Vertex labels are fixed by construction: the `r`-cycle occupies
//! `0..r-1` in cycle order, path-interior vertices are `r..r+ell-2`, and
//! the `s`-cycle occupies the rest. The gauge normal form puts gain 1 on
//! every spanning-tree edge and the whole cycle gain on the closing edge
//! of each cycle, so matrices are reproducible bit for bit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// Largest vertex count supported by the bitset graph representation.
pub const MAX_VERTICES: usize = 64;

/// Unit-modulus tolerance accepted by [`normalize_gains`].
pub const UNIT_GAIN_TOL: f64 = 1e-12;

/// Parity case of a dumbbell, determined by `r, s mod 2`.
///
/// `Mixed` is canonically oriented with the even cycle first; see
/// [`DumbbellParams::canonical`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ParityCase {
    EvenEven,
    OddOdd,
    Mixed,
}

impl ParityCase {
    pub fn label(&self) -> &'static str {
        match self {
            ParityCase::EvenEven => "even-even",
            ParityCase::OddOdd => "odd-odd",
            ParityCase::Mixed => "mixed",
        }
    }
}

/// The triple `(r, s, ell)` with its derived order `n = r + s + ell - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DumbbellParams {
    r: usize,
    s: usize,
    ell: usize,
    n: usize,
}

impl DumbbellParams {
    pub fn new(r: usize, s: usize, ell: usize) -> Result<Self> {
        if r < 3 || s < 3 {
            return Err(Error::InvalidParams {
                r,
                s,
                ell,
                reason: "cycle lengths must be at least 3",
            });
        }
        if ell < 1 {
            return Err(Error::InvalidParams {
                r,
                s,
                ell,
                reason: "path length must be at least 1",
            });
        }
        let n = r + s + ell - 1;
        if n > MAX_VERTICES {
            return Err(Error::InvalidParams {
                r,
                s,
                ell,
                reason: "order r + s + ell - 1 exceeds 64",
            });
        }
        Ok(DumbbellParams { r, s, ell, n })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Order `n = r + s + ell - 1`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn case(&self) -> ParityCase {
        match (self.r % 2, self.s % 2) {
            (0, 0) => ParityCase::EvenEven,
            (1, 1) => ParityCase::OddOdd,
            _ => ParityCase::Mixed,
        }
    }

    /// Vertices of the r-cycle under the construction labeling.
    pub fn r_cycle_vertices(&self) -> std::ops::Range<usize> {
        0..self.r
    }

    /// Path-interior vertices (empty when `ell == 1`).
    pub fn path_interior_vertices(&self) -> std::ops::Range<usize> {
        self.r..self.r + self.ell - 1
    }

    /// Vertices of the s-cycle.
    pub fn s_cycle_vertices(&self) -> std::ops::Range<usize> {
        self.r + self.ell - 1..self.n
    }

    /// Canonical orientation: in the mixed case the even cycle comes
    /// first. Returns the (possibly swapped) parameters and whether a
    /// swap happened. `D_{r,s,ell}` and `D_{s,r,ell}` are isomorphic, so
    /// nothing but bookkeeping changes.
    pub fn canonical(&self) -> (DumbbellParams, bool) {
        if self.r % 2 == 1 && self.s % 2 == 0 {
            (
                DumbbellParams {
                    r: self.s,
                    s: self.r,
                    ell: self.ell,
                    n: self.n,
                },
                true,
            )
        } else {
            (*self, false)
        }
    }
}

/// Case sign of a cycle of length `c`: `(-1)^{c/2}` for even `c`,
/// `(-1)^{(c+1)/2}` for odd `c`. Maps the raw real part of a cycle gain
/// to the normalized coordinate (`alpha = sign * Re(gamma)`).
pub fn cycle_case_sign(c: usize) -> f64 {
    let half = if c % 2 == 0 { c / 2 } else { (c + 1) / 2 };
    if half % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Cycle gains together with their reduced coordinates.
///
/// `a = Re(gamma_r)`, `b = Re(gamma_s)` and `alpha`, `beta` are the
/// case-normalized coordinates. Fields refer to the canonical
/// orientation; `swapped` records whether the input pair `(r, s)` was
/// reversed to get there.
#[derive(Debug, Clone, Copy)]
pub struct GainSpec {
    pub gamma_r: Complex64,
    pub gamma_s: Complex64,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub swapped: bool,
}

/// Normalize a pair of cycle gains for `params`.
///
/// Rejects inputs off the unit circle (tolerance `1e-12`), swaps the pair
/// in the mixed case when the odd cycle comes first, and computes the
/// case coordinates `(alpha, beta)`.
pub fn normalize_gains(
    params: &DumbbellParams,
    gamma_r: Complex64,
    gamma_s: Complex64,
) -> Result<GainSpec> {
    for g in [gamma_r, gamma_s] {
        let modulus = g.norm();
        if (modulus - 1.0).abs() > UNIT_GAIN_TOL {
            return Err(Error::NonUnitGain {
                modulus,
                tol: UNIT_GAIN_TOL,
            });
        }
    }
    let (canon, swapped) = params.canonical();
    let (gr, gs) = if swapped {
        (gamma_s, gamma_r)
    } else {
        (gamma_r, gamma_s)
    };
    // Kill residual modulus drift so downstream matrices are exactly unitary.
    let gr = gr / gr.norm();
    let gs = gs / gs.norm();
    let a = gr.re;
    let b = gs.re;
    Ok(GainSpec {
        gamma_r: gr,
        gamma_s: gs,
        a,
        b,
        alpha: cycle_case_sign(canon.r) * a,
        beta: cycle_case_sign(canon.s) * b,
        swapped,
    })
}

impl GainSpec {
    /// Build gains from case coordinates, choosing the representative
    /// `gamma = a + i*sqrt(1 - a^2)` on the upper unit circle. Any other
    /// gain with the same real part is switching-equivalent.
    pub fn from_alpha_beta(params: &DumbbellParams, alpha: f64, beta: f64) -> Result<Self> {
        for v in [alpha, beta] {
            if !(-1.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(Error::CoordinateOutOfRange { value: v });
            }
        }
        let (canon, swapped) = params.canonical();
        let a = cycle_case_sign(canon.r) * alpha;
        let b = cycle_case_sign(canon.s) * beta;
        let unit = |re: f64| Complex64::new(re, (1.0 - re * re).max(0.0).sqrt());
        Ok(GainSpec {
            gamma_r: unit(a),
            gamma_s: unit(b),
            a,
            b,
            alpha,
            beta,
            swapped,
        })
    }
}

/// Simple graph on at most 64 vertices stored as adjacency bitsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                n,
                limit: MAX_VERTICES,
            });
        }
        Ok(SimpleGraph { n, adj: vec![0; n] })
    }

    /// Path on `n` vertices (`n = 0` is the empty graph).
    pub fn path(n: usize) -> Result<Self> {
        let mut g = SimpleGraph::new(n)?;
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        Ok(g)
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams {
                r: n,
                s: n,
                ell: 0,
                reason: "cycle needs at least 3 vertices",
            });
        }
        let mut g = SimpleGraph::path(n)?;
        g.add_edge(n - 1, 0);
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Insert an undirected edge. Panics on out-of-range or loop edges;
    /// parallel inserts are idempotent.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "bad edge ({u}, {v})");
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges as `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut m = self.adj[u] >> (u + 1) << (u + 1);
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                out.push((u, v));
                m &= m - 1;
            }
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub(crate) fn adjacency_bits(&self) -> &[u64] {
        &self.adj
    }

    /// Graph induced on the vertices *outside* `mask`, relabeled to
    /// `0..k` in ascending original order.
    pub fn delete_mask(&self, mask: u64) -> SimpleGraph {
        let keep: Vec<usize> = (0..self.n).filter(|v| mask >> v & 1 == 0).collect();
        let mut relabel = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            relabel[old] = new;
        }
        let mut g = SimpleGraph {
            n: keep.len(),
            adj: vec![0; keep.len()],
        };
        for &old in &keep {
            let mut m = self.adj[old];
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                if relabel[w] != usize::MAX {
                    g.adj[relabel[old]] |= 1 << relabel[w];
                }
            }
        }
        g
    }

    /// Delete a list of vertices (convenience over [`Self::delete_mask`]).
    pub fn delete_vertices(&self, vs: &[usize]) -> SimpleGraph {
        let mut mask = 0u64;
        for &v in vs {
            mask |= 1 << v;
        }
        self.delete_mask(mask)
    }
}

/// One oriented edge with its gain; the reverse orientation carries the
/// inverse (= conjugate) gain.
#[derive(Debug, Clone, Copy)]
pub struct GainEdge {
    pub u: usize,
    pub v: usize,
    pub gain: Complex64,
}

/// A complex unit gain graph: skeleton plus per-edge gains.
#[derive(Debug, Clone)]
pub struct GainGraph {
    skeleton: SimpleGraph,
    edges: Vec<GainEdge>,
    /// Indexes into `edges` of the two cycle-closing gauge edges
    /// (r-cycle, s-cycle) when built by [`build_dumbbell`].
    gauge: Option<(usize, usize)>,
}

impl GainGraph {
    /// Gain graph from an explicit oriented edge list; `gain` is the
    /// gain of `u -> v`. No gauge edges are designated.
    pub fn from_edges(n: usize, edges: &[(usize, usize, Complex64)]) -> GainGraph {
        let mut skeleton = SimpleGraph::new(n).expect("vertex count within bitset limit");
        let mut list = Vec::with_capacity(edges.len());
        for &(u, v, gain) in edges {
            skeleton.add_edge(u, v);
            list.push(GainEdge { u, v, gain });
        }
        GainGraph {
            skeleton,
            edges: list,
            gauge: None,
        }
    }

    pub fn n(&self) -> usize {
        self.skeleton.n()
    }

    pub fn skeleton(&self) -> &SimpleGraph {
        &self.skeleton
    }

    pub fn edges(&self) -> &[GainEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Set the two cycle gains on the designated gauge edges. Only valid
    /// on dumbbells from [`build_dumbbell`].
    pub fn with_cycle_gains(&self, gamma_r: Complex64, gamma_s: Complex64) -> GainGraph {
        let (ir, is) = self.gauge.expect("gauge edges are set by build_dumbbell");
        let mut g = self.clone();
        g.edges[ir].gain = gamma_r;
        g.edges[is].gain = gamma_s;
        g
    }

    /// Switching by a diagonal unitary with phases `theta`: the gain of
    /// `u -> v` becomes `e^{i theta_u} g e^{-i theta_v}`. Spectrum-preserving.
    pub fn switched(&self, theta: &[f64]) -> GainGraph {
        assert_eq!(theta.len(), self.n());
        let mut g = self.clone();
        for e in &mut g.edges {
            let phase = Complex64::from_polar(1.0, theta[e.u] - theta[e.v]);
            e.gain *= phase;
        }
        g
    }
}

/// Build the dumbbell skeleton for `params` with all gains 1.
///
/// Construction order: r-cycle edges `(0,1), ..., (r-2,r-1)` plus the
/// closing edge `r-1 -> 0`; the path from vertex 0 to the first s-cycle
/// vertex; s-cycle edges likewise with their closing edge last. The two
/// closing edges are the gauge edges that later carry `gamma_r`, `gamma_s`.
pub fn build_dumbbell(params: &DumbbellParams) -> GainGraph {
    let (r, s, ell, n) = (params.r(), params.s(), params.ell(), params.n());
    let mut skeleton = SimpleGraph::new(n).expect("order checked in DumbbellParams::new");
    let mut edges = Vec::with_capacity(n + 1);
    fn push(skeleton: &mut SimpleGraph, edges: &mut Vec<GainEdge>, u: usize, v: usize) {
        skeleton.add_edge(u, v);
        edges.push(GainEdge {
            u,
            v,
            gain: Complex64::new(1.0, 0.0),
        });
    }

    for i in 0..r - 1 {
        push(&mut skeleton, &mut edges, i, i + 1);
    }
    push(&mut skeleton, &mut edges, r - 1, 0);
    let gauge_r = edges.len() - 1;

    // Path from vertex 0 through the interior to the first s-cycle vertex.
    let s_off = r + ell - 1;
    let mut prev = 0;
    for v in r..r + ell - 1 {
        push(&mut skeleton, &mut edges, prev, v);
        prev = v;
    }
    push(&mut skeleton, &mut edges, prev, s_off);

    for i in 0..s - 1 {
        push(&mut skeleton, &mut edges, s_off + i, s_off + i + 1);
    }
    push(&mut skeleton, &mut edges, s_off + s - 1, s_off);
    let gauge_s = edges.len() - 1;

    GainGraph {
        skeleton,
        edges,
        gauge: Some((gauge_r, gauge_s)),
    }
}

/// Hermitian adjacency matrix: `A[u][v]` is the gain of `u -> v`,
/// `A[v][u]` its conjugate.
pub fn hermitian_adjacency(graph: &GainGraph) -> DMatrix<Complex64> {
    let n = graph.n();
    let mut a = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for e in graph.edges() {
        a[(e.u, e.v)] = e.gain;
        a[(e.v, e.u)] = e.gain.conj();
    }
    a
}

/// Sorted real spectrum of a Hermitian adjacency matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Eigenvalues in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sum of absolute eigenvalues.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|l| l.abs()).sum()
    }
}

/// Eigendecompose a Hermitian matrix and return the sorted spectrum.
pub fn spectrum_of(matrix: &DMatrix<Complex64>) -> Result<Spectrum> {
    let n = matrix.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, 100_000)
        .ok_or(Error::EigenFailed { n })?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailed { n });
    }
    values.sort_by(f64::total_cmp);
    Ok(Spectrum { values })
}

/// Spectrum of the dumbbell with the given gains.
///
/// `gains` must have been produced for the same `params` (the canonical
/// orientation is used for both).
pub fn spectrum(params: &DumbbellParams, gains: &GainSpec) -> Result<Spectrum> {
    let (canon, _) = params.canonical();
    let graph = build_dumbbell(&canon).with_cycle_gains(gains.gamma_r, gains.gamma_s);
    spectrum_of(&hermitian_adjacency(&graph))
}

/// Energy by the eigenvalue route: sum of absolute eigenvalues of the
/// Hermitian adjacency matrix.
pub fn energy_eig(params: &DumbbellParams, gains: &GainSpec) -> Result<f64> {
    Ok(spectrum(params, gains)?.energy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchpoly::IntPoly;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn params(r: usize, s: usize, ell: usize) -> DumbbellParams {
        DumbbellParams::new(r, s, ell).unwrap()
    }

    #[test]
    fn orders_and_edge_counts() {
        for (r, s, ell, n) in [(3, 3, 1, 6), (4, 6, 3, 12), (17, 17, 17, 50)] {
            let p = params(r, s, ell);
            assert_eq!(p.n(), n);
            let g = build_dumbbell(&p);
            assert_eq!(g.n(), n);
            assert_eq!(g.edge_count(), n + 1);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(DumbbellParams::new(2, 3, 1).is_err());
        assert!(DumbbellParams::new(3, 2, 1).is_err());
        assert!(DumbbellParams::new(3, 3, 0).is_err());
        assert!(DumbbellParams::new(30, 30, 10).is_err()); // n = 69 > 64
    }

    #[test]
    fn vertex_partition_is_documented_order() {
        let p = params(4, 5, 3);
        let g = build_dumbbell(&p);
        let sk = g.skeleton();
        // r-cycle on 0..3
        assert!(sk.has_edge(0, 1) && sk.has_edge(1, 2) && sk.has_edge(2, 3) && sk.has_edge(3, 0));
        // interior 4..5, path 0-4-5-6
        assert!(sk.has_edge(0, 4) && sk.has_edge(4, 5) && sk.has_edge(5, 6));
        // s-cycle on 6..10
        assert!(sk.has_edge(6, 7) && sk.has_edge(9, 10) && sk.has_edge(10, 6));
        // two cycles share no vertex: degrees are 3 only at the join vertices
        assert_eq!(sk.degree(0), 3);
        assert_eq!(sk.degree(6), 3);
        let deg3 = (0..sk.n()).filter(|&v| sk.degree(v) == 3).count();
        assert_eq!(deg3, 2);
    }

    #[test]
    fn case_signs_match_definitions() {
        // even r: (-1)^{r/2}
        assert_eq!(cycle_case_sign(4), 1.0);
        assert_eq!(cycle_case_sign(6), -1.0);
        // odd r: (-1)^{(r+1)/2}
        assert_eq!(cycle_case_sign(3), 1.0);
        assert_eq!(cycle_case_sign(5), -1.0);
    }

    #[test]
    fn normalize_gains_examples() {
        // r = 4, gamma_r = -1 -> alpha = -1
        let p = params(4, 4, 1);
        let g = normalize_gains(&p, Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(g.alpha, -1.0);
        // r = 6, gamma_r = 1 -> alpha = -1
        let p = params(6, 4, 1);
        let g = normalize_gains(&p, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(g.alpha, -1.0);
        // r = 3, gamma_r = i -> alpha = 0
        let p = params(3, 3, 1);
        let g = normalize_gains(&p, Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(g.alpha, 0.0);
    }

    #[test]
    fn normalize_gains_rejects_off_circle() {
        let p = params(3, 3, 1);
        let err = normalize_gains(&p, Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0));
        assert!(matches!(err, Err(Error::NonUnitGain { .. })));
    }

    #[test]
    fn mixed_case_swaps_to_even_first() {
        let p = params(3, 4, 2);
        let (canon, swapped) = p.canonical();
        assert!(swapped);
        assert_eq!((canon.r(), canon.s()), (4, 3));
        let g = normalize_gains(&p, Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0)).unwrap();
        assert!(g.swapped);
        // gamma_r now refers to the even 4-cycle gain -1.
        assert_eq!(g.a, -1.0);
        assert_eq!(g.alpha, -1.0);
    }

    #[test]
    fn adjacency_is_hermitian_with_gauge_gains() {
        let p = params(3, 4, 2);
        let (canon, _) = p.canonical();
        let gamma = Complex64::new(0.0, 1.0);
        let g = build_dumbbell(&canon).with_cycle_gains(gamma, Complex64::new(1.0, 0.0));
        let a = hermitian_adjacency(&g);
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                assert_eq!(a[(i, j)], a[(j, i)].conj());
            }
        }
        // gauge edge r-1 -> 0 carries i, reverse carries -i
        assert_eq!(a[(canon.r() - 1, 0)], gamma);
        assert_eq!(a[(0, canon.r() - 1)], -gamma);
        // balanced C_s block is 0/1 symmetric
        let off = canon.r() + canon.ell() - 1;
        assert_eq!(a[(off, off + 1)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn trace_identities() {
        let p = params(5, 4, 3);
        let gains = GainSpec::from_alpha_beta(&p, 0.3, -0.8).unwrap();
        let (canon, _) = p.canonical();
        let g = build_dumbbell(&canon).with_cycle_gains(gains.gamma_r, gains.gamma_s);
        let a = hermitian_adjacency(&g);
        let tr: Complex64 = (0..a.nrows()).map(|i| a[(i, i)]).sum();
        assert!(tr.norm() < 1e-12);
        let a2 = &a * &a;
        let tr2: Complex64 = (0..a.nrows()).map(|i| a2[(i, i)]).sum();
        assert!((tr2.re - 2.0 * g.edge_count() as f64).abs() < 1e-9);
        assert!(tr2.im.abs() < 1e-12);
    }

    #[test]
    fn switching_leaves_spectrum_invariant() {
        let p = params(3, 5, 2);
        let gains = GainSpec::from_alpha_beta(&p, 0.4, 0.7).unwrap();
        let g = build_dumbbell(&p).with_cycle_gains(gains.gamma_r, gains.gamma_s);
        let base = spectrum_of(&hermitian_adjacency(&g)).unwrap();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..100 {
            let theta: Vec<f64> = (0..g.n())
                .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            let sw = spectrum_of(&hermitian_adjacency(&g.switched(&theta))).unwrap();
            for (x, y) in base.values().iter().zip(sw.values()) {
                assert!((x - y).abs() < 1e-9, "switching moved an eigenvalue");
            }
        }
    }

    #[test]
    fn energy_depends_only_on_real_parts() {
        let p = params(5, 7, 2);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let tr = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let ts = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let gr = Complex64::from_polar(1.0, tr);
            let gs = Complex64::from_polar(1.0, ts);
            let e1 = energy_eig(&p, &normalize_gains(&p, gr, gs).unwrap()).unwrap();
            let e2 = energy_eig(&p, &normalize_gains(&p, gr.conj(), gs.conj()).unwrap()).unwrap();
            assert!((e1 - e2).abs() < 1e-9);
        }
    }

    #[test]
    fn even_even_spectrum_is_symmetric() {
        let p = params(4, 6, 3);
        let gains = GainSpec::from_alpha_beta(&p, 0.6, -0.2).unwrap();
        let sp = spectrum(&p, &gains).unwrap();
        let v = sp.values();
        let n = v.len();
        for k in 0..n {
            assert!(
                (v[k] + v[n - 1 - k]).abs() < 1e-9,
                "spectrum not symmetric about 0"
            );
        }
    }

    // Independent oracle: characteristic polynomial of the balanced
    // D_{3,3,1} adjacency matrix by exact cofactor expansion, then
    // bisection on sign changes. Computed before energy_eig existed.
    fn poly_det(m: Vec<Vec<IntPoly>>) -> IntPoly {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut det = IntPoly::zero();
        for (i, row) in m.iter().enumerate() {
            if row[0].is_zero() {
                continue;
            }
            let minor: Vec<Vec<IntPoly>> = m
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, r)| r[1..].to_vec())
                .collect();
            let term = &row[0] * &poly_det(minor);
            if i % 2 == 0 {
                det = &det + &term;
            } else {
                det = &det - &term;
            }
        }
        det
    }

    /// Exact synthetic division by `x + 1`, panicking on a nonzero
    /// remainder.
    fn exact_div_by_x_plus_one(p: &IntPoly) -> IntPoly {
        use num_bigint::BigInt;
        let coeffs = p.coeffs();
        let n = coeffs.len();
        assert!(n >= 2);
        let mut quotient = vec![BigInt::from(0); n - 1];
        let mut carry = BigInt::from(0);
        for k in (0..n - 1).rev() {
            let q = &coeffs[k + 1] - &carry;
            carry = q.clone();
            quotient[k] = q;
        }
        let remainder = &coeffs[0] - &carry;
        assert_eq!(remainder, BigInt::from(0), "x + 1 does not divide p");
        IntPoly::from_coeffs(quotient)
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn balanced_d331_energy_matches_determinant_oracle() {
        let p = params(3, 3, 1);
        let g = build_dumbbell(&p);
        let n = g.n();
        // xI - A over exact integer polynomials
        let mut m = vec![vec![IntPoly::zero(); n]; n];
        for i in 0..n {
            m[i][i] = IntPoly::x();
        }
        for e in g.edges() {
            m[e.u][e.v] = -IntPoly::one();
            m[e.v][e.u] = -IntPoly::one();
        }
        let charpoly = poly_det(m);
        // Frozen expected polynomial: x^6 - 7x^4 - 4x^3 + 11x^2 + 12x + 3.
        assert_eq!(
            charpoly,
            IntPoly::from_i64s(&[3, 12, 11, -4, -7, 0, 1]),
            "balanced characteristic polynomial"
        );
        // x = -1 is a double eigenvalue (the triangle-swap symmetry);
        // deflate it exactly, then bisect the four simple quartic roots.
        let quartic = exact_div_by_x_plus_one(&exact_div_by_x_plus_one(&charpoly));
        assert_eq!(quartic, IntPoly::from_i64s(&[3, 6, -4, -2, 1]));
        let eval = |x: f64| quartic.eval_f64(x);
        let mut roots = vec![-1.0, -1.0];
        let steps = 60_000;
        let (lo, hi) = (-3.0, 3.0);
        let mut prev = eval(lo);
        for k in 1..=steps {
            let x = lo + (hi - lo) * k as f64 / steps as f64;
            let y = eval(x);
            if prev * y < 0.0 {
                let (mut a, mut b) = (lo + (hi - lo) * (k - 1) as f64 / steps as f64, x);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if eval(a) * eval(mid) <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            prev = y;
        }
        assert_eq!(roots.len(), 6, "two deflated plus four simple roots");
        let oracle_energy: f64 = roots.iter().map(|r| r.abs()).sum();

        let gains =
            normalize_gains(&p, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let e = energy_eig(&p, &gains).unwrap();
        assert!(
            (e - oracle_energy).abs() < 1e-8,
            "energy_eig {e} vs oracle {oracle_energy}"
        );
    }

    #[test]
    fn table_reference_energies_d331() {
        let p = params(3, 3, 1);
        // alpha = beta = 0 (gamma = i on both cycles)
        let gains = GainSpec::from_alpha_beta(&p, 0.0, 0.0).unwrap();
        let e0 = energy_eig(&p, &gains).unwrap();
        assert!((e0 - 7.924777).abs() < 1e-5, "E(0,0) = {e0}");
        // alpha = beta = 0.5
        let gains = GainSpec::from_alpha_beta(&p, 0.5, 0.5).unwrap();
        let e = energy_eig(&p, &gains).unwrap();
        assert!((e - 7.841619).abs() < 1e-5, "E(0.5,0.5) = {e}");
    }

    #[test]
    fn energy_is_deterministic_across_runs() {
        let p = params(5, 3, 4);
        let gains = GainSpec::from_alpha_beta(&p, 0.25, -0.75).unwrap();
        let e1 = energy_eig(&p, &gains).unwrap();
        let e2 = energy_eig(&p, &gains).unwrap();
        assert_eq!(e1, e2);
    }
}
