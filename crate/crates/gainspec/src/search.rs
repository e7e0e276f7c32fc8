//! Extremal-energy search over `(alpha, beta) in [-1, 1]^2`.
//!
//! The search runs a full grid pass at the initial mesh and then a fixed
//! number of refinement rounds; each round halves the mesh and rescans
//! the axis-aligned box of radius `neighborhood_radius` current-mesh
//! steps around the incumbent. Grid points are represented as exact
//! integer multiples of the current mesh (`k / (steps_per_unit * 2^round)`),
//! so runs are deterministic and ties can be broken toward the
//! lexicographically smallest `(alpha, beta)` without floating-point
//! ambiguity.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::coulson::{coulson_energy, Kernel, DEFAULT_TOL};
use crate::graphs::{energy_eig, DumbbellParams, GainSpec, ParityCase};
use crate::{Error, Result};

/// A minimizer counts as beating the origin when it wins by more than
/// this margin.
pub const COUNTEREXAMPLE_MARGIN: f64 = 1e-6;

/// Tolerance on `|alpha* beta* - 1/4|` for the near-quarter census.
pub const QUARTER_PRODUCT_TOL: f64 = 0.02;

/// Energy slack allowed before a found extremum is said to beat a
/// predicted one.
pub const VERDICT_ENERGY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Objective {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnergyRoute {
    /// Closed-form Coulson kernel (default; fast at any order).
    Coulson,
    /// Hermitian eigenvalues (the cross-check oracle).
    Eigen,
}

/// Search parameters. The defaults mirror the reference experiment:
/// initial mesh `0.1`, ten halving rounds, neighborhood radius 2, so
/// the final mesh is `0.1 / 2^10`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SearchConfig {
    pub objective: Objective,
    /// Initial mesh width; its reciprocal must be an integer.
    pub initial_mesh: f64,
    /// Number of mesh-halving refinement rounds.
    pub rounds: u32,
    /// Refinement box half-width in current-mesh steps.
    pub neighborhood_radius: i64,
    /// Absolute tolerance handed to the Coulson quadrature.
    pub quad_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            objective: Objective::Min,
            initial_mesh: 0.1,
            rounds: 10,
            neighborhood_radius: 2,
            quad_tol: DEFAULT_TOL,
        }
    }
}

impl SearchConfig {
    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    /// Mesh width after the final round.
    pub fn final_mesh(&self) -> f64 {
        self.initial_mesh / f64::powi(2.0, self.rounds as i32)
    }

    /// Grid steps per unit interval at round zero.
    fn steps_per_unit(&self) -> Result<i64> {
        if !self.initial_mesh.is_finite() || self.initial_mesh <= 0.0 || self.initial_mesh > 1.0 {
            return Err(Error::BadConfig(format!(
                "initial mesh {} not in (0, 1]",
                self.initial_mesh
            )));
        }
        let steps = (1.0 / self.initial_mesh).round();
        if (1.0 / self.initial_mesh - steps).abs() > 1e-9 {
            return Err(Error::BadConfig(format!(
                "initial mesh {} must divide 1 evenly",
                self.initial_mesh
            )));
        }
        if self.rounds > 40 {
            return Err(Error::BadConfig(format!(
                "{} refinement rounds exceed the supported 40",
                self.rounds
            )));
        }
        if self.neighborhood_radius < 1 {
            return Err(Error::BadConfig(
                "neighborhood radius must be at least 1".into(),
            ));
        }
        Ok(steps as i64)
    }
}

/// Build an energy evaluator for repeated `(alpha, beta)` queries.
pub fn make_energy_fn(
    params: &DumbbellParams,
    route: EnergyRoute,
    quad_tol: f64,
) -> Box<dyn Fn(f64, f64) -> Result<f64> + Send + Sync> {
    match route {
        EnergyRoute::Coulson => {
            let kernel = Kernel::for_params(params);
            Box::new(move |alpha, beta| coulson_energy(&kernel, alpha, beta, quad_tol))
        }
        EnergyRoute::Eigen => {
            let p = *params;
            Box::new(move |alpha, beta| {
                energy_eig(&p, &GainSpec::from_alpha_beta(&p, alpha, beta)?)
            })
        }
    }
}

/// One refinement round of the trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefineRound {
    pub round: u32,
    pub mesh: f64,
    pub alpha: f64,
    pub beta: f64,
    pub energy: f64,
}

/// Outcome of a grid-plus-refinement search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub objective: Objective,
    pub alpha: f64,
    pub beta: f64,
    pub energy: f64,
    /// Energy at the origin `(0, 0)`.
    pub energy_origin: f64,
    /// Energies at the four corners, in lexicographic corner order.
    pub corners: [CornerEnergy; 4],
    /// `E(0,0) - E(alpha*, beta*)` for minimization runs.
    pub delta_e: Option<f64>,
    pub trace: Vec<RefineRound>,
    pub final_mesh: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CornerEnergy {
    pub alpha: f64,
    pub beta: f64,
    pub energy: f64,
}

/// Exact grid point `(ka / den, kb / den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct GridPoint {
    ka: i64,
    kb: i64,
    den: i64,
}

impl GridPoint {
    fn alpha(&self) -> f64 {
        self.ka as f64 / self.den as f64
    }

    fn beta(&self) -> f64 {
        self.kb as f64 / self.den as f64
    }

    /// Canonical key identifying the rational pair independently of the
    /// mesh level it was generated at.
    fn key(&self) -> (i64, i64, i64) {
        fn gcd(mut a: i64, mut b: i64) -> i64 {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a.abs()
        }
        let g = gcd(gcd(self.ka, self.kb), self.den).max(1);
        (self.ka / g, self.kb / g, self.den / g)
    }
}

struct Evaluator<'a> {
    energy: &'a (dyn Fn(f64, f64) -> Result<f64> + Send + Sync),
    cache: HashMap<(i64, i64, i64), f64>,
}

impl<'a> Evaluator<'a> {
    fn new(energy: &'a (dyn Fn(f64, f64) -> Result<f64> + Send + Sync)) -> Self {
        Evaluator {
            energy,
            cache: HashMap::new(),
        }
    }

    /// Evaluate a batch of points in parallel with caching, preserving
    /// input order in the returned energies.
    fn batch(&mut self, points: &[GridPoint]) -> Result<Vec<f64>> {
        let missing: Vec<GridPoint> = points
            .iter()
            .filter(|p| !self.cache.contains_key(&p.key()))
            .copied()
            .collect();
        let fresh: Vec<(GridPoint, Result<f64>)> = missing
            .par_iter()
            .map(|&p| (p, (self.energy)(p.alpha(), p.beta())))
            .collect();
        for (p, res) in fresh {
            let e = res.map_err(|e| Error::EnergyEval {
                alpha: p.alpha(),
                beta: p.beta(),
                source: Box::new(e),
            })?;
            self.cache.insert(p.key(), e);
        }
        Ok(points.iter().map(|p| self.cache[&p.key()]).collect())
    }
}

/// Run the deterministic grid-plus-refinement search.
///
/// `energy` is typically built by [`make_energy_fn`]. Evaluation
/// failures abort the search, tagged with the offending point.
pub fn grid_refine_search(
    config: &SearchConfig,
    energy: &(dyn Fn(f64, f64) -> Result<f64> + Send + Sync),
) -> Result<SearchResult> {
    let steps = config.steps_per_unit()?;
    let better = |candidate: f64, incumbent: f64| match config.objective {
        Objective::Min => candidate < incumbent,
        Objective::Max => candidate > incumbent,
    };

    let mut eval = Evaluator::new(energy);

    // Round 0: the full grid, in lexicographic order so the fold below
    // honors the smallest-point tie rule.
    let mut den = steps;
    let full_grid: Vec<GridPoint> = (-den..=den)
        .flat_map(|ka| (-den..=den).map(move |kb| GridPoint { ka, kb, den }))
        .collect();
    let energies = eval.batch(&full_grid)?;
    let (mut best, mut best_energy) = full_grid
        .iter()
        .zip(&energies)
        .fold(None, |acc: Option<(GridPoint, f64)>, (p, &e)| match acc {
            Some((_, be)) if !better(e, be) => acc,
            _ => Some((*p, e)),
        })
        .expect("round-0 grid is nonempty");

    let mut trace = vec![RefineRound {
        round: 0,
        mesh: 1.0 / den as f64,
        alpha: best.alpha(),
        beta: best.beta(),
        energy: best_energy,
    }];

    for round in 1..=config.rounds {
        den *= 2;
        best = GridPoint {
            ka: best.ka * 2,
            kb: best.kb * 2,
            den,
        };
        let radius = config.neighborhood_radius;
        let mut candidates = Vec::with_capacity(((2 * radius + 1) * (2 * radius + 1)) as usize);
        for da in -radius..=radius {
            for db in -radius..=radius {
                let (ka, kb) = (best.ka + da, best.kb + db);
                if ka.abs() <= den && kb.abs() <= den {
                    candidates.push(GridPoint { ka, kb, den });
                }
            }
        }
        let energies = eval.batch(&candidates)?;
        for (p, &e) in candidates.iter().zip(&energies) {
            // strict improvement, so earlier (lexicographically smaller)
            // candidates win ties
            if better(e, best_energy) || (e == best_energy && (p.ka, p.kb) < (best.ka, best.kb)) {
                best = *p;
                best_energy = e;
            }
        }
        trace.push(RefineRound {
            round,
            mesh: 1.0 / den as f64,
            alpha: best.alpha(),
            beta: best.beta(),
            energy: best_energy,
        });
    }

    let refs: Vec<GridPoint> = [(0, 0), (-1, -1), (-1, 1), (1, -1), (1, 1)]
        .into_iter()
        .map(|(ka, kb)| GridPoint { ka, kb, den: 1 })
        .collect();
    let ref_energies = eval.batch(&refs)?;
    let energy_origin = ref_energies[0];
    let corner = |i: usize, a: f64, b: f64| CornerEnergy {
        alpha: a,
        beta: b,
        energy: ref_energies[i],
    };
    let corners = [
        corner(1, -1.0, -1.0),
        corner(2, -1.0, 1.0),
        corner(3, 1.0, -1.0),
        corner(4, 1.0, 1.0),
    ];

    Ok(SearchResult {
        objective: config.objective,
        alpha: best.alpha(),
        beta: best.beta(),
        energy: best_energy,
        energy_origin,
        corners,
        delta_e: match config.objective {
            Objective::Min => Some(energy_origin - best_energy),
            Objective::Max => None,
        },
        trace,
        final_mesh: config.final_mesh(),
    })
}

/// Verdict of one extremum check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    /// The odd-odd, odd-path minimum: no prediction exists.
    Undecided,
}

/// Search outcome compared against the predicted extremizers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumCheck {
    pub objective: Objective,
    /// Predicted extremizers in `(alpha, beta)` coordinates; empty for
    /// the open case.
    pub predicted: Vec<(f64, f64)>,
    /// Energy at the best predicted point (`None` for the open case).
    pub predicted_energy: Option<f64>,
    pub found_alpha: f64,
    pub found_beta: f64,
    pub found_energy: f64,
    /// Whether the found point lies within one final-mesh cell of a
    /// predicted point.
    pub within_cell: bool,
    pub verdict: Verdict,
}

/// Theorem verification report for one parameter triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub r: usize,
    pub s: usize,
    pub ell: usize,
    pub n: usize,
    pub case: ParityCase,
    /// Whether the mixed case swapped the cycles to canonical order.
    pub swapped: bool,
    pub minimum: ExtremumCheck,
    pub maximum: ExtremumCheck,
}

impl VerifyReport {
    /// `Fail` dominates, then `Undecided`, then `Pass`.
    pub fn overall(&self) -> Verdict {
        match (self.minimum.verdict, self.maximum.verdict) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
            _ => Verdict::Pass,
        }
    }
}

/// A point in the `(alpha, beta)` square.
type Point = (f64, f64);

/// Predicted extremizers per parity case, in canonical coordinates.
/// An empty minimum list marks the open case.
fn predictions(case: ParityCase, ell: usize) -> (Vec<Point>, Vec<Point>) {
    match case {
        ParityCase::EvenEven => (vec![(1.0, 1.0)], vec![(-1.0, -1.0)]),
        ParityCase::OddOdd if ell % 2 == 0 => (vec![(0.0, 0.0)], vec![(1.0, 1.0), (-1.0, -1.0)]),
        ParityCase::OddOdd => (Vec::new(), vec![(1.0, -1.0), (-1.0, 1.0)]),
        ParityCase::Mixed => (vec![(1.0, 0.0)], vec![(-1.0, 1.0), (-1.0, -1.0)]),
    }
}

/// Run min and max searches for `params` and compare the outcomes with
/// the predicted extremizers. Uses the Coulson route.
pub fn verify_theorem(params: &DumbbellParams, config: &SearchConfig) -> Result<VerifyReport> {
    let (canon, swapped) = params.canonical();
    let energy = make_energy_fn(&canon, EnergyRoute::Coulson, config.quad_tol);
    let (pred_min, pred_max) = predictions(canon.case(), canon.ell());
    let final_mesh = config.final_mesh();

    let check = |objective: Objective, predicted: Vec<(f64, f64)>| -> Result<ExtremumCheck> {
        let result = grid_refine_search(&config.with_objective(objective), energy.as_ref())?;
        if predicted.is_empty() {
            return Ok(ExtremumCheck {
                objective,
                predicted,
                predicted_energy: None,
                found_alpha: result.alpha,
                found_beta: result.beta,
                found_energy: result.energy,
                within_cell: false,
                verdict: Verdict::Undecided,
            });
        }
        let pred_energies = predicted
            .iter()
            .map(|&(a, b)| energy(a, b))
            .collect::<Result<Vec<f64>>>()?;
        let predicted_energy = pred_energies
            .iter()
            .copied()
            .reduce(|x, y| match objective {
                Objective::Min => x.min(y),
                Objective::Max => x.max(y),
            })
            .expect("nonempty predictions");
        let within_cell = predicted.iter().any(|&(a, b)| {
            (result.alpha - a).abs() <= final_mesh + 1e-12
                && (result.beta - b).abs() <= final_mesh + 1e-12
        });
        let beaten = match objective {
            Objective::Min => result.energy < predicted_energy - VERDICT_ENERGY_TOL,
            Objective::Max => result.energy > predicted_energy + VERDICT_ENERGY_TOL,
        };
        Ok(ExtremumCheck {
            objective,
            predicted,
            predicted_energy: Some(predicted_energy),
            found_alpha: result.alpha,
            found_beta: result.beta,
            found_energy: result.energy,
            within_cell,
            verdict: if within_cell && !beaten {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        })
    };

    Ok(VerifyReport {
        r: params.r(),
        s: params.s(),
        ell: params.ell(),
        n: params.n(),
        case: canon.case(),
        swapped,
        minimum: check(Objective::Min, pred_min)?,
        maximum: check(Objective::Max, pred_max)?,
    })
}

/// One row of the odd-odd-odd minimum scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub r: usize,
    pub s: usize,
    pub ell: usize,
    pub alpha: f64,
    pub beta: f64,
    pub energy_min: f64,
    pub energy_origin: f64,
    pub delta_e: f64,
    /// Minimum beats the origin by more than [`COUNTEREXAMPLE_MARGIN`].
    pub counterexample: bool,
    pub alpha_beta_product: f64,
    /// `|alpha* beta* - 1/4| < 0.02`.
    pub near_quarter: bool,
}

/// Census of the odd-odd-odd scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub total: usize,
    pub counterexamples: usize,
    /// Counterexamples whose minimizer product is near 1/4.
    pub near_quarter: usize,
}

/// Scan all odd triples in the given sets for minima beating the
/// origin. Triples run in parallel; output order is deterministic.
pub fn scan_odd_odd_odd(
    r_set: &[usize],
    s_set: &[usize],
    ell_set: &[usize],
    config: &SearchConfig,
) -> Result<ScanReport> {
    for (name, set) in [("r", r_set), ("s", s_set), ("ell", ell_set)] {
        if set.is_empty() {
            return Err(Error::BadScanRange(format!("{name} set is empty")));
        }
        if let Some(v) = set.iter().find(|v| *v % 2 == 0) {
            return Err(Error::BadScanRange(format!(
                "{name} set must be all odd, found {v}"
            )));
        }
    }
    let mut triples = Vec::new();
    for &r in r_set {
        for &s in s_set {
            for &ell in ell_set {
                triples.push(DumbbellParams::new(r, s, ell)?);
            }
        }
    }
    let min_config = config.with_objective(Objective::Min);
    let rows: Vec<ScanRow> = triples
        .par_iter()
        .map(|p| -> Result<ScanRow> {
            let energy = make_energy_fn(p, EnergyRoute::Coulson, min_config.quad_tol);
            let result = grid_refine_search(&min_config, energy.as_ref())?;
            let delta_e = result.energy_origin - result.energy;
            let product = result.alpha * result.beta;
            Ok(ScanRow {
                r: p.r(),
                s: p.s(),
                ell: p.ell(),
                alpha: result.alpha,
                beta: result.beta,
                energy_min: result.energy,
                energy_origin: result.energy_origin,
                delta_e,
                counterexample: delta_e > COUNTEREXAMPLE_MARGIN,
                alpha_beta_product: product,
                near_quarter: (product - 0.25).abs() < QUARTER_PRODUCT_TOL,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let counterexamples = rows.iter().filter(|r| r.counterexample).count();
    let near_quarter = rows
        .iter()
        .filter(|r| r.counterexample && r.near_quarter)
        .count();
    Ok(ScanReport {
        total: rows.len(),
        counterexamples,
        near_quarter,
        rows,
    })
}
