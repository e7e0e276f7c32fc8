//! Command implementations and report types behind the `gainspec`
//! binary.
//!
//! Every command produces a serializable payload wrapped in a
//! [`Report`] envelope. JSON output is lossless (exact integer tables
//! are emitted as strings); CSV output prints numeric fields with six
//! decimals.

use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::Serialize;

use crate::charpoly::{char_poly_dumbbell, even_even_coeffs};
use crate::coulson::{coulson_energy, mixed_coeffs, Kernel, DEFAULT_TOL};
use crate::graphs::{energy_eig, normalize_gains, DumbbellParams, GainSpec, ParityCase};
use crate::matchpoly::mrst_polys;
use crate::search::{
    scan_odd_odd_odd, verify_theorem, ScanReport, SearchConfig, Verdict, VerifyReport,
};
use crate::{Error, Result};

/// Report envelope shared by all commands.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub version: String,
    pub command: String,
    pub timestamp_epoch_s: u64,
    pub payload: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: impl Into<String>, payload: T) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            timestamp_epoch_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// How the gains were given on the command line.
#[derive(Debug, Clone, Copy)]
pub enum GainInput {
    /// Case coordinates in `[-1, 1]^2`.
    CaseCoords { alpha: f64, beta: f64 },
    /// Angles: `gamma = exp(i theta)` per cycle.
    Angles { theta_r: f64, theta_s: f64 },
}

impl GainInput {
    fn resolve(&self, params: &DumbbellParams) -> Result<GainSpec> {
        match *self {
            GainInput::CaseCoords { alpha, beta } => GainSpec::from_alpha_beta(params, alpha, beta),
            GainInput::Angles { theta_r, theta_s } => normalize_gains(
                params,
                Complex64::from_polar(1.0, theta_r),
                Complex64::from_polar(1.0, theta_s),
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMethod {
    Eig,
    Coulson,
    Both,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub r: usize,
    pub s: usize,
    pub ell: usize,
    pub n: usize,
    pub case: &'static str,
    pub swapped: bool,
    pub alpha: f64,
    pub beta: f64,
    pub gain_re_r: f64,
    pub gain_re_s: f64,
    pub method: &'static str,
    pub energy_eig: Option<f64>,
    pub energy_coulson: Option<f64>,
    pub discrepancy: Option<f64>,
}

/// Compute the energy of one dumbbell by the requested route(s).
pub fn cmd_energy(
    r: usize,
    s: usize,
    ell: usize,
    gains: GainInput,
    method: EnergyMethod,
) -> Result<EnergyReport> {
    let params = DumbbellParams::new(r, s, ell)?;
    let spec = gains.resolve(&params)?;
    let e_eig = match method {
        EnergyMethod::Eig | EnergyMethod::Both => Some(energy_eig(&params, &spec)?),
        EnergyMethod::Coulson => None,
    };
    let e_cou = match method {
        EnergyMethod::Coulson | EnergyMethod::Both => {
            let kernel = Kernel::for_params(&params);
            Some(coulson_energy(&kernel, spec.alpha, spec.beta, DEFAULT_TOL)?)
        }
        EnergyMethod::Eig => None,
    };
    Ok(EnergyReport {
        r,
        s,
        ell,
        n: params.n(),
        case: params.case().label(),
        swapped: spec.swapped,
        alpha: spec.alpha,
        beta: spec.beta,
        gain_re_r: spec.a,
        gain_re_s: spec.b,
        method: match method {
            EnergyMethod::Eig => "eig",
            EnergyMethod::Coulson => "coulson",
            EnergyMethod::Both => "both",
        },
        energy_eig: e_eig,
        energy_coulson: e_cou,
        discrepancy: match (e_eig, e_cou) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            _ => None,
        },
    })
}

pub fn energy_csv(r: &EnergyReport) -> String {
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
    let mut out =
        String::from("r,s,ell,n,case,swapped,alpha,beta,energy_eig,energy_coulson,discrepancy\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{:.6},{:.6},{},{},{}\n",
        r.r,
        r.s,
        r.ell,
        r.n,
        r.case,
        r.swapped,
        r.alpha,
        r.beta,
        opt(r.energy_eig),
        opt(r.energy_coulson),
        opt(r.discrepancy),
    ));
    out
}

/// Per-case exact coefficient tables (integers as strings so JSON
/// round-trips losslessly).
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelTables {
    /// `(M_k, R_k, S_k, T_k)` quadruples of the bipartite case.
    EvenEven { quads: Vec<[String; 4]> },
    /// The four recurrence polynomials in `u`.
    OddOdd {
        whole: Vec<String>,
        minus_cr: Vec<String>,
        minus_cs: Vec<String>,
        path_interior: Vec<String>,
    },
    /// Shift-applied matching-count tables of the mixed case.
    Mixed {
        whole: Vec<String>,
        minus_cr: Vec<String>,
        minus_cs: Vec<String>,
        path_interior: Vec<String>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct CharpolyReport {
    /// Parameters as given.
    pub r: usize,
    pub s: usize,
    pub ell: usize,
    /// Canonical orientation actually used.
    pub canonical_r: usize,
    pub canonical_s: usize,
    pub swapped: bool,
    pub case: &'static str,
    /// Real parts of the cycle gains, in canonical order.
    pub a: f64,
    pub b: f64,
    pub coefficients_high_to_low: Vec<f64>,
    pub tables: KernelTables,
}

/// Characteristic polynomial of a dumbbell with gain real parts `a`,
/// `b`, plus the case-specific exact tables.
pub fn cmd_charpoly(r: usize, s: usize, ell: usize, a: f64, b: f64) -> Result<CharpolyReport> {
    let params = DumbbellParams::new(r, s, ell)?;
    let (canon, swapped) = params.canonical();
    let (a, b) = if swapped { (b, a) } else { (a, b) };
    let poly = char_poly_dumbbell(&canon, a, b);
    let str_vec = |v: &[num_bigint::BigInt]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    let tables = match canon.case() {
        ParityCase::EvenEven => {
            let ee = even_even_coeffs(&canon)?;
            KernelTables::EvenEven {
                quads: (0..ee.len())
                    .map(|k| {
                        let q = ee.quad(k);
                        [
                            q[0].to_string(),
                            q[1].to_string(),
                            q[2].to_string(),
                            q[3].to_string(),
                        ]
                    })
                    .collect(),
            }
        }
        ParityCase::OddOdd => {
            let polys = mrst_polys(&canon)?;
            KernelTables::OddOdd {
                whole: str_vec(polys.whole.coeffs()),
                minus_cr: str_vec(polys.minus_cr.coeffs()),
                minus_cs: str_vec(polys.minus_cs.coeffs()),
                path_interior: str_vec(polys.path_interior.coeffs()),
            }
        }
        ParityCase::Mixed => {
            let mc = mixed_coeffs(&canon)?;
            KernelTables::Mixed {
                whole: str_vec(&mc.whole),
                minus_cr: str_vec(&mc.minus_cr),
                minus_cs: str_vec(&mc.minus_cs),
                path_interior: str_vec(&mc.path_interior),
            }
        }
    };
    Ok(CharpolyReport {
        r,
        s,
        ell,
        canonical_r: canon.r(),
        canonical_s: canon.s(),
        swapped,
        case: canon.case().label(),
        a,
        b,
        coefficients_high_to_low: poly.coeffs_high_to_low(),
        tables,
    })
}

pub fn charpoly_csv(r: &CharpolyReport) -> String {
    let mut out = String::from("degree,coefficient\n");
    let n = r.coefficients_high_to_low.len();
    for (i, c) in r.coefficients_high_to_low.iter().enumerate() {
        out.push_str(&format!("{},{:.6}\n", n - 1 - i, c));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseFilter {
    All,
    EvenEven,
    OddOdd,
    Mixed,
}

impl CaseFilter {
    pub fn parse(s: &str) -> Result<CaseFilter> {
        match s {
            "all" => Ok(CaseFilter::All),
            "ee" => Ok(CaseFilter::EvenEven),
            "oo" => Ok(CaseFilter::OddOdd),
            "mixed" => Ok(CaseFilter::Mixed),
            other => Err(Error::BadConfig(format!(
                "unknown case filter '{other}' (expected all|ee|oo|mixed)"
            ))),
        }
    }

    fn matches(&self, case: ParityCase) -> bool {
        matches!(
            (self, case),
            (CaseFilter::All, _)
                | (CaseFilter::EvenEven, ParityCase::EvenEven)
                | (CaseFilter::OddOdd, ParityCase::OddOdd)
                | (CaseFilter::Mixed, ParityCase::Mixed)
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyTable {
    pub nmax: usize,
    pub case_filter: String,
    pub config: SearchConfig,
    pub rows: Vec<VerifyReport>,
    pub pass: usize,
    pub fail: usize,
    pub undecided: usize,
}

/// Enumerate every triple of the selected case(s) with order at most
/// `nmax` (mixed case in canonical orientation only) and verify the
/// predicted extremizers.
pub fn cmd_verify(filter: CaseFilter, nmax: usize, config: &SearchConfig) -> Result<VerifyTable> {
    use rayon::prelude::*;
    let mut triples = Vec::new();
    for r in 3..=nmax {
        for s in 3..=nmax {
            for ell in 1..=nmax {
                if r + s + ell - 1 > nmax {
                    continue;
                }
                let Ok(p) = DumbbellParams::new(r, s, ell) else {
                    continue;
                };
                // mixed case: canonical orientation only, to avoid
                // isomorphic duplicates
                if p.case() == ParityCase::Mixed && r % 2 == 1 {
                    continue;
                }
                if filter.matches(p.case()) {
                    triples.push(p);
                }
            }
        }
    }
    let rows: Vec<VerifyReport> = triples
        .par_iter()
        .map(|p| verify_theorem(p, config))
        .collect::<Result<Vec<_>>>()?;
    let count = |v: Verdict| {
        rows.iter()
            .flat_map(|r| [r.minimum.verdict, r.maximum.verdict])
            .filter(|x| *x == v)
            .count()
    };
    Ok(VerifyTable {
        nmax,
        case_filter: format!("{filter:?}"),
        config: *config,
        pass: count(Verdict::Pass),
        fail: count(Verdict::Fail),
        undecided: count(Verdict::Undecided),
        rows,
    })
}

pub fn verify_csv(t: &VerifyTable) -> String {
    let mut out = String::from(
        "r,s,ell,n,case,swapped,min_alpha,min_beta,min_energy,min_verdict,max_alpha,max_beta,max_energy,max_verdict\n",
    );
    for row in &t.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:?},{:.6},{:.6},{:.6},{:?}\n",
            row.r,
            row.s,
            row.ell,
            row.n,
            row.case.label(),
            row.swapped,
            row.minimum.found_alpha,
            row.minimum.found_beta,
            row.minimum.found_energy,
            row.minimum.verdict,
            row.maximum.found_alpha,
            row.maximum.found_beta,
            row.maximum.found_energy,
            row.maximum.verdict,
        ));
    }
    out.push_str(&format!(
        "# pass={} fail={} undecided={}\n",
        t.pass, t.fail, t.undecided
    ));
    out
}

/// One reference row: `(r, s, ell, alpha, beta, E(alpha,beta), E(0,0), delta E)`.
pub type ReferenceRow = (usize, usize, usize, f64, f64, f64, f64, f64);

/// Reference values for the six representative odd-odd counterexample
/// rows.
pub const REFERENCE_ROWS: [ReferenceRow; 6] = [
    (3, 3, 1, 0.500000, 0.500000, 7.841619, 7.924777, 0.083158),
    (3, 3, 5, 0.197754, 0.197754, 13.000765, 13.000791, 0.000026),
    (5, 3, 1, 0.676172, 0.369727, 10.437006, 10.505533, 0.068526),
    (3, 7, 3, 0.312500, 0.800000, 15.562485, 15.598262, 0.035776),
    (3, 13, 5, 0.250000, 1.000000, 25.766721, 25.789227, 0.022507),
    (
        17, 17, 17, 0.500000, 0.500000, 64.068103, 64.073597, 0.005494,
    ),
];

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub r: usize,
    pub s: usize,
    pub ell: usize,
    pub alpha: f64,
    pub beta: f64,
    pub energy: f64,
    pub energy_origin: f64,
    pub delta_e: f64,
    pub ref_energy: f64,
    pub ref_energy_origin: f64,
    pub ref_delta_e: f64,
    pub diff_energy: f64,
    pub diff_energy_origin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
    pub max_abs_diff: f64,
}

/// Recompute the six reference rows and report per-cell differences.
pub fn cmd_table1() -> Result<Table1Report> {
    let mut rows = Vec::with_capacity(REFERENCE_ROWS.len());
    let mut max_abs_diff = 0.0f64;
    for &(r, s, ell, alpha, beta, ref_e, ref_e0, ref_de) in &REFERENCE_ROWS {
        let params = DumbbellParams::new(r, s, ell)?;
        let kernel = Kernel::for_params(&params);
        let energy = coulson_energy(&kernel, alpha, beta, DEFAULT_TOL)?;
        let energy_origin = coulson_energy(&kernel, 0.0, 0.0, DEFAULT_TOL)?;
        let delta_e = energy_origin - energy;
        let (diff_energy, diff_energy_origin) =
            ((energy - ref_e).abs(), (energy_origin - ref_e0).abs());
        max_abs_diff = max_abs_diff.max(diff_energy).max(diff_energy_origin);
        rows.push(Table1Row {
            r,
            s,
            ell,
            alpha,
            beta,
            energy,
            energy_origin,
            delta_e,
            ref_energy: ref_e,
            ref_energy_origin: ref_e0,
            ref_delta_e: ref_de,
            diff_energy,
            diff_energy_origin,
        });
    }
    Ok(Table1Report { rows, max_abs_diff })
}

pub fn table1_csv(t: &Table1Report) -> String {
    let mut out = String::from(
        "r,s,ell,alpha,beta,energy,energy_origin,delta_e,ref_energy,ref_energy_origin,ref_delta_e,diff_energy,diff_energy_origin\n",
    );
    for row in &t.rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            row.r,
            row.s,
            row.ell,
            row.alpha,
            row.beta,
            row.energy,
            row.energy_origin,
            row.delta_e,
            row.ref_energy,
            row.ref_energy_origin,
            row.ref_delta_e,
            row.diff_energy,
            row.diff_energy_origin,
        ));
    }
    out.push_str(&format!("# max_abs_diff={:.6}\n", t.max_abs_diff));
    out
}

/// Scan payload: the census plus an echo of the search configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ScanPayload {
    pub config: SearchConfig,
    #[serde(flatten)]
    pub report: ScanReport,
}

/// Run the odd-odd-odd counterexample scan.
pub fn cmd_scan(
    r_set: &[usize],
    s_set: &[usize],
    ell_set: &[usize],
    config: &SearchConfig,
) -> Result<ScanPayload> {
    Ok(ScanPayload {
        config: *config,
        report: scan_odd_odd_odd(r_set, s_set, ell_set, config)?,
    })
}

pub fn scan_csv(payload: &ScanPayload) -> String {
    let report = &payload.report;
    let mut out = String::from(
        "r,s,ell,alpha,beta,energy_min,energy_origin,delta_e,counterexample,alpha_beta_product\n",
    );
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{},{:.6}\n",
            row.r,
            row.s,
            row.ell,
            row.alpha,
            row.beta,
            row.energy_min,
            row.energy_origin,
            row.delta_e,
            row.counterexample,
            row.alpha_beta_product,
        ));
    }
    out.push_str(&format!(
        "# total={} counterexamples={} near_quarter={}\n",
        report.total, report.counterexamples, report.near_quarter
    ));
    out
}
