//! Orchestration: per-curve fiber pipelines, the fiber-conic experiment,
//! the reconstruction check, presets, and report persistence.
//!
//! Everything is a pure function of (config, master seed): candidate
//! pencil parameters are swept in a fixed order, fibers are analyzed in
//! parallel and merged back in parameter order, so reports are
//! byte-identical across thread counts.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{
    adjoint_basis, fiber_constraints, h0_twisted, in_column_space, mu0_tangent, pencil_fiber,
    scroll_vertex, secant_span, CanonicalFrame, PencilDivisor, PencilParam, SecantData,
    VanishingConstraint,
};
use crate::curve::{
    feasibility_params, points_equal_projective, random_nodal_curve_budget, validate_curve,
    CaseParams, NodalPlaneCurve,
};
use crate::error::{LabError, SkipReason};
use crate::field::Fp;
use crate::focal::{
    focal_matrix, one_generic_test, tangent_space_s, Classification, FocalTensor,
    OneGenericVerdict, RankLocusReport, TangentSpaceS,
};
use crate::matrix::Mat;
use crate::poly::monomials_of_degree;
use crate::second::{
    psi_assemble, second_foci_locus, vertex_partition_check, PartitionReport, SecondFociResult,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Run parameters. `fibers_per_curve` is the number of accepted fibers
/// collected per curve (at least 10, for classification stability).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub g: usize,
    pub d: usize,
    pub p: u32,
    pub master_seed: u64,
    pub curves: usize,
    pub fibers_per_curve: usize,
    pub t_max: usize,
    pub curve_retry_budget: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<CaseParams, LabError> {
        if self.fibers_per_curve < 10 {
            return Err(LabError::RangeViolation(
                "fibers_per_curve must be at least 10".into(),
            ));
        }
        let params = feasibility_params(self.g, self.d)?;
        // Degeneracies of random choices scale with the largest degree
        // occurring (the discriminant probe, degree e(e-1)).
        let max_degree = (params.e * (params.e - 1)) as u64;
        if (self.p as u64) < 2 * max_degree * max_degree {
            return Err(LabError::RangeViolation(format!(
                "p = {} too small; need at least {}",
                self.p,
                2 * max_degree * max_degree
            )));
        }
        Ok(params)
    }
}

/// Named presets covering both extremal regimes (d = g-1 and rho = 1)
/// and the genus-8 fiber-conic experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    G5D4,
    G6D5,
    G7D5,
    G8D6,
    PaperG8Conic,
}

impl Preset {
    pub fn from_name(name: &str) -> Option<Preset> {
        match name {
            "g5d4" => Some(Preset::G5D4),
            "g6d5" => Some(Preset::G6D5),
            "g7d5" => Some(Preset::G7D5),
            "g8d6" => Some(Preset::G8D6),
            "paper-g8-conic" => Some(Preset::PaperG8Conic),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::G5D4 => "g5d4",
            Preset::G6D5 => "g6d5",
            Preset::G7D5 => "g7d5",
            Preset::G8D6 => "g8d6",
            Preset::PaperG8Conic => "paper-g8-conic",
        }
    }

    pub fn config(&self, master_seed: u64) -> ExperimentConfig {
        let (g, d, curves, fibers) = match self {
            Preset::G5D4 => (5, 4, 3, 30),
            Preset::G6D5 => (6, 5, 3, 30),
            Preset::G7D5 => (7, 5, 3, 30),
            Preset::G8D6 => (8, 6, 5, 32),
            Preset::PaperG8Conic => (8, 6, 5, 35),
        };
        ExperimentConfig {
            g,
            d,
            p: crate::field::DEFAULT_PRIME,
            master_seed,
            curves,
            fibers_per_curve: fibers,
            t_max: 5,
            curve_retry_budget: 50,
            threads: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Per-fiber analysis
// ---------------------------------------------------------------------------

/// Everything the first-order pipeline produces for one accepted fiber.
pub struct FiberAnalysis {
    pub fiber: PencilDivisor,
    pub secant: SecantData,
    pub ts: TangentSpaceS,
    pub tensor: FocalTensor,
    pub report: RankLocusReport,
    pub one_generic: OneGenericVerdict,
    pub cohomology: CohomologyRecord,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CohomologyRecord {
    /// h^0(K - D); expected n = g - d + 1.
    pub h0_k_minus_d: usize,
    /// h^0(K - 2D); expected 0.
    pub h0_k_minus_2d: usize,
    /// h^0(L^2(-p_1-...-p_i)) = 2d - i + 1 - g for i = 1..rho+1.
    pub chain_ok: bool,
    pub all_expected: bool,
}

/// Runs the first-order pipeline on one pencil parameter.
pub fn analyze_fiber(
    curve: &NodalPlaneCurve,
    frame: &CanonicalFrame,
    params: &CaseParams,
    t: PencilParam,
    t_max: usize,
) -> Result<FiberAnalysis, SkipReason> {
    let reference = crate::focal::hilbert_reference_rnc(params.n, params.rho + 1, curve.p, t_max);
    analyze_fiber_with_reference(curve, frame, params, t, t_max, &reference)
}

/// As `analyze_fiber` with the per-shape reference Hilbert signature
/// precomputed (it is the same for every fiber of a curve).
pub fn analyze_fiber_with_reference(
    curve: &NodalPlaneCurve,
    frame: &CanonicalFrame,
    params: &CaseParams,
    t: PencilParam,
    t_max: usize,
    reference: &[usize],
) -> Result<FiberAnalysis, SkipReason> {
    let fiber = pencil_fiber(curve, t)?;
    let secant = secant_span(frame, &fiber)?;
    let ts = tangent_space_s(curve, &fiber, &secant, params.rho)?;
    let tensor = focal_matrix(&secant, &ts.basis);
    let report = crate::focal::hilbert_classify_with_reference(
        &tensor, &secant, params.d, t_max, reference,
    )?;
    let one_generic = one_generic_test(&tensor);
    let cohomology = cohomology_ledger(frame, &fiber, params);
    Ok(FiberAnalysis {
        fiber,
        secant,
        ts,
        tensor,
        report,
        one_generic,
        cohomology,
    })
}

/// The per-fiber cohomology checks via adjoint systems with multiplicity.
pub fn cohomology_ledger(
    frame: &CanonicalFrame,
    fiber: &PencilDivisor,
    params: &CaseParams,
) -> CohomologyRecord {
    let h0_k_minus_d = h0_twisted(frame, &fiber_constraints(fiber, 1)).unwrap_or(usize::MAX);
    let h0_k_minus_2d = h0_twisted(frame, &fiber_constraints(fiber, 2)).unwrap_or(usize::MAX);
    let mut chain_ok = true;
    for i in 1..=(params.rho + 1) {
        let constraints: Vec<VanishingConstraint> = fiber
            .points
            .iter()
            .zip(&fiber.tangents)
            .enumerate()
            .map(|(j, (pt, tan))| VanishingConstraint {
                point: *pt,
                tangent: Some(*tan),
                multiplicity: if j < i { 1 } else { 2 },
            })
            .collect();
        let h = h0_twisted(frame, &constraints).unwrap_or(usize::MAX);
        // Riemann-Roch: h^0(L^2(-p_1..p_i)) = (2d - i) - g + 1 + h,
        // expected 2d - i + 1 - g, i.e. h = 0.
        if h != 0 {
            chain_ok = false;
        }
    }
    let all_expected = h0_k_minus_d == params.n && h0_k_minus_2d == 0 && chain_ok;
    CohomologyRecord {
        h0_k_minus_d,
        h0_k_minus_2d,
        chain_ok,
        all_expected,
    }
}

/// Second-order outcome for one rational-normal-curve fiber.
pub struct SecondOrderAnalysis {
    pub a_identity: bool,
    pub rank_ge2: (usize, usize),
    pub foci: SecondFociResult,
    pub partition: PartitionReport,
}

pub fn second_order_analysis(
    curve: &NodalPlaneCurve,
    frame: &CanonicalFrame,
    analysis: &FiberAnalysis,
    vertex: &Mat<Fp>,
    params: &CaseParams,
) -> Result<SecondOrderAnalysis, SkipReason> {
    let rnc = analysis
        .report
        .rnc
        .as_ref()
        .expect("second order needs an RNC fiber");
    let psi = psi_assemble(
        curve,
        frame,
        &analysis.fiber,
        &analysis.secant,
        &analysis.ts,
        &analysis.tensor,
        rnc,
    )?;
    let foci = second_foci_locus(&psi, params.rho)?;
    let partition =
        vertex_partition_check(&foci, rnc, &analysis.secant, vertex, params.rho, params.d);
    Ok(SecondOrderAnalysis {
        a_identity: psi.a_identity,
        rank_ge2: psi.rank_ge2,
        foci,
        partition,
    })
}

// ---------------------------------------------------------------------------
// Fiber-conic experiment
// ---------------------------------------------------------------------------

/// Result of the residual-image rational-normal-curve test on one fiber.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FiberRncRow {
    pub t: String,
    /// Rank of the d x C(n+1, 2) quadric-evaluation (Veronese) matrix.
    pub veronese_rank: usize,
    /// Dimension of the space of quadrics through the image points.
    pub quadrics_through: usize,
    /// Whether the points can lie on a rational normal curve of the
    /// target (for n = 3: whether a conic through all d images exists).
    pub rnc_possible: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberRncReport {
    /// n >= 3 so the residual target is at least a plane.
    pub applicable: bool,
    /// d > n + 2, so general points would not lie on a rational normal
    /// curve and a positive finding would be significant.
    pub decisive: bool,
    pub reference_t: Option<String>,
    pub fibers_tested: usize,
    pub conics_found: usize,
    pub overlaps_skipped: usize,
    pub rows: Vec<FiberRncRow>,
}

/// Maps each fiber's points to P^{n-1} by the adjoints vanishing on the
/// reference fiber and tests whether the images lie on a rational normal
/// curve there (for n = 3, a conic).
pub fn fiber_rnc_experiment(
    frame: &CanonicalFrame,
    params: &CaseParams,
    reference: &FiberAnalysis,
    fibers: &[FiberAnalysis],
) -> FiberRncReport {
    let n = params.n;
    let mut report = FiberRncReport {
        applicable: n >= 3,
        decisive: params.d > n + 2,
        reference_t: Some(reference.fiber.param.label()),
        fibers_tested: 0,
        conics_found: 0,
        overlaps_skipped: 0,
        rows: Vec::new(),
    };
    if n < 3 {
        report.reference_t = None;
        return report;
    }
    // Basis of H^0(K - D_ref): adjoint coefficient vectors vanishing on
    // the reference fiber.
    let residual_basis = crate::canonical::vanishing_subspace(frame, &reference.fiber);
    debug_assert_eq!(residual_basis.len(), n);
    for analysis in fibers {
        if analysis.fiber.param == reference.fiber.param {
            continue;
        }
        // Disjointness from the reference fiber.
        let overlap = analysis.fiber.points.iter().any(|pt| {
            reference
                .fiber
                .points
                .iter()
                .any(|q| points_equal_projective(pt, q))
        });
        if overlap {
            report.overlaps_skipped += 1;
            continue;
        }
        let images: Vec<Vec<Fp>> = analysis
            .fiber
            .points
            .iter()
            .map(|pt| {
                let full = frame.image(pt);
                residual_basis
                    .iter()
                    .map(|b| {
                        let mut acc = Fp::zero(frame.p);
                        for (i, &c) in b.iter().enumerate() {
                            acc += c * full[i];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let row = rnc_through_points_test(&images, n, frame.p, analysis.fiber.param.label());
        if row.rnc_possible {
            report.conics_found += 1;
        }
        report.fibers_tested += 1;
        report.rows.push(row);
    }
    report
}

/// Veronese-rank test: for n = 3 a conic through the points exists iff
/// the rank of the quadratic-monomial evaluation matrix is below 6; for
/// n >= 4 a rational normal curve needs at least C(n-1, 2) independent
/// quadrics through the points (necessary condition).
pub fn rnc_through_points_test(images: &[Vec<Fp>], n: usize, p: u32, t: String) -> FiberRncRow {
    let monos = monomials_of_degree(n, 2);
    let rows: Vec<Vec<Fp>> = images
        .iter()
        .map(|pt| {
            monos
                .iter()
                .map(|m| {
                    let mut v = Fp::one(p);
                    for i in 0..n {
                        v *= pt[i].pow(m.exps[i] as u64);
                    }
                    v
                })
                .collect()
        })
        .collect();
    let rank = Mat::from_rows(&rows, p).rank();
    let through = monos.len() - rank;
    let needed = (n - 1) * (n - 2) / 2; // dim I_2 of a rational normal curve in P^{n-1}
    FiberRncRow {
        t,
        veronese_rank: rank,
        quadrics_through: through,
        rnc_possible: through >= needed.max(1),
    }
}

// ---------------------------------------------------------------------------
// Reconstruction (Torelli) check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorelliReport {
    pub fibers_used: usize,
    pub points_reconstructed: usize,
    pub points_matched: usize,
    /// Every sampled divisor point is reproduced by the reconstruction.
    pub coverage_ok: bool,
    /// Reconstructed points on neither the curve nor the vertex.
    pub extraneous_non_vertex: usize,
    pub pass: bool,
    pub detail: String,
}

/// Recovers, per fiber, the canonical points of the curve from the focal
/// data alone: the rank-one locus points for divisor-only fibers
/// (extracted from the quadrics by eigenvector methods), or the divisor
/// roots of the second-order locus for rational-normal-curve fibers.
/// Verifies that the reconstruction reproduces exactly the divisor
/// supports and that non-divisor roots lie in the vertex.
pub fn torelli_reconstruct(
    params: &CaseParams,
    analyses: &[FiberAnalysis],
    seconds: &[Option<SecondOrderAnalysis>],
    vertex: Option<&Mat<Fp>>,
    p: u32,
) -> TorelliReport {
    let mut fibers_used = 0;
    let mut reconstructed = 0;
    let mut matched = 0;
    let mut coverage_ok = true;
    let mut extraneous = 0;
    let mut detail = String::new();
    for (analysis, second) in analyses.iter().zip(seconds) {
        let divisor_images: Vec<Vec<Fp>> = (0..params.d)
            .map(|i| normalize_vec(analysis.secant.m.col(i)))
            .collect();
        let mut fiber_points: Vec<Vec<Fp>> = Vec::new();
        let mut fiber_extra: Vec<Vec<Fp>> = Vec::new();
        match analysis.report.classification {
            Classification::DivisorOnly => {
                let Some(pts) = crate::zerodim::extract_points(
                    &analysis.report.minors,
                    analysis.tensor.nvars,
                    p,
                    params.d,
                ) else {
                    detail.push_str("extraction failed on a divisor-only fiber; ");
                    coverage_ok = false;
                    continue;
                };
                for lambda in pts {
                    fiber_points.push(normalize_vec(analysis.secant.embed(&lambda)));
                }
            }
            Classification::Rnc => {
                let Some(so) = second else {
                    detail.push_str("second-order data missing on an RNC fiber; ");
                    coverage_ok = false;
                    continue;
                };
                let rnc = analysis.report.rnc.as_ref().unwrap();
                let divisor_params: Vec<(Fp, Fp)> =
                    rnc.divisor_params.iter().map(|t| (t.0, t.1)).collect();
                for ((t0, t1), _) in &so.foci.rational_roots {
                    let lambda = rnc.eval(*t0, *t1);
                    let embedded = normalize_vec(analysis.secant.embed(&lambda));
                    let is_divisor_param = divisor_params
                        .iter()
                        .any(|&(a0, a1)| (*t0 * a1 - *t1 * a0).is_zero());
                    if is_divisor_param {
                        fiber_points.push(embedded);
                    } else {
                        fiber_extra.push(embedded);
                    }
                }
            }
            Classification::Degenerate => {
                coverage_ok = false;
                continue;
            }
        }
        fibers_used += 1;
        reconstructed += fiber_points.len() + fiber_extra.len();
        // (i) every reconstructed curve point is a divisor point.
        let mut hit = vec![false; divisor_images.len()];
        for pt in &fiber_points {
            match divisor_images.iter().position(|q| q == pt) {
                Some(i) => {
                    hit[i] = true;
                    matched += 1;
                }
                None => extraneous += 1,
            }
        }
        // (ii) coverage: all d divisor points reproduced.
        if !hit.iter().all(|&h| h) {
            coverage_ok = false;
        }
        // (iii) non-divisor roots must lie in the vertex.
        for pt in &fiber_extra {
            let in_vertex = vertex.map(|v| in_column_space(v, pt)).unwrap_or(false);
            if !in_vertex {
                extraneous += 1;
            }
        }
    }
    let pass = coverage_ok && extraneous == 0 && fibers_used > 0;
    if fibers_used < 20 {
        detail.push_str(&format!(
            "only {} fibers available (20 requested); ",
            fibers_used
        ));
    }
    TorelliReport {
        fibers_used,
        points_reconstructed: reconstructed,
        points_matched: matched,
        coverage_ok,
        extraneous_non_vertex: extraneous,
        pass,
        detail,
    }
}

fn normalize_vec(mut v: Vec<Fp>) -> Vec<Fp> {
    if let Some(c) = v.iter().find(|c| !c.is_zero()) {
        let inv = c.inv().unwrap();
        for x in v.iter_mut() {
            *x *= inv;
        }
    }
    v
}

// ---------------------------------------------------------------------------
// Serialized report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub curves: Vec<CurveReport>,
    pub timing: TimingReport,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct TimingReport {
    pub generation_ms: u64,
    pub analysis_ms: u64,
    pub total_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveReport {
    pub curve_ref: String,
    pub seed: u64,
    pub census: CensusReport,
    pub fibers: Vec<FiberRecord>,
    pub geometry: GeometryReport,
    pub experiments: ExperimentsReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusReport {
    pub attempted: usize,
    pub accepted: usize,
    pub skipped: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryReport {
    /// rho + 1, the expected tangent dimension at every accepted fiber.
    pub ts_dim_expected: usize,
    /// dim T_L W^1_d from the mu_0 annihilator (expected rho).
    pub tangent_space_dim: Option<usize>,
    /// Projective dimension of the scroll vertex (expected rho - 1).
    pub vertex_projective_dim: Option<i64>,
    /// Vertex from span intersections equals the mu_0 annihilator.
    pub vertex_matches_mu0: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberRecord {
    pub t: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_generic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor_contained: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranks_at_divisor: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<Vec<usize>>,
    /// Degree of the rank-one-locus parametrization (rnc fibers only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rnc_degree: Option<usize>,
    /// Divisor points located on the parametrized curve (rnc fibers only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rnc_divisor_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_order: Option<SecondOrderRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondOrderRecord {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_degree: Option<usize>,
    pub bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equality_at_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition_pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_factor_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_identity: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_ge2_hits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_ge2_samples: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentsReport {
    pub fiber_rnc: FiberRncReport,
    pub torelli: TorelliReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_pencil: Option<CrossPencilReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossPencilReport {
    pub marked_node_index: usize,
    pub fibers_compared: usize,
    pub classifications_agree: bool,
}

// ---------------------------------------------------------------------------
// The pipeline
// ---------------------------------------------------------------------------

/// Collects accepted fibers for one curve by sweeping the pencil in the
/// fixed parameter order; candidate chunks are analyzed in parallel and
/// merged in order, so the outcome is thread-count independent.
pub struct CurveRun {
    pub curve: NodalPlaneCurve,
    pub frame: CanonicalFrame,
    pub accepted: Vec<FiberAnalysis>,
    pub skips: BTreeMap<String, usize>,
    /// Skips past the split stage, individually, in sweep order.
    pub notable_skips: Vec<(PencilParam, SkipReason)>,
    pub attempted: usize,
    pub vertex: Option<Mat<Fp>>,
    pub mu0_dim: Option<usize>,
    pub vertex_matches_mu0: Option<bool>,
    pub seconds: Vec<Option<SecondOrderAnalysis>>,
    pub second_skips: Vec<Option<SkipReason>>,
}

pub fn run_curve(
    curve: NodalPlaneCurve,
    params: &CaseParams,
    target_fibers: usize,
    t_max: usize,
) -> Result<CurveRun, LabError> {
    run_curve_opts(curve, params, target_fibers, t_max, true)
}

/// As `run_curve`, with the second-order pass optional.
pub fn run_curve_opts(
    curve: NodalPlaneCurve,
    params: &CaseParams,
    target_fibers: usize,
    t_max: usize,
    second_order: bool,
) -> Result<CurveRun, LabError> {
    let p = curve.p;
    let frame = adjoint_basis(&curve)?;
    let sweep: Vec<PencilParam> = PencilParam::sweep(p).collect();
    let reference = crate::focal::hilbert_reference_rnc(params.n, params.rho + 1, p, t_max);
    let mut accepted: Vec<FiberAnalysis> = Vec::new();
    let mut skips: BTreeMap<String, usize> = BTreeMap::new();
    let mut notable_skips: Vec<(PencilParam, SkipReason)> = Vec::new();
    let mut attempted = 0usize;
    for chunk in sweep.chunks(4096) {
        if accepted.len() >= target_fibers {
            break;
        }
        let results: Vec<(PencilParam, Result<FiberAnalysis, SkipReason>)> = chunk
            .par_iter()
            .map(|&t| {
                (
                    t,
                    analyze_fiber_with_reference(&curve, &frame, params, t, t_max, &reference),
                )
            })
            .collect();
        for (t, res) in results {
            if accepted.len() >= target_fibers {
                break;
            }
            attempted += 1;
            match res {
                Ok(a) => accepted.push(a),
                Err(reason) => {
                    *skips.entry(reason.to_string()).or_insert(0) += 1;
                    // Fibers that split but failed downstream are rare
                    // and interesting; record them individually.
                    if !matches!(reason, SkipReason::NotSplit | SkipReason::DegenerateLine) {
                        notable_skips.push((t, reason));
                    }
                }
            }
        }
    }
    // Pencil-level geometry from the first accepted fibers.
    let (vertex, mu0_dim, vertex_matches_mu0) = if accepted.len() >= 3 {
        let refs: Vec<&SecantData> = accepted.iter().take(3).map(|a| &a.secant).collect();
        let vertex = scroll_vertex(&refs, params.rho).ok();
        let mu = mu0_tangent(&frame, &accepted[0].fiber, &accepted[1].fiber, params.rho).ok();
        let matches = match (&vertex, &mu) {
            (Some(v), Some(m)) => Some(v.transpose().row_basis() == m.tangent_space.row_basis()),
            _ => None,
        };
        (vertex, mu.map(|m| m.tangent_space.nrows()), matches)
    } else {
        (None, None, None)
    };
    // Second-order pass for RNC fibers, in parallel, merged in order.
    let pairs: Vec<(Option<SecondOrderAnalysis>, Option<SkipReason>)> = accepted
        .par_iter()
        .map(|analysis| {
            if !second_order || analysis.report.classification != Classification::Rnc {
                return (None, None);
            }
            let Some(v) = &vertex else {
                return (None, Some(SkipReason::VertexDimUnexpected));
            };
            match second_order_analysis(&curve, &frame, analysis, v, params) {
                Ok(s) => (Some(s), None),
                Err(r) => (None, Some(r)),
            }
        })
        .collect();
    let (seconds, second_skips): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(CurveRun {
        curve,
        frame,
        accepted,
        skips,
        notable_skips,
        attempted,
        vertex,
        mu0_dim,
        vertex_matches_mu0,
        seconds,
        second_skips,
    })
}

fn fiber_record(
    analysis: &FiberAnalysis,
    second: &Option<SecondOrderAnalysis>,
    second_skip: &Option<SkipReason>,
    d: usize,
    rho: usize,
) -> FiberRecord {
    let one_generic = match &analysis.one_generic {
        OneGenericVerdict::GenericExact => "exact".to_string(),
        OneGenericVerdict::GenericSampled(k) => format!("sampled({})", k),
        OneGenericVerdict::NotGeneric { .. } => "not_generic".to_string(),
    };
    let classification = match analysis.report.classification {
        Classification::DivisorOnly => "divisor_only",
        Classification::Rnc => "rnc",
        Classification::Degenerate => "degenerate",
    };
    let second_order = match (second, second_skip) {
        (Some(s), _) => Some(SecondOrderRecord {
            status: "ok".into(),
            total_degree: s.foci.total_degree,
            bound: d + rho,
            within_bound: Some(s.partition.within_bound),
            equality_at_bound: Some(s.partition.equality_at_bound),
            partition_pass: Some(s.partition.pass),
            vertex_factor_degree: s.partition.vertex_factor_degree,
            a_identity: Some(s.a_identity),
            rank_ge2_hits: Some(s.rank_ge2.0),
            rank_ge2_samples: Some(s.rank_ge2.1),
        }),
        (None, Some(reason)) => Some(SecondOrderRecord {
            status: reason.to_string(),
            total_degree: None,
            bound: d + rho,
            within_bound: None,
            equality_at_bound: None,
            partition_pass: None,
            vertex_factor_degree: None,
            a_identity: None,
            rank_ge2_hits: None,
            rank_ge2_samples: None,
        }),
        (None, None) => None,
    };
    FiberRecord {
        t: analysis.fiber.param.label(),
        status: "accepted".into(),
        classification: Some(classification.into()),
        one_generic: Some(one_generic),
        divisor_contained: Some(analysis.report.divisor_contained),
        ranks_at_divisor: Some(analysis.report.ranks_at_divisor.clone()),
        hilbert: Some(analysis.report.hilbert.clone()),
        rnc_degree: analysis.report.rnc.as_ref().map(|r| r.gamma[0].degree),
        rnc_divisor_points: analysis.report.rnc.as_ref().map(|r| r.divisor_params.len()),
        cohomology: Some(analysis.cohomology.clone()),
        second_order,
    }
}

/// Cross-pencil consistency: re-mark a different node (a different point
/// of W^1_d) and compare classifications on a few fibers.
fn cross_pencil_check(
    base: &NodalPlaneCurve,
    params: &CaseParams,
    t_max: usize,
) -> Option<CrossPencilReport> {
    for marked in 1..base.nodes.len().min(4) {
        let mut curve = base.clone();
        curve.marked_node_index = marked;
        if !validate_curve(&curve).all_pass() {
            continue;
        }
        let run = run_curve(curve, params, 5, t_max).ok()?;
        if run.accepted.len() < 5 {
            continue;
        }
        let all_same = run
            .accepted
            .iter()
            .map(|a| a.report.classification)
            .collect::<Vec<_>>();
        let agree = all_same.windows(2).all(|w| w[0] == w[1]);
        return Some(CrossPencilReport {
            marked_node_index: marked,
            fibers_compared: run.accepted.len(),
            classifications_agree: agree
                && all_same.first().copied() == Some(base_classification_hint(params)),
        });
    }
    None
}

/// The classification the base pencil is expected to produce; used only
/// to compare pencils of one curve against each other.
fn base_classification_hint(params: &CaseParams) -> Classification {
    if params.rho == 1 || params.d == params.g - 1 {
        Classification::Rnc
    } else {
        Classification::DivisorOnly
    }
}

/// Runs the full experiment: curves, fibers, first- and second-order
/// analysis, and both experiments, returning the serializable report.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport, LabError> {
    match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| LabError::Other(e.to_string()))?;
            pool.install(|| run_experiment_inner(config))
        }
        None => run_experiment_inner(config),
    }
}

fn run_experiment_inner(config: &ExperimentConfig) -> Result<RunReport, LabError> {
    let params = config.validate()?;
    let total_start = Instant::now();
    let mut curve_reports = Vec::with_capacity(config.curves);
    let mut generation_ms = 0u64;
    let mut analysis_ms = 0u64;
    for idx in 0..config.curves {
        let seed = config.master_seed + idx as u64;
        let gen_start = Instant::now();
        let curve = random_nodal_curve_budget(&params, config.p, seed, config.curve_retry_budget)?;
        generation_ms += gen_start.elapsed().as_millis() as u64;
        let an_start = Instant::now();
        let run = run_curve(curve, &params, config.fibers_per_curve, config.t_max)?;
        let mut fibers: Vec<FiberRecord> = run
            .accepted
            .iter()
            .zip(run.seconds.iter().zip(&run.second_skips))
            .map(|(a, (s, sk))| fiber_record(a, s, sk, params.d, params.rho))
            .collect();
        for (t, reason) in &run.notable_skips {
            fibers.push(FiberRecord {
                t: t.label(),
                status: reason.to_string(),
                classification: None,
                one_generic: None,
                divisor_contained: None,
                ranks_at_divisor: None,
                hilbert: None,
                rnc_degree: None,
                rnc_divisor_points: None,
                cohomology: None,
                second_order: None,
            });
        }
        let fiber_rnc = if let Some(reference) = run.accepted.first() {
            fiber_rnc_experiment(&run.frame, &params, reference, &run.accepted[1..])
        } else {
            FiberRncReport {
                applicable: params.n >= 3,
                decisive: false,
                reference_t: None,
                fibers_tested: 0,
                conics_found: 0,
                overlaps_skipped: 0,
                rows: Vec::new(),
            }
        };
        let torelli = torelli_reconstruct(
            &params,
            &run.accepted,
            &run.seconds,
            run.vertex.as_ref(),
            config.p,
        );
        let cross_pencil = if params.rho >= 2 {
            cross_pencil_check(&run.curve, &params, config.t_max)
        } else {
            None
        };
        analysis_ms += an_start.elapsed().as_millis() as u64;
        curve_reports.push(CurveReport {
            curve_ref: format!("g{}d{}-seed{}", params.g, params.d, seed),
            seed,
            census: CensusReport {
                attempted: run.attempted,
                accepted: run.accepted.len(),
                skipped: run.skips.clone(),
            },
            fibers,
            geometry: GeometryReport {
                ts_dim_expected: params.rho + 1,
                tangent_space_dim: run.mu0_dim,
                vertex_projective_dim: run.vertex.as_ref().map(|v| v.ncols() as i64 - 1),
                vertex_matches_mu0: run.vertex_matches_mu0,
            },
            experiments: ExperimentsReport {
                fiber_rnc,
                torelli,
                cross_pencil,
            },
        });
    }
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        curves: curve_reports,
        timing: TimingReport {
            generation_ms,
            analysis_ms,
            total_ms: total_start.elapsed().as_millis() as u64,
        },
    })
}

pub fn run_preset(preset: Preset, master_seed: u64) -> Result<RunReport, LabError> {
    run_experiment(&preset.config(master_seed))
}

// ---------------------------------------------------------------------------
// Report io
// ---------------------------------------------------------------------------

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable report");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<RunReport, LabError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Deterministic byte form: identical for identical (config, seed)
    /// across thread counts. Wall-clock timing is zeroed; everything
    /// else is part of the contract.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.timing = TimingReport::default();
        clone.config.threads = None;
        clone.to_json()
    }

    pub fn write_to(&self, path: &std::path::Path) -> Result<(), LabError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read_from(path: &std::path::Path) -> Result<RunReport, LabError> {
        let s = std::fs::read_to_string(path)?;
        RunReport::from_json(&s)
    }
}
