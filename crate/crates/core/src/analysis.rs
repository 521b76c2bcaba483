//! End-to-end pipeline: Garland poset, spectra, criterion, exact cohomology
//! and the explicit structure, with the cross-checks between them.

use serde::Serialize;

use crate::cohomology::{cohomology_report, CohomologyReport};
use crate::complex::ComplexKind;
use crate::error::Result;
use crate::exactness::{self, AlphaBetaReport, Identity};
use crate::garland::{build_garland, GarlandPoset, GarlandSummary};
use crate::linalg::RankMode;
use crate::monodromy::{check_monodromy_free, MonodromyReport};
use crate::poset::FacePoset;
use crate::spectral::{
    evaluate_criterion, serialize_extended, spectral_report, CriterionVerdict, SpectralReport,
    Status, DEFAULT_BAND, DEFAULT_TOL,
};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub tol: f64,
    pub band: f64,
    pub rank_mode: RankMode,
    pub seed: u64,
    /// Run the exact identity suite (projections, adjoints, norms).
    pub identities: bool,
    /// Random vectors for the Rayleigh identity.
    pub rayleigh_samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: DEFAULT_TOL,
            band: DEFAULT_BAND,
            rank_mode: RankMode::Exact,
            seed: 0,
            identities: false,
            rayleigh_samples: 0,
        }
    }
}

/// Default analysis level: one below the top dimension.
pub fn default_level(fp: &FacePoset) -> usize {
    fp.max_dim().unwrap_or(0).saturating_sub(1)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralAnalysis {
    pub garland: GarlandSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<MonodromyReport>,
    pub spectra: SpectralReport,
    pub criterion: CriterionVerdict,
}

/// Builds the Garland poset at `level` and evaluates the spectral criterion.
pub fn analyze(
    fp: &FacePoset,
    level: usize,
    opts: &Options,
) -> Result<(GarlandPoset, SpectralAnalysis)> {
    let g = build_garland(fp, level)?;
    let monodromy = match fp.kind() {
        ComplexKind::Cubical => Some(check_monodromy_free(fp, &g.link)?),
        ComplexKind::Simplicial => None,
    };
    let spectra = spectral_report(&g.link, opts.tol)?;
    let criterion = evaluate_criterion(&spectra, level, fp.kind(), opts.tol, opts.band);
    let analysis = SpectralAnalysis {
        garland: g.summary(fp),
        monodromy,
        spectra,
        criterion,
    };
    Ok((g, analysis))
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremReport {
    pub level: usize,
    pub kind: ComplexKind,
    pub verdict: Status,
    #[serde(serialize_with = "serialize_extended")]
    pub min_gap: f64,
    pub threshold: String,
    pub cohomology: CohomologyReport,
    pub exactness: AlphaBetaReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy_free: Option<bool>,
    /// `|α − min gap|`, finite gaps only.
    pub alpha_gap_residual: f64,
    /// `β < α ⇒ h⁰(B) = 0`.
    pub theorem_sound: bool,
    /// criterion holds ⇒ `b_k = dim(L + T)`.
    pub corollary_sound: bool,
    pub conclusion: String,
}

impl TheoremReport {
    pub fn consistent(&self) -> bool {
        self.cohomology.consistent && self.theorem_sound && self.corollary_sound
    }
}

fn describe(verdict: Status, conclusion_holds: bool) -> String {
    let c = if conclusion_holds { "holds" } else { "fails" };
    format!("criterion {verdict}, conclusion {c}")
}

/// Runs criterion, cohomology and the explicit structure and cross-checks
/// them.
pub fn theorem_check(fp: &FacePoset, level: usize, opts: &Options) -> Result<TheoremReport> {
    let (g, spectral) = analyze(fp, level, opts)?;
    let e = exactness::assemble(&g)?;
    let exactness = if opts.identities {
        exactness::analyze_structure(&e, opts.rank_mode, opts.seed, opts.rayleigh_samples)?
    } else {
        let (alpha, per_a) = exactness::alpha(&e)?;
        let beta = exactness::beta(&e)?;
        let blocks = exactness::verify_block_decomposition(&e, opts.rank_mode);
        let constants = e.constants;
        AlphaBetaReport {
            alpha,
            beta,
            beta_bound: (constants.n0 - constants.n010) as f64 / constants.n0 as f64,
            h0b: exactness::h0_dim(&e, opts.rank_mode),
            per_a,
            identities: Vec::<Identity>::new(),
            blocks_exact: blocks.all_exact,
        }
    };
    let cohomology = cohomology_report(&g, fp, exactness.h0b, opts.rank_mode)?;
    let min_gap = spectral.spectra.min_gap;
    let alpha_gap_residual = if min_gap.is_finite() || exactness.alpha.is_finite() {
        (exactness.alpha - min_gap).abs()
    } else {
        0.0
    };
    let verdict = spectral.criterion.overall;
    let conclusion_holds = cohomology.betti_at_level() == cohomology.dim_lt;
    Ok(TheoremReport {
        level,
        kind: fp.kind(),
        verdict,
        min_gap,
        threshold: spectral.criterion.threshold.to_string(),
        theorem_sound: exactness.theorem_holds(),
        corollary_sound: verdict != Status::Holds || conclusion_holds,
        conclusion: describe(verdict, conclusion_holds),
        monodromy_free: spectral.monodromy.as_ref().map(|m| m.free),
        alpha_gap_residual,
        cohomology,
        exactness,
    })
}

/// Convenience wrapper for callers holding an [`AlphaBetaReport`] with
/// identities.
pub fn failed_identities(report: &AlphaBetaReport) -> Vec<&Identity> {
    report.identities.iter().filter(|i| !i.pass).collect()
}
