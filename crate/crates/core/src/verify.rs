//! Named quantitative checks over a single sequence.
//!
//! Every check records a status, the residual or slack it measured, and the
//! constants it compared against. Reports are assembled in a fixed order so
//! that identical inputs serialize identically.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    log_band_constant, one_minus_pseudo_dist_sq, separation_profile, sort_by_delta, PointSequence,
    SeparationProfile, NEAR_DUPLICATE_WARNING,
};
use crate::gram::{
    build_corrector, build_gram, column_deficiency, eqc1_residual_capped, koosis_residual_capped,
    DiagonalCorrector, GramMatrix, DEFAULT_COND_CAP,
};
use crate::interpolation::{earl_bound_minus_one, interp_constant_lower, ss_bounds};
use crate::spectral::{
    gram_minus_identity, lp_norm, power_sum, tail_chain, zhu_column_sum, CMatrix, Exponent,
    HermitianEigen, SpectralSummary,
};

/// Slack allowed in the interpolation sandwich.
pub const INTERPOLATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Identities,
    Inequalities,
    Tail,
    Interpolation,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "all" => Ok(Suite::All),
            "identities" => Ok(Suite::Identities),
            "inequalities" => Ok(Suite::Inequalities),
            "tail" => Ok(Suite::Tail),
            "interpolation" => Ok(Suite::Interpolation),
            _ => Err(format!("unknown suite `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifierConfig {
    pub tol_identity: f64,
    pub tol_ineq: f64,
    pub ps: Vec<Exponent>,
    pub cond_cap: f64,
    /// Random unimodular target vectors tried on top of the sign patterns.
    pub trials: usize,
    pub seed: u64,
    pub suite: Suite,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        Self {
            tol_identity: 1e-9,
            tol_ineq: 1e-10,
            ps: vec![
                Exponent::Finite(2.0),
                Exponent::Finite(3.0),
                Exponent::Finite(4.0),
                Exponent::Infinity,
            ],
            cond_cap: DEFAULT_COND_CAP,
            trials: 32,
            seed: 0,
            suite: Suite::All,
        }
    }
}

impl VerifierConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !(ok(self.tol_identity) && ok(self.tol_ineq) && ok(self.cond_cap)) {
            return Err(Error::InvalidSpec(
                "verifier tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Info,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Residual for identities, slack for inequalities, the measured value for INFO.
    pub value: f64,
    pub p: Option<Exponent>,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, status: Status, value: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status,
            value,
            p: None,
            detail: detail.into(),
        }
    }

    fn at(mut self, p: Exponent) -> Self {
        self.p = Some(p);
        self
    }

    fn pass_if(name: impl Into<String>, ok: bool, value: f64, detail: impl Into<String>) -> Self {
        Self::new(
            name,
            if ok { Status::Pass } else { Status::Fail },
            value,
            detail,
        )
    }

    fn vacuous(name: impl Into<String>) -> Self {
        Self::new(name, Status::Pass, 0.0, "vacuous")
    }

    fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::new(name, Status::Skipped, f64::NAN, reason)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Fingerprint {
    pub n: usize,
    pub delta_min: f64,
    pub cond_g: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub fingerprint: Fingerprint,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl VerificationReport {
    /// False iff some check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Everything the checks share, computed once per sequence.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub seq: PointSequence,
    pub gram: GramMatrix,
    pub gmi: CMatrix,
    pub profile: SeparationProfile,
    pub corrector: DiagonalCorrector,
    pub summary: SpectralSummary,
}

impl Analysis {
    pub fn new(seq: &PointSequence, ps: &[Exponent]) -> Result<Self> {
        let gram = build_gram(seq)?;
        let gmi = gram_minus_identity(&gram);
        let profile = separation_profile(seq)?;
        let corrector = build_corrector(seq)?;
        let eig = HermitianEigen::values_only(gram.matrix())?;
        let summary = SpectralSummary::from_eigenvalues(eig.values, ps)?;
        Ok(Self {
            seq: seq.clone(),
            gram,
            gmi,
            profile,
            corrector,
            summary,
        })
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    fn ill_conditioned(&self, cfg: &VerifierConfig) -> bool {
        !(self.summary.cond_g <= cfg.cond_cap)
    }

    /// `sum_n (1 - delta_n^2)^(p/2)`, or the max of `sqrt(1 - delta_n^2)` for `p = inf`.
    pub fn delta_sq_norm(&self, p: Exponent) -> f64 {
        let xs: Vec<f64> = (0..self.n())
            .map(|j| self.profile.one_minus_delta_sq(j).sqrt())
            .collect();
        lp_norm(&xs, p)
    }

    /// `||sqrt(1 - delta_n)||_p`.
    pub fn sqrt_gap_norm(&self, p: Exponent) -> f64 {
        let xs: Vec<f64> = (0..self.n())
            .map(|j| self.profile.one_minus_delta(j).sqrt())
            .collect();
        lp_norm(&xs, p)
    }

    pub fn band_constant(&self) -> f64 {
        log_band_constant(self.profile.log_delta_min())
    }
}

fn le_with(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * a.abs().max(b.abs()).max(1.0)
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn identity_check(name: &str, residual: Result<f64>, tol: f64) -> Check {
    match residual {
        Ok(r) => Check::pass_if(
            name,
            r <= tol,
            r,
            format!("relative Frobenius residual, tol {tol:e}"),
        ),
        Err(Error::IllConditioned { cond, cap }) => Check::skipped(
            name,
            format!("condition number {cond:e} exceeds cap {cap:e}"),
        ),
        Err(e) => Check::skipped(name, e.to_string()),
    }
}

/// Gram-core identities: the inverse formula, its `G^{-1} - I` split, the
/// diagonal of `D*D - I`, the entry moduli and the trace.
pub fn check_identities(a: &Analysis, cfg: &VerifierConfig) -> Vec<Check> {
    let n = a.n();
    let mut out = Vec::new();
    out.push(identity_check(
        "koosis_identity",
        koosis_residual_capped(&a.seq, cfg.cond_cap),
        cfg.tol_identity,
    ));
    out.push(identity_check(
        "inverse_split_identity",
        eqc1_residual_capped(&a.seq, cfg.cond_cap),
        cfg.tol_identity,
    ));

    let corr = (0..n)
        .map(|j| {
            let got = a.corrector.entries[j].norm_sqr() - 1.0;
            let want = (-2.0 * a.profile.log_delta[j]).exp_m1();
            (got - want).abs() / want.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    out.push(Check::pass_if(
        "corrector_diagonal",
        corr <= cfg.tol_identity,
        corr,
        "|D_jj|^2 - 1 against 1/delta_j^2 - 1",
    ));

    let pts = a.seq.points();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            let lhs = a.gram.get(i, j).norm_sqr();
            let rhs = one_minus_pseudo_dist_sq(&pts[i], &pts[j]);
            worst = worst.max(rel_diff(lhs, rhs));
        }
    }
    out.push(Check::pass_if(
        "entry_modulus_identity",
        worst <= cfg.tol_identity,
        worst,
        "|G_ij|^2 against 1 - rho_ij^2",
    ));

    let trace: f64 = a.summary.eigs_g.iter().sum();
    let r = if n == 0 {
        0.0
    } else {
        (trace - n as f64).abs() / n as f64
    };
    out.push(Check::pass_if(
        "trace_consistency",
        r <= cfg.tol_identity,
        r,
        "sum of eigenvalues against n",
    ));
    out
}

/// Per index: the exact column identity and the comparison band
/// `[1/C, C]` with `C = -ln(delta^2) / (1 - delta^2)` at `delta_min`.
pub fn check_lemma41(a: &Analysis, cfg: &VerifierConfig) -> Vec<Check> {
    let n = a.n();
    if n == 0 {
        return vec![Check::vacuous("lemma41")];
    }
    let pts = a.seq.points();
    let c = a.band_constant();
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let col = column_deficiency(&a.gram, k).expect("index in range");
        let oracle: f64 = (0..n)
            .filter(|&j| j != k)
            .map(|j| one_minus_pseudo_dist_sq(&pts[j], &pts[k]))
            .sum();
        let r = rel_diff(col, oracle);
        out.push(Check::pass_if(
            format!("lemma41.exact[{k}]"),
            r <= cfg.tol_identity,
            r,
            "||(G-I)e_n||^2 against sum of 1 - rho^2",
        ));

        let gap = a.profile.one_minus_delta_sq(k);
        let name = format!("lemma41.band[{k}]");
        if gap == 0.0 {
            out.push(Check::pass_if(
                name,
                col <= cfg.tol_identity,
                col,
                "1 - delta_n^2 rounds to 0; column deficiency must vanish",
            ));
            continue;
        }
        let ratio = col / gap;
        let (lo, hi) = (1.0 / c, c);
        let ok = ratio >= lo * (1.0 - cfg.tol_ineq) && ratio <= hi * (1.0 + cfg.tol_ineq);
        out.push(Check::pass_if(
            name,
            ok,
            (ratio - lo).min(hi - ratio),
            format!("ratio {ratio:e} in [{lo:e}, {hi:e}]"),
        ));
    }
    out
}

/// `||G - I|| <= ||G^{-1}|| - 1`.
pub fn check_useful2(a: &Analysis, cfg: &VerifierConfig) -> Check {
    const NAME: &str = "inverse_norm_bound";
    if a.n() == 0 {
        return Check::vacuous(NAME);
    }
    if a.ill_conditioned(cfg) {
        return Check::skipped(
            NAME,
            format!("condition number {:e} exceeds cap", a.summary.cond_g),
        );
    }
    let lhs = a.summary.op_norm_gmi;
    let rhs = a.summary.inv_norm_g - 1.0;
    Check::pass_if(
        NAME,
        le_with(lhs, rhs, cfg.tol_ineq),
        rhs - lhs,
        format!("||G-I|| = {lhs:e}, ||G^-1|| - 1 = {rhs:e}"),
    )
}

/// For `p >= 2`: `||G-I||_p^p >= sum ||(G-I)e_n||^p >= C^(-p/2) sum (1-delta_n^2)^(p/2)`,
/// with equality of the first two at `p = 2`; for `p < 2` the column sum
/// bounds the Schatten sum from above. `p = inf` uses the maximum column.
pub fn check_estimates(a: &Analysis, cfg: &VerifierConfig) -> Vec<Check> {
    let c = a.band_constant();
    let mut out = Vec::new();
    for &p in &cfg.ps {
        let name = format!("estimates.p={p}");
        if a.n() == 0 {
            out.push(Check::vacuous(name).at(p));
            continue;
        }
        match p {
            Exponent::Infinity => {
                let op = a.summary.op_norm_gmi;
                let col = crate::spectral::column_norms(&a.gmi)
                    .into_iter()
                    .fold(0.0, f64::max);
                let band = a.delta_sq_norm(p) / c.sqrt();
                let ok = le_with(col, op, cfg.tol_ineq) && le_with(band, col, cfg.tol_ineq);
                out.push(
                    Check::pass_if(
                        name,
                        ok,
                        (op - col).min(col - band),
                        format!("||G-I|| {op:e} >= max column {col:e} >= band {band:e}"),
                    )
                    .at(p),
                );
            }
            Exponent::Finite(q) => {
                let schatten = power_sum(&a.summary.sv_gmi, q);
                let col = zhu_column_sum(&a.gmi, q);
                if q >= 2.0 {
                    let band = c.powf(-0.5 * q) * a.delta_sq_norm(p).powf(q);
                    let mut ok =
                        le_with(col, schatten, cfg.tol_ineq) && le_with(band, col, cfg.tol_ineq);
                    let mut detail =
                        format!("S_p^p {schatten:e} >= columns {col:e} >= band {band:e}");
                    if q == 2.0 {
                        let r = rel_diff(schatten, col);
                        ok &= r <= cfg.tol_identity;
                        detail.push_str(&format!("; p=2 equality residual {r:e}"));
                    }
                    out.push(
                        Check::pass_if(name, ok, (schatten - col).min(col - band), detail).at(p),
                    );
                } else {
                    let ok = le_with(schatten, col, cfg.tol_ineq);
                    out.push(
                        Check::pass_if(
                            name,
                            ok,
                            col - schatten,
                            format!("S_p^p {schatten:e} <= columns {col:e}"),
                        )
                        .at(p),
                    );
                }
            }
        }
    }
    out
}

/// Truncation chain rows on the `delta`-sorted sequence, plus the pairing
/// bound `sum_{n>=1} lambda_{2n}^p <= 2 sum_{n>=0} lambda_{2n+1}^p`.
pub fn check_tail_decay(seq: &PointSequence, cfg: &VerifierConfig) -> Vec<Check> {
    let chain = match tail_chain(seq) {
        Ok(c) => c,
        Err(Error::TooShort { .. }) => return vec![Check::vacuous("tail_chain")],
        Err(e) => return vec![Check::skipped("tail_chain", e.to_string())],
    };
    let mut out = Vec::new();
    for row in &chain.rows {
        let name = format!("tail_chain[{}]", row.removed);
        if !(row.tail_cond <= cfg.cond_cap) {
            out.push(Check::skipped(
                name,
                format!("tail condition number {:e} exceeds cap", row.tail_cond),
            ));
            continue;
        }
        let detail = format!(
            "lambda {} <= {:e} <= {:e} <= {:e}",
            row.lambda_2n1.map_or("-".into(), |l| format!("{l:e}")),
            row.tail_op_norm,
            row.tail_inv_bound,
            row.earl_tail_bound
        );
        out.push(Check::pass_if(
            name,
            row.holds(cfg.tol_ineq),
            row.min_slack(),
            detail,
        ));
    }
    let sv = &chain.singular_values;
    let odd: Vec<f64> = sv.iter().step_by(2).copied().collect();
    let even: Vec<f64> = sv.iter().skip(1).step_by(2).copied().collect();
    for &p in &cfg.ps {
        let (e, o) = match p {
            Exponent::Finite(q) => (power_sum(&even, q), 2.0 * power_sum(&odd, q)),
            Exponent::Infinity => (lp_norm(&even, p), lp_norm(&odd, p)),
        };
        out.push(
            Check::pass_if(
                format!("tail_pairing.p={p}"),
                le_with(e, o, cfg.tol_ineq),
                o - e,
                format!("even {e:e} <= odd bound {o:e}"),
            )
            .at(p),
        );
    }
    if let Some(last) = chain.rows.last() {
        out.push(Check::new(
            "tail_chain.earl_last",
            Status::Info,
            last.earl_tail_bound,
            format!("Earl tail bound after removing {} points", last.removed),
        ));
    }
    out
}

/// `||G-I||_p / ||sqrt(1-delta_n)||_p` against the derivable lower bound
/// `C^(-1/2)` (for `p >= 2`), with the ratio itself reported as INFO.
pub fn check_const_band(a: &Analysis, cfg: &VerifierConfig) -> Vec<Check> {
    let c = a.band_constant();
    let mut out = Vec::new();
    for &p in &cfg.ps {
        let denom = a.sqrt_gap_norm(p);
        if denom == 0.0 {
            out.push(Check::skipped(format!("const_band.p={p}"), "all delta_n equal 1").at(p));
            continue;
        }
        let Some(schatten) = a.summary.schatten_value(p) else {
            out.push(
                Check::skipped(format!("const_band.p={p}"), "Schatten norm not computed").at(p),
            );
            continue;
        };
        let ratio = schatten / denom;
        let lower = c.powf(-0.5);
        if p.is_at_least(2.0) {
            out.push(
                Check::pass_if(
                    format!("const_band.p={p}"),
                    ratio >= lower * (1.0 - cfg.tol_ineq),
                    ratio - lower,
                    format!("ratio {ratio:e} >= C^-1/2 = {lower:e}"),
                )
                .at(p),
            );
        }
        let upper_ref =
            4.0 * std::f64::consts::SQRT_2 * p.finite().map_or(1.0, |q| 2f64.powf(1.0 / q));
        out.push(
            Check::new(
                format!("const_band.ratio.p={p}"),
                Status::Info,
                ratio,
                format!(
                    "reference constants sqrt(2) = {:e}, 4 sqrt(2) 2^(1/p) = {upper_ref:e}",
                    std::f64::consts::SQRT_2
                ),
            )
            .at(p),
        );
    }
    out
}

/// Lower search bound on the interpolation constant against the Earl and
/// Gram-norm upper bounds, and the Gram-side lower bound against Earl.
pub fn check_interpolation(a: &Analysis, cfg: &VerifierConfig) -> Vec<Check> {
    if a.n() == 0 {
        return vec![
            Check::vacuous("interpolation_sandwich"),
            Check::vacuous("gram_side_bound"),
        ];
    }
    let mut out = Vec::new();
    let earl = earl_bound_minus_one(a.profile.log_delta_min()).map(|e| e + 1.0);
    let (m_lower_gram, m_upper_ss) = ss_bounds(&a.summary);
    match (&earl, a.ill_conditioned(cfg)) {
        (_, true) => out.push(Check::skipped(
            "interpolation_sandwich",
            "condition number exceeds cap",
        )),
        (Err(e), _) => out.push(Check::skipped("interpolation_sandwich", e.to_string())),
        (Ok(earl), false) => match interp_constant_lower(&a.seq, cfg.trials, cfg.seed) {
            Ok(lower) => {
                let upper = earl.min(m_upper_ss);
                out.push(Check::pass_if(
                    "interpolation_sandwich",
                    lower <= upper + INTERPOLATION_TOL * upper.max(1.0),
                    upper - lower,
                    format!("search {lower:e} <= min(ss {m_upper_ss:e}, earl {earl:e})"),
                ));
            }
            Err(e) => out.push(Check::skipped("interpolation_sandwich", e.to_string())),
        },
    }
    match earl {
        Ok(earl) => out.push(Check::pass_if(
            "gram_side_bound",
            m_lower_gram <= earl + INTERPOLATION_TOL * earl.max(1.0),
            earl - m_lower_gram,
            format!("max(sqrt||G||, sqrt||G^-1||) {m_lower_gram:e} <= earl {earl:e}"),
        )),
        Err(e) => out.push(Check::skipped("gram_side_bound", e.to_string())),
    }
    out
}

/// Runs the configured checks. Errors in individual checks become SKIPPED entries.
pub fn run_suite(seq: &PointSequence, cfg: &VerifierConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut ps = cfg.ps.clone();
    if !ps.contains(&Exponent::Finite(2.0)) {
        ps.push(Exponent::Finite(2.0));
    }
    let a = Analysis::new(seq, &ps)?;
    let mut warnings = Vec::new();
    if let Some((i, j, rho)) = seq.closest_pair() {
        if rho < NEAR_DUPLICATE_WARNING {
            warnings.push(format!(
                "points {i} and {j} are nearly coincident (rho = {rho:e})"
            ));
        }
    }
    if a.ill_conditioned(cfg) {
        warnings.push(format!(
            "cond(G) = {:e} exceeds cap {:e}; identity checks skipped",
            a.summary.cond_g, cfg.cond_cap
        ));
    }

    let want = |s: Suite| cfg.suite == Suite::All || cfg.suite == s;
    let mut checks = Vec::new();
    if want(Suite::Identities) {
        checks.extend(check_identities(&a, cfg));
        checks.extend(
            check_lemma41(&a, cfg)
                .into_iter()
                .filter(|c| c.name.starts_with("lemma41.exact") || c.name == "lemma41"),
        );
    }
    if want(Suite::Inequalities) {
        checks.extend(
            check_lemma41(&a, cfg)
                .into_iter()
                .filter(|c| c.name.starts_with("lemma41.band")),
        );
        checks.push(check_useful2(&a, cfg));
        checks.extend(check_estimates(&a, cfg));
        checks.extend(check_const_band(&a, cfg));
    }
    if want(Suite::Tail) {
        let sorted = sort_by_delta(seq)?;
        checks.extend(check_tail_decay(&sorted, cfg));
    }
    if want(Suite::Interpolation) {
        checks.extend(check_interpolation(&a, cfg));
    }
    Ok(VerificationReport {
        fingerprint: Fingerprint {
            n: a.n(),
            delta_min: a.profile.delta_min,
            cond_g: a.summary.cond_g,
        },
        checks,
        warnings,
    })
}
