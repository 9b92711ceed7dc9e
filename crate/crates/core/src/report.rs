//! Claim suites and JSON report envelopes behind the command-line tool.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::face;
use crate::gallery::{self, GalleryParams};
use crate::locator::{self, LocatorConfig};
use crate::ppt::{self, RankType};
use crate::tensor::{BipartiteOperator, ProductVector, Subspace};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Claim {
    /// Passes iff `|expected - computed| <= tolerance`.
    pub fn numeric(name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected: json!(expected),
            computed: json!(computed),
            tolerance: Some(tolerance),
            pass: (expected - computed).abs() <= tolerance,
            note: None,
        }
    }

    /// Exact comparison of serialized values.
    pub fn exact<T: Serialize + PartialEq>(
        name: impl Into<String>,
        expected: T,
        computed: T,
    ) -> Self {
        Self {
            name: name.into(),
            pass: expected == computed,
            expected: json!(expected),
            computed: json!(computed),
            tolerance: None,
            note: None,
        }
    }

    /// A claim whose computation errored.
    pub fn errored(name: impl Into<String>, expected: Value, err: &Error) -> Self {
        Self {
            name: name.into(),
            expected,
            computed: Value::Null,
            tolerance: None,
            pass: false,
            note: Some(err.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub claims: Vec<Claim>,
    pub elapsed_ms: u64,
    pub seed: u64,
    pub result: Value,
}

impl ReportEnvelope {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Plain-text claim table.
    pub fn table(&self) -> String {
        let mut out = format!("{} ({} ms)\n", self.command, self.elapsed_ms);
        let width = self.claims.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.claims {
            let tol = c.tolerance.map_or(String::new(), |t| format!(" ±{t:e}"));
            let _ = writeln!(
                out,
                "  {:<width$}  {}  expected {}{tol}  computed {}",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.expected,
                c.computed,
            );
        }
        if self.claims.is_empty() {
            out.push_str("  (no claims)\n");
        }
        out
    }
}

struct Builder {
    command: String,
    params: BTreeMap<String, Value>,
    claims: Vec<Claim>,
    started: Instant,
    seed: u64,
}

impl Builder {
    fn new(command: &str, cfg: &LocatorConfig) -> Self {
        let mut params = BTreeMap::new();
        params.insert("tol".into(), json!(cfg.tol));
        Self {
            command: command.into(),
            params,
            claims: Vec::new(),
            started: Instant::now(),
            seed: cfg.rng_seed,
        }
    }

    fn param(&mut self, key: &str, v: impl Serialize) {
        self.params.insert(key.into(), json!(v));
    }

    /// Records `f`'s claims, or one failed claim if `f` errors.
    fn claims(&mut self, name: &str, f: impl FnOnce() -> Result<Vec<Claim>>) {
        match f() {
            Ok(cs) => self.claims.extend(cs),
            Err(e) => self.claims.push(Claim::errored(name, Value::Null, &e)),
        }
    }

    fn finish(self, result: Value) -> ReportEnvelope {
        ReportEnvelope {
            command: self.command,
            params: self.params,
            claims: self.claims,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
            seed: self.seed,
            result,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Choi,
    Asymmetric,
    TenVector,
    QubitQudit,
}

impl std::str::FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s3" => Ok(Section::Choi),
            "s4" => Ok(Section::Asymmetric),
            "s5" => Ok(Section::TenVector),
            "s6" => Ok(Section::QubitQudit),
            _ => Err(Error::Parse(format!(
                "unknown section {s:?}; expected s3, s4, s5 or s6"
            ))),
        }
    }
}

impl Section {
    pub fn id(self) -> &'static str {
        match self {
            Section::Choi => "s3",
            Section::Asymmetric => "s4",
            Section::TenVector => "s5",
            Section::QubitQudit => "s6",
        }
    }
}

fn range_overlap(a: &BipartiteOperator, b: &BipartiteOperator, cfg: &LocatorConfig) -> Result<f64> {
    let ra = a.range(&cfg.tol).ok_or(Error::Empty)?;
    let rb = b.range(&cfg.tol).ok_or(Error::Empty)?;
    Ok(crate::linalg::frobenius(&(ra.projector() * rb.projector())))
}

fn choi_claims(b: f64, cfg: &LocatorConfig) -> Vec<Claim> {
    let mut out = Vec::new();
    let mut add = |name: &str, f: &dyn Fn() -> Result<Vec<Claim>>| match f() {
        Ok(cs) => out.extend(cs),
        Err(e) => out.push(Claim::errored(name, Value::Null, &e)),
    };
    add("kernel_products", &|| {
        let rho = gallery::rho_b(b)?;
        let ker = rho.kernel(&cfg.tol).ok_or(Error::Empty)?;
        let found = locator::find_product_vectors(&ker, cfg)?;
        let expected = gallery::six_products_b(b)?;
        let matched = expected
            .iter()
            .all(|p| found.contains(p, cfg.tol.match_tol));
        Ok(vec![
            Claim::exact("kernel_product_count", 6, found.len()),
            Claim::exact("kernel_products_match_closed_form", true, matched),
            Claim::exact("kernel_product_list_complete", true, found.complete),
            Claim::exact(
                "kernel_max_residual_below_1e-8",
                true,
                found.max_residual() < 1e-8,
            ),
        ])
    });
    add("epsilon", &|| {
        let fam = gallery::six_products_b(b)?;
        let rho0 = gallery::uniform_mixture(&fam)?;
        (0..6)
            .map(|k| {
                let rho_k = gallery::drop_one_mixture(&fam, k)?;
                let eps = ppt::max_epsilon_ppt(&rho_k, &rho0, &cfg.tol)?.epsilon_star;
                Ok(Claim::numeric(
                    format!("epsilon_k{}", k + 1),
                    0.2,
                    eps,
                    1e-7,
                ))
            })
            .collect()
    });
    add("edge_extraction", &|| {
        let fam = gallery::six_products_b(b)?;
        let rho0 = gallery::uniform_mixture(&fam)?;
        let rho = gallery::rho_b(b)?;
        let mut cs = Vec::new();
        for k in 0..6 {
            let rho_k = gallery::drop_one_mixture(&fam, k)?;
            let ext = ppt::extract_edge_state(&rho_k, &rho0, cfg)?;
            let tag = k + 1;
            cs.push(Claim::exact(
                format!("boundary_k{tag}_rank_type"),
                RankType { p: 4, q: 4 },
                ext.rank_type,
            ));
            cs.push(Claim::exact(
                format!("boundary_k{tag}_edge"),
                "edge",
                ext.edge.label(),
            ));
            cs.push(Claim::numeric(
                format!("boundary_k{tag}_range_overlap"),
                0.0,
                range_overlap(&ext.boundary_state, &rho, cfg)?,
                1e-8,
            ));
        }
        Ok(cs)
    });
    add("segment", &|| {
        let fam = gallery::six_products_b(b)?;
        [
            (1.0 / 6.0, true),
            (0.5, true),
            (5.0 / 6.0, true),
            (0.05, false),
            (0.95, false),
        ]
        .into_iter()
        .map(|(t, sep)| {
            let s = gallery::sigma_segment(b, 0, 1, t)?;
            let sol = ppt::separability_solve(&s, &fam, &cfg.tol)?;
            Ok(Claim::exact(
                format!("segment_t{t:.4}_separable"),
                sep,
                sol.feasible,
            ))
        })
        .collect()
    });
    add("face", &|| {
        let fam = gallery::six_products_b(b)?;
        let cert = face::certify_simplicial_face(&fam, cfg)?;
        Ok(vec![
            Claim::exact(
                "six_products_general_position",
                true,
                cert.general_position.holds,
            ),
            Claim::exact("six_products_gupb", Some(true), cert.gupb.map(|g| g.holds)),
            Claim::exact("six_products_condition_a", true, cert.condition_a),
            Claim::exact(
                "six_products_condition_b",
                "holds",
                cert.condition_b.label(),
            ),
            Claim::exact("six_products_simplex_dim", Some(5), cert.simplex_dim),
        ])
    });
    out
}

fn asymmetric_claims(b: f64, theta: f64, cfg: &LocatorConfig) -> Vec<Claim> {
    let tol = &cfg.tol;
    let mut out = Vec::new();
    let mut add = |name: &str, f: &dyn Fn() -> Result<Vec<Claim>>| match f() {
        Ok(cs) => out.extend(cs),
        Err(e) => out.push(Claim::errored(name, Value::Null, &e)),
    };
    add("types", &|| {
        let rt = |p, q| RankType { p, q };
        let edge = gallery::rho_theta(b, theta)?;
        Ok(vec![
            Claim::exact("rho_theta_type", rt(5, 5), ppt::state_type(&edge, tol)),
            Claim::exact("rho_theta_ppt", true, ppt::is_ppt(&edge, tol)?),
            Claim::exact(
                "rho_theta_edge",
                "edge",
                ppt::is_edge_state(&edge, cfg)?.label(),
            ),
            Claim::exact(
                "rho_sep_type",
                rt(5, 6),
                ppt::state_type(&gallery::rho_sep(b, theta)?, tol),
            ),
            Claim::exact(
                "mix_type",
                rt(5, 9),
                ppt::state_type(&gallery::asymmetric_mix(b, theta)?, tol),
            ),
            Claim::exact(
                "mix_of_states_type",
                rt(5, 9),
                ppt::state_type(&gallery::asymmetric_mix_of_states(b, theta)?, tol),
            ),
        ])
    });
    add("kernels", &|| {
        let edge_ker = gallery::rho_theta(b, theta)?
            .kernel(tol)
            .ok_or(Error::Empty)?;
        let mix_ker = gallery::asymmetric_mix(b, theta)?
            .kernel(tol)
            .ok_or(Error::Empty)?;
        let w = Subspace::span(&gallery::kernel_w(b, theta)?, 3, 3, tol)?;
        Ok(vec![
            Claim::exact(
                "rho_theta_kernel_products",
                0,
                locator::find_product_vectors(&edge_ker, cfg)?.len(),
            ),
            Claim::numeric(
                "mix_kernel_is_w_span",
                0.0,
                mix_ker.projector_distance(&w),
                1e-8,
            ),
            Claim::exact(
                "mix_kernel_products",
                0,
                locator::find_product_vectors(&mix_ker, cfg)?.len(),
            ),
        ])
    });
    add("witness", &|| {
        let shown = gallery::witness_w(b, theta)?;
        let built = gallery::witness_w_from_kernel(b, theta)?;
        let diff = (shown.matrix() - built.matrix()).camax();
        Ok(vec![Claim::numeric("witness_entrywise", 0.0, diff, 1e-10)])
    });
    out
}

fn ten_vector_claims(b: f64, cfg: &LocatorConfig) -> Vec<Claim> {
    let tol = &cfg.tol;
    let mut out = Vec::new();
    let mut add = |name: &str, f: &dyn Fn() -> Result<Vec<Claim>>| match f() {
        Ok(cs) => out.extend(cs),
        Err(e) => out.push(Claim::errored(name, Value::Null, &e)),
    };
    add("face", &|| {
        let fam = gallery::ten_vector_family(b)?;
        Ok(vec![
            Claim::exact(
                "pure_states_independent",
                true,
                face::pure_states_independent(&fam, tol)?,
            ),
            Claim::exact(
                "condition_c",
                "fails",
                face::check_condition_c(&fam, cfg)?.label(),
            ),
            Claim::exact(
                "first_six_condition_b",
                "fails",
                face::check_condition_b(&fam[..6], cfg)?.label(),
            ),
        ])
    });
    add("pairing", &|| {
        let fam = gallery::ten_vector_family(b)?;
        let (al, be, ga) = gallery::phi_s_params(1.0 / b)?;
        let choi = gallery::choi_matrix_generalized(al, be, ga)?;
        let choi_g = choi.partial_transpose();
        let mut worst: f64 = 0.0;
        let mut worst_g: f64 = 0.0;
        for p in &fam {
            let rho = p.projector();
            worst = worst.max(ppt::dual_pairing(&rho, &choi)?.abs());
            worst_g = worst_g.max(ppt::dual_pairing(&rho, &choi_g)?.abs());
        }
        Ok(vec![
            Claim::numeric("pairing_choi", 0.0, worst, 1e-9),
            Claim::numeric("pairing_choi_gamma", 0.0, worst_g, 1e-9),
        ])
    });
    add("lambda", &|| {
        let fam = gallery::ten_vector_family(b)?;
        let rho0 = gallery::uniform_mixture(&fam)?;
        let mut cs = Vec::new();
        for k in 1..=10 {
            let sigma = gallery::drop_one_mixture(&fam, k - 1)?;
            let ext = ppt::extract_edge_state(&sigma, &rho0, cfg)?;
            cs.push(Claim::numeric(
                format!("lambda_k{k}"),
                gallery::lambda_k_closed_form(b, k)?,
                ext.epsilon_star,
                1e-7,
            ));
            cs.push(Claim::exact(
                format!("rho_k{k}_rank_type"),
                RankType { p: 8, q: 8 },
                ext.rank_type,
            ));
        }
        Ok(cs)
    });
    out
}

fn qubit_qudit_claims(cfg: &LocatorConfig) -> Vec<Claim> {
    let fam = gallery::qubit_qudit_example();
    let run = || -> Result<Vec<Claim>> {
        let non_real = face::check_2xn_condition(&fam, &cfg.tol)?;
        let cert = face::certify_simplicial_face(&fam, cfg)?;
        let flagged = cert.notes.iter().any(|n| n.contains("Δ4, not Δ5"));
        Ok(vec![
            Claim::exact("general_position", true, cert.general_position.holds),
            Claim::exact("non_real_condition", true, non_real),
            Claim::exact("condition_a", true, cert.condition_a),
            Claim::exact("condition_c", "holds", cert.condition_c.label()),
            Claim::exact("induced", true, cert.induced),
            Claim::exact("extreme_points", Some(5), cert.extreme_points),
            Claim::exact("simplex_dim", Some(4), cert.simplex_dim),
            Claim::exact("simplex_label_flagged", true, flagged)
                .with_note("five extreme points form a 4-simplex"),
        ])
    };
    run().unwrap_or_else(|e| vec![Claim::errored("qubit_qudit", Value::Null, &e)])
}

/// Runs every claim of one section at the given parameters.
pub fn reproduce(section: Section, params: &GalleryParams, cfg: &LocatorConfig) -> ReportEnvelope {
    let mut r = Builder::new("reproduce", cfg);
    r.param("section", section.id());
    match section {
        Section::Choi => {
            r.param("b", params.b);
            r.claims("choi", || Ok(choi_claims(params.b, cfg)));
        }
        Section::Asymmetric => {
            r.param("b", params.b);
            r.param("theta", params.theta);
            r.claims("asymmetric", || {
                Ok(asymmetric_claims(params.b, params.theta, cfg))
            });
        }
        Section::TenVector => {
            r.param("b", params.b);
            r.claims("ten_vector", || Ok(ten_vector_claims(params.b, cfg)));
        }
        Section::QubitQudit => r.claims("qubit_qudit", || Ok(qubit_qudit_claims(cfg))),
    }
    r.finish(Value::Null)
}

/// JSON inputs accepted by the file-driven commands. A report envelope is
/// unwrapped to its `result`.
#[derive(Clone, Debug)]
pub enum Input {
    Operator(BipartiteOperator),
    Subspace(Subspace),
    Family(Vec<ProductVector>),
}

pub fn parse_input(text: &str) -> Result<Input> {
    let mut v: Value = serde_json::from_str(text)?;
    if let Some(inner) = v.get_mut("result") {
        v = inner.take();
    }
    if v.is_array() {
        return Ok(Input::Family(serde_json::from_value(v)?));
    }
    if v.get("basis").is_some() {
        return Ok(Input::Subspace(serde_json::from_value(v)?));
    }
    if v.get("entries").is_some() {
        return Ok(Input::Operator(serde_json::from_value(v)?));
    }
    Err(Error::Parse(
        "expected an operator, a subspace or a list of product vectors".into(),
    ))
}

pub fn parse_operator(text: &str) -> Result<BipartiteOperator> {
    match parse_input(text)? {
        Input::Operator(op) => Ok(op),
        _ => Err(Error::Parse("expected an operator".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceChoice {
    Kernel,
    Range,
}

/// Runs the exhaustive solver (when it applies) and the multistart oracle,
/// and checks that every vector the oracle finds is on the exhaustive list.
pub fn find_products(
    input: &Input,
    space: SpaceChoice,
    cfg: &LocatorConfig,
) -> Result<ReportEnvelope> {
    let mut r = Builder::new("find-products", cfg);
    let d = match input {
        Input::Subspace(s) => s.clone(),
        Input::Operator(op) => {
            r.param(
                "space",
                if space == SpaceChoice::Kernel {
                    "kernel"
                } else {
                    "range"
                },
            );
            match space {
                SpaceChoice::Kernel => op.kernel(&cfg.tol),
                SpaceChoice::Range => op.range(&cfg.tol),
            }
            .ok_or(Error::Empty)?
        }
        Input::Family(f) => Subspace::span_of_products(f, &cfg.tol)?,
    };
    r.param("dims", d.dims());
    r.param("subspace_dim", d.dim());
    let exhaustive = match locator::find_product_vectors(&d, cfg) {
        Ok(res) => Some(res),
        Err(Error::DegeneratePencil(_) | Error::UnsupportedDimensions { .. }) => None,
        Err(e) => return Err(e),
    };
    let oracle = locator::brute_force_products(&d, cfg)?;
    let result = match &exhaustive {
        Some(res) => {
            let agree = oracle
                .vectors
                .iter()
                .all(|p| res.contains(p, cfg.tol.match_tol));
            r.claims.push(Claim::exact("solvers_agree", true, agree));
            json!({
                "count": res.len(),
                "complete": res.complete,
                "vectors": res.vectors,
                "residuals": res.residuals,
                "oracle_count": oracle.len(),
                "agreement": agree,
            })
        }
        None => json!({
            "count": oracle.len(),
            "complete": false,
            "vectors": oracle.vectors,
            "residuals": oracle.residuals,
            "oracle_count": oracle.len(),
            "agreement": Value::Null,
        }),
    };
    Ok(r.finish(result))
}

pub fn certify(family: &[ProductVector], cfg: &LocatorConfig) -> Result<ReportEnvelope> {
    let mut r = Builder::new("certify", cfg);
    r.param("family_size", family.len());
    let cert = face::certify_simplicial_face(family, cfg)?;
    Ok(r.finish(json!(cert)))
}

pub fn extract_edge(
    sigma: &BipartiteOperator,
    rho0: &BipartiteOperator,
    cfg: &LocatorConfig,
) -> Result<ReportEnvelope> {
    let mut r = Builder::new("extract-edge", cfg);
    r.param("dims", sigma.dims());
    let ext = ppt::extract_edge_state(sigma, rho0, cfg)?;
    let before = ppt::state_type(sigma, &cfg.tol);
    r.claims.push(Claim::exact(
        "boundary_is_ppt",
        true,
        ppt::is_ppt(&ext.boundary_state, &cfg.tol)?,
    ));
    r.claims.push(Claim::exact(
        "rank_drops",
        true,
        ext.rank_type.p < before.p || ext.rank_type.q < before.q,
    ));
    Ok(r.finish(json!(ext)))
}

pub fn gupb_search(count: usize, cfg: &LocatorConfig) -> Result<ReportEnvelope> {
    let mut r = Builder::new("gupb-search", cfg);
    r.param("count", count);
    let tally = face::gupb_search(count, cfg.rng_seed, cfg)?;
    Ok(r.finish(json!(tally)))
}

pub const GALLERY_NAMES: &[&str] = &[
    "rho-b",
    "six-products-b",
    "kernel-rho-b",
    "rho-theta",
    "kernel-rho-theta",
    "six-products-theta",
    "rho-sep",
    "asymmetric-mix",
    "witness",
    "ten-vector",
    "choi-phi-s",
    "qubit-qudit",
];

/// Emits one gallery object as the report result.
pub fn gallery_object(
    name: &str,
    params: &GalleryParams,
    cfg: &LocatorConfig,
) -> Result<ReportEnvelope> {
    let mut r = Builder::new("gallery", cfg);
    r.param("name", name);
    let GalleryParams { b, theta, s } = *params;
    let tol = &cfg.tol;
    let result = match name {
        "rho-b" => json!(gallery::rho_b(b)?),
        "six-products-b" => json!(gallery::six_products_b(b)?),
        "kernel-rho-b" => json!(gallery::rho_b(b)?.kernel(tol).ok_or(Error::Empty)?),
        "rho-theta" => json!(gallery::rho_theta(b, theta)?),
        "kernel-rho-theta" => json!(gallery::rho_theta(b, theta)?
            .kernel(tol)
            .ok_or(Error::Empty)?),
        "six-products-theta" => json!(gallery::six_products_theta(b, theta)?),
        "rho-sep" => json!(gallery::rho_sep(b, theta)?),
        "asymmetric-mix" => json!(gallery::asymmetric_mix(b, theta)?),
        "witness" => json!(gallery::witness_w(b, theta)?),
        "ten-vector" => json!(gallery::ten_vector_family(b)?),
        "choi-phi-s" => {
            let (al, be, ga) = gallery::phi_s_params(s)?;
            json!(gallery::choi_matrix_generalized(al, be, ga)?)
        }
        "qubit-qudit" => json!(gallery::qubit_qudit_example()),
        _ => {
            return Err(Error::Parse(format!(
                "unknown gallery object {name:?}; known: {}",
                GALLERY_NAMES.join(", ")
            )))
        }
    };
    match name {
        "rho-b" | "six-products-b" | "kernel-rho-b" | "ten-vector" => r.param("b", b),
        "choi-phi-s" => r.param("s", s),
        "qubit-qudit" => {}
        _ => {
            r.param("b", b);
            r.param("theta", theta);
        }
    }
    Ok(r.finish(result))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_claims_respect_tolerance() {
        assert!(Claim::numeric("a", 0.2, 0.2 + 5e-8, 1e-7).pass);
        assert!(!Claim::numeric("a", 0.2, 0.21, 1e-7).pass);
        assert!(!Claim::exact("b", true, false).pass);
    }

    #[test]
    fn section_ids_round_trip() {
        for s in ["s3", "s4", "s5", "s6"] {
            assert_eq!(s.parse::<Section>().unwrap().id(), s);
        }
        assert!("s7".parse::<Section>().is_err());
    }

    #[test]
    fn envelope_unwraps_for_input() {
        let cfg = LocatorConfig::default();
        let env = gallery_object("qubit-qudit", &GalleryParams::default(), &cfg).unwrap();
        let text = env.to_json_line().unwrap();
        assert!(matches!(parse_input(&text).unwrap(), Input::Family(f) if f.len() == 5));
        assert!(parse_input("{not json").is_err());
    }
}
