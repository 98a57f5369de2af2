//! Subcommand dispatch and JSON reports.

use cremona_core::decider::{decide, render_witness, DeciderError, Decision, Generators, Verdict};
use cremona_core::delpezzo::{dp5_analyze, dp6_act, dp6_analyze, plane_orbit};
use cremona_core::groups::{recognize_family, DEFAULT_CAP};
use cremona_core::moebius::{klein_classify, moebius_closure, orbit};
use cremona_core::quadric::{analyze_rulings, orbit_on_quadric};
use serde_json::{json, Value};
use thiserror::Error;

use crate::schema::{parse_input, parse_points, InputDocument, PointLiterals, SchemaError};
use crate::verify::{parse_map_document, verify_p2_conjugation, VerifyError};

pub const EXIT_VERDICT: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Decide,
    Classify,
    Goursat,
    Orbits,
    Witness,
    VerifyMap,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Decider(#[from] DeciderError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Unsupported(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Schema(_) | RunError::Unsupported(_) => EXIT_INVALID,
            RunError::Decider(e) if e.is_input_error() || *e == DeciderError::NoWitness => EXIT_INVALID,
            RunError::Verify(VerifyError::Schema(_) | VerifyError::NotHomogeneous(_) | VerifyError::ZeroMap | VerifyError::NoTrials) => {
                EXIT_INVALID
            }
            _ => EXIT_INTERNAL,
        }
    }
}

/// What a subcommand prints and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub struct RunConfig<'a> {
    /// Closure cap from the environment; overrides the document.
    pub cap_override: Option<usize>,
    pub points: Option<&'a str>,
}

fn cap(doc: &InputDocument, cfg: &RunConfig) -> usize {
    cfg.cap_override.or(doc.options.cap).unwrap_or(DEFAULT_CAP)
}

pub fn decision_report(d: &Decision) -> Value {
    let mut v = json!({
        "decision": d.verdict,
        "group": d.group,
        "reason": { "rule": d.rule, "citation": d.rule.citation() },
        "witness": d.witness.as_ref().map(|w| w.steps.clone()).unwrap_or_default(),
    });
    if d.witness.as_ref().is_some_and(|w| w.requires_standard_form) {
        v["witness_status"] = json!("requires standard form");
    }
    v
}

fn classify(doc: &InputDocument, gens: &Generators, cap: usize) -> Result<Value, RunError> {
    Ok(match gens {
        Generators::None | Generators::Plane(_) => {
            let d = decide(&doc.surface, gens, cap)?;
            json!({ "group": d.group })
        }
        Generators::Base(maps) => {
            let g = moebius_closure(maps, cap).map_err(DeciderError::from)?;
            let class = klein_classify(&g).map_err(DeciderError::from)?;
            json!({ "group": { "order": g.len(), "family": recognize_family(&g).to_string() }, "klein": class.to_string() })
        }
        Generators::Quadric(q) => {
            let a = analyze_rulings(q, cap).map_err(DeciderError::from)?;
            json!({
                "group": { "order": a.group.len(), "family": recognize_family(&a.group).to_string() },
                "rank": a.rank,
                "kernel_order": a.kernel.len(),
                "factors": [a.factor_classes.0.to_string(), a.factor_classes.1.to_string()],
            })
        }
        Generators::DP6(g) => {
            let a = dp6_analyze(g, cap).map_err(DeciderError::from)?;
            json!({
                "group": { "order": a.group.len(), "family": recognize_family(&a.group).to_string() },
                "hexagon_image": a.hexagon_image.to_string(),
                "torus_part": a.torus_part.len(),
                "minimal": a.minimal,
                "fixes_point": a.fixes_point,
            })
        }
        Generators::DP5(g) => {
            let (family, minimal) = dp5_analyze(g);
            json!({ "group": { "order": g.table.len(), "family": family.to_string() }, "minimal": minimal })
        }
    })
}

fn goursat(gens: &Generators, cap: usize) -> Result<Value, RunError> {
    let Generators::Quadric(q) = gens else {
        return Err(RunError::Unsupported("goursat needs a quadric document".into()));
    };
    let a = analyze_rulings(q, cap).map_err(DeciderError::from)?;
    let gd = &a.goursat;
    Ok(json!({
        "rank": a.rank,
        "kernel_order": gd.order(),
        "projections": [
            { "order": gd.g1.len(), "klein": a.factor_classes.0.to_string() },
            { "order": gd.g2.len(), "klein": a.factor_classes.1.to_string() },
        ],
        "fibre_kernels": [gd.h1.len(), gd.h2.len()],
        "quotient_order": gd.quotient_order(),
    }))
}

fn orbits(doc: &InputDocument, gens: &Generators, cap: usize, points: &str) -> Result<Value, RunError> {
    let pts = parse_points(doc, points)?;
    let lengths: Vec<usize> = match (&pts, gens) {
        (PointLiterals::Line(ps), Generators::Base(maps)) => {
            let g = moebius_closure(maps, cap).map_err(DeciderError::from)?;
            ps.iter().map(|p| orbit(&g, p).len()).collect()
        }
        (PointLiterals::Quadric(ps), Generators::Quadric(q)) => {
            let a = analyze_rulings(q, cap).map_err(DeciderError::from)?;
            ps.iter().map(|p| orbit_on_quadric(&a.group, p).len()).collect()
        }
        (PointLiterals::Sextic(ps), Generators::DP6(g)) => {
            let a = dp6_analyze(g, cap).map_err(DeciderError::from)?;
            let mut out = Vec::new();
            for p in ps {
                let mut images: Vec<_> = Vec::new();
                for e in a.group.elements() {
                    let q = dp6_act(e, p).map_err(DeciderError::from)?;
                    if !images.contains(&q) {
                        images.push(q);
                    }
                }
                out.push(images.len());
            }
            out
        }
        (PointLiterals::Plane(ps), Generators::Plane(ms)) => ps
            .iter()
            .map(|p| plane_orbit(ms, p).map(|o| o.len()).map_err(|e| RunError::Decider(e.into())))
            .collect::<Result<_, _>>()?,
        (PointLiterals::Labels(ls), Generators::DP5(g)) => ls
            .iter()
            .map(|&l| {
                let mut seen = vec![l];
                let mut i = 0;
                while i < seen.len() {
                    for p in &g.perms {
                        let next = p[seen[i] as usize - 1];
                        if !seen.contains(&next) {
                            seen.push(next);
                        }
                    }
                    i += 1;
                }
                seen.len()
            })
            .collect(),
        _ => return Err(RunError::Unsupported("points do not match the surface".into())),
    };
    Ok(json!({ "orbit_lengths": lengths }))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn run_inner(cmd: Subcommand, text: &str, cfg: &RunConfig) -> Result<Outcome, RunError> {
    if cmd == Subcommand::VerifyMap {
        let m = parse_map_document(text)?;
        let r = verify_p2_conjugation(&m.f, &m.conjugator, &m.target, m.trials, m.seed)?;
        return Ok(Outcome { stdout: pretty(&serde_json::to_value(&r).expect("serializable")), code: EXIT_VERDICT });
    }
    let doc = parse_input(text)?;
    let gens = doc.build()?;
    let cap = cap(&doc, cfg);
    let verdict_code = |d: &Decision| if d.verdict == Verdict::InvalidInput { EXIT_INVALID } else { EXIT_VERDICT };
    match cmd {
        Subcommand::Decide => {
            let d = decide(&doc.surface, &gens, cap)?;
            Ok(Outcome { stdout: pretty(&decision_report(&d)), code: verdict_code(&d) })
        }
        Subcommand::Witness => {
            let d = decide(&doc.surface, &gens, cap)?;
            Ok(Outcome { stdout: render_witness(&d)?, code: EXIT_VERDICT })
        }
        Subcommand::Classify => Ok(Outcome { stdout: pretty(&classify(&doc, &gens, cap)?), code: EXIT_VERDICT }),
        Subcommand::Goursat => Ok(Outcome { stdout: pretty(&goursat(&gens, cap)?), code: EXIT_VERDICT }),
        Subcommand::Orbits => {
            let points = cfg.points.ok_or_else(|| RunError::Unsupported("orbits needs --points".into()))?;
            Ok(Outcome { stdout: pretty(&orbits(&doc, &gens, cap, points)?), code: EXIT_VERDICT })
        }
        Subcommand::VerifyMap => unreachable!("handled above"),
    }
}

/// Run a subcommand on document text. Errors become a JSON error report.
pub fn run(cmd: Subcommand, text: &str, cfg: &RunConfig) -> Outcome {
    match run_inner(cmd, text, cfg) {
        Ok(o) => o,
        Err(e) => {
            let path = match &e {
                RunError::Schema(SchemaError::Invalid { path, .. }) => Some(path.clone()),
                _ => None,
            };
            let code = e.exit_code();
            let report = json!({ "error": e.to_string(), "path": path, "exit_code": code });
            Outcome { stdout: pretty(&report), code }
        }
    }
}

