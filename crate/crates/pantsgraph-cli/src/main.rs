//! Command-line front end: balls, censuses, classifier agreement reports,
//! loop contraction, signature recovery and the curve correspondence.
//!
//! Every command prints one deterministic report (JSON unless DOT is asked
//! for) and exits 0 exactly when all the invariants it checked hold; the
//! first violation is reported on stderr with a nonzero exit.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pantsgraph::autos::{self, canonical_witness, SlopeMap};
use pantsgraph::circuits::{
    classify_triangle, enumerate_circuits, is_alternating, is_standard_heptagon,
    is_standard_pentagon, is_tame, is_two_tight, Circuit, TriangleClass, World,
};
use pantsgraph::fixtures;
use pantsgraph::homotopy;
use pantsgraph::models::{ball, Model, Vertex};
use pantsgraph::structure::classify_edge;
use pantsgraph::{Curve, Slope};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "pantsgraph",
    version,
    about = "Censuses, certificates and signatures for slope-coded pants graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout; with no flag the environment
    /// variable PANTSGRAPH_OUT_DIR, when set, names the target directory.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModelArg {
    N3,
    Fan,
    N12,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::N3 => Model::N3,
            ModelArg::Fan => Model::Fan,
            ModelArg::N12 => Model::N12,
        }
    }
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Export the windowed ball around a base vertex.
    Ball {
        #[arg(long, value_enum, default_value_t = ModelArg::N3)]
        model: ModelArg,
        /// Base vertex id such as "V3:0/1,1/1,1/2", "centre" or "M0";
        /// defaults to the model's base vertex.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 6)]
        width: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Enumerate short circuits in a ball and classify them.
    Census {
        #[arg(long, value_enum, default_value_t = ModelArg::N3)]
        model: ModelArg,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 6)]
        width: usize,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
    /// Compare label-free edge classification with ground truth in a ball.
    Classify {
        #[arg(long, value_enum, default_value_t = ModelArg::N3)]
        model: ModelArg,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 8)]
        width: usize,
    },
    /// Contract a seeded random loop and verify the certificate.
    ContractLoop {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random-walk budget before the loop closes up.
        #[arg(long, default_value_t = 10)]
        length: usize,
        #[arg(long, default_value_t = 8)]
        max_denom: i64,
    },
    /// Recover the surface signature from the graph oracle.
    Signature {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Apply the curve correspondence of a generator word to a curve.
    Phi {
        /// Word over T (shear), t (inverse shear) and S (swap), rightmost
        /// letter first; the empty word is the identity.
        #[arg(long, default_value = "")]
        word: String,
        /// Curve code: "a0", "2s:<slope>" or "1s:<slope>".
        #[arg(long)]
        curve: String,
    },
    /// List the built-in labeled fixtures and their predicate outcomes.
    Fixtures,
}

fn parse_base(model: Model, spec: Option<&str>) -> Result<Vertex> {
    let v = match spec {
        None => model.base_vertex(),
        Some(text) => {
            let t = text.trim();
            if t.eq_ignore_ascii_case("centre") || t.eq_ignore_ascii_case("center") {
                Vertex::Centre
            } else {
                Vertex::from_str(t).map_err(|e| anyhow!("{e}"))?
            }
        }
    };
    if !model.contains(&v) {
        bail!("{v} is not a vertex of the {model} model");
    }
    Ok(v)
}

fn parse_curve(text: &str) -> Result<Curve> {
    let t = text.trim();
    if t == "a0" {
        return Ok(Curve::AlphaZero);
    }
    if let Some(rest) = t.strip_prefix("2s:") {
        let s: Slope = rest.parse().map_err(|e| anyhow!("bad slope: {e}"))?;
        return Ok(Curve::TwoSided(s));
    }
    if let Some(rest) = t.strip_prefix("1s:") {
        let s: Slope = rest.parse().map_err(|e| anyhow!("bad slope: {e}"))?;
        return Ok(Curve::OneSided(s));
    }
    bail!("unrecognized curve {text:?}: expected a0, 2s:<slope> or 1s:<slope>");
}

fn emit(text: &str, out: Option<&str>, default_name: &str) -> Result<()> {
    let target = match out {
        Some(path) => Some(path.to_string()),
        None => std::env::var("PANTSGRAPH_OUT_DIR")
            .ok()
            .map(|dir| format!("{dir}/{default_name}")),
    };
    match target {
        Some(path) => std::fs::write(&path, format!("{text}\n"))
            .with_context(|| format!("writing {path}")),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}").and_then(|()| stdout.flush()) {
                Ok(()) => Ok(()),
                // The reader hung up (e.g. piped into head); the verdict in the
                // exit code must not change because output was truncated.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(e).context("writing to stdout"),
            }
        }
    }
}

fn emit_json(value: &Value, out: Option<&str>, default_name: &str) -> Result<()> {
    emit(&serde_json::to_string_pretty(value)?, out, default_name)
}

fn cmd_ball(
    model: Model,
    base: Option<&str>,
    radius: usize,
    width: usize,
    format: Format,
    out: Option<&str>,
) -> Result<()> {
    let base = parse_base(model, base)?;
    let b = ball(model, &base, radius, width);
    match format {
        Format::Json => emit_json(&b.to_json(), out, "ball.json"),
        Format::Dot => emit(&b.to_dot(), out, "ball.dot"),
    }
}

fn cmd_census(
    model: Model,
    base: Option<&str>,
    radius: usize,
    width: usize,
    max_len: usize,
    out: Option<&str>,
) -> Result<()> {
    let base = parse_base(model, base)?;
    let b = ball(model, &base, radius, width);
    let world = World::Model(model);
    let verts: Vec<Vertex> = b.vertices().cloned().collect();
    let circuits = enumerate_circuits(world, &verts, max_len.min(7));

    let mut by_length: BTreeMap<usize, usize> = BTreeMap::new();
    let mut farey_triangles = 0usize;
    let mut fan_triangles = 0usize;
    let mut unclassifiable = 0usize;
    let mut pentagons = 0usize;
    let mut interior_quadrangles = 0usize;
    let mut loose_quadrangles = 0usize;
    for c in &circuits {
        *by_length.entry(c.len()).or_default() += 1;
        match c.len() {
            3 => match classify_triangle(world, c) {
                Ok(TriangleClass::Farey) => farey_triangles += 1,
                Ok(TriangleClass::Fan) => fan_triangles += 1,
                Err(_) => unclassifiable += 1,
            },
            4 => {
                if c.vertices().iter().all(|v| b.is_interior(v)) {
                    interior_quadrangles += 1;
                    if !is_two_tight(world, c) {
                        loose_quadrangles += 1;
                    }
                }
            }
            5 => {
                if is_standard_pentagon(c) {
                    pentagons += 1;
                }
            }
            _ => {}
        }
    }

    let report = json!({
        "model": model.to_string(),
        "base": base.to_string(),
        "radius": radius,
        "width": width,
        "max_len": max_len,
        "circuits_by_length": by_length,
        "farey_triangles": farey_triangles,
        "fan_triangles": fan_triangles,
        "unclassifiable_triangles": unclassifiable,
        "standard_pentagons": pentagons,
        "interior_quadrangles": interior_quadrangles,
        "non_two_tight_interior_quadrangles": loose_quadrangles,
    });
    emit_json(&report, out, "census.json")?;
    if unclassifiable > 0 {
        bail!("{unclassifiable} triangles failed to classify");
    }
    if loose_quadrangles > 0 {
        bail!("{loose_quadrangles} interior quadrangles are not 2-tight");
    }
    Ok(())
}

fn cmd_classify(
    model: Model,
    base: Option<&str>,
    radius: usize,
    width: usize,
    out: Option<&str>,
) -> Result<()> {
    let base = parse_base(model, base)?;
    let b = ball(model, &base, radius, width);
    let mut edges = 0usize;
    let mut agreements = 0usize;
    let mut first_disagreement: Option<String> = None;
    for (u, v) in b.edges() {
        if !b.is_interior(u) || !b.is_interior(v) {
            continue;
        }
        let truth = model.edge_info(u, v).expect("ball edge");
        let class = classify_edge(model, u, v, 8)
            .with_context(|| format!("classifying {u} - {v}"))?;
        edges += 1;
        if class.agrees_with(&truth) {
            agreements += 1;
        } else if first_disagreement.is_none() {
            first_disagreement = Some(format!("{u} - {v}: {class}"));
        }
    }
    let report = json!({
        "model": model.to_string(),
        "base": base.to_string(),
        "radius": radius,
        "width": width,
        "interior_edges": edges,
        "agreements": agreements,
        "agreement_percent": if edges == 0 { 100 } else { agreements * 100 / edges },
    });
    emit_json(&report, out, "classify.json")?;
    if let Some(d) = first_disagreement {
        bail!("classifier disagreement at {d}");
    }
    Ok(())
}

fn cmd_contract_loop(seed: u64, length: usize, max_denom: i64, out: Option<&str>) -> Result<()> {
    let l = homotopy::random_loop(seed, length, max_denom);
    let cert = homotopy::contract_loop(&l).map_err(|e| anyhow!("contraction failed: {e}"))?;
    let end = homotopy::verify_certificate(&cert)
        .map_err(|e| anyhow!("certificate rejected: {e}"))?;
    let report = json!({
        "seed": seed,
        "walk_length": length,
        "max_denom": max_denom,
        "loop_length": l.len(),
        "moves": cert.moves.len(),
        "final": end.to_string(),
        "certificate": serde_json::to_value(&cert)?,
    });
    emit_json(&report, out, "contract-loop.json")
}

fn cmd_signature(model: Model, radius: usize, out: Option<&str>) -> Result<()> {
    let (g, b) = autos::signature(model, radius)
        .map_err(|e| anyhow!("signature of {model} at radius {radius}: {e}"))?;
    let report = json!({
        "model": model.to_string(),
        "radius": radius,
        "g": g,
        "b": b,
    });
    emit_json(&report, out, "signature.json")
}

fn cmd_phi(word: &str, curve: &str, out: Option<&str>) -> Result<()> {
    let m = SlopeMap::from_word(word).map_err(|e| anyhow!("{e}"))?;
    let alpha = parse_curve(curve)?;
    let witness =
        canonical_witness(&alpha).ok_or_else(|| anyhow!("{alpha} has no witness"))?;
    let image = autos::phi(&m, &alpha, &witness).map_err(|e| anyhow!("{e}"))?;
    let report = json!({
        "word": word,
        "matrix": m.entries(),
        "curve": alpha.to_string(),
        "witness": witness.to_string(),
        "image": image.to_string(),
    });
    emit_json(&report, out, "phi.json")
}

fn cmd_fixtures(out: Option<&str>) -> Result<()> {
    let mut rows = Vec::new();
    for f in fixtures::builtin_fixtures() {
        let world = World::Fixture(&f);
        let circuit = Circuit::new(world, f.circuit())
            .map_err(|e| anyhow!("fixture {}: {e}", f.name))?;
        rows.push(json!({
            "name": f.name,
            "note": f.note,
            "vertices": f.vertices().len(),
            "circuit_length": circuit.len(),
            "alternating": is_alternating(world, &circuit),
            "two_tight": is_two_tight(world, &circuit),
            "tame": is_tame(world, &circuit),
            "standard_heptagon": is_standard_heptagon(world, &circuit),
        }));
    }
    emit_json(&json!({ "fixtures": rows }), out, "fixtures.json")
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let out = cli.out.as_deref();
    match cli.command {
        Command::Ball {
            model,
            base,
            radius,
            width,
            format,
        } => cmd_ball(model.into(), base.as_deref(), radius, width, format, out),
        Command::Census {
            model,
            base,
            radius,
            width,
            max_len,
        } => cmd_census(model.into(), base.as_deref(), radius, width, max_len, out),
        Command::Classify {
            model,
            base,
            radius,
            width,
        } => cmd_classify(model.into(), base.as_deref(), radius, width, out),
        Command::ContractLoop {
            seed,
            length,
            max_denom,
        } => cmd_contract_loop(seed, length, max_denom, out),
        Command::Signature { model, radius } => cmd_signature(model.into(), radius, out),
        Command::Phi { word, curve } => cmd_phi(&word, &curve, out),
        Command::Fixtures => cmd_fixtures(out),
    }
}
