use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use compomat::double::core_groupoid;
use compomat::fixtures;
use compomat::groupoid::{FiniteGroupoid, DEFAULT_CLOSURE_CAP};
use compomat::jet::{signed_permutations, RationalMatrix3};
use compomat::material::composite_groupoid;
use compomat::rational::Rational;
use compomat::uniformity::{classify_composite, complete_square, triclinic_search, PartialSquare, TriclinicSearchSpace};
use serde::{Deserialize, Serialize};

use crate::document::{self, arrow_from_decl, export, parse_body_file, to_json, ArrowDecl, Resolved, ResolveOptions};
use crate::error::CliError;
use crate::report::{
    AxiomsReport, ClassifyReport, CoreArrowJson, CoreReport, GroupoidAxiomsJson, IntersectReport, OrbitsJson,
    SearchReport, SearchSpaceJson, SquareJson, SquaresReport,
};

pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Finite-model analysis of composite materials.
///
/// A TARGET is a body document (JSON file) or a fixture name: `pair:N`,
/// `crystalline:default`, `triclinic:default`, `triclinic:search`,
/// `random:SEED` or `random:SEED:N`.
///
/// Exit codes: 0 success (including analyses whose answer is "false"),
/// 1 engine failure on valid input (not closed, not transitive, cap
/// exceeded), 2 usage, parse, schema or resolution errors.
#[derive(Debug, Parser)]
#[command(name = "compomat", version)]
pub struct Cli {
    /// Upper bound on arrows per groupoid and on emitted squares.
    #[arg(long, global = true, env = "COMPOMAT_CAP", default_value_t = DEFAULT_CLOSURE_CAP)]
    pub cap: usize,
    /// Tolerance `p/q` for material-isomorphism extraction; overrides the document.
    #[arg(long, global = true)]
    pub tol: Option<Rational>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print the JSON schema of the reports and exit.
    #[arg(long)]
    pub emit_schema: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the groupoid axioms of every groupoid of the target.
    Axioms { target: String },
    /// Decide every uniformity notion of the target's composite.
    Classify {
        target: String,
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// List the commutative squares extending a partial square.
    Complete {
        target: String,
        /// JSON object with any of `bottom`, `top`, `right`, `left`.
        #[arg(long)]
        partial: PathBuf,
    },
    /// Build the core groupoid of the target's composite.
    Core { target: String },
    /// Intersect the two materials of the target's composite.
    Intersect { target: String },
    /// Classify a built-in example.
    Demo {
        #[arg(value_enum)]
        example: DemoKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        points: usize,
        /// For `triclinic`: run the implant search instead.
        #[arg(long)]
        search: bool,
    },
    /// Write a fixture as a body document.
    Export { fixture: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoKind {
    Pair,
    Crystalline,
    Triclinic,
    Random,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<ArrowDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<ArrowDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<ArrowDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<ArrowDecl>,
}

const SEARCH_TARGET: &str = "triclinic:search";

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_usize(target: &str, s: &str) -> Result<usize, CliError> {
    s.parse().map_err(|_| usage(format!("{target}: {s:?} is not a non-negative integer")))
}

/// Fixture names resolve to the same shape as documents.
pub fn fixture(name: &str) -> Result<Option<Resolved>, CliError> {
    let parts: Vec<&str> = name.split(':').collect();
    let named = |c: compomat::material::Composite| Resolved {
        body: c.body.clone(),
        groupoids: vec![("omega1".into(), c.omega1().clone()), ("omega2".into(), c.omega2().clone())],
        composite: Some(c),
    };
    let r = match parts.as_slice() {
        ["pair", n] => {
            let n = parse_usize(name, n)?;
            if n == 0 {
                return Err(usage("pair:N needs N >= 1"));
            }
            let mut r = named(fixtures::pair_composite(n));
            r.groupoids.insert(0, ("pair".into(), fixtures::pair_groupoid(n)));
            r
        }
        ["crystalline", "default"] => named(fixtures::crystalline_default()),
        ["triclinic", "default"] => named(fixtures::triclinic_default()),
        ["random", seed] => named(fixtures::random_composite(
            seed.parse().map_err(|_| usage(format!("{name}: bad seed")))?,
            3,
            &fixtures::standard_group_pool(),
        )),
        ["random", seed, n] => {
            let n = parse_usize(name, n)?;
            if !(1..=8).contains(&n) {
                return Err(usage("random:SEED:N needs 1 <= N <= 8"));
            }
            named(fixtures::random_composite(
                seed.parse().map_err(|_| usage(format!("{name}: bad seed")))?,
                n,
                &fixtures::standard_group_pool(),
            ))
        }
        _ => return Ok(None),
    };
    Ok(Some(r))
}

fn looks_like_fixture(target: &str) -> bool {
    ["pair:", "crystalline:", "triclinic:", "random:"].iter().any(|p| target.starts_with(p)) && !Path::new(target).exists()
}

/// How a target is named inside reports: fixtures by name, files by file
/// name, so reports do not depend on the working directory.
fn display_name(target: &str) -> String {
    if looks_like_fixture(target) {
        target.to_string()
    } else {
        Path::new(target).file_name().map_or_else(|| target.to_string(), |f| f.to_string_lossy().into_owned())
    }
}

pub fn load(target: &str, opts: &ResolveOptions) -> Result<Resolved, CliError> {
    let resolved = if looks_like_fixture(target) {
        fixture(target)?.ok_or_else(|| usage(format!("unknown fixture {target:?}")))?
    } else {
        document::resolve(&parse_body_file(Path::new(target))?, opts)?
    };
    for (name, g) in &resolved.groupoids {
        check_cap(opts.cap, g.len(), &format!("groupoid {name:?}"))?;
    }
    Ok(resolved)
}

fn check_cap(cap: usize, n: usize, what: &str) -> Result<(), CliError> {
    if n > cap {
        Err(CliError::SizeCap(format!("{what} has {n} elements, above the cap of {cap}")))
    } else {
        Ok(())
    }
}

fn sign_diagonals() -> Vec<RationalMatrix3> {
    signed_permutations().into_iter().filter(|m| (0..3).all(|i| (0..3).all(|j| i == j || m.entry(i, j).is_zero()))).collect()
}

/// Implant spaces searched from the command line: every signed permutation
/// on up to 3 points, sign diagonals on 4 and 5.
pub fn cli_search_spaces() -> Vec<TriclinicSearchSpace> {
    let full = signed_permutations();
    let diag = sign_diagonals();
    vec![
        TriclinicSearchSpace { n_points: 2, pool_name: "signed_permutations".into(), pool: full.clone() },
        TriclinicSearchSpace { n_points: 3, pool_name: "signed_permutations".into(), pool: full },
        TriclinicSearchSpace { n_points: 4, pool_name: "sign_diagonals".into(), pool: diag.clone() },
        TriclinicSearchSpace { n_points: 5, pool_name: "sign_diagonals".into(), pool: diag },
    ]
}

fn search(target: &str, cap: usize, format: Format) -> Result<String, CliError> {
    let spaces = cli_search_spaces();
    let meta: Vec<SearchSpaceJson> = spaces
        .iter()
        .map(|s| SearchSpaceJson {
            n_points: s.n_points,
            pool: s.pool_name.clone(),
            pool_size: s.pool.len(),
            instances: s.pool.len().pow(s.n_points as u32 - 1),
        })
        .collect();
    check_cap(cap, meta.iter().map(|m| m.instances).sum(), "the implant search")?;
    let report = SearchReport::new(target, meta, &triclinic_search(&spaces)?);
    Ok(render(format, &report, SearchReport::text))
}

fn render<T: Serialize>(format: Format, report: &T, text: impl Fn(&T) -> String) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Text => text(report),
    }
}

fn classify(target: &str, opts: &ResolveOptions, format: Format) -> Result<String, CliError> {
    if target == SEARCH_TARGET {
        return search(target, opts.cap, format);
    }
    let r = load(target, opts)?;
    let c = r.composite()?;
    let report = ClassifyReport::new(&display_name(target), &c.body, &classify_composite(c)?);
    Ok(render(format, &report, ClassifyReport::text))
}

fn axioms(target: &str, opts: &ResolveOptions, format: Format) -> Result<String, CliError> {
    let r = load(target, opts)?;
    let groupoids: Vec<GroupoidAxiomsJson> =
        r.groupoids.iter().map(|(n, g)| GroupoidAxiomsJson::new(n, g, &g.check_axioms())).collect();
    let report = AxiomsReport {
        schema_version: document::SCHEMA_VERSION,
        command: "axioms",
        target: display_name(target),
        passed: groupoids.iter().all(|g| g.passed),
        groupoids,
    };
    Ok(render(format, &report, AxiomsReport::text))
}

fn complete(target: &str, partial: &Path, opts: &ResolveOptions, format: Format) -> Result<String, CliError> {
    let r = load(target, opts)?;
    let c = r.composite()?;
    let text = document::read(partial)?;
    let name = partial.display().to_string();
    let doc: PartialDocument = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        source_name: name.clone(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let side = |s: &str, a: &Option<ArrowDecl>| {
        a.as_ref().map(|a| arrow_from_decl(&c.body, &format!("{name}: {s}"), a)).transpose()
    };
    let p = PartialSquare {
        bottom: side("bottom", &doc.bottom)?,
        top: side("top", &doc.top)?,
        right: side("right", &doc.right)?,
        left: side("left", &doc.left)?,
    };
    let squares = complete_square(c, &p)?;
    check_cap(opts.cap, squares.len(), "the completion set")?;
    let report = SquaresReport {
        schema_version: document::SCHEMA_VERSION,
        command: "complete",
        target: display_name(target),
        count: squares.len(),
        squares: squares.iter().map(|s| SquareJson::new(&c.body, s)).collect(),
    };
    Ok(render(format, &report, SquaresReport::text))
}

fn core(target: &str, opts: &ResolveOptions, format: Format) -> Result<String, CliError> {
    let r = load(target, opts)?;
    let c = r.composite()?;
    let k = core_groupoid(c)?;
    check_cap(opts.cap, k.groupoid.len(), "the core groupoid")?;
    let body = &c.body;
    let report = CoreReport {
        schema_version: document::SCHEMA_VERSION,
        command: "core",
        target: display_name(target),
        arrow_count: k.groupoid.len(),
        axioms_passed: k.groupoid.check_axioms().passed,
        orbits: OrbitsJson::new(body, &k.groupoid.orbit_partition()),
        arrows: k
            .squares()
            .map(|(_, s)| CoreArrowJson {
                src: body.name(s.top.src).to_string(),
                dst: body.name(s.top.dst).to_string(),
                top: s.top.payload.to_string(),
                left: s.left.payload.to_string(),
            })
            .collect(),
    };
    Ok(render(format, &report, CoreReport::text))
}

fn intersect(target: &str, opts: &ResolveOptions, format: Format) -> Result<String, CliError> {
    let r = load(target, opts)?;
    let common: FiniteGroupoid = composite_groupoid(r.composite()?)?;
    let report = IntersectReport::new(&display_name(target), &common);
    Ok(render(format, &report, IntersectReport::text))
}

/// Runs one invocation and returns what goes to stdout.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    if cli.emit_schema {
        return Ok(REPORT_SCHEMA.to_string());
    }
    let opts = ResolveOptions { tol: cli.tol.clone(), cap: cli.cap };
    let format = cli.format;
    match cli.command.as_ref().ok_or_else(|| usage("a subcommand is required (see --help)"))? {
        Command::Axioms { target } => axioms(target, &opts, format),
        Command::Classify { target, json } => classify(target, &opts, if *json { Format::Json } else { format }),
        Command::Complete { target, partial } => complete(target, partial, &opts, format),
        Command::Core { target } => core(target, &opts, format),
        Command::Intersect { target } => intersect(target, &opts, format),
        Command::Demo { example, seed, points, search: run_search } => {
            let target = match example {
                DemoKind::Pair => format!("pair:{points}"),
                DemoKind::Crystalline => "crystalline:default".into(),
                DemoKind::Triclinic if *run_search => SEARCH_TARGET.into(),
                DemoKind::Triclinic => "triclinic:default".into(),
                DemoKind::Random => format!("random:{seed}:{points}"),
            };
            classify(&target, &opts, format)
        }
        Command::Export { fixture: name } => {
            let r = fixture(name)?.ok_or_else(|| usage(format!("unknown fixture {name:?}")))?;
            let has_composite = r.composite.is_some();
            Ok(to_json(&export(&r.body, &r.groupoids, has_composite.then_some(("omega1", "omega2")))))
        }
    }
}
