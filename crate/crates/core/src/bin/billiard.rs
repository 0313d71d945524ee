use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use billiard_core::geom::{Angle, AngleRepr, EdgeWord, Point, PolygonInput, PolygonShape, TriangleShape};
use billiard_core::stability::{decorate, natural_decoration, stability_report, Reference};
use billiard_core::tiles::{raster, ray_probe, ray_samples, RayProbe, Region};
use billiard_core::tri3060::{classify_vector, collinearity_probe, decide_case, Case, CaseTag, CaseVerdict, LatticeVector};
use billiard_core::unfolding::{classify_with_corridor, classify_word_tol, report, unfold, Verdict};
use billiard_core::veech::{
    enumerate_cycles, generator_identities, sj, Component, Constraints, CycleSummary, CycleClass, is_obstructed,
};
use billiard_core::{svg, Error, DEFAULT_TOL};

#[derive(Parser, Debug)]
#[command(name = "billiard", version, about = "Periodic billiard trajectories: stability, unfoldings, orbit tiles")]
struct Cli {
    /// Numerical tolerance for corridor and closure tests.
    #[arg(long, global = true, env = "BILLIARD_TOL", default_value_t = DEFAULT_TOL, value_parser = positive_f64)]
    tol: f64,
    /// Worker threads for rasterization.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Polygon and word as a JSON document or a path to one.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

#[derive(Args, Debug, Clone, Default)]
struct WordShape {
    /// Comma-separated 1-based edge labels.
    #[arg(long)]
    word: Option<String>,
    /// `{"triangle": [t1, t2]}`, `{"polygon": [[x, y], ...]}`, or one of
    /// `equilateral`, `30-60-90`, `veech:N`.
    #[arg(long)]
    shape: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stability, winding vector and angle relation of a word.
    Stability {
        #[command(flatten)]
        ws: WordShape,
        /// Count the random triangles (seeded) on which the word is periodic.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Unfold a word on a polygon and classify it.
    Unfold {
        #[command(flatten)]
        ws: WordShape,
        /// Write the strip, corridor and trajectory as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Nearby polygon where the word is periodic, used to decorate a saddle connection.
        #[arg(long)]
        reference: Option<String>,
    },
    /// Raster a word's orbit tile over a rectangle of angle pairs.
    Tile {
        #[command(flatten)]
        ws: WordShape,
        /// `t1min,t1max,t2min,t2max` in radians.
        #[arg(long, default_value = "0.3,1.2,0.3,1.2")]
        region: String,
        /// `N` or `NXxNY`.
        #[arg(long, default_value = "64")]
        resolution: String,
        /// Write the raster as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Classify a word at geometric samples along a ray in angle space.
    Probe {
        #[command(flatten)]
        ws: WordShape,
        /// Ray direction, e.g. `7/4 pi`.
        #[arg(long)]
        direction: String,
        /// Largest step along the ray; later samples halve it.
        #[arg(long, default_value_t = 1e-6 * 2048.0)]
        delta: f64,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        /// Also probe the directions rotated by plus and minus this angle.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Report every sample, not only the periodic ones.
        #[arg(long)]
        all: bool,
    },
    /// Saddle connections on the 30-60-90 triangle.
    Classify3060 {
        /// Primitive lattice vector `n,m` in the hexagonal basis.
        #[arg(long)]
        vector: Option<String>,
        /// Repetitions of the base path when deciding each case.
        #[arg(long, default_value_t = 1)]
        repetitions: u32,
        /// Run the collinearity probe for `s2` or `s3`.
        #[arg(long, requires = "param")]
        case: Option<String>,
        /// `a` for s2, `a + b` for s3 (odd).
        #[arg(long)]
        param: Option<i64>,
        /// Finite-difference step for the probe.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    /// Enumerate decorated cycles on the Veech triangle V_n.
    Veechscan {
        /// Even `n >= 4`.
        #[arg(long)]
        n: u32,
        /// Longest cycle to enumerate.
        #[arg(long)]
        max_components: Option<usize>,
        /// Components that must occur, e.g. `L-3` (repeatable or comma-separated).
        #[arg(long, value_delimiter = ',')]
        require: Vec<String>,
        /// Components that must not occur.
        #[arg(long, value_delimiter = ',')]
        forbid: Vec<String>,
        /// Drop the L/R symmetry requirement.
        #[arg(long)]
        no_symmetry: bool,
        /// Also list cycles excluded by the congruence.
        #[arg(long)]
        include_obstructed: bool,
        /// Report the Veech group generator relations instead.
        #[arg(long)]
        generators: bool,
        /// Draw the first reported cycle as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// The cycles S_j on V_4.
    Sj {
        /// List S_1 through S_jmax.
        #[arg(long, default_value_t = 4)]
        j_max: usize,
        /// Draw S_j for this j as SVG.
        #[arg(long, requires = "svg")]
        draw: Option<usize>,
        /// Output path for `--draw`.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ShapeDoc {
    Triangle { triangle: Vec<AngleRepr> },
    Polygon { polygon: Vec<[f64; 2]> },
}

#[derive(Debug)]
struct CliError {
    kind: String,
    message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError { kind: e.kind().into(), message: e.to_string() }
    }
}

fn fail(kind: &str, message: impl Into<String>) -> CliError {
    CliError { kind: kind.into(), message: message.into() }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => match emit(&cli, &v) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => report_error(e),
        },
        Err(e) => report_error(e),
    }
}

fn report_error(e: CliError) -> ExitCode {
    eprintln!("{}", json!({"error": {"kind": e.kind, "message": e.message}}));
    ExitCode::from(1)
}

fn emit(cli: &Cli, v: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| fail("io", e.to_string()))?;
    match &cli.output {
        Some(p) => write_file(p, &(text + "\n")),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(fail("io", e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn write_file(p: &PathBuf, s: &str) -> CliResult<()> {
    std::fs::write(p, s).map_err(|e| fail("io", format!("{}: {e}", p.display())))
}

fn to_value<T: Serialize>(t: &T) -> CliResult<Value> {
    serde_json::to_value(t).map_err(|e| fail("io", e.to_string()))
}

fn run(cli: &Cli) -> CliResult<Value> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(|e| fail("threads", e.to_string()))?;
    }
    let tol = cli.tol;
    match &cli.command {
        Command::Stability { ws, sample } => {
            let (word, shape) = word_and_shape(cli, ws, false)?;
            let mut out = to_value(&stability_report(&word))?;
            if let Some(p) = &shape {
                out["class"] = to_value(&classify_word_tol(p, &word, tol)?)?;
            }
            if let Some(count) = sample {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                let mut periodic = 0;
                for _ in 0..*count {
                    let t = random_triangle(&mut rng);
                    if classify_word_tol(&t.polygon(), &word, tol)? == Verdict::Periodic {
                        periodic += 1;
                    }
                }
                out["sampled"] = json!({"triangles": count, "periodic": periodic, "seed": cli.seed});
            }
            Ok(out)
        }
        Command::Unfold { ws, svg: svg_path, reference } => {
            let (word, shape) = word_and_shape(cli, ws, true)?;
            let p = shape.expect("shape required");
            let rep = report(&p, &word, tol)?;
            if let Some(path) = svg_path {
                let strip = unfold(&p, &word)?;
                let (_, corridor) = classify_with_corridor(&p, &word, tol)?;
                let decorations = if rep.class == Verdict::Saddle {
                    Some(match reference {
                        Some(r) => decorate(&p, &word, &Reference::from_polygon(&parse_shape(r)?, &word)?)?,
                        None => natural_decoration(&p, &word)?,
                    })
                } else {
                    None
                };
                write_file(path, &svg::strip_svg(&strip, corridor.as_ref(), decorations.as_ref()))?;
            }
            to_value(&rep)
        }
        Command::Tile { ws, region, resolution, svg: svg_path } => {
            let (word, _) = word_and_shape(cli, ws, false)?;
            let region = parse_region(region)?;
            let res = parse_resolution(resolution)?;
            let r = raster(&word, region, res, tol)?;
            if let Some(path) = svg_path {
                write_file(path, &svg::raster_svg(&r))?;
            }
            Ok(json!({
                "word": word.letters(),
                "region": region,
                "resolution": [r.nx, r.ny],
                "counts": r.counts(),
            }))
        }
        Command::Probe { ws, direction, delta, samples, epsilon, all } => {
            let shape_given = ws.shape.is_some() || cli.input.is_some();
            let (word, _) = word_and_shape(cli, ws, false)?;
            let origin = if shape_given { triangle_of(cli, ws)? } else { TriangleShape::t306090() };
            let direction: Angle = direction.parse()?;
            let p = RayProbe { origin, direction: direction.value(), epsilon: *epsilon, delta: *delta, samples: *samples };
            let mut out = to_value(&ray_probe(&p, &word, tol)?)?;
            if *all {
                out["all_samples"] = to_value(&ray_samples(&p, &word, tol)?)?;
            }
            Ok(out)
        }
        Command::Classify3060 { vector, repetitions, case, param, step } => {
            if let (Some(c), Some(a)) = (case, param) {
                let case: Case = c.parse()?;
                let r = collinearity_probe(case, *a, &TriangleShape::t306090(), *step)?;
                let mut out = to_value(&r)?;
                out["case"] = json!(case.to_string());
                out["param"] = json!(a);
                out["below"] = json!(r.derivative < 0.0);
                return Ok(out);
            }
            let v = vector.as_ref().ok_or_else(|| fail("usage", "give --vector or --case with --param"))?;
            let nums = parse_ints(v)?;
            if nums.len() != 2 {
                return Err(fail("parse", format!("expected two integers in '{v}'")));
            }
            let class = classify_vector(LatticeVector::new(nums[0], nums[1]))?;
            let mut cases = Vec::new();
            for &c in &class.cases {
                let tags = CaseTag::all(c, *repetitions);
                let mut hits = Vec::new();
                for t in &tags {
                    let d = decide_case(t, &class.g)?;
                    if d != CaseVerdict::NotNullHomologous {
                        hits.push((t, d));
                    }
                }
                let verdict = hits.first().map(|x| x.1).unwrap_or(CaseVerdict::NotNullHomologous);
                cases.push(json!({
                    "case": c.to_string(),
                    "verdict": verdict,
                    "assignments": tags.len(),
                    "null_homologous": hits.iter().map(|(t, _)| json!({
                        "ccw_v1": t.ccw_v1, "cw_v1": t.cw_v1, "ccw_v3": t.ccw_v3, "cw_v3": t.cw_v3,
                        "x": t.x(),
                    })).collect::<Vec<_>>(),
                }));
            }
            Ok(json!({
                "vector": [nums[0], nums[1]],
                "parity": [class.parity.0, class.parity.1],
                "base": [class.base.n, class.base.m],
                "rotated": class.rotated,
                "g": class.g.entries(),
                "cases": cases,
            }))
        }
        Command::Veechscan {
            n,
            max_components,
            require,
            forbid,
            no_symmetry,
            include_obstructed,
            generators,
            svg: svg_path,
        } => {
            if *generators {
                return to_value(&generator_identities(*n)?);
            }
            let max = max_components.ok_or_else(|| fail("usage", "--max-components is required"))?;
            let mut cons = Constraints::midpoint_symmetric();
            cons.symmetric = !no_symmetry;
            cons.require = components(require, *n)?;
            cons.forbid = components(forbid, *n)?;
            let found = enumerate_cycles(*n, max, &cons)?;
            let (surviving, obstructed): (Vec<&CycleClass>, Vec<&CycleClass>) =
                found.iter().partition(|c| !is_obstructed(&c.cycle));
            if let Some(path) = svg_path {
                let first = surviving.first().or(obstructed.first());
                let c = first.ok_or_else(|| fail("precondition", "no cycle to draw"))?;
                write_file(path, &svg::cycle_svg(&c.cycle))?;
            }
            let summ = |v: &[&CycleClass]| v.iter().map(|c| CycleSummary::of(c)).collect::<Vec<_>>();
            let mut out = json!({"surviving": summ(&surviving)});
            if *include_obstructed {
                out["obstructed"] = to_value(&summ(&obstructed))?;
            }
            Ok(out)
        }
        Command::Sj { j_max, draw, svg: svg_path } => {
            let mut list = Vec::new();
            for j in 1..=*j_max {
                let c = sj(j)?;
                let s = CycleSummary::of(&CycleClass { has_mirror: c.mirror().canonical() != c.canonical(), cycle: c });
                let mut v = to_value(&s)?;
                v["j"] = json!(j);
                list.push(v);
            }
            if let (Some(j), Some(path)) = (draw, svg_path) {
                write_file(path, &svg::cycle_svg(&sj(*j)?))?;
            }
            Ok(json!({"n": 4, "cycles": list}))
        }
    }
}

fn random_triangle(rng: &mut ChaCha8Rng) -> TriangleShape {
    loop {
        let a = rng.gen_range(0.05..PI / 2.0 - 0.05);
        let b = rng.gen_range(0.05..PI / 2.0 - 0.05);
        if a + b < PI - 0.05 {
            if let Ok(t) = TriangleShape::from_radians(a, b) {
                return t;
            }
        }
    }
}

fn read_input(cli: &Cli) -> CliResult<Option<PolygonInput>> {
    let Some(src) = &cli.input else { return Ok(None) };
    let text = if src.trim_start().starts_with('{') {
        src.clone()
    } else {
        std::fs::read_to_string(src).map_err(|e| fail("io", format!("{src}: {e}")))?
    };
    serde_json::from_str(&text).map(Some).map_err(|e| fail("parse", e.to_string()))
}

fn parse_shape(s: &str) -> CliResult<PolygonShape> {
    let t = s.trim();
    match t {
        "equilateral" => return Ok(TriangleShape::equilateral().polygon()),
        "30-60-90" => return Ok(TriangleShape::t306090().polygon()),
        _ => {}
    }
    if let Some(n) = t.strip_prefix("veech:") {
        let n: u32 = n.parse().map_err(|_| fail("parse", format!("bad shape '{s}'")))?;
        if n < 2 {
            return Err(fail("invalid_shape", format!("V_{n} is not a triangle")));
        }
        return Ok(TriangleShape::veech(n).polygon());
    }
    let doc: ShapeDoc = serde_json::from_str(t).map_err(|e| fail("parse", format!("shape: {e}")))?;
    Ok(match doc {
        ShapeDoc::Triangle { triangle } => {
            PolygonInput { n: 3, angles: triangle, vertices: vec![], word: vec![] }.polygon()?
        }
        ShapeDoc::Polygon { polygon } => {
            PolygonShape::from_vertices(polygon.iter().map(|v| Point::new(v[0], v[1])).collect())?
        }
    })
}

fn triangle_of(cli: &Cli, ws: &WordShape) -> CliResult<TriangleShape> {
    if let Some(s) = &ws.shape {
        let t = s.trim();
        return match t {
            "equilateral" => Ok(TriangleShape::equilateral()),
            "30-60-90" => Ok(TriangleShape::t306090()),
            _ if t.starts_with("veech:") => {
                let n: u32 = t[6..].parse().map_err(|_| fail("parse", format!("bad shape '{s}'")))?;
                Ok(TriangleShape::veech(n))
            }
            _ => match serde_json::from_str::<ShapeDoc>(t).map_err(|e| fail("parse", e.to_string()))? {
                ShapeDoc::Triangle { triangle } => {
                    Ok(PolygonInput { n: 3, angles: triangle, vertices: vec![], word: vec![] }.triangle()?)
                }
                ShapeDoc::Polygon { .. } => Err(fail("invalid_shape", "a triangle is required")),
            },
        };
    }
    match read_input(cli)? {
        Some(inp) => Ok(inp.triangle()?),
        None => Err(fail("usage", "a triangle is required")),
    }
}

/// Word and optional polygon from flags, falling back to `--input`.
fn word_and_shape(cli: &Cli, ws: &WordShape, need_shape: bool) -> CliResult<(EdgeWord, Option<PolygonShape>)> {
    let input = read_input(cli)?;
    let shape = match (&ws.shape, &input) {
        (Some(s), _) => Some(parse_shape(s)?),
        (None, Some(inp)) if !inp.angles.is_empty() || !inp.vertices.is_empty() => Some(inp.polygon()?),
        _ => None,
    };
    let n = shape.as_ref().map(|p| p.n()).or(input.as_ref().map(|i| i.n)).unwrap_or(3);
    let word = match (&ws.word, &input) {
        (Some(w), _) => EdgeWord::parse(w, n)?,
        (None, Some(inp)) if !inp.word.is_empty() => EdgeWord::new(inp.word.clone(), n)?,
        _ => return Err(fail("usage", "a word is required (--word or --input)")),
    };
    if need_shape && shape.is_none() {
        return Err(fail("usage", "a shape is required (--shape or --input)"));
    }
    Ok((word, shape))
}

fn parse_floats(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<Angle>().map(|a| a.value()).map_err(CliError::from))
        .collect()
}

fn parse_ints(s: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| fail("parse", format!("'{x}' is not an integer"))))
        .collect()
}

fn parse_region(s: &str) -> CliResult<Region> {
    let v = parse_floats(s)?;
    if v.len() != 4 {
        return Err(fail("parse", format!("region needs four numbers, got '{s}'")));
    }
    Ok(Region { theta1: (v[0], v[1]), theta2: (v[2], v[3]) })
}

fn parse_resolution(s: &str) -> CliResult<(usize, usize)> {
    let bad = || fail("parse", format!("bad resolution '{s}'"));
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            Ok((k, k))
        }
    }
}

fn components(v: &[String], n: u32) -> CliResult<Vec<Component>> {
    v.iter().map(|s| Component::parse(s, n).map_err(CliError::from)).collect()
}
