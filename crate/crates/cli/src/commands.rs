use std::path::PathBuf;

use polybilliard::billiard::{
    discontinuity_report, orbit, BilliardError, NearSingular, OrbitRecord, OrbitStatus, PhasePoint,
    SingularityEvent,
};
use polybilliard::geometry::{Point3, Polyhedron};
use polybilliard::symbolic::{
    classify_cell, detect_periodicity, estimate_complexity, Beam, CellClass, Periodicity, Word,
};
use polybilliard::transversal::{
    count_line_surface_intersections_with, eval_constraint_with, independence_check_with, pair_constraint_with,
    sample_transversals, triple_surface_with, ConstraintValue, EdgeLine, Independence, IntersectionCount,
    TransversalConstraint, TripleSurface,
};
use polybilliard::unfolding::{generate_group, unfold_orbit, GroupStatus};
use polybilliard::Tolerances;
use serde::{Deserialize, Serialize};

use crate::config::{config_hash, direction, load_polyhedron, point, read_input, Sink, Stamped};
use crate::error::CliError;
use crate::{Command, Start};

pub struct Context {
    pub seed: u64,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
}

impl Context {
    fn sink(&self) -> Sink {
        Sink::new(self.out.clone())
    }
}

pub fn dispatch(cmd: &Command, ctx: &Context) -> Result<(), CliError> {
    match cmd {
        Command::Simulate { polyhedron, start } => {
            let (poly, hash) = setup(cmd, ctx, polyhedron)?;
            simulate(&poly, start, ctx, &hash)
        }
        Command::Code {
            polyhedron,
            start,
            radius,
        } => {
            let (poly, hash) = setup(cmd, ctx, polyhedron)?;
            code(&poly, start, *radius, ctx, &hash)
        }
        Command::Unfold { polyhedron, start } => {
            let (poly, hash) = setup(cmd, ctx, polyhedron)?;
            unfold(&poly, start, ctx, &hash)
        }
        Command::Group { polyhedron, bound } => {
            let (poly, hash) = setup(cmd, ctx, polyhedron)?;
            group(&poly, *bound, ctx, &hash)
        }
        Command::Transversal { input, samples, reach } => {
            let text = read_input(input)?;
            let hash = config_hash(cmd, ctx.seed, &ctx.tol, &text)?;
            transversal(&text, *samples, *reach, ctx, &hash)
        }
        Command::Cell {
            polyhedron,
            theta,
            word,
            kmax,
        } => {
            let (poly, hash) = setup(cmd, ctx, polyhedron)?;
            let theta = direction(*theta, "theta")?;
            let word = Word::parse(&poly, word)?;
            cell(&poly, theta, &word, *kmax, ctx, &hash)
        }
        Command::Complexity {
            polyhedron,
            nmax,
            budget,
            meta,
        } => {
            let (poly, hash) = setup(cmd, ctx, polyhedron)?;
            complexity(&poly, *nmax, *budget, meta.as_ref(), ctx, &hash)
        }
    }
}

fn setup(cmd: &Command, ctx: &Context, path: &std::path::Path) -> Result<(Polyhedron, String), CliError> {
    let text = read_input(path)?;
    let poly = load_polyhedron(&text, ctx.tol)?;
    let hash = config_hash(cmd, ctx.seed, &ctx.tol, &text)?;
    Ok((poly, hash))
}

fn start_orbit(poly: &Polyhedron, start: &Start) -> Result<OrbitRecord, CliError> {
    if start.steps == 0 {
        return Err(CliError::Precondition("--steps must be positive".into()));
    }
    let theta = direction(start.theta, "theta")?;
    let m = point(start.m);
    let x = match &start.face {
        Some(label) => {
            let face = poly
                .face_by_label(label)
                .ok_or_else(|| CliError::Parse(format!("unknown face label {label:?}")))?;
            PhasePoint::new(poly, face, m, theta)?
        }
        None => PhasePoint::locate(poly, m, theta)?,
    };
    let rec = orbit(&x, start.steps, poly);
    if let OrbitStatus::Singular(ev) = &rec.status {
        eprintln!(
            "note: orbit is singular ({:?}) after {} phase point(s)",
            ev.kind,
            rec.points.len()
        );
    }
    if let Some(k) = rec.first_near_singular() {
        eprintln!("note: bounce {k} passes within the singular tolerance of an edge");
    }
    Ok(rec)
}

fn json_line<T: Serialize>(hash: &str, seed: u64, record: T) -> Result<String, CliError> {
    Ok(serde_json::to_string(&Stamped {
        config_hash: hash,
        seed,
        record,
    })?)
}

fn json_doc<T: Serialize>(hash: &str, seed: u64, record: T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(&Stamped {
        config_hash: hash,
        seed,
        record,
    })?)
}

fn simulate(poly: &Polyhedron, start: &Start, ctx: &Context, hash: &str) -> Result<(), CliError> {
    let rec = start_orbit(poly, start)?;
    let mut sink = ctx.sink();
    for b in rec.bounces(poly) {
        sink.line(&json_line(hash, ctx.seed, b)?);
    }
    sink.finish()
}

#[derive(Serialize)]
struct CodeReport<'a> {
    word: String,
    phase_points: usize,
    completed: bool,
    singularity: Option<&'a SingularityEvent>,
    near_singular: &'a [NearSingular],
    discontinuities: Vec<EdgeLine>,
}

fn code(poly: &Polyhedron, start: &Start, radius: f64, ctx: &Context, hash: &str) -> Result<(), CliError> {
    if !(radius >= 0.0) {
        return Err(CliError::Parse("--radius must be non-negative".into()));
    }
    let rec = start_orbit(poly, start)?;
    let discontinuities = match discontinuity_report(&rec, poly, radius) {
        Ok(lines) => lines,
        Err(BilliardError::EmptyReport) => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    let singularity = match &rec.status {
        OrbitStatus::Singular(ev) => Some(ev),
        OrbitStatus::Completed(_) => None,
    };
    let report = CodeReport {
        word: rec.word.render(poly, ","),
        phase_points: rec.points.len(),
        completed: singularity.is_none(),
        singularity,
        near_singular: &rec.near_singular,
        discontinuities,
    };
    let mut sink = ctx.sink();
    sink.line(&json_doc(hash, ctx.seed, report)?);
    sink.finish()
}

#[derive(Serialize)]
struct UnfoldedPoint<'a> {
    k: usize,
    face: &'a str,
    point: Point3,
    unfolded_face: &'a [Point3],
}

fn unfold(poly: &Polyhedron, start: &Start, ctx: &Context, hash: &str) -> Result<(), CliError> {
    let rec = start_orbit(poly, start)?;
    let track = unfold_orbit(&rec, poly);
    let mut sink = ctx.sink();
    for (k, (p, face)) in track.points.iter().zip(&track.faces).enumerate() {
        let row = UnfoldedPoint {
            k,
            face: poly.label(rec.points[k].face()),
            point: *p,
            unfolded_face: face,
        };
        sink.line(&json_line(hash, ctx.seed, row)?);
    }
    eprintln!(
        "residual {:e} over path length {} (relative {:e})",
        track.residual,
        track.path_length,
        track.relative_residual()
    );
    sink.finish()
}

fn group(poly: &Polyhedron, bound: usize, ctx: &Context, hash: &str) -> Result<(), CliError> {
    if bound == 0 {
        return Err(CliError::Precondition("--bound must be positive".into()));
    }
    let closure = generate_group(poly, bound);
    let line = match closure.status {
        GroupStatus::Closed { order } => order.to_string(),
        GroupStatus::NotClosedWithinBound { bound } => format!("NOT_CLOSED({bound})"),
    };
    let mut sink = ctx.sink();
    if ctx.out.is_some() {
        sink.line(&format!("# config_hash={hash} seed={}", ctx.seed));
    } else {
        eprintln!("config_hash={hash} seed={}", ctx.seed);
    }
    sink.line(&line);
    sink.finish()
}

#[derive(Deserialize)]
struct TransversalInput {
    edges: Vec<EdgeLine>,
    #[serde(default)]
    probes: Vec<EdgeLine>,
    #[serde(default)]
    theta: Vec<[f64; 3]>,
}

#[derive(Serialize)]
struct PairReport {
    pair: [usize; 2],
    constraint: TransversalConstraint,
    values: Vec<ThetaValue>,
}

#[derive(Serialize)]
struct ThetaValue {
    theta: [f64; 3],
    value: ConstraintValue,
}

#[derive(Serialize)]
struct ProbeReport {
    line: EdgeLine,
    intersections: IntersectionCount,
}

#[derive(Serialize)]
struct TransversalReport {
    constraints: Vec<PairReport>,
    surface: Option<TripleSurface>,
    sample_parameters: Vec<f64>,
    transversals: Vec<EdgeLine>,
    probes: Vec<ProbeReport>,
    independence: Option<Independence>,
}

fn transversal(text: &str, samples: usize, reach: f64, ctx: &Context, hash: &str) -> Result<(), CliError> {
    let input: TransversalInput =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("malformed transversal input: {e}")))?;
    let edges = &input.edges;
    if !(2..=4).contains(&edges.len()) {
        return Err(CliError::Precondition(format!(
            "need 2 to 4 edge lines, got {}",
            edges.len()
        )));
    }
    if !(reach.is_finite() && reach > 0.0) {
        return Err(CliError::Parse("--reach must be positive".into()));
    }
    let tol = &ctx.tol;
    let mut constraints = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let c = pair_constraint_with(&edges[i], &edges[j], tol)?;
            let values = input
                .theta
                .iter()
                .map(|t| ThetaValue {
                    theta: *t,
                    value: eval_constraint_with(&c, &polybilliard::geometry::Vec3::from(*t), tol),
                })
                .collect();
            constraints.push(PairReport {
                pair: [i, j],
                constraint: c,
                values,
            });
        }
    }
    let sample_parameters: Vec<f64> = match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n)
            .map(|k| -reach + 2.0 * reach * k as f64 / (n - 1) as f64)
            .collect(),
    };
    let mut report = TransversalReport {
        constraints,
        surface: None,
        sample_parameters,
        transversals: Vec::new(),
        probes: Vec::new(),
        independence: None,
    };
    if edges.len() >= 3 {
        let surface = triple_surface_with(&edges[0], &edges[1], &edges[2], tol)?;
        report.transversals = sample_transversals(&edges[0], &edges[1], &edges[2], &report.sample_parameters);
        report.probes = input
            .probes
            .iter()
            .map(|line| ProbeReport {
                line: *line,
                intersections: count_line_surface_intersections_with(line, &surface, tol),
            })
            .collect();
        report.surface = Some(surface);
    } else if !input.probes.is_empty() {
        eprintln!("note: probes need at least three edge lines; ignored");
    }
    if edges.len() == 4 {
        report.independence = Some(independence_check_with(&edges[0], &edges[1], &edges[2], &edges[3], tol)?);
    }
    let mut sink = ctx.sink();
    sink.line(&json_doc(hash, ctx.seed, report)?);
    sink.finish()
}

#[derive(Serialize)]
struct CellReport<'a> {
    word: String,
    theta: polybilliard::geometry::Dir3,
    class: CellClass,
    periodicity: Periodicity,
    area: f64,
    base: Point3,
    axes: &'a [polybilliard::geometry::Vec3; 2],
    section: &'a [[f64; 2]],
}

fn cell(poly: &Polyhedron, theta: polybilliard::geometry::Dir3, word: &Word, kmax: usize, ctx: &Context, hash: &str) -> Result<(), CliError> {
    let beam = Beam::from_word(poly, word, theta)?;
    let class = classify_cell(&beam, ctx.tol.deg);
    let periodicity = if beam.is_empty() {
        Periodicity::NotDetected
    } else {
        detect_periodicity(&beam, poly, kmax)
    };
    let report = CellReport {
        word: word.render(poly, ","),
        theta,
        class,
        periodicity,
        area: beam.area(),
        base: beam.base,
        axes: &beam.axes,
        section: &beam.section,
    };
    let mut stdout = Sink::new(None);
    stdout.line(&class_line(&class));
    stdout.finish()?;
    match &ctx.out {
        Some(_) => {
            let mut sink = ctx.sink();
            sink.line(&json_doc(hash, ctx.seed, report)?);
            sink.finish()
        }
        None => {
            eprintln!("config_hash={hash} seed={}", ctx.seed);
            Ok(())
        }
    }
}

fn class_line(class: &CellClass) -> String {
    match class {
        CellClass::Point => "Point".into(),
        CellClass::Strip { width } => format!("Strip(width={width})"),
        CellClass::Tube { area } => format!("Tube(area={area})"),
        CellClass::Empty => "Empty".into(),
    }
}

#[derive(Serialize)]
struct ComplexityMeta<'a> {
    config_hash: &'a str,
    seed: u64,
    budget: u64,
    n_max: usize,
    discarded: u64,
    distinct_samples: usize,
    nondecreasing: bool,
    sampling: &'a str,
    tolerances: &'a Tolerances,
}

fn complexity(
    poly: &Polyhedron,
    n_max: usize,
    budget: u64,
    meta: Option<&PathBuf>,
    ctx: &Context,
    hash: &str,
) -> Result<(), CliError> {
    let table = estimate_complexity(poly, n_max, budget, ctx.seed)?;
    let mut sink = ctx.sink();
    sink.line(&format!("# config_hash={hash} seed={}", ctx.seed));
    sink.line("n,p_hat,log_p_over_n");
    for row in &table.rows {
        let ratio = row.log_p_over_n.map_or(String::new(), |r| r.to_string());
        sink.line(&format!("{},{},{}", row.n, row.p_hat, ratio));
    }
    let doc = serde_json::to_string_pretty(&ComplexityMeta {
        config_hash: hash,
        seed: ctx.seed,
        budget: table.stats.budget,
        n_max: table.stats.n_max,
        discarded: table.stats.discarded,
        distinct_samples: table.stats.distinct_samples,
        nondecreasing: table.nondecreasing,
        sampling: &table.sampling,
        tolerances: &ctx.tol,
    })?;
    let meta_path = meta.cloned().or_else(|| {
        ctx.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".meta.json");
            PathBuf::from(s)
        })
    });
    sink.finish()?;
    match meta_path {
        Some(p) => {
            let mut side = Sink::new(Some(p));
            side.line(&doc);
            side.finish()
        }
        None => {
            eprintln!("{doc}");
            Ok(())
        }
    }
}
