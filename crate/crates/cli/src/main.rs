//! `qset`: load, validate, transform and generate finite-quantum-set data.
//!
//! Reports are canonical JSON on standard output (sorted keys, floats at 17
//! significant digits), so identical inputs and seeds produce byte-identical
//! bytes. Exit code 0 means every check passed, 1 means some check failed,
//! 2 means the input or invocation was unusable.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qset_core::corpus;
use qset_core::io::{
    canonical_json, format_float, AlgebraDoc, Document, GraphDoc, OpsysDoc, ProjectionDoc,
    QGraphDoc, QfunDoc, RelationDoc,
};
use qset_core::qgraph::{classical_to_quantum, QuantumGraph};
use qset_core::{
    check_operator_system, check_qgraph, check_relation, check_ssfa, compose, copyable_elements,
    dagger_dual, decompose, graph_to_operator_system, is_simple, is_unitary,
    operator_system_to_graph, relation_to_adjacency, to_projection, verify_hom,
    verify_iso, verify_qbij, verify_qfun, wedderburn, Check, Tolerance,
};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qset", version, about = "finite quantum sets, functions, graphs and relations")]
struct Cli {
    /// Relative Frobenius-norm tolerance for equality checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Absolute eigenvalue clustering gap.
    #[arg(long = "eig-gap", global = true, default_value_t = 1e-8)]
    eig_gap: f64,
    /// Seed for every randomized routine.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArg {
    /// Output file path.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document against the axioms of its kind.
    Check { file: PathBuf },
    /// Structural information: block sizes and copyable elements of an algebra.
    Info { file: PathBuf },
    /// Compose two quantum functions (apply FIRST, then SECOND).
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Dagger dual of a quantum bijection.
    Dual {
        file: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Decompose a quantum function into simple summands.
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Verify a quantum graph homomorphism: hom QFUN SOURCE-GRAPH TARGET-GRAPH.
    Hom {
        qfun: PathBuf,
        source: PathBuf,
        target: PathBuf,
    },
    /// Verify a quantum graph isomorphism: iso QFUN SOURCE-GRAPH TARGET-GRAPH.
    Iso {
        qfun: PathBuf,
        source: PathBuf,
        target: PathBuf,
    },
    /// Convert between representations of graphs and relations.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTarget,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Emit a named example document.
    Generate {
        /// classical-set, matrix-algebra, kn, cn, path, latin3, qls4,
        /// pauli-ueb or block-ppm.
        name: String,
        /// Size parameter for the parameterized names.
        param: Option<usize>,
        #[command(flatten)]
        out: OutputArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Relation,
    Adjacency,
    Projection,
    Opsys,
}

struct Report {
    command: &'static str,
    checks: Vec<(String, Check)>,
    artifacts: Vec<String>,
    extra: serde_json::Value,
    tol: Tolerance,
}

impl Report {
    fn new(command: &'static str, tol: Tolerance) -> Self {
        Report {
            command,
            checks: Vec::new(),
            artifacts: Vec::new(),
            extra: serde_json::Value::Null,
            tol,
        }
    }

    fn push(&mut self, name: &str, check: Check) {
        self.checks.push((name.to_string(), check));
    }

    fn verdict(&self) -> bool {
        self.checks.iter().all(|(_, c)| c.pass)
    }

    fn render(&self) -> String {
        let checks: Vec<serde_json::Value> = self
            .checks
            .iter()
            .map(|(name, c)| {
                json!({
                    "name": name,
                    "pass": c.pass,
                    "residual": serde_json::Value::String(format_float(c.residual)),
                })
            })
            .collect();
        let mut value = json!({
            "command": self.command,
            "verdict": if self.verdict() { "pass" } else { "fail" },
            "checks": checks,
            "tol": {
                "rel": serde_json::Value::String(format_float(self.tol.rel)),
                "eig_gap": serde_json::Value::String(format_float(self.tol.eig_gap)),
            },
        });
        if !self.artifacts.is_empty() {
            value["artifacts"] = json!(self.artifacts);
        }
        if !self.extra.is_null() {
            value["info"] = self.extra.clone();
        }
        canonical_json(&value)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match Tolerance::new(cli.tol, cli.eig_gap) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(cli, tol) {
        Ok(report) => {
            let pass = report.verdict();
            println!("{}", report.render());
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn load(path: &PathBuf) -> Result<Document, AnyError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(Document::parse(&text)?)
}

fn write_doc(doc: &Document, path: &PathBuf, report: &mut Report) -> Result<(), AnyError> {
    std::fs::write(path, doc.to_json() + "\n")
        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    report.artifacts.push(path.display().to_string());
    Ok(())
}

fn load_qfun(path: &PathBuf, tol: &Tolerance) -> Result<qset_core::QuantumFunction, AnyError> {
    match load(path)? {
        Document::Qfun(d) => Ok(d.to_qfun(tol)?),
        Document::Family(d) => Ok(qset_core::family_to_qfun(&d.to_family()?, tol)?),
        other => Err(format!("{} holds a {} document, expected qfun", path.display(), other.kind()).into()),
    }
}

fn load_graph(path: &PathBuf, tol: &Tolerance) -> Result<QuantumGraph, AnyError> {
    match load(path)? {
        Document::Graph(d) => Ok(classical_to_quantum(&d.to_graph()?, tol)?),
        Document::QGraph(d) => Ok(d.to_qgraph(tol)?),
        other => Err(format!(
            "{} holds a {} document, expected graph or qgraph",
            path.display(),
            other.kind()
        )
        .into()),
    }
}

fn run(cli: Cli, tol: Tolerance) -> Result<Report, AnyError> {
    match cli.command {
        Command::Check { file } => cmd_check(&file, tol),
        Command::Info { file } => cmd_info(&file, tol, cli.seed),
        Command::Compose { first, second, out } => cmd_compose(&first, &second, out, tol),
        Command::Dual { file, out } => cmd_dual(&file, out, tol),
        Command::Decompose { file, out } => cmd_decompose(&file, out, tol, cli.seed),
        Command::Hom { qfun, source, target } => cmd_hom(&qfun, &source, &target, tol),
        Command::Iso { qfun, source, target } => cmd_iso(&qfun, &source, &target, tol),
        Command::Convert { file, to, out } => cmd_convert(&file, to, out, tol),
        Command::Generate { name, param, out } => cmd_generate(&name, param, out, tol, cli.seed),
    }
}

fn cmd_check(file: &PathBuf, tol: Tolerance) -> Result<Report, AnyError> {
    let mut report = Report::new("check", tol);
    match load(file)? {
        Document::Algebra(d) => {
            let mult = d.mult_matrix()?;
            let unit = d.unit_vector();
            let r = check_ssfa(d.dim, &mult, &unit, &tol)?;
            report.push("associative", r.associative);
            report.push("unital", r.unital);
            report.push("frobenius", r.frobenius);
            report.push("special", r.special);
            report.push("symmetric", r.symmetric);
            report.extra = json!({ "commutative": r.commutative.pass });
        }
        Document::Qfun(d) => {
            let f = d.to_qfun(&tol)?;
            let qf = verify_qfun(&f, &tol)?;
            report.push("qf1", qf.qf1);
            report.push("qf2", qf.qf2);
            report.push("qf3", qf.qf3);
            if qf.passed() {
                let qb = verify_qbij(&f, &tol)?;
                report.push("qb1", qb.qb1);
                report.push("qb2", qb.qb2);
                report.push("unitary", is_unitary(&f));
            }
        }
        Document::Family(d) => {
            let fam = d.to_family()?;
            report.push("rows", fam.check_rows(&tol));
            report.push("cols", fam.check_cols(&tol));
        }
        Document::Graph(d) => {
            let g = d.to_graph()?;
            let qg = classical_to_quantum(&g, &tol)?;
            let r = check_qgraph(&qg.algebra, &qg.adjacency, &tol)?;
            report.push("schur_idempotent", r.schur_idempotent);
            report.push("self_adjoint", r.self_adjoint);
            report.push("symmetric", r.symmetric);
            report.extra = json!({ "reflexivity": r.reflexivity.to_string() });
        }
        Document::QGraph(d) => {
            let qg = d.to_qgraph(&tol)?;
            let r = check_qgraph(&qg.algebra, &qg.adjacency, &tol)?;
            report.push("schur_idempotent", r.schur_idempotent);
            report.push("self_adjoint", r.self_adjoint);
            report.push("symmetric", r.symmetric);
            report.extra = json!({ "reflexivity": r.reflexivity.to_string() });
        }
        Document::Relation(d) => {
            let r = d.to_relation(&tol)?;
            let rep = check_relation(&r, &tol)?;
            report.push("projector", rep.projector);
            report.push("bimodule", rep.bimodule);
        }
        Document::Opsys(d) => {
            let o = d.to_opsys()?;
            let rep = check_operator_system(&o, &tol)?;
            report.push("projector", rep.projector);
            report.push("dagger_closed", rep.dagger_closed);
            report.push("contains_identity", rep.contains_identity);
        }
        Document::Projection(_) => {
            return Err("projection documents are outputs of convert, not checkable".into());
        }
    }
    Ok(report)
}

fn cmd_info(file: &PathBuf, tol: Tolerance, seed: u64) -> Result<Report, AnyError> {
    let mut report = Report::new("info", tol);
    match load(file)? {
        Document::Algebra(d) => {
            let a = d.to_ssfa(&tol)?;
            let w = wedderburn(&a, seed, &tol)?;
            let copyables = copyable_elements(&a, &tol)?;
            report.push("wedderburn", Check::new(true, 0.0));
            report.extra = json!({
                "dim": a.dim(),
                "block_sizes": w.block_sizes,
                "center_dim": w.center_dim,
                "copyable_elements": copyables.len(),
            });
        }
        Document::Qfun(d) => {
            let f = d.to_qfun(&tol)?;
            let qf = verify_qfun(&f, &tol)?;
            report.push("qf1", qf.qf1);
            report.push("qf2", qf.qf2);
            report.push("qf3", qf.qf3);
            report.extra = json!({
                "h_dim": f.h_dim,
                "source_dim": f.source.dim(),
                "target_dim": f.target.dim(),
                "simple": if qf.passed() { json!(is_simple(&f, &tol)?) } else { json!(null) },
            });
        }
        other => {
            return Err(format!("info supports algebra and qfun documents, got {}", other.kind()).into())
        }
    }
    Ok(report)
}

fn cmd_compose(
    first: &PathBuf,
    second: &PathBuf,
    out: OutputArg,
    tol: Tolerance,
) -> Result<Report, AnyError> {
    let mut report = Report::new("compose", tol);
    let f = load_qfun(first, &tol)?;
    let g = load_qfun(second, &tol)?;
    let composite = compose(&g, &f, &tol)?;
    let r = verify_qfun(&composite, &tol)?;
    report.push("qf1", r.qf1);
    report.push("qf2", r.qf2);
    report.push("qf3", r.qf3);
    report.extra = json!({ "h_dim": composite.h_dim });
    let path = out
        .output
        .unwrap_or_else(|| PathBuf::from("composite.qfun"));
    write_doc(&Document::Qfun(QfunDoc::from_qfun(&composite, &tol)), &path, &mut report)?;
    Ok(report)
}

fn cmd_dual(file: &PathBuf, out: OutputArg, tol: Tolerance) -> Result<Report, AnyError> {
    let mut report = Report::new("dual", tol);
    let f = load_qfun(file, &tol)?;
    let qf = verify_qfun(&f, &tol)?;
    report.push("qf1", qf.qf1);
    report.push("qf2", qf.qf2);
    report.push("qf3", qf.qf3);
    if !qf.passed() {
        return Ok(report);
    }
    let qb = verify_qbij(&f, &tol)?;
    report.push("qb1", qb.qb1);
    report.push("qb2", qb.qb2);
    if !qb.passed() {
        return Ok(report);
    }
    let dual = dagger_dual(&f, &tol)?;
    let dqb = verify_qbij(&dual, &tol)?;
    report.push("dual_qb1", dqb.qb1);
    report.push("dual_qb2", dqb.qb2);
    let res = qset_core::qfun::duality_residual(&f, &dual, &tol)?;
    report.push("duality", Check::new(res <= tol.rel, res));
    let path = out.output.unwrap_or_else(|| PathBuf::from("dual.qfun"));
    write_doc(&Document::Qfun(QfunDoc::from_qfun(&dual, &tol)), &path, &mut report)?;
    Ok(report)
}

fn cmd_decompose(
    file: &PathBuf,
    out: OutputArg,
    tol: Tolerance,
    seed: u64,
) -> Result<Report, AnyError> {
    let mut report = Report::new("decompose", tol);
    let f = load_qfun(file, &tol)?;
    let dec = decompose(&f, seed, &tol)?;
    let residual = dec.residual(&tol)?;
    report.push("reassembly", Check::new(residual <= tol.rel, residual));
    let mut parts = Vec::new();
    for (part, iso) in &dec.parts {
        let simple = is_simple(part, &tol)?;
        parts.push(json!({
            "h_dim": part.h_dim,
            "simple": simple,
            "matrix": matrix_json(&part.matrix),
            "isometry": matrix_json(iso),
        }));
        report.push(
            &format!("part_dim_{}_simple", part.h_dim),
            Check::new(simple, 0.0),
        );
    }
    report.extra = json!({ "parts": parts.iter().map(|p| p["h_dim"].clone()).collect::<Vec<_>>() });
    if let Some(path) = out.output {
        let value = json!({
            "kind": "decomposition",
            "parts": parts,
            "residual": serde_json::Value::String(format_float(residual)),
        });
        std::fs::write(&path, canonical_json(&value) + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        report.artifacts.push(path.display().to_string());
    }
    Ok(report)
}

fn matrix_json(m: &qset_core::CMatrix) -> serde_json::Value {
    let rows: Vec<Vec<serde_json::Value>> = (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .map(|j| {
                    let z = m.get(i, j);
                    json!([
                        serde_json::Value::String(format_float(z.re)),
                        serde_json::Value::String(format_float(z.im))
                    ])
                })
                .collect()
        })
        .collect();
    json!(rows)
}

fn cmd_hom(
    qfun: &PathBuf,
    source: &PathBuf,
    target: &PathBuf,
    tol: Tolerance,
) -> Result<Report, AnyError> {
    let mut report = Report::new("hom", tol);
    let f = load_qfun(qfun, &tol)?;
    let g = load_graph(source, &tol)?;
    let h = load_graph(target, &tol)?;
    let r = verify_hom(&f, &g, &h, &tol)?;
    report.push("diagrammatic", r.diagrammatic);
    if let Some(pf) = r.projector_form {
        report.push("projector_form", pf);
        report.push("agree", Check::new(r.agree, 0.0));
    }
    Ok(report)
}

fn cmd_iso(
    qfun: &PathBuf,
    source: &PathBuf,
    target: &PathBuf,
    tol: Tolerance,
) -> Result<Report, AnyError> {
    let mut report = Report::new("iso", tol);
    let f = load_qfun(qfun, &tol)?;
    let g = load_graph(source, &tol)?;
    let h = load_graph(target, &tol)?;
    let qb = verify_qbij(&f, &tol)?;
    report.push("qb1", qb.qb1);
    report.push("qb2", qb.qb2);
    if !qb.passed() {
        return Ok(report);
    }
    let r = verify_iso(&f, &g, &h, &tol)?;
    report.push("adjacency_exchange", r.adjacency_exchange);
    report.push("dual_is_hom", r.dual_is_hom);
    Ok(report)
}

fn cmd_convert(
    file: &PathBuf,
    to: ConvertTarget,
    out: OutputArg,
    tol: Tolerance,
) -> Result<Report, AnyError> {
    let mut report = Report::new("convert", tol);
    report.push("loaded", Check::new(true, 0.0));
    let doc = load(file)?;
    let (result, default_name): (Document, &str) = match (doc, to) {
        (Document::Graph(d), ConvertTarget::Relation) => {
            let qg = classical_to_quantum(&d.to_graph()?, &tol)?;
            let r = qset_core::adjacency_to_relation(&qg);
            (Document::Relation(RelationDoc::from_relation(&r, &tol)), "out.relation")
        }
        (Document::QGraph(d), ConvertTarget::Relation) => {
            let qg = d.to_qgraph(&tol)?;
            let r = qset_core::adjacency_to_relation(&qg);
            (Document::Relation(RelationDoc::from_relation(&r, &tol)), "out.relation")
        }
        (Document::Relation(d), ConvertTarget::Adjacency) => {
            let r = d.to_relation(&tol)?;
            let qg = relation_to_adjacency(&r, &tol)?;
            (Document::QGraph(QGraphDoc::from_qgraph(&qg, &tol)), "out.qgraph")
        }
        (Document::Relation(d), ConvertTarget::Projection) => {
            let r = d.to_relation(&tol)?;
            let p = to_projection(&r);
            (
                Document::Projection(ProjectionDoc::new(&r, &p, &tol)),
                "out.projection",
            )
        }
        (Document::QGraph(d), ConvertTarget::Opsys) => {
            let qg = d.to_qgraph(&tol)?;
            let o = graph_to_operator_system(&qg, &tol)?;
            (Document::Opsys(OpsysDoc::from_opsys(&o)), "out.opsys")
        }
        (Document::Opsys(d), ConvertTarget::Adjacency) => {
            let o = d.to_opsys()?;
            let qg = operator_system_to_graph(&o, &tol)?;
            (Document::QGraph(QGraphDoc::from_qgraph(&qg, &tol)), "out.qgraph")
        }
        (doc, _) => {
            return Err(format!(
                "unsupported conversion from {} with this target",
                doc.kind()
            )
            .into())
        }
    };
    let path = out.output.unwrap_or_else(|| PathBuf::from(default_name));
    write_doc(&result, &path, &mut report)?;
    Ok(report)
}

fn cmd_generate(
    name: &str,
    param: Option<usize>,
    out: OutputArg,
    tol: Tolerance,
    seed: u64,
) -> Result<Report, AnyError> {
    let mut report = Report::new("generate", tol);
    report.push("generated", Check::new(true, 0.0));
    let need = |what: &str| -> Result<usize, AnyError> {
        param.ok_or_else(|| format!("{name} needs a size parameter ({what})").into())
    };
    let (doc, default_name): (Document, String) = match name {
        "classical-set" => {
            let n = need("number of elements")?;
            let a = qset_core::classical_algebra(n)?;
            (
                Document::Algebra(AlgebraDoc::from_ssfa(&a)),
                format!("classical-set{n}.algebra"),
            )
        }
        "matrix-algebra" => {
            let k = need("matrix order")?;
            let a = qset_core::matrix_algebra(k)?;
            (
                Document::Algebra(AlgebraDoc::from_ssfa(&a)),
                format!("matrix-algebra{k}.algebra"),
            )
        }
        "kn" => {
            let n = need("vertex count")?;
            (
                Document::Graph(GraphDoc::from_graph(&corpus::complete_graph(n))),
                format!("k{n}.graph"),
            )
        }
        "cn" => {
            let n = need("vertex count")?;
            (
                Document::Graph(GraphDoc::from_graph(&corpus::cycle_graph(n))),
                format!("c{n}.graph"),
            )
        }
        "path" => {
            let n = need("vertex count")?;
            (
                Document::Graph(GraphDoc::from_graph(&corpus::path_graph(n))),
                format!("path{n}.graph"),
            )
        }
        "latin3" => {
            let f = qset_core::family_to_qfun(&corpus::latin3_family(), &tol)?;
            (
                Document::Qfun(QfunDoc::from_qfun(&f, &tol)),
                "latin3.qfun".into(),
            )
        }
        "qls4" => {
            let f = qset_core::family_to_qfun(&corpus::qls4_family(), &tol)?;
            (
                Document::Qfun(QfunDoc::from_qfun(&f, &tol)),
                "qls4.qfun".into(),
            )
        }
        "pauli-ueb" => {
            let f = qset_core::ueb_to_bijection(&corpus::pauli_basis(), &tol)?;
            (
                Document::Qfun(QfunDoc::from_qfun(&f, &tol)),
                "pauli-ueb.qfun".into(),
            )
        }
        "block-ppm" => {
            let f = corpus::block_ppm(seed, &tol);
            (
                Document::Qfun(QfunDoc::from_qfun(&f, &tol)),
                "block-ppm.qfun".into(),
            )
        }
        other => return Err(format!("unknown example name {other:?}").into()),
    };
    let path = out.output.unwrap_or_else(|| PathBuf::from(default_name));
    write_doc(&doc, &path, &mut report)?;
    Ok(report)
}
