use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use starconfig::config::{betti, ConfigComplex};
use starconfig::fio::{compose, count_morphisms, decompose, enumerate_morphisms, FioMorphism, MorphismJson};
use starconfig::homology::{homology_all, homology_range, Coefficients};
use starconfig::nerve::{homology_csv, nerve, HomologyRow};
use starconfig::report::{claims, run_claims, Budget, Status};
use starconfig::spectral::{e1_page, e2_row0, generation_check, generation_degree, generation_degree_table, presentation_evidence, table_csv};

#[derive(Parser)]
#[command(name = "starconfig", version, about = "Homology of ordered configuration spaces of star graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build K_n(Γ_k) and print its size and Betti numbers.
    Complex(ComplexArgs),
    /// Homology of the chessboard nerve.
    Nerve(NerveArgs),
    /// E¹ and E² data of the leaf cover of K_{n+1}(Γ_k).
    Ss(SsArgs),
    /// How much of H₁ is reached by the leaf covers.
    Generation(GenerationArgs),
    /// Second homology of nerves over a range of boards.
    Presentation(PresentationArgs),
    /// FI_{d,o} morphisms.
    #[command(subcommand)]
    Fio(FioCommand),
    /// Run the reproducibility suite.
    VerifyPaper(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplexExport {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableExport {
    Json,
    Csv,
}

#[derive(Args)]
struct ComplexArgs {
    #[arg(long)]
    particles: usize,
    #[arg(long)]
    leaves: usize,
    #[arg(long, value_enum)]
    export: Option<ComplexExport>,
    /// Export destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NerveArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    /// z, z2 or zp:P.
    #[arg(long, default_value = "z", value_parser = parse_coeff)]
    coeff: Coefficients,
    /// Only this degree.
    #[arg(long)]
    degree: Option<usize>,
    /// json writes the complex, csv the homology table.
    #[arg(long, value_enum)]
    export: Option<TableExport>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SsArgs {
    /// Number of particles n + 1.
    #[arg(long)]
    particles: usize,
    #[arg(long)]
    leaves: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerationArgs {
    #[arg(long)]
    leaves: usize,
    /// A single instance with this many particles; prints the JSON report.
    #[arg(long, conflicts_with = "max_particles")]
    particles: Option<usize>,
    /// Table for 2..=N particles.
    #[arg(long)]
    max_particles: Option<usize>,
    #[arg(long, value_enum)]
    export: Option<TableExport>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PresentationArgs {
    #[arg(long)]
    leaves: usize,
    /// Smallest number of particles n + 1.
    #[arg(long, default_value_t = 2)]
    from: usize,
    /// Largest number of particles n + 1.
    #[arg(long)]
    to: usize,
    #[arg(long, value_enum)]
    export: Option<TableExport>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HomArgs {
    #[arg(long)]
    source: usize,
    #[arg(long)]
    target: usize,
    #[arg(long)]
    colors: usize,
}

#[derive(Subcommand)]
enum FioCommand {
    /// Size of a hom-set and of the free module it spans.
    Count(HomArgs),
    /// Every morphism of a hom-set, as a JSON array.
    Enumerate(HomArgs),
    /// `outer ∘ inner`. Morphisms are JSON text or @path.
    Compose {
        #[arg(long)]
        outer: String,
        #[arg(long)]
        inner: String,
    },
    /// Permutation and insertion colors of a morphism.
    Decompose {
        #[arg(long)]
        morphism: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "small")]
    budget: Budget,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall times in the report.
    #[arg(long)]
    timings: bool,
    /// Replace the expected value of a claim, to exercise the harness.
    #[arg(long, hide = true)]
    tamper: Option<String>,
}

fn parse_coeff(s: &str) -> Result<Coefficients, String> {
    match s {
        "z" => Ok(Coefficients::Integers),
        "z2" => Coefficients::mod_p(2).map_err(|e| e.to_string()),
        _ => {
            let p = s
                .strip_prefix("zp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| format!("expected z, z2 or zp:P, got {s:?}"))?;
            Coefficients::mod_p(p).map_err(|e| e.to_string())
        }
    }
}

type Outcome = Result<ExitCode, Box<dyn std::error::Error>>;

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_morphism(arg: &str) -> Result<FioMorphism, Box<dyn std::error::Error>> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)?,
        None => arg.to_string(),
    };
    let j: MorphismJson = serde_json::from_str(&text)?;
    Ok(FioMorphism::from_json(&j)?)
}

fn cmd_complex(a: &ComplexArgs) -> Outcome {
    let c = ConfigComplex::build(a.particles, a.leaves)?;
    let (b0, b1) = betti(&c);
    println!("vertices: {}", c.vertex_count());
    println!("edges: {}", c.edge_count());
    println!("b0: {b0}");
    println!("b1: {b1}");
    match a.export {
        Some(ComplexExport::Json) => emit(&a.out, &(serde_json::to_string(&c.to_json())? + "\n"))?,
        Some(ComplexExport::Dot) => emit(&a.out, &c.to_dot()?)?,
        None => {}
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_nerve(a: &NerveArgs) -> Outcome {
    let nv = nerve(a.rows, a.cols);
    let h = match a.degree {
        Some(q) => homology_range(nv.complex(), q..=q, a.coeff),
        None => homology_all(nv.complex(), a.coeff),
    };
    println!("f-vector: {:?}", nv.complex().f_vector());
    for r in &h {
        println!("{r}");
    }
    match a.export {
        Some(TableExport::Json) => emit(&a.out, &(serde_json::to_string(&nv.complex().to_json())? + "\n"))?,
        Some(TableExport::Csv) => {
            let rows: Vec<HomologyRow> = h.iter().map(|r| HomologyRow::new(a.rows, a.cols, r)).collect();
            emit(&a.out, &homology_csv(&rows))?
        }
        None => {}
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ss(a: &SsArgs) -> Outcome {
    let c = ConfigComplex::build(a.particles, a.leaves)?;
    let page = e1_page(&c, 3);
    let e1: Vec<_> = (0..page.columns())
        .flat_map(|p| (0..=1).map(move |q| (p, q)))
        .map(|(p, q)| json!({"p": p, "q": q, "summands": page.summands(p).len(), "rank": page.rank(p, q)}))
        .collect();
    let row0: Vec<usize> = e2_row0(a.particles, a.leaves)?.iter().map(|h| h.betti).collect();
    let report = generation_check(a.particles, a.leaves)?;
    let summary = json!({
        "n_plus_1": a.particles,
        "k": a.leaves,
        "e1": e1,
        "e2_row0": row0,
        "e2_01": page.e2_01(),
        "Q": report.q,
        "image_rank": report.image_rank,
        "inferred_d2_rank": report.inferred_d2_rank,
    });
    emit(&a.out, &(serde_json::to_string_pretty(&summary)? + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_generation(a: &GenerationArgs) -> Outcome {
    if let Some(n1) = a.particles {
        let report = generation_check(n1, a.leaves)?;
        emit(&a.out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
        return Ok(ExitCode::SUCCESS);
    }
    let Some(max) = a.max_particles else {
        eprintln!("error: one of --particles or --max-particles is required");
        return Ok(ExitCode::from(2));
    };
    let rows = generation_degree_table(a.leaves, max)?;
    match a.export {
        Some(TableExport::Csv) => emit(&a.out, &table_csv(&rows))?,
        Some(TableExport::Json) => emit(&a.out, &(serde_json::to_string_pretty(&rows)? + "\n"))?,
        None => {
            for r in &rows {
                println!("n+1={} Q={} image={} cokernel={}", r.n_plus_1, r.q, r.image_rank, r.cokernel_rank);
            }
            match generation_degree(&rows) {
                Some(d) => println!("last nonzero cokernel at n+1={d}"),
                None => println!("no nonzero cokernel"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_presentation(a: &PresentationArgs) -> Outcome {
    let rows = presentation_evidence(a.leaves, a.from..=a.to);
    match a.export {
        Some(TableExport::Csv) => emit(&a.out, &table_csv(&rows))?,
        Some(TableExport::Json) => emit(&a.out, &(serde_json::to_string_pretty(&rows)? + "\n"))?,
        None => {
            for r in &rows {
                let torsion = if r.torsion.is_empty() { String::new() } else { format!(" torsion={}", r.torsion) };
                println!("n+1={} b2={}{torsion}", r.n_plus_1, r.beta2);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fio(c: &FioCommand) -> Outcome {
    match c {
        FioCommand::Count(h) => {
            let count = count_morphisms(h.source, h.target, h.colors)?;
            println!("morphisms: {}", count.morphisms);
            println!("free dimension: {}", count.free_dimension);
        }
        FioCommand::Enumerate(h) => {
            let list: Vec<MorphismJson> = enumerate_morphisms(h.source, h.target, h.colors)?
                .iter()
                .map(|f| f.to_json())
                .collect();
            println!("{}", serde_json::to_string(&list)?);
        }
        FioCommand::Compose { outer, inner } => {
            let h = compose(&read_morphism(outer)?, &read_morphism(inner)?)?;
            println!("{}", serde_json::to_string(&h.to_json())?);
        }
        FioCommand::Decompose { morphism } => {
            let (sigma, insertions) = decompose(&read_morphism(morphism)?);
            println!("{}", json!({"sigma": sigma.images(), "insertions": insertions}));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let mut all = claims();
    if let Some(id) = &a.tamper {
        let Some(claim) = all.iter_mut().find(|c| &c.id == id) else {
            eprintln!("error: no claim {id:?}");
            return Ok(ExitCode::from(2));
        };
        claim.expected = format!("tampered {}", claim.expected);
    }
    let report = run_claims(&all, a.budget);
    for r in &report.records {
        match r.status {
            Status::Skipped => println!("skipped {}", r.claim),
            _ => println!("{} {} expected={} computed={}", r.status, r.claim, r.expected, r.computed),
        }
    }
    let s = &report.summary;
    println!("{} passed, {} failed, {} skipped", s.pass, s.fail, s.skipped);
    if let Some(path) = &a.out {
        fs::write(path, report.to_json(a.timings))?;
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Complex(a) => cmd_complex(a),
        Command::Nerve(a) => cmd_nerve(a),
        Command::Ss(a) => cmd_ss(a),
        Command::Generation(a) => cmd_generation(a),
        Command::Presentation(a) => cmd_presentation(a),
        Command::Fio(c) => cmd_fio(c),
        Command::VerifyPaper(a) => cmd_verify(a),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}
