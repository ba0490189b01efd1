use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subrep::approx::{left_approx, mimo_k, right_approx};
use subrep::artheory::{build_catalog, export_quiver, Catalog, DEFAULT_BUDGET};
use subrep::birkhoff::{decompose_traced, harada_sai_check, invariant_subspace_report};
use subrep::decomp::{indecompose, iso_classes, lemma12_check, lemma9_check};
use subrep::ffmat::PrimeField;
use subrep::format::{dims_key, parse_poset, parse_representation, write_representation, SubspaceFile};
use subrep::lambdamod::LambdaAlgebra;
use subrep::posetrep::{Morphism, Quiver, Representation};
use subrep::random::random_subspace_rep;
use subrep::Error;

/// Seed used by every randomized command unless `--seed` is given.
const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "subrep", version, about = "Subspace representations of posets over k[T]/T^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproxKind {
    Left,
    Right,
    Mimo,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeMethod {
    Idempotent,
    Chase,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Lemma9,
    Lemma12,
    HaradaSai,
}

#[derive(clap::Args)]
struct CatalogArgs {
    /// `example` or a poset file with `points`/`covers`/`order` lines.
    #[arg(long, default_value = "example")]
    poset: String,
    #[arg(long, default_value_t = 2)]
    field: u32,
    #[arg(long, default_value_t = 2)]
    nilpotency: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a representation file is a valid representation.
    Validate { path: PathBuf },
    /// Left, right or single-vertex monomorphism approximation.
    Approx {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "right")]
        kind: ApproxKind,
        /// Vertex label for `--kind mimo`.
        #[arg(long)]
        vertex: Option<String>,
        /// Output file for the approximation; the structure map goes to
        /// the same path with `.map` appended. Prints to stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split into indecomposables and print the multiplicity table.
    Decompose {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "idempotent")]
        method: DecomposeMethod,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Directory for the summand files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the catalog of indecomposable subspace representations.
    Catalog {
        #[command(flatten)]
        args: CatalogArgs,
        /// Re-run every mesh's lifting tests with fresh random objects.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Directory for the object files and mesh list.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the catalog's quiver of irreducible maps in DOT syntax.
    Arquiver {
        #[command(flatten)]
        args: CatalogArgs,
        /// Output file; stdout if absent.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decompose invariant subspaces of a nilpotent operator.
    Birkhoff { path: PathBuf },
    /// Randomized finite-scale checks.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        field: u32,
    },
}

/// A failed check whose details were already printed.
#[derive(Debug)]
struct DomainViolation;

impl std::fmt::Display for DomainViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check failed")
    }
}

impl std::error::Error for DomainViolation {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<DomainViolation>().is_some() {
        return 1;
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Parse { .. }) => 2,
        Some(Error::BudgetExceeded(_) | Error::ChaseExhausted { .. } | Error::InternalContractViolation(_)) => 3,
        _ => 1,
    }
}

fn describe(e: &anyhow::Error) -> String {
    match e.downcast_ref::<Error>() {
        Some(Error::NotInvariant(j, _)) => format!("NotInvariant({j}): {e}"),
        Some(Error::NotNested(j, _)) => format!("NotNested({j}): {e}"),
        _ => format!("{e:#}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<DomainViolation>().is_none() {
                eprintln!("error: {}", describe(&e));
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<Representation> {
    Ok(parse_representation(&read(path)?)?)
}

/// Write through a temporary file in the same directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, contents).with_context(|| format!("writing {}", path.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_morphism(x: &Representation, m: &Morphism) -> String {
    let mut out = String::new();
    for v in 0..x.quiver().num_vertices() {
        let c = m.component(v);
        let rows = serde_json::to_string(&c.to_rows()).expect("integers serialize");
        writeln!(out, "component {} {}x{} {rows}", x.quiver().label(v), c.rows(), c.cols()).unwrap();
    }
    out
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Validate { path } => validate(&path),
        Command::Approx {
            path,
            kind,
            vertex,
            out,
        } => approx(&path, kind, vertex.as_deref(), out.as_deref()),
        Command::Decompose {
            path,
            method,
            seed,
            out,
        } => decompose(&path, method, seed, out.as_deref()),
        Command::Catalog {
            args,
            verify,
            seed,
            out,
        } => catalog(&args, verify, seed, out.as_deref()),
        Command::Arquiver { args, dot } => {
            let text = export_quiver(&make_catalog(&args)?);
            match dot {
                Some(p) => write_atomic(&p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Birkhoff { path } => birkhoff(&path),
        Command::Check {
            which,
            samples,
            seed,
            field,
        } => check(which, samples, seed, field),
    }
}

fn validate(path: &Path) -> anyhow::Result<()> {
    let x = load(path)?;
    let violations = x.validate();
    if violations.is_empty() {
        println!("ok");
        return Ok(());
    }
    for v in violations {
        eprintln!("violation: {v}");
    }
    Err(DomainViolation.into())
}

fn approx(path: &Path, kind: ApproxKind, vertex: Option<&str>, out: Option<&Path>) -> anyhow::Result<()> {
    let x = load(path)?;
    let res = match kind {
        ApproxKind::Left => left_approx(&x),
        ApproxKind::Right => right_approx(&x),
        ApproxKind::Mimo => {
            let label = vertex.ok_or_else(|| anyhow!("--kind mimo needs --vertex"))?;
            mimo_k(&x, x.quiver().vertex(label)?)?
        }
    };
    let text = write_representation(&res.approx);
    match out {
        Some(p) => {
            // the structure map goes from X for left approximations, into X otherwise
            let domain = if matches!(kind, ApproxKind::Left) { &x } else { &res.approx };
            write_atomic(p, &text)?;
            let mut map_path = p.as_os_str().to_owned();
            map_path.push(".map");
            write_atomic(Path::new(&map_path), &write_morphism(domain, &res.structure_map))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn table_lines(reps: &[&Representation], classes: &[(usize, usize)]) -> Vec<String> {
    let mut lines: Vec<String> = classes
        .iter()
        .map(|&(i, m)| format!("\"{}\": {m}", dims_key(reps[i])))
        .collect();
    lines.sort();
    lines
}

fn decompose(path: &Path, method: DecomposeMethod, seed: u64, out: Option<&Path>) -> anyhow::Result<()> {
    let x = load(path)?;
    let summands: Vec<Representation> = match method {
        DecomposeMethod::Idempotent => indecompose(&x, seed)?.summands.into_iter().map(|s| s.rep).collect(),
        DecomposeMethod::Chase => {
            if !x.is_subspace_rep() {
                bail!(Error::Invalid("the chase needs a subspace representation".into()));
            }
            let cat = build_catalog(x.quiver(), x.algebra(), DEFAULT_BUDGET)?;
            decompose_traced(&x, &cat)?
                .decomposition
                .summands
                .into_iter()
                .map(|s| s.rep)
                .collect()
        }
    };
    let reps: Vec<&Representation> = summands.iter().collect();
    for line in table_lines(&reps, &iso_classes(&reps)) {
        println!("{line}");
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        for (k, s) in summands.iter().enumerate() {
            write_atomic(&dir.join(format!("summand_{k:02}.rep")), &write_representation(s))?;
        }
    }
    Ok(())
}

fn make_catalog(args: &CatalogArgs) -> anyhow::Result<Catalog> {
    let quiver = if args.poset == "example" {
        Quiver::example()
    } else {
        Quiver::star(&parse_poset(&read(Path::new(&args.poset))?)?)?
    };
    let alg = LambdaAlgebra::new(PrimeField::new(args.field)?, args.nilpotency)?;
    Ok(build_catalog(&Arc::new(quiver), alg, args.budget)?)
}

fn catalog(args: &CatalogArgs, verify: bool, seed: u64, out: Option<&Path>) -> anyhow::Result<()> {
    let mut cat = make_catalog(args)?;
    println!("objects {}", cat.len());
    println!("projectives {}", cat.projective.iter().filter(|&&p| p).count());
    println!("closure passes {}", cat.passes);
    let verified = cat.meshes.iter().filter(|m| m.sequence.verified()).count();
    println!("meshes {} verified {verified}", cat.meshes.len());
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        for (i, x) in cat.objects.iter().enumerate() {
            write_atomic(&dir.join(format!("object_{i:02}.rep")), &write_representation(x))?;
        }
        let mut meshes = String::new();
        for m in &cat.meshes {
            let parts: Vec<String> = cat.sink_map(m.end).parts.iter().map(usize::to_string).collect();
            writeln!(meshes, "mesh {} -> [{}] -> {}", m.start, parts.join(" "), m.end).unwrap();
        }
        write_atomic(&dir.join("meshes.txt"), &meshes)?;
    }
    if verify {
        let failures = cat.verify_meshes(seed);
        for (end, f) in &failures {
            eprintln!("mesh ending at {end}: {f}");
        }
        if !failures.is_empty() {
            return Err(DomainViolation.into());
        }
        println!("verification ok ({} meshes, seed {seed})", cat.meshes.len());
    }
    Ok(())
}

fn birkhoff(path: &Path) -> anyhow::Result<()> {
    let cfg = SubspaceFile::parse(&read(path)?)?.to_config()?;
    cfg.validate()?;
    let cat = build_catalog(&Arc::new(Quiver::example()), cfg.v.algebra(), DEFAULT_BUDGET)?;
    let report = invariant_subspace_report(&cfg, &cat)?;
    for &(i, m) in &report.multiplicities {
        println!("object {i} {} {}", dims_key(&cat.objects[i]), m);
    }
    for c in std::iter::once(&report.total).chain(&report.vertices) {
        println!(
            "vertex {} dim {} pieces {:?} {}",
            cat.quiver.label(c.vertex),
            c.dim,
            c.intersections,
            if c.holds() { "ok" } else { "FAILED" }
        );
    }
    if report.passes() {
        println!("compatibility ok");
        Ok(())
    } else {
        println!("compatibility FAILED");
        Err(DomainViolation.into())
    }
}

fn check(which: CheckKind, samples: Option<usize>, seed: u64, field: u32) -> anyhow::Result<()> {
    let alg = LambdaAlgebra::new(PrimeField::new(field)?, 2)?;
    let q = Arc::new(Quiver::example());
    let cat = build_catalog(&q, alg, DEFAULT_BUDGET)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (name, failures, total) = match which {
        CheckKind::HaradaSai => {
            let n = samples.unwrap_or(10_000);
            return match harada_sai_check(&cat, n, seed) {
                Ok(r) => {
                    println!(
                        "harada-sai: {n} chains of length {} vanish; longest nonzero chain has {} maps",
                        r.chain_length,
                        r.longest_nonzero.len().saturating_sub(1)
                    );
                    Ok(())
                }
                Err(v) => {
                    eprintln!("harada-sai: chain {} survives through objects {:?}", v.sample, v.objects);
                    Err(DomainViolation.into())
                }
            };
        }
        CheckKind::Lemma9 => {
            let n = samples.unwrap_or(100);
            let mut failures = 0;
            for _ in 0..n {
                let x = random_subspace_rep(&q, alg, &[4, 8, 8, 10], &mut rng);
                if let Err(f) = lemma9_check(&cat.objects, &x) {
                    eprintln!("lemma9: dims {:?} fails at vertex {}: {f:?}", x.dims(), q.label(f.vertex));
                    failures += 1;
                }
            }
            ("lemma9", failures, n)
        }
        CheckKind::Lemma12 => {
            let n = samples.unwrap_or(50);
            let mut failures = 0;
            for _ in 0..n {
                let x = random_subspace_rep(&q, alg, &[2, 3, 3, 4], &mut rng);
                if let Err(f) = lemma12_check(&cat.objects, &x) {
                    eprintln!("lemma12: dims {:?} fails at vertex {}: {f:?}", x.dims(), q.label(f.vertex));
                    failures += 1;
                }
            }
            ("lemma12", failures, n)
        }
    };
    println!("{name}: {}/{total} ok", total - failures);
    if failures > 0 {
        Err(DomainViolation.into())
    } else {
        Ok(())
    }
}
