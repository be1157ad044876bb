mod config;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;
use triplex::formats::{dimacs_write, graph6_encode, orbit_partition_csv, points_csv, write_file, EdgeList};
use triplex::talg::{dim_t0, t_closure, write_sparse_triples, ExactMat, DEFAULT_MAX_DIM, MAX_CLOSURE_ORDER};
use triplex::verifier::{certify_all, CertReport, CertifyOptions, Instance, Verdict};

use crate::config::{Cli, Command, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] triplex::Error),
}

const EXIT_NOT_CERTIFIED: u8 = 1;
const EXIT_INTERNAL: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Command::Verify(a) => ("verify", a),
        Command::Orbits(a) => ("orbits", a),
        Command::Export(a) => ("export", a),
    };
    let result = RunConfig::from_args(args).and_then(|cfg| {
        if let Some(t) = cfg.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        match command {
            "verify" => cmd_verify(&cfg),
            "orbits" => cmd_orbits(&cfg),
            _ => cmd_export(&cfg),
        }
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn options(cfg: &RunConfig) -> CertifyOptions {
    CertifyOptions {
        seed: cfg.seed,
        allow_large: cfg.allow_large,
        timings: cfg.timings,
        ..CertifyOptions::default()
    }
}

fn certify_requested(cfg: &RunConfig) -> Vec<(Instance, Result<CertReport, triplex::Error>)> {
    let results = certify_all(&cfg.instances, &options(cfg));
    cfg.instances.iter().copied().zip(results).collect()
}

fn cmd_verify(cfg: &RunConfig) -> Result<u8, CliError> {
    let mut code = 0;
    println!("{:<28} {:>5} {:>7} {:>6} {:>6}  verdict", "instance", "v", "dim_T0", "dim_T", "total");
    for (inst, res) in certify_requested(cfg) {
        match res {
            Ok(r) => {
                write_file(&cfg.out.join(format!("{}.json", inst.slug())), &r.to_json())?;
                let dim_t = match (r.dim_t, r.dim_t_exceeds) {
                    (Some(d), _) => d.to_string(),
                    (None, Some(cap)) => format!(">{cap}"),
                    _ => "-".into(),
                };
                println!(
                    "{:<28} {:>5} {:>7} {:>6} {:>6}  {}",
                    r.name,
                    r.params.v,
                    r.dim_t0,
                    dim_t,
                    r.block_decomp.total,
                    r.verdict.as_str()
                );
                if r.verdict != Verdict::CertifiedTriplyTransitive && !matches!(inst, Instance::Control(_)) {
                    code = code.max(EXIT_NOT_CERTIFIED);
                }
            }
            Err(e) => {
                eprintln!("{}: {e}", inst.slug());
                code = EXIT_INTERNAL;
            }
        }
        if let Some(dir) = &cfg.export {
            export_graph(inst, dir)?;
        }
    }
    Ok(code)
}

fn cmd_orbits(cfg: &RunConfig) -> Result<u8, CliError> {
    let mut code = 0;
    for (inst, res) in certify_requested(cfg) {
        let r = match res {
            Ok(r) => r,
            Err(e) => {
                eprintln!("{}: {e}", inst.slug());
                code = EXIT_INTERNAL;
                continue;
            }
        };
        let g = inst.build()?;
        println!("{} (v = {}, D = {:?})", r.name, r.params.v, r.block_decomp.d);
        write_file(&cfg.out.join(format!("{}_points.csv", inst.slug())), &points_csv(&g))?;
        let Some(named) = &r.named else {
            println!("  no named subsets for this instance");
            continue;
        };
        if named.checks.is_empty() {
            println!("  no named subsets for this instance");
        }
        for c in &named.checks {
            let parts: Vec<String> = c.parts.iter().map(|p| format!("{}[{}]", p.name, p.size)).collect();
            println!(
                "  {}: {} -> {}/{} orbits  {}",
                c.lemma,
                parts.join(" "),
                c.classes_found,
                c.expected,
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        for f in &named.fusions {
            println!("  {}: {}  {}", f.map, f.statement, if f.passed { "PASS" } else { "FAIL" });
        }
        write_file(
            &cfg.out.join(format!("{}_orbits.csv", inst.slug())),
            &orbit_partition_csv(&g, &named.checks),
        )?;
        let mut json = serde_json::to_string_pretty(named).expect("serialisable");
        json.push('\n');
        write_file(&cfg.out.join(format!("{}_named.json", inst.slug())), &json)?;
        if !named.passed {
            code = EXIT_INTERNAL;
        }
    }
    Ok(code)
}

fn export_graph(inst: Instance, dir: &Path) -> Result<(), CliError> {
    let g = inst.build()?;
    let edges = EdgeList::from_instance(&g);
    let stem = inst.slug();
    let header = format!("{} {}", g.name(), g.params());
    let mut g6 = graph6_encode(&edges);
    g6.push('\n');
    let files = [
        (format!("{stem}.g6"), g6),
        (format!("{stem}.dimacs"), dimacs_write(&edges, &header)),
        (format!("{stem}_points.csv"), points_csv(&g)),
    ];
    for (name, contents) in files {
        write_file(&dir.join(&name), &contents)?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}

fn export_algebra(inst: Instance, dir: &Path) -> Result<(), CliError> {
    let g = inst.build()?;
    if g.order() > MAX_CLOSURE_ORDER {
        println!("skipped algebra bases for {} (v > {MAX_CLOSURE_ORDER})", g.name());
        return Ok(());
    }
    let t0 = dim_t0(&g)?;
    let mut products = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if t0.nonzero[i][j][k] {
                    products.push(ExactMat::from_fn(g.order(), |r, c| {
                        (g.relation(g.base(), r) == i && g.relation(r, c) == j && g.relation(g.base(), c) == k) as i64
                    }));
                }
            }
        }
    }
    let stem = inst.slug();
    let t0_text = write_sparse_triples(&products, &format!("{}: nonzero E*_i A_j E*_k, base {}", g.name(), g.base()));
    let mut files = vec![(format!("{stem}_T0.triples"), t0_text)];
    match t_closure(&g, DEFAULT_MAX_DIM) {
        Ok(span) => files.push((
            format!("{stem}_T.triples"),
            write_sparse_triples(&span.basis_matrices(), &format!("{}: basis of T, base {}", g.name(), g.base())),
        )),
        Err(triplex::Error::MaxDimExceeded(cap)) => println!("skipped T basis for {} (dim T > {cap})", g.name()),
        Err(e) => return Err(e.into()),
    }
    for (name, contents) in files {
        write_file(&dir.join(&name), &contents)?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}

fn cmd_export(cfg: &RunConfig) -> Result<u8, CliError> {
    let dir = cfg.export.as_deref().unwrap_or(&cfg.out);
    for &inst in &cfg.instances {
        export_graph(inst, dir)?;
        export_algebra(inst, dir)?;
    }
    Ok(0)
}
