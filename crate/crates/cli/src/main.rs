use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use ksrd::instances::{
    gen_unit_disc, geojson_to_graph, parse_geojson, write_edge_list, UnitDiscParams,
};
use ksrd_cli::args::{Cli, Command, GenCommand};
use ksrd_cli::{bench, solve, verify};

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn generate(cmd: &GenCommand) -> anyhow::Result<()> {
    match cmd {
        GenCommand::UnitDisc {
            n,
            radius,
            seed,
            output,
        } => {
            let g = gen_unit_disc(&UnitDiscParams {
                n: *n,
                radius: *radius,
                seed: *seed,
            })?;
            write_output(output.as_deref(), &write_edge_list(&g))
        }
        GenCommand::FromGeojson {
            file,
            tol,
            id_property,
            output,
            regions,
        } => {
            let text = std::fs::read_to_string(file)
                .with_context(|| format!("cannot read {}", file.display()))?;
            let set = parse_geojson(&text, id_property.as_deref())?;
            let (g, ids) = geojson_to_graph(&set, *tol)?;
            write_output(output.as_deref(), &write_edge_list(&g))?;
            let sidecar = regions.clone().or_else(|| {
                output.as_ref().map(|o| {
                    let mut name = o.as_os_str().to_owned();
                    name.push(".regions.csv");
                    name.into()
                })
            });
            if let Some(path) = sidecar {
                let mut w = csv::Writer::from_path(&path)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                w.write_record(["node", "region", "centroid_x", "centroid_y"])?;
                for (node, (id, region)) in ids.iter().zip(&set.regions).enumerate() {
                    w.write_record([
                        node.to_string(),
                        id.clone(),
                        region.centroid[0].to_string(),
                        region.centroid[1].to_string(),
                    ])?;
                }
                w.flush()?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => solve::run(args).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => verify::run(args).and_then(|report| {
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.feasible {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }),
        Command::Gen(cmd) => generate(cmd).map(|()| ExitCode::SUCCESS),
        Command::Bench(args) => bench::run(args).map(|()| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
