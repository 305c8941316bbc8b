use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use dnb_cli::api::{router, AppState};
use dnb_cli::session::SessionStore;
use dnb_cli::{play, report};
use dnb_core::verify::{
    check_controlled_value, check_equivalence, check_invariants, check_sampled, check_worked_examples,
    VerifyReport, DEFAULT_MAX_SIZE,
};
use dnb_core::{Position, Role};

#[derive(Debug, Parser)]
#[command(name = "dnb", version, about = "Loops-and-chains Dots and Boxes endgame solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RoleArg {
    Opener,
    Controller,
}

impl From<RoleArg> for Role {
    fn from(r: RoleArg) -> Self {
        match r {
            RoleArg::Opener => Role::Opener,
            RoleArg::Controller => Role::Controller,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measures, value and per-component options of a position, e.g. `3+4l+8l`.
    Eval { position: Position },
    /// The move the opener should make.
    BestMove { position: Position },
    /// Optimal opening orders, found by search.
    Lines {
        position: Position,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Play against the engine in the terminal.
    Play {
        position: Position,
        /// Boxes already banked by the initial opener.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        advantage: i32,
        #[arg(long = "as", value_enum, default_value = "opener")]
        role: RoleArg,
    },
    /// Check the closed forms against exhaustive search.
    Verify {
        #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
        max_size: u32,
        /// Also compare the two closed forms on this many random large positions.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Serve the HTTP API.
    Serve {
        /// Defaults to $PORT, then 8080.
        #[arg(long)]
        port: Option<u16>,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Persist sessions as JSON files in this directory.
        #[arg(long)]
        snapshot_dir: Option<PathBuf>,
    },
}

fn verify(max_size: u32, samples: usize, seed: u64, json: bool) -> bool {
    let mut reports: Vec<VerifyReport> = vec![
        check_worked_examples(),
        check_equivalence(max_size),
        check_controlled_value(max_size.min(28)),
        check_invariants(max_size),
    ];
    if samples > 0 {
        reports.push(check_sampled(seed, samples, 200));
    }
    let ok = reports.iter().all(|r| r.passed() && r.dead_cases().is_empty());
    if json {
        let all: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| serde_json::from_str(&r.to_json()).expect("report is json"))
            .collect();
        println!("{}", serde_json::to_string_pretty(&all).expect("serializes"));
    } else {
        for r in &reports {
            println!("{r}");
        }
    }
    ok
}

async fn serve(port: Option<u16>, host: std::net::IpAddr, snapshot_dir: Option<PathBuf>) -> Result<()> {
    let port = match port {
        Some(p) => p,
        None => match std::env::var("PORT") {
            Ok(p) => p.parse().with_context(|| format!("invalid PORT {p:?}"))?,
            Err(_) => 8080,
        },
    };
    let store = match snapshot_dir {
        Some(dir) => SessionStore::with_snapshots(&dir)
            .with_context(|| format!("loading sessions from {}", dir.display()))?,
        None => SessionStore::new(),
    };
    let app = router(Arc::new(AppState::new(store)));
    let addr = SocketAddr::new(host, port);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Eval { position } => print!("{}", report::evaluation(&position)?),
        Command::BestMove { position } => println!("{}", report::best_move(&position)?),
        Command::Lines { position, limit } => print!("{}", report::lines(&position, limit)?),
        Command::Play { position, advantage, role } => {
            let stdin = std::io::stdin().lock();
            play::run(position, advantage, role.into(), stdin, &mut std::io::stdout())?;
        }
        Command::Verify { max_size, samples, seed, json } => return Ok(verify(max_size, samples, seed, json)),
        Command::Serve { port, host, snapshot_dir } => {
            tokio::runtime::Runtime::new()?.block_on(serve(port, host, snapshot_dir))?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
