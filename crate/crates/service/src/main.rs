use std::net::SocketAddr;
use std::path::PathBuf;

use anyhow::Context;
use clap::Parser;
use lattice_select_service::{router, AppState, Config};
use tower_http::services::ServeDir;

#[derive(Debug, Parser)]
#[command(name = "lattice-select-server", version, about = "HTTP API for interactive labeling sessions")]
struct Args {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    /// Sessions are written here as JSON and reloaded on start.
    #[arg(long)]
    snapshot_dir: Option<PathBuf>,
    /// Directory holding the UI bundle.
    #[arg(long, default_value = "ui/dist")]
    static_dir: PathBuf,
    /// Per-request synthesis budget in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let config = Config {
        snapshot_dir: args.snapshot_dir,
        timeout: std::time::Duration::try_from_secs_f64(args.timeout).context("invalid --timeout")?,
        ..Config::default()
    };
    let app = router(AppState::new(config)).fallback_service(ServeDir::new(&args.static_dir));
    let addr = SocketAddr::new(args.host, args.port);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("cannot bind {addr}"))?;
    eprintln!("listening on http://{addr}");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
