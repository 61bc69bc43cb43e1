//! Regenerates `data/fiducials.json`, the shipped catalog of built-in SIC
//! fiducial records. The file is a JSON array of the same records the CLI
//! reads with `--fiducial`/`--sic`, so it doubles as a format reference.
//!
//! Run with: `cargo run --example export_catalog`

use std::fs;
use std::path::Path;

use sicprob::sic::{builtin_catalog, orbit, verify_sic};

fn main() -> sicprob::Result<()> {
    let catalog = builtin_catalog();
    for fiducial in &catalog {
        let report = verify_sic(&orbit(fiducial)?, 1e-12);
        assert!(report.pass, "{} must verify before export", fiducial.label());
    }
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fiducials.json");
    fs::create_dir_all(path.parent().unwrap())?;
    let json = serde_json::to_string_pretty(&catalog)?;
    fs::write(&path, json + "\n")?;
    println!("wrote {} fiducial records to {}", catalog.len(), path.display());
    Ok(())
}
