//! Render a 2-D instance and its classification as SVG.

use proper_eff::io::{classify_instance, parse_instance, render_svg, ClassifyOptions};
use proper_eff::Result;

fn main() -> Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/approx_golden.json");
    let text = std::fs::read_to_string(path).map_err(|e| proper_eff::Error::InvalidInput(e.to_string()))?;
    let inst = parse_instance(&text, None)?;
    let report = classify_instance(&inst, &ClassifyOptions::default())?;
    let out = std::env::temp_dir().join("proper-eff-golden.svg");
    std::fs::write(&out, render_svg(&inst, Some(&report))?).map_err(|e| proper_eff::Error::InvalidInput(e.to_string()))?;
    println!("wrote {}", out.display());
    Ok(())
}
