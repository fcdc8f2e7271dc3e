//! Configuration text, snapshot files and diagnostics CSV.

use fracpme::evolution::{run, FlowMode};
use fracpme::io::{parse_pairs, read_diagnostics, read_snapshot, write_diagnostics, write_snapshot, RunConfig, Snapshot};

fn main() -> fracpme::Result<()> {
    let text = "n = 1\ns = 0.3\nN = 64\nL = 6\nend_time = 0.5\ndatum = gaussian_truncated(0.7)\n";
    let cfg = RunConfig::from_pairs(&parse_pairs(text)?)?;
    print!("{}", cfg.to_text());

    let op = cfg.build_operator()?;
    let exp = cfg.exponents()?;
    let u0 = cfg.datum.sample(*op.grid(), &exp)?;
    let tr = run(&u0, FlowMode::Physical, &cfg.solver, &op, &exp)?;

    let dir = std::env::temp_dir().join("fracpme_snapshots_io");
    std::fs::create_dir_all(&dir)?;
    let snap = Snapshot { field: tr.final_state.clone(), s: cfg.s, time: tr.final_time(), mode: "physical".into() };
    write_snapshot(&dir.join("final.txt"), &snap)?;
    write_diagnostics(&dir.join("diagnostics.csv"), &tr.diagnostics)?;

    let back = read_snapshot(&dir.join("final.txt"))?;
    let recs = read_diagnostics(&dir.join("diagnostics.csv"))?;
    println!("snapshot round trip exact: {}", back == snap);
    println!("{} diagnostics records, last time {}", recs.len(), recs.last().map_or(0.0, |r| r.time));
    println!("files in {}", dir.display());
    Ok(())
}
