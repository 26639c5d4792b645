//! Plain-text edge lists: `#` header lines, then one `u v` pair per line.

use std::fmt::Write as _;
use std::path::Path;

use netdicke_core::NetworkSample;
use netdicke_core::netgen::Generator;

use crate::error::{Error, Result};

pub fn to_string(sample: &NetworkSample) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# n = {}", sample.n_nodes);
    let _ = writeln!(out, "# seed = {}", sample.seed);
    let _ = writeln!(out, "# generator = {}", sample.generator.name());
    for &(u, v) in &sample.edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write(sample: &NetworkSample, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(sample)).map_err(|e| Error::io(path, e))
}

pub fn read(path: &Path) -> Result<NetworkSample> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

/// Parse an edge list. Without an `n` header the node count is one more than
/// the largest index.
pub fn parse(text: &str, path: &Path) -> Result<NetworkSample> {
    let bad = |line: usize, reason: String| Error::Parse {
        path: path.to_owned(),
        line,
        reason,
    };
    let (mut n, mut seed) = (None, 0u64);
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            if let Some((k, v)) = header.split_once('=') {
                match k.trim() {
                    "n" => n = Some(v.trim().parse().map_err(|e| bad(i + 1, format!("n: {e}")))?),
                    "seed" => seed = v.trim().parse().map_err(|e| bad(i + 1, format!("seed: {e}")))?,
                    _ => {}
                }
            }
            continue;
        }
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(bad(i + 1, format!("expected `u v`, found `{line}`"))),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Ok(NetworkSample::from_edges(n, edges, seed, Generator::External)?)
}
