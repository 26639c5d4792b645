//! Figure datasets built from the bundled presets.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::output::{Cell, Dataset, Row};
use crate::sweep::{run_sweep, Subcommand, SweepSpec};

pub const PRESETS: &str = include_str!("../presets/figures.toml");
pub const FIGURE_IDS: [&str; 6] = ["fig2", "fig3", "fig4a", "fig4b", "fig5", "fig6"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub spec: SweepSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub id: String,
    pub caption: String,
    pub series: Vec<Series>,
}

/// Load a figure preset, applying `overrides` (`key=value`) to every series.
pub fn load(id: &str, overrides: &[String]) -> Result<Figure> {
    let root: toml::Table = PRESETS
        .parse()
        .map_err(|e| Error::Config(format!("bundled presets: {e}")))?;
    let fig = root
        .get(id)
        .and_then(|v| v.as_table())
        .ok_or_else(|| Error::Config(format!("unknown figure `{id}` (known: {})", FIGURE_IDS.join(", "))))?;
    let caption = fig.get("caption").and_then(|v| v.as_str()).unwrap_or_default().to_owned();
    let entries = fig
        .get("series")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Config(format!("figure `{id}` has no series")))?;
    let mut series = Vec::new();
    for entry in entries {
        let mut table = entry
            .as_table()
            .cloned()
            .ok_or_else(|| Error::Config(format!("figure `{id}`: series must be tables")))?;
        let text = |t: &mut toml::Table, k: &str| -> Result<String> {
            match t.remove(k) {
                Some(toml::Value::String(s)) => Ok(s),
                _ => Err(Error::Config(format!("figure `{id}`: series needs a string `{k}`"))),
            }
        };
        let name = text(&mut table, "name")?;
        let subcommand: Subcommand = text(&mut table, "subcommand")?.parse()?;
        let mut config = Config::from_table(&table)?;
        for o in overrides {
            config.set(o)?;
        }
        series.push(Series {
            name,
            spec: SweepSpec::from_config(subcommand, config)?,
        });
    }
    if series.windows(2).any(|w| w[0].spec.subcommand != w[1].spec.subcommand) {
        return Err(Error::Config(format!("figure `{id}` mixes subcommands")));
    }
    Ok(Figure {
        id: id.to_owned(),
        caption,
        series,
    })
}

/// Run every series and stack the rows under a leading `series` column. The
/// swept column is named after the variable when all series share it, and is
/// split into `var` and `x` otherwise.
pub fn run(figure: &Figure, workers: Option<usize>) -> Result<Dataset> {
    let first = &figure.series[0].spec;
    let var_of = |s: &Series| s.spec.sweep.as_ref().map(|v| v.name.clone()).unwrap_or_default();
    let shared = figure.series.iter().all(|s| var_of(s) == var_of(&figure.series[0]));
    let mut columns = vec!["series".to_owned()];
    if shared {
        columns.push(var_of(&figure.series[0]));
    } else {
        columns.extend(["var".to_owned(), "x".to_owned()]);
    }
    columns.extend(first.subcommand.columns().iter().map(|c| (*c).to_owned()));

    let mut out = Dataset::new(columns);
    out.meta("netdicke", env!("CARGO_PKG_VERSION"));
    out.meta("figure", figure.id.clone());
    out.meta("caption", figure.caption.clone());
    out.meta("subcommand", first.subcommand.name());
    for s in &figure.series {
        let mut spec = s.spec.clone();
        if let Some(w) = workers {
            spec.workers = w;
        }
        let data = run_sweep(&spec)?;
        for (k, v) in &data.metadata {
            if k != "netdicke" && k != "subcommand" {
                out.meta(format!("series.{}.{k}", s.name), v.clone());
            }
        }
        for row in data.rows {
            let mut cells = vec![Cell::Text(s.name.clone())];
            if !shared {
                cells.push(Cell::Text(var_of(s)));
            }
            cells.extend(row.cells);
            out.rows.push(Row { cells, error: row.error });
        }
    }
    Ok(out)
}

/// Rows of one series.
pub fn series_rows<'a>(data: &'a Dataset, name: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
    data.rows
        .iter()
        .filter(move |r| matches!(&r.cells[0], Cell::Text(s) if s == name))
}
