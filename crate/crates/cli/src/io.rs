//! File loading, window parsing, and the region arithmetic shared by the
//! subcommands.

use std::fmt;
use std::path::Path;

use partca_core::{Automaton, AutomatonDoc, ConfigDoc, ElementSet, GroupSpec, PartialConfig};

/// Command failures, split by exit code: usage and parse problems exit 2,
/// verification failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Failure(msg) => f.write_str(msg),
        }
    }
}

pub fn usage(msg: impl fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

pub fn load_automaton(path: &Path) -> Result<Automaton, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: AutomatonDoc = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{} is not a valid automaton: {e}", path.display())))?;
    Automaton::from_doc(&doc)
        .map_err(|e| usage(format!("{} is not a valid automaton: {e}", path.display())))
}

pub fn load_config(path: &Path, automaton: &Automaton) -> Result<PartialConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: ConfigDoc = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{} is not a valid configuration: {e}", path.display())))?;
    let config = PartialConfig::from_doc(automaton.group(), &doc)
        .map_err(|e| usage(format!("{} is not a valid configuration: {e}", path.display())))?;
    config
        .validate_states(automaton.states())
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(config)
}

/// One inclusive range per infinite axis; finite axes are always full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    ranges: Vec<(i64, i64)>,
}

impl Window {
    /// Parses `"-10..10"` (one range per infinite axis, comma-separated,
    /// both ends inclusive).
    pub fn parse(text: &str, group: &GroupSpec) -> Result<Self, CliError> {
        let infinite_axes = group.moduli().iter().filter(|&&m| m == 0).count();
        if infinite_axes == 0 {
            return Err(usage(
                "--window applies only to groups with an infinite axis; finite axes are always full",
            ));
        }
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != infinite_axes {
            return Err(usage(format!(
                "--window needs {infinite_axes} range(s) (one per infinite axis), got {}",
                parts.len()
            )));
        }
        let mut ranges = Vec::with_capacity(parts.len());
        for part in parts {
            let (lo, hi) = part
                .split_once("..")
                .ok_or_else(|| usage(format!("bad window range {part:?}, expected lo..hi")))?;
            let lo: i64 = lo
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad window bound {lo:?}")))?;
            let hi: i64 = hi
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad window bound {hi:?}")))?;
            if lo > hi {
                return Err(usage(format!("empty window range {part:?}")));
            }
            ranges.push((lo, hi));
        }
        Ok(Window { ranges })
    }

    /// Materializes the window: the product of the given ranges on the
    /// infinite axes and the full cyclic range on each finite axis.
    pub fn region(&self, group: &GroupSpec) -> Result<ElementSet, CliError> {
        const REGION_LIMIT: usize = 200_000;
        let mut axes: Vec<Vec<i64>> = Vec::with_capacity(group.rank());
        let mut ranges = self.ranges.iter();
        let mut size: usize = 1;
        for &m in group.moduli() {
            let axis: Vec<i64> = if m == 0 {
                let &(lo, hi) = ranges.next().expect("parse checked the range count");
                (lo..=hi).collect()
            } else {
                (0..m as i64).collect()
            };
            size = size
                .checked_mul(axis.len())
                .filter(|&s| s <= REGION_LIMIT)
                .ok_or_else(|| {
                    usage(format!("window spans more than {REGION_LIMIT} positions"))
                })?;
            axes.push(axis);
        }
        let mut region = ElementSet::new();
        let mut coords = vec![0usize; axes.len()];
        loop {
            let position: Vec<i64> = coords.iter().zip(&axes).map(|(&i, axis)| axis[i]).collect();
            region.insert(
                group
                    .element(position)
                    .expect("axis coordinates conform to the group"),
            );
            let mut axis = axes.len();
            loop {
                if axis == 0 {
                    return Ok(region);
                }
                axis -= 1;
                coords[axis] += 1;
                if coords[axis] < axes[axis].len() {
                    break;
                }
                coords[axis] = 0;
            }
        }
    }
}

/// All cells of a finite group, as a region.
pub fn full_region(group: &GroupSpec) -> Result<ElementSet, CliError> {
    group
        .enumerate_elements()
        .map_err(|e| usage(format!("{e}")))
}

pub fn print_config_line(config: &PartialConfig) {
    println!(
        "{}",
        serde_json::to_string(&config.to_doc()).expect("configuration docs always serialize")
    );
}
