//! The `query` subcommand: expose the interior and determined sets.

use std::path::PathBuf;

use serde_json::json;

use crate::io::{self, usage, CliError, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum QueryWhat {
    Interior,
    Determined,
}

pub struct QueryArgs {
    pub automaton: PathBuf,
    pub config: PathBuf,
    pub what: QueryWhat,
    pub window: Option<String>,
}

pub fn run(args: &QueryArgs) -> Result<(), CliError> {
    let automaton = io::load_automaton(&args.automaton)?;
    let config = io::load_config(&args.config, &automaton)?;
    let window_region = args
        .window
        .as_deref()
        .map(|text| Window::parse(text, automaton.group())?.region(automaton.group()))
        .transpose()?;

    match args.what {
        QueryWhat::Interior => {
            let mut interior = automaton
                .interior(&config.support())
                .map_err(|e| usage(format!("{e}")))?;
            if let Some(region) = &window_region {
                interior = interior.intersection(region);
            }
            let positions: Vec<&[i64]> = interior.iter().map(|p| p.coords()).collect();
            println!("{}", json!(positions));
        }
        QueryWhat::Determined => {
            let region = match window_region {
                Some(region) => region,
                None if automaton.group().is_finite() => io::full_region(automaton.group())?,
                None => {
                    return Err(usage(
                        "determined queries over an infinite group need --window",
                    ))
                }
            };
            let forced = automaton
                .fine_apply(&config, &region)
                .map_err(|e| usage(format!("{e}")))?;
            let pairs: Vec<serde_json::Value> = forced
                .entries()
                .map(|(pos, state)| json!([pos.coords(), state]))
                .collect();
            println!("{}", json!(pairs));
        }
    }
    Ok(())
}
