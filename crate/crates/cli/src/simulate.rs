//! The `simulate` subcommand: iterate a transition mode, one JSON line per
//! snapshot (input included).

use std::path::PathBuf;

use partca_core::{Automaton, ElementSet, PartialConfig};

use crate::io::{self, usage, CliError, Window};
use crate::Mode;

pub struct SimulateArgs {
    pub automaton: PathBuf,
    pub config: PathBuf,
    pub mode: Mode,
    pub steps: u32,
    pub window: Option<String>,
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let automaton = io::load_automaton(&args.automaton)?;
    let mut config = io::load_config(&args.config, &automaton)?;
    let window = args
        .window
        .as_deref()
        .map(|text| Window::parse(text, automaton.group()))
        .transpose()?;
    let window_region = window
        .as_ref()
        .map(|w| w.region(automaton.group()))
        .transpose()?;

    if args.mode == Mode::Global {
        if !automaton.group().is_finite() {
            return Err(usage("global mode needs a finite group"));
        }
        automaton
            .global_apply(&config)
            .map_err(|e| usage(format!("global mode: {e}")))?;
    }
    if args.mode == Mode::Fine && args.steps > 0 {
        // fail before echoing anything when no finite region exists
        fine_region(&automaton, &config, window_region.as_ref())?;
    }

    if let Some(region) = &window_region {
        config = config.restrict(region);
    }
    io::print_config_line(&config);
    let mut warned_empty = false;
    for step in 1..=args.steps {
        let mut next = match args.mode {
            Mode::Coarse => automaton
                .coarse_apply(&config)
                .map_err(|e| usage(format!("step {step}: {e}")))?,
            Mode::Global => automaton
                .global_apply(&config)
                .map_err(|e| usage(format!("step {step}: {e}")))?,
            Mode::Fine => {
                let region = fine_region(&automaton, &config, window_region.as_ref())?;
                automaton
                    .fine_apply(&config, &region)
                    .map_err(|e| usage(format!("step {step}: {e}")))?
            }
        };
        if let Some(region) = &window_region {
            next = next.restrict(region);
        }
        if next.is_empty() && args.mode == Mode::Coarse && !warned_empty {
            eprintln!("warning: step {step} shrank the support to nothing; every later coarse step stays empty");
            warned_empty = true;
        }
        io::print_config_line(&next);
        config = next;
    }
    Ok(())
}

/// Where a fine step reports its forced cells: the window when given, the
/// whole group when finite, and otherwise the finitely many cells that see
/// any data — which is exhaustive only when no empty window is forced.
pub fn fine_region(
    automaton: &Automaton,
    config: &PartialConfig,
    window_region: Option<&ElementSet>,
) -> Result<ElementSet, CliError> {
    if let Some(region) = window_region {
        return Ok(region.clone());
    }
    if automaton.group().is_finite() {
        return io::full_region(automaton.group());
    }
    if automaton.background_determined().is_some() {
        return Err(usage(
            "fine mode output is unbounded here (the rule forces cells with no data); pass --window",
        ));
    }
    automaton
        .window_candidates(&config.support())
        .map_err(|e| usage(format!("{e}")))
}
