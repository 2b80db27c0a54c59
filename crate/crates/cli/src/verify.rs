//! The `verify` subcommand: seeded law suites, order-theory self-checks,
//! transition cross-checks, and the extension-problem lab. One JSON line
//! per report; exit status 1 when any check fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use partca_core::{
    build_problems_on, enumerate_monotone_maps, verify_kan, Automaton, AutomatonDoc, CaSpaces,
    ConfigError, ExhaustiveStatus, FinitePoset, GroupElement, GroupSpec, Injectivity, KanError,
    MonotoneMap, PartialConfig, RuleSpec, State, StateSet,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::io::{self, usage, CliError};

/// Deliberate breakage for exercising the failure exit path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Swap the lab candidates for ones computed from a perturbed rule
    /// table, so the extension checks must fail.
    WrongRule,
}

pub struct VerifyArgs {
    pub automaton: PathBuf,
    pub suites: String,
    pub budget: u64,
    pub seed: u64,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Laws,
    Order,
    Transitions,
    Kan,
}

fn parse_suites(text: &str) -> Result<Vec<Suite>, CliError> {
    let mut suites = Vec::new();
    for part in text.split(',') {
        let suite = match part.trim() {
            "laws" => Suite::Laws,
            "order" => Suite::Order,
            "transitions" => Suite::Transitions,
            "kan" => Suite::Kan,
            other => {
                return Err(usage(format!(
                    "unknown suite {other:?}; pick from laws, order, transitions, kan"
                )))
            }
        };
        if !suites.contains(&suite) {
            suites.push(suite);
        }
    }
    Ok(suites)
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    if args.budget == 0 {
        return Err(usage("--budget must be positive"));
    }
    let suites = parse_suites(&args.suites)?;
    if suites.is_empty() {
        return Err(usage("--suites needs at least one suite"));
    }
    if args.fault.is_some() && !suites.contains(&Suite::Kan) {
        return Err(usage(
            "--inject-fault breaks the kan suite; include kan in --suites",
        ));
    }
    let automaton = io::load_automaton(&args.automaton)?;

    let mut failures = 0u64;
    for suite in suites {
        failures += match suite {
            Suite::Laws => run_laws(&automaton, args.seed),
            Suite::Order => run_order(&automaton),
            Suite::Transitions => run_transitions(&automaton, args.seed),
            Suite::Kan => run_kan(&automaton, args.budget, args.fault)?,
        };
    }
    let verdict = if failures == 0 { "pass" } else { "fail" };
    println!("{{\"verify\":\"{verdict}\",\"failures\":{failures}}}");
    if failures > 0 {
        return Err(CliError::Failure(format!(
            "{failures} verification failure(s)"
        )));
    }
    Ok(())
}

/// Pass/fail bookkeeping for one suite; keeps the first counterexample.
struct Tally {
    cases: u64,
    failures: u64,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: 0,
            witness: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn finish(self, suite: &str, started: Instant) -> u64 {
        println!(
            "{{\"suite\":{},\"cases\":{},\"failures\":{},\"witness\":{},\"elapsed_ms\":{}}}",
            json_str(suite),
            self.cases,
            self.failures,
            json_opt(&self.witness),
            started.elapsed().as_millis()
        );
        self.failures
    }
}

fn json_str(text: &str) -> String {
    serde_json::Value::from(text).to_string()
}

fn json_opt(text: &Option<String>) -> String {
    match text {
        Some(t) => json_str(t),
        None => "null".to_string(),
    }
}

fn random_element(rng: &mut ChaCha8Rng, group: &GroupSpec, span: i64) -> GroupElement {
    let coords = group
        .moduli()
        .iter()
        .map(|&m| {
            if m == 0 {
                rng.gen_range(-span..=span)
            } else {
                rng.gen_range(0..m as i64)
            }
        })
        .collect();
    group
        .element(coords)
        .expect("sampled coordinates conform to the group")
}

fn random_state(rng: &mut ChaCha8Rng, states: &StateSet) -> State {
    states
        .get(rng.gen_range(0..states.len()))
        .expect("index in range")
        .clone()
}

fn random_config(
    rng: &mut ChaCha8Rng,
    group: &GroupSpec,
    states: &StateSet,
    span: i64,
    max_cells: usize,
) -> PartialConfig {
    let mut entries = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=max_cells) {
        entries.insert(random_element(rng, group, span), random_state(rng, states));
    }
    PartialConfig::from_entries(group.clone(), entries).expect("map keys are distinct")
}

/// Extends `base` by up to `extra` fresh cells; the result always lies
/// above `base` in the extension order.
fn extend_config(
    rng: &mut ChaCha8Rng,
    base: &PartialConfig,
    states: &StateSet,
    span: i64,
    extra: usize,
) -> PartialConfig {
    let mut entries: BTreeMap<GroupElement, State> = base
        .entries()
        .map(|(p, v)| (p.clone(), v.clone()))
        .collect();
    for _ in 0..rng.gen_range(0..=extra) {
        let position = random_element(rng, base.spec(), span);
        entries
            .entry(position)
            .or_insert_with(|| random_state(rng, states));
    }
    PartialConfig::from_entries(base.spec().clone(), entries).expect("map keys are distinct")
}

/// Randomized algebra: group laws, the shift as a right action, and the
/// extension order with its meets and joins.
fn run_laws(automaton: &Automaton, seed: u64) -> u64 {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::new();
    let group = automaton.group();
    let states = automaton.states();
    let e = group.identity();

    // group laws, three checks per sampled triple
    for _ in 0..150 {
        let g = random_element(&mut rng, group, 64);
        let h = random_element(&mut rng, group, 64);
        let k = random_element(&mut rng, group, 64);
        let gh_k = group.compose(&group.compose(&g, &h).unwrap(), &k).unwrap();
        let g_hk = group.compose(&g, &group.compose(&h, &k).unwrap()).unwrap();
        tally.check(gh_k == g_hk, || {
            format!("associativity broke at g={g}, h={h}, k={k}")
        });
        let right = group.compose(&g, &e).unwrap();
        let left = group.compose(&e, &g).unwrap();
        tally.check(right == g && left == g, || {
            format!("identity law broke at g={g}")
        });
        let inv = group.inverse(&g).unwrap();
        let cancel = group.compose(&g, &inv).unwrap();
        let cancel_rev = group.compose(&inv, &g).unwrap();
        tally.check(cancel == e && cancel_rev == e, || {
            format!("inverse law broke at g={g}")
        });
    }

    // the shift is a right action
    for _ in 0..100 {
        let c = random_config(&mut rng, group, states, 8, 3);
        let g = random_element(&mut rng, group, 8);
        let h = random_element(&mut rng, group, 8);
        tally.check(c.shift(&e).unwrap() == c, || {
            format!("identity shift moved {c}")
        });
        let two_steps = c.shift(&g).unwrap().shift(&h).unwrap();
        let one_step = c.shift(&group.compose(&g, &h).unwrap()).unwrap();
        tally.check(two_steps == one_step, || {
            format!("shift composition broke at c={c}, g={g}, h={h}")
        });
    }

    // shifting preserves the extension order
    for _ in 0..100 {
        let small = random_config(&mut rng, group, states, 8, 3);
        let big = extend_config(&mut rng, &small, states, 8, 3);
        let g = random_element(&mut rng, group, 8);
        tally.check(
            small.shift(&g).unwrap().leq(&big.shift(&g).unwrap()),
            || format!("shift by {g} broke {small} below {big}"),
        );
    }

    // poset axioms on windows of at most three cells
    for round in 0..150 {
        let c = random_config(&mut rng, group, states, 4, 3);
        match round % 3 {
            0 => tally.check(c.leq(&c), || format!("reflexivity broke at {c}")),
            1 => {
                let d = if rng.gen_bool(0.5) {
                    c.clone()
                } else {
                    random_config(&mut rng, group, states, 4, 3)
                };
                tally.check(!(c.leq(&d) && d.leq(&c)) || c == d, || {
                    format!("antisymmetry broke at {c} and {d}")
                });
            }
            _ => {
                let d = extend_config(&mut rng, &c, states, 4, 2);
                let f = extend_config(&mut rng, &d, states, 4, 2);
                tally.check(c.leq(&f), || {
                    format!("transitivity broke along {c} -> {d} -> {f}")
                });
            }
        }
    }

    // meets against an independent agreement-map oracle
    for _ in 0..50 {
        let c = random_config(&mut rng, group, states, 3, 3);
        let d = random_config(&mut rng, group, states, 3, 3);
        let expected: BTreeMap<GroupElement, State> = c
            .entries()
            .filter(|(p, v)| d.get(p) == Some(v))
            .map(|(p, v)| (p.clone(), v.clone()))
            .collect();
        let expected = PartialConfig::from_entries(group.clone(), expected).unwrap();
        match c.meet(&d) {
            Ok(m) => tally.check(m == expected, || {
                format!("meet of {c} and {d} gave {m}, expected {expected}")
            }),
            Err(err) => tally.check(false, || format!("meet of {c} and {d} failed: {err}")),
        }
    }

    // joins against an independent union-map oracle
    for _ in 0..50 {
        let c = random_config(&mut rng, group, states, 3, 3);
        let d = random_config(&mut rng, group, states, 3, 3);
        let clash = c
            .entries()
            .any(|(p, v)| matches!(d.get(p), Some(w) if w != v));
        match (c.join(&d), clash) {
            (Ok(j), false) => {
                let mut union: BTreeMap<GroupElement, State> = c
                    .entries()
                    .map(|(p, v)| (p.clone(), v.clone()))
                    .collect();
                for (p, v) in d.entries() {
                    union.insert(p.clone(), v.clone());
                }
                let expected = PartialConfig::from_entries(group.clone(), union).unwrap();
                tally.check(j == expected, || {
                    format!("join of {c} and {d} gave {j}, expected {expected}")
                });
            }
            (Err(ConfigError::IncompatibleJoin { .. }), true) => tally.check(true, String::new),
            (Ok(j), true) => tally.check(false, || {
                format!("join of clashing {c} and {d} succeeded as {j}")
            }),
            (Err(err), _) => tally.check(false, || {
                format!("join of compatible {c} and {d} failed: {err}")
            }),
        }
    }

    tally.finish("laws", started)
}

fn chain2() -> Arc<FinitePoset> {
    Arc::new(
        FinitePoset::from_leq(vec!["lo".to_string(), "hi".to_string()], |i, j| i <= j)
            .expect("two-chain is a poset"),
    )
}

fn antichain2() -> Arc<FinitePoset> {
    Arc::new(
        FinitePoset::discrete(vec!["a".to_string(), "b".to_string()])
            .expect("two labels are distinct"),
    )
}

fn diamond() -> Arc<FinitePoset> {
    let labels = ["bot", "a", "b", "top"].map(String::from).to_vec();
    Arc::new(
        FinitePoset::from_leq(labels, |i, j| i == j || i == 0 || j == 3)
            .expect("diamond is a poset"),
    )
}

/// Deterministic order-theory checks: validation witnesses, the map order,
/// duality under reversal, and the poset spaces of this automaton if they
/// are small enough to build.
fn run_order(automaton: &Automaton) -> u64 {
    let started = Instant::now();
    let mut tally = Tally::new();

    // validation rejects broken order matrices with the right witness
    let labels = |n: usize| (0..n).map(|i| format!("e{i}")).collect::<Vec<_>>();
    let not_reflexive = FinitePoset::new(labels(2), vec![false, false, false, true]);
    tally.check(
        matches!(not_reflexive, Err(KanError::NotReflexive { .. })),
        || "a non-reflexive matrix was accepted".to_string(),
    );
    let not_antisymmetric = FinitePoset::new(labels(2), vec![true, true, true, true]);
    tally.check(
        matches!(not_antisymmetric, Err(KanError::NotAntisymmetric { .. })),
        || "a two-cycle was accepted".to_string(),
    );
    let not_transitive = FinitePoset::new(
        labels(3),
        vec![true, true, false, false, true, true, false, false, true],
    );
    tally.check(
        matches!(not_transitive, Err(KanError::NotTransitive { .. })),
        || "a non-transitive matrix was accepted".to_string(),
    );

    // the two-cell order on monotone maps is itself a partial order
    let chain = chain2();
    let antichain = antichain2();
    for maps in [
        enumerate_monotone_maps(&chain, &chain, None, 1_000).maps,
        enumerate_monotone_maps(&antichain, &chain, None, 1_000).maps,
    ] {
        for f in &maps {
            tally.check(f.two_cell_leq(f).unwrap(), || {
                "the map order is not reflexive".to_string()
            });
            for g in &maps {
                let fg = f.two_cell_leq(g).unwrap();
                let gf = g.two_cell_leq(f).unwrap();
                tally.check(!(fg && gf) || f.table() == g.table(), || {
                    "the map order is not antisymmetric".to_string()
                });
                for h in &maps {
                    let gh = g.two_cell_leq(h).unwrap();
                    let fh = f.two_cell_leq(h).unwrap();
                    tally.check(!(fg && gh) || fh, || {
                        "the map order is not transitive".to_string()
                    });
                }
            }
        }
    }

    // expected map counts for the smallest exercises
    let chain_maps = enumerate_monotone_maps(&chain, &chain, None, 1_000);
    tally.check(chain_maps.complete && chain_maps.maps.len() == 3, || {
        format!("two-chain self-maps: got {}", chain_maps.maps.len())
    });
    let anti_maps = enumerate_monotone_maps(&antichain, &chain, None, 1_000);
    tally.check(anti_maps.complete && anti_maps.maps.len() == 4, || {
        format!("antichain-to-chain maps: got {}", anti_maps.maps.len())
    });
    let starved = enumerate_monotone_maps(&chain, &chain, None, 1);
    tally.check(!starved.complete && starved.visited <= 1, || {
        "a one-visit budget was not reported as exhausted".to_string()
    });

    // joins in a poset are meets in its reversal, subset by subset
    let d = diamond();
    let r = Arc::new(d.reversed());
    let elems = [0usize, 1, 2, 3];
    for mask in 0u32..16 {
        let subset: Vec<usize> = elems.iter().copied().filter(|&i| mask & (1 << i) != 0).collect();
        tally.check(
            d.join_of(&subset) == r.meet_of(&subset) && d.meet_of(&subset) == r.join_of(&subset),
            || format!("reversal duality broke on subset {subset:?}"),
        );
    }

    // a linear extension never places a larger element first
    let order = d.linear_extension();
    let mut seen = vec![false; d.len()];
    let mut sorted = true;
    for &i in &order {
        for (j, &done) in seen.iter().enumerate() {
            if d.leq(j, i) && j != i && !done {
                sorted = false;
            }
        }
        seen[i] = true;
    }
    tally.check(sorted && order.len() == d.len(), || {
        format!("bad linear extension {order:?}")
    });

    // this automaton's poset spaces, when small enough to build
    let group = automaton.group();
    if group.is_finite() {
        match CaSpaces::build(automaton) {
            Ok(spaces) => {
                let cells = group.order().expect("finite group") as u32;
                let q = automaton.states().len() as u128;
                let n = automaton.neighborhood().len() as u32;
                let cell_count = cells as u128;
                let expected_conf = (q + 1).checked_pow(cells);
                let expected_loc = q.checked_pow(n).map(|p| p * cell_count);
                let expected_sub = (q + 1).checked_pow(n).map(|p| p * cell_count);
                let expected_totals = q.checked_pow(cells);
                println!(
                    "{{\"suite\":\"order\",\"check\":\"spaces\",\"conf\":{},\"loc\":{},\"sub\":{},\"totals\":{}}}",
                    spaces.conf.len(),
                    spaces.loc.len(),
                    spaces.sub.len(),
                    spaces.totals.len()
                );
                tally.check(
                    expected_conf == Some(spaces.conf.len() as u128)
                        && expected_loc == Some(spaces.loc.len() as u128)
                        && expected_sub == Some(spaces.sub.len() as u128)
                        && expected_totals == Some(spaces.totals.len() as u128),
                    || "space sizes disagree with the counting formulas".to_string(),
                );
            }
            Err(err) => println!(
                "{{\"suite\":\"order\",\"check\":\"spaces\",\"skipped\":{}}}",
                json_str(&err.to_string())
            ),
        }
    } else {
        println!(
            "{{\"suite\":\"order\",\"check\":\"spaces\",\"skipped\":\"infinite group\"}}"
        );
    }

    tally.finish("order", started)
}

/// Cross-checks between the three transition semantics, equivariance, the
/// interior, and the neighborhood-injectivity report.
fn run_transitions(automaton: &Automaton, seed: u64) -> u64 {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7261_6e73);
    let mut tally = Tally::new();
    let group = automaton.group();
    let states = automaton.states();

    // everywhere-defined inputs: the three semantics must agree
    if group.is_finite() {
        let order = group.order().expect("finite group has an order");
        let cells: Vec<GroupElement> = group
            .enumerate_elements()
            .expect("finite group enumerates")
            .iter()
            .cloned()
            .collect();
        let all_cells = cells.iter().cloned().collect();
        if order <= 2_048 {
            let total_count = (states.len() as u128).checked_pow(order as u32);
            let totals: Vec<PartialConfig> = match total_count {
                Some(n) if n <= 4_096 => {
                    PartialConfig::enumerate_total(group, states).expect("counted small")
                }
                _ => (0..200)
                    .map(|_| {
                        let entries: BTreeMap<GroupElement, State> = cells
                            .iter()
                            .map(|g| (g.clone(), random_state(&mut rng, states)))
                            .collect();
                        PartialConfig::from_entries(group.clone(), entries)
                            .expect("cells are distinct")
                    })
                    .collect(),
            };
            for c in &totals {
                let global = automaton.global_apply(c).expect("total input");
                let coarse = automaton.coarse_apply(c).expect("valid input");
                let fine = automaton.fine_apply(c, &all_cells).expect("valid input");
                tally.check(global == coarse && global == fine, || {
                    format!("semantics disagree on the full input {c}")
                });
            }
        } else {
            println!(
                "{{\"suite\":\"transitions\",\"check\":\"full-input agreement\",\"skipped\":\"group order {order} too large\"}}"
            );
        }
    }

    // the careful step never contradicts, only refines: coarse below fine
    for _ in 0..200 {
        let c = random_config(&mut rng, group, states, 6, 4);
        let coarse = automaton.coarse_apply(&c).expect("valid input");
        let region = if group.is_finite() {
            group.enumerate_elements().expect("finite group enumerates")
        } else {
            automaton
                .window_candidates(&c.support())
                .expect("valid support")
        };
        let fine = automaton.fine_apply(&c, &region).expect("valid input");
        tally.check(coarse.leq(&fine), || {
            format!("coarse is not below fine at {c}")
        });
    }

    // both steps commute with the shift
    for _ in 0..100 {
        let c = random_config(&mut rng, group, states, 6, 4);
        let g = random_element(&mut rng, group, 6);
        let coarse_then_shift = automaton.coarse_apply(&c).unwrap().shift(&g).unwrap();
        let shift_then_coarse = automaton.coarse_apply(&c.shift(&g).unwrap()).unwrap();
        tally.check(coarse_then_shift == shift_then_coarse, || {
            format!("coarse step broke equivariance at c={c}, g={g}")
        });
        let region = if group.is_finite() {
            group.enumerate_elements().expect("finite group enumerates")
        } else {
            automaton.window_candidates(&c.support()).expect("valid support")
        };
        let shifted_region = group
            .translate_set(&group.inverse(&g).unwrap(), &region)
            .unwrap();
        let fine_then_shift = automaton.fine_apply(&c, &region).unwrap().shift(&g).unwrap();
        let shift_then_fine = automaton
            .fine_apply(&c.shift(&g).unwrap(), &shifted_region)
            .unwrap();
        tally.check(fine_then_shift == shift_then_fine, || {
            format!("fine step broke equivariance at c={c}, g={g}")
        });
    }

    // the interior is exactly the set of cells whose window is covered
    for _ in 0..100 {
        let c = random_config(&mut rng, group, states, 6, 4);
        let support = c.support();
        let interior = automaton.interior(&support).expect("valid support");
        let candidates = automaton
            .window_candidates(&support)
            .expect("valid support");
        let sound = interior.iter().all(|g| {
            automaton
                .window_at(g)
                .expect("valid cell")
                .iter()
                .all(|cell| support.contains(cell))
        });
        let complete = candidates
            .iter()
            .filter(|g| !interior.contains(g))
            .all(|g| {
                automaton
                    .window_at(g)
                    .expect("valid cell")
                    .iter()
                    .any(|cell| !support.contains(cell))
            });
        tally.check(sound && complete && interior.is_subset(&candidates), || {
            format!("interior of {support:?} is wrong")
        });
    }

    // report whether distinct cells always read distinct windows, and
    // check the placed local rule against the coarse step accordingly
    match automaton.neighborhood_injective() {
        Injectivity::Injective => {
            println!(
                "{{\"suite\":\"transitions\",\"check\":\"neighborhood_injective\",\"value\":true,\"witness\":null}}"
            );
            for _ in 0..100 {
                let g = random_element(&mut rng, group, 6);
                let window = automaton.window_at(&g).expect("valid cell");
                let pattern: Vec<State> = window
                    .iter()
                    .map(|_| random_state(&mut rng, states))
                    .collect();
                let placed = automaton.placed_local(&g, &pattern).expect("valid pattern");
                let seen = PartialConfig::from_entries(
                    group.clone(),
                    window.iter().cloned().zip(pattern.iter().cloned()),
                )
                .expect("window cells are distinct");
                let coarse = automaton.coarse_apply(&seen).expect("valid input");
                tally.check(placed == coarse, || {
                    format!("placed rule and coarse step differ on the window at {g}")
                });
            }
        }
        Injectivity::NotInjective { left, right } => {
            println!(
                "{{\"suite\":\"transitions\",\"check\":\"neighborhood_injective\",\"value\":false,\"witness\":{}}}",
                json_str(&format!("cells {left} and {right} read the same window"))
            );
            // sharing a window makes the placed result strictly coarser
            let window = automaton.window_at(&left).expect("valid cell");
            let pattern: Vec<State> = window
                .iter()
                .map(|_| random_state(&mut rng, states))
                .collect();
            let placed = automaton.placed_local(&left, &pattern).expect("valid pattern");
            let seen = PartialConfig::from_entries(
                group.clone(),
                window.iter().cloned().zip(pattern.iter().cloned()),
            )
            .expect("window cells are distinct");
            let coarse = automaton.coarse_apply(&seen).expect("valid input");
            tally.check(placed.leq(&coarse) && placed != coarse, || {
                format!(
                    "expected a strict gap between the placed rule and the coarse step at {left}"
                )
            });
        }
        Injectivity::Undecided => {
            println!(
                "{{\"suite\":\"transitions\",\"check\":\"neighborhood_injective\",\"value\":\"undecided\",\"witness\":null}}"
            );
        }
    }

    tally.finish("transitions", started)
}

/// An automaton that disagrees with `automaton` on exactly one full
/// neighborhood pattern.
fn perturbed_automaton(automaton: &Automaton) -> Result<Automaton, CliError> {
    let states = automaton.states();
    let mut entries: Vec<(Vec<State>, State)> = automaton
        .enumerate_local_patterns()
        .into_iter()
        .map(|pattern| {
            let out = automaton
                .local_apply(&pattern)
                .expect("enumerated patterns are valid");
            (pattern, out)
        })
        .collect();
    let last = entries.last_mut().expect("at least one pattern");
    let current = states.index_of(&last.1).expect("rule output is a state");
    last.1 = states
        .get((current + 1) % states.len())
        .expect("index wraps in range")
        .clone();
    let doc = AutomatonDoc {
        group: automaton.group().clone(),
        states: automaton.states().as_slice().to_vec(),
        neighborhood: automaton
            .neighborhood()
            .iter()
            .map(|n| n.coords().to_vec())
            .collect(),
        rule: RuleSpec::Table { entries },
    };
    Automaton::from_doc(&doc).map_err(|e| usage(format!("perturbed rule: {e}")))
}

/// Builds the extension problems of this automaton and checks each one
/// mechanically, printing a verdict line per problem.
fn run_kan(automaton: &Automaton, budget: u64, fault: Option<Fault>) -> Result<u64, CliError> {
    let started = Instant::now();
    let group = automaton.group();
    if !group.is_finite() {
        return Err(usage("the kan suite needs a finite group"));
    }
    let spaces = CaSpaces::build(automaton).map_err(|e| usage(format!("{e}")))?;
    let mut problems =
        build_problems_on(automaton, &spaces).map_err(|e| usage(format!("{e}")))?;

    if fault == Some(Fault::WrongRule) {
        if automaton.states().len() < 2 {
            return Err(usage("wrong-rule fault injection needs at least two states"));
        }
        let wrong = perturbed_automaton(automaton)?;
        let wrong_problems =
            build_problems_on(&wrong, &spaces).map_err(|e| usage(format!("{e}")))?;
        for ((name, problem), (_, wrong_problem)) in problems.iter_mut().zip(wrong_problems) {
            if matches!(name.as_str(), "P1" | "P2" | "P3" | "P4") {
                problem.candidate = wrong_problem.candidate;
            }
        }
    }

    let mut tally = Tally::new();
    let mut skipped = 0u64;
    let mut p2_strict = false;
    for (name, problem) in &problems {
        let problem_started = Instant::now();
        let verdict = verify_kan(problem, budget);
        println!(
            "{{\"problem\":{},\"constraint\":{},\"pointwise\":{},\"exhaustive\":\"{}\",\"witness\":{},\"elapsed_ms\":{}}}",
            json_str(name),
            verdict.constraint_holds,
            verdict.pointwise_agrees,
            verdict.exhaustive,
            json_opt(&verdict.witness),
            problem_started.elapsed().as_millis()
        );
        tally.check(verdict.passes(), || {
            format!(
                "{name}: {}",
                verdict
                    .witness
                    .clone()
                    .unwrap_or_else(|| "extension check failed".to_string())
            )
        });
        if verdict.exhaustive == ExhaustiveStatus::Skipped {
            skipped += 1;
        }
        if name == "P2" {
            // the restriction must reproduce the map it restricts exactly
            let composite = restrict_composite(problem)?;
            p2_strict = composite.table() == problem.f.table();
            tally.check(p2_strict, || {
                "P2: the fine step does not reproduce the full-input step exactly".to_string()
            });
        }
    }
    let failures = tally.failures;
    println!(
        "{{\"suite\":\"kan\",\"problems\":{},\"failures\":{},\"skipped\":{},\"p2_strict\":{},\"budget\":{},\"witness\":{},\"elapsed_ms\":{}}}",
        problems.len(),
        failures,
        skipped,
        p2_strict,
        budget,
        json_opt(&tally.witness),
        started.elapsed().as_millis()
    );
    Ok(failures)
}

fn restrict_composite(problem: &partca_core::KanProblem) -> Result<MonotoneMap, CliError> {
    problem
        .i
        .then(&problem.candidate)
        .map_err(|e| usage(format!("{e}")))
}
