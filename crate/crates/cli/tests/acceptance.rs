//! Acceptance criteria, one test per criterion. Each test prints a single
//! pass line (visible with `--nocapture`) and enforces its own time bound.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use partca_core::{
    build_problems_on, verify_kan, Automaton, AutomatonDoc, CaSpaces, ConfigDoc, ElementSet,
    ExhaustiveStatus, GroupElement, GroupSpec, Injectivity, PartialConfig, RuleSpec, State,
    StateSet,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn states01() -> Vec<State> {
    vec![State::new("0"), State::new("1")]
}

fn state_set01() -> StateSet {
    StateSet::new(states01()).expect("two distinct states")
}

fn table(entries: &[(&[&str], &str)]) -> RuleSpec {
    RuleSpec::Table {
        entries: entries
            .iter()
            .map(|(pattern, out)| {
                (
                    pattern.iter().map(|s| State::new(*s)).collect(),
                    State::new(*out),
                )
            })
            .collect(),
    }
}

fn and_rule() -> RuleSpec {
    table(&[
        (&["0", "0"], "0"),
        (&["0", "1"], "0"),
        (&["1", "0"], "0"),
        (&["1", "1"], "1"),
    ])
}

fn xor_rule() -> RuleSpec {
    table(&[
        (&["0", "0"], "0"),
        (&["0", "1"], "1"),
        (&["1", "0"], "1"),
        (&["1", "1"], "0"),
    ])
}

fn make(moduli: &[u64], neighborhood: &[&[i64]], rule: RuleSpec) -> Automaton {
    let doc = AutomatonDoc {
        group: GroupSpec::new(moduli.to_vec()).expect("valid moduli"),
        states: states01(),
        neighborhood: neighborhood.iter().map(|n| n.to_vec()).collect(),
        rule,
    };
    Automaton::from_doc(&doc).expect("valid automaton")
}

fn and_z3() -> Automaton {
    make(&[3], &[&[0], &[1]], and_rule())
}

fn and_z2() -> Automaton {
    make(&[2], &[&[0], &[1]], and_rule())
}

fn and_z() -> Automaton {
    make(&[0], &[&[0], &[1]], and_rule())
}

fn trivial_identity() -> Automaton {
    make(&[], &[&[]], table(&[(&["0"], "0"), (&["1"], "1")]))
}

fn el(group: &GroupSpec, coords: &[i64]) -> GroupElement {
    group.element(coords.to_vec()).expect("coords conform")
}

fn cfg(group: &GroupSpec, cells: &[(&[i64], &str)]) -> PartialConfig {
    let entries: BTreeMap<GroupElement, State> = cells
        .iter()
        .map(|(coords, state)| (el(group, coords), State::new(*state)))
        .collect();
    assert_eq!(entries.len(), cells.len(), "cells must be distinct");
    PartialConfig::from_entries(group.clone(), entries).expect("distinct cells")
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
    group.element(coords).expect("sampled coords conform")
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
        let state = states
            .get(rng.gen_range(0..states.len()))
            .expect("index in range")
            .clone();
        entries.insert(random_element(rng, group, span), state);
    }
    PartialConfig::from_entries(group.clone(), entries).expect("map keys distinct")
}

/// Extends `base` with up to `extra` fresh cells.
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
        let state = states
            .get(rng.gen_range(0..states.len()))
            .expect("index in range")
            .clone();
        entries.entry(random_element(rng, base.spec(), span)).or_insert(state);
    }
    PartialConfig::from_entries(base.spec().clone(), entries).expect("map keys distinct")
}

/// Full-window pattern placements: every (cell, total pattern) pair, with
/// the pattern also materialized as a configuration on the cell's window.
fn placements(automaton: &Automaton) -> Vec<(GroupElement, Vec<State>, PartialConfig)> {
    let cells = automaton
        .group()
        .enumerate_elements()
        .expect("finite group");
    let mut out = Vec::new();
    for g in cells.iter() {
        let window = automaton.window_at(g).expect("cell conforms");
        for pattern in automaton.enumerate_local_patterns() {
            let seen = PartialConfig::from_entries(
                automaton.group().clone(),
                window.iter().cloned().zip(pattern.iter().cloned()),
            )
            .expect("window cells distinct");
            out.push((g.clone(), pattern, seen));
        }
    }
    out
}

/// Partial-window pattern placements, as (cell, slot pattern, seen config).
fn sub_placements(automaton: &Automaton) -> Vec<(GroupElement, Vec<Option<State>>, PartialConfig)> {
    let cells = automaton
        .group()
        .enumerate_elements()
        .expect("finite group");
    let mut out = Vec::new();
    for g in cells.iter() {
        let window = automaton.window_at(g).expect("cell conforms");
        for pattern in automaton.enumerate_sublocal_patterns() {
            let entries: BTreeMap<GroupElement, State> = window
                .iter()
                .zip(&pattern)
                .filter_map(|(cell, slot)| slot.clone().map(|v| (cell.clone(), v)))
                .collect();
            let seen = PartialConfig::from_entries(automaton.group().clone(), entries)
                .expect("window cells distinct");
            out.push((g.clone(), pattern, seen));
        }
    }
    out
}

fn all_cells(automaton: &Automaton) -> ElementSet {
    automaton
        .group()
        .enumerate_elements()
        .expect("finite group")
}

fn sample_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("..")
        .join("samples")
        .join(name)
}

#[test]
fn criterion_01_shift_action_and_order_laws() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let states = state_set01();
    let plane = GroupSpec::new(vec![0, 0]).expect("plane");
    let ring = GroupSpec::new(vec![6]).expect("ring of six");
    let mut cases = 0u32;

    for group in [&plane, &ring] {
        let e = group.identity();
        // the shift is a right action
        for _ in 0..250 {
            let c = random_config(&mut rng, group, &states, 8, 3);
            let g = random_element(&mut rng, group, 8);
            let h = random_element(&mut rng, group, 8);
            assert_eq!(c.shift(&e).unwrap(), c, "identity shift moved {c}");
            let two = c.shift(&g).unwrap().shift(&h).unwrap();
            let one = c.shift(&group.compose(&g, &h).unwrap()).unwrap();
            assert_eq!(two, one, "shift composition broke at {c}, {g}, {h}");
            cases += 1;
        }
        // shifting preserves the extension order
        for _ in 0..100 {
            let small = random_config(&mut rng, group, &states, 8, 3);
            let big = extend_config(&mut rng, &small, &states, 8, 3);
            let g = random_element(&mut rng, group, 8);
            assert!(
                small.shift(&g).unwrap().leq(&big.shift(&g).unwrap()),
                "shift by {g} broke {small} below {big}"
            );
            cases += 1;
        }
        // poset axioms on windows of at most three cells
        for round in 0..150 {
            let c = random_config(&mut rng, group, &states, 4, 3);
            match round % 3 {
                0 => assert!(c.leq(&c), "reflexivity broke at {c}"),
                1 => {
                    let d = if rng.gen_bool(0.5) {
                        c.clone()
                    } else {
                        random_config(&mut rng, group, &states, 4, 3)
                    };
                    assert!(
                        !(c.leq(&d) && d.leq(&c)) || c == d,
                        "antisymmetry broke at {c} and {d}"
                    );
                }
                _ => {
                    let d = extend_config(&mut rng, &c, &states, 4, 2);
                    let f = extend_config(&mut rng, &d, &states, 4, 2);
                    assert!(c.leq(&f), "transitivity broke along {c} -> {d} -> {f}");
                }
            }
            cases += 1;
        }
    }
    assert_eq!(cases, 1000);
    assert!(started.elapsed() < Duration::from_secs(5));
    println!(
        "criterion 01 pass: {} action and order cases in {} ms",
        cases,
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_02_three_semantics_agree_on_full_inputs() {
    let started = Instant::now();
    let rules = [
        ("and", and_rule()),
        ("xor-table", xor_rule()),
        (
            "constant",
            RuleSpec::Constant {
                value: State::new("1"),
            },
        ),
    ];
    let mut cases = 0u32;
    for (name, rule) in rules {
        let automaton = make(&[3], &[&[0], &[1]], rule);
        let region = all_cells(&automaton);
        let totals =
            PartialConfig::enumerate_total(automaton.group(), automaton.states()).unwrap();
        assert_eq!(totals.len(), 8);
        for c in &totals {
            let global = automaton.global_apply(c).unwrap();
            let coarse = automaton.coarse_apply(c).unwrap();
            let fine = automaton.fine_apply(c, &region).unwrap();
            assert_eq!(global, coarse, "{name}: coarse differs on {c}");
            assert_eq!(global, fine, "{name}: fine differs on {c}");
            cases += 1;
        }
    }
    assert_eq!(cases, 24);
    assert!(started.elapsed() < Duration::from_secs(1));
    println!(
        "criterion 02 pass: 8 full inputs x 3 rules agree across semantics in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_03_fine_step_is_the_meet_over_completions() {
    let started = Instant::now();
    let rules = [
        ("and", and_rule()),
        ("xor-table", xor_rule()),
        (
            "constant",
            RuleSpec::Constant {
                value: State::new("1"),
            },
        ),
    ];
    for (name, rule) in rules {
        let automaton = make(&[3], &[&[0], &[1]], rule);
        let region = all_cells(&automaton);
        let configs =
            PartialConfig::enumerate_all(automaton.group(), automaton.states()).unwrap();
        assert_eq!(configs.len(), 27);
        for c in &configs {
            let fine = automaton.fine_apply(c, &region).unwrap();
            let stepped: Vec<PartialConfig> = c
                .completions(automaton.states(), &region)
                .unwrap()
                .iter()
                .map(|full| automaton.global_apply(full).unwrap())
                .collect();
            let oracle = PartialConfig::meet_family(&stepped).unwrap();
            assert_eq!(fine, oracle, "{name}: fine is not the meet at {c}");
        }
    }
    assert!(started.elapsed() < Duration::from_secs(5));
    println!(
        "criterion 03 pass: fine equals the meet over completions on 27 configurations x 3 rules in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_04_coarse_step_is_the_join_of_placed_results() {
    let started = Instant::now();
    let rules = [
        ("and", and_rule()),
        ("xor-table", xor_rule()),
        (
            "constant",
            RuleSpec::Constant {
                value: State::new("1"),
            },
        ),
    ];
    for (name, rule) in rules {
        let automaton = make(&[3], &[&[0], &[1]], rule);
        let placed = placements(&automaton);
        let configs =
            PartialConfig::enumerate_all(automaton.group(), automaton.states()).unwrap();
        for c in &configs {
            let coarse = automaton.coarse_apply(c).unwrap();
            let below: Vec<PartialConfig> = placed
                .iter()
                .filter(|(_, _, seen)| seen.leq(c))
                .map(|(g, pattern, _)| automaton.placed_local(g, pattern).unwrap())
                .collect();
            let oracle = PartialConfig::join_family(automaton.group(), &below).unwrap();
            assert_eq!(coarse, oracle, "{name}: coarse is not the join at {c}");
        }
    }
    assert!(started.elapsed() < Duration::from_secs(5));
    println!(
        "criterion 04 pass: coarse equals the join of placed results on 27 configurations x 3 rules in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_05_forced_results_and_their_extension() {
    let started = Instant::now();
    let automaton = and_z3();
    let states = automaton.states().clone();
    let region = all_cells(&automaton);

    // the forced result on a partial window is the meet over the full ones
    let subs = sub_placements(&automaton);
    assert_eq!(subs.len(), 27);
    for (g, pattern, seen) in &subs {
        let forced = automaton.placed_sublocal(g, pattern).unwrap();
        let window: ElementSet = automaton.window_at(g).unwrap().into_iter().collect();
        let completions = seen.completions(&states, &window).unwrap();
        let placed: Vec<PartialConfig> = completions
            .iter()
            .map(|full| {
                let slots: Vec<State> = automaton
                    .neighborhood_pattern(full, g)
                    .unwrap()
                    .into_iter()
                    .map(|slot| slot.expect("completion covers the window"))
                    .collect();
                automaton.placed_local(g, &slots).unwrap()
            })
            .collect();
        let oracle = PartialConfig::meet_family(&placed).unwrap();
        assert_eq!(forced, oracle, "forced result at ({g},{seen}) is not the meet");
    }

    // the fine step is the join of forced results placed below the input
    let configs = PartialConfig::enumerate_all(automaton.group(), &states).unwrap();
    assert_eq!(configs.len(), 27);
    for c in &configs {
        let fine = automaton.fine_apply(c, &region).unwrap();
        let below: Vec<PartialConfig> = subs
            .iter()
            .filter(|(_, _, seen)| seen.leq(c))
            .map(|(g, pattern, _)| automaton.placed_sublocal(g, pattern).unwrap())
            .collect();
        let oracle = PartialConfig::join_family(automaton.group(), &below).unwrap();
        assert_eq!(fine, oracle, "fine is not the join of forced results at {c}");
    }

    assert!(started.elapsed() < Duration::from_secs(5));
    println!(
        "criterion 05 pass: 27 forced-result meets and 27 pointwise joins in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_06_exhaustive_extremality_within_budget() {
    let started = Instant::now();
    const BUDGET: u64 = 100_000_000;
    for (name, automaton, conf_size) in [
        ("trivial", trivial_identity(), 3usize),
        ("two-cell ring", and_z2(), 9usize),
    ] {
        let spaces = CaSpaces::build(&automaton).unwrap();
        assert_eq!(spaces.conf.len(), conf_size);
        let problems = build_problems_on(&automaton, &spaces).unwrap();
        for (label, problem) in &problems {
            if !matches!(label.as_str(), "P1" | "P2" | "P3" | "P4") {
                continue;
            }
            let verdict = verify_kan(problem, BUDGET);
            assert!(
                verdict.constraint_holds && verdict.pointwise_agrees,
                "{name} {label}: {:?}",
                verdict.witness
            );
            assert_eq!(
                verdict.exhaustive,
                ExhaustiveStatus::Extremal,
                "{name} {label}: exhaustive tier did not finish extremal: {:?}",
                verdict.witness
            );
        }

        // a candidate from a perturbed rule must be rejected with a witness
        let mut entries: Vec<(Vec<State>, State)> = automaton
            .enumerate_local_patterns()
            .into_iter()
            .map(|p| {
                let out = automaton.local_apply(&p).unwrap();
                (p, out)
            })
            .collect();
        let states = automaton.states();
        let last = entries.last_mut().unwrap();
        let current = states.index_of(&last.1).unwrap();
        last.1 = states.get((current + 1) % states.len()).unwrap().clone();
        let wrong = Automaton::from_doc(&AutomatonDoc {
            group: automaton.group().clone(),
            states: states.as_slice().to_vec(),
            neighborhood: automaton
                .neighborhood()
                .iter()
                .map(|n| n.coords().to_vec())
                .collect(),
            rule: RuleSpec::Table { entries },
        })
        .unwrap();
        let wrong_problems = build_problems_on(&wrong, &spaces).unwrap();
        for ((label, problem), (_, wrong_problem)) in
            problems.iter().zip(wrong_problems)
        {
            if !matches!(label.as_str(), "P1" | "P2" | "P3" | "P4") {
                continue;
            }
            let mut spliced = problem.clone();
            spliced.candidate = wrong_problem.candidate;
            let verdict = verify_kan(&spliced, BUDGET);
            assert!(
                !verdict.passes(),
                "{name} {label}: a perturbed candidate was accepted"
            );
            assert!(
                verdict.witness.is_some(),
                "{name} {label}: rejection came without a witness"
            );
        }
    }
    assert!(started.elapsed() < Duration::from_secs(60));
    println!(
        "criterion 06 pass: exhaustive extremality and perturbed rejection on both instances in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_07_window_sharing_and_strictness() {
    let started = Instant::now();

    // a torsion neighborhood: distinct cells can read the same window
    let torsion = make(&[2, 2], &[&[0, 0], &[1, 0]], and_rule());
    let group = torsion.group().clone();
    match torsion.neighborhood_injective() {
        Injectivity::NotInjective { left, right } => {
            assert_ne!(left, right);
            let lw: ElementSet = torsion.window_at(&left).unwrap().into_iter().collect();
            let rw: ElementSet = torsion.window_at(&right).unwrap().into_iter().collect();
            assert_eq!(lw, rw, "reported cells do not share a window");
        }
        other => panic!("expected a shared window, got {other:?}"),
    }
    // sharing makes the placed result strictly below the coarse step
    let pattern = [State::new("1"), State::new("1")];
    let window = torsion.window_at(&el(&group, &[0, 0])).unwrap();
    let seen = PartialConfig::from_entries(
        group.clone(),
        window.iter().cloned().zip(pattern.iter().cloned()),
    )
    .unwrap();
    let placed = torsion.placed_local(&el(&group, &[0, 0]), &pattern).unwrap();
    let coarse = torsion.coarse_apply(&seen).unwrap();
    assert!(placed.leq(&coarse) && placed != coarse, "expected a strict gap");

    // on the integer line the same comparison is an exact equality
    let line = and_z();
    assert_eq!(line.neighborhood_injective(), Injectivity::Injective);
    let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
    for _ in 0..50 {
        let g = random_element(&mut rng, line.group(), 10);
        for pattern in line.enumerate_local_patterns() {
            let window = line.window_at(&g).unwrap();
            let seen = PartialConfig::from_entries(
                line.group().clone(),
                window.iter().cloned().zip(pattern.iter().cloned()),
            )
            .unwrap();
            let placed = line.placed_local(&g, &pattern).unwrap();
            let coarse = line.coarse_apply(&seen).unwrap();
            assert_eq!(placed, coarse, "placed and coarse differ at {g}");
        }
    }

    assert!(started.elapsed() < Duration::from_secs(5));
    println!(
        "criterion 07 pass: shared-window strict gap and injective equality in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_08_constant_rules_force_the_whole_window() {
    let started = Instant::now();
    let automaton = make(
        &[0],
        &[&[0], &[1]],
        RuleSpec::Constant {
            value: State::new("1"),
        },
    );
    let q = State::new("1");
    assert_eq!(automaton.background_determined(), Some(q.clone()));
    let empty = PartialConfig::empty(automaton.group().clone());
    for size in 1..=25i64 {
        let offset = -size; // vary the placement with the size
        let window: ElementSet = (offset..offset + size)
            .map(|x| el(automaton.group(), &[x]))
            .collect();
        let fine = automaton.fine_apply(&empty, &window).unwrap();
        assert_eq!(fine.support(), window, "size {size}: window not covered");
        assert!(
            fine.entries().all(|(_, v)| v == &q),
            "size {size}: a cell is not the constant"
        );
    }
    assert!(started.elapsed() < Duration::from_secs(5));
    println!(
        "criterion 08 pass: the constant rule fills windows of sizes 1-25 in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_09_coarse_below_fine_with_a_strict_witness() {
    let started = Instant::now();
    let automaton = and_z();
    let states = automaton.states().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    for _ in 0..500 {
        let c = random_config(&mut rng, automaton.group(), &states, 12, 6);
        let coarse = automaton.coarse_apply(&c).unwrap();
        let region = automaton.window_candidates(&c.support()).unwrap();
        let fine = automaton.fine_apply(&c, &region).unwrap();
        assert!(coarse.leq(&fine), "coarse is not below fine at {c}");
    }
    // the canonical strict witness: one absorbing cell forces two results
    let witness = cfg(automaton.group(), &[(&[5], "0")]);
    let coarse = automaton.coarse_apply(&witness).unwrap();
    let region = automaton.window_candidates(&witness.support()).unwrap();
    let fine = automaton.fine_apply(&witness, &region).unwrap();
    assert!(coarse.is_empty(), "expected an empty coarse step");
    assert_eq!(
        fine,
        cfg(automaton.group(), &[(&[4], "0"), (&[5], "0")]),
        "unexpected fine step"
    );
    assert!(coarse.leq(&fine) && coarse != fine);
    assert!(started.elapsed() < Duration::from_secs(10));
    println!(
        "criterion 09 pass: 500 random refinements plus the strict witness in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_10_every_admissible_map_sits_between_the_two_steps() {
    let started = Instant::now();
    for (name, automaton) in [("trivial", trivial_identity()), ("two-cell ring", and_z2())] {
        let spaces = CaSpaces::build(&automaton).unwrap();
        let problems = build_problems_on(&automaton, &spaces).unwrap();
        let p1 = &problems.iter().find(|(n, _)| n == "P1").unwrap().1;
        let p2 = &problems.iter().find(|(n, _)| n == "P2").unwrap().1;
        let coarse = &p1.candidate;
        let fine = &p2.candidate;

        // every h admitted by the placement constraint, via per-element
        // lower bounds joined over the projection fibers
        let conf = &spaces.conf;
        let mut lower = vec![usize::MAX; conf.len()];
        for a in 0..spaces.loc.len() {
            let b = p1.i.apply(a);
            let v = p1.f.apply(a);
            lower[b] = if lower[b] == usize::MAX {
                v
            } else {
                conf.join_of(&[lower[b], v]).expect("placements are compatible")
            };
        }
        let bottom = conf.bottom().expect("the empty configuration");
        for slot in lower.iter_mut() {
            if *slot == usize::MAX {
                *slot = bottom;
            }
        }
        let admissible = |b: usize, v: usize| conf.leq(lower[b], v);
        let outcome = partca_core::enumerate_monotone_maps(
            conf,
            conf,
            Some(&admissible),
            100_000_000,
        );
        assert!(outcome.complete, "{name}: enumeration ran out of budget");
        assert!(!outcome.maps.is_empty());
        let mut violations = Vec::new();
        for h in &outcome.maps {
            let above_coarse = coarse.two_cell_leq(h).unwrap();
            let below_fine = h.two_cell_leq(fine).unwrap();
            if !above_coarse || !below_fine {
                violations.push(format!(
                    "finding: {name}: a map escapes the sandwich (above coarse: {above_coarse}, below fine: {below_fine})"
                ));
            }
        }
        for finding in &violations {
            println!("{finding}");
        }
        assert!(
            violations.is_empty(),
            "{name}: {} of {} admitted maps escape the sandwich",
            violations.len(),
            outcome.maps.len()
        );
        println!(
            "criterion 10 progress: {name}: all {} admitted maps stay between the two steps",
            outcome.maps.len()
        );
    }
    assert!(started.elapsed() < Duration::from_secs(60));
    println!(
        "criterion 10 pass: the sandwich holds on both instances in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_11_shifts_are_meets_over_completions() {
    let started = Instant::now();
    let automaton = and_z3();
    let group = automaton.group().clone();
    let states = automaton.states().clone();
    let region = all_cells(&automaton);
    let configs = PartialConfig::enumerate_all(&group, &states).unwrap();
    assert_eq!(configs.len(), 27);
    let cells: Vec<GroupElement> = region.iter().cloned().collect();
    for g in &cells {
        for c in &configs {
            let shifted = c.shift(g).unwrap();
            let family: Vec<PartialConfig> = c
                .completions(&states, &region)
                .unwrap()
                .iter()
                .map(|full| full.shift(g).unwrap())
                .collect();
            let oracle = PartialConfig::meet_family(&family).unwrap();
            assert_eq!(shifted, oracle, "shift by {g} is not the meet at {c}");
        }
    }
    assert!(started.elapsed() < Duration::from_secs(5));
    println!(
        "criterion 11 pass: every shift agrees with its completion meet on 27 configurations in {} ms",
        started.elapsed().as_millis()
    );
}

#[test]
fn criterion_12_cli_round_trip_and_exit_codes() {
    let started = Instant::now();

    // byte-identical round-trip for every shipped sample
    let samples_dir = sample_path("");
    let mut checked = 0usize;
    for entry in std::fs::read_dir(&samples_dir).expect("samples directory") {
        let path = entry.expect("directory entry").path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path).expect("readable sample");
        let reserialized = match serde_json::from_str::<AutomatonDoc>(&text) {
            Ok(doc) => {
                Automaton::from_doc(&doc).expect("shipped automata validate");
                serde_json::to_string(&doc).expect("docs serialize")
            }
            Err(_) => {
                let doc: ConfigDoc =
                    serde_json::from_str(&text).expect("sample is an automaton or configuration");
                serde_json::to_string(&doc).expect("docs serialize")
            }
        };
        assert_eq!(
            reserialized,
            text,
            "round-trip changed {}",
            path.display()
        );
        checked += 1;
    }
    assert!(checked >= 10, "expected the full sample set, found {checked}");

    // exit code 0: a passing verification
    let bin = env!("CARGO_BIN_EXE_partca");
    let pass = Command::new(bin)
        .args(["verify", "--automaton"])
        .arg(sample_path("and_z2.json"))
        .args(["--suites", "kan"])
        .output()
        .expect("binary runs");
    assert_eq!(pass.status.code(), Some(0), "{:?}", pass);

    // exit code 1: an injected wrong rule table must fail verification
    let fail = Command::new(bin)
        .args(["verify", "--automaton"])
        .arg(sample_path("and_z2.json"))
        .args(["--suites", "kan", "--inject-fault", "wrong-rule"])
        .output()
        .expect("binary runs");
    assert_eq!(fail.status.code(), Some(1), "{:?}", fail);
    let stdout = String::from_utf8_lossy(&fail.stdout);
    assert!(
        stdout.contains("\"constraint\":false") || stdout.contains("\"pointwise\":false"),
        "no failing verdict line in: {stdout}"
    );

    // exit code 2: a parse error
    let garbage = std::env::temp_dir().join("partca-acceptance-garbage.json");
    std::fs::write(&garbage, "{\"this is\": not json").expect("temp file");
    let usage = Command::new(bin)
        .args(["simulate", "--automaton"])
        .arg(&garbage)
        .args(["--config"])
        .arg(sample_path("single0.json"))
        .args(["--mode", "coarse", "--steps", "1"])
        .output()
        .expect("binary runs");
    assert_eq!(usage.status.code(), Some(2), "{:?}", usage);

    // exit code 2 again: a missing window where one is required
    let missing_window = Command::new(bin)
        .args(["query", "--automaton"])
        .arg(sample_path("and_z.json"))
        .args(["--config"])
        .arg(sample_path("single0.json"))
        .args(["--what", "determined"])
        .output()
        .expect("binary runs");
    assert_eq!(missing_window.status.code(), Some(2), "{:?}", missing_window);

    println!(
        "criterion 12 pass: {} samples round-trip and the exit codes hold in {} ms",
        checked,
        started.elapsed().as_millis()
    );
}
