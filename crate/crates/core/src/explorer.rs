//! Bounded exhaustive breadth-first exploration of the reachable state space
//! with per-state invariant checking, per-transition lemma checking, and
//! minimal counterexample traces.
//!
//! Exploration is level-synchronous: each level's frontier is expanded in
//! parallel, results are merged sequentially in canonical order, so reports
//! are byte-identical for any worker count. For each failing check the first
//! (and therefore minimal-depth) violation is kept.

use std::collections::HashMap;
use std::time::Instant;

use crate::action::{successors, ActionInstance};
use crate::domain::{QuorumSystem, Scope, SentState};
use crate::invariants::{
    check_agree, check_msg_inv_basic, check_msg_inv_multi, check_safe_at_stable, check_type_ok,
    check_voted_inv, check_voted_once, CheckResult,
};

pub const DEFAULT_STATE_CAP: usize = 5_000_000;

/// Which checks to run on visited states and transitions.
#[derive(Clone, Copy, Debug)]
pub struct CheckSelection {
    pub type_ok: bool,
    pub msg_inv: bool,
    pub agree: bool,
    pub voted_once: bool,
    pub voted_inv: bool,
    pub safe_at_stable: bool,
}

impl Default for CheckSelection {
    fn default() -> Self {
        CheckSelection {
            type_ok: true,
            msg_inv: true,
            agree: true,
            voted_once: true,
            voted_inv: true,
            safe_at_stable: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExploreOptions {
    pub checks: CheckSelection,
    pub workers: usize,
    pub state_cap: usize,
    /// Additionally assert per transition that a source satisfying the
    /// inductive invariant (TypeOK and the message invariants) only reaches
    /// states that satisfy it.
    pub inductive: bool,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            checks: CheckSelection::default(),
            workers: 1,
            state_cap: DEFAULT_STATE_CAP,
            inductive: false,
        }
    }
}

/// A failed check together with the state it failed on and the minimal
/// action trace reaching that state from the empty set.
#[derive(Clone, Debug)]
pub struct Violation {
    pub check: CheckResult,
    pub state: SentState,
    pub trace: Vec<ActionInstance>,
}

#[derive(Clone, Debug)]
pub struct ExplorationReport {
    pub scope: Scope,
    pub states_visited: u64,
    pub transitions: u64,
    pub max_depth_reached: u32,
    pub violations: Vec<Violation>,
    pub duration_ms: u64,
    /// True when the frontier was exhausted, false when the depth limit or
    /// the state cap stopped exploration early (a clean report then only
    /// means "no violation within the explored prefix").
    pub complete: bool,
    pub state_cap_hit: bool,
}

impl ExplorationReport {
    pub fn has_violations(&self) -> bool {
        !self.violations.is_empty()
    }
}

/// Auxiliary data for cross-checking the explorer itself.
#[derive(Clone, Debug, Default)]
pub struct ExplorationDetail {
    /// Canonical encodings of every visited state, sorted.
    pub visited_encodings: Vec<Vec<u8>>,
    /// Canonical encodings of the visited states with no successors, sorted.
    pub terminal_encodings: Vec<Vec<u8>>,
}

fn run_state_checks(
    s: &SentState,
    scope: &Scope,
    quorums: &QuorumSystem,
    sel: &CheckSelection,
    need_inv: bool,
) -> (Vec<CheckResult>, Option<&'static str>) {
    let mut fails = Vec::new();
    let mut inv_fail: Option<&'static str> = None;
    if sel.type_ok || need_inv {
        let r = check_type_ok(s, scope);
        if r.failed() {
            inv_fail = Some(r.name);
            if sel.type_ok {
                fails.push(r);
            }
        }
    }
    if sel.msg_inv || need_inv {
        let results = if scope.variant.is_basic() {
            check_msg_inv_basic(s, scope, quorums)
        } else {
            check_msg_inv_multi(s, scope, quorums)
        };
        for r in results {
            if r.failed() {
                if inv_fail.is_none() {
                    inv_fail = Some(r.name);
                }
                if sel.msg_inv {
                    fails.push(r);
                }
            }
        }
    }
    if sel.voted_once {
        let r = check_voted_once(s, scope);
        if r.failed() {
            fails.push(r);
        }
    }
    if sel.voted_inv {
        let r = check_voted_inv(s, scope, quorums);
        if r.failed() {
            fails.push(r);
        }
    }
    if sel.agree {
        let r = check_agree(s, scope, quorums);
        if r.failed() {
            fails.push(r);
        }
    }
    (fails, inv_fail)
}

fn inductive_name(base: &'static str) -> &'static str {
    match base {
        "TypeOK" => "Inductive(TypeOK)",
        "I11" => "Inductive(I11)",
        "I12" => "Inductive(I12)",
        "I13" => "Inductive(I13)",
        "I14" => "Inductive(I14)",
        "I15" => "Inductive(I15)",
        "I26" => "Inductive(I26)",
        "I27" => "Inductive(I27)",
        "I28" => "Inductive(I28)",
        "I29" => "Inductive(I29)",
        "I30" => "Inductive(I30)",
        "I31" => "Inductive(I31)",
        "I32" => "Inductive(I32)",
        other => other,
    }
}

struct Expansion {
    succ: Vec<(ActionInstance, SentState)>,
    /// Indexes into `succ` whose transition fails the stability lemma.
    sas_fails: Vec<(usize, CheckResult)>,
}

/// Visits every state reachable from the empty set within the scope's depth
/// limit, deduplicated by canonical encoding, running the selected checks on
/// each state and the stability lemma on each transition.
pub fn explore(scope: &Scope, opts: &ExploreOptions) -> ExplorationReport {
    explore_detailed(scope, opts).0
}

/// `explore`, also returning the visited and terminal state encodings.
pub fn explore_detailed(
    scope: &Scope,
    opts: &ExploreOptions,
) -> (ExplorationReport, ExplorationDetail) {
    let start = Instant::now();
    let quorums = scope.quorum_system();
    let workers = opts.workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("building worker pool");

    let mut visited: HashMap<SentState, u32> = HashMap::new();
    // Per state id: the discovering (parent, action) and whether the
    // inductive invariant failed (first failing name).
    let mut parents: Vec<Option<(u32, ActionInstance)>> = Vec::new();
    let mut inv_fail: Vec<Option<&'static str>> = Vec::new();

    let mut violations: Vec<Violation> = Vec::new();
    let mut seen_names: Vec<&'static str> = Vec::new();
    let record = |violations: &mut Vec<Violation>,
                      seen: &mut Vec<&'static str>,
                      check: CheckResult,
                      state: &SentState,
                      trace: Vec<ActionInstance>| {
        if !seen.contains(&check.name) {
            seen.push(check.name);
            violations.push(Violation {
                check,
                state: state.clone(),
                trace,
            });
        }
    };
    let trace_to = |parents: &Vec<Option<(u32, ActionInstance)>>, id: u32| {
        let mut acts = Vec::new();
        let mut cur = id;
        while let Some((p, a)) = &parents[cur as usize] {
            acts.push(a.clone());
            cur = *p;
        }
        acts.reverse();
        acts
    };

    let init = SentState::empty();
    visited.insert(init.clone(), 0);
    parents.push(None);
    let (init_fails, init_inv) = run_state_checks(&init, scope, &quorums, &opts.checks, opts.inductive);
    inv_fail.push(init_inv);
    for f in init_fails {
        record(&mut violations, &mut seen_names, f, &init, Vec::new());
    }

    let mut frontier: Vec<(u32, SentState)> = vec![(0, init)];
    let mut depth: u32 = 0;
    let mut max_depth: u32 = 0;
    let mut transitions: u64 = 0;
    let mut terminal_encodings: Vec<Vec<u8>> = Vec::new();
    let mut complete = true;
    let mut cap_hit = false;

    while !frontier.is_empty() {
        if let Some(limit) = scope.depth_limit {
            if depth >= limit {
                complete = false;
                break;
            }
        }
        if visited.len() >= opts.state_cap {
            complete = false;
            cap_hit = true;
            break;
        }

        let sel = opts.checks;
        let expansions: Vec<Expansion> = pool.install(|| {
            use rayon::prelude::*;
            frontier
                .par_iter()
                .map(|(_, s)| {
                    let succ = successors(s, scope);
                    let mut sas_fails = Vec::new();
                    if sel.safe_at_stable {
                        for (i, (_, next)) in succ.iter().enumerate() {
                            let r = check_safe_at_stable(s, next, scope, &quorums);
                            if r.failed() {
                                sas_fails.push((i, r));
                            }
                        }
                    }
                    Expansion { succ, sas_fails }
                })
                .collect()
        });

        // Merge sequentially in frontier order. New states get ids in
        // discovery order, which fixes the canonical tie-break.
        let mut new_states: Vec<(u32, SentState)> = Vec::new();
        // (src_id, action, dst_id, dst_is_new) per transition, in order.
        let mut level_transitions: Vec<(u32, ActionInstance, u32)> = Vec::new();
        for ((src_id, src_state), exp) in frontier.iter().zip(expansions) {
            if exp.succ.is_empty() {
                terminal_encodings.push(src_state.canonical_encoding());
            }
            let mut sas_iter = exp.sas_fails.into_iter().peekable();
            for (i, (act, dst)) in exp.succ.into_iter().enumerate() {
                transitions += 1;
                if let Some((fi, _)) = sas_iter.peek() {
                    if *fi == i {
                        let (_, r) = sas_iter.next().unwrap();
                        let mut trace = trace_to(&parents, *src_id);
                        trace.push(act.clone());
                        record(&mut violations, &mut seen_names, r, &dst, trace);
                    }
                }
                let dst_id = match visited.get(&dst) {
                    Some(id) => *id,
                    None => {
                        let id = visited.len() as u32;
                        visited.insert(dst.clone(), id);
                        parents.push(Some((*src_id, act.clone())));
                        inv_fail.push(None); // filled after checks below
                        new_states.push((id, dst));
                        id
                    }
                };
                level_transitions.push((*src_id, act, dst_id));
            }
        }

        // Check the newly discovered states in parallel, in discovery order.
        let check_results: Vec<(Vec<CheckResult>, Option<&'static str>)> = pool.install(|| {
            use rayon::prelude::*;
            new_states
                .par_iter()
                .map(|(_, s)| run_state_checks(s, scope, &quorums, &sel, opts.inductive))
                .collect()
        });
        for ((id, state), (fails, inv)) in new_states.iter().zip(check_results) {
            inv_fail[*id as usize] = inv;
            if !fails.is_empty() {
                let trace = trace_to(&parents, *id);
                for f in fails {
                    record(&mut violations, &mut seen_names, f, state, trace.clone());
                }
            }
        }

        if opts.inductive {
            for (src_id, act, dst_id) in &level_transitions {
                if inv_fail[*src_id as usize].is_none() {
                    if let Some(base) = inv_fail[*dst_id as usize] {
                        let name = inductive_name(base);
                        if !seen_names.contains(&name) {
                            let mut trace = trace_to(&parents, *src_id);
                            trace.push(act.clone());
                            let state = act.apply(
                                visited
                                    .iter()
                                    .find(|(_, id)| *id == src_id)
                                    .map(|(s, _)| s)
                                    .expect("source state present"),
                            );
                            record(
                                &mut violations,
                                &mut seen_names,
                                CheckResult {
                                    name,
                                    status: crate::invariants::CheckStatus::Fails,
                                    witness: None,
                                },
                                &state,
                                trace,
                            );
                        }
                    }
                }
            }
        }

        if !new_states.is_empty() {
            max_depth = depth + 1;
        }
        frontier = new_states;
        depth += 1;
    }

    let mut visited_encodings: Vec<Vec<u8>> = visited.keys().map(|s| s.canonical_encoding()).collect();
    visited_encodings.sort();
    terminal_encodings.sort();

    let report = ExplorationReport {
        scope: scope.clone(),
        states_visited: visited.len() as u64,
        transitions,
        max_depth_reached: max_depth,
        violations,
        duration_ms: start.elapsed().as_millis() as u64,
        complete,
        state_cap_hit: cap_hit,
    };
    (
        report,
        ExplorationDetail {
            visited_encodings,
            terminal_encodings,
        },
    )
}

/// `explore` with the per-transition inductiveness assertion switched on:
/// confirms the empty set satisfies the invariant suite and that every
/// explored transition preserves it, reporting the first break.
pub fn inductive_check(scope: &Scope, opts: &ExploreOptions) -> ExplorationReport {
    let mut opts = opts.clone();
    opts.inductive = true;
    explore(scope, &opts)
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {step} ({action}) is not enabled: guard '{guard}' failed ({detail})")]
    Disabled {
        /// 1-based index of the first disabled step.
        step: usize,
        action: String,
        guard: &'static str,
        detail: String,
    },
}

/// Replays a trace from the empty set, checking each action is enabled (same
/// phase, same delta) before applying it. On failure the error names the
/// first violated guard of the disabled step.
pub fn replay(trace: &[ActionInstance], scope: &Scope) -> Result<SentState, ReplayError> {
    let mut state = SentState::empty();
    for (i, step) in trace.iter().enumerate() {
        let enabled = successors(&state, scope);
        let found = enabled
            .iter()
            .find(|(a, _)| a.name() == step.name() && a.delta == step.delta);
        match found {
            Some((_, next)) => state = next.clone(),
            None => {
                let (guard, detail) = diagnose_disabled(&state, step, scope);
                return Err(ReplayError::Disabled {
                    step: i + 1,
                    action: step.name().to_string(),
                    guard,
                    detail,
                });
            }
        }
    }
    Ok(state)
}

/// Explains why a step is disabled, naming the specific guard conjunct.
pub(crate) fn diagnose_disabled(
    s: &SentState,
    step: &ActionInstance,
    scope: &Scope,
) -> (&'static str, String) {
    use crate::domain::Message;
    if s.contains_all(&step.delta) {
        return (
            "idempotent-delta",
            "the action adds no new message (stuttering)".to_string(),
        );
    }
    match step.name() {
        "phase2a" => {
            let bal = step.delta.first().map(|m| m.bal());
            if let Some(b) = bal {
                let existing = s.iter().any(|m| {
                    matches!(m, Message::TwoA { bal, .. } | Message::MultiTwoA { bal, .. } if *bal == b)
                });
                if existing {
                    return (
                        "no-existing-2a-at-ballot",
                        format!("a 2a message with ballot {b} is already in sent"),
                    );
                }
                let has_coverage = if scope.variant.is_basic() {
                    !crate::protocol_basic::enabled_phase2a(s, scope).is_empty()
                } else {
                    scope
                        .proposer_ids()
                        .any(|p| !crate::protocol_multi::enabled_phase2a_multi(s, p, scope).is_empty())
                };
                if !has_coverage {
                    return (
                        "quorum-1b-coverage",
                        format!("no quorum is covered by 1b messages at ballot {b}"),
                    );
                }
            }
            (
                "value-selection-rule",
                "the proposed content is not admissible for any covered quorum".to_string(),
            )
        }
        "phase1b" => (
            "ballot-above-prior-responses",
            "the 1a ballot is not strictly above every prior 1b/2b ballot of the acceptor"
                .to_string(),
        ),
        "phase2b" => (
            "ballot-at-least-prior-responses",
            "the 2a ballot is below some prior 1b/2b ballot of the acceptor".to_string(),
        ),
        "phase1a" => (
            "preempt-ballot-rule",
            "the ballot does not exceed an applicable preempt notice".to_string(),
        ),
        _ => (
            "preempt-guard",
            "no response of the acceptor strictly exceeds the target message's ballot".to_string(),
        ),
    }
}
