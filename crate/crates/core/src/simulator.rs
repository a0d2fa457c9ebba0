//! Seeded randomized executions and scripted scenarios. A run repeatedly
//! fires one uniformly sampled enabled action; since actions read from the
//! persistent sent set, delay, duplication, and loss are modeled implicitly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::action::{successors, ActionInstance, ActionParams};
use crate::domain::{
    AcceptorId, Ballot, MaybeValue, Message, Scope, SentState, Slot, Value, Variant,
};
use crate::explorer::diagnose_disabled;
use crate::invariants::{check_agree, check_type_ok, chosen, chosen_multi, CheckResult};

/// Values decided in a final state: per value for the single-decree
/// variants, per (slot, value) for the multi-decree ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ChosenReport {
    Basic(Vec<Value>),
    Multi(Vec<(Slot, Value)>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HaltReason {
    MaxSteps,
    NoEnabledAction,
    CheckFailure,
    /// A scripted step was not enabled; carries the failed guard.
    DisabledStep {
        step: usize,
        action: String,
        guard: &'static str,
        detail: String,
    },
}

/// Full record of one run: replaying `trace` from the empty set reproduces
/// `final_state`, and the same seed and scope produce an identical record.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub scope: Scope,
    pub seed: Option<u64>,
    pub steps: u32,
    pub trace: Vec<ActionInstance>,
    pub final_state: SentState,
    pub chosen: ChosenReport,
    pub check_failures: Vec<CheckResult>,
    pub halt: HaltReason,
}

impl RunRecord {
    pub fn clean(&self) -> bool {
        self.check_failures.is_empty()
    }
}

pub fn chosen_report(s: &SentState, scope: &Scope) -> ChosenReport {
    let quorums = scope.quorum_system();
    if scope.variant.is_basic() {
        ChosenReport::Basic(scope.values().filter(|v| chosen(s, *v, &quorums)).collect())
    } else {
        let mut out = Vec::new();
        for slot in scope.slots() {
            for v in scope.values() {
                if chosen_multi(s, slot, v, &quorums) {
                    out.push((slot, v));
                }
            }
        }
        ChosenReport::Multi(out)
    }
}

/// How the scheduler picks among enabled actions.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SampleMode {
    /// Uniform over enabled instances (the default scheduler).
    #[default]
    Uniform,
    /// Pick a phase first among phases with an enabled instance, then an
    /// instance of that phase; only tunes coverage, never enables more.
    KindWeighted,
}

/// Runs `max_steps` sampled enabled actions from the empty set, checking
/// types and agreement online. The run halts early when no action is enabled
/// or a check fails (the failure is recorded, not raised). The generator is
/// ChaCha8 seeded with `seed`, so records are reproducible.
pub fn simulate(scope: &Scope, seed: u64, max_steps: u32) -> RunRecord {
    simulate_with_mode(scope, seed, max_steps, SampleMode::Uniform)
}

pub fn simulate_with_mode(
    scope: &Scope,
    seed: u64,
    max_steps: u32,
    mode: SampleMode,
) -> RunRecord {
    let quorums = scope.quorum_system();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = SentState::empty();
    let mut trace = Vec::new();
    let mut check_failures = Vec::new();
    let mut halt = HaltReason::MaxSteps;
    for _ in 0..max_steps {
        let succ = successors(&state, scope);
        if succ.is_empty() {
            halt = HaltReason::NoEnabledAction;
            break;
        }
        let pick = match mode {
            SampleMode::Uniform => rng.gen_range(0..succ.len()),
            SampleMode::KindWeighted => {
                let mut kinds: Vec<&'static str> = succ.iter().map(|(a, _)| a.name()).collect();
                kinds.dedup();
                let kind = kinds[rng.gen_range(0..kinds.len())];
                let of_kind: Vec<usize> = succ
                    .iter()
                    .enumerate()
                    .filter(|(_, (a, _))| a.name() == kind)
                    .map(|(i, _)| i)
                    .collect();
                of_kind[rng.gen_range(0..of_kind.len())]
            }
        };
        let (act, next) = succ[pick].clone();
        state = next;
        trace.push(act);
        let type_ok = check_type_ok(&state, scope);
        let agree = check_agree(&state, scope, &quorums);
        if type_ok.failed() || agree.failed() {
            check_failures.extend([type_ok, agree].into_iter().filter(|r| r.failed()));
            halt = HaltReason::CheckFailure;
            break;
        }
    }
    let chosen = chosen_report(&state, scope);
    RunRecord {
        scope: scope.clone(),
        seed: Some(seed),
        steps: trace.len() as u32,
        trace,
        final_state: state,
        chosen,
        check_failures,
        halt,
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("unknown scenario {0:?} (available: appendix-f, appendix-f-safe)")]
    Unknown(String),
    #[error("scenario {0} needs at least {1} acceptors")]
    TooFewAcceptors(&'static str, u8),
}

pub const SCENARIO_NAMES: &[&str] = &["appendix-f", "appendix-f-safe"];

/// The default scope a scenario runs under (overridable except for the
/// variant, which is part of the scenario's meaning).
pub fn scenario_scope(name: &str) -> Result<Scope, ScenarioError> {
    match name {
        "appendix-f" => Ok(Scope::basic(Variant::BasicUnsafe2a, 3, 1, 2)),
        "appendix-f-safe" => Ok(Scope::basic(Variant::Basic, 3, 1, 2)),
        other => Err(ScenarioError::Unknown(other.to_string())),
    }
}

/// The scripted run in which one ballot is used for two 2a proposals: a
/// proposer gathers promises from acceptors 0 and 1, proposes and gets the
/// first value chosen, then uses acceptor 2's late promise to propose again
/// at the same ballot, getting a second value chosen. Ten single-process
/// actions.
fn reused_ballot_script(scope: &Scope) -> Vec<ActionInstance> {
    let b = Ballot(0);
    let v1 = Value(0);
    let v2 = Value(if scope.value_domain.len() > 1 { 1 } else { 0 });
    let one_b = |a: u8| Message::OneB {
        acc: AcceptorId(a),
        bal: b,
        max_vbal: Ballot::NEVER,
        max_val: MaybeValue::None,
    };
    let promise = |a: u8| {
        ActionInstance::new(
            ActionParams::Phase1b {
                acc: AcceptorId(a),
                bal: b,
                max_vbal: Ballot::NEVER,
                max_val: MaybeValue::None,
            },
            vec![one_b(a)],
        )
    };
    let propose = |v: Value, q: [u8; 2]| {
        ActionInstance::new(
            ActionParams::Phase2a {
                bal: b,
                val: v,
                quorum: q.iter().map(|a| AcceptorId(*a)).collect(),
                support: q.iter().map(|a| one_b(*a)).collect(),
            },
            vec![Message::TwoA { bal: b, val: v }],
        )
    };
    let vote = |a: u8, v: Value| {
        ActionInstance::new(
            ActionParams::Phase2b {
                acc: AcceptorId(a),
                bal: b,
                val: v,
            },
            vec![Message::TwoB {
                acc: AcceptorId(a),
                bal: b,
                val: v,
            }],
        )
    };
    vec![
        ActionInstance::new(ActionParams::Phase1a { bal: b }, vec![Message::OneA { bal: b }]),
        promise(0),
        promise(1),
        propose(v1, [0, 1]),
        vote(0, v1),
        vote(1, v1),
        promise(2),
        propose(v2, [0, 2]),
        vote(0, v2),
        vote(2, v2),
    ]
}

/// Runs a named scripted scenario under `scope`, stepping through the script
/// with online checks. A disabled step halts the run with the failed guard
/// named; a check failure halts it flagged.
pub fn run_scenario(name: &str, scope: &Scope) -> Result<RunRecord, ScenarioError> {
    let script = match name {
        "appendix-f" | "appendix-f-safe" => {
            if scope.n_acceptors < 3 {
                return Err(ScenarioError::TooFewAcceptors(
                    if name == "appendix-f" { "appendix-f" } else { "appendix-f-safe" },
                    3,
                ));
            }
            reused_ballot_script(scope)
        }
        other => return Err(ScenarioError::Unknown(other.to_string())),
    };

    let quorums = scope.quorum_system();
    let mut state = SentState::empty();
    let mut trace = Vec::new();
    let mut check_failures = Vec::new();
    let mut halt = HaltReason::MaxSteps;
    for (i, step) in script.iter().enumerate() {
        let enabled = successors(&state, scope);
        let found = enabled
            .iter()
            .find(|(a, _)| a.name() == step.name() && a.delta == step.delta);
        match found {
            Some((act, next)) => {
                state = next.clone();
                trace.push(act.clone());
            }
            None => {
                let (guard, detail) = diagnose_disabled(&state, step, scope);
                halt = HaltReason::DisabledStep {
                    step: i + 1,
                    action: step.name().to_string(),
                    guard,
                    detail,
                };
                break;
            }
        }
        let type_ok = check_type_ok(&state, scope);
        let agree = check_agree(&state, scope, &quorums);
        if type_ok.failed() || agree.failed() {
            check_failures.extend([type_ok, agree].into_iter().filter(|r| r.failed()));
            halt = HaltReason::CheckFailure;
            break;
        }
    }
    if matches!(halt, HaltReason::MaxSteps) {
        halt = HaltReason::NoEnabledAction;
    }
    let chosen = chosen_report(&state, scope);
    Ok(RunRecord {
        scope: scope.clone(),
        seed: None,
        steps: trace.len() as u32,
        trace,
        final_state: state,
        chosen,
        check_failures,
        halt,
    })
}
