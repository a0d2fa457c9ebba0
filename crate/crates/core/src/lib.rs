//! Executable message-history specifications of Paxos: protocol state is a
//! single monotone set of sent messages, and a bounded explorer plus a
//! seeded simulator check type, message, and agreement invariants over it.
//!
//! Four protocol variants are covered: single-decree (`basic`), single-decree
//! with the unique-ballot guard of phase 2a removed (`basic-unsafe-2a`,
//! which is not safe and exists to be caught), multi-decree (`multi`), and
//! multi-decree with preemption (`multi-preempt`).

pub mod action;
pub mod cli;
pub mod domain;
pub mod explorer;
pub mod invariants;
pub mod protocol_basic;
pub mod protocol_multi;
pub mod simulator;

pub use action::{successors, ActionInstance, ActionParams};
pub use domain::{
    majority_quorums, validate_quorum_system, AcceptorId, Ballot, Decree, MaybeValue, Message,
    ProposerId, QuorumSpec, QuorumSystem, Scope, ScopeError, SentState, Slot, Value, Variant,
    Vote,
};
pub use explorer::{
    explore, explore_detailed, inductive_check, replay, CheckSelection, ExplorationReport,
    ExploreOptions, ReplayError, Violation, DEFAULT_STATE_CAP,
};
pub use invariants::{CheckResult, CheckStatus};
pub use simulator::{
    run_scenario, scenario_scope, simulate, simulate_with_mode, ChosenReport, HaltReason,
    RunRecord, SampleMode,
};
