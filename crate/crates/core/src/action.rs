//! Action instances: a named phase with its parameter binding plus the exact
//! message delta it adds to the sent set.

use crate::domain::{
    AcceptorId, Ballot, DecreeSet, MaybeValue, Message, ProposerId, Scope, SentState, Value,
    Variant,
};

/// Parameter binding of one enabled action. The binding together with the
/// delta suffices to replay the action deterministically. Where an action's
/// existential witnesses do not affect the delta (the quorum and 1b-subset of
/// phase 2a), the canonically smallest witness is recorded.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ActionParams {
    Phase1a {
        bal: Ballot,
    },
    Phase1b {
        acc: AcceptorId,
        bal: Ballot,
        max_vbal: Ballot,
        max_val: MaybeValue,
    },
    Phase2a {
        bal: Ballot,
        val: Value,
        quorum: Vec<AcceptorId>,
        support: Vec<Message>,
    },
    Phase2b {
        acc: AcceptorId,
        bal: Ballot,
        val: Value,
    },
    MultiPhase1a {
        proposer: ProposerId,
        bal: Ballot,
    },
    MultiPhase1b {
        acc: AcceptorId,
        bal: Ballot,
    },
    MultiPhase2a {
        proposer: ProposerId,
        bal: Ballot,
        quorum: Vec<AcceptorId>,
        support: Vec<Message>,
        new_decrees: DecreeSet,
    },
    MultiPhase2b {
        acc: AcceptorId,
        bal: Ballot,
    },
    Preempt {
        acc: AcceptorId,
        to: ProposerId,
        bal: Ballot,
    },
}

/// A named phase with parameters and the messages it adds. `delta` holds only
/// the messages not already in the source state (an action whose send adds
/// nothing is stuttering and is never emitted), kept sorted and unique, so
/// `|state'| - |state| = |delta|` for every application.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ActionInstance {
    pub params: ActionParams,
    pub delta: Vec<Message>,
}

impl ActionInstance {
    pub fn new(params: ActionParams, mut delta: Vec<Message>) -> Self {
        delta.sort();
        delta.dedup();
        ActionInstance { params, delta }
    }

    /// The phase name as used in traces.
    pub fn name(&self) -> &'static str {
        match self.params {
            ActionParams::Phase1a { .. } | ActionParams::MultiPhase1a { .. } => "phase1a",
            ActionParams::Phase1b { .. } | ActionParams::MultiPhase1b { .. } => "phase1b",
            ActionParams::Phase2a { .. } | ActionParams::MultiPhase2a { .. } => "phase2a",
            ActionParams::Phase2b { .. } | ActionParams::MultiPhase2b { .. } => "phase2b",
            ActionParams::Preempt { .. } => "preempt",
        }
    }

    /// Applies the delta, yielding `sent ∪ delta`.
    pub fn apply(&self, s: &SentState) -> SentState {
        s.with_all(&self.delta)
    }
}

/// Enabled actions of `s` under the scope's variant, sorted canonically.
/// Stuttering (empty-delta) successors are excluded, so every successor is
/// strictly larger than `s`.
pub fn successors(s: &SentState, scope: &Scope) -> Vec<(ActionInstance, SentState)> {
    let actions = match scope.variant {
        Variant::Basic | Variant::BasicUnsafe2a => crate::protocol_basic::enabled_actions(s, scope),
        Variant::Multi | Variant::MultiPreempt => crate::protocol_multi::enabled_actions(s, scope),
    };
    actions
        .into_iter()
        .map(|a| {
            let next = a.apply(s);
            (a, next)
        })
        .collect()
}
