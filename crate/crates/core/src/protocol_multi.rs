//! Enabled-action enumeration for multi-decree Paxos and its preemption
//! extension: per-proposer actions, slots, decree sets, and the preempt
//! notice.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::action::{ActionInstance, ActionParams};
use crate::domain::{
    AcceptorId, Ballot, Decree, DecreeSet, Message, ProposerId, QuorumSystem, Scope, SentState,
    Slot, Vote, VoteSet,
};

/// The 1b and 2b messages acceptor `a` has sent.
pub fn sent1b2b(s: &SentState, a: AcceptorId) -> Vec<Message> {
    s.iter()
        .filter(|m| {
            matches!(m,
                Message::MultiOneB { from, .. } | Message::MultiTwoB { from, .. } if *from == a)
        })
        .cloned()
        .collect()
}

fn max_sent1b2b_ballot(s: &SentState, a: AcceptorId) -> Ballot {
    s.iter()
        .filter_map(|m| match m {
            Message::MultiOneB { from, bal, .. } | Message::MultiTwoB { from, bal, .. }
                if *from == a =>
            {
                Some(*bal)
            }
            _ => None,
        })
        .max()
        .unwrap_or(Ballot::NEVER)
}

/// The (ballot, slot, value) triples acceptor `a` has voted for, projected
/// from its 2b messages.
pub fn voteds(s: &SentState, a: AcceptorId) -> VoteSet {
    s.iter()
        .filter_map(|m| match m {
            Message::MultiTwoB {
                from,
                bal,
                slot,
                val,
            } if *from == a => Some(Vote {
                bal: *bal,
                slot: *slot,
                val: *val,
            }),
            _ => None,
        })
        .collect()
}

/// The subset of `t` keeping, per slot, only the maximal-ballot votes.
/// Ties (same slot, same maximal ballot, different values) are all retained.
pub fn partial_bmax(t: &VoteSet) -> VoteSet {
    t.iter()
        .filter(|v| {
            t.iter()
                .all(|v2| v.slot != v2.slot || v.bal >= v2.bal)
        })
        .copied()
        .collect()
}

/// Slot/value projection of `partial_bmax(t)`.
pub fn bmax(t: &VoteSet) -> DecreeSet {
    partial_bmax(t)
        .iter()
        .map(|v| Decree {
            slot: v.slot,
            val: v.val,
        })
        .collect()
}

/// Slots in scope with no vote in `t`.
pub fn free_slots(t: &VoteSet, scope: &Scope) -> Vec<Slot> {
    scope
        .slots()
        .filter(|s| t.iter().all(|v| v.slot != *s))
        .collect()
}

/// Every decree set over the free slots of `t` with pairwise-distinct slots
/// and at most `max_new_proposals_per_2a` decrees, including the empty set.
/// The underlying action picks one such set nondeterministically; checking
/// must branch over all of them.
pub fn new_proposal_choices(t: &VoteSet, scope: &Scope) -> Vec<DecreeSet> {
    let free = free_slots(t, scope);
    let mut out = vec![DecreeSet::new()];
    fn extend(
        free: &[Slot],
        scope: &Scope,
        cur: &DecreeSet,
        start: usize,
        remaining: u8,
        out: &mut Vec<DecreeSet>,
    ) {
        if remaining == 0 {
            return;
        }
        for i in start..free.len() {
            for val in scope.values() {
                let mut next = cur.clone();
                next.insert(Decree { slot: free[i], val });
                out.push(next.clone());
                extend(free, scope, &next, i + 1, remaining - 1, out);
            }
        }
    }
    extend(
        &free,
        scope,
        &DecreeSet::new(),
        0,
        scope.max_new_proposals_per_2a,
        &mut out,
    );
    out.sort();
    out
}

/// Union of the voted sets of the members of `support` sent by quorum
/// members.
pub fn vs(support: &[&Message], quorum: &BTreeSet<AcceptorId>) -> VoteSet {
    let mut t = VoteSet::new();
    for m in support {
        if let Message::MultiOneB { from, voted, .. } = m {
            if quorum.contains(from) {
                t.extend(voted.iter().copied());
            }
        }
    }
    t
}

/// Phase 1a: for plain multi-decree every ballot is enabled; with preemption
/// a proposer that has been preempted must move above the preempting ballot,
/// and only a preempt above all of its prior 1a ballots counts.
pub fn enabled_phase1a_multi(s: &SentState, p: ProposerId, scope: &Scope) -> Vec<ActionInstance> {
    let ballot_enabled: Box<dyn Fn(Ballot) -> bool> = if scope.variant.has_preemption() {
        let preempts: Vec<Ballot> = s
            .iter()
            .filter_map(|m| match m {
                Message::Preempt { to, bal } if *to == p => Some(*bal),
                _ => None,
            })
            .collect();
        if preempts.is_empty() {
            Box::new(|_| true)
        } else {
            let max_prior_1a = s
                .iter()
                .filter_map(|m| match m {
                    Message::MultiOneA { from, bal } if *from == p => Some(*bal),
                    _ => None,
                })
                .max()
                .unwrap_or(Ballot::NEVER);
            let threshold = preempts.iter().copied().filter(|b| *b > max_prior_1a).min();
            match threshold {
                None => Box::new(|_| false),
                Some(t) => Box::new(move |b| b > t),
            }
        }
    } else {
        Box::new(|_| true)
    };
    scope
        .ballots()
        .filter(|b| ballot_enabled(*b))
        .filter_map(|bal| {
            let msg = Message::MultiOneA { from: p, bal };
            if s.contains(&msg) {
                None
            } else {
                Some(ActionInstance::new(
                    ActionParams::MultiPhase1a { proposer: p, bal },
                    vec![msg],
                ))
            }
        })
        .collect()
}

/// Phase 1b: for each 1a ballot strictly above every 1b/2b ballot of `a`,
/// promise with one maximal vote per slot.
pub fn enabled_phase1b_multi(s: &SentState, a: AcceptorId) -> Vec<ActionInstance> {
    let threshold = max_sent1b2b_ballot(s, a);
    let voted = partial_bmax(&voteds(s, a));
    let mut bals: Vec<Ballot> = s
        .iter()
        .filter_map(|m| match m {
            Message::MultiOneA { bal, .. } => Some(*bal),
            _ => None,
        })
        .collect();
    bals.sort();
    bals.dedup();
    bals.into_iter()
        .filter(|bal| *bal > threshold)
        .filter_map(|bal| {
            let msg = Message::MultiOneB {
                from: a,
                bal,
                voted: voted.clone(),
            };
            if s.contains(&msg) {
                None
            } else {
                Some(ActionInstance::new(
                    ActionParams::MultiPhase1b { acc: a, bal },
                    vec![msg],
                ))
            }
        })
        .collect()
}

fn covers(quorum: &BTreeSet<AcceptorId>, support: &[&Message]) -> bool {
    quorum.iter().all(|a| {
        support
            .iter()
            .any(|m| matches!(m, Message::MultiOneB { from, .. } if from == a))
    })
}

/// Phase 2a: for each ballot with no existing 2a, each quorum covered by a
/// subset of that ballot's 1b messages, and each admissible fresh-decree set,
/// propose the maximal known decrees plus the fresh ones. Instances with
/// identical deltas are merged with the canonically smallest witness.
pub fn enabled_phase2a_multi(s: &SentState, p: ProposerId, scope: &Scope) -> Vec<ActionInstance> {
    phase2a_multi_instances(s, p, scope, &scope.quorum_system())
}

pub(crate) fn phase2a_multi_instances(
    s: &SentState,
    p: ProposerId,
    scope: &Scope,
    quorums: &QuorumSystem,
) -> Vec<ActionInstance> {
    type Witness = (BTreeSet<AcceptorId>, Vec<Message>, DecreeSet);
    let mut by_delta: BTreeMap<(Ballot, DecreeSet), Witness> = BTreeMap::new();
    for b in scope.ballots() {
        if s.iter()
            .any(|m| matches!(m, Message::MultiTwoA { bal, .. } if *bal == b))
        {
            continue;
        }
        let one_bs: Vec<&Message> = s
            .iter()
            .filter(|m| matches!(m, Message::MultiOneB { bal, .. } if *bal == b))
            .collect();
        if one_bs.is_empty() {
            continue;
        }
        assert!(one_bs.len() <= 20, "1b set too large to enumerate subsets");
        for quorum in quorums.iter() {
            for mask in 1u32..(1 << one_bs.len()) {
                let support: Vec<&Message> = one_bs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, m)| *m)
                    .collect();
                if !covers(quorum, &support) {
                    continue;
                }
                let t = vs(&support, quorum);
                let base = bmax(&t);
                for fresh in new_proposal_choices(&t, scope) {
                    let mut decrees = base.clone();
                    decrees.extend(fresh.iter().copied());
                    let witness: Witness = (
                        quorum.clone(),
                        support.iter().map(|m| (*m).clone()).collect(),
                        fresh,
                    );
                    by_delta
                        .entry((b, decrees))
                        .and_modify(|w| {
                            if witness < *w {
                                *w = witness.clone();
                            }
                        })
                        .or_insert(witness);
                }
            }
        }
    }
    by_delta
        .into_iter()
        .filter_map(|((bal, decrees), (quorum, support, fresh))| {
            let msg = Message::MultiTwoA {
                from: p,
                bal,
                decrees,
            };
            if s.contains(&msg) {
                return None;
            }
            Some(ActionInstance::new(
                ActionParams::MultiPhase2a {
                    proposer: p,
                    bal,
                    quorum: quorum.into_iter().collect(),
                    support,
                    new_decrees: fresh,
                },
                vec![msg],
            ))
        })
        .collect()
}

/// Phase 2b: for each 2a message whose ballot is at least every 1b/2b ballot
/// of `a`, vote for all of its decrees in one action. Only the messages not
/// already sent form the delta; actions adding nothing are suppressed.
pub fn enabled_phase2b_multi(s: &SentState, a: AcceptorId) -> Vec<ActionInstance> {
    let threshold = max_sent1b2b_ballot(s, a);
    let mut out = Vec::new();
    for m in s.iter() {
        let Message::MultiTwoA { bal, decrees, .. } = m else {
            continue;
        };
        if *bal < threshold {
            continue;
        }
        let delta: Vec<Message> = decrees
            .iter()
            .map(|d| Message::MultiTwoB {
                from: a,
                bal: *bal,
                slot: d.slot,
                val: d.val,
            })
            .filter(|msg| !s.contains(msg))
            .collect();
        if delta.is_empty() {
            continue;
        }
        out.push(ActionInstance::new(
            ActionParams::MultiPhase2b { acc: a, bal: *bal },
            delta,
        ));
    }
    out.sort();
    out.dedup();
    out
}

/// Preempt: if acceptor `a` has responded at a ballot strictly above that of
/// some 1a or 2a message, tell that message's sender the highest ballot `a`
/// has responded at. A duplicate 1a at the current maximum does not trigger
/// preemption (the comparison is strict).
pub fn enabled_preempt(s: &SentState, a: AcceptorId) -> Vec<ActionInstance> {
    let m2max = max_sent1b2b_ballot(s, a);
    if !m2max.is_real() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for m in s.iter() {
        let (from, bal) = match m {
            Message::MultiOneA { from, bal } => (*from, *bal),
            Message::MultiTwoA { from, bal, .. } => (*from, *bal),
            _ => continue,
        };
        if m2max <= bal {
            continue;
        }
        let msg = Message::Preempt {
            to: from,
            bal: m2max,
        };
        if s.contains(&msg) {
            continue;
        }
        out.push(ActionInstance::new(
            ActionParams::Preempt {
                acc: a,
                to: from,
                bal: m2max,
            },
            vec![msg],
        ));
    }
    out.sort();
    out.dedup();
    out
}

/// All enabled multi-decree actions of `s`, sorted canonically.
pub(crate) fn enabled_actions(s: &SentState, scope: &Scope) -> Vec<ActionInstance> {
    debug_assert!(scope.variant.is_multi());
    let quorums = scope.quorum_system();
    let mut out = Vec::new();
    for p in scope.proposer_ids() {
        out.extend(enabled_phase1a_multi(s, p, scope));
        out.extend(phase2a_multi_instances(s, p, scope, &quorums));
    }
    for a in scope.acceptor_ids() {
        out.extend(enabled_phase1b_multi(s, a));
        out.extend(enabled_phase2b_multi(s, a));
        if scope.variant.has_preemption() {
            out.extend(enabled_preempt(s, a));
        }
    }
    out.sort();
    out
}

/// Enabled actions paired with their successor states; each successor is
/// strictly larger than `s`.
pub fn successors_multi(s: &SentState, scope: &Scope) -> Vec<(ActionInstance, SentState)> {
    enabled_actions(s, scope)
        .into_iter()
        .map(|a| {
            let next = a.apply(s);
            (a, next)
        })
        .collect()
}
