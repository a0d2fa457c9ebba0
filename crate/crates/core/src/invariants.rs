//! Executable predicates over the sent set: the voting/chosen/safety
//! operators, per-variant type and message invariant suites, the agreement
//! property, and the proof lemmas as runtime checks.

use crate::domain::{
    AcceptorId, Ballot, MaybeValue, Message, ProposerId, QuorumSystem, Scope, SentState, Slot,
    Value, Variant,
};

/// One variable binding of a failure witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WitnessValue {
    Msg(Message),
    Bal(Ballot),
    Val(Value),
    Slot(Slot),
    Acceptor(AcceptorId),
    Proposer(ProposerId),
    Quorum(Vec<AcceptorId>),
}

pub type Witness = Vec<(&'static str, WitnessValue)>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckStatus {
    Holds,
    Fails,
}

/// Outcome of evaluating one named invariant on a state (or transition).
/// A witness is present exactly when the check fails, and re-substituting it
/// into the predicate falsifies it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub witness: Option<Witness>,
}

impl CheckResult {
    fn holds(name: &'static str) -> Self {
        CheckResult {
            name,
            status: CheckStatus::Holds,
            witness: None,
        }
    }

    fn fails(name: &'static str, witness: Witness) -> Self {
        CheckResult {
            name,
            status: CheckStatus::Fails,
            witness: Some(witness),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fails
    }
}

/// Acceptor `a` has voted value `v` at ballot `b`.
pub fn voted_for_in(s: &SentState, a: AcceptorId, v: Value, b: Ballot) -> bool {
    s.contains(&Message::TwoB {
        acc: a,
        bal: b,
        val: v,
    })
}

/// Acceptor `a` has voted value `v` at ballot `b` for slot `slot`.
pub fn voted_for_in_multi(s: &SentState, a: AcceptorId, b: Ballot, slot: Slot, v: Value) -> bool {
    s.contains(&Message::MultiTwoB {
        from: a,
        bal: b,
        slot,
        val: v,
    })
}

/// Some quorum voted `v`, each member at some (possibly different) ballot.
pub fn chosen(s: &SentState, v: Value, quorums: &QuorumSystem) -> bool {
    quorums.iter().any(|q| {
        q.iter().all(|a| {
            s.iter()
                .any(|m| matches!(m, Message::TwoB { acc, val, .. } if acc == a && *val == v))
        })
    })
}

/// Some quorum voted `v`, all members at the single ballot `b`.
pub fn chosen_in(s: &SentState, v: Value, b: Ballot, quorums: &QuorumSystem) -> bool {
    quorums
        .iter()
        .any(|q| q.iter().all(|a| voted_for_in(s, *a, v, b)))
}

/// Some quorum voted `v` for `slot`, each member at some ballot.
pub fn chosen_multi(s: &SentState, slot: Slot, v: Value, quorums: &QuorumSystem) -> bool {
    quorums.iter().any(|q| {
        q.iter().all(|a| {
            s.iter().any(|m| {
                matches!(m, Message::MultiTwoB { from, slot: sl, val, .. }
                    if from == a && *sl == slot && *val == v)
            })
        })
    })
}

/// Some quorum voted `v` for `slot`, all members at the single ballot `b`.
pub fn chosen_in_multi(
    s: &SentState,
    slot: Slot,
    v: Value,
    b: Ballot,
    quorums: &QuorumSystem,
) -> bool {
    quorums
        .iter()
        .any(|q| q.iter().all(|a| voted_for_in_multi(s, *a, b, slot, v)))
}

/// Acceptor `a` did not vote at ballot `b` and has responded at a higher
/// ballot, so it never will.
pub fn wont_vote_in(s: &SentState, a: AcceptorId, b: Ballot, scope: &Scope) -> bool {
    scope.values().all(|v| !voted_for_in(s, a, v, b))
        && s.iter().any(|m| match m {
            Message::OneB { acc, bal, .. } | Message::TwoB { acc, bal, .. } => {
                *acc == a && *bal > b
            }
            _ => false,
        })
}

/// No value other than `v` has been or can be chosen at any ballot below `b`.
pub fn safe_at(s: &SentState, v: Value, b: Ballot, scope: &Scope, quorums: &QuorumSystem) -> bool {
    (0..b.0).all(|b2| {
        let b2 = Ballot(b2);
        quorums.iter().any(|q| {
            q.iter()
                .all(|a| voted_for_in(s, *a, v, b2) || wont_vote_in(s, *a, b2, scope))
        })
    })
}

/// Per-slot analog of `wont_vote_in`: the higher-ballot response promise is
/// slot-independent, the no-vote conjunct is per slot.
pub fn wont_vote_in_multi(
    s: &SentState,
    a: AcceptorId,
    b: Ballot,
    slot: Slot,
    scope: &Scope,
) -> bool {
    scope
        .values()
        .all(|v| !voted_for_in_multi(s, a, b, slot, v))
        && s.iter().any(|m| match m {
            Message::MultiOneB { from, bal, .. } | Message::MultiTwoB { from, bal, .. } => {
                *from == a && *bal > b
            }
            _ => false,
        })
}

/// No value other than `v` has been or can be chosen for `slot` at any ballot
/// below `b`.
pub fn safe_at_multi(
    s: &SentState,
    b: Ballot,
    slot: Slot,
    v: Value,
    scope: &Scope,
    quorums: &QuorumSystem,
) -> bool {
    (0..b.0).all(|b2| {
        let b2 = Ballot(b2);
        quorums.iter().any(|q| {
            q.iter().all(|a| {
                voted_for_in_multi(s, *a, b2, slot, v) || wont_vote_in_multi(s, *a, b2, slot, scope)
            })
        })
    })
}

fn msg_witness(m: &Message) -> Witness {
    vec![("m", WitnessValue::Msg(m.clone()))]
}

/// Structural validity of every sent message for the scope's variant:
/// the right message family, fields in their domains, and the sentinel
/// coupling on 1b messages (`maxVBal = -1` iff `maxVal` is the placeholder).
pub fn check_type_ok(s: &SentState, scope: &Scope) -> CheckResult {
    for m in s.iter() {
        let ok = match (scope.variant.is_basic(), m) {
            (true, Message::OneA { bal }) => scope.ballot_in_range(*bal),
            (true, Message::OneB { acc, bal, max_vbal, max_val }) => {
                acc.0 < scope.n_acceptors
                    && scope.ballot_in_range(*bal)
                    && match (max_vbal, max_val) {
                        (Ballot(-1), MaybeValue::None) => true,
                        (b, MaybeValue::Val(v)) => {
                            scope.ballot_in_range(*b) && scope.value_in_range(*v)
                        }
                        _ => false,
                    }
            }
            (true, Message::TwoA { bal, val }) => {
                scope.ballot_in_range(*bal) && scope.value_in_range(*val)
            }
            (true, Message::TwoB { acc, bal, val }) => {
                acc.0 < scope.n_acceptors
                    && scope.ballot_in_range(*bal)
                    && scope.value_in_range(*val)
            }
            (false, Message::MultiOneA { from, bal }) => {
                from.0 < scope.n_proposers && scope.ballot_in_range(*bal)
            }
            (false, Message::MultiOneB { from, bal, voted }) => {
                from.0 < scope.n_acceptors
                    && scope.ballot_in_range(*bal)
                    && voted.iter().all(|v| {
                        scope.ballot_in_range(v.bal)
                            && scope.slot_in_range(v.slot)
                            && scope.value_in_range(v.val)
                    })
            }
            (false, Message::MultiTwoA { from, bal, decrees }) => {
                from.0 < scope.n_proposers
                    && scope.ballot_in_range(*bal)
                    && decrees
                        .iter()
                        .all(|d| scope.slot_in_range(d.slot) && scope.value_in_range(d.val))
            }
            (false, Message::MultiTwoB { from, bal, slot, val }) => {
                from.0 < scope.n_acceptors
                    && scope.ballot_in_range(*bal)
                    && scope.slot_in_range(*slot)
                    && scope.value_in_range(*val)
            }
            (false, Message::Preempt { to, bal }) => {
                scope.variant.has_preemption()
                    && to.0 < scope.n_proposers
                    && scope.ballot_in_range(*bal)
            }
            _ => false,
        };
        if !ok {
            return CheckResult::fails("TypeOK", msg_witness(m));
        }
    }
    CheckResult::holds("TypeOK")
}

/// The single-decree message invariant suite, one result per invariant.
pub fn check_msg_inv_basic(
    s: &SentState,
    scope: &Scope,
    quorums: &QuorumSystem,
) -> Vec<CheckResult> {
    let mut i11 = CheckResult::holds("I11");
    let mut i12 = CheckResult::holds("I12");
    let mut i13 = CheckResult::holds("I13");
    let mut i14 = CheckResult::holds("I14");
    let mut i15 = CheckResult::holds("I15");

    for m in s.iter() {
        match m {
            Message::OneB {
                acc,
                bal,
                max_vbal,
                max_val,
            } => {
                if !i11.failed() {
                    let voted = match max_val {
                        MaybeValue::Val(v) => voted_for_in(s, *acc, *v, *max_vbal),
                        MaybeValue::None => false,
                    };
                    if !(voted || *max_vbal == Ballot::NEVER) {
                        i11 = CheckResult::fails("I11", msg_witness(m));
                    }
                }
                if !i12.failed() {
                    'outer: for b2 in (max_vbal.0 + 1)..bal.0 {
                        for v in scope.values() {
                            if voted_for_in(s, *acc, v, Ballot(b2)) {
                                let mut w = msg_witness(m);
                                w.push(("b", WitnessValue::Bal(Ballot(b2))));
                                w.push(("v", WitnessValue::Val(v)));
                                i12 = CheckResult::fails("I12", w);
                                break 'outer;
                            }
                        }
                    }
                }
            }
            Message::TwoA { bal, val } => {
                if !i13.failed() && !safe_at(s, *val, *bal, scope, quorums) {
                    i13 = CheckResult::fails("I13", msg_witness(m));
                }
                if !i14.failed() {
                    let twin = s.iter().find(|m2| {
                        matches!(m2, Message::TwoA { bal: b2, .. } if b2 == bal) && *m2 != m
                    });
                    if let Some(m2) = twin {
                        let mut w = msg_witness(m);
                        w.push(("m2", WitnessValue::Msg(m2.clone())));
                        i14 = CheckResult::fails("I14", w);
                    }
                }
            }
            Message::TwoB { bal, val, .. } if !i15.failed() => {
                let backed = s.iter().any(|m2| {
                    matches!(m2, Message::TwoA { bal: b2, val: v2 } if b2 == bal && v2 == val)
                });
                if !backed {
                    i15 = CheckResult::fails("I15", msg_witness(m));
                }
            }
            _ => {}
        }
    }
    vec![i11, i12, i13, i14, i15]
}

/// The multi-decree message invariant suite, one result per invariant.
pub fn check_msg_inv_multi(
    s: &SentState,
    scope: &Scope,
    quorums: &QuorumSystem,
) -> Vec<CheckResult> {
    let mut i26 = CheckResult::holds("I26");
    let mut i27 = CheckResult::holds("I27");
    let mut i28 = CheckResult::holds("I28");
    let mut i29 = CheckResult::holds("I29");
    let mut i30 = CheckResult::holds("I30");
    let mut i31 = CheckResult::holds("I31");
    let mut i32 = CheckResult::holds("I32");

    for m in s.iter() {
        match m {
            Message::MultiOneB { from, bal, voted } => {
                if !i26.failed() {
                    'i26: for b in 0..bal.0 {
                        for slot in scope.slots() {
                            for v in scope.values() {
                                if voted_for_in_multi(s, *from, Ballot(b), slot, v)
                                    && !voted.iter().any(|r| r.slot == slot && r.bal >= Ballot(b))
                                {
                                    let mut w = msg_witness(m);
                                    w.push(("b", WitnessValue::Bal(Ballot(b))));
                                    w.push(("s", WitnessValue::Slot(slot)));
                                    w.push(("v", WitnessValue::Val(v)));
                                    i26 = CheckResult::fails("I26", w);
                                    break 'i26;
                                }
                            }
                        }
                    }
                }
                if !i27.failed() {
                    'i27: for r in voted {
                        for b in (r.bal.0 + 1)..bal.0 {
                            for v in scope.values() {
                                if voted_for_in_multi(s, *from, Ballot(b), r.slot, v) {
                                    let mut w = msg_witness(m);
                                    w.push(("b", WitnessValue::Bal(Ballot(b))));
                                    w.push(("s", WitnessValue::Slot(r.slot)));
                                    w.push(("v", WitnessValue::Val(v)));
                                    i27 = CheckResult::fails("I27", w);
                                    break 'i27;
                                }
                            }
                        }
                    }
                }
                if !i28.failed() {
                    if let Some(r) = voted
                        .iter()
                        .find(|r| !voted_for_in_multi(s, *from, r.bal, r.slot, r.val))
                    {
                        let mut w = msg_witness(m);
                        w.push(("r.b", WitnessValue::Bal(r.bal)));
                        w.push(("r.s", WitnessValue::Slot(r.slot)));
                        w.push(("r.v", WitnessValue::Val(r.val)));
                        i28 = CheckResult::fails("I28", w);
                    }
                }
            }
            Message::MultiTwoA { bal, decrees, .. } => {
                if !i29.failed() {
                    if let Some(d) = decrees
                        .iter()
                        .find(|d| !safe_at_multi(s, *bal, d.slot, d.val, scope, quorums))
                    {
                        let mut w = msg_witness(m);
                        w.push(("d.s", WitnessValue::Slot(d.slot)));
                        w.push(("d.v", WitnessValue::Val(d.val)));
                        i29 = CheckResult::fails("I29", w);
                    }
                }
                if !i30.failed() {
                    let dup = decrees.iter().find(|d1| {
                        decrees
                            .iter()
                            .any(|d2| d1.slot == d2.slot && d1.val != d2.val)
                    });
                    if let Some(d) = dup {
                        let mut w = msg_witness(m);
                        w.push(("d.s", WitnessValue::Slot(d.slot)));
                        i30 = CheckResult::fails("I30", w);
                    }
                }
                if !i31.failed() {
                    let twin = s.iter().find(|m2| {
                        matches!(m2, Message::MultiTwoA { bal: b2, .. } if b2 == bal) && *m2 != m
                    });
                    if let Some(m2) = twin {
                        let mut w = msg_witness(m);
                        w.push(("m2", WitnessValue::Msg(m2.clone())));
                        i31 = CheckResult::fails("I31", w);
                    }
                }
            }
            Message::MultiTwoB { bal, slot, val, .. } if !i32.failed() => {
                let backed = s.iter().any(|m2| match m2 {
                    Message::MultiTwoA {
                        bal: b2, decrees, ..
                    } => b2 == bal && decrees.iter().any(|d| d.slot == *slot && d.val == *val),
                    _ => false,
                });
                if !backed {
                    i32 = CheckResult::fails("I32", msg_witness(m));
                }
            }
            _ => {}
        }
    }
    vec![i26, i27, i28, i29, i30, i31, i32]
}

fn quorum_voting_for(s: &SentState, v: Value, quorums: &QuorumSystem) -> Option<Vec<AcceptorId>> {
    quorums
        .iter()
        .find(|q| {
            q.iter().all(|a| {
                s.iter()
                    .any(|m| matches!(m, Message::TwoB { acc, val, .. } if acc == a && *val == v))
            })
        })
        .map(|q| q.iter().copied().collect())
}

fn quorum_voting_for_multi(
    s: &SentState,
    slot: Slot,
    v: Value,
    quorums: &QuorumSystem,
) -> Option<Vec<AcceptorId>> {
    quorums
        .iter()
        .find(|q| {
            q.iter().all(|a| {
                s.iter().any(|m| {
                    matches!(m, Message::MultiTwoB { from, slot: sl, val, .. }
                        if from == a && *sl == slot && *val == v)
                })
            })
        })
        .map(|q| q.iter().copied().collect())
}

/// At most one value is chosen (per slot for the multi variants).
pub fn check_agree(s: &SentState, scope: &Scope, quorums: &QuorumSystem) -> CheckResult {
    if scope.variant.is_basic() {
        let chosen_vals: Vec<Value> = scope.values().filter(|v| chosen(s, *v, quorums)).collect();
        if chosen_vals.len() >= 2 {
            let (v1, v2) = (chosen_vals[0], chosen_vals[1]);
            return CheckResult::fails(
                "Agree",
                vec![
                    ("v1", WitnessValue::Val(v1)),
                    ("v2", WitnessValue::Val(v2)),
                    (
                        "Q1",
                        WitnessValue::Quorum(quorum_voting_for(s, v1, quorums).unwrap()),
                    ),
                    (
                        "Q2",
                        WitnessValue::Quorum(quorum_voting_for(s, v2, quorums).unwrap()),
                    ),
                ],
            );
        }
    } else {
        for slot in scope.slots() {
            let chosen_vals: Vec<Value> = scope
                .values()
                .filter(|v| chosen_multi(s, slot, *v, quorums))
                .collect();
            if chosen_vals.len() >= 2 {
                let (v1, v2) = (chosen_vals[0], chosen_vals[1]);
                return CheckResult::fails(
                    "Agree",
                    vec![
                        ("s", WitnessValue::Slot(slot)),
                        ("v1", WitnessValue::Val(v1)),
                        ("v2", WitnessValue::Val(v2)),
                        (
                            "Q1",
                            WitnessValue::Quorum(
                                quorum_voting_for_multi(s, slot, v1, quorums).unwrap(),
                            ),
                        ),
                        (
                            "Q2",
                            WitnessValue::Quorum(
                                quorum_voting_for_multi(s, slot, v2, quorums).unwrap(),
                            ),
                        ),
                    ],
                );
            }
        }
    }
    CheckResult::holds("Agree")
}

/// No two acceptors vote different values at one ballot (and slot).
pub fn check_voted_once(s: &SentState, scope: &Scope) -> CheckResult {
    if scope.variant.is_basic() {
        let votes: Vec<(AcceptorId, Ballot, Value)> = s
            .iter()
            .filter_map(|m| match m {
                Message::TwoB { acc, bal, val } => Some((*acc, *bal, *val)),
                _ => None,
            })
            .collect();
        for (a1, b1, v1) in &votes {
            for (a2, b2, v2) in &votes {
                if b1 == b2 && v1 != v2 {
                    return CheckResult::fails(
                        "VotedOnce",
                        vec![
                            ("a1", WitnessValue::Acceptor(*a1)),
                            ("a2", WitnessValue::Acceptor(*a2)),
                            ("b", WitnessValue::Bal(*b1)),
                            ("v1", WitnessValue::Val(*v1)),
                            ("v2", WitnessValue::Val(*v2)),
                        ],
                    );
                }
            }
        }
    } else {
        let votes: Vec<(AcceptorId, Ballot, Slot, Value)> = s
            .iter()
            .filter_map(|m| match m {
                Message::MultiTwoB {
                    from,
                    bal,
                    slot,
                    val,
                } => Some((*from, *bal, *slot, *val)),
                _ => None,
            })
            .collect();
        for (a1, b1, s1, v1) in &votes {
            for (a2, b2, s2, v2) in &votes {
                if b1 == b2 && s1 == s2 && v1 != v2 {
                    return CheckResult::fails(
                        "VotedOnce",
                        vec![
                            ("a1", WitnessValue::Acceptor(*a1)),
                            ("a2", WitnessValue::Acceptor(*a2)),
                            ("b", WitnessValue::Bal(*b1)),
                            ("s", WitnessValue::Slot(*s1)),
                            ("v1", WitnessValue::Val(*v1)),
                            ("v2", WitnessValue::Val(*v2)),
                        ],
                    );
                }
            }
        }
    }
    CheckResult::holds("VotedOnce")
}

/// Every vote is at a safe (value, ballot[, slot]).
pub fn check_voted_inv(s: &SentState, scope: &Scope, quorums: &QuorumSystem) -> CheckResult {
    for m in s.iter() {
        match m {
            Message::TwoB { acc, bal, val } if scope.variant.is_basic() => {
                if !safe_at(s, *val, *bal, scope, quorums) {
                    return CheckResult::fails(
                        "VotedInv",
                        vec![
                            ("a", WitnessValue::Acceptor(*acc)),
                            ("v", WitnessValue::Val(*val)),
                            ("b", WitnessValue::Bal(*bal)),
                        ],
                    );
                }
            }
            Message::MultiTwoB {
                from,
                bal,
                slot,
                val,
            } if scope.variant.is_multi()
                && !safe_at_multi(s, *bal, *slot, *val, scope, quorums) =>
            {
                return CheckResult::fails(
                    "VotedInv",
                    vec![
                        ("a", WitnessValue::Acceptor(*from)),
                        ("b", WitnessValue::Bal(*bal)),
                        ("s", WitnessValue::Slot(*slot)),
                        ("v", WitnessValue::Val(*val)),
                    ],
                );
            }
            _ => {}
        }
    }
    CheckResult::holds("VotedInv")
}

/// Safety of a (value, ballot[, slot]) is stable across one transition:
/// everything safe in `s` stays safe in `s_next`.
pub fn check_safe_at_stable(
    s: &SentState,
    s_next: &SentState,
    scope: &Scope,
    quorums: &QuorumSystem,
) -> CheckResult {
    if scope.variant.is_basic() {
        for v in scope.values() {
            for b in scope.ballots() {
                if safe_at(s, v, b, scope, quorums) && !safe_at(s_next, v, b, scope, quorums) {
                    return CheckResult::fails(
                        "SafeAtStable",
                        vec![("v", WitnessValue::Val(v)), ("b", WitnessValue::Bal(b))],
                    );
                }
            }
        }
    } else {
        for v in scope.values() {
            for b in scope.ballots() {
                for slot in scope.slots() {
                    if safe_at_multi(s, b, slot, v, scope, quorums)
                        && !safe_at_multi(s_next, b, slot, v, scope, quorums)
                    {
                        return CheckResult::fails(
                            "SafeAtStable",
                            vec![
                                ("v", WitnessValue::Val(v)),
                                ("b", WitnessValue::Bal(b)),
                                ("s", WitnessValue::Slot(slot)),
                            ],
                        );
                    }
                }
            }
        }
    }
    CheckResult::holds("SafeAtStable")
}

/// Names of the per-state checks for a variant, in reporting order.
pub fn state_check_names(variant: Variant) -> &'static [&'static str] {
    if variant.is_basic() {
        &[
            "TypeOK", "I11", "I12", "I13", "I14", "I15", "VotedOnce", "VotedInv", "Agree",
        ]
    } else {
        &[
            "TypeOK", "I26", "I27", "I28", "I29", "I30", "I31", "I32", "VotedOnce", "VotedInv",
            "Agree",
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Variant;

    fn one_a(b: i32) -> Message {
        Message::OneA { bal: Ballot(b) }
    }

    fn one_b(a: u8, b: i32, mvb: i32, mv: Option<u8>) -> Message {
        Message::OneB {
            acc: AcceptorId(a),
            bal: Ballot(b),
            max_vbal: Ballot(mvb),
            max_val: match mv {
                None => MaybeValue::None,
                Some(v) => MaybeValue::Val(Value(v)),
            },
        }
    }

    fn two_a(b: i32, v: u8) -> Message {
        Message::TwoA {
            bal: Ballot(b),
            val: Value(v),
        }
    }

    fn two_b(a: u8, b: i32, v: u8) -> Message {
        Message::TwoB {
            acc: AcceptorId(a),
            bal: Ballot(b),
            val: Value(v),
        }
    }

    fn scope_unsafe() -> Scope {
        Scope::basic(Variant::BasicUnsafe2a, 3, 1, 2)
    }

    fn step4_state() -> SentState {
        SentState::from_messages([
            one_a(0),
            one_b(0, 0, -1, None),
            one_b(1, 0, -1, None),
            two_a(0, 0),
            two_b(0, 0, 0),
            two_b(1, 0, 0),
        ])
    }

    fn step6_state() -> SentState {
        step4_state().with_all(&[one_b(2, 0, -1, None), two_a(0, 1)])
    }

    fn step7_state() -> SentState {
        step6_state().with_all(&[two_b(0, 0, 1), two_b(2, 0, 1)])
    }

    #[test]
    fn voted_for_in_is_2b_membership() {
        let s = SentState::empty();
        assert!(!voted_for_in(&s, AcceptorId(0), Value(0), Ballot(0)));
        let s = SentState::from_messages([two_b(0, 0, 0)]);
        assert!(voted_for_in(&s, AcceptorId(0), Value(0), Ballot(0)));
        assert!(!voted_for_in(&s, AcceptorId(0), Value(1), Ballot(0)));
        assert!(voted_for_in(&step4_state(), AcceptorId(0), Value(0), Ballot(0)));
    }

    #[test]
    fn chosen_after_quorum_votes() {
        let scope = scope_unsafe();
        let q = scope.quorum_system();
        assert!(!chosen(&SentState::empty(), Value(0), &q));
        assert!(chosen(&step4_state(), Value(0), &q));
        assert!(!chosen(&step4_state(), Value(1), &q));
        assert!(chosen(&step7_state(), Value(0), &q));
        assert!(chosen(&step7_state(), Value(1), &q));
    }

    #[test]
    fn chosen_allows_mixed_ballots_but_chosen_in_fixes_one() {
        let scope = Scope::basic(Variant::Basic, 2, 2, 1);
        let q = scope.quorum_system();
        let s = SentState::from_messages([two_b(0, 0, 0), two_b(1, 1, 0)]);
        assert!(chosen(&s, Value(0), &q));
        assert!(!chosen_in(&s, Value(0), Ballot(0), &q));
        assert!(!chosen_in(&s, Value(0), Ballot(1), &q));
    }

    #[test]
    fn wont_vote_in_needs_promise_and_no_vote() {
        let scope = Scope::basic(Variant::Basic, 3, 3, 2);
        assert!(!wont_vote_in(&SentState::empty(), AcceptorId(0), Ballot(0), &scope));
        let s = SentState::from_messages([one_b(0, 2, -1, None)]);
        assert!(wont_vote_in(&s, AcceptorId(0), Ballot(1), &scope));
        let s = SentState::from_messages([one_b(0, 2, -1, None), two_b(0, 1, 0)]);
        assert!(!wont_vote_in(&s, AcceptorId(0), Ballot(1), &scope));
    }

    #[test]
    fn safe_at_is_vacuous_at_ballot_zero() {
        let scope = scope_unsafe();
        let q = scope.quorum_system();
        for v in scope.values() {
            assert!(safe_at(&SentState::empty(), v, Ballot(0), &scope, &q));
        }
    }

    #[test]
    fn safe_at_distinguishes_values_after_votes() {
        let scope = Scope::basic(Variant::Basic, 3, 2, 2);
        let q = scope.quorum_system();
        // A quorum voted v1 at ballot 0.
        let s = SentState::from_messages([two_b(0, 0, 0), two_b(1, 0, 0)]);
        assert!(safe_at(&s, Value(0), Ballot(1), &scope, &q));
        assert!(!safe_at(&s, Value(1), Ballot(1), &scope, &q));
    }

    #[test]
    fn type_ok_accepts_reachable_shapes_and_rejects_bad_sentinels() {
        let scope = scope_unsafe();
        assert!(!check_type_ok(&SentState::empty(), &scope).failed());
        assert!(!check_type_ok(&step7_state(), &scope).failed());
        // Sentinel ballot paired with a real value is malformed.
        let s = SentState::from_messages([one_b(0, 0, -1, Some(0))]);
        let r = check_type_ok(&s, &scope);
        assert!(r.failed());
        assert!(r.witness.is_some());
        // Out-of-scope ballot.
        let s = SentState::from_messages([one_a(5)]);
        assert!(check_type_ok(&s, &scope).failed());
        // Wrong family.
        let s = SentState::from_messages([Message::MultiOneA {
            from: ProposerId(0),
            bal: Ballot(0),
        }]);
        assert!(check_type_ok(&s, &scope).failed());
    }

    #[test]
    fn msg_inv_holds_on_empty_and_step4() {
        let scope = scope_unsafe();
        let q = scope.quorum_system();
        for r in check_msg_inv_basic(&SentState::empty(), &scope, &q) {
            assert!(!r.failed(), "{} failed on empty", r.name);
        }
        for r in check_msg_inv_basic(&step4_state(), &scope, &q) {
            assert!(!r.failed(), "{} failed on step-4 state", r.name);
        }
    }

    #[test]
    fn i14_fails_with_twin_2a_witness_after_step6() {
        let scope = scope_unsafe();
        let q = scope.quorum_system();
        let results = check_msg_inv_basic(&step6_state(), &scope, &q);
        let i14 = results.iter().find(|r| r.name == "I14").unwrap();
        assert!(i14.failed());
        let w = i14.witness.as_ref().unwrap();
        let (m, m2) = match (&w[0].1, &w[1].1) {
            (WitnessValue::Msg(a), WitnessValue::Msg(b)) => (a, b),
            other => panic!("unexpected witness {other:?}"),
        };
        // Re-substitute: both are 2a messages at one ballot yet differ.
        assert_ne!(m, m2);
        assert_eq!(m.bal(), m2.bal());
        assert_eq!(m.tag(), "2a");
        assert_eq!(m2.tag(), "2a");
    }

    #[test]
    fn agree_fails_exactly_when_two_values_chosen() {
        let scope = scope_unsafe();
        let q = scope.quorum_system();
        assert!(!check_agree(&SentState::empty(), &scope, &q).failed());
        assert!(!check_agree(&step4_state(), &scope, &q).failed());
        let r = check_agree(&step7_state(), &scope, &q);
        assert!(r.failed());
        let w = r.witness.unwrap();
        assert_eq!(w[0].1, WitnessValue::Val(Value(0)));
        assert_eq!(w[1].1, WitnessValue::Val(Value(1)));
    }

    #[test]
    fn voted_once_detects_conflicting_votes() {
        let scope = scope_unsafe();
        assert!(!check_voted_once(&SentState::empty(), &scope).failed());
        let s = SentState::from_messages([two_b(0, 0, 0), two_b(1, 0, 1)]);
        assert!(check_voted_once(&s, &scope).failed());
        assert!(!check_voted_once(&step4_state(), &scope).failed());
        assert!(check_voted_once(&step7_state(), &scope).failed());
    }

    #[test]
    fn voted_inv_on_step7_is_vacuously_safe_with_one_ballot() {
        // All votes in the scripted run share one ballot, and safety at a
        // ballot only constrains the ballots below it, so the lemma holds
        // here even though agreement fails.
        let scope = scope_unsafe();
        let q = scope.quorum_system();
        assert!(!check_voted_inv(&step7_state(), &scope, &q).failed());
    }

    #[test]
    fn voted_inv_fails_on_unsafe_cross_ballot_vote() {
        let scope = Scope::basic(Variant::Basic, 3, 2, 2);
        let q = scope.quorum_system();
        // Quorum {0,1} voted v1 at ballot 0; acceptor 2 votes v2 at ballot 1
        // without any quorum making that safe.
        let s = SentState::from_messages([
            two_b(0, 0, 0),
            two_b(1, 0, 0),
            two_b(2, 1, 1),
        ]);
        let r = check_voted_inv(&s, &scope, &q);
        assert!(r.failed());
        let w = r.witness.unwrap();
        assert_eq!(w[0].1, WitnessValue::Acceptor(AcceptorId(2)));
        assert_eq!(w[1].1, WitnessValue::Val(Value(1)));
        assert_eq!(w[2].1, WitnessValue::Bal(Ballot(1)));
    }

    #[test]
    fn safe_at_stable_is_reflexive_and_survives_phase1a() {
        let scope = Scope::basic(Variant::Basic, 3, 2, 2);
        let q = scope.quorum_system();
        let s = step4_state();
        assert!(!check_safe_at_stable(&s, &s, &scope, &q).failed());
        let next = s.with_all(&[one_a(1)]);
        assert!(!check_safe_at_stable(&s, &next, &scope, &q).failed());
    }

    #[test]
    fn multi_msg_inv_on_empty_and_slot_collision() {
        let scope = Scope::multi(Variant::Multi, 3, 1, 2, 2, 2, 1);
        let q = scope.quorum_system();
        for r in check_msg_inv_multi(&SentState::empty(), &scope, &q) {
            assert!(!r.failed());
        }
        let m = Message::MultiTwoA {
            from: ProposerId(0),
            bal: Ballot(0),
            decrees: [
                crate::domain::Decree {
                    slot: Slot(0),
                    val: Value(0),
                },
                crate::domain::Decree {
                    slot: Slot(0),
                    val: Value(1),
                },
            ]
            .into_iter()
            .collect(),
        };
        let s = SentState::from_messages([m]);
        let results = check_msg_inv_multi(&s, &scope, &q);
        let i30 = results.iter().find(|r| r.name == "I30").unwrap();
        assert!(i30.failed());
    }

    #[test]
    fn multi_agree_keyed_by_slot() {
        let scope = Scope::multi(Variant::Multi, 3, 1, 1, 2, 2, 1);
        let q = scope.quorum_system();
        let vote = |a: u8, s: u8, v: u8| Message::MultiTwoB {
            from: AcceptorId(a),
            bal: Ballot(0),
            slot: Slot(s),
            val: Value(v),
        };
        // Different values on different slots: fine.
        let s = SentState::from_messages([vote(0, 0, 0), vote(1, 0, 0), vote(0, 1, 1), vote(1, 1, 1)]);
        assert!(!check_agree(&s, &scope, &q).failed());
        // Two values chosen on one slot: violation.
        let s = s.with_all(&[vote(0, 0, 1), vote(2, 0, 1)]);
        let r = check_agree(&s, &scope, &q);
        assert!(r.failed());
        let w = r.witness.unwrap();
        assert_eq!(w[0].1, WitnessValue::Slot(Slot(0)));
    }
}
