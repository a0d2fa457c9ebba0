//! Enabled-action enumeration for single-decree Paxos over the sent set,
//! including the unsafe phase 2a variant that drops the unique-ballot guard.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::action::{ActionInstance, ActionParams};
use crate::domain::{
    AcceptorId, Ballot, MaybeValue, Message, QuorumSystem, Scope, SentState, Value, Variant,
};

/// The 2b messages acceptor `a` has sent.
pub fn two_bs(s: &SentState, a: AcceptorId) -> Vec<Message> {
    s.iter()
        .filter(|m| matches!(m, Message::TwoB { acc, .. } if *acc == a))
        .cloned()
        .collect()
}

/// A (ballot, value) pair reported in a 1b message.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MaxProp {
    pub bal: Ballot,
    pub val: MaybeValue,
}

impl MaxProp {
    pub const NEVER_VOTED: MaxProp = MaxProp {
        bal: Ballot::NEVER,
        val: MaybeValue::None,
    };
}

/// The highest-ballot proposals accepted by `a`, projected to (ballot, value)
/// pairs, or the `(-1, placeholder)` singleton if `a` accepted nothing.
/// Nonempty for every state; all elements share one ballot.
pub fn max_prop(s: &SentState, a: AcceptorId) -> Vec<MaxProp> {
    let tb = two_bs(s, a);
    let Some(max_bal) = tb.iter().map(|m| m.bal()).max() else {
        return vec![MaxProp::NEVER_VOTED];
    };
    let mut props: Vec<MaxProp> = tb
        .iter()
        .filter(|m| m.bal() == max_bal)
        .map(|m| match m {
            Message::TwoB { val, .. } => MaxProp {
                bal: max_bal,
                val: MaybeValue::Val(*val),
            },
            _ => unreachable!(),
        })
        .collect();
    props.sort();
    props.dedup();
    props
}

/// Highest ballot among the 1b/2b messages of `a`, or the sentinel if none.
/// Both response guards quantify over exactly these messages.
fn max_response_ballot(s: &SentState, a: AcceptorId) -> Ballot {
    s.iter()
        .filter_map(|m| match m {
            Message::OneB { acc, bal, .. } | Message::TwoB { acc, bal, .. } if *acc == a => {
                Some(*bal)
            }
            _ => None,
        })
        .max()
        .unwrap_or(Ballot::NEVER)
}

/// Phase 1a: one instance per ballot in scope; the sent-only action has no
/// guard, so only idempotent deltas are suppressed.
pub fn enabled_phase1a(s: &SentState, scope: &Scope) -> Vec<ActionInstance> {
    scope
        .ballots()
        .filter_map(|bal| {
            let msg = Message::OneA { bal };
            if s.contains(&msg) {
                None
            } else {
                Some(ActionInstance::new(ActionParams::Phase1a { bal }, vec![msg]))
            }
        })
        .collect()
}

/// Phase 1b: for each 1a message whose ballot is strictly above every 1b/2b
/// ballot of `a`, and each element of `max_prop(a)`, promise with that pair.
pub fn enabled_phase1b(s: &SentState, a: AcceptorId) -> Vec<ActionInstance> {
    let threshold = max_response_ballot(s, a);
    let props = max_prop(s, a);
    let mut out = Vec::new();
    for m in s.iter() {
        let Message::OneA { bal } = m else { continue };
        if *bal <= threshold {
            continue;
        }
        for r in &props {
            let msg = Message::OneB {
                acc: a,
                bal: *bal,
                max_vbal: r.bal,
                max_val: r.val,
            };
            if s.contains(&msg) {
                continue;
            }
            out.push(ActionInstance::new(
                ActionParams::Phase1b {
                    acc: a,
                    bal: *bal,
                    max_vbal: r.bal,
                    max_val: r.val,
                },
                vec![msg],
            ));
        }
    }
    out
}

/// Values admissible for a 2a at ballot `b` given the support set `support`
/// of 1b messages: every value if nobody in the support voted, otherwise the
/// values reported at the support's maximal voted ballot (which must lie
/// below `b`). This computes the existential over `c` directly as
/// `c = max maxVBal`, which is equivalent to enumerating `c` in `0..b`.
fn admissible_values(support: &[&Message], b: Ballot, scope: &Scope) -> Vec<Value> {
    let cstar = support
        .iter()
        .map(|m| match m {
            Message::OneB { max_vbal, .. } => *max_vbal,
            _ => unreachable!(),
        })
        .max()
        .expect("support is nonempty");
    if cstar == Ballot::NEVER {
        return scope.values().collect();
    }
    if cstar.0 > b.0 - 1 {
        return Vec::new();
    }
    let mut vals: Vec<Value> = support
        .iter()
        .filter_map(|m| match m {
            Message::OneB {
                max_vbal, max_val, ..
            } if *max_vbal == cstar => max_val.as_value(),
            _ => None,
        })
        .collect();
    vals.sort();
    vals.dedup();
    vals
}

fn covers(quorum: &BTreeSet<AcceptorId>, support: &[&Message]) -> bool {
    quorum.iter().all(|a| {
        support
            .iter()
            .any(|m| matches!(m, Message::OneB { acc, .. } if acc == a))
    })
}

/// Phase 2a: instances for every (ballot, value) admitted by some quorum and
/// 1b-subset. The unique-ballot guard is dropped when the variant is
/// `basic-unsafe-2a`. Instances differing only in the (quorum, subset)
/// witness have identical deltas and are merged, recording the smallest
/// witness under the canonical order.
pub fn enabled_phase2a(s: &SentState, scope: &Scope) -> Vec<ActionInstance> {
    phase2a_instances(s, scope, &scope.quorum_system())
}

pub(crate) fn phase2a_instances(
    s: &SentState,
    scope: &Scope,
    quorums: &QuorumSystem,
) -> Vec<ActionInstance> {
    type Witness = (BTreeSet<AcceptorId>, Vec<Message>);
    let mut by_delta: BTreeMap<(Ballot, Value), Witness> = BTreeMap::new();
    for b in scope.ballots() {
        if scope.variant == Variant::Basic
            && s.iter()
                .any(|m| matches!(m, Message::TwoA { bal, .. } if *bal == b))
        {
            continue;
        }
        let one_bs: Vec<&Message> = s
            .iter()
            .filter(|m| matches!(m, Message::OneB { bal, .. } if *bal == b))
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
                for v in admissible_values(&support, b, scope) {
                    let witness: Witness =
                        (quorum.clone(), support.iter().map(|m| (*m).clone()).collect());
                    by_delta
                        .entry((b, v))
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
        .filter_map(|((bal, val), (quorum, support))| {
            let msg = Message::TwoA { bal, val };
            if s.contains(&msg) {
                return None;
            }
            Some(ActionInstance::new(
                ActionParams::Phase2a {
                    bal,
                    val,
                    quorum: quorum.into_iter().collect(),
                    support,
                },
                vec![msg],
            ))
        })
        .collect()
}

/// Phase 2b: vote for each 2a message whose ballot is at least every 1b/2b
/// ballot of `a`.
pub fn enabled_phase2b(s: &SentState, a: AcceptorId) -> Vec<ActionInstance> {
    let threshold = max_response_ballot(s, a);
    let mut out = Vec::new();
    for m in s.iter() {
        let Message::TwoA { bal, val } = m else { continue };
        if *bal < threshold {
            continue;
        }
        let msg = Message::TwoB {
            acc: a,
            bal: *bal,
            val: *val,
        };
        if s.contains(&msg) {
            continue;
        }
        out.push(ActionInstance::new(
            ActionParams::Phase2b {
                acc: a,
                bal: *bal,
                val: *val,
            },
            vec![msg],
        ));
    }
    out
}

/// All enabled single-decree actions of `s`, sorted canonically.
pub(crate) fn enabled_actions(s: &SentState, scope: &Scope) -> Vec<ActionInstance> {
    debug_assert!(scope.variant.is_basic());
    let mut out = enabled_phase1a(s, scope);
    out.extend(phase2a_instances(s, scope, &scope.quorum_system()));
    for a in scope.acceptor_ids() {
        out.extend(enabled_phase1b(s, a));
        out.extend(enabled_phase2b(s, a));
    }
    out.sort();
    out
}

/// Enabled actions paired with their successor states. Stuttering successors
/// are excluded, so each successor is strictly larger than `s`.
pub fn successors(s: &SentState, scope: &Scope) -> Vec<(ActionInstance, SentState)> {
    enabled_actions(s, scope)
        .into_iter()
        .map(|a| {
            let next = a.apply(s);
            (a, next)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

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

    /// State after step 4 of the scripted unsafe run: ballot 0 proposed,
    /// acceptors 0 and 1 promised and voted v1.
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

    #[test]
    fn phase1a_enumerates_fresh_ballots() {
        let scope = Scope::basic(Variant::Basic, 3, 2, 1);
        let from_empty = enabled_phase1a(&SentState::empty(), &scope);
        let bals: Vec<Ballot> = from_empty.iter().map(|a| a.delta[0].bal()).collect();
        assert_eq!(bals, vec![Ballot(0), Ballot(1)]);

        let s = SentState::from_messages([one_a(0)]);
        let rest = enabled_phase1a(&s, &scope);
        assert_eq!(rest.len(), 1);
        assert_eq!(rest[0].delta, vec![one_a(1)]);

        let scope1 = Scope::basic(Variant::Basic, 3, 1, 1);
        assert!(enabled_phase1a(&s, &scope1).is_empty());
    }

    #[test]
    fn two_bs_filters_by_acceptor() {
        assert!(two_bs(&SentState::empty(), AcceptorId(0)).is_empty());
        let s = SentState::from_messages([two_b(0, 0, 0), two_b(1, 0, 0)]);
        assert_eq!(two_bs(&s, AcceptorId(0)), vec![two_b(0, 0, 0)]);
        assert_eq!(two_bs(&step4_state(), AcceptorId(0)), vec![two_b(0, 0, 0)]);
    }

    #[test]
    fn max_prop_defaults_to_sentinel() {
        assert_eq!(
            max_prop(&SentState::empty(), AcceptorId(0)),
            vec![MaxProp::NEVER_VOTED]
        );
    }

    #[test]
    fn max_prop_takes_maximal_ballot() {
        let s = SentState::from_messages([two_b(0, 0, 0)]);
        assert_eq!(
            max_prop(&s, AcceptorId(0)),
            vec![MaxProp {
                bal: Ballot(0),
                val: MaybeValue::Val(Value(0))
            }]
        );
        let s = SentState::from_messages([two_b(0, 0, 0), two_b(0, 1, 1)]);
        assert_eq!(
            max_prop(&s, AcceptorId(0)),
            vec![MaxProp {
                bal: Ballot(1),
                val: MaybeValue::Val(Value(1))
            }]
        );
    }

    #[test]
    fn phase1b_promises_with_sentinel_when_fresh() {
        let s = SentState::from_messages([one_a(0)]);
        let acts = enabled_phase1b(&s, AcceptorId(0));
        assert_eq!(acts.len(), 1);
        assert_eq!(acts[0].delta, vec![one_b(0, 0, -1, None)]);
    }

    #[test]
    fn phase1b_guard_is_strict() {
        let s = SentState::from_messages([one_a(0), one_b(0, 0, -1, None)]);
        assert!(enabled_phase1b(&s, AcceptorId(0)).is_empty());
    }

    #[test]
    fn phase1b_both_fresh_acceptors_respond_with_sentinel() {
        // First 1a out; two fresh acceptors each promise (-1, placeholder).
        let s = SentState::from_messages([one_a(0)]);
        for a in [0u8, 1u8] {
            let acts = enabled_phase1b(&s, AcceptorId(a));
            assert_eq!(acts.len(), 1);
            assert_eq!(acts[0].delta, vec![one_b(a, 0, -1, None)]);
        }
    }

    #[test]
    fn phase2a_value_free_when_support_never_voted() {
        let scope = Scope::basic(Variant::BasicUnsafe2a, 3, 1, 2);
        let s = SentState::from_messages([one_a(0), one_b(0, 0, -1, None), one_b(1, 0, -1, None)]);
        let acts = enabled_phase2a(&s, &scope);
        let deltas: Vec<Message> = acts.iter().map(|a| a.delta[0].clone()).collect();
        assert_eq!(deltas, vec![two_a(0, 0), two_a(0, 1)]);
        // Canonical witness is the smallest covering quorum and support.
        match &acts[0].params {
            ActionParams::Phase2a { quorum, support, .. } => {
                assert_eq!(quorum, &vec![AcceptorId(0), AcceptorId(1)]);
                assert_eq!(support.len(), 2);
            }
            other => panic!("unexpected params {other:?}"),
        }
    }

    #[test]
    fn phase2a_blocked_by_existing_2a_in_safe_variant() {
        let scope = Scope::basic(Variant::Basic, 3, 1, 2);
        let mut msgs = vec![one_a(0), one_b(0, 0, -1, None), one_b(1, 0, -1, None)];
        msgs.push(two_a(0, 0));
        let s = SentState::from_messages(msgs);
        assert!(enabled_phase2a(&s, &scope).is_empty());
    }

    #[test]
    fn phase2a_reenabled_in_unsafe_variant() {
        // Step 5 of the scripted run: the third acceptor's late promise lets
        // the unsafe variant propose again at the same ballot.
        let scope = Scope::basic(Variant::BasicUnsafe2a, 3, 1, 2);
        let s = step4_state().with_all(&[one_b(2, 0, -1, None)]);
        let acts = enabled_phase2a(&s, &scope);
        let deltas: Vec<Message> = acts.iter().map(|a| a.delta[0].clone()).collect();
        // two_a(0,0) is already sent, so only the second value yields a delta
        assert_eq!(deltas, vec![two_a(0, 1)]);
    }

    #[test]
    fn phase2a_picks_value_of_highest_voted_ballot() {
        let scope = Scope::basic(Variant::Basic, 3, 2, 2);
        // Acceptors 0 and 1 promise at ballot 1; acceptor 0 reports a vote.
        let s = SentState::from_messages([
            one_a(1),
            one_b(0, 1, 0, Some(1)),
            one_b(1, 1, -1, None),
        ]);
        let acts = enabled_phase2a(&s, &scope);
        let deltas: Vec<Message> = acts.iter().map(|a| a.delta[0].clone()).collect();
        assert_eq!(deltas, vec![two_a(1, 1)]);
    }

    #[test]
    fn phase2b_guard_is_non_strict() {
        let s = SentState::from_messages([two_a(0, 0)]);
        let acts = enabled_phase2b(&s, AcceptorId(0));
        assert_eq!(acts.len(), 1);
        assert_eq!(acts[0].delta, vec![two_b(0, 0, 0)]);

        let s = SentState::from_messages([two_a(0, 0), one_b(0, 1, -1, None)]);
        assert!(enabled_phase2b(&s, AcceptorId(0)).is_empty());

        let s = SentState::from_messages([two_a(0, 0), one_b(0, 0, -1, None)]);
        assert_eq!(enabled_phase2b(&s, AcceptorId(0)).len(), 1);
    }

    #[test]
    fn only_phase1a_enabled_initially() {
        let scope = Scope::basic(Variant::Basic, 3, 1, 1);
        let succ = successors(&SentState::empty(), &scope);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].0.name(), "phase1a");
        assert_eq!(succ[0].1.len(), 1);
    }

    #[test]
    fn no_phase2a_successor_after_step4_in_safe_variant() {
        let scope = Scope::basic(Variant::Basic, 3, 1, 2);
        let succ = successors(&step4_state(), &scope);
        assert!(succ.iter().all(|(a, _)| a.name() != "phase2a"));
    }

    #[test]
    fn successors_strictly_grow_and_deltas_are_distinct() {
        let scope = Scope::basic(Variant::BasicUnsafe2a, 3, 2, 2);
        // Walk a few levels and check on every encountered state.
        let mut frontier = vec![SentState::empty()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for s in &frontier {
                let succ = successors(s, &scope);
                let mut deltas: Vec<&Vec<Message>> = succ.iter().map(|(a, _)| &a.delta).collect();
                deltas.sort();
                let before = deltas.len();
                deltas.dedup();
                assert_eq!(before, deltas.len(), "duplicate deltas from one state");
                for (a, t) in &succ {
                    assert!(s.is_subset_of(t));
                    assert_eq!(t.len() - s.len(), a.delta.len());
                }
                next.extend(succ.into_iter().map(|(_, t)| t));
            }
            next.sort();
            next.dedup();
            frontier = next;
        }
    }

    #[test]
    fn successors_is_deterministic() {
        let scope = Scope::basic(Variant::Basic, 3, 2, 2);
        let s = step4_state();
        assert_eq!(successors(&s, &scope), successors(&s, &scope));
    }

    /// Literal evaluation of the phase 2a condition with the existential over
    /// the intermediate ballot `c` enumerated directly, used to validate the
    /// computed-maximum shortcut.
    fn phase2a_direct_oracle(s: &SentState, scope: &Scope) -> Vec<(Ballot, Value)> {
        let quorums = scope.quorum_system();
        let mut enabled = Vec::new();
        for b in scope.ballots() {
            let blocked = scope.variant == Variant::Basic
                && s.iter()
                    .any(|m| matches!(m, Message::TwoA { bal, .. } if *bal == b));
            if blocked {
                continue;
            }
            let one_bs: Vec<&Message> = s
                .iter()
                .filter(|m| matches!(m, Message::OneB { bal, .. } if *bal == b))
                .collect();
            for v in scope.values() {
                let mut found = false;
                'search: for quorum in quorums.iter() {
                    for mask in 0u32..(1 << one_bs.len()) {
                        let support: Vec<&Message> = one_bs
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask & (1 << i) != 0)
                            .map(|(_, m)| *m)
                            .collect();
                        if !covers(quorum, &support) {
                            continue;
                        }
                        let mvb = |m: &&Message| match m {
                            Message::OneB { max_vbal, .. } => *max_vbal,
                            _ => unreachable!(),
                        };
                        let all_unvoted = support.iter().all(|m| mvb(m) == Ballot::NEVER);
                        let mut exists_c = false;
                        for c in 0..b.0 {
                            let c = Ballot(c);
                            let all_le = support.iter().all(|m| mvb(m) <= c);
                            let some_eq = support.iter().any(|m| match m {
                                Message::OneB {
                                    max_vbal, max_val, ..
                                } => *max_vbal == c && *max_val == MaybeValue::Val(v),
                                _ => unreachable!(),
                            });
                            if all_le && some_eq {
                                exists_c = true;
                                break;
                            }
                        }
                        if all_unvoted || exists_c {
                            found = true;
                            break 'search;
                        }
                    }
                }
                if found {
                    enabled.push((b, v));
                }
            }
        }
        enabled
    }

    /// Literal evaluation of the phase 1b and 2b guards, compared against
    /// the enumerated instances on every state of a bounded walk.
    #[test]
    fn response_phase_guards_match_direct_evaluation() {
        let scope = Scope::basic(Variant::BasicUnsafe2a, 3, 2, 2);
        let mut frontier = vec![SentState::empty()];
        for _ in 0..5 {
            let mut next = Vec::new();
            for s in &frontier {
                for a in scope.acceptor_ids() {
                    // phase 1b: every (1a message, max_prop element) with the
                    // strictly-greater guard, minus idempotent sends.
                    let mut expected = Vec::new();
                    for m in s.iter() {
                        let Message::OneA { bal } = m else { continue };
                        let above_all = s.iter().all(|m2| match m2 {
                            Message::OneB { acc, bal: b2, .. }
                            | Message::TwoB { acc, bal: b2, .. } => *acc != a || bal > b2,
                            _ => true,
                        });
                        if !above_all {
                            continue;
                        }
                        for r in max_prop(s, a) {
                            let msg = Message::OneB {
                                acc: a,
                                bal: *bal,
                                max_vbal: r.bal,
                                max_val: r.val,
                            };
                            if !s.contains(&msg) {
                                expected.push(msg);
                            }
                        }
                    }
                    expected.sort();
                    let got: Vec<Message> = enabled_phase1b(s, a)
                        .iter()
                        .map(|i| i.delta[0].clone())
                        .collect();
                    assert_eq!(got, expected);

                    // phase 2b: every 2a message with the non-strict guard.
                    let mut expected = Vec::new();
                    for m in s.iter() {
                        let Message::TwoA { bal, val } = m else { continue };
                        let at_least_all = s.iter().all(|m2| match m2 {
                            Message::OneB { acc, bal: b2, .. }
                            | Message::TwoB { acc, bal: b2, .. } => *acc != a || bal >= b2,
                            _ => true,
                        });
                        if !at_least_all {
                            continue;
                        }
                        let msg = Message::TwoB {
                            acc: a,
                            bal: *bal,
                            val: *val,
                        };
                        if !s.contains(&msg) {
                            expected.push(msg);
                        }
                    }
                    expected.sort();
                    let got: Vec<Message> = enabled_phase2b(s, a)
                        .iter()
                        .map(|i| i.delta[0].clone())
                        .collect();
                    assert_eq!(got, expected);
                }
                next.extend(successors(s, &scope).into_iter().map(|(_, t)| t));
            }
            next.sort();
            next.dedup();
            frontier = next;
        }
    }

    #[test]
    fn phase2a_matches_direct_c_enumeration() {
        for variant in [Variant::Basic, Variant::BasicUnsafe2a] {
            let scope = Scope::basic(variant, 3, 2, 2);
            let mut frontier = vec![SentState::empty()];
            let mut checked = 0usize;
            for _ in 0..5 {
                let mut next = Vec::new();
                for s in &frontier {
                    let expected: Vec<(Ballot, Value)> = phase2a_direct_oracle(s, &scope)
                        .into_iter()
                        .filter(|(b, v)| {
                            !s.contains(&Message::TwoA { bal: *b, val: *v })
                        })
                        .collect();
                    let got: Vec<(Ballot, Value)> = enabled_phase2a(s, &scope)
                        .iter()
                        .map(|a| match a.params {
                            ActionParams::Phase2a { bal, val, .. } => (bal, val),
                            _ => unreachable!(),
                        })
                        .collect();
                    assert_eq!(got, expected, "state {s:?}");
                    checked += 1;
                    next.extend(successors(s, &scope).into_iter().map(|(_, t)| t));
                }
                next.sort();
                next.dedup();
                frontier = next;
            }
            assert!(checked > 50, "oracle comparison covered {checked} states");
        }
    }
}
