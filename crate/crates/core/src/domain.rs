//! Core value types: ballots, values, process ids, the message taxonomy for
//! each protocol variant, the sent-set state, quorum systems, and finite
//! exploration scopes.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

/// A proposal number. `-1` is the below-all sentinel meaning "never voted";
/// real ballots are `0..ballot_bound`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct Ballot(pub i32);

impl Ballot {
    /// The sentinel that compares below every real ballot.
    pub const NEVER: Ballot = Ballot(-1);

    pub fn is_real(self) -> bool {
        self.0 >= 0
    }
}

impl fmt::Display for Ballot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A proposed value, identified by its index into the scope's value domain.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct Value(pub u8);

/// A value or the distinguished placeholder that sits outside the value
/// domain. The placeholder appears only as the `maxVal` of a 1b message
/// paired with `maxVBal = -1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MaybeValue {
    None,
    Val(Value),
}

impl MaybeValue {
    pub fn as_value(self) -> Option<Value> {
        match self {
            MaybeValue::None => None,
            MaybeValue::Val(v) => Some(v),
        }
    }
}

/// Index of an acceptor process.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct AcceptorId(pub u8);

/// Index of a proposer process (used by the multi-decree variants only;
/// single-decree actions are keyed by ballot, not proposer).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct ProposerId(pub u8);

/// Index into the agreed sequence of values (multi-decree variants only).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct Slot(pub u8);

/// A (ballot, slot, value) triple an acceptor has voted for.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vote {
    pub bal: Ballot,
    pub slot: Slot,
    pub val: Value,
}

/// A (slot, value) pair proposed in a multi-decree 2a message.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Decree {
    pub slot: Slot,
    pub val: Value,
}

pub type VoteSet = BTreeSet<Vote>;
pub type DecreeSet = BTreeSet<Decree>;

/// A protocol message. The derived ordering is the canonical total order:
/// tag first (1a < 1b < 2a < 2b < preempt within each protocol family),
/// then fields in declaration order; vote and decree sets compare as sorted
/// sequences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Message {
    /// Single-decree phase 1a request.
    OneA { bal: Ballot },
    /// Single-decree phase 1b promise carrying the highest accepted proposal
    /// (or the `-1`/placeholder pair if the acceptor accepted nothing).
    OneB {
        acc: AcceptorId,
        bal: Ballot,
        max_vbal: Ballot,
        max_val: MaybeValue,
    },
    /// Single-decree phase 2a proposal.
    TwoA { bal: Ballot, val: Value },
    /// Single-decree phase 2b vote.
    TwoB {
        acc: AcceptorId,
        bal: Ballot,
        val: Value,
    },
    /// Multi-decree phase 1a request.
    MultiOneA { from: ProposerId, bal: Ballot },
    /// Multi-decree phase 1b promise carrying one maximal vote per slot.
    MultiOneB {
        from: AcceptorId,
        bal: Ballot,
        voted: VoteSet,
    },
    /// Multi-decree phase 2a proposal carrying a set of decrees.
    MultiTwoA {
        from: ProposerId,
        bal: Ballot,
        decrees: DecreeSet,
    },
    /// Multi-decree phase 2b vote for one decree.
    MultiTwoB {
        from: AcceptorId,
        bal: Ballot,
        slot: Slot,
        val: Value,
    },
    /// Preemption notice telling a proposer about a higher ballot.
    Preempt { to: ProposerId, bal: Ballot },
}

impl Message {
    /// The wire tag as used in traces.
    pub fn tag(&self) -> &'static str {
        match self {
            Message::OneA { .. } | Message::MultiOneA { .. } => "1a",
            Message::OneB { .. } | Message::MultiOneB { .. } => "1b",
            Message::TwoA { .. } | Message::MultiTwoA { .. } => "2a",
            Message::TwoB { .. } | Message::MultiTwoB { .. } => "2b",
            Message::Preempt { .. } => "preempt",
        }
    }

    /// The ballot field (present on every message kind).
    pub fn bal(&self) -> Ballot {
        match self {
            Message::OneA { bal }
            | Message::OneB { bal, .. }
            | Message::TwoA { bal, .. }
            | Message::TwoB { bal, .. }
            | Message::MultiOneA { bal, .. }
            | Message::MultiOneB { bal, .. }
            | Message::MultiTwoA { bal, .. }
            | Message::MultiTwoB { bal, .. }
            | Message::Preempt { bal, .. } => *bal,
        }
    }
}

/// The sole protocol state: a finite, duplicate-free set of sent messages.
/// It only grows under actions. Internally a sorted vector, so iteration
/// order is the canonical message order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct SentState {
    msgs: Vec<Message>,
}

impl SentState {
    pub fn empty() -> Self {
        SentState { msgs: Vec::new() }
    }

    pub fn from_messages<I: IntoIterator<Item = Message>>(msgs: I) -> Self {
        let mut v: Vec<Message> = msgs.into_iter().collect();
        v.sort();
        v.dedup();
        SentState { msgs: v }
    }

    pub fn len(&self) -> usize {
        self.msgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.msgs.is_empty()
    }

    pub fn contains(&self, m: &Message) -> bool {
        self.msgs.binary_search(m).is_ok()
    }

    pub fn contains_all(&self, delta: &[Message]) -> bool {
        delta.iter().all(|m| self.contains(m))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Message> {
        self.msgs.iter()
    }

    pub fn is_subset_of(&self, other: &SentState) -> bool {
        self.msgs.iter().all(|m| other.contains(m))
    }

    /// The state with `delta` added. `delta` must be sorted and unique.
    pub fn with_all(&self, delta: &[Message]) -> SentState {
        let mut merged = Vec::with_capacity(self.msgs.len() + delta.len());
        let mut a = self.msgs.iter().peekable();
        let mut b = delta.iter().peekable();
        while let (Some(x), Some(y)) = (a.peek(), b.peek()) {
            match x.cmp(y) {
                std::cmp::Ordering::Less => merged.push((*a.next().unwrap()).clone()),
                std::cmp::Ordering::Greater => merged.push((*b.next().unwrap()).clone()),
                std::cmp::Ordering::Equal => {
                    merged.push((*a.next().unwrap()).clone());
                    b.next();
                }
            }
        }
        merged.extend(a.cloned());
        merged.extend(b.cloned());
        SentState { msgs: merged }
    }

    /// A compact byte encoding that is injective over states and stable
    /// across runs: a message count followed by each message in canonical
    /// order with a fixed per-tag layout.
    pub fn canonical_encoding(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + self.msgs.len() * 8);
        out.extend_from_slice(&(self.msgs.len() as u32).to_le_bytes());
        for m in &self.msgs {
            encode_message(m, &mut out);
        }
        out
    }
}

fn encode_value(v: Value, out: &mut Vec<u8>) {
    out.push(v.0);
}

fn encode_maybe_value(v: MaybeValue, out: &mut Vec<u8>) {
    match v {
        MaybeValue::None => out.push(0xFF),
        MaybeValue::Val(v) => out.push(v.0),
    }
}

fn encode_message(m: &Message, out: &mut Vec<u8>) {
    match m {
        Message::OneA { bal } => {
            out.push(0);
            out.extend_from_slice(&bal.0.to_le_bytes());
        }
        Message::OneB {
            acc,
            bal,
            max_vbal,
            max_val,
        } => {
            out.push(1);
            out.push(acc.0);
            out.extend_from_slice(&bal.0.to_le_bytes());
            out.extend_from_slice(&max_vbal.0.to_le_bytes());
            encode_maybe_value(*max_val, out);
        }
        Message::TwoA { bal, val } => {
            out.push(2);
            out.extend_from_slice(&bal.0.to_le_bytes());
            encode_value(*val, out);
        }
        Message::TwoB { acc, bal, val } => {
            out.push(3);
            out.push(acc.0);
            out.extend_from_slice(&bal.0.to_le_bytes());
            encode_value(*val, out);
        }
        Message::MultiOneA { from, bal } => {
            out.push(4);
            out.push(from.0);
            out.extend_from_slice(&bal.0.to_le_bytes());
        }
        Message::MultiOneB { from, bal, voted } => {
            out.push(5);
            out.push(from.0);
            out.extend_from_slice(&bal.0.to_le_bytes());
            out.extend_from_slice(&(voted.len() as u16).to_le_bytes());
            for v in voted {
                out.extend_from_slice(&v.bal.0.to_le_bytes());
                out.push(v.slot.0);
                encode_value(v.val, out);
            }
        }
        Message::MultiTwoA { from, bal, decrees } => {
            out.push(6);
            out.push(from.0);
            out.extend_from_slice(&bal.0.to_le_bytes());
            out.extend_from_slice(&(decrees.len() as u16).to_le_bytes());
            for d in decrees {
                out.push(d.slot.0);
                encode_value(d.val, out);
            }
        }
        Message::MultiTwoB {
            from,
            bal,
            slot,
            val,
        } => {
            out.push(7);
            out.push(from.0);
            out.extend_from_slice(&bal.0.to_le_bytes());
            out.push(slot.0);
            encode_value(*val, out);
        }
        Message::Preempt { to, bal } => {
            out.push(8);
            out.push(to.0);
            out.extend_from_slice(&bal.0.to_le_bytes());
        }
    }
}

/// A family of acceptor subsets with pairwise nonempty intersection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuorumSystem {
    quorums: Vec<BTreeSet<AcceptorId>>,
}

/// Witness for a failed quorum intersection check: two disjoint quorums.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuorumViolation {
    pub q1: BTreeSet<AcceptorId>,
    pub q2: BTreeSet<AcceptorId>,
}

impl QuorumSystem {
    /// Builds a quorum system from explicit sets, sorted canonically.
    pub fn new<I: IntoIterator<Item = BTreeSet<AcceptorId>>>(quorums: I) -> Self {
        let mut qs: Vec<BTreeSet<AcceptorId>> = quorums.into_iter().collect();
        qs.sort();
        qs.dedup();
        QuorumSystem { quorums: qs }
    }

    /// Quorums in canonical order.
    pub fn iter(&self) -> std::slice::Iter<'_, BTreeSet<AcceptorId>> {
        self.quorums.iter()
    }

    pub fn len(&self) -> usize {
        self.quorums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quorums.is_empty()
    }
}

/// All subsets containing more than half of the given acceptors.
pub fn majority_quorums(acceptors: &BTreeSet<AcceptorId>) -> QuorumSystem {
    assert!(!acceptors.is_empty(), "majority of an empty acceptor set");
    assert!(acceptors.len() <= 16, "acceptor set too large to enumerate");
    let ids: Vec<AcceptorId> = acceptors.iter().copied().collect();
    let n = ids.len();
    let mut quorums = Vec::new();
    for mask in 1u32..(1 << n) {
        if 2 * (mask.count_ones() as usize) > n {
            let q: BTreeSet<AcceptorId> = ids
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| *a)
                .collect();
            quorums.push(q);
        }
    }
    QuorumSystem::new(quorums)
}

/// Checks that every pair of quorums intersects; on failure returns the
/// offending pair.
pub fn validate_quorum_system(q: &QuorumSystem) -> Result<(), QuorumViolation> {
    for (i, q1) in q.quorums.iter().enumerate() {
        for q2 in &q.quorums[i..] {
            if q1.intersection(q2).next().is_none() {
                return Err(QuorumViolation {
                    q1: q1.clone(),
                    q2: q2.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Which protocol specification a scope exercises.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Variant {
    Basic,
    BasicUnsafe2a,
    Multi,
    MultiPreempt,
}

impl Variant {
    pub fn is_basic(self) -> bool {
        matches!(self, Variant::Basic | Variant::BasicUnsafe2a)
    }

    pub fn is_multi(self) -> bool {
        !self.is_basic()
    }

    pub fn has_preemption(self) -> bool {
        self == Variant::MultiPreempt
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Basic => "basic",
            Variant::BasicUnsafe2a => "basic-unsafe-2a",
            Variant::Multi => "multi",
            Variant::MultiPreempt => "multi-preempt",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "basic" => Some(Variant::Basic),
            "basic-unsafe-2a" => Some(Variant::BasicUnsafe2a),
            "multi" => Some(Variant::Multi),
            "multi-preempt" => Some(Variant::MultiPreempt),
            _ => None,
        }
    }
}

/// How the quorum system is specified in a scope.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuorumSpec {
    Majority,
    Explicit(Vec<BTreeSet<AcceptorId>>),
}

/// Finite exploration bounds: process counts, ballot/value/slot domains,
/// quorum system, and depth limit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scope {
    pub variant: Variant,
    pub n_acceptors: u8,
    /// Multi variants only; unused for single-decree variants.
    pub n_proposers: u8,
    /// Real ballots are `0..ballot_bound`.
    pub ballot_bound: i32,
    pub value_domain: Vec<String>,
    /// Multi variants only.
    pub slot_bound: u8,
    /// Cap on the size of the fresh-decree set a 2a action may add.
    pub max_new_proposals_per_2a: u8,
    pub quorums: QuorumSpec,
    /// `None` means unlimited.
    pub depth_limit: Option<u32>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ScopeError {
    #[error("{0} must be at least 1")]
    BoundTooSmall(&'static str),
    #[error("value domain must be nonempty")]
    EmptyValueDomain,
    #[error("value domain has duplicate symbol {0:?}")]
    DuplicateValue(String),
    #[error("quorum member {0} is not an acceptor index below {1}")]
    QuorumMemberOutOfRange(u8, u8),
    #[error("quorums {q1:?} and {q2:?} do not intersect")]
    QuorumsDisjoint { q1: Vec<u8>, q2: Vec<u8> },
    #[error("{0} is not valid for variant {1}")]
    FieldInvalidForVariant(&'static str, &'static str),
}

impl Scope {
    /// A single-decree scope with majority quorums and unlimited depth.
    pub fn basic(variant: Variant, n_acceptors: u8, ballot_bound: i32, n_values: u8) -> Scope {
        assert!(variant.is_basic());
        Scope {
            variant,
            n_acceptors,
            n_proposers: 0,
            ballot_bound,
            value_domain: default_value_domain(n_values),
            slot_bound: 0,
            max_new_proposals_per_2a: 0,
            quorums: QuorumSpec::Majority,
            depth_limit: None,
        }
    }

    /// A multi-decree scope with majority quorums and unlimited depth.
    pub fn multi(
        variant: Variant,
        n_acceptors: u8,
        n_proposers: u8,
        ballot_bound: i32,
        n_values: u8,
        slot_bound: u8,
        max_new: u8,
    ) -> Scope {
        assert!(variant.is_multi());
        Scope {
            variant,
            n_acceptors,
            n_proposers,
            ballot_bound,
            value_domain: default_value_domain(n_values),
            slot_bound,
            max_new_proposals_per_2a: max_new,
            quorums: QuorumSpec::Majority,
            depth_limit: None,
        }
    }

    pub fn validate(&self) -> Result<(), ScopeError> {
        if self.n_acceptors < 1 {
            return Err(ScopeError::BoundTooSmall("acceptors"));
        }
        if self.ballot_bound < 1 {
            return Err(ScopeError::BoundTooSmall("ballots"));
        }
        if self.value_domain.is_empty() {
            return Err(ScopeError::EmptyValueDomain);
        }
        let mut seen = BTreeSet::new();
        for sym in &self.value_domain {
            if !seen.insert(sym) {
                return Err(ScopeError::DuplicateValue(sym.clone()));
            }
        }
        if self.variant.is_multi() {
            if self.n_proposers < 1 {
                return Err(ScopeError::BoundTooSmall("proposers"));
            }
            if self.slot_bound < 1 {
                return Err(ScopeError::BoundTooSmall("slots"));
            }
        }
        if let QuorumSpec::Explicit(qs) = &self.quorums {
            for q in qs {
                for a in q {
                    if a.0 >= self.n_acceptors {
                        return Err(ScopeError::QuorumMemberOutOfRange(a.0, self.n_acceptors));
                    }
                }
            }
        }
        let system = self.quorum_system();
        if let Err(v) = validate_quorum_system(&system) {
            return Err(ScopeError::QuorumsDisjoint {
                q1: v.q1.iter().map(|a| a.0).collect(),
                q2: v.q2.iter().map(|a| a.0).collect(),
            });
        }
        Ok(())
    }

    pub fn quorum_system(&self) -> QuorumSystem {
        match &self.quorums {
            QuorumSpec::Majority => majority_quorums(&self.acceptor_ids().collect()),
            QuorumSpec::Explicit(qs) => QuorumSystem::new(qs.iter().cloned()),
        }
    }

    pub fn acceptor_ids(&self) -> impl Iterator<Item = AcceptorId> {
        (0..self.n_acceptors).map(AcceptorId)
    }

    pub fn proposer_ids(&self) -> impl Iterator<Item = ProposerId> {
        (0..self.n_proposers).map(ProposerId)
    }

    pub fn ballots(&self) -> impl Iterator<Item = Ballot> {
        (0..self.ballot_bound).map(Ballot)
    }

    pub fn values(&self) -> impl Iterator<Item = Value> {
        (0..self.value_domain.len() as u8).map(Value)
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot> {
        (0..self.slot_bound).map(Slot)
    }

    pub fn value_symbol(&self, v: Value) -> &str {
        &self.value_domain[v.0 as usize]
    }

    pub fn value_by_symbol(&self, sym: &str) -> Option<Value> {
        self.value_domain
            .iter()
            .position(|s| s == sym)
            .map(|i| Value(i as u8))
    }

    pub fn ballot_in_range(&self, b: Ballot) -> bool {
        b.0 >= 0 && b.0 < self.ballot_bound
    }

    pub fn value_in_range(&self, v: Value) -> bool {
        (v.0 as usize) < self.value_domain.len()
    }

    pub fn slot_in_range(&self, s: Slot) -> bool {
        s.0 < self.slot_bound
    }
}

pub fn default_value_domain(n: u8) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc_set(ids: &[u8]) -> BTreeSet<AcceptorId> {
        ids.iter().map(|i| AcceptorId(*i)).collect()
    }

    #[test]
    fn majority_of_three() {
        let q = majority_quorums(&acc_set(&[0, 1, 2]));
        let expected: Vec<BTreeSet<AcceptorId>> = vec![
            acc_set(&[0, 1]),
            acc_set(&[0, 1, 2]),
            acc_set(&[0, 2]),
            acc_set(&[1, 2]),
        ];
        assert_eq!(q.iter().cloned().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn majority_of_singleton() {
        let q = majority_quorums(&acc_set(&[0]));
        assert_eq!(q.iter().cloned().collect::<Vec<_>>(), vec![acc_set(&[0])]);
    }

    #[test]
    fn majority_of_four_matches_brute_force() {
        // Independent enumeration: all subsets of {0,1,2,3} with size > 2.
        let mut expected = Vec::new();
        for mask in 0u32..16 {
            if mask.count_ones() > 2 {
                let q: BTreeSet<AcceptorId> =
                    (0..4).filter(|i| mask & (1 << i) != 0).map(AcceptorId).collect();
                expected.push(q);
            }
        }
        expected.sort();
        assert_eq!(expected.len(), 5);
        let q = majority_quorums(&acc_set(&[0, 1, 2, 3]));
        assert_eq!(q.iter().cloned().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn majorities_always_intersect() {
        for n in 1..=6u8 {
            let acceptors: BTreeSet<AcceptorId> = (0..n).map(AcceptorId).collect();
            let q = majority_quorums(&acceptors);
            assert_eq!(validate_quorum_system(&q), Ok(()), "n = {n}");
        }
    }

    #[test]
    fn disjoint_quorums_rejected_with_witness() {
        let q = QuorumSystem::new(vec![acc_set(&[0]), acc_set(&[1])]);
        let v = validate_quorum_system(&q).unwrap_err();
        assert_eq!((v.q1, v.q2), (acc_set(&[0]), acc_set(&[1])));
    }

    #[test]
    fn pairwise_intersecting_quorums_accepted() {
        let q = QuorumSystem::new(vec![acc_set(&[0, 1]), acc_set(&[1, 2]), acc_set(&[0, 2])]);
        assert_eq!(validate_quorum_system(&q), Ok(()));
    }

    #[test]
    fn encoding_of_empty_state_is_fixed() {
        assert_eq!(SentState::empty().canonical_encoding(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn encoding_is_insertion_order_independent() {
        let m1 = Message::OneA { bal: Ballot(0) };
        let m2 = Message::TwoA {
            bal: Ballot(1),
            val: Value(0),
        };
        let a = SentState::from_messages([m1.clone(), m2.clone()]);
        let b = SentState::from_messages([m2, m1]);
        assert_eq!(a, b);
        assert_eq!(a.canonical_encoding(), b.canonical_encoding());
    }

    #[test]
    fn encoding_distinguishes_distinct_states() {
        let m1 = Message::OneA { bal: Ballot(0) };
        let m2 = Message::OneA { bal: Ballot(1) };
        let a = SentState::from_messages([m1.clone()]);
        let b = SentState::from_messages([m2]);
        let c = SentState::from_messages([m1]);
        assert_ne!(a.canonical_encoding(), b.canonical_encoding());
        assert_eq!(a.canonical_encoding(), c.canonical_encoding());
    }

    #[test]
    fn with_all_merges_and_dedups() {
        let m1 = Message::OneA { bal: Ballot(0) };
        let m2 = Message::OneA { bal: Ballot(1) };
        let s = SentState::from_messages([m1.clone()]);
        let s2 = s.with_all(&[m1.clone(), m2.clone()]);
        assert_eq!(s2.len(), 2);
        assert!(s.is_subset_of(&s2));
        assert!(s2.contains(&m1) && s2.contains(&m2));
    }

    #[test]
    fn scope_validation_catches_bad_bounds() {
        let mut s = Scope::basic(Variant::Basic, 3, 2, 2);
        assert_eq!(s.validate(), Ok(()));
        s.ballot_bound = 0;
        assert_eq!(s.validate(), Err(ScopeError::BoundTooSmall("ballots")));

        let mut s = Scope::multi(Variant::MultiPreempt, 3, 1, 2, 2, 1, 1);
        assert_eq!(s.validate(), Ok(()));
        s.n_proposers = 0;
        assert_eq!(s.validate(), Err(ScopeError::BoundTooSmall("proposers")));
    }

    #[test]
    fn scope_validation_checks_explicit_quorums() {
        let mut s = Scope::basic(Variant::Basic, 2, 1, 1);
        s.quorums = QuorumSpec::Explicit(vec![acc_set(&[0]), acc_set(&[1])]);
        assert!(matches!(s.validate(), Err(ScopeError::QuorumsDisjoint { .. })));
        s.quorums = QuorumSpec::Explicit(vec![acc_set(&[0, 5])]);
        assert!(matches!(
            s.validate(),
            Err(ScopeError::QuorumMemberOutOfRange(5, 2))
        ));
    }

    #[test]
    fn ballot_sentinel_orders_below_real_ballots() {
        assert!(Ballot::NEVER < Ballot(0));
        assert!(!Ballot::NEVER.is_real());
        assert!(Ballot(0).is_real());
    }
}
