//! Machine-readable (json-lines) and human-readable output, plus the parser
//! for round-tripping emitted traces.
//!
//! json-lines traces are one object per action with fields
//! `{step, action, params, delta}`, preceded by a header object
//! `{scope, variant, version}` and followed by a result object. Message
//! objects use the field names `type, bal, acc, from, to, val, slot,
//! maxVBal, maxVal, voted, decrees`; the never-voted sentinels serialize as
//! `maxVBal: -1` and `maxVal: null`.

use std::collections::BTreeSet;
use std::io::{self, Write};

use serde_json::{json, Map, Value as Json};

use crate::action::{ActionInstance, ActionParams};
use crate::domain::{
    AcceptorId, Ballot, Decree, MaybeValue, Message, ProposerId, QuorumSpec, Scope, SentState,
    Slot, Value, Variant, Vote,
};
use crate::explorer::ExplorationReport;
use crate::invariants::{state_check_names, CheckResult, Witness, WitnessValue};
use crate::simulator::{ChosenReport, HaltReason, RunRecord};

pub const FORMAT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
#[error("{0}")]
pub struct ParseError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

// ---------------------------------------------------------------------------
// messages

fn maybe_value_json(v: MaybeValue, scope: &Scope) -> Json {
    match v {
        MaybeValue::None => Json::Null,
        MaybeValue::Val(v) => json!(scope.value_symbol(v)),
    }
}

fn vote_json(v: &Vote, scope: &Scope) -> Json {
    json!({"bal": v.bal.0, "slot": v.slot.0, "val": scope.value_symbol(v.val)})
}

fn decree_json(d: &Decree, scope: &Scope) -> Json {
    json!({"slot": d.slot.0, "val": scope.value_symbol(d.val)})
}

pub fn message_to_json(m: &Message, scope: &Scope) -> Json {
    match m {
        Message::OneA { bal } => json!({"type": "1a", "bal": bal.0}),
        Message::OneB {
            acc,
            bal,
            max_vbal,
            max_val,
        } => json!({
            "type": "1b", "acc": acc.0, "bal": bal.0,
            "maxVBal": max_vbal.0, "maxVal": maybe_value_json(*max_val, scope)
        }),
        Message::TwoA { bal, val } => {
            json!({"type": "2a", "bal": bal.0, "val": scope.value_symbol(*val)})
        }
        Message::TwoB { acc, bal, val } => {
            json!({"type": "2b", "acc": acc.0, "bal": bal.0, "val": scope.value_symbol(*val)})
        }
        Message::MultiOneA { from, bal } => json!({"type": "1a", "from": from.0, "bal": bal.0}),
        Message::MultiOneB { from, bal, voted } => json!({
            "type": "1b", "from": from.0, "bal": bal.0,
            "voted": voted.iter().map(|v| vote_json(v, scope)).collect::<Vec<_>>()
        }),
        Message::MultiTwoA { from, bal, decrees } => json!({
            "type": "2a", "from": from.0, "bal": bal.0,
            "decrees": decrees.iter().map(|d| decree_json(d, scope)).collect::<Vec<_>>()
        }),
        Message::MultiTwoB {
            from,
            bal,
            slot,
            val,
        } => json!({
            "type": "2b", "from": from.0, "bal": bal.0,
            "slot": slot.0, "val": scope.value_symbol(*val)
        }),
        Message::Preempt { to, bal } => json!({"type": "preempt", "to": to.0, "bal": bal.0}),
    }
}

fn get_u8(v: &Json, key: &str) -> Result<u8, ParseError> {
    v.get(key)
        .and_then(Json::as_u64)
        .and_then(|n| u8::try_from(n).ok())
        .ok_or_else(|| ParseError(format!("missing or invalid field {key:?}")))
}

fn get_ballot(v: &Json, key: &str) -> Result<Ballot, ParseError> {
    v.get(key)
        .and_then(Json::as_i64)
        .and_then(|n| i32::try_from(n).ok())
        .map(Ballot)
        .ok_or_else(|| ParseError(format!("missing or invalid field {key:?}")))
}

fn get_value(v: &Json, key: &str, scope: &Scope) -> Result<Value, ParseError> {
    let sym = v
        .get(key)
        .and_then(Json::as_str)
        .ok_or_else(|| ParseError(format!("missing or invalid field {key:?}")))?;
    scope
        .value_by_symbol(sym)
        .ok_or_else(|| ParseError(format!("unknown value symbol {sym:?}")))
}

fn vote_from_json(v: &Json, scope: &Scope) -> Result<Vote, ParseError> {
    Ok(Vote {
        bal: get_ballot(v, "bal")?,
        slot: Slot(get_u8(v, "slot")?),
        val: get_value(v, "val", scope)?,
    })
}

fn decree_from_json(v: &Json, scope: &Scope) -> Result<Decree, ParseError> {
    Ok(Decree {
        slot: Slot(get_u8(v, "slot")?),
        val: get_value(v, "val", scope)?,
    })
}

pub fn message_from_json(v: &Json, scope: &Scope) -> Result<Message, ParseError> {
    let tag = v
        .get("type")
        .and_then(Json::as_str)
        .ok_or_else(|| ParseError("message without a type field".into()))?;
    if scope.variant.is_basic() {
        match tag {
            "1a" => Ok(Message::OneA {
                bal: get_ballot(v, "bal")?,
            }),
            "1b" => {
                let max_vbal = get_ballot(v, "maxVBal")?;
                let max_val = match v.get("maxVal") {
                    Some(Json::Null) | None => MaybeValue::None,
                    Some(_) => MaybeValue::Val(get_value(v, "maxVal", scope)?),
                };
                Ok(Message::OneB {
                    acc: AcceptorId(get_u8(v, "acc")?),
                    bal: get_ballot(v, "bal")?,
                    max_vbal,
                    max_val,
                })
            }
            "2a" => Ok(Message::TwoA {
                bal: get_ballot(v, "bal")?,
                val: get_value(v, "val", scope)?,
            }),
            "2b" => Ok(Message::TwoB {
                acc: AcceptorId(get_u8(v, "acc")?),
                bal: get_ballot(v, "bal")?,
                val: get_value(v, "val", scope)?,
            }),
            other => err(format!("unknown message type {other:?} for this variant")),
        }
    } else {
        match tag {
            "1a" => Ok(Message::MultiOneA {
                from: ProposerId(get_u8(v, "from")?),
                bal: get_ballot(v, "bal")?,
            }),
            "1b" => {
                let voted = v
                    .get("voted")
                    .and_then(Json::as_array)
                    .ok_or_else(|| ParseError("1b message without a voted array".into()))?
                    .iter()
                    .map(|x| vote_from_json(x, scope))
                    .collect::<Result<BTreeSet<Vote>, _>>()?;
                Ok(Message::MultiOneB {
                    from: AcceptorId(get_u8(v, "from")?),
                    bal: get_ballot(v, "bal")?,
                    voted,
                })
            }
            "2a" => {
                let decrees = v
                    .get("decrees")
                    .and_then(Json::as_array)
                    .ok_or_else(|| ParseError("2a message without a decrees array".into()))?
                    .iter()
                    .map(|x| decree_from_json(x, scope))
                    .collect::<Result<BTreeSet<Decree>, _>>()?;
                Ok(Message::MultiTwoA {
                    from: ProposerId(get_u8(v, "from")?),
                    bal: get_ballot(v, "bal")?,
                    decrees,
                })
            }
            "2b" => Ok(Message::MultiTwoB {
                from: AcceptorId(get_u8(v, "from")?),
                bal: get_ballot(v, "bal")?,
                slot: Slot(get_u8(v, "slot")?),
                val: get_value(v, "val", scope)?,
            }),
            "preempt" => Ok(Message::Preempt {
                to: ProposerId(get_u8(v, "to")?),
                bal: get_ballot(v, "bal")?,
            }),
            other => err(format!("unknown message type {other:?}")),
        }
    }
}

pub fn state_to_json(s: &SentState, scope: &Scope) -> Json {
    Json::Array(s.iter().map(|m| message_to_json(m, scope)).collect())
}

// ---------------------------------------------------------------------------
// scope

pub fn scope_to_json(scope: &Scope) -> Json {
    let mut map = Map::new();
    map.insert("variant".into(), json!(scope.variant.name()));
    map.insert("acceptors".into(), json!(scope.n_acceptors));
    if scope.variant.is_multi() {
        map.insert("proposers".into(), json!(scope.n_proposers));
    }
    map.insert("ballots".into(), json!(scope.ballot_bound));
    map.insert("values".into(), json!(scope.value_domain));
    if scope.variant.is_multi() {
        map.insert("slots".into(), json!(scope.slot_bound));
        map.insert("max-new".into(), json!(scope.max_new_proposals_per_2a));
    }
    match &scope.quorums {
        QuorumSpec::Majority => {
            map.insert("quorums".into(), json!("majority"));
        }
        QuorumSpec::Explicit(qs) => {
            let arr: Vec<Vec<u8>> = qs
                .iter()
                .map(|q| q.iter().map(|a| a.0).collect())
                .collect();
            map.insert("quorums".into(), json!(arr));
        }
    }
    match scope.depth_limit {
        None => map.insert("depth".into(), json!("unlimited")),
        Some(d) => map.insert("depth".into(), json!(d)),
    };
    Json::Object(map)
}

const SCOPE_KEYS: &[&str] = &[
    "variant",
    "acceptors",
    "proposers",
    "ballots",
    "values",
    "slots",
    "max-new",
    "maxnew",
    "quorums",
    "depth",
    "state-cap",
    "statecap",
];

/// Extra runtime options a scope document may carry alongside the scope.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScopeExtras {
    pub state_cap: Option<usize>,
}

/// Parses a scope document. Keys are the flag names without the leading
/// dashes; `values` takes a count or a list of symbols, `depth` a number or
/// `"unlimited"`, `quorums` `"majority"` or a list of acceptor-index lists.
/// Fields of the other protocol family are rejected, as are unknown keys.
pub fn scope_from_json(v: &Json) -> Result<(Scope, ScopeExtras), ParseError> {
    let obj = v
        .as_object()
        .ok_or_else(|| ParseError("scope document must be a JSON object".into()))?;
    for key in obj.keys() {
        if !SCOPE_KEYS.contains(&key.as_str()) {
            return err(format!("unknown scope key {key:?}"));
        }
    }
    let variant_name = obj
        .get("variant")
        .and_then(Json::as_str)
        .ok_or_else(|| ParseError("scope document needs a variant".into()))?;
    let variant = Variant::parse(variant_name)
        .ok_or_else(|| ParseError(format!("unknown variant {variant_name:?}")))?;

    if variant.is_basic() {
        for key in ["proposers", "slots", "max-new", "maxnew"] {
            if obj.contains_key(key) {
                return err(format!("{key} is not valid for variant {variant_name}"));
            }
        }
    }

    let acceptors = match obj.get("acceptors") {
        None => 3,
        Some(x) => x
            .as_u64()
            .and_then(|n| u8::try_from(n).ok())
            .ok_or_else(|| ParseError("acceptors must be a small count".into()))?,
    };
    let ballots = match obj.get("ballots") {
        None => 2,
        Some(x) => x
            .as_i64()
            .and_then(|n| i32::try_from(n).ok())
            .ok_or_else(|| ParseError("ballots must be a count".into()))?,
    };
    let value_domain = match obj.get("values") {
        None => crate::domain::default_value_domain(2),
        Some(Json::Number(n)) => {
            let n = n
                .as_u64()
                .and_then(|n| u8::try_from(n).ok())
                .ok_or_else(|| ParseError("values count out of range".into()))?;
            crate::domain::default_value_domain(n)
        }
        Some(Json::Array(items)) => items
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| ParseError("values list entries must be strings".into()))
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return err("values must be a count or a list of symbols"),
    };
    let get_multi = |key: &str, alias: &str, default: u8| -> Result<u8, ParseError> {
        match obj.get(key).or_else(|| obj.get(alias)) {
            None => Ok(default),
            Some(x) => x
                .as_u64()
                .and_then(|n| u8::try_from(n).ok())
                .ok_or_else(|| ParseError(format!("{key} must be a small count"))),
        }
    };
    let proposers = get_multi("proposers", "proposers", 1)?;
    let slots = get_multi("slots", "slots", 1)?;
    let max_new = get_multi("max-new", "maxnew", 1)?;
    let quorums = match obj.get("quorums") {
        None => QuorumSpec::Majority,
        Some(Json::String(s)) if s == "majority" => QuorumSpec::Majority,
        Some(Json::Array(items)) => {
            let mut sets = Vec::new();
            for q in items {
                let ids = q
                    .as_array()
                    .ok_or_else(|| ParseError("quorums must be lists of acceptor indexes".into()))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .and_then(|n| u8::try_from(n).ok())
                            .map(AcceptorId)
                            .ok_or_else(|| ParseError("bad acceptor index in quorum".into()))
                    })
                    .collect::<Result<BTreeSet<AcceptorId>, _>>()?;
                sets.push(ids);
            }
            QuorumSpec::Explicit(sets)
        }
        Some(_) => return err("quorums must be \"majority\" or a list of lists"),
    };
    let depth_limit = match obj.get("depth") {
        None => None,
        Some(Json::String(s)) if s == "unlimited" => None,
        Some(x) => Some(
            x.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| ParseError("depth must be a number or \"unlimited\"".into()))?,
        ),
    };
    let state_cap = match obj.get("state-cap").or_else(|| obj.get("statecap")) {
        None => None,
        Some(x) => Some(
            x.as_u64()
                .and_then(|n| usize::try_from(n).ok())
                .ok_or_else(|| ParseError("state-cap must be a number".into()))?,
        ),
    };

    let scope = Scope {
        variant,
        n_acceptors: acceptors,
        n_proposers: if variant.is_multi() { proposers } else { 0 },
        ballot_bound: ballots,
        value_domain,
        slot_bound: if variant.is_multi() { slots } else { 0 },
        max_new_proposals_per_2a: if variant.is_multi() { max_new } else { 0 },
        quorums,
        depth_limit,
    };
    Ok((scope, ScopeExtras { state_cap }))
}

// ---------------------------------------------------------------------------
// actions

fn acceptor_list_json(ids: &[AcceptorId]) -> Json {
    Json::Array(ids.iter().map(|a| json!(a.0)).collect())
}

pub fn params_to_json(p: &ActionParams, scope: &Scope) -> Json {
    match p {
        ActionParams::Phase1a { bal } => json!({"bal": bal.0}),
        ActionParams::Phase1b {
            acc,
            bal,
            max_vbal,
            max_val,
        } => json!({
            "acc": acc.0, "bal": bal.0,
            "maxVBal": max_vbal.0, "maxVal": maybe_value_json(*max_val, scope)
        }),
        ActionParams::Phase2a {
            bal,
            val,
            quorum,
            support,
        } => json!({
            "bal": bal.0, "val": scope.value_symbol(*val),
            "quorum": acceptor_list_json(quorum),
            "support": support.iter().map(|m| message_to_json(m, scope)).collect::<Vec<_>>()
        }),
        ActionParams::Phase2b { acc, bal, val } => {
            json!({"acc": acc.0, "bal": bal.0, "val": scope.value_symbol(*val)})
        }
        ActionParams::MultiPhase1a { proposer, bal } => {
            json!({"proposer": proposer.0, "bal": bal.0})
        }
        ActionParams::MultiPhase1b { acc, bal } => json!({"acc": acc.0, "bal": bal.0}),
        ActionParams::MultiPhase2a {
            proposer,
            bal,
            quorum,
            support,
            new_decrees,
        } => json!({
            "proposer": proposer.0, "bal": bal.0,
            "quorum": acceptor_list_json(quorum),
            "support": support.iter().map(|m| message_to_json(m, scope)).collect::<Vec<_>>(),
            "new": new_decrees.iter().map(|d| decree_json(d, scope)).collect::<Vec<_>>()
        }),
        ActionParams::MultiPhase2b { acc, bal } => json!({"acc": acc.0, "bal": bal.0}),
        ActionParams::Preempt { acc, to, bal } => {
            json!({"acc": acc.0, "to": to.0, "bal": bal.0})
        }
    }
}

pub fn action_to_json(step: usize, a: &ActionInstance, scope: &Scope) -> Json {
    json!({
        "step": step,
        "action": a.name(),
        "params": params_to_json(&a.params, scope),
        "delta": a.delta.iter().map(|m| message_to_json(m, scope)).collect::<Vec<_>>()
    })
}

fn params_from_json(name: &str, p: &Json, scope: &Scope) -> Result<ActionParams, ParseError> {
    let basic = scope.variant.is_basic();
    let messages = |key: &str| -> Result<Vec<Message>, ParseError> {
        p.get(key)
            .and_then(Json::as_array)
            .ok_or_else(|| ParseError(format!("missing {key} in params")))?
            .iter()
            .map(|m| message_from_json(m, scope))
            .collect()
    };
    let quorum = || -> Result<Vec<AcceptorId>, ParseError> {
        p.get("quorum")
            .and_then(Json::as_array)
            .ok_or_else(|| ParseError("missing quorum in params".into()))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .and_then(|n| u8::try_from(n).ok())
                    .map(AcceptorId)
                    .ok_or_else(|| ParseError("bad acceptor index in quorum".into()))
            })
            .collect()
    };
    match (name, basic) {
        ("phase1a", true) => Ok(ActionParams::Phase1a {
            bal: get_ballot(p, "bal")?,
        }),
        ("phase1a", false) => Ok(ActionParams::MultiPhase1a {
            proposer: ProposerId(get_u8(p, "proposer")?),
            bal: get_ballot(p, "bal")?,
        }),
        ("phase1b", true) => {
            let max_val = match p.get("maxVal") {
                Some(Json::Null) | None => MaybeValue::None,
                Some(_) => MaybeValue::Val(get_value(p, "maxVal", scope)?),
            };
            Ok(ActionParams::Phase1b {
                acc: AcceptorId(get_u8(p, "acc")?),
                bal: get_ballot(p, "bal")?,
                max_vbal: get_ballot(p, "maxVBal")?,
                max_val,
            })
        }
        ("phase1b", false) => Ok(ActionParams::MultiPhase1b {
            acc: AcceptorId(get_u8(p, "acc")?),
            bal: get_ballot(p, "bal")?,
        }),
        ("phase2a", true) => Ok(ActionParams::Phase2a {
            bal: get_ballot(p, "bal")?,
            val: get_value(p, "val", scope)?,
            quorum: quorum()?,
            support: messages("support")?,
        }),
        ("phase2a", false) => {
            let new_decrees = p
                .get("new")
                .and_then(Json::as_array)
                .ok_or_else(|| ParseError("missing new decrees in params".into()))?
                .iter()
                .map(|d| decree_from_json(d, scope))
                .collect::<Result<BTreeSet<Decree>, _>>()?;
            Ok(ActionParams::MultiPhase2a {
                proposer: ProposerId(get_u8(p, "proposer")?),
                bal: get_ballot(p, "bal")?,
                quorum: quorum()?,
                support: messages("support")?,
                new_decrees,
            })
        }
        ("phase2b", true) => Ok(ActionParams::Phase2b {
            acc: AcceptorId(get_u8(p, "acc")?),
            bal: get_ballot(p, "bal")?,
            val: get_value(p, "val", scope)?,
        }),
        ("phase2b", false) => Ok(ActionParams::MultiPhase2b {
            acc: AcceptorId(get_u8(p, "acc")?),
            bal: get_ballot(p, "bal")?,
        }),
        ("preempt", false) => Ok(ActionParams::Preempt {
            acc: AcceptorId(get_u8(p, "acc")?),
            to: ProposerId(get_u8(p, "to")?),
            bal: get_ballot(p, "bal")?,
        }),
        (other, _) => err(format!("unknown action {other:?} for this variant")),
    }
}

pub fn action_from_json(v: &Json, scope: &Scope) -> Result<ActionInstance, ParseError> {
    let name = v
        .get("action")
        .and_then(Json::as_str)
        .ok_or_else(|| ParseError("action line without an action field".into()))?;
    let params = params_from_json(
        name,
        v.get("params")
            .ok_or_else(|| ParseError("action line without params".into()))?,
        scope,
    )?;
    let delta = v
        .get("delta")
        .and_then(Json::as_array)
        .ok_or_else(|| ParseError("action line without a delta array".into()))?
        .iter()
        .map(|m| message_from_json(m, scope))
        .collect::<Result<Vec<Message>, _>>()?;
    Ok(ActionInstance::new(params, delta))
}

// ---------------------------------------------------------------------------
// check results and reports

fn witness_to_json(w: &Witness, scope: &Scope) -> Json {
    let mut map = Map::new();
    for (name, value) in w {
        let v = match value {
            WitnessValue::Msg(m) => message_to_json(m, scope),
            WitnessValue::Bal(b) => json!(b.0),
            WitnessValue::Val(v) => json!(scope.value_symbol(*v)),
            WitnessValue::Slot(s) => json!(s.0),
            WitnessValue::Acceptor(a) => json!(a.0),
            WitnessValue::Proposer(p) => json!(p.0),
            WitnessValue::Quorum(q) => acceptor_list_json(q),
        };
        map.insert((*name).to_string(), v);
    }
    Json::Object(map)
}

fn check_result_to_json(r: &CheckResult, scope: &Scope) -> Json {
    let mut map = Map::new();
    map.insert("name".into(), json!(r.name));
    map.insert(
        "status".into(),
        json!(if r.failed() { "fails" } else { "holds" }),
    );
    if let Some(w) = &r.witness {
        map.insert("witness".into(), witness_to_json(w, scope));
    }
    Json::Object(map)
}

pub fn header_json(scope: &Scope) -> Json {
    json!({
        "scope": scope_to_json(scope),
        "variant": scope.variant.name(),
        "version": FORMAT_VERSION,
    })
}

fn trace_json(trace: &[ActionInstance], scope: &Scope) -> Json {
    Json::Array(
        trace
            .iter()
            .enumerate()
            .map(|(i, a)| action_to_json(i + 1, a, scope))
            .collect(),
    )
}

pub fn report_result_json(report: &ExplorationReport) -> Json {
    let scope = &report.scope;
    let status = if report.has_violations() {
        "violation"
    } else if !report.complete {
        "incomplete"
    } else {
        "ok"
    };
    json!({
        "status": status,
        "states": report.states_visited,
        "transitions": report.transitions,
        "max_depth": report.max_depth_reached,
        "complete": report.complete,
        "state_cap_hit": report.state_cap_hit,
        "duration_ms": report.duration_ms,
        "violations": report.violations.iter().map(|v| json!({
            "check": check_result_to_json(&v.check, scope),
            "state": state_to_json(&v.state, scope),
            "trace": trace_json(&v.trace, scope),
        })).collect::<Vec<_>>(),
    })
}

pub fn emit_report_json(w: &mut dyn Write, report: &ExplorationReport) -> io::Result<()> {
    let scope = &report.scope;
    writeln!(w, "{}", header_json(scope))?;
    if let Some(v) = report.violations.first() {
        for (i, a) in v.trace.iter().enumerate() {
            writeln!(w, "{}", action_to_json(i + 1, a, scope))?;
        }
    }
    writeln!(w, "{}", report_result_json(report))
}

fn halt_json(h: &HaltReason) -> Json {
    match h {
        HaltReason::MaxSteps => json!({"reason": "max-steps"}),
        HaltReason::NoEnabledAction => json!({"reason": "no-enabled-action"}),
        HaltReason::CheckFailure => json!({"reason": "check-failure"}),
        HaltReason::DisabledStep {
            step,
            action,
            guard,
            detail,
        } => json!({
            "reason": "disabled-step", "step": step, "action": action,
            "guard": guard, "detail": detail
        }),
    }
}

fn chosen_json(c: &ChosenReport, scope: &Scope) -> Json {
    match c {
        ChosenReport::Basic(vals) => json!({
            "values": vals.iter().map(|v| scope.value_symbol(*v)).collect::<Vec<_>>()
        }),
        ChosenReport::Multi(pairs) => json!({
            "slots": pairs.iter().map(|(s, v)| json!({
                "slot": s.0, "val": scope.value_symbol(*v)
            })).collect::<Vec<_>>()
        }),
    }
}

pub fn emit_run_json(w: &mut dyn Write, rec: &RunRecord) -> io::Result<()> {
    let scope = &rec.scope;
    writeln!(w, "{}", header_json(scope))?;
    for (i, a) in rec.trace.iter().enumerate() {
        writeln!(w, "{}", action_to_json(i + 1, a, scope))?;
    }
    let status = if rec.clean() { "ok" } else { "violation" };
    let result = json!({
        "status": status,
        "seed": rec.seed,
        "steps": rec.steps,
        "halt": halt_json(&rec.halt),
        "chosen": chosen_json(&rec.chosen, scope),
        "checks": rec.check_failures.iter()
            .map(|r| check_result_to_json(r, scope)).collect::<Vec<_>>(),
        "final_state": state_to_json(&rec.final_state, scope),
    });
    writeln!(w, "{result}")
}

// ---------------------------------------------------------------------------
// human rendering

pub fn human_message(m: &Message, scope: &Scope) -> String {
    let val = |v: &Value| scope.value_symbol(*v).to_string();
    match m {
        Message::OneA { bal } => format!("1a{{bal:{bal}}}"),
        Message::OneB {
            acc,
            bal,
            max_vbal,
            max_val,
        } => {
            let mv = match max_val {
                MaybeValue::None => "none".to_string(),
                MaybeValue::Val(v) => val(v),
            };
            format!("1b{{acc:{}, bal:{bal}, maxVBal:{max_vbal}, maxVal:{mv}}}", acc.0)
        }
        Message::TwoA { bal, val: v } => format!("2a{{bal:{bal}, val:{}}}", val(v)),
        Message::TwoB { acc, bal, val: v } => {
            format!("2b{{acc:{}, bal:{bal}, val:{}}}", acc.0, val(v))
        }
        Message::MultiOneA { from, bal } => format!("1a{{from:p{}, bal:{bal}}}", from.0),
        Message::MultiOneB { from, bal, voted } => {
            let votes: Vec<String> = voted
                .iter()
                .map(|v| format!("({},{},{})", v.bal, v.slot.0, val(&v.val)))
                .collect();
            format!("1b{{from:{}, bal:{bal}, voted:{{{}}}}}", from.0, votes.join(","))
        }
        Message::MultiTwoA { from, bal, decrees } => {
            let ds: Vec<String> = decrees
                .iter()
                .map(|d| format!("({},{})", d.slot.0, val(&d.val)))
                .collect();
            format!("2a{{from:p{}, bal:{bal}, decrees:{{{}}}}}", from.0, ds.join(","))
        }
        Message::MultiTwoB {
            from,
            bal,
            slot,
            val: v,
        } => format!("2b{{from:{}, bal:{bal}, slot:{}, val:{}}}", from.0, slot.0, val(v)),
        Message::Preempt { to, bal } => format!("preempt{{to:p{}, bal:{bal}}}", to.0),
    }
}

fn human_params(p: &ActionParams, scope: &Scope) -> String {
    let val = |v: &Value| scope.value_symbol(*v).to_string();
    match p {
        ActionParams::Phase1a { bal } => format!("bal={bal}"),
        ActionParams::Phase1b {
            acc,
            bal,
            max_vbal,
            max_val,
        } => {
            let mv = match max_val {
                MaybeValue::None => "none".to_string(),
                MaybeValue::Val(v) => val(v),
            };
            format!("acc={} bal={bal} maxVBal={max_vbal} maxVal={mv}", acc.0)
        }
        ActionParams::Phase2a {
            bal, val: v, quorum, ..
        } => {
            let q: Vec<String> = quorum.iter().map(|a| a.0.to_string()).collect();
            format!("bal={bal} val={} quorum={{{}}}", val(v), q.join(","))
        }
        ActionParams::Phase2b { acc, bal, val: v } => {
            format!("acc={} bal={bal} val={}", acc.0, val(v))
        }
        ActionParams::MultiPhase1a { proposer, bal } => {
            format!("proposer=p{} bal={bal}", proposer.0)
        }
        ActionParams::MultiPhase1b { acc, bal } => format!("acc={} bal={bal}", acc.0),
        ActionParams::MultiPhase2a {
            proposer,
            bal,
            quorum,
            ..
        } => {
            let q: Vec<String> = quorum.iter().map(|a| a.0.to_string()).collect();
            format!("proposer=p{} bal={bal} quorum={{{}}}", proposer.0, q.join(","))
        }
        ActionParams::MultiPhase2b { acc, bal } => format!("acc={} bal={bal}", acc.0),
        ActionParams::Preempt { acc, to, bal } => {
            format!("acc={} to=p{} bal={bal}", acc.0, to.0)
        }
    }
}

pub fn human_trace(w: &mut dyn Write, trace: &[ActionInstance], scope: &Scope) -> io::Result<()> {
    writeln!(w, "  step  action   params                                   adds")?;
    for (i, a) in trace.iter().enumerate() {
        let adds: Vec<String> = a.delta.iter().map(|m| human_message(m, scope)).collect();
        writeln!(
            w,
            "  {:>4}  {:<8} {:<40} {}",
            i + 1,
            a.name(),
            human_params(&a.params, scope),
            adds.join(", ")
        )?;
    }
    Ok(())
}

fn human_witness(wt: &Witness, scope: &Scope) -> String {
    wt.iter()
        .map(|(name, value)| {
            let v = match value {
                WitnessValue::Msg(m) => human_message(m, scope),
                WitnessValue::Bal(b) => b.to_string(),
                WitnessValue::Val(v) => scope.value_symbol(*v).to_string(),
                WitnessValue::Slot(s) => s.0.to_string(),
                WitnessValue::Acceptor(a) => a.0.to_string(),
                WitnessValue::Proposer(p) => format!("p{}", p.0),
                WitnessValue::Quorum(q) => {
                    let ids: Vec<String> = q.iter().map(|a| a.0.to_string()).collect();
                    format!("{{{}}}", ids.join(","))
                }
            };
            format!("{name}={v}")
        })
        .collect::<Vec<_>>()
        .join("  ")
}

pub fn human_scope_line(scope: &Scope) -> String {
    let depth = match scope.depth_limit {
        None => "unlimited".to_string(),
        Some(d) => d.to_string(),
    };
    let quorums = match &scope.quorums {
        QuorumSpec::Majority => "majority".to_string(),
        QuorumSpec::Explicit(qs) => format!("{} explicit", qs.len()),
    };
    let mut parts = vec![
        format!("variant {}", scope.variant.name()),
        format!("{} acceptors", scope.n_acceptors),
    ];
    if scope.variant.is_multi() {
        parts.push(format!("{} proposers", scope.n_proposers));
    }
    parts.push(format!("{} ballots", scope.ballot_bound));
    parts.push(format!("values {{{}}}", scope.value_domain.join(",")));
    if scope.variant.is_multi() {
        parts.push(format!("{} slots", scope.slot_bound));
        parts.push(format!("max-new {}", scope.max_new_proposals_per_2a));
    }
    parts.push(format!("{quorums} quorums"));
    parts.push(format!("depth {depth}"));
    parts.join(", ")
}

pub fn emit_report_human(
    w: &mut dyn Write,
    report: &ExplorationReport,
    inductive: bool,
) -> io::Result<()> {
    let scope = &report.scope;
    writeln!(w, "{}", human_scope_line(scope))?;
    writeln!(
        w,
        "states visited: {}  transitions: {}  max depth: {}  duration: {}ms",
        report.states_visited, report.transitions, report.max_depth_reached, report.duration_ms
    )?;
    let mut checks: Vec<&str> = state_check_names(scope.variant).to_vec();
    checks.push("SafeAtStable");
    if inductive {
        checks.push("inductiveness");
    }
    writeln!(w, "checks: {}", checks.join(" "))?;
    if !report.complete {
        let why = if report.state_cap_hit {
            "state cap hit"
        } else {
            "depth limit reached"
        };
        writeln!(
            w,
            "note: exploration incomplete ({why}); a clean result only covers the explored prefix"
        )?;
    }
    if report.violations.is_empty() {
        writeln!(w, "result: ok, no violations")?;
    } else {
        writeln!(w, "result: VIOLATION, {} check(s) failed", report.violations.len())?;
        for v in &report.violations {
            writeln!(w, "violation: {}", v.check.name)?;
            if let Some(wt) = &v.check.witness {
                writeln!(w, "  witness: {}", human_witness(wt, scope))?;
            }
            writeln!(w, "  state ({} messages):", v.state.len())?;
            for m in v.state.iter() {
                writeln!(w, "    {}", human_message(m, scope))?;
            }
            writeln!(w, "  trace ({} steps):", v.trace.len())?;
            human_trace(w, &v.trace, scope)?;
        }
    }
    Ok(())
}

pub fn emit_run_human(w: &mut dyn Write, rec: &RunRecord) -> io::Result<()> {
    let scope = &rec.scope;
    writeln!(w, "{}", human_scope_line(scope))?;
    match rec.seed {
        Some(seed) => writeln!(w, "seed {seed}, {} steps executed", rec.steps)?,
        None => writeln!(w, "scripted run, {} steps executed", rec.steps)?,
    }
    if !rec.trace.is_empty() {
        human_trace(w, &rec.trace, scope)?;
    }
    match &rec.halt {
        HaltReason::MaxSteps => writeln!(w, "halted: step budget exhausted")?,
        HaltReason::NoEnabledAction => writeln!(w, "halted: no action enabled")?,
        HaltReason::CheckFailure => writeln!(w, "halted: check failure")?,
        HaltReason::DisabledStep {
            step,
            action,
            guard,
            detail,
        } => writeln!(
            w,
            "step {step} {action} disabled: guard '{guard}' ({detail})"
        )?,
    }
    match &rec.chosen {
        ChosenReport::Basic(vals) => {
            let syms: Vec<&str> = vals.iter().map(|v| scope.value_symbol(*v)).collect();
            writeln!(
                w,
                "chosen: {}",
                if syms.is_empty() { "(none)".to_string() } else { syms.join(", ") }
            )?;
        }
        ChosenReport::Multi(pairs) => {
            let syms: Vec<String> = pairs
                .iter()
                .map(|(s, v)| format!("slot {} = {}", s.0, scope.value_symbol(*v)))
                .collect();
            writeln!(
                w,
                "chosen: {}",
                if syms.is_empty() { "(none)".to_string() } else { syms.join(", ") }
            )?;
        }
    }
    if rec.clean() {
        writeln!(w, "result: ok, online checks clean")?;
    } else {
        writeln!(w, "result: VIOLATION")?;
        for r in &rec.check_failures {
            match &r.witness {
                Some(wt) => writeln!(w, "  {} fails: {}", r.name, human_witness(wt, scope))?,
                None => writeln!(w, "  {} fails", r.name)?,
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// parsing emitted json-lines back

#[derive(Debug, Clone)]
pub struct ParsedLines {
    pub scope: Scope,
    pub actions: Vec<ActionInstance>,
    pub result: Json,
}

/// Parses a json-lines document emitted by this module: a header line, zero
/// or more action lines, and a result line.
pub fn parse_json_lines(text: &str) -> Result<ParsedLines, ParseError> {
    let mut scope: Option<Scope> = None;
    let mut actions = Vec::new();
    let mut result: Option<Json> = None;
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Json = serde_json::from_str(line)
            .map_err(|e| ParseError(format!("line {}: {e}", lineno + 1)))?;
        if v.get("scope").is_some() {
            let (s, _) = scope_from_json(&v["scope"])?;
            scope = Some(s);
        } else if v.get("step").is_some() {
            let s = scope
                .as_ref()
                .ok_or_else(|| ParseError("action line before header".into()))?;
            actions.push(action_from_json(&v, s)?);
        } else if v.get("status").is_some() {
            result = Some(v);
        } else {
            return err(format!("line {}: unrecognized object", lineno + 1));
        }
    }
    Ok(ParsedLines {
        scope: scope.ok_or_else(|| ParseError("missing header line".into()))?,
        actions,
        result: result.ok_or_else(|| ParseError("missing result line".into()))?,
    })
}
