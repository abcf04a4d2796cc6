//! JSON formats for complexes, scenarios, models, morphisms and verdicts.
//!
//! Rationals are written as `"p/q"` strings, or integer strings when the
//! denominator is 1. Simplices are keyed by their canonical key `"a,b"`.
//! Parse errors name the offending field.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::bundle::BundleScenario;
use crate::complex::{split_top_level, Simplex, SimplicialComplex, SimplicialRelation, Vertex};
use crate::dist::{format_rational, parse_rational, Dist, Rational};
use crate::error::{Error, Result};
use crate::event::{event_presheaf, EventMorphism, EventScenario, EventTables, StandardScenario};
use crate::solve::{Certificate, Decision, EmpiricalModel, LpProblem, Verdict};
use crate::sset::{
    SSetMap, SimplicialDistribution, SimplicialScenario, StochMorphism, TruncatedSSet,
};

fn parse_err<T>(field: &str, msg: impl std::fmt::Display) -> Result<T> {
    Err(Error::Parse(format!("{field}: {msg}")))
}

fn get<'a>(v: &'a Value, key: &str, field: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("{field}: missing field {key:?}")))
}

fn as_object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{field}: expected an object")))
}

fn as_array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{field}: expected an array")))
}

fn as_str<'a>(v: &'a Value, field: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::Parse(format!("{field}: expected a string")))
}

fn strings(v: &Value, field: &str) -> Result<Vec<String>> {
    as_array(v, field)?
        .iter()
        .map(|s| as_str(s, field).map(str::to_string))
        .collect()
}

fn rational(v: &Value, field: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).or_else(|e| parse_err(field, e)),
        Value::Number(n) if n.is_i64() => {
            Ok(Rational::from_integer(n.as_i64().expect("integer").into()))
        }
        _ => parse_err(field, "expected a rational string such as \"1/2\""),
    }
}

fn vertex(name: &str, field: &str) -> Result<Vertex> {
    Vertex::parse(name).or_else(|e| parse_err(field, e))
}

fn simplex_of(names: &[String], field: &str) -> Result<Simplex> {
    Simplex::new(
        names
            .iter()
            .map(|n| vertex(n, field))
            .collect::<Result<Vec<_>>>()?,
    )
    .or_else(|e| parse_err(field, e))
}

fn simplex_key(key: &str, field: &str) -> Result<Simplex> {
    Simplex::parse_key(key).or_else(|e| parse_err(field, e))
}

fn weights_json<K: Ord + Clone>(d: &Dist<K>, label: impl Fn(&K) -> String) -> Value {
    Value::Object(
        d.iter()
            .map(|(k, w)| (label(k), Value::String(format_rational(w))))
            .collect(),
    )
}

fn weights_from<K: Ord + Clone>(
    v: &Value,
    field: &str,
    key: impl Fn(&str) -> Result<K>,
) -> Result<Dist<K>> {
    let mut pairs = Vec::new();
    for (k, w) in as_object(v, field)? {
        let w = rational(w, &format!("{field}.{k}"))?;
        if !w.is_zero() {
            pairs.push((key(k)?, w));
        }
    }
    Dist::from_weights(pairs).or_else(|e| parse_err(field, e))
}

/// `{"vertices": [...], "maximal": [[...], ...]}`.
pub fn complex_to_json(c: &SimplicialComplex) -> Value {
    json!({
        "vertices": c.vertices().iter().map(Vertex::name).collect::<Vec<_>>(),
        "maximal": c.maximal().iter().map(|s| s.vertices().iter().map(Vertex::name).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn complex_from_json(v: &Value) -> Result<SimplicialComplex> {
    let maximal = as_array(get(v, "maximal", "complex")?, "complex.maximal")?
        .iter()
        .map(|s| simplex_of(&strings(s, "complex.maximal")?, "complex.maximal"))
        .collect::<Result<Vec<_>>>()?;
    let vertices = match v.get("vertices") {
        Some(vs) => strings(vs, "complex.vertices")?
            .iter()
            .map(|n| vertex(n, "complex.vertices"))
            .collect::<Result<Vec<_>>>()?,
        None => maximal
            .iter()
            .flat_map(|s| s.vertices().iter().cloned())
            .collect(),
    };
    SimplicialComplex::new(vertices, maximal).or_else(|e| parse_err("complex", e))
}

/// `{"source": complex, "target": complex, "map": {"a": ["p","q"], ...}}`.
pub fn relation_to_json(r: &SimplicialRelation) -> Value {
    json!({
        "source": complex_to_json(r.source()),
        "target": complex_to_json(r.target()),
        "map": relation_map_json(r),
    })
}

fn relation_map_json(r: &SimplicialRelation) -> Value {
    Value::Object(
        r.vertex_map()
            .iter()
            .map(|(v, s)| {
                (
                    v.name().to_string(),
                    json!(s.vertices().iter().map(Vertex::name).collect::<Vec<_>>()),
                )
            })
            .collect(),
    )
}

fn relation_map_from(
    v: &Value,
    source: SimplicialComplex,
    target: SimplicialComplex,
    field: &str,
) -> Result<SimplicialRelation> {
    let map = as_object(v, field)?
        .iter()
        .map(|(k, s)| Ok((vertex(k, field)?, simplex_of(&strings(s, field)?, field)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    SimplicialRelation::new(source, target, map).or_else(|e| parse_err(field, e))
}

pub fn relation_from_json(v: &Value) -> Result<SimplicialRelation> {
    let source = complex_from_json(get(v, "source", "relation")?)?;
    let target = complex_from_json(get(v, "target", "relation")?)?;
    relation_map_from(get(v, "map", "relation")?, source, target, "relation.map")
}

/// A scenario of any of the three kinds.
#[derive(Clone, Debug)]
pub enum Scenario {
    Event(EventScenario),
    Bundle(BundleScenario),
    Simplicial(SimplicialScenario),
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Event(_) => "event",
            Scenario::Bundle(_) => "bundle",
            Scenario::Simplicial(_) => "simplicial",
        }
    }
}

pub fn event_to_json(f: &EventScenario) -> Value {
    let tables = f.to_tables();
    let sets: Map<String, Value> = tables
        .sets
        .iter()
        .map(|(s, labels)| (s.key(), json!(labels)))
        .collect();
    let restrictions: Map<String, Value> = tables
        .restrictions
        .iter()
        .map(|((s, t), table)| (format!("{}>{}", s.key(), t.key()), json!(table)))
        .collect();
    json!({"kind": "event", "complex": complex_to_json(f.base()), "sets": sets, "restrictions": restrictions})
}

/// Parses the raw tables of an event file without validating the axioms.
pub fn event_tables_from_json(v: &Value) -> Result<(SimplicialComplex, EventTables)> {
    let base = complex_from_json(get(v, "complex", "event")?)?;
    let mut tables = EventTables::default();
    for (k, labels) in as_object(get(v, "sets", "event")?, "event.sets")? {
        let field = format!("event.sets.{k}");
        tables
            .sets
            .insert(simplex_key(k, &field)?, strings(labels, &field)?);
    }
    if let Some(r) = v.get("restrictions") {
        for (k, table) in as_object(r, "event.restrictions")? {
            let field = format!("event.restrictions.{k}");
            let parts = split_top_level(k, '>');
            let [from, to] = parts.as_slice() else {
                return parse_err(&field, "expected a key of the form \"a,b>a\"");
            };
            let table = as_object(table, &field)?
                .iter()
                .map(|(a, b)| Ok((a.clone(), as_str(b, &field)?.to_string())))
                .collect::<Result<BTreeMap<_, _>>>()?;
            tables.restrictions.insert(
                (simplex_key(from, &field)?, simplex_key(to, &field)?),
                table,
            );
        }
    }
    Ok((base, tables))
}

pub fn standard_from_json(v: &Value) -> Result<StandardScenario> {
    let contexts = as_array(get(v, "contexts", "standard")?, "standard.contexts")?
        .iter()
        .map(|s| simplex_of(&strings(s, "standard.contexts")?, "standard.contexts"))
        .collect::<Result<Vec<_>>>()?;
    let complex =
        SimplicialComplex::generated_by(contexts).or_else(|e| parse_err("standard.contexts", e))?;
    let outcomes = as_object(get(v, "outcomes", "standard")?, "standard.outcomes")?
        .iter()
        .map(|(k, o)| {
            Ok((
                vertex(k, "standard.outcomes")?,
                strings(o, &format!("standard.outcomes.{k}"))?,
            ))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    StandardScenario::new(complex, outcomes).or_else(|e| parse_err("standard", e))
}

pub fn bundle_to_json(f: &BundleScenario) -> Value {
    let map: Map<String, Value> = f
        .vertex_map()
        .iter()
        .map(|(a, b)| (a.name().to_string(), Value::String(b.name().to_string())))
        .collect();
    json!({"kind": "bundle", "base": complex_to_json(f.base()), "total": complex_to_json(f.total()), "map": map})
}

/// Parses the parts of a bundle file without validating the axioms.
pub fn bundle_parts_from_json(
    v: &Value,
) -> Result<(
    SimplicialComplex,
    SimplicialComplex,
    BTreeMap<Vertex, Vertex>,
)> {
    let base = complex_from_json(get(v, "base", "bundle")?)?;
    let total = complex_from_json(get(v, "total", "bundle")?)?;
    let map = as_object(get(v, "map", "bundle")?, "bundle.map")?
        .iter()
        .map(|(a, b)| {
            Ok((
                vertex(a, "bundle.map")?,
                vertex(as_str(b, "bundle.map")?, "bundle.map")?,
            ))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok((total, base, map))
}

/// `{"d": 2, "simplices": {"0": [...]}, "faces": {"1": {"x": ["d0 x", ...]}},
/// "degens": {"0": {"x": ["s0 x", ...]}}}`.
pub fn sset_to_json(x: &TruncatedSSet) -> Value {
    let d = x.bound();
    let simplices: Map<String, Value> = (0..=d)
        .map(|n| (n.to_string(), json!(x.names(n))))
        .collect();
    let table = |n: usize, rows: &[Vec<usize>], to: usize| -> Value {
        Value::Object(
            rows.iter()
                .enumerate()
                .map(|(i, row)| {
                    (
                        x.name(n, i).to_string(),
                        json!(row.iter().map(|&t| x.name(to, t)).collect::<Vec<_>>()),
                    )
                })
                .collect(),
        )
    };
    let faces: Map<String, Value> = (1..=d)
        .map(|n| (n.to_string(), table(n, x.face_table(n), n - 1)))
        .collect();
    let degens: Map<String, Value> = (0..d)
        .map(|n| (n.to_string(), table(n, x.degen_table(n), n + 1)))
        .collect();
    json!({"d": d, "simplices": simplices, "faces": faces, "degens": degens})
}

pub fn sset_from_json(v: &Value) -> Result<TruncatedSSet> {
    let d = get(v, "d", "sset")?
        .as_u64()
        .ok_or_else(|| Error::Parse("sset.d: expected an integer".into()))? as usize;
    let simplices = as_object(get(v, "simplices", "sset")?, "sset.simplices")?;
    let names: Vec<Vec<String>> = (0..=d)
        .map(|n| {
            let field = format!("sset.simplices.{n}");
            strings(
                simplices
                    .get(&n.to_string())
                    .ok_or_else(|| Error::Parse(format!("{field}: missing")))?,
                &field,
            )
        })
        .collect::<Result<_>>()?;
    let index: Vec<BTreeMap<&str, usize>> = names
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect())
        .collect();
    let read_table = |key: &str, n: usize, to: usize, width: usize| -> Result<Vec<Vec<usize>>> {
        let field = format!("sset.{key}.{n}");
        let obj = as_object(
            get(get(v, key, "sset")?, &n.to_string(), &format!("sset.{key}"))?,
            &field,
        )?;
        names[n]
            .iter()
            .map(|x| {
                let row = strings(
                    obj.get(x)
                        .ok_or_else(|| Error::Parse(format!("{field}: no entry for {x}")))?,
                    &field,
                )?;
                if row.len() != width {
                    return parse_err(&field, format!("{x} needs {width} entries"));
                }
                row.iter()
                    .map(|t| {
                        index[to]
                            .get(t.as_str())
                            .copied()
                            .ok_or_else(|| Error::Parse(format!("{field}: unknown simplex {t}")))
                    })
                    .collect()
            })
            .collect()
    };
    let mut faces = vec![vec![vec![]; names[0].len()]];
    for n in 1..=d {
        faces.push(read_table("faces", n, n - 1, n + 1)?);
    }
    let mut degens = Vec::new();
    for n in 0..d {
        degens.push(read_table("degens", n, n + 1, n + 1)?);
    }
    degens.push(vec![vec![]; names[d].len()]);
    TruncatedSSet::new(d, names, faces, degens)
}

fn map_tables_json(m: &SSetMap) -> Value {
    let (s, t) = (m.source(), m.target());
    Value::Object(
        m.tables()
            .iter()
            .enumerate()
            .map(|(n, row)| {
                let entries: Map<String, Value> = row
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| {
                        (
                            s.name(n, x).to_string(),
                            Value::String(t.name(n, y).to_string()),
                        )
                    })
                    .collect();
                (n.to_string(), Value::Object(entries))
            })
            .collect(),
    )
}

fn map_from_json(
    v: &Value,
    source: Arc<TruncatedSSet>,
    target: Arc<TruncatedSSet>,
    field: &str,
) -> Result<SSetMap> {
    let obj = as_object(v, field)?;
    let tables = (0..=source.bound())
        .map(|n| {
            let level = as_object(
                obj.get(&n.to_string())
                    .ok_or_else(|| Error::Parse(format!("{field}.{n}: missing")))?,
                field,
            )?;
            source
                .names(n)
                .iter()
                .map(|x| {
                    let y = as_str(
                        level.get(x).ok_or_else(|| {
                            Error::Parse(format!("{field}.{n}: no entry for {x}"))
                        })?,
                        field,
                    )?;
                    target
                        .index_of(n, y)
                        .ok_or_else(|| Error::Parse(format!("{field}.{n}: unknown simplex {y}")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SSetMap::new(source, target, tables)
}

pub fn simplicial_to_json(f: &SimplicialScenario) -> Value {
    json!({
        "kind": "simplicial",
        "total": sset_to_json(f.total()),
        "base": sset_to_json(f.base()),
        "map": map_tables_json(f.map()),
    })
}

pub fn simplicial_from_json(v: &Value) -> Result<SimplicialScenario> {
    let total = Arc::new(sset_from_json(get(v, "total", "simplicial")?)?);
    let base = Arc::new(sset_from_json(get(v, "base", "simplicial")?)?);
    Ok(SimplicialScenario::new(map_from_json(
        get(v, "map", "simplicial")?,
        total,
        base,
        "simplicial.map",
    )?))
}

/// Reads any scenario file; `"standard"` files are expanded to event form.
pub fn scenario_from_json(v: &Value) -> Result<Scenario> {
    match as_str(get(v, "kind", "scenario")?, "scenario.kind")? {
        "event" => {
            let (base, tables) = event_tables_from_json(v)?;
            Ok(Scenario::Event(EventScenario::from_tables(&base, &tables)?))
        }
        "standard" => Ok(Scenario::Event(event_presheaf(&standard_from_json(v)?)?)),
        "bundle" => {
            let (total, base, map) = bundle_parts_from_json(v)?;
            Ok(Scenario::Bundle(BundleScenario::new(total, base, map)?))
        }
        "simplicial" => Ok(Scenario::Simplicial(simplicial_from_json(v)?)),
        other => parse_err("scenario.kind", format!("unknown kind {other:?}")),
    }
}

pub fn scenario_to_json(s: &Scenario) -> Value {
    match s {
        Scenario::Event(f) => event_to_json(f),
        Scenario::Bundle(f) => bundle_to_json(f),
        Scenario::Simplicial(f) => simplicial_to_json(f),
    }
}

/// `{"kind": "empirical", "dists": {"a,b": {"00": "1/2", ...}, ...}}`,
/// keyed by maximal simplex and outcome label.
pub fn model_to_json(f: &EventScenario, p: &EmpiricalModel) -> Value {
    let dists: Map<String, Value> = p
        .dists
        .iter()
        .map(|(sigma, d)| {
            let si = f.simplex_index(sigma).expect("base simplex");
            (sigma.key(), weights_json(d, |&o| f.outcomes(si)[o].clone()))
        })
        .collect();
    json!({"kind": "empirical", "dists": dists})
}

pub fn model_from_json(f: &EventScenario, v: &Value) -> Result<EmpiricalModel> {
    let mut dists = BTreeMap::new();
    for (k, d) in as_object(get(v, "dists", "model")?, "model.dists")? {
        let field = format!("model.dists.{k}");
        let sigma = simplex_key(k, &field)?;
        let si = f
            .simplex_index(&sigma)
            .ok_or_else(|| Error::Parse(format!("{field}: not a simplex of the base")))?;
        let d = weights_from(d, &field, |label| {
            f.outcome_index(si, label)
                .ok_or_else(|| Error::Parse(format!("{field}: unknown outcome {label:?}")))
        })?;
        dists.insert(sigma, d);
    }
    Ok(EmpiricalModel { dists })
}

/// `{"kind": "simplicial-distribution", "dists": {"n": {"x": {"e": "w"}}}}`.
/// Entries on degenerate simplices may be omitted and are then derived.
pub fn sdist_to_json(f: &SimplicialScenario, p: &SimplicialDistribution) -> Value {
    let dists: Map<String, Value> = p
        .dists
        .iter()
        .enumerate()
        .map(|(n, level)| {
            let entries: Map<String, Value> = level
                .iter()
                .enumerate()
                .map(|(x, d)| {
                    (
                        f.base().name(n, x).to_string(),
                        weights_json(d, |&e| f.total().name(n, e).to_string()),
                    )
                })
                .collect();
            (n.to_string(), Value::Object(entries))
        })
        .collect();
    json!({"kind": "simplicial-distribution", "dists": dists})
}

pub fn sdist_from_json(f: &SimplicialScenario, v: &Value) -> Result<SimplicialDistribution> {
    let obj = as_object(get(v, "dists", "distribution")?, "distribution.dists")?;
    let (xs, es) = (f.base(), f.total());
    let mut dists: Vec<Vec<Dist<usize>>> = Vec::with_capacity(f.bound() + 1);
    for n in 0..=f.bound() {
        let level = obj
            .get(&n.to_string())
            .map(|l| as_object(l, "distribution.dists"))
            .transpose()?;
        let mut row = Vec::with_capacity(xs.count(n));
        for x in 0..xs.count(n) {
            let name = xs.name(n, x);
            let field = format!("distribution.dists.{n}.{name}");
            let d = match level.and_then(|l| l.get(name)) {
                Some(d) => weights_from(d, &field, |e| {
                    es.index_of(n, e)
                        .ok_or_else(|| Error::Parse(format!("{field}: unknown simplex {e}")))
                })?,
                None => match xs.degenerate_from(n, x).first() {
                    Some(&(j, y)) => dists[n - 1][y].pushforward(|&e| es.degen(n - 1, e, j)),
                    None => {
                        return parse_err(&field, "missing distribution on a nondegenerate simplex")
                    }
                },
            };
            row.push(d);
        }
        dists.push(row);
    }
    Ok(SimplicialDistribution { dists })
}

/// `{"kind": "event-morphism", "source", "target", "relation": {...},
/// "components": {"σ′": {"source label": "target label"}}}` with components
/// at the maximal simplices of the target base.
pub fn event_morphism_to_json(m: &EventMorphism) -> Value {
    let (f, g) = (m.source(), m.target());
    let components: Map<String, Value> = g
        .base()
        .maximal()
        .iter()
        .map(|sigma| {
            let si = g.simplex_index(sigma).expect("maximal");
            let from = f.simplex_index(&m.relation().induce(sigma)).expect("image");
            let table: Map<String, Value> = m
                .component(si)
                .iter()
                .enumerate()
                .map(|(o, &t)| {
                    (
                        f.outcomes(from)[o].clone(),
                        Value::String(g.outcomes(si)[t].clone()),
                    )
                })
                .collect();
            (sigma.key(), Value::Object(table))
        })
        .collect();
    json!({
        "kind": "event-morphism",
        "source": event_to_json(f),
        "target": event_to_json(g),
        "relation": relation_map_json(m.relation()),
        "components": components,
    })
}

fn event_scenario(v: &Value, field: &str) -> Result<EventScenario> {
    match scenario_from_json(v)? {
        Scenario::Event(f) => Ok(f),
        other => parse_err(
            field,
            format!("expected an event scenario, got {}", other.kind()),
        ),
    }
}

pub fn event_morphism_from_json(v: &Value) -> Result<EventMorphism> {
    let f = event_scenario(get(v, "source", "morphism")?, "morphism.source")?;
    let g = event_scenario(get(v, "target", "morphism")?, "morphism.target")?;
    let relation = relation_map_from(
        get(v, "relation", "morphism")?,
        g.base().clone(),
        f.base().clone(),
        "morphism.relation",
    )?;
    let mut top = BTreeMap::new();
    for (k, table) in as_object(get(v, "components", "morphism")?, "morphism.components")? {
        let field = format!("morphism.components.{k}");
        let sigma = simplex_key(k, &field)?;
        let si = g
            .simplex_index(&sigma)
            .ok_or_else(|| Error::Parse(format!("{field}: not a target simplex")))?;
        let from = f
            .simplex_index(&relation.induce(&sigma))
            .expect("relation image");
        let table = as_object(table, &field)?;
        let comp = f
            .outcomes(from)
            .iter()
            .map(|label| {
                let t = as_str(
                    table
                        .get(label)
                        .ok_or_else(|| Error::Parse(format!("{field}: no entry for {label}")))?,
                    &field,
                )?;
                g.outcome_index(si, t)
                    .ok_or_else(|| Error::Parse(format!("{field}: unknown outcome {t}")))
            })
            .collect::<Result<Vec<_>>>()?;
        top.insert(sigma, comp);
    }
    EventMorphism::from_top_components(f, g, relation, &top)
}

/// `{"kind": "stochastic-morphism", "source", "target", "pi": {"n": {"y": "x"}},
/// "alpha": {"n": {"y": {"e": {"e′": "w"}}}}}`. Entries on degenerate
/// pullback simplices may be omitted and are then derived.
pub fn stoch_morphism_to_json(m: &StochMorphism) -> Value {
    let (f, g) = (m.source(), m.target());
    let pb = m.pullback();
    let mut alpha = Map::new();
    for (n, level) in pb.pairs.iter().enumerate() {
        let mut by_y: Map<String, Value> = Map::new();
        for (k, &(e, y)) in level.iter().enumerate() {
            let entry = by_y
                .entry(g.base().name(n, y).to_string())
                .or_insert_with(|| Value::Object(Map::new()));
            entry.as_object_mut().expect("object").insert(
                f.total().name(n, e).to_string(),
                weights_json(&m.alpha_tables()[n][k], |&v| {
                    g.total().name(n, v).to_string()
                }),
            );
        }
        alpha.insert(n.to_string(), Value::Object(by_y));
    }
    json!({
        "kind": "stochastic-morphism",
        "source": simplicial_to_json(f),
        "target": simplicial_to_json(g),
        "pi": map_tables_json(m.pi()),
        "alpha": alpha,
    })
}

fn simplicial_scenario(v: &Value, field: &str) -> Result<SimplicialScenario> {
    match scenario_from_json(v)? {
        Scenario::Simplicial(f) => Ok(f),
        other => parse_err(
            field,
            format!("expected a simplicial scenario, got {}", other.kind()),
        ),
    }
}

pub fn stoch_morphism_from_json(v: &Value) -> Result<StochMorphism> {
    let f = simplicial_scenario(get(v, "source", "morphism")?, "morphism.source")?;
    let g = simplicial_scenario(get(v, "target", "morphism")?, "morphism.target")?;
    let pi = map_from_json(
        get(v, "pi", "morphism")?,
        g.base().clone(),
        f.base().clone(),
        "morphism.pi",
    )?;
    let pb = crate::sset::Pullback::new(&f, g.base(), pi.tables());
    let obj = as_object(get(v, "alpha", "morphism")?, "morphism.alpha")?;
    let mut alpha: Vec<Vec<Dist<usize>>> = Vec::with_capacity(pb.pairs.len());
    for (n, level) in pb.pairs.iter().enumerate() {
        let mut row = Vec::with_capacity(level.len());
        for (k, &(e, y)) in level.iter().enumerate() {
            let (yname, ename) = (g.base().name(n, y), f.total().name(n, e));
            let field = format!("morphism.alpha.{n}.{yname}.{ename}");
            let given = obj
                .get(&n.to_string())
                .and_then(|l| l.get(yname))
                .and_then(|l| l.get(ename));
            let d = match given {
                Some(d) => weights_from(d, &field, |t| {
                    g.total()
                        .index_of(n, t)
                        .ok_or_else(|| Error::Parse(format!("{field}: unknown simplex {t}")))
                })?,
                None => match pb.set.degenerate_from(n, k).first() {
                    Some(&(j, prev)) => {
                        alpha[n - 1][prev].pushforward(|&t| g.total().degen(n - 1, t, j))
                    }
                    None => {
                        return parse_err(&field, "missing α on a nondegenerate pullback simplex")
                    }
                },
            };
            row.push(d);
        }
        alpha.push(row);
    }
    StochMorphism::new(f, g, pi, alpha)
}

/// A verdict file: the verdict, its witness or certificate, and the
/// decision problem so the result can be re-verified without the solver.
pub fn decision_to_json(d: &Decision) -> Value {
    let problem = json!({
        "a": d.problem.matrix().iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "b": d.problem.rhs().iter().map(format_rational).collect::<Vec<_>>(),
        "columns": d.section_keys,
    });
    match &d.verdict {
        Verdict::Contextual { certificate } => json!({
            "verdict": "contextual",
            "certificate": {"y": certificate.y.iter().map(format_rational).collect::<Vec<_>>()},
            "problem": problem,
        }),
        Verdict::Noncontextual { .. } => {
            let witness: Map<String, Value> = d
                .keyed_witness()
                .expect("noncontextual")
                .into_iter()
                .map(|(k, w)| (k, Value::String(format_rational(&w))))
                .collect();
            json!({"verdict": "noncontextual", "witness": witness, "problem": problem})
        }
    }
}

/// Reads a verdict file back as a decision.
pub fn decision_from_json(v: &Value) -> Result<Decision> {
    let problem = get(v, "problem", "verdict")?;
    let rows = as_array(get(problem, "a", "problem")?, "problem.a")?
        .iter()
        .map(|row| {
            as_array(row, "problem.a")?
                .iter()
                .map(|x| rational(x, "problem.a"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let b = as_array(get(problem, "b", "problem")?, "problem.b")?
        .iter()
        .map(|x| rational(x, "problem.b"))
        .collect::<Result<Vec<_>>>()?;
    let section_keys = strings(get(problem, "columns", "problem")?, "problem.columns")?;
    let problem = LpProblem::new(rows, b, section_keys.len())?;
    let verdict = match as_str(get(v, "verdict", "verdict")?, "verdict.verdict")? {
        "contextual" => {
            let y = as_array(
                get(get(v, "certificate", "verdict")?, "y", "certificate")?,
                "certificate.y",
            )?
            .iter()
            .map(|x| rational(x, "certificate.y"))
            .collect::<Result<Vec<_>>>()?;
            Verdict::Contextual {
                certificate: Certificate { y },
            }
        }
        "noncontextual" => {
            let position: BTreeMap<&str, usize> = section_keys
                .iter()
                .enumerate()
                .map(|(i, k)| (k.as_str(), i))
                .collect();
            let witness = weights_from(get(v, "witness", "verdict")?, "verdict.witness", |k| {
                position
                    .get(k)
                    .copied()
                    .ok_or_else(|| Error::Parse(format!("verdict.witness: unknown section {k}")))
            })?;
            Verdict::Noncontextual { witness }
        }
        other => return parse_err("verdict.verdict", format!("unknown verdict {other:?}")),
    };
    Ok(Decision {
        verdict,
        problem,
        section_keys,
    })
}

/// Parses JSON text, reporting line and column on failure.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_file_expands_to_event_and_round_trips() {
        let v = parse_json(
            r#"{"kind":"standard","contexts":[["a","b"],["b","c"]],"outcomes":{"a":["0","1"],"b":["0","1"],"c":["0","1"]}}"#,
        )
        .unwrap();
        let Scenario::Event(f) = scenario_from_json(&v).unwrap() else {
            panic!("event")
        };
        let back = scenario_from_json(&event_to_json(&f)).unwrap();
        let Scenario::Event(g) = back else {
            panic!("event")
        };
        assert_eq!(f, g);
    }

    #[test]
    fn sset_round_trip() {
        let x = TruncatedSSet::standard_simplex(1, 2).unwrap();
        assert_eq!(sset_from_json(&sset_to_json(&x)).unwrap(), x);
    }

    #[test]
    fn parse_errors_name_the_field() {
        let v = parse_json(r#"{"kind":"bundle","base":{"maximal":[["a"]]}}"#).unwrap();
        let err = scenario_from_json(&v).unwrap_err().to_string();
        assert!(err.contains("missing field \"total\""), "{err}");
        let err = parse_json("{\n  \"kind\": }").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }
}
