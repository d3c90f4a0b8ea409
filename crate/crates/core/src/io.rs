//! JSON reading and writing for preorders, spaces, maps and families, and
//! DOT export of Hasse diagrams.
//!
//! A `"source"`, `"target"` or family member may be given inline or as a
//! path string, resolved relative to the file that mentions it.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::awfs::Factorisation;
use crate::error::OrderError;
use crate::lifting::{GeneratorFamily, Link};
use crate::order::{FinPreorder, MonotoneMap};
use crate::topology::FiniteSpace;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid object: {0}")]
    Schema(String),

    #[error(transparent)]
    Order(#[from] OrderError),
}

impl IoError {
    /// True for problems with the object itself rather than with reaching it.
    pub fn is_invalid_object(&self) -> bool {
        !matches!(self, IoError::Read { .. })
    }
}

type IoResult<T> = std::result::Result<T, IoError>;

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Object {
    Preorder(FinPreorder),
    Space(FiniteSpace),
    Map(MonotoneMap),
    Family(GeneratorFamily),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Preorder(_) => "preorder",
            Object::Space(_) => "space",
            Object::Map(_) => "map",
            Object::Family(_) => "family",
        }
    }
}

fn read_value(path: &Path) -> IoResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn dir_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Follows a path string to the value it names; other values pass through.
fn resolve(value: &Value, base: &Path) -> IoResult<(Value, PathBuf)> {
    match value {
        Value::String(p) => {
            let path = base.join(p);
            Ok((read_value(&path)?, dir_of(&path)))
        }
        v => Ok((v.clone(), base.to_path_buf())),
    }
}

pub fn read_object(path: &Path) -> IoResult<Object> {
    parse_object(&read_value(path)?, &dir_of(path))
}

pub fn parse_object(value: &Value, base: &Path) -> IoResult<Object> {
    if value.is_array() {
        return Ok(Object::Family(parse_family(value, base)?));
    }
    match type_tag(value)? {
        "preorder" => Ok(Object::Preorder(parse_preorder(value)?)),
        "space" => Ok(Object::Space(FiniteSpace::new(parse_preorder(value)?))),
        "map" => Ok(Object::Map(parse_map(value, base)?)),
        "family" => Ok(Object::Family(parse_family(value, base)?)),
        other => Err(schema(format!("unknown type {other:?}"))),
    }
}

fn type_tag(value: &Value) -> IoResult<&str> {
    value
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("expected an object with a string \"type\""))
}

fn field<'a>(value: &'a Value, key: &str) -> IoResult<&'a Value> {
    value.get(key).ok_or_else(|| schema(format!("missing field {key:?}")))
}

fn label_of(v: &Value) -> IoResult<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(schema(format!("element names must be strings, got {other}"))),
    }
}

/// Reads `{"type":"preorder"|"space","elements":[..],"le":[[a,b],..]}` and
/// closes `le` under reflexivity and transitivity.
pub fn parse_preorder(value: &Value) -> IoResult<FinPreorder> {
    let tag = type_tag(value)?;
    if tag != "preorder" && tag != "space" {
        return Err(schema(format!("expected a preorder, got type {tag:?}")));
    }
    let labels: Vec<String> = field(value, "elements")?
        .as_array()
        .ok_or_else(|| schema("\"elements\" must be an array"))?
        .iter()
        .map(label_of)
        .collect::<IoResult<_>>()?;
    let lookup = |v: &Value| -> IoResult<usize> {
        let name = label_of(v)?;
        labels
            .iter()
            .position(|l| *l == name)
            .ok_or_else(|| schema(format!("unknown element {name:?}")))
    };
    let mut pairs = Vec::new();
    if let Some(le) = value.get("le") {
        for pair in le.as_array().ok_or_else(|| schema("\"le\" must be an array"))? {
            match pair.as_array().map(Vec::as_slice) {
                Some([a, b]) => pairs.push((lookup(a)?, lookup(b)?)),
                _ => return Err(schema(format!("\"le\" entries must be pairs, got {pair}"))),
            }
        }
    }
    let x = FinPreorder::closure(labels.len(), &pairs)?;
    Ok(x.with_labels(labels)?)
}

fn parse_endpoint(value: &Value, base: &Path) -> IoResult<FinPreorder> {
    let (v, _) = resolve(value, base)?;
    parse_preorder(&v)
}

/// Reads `{"type":"map","source":..,"target":..,"assign":{"a":"x",..}}`.
pub fn parse_map(value: &Value, base: &Path) -> IoResult<MonotoneMap> {
    parse_map_with(value, base, None)
}

/// Like [`parse_map`], with `source`/`target` optional when `default` gives them.
fn parse_map_with(value: &Value, base: &Path, default: Option<(&FinPreorder, &FinPreorder)>) -> IoResult<MonotoneMap> {
    let (value, base) = resolve(value, base)?;
    if value.get("type").is_some() && type_tag(&value)? != "map" {
        return Err(schema("expected a map"));
    }
    let end = |key: &str, fallback: Option<&FinPreorder>| -> IoResult<FinPreorder> {
        match (value.get(key), fallback) {
            (Some(v), _) => parse_endpoint(v, &base),
            (None, Some(x)) => Ok(x.clone()),
            (None, None) => Err(schema(format!("missing field {key:?}"))),
        }
    };
    let src = end("source", default.map(|d| d.0))?;
    let tgt = end("target", default.map(|d| d.1))?;
    let assign_obj = field(&value, "assign")?
        .as_object()
        .ok_or_else(|| schema("\"assign\" must be an object"))?;
    let mut assign = Vec::with_capacity(src.len());
    for i in 0..src.len() {
        let name = src.label(i);
        let image = assign_obj
            .get(name.as_ref())
            .ok_or_else(|| schema(format!("no image for {name:?}")))?;
        let image = label_of(image)?;
        assign.push(
            tgt.index_of(&image)
                .ok_or_else(|| schema(format!("unknown target element {image:?}")))?,
        );
    }
    if let Some(extra) = assign_obj.keys().find(|k| src.index_of(k).is_none()) {
        return Err(schema(format!("\"assign\" names {extra:?}, which is not in the source")));
    }
    Ok(MonotoneMap::new(src, tgt, assign)?)
}

/// Reads an array of maps, or `{"type":"family","members":[..],"links":[..]}`.
/// A link's `top` and `bottom` may omit `source` and `target`.
pub fn parse_family(value: &Value, base: &Path) -> IoResult<GeneratorFamily> {
    let (value, base) = resolve(value, base)?;
    let (members_v, links_v) = match &value {
        Value::Array(items) => (items.as_slice(), &[][..]),
        v if type_tag(v)? == "family" => (
            field(v, "members")?
                .as_array()
                .ok_or_else(|| schema("\"members\" must be an array"))?
                .as_slice(),
            match v.get("links") {
                Some(l) => l.as_array().ok_or_else(|| schema("\"links\" must be an array"))?.as_slice(),
                None => &[][..],
            },
        ),
        _ => return Err(schema("expected a family")),
    };
    let members: Vec<MonotoneMap> = members_v
        .iter()
        .map(|m| parse_map(m, &base))
        .collect::<IoResult<_>>()?;
    let mut links = Vec::new();
    for l in links_v {
        let idx = |key: &str| -> IoResult<usize> {
            let i = field(l, key)?
                .as_u64()
                .ok_or_else(|| schema(format!("link {key:?} must be a member index")))? as usize;
            if i >= members.len() {
                return Err(schema(format!("link {key:?} = {i} is out of range")));
            }
            Ok(i)
        };
        let (from, to) = (idx("from")?, idx("to")?);
        let top = parse_map_with(field(l, "top")?, &base, Some((members[from].src(), members[to].src())))?;
        let bottom = parse_map_with(field(l, "bottom")?, &base, Some((members[from].tgt(), members[to].tgt())))?;
        links.push(Link { from, to, top, bottom });
    }
    Ok(GeneratorFamily::new(members, links)?)
}

fn preorder_json(x: &FinPreorder, tag: &str) -> Value {
    let elements: Vec<String> = (0..x.len()).map(|i| x.label(i).into_owned()).collect();
    let le: Vec<[String; 2]> = x
        .relation_pairs()
        .into_iter()
        .filter(|&(a, b)| a != b)
        .map(|(a, b)| [elements[a].clone(), elements[b].clone()])
        .collect();
    json!({"type": tag, "elements": elements, "le": le})
}

/// Every non-reflexive pair of the relation, so the output needs no closure.
pub fn preorder_to_json(x: &FinPreorder) -> Value {
    preorder_json(x, "preorder")
}

pub fn space_to_json(space: &FiniteSpace) -> Value {
    preorder_json(space.points(), "space")
}

pub fn map_to_json(f: &MonotoneMap) -> Value {
    let mut assign = Map::new();
    for i in 0..f.src().len() {
        assign.insert(f.src().label(i).into_owned(), Value::String(f.tgt().label(f.apply(i)).into_owned()));
    }
    json!({
        "type": "map",
        "source": preorder_to_json(f.src()),
        "target": preorder_to_json(f.tgt()),
        "assign": assign,
    })
}

pub fn family_to_json(fam: &GeneratorFamily) -> Value {
    let members: Vec<Value> = fam.members().iter().map(map_to_json).collect();
    let links: Vec<Value> = fam
        .links()
        .iter()
        .map(|l| json!({"from": l.from, "to": l.to, "top": map_to_json(&l.top), "bottom": map_to_json(&l.bottom)}))
        .collect();
    json!({"type": "family", "members": members, "links": links})
}

pub fn object_to_json(obj: &Object) -> Value {
    match obj {
        Object::Preorder(x) => preorder_to_json(x),
        Object::Space(s) => space_to_json(s),
        Object::Map(f) => map_to_json(f),
        Object::Family(fam) => family_to_json(fam),
    }
}

pub fn factorisation_to_json(ff: &Factorisation) -> Value {
    json!({
        "K": preorder_to_json(ff.k()),
        "lambda": map_to_json(ff.lambda()),
        "rho": map_to_json(ff.rho()),
    })
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram of the poset reflection: one node per equivalence class,
/// labelled by its members, edges along covers, least elements at the bottom.
pub fn to_dot(x: &FinPreorder, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "    rankdir=BT;").unwrap();
    for (c, class) in x.classes().iter().enumerate() {
        let members: Vec<String> = class.iter().map(|&i| x.label(i).into_owned()).collect();
        writeln!(out, "    c{c} [label=\"{}\"];", escape(&members.join(", "))).unwrap();
    }
    for (a, b) in x.class_covers() {
        writeln!(out, "    c{a} -> c{b};").unwrap();
    }
    out.push_str("}\n");
    out
}
