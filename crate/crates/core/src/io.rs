//! JSON instance files: a host graph and an optional strategy profile.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::game::StrategyProfile;
use crate::hostgraph::{HostGraph, HostKind};
use crate::weight::{Rational, Weight};

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub host: HostGraph,
    pub profile: Option<StrategyProfile>,
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::parse(format!("missing field `{name}`")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(format!("field `{path}` must be an array")))
}

fn index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(format!("field `{path}` must be a nonnegative integer")))
}

fn weight(v: &Value, path: &str) -> Result<Weight> {
    Weight::from_json(v).map_err(|e| Error::parse(format!("field `{path}`: {e}")))
}

fn rational(v: &Value, path: &str) -> Result<Rational> {
    weight(v, path)?
        .as_rational()
        .ok_or_else(|| Error::parse(format!("field `{path}` must be an exact number")))
}

fn matrix(v: &Value) -> Result<Vec<Vec<Weight>>> {
    array(v, "weights")?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            array(row, &format!("weights[{i}]"))?
                .iter()
                .enumerate()
                .map(|(j, x)| weight(x, &format!("weights[{i}][{j}]")))
                .collect()
        })
        .collect()
}

fn parse_profile(v: &Value, host: &HostGraph) -> Result<StrategyProfile> {
    let n = host.n();
    let rows = array(v, "profile")?;
    if rows.len() != n {
        return Err(Error::parse(format!("field `profile` has {} rows, expected {n}", rows.len())));
    }
    let mut sets = Vec::with_capacity(n);
    for (u, row) in rows.iter().enumerate() {
        let targets = array(row, &format!("profile[{u}]"))?
            .iter()
            .enumerate()
            .map(|(j, t)| index(t, &format!("profile[{u}][{j}]")))
            .collect::<Result<Vec<_>>>()?;
        sets.push(targets);
    }
    let s = StrategyProfile::from_sets(sets)?;
    s.check_host(host)?;
    Ok(s)
}

/// Parses an instance document. Syntax errors report line and column.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    instance_from_value(&doc)
}

pub fn instance_from_value(doc: &Value) -> Result<Instance> {
    let obj = doc.as_object().ok_or_else(|| Error::parse("instance must be a JSON object"))?;
    let kind = match obj.get("kind") {
        None => "general",
        Some(k) => k.as_str().ok_or_else(|| Error::parse("field `kind` must be a string"))?,
    };
    let declared_n = obj.get("n").map(|v| index(v, "n")).transpose()?;
    let host = match kind {
        "general" | "metric" | "one_two" => {
            let w = matrix(field(obj, "weights")?)?;
            let n = declared_n.unwrap_or(w.len());
            match kind {
                "general" => HostGraph::build_general(n, w)?,
                "metric" => HostGraph::build_metric(n, w)?,
                _ => HostGraph::build_one_two(n, w)?,
            }
        }
        "tree" => {
            let n = declared_n.ok_or_else(|| Error::parse("tree instance needs field `n`"))?;
            let tree = field(obj, "tree")?.as_object().ok_or_else(|| Error::parse("field `tree` must be an object"))?;
            let edges = array(field(tree, "edges")?, "tree.edges")?
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let path = format!("tree.edges[{i}]");
                    let t = array(e, &path)?;
                    if t.len() != 3 {
                        return Err(Error::parse(format!("field `{path}` must be [u, v, w]")));
                    }
                    Ok((index(&t[0], &path)?, index(&t[1], &path)?, weight(&t[2], &path)?))
                })
                .collect::<Result<Vec<_>>>()?;
            HostGraph::from_tree(n, edges)?
        }
        "points" => {
            let pts = field(obj, "points")?.as_object().ok_or_else(|| Error::parse("field `points` must be an object"))?;
            let p = rational(field(pts, "p")?, "points.p")?;
            let coords = array(field(pts, "coords")?, "points.coords")?
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    array(row, &format!("points.coords[{i}]"))?
                        .iter()
                        .enumerate()
                        .map(|(j, x)| rational(x, &format!("points.coords[{i}][{j}]")))
                        .collect()
                })
                .collect::<Result<Vec<Vec<Rational>>>>()?;
            let host = HostGraph::from_points(coords, p)?;
            if let Some(n) = declared_n {
                if n != host.n() {
                    return Err(Error::parse(format!("field `n` is {n} but {} points are given", host.n())));
                }
            }
            host
        }
        other => return Err(Error::parse(format!("unknown kind `{other}`"))),
    };
    let profile = obj.get("profile").map(|v| parse_profile(v, &host)).transpose()?;
    Ok(Instance { host, profile })
}

/// Instance document for a host (and profile).
pub fn instance_to_value(host: &HostGraph, profile: Option<&StrategyProfile>) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(host.kind().name()));
    obj.insert("n".into(), json!(host.n()));
    match host.kind() {
        HostKind::Tree { edges } => {
            let edges: Vec<Value> = edges.iter().map(|e| json!([e.u, e.v, e.weight])).collect();
            obj.insert("tree".into(), json!({ "edges": edges }));
        }
        HostKind::Points { p, coords } => {
            let coords: Vec<Vec<Weight>> =
                coords.iter().map(|row| row.iter().map(|&x| Weight::Exact(x)).collect()).collect();
            obj.insert("points".into(), json!({ "p": Weight::Exact(*p), "coords": coords }));
        }
        _ => {
            obj.insert("weights".into(), json!(host.weights()));
        }
    }
    if let Some(s) = profile {
        obj.insert("profile".into(), json!(s));
    }
    Value::Object(obj)
}

impl Instance {
    pub fn to_value(&self) -> Value {
        instance_to_value(&self.host, self.profile.as_ref())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("instance serializes")
    }

    pub fn require_profile(&self) -> Result<&StrategyProfile> {
        self.profile.as_ref().ok_or_else(|| Error::parse("missing field `profile`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_round_trip() {
        let text = r#"{"kind":"general","n":3,"weights":[[0,"0.5",2],[{"num":1,"den":2},0,1],[2,1,0]],"profile":[[1],[2],[]]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.host.weight(0, 1), Weight::ratio(1, 2));
        let again = parse_instance(&inst.to_json_string()).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn tree_and_points_round_trip() {
        let tree = r#"{"kind":"tree","n":3,"tree":{"edges":[[0,1,2],[1,2,"1.5"]]}}"#;
        let inst = parse_instance(tree).unwrap();
        assert_eq!(inst.host.weight(0, 2), Weight::ratio(7, 2));
        assert_eq!(parse_instance(&inst.to_json_string()).unwrap(), inst);
        let pts = r#"{"kind":"points","points":{"p":2,"coords":[[0,0],[3,4]]}}"#;
        let inst = parse_instance(pts).unwrap();
        assert_eq!(inst.host.weight(0, 1).to_f64(), 5.0);
        assert_eq!(parse_instance(&inst.to_json_string()).unwrap(), inst);
    }

    #[test]
    fn errors_name_the_location() {
        let err = parse_instance("{\n \"weights\": [[0,1],\n [2,0]]\n").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
        let err = parse_instance(r#"{"weights":[[0,"x"],[1,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("weights[0][1]"), "{err}");
        let err = parse_instance(r#"{"weights":[[0,1],[2,0]]}"#).unwrap_err();
        assert_eq!(err.index_pair(), Some((0, 1)));
        assert!(parse_instance(r#"{"kind":"ring","weights":[]}"#).is_err());
        assert!(parse_instance(r#"{"weights":[[0,1],[1,0]],"profile":[[5],[]]}"#).is_err());
    }
}
