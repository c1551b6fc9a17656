//! JSON forms of trees and games.
//!
//! Trees: `{"children": [...]}`, `{"infinite": true}`, or
//! `{"omega": {"schema", "params", "ranks", "sup"}}`.
//! Games: `{"mover": "open"|"closed", "won": bool, "children": [...]}`,
//! `{"mover", "endless": true}`, or `{"climb": <tree>}` for the climbing
//! game over a tree. Any node may carry a `"label"`.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::families::family_from_schema;
use super::{
    climbing_game, DeclaredFamily, GameChildren, GameError, GameNode, Player, Status, TreeChildren,
    WfTree,
};
use crate::ordinal::Ordinal;

fn bad(msg: impl Into<String>) -> GameError {
    GameError::Input(msg.into())
}

fn label_of(v: &Value) -> Option<String> {
    v.get("label").and_then(|l| l.as_str()).map(str::to_string)
}

fn put_label(obj: &mut Map<String, Value>, label: &Option<String>) {
    if let Some(l) = label {
        obj.insert("label".into(), json!(l));
    }
}

pub fn tree_from_json(v: &Value) -> Result<WfTree, GameError> {
    let label = label_of(v);
    let children = if let Some(cs) = v.get("children") {
        let cs = cs
            .as_array()
            .ok_or_else(|| bad("\"children\" must be an array"))?;
        TreeChildren::Explicit(cs.iter().map(tree_from_json).collect::<Result<_, _>>()?)
    } else if let Some(o) = v.get("omega") {
        let schema = o
            .get("schema")
            .and_then(|s| s.as_str())
            .ok_or_else(|| bad("omega.schema missing"))?;
        let params = o.get("params").cloned().unwrap_or(Value::Null);
        let inner = family_from_schema(schema, &params)?;
        let ranks = o
            .get("ranks")
            .and_then(|s| s.as_str())
            .map(str::to_string)
            .unwrap_or_else(|| inner.ranks_pattern());
        let sup = match o.get("sup").and_then(|s| s.as_str()) {
            Some(s) => Ordinal::parse(s).map_err(|e| bad(format!("omega.sup: {e}")))?,
            None => inner.declared_sup(),
        };
        if ranks == inner.ranks_pattern() && sup == inner.declared_sup() {
            TreeChildren::Family(inner)
        } else {
            TreeChildren::Family(Arc::new(DeclaredFamily::new(inner, ranks, sup)?))
        }
    } else if v.get("infinite").and_then(|b| b.as_bool()) == Some(true) {
        TreeChildren::InfiniteBranch
    } else if v.is_object() {
        TreeChildren::Explicit(Vec::new())
    } else {
        return Err(bad("tree node must be an object"));
    };
    Ok(WfTree { label, children })
}

pub fn tree_to_json(t: &WfTree) -> Value {
    let mut obj = Map::new();
    put_label(&mut obj, &t.label);
    match &t.children {
        TreeChildren::Explicit(cs) => {
            obj.insert(
                "children".into(),
                Value::Array(cs.iter().map(tree_to_json).collect()),
            );
        }
        TreeChildren::Family(f) => {
            obj.insert(
                "omega".into(),
                json!({
                    "schema": f.schema(),
                    "params": f.params(),
                    "ranks": f.ranks_pattern(),
                    "sup": f.declared_sup().to_string(),
                }),
            );
        }
        TreeChildren::InfiniteBranch => {
            obj.insert("infinite".into(), json!(true));
        }
    }
    Value::Object(obj)
}

pub fn game_from_json(v: &Value) -> Result<GameNode, GameError> {
    if let Some(t) = v.get("climb") {
        let mut g = climbing_game(&tree_from_json(t)?);
        if let Some(l) = label_of(v) {
            g.label = Some(l);
        }
        return Ok(g);
    }
    let mover: Player = match v.get("mover") {
        Some(m) => serde_json::from_value(m.clone()).map_err(|e| bad(format!("mover: {e}")))?,
        None => return Err(bad("game node needs \"mover\"")),
    };
    let won = v.get("won").and_then(|b| b.as_bool()).unwrap_or(false);
    let label = label_of(v);
    if won {
        return Ok(GameNode {
            label,
            ..GameNode::won(mover)
        });
    }
    if v.get("endless").and_then(|b| b.as_bool()) == Some(true) {
        return Ok(GameNode {
            label,
            ..GameNode::endless(mover)
        });
    }
    let cs = match v.get("children") {
        Some(cs) => cs
            .as_array()
            .ok_or_else(|| bad("\"children\" must be an array"))?,
        None => return Err(bad("ongoing game node needs \"children\"")),
    };
    let children = cs
        .iter()
        .map(game_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GameNode {
        label,
        ..GameNode::new(mover, children)?
    })
}

pub fn game_to_json(g: &GameNode) -> Result<Value, GameError> {
    let mut obj = Map::new();
    put_label(&mut obj, &g.label);
    obj.insert("mover".into(), serde_json::to_value(g.mover).unwrap());
    if g.status == Status::OpenHasWon {
        obj.insert("won".into(), json!(true));
        return Ok(Value::Object(obj));
    }
    obj.insert("won".into(), json!(false));
    match &g.children {
        GameChildren::Explicit(cs) => {
            let cs = cs.iter().map(game_to_json).collect::<Result<Vec<_>, _>>()?;
            obj.insert("children".into(), Value::Array(cs));
        }
        GameChildren::Endless => {
            obj.insert("endless".into(), json!(true));
        }
        GameChildren::Family(f) => {
            let t = f
                .climbing_tree()
                .ok_or_else(|| bad("only climbing-game families can be written as JSON"))?;
            let mut c = Map::new();
            put_label(&mut c, &g.label);
            c.insert("climb".into(), tree_to_json(&t));
            return Ok(Value::Object(c));
        }
    }
    Ok(Value::Object(obj))
}
