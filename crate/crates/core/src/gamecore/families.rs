use std::sync::Arc;

use serde_json::json;

use super::{
    build_tree_of_rank, observer_step, GameError, GameFamily, GameNode, TreeFamily, WfTree,
};
use crate::ordinal::{eval_pattern, Ordinal};

/// Children are chains of `n + offset` edges, for every natural `n`.
#[derive(Debug, Clone)]
pub struct ChainFamily {
    offset: u64,
}

impl ChainFamily {
    pub fn new(offset: u64) -> Self {
        ChainFamily { offset }
    }
}

impl TreeFamily for ChainFamily {
    fn sample(&self, n: u64) -> WfTree {
        WfTree::chain(n + self.offset)
    }

    fn declared_rank(&self, n: u64) -> Ordinal {
        Ordinal::nat(n + self.offset)
    }

    fn declared_sup(&self) -> Ordinal {
        Ordinal::omega()
    }

    fn schema(&self) -> &str {
        "chain"
    }

    fn params(&self) -> serde_json::Value {
        json!({ "offset": self.offset })
    }

    fn ranks_pattern(&self) -> String {
        if self.offset == 0 {
            "n".into()
        } else {
            format!("n+{}", self.offset)
        }
    }
}

/// Children are `build_tree_of_rank(alpha[n])` for the canonical
/// fundamental sequence of the limit `alpha`.
#[derive(Debug, Clone)]
pub struct RankFamily {
    alpha: Ordinal,
    pattern: String,
}

impl RankFamily {
    /// Panics unless `alpha` is a limit.
    pub fn new(alpha: Ordinal) -> Self {
        let pattern = alpha
            .fundamental_pattern()
            .expect("rank family needs a limit ordinal");
        RankFamily { alpha, pattern }
    }

    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }
}

impl TreeFamily for RankFamily {
    fn sample(&self, n: u64) -> WfTree {
        build_tree_of_rank(&self.alpha.fundamental(n).unwrap())
    }

    fn declared_rank(&self, n: u64) -> Ordinal {
        self.alpha.fundamental(n).unwrap()
    }

    fn declared_sup(&self) -> Ordinal {
        self.alpha.clone()
    }

    fn schema(&self) -> &str {
        "rank"
    }

    fn params(&self) -> serde_json::Value {
        json!({ "alpha": self.alpha.to_string() })
    }

    fn ranks_pattern(&self) -> String {
        self.pattern.clone()
    }
}

/// Samples from a registered schema, with rank declarations taken from
/// outside (typically a JSON file). Wrong declarations are caught by the
/// evaluator's sampling check.
#[derive(Debug, Clone)]
pub struct DeclaredFamily {
    inner: Arc<dyn TreeFamily>,
    pattern: String,
    sup: Ordinal,
}

impl DeclaredFamily {
    pub fn new(
        inner: Arc<dyn TreeFamily>,
        pattern: String,
        sup: Ordinal,
    ) -> Result<Self, GameError> {
        eval_pattern(&pattern, 0)
            .map_err(|e| GameError::Input(format!("ranks pattern {pattern:?}: {e}")))?;
        Ok(DeclaredFamily {
            inner,
            pattern,
            sup,
        })
    }
}

impl TreeFamily for DeclaredFamily {
    fn sample(&self, n: u64) -> WfTree {
        self.inner.sample(n)
    }

    fn declared_rank(&self, n: u64) -> Ordinal {
        eval_pattern(&self.pattern, n).expect("pattern checked at construction")
    }

    fn declared_sup(&self) -> Ordinal {
        self.sup.clone()
    }

    fn schema(&self) -> &str {
        self.inner.schema()
    }

    fn params(&self) -> serde_json::Value {
        self.inner.params()
    }

    fn ranks_pattern(&self) -> String {
        self.pattern.clone()
    }
}

/// Build a registered family from its schema name and parameters.
pub(crate) fn family_from_schema(
    schema: &str,
    params: &serde_json::Value,
) -> Result<Arc<dyn TreeFamily>, GameError> {
    match schema {
        "chain" => {
            let offset = params.get("offset").and_then(|v| v.as_u64()).unwrap_or(0);
            Ok(Arc::new(ChainFamily::new(offset)))
        }
        "rank" => {
            let alpha = params
                .get("alpha")
                .and_then(|v| v.as_str())
                .ok_or_else(|| GameError::Input("rank family needs params.alpha".into()))?;
            let alpha = Ordinal::parse(alpha).map_err(|e| GameError::Input(e.to_string()))?;
            if !alpha.is_limit() {
                return Err(GameError::Input(format!(
                    "rank family needs a limit ordinal, got {alpha}"
                )));
            }
            Ok(Arc::new(RankFamily::new(alpha)))
        }
        other => Err(GameError::UnknownSchema(other.to_string())),
    }
}

/// The Climber's moves at a tree node whose children form a family: move
/// `n` leads to the Observer's position above `sample(n)`, whose value is
/// `rank(sample(n)) + 1`.
#[derive(Debug, Clone)]
pub struct ClimbFamily {
    tree: Arc<dyn TreeFamily>,
}

impl ClimbFamily {
    pub fn new(tree: Arc<dyn TreeFamily>) -> Self {
        ClimbFamily { tree }
    }
}

impl GameFamily for ClimbFamily {
    fn sample(&self, n: u64) -> GameNode {
        observer_step(&self.tree.sample(n))
    }

    fn declared_value(&self, n: u64) -> Ordinal {
        self.tree.declared_rank(n).successor()
    }

    fn declared_sup(&self) -> Ordinal {
        // sup { r_n + 1 }: a limit sup is never attained by a family, a
        // successor sup always is.
        let sup = self.tree.declared_sup();
        if sup.is_limit() {
            sup
        } else {
            sup.successor()
        }
    }

    fn key(&self) -> String {
        format!("climb({})", self.tree.key())
    }

    fn climbing_tree(&self) -> Option<WfTree> {
        Some(WfTree::family(self.tree.clone()))
    }
}
