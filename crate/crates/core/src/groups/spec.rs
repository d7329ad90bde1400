use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Backend, GroupOracle};
use crate::error::{input, Result};

/// JSON description of a group:
/// `{"backend": "free"|"free_abelian"|"bs"|"product"|"explicit", "params": {...}, "generators": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupSpec {
    pub backend: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorSpec>>,
}

/// One generator and its formal inverse. `element` is only used by the
/// explicit backend.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<u32>,
}

fn param_u64(params: &Value, name: &str) -> Result<u64> {
    params
        .get(name)
        .and_then(Value::as_u64)
        .ok_or_else(|| crate::Error::Input(format!("params.{name}: expected a non-negative integer")))
}

fn param_i64(params: &Value, name: &str) -> Result<i64> {
    params
        .get(name)
        .and_then(Value::as_i64)
        .ok_or_else(|| crate::Error::Input(format!("params.{name}: expected an integer")))
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupOracle> {
        let p = &self.params;
        let oracle = match self.backend.as_str() {
            "free" => GroupOracle::free(param_u64(p, "rank")? as usize)?,
            "free_abelian" => GroupOracle::free_abelian(param_u64(p, "dim")? as usize)?,
            "bs" => GroupOracle::baumslag_solitar(param_i64(p, "m")?, param_i64(p, "n")?)?,
            "product" => {
                let Some(factors) = p.get("factors").and_then(Value::as_array) else {
                    return input("params.factors: expected an array of group specs");
                };
                let mut built = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    let spec: GroupSpec = serde_json::from_value(f.clone())
                        .map_err(|e| crate::Error::Input(format!("params.factors[{i}]: {e}")))?;
                    built.push(spec.build()?);
                }
                GroupOracle::product(built)?
            }
            "explicit" => return self.build_explicit(),
            other => return input(format!("backend: unknown backend {other:?}")),
        };
        match &self.generators {
            None => Ok(oracle),
            Some(gens) => {
                let mut names = Vec::new();
                for g in gens {
                    names.push(g.name.clone());
                    match &g.inverse {
                        Some(inv) if *inv != g.name => names.push(inv.clone()),
                        _ => {}
                    }
                }
                let renamed = oracle.with_generator_names(names)?;
                // every listed pair must be a genuine inverse pair of the backend
                for g in gens {
                    let i = renamed.generators().index_of(&g.name).expect("just named");
                    let inv = g.inverse.as_deref().unwrap_or(&g.name);
                    if renamed.generators().name(renamed.generators().inverse(i)) != inv {
                        return input(format!("generators: {:?} is not the inverse of {:?} in this backend", inv, g.name));
                    }
                }
                Ok(renamed)
            }
        }
    }

    fn build_explicit(&self) -> Result<GroupOracle> {
        let p = &self.params;
        let table: Vec<Vec<u32>> = serde_json::from_value(p.get("table").cloned().unwrap_or(Value::Null))
            .map_err(|e| crate::Error::Input(format!("params.table: {e}")))?;
        let identity = param_u64(p, "identity")? as u32;
        let Some(gens) = &self.generators else {
            return input("generators: the explicit backend needs generators with elements");
        };
        let mut list = Vec::new();
        for g in gens {
            let Some(e) = g.element else {
                return input(format!("generators: {:?} needs an element", g.name));
            };
            list.push((g.name.clone(), e));
        }
        let oracle = GroupOracle::explicit(table, identity, &list)?;
        for g in gens {
            if let Some(inv) = &g.inverse {
                let i = oracle.generators().index_of(&g.name).expect("declared");
                if oracle.generators().name(oracle.generators().inverse(i)) != inv {
                    return input(format!("generators: {:?} is not the inverse of {:?}", inv, g.name));
                }
            }
        }
        Ok(oracle)
    }
}

pub(super) fn to_spec(g: &GroupOracle) -> GroupSpec {
    let pairs = g.gens.pairs();
    let generators = |with_elements: Option<&[u32]>| -> Vec<GeneratorSpec> {
        pairs
            .iter()
            .map(|(a, b)| GeneratorSpec {
                name: a.clone(),
                inverse: Some(b.clone()),
                element: with_elements.map(|els| els[g.gens.index_of(a).unwrap() as usize]),
            })
            .collect()
    };
    let (backend, params, gens) = match &g.backend {
        Backend::Free { rank } => ("free", json!({ "rank": rank }), generators(None)),
        Backend::FreeAbelian { dim } => ("free_abelian", json!({ "dim": dim }), generators(None)),
        Backend::BaumslagSolitar { m, n } => ("bs", json!({ "m": m, "n": n }), generators(None)),
        Backend::Product(fs) => {
            let factors: Vec<Value> = fs.iter().map(|f| serde_json::to_value(to_spec(f)).unwrap()).collect();
            ("product", json!({ "factors": factors }), generators(None))
        }
        Backend::Explicit(t) => (
            "explicit",
            json!({ "table": t.table, "identity": t.identity }),
            generators(Some(&t.gen_elements)),
        ),
    };
    GroupSpec { backend: backend.to_string(), params, generators: Some(gens) }
}
