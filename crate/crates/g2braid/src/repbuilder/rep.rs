//! A built tower of generator blocks, detached from the builder, with its
//! JSON form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::{BlockMatrix, Instance};
use crate::pathlattice::level_labels;
use crate::qscalar::{QScalar, Scalar};

pub const REP_FORMAT: &str = "g2braid.rep/1";

/// Scalars that can be written to and read from representation files.
pub trait JsonScalar: Scalar {
    fn to_json_scalar(&self) -> Value;
    fn from_json_scalar(v: &Value) -> Option<Self>;
}

impl JsonScalar for QScalar {
    fn to_json_scalar(&self) -> Value {
        self.to_json()
    }
    fn from_json_scalar(v: &Value) -> Option<Self> {
        QScalar::from_json(v).ok()
    }
}

impl JsonScalar for BigRational {
    fn to_json_scalar(&self) -> Value {
        json!([self.numer().to_string(), self.denom().to_string()])
    }
    fn from_json_scalar(v: &Value) -> Option<Self> {
        let int = |x: &Value| -> Option<BigInt> {
            match x {
                Value::String(s) => s.parse().ok(),
                Value::Number(n) => n.as_i64().map(BigInt::from),
                _ => None,
            }
        };
        let a = v.as_array()?;
        let (n, d) = match a.as_slice() {
            [n, d] => (int(n)?, int(d)?),
            _ => return None,
        };
        (d != BigInt::from(0)).then(|| BigRational::new(n, d))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("malformed representation file: {0}")]
    Malformed(String),
}

/// All blocks of σ_1, …, σ_{N-1} on paths of length at most N.
#[derive(Clone, Debug)]
pub struct RepSet<I: Instance, S> {
    pub inst: I,
    /// Backend description, e.g. `exact` or `eval:3/2`.
    pub backend: String,
    pub seed: u64,
    pub levels: Vec<Vec<I::Label>>,
    pub blocks: BTreeMap<(I::Label, I::Label), BlockMatrix<I::Label, S>>,
    pub first_level: BTreeMap<(I::Label, I::Label), usize>,
}

impl<I: Instance, S: Scalar> RepSet<I, S> {
    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn block(&self, d: &I::Label, l: &I::Label) -> Option<&BlockMatrix<I::Label, S>> {
        self.blocks.get(&(d.clone(), l.clone()))
    }

    pub fn block_mut(&mut self, d: &I::Label, l: &I::Label) -> Option<&mut BlockMatrix<I::Label, S>> {
        self.blocks.get_mut(&(d.clone(), l.clone()))
    }

    /// Blocks of σ_{n-1} on paths of length n, in (δ, λ) order.
    pub fn level_blocks(&self, n: usize) -> Vec<&BlockMatrix<I::Label, S>> {
        let mut out = Vec::new();
        if n < 2 {
            return out;
        }
        for d in &self.levels[n - 2] {
            for l in &self.levels[n] {
                if let Some(b) = self.block(d, l) {
                    out.push(b);
                }
            }
        }
        out
    }
}

impl<I: Instance, S: JsonScalar> RepSet<I, S> {
    pub fn to_json_value(&self) -> Value {
        let lab = |l: &I::Label| self.inst.label_to_json(l);
        let mut levels = Vec::new();
        for n in 2..=self.max_level() {
            let blocks: Vec<Value> = self
                .level_blocks(n)
                .into_iter()
                .filter(|b| self.first_level.get(&(b.delta.clone(), b.lambda.clone())) == Some(&n))
                .map(|b| {
                    json!({
                        "delta": lab(&b.delta),
                        "lambda": lab(&b.lambda),
                        "paths": b.middles.iter().map(|m| json!([lab(&b.delta), lab(m), lab(&b.lambda)])).collect::<Vec<_>>(),
                        "matrix": (0..b.dim())
                            .map(|i| (0..b.dim()).map(|j| b.get(i, j).to_json_scalar()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            levels.push(json!({"level": n, "generator": n - 1, "blocks": blocks}));
        }
        json!({
            "format": REP_FORMAT,
            "instance": self.inst.name(),
            "backend": self.backend,
            "seed": self.seed,
            "max_level": self.max_level(),
            "levels": levels,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(inst: I, text: &str) -> Result<Self, RepError> {
        let bad = |m: &str| RepError::Malformed(m.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| RepError::Malformed(e.to_string()))?;
        if v["format"] != REP_FORMAT {
            return Err(bad("unknown format tag"));
        }
        if v["instance"] != inst.name() {
            return Err(bad("instance mismatch"));
        }
        let max = v["max_level"].as_u64().ok_or_else(|| bad("max_level"))? as usize;
        let levels: Vec<Vec<I::Label>> = (0..=max).map(|n| level_labels(&inst, n)).collect();
        let mut blocks = BTreeMap::new();
        let mut first_level = BTreeMap::new();
        for lv in v["levels"].as_array().ok_or_else(|| bad("levels"))? {
            let n = lv["level"].as_u64().ok_or_else(|| bad("level"))? as usize;
            for b in lv["blocks"].as_array().ok_or_else(|| bad("blocks"))? {
                let d = inst.label_from_json(&b["delta"]).ok_or_else(|| bad("delta"))?;
                let l = inst.label_from_json(&b["lambda"]).ok_or_else(|| bad("lambda"))?;
                let mut middles = Vec::new();
                for p in b["paths"].as_array().ok_or_else(|| bad("paths"))? {
                    middles.push(inst.label_from_json(&p[1]).ok_or_else(|| bad("path"))?);
                }
                let k = middles.len();
                let rows = b["matrix"].as_array().ok_or_else(|| bad("matrix"))?;
                if rows.len() != k {
                    return Err(bad("matrix shape"));
                }
                let mut entries = Vec::with_capacity(k * k);
                for r in rows {
                    let r = r.as_array().ok_or_else(|| bad("matrix row"))?;
                    if r.len() != k {
                        return Err(bad("matrix shape"));
                    }
                    for x in r {
                        entries.push(S::from_json_scalar(x).ok_or_else(|| bad("matrix entry"))?);
                    }
                }
                first_level.insert((d.clone(), l.clone()), n);
                blocks.insert(
                    (d.clone(), l.clone()),
                    BlockMatrix {
                        delta: d,
                        lambda: l,
                        middles,
                        entries,
                    },
                );
            }
        }
        Ok(RepSet {
            inst,
            backend: v["backend"].as_str().unwrap_or("").to_string(),
            seed: v["seed"].as_u64().unwrap_or(0),
            levels,
            blocks,
            first_level,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::{EvalAt, Exact};
    use crate::repbuilder::{Tower, Young, G2};

    #[test]
    fn exact_round_trip_is_bit_exact() {
        let mut t = Tower::new(G2, Exact, 3);
        t.build_to(3).unwrap();
        let rep = t.rep_set();
        let text = rep.to_json_string();
        let back = RepSet::<G2, QScalar>::from_json(G2, &text).unwrap();
        assert_eq!(back.blocks.len(), rep.blocks.len());
        assert_eq!(back.first_level, rep.first_level);
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn eval_round_trip() {
        let mut t = Tower::new(Young, EvalAt::generic(), 1);
        t.build_to(4).unwrap();
        let text = t.rep_set().to_json_string();
        let back = RepSet::<Young, BigRational>::from_json(Young, &text).unwrap();
        assert_eq!(back.backend, "eval:3/2");
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(RepSet::<G2, QScalar>::from_json(G2, "{}").is_err());
        assert!(RepSet::<G2, QScalar>::from_json(G2, "not json").is_err());
        let mut t = Tower::new(G2, Exact, 1);
        t.build_to(2).unwrap();
        let text = t.rep_set().to_json_string();
        assert!(RepSet::<Young, QScalar>::from_json(Young, &text).is_err());
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["levels"][0]["blocks"][0]["matrix"].as_array_mut().unwrap().push(json!([]));
        assert!(RepSet::<G2, QScalar>::from_json(G2, &v.to_string()).is_err());
    }
}
