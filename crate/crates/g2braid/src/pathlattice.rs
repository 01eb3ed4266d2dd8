//! Path algebras on a leveled label graph: Bratteli diagrams, path
//! enumeration and the block decomposition seen by each braid generator.
//!
//! The machinery is generic over a [`Lattice`]; two instances are provided,
//! the G2 lattice (tensoring with V) and Young's lattice (adding a box).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};
use thiserror::Error;

use crate::g2weights::{tensor_neighbors, Weight};

/// Label set with a distinguished origin and a successor rule.
pub trait Lattice: Send + Sync {
    type Label: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static;

    fn name(&self) -> &'static str;
    fn origin(&self) -> Self::Label;
    /// Successors in the instance's label order.
    fn successors(&self, l: &Self::Label) -> Vec<Self::Label>;
    fn label_to_json(&self, l: &Self::Label) -> Value;
    fn label_from_json(&self, v: &Value) -> Option<Self::Label>;
    fn parse_label(&self, s: &str) -> Result<Self::Label, String>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct G2Lattice;

impl Lattice for G2Lattice {
    type Label = Weight;

    fn name(&self) -> &'static str {
        "g2"
    }
    fn origin(&self) -> Weight {
        Weight::ZERO
    }
    fn successors(&self, l: &Weight) -> Vec<Weight> {
        tensor_neighbors(*l)
    }
    fn label_to_json(&self, l: &Weight) -> Value {
        json!([l.a, l.b])
    }
    fn label_from_json(&self, v: &Value) -> Option<Weight> {
        let a = v.as_array().filter(|a| a.len() == 2)?;
        Some(Weight::new(
            u32::try_from(a[0].as_u64()?).ok()?,
            u32::try_from(a[1].as_u64()?).ok()?,
        ))
    }
    fn parse_label(&self, s: &str) -> Result<Weight, String> {
        s.parse()
    }
}

/// A partition, stored as weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Content (column minus row) of the box in row `r` at the end of that row.
    pub fn content_of_last_box(&self, r: usize) -> i64 {
        self.0[r] as i64 - 1 - r as i64
    }

    /// Row of the single box in `bigger` that is not in `self`.
    pub fn added_row(&self, bigger: &Partition) -> Option<usize> {
        let mut diff = None;
        for r in 0..bigger.0.len() {
            let old = self.0.get(r).copied().unwrap_or(0);
            match bigger.0[r].checked_sub(old) {
                Some(0) => {}
                Some(1) if diff.is_none() => diff = Some(r),
                _ => return None,
            }
        }
        (self.0.len() <= bigger.0.len()).then_some(diff).flatten()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct YoungLattice;

impl Lattice for YoungLattice {
    type Label = Partition;

    fn name(&self) -> &'static str {
        "young"
    }
    fn origin(&self) -> Partition {
        Partition::default()
    }
    fn successors(&self, l: &Partition) -> Vec<Partition> {
        let mut out = Vec::new();
        for r in 0..=l.0.len() {
            let cur = l.0.get(r).copied().unwrap_or(0);
            if r == 0 || l.0[r - 1] > cur {
                let mut p = l.0.clone();
                if r == p.len() {
                    p.push(1);
                } else {
                    p[r] += 1;
                }
                out.push(Partition(p));
            }
        }
        out.sort();
        out
    }
    fn label_to_json(&self, l: &Partition) -> Value {
        json!(l.0)
    }
    fn label_from_json(&self, v: &Value) -> Option<Partition> {
        let parts = v
            .as_array()?
            .iter()
            .map(|x| x.as_u64().and_then(|n| u32::try_from(n).ok()))
            .collect::<Option<Vec<u32>>>()?;
        Some(Partition(parts))
    }
    fn parse_label(&self, s: &str) -> Result<Partition, String> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition::default());
        }
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| format!("bad part {x:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(format!("{s:?} is not a partition"));
        }
        Ok(Partition(parts))
    }
}

#[derive(Debug, Error)]
pub enum BratteliError {
    #[error("malformed Bratteli JSON: {0}")]
    Malformed(String),
}

/// Leveled multiplicity graph for levels `0..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bratteli<L> {
    /// Per level, labels in order with their multiplicities.
    pub levels: Vec<Vec<(L, u64)>>,
    /// `edges[n]` lists the edges from level `n` to level `n + 1`.
    pub edges: Vec<Vec<(L, L)>>,
}

impl<L: Clone + Ord + fmt::Display> Bratteli<L> {
    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn multiplicity(&self, l: &L, n: usize) -> u64 {
        self.levels
            .get(n)
            .and_then(|lv| lv.iter().find(|(x, _)| x == l))
            .map_or(0, |(_, m)| *m)
    }

    pub fn labels(&self, n: usize) -> Vec<L> {
        self.levels[n].iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn export_dot<T: Lattice<Label = L>>(&self, lat: &T) -> String {
        let origin = lat.origin();
        let id = |l: &L, n: usize| {
            if *l == origin {
                format!("0@{n}")
            } else {
                format!("{l}@{n}")
            }
        };
        let mut s = format!("digraph bratteli_{} {{\n  rankdir=TB;\n", lat.name());
        for (n, lv) in self.levels.iter().enumerate() {
            s.push_str("  { rank=same;");
            for (l, m) in lv {
                s.push_str(&format!(" \"{}\" [label=\"{}\\n{}\"];", id(l, n), l, m));
            }
            s.push_str(" }\n");
        }
        for (n, es) in self.edges.iter().enumerate() {
            for (a, b) in es {
                s.push_str(&format!("  \"{}\" -> \"{}\";\n", id(a, n), id(b, n + 1)));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json_value<T: Lattice<Label = L>>(&self, lat: &T) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .enumerate()
            .map(|(n, lv)| {
                json!({
                    "level": n,
                    "nodes": lv.iter().map(|(l, m)| json!({"label": lat.label_to_json(l), "mult": m})).collect::<Vec<_>>(),
                })
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(n, es)| {
                es.iter().map(move |(a, b)| json!({"level": n, "from": lat.label_to_json(a), "to": lat.label_to_json(b)}))
            })
            .collect();
        json!({
            "format": "g2braid.bratteli/1",
            "instance": lat.name(),
            "max_level": self.max_level(),
            "levels": levels,
            "edges": edges,
        })
    }

    pub fn export_json<T: Lattice<Label = L>>(&self, lat: &T) -> String {
        serde_json::to_string_pretty(&self.to_json_value(lat)).expect("serializable") + "\n"
    }

    pub fn from_json<T: Lattice<Label = L>>(lat: &T, text: &str) -> Result<Self, BratteliError> {
        let bad = |m: &str| BratteliError::Malformed(m.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        if v["format"] != "g2braid.bratteli/1" {
            return Err(bad("unknown format tag"));
        }
        let lv = v["levels"].as_array().ok_or_else(|| bad("levels"))?;
        let mut levels = Vec::new();
        for level in lv {
            let nodes = level["nodes"].as_array().ok_or_else(|| bad("nodes"))?;
            let mut row = Vec::new();
            for node in nodes {
                let l = lat.label_from_json(&node["label"]).ok_or_else(|| bad("label"))?;
                let m = node["mult"].as_u64().ok_or_else(|| bad("mult"))?;
                row.push((l, m));
            }
            levels.push(row);
        }
        if levels.is_empty() {
            return Err(bad("no levels"));
        }
        let mut edges = vec![Vec::new(); levels.len() - 1];
        for e in v["edges"].as_array().ok_or_else(|| bad("edges"))? {
            let n = e["level"].as_u64().ok_or_else(|| bad("edge level"))? as usize;
            let a = lat.label_from_json(&e["from"]).ok_or_else(|| bad("edge from"))?;
            let b = lat.label_from_json(&e["to"]).ok_or_else(|| bad("edge to"))?;
            edges.get_mut(n).ok_or_else(|| bad("edge level out of range"))?.push((a, b));
        }
        Ok(Bratteli { levels, edges })
    }
}

/// Builds the Bratteli diagram for levels `0..=n_max`.
pub fn build<T: Lattice>(lat: &T, n_max: usize) -> Bratteli<T::Label> {
    let mut levels = vec![vec![(lat.origin(), 1u64)]];
    let mut edges = Vec::new();
    for _ in 0..n_max {
        let prev = levels.last().unwrap();
        let mut next: BTreeMap<T::Label, u64> = BTreeMap::new();
        let mut es = Vec::new();
        for (l, m) in prev {
            for s in lat.successors(l) {
                *next.entry(s.clone()).or_default() += m;
                es.push((l.clone(), s));
            }
        }
        es.sort();
        edges.push(es);
        levels.push(next.into_iter().collect());
    }
    Bratteli { levels, edges }
}

/// Label sets per level, without multiplicities.
pub fn level_labels<T: Lattice>(lat: &T, n: usize) -> Vec<T::Label> {
    let mut cur: BTreeSet<T::Label> = [lat.origin()].into();
    for _ in 0..n {
        cur = cur.iter().flat_map(|l| lat.successors(l)).collect();
    }
    cur.into_iter().collect()
}

/// A path `t(0) -> ... -> t(k)` stored as its label sequence.
pub type Path<L> = Vec<L>;

/// Memoizing path enumerator.
pub struct PathIndex<T: Lattice> {
    lat: T,
    cache: Mutex<HashMap<(T::Label, T::Label, usize), Arc<Vec<Path<T::Label>>>>>,
}

impl<T: Lattice + Clone> PathIndex<T> {
    pub fn new(lat: T) -> Self {
        PathIndex {
            lat,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn lattice(&self) -> &T {
        &self.lat
    }

    /// All label sequences `δ -> ... -> λ` with `k` steps, lexicographic.
    pub fn paths_between(&self, d: &T::Label, l: &T::Label, k: usize) -> Arc<Vec<Path<T::Label>>> {
        let key = (d.clone(), l.clone(), k);
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let out = Arc::new(paths_between(&self.lat, d, l, k));
        self.cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Middles μ with `δ -> μ -> λ`.
    pub fn middles(&self, d: &T::Label, l: &T::Label) -> Vec<T::Label> {
        self.paths_between(d, l, 2).iter().map(|p| p[1].clone()).collect()
    }

    /// All paths of length n from the origin to λ.
    pub fn full_paths(&self, l: &T::Label, n: usize) -> Arc<Vec<Path<T::Label>>> {
        self.paths_between(&self.lat.origin(), l, n)
    }
}

pub fn paths_between<T: Lattice>(lat: &T, d: &T::Label, l: &T::Label, k: usize) -> Vec<Path<T::Label>> {
    // Forward reachability rules out empty searches up front.
    let mut reach: Vec<BTreeSet<T::Label>> = vec![BTreeSet::new(); k + 1];
    reach[0].insert(d.clone());
    for i in 0..k {
        let next: BTreeSet<T::Label> = reach[i].iter().flat_map(|x| lat.successors(x)).collect();
        reach[i + 1] = next;
    }
    if !reach[k].contains(l) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![d.clone()];
    fn rec<T: Lattice>(
        lat: &T,
        target: &T::Label,
        k: usize,
        cur: &mut Vec<T::Label>,
        out: &mut Vec<Vec<T::Label>>,
    ) {
        let i = cur.len() - 1;
        if i == k {
            if cur[k] == *target {
                out.push(cur.clone());
            }
            return;
        }
        for s in lat.successors(&cur[i]) {
            if i + 1 == k && s != *target {
                continue;
            }
            if i + 1 < k && !can_reach(lat, &s, target, k - i - 1) {
                continue;
            }
            cur.push(s);
            rec(lat, target, k, cur, out);
            cur.pop();
        }
    }
    rec(lat, l, k, &mut cur, &mut out);
    out
}

fn can_reach<T: Lattice>(lat: &T, from: &T::Label, to: &T::Label, steps: usize) -> bool {
    let mut cur: BTreeSet<T::Label> = [from.clone()].into();
    for _ in 0..steps {
        cur = cur.iter().flat_map(|x| lat.successors(x)).collect();
    }
    cur.contains(to)
}

/// Key of a σ_i block: the path with position `i` removed. Two paths share
/// a block iff they agree away from position `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockKey<L> {
    pub position: usize,
    pub outside: Vec<L>,
}

impl<L: Clone> BlockKey<L> {
    /// The pair (δ, λ) = (t(i-1), t(i+1)).
    pub fn ends(&self) -> (L, L) {
        (
            self.outside[self.position - 1].clone(),
            self.outside[self.position].clone(),
        )
    }
}

/// Partitions paths into σ_i blocks (σ_i changes position `i`).
pub fn sigma_blocks<L: Clone + Ord>(paths: &[Path<L>], i: usize) -> BTreeMap<BlockKey<L>, Vec<Path<L>>> {
    let mut out: BTreeMap<BlockKey<L>, Vec<Path<L>>> = BTreeMap::new();
    for p in paths {
        assert!(i >= 1 && i + 1 < p.len(), "generator index out of range");
        let mut outside = p.clone();
        outside.remove(i);
        out.entry(BlockKey { position: i, outside }).or_default().push(p.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: u32, b: u32) -> Weight {
        Weight::new(a, b)
    }

    #[test]
    fn g2_level_three_multiplicities() {
        let b = build(&G2Lattice, 3);
        let want = [(w(0, 0), 1), (w(0, 1), 2), (w(1, 0), 4), (w(1, 1), 2), (w(2, 0), 3), (w(3, 0), 1)];
        assert_eq!(b.levels[3], want.to_vec());
        let sq: u64 = b.levels[3].iter().map(|(_, m)| m * m).sum();
        assert_eq!(sq, 35);
    }

    #[test]
    fn young_standard_tableaux() {
        let b = build(&YoungLattice, 4);
        assert_eq!(b.multiplicity(&Partition(vec![2, 1]), 3), 2);
        assert_eq!(b.levels[4].len(), 5);
        assert_eq!(b.multiplicity(&Partition(vec![2, 2]), 4), 2);
        assert_eq!(b.multiplicity(&Partition(vec![3, 1]), 4), 3);
    }

    #[test]
    fn path_counts() {
        let idx = PathIndex::new(G2Lattice);
        assert_eq!(idx.paths_between(&w(2, 3), &w(3, 3), 3).len(), 24);
        let p = idx.paths_between(&w(1, 0), &w(2, 0), 2);
        let mids: Vec<_> = p.iter().map(|x| x[1]).collect();
        assert_eq!(mids, vec![w(0, 1), w(1, 0), w(2, 0)]);
        assert_eq!(idx.paths_between(&w(0, 0), &w(0, 1), 2).len(), 1);
    }

    #[test]
    fn generic_context_block_sizes() {
        let idx = PathIndex::new(G2Lattice);
        let paths = idx.paths_between(&w(2, 3), &w(3, 3), 3);
        let sizes = |i| {
            let mut v: Vec<usize> = sigma_blocks(&paths, i).values().map(|b| b.len()).collect();
            v.sort();
            v
        };
        let mut top = vec![7, 4, 4, 4, 2, 2, 1];
        top.sort();
        let mut low = vec![4, 7, 4, 2, 1, 2, 4];
        low.sort();
        assert_eq!(sizes(2), top);
        assert_eq!(sizes(1), low);
    }

    #[test]
    fn boundary_big_block_has_five_paths() {
        let idx = PathIndex::new(G2Lattice);
        for a in 3..6 {
            assert_eq!(idx.middles(&w(a, 0), &w(a, 0)).len(), 5);
        }
        assert_eq!(idx.middles(&w(0, 2), &w(0, 2)).len(), 3);
    }

    #[test]
    fn json_round_trip_and_dot() {
        let b = build(&G2Lattice, 4);
        let back = Bratteli::from_json(&G2Lattice, &b.export_json(&G2Lattice)).unwrap();
        assert_eq!(back, b);
        assert_eq!(b.levels[4].len(), 9);
        let dot = build(&G2Lattice, 1).export_dot(&G2Lattice);
        assert!(dot.contains("\"0@0\" -> \"1,0@1\""));
        let y = build(&YoungLattice, 3);
        assert_eq!(Bratteli::from_json(&YoungLattice, &y.export_json(&YoungLattice)).unwrap(), y);
    }

    #[test]
    fn added_row_detects_single_box() {
        let a = Partition(vec![2, 1]);
        assert_eq!(a.added_row(&Partition(vec![2, 1, 1])), Some(2));
        assert_eq!(a.added_row(&Partition(vec![3, 1])), Some(0));
        assert_eq!(a.added_row(&Partition(vec![3, 2])), None);
    }
}
