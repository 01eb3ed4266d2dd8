//! Completion of the new blocks of one level by constraint propagation.
//!
//! Unknowns are the off-diagonal entries of closed-form blocks (which only
//! depend on the gauge) and all entries of solver blocks. Equations are
//! polynomials of degree at most two in the unknowns. The loop solves every
//! equation that has become linear in a single unknown; when that stalls it
//! row-reduces all equations that are currently linear, and only when that
//! also stalls does it spend a free gauge choice.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gauge::Gauge;
use super::BuildError;
use crate::matrix::{determined_values, modular_screen, ModularScreen, SparseRow};
use crate::qscalar::Scalar;

pub(crate) type VarId = usize;

#[derive(Clone, Debug)]
pub(crate) enum Ent<S> {
    Const(S),
    Var(VarId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Mono {
    L(VarId),
    Q(VarId, VarId),
}

pub(crate) struct Equation<S> {
    terms: Vec<(Mono, S)>,
    constant: S,
    tag: String,
    seen: u64,
}

/// Accumulates the terms of one equation.
pub(crate) struct EqBuilder<S> {
    terms: HashMap<Mono, S>,
    constant: S,
}

impl<S: Scalar> EqBuilder<S> {
    pub fn new() -> Self {
        EqBuilder {
            terms: HashMap::new(),
            constant: S::zero(),
        }
    }

    fn bump(&mut self, m: Mono, c: S) {
        match self.terms.get_mut(&m) {
            Some(x) => *x = x.add(&c),
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_const(&mut self, c: &S) {
        self.constant = self.constant.add(c);
    }

    pub fn add_ent(&mut self, e: &Ent<S>, c: &S) {
        if c.is_zero() {
            return;
        }
        match e {
            Ent::Const(x) => self.constant = self.constant.add(&x.mul(c)),
            Ent::Var(v) => self.bump(Mono::L(*v), c.clone()),
        }
    }

    /// Adds `a · c · b`.
    pub fn add_product(&mut self, a: &Ent<S>, c: &S, b: &Ent<S>) {
        if c.is_zero() {
            return;
        }
        match (a, b) {
            (Ent::Const(x), Ent::Const(y)) => {
                if !x.is_zero() && !y.is_zero() {
                    self.constant = self.constant.add(&x.mul(c).mul(y));
                }
            }
            (Ent::Const(x), Ent::Var(v)) | (Ent::Var(v), Ent::Const(x)) => {
                if !x.is_zero() {
                    self.bump(Mono::L(*v), x.mul(c));
                }
            }
            (Ent::Var(u), Ent::Var(v)) => {
                let (u, v) = if u <= v { (*u, *v) } else { (*v, *u) };
                self.bump(Mono::Q(u, v), c.clone());
            }
        }
    }

    pub fn finish(self, tag: String) -> Option<Equation<S>> {
        let mut terms: Vec<(Mono, S)> = self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() && self.constant.is_zero() {
            return None;
        }
        terms.sort_by_key(|t| t.0);
        Some(Equation {
            terms,
            constant: self.constant,
            tag,
            seen: u64::MAX,
        })
    }
}

pub(crate) enum Kind<S> {
    Closed { canon: Vec<S> },
    Solved { vals: Vec<Option<S>> },
}

pub(crate) struct NewBlock<S> {
    pub name: String,
    pub dim: usize,
    /// Edge ids of the rows in the gauge link structure.
    pub edges: Vec<usize>,
    /// Ratio-node ids of the rows.
    rows: Vec<usize>,
    pub kind: Kind<S>,
    vars: Vec<Option<VarId>>,
}

pub(crate) struct System<S> {
    pub blocks: Vec<NewBlock<S>>,
    vars: Vec<(usize, usize, usize)>,
    pub gauge: Gauge<S>,
    eqs: Vec<Equation<S>>,
    epoch: u64,
    level: usize,
}

const GAUGE_CHOICES: [(i64, i64); 7] = [(1, 1), (2, 1), (3, 1), (-1, 1), (-2, 1), (1, 2), (2, 3)];

impl<S: Scalar> System<S> {
    pub fn new(level: usize) -> Self {
        System {
            blocks: Vec::new(),
            vars: Vec::new(),
            gauge: Gauge::new(),
            eqs: Vec::new(),
            epoch: 0,
            level,
        }
    }

    pub fn add_block(&mut self, name: String, edges: Vec<usize>, kind: Kind<S>) -> usize {
        let b = self.blocks.len();
        let dim = edges.len();
        let rows = (0..dim).map(|_| self.gauge.add_ratio_node()).collect();
        let mut vars = vec![None; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let is_var = match &kind {
                    Kind::Closed { canon } => i != j && !canon[i * dim + j].is_zero(),
                    Kind::Solved { .. } => true,
                };
                if is_var {
                    vars[i * dim + j] = Some(self.vars.len());
                    self.vars.push((b, i, j));
                }
            }
        }
        self.blocks.push(NewBlock {
            name,
            dim,
            edges,
            rows,
            kind,
            vars,
        });
        b
    }

    pub fn entry(&self, b: usize, i: usize, j: usize) -> Ent<S> {
        let blk = &self.blocks[b];
        match blk.vars[i * blk.dim + j] {
            Some(v) => Ent::Var(v),
            None => match &blk.kind {
                Kind::Closed { canon } => Ent::Const(canon[i * blk.dim + j].clone()),
                Kind::Solved { .. } => unreachable!("solver entries are always variables"),
            },
        }
    }

    pub fn var_name(&self, v: VarId) -> String {
        let (b, i, j) = self.vars[v];
        format!("{}[{},{}]", self.blocks[b].name, i, j)
    }

    pub fn value(&mut self, v: VarId) -> Option<S> {
        let (b, i, j) = self.vars[v];
        let blk = &self.blocks[b];
        let d = blk.dim;
        match &blk.kind {
            Kind::Closed { canon } => {
                let c = canon[i * d + j].clone();
                let (ni, nj) = (blk.rows[i], blk.rows[j]);
                self.gauge.ratio(ni, nj).map(|r| c.mul(&r))
            }
            Kind::Solved { vals } => vals[i * d + j].clone(),
        }
    }

    pub fn set(&mut self, v: VarId, x: S) -> Result<(), BuildError> {
        let (b, i, j) = self.vars[v];
        let d = self.blocks[b].dim;
        let (ni, nj) = (self.blocks[b].rows[i], self.blocks[b].rows[j]);
        let ok = match &mut self.blocks[b].kind {
            Kind::Closed { canon } => {
                let r = x.div(&canon[i * d + j]).expect("closed-form variable entries are nonzero");
                if r.is_zero() {
                    false
                } else {
                    self.gauge.set_ratio(ni, nj, r)
                }
            }
            Kind::Solved { vals } => {
                let slot = &mut vals[i * d + j];
                match slot {
                    Some(old) => *old == x,
                    None => {
                        *slot = Some(x.clone());
                        true
                    }
                }
            }
        };
        self.epoch += 1;
        if ok {
            Ok(())
        } else {
            Err(BuildError::Inconsistent {
                level: self.level,
                equation: format!("assignment of {}", self.var_name(v)),
                residual: x.to_string(),
            })
        }
    }

    pub fn push(&mut self, eq: Option<Equation<S>>) {
        if let Some(e) = eq {
            self.eqs.push(e);
        }
    }

    /// Substitutes known values; returns false if the equation is already
    /// constant.
    fn fold(&mut self, k: usize) -> bool {
        if self.eqs[k].seen == self.epoch {
            return !self.eqs[k].terms.is_empty();
        }
        let terms = std::mem::take(&mut self.eqs[k].terms);
        let mut constant = self.eqs[k].constant.clone();
        let mut out: BTreeMap<Mono, S> = BTreeMap::new();
        let add = |m: Mono, c: S, out: &mut BTreeMap<Mono, S>| {
            if let Some(x) = out.get_mut(&m) {
                *x = x.add(&c);
            } else {
                out.insert(m, c);
            }
        };
        for (m, c) in terms {
            match m {
                Mono::L(v) => match self.value(v) {
                    Some(x) => constant = constant.add(&c.mul(&x)),
                    None => add(m, c, &mut out),
                },
                Mono::Q(u, v) => match (self.value(u), self.value(v)) {
                    (Some(x), Some(y)) => constant = constant.add(&c.mul(&x).mul(&y)),
                    (Some(x), None) => add(Mono::L(v), c.mul(&x), &mut out),
                    (None, Some(y)) => add(Mono::L(u), c.mul(&y), &mut out),
                    (None, None) => add(m, c, &mut out),
                },
            }
        }
        let e = &mut self.eqs[k];
        e.terms = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        e.constant = constant;
        e.seen = self.epoch;
        !e.terms.is_empty()
    }

    fn inconsistent(&self, k: usize) -> BuildError {
        BuildError::Inconsistent {
            level: self.level,
            equation: self.eqs[k].tag.clone(),
            residual: self.eqs[k].constant.to_string(),
        }
    }

    fn unresolved(&mut self) -> Vec<VarId> {
        (0..self.vars.len()).filter(|&v| self.value(v).is_none()).collect()
    }

    /// One sweep of single-unknown dispatch. Returns whether anything was
    /// assigned; constant equations are checked and retired.
    fn sweep(&mut self) -> Result<bool, BuildError> {
        let mut progress = false;
        let mut k = 0;
        while k < self.eqs.len() {
            if !self.fold(k) {
                if !self.eqs[k].constant.is_zero() {
                    return Err(self.inconsistent(k));
                }
                self.eqs.swap_remove(k);
                continue;
            }
            let e = &self.eqs[k];
            if e.terms.len() == 1 {
                if let (Mono::L(v), c) = &e.terms[0] {
                    let x = e.constant.neg().div(c).expect("nonzero coefficient");
                    let v = *v;
                    self.set(v, x)?;
                    progress = true;
                    self.eqs.swap_remove(k);
                    continue;
                }
            }
            k += 1;
        }
        Ok(progress)
    }

    /// Joint row reduction of every equation that is currently linear.
    fn linear_pass(&mut self) -> Result<bool, BuildError> {
        let mut rows = Vec::new();
        let mut src = Vec::new();
        for (k, e) in self.eqs.iter().enumerate() {
            if e.terms.iter().all(|(m, _)| matches!(m, Mono::L(_))) {
                rows.push(SparseRow {
                    coefs: e
                        .terms
                        .iter()
                        .map(|(m, c)| match m {
                            Mono::L(v) => (*v, c.clone()),
                            Mono::Q(..) => unreachable!(),
                        })
                        .collect(),
                    constant: e.constant.clone(),
                });
                src.push(k);
            }
        }
        if rows.is_empty() {
            return Ok(false);
        }
        // Independent groups of variables are reduced separately.
        let mut comp: HashMap<VarId, usize> = HashMap::new();
        let mut parent: Vec<usize> = Vec::new();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut row_root = Vec::with_capacity(rows.len());
        for r in &rows {
            let mut root = None;
            for v in r.coefs.keys() {
                let id = *comp.entry(*v).or_insert_with(|| {
                    parent.push(parent.len());
                    parent.len() - 1
                });
                let rid = find(&mut parent, id);
                match root {
                    None => root = Some(rid),
                    Some(r0) if r0 != rid => {
                        parent[rid] = r0;
                    }
                    _ => {}
                }
            }
            row_root.push(root.unwrap());
        }
        let mut groups: BTreeMap<usize, Vec<SparseRow<S>>> = BTreeMap::new();
        for (r, id) in rows.into_iter().zip(row_root) {
            let g = find(&mut parent, id);
            groups.entry(g).or_default().push(r);
        }
        let mut progress = false;
        for (_, g) in groups {
            if g.len() < 2 {
                continue;
            }
            let g = match modular_screen(&g) {
                ModularScreen::Independent { determines: false, .. } => continue,
                ModularScreen::Independent { rows, .. } => {
                    let mut g: Vec<Option<SparseRow<S>>> = g.into_iter().map(Some).collect();
                    rows.into_iter().map(|i| g[i].take().expect("distinct rows")).collect()
                }
                ModularScreen::Inconclusive => g,
            };
            let sol = determined_values(g).map_err(|_| BuildError::Inconsistent {
                level: self.level,
                equation: "linear subsystem".into(),
                residual: "nonzero".into(),
            })?;
            for (v, x) in sol {
                if self.value(v).is_none() {
                    self.set(v, x)?;
                    progress = true;
                }
            }
        }
        Ok(progress)
    }

    fn gauge_step(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by_key(|&b| {
            let closed = matches!(self.blocks[b].kind, Kind::Closed { .. });
            (!closed, std::cmp::Reverse(self.blocks[b].dim), b)
        });
        for b in order {
            let d = self.blocks[b].dim;
            for i in 0..d {
                for j in 0..d {
                    if i == j {
                        continue;
                    }
                    let Some(v) = self.blocks[b].vars[i * d + j] else {
                        continue;
                    };
                    let (ei, ej) = (self.blocks[b].edges[i], self.blocks[b].edges[j]);
                    let (ri, rj) = (self.blocks[b].rows[i], self.blocks[b].rows[j]);
                    let closed = matches!(self.blocks[b].kind, Kind::Closed { .. });
                    if (closed && i > j) || !self.gauge.is_free(ei, ej) || self.value(v).is_some() {
                        continue;
                    }
                    let (p, q) = GAUGE_CHOICES[rng.gen_range(0..GAUGE_CHOICES.len())];
                    let r = S::from_i64(p).div(&S::from_i64(q)).expect("nonzero");
                    match &mut self.blocks[b].kind {
                        Kind::Closed { .. } => {
                            self.gauge.set_ratio(ri, rj, r);
                        }
                        Kind::Solved { vals } => vals[i * d + j] = Some(r),
                    }
                    self.gauge.link(ei, ej);
                    self.epoch += 1;
                    return true;
                }
            }
        }
        false
    }

    pub fn solve(&mut self, rng: &mut ChaCha8Rng) -> Result<(), BuildError> {
        loop {
            let progress = self.sweep()?;
            if progress {
                continue;
            }
            if self.unresolved().is_empty() {
                // Every remaining equation must now be an identity.
                self.epoch += 1;
                for k in 0..self.eqs.len() {
                    if self.fold(k) || !self.eqs[k].constant.is_zero() {
                        return Err(self.inconsistent(k));
                    }
                }
                return Ok(());
            }
            if self.linear_pass()? {
                continue;
            }
            if !self.gauge_step(rng) {
                let un = self.unresolved();
                return Err(BuildError::NoProgress {
                    level: self.level,
                    unresolved: un.len(),
                    sample: un.iter().take(6).map(|&v| self.var_name(v)).collect(),
                });
            }
        }
    }

    /// Final entries of block `b`, row-major.
    pub fn block_values(&mut self, b: usize) -> Vec<S> {
        let d = self.blocks[b].dim;
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let v = match self.entry(b, i, j) {
                    Ent::Const(c) => c,
                    Ent::Var(v) => self.value(v).expect("solved"),
                };
                out.push(v);
            }
        }
        out
    }
}
