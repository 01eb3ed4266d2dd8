//! Level-by-level construction of the braid generators on path spaces.
//!
//! σ_{n-1} acts on paths of length n by changing position n-1 only, so it is
//! a direct sum of blocks W_2(δ, λ) indexed by the labels at positions n-2
//! and n. The matrix of a block depends only on (δ, λ), so each block is
//! built once, at the first level where it occurs, and reused above.
//!
//! Blocks with at most three eigenvalues have a closed form (up to the
//! gauge); the remaining blocks, and all gauge factors, are fixed by the
//! braid relation with σ_{n-2} and the auxiliary identities in
//! [`solver`].

mod gauge;
pub mod instance;
mod rep;
mod solver;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use instance::{BlockForm, Channel, ChannelData, Instance, Young, G2};
pub use rep::{JsonScalar, RepError, RepSet, REP_FORMAT};

use crate::matrix::{solve_square, Mat};
use crate::pathlattice::{level_labels, PathIndex};
use crate::qscalar::{Backend, Scalar};
use solver::{EqBuilder, Ent, Kind, System};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("degenerate block {block}: {detail}")]
    Degenerate { block: String, detail: String },
    #[error("solver stalled at level {level} with {unresolved} unresolved entries, e.g. {sample:?}")]
    NoProgress {
        level: usize,
        unresolved: usize,
        sample: Vec<String>,
    },
    #[error("inconsistent constraint at level {level}: {equation} (residual {residual})")]
    Inconsistent {
        level: usize,
        equation: String,
        residual: String,
    },
}

/// The matrix of σ on W_2(δ, λ), indexed by the middle labels μ.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix<L, S> {
    pub delta: L,
    pub lambda: L,
    pub middles: Vec<L>,
    /// Row-major entries; column t holds the image of path t.
    pub entries: Vec<S>,
}

impl<L: PartialEq + fmt::Display, S: Scalar> BlockMatrix<L, S> {
    pub fn dim(&self) -> usize {
        self.middles.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.dim() + j]
    }

    pub fn index_of(&self, m: &L) -> Option<usize> {
        self.middles.iter().position(|x| x == m)
    }

    pub fn matrix(&self) -> Mat<S> {
        Mat::from_square(self.dim(), self.entries.clone())
    }

    pub fn name(&self) -> String {
        block_name(&self.delta, &self.lambda)
    }
}

/// Label in parentheses, e.g. `(1,0)`.
pub fn wrap<L: fmt::Display>(l: &L) -> String {
    let s = l.to_string();
    if s.starts_with('(') {
        s
    } else {
        format!("({s})")
    }
}

/// Display name `W(δ->λ)` of a block.
pub fn block_name<L: fmt::Display>(d: &L, l: &L) -> String {
    format!("W({}->{})", wrap(d), wrap(l))
}

/// Exponents e(t) for the middles of W_2(δ, λ).
pub fn exponents<I: Instance>(inst: &I, d: &I::Label, l: &I::Label, mids: &[I::Label]) -> Vec<i64> {
    mids.iter().map(|m| inst.exponent(d, m, l)).collect()
}

/// Diagonal `d_t` of the rank-one eigenprojection P of A' for the channel
/// `ch`, in the gauge `p_ts = d_t`. It is the solution of the linear system
/// expressing `A' P = s P` through the master equation.
pub fn projector_diag<I: Instance, B: Backend>(
    inst: &I,
    be: &B,
    d: &I::Label,
    l: &I::Label,
    mids: &[I::Label],
    ch: usize,
) -> Result<Vec<B::S>, BuildError> {
    let n = mids.len();
    if n == 1 {
        return Ok(vec![B::S::one()]);
    }
    let data = inst.channel_data();
    let es = exponents(inst, d, l, mids);
    let q = be.q_pow(1);
    let qq = q.sub(&be.q_pow(-1));
    let s = be.lift(data.eigenvalue(ch)).mul(&be.q_pow(-data.normalization));
    let m = qq.sub(&s.sub(&s.inv().unwrap()));
    let degenerate = || BuildError::Degenerate {
        block: block_name(d, l),
        detail: "vanishing coefficient 1 - q^(e_t + e_s) in the projector system".into(),
    };
    let mut k = Mat::zeros(n, n);
    let mut rhs = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            let c = B::S::one().sub(&be.q_pow(es[i] + es[j]));
            let c = m.div(&c).map_err(|_| degenerate())?;
            k.set(i, j, c);
        }
        let c = B::S::one().sub(&be.q_pow(2 * es[i]));
        rhs.push(qq.div(&c).map_err(|_| degenerate())?.sub(&s));
    }
    solve_square(&k, &rhs).map_err(|_| BuildError::Degenerate {
        block: block_name(d, l),
        detail: "singular projector system".into(),
    })
}

/// The rank-one projector `P = d 1ᵀ` as a matrix; zero if the channel does
/// not occur on the block.
pub fn projector_block<I: Instance, B: Backend>(
    inst: &I,
    be: &B,
    d: &I::Label,
    l: &I::Label,
    mids: &[I::Label],
    ch: usize,
) -> Result<Mat<B::S>, BuildError> {
    let n = mids.len();
    if !inst.block_channels(d, l).iter().any(|(c, _)| *c == ch) {
        return Ok(Mat::zeros(n, n));
    }
    let dd = projector_diag(inst, be, d, l, mids, ch)?;
    let mut p = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            p.set(i, j, dd[i].clone());
        }
    }
    Ok(p)
}

/// Closed-form block from the master equation
/// `(1 - q^(e_t + e_s)) a'_ts = (q - q^-1) δ_ts - m p_ts`, `A = q^κ A'`.
/// Entries whose coefficient vanishes are recovered from the determinant
/// with the gauge normalization `a_12 = 1`.
pub fn closed_form_block<I: Instance, B: Backend>(
    inst: &I,
    be: &B,
    d: &I::Label,
    l: &I::Label,
    mids: &[I::Label],
) -> Result<Vec<B::S>, BuildError> {
    let n = mids.len();
    let data = inst.channel_data();
    let chans = inst.block_channels(d, l);
    let block = block_name(d, l);
    if n == 1 {
        let [(c, 1)] = chans[..] else {
            return Err(BuildError::Degenerate {
                block,
                detail: format!("one path but channels {chans:?}"),
            });
        };
        return Ok(vec![be.lift(data.eigenvalue(c))]);
    }
    let (rank_one, pdiag) = match inst.block_form(d, l) {
        BlockForm::RankOne(ch) => (true, projector_diag(inst, be, d, l, mids, ch)?),
        BlockForm::NoRankOne => (false, vec![B::S::zero(); n]),
        BlockForm::Solver => {
            return Err(BuildError::Degenerate {
                block,
                detail: "block has no closed form".into(),
            })
        }
    };
    let mval = match inst.block_form(d, l) {
        BlockForm::RankOne(ch) => {
            let s = be.lift(data.eigenvalue(ch)).mul(&be.q_pow(-data.normalization));
            be.q_pow(1)
                .sub(&be.q_pow(-1))
                .sub(&s.sub(&s.inv().unwrap()))
        }
        _ => B::S::zero(),
    };
    let es = exponents(inst, d, l, mids);
    let qq = be.q_pow(1).sub(&be.q_pow(-1));
    let scale = be.q_pow(data.normalization);
    let mut a = vec![B::S::zero(); n * n];
    let mut degenerate = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut rhs = mval.mul(&pdiag[i]).neg();
            if i == j {
                rhs = rhs.add(&qq);
            }
            let c = B::S::one().sub(&be.q_pow(es[i] + es[j]));
            if c.is_zero() {
                if !rhs.is_zero() {
                    return Err(BuildError::Degenerate {
                        block,
                        detail: format!("master equation has no solution at ({i},{j})"),
                    });
                }
                degenerate.push((i, j));
            } else {
                a[i * n + j] = rhs.div(&c).unwrap().mul(&scale);
            }
        }
    }
    if !degenerate.is_empty() {
        if n != 2 || rank_one || degenerate != [(0, 1), (1, 0)] {
            return Err(BuildError::Degenerate {
                block,
                detail: format!("entries {degenerate:?} left undetermined"),
            });
        }
        let det = chans.iter().fold(B::S::one(), |acc, (c, m)| {
            (0..*m).fold(acc, |x, _| x.mul(&be.lift(data.eigenvalue(*c))))
        });
        a[1] = B::S::one();
        a[2] = a[0].mul(&a[3]).sub(&det);
    }
    Ok(a)
}

/// Builds the generator blocks level by level for one instance.
pub struct Tower<I: Instance, B: Backend> {
    inst: I,
    backend: B,
    seed: u64,
    rng: ChaCha8Rng,
    paths: PathIndex<I>,
    levels: Vec<Vec<I::Label>>,
    blocks: BTreeMap<(I::Label, I::Label), BlockMatrix<I::Label, B::S>>,
    first_level: BTreeMap<(I::Label, I::Label), usize>,
    used_edges: BTreeSet<(I::Label, I::Label)>,
}

impl<I: Instance, B: Backend> Tower<I, B> {
    pub fn new(inst: I, backend: B, seed: u64) -> Self {
        let paths = PathIndex::new(inst.clone());
        let levels = vec![level_labels(&inst, 0), level_labels(&inst, 1)];
        Tower {
            inst,
            backend,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            paths,
            levels,
            blocks: BTreeMap::new(),
            first_level: BTreeMap::new(),
            used_edges: BTreeSet::new(),
        }
    }

    pub fn instance(&self) -> &I {
        &self.inst
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn paths(&self) -> &PathIndex<I> {
        &self.paths
    }

    /// Highest level whose generators are available.
    pub fn built_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn labels(&self, n: usize) -> &[I::Label] {
        &self.levels[n]
    }

    pub fn block(&self, d: &I::Label, l: &I::Label) -> Option<&BlockMatrix<I::Label, B::S>> {
        self.blocks.get(&(d.clone(), l.clone()))
    }

    pub fn blocks(&self) -> impl Iterator<Item = &BlockMatrix<I::Label, B::S>> {
        self.blocks.values()
    }

    /// Level at which a block was first constructed.
    pub fn block_level(&self, d: &I::Label, l: &I::Label) -> Option<usize> {
        self.first_level.get(&(d.clone(), l.clone())).copied()
    }

    /// Blocks of σ_{n-1} at level n, in (δ, λ) order.
    pub fn level_blocks(&self, n: usize) -> Vec<&BlockMatrix<I::Label, B::S>> {
        let mut out = Vec::new();
        for d in &self.levels[n - 2] {
            for l in &self.levels[n] {
                if let Some(b) = self.block(d, l) {
                    out.push(b);
                }
            }
        }
        out
    }

    /// Snapshot of everything built so far.
    pub fn rep_set(&self) -> RepSet<I, B::S> {
        RepSet {
            inst: self.inst.clone(),
            backend: self.backend.describe(),
            seed: self.seed,
            levels: self.levels.clone(),
            blocks: self.blocks.clone(),
            first_level: self.first_level.clone(),
        }
    }

    pub fn build_to(&mut self, n: usize) -> Result<(), BuildError> {
        while self.built_level() < n {
            self.build_level(self.built_level() + 1)?;
        }
        Ok(())
    }

    fn store(&mut self, n: usize, d: I::Label, l: I::Label, mids: Vec<I::Label>, entries: Vec<B::S>) {
        for m in &mids {
            self.used_edges.insert((m.clone(), l.clone()));
        }
        self.first_level.insert((d.clone(), l.clone()), n);
        self.blocks.insert(
            (d.clone(), l.clone()),
            BlockMatrix {
                delta: d,
                lambda: l,
                middles: mids,
                entries,
            },
        );
    }

    fn build_level(&mut self, n: usize) -> Result<(), BuildError> {
        let top = level_labels(&self.inst, n);
        self.levels.push(top.clone());
        let mut new = Vec::new();
        for d in &self.levels[n - 2] {
            for l in &top {
                if self.blocks.contains_key(&(d.clone(), l.clone())) {
                    continue;
                }
                let mids = self.paths.middles(d, l);
                if !mids.is_empty() {
                    new.push((d.clone(), l.clone(), mids));
                }
            }
        }
        if n == 2 {
            for (d, l, mids) in new {
                let a = closed_form_block(&self.inst, &self.backend, &d, &l, &mids)?;
                self.store(n, d, l, mids, a);
            }
            return Ok(());
        }
        let mut sys: System<B::S> = System::new(n);
        let mut node_of: BTreeMap<(I::Label, I::Label), usize> = BTreeMap::new();
        let mut index: BTreeMap<(I::Label, I::Label), usize> = BTreeMap::new();
        for (d, l, mids) in &new {
            let nodes: Vec<usize> = mids
                .iter()
                .map(|m| {
                    let key = (m.clone(), l.clone());
                    let anchored = self.used_edges.contains(&key);
                    *node_of.entry(key).or_insert_with(|| sys.gauge.add_edge(anchored))
                })
                .collect();
            let kind = match self.inst.block_form(d, l) {
                BlockForm::Solver => Kind::Solved {
                    vals: vec![None; mids.len() * mids.len()],
                },
                _ => Kind::Closed {
                    canon: closed_form_block(&self.inst, &self.backend, d, l, mids)?,
                },
            };
            let b = sys.add_block(block_name(d, l), nodes, kind);
            index.insert((d.clone(), l.clone()), b);
        }
        self.add_braid_equations(n, &mut sys, &index);
        self.add_block_identities(n, &mut sys, &new, &index)?;
        if n == 3 {
            self.add_b3_data(&mut sys, &new, &index)?;
        } else {
            self.add_trivial_projector_equations(n, &mut sys, &index);
        }
        sys.solve(&mut self.rng)?;
        for (d, l, mids) in new {
            let b = index[&(d.clone(), l.clone())];
            let vals = sys.block_values(b);
            self.store(n, d, l, mids, vals);
        }
        Ok(())
    }

    /// Entry of σ_{n-1} on block (a, λ) between middles `row` and `col`.
    fn x_entry(
        &self,
        sys: &System<B::S>,
        index: &BTreeMap<(I::Label, I::Label), usize>,
        a: &I::Label,
        l: &I::Label,
        row: &I::Label,
        col: &I::Label,
    ) -> Ent<B::S> {
        let key = (a.clone(), l.clone());
        if let Some(&b) = index.get(&key) {
            let mids = &self.paths.middles(a, l);
            let i = mids.iter().position(|m| m == row).unwrap();
            let j = mids.iter().position(|m| m == col).unwrap();
            sys.entry(b, i, j)
        } else {
            let blk = &self.blocks[&key];
            let i = blk.index_of(row).unwrap();
            let j = blk.index_of(col).unwrap();
            Ent::Const(blk.get(i, j).clone())
        }
    }

    /// σ_{n-1}σ_{n-2}σ_{n-1} = σ_{n-2}σ_{n-1}σ_{n-2} on every W_3(γ, λ)
    /// that involves a new block.
    fn add_braid_equations(&self, n: usize, sys: &mut System<B::S>, index: &BTreeMap<(I::Label, I::Label), usize>) {
        for g0 in &self.levels[n - 3] {
            for l in &self.levels[n] {
                let ctx = self.paths.paths_between(g0, l, 3);
                if ctx.is_empty() || !ctx.iter().any(|p| index.contains_key(&(p[1].clone(), l.clone()))) {
                    continue;
                }
                let paths: Vec<(I::Label, I::Label)> = ctx.iter().map(|p| (p[1].clone(), p[2].clone())).collect();
                // Y entries: σ_{n-2} on block (γ, b), changing a.
                let y = |ar: &I::Label, ac: &I::Label, b: &I::Label| -> B::S {
                    let blk = &self.blocks[&(g0.clone(), b.clone())];
                    blk.get(blk.index_of(ar).unwrap(), blk.index_of(ac).unwrap()).clone()
                };
                let x = |a: &I::Label, br: &I::Label, bc: &I::Label| self.x_entry(sys, index, a, l, br, bc);
                let has = |a: &I::Label, b: &I::Label| paths.iter().any(|(pa, pb)| pa == a && pb == b);
                let mut pending = Vec::new();
                for (sa, sb) in &paths {
                    for (ca, cb) in &paths {
                        let mut eq = EqBuilder::new();
                        // (X Y X)[s', s]: X changes b keeping a, Y changes a keeping b.
                        for (t1a, t1b) in paths.iter().filter(|(a, _)| a == sa) {
                            if !has(ca, t1b) {
                                continue;
                            }
                            let yv = y(t1a, ca, t1b);
                            if yv.is_zero() {
                                continue;
                            }
                            eq.add_product(&x(sa, sb, t1b), &yv, &x(ca, t1b, cb));
                        }
                        // - (Y X Y)[s', s]
                        for (t2a, _) in paths.iter().filter(|(_, b)| b == cb) {
                            let y2 = y(t2a, ca, cb);
                            if y2.is_zero() || !has(t2a, sb) {
                                continue;
                            }
                            let y1 = y(sa, t2a, sb);
                            if y1.is_zero() {
                                continue;
                            }
                            // X[(t2a, sb), (t2a, cb)]
                            eq.add_ent(&x(t2a, sb, cb), &y1.mul(&y2).neg());
                        }
                        pending.push(eq.finish(format!(
                            "braid W3({}->{}) [({sa},{sb}),({ca},{cb})]",
                            wrap(g0),
                            wrap(l)
                        )));
                    }
                }
                for eq in pending {
                    sys.push(eq);
                }
            }
        }
    }

    /// Trace and Jucys–Murphy identities on solver blocks.
    fn add_block_identities(
        &self,
        _n: usize,
        sys: &mut System<B::S>,
        new: &[(I::Label, I::Label, Vec<I::Label>)],
        index: &BTreeMap<(I::Label, I::Label), usize>,
    ) -> Result<(), BuildError> {
        let data = self.inst.channel_data();
        for (d, l, mids) in new {
            if self.inst.block_form(d, l) != BlockForm::Solver {
                continue;
            }
            let b = index[&(d.clone(), l.clone())];
            let k = mids.len();
            let mut tr = EqBuilder::new();
            for i in 0..k {
                tr.add_ent(&sys.entry(b, i, i), &B::S::one());
            }
            for (c, m) in self.inst.block_channels(d, l) {
                let ev = self.backend.lift(data.eigenvalue(c));
                tr.add_const(&ev.mul(&B::S::from_i64(m as i64)).neg());
            }
            sys.push(tr.finish(format!("trace {}", block_name(d, l))));
            // X D X = D' with D = J_{n-1}, D' = J_n on the block.
            let dv: Vec<B::S> = mids.iter().map(|m| self.backend.q_pow(self.inst.jm_exponent(d, m))).collect();
            let dp: Vec<B::S> = mids.iter().map(|m| self.backend.q_pow(self.inst.jm_exponent(m, l))).collect();
            for i in 0..k {
                for j in 0..k {
                    let mut eq = EqBuilder::new();
                    for t in 0..k {
                        eq.add_product(&sys.entry(b, i, t), &dv[t], &sys.entry(b, t, j));
                    }
                    if i == j {
                        eq.add_const(&dp[i].neg());
                    }
                    sys.push(eq.finish(format!("jm {} [{i},{j}]", block_name(d, l))));
                }
            }
        }
        Ok(())
    }

    /// At level 3, σ_1 is diagonal on W(λ, 3) with distinct eigenvalues
    /// y_t, and the diagonal Π_tγ of the σ_2 eigenprojections is symmetric
    /// and doubly stochastic. Its trivial row is known, and the inverse
    /// relation X⁻¹ = D X D'⁻¹ gives one linear condition per row. From Π
    /// the diagonal x_tt = Σ_γ α_γ Π_tγ and the products
    /// x_tγ x_γt = z Π_tγ / (y_t y_γ)² follow, with z the full-twist scalar.
    fn add_b3_data(
        &self,
        sys: &mut System<B::S>,
        new: &[(I::Label, I::Label, Vec<I::Label>)],
        index: &BTreeMap<(I::Label, I::Label), usize>,
    ) -> Result<(), BuildError> {
        let data = self.inst.channel_data();
        let origin = self.inst.origin();
        for (d, l, mids) in new {
            if self.inst.block_form(d, l) != BlockForm::Solver {
                continue;
            }
            let fail = |detail: &str| BuildError::Degenerate {
                block: block_name(d, l),
                detail: detail.into(),
            };
            let k = mids.len();
            let triv = data.trivial.ok_or_else(|| fail("no trivial channel"))?;
            let ytriv = self.backend.lift(data.eigenvalue(triv));
            let y: Vec<B::S> = mids
                .iter()
                .map(|m| self.blocks[&(origin.clone(), m.clone())].entries[0].clone())
                .collect();
            let t0 = y.iter().position(|v| *v == ytriv).ok_or_else(|| fail("no trivial middle"))?;
            let pidx = |i: usize, j: usize| {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                a * k - a * (a + 1) / 2 + b
            };
            let nvar = k * (k + 1) / 2;
            let mut rows: Vec<Vec<B::S>> = Vec::new();
            let mut rhs = Vec::new();
            for j in 0..k {
                let mut r = vec![B::S::zero(); nvar];
                r[pidx(t0, j)] = B::S::one();
                rows.push(r);
                let dj = self.inst.trivial_diag(&mids[j], l).ok_or_else(|| fail("no trivial projector"))?;
                rhs.push(self.backend.lift(&dj));
            }
            for i in 0..k {
                let mut r = vec![B::S::zero(); nvar];
                for j in 0..k {
                    let c = r[pidx(i, j)].add(&B::S::one());
                    r[pidx(i, j)] = c;
                }
                rows.push(r);
                rhs.push(B::S::one());
                let ratio = self
                    .backend
                    .q_pow(self.inst.jm_exponent(d, &mids[i]) - self.inst.jm_exponent(&mids[i], l));
                let mut r = vec![B::S::zero(); nvar];
                for j in 0..k {
                    let c = y[j].inv().unwrap().sub(&ratio.mul(&y[j]));
                    let cur = r[pidx(i, j)].add(&c);
                    r[pidx(i, j)] = cur;
                }
                rows.push(r);
                rhs.push(B::S::zero());
            }
            let sparse = rows
                .into_iter()
                .zip(rhs)
                .map(|(r, c)| crate::matrix::SparseRow {
                    coefs: r.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect(),
                    constant: c.neg(),
                })
                .collect();
            let pi = crate::matrix::determined_values(sparse).map_err(|_| fail("inconsistent projector diagonal system"))?;
            if pi.len() != nvar {
                return Err(fail("projector diagonal system is underdetermined"));
            }
            let z = self.backend.q_pow(self.inst.central_exponent(l, 3));
            let b = index[&(d.clone(), l.clone())];
            for i in 0..k {
                let mut diag = EqBuilder::new();
                diag.add_ent(&sys.entry(b, i, i), &B::S::one());
                let want = (0..k).fold(B::S::zero(), |acc, j| acc.add(&y[j].mul(&pi[&pidx(i, j)])));
                diag.add_const(&want.neg());
                sys.push(diag.finish(format!("b3 diagonal {} [{i}]", block_name(d, l))));
                for j in i + 1..k {
                    let yy = y[i].mul(&y[j]);
                    let prod = z.mul(&pi[&pidx(i, j)]).div(&yy.mul(&yy)).unwrap();
                    let mut eq = EqBuilder::new();
                    eq.add_product(&sys.entry(b, i, j), &B::S::one(), &sys.entry(b, j, i));
                    eq.add_const(&prod.neg());
                    sys.push(eq.finish(format!("b3 product {} [{i},{j}]", block_name(d, l))));
                }
            }
        }
        Ok(())
    }

    /// p σ_{n-1} p = γ p where p is the trivial-channel eigenprojection of
    /// σ_{n-2} on a block (g, g).
    fn add_trivial_projector_equations(
        &self,
        n: usize,
        sys: &mut System<B::S>,
        index: &BTreeMap<(I::Label, I::Label), usize>,
    ) {
        let data = self.inst.channel_data();
        let (Some(triv), Some(gamma)) = (data.trivial, self.inst.trivial_gamma()) else {
            return;
        };
        let gamma = self.backend.lift(&gamma);
        let alpha0 = self.backend.lift(data.eigenvalue(triv));
        for g in &self.levels[n - 3] {
            let Some(blk) = self.block(g, g) else { continue };
            let chans = self.inst.block_channels(g, g);
            if !chans.iter().any(|(c, _)| *c == triv) {
                continue;
            }
            let m = blk.matrix();
            let mut p = Mat::identity(blk.dim());
            for (c, _) in &chans {
                if *c == triv {
                    continue;
                }
                let ev = self.backend.lift(data.eigenvalue(*c));
                let f = alpha0.sub(&ev).inv().unwrap();
                p = p.mul(&m.sub_scalar(&ev)).scale(&f);
            }
            for l in &self.levels[n] {
                if !self.inst.successors(g).contains(l) {
                    continue;
                }
                if !blk.middles.iter().any(|a| index.contains_key(&(a.clone(), l.clone()))) {
                    continue;
                }
                let k = blk.dim();
                let xs: Vec<Ent<B::S>> = blk.middles.iter().map(|a| self.x_entry(sys, index, a, l, g, g)).collect();
                for i in 0..k {
                    for j in 0..k {
                        let mut eq = EqBuilder::new();
                        for t in 0..k {
                            let c = p.get(i, t).mul(p.get(t, j));
                            eq.add_ent(&xs[t], &c);
                        }
                        eq.add_const(&gamma.mul(p.get(i, j)).neg());
                        sys.push(eq.finish(format!("trivial projector {} [{i},{j}]", block_name(g, l))));
                    }
                }
            }
        }
    }
}
