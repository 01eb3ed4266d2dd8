//! Acceptance run: one PASS/FAIL line per criterion, with its tolerance and
//! time budget. Expected values come from the oracles in `oracle/`, not
//! from the library's own weight code.

mod oracle;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use g2braid::g2weights::{qdim, Weight};
use g2braid::pathlattice::{self, paths_between, sigma_blocks};
use g2braid::qscalar::{EvalAt, Exact, QScalar};
use g2braid::repbuilder::{Instance, RepSet, Tower, Young, G2};
use g2braid::verifier::{self, PathSpace, VerifyReport};
use num_rational::BigRational;

struct Outcome {
    ok: bool,
    note: String,
}

fn outcome(ok: bool, note: impl Into<String>) -> Outcome {
    Outcome { ok, note: note.into() }
}

fn report(id: usize, tolerance: &str, budget: Duration, elapsed: Duration, o: &Outcome) -> bool {
    let in_time = elapsed <= budget;
    let ok = o.ok && in_time;
    println!(
        "criterion {id:>2}: {}  [{tolerance}; {:.2} s of {} s]  {}{}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs(),
        o.note,
        if in_time { "" } else { " (over time budget)" }
    );
    ok
}

fn w(l: (u32, u32)) -> Weight {
    Weight::new(l.0, l.1)
}

fn failures(reports: &[VerifyReport]) -> Option<String> {
    reports
        .iter()
        .find(|r| r.failed())
        .map(|r| format!("{} {}: {}", r.check, r.scope, r.witness.clone().unwrap_or_default()))
}

/// Channel eigenvalues from Casimirs; the antisymmetric summands are the
/// ones whose dimensions add up to dim Λ²V = 21.
fn oracle_spectrum() -> BTreeMap<(u32, u32), QScalar> {
    let chans: Vec<(u32, u32)> = oracle::tensor_v((1, 0)).into_keys().collect();
    let dims: Vec<u64> = chans.iter().map(|c| oracle::weyl_dim(c.0 as u64, c.1 as u64)).collect();
    let subsets: Vec<u32> = (0u32..1 << chans.len())
        .filter(|s| (0..chans.len()).filter(|i| s >> i & 1 == 1).map(|i| dims[i]).sum::<u64>() == 21)
        .collect();
    assert_eq!(subsets.len(), 1, "antisymmetric part not determined by dimension");
    chans
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let mag = QScalar::q_pow(oracle::casimir(c) / 2 - oracle::casimir((1, 0)));
            (c, if subsets[0] >> i & 1 == 1 { -mag } else { mag })
        })
        .collect()
}

fn c1() -> Outcome {
    let mut t = Tower::new(G2, Exact, 1);
    if let Err(e) = t.build_to(2) {
        return outcome(false, format!("build failed: {e}"));
    }
    let want = oracle_spectrum();
    let got: BTreeMap<(u32, u32), QScalar> =
        t.level_blocks(2).iter().map(|b| ((b.lambda.a, b.lambda.b), b.get(0, 0).clone())).collect();
    let list = |m: &BTreeMap<(u32, u32), QScalar>| {
        m.iter().map(|(k, v)| format!("{k:?}:{v}")).collect::<Vec<_>>().join(" ")
    };
    outcome(got == want, format!("sigma_1 on level 2: {}", list(&got)))
}

fn c2() -> Outcome {
    let b = pathlattice::build(&G2, 3);
    let oracle = oracle::tensor_power(3);
    let agree = b.labels(3).len() == oracle.len()
        && oracle.iter().all(|(l, m)| b.multiplicity(&w(*l), 3) == *m as u64)
        && oracle.keys().all(|l| oracle::path_count((0, 0), *l, 3) == oracle[l]);
    let order = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0)];
    let seq: Vec<u64> = order.iter().map(|l| b.multiplicity(&w(*l), 3)).collect();
    let sum_sq: u64 = b.labels(3).iter().map(|l| b.multiplicity(l, 3).pow(2)).sum();
    let oracle_sq: i64 = oracle.values().map(|m| m * m).sum();
    let ok = agree && b.multiplicity(&Weight::V, 3) == 4 && seq == [1, 4, 2, 3, 2, 1] && sum_sq == 35 && oracle_sq == 35;
    outcome(ok, format!("m((1,0),3) = {}, multiplicities {seq:?}, sum m^2 = {sum_sq}", b.multiplicity(&Weight::V, 3)))
}

fn c3() -> Outcome {
    let (d, l) = ((2, 3), (3, 3));
    let paths = paths_between(&G2, &w(d), &w(l), 3);
    let sizes = |i: usize| {
        let mut v: Vec<usize> = sigma_blocks(&paths, i).values().map(Vec::len).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    };
    let (last, prev) = (sizes(2), sizes(1));
    // Oracle: a σ_{n-1} block is fixed by the first step, a σ_{n-2} block by
    // the second-to-last vertex.
    let mut want_last: Vec<usize> = oracle::tensor_v(d).keys().map(|a| oracle::path_count(*a, l, 2) as usize).filter(|&c| c > 0).collect();
    let mut want_prev: Vec<usize> = oracle::tensor_power_from(d, 2)
        .into_iter()
        .filter(|(b, _)| oracle::tensor_v(*b).contains_key(&l))
        .map(|(_, c)| c as usize)
        .collect();
    want_last.sort_unstable_by(|a, b| b.cmp(a));
    want_prev.sort_unstable_by(|a, b| b.cmp(a));
    let mut quoted_prev = vec![4, 7, 4, 2, 1, 2, 4];
    quoted_prev.sort_unstable_by(|a, b| b.cmp(a));
    let ok = paths.len() == 24
        && oracle::path_count(d, l, 3) == 24
        && last == want_last
        && prev == want_prev
        && last == [7, 4, 4, 4, 2, 2, 1]
        && prev == quoted_prev;
    outcome(ok, format!("{} paths, sigma_(n-1) blocks {last:?}, sigma_(n-2) blocks {prev:?} (as multisets)", paths.len()))
}

fn braid_pass<I: Instance, B: g2braid::qscalar::Backend>(inst: I, be: B, n: usize) -> Result<RepSet<I, B::S>, String> {
    let mut t = Tower::new(inst, be, 1);
    t.build_to(n).map_err(|e| format!("{}: build failed: {e}", t.instance().name()))?;
    let rep = t.rep_set();
    match failures(&verifier::check_braid(&rep, n)) {
        Some(f) => Err(format!("{}: {f}", rep.inst.name())),
        None => Ok(rep),
    }
}

fn c4_eval() -> Outcome {
    let be = EvalAt::generic();
    let r = braid_pass(G2, be.clone(), 6).and_then(|_| braid_pass(Young, be, 6));
    match r {
        Ok(_) => outcome(true, "eval pre-pass at q = 3/2: G2 and Young braid relations on every context, n <= 6"),
        Err(e) => outcome(false, e),
    }
}

fn c4_exact(store: &mut Option<RepSet<G2, QScalar>>) -> Outcome {
    match braid_pass(G2, Exact, 6) {
        Ok(rep) => {
            *store = Some(rep);
            match braid_pass(Young, Exact, 6) {
                Ok(_) => outcome(true, "exact braid relations on every context W_3, G2 and Young, n <= 6"),
                Err(e) => outcome(false, e),
            }
        }
        Err(e) => outcome(false, e),
    }
}

fn c5(rep: &RepSet<G2, QScalar>) -> Outcome {
    let reports = verifier::check_central(rep, &Exact, 6, 4);
    if let Some(f) = failures(&reports) {
        return outcome(false, f);
    }
    // The exponents used by the check agree with the oracle Casimirs.
    for n in 0..=6 {
        for l in &rep.levels[n] {
            if G2.central_exponent(l, n) != oracle::casimir((l.a, l.b)) - 12 * n as i64 {
                return outcome(false, format!("central exponent of {l} at level {n}"));
            }
        }
    }
    let sp = PathSpace::new(rep, paths_between(&G2, &Weight::ZERO, &Weight::V, 3));
    let c = sp.word_matrix(&[1, 2]);
    let twist = c.mul(&c).mul(&c);
    let want = QScalar::q_pow(oracle::casimir((1, 0)) - 36);
    let ok = twist.scalar_value() == Some(want.clone()) && want == QScalar::q_pow(-24);
    outcome(ok, format!("q^(C-12n) on every W(lambda,n), n <= 6; (s1 s2)^3 on W((1,0),3) = {want}"))
}

fn c6(rep: &RepSet<G2, QScalar>) -> Outcome {
    let reports = verifier::check_b3_scalars(rep, &Exact);
    if let Some(f) = failures(&reports) {
        return outcome(false, f);
    }
    let dims: Vec<usize> = rep.levels[3]
        .iter()
        .map(|l| paths_between(&G2, &Weight::ZERO, l, 3).len())
        .collect();
    let covers = [2, 3, 4].iter().all(|m| dims.contains(m));
    let sp = PathSpace::new(rep, paths_between(&G2, &Weight::ZERO, &Weight::V, 3));
    let det = sp.generator(1).det();
    let root = QScalar::q_pow(-8);
    let ok = covers && &root * &root == det;
    outcome(ok, format!("{} modules at level 3; m = 4 root q^-8 squares to det = {det}", reports.len()))
}

fn c7(rep: &RepSet<G2, QScalar>) -> Outcome {
    let data = G2.channel_data();
    let Some(r1) = data.rank_one else {
        return outcome(false, "no rank-one channel");
    };
    let want = oracle_spectrum()[&(1, 0)].clone();
    if data.eigenvalue(r1) != &want || want != -QScalar::q_pow(-6) {
        return outcome(false, format!("rank-one channel eigenvalue {}", data.eigenvalue(r1)));
    }
    let reports = verifier::check_projectors(rep, &Exact, 5);
    match failures(&reports) {
        Some(f) => outcome(false, f),
        None => outcome(true, "P^2 = P, tr P = 1, A P = -q^-6 P and nonzero off-diagonal entries, levels <= 5"),
    }
}

fn c8() -> Outcome {
    let run = |r: Result<Vec<VerifyReport>, _>| match r {
        Ok(v) => failures(&v),
        Err(e) => Some(format!("build failed: {e}")),
    };
    if let Some(f) = run(verifier::rigidity_experiment(&G2, &Exact, 5, 5, 1)) {
        return outcome(false, format!("G2: {f}"));
    }
    if let Some(f) = run(verifier::rigidity_experiment(&Young, &Exact, 5, 5, 1)) {
        return outcome(false, format!("Young: {f}"));
    }
    outcome(true, "seeds 1..5 at n = 5 give identical fingerprints on every block (G2 and Young)")
}

fn c9() -> Outcome {
    let mut t = Tower::new(G2, Exact, 1);
    if let Err(e) = t.build_to(3) {
        return outcome(false, format!("build failed: {e}"));
    }
    let point = BigRational::new(3.into(), 2.into());
    let rep = match verifier::evaluate(&t.rep_set(), &point) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let reports = verifier::check_generation_n3(&rep);
    let want: i64 = oracle::tensor_power(3).values().map(|m| m * m).sum();
    let total = reports.last().and_then(|r| r.detail.clone()).unwrap_or_default();
    let ok = failures(&reports).is_none() && total == format!("dimension {want}") && want == 35;
    outcome(ok, format!("words in s1, s2 at q = 3/2 span {total}"))
}

fn c10() -> Outcome {
    let one = BigRational::from_integer(1.into());
    for a in 0..=6u32 {
        for b in 0..=6u32 {
            let at1 = qdim(Weight::new(a, b)).eval_at(&one);
            if at1 != Ok(BigRational::from_integer(oracle::weyl_dim(a as u64, b as u64).into())) {
                return outcome(false, format!("qdim({a},{b}) at q = 1 is {at1:?}"));
            }
            let lhs = oracle::tensor_v((a, b))
                .into_iter()
                .fold(QScalar::zero(), |acc, (mu, m)| acc + QScalar::from_int(m) * qdim(w(mu)));
            let rhs = qdim(Weight::new(a, b)) * qdim(Weight::V);
            if lhs != rhs {
                return outcome(false, format!("sum over neighbours of ({a},{b}): {lhs} != {rhs}"));
            }
        }
    }
    outcome(true, "49 weights: qdim(1) = Weyl dimension and sum of neighbour qdims = qdim(lambda) qdim(V)")
}

fn timed<F: FnOnce() -> Outcome>(f: F) -> (Outcome, Duration) {
    let s = Instant::now();
    let o = f();
    (o, s.elapsed())
}

fn main() {
    let secs = Duration::from_secs;
    let mut all = true;
    let (o, t) = timed(c1);
    all &= report(1, "exact equality", secs(1), t, &o);
    let (o, t) = timed(c2);
    all &= report(2, "exact", secs(1), t, &o);
    let (o, t) = timed(c3);
    all &= report(3, "exact", secs(1), t, &o);

    let (o, t) = timed(c4_eval);
    all &= report(4, "eval pre-pass, exact rationals at q = 3/2", secs(30), t, &o);
    let mut g2 = None;
    let (o, t) = timed(|| c4_exact(&mut g2));
    all &= report(4, "exact over Q(q)", secs(600), t, &o);

    let missing = || outcome(false, "needs the exact G2 tower of criterion 4");
    let (o, t) = timed(|| g2.as_ref().map_or_else(missing, c5));
    all &= report(5, "exact", secs(600), t, &o);
    let (o, t) = timed(|| g2.as_ref().map_or_else(missing, c6));
    all &= report(6, "exact", secs(60), t, &o);
    let (o, t) = timed(|| g2.as_ref().map_or_else(missing, c7));
    all &= report(7, "exact", secs(600), t, &o);

    let (o, t) = timed(c8);
    all &= report(8, "exact fingerprints", secs(900), t, &o);
    let (o, t) = timed(c9);
    all &= report(9, "exact rationals", secs(10), t, &o);
    let (o, t) = timed(c10);
    all &= report(10, "exact", secs(60), t, &o);

    println!("acceptance: {}", if all { "all criteria pass" } else { "FAILURES" });
    if !all {
        std::process::exit(1);
    }
}
