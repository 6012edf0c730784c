//! Acceptance suite: nine exact checks, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the report lines always reach stdout.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use parabose::decompose::{
    build_lwhw_vector, gauge_hw_vectors, gauge_submodule, is_dominant, weyl_dim, Decomposer, OspSignature,
};
use parabose::generators::{from_noncovariant, positive_gauge_roots, SpinChoice};
use parabose::{
    enumerate_level, inner_product, CompiledOp, Half, ModelParams, Operator, Scalar, State, DEFAULT_CAPACITY,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(n: usize, p: usize) -> ModelParams {
    ModelParams::new(n, p).unwrap()
}

fn kets(pr: &ModelParams, max_degree: usize) -> Vec<State> {
    (0..=max_degree)
        .flat_map(|d| enumerate_level(pr, d, DEFAULT_CAPACITY).unwrap())
        .map(|k| State::from_ket(*pr, k))
        .collect()
}

fn compile(op: Operator, pr: &ModelParams) -> CompiledOp {
    op.compile(pr).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn b(a: usize) -> Operator {
    Operator::Annihilator(a)
}

fn bd(a: usize) -> Operator {
    Operator::Creator(a)
}

fn algebra() -> Outcome {
    let mut checked = 0usize;
    for n in 1..=2 {
        for p in 1..=5 {
            let pr = params(n, p);
            let sample = kets(&pr, 3);
            for a in 1..=n {
                for be in 1..=n {
                    for g in 1..=n {
                        let two_delta = Scalar::from_int(if be == g { 2 } else { 0 });
                        let relations = [
                            Operator::Sum(vec![
                                Operator::commutator(Operator::anticommutator(b(a), bd(be)), b(g)),
                                Operator::scaled(two_delta.clone(), b(a)),
                            ]),
                            Operator::Sum(vec![
                                Operator::commutator(Operator::anticommutator(bd(a), b(be)), bd(g)),
                                Operator::scaled(-&two_delta, bd(a)),
                            ]),
                            Operator::commutator(Operator::anticommutator(bd(a), bd(be)), bd(g)),
                            Operator::commutator(Operator::anticommutator(b(a), b(be)), b(g)),
                        ];
                        for (i, r) in relations.into_iter().enumerate() {
                            let r = compile(r, &pr);
                            for v in &sample {
                                let out = r.apply(v);
                                ensure(out.is_zero(), || {
                                    format!("relation {i} with ({a},{be},{g}) at n={n} p={p} leaves {out} on {v}")
                                })?;
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} zero residuals"))
}

fn gauge() -> Outcome {
    let mut checked = 0usize;
    for n in 1..=2 {
        for p in 2..=5 {
            let pr = params(n, p);
            let sample = kets(&pr, 3);
            for x in 1..=p {
                for y in x + 1..=p {
                    let anti = compile(Operator::Sum(vec![Operator::Gauge(x, y), Operator::Gauge(y, x)]), &pr);
                    for v in &sample {
                        ensure(anti.apply(v).is_zero(), || format!("G^{x}{y} + G^{y}{x} ≠ 0 at n={n} p={p}"))?;
                    }
                    for alpha in 1..=n {
                        for odd in [b(alpha), bd(alpha)] {
                            let c = compile(Operator::commutator(Operator::Gauge(x, y), odd), &pr);
                            for v in &sample {
                                ensure(c.apply(v).is_zero(), || format!("[G^{x}{y}, b] ≠ 0 at n={n} p={p} on {v}"))?;
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    // [G^{ab}, G^{cd}] = −i(δ^{bc}G^{ad} − δ^{ac}G^{bd} − δ^{bd}G^{ac} + δ^{ad}G^{bc}) on independent pairs a < b, c < d
    for n in 1..=2 {
        for p in 2..=5 {
            let pr = params(n, p);
            let sample = kets(&pr, 2);
            let g = |x: usize, y: usize| (x != y).then_some(Operator::Gauge(x, y));
            for a in 1..=p {
                for bb in a + 1..=p {
                    for c in 1..=p {
                        for d in c + 1..=p {
                            let mut rhs = Vec::new();
                            for (cond, sign, op) in [
                                (bb == c, 1, g(a, d)),
                                (a == c, -1, g(bb, d)),
                                (bb == d, -1, g(a, c)),
                                (a == d, 1, g(bb, c)),
                            ] {
                                if let (true, Some(op)) = (cond, op) {
                                    rhs.push(Operator::scaled(Scalar::i() * Scalar::from_int(sign), op));
                                }
                            }
                            let check = compile(
                                Operator::Sum(vec![
                                    Operator::commutator(Operator::Gauge(a, bb), Operator::Gauge(c, d)),
                                    Operator::Sum(rhs),
                                ]),
                                &pr,
                            );
                            for v in &sample {
                                ensure(check.apply(v).is_zero(), || {
                                    format!("[G^{a}{bb}, G^{c}{d}] structure constants fail at n={n} p={p}")
                                })?;
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} zero residuals"))
}

fn lemma1() -> Outcome {
    let mut shells = 0;
    for (n, p) in [(1, 2), (1, 3), (2, 2), (2, 3)] {
        let mut dec = Decomposer::new(params(n, p), DEFAULT_CAPACITY).map_err(|e| e.to_string())?;
        for row in dec.lemma1_check(4).map_err(|e| e.to_string())? {
            ensure(row.coincide && row.dim_q_eq_e == row.dim_vacuum, || {
                format!(
                    "n={n} p={p} degree {}: dim ker(Q−E) = {}, dim V0 = {}",
                    row.degree, row.dim_q_eq_e, row.dim_vacuum
                )
            })?;
            shells += 1;
        }
    }
    Ok(format!("{shells} shells coincide"))
}

const THEOREM1_PARAMS: [(usize, usize); 5] = [(1, 2), (1, 3), (2, 2), (2, 3), (2, 4)];

fn theorem1() -> Outcome {
    let mut rows = 0;
    for (n, p) in THEOREM1_PARAMS {
        let pr = params(n, p);
        let report = Decomposer::new(pr, DEFAULT_CAPACITY)
            .and_then(|mut d| d.joint_lw_hw_table(4))
            .map_err(|e| format!("n={n} p={p}: {e}"))?;
        for row in &report.rows {
            // σ_k = s_{n−k}, s_0 = d − p/2, padded with zeros
            let s0 = (row.osp.d - Half::from_twice(p as i64))
                .to_integer()
                .filter(|x| *x >= 0)
                .ok_or_else(|| format!("n={n} p={p}: d = {} below p/2", row.osp.d))?;
            let mut s = vec![s0 as u64];
            s.extend(&row.osp.s);
            for k in 1..=pr.q() {
                let expect = if k <= n { s[n - k] } else { 0 };
                ensure(row.gauge.sigma[k - 1] == expect, || {
                    format!("n={n} p={p}: {} paired with σ={}", row.osp, row.gauge)
                })?;
            }
            ensure(s.iter().take(n.saturating_sub(pr.q())).all(|&x| x == 0), || {
                format!("n={n} p={p}: {} has too many columns", row.osp)
            })?;
            rows += 1;
        }
    }
    Ok(format!("{rows} joint vectors, all groups of dimension ≤ 1"))
}

fn lemma3() -> Outcome {
    let mut rows = 0;
    for (n, p) in THEOREM1_PARAMS {
        let pr = params(n, p);
        let report = Decomposer::new(pr, DEFAULT_CAPACITY)
            .and_then(|mut d| d.joint_lw_hw_table(4))
            .map_err(|e| e.to_string())?;
        let mut killers: Vec<CompiledOp> = (1..=n).map(|a| compile(b(a), &pr)).collect();
        killers.extend(positive_gauge_roots(&pr).into_iter().map(|r| compile(Operator::GaugeRoot(r), &pr)));
        for row in &report.rows {
            let v = build_lwhw_vector(&pr, &row.osp).map_err(|e| format!("n={n} p={p} {}: {e}", row.osp))?;
            ensure(row.vector.proportionality(&v).is_some(), || {
                format!("n={n} p={p} {}: constructed vector is not proportional to the kernel vector", row.osp)
            })?;
            for op in &killers {
                ensure(op.apply(&v).is_zero(), || format!("n={n} p={p} {}: vector not annihilated", row.osp))?;
            }
            rows += 1;
        }
    }
    Ok(format!("{rows} vectors reproduced"))
}

fn corollary1() -> Outcome {
    let mut rows = 0;
    let mut hand_row = false;
    for (n, p) in THEOREM1_PARAMS {
        let mut dec = Decomposer::new(params(n, p), DEFAULT_CAPACITY).map_err(|e| e.to_string())?;
        for row in dec.multiplicity_check(4).map_err(|e| e.to_string())? {
            ensure(row.agrees(), || {
                format!("n={n} p={p} {}: counted {} but dimension {}", row.osp, row.counted, row.claimed)
            })?;
            if (n, p, row.degree) == (1, 2, 1) {
                ensure(row.counted == 2, || format!("(n=1,p=2,d=1) multiplicity {}", row.counted))?;
                hand_row = true;
            }
            rows += 1;
        }
    }
    ensure(hand_row, || "row (n=1,p=2,d=1) missing".into())?;
    Ok(format!("{rows} rows agree"))
}

fn theorem2() -> Outcome {
    let mut comps = 0;
    for (n, p) in [(1, 2), (2, 2), (1, 4)] {
        let mut dec = Decomposer::new(params(n, p), DEFAULT_CAPACITY).map_err(|e| e.to_string())?;
        let rows = dec.theorem2_check(3).map_err(|e| format!("n={n} p={p}: {e}"))?;
        for row in &rows {
            ensure(row.sp_lowest >= 1, || format!("n={n} p={p}: empty component {:?}", row.mu_orb))?;
            ensure(row.mu_orb.iter().skip(n).all(|&x| x == 0), || format!("n={n} p={p}: μ_orb {:?}", row.mu_orb))?;
            // Lemma 2: μ = μ_orb + (±1/2, …)
            ensure(row.mu.iter().zip(&row.mu_orb).all(|(m, &o)| (*m - Half::from_int(o)).abs() == Half::HALF), || {
                format!("n={n} p={p}: μ = {:?} not in μ_orb ⊗ spin", row.mu)
            })?;
        }
        comps += rows.len();
    }
    Ok(format!("{comps} components with sp(2n) lowest-weight vectors"))
}

fn corollary2() -> Outcome {
    let cutoff = Half::from_int(4);
    let mut sets = BTreeMap::new();
    for p in [3, 5] {
        let set = Decomposer::new(params(1, p), DEFAULT_CAPACITY)
            .and_then(|mut d| d.realizable_signatures(cutoff))
            .map_err(|e| e.to_string())?;
        sets.insert(p, set);
    }
    let (low, high) = (&sets[&3], &sets[&5]);
    let d_set = |s: &BTreeSet<OspSignature>| s.iter().map(|x| x.d).collect::<BTreeSet<Half>>();
    ensure(high.is_subset(low), || format!("p=5 adds {:?}", high.difference(low).collect::<Vec<_>>()))?;
    // every p=3 signature above the p=5 threshold is realized at p=5 too
    let above: BTreeSet<Half> = d_set(low).into_iter().filter(|d| *d >= Half::from_twice(5)).collect();
    ensure(above == d_set(high), || format!("p=3 {:?} vs p=5 {:?}", d_set(low), d_set(high)))?;
    // p=3 realizes every s_0 down to zero: d = 3/2, 5/2, 7/2
    let expect: BTreeSet<Half> = [3, 5, 7].into_iter().map(Half::from_twice).collect();
    ensure(d_set(low) == expect, || format!("p=3 set {:?}", d_set(low)))?;
    Ok(format!("p=3: {} signatures, p=5: {} (subset)", low.len(), high.len()))
}

fn noncovariant() -> Outcome {
    for p in 2..=5 {
        let pr = params(2, p);
        for (x, y) in [(1, 2), (1, p), (2, p)] {
            if x == y {
                continue;
            }
            let ab = from_noncovariant(&pr, &[(1, x), (2, y)], SpinChoice::All).map_err(|e| e.to_string())?;
            let ba = from_noncovariant(&pr, &[(2, y), (1, x)], SpinChoice::All).map_err(|e| e.to_string())?;
            for (u, v) in ab.iter().zip(&ba) {
                ensure(*u == v.scaled(&Scalar::from_int(-1)), || format!("p={p}: no sign flip for a={x}, b={y}"))?;
            }
        }
        // norm of a word is ∏ m! over repeated (α, a) letters
        for word in [vec![(1, 1)], vec![(1, 1), (1, 2)], vec![(1, 1), (1, 1)], vec![(2, p), (1, 2), (2, p)]] {
            let mut counts: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for l in &word {
                *counts.entry(*l).or_default() += 1;
            }
            let expect: i64 = counts.values().map(|&m| (1..=m).product::<i64>()).product();
            for v in from_noncovariant(&pr, &word, SpinChoice::All).map_err(|e| e.to_string())? {
                let norm = inner_product(&v, &v).map_err(|e| e.to_string())?;
                ensure(norm == Scalar::from_int(expect), || format!("p={p} word {word:?}: norm {norm}"))?;
            }
        }
    }
    // covariant image of a length-2 word splits into so(p) irreps
    let mut modules = 0;
    for p in [3, 5] {
        let pr = params(1, p);
        for v in from_noncovariant(&pr, &[(1, 1), (1, 2)], SpinChoice::All).map_err(|e| e.to_string())? {
            let module = gauge_submodule(&v).map_err(|e| e.to_string())?;
            let hw = gauge_hw_vectors(&module).map_err(|e| e.to_string())?;
            let mut total = 0u128;
            for (w, _) in &hw {
                ensure(is_dominant(p, &w.0), || format!("p={p}: weight {w} not dominant"))?;
                total += weyl_dim(p, &w.0, false).map_err(|e| e.to_string())?;
            }
            ensure(total == module.len() as u128, || {
                format!("p={p}: irreps account for {total} of {} dimensions", module.len())
            })?;
            modules += 1;
        }
    }
    Ok(format!("sign flips and norms exact, {modules} images decomposed"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("trilinear relations", algebra),
        ("gauge invariance and so(p) structure constants", gauge),
        ("Q = E exactly on the vacuum subspace", lemma1),
        ("joint lowest/highest weight pairing", theorem1),
        ("explicit lowest/highest weight vectors", lemma3),
        ("multiplicities match gauge dimensions", corollary1),
        ("spin-orbit components host sp(2n) lowest weights", theorem2),
        ("stabilization in p for n = 1", corollary2),
        ("noncovariant conversion", noncovariant),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (out, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (out, secs))) in criteria.iter().zip(results).enumerate() {
        match out {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
