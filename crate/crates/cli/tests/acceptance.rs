//! End-to-end acceptance run: one PASS/FAIL line per criterion, exact
//! arithmetic throughout.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use emvkit::algebra::{verify_axioms, Carrier, Element, FiniteEmv, SymbolicEmv, PAIR_CAP};
use emvkit::gen::Gen;
use emvkit::measures::{
    integral_represent, integral_represent_symbolic, leq_plus, strong_join_t, MeasureSpace,
};
use emvkit::states::{
    classify_symbolic, horn_tarski_extend, km_decompose, meet_criterion, restrict_to_inner,
    state_identities, PreStateClass, StateSpace, StateVec, SymbolicState, Tail,
};
use emvkit::structure::{
    gea_to_emv, maximal_ideals, maximal_ideals_bruteforce, monoid_reconstruct,
    radical_and_infinitesimals, radical_and_infinitesimals_symbolic, representing_checks,
    subalgebra, subalgebra_closure, to_gea, Ideal, RDP_LIMIT,
};
use rand::seq::SliceRandom;
use rand::Rng;
use ratlp::{affine_rank, vertex_test, Rat};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn algebras() -> Vec<(String, FiniteEmv)> {
    let c = FiniteEmv::chain;
    let mut out: Vec<(String, FiniteEmv)> = (1..=5).map(|k| (format!("chain({k})"), c(k))).collect();
    out.push(("product(chain(2),chain(1))".into(), FiniteEmv::product(&[c(2), c(1)])));
    out.push(("product(chain(2),chain(2))".into(), FiniteEmv::product(&[c(2), c(2)])));
    out.push(("boolean(2)".into(), FiniteEmv::boolean(2)));
    out.push(("boolean(3)".into(), FiniteEmv::boolean(3)));
    out
}

fn err<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}

fn combine(w: &[Rat], points: &[StateVec]) -> StateVec {
    (0..points[0].len())
        .map(|x| w.iter().zip(points).map(|(c, p)| c * &p[x]).sum())
        .collect()
}

/// Seeded convex combinations, LP points and the morphisms themselves.
fn state_pool(space: &StateSpace, seed: u64) -> Vec<StateVec> {
    let mut g = Gen::new(seed);
    let mut pool = space.morphisms().to_vec();
    for _ in 0..50 {
        pool.push(g.convex_combination(space.morphisms()).1);
        if let Some(p) = g.lp_point(space.polytope()) {
            pool.push(p);
        }
    }
    pool
}

fn c1_axioms() -> Outcome {
    for (name, m) in algebras() {
        let r = verify_axioms(&Carrier::Finite(m), 0, 0);
        ensure!(r.is_clean(), "{name}: {:?}", r.violations.first());
    }
    let mut caught = 0;
    for (name, m) in [("chain(3)", FiniteEmv::chain(3)), ("boolean(3)", FiniteEmv::boolean(3))] {
        let mut g = Gen::new(1);
        for k in 0..100 {
            let (i, j, v) = g.mutation(&m);
            let bad = m.mutated(i, j, v).map_err(err(name))?;
            let report = verify_axioms(&Carrier::Finite(bad.clone()), 0, 0);
            ensure!(
                !report.is_clean() || bad.natural_order().is_err(),
                "{name} mutation #{k} ({i},{j})->{v} went unnoticed"
            );
            caught += 1;
        }
    }
    Ok(format!("9 algebras clean, {caught}/200 mutations caught"))
}

fn kernel_is_maximal(maximal: &[Ideal], s: &[Rat]) -> bool {
    let kernel = Ideal::from_elements(s.len(), (0..s.len()).filter(|&x| s[x].is_zero()));
    maximal.contains(&kernel)
}

fn c2_extremal() -> Outcome {
    let mut states = 0;
    let mut lp_points = 0;
    for (name, m) in algebras() {
        let space = StateSpace::new(&m).map_err(err(&name))?;
        let maximal = match maximal_ideals_bruteforce(&m) {
            Some(v) => v,
            None => maximal_ideals(&m).map_err(err(&name))?,
        };
        let poly = space.polytope();
        let verdicts = |s: &[Rat]| -> Result<(bool, bool, bool), String> {
            let pairwise = meet_criterion(&m, s).map_err(err(&name))?.is_none();
            let vertex = vertex_test(s, poly).map_err(err(&name))?;
            Ok((pairwise, kernel_is_maximal(&maximal, s), vertex))
        };
        for (i, t) in space.morphisms().iter().enumerate() {
            ensure!(verdicts(t)? == (true, true, true), "{name}: morphism t{i} fails a test");
        }
        let mut g = Gen::new(2);
        for k in 0..50 {
            let (w, s) = g.convex_combination(space.morphisms());
            let (a, b, c) = verdicts(&s)?;
            let single = w.iter().filter(|x| !x.is_zero()).count() == 1;
            ensure!(a == b && b == c && c == single, "{name}: combination #{k} verdicts {a} {b} {c}");
            states += 1;
        }
        for k in 0..50 {
            let p = g.lp_point(poly).ok_or(format!("{name}: LP point #{k} missing"))?;
            ensure!(poly.is_feasible_point(&p), "{name}: LP point #{k} infeasible");
            if vertex_test(&p, poly).map_err(err(&name))? {
                ensure!(space.morphisms().contains(&p), "{name}: vertex #{k} is not a morphism");
            }
            lp_points += 1;
        }
    }
    Ok(format!("{states} combinations agree, {lp_points} LP points inside the morphism list"))
}

fn c3_krein_milman() -> Outcome {
    let mut n = 0;
    for (name, m) in algebras() {
        let space = StateSpace::new(&m).map_err(err(&name))?;
        let ms = space.morphisms();
        let r = affine_rank(ms).map_err(err(&name))?;
        ensure!(r + 1 == ms.len(), "{name}: affine rank {r} with {} morphisms", ms.len());
        let mut g = Gen::new(3);
        for k in 0..100 {
            let (w, s) = g.convex_combination(ms);
            let got = km_decompose(&m, &s).map_err(err(&name))?;
            ensure!(got == w, "{name}: combination #{k} decomposed to {got:?}, expected {w:?}");
            n += 1;
        }
    }
    Ok(format!("{n} decompositions exact, morphisms affinely independent"))
}

fn c4_identities() -> Outcome {
    let mut n = 0;
    for (name, m) in algebras() {
        let space = StateSpace::new(&m).map_err(err(&name))?;
        for s in state_pool(&space, 4) {
            if let Some((x, y)) = state_identities(&m, &s).map_err(err(&name))? {
                return Err(format!("{name}: identity fails at ({}, {})", m.label(x), m.label(y)));
            }
            n += 1;
        }
    }
    Ok(format!("{n} states satisfy both identities on all pairs"))
}

fn c5_horn_tarski() -> Outcome {
    let all = algebras();
    let mut g = Gen::new(5);
    let mut trials = 0;
    while trials < 50 {
        let k = g.rng().gen_range(0..all.len());
        let (name, m) = &all[k];
        let seed_set = g.subset(m.size());
        let sub = subalgebra_closure(m, &seed_set).map_err(err(name))?;
        let m0 = subalgebra(m, &sub).map_err(err(name))?;
        if m0.size() < 2 {
            continue;
        }
        let space0 = StateSpace::new(&m0).map_err(err(name))?;
        let (_, s0) = g.convex_combination(space0.morphisms());
        let s = horn_tarski_extend(m, &sub, &s0).map_err(err(name))?;
        ensure!(
            StateSpace::new(m).map_err(err(name))?.state_violation(&s).map_err(err(name))?.is_none(),
            "{name}: extension is not a state"
        );
        for (i, &x) in sub.iter().enumerate() {
            ensure!(s[x] == s0[i], "{name}: extension moved {}", m.label(x));
        }
        trials += 1;
    }
    let c2 = FiniteEmv::chain(2);
    let s = horn_tarski_extend(&c2, &[0, 2], &[Rat::zero(), Rat::one()]).map_err(err("chain(2)"))?;
    ensure!(s[1] == Rat::new(1, 2), "forced case gave s(1) = {}", s[1]);
    Ok(format!("{trials} extensions agree on the subalgebra, forced s(1) = 1/2"))
}

fn c6_gea() -> Outcome {
    let mut rdp = 0;
    for (name, m) in algebras() {
        let gea = to_gea(&m).map_err(err(&name))?;
        let back = gea_to_emv(&gea).map_err(err(&name))?;
        ensure!(back.table_rows() == m.table_rows(), "{name}: table changed");
        if m.size() <= RDP_LIMIT {
            gea.check_rdp().map_err(err(&name))?;
            rdp += 1;
        }
    }
    Ok(format!("9 tables reproduced, RDP exhaustive on {rdp}"))
}

fn c7_monoid() -> Outcome {
    for (name, m) in algebras() {
        let lat = monoid_reconstruct(&m).map_err(err(&name))?;
        let order = m.natural_order().map_err(err(&name))?;
        ensure!(lat.join == order.join_rows(), "{name}: join tables differ");
        ensure!(lat.meet == order.meet_rows(), "{name}: meet tables differ");
    }
    Ok("join and meet tables match on 9 algebras".into())
}

fn c8_representing() -> Outcome {
    let t = SymbolicEmv::FinSubsets;
    let rep = representing_checks(&t, 8, 0).map_err(err("representing"))?;
    ensure!(rep.holds(), "representing checks failed: {:?}", rep.failures.first());
    let n = SymbolicEmv::representing(t.clone()).map_err(err("representing"))?;
    let sample = n.enumerate(8);
    let mut pairs: Vec<(usize, usize)> = (0..sample.len())
        .flat_map(|i| (0..sample.len()).map(move |j| (i, j)))
        .collect();
    if pairs.len() > PAIR_CAP {
        pairs.shuffle(Gen::new(8).rng());
        pairs.truncate(PAIR_CAP);
    }
    let mut candidates: Vec<(String, SymbolicState)> =
        (1..=8).map(|k| (format!("~s_{k}"), SymbolicState::morphism(k))).collect();
    candidates.push(("s_inf".into(), SymbolicState::infinity()));
    for (label, s) in &candidates {
        let values: Vec<Rat> = sample
            .iter()
            .map(|x| s.eval(&n, x))
            .collect::<Result<_, _>>()
            .map_err(err(label))?;
        for &(i, j) in &pairs {
            let (x, y) = (&sample[i], &sample[j]);
            let meet = s.eval(&n, &n.meet(x, y).map_err(err(label))?).map_err(err(label))?;
            let join = s.eval(&n, &n.join(x, y).map_err(err(label))?).map_err(err(label))?;
            let sum = s.eval(&n, &n.oplus(x, y).map_err(err(label))?).map_err(err(label))?;
            let (a, b) = (&values[i], &values[j]);
            ensure!(meet == a.clone().min(b.clone()), "{label}: meet fails at {x}, {y}");
            ensure!(join == a.clone().max(b.clone()), "{label}: join fails at {x}, {y}");
            ensure!(sum == (a + b).min(Rat::one()), "{label}: sum fails at {x}, {y}");
        }
        let class = classify_symbolic(&n, s, 8, 0).map_err(err(label))?.class;
        ensure!(class == PreStateClass::StateMorphism, "{label} classified {class:?}");
    }
    for k in 1..=10u64 {
        let a = Element::set(1..=k);
        for m in k + 1..=k + 10 {
            let v = SymbolicState::morphism(m).eval(&t, &a).map_err(err("s_n"))?;
            ensure!(v.is_zero(), "s_{m}([1..{k}]) = {v}");
        }
    }
    let limit = classify_symbolic(&t, &SymbolicState::zero(), 8, 0).map_err(err("limit"))?;
    ensure!(limit.class == PreStateClass::Zero, "limit classified {:?}", limit.class);
    Ok(format!(
        "sample {} elements, {} pairs per morphism for 9 morphisms, limit is Zero",
        sample.len(),
        pairs.len()
    ))
}

fn c9_jordan() -> Outcome {
    let mut joins = 0;
    let mut bounds = 0;
    for (name, m) in algebras() {
        let space = MeasureSpace::new(&m).map_err(err(&name))?;
        let morphisms = StateSpace::new(&m).map_err(err(&name))?.morphisms().to_vec();
        let mut g = Gen::new(9);
        let pool: Vec<Vec<Rat>> = (0..10).map(|_| g.signed_measure(&space, &morphisms)).collect();
        let plus = |x: &[Rat], y: &[Rat]| -> Vec<Rat> { x.iter().zip(y).map(|(p, q)| p + q).collect() };
        for a in &pool {
            let (pos, neg) = space.jordan_parts(a).map_err(err(&name))?;
            ensure!(pos.iter().chain(&neg).all(|v| !v.is_negative()), "{name}: negative Jordan part");
            let diff: Vec<Rat> = pos.iter().zip(&neg).map(|(p, q)| p - q).collect();
            ensure!(&diff == a, "{name}: m != m+ - m-");
            for b in &pool {
                let join = space.join(a, b).map_err(err(&name))?;
                let pointwise: Vec<Rat> = a.iter().zip(b).map(|(p, q)| p.clone().max(q.clone())).collect();
                let oracle = space.sup_construction(&pointwise).map_err(err(&name))?;
                ensure!(join == oracle, "{name}: join differs from the sup construction");
                let meet = space.meet(a, b).map_err(err(&name))?;
                ensure!(space.join(a, &meet).map_err(err(&name))? == *a, "{name}: absorption fails");
                let c = &pool[joins % pool.len()];
                let shifted = space.join(&plus(a, c), &plus(b, c)).map_err(err(&name))?;
                ensure!(shifted == plus(&join, c), "{name}: translation law fails");
                ensure!(leq_plus(a, &join) && leq_plus(b, &join), "{name}: join is not an upper bound");
                joins += 1;
            }
        }
        for k in 0..20 {
            let (a, b) = (&pool[k % 10], &pool[(3 * k + 1) % 10]);
            let join = space.join(a, b).map_err(err(&name))?;
            let u = g.upper_bound(a, b, &morphisms);
            ensure!(leq_plus(a, &u) && leq_plus(b, &u), "{name}: generated bound #{k} is not a bound");
            ensure!(leq_plus(&join, &u), "{name}: join exceeds upper bound #{k}");
            bounds += 1;
        }
    }
    Ok(format!("{joins} joins match the oracle, {bounds} upper bounds dominate"))
}

/// All set partitions of `items`.
fn partitions(items: &[u64]) -> Vec<Vec<Vec<u64>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].push(first);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![first]);
        out.push(q);
    }
    out
}

fn c10_strong_join() -> Outcome {
    let t = SymbolicEmv::FinSubsets;
    let mut g = Gen::new(10);
    let mut checked = 0;
    for k in 0..20 {
        let draw = |g: &mut Gen| {
            let support: Vec<u64> = (1..=7).filter(|_| g.rng().gen_bool(0.6)).collect();
            let raw: Vec<i64> = support.iter().map(|_| g.rng().gen_range(0..=6)).collect();
            let total = raw.iter().sum::<i64>() + 1;
            let w: Vec<(u64, Rat)> = support.iter().zip(&raw).map(|(&n, &r)| (n, Rat::new(r, total))).collect();
            SymbolicState::finite(&w)
        };
        let (m1, m2) = (draw(&mut g), draw(&mut g));
        let join = strong_join_t(&m1, &m2).map_err(err("strong join"))?;
        let support: Vec<u64> = m1.merged_base().keys().chain(m2.merged_base().keys()).copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        for mask in 0u32..(1 << support.len()) {
            if mask.count_ones() > 5 {
                continue;
            }
            let a: Vec<u64> = (0..support.len()).filter(|&i| mask >> i & 1 == 1).map(|i| support[i]).collect();
            let mut best = Rat::zero();
            for p in partitions(&a) {
                let mut total = Rat::zero();
                for block in p {
                    let e = Element::set(block);
                    let v1 = m1.eval(&t, &e).map_err(err("m1"))?;
                    let v2 = m2.eval(&t, &e).map_err(err("m2"))?;
                    total += v1.max(v2);
                }
                best = best.max(total);
            }
            let got = join.eval(&t, &Element::set(a.clone())).map_err(err("join"))?;
            ensure!(got == best, "pair #{k}: join on {a:?} is {got}, decomposition gives {best}");
            checked += 1;
        }
    }
    Ok(format!("20 pairs, {checked} subsets match the decomposition formula"))
}

fn c11_integral() -> Outcome {
    let mut n = 0;
    for (name, m) in algebras() {
        let space = StateSpace::new(&m).map_err(err(&name))?;
        for s in state_pool(&space, 11) {
            let mu = integral_represent(&m, &s).map_err(err(&name))?;
            ensure!(mu.inf.is_zero() && mu.total() == Rat::one(), "{name}: mass {}", mu.total());
            let mut w = vec![Rat::zero(); space.morphisms().len()];
            for (id, v) in &mu.weights {
                let i: usize = id.trim_start_matches('t').parse().map_err(err(&name))?;
                w[i] = v.clone();
            }
            ensure!(combine(&w, space.morphisms()) == s, "{name}: integral does not reproduce the state");
            n += 1;
        }
    }
    let t = SymbolicEmv::FinSubsets;
    let nt = SymbolicEmv::representing(t.clone()).map_err(err("representing"))?;
    let sample = nt.enumerate(4);
    let r = Rat::new;
    for s in [
        SymbolicState { base: vec![(1, r(1, 2))], tail: None, inf: r(1, 2) },
        SymbolicState { base: vec![(1, r(1, 3)), (4, r(1, 6))], tail: None, inf: r(1, 2) },
        SymbolicState::morphism(3),
        SymbolicState::infinity(),
    ] {
        let mu = integral_represent_symbolic(&nt, &s, 4).map_err(err("symbolic integral"))?;
        ensure!(mu.inf == s.inf, "s_inf weight {} for {s:?}", mu.inf);
        for x in &sample {
            let direct = s.eval(&nt, x).map_err(err("eval"))?;
            let mut via = mu.inf.clone() * SymbolicState::infinity().eval(&nt, x).map_err(err("eval"))?;
            for (id, w) in &mu.weights {
                let k: u64 = id.trim_start_matches("~s_").parse().map_err(err("id"))?;
                via += w * &SymbolicState::morphism(k).eval(&nt, x).map_err(err("eval"))?;
            }
            ensure!(direct == via, "integral misses {x}");
        }
        n += 1;
    }
    let geometric = SymbolicState {
        base: Vec::new(),
        tail: Some(Tail { n0: 1, c: r(1, 2), q: r(1, 2) }),
        inf: Rat::zero(),
    };
    let class = classify_symbolic(&t, &geometric, 8, 0).map_err(err("geometric"))?.class;
    ensure!(class == PreStateClass::PreStateNotStrong, "geometric tail classified {class:?}");
    let half = SymbolicState { base: vec![(1, r(1, 2))], tail: None, inf: r(1, 2) };
    let back = restrict_to_inner(&nt, &half).map_err(err("restriction"))?;
    ensure!(back.mass == r(1, 2) && !back.is_state, "restriction mass {} state {}", back.mass, back.is_state);
    Ok(format!("{n} integrals round-trip, geometric tail not strong, restricted mass 1/2"))
}

fn c12_radical() -> Outcome {
    for (name, m) in algebras() {
        let (rad, inf) = radical_and_infinitesimals(&m).map_err(err(&name))?;
        ensure!(rad == inf && rad.elements() == vec![0], "{name}: radical {:?}", rad.labels(&m));
    }
    let cl = SymbolicEmv::ChangLex;
    let r = radical_and_infinitesimals_symbolic(&cl, 20).map_err(err("ChangLex"))?;
    let expected: Vec<Element> = r.sample.iter().filter(|x| matches!(x, Element::Lex { b: 0, .. })).cloned().collect();
    ensure!(r.radical == r.infinitesimals, "ChangLex radical and infinitesimals differ");
    ensure!(r.radical == expected, "ChangLex radical is not the (0,m) part");
    ensure!(expected.len() == 21, "expected 21 elements (0,0..20), found {}", expected.len());
    Ok(format!("9 algebras give {{0}}, ChangLex gives {} elements of {}", expected.len(), r.sample.len()))
}

fn c13_golden() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let spec = dir.join("prod_c2_c1.json");
    let cases: [(&str, Vec<PathBuf>, Vec<&str>); 4] = [
        ("verify", vec![spec.clone()], vec![]),
        ("morphisms", vec![spec.clone()], vec![]),
        ("decompose", vec![spec.clone(), dir.join("half_half_state.json")], vec!["--state"]),
        (
            "extend",
            vec![spec.clone(), dir.join("idempotent_sub.json"), dir.join("idempotent_state.json")],
            vec!["--sub", "--state"],
        ),
    ];
    for (name, files, flags) in cases {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_emvkit"));
        cmd.arg(name).arg(&files[0]);
        for (flag, f) in flags.iter().zip(&files[1..]) {
            cmd.arg(flag).arg(f);
        }
        let expected = std::fs::read(dir.join(format!("{name}.out.json"))).map_err(err(name))?;
        for run in 0..2 {
            let out = cmd.output().map_err(err(name))?;
            ensure!(out.status.code() == Some(0), "{name}: exit {:?}", out.status.code());
            ensure!(out.stdout == expected, "{name}: run {run} differs from the golden file");
        }
    }
    Ok("verify, morphisms, decompose, extend byte-identical twice".into())
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("axiom soundness", c1_axioms),
        ("extremal states are state-morphisms", c2_extremal),
        ("finite Krein-Mil'man and simplex", c3_krein_milman),
        ("state identities", c4_identities),
        ("Horn-Tarski extension", c5_horn_tarski),
        ("GEA round trip and RDP", c6_gea),
        ("monoid reconstruction", c7_monoid),
        ("representing algebra", c8_representing),
        ("Jordan lattice", c9_jordan),
        ("strong join on finite subsets", c10_strong_join),
        ("discrete integral representation", c11_integral),
        ("radical equals infinitesimals", c12_radical),
        ("CLI golden files", c13_golden),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
