//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the lines are always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use subcat::cart_std::{from_std, parse_std, std_equal, std_type, to_std, StdTerm};
use subcat::coherence::{conservativity_check, decide_equal};
use subcat::graphs::graph_of;
use subcat::normalize::{
    aff_normal_form, compose_products, diagonal_factor, products_for_forks, rel_normal_form,
};
use subcat::oracle::{
    compare_with_decider, random_diversified_object, random_pairs, random_rule_instance,
    random_std_term, random_term, rule_kinds, rule_names, same_modulo_composition, Budget,
    INTERCHANGE,
};
use subcat::parse::{parse_obj, parse_term};
use subcat::typing::infer_type;
use subcat::{Kind, Letter, MorTerm, Obj};

/// Confirmation share the oracle must reach on decider-equal pairs.
const MIN_CONFIRMATION: f64 = 0.95;

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check {
        pass,
        detail: detail.into(),
    }
}

fn t(text: &str) -> MorTerm {
    parse_term(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn o(text: &str) -> Obj {
    parse_obj(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn s(text: &str) -> StdTerm {
    parse_std(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn functoriality() -> Check {
    let mut n = 0;
    for kind in Kind::ALL {
        for seed in 0..1000u64 {
            let size = 1 + (seed % 10) as usize;
            let f = random_term(kind, size, seed, None);
            let cod = infer_type(&f, kind).unwrap().cod;
            let g = random_term(
                kind,
                1 + (seed * 7 % 10) as usize,
                seed + 50_000,
                Some(&cod),
            );
            let (gf, gg) = (graph_of(&f, kind).unwrap(), graph_of(&g, kind).unwrap());
            let comp = graph_of(&MorTerm::comp(g.clone(), f.clone()), kind).unwrap();
            let tensor = graph_of(&MorTerm::tensor(f.clone(), g.clone()), kind).unwrap();
            if comp != gg.compose(&gf).unwrap() || tensor != gf.tensor(&gg) {
                return check(false, format!("{kind}: {g} after {f}"));
            }
            n += 1;
        }
    }
    check(true, format!("{n} composites and tensors"))
}

fn classification() -> Check {
    for kind in Kind::ALL {
        for seed in 0..1000u64 {
            let f = random_term(kind, 1 + (seed % 10) as usize, seed, None);
            let g = graph_of(&f, kind).unwrap();
            let ok = match kind {
                Kind::Mon => g.is_identity(),
                Kind::SyMon => g.is_injective() && g.is_surjective(),
                Kind::Rel => g.is_surjective(),
                Kind::Aff => g.is_injective(),
                Kind::Cart => true,
            };
            if !ok {
                return check(false, format!("{kind}: {f} has graph {:?}", g.one_based()));
            }
        }
    }
    check(true, "1000 terms per kind")
}

fn rule_invariance() -> Check {
    let kinds = rule_kinds();
    let names = rule_names(Kind::Cart);
    for name in &names {
        // Interchange instances are built from cartesian terms.
        let kind = if *name == INTERCHANGE {
            Kind::Cart
        } else {
            kinds[name]
        };
        for seed in 0..100 {
            let (l, r) = random_rule_instance(name, seed).expect("known rule");
            let (tl, tr) = (infer_type(&l, kind), infer_type(&r, kind));
            if tl.is_err() || tl != tr {
                return check(false, format!("{name}: types differ for {l} = {r}"));
            }
            if graph_of(&l, kind).unwrap() != graph_of(&r, kind).unwrap() {
                return check(false, format!("{name}: graphs differ for {l} = {r}"));
            }
        }
    }
    check(true, format!("{} schemas x 100 instances", names.len()))
}

fn decider_vs_oracle() -> Check {
    let mut pass = true;
    let mut parts = Vec::new();
    for kind in Kind::ALL {
        let pairs = random_pairs(kind, 6, 500, 1);
        let r = compare_with_decider(&pairs, kind, Budget::default()).unwrap();
        for c in &r.contradictions {
            println!("    contradiction at {kind}: {c}");
        }
        for (f, g) in &r.unconfirmed {
            println!("    budget exhausted at {kind}: {f} = {g}");
        }
        let rate = r.confirmation_rate();
        pass &= r.contradictions.is_empty() && rate >= MIN_CONFIRMATION;
        parts.push(format!(
            "{kind} {}/{} confirmed ({:.1}%), {} exhausted, {} contradictions",
            r.confirmed,
            r.decider_equal,
            100.0 * rate,
            r.budget_exhausted,
            r.contradictions.len()
        ));
    }
    check(
        pass,
        format!(
            "{}; need >= {:.0}%",
            parts.join("; "),
            100.0 * MIN_CONFIRMATION
        ),
    )
}

/// A normal form has the right shape, type and graph and is decided equal.
fn agrees(f: &MorTerm, nf: &MorTerm, shape: Result<(), String>, kind: Kind) -> Result<(), String> {
    shape?;
    if infer_type(f, kind) != infer_type(nf, kind) || graph_of(f, kind) != graph_of(nf, kind) {
        return Err(format!("normal form {nf} has another type or graph"));
    }
    if !decide_equal(f, nf, kind).unwrap().equal {
        return Err(format!("normal form {nf} is decided different"));
    }
    Ok(())
}

fn normal_forms() -> Check {
    for seed in 0..500u64 {
        let dom = random_diversified_object(1 + (seed % 3) as usize, seed);
        let f = random_term(Kind::Rel, 1 + (seed % 8) as usize, seed, Some(&dom));
        let nf = match rel_normal_form(&f) {
            Ok(nf) => nf,
            Err(e) => return check(false, format!("rel {f}: {e}")),
        };
        if let Err(e) = agrees(&f, &nf.to_term(), nf.check_shape(), Kind::Rel) {
            return check(false, format!("rel {f}: {e}"));
        }
        let f = random_term(Kind::Aff, 1 + (seed % 8) as usize, seed, None);
        let nf = match aff_normal_form(&f) {
            Ok(nf) => nf,
            Err(e) => return check(false, format!("aff {f}: {e}")),
        };
        if let Err(e) = agrees(&f, &nf.to_term(), nf.check_shape(), Kind::Aff) {
            return check(false, format!("aff {f}: {e}"));
        }
    }
    // Every composite of left-nested diagonals on one letter, up to six.
    let p = Letter::new("p").unwrap();
    let mut trees = 0;
    for len in 1..=5usize {
        let mut forks = vec![0usize; len];
        loop {
            let f = compose_products(&products_for_forks(&p, &forks)).unwrap();
            let fac = diagonal_factor(&f).unwrap();
            let ns: Vec<usize> = fac.rounds.iter().map(|r| r.n_f).collect();
            if ns.last() != Some(&0) || ns.windows(2).any(|w| w[1] >= w[0]) {
                return check(false, format!("forks {forks:?}: measures {ns:?}"));
            }
            trees += 1;
            // Next fork sequence, with fork i choosing among i + 1 leaves.
            let Some(i) = (0..len).rev().find(|&i| forks[i] < i) else {
                break;
            };
            forks[i] += 1;
            forks[i + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    check(
        true,
        format!("500 rel and 500 aff terms, {trees} diagonal trees"),
    )
}

fn running_example() -> Result<String, String> {
    let f = t("((id(p) * w(p)) * id((p*p)*p)) . (id(p*p) * (w(p) * id(p))) . (id(p*p) * w(p)) . (w(p) * id(p)) . w(p)");
    let fac = diagonal_factor(&f).map_err(|e| e.to_string())?;
    let displayed = t("b_i(p*(p*p),p*p,p) . (b_i(p*(p*p),p,p) * id(p)) . (((b_i(p,p,p) * id(p)) * id(p)) * id(p)) \
         . ((((w(p) * id(p)) * id(p)) * id(p)) * id(p)) . (((w(p) * id(p)) * id(p)) * id(p)) \
         . ((w(p) * id(p)) * id(p)) . (w(p) * id(p)) . w(p)");
    let all: Vec<_> = fac.b_part.iter().chain(&fac.w_part).cloned().collect();
    let factored = compose_products(&all).ok_or("empty factorization")?;
    let n_f = fac.rounds[0].n_f;
    if n_f != 3 {
        return Err(format!("diagonal example has n_f={n_f}"));
    }
    if !same_modulo_composition(&factored, &displayed) {
        return Err(format!("diagonal example factors as {factored}"));
    }
    Ok("diagonal example n_f=3 with the displayed factorization".into())
}

fn symmetric_example() -> Result<String, String> {
    let f = t(
        "((delta(p) . (id(p) * sigma(I))) * (delta(q) . sigma(q*I))) . c_m(p,I,I*I,q*I) \
         . (id(p*I) * c_m(I,q,I,I)) . (delta_i(p) * (sigma_i(q) * delta_i(I)))",
    );
    let ty = infer_type(&f, Kind::SyMon).map_err(|e| e.to_string())?;
    if ty.dom != o("p*(q*I)") || ty.cod != o("p*q") {
        return Err(format!("symmetric example has type {ty}"));
    }
    if !decide_equal(&f, &t("id(p) * delta(q)"), Kind::SyMon)
        .unwrap()
        .equal
    {
        return Err("symmetric example is not id(p) * delta(q)".into());
    }
    Ok("symmetric example equals id(p) * delta(q)".into())
}

fn cartesian_example() -> Result<String, String> {
    let left = t("(id(p) * c(p,q*p)) . b_i(p,p,q*p) . (id(p*p) * c(p,q)) . (w(p) * id(p*q))");
    let right = t("(id(p) * (((delta(q*p) . b(q,p,I)) * id(p)) . b(q,p*I,p))) . b_i(p,q,(p*I)*p) \
         . ((id(p) * sigma(q)) * ((id(p) * k(q)) * id(p))) . ((id(p) * (k(p) * id(q))) * c(p,p*q)) . w(p*(p*q))");
    let ty = infer_type(&left, Kind::Cart).map_err(|e| e.to_string())?;
    if ty.dom != o("p*(p*q)") || ty.cod != o("p*((q*p)*p)") {
        return Err(format!("cartesian example has type {ty}"));
    }
    let g = graph_of(&left, Kind::Cart).unwrap();
    if g.one_based() != [1, 3, 2, 1] {
        return Err(format!("cartesian example has graph {:?}", g.one_based()));
    }
    if !decide_equal(&left, &right, Kind::Cart)
        .map_err(|e| e.to_string())?
        .equal
    {
        return Err("cartesian example sides differ".into());
    }
    Ok("cartesian example equal with graph [1, 3, 2, 1]".into())
}

fn worked_examples() -> Check {
    let mut pass = true;
    let mut notes = Vec::new();
    for run in [running_example, symmetric_example, cartesian_example] {
        let start = Instant::now();
        let r = run();
        let took = start.elapsed();
        let ok = r.is_ok() && took < Duration::from_secs(1);
        pass &= ok;
        notes.push(format!(
            "{} in {:.3}s",
            r.unwrap_or_else(|e| e),
            took.as_secs_f64()
        ));
    }
    check(pass, notes.join("; "))
}

fn std_eq(l: &StdTerm, r: &StdTerm) -> Result<(), String> {
    if !std_equal(l, r).map_err(|e| e.to_string())? {
        return Err(format!("{l} = {r} fails in the standard calculus"));
    }
    let (fl, fr) = (from_std(l).unwrap(), from_std(r).unwrap());
    if !decide_equal(&fl, &fr, Kind::Cart)
        .map_err(|e| e.to_string())?
        .equal
    {
        return Err(format!("{fl} = {fr} fails in the structural calculus"));
    }
    Ok(())
}

fn cart_eq(l: &str, r: &str) -> Result<(), String> {
    let (fl, fr) = (t(l), t(r));
    if !decide_equal(&fl, &fr, Kind::Cart)
        .map_err(|e| e.to_string())?
        .equal
    {
        return Err(format!("{l} = {r} fails in the structural calculus"));
    }
    Ok(())
}

/// Instances of the terminal, projection and surjective pairing equations.
fn standard_equations() -> Result<usize, String> {
    let comp = StdTerm::comp;
    let mut n = 0;
    for seed in 0..50u64 {
        let c = random_diversified_object(1 + (seed % 3) as usize, seed);
        let f = random_std_term(1 + (seed % 5) as usize, seed, &c);
        let g = random_std_term(1 + (seed % 4) as usize, seed + 1000, &c);
        let (a, b) = (std_type(&f).unwrap().cod, std_type(&g).unwrap().cod);
        // Every arrow into the unit is the terminal one.
        std_eq(
            &comp(StdTerm::Terminal(a.clone()), f.clone()),
            &StdTerm::Terminal(c.clone()),
        )?;
        let fg = StdTerm::pair(f.clone(), g.clone());
        std_eq(&comp(StdTerm::Proj1(a.clone(), b.clone()), fg.clone()), &f)?;
        std_eq(&comp(StdTerm::Proj2(a.clone(), b.clone()), fg.clone()), &g)?;
        // Surjective pairing, on a pair and on an arbitrary arrow into a product.
        let h = match std_type(&f).unwrap().cod {
            Obj::Prod(_, _) => f.clone(),
            _ => fg.clone(),
        };
        let Obj::Prod(x, y) = std_type(&h).unwrap().cod else {
            unreachable!()
        };
        let split = StdTerm::pair(
            comp(StdTerm::Proj1((*x).clone(), (*y).clone()), h.clone()),
            comp(StdTerm::Proj2((*x).clone(), (*y).clone()), h.clone()),
        );
        std_eq(&split, &h)?;
        n += 4;
    }
    Ok(n)
}

/// The structural primitives agree with the images of their standard
/// definitions, and the standard primitives with theirs.
fn double_translations() -> Result<usize, String> {
    let mut n = 0;
    let triples = [
        ("p", "q", "r"),
        ("p*q", "I", "r"),
        ("I", "p", "p"),
        ("q*(p*I)", "r", "I"),
    ];
    for (a, b, c) in triples {
        let eqs = [
            (format!("sigma({a})"), format!("sigma({a}) . (k(I) * id({a}))")),
            (format!("sigma_i({a})"), format!("(k({a}) * id({a})) . w({a})")),
            (format!("delta({a})"), format!("delta({a}) . (id({a}) * k(I))")),
            (format!("delta_i({a})"), format!("(id({a}) * k({a})) . w({a})")),
            (
                format!("b({a},{b},{c})"),
                format!(
                    "((((delta({a}) . (id({a}) * k({b}*{c}))) * (delta({b}) . (id({b}) * k({c})) . sigma({b}*{c}) \
                     . (k({a}) * id({b}*{c})))) . w({a}*({b}*{c}))) * (sigma({c}) . (k({b}) * id({c})) . sigma({b}*{c}) \
                     . (k({a}) * id({b}*{c})))) . w({a}*({b}*{c}))"
                ),
            ),
            (
                format!("b_i({a},{b},{c})"),
                format!(
                    "((delta({a}) . (id({a}) * k({b})) . delta({a}*{b}) . (id({a}*{b}) * k({c}))) \
                     * (((sigma({b}) . (k({a}) * id({b})) . delta({a}*{b}) . (id({a}*{b}) * k({c}))) \
                     * (sigma({c}) . (k({a}*{b}) * id({c})))) . w(({a}*{b})*{c}))) . w(({a}*{b})*{c})"
                ),
            ),
            (
                format!("c({a},{b})"),
                format!("((sigma({b}) . (k({a}) * id({b}))) * (delta({a}) . (id({a}) * k({b})))) . w({a}*{b})"),
            ),
            (format!("w({a})"), format!("(id({a}) * id({a})) . w({a})")),
        ];
        for (l, r) in &eqs {
            cart_eq(l, r)?;
        }
        n += eqs.len();

        let pr = |x: &str, y: &str| format!("{x}*{y}");
        let std_eqs = [
            (
                format!("p1({a},{b})"),
                format!("(p1({a},I) . pair((id({a}) . p1({a},{b})), (bang({b}) . p2({a},{b}))))"),
            ),
            (
                format!("p2({a},{b})"),
                format!("(p2(I,{b}) . pair((bang({a}) . p1({a},{b})), (id({b}) . p2({a},{b}))))"),
            ),
            (
                format!("pair(p2({a},{b}), p1({a},{b}))"),
                format!(
                    "(pair((p2({a},{b}) . p1({ab},{ab})), (p1({a},{b}) . p2({ab},{ab}))) . pair(id({ab}), id({ab})))",
                    ab = pr(a, b)
                ),
            ),
        ];
        for (l, r) in &std_eqs {
            std_eq(&s(l), &s(r))?;
        }
        n += std_eqs.len();
    }
    // The tensor of arbitrary arrows, and pairing of arbitrary arrows.
    for seed in 0..20u64 {
        let f = random_term(Kind::Cart, 1 + (seed % 4) as usize, seed, None);
        let g = random_term(Kind::Cart, 1 + (seed % 3) as usize, seed + 500, None);
        let (a, b) = (
            infer_type(&f, Kind::Cart).unwrap().dom,
            infer_type(&g, Kind::Cart).unwrap().dom,
        );
        cart_eq(
            &format!("{f} * {g}"),
            &format!("(({f} . delta({a}) . (id({a}) * k({b}))) * ({g} . sigma({b}) . (k({a}) * id({b})))) . w({a}*{b})"),
        )?;
        let c = random_diversified_object(1 + (seed % 3) as usize, seed);
        let (f, g) = (
            random_std_term(3, seed, &c),
            random_std_term(2, seed + 7, &c),
        );
        let split = StdTerm::comp(
            StdTerm::pair(
                StdTerm::comp(f.clone(), StdTerm::Proj1(c.clone(), c.clone())),
                StdTerm::comp(g.clone(), StdTerm::Proj2(c.clone(), c.clone())),
            ),
            StdTerm::pair(StdTerm::Id(c.clone()), StdTerm::Id(c.clone())),
        );
        std_eq(&StdTerm::pair(f, g), &split)?;
        n += 2;
    }
    Ok(n)
}

fn round_trips() -> Result<usize, String> {
    for seed in 0..200u64 {
        let f = random_term(Kind::Cart, 1 + (seed % 8) as usize, seed, None);
        let back = from_std(&to_std(&f).unwrap()).unwrap();
        if !decide_equal(&f, &back, Kind::Cart).unwrap().equal {
            return Err(format!("{f} comes back as {back}"));
        }
        let dom = random_diversified_object(1 + (seed % 3) as usize, seed);
        let x = random_std_term(1 + (seed % 6) as usize, seed, &dom);
        let again = to_std(&from_std(&x).unwrap()).unwrap();
        if !std_equal(&x, &again).unwrap() {
            return Err(format!("{x} comes back as {again}"));
        }
    }
    Ok(400)
}

fn axiomatizations() -> Check {
    let run = || -> Result<String, String> {
        let a = standard_equations()?;
        let b = double_translations()?;
        let c = round_trips()?;
        Ok(format!(
            "{a} standard equations, {b} double translations, {c} round trips"
        ))
    };
    match run() {
        Ok(d) => check(true, d),
        Err(e) => check(false, e),
    }
}

fn conservativity() -> Check {
    let mut n = 0;
    for lower in Kind::ALL {
        let uppers: Vec<Kind> = Kind::ALL
            .into_iter()
            .filter(|u| lower.le(*u) && *u != lower)
            .collect();
        for (f, g) in random_pairs(lower, 6, 500, 11) {
            for &upper in &uppers {
                if !conservativity_check(&f, &g, lower, upper).unwrap() {
                    return check(false, format!("{f} = {g} at {lower} versus {upper}"));
                }
                n += 1;
            }
        }
    }
    check(true, format!("{n} pair and kind combinations agree"))
}

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("graph functoriality", functoriality, 10),
        ("kind classification of graphs", classification, 10),
        ("rule instances keep their graph", rule_invariance, 10),
        ("decider versus bounded rewriting", decider_vs_oracle, 300),
        ("normal forms", normal_forms, 120),
        ("worked examples", worked_examples, 3),
        ("standard cartesian axiomatization", axiomatizations, 60),
        ("conservativity across kinds", conservativity, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let c = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(limit);
        let pass = c.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "[{}] {}. {name}: {} ({:.2}s, limit {limit}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            c.detail,
            took.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
