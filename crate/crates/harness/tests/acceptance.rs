//! End-to-end acceptance run: one PASS/FAIL line per criterion, each with
//! its runtime budget. Run with `--nocapture` to see the lines.

use std::collections::{BTreeMap, HashSet};
use std::net::TcpListener;
use std::process::Command;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use plgroup::aag::{commutator_by_expansion, derive_key, random_gword, Commitment, InstanceParams, Role};
use plgroup::autf::{hat_generators, AutFMap};
use plgroup::extension::{
    f_relators, free_reduce_gword, invert_gword, ExtensionGroup, GElement, GGen, GLetter, GWord, WpPhase,
};
use plgroup::groupf::{
    expand_generator, growth_series, invert_word, is_identity_f, word_to_element, FLetter, FWord, NormalForm,
    TreePair, DEFAULT_BUDGET,
};
use plgroup::groupt::{free_generators, t_is_identity, t_word_to_element, TElement, TLetter};
use plgroup::plmap::{phi_to_line, IntervalMap, LineMap};
use plgroup::rng::SplitMix64;
use plgroup::Dyadic;
use plgroup_harness::exchange::{run_exchange, run_in_process, ExchangeConfig, Seeds, Session};
use plgroup_harness::frame::{Frame, FrameType};
use plgroup_harness::transcript::Transcript;
use plgroup_harness::transport::{Tap, TcpTransport};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dy(s: &str) -> Dyadic {
    s.parse().unwrap()
}

fn desk_profile() -> ExchangeConfig {
    ExchangeConfig { instance: InstanceParams { word_len: (1, 3), ..InstanceParams::default() }, private_len: (8, 16) }
}

fn tw(s: &str) -> Vec<TLetter> {
    plgroup::groupt::parse_tword(s).unwrap()
}

/// Uniform length in `0..=max`, uniform letters.
fn random_fword(rng: &mut SplitMix64, max: usize) -> FWord {
    let len = rng.below(max as u64 + 1);
    (0..len).map(|_| FLetter::all()[rng.below(4) as usize]).collect()
}

// Explicit breakpoints of the generators on [0, 1].
fn x0_map() -> IntervalMap {
    IntervalMap::from_points(vec![(dy("0"), dy("0")), (dy("1/2"), dy("1/4")), (dy("3/4"), dy("1/2")), (dy("1"), dy("1"))])
        .unwrap()
}

fn x1_map() -> IntervalMap {
    IntervalMap::from_points(vec![
        (dy("0"), dy("0")),
        (dy("1/2"), dy("1/2")),
        (dy("3/4"), dy("5/8")),
        (dy("7/8"), dy("3/4")),
        (dy("1"), dy("1")),
    ])
    .unwrap()
}

struct MapOracle {
    gens: [IntervalMap; 4],
}

impl MapOracle {
    fn new() -> Self {
        let (a, b) = (x0_map(), x1_map());
        let (ai, bi) = (a.invert(), b.invert());
        MapOracle { gens: [a, b, ai, bi] }
    }

    fn eval(&self, w: &[FLetter]) -> IntervalMap {
        w.iter().fold(IntervalMap::identity(), |acc, l| {
            acc.compose(&self.gens[l.gen as usize + if l.inv { 2 } else { 0 }])
        })
    }
}

/// Positive and negative parts as `(index, exponent)`, indices increasing.
type Parts = (Vec<(u32, u32)>, Vec<(u32, u32)>);

/// Normal form by rewriting in the infinite presentation, without tree
/// pairs: sort into `positive · negative`, then remove bad pairs.
fn rewrite_normal_form(w: &[FLetter]) -> Parts {
    // (index, negative)
    let mut s: Vec<(u32, bool)> = w.iter().map(|l| (l.gen as u32, l.inv)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i + 1 < s.len() {
            let ((a, na), (b, nb)) = (s[i], s[i + 1]);
            if a == b && na != nb {
                s.drain(i..i + 2);
                changed = true;
                i = i.saturating_sub(1);
                continue;
            }
            let r = match (na, nb) {
                (true, false) if a < b => Some([(b + 1, false), (a, true)]),
                (true, false) => Some([(b, false), (a + 1, true)]),
                (false, false) if b < a => Some([(b, false), (a + 1, false)]),
                (true, true) if a < b => Some([(b + 1, true), (a, true)]),
                _ => None,
            };
            if let Some(r) = r {
                s[i] = r[0];
                s[i + 1] = r[1];
                changed = true;
            }
            i += 1;
        }
    }
    let mut pos: BTreeMap<u32, u32> = BTreeMap::new();
    let mut neg: BTreeMap<u32, u32> = BTreeMap::new();
    for (i, n) in s {
        *if n { neg.entry(i) } else { pos.entry(i) }.or_default() += 1;
    }
    loop {
        let has = |m: &BTreeMap<u32, u32>, i: u32| m.contains_key(&i);
        let bad = pos.keys().copied().find(|&i| has(&neg, i) && !has(&pos, i + 1) && !has(&neg, i + 1));
        let Some(i) = bad else { break };
        for m in [&mut pos, &mut neg] {
            let e = m.get_mut(&i).unwrap();
            *e -= 1;
            if *e == 0 {
                m.remove(&i);
            }
            let shifted: BTreeMap<u32, u32> = m.iter().map(|(&k, &e)| (if k > i { k - 1 } else { k }, e)).collect();
            *m = shifted;
        }
    }
    (pos.into_iter().collect(), neg.into_iter().collect())
}

fn c1_t_relations() -> Outcome {
    ensure(t_is_identity(&tw("C^3")), || "C^3 is not trivial".into())?;
    ensure(t_is_identity(&tw("A C A C")), || "(AC)^2 is not trivial".into())?;
    ensure(!t_is_identity(&tw("C")), || "C is trivial".into())?;
    ensure(!t_is_identity(&tw("A C")), || "AC is trivial".into())?;
    Ok("C^3 = (AC)^2 = 1, C != 1, AC != 1".into())
}

fn c2_phi() -> Outcome {
    let alpha = phi_to_line(&TreePair::x(0).to_plmap());
    let beta = phi_to_line(&TreePair::x(1).to_plmap());
    ensure(alpha == LineMap::translation(-1), || format!("phi(x0) = {alpha:?}"))?;
    let expected = LineMap::new(0, 2, vec![(dy("-1"), dy("-1")), (dy("0"), dy("0")), (dy("2"), dy("1")), (dy("3"), dy("2"))])
        .unwrap();
    ensure(beta == expected, || format!("phi(x1) = {beta:?}"))?;
    for (x, y) in [("-7/2", "-7/2"), ("1", "1/2"), ("3/2", "3/4"), ("5", "4")] {
        ensure(beta.eval(&dy(x)) == dy(y), || format!("beta({x}) != {y}"))?;
    }
    Ok("x0 -> t-1, x1 -> three-piece beta".into())
}

fn c3_f_presentation(group: &ExtensionGroup) -> Outcome {
    for r in f_relators() {
        ensure(group.is_identity_g(&r).map_err(|e| e.to_string())?, || "F relator not trivial".into())?;
        let fw: FWord = r
            .iter()
            .map(|l| match l.gen {
                GGen::Alpha => FLetter::x0(!l.inv),
                _ => FLetter::x1(!l.inv),
            })
            .collect();
        ensure(is_identity_f(&fw), || "F relator not trivial as a tree pair".into())?;
    }
    let mut count = 0;
    for n in 1..=6u32 {
        for k in 0..n {
            let xk = expand_generator(k);
            let mut w = invert_word(&xk);
            w.extend(expand_generator(n));
            w.extend(xk);
            w.extend(invert_word(&expand_generator(n + 1)));
            ensure(is_identity_f(&w), || format!("x{k}^-1 x{n} x{k} != x{}", n + 1))?;
            let (pk, pn) = (TreePair::x(k), TreePair::x(n));
            ensure(pk.invert().multiply(&pn).multiply(&pk) == TreePair::x(n + 1), || format!("tree pairs k={k} n={n}"))?;
            count += 1;
        }
    }
    Ok(format!("2 relators, {count} infinite-presentation relations"))
}

fn c4_representations() -> Outcome {
    let oracle = MapOracle::new();
    ensure(oracle.gens[0] == TreePair::x(0).to_plmap() && oracle.gens[1] == TreePair::x(1).to_plmap(), || {
        "generator maps disagree with tree pairs".into()
    })?;
    let rels: Vec<FWord> = f_relators()
        .iter()
        .map(|r| {
            r.iter()
                .map(|l| if l.gen == GGen::Alpha { FLetter::x0(!l.inv) } else { FLetter::x1(!l.inv) })
                .collect()
        })
        .collect();
    let mut rng = SplitMix64::new(0x5eed_0004);
    let (mut equal, mut unequal) = (0, 0);
    for i in 0..10_000 {
        let (u, v) = match i % 3 {
            0 => {
                let u = random_fword(&mut rng, 14);
                let mut r: FWord = if rng.coin() { rels[0].clone() } else { invert_word(&rels[0]) };
                let shift = rng.below(r.len() as u64) as usize;
                r.rotate_left(shift);
                let at = rng.below(u.len() as u64 + 1) as usize;
                let mut v = u.clone();
                v.splice(at..at, r);
                (u, v)
            }
            1 => {
                let u = random_fword(&mut rng, 24);
                let v = random_fword(&mut rng, 24);
                (u, v)
            }
            _ => {
                let mut u = random_fword(&mut rng, 24);
                if u.is_empty() {
                    u.push(FLetter::x0(true));
                }
                let mut v = u.clone();
                let at = rng.below(v.len() as u64) as usize;
                v[at] = FLetter::all()[rng.below(4) as usize];
                (u, v)
            }
        };
        ensure(u.len() <= 24 && v.len() <= 24, || "word too long".into())?;
        let (pu, pv) = (word_to_element(&u), word_to_element(&v));
        let (nu, nv) = (rewrite_normal_form(&u), rewrite_normal_form(&v));
        let (mu, mv) = (oracle.eval(&u), oracle.eval(&v));
        for (w, p, n, m) in [(&u, &pu, &nu, &mu), (&v, &pv, &nv, &mv)] {
            let lib = NormalForm::from_treepair(p);
            ensure(lib.positive() == n.0.as_slice() && lib.negative() == n.1.as_slice(), || {
                format!("normal forms differ on {}", plgroup::groupf::format_fword(w))
            })?;
            ensure(lib.to_treepair() == *p, || "normal form does not round-trip".into())?;
            ensure(p.to_plmap() == *m, || format!("maps differ on {}", plgroup::groupf::format_fword(w)))?;
        }
        let eq = [pu == pv, nu == nv, mu == mv];
        ensure(eq[0] == eq[1] && eq[1] == eq[2], || format!("equality disagrees: {eq:?}"))?;
        ensure(i % 3 != 0 || eq[0], || "relator insertion changed the element".into())?;
        if eq[0] {
            equal += 1;
        } else {
            unequal += 1;
        }
    }
    Ok(format!("10000 pairs, {equal} equal and {unequal} unequal, all three routes agree"))
}

fn compositions(total: u32, parts: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    for e in 1..=total.saturating_sub(parts - 1) {
        prefix.push(e);
        compositions(total - e, parts - 1, prefix, out);
        prefix.pop();
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c5_growth(group: &ExtensionGroup) -> Outcome {
    const MAX_LEN: u32 = 12;
    let mut seen: HashSet<TreePair> = HashSet::new();
    let mut words = 0u64;
    let mut expected = 0u64;
    for n in 1..=MAX_LEN {
        for s in n..=MAX_LEN + 1 - n {
            expected += binomial(s as u64 - 1, n as u64 - 1);
            let mut comps = Vec::new();
            compositions(s, n, &mut Vec::new(), &mut comps);
            for eps in comps {
                let mut w: FWord = Vec::new();
                for (i, &e) in eps.iter().enumerate() {
                    if i > 0 {
                        w.push(FLetter::x0(false));
                    }
                    w.extend(std::iter::repeat_n(FLetter::x1(true), e as usize));
                }
                let p = word_to_element(&w);
                let nf = NormalForm::from_treepair(&p);
                let want: Vec<(u32, u32)> = eps.iter().enumerate().map(|(i, &e)| (i as u32 + 1, e)).collect();
                let want_neg = if n > 1 { vec![(0, n - 1)] } else { vec![] };
                ensure(nf.positive() == want.as_slice() && nf.negative() == want_neg.as_slice(), || {
                    format!("unexpected normal form for {eps:?}")
                })?;
                seen.insert(p);
                words += 1;
            }
        }
    }
    ensure(words == expected && seen.len() as u64 == expected, || {
        format!("{words} words, {} distinct, {expected} expected", seen.len())
    })?;
    let gens = [vec![FLetter::x0(true)], vec![FLetter::x1(true)]];
    let f = growth_series(10, &gens, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let rate = (f[10] as f64).powf(0.1);
    ensure(rate >= 1.2, || format!("gamma_F(10)^(1/10) = {rate:.3}"))?;
    let g = group.growth_series(6, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    for n in 0..=6 {
        ensure(g[n] >= f[n], || format!("gamma_G({n}) = {} < gamma_F({n}) = {}", g[n], f[n]))?;
    }
    Ok(format!(
        "{} distinct family elements; gamma_F(10) = {}, rate {rate:.3}; gamma_G(6) = {} >= gamma_F(6) = {}",
        seen.len(),
        f[10],
        g[6],
        f[6]
    ))
}

fn random_t(rng: &mut SplitMix64, max: usize) -> TElement {
    let len = rng.below(max as u64 + 1);
    let w: Vec<TLetter> = (0..len).map(|_| TLetter { gen: rng.below(3) as u8, inv: rng.coin() }).collect();
    t_word_to_element(&w)
}

fn random_autf(rng: &mut SplitMix64, hats: &[AutFMap], inv: &[AutFMap]) -> AutFMap {
    let mut m = AutFMap::embed_f(&word_to_element(&random_fword(rng, 7)));
    for _ in 0..rng.below(5) {
        let i = rng.below(4) as usize;
        m = m.compose(if rng.coin() { &hats[i] } else { &inv[i] });
    }
    m
}

fn c6_exact_sequence() -> Outcome {
    let mut rng = SplitMix64::new(0x5eed_0006);
    let one = TElement::identity();
    for _ in 0..1000 {
        let f = word_to_element(&random_fword(&mut rng, 20));
        let m = AutFMap::embed_f(&f);
        ensure(m.beta_project() == (one.clone(), one.clone()), || "embed_f projects nontrivially".into())?;
        ensure(m.to_f().as_ref() == Some(&f), || "embed_f does not round-trip".into())?;
    }
    for _ in 0..200 {
        let (tm, tp) = (random_t(&mut rng, 12), random_t(&mut rng, 12));
        ensure(AutFMap::lift(&tm, &tp).beta_project() == (tm, tp), || "lift does not project back".into())?;
    }
    let hats = hat_generators();
    let inv: Vec<AutFMap> = hats.iter().map(|h| h.invert()).collect();
    for _ in 0..200 {
        let (g, h) = (random_autf(&mut rng, &hats, &inv), random_autf(&mut rng, &hats, &inv));
        let ((gm, gp), (hm, hp)) = (g.beta_project(), h.beta_project());
        ensure(g.compose(&h).beta_project() == (gm.multiply(&hm), gp.multiply(&hp)), || {
            "beta is not multiplicative".into()
        })?;
        ensure(g.invert().beta_project() == (gm.invert(), gp.invert()), || "beta does not respect inverses".into())?;
    }
    Ok("1000 embeddings, 200 lifts, 200 products".into())
}

fn c7_free_subgroup() -> Outcome {
    let (u, v) = free_generators();
    let gens = [u.clone(), v.clone(), u.invert(), v.invert()];
    let mut total = 0u64;
    let mut exact = 0u64;
    // Depth-first over reduced words; letter i is inverse to letter (i + 2) % 4.
    let mut stack: Vec<(TElement, usize, usize)> = (0..4).map(|i| (gens[i].clone(), i, 1)).collect();
    while let Some((g, last, len)) = stack.pop() {
        ensure(!g.is_identity(), || format!("a reduced word of length {len} is trivial"))?;
        total += 1;
        if len == 8 {
            exact += 1;
            continue;
        }
        for (i, s) in gens.iter().enumerate() {
            if i != (last + 2) % 4 {
                stack.push((g.multiply(s), i, len + 1));
            }
        }
    }
    ensure(exact == 8748, || format!("{exact} words of length 8"))?;
    ensure(total == 13120, || format!("{total} words of length 1..=8"))?;
    Ok(format!("{total} reduced words of length 1..=8 ({exact} of length 8) nontrivial"))
}

/// Length 1 or up to `max`.
fn random_stable(rng: &mut SplitMix64, n: u32, max: usize) -> Vec<i32> {
    let len = 1 + rng.below(max as u64);
    (0..len)
        .map(|_| {
            let j = rng.below(n as u64) as i32 + 1;
            if rng.coin() {
                j
            } else {
                -j
            }
        })
        .collect()
}

fn c8_extension(group: &ExtensionGroup) -> Outcome {
    let rels = group.presentation().relators();
    for r in &rels {
        ensure(group.is_identity_g(r).map_err(|e| e.to_string())?, || "relator not trivial".into())?;
        ensure(group.word_to_canonical(r).map_err(|e| e.to_string())?.is_identity(), || {
            "relator has nontrivial canonical form".into()
        })?;
    }
    let n = group.stable_count();
    let mut rng = SplitMix64::new(0x5eed_0008);
    let theta = |w: &[i32], f: &TreePair| group.theta(w, f).map_err(|e| e.to_string());
    for _ in 0..60 {
        let f = word_to_element(&random_fword(&mut rng, 10));
        let g = word_to_element(&random_fword(&mut rng, 10));
        let w1 = random_stable(&mut rng, n, 2);
        let w2 = random_stable(&mut rng, n, 2);
        ensure(theta(&w1, &f.multiply(&g))? == theta(&w1, &f)?.multiply(&theta(&w1, &g)?), || {
            "theta is not a homomorphism".into()
        })?;
        let w12: Vec<i32> = w1.iter().chain(&w2).copied().collect();
        ensure(theta(&w12, &f)? == theta(&w1, &theta(&w2, &f)?)?, || "theta is not an action".into())?;
        let w1i: Vec<i32> = w1.iter().rev().map(|s| -s).collect();
        ensure(theta(&w1, &theta(&w1i, &f)?)? == f, || "theta_w has no inverse".into())?;
        ensure(theta(&[], &f)? == f, || "theta of the empty word moves f".into())?;
    }
    Ok(format!("{} relators trivial two ways; 60 random action checks", rels.len()))
}

fn letter_product(group: &ExtensionGroup, w: &[GLetter]) -> Result<GElement, String> {
    let mut acc = GElement::identity();
    for &l in w {
        let g = group.word_to_canonical(&[l]).map_err(|e| e.to_string())?;
        acc = group.multiply(&acc, &g).map_err(|e| e.to_string())?;
    }
    Ok(acc)
}

fn stable_projection(w: &[GLetter]) -> Vec<i32> {
    let mut p: Vec<i32> = Vec::new();
    for l in w {
        if let Some(s) = l.stable() {
            if p.last() == Some(&-s) {
                p.pop();
            } else {
                p.push(s);
            }
        }
    }
    p
}

fn random_gword_upto(group: &ExtensionGroup, rng: &mut SplitMix64, max: usize) -> GWord {
    let len = rng.below(max as u64 + 1) as usize;
    random_gword(group, rng, len)
}

fn conjugated_relator(group: &ExtensionGroup, rels: &[GWord], rng: &mut SplitMix64) -> GWord {
    let r = &rels[rng.below(rels.len() as u64) as usize];
    let r = if rng.coin() { r.clone() } else { invert_gword(r) };
    let c = random_gword_upto(group, rng, 4);
    let mut w = c.clone();
    w.extend(r);
    w.extend(invert_gword(&c));
    w
}

fn c9_word_problem(group: &ExtensionGroup) -> Outcome {
    let mut rng = SplitMix64::new(0x5eed_0009);
    let rels = group.presentation().relators();
    let n = group.stable_count();
    let (mut trivial, mut early) = (0, 0);
    for i in 0..1000 {
        let w: GWord = match i % 4 {
            0 | 1 => random_gword_upto(group, &mut rng, 30),
            2 => loop {
                // u and u' differ by a relator, so u u'^-1 is trivial.
                let u = random_gword_upto(group, &mut rng, 5);
                let r = conjugated_relator(group, &rels, &mut rng);
                let at = rng.below(u.len() as u64 + 1) as usize;
                let mut u2 = u.clone();
                u2.splice(at..at, r);
                let mut w = u;
                w.extend(invert_gword(&u2));
                let w = free_reduce_gword(w);
                if w.len() <= 30 {
                    break w;
                }
            },
            _ => {
                // Trivial stable projection, usually nontrivial in F.
                let mut w = GWord::new();
                while w.len() < 24 {
                    let j = rng.below(n as u64) as u32 + 1;
                    let s = rng.coin();
                    w.push(GLetter::t(j, s));
                    for _ in 0..rng.below(4) {
                        w.push(if rng.coin() { GLetter::alpha(rng.coin()) } else { GLetter::beta(rng.coin()) });
                    }
                    w.push(GLetter::t(j, !s));
                }
                w
            }
        };
        ensure(w.len() <= 30, || "word too long".into())?;
        let (answer, phase) = group.is_identity_g_traced(&w).map_err(|e| e.to_string())?;
        let canonical = group.word_to_canonical(&w).map_err(|e| e.to_string())?.is_identity();
        let product = letter_product(group, &w)?.is_identity();
        ensure(answer == canonical && canonical == product, || {
            format!("decisions differ: {answer} {canonical} {product}")
        })?;
        let projected = !stable_projection(&w).is_empty();
        ensure((phase == WpPhase::StableProjection) == projected, || "early exit mismatch".into())?;
        ensure(i % 4 != 2 || answer, || "a product with a relator is not trivial".into())?;
        trivial += answer as u32;
        early += projected as u32;
    }
    for _ in 0..100 {
        let mut w = GWord::new();
        for _ in 0..1 + rng.below(3) {
            w.extend(conjugated_relator(group, &rels, &mut rng));
        }
        ensure(group.is_identity_g(&w).map_err(|e| e.to_string())?, || "conjugated relators not trivial".into())?;
    }
    Ok(format!("1000 words ({trivial} trivial, {early} by early exit), 100 relator products"))
}

fn c10_exchange(group: &ExtensionGroup) -> Outcome {
    let cfg = desk_profile();
    let mut rng = SplitMix64::new(0x5eed_0010);
    let (mut detected, mut redraws) = (0, 0);
    for i in 0..100u64 {
        let out = run_in_process(group, &Seeds::from_master(10_000 + i), &cfg, None);
        let a = out.a.map_err(|e| format!("run {i}: A failed: {e}"))?;
        let b = out.b.map_err(|e| format!("run {i}: B failed: {e}"))?;
        ensure(a.key.element == b.key.element && a.key.digest == b.key.digest, || format!("run {i}: keys differ"))?;
        let oracle = commutator_by_expansion(group, &a.instance, &a.private, &b.private).map_err(|e| e.to_string())?;
        ensure(oracle == a.key.element, || format!("run {i}: literal commutator differs"))?;
        // A receives a commitment with one byte changed; KEYCONF compares
        // A's key digest with B's.
        let bytes = b.sent.to_bytes();
        let corrupt = loop {
            let mut c = bytes.clone();
            let at = rng.below(c.len() as u64) as usize;
            c[at] ^= 1 + rng.below(255) as u8;
            match Commitment::from_bytes(Role::B, &c, group.stable_count()) {
                Ok(cm) if cm.entries.len() == a.instance.s_tuple.len() && cm != b.sent => break cm,
                _ => redraws += 1,
            }
        };
        match derive_key(group, &a.private, a.instance.tuple(Role::A), &corrupt) {
            // Undetectable when A's private word skips the corrupted entry.
            Ok(k) if k.digest == b.key.digest => {}
            _ => detected += 1,
        }
    }
    ensure(detected >= 99, || format!("only {detected}/100 corruptions detected"))?;
    for i in 0..3u64 {
        let mut hit = false;
        let tamper = Box::new(move |f: &mut Frame| {
            if f.kind == FrameType::CommitB && !hit {
                let at = f.payload.len() / 2;
                f.payload[at] ^= 0x01;
                hit = true;
            }
        });
        let out = run_in_process(group, &Seeds::from_master(20_000 + i), &cfg, Some(tamper));
        ensure(out.a.is_err() && out.b.is_err(), || format!("tampered run {i} completed"))?;
    }
    Ok(format!(
        "100 runs agree with the oracle; {detected}/100 corruptions detected ({redraws} undecodable redrawn); 3 tampered runs aborted"
    ))
}

fn run_demo(seed: u64) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_plgroup"))
        .args(["demo", "--seed", &seed.to_string(), "--private-len", "8..16"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("demo exited with {}", out.status))?;
    Ok(out.stdout)
}

fn tcp_pair(group: &ExtensionGroup, seeds: &Seeds, cfg: &ExchangeConfig) -> Result<(Session, Session, Transcript), String> {
    let listener = TcpListener::bind("127.0.0.1:0").map_err(|e| e.to_string())?;
    let addr = listener.local_addr().map_err(|e| e.to_string())?;
    let log = Arc::new(Mutex::new(Transcript::new()));
    let (gb, sb, cb, lb) = (group.clone(), *seeds, *cfg, log.clone());
    let hb = thread::spawn(move || -> Result<Session, String> {
        let t = TcpTransport::accept(&listener).map_err(|e| e.to_string())?;
        let mut t = Tap::new(t, Role::B, lb);
        run_exchange(&mut t, &gb, Role::B, &sb, &cb).map_err(|e| e.to_string())
    });
    let t = TcpTransport::connect(addr).map_err(|e| e.to_string())?;
    let mut t = Tap::new(t, Role::A, log.clone());
    let a = run_exchange(&mut t, group, Role::A, seeds, cfg).map_err(|e| e.to_string())?;
    drop(t);
    let b = hb.join().map_err(|_| "B panicked".to_string())??;
    let transcript = Arc::try_unwrap(log).map_err(|_| "log still shared")?.into_inner().unwrap();
    Ok((a, b, transcript))
}

fn c11_wire(group: &ExtensionGroup) -> Outcome {
    const SEED: u64 = 1;
    let first = run_demo(SEED)?;
    let second = run_demo(SEED)?;
    ensure(first == second, || "demo output differs between runs".into())?;
    let text = String::from_utf8_lossy(&first);
    ensure(text.contains("keys agree"), || "demo keys do not agree".into())?;

    let cfg = desk_profile();
    let seeds = Seeds::from_master(SEED);
    let local = run_in_process(group, &seeds, &cfg, None);
    let (la, lb) = (local.a.map_err(|e| e.to_string())?, local.b.map_err(|e| e.to_string())?);
    let (ta, tb, tt) = tcp_pair(group, &seeds, &cfg)?;
    ensure(ta.key == la.key && tb.key == lb.key && ta.key == tb.key, || "TCP and in-process keys differ".into())?;
    ensure(ta.sent == la.sent && tb.sent == lb.sent, || "TCP and in-process commitments differ".into())?;
    ensure(tt.summary() == local.transcript.summary(), || "TCP and in-process transcripts differ".into())?;

    let mut rng = SplitMix64::new(0x5eed_0011);
    let kinds = [
        FrameType::Hello,
        FrameType::Instance,
        FrameType::CommitA,
        FrameType::CommitB,
        FrameType::KeyConf,
        FrameType::Error,
    ];
    for _ in 0..500 {
        let payload: Vec<u8> = (0..rng.below(300)).map(|_| rng.below(256) as u8).collect();
        let f = Frame::new(kinds[rng.below(6) as usize], payload);
        let bytes = f.encode().map_err(|e| e.to_string())?;
        ensure(Frame::decode(&bytes).map_err(|e| e.to_string())? == f, || "decode(encode(f)) != f".into())?;
        let mut buf = Vec::new();
        f.write_to(&mut buf).map_err(|e| e.to_string())?;
        ensure(buf == bytes, || "stream and buffer encodings differ".into())?;
        ensure(Frame::read_from(&mut buf.as_slice()).map_err(|e| e.to_string())? == f, || "stream read differs".into())?;
    }
    Ok(format!("demo --seed {SEED} identical twice ({} bytes); TCP = in-process; 500 frames round-trip", first.len()))
}

#[test]
fn acceptance() {
    let group = ExtensionGroup::sample();
    type Criterion<'a> = (u32, &'a str, Duration, Box<dyn Fn() -> Outcome + 'a>);
    let g = &group;
    let criteria: Vec<Criterion> = vec![
        (1, "T relations", Duration::from_secs(1), Box::new(c1_t_relations)),
        (2, "phi conjugation of x0, x1", Duration::from_secs(1), Box::new(c2_phi)),
        (3, "F presentation", Duration::from_secs(5), Box::new(move || c3_f_presentation(g))),
        (4, "representation equivalence", Duration::from_secs(60), Box::new(c4_representations)),
        (5, "growth", Duration::from_secs(300), Box::new(move || c5_growth(g))),
        (6, "short exact sequence", Duration::from_secs(120), Box::new(c6_exact_sequence)),
        (7, "free subgroup witness", Duration::from_secs(60), Box::new(c7_free_subgroup)),
        (8, "extension consistency", Duration::from_secs(120), Box::new(move || c8_extension(g))),
        (9, "word problem solver", Duration::from_secs(120), Box::new(move || c9_word_problem(g))),
        (10, "key exchange correctness", Duration::from_secs(300), Box::new(move || c10_exchange(g))),
        (11, "wire determinism", Duration::from_secs(30), Box::new(move || c11_wire(g))),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in &criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = result.and_then(|detail| {
            if took <= *limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {took:.1?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(detail) => println!("PASS {id:>2} {name} [{took:.2?}] {detail}"),
            Err(e) => {
                println!("FAIL {id:>2} {name} [{took:.2?}] {e}");
                failed.push(*id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
