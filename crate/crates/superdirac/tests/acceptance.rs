//! Acceptance criteria 1–10, one PASS/FAIL line each, exact rational arithmetic.
//! Exits nonzero when the set of failing criteria differs from the known set
//! recorded in the decisions ledger.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use num_traits::Zero;
use superdirac::analysis::{
    character_formula_check, dirac_kernel_check, even_decomposition_verify, index_check, injection_check,
    kostant_cohomology, kostant_module_height, verma_filtration_check, Formula,
};
use superdirac::dirac::{
    anti_selfadjoint_certificate, dirac_cohomology, dirac_index, dirac_inequality_audit, dirac_square_audit,
    DiracComplex,
};
use superdirac::exactla::{q, Q};
use superdirac::modules::{certify_unitarity, simple_truncation, verma_truncation, TruncatedModule};
use superdirac::oscillator::{
    alpha_embed, bargmann_fock, measure_constant_c, monomials_of_degree, oscillator_character, weyl_apply, Poly,
    WeylElement,
};
use superdirac::uea::{bracket_units, Uea, UEAElement, Unit};
use superdirac::weights::{RootDatum, Weight};

/// Criteria whose literal statement does not hold; see /root/notes/decisions.md.
const KNOWN_FAILURES: [u8; 3] = [4, 7, 9];

type Outcome = (bool, String);

fn uea(m: usize, n: usize, p: usize, q: usize) -> Arc<Uea> {
    Arc::new(Uea::new(&RootDatum::new(m, n, p, q).unwrap()))
}

fn w(d: &RootDatum, s: &str) -> Weight {
    d.parse_weight(s).unwrap()
}

fn max_odd_height(d: &RootDatum) -> usize {
    d.odd.iter().map(|o| d.height_usize(&o.beta).unwrap()).max().unwrap()
}

/// First typical weight certified at height 4 among (a,0|c), a ∈ 1..−3, c ∈ −1..2.
fn scan_certified_typical(u: &Arc<Uea>) -> Weight {
    for a in [1, 0, -1, -2, -3] {
        for c in [-1, 0, 1, 2] {
            let l = Weight::from_ints(&[a, 0], &[c]);
            if u.datum.atypicality_set(&l).is_empty() && certify_unitarity(u.clone(), &l, 4).unwrap().certified() {
                return l;
            }
        }
    }
    panic!("no certified typical weight in the scan range");
}

fn criterion_1(u: &Arc<Uea>, lambda: &Weight) -> Outcome {
    let first = w(&u.datum, "1,0|0");
    let first_certified = certify_unitarity(u.clone(), &first, 4).unwrap().certified();
    let m = simple_truncation(u.clone(), lambda, 4).unwrap();
    let cx = DiracComplex::new(&m, 4).unwrap();
    let rep = dirac_cohomology(&cx);
    let (v, minus_zero) = dirac_kernel_check(u.clone(), &rep, lambda).unwrap();
    (
        v.pass() && minus_zero,
        format!(
            "(1,0|0) certified: {first_certified}; scanned Λ=({lambda}), N=4: ch H_D = ch L₀(Λ−ρ₁) {:?}, H_D⁻ = 0: {minus_zero}, dim H_D = {}",
            v.status,
            rep.hd().total()
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (m, n) in [(2, 1), (2, 3)] {
        let u = uea(m, n, 1, 1);
        let d = &u.datum;
        // every monomial of degree ≤ 4 has height ≤ 4·max ht(β)
        let h = 4 * max_odd_height(d);
        let module = simple_truncation(u.clone(), &d.zero(), h).unwrap();
        let cx = DiracComplex::new(&module, h).unwrap();
        let rep = dirac_cohomology(&cx);
        let osc = oscillator_character(d, h);
        let covers_degree_4 = (0..=4).all(|k| {
            monomials_of_degree(d.odd.len(), k)
                .iter()
                .all(|a| osc.get(&superdirac::oscillator::monomial_weight(d, a)) > 0)
        });
        let same = rep.hd() == osc;
        ok &= same && covers_degree_4;
        parts.push(format!("sl({m}|{n}) height {h}: {} weights, equal: {same}", osc.terms.len()));
    }
    (ok, parts.join("; "))
}

fn criterion_3(u: &Arc<Uea>, weights: &[Weight]) -> Outcome {
    let d = &u.datum;
    let c = measure_constant_c(d, 3);
    let mut ok = c.is_constant_on_tested_vectors && (c.matches_plus || c.matches_minus);
    let mut parts = vec![format!(
        "C = {} against (ρ₁−2ρ₀,ρ₁) = {} (sign {})",
        c.b_dual_scalar,
        c.reference,
        if c.matches_plus { "+" } else if c.matches_minus { "−" } else { "none" }
    )];
    for l in weights {
        let m = simple_truncation(u.clone(), l, 4).unwrap();
        let cx = DiracComplex::new(&m, 4).unwrap();
        let a = dirac_square_audit(&cx);
        let good = a.pass && a.semisimple() && a.components.iter().all(|c| c.matched);
        ok &= good;
        parts.push(format!("Λ=({l}) N=4: {} components over {} blocks, all scalars match: {good}", a.components.len(), a.blocks.len()));
    }
    (ok, parts.join("; "))
}

fn criterion_4(u: &Arc<Uea>, certified: &[Weight]) -> Outcome {
    let d = &u.datum;
    let mut adj = true;
    for l in certified {
        let m = simple_truncation(u.clone(), l, 4).unwrap();
        let cx = DiracComplex::new(&m, 4).unwrap();
        adj &= cx.blocks.values().all(|b| anti_selfadjoint_certificate(b, &b.gram).anti_selfadjoint);
    }
    let bad = w(d, "0,0|-1");
    let refuted = !certify_unitarity(u.clone(), &bad, 3).unwrap().certified();
    let m = simple_truncation(u.clone(), &bad, 3).unwrap();
    let cx = DiracComplex::new(&m, 3).unwrap();
    let audit = dirac_square_audit(&cx);
    let viol = dirac_inequality_audit(&audit);
    let expected_label = (&bad - &d.odd[0].beta).to_string();
    let literal = viol.iter().any(|v| v.label == expected_label && v.scalar == "2");
    let at_expected: Vec<String> = audit
        .components
        .iter()
        .filter(|c| c.label == expected_label)
        .map(|c| format!("D² = {} (standard-form value {})", c.predicted, c.predicted_standard_form))
        .collect();
    let found: Vec<String> = viol.iter().map(|v| format!("{} ↦ +{}", v.label, v.scalar)).collect();
    (
        adj && refuted && literal,
        format!(
            "DᵀG+GD=0 on all certified blocks: {adj}; (0,0|−1) refuted: {refuted}; violation at Λ−(ε₁−δ₁)=({expected_label}) with +2: {literal} [{}]; violations found: {}",
            at_expected.join(", "),
            found.join(", ")
        ),
    )
}

fn criterion_5(u: &Arc<Uea>) -> Outcome {
    let d = &u.datum;
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, want) in [("0,0|0", 1), ("-2,0|0", 2), ("-2,0|1", 4)] {
        let l = w(d, s);
        let (pred, v) = even_decomposition_verify(u.clone(), &l, 3).unwrap();
        let count = pred.included().count();
        let good = v.pass() && count == want && pred.verified_unitarizable;
        ok &= good;
        parts.push(format!("({s}): {count} constituents, characters {:?}", v.status));
    }
    (ok, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (m, n, ws) in [(2, 1, vec!["1,0|0", "-2,0|1", "0,0|0"]), (2, 3, vec!["1,0|0,0,0", "-1,0|0,1,0"])] {
        let u = uea(m, n, 1, 1);
        for s in ws {
            let v = verma_filtration_check(u.clone(), &w(&u.datum, s), 3).unwrap();
            ok &= v.pass();
            parts.push(format!("sl({m}|{n}) ({s}): {:?}", v.status));
        }
    }
    (ok, parts.join("; "))
}

fn criterion_7(u: &Arc<Uea>, lambda: &Weight) -> Outcome {
    let d = &u.datum;
    let (n, cap) = (3, 5);
    let m = simple_truncation(u.clone(), lambda, kostant_module_height(d, n, cap)).unwrap();
    let k = kostant_cohomology(&m, n, cap).unwrap();
    let cx = DiracComplex::new(&m, n).unwrap();
    let rep = dirac_cohomology(&cx);
    let v = injection_check(&rep, &k, d);
    let h0: Vec<String> = k.per_degree[0].terms.keys().map(|x| x.to_string()).collect();
    (
        k.d_squared_zero && v.pass(),
        format!(
            "Λ=({lambda}) N={n}, degrees ≤ {cap}: d∘d = 0: {}; H⁰ weights {{{}}}; Injection {:?}, first diff {:?}",
            k.d_squared_zero,
            h0.join(", "),
            v.status,
            v.first_diff
        ),
    )
}

fn criterion_8(u: &Arc<Uea>, lambda: &Weight) -> Outcome {
    let d = &u.datum;
    let n = 3;
    let mods: Vec<(&str, TruncatedModule)> = vec![
        ("trivial", simple_truncation(u.clone(), &d.zero(), n).unwrap()),
        ("certified simple", simple_truncation(u.clone(), lambda, n).unwrap()),
        ("Verma", verma_truncation(u.clone(), lambda, n).unwrap()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, m) in &mods {
        let cx = DiracComplex::new(m, n).unwrap();
        let rep = dirac_cohomology(&cx);
        let v = index_check(&rep, &dirac_index(&cx));
        ok &= v.pass();
        parts.push(format!("{name}: {:?}", v.status));
    }
    (ok, parts.join("; "))
}

fn criterion_9(u: &Arc<Uea>, lambda: &Weight) -> Outcome {
    let d = &u.datum;
    let (n, cap) = (3, 5);
    let m = simple_truncation(u.clone(), lambda, kostant_module_height(d, n, cap)).unwrap();
    let k = kostant_cohomology(&m, n, cap).unwrap();
    let cx = DiracComplex::new(&m, n).unwrap();
    let rep = dirac_cohomology(&cx);
    let a = character_formula_check(&m, n, Formula::Kostant, None, Some(&k)).unwrap();
    let b = character_formula_check(&m, n, Formula::DiracIndex, Some(&rep), None).unwrap();
    (
        a.pass() && b.pass(),
        format!(
            "Λ=({lambda}) N={n}: (a) Kostant {:?} first diff {:?}; (b) Dirac index {:?}",
            a.status, a.first_diff, b.status
        ),
    )
}

type Lin = Vec<(Unit, Q)>;

fn add_into(acc: &mut Lin, u: Unit, c: Q) {
    if let Some(e) = acc.iter_mut().find(|e| e.0 == u) {
        e.1 += c;
    } else {
        acc.push((u, c));
    }
}

fn bracket_lin(d: &RootDatum, a: &Lin, b: &Lin) -> Lin {
    let mut out = Lin::new();
    for (x, cx) in a {
        for (y, cy) in b {
            for (z, cz) in bracket_units(d, *x, *y) {
                add_into(&mut out, z, cx * cy * cz);
            }
        }
    }
    out.retain(|e| !e.1.is_zero());
    out.sort();
    out
}

fn units(d: &RootDatum) -> Vec<Unit> {
    (0..d.dim()).flat_map(|i| (0..d.dim()).map(move |j| (i, j))).collect()
}

fn super_jacobi(d: &RootDatum) -> (bool, usize) {
    let us = units(d);
    let mut count = 0;
    for &a in &us {
        for &b in &us {
            for &c in &us {
                let la = vec![(a, q(1))];
                let lb = vec![(b, q(1))];
                let lc = vec![(c, q(1))];
                let lhs = bracket_lin(d, &la, &bracket_lin(d, &lb, &lc));
                let mut rhs = bracket_lin(d, &bracket_lin(d, &la, &lb), &lc);
                let sign = if d.is_odd_index_pair(a.0, a.1) && d.is_odd_index_pair(b.0, b.1) { -1 } else { 1 };
                for (u, x) in bracket_lin(d, &lb, &bracket_lin(d, &la, &lc)) {
                    add_into(&mut rhs, u, x * q(sign));
                }
                rhs.retain(|e| !e.1.is_zero());
                rhs.sort();
                if lhs != rhs {
                    return (false, count);
                }
                count += 1;
            }
        }
    }
    (true, count)
}

fn omega_laws(u: &Uea) -> (bool, usize) {
    let us = units(&u.datum);
    let mut count = 0;
    for &a in &us {
        let x = u.unit_element(a);
        if u.omega(&u.omega(&x)) != x {
            return (false, count);
        }
        for &b in &us {
            let y = u.unit_element(b);
            if u.omega(&u.mul(&x, &y)) != u.mul(&u.omega(&y), &u.omega(&x)) {
                return (false, count);
            }
            count += 1;
        }
    }
    let one = UEAElement::one();
    (u.omega(&one) == one, count)
}

fn alpha_of(d: &RootDatum, l: &Lin) -> WeylElement {
    let mut out = WeylElement::zero(d.odd.len());
    for (u, c) in l {
        out.add_scaled(&alpha_embed(d, *u).unwrap(), c);
    }
    out
}

fn alpha_hom(d: &RootDatum) -> (bool, usize) {
    let even: Vec<Unit> = units(d).into_iter().filter(|u| !d.is_odd_index_pair(u.0, u.1)).collect();
    let mut count = 0;
    for &a in &even {
        for &b in &even {
            let lhs = alpha_of(d, &bracket_lin(d, &vec![(a, q(1))], &vec![(b, q(1))]));
            let rhs = alpha_embed(d, a).unwrap().commutator(&alpha_embed(d, b).unwrap());
            if lhs != rhs {
                return (false, count);
            }
            count += 1;
        }
    }
    (true, count)
}

fn weyl_relations(nvars: usize) -> bool {
    (0..nvars).all(|k| {
        (0..nvars).all(|l| {
            let xk = WeylElement::x(nvars, k);
            let xl = WeylElement::x(nvars, l);
            let dk = WeylElement::d(nvars, k);
            let dl = WeylElement::d(nvars, l);
            let delta = WeylElement::scalar(nvars, q(if k == l { 1 } else { 0 }));
            dk.commutator(&xl) == delta && xk.commutator(&xl).is_zero() && dk.commutator(&dl).is_zero()
        })
    })
}

/// ⟨∂_k P, Q⟩ = ⟨P, x_k Q⟩ on all monomials up to `deg`.
fn bf_adjoint(nvars: usize, deg: usize) -> (bool, usize) {
    let monos: Vec<_> = (0..=deg).flat_map(|k| monomials_of_degree(nvars, k)).collect();
    let mut count = 0;
    for k in 0..nvars {
        let dk = WeylElement::d(nvars, k);
        let xk = WeylElement::x(nvars, k);
        for a in &monos {
            for b in &monos {
                let p = Poly::monomial(a.clone());
                let r = Poly::monomial(b.clone());
                if bargmann_fock(&weyl_apply(&dk, &p), &r) != bargmann_fock(&p, &weyl_apply(&xk, &r)) {
                    return (false, count);
                }
                count += 1;
            }
        }
    }
    (true, count)
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (m, n, deg) in [(2, 1, 4), (2, 3, 2)] {
        let u = uea(m, n, 1, 1);
        let d = &u.datum;
        let (j, jc) = super_jacobi(d);
        let (o, oc) = omega_laws(&u);
        let (a, ac) = alpha_hom(d);
        let wr = weyl_relations(d.odd.len());
        let (b, bc) = bf_adjoint(d.odd.len(), deg);
        ok &= j && o && a && wr && b;
        parts.push(format!(
            "sl({m}|{n}): Jacobi {j} ({jc} triples), ω {o} ({oc} pairs), α {a} ({ac} pairs), Weyl {wr}, Bargmann–Fock {b} ({bc} pairs)"
        ));
    }
    (ok, parts.join("; "))
}

fn main() {
    let total = Instant::now();
    let u = uea(2, 1, 1, 1);
    let typical = scan_certified_typical(&u);
    let atypical = w(&u.datum, "-2,0|0");
    let certified = [typical.clone(), atypical.clone()];
    let runs: Vec<(u8, &str, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "Dirac cohomology of L(Λ) is L₀(Λ−ρ₁)", Box::new(|| criterion_1(&u, &typical))),
        (2, "trivial module has H_D = M(g₁̄)", Box::new(criterion_2)),
        (3, "D² scalars on isotypic components", Box::new(|| criterion_3(&u, &certified))),
        (4, "anti-selfadjointness and Dirac inequality", Box::new(|| criterion_4(&u, &certified))),
        (5, "even decomposition", Box::new(|| criterion_5(&u))),
        (6, "Verma g₀̄-filtration", Box::new(criterion_6)),
        (7, "Kostant cohomology comparison", Box::new(|| criterion_7(&u, &typical))),
        (8, "index equals Euler characteristic", Box::new(|| criterion_8(&u, &typical))),
        (9, "character formulas", Box::new(|| criterion_9(&u, &typical))),
        (10, "algebra substrate", Box::new(criterion_10)),
    ];
    let mut failing = BTreeSet::new();
    for (id, name, f) in &runs {
        let t = Instant::now();
        let (ok, detail) = f();
        if !ok {
            failing.insert(*id);
        }
        println!(
            "CRITERION {id:>2} {} {name} [{:.2}s] {detail}",
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    let known: BTreeSet<u8> = KNOWN_FAILURES.into_iter().collect();
    println!(
        "acceptance: {} pass, {} fail (known: {:?}) in {:.1}s",
        10 - failing.len(),
        failing.len(),
        known,
        total.elapsed().as_secs_f64()
    );
    if failing != known {
        eprintln!("failing set {failing:?} differs from the recorded set {known:?}");
        std::process::exit(1);
    }
}
