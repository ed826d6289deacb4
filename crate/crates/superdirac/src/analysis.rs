//! Branching to g₀̄, the Verma g₀̄-filtration, Kostant g₊₁-cohomology and the
//! two character formulas, each reported as a pass/fail verdict with the first
//! differing weight.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dirac::{dirac_cohomology, mul, predicted_scalar, CohomologyReport, DiracComplex, SquareAudit};
use crate::exactla::{fmt_q, is_zero_mat, rank, zeros, Mat};
use crate::modules::{
    compact_character, odd_subsets, simple_units, wedge_odd_negative, Kind, ModuleError, Sub, TruncatedModule,
    VirtualCharacter,
};
use crate::oscillator::monomials_of_degree;
use crate::uea::{Uea, Unit};
use crate::weights::{RootDatum, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diff {
    pub weight: String,
    pub left: i64,
    pub right: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub theorem: String,
    pub status: Status,
    pub first_diff: Option<Diff>,
    pub truncation: usize,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn compare(theorem: &str, left: &VirtualCharacter, right: &VirtualCharacter, n: usize) -> Self {
        let first_diff = left
            .first_diff(right)
            .map(|(w, l, r)| Diff { weight: w.to_string(), left: l, right: r });
        Verdict {
            theorem: theorem.into(),
            status: if first_diff.is_none() { Status::Pass } else { Status::Fail },
            first_diff,
            truncation: n,
        }
    }

    pub fn flag(theorem: &str, ok: bool, n: usize) -> Self {
        Verdict { theorem: theorem.into(), status: if ok { Status::Pass } else { Status::Fail }, first_diff: None, truncation: n }
    }
}

/// Weights w with ht(top − w) ≤ n.
fn within<'a>(d: &'a RootDatum, top: &Weight, n: usize) -> impl Fn(&Weight) -> bool + 'a {
    let top = top.clone();
    move |w: &Weight| d.height_usize(&(&top - w)).is_some_and(|h| h <= n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exclusion {
    None,
    Atypicality,
    DiracInequality,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchTerm {
    pub subset: Vec<String>,
    pub label: String,
    pub included: bool,
    pub exclusion: Exclusion,
    pub scalar: String,
    #[serde(skip)]
    pub label_weight: Weight,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchingPrediction {
    pub weight: String,
    pub verified_unitarizable: bool,
    pub terms: Vec<BranchTerm>,
}

impl BranchingPrediction {
    pub fn included(&self) -> impl Iterator<Item = &BranchTerm> {
        self.terms.iter().filter(|t| t.included)
    }
}

/// Subsets S ⊆ Δ₁⁺ avoiding the atypical roots of Λ whose shift Λ − Γ_S passes
/// the strict inequality (Λ−Γ+2ρ, Λ−Γ) < (Λ+2ρ, Λ).
pub fn even_decomposition(uea: Arc<Uea>, lambda: &Weight, n: usize) -> Result<BranchingPrediction, ModuleError> {
    let d = &uea.datum;
    d.check_highest_weight(lambda)?;
    let atyp: BTreeSet<Weight> = d.atypicality_set(lambda).into_iter().map(|r| r.weight).collect();
    let terms = odd_subsets(d)
        .into_iter()
        .map(|(s, g)| {
            let label = lambda - &g;
            let scalar = predicted_scalar(d, lambda, &label);
            let exclusion = if s.iter().any(|&i| atyp.contains(&d.odd_pos[i].weight)) {
                Exclusion::Atypicality
            } else if !s.is_empty() && !scalar.is_negative() {
                Exclusion::DiracInequality
            } else {
                Exclusion::None
            };
            BranchTerm {
                subset: s.iter().map(|&i| d.odd_pos[i].weight.to_string()).collect(),
                label: label.to_string(),
                included: exclusion == Exclusion::None,
                exclusion,
                scalar: fmt_q(&scalar),
                label_weight: label,
            }
        })
        .collect();
    let cert = crate::modules::certify_unitarity(uea.clone(), lambda, n)?;
    Ok(BranchingPrediction { weight: lambda.to_string(), verified_unitarizable: cert.certified(), terms })
}

/// ch L(Λ) against Σ ch L₀(Λ − Γ_S) over the included subsets, up to height N.
pub fn even_decomposition_verify(uea: Arc<Uea>, lambda: &Weight, n: usize) -> Result<(BranchingPrediction, Verdict), ModuleError> {
    let pred = even_decomposition(uea.clone(), lambda, n)?;
    let d = &uea.datum;
    let keep = within(d, lambda, n);
    let left = TruncatedModule::build(uea.clone(), lambda, n, Kind::Simple)?.character();
    let mut right = VirtualCharacter::new();
    for t in pred.included() {
        let c = TruncatedModule::build(uea.clone(), &t.label_weight, n, Kind::EvenSimple)?.character();
        right.add_char(&c.filtered(&keep), 1);
    }
    Ok((pred, Verdict::compare("evenDecomp", &left, &right, n)))
}

/// ch M(Λ) = Σ_S ch M⁰(Λ − Γ_S), each subset counted once.
pub fn verma_filtration_check(uea: Arc<Uea>, lambda: &Weight, n: usize) -> Result<Verdict, ModuleError> {
    let d = &uea.datum;
    let keep = within(d, lambda, n);
    let left = TruncatedModule::build(uea.clone(), lambda, n, Kind::Verma)?.character();
    let mut right = VirtualCharacter::new();
    for (_, g) in odd_subsets(d) {
        let mu = lambda - &g;
        let c = TruncatedModule::build(uea.clone(), &mu, n, Kind::EvenVerma)?.character();
        right.add_char(&c.filtered(&keep), 1);
    }
    Ok(Verdict::compare("vermaFiltration", &left, &right, n))
}

/// Decompose a truncated virtual character into k^ℂ highest weight characters
/// by peeling off the highest remaining weight.
pub fn ktype_decompose(uea: Arc<Uea>, ch: &VirtualCharacter, top: &Weight, n: usize) -> Result<VirtualCharacter, ModuleError> {
    let d = &uea.datum;
    let keep = within(d, top, n);
    let mut rest = ch.filtered(&keep);
    let mut out = VirtualCharacter::new();
    loop {
        let next = rest
            .terms
            .iter()
            .map(|(w, c)| (d.height_usize(&(top - w)).unwrap(), w.clone(), *c))
            .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let Some((h, w, c)) = next else { break };
        let f = compact_character(uea.clone(), &w, n - h)?;
        rest.add_char(&f.filtered(&keep), -c);
        out.add(w, c);
    }
    Ok(out)
}

/// One generator of S(g₋₁): x_k for k ≤ pn, ∂_k for k > pn. The cochain
/// differential multiplies by the variable and applies `unit` with `sign`.
#[derive(Clone, Debug)]
struct KVar {
    unit: Unit,
    sign: i64,
    weight: Weight,
}

#[derive(Clone, Debug, Serialize)]
pub struct KostantBlock {
    pub weight: String,
    pub degree: usize,
    pub dim: usize,
    pub cohomology: usize,
}

/// M ⊗ S(g₋₁) with d = d^{p₁} − δ^{q₂}, per weight and degree.
#[derive(Clone, Debug, Serialize)]
pub struct KostantReport {
    pub truncation: usize,
    pub degree_cap: usize,
    pub d_squared_zero: bool,
    /// H^K vanishes at every retained weight for the top computed degree K
    pub top_degree_vanishes: bool,
    pub blocks: Vec<KostantBlock>,
    #[serde(skip)]
    pub per_degree: Vec<VirtualCharacter>,
}

impl KostantReport {
    pub fn total(&self) -> VirtualCharacter {
        let mut c = VirtualCharacter::new();
        for h in &self.per_degree {
            c.add_char(h, 1);
        }
        c
    }

    pub fn euler(&self) -> VirtualCharacter {
        let mut c = VirtualCharacter::new();
        for (k, h) in self.per_degree.iter().enumerate() {
            c.add_char(h, if k % 2 == 0 { 1 } else { -1 });
        }
        c
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "truncation": self.truncation,
            "degree_cap": self.degree_cap,
            "d_squared_zero": self.d_squared_zero,
            "top_degree_vanishes": self.top_degree_vanishes,
            "per_degree": self.per_degree.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn kostant_vars(d: &RootDatum) -> Vec<KVar> {
    let pn = d.p * d.n;
    d.odd
        .iter()
        .enumerate()
        .map(|(k, od)| {
            if k < pn {
                KVar { unit: od.d_unit, sign: od.d_sign as i64, weight: -&od.beta }
            } else {
                KVar { unit: od.x_unit, sign: -(od.x_sign as i64), weight: od.beta.clone() }
            }
        })
        .collect()
}

/// Module height needed for H^k, k ≤ K, at weights of height ≤ N.
pub fn kostant_module_height(d: &RootDatum, n: usize, degree_cap: usize) -> usize {
    let pn = d.p * d.n;
    let up = d.odd[pn..].iter().map(|o| d.height_usize(&o.beta).unwrap()).max().unwrap_or(0);
    n + (degree_cap + 1) * up
}

type Cochain = (Weight, usize, Vec<u8>);

fn cochain_basis(m: &TruncatedModule, vars: &[KVar], w: &Weight, k: usize) -> Result<Vec<Cochain>, ModuleError> {
    let d = m.datum();
    let mut out = Vec::new();
    for a in monomials_of_degree(vars.len(), k) {
        let shift = a.iter().zip(vars).fold(d.zero(), |s, (&e, v)| &s + &v.weight.scale(&crate::exactla::q(e as i64)));
        let mu = w - &shift;
        match d.height_usize(&(&m.lambda - &mu)) {
            None => continue,
            Some(h) if h > m.height => return Err(ModuleError::Outside(mu.to_string())),
            Some(_) => {}
        }
        for i in 0..m.dim_at(&mu) {
            out.push((mu.clone(), i, a.clone()));
        }
    }
    Ok(out)
}

fn cochain_differential(m: &TruncatedModule, vars: &[KVar], src: &[Cochain], dst: &[Cochain]) -> Result<Mat, ModuleError> {
    let index: BTreeMap<&Cochain, usize> = dst.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut out = zeros(dst.len(), src.len());
    for (col, (mu, i, a)) in src.iter().enumerate() {
        for (k, v) in vars.iter().enumerate() {
            let d = m.datum();
            let to = mu + &crate::modules::unit_weight(d, v.unit);
            if m.dim_at(&to) == 0 {
                continue;
            }
            let op = m.op(v.unit, mu)?;
            let mut b = a.clone();
            b[k] += 1;
            for (r, row) in op.iter().enumerate() {
                let c = &row[*i];
                if c.is_zero() {
                    continue;
                }
                let key = (to.clone(), r, b.clone());
                out[index[&key]][col] += c * crate::exactla::q(v.sign);
            }
        }
    }
    Ok(out)
}

/// H^k(g₊₁, M) for k ≤ `degree_cap` at weights w with ht(Λ − w) ≤ N.
/// The module must reach height `kostant_module_height(N, degree_cap)`.
pub fn kostant_cohomology(m: &TruncatedModule, n: usize, degree_cap: usize) -> Result<KostantReport, ModuleError> {
    let d = m.datum();
    if m.height < kostant_module_height(d, n, degree_cap) {
        return Err(ModuleError::Outside(format!(
            "module height {} below the {} needed for degree {degree_cap}",
            m.height,
            kostant_module_height(d, n, degree_cap)
        )));
    }
    let vars = kostant_vars(d);
    let keep = within(d, &m.lambda, n);
    let mut weights: BTreeSet<Weight> = BTreeSet::new();
    for mu in m.blocks.keys() {
        for k in 0..=degree_cap {
            for a in monomials_of_degree(vars.len(), k) {
                let w = a.iter().zip(&vars).fold(mu.clone(), |s, (&e, v)| &s + &v.weight.scale(&crate::exactla::q(e as i64)));
                if keep(&w) {
                    weights.insert(w);
                }
            }
        }
    }
    let weights: Vec<Weight> = weights.into_iter().collect();
    let rows: Result<Vec<(Weight, Vec<(usize, usize)>, bool)>, ModuleError> = weights
        .par_iter()
        .map(|w| {
            let bases: Vec<Vec<Cochain>> =
                (0..=degree_cap + 1).map(|k| cochain_basis(m, &vars, w, k)).collect::<Result<_, _>>()?;
            let ds: Vec<Mat> = (0..=degree_cap)
                .map(|k| cochain_differential(m, &vars, &bases[k], &bases[k + 1]))
                .collect::<Result<_, _>>()?;
            let mut ok = true;
            for k in 0..degree_cap {
                if !is_zero_mat(&mul(&ds[k + 1], &ds[k])) {
                    ok = false;
                }
            }
            let ranks: Vec<usize> = ds.iter().enumerate().map(|(k, a)| rank(a, bases[k].len())).collect();
            let per: Vec<(usize, usize)> = (0..=degree_cap)
                .map(|k| {
                    let before = if k == 0 { 0 } else { ranks[k - 1] };
                    (bases[k].len(), bases[k].len() - ranks[k] - before)
                })
                .collect();
            Ok((w.clone(), per, ok))
        })
        .collect();
    let mut rep = KostantReport {
        truncation: n,
        degree_cap,
        d_squared_zero: true,
        top_degree_vanishes: true,
        blocks: vec![],
        per_degree: vec![VirtualCharacter::new(); degree_cap + 1],
    };
    for (w, per, ok) in rows? {
        rep.d_squared_zero &= ok;
        for (k, (dim, h)) in per.into_iter().enumerate() {
            rep.per_degree[k].add(w.clone(), h as i64);
            if k == degree_cap && h > 0 {
                rep.top_degree_vanishes = false;
            }
            if dim > 0 {
                rep.blocks.push(KostantBlock { weight: w.to_string(), degree: k, dim, cohomology: h });
            }
        }
    }
    Ok(rep)
}

/// ch H_D(H) against ch H^*(g₊₁, H)·e^{−ρ₁} on the Dirac truncation.
pub fn injection_check(hd: &CohomologyReport, kostant: &KostantReport, d: &RootDatum) -> Verdict {
    let shifted = kostant.total().shifted(&-&d.rho1);
    Verdict::compare("Injection", &hd.hd(), &shifted, hd.truncation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    Kostant,
    DiracIndex,
}

/// (a) ch H = ⋀n₁̄⁻ · Σ_k (−1)^k ch H^k(g₊₁, H);
/// (b) ch H = ⋀n₁̄⁻ · (Σ_{H_D⁺} ch F^{μ+ρ₁} − Σ_{H_D⁻} ch F^{ν+ρ₁}).
pub fn character_formula_check(
    m: &TruncatedModule,
    n: usize,
    which: Formula,
    hd: Option<&CohomologyReport>,
    kostant: Option<&KostantReport>,
) -> Result<Verdict, ModuleError> {
    let d = m.datum();
    let keep = within(d, &m.lambda, n);
    let left = m.character().filtered(&keep);
    let wedge = wedge_odd_negative(d);
    let (name, inner) = match which {
        Formula::Kostant => {
            let k = kostant.expect("Kostant report required");
            ("formalCharacter", k.euler())
        }
        Formula::DiracIndex => {
            let r = hd.expect("Dirac cohomology required");
            let mut c = VirtualCharacter::new();
            for (table, sign) in [(&r.ktypes_plus, 1), (&r.ktypes_minus, -1)] {
                for (mu, mult) in &table.terms {
                    let top = mu + &d.rho1;
                    let h = d.height_usize(&(&m.lambda - &top)).expect("k-type inside truncation");
                    let f = compact_character(m.uea.clone(), &top, n - h)?;
                    c.add_char(&f, sign * mult);
                }
            }
            ("formalCharacterDiracIndex", c)
        }
    };
    let right = wedge.times(&inner.filtered(&keep)).filtered(&keep);
    Ok(Verdict::compare(name, &left, &right, n))
}

/// Pairwise distinct H_D k-type tables for distinct weights.
pub fn uniqueness_check(tables: &[(Weight, VirtualCharacter)], n: usize) -> Verdict {
    let mut ok = true;
    for (i, (a, ta)) in tables.iter().enumerate() {
        for (b, tb) in &tables[i + 1..] {
            if a != b && ta == tb {
                ok = false;
            }
        }
    }
    Verdict::flag("Unique", ok, n)
}

/// Every g₀̄-highest weight seen in a square audit satisfies the Harish-Chandra condition.
pub fn harish_chandra_audit(d: &RootDatum, audit: &SquareAudit, n: usize) -> (Verdict, Vec<String>) {
    let bad: Vec<String> = audit
        .components
        .iter()
        .filter(|c| !d.harish_chandra_condition(&c.highest_weight))
        .map(|c| c.highest.clone())
        .collect();
    (Verdict::flag("HarishChandra", bad.is_empty(), n), bad)
}

/// H_D⁺ − H_D⁻ against the per-weight index of H ⊗ M(g₁̄).
pub fn index_check(rep: &CohomologyReport, index: &VirtualCharacter) -> Verdict {
    Verdict::compare("EulerCharacteristic", index, &rep.euler(), rep.truncation)
}

/// H_D(L(Λ)) against the character of L₀(Λ − ρ₁), and H_D⁻ = 0.
pub fn dirac_kernel_check(uea: Arc<Uea>, rep: &CohomologyReport, lambda: &Weight) -> Result<(Verdict, bool), ModuleError> {
    let d = &uea.datum;
    let top = lambda - &d.rho1;
    let l0 = TruncatedModule::build(uea.clone(), &top, rep.truncation, Kind::EvenSimple)?.character();
    let v = Verdict::compare("DiracCohomologySimple", &rep.hd(), &l0, rep.truncation);
    Ok((v, rep.hd_minus.terms.is_empty()))
}

/// Dirac cohomology of a module truncated at `n`, with the module built at the same height.
pub fn dirac_cohomology_of(m: &TruncatedModule, n: usize) -> Result<CohomologyReport, ModuleError> {
    let cx = DiracComplex::new(m, n)?;
    Ok(dirac_cohomology(&cx))
}

/// Compact simple raising operators of the datum, exposed for reports.
pub fn compact_simple_roots(uea: &Uea) -> Vec<String> {
    simple_units(uea, Sub::Compact).iter().map(|&(i, j)| uea.datum.unit_root(i, j).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::simple_truncation;

    fn sl21() -> Arc<Uea> {
        Arc::new(Uea::new(&RootDatum::new(2, 1, 1, 1).unwrap()))
    }

    fn w(e: &[i64], dl: &[i64]) -> Weight {
        Weight::from_ints(e, dl)
    }

    #[test]
    fn branching_counts() {
        let u = sl21();
        let count = |l: Weight| even_decomposition(u.clone(), &l, 1).unwrap().included().count();
        assert_eq!(count(w(&[0, 0], &[0])), 1);
        assert_eq!(count(w(&[-2, 0], &[0])), 2);
        assert_eq!(count(w(&[-2, 0], &[1])), 4);
        // not unitarizable: the ε₁−δ₁ shift has scalar +4 and is dropped
        let p = even_decomposition(u, &w(&[1, 0], &[0]), 1).unwrap();
        assert_eq!(p.included().count(), 1);
        assert_eq!(p.terms[2].exclusion, Exclusion::DiracInequality);
        assert_eq!(p.terms[2].scalar, "4");
        assert!(!p.verified_unitarizable);
    }

    #[test]
    fn branching_verifies() {
        let u = sl21();
        for l in [w(&[0, 0], &[0]), w(&[-2, 0], &[0]), w(&[-2, 0], &[1])] {
            let (_, v) = even_decomposition_verify(u.clone(), &l, 3).unwrap();
            assert!(v.pass(), "{l}: {:?}", v.first_diff);
        }
    }

    #[test]
    fn filtration_sl21() {
        let v = verma_filtration_check(sl21(), &w(&[1, 0], &[0]), 3).unwrap();
        assert!(v.pass(), "{:?}", v.first_diff);
    }

    #[test]
    fn kostant_trivial_degree_zero() {
        let u = sl21();
        let d = &u.datum;
        let mh = kostant_module_height(d, 2, 3);
        let m = simple_truncation(u.clone(), &d.zero(), mh).unwrap();
        let k = kostant_cohomology(&m, 2, 3).unwrap();
        assert!(k.d_squared_zero);
        assert_eq!(k.per_degree[0].terms.len(), 1);
        assert_eq!(k.per_degree[0].get(&d.zero()), 1);
    }

    #[test]
    fn ktype_peel_is_identity_without_compact_roots() {
        let u = sl21();
        let mut c = VirtualCharacter::new();
        c.add(w(&[0, 0], &[0]), 2);
        c.add(w(&[-1, 1], &[0]), -1);
        assert_eq!(ktype_decompose(u, &c, &w(&[0, 0], &[0]), 3).unwrap(), c);
    }

    #[test]
    fn ktype_peel_sl31() {
        let u = Arc::new(Uea::new(&RootDatum::new(3, 1, 2, 1).unwrap()));
        let d = &u.datum;
        let mu = Weight::from_ints(&[1, 0, 0], &[0]);
        let f = compact_character(u.clone(), &mu, 4).unwrap();
        assert_eq!(f.total(), 2);
        let k = ktype_decompose(u.clone(), &f, &mu, 4).unwrap();
        assert_eq!(k.terms.len(), 1);
        assert_eq!(k.get(&mu), 1);
        assert!(d.compact_pos.len() == 1);
    }
}
