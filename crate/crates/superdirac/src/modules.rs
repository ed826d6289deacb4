//! Height-truncated Verma modules M(Λ), simple quotients L(Λ), their even and
//! compact counterparts, characters, k-type tables and unitarity certificates.
//!
//! A vector of M(Λ) is a combination of PBW monomials f^a·v_Λ in the negative
//! generators of the acting subalgebra. The simple quotient keeps a pivot set P
//! of Verma monomials per block; a Verma vector w maps to the coordinates c with
//! G_PP c = (G w)_P.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{
    definiteness, fmt_q, identity, independent_rows, inverse, kernel_basis, matmul, q, rank, zeros,
    Mat, Q,
};
use crate::uea::{omega_unit, Class, Mono, Uea, Unit};
use crate::weights::{DatumError, RootDatum, Weight};

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error("weight {0} lies outside the height truncation")]
    Outside(String),
    #[error("no block at weight {0}")]
    UnknownBlock(String),
}

/// Which subalgebra acts: all of g, g₀̄, or k^ℂ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sub {
    Full,
    Even,
    Compact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Verma,
    Simple,
    EvenVerma,
    EvenSimple,
    CompactVerma,
    CompactSimple,
}

impl Kind {
    pub fn sub(self) -> Sub {
        match self {
            Kind::Verma | Kind::Simple => Sub::Full,
            Kind::EvenVerma | Kind::EvenSimple => Sub::Even,
            Kind::CompactVerma | Kind::CompactSimple => Sub::Compact,
        }
    }

    pub fn is_simple(self) -> bool {
        matches!(self, Kind::Simple | Kind::EvenSimple | Kind::CompactSimple)
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Verma => "verma",
            Kind::Simple => "simple",
            Kind::EvenVerma => "even-verma",
            Kind::EvenSimple => "even-simple",
            Kind::CompactVerma => "compact-verma",
            Kind::CompactSimple => "compact-simple",
        }
    }
}

pub fn sub_contains(d: &RootDatum, sub: Sub, u: Unit) -> bool {
    match sub {
        Sub::Full => true,
        Sub::Even => !d.is_odd_index_pair(u.0, u.1),
        Sub::Compact => !d.is_odd_index_pair(u.0, u.1) && d.is_compact_unit(u.0, u.1),
    }
}

/// Positive root vectors of the subalgebra, in PBW order.
pub fn positive_units(uea: &Uea, sub: Sub) -> Vec<Unit> {
    uea.gens
        .iter()
        .zip(&uea.class)
        .filter(|(u, c)| **c == Class::Positive && sub_contains(&uea.datum, sub, **u))
        .map(|(u, _)| *u)
        .collect()
}

/// Positive root vectors whose root is not a sum of two positive roots of the subalgebra.
pub fn simple_units(uea: &Uea, sub: Sub) -> Vec<Unit> {
    let d = &uea.datum;
    let pos = positive_units(uea, sub);
    let roots: Vec<Weight> = pos.iter().map(|&(i, j)| d.unit_root(i, j)).collect();
    pos.iter()
        .enumerate()
        .filter(|(a, _)| {
            !roots.iter().any(|r| roots.iter().any(|s| (r + s) == roots[*a]))
        })
        .map(|(_, u)| *u)
        .collect()
}

pub fn unit_weight(d: &RootDatum, u: Unit) -> Weight {
    d.unit_root(u.0, u.1)
}

/// Formal character Σ mult·e^ν, possibly virtual.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VirtualCharacter {
    pub terms: BTreeMap<Weight, i64>,
}

impl VirtualCharacter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn add_char(&mut self, o: &VirtualCharacter, c: i64) {
        for (w, m) in &o.terms {
            self.add(w.clone(), m * c);
        }
    }

    pub fn shifted(&self, by: &Weight) -> VirtualCharacter {
        let mut out = Self::new();
        for (w, m) in &self.terms {
            out.add(w + by, *m);
        }
        out
    }

    pub fn times(&self, o: &VirtualCharacter) -> VirtualCharacter {
        let mut out = Self::new();
        for (w, m) in &self.terms {
            for (w2, m2) in &o.terms {
                out.add(w + w2, m * m2);
            }
        }
        out
    }

    pub fn filtered(&self, keep: impl Fn(&Weight) -> bool) -> VirtualCharacter {
        VirtualCharacter { terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, m)| (w.clone(), *m)).collect() }
    }

    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }

    /// First weight (in weight order) where the two characters differ.
    pub fn first_diff(&self, o: &VirtualCharacter) -> Option<(Weight, i64, i64)> {
        let mut keys: Vec<&Weight> = self.terms.keys().chain(o.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find(|w| self.get(w) != o.get(w)).map(|w| (w.clone(), self.get(w), o.get(w)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.terms.iter().map(|(w, m)| (w.to_string(), serde_json::Value::from(*m))).collect(),
        )
    }
}

/// Π_{γ ∈ Δ₁⁺} (1 + e^{−γ})
pub fn wedge_odd_negative(d: &RootDatum) -> VirtualCharacter {
    let mut c = VirtualCharacter::new();
    c.add(d.zero(), 1);
    for r in &d.odd_pos {
        let mut f = VirtualCharacter::new();
        f.add(d.zero(), 1);
        f.add(-&r.weight, 1);
        c = c.times(&f);
    }
    c
}

/// All sums Γ_S for S ⊆ Δ₁⁺, in subset order (bit k ↔ odd_pos[k]).
pub fn odd_subsets(d: &RootDatum) -> Vec<(Vec<usize>, Weight)> {
    let k = d.odd_pos.len();
    (0..1u64 << k)
        .map(|mask| {
            let s: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let g = s.iter().fold(d.zero(), |a, &i| &a + &d.odd_pos[i].weight);
            (s, g)
        })
        .collect()
}

pub type Vector = BTreeMap<Mono, Q>;

fn vadd(v: &mut Vector, m: Mono, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(m.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&m);
    }
}

#[derive(Clone, Debug)]
pub struct ModBlock {
    pub weight: Weight,
    pub height: usize,
    /// Verma basis of the block
    pub monos: Vec<Mono>,
    pub verma_gram: Mat,
    /// monomials kept in the quotient (all of them for Verma kinds)
    pub pivots: Vec<usize>,
    /// |P| × |monos|: Verma coordinates to module coordinates
    pub proj: Mat,
    /// Gram matrix on the module basis
    pub gram: Mat,
    /// 0 even, 1 odd, per module basis vector
    pub parity: Vec<u8>,
}

impl ModBlock {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn radical_rank(&self) -> usize {
        self.monos.len() - self.pivots.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gram: Vec<Vec<String>> = self.gram.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        serde_json::json!({
            "weight": self.weight.to_string(),
            "dim": self.dim(),
            "gram": gram,
            "radical_rank": self.radical_rank(),
            "parity": self.parity,
        })
    }
}

pub struct TruncatedModule {
    pub uea: Arc<Uea>,
    pub lambda: Weight,
    pub height: usize,
    pub kind: Kind,
    pub blocks: BTreeMap<Weight, ModBlock>,
    ops: Mutex<HashMap<(Unit, Weight), Arc<Mat>>>,
}

impl TruncatedModule {
    pub fn datum(&self) -> &RootDatum {
        &self.uea.datum
    }

    pub fn build(uea: Arc<Uea>, lambda: &Weight, height: usize, kind: Kind) -> Result<Self, ModuleError> {
        let d = &uea.datum;
        d.check_highest_weight(lambda)?;
        let sub = kind.sub();
        let negs: Vec<(u16, bool, usize, Weight)> = uea
            .gens
            .iter()
            .enumerate()
            .filter(|(k, u)| uea.class[*k] == Class::Negative && sub_contains(d, sub, **u))
            .map(|(k, &(i, j))| {
                let w = d.unit_root(i, j);
                let h = d.height_usize(&-&w).expect("negative root");
                (k as u16, uea.odd[k], h, w)
            })
            .collect();
        let mut by_weight: BTreeMap<Weight, Vec<Mono>> = BTreeMap::new();
        enumerate_monos(&negs, 0, height, &mut vec![], lambda.clone(), &mut by_weight);
        let mut levels: Vec<Vec<(Weight, Vec<Mono>)>> = vec![Vec::new(); height + 1];
        for (w, monos) in by_weight {
            levels[d.height_usize(&(lambda - &w)).unwrap()].push((w, monos));
        }
        // L_μ = Σ f_α L_{μ+α} over simple α, so a weight with no nonzero
        // simple-raised neighbour is zero in the simple quotient
        let simple: Vec<Weight> = simple_units(&uea, sub).iter().map(|&(i, j)| d.unit_root(i, j)).collect();
        let mut blocks: BTreeMap<Weight, ModBlock> = BTreeMap::new();
        for (h, level) in levels.into_iter().enumerate() {
            let built: Vec<ModBlock> = level
                .into_par_iter()
                .filter(|(w, _)| h == 0 || !kind.is_simple() || simple.iter().any(|a| blocks.contains_key(&(w + a))))
                .filter_map(|(w, mut monos)| {
                    monos.sort();
                    build_block(&uea, lambda, kind, w, h, monos)
                })
                .collect();
            blocks.extend(built.into_iter().map(|b| (b.weight.clone(), b)));
        }
        Ok(TruncatedModule {
            lambda: lambda.clone(),
            height,
            kind,
            blocks,
            ops: Mutex::new(HashMap::new()),
            uea,
        })
    }

    pub fn block(&self, w: &Weight) -> Option<&ModBlock> {
        self.blocks.get(w)
    }

    pub fn dim_at(&self, w: &Weight) -> usize {
        self.blocks.get(w).map(|b| b.dim()).unwrap_or(0)
    }

    /// Height of Λ − ν if ν ∈ Λ − ℤ₊[Δ⁺].
    pub fn depth(&self, w: &Weight) -> Option<usize> {
        self.datum().height_usize(&(&self.lambda - w))
    }

    /// Matrix of the unit E_u from block `from` to block `from + root(u)`.
    pub fn op(&self, u: Unit, from: &Weight) -> Result<Arc<Mat>, ModuleError> {
        let key = (u, from.clone());
        if let Some(m) = self.ops.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let d = self.datum();
        let to = from + &unit_weight(d, u);
        let src_dim = self.dim_at(from);
        let m = match self.depth(&to) {
            None => zeros(0, src_dim),
            Some(h) if h > self.height => return Err(ModuleError::Outside(to.to_string())),
            Some(_) => match (self.blocks.get(from), self.blocks.get(&to)) {
                (Some(src), Some(dst)) => self.op_matrix(u, src, dst),
                (_, dst) => zeros(dst.map(|b| b.dim()).unwrap_or(0), src_dim),
            },
        };
        let m = Arc::new(m);
        self.ops.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }

    fn op_matrix(&self, u: Unit, src: &ModBlock, dst: &ModBlock) -> Mat {
        let g = self.uea.gen(u);
        let index: HashMap<&Mono, usize> = dst.monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = zeros(dst.dim(), src.dim());
        for (c, &pi) in src.pivots.iter().enumerate() {
            let v = act_mono(&self.uea, &self.lambda, g, &src.monos[pi]);
            let mut verma = vec![Q::zero(); dst.monos.len()];
            for (m, x) in v {
                verma[index[&m]] += x;
            }
            let coords = project(dst, &verma);
            for r in 0..dst.dim() {
                out[r][c] = coords[r].clone();
            }
        }
        out
    }

    /// Module coordinates of a Verma-monomial vector in block `w`.
    pub fn project_verma(&self, w: &Weight, v: &[Q]) -> Option<Vec<Q>> {
        self.blocks.get(w).map(|b| project(b, v))
    }

    pub fn character(&self) -> VirtualCharacter {
        let mut c = VirtualCharacter::new();
        for (w, b) in &self.blocks {
            c.add(w.clone(), b.dim() as i64);
        }
        c
    }

    /// Multiplicity of F^μ: vectors of weight μ killed by the compact simple raising operators.
    pub fn ktype_table(&self) -> VirtualCharacter {
        let raise = simple_units(&self.uea, Sub::Compact);
        let mut c = VirtualCharacter::new();
        for (w, b) in &self.blocks {
            let mut rows: Mat = Vec::new();
            for &u in &raise {
                rows.extend(self.op(u, w).expect("raising stays inside").iter().cloned());
            }
            let k = b.dim() - rank(&rows, b.dim());
            c.add(w.clone(), k as i64);
        }
        c
    }

    pub fn blocks_json(&self) -> Vec<serde_json::Value> {
        self.blocks.values().map(|b| b.to_json()).collect()
    }
}

fn project(b: &ModBlock, verma: &[Q]) -> Vec<Q> {
    (0..b.dim())
        .map(|r| b.proj[r].iter().zip(verma).fold(Q::zero(), |s, (a, x)| s + a * x))
        .collect()
}

fn enumerate_monos(
    negs: &[(u16, bool, usize, Weight)],
    k: usize,
    left: usize,
    cur: &mut Mono,
    w: Weight,
    out: &mut BTreeMap<Weight, Vec<Mono>>,
) {
    if k == negs.len() {
        out.entry(w).or_default().push(cur.clone());
        return;
    }
    let (g, odd, h, ref rw) = negs[k];
    let max = if odd { 1 } else { usize::MAX };
    let mut e = 0;
    let mut w = w;
    loop {
        enumerate_monos(negs, k + 1, left - e * h, cur, w.clone(), out);
        if e + 1 > max || (e + 1) * h > left {
            break;
        }
        e += 1;
        cur.push(g);
        w = &w + rw;
    }
    for _ in 0..e {
        cur.pop();
    }
}

/// E_g · (f^a v_Λ) in Verma coordinates.
pub fn act_mono(uea: &Uea, lambda: &Weight, g: u16, m: &Mono) -> Vector {
    let mut word = Vec::with_capacity(m.len() + 1);
    word.push(g);
    word.extend_from_slice(m);
    let e = uea.normal_order_word(&word);
    let mut out = Vector::new();
    'terms: for (t, c) in &e.terms {
        let mut neg = Vec::new();
        let mut coef = c.clone();
        for &x in t {
            match uea.class[x as usize] {
                Class::Negative => neg.push(x),
                Class::Cartan => coef *= lambda.coord(uea.gens[x as usize].0),
                Class::Positive => continue 'terms,
            }
        }
        vadd(&mut out, neg, coef);
    }
    out
}

pub fn act_vector(uea: &Uea, lambda: &Weight, g: u16, v: &Vector, sign: &Q) -> Vector {
    let mut out = Vector::new();
    for (m, c) in v {
        for (m2, c2) in act_mono(uea, lambda, g, m) {
            vadd(&mut out, m2, c * &c2 * sign);
        }
    }
    out
}

/// ⟨f^a v, f^b v⟩ = χ_Λ(ω(f^b) f^a).
pub fn verma_gram(uea: &Uea, lambda: &Weight, monos: &[Mono]) -> Mat {
    let d = &uea.datum;
    let n = monos.len();
    let mut g = zeros(n, n);
    for (bi, b) in monos.iter().enumerate() {
        for (ai, a) in monos.iter().enumerate() {
            if ai < bi {
                continue;
            }
            let mut v = Vector::new();
            v.insert(a.clone(), Q::one());
            for &letter in b {
                let (u, s) = omega_unit(d, uea.gens[letter as usize]);
                v = act_vector(uea, lambda, uea.gen(u), &v, &q(s as i64));
                if v.is_empty() {
                    break;
                }
            }
            let x = v.get(&vec![]).cloned().unwrap_or_else(Q::zero);
            g[ai][bi] = x.clone();
            g[bi][ai] = x;
        }
    }
    g
}

fn mono_parity(uea: &Uea, m: &Mono) -> u8 {
    (m.iter().filter(|&&g| uea.odd[g as usize]).count() % 2) as u8
}

fn build_block(uea: &Uea, lambda: &Weight, kind: Kind, w: Weight, h: usize, monos: Vec<Mono>) -> Option<ModBlock> {
    let g = verma_gram(uea, lambda, &monos);
    let n = monos.len();
    let (pivots, proj, gram) = if kind.is_simple() {
        let p = independent_rows(&g, n);
        if p.is_empty() {
            return None;
        }
        let gpp: Mat = p.iter().map(|&i| p.iter().map(|&j| g[i][j].clone()).collect()).collect();
        let gp: Mat = p.iter().map(|&i| g[i].clone()).collect();
        let inv = inverse(&gpp).expect("principal submatrix on a row basis is invertible");
        let proj = matmul(&inv, &gp, p.len(), n);
        (p, proj, gpp)
    } else {
        ((0..n).collect(), identity(n), g.clone())
    };
    let parity = pivots.iter().map(|&i| mono_parity(uea, &monos[i])).collect();
    Some(ModBlock { weight: w, height: h, monos, verma_gram: g, pivots, proj, gram, parity })
}

pub fn verma_truncation(uea: Arc<Uea>, lambda: &Weight, n: usize) -> Result<TruncatedModule, ModuleError> {
    TruncatedModule::build(uea, lambda, n, Kind::Verma)
}

pub fn simple_truncation(uea: Arc<Uea>, lambda: &Weight, n: usize) -> Result<TruncatedModule, ModuleError> {
    TruncatedModule::build(uea, lambda, n, Kind::Simple)
}

pub fn gram_block(m: &TruncatedModule, w: &Weight) -> Result<crate::exactla::SparseRationalMatrix, ModuleError> {
    let b = m.block(w).ok_or_else(|| ModuleError::UnknownBlock(w.to_string()))?;
    Ok(crate::exactla::SparseRationalMatrix::from_dense(&b.gram, b.dim()))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum UnitarityVerdict {
    CertifiedUpTo { height: usize },
    RefutedAt { at_weight: String, height: usize, witness: Vec<(String, String)>, norm: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitarityCertificate {
    pub weight: String,
    pub truncation: usize,
    #[serde(flatten)]
    pub verdict: UnitarityVerdict,
    /// even-simple module L₀(Λ) positive up to the same height
    pub even_part_positive: bool,
    pub blocks_checked: usize,
}

impl UnitarityCertificate {
    pub fn certified(&self) -> bool {
        matches!(self.verdict, UnitarityVerdict::CertifiedUpTo { .. })
    }
}

pub fn mono_label(uea: &Uea, m: &Mono) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|&g| {
            let (i, j) = uea.gens[g as usize];
            format!("E{}{}", i + 1, j + 1)
        })
        .collect::<Vec<_>>()
        .join("·")
}

/// First block (by height, then weight) whose quotient Gram is not positive definite.
fn first_indefinite(m: &TruncatedModule) -> Option<(&ModBlock, Vec<Q>, Q)> {
    let mut order: Vec<&ModBlock> = m.blocks.values().collect();
    order.sort_by(|a, b| (a.height, &a.weight).cmp(&(b.height, &b.weight)));
    for b in order {
        let cert = definiteness(&b.gram).expect("Gram blocks are symmetric");
        if cert.is_positive_definite() {
            continue;
        }
        let w = match cert.witness {
            Some(w) => w,
            // semidefinite quotient Gram cannot happen; report the kernel vector
            None => kernel_basis(&b.gram, b.dim()).remove(0),
        };
        let norm = crate::exactla::quad_form(&b.gram, &w);
        return Some((b, w, norm));
    }
    None
}

pub fn certify_unitarity(uea: Arc<Uea>, lambda: &Weight, n: usize) -> Result<UnitarityCertificate, ModuleError> {
    let l = simple_truncation(uea.clone(), lambda, n)?;
    let even = TruncatedModule::build(uea.clone(), lambda, n, Kind::EvenSimple)?;
    let even_part_positive = first_indefinite(&even).is_none();
    let verdict = match first_indefinite(&l) {
        None => UnitarityVerdict::CertifiedUpTo { height: n },
        Some((b, w, norm)) => UnitarityVerdict::RefutedAt {
            at_weight: b.weight.to_string(),
            height: b.height,
            witness: b
                .pivots
                .iter()
                .zip(&w)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&i, c)| (mono_label(&uea, &b.monos[i]), fmt_q(c)))
                .collect(),
            norm: fmt_q(&norm),
        },
    };
    Ok(UnitarityCertificate {
        weight: lambda.to_string(),
        truncation: n,
        verdict,
        even_part_positive,
        blocks_checked: l.blocks.len(),
    })
}

/// F^μ for compact-dominant μ, as a character of the finite-dimensional k-module
/// (truncated at `n`).
pub fn compact_character(uea: Arc<Uea>, mu: &Weight, n: usize) -> Result<VirtualCharacter, ModuleError> {
    Ok(TruncatedModule::build(uea, mu, n, Kind::CompactSimple)?.character())
}

/// μ dominant integral for Δ_c⁺.
pub fn is_compact_dominant(d: &RootDatum, mu: &Weight) -> bool {
    d.compact_pos.iter().all(|r| {
        let x = d.pairing(mu, &r.weight);
        let x = if r.unit.0 >= d.m { -x } else { x };
        x.is_integer() && !x.is_negative()
    })
}
