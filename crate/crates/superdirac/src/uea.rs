//! gl(m|n) on matrix units, PBW straightening in U(g), the anti-involution
//! ω₍₋,₊₎, Harish-Chandra projection, Casimirs and the Shapovalov pairing.
//!
//! The engine works in gl(m|n); sl-weights are gl-weights and the identity
//! acts by the sum of all coordinates (zero when m = n).

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::exactla::{q, Q};
use crate::weights::{Parity, RootDatum, Weight};

pub type Unit = (usize, usize);

/// [E_ij, E_kl] = δ_jk E_il − (−1)^{|E_ij||E_kl|} δ_li E_kj
pub fn bracket_units(d: &RootDatum, a: Unit, b: Unit) -> Vec<(Unit, Q)> {
    let (i, j) = a;
    let (k, l) = b;
    let sign = if d.is_odd_index_pair(i, j) && d.is_odd_index_pair(k, l) { -1 } else { 1 };
    let mut out: Vec<(Unit, Q)> = Vec::new();
    if j == k {
        out.push(((i, l), Q::one()));
    }
    if l == i {
        let c = q(-sign);
        if let Some(e) = out.iter_mut().find(|(u, _)| *u == (k, j)) {
            e.1 += c;
        } else {
            out.push(((k, j), c));
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

pub fn unit_parity(d: &RootDatum, u: Unit) -> Parity {
    if d.is_odd_index_pair(u.0, u.1) { Parity::Odd } else { Parity::Even }
}

/// s = (1^p, (−1)^q, (−1)^n); ω(E_ij) = s_i s_j E_ji.
pub fn omega_sign(d: &RootDatum, i: usize) -> i32 {
    if i < d.p { 1 } else { -1 }
}

pub fn omega_unit(d: &RootDatum, u: Unit) -> (Unit, i32) {
    ((u.1, u.0), omega_sign(d, u.0) * omega_sign(d, u.1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Negative,
    Cartan,
    Positive,
}

pub type Mono = Vec<u16>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UEAElement {
    pub terms: BTreeMap<Mono, Q>,
}

impl UEAElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Q::one())
    }

    pub fn scalar(c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(vec![], c);
        e
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, o: &UEAElement, c: &Q) {
        for (m, x) in &o.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }
}

/// U(gl(m|n)) with the PBW order negative < Cartan < positive.
pub struct Uea {
    pub datum: RootDatum,
    pub gens: Vec<Unit>,
    pub class: Vec<Class>,
    pub odd: Vec<bool>,
    index: HashMap<Unit, u16>,
    memo: Mutex<HashMap<Mono, UEAElement>>,
}

impl Uea {
    pub fn new(datum: &RootDatum) -> Self {
        let big = datum.dim();
        // positive root units in root order, mirrored for the negatives
        let mut pos_units: Vec<Unit> = datum
            .even_pos
            .iter()
            .chain(datum.odd_pos.iter())
            .map(|r| r.unit)
            .collect();
        pos_units.sort_by_key(|&(i, j)| {
            let w = datum.unit_root(i, j);
            (datum.height(&w), w)
        });
        let mut gens = Vec::new();
        let mut class = Vec::new();
        for &(i, j) in &pos_units {
            gens.push((j, i));
            class.push(Class::Negative);
        }
        for a in 0..big {
            gens.push((a, a));
            class.push(Class::Cartan);
        }
        for &u in &pos_units {
            gens.push(u);
            class.push(Class::Positive);
        }
        let odd = gens.iter().map(|&(i, j)| datum.is_odd_index_pair(i, j)).collect();
        let index = gens.iter().enumerate().map(|(k, &u)| (u, k as u16)).collect();
        Uea { datum: datum.clone(), gens, class, odd, index, memo: Mutex::new(HashMap::new()) }
    }

    pub fn gen(&self, u: Unit) -> u16 {
        self.index[&u]
    }

    pub fn unit_element(&self, u: Unit) -> UEAElement {
        let mut e = UEAElement::zero();
        e.add_term(vec![self.gen(u)], Q::one());
        e
    }

    pub fn supercommutator(&self, a: Unit, b: Unit) -> UEAElement {
        let mut e = UEAElement::zero();
        for (u, c) in bracket_units(&self.datum, a, b) {
            e.add_term(vec![self.gen(u)], c);
        }
        e
    }

    /// Normal form of an arbitrary word.
    pub fn normal_order_word(&self, w: &[u16]) -> UEAElement {
        if let Some(r) = self.memo.lock().unwrap().get(w) {
            return r.clone();
        }
        let r = self.straighten(w);
        self.memo.lock().unwrap().insert(w.to_vec(), r.clone());
        r
    }

    fn straighten(&self, w: &[u16]) -> UEAElement {
        let bad = (0..w.len().saturating_sub(1))
            .find(|&i| w[i] > w[i + 1] || (w[i] == w[i + 1] && self.odd[w[i] as usize]));
        let Some(i) = bad else {
            let mut e = UEAElement::zero();
            e.add_term(w.to_vec(), Q::one());
            return e;
        };
        let (a, b) = (w[i], w[i + 1]);
        let mut out = UEAElement::zero();
        if a == b {
            // odd root vector squared: ½[x,x] = 0 for off-diagonal units
            return out;
        }
        let sign = if self.odd[a as usize] && self.odd[b as usize] { -Q::one() } else { Q::one() };
        let mut swapped = w.to_vec();
        swapped.swap(i, i + 1);
        out.add_scaled(&self.normal_order_word(&swapped), &sign);
        for (u, c) in bracket_units(&self.datum, self.gens[a as usize], self.gens[b as usize]) {
            let mut nw = w[..i].to_vec();
            nw.push(self.gen(u));
            nw.extend_from_slice(&w[i + 2..]);
            out.add_scaled(&self.normal_order_word(&nw), &c);
        }
        out
    }

    pub fn normal_order(&self, x: &UEAElement) -> UEAElement {
        let mut out = UEAElement::zero();
        for (m, c) in &x.terms {
            out.add_scaled(&self.normal_order_word(m), c);
        }
        out
    }

    pub fn mul(&self, x: &UEAElement, y: &UEAElement) -> UEAElement {
        let mut out = UEAElement::zero();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_scaled(&self.normal_order_word(&w), &(ca * cb));
            }
        }
        out
    }

    pub fn omega(&self, x: &UEAElement) -> UEAElement {
        let mut out = UEAElement::zero();
        for (m, c) in &x.terms {
            let mut sign = 1;
            let mut w = Vec::with_capacity(m.len());
            for &g in m.iter().rev() {
                let (u, s) = omega_unit(&self.datum, self.gens[g as usize]);
                sign *= s;
                w.push(self.gen(u));
            }
            out.add_scaled(&self.normal_order_word(&w), &(c * q(sign as i64)));
        }
        out
    }

    pub fn hc_project(&self, x: &UEAElement) -> UEAElement {
        let x = self.normal_order(x);
        let mut out = UEAElement::zero();
        for (m, c) in &x.terms {
            if m.iter().all(|&g| self.class[g as usize] == Class::Cartan) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Evaluate p ∈ U(h) at λ: E_aa ↦ λ_a.
    pub fn evaluate_at(&self, p: &UEAElement, l: &Weight) -> Q {
        let mut s = Q::zero();
        for (m, c) in &p.terms {
            let mut t = c.clone();
            for &g in m {
                let (a, b) = self.gens[g as usize];
                assert_eq!(a, b, "evaluate_at needs an element of U(h)");
                t *= l.coord(a);
            }
            s += t;
        }
        s
    }

    /// Σ s_j E_ij E_ji over all (even) units: acts on L(Λ) by (Λ+2ρ,Λ),
    /// resp. on L₀(Λ) by (Λ+2ρ₀,Λ).
    pub fn casimir(&self, even_only: bool) -> UEAElement {
        let big = self.datum.dim();
        let mut out = UEAElement::zero();
        for i in 0..big {
            for j in 0..big {
                if even_only && self.datum.is_odd_index_pair(i, j) {
                    continue;
                }
                let w = vec![self.gen((i, j)), self.gen((j, i))];
                out.add_scaled(&self.normal_order_word(&w), &q(self.datum.str_sign(j) as i64));
            }
        }
        out
    }

    /// (X,Y)_Λ = χ̃_Λ(ω(Y)·X); the placement of ω(Y) on the left is what makes
    /// the pairing non-degenerate on U(n⁻).
    pub fn shapovalov_pairing(&self, x: &UEAElement, y: &UEAElement, l: &Weight) -> Q {
        let p = self.hc_project(&self.mul(&self.omega(y), x));
        self.evaluate_at(&p, l)
    }

    pub fn element_weight(&self, m: &Mono) -> Weight {
        let mut w = self.datum.zero();
        for &g in m {
            let (i, j) = self.gens[g as usize];
            w = &w + &self.datum.unit_root(i, j);
        }
        w
    }
}

/// B(X,Y) = −½ str(XY) on matrix units; B(∂_k, x_l) = ½δ_kl.
pub fn form_b(d: &RootDatum, a: Unit, b: Unit) -> Q {
    if a.1 == b.0 && a.0 == b.1 {
        crate::exactla::qf(-(d.str_sign(a.0) as i64), 2)
    } else {
        Q::zero()
    }
}

/// str(XY) for matrix units.
pub fn str_form(d: &RootDatum, a: Unit, b: Unit) -> Q {
    if a.1 == b.0 && a.0 == b.1 { q(d.str_sign(a.0) as i64) } else { Q::zero() }
}
