//! Root datum of sl(m|n) with the real form su(p,q|n).
//!
//! Indices `0..m` label ε₁..ε_m and `m..m+n` label δ₁..δ_n; the matrix unit
//! E_ij carries the root e_i − e_j.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{fmt_q, parse_q, q, qf, rank, Q};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DatumError {
    #[error("need m >= 1, n >= 1 and m + n > 2 (got m={m}, n={n})")]
    Rank { m: usize, n: usize },
    #[error("p + q must equal m (p={p}, q={q}, m={m})")]
    RealForm { p: usize, q: usize, m: usize },
    #[error("weight has {got_m}|{got_n} coordinates, datum needs {m}|{n}")]
    Shape { got_m: usize, got_n: usize, m: usize, n: usize },
    #[error("cannot parse weight '{0}' (expected a,b,...|c,...)")]
    Parse(String),
    #[error("sl(n|n) highest weights need sum of all coordinates = 0, got {0}")]
    CentralCharge(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Weight {
    pub eps: Vec<Q>,
    pub del: Vec<Q>,
}

impl Weight {
    pub fn zero(m: usize, n: usize) -> Self {
        Weight { eps: vec![Q::zero(); m], del: vec![Q::zero(); n] }
    }

    pub fn from_ints(eps: &[i64], del: &[i64]) -> Self {
        Weight { eps: eps.iter().map(|&x| q(x)).collect(), del: del.iter().map(|&x| q(x)).collect() }
    }

    /// e_a in gl indexing.
    pub fn unit(m: usize, n: usize, a: usize) -> Self {
        let mut w = Self::zero(m, n);
        *w.coord_mut(a) = Q::one();
        w
    }

    pub fn m(&self) -> usize {
        self.eps.len()
    }

    pub fn n(&self) -> usize {
        self.del.len()
    }

    pub fn coord(&self, a: usize) -> &Q {
        if a < self.m() { &self.eps[a] } else { &self.del[a - self.m()] }
    }

    pub fn coord_mut(&mut self, a: usize) -> &mut Q {
        let m = self.m();
        if a < m { &mut self.eps[a] } else { &mut self.del[a - m] }
    }

    pub fn coords(&self) -> impl Iterator<Item = &Q> {
        self.eps.iter().chain(self.del.iter())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Weight {
            eps: self.eps.iter().map(|x| x * c).collect(),
            del: self.del.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords().all(|x| x.is_zero())
    }

    pub fn total(&self) -> Q {
        self.coords().fold(Q::zero(), |a, b| a + b)
    }

    pub fn as_vec(&self) -> Vec<Q> {
        self.coords().cloned().collect()
    }

    /// Parse "a,b|c" for a datum of shape m|n.
    pub fn parse(s: &str, m: usize, n: usize) -> Result<Self, DatumError> {
        let w: Weight = s.parse()?;
        if w.m() != m || w.n() != n {
            return Err(DatumError::Shape { got_m: w.m(), got_n: w.n(), m, n });
        }
        Ok(w)
    }
}

impl FromStr for Weight {
    type Err = DatumError;
    fn from_str(s: &str) -> Result<Self, DatumError> {
        let err = || DatumError::Parse(s.to_string());
        let (a, b) = s.split_once('|').ok_or_else(err)?;
        let side = |t: &str| -> Result<Vec<Q>, DatumError> {
            let t = t.trim();
            if t.is_empty() {
                return Ok(vec![]);
            }
            t.split(',').map(|x| parse_q(x).ok_or_else(err)).collect()
        };
        Ok(Weight { eps: side(a)?, del: side(b)? })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.eps.iter().map(fmt_q).collect();
        let d: Vec<String> = self.del.iter().map(fmt_q).collect();
        write!(f, "{}|{}", e.join(","), d.join(","))
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight {
            eps: self.eps.iter().zip(&o.eps).map(|(a, b)| a + b).collect(),
            del: self.del.iter().zip(&o.del).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight {
            eps: self.eps.iter().zip(&o.eps).map(|(a, b)| a - b).collect(),
            del: self.del.iter().zip(&o.del).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scale(&-Q::one())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Compactness {
    Compact,
    Noncompact,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Root {
    pub weight: Weight,
    pub parity: Parity,
    pub compactness: Compactness,
    /// matrix unit E_ij spanning the root space
    #[serde(skip)]
    pub unit: (usize, usize),
}

/// One row of the odd basis table: ∂_k = sign·E_ab, x_k = sign·E_cd.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddPair {
    pub k: usize,
    pub d_unit: (usize, usize),
    pub d_sign: i32,
    pub x_unit: (usize, usize),
    pub x_sign: i32,
    /// root of ∂_k (always positive for the fixed system)
    pub beta: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
}

impl WeylElement {
    pub fn identity(m: usize, n: usize) -> Self {
        WeylElement { sigma: (0..m).collect(), tau: (0..n).collect() }
    }

    pub fn swap(m: usize, n: usize, a: usize, b: usize) -> Self {
        let mut w = Self::identity(m, n);
        if a < m && b < m {
            w.sigma.swap(a, b);
        } else if a >= m && b >= m {
            w.tau.swap(a - m, b - m);
        } else {
            panic!("reflection must stay inside one block");
        }
        w
    }

    /// (wλ)_{σ(i)} = λ_i
    pub fn act(&self, l: &Weight) -> Weight {
        let mut out = l.clone();
        for (i, &s) in self.sigma.iter().enumerate() {
            out.eps[s] = l.eps[i].clone();
        }
        for (i, &t) in self.tau.iter().enumerate() {
            out.del[t] = l.del[i].clone();
        }
        out
    }

    pub fn compose(&self, o: &WeylElement) -> WeylElement {
        WeylElement {
            sigma: o.sigma.iter().map(|&i| self.sigma[i]).collect(),
            tau: o.tau.iter().map(|&i| self.tau[i]).collect(),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut s = vec![0; self.sigma.len()];
        for (i, &x) in self.sigma.iter().enumerate() {
            s[x] = i;
        }
        let mut t = vec![0; self.tau.len()];
        for (i, &x) in self.tau.iter().enumerate() {
            t[x] = i;
        }
        WeylElement { sigma: s, tau: t }
    }

    pub fn all(m: usize, n: usize) -> Vec<WeylElement> {
        let mut out = Vec::new();
        for s in (0..m).permutations(m) {
            for t in (0..n).permutations(n) {
                out.push(WeylElement { sigma: s.clone(), tau: t });
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    Full,
    Even,
}

/// Which theorem suites make sense for a datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Support {
    Supported,
    CompactForm,
    /// m > n: outside the range the theory covers
    Unsupported,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub even_pos: Vec<Root>,
    pub odd_pos: Vec<Root>,
    pub compact_pos: Vec<Root>,
    pub noncompact_pos: Vec<Root>,
    pub rho0: Weight,
    pub rho1: Weight,
    pub rho: Weight,
    pub rho_c: Weight,
    pub rho_n: Weight,
    pub odd: Vec<OddPair>,
    /// position of each gl index in the ordering ε₁..ε_p, δ₁..δ_n, ε_{p+1}..ε_m
    pub pos: Vec<usize>,
    pub support: Support,
}

impl RootDatum {
    pub fn new(m: usize, n: usize, p: usize, q: usize) -> Result<Self, DatumError> {
        if m < 1 || n < 1 || m + n <= 2 {
            return Err(DatumError::Rank { m, n });
        }
        if p + q != m {
            return Err(DatumError::RealForm { p, q, m });
        }
        let big = m + n;
        let pos: Vec<usize> = (0..big)
            .map(|a| if a < p { a } else if a >= m { p + (a - m) } else { n + a })
            .collect();
        let root_of = |i: usize, j: usize| &Weight::unit(m, n, i) - &Weight::unit(m, n, j);
        let is_odd = |i: usize, j: usize| (i < m) != (j < m);
        let is_compact = |i: usize, j: usize| {
            (i >= m && j >= m) || (i < p && j < p) || (i >= p && i < m && j >= p && j < m)
        };
        let mut even_pos = Vec::new();
        let mut odd_pos = Vec::new();
        for i in 0..big {
            for j in 0..big {
                if i == j || pos[i] >= pos[j] {
                    continue;
                }
                let r = Root {
                    weight: root_of(i, j),
                    parity: if is_odd(i, j) { Parity::Odd } else { Parity::Even },
                    compactness: if is_odd(i, j) {
                        Compactness::NotApplicable
                    } else if is_compact(i, j) {
                        Compactness::Compact
                    } else {
                        Compactness::Noncompact
                    },
                    unit: (i, j),
                };
                if is_odd(i, j) { odd_pos.push(r) } else { even_pos.push(r) }
            }
        }
        let mut d = RootDatum {
            m,
            n,
            p,
            q,
            even_pos,
            odd_pos,
            compact_pos: vec![],
            noncompact_pos: vec![],
            rho0: Weight::zero(m, n),
            rho1: Weight::zero(m, n),
            rho: Weight::zero(m, n),
            rho_c: Weight::zero(m, n),
            rho_n: Weight::zero(m, n),
            odd: vec![],
            pos,
            support: if p == 0 || q == 0 {
                Support::CompactForm
            } else if m > n {
                Support::Unsupported
            } else {
                Support::Supported
            },
        };
        d.sort_roots();
        d.compact_pos = d.even_pos.iter().filter(|r| r.compactness == Compactness::Compact).cloned().collect();
        d.noncompact_pos = d.even_pos.iter().filter(|r| r.compactness == Compactness::Noncompact).cloned().collect();
        let half = qf(1, 2);
        let sum = |rs: &[Root]| rs.iter().fold(Weight::zero(m, n), |a, r| &a + &r.weight).scale(&half);
        d.rho0 = sum(&d.even_pos);
        d.rho1 = sum(&d.odd_pos);
        d.rho = &d.rho0 - &d.rho1;
        d.rho_c = sum(&d.compact_pos);
        d.rho_n = sum(&d.noncompact_pos);
        for l in 0..m {
            for s in 0..n {
                let k = l * n + s + 1;
                let c = m + s;
                let pair = if l < p {
                    OddPair { k, d_unit: (l, c), d_sign: 1, x_unit: (c, l), x_sign: -1, beta: root_of(l, c) }
                } else {
                    OddPair { k, d_unit: (c, l), d_sign: 1, x_unit: (l, c), x_sign: 1, beta: root_of(c, l) }
                };
                d.odd.push(pair);
            }
        }
        Ok(d)
    }

    fn sort_roots(&mut self) {
        let mut e = std::mem::take(&mut self.even_pos);
        let mut o = std::mem::take(&mut self.odd_pos);
        e.sort_by_key(|r| (self.height(&r.weight), r.weight.clone()));
        o.sort_by_key(|r| (self.height(&r.weight), r.weight.clone()));
        self.even_pos = e;
        self.odd_pos = o;
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    pub fn zero(&self) -> Weight {
        Weight::zero(self.m, self.n)
    }

    pub fn unit_root(&self, i: usize, j: usize) -> Weight {
        &Weight::unit(self.m, self.n, i) - &Weight::unit(self.m, self.n, j)
    }

    pub fn is_odd_index_pair(&self, i: usize, j: usize) -> bool {
        (i < self.m) != (j < self.m)
    }

    /// sign of str(E_aa)
    pub fn str_sign(&self, a: usize) -> i32 {
        if a < self.m { 1 } else { -1 }
    }

    pub fn is_positive_unit(&self, i: usize, j: usize) -> bool {
        self.pos[i] < self.pos[j]
    }

    pub fn is_compact_unit(&self, i: usize, j: usize) -> bool {
        let (m, p) = (self.m, self.p);
        (i >= m && j >= m) || (i < p && j < p) || (i >= p && i < m && j >= p && j < m)
    }

    pub fn check_shape(&self, w: &Weight) -> Result<(), DatumError> {
        if w.m() != self.m || w.n() != self.n {
            return Err(DatumError::Shape { got_m: w.m(), got_n: w.n(), m: self.m, n: self.n });
        }
        Ok(())
    }

    /// Shape plus the m = n central-charge condition.
    pub fn check_highest_weight(&self, w: &Weight) -> Result<(), DatumError> {
        self.check_shape(w)?;
        if self.m == self.n && !w.total().is_zero() {
            return Err(DatumError::CentralCharge(fmt_q(&w.total())));
        }
        Ok(())
    }

    pub fn parse_weight(&self, s: &str) -> Result<Weight, DatumError> {
        Weight::parse(s, self.m, self.n)
    }

    /// (ε_i, ε_j) = δ_ij, (δ_i, δ_j) = −δ_ij.
    pub fn pairing(&self, a: &Weight, b: &Weight) -> Q {
        let e = a.eps.iter().zip(&b.eps).fold(Q::zero(), |s, (x, y)| s + x * y);
        let d = a.del.iter().zip(&b.del).fold(Q::zero(), |s, (x, y)| s + x * y);
        e - d
    }

    /// Form on h* dual to B = −½·str, i.e. −2 × `pairing`.
    /// Casimir scalars of the Dirac square are expressed in this form.
    pub fn dirac_pairing(&self, a: &Weight, b: &Weight) -> Q {
        self.pairing(a, b) * q(-2)
    }

    /// Additive height: sum of coefficients on the simple roots of the fixed positive system.
    pub fn height(&self, g: &Weight) -> Q {
        let big = self.dim();
        let mut by_pos = vec![Q::zero(); big];
        for a in 0..big {
            by_pos[self.pos[a]] = g.coord(a).clone();
        }
        let mut s = Q::zero();
        let mut h = Q::zero();
        for x in by_pos.iter().take(big - 1) {
            s += x;
            h += &s;
        }
        h
    }

    /// g ∈ ℤ₊[Δ⁺]
    pub fn in_positive_cone(&self, g: &Weight) -> bool {
        let big = self.dim();
        let mut by_pos = vec![Q::zero(); big];
        for a in 0..big {
            by_pos[self.pos[a]] = g.coord(a).clone();
        }
        let mut s = Q::zero();
        for x in &by_pos {
            s += x;
            if s.is_negative() || !s.is_integer() {
                return false;
            }
        }
        s.is_zero()
    }

    pub fn height_usize(&self, g: &Weight) -> Option<usize> {
        if !self.in_positive_cone(g) {
            return None;
        }
        let h = self.height(g);
        h.to_integer().try_into().ok()
    }

    pub fn dot_action(&self, w: &WeylElement, l: &Weight, shift: Shift) -> Weight {
        let r = match shift {
            Shift::Full => &self.rho,
            Shift::Even => &self.rho0,
        };
        &w.act(&(l + r)) - r
    }

    pub fn weyl_group(&self) -> Vec<WeylElement> {
        WeylElement::all(self.m, self.n)
    }

    pub fn atypicality_set(&self, l: &Weight) -> Vec<Root> {
        let lr = l + &self.rho;
        self.odd_pos.iter().filter(|a| self.pairing(&lr, &a.weight).is_zero()).cloned().collect()
    }

    /// μ + ρ = w(λ + ρ + Σ tᵢαᵢ) for some w and αᵢ ∈ A_λ.
    pub fn same_infinitesimal_character(&self, l: &Weight, mu: &Weight) -> bool {
        let atyp: Vec<Vec<Q>> = self.atypicality_set(l).iter().map(|a| a.weight.as_vec()).collect();
        let base = rank(&atyp, self.dim());
        let lr = l + &self.rho;
        let mr = mu + &self.rho;
        for w in self.weyl_group() {
            let diff = &w.inverse().act(&mr) - &lr;
            if diff.is_zero() {
                return true;
            }
            let mut rows = atyp.clone();
            rows.push(diff.as_vec());
            if rank(&rows, self.dim()) == base {
                return true;
            }
        }
        false
    }

    /// (Λ + ρ₀, β) < 0 for every non-compact positive root.
    pub fn harish_chandra_condition(&self, l: &Weight) -> bool {
        let s = l + &self.rho0;
        self.noncompact_pos.iter().all(|b| self.pairing(&s, &b.weight).is_negative())
    }

    /// Standard and minus-standard odd systems, for documentation output only.
    pub fn documented_odd_systems(&self) -> Vec<(&'static str, Vec<Weight>)> {
        let mut std = Vec::new();
        let mut minus = Vec::new();
        for i in 0..self.m {
            for s in 0..self.n {
                let r = self.unit_root(i, self.m + s);
                minus.push(-&r);
                std.push(r);
            }
        }
        let fixed = self.odd_pos.iter().map(|r| r.weight.clone()).collect();
        vec![("standard", std), ("minus-standard", minus), ("non-standard", fixed)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(e: &[i64], d: &[i64]) -> Weight {
        Weight::from_ints(e, d)
    }

    #[test]
    fn sl21_datum() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        assert_eq!(d.even_pos.len(), 1);
        assert_eq!(d.odd_pos.len(), 2);
        assert!(d.compact_pos.is_empty());
        assert_eq!(d.noncompact_pos[0].weight, w(&[1, -1], &[0]));
        let half = Weight { eps: vec![qf(1, 2), qf(-1, 2)], del: vec![q(0)] };
        assert_eq!(d.rho0, half);
        assert_eq!(d.rho1, half);
        assert!(d.rho.is_zero());
    }

    #[test]
    fn compact_form_has_no_noncompact_roots() {
        let d = RootDatum::new(2, 1, 2, 0).unwrap();
        assert!(d.noncompact_pos.is_empty());
        assert_eq!(d.support, Support::CompactForm);
    }

    #[test]
    fn rejects_bad_data() {
        assert_eq!(RootDatum::new(1, 1, 1, 0).unwrap_err(), DatumError::Rank { m: 1, n: 1 });
        assert!(matches!(RootDatum::new(2, 1, 1, 0), Err(DatumError::RealForm { .. })));
    }

    #[test]
    fn pairing_examples() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        let e1 = w(&[1, 0], &[0]);
        let d1 = w(&[0, 0], &[1]);
        assert_eq!(d.pairing(&e1, &e1), q(1));
        assert_eq!(d.pairing(&d1, &d1), q(-1));
        let b = &e1 - &d1;
        assert_eq!(d.pairing(&b, &b), q(0));
    }

    #[test]
    fn dot_action_examples() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        let s = WeylElement::swap(2, 1, 0, 1);
        assert_eq!(d.dot_action(&s, &d.zero(), Shift::Even), w(&[-1, 1], &[0]));
        assert_eq!(d.dot_action(&s, &d.zero(), Shift::Full), d.zero());
        let l = w(&[3, -1], &[2]);
        assert_eq!(d.dot_action(&WeylElement::identity(2, 1), &l, Shift::Full), l);
    }

    #[test]
    fn atypicality_examples() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        assert_eq!(d.atypicality_set(&d.zero()).len(), 2);
        let a = d.atypicality_set(&w(&[1, 0], &[0]));
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].weight, w(&[0, -1], &[1]));
        assert!(d.atypicality_set(&w(&[-2, 0], &[1])).is_empty());
    }

    #[test]
    fn linkage_examples() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        let l = w(&[2, -1], &[3]);
        assert!(d.same_infinitesimal_character(&l, &l));
        let s = WeylElement::swap(2, 1, 0, 1);
        assert!(d.same_infinitesimal_character(&l, &d.dot_action(&s, &l, Shift::Full)));
        let t = Weight { eps: vec![qf(3, 7), q(0)], del: vec![qf(-3, 7)] };
        assert!(d.same_infinitesimal_character(&d.zero(), &t));
        assert!(!d.same_infinitesimal_character(&w(&[-2, 0], &[1]), &w(&[-3, 0], &[1])));
    }

    #[test]
    fn harish_chandra_examples() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        assert!(!d.harish_chandra_condition(&d.zero()));
        assert!(d.harish_chandra_condition(&w(&[-2, 0], &[0])));
        let c = RootDatum::new(2, 1, 2, 0).unwrap();
        assert!(c.harish_chandra_condition(&w(&[5, 5], &[5])));
    }

    #[test]
    fn odd_table_matches_sl21() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        // ∂1=E13, ∂2=E32, x1=−E31, x2=E23 (0-based below)
        assert_eq!((d.odd[0].d_unit, d.odd[0].x_unit, d.odd[0].x_sign), ((0, 2), (2, 0), -1));
        assert_eq!((d.odd[1].d_unit, d.odd[1].x_unit, d.odd[1].x_sign), ((2, 1), (1, 2), 1));
        for p in &d.odd {
            assert!(d.in_positive_cone(&p.beta));
        }
    }

    #[test]
    fn weight_text_roundtrip() {
        let l: Weight = "1/2,-3|0".parse().unwrap();
        assert_eq!(l.to_string(), "1/2,-3|0");
        assert!(Weight::parse("1,2|", 2, 1).is_err());
        let d = RootDatum::new(2, 2, 1, 1).unwrap();
        assert!(d.check_highest_weight(&w(&[1, 0], &[0, 0])).is_err());
        assert!(d.check_highest_weight(&w(&[1, 0], &[0, -1])).is_ok());
    }

    #[test]
    fn heights() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        assert_eq!(d.height_usize(&w(&[1, -1], &[0])), Some(2));
        assert_eq!(d.height_usize(&w(&[1, 0], &[-1])), Some(1));
        assert_eq!(d.height_usize(&w(&[-1, 1], &[0])), None);
    }
}
