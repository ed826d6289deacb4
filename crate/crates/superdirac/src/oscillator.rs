//! Weyl algebra W(g₁̄), oscillator module ℂ[x₁..x_mn], the embedding α and the
//! Bargmann–Fock form.
//!
//! ∂_k acts as d/dx_k, so [∂_k, x_l]_W = δ_kl = 2B(∂_k, x_l).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactla::{q, qf, Q};
use crate::uea::{bracket_units, form_b, Unit};
use crate::weights::{RootDatum, Weight};

pub type Exps = Vec<u8>;

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * BigInt::from(b))
}

fn binom(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Exps, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: Exps) -> Self {
        let mut p = Self::zero();
        p.add_term(a, Q::one());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars])
    }

    pub fn add_term(&mut self, a: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(a.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn add_scaled(&mut self, o: &Poly, c: &Q) {
        for (a, x) in &o.terms {
            self.add_term(a.clone(), x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// x^a ∂^b, all x's to the left.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeylElement {
    pub terms: BTreeMap<(Exps, Exps), Q>,
    pub nvars: usize,
}

impl WeylElement {
    pub fn zero(nvars: usize) -> Self {
        WeylElement { terms: BTreeMap::new(), nvars }
    }

    pub fn scalar(nvars: usize, c: Q) -> Self {
        let mut w = Self::zero(nvars);
        w.add_term(vec![0; nvars], vec![0; nvars], c);
        w
    }

    pub fn x(nvars: usize, k: usize) -> Self {
        let mut a = vec![0; nvars];
        a[k] = 1;
        let mut w = Self::zero(nvars);
        w.add_term(a, vec![0; nvars], Q::one());
        w
    }

    pub fn d(nvars: usize, k: usize) -> Self {
        let mut b = vec![0; nvars];
        b[k] = 1;
        let mut w = Self::zero(nvars);
        w.add_term(vec![0; nvars], b, Q::one());
        w
    }

    pub fn add_term(&mut self, a: Exps, b: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, o: &WeylElement, c: &Q) {
        for ((a, b), x) in &o.terms {
            self.add_term(a.clone(), b.clone(), x * c);
        }
    }

    pub fn mul(&self, o: &WeylElement) -> WeylElement {
        let n = self.nvars;
        let mut out = WeylElement::zero(n);
        for ((a, b), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                // ∂^b x^{a2} = Σ_j Π_k C(b_k,j_k) C(a2_k,j_k) j_k! x^{a2−j} ∂^{b−j}
                let mut partial: Vec<(Exps, Exps, BigInt)> = vec![(a.clone(), b2.clone(), BigInt::one())];
                for k in 0..n {
                    let mut next = Vec::new();
                    let top = b[k].min(a2[k]);
                    for (xa, db, c) in &partial {
                        for j in 0..=top {
                            let coef = binom(b[k] as u32, j as u32) * binom(a2[k] as u32, j as u32) * factorial(j as u32);
                            let mut xa2 = xa.clone();
                            xa2[k] += a2[k] - j;
                            let mut db2 = db.clone();
                            db2[k] += b[k] - j;
                            next.push((xa2, db2, c * coef));
                        }
                    }
                    partial = next;
                }
                for (xa, db, c) in partial {
                    out.add_term(xa, db, Q::from_integer(c) * c1 * c2);
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &WeylElement) -> WeylElement {
        let mut r = self.mul(o);
        r.add_scaled(&o.mul(self), &-Q::one());
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// (x-degree, ∂-degree) pairs present.
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.terms
            .keys()
            .map(|(a, b)| (a.iter().map(|&x| x as usize).sum(), b.iter().map(|&x| x as usize).sum()))
            .collect()
    }
}

pub fn weyl_apply(w: &WeylElement, p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for ((a, b), c) in &w.terms {
        for (e, pc) in &p.terms {
            if b.iter().zip(e).any(|(bk, ek)| bk > ek) {
                continue;
            }
            let mut coef = BigInt::one();
            let mut ne = e.clone();
            for k in 0..e.len() {
                for t in 0..b[k] {
                    coef *= BigInt::from(e[k] - t);
                }
                ne[k] = e[k] - b[k] + a[k];
            }
            out.add_term(ne, Q::from_integer(coef) * c * pc);
        }
    }
    out
}

/// ⟨x^p, x^q⟩ = Π p_k! if p = q, else 0.
pub fn bargmann_fock(p: &Poly, r: &Poly) -> Q {
    let mut s = Q::zero();
    for (a, c) in &p.terms {
        if let Some(c2) = r.terms.get(a) {
            let f = a.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x as u32));
            s += Q::from_integer(f) * c * c2;
        }
    }
    s
}

pub fn monomial_bf(a: &Exps) -> Q {
    Q::from_integer(a.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x as u32)))
}

/// Odd element in the ∂/x basis: coefficient vectors (on x_j, on ∂_j).
fn odd_coords(d: &RootDatum, u: Unit, c: &Q) -> (Vec<Q>, Vec<Q>) {
    let n = d.odd.len();
    let mut xs = vec![Q::zero(); n];
    let mut ds = vec![Q::zero(); n];
    for (j, p) in d.odd.iter().enumerate() {
        if p.x_unit == u {
            xs[j] += c * q(p.x_sign as i64);
        }
        if p.d_unit == u {
            ds[j] += c * q(p.d_sign as i64);
        }
    }
    (xs, ds)
}

fn bracket_in_odd(d: &RootDatum, x: Unit, y: Unit, ysign: i32) -> (Vec<Q>, Vec<Q>) {
    let n = d.odd.len();
    let mut xs = vec![Q::zero(); n];
    let mut ds = vec![Q::zero(); n];
    for (u, c) in bracket_units(d, x, y) {
        let (a, b) = odd_coords(d, u, &(c * q(ysign as i64)));
        for j in 0..n {
            xs[j] += &a[j];
            ds[j] += &b[j];
        }
    }
    (xs, ds)
}

/// α(X) for an even matrix unit X, solved from [α(X), w]_W = [X, w] on the
/// generators and symmetrized (x_i∂_j ↦ x_i∂_j + ½δ_ij).
pub fn alpha_embed(d: &RootDatum, xu: Unit) -> Result<WeylElement, String> {
    if d.is_odd_index_pair(xu.0, xu.1) {
        return Err(format!("E{}{} is odd", xu.0 + 1, xu.1 + 1));
    }
    let n = d.odd.len();
    let mut out = WeylElement::zero(n);
    let mut trace = Q::zero();
    for (l, p) in d.odd.iter().enumerate() {
        // [X, x_l] = Σ a_jl x_j + Σ b_jl ∂_j
        let (a, b) = bracket_in_odd(d, xu, p.x_unit, p.x_sign);
        for j in 0..n {
            if !a[j].is_zero() {
                let mut e = vec![0u8; n];
                e[j] = 1;
                let mut f = vec![0u8; n];
                f[l] = 1;
                out.add_term(e, f, a[j].clone());
                if j == l {
                    trace += &a[j];
                }
            }
            if !b[j].is_zero() {
                // ½ b_jl ∂_l ∂_j, summed over ordered pairs it doubles on the symmetric part
                let mut f = vec![0u8; n];
                f[l] += 1;
                f[j] += 1;
                out.add_term(vec![0; n], f, &b[j] * qf(1, 2));
            }
        }
        // [X, ∂_l] = Σ c_jl x_j + ...  gives −½ c_jl x_l x_j
        let (c, _) = bracket_in_odd(d, xu, p.d_unit, p.d_sign);
        for j in 0..n {
            if !c[j].is_zero() {
                let mut e = vec![0u8; n];
                e[l] += 1;
                e[j] += 1;
                out.add_term(e, vec![0; n], &c[j] * qf(-1, 2));
            }
        }
    }
    out.add_term(vec![0; n], vec![0; n], trace * qf(1, 2));
    Ok(out)
}

/// The four-term formula with B = −½ str:
/// Σ B(X,[∂_k,∂_j]) x_k x_j + B(X,[x_k,x_j]) ∂_k∂_j − 2B(X,[x_k,∂_j]) x_j∂_k − Σ B(X,[∂_l,x_l]).
pub fn alpha_formula(d: &RootDatum, xu: Unit) -> WeylElement {
    let n = d.odd.len();
    let mut out = WeylElement::zero(n);
    let bx = |u: Unit, sign: i32, v: Unit, sign2: i32| -> Q {
        let mut s = Q::zero();
        for (w, c) in bracket_units(d, u, v) {
            s += form_b(d, xu, w) * c;
        }
        s * q((sign * sign2) as i64)
    };
    for (k, pk) in d.odd.iter().enumerate() {
        for (j, pj) in d.odd.iter().enumerate() {
            let mut e = vec![0u8; n];
            e[k] += 1;
            e[j] += 1;
            out.add_term(e.clone(), vec![0; n], bx(pk.d_unit, pk.d_sign, pj.d_unit, pj.d_sign));
            out.add_term(vec![0; n], e, bx(pk.x_unit, pk.x_sign, pj.x_unit, pj.x_sign));
            let mut xa = vec![0u8; n];
            xa[j] = 1;
            let mut db = vec![0u8; n];
            db[k] = 1;
            out.add_term(xa, db, bx(pk.x_unit, pk.x_sign, pj.d_unit, pj.d_sign) * q(-2));
        }
        out.add_term(vec![0; n], vec![0; n], -bx(pk.d_unit, pk.d_sign, pk.x_unit, pk.x_sign));
    }
    out
}

/// Oscillator weight of x^a: −ρ₁ − Σ a_k β_k.
pub fn monomial_weight(d: &RootDatum, a: &Exps) -> Weight {
    let mut w = -&d.rho1;
    for (k, &e) in a.iter().enumerate() {
        if e > 0 {
            w = &w - &d.odd[k].beta.scale(&q(e as i64));
        }
    }
    w
}

/// ch M(g₁̄) = Σ e^{−ρ₁ − Σ a_k β_k} over monomials of height ≤ `max_height`.
pub fn oscillator_character(d: &RootDatum, max_height: usize) -> crate::modules::VirtualCharacter {
    let mut c = crate::modules::VirtualCharacter::new();
    for a in monomials_up_to_height(d, max_height) {
        c.add(monomial_weight(d, &a), 1);
    }
    c
}

/// All exponent vectors with Σ a_k ht(β_k) ≤ max_height, in a fixed order.
pub fn monomials_up_to_height(d: &RootDatum, max_height: usize) -> Vec<Exps> {
    let hts: Vec<usize> = d.odd.iter().map(|p| d.height_usize(&p.beta).unwrap()).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u8; hts.len()];
    fn rec(k: usize, left: usize, hts: &[usize], cur: &mut Exps, out: &mut Vec<Exps>) {
        if k == hts.len() {
            out.push(cur.clone());
            return;
        }
        let mut e = 0;
        loop {
            cur[k] = e as u8;
            rec(k + 1, left - e * hts[k], hts, cur, out);
            if (e + 1) * hts[k] > left {
                break;
            }
            e += 1;
        }
        cur[k] = 0;
    }
    rec(0, max_height, &hts, &mut cur, &mut out);
    out.sort_by_key(|a| (a.iter().map(|&x| x as usize).sum::<usize>(), a.clone()));
    out
}

pub fn monomials_of_degree(nvars: usize, deg: usize) -> Vec<Exps> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; nvars];
    fn rec(k: usize, left: usize, cur: &mut Exps, out: &mut Vec<Exps>) {
        if k + 1 == cur.len() {
            cur[k] = left as u8;
            out.push(cur.clone());
            cur[k] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[k] = e as u8;
            rec(k + 1, left - e, cur, out);
        }
        cur[k] = 0;
    }
    if nvars == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    rec(0, deg, &mut cur, &mut out);
    out
}

/// Σ α(W_k)·α(W^k) over a str-dual basis of gl(m|n)₀̄, as a Weyl element.
pub fn alpha_casimir(d: &RootDatum) -> WeylElement {
    let big = d.dim();
    let n = d.odd.len();
    let mut out = WeylElement::zero(n);
    for i in 0..big {
        for j in 0..big {
            if d.is_odd_index_pair(i, j) {
                continue;
            }
            let a = alpha_embed(d, (i, j)).unwrap();
            let b = alpha_embed(d, (j, i)).unwrap();
            out.add_scaled(&a.mul(&b), &q(d.str_sign(j) as i64));
        }
    }
    out
}

/// The constant C measured on 1, in the normalization of B = −½str
/// (orthonormal for B means dual for −½str, which rescales the str-dual sum by −2).
#[derive(Clone, Debug, serde::Serialize)]
pub struct ConstantC {
    pub str_dual_scalar: String,
    pub b_dual_scalar: String,
    pub reference: String,
    pub matches_plus: bool,
    pub matches_minus: bool,
    pub is_constant_on_tested_vectors: bool,
}

pub fn measure_constant_c(d: &RootDatum, max_deg: usize) -> ConstantC {
    use crate::exactla::fmt_q;
    let cas = alpha_casimir(d);
    let n = d.odd.len();
    let one = Poly::one(n);
    let v = weyl_apply(&cas, &one);
    let s = v.terms.get(&vec![0u8; n]).cloned().unwrap_or_else(Q::zero);
    let mut constant = v.terms.len() <= 1;
    for deg in 1..=max_deg {
        for a in monomials_of_degree(n, deg) {
            let p = Poly::monomial(a.clone());
            let mut want = Poly::zero();
            want.add_scaled(&p, &s);
            if weyl_apply(&cas, &p) != want {
                constant = false;
            }
        }
    }
    let b_scalar = &s * q(-2);
    let reference = d.dirac_pairing(&(&d.rho1 - &d.rho0.scale(&q(2))), &d.rho1);
    ConstantC {
        str_dual_scalar: fmt_q(&s),
        b_dual_scalar: fmt_q(&b_scalar),
        reference: fmt_q(&reference),
        matches_plus: b_scalar == reference,
        matches_minus: b_scalar == -reference.clone(),
        is_constant_on_tested_vectors: constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_apply_examples() {
        let p = Poly::monomial(vec![2, 0]);
        let r = weyl_apply(&WeylElement::d(2, 0), &p);
        assert_eq!(r, {
            let mut t = Poly::zero();
            t.add_term(vec![1, 0], q(2));
            t
        });
        let x = WeylElement::x(2, 0);
        let dd = WeylElement::d(2, 0);
        let mut c = x.mul(&dd);
        c.add_scaled(&dd.mul(&x), &q(-1));
        let p = Poly::monomial(vec![3, 1]);
        let mut want = Poly::zero();
        want.add_scaled(&p, &q(-1));
        assert_eq!(weyl_apply(&c, &p), want);
        assert!(weyl_apply(&dd, &Poly::one(2)).is_zero());
    }

    #[test]
    fn bargmann_fock_examples() {
        assert_eq!(bargmann_fock(&Poly::monomial(vec![1, 1]), &Poly::monomial(vec![1, 1])), q(1));
        assert_eq!(bargmann_fock(&Poly::monomial(vec![2, 0]), &Poly::monomial(vec![2, 0])), q(2));
        assert_eq!(bargmann_fock(&Poly::monomial(vec![1, 0]), &Poly::monomial(vec![0, 1])), q(0));
    }

    #[test]
    fn alpha_on_cartan_gives_minus_rho1() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        for a in 0..3 {
            let al = alpha_embed(&d, (a, a)).unwrap();
            let v = weyl_apply(&al, &Poly::one(2));
            let want = -d.rho1.coord(a).clone();
            assert_eq!(v.terms.get(&vec![0, 0]).cloned().unwrap_or_else(Q::zero), want);
        }
    }

    #[test]
    fn alpha_matches_formula() {
        for (m, n, p, qq) in [(2, 1, 1, 1), (2, 3, 1, 1), (3, 1, 2, 1)] {
            let d = RootDatum::new(m, n, p, qq).unwrap();
            for i in 0..m + n {
                for j in 0..m + n {
                    if d.is_odd_index_pair(i, j) {
                        continue;
                    }
                    assert_eq!(alpha_embed(&d, (i, j)).unwrap(), alpha_formula(&d, (i, j)), "E{i}{j}");
                }
            }
        }
    }

    #[test]
    fn alpha_rejects_odd() {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        assert!(alpha_embed(&d, (0, 2)).is_err());
    }

    #[test]
    fn compact_alpha_has_no_pure_terms() {
        let d = RootDatum::new(3, 2, 2, 1).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if d.is_odd_index_pair(i, j) || !d.is_compact_unit(i, j) {
                    continue;
                }
                let a = alpha_embed(&d, (i, j)).unwrap();
                for (xd, dd) in a.shapes() {
                    assert!(!(xd == 2 && dd == 0) && !(xd == 0 && dd == 2));
                }
            }
        }
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(2, 2).len(), 3);
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        assert_eq!(monomials_up_to_height(&d, 1).len(), 3);
    }
}
