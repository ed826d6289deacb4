//! Diagonal-weight blocks of H ⊗ M(g₁̄) and the Dirac operator
//! D = 2Σ_k(∂_k ⊗ x_k − x_k ⊗ ∂_k) on them: D², Dirac cohomology, index,
//! anti-selfadjointness and the square audit.
//!
//! Oscillator monomials carry weight −ρ₁ − Σ a_k β_k, so a block of diagonal
//! weight ν = Λ − ρ₁ − γ pairs module weights Λ − γ₁ with monomials Σ a_k β_k = γ₂,
//! γ₁ + γ₂ = γ. Parity of a pair is the oscillator degree mod 2.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactla::{fmt_q, is_zero_mat, kernel_basis, mat_vec, matmul, q, rank, transpose, zeros, Mat, Q};
use crate::modules::{
    positive_units, simple_units, unit_weight, ModuleError, Sub, TruncatedModule, VirtualCharacter,
};
use crate::oscillator::{alpha_embed, monomial_bf, monomials_up_to_height, monomial_weight, Exps, WeylElement};
use crate::uea::Unit;
use crate::weights::{RootDatum, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pair {
    pub module_weight: Weight,
    pub module_index: usize,
    pub osc: Exps,
}

#[derive(Clone, Debug)]
pub struct DiracBlock {
    pub nu: Weight,
    pub height: usize,
    pub basis: Vec<Pair>,
    /// oscillator parity of each pair
    pub parity: Vec<u8>,
    pub d_p1: Mat,
    pub delta_p1: Mat,
    pub d_q2: Mat,
    pub delta_q2: Mat,
    pub dirac: Mat,
    pub gram: Mat,
}

impl DiracBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dirac_p1(&self) -> Mat {
        combo(&[(&self.d_p1, q(2)), (&self.delta_p1, q(-2))])
    }

    pub fn dirac_q2(&self) -> Mat {
        combo(&[(&self.d_q2, q(2)), (&self.delta_q2, q(-2))])
    }

    /// d = d^{p₁} − δ^{q₂}
    pub fn kostant_d(&self) -> Mat {
        combo(&[(&self.d_p1, q(1)), (&self.delta_q2, q(-1))])
    }

    pub fn square(&self) -> Mat {
        mul(&self.dirac, &self.dirac)
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i] == 0).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i] == 1).collect()
    }
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    if a.is_empty() {
        return vec![];
    }
    matmul(a, b, inner, cols)
}

fn combo(parts: &[(&Mat, Q)]) -> Mat {
    let n = parts[0].0.len();
    let mut out = zeros(n, n);
    for (m, c) in parts {
        for i in 0..n {
            for j in 0..n {
                if !m[i][j].is_zero() {
                    out[i][j] += &m[i][j] * c;
                }
            }
        }
    }
    out
}

fn sub_mat(a: &Mat, rows: &[usize], cols: &[usize]) -> Mat {
    rows.iter().map(|&r| cols.iter().map(|&c| a[r][c].clone()).collect()).collect()
}

fn column_basis(a: &Mat, rows: usize) -> Vec<Vec<Q>> {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let t: Mat = (0..cols).map(|c| (0..rows).map(|r| a[r][c].clone()).collect()).collect();
    let keep = crate::exactla::independent_rows(&t, rows);
    keep.into_iter().map(|i| t[i].clone()).collect()
}

/// dim(V ∩ ker R) for V given by a basis.
fn killed_dim(v: &[Vec<Q>], r: &Mat) -> usize {
    if v.is_empty() {
        return 0;
    }
    let imgs: Vec<Vec<Q>> = v.iter().map(|x| mat_vec(r, x)).collect();
    v.len() - rank(&imgs, r.len())
}

/// All blocks of H ⊗ M(g₁̄) with ht(Λ − ρ₁ − ν) ≤ N.
pub struct DiracComplex<'m> {
    pub module: &'m TruncatedModule,
    pub height: usize,
    pub blocks: BTreeMap<Weight, DiracBlock>,
    alpha: HashMap<Unit, WeylElement>,
    /// oscillator monomials with their weight and height
    osc: Vec<(Exps, Weight, usize)>,
}

impl<'m> DiracComplex<'m> {
    pub fn new(module: &'m TruncatedModule, height: usize) -> Result<Self, ModuleError> {
        if height > module.height {
            return Err(ModuleError::Outside(format!("Dirac height {height} exceeds module height {}", module.height)));
        }
        let d = module.datum();
        let top = &module.lambda - &d.rho1;
        let osc: Vec<(Exps, Weight, usize)> = monomials_up_to_height(d, height)
            .into_iter()
            .map(|a| {
                let w = monomial_weight(d, &a);
                let h = d.height_usize(&(&(-&w) - &d.rho1)).unwrap();
                (a, w, h)
            })
            .collect();
        let mut nus: Vec<Weight> = Vec::new();
        for (_, w, h2) in &osc {
            let g2 = &(-w) - &d.rho1;
            let h2 = *h2;
            for b in module.blocks.values() {
                if b.height + h2 <= height {
                    nus.push(&(&b.weight - &d.rho1) - &g2);
                }
            }
        }
        nus.sort();
        nus.dedup();
        let mut alpha = HashMap::new();
        for i in 0..d.dim() {
            for j in 0..d.dim() {
                if !d.is_odd_index_pair(i, j) {
                    alpha.insert((i, j), alpha_embed(d, (i, j)).unwrap());
                }
            }
        }
        let mut cx = DiracComplex { module, height, blocks: BTreeMap::new(), alpha, osc };
        let built: Result<Vec<DiracBlock>, ModuleError> = nus
            .par_iter()
            .map(|nu| {
                let h = d.height_usize(&(&top - nu)).unwrap();
                cx.assemble(nu, h)
            })
            .collect();
        cx.blocks = built?.into_iter().map(|b| (b.nu.clone(), b)).collect();
        Ok(cx)
    }

    pub fn datum(&self) -> &RootDatum {
        self.module.datum()
    }

    pub fn top(&self) -> Weight {
        &self.module.lambda - &self.datum().rho1
    }

    fn basis_of(&self, nu: &Weight, h: usize) -> Vec<Pair> {
        let m = self.module;
        let mut basis = Vec::new();
        for (a, aw, ah) in &self.osc {
            if *ah > h {
                continue;
            }
            let lw = nu - aw;
            let dim = m.dim_at(&lw);
            for i in 0..dim {
                basis.push(Pair { module_weight: lw.clone(), module_index: i, osc: a.clone() });
            }
        }
        basis.sort_by(|x, y| {
            (m.depth(&x.module_weight), &x.module_weight, x.module_index, &x.osc)
                .cmp(&(m.depth(&y.module_weight), &y.module_weight, y.module_index, &y.osc))
        });
        basis
    }

    pub fn assemble(&self, nu: &Weight, h: usize) -> Result<DiracBlock, ModuleError> {
        let d = self.datum();
        let m = self.module;
        let basis = self.basis_of(nu, h);
        let n = basis.len();
        let index: HashMap<&Pair, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let pn = d.p * d.n;
        let mut d_p1 = zeros(n, n);
        let mut delta_p1 = zeros(n, n);
        let mut d_q2 = zeros(n, n);
        let mut delta_q2 = zeros(n, n);
        for (col, pr) in basis.iter().enumerate() {
            for (k, od) in d.odd.iter().enumerate() {
                let (dm, xm) = if k < pn { (&mut d_p1, &mut delta_p1) } else { (&mut d_q2, &mut delta_q2) };
                // ∂_k ⊗ x_k
                let op = m.op(od.d_unit, &pr.module_weight)?;
                let to = &pr.module_weight + &od.beta;
                let mut osc = pr.osc.clone();
                osc[k] += 1;
                for (r, row) in op.iter().enumerate() {
                    let c = &row[pr.module_index];
                    if c.is_zero() {
                        continue;
                    }
                    let key = Pair { module_weight: to.clone(), module_index: r, osc: osc.clone() };
                    dm[index[&key]][col] += c * q(od.d_sign as i64);
                }
                // x_k ⊗ ∂_k
                if pr.osc[k] == 0 {
                    continue;
                }
                let op = m.op(od.x_unit, &pr.module_weight)?;
                let to = &pr.module_weight - &od.beta;
                let mut osc = pr.osc.clone();
                osc[k] -= 1;
                let mult = q(pr.osc[k] as i64 * od.x_sign as i64);
                for (r, row) in op.iter().enumerate() {
                    let c = &row[pr.module_index];
                    if c.is_zero() {
                        continue;
                    }
                    let key = Pair { module_weight: to.clone(), module_index: r, osc: osc.clone() };
                    xm[index[&key]][col] += c * &mult;
                }
            }
        }
        let dirac = combo(&[(&d_p1, q(2)), (&delta_p1, q(-2)), (&d_q2, q(2)), (&delta_q2, q(-2))]);
        let mut gram = zeros(n, n);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                if a.osc == b.osc && a.module_weight == b.module_weight {
                    let g = &m.block(&a.module_weight).unwrap().gram[a.module_index][b.module_index];
                    gram[i][j] = g * monomial_bf(&a.osc);
                }
            }
        }
        let parity = basis.iter().map(|p| (p.osc.iter().map(|&x| x as usize).sum::<usize>() % 2) as u8).collect();
        Ok(DiracBlock { nu: nu.clone(), height: h, basis, parity, d_p1, delta_p1, d_q2, delta_q2, dirac, gram })
    }

    /// X ⊗ 1 + 1 ⊗ α(X) from block ν to block ν + root(X), for even X.
    pub fn even_op(&self, x: Unit, nu: &Weight) -> Result<Mat, ModuleError> {
        let d = self.datum();
        let to = nu + &unit_weight(d, x);
        let src = self.blocks.get(nu).ok_or_else(|| ModuleError::UnknownBlock(nu.to_string()))?;
        let dst_basis: Vec<Pair> = match self.blocks.get(&to) {
            Some(b) => b.basis.clone(),
            None => {
                let depth = d.height_usize(&(&self.top() - &to));
                match depth {
                    None => return Ok(zeros(0, src.dim())),
                    Some(h) if h > self.height => return Err(ModuleError::Outside(to.to_string())),
                    Some(_) => vec![],
                }
            }
        };
        let index: HashMap<&Pair, usize> = dst_basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut out = zeros(dst_basis.len(), src.dim());
        let alpha = &self.alpha[&x];
        for (col, pr) in src.basis.iter().enumerate() {
            let op = self.module.op(x, &pr.module_weight)?;
            let to_m = &pr.module_weight + &unit_weight(d, x);
            for (r, row) in op.iter().enumerate() {
                let c = &row[pr.module_index];
                if !c.is_zero() {
                    let key = Pair { module_weight: to_m.clone(), module_index: r, osc: pr.osc.clone() };
                    out[index[&key]][col] += c;
                }
            }
            let img = crate::oscillator::weyl_apply(alpha, &crate::oscillator::Poly::monomial(pr.osc.clone()));
            for (e, c) in img.terms {
                let key = Pair { module_weight: pr.module_weight.clone(), module_index: pr.module_index, osc: e };
                out[index[&key]][col] += c;
            }
        }
        Ok(out)
    }

    fn raising_stack(&self, sub: Sub, nu: &Weight) -> Mat {
        let mut rows = Vec::new();
        for u in simple_units(&self.module.uea, sub) {
            rows.extend(self.even_op(u, nu).expect("raising stays inside"));
        }
        rows
    }
}

/// (μ+2ρ, μ) − (Λ+2ρ, Λ) in the form dual to B.
pub fn predicted_scalar(d: &RootDatum, lambda: &Weight, mu: &Weight) -> Q {
    let two_rho = d.rho.scale(&q(2));
    d.dirac_pairing(&(mu + &two_rho), mu) - d.dirac_pairing(&(lambda + &two_rho), lambda)
}

/// Same difference with the unhalved pairing (ε,ε) = 1, (δ,δ) = −1.
pub fn standard_scalar(d: &RootDatum, lambda: &Weight, mu: &Weight) -> Q {
    let two_rho = d.rho.scale(&q(2));
    d.pairing(&(mu + &two_rho), mu) - d.pairing(&(lambda + &two_rho), lambda)
}

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    /// weight of the g₀̄-highest vectors
    pub highest: String,
    /// ρ₁-shifted label μ = ν₀ + ρ₁
    pub label: String,
    pub multiplicity: usize,
    pub predicted: String,
    pub predicted_standard_form: String,
    pub candidate_plus_c: String,
    pub candidate_minus_c: String,
    pub observed: Option<String>,
    pub matched: bool,
    #[serde(skip)]
    pub highest_weight: Weight,
    #[serde(skip)]
    pub label_weight: Weight,
    #[serde(skip)]
    pub scalar: Q,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockAudit {
    pub nu: String,
    pub dim: usize,
    pub tagged_rank: usize,
    /// tagged vectors span the block, so D² is diagonal with the predicted scalars
    pub spanned: bool,
    pub all_matched: bool,
    /// Π_s (D² − s)^dim = 0 over the scalars s of the components meeting the block
    pub spectrum_predicted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareAudit {
    pub constant_c: String,
    pub components: Vec<Component>,
    pub blocks: Vec<BlockAudit>,
    pub pass: bool,
}

/// D² against the Casimir prediction on every g₀̄-isotypic component.
/// Highest vectors are the joint kernel of the even simple raising operators;
/// lower vectors come from applying even simple lowering operators to tagged
/// vectors of higher blocks and inherit their tag.
pub fn dirac_square_audit(cx: &DiracComplex) -> SquareAudit {
    let d = cx.datum();
    let lambda = &cx.module.lambda;
    let cc = crate::oscillator::measure_constant_c(d, 0);
    let c_meas = crate::exactla::parse_q(&cc.b_dual_scalar).unwrap();
    let raise = simple_units(&cx.module.uea, Sub::Even);
    let mut order: Vec<&DiracBlock> = cx.blocks.values().collect();
    order.sort_by(|a, b| (a.height, &a.nu).cmp(&(b.height, &b.nu)));
    let mut tagged: HashMap<Weight, Vec<(Vec<Q>, usize)>> = HashMap::new();
    let mut comps: Vec<Component> = Vec::new();
    let mut blocks = Vec::new();
    for b in order {
        let sq = b.square();
        let r = cx.raising_stack(Sub::Even, &b.nu);
        let hv = kernel_basis(&r, b.dim());
        let mut mine: Vec<(Vec<Q>, usize)> = Vec::new();
        if !hv.is_empty() {
            let mu = &b.nu + &d.rho1;
            let s = predicted_scalar(d, lambda, &mu);
            let two_rho0 = d.rho0.scale(&q(2));
            let two_rho = d.rho.scale(&q(2));
            let omega0 = d.dirac_pairing(&(&b.nu + &two_rho0), &b.nu) - d.dirac_pairing(&(lambda + &two_rho), lambda);
            let obs = observed_scalar(&sq, &hv[0]);
            comps.push(Component {
                highest: b.nu.to_string(),
                label: mu.to_string(),
                multiplicity: hv.len(),
                predicted: fmt_q(&s),
                predicted_standard_form: fmt_q(&standard_scalar(d, lambda, &mu)),
                candidate_plus_c: fmt_q(&(&omega0 + &c_meas)),
                candidate_minus_c: fmt_q(&(&omega0 - &c_meas)),
                observed: obs.as_ref().map(fmt_q),
                matched: true,
                highest_weight: b.nu.clone(),
                label_weight: mu,
                scalar: s,
            });
            let ci = comps.len() - 1;
            mine.extend(hv.into_iter().map(|v| (v, ci)));
        }
        for &u in &raise {
            let from = &b.nu + &unit_weight(d, u);
            let Some(above) = tagged.get(&from) else { continue };
            let f = cx.even_op((u.1, u.0), &from).expect("lowering inside the block range");
            for (v, ci) in above {
                let w = mat_vec(&f, v);
                if w.iter().any(|x| !x.is_zero()) {
                    mine.push((w, *ci));
                }
            }
        }
        // prune to an independent set per component
        let mut pruned: Vec<(Vec<Q>, usize)> = Vec::new();
        for ci in mine.iter().map(|x| x.1).collect::<std::collections::BTreeSet<_>>() {
            let vs: Vec<Vec<Q>> = mine.iter().filter(|x| x.1 == ci).map(|x| x.0.clone()).collect();
            for i in crate::exactla::independent_rows(&vs, b.dim()) {
                pruned.push((vs[i].clone(), ci));
            }
        }
        let mut all_matched = true;
        for (v, ci) in &pruned {
            let img = mat_vec(&sq, v);
            let s = &comps[*ci].scalar;
            if img.iter().zip(v).any(|(a, x)| a != &(x * s)) {
                comps[*ci].matched = false;
                all_matched = false;
            }
        }
        let vs: Vec<Vec<Q>> = pruned.iter().map(|x| x.0.clone()).collect();
        let tr = rank(&vs, b.dim());
        let spectrum_predicted = tr == b.dim() || {
            let scalars: std::collections::BTreeSet<Q> = pruned.iter().map(|x| comps[x.1].scalar.clone()).collect();
            generalized_spectrum_within(&sq, &scalars)
        };
        blocks.push(BlockAudit {
            nu: b.nu.to_string(),
            dim: b.dim(),
            tagged_rank: tr,
            spanned: tr == b.dim(),
            all_matched,
            spectrum_predicted,
        });
        tagged.insert(b.nu.clone(), pruned);
    }
    let pass = comps.iter().all(|c| c.matched) && blocks.iter().all(|b| b.spectrum_predicted);
    SquareAudit { constant_c: cc.b_dual_scalar, components: comps, blocks, pass }
}

impl SquareAudit {
    /// D² diagonal on every block, as it must be on a unitarizable input.
    pub fn semisimple(&self) -> bool {
        self.blocks.iter().all(|b| b.spanned)
    }
}

fn generalized_spectrum_within(a: &Mat, scalars: &std::collections::BTreeSet<Q>) -> bool {
    let n = a.len();
    let mut p = crate::exactla::identity(n);
    for s in scalars {
        let mut shifted = a.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= s;
        }
        for _ in 0..n {
            p = mul(&p, &shifted);
            if is_zero_mat(&p) {
                return true;
            }
        }
    }
    is_zero_mat(&p)
}

fn observed_scalar(sq: &Mat, v: &[Q]) -> Option<Q> {
    let img = mat_vec(sq, v);
    let i = v.iter().position(|x| !x.is_zero())?;
    let s = &img[i] / &v[i];
    if img.iter().zip(v).all(|(a, x)| a == &(x * &s)) { Some(s) } else { None }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub label: String,
    pub highest: String,
    pub scalar: String,
}

/// Components whose D² scalar is positive (the inequality ⟨D²v, v⟩ ≤ 0 fails).
pub fn dirac_inequality_audit(audit: &SquareAudit) -> Vec<Violation> {
    audit
        .components
        .iter()
        .filter(|c| c.scalar.is_positive())
        .map(|c| Violation { label: c.label.clone(), highest: c.highest.clone(), scalar: fmt_q(&c.scalar) })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockCohomology {
    pub nu: String,
    pub dim: usize,
    pub dim_even: usize,
    pub dim_odd: usize,
    pub ker: usize,
    pub ker_cap_im: usize,
    pub hd_plus: usize,
    pub hd_minus: usize,
    pub ktypes_plus: usize,
    pub ktypes_minus: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub truncation: usize,
    pub blocks: Vec<BlockCohomology>,
    #[serde(skip)]
    pub hd_plus: VirtualCharacter,
    #[serde(skip)]
    pub hd_minus: VirtualCharacter,
    #[serde(skip)]
    pub ktypes_plus: VirtualCharacter,
    #[serde(skip)]
    pub ktypes_minus: VirtualCharacter,
    #[serde(skip)]
    pub index: VirtualCharacter,
}

impl CohomologyReport {
    pub fn hd(&self) -> VirtualCharacter {
        let mut c = self.hd_plus.clone();
        c.add_char(&self.hd_minus, 1);
        c
    }

    pub fn euler(&self) -> VirtualCharacter {
        let mut c = self.hd_plus.clone();
        c.add_char(&self.hd_minus, -1);
        c
    }

    pub fn ktypes(&self) -> VirtualCharacter {
        let mut c = self.ktypes_plus.clone();
        c.add_char(&self.ktypes_minus, 1);
        c
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "truncation": self.truncation,
            "hd_plus": self.hd_plus.to_json(),
            "hd_minus": self.hd_minus.to_json(),
            "ktypes_plus": self.ktypes_plus.to_json(),
            "ktypes_minus": self.ktypes_minus.to_json(),
            "index": self.index.to_json(),
        })
    }
}

fn embed(v: &[Q], idx: &[usize], n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (x, &i) in v.iter().zip(idx) {
        out[i] = x.clone();
    }
    out
}

/// Cohomology ker A / (ker A ∩ Im A) of a parity-swapping operator on one block,
/// split by parity, with k-type counts.
fn parity_cohomology(b: &DiracBlock, op: &Mat, raise: &Mat) -> (usize, usize, usize, usize, usize, usize) {
    let n = b.dim();
    let ev = b.even_indices();
    let od = b.odd_indices();
    let mut out = [(0usize, 0usize, 0usize); 2];
    let mut ker_total = 0;
    let mut cap_total = 0;
    for (slot, (src, other)) in [(&ev, &od), (&od, &ev)].into_iter().enumerate() {
        let a = sub_mat(op, other, src);
        let ker: Vec<Vec<Q>> = kernel_basis(&a, src.len()).into_iter().map(|v| embed(&v, src, n)).collect();
        let into = sub_mat(op, src, other);
        let im: Vec<Vec<Q>> = column_basis(&into, src.len()).into_iter().map(|v| embed(&v, src, n)).collect();
        let mut both = ker.clone();
        both.extend(im.iter().cloned());
        let cap_dim = ker.len() + im.len() - rank(&both, n);
        // basis of ker ∩ im
        let cap = intersection_basis(&ker, &im, n);
        debug_assert_eq!(cap.len(), cap_dim);
        let kt = killed_dim(&ker, raise) - killed_dim(&cap, raise);
        out[slot] = (ker.len() - cap_dim, kt, 0);
        ker_total += ker.len();
        cap_total += cap_dim;
    }
    (ker_total, cap_total, out[0].0, out[1].0, out[0].1, out[1].1)
}

fn intersection_basis(a: &[Vec<Q>], b: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    // solve Σ s_i a_i − Σ t_j b_j = 0
    let cols = a.len() + b.len();
    let m: Mat = (0..n)
        .map(|r| a.iter().map(|v| v[r].clone()).chain(b.iter().map(|v| -v[r].clone())).collect())
        .collect();
    let ker = kernel_basis(&m, cols);
    let vs: Vec<Vec<Q>> = ker
        .iter()
        .map(|k| {
            let mut v = vec![Q::zero(); n];
            for (i, ai) in a.iter().enumerate() {
                for r in 0..n {
                    v[r] += &k[i] * &ai[r];
                }
            }
            v
        })
        .collect();
    let keep = crate::exactla::independent_rows(&vs, n);
    keep.into_iter().map(|i| vs[i].clone()).collect()
}

pub fn dirac_cohomology(cx: &DiracComplex) -> CohomologyReport {
    cohomology_of(cx, |b| b.dirac.clone())
}

/// ker d / Im d on the same blocks, d = d^{p₁} − δ^{q₂}.
pub fn kostant_on_blocks(cx: &DiracComplex) -> CohomologyReport {
    cohomology_of(cx, |b| b.kostant_d())
}

fn cohomology_of(cx: &DiracComplex, op: impl Fn(&DiracBlock) -> Mat + Sync) -> CohomologyReport {
    let rows: Vec<(BlockCohomology, Weight)> = cx
        .blocks
        .values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|b| {
            let a = op(b);
            let raise = cx.raising_stack(Sub::Compact, &b.nu);
            let (ker, cap, hp, hm, kp, km) = parity_cohomology(b, &a, &raise);
            let ne = b.even_indices().len();
            (
                BlockCohomology {
                    nu: b.nu.to_string(),
                    dim: b.dim(),
                    dim_even: ne,
                    dim_odd: b.dim() - ne,
                    ker,
                    ker_cap_im: cap,
                    hd_plus: hp,
                    hd_minus: hm,
                    ktypes_plus: kp,
                    ktypes_minus: km,
                },
                b.nu.clone(),
            )
        })
        .collect();
    let mut rep = CohomologyReport {
        truncation: cx.height,
        blocks: vec![],
        hd_plus: VirtualCharacter::new(),
        hd_minus: VirtualCharacter::new(),
        ktypes_plus: VirtualCharacter::new(),
        ktypes_minus: VirtualCharacter::new(),
        index: VirtualCharacter::new(),
    };
    for (r, nu) in rows {
        rep.hd_plus.add(nu.clone(), r.hd_plus as i64);
        rep.hd_minus.add(nu.clone(), r.hd_minus as i64);
        rep.ktypes_plus.add(nu.clone(), r.ktypes_plus as i64);
        rep.ktypes_minus.add(nu.clone(), r.ktypes_minus as i64);
        rep.index.add(nu, r.dim_even as i64 - r.dim_odd as i64);
        rep.blocks.push(r);
    }
    rep
}

/// Per-weight signed dimension of H ⊗ M(g₁̄)₀̄ − H ⊗ M(g₁̄)₁̄.
pub fn dirac_index(cx: &DiracComplex) -> VirtualCharacter {
    let mut c = VirtualCharacter::new();
    for b in cx.blocks.values() {
        let e = b.even_indices().len() as i64;
        c.add(b.nu.clone(), 2 * e - b.dim() as i64);
    }
    c
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointCertificate {
    pub nu: String,
    pub anti_selfadjoint: bool,
    pub d_delta_adjoint: bool,
    pub witness: Option<(usize, usize, String)>,
}

/// DᵀG + GD = 0 and d^{p₁}, δ^{p₁} (resp. q₂) mutually adjoint, for the block Gram G.
pub fn anti_selfadjoint_certificate(b: &DiracBlock, gram: &Mat) -> AdjointCertificate {
    let n = b.dim();
    let dt = transpose(&b.dirac, n);
    let lhs = mul(&dt, gram);
    let rhs = mul(gram, &b.dirac);
    let mut witness = None;
    'scan: for i in 0..n {
        for j in 0..n {
            let s = &lhs[i][j] + &rhs[i][j];
            if !s.is_zero() {
                witness = Some((i, j, fmt_q(&s)));
                break 'scan;
            }
        }
    }
    let adj = |dd: &Mat, de: &Mat| mul(&transpose(dd, n), gram) == mul(gram, de);
    AdjointCertificate {
        nu: b.nu.to_string(),
        anti_selfadjoint: witness.is_none(),
        d_delta_adjoint: n == 0 || (adj(&b.d_p1, &b.delta_p1) && adj(&b.d_q2, &b.delta_q2)),
        witness,
    }
}

/// Identity on the module basis tensored with Bargmann–Fock.
pub fn forced_positive_gram(b: &DiracBlock) -> Mat {
    let n = b.dim();
    let mut g = zeros(n, n);
    for i in 0..n {
        g[i][i] = monomial_bf(&b.basis[i].osc);
    }
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct Invariants {
    pub parity_swap: bool,
    pub commutes_with_even: bool,
    pub split_sum: bool,
    pub iterative_kernel: bool,
    /// ker D^{p₁} = ker d^{p₁} ∩ ker δ^{p₁} and the q₂ analogue
    pub kernel_split: bool,
    /// literal ker D^{p₁} = ker d^{q₂} ∩ ker δ^{p₁}; reported, not asserted
    pub literal_mixed_split: bool,
    /// literal ker D = ker D^{p₁} ∩ ker D^{q₂}; reported, not asserted
    pub kernel_intersection: bool,
    pub hodge: bool,
    pub vogan: bool,
    pub harish_chandra: bool,
    pub first_failure: Option<String>,
}

/// Structural checks from the unitary theory; all but the first three
/// presuppose a positive definite block Gram.
pub fn check_invariants(cx: &DiracComplex) -> Invariants {
    let d = cx.datum();
    let mut inv = Invariants {
        parity_swap: true,
        commutes_with_even: true,
        split_sum: true,
        iterative_kernel: true,
        kernel_split: true,
        literal_mixed_split: true,
        kernel_intersection: true,
        hodge: true,
        vogan: true,
        harish_chandra: true,
        first_failure: None,
    };
    let fail = |inv: &mut Invariants, what: &str, nu: &Weight| {
        if inv.first_failure.is_none() {
            inv.first_failure = Some(format!("{what} at {nu}"));
        }
    };
    let even_units: Vec<Unit> = {
        let mut v = positive_units(&cx.module.uea, Sub::Even);
        v.extend(v.clone().into_iter().map(|(i, j)| (j, i)));
        v
    };
    let top = cx.top();
    for b in cx.blocks.values() {
        let n = b.dim();
        for i in 0..n {
            for j in 0..n {
                if b.parity[i] == b.parity[j] && !b.dirac[i][j].is_zero() {
                    inv.parity_swap = false;
                }
            }
        }
        if !inv.parity_swap {
            fail(&mut inv, "parity swap", &b.nu);
        }
        let sum = combo(&[(&b.dirac_p1(), q(1)), (&b.dirac_q2(), q(1))]);
        if sum != b.dirac {
            inv.split_sum = false;
            fail(&mut inv, "D = Dp1 + Dq2", &b.nu);
        }
        for &u in &even_units {
            let to = &b.nu + &unit_weight(d, u);
            let Some(tb) = cx.blocks.get(&to) else { continue };
            let x = cx.even_op(u, &b.nu).unwrap();
            if !is_zero_mat(&combo_rect(&mul(&tb.dirac, &x), &mul(&x, &b.dirac))) {
                inv.commutes_with_even = false;
                fail(&mut inv, "[D, X] = 0", &b.nu);
            }
        }
        let sq = b.square();
        let cube = mul(&sq, &b.dirac);
        let k1 = kernel_basis(&b.dirac, n).len();
        if k1 != kernel_basis(&sq, n).len() || k1 != kernel_basis(&cube, n).len() {
            inv.iterative_kernel = false;
            fail(&mut inv, "ker D = ker D^k", &b.nu);
        }
        let stack = |a: &Mat, c: &Mat| -> Mat { a.iter().chain(c.iter()).cloned().collect() };
        let kp1 = kernel_basis(&b.dirac_p1(), n).len();
        let kq2 = kernel_basis(&b.dirac_q2(), n).len();
        let kp1_split = kernel_basis(&stack(&b.d_p1, &b.delta_p1), n).len();
        let kq2_split = kernel_basis(&stack(&b.d_q2, &b.delta_q2), n).len();
        if kp1 != kp1_split || kq2 != kq2_split {
            inv.kernel_split = false;
            fail(&mut inv, "kernel split", &b.nu);
        }
        if kp1 != kernel_basis(&stack(&b.d_q2, &b.delta_p1), n).len() {
            inv.literal_mixed_split = false;
        }
        if k1 != kernel_basis(&stack(&b.dirac_p1(), &b.dirac_q2()), n).len() {
            inv.kernel_intersection = false;
        }
        let ker = kernel_basis(&b.dirac, n);
        let im = column_basis(&b.dirac, n);
        let mut all = ker.clone();
        all.extend(im.iter().cloned());
        let orth = ker.iter().all(|k| im.iter().all(|i| crate::exactla::dot(k, &mat_vec(&b.gram, i)).is_zero()));
        if rank(&all, n) != n || !orth {
            inv.hodge = false;
            fail(&mut inv, "Hodge split", &b.nu);
        }
        // g₀̄-highest vectors inside ker D
        let r = cx.raising_stack(Sub::Even, &b.nu);
        let hv_in_ker = {
            let st = stack(&r, &b.dirac);
            kernel_basis(&st, n).len()
        };
        if hv_in_ker > 0 {
            let ok = d.weyl_group().iter().any(|w| {
                d.dot_action(w, &b.nu, crate::weights::Shift::Even) == top
            });
            if !ok {
                inv.vogan = false;
                fail(&mut inv, "Vogan", &b.nu);
            }
            if !d.harish_chandra_condition(&b.nu) {
                inv.harish_chandra = false;
                fail(&mut inv, "Harish-Chandra", &b.nu);
            }
        }
    }
    inv
}

fn combo_rect(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * BigInt::from(b))
}
