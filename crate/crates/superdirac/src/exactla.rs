//! Exact linear algebra over the rationals.
//!
//! Elimination is fraction-free on integer rows (denominators cleared once per
//! matrix) with a fixed pivot rule: scan columns left to right, take the
//! smallest row index holding a nonzero entry.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parse "3", "-2", "3/4".
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        Some(Q::from_integer(s.parse().ok()?))
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaError {
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("kernel basis is linearly dependent")]
    DependentKernel,
}

pub type Mat = Vec<Vec<Q>>;

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![Q::zero(); c]; r]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn ncols(a: &Mat, default: usize) -> usize {
    a.first().map(|r| r.len()).unwrap_or(default)
}

pub fn matmul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, aik) in row.iter().enumerate().take(inner) {
            if aik.is_zero() {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                if !bkj.is_zero() {
                    out[i][j] += aik * bkj;
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(Q::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

pub fn transpose(a: &Mat, cols: usize) -> Mat {
    let mut t = zeros(cols, a.len());
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = x.clone();
        }
    }
    t
}

pub fn is_zero_mat(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn quad_form(g: &Mat, v: &[Q]) -> Q {
    dot(v, &mat_vec(g, v))
}

/// Sparse storage; no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), Q>,
}

impl SparseRationalMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_dense(a: &Mat, cols: usize) -> Self {
        let mut s = Self::new(a.len(), cols);
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                s.set(i, j, x.clone());
            }
        }
        s
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if x.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), x);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &Q) {
        let cur = self.get(i, j) + x;
        self.set(i, j, cur);
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = zeros(self.rows, self.cols);
        for ((i, j), x) in &self.entries {
            m[*i][*j] = x.clone();
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
}

impl Serialize for SparseRationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(usize, usize, String)> =
            self.entries.iter().map(|((i, j), x)| (*i, *j, fmt_q(x))).collect();
        #[derive(Serialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            entries: Vec<(usize, usize, String)>,
        }
        Repr { rows: self.rows, cols: self.cols, entries: v }.serialize(s)
    }
}

fn lcm_denoms<'a>(it: impl Iterator<Item = &'a Q>) -> BigInt {
    it.fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Integer copy of `a` scaled by the lcm of all denominators.
fn integerize(a: &Mat) -> Vec<Vec<BigInt>> {
    let l = lcm_denoms(a.iter().flatten());
    a.iter()
        .map(|r| r.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect())
        .collect()
}

/// Bareiss echelon form. Returns (echelon rows, pivot columns, row permutation).
fn bareiss(a: &Mat, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m = integerize(a);
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        // rows above the pivot row but already reduced keep their values;
        // Bareiss exact division holds for the trailing block only.
        for j in 0..c {
            m[r][j] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(a: &Mat, cols: usize) -> usize {
    if a.is_empty() {
        return 0;
    }
    bareiss(a, cols).1.len()
}

fn primitive(v: Vec<Q>) -> Vec<Q> {
    let l = lcm_denoms(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    // first nonzero entry positive
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap_or_else(BigInt::one);
    ints.into_iter().map(|x| Q::from_integer(x * &sign / &g)).collect()
}

/// Basis of the right kernel, one primitive integer vector per free column.
pub fn kernel_basis(a: &Mat, cols: usize) -> Vec<Vec<Q>> {
    if a.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
    }
    let (u, piv) = bareiss(a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Q::zero(); cols];
        x[f] = Q::one();
        for (ri, &pc) in piv.iter().enumerate().rev() {
            let mut s = Q::zero();
            for j in pc + 1..cols {
                if !u[ri][j].is_zero() && !x[j].is_zero() {
                    s += Q::from_integer(u[ri][j].clone()) * &x[j];
                }
            }
            x[pc] = -s / Q::from_integer(u[ri][pc].clone());
        }
        out.push(primitive(x));
    }
    out
}

/// Indices of a maximal linearly independent subset of the rows, greedy in row order.
pub fn independent_rows(a: &Mat, cols: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Mat = Vec::new();
    for (i, row) in a.iter().enumerate() {
        basis.push(row.clone());
        if rank(&basis, cols) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Solve A x = b for square nonsingular A.
pub fn solve(a: &Mat, b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Mat = a.iter().zip(b).map(|(r, x)| {
        let mut r = r.clone();
        r.push(x.clone());
        r
    }).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = Q::one() / &m[c][c];
        for j in c..=n {
            m[c][j] = &m[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Q> = (0..n).map(|i| if i == j { Q::one() } else { Q::zero() }).collect();
        cols.push(solve(a, &e)?);
    }
    Some(transpose(&cols, n))
}

/// Express each vector in `target` as a combination of `basis` (columns of the result).
/// Returns None if some target is outside the span.
pub fn coordinates(basis: &[Vec<Q>], target: &[Vec<Q>], dim: usize) -> Option<Mat> {
    // columns = basis vectors; solve via elimination on [B | T]
    let k = basis.len();
    let mut m: Mat = (0..dim)
        .map(|i| {
            let mut r: Vec<Q> = basis.iter().map(|b| b[i].clone()).collect();
            r.extend(target.iter().map(|t| t[i].clone()));
            r
        })
        .collect();
    let total = k + target.len();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..dim).find(|&i| !m[i][c].is_zero()) else { return None };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for j in c..total {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..dim {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..total {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        piv.push(r);
        r += 1;
    }
    for row in m.iter().skip(r) {
        if row[k..].iter().any(|x| !x.is_zero()) {
            return None;
        }
    }
    let mut out = zeros(k, target.len());
    for (ci, &ri) in piv.iter().enumerate() {
        for t in 0..target.len() {
            out[ci][t] = m[ri][k + t].clone();
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite { rank: usize },
    Indefinite { witness: Vec<String> },
    /// Only for the 0x0 matrix.
    Empty,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefinitenessCertificate {
    #[serde(flatten)]
    pub verdict: Definiteness,
    /// (original index, pivot value) in elimination order
    pub pivots: Vec<(usize, String)>,
    #[serde(skip)]
    pub witness: Option<Vec<Q>>,
}

impl DefinitenessCertificate {
    pub fn is_positive_definite(&self) -> bool {
        matches!(self.verdict, Definiteness::PositiveDefinite | Definiteness::Empty)
    }
    pub fn is_semidefinite(&self) -> bool {
        !matches!(self.verdict, Definiteness::Indefinite { .. })
    }
}

pub fn check_symmetric(g: &Mat) -> Result<(), LaError> {
    let n = g.len();
    for i in 0..n {
        if g[i].len() != n {
            return Err(LaError::Dim("Gram matrix not square".into()));
        }
        for j in i + 1..n {
            if g[i][j] != g[j][i] {
                return Err(LaError::NotSymmetric(i, j));
            }
        }
    }
    Ok(())
}

/// Symmetric elimination with diagonal pivoting on transformed basis vectors.
/// Vectors are updated fraction-free: v_j <- p v_j - s_ij v_i.
pub fn definiteness(g: &Mat) -> Result<DefinitenessCertificate, LaError> {
    check_symmetric(g)?;
    let n = g.len();
    if n == 0 {
        return Ok(DefinitenessCertificate { verdict: Definiteness::Empty, pivots: vec![], witness: None });
    }
    let mut vecs: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    let gv = |v: &Vec<Q>| mat_vec(g, v);
    loop {
        let imgs: Vec<Vec<Q>> = active.iter().map(|&i| gv(&vecs[i])).collect();
        let diag: Vec<Q> = active.iter().zip(&imgs).map(|(&i, gi)| dot(&vecs[i], gi)).collect();
        if let Some(pos) = diag.iter().position(|d| d.is_negative()) {
            let w = vecs[active[pos]].clone();
            return Ok(indefinite(w, pivots));
        }
        let Some(pos) = diag.iter().position(|d| d.is_positive()) else {
            // all remaining diagonal entries vanish
            for a in 0..active.len() {
                for b in a + 1..active.len() {
                    let s = dot(&vecs[active[b]], &imgs[a]);
                    if !s.is_zero() {
                        let sign = if s.is_positive() { Q::one() } else { -Q::one() };
                        let w: Vec<Q> = vecs[active[a]]
                            .iter()
                            .zip(&vecs[active[b]])
                            .map(|(x, y)| x - &sign * y)
                            .collect();
                        return Ok(indefinite(w, pivots));
                    }
                }
            }
            let r = pivots.len();
            let verdict = if r == n {
                Definiteness::PositiveDefinite
            } else {
                Definiteness::PositiveSemidefinite { rank: r }
            };
            return Ok(DefinitenessCertificate { verdict, pivots, witness: None });
        };
        let pi = active[pos];
        let p = diag[pos].clone();
        pivots.push((pi, fmt_q(&p)));
        let img = imgs[pos].clone();
        let pv = vecs[pi].clone();
        active.remove(pos);
        for &j in &active {
            let s = dot(&vecs[j], &img);
            if s.is_zero() {
                continue;
            }
            let nv: Vec<Q> = vecs[j].iter().zip(&pv).map(|(x, y)| &p * x - &s * y).collect();
            vecs[j] = primitive(nv);
        }
        if active.is_empty() {
            return Ok(DefinitenessCertificate { verdict: Definiteness::PositiveDefinite, pivots, witness: None });
        }
    }
}

fn indefinite(w: Vec<Q>, pivots: Vec<(usize, String)>) -> DefinitenessCertificate {
    let w = primitive(w);
    DefinitenessCertificate {
        verdict: Definiteness::Indefinite { witness: w.iter().map(fmt_q).collect() },
        pivots,
        witness: Some(w),
    }
}

/// Induced map of `a` on the quotient by span(k).
#[derive(Clone, Debug)]
pub struct QuotientMap {
    /// matrix of the induced map in the complement coordinates
    pub matrix: Mat,
    /// standard basis indices chosen as the coordinate section of the quotient
    pub section: Vec<usize>,
}

pub fn restrict_quotient(a: &Mat, k: &[Vec<Q>], dim: usize) -> Result<QuotientMap, LaError> {
    if rank(&k.to_vec(), dim) != k.len() {
        return Err(LaError::DependentKernel);
    }
    // extend K by the smallest standard vectors not in the running span
    let mut basis: Vec<Vec<Q>> = k.to_vec();
    let mut section = Vec::new();
    for j in 0..dim {
        let e: Vec<Q> = (0..dim).map(|i| if i == j { Q::one() } else { Q::zero() }).collect();
        basis.push(e);
        if rank(&basis, dim) == basis.len() {
            section.push(j);
        } else {
            basis.pop();
        }
    }
    let images: Vec<Vec<Q>> = section
        .iter()
        .map(|&j| a.iter().map(|row| row[j].clone()).collect())
        .collect();
    let coords = coordinates(&basis, &images, dim).ok_or_else(|| LaError::Dim("image outside ambient".into()))?;
    let kk = k.len();
    let matrix: Mat = (0..section.len())
        .map(|r| (0..section.len()).map(|c| coords[kk + r][c].clone()).collect())
        .collect();
    Ok(QuotientMap { matrix, section })
}

impl fmt::Display for SparseRationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| fmt_q(&self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]), 3).len(), 3);
        assert!(kernel_basis(&identity(3), 3).is_empty());
        let k = kernel_basis(&m(&[&[1, 1], &[1, 1]]), 2);
        assert_eq!(k, vec![vec![q(1), q(-1)]]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, -1, 2]]);
        let k = kernel_basis(&a, 4);
        assert_eq!(k.len() + rank(&a, 4), 4);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn definiteness_examples() {
        assert!(definiteness(&identity(2)).unwrap().is_positive_definite());
        let c = definiteness(&m(&[&[1, 0], &[0, 0]])).unwrap();
        assert_eq!(c.verdict, Definiteness::PositiveSemidefinite { rank: 1 });
        let c = definiteness(&m(&[&[1, 0], &[0, -1]])).unwrap();
        assert_eq!(c.witness.unwrap(), vec![q(0), q(1)]);
        let c = definiteness(&m(&[&[0, 1], &[1, 0]])).unwrap();
        let w = c.witness.clone().unwrap();
        assert!(quad_form(&m(&[&[0, 1], &[1, 0]]), &w).is_negative());
        assert!(definiteness(&m(&[&[1, 2], &[3, 1]])).is_err());
    }

    #[test]
    fn quotient_examples() {
        let e1 = vec![vec![q(1), q(0)]];
        let r = restrict_quotient(&zeros(2, 2), &e1, 2).unwrap();
        assert!(is_zero_mat(&r.matrix));
        let r = restrict_quotient(&identity(2), &e1, 2).unwrap();
        assert_eq!(r.matrix, identity(1));
        let j2 = m(&[&[0, 1], &[0, 0]]);
        let k = kernel_basis(&j2, 2);
        let r = restrict_quotient(&j2, &k, 2).unwrap();
        assert_eq!(r.matrix, m(&[&[0]]));
        assert_eq!(r.section, vec![1]);
        assert!(restrict_quotient(&j2, &[vec![q(1), q(0)], vec![q(2), q(0)]], 2).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-3/6").unwrap(), qf(-1, 2));
        assert_eq!(fmt_q(&qf(4, 2)), "2");
        assert!(parse_q("1/0").is_none());
    }
}
