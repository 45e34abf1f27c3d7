//! Integer lattices given by Gram matrices: signatures, discriminant groups
//! and forms, short vectors, standard lattices, overlattices and gluing.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::forms::{find_isometry, FiniteQuadraticForm};
use crate::invalid;
use crate::matrix::{self, IMat, QMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    gram: IMat,
    labels: Option<Vec<String>>,
}

/// L^♯/L ≅ ⊕ Z/d_i with generator lifts in L ⊗ Q (coordinates in the basis of L).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Invariant factors d_1 | d_2 | ..., all greater than 1.
    pub invariants: Vec<BigInt>,
    pub lifts: Vec<Vec<BigRational>>,
}

impl DiscriminantGroup {
    pub fn length(&self) -> usize {
        self.invariants.len()
    }

    /// Lift of an element given by coordinates on the generators.
    pub fn lift(&self, x: &[u64]) -> Vec<BigRational> {
        let n = self.lifts.first().map_or(0, |v| v.len());
        let mut out = vec![BigRational::zero(); n];
        for (c, l) in x.iter().zip(&self.lifts) {
            if *c == 0 {
                continue;
            }
            let c = BigRational::from_integer((*c).into());
            for (o, v) in out.iter_mut().zip(l) {
                *o += &c * v;
            }
        }
        out
    }
}

/// Anti-isometry between discriminant forms on one p-primary component:
/// generator k of the source part maps to `images[k]` in the target part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueMap {
    pub p: u64,
    pub source_generators: Vec<Vec<u64>>,
    pub target_generators: Vec<Vec<u64>>,
    pub images: Vec<Vec<u64>>,
}

/// Result of gluing T ⊕ S into an even unimodular overlattice.
#[derive(Clone, Debug)]
pub struct Glued {
    pub lattice: IntegerLattice,
    /// Rows: basis of the overlattice in coordinates of T ⊕ S.
    pub basis: QMat,
    pub maps: Vec<GlueMap>,
}

impl IntegerLattice {
    pub fn new(gram: IMat) -> Result<Self> {
        if !matrix::is_symmetric(&gram) {
            return Err(invalid!("Gram matrix must be square and symmetric"));
        }
        if gram.is_empty() {
            return Err(invalid!("lattice of rank 0"));
        }
        if matrix::det(&gram).is_zero() {
            return Err(invalid!("Gram matrix is singular"));
        }
        Ok(IntegerLattice { gram, labels: None })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(matrix::imat_from_i64(rows))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(invalid!("need {} labels", self.rank()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn gram(&self) -> &IMat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> BigInt {
        matrix::det(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i].is_even())
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// (σ₁, σ₂) by exact congruent diagonalisation.
    pub fn signature(&self) -> (usize, usize) {
        let d = matrix::congruent_diagonal(&matrix::to_q(&self.gram));
        let pos = d.iter().filter(|x| x.is_positive()).count();
        (pos, d.len() - pos)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().1 == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().0 == 0
    }

    /// L(k): Gram scaled by k.
    pub fn scale(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(invalid!("scaling by 0"));
        }
        let k = BigInt::from(k);
        Ok(IntegerLattice {
            gram: self.gram.iter().map(|r| r.iter().map(|x| x * &k).collect()).collect(),
            labels: self.labels.clone(),
        })
    }

    pub fn negate(&self) -> Self {
        self.scale(-1).expect("nonzero scale")
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        IntegerLattice { gram: matrix::direct_sum(&self.gram, &other.gram), labels }
    }

    /// Gram matrix of L^♯ in its dual basis: G^{-1}.
    pub fn dual_gram(&self) -> QMat {
        matrix::inverse(&self.gram).expect("nonsingular")
    }

    pub fn discriminant_group(&self) -> DiscriminantGroup {
        // U G V = D: L^♯ is spanned by the columns of V D^{-1}
        let s = matrix::smith(&self.gram);
        let n = self.rank();
        let mut invariants = Vec::new();
        let mut lifts = Vec::new();
        for (i, d) in s.diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            invariants.push(d.clone());
            lifts.push((0..n).map(|r| BigRational::new(s.v[r][i].clone(), d.clone())).collect());
        }
        DiscriminantGroup { invariants, lifts }
    }

    pub fn length(&self) -> usize {
        self.discriminant_group().length()
    }

    pub fn value(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        matrix::qbilinear(&self.gram, x, y)
    }

    /// (G_L, b_L) with the quadratic refinement q_L when L is even.
    pub fn discriminant_form(&self) -> Result<FiniteQuadraticForm> {
        let g = self.discriminant_group();
        self.form_on(&g)
    }

    fn form_on(&self, g: &DiscriminantGroup) -> Result<FiniteQuadraticForm> {
        let orders: Vec<u64> = g
            .invariants
            .iter()
            .map(|d| d.to_u64().ok_or_else(|| invalid!("discriminant group too large")))
            .collect::<Result<_>>()?;
        let k = orders.len();
        let b: Vec<Vec<BigRational>> = (0..k)
            .map(|i| (0..k).map(|j| frac_mod(&self.value(&g.lifts[i], &g.lifts[j]), 1)).collect())
            .collect();
        let q: Option<Vec<BigRational>> = self
            .is_even()
            .then(|| (0..k).map(|i| frac_mod(&self.value(&g.lifts[i], &g.lifts[i]), 2)).collect());
        FiniteQuadraticForm::new(orders, &b, q.as_deref())
    }

    /// Nonzero x with 0 < |x·x| ≤ bound, both signs, lexicographically sorted.
    pub fn short_vectors(&self, bound: u64) -> Result<Vec<Vec<BigInt>>> {
        let (pos, neg) = self.signature();
        let g = if neg == 0 {
            self.gram.clone()
        } else if pos == 0 {
            self.negate().gram
        } else {
            return Err(invalid!("short vectors need a definite lattice, signature ({pos}, {neg})"));
        };
        let (b, reduced) = lll(&g);
        let mut out = Vec::new();
        enumerate(&reduced, &BigRational::from_integer(bound.into()), &mut |x: &[BigInt]| {
            let v: Vec<BigInt> = (0..x.len())
                .map(|j| x.iter().zip(&b).fold(BigInt::zero(), |acc, (c, row)| acc + c * &row[j]))
                .collect();
            out.push(v);
        });
        out.sort();
        Ok(out)
    }

    /// Vectors of norm −2 in a negative definite lattice.
    pub fn roots(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_negative_definite() {
            return Err(invalid!("roots are defined here for negative definite lattices"));
        }
        let two = BigInt::from(-2);
        Ok(self
            .short_vectors(2)?
            .into_iter()
            .filter(|x| matrix::bilinear(&self.gram, x, x) == two)
            .collect())
    }

    /// Vectors of norm 2 in a positive definite lattice.
    pub fn positive_roots(&self) -> Result<Vec<Vec<BigInt>>> {
        self.negate().roots()
    }

    /// Overlattice generated by L and `glue` (rows, coordinates in the basis of
    /// L). The glue must span an isotropic subgroup of L^♯/L; for even L the
    /// quadratic values must vanish in Q/2Z.
    pub fn overlattice(&self, glue: &[Vec<BigRational>]) -> Result<(IntegerLattice, QMat)> {
        let n = self.rank();
        let even = self.is_even();
        for (i, x) in glue.iter().enumerate() {
            if x.len() != n {
                return Err(invalid!("glue vector {i} has wrong length"));
            }
            for (j, y) in glue.iter().enumerate().skip(i) {
                let v = self.value(x, y);
                let modulus = if i == j && even { 2 } else { 1 };
                if !frac_mod(&v, modulus).is_zero() {
                    return Err(Error::NotRealizable(alloc::format!(
                        "glue subgroup is not isotropic (value {v} on generators {i}, {j})"
                    )));
                }
            }
        }
        let den = glue
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut rows: IMat = matrix::identity(n).into_iter().map(|r| r.into_iter().map(|x| x * &den).collect()).collect();
        for x in glue {
            rows.push(x.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect());
        }
        let h = matrix::hnf_rows(&rows);
        let basis: QMat = h
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), den.clone())).collect())
            .collect();
        let gram: Vec<Vec<BigRational>> = basis
            .iter()
            .map(|x| basis.iter().map(|y| self.value(x, y)).collect())
            .collect();
        if gram.iter().flatten().any(|v| !v.is_integer()) {
            return Err(Error::Internal("overlattice Gram is not integral".into()));
        }
        let gram: IMat = gram.into_iter().map(|r| r.into_iter().map(|v| v.to_integer()).collect()).collect();
        let over = IntegerLattice::new(gram)?;
        let index_sq = BigRational::new(self.det(), over.det());
        let index = matrix::det(&h).abs();
        let index = BigRational::new(den.pow(n as u32), index);
        if index_sq != &index * &index {
            return Err(Error::Internal("overlattice determinant law fails".into()));
        }
        Ok((over, basis))
    }

    pub fn is_root_free(&self) -> Result<bool> {
        Ok(self.roots()?.is_empty())
    }
}

/// x mod `modulus` in [0, modulus).
pub fn frac_mod(x: &BigRational, modulus: i64) -> BigRational {
    let m = BigRational::from_integer(modulus.into());
    let k = (x / &m).floor();
    x - k * m
}

/// Gram-matrix LLL with δ = 3/4; returns (B, B G Bᵀ) with B unimodular.
fn lll(g: &IMat) -> (IMat, IMat) {
    let n = g.len();
    let mut b = matrix::identity(n);
    let mut g = g.clone();
    if n <= 1 {
        return (b, g);
    }
    let three_quarters = BigRational::new(3.into(), 4.into());
    let half = BigRational::new(1.into(), 2.into());
    let (mut mu, mut bn) = gso(&g);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let r = mu[k][j].round().to_integer();
                reduce_row(&mut b, &mut g, k, j, &r);
                let rq = BigRational::from_integer(r);
                for l in 0..j {
                    let t = &rq * &mu[j][l];
                    mu[k][l] -= t;
                }
                mu[k][j] -= rq;
            }
        }
        let lhs = &bn[k] + &mu[k][k - 1] * &mu[k][k - 1] * &bn[k - 1];
        if lhs >= &three_quarters * &bn[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            (mu, bn) = gso(&g);
            k = (k - 1).max(1);
        }
    }
    (b, g)
}

fn reduce_row(b: &mut IMat, g: &mut IMat, k: usize, j: usize, r: &BigInt) {
    let n = g.len();
    for c in 0..n {
        let t = r * &b[j][c];
        b[k][c] -= t;
    }
    // b_k <- b_k - r b_j
    let gkk = &g[k][k] - BigInt::from(2) * r * &g[k][j] + r * r * &g[j][j];
    let row: Vec<BigInt> = (0..n).map(|i| &g[k][i] - r * &g[j][i]).collect();
    for i in 0..n {
        g[k][i] = row[i].clone();
        g[i][k] = row[i].clone();
    }
    g[k][k] = gkk;
}

/// Gram–Schmidt data (μ, |b*_i|²) from a positive definite Gram matrix.
fn gso(g: &IMat) -> (QMat, Vec<BigRational>) {
    let n = g.len();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut r = vec![vec![BigRational::zero(); n]; n];
    let mut bn = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..=i {
            let mut v = BigRational::from_integer(g[i][j].clone());
            for l in 0..j {
                v -= &mu[j][l] * &r[i][l];
            }
            r[i][j] = v;
            if j < i {
                mu[i][j] = &r[i][j] / &bn[j];
            }
        }
        bn.push(r[i][i].clone());
        mu[i][i] = BigRational::one();
    }
    (mu, bn)
}

/// Exact Fincke–Pohst enumeration of nonzero x with 0 < xᵀGx ≤ bound.
fn enumerate(g: &IMat, bound: &BigRational, emit: &mut dyn FnMut(&[BigInt])) {
    let n = g.len();
    let (mu, bn) = gso(g);
    let mut x = vec![BigInt::zero(); n];
    fn rec(
        i: usize,
        budget: &BigRational,
        x: &mut Vec<BigInt>,
        mu: &QMat,
        bn: &[BigRational],
        emit: &mut dyn FnMut(&[BigInt]),
    ) {
        // center c = -Σ_{j>i} μ_ji x_j
        let n = x.len();
        let mut c = BigRational::zero();
        for j in i + 1..n {
            if !x[j].is_zero() {
                c -= &mu[j][i] * BigRational::from_integer(x[j].clone());
            }
        }
        let start = c.round().to_integer();
        let cost = |v: &BigInt| {
            let d = BigRational::from_integer(v.clone()) - &c;
            &bn[i] * &d * &d
        };
        // feasible set is an interval around c; walk out from the nearest integer
        for dir in [1i32, -1] {
            let mut v = if dir == 1 { start.clone() } else { &start - 1 };
            loop {
                let used = cost(&v);
                if &used > budget {
                    break;
                }
                x[i] = v.clone();
                let rest = budget - &used;
                if i == 0 {
                    if x.iter().any(|t| !t.is_zero()) {
                        emit(x);
                    }
                } else {
                    rec(i - 1, &rest, x, mu, bn, emit);
                }
                v += dir;
            }
        }
        x[i] = BigInt::zero();
    }
    rec(n - 1, bound, &mut x, &mu, &bn, emit);
}

/// Standard lattices. `StandardName::M(r)` is U ⊕ E8(−1)^{(r−2)/8}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardName {
    U,
    UScaled(i64),
    A(usize),
    E6,
    E8,
    E8Neg,
    M(usize),
}

fn cartan(n: usize, edges: &[(usize, usize)]) -> IMat {
    let mut g = matrix::zeros(n, n);
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = BigInt::from(2);
    }
    for &(a, b) in edges {
        g[a][b] = BigInt::from(-1);
        g[b][a] = BigInt::from(-1);
    }
    g
}

pub fn standard_lattice(name: StandardName) -> Result<IntegerLattice> {
    let gram = match name {
        StandardName::U => matrix::imat_from_i64(&[vec![0, 1], vec![1, 0]]),
        StandardName::UScaled(k) => {
            if k == 0 {
                return Err(invalid!("U(0) is degenerate"));
            }
            matrix::imat_from_i64(&[vec![0, k], vec![k, 0]])
        }
        StandardName::A(n) => {
            if n == 0 {
                return Err(invalid!("A_0 is empty"));
            }
            let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
            cartan(n, &edges)
        }
        // Bourbaki numbering: 1-3-4-5-6(-7-8), with 2 attached to 4
        StandardName::E6 => cartan(6, &[(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]),
        StandardName::E8 => cartan(8, &[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]),
        StandardName::E8Neg => return Ok(standard_lattice(StandardName::E8)?.negate()),
        StandardName::M(r) => {
            if r < 2 || (r - 2) % 8 != 0 {
                return Err(invalid!("M_r needs r ≡ 2 (mod 8), got {r}"));
            }
            let mut l = standard_lattice(StandardName::U)?;
            let e8 = standard_lattice(StandardName::E8Neg)?;
            for _ in 0..(r - 2) / 8 {
                l = l.direct_sum(&e8);
            }
            return Ok(l);
        }
    };
    IntegerLattice::new(gram)
}

/// Even unimodular overlattice of T ⊕ S from an anti-isometry of their
/// discriminant forms, searched per p-primary component.
pub fn glue_even_unimodular(t: &IntegerLattice, s: &IntegerLattice) -> Result<Glued> {
    if t.det().abs() != s.det().abs() {
        return Err(invalid!("|det T| = {} differs from |det S| = {}", t.det().abs(), s.det().abs()));
    }
    if !t.is_even() || !s.is_even() {
        return Err(invalid!("gluing into an even lattice needs even T and S"));
    }
    let (a1, a2) = t.signature();
    let (b1, b2) = s.signature();
    let tau = (a1 + b1) as i64 - (a2 + b2) as i64;
    if tau.rem_euclid(8) != 0 {
        return Err(invalid!("signature ({}, {}) admits no even unimodular lattice", a1 + b1, a2 + b2));
    }
    let gt = t.discriminant_group();
    let gs = s.discriminant_group();
    let ft = t.form_on(&gt)?;
    let fs = s.form_on(&gs)?;
    let parts_t = ft.p_parts();
    let parts_s = fs.p_parts();
    let primes_t: Vec<u64> = parts_t.iter().map(|(p, _, _)| *p).collect();
    let primes_s: Vec<u64> = parts_s.iter().map(|(p, _, _)| *p).collect();
    if primes_t != primes_s {
        return Err(invalid!("discriminant groups have different primes: {primes_t:?} vs {primes_s:?}"));
    }
    let nt = t.rank();
    let mut glue = Vec::new();
    let mut maps = Vec::new();
    for ((p, pt, gens_t), (_, ps, gens_s)) in parts_t.iter().zip(&parts_s) {
        let images = find_isometry(pt, &ps.negate()).ok_or_else(|| Error::GlueFailure {
            p: *p,
            reason: alloc::format!("no anti-isometry between {pt:?} and {ps:?}"),
        })?;
        for (k, img) in images.iter().enumerate() {
            let x_t = gt.lift(&gens_t[k]);
            // image coordinates are on the generators of the S p-part
            let mut coords = vec![0u64; gs.length()];
            for (c, g) in img.iter().zip(gens_s) {
                for (o, v) in coords.iter_mut().zip(g) {
                    *o += c * v;
                }
            }
            let x_s = gs.lift(&coords);
            let mut v = x_t;
            v.extend(x_s);
            debug_assert_eq!(v.len(), nt + s.rank());
            glue.push(v);
        }
        maps.push(GlueMap {
            p: *p,
            source_generators: gens_t.clone(),
            target_generators: gens_s.clone(),
            images,
        });
    }
    let (lattice, basis) = t.direct_sum(s).overlattice(&glue)?;
    if !lattice.is_even() || !lattice.is_unimodular() {
        return Err(Error::Internal("glued lattice is not even unimodular".into()));
    }
    Ok(Glued { lattice, basis, maps })
}
