//! Division-free determinants over commutative rings and small dense linear
//! algebra over the coefficient field.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::{FieldElem, FieldSpec, LaurentScalar};

/// The operations the determinant expansion needs. Elements carry enough
/// context (their field) to produce `0` and `1` of the same ring.
pub trait CommRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl CommRing for LaurentScalar {
    fn zero_like(&self) -> Self {
        LaurentScalar::zero(self.field())
    }
    fn one_like(&self) -> Self {
        LaurentScalar::one(self.field())
    }
    fn add(&self, other: &Self) -> Self {
        LaurentScalar::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        LaurentScalar::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentScalar::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        LaurentScalar::is_zero(self)
    }
}

impl CommRing for FieldElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn add(&self, other: &Self) -> Self {
        FieldElem::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        FieldElem::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        FieldElem::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }
}

/// Univariate polynomial with coefficients in `R`; `coeffs[i]` multiplies `x^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R> {
    coeffs: Vec<R>,
    zero: R,
}

impl<R: CommRing> Poly<R> {
    pub fn new(mut coeffs: Vec<R>, zero: R) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, zero }
    }

    /// `a + b x`.
    pub fn linear(a: R, b: R) -> Self {
        let zero = a.zero_like();
        Poly::new(vec![a, b], zero)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }
}

impl<R: CommRing> CommRing for Poly<R> {
    fn zero_like(&self) -> Self {
        Poly { coeffs: Vec::new(), zero: self.zero.clone() }
    }
    fn one_like(&self) -> Self {
        Poly { coeffs: vec![self.zero.one_like()], zero: self.zero.clone() }
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Poly::new(coeffs, self.zero.clone())
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Poly::new(coeffs, self.zero.clone())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return self.zero_like();
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Poly::new(out, self.zero.clone())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Determinant by Laplace expansion memoized over column subsets.
///
/// Uses only ring operations, so it is exact over any commutative ring;
/// cost is `O(n 2^n)` ring products, skipping zero entries.
pub fn determinant<R: CommRing>(m: &[Vec<R>], one: &R) -> R {
    let n = m.len();
    assert!(n < 24, "determinant expansion limited to small matrices");
    if n == 0 {
        return one.clone();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut layer: Vec<(u32, R)> = vec![(0, one.clone())];
    let mut table: Vec<Option<R>> = vec![None; 1 << n];
    for row in m.iter() {
        let mut touched = Vec::new();
        for (mask, val) in layer.iter() {
            for (j, entry) in row.iter().enumerate() {
                if mask & (1 << j) != 0 || entry.is_zero() {
                    continue;
                }
                let above = (mask >> (j + 1)).count_ones();
                let term = val.mul(entry);
                let next = mask | (1 << j);
                let slot = &mut table[next as usize];
                *slot = Some(match slot.take() {
                    None => {
                        touched.push(next);
                        if above % 2 == 0 {
                            term
                        } else {
                            term.zero_like().sub(&term)
                        }
                    }
                    Some(acc) => {
                        if above % 2 == 0 {
                            acc.add(&term)
                        } else {
                            acc.sub(&term)
                        }
                    }
                });
            }
        }
        layer = touched
            .into_iter()
            .filter_map(|mask| {
                let v = table[mask as usize].take()?;
                (!v.is_zero()).then_some((mask, v))
            })
            .collect();
        if layer.is_empty() {
            return one.zero_like();
        }
    }
    layer.pop().map(|(_, v)| v).unwrap_or_else(|| one.zero_like())
}

/// Determinant of a matrix over `k[t, 1/t]`.
///
/// Over `F_p` this is [`determinant`]. Over `Q` rational coefficient
/// arithmetic is slow, so the matrix is scaled to one over `Z[t]`, its
/// determinant is taken modulo enough word-sized primes to exceed a
/// coefficient bound, and the integer coefficients are recovered by CRT.
pub fn laurent_determinant(m: &[Vec<LaurentScalar>], field: FieldSpec) -> LaurentScalar {
    if let FieldSpec::Prime { .. } = field {
        return determinant(m, &LaurentScalar::one(field));
    }
    let size = m.len();
    if size == 0 {
        return LaurentScalar::one(field);
    }
    let Some(low) = m.iter().flatten().filter(|x| !x.is_zero()).map(|x| x.valuation().finite().unwrap()).min() else {
        return LaurentScalar::zero(field);
    };
    // Row r becomes (denominator lcm d_r) * t^{-low} * row r, over Z[t].
    let mut scale = BigInt::one();
    let mut int_rows: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(size);
    let mut bound = BigInt::one();
    let mut degree = 0usize;
    for row in m {
        let terms: Vec<Vec<(i64, num_rational::BigRational)>> = row
            .iter()
            .map(|x| {
                x.terms()
                    .into_iter()
                    .map(|(e, c)| match c {
                        FieldElem::Rational(r) => (e - low, r),
                        FieldElem::Modular { .. } => unreachable!("rational field"),
                    })
                    .collect()
            })
            .collect();
        let d = terms.iter().flatten().fold(BigInt::one(), |acc, (_, r)| acc.lcm(r.denom()));
        scale *= &d;
        let mut norm = BigInt::zero();
        let mut row_degree = 0usize;
        let ints: Vec<Vec<BigInt>> = terms
            .iter()
            .map(|ts| {
                let len = ts.last().map_or(0, |(e, _)| *e as usize + 1);
                row_degree = row_degree.max(len.saturating_sub(1));
                let mut v = vec![BigInt::zero(); len];
                for (e, r) in ts {
                    let c = r.numer() * (&d / r.denom());
                    norm += c.abs();
                    v[*e as usize] = c;
                }
                v
            })
            .collect();
        bound *= norm;
        degree += row_degree;
        int_rows.push(ints);
    }
    if bound.is_zero() {
        return LaurentScalar::zero(field);
    }
    // Structured matrices repeat entries; evaluate each distinct one once.
    let mut distinct: Vec<Vec<BigInt>> = Vec::new();
    let mut seen: std::collections::HashMap<Vec<BigInt>, usize> = std::collections::HashMap::new();
    let index: Vec<Vec<usize>> = int_rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| {
                    *seen.entry(v.clone()).or_insert_with(|| {
                        distinct.push(v);
                        distinct.len() - 1
                    })
                })
                .collect()
        })
        .collect();
    // Every coefficient of det is at most `bound` in absolute value.
    let target = bound * 2u32;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); degree + 1];
    // Below 2^31 products of residues fit in a u64.
    let mut candidate = (1u64 << 31) - 1;
    while modulus <= target {
        let p = next_prime_below(&mut candidate);
        let reduced: Vec<Vec<u64>> = distinct.iter().map(|v| v.iter().map(|c| mod_u64(c, p)).collect()).collect();
        let det = det_by_interpolation(&reduced, &index, degree, p);
        let inv = mod_inverse(mod_u64(&modulus, p), p);
        for (a, &r) in acc.iter_mut().zip(&det) {
            let diff = (r + p - mod_u64(a, p)) % p;
            *a += &modulus * (diff * inv % p);
        }
        modulus *= p;
    }
    let half = &modulus >> 1;
    let coeffs: Vec<FieldElem> = acc
        .into_iter()
        .map(|a| {
            let a = if a > half { a - &modulus } else { a };
            FieldElem::Rational(num_rational::BigRational::new(a, scale.clone()))
        })
        .collect();
    LaurentScalar::from_coeffs(field, low * size as i64, &coeffs)
}

/// Determinant of a matrix over `F_p[t]` whose result has degree at most
/// `degree`, by evaluation at `t = 0, 1, ..., degree` and Newton
/// interpolation. Needs `p > degree`.
fn det_by_interpolation(polys: &[Vec<u64>], index: &[Vec<usize>], degree: usize, p: u64) -> Vec<u64> {
    assert!((degree as u64) < p, "too few evaluation points");
    let mulm = |a: u64, b: u64| a * b % p;
    let size = index.len();
    let mut c: Vec<u64> = (0..=degree as u64)
        .map(|x| {
            let vals: Vec<u64> =
                polys.iter().map(|poly| poly.iter().rev().fold(0, |acc, &k| (mulm(acc, x) + k) % p)).collect();
            let mut a: Vec<Vec<u64>> = index.iter().map(|row| row.iter().map(|&i| vals[i]).collect()).collect();
            let mut det = 1u64;
            for col in 0..size {
                let Some(piv) = (col..size).find(|&r| a[r][col] != 0) else { return 0 };
                if piv != col {
                    a.swap(piv, col);
                    det = (p - det) % p;
                }
                det = mulm(det, a[col][col]);
                let inv = mod_inverse(a[col][col], p);
                for r in col + 1..size {
                    if a[r][col] != 0 {
                        let factor = mulm(a[r][col], inv);
                        for j in col..size {
                            a[r][j] = (a[r][j] + p - mulm(factor, a[col][j])) % p;
                        }
                    }
                }
            }
            det
        })
        .collect();
    // Divided differences on the nodes 0..=degree, where x_i - x_{i-j} = j.
    for j in 1..=degree {
        let inv_j = mod_inverse(j as u64, p);
        for i in (j..=degree).rev() {
            c[i] = mulm((c[i] + p - c[i - 1]) % p, inv_j);
        }
    }
    let mut poly = vec![0u64; degree + 1];
    poly[0] = c[degree];
    for i in (0..degree).rev() {
        let len = degree - i;
        // poly <- poly * (t - i) + c[i]
        for k in (0..=len).rev() {
            let shifted = if k > 0 { poly[k - 1] } else { 0 };
            let cur = if k < len { poly[k] } else { 0 };
            poly[k] = (shifted + p - mulm(cur, i as u64 % p)) % p;
        }
        poly[0] = (poly[0] + c[i]) % p;
    }
    poly
}

fn mod_u64(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    debug_assert!(r.sign() != Sign::Minus);
    r.to_u64().expect("reduced below p")
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mulm = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, b);
        }
        b = mulm(b, b);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime below `2^63` by the extended Euclidean algorithm.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not invertible");
    s0.rem_euclid(p as i64) as u64
}

/// Deterministic Miller-Rabin; bases 2, 7, 61 suffice below 4.7e9.
fn is_prime_u32(n: u64) -> bool {
    if n < 2 || n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 7, 61] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn next_prime_below(candidate: &mut u64) -> u64 {
    loop {
        let c = *candidate;
        *candidate -= 1;
        if is_prime_u32(c) {
            return c;
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(rows: &mut [Vec<FieldElem>]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let v = rows[i][j].sub(&f.mul(&rows[r][j]));
                    rows[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<FieldElem>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// A basis of `{x : M x = 0}` for the matrix with the given rows.
pub fn kernel(rows: &[Vec<FieldElem>], ncols: usize, field: FieldSpec) -> Vec<Vec<FieldElem>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); ncols];
            v[fc] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m[r][fc].neg();
            }
            v
        })
        .collect()
}

/// Determinant over the field by elimination.
pub fn field_determinant(m: &[Vec<FieldElem>], field: FieldSpec) -> FieldElem {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return field.zero();
        };
        if pr != c {
            a.swap(pr, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        let inv = a[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                let v = a[i][j].sub(&f.mul(&a[c][j]));
                a[i][j] = v;
            }
        }
    }
    det
}

/// Monic gcd of two univariate polynomials over the field (increasing-degree
/// coefficient order). Returns the empty vector iff both inputs are zero.
pub fn poly_gcd(a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lc) = a.last().cloned() {
        let inv = lc.inv().expect("nonzero leading coefficient");
        for x in a.iter_mut() {
            *x = x.mul(&inv);
        }
    }
    a
}

fn trim(mut v: Vec<FieldElem>) -> Vec<FieldElem> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_rem(a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = b[db].inv().expect("nonzero leading coefficient");
    while r.len() > db {
        let lead = r.last().unwrap().mul(&inv);
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            let v = r[shift + i].sub(&lead.mul(bi));
            r[shift + i] = v;
        }
        r.pop();
        r = trim(r);
    }
    r
}
