//! Exact coefficient arithmetic.
//!
//! Two layers live here: [`FieldElem`], an element of the residue field `k`
//! (either `Q` with arbitrary-precision rationals or `F_p` with odd prime `p`),
//! and [`LaurentScalar`], an element of `k[t, 1/t]` carrying its `t`-adic
//! valuation. Every pencil computation in the crate runs over `LaurentScalar`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the largest `t`-exponent accepted from user input.
pub const DEFAULT_DEGREE_CAP: i64 = 64;

/// The coefficient field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    Prime { p: u64 },
}

impl FieldSpec {
    /// `F_p`; rejects composite `p` and `p = 2`.
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidField(p));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime { p } => FieldSpec::prime(p).map(|_| ()),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime { p } => p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElem {
        match *self {
            FieldSpec::Rationals => FieldElem::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::Prime { p } => {
                let r = v.mod_floor(&BigInt::from(p));
                FieldElem::Modular { value: r.to_u64().unwrap(), p }
            }
        }
    }

    /// `num / den` in this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem> {
        let d = self.from_bigint(den);
        self.from_bigint(num).div(&d)
    }

    /// All elements of a prime field in the order `0, 1, ..., p-1`.
    pub fn elements(&self) -> Option<Vec<FieldElem>> {
        match *self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime { p } => Some((0..p).map(|value| FieldElem::Modular { value, p }).collect()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rational(BigRational),
    Modular { value: u64, p: u64 },
}

impl FieldElem {
    pub fn field(&self) -> FieldSpec {
        match self {
            FieldElem::Rational(_) => FieldSpec::Rationals,
            FieldElem::Modular { p, .. } => FieldSpec::Prime { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(q) => q.is_zero(),
            FieldElem::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rational(q) => q.is_one(),
            FieldElem::Modular { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a + b),
            (FieldElem::Modular { value: a, p }, FieldElem::Modular { value: b, p: q }) if p == q => {
                FieldElem::Modular { value: (a + b) % p, p: *p }
            }
            _ => mixed_fields(),
        }
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Rational(a) => FieldElem::Rational(-a),
            FieldElem::Modular { value, p } => FieldElem::Modular { value: (p - value) % p, p: *p },
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a * b),
            (FieldElem::Modular { value: a, p }, FieldElem::Modular { value: b, p: q }) if p == q => {
                FieldElem::Modular { value: mul_mod(*a, *b, *p), p: *p }
            }
            _ => mixed_fields(),
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Rational(a) => FieldElem::Rational(a.recip()),
            FieldElem::Modular { value, p } => FieldElem::Modular { value: inv_mod(*value, *p), p: *p },
        })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Sign used when printing: `Q` elements print their own sign, `F_p`
    /// elements always print the representative in `[0, p)`.
    fn is_negative(&self) -> bool {
        match self {
            FieldElem::Rational(q) => q.is_negative(),
            FieldElem::Modular { .. } => false,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElem::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mixed_fields() -> ! {
    panic!("arithmetic between elements of different coefficient fields")
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Dense coefficient storage; index `i` holds the coefficient of `t^(lead + i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Coeffs {
    Rational(Vec<BigRational>),
    Modular { p: u64, c: Vec<u64> },
}

impl Coeffs {
    fn len(&self) -> usize {
        match self {
            Coeffs::Rational(v) => v.len(),
            Coeffs::Modular { c, .. } => c.len(),
        }
    }

    fn empty(field: FieldSpec) -> Coeffs {
        match field {
            FieldSpec::Rationals => Coeffs::Rational(Vec::new()),
            FieldSpec::Prime { p } => Coeffs::Modular { p, c: Vec::new() },
        }
    }

    fn field(&self) -> FieldSpec {
        match self {
            Coeffs::Rational(_) => FieldSpec::Rationals,
            Coeffs::Modular { p, .. } => FieldSpec::Prime { p: *p },
        }
    }

    fn is_zero_at(&self, i: usize) -> bool {
        match self {
            Coeffs::Rational(v) => v[i].is_zero(),
            Coeffs::Modular { c, .. } => c[i] == 0,
        }
    }

    fn get(&self, i: usize) -> FieldElem {
        match self {
            Coeffs::Rational(v) => FieldElem::Rational(v[i].clone()),
            Coeffs::Modular { p, c } => FieldElem::Modular { value: c[i], p: *p },
        }
    }
}

/// An element of `k[t, 1/t]`, stored as `t^lead * (c_0 + c_1 t + ...)`.
///
/// The representation is canonical: zero has no coefficients, and otherwise
/// both the first and the last stored coefficient are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentScalar {
    lead: i64,
    coeffs: Coeffs,
}

/// A `t`-adic valuation, with `+inf` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

impl LaurentScalar {
    pub fn zero(field: FieldSpec) -> Self {
        LaurentScalar { lead: 0, coeffs: Coeffs::empty(field) }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::constant(&field.one())
    }

    pub fn from_i64(field: FieldSpec, v: i64) -> Self {
        Self::constant(&field.from_i64(v))
    }

    pub fn constant(c: &FieldElem) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^e`.
    pub fn monomial(c: &FieldElem, e: i64) -> Self {
        let coeffs = match c {
            FieldElem::Rational(q) => Coeffs::Rational(vec![q.clone()]),
            FieldElem::Modular { value, p } => Coeffs::Modular { p: *p, c: vec![*value] },
        };
        LaurentScalar { lead: e, coeffs }.normalized()
    }

    /// `t^e`.
    pub fn t_pow(field: FieldSpec, e: i64) -> Self {
        Self::monomial(&field.one(), e)
    }

    /// Builds `sum_i coeffs[i] * t^(lead + i)`; all coefficients must share a field.
    pub fn from_coeffs(field: FieldSpec, lead: i64, coeffs: &[FieldElem]) -> Self {
        let coeffs = match field {
            FieldSpec::Rationals => Coeffs::Rational(
                coeffs
                    .iter()
                    .map(|c| match c {
                        FieldElem::Rational(q) => q.clone(),
                        _ => mixed_fields(),
                    })
                    .collect(),
            ),
            FieldSpec::Prime { p } => Coeffs::Modular {
                p,
                c: coeffs
                    .iter()
                    .map(|c| match c {
                        FieldElem::Modular { value, p: q } if *q == p => *value,
                        _ => mixed_fields(),
                    })
                    .collect(),
            },
        };
        LaurentScalar { lead, coeffs }.normalized()
    }

    pub fn field(&self) -> FieldSpec {
        self.coeffs.field()
    }

    /// Restores the canonical form. Idempotent.
    pub fn normalized(mut self) -> Self {
        let len = self.coeffs.len();
        let first = (0..len).find(|&i| !self.coeffs.is_zero_at(i));
        let Some(first) = first else {
            return LaurentScalar::zero(self.field());
        };
        let last = (0..len).rev().find(|&i| !self.coeffs.is_zero_at(i)).unwrap();
        match &mut self.coeffs {
            Coeffs::Rational(v) => {
                v.truncate(last + 1);
                v.drain(..first);
            }
            Coeffs::Modular { c, .. } => {
                c.truncate(last + 1);
                c.drain(..first);
            }
        }
        self.lead += first as i64;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 0
    }

    pub fn is_one(&self) -> bool {
        self.lead == 0 && self.coeffs.len() == 1 && self.coeffs.get(0).is_one()
    }

    /// `t`-adic valuation; `+inf` for zero.
    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.lead)
        }
    }

    /// Valuation of a value known to be nonzero.
    pub(crate) fn val(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.lead
    }

    /// True iff this is a unit of the local ring `k[t]_(t)`, i.e. has valuation 0.
    pub fn is_unit_in_r(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// True iff the valuation is nonnegative (zero included).
    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.lead >= 0
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn max_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.lead + self.coeffs.len() as i64 - 1)
        }
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i64) -> FieldElem {
        let idx = e - self.lead;
        if self.is_zero() || idx < 0 || idx as usize >= self.coeffs.len() {
            self.field().zero()
        } else {
            self.coeffs.get(idx as usize)
        }
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> Vec<(i64, FieldElem)> {
        (0..self.coeffs.len())
            .filter(|&i| !self.coeffs.is_zero_at(i))
            .map(|i| (self.lead + i as i64, self.coeffs.get(i)))
            .collect()
    }

    /// The lowest coefficient (the "angular component"); zero for zero.
    pub fn leading_coeff(&self) -> FieldElem {
        if self.is_zero() {
            self.field().zero()
        } else {
            self.coeffs.get(0)
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentScalar { lead: self.lead + k, coeffs: self.coeffs.clone() }
    }

    pub fn neg(&self) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Rational(v) => Coeffs::Rational(v.iter().map(|x| -x).collect()),
            Coeffs::Modular { p, c } => Coeffs::Modular { p: *p, c: c.iter().map(|&x| (p - x) % p).collect() },
        };
        LaurentScalar { lead: self.lead, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, true)
    }

    fn add_scaled(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let lead = self.lead.min(other.lead);
        let end = self.max_exponent().unwrap().max(other.max_exponent().unwrap());
        let len = (end - lead + 1) as usize;
        let (oa, ob) = ((self.lead - lead) as usize, (other.lead - lead) as usize);
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Rational(a), Coeffs::Rational(b)) => {
                let mut out = vec![BigRational::zero(); len];
                for (i, x) in a.iter().enumerate() {
                    out[oa + i] += x;
                }
                for (i, x) in b.iter().enumerate() {
                    if negate {
                        out[ob + i] -= x;
                    } else {
                        out[ob + i] += x;
                    }
                }
                Coeffs::Rational(out)
            }
            (Coeffs::Modular { p, c: a }, Coeffs::Modular { p: q, c: b }) if p == q => {
                let p = *p;
                let mut out = vec![0u64; len];
                for (i, &x) in a.iter().enumerate() {
                    out[oa + i] = x;
                }
                for (i, &x) in b.iter().enumerate() {
                    let y = if negate { (p - x) % p } else { x };
                    out[ob + i] = (out[ob + i] + y) % p;
                }
                Coeffs::Modular { p, c: out }
            }
            _ => mixed_fields(),
        };
        LaurentScalar { lead, coeffs }.normalized()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LaurentScalar::zero(self.field());
        }
        let lead = self.lead + other.lead;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Rational(a), Coeffs::Rational(b)) => {
                let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            out[i + j] += x * y;
                        }
                    }
                }
                Coeffs::Rational(out)
            }
            (Coeffs::Modular { p, c: a }, Coeffs::Modular { p: q, c: b }) if p == q => {
                let p = *p;
                let n = a.len() + b.len() - 1;
                // p < 2^32, so each product fits in 64 bits and sums of up to
                // 2^64 of them fit in u128.
                let mut acc = vec![0u128; n];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        acc[i + j] += (x * y) as u128;
                    }
                }
                Coeffs::Modular { p, c: acc.into_iter().map(|v| (v % p as u128) as u64).collect() }
            }
            _ => mixed_fields(),
        };
        // The product of two nonzero canonical elements is canonical over a domain.
        LaurentScalar { lead, coeffs }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        self.mul(&LaurentScalar::constant(c))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = LaurentScalar::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact quotient `self / divisor` in `k[t, 1/t]`, if it exists.
    pub fn div_exact(&self, divisor: &Self) -> Result<Option<Self>> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        let lead = self.lead - divisor.lead;
        let coeffs = match (&self.coeffs, &divisor.coeffs) {
            (Coeffs::Rational(a), Coeffs::Rational(b)) => match rational_long_div(a, b) {
                Some(q) => Coeffs::Rational(q),
                None => return Ok(None),
            },
            (Coeffs::Modular { p, c: a }, Coeffs::Modular { p: q, c: b }) if p == q => {
                let p = *p;
                let inv = inv_mod(b[0], p);
                match long_div(
                    a,
                    b,
                    |x| *x == 0,
                    |x, y| mul_mod(*x, *y, p),
                    |x, y| (x + p - y) % p,
                    |x| mul_mod(*x, inv, p),
                ) {
                    Some(q) => Coeffs::Modular { p, c: q },
                    None => return Ok(None),
                }
            }
            _ => mixed_fields(),
        };
        Ok(Some(LaurentScalar { lead, coeffs }.normalized()))
    }

    /// Value at `t = 0` of an integral element.
    pub fn at_zero(&self) -> FieldElem {
        debug_assert!(self.is_integral());
        self.coeff(0)
    }

    /// Removes the factor `t^valuation`, leaving a unit of the local ring.
    pub fn unit_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.shift(-self.lead)
    }
}

/// Division of `a` by `b` (both in increasing-degree order with `b[0] != 0`)
/// treated as power series; succeeds iff the quotient is a polynomial.
/// Exact division over `Q` without rational normalization in the inner loop.
///
/// With `A`, `B` the denominator-cleared integer polynomials and `q` the
/// quotient length, the `i`-th quotient coefficient of `A / B` has
/// denominator dividing `B_0^(i+1)`, so dividing `B_0^q A` by `B` stays in `Z`.
fn rational_long_div(a: &[BigRational], b: &[BigRational]) -> Option<Vec<BigRational>> {
    if a.len() < b.len() {
        return None;
    }
    let clear = |v: &[BigRational]| {
        let d = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&d / x.denom())).collect();
        (ints, d)
    };
    let (a_int, da) = clear(a);
    let (b_int, db) = clear(b);
    let qlen = a.len() - b.len() + 1;
    let b0 = b_int[0].clone();
    let scale = num_traits::pow(b0.clone(), qlen);
    let a_scaled: Vec<BigInt> = a_int.iter().map(|x| x * &scale).collect();
    let q = long_div(
        &a_scaled,
        &b_int,
        |x| x.is_zero(),
        |x, y| x * y,
        |x, y| x - y,
        |x| {
            debug_assert!((x % &b0).is_zero());
            x / &b0
        },
    )?;
    let den = da * scale;
    Some(q.into_iter().map(|x| BigRational::new(x * &db, den.clone())).collect())
}

fn long_div<E: Clone>(
    a: &[E],
    b: &[E],
    is_zero: impl Fn(&E) -> bool,
    mul: impl Fn(&E, &E) -> E,
    sub: impl Fn(&E, &E) -> E,
    div_b0: impl Fn(&E) -> E,
) -> Option<Vec<E>> {
    if a.len() < b.len() {
        return None;
    }
    let mut rem: Vec<E> = a.to_vec();
    let qlen = a.len() - b.len() + 1;
    let mut q = Vec::with_capacity(qlen);
    for i in 0..qlen {
        let c = div_b0(&rem[i]);
        if !is_zero(&c) {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] = sub(&rem[i + j], &mul(&c, bj));
            }
        }
        q.push(c);
    }
    if rem[qlen..].iter().all(is_zero) {
        Some(q)
    } else {
        None
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => a.partial_cmp(b),
            (FieldElem::Modular { value: a, .. }, FieldElem::Modular { value: b, .. }) => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if *e == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses a polynomial literal such as `"1 + 2*t^3 - 1/2*t^5"`.
///
/// Terms are `c`, `c*t`, `c*t^e`, `t^e` or `c t^e`; coefficients are integers
/// or `num/den`; exponents are nonnegative integers no larger than `degree_cap`.
pub fn parse_literal(field: FieldSpec, src: &str, degree_cap: i64) -> Result<LaurentScalar> {
    let mut p = LiteralParser { src: src.as_bytes(), pos: 0, field, cap: degree_cap };
    p.parse()
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
    field: FieldSpec,
    cap: i64,
}

impl LiteralParser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Literal { column: self.pos + 1, message: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn parse(&mut self) -> Result<LaurentScalar> {
        let mut acc = LaurentScalar::zero(self.field);
        let mut first = true;
        loop {
            let negative = match self.peek() {
                None if first => return Err(self.err("empty literal")),
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(c) => return Err(self.err(format!("expected '+' or '-', found '{}'", c as char))),
            };
            first = false;
            let mut term = self.term()?;
            if negative {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentScalar> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    self.field.from_ratio(&num, &den).map_err(|_| self.err("denominator vanishes in the field"))?
                } else {
                    self.field.from_bigint(&num)
                }
            }
            Some(b't') => self.field.one(),
            Some(c) => return Err(self.err(format!("unexpected '{}'", c as char))),
            None => return Err(self.err("expected a term")),
        };
        let mut exponent = 0i64;
        let mut saw_star = false;
        if self.peek() == Some(b'*') {
            self.pos += 1;
            saw_star = true;
        }
        if self.peek() == Some(b't') {
            self.pos += 1;
            exponent = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                if self.peek() == Some(b'-') {
                    return Err(self.err("negative exponents are not accepted on input"));
                }
                let e = self.integer()?;
                exponent = e
                    .to_i64()
                    .filter(|&e| e <= self.cap)
                    .ok_or_else(|| self.err(format!("exponent exceeds the degree cap {}", self.cap)))?;
            }
        } else if saw_star {
            return Err(self.err("expected 't' after '*'"));
        }
        if exponent > self.cap {
            return Err(self.err(format!("exponent exceeds the degree cap {}", self.cap)));
        }
        Ok(LaurentScalar::monomial(&coeff, exponent))
    }
}
