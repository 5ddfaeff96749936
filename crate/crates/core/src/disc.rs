//! The determinant form `det(lambda A + mu B)` of a pencil and the
//! discriminant of binary forms.
//!
//! The discriminant is normalized as the classical one: for
//! `c2 lambda^2 + c1 lambda mu + c0 mu^2` it is `c1^2 - 4 c0 c2`. In general
//! `Disc(F) = (-1)^{n(n-1)/2} Res_{n,n-1}(F, F') / c_n`, computed with the
//! formal degrees so that it specializes correctly in every characteristic.

use std::fmt;

use crate::error::Result;
use crate::linalg::{determinant, laurent_determinant, CommRing, Poly};
use crate::pencil::{Pencil, QuadraticForm};
use crate::ring::{FieldSpec, LaurentScalar, Valuation};

/// `Phi = sum_i c_i lambda^i mu^{n-i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<LaurentScalar>,
}

impl BinaryForm {
    /// `coeffs[i]` multiplies `lambda^i mu^{n-i}`; the degree is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<LaurentScalar>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[LaurentScalar] {
        &self.coeffs
    }

    pub fn field(&self) -> FieldSpec {
        self.coeffs[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentScalar::is_zero)
    }

    /// `Phi(a lambda + b mu, c lambda + d mu)`.
    pub fn substitute(&self, a: &LaurentScalar, b: &LaurentScalar, c: &LaurentScalar, d: &LaurentScalar) -> Self {
        // Work with polynomials in lambda (mu = 1), tracking the full degree.
        let n = self.degree();
        let l = Poly::linear(b.clone(), a.clone());
        let m = Poly::linear(d.clone(), c.clone());
        let one = l.one_like();
        let mut l_pows = vec![one.clone()];
        let mut m_pows = vec![one];
        for k in 1..=n {
            l_pows.push(l_pows[k - 1].mul(&l));
            m_pows.push(m_pows[k - 1].mul(&m));
        }
        let mut acc = l.zero_like();
        for (i, ci) in self.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let term = l_pows[i].mul(&m_pows[n - i]);
            let scaled = Poly::new(term.coeffs().iter().map(|x| x.mul(ci)).collect(), ci.zero_like());
            acc = acc.add(&scaled);
        }
        BinaryForm { coeffs: (0..=n).map(|i| acc.coeff(i)).collect() }
    }

    fn reversed(&self) -> Self {
        BinaryForm { coeffs: self.coeffs.iter().rev().cloned().collect() }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (i, n - i) {
                (0, 0) => String::new(),
                (a, 0) => pow_str("l", a),
                (0, b) => pow_str("m", b),
                (a, b) => format!("{}*{}", pow_str("l", a), pow_str("m", b)),
            };
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn pow_str(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

/// `det(lambda A + mu B)` for the Gram matrices `A`, `B` of the two quadrics.
pub fn pencil_determinant(p: &Pencil) -> BinaryForm {
    form_determinant(&p.f, &p.g)
}

pub(crate) fn form_determinant(a: &QuadraticForm, b: &QuadraticForm) -> BinaryForm {
    if a.field() == FieldSpec::Rationals {
        return kronecker_determinant(a, b);
    }
    expansion_determinant(a, b)
}

fn expansion_determinant(a: &QuadraticForm, b: &QuadraticForm) -> BinaryForm {
    let n = a.n();
    let field = a.field();
    let m: Vec<Vec<Poly<LaurentScalar>>> =
        (0..n).map(|i| (0..n).map(|j| Poly::linear(b.entry(i, j).clone(), a.entry(i, j).clone())).collect()).collect();
    let one = Poly::new(vec![LaurentScalar::one(field)], LaurentScalar::zero(field));
    let det = determinant(&m, &one);
    BinaryForm { coeffs: (0..=n).map(|i| det.coeff(i)).collect() }
}

/// `det(lambda A + mu B)` over `Q` as the single Laurent determinant
/// `det(t^K A + B)`, with `K` larger than the `t`-degree span of every
/// coefficient of the form so that the coefficients can be read off.
fn kronecker_determinant(a: &QuadraticForm, b: &QuadraticForm) -> BinaryForm {
    let n = a.n();
    let field = a.field();
    let entries = a.matrix().iter().chain(b.matrix()).flatten().filter(|x| !x.is_zero());
    let (mut low, mut high) = (i64::MAX, i64::MIN);
    for x in entries {
        low = low.min(x.valuation().finite().expect("nonzero"));
        high = high.max(x.max_exponent().expect("nonzero"));
    }
    if low > high {
        return BinaryForm::new(vec![LaurentScalar::zero(field); n + 1]);
    }
    let k = n as i64 * (high - low) + 1;
    let m: Vec<Vec<LaurentScalar>> = (0..n)
        .map(|i| (0..n).map(|j| a.entry(i, j).shift(k - low).add(&b.entry(i, j).shift(-low))).collect())
        .collect();
    let det = laurent_determinant(&m, field);
    let mut parts: Vec<Vec<(i64, crate::ring::FieldElem)>> = vec![Vec::new(); n + 1];
    for (e, c) in det.terms() {
        parts[e.div_euclid(k) as usize].push((e.rem_euclid(k) + n as i64 * low, c));
    }
    BinaryForm::new(
        parts
            .into_iter()
            .map(|ts| {
                ts.iter().fold(LaurentScalar::zero(field), |acc, (e, c)| acc.add(&LaurentScalar::monomial(c, *e)))
            })
            .collect(),
    )
}

/// The discriminant of a binary form; zero iff the form vanishes or has a
/// repeated root in `P^1` over the algebraic closure. Forms of degree below
/// two have discriminant 1.
pub fn binary_discriminant(phi: &BinaryForm) -> LaurentScalar {
    let field = phi.field();
    let n = phi.degree();
    if phi.is_zero() {
        return LaurentScalar::zero(field);
    }
    if n < 2 {
        return LaurentScalar::one(field);
    }
    if !phi.coeffs[n].is_zero() {
        return disc_with_leading(phi);
    }
    if !phi.coeffs[0].is_zero() {
        // lambda <-> mu has determinant -1 and n(n-1) is even.
        return disc_with_leading(&phi.reversed());
    }
    // Roots at both 0 and infinity: shear mu -> mu + s lambda (determinant 1)
    // with s chosen so that Phi(1, s) != 0. Among n + 1 distinct values of s
    // at least one works.
    let zero = LaurentScalar::zero(field);
    let one = LaurentScalar::one(field);
    for k in 0..=n as i64 {
        let s = LaurentScalar::t_pow(field, k);
        let sheared = phi.substitute(&one, &zero, &s, &one);
        if !sheared.coeffs[n].is_zero() {
            return disc_with_leading(&sheared);
        }
    }
    unreachable!("a nonzero form of degree n has at most n roots")
}

fn disc_with_leading(phi: &BinaryForm) -> LaurentScalar {
    let field = phi.field();
    let n = phi.degree();
    let c = &phi.coeffs;
    let zero = LaurentScalar::zero(field);
    // F = sum c_i x^i, F' = sum i c_i x^{i-1}; Sylvester rows in descending degree.
    let f_desc: Vec<LaurentScalar> = c.iter().rev().cloned().collect();
    let df_desc: Vec<LaurentScalar> =
        (1..=n).rev().map(|i| c[i].mul(&LaurentScalar::from_i64(field, i as i64))).collect();
    let size = 2 * n - 1;
    let mut syl = vec![vec![zero.clone(); size]; size];
    for r in 0..n - 1 {
        for (k, x) in f_desc.iter().enumerate() {
            syl[r][r + k] = x.clone();
        }
    }
    for r in 0..n {
        for (k, x) in df_desc.iter().enumerate() {
            syl[n - 1 + r][r + k] = x.clone();
        }
    }
    let res = laurent_determinant(&syl, field);
    let disc =
        res.div_exact(&c[n]).expect("nonzero leading coefficient").expect("resultant divisible by leading coefficient");
    if (n * (n - 1) / 2) % 2 == 1 {
        disc.neg()
    } else {
        disc
    }
}

/// `val_t D(det(lambda A + mu B))`; `+inf` when the discriminant vanishes.
pub fn disc_valuation(p: &Pencil) -> Valuation {
    binary_discriminant(&pencil_determinant(p)).valuation()
}

/// Checks `D(det(lambda xi A + mu zeta B)) = (xi zeta)^{n(n-1)} D(det(lambda A + mu B))`.
pub fn check_scaling_identity(
    a: &QuadraticForm,
    b: &QuadraticForm,
    xi: &LaurentScalar,
    zeta: &LaurentScalar,
) -> Result<bool> {
    let p = Pencil::new(a.clone(), b.clone())?;
    let n = p.n() as u32;
    let lhs = binary_discriminant(&form_determinant(&a.scale(xi), &b.scale(zeta)));
    let rhs = xi.mul(zeta).pow(n * (n - 1)).mul(&binary_discriminant(&pencil_determinant(&p)));
    Ok(lhs == rhs)
}

/// The generic fibre is smooth iff the determinant form is not identically
/// zero and has `n` distinct roots in `P^1`, i.e. its discriminant is nonzero.
pub fn generic_fibre_smooth(p: &Pencil) -> bool {
    let det = pencil_determinant(p);
    !det.is_zero() && !binary_discriminant(&det).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_literal;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn l(s: &str) -> LaurentScalar {
        parse_literal(Q, s, 64).unwrap()
    }

    fn diag(xs: &[&str]) -> QuadraticForm {
        QuadraticForm::diagonal(&xs.iter().map(|s| l(s)).collect::<Vec<_>>())
    }

    fn form(cs: &[&str]) -> BinaryForm {
        BinaryForm::new(cs.iter().map(|s| l(s)).collect())
    }

    #[test]
    fn determinant_examples() {
        let p = Pencil::new(diag(&["1", "1"]), diag(&["1", "2"])).unwrap();
        assert_eq!(pencil_determinant(&p), form(&["2", "3", "1"]));
        let p = Pencil::new(diag(&["1", "0"]), diag(&["0", "1"])).unwrap();
        assert_eq!(pencil_determinant(&p), form(&["0", "1", "0"]));
        let p = Pencil::new(diag(&["1", "1", "1"]), diag(&["1", "2", "3"])).unwrap();
        assert_eq!(pencil_determinant(&p), form(&["6", "11", "6", "1"]));
    }

    #[test]
    fn discriminant_examples() {
        // (c2, c1, c0) = (1, 3, 2)
        assert_eq!(binary_discriminant(&form(&["2", "3", "1"])), l("1"));
        assert_eq!(binary_discriminant(&form(&["0", "1", "0"])), l("1"));
        assert_eq!(binary_discriminant(&form(&["1", "2", "1"])), l("0"));
        // x^3 - x: roots 0, 1, -1; classical discriminant 4.
        assert_eq!(binary_discriminant(&form(&["0", "-1", "0", "1"])), l("4"));
        // lambda mu (lambda - mu): same roots in P^1 terms, no leading coefficient.
        assert_eq!(binary_discriminant(&form(&["0", "-1", "1", "0"])), l("1"));
    }

    #[test]
    fn discriminant_valuation_examples() {
        let p = Pencil::new(diag(&["1", "1"]), diag(&["1", "2"])).unwrap();
        assert_eq!(disc_valuation(&p), Valuation::Finite(0));
        let p = Pencil::new(diag(&["1", "1"]), diag(&["1", "1 + t"])).unwrap();
        assert_eq!(binary_discriminant(&pencil_determinant(&p)), l("t^2"));
        assert_eq!(disc_valuation(&p), Valuation::Finite(2));
        let p = Pencil::new(diag(&["1", "0"]), diag(&["2", "0"])).unwrap();
        assert_eq!(disc_valuation(&p), Valuation::Infinite);
    }

    #[test]
    fn scaling_identity_examples() {
        let (a, b) = (diag(&["1", "1"]), diag(&["1", "2"]));
        assert!(check_scaling_identity(&a, &b, &l("1"), &l("1")).unwrap());
        assert!(check_scaling_identity(&a, &b, &l("t"), &l("1")).unwrap());
        let lhs = binary_discriminant(&form_determinant(&a.scale(&l("t")), &b));
        assert_eq!(lhs, l("t^2"));
    }

    #[test]
    fn smoothness_examples() {
        let n = 5;
        let ones: Vec<String> = (0..n).map(|_| "1".to_string()).collect();
        let ks: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        let a = diag(&ones.iter().map(String::as_str).collect::<Vec<_>>());
        let b = diag(&ks.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(generic_fibre_smooth(&Pencil::new(a, b).unwrap()));
        assert!(!generic_fibre_smooth(&Pencil::new(diag(&["1", "1"]), diag(&["1", "1"])).unwrap()));
        // det = lambda mu (lambda + mu): roots at (0:1) and (1:0) plus one more.
        let p = Pencil::new(diag(&["1", "0", "1"]), diag(&["0", "1", "1"])).unwrap();
        assert_eq!(pencil_determinant(&p), form(&["0", "1", "1", "0"]));
        assert!(generic_fibre_smooth(&p));
    }

    #[test]
    fn characteristic_dividing_degree() {
        // Over F_5 the resultant of the two partial derivatives of a quintic
        // vanishes identically; the classical discriminant does not.
        let f5 = FieldSpec::prime(5).unwrap();
        let lit = |s: &str| parse_literal(f5, s, 64).unwrap();
        let a = QuadraticForm::diagonal(&vec![lit("1"); 5]);
        let b = QuadraticForm::diagonal(&["1", "2", "3", "4", "t"].map(lit));
        let p = Pencil::new(a, b).unwrap();
        assert_eq!(disc_valuation(&p), Valuation::Finite(0));
    }

    #[test]
    fn kronecker_matches_expansion() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in 2..=5 {
            for _ in 0..5 {
                let a = crate::sample::random_form(Q, n, 2, 0.7, &mut rng).scale(&LaurentScalar::t_pow(Q, -1));
                let b = crate::sample::random_form(Q, n, 3, 0.7, &mut rng);
                assert_eq!(kronecker_determinant(&a, &b), expansion_determinant(&a, &b));
            }
        }
    }
}
