//! Pencils of quadrics over the valuation ring, the weight-system action,
//! Plücker coordinates, multiplicities and saturation.
//!
//! A quadric `q = sum_{i<=j} c_ij x_i x_j` is stored as its symmetric Gram
//! matrix `m` with `m_ii = c_ii` and `m_ij = m_ji = c_ij / 2` (the coefficient
//! field has odd or zero characteristic). Plücker coordinates are taken on the
//! monomial coefficient vector `(c_ij)_{i<=j}` in lexicographic `(i, j)` order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::ring::{FieldElem, FieldSpec, LaurentScalar, Valuation};

/// Index pairs `(i, j)` with `i <= j`, in the order used by coefficient vectors.
pub fn monomials(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    field: FieldSpec,
    m: Vec<Vec<LaurentScalar>>,
}

impl QuadraticForm {
    pub fn zero(field: FieldSpec, n: usize) -> Self {
        QuadraticForm { field, m: vec![vec![LaurentScalar::zero(field); n]; n] }
    }

    /// Builds a form from monomial coefficients `(i, j, c)` (0-based, any order of
    /// `i` and `j`); repeated monomials are summed.
    pub fn from_monomials(field: FieldSpec, n: usize, terms: &[(usize, usize, LaurentScalar)]) -> Result<Self> {
        let mut q = QuadraticForm::zero(field, n);
        let half = field.from_i64(2).inv()?;
        for (i, j, c) in terms {
            let (i, j) = if i <= j { (*i, *j) } else { (*j, *i) };
            if j >= n {
                return Err(Error::Dimension(format!("variable index {} out of range for n = {n}", j + 1)));
            }
            if c.field() != field {
                return Err(Error::Dimension("coefficient over a different field".into()));
            }
            if i == j {
                q.m[i][i] = q.m[i][i].add(c);
            } else {
                let h = c.scale(&half);
                q.m[i][j] = q.m[i][j].add(&h);
                q.m[j][i] = q.m[i][j].clone();
            }
        }
        Ok(q)
    }

    /// Builds a form from its symmetric Gram matrix.
    pub fn from_matrix(m: Vec<Vec<LaurentScalar>>) -> Result<Self> {
        let n = m.len();
        if n == 0 || m.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("Gram matrix must be square and nonempty".into()));
        }
        let field = m[0][0].field();
        for i in 0..n {
            for j in 0..n {
                if m[i][j].field() != field {
                    return Err(Error::Dimension("mixed coefficient fields".into()));
                }
                if m[i][j] != m[j][i] {
                    return Err(Error::Dimension("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(QuadraticForm { field, m })
    }

    /// `sum_i d_i x_i^2`.
    pub fn diagonal(d: &[LaurentScalar]) -> Self {
        let field = d[0].field();
        let mut q = QuadraticForm::zero(field, d.len());
        for (i, c) in d.iter().enumerate() {
            q.m[i][i] = c.clone();
        }
        q
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn matrix(&self) -> &[Vec<LaurentScalar>] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentScalar {
        &self.m[i][j]
    }

    /// Coefficient of the monomial `x_i x_j`.
    pub fn monomial_coeff(&self, i: usize, j: usize) -> LaurentScalar {
        if i == j {
            self.m[i][i].clone()
        } else {
            self.m[i][j].add(&self.m[i][j])
        }
    }

    /// Monomial coefficients in [`monomials`] order.
    pub fn coefficient_vector(&self) -> Vec<LaurentScalar> {
        monomials(self.n()).into_iter().map(|(i, j)| self.monomial_coeff(i, j)).collect()
    }

    pub fn from_coefficient_vector(field: FieldSpec, n: usize, v: &[LaurentScalar]) -> Result<Self> {
        let terms: Vec<_> = monomials(n).into_iter().zip(v).map(|((i, j), c)| (i, j, c.clone())).collect();
        QuadraticForm::from_monomials(field, n, &terms)
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(LaurentScalar::is_zero)
    }

    /// Minimum valuation over the coefficients.
    pub fn valuation(&self) -> Valuation {
        self.m.iter().flatten().map(LaurentScalar::valuation).min().unwrap_or(Valuation::Infinite)
    }

    /// `F^T M F`, i.e. the form `q(F x)`.
    pub fn transform(&self, f: &[Vec<LaurentScalar>]) -> Self {
        let n = self.n();
        let zero = LaurentScalar::zero(self.field);
        // mf = M F
        let mut mf = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for k in 0..n {
                    if !self.m[i][k].is_zero() && !f[k][j].is_zero() {
                        acc = acc.add(&self.m[i][k].mul(&f[k][j]));
                    }
                }
                mf[i][j] = acc;
            }
        }
        let mut out = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut acc = zero.clone();
                for k in 0..n {
                    if !f[k][i].is_zero() && !mf[k][j].is_zero() {
                        acc = acc.add(&f[k][i].mul(&mf[k][j]));
                    }
                }
                out[j][i] = acc.clone();
                out[i][j] = acc;
            }
        }
        QuadraticForm { field: self.field, m: out }
    }

    /// The substitution `x_i -> t^{w_i} x_i`.
    pub fn apply_weights(&self, rho: &WeightSystem) -> Self {
        let n = self.n();
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.m[i][j] = self.m[i][j].shift(rho.0[i] + rho.0[j]);
            }
        }
        out
    }

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        QuadraticForm { field: self.field, m: self.m.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect() }
    }

    /// Entry-wise value at `t = 0`; requires integral entries.
    pub fn at_zero(&self) -> Vec<Vec<FieldElem>> {
        self.m.iter().map(|r| r.iter().map(LaurentScalar::at_zero).collect()).collect()
    }

    /// `q(x)` at a point with field coordinates.
    pub fn evaluate(&self, x: &[LaurentScalar]) -> LaurentScalar {
        let mut acc = LaurentScalar::zero(self.field);
        for i in 0..self.n() {
            for j in 0..self.n() {
                acc = acc.add(&self.m[i][j].mul(&x[i]).mul(&x[j]));
            }
        }
        acc
    }

    /// Largest `t`-exponent over all coefficients.
    pub fn max_exponent(&self) -> Option<i64> {
        self.m.iter().flatten().filter_map(LaurentScalar::max_exponent).max()
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j) in monomials(self.n()) {
            let c = self.monomial_coeff(i, j);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let var = if i == j { format!("x{}^2", i + 1) } else { format!("x{}*x{}", i + 1, j + 1) };
            if c.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "({c})*{var}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `t`-valuation of `q` with respect to a weight system: the largest `N` with
/// `t^-N (rho . q)` integral, i.e. `min_{c_ij != 0} val(c_ij) + w_i + w_j`.
pub fn val_rho(q: &QuadraticForm, rho: &WeightSystem) -> Result<i64> {
    rho.check_len(q.n())?;
    let mut best: Option<i64> = None;
    for i in 0..q.n() {
        for j in i..q.n() {
            let c = q.entry(i, j);
            if !c.is_zero() {
                let v = c.val() + rho.0[i] + rho.0[j];
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
    }
    best.ok_or(Error::ZeroForm)
}

/// Integer weights `(w_1, ..., w_n)` acting by `x_i -> t^{w_i} x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightSystem(pub Vec<i64>);

impl WeightSystem {
    pub fn zero(n: usize) -> Self {
        WeightSystem(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&w| w >= 0)
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// The effective system obtained by subtracting the minimum weight; it
    /// destabilizes whenever the original does.
    pub fn effective_part(&self) -> Self {
        let m = self.0.iter().copied().min().unwrap_or(0);
        WeightSystem(self.0.iter().map(|w| w - m).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        WeightSystem(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::Dimension(format!("weight system has length {}, expected {n}", self.0.len())));
        }
        Ok(())
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// An element of `GL_n(R)`: integral entries and a unit determinant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordinateChange {
    m: Vec<Vec<LaurentScalar>>,
}

impl CoordinateChange {
    pub fn new(m: Vec<Vec<LaurentScalar>>) -> Result<Self> {
        let n = m.len();
        if n == 0 || m.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("coordinate change must be square".into()));
        }
        if m.iter().flatten().any(|x| !x.is_integral()) {
            return Err(Error::NotInvertible);
        }
        let one = LaurentScalar::one(m[0][0].field());
        if !determinant(&m, &one).is_unit_in_r() {
            return Err(Error::NotInvertible);
        }
        Ok(CoordinateChange { m })
    }

    /// A matrix over `k`; invertible iff its determinant is nonzero.
    pub fn from_field_matrix(m: &[Vec<FieldElem>]) -> Result<Self> {
        CoordinateChange::new(m.iter().map(|r| r.iter().map(LaurentScalar::constant).collect()).collect())
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = vec![vec![LaurentScalar::zero(field); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = LaurentScalar::one(field);
        }
        CoordinateChange { m }
    }

    /// The substitution `x_i -> x_{perm[i]}`.
    pub fn permutation(field: FieldSpec, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = vec![vec![LaurentScalar::zero(field); n]; n];
        for (i, &p) in perm.iter().enumerate() {
            m[i][p] = LaurentScalar::one(field);
        }
        CoordinateChange { m }
    }

    /// The substitution `x_i -> x_i + c x_j` (`i != j`).
    pub fn transvection(field: FieldSpec, n: usize, i: usize, j: usize, c: &FieldElem) -> Self {
        let mut id = CoordinateChange::identity(field, n);
        id.m[i][j] = LaurentScalar::constant(c);
        id
    }

    pub fn matrix(&self) -> &[Vec<LaurentScalar>] {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn is_identity(&self) -> bool {
        self.m
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
    }
}

/// An ordered pair of quadrics; an `R`-basis of the pencil when normalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pencil {
    pub f: QuadraticForm,
    pub g: QuadraticForm,
}

impl Pencil {
    pub fn new(f: QuadraticForm, g: QuadraticForm) -> Result<Self> {
        if f.n() != g.n() {
            return Err(Error::Dimension(format!("quadrics in {} and {} variables", f.n(), g.n())));
        }
        if f.n() < 2 {
            return Err(Error::Dimension("need at least two variables".into()));
        }
        if f.field() != g.field() {
            return Err(Error::Dimension("quadrics over different fields".into()));
        }
        Ok(Pencil { f, g })
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn field(&self) -> FieldSpec {
        self.f.field()
    }

    /// Integral entries and Plücker valuation 0.
    pub fn is_normalized(&self) -> bool {
        self.f.valuation() >= Valuation::Finite(0)
            && self.g.valuation() >= Valuation::Finite(0)
            && plucker(self).map(|p| p.min_valuation() == 0).unwrap_or(false)
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized("entries must be integral with Plücker valuation 0".into()));
        }
        Ok(())
    }

    pub fn transform(&self, f: &[Vec<LaurentScalar>]) -> Pencil {
        Pencil { f: self.f.transform(f), g: self.g.transform(f) }
    }

    /// The basis `(a f + b g, c f + d g)`.
    pub fn mix(&self, a: &LaurentScalar, b: &LaurentScalar, c: &LaurentScalar, d: &LaurentScalar) -> Pencil {
        let lin = |x: &LaurentScalar, y: &LaurentScalar| {
            let m = self
                .f
                .matrix()
                .iter()
                .zip(self.g.matrix())
                .map(|(rf, rg)| rf.iter().zip(rg).map(|(p, q)| p.mul(x).add(&q.mul(y))).collect())
                .collect();
            QuadraticForm { field: self.field(), m }
        };
        Pencil { f: lin(a, b), g: lin(c, d) }
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.f.max_exponent().max(self.g.max_exponent())
    }
}

/// The 2x2 minors of the `2 x r` coefficient matrix of a pencil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerVector {
    n: usize,
    minors: Vec<LaurentScalar>,
}

impl PluckerVector {
    /// Monomial-index pairs `(a, b)`, `a < b`, in storage order.
    pub fn index_pairs(n: usize) -> Vec<(usize, usize)> {
        let r = n * (n + 1) / 2;
        (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).collect()
    }

    pub fn minors(&self) -> &[LaurentScalar] {
        &self.minors
    }

    /// The minor for monomials `(i, j)` and `(l, m)` (0-based, `i <= j`, `l <= m`).
    pub fn get(&self, ij: (usize, usize), lm: (usize, usize)) -> LaurentScalar {
        let mons = monomials(self.n);
        let a = mons.iter().position(|&x| x == ij).expect("monomial index");
        let b = mons.iter().position(|&x| x == lm).expect("monomial index");
        let r = mons.len();
        let pos = |a: usize, b: usize| a * r - a * (a + 1) / 2 + (b - a - 1);
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.minors[pos(a, b)].clone(),
            std::cmp::Ordering::Greater => self.minors[pos(b, a)].neg(),
            std::cmp::Ordering::Equal => LaurentScalar::zero(self.minors[0].field()),
        }
    }

    /// Minimum valuation over the coordinates (finite: the vector is nonzero).
    pub fn min_valuation(&self) -> i64 {
        self.minors.iter().filter(|x| !x.is_zero()).map(LaurentScalar::val).min().expect("nonzero Plücker vector")
    }
}

pub fn plucker(p: &Pencil) -> Result<PluckerVector> {
    let a = p.f.coefficient_vector();
    let b = p.g.coefficient_vector();
    let minors: Vec<LaurentScalar> =
        PluckerVector::index_pairs(p.n()).into_iter().map(|(i, j)| a[i].mul(&b[j]).sub(&a[j].mul(&b[i]))).collect();
    if minors.iter().all(LaurentScalar::is_zero) {
        return Err(Error::DependentPencil);
    }
    Ok(PluckerVector { n: p.n(), minors })
}

/// `q(C D x)` for both quadrics, where `D = diag(t^{w_1}, ..., t^{w_n})`:
/// first the coordinate change, then the weights.
pub fn act(p: &Pencil, rho: &WeightSystem, c: &CoordinateChange) -> Result<Pencil> {
    rho.check_len(p.n())?;
    if c.n() != p.n() {
        return Err(Error::Dimension("coordinate change size differs from the pencil".into()));
    }
    let base = if c.is_identity() { p.clone() } else { p.transform(c.matrix()) };
    Ok(Pencil { f: base.f.apply_weights(rho), g: base.g.apply_weights(rho) })
}

/// The matrix `F = C D` realizing [`act`].
pub fn action_matrix(rho: &WeightSystem, c: &CoordinateChange) -> Vec<Vec<LaurentScalar>> {
    c.matrix().iter().map(|row| row.iter().enumerate().map(|(j, x)| x.shift(rho.0[j])).collect()).collect()
}

/// Multiplicity of `p` with respect to `rho` in the coordinates `c`: the
/// minimum valuation of the Plücker coordinates of the transformed pencil.
pub fn mult(p: &Pencil, rho: &WeightSystem, c: &CoordinateChange) -> Result<i64> {
    Ok(plucker(&act(p, rho, c)?)?.min_valuation())
}

/// Plücker valuations of a fixed pencil, reusable across weight systems:
/// the weight action multiplies the coordinate for monomials `a`, `b` by
/// `t^{e_a + e_b}` with `e_(i,j) = w_i + w_j`.
#[derive(Clone, Debug)]
pub struct PluckerProfile {
    n: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl PluckerProfile {
    pub fn new(p: &Pencil) -> Result<Self> {
        let pv = plucker(p)?;
        let entries = PluckerVector::index_pairs(p.n())
            .into_iter()
            .zip(pv.minors())
            .filter(|(_, x)| !x.is_zero())
            .map(|((a, b), x)| (a, b, x.val()))
            .collect();
        Ok(PluckerProfile { n: p.n(), entries })
    }

    pub fn mult(&self, rho: &WeightSystem) -> i64 {
        let mons = monomials(self.n);
        let e: Vec<i64> = mons.iter().map(|&(i, j)| rho.0[i] + rho.0[j]).collect();
        self.entries.iter().map(|&(a, b, v)| v + e[a] + e[b]).min().expect("nonzero Plücker vector")
    }
}

/// Replaces a `K`-basis `(f, g)` by an `R`-basis of the saturated lattice
/// `span_K(f, g) ∩ R^r`, returning it with the total power of `t` removed.
///
/// This is Smith normal form over the valuation ring on the `2 x r`
/// coefficient matrix: the elementary divisors are `t^{d1}`, `t^{d2}` and the
/// shed valuation `d1 + d2` equals the Plücker valuation of the input.
pub fn saturate(f: &QuadraticForm, g: &QuadraticForm) -> Result<(Pencil, i64)> {
    let p = Pencil::new(f.clone(), g.clone())?;
    let field = p.field();
    let n = p.n();
    let mut rows = [f.coefficient_vector(), g.coefficient_vector()];

    let (mut prow, mut pcol, mut best) = (0, 0, None::<i64>);
    for (ri, row) in rows.iter().enumerate() {
        for (ci, x) in row.iter().enumerate() {
            if !x.is_zero() && best.is_none_or(|b| x.val() < b) {
                (prow, pcol, best) = (ri, ci, Some(x.val()));
            }
        }
    }
    let d1 = best.ok_or(Error::DependentPencil)?;
    if prow == 1 {
        rows.swap(0, 1);
    }
    let [r1, r2] = rows;
    let pivot = r1[pcol].clone();
    let unit = pivot.unit_part();
    let c = r2[pcol].shift(-d1);
    let eliminated: Vec<LaurentScalar> = if unit.terms().len() == 1 {
        let factor = c.scale(&unit.leading_coeff().inv()?);
        r2.iter().zip(&r1).map(|(y, x)| y.sub(&factor.mul(x))).collect()
    } else {
        r2.iter().zip(&r1).map(|(y, x)| unit.mul(y).sub(&c.mul(x))).collect()
    };
    debug_assert!(eliminated[pcol].is_zero());
    let d2 = eliminated.iter().filter(|x| !x.is_zero()).map(LaurentScalar::val).min().ok_or(Error::DependentPencil)?;
    let r1: Vec<LaurentScalar> = r1.iter().map(|x| x.shift(-d1)).collect();
    let r2: Vec<LaurentScalar> = eliminated.iter().map(|x| x.shift(-d2)).collect();
    let out = Pencil::new(
        QuadraticForm::from_coefficient_vector(field, n, &r1)?,
        QuadraticForm::from_coefficient_vector(field, n, &r2)?,
    )?;
    Ok((out, d1 + d2))
}
