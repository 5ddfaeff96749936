//! Diagnostics on the central fibre `X_0 = {f(x, 0) = g(x, 0) = 0}`.

use crate::error::{Error, Result};
use crate::linalg::{determinant, kernel, poly_gcd, rank, CommRing, Poly};
use crate::pencil::Pencil;
use crate::ring::{FieldElem, FieldSpec, LaurentScalar};

/// Default cap on the number of subspaces [`contains_plane`] may enumerate.
pub const DEFAULT_SUBSPACE_CAP: u128 = 1_000_000;

/// Reads `PENCIL_SUBSPACE_CAP`, falling back to [`DEFAULT_SUBSPACE_CAP`].
pub fn subspace_cap_from_env() -> u128 {
    std::env::var("PENCIL_SUBSPACE_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SUBSPACE_CAP)
}

/// The Gram matrices of a normalized pencil at `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralFibre {
    field: FieldSpec,
    pub f: Vec<Vec<FieldElem>>,
    pub g: Vec<Vec<FieldElem>>,
}

impl CentralFibre {
    pub fn from_pencil(p: &Pencil) -> Result<Self> {
        if !p.f.valuation().finite().is_none_or(|v| v >= 0) || !p.g.valuation().finite().is_none_or(|v| v >= 0) {
            return Err(Error::NotNormalized("central fibre needs integral coefficients".into()));
        }
        Ok(CentralFibre { field: p.field(), f: p.f.at_zero(), g: p.g.at_zero() })
    }

    /// From Gram matrices over `k`.
    pub fn from_matrices(field: FieldSpec, f: Vec<Vec<FieldElem>>, g: Vec<Vec<FieldElem>>) -> Result<Self> {
        let n = f.len();
        if n == 0 || g.len() != n || f.iter().chain(&g).any(|r| r.len() != n) {
            return Err(Error::Dimension("central fibre matrices must be square of equal size".into()));
        }
        Ok(CentralFibre { field, f, g })
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    fn is_zero(&self) -> bool {
        self.f.iter().chain(&self.g).flatten().all(FieldElem::is_zero)
    }

    /// `q(C x)` for both forms, `C` over `k`.
    pub fn transform(&self, c: &[Vec<FieldElem>]) -> Self {
        let conj = |m: &Vec<Vec<FieldElem>>| {
            let n = self.n();
            let mut out = vec![vec![self.field.zero(); n]; n];
            for (i, row) in out.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    let mut acc = self.field.zero();
                    for k in 0..n {
                        for l in 0..n {
                            if !m[k][l].is_zero() {
                                acc = acc.add(&c[k][i].mul(&m[k][l]).mul(&c[l][j]));
                            }
                        }
                    }
                    *x = acc;
                }
            }
            out
        };
        CentralFibre { field: self.field, f: conj(&self.f), g: conj(&self.g) }
    }
}

fn quad_value(m: &[Vec<FieldElem>], x: &[FieldElem], field: FieldSpec) -> FieldElem {
    let mut acc = field.zero();
    for (i, row) in m.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            if !a.is_zero() {
                acc = acc.add(&a.mul(&x[i]).mul(&x[j]));
            }
        }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Whether some member `lambda f + mu g`, `(lambda : mu)` in `P^1` over the
/// algebraic closure, has rank at most `r`: the `(r+1)`-minors, as binary
/// forms of degree `r + 1`, must have a common projective root.
fn some_member_has_rank_at_most(fibre: &CentralFibre, r: usize) -> bool {
    let n = fibre.n();
    let field = fibre.field;
    let k = r + 1;
    if k > n {
        return true;
    }
    let entry = |i: usize, j: usize| Poly::linear(fibre.g[i][j].clone(), fibre.f[i][j].clone());
    let one = Poly::new(vec![field.one()], field.zero());
    let mut gcd: Option<Vec<FieldElem>> = None;
    let mut mu_power = usize::MAX;
    for rows in subsets(n, k) {
        for cols in subsets(n, k) {
            let m: Vec<Vec<_>> = rows.iter().map(|&i| cols.iter().map(|&j| entry(i, j)).collect()).collect();
            let d = determinant(&m, &one);
            if d.is_zero() {
                continue;
            }
            let coeffs = d.coeffs().to_vec();
            // Degree in lambda below k means mu divides the homogeneous minor.
            mu_power = mu_power.min(k - (coeffs.len() - 1));
            gcd = Some(match gcd {
                None => poly_gcd(&coeffs, &[]),
                Some(g) => poly_gcd(&g, &coeffs),
            });
            if gcd.as_ref().is_some_and(|g| g.len() == 1) && mu_power == 0 {
                return false;
            }
        }
    }
    match gcd {
        None => true,
        Some(g) => g.len() > 1 || mu_power > 0,
    }
}

/// Minimum rank of a member of the central-fibre pencil over the algebraic
/// closure of `k`.
pub fn min_rank_in_pencil(fibre: &CentralFibre) -> Result<usize> {
    if fibre.is_zero() {
        return Err(Error::ZeroPencil);
    }
    let mut best = fibre.n();
    for r in (0..fibre.n()).rev() {
        if some_member_has_rank_at_most(fibre, r) {
            best = r;
        } else {
            break;
        }
    }
    Ok(best)
}

/// Number of `d`-dimensional subspaces of `F_p^n` (Gaussian binomial), saturating.
pub fn subspace_count(n: usize, d: usize, p: u64) -> u128 {
    if d > n {
        return 0;
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        let a = p.checked_pow((n - i) as u32).map(|x| x - 1);
        let b = p.checked_pow((i + 1) as u32).map(|x| x - 1);
        match (a.and_then(|a| num.checked_mul(a)), b.and_then(|b| den.checked_mul(b))) {
            (Some(x), Some(y)) => {
                num = x;
                den = y;
                let g = gcd_u128(num, den);
                num /= g;
                den /= g;
            }
            _ => return u128::MAX,
        }
    }
    num / den
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Whether both quadrics of the central fibre vanish on some `F_p`-rational
/// linear subspace of dimension `n - 2` (a projective `(n-3)`-plane).
///
/// Enumerates every such subspace as the kernel of a `2 x n` matrix in
/// reduced row echelon form.
pub fn contains_plane(fibre: &CentralFibre, cap: u128) -> Result<bool> {
    let FieldSpec::Prime { p } = fibre.field else {
        return Err(Error::UnsupportedField);
    };
    let n = fibre.n();
    if n < 3 {
        return Err(Error::Dimension("plane containment needs n >= 3".into()));
    }
    let count = subspace_count(n, 2, p);
    if count > cap {
        return Err(Error::FieldTooLarge { count, cap });
    }
    let field = fibre.field;
    let elems = field.elements().expect("prime field");
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            // Free positions: row 0 at columns > c1 except c2, row 1 at columns > c2.
            let free: Vec<(usize, usize)> =
                (c1 + 1..n).filter(|&j| j != c2).map(|j| (0, j)).chain((c2 + 1..n).map(|j| (1, j))).collect();
            let total = (p as u128).pow(free.len() as u32);
            for code in 0..total {
                let mut m = vec![vec![field.zero(); n]; 2];
                m[0][c1] = field.one();
                m[1][c2] = field.one();
                let mut rest = code;
                for &(r, j) in &free {
                    m[r][j] = elems[(rest % p as u128) as usize].clone();
                    rest /= p as u128;
                }
                let basis = kernel(&m, n, field);
                if vanishes_on(&fibre.f, &basis, field) && vanishes_on(&fibre.g, &basis, field) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

fn vanishes_on(m: &[Vec<FieldElem>], basis: &[Vec<FieldElem>], field: FieldSpec) -> bool {
    for (a, u) in basis.iter().enumerate() {
        for v in &basis[a..] {
            let mut acc = field.zero();
            for (i, row) in m.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        acc = acc.add(&x.mul(&u[i]).mul(&v[j]));
                    }
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDiagnosis {
    pub point: Vec<FieldElem>,
    /// Rank of the `2 x (n+1)` Jacobian in `(x_1, ..., x_n, t)`.
    pub jacobian_rank: usize,
    pub is_singular: bool,
    /// Only for singular points: whether some member of the pencil has a
    /// nonzero linear part in the local coordinates at the point.
    pub is_hypersurface_singularity: Option<bool>,
}

/// Singularity test of the total space at a `k`-point of the central fibre.
///
/// The point is moved to `[0 : ... : 0 : 1]` by a coordinate change over `k`;
/// in the chart `x_n = 1` the local coordinates are `x_1, ..., x_{n-1}, t`.
pub fn diagnose_point(p: &Pencil, point: &[FieldElem]) -> Result<PointDiagnosis> {
    let n = p.n();
    let field = p.field();
    if point.len() != n {
        return Err(Error::InvalidPoint(format!("expected {n} coordinates, got {}", point.len())));
    }
    if point.iter().any(|x| x.field() != field) {
        return Err(Error::InvalidPoint("coordinates over a different field".into()));
    }
    let Some(j) = (0..n).rev().find(|&i| !point[i].is_zero()) else {
        return Err(Error::InvalidPoint("the zero vector is not a projective point".into()));
    };
    let fibre = CentralFibre::from_pencil(p)?;
    if !quad_value(&fibre.f, point, field).is_zero() || !quad_value(&fibre.g, point, field).is_zero() {
        return Err(Error::PointNotOnFibre);
    }
    // Columns: e_i for i != j, then the point.
    let mut cols: Vec<Vec<FieldElem>> = (0..n)
        .filter(|&i| i != j)
        .map(|i| (0..n).map(|r| if r == i { field.one() } else { field.zero() }).collect())
        .collect();
    cols.push(point.to_vec());
    let c: Vec<Vec<LaurentScalar>> =
        (0..n).map(|r| (0..n).map(|k| LaurentScalar::constant(&cols[k][r])).collect()).collect();
    let moved = p.transform(&c);
    let two = field.from_i64(2);
    let row = |q: &crate::pencil::QuadraticForm| -> Vec<FieldElem> {
        let mut v: Vec<FieldElem> = (0..n).map(|i| two.mul(&q.entry(i, n - 1).at_zero())).collect();
        v.push(q.entry(n - 1, n - 1).coeff(1));
        v
    };
    let jac = vec![row(&moved.f), row(&moved.g)];
    let jacobian_rank = rank(&jac);
    let is_singular = jacobian_rank < 2;
    Ok(PointDiagnosis {
        point: point.to_vec(),
        jacobian_rank,
        is_singular,
        is_hypersurface_singularity: is_singular.then_some(jacobian_rank >= 1),
    })
}
