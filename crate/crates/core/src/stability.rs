//! Semistability of pencils over the valuation ring.
//!
//! A normalized pencil with smooth generic fibre is semistable when
//! `mult_rho(P) <= (4/n) sum w_i` for every weight system in every
//! coordinate system. A weight/coordinate pair violating this is a
//! destabilizer; acting by it and saturating lowers `val_t D` by exactly
//! `(n-1)(n mult - 4 sum w)`, a positive multiple of `n - 1`. Since
//! `val_t D >= 0` on normalized pencils, `val_t D <= n - 2` certifies
//! semistability outright; above that threshold the search is bounded and
//! the verdict says so.

use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disc::{disc_valuation, generic_fibre_smooth};
use crate::error::{Error, Result};
use crate::pencil::{act, mult, saturate, CoordinateChange, Pencil, PluckerProfile, WeightSystem};
use crate::ring::{FieldElem, Valuation};
use crate::sample::random_coordinate_change;

/// Limits for the destabilizer search and the reduction loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_weight_sum: i64,
    pub max_random_coord_changes: usize,
    pub rng_seed: u64,
    pub max_reduction_steps: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_weight_sum: 4, max_random_coord_changes: 200, rng_seed: 0, max_reduction_steps: 64 }
    }
}

/// A weight system and coordinates in which the stability inequality fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub rho: WeightSystem,
    pub coordinate_change: CoordinateChange,
    pub mult: i64,
    /// `(4/n) sum w_i`.
    pub bound: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityVerdict {
    /// `val_t D <= n - 2`: no destabilizer exists at all.
    SemistableCertified,
    /// No destabilizer within the search budget.
    SemistableUpToBudget,
    Unstable(Witness),
}

impl StabilityVerdict {
    pub fn status(&self) -> &'static str {
        match self {
            StabilityVerdict::SemistableCertified => "semistable_certified",
            StabilityVerdict::SemistableUpToBudget => "semistable_up_to_budget",
            StabilityVerdict::Unstable(_) => "unstable",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            StabilityVerdict::Unstable(w) => Some(w),
            _ => None,
        }
    }
}

/// `(4/n) sum w_i` as an exact rational.
pub fn stability_bound(n: usize, rho: &WeightSystem) -> Rational64 {
    Rational64::new(4 * rho.sum(), n as i64)
}

fn violates(n: usize, mult: i64, rho: &WeightSystem) -> bool {
    n as i64 * mult > 4 * rho.sum()
}

fn finite_disc(p: &Pencil) -> Result<i64> {
    disc_valuation(p).finite().ok_or(Error::NonSmoothGenericFibre)
}

/// True iff `val_t D(P) <= n - 2`, which rules out every destabilizer.
pub fn certificate_semistable(p: &Pencil) -> bool {
    matches!(disc_valuation(p), Valuation::Finite(v) if v <= p.n() as i64 - 2)
}

/// `mult(P, rho, C) > (4/n) sum w_i`.
pub fn is_destabilizer(p: &Pencil, rho: &WeightSystem, c: &CoordinateChange) -> Result<bool> {
    p.ensure_normalized()?;
    if !generic_fibre_smooth(p) {
        return Err(Error::NonSmoothGenericFibre);
    }
    Ok(violates(p.n(), mult(p, rho, c)?, rho))
}

/// Weight patterns that destabilize the degenerations occurring in the
/// analysis of singular central fibres, before permutation.
pub fn harvested_patterns(n: usize) -> Vec<WeightSystem> {
    let pad = |w: &[i64]| {
        let mut v = w.to_vec();
        v.resize(n, 0);
        WeightSystem(v)
    };
    let mut out = vec![pad(&[1]), pad(&[1, 1]), {
        let mut v = vec![1; n];
        v[n - 1] = 0;
        WeightSystem(v)
    }];
    if n >= 5 {
        for w in [
            [1, 1, 0, 1, 0],
            [2, 1, 0, 1, 0],
            [1, 0, 0, 1, 0],
            [1, 0, 1, 0, 0],
            [1, 1, 1, 0, 0],
            [1, 0, 1, 1, 0],
            [1, 0, 2, 1, 0],
            [1, 1, 1, 1, 0],
        ] {
            out.push(pad(&w));
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|w| seen.insert(w.clone()));
    out
}

/// Distinct rearrangements of `w`, starting with `w` itself, then in the
/// lexicographic order of the index permutations producing them.
pub fn rearrangements(w: &WeightSystem) -> Vec<WeightSystem> {
    let n = w.len();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    loop {
        let v = WeightSystem(idx.iter().map(|&i| w.0[i]).collect());
        if seen.insert(v.clone()) {
            out.push(v);
        }
        if !next_permutation(&mut idx) {
            return out;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// All nonzero effective weight systems with `sum w <= max_sum`, in
/// lexicographic order.
pub fn effective_weights(n: usize, max_sum: i64) -> Vec<WeightSystem> {
    fn rec(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<WeightSystem>) {
        if cur.len() == n {
            if cur.iter().any(|&w| w > 0) {
                out.push(WeightSystem(cur.clone()));
            }
            return;
        }
        for w in 0..=left {
            cur.push(w);
            rec(n, left - w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_sum.max(0), &mut Vec::new(), &mut out);
    out
}

/// The coordinate changes of the bounded search, in order: the identity,
/// the transvections `x_i -> x_i + c x_j` for `c` in `{1, -1}`, then
/// `max_random_coord_changes` seeded random elements of `GL_n(k)`.
///
/// Permutation matrices are not listed: the weight sets searched are closed
/// under permutation, and a permutation followed by `rho` has the same
/// multiplicity as the identity followed by the permuted `rho`.
pub fn coordinate_changes(p: &Pencil, budget: &SearchBudget) -> Vec<CoordinateChange> {
    let field = p.field();
    let n = p.n();
    let mut out = vec![CoordinateChange::identity(field, n)];
    let scalars: Vec<FieldElem> = vec![field.one(), field.one().neg()];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for c in &scalars {
                    out.push(CoordinateChange::transvection(field, n, i, j, c));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.rng_seed);
    for _ in 0..budget.max_random_coord_changes {
        out.push(random_coordinate_change(field, n, &mut rng));
    }
    out
}

fn witness(p: &Pencil, rho: WeightSystem, c: CoordinateChange, mult: i64) -> Witness {
    let bound = stability_bound(p.n(), &rho);
    Witness { rho, coordinate_change: c, mult, bound }
}

/// Runs the bounded search without consulting the certificate.
///
/// Order: every rearrangement of each harvested pattern in the original
/// coordinates; then, for each coordinate change of [`coordinate_changes`],
/// every nonzero effective weight with `sum w <= max_weight_sum`. The first
/// destabilizer in this order is returned, independent of thread scheduling.
pub fn exhaustive_search(p: &Pencil, budget: &SearchBudget) -> Result<Option<Witness>> {
    let n = p.n();
    let identity = CoordinateChange::identity(p.field(), n);
    let profile = PluckerProfile::new(p)?;
    for pattern in harvested_patterns(n) {
        for rho in rearrangements(&pattern) {
            let m = profile.mult(&rho);
            if violates(n, m, &rho) {
                return Ok(Some(witness(p, rho, identity, m)));
            }
        }
    }
    let weights = effective_weights(n, budget.max_weight_sum);
    let changes = coordinate_changes(p, budget);
    let zero = WeightSystem::zero(n);
    let found = changes
        .into_par_iter()
        .map(|c| -> Result<Option<Witness>> {
            let profile = PluckerProfile::new(&act(p, &zero, &c)?)?;
            Ok(weights.iter().find_map(|rho| {
                let m = profile.mult(rho);
                violates(n, m, rho).then(|| witness(p, rho.clone(), c.clone(), m))
            }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        Some(r) => r,
        None => Ok(None),
    }
}

/// The first destabilizer in the deterministic search order, or `None` when
/// the certificate holds or nothing is found within the budget.
pub fn search_destabilizer(p: &Pencil, budget: &SearchBudget) -> Result<Option<Witness>> {
    p.ensure_normalized()?;
    let d = finite_disc(p)?;
    if d <= p.n() as i64 - 2 {
        return Ok(None);
    }
    exhaustive_search(p, budget)
}

/// Full verdict for a normalized pencil.
pub fn check(p: &Pencil, budget: &SearchBudget) -> Result<StabilityVerdict> {
    p.ensure_normalized()?;
    finite_disc(p)?;
    if certificate_semistable(p) {
        return Ok(StabilityVerdict::SemistableCertified);
    }
    Ok(match exhaustive_search(p, budget)? {
        Some(w) => StabilityVerdict::Unstable(w),
        None => StabilityVerdict::SemistableUpToBudget,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub pencil: Pencil,
    pub mult: i64,
    pub drop: i64,
    pub disc_before: i64,
    pub disc_after: i64,
}

/// Acts by a destabilizer, saturates, and verifies by recomputing both
/// discriminant valuations that `val_t D` fell by `n(n-1) mult - 4(n-1) sum w`.
pub fn destabilization_step(p: &Pencil, rho: &WeightSystem, c: &CoordinateChange) -> Result<StepOutcome> {
    p.ensure_normalized()?;
    let n = p.n() as i64;
    let before = finite_disc(p)?;
    let m = mult(p, rho, c)?;
    if !violates(p.n(), m, rho) {
        return Err(Error::NotADestabilizer { mult: m, bound: stability_bound(p.n(), rho).to_string() });
    }
    let acted = act(p, rho, c)?;
    let (pencil, shed) = saturate(&acted.f, &acted.g)?;
    let expected = n * (n - 1) * m - 4 * (n - 1) * rho.sum();
    let after = disc_valuation(&pencil);
    let violation =
        || Error::InternalInvariantViolation { before: Valuation::Finite(before), after, expected_drop: expected };
    if shed != m {
        return Err(violation());
    }
    match after {
        Valuation::Finite(a) if before - a == expected && a >= 0 => {
            Ok(StepOutcome { pencil, mult: m, drop: expected, disc_before: before, disc_after: a })
        }
        _ => Err(violation()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub rho: WeightSystem,
    pub coordinate_change: CoordinateChange,
    pub mult: i64,
    pub disc_val_before: i64,
    pub disc_val_after: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    /// Power of `t` removed when the input was not already normalized.
    pub initial_shed: i64,
    pub initial_disc_val: i64,
    pub steps: Vec<ReductionStep>,
    pub final_pencil: Pencil,
    pub final_status: StabilityVerdict,
}

impl ReductionTrace {
    pub fn final_disc_val(&self) -> i64 {
        self.steps.last().map_or(self.initial_disc_val, |s| s.disc_val_after)
    }

    /// Strict monotonicity, the exact per-step drop and the a-priori length bound.
    pub fn is_consistent(&self, n: usize) -> bool {
        let n = n as i64;
        let mut prev = self.initial_disc_val;
        for s in &self.steps {
            let drop = (n - 1) * (n * s.mult - 4 * s.rho.sum());
            if s.disc_val_before != prev || s.disc_val_after >= s.disc_val_before || prev - s.disc_val_after != drop {
                return false;
            }
            prev = s.disc_val_after;
        }
        self.steps.len() as i64 <= self.initial_disc_val / (n - 1)
    }
}

/// Repeats search and destabilization until the certificate fires or the
/// search comes back empty. Each step lowers `val_t D` by at least `n - 1`,
/// so at most `val_t D(P) / (n - 1)` steps happen.
pub fn semistable_reduce(p: &Pencil, budget: &SearchBudget) -> Result<ReductionTrace> {
    if !generic_fibre_smooth(p) {
        return Err(Error::NonSmoothGenericFibre);
    }
    let (mut current, initial_shed) = if p.is_normalized() { (p.clone(), 0) } else { saturate(&p.f, &p.g)? };
    let initial_disc_val = finite_disc(&current)?;
    let mut steps = Vec::new();
    let final_status = loop {
        if certificate_semistable(&current) {
            break StabilityVerdict::SemistableCertified;
        }
        if steps.len() >= budget.max_reduction_steps {
            break StabilityVerdict::SemistableUpToBudget;
        }
        let Some(w) = exhaustive_search(&current, budget)? else {
            break StabilityVerdict::SemistableUpToBudget;
        };
        let out = destabilization_step(&current, &w.rho, &w.coordinate_change)?;
        steps.push(ReductionStep {
            rho: w.rho,
            coordinate_change: w.coordinate_change,
            mult: out.mult,
            disc_val_before: out.disc_before,
            disc_val_after: out.disc_after,
        });
        current = out.pencil;
    };
    Ok(ReductionTrace { initial_shed, initial_disc_val, steps, final_pencil: current, final_status })
}
