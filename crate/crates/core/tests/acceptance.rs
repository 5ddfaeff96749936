//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadpencil_core::disc::{check_scaling_identity, disc_valuation};
use quadpencil_core::pencil::{act, mult, plucker, saturate, val_rho, CoordinateChange, Pencil, QuadraticForm};
use quadpencil_core::sample::{
    random_coordinate_change, random_effective_weight, random_field_elem, random_form, random_integral_gl,
    random_pencil,
};
use quadpencil_core::stability::{
    certificate_semistable, check, destabilization_step, exhaustive_search, semistable_reduce, SearchBudget,
    StabilityVerdict,
};
use quadpencil_core::{FieldSpec, LaurentScalar, Valuation, WeightSystem};

fn report(name: &str, ok: bool, detail: &str, elapsed: Duration, limit: Duration) {
    let in_time = elapsed <= limit;
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    let line = format!("{verdict} {name}: {detail} ({:.1}s, limit {}s)\n", elapsed.as_secs_f64(), limit.as_secs());
    let _ = std::io::Write::write_all(&mut std::io::stdout().lock(), line.as_bytes());
    assert!(ok, "{name}: {detail}");
    assert!(in_time, "{name}: took {elapsed:?}, limit {limit:?}");
}

fn fields() -> [FieldSpec; 3] {
    [FieldSpec::Rationals, FieldSpec::prime(7).unwrap(), FieldSpec::prime(101).unwrap()]
}

fn dv(p: &Pencil) -> i64 {
    disc_valuation(p).finite().expect("smooth generic fibre")
}

#[test]
fn criterion_1_lemma_3_6_law() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    let mut steps = 0;
    let mut failures = Vec::new();
    for i in 0..540 {
        let field = fields()[i % 3];
        let n = 3 + (i / 3) % 3;
        let (p, rho, c) = if (i / 9) % 3 == 2 {
            // Scrambled by (-w, C0), then undone by (w, identity): a destabilizer by construction.
            let p0 = random_pencil(field, n, 1, &mut rng);
            let w = random_effective_weight(n, 3, 6, &mut rng);
            let neg = WeightSystem(w.0.iter().map(|x| -x).collect());
            let c0 = random_coordinate_change(field, n, &mut rng);
            let scrambled = act(&p0, &neg, &c0).unwrap();
            let (p, _) = saturate(&scrambled.f, &scrambled.g).unwrap();
            (p, w, CoordinateChange::identity(field, n))
        } else {
            let p = random_pencil(field, n, 1, &mut rng);
            (p, random_effective_weight(n, 3, 6, &mut rng), random_coordinate_change(field, n, &mut rng))
        };
        let m = mult(&p, &rho, &c).unwrap();
        let acted = act(&p, &rho, &c).unwrap();
        let (sat, shed) = saturate(&acted.f, &acted.g).unwrap();
        let (n_, s) = (n as i64, rho.sum());
        let before = dv(&p);
        let ok = shed == m
            && dv(&acted) - before == 4 * (n_ - 1) * s
            && dv(&sat) - before == -n_ * (n_ - 1) * m + 4 * (n_ - 1) * s;
        if !ok {
            failures.push(format!("{field} n={n} rho={rho}"));
        }
        if n_ * m > 4 * s {
            let out = destabilization_step(&p, &rho, &c).unwrap();
            steps += 1;
            if out.disc_after != dv(&sat) {
                failures.push(format!("step mismatch {field} n={n} rho={rho}"));
            }
        }
        checked += 1;
    }
    let detail = format!("{checked} pencils, {steps} destabilizing steps, {} failures {:?}", failures.len(), failures);
    report("criterion 1 (Lemma 3.6 law)", failures.is_empty(), &detail, start.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_2_plucker_matches_saturation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    for i in 0..300 {
        let field = fields()[i % 3];
        let n = 2 + i % 4;
        let f = random_form(field, n, 2, 0.6, &mut rng).scale(&LaurentScalar::t_pow(field, rng.gen_range(-2..=2)));
        let g = random_form(field, n, 2, 0.6, &mut rng);
        let Ok(pv) = plucker(&Pencil::new(f.clone(), g.clone()).unwrap()) else { continue };
        let (_, shed) = saturate(&f, &g).unwrap();
        if pv.min_valuation() != shed {
            failures.push(format!("plucker/saturate {field} n={n}"));
        }
        let p = random_pencil(field, n, 1, &mut rng);
        let rho = random_effective_weight(n, 3, 6, &mut rng);
        let id = CoordinateChange::identity(field, n);
        let m = mult(&p, &rho, &id).unwrap();
        if m < val_rho(&p.f, &rho).unwrap() + val_rho(&p.g, &rho).unwrap() {
            failures.push(format!("Lemma 3.2 {field} n={n} rho={rho}"));
        }
    }
    report(
        "criterion 2 (Plücker valuation equals saturation shed)",
        failures.is_empty(),
        &format!("300 pairs, {} failures {:?}", failures.len(), failures),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

fn random_unit(field: FieldSpec, rng: &mut ChaCha8Rng) -> LaurentScalar {
    loop {
        let c0 = random_field_elem(field, 3, rng);
        if !c0.is_zero() {
            return LaurentScalar::constant(&c0).add(&LaurentScalar::monomial(&random_field_elem(field, 3, rng), 1));
        }
    }
}

#[test]
fn criterion_3_invariance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let mut pencils = 0;
    for i in 0..9 {
        let field = fields()[i % 3];
        let n = 3 + (i / 3) % 3;
        let p = random_pencil(field, n, 1, &mut rng);
        pencils += 1;
        let d = disc_valuation(&p);
        for _ in 0..100 {
            let xi = random_unit(field, &mut rng).shift(rng.gen_range(-2..=2));
            let zeta = random_unit(field, &mut rng).shift(rng.gen_range(-2..=2));
            if !check_scaling_identity(&p.f, &p.g, &xi, &zeta).unwrap() {
                failures.push("scaling".to_string());
            }
            // A random element of GL_2(R): unit determinant.
            let (a, b, c, dd) = loop {
                let m: Vec<LaurentScalar> = (0..4)
                    .map(|_| {
                        LaurentScalar::constant(&random_field_elem(field, 2, &mut rng))
                            .add(&LaurentScalar::monomial(&random_field_elem(field, 2, &mut rng), 1))
                    })
                    .collect();
                if m[0].mul(&m[3]).sub(&m[1].mul(&m[2])).is_unit_in_r() {
                    break (m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone());
                }
            };
            if disc_valuation(&p.mix(&a, &b, &c, &dd)) != d {
                failures.push("GL2 mix".to_string());
            }
            let cc = random_integral_gl(field, n, &mut rng);
            if disc_valuation(&p.transform(cc.matrix())) != d {
                failures.push("GLn change".to_string());
            }
        }
    }
    report(
        "criterion 3 (scaling identity and basis invariance)",
        failures.is_empty(),
        &format!("{pencils} pencils x 100 transformations, {} failures {:?}", failures.len(), failures),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

fn certified_pencil(field: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Pencil {
    loop {
        let p = random_pencil(field, n, 1, rng);
        if certificate_semistable(&p) {
            return p;
        }
    }
}

#[test]
fn criterion_4_reduction_of_scrambled_pencils() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let budget = SearchBudget { max_random_coord_changes: 20, ..SearchBudget::default() };
    let mut failures = Vec::new();
    let mut total_steps = 0;
    for i in 0..100 {
        let field = fields()[i % 3];
        let n = 3 + (i / 3) % 3;
        let p0 = certified_pencil(field, n, &mut rng);
        let w = random_effective_weight(n, 3, 3, &mut rng);
        let neg = WeightSystem(w.0.iter().map(|x| -x).collect());
        let c = random_coordinate_change(field, n, &mut rng);
        let (p1, _) = saturate(&act(&p0, &neg, &c).unwrap().f, &act(&p0, &neg, &c).unwrap().g).unwrap();
        let trace = semistable_reduce(&p1, &budget).unwrap();
        total_steps += trace.steps.len();
        let n_ = n as i64;
        let ok = trace.is_consistent(n)
            && trace.steps.len() as i64 <= trace.initial_disc_val / (n_ - 1)
            && trace.final_disc_val() <= trace.initial_disc_val
            && matches!(
                trace.final_status,
                StabilityVerdict::SemistableCertified | StabilityVerdict::SemistableUpToBudget
            )
            && dv(&trace.final_pencil) == trace.final_disc_val();
        if !ok {
            failures.push(format!("{field} n={n} w={w}"));
        }
    }
    report(
        "criterion 4 (semistable reduction of scrambled certified pencils)",
        failures.is_empty(),
        &format!("100 pencils, {total_steps} steps, {} failures {:?}", failures.len(), failures),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_5_certificate_soundness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let budget = SearchBudget { max_weight_sum: 4, max_random_coord_changes: 0, ..SearchBudget::default() };
    let mut failures = Vec::new();
    for i in 0..100 {
        let field = if i % 2 == 0 { FieldSpec::prime(3).unwrap() } else { FieldSpec::prime(5).unwrap() };
        let n = 4 + (i / 2) % 2;
        let p = certified_pencil(field, n, &mut rng);
        assert!(dv(&p) <= n as i64 - 2);
        if let Some(w) = exhaustive_search(&p, &budget).unwrap() {
            failures.push(format!("{field} n={n} destabilized by {}", w.rho));
        }
    }
    report(
        "criterion 5 (no destabilizer below the certificate threshold)",
        failures.is_empty(),
        &format!("100 pencils over F_3/F_5, {} failures {:?}", failures.len(), failures),
        start.elapsed(),
        Duration::from_secs(600),
    );
}

fn sorted_desc(w: &WeightSystem) -> Vec<i64> {
    let mut v = w.0.clone();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// A random form in the given monomials, coefficients `t^e (unit)`.
fn form_from(field: FieldSpec, terms: &[(usize, usize, i64)], rng: &mut ChaCha8Rng) -> QuadraticForm {
    let t: Vec<_> = terms.iter().map(|&(i, j, e)| (i, j, random_unit(field, rng).shift(e))).collect();
    QuadraticForm::from_monomials(field, 5, &t).unwrap()
}

fn all_monomials_with(f: impl Fn(usize, usize) -> Option<i64>) -> Vec<(usize, usize, i64)> {
    quadpencil_core::pencil::monomials(5).into_iter().filter_map(|(i, j)| f(i, j).map(|e| (i, j, e))).collect()
}

#[test]
fn criterion_6_destabilizers_from_the_analysis() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let budget = SearchBudget::default();
    let mut failures = Vec::new();
    let mut cases = 0;
    for field in fields() {
        for lead in [(0, 0), (0, 1)] {
            for _ in 0..3 {
                // f = x1^2 + t h or x1 x2 + t h; g generic.
                let p = loop {
                    let mut terms = all_monomials_with(|_, _| Some(1));
                    terms.retain(|&(i, j, _)| (i, j) != lead);
                    terms.push((lead.0, lead.1, 0));
                    let f = form_from(field, &terms, &mut rng);
                    let g = form_from(field, &all_monomials_with(|_, _| Some(0)), &mut rng);
                    if let Ok((p, 0)) = saturate(&f, &g) {
                        if disc_valuation(&p).finite().is_some() {
                            break p;
                        }
                    }
                };
                cases += 1;
                match check(&p, &budget).unwrap() {
                    StabilityVerdict::Unstable(w) if sorted_desc(&w.rho) == [1, 0, 0, 0, 0] => {}
                    other => failures.push(format!("Lemma 4.1 {field} {lead:?}: {}", other.status())),
                }
            }
        }
        for _ in 0..3 {
            // Both forms in (x1, ..., x4, t)^2 at e5.
            let ideal = |i: usize, j: usize| {
                Some(match (i == 4, j == 4) {
                    (true, true) => 2,
                    (false, true) => 1,
                    _ => 0,
                })
            };
            let p = loop {
                let f = form_from(field, &all_monomials_with(ideal), &mut rng);
                let g = form_from(field, &all_monomials_with(ideal), &mut rng);
                if let Ok((p, 0)) = saturate(&f, &g) {
                    if disc_valuation(&p).finite().is_some() {
                        break p;
                    }
                }
            };
            cases += 1;
            match check(&p, &budget).unwrap() {
                StabilityVerdict::Unstable(w) if sorted_desc(&w.rho) == [1, 1, 1, 1, 0] => {}
                other => failures.push(format!("Lemma 4.5 {field}: {:?}", other.witness().map(|w| w.rho.clone()))),
            }
        }
    }
    report(
        "criterion 6 (Lemma 4.1 and 4.5 destabilizers found)",
        failures.is_empty(),
        &format!("{cases} constructed pencils, {} failures {:?}", failures.len(), failures),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_7_binary_borderline() {
    let start = Instant::now();
    let q = FieldSpec::Rationals;
    let one = LaurentScalar::one(q);
    let two = LaurentScalar::from_i64(q, 2);
    let p = Pencil::new(QuadraticForm::diagonal(&[one.clone(), one.clone()]), QuadraticForm::diagonal(&[one, two]))
        .unwrap();
    let rho = WeightSystem(vec![1, 0]);
    let id = CoordinateChange::identity(q, 2);
    let m = mult(&p, &rho, &id).unwrap();
    let drop_exponent = 2 * m - 4 * rho.sum();
    let acted = act(&p, &rho, &id).unwrap();
    let (sat, _) = saturate(&acted.f, &acted.g).unwrap();
    let before = disc_valuation(&p);
    let after = disc_valuation(&sat);
    let refused = destabilization_step(&p, &rho, &id).is_err();
    let ok = m == 2
        && drop_exponent == 0
        && before == Valuation::Finite(0)
        && after == Valuation::Finite(0)
        && refused
        && matches!(check(&p, &SearchBudget::default()), Ok(StabilityVerdict::SemistableCertified));
    report(
        "criterion 7 (n = 2 borderline)",
        ok,
        &format!("mult {m}, drop exponent {drop_exponent}, disc val {before} -> {after}"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}
