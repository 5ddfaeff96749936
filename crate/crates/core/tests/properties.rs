//! Property tests for the pencil, discriminant and stability layers, checked
//! against independent oracles.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadpencil_core::disc::{binary_discriminant, disc_valuation, pencil_determinant, BinaryForm};
use quadpencil_core::linalg::{poly_gcd, rank};
use quadpencil_core::pencil::{act, mult, plucker, saturate, val_rho, CoordinateChange, Pencil, QuadraticForm};
use quadpencil_core::sample::{
    random_coordinate_change, random_effective_weight, random_field_elem, random_form, random_integral_gl,
    random_pencil,
};
use quadpencil_core::stability::{check, is_destabilizer, semistable_reduce, SearchBudget, StabilityVerdict};
use quadpencil_core::{FieldElem, FieldSpec, LaurentScalar, WeightSystem};

fn field(i: usize) -> FieldSpec {
    [FieldSpec::Rationals, FieldSpec::Prime { p: 7 }, FieldSpec::Prime { p: 101 }][i]
}

fn random_unit(field: FieldSpec, rng: &mut ChaCha8Rng) -> LaurentScalar {
    loop {
        let c0 = random_field_elem(field, 3, rng);
        if !c0.is_zero() {
            return LaurentScalar::constant(&c0).add(&LaurentScalar::monomial(&random_field_elem(field, 3, rng), 1));
        }
    }
}

/// A random element of `GL_2(R)`.
fn random_gl2(field: FieldSpec, rng: &mut ChaCha8Rng) -> [LaurentScalar; 4] {
    loop {
        let m: Vec<LaurentScalar> = (0..4)
            .map(|_| {
                LaurentScalar::constant(&random_field_elem(field, 2, rng))
                    .add(&LaurentScalar::monomial(&random_field_elem(field, 2, rng), 1))
            })
            .collect();
        if m[0].mul(&m[3]).sub(&m[1].mul(&m[2])).is_unit_in_r() {
            return [m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone()];
        }
    }
}

/// The saturation loop of the paper, run on coefficient vectors: divide out
/// common powers of `t`; while the reductions mod `t` are dependent, cancel
/// and divide the second vector by `t`. Returns the total power shed.
fn saturation_loop_oracle(f: &QuadraticForm, g: &QuadraticForm) -> i64 {
    let mut a = f.coefficient_vector();
    let mut b = g.coefficient_vector();
    let val = |v: &[LaurentScalar]| v.iter().filter(|x| !x.is_zero()).map(|x| x.valuation().finite().unwrap()).min();
    let shift = |v: &[LaurentScalar], k: i64| v.iter().map(|x| x.shift(-k)).collect::<Vec<_>>();
    let mut shed = 0;
    loop {
        let (va, vb) = (val(&a).unwrap(), val(&b).unwrap());
        a = shift(&a, va);
        b = shift(&b, vb);
        shed += va + vb;
        let ra: Vec<FieldElem> = a.iter().map(LaurentScalar::at_zero).collect();
        let rb: Vec<FieldElem> = b.iter().map(LaurentScalar::at_zero).collect();
        if rank(&[ra.clone(), rb.clone()]) == 2 {
            return shed;
        }
        // rb = c ra with ra nonzero: replace b by b - c a, which vanishes mod t.
        let k = ra.iter().position(|x| !x.is_zero()).unwrap();
        let c = LaurentScalar::constant(&rb[k].div(&ra[k]).unwrap());
        b = b.iter().zip(&a).map(|(y, x)| y.sub(&c.mul(x))).collect();
    }
}

fn proportional(u: &[LaurentScalar], v: &[LaurentScalar]) -> bool {
    let k = u.iter().position(|x| !x.is_zero()).unwrap();
    u.iter().zip(v).all(|(a, b)| a.mul(&v[k]) == b.mul(&u[k]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn mult_matches_saturation_and_the_loop_oracle(fi in 0usize..3, n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field(fi);
        let p = random_pencil(field, n, 1, &mut rng);
        let rho = random_effective_weight(n, 3, 3 * n as i64, &mut rng);
        let c = random_coordinate_change(field, n, &mut rng);
        let m = mult(&p, &rho, &c).unwrap();
        let acted = act(&p, &rho, &c).unwrap();
        let (sat, shed) = saturate(&acted.f, &acted.g).unwrap();
        prop_assert_eq!(m, shed);
        prop_assert_eq!(m, saturation_loop_oracle(&acted.f, &acted.g));
        prop_assert_eq!(plucker(&acted).unwrap().min_valuation(), m);
        prop_assert!(sat.is_normalized());
        // Saturating again sheds nothing and keeps the same lattice.
        let (again, zero) = saturate(&sat.f, &sat.g).unwrap();
        prop_assert_eq!(zero, 0);
        prop_assert!(proportional(plucker(&again).unwrap().minors(), plucker(&sat).unwrap().minors()));
        // Lemma 3.2: any R-basis of the transformed pencil.
        let moved = act(&p, &WeightSystem::zero(n), &c).unwrap();
        let [a, b, cc, d] = random_gl2(field, &mut rng);
        let mixed = moved.mix(&a, &b, &cc, &d);
        prop_assert!(m >= val_rho(&mixed.f, &rho).unwrap() + val_rho(&mixed.g, &rho).unwrap());
    }

    #[test]
    fn basis_change_scales_plucker_by_a_unit(fi in 0usize..3, n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field(fi);
        let p = random_pencil(field, n, 1, &mut rng);
        let [a, b, c, d] = random_gl2(field, &mut rng);
        let q = p.mix(&a, &b, &c, &d);
        let (u, v) = (plucker(&p).unwrap(), plucker(&q).unwrap());
        let det = a.mul(&d).sub(&b.mul(&c));
        for (x, y) in u.minors().iter().zip(v.minors()) {
            prop_assert_eq!(x.mul(&det), y.clone());
        }
        let rho = random_effective_weight(n, 3, 6, &mut rng);
        let id = CoordinateChange::identity(field, n);
        prop_assert_eq!(mult(&p, &rho, &id).unwrap(), mult(&q, &rho, &id).unwrap());
    }

    #[test]
    fn act_is_additive_in_weights(fi in 0usize..3, n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field(fi);
        let p = random_pencil(field, n, 1, &mut rng);
        let r1 = WeightSystem((0..n).map(|_| rng.gen_range(-2..=3)).collect());
        let r2 = WeightSystem((0..n).map(|_| rng.gen_range(-2..=3)).collect());
        let id = CoordinateChange::identity(field, n);
        let twice = act(&act(&p, &r1, &id).unwrap(), &r2, &id).unwrap();
        let once = act(&p, &r1.add(&r2), &id).unwrap();
        prop_assert!(proportional(plucker(&twice).unwrap().minors(), plucker(&once).unwrap().minors()));
    }

    #[test]
    fn discriminant_quasihomogeneity(fi in 0usize..3, n in 1usize..=6, seed in any::<u64>(), kind in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field(fi);
        let coeffs: Vec<LaurentScalar> = (0..=n)
            .map(|_| LaurentScalar::from_coeffs(field, 0, &[random_field_elem(field, 4, &mut rng), random_field_elem(field, 4, &mut rng)]))
            .collect();
        let xi = match kind {
            0 => random_unit(field, &mut rng),
            1 => LaurentScalar::t_pow(field, 1),
            _ => LaurentScalar::t_pow(field, 2),
        };
        let phi = BinaryForm::new(coeffs.clone());
        let d = binary_discriminant(&phi);
        let quasi = BinaryForm::new(coeffs.iter().enumerate().map(|(i, c)| c.mul(&xi.pow(i as u32))).collect());
        prop_assert_eq!(binary_discriminant(&quasi), d.mul(&xi.pow((n * n.saturating_sub(1)) as u32)));
        let homog = BinaryForm::new(coeffs.iter().map(|c| c.mul(&xi)).collect());
        let expected = if n >= 2 { d.mul(&xi.pow(2 * n as u32 - 2)) } else { d.clone() };
        prop_assert_eq!(binary_discriminant(&homog), expected);
    }

    #[test]
    fn disc_valuation_is_a_gl2_semiinvariant(fi in 0usize..3, n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field(fi);
        let p = random_pencil(field, n, 1, &mut rng);
        let [a, b, c, d] = random_gl2(field, &mut rng);
        prop_assert_eq!(disc_valuation(&p.mix(&a, &b, &c, &d)), disc_valuation(&p));
        let cc = random_integral_gl(field, n, &mut rng);
        prop_assert_eq!(disc_valuation(&p.transform(cc.matrix())), disc_valuation(&p));
    }
}

/// `D = 0` iff the form has a repeated root in `P^1` over the closure:
/// a root at infinity of multiplicity `n - deg F >= 2`, or a nonconstant
/// `gcd(F, F')` of the dehomogenization `F(x) = Phi(x, 1)`. When `F' = 0`
/// in characteristic `p`, `F` is a `p`-th power.
fn repeated_root_oracle(c: &[FieldElem]) -> bool {
    let n = c.len() - 1;
    let mut f = c.to_vec();
    while f.last().is_some_and(FieldElem::is_zero) {
        f.pop();
    }
    if f.is_empty() {
        return true;
    }
    let deg = f.len() - 1;
    if n - deg >= 2 {
        return true;
    }
    let df: Vec<FieldElem> = (1..=deg).map(|i| f[i].mul(&f[i].field().from_i64(i as i64))).collect();
    poly_gcd(&f, &df).len() > 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn vanishing_discriminant_matches_repeated_roots(p in prop::sample::select(vec![3u64, 5, 7]), cs in prop::collection::vec(0u64..7, 3..=6)) {
        let c: Vec<FieldElem> = cs.iter().map(|&v| FieldElem::Modular { value: v % p, p }).collect();
        let phi = BinaryForm::new(c.iter().map(LaurentScalar::constant).collect());
        prop_assert_eq!(binary_discriminant(&phi).is_zero(), repeated_root_oracle(&c));
    }

    /// Products of linear forms with roots in `P^1(F_p)`: the discriminant
    /// vanishes exactly when two roots coincide.
    #[test]
    fn split_forms_by_root_counting(p in prop::sample::select(vec![3u64, 5, 7]), roots in prop::collection::vec((0u64..7, 0u64..7), 2..=4)) {
        let field = FieldSpec::Prime { p };
        let roots: Vec<(u64, u64)> = roots.into_iter().map(|(a, b)| (a % p, b % p)).filter(|&(a, b)| a != 0 || b != 0).collect();
        prop_assume!(roots.len() >= 2);
        // Normalize each root to a representative of its point in P^1.
        let point = |(a, b): (u64, u64)| {
            let fe = |v| FieldElem::Modular { value: v, p };
            if b != 0 { (fe(a).div(&fe(b)).unwrap(), fe(1)) } else { (fe(1), fe(0)) }
        };
        let pts: Vec<(FieldElem, FieldElem)> = roots.iter().map(|&r| point(r)).collect();
        let repeated = (0..pts.len()).any(|i| (i + 1..pts.len()).any(|j| pts[i] == pts[j]));
        // Phi = prod (b_k lambda - a_k mu), coefficients by increasing power of lambda.
        let mut coeffs = vec![field.one()];
        for (a, b) in &pts {
            let mut next = vec![field.zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(&c.mul(b));
                next[i] = next[i].sub(&c.mul(a));
            }
            coeffs = next;
        }
        let phi = BinaryForm::new(coeffs.iter().map(LaurentScalar::constant).collect());
        prop_assert_eq!(binary_discriminant(&phi).is_zero(), repeated);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lemma_3_6_law_and_sub_identity(fi in 0usize..3, n in 3usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field(fi);
        let p = random_pencil(field, n, 1, &mut rng);
        let rho = random_effective_weight(n, 2, 2 * n as i64, &mut rng);
        let c = random_coordinate_change(field, n, &mut rng);
        let (n_, s) = (n as i64, rho.sum());
        let before = disc_valuation(&p).finite().unwrap();
        let acted = act(&p, &rho, &c).unwrap();
        prop_assert_eq!(disc_valuation(&acted).finite().unwrap(), before + 4 * (n_ - 1) * s);
        let m = mult(&p, &rho, &c).unwrap();
        let (sat, _) = saturate(&acted.f, &acted.g).unwrap();
        prop_assert_eq!(disc_valuation(&sat).finite().unwrap() - before, -n_ * (n_ - 1) * m + 4 * (n_ - 1) * s);
    }

    #[test]
    fn witnesses_reverify_and_traces_are_monotone(fi in 0usize..3, n in 3usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field(fi);
        let p0 = random_pencil(field, n, 1, &mut rng);
        let w = random_effective_weight(n, 2, 4, &mut rng);
        let neg = WeightSystem(w.0.iter().map(|x| -x).collect());
        let scrambled = act(&p0, &neg, &random_coordinate_change(field, n, &mut rng)).unwrap();
        let (p, _) = saturate(&scrambled.f, &scrambled.g).unwrap();
        let budget = SearchBudget { max_random_coord_changes: 10, ..SearchBudget::default() };
        if let StabilityVerdict::Unstable(wit) = check(&p, &budget).unwrap() {
            prop_assert!(is_destabilizer(&p, &wit.rho, &wit.coordinate_change).unwrap());
            prop_assert_eq!(mult(&p, &wit.rho, &wit.coordinate_change).unwrap(), wit.mult);
        }
        let trace = semistable_reduce(&p, &budget).unwrap();
        prop_assert!(trace.is_consistent(n));
        let mut prev = trace.initial_disc_val;
        for s in &trace.steps {
            prop_assert!(s.disc_val_after < prev);
            prev = s.disc_val_after;
        }
        prop_assert!(trace.steps.len() as i64 <= trace.initial_disc_val / (n as i64 - 1));
    }
}

#[test]
fn random_forms_have_expected_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let q = random_form(FieldSpec::Rationals, 4, 2, 1.0, &mut rng);
    assert_eq!(q.n(), 4);
    assert!(q.max_exponent().unwrap() <= 2);
    let p = random_pencil(FieldSpec::Prime { p: 7 }, 4, 1, &mut rng);
    assert!(p.is_normalized());
    assert!(!binary_discriminant(&pencil_determinant(&p)).is_zero());
}

#[test]
fn loop_oracle_examples() {
    let q = FieldSpec::Rationals;
    let l = |s: &str| quadpencil_core::parse_literal(q, s, 64).unwrap();
    // (x1^2, x1^2 + t^2 x2^2): the dependent reductions force two divisions.
    let f = QuadraticForm::from_monomials(q, 2, &[(0, 0, l("1"))]).unwrap();
    let g = QuadraticForm::from_monomials(q, 2, &[(0, 0, l("1")), (1, 1, l("t^2"))]).unwrap();
    assert_eq!(saturation_loop_oracle(&f, &g), 2);
    assert_eq!(saturate(&f, &g).unwrap().1, 2);
    let _ = Pencil::new(f, g).unwrap();
}
