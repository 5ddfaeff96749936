//! Seeded random generation of pencils, weights and coordinate changes.

use rand::Rng;

use crate::disc::generic_fibre_smooth;
use crate::linalg::field_determinant;
use crate::pencil::{monomials, saturate, CoordinateChange, Pencil, QuadraticForm, WeightSystem};
use crate::ring::{FieldElem, FieldSpec, LaurentScalar};

/// A uniformly random field element; over `Q` an integer in `[-bound, bound]`.
pub fn random_field_elem<R: Rng + ?Sized>(field: FieldSpec, bound: i64, rng: &mut R) -> FieldElem {
    match field {
        FieldSpec::Rationals => field.from_i64(rng.gen_range(-bound..=bound)),
        FieldSpec::Prime { p } => FieldElem::Modular { value: rng.gen_range(0..p), p },
    }
}

/// A random invertible matrix over `k`.
pub fn random_field_gl<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Vec<Vec<FieldElem>> {
    loop {
        let m: Vec<Vec<FieldElem>> =
            (0..n).map(|_| (0..n).map(|_| random_field_elem(field, 2, rng)).collect()).collect();
        if !field_determinant(&m, field).is_zero() {
            return m;
        }
    }
}

pub fn random_coordinate_change<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> CoordinateChange {
    CoordinateChange::from_field_matrix(&random_field_gl(field, n, rng)).expect("invertible by construction")
}

/// A random element of `GL_n(R)` with entries of `t`-degree at most one.
pub fn random_integral_gl<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> CoordinateChange {
    loop {
        let base = random_field_gl(field, n, rng);
        let m = base
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let c0 = LaurentScalar::constant(c);
                        c0.add(&LaurentScalar::monomial(&random_field_elem(field, 2, rng), 1))
                    })
                    .collect()
            })
            .collect();
        if let Ok(c) = CoordinateChange::new(m) {
            return c;
        }
    }
}

/// Random effective weights with entries at most `max_entry` and sum at most `max_sum`.
pub fn random_effective_weight<R: Rng + ?Sized>(n: usize, max_entry: i64, max_sum: i64, rng: &mut R) -> WeightSystem {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_entry)).collect();
        if w.iter().sum::<i64>() <= max_sum {
            return WeightSystem(w);
        }
    }
}

/// A random quadric whose monomial coefficients are `a + b t + ...` with
/// small random coefficients up to `t`-degree `max_degree`; each monomial is
/// present with probability `density`.
pub fn random_form<R: Rng + ?Sized>(
    field: FieldSpec,
    n: usize,
    max_degree: usize,
    density: f64,
    rng: &mut R,
) -> QuadraticForm {
    let mut terms = Vec::new();
    for (i, j) in monomials(n) {
        if rng.gen_bool(density) {
            let cs: Vec<FieldElem> = (0..=max_degree).map(|_| random_field_elem(field, 3, rng)).collect();
            terms.push((i, j, LaurentScalar::from_coeffs(field, 0, &cs)));
        }
    }
    QuadraticForm::from_monomials(field, n, &terms).expect("indices in range")
}

/// A random normalized pencil with smooth generic fibre.
pub fn random_pencil<R: Rng + ?Sized>(field: FieldSpec, n: usize, max_degree: usize, rng: &mut R) -> Pencil {
    loop {
        let f = random_form(field, n, max_degree, 0.7, rng);
        let g = random_form(field, n, max_degree, 0.7, rng);
        let Ok((p, _)) = saturate(&f, &g) else { continue };
        if generic_fibre_smooth(&p) {
            return p;
        }
    }
}
