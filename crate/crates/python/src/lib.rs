//! Python bindings: the `quadpencil` extension module.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use quadpencil_core::diagnose::{self, CentralFibre, DEFAULT_SUBSPACE_CAP};
use quadpencil_core::disc::{binary_discriminant, pencil_determinant};
use quadpencil_core::pencil::{self as core_pencil, CoordinateChange, WeightSystem};
use quadpencil_core::ring::{parse_literal, DEFAULT_DEGREE_CAP};
use quadpencil_core::stability::{self, SearchBudget, StabilityVerdict};
use quadpencil_core::{Error, FieldSpec, PencilFile, Valuation};

create_exception!(quadpencil, PencilError, PyValueError);

fn err(e: Error) -> PyErr {
    PencilError::new_err(e.to_string())
}

fn field_from_py(field: &Bound<'_, PyAny>) -> PyResult<FieldSpec> {
    if let Ok(p) = field.extract::<u64>() {
        return FieldSpec::prime(p).map_err(err);
    }
    match field.extract::<String>()?.as_str() {
        "Q" | "QQ" | "rationals" => Ok(FieldSpec::Rationals),
        other => Err(PencilError::new_err(format!("unknown field {other:?}; use \"Q\" or a prime"))),
    }
}

fn valuation_to_py(v: Valuation) -> Option<i64> {
    v.finite()
}

fn coordinate_change(field: FieldSpec, n: usize, m: Option<Vec<Vec<String>>>) -> PyResult<CoordinateChange> {
    let Some(m) = m else { return Ok(CoordinateChange::identity(field, n)) };
    let entries = m
        .iter()
        .map(|row| row.iter().map(|s| parse_literal(field, s, DEFAULT_DEGREE_CAP)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    CoordinateChange::new(entries).map_err(err)
}

fn matrix_strings(c: &CoordinateChange) -> Vec<Vec<String>> {
    c.matrix().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

/// A pencil of quadrics over `k[[t]]`, given by two quadratic forms.
#[pyclass(module = "quadpencil", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Pencil {
    inner: quadpencil_core::Pencil,
}

#[pymethods]
impl Pencil {
    /// `field` is `"Q"` or an odd prime; `f` and `g` list monomials as
    /// `(i, j, literal)` with `1 <= i <= j <= n`.
    #[new]
    #[pyo3(signature = (field, n, f, g))]
    fn new(
        field: &Bound<'_, PyAny>,
        n: usize,
        f: Vec<(usize, usize, String)>,
        g: Vec<(usize, usize, String)>,
    ) -> PyResult<Self> {
        let file = PencilFile { name: None, comment: None, field: field_from_py(field)?, n, f, g };
        Ok(Pencil { inner: file.to_pencil(DEFAULT_DEGREE_CAP).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(src: &str) -> PyResult<Self> {
        let file = PencilFile::from_json(src).map_err(err)?;
        Ok(Pencil { inner: file.to_pencil(DEFAULT_DEGREE_CAP).map_err(err)? })
    }

    fn to_json(&self) -> String {
        PencilFile::from_pencil(&self.inner, None, None).to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    #[getter]
    fn f(&self) -> String {
        self.inner.f.to_string()
    }

    #[getter]
    fn g(&self) -> String {
        self.inner.g.to_string()
    }

    fn is_normalized(&self) -> bool {
        self.inner.is_normalized()
    }

    /// Coefficients of `det(lambda A + mu B)`, by increasing power of `lambda`.
    fn determinant(&self) -> Vec<String> {
        pencil_determinant(&self.inner).coeffs().iter().map(|c| c.to_string()).collect()
    }

    fn discriminant(&self) -> String {
        binary_discriminant(&pencil_determinant(&self.inner)).to_string()
    }

    /// `val_t D`, or `None` when the discriminant vanishes.
    fn disc_valuation(&self) -> Option<i64> {
        valuation_to_py(quadpencil_core::disc_valuation(&self.inner))
    }

    /// The 2x2 minors of the coefficient matrix, as literals.
    fn plucker(&self) -> PyResult<Vec<String>> {
        let pv = core_pencil::plucker(&self.inner).map_err(err)?;
        Ok(pv.minors().iter().map(|m| m.to_string()).collect())
    }

    fn plucker_min_valuation(&self) -> PyResult<i64> {
        Ok(core_pencil::plucker(&self.inner).map_err(err)?.min_valuation())
    }

    #[pyo3(signature = (rho, coordinate_change=None))]
    fn mult(&self, rho: Vec<i64>, coordinate_change: Option<Vec<Vec<String>>>) -> PyResult<i64> {
        let c = self::coordinate_change(self.inner.field(), self.inner.n(), coordinate_change)?;
        core_pencil::mult(&self.inner, &WeightSystem(rho), &c).map_err(err)
    }

    /// The pencil in the coordinates `x -> C diag(t^w) x` (not saturated).
    #[pyo3(signature = (rho, coordinate_change=None))]
    fn act(&self, rho: Vec<i64>, coordinate_change: Option<Vec<Vec<String>>>) -> PyResult<Pencil> {
        let c = self::coordinate_change(self.inner.field(), self.inner.n(), coordinate_change)?;
        Ok(Pencil { inner: core_pencil::act(&self.inner, &WeightSystem(rho), &c).map_err(err)? })
    }

    /// `(normalized pencil, power of t shed)`.
    fn saturate(&self) -> PyResult<(Pencil, i64)> {
        let (p, shed) = core_pencil::saturate(&self.inner.f, &self.inner.g).map_err(err)?;
        Ok((Pencil { inner: p }, shed))
    }

    #[pyo3(signature = (max_weight_sum=4, coord_random=200, seed=0))]
    fn check(&self, max_weight_sum: i64, coord_random: usize, seed: u64) -> PyResult<Verdict> {
        let budget = SearchBudget {
            max_weight_sum,
            max_random_coord_changes: coord_random,
            rng_seed: seed,
            ..Default::default()
        };
        Ok(Verdict::from(stability::check(&self.inner, &budget).map_err(err)?))
    }

    #[pyo3(signature = (max_weight_sum=4, coord_random=200, seed=0, max_steps=64))]
    fn reduce(&self, max_weight_sum: i64, coord_random: usize, seed: u64, max_steps: usize) -> PyResult<Trace> {
        let budget = SearchBudget {
            max_weight_sum,
            max_random_coord_changes: coord_random,
            rng_seed: seed,
            max_reduction_steps: max_steps,
        };
        let trace = stability::semistable_reduce(&self.inner, &budget).map_err(err)?;
        Ok(Trace {
            initial_disc_valuation: trace.initial_disc_val,
            final_disc_valuation: trace.final_disc_val(),
            final_status: trace.final_status.status().to_string(),
            steps: trace.steps.iter().map(|s| (s.rho.0.clone(), s.mult, s.disc_val_before, s.disc_val_after)).collect(),
            final_pencil: Pencil { inner: trace.final_pencil },
        })
    }

    /// Minimum rank of a member of the central-fibre pencil.
    fn min_rank(&self) -> PyResult<usize> {
        let fibre = CentralFibre::from_pencil(&self.inner).map_err(err)?;
        diagnose::min_rank_in_pencil(&fibre).map_err(err)
    }

    /// Whether the central fibre contains an `F_p`-rational `(n-3)`-plane.
    #[pyo3(signature = (cap=None))]
    fn contains_plane(&self, cap: Option<u128>) -> PyResult<bool> {
        let fibre = CentralFibre::from_pencil(&self.inner).map_err(err)?;
        diagnose::contains_plane(&fibre, cap.unwrap_or(DEFAULT_SUBSPACE_CAP)).map_err(err)
    }

    /// `(is_singular, jacobian_rank, is_hypersurface_singularity)` at a
    /// `k`-point of the central fibre, given as literals.
    fn diagnose_point(&self, point: Vec<String>) -> PyResult<(bool, usize, Option<bool>)> {
        let field = self.inner.field();
        let pt = point
            .iter()
            .map(|s| parse_literal(field, s, 0).map(|x| x.at_zero()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let d = diagnose::diagnose_point(&self.inner, &pt).map_err(err)?;
        Ok((d.is_singular, d.jacobian_rank, d.is_hypersurface_singularity))
    }

    fn __repr__(&self) -> String {
        format!("Pencil(n={}, field={}, f={}, g={})", self.inner.n(), self.inner.field(), self.inner.f, self.inner.g)
    }

    fn __eq__(&self, other: &Pencil) -> bool {
        self.inner == other.inner
    }
}

/// `(rho, mult, bound, coordinate_change)`.
type WitnessTuple = (Vec<i64>, i64, String, Vec<Vec<String>>);

/// A stability verdict; `witness` is set for unstable pencils.
#[pyclass(module = "quadpencil", frozen, get_all)]
struct Verdict {
    status: String,
    witness: Option<WitnessTuple>,
}

impl From<StabilityVerdict> for Verdict {
    fn from(v: StabilityVerdict) -> Self {
        Verdict {
            status: v.status().to_string(),
            witness: v
                .witness()
                .map(|w| (w.rho.0.clone(), w.mult, w.bound.to_string(), matrix_strings(&w.coordinate_change))),
        }
    }
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        match &self.witness {
            Some((rho, mult, bound, _)) => format!("Verdict({}, rho={rho:?}, mult={mult} > {bound})", self.status),
            None => format!("Verdict({})", self.status),
        }
    }
}

/// The outcome of semistable reduction. Each step is
/// `(rho, mult, disc_valuation_before, disc_valuation_after)`.
#[pyclass(module = "quadpencil", frozen, get_all)]
struct Trace {
    initial_disc_valuation: i64,
    final_disc_valuation: i64,
    final_status: String,
    steps: Vec<(Vec<i64>, i64, i64, i64)>,
    final_pencil: Pencil,
}

#[pymethods]
impl Trace {
    fn __repr__(&self) -> String {
        format!(
            "Trace({} -> {} in {} steps, {})",
            self.initial_disc_valuation,
            self.final_disc_valuation,
            self.steps.len(),
            self.final_status
        )
    }
}

#[pymodule]
fn quadpencil(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Pencil>()?;
    m.add_class::<Verdict>()?;
    m.add_class::<Trace>()?;
    m.add("PencilError", m.py().get_type::<PencilError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
