//! Report construction. Every report carries a JSON value (keys sorted, so
//! re-runs are byte-identical) and a plain-text rendering.

use std::fmt::Write;

use serde_json::{json, Value};

use quadpencil_core::diagnose::{
    contains_plane, diagnose_point, min_rank_in_pencil, subspace_cap_from_env, CentralFibre,
};
use quadpencil_core::disc::{binary_discriminant, pencil_determinant};
use quadpencil_core::pencil::{plucker, saturate, CoordinateChange};
use quadpencil_core::ring::{parse_literal, DEFAULT_DEGREE_CAP};
use quadpencil_core::stability::{check as check_pencil, semistable_reduce, StabilityVerdict, Witness};
use quadpencil_core::{Error, FieldElem, Pencil, PencilFile, SearchBudget, Valuation};

pub struct Report {
    pub json: Value,
    pub text: String,
}

fn header(command: &str, file: &PencilFile) -> Value {
    json!({
        "tool": "quadpencil",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "name": file.name,
        "field": file.field,
        "n": file.n,
    })
}

fn extend(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn valuation_json(v: Valuation) -> Value {
    match v {
        Valuation::Finite(x) => json!(x),
        Valuation::Infinite => json!("+inf"),
    }
}

fn matrix_json(c: &CoordinateChange) -> Value {
    json!(c.matrix().iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "rho": w.rho.0,
        "coordinate_change": matrix_json(&w.coordinate_change),
        "mult": w.mult,
        "bound": w.bound.to_string(),
    })
}

fn budget_text(b: &SearchBudget) -> String {
    format!(
        "budget: max_weight_sum={} coord_random={} seed={} max_steps={}\n",
        b.max_weight_sum, b.max_random_coord_changes, b.rng_seed, b.max_reduction_steps
    )
}

/// Saturates the input, so every later stage sees a normalized pencil.
fn normalized(file: &PencilFile) -> Result<(Pencil, i64), Error> {
    let p = file.to_pencil(DEFAULT_DEGREE_CAP)?;
    saturate(&p.f, &p.g)
}

pub fn disc(file: &PencilFile) -> Result<Report, Error> {
    let p = file.to_pencil(DEFAULT_DEGREE_CAP)?;
    plucker(&p)?;
    let det = pencil_determinant(&p);
    let d = binary_discriminant(&det);
    let smooth = !d.is_zero();
    let coeffs: Vec<String> = det.coeffs().iter().map(|c| c.to_string()).collect();
    let json = extend(
        header("disc", file),
        json!({
            "determinant": coeffs,
            "discriminant": d.to_string(),
            "disc_valuation": valuation_json(d.valuation()),
            "smooth_generic_fibre": smooth,
        }),
    );
    let text = format!(
        "det(lambda A + mu B) = {det}\ndiscriminant = {d}\ndisc valuation = {}\nsmooth generic fibre = {smooth}\n",
        d.valuation()
    );
    Ok(Report { json, text })
}

pub fn check(file: &PencilFile, budget: &SearchBudget) -> Result<Report, Error> {
    let (p, shed) = normalized(file)?;
    let verdict = check_pencil(&p, budget)?;
    let dv = quadpencil_core::disc_valuation(&p);
    let threshold = p.n() as i64 - 2;
    let json = extend(
        header("check", file),
        json!({
            "budget": budget,
            "normalization_shed": shed,
            "status": verdict.status(),
            "witness": verdict.witness().map(witness_json),
            "certificate": {"disc_valuation": valuation_json(dv), "threshold": threshold},
        }),
    );
    let mut text = budget_text(budget);
    let _ = writeln!(text, "status: {}", verdict.status());
    let _ = writeln!(text, "disc valuation {dv}, certificate threshold {threshold}");
    if let StabilityVerdict::Unstable(w) = &verdict {
        let _ = writeln!(text, "witness: rho = {}, mult = {} > {}", w.rho, w.mult, w.bound);
        if !w.coordinate_change.is_identity() {
            let _ = writeln!(text, "coordinates: {}", matrix_json(&w.coordinate_change));
        }
    }
    Ok(Report { json, text })
}

pub fn reduce(file: &PencilFile, budget: &SearchBudget) -> Result<(Report, PencilFile), Error> {
    let p = file.to_pencil(DEFAULT_DEGREE_CAP)?;
    let trace = semistable_reduce(&p, budget)?;
    let reduced = PencilFile::from_pencil(&trace.final_pencil, file.name.clone(), file.comment.clone());
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "rho": s.rho.0,
                "coordinate_change": matrix_json(&s.coordinate_change),
                "mult": s.mult,
                "disc_valuation_before": s.disc_val_before,
                "disc_valuation_after": s.disc_val_after,
                "drop": s.disc_val_before - s.disc_val_after,
            })
        })
        .collect();
    let json = extend(
        header("reduce", file),
        json!({
            "budget": budget,
            "normalization_shed": trace.initial_shed,
            "initial_disc_valuation": trace.initial_disc_val,
            "final_disc_valuation": trace.final_disc_val(),
            "final_status": trace.final_status.status(),
            "steps": steps,
            "reduced": reduced,
        }),
    );
    let mut text = budget_text(budget);
    let _ = writeln!(text, "initial disc valuation {}", trace.initial_disc_val);
    for (i, s) in trace.steps.iter().enumerate() {
        let _ = writeln!(
            text,
            "step {}: rho = {}, mult = {}, disc valuation {} -> {}",
            i + 1,
            s.rho,
            s.mult,
            s.disc_val_before,
            s.disc_val_after
        );
    }
    let _ = writeln!(text, "final disc valuation {} ({})", trace.final_disc_val(), trace.final_status.status());
    let _ = writeln!(text, "f = {}\ng = {}", trace.final_pencil.f, trace.final_pencil.g);
    Ok((Report { json, text }, reduced))
}

fn parse_point(file: &PencilFile, src: &str) -> Result<Vec<FieldElem>, Error> {
    src.split(':')
        .map(|s| {
            parse_literal(file.field, s.trim(), 0)
                .map(|x| x.at_zero())
                .map_err(|e| Error::InvalidPoint(format!("{s:?}: {e}")))
        })
        .collect()
}

pub fn diagnose(file: &PencilFile, point: Option<&str>) -> Result<Report, Error> {
    let (p, shed) = normalized(file)?;
    let fibre = CentralFibre::from_pencil(&p)?;
    let min_rank = min_rank_in_pencil(&fibre)?;
    let plane = match file.field {
        quadpencil_core::FieldSpec::Prime { .. } if p.n() >= 3 => {
            Some(contains_plane(&fibre, subspace_cap_from_env())?)
        }
        _ => None,
    };
    let point_json = match point {
        None => Value::Null,
        Some(src) => {
            let pt = parse_point(file, src)?;
            let d = diagnose_point(&p, &pt)?;
            json!({
                "point": d.point.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "jacobian_rank": d.jacobian_rank,
                "is_singular": d.is_singular,
                "is_hypersurface_singularity": d.is_hypersurface_singularity,
            })
        }
    };
    let mut text = format!("min rank in central pencil: {min_rank}\n");
    match plane {
        Some(b) => {
            let _ = writeln!(text, "contains rational (n-3)-plane: {b}");
        }
        None => text.push_str("contains rational (n-3)-plane: not applicable\n"),
    }
    if let Value::Object(m) = &point_json {
        let _ = writeln!(
            text,
            "point: singular = {}, jacobian rank = {}, hypersurface singularity = {}",
            m["is_singular"], m["jacobian_rank"], m["is_hypersurface_singularity"]
        );
    }
    let json = extend(
        header("diagnose", file),
        json!({
            "normalization_shed": shed,
            "min_rank": min_rank,
            "contains_plane": plane,
            "subspace_cap": subspace_cap_from_env().to_string(),
            "point": point_json,
        }),
    );
    Ok(Report { json, text })
}
