//! JSON and CSV encodings. Rationals are written as separate integer
//! numerator and denominator fields so every value round-trips exactly.

use std::io::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::complex::hodge::HodgeParts;
use crate::complex::spectrum::SpectrumReport;
use crate::complex::{Complex, KForm};
use crate::error::{Error, Result};
use crate::fractal::Word;
use crate::harmonic::HarmonicOneForm;
use crate::measure::{GrowthRow, SingularityReport};
use crate::rational::Rational;
use crate::sg::PairingTable;

fn big_number(n: &BigInt) -> Number {
    // arbitrary precision keeps integers of any size exact
    serde_json::from_str(&n.to_string()).expect("integer literal is a JSON number")
}

fn parse_big(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().map_err(|_| Error::InvalidInput(format!("{what} `{n}` is not an integer"))),
        other => Err(Error::InvalidInput(format!("{what} must be an integer, got {other}"))),
    }
}

fn rational_fields(r: &Rational) -> (Number, Number) {
    (big_number(r.numer()), big_number(r.denom()))
}

fn rational_value(r: &Rational) -> Value {
    let (num, den) = rational_fields(r);
    serde_json::json!({ "num": num, "den": den })
}

fn parse_rational(v: &Value) -> Result<Rational> {
    let num = parse_big(v.get("num").unwrap_or(&Value::Null), "num")?;
    let den = parse_big(v.get("den").unwrap_or(&Value::Null), "den")?;
    if den == BigInt::from(0) {
        return Err(Error::InvalidInput("zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::InvalidInput(format!("malformed JSON: {e}"))
}

fn kform_value(f: &KForm) -> Value {
    let values: Vec<Value> = f
        .values()
        .iter()
        .enumerate()
        .map(|(cell, v)| {
            let (num, den) = rational_fields(v);
            serde_json::json!({ "cell": cell, "num": num, "den": den })
        })
        .collect();
    serde_json::json!({ "complex": f.complex_id(), "degree": f.degree(), "values": values })
}

/// `{"complex", "degree", "values": [{"cell", "num", "den"}]}`.
pub fn kform_to_json(f: &KForm) -> String {
    serde_json::to_string_pretty(&kform_value(f)).expect("form serializes")
}

/// Reads a form for `complex`. Cells not listed are zero; a cell listed
/// twice is an error.
pub fn kform_from_json(text: &str, complex: &Complex) -> Result<KForm> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let id = v.get("complex").and_then(Value::as_str).ok_or_else(|| Error::InvalidInput("missing `complex`".into()))?;
    if id != complex.id() {
        return Err(Error::ComplexMismatch { expected: complex.id().to_string(), found: id.to_string() });
    }
    let degree = v.get("degree").and_then(Value::as_u64).ok_or_else(|| Error::InvalidInput("missing `degree`".into()))? as usize;
    if degree > complex.max_degree() {
        return Err(Error::DegreeOutOfRange { degree, max: complex.max_degree() });
    }
    let entries = v.get("values").and_then(Value::as_array).ok_or_else(|| Error::InvalidInput("missing `values`".into()))?;
    let mut values: Vec<Option<Rational>> = vec![None; complex.count(degree)];
    for entry in entries {
        let cell = entry.get("cell").and_then(Value::as_u64).ok_or_else(|| Error::InvalidInput("entry without `cell`".into()))? as usize;
        let slot = values.get_mut(cell).ok_or(Error::NoSuchCell { degree, index: cell })?;
        if slot.replace(parse_rational(entry)?).is_some() {
            return Err(Error::InvalidInput(format!("cell {cell} listed twice")));
        }
    }
    KForm::new(complex, degree, values.into_iter().map(Option::unwrap_or_default).collect())
}

/// Form JSON plus `family`, `level` and `provenance`.
pub fn harmonic_form_value(h: &HarmonicOneForm) -> Value {
    let mut v = kform_value(&h.form);
    let obj = v.as_object_mut().expect("object");
    obj.insert("family".into(), Value::String(h.family.name().into()));
    obj.insert("level".into(), Value::from(h.level));
    obj.insert("provenance".into(), serde_json::to_value(&h.provenance).expect("provenance serializes"));
    v
}

/// Exact Hodge parts as `{"exact", "coexact", "harmonic"}`, each a KForm.
pub fn hodge_parts_to_json(parts: &HodgeParts) -> String {
    let v = serde_json::json!({
        "exact": kform_value(&parts.exact),
        "coexact": kform_value(&parts.coexact),
        "harmonic": kform_value(&parts.harmonic),
    });
    serde_json::to_string_pretty(&v).expect("parts serialize")
}

/// Floating Hodge parts, each a dense array of cell values.
pub fn float_parts_to_json(complex_id: &str, degree: usize, exact: &[f64], coexact: &[f64], harmonic: &[f64]) -> String {
    let v = serde_json::json!({
        "complex": complex_id,
        "degree": degree,
        "exact": exact,
        "coexact": coexact,
        "harmonic": harmonic,
    });
    serde_json::to_string_pretty(&v).expect("parts serialize")
}

/// A family of forms as a JSON array.
pub fn harmonic_family_to_json(forms: &[HarmonicOneForm]) -> String {
    serde_json::to_string_pretty(&Value::Array(forms.iter().map(harmonic_form_value).collect())).expect("family serializes")
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// Degree-indexed cells with labels, incidence triplets `[lower, upper,
/// sign]` per degree, and weights as `{num, den}`.
pub fn complex_to_json(c: &Complex) -> String {
    let top = c.max_degree();
    let cells: Vec<Vec<CellJson>> = (0..=top)
        .map(|k| c.cells(k).iter().map(|cell| CellJson { index: cell.index, label: cell.label.clone() }).collect())
        .collect();
    let incidence: Vec<Vec<(usize, usize, i8)>> = (0..top).map(|k| c.incidence(k).triplets().collect()).collect();
    let weights: Vec<Vec<Value>> = (0..=top).map(|k| c.weights(k).iter().map(rational_value).collect()).collect();
    let counts: Vec<usize> = (0..=top).map(|k| c.count(k)).collect();
    serde_json::to_string_pretty(&serde_json::json!({
        "id": c.id(),
        "counts": counts,
        "cells": cells,
        "incidence": incidence,
        "weights": weights,
    }))
    .expect("complex serializes")
}

/// Rebuilds a complex from [`complex_to_json`] output.
pub fn complex_from_json(text: &str) -> Result<Complex> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let missing = |field: &str| Error::InvalidInput(format!("missing `{field}`"));
    let id = v.get("id").and_then(Value::as_str).ok_or_else(|| missing("id"))?;
    let cells: Vec<Vec<CellJson>> =
        serde_json::from_value(v.get("cells").cloned().ok_or_else(|| missing("cells"))?).map_err(json_error)?;
    let incidence: Vec<Vec<(usize, usize, i8)>> =
        serde_json::from_value(v.get("incidence").cloned().ok_or_else(|| missing("incidence"))?).map_err(json_error)?;
    let weights = v
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| missing("weights"))?
        .iter()
        .map(|per| per.as_array().ok_or_else(|| missing("weights"))?.iter().map(parse_rational).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let cells = cells
        .into_iter()
        .enumerate()
        .map(|(k, list)| list.into_iter().map(|c| crate::complex::Cell { degree: k, index: c.index, label: c.label }).collect())
        .collect();
    Complex::new(id, cells, incidence, weights)
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("CSV output failed: {e}"))
}

fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

/// Fixed-precision float text with negative zero folded to zero.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.10}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// One row per eigenvalue: `degree, eigenvalue, label, multiplicity`, the
/// multiplicity being the size of its cluster.
pub fn write_spectrum_csv<W: Write>(out: W, report: &SpectrumReport) -> Result<()> {
    let clusters = report.rows();
    let cut = report.tol * report.max_abs().max(1.0);
    let mut pairs: Vec<_> = report.eigenpairs.iter().map(|p| (p.eigenvalue, p.label)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let rows = pairs.into_iter().map(|(lambda, label)| {
        let multiplicity = clusters
            .iter()
            .find(|r| r.label == label && (r.eigenvalue - lambda).abs() <= cut)
            .map_or(1, |r| r.multiplicity);
        vec![report.degree.to_string(), format_float(lambda), label.to_string(), multiplicity.to_string()]
    });
    write_csv(out, &["degree", "eigenvalue", "label", "multiplicity"], rows)
}

/// `omega, omega_prime, num, den` for every entry of the table.
pub fn write_pairing_csv<W: Write>(out: W, table: &PairingTable) -> Result<()> {
    let rows = table.forms.iter().enumerate().flat_map(|(i, form)| {
        table.cycles.iter().enumerate().map(move |(j, cycle)| {
            let v = &table.entries[i][j];
            vec![form.to_string(), cycle.to_string(), v.numer().to_string(), v.denom().to_string()]
        })
    });
    write_csv(out, &["omega", "omega_prime", "num", "den"], rows)
}

/// `form, word, face, num, den`.
pub fn write_face_cycles_csv<W: Write>(out: W, rows: &[(String, Word, usize, Rational)]) -> Result<()> {
    let rows = rows.iter().map(|(form, w, f, v)| {
        vec![form.clone(), w.to_string(), f.to_string(), v.numer().to_string(), v.denom().to_string()]
    });
    write_csv(out, &["form", "word", "face", "num", "den"], rows)
}

/// `m, l1_diff_num, l1_diff_den, bound_num, bound_den, pass`.
pub fn write_singularity_csv<W: Write>(out: W, report: &SingularityReport) -> Result<()> {
    let bound = &report.bound;
    let rows = report.rows().map(|(m, d, ok)| {
        vec![
            m.to_string(),
            d.numer().to_string(),
            d.denom().to_string(),
            bound.numer().to_string(),
            bound.denom().to_string(),
            ok.to_string(),
        ]
    });
    write_csv(out, &["m", "l1_diff_num", "l1_diff_den", "bound_num", "bound_den", "pass"], rows)
}

/// `n, mass, ratio`; the mass is written as an exact fraction `p/q` and
/// an undefined ratio as an empty field.
pub fn write_growth_csv<W: Write>(out: W, rows: &[GrowthRow]) -> Result<()> {
    let rows = rows
        .iter()
        .map(|r| vec![r.n.to_string(), r.mass.to_string(), r.ratio.map(format_float).unwrap_or_default()]);
    write_csv(out, &["n", "mass", "ratio"], rows)
}

/// Generic table writer for command-specific outputs.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    write_csv(out, header, rows)
}
