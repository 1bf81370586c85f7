//! Canonical report serialization: pretty JSON with sorted keys and every
//! float printed at 17 significant digits, so identical inputs produce
//! byte-identical reports.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use serde_json::{json, Value};

use crate::algebra::ValidationReport;
use crate::curvature::CurvatureReport;
use crate::flow::FlowTrace;
use crate::io::matrix_rows;
use crate::minimality::{Comparison, MinimalityCertificate};
use crate::structures::{StructureClassification, StructureResiduals};

struct Sci17<'a> {
    inner: PrettyFormatter<'a>,
}

impl<'a> Formatter for Sci17<'a> {
    fn write_f64<W: io::Write + ?Sized>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", format_f64(value))
    }

    fn begin_array<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: io::Write + ?Sized>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: io::Write + ?Sized>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// 17 significant digits in scientific notation; valid JSON number syntax.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Canonical rendering: sorted keys (the Value map is ordered), two-space
/// indentation, floats at 17 significant digits, trailing newline.
pub fn to_canonical_json(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser =
        Serializer::with_formatter(&mut out, Sci17 { inner: PrettyFormatter::new() });
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    let mut s = String::from_utf8(out).expect("serializer emits utf-8");
    s.push('\n');
    s
}

fn flag_value(flag: &Option<crate::structures::PredicateFlag>) -> Value {
    match flag {
        None => Value::Null,
        Some(f) => json!({"holds": f.holds, "residual": f.residual}),
    }
}

pub fn validation_value(
    rep: &ValidationReport,
    structure_kind: &str,
    residuals: &StructureResiduals,
    classification: &StructureClassification,
    class_condition_residual: f64,
) -> Value {
    json!({
        "jacobi_residual": rep.jacobi_residual,
        "nilpotency_step": rep.nilpotency_step.map(|s| s as u64),
        "lcs_dims": rep.lcs_dims.iter().map(|&d| d as u64).collect::<Vec<_>>(),
        "structure": {
            "kind": structure_kind,
            "almost_complex_residual": residuals.almost_complex,
            "orthogonality_residual": residuals.orthogonality,
            "quaternion_residual": residuals.quaternion,
            "class_condition_residual": class_condition_residual,
            "integrable": flag_value(&classification.integrable),
            "abelian": flag_value(&classification.abelian),
            "bi_invariant": flag_value(&classification.bi_invariant),
            "closed": flag_value(&classification.closed),
        },
    })
}

pub fn curvature_value(rep: &CurvatureReport) -> Value {
    json!({
        "ricci": matrix_rows(&rep.ricci),
        "invariant_ricci": matrix_rows(&rep.invariant_ricci),
        "scal": rep.scal,
        "kind": rep.structure_kind.as_str(),
    })
}

pub fn certificate_value(cert: &MinimalityCertificate) -> Value {
    json!({
        "c": cert.c,
        "D": matrix_rows(&cert.derivation),
        "residual": cert.residual,
        "eigenvalue_type": cert.eigenvalue_type,
        "kind": cert.structure_kind.as_str(),
    })
}

pub fn comparison_value(
    verdict: Comparison,
    residual1: f64,
    residual2: f64,
    spectrum1: &[f64],
    spectrum2: &[f64],
) -> Value {
    json!({
        "verdict": verdict.as_str(),
        "residual1": residual1,
        "residual2": residual2,
        "spectrum1": spectrum1,
        "spectrum2": spectrum2,
    })
}

pub fn einstein_value(einstein: bool, constant: f64, soliton_constant: f64) -> Value {
    json!({
        "einstein": einstein,
        "einstein_constant": constant,
        "soliton_constant": soliton_constant,
    })
}

/// CSV trace of a flow run: one `step,F,gradnorm` row per iterate.
pub fn flow_trace_csv(trace: &FlowTrace) -> String {
    let mut out = String::from("step,F,gradnorm\n");
    for it in &trace.iterates {
        out.push_str(&format!(
            "{},{},{}\n",
            it.step,
            format_f64(it.f_value),
            format_f64(it.grad_norm)
        ));
    }
    out
}
