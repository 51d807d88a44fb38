//! JSON envelope and convention metadata shared by all outputs.

use serde::Serializer;
use serde::ser::SerializeSeq;
use serde_json::{Value, json};

use crate::linalg::Mat2;

pub const SCHEMA: u32 = 1;

/// Row-major `[[[re, im], [re, im]], [[re, im], [re, im]]]`.
pub fn ser_mat<S: Serializer>(m: &Mat2, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    for i in 0..2 {
        seq.serialize_element(&[[m[(i, 0)].re, m[(i, 0)].im], [m[(i, 1)].re, m[(i, 1)].im]])?;
    }
    seq.end()
}

pub fn mat_json(m: &Mat2) -> Value {
    let e = |i, j| {
        let z: num_complex::Complex64 = m[(i, j)];
        json!([z.re, z.im])
    };
    json!([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
}

/// Shortest round-trip text, in exponent form for tiny or huge magnitudes.
pub fn csv_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&x.abs()) { x.to_string() } else { format!("{x:e}") }
}

/// Sign conventions every numeric result depends on.
pub fn convention() -> Value {
    json!({
        "bracket": "[f,g] = p (f g' - f' g)",
        "bracket_sign": -1,
        "quasi_derivatives": "f0 = [f, v], f1 = -[f, u]; f ~ f0 u + f1 v at each endpoint",
        "boundary_maps": "Gamma0 f = (f0(a), f0(b)), Gamma1 f = (f1(a), -f1(b))",
        "fundamental_system": "u1 ~ u_a, u2 ~ v_a at a; Wronskian u10 u21 - u11 u20 = 1",
        "weyl": "M0 = [[-u10, 1], [1, -u21]] / u20, Minf = [[u21, 1], [1, u10]] / u11, Im M0 >= 0 for Im lambda > 0",
        "parameters": "theta: Gamma1 = theta Gamma0 (theta = 0 is the Friedrichs extension); vartheta: -Gamma0 = vartheta Gamma1 (vartheta = 0 is L0)",
        "matrices": "row-major, entries [re, im]"
    })
}

pub fn envelope(command: &str, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "convention": convention(),
        "result": result,
    })
}
