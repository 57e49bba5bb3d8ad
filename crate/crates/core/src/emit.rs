//! CSV and JSON emitters. Probabilities derived from exact arithmetic are
//! always written as "p/q" strings, never decimals; every artifact embeds
//! the run configuration and library version.

use crate::chain::{ChainDirection, TransitionMatrix};
use crate::gens::{BasisElt, LinComb};
use crate::ratio::{format_rat, Rat};
use crate::spectral::EigenSystem;
use serde_json::{json, Value};

/// Key-value pairs echoed into every output artifact.
pub type Meta = Vec<(String, String)>;

pub fn meta_header(meta: &Meta) -> String {
    let mut out = format!("# hopfchain v{}\n", crate::VERSION);
    for (k, v) in meta {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out
}

fn meta_json(meta: &Meta) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("version".into(), json!(crate::VERSION));
    for (k, v) in meta {
        obj.insert(k.clone(), json!(v));
    }
    Value::Object(obj)
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn direction_name(d: ChainDirection) -> &'static str {
    match d {
        ChainDirection::HopfInverse => "hopf-inverse",
        ChainDirection::Forward => "forward",
    }
}

pub fn matrix_csv(k: &TransitionMatrix, meta: &Meta) -> String {
    let mut out = meta_header(meta);
    out.push_str(&format!("# direction: {}\n", direction_name(k.direction)));
    out.push_str("state");
    for l in &k.labels {
        out.push(',');
        out.push_str(&csv_quote(l));
    }
    out.push('\n');
    for i in 0..k.dim() {
        out.push_str(&csv_quote(&k.labels[i]));
        for v in k.row_dense(i) {
            out.push(',');
            out.push_str(&format_rat(&v));
        }
        out.push('\n');
    }
    out
}

pub fn matrix_json(k: &TransitionMatrix, meta: &Meta) -> String {
    let rows: Vec<Vec<String>> = (0..k.dim())
        .map(|i| k.row_dense(i).iter().map(format_rat).collect())
        .collect();
    let v = json!({
        "meta": meta_json(meta),
        "kind": "transition-matrix",
        "instance": k.instance,
        "n": k.n,
        "a": k.a,
        "direction": direction_name(k.direction),
        "basis": k.labels,
        "rows": rows,
    });
    serde_json::to_string_pretty(&v).expect("valid json")
}

/// Left eigenvectors as rows and right eigenvectors as columns, matching the
/// layout of the worked rock-breaking tables.
pub fn eigen_csv(sys: &EigenSystem, certificate: bool, meta: &Meta) -> String {
    let mut out = meta_header(meta);
    out.push_str(&format!(
        "# duality-certificate: {}\n",
        if certificate { "pass" } else { "FAIL" }
    ));
    out.push_str("# left eigenvectors g_b as rows\n");
    out.push_str("index,exponent");
    for label in &sys.labels {
        out.push(',');
        out.push_str(&csv_quote(label));
    }
    out.push('\n');
    let g = sys.left_matrix();
    for (i, ev) in sys.left.iter().enumerate() {
        out.push_str(&csv_quote(&sys.labels[i]));
        out.push_str(&format!(",{}", ev.exponent));
        for v in &g.data[i] {
            out.push(',');
            out.push_str(&format_rat(v));
        }
        out.push('\n');
    }
    out.push_str("# right eigenvectors f_b as columns\n");
    out.push_str("state");
    for label in &sys.labels {
        out.push(',');
        out.push_str(&csv_quote(label));
    }
    out.push('\n');
    let f = sys.right_matrix();
    for i in 0..sys.basis.len() {
        out.push_str(&csv_quote(&sys.labels[i]));
        for v in &f.data[i] {
            out.push(',');
            out.push_str(&format_rat(v));
        }
        out.push('\n');
    }
    out
}

pub fn eigen_json(sys: &EigenSystem, certificate: bool, meta: &Meta) -> String {
    let g = sys.left_matrix();
    let f = sys.right_matrix();
    let v = json!({
        "meta": meta_json(meta),
        "kind": "eigensystem",
        "instance": sys.instance,
        "n": sys.n,
        "basis": sys.labels,
        "exponents": sys.left.iter().map(|ev| ev.exponent).collect::<Vec<_>>(),
        "duality_certificate": certificate,
        "left_rows": g.data.iter().map(|r| r.iter().map(format_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "right_columns_as_rows": f.data.iter().map(|r| r.iter().map(format_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&v).expect("valid json")
}

pub fn distribution_csv(
    basis_labels: &[(String, Rat)],
    value_name: &str,
    meta: &Meta,
) -> String {
    let mut out = meta_header(meta);
    out.push_str(&format!("state,{value_name}\n"));
    for (label, v) in basis_labels {
        out.push_str(&format!("{},{}\n", csv_quote(label), format_rat(v)));
    }
    out
}

pub fn distribution_json(
    basis_labels: &[(String, Rat)],
    kind: &str,
    meta: &Meta,
) -> String {
    let entries: Vec<Value> = basis_labels
        .iter()
        .map(|(label, v)| json!({"state": label, "value": format_rat(v)}))
        .collect();
    let v = json!({
        "meta": meta_json(meta),
        "kind": kind,
        "entries": entries,
    });
    serde_json::to_string_pretty(&v).expect("valid json")
}

pub fn trajectory_text(labels: &[String], meta: &Meta) -> String {
    let mut out = meta_header(meta);
    for l in labels {
        out.push_str(l);
        out.push('\n');
    }
    out
}

pub fn curve_csv(points: &[(u32, Rat)], x_name: &str, y_name: &str, meta: &Meta) -> String {
    let mut out = meta_header(meta);
    out.push_str(&format!("{x_name},{y_name}\n"));
    for (x, y) in points {
        out.push_str(&format!("{x},{}\n", format_rat(y)));
    }
    out
}

pub fn chi_json(chi: &crate::absorb::QuasisymFunction, meta: &Meta) -> String {
    let coeffs: Vec<Value> = chi
        .coeffs
        .iter()
        .map(|(alpha, c)| {
            json!({
                "composition": alpha,
                "coefficient": format_rat(c),
            })
        })
        .collect();
    let v = json!({
        "meta": meta_json(meta),
        "kind": "chromatic-quasisymmetric",
        "degree": chi.degree,
        "monomial_coefficients": coeffs,
    });
    serde_json::to_string_pretty(&v).expect("valid json")
}

/// Labeled row distribution of a matrix, for the distribution emitters.
pub fn labeled_distribution(
    k: &TransitionMatrix,
    dist: &LinComb<BasisElt>,
) -> Vec<(String, Rat)> {
    let mut out = Vec::new();
    for (i, b) in k.basis.iter().enumerate() {
        let v = dist.coeff(b);
        out.push((k.labels[i].clone(), v));
    }
    out
}
