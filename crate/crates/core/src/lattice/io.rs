//! Text grid-file format for lattice fields and CSV output for profiles.
//!
//! Layout:
//!
//! ```text
//! swmoment-field v1
//! rep <name|scalar>
//! dims <n> <n> <n>
//! center <cx> <cy> <cz>
//! spacing <h>
//! radius <R>
//! epsilon <eps>
//! values <per-node count>
//! conn <0 | dim. of the gauge algebra>
//! <one line per node, row-major (x, then y, then z): values [conn]>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{Domain, FrequencyProfile, LatticeError, LatticeField};
use crate::rep::QuatRep;

/// Built-in representation lookup by CLI identifier.
pub fn rep_by_name(name: &str) -> Option<QuatRep> {
    match name {
        "classical" => Some(QuatRep::classical()),
        "su2-adjoint" => Some(QuatRep::adjoint_su2()),
        "su3-adjoint" => Some(QuatRep::adjoint_su3()),
        "adhm12" => Some(QuatRep::adhm12()),
        _ => {
            if let Some(n) = name.strip_prefix("multispinor-") {
                return n.parse::<usize>().ok().filter(|&n| (1..=8).contains(&n)).map(QuatRep::multispinor);
            }
            if let Some(k) = name.strip_prefix("uk-") {
                return k.parse::<usize>().ok().filter(|&k| (1..=4).contains(&k)).map(QuatRep::uk_spinors);
            }
            None
        }
    }
}

pub fn write_field(field: &LatticeField, path: &Path) -> Result<(), LatticeError> {
    let dom = &field.domain;
    let d = dom.dim();
    let g = field.rep.as_ref().map_or(0, |r| r.dim_g());
    let conn_dim = if field.conn.is_some() { g } else { 0 };
    let mut out = String::new();
    out.push_str("swmoment-field v1\n");
    let rep_name = field.rep.as_ref().map_or("scalar", |r| r.name.as_str());
    writeln!(out, "rep {rep_name}").unwrap();
    writeln!(out, "dims {d} {d} {d}").unwrap();
    writeln!(out, "center {:.17e} {:.17e} {:.17e}", dom.center[0], dom.center[1], dom.center[2]).unwrap();
    writeln!(out, "spacing {:.17e}", dom.spacing).unwrap();
    writeln!(out, "radius {:.17e}", dom.radius).unwrap();
    writeln!(out, "epsilon {:.17e}", field.epsilon).unwrap();
    writeln!(out, "values {}", field.value_dim).unwrap();
    writeln!(out, "conn {conn_dim}").unwrap();
    for node in 0..dom.n_nodes() {
        let mut line = String::new();
        for v in field.value(node) {
            write!(line, "{v:.17e} ").unwrap();
        }
        if let Some(conn) = &field.conn {
            for v in &conn[node * 3 * g..(node + 1) * 3 * g] {
                write!(line, "{v:.17e} ").unwrap();
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<LatticeField, LatticeError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let mut take = |what: &str| -> Result<(usize, String), LatticeError> {
        lines
            .next()
            .map(|(i, l)| (i + 1, l.to_string()))
            .ok_or_else(|| LatticeError::Parse { line: 0, msg: format!("unexpected end of file, expected {what}") })
    };
    let parse_err = |line: usize, msg: String| LatticeError::Parse { line, msg };

    let (ln, header) = take("header")?;
    if header.trim() != "swmoment-field v1" {
        return Err(parse_err(ln, format!("bad header {header:?}")));
    }
    let mut fields = std::collections::HashMap::new();
    for key in ["rep", "dims", "center", "spacing", "radius", "epsilon", "values", "conn"] {
        let (ln, line) = take(key)?;
        let (k, rest) = line.split_once(' ').ok_or_else(|| parse_err(ln, format!("expected `{key} ...`")))?;
        if k != key {
            return Err(parse_err(ln, format!("expected key {key}, got {k}")));
        }
        fields.insert(key, (ln, rest.to_string()));
    }
    let rep_name = fields["rep"].1.clone();
    let rep = if rep_name == "scalar" {
        None
    } else {
        Some(rep_by_name(&rep_name).ok_or_else(|| parse_err(fields["rep"].0, format!("unknown representation {rep_name:?}")))?)
    };
    let dims: Vec<usize> = fields["dims"].1.split_whitespace().map(|t| t.parse().unwrap_or(0)).collect();
    if dims.len() != 3 || dims[0] != dims[1] || dims[1] != dims[2] || dims[0] % 2 == 0 || dims[0] < 3 {
        return Err(parse_err(fields["dims"].0, format!("dims must be three equal odd values, got {:?}", fields["dims"].1)));
    }
    let center: Vec<f64> = fields["center"].1.split_whitespace().filter_map(|t| t.parse().ok()).collect();
    if center.len() != 3 {
        return Err(parse_err(fields["center"].0, "center needs three floats".into()));
    }
    let scalar_field = |key: &str| -> Result<f64, LatticeError> {
        fields[key].1.trim().parse::<f64>().map_err(|e| parse_err(fields[key].0, format!("bad {key}: {e}")))
    };
    let spacing = scalar_field("spacing")?;
    let radius = scalar_field("radius")?;
    let epsilon = scalar_field("epsilon")?;
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(parse_err(fields["epsilon"].0, format!("epsilon must be positive, got {epsilon}")));
    }
    let value_dim: usize = fields["values"].1.trim().parse().map_err(|e| parse_err(fields["values"].0, format!("bad values: {e}")))?;
    let conn_dim: usize = fields["conn"].1.trim().parse().map_err(|e| parse_err(fields["conn"].0, format!("bad conn: {e}")))?;

    let domain = Domain::new([center[0], center[1], center[2]], radius, spacing)?;
    if domain.dim() != dims[0] {
        return Err(parse_err(fields["dims"].0, format!("dims {} inconsistent with radius/spacing (expect {})", dims[0], domain.dim())));
    }
    if let Some(r) = &rep {
        if r.dim_s != value_dim {
            return Err(parse_err(fields["values"].0, format!("representation {} has dim {}, file says {}", rep_name, r.dim_s, value_dim)));
        }
        if conn_dim != 0 && conn_dim != r.dim_g() {
            return Err(parse_err(fields["conn"].0, format!("connection dim {} does not match the gauge algebra {}", conn_dim, r.dim_g())));
        }
    } else if conn_dim != 0 {
        return Err(parse_err(fields["conn"].0, "scalar fields cannot carry a connection".into()));
    }

    let n_nodes = domain.n_nodes();
    let per_line = value_dim + 3 * conn_dim;
    let mut values = Vec::with_capacity(n_nodes * value_dim);
    let mut conn = if conn_dim > 0 { Some(Vec::with_capacity(n_nodes * 3 * conn_dim)) } else { None };
    for node in 0..n_nodes {
        let (ln, line) = take("node data")?;
        let nums: Vec<f64> = line.split_whitespace().filter_map(|t| t.parse().ok()).collect();
        if nums.len() != per_line {
            return Err(parse_err(ln, format!("node {node}: expected {per_line} floats, got {}", nums.len())));
        }
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(parse_err(ln, format!("node {node}: non-finite value")));
        }
        values.extend_from_slice(&nums[..value_dim]);
        if let Some(c) = conn.as_mut() {
            c.extend_from_slice(&nums[value_dim..]);
        }
    }
    Ok(LatticeField { domain, rep, value_dim, values, conn, epsilon })
}

/// CSV with the fixed column order radius, m, d, n.
pub fn profile_to_csv(profile: &FrequencyProfile) -> String {
    let mut out = String::from("radius,m,d,n\n");
    for i in 0..profile.radii.len() {
        let n = profile.n[i].map_or("nan".to_string(), |v| format!("{v:.12e}"));
        writeln!(out, "{:.12e},{:.12e},{:.12e},{}", profile.radii[i], profile.m[i], profile.d[i], n).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::frequency_profile;

    #[test]
    fn field_roundtrip() {
        let dir = std::env::temp_dir().join("swmoment-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("field.txt");

        let dom = Domain::new([0.1, 0.0, -0.2], 1.0, 0.125).unwrap();
        let rep = QuatRep::classical();
        let g = rep.dim_g();
        let conn = move |p: [f64; 3]| {
            let mut a = vec![0.0; 3 * g];
            a[0] = 0.3 * p[1];
            a[g] = -0.1;
            a
        };
        let f = LatticeField::from_fn(dom, rep, 0.7, |p| vec![p[0], p[1] * p[2], 1.0, 0.0], Some(&conn));
        write_field(&f, &path).unwrap();
        let g2 = read_field(&path).unwrap();
        assert_eq!(g2.value_dim, 4);
        assert_eq!(g2.values, f.values);
        assert_eq!(g2.conn, f.conn);
        assert_eq!(g2.epsilon, f.epsilon);
        assert_eq!(g2.domain, f.domain);
    }

    #[test]
    fn parse_errors_are_precise() {
        let dir = std::env::temp_dir().join("swmoment-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.txt");
        let header = "swmoment-field v1\nrep nonsense\ndims 17 17 17\ncenter 0 0 0\nspacing 0.125\nradius 1.0\nepsilon 1.0\nvalues 4\nconn 0\n";
        std::fs::write(&path, header).unwrap();
        match read_field(&path) {
            Err(LatticeError::Parse { line, msg }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("nonsense"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        // truncated node data is also precise
        let good_header = header.replace("rep nonsense", "rep classical");
        std::fs::write(&path, good_header).unwrap();
        assert!(matches!(read_field(&path), Err(LatticeError::Parse { .. })));
    }

    #[test]
    fn csv_has_fixed_columns() {
        let dom = Domain::new([0.0; 3], 1.0, 1.0 / 16.0).unwrap();
        let f = LatticeField::scalar_from_fn(dom, |p| p[0]);
        let prof = frequency_profile(&f, [0.0; 3], &[0.4, 0.5, 0.6, 0.7]).unwrap();
        let csv = profile_to_csv(&prof);
        assert!(csv.starts_with("radius,m,d,n\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn rep_lookup() {
        for name in ["classical", "su2-adjoint", "su3-adjoint", "adhm12", "multispinor-2", "uk-3"] {
            assert!(rep_by_name(name).is_some(), "{name}");
        }
        assert!(rep_by_name("su5-adjoint").is_none());
    }
}
