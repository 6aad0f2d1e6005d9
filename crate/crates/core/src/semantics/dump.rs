//! Line-based model dump.
//!
//! ```text
//! world <name>
//! d <name> <name>
//! l <name> <name>
//! val <atom> <name>...
//! product <n1> <n2>
//! class <class>
//! designated <name>
//! ```
//!
//! [`dump`] writes worlds in id order, pairs sorted by id, valuations by atom,
//! then the optional `product`, `class` and `designated` lines. Blank lines and
//! lines starting with `%` are ignored on input.

use super::{BimodalModel, FrameClass, SemanticsError};
use std::fmt::Write;

pub fn dump(m: &BimodalModel) -> String {
    let mut out = String::new();
    for w in m.worlds() {
        writeln!(out, "world {}", m.name(w)).unwrap();
    }
    for (a, b) in m.d_pairs() {
        writeln!(out, "d {} {}", m.name(a), m.name(b)).unwrap();
    }
    for (a, b) in m.l_pairs() {
        writeln!(out, "l {} {}", m.name(a), m.name(b)).unwrap();
    }
    for (atom, set) in m.valuation() {
        write!(out, "val {}", atom).unwrap();
        for &w in set {
            write!(out, " {}", m.name(w)).unwrap();
        }
        out.push('\n');
    }
    if let Some((n1, n2)) = m.product_shape() {
        writeln!(out, "product {} {}", n1, n2).unwrap();
    }
    if let Some(c) = m.class() {
        writeln!(out, "class {}", c).unwrap();
    }
    if let Some(d) = m.designated() {
        writeln!(out, "designated {}", m.name(d)).unwrap();
    }
    out
}

pub fn parse(text: &str) -> Result<BimodalModel, SemanticsError> {
    let mut m = BimodalModel::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| SemanticsError::Dump { line, msg };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let world = |m: &BimodalModel, name: &str| {
            m.world(name).map_err(|_| err(format!("unknown world `{}`", name)))
        };
        match fields[0] {
            "world" if fields.len() == 2 => {
                m.add_world(fields[1]).map_err(|e| err(e.to_string()))?;
            }
            "d" | "l" if fields.len() == 3 => {
                let a = world(&m, fields[1])?;
                let b = world(&m, fields[2])?;
                if fields[0] == "d" {
                    m.add_d(a, b);
                } else {
                    m.add_l(a, b);
                }
            }
            "val" if fields.len() >= 2 => {
                let atom = fields[1]
                    .parse()
                    .map_err(|_| err(format!("bad atom index `{}`", fields[1])))?;
                m.declare_atom(atom);
                for name in &fields[2..] {
                    let w = world(&m, name)?;
                    m.set_atom(atom, w, true);
                }
            }
            "product" if fields.len() == 3 => {
                let n1 = fields[1].parse().map_err(|_| err("bad product size".into()))?;
                let n2 = fields[2].parse().map_err(|_| err("bad product size".into()))?;
                m.set_product_shape(Some((n1, n2)));
            }
            "class" if fields.len() == 2 => {
                let c: FrameClass = fields[1].parse().map_err(err)?;
                m.set_class(Some(c));
            }
            "designated" if fields.len() == 2 => {
                let w = world(&m, fields[1])?;
                m.set_designated(Some(w));
            }
            other => return Err(err(format!("unrecognised line starting with `{}`", other))),
        }
    }
    Ok(m)
}
