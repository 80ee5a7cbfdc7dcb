//! FCIDUMP reading and writing.
//!
//! Orbital indices are 1-based in the file and 0-based in memory. Body lines
//! are `value i j k l`: all positive for (ij|kl), `k = l = 0` for h_ij, all
//! zero for the core energy. Lines with only `i` set (orbital energies) are
//! skipped.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use pairvqe_core::integrals::{Eri, OrbitalSymmetry};
use pairvqe_core::linalg::Matrix;
use pairvqe_core::IntegralSet;

use crate::error::{io_err, Error, Result};

pub fn read_fcidump(path: impl AsRef<Path>) -> Result<IntegralSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_fcidump(&text, path)
}

fn header_values(header: &str) -> HashMap<String, Vec<String>> {
    let mut out: HashMap<String, Vec<String>> = HashMap::new();
    let mut key: Option<String> = None;
    let body = header.replacen("&FCI", "", 1).replacen("&fci", "", 1);
    for tok in body.split([',', '\n', '\r']) {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        if let Some((k, v)) = tok.split_once('=') {
            let k = k.trim().to_ascii_uppercase();
            let entry = out.entry(k.clone()).or_default();
            let v = v.trim();
            if !v.is_empty() {
                entry.extend(v.split_whitespace().map(String::from));
            }
            key = Some(k);
        } else if let Some(k) = &key {
            out.entry(k.clone())
                .or_default()
                .extend(tok.split_whitespace().map(String::from));
        }
    }
    out
}

/// Parses FCIDUMP text; `path` is only used in error messages.
pub fn parse_fcidump(text: &str, path: &Path) -> Result<IntegralSet> {
    let err = |line: usize, message: String| Error::Parse {
        path: PathBuf::from(path),
        line,
        message,
    };
    let lines: Vec<&str> = text.lines().collect();
    let end = lines
        .iter()
        .position(|l| {
            let t = l.trim();
            t.eq_ignore_ascii_case("&END") || t == "/" || t.ends_with("&END") || t.ends_with("/")
        })
        .ok_or_else(|| {
            err(
                lines.len(),
                "header terminator (&END or /) not found".into(),
            )
        })?;
    let mut header = lines[..end].join("\n");
    let last = lines[end].trim();
    let last = last
        .trim_end_matches("&END")
        .trim_end_matches("&end")
        .trim_end_matches('/');
    header.push('\n');
    header.push_str(last);
    if !header.to_ascii_uppercase().contains("&FCI") {
        return Err(err(1, "missing &FCI namelist".into()));
    }
    let values = header_values(&header);
    let int = |key: &str, default: Option<i64>| -> Result<i64> {
        match values.get(key).and_then(|v| v.first()) {
            Some(v) => v
                .parse::<i64>()
                .map_err(|_| err(1, format!("{key} = {v:?} is not an integer"))),
            None => default.ok_or_else(|| err(1, format!("header lacks {key}"))),
        }
    };
    let norb = int("NORB", None)?;
    let nelec = int("NELEC", None)?;
    let ms2 = int("MS2", Some(0))?;
    if norb <= 0 || nelec < 0 {
        return Err(err(1, format!("NORB = {norb}, NELEC = {nelec}")));
    }
    let norb = norb as usize;
    let symmetry = match values.get("ORBSYM") {
        Some(list) if !list.is_empty() => {
            let orbsym = list
                .iter()
                .map(|v| v.parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| err(1, "ORBSYM entries must be integers".into()))?;
            if orbsym.len() != norb {
                return Err(err(
                    1,
                    format!("ORBSYM lists {} orbitals, NORB is {norb}", orbsym.len()),
                ));
            }
            Some(OrbitalSymmetry {
                orbsym,
                isym: int("ISYM", Some(1))?,
            })
        }
        _ => None,
    };

    let mut h = Matrix::zeros(norb, norb);
    let mut eri = Eri::zeros(norb);
    let mut e_core = 0.0;
    for (offset, raw) in lines[end + 1..].iter().enumerate() {
        let lineno = end + 2 + offset;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(lineno, format!("expected `value i j k l`, got {t:?}")));
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "e")
            .parse()
            .map_err(|_| err(lineno, format!("bad value {:?}", fields[0])))?;
        if !value.is_finite() {
            return Err(err(lineno, "non-finite integral".into()));
        }
        let mut idx = [0usize; 4];
        for (slot, f) in idx.iter_mut().zip(&fields[1..]) {
            let v: i64 = f
                .parse()
                .map_err(|_| err(lineno, format!("bad index {f:?}")))?;
            if v < 0 || v as usize > norb {
                return Err(err(lineno, format!("index {v} outside 0..={norb}")));
            }
            *slot = v as usize;
        }
        match idx {
            [0, 0, 0, 0] => e_core = value,
            [i, j, 0, 0] if i > 0 && j > 0 => {
                h[(i - 1, j - 1)] = value;
                h[(j - 1, i - 1)] = value;
            }
            [_, 0, 0, 0] => {}
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                eri.set(i - 1, j - 1, k - 1, l - 1, value)
            }
            _ => return Err(err(lineno, format!("unsupported index pattern {idx:?}"))),
        }
    }
    let set = IntegralSet::new(nelec as usize, ms2 as i32, e_core, h, eri)
        .map_err(|e| err(1, e.to_string()))?;
    Ok(set.with_symmetry(symmetry))
}

/// Serializes one canonical entry per symmetry class; `&END` terminator.
pub fn format_fcidump(s: &IntegralSet) -> String {
    let n = s.norb();
    let mut out = String::new();
    let _ = writeln!(out, " &FCI NORB={n},NELEC={},MS2={},", s.nelec(), s.ms2());
    let (orbsym, isym) = match s.symmetry() {
        Some(sym) => (sym.orbsym.clone(), sym.isym),
        None => (vec![1; n], 1),
    };
    let list: Vec<String> = orbsym.iter().map(|o| o.to_string()).collect();
    let _ = writeln!(out, "  ORBSYM={},", list.join(","));
    let _ = writeln!(out, "  ISYM={isym},");
    out.push_str(" &END\n");
    for (p, q, r, t, v) in s.eri().canonical() {
        if v != 0.0 {
            let _ = writeln!(
                out,
                "{v:24.16e} {:4} {:4} {:4} {:4}",
                p + 1,
                q + 1,
                r + 1,
                t + 1
            );
        }
    }
    for p in 0..n {
        for q in 0..=p {
            let v = s.h()[(p, q)];
            if v != 0.0 {
                let _ = writeln!(out, "{v:24.16e} {:4} {:4}    0    0", p + 1, q + 1);
            }
        }
    }
    let _ = writeln!(out, "{:24.16e}    0    0    0    0", s.e_core());
    out
}

pub fn write_fcidump(s: &IntegralSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_fcidump(s)).map_err(io_err(path))
}
