//! CSV serialization for simulated paths and coefficient tables, plus the
//! atomic-write primitive shared by every file output.
//!
//! Layout: a `# format_version: N` comment line, a header row, then data.
//! All floats are written in shortest round-trip form (`f64`'s `Display`),
//! so reading a value back reproduces the exact bits. Writes go through a
//! temporary file in the destination directory followed by a rename, so a
//! crash never leaves a truncated file at the target path.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use archinf_core::coeffs::CoeffSequence;

use crate::report::FORMAT_VERSION;

/// Write `contents` to `path` atomically (temp file + rename in the target
/// directory). Creates parent directories as needed.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::env::current_dir().context("resolving current directory")?,
    };
    fs::create_dir_all(&dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("renaming into place at {}", path.display()))?;
    Ok(())
}

/// Render a simulated path as CSV with columns `n,sigma2,x` (`n` is the
/// 0-based post-burn-in step index).
pub fn path_to_csv(sigma2: &[f64], x: &[f64]) -> String {
    debug_assert_eq!(sigma2.len(), x.len());
    let mut out = String::with_capacity(32 * sigma2.len() + 64);
    out.push_str(&format!("# format_version: {FORMAT_VERSION}\n"));
    out.push_str("n,sigma2,x\n");
    for (i, (s, v)) in sigma2.iter().zip(x.iter()).enumerate() {
        out.push_str(&format!("{i},{s},{v}\n"));
    }
    out
}

/// Render the first `j` coefficients as CSV with columns `j,a_j`.
pub fn coeffs_to_csv(seq: &CoeffSequence, j: usize) -> String {
    let mut out = String::with_capacity(24 * j + 64);
    out.push_str(&format!("# format_version: {FORMAT_VERSION}\n"));
    out.push_str("j,a_j\n");
    for jj in 1..=j {
        out.push_str(&format!("{jj},{}\n", seq.a(jj)));
    }
    out
}

/// Parse a path CSV produced by [`path_to_csv`]: returns `(n, sigma2, x)`
/// triples. Comment lines (`#`) and the header are skipped.
pub fn parse_path_csv(text: &str) -> Result<Vec<(usize, f64, f64)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("n,") {
            continue;
        }
        let mut fields = line.split(',');
        let parse_err = || anyhow::anyhow!("malformed CSV line {}: {line:?}", lineno + 1);
        let n = fields.next().ok_or_else(parse_err)?.parse::<usize>()?;
        let s = fields.next().ok_or_else(parse_err)?.parse::<f64>()?;
        let x = fields.next().ok_or_else(parse_err)?.parse::<f64>()?;
        if fields.next().is_some() {
            return Err(parse_err());
        }
        out.push((n, s, x));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_exact_bits() {
        let sigma2 = vec![1.0, 1.0 + f64::EPSILON, 0.1 + 0.2];
        let x = vec![-0.3333333333333333, 1e-300, 12345.678901234567];
        let csv = path_to_csv(&sigma2, &x);
        let rows = parse_path_csv(&csv).unwrap();
        assert_eq!(rows.len(), 3);
        for (i, (n, s, v)) in rows.iter().enumerate() {
            assert_eq!(*n, i);
            assert_eq!(s.to_bits(), sigma2[i].to_bits());
            assert_eq!(v.to_bits(), x[i].to_bits());
        }
    }

    #[test]
    fn csv_carries_version_and_header() {
        let csv = path_to_csv(&[1.0], &[0.5]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# format_version: 1"));
        assert_eq!(lines.next(), Some("n,sigma2,x"));
        assert_eq!(lines.next(), Some("0,1,0.5"));
    }

    #[test]
    fn atomic_write_replaces_existing_content() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out.csv");
        atomic_write(&target, "first").unwrap();
        atomic_write(&target, "second").unwrap();
        assert_eq!(fs::read_to_string(&target).unwrap(), "second");
        // no stray temporaries left behind
        let residue: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(residue, vec![std::ffi::OsString::from("out.csv")]);
    }

    #[test]
    fn coeffs_csv_layout() {
        let seq = CoeffSequence::explicit_list(vec![0.25, 0.125]).unwrap();
        let csv = coeffs_to_csv(&seq, 2);
        assert_eq!(csv, "# format_version: 1\nj,a_j\n1,0.25\n2,0.125\n");
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(parse_path_csv("0,1.0").is_err());
        assert!(parse_path_csv("0,1.0,2.0,3.0").is_err());
        assert!(parse_path_csv("a,b,c").is_err());
    }
}
