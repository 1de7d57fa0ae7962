//! Input/output plumbing: `-` for stdin/stdout, atomic file writes, tolerance
//! overrides from the environment.

use std::io::{Read, Write};
use std::path::Path;

use cdk_core::Tolerances;
use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

pub fn read_input(path: &str) -> CliResult<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
    } else {
        s = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    }
    Ok(s)
}

/// Parses JSON, reporting the path of the offending field on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let pointer = if path == "." { "<root>".to_string() } else { path };
        CliError::input(pointer, e.into_inner().to_string())
    })
}

/// Writes `contents` to `path` atomically, or to stdout for `None`/`-`.
pub fn write_output(path: Option<&str>, contents: &str) -> CliResult<()> {
    match path {
        None | Some("-") => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
        Some(p) => write_atomic(Path::new(p), contents),
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Default tolerances overridden by `CDK_TOLERANCE_GEOM`, `_CLASS`, `_ROOT`.
pub fn tolerances_from_env() -> CliResult<Tolerances> {
    tolerances_from(|k| std::env::var(k).ok())
}

pub fn tolerances_from(get: impl Fn(&str) -> Option<String>) -> CliResult<Tolerances> {
    let mut tol = Tolerances::DEFAULT;
    for (key, slot) in [
        ("CDK_TOLERANCE_GEOM", &mut tol.geom),
        ("CDK_TOLERANCE_CLASS", &mut tol.class),
        ("CDK_TOLERANCE_ROOT", &mut tol.root),
    ] {
        if let Some(v) = get(key) {
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::input(key, format!("`{v}` is not a number")))?;
            if !(x.is_finite() && x > 0.0) {
                return Err(CliError::input(key, format!("tolerance must be positive, got {x}")));
            }
            *slot = x;
        }
    }
    Ok(tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides() {
        let t = tolerances_from(|k| (k == "CDK_TOLERANCE_GEOM").then(|| "1e-6".to_string())).unwrap();
        assert_eq!(t.geom, 1e-6);
        assert_eq!(t.class, Tolerances::DEFAULT.class);
        let e = tolerances_from(|k| (k == "CDK_TOLERANCE_ROOT").then(|| "-1".to_string())).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn parse_errors_carry_a_pointer() {
        #[derive(serde::Deserialize, Debug)]
        #[allow(dead_code)]
        struct S {
            xs: Vec<f64>,
        }
        match parse_json::<S>(r#"{"xs": [1, "a"]}"#).unwrap_err() {
            CliError::Input { pointer, .. } => assert_eq!(pointer, "xs[1]"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
