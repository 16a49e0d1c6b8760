//! Shared I/O helpers with the exit-code contract baked in: unreadable or
//! malformed inputs are invalid-input errors (exit 2), output failures are
//! I/O errors (exit 3).

use std::path::{Path, PathBuf};

use pslab_core::{Error, Result};

pub fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read input `{}`: {e}", path.display())))
}

pub fn ensure_out_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })
}

pub fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(path)
}

/// Ladder syntax: `start:stop:step` (arithmetic, inclusive), `start:stop`
/// (doubling), or a single size.
pub fn parse_ladder(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| -> Result<usize> {
        t.parse::<usize>()
            .map_err(|_| Error::invalid(format!("bad ladder number `{t}`")))
    };
    let ladder = match parts.as_slice() {
        [one] => vec![num(one)?],
        [start, stop] => {
            let (mut n, stop) = (num(start)?, num(stop)?);
            if n == 0 || stop < n {
                return Err(Error::invalid("ladder needs 1 <= start <= stop"));
            }
            let mut v = Vec::new();
            while n <= stop {
                v.push(n);
                n *= 2;
            }
            v
        }
        [start, stop, step] => {
            let (mut n, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if n == 0 || step == 0 || stop < n {
                return Err(Error::invalid(
                    "ladder needs 1 <= start <= stop and step >= 1",
                ));
            }
            let mut v = Vec::new();
            while n <= stop {
                v.push(n);
                n += step;
            }
            v
        }
        _ => return Err(Error::invalid(format!("bad ladder syntax `{s}`"))),
    };
    if ladder.is_empty() {
        return Err(Error::invalid("ladder is empty"));
    }
    Ok(ladder)
}

/// Comma-separated positive levels.
pub fn parse_levels(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let eps: f64 = part
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad level `{part}`")))?;
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::invalid(format!(
                "level must be positive, got `{part}`"
            )));
        }
        out.push(eps);
    }
    if out.is_empty() {
        return Err(Error::invalid("no levels given"));
    }
    Ok(out)
}
