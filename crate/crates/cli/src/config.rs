//! `key = value` configuration files.
//!
//! Each key names a long flag of the chosen subcommand (`M = 1e6`,
//! `t-policy = fixed:3`, `require-hit = true`). Entries are spliced into the
//! argument list right after the subcommand unless the same flag was given on
//! the command line, so explicit flags always win. Blank lines, `#` comments
//! and `[section]` headers are ignored.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

/// Flags that take no value; `true` enables them and `false` omits them.
const SWITCHES: &[&str] = &["require-hit"];

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim().trim_matches('"').to_owned();
        if key.is_empty() {
            return Err(format!("line {}: empty key", n + 1));
        }
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 = value,
            None => out.push((key, value)),
        }
    }
    Ok(out)
}

fn given_on_command_line(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let with_value = format!("--{key}=");
    args.iter().filter_map(|a| a.to_str()).any(|a| a == flag || a.starts_with(&with_value))
}

/// Removes `--config PATH` from `args` and splices in the file's entries.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        match arg.to_str() {
            Some("--config") => path = Some(iter.next().ok_or("--config needs a file path")?),
            Some(s) if s.starts_with("--config=") => path = Some(OsString::from(&s["--config=".len()..])),
            _ => rest.push(arg),
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config file {}: {e}", Path::new(&path).display()))?;
    let entries = parse(&text)?;
    let Some(sub) = rest.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')) else {
        return Ok(rest);
    };
    let insert_at = sub + 2;
    let mut extra = Vec::new();
    for (key, value) in entries {
        if given_on_command_line(&rest, &key) {
            continue;
        }
        if SWITCHES.contains(&key.as_str()) {
            match value.as_str() {
                "true" | "1" | "yes" => extra.push(OsString::from(format!("--{key}"))),
                "false" | "0" | "no" => {}
                other => return Err(format!("{key} expects true or false, got {other:?}")),
            }
        } else {
            extra.push(OsString::from(format!("--{key}={value}")));
        }
    }
    rest.splice(insert_at..insert_at, extra);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_entries() {
        let text = "# run\n[search]\nM = 1e6\nt_policy = fixed:3 # inline\nc=\"1\"\nM = 2000\n\n";
        assert_eq!(
            parse(text).unwrap(),
            vec![("M".into(), "2000".into()), ("t-policy".into(), "fixed:3".into()), ("c".into(), "1".into())]
        );
        assert!(parse("novalue\n").is_err());
        assert!(parse(" = 3\n").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "M = 1e6\nc = 1\nrequire-hit = true\nthreads = 2\n").unwrap();
        let args = os(&["erdos728", "search", "--c", "0.9", "--config", path.to_str().unwrap(), "--threads=8"]);
        let expanded = expand_args(args).unwrap();
        assert_eq!(expanded, os(&["erdos728", "search", "--M=1e6", "--require-hit", "--c", "0.9", "--threads=8"]));
    }

    #[test]
    fn no_config_is_identity() {
        let args = os(&["erdos728", "verify", "--m", "4"]);
        assert_eq!(expand_args(args.clone()).unwrap(), args);
        assert!(expand_args(os(&["erdos728", "verify", "--config"])).is_err());
    }
}
