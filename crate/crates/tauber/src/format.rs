//! Plain-text instance files.
//!
//! Grammar, one directive per line (blank lines and `#` comments allowed):
//!
//! ```text
//! states N
//! s <id> g=<float> A=<k> B=<m>
//! t <s> <a> <b> -> <s'>
//! ```
//!
//! Every state id in `0..N` needs exactly one `s` line, and every action
//! triple `(s, a, b)` exactly one `t` line. Payoffs must lie in [0, 1].
//! The writer emits the instance name as a leading `# instance <name>`
//! comment, which the parser recognizes, so instances round-trip.

use crate::error::{Error, Result};
use crate::game::GameSpec;
use std::path::Path;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("cannot parse {what} from {tok:?}")))
}

/// Parses an instance file. See the module doc for the grammar.
pub fn parse_instance(text: &str) -> Result<GameSpec> {
    let mut name = String::new();
    let mut count: Option<usize> = None;
    let mut payoff: Vec<Option<f64>> = Vec::new();
    let mut max_actions: Vec<usize> = Vec::new();
    let mut min_actions: Vec<usize> = Vec::new();
    let mut next: Vec<Vec<Option<usize>>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("# instance ") {
            if name.is_empty() {
                name = rest.trim().to_string();
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "states" => {
                if count.is_some() {
                    return Err(parse_err(lineno, "duplicate states header"));
                }
                if toks.len() != 2 {
                    return Err(parse_err(lineno, "expected: states N"));
                }
                let n: usize = parse_num(toks[1], lineno, "state count")?;
                if n == 0 {
                    return Err(parse_err(lineno, "state count must be positive"));
                }
                count = Some(n);
                payoff = vec![None; n];
                max_actions = vec![0; n];
                min_actions = vec![0; n];
                next = vec![Vec::new(); n];
            }
            "s" => {
                let n = count.ok_or_else(|| parse_err(lineno, "states header must come first"))?;
                if toks.len() != 5 {
                    return Err(parse_err(lineno, "expected: s <id> g=<float> A=<k> B=<m>"));
                }
                let id: usize = parse_num(toks[1], lineno, "state id")?;
                if id >= n {
                    return Err(parse_err(lineno, format!("state id {id} out of range 0..{n}")));
                }
                if payoff[id].is_some() {
                    return Err(parse_err(lineno, format!("duplicate state line for {id}")));
                }
                let g_tok = toks[2]
                    .strip_prefix("g=")
                    .ok_or_else(|| parse_err(lineno, "third field must be g=<float>"))?;
                let a_tok = toks[3]
                    .strip_prefix("A=")
                    .ok_or_else(|| parse_err(lineno, "fourth field must be A=<k>"))?;
                let b_tok = toks[4]
                    .strip_prefix("B=")
                    .ok_or_else(|| parse_err(lineno, "fifth field must be B=<m>"))?;
                let g: f64 = parse_num(g_tok, lineno, "payoff")?;
                if !(0.0..=1.0).contains(&g) {
                    return Err(parse_err(lineno, format!("payoff {g} outside [0, 1]")));
                }
                let ka: usize = parse_num(a_tok, lineno, "max action count")?;
                let kb: usize = parse_num(b_tok, lineno, "min action count")?;
                if ka == 0 || kb == 0 {
                    return Err(parse_err(lineno, "action counts must be positive"));
                }
                payoff[id] = Some(g);
                max_actions[id] = ka;
                min_actions[id] = kb;
                next[id] = vec![None; ka * kb];
            }
            "t" => {
                let n = count.ok_or_else(|| parse_err(lineno, "states header must come first"))?;
                if toks.len() != 6 || toks[4] != "->" {
                    return Err(parse_err(lineno, "expected: t <s> <a> <b> -> <s'>"));
                }
                let s: usize = parse_num(toks[1], lineno, "source state")?;
                if s >= n {
                    return Err(parse_err(lineno, format!("state {s} out of range 0..{n}")));
                }
                if payoff[s].is_none() {
                    return Err(parse_err(lineno, format!("state {s} not declared yet")));
                }
                let a: usize = parse_num(toks[2], lineno, "max action")?;
                let b: usize = parse_num(toks[3], lineno, "min action")?;
                let target: usize = parse_num(toks[5], lineno, "target state")?;
                if a >= max_actions[s] || b >= min_actions[s] {
                    return Err(parse_err(
                        lineno,
                        format!("action pair ({a}, {b}) out of range at state {s}"),
                    ));
                }
                if target >= n {
                    return Err(parse_err(lineno, format!("target {target} out of range 0..{n}")));
                }
                let slot = &mut next[s][a * min_actions[s] + b];
                if slot.is_some() {
                    return Err(parse_err(
                        lineno,
                        format!("duplicate transition for ({s}, {a}, {b})"),
                    ));
                }
                *slot = Some(target);
            }
            other => {
                return Err(parse_err(lineno, format!("unknown directive {other:?}")));
            }
        }
    }

    let n = count.ok_or_else(|| parse_err(0, "missing states header"))?;
    let mut payoffs = Vec::with_capacity(n);
    for (id, g) in payoff.into_iter().enumerate() {
        payoffs.push(g.ok_or_else(|| parse_err(0, format!("state {id} never declared")))?);
    }
    let mut table = Vec::with_capacity(n);
    for (s, row) in next.into_iter().enumerate() {
        let mut full = Vec::with_capacity(row.len());
        for (i, slot) in row.into_iter().enumerate() {
            let (a, b) = (i / min_actions[s], i % min_actions[s]);
            full.push(slot.ok_or_else(|| {
                parse_err(0, format!("missing transition for ({s}, {a}, {b})"))
            })?);
        }
        table.push(full);
    }
    GameSpec::from_tables(&name, payoffs, max_actions, min_actions, table)
}

/// Renders a spec in the instance file format; deterministic line order.
pub fn write_instance(spec: &GameSpec) -> String {
    use crate::game::Side;
    use std::fmt::Write;

    let mut out = String::new();
    if !spec.name().is_empty() {
        writeln!(out, "# instance {}", spec.name()).unwrap();
    }
    writeln!(out, "states {}", spec.num_states()).unwrap();
    for s in 0..spec.num_states() {
        writeln!(
            out,
            "s {s} g={} A={} B={}",
            spec.payoff(s),
            spec.action_count(Side::Max, s),
            spec.action_count(Side::Min, s)
        )
        .unwrap();
    }
    for s in 0..spec.num_states() {
        for a in 0..spec.action_count(Side::Max, s) {
            for b in 0..spec.action_count(Side::Min, s) {
                let target = spec.step(s, a, b).expect("spec transitions are total");
                writeln!(out, "t {s} {a} {b} -> {target}").unwrap();
            }
        }
    }
    out
}

pub fn read_instance_file(path: &Path) -> Result<GameSpec> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn write_instance_file(spec: &GameSpec, path: &Path) -> Result<()> {
    Ok(std::fs::write(path, write_instance(spec))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "\
# instance toy
states 2
s 0 g=0 A=2 B=1
s 1 g=0.25 A=1 B=1
t 0 0 0 -> 1
t 0 1 0 -> 0
t 1 0 0 -> 0
";

    #[test]
    fn parses_a_small_instance() {
        let g = parse_instance(TOY).unwrap();
        assert_eq!(g.name(), "toy");
        assert_eq!(g.num_states(), 2);
        assert_eq!(g.payoff(1), 0.25);
        assert_eq!(g.step(0, 1, 0).unwrap(), 0);
    }

    #[test]
    fn round_trips_through_the_writer() {
        let g = parse_instance(TOY).unwrap();
        let text = write_instance(&g);
        let back = parse_instance(&text).unwrap();
        assert_eq!(g, back);
        // A second round trip is byte-identical.
        assert_eq!(text, write_instance(&back));
    }

    #[test]
    fn round_trips_through_a_file() {
        let g = parse_instance(TOY).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("toy.game");
        write_instance_file(&g, &path).unwrap();
        assert_eq!(read_instance_file(&path).unwrap(), g);
    }

    #[test]
    fn rejects_out_of_range_payoff() {
        let bad = TOY.replace("g=0.25", "g=1.25");
        let err = parse_instance(&bad).unwrap_err();
        assert!(err.to_string().contains("outside [0, 1]"), "{err}");
    }

    #[test]
    fn rejects_missing_transition() {
        let bad = TOY.replace("t 0 1 0 -> 0\n", "");
        let err = parse_instance(&bad).unwrap_err();
        assert!(err.to_string().contains("missing transition"), "{err}");
    }

    #[test]
    fn rejects_duplicate_transition() {
        let bad = format!("{TOY}t 1 0 0 -> 1\n");
        let err = parse_instance(&bad).unwrap_err();
        assert!(err.to_string().contains("duplicate transition"), "{err}");
    }

    #[test]
    fn rejects_unknown_directive() {
        let bad = format!("{TOY}q 1 2 3\n");
        assert!(parse_instance(&bad).is_err());
    }
}
