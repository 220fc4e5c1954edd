//! The group file format.
//!
//! ```text
//! # comment
//! 5
//! (0 1 2 3 4)
//! [1,0,2,3,4]
//! ```
//!
//! The first non-comment line is the degree; every further nonempty line is
//! one generator in cycle form or image form, 0-based.

use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Text before any `#`, with 1-based character columns.
fn content(line: &str) -> Vec<(usize, char)> {
    line.chars().take_while(|&c| c != '#').enumerate().map(|(i, c)| (i + 1, c)).collect()
}

fn number(chars: &[(usize, char)], pos: &mut usize) -> Option<(usize, u64)> {
    let start = *pos;
    let mut v: u64 = 0;
    while let Some(&(_, c)) = chars.get(*pos) {
        let Some(d) = c.to_digit(10) else { break };
        v = v.checked_mul(10)?.checked_add(d as u64)?;
        *pos += 1;
    }
    (*pos > start).then(|| (chars[start].0, v))
}

fn skip_spaces(chars: &[(usize, char)], pos: &mut usize) {
    while chars.get(*pos).is_some_and(|&(_, c)| c.is_whitespace()) {
        *pos += 1;
    }
}

/// Parses one generator line of a group of degree `n`.
pub fn parse_permutation(text: &str, n: usize, line: usize) -> Result<Permutation> {
    let chars = content(text);
    let mut pos = 0;
    skip_spaces(&chars, &mut pos);
    let end_col = chars.last().map_or(1, |&(c, _)| c);
    let check = |col: usize, v: u64| -> Result<usize> {
        if v as usize >= n || v > usize::MAX as u64 {
            return Err(err(line, col, format!("point {v} is outside 0..{n}")));
        }
        Ok(v as usize)
    };
    match chars.get(pos).map(|&(_, c)| c) {
        Some('[') => {
            pos += 1;
            let mut images = Vec::new();
            loop {
                skip_spaces(&chars, &mut pos);
                if images.is_empty() && chars.get(pos).is_some_and(|&(_, c)| c == ']') {
                    pos += 1;
                    break;
                }
                let (col, v) = number(&chars, &mut pos)
                    .ok_or_else(|| err(line, chars.get(pos).map_or(end_col, |p| p.0), "expected a point"))?;
                images.push(check(col, v)?);
                skip_spaces(&chars, &mut pos);
                match chars.get(pos) {
                    Some(&(_, ',')) => pos += 1,
                    Some(&(_, ']')) => {
                        pos += 1;
                        break;
                    }
                    Some(&(col, c)) => return Err(err(line, col, format!("unexpected '{c}' in image list"))),
                    None => return Err(err(line, end_col, "expected ']'")),
                }
            }
            skip_spaces(&chars, &mut pos);
            if let Some(&(col, _)) = chars.get(pos) {
                return Err(err(line, col, "trailing characters after image list"));
            }
            if images.len() != n {
                return Err(err(line, 1, format!("image list has length {}, expected {n}", images.len())));
            }
            Permutation::from_images(images).map_err(|e| err(line, 1, e.to_string()))
        }
        Some('(') => {
            let mut cycles: Vec<Vec<usize>> = Vec::new();
            while pos < chars.len() {
                let (col, c) = chars[pos];
                if c != '(' {
                    return Err(err(line, col, format!("expected '(', found '{c}'")));
                }
                pos += 1;
                let mut cycle = Vec::new();
                loop {
                    skip_spaces(&chars, &mut pos);
                    match chars.get(pos) {
                        Some(&(_, ')')) => {
                            pos += 1;
                            break;
                        }
                        Some(&(_, ',')) if !cycle.is_empty() => pos += 1,
                        Some(&(col, c)) if !c.is_ascii_digit() => {
                            return Err(err(line, col, format!("unexpected '{c}' in cycle")))
                        }
                        Some(_) => {
                            let (col, v) = number(&chars, &mut pos).ok_or_else(|| err(line, col, "bad number"))?;
                            cycle.push(check(col, v)?);
                        }
                        None => return Err(err(line, end_col, "unterminated cycle, expected ')'")),
                    }
                }
                cycles.push(cycle);
                skip_spaces(&chars, &mut pos);
            }
            Permutation::from_cycles(n, &cycles).map_err(|e| err(line, 1, e.to_string()))
        }
        Some(_) => Err(err(line, chars[pos].0, "expected '(' or '['")),
        None => Ok(Permutation::identity(n)),
    }
}

/// Degree and generators of a group file.
pub fn parse_group(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let chars = content(raw);
        if chars.iter().all(|&(_, c)| c.is_whitespace()) {
            continue;
        }
        match degree {
            None => {
                let mut pos = 0;
                skip_spaces(&chars, &mut pos);
                let (col, n) =
                    number(&chars, &mut pos).ok_or_else(|| err(line, chars[pos].0, "expected the degree"))?;
                skip_spaces(&chars, &mut pos);
                if let Some(&(c, _)) = chars.get(pos) {
                    return Err(err(line, c, "trailing characters after the degree"));
                }
                if n == 0 {
                    return Err(err(line, col, "degree must be positive"));
                }
                degree = Some(n as usize);
            }
            Some(n) => gens.push(parse_permutation(raw, n, line)?),
        }
    }
    let n = degree.ok_or_else(|| err(1, 1, "missing degree line"))?;
    Ok((n, gens))
}

/// Parses a group file into a group.
pub fn read_group(text: &str) -> Result<PermutationGroup> {
    let (n, gens) = parse_group(text)?;
    PermutationGroup::new(n, gens)
}

/// Degree line followed by one generator per line in cycle form.
pub fn format_group(degree: usize, gens: &[Permutation]) -> String {
    let mut out = format!("{degree}\n");
    for g in gens {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let (n, g) = parse_group("5\n(0 1 2 3 4)\n(0 1)\n").unwrap();
        assert_eq!((n, g.len()), (5, 2));
        let (n, g) = parse_group("4\n[1,0,3,2]\n").unwrap();
        assert_eq!((n, g[0].to_vec()), (4, vec![1, 0, 3, 2]));
        let (_, g) = parse_group("# header\n3 # degree\n\n()\n(0 1)(2)  # a swap\n").unwrap();
        assert!(g[0].is_identity());
        assert_eq!(g[1].to_vec(), vec![1, 0, 2]);
    }

    #[test]
    fn diagnostics() {
        let at = |t: &str| match parse_group(t) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("{other:?}"),
        };
        assert_eq!(at("2\n(0 1"), (2, 4));
        assert_eq!(at("3\n(0 5)"), (2, 4));
        assert_eq!(at("3\n[0,1]"), (2, 1));
        assert_eq!(at("3\n(0 x)"), (2, 4));
        assert_eq!(at("x\n"), (1, 1));
        assert_eq!(at("3\n[0,1,2] z"), (2, 9));
        assert!(matches!(parse_permutation("(0 1)(1 2)", 3, 1), Err(Error::Parse { .. })));
    }

    #[test]
    fn round_trip() {
        let g = vec![
            Permutation::from_cycles(6, &[vec![0, 3, 5], vec![1, 2]]).unwrap(),
            Permutation::identity(6),
        ];
        let (n, back) = parse_group(&format_group(6, &g)).unwrap();
        assert_eq!((n, back), (6, g));
    }
}
