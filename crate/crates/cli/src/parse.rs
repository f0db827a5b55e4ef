//! The IFS description format.
//!
//! ```text
//! # four maps with ratio 1/5
//! name four-map example
//! map r=1/5 b=0
//! map r=1/5 b=4/25
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `r=` and `b=` may
//! come in either order. Maps are stored sorted by the left endpoint of
//! their image of the hull.

use ifs_codings::exact::{AffineMap, Rational};
use ifs_codings::ifs::{order_by_left_endpoint, report_for_invalid_maps, validate_class_e, ClassEReport};
use ifs_codings::Ifs;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: ratio {ratio} is not in (0, 1)")]
    Domain { line: usize, ratio: Rational },
    #[error("line {line}: duplicate of the map on line {first}")]
    Duplicate { line: usize, first: usize },
    #[error("no `map` lines")]
    NoMaps,
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Domain { line, .. } | ParseError::Duplicate { line, .. } => {
                Some(*line)
            }
            ParseError::NoMaps => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IfsFile {
    pub name: Option<String>,
    /// Sorted by left endpoint.
    pub maps: Vec<AffineMap>,
    /// Source line of each sorted map.
    pub lines: Vec<usize>,
}

impl IfsFile {
    /// The system and its class report. Map lists that cannot form a system
    /// (a single map, say) still get a report, naming the failed condition.
    pub fn system(&self) -> (Option<Ifs>, ClassEReport) {
        match Ifs::new(self.maps.clone()) {
            Ok(ifs) => {
                let report = validate_class_e(&ifs);
                (Some(ifs), report)
            }
            Err(e) => (None, report_for_invalid_maps(&self.maps, &e)),
        }
    }
}

pub fn parse_ifs_file(text: &str) -> Result<IfsFile, ParseError> {
    let mut name = None;
    let mut maps: Vec<(AffineMap, usize)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let syntax = |message: String| ParseError::Syntax { line, message };
        let (keyword, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        match keyword {
            "name" => {
                if name.is_some() {
                    return Err(syntax("second `name` line".into()));
                }
                let rest = rest.trim();
                if rest.is_empty() {
                    return Err(syntax("`name` needs a value".into()));
                }
                name = Some(rest.to_string());
            }
            "map" => {
                let (mut r, mut b) = (None, None);
                for field in rest.split_whitespace() {
                    let (key, value) =
                        field.split_once('=').ok_or_else(|| syntax(format!("expected key=value, found `{field}`")))?;
                    let slot = match key {
                        "r" => &mut r,
                        "b" => &mut b,
                        _ => return Err(syntax(format!("unknown key `{key}`"))),
                    };
                    if slot.is_some() {
                        return Err(syntax(format!("`{key}` given twice")));
                    }
                    let q: Rational = value.parse().map_err(|e| syntax(format!("{e}")))?;
                    *slot = Some(q);
                }
                let r = r.ok_or_else(|| syntax("missing r=<ratio>".into()))?;
                let b = b.ok_or_else(|| syntax("missing b=<offset>".into()))?;
                let map = AffineMap::new(r.clone(), b).map_err(|_| ParseError::Domain { line, ratio: r })?;
                if let Some((_, first)) = maps.iter().find(|(m, _)| *m == map) {
                    return Err(ParseError::Duplicate { line, first: *first });
                }
                maps.push((map, line));
            }
            _ => return Err(syntax(format!("unknown directive `{keyword}`"))),
        }
    }
    if maps.is_empty() {
        return Err(ParseError::NoMaps);
    }
    let plain: Vec<AffineMap> = maps.iter().map(|(m, _)| m.clone()).collect();
    let (sorted, perm) = order_by_left_endpoint(&plain);
    Ok(IfsFile { name, maps: sorted, lines: perm.iter().map(|&k| maps[k].1).collect() })
}

/// A point given either as `w=<digits>;p=<digits>` or as a plain rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointArg {
    Symbolic(String),
    Value(Rational),
}

impl std::str::FromStr for PointArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.contains('=') {
            Ok(PointArg::Symbolic(s.to_string()))
        } else {
            s.parse().map(PointArg::Value).map_err(|e| format!("{e}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn four_map_file() {
        let f = parse_ifs_file(
            "# unsorted on purpose\nname four maps\nmap r=1/5 b=16/25\nmap b=0 r=1/5\n\nmap r=1/5 b=4/5\nmap r=1/5 b=4/25\n",
        )
        .unwrap();
        assert_eq!(f.name.as_deref(), Some("four maps"));
        let offsets: Vec<Rational> = f.maps.iter().map(|m| m.offset().clone()).collect();
        assert_eq!(offsets, vec![q("0"), q("4/25"), q("16/25"), q("4/5")]);
        assert_eq!(f.lines, vec![4, 7, 3, 6]);
        let (ifs, report) = f.system();
        assert!(ifs.is_some());
        assert!(report.is_member());
    }

    #[test]
    fn single_map_parses_but_fails_validation() {
        let f = parse_ifs_file("map r=1/5 b=0").unwrap();
        let (ifs, report) = f.system();
        assert!(ifs.is_none());
        assert_eq!(report.violation().unwrap().condition, ifs_codings::ifs::Condition::C);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_ifs_file("map r=5/5 b=0"), Err(ParseError::Domain { line: 1, ratio: q("1") }));
        assert_eq!(parse_ifs_file("#\nmap r=0 b=0").unwrap_err().line(), Some(2));
        assert_eq!(parse_ifs_file("map r=-1/2 b=0").unwrap_err().line(), Some(1));
        assert_eq!(
            parse_ifs_file("map r=1/3 b=0\nmap r=1/3 b=2/3\nmap r=1/3 b=0"),
            Err(ParseError::Duplicate { line: 3, first: 1 })
        );
        assert!(matches!(parse_ifs_file("map r=1/3"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse_ifs_file("map r=1/3 b=x"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse_ifs_file("map r=1/3 b=0 r=1/2"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse_ifs_file("\n\nmaps r=1/3 b=0"), Err(ParseError::Syntax { line: 3, .. })));
        assert!(matches!(parse_ifs_file("map r=1/3 b=1/0"), Err(ParseError::Syntax { line: 1, .. })));
        assert_eq!(parse_ifs_file("# nothing\n"), Err(ParseError::NoMaps));
    }

    #[test]
    fn point_arguments() {
        assert_eq!("w=1;p=4".parse::<PointArg>(), Ok(PointArg::Symbolic("w=1;p=4".into())));
        assert_eq!("1/5".parse::<PointArg>(), Ok(PointArg::Value(q("1/5"))));
        assert!("x".parse::<PointArg>().is_err());
    }
}
