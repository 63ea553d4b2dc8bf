//! Names of the catalogued curves and their text form.
//!
//! Text grammar: `Q`, `F`, `Gamma`, `E<i>`, `E<i>'`, `E<i>''`, `C`, `Cq`,
//! `CqAlt`, `B`, each optionally followed by a bracketed index list. For `C`,
//! `Cq`, `CqAlt` and `B` the list names the fibers whose `E` is *not*
//! subtracted (defaults `[1]`, `[1,2]`, `[1,2]`, `[1,2,3,4]`); for `E<i>''` it
//! names the four fibers of the underlying `B`.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveKind {
    Gamma,
    Q,
    F,
    C,
    Cq,
    CqAlt,
    B,
    E,
    EPrime,
    EDoublePrime,
}

impl CurveKind {
    pub fn label(self) -> &'static str {
        match self {
            CurveKind::Q => "Q",
            CurveKind::F => "F",
            CurveKind::Gamma => "Gamma",
            CurveKind::C => "C",
            CurveKind::Cq => "Cq",
            CurveKind::CqAlt => "CqAlt",
            CurveKind::B => "B",
            CurveKind::E => "E",
            CurveKind::EPrime => "EPrime",
            CurveKind::EDoublePrime => "EDoublePrime",
        }
    }
}

/// A catalogued curve with its fiber indices (1-based).
///
/// `params` is `[i]` for `E`/`EPrime`, `[i, b1, b2, b3, b4]` for
/// `EDoublePrime`, the kept fibers for `C`/`Cq`/`CqAlt`/`B`, and empty otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveRef {
    pub kind: CurveKind,
    pub params: Vec<usize>,
}

impl CurveRef {
    pub fn new(kind: CurveKind, params: Vec<usize>) -> Self {
        CurveRef { kind, params }
    }

    pub fn q() -> Self {
        Self::new(CurveKind::Q, vec![])
    }

    pub fn f() -> Self {
        Self::new(CurveKind::F, vec![])
    }

    pub fn gamma() -> Self {
        Self::new(CurveKind::Gamma, vec![])
    }

    pub fn e(i: usize) -> Self {
        Self::new(CurveKind::E, vec![i])
    }

    pub fn e_prime(i: usize) -> Self {
        Self::new(CurveKind::EPrime, vec![i])
    }

    pub fn e_double_prime(i: usize, b_fibers: [usize; 4]) -> Self {
        let mut params = vec![i];
        params.extend(sorted(b_fibers.to_vec()));
        Self::new(CurveKind::EDoublePrime, params)
    }

    pub fn c(keep: usize) -> Self {
        Self::new(CurveKind::C, vec![keep])
    }

    pub fn cq(keep: [usize; 2]) -> Self {
        Self::new(CurveKind::Cq, sorted(keep.to_vec()))
    }

    pub fn cq_alt(keep: [usize; 2]) -> Self {
        Self::new(CurveKind::CqAlt, sorted(keep.to_vec()))
    }

    pub fn b(keep: [usize; 4]) -> Self {
        Self::new(CurveKind::B, sorted(keep.to_vec()))
    }

    /// Fiber index of an `E`, `EPrime` or `EDoublePrime` curve.
    pub fn fiber(&self) -> Option<usize> {
        match self.kind {
            CurveKind::E | CurveKind::EPrime | CurveKind::EDoublePrime => {
                self.params.first().copied()
            }
            _ => None,
        }
    }

    /// Fills in the default index list when none was given.
    pub fn with_defaults(mut self) -> Self {
        if self.params.is_empty() {
            self.params = match self.kind {
                CurveKind::C => vec![1],
                CurveKind::Cq | CurveKind::CqAlt => vec![1, 2],
                CurveKind::B => vec![1, 2, 3, 4],
                _ => vec![],
            };
        } else if self.kind == CurveKind::EDoublePrime && self.params.len() == 1 {
            self.params.extend([1, 2, 3, 4]);
        }
        self
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn join(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for CurveRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CurveKind::Q | CurveKind::F | CurveKind::Gamma => write!(f, "{}", self.kind.label()),
            CurveKind::E => write!(f, "E{}", self.params[0]),
            CurveKind::EPrime => write!(f, "E{}'", self.params[0]),
            CurveKind::EDoublePrime => {
                write!(f, "E{}''[{}]", self.params[0], join(&self.params[1..]))
            }
            CurveKind::C | CurveKind::Cq | CurveKind::CqAlt | CurveKind::B => {
                write!(f, "{}[{}]", self.kind.label(), join(&self.params))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseCurveError(pub String);

impl fmt::Display for ParseCurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown curve name {:?}", self.0)
    }
}

impl std::error::Error for ParseCurveError {}

impl FromStr for CurveRef {
    type Err = ParseCurveError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseCurveError(text.to_string());
        let text = text.trim();
        let (head, list) = match text.split_once('[') {
            Some((h, rest)) => {
                let inner = rest.strip_suffix(']').ok_or_else(err)?;
                let idx = inner
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| err()))
                    .collect::<Result<Vec<_>, _>>()?;
                (h, Some(idx))
            }
            None => (text, None),
        };
        let simple = |kind: CurveKind| -> Result<CurveRef, ParseCurveError> {
            Ok(CurveRef::new(kind, sorted(list.clone().unwrap_or_default())).with_defaults())
        };
        match head {
            "Q" | "F" | "Gamma" if list.is_some() => Err(err()),
            "Q" => simple(CurveKind::Q),
            "F" => simple(CurveKind::F),
            "Gamma" => simple(CurveKind::Gamma),
            "C" => simple(CurveKind::C),
            "Cq" => simple(CurveKind::Cq),
            "CqAlt" => simple(CurveKind::CqAlt),
            "B" => simple(CurveKind::B),
            _ => {
                let body = head.strip_prefix('E').ok_or_else(err)?;
                let digits_end = body
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(body.len());
                let index: usize = body[..digits_end].parse().map_err(|_| err())?;
                let (kind, allow_list) = match &body[digits_end..] {
                    "" => (CurveKind::E, false),
                    "'" => (CurveKind::EPrime, false),
                    "''" => (CurveKind::EDoublePrime, true),
                    _ => return Err(err()),
                };
                if list.is_some() && !allow_list {
                    return Err(err());
                }
                let mut params = vec![index];
                params.extend(sorted(list.unwrap_or_default()));
                Ok(CurveRef::new(kind, params).with_defaults())
            }
        }
    }
}

impl Serialize for CurveRef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CurveRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let cases = [
            ("Q", "Q"),
            ("Gamma", "Gamma"),
            ("E3", "E3"),
            ("E12'", "E12'"),
            ("E2''", "E2''[1,2,3,4]"),
            ("E5''[8,7,6,5]", "E5''[5,6,7,8]"),
            ("C", "C[1]"),
            ("Cq[4,2]", "Cq[2,4]"),
            ("CqAlt", "CqAlt[1,2]"),
            ("B", "B[1,2,3,4]"),
        ];
        for (input, shown) in cases {
            let c: CurveRef = input.parse().unwrap();
            assert_eq!(c.to_string(), shown);
            assert_eq!(shown.parse::<CurveRef>().unwrap(), c);
        }
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "E", "E1'''", "Q[1]", "X", "E1'[2]", "C[1", "Ex"] {
            assert!(bad.parse::<CurveRef>().is_err(), "{bad}");
        }
    }
}
