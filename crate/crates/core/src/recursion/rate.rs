//! Total rate functions `ℕ → ℕ`, evaluated with saturating arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::RecursionError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RateFunction {
    Identity,
    /// `n ↦ factor·n + offset`
    Linear { factor: u64, offset: u64 },
    Square,
    /// `n ↦ 2ⁿ`
    Exp,
    /// `n ↦ 2^2^…^n` with `height` exponentials.
    ExpTower(u32),
    Constant(u64),
    /// Explicit values for `n < len`, then the last value.
    Table(Vec<u64>),
    /// Number of words of length `≤ ⌊(n−1)/2⌋` over `alphabet` letters.
    WordCount { alphabet: u64 },
    /// `n ↦ outer(inner(n))`
    Compose(Box<RateFunction>, Box<RateFunction>),
}

fn pow2(n: u64) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        1u64 << n
    }
}

impl RateFunction {
    pub fn eval(&self, n: u64) -> u64 {
        match self {
            RateFunction::Identity => n,
            RateFunction::Linear { factor, offset } => factor.saturating_mul(n).saturating_add(*offset),
            RateFunction::Square => n.saturating_mul(n),
            RateFunction::Exp => pow2(n),
            RateFunction::ExpTower(h) => (0..*h).fold(n, |acc, _| pow2(acc)),
            RateFunction::Constant(c) => *c,
            RateFunction::Table(t) => match t.get(n as usize) {
                Some(&v) => v,
                None => t.last().copied().unwrap_or(0),
            },
            RateFunction::WordCount { alphabet } => {
                let Some(m) = n.checked_sub(1) else { return 0 };
                let len = m / 2;
                // 1 + k + … + k^len
                let mut total: u64 = 0;
                let mut term: u64 = 1;
                for _ in 0..=len {
                    total = total.saturating_add(term);
                    if total == u64::MAX {
                        break;
                    }
                    term = term.saturating_mul(*alphabet);
                }
                total
            }
            RateFunction::Compose(outer, inner) => outer.eval(inner.eval(n)),
        }
    }

    /// Nondecreasing on `0..=up_to`.
    pub fn is_nondecreasing(&self, up_to: u64) -> bool {
        let mut prev = self.eval(0);
        for n in 1..=up_to {
            let v = self.eval(n);
            if v < prev {
                return false;
            }
            prev = v;
        }
        true
    }

    /// Nondecreasing everywhere, known from the shape of the function.
    pub fn is_monotone(&self) -> bool {
        match self {
            RateFunction::Table(t) => t.windows(2).all(|w| w[0] <= w[1]),
            RateFunction::Compose(a, b) => a.is_monotone() && b.is_monotone(),
            _ => true,
        }
    }

    pub fn compose(outer: RateFunction, inner: RateFunction) -> RateFunction {
        RateFunction::Compose(Box::new(outer), Box::new(inner))
    }
}

impl fmt::Display for RateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateFunction::Identity => f.write_str("identity"),
            RateFunction::Linear { factor, offset } => write!(f, "linear:{factor}:{offset}"),
            RateFunction::Square => f.write_str("square"),
            RateFunction::Exp => f.write_str("exp"),
            RateFunction::ExpTower(h) => write!(f, "tower:{h}"),
            RateFunction::Constant(c) => write!(f, "const:{c}"),
            RateFunction::Table(t) => {
                let vals: Vec<String> = t.iter().map(u64::to_string).collect();
                write!(f, "table:{}", vals.join(","))
            }
            RateFunction::WordCount { alphabet } => write!(f, "words:{alphabet}"),
            RateFunction::Compose(a, b) => write!(f, "compose:{a}@{b}"),
        }
    }
}

impl FromStr for RateFunction {
    type Err = RecursionError;

    /// Inverse of `Display`. In `compose:F@G` the outer `F` cannot itself be
    /// a composition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RecursionError::Rate(format!("unknown rate function `{s}`"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix("compose:") {
            let (a, b) = rest.split_once('@').ok_or_else(bad)?;
            return Ok(RateFunction::compose(a.parse()?, b.parse()?));
        }
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        Ok(match (head, arg) {
            ("identity" | "id", None) => RateFunction::Identity,
            ("square", None) => RateFunction::Square,
            ("exp", None) => RateFunction::Exp,
            ("tower", Some(h)) => RateFunction::ExpTower(num(h)?.try_into().map_err(|_| bad())?),
            ("const", Some(c)) => RateFunction::Constant(num(c)?),
            ("words", Some(k)) => RateFunction::WordCount { alphabet: num(k)? },
            ("linear", Some(a)) => {
                let (x, y) = a.split_once(':').ok_or_else(bad)?;
                RateFunction::Linear { factor: num(x)?, offset: num(y)? }
            }
            ("table", Some(a)) => {
                let vals = a.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<Result<Vec<_>, _>>()?;
                if vals.is_empty() {
                    return Err(bad());
                }
                RateFunction::Table(vals)
            }
            _ => return Err(bad()),
        })
    }
}

impl Serialize for RateFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RateFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(RateFunction::Identity.eval(7), 7);
        assert_eq!(RateFunction::Linear { factor: 3, offset: 2 }.eval(4), 14);
        assert_eq!(RateFunction::Square.eval(9), 81);
        assert_eq!(RateFunction::Exp.eval(10), 1024);
        assert_eq!(RateFunction::Exp.eval(70), u64::MAX);
        assert_eq!(RateFunction::ExpTower(2).eval(3), 256);
        assert_eq!(RateFunction::ExpTower(5).eval(1), u64::MAX);
        assert_eq!(RateFunction::Table(vec![1, 4]).eval(9), 4);
        assert_eq!(RateFunction::WordCount { alphabet: 8 }.eval(0), 0);
        assert_eq!(RateFunction::WordCount { alphabet: 8 }.eval(1), 1);
        assert_eq!(RateFunction::WordCount { alphabet: 8 }.eval(5), 73);
        let c = RateFunction::compose(RateFunction::Exp, RateFunction::Square);
        assert_eq!(c.eval(3), 512);
    }

    #[test]
    fn text_round_trip() {
        for s in ["identity", "linear:2:1", "square", "exp", "tower:5", "const:0", "table:1,2,3", "words:8", "compose:words:8@square"] {
            let r: RateFunction = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        for bad in ["cube", "linear:2", "table:", "tower:x", "compose:exp"] {
            assert!(bad.parse::<RateFunction>().is_err(), "{bad}");
        }
    }

    #[test]
    fn monotonicity() {
        assert!(RateFunction::Square.is_nondecreasing(100));
        assert!(!RateFunction::Table(vec![3, 1]).is_nondecreasing(5));
        assert!(!RateFunction::Table(vec![3, 1]).is_monotone());
    }
}
