use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact scalar used for every function value.
pub type Rational = BigRational;

/// Parses `"p/q"`, `"p"` or `"-p/q"` into a normalised rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn int(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A finite, strictly increasing set of scalars that contains zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueGrid {
    values: Vec<Rational>,
}

impl ValueGrid {
    pub fn new(values: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut values: Vec<Rational> = values.into_iter().collect();
        values.sort();
        if values.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGrid("duplicate values".into()));
        }
        if values.binary_search(&Rational::zero()).is_err() {
            return Err(Error::InvalidGrid("zero is missing".into()));
        }
        Ok(ValueGrid { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        ValueGrid::new(values.iter().map(|&v| int(v)))
    }

    /// `{0, 1}`
    pub fn binary() -> Self {
        ValueGrid {
            values: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.values.binary_search(v).is_ok()
    }

    pub fn index_of(&self, v: &Rational) -> Option<usize> {
        self.values.binary_search(v).ok()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Rational> {
        self.values.iter().filter(|v| !v.is_zero())
    }
}

impl FromStr for ValueGrid {
    type Err = Error;

    /// Comma-separated rationals, e.g. `"-1,0,1/2,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        ValueGrid::new(values)
    }
}

impl fmt::Display for ValueGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalises() {
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), int(-3));
        assert_eq!(parse_rational("3/-6").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn grid_rules() {
        let g: ValueGrid = "2,0,-1,1".parse().unwrap();
        assert_eq!(g.values(), &[int(-1), int(0), int(1), int(2)]);
        assert_eq!(g.to_string(), "{-1,0,1,2}");
        assert!(matches!("1,2".parse::<ValueGrid>(), Err(Error::InvalidGrid(_))));
        assert!(matches!("0,1,1".parse::<ValueGrid>(), Err(Error::InvalidGrid(_))));
        assert!(matches!("0,1/2,2/4".parse::<ValueGrid>(), Err(Error::InvalidGrid(_))));
        assert_eq!(g.nonzero().count(), 3);
    }
}
