use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{lcm_range, Election, Rational};
use crate::error::{Error, Result};

/// The improvement threshold of a local-search run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Epsilon {
    /// `n / k²`.
    Threshold,
    /// `1 / lcm(1..=k)`: with integer weights, `Δ ≥ 0⁺` iff `Δ > 0`.
    ZeroPlus,
    Custom(Rational),
}

impl Epsilon {
    pub fn custom(value: Rational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::InvalidParams(format!(
                "epsilon must be positive, got {value}"
            )));
        }
        Ok(Epsilon::Custom(value))
    }

    pub fn value(&self, election: &Election) -> Rational {
        let k = election.committee_size();
        match self {
            Epsilon::Threshold => Rational::new(
                BigInt::from(election.voter_count()),
                BigInt::from(k) * BigInt::from(k),
            ),
            Epsilon::ZeroPlus => Rational::new(BigInt::one(), BigInt::from(lcm_range(k))),
            Epsilon::Custom(v) => v.clone(),
        }
    }

    /// Parses `threshold`, `zero-plus` (or `0+`), or a fraction `p/q` / integer.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "threshold" | "n/k2" => Ok(Epsilon::Threshold),
            "zero-plus" | "zeroplus" | "0+" => Ok(Epsilon::ZeroPlus),
            other => {
                let value: Rational = other
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("cannot parse epsilon {other:?}")))?;
                Epsilon::custom(value)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::blocs_and_singletons;
    use super::super::int;
    use super::*;

    #[test]
    fn values() {
        let e = blocs_and_singletons();
        assert_eq!(Epsilon::Threshold.value(&e), int(10));
        assert_eq!(
            Epsilon::ZeroPlus.value(&e),
            Rational::new(1.into(), 6.into())
        );
        assert_eq!(
            Epsilon::parse("28/3").unwrap(),
            Epsilon::Custom(Rational::new(28.into(), 3.into()))
        );
        assert!(Epsilon::parse("0").is_err());
        assert!(Epsilon::parse("-1/2").is_err());
        assert_eq!(Epsilon::parse("0+").unwrap(), Epsilon::ZeroPlus);
    }
}
