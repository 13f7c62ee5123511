//! Naturals in hereditary base 3.
//!
//! A value is a finite sum `sum_i d_i * 3^(p_i)` with digits `d_i` in
//! `{1, 2}` and strictly decreasing positions `p_i`, where every position is
//! itself a `HereditaryNat`. This keeps towers such as `3^(3^(3^40))` exact
//! and small in memory, which plain big integers cannot.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Canonical hereditary base-3 natural. Terms are sorted by position,
/// highest first, so the derived lexicographic order is numeric order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HereditaryNat {
    terms: Vec<(HereditaryNat, u8)>,
}

impl HereditaryNat {
    pub fn zero() -> Self {
        HereditaryNat { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `digit * 3^pos` for a digit in `{1, 2}`.
    pub fn power_term(pos: HereditaryNat, digit: u8) -> Self {
        assert!(digit == 1 || digit == 2, "digit must be 1 or 2");
        HereditaryNat {
            terms: vec![(pos, digit)],
        }
    }

    /// Ternary digit at position `pos`.
    pub fn digit(&self, pos: &HereditaryNat) -> u8 {
        // terms are descending; binary search with reversed comparison
        self.terms
            .binary_search_by(|(p, _)| pos.cmp(p))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// Positions carrying a nonzero digit, highest first.
    pub fn terms(&self) -> &[(HereditaryNat, u8)] {
        &self.terms
    }

    /// Highest position with a nonzero digit.
    pub fn leading_position(&self) -> Option<&HereditaryNat> {
        self.terms.first().map(|(p, _)| p)
    }

    /// Adds `digit * 3^pos`, propagating carries.
    pub fn add_power(&mut self, pos: HereditaryNat, digit: u8) {
        let mut pos = pos;
        let mut carry = digit;
        while carry > 0 {
            match self.terms.binary_search_by(|(p, _)| pos.cmp(p)) {
                Ok(i) => {
                    let d = self.terms[i].1 + carry;
                    if d < 3 {
                        self.terms[i].1 = d;
                        carry = 0;
                    } else {
                        if d == 3 {
                            self.terms.remove(i);
                        } else {
                            self.terms[i].1 = d - 3;
                        }
                        carry = 1;
                        pos = pos.successor();
                    }
                }
                Err(i) => {
                    self.terms.insert(i, (pos.clone(), carry));
                    carry = 0;
                }
            }
        }
    }

    pub fn successor(&self) -> Self {
        let mut out = self.clone();
        out.add_power(HereditaryNat::zero(), 1);
        out
    }

    pub fn add(&self, other: &HereditaryNat) -> Self {
        let mut out = self.clone();
        for (p, d) in &other.terms {
            out.add_power(p.clone(), *d);
        }
        out
    }

    /// Exact conversion when the value has at most `max_bits` bits.
    pub fn to_biguint_bounded(&self, max_bits: u64) -> Option<BigUint> {
        let mut acc = BigUint::zero();
        for (p, d) in &self.terms {
            let e = p.to_u64()?;
            // 3^e has about 1.585 * e bits
            if e.saturating_mul(1585) / 1000 > max_bits {
                return None;
            }
            acc += BigUint::from(*d) * BigUint::from(3u32).pow(u32::try_from(e).ok()?);
        }
        Some(acc)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_biguint_bounded(64)?.to_u64()
    }

    fn fmt_expr(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.to_u64() {
            return write!(f, "{v}");
        }
        for (i, (p, d)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *d == 2 {
                f.write_str("2*")?;
            }
            match p.to_u64() {
                Some(v) => write!(f, "3^{v}")?,
                None => {
                    f.write_str("3^(")?;
                    p.fmt_expr(f)?;
                    f.write_str(")")?;
                }
            }
        }
        Ok(())
    }
}

impl From<u64> for HereditaryNat {
    fn from(n: u64) -> Self {
        HereditaryNat::from(&BigUint::from(n))
    }
}

impl From<&BigUint> for HereditaryNat {
    fn from(n: &BigUint) -> Self {
        let digits = n.to_radix_le(3);
        let mut terms = Vec::new();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d != 0 {
                terms.push((HereditaryNat::from(i as u64), d));
            }
        }
        HereditaryNat { terms }
    }
}

impl fmt::Display for HereditaryNat {
    /// Decimal when the value fits in a `u64`, otherwise a sum of powers of 3
    /// such as `2*3^(3^40 + 1) + 3^7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_expr(f)
    }
}

impl fmt::Debug for HereditaryNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_expr(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse natural at byte {at}: {msg}")]
pub struct ParseNatError {
    at: usize,
    msg: String,
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, ParseNatError> {
        Err(ParseNatError {
            at: self.i,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<BigUint, ParseNatError> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.s[start..self.i]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn atom(&mut self) -> Result<HereditaryNat, ParseNatError> {
        if self.eat(b'(') {
            let e = self.expr()?;
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            Ok(e)
        } else {
            Ok(HereditaryNat::from(&self.number()?))
        }
    }

    // term := NUMBER ['*' '3^' atom] | '3^' atom
    fn term(&mut self) -> Result<HereditaryNat, ParseNatError> {
        let coeff = self.number()?;
        let (coeff, pos) = if coeff == BigUint::from(3u32) && self.eat(b'^') {
            (BigUint::from(1u32), self.atom()?)
        } else if self.eat(b'*') {
            let base = self.number()?;
            if base != BigUint::from(3u32) || !self.eat(b'^') {
                return self.err("expected '3^'");
            }
            (coeff, self.atom()?)
        } else {
            return Ok(HereditaryNat::from(&coeff));
        };
        // coeff * 3^pos = sum_i c_i * 3^(pos + i)
        let mut out = HereditaryNat::zero();
        for (i, &d) in coeff.to_radix_le(3).iter().enumerate() {
            if d != 0 {
                out.add_power(pos.add(&HereditaryNat::from(i as u64)), d);
            }
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<HereditaryNat, ParseNatError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }
}

impl FromStr for HereditaryNat {
    type Err = ParseNatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            s: s.as_bytes(),
            i: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.i != p.s.len() {
            return p.err("trailing input");
        }
        Ok(v)
    }
}

impl serde::Serialize for HereditaryNat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> serde::Deserialize<'de> for HereditaryNat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(HereditaryNat::from(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Numeric comparison helper for callers holding plain integers.
pub fn cmp_u64(a: &HereditaryNat, b: u64) -> Ordering {
    a.cmp(&HereditaryNat::from(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values_roundtrip() {
        for n in 0..500u64 {
            assert_eq!(HereditaryNat::from(n).to_u64(), Some(n));
        }
    }

    #[test]
    fn digits_of_sixteen() {
        let n = HereditaryNat::from(16);
        let d: Vec<u8> = (0..4).map(|i| n.digit(&HereditaryNat::from(i))).collect();
        assert_eq!(d, vec![1, 2, 1, 0]);
    }

    #[test]
    fn towers_stay_small() {
        let mut x = HereditaryNat::from(1);
        for _ in 0..6 {
            x = HereditaryNat::power_term(x, 1);
        }
        assert!(x.to_u64().is_none());
        assert!(x > HereditaryNat::from(u64::MAX));
        let s = x.to_string();
        assert_eq!(s.parse::<HereditaryNat>().unwrap(), x);
    }

    #[test]
    fn parse_accepts_coefficients_and_sums() {
        let v: HereditaryNat = "5*3^2 + 3^0 + 2".parse().unwrap();
        assert_eq!(v.to_u64(), Some(48));
        assert!("3^".parse::<HereditaryNat>().is_err());
        assert!("12 x".parse::<HereditaryNat>().is_err());
    }

    proptest! {
        #[test]
        fn order_and_addition_match_integers(a in 0u64..1 << 40, b in 0u64..1 << 40) {
            let (ha, hb) = (HereditaryNat::from(a), HereditaryNat::from(b));
            prop_assert_eq!(ha.cmp(&hb), a.cmp(&b));
            prop_assert_eq!(ha.add(&hb).to_u64(), Some(a + b));
            prop_assert_eq!(ha.successor().to_u64(), Some(a + 1));
            prop_assert_eq!(ha.to_string().parse::<HereditaryNat>().unwrap(), ha);
        }
    }
}
