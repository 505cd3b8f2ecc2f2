//! Finite commutative rings described by their local factors.
//!
//! A ring is stored as a multiset of local shapes `(r, m)`, where `r` is the
//! order of the local ring and `m` the order of its maximal ideal. The family
//! tag records how a concrete copy of the factor can be built.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, factorize, is_prime, prime_power};
use crate::error::{Error, Result};

/// How a concrete element-level witness of a local factor is constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Field,
    ZModPk,
    /// Galois ring of characteristic `p^s` and residue degree `t`.
    GaloisRing { s: u32, t: u32 },
    FieldModX2,
    FieldModX3,
    /// Formula-level only; no concrete witness.
    Shape,
}

impl Family {
    pub fn is_constructible(self) -> bool {
        self != Family::Shape
    }

    /// Short lowercase name, as accepted by `--families`.
    pub fn name(self) -> &'static str {
        match self {
            Family::Field => "field",
            Family::ZModPk => "zmodpk",
            Family::GaloisRing { .. } => "galois",
            Family::FieldModX2 => "x2",
            Family::FieldModX3 => "x3",
            Family::Shape => "shape",
        }
    }
}

/// Family kinds without parameters, used for filtering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    Field,
    ZModPk,
    GaloisRing,
    FieldModX2,
    FieldModX3,
    Shape,
}

impl FamilyKind {
    pub const CONSTRUCTIBLE: [FamilyKind; 5] = [
        FamilyKind::Field,
        FamilyKind::ZModPk,
        FamilyKind::GaloisRing,
        FamilyKind::FieldModX2,
        FamilyKind::FieldModX3,
    ];

    pub fn of(f: Family) -> Self {
        match f {
            Family::Field => FamilyKind::Field,
            Family::ZModPk => FamilyKind::ZModPk,
            Family::GaloisRing { .. } => FamilyKind::GaloisRing,
            Family::FieldModX2 => FamilyKind::FieldModX2,
            Family::FieldModX3 => FamilyKind::FieldModX3,
            Family::Shape => FamilyKind::Shape,
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "field" | "f" => FamilyKind::Field,
            "zmodpk" | "z" => FamilyKind::ZModPk,
            "galois" | "gr" => FamilyKind::GaloisRing,
            "x2" | "fieldmodx2" => FamilyKind::FieldModX2,
            "x3" | "fieldmodx3" => FamilyKind::FieldModX3,
            "shape" => FamilyKind::Shape,
            other => return Err(Error::Domain(format!("unknown family {other:?}"))),
        })
    }
}

/// A finite local ring of order `r` with maximal ideal of order `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalShape {
    r: u64,
    m: u64,
    family: Family,
}

impl LocalShape {
    pub fn field(q: u64) -> Result<Self> {
        prime_power(q).ok_or_else(|| Error::Domain(format!("no field of order {q}")))?;
        Ok(LocalShape { r: q, m: 1, family: Family::Field })
    }

    /// `Z/p^k`. With `k = 1` this is the prime field.
    pub fn zmod_prime_power(n: u64) -> Result<Self> {
        let (p, k) = prime_power(n)
            .ok_or_else(|| Error::Domain(format!("Z{n} is not local: {n} is not a prime power")))?;
        if k == 1 {
            return Self::field(n);
        }
        Ok(LocalShape { r: n, m: n / p, family: Family::ZModPk })
    }

    /// Galois ring `GR(p^s, t)`: order `p^(st)`, maximal ideal `p^((s-1)t)`.
    pub fn galois(ps: u64, t: u32) -> Result<Self> {
        let (p, s) = prime_power(ps)
            .ok_or_else(|| Error::Domain(format!("GR({ps},{t}): {ps} is not a prime power")))?;
        if t == 0 {
            return Err(Error::Domain("GR residue degree must be positive".into()));
        }
        if s == 1 {
            return Self::field(checked_pow(p, t)?);
        }
        if t == 1 {
            return Self::zmod_prime_power(ps);
        }
        let st = s.checked_mul(t).ok_or(Error::Overflow("GR exponent"))?;
        let r = checked_pow(p, st)?;
        let m = checked_pow(p, (s - 1) * t)?;
        Ok(LocalShape { r, m, family: Family::GaloisRing { s, t } })
    }

    /// `F_q[x]/(x^2)`.
    pub fn field_mod_x2(q: u64) -> Result<Self> {
        Self::field(q)?;
        let r = q.checked_mul(q).ok_or(Error::Overflow("F_q[x]/(x^2) order"))?;
        Ok(LocalShape { r, m: q, family: Family::FieldModX2 })
    }

    /// `F_q[x]/(x^3)`.
    pub fn field_mod_x3(q: u64) -> Result<Self> {
        Self::field(q)?;
        let m = q.checked_mul(q).ok_or(Error::Overflow("F_q[x]/(x^3) order"))?;
        let r = m.checked_mul(q).ok_or(Error::Overflow("F_q[x]/(x^3) order"))?;
        Ok(LocalShape { r, m, family: Family::FieldModX3 })
    }

    /// An abstract shape `(r, m)`. The residue order `r/m` must be a prime
    /// power `q` and `m` a power of `q`. Shapes with `m = 1` become fields.
    pub fn shape(r: u64, m: u64) -> Result<Self> {
        if m == 0 || r <= m || !r.is_multiple_of(m) {
            return Err(Error::Domain(format!("({r},{m}) is not a local shape")));
        }
        let q = r / m;
        if prime_power(q).is_none() {
            return Err(Error::Domain(format!("({r},{m}): residue order {q} is not a prime power")));
        }
        let mut x = m;
        while x.is_multiple_of(q) {
            x /= q;
        }
        if x != 1 {
            return Err(Error::Domain(format!(
                "({r},{m}): maximal ideal order is not a power of the residue order {q}"
            )));
        }
        if m == 1 {
            return Self::field(r);
        }
        Ok(LocalShape { r, m, family: Family::Shape })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Residue field order `r/m`.
    pub fn q(&self) -> u64 {
        self.r / self.m
    }

    pub fn prime(&self) -> u64 {
        factorize(self.r)[0].0
    }

    pub fn units(&self) -> u64 {
        self.r - self.m
    }

    pub fn is_field(&self) -> bool {
        self.m == 1
    }

    pub fn is_even(&self) -> bool {
        self.r.is_multiple_of(2)
    }

    /// Same `(r, m)` ignoring the family tag.
    pub fn same_shape(&self, other: &LocalShape) -> bool {
        self.r == other.r && self.m == other.m
    }
}

impl fmt::Display for LocalShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Field => write!(f, "F{}", self.r),
            Family::ZModPk => write!(f, "Z{}", self.r),
            Family::GaloisRing { s, t } => {
                let p = self.prime();
                write!(f, "GR({},{})", p.pow(s), t)
            }
            Family::FieldModX2 => write!(f, "F{}[x]/(x^2)", self.m),
            Family::FieldModX3 => write!(f, "F{}[x]/(x^3)", self.q()),
            Family::Shape => write!(f, "L({},{})", self.r, self.m),
        }
    }
}

/// A finite commutative ring as a canonically ordered list of local factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct RingSpec {
    factors: Vec<LocalShape>,
}

impl RingSpec {
    /// Sorts the factors and checks that the order fits in `u128`.
    pub fn new(mut factors: Vec<LocalShape>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Domain("a ring needs at least one local factor".into()));
        }
        factors.sort();
        factors
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.r as u128))
            .ok_or(Error::Overflow("ring order"))?;
        Ok(RingSpec { factors })
    }

    pub fn local(shape: LocalShape) -> Self {
        RingSpec { factors: vec![shape] }
    }

    /// Product of finite fields of the given orders.
    pub fn fields(orders: &[u64]) -> Result<Self> {
        Self::new(orders.iter().map(|&q| LocalShape::field(q)).collect::<Result<_>>()?)
    }

    pub fn factors(&self) -> &[LocalShape] {
        &self.factors
    }

    /// Number of local factors `s`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|f| f.r as u128).product()
    }

    pub fn units_count(&self) -> u128 {
        self.factors.iter().map(|f| f.units() as u128).product()
    }

    pub fn is_local(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_field_product(&self) -> bool {
        self.factors.iter().all(LocalShape::is_field)
    }

    pub fn is_constructible(&self) -> bool {
        self.factors.iter().all(|f| f.family.is_constructible())
    }

    /// Residue orders `r_i / m_i` in factor order.
    pub fn q_ratios(&self) -> Vec<u64> {
        self.factors.iter().map(LocalShape::q).collect()
    }

    /// Every even factor has `2m < r`, and some factor has odd order.
    pub fn is_odd_type(&self) -> bool {
        let evens_ok = self.factors.iter().filter(|f| f.is_even()).all(|f| 2 * f.m < f.r);
        evens_ok && self.factors.iter().any(|f| !f.is_even())
    }

    /// Split into the product of even-order factors and of odd-order factors.
    pub fn even_odd_split(&self) -> (Option<RingSpec>, Option<RingSpec>) {
        let (even, odd): (Vec<_>, Vec<_>) = self.factors.iter().partition(|f| f.is_even());
        let wrap = |v: Vec<LocalShape>| (!v.is_empty()).then_some(RingSpec { factors: v });
        (wrap(even), wrap(odd))
    }

    /// The factors as a multiset of `(r, m)` pairs, sorted.
    pub fn shape_key(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<_> = self.factors.iter().map(|f| (f.r, f.m)).collect();
        v.sort_unstable();
        v
    }

    /// Field orders when the ring is a product of fields.
    pub fn field_orders(&self) -> Option<Vec<u64>> {
        self.is_field_product().then(|| self.factors.iter().map(|f| f.r).collect())
    }

    /// Ring with the factors of both operands.
    pub fn product(&self, other: &RingSpec) -> Result<RingSpec> {
        let mut v = self.factors.clone();
        v.extend_from_slice(&other.factors);
        RingSpec::new(v)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl From<RingSpec> for String {
    fn from(r: RingSpec) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for RingSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        parse_ring_spec(&s)
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ring_spec(s)
    }
}

/// Parse a ring such as `Z9`, `F3xF4`, `GR(25,2)`, `F9[x]/(x^2)` or `Z12`.
///
/// Atoms are joined by `x`. `Z<n>` with composite `n` splits into its
/// prime-power components. `L(r,m)` names an abstract local shape.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    let mut factors = Vec::new();
    loop {
        factors.extend(p.atom()?);
        p.skip_ws();
        if p.at_end() {
            break;
        }
        p.expect("x")?;
        p.skip_ws();
    }
    RingSpec::new(factors)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { input: self.src.to_string(), offset: self.pos, message: message.into() }
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected {tok:?}")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err("expected a number"));
        }
        let n = self.rest()[..digits]
            .parse::<u64>()
            .map_err(|_| self.err("number out of range"))?;
        self.pos += digits;
        Ok(n)
    }

    /// Optional `[x]/(x^k)` suffix.
    fn quotient_suffix(&mut self) -> Result<Option<u64>> {
        if !self.eat("[x]/(x^") {
            return Ok(None);
        }
        let k = self.number()?;
        self.expect(")")?;
        Ok(Some(k))
    }

    fn truncated(&self, q: u64, k: u64) -> Result<LocalShape> {
        match k {
            2 => LocalShape::field_mod_x2(q),
            3 => LocalShape::field_mod_x3(q),
            _ => Err(self.err(format!("unsupported quotient (x^{k}); use x^2 or x^3"))),
        }
    }

    fn atom(&mut self) -> Result<Vec<LocalShape>> {
        if self.eat("GR(") {
            let ps = self.number()?;
            self.expect(",")?;
            let t = self.number()?;
            self.expect(")")?;
            let t = u32::try_from(t).map_err(|_| self.err("degree out of range"))?;
            return Ok(vec![LocalShape::galois(ps, t)?]);
        }
        if self.eat("L(") {
            let r = self.number()?;
            self.expect(",")?;
            let m = self.number()?;
            self.expect(")")?;
            return Ok(vec![LocalShape::shape(r, m)?]);
        }
        if self.eat("F") {
            let q = self.number()?;
            return match self.quotient_suffix()? {
                Some(k) => Ok(vec![self.truncated(q, k)?]),
                None => Ok(vec![LocalShape::field(q)?]),
            };
        }
        if self.eat("Z") {
            let n = self.number()?;
            if let Some(k) = self.quotient_suffix()? {
                if !is_prime(n) {
                    return Err(Error::Domain(format!("Z{n}[x]/(x^{k}) needs a prime modulus")));
                }
                return Ok(vec![self.truncated(n, k)?]);
            }
            if n < 2 {
                return Err(Error::Domain(format!("Z{n} is not a ring with 1 != 0")));
            }
            return factorize(n)
                .into_iter()
                .map(|(p, e)| LocalShape::zmod_prime_power(p.pow(e)))
                .collect();
        }
        Err(self.err("expected F, Z, GR( or L("))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(s: &str) -> RingSpec {
        parse_ring_spec(s).unwrap()
    }

    #[test]
    fn parses_documented_forms() {
        let z9 = spec("Z9");
        assert_eq!(z9.factors(), &[LocalShape { r: 9, m: 3, family: Family::ZModPk }]);
        let f = spec("F3xF4");
        assert_eq!(f.shape_key(), vec![(3, 1), (4, 1)]);
        let z12 = spec("Z12");
        assert_eq!(z12.shape_key(), vec![(3, 1), (4, 2)]);
        assert_eq!(z12.factors()[1].family(), Family::ZModPk);
        assert_eq!(spec("GR(25,1)"), spec("Z25"));
        assert_eq!(spec("F9[x]/(x^2)").shape_key(), vec![(81, 9)]);
        assert_eq!(spec("Z3xZ3xZ4").len(), 3);
        assert_eq!(spec("Z3[x]/(x^3)").to_string(), "F3[x]/(x^3)");
        assert_eq!(spec(" F3 x F4 ").to_string(), "F3xF4");
    }

    #[test]
    fn galois_ring_orders() {
        let gr = LocalShape::galois(9, 2).unwrap();
        assert_eq!((gr.r(), gr.m(), gr.units()), (81, 9, 72));
        assert_eq!(gr.to_string(), "GR(9,2)");
        assert_eq!(LocalShape::galois(3, 2).unwrap(), LocalShape::field(9).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_ring_spec("F6"), Err(Error::Domain(_))));
        assert!(matches!(parse_ring_spec("Z1"), Err(Error::Domain(_))));
        assert!(matches!(parse_ring_spec("Q5"), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_ring_spec("F3x"), Err(Error::Parse { offset: 3, .. })));
        assert!(matches!(parse_ring_spec("F3*F4"), Err(Error::Parse { .. })));
        assert!(matches!(parse_ring_spec("F4[x]/(x^4)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_ring_spec(""), Err(Error::Parse { .. })));
        // Residue order 4 cannot have a maximal ideal of order 2.
        assert!(matches!(parse_ring_spec("L(8,2)"), Err(Error::Domain(_))));
        assert!(matches!(parse_ring_spec("L(12,4)"), Err(Error::Domain(_))));
    }

    #[test]
    fn units_and_order() {
        assert_eq!(spec("Z9").units_count(), 6);
        assert_eq!(spec("F3xF4").units_count(), 6);
        assert_eq!(spec("GR(9,2)").units_count(), 72);
        assert_eq!(spec("Z12").order(), 12);
    }

    #[test]
    fn odd_type_examples() {
        assert!(spec("F4xF3").is_odd_type());
        assert!(!spec("Z4xF3").is_odd_type());
        assert!(!spec("F4xF4").is_odd_type());
        assert!(spec("Z9").is_odd_type());
    }

    #[test]
    fn split_examples() {
        assert_eq!(spec("F4xF3").even_odd_split(), (Some(spec("F4")), Some(spec("F3"))));
        assert_eq!(spec("Z9").even_odd_split(), (None, Some(spec("Z9"))));
        assert_eq!(spec("F4xF8").even_odd_split(), (Some(spec("F4xF8")), None));
    }

    #[test]
    fn shape_atoms() {
        assert_eq!(spec("L(16,4)").to_string(), "L(16,4)");
        assert_eq!(spec("L(7,1)"), spec("F7"));
        assert!(!spec("L(16,4)").is_constructible());
    }

    #[test]
    fn serde_as_label() {
        let r = spec("Z12");
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(j, "\"F3xZ4\"");
        assert_eq!(serde_json::from_str::<RingSpec>(&j).unwrap(), r);
    }

    fn atom_strategy() -> impl Strategy<Value = LocalShape> {
        let pp = prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27]);
        prop_oneof![
            pp.clone().prop_map(|q| LocalShape::field(q).unwrap()),
            pp.clone().prop_map(|q| LocalShape::field_mod_x2(q).unwrap()),
            prop::sample::select(vec![2u64, 3, 5])
                .prop_map(|q| LocalShape::field_mod_x3(q).unwrap()),
            prop::sample::select(vec![4u64, 8, 9, 25, 27, 49])
                .prop_map(|n| LocalShape::zmod_prime_power(n).unwrap()),
            (prop::sample::select(vec![4u64, 8, 9]), 2u32..4)
                .prop_map(|(ps, t)| LocalShape::galois(ps, t).unwrap()),
            prop::sample::select(vec![(16u64, 4u64), (64, 8), (81, 9), (32, 16)])
                .prop_map(|(r, m)| LocalShape::shape(r, m).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn printer_round_trips(atoms in prop::collection::vec(atom_strategy(), 1..5)) {
            let r = RingSpec::new(atoms).unwrap();
            let text = r.to_string();
            prop_assert_eq!(parse_ring_spec(&text).unwrap(), r);
        }

        #[test]
        fn split_is_multiplicative(atoms in prop::collection::vec(atom_strategy(), 1..5)) {
            let r = RingSpec::new(atoms).unwrap();
            let (e, o) = r.even_odd_split();
            let ord = |x: &Option<RingSpec>| x.as_ref().map_or(1, RingSpec::order);
            let units = |x: &Option<RingSpec>| x.as_ref().map_or(1, RingSpec::units_count);
            prop_assert_eq!(r.order(), ord(&e) * ord(&o));
            prop_assert_eq!(r.units_count(), units(&e) * units(&o));
            if r.is_odd_type() {
                prop_assert!(o.is_some());
            }
        }

        #[test]
        fn local_shape_invariants(a in atom_strategy()) {
            let (p, _) = prime_power(a.r()).unwrap();
            prop_assert!(a.m() < a.r());
            prop_assert_eq!(a.r() % a.m(), 0);
            prop_assert!(a.m() == 1 || prime_power(a.m()).unwrap().0 == p);
            match a.family() {
                Family::Field => prop_assert_eq!(a.m(), 1),
                Family::ZModPk => prop_assert_eq!(a.m() * p, a.r()),
                Family::FieldModX2 => prop_assert_eq!(a.m() * a.m(), a.r()),
                Family::GaloisRing { s, t } => {
                    prop_assert_eq!(a.r(), p.pow(s * t));
                    prop_assert_eq!(a.m(), p.pow((s - 1) * t));
                }
                _ => {}
            }
        }
    }
}
