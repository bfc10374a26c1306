//! Exact scalars and dyadic structure: [`Rational`], [`DyadicString`],
//! [`DyadicInterval`] and [`Partition`].

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{bail, Error, Result};

/// An exact fraction in lowest terms with positive denominator.
///
/// Serialized as `"num/den"`, always with an explicit denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            bail!(Invalid, "zero denominator");
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `2^exp` for any signed exponent.
    pub fn pow2(exp: i64) -> Self {
        let mag = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            Rational(BigRational::from_integer(mag))
        } else {
            Rational(BigRational::new_raw(BigInt::one(), mag))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            bail!(Invalid, "reciprocal of zero");
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn min(self, other: Self) -> Self {
        core::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        core::cmp::max(self, other)
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Rational) -> Rational {
        (self + other) * Rational::new(1, 2)
    }

    /// Whether the denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        let d = self.denom().magnitude();
        d.count_ones() == 1
    }

    /// Returns `k` with `2^-k <= |self|` when `self` is nonzero, i.e. the least
    /// `k` such that `2^-k` does not exceed the magnitude.
    pub fn dyadic_floor_log(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let a = self.abs();
        let bits_n = a.numer().bits() as i64;
        let bits_d = a.denom().bits() as i64;
        // 2^(bits_n - 1 - bits_d) < a < 2^(bits_n - bits_d + 1)
        let mut k = bits_d - bits_n - 1;
        while Rational::pow2(-k) > a {
            k += 1;
        }
        while Rational::pow2(-(k - 1)) <= a {
            k -= 1;
        }
        Some(k)
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"n/d"` or a bare integer `"n"`. Decimals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n
            .parse()
            .map_err(|_| Error::Parse(alloc::format!("bad numerator in {s:?}")))?;
        let d: BigInt = d
            .parse()
            .map_err(|_| Error::Parse(alloc::format!("bad denominator in {s:?}")))?;
        Rational::from_bigints(n, d).map_err(|_| Error::Parse(alloc::format!("zero denominator in {s:?}")))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident) => {
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($Trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $Trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($Trait::$method(self.0, &rhs.0))
            }
        }
        impl<'a> $Trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($Trait::$method(&self.0, rhs.0))
            }
        }
        impl<'a, 'b> $Trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational($Trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for the underlying big rational.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// A finite binary string `σ`.
///
/// Strings are ordered length-lexicographically, which agrees with the
/// integer encoding of [`DyadicString::code`]: `ε = 0`, `"0" = 1`,
/// `"1" = 2`, `"00" = 3`, ...
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DyadicString {
    bits: Vec<bool>,
}

impl DyadicString {
    pub fn empty() -> Self {
        DyadicString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        DyadicString { bits }
    }

    /// The `len`-bit big-endian binary numeral for `value`, which must be
    /// below `2^len`.
    pub fn from_value(value: &BigUint, len: usize) -> Self {
        debug_assert!(value.bits() as usize <= len);
        let bits = (0..len).map(|i| value.bit((len - 1 - i) as u64)).collect();
        DyadicString { bits }
    }

    pub fn repeat(pattern: &DyadicString, times: usize) -> Self {
        let mut bits = Vec::with_capacity(pattern.len() * times);
        for _ in 0..times {
            bits.extend_from_slice(&pattern.bits);
        }
        DyadicString { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn child(&self, b: bool) -> Self {
        let mut bits = Vec::with_capacity(self.bits.len() + 1);
        bits.extend_from_slice(&self.bits);
        bits.push(b);
        DyadicString { bits }
    }

    /// The first `n` bits. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> Self {
        DyadicString { bits: self.bits[..n].to_vec() }
    }

    pub fn parent(&self) -> Option<Self> {
        if self.is_empty() {
            None
        } else {
            Some(self.prefix(self.len() - 1))
        }
    }

    pub fn suffix_from(&self, n: usize) -> Self {
        DyadicString { bits: self.bits[n..].to_vec() }
    }

    pub fn concat(&self, other: &DyadicString) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        DyadicString { bits }
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &DyadicString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn comparable(&self, other: &DyadicString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The bits read as a binary numeral.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &b in &self.bits {
            v <<= 1u32;
            if b {
                v += 1u32;
            }
        }
        v
    }

    /// Length-lexicographic integer code: `2^len - 1 + value`.
    pub fn code(&self) -> BigUint {
        (BigUint::one() << self.len()) - 1u32 + self.value()
    }

    /// Code as `u64`; `None` for strings of length 64 or more.
    pub fn code_u64(&self) -> Option<u64> {
        self.code().to_u64()
    }

    pub fn from_code(code: &BigUint) -> Self {
        // len = floor(log2(code + 1))
        let c1 = code + 1u32;
        let len = (c1.bits() - 1) as usize;
        let value = c1 - (BigUint::one() << len);
        DyadicString::from_value(&value, len)
    }

    /// `0.σ = Σ σ(i) 2^{-i-1}`.
    pub fn dyadic_value(&self) -> Rational {
        Rational::from_bigints(BigInt::from(self.value()), BigInt::one() << self.len())
            .expect("nonzero power of two")
    }

    /// `I_σ = [0.σ, 0.σ + 2^{-|σ|}]`.
    pub fn interval(&self) -> DyadicInterval {
        DyadicInterval::of_string(self)
    }

    /// All strings of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = DyadicString> {
        assert!(n < 64, "level too wide to enumerate");
        (0u64..(1u64 << n)).map(move |v| DyadicString::from_value(&BigUint::from(v), n))
    }

    /// Length-`len` prefix of a binary expansion of `x ∈ [0,1]`.
    ///
    /// With `from_above` the prefix is the one whose half-open interval
    /// `[0.σ, 0.σ + 2^{-len})` contains `x` (the 0-tailed expansion of a
    /// dyadic rational); otherwise `x ∈ (0.σ, 0.σ + 2^{-len}]` (the
    /// 1-tailed one). Returns `None` when no such prefix exists
    /// (`x = 1` from above, `x = 0` from below).
    pub fn expansion_prefix(x: &Rational, len: usize, from_above: bool) -> Option<DyadicString> {
        let scaled = x * Rational::pow2(len as i64);
        let top = BigInt::one() << len;
        let idx = if from_above { scaled.floor() } else { scaled.ceil() - 1 };
        if idx.is_negative() || idx >= top {
            return None;
        }
        Some(DyadicString::from_value(idx.magnitude(), len))
    }
}

impl PartialOrd for DyadicString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl fmt::Display for DyadicString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for DyadicString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for DyadicString {
    type Err = Error;

    /// Accepts a string over `{0,1}`; the empty string may be written `ε`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" {
            return Ok(DyadicString::empty());
        }
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => bail!(Parse, "not a binary string: {s:?}"),
            }
        }
        Ok(DyadicString { bits })
    }
}

/// A closed subinterval `[left, right]` of `[0,1]` with `left < right`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicInterval {
    left: Rational,
    right: Rational,
}

impl DyadicInterval {
    pub fn new(left: Rational, right: Rational) -> Result<Self> {
        if left.is_negative() || right > Rational::one() {
            bail!(Range, "interval [{left}, {right}] leaves [0,1]");
        }
        if left >= right {
            bail!(Invalid, "degenerate interval [{left}, {right}]");
        }
        Ok(DyadicInterval { left, right })
    }

    /// `I_σ = [0.σ, 0.σ + 2^{-|σ|}]`; the empty string gives `[0,1]`.
    pub fn of_string(s: &DyadicString) -> Self {
        let left = s.dyadic_value();
        let right = &left + Rational::pow2(-(s.len() as i64));
        DyadicInterval { left, right }
    }

    pub fn unit() -> Self {
        DyadicInterval { left: Rational::zero(), right: Rational::one() }
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn midpoint(&self) -> Rational {
        self.left.midpoint(&self.right)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.left <= x && x <= &self.right
    }

    pub fn contains_interior(&self, x: &Rational) -> bool {
        &self.left < x && x < &self.right
    }

    pub fn halves(&self) -> (DyadicInterval, DyadicInterval) {
        let m = self.midpoint();
        (
            DyadicInterval { left: self.left.clone(), right: m.clone() },
            DyadicInterval { left: m, right: self.right.clone() },
        )
    }

    /// Interiors are disjoint (shared endpoints allowed).
    pub fn interior_disjoint(&self, other: &DyadicInterval) -> bool {
        self.right <= other.left || other.right <= self.left
    }

    pub fn is_subset_of(&self, other: &DyadicInterval) -> bool {
        other.left <= self.left && self.right <= other.right
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.left, self.right)
    }
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A partition `t_0 < t_1 < ... < t_n` with `n >= 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    points: Vec<Rational>,
}

impl Partition {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        if points.len() < 2 {
            bail!(Invalid, "a partition needs at least two points");
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            bail!(Invalid, "partition points not strictly increasing at {} >= {}", w[0], w[1]);
        }
        Ok(Partition { points })
    }

    /// The trivial partition `(a, b)`.
    pub fn endpoints(a: Rational, b: Rational) -> Result<Self> {
        Partition::new(alloc::vec![a, b])
    }

    pub fn unit() -> Self {
        Partition { points: alloc::vec![Rational::zero(), Rational::one()] }
    }

    /// `n + 1` equally spaced points from `a` to `b`.
    pub fn uniform(a: &Rational, b: &Rational, n: usize) -> Result<Self> {
        if n == 0 {
            bail!(Invalid, "uniform partition needs n >= 1");
        }
        let step = (b - a) / Rational::from(n as i64);
        Partition::new((0..=n).map(|i| a + &step * Rational::from(i as i64)).collect())
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn left(&self) -> &Rational {
        &self.points[0]
    }

    pub fn right(&self) -> &Rational {
        self.points.last().expect("nonempty")
    }

    /// Number of subintervals.
    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Sorted union with `extra`; every extra point must lie within the
    /// partition's endpoints.
    pub fn refine<'a, I>(&self, extra: I) -> Result<Partition>
    where
        I: IntoIterator<Item = &'a Rational>,
    {
        let mut pts = self.points.clone();
        for p in extra {
            if p < self.left() || p > self.right() {
                bail!(Range, "refinement point {p} outside [{}, {}]", self.left(), self.right());
            }
            pts.push(p.clone());
        }
        pts.sort();
        pts.dedup();
        Ok(Partition { points: pts })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(", "))
    }
}

/// Cantor pairing `⟨a, b⟩ = (a+b)(a+b+1)/2 + b`.
pub fn pair(a: u64, b: u64) -> u64 {
    let s = a + b;
    s * (s + 1) / 2 + b
}

/// Inverse of [`pair`].
pub fn unpair(code: u64) -> (u64, u64) {
    // largest s with s(s+1)/2 <= code
    let mut s = (num_integer::Roots::sqrt(&(8 * code as u128 + 1)) as u64 - 1) / 2;
    while s * (s + 1) / 2 > code {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= code {
        s += 1;
    }
    let b = code - s * (s + 1) / 2;
    (s - b, b)
}

/// Euler's totient, by trial division.
pub(crate) fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn s(t: &str) -> DyadicString {
        t.parse().unwrap()
    }

    #[test]
    fn interval_of_string_examples() {
        assert_eq!(s("").interval(), DyadicInterval::unit());
        let i = s("101").interval();
        assert_eq!((i.left(), i.right()), (&r(5, 8), &r(3, 4)));
        let i = s("00").interval();
        assert_eq!((i.left(), i.right()), (&r(0, 1), &r(1, 4)));
        assert_eq!(s("ε"), DyadicString::empty());
    }

    #[test]
    fn children_are_halves_exhaustively() {
        for n in 0..=12 {
            for sigma in DyadicString::all_of_length(n) {
                let (lo, hi) = sigma.interval().halves();
                assert_eq!(sigma.child(false).interval(), lo);
                assert_eq!(sigma.child(true).interval(), hi);
            }
        }
    }

    #[test]
    fn code_is_length_lex() {
        let order = ["", "0", "1", "00", "01", "10", "11", "000"];
        for (i, t) in order.iter().enumerate() {
            let sigma = s(t);
            assert_eq!(sigma.code(), BigUint::from(i as u64));
            assert_eq!(DyadicString::from_code(&BigUint::from(i as u64)), sigma);
        }
        let mut all: Vec<DyadicString> = (0..5).flat_map(DyadicString::all_of_length).collect();
        let sorted = {
            let mut v = all.clone();
            v.sort();
            v
        };
        all.sort_by_key(|x| x.code());
        assert_eq!(all, sorted);
    }

    #[test]
    fn refine_partition_examples() {
        let p = Partition::unit().refine([&r(1, 2)]).unwrap();
        assert_eq!(p.points(), &[r(0, 1), r(1, 2), r(1, 1)]);
        let q = p.refine([&r(1, 2)]).unwrap();
        assert_eq!(q, p);
        let p = Partition::unit().refine([&r(1, 4), &r(3, 4)]).unwrap();
        assert_eq!(p.points(), &[r(0, 1), r(1, 4), r(3, 4), r(1, 1)]);
        assert!(matches!(Partition::unit().refine([&r(3, 2)]), Err(Error::Range(_))));
    }

    #[test]
    fn partition_rejects_bad_input() {
        assert!(Partition::new(alloc::vec![r(0, 1)]).is_err());
        assert!(Partition::new(alloc::vec![r(0, 1), r(0, 1)]).is_err());
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(r(15, 16).to_string(), "15/16");
        assert_eq!(r(4, 2).to_string(), "2/1");
        assert_eq!("-6/8".parse::<Rational>().unwrap(), r(-3, 4));
        assert_eq!("7".parse::<Rational>().unwrap(), r(7, 1));
        assert!("0.5".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn pow2_and_log() {
        assert_eq!(Rational::pow2(-3), r(1, 8));
        assert_eq!(Rational::pow2(4), r(16, 1));
        assert_eq!(r(1, 8).dyadic_floor_log(), Some(3));
        assert_eq!(r(3, 16).dyadic_floor_log(), Some(3));
        assert_eq!(r(5, 1).dyadic_floor_log(), Some(-2));
    }

    #[test]
    fn expansion_prefixes() {
        let x = r(3, 8);
        assert_eq!(DyadicString::expansion_prefix(&x, 5, true), Some(s("01100")));
        assert_eq!(DyadicString::expansion_prefix(&x, 5, false), Some(s("01011")));
        assert_eq!(DyadicString::expansion_prefix(&r(1, 1), 3, true), None);
        assert_eq!(DyadicString::expansion_prefix(&r(1, 1), 3, false), Some(s("111")));
        assert_eq!(DyadicString::expansion_prefix(&r(0, 1), 3, false), None);
        let third = r(1, 3);
        let a = DyadicString::expansion_prefix(&third, 6, true).unwrap();
        assert_eq!(a, s("010101"));
        assert_eq!(DyadicString::expansion_prefix(&third, 6, false).unwrap(), a);
    }

    #[test]
    fn pairing_round_trip() {
        for c in 0..2000 {
            let (a, b) = unpair(c);
            assert_eq!(pair(a, b), c);
        }
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(1, 0), 1);
        assert_eq!(pair(0, 1), 2);
    }

    #[test]
    fn totient_small() {
        let expect = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(totient(i as u64 + 1), e);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rat() -> impl Strategy<Value = Rational> {
            (-1000i64..1000, 1i64..200).prop_map(|(n, d)| Rational::new(n, d))
        }

        proptest! {
            #[test]
            fn field_laws(a in rat(), b in rat(), c in rat()) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            }

            #[test]
            fn normalization_idempotent(n in -10_000i64..10_000, d in 1i64..10_000) {
                let x = Rational::new(n, d);
                let y = Rational::from_bigints(x.numer().clone(), x.denom().clone()).unwrap();
                prop_assert_eq!(&x, &y);
                prop_assert!(x.denom() > &BigInt::zero());
                prop_assert_eq!(x.numer().gcd(x.denom()), if x.is_zero() { x.denom().clone() } else { BigInt::one() });
                let back: Rational = x.to_string().parse().unwrap();
                prop_assert_eq!(back, x);
            }

            #[test]
            fn refine_keeps_endpoints(pts in proptest::collection::vec(0i64..=64, 0..10)) {
                let base = Partition::unit();
                let extra: Vec<Rational> = pts.iter().map(|&p| Rational::new(p, 64)).collect();
                let refined = base.refine(extra.iter()).unwrap();
                prop_assert!(refined.points().len() >= base.points().len());
                prop_assert_eq!(refined.left(), base.left());
                prop_assert_eq!(refined.right(), base.right());
                for p in &extra {
                    prop_assert!(refined.points().contains(p));
                }
            }
        }
    }
}
