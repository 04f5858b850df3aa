//! Coefficient rings for exact elimination.
//!
//! Integer elimination is generic over any signed integer type from
//! `num-traits` (`i64`, `i128`, `BigInt`). Fixed-width types report
//! [`Overflow`] instead of wrapping, so callers can retry at a wider type.
//! Prime fields carry their modulus at runtime.

use std::fmt::{Debug, Display};
use std::marker::PhantomData;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// Raised by fixed-width arithmetic when a result does not fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow in exact arithmetic")]
pub struct Overflow;

/// Signed integer scalar usable for exact Smith normal form work.
pub trait IntScalar:
    Clone
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + Into<num_bigint::BigInt>
    + 'static
{
}

impl<T> IntScalar for T where
    T: Clone
        + Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Send
        + Sync
        + Into<num_bigint::BigInt>
        + 'static
{
}

/// Arithmetic context used by the sparse eliminator.
pub trait Ring: Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn embed(&self, v: i64) -> Result<Self::Elem, Overflow>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Overflow>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Overflow>;
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem, Overflow>;
    /// Inverse of `a` when `a` is a unit of the ring.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Overflow> {
        self.add(a, &self.neg(b)?)
    }
}

/// The integers, represented by `T`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers<T>(PhantomData<T>);

impl<T> Integers<T> {
    pub const fn new() -> Self {
        Integers(PhantomData)
    }
}

impl<T: IntScalar> Ring for Integers<T> {
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }

    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }

    fn embed(&self, v: i64) -> Result<T, Overflow> {
        T::from_i64(v).ok_or(Overflow)
    }

    fn add(&self, a: &T, b: &T) -> Result<T, Overflow> {
        a.checked_add(b).ok_or(Overflow)
    }

    fn sub(&self, a: &T, b: &T) -> Result<T, Overflow> {
        a.checked_sub(b).ok_or(Overflow)
    }

    fn mul(&self, a: &T, b: &T) -> Result<T, Overflow> {
        a.checked_mul(b).ok_or(Overflow)
    }

    fn neg(&self, a: &T) -> Result<T, Overflow> {
        T::zero().checked_sub(a).ok_or(Overflow)
    }

    fn unit_inverse(&self, a: &T) -> Option<T> {
        // the units of Z are +1 and -1, each its own inverse
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
}

/// The prime field Z/p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

/// Largest prime below 2^32; used when a mod-p rank stands in for a rank over Q.
pub const LARGE_PRIME: u64 = 4_294_967_291;

impl PrimeField {
    /// `None` unless `p` is prime.
    pub fn new(p: u64) -> Option<Self> {
        is_prime(p).then_some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, base, self.p);
            }
            base = mul_mod(base, base, self.p);
            exp >>= 1;
        }
        acc
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn embed(&self, v: i64) -> Result<u64, Overflow> {
        Ok(self.reduce(v))
    }

    fn add(&self, a: &u64, b: &u64) -> Result<u64, Overflow> {
        Ok(((*a as u128 + *b as u128) % self.p as u128) as u64)
    }

    fn mul(&self, a: &u64, b: &u64) -> Result<u64, Overflow> {
        Ok(mul_mod(*a, *b, self.p))
    }

    fn neg(&self, a: &u64) -> Result<u64, Overflow> {
        Ok(if *a == 0 { 0 } else { self.p - a })
    }

    fn unit_inverse(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
}

/// Deterministic trial division; moduli here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(LARGE_PRIME));
        assert!(PrimeField::new(4).is_none());
    }

    #[test]
    fn field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7u64 {
            let inv = f.unit_inverse(&a).unwrap();
            assert_eq!(f.mul(&a, &inv).unwrap(), 1);
        }
        assert_eq!(f.unit_inverse(&0), None);
        assert_eq!(f.embed(-1).unwrap(), 6);
    }

    #[test]
    fn fixed_width_overflow_is_reported() {
        let z = Integers::<i64>::new();
        assert_eq!(z.mul(&i64::MAX, &2), Err(Overflow));
        let big = Integers::<BigInt>::new();
        let m = BigInt::from(i64::MAX);
        assert!(big.mul(&m, &m).is_ok());
    }

    #[test]
    fn integer_units() {
        let z = Integers::<i64>::new();
        assert_eq!(z.unit_inverse(&-1), Some(-1));
        assert_eq!(z.unit_inverse(&2), None);
    }
}
