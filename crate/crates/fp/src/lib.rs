//! Exact linear algebra over the prime fields F_p for p in {2, 3, 5, 7}.
//!
//! Everything here is exact modular arithmetic; there is no floating point
//! anywhere in the workspace. Matrices are dense by default, with a sparse
//! elimination path that kicks in above a size threshold. Both paths use the
//! same pivoting rule (leftmost column, first nonzero row) so results are
//! bit-identical regardless of which path ran.

mod matrix;
mod subquotient;

pub use matrix::{FpMatrix, Rref, SPARSE_THRESHOLD};
pub use subquotient::{subquotient, Echelon, Subquotient, SubquotientError};

/// The prime field F_p. Supported moduli are 2, 3, 5 and 7.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct PrimeField {
    p: u32,
}

/// Error raised when constructing a `PrimeField` with an unsupported modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsupportedPrime(pub u32);

impl std::fmt::Display for UnsupportedPrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "unsupported prime {}; supported primes are 2, 3, 5, 7", self.0)
    }
}

impl std::error::Error for UnsupportedPrime {}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, UnsupportedPrime> {
        match p {
            2 | 3 | 5 | 7 => Ok(PrimeField { p }),
            _ => Err(UnsupportedPrime(p)),
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduce an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        (x.rem_euclid(self.p as i64)) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b % self.p) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        (self.p - a % self.p) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    /// Multiplicative inverse by Fermat's little theorem. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        let a = a % self.p;
        assert!(a != 0, "cannot invert 0 mod {}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn pow(&self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}
