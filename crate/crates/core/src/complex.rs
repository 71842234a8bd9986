//! Complex arithmetic used by the factor functions.
//!
//! The composite constants are products of *integer* powers of complex
//! phase-space functions; rational exponents never appear because the
//! denominators are cleared before exponentiation (see `invariants`).

pub use num_complex::Complex64 as ComplexValue;

/// `z^n` for `n >= 0` by binary exponentiation, with `z^0 = 1` (also at z = 0).
///
/// Agrees with repeated multiplication up to the usual reassociation
/// rounding; exponents in this crate stay small (<= ~20).
pub fn complex_pow_int(z: ComplexValue, n: u32) -> ComplexValue {
    let mut acc = ComplexValue::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    acc
}
