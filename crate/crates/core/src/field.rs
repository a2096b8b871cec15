//! Arithmetic in the binary extension field GF(2^m), 1 <= m <= 16.
//!
//! A [`FieldSpec`] is defined by its extension degree, a reduction polynomial
//! and a generator. The generator is checked to be primitive when the spec is
//! built; that check also proves the polynomial irreducible, because a unit of
//! order 2^m - 1 makes every nonzero residue invertible.
//!
//! Multiplication uses log/antilog tables derived from the generator. Elements
//! are plain values; the spec that owns them is passed explicitly to every
//! operation.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} outside 1..={MAX_DEGREE}")]
    UnsupportedDegree(u32),
    #[error("reduction polynomial {poly:#x} is not a degree-{m} polynomial with constant term 1")]
    BadReductionPoly { m: u32, poly: u32 },
    #[error("generator {generator:#x} is not an element of GF(2^{m})")]
    GeneratorOutOfRange { m: u32, generator: u32 },
    #[error("generator {generator:#x} has order {order}, expected {expected} (not primitive for poly {poly:#x})")]
    NotPrimitive {
        generator: u32,
        poly: u32,
        order: u32,
        expected: u32,
    },
    #[error("value {value:#x} does not belong to GF(2^{m})")]
    ForeignElement { m: u32, value: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// A field element, stored as a polynomial over GF(2) in bit form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw value without checking it against a field. Use
    /// [`FieldSpec::element`] for a checked constructor.
    pub const fn from_raw(value: u16) -> Self {
        FieldElement(value)
    }

    pub const fn value(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::LowerHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

#[derive(Debug)]
struct Tables {
    // exp has 2*(q-1) entries so that log sums never need a modulo.
    exp: Vec<u16>,
    log: Vec<u32>,
}

/// The defining parameters of GF(2^m) plus precomputed tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    m: u32,
    reduction_poly: u32,
    generator: FieldElement,
    tables: Arc<Tables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("m", &self.m)
            .field("reduction_poly", &format_args!("{:#x}", self.reduction_poly))
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.reduction_poly == other.reduction_poly
            && self.generator == other.generator
    }
}

impl Eq for FieldSpec {}

impl Default for FieldSpec {
    /// GF(2^8) with x^8 + x^4 + x^3 + x^2 + 1 and generator 2.
    fn default() -> Self {
        FieldSpec::new(8, 0x11D, 0x02).expect("default field is valid")
    }
}

/// Carryless multiply of two polynomials followed by reduction. Only used to
/// build the tables.
fn mul_by_reduction(a: u32, b: u32, m: u32, poly: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    let top = 1u32 << m;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= poly;
        }
    }
    acc
}

impl FieldSpec {
    /// Builds GF(2^m) from a reduction polynomial bitmask (bit i is the
    /// coefficient of x^i) and a generator, rejecting non-primitive generators.
    pub fn new(m: u32, reduction_poly: u32, generator: u32) -> Result<Self, FieldError> {
        if m == 0 || m > MAX_DEGREE {
            return Err(FieldError::UnsupportedDegree(m));
        }
        if reduction_poly >> m != 1 || reduction_poly & 1 == 0 {
            return Err(FieldError::BadReductionPoly {
                m,
                poly: reduction_poly,
            });
        }
        let size = 1u32 << m;
        if generator >= size {
            return Err(FieldError::GeneratorOutOfRange { m, generator });
        }
        let group_order = size - 1;
        let expected_order_fail = |order| FieldError::NotPrimitive {
            generator,
            poly: reduction_poly,
            order,
            expected: group_order,
        };
        if generator == 0 || (m > 1 && generator == 1) {
            return Err(expected_order_fail(0));
        }

        let mut exp = vec![0u16; 2 * group_order as usize];
        let mut log = vec![u32::MAX; size as usize];
        let mut x = 1u32;
        for i in 0..group_order {
            if log[x as usize] != u32::MAX {
                return Err(expected_order_fail(i));
            }
            exp[i as usize] = x as u16;
            exp[(i + group_order) as usize] = x as u16;
            log[x as usize] = i;
            x = mul_by_reduction(x, generator, m, reduction_poly);
        }
        if x != 1 {
            // The walk never repeated but did not close: cannot happen for a
            // unit, so the poly is reducible and generator a zero divisor.
            return Err(expected_order_fail(group_order + 1));
        }

        Ok(FieldSpec {
            m,
            reduction_poly,
            generator: FieldElement(generator as u16),
            tables: Arc::new(Tables { exp, log }),
        })
    }

    /// The two-element field GF(2), reduction polynomial x + 1, generator 1.
    pub fn binary() -> Self {
        FieldSpec::new(1, 0b11, 1).expect("GF(2) is valid")
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn reduction_poly(&self) -> u32 {
        self.reduction_poly
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Number of elements, q = 2^m.
    pub fn order(&self) -> u32 {
        1 << self.m
    }

    /// Size of the multiplicative group, 2^m - 1.
    pub fn group_order(&self) -> u32 {
        self.order() - 1
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        u32::from(a.0) < self.order()
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if value < self.order() {
            Ok(FieldElement(value as u16))
        } else {
            Err(FieldError::ForeignElement { m: self.m, value })
        }
    }

    pub fn check(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.element(u32::from(a.0))
    }

    /// Iterator over every element, 0 first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(|v| FieldElement(v as u16))
    }

    /// Characteristic-2 sum. Also serves as subtraction.
    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, b)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let t = &self.tables;
        let idx = t.log[a.0 as usize] + t.log[b.0 as usize];
        FieldElement(t.exp[idx as usize])
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        let a = self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.group_order();
        let l = self.tables.log[a.0 as usize];
        Ok(FieldElement(self.tables.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(self.check(a)?, self.inv(b)?))
    }

    /// `a^e`. `pow(0, 0)` is 1.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        debug_assert!(self.contains(a));
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = u64::from(self.group_order());
        let l = u64::from(self.tables.log[a.0 as usize]);
        FieldElement(self.tables.exp[((l * (e % n)) % n) as usize])
    }

    /// `generator^e`.
    pub fn generator_pow(&self, e: u64) -> FieldElement {
        self.pow(self.generator, e)
    }

    /// Discrete log to the generator base; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        if a.is_zero() || !self.contains(a) {
            None
        } else {
            Some(self.tables.log[a.0 as usize])
        }
    }

    /// Hex digits needed to print any element.
    pub fn hex_width(&self) -> usize {
        self.m.div_ceil(4) as usize
    }

    /// Zero-padded lowercase hex of an element, no prefix.
    pub fn to_hex(&self, a: FieldElement) -> String {
        format!("{:0width$x}", a.0, width = self.hex_width())
    }

    pub fn params(&self) -> FieldParams {
        FieldParams {
            m: self.m,
            reduction_poly: format!("{:#x}", self.reduction_poly),
            generator: format!("{:#x}", self.generator.0),
        }
    }
}

/// Serializable form of a [`FieldSpec`]: `{m, reduction_poly, generator}` with
/// hex strings for the polynomial and generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub m: u32,
    pub reduction_poly: String,
    pub generator: String,
}

impl TryFrom<&FieldParams> for FieldSpec {
    type Error = crate::Error;

    fn try_from(p: &FieldParams) -> Result<Self, Self::Error> {
        let poly = parse_hex(&p.reduction_poly)?;
        let generator = parse_hex(&p.generator)?;
        Ok(FieldSpec::new(p.m, poly, generator)?)
    }
}

/// Parses `0x11d`, `0X11D` or bare `11d`.
pub fn parse_hex(s: &str) -> Result<u32, crate::Error> {
    let t = s.trim();
    let digits = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    u32::from_str_radix(digits, 16).map_err(|_| crate::Error::MalformedHex(s.to_string()))
}

/// Well-known primitive polynomials (with generator x) for each supported
/// degree, used when a caller only picks m.
pub fn default_poly(m: u32) -> Option<u32> {
    Some(match m {
        1 => 0b11,
        2 => 0b111,
        3 => 0b1011,
        4 => 0b1_0011,
        5 => 0b10_0101,
        6 => 0b100_0011,
        7 => 0b1000_1001,
        8 => 0x11D,
        9 => 0x211,
        10 => 0x409,
        11 => 0x805,
        12 => 0x1053,
        13 => 0x201B,
        14 => 0x4443,
        15 => 0x8003,
        16 => 0x1100B,
        _ => return None,
    })
}

/// GF(2^m) with [`default_poly`] and generator x (or 1 for m = 1).
pub fn standard_field(m: u32) -> Result<FieldSpec, FieldError> {
    let poly = default_poly(m).ok_or(FieldError::UnsupportedDegree(m))?;
    FieldSpec::new(m, poly, if m == 1 { 1 } else { 2 })
}
