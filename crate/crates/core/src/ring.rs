//! Exact coefficient rings: prime fields F_p, extension fields F_{p^e},
//! residue rings Z/m, and the integers Z.
//!
//! A [`Ring`] is a cheap handle (internally reference counted) describing one
//! of the four kinds; a [`Scalar`] is an element owned by a specific ring and
//! is kept in canonical reduced form after every operation, so equality of
//! scalars is representation equality.
//!
//! Construction is deterministic: building the same ring twice (including the
//! default extension-field modulus) yields identical objects.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::guards;

/// The four supported ring kinds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingRepr {
    PrimeField {
        p: u64,
    },
    /// F_{p^e} = F_p[x] / (modulus). `modulus` holds the coefficients of
    /// 1, x, ..., x^{e-1}; the leading coefficient of x^e is an implicit 1.
    ExtField {
        p: u64,
        e: u32,
        modulus: Vec<u64>,
    },
    IntMod {
        m: u64,
    },
    Integers,
}

/// Handle to a validated coefficient ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    repr: Arc<RingRepr>,
}

/// Canonical representative of a ring element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScalarRepr {
    /// Integer in [0, p) or [0, m).
    Mod(u64),
    /// Coefficient vector of length e, low to high, each in [0, p).
    Poly(Vec<u64>),
    /// Arbitrary-precision integer.
    Int(BigInt),
}

/// Element of a [`Ring`], always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: Ring,
    repr: ScalarRepr,
}

/// Deterministic primality check by trial division; adequate at guard scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3u64;
    while f.checked_mul(f).is_some_and(|s| s <= n) {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

// ---------------------------------------------------------------------------
// Dense polynomial arithmetic over F_p, used only for extension fields.
// Polynomials are coefficient vectors low-to-high with no trailing zeros.
// ---------------------------------------------------------------------------
mod fp_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &[u64]) -> Option<usize> {
        if a.is_empty() {
            None
        } else {
            Some(a.len() - 1)
        }
    }

    pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + y) % p;
        }
        trim(out)
    }

    pub fn scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
        trim(
            a.iter()
                .map(|&x| ((x as u128 * c as u128) % p as u128) as u64)
                .collect(),
        )
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        add(a, &scale(b, p - 1, p), p)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        trim(out)
    }

    fn inv_mod_p(a: u64, p: u64) -> u64 {
        // p is prime here, so Fermat suffices.
        let mut result = 1u64;
        let mut base = a % p;
        let mut exp = p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = ((result as u128 * base as u128) % p as u128) as u64;
            }
            base = ((base as u128 * base as u128) % p as u128) as u64;
            exp >>= 1;
        }
        result
    }

    /// Division with remainder; `b` must be nonzero.
    pub fn divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let db = deg(b).expect("division by zero polynomial");
        let lead_inv = inv_mod_p(b[db], p);
        let mut rem = a.to_vec();
        let mut quot = vec![0u64; a.len().saturating_sub(db)];
        while let Some(dr) = deg(&rem) {
            if dr < db {
                break;
            }
            let c = ((rem[dr] as u128 * lead_inv as u128) % p as u128) as u64;
            quot[dr - db] = c;
            for i in 0..=db {
                let t = ((b[i] as u128 * c as u128) % p as u128) as u64;
                rem[dr - db + i] = (rem[dr - db + i] + p - t) % p;
            }
            rem = trim(rem);
        }
        (trim(quot), rem)
    }

    /// Inverse of `a` modulo the monic polynomial `m` via extended Euclid.
    /// Returns `None` when gcd(a, m) is not constant.
    pub fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let (mut r0, mut r1) = (m.to_vec(), trim(a.to_vec()));
        let (mut s0, mut s1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = divmod(&r0, &r1, p);
            let s = sub(&s0, &mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        match deg(&r0) {
            Some(0) => Some(scale(&s0, inv_mod_p(r0[0], p), p)),
            _ => None,
        }
    }

    /// Exhaustive factor search: reducible iff some monic divisor of degree
    /// 1..=deg/2 divides.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = match deg(f) {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        if d == 1 {
            return true;
        }
        for k in 1..=d / 2 {
            let count = (p as u128).pow(k as u32);
            for idx in 0..count {
                let mut g = index_to_coeffs(idx, k, p);
                g.push(1); // monic of degree k
                let (_, rem) = divmod(f, &g, p);
                if rem.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Decodes `idx` into `len` base-p digits, first digit most significant,
    /// so increasing `idx` walks tuples (c_0, ..., c_{len-1}) in
    /// lexicographic order.
    pub fn index_to_coeffs(idx: u128, len: usize, p: u64) -> Vec<u64> {
        let mut out = vec![0u64; len];
        let mut rest = idx;
        for slot in out.iter_mut().rev() {
            *slot = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        out
    }
}

impl Ring {
    fn from_repr(repr: RingRepr) -> Ring {
        Ring {
            repr: Arc::new(repr),
        }
    }

    /// The prime field F_p.
    pub fn prime_field(p: u64) -> Result<Ring> {
        guards::check("prime field modulus", p as u128, guards::MODULUS_LIMIT)?;
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        Ok(Ring::from_repr(RingRepr::PrimeField { p }))
    }

    /// F_{p^e} with the default modulus: the lexicographically least monic
    /// irreducible of degree e, coefficients compared low-to-high.
    pub fn ext_field(p: u64, e: u32) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 {
            return Err(Error::BadParameters("extension degree must be >= 1".into()));
        }
        let card = (p as u128).checked_pow(e).ok_or(Error::GuardExceeded {
            what: "extension field cardinality",
            actual: u128::MAX,
            limit: guards::EXT_CARD_LIMIT,
        })?;
        guards::check("extension field cardinality", card, guards::EXT_CARD_LIMIT)?;
        for idx in 0..card {
            let low = fp_poly::index_to_coeffs(idx, e as usize, p);
            let mut full = low.clone();
            full.push(1);
            if fp_poly::is_irreducible(&full, p) {
                return Ring::ext_field_with_modulus(p, e, &low);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    /// F_{p^e} with an explicit monic modulus given by its low coefficients
    /// (length e; the leading 1 is implicit).
    pub fn ext_field_with_modulus(p: u64, e: u32, modulus_low: &[u64]) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 || modulus_low.len() != e as usize {
            return Err(Error::BadParameters(format!(
                "modulus must list exactly {e} coefficients"
            )));
        }
        let card = (p as u128).checked_pow(e).ok_or(Error::GuardExceeded {
            what: "extension field cardinality",
            actual: u128::MAX,
            limit: guards::EXT_CARD_LIMIT,
        })?;
        guards::check("extension field cardinality", card, guards::EXT_CARD_LIMIT)?;
        let modulus: Vec<u64> = modulus_low.iter().map(|&c| c % p).collect();
        let mut full = modulus.clone();
        full.push(1);
        if !fp_poly::is_irreducible(&full, p) {
            return Err(Error::ReducibleModulus { p });
        }
        Ok(Ring::from_repr(RingRepr::ExtField { p, e, modulus }))
    }

    /// The residue ring Z/m, m >= 2 (composite m allowed).
    pub fn int_mod(m: u64) -> Result<Ring> {
        if m < 2 {
            return Err(Error::ModulusTooSmall(m));
        }
        guards::check("residue ring modulus", m as u128, guards::MODULUS_LIMIT)?;
        Ok(Ring::from_repr(RingRepr::IntMod { m }))
    }

    /// The ring of integers with arbitrary-precision elements.
    pub fn integers() -> Ring {
        Ring::from_repr(RingRepr::Integers)
    }

    /// Parses a compact ring description: `F2`, `F9`, `Z/6`, `Z`, or the
    /// explicit extension form `GF(p^e; c0,c1,...)`.
    pub fn parse(text: &str) -> Result<Ring> {
        let t = text.trim();
        if t == "Z" {
            return Ok(Ring::integers());
        }
        if let Some(m) = t.strip_prefix("Z/") {
            let m: u64 = m
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {t:?}")))?;
            return Ring::int_mod(m);
        }
        if let Some(body) = t.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')) {
            let (head, coeffs) = body
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("expected GF(p^e; ...) in {t:?}")))?;
            let (p, e) = head
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("expected p^e in {t:?}")))?;
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad p in {t:?}")))?;
            let e: u32 = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad e in {t:?}")))?;
            let low: Vec<u64> = coeffs
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient in {t:?}")))
                })
                .collect::<Result<_>>()?;
            return Ring::ext_field_with_modulus(p, e, &low);
        }
        if let Some(q) = t.strip_prefix('F') {
            let q: u64 = q
                .parse()
                .map_err(|_| Error::Parse(format!("bad field size in {t:?}")))?;
            if q < 2 {
                return Err(Error::NonPrime(q));
            }
            // Factor q as p^e.
            let mut p = q;
            for f in 2..q {
                if f * f > q {
                    break;
                }
                if q % f == 0 {
                    p = f;
                    break;
                }
            }
            let mut e = 0u32;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if rest != 1 {
                return Err(Error::NonPrime(q));
            }
            return if e == 1 {
                Ring::prime_field(p)
            } else {
                Ring::ext_field(p, e)
            };
        }
        Err(Error::Parse(format!("unrecognized ring {t:?}")))
    }

    pub fn repr(&self) -> &RingRepr {
        &self.repr
    }

    pub fn is_field(&self) -> bool {
        matches!(
            *self.repr,
            RingRepr::PrimeField { .. } | RingRepr::ExtField { .. }
        )
    }

    pub fn is_integers(&self) -> bool {
        matches!(*self.repr, RingRepr::Integers)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_integers()
    }

    /// Number of elements, `None` for Z.
    pub fn cardinality(&self) -> Option<u128> {
        match &*self.repr {
            RingRepr::PrimeField { p } => Some(*p as u128),
            RingRepr::ExtField { p, e, .. } => Some((*p as u128).pow(*e)),
            RingRepr::IntMod { m } => Some(*m as u128),
            RingRepr::Integers => None,
        }
    }

    /// Characteristic of the ring (0 for Z).
    pub fn characteristic(&self) -> u64 {
        match &*self.repr {
            RingRepr::PrimeField { p } | RingRepr::ExtField { p, .. } => *p,
            RingRepr::IntMod { m } => *m,
            RingRepr::Integers => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        let repr = match &*self.repr {
            RingRepr::PrimeField { .. } | RingRepr::IntMod { .. } => ScalarRepr::Mod(0),
            RingRepr::ExtField { e, .. } => ScalarRepr::Poly(vec![0; *e as usize]),
            RingRepr::Integers => ScalarRepr::Int(BigInt::zero()),
        };
        Scalar {
            ring: self.clone(),
            repr,
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    /// Canonical image of a machine integer.
    pub fn from_int(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    /// Canonical image of an arbitrary-precision integer.
    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        let repr = match &*self.repr {
            RingRepr::PrimeField { p } => ScalarRepr::Mod(reduce_big(v, *p)),
            RingRepr::IntMod { m } => ScalarRepr::Mod(reduce_big(v, *m)),
            RingRepr::ExtField { p, e, .. } => {
                let mut c = vec![0u64; *e as usize];
                c[0] = reduce_big(v, *p);
                ScalarRepr::Poly(c)
            }
            RingRepr::Integers => ScalarRepr::Int(v.clone()),
        };
        Scalar {
            ring: self.clone(),
            repr,
        }
    }

    /// Element at position `idx` in the canonical enumeration order
    /// (numeric; extension-field coefficient vectors count with c_0 least
    /// significant).
    pub fn element_from_index(&self, idx: u128) -> Scalar {
        match &*self.repr {
            RingRepr::PrimeField { p } => Scalar {
                ring: self.clone(),
                repr: ScalarRepr::Mod((idx % *p as u128) as u64),
            },
            RingRepr::IntMod { m } => Scalar {
                ring: self.clone(),
                repr: ScalarRepr::Mod((idx % *m as u128) as u64),
            },
            RingRepr::ExtField { p, e, .. } => {
                let mut c = vec![0u64; *e as usize];
                let mut rest = idx;
                for slot in c.iter_mut() {
                    *slot = (rest % *p as u128) as u64;
                    rest /= *p as u128;
                }
                Scalar {
                    ring: self.clone(),
                    repr: ScalarRepr::Poly(c),
                }
            }
            RingRepr::Integers => self.from_bigint(&BigInt::from(idx)),
        }
    }

    /// All elements, each exactly once, in canonical order.
    pub fn enumerate(&self) -> Result<Vec<Scalar>> {
        let card = self.cardinality().ok_or(Error::InfiniteRing)?;
        guards::check("ring enumeration", card, guards::ENUM_LIMIT)?;
        Ok((0..card).map(|i| self.element_from_index(i)).collect())
    }

    fn owns(&self, a: &Scalar) {
        assert!(
            self == &a.ring,
            "scalar belongs to {} but the operation ring is {}",
            a.ring,
            self
        );
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.owns(a);
        self.owns(b);
        let repr = match (&*self.repr, &a.repr, &b.repr) {
            (RingRepr::PrimeField { p }, ScalarRepr::Mod(x), ScalarRepr::Mod(y)) => {
                ScalarRepr::Mod(add_mod(*x, *y, *p))
            }
            (RingRepr::IntMod { m }, ScalarRepr::Mod(x), ScalarRepr::Mod(y)) => {
                ScalarRepr::Mod(add_mod(*x, *y, *m))
            }
            (RingRepr::ExtField { p, e, .. }, ScalarRepr::Poly(x), ScalarRepr::Poly(y)) => {
                let mut c = fp_poly::add(x, y, *p);
                c.resize(*e as usize, 0);
                ScalarRepr::Poly(c)
            }
            (RingRepr::Integers, ScalarRepr::Int(x), ScalarRepr::Int(y)) => {
                ScalarRepr::Int(x + y)
            }
            _ => unreachable!("scalar representation matches its ring"),
        };
        Scalar {
            ring: self.clone(),
            repr,
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.owns(a);
        let repr = match (&*self.repr, &a.repr) {
            (RingRepr::PrimeField { p }, ScalarRepr::Mod(x)) => {
                ScalarRepr::Mod(if *x == 0 { 0 } else { p - x })
            }
            (RingRepr::IntMod { m }, ScalarRepr::Mod(x)) => {
                ScalarRepr::Mod(if *x == 0 { 0 } else { m - x })
            }
            (RingRepr::ExtField { p, .. }, ScalarRepr::Poly(x)) => ScalarRepr::Poly(
                x.iter()
                    .map(|&c| if c == 0 { 0 } else { p - c })
                    .collect(),
            ),
            (RingRepr::Integers, ScalarRepr::Int(x)) => ScalarRepr::Int(-x),
            _ => unreachable!(),
        };
        Scalar {
            ring: self.clone(),
            repr,
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.owns(a);
        self.owns(b);
        let repr = match (&*self.repr, &a.repr, &b.repr) {
            (RingRepr::PrimeField { p }, ScalarRepr::Mod(x), ScalarRepr::Mod(y)) => {
                ScalarRepr::Mod(mul_mod(*x, *y, *p))
            }
            (RingRepr::IntMod { m }, ScalarRepr::Mod(x), ScalarRepr::Mod(y)) => {
                ScalarRepr::Mod(mul_mod(*x, *y, *m))
            }
            (RingRepr::ExtField { p, e, modulus }, ScalarRepr::Poly(x), ScalarRepr::Poly(y)) => {
                let prod = fp_poly::mul(x, y, *p);
                let mut full_mod = modulus.clone();
                full_mod.push(1);
                let (_, mut rem) = fp_poly::divmod(&prod, &full_mod, *p);
                rem.resize(*e as usize, 0);
                ScalarRepr::Poly(rem)
            }
            (RingRepr::Integers, ScalarRepr::Int(x), ScalarRepr::Int(y)) => {
                ScalarRepr::Int(x * y)
            }
            _ => unreachable!(),
        };
        Scalar {
            ring: self.clone(),
            repr,
        }
    }

    pub fn pow(&self, a: &Scalar, mut exp: u64) -> Scalar {
        let mut result = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        result
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.owns(a);
        match (&*self.repr, &a.repr) {
            (RingRepr::PrimeField { .. }, ScalarRepr::Mod(x)) => *x != 0,
            (RingRepr::IntMod { m }, ScalarRepr::Mod(x)) => x.gcd(m) == 1,
            (RingRepr::ExtField { .. }, ScalarRepr::Poly(x)) => x.iter().any(|&c| c != 0),
            (RingRepr::Integers, ScalarRepr::Int(x)) => x.abs().is_one(),
            _ => unreachable!(),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        self.owns(a);
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let repr = match (&*self.repr, &a.repr) {
            (RingRepr::PrimeField { p }, ScalarRepr::Mod(x)) => {
                ScalarRepr::Mod(inv_mod_u64(*x, *p).expect("nonzero in a prime field is a unit"))
            }
            (RingRepr::IntMod { m }, ScalarRepr::Mod(x)) => {
                ScalarRepr::Mod(inv_mod_u64(*x, *m).expect("checked gcd above"))
            }
            (RingRepr::ExtField { p, e, modulus }, ScalarRepr::Poly(x)) => {
                let mut full_mod = modulus.clone();
                full_mod.push(1);
                let mut c = fp_poly::inv_mod(x, &full_mod, *p).expect("irreducible modulus");
                c.resize(*e as usize, 0);
                ScalarRepr::Poly(c)
            }
            (RingRepr::Integers, ScalarRepr::Int(x)) => ScalarRepr::Int(x.clone()),
            _ => unreachable!(),
        };
        Ok(Scalar {
            ring: self.clone(),
            repr,
        })
    }

    /// Parses a scalar from its canonical text form.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        match &*self.repr {
            RingRepr::PrimeField { .. } | RingRepr::IntMod { .. } | RingRepr::Integers => {
                let v: BigInt = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad scalar {t:?}")))?;
                Ok(self.from_bigint(&v))
            }
            RingRepr::ExtField { p, e, .. } => {
                let coeffs: Vec<i64> = t
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad scalar {t:?}")))
                    })
                    .collect::<Result<_>>()?;
                if coeffs.len() != *e as usize {
                    return Err(Error::Parse(format!(
                        "expected {e} coefficients in {t:?}"
                    )));
                }
                let c = coeffs
                    .iter()
                    .map(|&v| (v.rem_euclid(*p as i64)) as u64)
                    .collect();
                Ok(Scalar {
                    ring: self.clone(),
                    repr: ScalarRepr::Poly(c),
                })
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            RingRepr::PrimeField { p } => write!(f, "F{p}"),
            RingRepr::ExtField { p, e, modulus } => {
                let coeffs: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                write!(f, "GF({p}^{e}; {})", coeffs.join(","))
            }
            RingRepr::IntMod { m } => write!(f, "Z/{m}"),
            RingRepr::Integers => write!(f, "Z"),
        }
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl Scalar {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn repr(&self) -> &ScalarRepr {
        &self.repr
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            ScalarRepr::Mod(x) => *x == 0,
            ScalarRepr::Poly(c) => c.iter().all(|&x| x == 0),
            ScalarRepr::Int(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    /// Checked addition; errors with `RingMismatch` on foreign operands.
    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        Ok(self.ring.add(self, rhs))
    }

    /// Checked multiplication; errors with `RingMismatch` on foreign operands.
    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        Ok(self.ring.mul(self, rhs))
    }

    pub fn checked_inv(&self) -> Result<Scalar> {
        self.ring.inv(self)
    }

    /// The integer representative for Z, Z/m, and prime-field scalars.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match &self.repr {
            ScalarRepr::Mod(x) => Some(BigInt::from(*x)),
            ScalarRepr::Int(x) => Some(x.clone()),
            ScalarRepr::Poly(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            ScalarRepr::Mod(x) => write!(f, "{x}"),
            ScalarRepr::Int(x) => write!(f, "{x}"),
            ScalarRepr::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn reduce_big(v: &BigInt, m: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(m));
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}
