//! Exact arithmetic in `F_{p^h}`, Frobenius maps and linearized polynomials.
//!
//! A [`Field`] fixes a monic primitive modulus of degree `h` over `F_p` and
//! represents elements as coefficient vectors on the power basis
//! `1, e, ..., e^{h-1}`, where `e` is the residue of the polynomial
//! variable. The modulus is chosen so that `e` always generates the
//! multiplicative group; multiplication runs on exp/log tables, addition on
//! base-`p` digits. Fields are immutable once built and cheap to clone.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::mat::Mat;
use crate::Result;

/// Default ceiling on `p^h`. Everything here is meant for small fields.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 16;

/// An element of a [`Field`], stored as the base-`p` integer encoding of its
/// coefficient vector: `a_0 + a_1 p + ... + a_{h-1} p^{h-1}`.
///
/// Elements are plain indices; all arithmetic goes through the owning
/// [`Field`]. Index order (`0, 1, 2, ...`) is the canonical element order
/// used by the file formats.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Fe(pub(crate) u32);

impl Fe {
    /// Position of the element in canonical order.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The additive identity of every field.
    pub const ZERO: Fe = Fe(0);
    /// The multiplicative identity of every field.
    pub const ONE: Fe = Fe(1);

    /// True iff this is the zero element.
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u64,
    h: usize,
    q: u64,
    modulus: Vec<u64>,
    /// exp[i] = index of e^i, 0 <= i < q-1
    exp: Vec<u32>,
    /// log[idx] for idx >= 1
    log: Vec<u32>,
    /// base-p digits, h per element
    digits: Vec<u16>,
    /// additive inverses
    neg: Vec<u32>,
    /// x -> x^p
    frob: Vec<u32>,
    /// the prime subfield, None when h == 1
    prime: Option<Field>,
}

/// The field `F_{p^h}` with a fixed primitive modulus.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}(p={},h={})", self.q(), self.p(), self.h())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p() == other.p()
                && self.h() == other.h()
                && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two polynomials over F_p and reduce by the monic `modulus`.
fn polymul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let h = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // reduce: x^h = -(modulus[0] + ... + modulus[h-1] x^{h-1})
    for d in (h..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for i in 0..h {
            let sub = (c * modulus[i]) % p;
            prod[d - h + i] = (prod[d - h + i] + p - sub) % p;
        }
    }
    prod.truncate(h.max(1));
    prod
}

/// Trial-division irreducibility test for a monic polynomial over F_p.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let h = modulus.len() - 1;
    if h == 1 {
        return true;
    }
    // Try all monic divisors of degree 1..=h/2.
    let mut deg = 1;
    while 2 * deg <= h {
        let count = p.pow(deg as u32);
        for enc in 0..count {
            // candidate divisor: x^deg + c_{deg-1} x^{deg-1} + ... + c_0
            let mut div = Vec::with_capacity(deg + 1);
            let mut v = enc;
            for _ in 0..deg {
                div.push(v % p);
                v /= p;
            }
            div.push(1);
            if poly_divides(&div, modulus, p) {
                return false;
            }
        }
        deg += 1;
    }
    true
}

/// Does monic `div` divide monic `f` over F_p?
fn poly_divides(div: &[u64], f: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = f.to_vec();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let deg = rem.len() - 1;
        if lead != 0 {
            for i in 0..=dd {
                let sub = (lead * div[i]) % p;
                rem[deg - dd + i] = (rem[deg - dd + i] + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// Fixed modulus overrides. `(3,2)` uses `x^2 - x - 1` so that `e^2 = e + 1`.
fn modulus_override(p: u64, h: usize) -> Option<Vec<u64>> {
    match (p, h) {
        (3, 2) => Some(vec![2, 2, 1]), // x^2 + 2x + 2 = x^2 - x - 1 over F_3
        _ => None,
    }
}

impl Field {
    /// Build `F_{p^h}` with the crate's deterministic modulus choice: the
    /// lexicographically first monic polynomial of degree `h` whose residue
    /// `x` generates the multiplicative group, with a fixed override for
    /// `(3,2)` so that `e^2 = e + 1`.
    pub fn new(p: u64, h: usize) -> Result<Field> {
        Self::new_bounded(p, h, DEFAULT_FIELD_BOUND)
    }

    /// As [`Field::new`] with an explicit ceiling on `p^h`.
    pub fn new_bounded(p: u64, h: usize, bound: u64) -> Result<Field> {
        Self::check_params(p, h, bound)?;
        if let Some(m) = modulus_override(p, h) {
            return Self::build(p, h, m);
        }
        // Lexicographic search over constant-first coefficient encodings.
        let count = p.pow(h as u32);
        for enc in 0..count {
            let mut m = Vec::with_capacity(h + 1);
            let mut v = enc;
            for _ in 0..h {
                m.push(v % p);
                v /= p;
            }
            m.push(1);
            if let Ok(f) = Self::build(p, h, m) {
                return Ok(f);
            }
        }
        // Unreachable: every finite field has a primitive polynomial.
        Err(Error::NonPrimitiveModulus)
    }

    /// Build `F_{p^h}` from a caller-supplied monic modulus, given as its
    /// `h+1` coefficients in ascending degree order. The modulus must be
    /// irreducible and `x` must be primitive modulo it.
    pub fn with_modulus(p: u64, h: usize, modulus: &[u64]) -> Result<Field> {
        Self::check_params(p, h, DEFAULT_FIELD_BOUND)?;
        if modulus.len() != h + 1 {
            return Err(Error::BadModulus(format!(
                "expected {} coefficients, got {}",
                h + 1,
                modulus.len()
            )));
        }
        if modulus[h] != 1 {
            return Err(Error::BadModulus("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus(format!(
                "coefficients must lie in 0..{p}"
            )));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }
        Self::build(p, h, modulus.to_vec())
    }

    fn check_params(p: u64, h: usize, bound: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if h == 0 {
            return Err(Error::BadModulus("extension degree must be >= 1".into()));
        }
        let size = (p as u128).checked_pow(h as u32).unwrap_or(u128::MAX);
        if size > bound as u128 {
            return Err(Error::FieldTooLarge {
                size,
                bound: bound as u128,
            });
        }
        Ok(())
    }

    /// Construct tables; fails with `NonPrimitiveModulus` when the orbit of
    /// `x` does not exhaust the multiplicative group (which also rules out
    /// reducible moduli, since a non-field quotient has fewer units).
    fn build(p: u64, h: usize, modulus: Vec<u64>) -> Result<Field> {
        let q = p.pow(h as u32);
        let encode = |coeffs: &[u64]| -> u32 {
            let mut idx = 0u64;
            for &c in coeffs.iter().rev() {
                idx = idx * p + c;
            }
            idx as u32
        };

        // exp table: powers of the residue of x.
        let one = {
            let mut c = vec![0u64; h];
            c[0] = 1;
            c
        };
        let x = if h == 1 {
            // residue of x is -modulus[0]
            vec![(p - modulus[0]) % p]
        } else {
            let mut c = vec![0u64; h];
            c[1] = 1;
            c
        };
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = one.clone();
        for i in 0..(q - 1) {
            let idx = encode(&cur);
            if idx == 0 || (idx == 1 && i > 0) {
                return Err(Error::NonPrimitiveModulus);
            }
            exp.push(idx);
            log[idx as usize] = i as u32;
            cur = polymul_mod(&cur, &x, &modulus, p);
        }
        if encode(&cur) != 1 {
            return Err(Error::NonPrimitiveModulus);
        }
        if exp.len() as u64 != q - 1 {
            return Err(Error::NonPrimitiveModulus);
        }

        // digit and negation tables
        let mut digits = vec![0u16; (q as usize) * h];
        let mut neg = vec![0u32; q as usize];
        for idx in 0..q {
            let mut v = idx;
            for d in 0..h {
                digits[(idx as usize) * h + d] = (v % p) as u16;
                v /= p;
            }
            let mut nv = 0u64;
            let mut mul = 1u64;
            let mut v = idx;
            for _ in 0..h {
                nv += ((p - v % p) % p) * mul;
                mul *= p;
                v /= p;
            }
            neg[idx as usize] = nv as u32;
        }

        // Frobenius x -> x^p via exp/log
        let mut frob = vec![0u32; q as usize];
        for idx in 1..q {
            let l = log[idx as usize] as u64;
            frob[idx as usize] = exp[((l * p) % (q - 1)) as usize];
        }

        let prime = if h == 1 {
            None
        } else {
            Some(Field::new(p, 1).expect("prime subfield"))
        };

        Ok(Field(Arc::new(Inner {
            p,
            h,
            q,
            modulus,
            exp,
            log,
            digits,
            neg,
            frob,
            prime,
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn h(&self) -> usize {
        self.0.h
    }
    /// Field size `q = p^h`.
    pub fn q(&self) -> u64 {
        self.0.q
    }
    /// Modulus coefficients in ascending degree order (monic, length `h+1`).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// The prime subfield `F_p` (the field itself when `h == 1`).
    pub fn prime_field(&self) -> Field {
        match &self.0.prime {
            Some(f) => f.clone(),
            None => self.clone(),
        }
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }
    pub fn one(&self) -> Fe {
        Fe(1)
    }
    /// The designated primitive element: the residue of `x`.
    pub fn e(&self) -> Fe {
        Fe(self.0.exp[1 % (self.0.exp.len()).max(1)])
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q as u32).map(Fe)
    }

    /// The element with index `i` in canonical order.
    pub fn from_index(&self, i: usize) -> Result<Fe> {
        if (i as u64) < self.0.q {
            Ok(Fe(i as u32))
        } else {
            Err(Error::BadShape(format!("element index {i} out of range")))
        }
    }

    /// Coefficients of the element on the basis `1, e, ..., e^{h-1}`.
    pub fn coeffs(&self, a: Fe) -> Vec<u64> {
        let h = self.0.h;
        (0..h)
            .map(|d| self.0.digits[a.index() * h + d] as u64)
            .collect()
    }

    /// Element from basis coefficients; each must lie in `0..p`.
    pub fn element(&self, coeffs: &[u64]) -> Result<Fe> {
        if coeffs.len() != self.0.h {
            return Err(Error::LengthMismatch {
                left: coeffs.len(),
                right: self.0.h,
            });
        }
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return Err(Error::BadShape(format!(
                    "coefficient {c} out of range for p = {}",
                    self.0.p
                )));
            }
            idx = idx * self.0.p + c;
        }
        Ok(Fe(idx as u32))
    }

    /// Element from an integer of the prime subfield.
    pub fn from_prime(&self, v: u64) -> Fe {
        debug_assert!(v < self.0.p);
        Fe(v as u32)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let h = self.0.h;
        if h == 1 {
            return Fe(((a.0 as u64 + b.0 as u64) % self.0.p) as u32);
        }
        let p = self.0.p;
        let da = &self.0.digits[a.index() * h..a.index() * h + h];
        let db = &self.0.digits[b.index() * h..b.index() * h + h];
        let mut idx = 0u64;
        for d in (0..h).rev() {
            idx = idx * p + ((da[d] + db[d]) as u64 % p);
        }
        Fe(idx as u32)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.index()])
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe(0);
        }
        let m = self.0.q - 1;
        let l = (self.0.log[a.index()] as u64 + self.0.log[b.index()] as u64) % m;
        Fe(self.0.exp[l as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.0.q - 1;
        let l = (m - self.0.log[a.index()] as u64) % m;
        Ok(Fe(self.0.exp[l as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` with the convention `0^0 = 1`.
    pub fn pow(&self, a: Fe, n: u64) -> Fe {
        if a.is_zero() {
            return if n == 0 { Fe(1) } else { Fe(0) };
        }
        let m = self.0.q - 1;
        let l = (self.0.log[a.index()] as u64 * (n % m)) % m;
        Fe(self.0.exp[l as usize])
    }

    /// `e^k` for any exponent.
    pub fn e_pow(&self, k: u64) -> Fe {
        Fe(self.0.exp[(k % (self.0.q - 1)) as usize])
    }

    /// Discrete log base `e`; None for zero.
    pub fn log(&self, a: Fe) -> Option<u64> {
        if a.is_zero() {
            None
        } else {
            Some(self.0.log[a.index()] as u64)
        }
    }

    /// `x^{p^i}`; the exponent is reduced mod `h`.
    pub fn frobenius(&self, x: Fe, i: usize) -> Fe {
        let mut y = x;
        for _ in 0..(i % self.0.h) {
            y = Fe(self.0.frob[y.index()]);
        }
        y
    }

    /// Order of `a` in the multiplicative group; None for zero.
    pub fn multiplicative_order(&self, a: Fe) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut n = 1u64;
        let mut cur = a;
        while cur != Fe(1) {
            cur = self.mul(cur, a);
            n += 1;
        }
        Some(n)
    }

    /// Canonical text form: decimal for prime fields, exponent notation
    /// (`0`, `1`, `e`, `e^k`) for extensions.
    pub fn format_element(&self, a: Fe) -> String {
        if self.0.h == 1 {
            return a.0.to_string();
        }
        match self.log(a) {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(1) => "e".into(),
            Some(k) => format!("e^{k}"),
        }
    }

    /// Parse one element token: exponent notation, a decimal residue
    /// (prime fields, or `0`/`1` anywhere), or a coefficient vector
    /// `[a0,...,a_{h-1}]`.
    pub fn parse_element(&self, tok: &str) -> Result<Fe> {
        let bad = |msg: String| Error::BadShape(msg);
        if let Some(body) = tok.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| bad(format!("unterminated vector token {tok:?}")))?;
            let coeffs: Vec<u64> = body
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| bad(format!("bad coefficient in {tok:?}")))
                })
                .collect::<Result<_>>()?;
            return self.element(&coeffs);
        }
        if tok == "e" {
            return Ok(self.e());
        }
        if let Some(kstr) = tok.strip_prefix("e^") {
            let k: u64 = kstr
                .parse()
                .map_err(|_| bad(format!("bad exponent in {tok:?}")))?;
            return Ok(self.e_pow(k));
        }
        if let Ok(v) = tok.parse::<u64>() {
            if self.0.h == 1 {
                if v < self.0.p {
                    return Ok(Fe(v as u32));
                }
                return Err(bad(format!("residue {v} out of range for p = {}", self.0.p)));
            }
            if v <= 1 {
                return Ok(Fe(v as u32));
            }
            return Err(bad(format!(
                "bare integer {v} is ambiguous over an extension field; use e^k or [a0,...]"
            )));
        }
        Err(bad(format!("unrecognized element token {tok:?}")))
    }

    /// Sum of a slice.
    pub fn sum(&self, xs: &[Fe]) -> Fe {
        xs.iter().fold(Fe(0), |acc, &x| self.add(acc, x))
    }
}

/// An additive map of `F_{p^h}` written as a linearized polynomial
/// `x -> c_0 x + c_1 x^p + ... + c_{h-1} x^{p^{h-1}}`.
///
/// These are exactly the `F_p`-linear maps of the field; the map is a
/// permutation iff its `h x h` prime-field matrix is invertible.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearizedMap {
    coeffs: Vec<Fe>,
}

impl LinearizedMap {
    /// Build from the coefficients `c_0, ..., c_{h-1}`.
    pub fn new(field: &Field, coeffs: Vec<Fe>) -> Result<LinearizedMap> {
        if coeffs.len() != field.h() {
            return Err(Error::LengthMismatch {
                left: coeffs.len(),
                right: field.h(),
            });
        }
        Ok(LinearizedMap { coeffs })
    }

    /// The identity map `x -> x`.
    pub fn identity(field: &Field) -> LinearizedMap {
        let mut coeffs = vec![Fe(0); field.h()];
        coeffs[0] = Fe(1);
        LinearizedMap { coeffs }
    }

    /// Multiplication by a fixed element, `x -> a x`.
    pub fn scalar(field: &Field, a: Fe) -> LinearizedMap {
        let mut coeffs = vec![Fe(0); field.h()];
        coeffs[0] = a;
        LinearizedMap { coeffs }
    }

    /// `x -> a x^{p^t}` (the per-coordinate shape of a semi-linear map).
    pub fn twisted_scalar(field: &Field, a: Fe, t: usize) -> LinearizedMap {
        let mut coeffs = vec![Fe(0); field.h()];
        coeffs[t % field.h()] = a;
        LinearizedMap { coeffs }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Is this the zero map?
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Evaluate at `x`. Always sends 0 to 0.
    pub fn eval(&self, field: &Field, x: Fe) -> Fe {
        let mut acc = Fe(0);
        let mut y = x;
        for &c in &self.coeffs {
            acc = field.add(acc, field.mul(c, y));
            y = field.frobenius(y, 1);
        }
        acc
    }

    /// The full value table in canonical element order.
    pub fn table(&self, field: &Field) -> Vec<Fe> {
        field.elements().map(|x| self.eval(field, x)).collect()
    }

    /// The `h x h` matrix over `F_p` whose column `j` holds the coefficients
    /// of the image of `e^j`; acting on coefficient columns it reproduces
    /// [`LinearizedMap::eval`].
    pub fn matrix(&self, field: &Field) -> Mat {
        let fp = field.prime_field();
        let h = field.h();
        let mut m = Mat::zero(&fp, h, h);
        for j in 0..h {
            let img = self.eval(field, field.pow(field.e(), j as u64));
            for (i, c) in field.coeffs(img).into_iter().enumerate() {
                m.set(i, j, fp.from_prime(c));
            }
        }
        m
    }

    /// Inverse of [`LinearizedMap::matrix`]: the unique linearized polynomial
    /// whose prime-field matrix is `m`. Together the two conversions give a
    /// bijection with all `p^{h^2}` additive maps.
    pub fn from_matrix(field: &Field, m: &Mat) -> Result<LinearizedMap> {
        let h = field.h();
        if m.rows() != h || m.cols() != h {
            return Err(Error::BadShape(format!(
                "expected {h}x{h} matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        // images of the basis elements e^j
        let values: Vec<Fe> = (0..h)
            .map(|j| {
                let coeffs: Vec<u64> = (0..h).map(|i| m.at(i, j).index() as u64).collect();
                field.element(&coeffs)
            })
            .collect::<Result<_>>()?;
        Self::interpolate_basis(field, &values)
    }

    /// Solve the Moore system `sum_i c_i (e^j)^{p^i} = values[j]` for the
    /// coefficients; the system is square and nonsingular because the powers
    /// of `e` form a basis.
    fn interpolate_basis(field: &Field, values: &[Fe]) -> Result<LinearizedMap> {
        let h = field.h();
        let mut sys = Mat::zero(field, h, h);
        for j in 0..h {
            let ej = field.pow(field.e(), j as u64);
            for i in 0..h {
                sys.set(j, i, field.frobenius(ej, i));
            }
        }
        let coeffs = sys
            .solve(values)
            .expect("Moore matrix of a basis is nonsingular");
        LinearizedMap::new(field, coeffs)
    }

    /// Interpolate a full value table. Returns the unique additive map
    /// agreeing with the table, or `NotAdditive` with a witness pair when no
    /// such map exists; the candidate is re-checked on every input.
    pub fn from_table(field: &Field, table: &[Fe]) -> Result<LinearizedMap> {
        if table.len() as u64 != field.q() {
            return Err(Error::LengthMismatch {
                left: table.len(),
                right: field.q() as usize,
            });
        }
        let h = field.h();
        let values: Vec<Fe> = (0..h)
            .map(|j| table[field.pow(field.e(), j as u64).index()])
            .collect();
        let cand = Self::interpolate_basis(field, &values)?;
        for x in field.elements() {
            if cand.eval(field, x) != table[x.index()] {
                // Not additive: exhibit a failing pair.
                let (a, b) = additivity_counterexample(field, table);
                return Err(Error::NotAdditive {
                    x: field.format_element(a),
                    y: field.format_element(b),
                });
            }
        }
        Ok(cand)
    }

    /// Is the map invertible (a permutation of the field)?
    pub fn is_permutation(&self, field: &Field) -> bool {
        self.matrix(field).rank() == field.h()
    }

    /// The inverse map; None when not a permutation.
    pub fn inverse(&self, field: &Field) -> Option<LinearizedMap> {
        let m = self.matrix(field).inverse()?;
        Some(Self::from_matrix(field, &m).expect("shape preserved"))
    }

    /// Composition `self . other` (apply `other` first). Matches the product
    /// of prime-field matrices in the same order.
    pub fn compose(&self, field: &Field, other: &LinearizedMap) -> LinearizedMap {
        let h = field.h();
        let mut coeffs = vec![Fe(0); h];
        for (i, &ci) in self.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, &dj) in other.coeffs.iter().enumerate() {
                if dj.is_zero() {
                    continue;
                }
                let k = (i + j) % h;
                let term = field.mul(ci, field.frobenius(dj, i));
                coeffs[k] = field.add(coeffs[k], term);
            }
        }
        LinearizedMap { coeffs }
    }

    /// Difference of maps, coefficientwise.
    pub fn sub(&self, field: &Field, other: &LinearizedMap) -> LinearizedMap {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| field.sub(a, b))
            .collect();
        LinearizedMap { coeffs }
    }
}

/// Find `(x, y)` with `table[x+y] != table[x] + table[y]`; the caller
/// guarantees one exists.
fn additivity_counterexample(field: &Field, table: &[Fe]) -> (Fe, Fe) {
    for x in field.elements() {
        for y in field.elements() {
            let lhs = table[field.add(x, y).index()];
            let rhs = field.add(table[x.index()], table[y.index()]);
            if lhs != rhs {
                return (x, y);
            }
        }
    }
    unreachable!("table was verified non-additive")
}
