//! Prime fields `F_p`, their degree-2/3 extensions, and dense univariate
//! polynomial arithmetic mod `p`.
//!
//! Everything downstream leans on this module: point counting touches
//! quadratic characters over `F_p` and `F_{p^k}`, Frobenius-class resolution
//! factors resolvent polynomials mod `p`, and the L-polynomial oracle needs
//! traces over extension fields.  All arithmetic is `u64` with `u128`
//! intermediates; moduli are restricted to odd primes below `2^62` so that a
//! product of two reduced residues can never overflow.

use crate::Error;

// ---------------------------------------------------------------------------
// Modular arithmetic on u64
// ---------------------------------------------------------------------------

/// `(a * b) mod m` without overflow, for `m < 2^62`.
#[inline(always)]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by binary exponentiation.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    base %= m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod prime `p` via Fermat's little theorem.
/// Returns `None` for `a ≡ 0`.
#[inline]
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Integer square root (largest `r` with `r² ≤ n`).
pub(crate) fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    // Float seeding can be off by one in either direction near perfect squares.
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |sq| sq <= n) {
        r += 1;
    }
    r
}

/// Deterministic Miller–Rabin.  The witness set {2, 3, 5, ..., 37} is known
/// to be exact for all 64-bit integers, so this is a proof of primality in
/// range, not a probabilistic test.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for q in WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes ≤ `n`, by sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for q in 2..=n {
        if !composite[q] {
            primes.push(q as u64);
            let mut multiple = q * q;
            while multiple <= n {
                composite[multiple] = true;
                multiple += q;
            }
        }
    }
    primes
}

// ---------------------------------------------------------------------------
// Prime moduli and F_p elements
// ---------------------------------------------------------------------------

/// An odd prime `p < 2^62`, certified at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    value: u64,
}

impl PrimeModulus {
    /// Certify `p`: odd, below `2^62`, and prime (deterministic Miller–Rabin).
    pub fn new(p: u64) -> Result<Self, Error> {
        if p >= 1 << 62 {
            return Err(Error::ModulusTooLarge(p));
        }
        if p % 2 == 0 {
            return Err(Error::EvenModulus(p));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus { value: p })
    }

    #[inline(always)]
    pub fn get(self) -> u64 {
        self.value
    }
}

/// An element of `F_p`, carrying its modulus.
///
/// Mixed-modulus arithmetic is a programming error and is caught by debug
/// assertions rather than a `Result`: the sites that combine elements always
/// hold them in a single-field context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpElem {
    value: u64,
    modulus: PrimeModulus,
}

impl FpElem {
    pub fn new(value: u64, modulus: PrimeModulus) -> Self {
        FpElem {
            value: value % modulus.get(),
            modulus,
        }
    }

    /// Reduce a signed integer, mapping negatives to their canonical residue.
    pub fn from_i64(value: i64, modulus: PrimeModulus) -> Self {
        let p = modulus.get() as i64;
        FpElem {
            value: value.rem_euclid(p) as u64,
            modulus,
        }
    }

    #[inline(always)]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline(always)]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline(always)]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u64) -> Self {
        FpElem {
            value: pow_mod(self.value, exp, self.modulus.get()),
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        inv_mod(self.value, self.modulus.get()).map(|value| FpElem {
            value,
            modulus: self.modulus,
        })
    }
}

impl std::ops::Add for FpElem {
    type Output = FpElem;
    #[inline(always)]
    fn add(self, rhs: FpElem) -> FpElem {
        debug_assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        let p = self.modulus.get();
        let mut v = self.value + rhs.value;
        if v >= p {
            v -= p;
        }
        FpElem {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for FpElem {
    type Output = FpElem;
    #[inline(always)]
    fn sub(self, rhs: FpElem) -> FpElem {
        debug_assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        let p = self.modulus.get();
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + p - rhs.value
        };
        FpElem {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for FpElem {
    type Output = FpElem;
    #[inline(always)]
    fn mul(self, rhs: FpElem) -> FpElem {
        debug_assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpElem {
            value: mul_mod(self.value, rhs.value, self.modulus.get()),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for FpElem {
    type Output = FpElem;
    #[inline(always)]
    fn neg(self) -> FpElem {
        let v = if self.value == 0 {
            0
        } else {
            self.modulus.get() - self.value
        };
        FpElem {
            value: v,
            modulus: self.modulus,
        }
    }
}

// ---------------------------------------------------------------------------
// Quadratic characters
// ---------------------------------------------------------------------------

/// Legendre symbol `(a/p)` by Euler's criterion: `a^((p−1)/2) mod p`,
/// mapped to {−1, 0, 1}.
pub fn legendre_euler(a: u64, p: u64) -> i8 {
    let r = pow_mod(a, (p - 1) / 2, p);
    if r == 0 {
        0
    } else if r == 1 {
        1
    } else {
        debug_assert_eq!(r, p - 1);
        -1
    }
}

/// Legendre symbol `(a/p)` by the quadratic-reciprocity chain (the Jacobi
/// algorithm: strip factors of two with the second supplement, flip by
/// reciprocity, reduce).  For prime `p` this equals Euler's criterion; having
/// both routes lets the two be asserted against each other.
pub fn legendre_reciprocity(a: i64, p: u64) -> i8 {
    debug_assert!(p >= 3 && p % 2 == 1);
    let mut num = a.rem_euclid(p as i64) as u64;
    let mut den = p;
    let mut sign: i8 = 1;
    while num != 0 {
        while num % 2 == 0 {
            num /= 2;
            if matches!(den % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut num, &mut den);
        if num % 4 == 3 && den % 4 == 3 {
            sign = -sign;
        }
        num %= den;
    }
    if den == 1 {
        sign
    } else {
        0
    }
}

/// Legendre symbol of a field element, computed by *both* Euler's criterion
/// and the reciprocity chain; the two are asserted to agree.
pub fn legendre_symbol(a: FpElem) -> i8 {
    let p = a.modulus().get();
    let euler = legendre_euler(a.value(), p);
    let recip = legendre_reciprocity(a.value() as i64, p);
    assert_eq!(
        euler, recip,
        "Euler criterion and reciprocity disagree at ({}, {})",
        a.value(),
        p
    );
    euler
}

/// Quadratic-character lookup table for `F_p`: index `x` holds `χ(x)` with
/// `χ(0) = 0`.  One pass of squarings; the counting loops use this instead of
/// a per-element exponentiation.
pub fn chi_table_fp(p: u64) -> Vec<i8> {
    let n = p as usize;
    let mut table = vec![-1i8; n];
    table[0] = 0;
    // Squares x² for x = 1..=(p−1)/2 enumerate every nonzero square once.
    for x in 1..=(p - 1) / 2 {
        table[mul_mod(x, x, p) as usize] = 1;
    }
    table
}

/// A square root of `a` modulo the odd prime `p`, or `None` when `a` is a
/// non-residue.  Fast exponent path for `p ≡ 3 (mod 4)`, Tonelli–Shanks
/// otherwise; the non-residue needed by Tonelli–Shanks is found by scanning
/// `2, 3, 4, …`, keeping the function fully deterministic.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    debug_assert!(p > 2 && is_prime_u64(p));
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre_euler(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // Tonelli–Shanks: p − 1 = q·2^s with q odd.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre_euler(z, p) == -1).expect("non-residue exists");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
            debug_assert!(i < m);
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul_mod(b, b, p);
        }
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

// ---------------------------------------------------------------------------
// Dense polynomials over F_p
// ---------------------------------------------------------------------------

/// Dense univariate polynomial over `F_p`.  Coefficients are reduced and the
/// representation is trimmed: the zero polynomial is the empty vector, and
/// `coeffs.last()` is never zero otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFp {
    coeffs: Vec<u64>,
    modulus: PrimeModulus,
}

impl PolyFp {
    pub fn new(mut coeffs: Vec<u64>, modulus: PrimeModulus) -> Self {
        let p = modulus.get();
        for c in &mut coeffs {
            *c %= p;
        }
        let mut poly = PolyFp { coeffs, modulus };
        poly.trim();
        poly
    }

    pub fn from_i64(coeffs: &[i64], modulus: PrimeModulus) -> Self {
        let p = modulus.get() as i64;
        PolyFp::new(
            coeffs.iter().map(|&c| c.rem_euclid(p) as u64).collect(),
            modulus,
        )
    }

    pub fn zero(modulus: PrimeModulus) -> Self {
        PolyFp {
            coeffs: Vec::new(),
            modulus,
        }
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        PolyFp {
            coeffs: vec![1],
            modulus,
        }
    }

    /// The monomial `x`.
    pub fn x(modulus: PrimeModulus) -> Self {
        PolyFp {
            coeffs: vec![0, 1],
            modulus,
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.modulus.get();
        let x = x % p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x, p) + c) % p;
        }
        acc
    }

    pub fn add(&self, rhs: &PolyFp) -> PolyFp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.get();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![0u64; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *c = (a + b) % p;
        }
        let mut poly = PolyFp {
            coeffs,
            modulus: self.modulus,
        };
        poly.trim();
        poly
    }

    pub fn sub(&self, rhs: &PolyFp) -> PolyFp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.get();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![0u64; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *c = (a + p - b) % p;
        }
        let mut poly = PolyFp {
            coeffs,
            modulus: self.modulus,
        };
        poly.trim();
        poly
    }

    pub fn mul(&self, rhs: &PolyFp) -> PolyFp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        if self.is_zero() || rhs.is_zero() {
            return PolyFp::zero(self.modulus);
        }
        let p = self.modulus.get();
        let mut coeffs = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        let mut poly = PolyFp {
            coeffs,
            modulus: self.modulus,
        };
        poly.trim();
        poly
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, divisor: &PolyFp) -> (PolyFp, PolyFp) {
        debug_assert_eq!(self.modulus, divisor.modulus);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let p = self.modulus.get();
        let d = divisor.coeffs.len() - 1;
        if self.coeffs.len() < divisor.coeffs.len() {
            return (PolyFp::zero(self.modulus), self.clone());
        }
        let lc_inv = inv_mod(*divisor.coeffs.last().unwrap(), p).expect("nonzero leading");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - d];
        for i in (d..rem.len()).rev() {
            if rem[i] == 0 {
                continue;
            }
            let q = mul_mod(rem[i], lc_inv, p);
            quot[i - d] = q;
            for (j, &m) in divisor.coeffs.iter().enumerate() {
                let idx = i - d + j;
                rem[idx] = (rem[idx] + p - mul_mod(q, m, p)) % p;
            }
        }
        let mut quotient = PolyFp {
            coeffs: quot,
            modulus: self.modulus,
        };
        quotient.trim();
        let mut remainder = PolyFp {
            coeffs: rem,
            modulus: self.modulus,
        };
        remainder.trim();
        remainder.coeffs.truncate(d);
        remainder.trim();
        (quotient, remainder)
    }

    pub fn rem(&self, divisor: &PolyFp) -> PolyFp {
        self.divrem(divisor).1
    }

    /// Scale so the leading coefficient is 1 (the zero polynomial is fixed).
    pub fn monic(&self) -> PolyFp {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(lc) => {
                let p = self.modulus.get();
                let inv = inv_mod(lc, p).expect("nonzero leading");
                PolyFp {
                    coeffs: self.coeffs.iter().map(|&c| mul_mod(c, inv, p)).collect(),
                    modulus: self.modulus,
                }
            }
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, rhs: &PolyFp) -> PolyFp {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> PolyFp {
        let p = self.modulus.get();
        if self.coeffs.len() <= 1 {
            return PolyFp::zero(self.modulus);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(i as u64 % p, c, p))
            .collect();
        let mut poly = PolyFp {
            coeffs,
            modulus: self.modulus,
        };
        poly.trim();
        poly
    }

    /// A polynomial is squarefree mod p iff it is coprime to its derivative
    /// (and the derivative did not collapse to zero, which over `F_p` signals
    /// a p-th-power factor).
    pub fn is_squarefree(&self) -> bool {
        if self.degree().unwrap_or(0) == 0 {
            return true;
        }
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).degree() == Some(0)
    }
}

/// `base^exp mod m` for polynomials, by square-and-multiply with reduction
/// after every step.  This is the workhorse of distinct-degree splitting
/// (computing `x^(p^d) mod f`) and of the extension-field Frobenius.
pub fn poly_powmod(base: &PolyFp, mut exp: u128, m: &PolyFp) -> PolyFp {
    assert!(
        m.degree().unwrap_or(0) >= 1,
        "power-mod needs a modulus of degree ≥ 1"
    );
    let mut acc = PolyFp::one(base.modulus()).rem(m);
    let mut base = base.rem(m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc.mul(&base).rem(m);
        }
        base = base.mul(&base).rem(m);
        exp >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Extension fields F_{p^k}, k ∈ {2, 3}
// ---------------------------------------------------------------------------

/// Element of `F_{p^k}` as coefficients of `1, x, x²` against the field's
/// defining polynomial (the unused top coordinate is zero for `k = 2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtElem {
    pub c: [u64; 3],
}

impl ExtElem {
    pub fn is_zero(self) -> bool {
        self.c == [0, 0, 0]
    }
}

/// The field `F_{p^k}` for `k ∈ {1, 2, 3}`, defined by an irreducible monic
/// polynomial found by a deterministic search: binomials `x^k − a` for
/// `a = 1, 2, …` first (irreducibility by absence of roots, which is
/// equivalent to irreducibility in degrees 2 and 3), then — only needed for
/// `k = 3` with `p ≢ 1 (mod 3)`, where cubing is a bijection and no binomial
/// works — monic cubics in lexicographic order of `(c₂, c₁, c₀)`.
///
/// `k = 1` is the base field itself (defining polynomial `x`), so counting
/// code can be written once over `F_{p^k}` and run at every depth.
#[derive(Debug, Clone)]
pub struct ExtField {
    p: PrimeModulus,
    k: usize,
    modulus_poly: Vec<u64>,
}

impl ExtField {
    pub fn new(p: PrimeModulus, k: usize) -> Result<Self, Error> {
        if k == 1 {
            return Ok(ExtField {
                p,
                k,
                modulus_poly: vec![0, 1],
            });
        }
        if k != 2 && k != 3 {
            return Err(Error::UnsupportedDegree(k));
        }
        let pv = p.get();
        let has_root = |coeffs: &[u64]| -> bool {
            (0..pv).any(|x| {
                let mut acc = 0u64;
                for &c in coeffs.iter().rev() {
                    acc = (mul_mod(acc, x, pv) + c) % pv;
                }
                acc == 0
            })
        };
        // Phase 1: binomials x^k − a, a ascending.
        for a in 1..pv {
            let mut coeffs = vec![0u64; k + 1];
            coeffs[0] = pv - a;
            coeffs[k] = 1;
            if !has_root(&coeffs) {
                return Ok(ExtField {
                    p,
                    k,
                    modulus_poly: coeffs,
                });
            }
        }
        // Phase 2 (k = 3 only in practice): general monic search.
        if k == 3 {
            for c2 in 0..pv {
                for c1 in 0..pv {
                    for c0 in 0..pv {
                        let coeffs = vec![c0, c1, c2, 1];
                        if !has_root(&coeffs) {
                            return Ok(ExtField {
                                p,
                                k,
                                modulus_poly: coeffs,
                            });
                        }
                    }
                }
            }
        }
        unreachable!("irreducible polynomials of degree 2 and 3 exist over every F_p");
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Defining polynomial, dense, monic of degree `k`.
    pub fn modulus_poly(&self) -> &[u64] {
        &self.modulus_poly
    }

    /// Field order `p^k`.
    pub fn order(&self) -> u128 {
        let p = self.p.get() as u128;
        p.pow(self.k as u32)
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem { c: [0, 0, 0] }
    }

    pub fn one(&self) -> ExtElem {
        ExtElem { c: [1, 0, 0] }
    }

    /// Embed a base-field residue.
    pub fn embed(&self, a: u64) -> ExtElem {
        ExtElem {
            c: [a % self.p.get(), 0, 0],
        }
    }

    pub fn from_coeffs(&self, c: [u64; 3]) -> ExtElem {
        let p = self.p.get();
        debug_assert!(self.k >= 2 || c[1] == 0);
        debug_assert!(self.k == 3 || c[2] == 0);
        ExtElem {
            c: [c[0] % p, c[1] % p, c[2] % p],
        }
    }

    pub fn add(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let p = self.p.get();
        let mut c = [0u64; 3];
        for i in 0..self.k {
            let mut v = a.c[i] + b.c[i];
            if v >= p {
                v -= p;
            }
            c[i] = v;
        }
        ExtElem { c }
    }

    pub fn sub(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let p = self.p.get();
        let mut c = [0u64; 3];
        for i in 0..self.k {
            c[i] = if a.c[i] >= b.c[i] {
                a.c[i] - b.c[i]
            } else {
                a.c[i] + p - b.c[i]
            };
        }
        ExtElem { c }
    }

    pub fn neg(&self, a: ExtElem) -> ExtElem {
        let p = self.p.get();
        let mut c = [0u64; 3];
        for i in 0..self.k {
            c[i] = if a.c[i] == 0 { 0 } else { p - a.c[i] };
        }
        ExtElem { c }
    }

    pub fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let p = self.p.get();
        let k = self.k;
        // Schoolbook product, reduced term-by-term so sums stay far from
        // overflow, then degree reduction by the monic defining polynomial:
        // x^k ≡ −(m₀ + m₁x + … + m_{k−1}x^{k−1}).
        let mut prod = [0u64; 5];
        for i in 0..k {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + mul_mod(a.c[i], b.c[j], p)) % p;
            }
        }
        for d in (k..=2 * (k - 1)).rev() {
            let head = prod[d];
            if head == 0 {
                continue;
            }
            prod[d] = 0;
            for j in 0..k {
                let m = self.modulus_poly[j];
                if m != 0 {
                    prod[d - k + j] = (prod[d - k + j] + p - mul_mod(head, m, p)) % p;
                }
            }
        }
        ExtElem {
            c: [prod[0], prod[1], prod[2]],
        }
    }

    pub fn pow(&self, mut base: ExtElem, mut exp: u128) -> ExtElem {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(q−2)`; `None` for zero.
    pub fn inv(&self, a: ExtElem) -> Option<ExtElem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// The `p`-power Frobenius `x ↦ x^p`, the generator of `Gal(F_{p^k}/F_p)`.
    pub fn frobenius(&self, a: ExtElem) -> ExtElem {
        self.pow(a, self.p.get() as u128)
    }

    /// Enumeration: the element with base-`p` digits of `idx`.
    pub fn elem_at(&self, idx: u64) -> ExtElem {
        let p = self.p.get();
        ExtElem {
            c: [idx % p, (idx / p) % p, (idx / (p * p)) % p],
        }
    }

    /// Index of an element under [`Self::elem_at`]'s enumeration.
    pub fn index_of(&self, a: ExtElem) -> u64 {
        let p = self.p.get();
        a.c[0] + a.c[1] * p + a.c[2] * p * p
    }

    /// Quadratic-character table over the whole field: entry `i` is `χ(z_i)`
    /// where `z_i = elem_at(i)`.  Built by one squaring pass.
    pub fn chi_table(&self) -> Vec<i8> {
        let q = self.order();
        assert!(q <= 1 << 32, "character table would exceed memory budget");
        let q = q as u64;
        let mut table = vec![-1i8; q as usize];
        table[0] = 0;
        for i in 1..q {
            let z = self.elem_at(i);
            let sq = self.mul(z, z);
            table[self.index_of(sq) as usize] = 1;
        }
        table
    }

    /// Horner evaluation of a polynomial with base-field coefficients at an
    /// extension element.
    pub fn eval_poly(&self, coeffs: &[u64], x: ExtElem) -> ExtElem {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.mul(acc, x);
            acc = self.add(acc, self.embed(c));
        }
        acc
    }
}

/// Construct the canonical extension `F_{p^k}` (the deterministic search
/// described on [`ExtField::new`]).
pub fn ext_field(p: u64, k: usize) -> Result<ExtField, Error> {
    ExtField::new(PrimeModulus::new(p)?, k)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
