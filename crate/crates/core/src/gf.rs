//! Finite fields as explicit polynomial quotient rings.
//!
//! A field of odd prime-power order `q = p^k` is realized as
//! `F_p[t]/(f)` with `f` the lexicographically smallest monic
//! irreducible of degree `k`, and its extensions as `F_q[s]/(g)` built
//! the same way. The two-level tower keeps the intermediate field as
//! the constant polynomials of the top level, so traces that land in
//! `F_q` are recognizable coefficient vectors with no subfield
//! embedding to track. All constructions are deterministic, so every
//! run picks the same moduli and the same roots of unity.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

/// Field operations on an explicitly represented element type.
pub(crate) trait Fld {
    type El: Clone + PartialEq + std::fmt::Debug;

    fn size(&self) -> BigUint;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn inv(&self, a: &Self::El) -> Self::El;
    fn encode(&self, a: &Self::El) -> u64;
    fn decode(&self, code: u64) -> Self::El;
}

/// The prime field `Z/p` for an odd prime `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PrimeFld {
    p: u64,
}

impl PrimeFld {
    pub(crate) fn new(p: u64) -> PrimeFld {
        PrimeFld { p }
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Fld for PrimeFld {
    type El = u64;

    fn size(&self) -> BigUint {
        BigUint::from(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: &u64) -> u64 {
        self.pow(*a, self.p - 2)
    }

    fn encode(&self, a: &u64) -> u64 {
        *a
    }

    fn decode(&self, code: u64) -> u64 {
        code % self.p
    }
}

/// A quotient `F[x]/(m)` of the polynomial ring over a smaller field.
///
/// Elements are coefficient vectors of length `deg m`, least
/// significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct QuotFld<F: Fld> {
    base: F,
    deg: usize,
    modulus: Vec<F::El>,
}

impl<F: Fld> QuotFld<F> {
    /// Builds the quotient by the lexicographically smallest monic
    /// irreducible of the given degree.
    pub(crate) fn new(base: F, deg: usize) -> QuotFld<F> {
        let modulus = find_irreducible(&base, deg);
        QuotFld { base, deg, modulus }
    }

    #[cfg(test)]
    pub(crate) fn base(&self) -> &F {
        &self.base
    }

    #[cfg(test)]
    pub(crate) fn degree(&self) -> usize {
        self.deg
    }

    /// The base element, when the value lies in the base subfield.
    pub(crate) fn as_base(&self, a: &[F::El]) -> Option<F::El> {
        if a[1..].iter().all(|c| self.base.is_zero(c)) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    /// Exponentiation with an arbitrarily large exponent.
    pub(crate) fn pow_big(&self, a: &[F::El], e: &BigUint) -> Vec<F::El> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            if i + 1 < e.bits() {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The first element, in code order, whose `(size−1)/2^k`-th power
    /// has multiplicative order exactly `2^k`. Exists exactly when
    /// `2^k` divides `size − 1`.
    pub(crate) fn root_of_unity(&self, order_log2: u32) -> Option<Vec<F::El>> {
        if order_log2 == 0 {
            return Some(self.one());
        }
        let size = self.size();
        let two_k = BigUint::one() << order_log2;
        let cofactor = (&size - BigUint::one()) / &two_k;
        if &cofactor * &two_k != &size - BigUint::one() {
            return None;
        }
        let half = BigUint::one() << (order_log2 - 1);
        for code in 2..u64::MAX {
            let alpha = self.decode(code);
            if self.is_zero(&alpha) {
                continue;
            }
            let beta = self.pow_big(&alpha, &cofactor);
            let check = self.pow_big(&beta, &half);
            if check != self.one() {
                return Some(beta);
            }
        }
        None
    }
}

impl<F: Fld> Fld for QuotFld<F> {
    type El = Vec<F::El>;

    fn size(&self) -> BigUint {
        self.base.size().pow(self.deg as u32)
    }

    fn zero(&self) -> Vec<F::El> {
        vec![self.base.zero(); self.deg]
    }

    fn one(&self) -> Vec<F::El> {
        let mut v = self.zero();
        v[0] = self.base.one();
        v
    }

    fn is_zero(&self, a: &Vec<F::El>) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }

    fn add(&self, a: &Vec<F::El>, b: &Vec<F::El>) -> Vec<F::El> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn sub(&self, a: &Vec<F::El>, b: &Vec<F::El>) -> Vec<F::El> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    fn mul(&self, a: &Vec<F::El>, b: &Vec<F::El>) -> Vec<F::El> {
        let n = self.deg;
        let mut wide = vec![self.base.zero(); 2 * n - 1];
        for i in 0..n {
            if self.base.is_zero(&a[i]) {
                continue;
            }
            for j in 0..n {
                let prod = self.base.mul(&a[i], &b[j]);
                wide[i + j] = self.base.add(&wide[i + j], &prod);
            }
        }
        for i in (n..2 * n - 1).rev() {
            if self.base.is_zero(&wide[i]) {
                continue;
            }
            let c = wide[i].clone();
            wide[i] = self.base.zero();
            for j in 0..n {
                let delta = self.base.mul(&c, &self.modulus[j]);
                wide[i - n + j] = self.base.sub(&wide[i - n + j], &delta);
            }
        }
        wide.truncate(n);
        wide
    }

    fn inv(&self, a: &Vec<F::El>) -> Vec<F::El> {
        let e = self.size() - BigUint::from(2u32);
        self.pow_big(a, &e)
    }

    fn encode(&self, a: &Vec<F::El>) -> u64 {
        let radix: u64 = self
            .base
            .size()
            .try_into()
            .expect("encoding requires a small base field");
        let mut code = 0u64;
        for c in a.iter().rev() {
            code = code * radix + self.base.encode(c);
        }
        code
    }

    fn decode(&self, mut code: u64) -> Vec<F::El> {
        let radix: u64 = self
            .base
            .size()
            .try_into()
            .expect("decoding requires a small base field");
        (0..self.deg)
            .map(|_| {
                let digit = code % radix;
                code /= radix;
                self.base.decode(digit)
            })
            .collect()
    }
}

/// Polynomials over `F`, least significant coefficient first, with no
/// trailing zeros; the empty vector is the zero polynomial.
fn poly_trim<F: Fld>(field: &F, mut v: Vec<F::El>) -> Vec<F::El> {
    while v.last().is_some_and(|c| field.is_zero(c)) {
        v.pop();
    }
    v
}

fn poly_mul_mod<F: Fld>(field: &F, a: &[F::El], b: &[F::El], m: &[F::El]) -> Vec<F::El> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut wide = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let prod = field.mul(x, y);
            wide[i + j] = field.add(&wide[i + j], &prod);
        }
    }
    poly_rem(field, wide, m)
}

fn poly_rem<F: Fld>(field: &F, mut v: Vec<F::El>, m: &[F::El]) -> Vec<F::El> {
    let deg_m = m.len() - 1;
    let lead_inv = field.inv(&m[deg_m]);
    while v.len() > deg_m {
        let top = v.len() - 1;
        if !field.is_zero(&v[top]) {
            let c = field.mul(&v[top], &lead_inv);
            for j in 0..=deg_m {
                let delta = field.mul(&c, &m[j]);
                let at = top - deg_m + j;
                v[at] = field.sub(&v[at], &delta);
            }
        }
        v.pop();
    }
    poly_trim(field, v)
}

fn poly_pow_mod<F: Fld>(field: &F, a: &[F::El], e: &BigUint, m: &[F::El]) -> Vec<F::El> {
    let mut acc = vec![field.one()];
    let mut base = a.to_vec();
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = poly_mul_mod(field, &acc, &base, m);
        }
        if i + 1 < e.bits() {
            base = poly_mul_mod(field, &base, &base, m);
        }
    }
    acc
}

fn poly_gcd_is_constant<F: Fld>(field: &F, a: &[F::El], b: &[F::El]) -> bool {
    let mut r0 = poly_trim(field, a.to_vec());
    let mut r1 = poly_trim(field, b.to_vec());
    while !r1.is_empty() {
        let mut m = r1.clone();
        let lead = field.inv(&m[m.len() - 1]);
        for c in m.iter_mut() {
            *c = field.mul(c, &lead);
        }
        let rem = poly_rem(field, r0, &m);
        r0 = r1;
        r1 = rem;
    }
    r0.len() == 1
}

/// Tests irreducibility of a monic polynomial: `x^{|F|^d} = x` modulo
/// the polynomial, and `gcd(x^{|F|^{d/ℓ}} − x, ·)` constant for every
/// prime `ℓ` dividing the degree `d`.
fn is_irreducible<F: Fld>(field: &F, poly: &[F::El]) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    if field.is_zero(&poly[0]) {
        return false;
    }
    let mut checkpoints: Vec<usize> = Vec::new();
    let mut d = deg;
    let mut l = 2usize;
    while l * l <= d {
        if d % l == 0 {
            checkpoints.push(deg / l);
            while d % l == 0 {
                d /= l;
            }
        }
        l += 1;
    }
    if d > 1 {
        checkpoints.push(deg / d);
    }
    let x = vec![field.zero(), field.one()];
    let q = field.size();
    let mut r = x.clone();
    for i in 1..=deg {
        r = poly_pow_mod(field, &r, &q, poly);
        if checkpoints.contains(&i) {
            let mut diff = r.clone();
            while diff.len() < 2 {
                diff.push(field.zero());
            }
            diff[1] = field.sub(&diff[1], &field.one());
            let diff = poly_trim(field, diff);
            if diff.is_empty() || !poly_gcd_is_constant(field, &diff, poly) {
                return false;
            }
        }
    }
    r == poly_trim(field, x)
}

/// The lexicographically smallest monic irreducible of the given
/// degree, ordered by the integer code of the low-coefficient tuple.
fn find_irreducible<F: Fld>(field: &F, deg: usize) -> Vec<F::El> {
    if deg == 1 {
        return vec![field.zero(), field.one()];
    }
    let radix: u64 = field
        .size()
        .try_into()
        .expect("irreducible search requires a small base field");
    for code in 0..u64::MAX {
        let mut coeffs: Vec<F::El> = Vec::with_capacity(deg + 1);
        let mut c = code;
        for _ in 0..deg {
            coeffs.push(field.decode(c % radix));
            c /= radix;
        }
        if c > 0 {
            break;
        }
        coeffs.push(field.one());
        if is_irreducible(field, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("monic irreducibles exist in every degree");
}

/// The field `F_q` for an odd prime power `q`.
pub(crate) type Fq = QuotFld<PrimeFld>;

/// An extension `F_{q^m}` of `F_q`.
pub(crate) type FqTower = QuotFld<Fq>;

/// Splits `q` as `p^k` for its smallest (and only) prime divisor,
/// rejecting even and non-prime-power values.
pub(crate) fn factor_odd_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 3 || q % 2 == 0 {
        return None;
    }
    let mut p = 0u64;
    let mut d = 3u64;
    while d * d <= q {
        if q % d == 0 {
            p = d;
            break;
        }
        d += 2;
    }
    if p == 0 {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut k = 0u32;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest == 1 {
        Some((p, k))
    } else {
        None
    }
}

static FQ_CACHE: OnceLock<Mutex<HashMap<u64, Arc<Fq>>>> = OnceLock::new();
static TOWER_CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<FqTower>>>> = OnceLock::new();

/// The cached field `F_q`.
pub(crate) fn fq(q: u64) -> Option<Arc<Fq>> {
    let (p, k) = factor_odd_prime_power(q)?;
    let cache = FQ_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("field cache poisoned");
    Some(Arc::clone(map.entry(q).or_insert_with(|| {
        Arc::new(QuotFld::new(PrimeFld::new(p), k as usize))
    })))
}

/// The cached extension `F_{q^m}`.
pub(crate) fn tower(q: u64, m: usize) -> Option<Arc<FqTower>> {
    let base = fq(q)?;
    let cache = TOWER_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("tower cache poisoned");
    Some(Arc::clone(map.entry((q, m)).or_insert_with(|| {
        Arc::new(QuotFld::new((*base).clone(), m))
    })))
}
