//! Exact arithmetic in the cyclotomic field Q(ω_N).
//!
//! Elements are stored in the power basis 1, ω, …, ω^{φ(N)-1} as integer
//! numerators over one positive common denominator, so equality is plain
//! structural comparison.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("zero denominator in term {index}")]
    ZeroDenominator { index: usize },
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor must be positive")]
    InvalidConductor,
    #[error("conductor {target} is not a multiple of {base}")]
    NotAMultiple { base: u32, target: u32 },
}

/// The field Q(ω_N) together with its reduction data.
#[derive(Debug)]
pub struct CycloField {
    conductor: u32,
    degree: usize,
    /// Φ_N, lowest degree first, monic.
    modulus: Vec<i64>,
    /// `powers[k]` is ω^k in the power basis, for 0 <= k < N.
    powers: Vec<Vec<i64>>,
}

fn field_cache() -> &'static Mutex<HashMap<u32, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Φ_n as an integer polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_divide(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

impl CycloField {
    /// Shared handle to Q(ω_n). Fields are built once per conductor.
    pub fn new(n: u32) -> Result<Arc<CycloField>, CycloError> {
        if n == 0 {
            return Err(CycloError::InvalidConductor);
        }
        let mut cache = field_cache().lock().expect("field cache poisoned");
        if let Some(f) = cache.get(&n) {
            return Ok(f.clone());
        }
        let modulus = cyclotomic_polynomial(n);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by ω and reduce
            let top = cur[degree - 1];
            let mut next = vec![0i64; degree];
            for i in (1..degree).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..degree {
                next[i] -= top * modulus[i];
            }
            cur = next;
        }
        let f = Arc::new(CycloField { conductor: n, degree, modulus, powers });
        cache.insert(n, f.clone());
        Ok(f)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// φ(N).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> CycNum {
        CycNum { field: self.clone(), num: vec![BigInt::zero(); self.degree], den: BigInt::one() }
    }

    pub fn one(self: &Arc<Self>) -> CycNum {
        self.int(1)
    }

    pub fn int(self: &Arc<Self>, v: i64) -> CycNum {
        self.rational(BigRational::from_integer(v.into()))
    }

    pub fn rational(self: &Arc<Self>, q: BigRational) -> CycNum {
        let mut num = vec![BigInt::zero(); self.degree];
        num[0] = q.numer().clone();
        CycNum::normalized(self.clone(), num, q.denom().clone())
    }

    /// ω_N^k, for any integer k.
    pub fn omega(self: &Arc<Self>, k: i64) -> CycNum {
        let idx = k.rem_euclid(self.conductor as i64) as usize;
        let num = self.powers[idx].iter().map(|&c| BigInt::from(c)).collect();
        CycNum { field: self.clone(), num, den: BigInt::one() }
    }

    /// ζ_n^k where ζ_n = exp(2πi/n), if it lies in this field.
    pub fn root_of_unity(self: &Arc<Self>, n: u32, k: i64) -> Option<CycNum> {
        let big = self.conductor;
        if n == 0 {
            return None;
        }
        if big.is_multiple_of(n) {
            return Some(self.omega(k * (big / n) as i64));
        }
        // For odd N the field also holds the 2N-th roots: ω_{2N} = -ω_N^{(N+1)/2}.
        if big % 2 == 1 && (2 * big).is_multiple_of(n) {
            let e = k * (2 * big / n) as i64;
            let base = self.omega(e * ((big as i64 + 1) / 2));
            return Some(if e.rem_euclid(2) == 1 { -base } else { base });
        }
        None
    }
}

/// An element of Q(ω_N).
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{}]({})", self.field.conductor, self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coefficients();
        let mut first = true;
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = a.is_one();
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !unit {
                        write!(f, "{}*", a)?;
                    }
                    if k == 1 {
                        write!(f, "w")?;
                    } else {
                        write!(f, "w^{}", k)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Build an element from `(p, q, e)` terms meaning Σ (p/q)·ω_N^e.
pub fn canonicalize(field: &Arc<CycloField>, terms: &[(i64, i64, i64)]) -> Result<CycNum, CycloError> {
    let mut acc = field.zero();
    for (index, &(p, q, e)) in terms.iter().enumerate() {
        if q == 0 {
            return Err(CycloError::ZeroDenominator { index });
        }
        let c = BigRational::new(p.into(), q.into());
        acc = &acc + &(&field.omega(e) * &field.rational(c));
    }
    Ok(acc)
}

impl CycNum {
    fn normalized(field: Arc<CycloField>, mut num: Vec<BigInt>, mut den: BigInt) -> CycNum {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den = &den / &g;
        }
        CycNum { field, num, den }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    /// Rational coefficients in the power basis.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check(&self, other: &CycNum) -> Result<(), CycloError> {
        if self.field.conductor != other.field.conductor {
            Err(CycloError::ConductorMismatch { left: self.field.conductor, right: other.field.conductor })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &CycNum) -> Result<CycNum, CycloError> {
        self.check(other)?;
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            return Ok(CycNum::normalized(self.field.clone(), num, self.den.clone()));
        }
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den + b * &self.den).collect();
        Ok(CycNum::normalized(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn checked_mul(&self, other: &CycNum) -> Result<CycNum, CycloError> {
        self.check(other)?;
        let d = self.field.degree;
        if self.is_zero() || other.is_zero() {
            return Ok(self.field.zero());
        }
        let mut conv = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let mut out: Vec<BigInt> = conv[..d].to_vec();
        for (k, c) in conv.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (t, &r) in self.field.powers[k % self.field.conductor as usize].iter().enumerate() {
                if r != 0 {
                    out[t] += c * r;
                }
            }
        }
        Ok(CycNum::normalized(self.field.clone(), out, &self.den * &other.den))
    }

    pub fn scale(&self, q: &BigRational) -> CycNum {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        CycNum::normalized(self.field.clone(), num, &self.den * q.denom())
    }

    /// Multiplicative inverse.
    pub fn invert(&self) -> Result<CycNum, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.rational(q.recip()));
        }
        if let Some((c, k)) = self.as_monomial() {
            return Ok(self.field.omega(-(k as i64)).scale(&c.recip()));
        }
        // Extended Euclid: find s with s·a ≡ 1 mod Φ_N.
        let a: Vec<BigRational> = self.num.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let m: Vec<BigRational> = self.field.modulus.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        let (g, s) = poly_xgcd(trim(a), trim(m));
        // g is a nonzero constant since Φ_N is irreducible.
        let inv_g = g[0].recip();
        let mut coeffs: Vec<BigRational> = s.into_iter().map(|c| c * &inv_g).collect();
        coeffs.resize(self.field.degree, BigRational::zero());
        let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        // undo the common denominator of self
        let t = CycNum::normalized(self.field.clone(), num, lcm);
        Ok(t.scale(&BigRational::from_integer(self.den.clone())))
    }

    pub fn checked_div(&self, other: &CycNum) -> Result<CycNum, CycloError> {
        self.checked_mul(&other.invert()?)
    }

    /// If the value is c·ω^k with c rational, return (c, k).
    pub fn as_monomial(&self) -> Option<(BigRational, u32)> {
        let j = self.num.iter().position(|c| !c.is_zero())?;
        // c·ω^k has numerators proportional to the reduced vector of ω^k
        for (k, p) in self.field.powers.iter().enumerate() {
            if p[j] == 0 {
                continue;
            }
            let pj = BigInt::from(p[j]);
            let a = &self.num[j];
            if self.num.iter().zip(p).all(|(x, &y)| x * &pj == a * BigInt::from(y)) {
                return Some((BigRational::new(a.clone(), &self.den * pj), k as u32));
            }
        }
        None
    }

    /// If the value is a root of unity ζ, return (k, n) with ζ = ω_n^k in lowest terms.
    pub fn root_of_unity_exponent(&self) -> Option<(u32, u32)> {
        let (c, k) = self.as_monomial()?;
        let big = self.field.conductor as i64;
        let (k, modulus) = if c.is_one() {
            (k as i64, big)
        } else if c == -BigRational::one() {
            // -ω_N^k = ω_{2N}^{2k+N}
            (2 * k as i64 + big, 2 * big)
        } else {
            return None;
        };
        let g = k.gcd(&modulus);
        let kk = (k / g).rem_euclid(modulus / g);
        Some((kk as u32, (modulus / g) as u32))
    }

    pub fn pow(&self, mut e: u64) -> CycNum {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the embedding ω ↦ exp(2πi/N).
    pub fn embed_complex(&self) -> Complex64 {
        self.embed_galois(1)
    }

    /// Image under ω ↦ exp(2πi·a/N).
    pub fn embed_galois(&self, a: u32) -> Complex64 {
        let n = self.field.conductor as f64;
        let den = big_to_f64(&self.den);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * (a as f64) * (k as f64) / n;
            acc += Complex64::from_polar(1.0, ang) * big_to_f64(c);
        }
        acc / den
    }

    /// Reinterpret in Q(ω_M) for a multiple M of the conductor.
    pub fn lift(&self, target: &Arc<CycloField>) -> Result<CycNum, CycloError> {
        let n = self.field.conductor;
        if !target.conductor.is_multiple_of(n) {
            return Err(CycloError::NotAMultiple { base: n, target: target.conductor });
        }
        let step = (target.conductor / n) as i64;
        let mut acc = target.zero();
        for (k, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                let term = target.omega(step * k as i64).scale(&BigRational::from_integer(c.clone()));
                acc = &acc + &term;
            }
        }
        Ok(acc.scale(&BigRational::new(BigInt::one(), self.den.clone())))
    }

    /// A square root inside the field, if one exists and can be found.
    ///
    /// Tries c·ω^k first, then a numeric search over sign choices of the
    /// Galois conjugates, confirmed by exact squaring.
    pub fn sqrt(&self) -> Option<CycNum> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(r) = self.sqrt_monomial() {
            return Some(r);
        }
        self.sqrt_numeric()
    }

    fn sqrt_monomial(&self) -> Option<CycNum> {
        let (c, k) = self.as_monomial()?;
        let n = self.field.conductor;
        // self = c·ω^k; for even N also self = (-c)·ω^{k+N/2}.
        let mut forms = vec![(c.clone(), k)];
        if n.is_multiple_of(2) {
            forms.push((-c, (k + n / 2) % n));
        }
        for (c, k) in forms {
            let half = if k % 2 == 0 {
                k / 2
            } else if n % 2 == 1 {
                (k + n) / 2
            } else {
                continue;
            };
            let w = self.field.omega(half as i64);
            let root = if let Some(r) = rational_sqrt(&c) {
                w.scale(&r)
            } else if let (Some(r), Some(i)) = (rational_sqrt(&-c.clone()), self.field.root_of_unity(4, 1)) {
                &w * &i.scale(&r)
            } else {
                continue;
            };
            if &root * &root == *self {
                return Some(root);
            }
        }
        None
    }

    fn sqrt_numeric(&self) -> Option<CycNum> {
        let n = self.field.conductor;
        let d = self.field.degree;
        if d > 32 {
            return None;
        }
        let units: Vec<u32> = if n <= 2 { vec![1] } else { (1..n).filter(|a| a.gcd(&n) == 1).collect() };
        debug_assert_eq!(units.len(), d);
        // pair each unit with its complex conjugate; fix sign of the first
        let mut reps = Vec::new();
        let mut partner = vec![usize::MAX; d];
        for (i, &a) in units.iter().enumerate() {
            if partner[i] != usize::MAX {
                continue;
            }
            let j = units.iter().position(|&u| u + a == n).unwrap_or(i);
            partner[i] = j;
            partner[j] = i;
            reps.push(i);
        }
        // √(a/d) = √(a·d)/d, and √(a·d) is an algebraic integer, so it has
        // integer coordinates in the power basis.
        let integral = CycNum {
            field: self.field.clone(),
            num: self.num.iter().map(|c| c * &self.den).collect(),
            den: BigInt::one(),
        };
        let base: Vec<Complex64> = units.iter().map(|&a| integral.embed_galois(a).sqrt()).collect();
        let combos = 1u64 << (reps.len().saturating_sub(1));
        for mask in 0..combos {
            let mut vals = base.clone();
            for (bit, &i) in reps.iter().enumerate().skip(1) {
                if mask >> (bit - 1) & 1 == 1 {
                    vals[i] = -vals[i];
                }
                let j = partner[i];
                if j != i {
                    vals[j] = vals[i].conj();
                }
            }
            let j0 = partner[reps[0]];
            if j0 != reps[0] {
                vals[j0] = vals[reps[0]].conj();
            }
            if let Some(coeffs) = solve_vandermonde(&units, n, &vals) {
                if let Some(cand) = self.round_integral(&coeffs) {
                    if &cand * &cand == integral {
                        return Some(cand.scale(&BigRational::new(BigInt::one(), self.den.clone())));
                    }
                }
            }
        }
        None
    }

    fn round_integral(&self, coeffs: &[f64]) -> Option<CycNum> {
        let mut num = Vec::with_capacity(coeffs.len());
        for &c in coeffs {
            let r = c.round();
            if (c - r).abs() > 1e-6 * (1.0 + c.abs()) || r.abs() > 1e15 {
                return None;
            }
            num.push(BigInt::from(r as i64));
        }
        Some(CycNum { field: self.field.clone(), num, den: BigInt::one() })
    }
}

fn big_to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(f64::NAN)
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Solve Σ_k c_k ζ^{a k} = v_a for real c (least-effort Gaussian elimination).
fn solve_vandermonde(units: &[u32], n: u32, vals: &[Complex64]) -> Option<Vec<f64>> {
    let d = units.len();
    let mut m: Vec<Vec<Complex64>> = units
        .iter()
        .zip(vals)
        .map(|(&a, &v)| {
            let mut row: Vec<Complex64> = (0..d)
                .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (a as f64) * (k as f64) / n as f64))
                .collect();
            row.push(v);
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap())?;
        if m[piv][col].norm() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..d {
            if r != col {
                let f = m[r][col];
                if f.norm() > 0.0 {
                    for c in col..=d {
                        let t = m[col][c] * f;
                        m[r][c] -= t;
                    }
                }
            }
        }
    }
    let out: Vec<f64> = m.iter().map(|row| row[d]).map(|z| if z.im.abs() < 1e-6 { z.re } else { f64::NAN }).collect();
    if out.iter().any(|x| x.is_nan()) {
        None
    } else {
        Some(out)
    }
}

type RPoly = Vec<BigRational>;

fn trim(mut p: RPoly) -> RPoly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_sub(a: &RPoly, b: &RPoly) -> RPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn poly_mul(a: &RPoly, b: &RPoly) -> RPoly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(a: &RPoly, b: &RPoly) -> (RPoly, RPoly) {
    let mut rem = a.clone();
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (vec![BigRational::zero()], trim(rem));
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = &rem[i + db] / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    rem.truncate(db.max(1));
    (trim(q), trim(rem))
}

fn is_zero_poly(p: &RPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Returns (g, s) with s·a ≡ g (mod m).
fn poly_xgcd(a: RPoly, m: RPoly) -> (RPoly, RPoly) {
    let (mut r0, mut r1) = (a, m);
    let (mut s0, mut s1) = (vec![BigRational::one()], vec![BigRational::zero()]);
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    /// Panics on mismatched conductors; use `checked_add` for fallible input.
    fn add(self, rhs: &CycNum) -> CycNum {
        self.checked_add(rhs).expect("conductor mismatch")
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.checked_add(&-rhs).expect("conductor mismatch")
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.checked_mul(rhs).expect("conductor mismatch")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}
