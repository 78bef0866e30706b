//! Univariate rational polynomials, Sturm sequences and minimal polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{shape, Result};
use crate::linalg::{linear_solve, Matrix};
use crate::scalar::Scalar;

/// Polynomial with coefficients in increasing degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
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
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `t - r`.
    pub fn linear_root(r: &Scalar) -> Self {
        Self::new(vec![-r, Scalar::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Scalar::zero();
        Self::new(
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z)).collect(),
        )
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        let mut quo = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() * &lead_inv;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            quo[k] = f;
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        (Self::new(quo), Self::new(r))
    }

    pub fn derivative(&self) -> Polynomial {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Scalar::from_int(k as i64)).collect(),
        )
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Rescales by a positive rational so the coefficients are coprime
    /// integers. Signs (and therefore Sturm sign patterns) are preserved.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Self::zero();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(&c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        Self::new(ints.into_iter().map(|x| Scalar::from(x / &g)).collect())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1.primitive();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`, each term made primitive
    /// by a positive rescaling to keep coefficients small.
    pub fn sturm_chain(&self) -> Vec<Polynomial> {
        let mut chain = vec![self.primitive()];
        let d = self.derivative().primitive();
        if d.is_zero() {
            return chain;
        }
        chain.push(d);
        loop {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.primitive().scale(&Scalar::from_int(-1)));
        }
        chain
    }

    fn sign_at_infinity(&self, positive: bool) -> i32 {
        let s = self.leading().signum();
        match self.degree() {
            Some(d) if !positive && d % 2 == 1 => -s,
            _ => s,
        }
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut prev = 0;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if prev != 0 && s != prev {
                v += 1;
            }
            prev = s;
        }
        v
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        let chain = self.sturm_chain();
        let neg = Self::variations(chain.iter().map(|p| p.sign_at_infinity(false)));
        let pos = Self::variations(chain.iter().map(|p| p.sign_at_infinity(true)));
        neg - pos
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots_in(&self, chain: &[Polynomial], a: &Scalar, b: &Scalar) -> usize {
        let va = Self::variations(chain.iter().map(|p| p.eval(a).signum()));
        let vb = Self::variations(chain.iter().map(|p| p.eval(b).signum()));
        va.saturating_sub(vb)
    }

    /// A bound `B` with every real root in `(-B, B)`.
    pub fn root_bound(&self) -> Scalar {
        let lead = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len() - 1].iter().map(|c| c.abs() / &lead).max();
        Scalar::one() + m.unwrap_or_else(Scalar::zero)
    }

    /// Disjoint rational intervals `(a, b]`, each containing exactly one
    /// distinct real root, in increasing order.
    pub fn isolate_real_roots(&self) -> Vec<(Scalar, Scalar)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let chain = self.sturm_chain();
        let b = self.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-&b, b)];
        while let Some((lo, hi)) = stack.pop() {
            match self.count_roots_in(&chain, &lo, &hi) {
                0 => {}
                1 => out.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) * Scalar::frac(1, 2);
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        out.sort();
        out
    }

    /// Shrinks an isolating interval `(a, b]` until its width is below `eps`.
    pub fn refine_root(&self, (mut a, mut b): (Scalar, Scalar), eps: &Scalar) -> (Scalar, Scalar) {
        let chain = self.sturm_chain();
        let half = Scalar::frac(1, 2);
        while &b - &a > *eps {
            let mid = (&a + &b) * &half;
            if self.count_roots_in(&chain, &a, &mid) == 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
        (a, b)
    }

    /// All rational roots (distinct), in increasing order.
    ///
    /// For a primitive integer polynomial, a rational root `p/q` has `q`
    /// dividing the leading coefficient `a`, so `a * root` is an integer;
    /// isolating intervals are refined until they pin that integer down.
    pub fn rational_roots(&self) -> Vec<Scalar> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sq = self.div_rem(&self.gcd(&self.derivative())).0.primitive();
        let lead = sq.leading().abs();
        let eps = lead.recip() * Scalar::frac(1, 2);
        let mut roots = Vec::new();
        for iv in sq.isolate_real_roots() {
            let (a, b) = sq.refine_root(iv, &eps);
            let lo = (&a * &lead).floor();
            let hi = (&b * &lead).floor() + BigInt::one();
            let mut k = lo;
            while k <= hi {
                let cand = Scalar::from(k.clone()) / &lead;
                if cand > a && cand <= b && sq.eval(&cand).is_zero() {
                    roots.push(cand);
                    break;
                }
                k += 1;
            }
        }
        roots
    }
}

/// Minimal polynomial of a square matrix (monic).
pub fn minimal_polynomial(m: &Matrix) -> Result<Polynomial> {
    if !m.is_square() {
        return Err(shape("minimal polynomial of a non-square matrix"));
    }
    let n = m.rows();
    let mut powers = vec![Matrix::identity(n).flatten()];
    let mut cur = Matrix::identity(n);
    loop {
        cur = cur.mul(m);
        let target = cur.flatten();
        let a = Matrix::from_cols(n * n, &powers);
        if let Some(c) = linear_solve(&a, &target)?.particular {
            let mut coeffs: Vec<Scalar> = c.into_iter().map(|x| -x).collect();
            coeffs.push(Scalar::one());
            return Ok(Polynomial::new(coeffs));
        }
        powers.push(target);
    }
}

/// Outcome of the real-semisimplicity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemisimpleReport {
    pub semisimple: bool,
    pub min_poly: Polynomial,
    pub squarefree: bool,
    pub real_roots: usize,
    pub real_rooted: bool,
}

/// Is `m` diagonalizable over the reals? Certified by a squarefree minimal
/// polynomial whose Sturm count equals its degree.
pub fn real_semisimple_test(m: &Matrix) -> Result<SemisimpleReport> {
    let p = minimal_polynomial(m)?;
    let squarefree = p.is_squarefree();
    let real_roots = p.count_real_roots();
    let real_rooted = Some(real_roots) == p.degree();
    Ok(SemisimpleReport { semisimple: squarefree && real_rooted, min_poly: p, squarefree, real_roots, real_rooted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn semisimple_examples() {
        let r = real_semisimple_test(&Matrix::identity(2)).unwrap();
        assert!(r.semisimple);
        assert_eq!(r.min_poly, Polynomial::from_ints(&[-1, 1]));

        let rot = real_semisimple_test(&Matrix::from_ints(2, 2, &[0, -1, 1, 0])).unwrap();
        assert!(!rot.semisimple);
        assert_eq!(rot.min_poly.to_string(), "t^2 + 1");
        assert_eq!(rot.real_roots, 0);
        assert!(rot.squarefree);

        let jb = real_semisimple_test(&Matrix::from_ints(2, 2, &[0, 1, 0, 0])).unwrap();
        assert!(!jb.semisimple);
        assert_eq!(jb.min_poly.to_string(), "t^2");
        assert!(!jb.squarefree);
    }

    #[test]
    fn sturm_counts() {
        // (t-1)(t-2)(t+3)
        let p = Polynomial::from_ints(&[-1, 1]).mul(&Polynomial::from_ints(&[-2, 1])).mul(&Polynomial::from_ints(&[3, 1]));
        assert_eq!(p.count_real_roots(), 3);
        assert_eq!(p.rational_roots(), vec![qi(-3), qi(1), qi(2)]);
        // t^2 - 2 has two irrational roots
        let s = Polynomial::from_ints(&[-2, 0, 1]);
        assert_eq!(s.count_real_roots(), 2);
        assert!(s.rational_roots().is_empty());
        assert_eq!(s.isolate_real_roots().len(), 2);
    }

    #[test]
    fn rational_roots_with_large_denominators() {
        let r1 = q(123457, 1000003);
        let r2 = q(-999999, 7);
        let p = Polynomial::linear_root(&r1).mul(&Polynomial::linear_root(&r2)).mul(&Polynomial::from_ints(&[-3, 0, 1]));
        assert_eq!(p.rational_roots(), vec![r2, r1]);
    }

    #[test]
    fn display() {
        assert_eq!(Polynomial::from_ints(&[1, -2, 0, 3]).to_string(), "3t^3 - 2t + 1");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn min_poly_annihilates(v in proptest::collection::vec(-3i64..4, 9)) {
                let m = Matrix::from_ints(3, 3, &v);
                let p = minimal_polynomial(&m).unwrap();
                let mut acc = Matrix::zeros(3, 3);
                let mut pw = Matrix::identity(3);
                for c in p.coeffs() {
                    acc = acc.add(&pw.scale(c));
                    pw = pw.mul(&m);
                }
                prop_assert!(acc.is_zero());
            }

            #[test]
            fn product_of_linear_factors_is_real_rooted(r in proptest::collection::btree_set(-20i64..20, 1..5)) {
                let mut p = Polynomial::constant(qi(1));
                for x in &r {
                    p = p.mul(&Polynomial::linear_root(&qi(*x)));
                }
                prop_assert_eq!(p.count_real_roots(), r.len());
                prop_assert!(p.is_squarefree());
                let roots: Vec<Scalar> = r.iter().map(|x| qi(*x)).collect();
                prop_assert_eq!(p.rational_roots(), roots);
            }

            #[test]
            fn divisibility(a in proptest::collection::vec(-5i64..6, 1..5), b in proptest::collection::vec(-5i64..6, 1..4)) {
                let pa = Polynomial::from_ints(&a);
                let pb = Polynomial::from_ints(&b);
                prop_assume!(!pb.is_zero());
                let (qq, r) = pa.div_rem(&pb);
                prop_assert_eq!(qq.mul(&pb).add(&r), pa);
                prop_assert!(r.degree().is_none_or(|d| d < pb.degree().unwrap()));
            }
        }
    }
}
