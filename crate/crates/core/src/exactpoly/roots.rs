//! Sturm sequences, certified real-root isolation and refinement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::Polynomial;
use crate::scalar::Scalar;
use crate::Rational;

/// End point of a counting interval.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound<T> {
    NegInf,
    Finite(T),
    PosInf,
}

/// Positive multiple of a rational polynomial with coprime integer
/// coefficients. Signs agree with the original, evaluation is integer-only.
#[derive(Clone, Debug)]
pub(crate) struct IntegerPoly {
    coeffs: Vec<BigInt>,
}

impl IntegerPoly {
    pub(crate) fn new(p: &Polynomial<Rational>) -> Self {
        let lcm = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut coeffs: Vec<BigInt> = p
            .coeffs()
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !content.is_zero() && !content.is_one() {
            for c in &mut coeffs {
                *c /= &content;
            }
        }
        IntegerPoly { coeffs }
    }

    /// Positive primitive multiple of `-(self mod divisor)`, or `None` when
    /// the remainder vanishes. Uses the integer pseudo-remainder
    /// `lc^(d+1) self mod divisor`, whose sign differs from the true
    /// remainder only when `lc < 0` and `d + 1` is odd.
    fn negated_remainder(&self, divisor: &IntegerPoly) -> Option<IntegerPoly> {
        let dd = divisor.degree();
        let lead = divisor.leading().expect("non-zero divisor");
        let mut rem = self.coeffs.clone();
        let mut steps = 0u32;
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.pop().expect("non-empty");
            let shift = rem.len() - dd;
            for c in rem.iter_mut() {
                *c *= lead;
            }
            if !top.is_zero() {
                for (j, dc) in divisor.coeffs[..dd].iter().enumerate() {
                    rem[shift + j] -= &top * dc;
                }
            }
            steps += 1;
            while rem.last().is_some_and(|c| c.is_zero()) && rem.len() > dd {
                rem.pop();
                for c in rem.iter_mut() {
                    *c *= lead;
                }
                steps += 1;
            }
        }
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
        if rem.is_empty() {
            return None;
        }
        let flip = lead.is_negative() && steps % 2 == 1;
        let content = rem.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        for c in rem.iter_mut() {
            *c /= &content;
            if !flip {
                *c = -&*c;
            }
        }
        Some(IntegerPoly { coeffs: rem })
    }


    pub(crate) fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Sign of the value at `x = p/q` via `sum a_i p^i q^(n-i)`.
    pub(crate) fn sign_at(&self, x: &Rational) -> i8 {
        let Some(lead) = self.coeffs.last() else {
            return 0;
        };
        let (p, q) = (x.numer(), x.denom());
        let mut acc = lead.clone();
        let mut qpow = BigInt::one();
        for a in self.coeffs.iter().rev().skip(1) {
            qpow *= q;
            acc = acc * p + a * &qpow;
        }
        sign(&acc)
    }

    fn sign_at_bound(&self, at: &Bound<Rational>) -> i8 {
        let lead = self.leading().map_or(0, sign);
        match at {
            Bound::Finite(x) => self.sign_at(x),
            Bound::PosInf => lead,
            Bound::NegInf if self.degree() % 2 == 1 => -lead,
            Bound::NegInf => lead,
        }
    }
}

fn sign(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of the square-free part of a polynomial. Each member is
/// stored as a positive multiple with integer coefficients, which leaves
/// every sign (and so every variation count) unchanged.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    square_free: Polynomial<Rational>,
    chain: Vec<IntegerPoly>,
}

impl SturmSequence {
    pub fn new(p: &Polynomial<Rational>) -> Self {
        let square_free = p.square_free_part();
        let mut chain = vec![IntegerPoly::new(&square_free)];
        let d = square_free.derivative();
        if !d.is_zero() {
            chain.push(IntegerPoly::new(&d));
        }
        while chain.len() >= 2 {
            let n = chain.len();
            match chain[n - 2].negated_remainder(&chain[n - 1]) {
                Some(r) => chain.push(r),
                None => break,
            }
        }
        SturmSequence { square_free, chain }
    }

    /// Monic square-free part the chain was built on.
    pub fn square_free(&self) -> &Polynomial<Rational> {
        &self.square_free
    }

    pub(crate) fn integer_head(&self) -> &IntegerPoly {
        &self.chain[0]
    }

    pub fn variations(&self, at: &Bound<Rational>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at_bound(at);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Bound<Rational>, hi: &Bound<Rational>) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Distinct real roots in the open interval `(lo, hi)`.
    pub fn count_open(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo >= hi {
            return 0;
        }
        let n = self.count(&Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()));
        if self.chain[0].sign_at(hi) == 0 {
            n - 1
        } else {
            n
        }
    }
}

/// Number of distinct real roots of `h` in `(lo, hi]`.
pub fn sturm_count(h: &Polynomial<Rational>, lo: &Bound<Rational>, hi: &Bound<Rational>) -> usize {
    if h.is_zero() {
        return 0;
    }
    SturmSequence::new(h).count(lo, hi)
}

/// Either an exact root (`lo == hi`) or an open interval `(lo, hi)` holding
/// exactly one real root of the polynomial it was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatingInterval {
    #[serde(serialize_with = "crate::cli::json::rational")]
    pub lo: Rational,
    #[serde(serialize_with = "crate::cli::json::rational")]
    pub hi: Rational,
    pub multiplicity: usize,
}

impl IsolatingInterval {
    pub fn point(r: Rational, multiplicity: usize) -> Self {
        IsolatingInterval {
            lo: r.clone(),
            hi: r,
            multiplicity,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_root(&self) -> Option<&Rational> {
        self.is_point().then_some(&self.lo)
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn approx(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Strictly left of `other` with no overlap.
    pub fn before(&self, other: &IsolatingInterval) -> bool {
        if self.is_point() || other.is_point() {
            self.hi < other.lo || (self.hi == other.lo && !(self.is_point() && other.is_point()))
        } else {
            self.hi <= other.lo
        }
    }
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]` (continued-fraction descent of the Stern-Brocot tree).
pub fn simplest_rational_in(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_rational_in(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_rational_in(
        &(Rational::one() / (hi - &fl)),
        &(Rational::one() / (lo - &fl)),
    );
    fl + Rational::one() / inner
}

/// Bisection on the sign of a square-free `p` inside an isolating interval
/// until the width drops to `eps` or an exact root turns up.
fn shrink(p: &IntegerPoly, iv: &mut IsolatingInterval, eps: &Rational) {
    if iv.is_point() {
        return;
    }
    let lo_sign = p.sign_at(&iv.lo);
    while iv.width() > *eps {
        let mid = iv.midpoint();
        let v = p.sign_at(&mid);
        if v == 0 {
            iv.lo = mid.clone();
            iv.hi = mid;
            return;
        }
        if v == lo_sign {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    }
}

fn bisect(
    seq: &SturmSequence,
    lo: Rational,
    hi: Rational,
    out: &mut Vec<(Rational, Rational)>,
) {
    let n = seq.count(&Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()));
    match n {
        0 => {}
        1 => out.push((lo, hi)),
        _ => {
            let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
            bisect(seq, lo, mid.clone(), out);
            bisect(seq, mid, hi, out);
        }
    }
}

/// `(lo, hi]` holds one root and `hi` is not it. When `lo` is itself a root
/// (of the neighbouring interval) move it inward so both ends are non-roots.
fn clear_left_root(seq: &SturmSequence, mut lo: Rational, mut hi: Rational) -> IsolatingInterval {
    let head = seq.integer_head();
    while head.sign_at(&lo) == 0 {
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        if head.sign_at(&mid) == 0 {
            return IsolatingInterval::point(mid, 0);
        }
        if seq.count(&Bound::Finite(lo.clone()), &Bound::Finite(mid.clone())) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    IsolatingInterval { lo, hi, multiplicity: 0 }
}

/// Certified isolation of every distinct real root of `h`, sorted ascending.
///
/// Each interval carries the multiplicity of its root in `h`. Rational roots
/// always come back as point intervals.
pub fn isolate_real_roots(h: &Polynomial<Rational>) -> Vec<IsolatingInterval> {
    if h.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let factors = h.square_free_decomposition();
    let seq = SturmSequence::new(h);
    let bound = seq.square_free().cauchy_bound();
    let mut raw = Vec::new();
    bisect(&seq, -bound.clone(), bound, &mut raw);

    let head = seq.integer_head();
    let lead = head.leading().expect("non-constant").abs();
    let irrational = no_rational_roots(head);

    raw.into_iter()
        .map(|(lo, hi)| {
            let mut iv = if head.sign_at(&hi) == 0 {
                IsolatingInterval::point(hi, 0)
            } else {
                clear_left_root(&seq, lo, hi)
            };
            if !iv.is_point() && !irrational {
                detect_rational(head, &lead, &mut iv);
            }
            iv.multiplicity = multiplicity_in(&factors, &iv);
            iv
        })
        .collect()
}

/// If `p/q` is a rational root and the prime `l` does not divide the leading
/// coefficient, `p q^-1` is a root modulo `l`. So a prime modulo which the
/// polynomial has no root proves there are no rational roots at all.
fn no_rational_roots(head: &IntegerPoly) -> bool {
    const PRIMES: [u64; 24] = [
        101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199,
        211, 223, 227,
    ];
    PRIMES.iter().any(|&l| {
        let m = BigInt::from(l);
        let reduced: Vec<u64> = head
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&m).try_into().expect("reduced below the prime"))
            .collect();
        if reduced.last() == Some(&0) {
            return false;
        }
        (0..l).all(|x| reduced.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % l) != 0)
    })
}

/// A rational root `p/q` of the primitive integer polynomial has `q | lead`.
/// Two rationals with denominators at most `lead` differ by at least
/// `1 / lead^2`, so once the interval is narrower than that its simplest
/// rational is the only candidate. The simplest rational is checked after
/// geometrically growing numbers of halvings, which finds small-denominator
/// roots early without paying a continued-fraction descent per halving.
fn detect_rational(head: &IntegerPoly, lead: &BigInt, iv: &mut IsolatingInterval) {
    let target = Rational::new(BigInt::one(), lead * lead);
    let mut halvings = 2u32;
    loop {
        let candidate = simplest_rational_in(&iv.lo, &iv.hi);
        if head.sign_at(&candidate) == 0 {
            *iv = IsolatingInterval::point(candidate, 0);
            return;
        }
        if candidate.denom() > lead || iv.width() < target {
            return;
        }
        let step = iv.width() / Rational::from_integer(BigInt::one() << halvings);
        let eps = if step < target { target.clone() / Rational::from_integer(BigInt::from(2)) } else { step };
        shrink(head, iv, &eps);
        if iv.is_point() {
            return;
        }
        halvings = halvings.saturating_mul(2).min(1 << 16);
    }
}

fn multiplicity_in(factors: &[(Polynomial<Rational>, usize)], iv: &IsolatingInterval) -> usize {
    for (g, m) in factors {
        let hit = match iv.exact_root() {
            Some(r) => g.eval(r).is_zero(),
            None => g.eval(&iv.lo).is_positive() != g.eval(&iv.hi).is_positive(),
        };
        if hit {
            return *m;
        }
    }
    1
}

/// A rational within `eps` of the root isolated by `iv`.
pub fn refine_root(h: &Polynomial<Rational>, iv: &IsolatingInterval, eps: &Rational) -> Rational {
    if let Some(r) = iv.exact_root() {
        return r.clone();
    }
    refine_with(&h.square_free_part(), iv, eps)
}

/// Like [`refine_root`] with the square-free part already at hand.
pub fn refine_with(sqf: &Polynomial<Rational>, iv: &IsolatingInterval, eps: &Rational) -> Rational {
    let work = refine_interval(sqf, iv, eps);
    if work.is_point() {
        work.lo
    } else {
        work.midpoint()
    }
}

/// Narrows `iv` (an isolating interval of a root of the square-free `sqf`)
/// to width at most `eps`, keeping the certificate.
pub fn refine_interval(sqf: &Polynomial<Rational>, iv: &IsolatingInterval, eps: &Rational) -> IsolatingInterval {
    let mut work = iv.clone();
    shrink(&IntegerPoly::new(sqf), &mut work, eps);
    work
}

/// Narrows `iv` until `x` is no longer strictly inside. Requires `x` not to be
/// the isolated root itself.
pub fn exclude_point(sqf: &Polynomial<Rational>, iv: &IsolatingInterval, x: &Rational) -> IsolatingInterval {
    let head = IntegerPoly::new(sqf);
    let mut work = iv.clone();
    while !work.is_point() && &work.lo < x && x < &work.hi {
        let half = work.width() / Rational::from_integer(BigInt::from(2));
        shrink(&head, &mut work, &half);
    }
    work
}

/// Default refinement tolerance, `10^-12`.
pub fn default_eps() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

/// Tolerance `10^-digits`.
pub fn eps_digits(digits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u64).pow(digits))
}


#[cfg(test)]
mod modular {
    use super::*;

    #[test]
    fn modular_certificate() {
        let q = |c: &[i64]| IntegerPoly::new(&Polynomial::from_i64s(c));
        assert!(no_rational_roots(&q(&[-2, 0, 1])));
        // (2x - 1)(x^2 - 2)
        assert!(!no_rational_roots(&q(&[2, -4, -1, 2])));
        // x^2 + 1 has roots modulo primes 1 mod 4 but not modulo 103
        assert!(no_rational_roots(&q(&[1, 0, 1])));
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::scalar::rational;

    /// Distinct rational roots with multiplicities, times `(x^2 + 1)^e`.
    fn factored() -> impl Strategy<Value = (Vec<(Rational, usize)>, u32)> {
        (prop::collection::btree_map((-40i64..41, 1i64..5), 1usize..4, 0..5), 0u32..2).prop_map(|(m, e)| {
            let mut roots: Vec<(Rational, usize)> = Vec::new();
            for ((n, d), mult) in m {
                let r = rational(n, d);
                if !roots.iter().any(|(q, _)| *q == r) {
                    roots.push((r, mult));
                }
            }
            roots.sort();
            (roots, e)
        })
    }

    fn build(roots: &[(Rational, usize)], e: u32) -> Polynomial<Rational> {
        let mut p = Polynomial::from_i64s(&[1, 0, 1]).pow(e);
        for (r, m) in roots {
            let lin = Polynomial::new(vec![-r.clone(), Rational::one()]);
            p = &p * &lin.pow(*m as u32);
        }
        p
    }

    proptest! {
        #[test]
        fn isolation_is_sound((roots, e) in factored()) {
            let p = build(&roots, e);
            prop_assume!(!p.is_constant());
            let ivs = isolate_real_roots(&p);
            prop_assert_eq!(ivs.len(), roots.len());
            for (iv, (r, m)) in ivs.iter().zip(&roots) {
                prop_assert!(iv.lo <= *r && *r <= iv.hi);
                prop_assert_eq!(iv.multiplicity, *m);
                // rational roots are always detected exactly
                prop_assert_eq!(iv.exact_root(), Some(r));
            }
            for w in ivs.windows(2) {
                prop_assert!(w[0].before(&w[1]));
            }
        }

        #[test]
        fn sturm_count_matches_roots((roots, e) in factored(), a in -60i64..61, b in -60i64..61, d in 1i64..4) {
            let p = build(&roots, e);
            prop_assume!(!p.is_constant());
            let (lo, hi) = (rational(a.min(b), d), rational(a.max(b), d));
            let expected = roots.iter().filter(|(r, _)| lo < *r && *r <= hi).count();
            let got = sturm_count(&p, &Bound::Finite(lo), &Bound::Finite(hi));
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn irrational_roots_isolated(n in 2i64..50, d in 1i64..9) {
            // x^2 - n/d, skipping perfect squares
            let p = Polynomial::new(vec![-rational(n, d), Rational::zero(), Rational::one()]);
            let ivs = isolate_real_roots(&p);
            prop_assert_eq!(ivs.len(), 2);
            let root = (n as f64 / d as f64).sqrt();
            for (iv, target) in ivs.iter().zip([-root, root]) {
                let r = refine_root(&p, iv, &eps_digits(12));
                prop_assert!((r.to_f64() - target).abs() < 1e-10);
            }
        }
    }
}
