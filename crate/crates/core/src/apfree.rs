//! Progression-free sets in integer intervals and cyclic groups.
//!
//! A set has *order* `w` when no three distinct elements satisfy
//! `c1*x + c2*y = (c1 + c2)*z` for positive integers `c1 + c2 <= w`.
//! Order 2 is the classical 3-AP-free condition (`x + y = 2z`). The
//! r-partite templates need order `r - 1`, because a loose triangle of
//! H(A, Z_t) whose links sit in parts `i, j, k` forces
//! `a1(k - i) + a2(i - j) + a3(j - k) = 0`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Sets larger than this are not exhaustively re-verified by constructors.
pub const VERIFY_LIMIT: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// Integers in `[0, N)`.
    Interval(u64),
    /// The cyclic group `Z_t`.
    Cyclic(u64),
}

impl Ambient {
    pub fn bound(self) -> u64 {
        match self {
            Ambient::Interval(n) | Ambient::Cyclic(n) => n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Digit,
    Behrend,
    Greedy,
    User,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Digit => "digit",
            Method::Behrend => "behrend",
            Method::Greedy => "greedy",
            Method::User => "user",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApFreeSet {
    pub ambient: Ambient,
    /// Strictly increasing.
    pub elements: Vec<u64>,
    /// Only meaningful together with `order`: verified free of relations
    /// with weight sum up to `order`.
    pub verified: bool,
    pub method: Method,
    pub order: u32,
}

impl ApFreeSet {
    /// Wraps user-supplied elements, verifying them at the given order.
    pub fn user(mut elements: Vec<u64>, ambient: Ambient, order: u32) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&x) = elements.iter().find(|&&x| x >= ambient.bound()) {
            return Err(Error::InvalidParameter(format!(
                "element {x} outside ambient range {}",
                ambient.bound()
            )));
        }
        if !verify_free(&elements, ambient, order) {
            return Err(Error::NotProgressionFree(format!(
                "{elements:?} in {ambient:?} at order {order}"
            )));
        }
        Ok(Self {
            ambient,
            elements,
            verified: true,
            method: Method::User,
            order,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    /// Re-runs the exhaustive check in this set's own ambient and order.
    pub fn recheck(&self) -> bool {
        verify_free(&self.elements, self.ambient, self.order)
    }
}

/// Integers below `bound` whose base-3 digits are all 0 or 1.
pub fn digit_apfree(bound: u64) -> ApFreeSet {
    digit_free(bound, 2)
}

/// Integers below `bound` whose base-`(order + 1)` digits are all 0 or 1.
///
/// Digitwise `c1*x_i + c2*y_i <= order` never carries, so a relation
/// `c1*x + c2*y = (c1 + c2)*z` holds digit by digit, which forces
/// `x = y = z` for 0/1 digits.
pub fn digit_free(bound: u64, order: u32) -> ApFreeSet {
    assert!(order >= 2, "order must be at least 2");
    let base = order as u64 + 1;
    let mut elements = Vec::new();
    for bits in 0u64.. {
        let v = binary_digits_in_base(bits, base);
        match v {
            Some(v) if v < bound => elements.push(v),
            _ => break,
        }
    }
    ApFreeSet {
        ambient: Ambient::Interval(bound),
        elements,
        verified: true,
        method: Method::Digit,
        order,
    }
}

/// Reads the binary digits of `bits` as digits in `base`. `None` on overflow.
fn binary_digits_in_base(mut bits: u64, base: u64) -> Option<u64> {
    let (mut v, mut place) = (0u64, 1u64);
    while bits > 0 {
        if bits & 1 == 1 {
            v = v.checked_add(place)?;
        }
        bits >>= 1;
        if bits > 0 {
            place = place.checked_mul(base)?;
        }
    }
    Some(v)
}

/// Behrend's sphere construction for 3-AP-free sets below `bound`.
pub fn behrend_apfree(bound: u64) -> ApFreeSet {
    behrend_free(bound, 2)
}

/// Behrend's construction at a general order.
///
/// Lattice points `x in {0..d-1}^k` on the most populated sphere
/// `|x|^2 = s` are encoded as `sum x_i * base^i` with
/// `base = order*(d-1) + 1`, so weighted sums of up to `order` digits never
/// carry and strict convexity of the sphere rules out every relation.
/// The parameter grid is `k in 2..=ceil(sqrt(log2 bound)) + 2` with the
/// largest `d` such that `base^k <= bound`.
pub fn behrend_free(bound: u64, order: u32) -> ApFreeSet {
    assert!(order >= 2, "order must be at least 2");
    let kmax = ((bound.max(2) as f64).log2().sqrt().ceil() as u32) + 2;
    let mut best: Option<Vec<u64>> = None;
    for k in 2..=kmax {
        let Some(d) = max_digit_range(bound, order, k) else {
            continue;
        };
        let Some(points) = (d as u128).checked_pow(k) else {
            continue;
        };
        if points > 50_000_000 {
            continue;
        }
        let shell = best_shell(d, k, order as u64 * (d - 1) + 1);
        if best.as_ref().is_none_or(|b| shell.len() > b.len()) {
            best = Some(shell);
        }
    }
    let Some(mut elements) = best else {
        return digit_free(bound, order);
    };
    elements.sort_unstable();
    let verified =
        elements.len() <= VERIFY_LIMIT && verify_free(&elements, Ambient::Interval(bound), order);
    ApFreeSet {
        ambient: Ambient::Interval(bound),
        elements,
        verified,
        method: Method::Behrend,
        order,
    }
}

/// Largest `d >= 2` with `(order*(d-1) + 1)^k <= bound`.
fn max_digit_range(bound: u64, order: u32, k: u32) -> Option<u64> {
    let fits = |d: u64| {
        (order as u128 * (d as u128 - 1) + 1)
            .checked_pow(k)
            .is_some_and(|p| p <= bound as u128)
    };
    if !fits(2) {
        return None;
    }
    let (mut lo, mut hi) = (2u64, 2u64);
    while fits(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn best_shell(d: u64, k: u32, base: u64) -> Vec<u64> {
    let max_norm = k as usize * ((d - 1) * (d - 1)) as usize;
    let mut counts = vec![0usize; max_norm + 1];
    let mut digits = vec![0u64; k as usize];
    loop {
        let norm: u64 = digits.iter().map(|x| x * x).sum();
        counts[norm as usize] += 1;
        if !advance(&mut digits, d) {
            break;
        }
    }
    let target = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(s, _)| s as u64)
        .unwrap_or(0);
    let mut out = Vec::with_capacity(counts[target as usize]);
    digits.iter_mut().for_each(|x| *x = 0);
    loop {
        let norm: u64 = digits.iter().map(|x| x * x).sum();
        if norm == target {
            out.push(digits.iter().rev().fold(0u64, |acc, &x| acc * base + x));
        }
        if !advance(&mut digits, d) {
            break;
        }
    }
    out
}

/// Odometer increment over `{0..d-1}^k`; false after the last point.
fn advance(digits: &mut [u64], d: u64) -> bool {
    for x in digits.iter_mut() {
        *x += 1;
        if *x < d {
            return true;
        }
        *x = 0;
    }
    false
}

/// Greedy Salem-Spencer style set: scans `0..bound` and keeps every value
/// that creates no relation with the values kept so far.
pub fn greedy_free(bound: u64, order: u32) -> ApFreeSet {
    assert!(order >= 2, "order must be at least 2");
    let mut elements: Vec<u64> = Vec::new();
    let mut members: HashSet<u64> = HashSet::new();
    for z in 0..bound {
        // z is the largest element of any new relation, so it is an extreme
        // point: c1*x + c2*z = (c1 + c2)*y with x < y < z.
        let bad = elements.iter().any(|&x| {
            weights(order).any(|(c1, c2)| {
                let num = c1 * x + c2 * z;
                let s = c1 + c2;
                num % s == 0 && members.contains(&(num / s))
            })
        });
        if !bad {
            elements.push(z);
            members.insert(z);
        }
    }
    ApFreeSet {
        ambient: Ambient::Interval(bound),
        elements,
        verified: true,
        method: Method::Greedy,
        order,
    }
}

/// Larger of the digit and Behrend 3-AP-free sets; ties go to digit.
pub fn best_apfree(bound: u64) -> ApFreeSet {
    best_free(bound, 2)
}

pub fn best_free(bound: u64, order: u32) -> ApFreeSet {
    let digit = digit_free(bound, order);
    let behrend = behrend_free(bound, order);
    if behrend.len() > digit.len() && behrend.verified {
        behrend
    } else {
        digit
    }
}

/// Exhaustive 3-AP check: `true` iff no three distinct elements form an
/// arithmetic progression (mod t in cyclic mode).
pub fn verify_no_3ap(elements: &[u64], ambient: Ambient) -> bool {
    verify_free(elements, ambient, 2)
}

/// Exhaustive check over ordered pairs and weight pairs, `O(|S|^2 w^2)`.
pub fn verify_free(elements: &[u64], ambient: Ambient, order: u32) -> bool {
    let members: HashSet<u64> = elements.iter().copied().collect();
    for &x in elements {
        for &y in elements {
            if x == y {
                continue;
            }
            for (c1, c2) in weights(order) {
                let s = c1 + c2;
                let hit = match ambient {
                    Ambient::Interval(_) => {
                        let num = c1 * x + c2 * y;
                        num % s == 0 && members.contains(&(num / s))
                    }
                    Ambient::Cyclic(t) => cyclic_solutions(c1, c2, x, y, t)
                        .any(|z| z != x && z != y && members.contains(&z)),
                };
                if hit {
                    return false;
                }
            }
        }
    }
    true
}

/// Weight pairs `(c1, c2)` with `c1, c2 >= 1` and `c1 + c2 <= order`.
fn weights(order: u32) -> impl Iterator<Item = (u64, u64)> {
    let w = order as u64;
    (1..w).flat_map(move |c1| (1..=w - c1).map(move |c2| (c1, c2)))
}

/// All `z` in `Z_t` with `(c1 + c2) z = c1 x + c2 y (mod t)`.
fn cyclic_solutions(c1: u64, c2: u64, x: u64, y: u64, t: u64) -> impl Iterator<Item = u64> {
    let t128 = t as u128;
    let num = ((c1 as u128 * x as u128) + (c2 as u128 * y as u128)) % t128;
    let s = (c1 + c2) as u128 % t128;
    let g = gcd(s, t128);
    let (base, step, count) = if !num.is_multiple_of(g) {
        (0, 0, 0)
    } else {
        let tg = t128 / g;
        let inv = mod_inverse(s / g, tg).unwrap_or(0);
        ((num / g) * inv % tg, tg, g)
    };
    (0..count).map(move |i| (base + i * step) as u64)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u128)
}

/// Views an interval set inside `Z_t`. Requires `factor * max < t` with
/// `factor = max(3, order)`, which keeps every relation from wrapping.
pub fn embed_cyclic(set: &ApFreeSet, t: u64) -> Result<ApFreeSet> {
    let factor = (set.order as u64).max(3);
    if let Some(max) = set.max() {
        if (max as u128) * factor as u128 >= t as u128 {
            return Err(Error::EmbeddingRejected { max, t, factor });
        }
    }
    if t == 0 {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    let ambient = Ambient::Cyclic(t);
    let verified =
        set.verified && set.len() <= VERIFY_LIMIT && verify_free(&set.elements, ambient, set.order);
    Ok(ApFreeSet {
        ambient,
        elements: set.elements.clone(),
        verified,
        method: set.method,
        order: set.order,
    })
}
