//! Real-root isolation for exact polynomials (Descartes rule of signs with
//! dyadic bisection) and certified sup-norm bounds built on top of it.

use super::{PolyCoeffs, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn lcm_of_denominators(coeffs: &[Q]) -> BigInt {
    coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Taylor shift in place: coefficients of p(x + c).
fn taylor_shift<T>(a: &mut [T], c: &T)
where
    T: Clone + for<'x> std::ops::AddAssign<&'x T>,
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
{
    let n = a.len();
    if n < 2 {
        return;
    }
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let add = c * &a[j + 1];
            a[j] += &add;
        }
    }
}

fn sign_variations(a: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for c in a {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Upper bound on the number of roots of `a` in (0, 1).
fn descartes_unit(a: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = a.iter().rev().cloned().collect();
    taylor_shift(&mut r, &BigInt::one());
    sign_variations(&r)
}

/// A root location in the unit variable: either exact or an open dyadic interval.
#[derive(Debug, Clone)]
enum UnitRoot {
    Exact(Q),
    Interval(Q, Q),
}

fn isolate_unit(mut a: Vec<BigInt>, lo: Q, width: Q, out: &mut Vec<UnitRoot>, depth: usize) {
    while a.len() > 1 && a.last().map(|c| c.is_zero()).unwrap_or(false) {
        a.pop();
    }
    if a.len() <= 1 {
        return;
    }
    // exact root at the left endpoint
    if a[0].is_zero() {
        out.push(UnitRoot::Exact(lo.clone()));
        let mut k = 0;
        while k < a.len() && a[k].is_zero() {
            k += 1;
        }
        a.drain(0..k);
        if a.len() <= 1 {
            return;
        }
    }
    let v = descartes_unit(&a);
    if v == 0 {
        return;
    }
    if v == 1 {
        out.push(UnitRoot::Interval(lo.clone(), &lo + &width));
        return;
    }
    if depth > 4000 {
        // multiple root that cannot be separated; report the cell
        out.push(UnitRoot::Interval(lo.clone(), &lo + &width));
        return;
    }
    let d = a.len() - 1;
    // left half: 2^d p(y/2)
    let left: Vec<BigInt> = a
        .iter()
        .enumerate()
        .map(|(j, c)| c << (d - j))
        .collect();
    let mut right = left.clone();
    taylor_shift(&mut right, &BigInt::one());
    let half = &width / Q::from_integer(BigInt::from(2));
    let mid = &lo + &half;
    // a root exactly at the midpoint is not counted by the open-interval
    // Descartes test on the left; the right half reports it as exact
    isolate_unit(left, lo, half.clone(), out, depth + 1);
    isolate_unit(right, mid, half, out, depth + 1);
}

/// Evaluate exactly.
fn eval_q(p: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Certified (outward rounded) upper bound on sup |p(x)| over [a, b].
pub(crate) fn certified_sup(p: &PolyCoeffs, a: &Q, b: &Q) -> f64 {
    let coeffs = p.coeffs();
    let abs_at = |x: &Q| eval_q(coeffs, x).abs();
    let mut best = abs_at(a).max(abs_at(b));
    if a >= b || p.degree() == 0 {
        return round_up(&best);
    }
    let dp = p.derivative();
    let dcoeffs = dp.coeffs().to_vec();
    if dcoeffs.iter().all(|c| c.is_zero()) {
        return round_up(&best);
    }
    // q(y) = p'(a + (b - a) y) on y in [0, 1], cleared to integers
    let w = b - a;
    let mut shifted = dcoeffs.clone();
    taylor_shift(&mut shifted, a);
    let mut scale = Q::one();
    for c in shifted.iter_mut() {
        *c = &*c * &scale;
        scale = &scale * &w;
    }
    let l = lcm_of_denominators(&shifted);
    let ints: Vec<BigInt> = shifted
        .iter()
        .map(|c| (c * Q::from_integer(l.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    isolate_unit(ints.clone(), Q::zero(), Q::one(), &mut roots, 0);

    let to_x = |y: &Q| a + &w * y;
    // crude bound on |p'| over [a, b]
    let r = a.abs().max(b.abs());
    let mut k1 = Q::zero();
    let mut rp = Q::one();
    for c in &dcoeffs {
        k1 += c.abs() * &rp;
        rp = &rp * &r;
    }
    let qpoly = PolyCoeffs::new(shifted.clone());
    let qy = |y: &Q| -> Q { eval_q(&shifted, y) };

    for root in roots {
        match root {
            UnitRoot::Exact(y) => {
                best = best.max(abs_at(&to_x(&y)));
            }
            UnitRoot::Interval(mut lo, mut hi) => {
                // sign of q just to the right of lo (lo itself may be a root)
                let s_lo = sign_right_of(&qpoly, &lo);
                for _ in 0..600 {
                    let xl = to_x(&lo);
                    let xh = to_x(&hi);
                    let pl = abs_at(&xl);
                    let ph = abs_at(&xh);
                    let slack = (&xh - &xl) * &k1;
                    let scale = pl.max(ph);
                    let tiny = Q::new(BigInt::one(), BigInt::one() << 200);
                    if slack <= (&scale + &tiny) * Q::new(BigInt::one(), BigInt::one() << 60) {
                        break;
                    }
                    let mid = (&lo + &hi) / Q::from_integer(BigInt::from(2));
                    let s_mid = qy(&mid).signum();
                    if s_mid.is_zero() {
                        lo = mid.clone();
                        hi = mid;
                        break;
                    }
                    let move_lo = s_mid == s_lo;
                    if move_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let xl = to_x(&lo);
                let xh = to_x(&hi);
                let bound = abs_at(&xl).max(abs_at(&xh)) + (&xh - &xl) * &k1;
                best = best.max(bound);
            }
        }
    }
    round_up(&best)
}

/// Sign of `p` on a right neighbourhood of `y`: the sign of the first
/// nonvanishing derivative at `y`.
fn sign_right_of(p: &PolyCoeffs, y: &Q) -> Q {
    let mut d = p.clone();
    loop {
        let v = eval_q(d.coeffs(), y);
        if !v.is_zero() || d.degree() == 0 {
            return v.signum();
        }
        d = d.derivative();
    }
}

fn round_up(q: &Q) -> f64 {
    let v = q.to_f64().unwrap_or(f64::INFINITY);
    if v == 0.0 && q.is_zero() {
        return 0.0;
    }
    v.next_up()
}
