//! Intersection numbers of ψ-class products, by two independent routes.
//!
//! The primary route counts the fixed points of the hue involution
//! ([`crate::hue`]). The oracle route evaluates the inclusion–exclusion
//! formula directly: a signed sum over monochromatic set partitions of the
//! marked points of multinomial coefficients. The two are developed
//! independently so that `method=both` is a genuine cross-check, and they
//! are compared exhaustively in the test suites.

use num::{BigInt, BigRational, One, Zero};

use crate::decoration::ExponentProfile;
use crate::graph::ColorProfile;
use crate::hue::count_fixed_points;
use crate::{invalid, Error, Result};

/// Which computation backs an intersection-number query.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    FixedPoints,
    Oracle,
    /// Run both concurrently and insist they agree.
    Both,
}

fn factorials(upto: usize) -> Vec<BigInt> {
    let mut f = Vec::with_capacity(upto + 1);
    f.push(BigInt::one());
    for i in 1..=upto {
        let next = &f[i - 1] * BigInt::from(i);
        f.push(next);
    }
    f
}

/// Exact multinomial coefficient (Σ parts)! / Π(parts!).
pub fn multinomial(parts: &[usize]) -> BigInt {
    let total: usize = parts.iter().sum();
    let fact = factorials(total);
    let mut denom = BigInt::one();
    for &p in parts {
        denom *= &fact[p];
    }
    &fact[total] / denom
}

/// Exact binomial coefficient, zero when k > n.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        multinomial(&[k, n - k])
    }
}

/// The inclusion–exclusion oracle: Σ over monochromatic set partitions 𝒫 of
/// the marked points of (−1)^{Σ_B(|B|−1)} · multinomial(ℓ(𝒫)−3; k_B−|B|+1),
/// a term being zero whenever some entry k_B − |B| + 1 is negative. Blocks
/// without a boxed point are restricted to singletons, which changes
/// nothing: such a block of size ≥ 2 has a negative entry.
pub fn multinomial_oracle(e: &ExponentProfile) -> BigInt {
    let n = e.n();
    let fact = factorials(n);
    // Per color, a polynomial in the block count ℓ whose x^s coefficient is
    // Σ over partitions of the class into s blocks of Π_B 1/(k_B−|B|+1)!.
    // The full sum is then Σ_ℓ (−1)^{n−ℓ} (ℓ−3)! [x^ℓ] Π_j poly_j.
    let mut poly = vec![BigRational::one()];
    for j in 0..e.profile().m() {
        poly = convolve(&poly, &color_polynomial(e, j, &fact));
    }
    let mut total = BigRational::zero();
    for (ell, coeff) in poly.iter().enumerate() {
        if ell < 3 || coeff.is_zero() {
            continue;
        }
        let mut term = coeff * BigRational::from_integer(fact[ell - 3].clone());
        if (n - ell) % 2 == 1 {
            term = -term;
        }
        total += term;
    }
    debug_assert!(total.is_integer());
    total.to_integer()
}

fn convolve(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Partitions one color class, accumulating Π_B 1/(k_B−|B|+1)! by block
/// count. Canonical layout lists the boxed points of the class first, so a
/// block opened by an unboxed point can never gain a boxed member: joins
/// that would force a negative entry are pruned on the spot.
fn color_polynomial(e: &ExponentProfile, color: usize, fact: &[BigInt]) -> Vec<BigRational> {
    let points: Vec<usize> = e.profile().class_range(color).collect();
    let mut poly = vec![BigRational::zero(); points.len() + 1];
    // Blocks as (exponent total, size).
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    descend(e, &points, 0, &mut blocks, fact, &mut poly);
    return poly;

    fn descend(
        e: &ExponentProfile,
        points: &[usize],
        i: usize,
        blocks: &mut Vec<(usize, usize)>,
        fact: &[BigInt],
        poly: &mut [BigRational],
    ) {
        if i == points.len() {
            let mut weight = BigRational::one();
            for &(k, size) in blocks.iter() {
                if k + 1 < size {
                    return;
                }
                weight /= BigRational::from_integer(fact[k + 1 - size].clone());
            }
            poly[blocks.len()] += weight;
            return;
        }
        let p = points[i];
        let kp = e.exponent(p);
        for idx in 0..blocks.len() {
            let (k, size) = blocks[idx];
            // An unboxed join lowers k_B − |B| + 1 for good (later points of
            // the class are unboxed too), so prune it from a zero already.
            if kp == 0 && k < size {
                continue;
            }
            blocks[idx] = (k + kp, size + 1);
            descend(e, points, i + 1, blocks, fact, poly);
            blocks[idx] = (k, size);
        }
        blocks.push((kp, 1));
        descend(e, points, i + 1, blocks, fact, poly);
        blocks.pop();
    }
}

/// The intersection number ∫ Πψᵢ^{kᵢ} of the profile, by the requested
/// method. `Both` runs the fixed-point count and the oracle on separate
/// threads and errors with an internal-consistency failure if they differ.
pub fn intersection_number(e: &ExponentProfile, method: Method) -> Result<BigInt> {
    match method {
        Method::FixedPoints => Ok(BigInt::from(count_fixed_points(e))),
        Method::Oracle => Ok(multinomial_oracle(e)),
        Method::Both => {
            let (fixed, oracle) = std::thread::scope(|scope| {
                let fixed = scope.spawn(|| BigInt::from(count_fixed_points(e)));
                let oracle = scope.spawn(|| multinomial_oracle(e));
                (
                    fixed.join().expect("fixed-point thread panicked"),
                    oracle.join().expect("oracle thread panicked"),
                )
            });
            if fixed != oracle {
                return Err(Error::Inconsistency(format!(
                    "fixed-point count {fixed} disagrees with the multinomial oracle \
                     {oracle} on {e}"
                )));
            }
            Ok(fixed)
        }
    }
}

/// Two heavy points and n light ones: ∫ψ₀^a ψ∞^b Πψᵢ^{kᵢ} over the space of
/// chains of rational curves. Zero when any light exponent is positive,
/// C(n−1, a) otherwise.
pub fn losev_manin_value(
    n: usize,
    a: usize,
    b: usize,
    light_exponents: &[usize],
) -> Result<BigInt> {
    if n == 0 {
        return Err(invalid("at least one light point is required"));
    }
    if light_exponents.len() != n {
        return Err(invalid(format!(
            "expected {n} light exponents, got {}",
            light_exponents.len()
        )));
    }
    let total = a + b + light_exponents.iter().sum::<usize>();
    if total != n - 1 {
        return Err(invalid(format!(
            "exponents total {total}, expected the dimension n − 1 = {}",
            n - 1
        )));
    }
    if light_exponents.iter().any(|&k| k > 0) {
        return Ok(BigInt::zero());
    }
    Ok(binomial(n - 1, a))
}

/// The multicolored profile `[1, n, 1]` realizing the two-heavy-points
/// space: ψ₀ at the first point, the light points in the middle class, ψ∞
/// last. Light exponents are normalized into canonical layout.
pub fn losev_manin_profile(
    n: usize,
    a: usize,
    b: usize,
    light_exponents: &[usize],
) -> Result<ExponentProfile> {
    if light_exponents.len() != n {
        return Err(invalid(format!(
            "expected {n} light exponents, got {}",
            light_exponents.len()
        )));
    }
    let profile = ColorProfile::new(vec![1, n, 1])?;
    let mut exponents = vec![0usize; n + 2];
    exponents[0] = a;
    exponents[n + 1] = b;
    exponents[1..=n].copy_from_slice(light_exponents);
    ExponentProfile::normalized(profile, exponents)
}

/// Merges two colors that carry only zero exponents and verifies that the
/// intersection number is unchanged (computing both sides with cross-checked
/// methods). Errors if either color is boxed or fewer than three colors
/// would remain.
pub fn color_merge_check(e: &ExponentProfile, j1: usize, j2: usize) -> Result<bool> {
    let m = e.profile().m();
    if j1 >= m || j2 >= m || j1 == j2 {
        return Err(invalid("two distinct color indices are required"));
    }
    if m - 1 < 3 {
        return Err(invalid("merging would leave fewer than three colors"));
    }
    for j in [j1, j2] {
        if e.color_exponent_total(j) != 0 {
            return Err(invalid(format!(
                "color {} carries a positive exponent and cannot be merged",
                j + 1
            )));
        }
    }
    let (lo, hi) = (j1.min(j2), j1.max(j2));
    let sizes_in = e.profile().sizes();
    let mut sizes = Vec::with_capacity(m - 1);
    let mut exponents = Vec::with_capacity(e.n());
    for j in 0..m {
        if j == hi {
            continue;
        }
        if j == lo {
            sizes.push(sizes_in[lo] + sizes_in[hi]);
            exponents.extend(e.profile().class_range(lo).map(|p| e.exponent(p)));
            exponents.extend(e.profile().class_range(hi).map(|p| e.exponent(p)));
        } else {
            sizes.push(sizes_in[j]);
            exponents.extend(e.profile().class_range(j).map(|p| e.exponent(p)));
        }
    }
    let merged = ExponentProfile::new(ColorProfile::new(sizes)?, exponents)?;
    Ok(intersection_number(e, Method::Both)? == intersection_number(&merged, Method::Both)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoration::{
        canonical_exponent_vectors, decoration_sign, for_each_decoration,
    };

    fn exponents(sizes: &[usize], pairs: &[(usize, usize)]) -> ExponentProfile {
        let p = ColorProfile::new(sizes.to_vec()).unwrap();
        let mut k = vec![0usize; p.n()];
        for &(point, kv) in pairs {
            k[point - 1] = kv;
        }
        ExponentProfile::new(p, k).unwrap()
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[2, 2, 3]), BigInt::from(210));
        assert_eq!(multinomial(&[]), BigInt::one());
        assert_eq!(multinomial(&[0, 0]), BigInt::one());
        assert_eq!(binomial(6, 4), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn oracle_worked_value() {
        // ψ₁²ψ₆²ψ₇³ on [5,4,1].
        let e = exponents(&[5, 4, 1], &[(1, 2), (6, 2), (7, 3)]);
        assert_eq!(multinomial_oracle(&e), BigInt::from(9));
        assert_eq!(intersection_number(&e, Method::Both).unwrap(), BigInt::from(9));
    }

    #[test]
    fn oracle_on_a_point() {
        let e = exponents(&[1, 1, 1], &[]);
        assert_eq!(multinomial_oracle(&e), BigInt::one());
        assert_eq!(intersection_number(&e, Method::Both).unwrap(), BigInt::one());
    }

    /// With every color a singleton there are no collisions and the classic
    /// formula multinomial(n−3; k₁,…,kₙ) must come back.
    #[test]
    fn singleton_colors_recover_multinomial() {
        for n in 4..=7 {
            let profile = ColorProfile::new(vec![1; n]).unwrap();
            for e in canonical_exponent_vectors(&profile) {
                let ks: Vec<usize> = e.exponents().to_vec();
                assert_eq!(
                    multinomial_oracle(&e),
                    multinomial(&ks),
                    "oracle broke the classic formula at {e}"
                );
            }
        }
    }

    /// The signed sum over all decorations is what the oracle computes — the
    /// two sides are built by unrelated code paths.
    #[test]
    fn oracle_matches_signed_decoration_sum() {
        for (sizes, pairs) in [
            (vec![2, 2, 1], vec![(1, 1), (3, 1)]),
            (vec![3, 1, 1], vec![(1, 2)]),
            (vec![2, 1, 1, 1], vec![(1, 1), (3, 1)]),
            (vec![1, 2, 2], vec![(2, 1), (4, 1)]),
        ] {
            let e = exponents(&sizes, &pairs);
            let mut signed = BigInt::zero();
            for_each_decoration(&e, |d| signed += decoration_sign(d));
            assert_eq!(signed, multinomial_oracle(&e));
        }
    }

    #[test]
    fn both_methods_agree_exhaustively_small() {
        for n in 4..=6usize {
            for mask in 0u32..(1 << (n - 1)) {
                // Compositions of n via subset of gap positions.
                let mut sizes = Vec::new();
                let mut run = 1usize;
                for bit in 0..n - 1 {
                    if mask & (1 << bit) != 0 {
                        sizes.push(run);
                        run = 1;
                    } else {
                        run += 1;
                    }
                }
                sizes.push(run);
                if sizes.len() < 3 {
                    continue;
                }
                let profile = ColorProfile::new(sizes).unwrap();
                for e in canonical_exponent_vectors(&profile) {
                    intersection_number(&e, Method::Both)
                        .expect("routes disagreed");
                }
            }
        }
    }

    #[test]
    fn border_strip_values() {
        // (ψ₁⋯ψ_r)² on [r,r,3] for r = 1, 2.
        for (r, expected) in [(1usize, 1i64), (2, 5)] {
            let profile = ColorProfile::new(vec![r, r, 3]).unwrap();
            let mut k = vec![0usize; 2 * r + 3];
            for item in k.iter_mut().take(r) {
                *item = 2;
            }
            let e = ExponentProfile::new(profile, k).unwrap();
            assert_eq!(
                intersection_number(&e, Method::Both).unwrap(),
                BigInt::from(expected)
            );
        }
    }

    #[test]
    fn losev_manin_closed_form() {
        assert_eq!(losev_manin_value(7, 4, 2, &[0; 7]).unwrap(), BigInt::from(15));
        assert_eq!(losev_manin_value(7, 3, 2, &{
            let mut k = [0; 7];
            k[0] = 1;
            k
        })
        .unwrap(), BigInt::zero());
        assert_eq!(losev_manin_value(5, 4, 0, &[0; 5]).unwrap(), BigInt::one());
        // Dimension mismatch is an input error.
        assert!(losev_manin_value(5, 4, 4, &[0; 5]).is_err());

        // Cross-check against the multicolored computation on [1, n, 1].
        for n in 2..=5usize {
            for a in 0..n {
                let b = n - 1 - a;
                let e = losev_manin_profile(n, a, b, &vec![0; n]).unwrap();
                assert_eq!(
                    intersection_number(&e, Method::Both).unwrap(),
                    losev_manin_value(n, a, b, &vec![0; n]).unwrap()
                );
            }
            // One light exponent forces zero.
            let mut light = vec![0; n];
            light[n - 1] = 1;
            if n >= 2 {
                let e = losev_manin_profile(n, n - 2, 0, &light).unwrap();
                assert_eq!(
                    intersection_number(&e, Method::Both).unwrap(),
                    BigInt::zero()
                );
            }
        }
    }

    #[test]
    fn color_merging_preserves_values() {
        // [1,1,1,1,1] with ψ₁²: merge the two last (exponent-free) colors.
        let e = exponents(&[1, 1, 1, 1, 1], &[(1, 2)]);
        assert!(color_merge_check(&e, 3, 4).unwrap());
        // [2,2,1,1] with ψ on the first two colors vs [2,2,2].
        let e = exponents(&[2, 2, 1, 1], &[(1, 1), (3, 2)]);
        assert!(color_merge_check(&e, 2, 3).unwrap());
        // Boxed colors may not merge; neither may a 3-color profile.
        let e = exponents(&[2, 2, 1, 1], &[(1, 1), (3, 2)]);
        assert!(color_merge_check(&e, 0, 3).is_err());
        let e = exponents(&[2, 1, 1], &[(1, 1)]);
        assert!(color_merge_check(&e, 1, 2).is_err());
    }
}
