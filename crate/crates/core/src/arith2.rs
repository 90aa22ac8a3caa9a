//! Pure 2-adic counting arithmetic.
//!
//! Everything here concerns finite abelian 2-groups `∏ C_{2^{e_i}}` and the
//! multiplicative group of integers modulo `2^r`. The two workhorses are
//! the multiplicative order of an odd residue modulo `2^r` (which controls
//! how Frobenius `a ↦ a^q` acts on cyclic 2-groups) and closed-form counts
//! of cyclic subgroups of products of up to four cyclic 2-groups.
//!
//! All arithmetic is exact: counts are `BigInt` and no floating point is
//! used, because expressions like `(15/7)(8^d − 1)` are integers only
//! after exact cancellation.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

/// Errors from the 2-adic counting functions.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    /// The base of a multiplicative order must be an odd positive integer.
    #[error("base must be an odd positive integer, got {0}")]
    BaseNotOddPositive(BigInt),
    /// Orders are taken modulo `2^r` with `r ≥ 1`.
    #[error("modulus exponent must be at least 1")]
    ModulusExponentZero,
    /// The closed-form counting functions require weakly decreasing arguments.
    #[error("exponents must be weakly decreasing and positive: {0:?}")]
    ExponentsNotSorted(Vec<u32>),
}

/// Exponent vector of a finite abelian 2-group `C_{2^{e_1}} × … × C_{2^{e_k}}`.
///
/// The canonical form is sorted in weakly decreasing order with zero
/// entries (trivial factors) stripped; the trivial group is the empty
/// list. Construction always canonicalizes, so counting functions can
/// assume `e_1 ≥ e_2 ≥ …` unconditionally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoAdicExponents {
    exps: Vec<u32>,
}

impl TwoAdicExponents {
    /// Builds a canonical exponent vector from arbitrary factor logs.
    pub fn new(exps: impl IntoIterator<Item = u32>) -> Self {
        let mut exps: Vec<u32> = exps.into_iter().filter(|&e| e > 0).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        TwoAdicExponents { exps }
    }

    /// The canonical factor logs, weakly decreasing, no zeros.
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Number of nontrivial cyclic factors.
    pub fn num_factors(&self) -> usize {
        self.exps.len()
    }

    /// True for the trivial group.
    pub fn is_trivial(&self) -> bool {
        self.exps.is_empty()
    }

    /// `log2` of the group order.
    pub fn log2_order(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    /// Group order `2^{Σ e_i}`.
    pub fn order(&self) -> BigInt {
        BigInt::one() << self.log2_order()
    }

    /// Exponent vector with every entry capped at `cap`.
    ///
    /// Capping at 2 gives the 4-torsion subgroup, whose cyclic-subgroup
    /// count is the quantity β used throughout the finite-field counts.
    pub fn capped(&self, cap: u32) -> Self {
        TwoAdicExponents::new(self.exps.iter().map(|&e| e.min(cap)))
    }

    /// Largest factor log, or 0 for the trivial group.
    pub fn max_exp(&self) -> u32 {
        self.exps.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for TwoAdicExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (i, e) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "C{}", 1u64 << e)?;
        }
        Ok(())
    }
}

/// Multiplicative order of `q` modulo `2^r`.
///
/// For `r ≥ 3` the unit group mod `2^r` is `C_2 × C_{2^{r-2}}`, so the
/// result always divides `2^{r-2}`; residues `q ≡ 3` or `5 (mod 8)`
/// attain that maximum.
pub fn order_mod_power_of_two(q: impl Into<BigInt>, r: u32) -> Result<BigInt, ArithError> {
    let q: BigInt = q.into();
    if q <= BigInt::zero() || !q.bit(0) {
        return Err(ArithError::BaseNotOddPositive(q));
    }
    if r == 0 {
        return Err(ArithError::ModulusExponentZero);
    }
    let modulus = BigInt::one() << r;
    let mut x = q % &modulus;
    let mut ord = BigInt::one();
    while !x.is_one() {
        x = (&x * &x) % &modulus;
        ord <<= 1;
    }
    Ok(ord)
}

/// Total number of cyclic subgroups of `∏ C_{2^{e_i}}`, trivial subgroup
/// included.
///
/// Up to four factors use the closed forms proved for the two-, three-
/// and four-factor cases; more factors fall back to summing the per-order
/// counts, which is exact for any number of factors.
pub fn cyclic_subgroup_count(t: &TwoAdicExponents) -> BigInt {
    let e = t.exps();
    match e.len() {
        0 => BigInt::one(),
        1 => BigInt::from(e[0] + 1),
        2 => two_factor_count(e[0], e[1]),
        3 => f3(e[0], e[1], e[2]).expect("canonical exponents are sorted"),
        4 => g4(e[0], e[1], e[2], e[3]).expect("canonical exponents are sorted"),
        _ => (0..=t.max_exp())
            .map(|k| cyclic_subgroup_count_by_order(t, k))
            .sum(),
    }
}

/// Number of cyclic subgroups of `∏ C_{2^{e_i}}` of order exactly `2^k`.
///
/// A cyclic subgroup of order `2^k` has `φ(2^k) = 2^{k-1}` generators, so
/// the count is the number of elements of order exactly `2^k` divided by
/// `2^{k-1}`. Elements of order dividing `2^k` number `∏ 2^{min(e_i, k)}`.
pub fn cyclic_subgroup_count_by_order(t: &TwoAdicExponents, k: u32) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    if k > t.max_exp() {
        return BigInt::zero();
    }
    let torsion = |j: u32| -> u64 { t.exps().iter().map(|&e| u64::from(e.min(j))).sum() };
    let elements = (BigInt::one() << torsion(k)) - (BigInt::one() << torsion(k - 1));
    elements >> (k - 1)
}

/// Number of cyclic subgroups generated by an element of order at most 4.
///
/// This is the quantity β in the finite-field class counts: it equals the
/// cyclic-subgroup count of the 4-torsion subgroup, i.e. of the capped
/// exponent vector `(min(e_i, 2))`.
pub fn small_torsion_subgroup_count(t: &TwoAdicExponents) -> BigInt {
    cyclic_subgroup_count(&t.capped(2))
}

/// Closed-form cyclic-subgroup count of `C_{2^a} × C_{2^b}` for `a ≥ b ≥ 1`:
/// `2^b (3 + a − b) − 2`.
fn two_factor_count(a: u32, b: u32) -> BigInt {
    (BigInt::one() << b) * BigInt::from(3 + a - b) - 2
}

/// Closed-form cyclic-subgroup count of `C_{2^a} × C_{2^b} × C_{2^c}`:
///
/// `f(a,b,c) = (7/3)(4^c − 1) + 3·2^c (2^b − 2^c) + (a − b) 2^{b+c} + 1`
///
/// Requires `a ≥ b ≥ c ≥ 1`.
pub fn f3(a: u32, b: u32, c: u32) -> Result<BigInt, ArithError> {
    if !(a >= b && b >= c && c >= 1) {
        return Err(ArithError::ExponentsNotSorted(vec![a, b, c]));
    }
    let pow = |e: u32| BigInt::one() << e;
    let quarter_powers = (pow(2 * c) - 1) * 7 / 3;
    let middle = BigInt::from(3) * pow(c) * (pow(b) - pow(c));
    let tail = BigInt::from(a - b) * pow(b + c);
    Ok(quarter_powers + middle + tail + 1)
}

/// Closed-form cyclic-subgroup count of `C_{2^a} × C_{2^b} × C_{2^c} × C_{2^d}`:
///
/// `g(a,b,c,d) = (15/7)(8^d − 1) + (7/3) 2^d (4^c − 4^d)
///              + 3·2^{c+d} (2^b − 2^c) + (a − b) 2^{b+c+d} + 1`
///
/// Requires `a ≥ b ≥ c ≥ d ≥ 1`.
pub fn g4(a: u32, b: u32, c: u32, d: u32) -> Result<BigInt, ArithError> {
    if !(a >= b && b >= c && c >= d && d >= 1) {
        return Err(ArithError::ExponentsNotSorted(vec![a, b, c, d]));
    }
    let pow = |e: u32| BigInt::one() << e;
    let eighth_powers = (pow(3 * d) - 1) * 15 / 7;
    let second = (pow(2 * c) - pow(2 * d)) * pow(d) * 7 / 3;
    let third = BigInt::from(3) * pow(c + d) * (pow(b) - pow(c));
    let tail = BigInt::from(a - b) * pow(b + c + d);
    Ok(eighth_powers + second + third + tail + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// Brute-force oracle: enumerate every element of `∏ C_{2^{e_i}}`, form
    /// the cyclic subgroup it generates as an explicit element set, and
    /// count distinct sets.
    fn brute_cyclic_subgroups(exps: &[u32]) -> u64 {
        let orders: Vec<u64> = exps.iter().map(|&e| 1u64 << e).collect();
        let total: u64 = orders.iter().product();
        let mut subgroups: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
        for idx in 0..total {
            let mut coords = Vec::with_capacity(orders.len());
            let mut rest = idx;
            for &o in &orders {
                coords.push(rest % o);
                rest /= o;
            }
            let mut elems = BTreeSet::new();
            let mut cur = vec![0u64; orders.len()];
            loop {
                if !elems.insert(cur.clone()) {
                    break;
                }
                for (c, (&g, &o)) in cur.iter_mut().zip(coords.iter().zip(&orders)) {
                    *c = (*c + g) % o;
                }
            }
            subgroups.insert(elems.into_iter().collect());
        }
        subgroups.len() as u64
    }

    fn count(exps: &[u32]) -> BigInt {
        cyclic_subgroup_count(&TwoAdicExponents::new(exps.iter().copied()))
    }

    #[test]
    fn orders_match_direct_exponentiation() {
        assert_eq!(order_mod_power_of_two(3, 3).unwrap(), BigInt::from(2));
        assert_eq!(order_mod_power_of_two(1, 10).unwrap(), BigInt::one());
        assert_eq!(order_mod_power_of_two(3, 4).unwrap(), BigInt::from(4));
        assert_eq!(order_mod_power_of_two(5, 5).unwrap(), BigInt::from(8));
        assert_eq!(order_mod_power_of_two(7, 3).unwrap(), BigInt::from(2));
        assert_eq!(order_mod_power_of_two(9, 4).unwrap(), BigInt::from(2));
    }

    #[test]
    fn order_rejects_bad_inputs() {
        assert!(order_mod_power_of_two(4, 3).is_err());
        assert!(order_mod_power_of_two(0, 3).is_err());
        assert!(order_mod_power_of_two(-3, 3).is_err());
        assert!(order_mod_power_of_two(3, 0).is_err());
    }

    #[test]
    fn order_bound_and_maximal_residues() {
        for r in 3..=10u32 {
            let bound = BigInt::one() << (r - 2);
            for q in (1u64..(1 << r)).step_by(2) {
                let ord = order_mod_power_of_two(q, r).unwrap();
                assert!(ord <= bound, "q={q} r={r}");
                if q % 8 == 3 || q % 8 == 5 {
                    assert_eq!(ord, bound, "q={q} r={r}");
                }
            }
        }
    }

    #[test]
    fn counts_match_known_values() {
        assert_eq!(count(&[2, 2]), BigInt::from(10));
        assert_eq!(count(&[1]), BigInt::from(2));
        assert_eq!(count(&[3, 3, 2]), BigInt::from(84));
        assert_eq!(count(&[3, 1, 1, 1]), BigInt::from(32));
        assert_eq!(count(&[]), BigInt::one());
        assert_eq!(count(&[5]), BigInt::from(6));
    }

    #[test]
    fn canonicalization_sorts_and_strips_zeros() {
        let t = TwoAdicExponents::new([0, 2, 0, 3, 1]);
        assert_eq!(t.exps(), &[3, 2, 1]);
        assert_eq!(t.to_string(), "C8xC4xC2");
        assert!(TwoAdicExponents::new([0, 0]).is_trivial());
    }

    #[test]
    fn by_order_counts_match_two_factor_rule() {
        let t = TwoAdicExponents::new([2, 2]);
        assert_eq!(cyclic_subgroup_count_by_order(&t, 0), BigInt::one());
        assert_eq!(cyclic_subgroup_count_by_order(&t, 1), BigInt::from(3));
        let (a, b) = (5u32, 2u32);
        let t = TwoAdicExponents::new([a, b]);
        for k in 1..=a {
            let expected = if k <= b {
                BigInt::from(3) * (BigInt::one() << (k - 1))
            } else {
                BigInt::one() << b
            };
            assert_eq!(cyclic_subgroup_count_by_order(&t, k), expected, "k={k}");
        }
        assert_eq!(cyclic_subgroup_count_by_order(&t, a + 1), BigInt::zero());
    }

    #[test]
    fn small_torsion_matches_capped_count() {
        let big = TwoAdicExponents::new([4, 2, 2]);
        assert_eq!(small_torsion_subgroup_count(&big), BigInt::from(36));
        assert_eq!(
            small_torsion_subgroup_count(&TwoAdicExponents::new([1])),
            BigInt::from(2)
        );
        assert_eq!(
            small_torsion_subgroup_count(&TwoAdicExponents::new([3, 3])),
            BigInt::from(10)
        );
    }

    #[test]
    fn closed_forms_match_fixed_points() {
        assert_eq!(f3(3, 3, 3).unwrap(), BigInt::from(148));
        assert_eq!(f3(3, 2, 2).unwrap(), BigInt::from(52));
        assert_eq!(f3(4, 3, 2).unwrap(), BigInt::from(116));
        assert_eq!(f3(4, 4, 2).unwrap(), BigInt::from(180));
        assert_eq!(g4(2, 2, 2, 2).unwrap(), BigInt::from(136));
        assert_eq!(g4(1, 1, 1, 1).unwrap(), BigInt::from(16));
        for a in 1..=8u32 {
            assert_eq!(f3(a, 1, 1).unwrap(), BigInt::from(4 * a + 4));
        }
    }

    #[test]
    fn closed_forms_reject_unsorted_arguments() {
        assert!(f3(1, 2, 1).is_err());
        assert!(f3(2, 2, 0).is_err());
        assert!(g4(1, 2, 1, 1).is_err());
        assert!(g4(3, 2, 1, 0).is_err());
    }

    #[test]
    fn closed_forms_match_brute_force_exhaustively() {
        for a in 0..=3u32 {
            for b in 0..=a {
                for c in 0..=b {
                    for d in 0..=c {
                        for exps in [
                            vec![a],
                            vec![a, b],
                            vec![a, b, c],
                            vec![a, b, c, d],
                        ] {
                            let brute = brute_cyclic_subgroups(&exps);
                            assert_eq!(
                                count(&exps),
                                BigInt::from(brute),
                                "exps={exps:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn five_factor_fallback_matches_brute_force() {
        for exps in [[2, 2, 1, 1, 1], [3, 2, 2, 1, 1], [2, 2, 2, 2, 2]] {
            assert_eq!(count(&exps), BigInt::from(brute_cyclic_subgroups(&exps)));
        }
    }

    proptest! {
        #[test]
        fn by_order_counts_sum_to_total(exps in proptest::collection::vec(0u32..=6, 0..=5)) {
            let t = TwoAdicExponents::new(exps);
            let total: BigInt = (0..=t.max_exp())
                .map(|k| cyclic_subgroup_count_by_order(&t, k))
                .sum();
            prop_assert_eq!(total, cyclic_subgroup_count(&t));
        }

        #[test]
        fn doubling_rule_holds(exps in proptest::collection::vec(1u32..=6, 0..=4)) {
            let h = TwoAdicExponents::new(exps.clone());
            let doubled = TwoAdicExponents::new(exps.into_iter().chain([1]));
            prop_assert_eq!(
                cyclic_subgroup_count(&doubled),
                cyclic_subgroup_count(&h) * 2
            );
        }

        #[test]
        fn order_divides_group_exponent(q in 1u64..5000, r in 1u32..=16) {
            let q = 2 * q - 1;
            let ord = order_mod_power_of_two(q, r).unwrap();
            let cap = if r >= 3 { r - 2 } else { if r == 2 { 1 } else { 0 } };
            prop_assert!(ord <= (BigInt::one() << cap));
        }
    }
}
