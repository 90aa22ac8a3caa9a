//! Abelian codes: minimal ideals of `F_q A` for a finite abelian
//! 2-group `A` and an odd prime power `q`.
//!
//! The semisimple algebra `F_q A` splits into one minimal ideal per
//! cyclotomic coset, the orbit of a character index tuple under
//! coordinate-wise multiplication by `q`. Each ideal is cut out by a
//! primitive idempotent whose coefficient at `g` is the averaged
//! character sum `|A|⁻¹ Σ_χ χ(g⁻¹)` over the coset. Character values
//! are powers of one fixed `2^E`-th root of unity in an explicit
//! extension tower `F_q ⊂ F_{q^m}`, so every coefficient is obtained
//! from a trace table by integer exponent arithmetic and lands in
//! `F_q` by construction. Coefficients are encoded as integers
//! `Σ aᵢ pⁱ < q`.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::abelian::{self, AbelianError, AbelianType};
use crate::gf::{self, Fld};

/// Largest `log2 |A|` accepted by default.
pub const DEFAULT_CODES_CEILING_LOG2: u32 = 8;

/// Errors from code construction and verification.
#[derive(Debug, Error)]
pub enum CodesError {
    #[error("modulus {0} is not an odd prime power")]
    NotPrimePower(u64),
    #[error("verification tables for modulus {0} would be too large")]
    ModulusTooLarge(u64),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

fn check_ceiling(ambient: &AbelianType, ceiling_log2: u32) -> Result<(), CodesError> {
    if ambient.log2_order() > u64::from(ceiling_log2) {
        return Err(AbelianError::CeilingExceeded {
            log2_order: ambient.log2_order(),
            ceiling_log2,
        }
        .into());
    }
    Ok(())
}

fn decode_index(mut idx: u64, orders: &[u64]) -> Vec<u64> {
    orders
        .iter()
        .map(|&o| {
            let c = idx % o;
            idx /= o;
            c
        })
        .collect()
}

fn encode_index(coords: &[u64], orders: &[u64]) -> u64 {
    let mut idx = 0u64;
    for (c, o) in coords.iter().zip(orders).rev() {
        idx = idx * o + c;
    }
    idx
}

/// Orbits of the character index set under coordinate-wise
/// multiplication by `q`, with the default ceiling.
///
/// Cosets are listed by ascending smallest member, each coset sorted
/// ascending; tuples align with the ambient type's factor exponents.
/// The number of cosets equals the `F_q`-class count of the ambient
/// group.
pub fn cyclotomic_cosets(
    ambient: &AbelianType,
    q: u64,
) -> Result<Vec<Vec<Vec<u64>>>, CodesError> {
    cyclotomic_cosets_with_ceiling(ambient, q, DEFAULT_CODES_CEILING_LOG2)
}

/// Cyclotomic cosets with an explicit ceiling on `log2 |A|`.
pub fn cyclotomic_cosets_with_ceiling(
    ambient: &AbelianType,
    q: u64,
    ceiling_log2: u32,
) -> Result<Vec<Vec<Vec<u64>>>, CodesError> {
    gf::factor_odd_prime_power(q).ok_or(CodesError::NotPrimePower(q))?;
    check_ceiling(ambient, ceiling_log2)?;
    let orders: Vec<u64> = ambient.factor_logs().iter().map(|&e| 1u64 << e).collect();
    let total = 1u64 << ambient.log2_order();
    let mut visited = vec![false; total as usize];
    let mut cosets = Vec::new();
    for start in 0..total {
        if visited[start as usize] {
            continue;
        }
        let mut members = Vec::new();
        let mut idx = start;
        loop {
            visited[idx as usize] = true;
            members.push(idx);
            let coords = decode_index(idx, &orders);
            let scaled: Vec<u64> = coords
                .iter()
                .zip(&orders)
                .map(|(c, o)| (u128::from(*c) * u128::from(q) % u128::from(*o)) as u64)
                .collect();
            idx = encode_index(&scaled, &orders);
            if idx == start {
                break;
            }
        }
        members.sort_unstable();
        cosets.push(
            members
                .into_iter()
                .map(|i| decode_index(i, &orders))
                .collect(),
        );
    }
    Ok(cosets)
}

/// One minimal ideal of `F_q A`: the ambient group, the modulus, the
/// primitive idempotent's coefficient vector, and the ideal dimension.
///
/// Coefficients are indexed by the ambient group's element enumeration
/// and encoded as integers `Σ aᵢ pⁱ < q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCode {
    /// Ambient abelian 2-group.
    pub ambient: AbelianType,
    /// Field size, an odd prime power.
    pub q: u64,
    /// Encoded idempotent coefficients, one per group element.
    pub idempotent: Vec<u64>,
    /// `F_q`-dimension of the ideal, the size of its coset.
    pub dimension: u64,
}

impl GroupCode {
    /// Tab-separated export: one row per group element, exponent tuple
    /// then encoded coefficient.
    pub fn tsv(&self) -> String {
        let mut out = String::from("exponents\tcoefficient\n");
        for (el, c) in self.ambient.elements().zip(&self.idempotent) {
            let coords = el
                .coords()
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(out, "{coords}\t{c}");
        }
        out
    }
}

/// The primitive idempotents of `F_q A`, one per cyclotomic coset, in
/// coset order, with the default ceiling.
pub fn primitive_idempotents(
    ambient: &AbelianType,
    q: u64,
) -> Result<Vec<GroupCode>, CodesError> {
    primitive_idempotents_with_ceiling(ambient, q, DEFAULT_CODES_CEILING_LOG2)
}

/// Primitive idempotents with an explicit ceiling on `log2 |A|`.
pub fn primitive_idempotents_with_ceiling(
    ambient: &AbelianType,
    q: u64,
    ceiling_log2: u32,
) -> Result<Vec<GroupCode>, CodesError> {
    let (p, _) = gf::factor_odd_prime_power(q).ok_or(CodesError::NotPrimePower(q))?;
    check_ceiling(ambient, ceiling_log2)?;
    let cosets = cyclotomic_cosets_with_ceiling(ambient, q, ceiling_log2)?;
    let logs = ambient.factor_logs().to_vec();
    let orders: Vec<u64> = logs.iter().map(|&e| 1u64 << e).collect();
    let e_max = logs.iter().copied().max().unwrap_or(0);
    let two_e = 1u64 << e_max;
    let m = if e_max == 0 {
        1usize
    } else {
        let mut m = 1usize;
        let mut t = q % two_e;
        while t != 1 {
            t = t * (q % two_e) % two_e;
            m += 1;
        }
        m
    };
    let field = gf::fq(q).ok_or(CodesError::NotPrimePower(q))?;
    let tower = gf::tower(q, m).ok_or(CodesError::NotPrimePower(q))?;
    let zeta = tower
        .root_of_unity(e_max)
        .expect("the extension degree admits the required root of unity");
    let mut zeta_pows = Vec::with_capacity(two_e as usize);
    let mut acc = tower.one();
    for _ in 0..two_e {
        zeta_pows.push(acc.clone());
        acc = tower.mul(&acc, &zeta);
    }
    let mut q_pows = Vec::with_capacity(m);
    let mut t = 1u64 % two_e;
    for _ in 0..m {
        q_pows.push(t);
        t = (u128::from(t) * u128::from(q) % u128::from(two_e)) as u64;
    }
    let full_trace: Vec<u64> = (0..two_e)
        .map(|j| {
            let mut sum = tower.zero();
            for &qp in &q_pows {
                let at = (u128::from(j) * u128::from(qp) % u128::from(two_e)) as usize;
                sum = tower.add(&sum, &zeta_pows[at]);
            }
            let base_val = tower
                .as_base(&sum)
                .expect("character traces land in the coefficient field");
            field.encode(&base_val)
        })
        .collect();
    let order_mod_p = (0..ambient.log2_order()).fold(1u64, |a, _| a * 2 % p);
    let inv_order = field.inv(&field.decode(order_mod_p));
    let elements: Vec<Vec<u64>> = ambient.elements().map(|e| e.coords().to_vec()).collect();
    let mut codes = Vec::with_capacity(cosets.len());
    for coset in &cosets {
        let rep = &coset[0];
        let d = coset.len() as u64;
        let ratio = m as u64 / d;
        let ratio_inv = field.inv(&field.decode(ratio % p));
        let scale = field.mul(&inv_order, &ratio_inv);
        let idempotent: Vec<u64> = elements
            .iter()
            .map(|coords| {
                let mut t_val = 0u64;
                for j in 0..coords.len() {
                    let part = rep[j] * coords[j] % orders[j];
                    t_val = (t_val + (part << (e_max - logs[j]))) % two_e;
                }
                let t_inv = (two_e - t_val) % two_e;
                let coeff = field.mul(&scale, &field.decode(full_trace[t_inv as usize]));
                field.encode(&coeff)
            })
            .collect();
        codes.push(GroupCode {
            ambient: ambient.clone(),
            q,
            idempotent,
            dimension: d,
        });
    }
    Ok(codes)
}

/// Encoded-coefficient arithmetic for one field size.
enum Arith {
    Prime(u64),
    Table { q: u64, add: Vec<u16>, mul: Vec<u16> },
}

impl Arith {
    fn new(q: u64) -> Result<Arith, CodesError> {
        let (_, k) = gf::factor_odd_prime_power(q).ok_or(CodesError::NotPrimePower(q))?;
        if q > 1 << 12 {
            if k == 1 {
                return Ok(Arith::Prime(q));
            }
            return Err(CodesError::ModulusTooLarge(q));
        }
        let field = gf::fq(q).ok_or(CodesError::NotPrimePower(q))?;
        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..q {
            let ea = field.decode(a);
            for b in 0..q {
                let eb = field.decode(b);
                add[(a * q + b) as usize] = field.encode(&field.add(&ea, &eb)) as u16;
                mul[(a * q + b) as usize] = field.encode(&field.mul(&ea, &eb)) as u16;
            }
        }
        Ok(Arith::Table { q, add, mul })
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        match self {
            Arith::Prime(q) => (a + b) % q,
            Arith::Table { q, add, .. } => u64::from(add[(a * q + b) as usize]),
        }
    }
}

fn convolve(arith: &Arith, mul_idx: &[u32], n: usize, x: &[u64], y: &[u64]) -> Vec<u64> {
    match arith {
        Arith::Prime(q) => {
            let q = u128::from(*q);
            let mut out = vec![0u64; n];
            for i in 0..n {
                if x[i] == 0 {
                    continue;
                }
                let row = &mul_idx[i * n..(i + 1) * n];
                for j in 0..n {
                    if y[j] == 0 {
                        continue;
                    }
                    let at = row[j] as usize;
                    let term = u128::from(x[i]) * u128::from(y[j]) % q;
                    out[at] = ((u128::from(out[at]) + term) % q) as u64;
                }
            }
            out
        }
        Arith::Table { q, add, mul } => {
            let q = *q;
            let mut out = vec![0u64; n];
            for i in 0..n {
                if x[i] == 0 {
                    continue;
                }
                let row = &mul_idx[i * n..(i + 1) * n];
                let x_row = &mul[(x[i] * q) as usize..(x[i] * q + q) as usize];
                for j in 0..n {
                    if y[j] == 0 {
                        continue;
                    }
                    let at = row[j] as usize;
                    let term = u64::from(x_row[y[j] as usize]);
                    out[at] = u64::from(add[(out[at] * q + term) as usize]);
                }
            }
            out
        }
    }
}

/// Outcome of the exact idempotent identity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentCheck {
    /// `e² = e` for every code.
    pub idempotency: bool,
    /// `eᵢeⱼ = 0` for every distinct pair.
    pub orthogonality: bool,
    /// `Σ eᵢ = 1`.
    pub partition_of_unity: bool,
    /// Dimensions equal coset sizes and, as a multiset, the field
    /// degrees of the ambient group.
    pub dimensions_match: bool,
}

impl IdempotentCheck {
    /// All four checks passed.
    pub fn all_hold(&self) -> bool {
        self.idempotency && self.orthogonality && self.partition_of_unity && self.dimensions_match
    }
}

/// Verifies the defining identities of a full idempotent system by
/// exact convolution in `F_q A`, with the default ceiling.
pub fn verify_idempotent_identities(
    ambient: &AbelianType,
    q: u64,
    codes: &[GroupCode],
) -> Result<IdempotentCheck, CodesError> {
    verify_idempotent_identities_with_ceiling(ambient, q, codes, DEFAULT_CODES_CEILING_LOG2)
}

/// Identity verification with an explicit ceiling on `log2 |A|`.
pub fn verify_idempotent_identities_with_ceiling(
    ambient: &AbelianType,
    q: u64,
    codes: &[GroupCode],
    ceiling_log2: u32,
) -> Result<IdempotentCheck, CodesError> {
    check_ceiling(ambient, ceiling_log2)?;
    let arith = Arith::new(q)?;
    let orders: Vec<u64> = ambient.factor_logs().iter().map(|&e| 1u64 << e).collect();
    let n = 1usize << ambient.log2_order();
    let coords: Vec<Vec<u64>> = (0..n as u64).map(|i| decode_index(i, &orders)).collect();
    let mut mul_idx = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let sum: Vec<u64> = coords[i]
                .iter()
                .zip(&coords[j])
                .zip(&orders)
                .map(|((a, b), o)| (a + b) % o)
                .collect();
            mul_idx[i * n + j] = encode_index(&sum, &orders) as u32;
        }
    }
    let idempotency = codes
        .par_iter()
        .all(|c| convolve(&arith, &mul_idx, n, &c.idempotent, &c.idempotent) == c.idempotent);
    let pairs: Vec<(usize, usize)> = (0..codes.len())
        .flat_map(|i| ((i + 1)..codes.len()).map(move |j| (i, j)))
        .collect();
    let orthogonality = pairs.par_iter().all(|&(i, j)| {
        convolve(&arith, &mul_idx, n, &codes[i].idempotent, &codes[j].idempotent)
            .iter()
            .all(|&c| c == 0)
    });
    let mut unit = vec![0u64; n];
    for c in codes {
        for (slot, &v) in unit.iter_mut().zip(&c.idempotent) {
            *slot = arith.add(*slot, v);
        }
    }
    let mut delta = vec![0u64; n];
    delta[0] = 1;
    let partition_of_unity = unit == delta;
    let cosets = cyclotomic_cosets_with_ceiling(ambient, q, ceiling_log2)?;
    let mut dims: Vec<u64> = codes.iter().map(|c| c.dimension).collect();
    let sizes_match = codes.len() == cosets.len()
        && dims
            .iter()
            .zip(&cosets)
            .all(|(&d, coset)| d == coset.len() as u64);
    dims.sort_unstable();
    let degrees = abelian::field_degrees_with_ceiling(ambient, q, ceiling_log2)?;
    let dimensions_match = sizes_match && dims == degrees;
    Ok(IdempotentCheck {
        idempotency,
        orthogonality,
        partition_of_unity,
        dimensions_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::k_class_count;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ty(exps: &[u32]) -> AbelianType {
        AbelianType::new(exps.iter().copied())
    }

    #[test]
    fn cosets_of_the_octic_cyclic_group_over_f3() {
        let cosets = cyclotomic_cosets(&ty(&[3]), 3).unwrap();
        let expected: Vec<Vec<Vec<u64>>> = vec![
            vec![vec![0]],
            vec![vec![1], vec![3]],
            vec![vec![2], vec![6]],
            vec![vec![4]],
            vec![vec![5], vec![7]],
        ];
        assert_eq!(cosets, expected);
        let two = cyclotomic_cosets(&ty(&[1]), 7).unwrap();
        assert_eq!(two, vec![vec![vec![0]], vec![vec![1]]]);
    }

    #[test]
    fn coset_counts_agree_with_class_counts() {
        let types = [
            ty(&[]),
            ty(&[1]),
            ty(&[2]),
            ty(&[3]),
            ty(&[4]),
            ty(&[2, 1]),
            ty(&[2, 2]),
            ty(&[3, 2]),
            ty(&[1, 1, 1]),
            ty(&[3, 2, 1]),
        ];
        for a in &types {
            for q in [3u64, 5, 7, 9, 11] {
                let cosets = cyclotomic_cosets(a, q).unwrap();
                assert_eq!(
                    BigInt::from(cosets.len()),
                    k_class_count(a, q).unwrap(),
                    "{a:?} q={q}"
                );
            }
        }
        assert_eq!(cyclotomic_cosets(&ty(&[2, 1]), 3).unwrap().len(), 6);
    }

    #[test]
    fn idempotent_dimensions_match_known_splittings() {
        let dims = |exps: &[u32], q: u64| -> Vec<u64> {
            let mut d: Vec<u64> = primitive_idempotents(&ty(exps), q)
                .unwrap()
                .iter()
                .map(|c| c.dimension)
                .collect();
            d.sort_unstable();
            d
        };
        assert_eq!(dims(&[2], 3), vec![1, 1, 2]);
        assert_eq!(dims(&[3], 3), vec![1, 1, 2, 2, 2]);
        assert_eq!(dims(&[], 5), vec![1]);
        assert_eq!(dims(&[3], 9), vec![1; 8]);
    }

    #[test]
    fn identities_hold_across_small_ambients_and_moduli() {
        let types = [
            ty(&[1]),
            ty(&[2]),
            ty(&[3]),
            ty(&[4]),
            ty(&[2, 1]),
            ty(&[2, 2]),
            ty(&[1, 1, 1]),
            ty(&[3, 2]),
        ];
        for a in &types {
            for q in [3u64, 5, 7, 9, 11] {
                let codes = primitive_idempotents(a, q).unwrap();
                let check = verify_idempotent_identities(a, q, &codes).unwrap();
                assert!(check.all_hold(), "{a:?} q={q}: {check:?}");
            }
        }
    }

    #[test]
    fn ideal_ranks_equal_stored_dimensions() {
        for (exps, q) in [(vec![3u32], 3u64), (vec![2], 5), (vec![2, 1], 3)] {
            let a = ty(&exps);
            let codes = primitive_idempotents(&a, q).unwrap();
            let orders: Vec<u64> = a.factor_logs().iter().map(|&e| 1u64 << e).collect();
            let n = 1usize << a.log2_order();
            for code in &codes {
                let mut rows: Vec<Vec<u64>> = Vec::new();
                for g in 0..n as u64 {
                    let gc = decode_index(g, &orders);
                    let mut row = vec![0u64; n];
                    for (i, &c) in code.idempotent.iter().enumerate() {
                        let ic = decode_index(i as u64, &orders);
                        let shifted: Vec<u64> = gc
                            .iter()
                            .zip(&ic)
                            .zip(&orders)
                            .map(|((x, y), o)| (x + y) % o)
                            .collect();
                        row[encode_index(&shifted, &orders) as usize] = c;
                    }
                    rows.push(row);
                }
                let mut rank = 0usize;
                for col in 0..n {
                    let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] % q != 0) else {
                        continue;
                    };
                    rows.swap(rank, pivot);
                    let inv = {
                        let mut acc = 1u64;
                        let mut b = rows[rank][col] % q;
                        let mut e = q - 2;
                        while e > 0 {
                            if e & 1 == 1 {
                                acc = acc * b % q;
                            }
                            b = b * b % q;
                            e >>= 1;
                        }
                        acc
                    };
                    for j in 0..n {
                        rows[rank][j] = rows[rank][j] % q * inv % q;
                    }
                    for r in 0..rows.len() {
                        if r != rank && rows[r][col] % q != 0 {
                            let f = rows[r][col] % q;
                            for j in 0..n {
                                rows[r][j] = (rows[r][j] + (q - f) * rows[rank][j]) % q;
                            }
                        }
                    }
                    rank += 1;
                }
                assert_eq!(rank as u64, code.dimension, "{exps:?} q={q}");
            }
        }
    }

    #[test]
    fn tsv_export_is_deterministic() {
        let codes = primitive_idempotents(&ty(&[2]), 3).unwrap();
        let text = codes[0].tsv();
        assert_eq!(text, "exponents\tcoefficient\n0\t1\n1\t1\n2\t1\n3\t1\n");
        assert_eq!(text, codes[0].tsv());
        let pair = primitive_idempotents(&ty(&[1, 1]), 3).unwrap();
        let pair_text = pair[1].tsv();
        let lines: Vec<&str> = pair_text.lines().collect();
        assert_eq!(lines[0], "exponents\tcoefficient");
        assert!(lines[1..].iter().all(|l| l.contains(',')));
    }

    #[test]
    fn rejects_bad_moduli_and_oversized_groups() {
        assert!(matches!(
            primitive_idempotents(&ty(&[2]), 15),
            Err(CodesError::NotPrimePower(15))
        ));
        assert!(matches!(
            primitive_idempotents(&ty(&[2]), 4),
            Err(CodesError::NotPrimePower(4))
        ));
        let big = ty(&[5, 4]);
        assert!(matches!(
            primitive_idempotents(&big, 3),
            Err(CodesError::Abelian(AbelianError::CeilingExceeded { .. }))
        ));
        assert!(primitive_idempotents_with_ceiling(&big, 3, 9).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn idempotent_systems_are_complete_and_exact(
            exps in proptest::collection::vec(1u32..=3, 0..=2),
            q_idx in 0usize..5,
        ) {
            let q = [3u64, 5, 7, 9, 11][q_idx];
            let a = ty(&exps);
            let codes = primitive_idempotents(&a, q).unwrap();
            let total: u64 = codes.iter().map(|c| c.dimension).sum();
            prop_assert_eq!(total, 1u64 << a.log2_order());
            let check = verify_idempotent_identities(&a, q, &codes).unwrap();
            prop_assert!(check.all_hold());
        }
    }
}
