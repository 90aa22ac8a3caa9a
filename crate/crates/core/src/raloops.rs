//! RA loops `M(G, *, g0)` and the structure of their loop algebras.
//!
//! Doubling a group `G` from one of the six families by an element `u`
//! with prescribed central square `g0` produces a Moufang loop
//! `L = G ∪ Gu` of twice the order, with
//!
//! ```text
//! g(hu) = (hg)u,   (gu)h = (gh*)u,   (gu)(hu) = g0·h*·g,
//! ```
//!
//! where `g* = g` on the center and `g* = sg` off it. Loop rings `RL`
//! are alternative but never associative, and the seven classes built
//! here exhaust the indecomposable finite loops with that property.
//!
//! Over a field `K` of odd characteristic (or `Q`), `KL = ⊕ Bᵢ` with
//! `Bᵢ = Aᵢ + Aᵢu` running over the simple components `Aᵢ` of `KG`. A
//! quaternion `Aᵢ` always yields an eight-dimensional Cayley algebra. A
//! field `Aᵢ` yields either `Aᵢ ⊕ Aᵢ` or a quadratic field extension,
//! and the split case occurs exactly when the projection of `g0` into
//! `Aᵢ` is a square there. That projection is a root of unity, so
//! squaredness is integer arithmetic: an even-versus-odd power of a
//! primitive `2^k`-th root over `Q`, and a divisibility condition on
//! `q^d − 1` over `F_{q^d}`. When `g0` is trivial, or is forced to be a
//! square by the presentation (`g0 = x²` in the abelianization), every
//! field component splits and the loop algebra has exactly twice as
//! many fields as the group algebra.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::abelian::{AbelianError, AbelianType};
use crate::classify::{pipeline_breakdown_with_ceiling, ClassifyError, FieldSpec, UnionFind};
use crate::groups::{Family, GroupElement, GroupError, GroupSpec};

/// Largest `log2 |L|` for which dense multiplication tables are built.
pub const LOOP_TABLE_CAP_LOG2: u32 = 11;

/// Errors from loop construction and loop-algebra computations.
#[derive(Debug, Error)]
pub enum RaloopError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error("loop order 2^{log2_order} exceeds the dense-table cap 2^{cap_log2}")]
    OrderTooLarge { log2_order: u64, cap_log2: u32 },
    #[error("modulus {0} is not an odd prime")]
    NonPrimeModulus(u64),
}

/// The seven classes of indecomposable finite RA loops.
///
/// Each class doubles a fixed group family with a fixed central square
/// for the doubling element: trivial for `L1`, `L3`, `L5`, the first
/// central generator for `L2`, `L4`, `L6`, and the cyclic direct factor
/// for `L7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoopClass {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    L7,
}

impl LoopClass {
    /// The seven classes, in order.
    pub fn all() -> [LoopClass; 7] {
        [
            LoopClass::L1,
            LoopClass::L2,
            LoopClass::L3,
            LoopClass::L4,
            LoopClass::L5,
            LoopClass::L6,
            LoopClass::L7,
        ]
    }

    /// The group family being doubled.
    pub fn family(self) -> Family {
        match self {
            LoopClass::L1 => Family::D1,
            LoopClass::L2 => Family::D2,
            LoopClass::L3 => Family::D3,
            LoopClass::L4 => Family::D4,
            LoopClass::L5 | LoopClass::L6 => Family::D5,
            LoopClass::L7 => Family::D5xC,
        }
    }

    /// Central generator index whose value is `u² = g0`, if nontrivial.
    fn g0_slot(self) -> Option<usize> {
        match self {
            LoopClass::L1 | LoopClass::L3 | LoopClass::L5 => None,
            LoopClass::L2 | LoopClass::L4 | LoopClass::L6 => Some(0),
            LoopClass::L7 => Some(3),
        }
    }

    /// Whether every commutative component of the loop algebra is
    /// guaranteed to split by the presentation alone.
    ///
    /// For `L1`, `L3`, `L5` the square `g0` is trivial; for `L2`, `L4`
    /// it equals `x²`, hence is a square in every commutative quotient.
    fn always_splits(self) -> bool {
        !matches!(self, LoopClass::L6 | LoopClass::L7)
    }
}

impl fmt::Display for LoopClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            LoopClass::L1 => "L1",
            LoopClass::L2 => "L2",
            LoopClass::L3 => "L3",
            LoopClass::L4 => "L4",
            LoopClass::L5 => "L5",
            LoopClass::L6 => "L6",
            LoopClass::L7 => "L7",
        };
        f.write_str(tag)
    }
}

impl FromStr for LoopClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L1" => Ok(LoopClass::L1),
            "L2" => Ok(LoopClass::L2),
            "L3" => Ok(LoopClass::L3),
            "L4" => Ok(LoopClass::L4),
            "L5" => Ok(LoopClass::L5),
            "L6" => Ok(LoopClass::L6),
            "L7" => Ok(LoopClass::L7),
            other => Err(format!("unknown loop class {other:?}")),
        }
    }
}

/// An element `g` or `gu` of the doubled loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopElement {
    /// Group part.
    pub g: GroupElement,
    /// Whether the element lies in the coset `Gu`.
    pub in_coset_u: bool,
}

/// One indecomposable RA loop `M(G, *, g0)`.
#[derive(Debug, Clone)]
pub struct LoopSpec {
    cls: LoopClass,
    group: GroupSpec,
    g0: GroupElement,
}

impl LoopSpec {
    /// Builds the loop of class `cls` over the parameter list of its
    /// underlying group family.
    pub fn new(cls: LoopClass, ms: &[u32]) -> Result<Self, GroupError> {
        let group = GroupSpec::new(cls.family(), ms)?;
        let g0 = match cls.g0_slot() {
            None => group.identity(),
            Some(slot) => group.t_element(slot),
        };
        Ok(LoopSpec { cls, group, g0 })
    }

    /// The loop class.
    pub fn cls(&self) -> LoopClass {
        self.cls
    }

    /// The underlying group.
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// Parameters of the underlying group.
    pub fn ms(&self) -> &[u32] {
        self.group.ms()
    }

    /// The central square of the doubling element, `u² = g0`.
    pub fn g0(&self) -> &GroupElement {
        &self.g0
    }

    /// `|L| = 2|G|`.
    pub fn order(&self) -> BigInt {
        self.group.order() * 2
    }

    /// `log2 |L|`.
    pub fn log2_order(&self) -> u64 {
        self.group.log2_order() + 1
    }

    /// The identity element.
    pub fn identity(&self) -> LoopElement {
        LoopElement {
            g: self.group.identity(),
            in_coset_u: false,
        }
    }

    /// The doubling element `u`.
    pub fn u_element(&self) -> LoopElement {
        LoopElement {
            g: self.group.identity(),
            in_coset_u: true,
        }
    }

    /// The involution `g ↦ g*`: identity on the center, `g ↦ sg` off it.
    pub fn star(&self, g: &GroupElement) -> GroupElement {
        if self.group.is_central(g) {
            g.clone()
        } else {
            self.group.multiply(&self.group.commutator_element(), g)
        }
    }

    /// The loop product.
    pub fn multiply(&self, a: &LoopElement, b: &LoopElement) -> LoopElement {
        let gr = &self.group;
        match (a.in_coset_u, b.in_coset_u) {
            (false, false) => LoopElement {
                g: gr.multiply(&a.g, &b.g),
                in_coset_u: false,
            },
            (false, true) => LoopElement {
                g: gr.multiply(&b.g, &a.g),
                in_coset_u: true,
            },
            (true, false) => LoopElement {
                g: gr.multiply(&a.g, &self.star(&b.g)),
                in_coset_u: true,
            },
            (true, true) => {
                let hsg = gr.multiply(&self.star(&b.g), &a.g);
                LoopElement {
                    g: gr.multiply(&self.g0, &hsg),
                    in_coset_u: false,
                }
            }
        }
    }

    /// The two-sided inverse.
    pub fn inverse(&self, a: &LoopElement) -> LoopElement {
        let gr = &self.group;
        if !a.in_coset_u {
            return LoopElement {
                g: gr.inverse(&a.g),
                in_coset_u: false,
            };
        }
        let ginv_star = self.star(&gr.inverse(&a.g));
        LoopElement {
            g: gr.multiply(&gr.inverse(&self.g0), &ginv_star),
            in_coset_u: true,
        }
    }

    /// All `2|G|` elements: first `G`, then the coset `Gu`, each half in
    /// the group's enumeration order.
    pub fn elements(&self) -> Vec<LoopElement> {
        let mut out = Vec::new();
        for in_coset_u in [false, true] {
            out.extend(self.group.elements().map(|g| LoopElement { g, in_coset_u }));
        }
        out
    }
}

impl fmt::Display for LoopSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = self
            .ms()
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{}({})", self.cls, ms)
    }
}

/// Dense multiplication table over element indices.
struct LoopTable {
    elems: Vec<LoopElement>,
    n: usize,
    group_size: usize,
    table: Vec<u16>,
    star_perm: Vec<usize>,
}

impl LoopTable {
    fn build(spec: &LoopSpec) -> Result<LoopTable, RaloopError> {
        if spec.log2_order() > u64::from(LOOP_TABLE_CAP_LOG2) {
            return Err(RaloopError::OrderTooLarge {
                log2_order: spec.log2_order(),
                cap_log2: LOOP_TABLE_CAP_LOG2,
            });
        }
        let elems = spec.elements();
        let n = elems.len();
        let index: HashMap<&LoopElement, usize> =
            elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = spec.multiply(&elems[i], &elems[j]);
                table[i * n + j] = index[&prod] as u16;
            }
        }
        let star_perm = elems
            .iter()
            .map(|e| {
                let starred = LoopElement {
                    g: spec.star(&e.g),
                    in_coset_u: e.in_coset_u,
                };
                index[&starred]
            })
            .collect();
        Ok(LoopTable {
            elems,
            n,
            group_size: n / 2,
            table,
            star_perm,
        })
    }

    #[inline]
    fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.n + j] as usize
    }
}

/// How a structural identity check should traverse triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every triple; requires the dense table.
    Exhaustive,
    /// Seeded random triples.
    Sampled { trials: u64, seed: u64 },
}

/// Outcome of the Moufang and diassociativity checks.
#[derive(Debug, Clone)]
pub struct MoufangReport {
    /// `|L|`.
    pub loop_order: u64,
    /// Number of triples tested against the right Moufang identity.
    pub triples_checked: u64,
    /// Whether the triples were exhaustive.
    pub exhaustive: bool,
    /// `[(xy)z]y = x[y(zy)]` held on every tested triple.
    pub right_moufang_holds: bool,
    /// Every tested triple drawn from a two-element subset associated.
    pub diassociative_on_pairs: bool,
    /// Some triple with `(xy)z ≠ x(yz)`, if one was found.
    pub nonassociative_witness: Option<[LoopElement; 3]>,
}

/// Verifies the right Moufang identity `[(xy)z]y = x[y(zy)]`, checks
/// associativity on triples drawn from two-element subsets, and
/// searches for a witness that the loop itself is not associative.
pub fn check_moufang(spec: &LoopSpec, mode: CheckMode) -> Result<MoufangReport, RaloopError> {
    match mode {
        CheckMode::Exhaustive => {
            let t = LoopTable::build(spec)?;
            let n = t.n;
            let moufang_failures: u64 = (0..n)
                .into_par_iter()
                .map(|x| {
                    let mut bad = 0u64;
                    for y in 0..n {
                        let xy = t.mul(x, y);
                        for z in 0..n {
                            let lhs = t.mul(t.mul(xy, z), y);
                            let rhs = t.mul(x, t.mul(y, t.mul(z, y)));
                            if lhs != rhs {
                                bad += 1;
                            }
                        }
                    }
                    bad
                })
                .sum();
            let diassoc_failures: u64 = (0..n)
                .into_par_iter()
                .map(|a| {
                    let mut bad = 0u64;
                    for b in 0..n {
                        for (p, r, w) in
                            [(a, a, b), (a, b, a), (b, a, a), (a, b, b), (b, a, b), (b, b, a)]
                        {
                            if t.mul(t.mul(p, r), w) != t.mul(p, t.mul(r, w)) {
                                bad += 1;
                            }
                        }
                    }
                    bad
                })
                .sum();
            let mut witness = None;
            'scan: for x in 0..n {
                for y in 0..n {
                    let xy = t.mul(x, y);
                    for z in 0..n {
                        if t.mul(xy, z) != t.mul(x, t.mul(y, z)) {
                            witness = Some([
                                t.elems[x].clone(),
                                t.elems[y].clone(),
                                t.elems[z].clone(),
                            ]);
                            break 'scan;
                        }
                    }
                }
            }
            Ok(MoufangReport {
                loop_order: (n as u64),
                triples_checked: (n as u64).pow(3),
                exhaustive: true,
                right_moufang_holds: moufang_failures == 0,
                diassociative_on_pairs: diassoc_failures == 0,
                nonassociative_witness: witness,
            })
        }
        CheckMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut moufang_ok = true;
            let mut diassoc_ok = true;
            for _ in 0..trials {
                let x = random_loop_element(spec, &mut rng);
                let y = random_loop_element(spec, &mut rng);
                let z = random_loop_element(spec, &mut rng);
                let xy = spec.multiply(&x, &y);
                let lhs = spec.multiply(&spec.multiply(&xy, &z), &y);
                let rhs = spec.multiply(&x, &spec.multiply(&y, &spec.multiply(&z, &y)));
                if lhs != rhs {
                    moufang_ok = false;
                }
                for (p, r, w) in [(&x, &x, &y), (&x, &y, &x), (&y, &x, &x), (&x, &y, &y)] {
                    let left = spec.multiply(&spec.multiply(p, r), w);
                    let right = spec.multiply(p, &spec.multiply(r, w));
                    if left != right {
                        diassoc_ok = false;
                    }
                }
            }
            let witness = scan_for_nonassociative_triple(spec, 1 << 20);
            Ok(MoufangReport {
                loop_order: spec
                    .order()
                    .try_into()
                    .unwrap_or(u64::MAX),
                triples_checked: trials,
                exhaustive: false,
                right_moufang_holds: moufang_ok,
                diassociative_on_pairs: diassoc_ok,
                nonassociative_witness: witness,
            })
        }
    }
}

fn scan_for_nonassociative_triple(spec: &LoopSpec, cap: u64) -> Option<[LoopElement; 3]> {
    let elems = spec.elements();
    let mut seen = 0u64;
    for x in &elems {
        for y in &elems {
            let xy = spec.multiply(x, y);
            for z in &elems {
                if seen >= cap {
                    return None;
                }
                seen += 1;
                if spec.multiply(&xy, z) != spec.multiply(x, &spec.multiply(y, z)) {
                    return Some([x.clone(), y.clone(), z.clone()]);
                }
            }
        }
    }
    None
}

fn random_loop_element(spec: &LoopSpec, rng: &mut ChaCha8Rng) -> LoopElement {
    let gr = spec.group();
    let mut g = gr.identity();
    for (slot, &log) in gr.center().factor_logs().iter().enumerate() {
        let coord = rng.gen_range(0..(1u64 << log));
        g = gr.multiply(&g, &gr.power(&gr.t_element(slot), coord));
    }
    if rng.gen::<bool>() {
        g = gr.multiply(&g, &gr.x_element());
    }
    if rng.gen::<bool>() {
        g = gr.multiply(&g, &gr.y_element());
    }
    LoopElement {
        g,
        in_coset_u: rng.gen::<bool>(),
    }
}

/// Component counts of one semisimple loop algebra `KL`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopAlgebraSummary {
    /// Coefficient field.
    pub field: FieldSpec,
    /// Number of field components.
    pub num_fields: BigInt,
    /// Number of Cayley-algebra components.
    pub num_cayley: BigInt,
    /// Per commutative component of `KG`, in enumeration order: whether
    /// it contributes two fields (`true`) or one quadratic extension
    /// (`false`). Present when the component characters were enumerated.
    pub splits_per_component: Option<Vec<bool>>,
}

impl LoopAlgebraSummary {
    /// Single-line JSON record with fixed key order:
    /// `cls, ms, field, num_fields, num_cayley`.
    pub fn json_record(&self, spec: &LoopSpec) -> String {
        let ms = spec
            .ms()
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{{\"cls\":\"{}\",\"ms\":[{}],\"field\":\"{}\",\"num_fields\":{},\"num_cayley\":{}}}",
            spec.cls(),
            ms,
            self.field,
            self.num_fields,
            self.num_cayley
        )
    }
}

impl fmt::Display for LoopAlgebraSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} fields + {} Cayley algebras",
            self.field, self.num_fields, self.num_cayley
        )
    }
}

/// Wedderburn component counts of `KL` with the default ceiling.
pub fn loop_decompose(
    spec: &LoopSpec,
    field: &FieldSpec,
) -> Result<LoopAlgebraSummary, RaloopError> {
    loop_decompose_with_ceiling(spec, field, crate::abelian::DEFAULT_CEILING_LOG2)
}

/// Wedderburn component counts of `KL`.
///
/// Every quaternion component of `KG` contributes one Cayley algebra.
/// Field components are enumerated as character orbits of `G/G'` and
/// tested for the squaredness of the `g0`-projection; above the ceiling
/// this enumeration is replaced by the doubling rule for the classes
/// where the presentation forces every component to split, and is an
/// error for `L6` and `L7`.
pub fn loop_decompose_with_ceiling(
    spec: &LoopSpec,
    field: &FieldSpec,
    ceiling_log2: u32,
) -> Result<LoopAlgebraSummary, RaloopError> {
    let breakdown = pipeline_breakdown_with_ceiling(spec.group(), field, ceiling_log2)?;
    let num_cayley = &breakdown.total - &breakdown.n_abelianization;
    let basis = spec.group().abelianization_basis();
    let ab = basis.ty();
    if ab.log2_order() <= u64::from(ceiling_log2) {
        let g0_image = basis.coords_of(&spec.group().abelianized_exponents(spec.g0()))?;
        let splits = component_split_flags(ab, g0_image.coords(), field);
        assert_eq!(
            BigInt::from(splits.len()),
            breakdown.n_abelianization,
            "character-orbit enumeration disagrees with the class-count pipeline"
        );
        let split_count = splits.iter().filter(|s| **s).count();
        let num_fields = BigInt::from(splits.len() + split_count);
        return Ok(LoopAlgebraSummary {
            field: field.clone(),
            num_fields,
            num_cayley,
            splits_per_component: Some(splits),
        });
    }
    if spec.cls().always_splits() {
        return Ok(LoopAlgebraSummary {
            field: field.clone(),
            num_fields: &breakdown.n_abelianization * 2,
            num_cayley,
            splits_per_component: None,
        });
    }
    Err(AbelianError::CeilingExceeded {
        log2_order: ab.log2_order(),
        ceiling_log2,
    }
    .into())
}

/// Per character orbit of `ab`, whether the value at `g0` is a square
/// in the orbit's component.
///
/// Orbits are walked in ascending index order: over `Q` the orbit of a
/// character consists of its odd powers, generated by the cube and
/// inverse maps; over `F_q` it is the Frobenius orbit under `χ ↦ χ^q`.
fn component_split_flags(ab: &AbelianType, g0: &[u64], field: &FieldSpec) -> Vec<bool> {
    let logs = ab.factor_logs();
    let e_max = logs.iter().copied().max().unwrap_or(0);
    if e_max == 0 {
        return vec![true];
    }
    let orders: Vec<u64> = logs.iter().map(|&e| 1u64 << e).collect();
    let total: u64 = orders.iter().product();
    let multipliers: Vec<u64> = match field {
        FieldSpec::Q => vec![3, (1u64 << e_max) - 1],
        FieldSpec::Finite(q) => vec![*q],
    };
    let mut visited = vec![false; total as usize];
    let mut flags = Vec::new();
    let mut coords = vec![0u64; orders.len()];
    let mut scaled = vec![0u64; orders.len()];
    for start in 0..total {
        if visited[start as usize] {
            continue;
        }
        visited[start as usize] = true;
        decode_index(start, &orders, &mut coords);
        let rep = coords.clone();
        let mut stack = vec![start];
        let mut orbit_size = 0u64;
        while let Some(idx) = stack.pop() {
            orbit_size += 1;
            decode_index(idx, &orders, &mut coords);
            for &k in &multipliers {
                for (j, c) in coords.iter().enumerate() {
                    scaled[j] = ((u128::from(*c) * u128::from(k)) % u128::from(orders[j])) as u64;
                }
                let next = encode_index(&scaled, &orders);
                if !visited[next as usize] {
                    visited[next as usize] = true;
                    stack.push(next);
                }
            }
        }
        flags.push(orbit_value_is_square(&rep, g0, logs, e_max, field, orbit_size));
    }
    flags
}

fn decode_index(mut idx: u64, orders: &[u64], coords: &mut [u64]) {
    for (j, &o) in orders.iter().enumerate() {
        coords[j] = idx % o;
        idx /= o;
    }
}

fn encode_index(coords: &[u64], orders: &[u64]) -> u64 {
    let mut idx = 0u64;
    for (c, o) in coords.iter().zip(orders).rev() {
        idx = idx * o + c;
    }
    idx
}

/// Whether `χ_c(g0)` is a square in the component of the orbit of `χ_c`.
///
/// With `E = max exponent`, the value is `ζ^T` for the primitive
/// `2^E`-th root `ζ` and `T = Σ c_j z_j 2^{E−e_j} (mod 2^E)`. Over `Q`
/// the component is the cyclotomic field of the character's order
/// `2^ê`, whose roots of unity form a cyclic group in which the value
/// is a square exactly when its exponent `T·2^ê/2^E` is even. Over a
/// finite field the component is `F_{q^d}` with `d` the orbit size, and
/// an element of multiplicative order `2^{e'}` is a square exactly when
/// `2^{e'+1}` divides `q^d − 1`, read off the 2-adic valuation of
/// `q^d − 1`.
fn orbit_value_is_square(
    c: &[u64],
    z: &[u64],
    logs: &[u32],
    e_max: u32,
    field: &FieldSpec,
    orbit_size: u64,
) -> bool {
    let modulus: u128 = 1u128 << e_max;
    let mut t: u128 = 0;
    for j in 0..c.len() {
        let part = (u128::from(c[j]) * u128::from(z[j])) & ((1u128 << logs[j]) - 1);
        t = (t + (part << (e_max - logs[j]))) & (modulus - 1);
    }
    if t == 0 {
        return true;
    }
    match field {
        FieldSpec::Q => {
            let mut e_hat = 0u32;
            for (j, &cj) in c.iter().enumerate() {
                if cj != 0 {
                    e_hat = e_hat.max(logs[j] - cj.trailing_zeros());
                }
            }
            let exponent = (t << e_hat) >> e_max;
            exponent % 2 == 0
        }
        FieldSpec::Finite(q) => {
            let value_order_log2 = e_max - t.trailing_zeros();
            let v2 = |x: u64| u32::from(x.trailing_zeros() as u8);
            let v2_qd_minus_1 = if orbit_size % 2 == 1 {
                v2(q - 1)
            } else {
                v2(q - 1) + v2(q + 1) + v2(orbit_size) - 1
            };
            v2_qd_minus_1 >= value_order_log2 + 1
        }
    }
}

/// Side-by-side loop-algebra summaries for two loops over one field.
#[derive(Debug, Clone)]
pub struct LoopComparison {
    /// Summary of the first loop algebra.
    pub left: LoopAlgebraSummary,
    /// Summary of the second loop algebra.
    pub right: LoopAlgebraSummary,
    /// Whether both component counts coincide.
    pub counts_agree: bool,
    /// Set when the counts agree but the loops differ, in which case
    /// these counts cannot distinguish the algebras.
    pub caveat: Option<&'static str>,
}

/// Caveat attached to comparisons that component counts cannot settle.
pub const SPLIT_DIVISION_CAVEAT: &str =
    "component counts agree; over Q these loop algebras are distinguishable \
     only by the split or division character of their Cayley components, \
     which lies outside this computation";

/// Compares the Wedderburn component counts of two loop algebras.
pub fn compare_loops(
    a: &LoopSpec,
    b: &LoopSpec,
    field: &FieldSpec,
) -> Result<LoopComparison, RaloopError> {
    let left = loop_decompose(a, field)?;
    let right = loop_decompose(b, field)?;
    let counts_agree =
        left.num_fields == right.num_fields && left.num_cayley == right.num_cayley;
    let same_loop = a.cls() == b.cls() && a.ms() == b.ms();
    let caveat = if counts_agree && !same_loop {
        Some(SPLIT_DIVISION_CAVEAT)
    } else {
        None
    };
    Ok(LoopComparison {
        left,
        right,
        counts_agree,
        caveat,
    })
}

/// Outcome of sampling the norm `n(x) = xx*` on a loop algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormCheckReport {
    /// Number of sampled elements (pairs for multiplicativity).
    pub samples: u64,
    /// Samples whose norm failed to be central.
    pub centrality_failures: u64,
    /// Pairs with `n(xy) ≠ n(x)n(y)`.
    pub multiplicativity_failures: u64,
}

/// Samples random elements of `F_q L` and verifies that the norm
/// `n(x) = xx*` is central and multiplicative, where the involution
/// fixes `F_q G` pointwise up to `*` and negates the `Gu` half.
pub fn norm_check(
    spec: &LoopSpec,
    q: u64,
    samples: u64,
    seed: u64,
) -> Result<NormCheckReport, RaloopError> {
    require_odd_prime(q)?;
    let t = LoopTable::build(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centrality_failures = 0u64;
    let mut multiplicativity_failures = 0u64;
    for _ in 0..samples {
        let x = random_vector(&t, q, &mut rng);
        let y = random_vector(&t, q, &mut rng);
        let nx = norm_vector(&t, q, &x);
        let ny = norm_vector(&t, q, &y);
        if !is_central_vector(&t, q, &nx) {
            centrality_failures += 1;
        }
        let nxy = norm_vector(&t, q, &convolve(&t, q, &x, &y));
        if nxy != convolve(&t, q, &nx, &ny) {
            multiplicativity_failures += 1;
        }
    }
    Ok(NormCheckReport {
        samples,
        centrality_failures,
        multiplicativity_failures,
    })
}

/// Outcome of the ideal-projection identity on sampled ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealProjectionReport {
    /// Number of sampled generators.
    pub samples: u64,
    /// Dimension of each generated ideal.
    pub ideal_dims: Vec<usize>,
    /// Dimension of each ideal's projection.
    pub projection_dims: Vec<usize>,
    /// `π_G(I) = π_u(I)` held for every sample.
    pub projections_agree: bool,
    /// The common projection was invariant under the group involution
    /// for every sample.
    pub projection_star_invariant: bool,
}

/// Generates random two-sided ideals `I ⊆ F_q L` and verifies that the
/// two coordinate projections `π_G(I)` and `π_u(I)` coincide and form a
/// `*`-invariant ideal of `F_q G`.
///
/// The full ring involution `(a + bu)* = a* − bu` need not fix a proper
/// ideal: it exchanges the two halves of each split commutative
/// component, so only the projection inherits `*`-invariance.
pub fn ideal_projection_check(
    spec: &LoopSpec,
    q: u64,
    samples: u64,
    seed: u64,
) -> Result<IdealProjectionReport, RaloopError> {
    require_odd_prime(q)?;
    let t = LoopTable::build(spec)?;
    let n = t.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ideal_dims = Vec::new();
    let mut projection_dims = Vec::new();
    let mut projections_agree = true;
    let mut projection_star_invariant = true;
    for _ in 0..samples {
        let seed_vec = random_vector(&t, q, &mut rng);
        let ideal = ideal_closure(&t, q, seed_vec);
        ideal_dims.push(ideal.rows.len());
        let mut proj_g = Echelon::new(q, n / 2);
        let mut proj_u = Echelon::new(q, n / 2);
        for row in &ideal.rows {
            proj_g.insert(row[..n / 2].to_vec());
            proj_u.insert(row[n / 2..].to_vec());
        }
        projection_dims.push(proj_g.rows.len());
        if !proj_g.same_span(&proj_u) {
            projections_agree = false;
        }
        for row in proj_g.rows.clone() {
            let mut starred = vec![0u64; n / 2];
            for (i, &coeff) in row.iter().enumerate() {
                let j = t.star_perm[i];
                starred[j] = (starred[j] + coeff) % q;
            }
            if !proj_g.contains(&starred) {
                projection_star_invariant = false;
            }
        }
    }
    Ok(IdealProjectionReport {
        samples,
        ideal_dims,
        projection_dims,
        projections_agree,
        projection_star_invariant,
    })
}

/// Component count and commutant dimension read directly off the
/// regular representation of `F_q L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterOracleReport {
    /// Dimension of `{z : zx = xz for all x}`, the sum of the component
    /// center degrees.
    pub commutant_dim: u64,
    /// Total number of simple components, the dimension of the fixed
    /// space of the Frobenius map on the commutant.
    pub component_count: u64,
}

/// Counts the simple components of `F_q L` from first principles.
///
/// The commutant of a semisimple alternative algebra is the direct sum
/// of the component centers, and is found combinatorially: `zx = xz`
/// for all basis elements `x` forces the coefficients of `z` to be
/// constant on the orbits of `g ↦ L_x⁻¹(R_x(g))`. The Frobenius map
/// `z ↦ z^q` is linear on the commutant and fixes a one-dimensional
/// subspace per simple component, so the component count is the kernel
/// dimension of `Frob − id`. This route uses only the multiplication
/// table, independent of all class counting.
pub fn component_count_oracle(spec: &LoopSpec, q: u64) -> Result<CenterOracleReport, RaloopError> {
    require_odd_prime(q)?;
    let t = LoopTable::build(spec)?;
    let n = t.n;
    let mut left_inverse = vec![0usize; n * n];
    for x in 0..n {
        for g in 0..n {
            left_inverse[x * n + t.mul(x, g)] = g;
        }
    }
    let mut uf = UnionFind::new(n);
    for x in 0..n {
        for g in 0..n {
            uf.union(g, left_inverse[x * n + t.mul(g, x)]);
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for g in 0..n {
        let root = uf.find(g);
        if class_of[root] == usize::MAX {
            class_of[root] = reps.len();
            reps.push(root);
        }
        class_of[g] = class_of[root];
    }
    let k = reps.len();
    let mut frobenius = vec![vec![0u64; k]; k];
    for (c, &rep) in reps.iter().enumerate() {
        let mut v = vec![0u64; n];
        for g in 0..n {
            if class_of[g] == class_of[rep] {
                v[g] = 1;
            }
        }
        let w = power_vector(&t, q, &v, q);
        for g in 0..n {
            assert_eq!(
                w[g],
                w[reps[class_of[g]]],
                "Frobenius image not constant on commutation classes"
            );
        }
        for j in 0..k {
            frobenius[j][c] = w[reps[j]];
        }
    }
    for (j, row) in frobenius.iter_mut().enumerate() {
        row[j] = (row[j] + q - 1) % q;
    }
    let fixed = k as u64 - matrix_rank(frobenius, q);
    Ok(CenterOracleReport {
        commutant_dim: k as u64,
        component_count: fixed,
    })
}

fn require_odd_prime(q: u64) -> Result<(), RaloopError> {
    let prime = q > 2
        && q % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= q)
            .all(|d| q % d != 0);
    if prime {
        Ok(())
    } else {
        Err(RaloopError::NonPrimeModulus(q))
    }
}

fn random_vector(t: &LoopTable, q: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..t.n).map(|_| rng.gen_range(0..q)).collect()
}

fn convolve(t: &LoopTable, q: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; t.n];
    for i in 0..t.n {
        if a[i] == 0 {
            continue;
        }
        for j in 0..t.n {
            if b[j] == 0 {
                continue;
            }
            let idx = t.mul(i, j);
            out[idx] = (out[idx] + a[i] * b[j]) % q;
        }
    }
    out
}

fn star_vector(t: &LoopTable, q: u64, a: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; t.n];
    for i in 0..t.n {
        if i < t.group_size {
            out[t.star_perm[i]] = (out[t.star_perm[i]] + a[i]) % q;
        } else {
            out[i] = (out[i] + q - a[i] % q) % q;
        }
    }
    out
}

fn norm_vector(t: &LoopTable, q: u64, a: &[u64]) -> Vec<u64> {
    convolve(t, q, a, &star_vector(t, q, a))
}

fn is_central_vector(t: &LoopTable, q: u64, z: &[u64]) -> bool {
    for b in 0..t.n {
        let mut left = vec![0u64; t.n];
        let mut right = vec![0u64; t.n];
        for g in 0..t.n {
            if z[g] != 0 {
                let zb = t.mul(g, b);
                left[zb] = (left[zb] + z[g]) % q;
                let bz = t.mul(b, g);
                right[bz] = (right[bz] + z[g]) % q;
            }
        }
        if left != right {
            return false;
        }
    }
    true
}

fn power_vector(t: &LoopTable, q: u64, v: &[u64], exp: u64) -> Vec<u64> {
    let mut result: Option<Vec<u64>> = None;
    let mut base = v.to_vec();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => convolve(t, q, &r, &base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = convolve(t, q, &base, &base);
        }
    }
    result.expect("exponent is positive")
}

/// Row-echelon span over `F_q`.
struct Echelon {
    q: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(q: u64, width: usize) -> Echelon {
        Echelon {
            q,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn reduce(&self, v: &mut [u64]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p] != 0 {
                let c = v[p];
                for j in p..self.width {
                    v[j] = (v[j] + (self.q - c) * row[j]) % self.q;
                }
            }
        }
    }

    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = mod_inverse(v[p], self.q);
        for c in v.iter_mut() {
            *c = *c * inv % self.q;
        }
        let at = self.pivots.partition_point(|&existing| existing < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&c| c == 0)
    }

    fn same_span(&self, other: &Echelon) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.iter().all(|r| other.contains(r))
    }
}

fn mod_inverse(a: u64, q: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % q;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    result
}

fn ideal_closure(t: &LoopTable, q: u64, seed_vec: Vec<u64>) -> Echelon {
    let n = t.n;
    let mut ech = Echelon::new(q, n);
    let mut queue: Vec<Vec<u64>> = Vec::new();
    if ech.insert(seed_vec.clone()) {
        queue.push(seed_vec);
    }
    while let Some(v) = queue.pop() {
        for b in 0..n {
            let mut left = vec![0u64; n];
            let mut right = vec![0u64; n];
            for g in 0..n {
                if v[g] != 0 {
                    left[t.mul(b, g)] = (left[t.mul(b, g)] + v[g]) % q;
                    right[t.mul(g, b)] = (right[t.mul(g, b)] + v[g]) % q;
                }
            }
            for w in [left, right] {
                if ech.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
    }
    ech
}

fn matrix_rank(mut m: Vec<Vec<u64>>, q: u64) -> u64 {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let inv = mod_inverse(m[rank][col], q);
        for j in col..cols {
            m[rank][j] = m[rank][j] * inv % q;
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let c = m[r][col];
                for j in col..cols {
                    m[r][j] = (m[r][j] + (q - c) * m[rank][j]) % q;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank as u64
}

/// One recorded row of the order-64 loop decomposition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopTableRow {
    /// Loop class.
    pub cls: LoopClass,
    /// Group parameters.
    pub ms: Vec<u32>,
    /// Recorded number of rational field components.
    pub printed_fields: u64,
    /// Recorded number of rational Cayley components.
    pub printed_cayley: u64,
    /// Whether the recorded counts conflict with the derived values.
    pub erratum_candidate: bool,
}

/// The recorded decomposition table of the eight indecomposable RA
/// loops of order 64 over `Q`.
///
/// One row is flagged: the recorded `L4(2,1)` entry descends from a
/// miscounted commutative part of the underlying group algebra (six
/// rational classes in `C4×C4`, which has ten), and the derived counts
/// are 20 fields and 2 Cayley algebras.
pub fn embedded_loop_table() -> Vec<LoopTableRow> {
    let row = |cls, ms: &[u32], printed_fields, printed_cayley, erratum_candidate| LoopTableRow {
        cls,
        ms: ms.to_vec(),
        printed_fields,
        printed_cayley,
        erratum_candidate,
    };
    vec![
        row(LoopClass::L1, &[3], 24, 1, false),
        row(LoopClass::L2, &[3], 16, 1, false),
        row(LoopClass::L3, &[2, 1], 24, 2, false),
        row(LoopClass::L4, &[2, 1], 12, 6, true),
        row(LoopClass::L3, &[1, 2], 16, 3, false),
        row(LoopClass::L4, &[1, 2], 16, 3, false),
        row(LoopClass::L5, &[1, 1, 1], 20, 4, false),
        row(LoopClass::L6, &[1, 1, 1], 20, 4, false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wedderburn;
    use proptest::prelude::*;

    fn loop_spec(cls: LoopClass, ms: &[u32]) -> LoopSpec {
        LoopSpec::new(cls, ms).expect("valid parameters")
    }

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    fn fq(q: u64) -> FieldSpec {
        FieldSpec::finite(q).expect("odd prime power")
    }

    fn counts(spec: &LoopSpec, field: &FieldSpec) -> (BigInt, BigInt) {
        let s = loop_decompose(spec, field).expect("decompose");
        (s.num_fields, s.num_cayley)
    }

    #[test]
    fn doubling_rules_pin_small_products() {
        let l = loop_spec(LoopClass::L3, &[1, 1]);
        let g = l.group();
        let u = l.u_element();
        let uu = l.multiply(&u, &u);
        assert_eq!(uu, l.identity());
        let l2 = loop_spec(LoopClass::L2, &[2]);
        let u2 = l2.u_element();
        let sq = l2.multiply(&u2, &u2);
        assert_eq!(sq.g, l2.group().t_element(0));
        assert!(!sq.in_coset_u);
        let x = LoopElement {
            g: g.x_element(),
            in_coset_u: false,
        };
        let yu = LoopElement {
            g: g.y_element(),
            in_coset_u: true,
        };
        let prod = l.multiply(&x, &yu);
        assert_eq!(prod.g, g.multiply(&g.y_element(), &g.x_element()));
        assert!(prod.in_coset_u);
    }

    #[test]
    fn star_is_an_antiautomorphism() {
        let l = loop_spec(LoopClass::L5, &[1, 1, 1]);
        let g = l.group();
        let elems: Vec<GroupElement> = g.elements().collect();
        for a in &elems {
            for b in &elems {
                let lhs = l.star(&g.multiply(a, b));
                let rhs = g.multiply(&l.star(b), &l.star(a));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn inverses_are_two_sided() {
        let l = loop_spec(LoopClass::L4, &[1, 1]);
        for e in l.elements() {
            let inv = l.inverse(&e);
            assert_eq!(l.multiply(&e, &inv), l.identity());
            assert_eq!(l.multiply(&inv, &e), l.identity());
        }
    }

    #[test]
    fn multiplication_table_is_a_latin_square() {
        let l = loop_spec(LoopClass::L6, &[1, 1, 1]);
        let t = LoopTable::build(&l).unwrap();
        for i in 0..t.n {
            let mut row: Vec<usize> = (0..t.n).map(|j| t.mul(i, j)).collect();
            let mut col: Vec<usize> = (0..t.n).map(|j| t.mul(j, i)).collect();
            row.sort_unstable();
            col.sort_unstable();
            let all: Vec<usize> = (0..t.n).collect();
            assert_eq!(row, all);
            assert_eq!(col, all);
        }
    }

    #[test]
    fn smallest_loops_are_right_moufang_and_nonassociative() {
        let specs: Vec<LoopSpec> = vec![
            loop_spec(LoopClass::L1, &[1]),
            loop_spec(LoopClass::L2, &[1]),
            loop_spec(LoopClass::L3, &[1, 1]),
            loop_spec(LoopClass::L4, &[1, 1]),
            loop_spec(LoopClass::L5, &[1, 1, 1]),
            loop_spec(LoopClass::L6, &[1, 1, 1]),
            loop_spec(LoopClass::L7, &[1, 1, 1, 1]),
        ];
        for spec in &specs {
            let report = check_moufang(spec, CheckMode::Exhaustive).unwrap();
            assert!(report.right_moufang_holds, "{spec}");
            assert!(report.diassociative_on_pairs, "{spec}");
            let witness = report.nonassociative_witness.expect("loop ring is never associative");
            let [x, y, z] = witness;
            let left = spec.multiply(&spec.multiply(&x, &y), &z);
            let right = spec.multiply(&x, &spec.multiply(&y, &z));
            assert_ne!(left, right, "{spec}");
        }
    }

    #[test]
    fn sampled_mode_agrees_on_a_medium_loop() {
        let spec = loop_spec(LoopClass::L5, &[2, 2, 2]);
        let report = check_moufang(
            &spec,
            CheckMode::Sampled {
                trials: 500,
                seed: 11,
            },
        )
        .unwrap();
        assert!(report.right_moufang_holds);
        assert!(report.diassociative_on_pairs);
        assert!(!report.exhaustive);
        assert!(report.nonassociative_witness.is_some());
    }

    #[test]
    fn loop_algebras_double_the_fields_for_the_first_five_classes() {
        let grid: Vec<LoopSpec> = vec![
            loop_spec(LoopClass::L1, &[1]),
            loop_spec(LoopClass::L1, &[3]),
            loop_spec(LoopClass::L2, &[2]),
            loop_spec(LoopClass::L3, &[2, 1]),
            loop_spec(LoopClass::L4, &[2, 2]),
            loop_spec(LoopClass::L5, &[1, 2, 1]),
        ];
        for spec in &grid {
            for field in [q(), fq(3), fq(5), fq(9)] {
                let loop_summary = loop_decompose(spec, &field).unwrap();
                let group_summary = wedderburn::decompose(spec.group(), &field).unwrap();
                assert_eq!(
                    loop_summary.num_fields,
                    &group_summary.num_fields * 2,
                    "{spec} over {field}"
                );
                assert_eq!(
                    loop_summary.num_cayley, group_summary.num_quaternion,
                    "{spec} over {field}"
                );
            }
        }
    }

    #[test]
    fn rational_counts_match_the_small_order_census() {
        let cases: Vec<(LoopClass, Vec<u32>, u64, u64)> = vec![
            (LoopClass::L1, vec![1], 8, 1),
            (LoopClass::L2, vec![1], 8, 1),
            (LoopClass::L1, vec![2], 16, 1),
            (LoopClass::L2, vec![2], 12, 1),
            (LoopClass::L3, vec![1, 1], 12, 2),
            (LoopClass::L4, vec![1, 1], 12, 2),
        ];
        for (cls, ms, fields, cayley) in cases {
            let spec = loop_spec(cls, &ms);
            assert_eq!(
                counts(&spec, &q()),
                (fields.into(), cayley.into()),
                "{spec}"
            );
        }
    }

    #[test]
    fn rational_split_rule_handles_the_sixth_and_seventh_classes() {
        let cases: Vec<(LoopClass, Vec<u32>, u64, u64)> = vec![
            (LoopClass::L6, vec![1, 1, 1], 20, 4),
            (LoopClass::L6, vec![1, 2, 1], 28, 6),
            (LoopClass::L5, vec![1, 2, 1], 28, 6),
            (LoopClass::L6, vec![2, 1, 1], 36, 4),
            (LoopClass::L7, vec![1, 1, 1, 1], 36, 8),
        ];
        for (cls, ms, fields, cayley) in cases {
            let spec = loop_spec(cls, &ms);
            assert_eq!(
                counts(&spec, &q()),
                (fields.into(), cayley.into()),
                "{spec}"
            );
        }
    }

    #[test]
    fn theorem_scale_formulas_hold_for_the_first_two_classes() {
        for m in 2..=8u32 {
            let spec = loop_spec(LoopClass::L1, &[m]);
            let expected = (BigInt::from(8 * m), BigInt::from(1));
            assert_eq!(counts(&spec, &q()), expected, "{spec}");
        }
        for m in 3..=8u32 {
            let spec = loop_spec(LoopClass::L2, &[m]);
            assert_eq!(
                counts(&spec, &q()),
                (BigInt::from(4 * m + 4), BigInt::from(1)),
                "{spec}"
            );
            assert_eq!(
                counts(&spec, &fq(3)),
                (BigInt::from(8 * m - 4), BigInt::from(2)),
                "{spec}"
            );
            let l1 = loop_spec(LoopClass::L1, &[m]);
            assert_eq!(
                counts(&l1, &fq(3)),
                (BigInt::from(16 * m - 24), BigInt::from(2)),
                "{l1}"
            );
        }
    }

    #[test]
    fn recorded_order_64_table_is_adjudicated() {
        let table = embedded_loop_table();
        assert_eq!(table.len(), 8);
        let flagged: Vec<&LoopTableRow> =
            table.iter().filter(|r| r.erratum_candidate).collect();
        assert_eq!(flagged.len(), 1);
        for row in &table {
            let spec = loop_spec(row.cls, &row.ms);
            assert_eq!(spec.log2_order(), 6, "{spec}");
            let (fields, cayley) = counts(&spec, &q());
            let recorded = (BigInt::from(row.printed_fields), BigInt::from(row.printed_cayley));
            if row.erratum_candidate {
                assert_ne!((fields.clone(), cayley.clone()), recorded, "{spec}");
                assert_eq!((fields, cayley), (20.into(), 2.into()), "{spec}");
            } else {
                assert_eq!((fields, cayley), recorded, "{spec}");
            }
        }
    }

    #[test]
    fn center_oracle_confirms_component_counts() {
        let specs: Vec<LoopSpec> = vec![
            loop_spec(LoopClass::L1, &[1]),
            loop_spec(LoopClass::L3, &[1, 1]),
            loop_spec(LoopClass::L4, &[1, 1]),
            loop_spec(LoopClass::L5, &[1, 1, 1]),
            loop_spec(LoopClass::L6, &[1, 1, 1]),
            loop_spec(LoopClass::L6, &[2, 1, 1]),
            loop_spec(LoopClass::L7, &[1, 1, 1, 1]),
        ];
        for spec in &specs {
            for qv in [3u64, 5, 7] {
                let oracle = component_count_oracle(spec, qv).unwrap();
                let summary = loop_decompose(spec, &fq(qv)).unwrap();
                let predicted = &summary.num_fields + &summary.num_cayley;
                assert_eq!(
                    BigInt::from(oracle.component_count),
                    predicted,
                    "{spec} over F{qv}"
                );
                assert!(oracle.commutant_dim >= oracle.component_count);
            }
        }
    }

    #[test]
    fn norms_are_central_and_multiplicative() {
        for (cls, ms) in [
            (LoopClass::L2, vec![1u32]),
            (LoopClass::L5, vec![1, 1, 1]),
            (LoopClass::L6, vec![2, 1, 1]),
        ] {
            let spec = loop_spec(cls, &ms);
            for qv in [3u64, 7] {
                let report = norm_check(&spec, qv, 12, 2026).unwrap();
                assert_eq!(report.centrality_failures, 0, "{spec} over F{qv}");
                assert_eq!(report.multiplicativity_failures, 0, "{spec} over F{qv}");
            }
        }
    }

    #[test]
    fn ideal_projections_coincide() {
        for (cls, ms) in [(LoopClass::L3, vec![1u32, 1]), (LoopClass::L6, vec![1, 1, 1])] {
            let spec = loop_spec(cls, &ms);
            let report = ideal_projection_check(&spec, 3, 6, 5).unwrap();
            assert!(report.projections_agree, "{spec}");
            assert!(report.projection_star_invariant, "{spec}");
            for (&dim, &proj) in report.ideal_dims.iter().zip(&report.projection_dims) {
                assert!(proj <= dim && dim <= 2 * proj, "{spec}: {dim} vs {proj}");
                assert!(dim >= 1, "{spec}");
            }
        }
    }

    #[test]
    fn comparisons_flag_indistinguishable_counts() {
        let f = q();
        let a = loop_spec(LoopClass::L5, &[1, 2, 1]);
        let b = loop_spec(LoopClass::L6, &[1, 2, 1]);
        let cmp = compare_loops(&a, &b, &f).unwrap();
        assert!(cmp.counts_agree);
        assert_eq!(cmp.left.num_fields, 28.into());
        assert_eq!(cmp.left.num_cayley, 6.into());
        assert_eq!(cmp.caveat, Some(SPLIT_DIVISION_CAVEAT));
        let c = loop_spec(LoopClass::L3, &[1, 2]);
        let d = loop_spec(LoopClass::L4, &[1, 2]);
        let cmp = compare_loops(&c, &d, &f).unwrap();
        assert!(cmp.counts_agree);
        assert_eq!(cmp.caveat, Some(SPLIT_DIVISION_CAVEAT));
        let e = loop_spec(LoopClass::L1, &[2]);
        let g = loop_spec(LoopClass::L2, &[2]);
        let cmp = compare_loops(&e, &g, &f).unwrap();
        assert!(!cmp.counts_agree);
        assert!(cmp.caveat.is_none());
    }

    #[test]
    fn json_records_use_fixed_key_order() {
        let spec = loop_spec(LoopClass::L3, &[1, 2]);
        let summary = loop_decompose(&spec, &q()).unwrap();
        assert_eq!(
            summary.json_record(&spec),
            r#"{"cls":"L3","ms":[1,2],"field":"Q","num_fields":16,"num_cayley":3}"#
        );
    }

    #[test]
    fn loop_class_round_trips_through_strings() {
        for cls in LoopClass::all() {
            let parsed: LoopClass = cls.to_string().parse().unwrap();
            assert_eq!(parsed, cls);
        }
        assert!("L8".parse::<LoopClass>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn split_counts_stay_between_single_and_double(
            cls_idx in 0usize..7,
            ms_seed in proptest::collection::vec(1u32..=2, 4),
            field_idx in 0usize..3,
        ) {
            let cls = LoopClass::all()[cls_idx];
            let ms = &ms_seed[..cls.family().num_central_generators()];
            let field = [q(), fq(3), fq(5)][field_idx].clone();
            let spec = loop_spec(cls, ms);
            let summary = loop_decompose(&spec, &field).unwrap();
            let group_summary = wedderburn::decompose(spec.group(), &field).unwrap();
            prop_assert_eq!(&summary.num_cayley, &group_summary.num_quaternion);
            prop_assert!(summary.num_fields >= group_summary.num_fields);
            prop_assert!(summary.num_fields <= &group_summary.num_fields * 2);
            let splits = summary.splits_per_component.as_ref().unwrap();
            prop_assert_eq!(BigInt::from(splits.len()), group_summary.num_fields);
            if cls.always_splits() {
                prop_assert!(splits.iter().all(|s| *s));
            }
        }
    }
}
