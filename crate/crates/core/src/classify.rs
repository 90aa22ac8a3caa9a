//! Counting the simple components of group algebras of the six families.
//!
//! For `K = Q` or a finite field of odd order `q` coprime to `|G|`, the
//! group algebra `KG` is semisimple and its number of simple components
//! equals the number of `K`-classes of `G` (Berman–Witt): conjugacy
//! classes fused by `g ↦ gⁿ`, over all `n` coprime to the order of `g`
//! when `K = Q` and over the powers of `q` when `K = F_q`.
//!
//! Three independent routes compute the same breakdown:
//!
//! * [`oracle_breakdown`] fuses explicitly enumerated conjugacy classes
//!   and never consults a closed form;
//! * [`pipeline_breakdown`] reduces each quantity to an abelian
//!   subquotient: classes meeting the coset `w·Z(G)` correspond to
//!   classes of `⟨Z(G), w⟩/⟨s⟩` that avoid those of `Z(G)/⟨s⟩`;
//! * [`theorem_predict`] evaluates cyclic-subgroup closed forms on the
//!   subquotient types written directly in the family parameters, valid
//!   on the uniform range (all `mᵢ ≥ 3`) over `Q` and over `F_q` with
//!   `q ≡ 3 (mod 8)`, the moduli where the finite count is minimal.
//!
//! [`embedded_case_fixtures`] ships a frozen table of expected breakdowns
//! used to pin the pipeline, with suspect reference entries marked.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::abelian::{
    self, AbelianElement, AbelianError, AbelianType, DEFAULT_CEILING_LOG2,
};
use crate::arith2::{cyclic_subgroup_count, small_torsion_subgroup_count, TwoAdicExponents};
use crate::groups::{CosetWord, Family, GroupError, GroupSpec};

/// Default enumeration ceiling for the oracle, as `log2 |G|`.
///
/// Lower than the abelian ceiling because the oracle walks the whole
/// group, not just its subquotients.
pub const DEFAULT_ORACLE_CEILING_LOG2: u32 = 14;

/// Errors from class counting and fixture parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    /// A field tag was not `"Q"` or `"Fq:<order>"`.
    #[error("field tag must be \"Q\" or \"Fq:<order>\", got {0:?}")]
    FieldTag(String),
    /// A finite field order must be an odd prime power.
    #[error("field order must be an odd prime power, got {0}")]
    FieldOrder(u64),
    /// The closed forms cover `Q` and the minimal moduli `q ≡ 3 (mod 8)`.
    #[error("closed-form counts require Q or q ≡ 3 (mod 8), got {0}")]
    FieldNotMinimal(FieldSpec),
    /// Group construction or enumeration failed.
    #[error(transparent)]
    Group(#[from] GroupError),
    /// Abelian subquotient counting failed.
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    /// An embedded fixture row is malformed.
    #[error("fixture line {line}: {reason}")]
    Fixture { line: usize, reason: String },
}

/// The coefficient field: the rationals or a finite field of odd order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// The rational numbers.
    Q,
    /// The finite field with this many elements; always an odd prime power.
    Finite(u64),
}

impl FieldSpec {
    /// Builds the finite-field variant, validating the order.
    pub fn finite(q: u64) -> Result<FieldSpec, ClassifyError> {
        if q % 2 == 1 && is_odd_prime_power(q) {
            Ok(FieldSpec::Finite(q))
        } else {
            Err(ClassifyError::FieldOrder(q))
        }
    }

    /// Parses `"Q"` or `"Fq:<order>"`.
    pub fn parse(tag: &str) -> Result<FieldSpec, ClassifyError> {
        if tag == "Q" {
            return Ok(FieldSpec::Q);
        }
        match tag.strip_prefix("Fq:") {
            Some(rest) => match rest.parse::<u64>() {
                Ok(q) => FieldSpec::finite(q),
                Err(_) => Err(ClassifyError::FieldTag(tag.to_string())),
            },
            None => Err(ClassifyError::FieldTag(tag.to_string())),
        }
    }

    /// True for `Q` and for finite orders `q ≡ 3 (mod 8)`, the moduli on
    /// which the finite-field component count attains its minimum.
    pub fn is_minimal_modulus(&self) -> bool {
        match self {
            FieldSpec::Q => true,
            FieldSpec::Finite(q) => q % 8 == 3,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => f.write_str("Q"),
            FieldSpec::Finite(q) => write!(f, "Fq:{q}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldSpec::parse(s)
    }
}

/// A class count split along the cosets of `⟨Z(G), x, y⟩` over the center.
///
/// Fusion by power maps preserves an element's coset, so the `K`-classes
/// split into four buckets: inside the center, and in the cosets of `x`,
/// `y`, and `xy`. Their sum is `total`, the number of simple components
/// of `KG`. The separate `n_abelianization` counts classes of `G/G'`,
/// i.e. the commutative (field) components; the remaining
/// `total - n_abelianization` components of `KG` are quaternion algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCountBreakdown {
    /// The coefficient field the counts refer to.
    pub field: FieldSpec,
    /// Classes inside the center.
    pub n_center: BigInt,
    /// Classes in the coset of `x`.
    pub n_x: BigInt,
    /// Classes in the coset of `y`.
    pub n_y: BigInt,
    /// Classes in the coset of `xy`.
    pub n_xy: BigInt,
    /// Classes of `G/G'`; the number of field components.
    pub n_abelianization: BigInt,
    /// All classes: the number of simple components.
    pub total: BigInt,
}

impl ClassCountBreakdown {
    /// Label/value pairs in breakdown order.
    ///
    /// Labels are `N1, N2, N3, N4, N0, N` over `Q` and `M1, …, M` over a
    /// finite field, numbering the center first, then the `x`, `y`, `xy`
    /// cosets, then the abelianization, then the total.
    pub fn quantities(&self) -> [(&'static str, &BigInt); 6] {
        let labels = match self.field {
            FieldSpec::Q => ["N1", "N2", "N3", "N4", "N0", "N"],
            FieldSpec::Finite(_) => ["M1", "M2", "M3", "M4", "M0", "M"],
        };
        [
            (labels[0], &self.n_center),
            (labels[1], &self.n_x),
            (labels[2], &self.n_y),
            (labels[3], &self.n_xy),
            (labels[4], &self.n_abelianization),
            (labels[5], &self.total),
        ]
    }
}

impl fmt::Display for ClassCountBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (label, value)) in self.quantities().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{label}={value}")?;
        }
        Ok(())
    }
}

/// Power maps whose orbits are the `K`-classes, given the conjugacy
/// classes. Over `Q` the inverse and cube generate every odd power map
/// on a 2-group; over `F_q` the single map `g ↦ g^q` does.
fn fusion_exponents(field: &FieldSpec, max_order_log2: u32) -> Vec<u64> {
    match field {
        FieldSpec::Q => vec![(1u64 << max_order_log2) - 1, 3],
        FieldSpec::Finite(q) => vec![*q],
    }
}

/// Berman–Witt counts by direct enumeration with the default ceiling.
pub fn oracle_breakdown(
    spec: &GroupSpec,
    field: &FieldSpec,
) -> Result<ClassCountBreakdown, ClassifyError> {
    oracle_breakdown_with_ceiling(spec, field, DEFAULT_ORACLE_CEILING_LOG2)
}

/// Berman–Witt counts by direct enumeration.
///
/// Lists the conjugacy classes, fuses them under the field's power maps
/// with a union-find, and buckets the fused classes by coset. The
/// abelianization is counted by the same orbit walk on `G/G'`, not by
/// any closed form, so the result is independent of the pipeline.
pub fn oracle_breakdown_with_ceiling(
    spec: &GroupSpec,
    field: &FieldSpec,
    ceiling_log2: u32,
) -> Result<ClassCountBreakdown, ClassifyError> {
    let classes = spec.conjugacy_classes_with_ceiling(ceiling_log2)?;
    let s = spec.commutator_element();
    let mut class_of = HashMap::new();
    for (i, c) in classes.iter().enumerate() {
        class_of.insert(c.representative.clone(), i);
        if c.size == 2 {
            class_of.insert(spec.multiply(&s, &c.representative), i);
        }
    }
    let exponents = fusion_exponents(field, spec.log2_order() as u32);
    let mut uf = UnionFind::new(classes.len());
    for (i, c) in classes.iter().enumerate() {
        for &n in &exponents {
            uf.union(i, class_of[&spec.power(&c.representative, n)]);
        }
    }
    let mut counts = [0u64; 4];
    let mut seen = HashSet::new();
    for (i, c) in classes.iter().enumerate() {
        if !seen.insert(uf.find(i)) {
            continue;
        }
        let slot = match (c.representative.dx(), c.representative.dy()) {
            (false, false) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (true, true) => 3,
        };
        counts[slot] += 1;
    }
    Ok(ClassCountBreakdown {
        field: field.clone(),
        n_center: BigInt::from(counts[0]),
        n_x: BigInt::from(counts[1]),
        n_y: BigInt::from(counts[2]),
        n_xy: BigInt::from(counts[3]),
        n_abelianization: abelian_orbit_count(&spec.abelianization(), field, ceiling_log2)?,
        total: BigInt::from(counts.iter().sum::<u64>()),
    })
}

/// Total number of simple components of `KG`, by enumeration alone.
pub fn k_class_count_group(
    spec: &GroupSpec,
    field: &FieldSpec,
) -> Result<BigInt, ClassifyError> {
    Ok(oracle_breakdown(spec, field)?.total)
}

/// Orbit count of the field's power maps on an abelian group, by walking
/// orbit closures element by element.
fn abelian_orbit_count(
    ty: &AbelianType,
    field: &FieldSpec,
    ceiling_log2: u32,
) -> Result<BigInt, ClassifyError> {
    if ty.log2_order() > u64::from(ceiling_log2) {
        return Err(AbelianError::CeilingExceeded {
            log2_order: ty.log2_order(),
            ceiling_log2,
        }
        .into());
    }
    let exponents = fusion_exponents(field, ty.exps().max_exp());
    let mut seen: HashSet<AbelianElement> = HashSet::new();
    let mut orbits = 0u64;
    for g in ty.elements() {
        if seen.contains(&g) {
            continue;
        }
        orbits += 1;
        let mut stack = vec![g];
        while let Some(h) = stack.pop() {
            if !seen.insert(h.clone()) {
                continue;
            }
            for &n in &exponents {
                let image = h.pow(n, ty);
                if !seen.contains(&image) {
                    stack.push(image);
                }
            }
        }
    }
    Ok(BigInt::from(orbits))
}

/// Breakdown via abelian subquotients with the default ceiling.
pub fn pipeline_breakdown(
    spec: &GroupSpec,
    field: &FieldSpec,
) -> Result<ClassCountBreakdown, ClassifyError> {
    pipeline_breakdown_with_ceiling(spec, field, DEFAULT_CEILING_LOG2)
}

/// Breakdown via abelian subquotients.
///
/// Classes inside the center are classes of `Z(G)` itself. Classes
/// meeting the coset `w·Z(G)` correspond to those classes of
/// `⟨Z(G), w⟩/⟨s⟩` not already classes of `Z(G)/⟨s⟩`, so each coset
/// count is a difference of two abelian counts. The abelianization is
/// counted directly. Finite-field abelian counts above the ceiling fall
/// back to the order-stratified formula, so large parameters stay exact.
pub fn pipeline_breakdown_with_ceiling(
    spec: &GroupSpec,
    field: &FieldSpec,
    ceiling_log2: u32,
) -> Result<ClassCountBreakdown, ClassifyError> {
    let count = |ty: &AbelianType| -> Result<BigInt, ClassifyError> {
        Ok(match field {
            FieldSpec::Q => abelian::q_class_count(ty),
            FieldSpec::Finite(q) => abelian::k_class_count_with_ceiling(ty, *q, ceiling_log2)?,
        })
    };
    let n_center = count(spec.center())?;
    let off_center = count(&spec.center_mod_s())?;
    let n_x = count(&spec.coset_subquotient(CosetWord::X))? - &off_center;
    let n_y = count(&spec.coset_subquotient(CosetWord::Y))? - &off_center;
    let n_xy = count(&spec.coset_subquotient(CosetWord::XY))? - &off_center;
    let n_abelianization = count(&spec.abelianization())?;
    let total = &n_center + &n_x + &n_y + &n_xy;
    Ok(ClassCountBreakdown {
        field: field.clone(),
        n_center,
        n_x,
        n_y,
        n_xy,
        n_abelianization,
        total,
    })
}

/// The six subquotient types written directly in the family parameters,
/// in breakdown order: center, `⟨Z,x⟩/⟨s⟩`, `⟨Z,y⟩/⟨s⟩`, `⟨Z,xy⟩/⟨s⟩`,
/// `Z/⟨s⟩`, `G/G'`.
fn parameter_subquotient_types(spec: &GroupSpec) -> [TwoAdicExponents; 6] {
    fn d5_like(a: u32, b: u32, c: u32, extra: Option<u32>) -> [TwoAdicExponents; 6] {
        let t = |mut v: Vec<u32>| {
            v.extend(extra);
            TwoAdicExponents::new(v)
        };
        [
            t(vec![a, b, c]),
            t(vec![a - 1, b + 1, c]),
            t(vec![a - 1, b, c + 1]),
            t(vec![a - 1, b.min(c), b.max(c) + 1]),
            t(vec![a - 1, b, c]),
            t(vec![a - 1, b + 1, c + 1]),
        ]
    }
    let t = |v: Vec<u32>| TwoAdicExponents::new(v);
    let ms = spec.ms();
    match spec.family() {
        Family::D1 => {
            let m = ms[0];
            [
                t(vec![m]),
                t(vec![m - 1, 1]),
                t(vec![m - 1, 1]),
                t(vec![m - 1, 1]),
                t(vec![m - 1]),
                t(vec![m - 1, 1, 1]),
            ]
        }
        Family::D2 => {
            let m = ms[0];
            [
                t(vec![m]),
                t(vec![m]),
                t(vec![m]),
                t(vec![m - 1, 1]),
                t(vec![m - 1]),
                t(vec![m, 1]),
            ]
        }
        Family::D3 => {
            let (a, b) = (ms[0], ms[1]);
            [
                t(vec![a, b]),
                t(vec![a - 1, b, 1]),
                t(vec![a - 1, b + 1]),
                t(vec![a - 1, b + 1]),
                t(vec![a - 1, b]),
                t(vec![a - 1, b + 1, 1]),
            ]
        }
        Family::D4 => {
            let (a, b) = (ms[0], ms[1]);
            [
                t(vec![a, b]),
                t(vec![a, b]),
                t(vec![a - 1, b + 1]),
                t(vec![(a - 1).min(b), (a - 1).max(b) + 1]),
                t(vec![a - 1, b]),
                t(vec![a, b + 1]),
            ]
        }
        Family::D5 => d5_like(ms[0], ms[1], ms[2], None),
        Family::D5xC => d5_like(ms[0], ms[1], ms[2], Some(ms[3])),
    }
}

/// Breakdown from closed forms alone, on the range where they hold.
///
/// Over `Q` each abelian count is the number of cyclic subgroups; over
/// `F_q` with `q ≡ 3 (mod 8)` it is twice that minus the number of
/// subgroups of exponent dividing 4, and this is the minimum over all
/// odd `q`. Other finite orders are rejected with
/// [`ClassifyError::FieldNotMinimal`]. Parameters below the uniform
/// range (some `mᵢ < 3`) are routed through the pipeline, since the
/// closed forms in the parameters only stabilize from 3 on.
pub fn theorem_predict(
    spec: &GroupSpec,
    field: &FieldSpec,
) -> Result<ClassCountBreakdown, ClassifyError> {
    if !field.is_minimal_modulus() {
        return Err(ClassifyError::FieldNotMinimal(field.clone()));
    }
    if spec.ms().iter().any(|&m| m < 3) {
        return pipeline_breakdown(spec, field);
    }
    let [center, h_x, h_y, h_xy, z_mod_s, ab] = parameter_subquotient_types(spec);
    let count = |ty: &TwoAdicExponents| -> BigInt {
        match field {
            FieldSpec::Q => cyclic_subgroup_count(ty),
            FieldSpec::Finite(_) => {
                BigInt::from(2) * cyclic_subgroup_count(ty) - small_torsion_subgroup_count(ty)
            }
        }
    };
    let n_center = count(&center);
    let off_center = count(&z_mod_s);
    let n_x = count(&h_x) - &off_center;
    let n_y = count(&h_y) - &off_center;
    let n_xy = count(&h_xy) - &off_center;
    let n_abelianization = count(&ab);
    let total = &n_center + &n_x + &n_y + &n_xy;
    Ok(ClassCountBreakdown {
        field: field.clone(),
        n_center,
        n_x,
        n_y,
        n_xy,
        n_abelianization,
        total,
    })
}

/// One quantity compared across the routes that can compute it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantityComparison {
    /// The quantity's label, as in [`ClassCountBreakdown::quantities`].
    pub quantity: &'static str,
    /// Enumerated value; absent when the group is above the oracle ceiling.
    pub oracle: Option<BigInt>,
    /// Subquotient pipeline value; always present.
    pub pipeline: BigInt,
    /// Closed-form value; absent when the field is not a minimal modulus.
    pub theorem: Option<BigInt>,
    /// True when every present value equals the pipeline's.
    pub agree: bool,
}

impl fmt::Display for QuantityComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: &Option<BigInt>| match v {
            Some(n) => n.to_string(),
            None => "-".to_string(),
        };
        write!(
            f,
            "{}: oracle={} pipeline={} theorem={} {}",
            self.quantity,
            opt(&self.oracle),
            self.pipeline,
            opt(&self.theorem),
            if self.agree { "agree" } else { "DISAGREE" },
        )
    }
}

/// Compares all six quantities across the three routes, with the default
/// oracle ceiling.
pub fn discrepancy_report(
    spec: &GroupSpec,
    field: &FieldSpec,
) -> Result<Vec<QuantityComparison>, ClassifyError> {
    discrepancy_report_with_ceiling(spec, field, DEFAULT_ORACLE_CEILING_LOG2)
}

/// Compares all six quantities across the three routes.
///
/// The oracle column is filled only for groups at or below the given
/// ceiling; the theorem column only for minimal moduli. A row agrees
/// when every filled column matches the pipeline.
pub fn discrepancy_report_with_ceiling(
    spec: &GroupSpec,
    field: &FieldSpec,
    oracle_ceiling_log2: u32,
) -> Result<Vec<QuantityComparison>, ClassifyError> {
    let pipeline = pipeline_breakdown(spec, field)?;
    let oracle = if spec.log2_order() <= u64::from(oracle_ceiling_log2) {
        Some(oracle_breakdown_with_ceiling(spec, field, oracle_ceiling_log2)?)
    } else {
        None
    };
    let theorem = match theorem_predict(spec, field) {
        Ok(b) => Some(b),
        Err(ClassifyError::FieldNotMinimal(_)) => None,
        Err(e) => return Err(e),
    };
    let rows = pipeline
        .quantities()
        .iter()
        .enumerate()
        .map(|(k, (label, value))| {
            let oracle = oracle.as_ref().map(|b| b.quantities()[k].1.clone());
            let theorem = theorem.as_ref().map(|b| b.quantities()[k].1.clone());
            let agree = oracle.as_ref().map_or(true, |v| v == *value)
                && theorem.as_ref().map_or(true, |v| v == *value);
            QuantityComparison {
                quantity: label,
                oracle,
                pipeline: (*value).clone(),
                theorem,
                agree,
            }
        })
        .collect();
    Ok(rows)
}

/// One frozen test case: a group, a field, and the expected breakdown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseFixture {
    /// The family of the group.
    pub family: Family,
    /// The family parameters.
    pub ms: Vec<u32>,
    /// The coefficient field.
    pub field: FieldSpec,
    /// The recorded breakdown.
    pub expected: ClassCountBreakdown,
    /// True when the recorded values are believed misprinted; such rows
    /// must differ from the pipeline rather than match it.
    pub erratum_candidate: bool,
}

impl CaseFixture {
    /// The group the fixture refers to.
    pub fn spec(&self) -> Result<GroupSpec, ClassifyError> {
        Ok(GroupSpec::new(self.family, &self.ms)?)
    }
}

/// Parses the embedded fixture table.
///
/// Tab-separated columns: family, comma-joined parameters, field tag,
/// the six breakdown entries, and a note that is either `ok` or
/// `erratum-candidate`. Lines starting with `#` are comments.
pub fn embedded_case_fixtures() -> Result<Vec<CaseFixture>, ClassifyError> {
    let raw = include_str!("fixtures/case_counts.tsv");
    let mut out = Vec::new();
    for (idx, line) in raw.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |reason: String| ClassifyError::Fixture {
            line: idx + 1,
            reason,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(fail(format!("expected 10 columns, got {}", cols.len())));
        }
        let family = Family::from_str(cols[0]).map_err(|e| fail(e.to_string()))?;
        let ms = cols[1]
            .split(',')
            .map(|p| p.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| fail(format!("bad parameter list: {e}")))?;
        let field = FieldSpec::parse(cols[2]).map_err(|e| fail(e.to_string()))?;
        let counts = cols[3..9]
            .iter()
            .map(|c| c.parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| fail(format!("bad count: {e}")))?;
        let erratum_candidate = match cols[9] {
            "ok" => false,
            "erratum-candidate" => true,
            other => return Err(fail(format!("unknown note {other:?}"))),
        };
        out.push(CaseFixture {
            family,
            ms,
            field: field.clone(),
            expected: ClassCountBreakdown {
                field,
                n_center: counts[0].clone(),
                n_x: counts[1].clone(),
                n_y: counts[2].clone(),
                n_xy: counts[3].clone(),
                n_abelianization: counts[4].clone(),
                total: counts[5].clone(),
            },
            erratum_candidate,
        });
    }
    Ok(out)
}

/// Union-find over `0..n` with path halving.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the fixed witness set decides every `u64`.
fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn integer_kth_root(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / f64::from(k)) as u64;
    while (r + 1).checked_pow(k).is_some_and(|p| p <= n) {
        r += 1;
    }
    while r > 0 && r.checked_pow(k).map_or(true, |p| p > n) {
        r -= 1;
    }
    r
}

fn is_odd_prime_power(n: u64) -> bool {
    if n < 3 || n % 2 == 0 {
        return false;
    }
    for k in 1..=40 {
        let r = integer_kth_root(n, k);
        if r < 3 {
            break;
        }
        if r.checked_pow(k).is_some_and(|p| p == n) && is_prime(r) {
            return true;
        }
    }
    false
}
