//! Wedderburn decompositions of the group algebras `KG`.
//!
//! Each group in these families has commutator subgroup `G' = {1, s}` of
//! order two, so over any field `K` of odd characteristic (or `Q`) the
//! group algebra splits as
//!
//! ```text
//! KG ≅ K[G/G'] ⊕ Δ(G, G')
//! ```
//!
//! where the commutative summand `K[G/G']` is a direct sum of fields of
//! total dimension `|G|/2` and the complement `Δ(G, G')` is a direct sum
//! of quaternion algebras. By the Witt–Berman correspondence the number
//! of simple components of `KG` equals the number of `K`-classes of `G`,
//! and the number of field components equals the number of `K`-classes
//! of `G/G'`; the quaternion count is the difference.
//!
//! Over a finite field every division ring is commutative, so each
//! quaternion component is split: a ring of `2×2` matrices over its
//! center. In that case the field components are `F_{q^d}` with `d`
//! running over the Frobenius orbit sizes on `G/G'`, reported here as a
//! sorted degree multiset.

use std::fmt;

use num_bigint::BigInt;

use crate::abelian;
use crate::classify::{pipeline_breakdown_with_ceiling, ClassifyError, FieldSpec};
use crate::groups::GroupSpec;

/// Component counts and dimensions of one semisimple group algebra `KG`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionSummary {
    /// Coefficient field.
    pub field: FieldSpec,
    /// Number of field components, the simple summands of `K[G/G']`.
    pub num_fields: BigInt,
    /// Extension degrees of the field components over `F_q`, sorted
    /// ascending. Absent over `Q`, where component centers are not
    /// parametrized by a single degree.
    pub field_degrees: Option<Vec<u64>>,
    /// Number of quaternion-algebra components.
    pub num_quaternion: BigInt,
    /// Dimension of the commutative part, `|G/G'| = |G|/2`.
    pub commutative_dim: BigInt,
    /// Dimension of the whole algebra, `|G|`.
    pub total_dim: BigInt,
}

impl DecompositionSummary {
    /// Dimension of the quaternion part, `|G|/2`.
    pub fn noncommutative_dim(&self) -> BigInt {
        &self.total_dim - &self.commutative_dim
    }

    /// Single-line JSON record with fixed key order:
    /// `family, ms, field, num_fields, field_degrees (finite only),
    /// num_quaternion`.
    pub fn json_record(&self, spec: &GroupSpec) -> String {
        let ms = spec
            .ms()
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let mut out = format!(
            "{{\"family\":\"{}\",\"ms\":[{}],\"field\":\"{}\",\"num_fields\":{}",
            spec.family(),
            ms,
            self.field,
            self.num_fields
        );
        if let Some(degrees) = &self.field_degrees {
            let ds = degrees
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(",\"field_degrees\":[{}]", ds));
        }
        out.push_str(&format!(",\"num_quaternion\":{}}}", self.num_quaternion));
        out
    }
}

impl fmt::Display for DecompositionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} fields + {} quaternion algebras, dimension {}",
            self.field, self.num_fields, self.num_quaternion, self.total_dim
        )
    }
}

/// Wedderburn component counts of `KG` with the default ceiling.
pub fn decompose(
    spec: &GroupSpec,
    field: &FieldSpec,
) -> Result<DecompositionSummary, ClassifyError> {
    decompose_with_ceiling(spec, field, abelian::DEFAULT_CEILING_LOG2)
}

/// Wedderburn component counts of `KG`.
///
/// Field components are counted as `K`-classes of the abelianization,
/// quaternion components as the remaining `K`-classes of `G`. Over a
/// finite field the degree multiset of the commutative part is computed
/// by direct orbit enumeration, which requires `|G/G'| ≤ 2^ceiling`.
pub fn decompose_with_ceiling(
    spec: &GroupSpec,
    field: &FieldSpec,
    ceiling_log2: u32,
) -> Result<DecompositionSummary, ClassifyError> {
    let breakdown = pipeline_breakdown_with_ceiling(spec, field, ceiling_log2)?;
    let field_degrees = match field {
        FieldSpec::Q => None,
        FieldSpec::Finite(q) => Some(abelian::field_degrees_with_ceiling(
            &spec.abelianization(),
            *q,
            ceiling_log2,
        )?),
    };
    let num_fields = breakdown.n_abelianization.clone();
    let num_quaternion = &breakdown.total - &num_fields;
    Ok(DecompositionSummary {
        field: field.clone(),
        num_fields,
        field_degrees,
        num_quaternion,
        commutative_dim: spec.order() >> 1,
        total_dim: spec.order(),
    })
}
