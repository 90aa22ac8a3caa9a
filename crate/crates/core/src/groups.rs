//! The six families of indecomposable nonabelian 2-groups.
//!
//! Every group here has the shape `G = ⟨t_1, …, t_k, x, y⟩` where the
//! `t_i` are central of order `2^{m_i}`, every element is uniquely
//! `t^a x^δ y^ε`, and the only nontrivial commutator is the central
//! involution `s = t_1^{2^{m_1-1}} = (x, y)`. The families differ only in
//! the values of `x²` and `y²`:
//!
//! | family | k | x²  | y²  |
//! |--------|---|-----|-----|
//! | D1     | 1 | 1   | 1   |
//! | D2     | 1 | t_1 | t_1 |
//! | D3     | 2 | 1   | t_2 |
//! | D4     | 2 | t_1 | t_2 |
//! | D5     | 3 | t_2 | t_3 |
//! | D5xC   | 4 | t_2 | t_3 |
//!
//! `D5xC` is `D5` with one extra central direct factor `⟨t_4⟩`. Since
//! `G/Z(G) ≅ C_2 × C_2` and `G' = {1, s}`, conjugacy classes are
//! singletons on the center and pairs `{w, sw}` off it, and the subgroups
//! `⟨Z(G), w⟩` for `w ∈ {x, y, xy}` are the abelian subquotients the class
//! counting pipeline consumes.

use crate::abelian::{
    smith_reduce, smith_reduce_with_basis, AbelianElement, AbelianPresentation, AbelianType,
    SmithBasis, DEFAULT_CEILING_LOG2,
};
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Errors from group construction and enumeration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    /// Parameter list length does not match the family.
    #[error("family {family} takes {expected} parameters, got {got}")]
    ArityMismatch {
        family: Family,
        expected: usize,
        got: usize,
    },
    /// All parameters must be at least 1.
    #[error("group parameters must be at least 1")]
    ZeroParameter,
    /// Enumeration refuses groups past the ceiling.
    #[error("group order 2^{log2_order} exceeds enumeration ceiling 2^{ceiling_log2}")]
    CeilingExceeded { log2_order: u64, ceiling_log2: u32 },
    /// An unrecognized family tag.
    #[error("unknown family tag {0:?}")]
    UnknownFamily(String),
}

/// The six group families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    D1,
    D2,
    D3,
    D4,
    D5,
    D5xC,
}

impl Family {
    /// Number of central generators `t_i`.
    pub fn num_central_generators(self) -> usize {
        match self {
            Family::D1 | Family::D2 => 1,
            Family::D3 | Family::D4 => 2,
            Family::D5 => 3,
            Family::D5xC => 4,
        }
    }

    /// All six families, in canonical order.
    pub fn all() -> [Family; 6] {
        [
            Family::D1,
            Family::D2,
            Family::D3,
            Family::D4,
            Family::D5,
            Family::D5xC,
        ]
    }

    /// Index (0-based) of the central generator equal to `x²`, if any.
    fn x_square_generator(self) -> Option<usize> {
        match self {
            Family::D1 | Family::D3 => None,
            Family::D2 | Family::D4 => Some(0),
            Family::D5 | Family::D5xC => Some(1),
        }
    }

    /// Index (0-based) of the central generator equal to `y²`, if any.
    fn y_square_generator(self) -> Option<usize> {
        match self {
            Family::D1 => None,
            Family::D2 => Some(0),
            Family::D3 | Family::D4 => Some(1),
            Family::D5 | Family::D5xC => Some(2),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Family::D1 => "D1",
            Family::D2 => "D2",
            Family::D3 => "D3",
            Family::D4 => "D4",
            Family::D5 => "D5",
            Family::D5xC => "D5xC",
        };
        f.write_str(tag)
    }
}

impl FromStr for Family {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "D1" => Ok(Family::D1),
            "D2" => Ok(Family::D2),
            "D3" => Ok(Family::D3),
            "D4" => Ok(Family::D4),
            "D5" => Ok(Family::D5),
            "D5xC" => Ok(Family::D5xC),
            other => Err(GroupError::UnknownFamily(other.to_string())),
        }
    }
}

/// One concrete group: a family plus its parameters `m_1, …, m_k`.
///
/// The center `∏⟨t_i⟩` is stored in canonical (sorted) invariant-factor
/// order; `slot_of` maps the presentation's generator index to its
/// canonical coordinate slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    family: Family,
    ms: Vec<u32>,
    center: AbelianType,
    slot_of: Vec<usize>,
    x_square: AbelianElement,
    y_square: AbelianElement,
    s_central: AbelianElement,
}

impl GroupSpec {
    /// Builds a group, validating arity and positivity of parameters.
    pub fn new(family: Family, ms: &[u32]) -> Result<Self, GroupError> {
        let expected = family.num_central_generators();
        if ms.len() != expected {
            return Err(GroupError::ArityMismatch {
                family,
                expected,
                got: ms.len(),
            });
        }
        if ms.iter().any(|&m| m == 0) {
            return Err(GroupError::ZeroParameter);
        }
        let center = AbelianType::new(ms.iter().copied());
        // Canonical coordinates sort the factors; route each generator to
        // the slot holding its order, consuming ties left to right.
        let logs = center.factor_logs().to_vec();
        let mut taken = vec![false; logs.len()];
        let mut slot_of = Vec::with_capacity(ms.len());
        for &m in ms {
            let slot = logs
                .iter()
                .enumerate()
                .position(|(j, &l)| l == m && !taken[j])
                .expect("every parameter has a slot");
            taken[slot] = true;
            slot_of.push(slot);
        }
        let generator = |idx: Option<usize>| -> AbelianElement {
            let mut coords = vec![0u64; logs.len()];
            if let Some(i) = idx {
                coords[slot_of[i]] = 1;
            }
            center.element(&coords).expect("coordinate length matches")
        };
        let x_square = generator(family.x_square_generator());
        let y_square = generator(family.y_square_generator());
        let mut s_coords = vec![0u64; logs.len()];
        s_coords[slot_of[0]] = 1u64 << (ms[0] - 1);
        let s_central = center.element(&s_coords).expect("coordinate length matches");
        Ok(GroupSpec {
            family,
            ms: ms.to_vec(),
            center,
            slot_of,
            x_square,
            y_square,
            s_central,
        })
    }

    /// The family.
    pub fn family(&self) -> Family {
        self.family
    }

    /// The parameters `m_1, …, m_k` in presentation order.
    pub fn ms(&self) -> &[u32] {
        &self.ms
    }

    /// `log2 |G| = 2 + Σ m_i`.
    pub fn log2_order(&self) -> u64 {
        2 + self.center.log2_order()
    }

    /// Group order `4 ∏ 2^{m_i}`.
    pub fn order(&self) -> BigInt {
        BigInt::one() << self.log2_order()
    }

    /// The center `∏⟨t_i⟩` as an abelian type.
    pub fn center(&self) -> &AbelianType {
        &self.center
    }

    /// Identity element.
    pub fn identity(&self) -> GroupElement {
        GroupElement {
            central: self.center.identity(),
            dx: false,
            dy: false,
        }
    }

    /// The central generator `t_i` (0-based `i` in presentation order).
    pub fn t_element(&self, i: usize) -> GroupElement {
        let mut coords = vec![0u64; self.center.factor_logs().len()];
        coords[self.slot_of[i]] = 1;
        GroupElement {
            central: self.center.element(&coords).expect("length matches"),
            dx: false,
            dy: false,
        }
    }

    /// The generator `x`.
    pub fn x_element(&self) -> GroupElement {
        GroupElement {
            central: self.center.identity(),
            dx: true,
            dy: false,
        }
    }

    /// The generator `y`.
    pub fn y_element(&self) -> GroupElement {
        GroupElement {
            central: self.center.identity(),
            dx: false,
            dy: true,
        }
    }

    /// The unique nontrivial commutator `s = t_1^{2^{m_1-1}} = (x, y)`.
    pub fn commutator_element(&self) -> GroupElement {
        GroupElement {
            central: self.s_central.clone(),
            dx: false,
            dy: false,
        }
    }

    /// Normal-form product, rewriting with `yx = sxy` and the family's
    /// square relations.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let mut central = g.central.add(&h.central, &self.center);
        if g.dy && h.dx {
            central = central.add(&self.s_central, &self.center);
        }
        if g.dx && h.dx {
            central = central.add(&self.x_square, &self.center);
        }
        if g.dy && h.dy {
            central = central.add(&self.y_square, &self.center);
        }
        GroupElement {
            central,
            dx: g.dx ^ h.dx,
            dy: g.dy ^ h.dy,
        }
    }

    /// Group inverse, by exponent negation plus the commutator correction
    /// that moving `y⁻¹` past `x⁻¹` costs when both letters are present.
    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let order_minus_one = |e: &AbelianElement| -> AbelianElement {
            let coords: Vec<u64> = e
                .coords()
                .iter()
                .zip(self.center.factor_logs())
                .map(|(&c, &l)| ((1u64 << l) - c) & ((1u64 << l) - 1))
                .collect();
            self.center.element(&coords).expect("length matches")
        };
        let mut central = order_minus_one(&g.central);
        if g.dx && g.dy {
            central = central.add(&self.s_central, &self.center);
        }
        if g.dx {
            central = central.add(&order_minus_one(&self.x_square), &self.center);
        }
        if g.dy {
            central = central.add(&order_minus_one(&self.y_square), &self.center);
        }
        GroupElement {
            central,
            dx: g.dx,
            dy: g.dy,
        }
    }

    /// The square of an element, always central.
    pub fn square(&self, g: &GroupElement) -> GroupElement {
        self.multiply(g, g)
    }

    /// Power `g^n` via the central square: `g² ∈ Z(G)` for every `g`.
    pub fn power(&self, g: &GroupElement, n: u64) -> GroupElement {
        let sq = self.square(g);
        let half = sq.central.pow(n / 2, &self.center);
        let mut out = GroupElement {
            central: half,
            dx: false,
            dy: false,
        };
        if n % 2 == 1 {
            out = self.multiply(&out, g);
        }
        out
    }

    /// True iff the element is central, i.e. carries no `x` or `y`.
    pub fn is_central(&self, g: &GroupElement) -> bool {
        !g.dx && !g.dy
    }

    /// Iterates all `4 ∏ 2^{m_i}` elements.
    ///
    /// Callers must hold `log2 |G|` under their enumeration ceiling.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.center.elements().flat_map(move |central| {
            [(false, false), (true, false), (false, true), (true, true)]
                .into_iter()
                .map(move |(dx, dy)| GroupElement {
                    central: central.clone(),
                    dx,
                    dy,
                })
        })
    }

    fn check_ceiling(&self, ceiling_log2: u32) -> Result<(), GroupError> {
        if self.log2_order() > u64::from(ceiling_log2) {
            return Err(GroupError::CeilingExceeded {
                log2_order: self.log2_order(),
                ceiling_log2,
            });
        }
        Ok(())
    }

    /// Conjugacy classes: singletons on the center, pairs `{w, sw}` off it.
    pub fn conjugacy_classes(&self) -> Result<Vec<ConjClass>, GroupError> {
        self.conjugacy_classes_with_ceiling(DEFAULT_CEILING_LOG2)
    }

    /// Conjugacy classes with a configurable enumeration ceiling.
    pub fn conjugacy_classes_with_ceiling(
        &self,
        ceiling_log2: u32,
    ) -> Result<Vec<ConjClass>, GroupError> {
        self.check_ceiling(ceiling_log2)?;
        let mut classes = Vec::new();
        for g in self.elements() {
            if self.is_central(&g) {
                classes.push(ConjClass {
                    representative: g,
                    size: 1,
                });
            } else {
                let partner = self.multiply(&self.commutator_element(), &g);
                if g <= partner {
                    classes.push(ConjClass {
                        representative: g,
                        size: 2,
                    });
                }
            }
        }
        Ok(classes)
    }

    /// Presentation of `G/G'` on generators (canonical center slots, x, y).
    fn abelianization_presentation(&self) -> AbelianPresentation {
        let k = self.center.factor_logs().len();
        let n = k + 2;
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for (slot, &l) in self.center.factor_logs().iter().enumerate() {
            let mut row = vec![0i64; n];
            row[slot] = 1i64 << l;
            relations.push(row);
        }
        let mut sq_row = |square: &AbelianElement, letter: usize| {
            let mut row = vec![0i64; n];
            row[k + letter] = 2;
            for (slot, &c) in square.coords().iter().enumerate() {
                row[slot] -= c as i64;
            }
            relations.push(row);
        };
        sq_row(&self.x_square.clone(), 0);
        sq_row(&self.y_square.clone(), 1);
        let mut s_row = vec![0i64; n];
        for (slot, &c) in self.s_central.coords().iter().enumerate() {
            s_row[slot] = c as i64;
        }
        relations.push(s_row);
        AbelianPresentation::new(n, relations).expect("rows sized to generators")
    }

    /// The abelianization `G/G'`, reduced to invariant factors.
    pub fn abelianization(&self) -> AbelianType {
        smith_reduce(&self.abelianization_presentation()).expect("G/G' is a finite 2-group")
    }

    /// The abelianization together with its coordinate transform.
    ///
    /// Exponent vectors are over (canonical center slots, x, y); use
    /// [`GroupSpec::abelianized_exponents`] to produce them from elements.
    pub fn abelianization_basis(&self) -> SmithBasis {
        smith_reduce_with_basis(&self.abelianization_presentation())
            .expect("G/G' is a finite 2-group")
    }

    /// Exponent vector of an element's image in `G/G'`, matching the
    /// generator order of [`GroupSpec::abelianization_basis`].
    pub fn abelianized_exponents(&self, g: &GroupElement) -> Vec<i64> {
        let mut exps: Vec<i64> = g.central.coords().iter().map(|&c| c as i64).collect();
        exps.push(g.dx as i64);
        exps.push(g.dy as i64);
        exps
    }

    /// The abelian type of `⟨Z(G), w⟩ / ⟨s⟩` for `w ∈ {x, y, xy}`.
    ///
    /// The relation `w² = (central value)` is family-specific, with
    /// `(xy)² = s·x²·y²` handled by the same normal-form arithmetic as the
    /// group product.
    pub fn coset_subquotient(&self, w: CosetWord) -> AbelianType {
        let w_elem = match w {
            CosetWord::X => self.x_element(),
            CosetWord::Y => self.y_element(),
            CosetWord::XY => self.multiply(&self.x_element(), &self.y_element()),
        };
        let w_square = self.square(&w_elem);
        let k = self.center.factor_logs().len();
        let n = k + 1;
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for (slot, &l) in self.center.factor_logs().iter().enumerate() {
            let mut row = vec![0i64; n];
            row[slot] = 1i64 << l;
            relations.push(row);
        }
        let mut w_row = vec![0i64; n];
        w_row[k] = 2;
        for (slot, &c) in w_square.central.coords().iter().enumerate() {
            w_row[slot] -= c as i64;
        }
        relations.push(w_row);
        let mut s_row = vec![0i64; n];
        for (slot, &c) in self.s_central.coords().iter().enumerate() {
            s_row[slot] = c as i64;
        }
        relations.push(s_row);
        let p = AbelianPresentation::new(n, relations).expect("rows sized to generators");
        smith_reduce(&p).expect("subquotient is a finite 2-group")
    }

    /// The abelian type of `Z(G)/⟨s⟩`.
    pub fn center_mod_s(&self) -> AbelianType {
        let k = self.center.factor_logs().len();
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for (slot, &l) in self.center.factor_logs().iter().enumerate() {
            let mut row = vec![0i64; k];
            row[slot] = 1i64 << l;
            relations.push(row);
        }
        let mut s_row = vec![0i64; k];
        for (slot, &c) in self.s_central.coords().iter().enumerate() {
            s_row[slot] = c as i64;
        }
        relations.push(s_row);
        let p = AbelianPresentation::new(k, relations).expect("rows sized to generators");
        smith_reduce(&p).expect("quotient of the center is a finite 2-group")
    }
}

/// An element in normal form `t^a x^{dx} y^{dy}`.
///
/// The central part's coordinates live in the canonical slots of
/// [`GroupSpec::center`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    central: AbelianElement,
    dx: bool,
    dy: bool,
}

impl GroupElement {
    /// Central coordinates in canonical slot order.
    pub fn central(&self) -> &AbelianElement {
        &self.central
    }

    /// Exponent of `x` in the normal form.
    pub fn dx(&self) -> bool {
        self.dx
    }

    /// Exponent of `y` in the normal form.
    pub fn dy(&self) -> bool {
        self.dy
    }

    /// True for the identity.
    pub fn is_identity(&self) -> bool {
        self.central.is_identity() && !self.dx && !self.dy
    }
}

/// A choice of the noncentral coset word `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CosetWord {
    X,
    Y,
    XY,
}

impl CosetWord {
    /// The three words, in breakdown order.
    pub fn all() -> [CosetWord; 3] {
        [CosetWord::X, CosetWord::Y, CosetWord::XY]
    }
}

/// A conjugacy class: a singleton on the center or a pair `{w, sw}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClass {
    /// The smaller of the (one or two) members under element ordering.
    pub representative: GroupElement,
    /// 1 for central classes, 2 otherwise.
    pub size: u8,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(family: Family, ms: &[u32]) -> GroupSpec {
        GroupSpec::new(family, ms).unwrap()
    }

    fn collect(g: &GroupSpec) -> Vec<GroupElement> {
        g.elements().collect()
    }

    #[test]
    fn construction_validates_parameters() {
        assert!(GroupSpec::new(Family::D1, &[2, 3]).is_err());
        assert!(GroupSpec::new(Family::D5, &[1, 1]).is_err());
        assert!(GroupSpec::new(Family::D3, &[1, 0]).is_err());
        assert!(GroupSpec::new(Family::D5xC, &[1, 1, 1, 1]).is_ok());
        assert_eq!("D5xC".parse::<Family>().unwrap(), Family::D5xC);
        assert!("D6".parse::<Family>().is_err());
    }

    #[test]
    fn commutator_rewrites_products() {
        let g = spec(Family::D1, &[1]);
        let (x, y, s) = (g.x_element(), g.y_element(), g.commutator_element());
        let xy = g.multiply(&x, &y);
        let yx = g.multiply(&y, &x);
        assert_eq!(yx, g.multiply(&s, &xy));
        assert!(!s.is_identity());
        assert!(g.square(&s).is_identity());
        // s = x⁻¹ y⁻¹ x y
        let comm = g.multiply(
            &g.multiply(&g.inverse(&x), &g.inverse(&y)),
            &g.multiply(&x, &y),
        );
        assert_eq!(comm, s);
    }

    #[test]
    fn square_relations_follow_the_family() {
        let d2 = spec(Family::D2, &[3]);
        assert_eq!(d2.square(&d2.x_element()), d2.t_element(0));
        assert_eq!(d2.square(&d2.y_element()), d2.t_element(0));
        let d5 = spec(Family::D5, &[1, 2, 1]);
        assert_eq!(d5.square(&d5.x_element()), d5.t_element(1));
        assert_eq!(d5.square(&d5.y_element()), d5.t_element(2));
        let d4 = spec(Family::D4, &[2, 3]);
        assert_eq!(d4.square(&d4.x_element()), d4.t_element(0));
        assert_eq!(d4.square(&d4.y_element()), d4.t_element(1));
        let d3 = spec(Family::D3, &[2, 2]);
        assert!(d3.square(&d3.x_element()).is_identity());
        assert_eq!(d3.square(&d3.y_element()), d3.t_element(1));
        let d1 = spec(Family::D1, &[2]);
        assert!(d1.square(&d1.x_element()).is_identity());
        // (xy)² = s·x²·y²
        for g in [&d2, &d5, &d1] {
            let xy = g.multiply(&g.x_element(), &g.y_element());
            let expected = g.multiply(
                &g.commutator_element(),
                &g.multiply(&g.square(&g.x_element()), &g.square(&g.y_element())),
            );
            assert_eq!(g.square(&xy), expected);
        }
    }

    #[test]
    fn multiplication_is_associative_exhaustively_on_small_groups() {
        for (family, ms) in [
            (Family::D1, vec![1]),
            (Family::D2, vec![1]),
            (Family::D2, vec![2]),
            (Family::D3, vec![1, 1]),
            (Family::D4, vec![1, 1]),
            (Family::D5, vec![1, 1, 1]),
        ] {
            let g = spec(family, &ms);
            let elems = collect(&g);
            for a in &elems {
                for b in &elems {
                    let ab = g.multiply(a, b);
                    for c in &elems {
                        assert_eq!(
                            g.multiply(&ab, c),
                            g.multiply(a, &g.multiply(b, c)),
                            "{family} {ms:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn inverses_and_powers_are_consistent() {
        let g = spec(Family::D5xC, &[2, 1, 1, 2]);
        for e in collect(&g) {
            assert!(g.multiply(&e, &g.inverse(&e)).is_identity());
            assert_eq!(g.power(&e, 3), g.multiply(&g.square(&e), &e));
            assert_eq!(g.power(&e, 0), g.identity());
        }
    }

    #[test]
    fn conjugacy_classes_partition_the_group() {
        let d1 = spec(Family::D1, &[2]);
        let classes = d1.conjugacy_classes().unwrap();
        assert_eq!(classes.len(), 10);
        assert_eq!(classes.iter().filter(|c| c.size == 1).count(), 4);
        assert_eq!(classes.iter().filter(|c| c.size == 2).count(), 6);

        let q8 = spec(Family::D2, &[1]);
        assert_eq!(q8.conjugacy_classes().unwrap().len(), 5);

        for (family, ms) in [(Family::D3, vec![2, 1]), (Family::D5, vec![1, 2, 1])] {
            let g = spec(family, &ms);
            let classes = g.conjugacy_classes().unwrap();
            let size_sum: u64 = classes.iter().map(|c| u64::from(c.size)).sum();
            assert_eq!(BigInt::from(size_sum), g.order());
            let singletons = classes.iter().filter(|c| c.size == 1).count();
            assert_eq!(BigInt::from(singletons as u64), g.center().order());
        }
    }

    #[test]
    fn abelianizations_match_known_quotients() {
        for m in 1..=6 {
            assert_eq!(
                spec(Family::D2, &[m]).abelianization(),
                AbelianType::new([m, 1])
            );
        }
        assert_eq!(
            spec(Family::D1, &[1]).abelianization(),
            AbelianType::new([1, 1])
        );
        assert_eq!(
            spec(Family::D1, &[2]).abelianization(),
            AbelianType::new([1, 1, 1])
        );
        for (m1, m2) in [(3, 3), (4, 3), (3, 5)] {
            assert_eq!(
                spec(Family::D4, &[m1, m2]).abelianization(),
                AbelianType::new([m1, m2 + 1])
            );
        }
        for (family, ms) in [
            (Family::D3, vec![2, 3]),
            (Family::D5, vec![1, 2, 1]),
            (Family::D5xC, vec![2, 1, 1, 3]),
        ] {
            let g = spec(family, &ms);
            assert_eq!(g.abelianization().order() * 2, g.order());
        }
    }

    #[test]
    fn coset_subquotients_match_known_types() {
        for m in 3..=6 {
            assert_eq!(
                spec(Family::D2, &[m]).coset_subquotient(CosetWord::XY),
                AbelianType::new([m - 1, 1])
            );
        }
        assert_eq!(
            spec(Family::D3, &[1, 1]).coset_subquotient(CosetWord::Y),
            AbelianType::new([2])
        );
        assert_eq!(
            spec(Family::D5xC, &[1, 1, 1, 1]).coset_subquotient(CosetWord::X),
            AbelianType::new([2, 1, 1])
        );
        // |⟨Z(G), w⟩ / ⟨s⟩| = |Z(G)| since w² ∈ Z(G) and s has order 2.
        for (family, ms) in [
            (Family::D1, vec![2]),
            (Family::D4, vec![2, 3]),
            (Family::D5, vec![1, 2, 2]),
        ] {
            let g = spec(family, &ms);
            for w in CosetWord::all() {
                assert_eq!(g.coset_subquotient(w).order(), g.center().order());
            }
        }
    }

    #[test]
    fn center_mod_s_divides_out_one_involution() {
        let g = spec(Family::D5, &[3, 2, 1]);
        assert_eq!(g.center_mod_s(), AbelianType::new([2, 2, 1]));
        assert_eq!(
            spec(Family::D1, &[1]).center_mod_s(),
            AbelianType::new([0u32; 0])
        );
    }

    #[test]
    fn abelianization_basis_respects_relations() {
        let g = spec(Family::D4, &[2, 2]);
        let basis = g.abelianization_basis();
        let ambient = basis.ty().clone();
        let x_bar = basis
            .coords_of(&g.abelianized_exponents(&g.x_element()))
            .unwrap();
        let t1_bar = basis
            .coords_of(&g.abelianized_exponents(&g.t_element(0)))
            .unwrap();
        assert_eq!(x_bar.add(&x_bar, &ambient), t1_bar);
        let s_bar = basis
            .coords_of(&g.abelianized_exponents(&g.commutator_element()))
            .unwrap();
        assert!(s_bar.is_identity());
    }

    proptest! {
        #[test]
        fn associativity_on_random_triples_of_larger_groups(
            seeds in proptest::collection::vec(0u64..u64::MAX, 3),
            m1 in 3u32..=5,
            m2 in 1u32..=4,
        ) {
            let g = spec(Family::D4, &[m1, m2]);
            let total = 1u64 << g.log2_order();
            let pick = |seed: u64| {
                let idx = seed % total;
                g.elements().nth(idx as usize).unwrap()
            };
            let (a, b, c) = (pick(seeds[0]), pick(seeds[1]), pick(seeds[2]));
            prop_assert_eq!(
                g.multiply(&g.multiply(&a, &b), &c),
                g.multiply(&a, &g.multiply(&b, &c))
            );
        }

        #[test]
        fn conjugation_flips_by_s_exactly_off_center(
            m1 in 1u32..=3,
            m2 in 1u32..=3,
            idx in 0u64..1024,
        ) {
            let g = spec(Family::D3, &[m1, m2]);
            let total = 1u64 << g.log2_order();
            let w = g.elements().nth((idx % total) as usize).unwrap();
            let x = g.x_element();
            let conj = g.multiply(&g.multiply(&g.inverse(&x), &w), &x);
            if w.dy() {
                prop_assert_eq!(conj, g.multiply(&g.commutator_element(), &w));
            } else {
                prop_assert_eq!(conj, w);
            }
        }
    }
}
