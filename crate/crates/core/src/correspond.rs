//! The explicit maps between the real and p-adic sides: λℝ ↦ λQp,
//! ψℝ ↦ ψQp, ι on Langlands parameters, component groups with their
//! character transfer, and ι̃ on complete parameters.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::HalfInteger;
use crate::params::{
    target_group, InfinitesimalCharacter, Multisegment, PAdicArthurParameter, PAdicInfChar,
    PadicBlock, Parity, RealArthurParameter, RealLParameter, Segment, TargetGroup,
};
use crate::{Error, Result};

/// λ̃_i = λ_i + (δ−1)/2; the exponent x has multiplicity #{i : λ̃_i ≥ |x|}.
pub fn lambda_to_lambdap(lambda: &InfinitesimalCharacter, delta: i64) -> Result<PAdicInfChar> {
    if !lambda.validate_delta(delta) {
        return Err(Error::Invalid(format!(
            "δ={delta} violates λ_n > (1−δ)/2 for λ={lambda:?}"
        )));
    }
    let shifted: Vec<HalfInteger> = lambda
        .entries()
        .iter()
        .map(|&e| e + HalfInteger::from_twice(delta - 1))
        .collect();
    let top = shifted[0];
    let mut mult = BTreeMap::new();
    let mut x = -top;
    while x <= top {
        let count = shifted.iter().filter(|l| **l >= x.abs()).count();
        if count > 0 {
            mult.insert(x, count);
        }
        x += HalfInteger::from_int(1);
    }
    PAdicInfChar::new(mult)
}

/// (a_i, b_i) = (k_i + δ, m_i); requires k_i + δ > m_i for every block.
pub fn psi_real_to_padic(psi: &RealArthurParameter, delta: i64) -> Result<PAdicArthurParameter> {
    let mut blocks = Vec::with_capacity(psi.r());
    for b in psi.blocks() {
        if b.k + delta <= b.m as i64 {
            return Err(Error::Invalid(format!(
                "δ={delta} violates k+δ > m for block ({}, {})",
                b.k, b.m
            )));
        }
        blocks.push(PadicBlock {
            a: (b.k + delta) as usize,
            b: b.m,
        });
    }
    let tg = target_group(&psi.inf_char(), delta)?;
    PAdicArthurParameter::new(blocks, tg.dual)
}

/// ι on L-parameters: (t, s) ↦ the segment of |·|^s ⊠ S_{2t+δ}, namely
/// [s − t − (δ−1)/2, s + t + (δ−1)/2].
pub fn iota_l(phi: &RealLParameter, delta: i64) -> Result<Multisegment> {
    let mut segments = Vec::with_capacity(phi.n());
    for &(t, s) in phi.characters() {
        let half = t + HalfInteger::from_twice(delta - 1);
        if (HalfInteger::from_twice(2 * t.twice()) + HalfInteger::from_int(delta)).twice() < 2 {
            return Err(Error::Invalid(format!(
                "character (t,s)=({t},{s}) gives nonpositive dimension 2t+δ with δ={delta}"
            )));
        }
        segments.push(Segment::new(s - half, s + half)?);
    }
    Ok(Multisegment::new(segments))
}

/// Classification of a distinct irreducible component of a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentClass {
    /// self-dual of the ambient parity; contributes O(l,ℂ)
    IPlus,
    /// self-dual of the opposite parity (bad-parity inputs only)
    IMinus,
    /// chosen representative of a non-self-dual pair; contributes GL(l)
    JPair,
}

/// One distinct component with its multiplicity and classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentEntry {
    /// Identifying key: for a real parameter the exponent pair (t, s) of the
    /// chosen representative; for a multisegment the segment itself is keyed
    /// by (hi, lo).
    pub t: HalfInteger,
    pub s: HalfInteger,
    pub mult: usize,
    pub class: ComponentClass,
    /// For targets inside SO(N,ℂ): whether this component's determinant
    /// exponent (2t+δ or a·b) is odd, i.e. whether it enters the ∏det = 1
    /// constraint.
    pub det_weight_odd: Option<bool>,
}

/// The component-group shape of a parameter: A ≅ (ℤ/2)^{I⁺}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentGroupStructure {
    pub components: Vec<ComponentEntry>,
    /// Present when the ambient group is O(N,ℂ) with N odd (H = Sp(N−1)):
    /// admissible sign vectors satisfy the product constraint.
    pub epsilon_product_constraint: bool,
}

impl ComponentGroupStructure {
    pub fn i_plus(&self) -> impl Iterator<Item = &ComponentEntry> {
        self.components
            .iter()
            .filter(|c| c.class == ComponentClass::IPlus)
    }

    pub fn i_plus_count(&self) -> usize {
        self.i_plus().count()
    }
}

/// Component group of a real L-parameter. Good parity: I⁺ = components with
/// s = 0, J = one representative per dual pair with s > 0. Bad parity:
/// the structure is trivial (empty I⁺).
pub fn component_structure_real(phi: &RealLParameter, parity: Parity) -> ComponentGroupStructure {
    let mut counts: BTreeMap<(HalfInteger, HalfInteger), usize> = BTreeMap::new();
    for &(t, s) in phi.characters() {
        *counts.entry((t, s)).or_insert(0) += 1;
    }
    let mut components = Vec::new();
    for (&(t, s), &mult) in counts.iter().rev() {
        if s.twice() < 0 {
            continue; // represented by its dual with s > 0
        }
        let class = if s.twice() > 0 {
            ComponentClass::JPair
        } else if parity == Parity::Good {
            ComponentClass::IPlus
        } else {
            ComponentClass::IMinus
        };
        components.push(ComponentEntry {
            t,
            s,
            mult,
            class,
            det_weight_odd: None,
        });
    }
    ComponentGroupStructure {
        components,
        epsilon_product_constraint: false,
    }
}

/// Component group of a multisegment seen as a p-adic L-parameter with the
/// given duality data. I⁺ = centered segments [−c, c]; J = one
/// representative per dual pair.
pub fn component_structure_padic(m: &Multisegment, tg: &TargetGroup) -> ComponentGroupStructure {
    let mut counts: BTreeMap<Segment, usize> = BTreeMap::new();
    for &seg in m.segments() {
        *counts.entry(seg).or_insert(0) += 1;
    }
    let mut components = Vec::new();
    for (&seg, &mult) in counts.iter().rev() {
        // key the component by (t, s) of the underlying |·|^s ⊠ S_{2t'+δ}:
        // s = midpoint, half-width = (hi−lo)/2
        let s = HalfInteger::from_twice((seg.hi.twice() + seg.lo.twice()) / 2);
        let half_width = HalfInteger::from_twice((seg.hi.twice() - seg.lo.twice()) / 2);
        if s.twice() < 0 {
            continue;
        }
        let class = if seg.is_self_dual() && tg.parity == Parity::Good {
            ComponentClass::IPlus
        } else if seg.is_self_dual() {
            ComponentClass::IMinus
        } else {
            ComponentClass::JPair
        };
        let det_weight_odd = if tg.family == crate::params::HFamily::Sp {
            Some(seg.len() % 2 == 1)
        } else {
            None
        };
        components.push(ComponentEntry {
            t: half_width,
            s,
            mult,
            class,
            det_weight_odd,
        });
    }
    ComponentGroupStructure {
        components,
        epsilon_product_constraint: tg.has_epsilon_product_constraint(),
    }
}

/// A character of the component group of a real L-parameter: a sign on each
/// I⁺ component, keyed by its z-exponent t.
pub type RealCharacter = BTreeMap<HalfInteger, i8>;

/// A character on the p-adic side: a sign on each centered segment [−c, c],
/// keyed by the half-width c.
pub type PadicCharacter = BTreeMap<HalfInteger, i8>;

/// A complete real Langlands parameter ξ = (φ, ε).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealCompleteParameter {
    pub phi: RealLParameter,
    pub epsilon: RealCharacter,
}

impl RealCompleteParameter {
    pub fn new(phi: RealLParameter, epsilon: RealCharacter, parity: Parity) -> Result<Self> {
        let structure = component_structure_real(&phi, parity);
        let mut expected: Vec<HalfInteger> = structure.i_plus().map(|c| c.t).collect();
        expected.sort();
        let got: Vec<HalfInteger> = epsilon.keys().copied().collect();
        if expected != got {
            return Err(Error::Invalid(format!(
                "character domain {got:?} does not match I⁺ components {expected:?}"
            )));
        }
        Ok(RealCompleteParameter { phi, epsilon })
    }
}

/// A complete p-adic parameter: a multisegment plus a sign per centered
/// segment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicCompleteParameter {
    pub multisegment: Multisegment,
    pub epsilon: PadicCharacter,
}

/// The transferred character, together with its restriction class when the
/// target is H = Sp(N−1) (where A⁺ ≅ A × Z(O(N,ℂ)) and a character of A
/// only determines the pair {ε, −ε}).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferredCharacter {
    pub signs: PadicCharacter,
    /// The other representative of the same character of A, present exactly
    /// when H is symplectic.
    pub flipped_twin: Option<PadicCharacter>,
}

/// Transfer ε along the canonical map Â_{φℝ} → Â_{φQp}: the component
/// (t, 0) with sign ε maps to the centered segment of half-width
/// t + (δ−1)/2 with the same sign.
pub fn transfer_character(
    eps: &RealCharacter,
    phi: &RealLParameter,
    delta: i64,
    tg: &TargetGroup,
) -> Result<TransferredCharacter> {
    let structure = component_structure_real(phi, tg.parity);
    let mut expected: Vec<HalfInteger> = structure.i_plus().map(|c| c.t).collect();
    expected.sort();
    let got: Vec<HalfInteger> = eps.keys().copied().collect();
    if expected != got {
        return Err(Error::Invalid(format!(
            "character domain {got:?} does not match I⁺ components {expected:?}"
        )));
    }
    let mut signs = PadicCharacter::new();
    for (&t, &sign) in eps {
        let c = t + HalfInteger::from_twice(delta - 1);
        signs.insert(c, sign);
    }
    let flipped_twin = if tg.has_epsilon_product_constraint() {
        Some(signs.iter().map(|(&c, &s)| (c, -s)).collect())
    } else {
        None
    };
    Ok(TransferredCharacter {
        signs,
        flipped_twin,
    })
}

/// ι̃ on complete parameters: (φ, ε) ↦ (ι(φ), transferred ε).
pub fn tilde_iota(
    xi: &RealCompleteParameter,
    delta: i64,
    tg: &TargetGroup,
) -> Result<(PadicCompleteParameter, Option<PadicCharacter>)> {
    let m = iota_l(&xi.phi, delta)?;
    let transferred = transfer_character(&xi.epsilon, &xi.phi, delta, tg)?;
    Ok((
        PadicCompleteParameter {
            multisegment: m,
            epsilon: transferred.signs,
        },
        transferred.flipped_twin,
    ))
}

/// Component structure of a real Arthur parameter: distinct blocks with
/// multiplicities (all in I⁺ under good parity).
pub fn psi_component_structure_real(psi: &RealArthurParameter) -> ComponentGroupStructure {
    let mut counts: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for b in psi.blocks() {
        *counts.entry((b.k, b.m)).or_insert(0) += 1;
    }
    let mut components = Vec::new();
    for (&(k, m), &mult) in counts.iter().rev() {
        let class = if psi.parity() == Parity::Good {
            ComponentClass::IPlus
        } else {
            ComponentClass::IMinus
        };
        components.push(ComponentEntry {
            t: HalfInteger::from_twice(k),
            s: HalfInteger::from_twice(m as i64 - 1),
            mult,
            class,
            det_weight_odd: None,
        });
    }
    ComponentGroupStructure {
        components,
        epsilon_product_constraint: false,
    }
}

/// Component structure of a p-adic Arthur parameter; for H = Sp(N−1) it
/// records that admissible ε satisfy the ∏ε_i = 1 constraint, with the
/// per-component determinant weight a·b mod 2.
pub fn psi_component_structure_padic(psi: &PAdicArthurParameter) -> ComponentGroupStructure {
    let constrained = psi.has_epsilon_product_constraint();
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for b in psi.blocks() {
        *counts.entry((b.a, b.b)).or_insert(0) += 1;
    }
    let class = if psi.parity() == Parity::Good {
        ComponentClass::IPlus
    } else {
        ComponentClass::IMinus
    };
    let mut components = Vec::new();
    for (&(a, b), &mult) in counts.iter().rev() {
        components.push(ComponentEntry {
            t: HalfInteger::from_twice(a as i64 - 1),
            s: HalfInteger::from_twice(b as i64 - 1),
            mult,
            class,
            det_weight_odd: if constrained {
                Some((a * b) % 2 == 1)
            } else {
                None
            },
        });
    }
    ComponentGroupStructure {
        components,
        epsilon_product_constraint: constrained,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{DualType, RealBlock};

    fn hi(t: i64) -> HalfInteger {
        HalfInteger::from_twice(t)
    }

    fn lam(twices: &[i64]) -> InfinitesimalCharacter {
        InfinitesimalCharacter::new(twices.iter().map(|&t| hi(t)).collect()).unwrap()
    }

    fn seg(lo: i64, hi_: i64) -> Segment {
        Segment::new(hi(lo), hi(hi_)).unwrap()
    }

    #[test]
    fn lambda_to_lambdap_examples() {
        let lp = lambda_to_lambdap(&lam(&[3, 1]), 1).unwrap();
        assert_eq!(lp.multiplicity(hi(3)), 1);
        assert_eq!(lp.multiplicity(hi(-3)), 1);
        assert_eq!(lp.multiplicity(hi(1)), 2);
        assert_eq!(lp.big_n(), 6);
        assert!(lp.is_unimodal());

        // λ=(0): minimal valid δ is 2
        assert!(lambda_to_lambdap(&lam(&[0]), 1).is_err());
        let lp = lambda_to_lambdap(&lam(&[0]), 2).unwrap();
        assert_eq!(lp.multiplicity(hi(1)), 1);
        assert_eq!(lp.big_n(), 2);

        let lp = lambda_to_lambdap(&lam(&[2, 0]), 2).unwrap();
        assert_eq!(lp.multiplicity(hi(3)), 1);
        assert_eq!(lp.multiplicity(hi(1)), 2);
        assert_eq!(lp.big_n(), 6);
    }

    #[test]
    fn psi_real_to_padic_examples() {
        let psi = RealArthurParameter::new(vec![RealBlock { k: 2, m: 2 }], Parity::Good).unwrap();
        let pp = psi_real_to_padic(&psi, 1).unwrap();
        assert_eq!(pp.blocks(), &[PadicBlock { a: 3, b: 2 }]);
        assert_eq!(pp.dual(), DualType::Symp);

        let psi = RealArthurParameter::new(
            vec![RealBlock { k: 4, m: 2 }, RealBlock { k: 2, m: 2 }],
            Parity::Good,
        )
        .unwrap();
        let pp = psi_real_to_padic(&psi, 1).unwrap();
        assert_eq!(
            pp.blocks(),
            &[PadicBlock { a: 5, b: 2 }, PadicBlock { a: 3, b: 2 }]
        );

        let psi = RealArthurParameter::new(vec![RealBlock { k: 2, m: 2 }], Parity::Good).unwrap();
        assert!(psi_real_to_padic(&psi, 0).is_err());
    }

    #[test]
    fn iota_l_examples() {
        let phi = RealLParameter::new(vec![(hi(2), hi(1)), (hi(2), hi(-1))]).unwrap();
        let m = iota_l(&phi, 1).unwrap();
        assert_eq!(m, Multisegment::new(vec![seg(-1, 3), seg(-3, 1)]));

        let phi = RealLParameter::new(vec![(hi(0), hi(0))]).unwrap();
        assert_eq!(iota_l(&phi, 1).unwrap(), Multisegment::new(vec![seg(0, 0)]));

        let phi = RealLParameter::new(vec![(hi(1), hi(0)), (hi(3), hi(0))]).unwrap();
        assert_eq!(
            iota_l(&phi, 1).unwrap(),
            Multisegment::new(vec![seg(-1, 1), seg(-3, 3)])
        );
    }

    #[test]
    fn component_structure_examples() {
        let phi = RealLParameter::new(vec![(hi(1), hi(0)), (hi(3), hi(0))]).unwrap();
        let cs = component_structure_real(&phi, Parity::Good);
        assert_eq!(cs.i_plus_count(), 2);
        assert!(cs.i_plus().all(|c| c.mult == 1));

        let phi = RealLParameter::new(vec![(hi(2), hi(1)), (hi(2), hi(-1))]).unwrap();
        let cs = component_structure_real(&phi, Parity::Good);
        assert_eq!(cs.i_plus_count(), 0);
        assert_eq!(
            cs.components
                .iter()
                .filter(|c| c.class == ComponentClass::JPair)
                .count(),
            1
        );

        let phi = RealLParameter::new(vec![(hi(1), hi(0)), (hi(1), hi(0))]).unwrap();
        let cs = component_structure_real(&phi, Parity::Good);
        assert_eq!(cs.i_plus_count(), 1);
        assert_eq!(cs.i_plus().next().unwrap().mult, 2);
    }

    #[test]
    fn transfer_character_examples() {
        let phi = RealLParameter::new(vec![(hi(1), hi(0)), (hi(3), hi(0))]).unwrap();
        let tg = target_group(&lam(&[3, 1]), 1).unwrap();
        let eps: RealCharacter = [(hi(1), 1), (hi(3), -1)].into_iter().collect();
        let out = transfer_character(&eps, &phi, 1, &tg).unwrap();
        assert_eq!(out.signs[&hi(1)], 1);
        assert_eq!(out.signs[&hi(3)], -1);
        assert!(out.flipped_twin.is_none()); // H = SO(7) is orthogonal

        let bad: RealCharacter = [(hi(1), 1)].into_iter().collect();
        assert!(transfer_character(&bad, &phi, 1, &tg).is_err());
    }

    #[test]
    fn tilde_iota_examples() {
        let tg = target_group(&lam(&[3, 1]), 1).unwrap();
        let phi = RealLParameter::new(vec![(hi(2), hi(1)), (hi(2), hi(-1))]).unwrap();
        let xi = RealCompleteParameter::new(phi, RealCharacter::new(), Parity::Good).unwrap();
        let (out, twin) = tilde_iota(&xi, 1, &tg).unwrap();
        assert_eq!(
            out.multisegment,
            Multisegment::new(vec![seg(-1, 3), seg(-3, 1)])
        );
        assert!(out.epsilon.is_empty());
        assert!(twin.is_none());

        let phi = RealLParameter::new(vec![(hi(1), hi(0)), (hi(3), hi(0))]).unwrap();
        let eps: RealCharacter = [(hi(1), 1), (hi(3), -1)].into_iter().collect();
        let xi = RealCompleteParameter::new(phi, eps, Parity::Good).unwrap();
        let (out, _) = tilde_iota(&xi, 1, &tg).unwrap();
        assert_eq!(
            out.multisegment,
            Multisegment::new(vec![seg(-1, 1), seg(-3, 3)])
        );
        assert_eq!(out.epsilon[&hi(1)], 1);
        assert_eq!(out.epsilon[&hi(3)], -1);
    }

    #[test]
    fn bad_parity_structure_is_trivial() {
        // s = 0 components in bad parity sit in I⁻: the component group is trivial
        let phi = RealLParameter::new(vec![(hi(2), hi(0)), (hi(0), hi(0))]).unwrap();
        let cs = component_structure_real(&phi, Parity::Bad);
        assert_eq!(cs.i_plus_count(), 0);
        assert!(cs
            .components
            .iter()
            .all(|c| c.class == ComponentClass::IMinus));
    }

    #[test]
    fn psi_component_structures() {
        let psi = RealArthurParameter::new(
            vec![RealBlock { k: 2, m: 2 }, RealBlock { k: 2, m: 2 }],
            Parity::Good,
        )
        .unwrap();
        let cs = psi_component_structure_real(&psi);
        assert_eq!(cs.i_plus_count(), 1);
        assert_eq!(cs.i_plus().next().unwrap().mult, 2);

        let psi = RealArthurParameter::new(
            vec![RealBlock { k: 6, m: 2 }, RealBlock { k: 2, m: 2 }],
            Parity::Good,
        )
        .unwrap();
        assert_eq!(psi_component_structure_real(&psi).i_plus_count(), 2);

        // Sp target: single (3,1) block
        let pp =
            PAdicArthurParameter::new(vec![PadicBlock { a: 3, b: 1 }], DualType::Orth).unwrap();
        let cs = psi_component_structure_padic(&pp);
        assert!(cs.epsilon_product_constraint);
        assert_eq!(cs.components[0].det_weight_odd, Some(true));

        // SO target: no constraint
        let pp =
            PAdicArthurParameter::new(vec![PadicBlock { a: 3, b: 2 }], DualType::Symp).unwrap();
        let cs = psi_component_structure_padic(&pp);
        assert!(!cs.epsilon_product_constraint);
    }
}
