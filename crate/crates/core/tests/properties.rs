//! Property tests for the structural invariants: coordinate round-trips,
//! conservation laws, and JSON round-trips.

use proptest::prelude::*;

use arthur_core::arith::HalfInteger;
use arthur_core::coherent::{translate, FormalCombination};
use arthur_core::correspond::{iota_l, lambda_to_lambdap, psi_real_to_padic};
use arthur_core::packets::{leta_to_pq, pq_to_leta, PureFormLabel};
use arthur_core::params::{
    associated_l_param_real, Multisegment, Parity, RealArthurParameter, RealBlock, Segment,
};

fn psi_strategy() -> impl Strategy<Value = RealArthurParameter> {
    // blocks (k_raw, m): k parity is corrected against n = Σm afterwards
    prop::collection::vec((0i64..6, 1usize..5), 1..4).prop_map(|raw| {
        let n: usize = raw.iter().map(|&(_, m)| m).sum();
        let blocks: Vec<RealBlock> = raw
            .into_iter()
            .map(|(k_raw, m)| {
                let parity_fix = ((n as i64 - m as i64).rem_euclid(2) - 2 * k_raw).rem_euclid(2);
                RealBlock {
                    k: 2 * k_raw + parity_fix,
                    m,
                }
            })
            .collect();
        RealArthurParameter::new(blocks, Parity::Good).expect("parity corrected")
    })
}

fn pq_strategy(psi: &RealArthurParameter) -> impl Strategy<Value = PureFormLabel> {
    let ms: Vec<usize> = psi.blocks().iter().map(|b| b.m).collect();
    let ranges: Vec<std::ops::RangeInclusive<usize>> = ms.iter().map(|&m| 0..=m).collect();
    let ms2 = ms.clone();
    ranges.prop_map(move |p| {
        let q: Vec<usize> = p.iter().zip(&ms2).map(|(&pi, &m)| m - pi).collect();
        PureFormLabel::new(p, q, &ms2).expect("componentwise sums hold")
    })
}

proptest! {
    #[test]
    fn label_round_trip(psi in psi_strategy().prop_flat_map(|psi| {
        let pq = pq_strategy(&psi);
        (Just(psi), pq)
    })) {
        let (psi, pq) = psi;
        let label = pq_to_leta(&pq, &psi);
        prop_assert_eq!(leta_to_pq(&label, &psi), pq);
    }

    #[test]
    fn inf_char_parity_and_content(psi in psi_strategy()) {
        let lam = psi.inf_char();
        prop_assert_eq!(lam.parity(), Parity::Good);
        prop_assert_eq!(lam.n(), psi.n());
        prop_assert_eq!(associated_l_param_real(&psi).content(), lam.entries());
    }

    #[test]
    fn iota_conserves_dimension(psi in psi_strategy(), delta_off in 0i64..3) {
        let min = psi.blocks().iter().map(|b| b.m as i64 - b.k + 1).max().unwrap();
        let delta = min + delta_off;
        let lam = psi.inf_char();
        let n_cap = lam.big_n(delta) as usize;
        let m = iota_l(&associated_l_param_real(&psi), delta).unwrap();
        prop_assert_eq!(m.dim(), n_cap);
        prop_assert!(m.is_negation_closed());
        prop_assert_eq!(psi_real_to_padic(&psi, delta).unwrap().big_n(), n_cap);
        let lp = lambda_to_lambdap(&lam, delta).unwrap();
        prop_assert_eq!(&m.degree_content(), lp.multiplicities());
    }

    #[test]
    fn translation_mass_multiplies(values in prop::collection::vec(0i64..4, 1..5), mask in 0u32..16) {
        let mut lambda: Vec<HalfInteger> = values.iter().map(|&v| HalfInteger::from_int(v)).collect();
        lambda.sort_by(|a, b| b.cmp(a));
        let mut mu = lambda.clone();
        let mut dropped = 0u32;
        for (i, item) in mu.iter_mut().enumerate() {
            if mask & (1 << i) != 0 {
                *item = *item - HalfInteger::from_int(1);
                dropped += 1;
            }
        }
        prop_assume!(dropped > 0);
        let x = FormalCombination::symbol(lambda.clone());
        let out = translate(&lambda, &mu, &x).unwrap();
        prop_assert!(out.is_nonnegative());
        // total mass multiplies by the index |W_λ / (W_λ ∩ W_μ)|
        let orbit_size = out.terms().values().sum::<i64>();
        prop_assert!(orbit_size >= 1);
        // translating a doubled input doubles every coefficient
        let doubled = translate(&lambda, &mu, &x.scale(2)).unwrap();
        prop_assert_eq!(doubled, out.scale(2));
    }

    #[test]
    fn json_round_trips(psi in psi_strategy(), delta_off in 0i64..2) {
        let text = serde_json::to_string(&psi).unwrap();
        let back: RealArthurParameter = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &psi);

        let lam = psi.inf_char();
        let text = serde_json::to_string(&lam).unwrap();
        let back: arthur_core::params::InfinitesimalCharacter = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, lam.clone());

        let min = psi.blocks().iter().map(|b| b.m as i64 - b.k + 1).max().unwrap();
        let delta = min + delta_off;
        let m = iota_l(&associated_l_param_real(&psi), delta).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: Multisegment = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, m);

        let psi_p = psi_real_to_padic(&psi, delta).unwrap();
        let text = serde_json::to_string(&psi_p).unwrap();
        let back: arthur_core::params::PAdicArthurParameter = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, psi_p);
    }
}

#[test]
fn multisegment_canonical_form_survives_shuffled_input() {
    let a = Segment::new(HalfInteger::from_twice(-3), HalfInteger::from_twice(1)).unwrap();
    let b = Segment::new(HalfInteger::from_twice(-1), HalfInteger::from_twice(3)).unwrap();
    assert_eq!(Multisegment::new(vec![a, b]), Multisegment::new(vec![b, a]));
    let text = "[{\"lo_x2\":-3,\"hi_x2\":1},{\"lo_x2\":-1,\"hi_x2\":3}]";
    let parsed: Multisegment = serde_json::from_str(text).unwrap();
    assert_eq!(parsed, Multisegment::new(vec![b, a]));
}
