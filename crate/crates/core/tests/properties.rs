use ofdm_icm::codec::{bit_budget, decode_block, encode_block, BitWord, Codeword};
use ofdm_icm::{
    binom, rank_combination, rank_composition, unrank_combination, unrank_composition,
    IcmParams, Mode,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = IcmParams> {
    (1u32..=12, 0u32..=3, prop_oneof![Just(0u32), Just(2), Just(4), Just(8)]).prop_flat_map(|(n, extra, m)| {
        (1..=n).prop_map(move |k| {
            let mode = if m == 0 { Mode::Diversity } else { Mode::Payload { m } };
            IcmParams::new(n, k, k + extra * k.min(3), mode).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn combination_rank_round_trip(n in 1u32..=40, k_frac in 0.0f64..1.0, r in any::<u64>()) {
        let k = 1 + ((n - 1) as f64 * k_frac) as u32;
        let count = binom::<u128>(n, k).unwrap();
        let rank = r as u128 % count;
        let set = unrank_combination(n, k, rank).unwrap();
        prop_assert_eq!(set.len(), k as usize);
        prop_assert!(set.as_slice().windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(rank_combination(n, k, &set).unwrap(), rank);
    }

    #[test]
    fn composition_rank_round_trip(i in 1u32..=60, k_frac in 0.0f64..1.0, r in any::<u64>()) {
        let k = 1 + ((i - 1) as f64 * k_frac) as u32;
        let count = binom::<u128>(i - 1, k - 1).unwrap();
        let rank = r as u128 % count;
        let c = unrank_composition(i, k, rank).unwrap();
        prop_assert_eq!(c.parts().iter().sum::<u32>(), i);
        prop_assert!(c.parts().iter().all(|&v| v >= 1));
        prop_assert_eq!(rank_composition(i, k, &c).unwrap(), rank);
    }

    #[test]
    fn encode_decode_round_trip(p in params(), w in any::<u64>()) {
        let f = bit_budget(&p).f;
        prop_assume!(f <= 64);
        let word = BitWord::new(if f == 64 { w } else { w & ((1u64 << f) - 1) }, f).unwrap();
        let cw: Codeword<f64> = encode_block(&p, word).unwrap();
        prop_assert!((cw.energy() - p.energy_total()).abs() < 1e-9);
        prop_assert_eq!(cw.symbols.iter().filter(|s| s.norm() > 0.0).count(), p.k() as usize);
        prop_assert_eq!(decode_block(&p, &cw).unwrap(), word);
    }
}
