use proptest::prelude::*;

use grc_core::format;
use grc_core::hybrid::{run_hybrid, HybridConfig, Phase1Engine, ShrinkFactor};
use grc_core::recompress::fast::run_fast_with;
use grc_core::recompress::scan::run_with;
use grc_core::recompress::Options;
use grc_core::slp::{build_slp, expand_slp};
use grc_core::stats::RunStats;
use grc_core::text::{fast::repair_fast, naive::repair_naive};
use grc_core::{Bigram, Slp, Symbol};

const VERIFY: Options = Options { debug_verify: true };

fn text_strategy() -> impl Strategy<Value = (u32, Vec<Symbol>)> {
    (1u32..=4).prop_flat_map(|sigma| (Just(sigma), prop::collection::vec((0..sigma).prop_map(Symbol), 2..160)))
}

/// Arbitrary SLPs: each rule picks two earlier symbols, so shapes include
/// deep chains, heavy sharing and variables the start rule never reaches.
fn slp_strategy() -> impl Strategy<Value = Slp> {
    (1u32..=3, 1usize..=24)
        .prop_flat_map(|(sigma, n)| {
            let rules: Vec<_> = (0..n)
                .map(|i| {
                    let bound = sigma + i as u32;
                    (0..bound, 0..bound)
                })
                .collect();
            (Just(sigma), rules)
        })
        .prop_map(|(sigma, rules)| Slp {
            sigma,
            rules: rules.into_iter().map(|(l, r)| (Symbol(l), Symbol(r))).collect(),
        })
        .prop_filter("expansion too long", |slp| slp.text_len().is_ok_and(|len| len <= 3000))
}

fn trace(stats: &RunStats) -> Vec<(Option<Bigram>, u64, u64)> {
    stats.records.iter().map(|r| (r.bigram(), r.freq, r.text_len)).collect()
}

fn check_all_engines(slp: &Slp) -> Result<(), TestCaseError> {
    let text = expand_slp(slp).unwrap();
    let (naive, naive_stats) = repair_naive(&text, slp.sigma).unwrap();
    let (list, list_stats) = repair_fast(&text, slp.sigma).unwrap();
    prop_assert_eq!(&list, &naive);
    prop_assert_eq!(trace(&list_stats), trace(&naive_stats));

    let (scan, scan_stats) = run_with(slp, VERIFY).unwrap();
    prop_assert_eq!(&scan, &naive);
    prop_assert_eq!(trace(&scan_stats), trace(&naive_stats));

    let (fast, fast_stats) = run_fast_with(slp, VERIFY).unwrap();
    prop_assert_eq!(&fast, &naive);
    prop_assert_eq!(fast_stats.aggregates(), scan_stats.aggregates());

    for t in 1..=5 {
        for phase1 in [Phase1Engine::Scan, Phase1Engine::Fast] {
            let cfg = HybridConfig { t: ShrinkFactor::Finite(t), phase1, opts: Options::default() };
            let out = run_hybrid(slp, cfg).unwrap();
            prop_assert_eq!(&out.grammar, &naive);
            if let Some(len) = out.summary.switch_len {
                prop_assert!(len * t < text.len() as u64);
            }
        }
    }
    prop_assert_eq!(naive.expand(), text);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn pairing_slps_match_naive((sigma, text) in text_strategy()) {
        check_all_engines(&build_slp(&text, sigma).unwrap())?;
    }

    #[test]
    fn arbitrary_slps_match_naive(slp in slp_strategy()) {
        prop_assume!(slp.text_len().unwrap() >= 2);
        check_all_engines(&slp)?;
    }

    #[test]
    fn grammar_formats_round_trip((sigma, text) in text_strategy()) {
        let slp = build_slp(&text, sigma).unwrap();
        let (g, _) = repair_naive(&text, sigma).unwrap();
        prop_assert_eq!(format::slp_from_bytes(&format::slp_to_bytes(&slp).unwrap()).unwrap(), slp.clone());
        prop_assert_eq!(format::slp_from_text(&format::slp_to_text(&slp)).unwrap(), slp);
        prop_assert_eq!(format::rpg_from_bytes(&format::rpg_to_bytes(&g).unwrap()).unwrap(), g.clone());
        prop_assert_eq!(format::rpg_from_text(&format::rpg_to_text(&g)).unwrap(), g);
    }

    #[test]
    fn truncation_is_always_detected((sigma, text) in text_strategy(), cut in any::<prop::sample::Index>()) {
        let (g, _) = repair_naive(&text, sigma).unwrap();
        let bytes = format::rpg_to_bytes(&g).unwrap();
        let cut = cut.index(bytes.len());
        let err = format::read_grammar(&bytes[..cut]).unwrap_err();
        prop_assert!(matches!(err, grc_core::Error::Truncated(_)), "{err:?}");
    }
}
