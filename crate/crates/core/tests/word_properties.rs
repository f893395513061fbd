use cabledeg::word::{parse_word, reduce, reduce_symbols, signed_sum, CableWord, ReducedTerm, Reducer, RegionId, Rule, Sign, Symbol};
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn region(i: u8) -> RegionId {
    if i == 0 {
        RegionId::EXTERIOR
    } else {
        RegionId::bounded(i as u32)
    }
}

/// Random chain-consistent word over regions 1..=6 and the exterior.
fn word_strategy() -> impl Strategy<Value = CableWord> {
    (1u8..=6, prop::collection::vec((1u8..=6, any::<bool>()), 0..60)).prop_map(|(home, steps)| {
        let mut at = home;
        let symbols = steps
            .into_iter()
            .map(|(hop, plus)| {
                // hop in 1..=6 moves to a different label in 0..=6
                let to = (at + hop) % 7;
                let s = Symbol::new(region(at), region(to), if plus { Sign::Plus } else { Sign::Minus });
                at = to;
                s
            })
            .collect();
        CableWord::new(home.to_string(), region(home), symbols).unwrap()
    })
}

/// Term-list rewriting in a random order: merge any adjacent pair
/// `c1(a,b) c2(b,d)` into `(c1+c2)(a,d)`, dropping a merged `0(a,a)`.
fn rewrite_in_random_order(word: &CableWord, seed: u64) -> ReducedTerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms: Vec<ReducedTerm> = word
        .symbols()
        .iter()
        .map(|s| ReducedTerm {
            coefficient: s.sign.value(),
            from: s.from,
            to: s.to,
        })
        .collect();
    while terms.len() > 1 {
        let before: i64 = terms.iter().map(|t| t.coefficient).sum();
        let i = rng.random_range(0..terms.len() - 1);
        let (a, b) = (terms[i], terms[i + 1]);
        assert_eq!(a.to, b.from, "term list stays chained");
        let merged = ReducedTerm {
            coefficient: a.coefficient + b.coefficient,
            from: a.from,
            to: b.to,
        };
        if merged.is_empty() {
            terms.drain(i..i + 2);
        } else {
            terms.splice(i..i + 2, [merged]);
        }
        let after: i64 = terms.iter().map(|t| t.coefficient).sum();
        assert_eq!(before, after, "a single rewrite changed the signed sum");
    }
    terms.pop().unwrap_or(ReducedTerm {
        coefficient: 0,
        from: word.home(),
        to: word.home(),
    })
}

proptest! {
    #[test]
    fn scan_matches_signed_sum(w in word_strategy()) {
        let t = reduce(&w);
        prop_assert_eq!(t.coefficient, signed_sum(&w));
        prop_assert_eq!(t.from, w.home());
        prop_assert_eq!(t.to, w.terminal());
    }

    #[test]
    fn every_step_preserves_the_running_sum(w in word_strategy()) {
        let mut r = Reducer::new(w.home());
        let mut sum = 0;
        for (i, s) in w.symbols().iter().enumerate() {
            let before = r.term();
            let rule = r.push(s).unwrap();
            sum += s.sign.value();
            let after = r.term();
            prop_assert_eq!(after.coefficient, sum);
            prop_assert_eq!(after.coefficient, before.coefficient + s.sign.value());
            match rule {
                Rule::Open => prop_assert_eq!(i, 0),
                Rule::Cancel => prop_assert!(after.coefficient == 0 && after.to == after.from),
                Rule::Transitive => prop_assert!(i > 0),
            }
        }
    }

    #[test]
    fn any_rewrite_order_gives_the_scan_result(w in word_strategy(), seed in any::<u64>()) {
        let scanned = reduce(&w);
        let rewritten = rewrite_in_random_order(&w, seed);
        if scanned.is_empty() {
            prop_assert!(rewritten.is_empty());
        } else {
            prop_assert_eq!(rewritten, scanned);
        }
    }

    #[test]
    fn exterior_detours_are_neutral(w in word_strategy(), at in any::<prop::sample::Index>(), plus in any::<bool>()) {
        // insert (a, inf, s)(inf, a, -s) wherever the cable is in a bounded region a
        let syms = w.symbols();
        let mut positions: Vec<(usize, RegionId)> = vec![(0, w.home())];
        positions.extend(syms.iter().enumerate().map(|(i, s)| (i + 1, s.to)));
        positions.retain(|(_, r)| !r.is_exterior());
        prop_assume!(!positions.is_empty());
        let (pos, a) = *at.get(&positions);
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let mut longer = syms.to_vec();
        longer.splice(pos..pos, [Symbol::new(a, RegionId::EXTERIOR, sign), Symbol::new(RegionId::EXTERIOR, a, sign.flipped())]);
        let detoured = reduce_symbols(w.home(), &longer).unwrap();
        prop_assert_eq!(detoured, reduce(&w));
    }

    #[test]
    fn display_round_trips(w in word_strategy()) {
        let back = parse_word(&w.to_string()).unwrap();
        prop_assert_eq!(back, w);
    }
}

#[test]
fn random_rewrites_on_a_long_word() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let labels: Vec<u8> = (0..=6).collect();
    let mut at = 2u8;
    let mut symbols = Vec::new();
    for _ in 0..2000 {
        let to = *labels.iter().filter(|&&l| l != at).collect::<Vec<_>>().choose(&mut rng).unwrap();
        symbols.push(Symbol::new(region(at), region(*to), if rng.random() { Sign::Plus } else { Sign::Minus }));
        at = *to;
    }
    let w = CableWord::new("2", region(2), symbols).unwrap();
    for seed in 0..5 {
        let r = rewrite_in_random_order(&w, seed);
        assert_eq!(r.coefficient, reduce(&w).coefficient);
    }
}
