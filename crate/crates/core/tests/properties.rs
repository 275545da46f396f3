mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use typik_core::engine::{check_model, extract_model, saturate_guess, Budget, Schedule};
use typik_core::minimal::{abox_minimal_front, any_answer_set, satisfiable_concepts, t_minimal_front};
use typik_core::normalize::is_normal;
use typik_core::parser::print_kb;
use typik_core::replicate::{replicate, Dimension};
use typik_core::{compile, entails, normalize, parse_kb, Answer, EntailOptions, Mode, Query, Term};

fn kb_of(seed: u64, shape: &Shape) -> typik_core::KnowledgeBase {
    random_kb(&mut ChaCha8Rng::seed_from_u64(seed), shape)
}

fn verdict(kb: &typik_core::KnowledgeBase, q: &Query, mode: Mode, split: bool) -> Answer {
    let opts = EntailOptions {
        split,
        ..EntailOptions::default()
    };
    entails(kb, q, mode, opts).unwrap().answer
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn answer_sets_are_sound_and_coherent(seed in any::<u64>()) {
        let kb = kb_of(seed, &CORPUS);
        let p = compile(&kb, None).unwrap();
        let n = p.upperbound();
        let checkable = self_roles_are_simple(&kb);
        for a in all_answer_sets(&p) {
            if checkable {
                prop_assert_eq!(check_model(&extract_model(&a), &kb), vec![]);
            }
            let s = a.state();
            for c in 0..p.const_count() {
                prop_assert!(a.rank(c) <= n);
            }
            for k in 0..p.tc_count() {
                let (pos, neg) = (s.box_mask(k), s.neg_box_mask(k));
                // box_neg holds on a prefix of ranks, its negation on a suffix;
                // the negation may reach one past the bound from the aux rank
                prop_assert_eq!(pos & (pos + 1), 0);
                let upto_n = (2u128 << n) - 1;
                prop_assert_eq!(pos, pos & upto_n);
                prop_assert_eq!(neg, neg & (upto_n << 1 | 1));
                prop_assert_eq!(neg & (neg << 1) & upto_n, (neg << 1) & upto_n);
                prop_assert_eq!(pos & neg, 0);
                let class = p.class_id(&Term::Concept(p.facts.aux_tc[k].clone())).unwrap();
                for x in 0..p.const_count() {
                    let r = a.rank(x);
                    prop_assert_eq!(s.typ(x, k), s.inst(x, class) && pos >> r & 1 == 1);
                }
            }
        }
    }

    #[test]
    fn small_model_oracle_agrees_with_the_engine(seed in any::<u64>()) {
        let kb = kb_of(seed, &SMALL);
        let p = compile(&kb, None).unwrap();
        let engine = any_answer_set(&p, Budget::default()).unwrap().is_some();
        prop_assert_eq!(engine, has_small_model(&kb, &p));
    }

    #[test]
    fn saturation_ignores_rule_order(seed in any::<u64>(), sched in any::<u64>()) {
        let kb = kb_of(seed, &CORPUS);
        let p = compile(&kb, None).unwrap();
        for a in all_answer_sets(&p).into_iter().take(20) {
            let mut s = Schedule::Random(Box::new(ChaCha8Rng::seed_from_u64(sched)));
            let b = saturate_guess(&p, &a.guess(), &mut s).unwrap();
            prop_assert_eq!(a.atoms(), b.atoms());
        }
    }

    #[test]
    fn fronts_match_exhaustive_dominance(seed in any::<u64>(), qseed in any::<u64>()) {
        let kb = kb_of(seed, &CORPUS);
        let q = random_query(&mut ChaCha8Rng::seed_from_u64(qseed), &kb);
        let p = compile(&kb, Some(&q)).unwrap();
        let all = all_answer_sets(&p);
        let budget = Budget::default();
        let sat = satisfiable_concepts(&p, budget).unwrap();
        let brute = brute_front(&p, &all);
        let front = t_minimal_front(&p, &sat, budget);
        match &brute {
            None => prop_assert!(front.is_err()),
            Some(b) => {
                prop_assert_eq!(&b.sat, &sat);
                let front = front.unwrap();
                let got: BTreeSet<Vec<u32>> = front.iter().map(|m| m.tc_ranks.clone()).collect();
                prop_assert_eq!(&got, &b.t_front);
                let abox = abox_minimal_front(&p, &sat, &front, budget).unwrap();
                let got: BTreeSet<(Vec<u32>, Vec<u32>)> = abox
                    .iter()
                    .map(|m| (m.tc_ranks.clone(), m.named_ranks.clone().unwrap()))
                    .collect();
                prop_assert_eq!(&got, &b.abox_front);
            }
        }
        let expect = |sets: Option<&[typik_core::AnswerSet]>| match sets {
            _ if all.is_empty() => Answer::NoModel,
            None => Answer::NoTCompleteModel,
            Some(s) if s.iter().all(|a| a.holds_query(&q)) => Answer::Entailed,
            Some(_) => Answer::NotEntailed,
        };
        let everything = Some(&all[..]);
        prop_assert_eq!(verdict(&kb, &q, Mode::Rational, false), expect(everything));
        prop_assert_eq!(verdict(&kb, &q, Mode::Tmin, false), expect(brute.as_ref().map(|b| &b.t_minimal[..])));
        prop_assert_eq!(verdict(&kb, &q, Mode::TminAbox, false), expect(brute.as_ref().map(|b| &b.abox_minimal[..])));
    }

    #[test]
    fn entailment_strengthens_along_the_modes(seed in any::<u64>(), qseed in any::<u64>()) {
        let kb = kb_of(seed, &CORPUS);
        let q = random_query(&mut ChaCha8Rng::seed_from_u64(qseed), &kb);
        let r = verdict(&kb, &q, Mode::Rational, true);
        let t = verdict(&kb, &q, Mode::Tmin, true);
        let a = verdict(&kb, &q, Mode::TminAbox, true);
        // no T-complete answer set makes the minimal modes vacuous
        if r == Answer::Entailed && t != Answer::NoTCompleteModel {
            prop_assert_eq!(t, Answer::Entailed);
        }
        if t == Answer::Entailed {
            prop_assert_eq!(a, Answer::Entailed);
        }
    }

    #[test]
    fn typicality_queries_do_not_lower_other_ranks(seed in any::<u64>(), qseed in any::<u64>()) {
        let kb = kb_of(seed, &CORPUS);
        let mut rng = ChaCha8Rng::seed_from_u64(qseed);
        let a = kb.signature.individuals.iter().next().unwrap().as_str().to_string();
        let concepts: Vec<_> = kb.signature.concepts.iter().collect();
        let c = concepts[rand::Rng::random_range(&mut rng, 0..concepts.len())].as_str().to_string();
        let q = Query::typ(&a, &c);
        let budget = Budget::default();
        let plain = compile(&kb, None).unwrap();
        let with_q = compile(&kb, Some(&q)).unwrap();
        let (s0, s1) = (satisfiable_concepts(&plain, budget).unwrap(), satisfiable_concepts(&with_q, budget).unwrap());
        let (Ok(f0), Ok(f1)) = (t_minimal_front(&plain, &s0, budget), t_minimal_front(&with_q, &s1, budget)) else {
            return Ok(());
        };
        for (i, &k) in s0.iter().enumerate() {
            let name = &plain.facts.aux_tc[k];
            let Some(k1) = with_q.facts.aux_tc_index(name) else { continue };
            let Some(j) = s1.iter().position(|&x| x == k1) else { continue };
            let min0 = f0.iter().map(|m| m.tc_ranks[i]).min().unwrap();
            let min1 = f1.iter().map(|m| m.tc_ranks[j]).min().unwrap();
            prop_assert!(min1 >= min0, "{} fell from {} to {}", name, min0, min1);
        }
    }

    #[test]
    fn splitting_preserves_verdicts(seed in any::<u64>(), other in any::<u64>(), qseed in any::<u64>()) {
        let kb = kb_of(seed, &CORPUS);
        let q = random_query(&mut ChaCha8Rng::seed_from_u64(qseed), &kb);
        // a primed copy of a second KB shares no names with the first
        let second = replicate(&kb_of(other, &CORPUS), Dimension::Kb, 2);
        let mut big = kb.clone();
        for ax in second.axioms().filter(|a| a.to_string().contains('\'')) {
            big.push_declaring(ax.clone());
        }
        for mode in [Mode::Rational, Mode::Tmin, Mode::TminAbox] {
            prop_assert_eq!(verdict(&big, &q, mode, true), verdict(&big, &q, mode, false), "{}", mode);
        }
    }

    #[test]
    fn printed_kbs_parse_back(seed in any::<u64>()) {
        let kb = kb_of(seed, &CORPUS);
        let text = print_kb(&kb);
        prop_assert_eq!(parse_kb(&text).unwrap(), kb);
    }

    #[test]
    fn normal_kbs_normalize_to_normal_axioms(seed in any::<u64>()) {
        let kb = kb_of(seed, &CORPUS);
        let nkb = normalize(&kb);
        prop_assert!(nkb.axioms.iter().all(is_normal));
    }
}
