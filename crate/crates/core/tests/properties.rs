//! Property tests for the invariants of each stage.

mod common;

use std::collections::HashSet;

use mpsum::corpus::{build_documents, enrich_categories, expand_frequency, freeze};
use mpsum::eval::{average_precision, f_measure, set_f_measure, Feature, GoldStandard};
use mpsum::mp::{mp_rank, Phase};
use mpsum::rdf::{normalize_term, parse_ntriples, write_ntriples, CategoryMap, RdfTerm, Triple};
use proptest::prelude::*;

use common::{doc_from_pairs, mp_oracle};

fn iri_strategy() -> impl Strategy<Value = RdfTerm> {
    (
        "[a-z]{1,3}",
        prop::sample::select(vec!["/", "#"]),
        "[A-Za-z0-9_éÜ]{1,6}",
    )
        .prop_map(|(ns, sep, local)| RdfTerm::iri(format!("http://{ns}.org/x{sep}{local}")))
}

fn object_strategy() -> impl Strategy<Value = RdfTerm> {
    prop_oneof![
        iri_strategy(),
        "[ -~\t\n\"\\\\é]{0,12}".prop_map(RdfTerm::literal),
    ]
}

fn triples_strategy() -> impl Strategy<Value = Vec<Triple>> {
    prop::collection::vec((0..4usize, iri_strategy(), object_strategy()), 1..25).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (s, p, o))| Triple {
                subject: RdfTerm::iri(format!("http://e.org/s{s}")),
                predicate: p,
                object: o,
                source_line: i + 1,
                doc_order: 0,
            })
            .collect()
    })
}

fn pairs_strategy() -> impl Strategy<Value = Vec<(String, String)>> {
    prop::collection::vec((0..5usize, 0..6usize), 1..14).prop_map(|rows| {
        rows.into_iter()
            .map(|(p, o)| (format!("p{p}"), format!("t{o}")))
            .collect()
    })
}

fn words_strategy() -> impl Strategy<Value = Vec<String>> {
    Just((0..8).map(|i| format!("t{i}")).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_flat_map(|w| {
            let n = w.len();
            (Just(w), 0..=n)
        })
        .prop_map(|(mut w, n)| {
            w.truncate(n);
            w
        })
}

fn features(n: usize) -> impl Strategy<Value = Vec<Feature>> {
    prop::collection::vec((0..6usize, 0..6usize), 0..n).prop_map(|v| {
        v.into_iter()
            .map(|(p, o)| (format!("p{p}"), format!("o{o}")))
            .collect()
    })
}

fn gold(sets: Vec<Vec<Feature>>) -> GoldStandard {
    let sets: Vec<HashSet<Feature>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
    GoldStandard {
        entity_iri: "http://t/e".into(),
        annotators: (0..sets.len()).map(|i| format!("a{i}")).collect(),
        k_hint: sets.iter().map(HashSet::len).max().unwrap_or(0),
        gold_summaries: sets,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ntriples_round_trip_is_byte_stable(triples in triples_strategy()) {
        let text = write_ntriples(&triples);
        let parsed = parse_ntriples(text.as_bytes()).unwrap();
        prop_assert_eq!(parsed.len(), triples.len());
        for (a, b) in parsed.iter().zip(&triples) {
            prop_assert_eq!(&a.subject, &b.subject);
            prop_assert_eq!(&a.predicate, &b.predicate);
            prop_assert_eq!(&a.object, &b.object);
        }
        prop_assert_eq!(write_ntriples(&parsed), text);
    }

    #[test]
    fn parsing_never_reorders(triples in triples_strategy()) {
        let parsed = parse_ntriples(write_ntriples(&triples).as_bytes()).unwrap();
        for (i, a) in parsed.iter().enumerate() {
            for b in &parsed[i + 1..] {
                if a.subject == b.subject {
                    prop_assert!(a.source_line < b.source_line);
                    prop_assert!(a.doc_order < b.doc_order);
                }
            }
        }
    }

    #[test]
    fn normalize_is_idempotent(term in object_strategy()) {
        if let Ok(token) = normalize_term(&term) {
            if !token.contains(['#', '/']) {
                prop_assert_eq!(normalize_term(&RdfTerm::literal(token.clone())).unwrap(), token);
            }
        }
    }

    #[test]
    fn enrichment_conserves_and_expands(
        pairs in pairs_strategy(),
        cats in prop::collection::vec((0..6usize, 0..4usize), 0..10),
    ) {
        let mut map = CategoryMap::new();
        for (o, c) in &cats {
            map.insert(format!("t{o}"), format!("c{c}"));
        }
        let doc = doc_from_pairs(&pairs);
        let before: u64 = doc.total_tokens();

        let enriched = enrich_categories(doc.clone(), &map);
        for (token, count) in &doc.tokens {
            prop_assert_eq!(enriched.multiplicity(token), *count);
        }
        let added: u64 = enriched.total_tokens() - before;
        let new_tokens: u64 = enriched
            .tokens
            .iter()
            .filter(|(t, _)| !doc.tokens.contains_key(*t))
            .map(|(_, c)| *c)
            .sum();
        prop_assert_eq!(added, new_tokens);
        prop_assert_eq!(&enriched.triples, &doc.triples);

        let expanded = expand_frequency(doc.clone(), &map);
        let support: HashSet<&String> = doc.tokens.keys().collect();
        let expanded_support: HashSet<&String> = expanded.tokens.keys().collect();
        prop_assert_eq!(support, expanded_support);
        for (token, count) in &doc.tokens {
            prop_assert!(expanded.multiplicity(token) >= *count);
        }
    }

    #[test]
    fn freeze_is_deterministic_and_counts_tokens(triples in triples_strategy()) {
        let parsed = parse_ntriples(write_ntriples(&triples).as_bytes()).unwrap();
        let Ok(docs) = build_documents(parsed) else { return Ok(()); };
        let Ok(a) = freeze(docs.clone()) else { return Ok(()); };
        let b = freeze(docs).unwrap();
        prop_assert_eq!(a.fingerprint(), b.fingerprint());
        prop_assert_eq!(a.stats_tsv(), b.stats_tsv());
        let from_words: u64 = (0..a.entity_count())
            .flat_map(|d| a.doc_words(d).iter().map(|(_, c)| *c))
            .sum();
        let from_docs: u64 = a.documents().iter().map(|d| d.total_tokens()).sum();
        prop_assert_eq!(from_words, a.total_tokens());
        prop_assert_eq!(from_docs, a.total_tokens());
        prop_assert_eq!(a.num_topics(), a.predicate_count());
    }

    #[test]
    fn mp_matches_oracle_and_is_a_permutation(pairs in pairs_strategy(), words in words_strategy()) {
        let doc = doc_from_pairs(&pairs);
        let ranked = mp_rank(&doc, &words).unwrap();
        let order: Vec<usize> = ranked.ranked.iter().map(|r| r.triple.doc_order).collect();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..pairs.len()).collect::<Vec<_>>());

        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let want: Vec<usize> = mp_oracle(&pairs, &refs).into_iter().map(|(i, _)| i).collect();
        prop_assert_eq!(&order, &want);

        let distinct: HashSet<&str> = pairs.iter().map(|(p, _)| p.as_str()).collect();
        let prefix: HashSet<&str> =
            order[..distinct.len()].iter().map(|&i| pairs[i].0.as_str()).collect();
        prop_assert_eq!(prefix, distinct);

        // Topic matches come first and follow the topic-word ranking.
        let tags = ranked.phase_tags();
        let mut last_phase = Phase::TopicMatch;
        let mut last_rank = 0;
        for r in &ranked.ranked {
            prop_assert!(phase_index(r.phase) >= phase_index(last_phase));
            last_phase = r.phase;
            if r.phase == Phase::TopicMatch {
                let token = r.object_token.as_deref().unwrap();
                let rank = words.iter().position(|w| w == token).unwrap();
                prop_assert!(rank >= last_rank);
                last_rank = rank;
            }
        }
        prop_assert_eq!(tags.len(), pairs.len());
    }

    #[test]
    fn mp_prefixes_are_monotone(pairs in pairs_strategy(), words in words_strategy(), k in 1..14usize) {
        let doc = doc_from_pairs(&pairs);
        let full = mp_rank(&doc, &words).unwrap();
        let short = full.clone().truncate(k);
        prop_assert_eq!(short.ranked.len(), k.min(pairs.len()));
        prop_assert_eq!(&short.ranked[..], &full.ranked[..short.ranked.len()]);
    }

    #[test]
    fn metrics_are_bounded(summary in features(12), g1 in features(8), g2 in features(8), k in 1..12usize) {
        let g = gold(vec![g1, g2]);
        let f = f_measure(&summary, &g, k);
        let ap = average_precision(&summary, &g, k);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((0.0..=1.0).contains(&ap));
    }

    #[test]
    fn metrics_ignore_annotator_order(summary in features(12), g1 in features(8), g2 in features(8), k in 1..12usize) {
        let ab = gold(vec![g1.clone(), g2.clone()]);
        let ba = gold(vec![g2, g1]);
        prop_assert!((f_measure(&summary, &ab, k) - f_measure(&summary, &ba, k)).abs() < 1e-12);
        prop_assert!((average_precision(&summary, &ab, k) - average_precision(&summary, &ba, k)).abs() < 1e-12);
    }

    #[test]
    fn f_measure_is_symmetric(a in features(8), b in features(8)) {
        // With duplicates removed and k covering both lists, swapping roles leaves F unchanged.
        let dedup = |v: Vec<Feature>| {
            let mut seen = HashSet::new();
            v.into_iter().filter(|f| seen.insert(f.clone())).collect::<Vec<_>>()
        };
        let (a, b) = (dedup(a), dedup(b));
        let sa: HashSet<&Feature> = a.iter().collect();
        let sb: HashSet<&Feature> = b.iter().collect();
        let k = 16;
        prop_assert!((set_f_measure(&a, &sb, k) - set_f_measure(&b, &sa, k)).abs() < 1e-12);
    }

    #[test]
    fn ap_does_not_rise_when_a_hit_moves_down(summary in features(10), g in features(8), k in 2..10usize) {
        let gold_set = gold(vec![g]);
        let set = &gold_set.gold_summaries[0];
        let mut seen = HashSet::new();
        let summary: Vec<Feature> = summary.into_iter().filter(|f| seen.insert(f.clone())).collect();
        for i in 0..summary.len().saturating_sub(1).min(k - 1) {
            if set.contains(&summary[i]) && !set.contains(&summary[i + 1]) {
                let mut swapped = summary.clone();
                swapped.swap(i, i + 1);
                prop_assert!(
                    average_precision(&swapped, &gold_set, k)
                        <= average_precision(&summary, &gold_set, k) + 1e-12
                );
            }
        }
    }
}

fn phase_index(p: Phase) -> u8 {
    match p {
        Phase::TopicMatch => 0,
        Phase::NewPredicate => 1,
        Phase::Remainder => 2,
    }
}
