//! End-to-end pipeline tests against the synthetic generator's exact
//! ground truth. The generator plants metadata and records which
//! publications each evidence channel can reach; these tests run the real
//! pipeline and demand exact set equality, not bounds.

use std::collections::{BTreeMap, BTreeSet};

use oeuvre_core::corpus::ClusterLevel;
use oeuvre_core::evaluator::{evaluate, restrict_persons, restrict_window};
use oeuvre_core::expander::{
    expand_clusters, expand_external_ids, harvest_external_ids, Method,
};
use oeuvre_core::namekit::build_frequency_table;
use oeuvre_core::recmatch::{MatchPolicy, RecordMatcher};
use oeuvre_core::seeder::{
    combine_seeds, prune_common_names, prune_multiple_assignments, seed_approx_linkage,
    seed_direct_linkage, seed_email, seed_external_records, seed_reprint, CommonNameThresholds,
    SeedSet, Strategy,
};
use oeuvre_core::synthgen::{generate, SynthConfig, SynthOutput};
use oeuvre_core::{PersonId, PubId};

const XID_CAP: usize = 10;

fn build_seed(out: &SynthOutput, thresholds: &CommonNameThresholds) -> SeedSet {
    let matcher_a = RecordMatcher::new(&out.corpus_a, MatchPolicy::default());
    let combined = combine_seeds([
        seed_email(&out.registry, &out.corpus_a),
        seed_reprint(&out.registry, &out.corpus_a, &out.aliases),
        seed_direct_linkage(&out.registry, &out.corpus_a, &out.aliases),
        seed_approx_linkage(&out.registry, &out.corpus_a, &out.aliases),
        seed_external_records(&out.registry, &out.corpus_a, &matcher_a),
    ]);
    let pruned = prune_multiple_assignments(&combined);
    let table = build_frequency_table(&out.corpus_a);
    prune_common_names(&pruned, &out.corpus_a, &table, thresholds)
}

/// (person, pub) pairs per person from any reachability selector.
fn pairs_by_person(seed: &SeedSet) -> BTreeMap<PersonId, BTreeSet<PubId>> {
    let mut out: BTreeMap<PersonId, BTreeSet<PubId>> = BTreeMap::new();
    for (person, pub_id, _) in seed.unique_assignments() {
        out.entry(person).or_default().insert(pub_id);
    }
    out
}

#[test]
fn perfect_metadata_world_reconstructs_every_oeuvre() {
    let config = SynthConfig {
        n_persons: 80,
        n_pubs: 1_500,
        homonym_rate: 0.0,
        email_coverage: 1.0,
        linkage_coverage: 1.0,
        alias_coverage: 1.0,
        ..SynthConfig::default()
    };
    let out = generate(&config).unwrap();
    let seed = build_seed(&out, &CommonNameThresholds::default());

    // Every person with at least one publication appears in the seed.
    let expected_persons = out.ground_truth.persons_with_publications();
    assert_eq!(seed.persons(), expected_persons);

    // Full expansion, then evaluation: nothing wrong, nothing missing.
    let matcher_a = RecordMatcher::new(&out.corpus_a, MatchPolicy::default());
    let matcher_b = RecordMatcher::new(&out.corpus_b, MatchPolicy::default());
    let meso = expand_clusters(&seed, &out.corpus_a, ClusterLevel::Meso, true);
    let profiles = harvest_external_ids(&seed, &out.corpus_a, &out.corpus_b, &matcher_b, XID_CAP);
    let xid = expand_external_ids(&profiles, &seed, &out.corpus_a, &out.corpus_b, &matcher_a);
    for oeuvre in [&meso, &xid] {
        let windowed = restrict_window(oeuvre, &out.corpus_a, out.gold.window());
        let scored = restrict_persons(&windowed, &out.gold);
        let report = evaluate(&scored, &out.gold).unwrap();
        assert_eq!(report.aggregate.false_pos, 0);
        assert_eq!(report.aggregate.false_neg, 0);
        assert_eq!(report.aggregate.precision, Some(100.0));
        assert_eq!(report.aggregate.recall, Some(100.0));
    }
}

#[test]
fn partial_coverage_pipeline_matches_reachability_exactly() {
    // Partial coverage makes expansion genuinely add publications beyond
    // the seed, so exact equality against the generator's reachability is
    // a strong statement. Common-name pruning is disabled (fractions 0)
    // because reachability describes the unpruned channels.
    let config = SynthConfig {
        n_persons: 120,
        n_pubs: 2_500,
        homonym_rate: 0.0,
        ..SynthConfig::default()
    };
    let out = generate(&config).unwrap();
    let no_pruning = CommonNameThresholds {
        rp: 0.0,
        dl: 0.0,
        al: 0.0,
    };

    // Per-strategy channels first.
    let matcher_a = RecordMatcher::new(&out.corpus_a, MatchPolicy::default());
    let channels = [
        (Strategy::Em, seed_email(&out.registry, &out.corpus_a)),
        (
            Strategy::Rp,
            seed_reprint(&out.registry, &out.corpus_a, &out.aliases),
        ),
        (
            Strategy::Dl,
            seed_direct_linkage(&out.registry, &out.corpus_a, &out.aliases),
        ),
        (
            Strategy::Al,
            seed_approx_linkage(&out.registry, &out.corpus_a, &out.aliases),
        ),
        (
            Strategy::Dai,
            seed_external_records(&out.registry, &out.corpus_a, &matcher_a),
        ),
    ];
    for (strategy, channel_seed) in &channels {
        let got = pairs_by_person(channel_seed);
        for (person, reach) in &out.ground_truth.reachable {
            let expected = reach.for_strategy(*strategy);
            let empty = BTreeSet::new();
            let actual = got.get(person).unwrap_or(&empty);
            assert_eq!(
                actual, expected,
                "strategy {strategy} mismatch for {person}"
            );
        }
    }

    // Combined and pruned seed equals the seed union.
    let seed = build_seed(&out, &no_pruning);
    let got = pairs_by_person(&seed);
    for (person, reach) in &out.ground_truth.reachable {
        let empty = BTreeSet::new();
        assert_eq!(got.get(person).unwrap_or(&empty), &reach.seed);
    }

    // Expansions equal their reachable sets, person by person.
    let matcher_b = RecordMatcher::new(&out.corpus_b, MatchPolicy::default());
    let profiles = harvest_external_ids(&seed, &out.corpus_a, &out.corpus_b, &matcher_b, XID_CAP);
    let expansions = [
        (
            Method::Meso,
            expand_clusters(&seed, &out.corpus_a, ClusterLevel::Meso, true),
        ),
        (
            Method::Micro,
            expand_clusters(&seed, &out.corpus_a, ClusterLevel::Micro, true),
        ),
        (
            Method::Xid,
            expand_external_ids(&profiles, &seed, &out.corpus_a, &out.corpus_b, &matcher_a),
        ),
    ];
    for (method, oeuvre) in &expansions {
        let mut got: BTreeMap<PersonId, BTreeSet<PubId>> = BTreeMap::new();
        for (person, pub_id) in oeuvre.unique_pairs() {
            got.entry(person).or_default().insert(pub_id);
        }
        for (person, reach) in &out.ground_truth.reachable {
            let expected = reach.for_method(*method);
            let empty = BTreeSet::new();
            let actual = got.get(person).unwrap_or(&empty);
            assert_eq!(actual, expected, "{method} mismatch for {person}");
        }
    }
}

#[test]
fn micro_expansion_stays_within_meso() {
    let out = generate(&SynthConfig {
        n_persons: 60,
        n_pubs: 1_000,
        ..SynthConfig::default()
    })
    .unwrap();
    let seed = build_seed(&out, &CommonNameThresholds::default());
    let meso = expand_clusters(&seed, &out.corpus_a, ClusterLevel::Meso, true);
    let micro = expand_clusters(&seed, &out.corpus_a, ClusterLevel::Micro, true);
    assert!(micro.unique_pairs().is_subset(&meso.unique_pairs()));
}

#[test]
fn anchored_expansion_is_a_subset_of_unanchored() {
    let out = generate(&SynthConfig {
        n_persons: 60,
        n_pubs: 1_000,
        ..SynthConfig::default()
    })
    .unwrap();
    let seed = build_seed(&out, &CommonNameThresholds::default());
    for level in [ClusterLevel::Meso, ClusterLevel::Micro] {
        let anchored = expand_clusters(&seed, &out.corpus_a, level, true);
        let unanchored = expand_clusters(&seed, &out.corpus_a, level, false);
        assert!(anchored.unique_pairs().is_subset(&unanchored.unique_pairs()));
    }
}

#[test]
fn expansions_preserve_seed_and_invent_no_persons() {
    let out = generate(&SynthConfig {
        n_persons: 60,
        n_pubs: 1_000,
        ..SynthConfig::default()
    })
    .unwrap();
    let seed = build_seed(&out, &CommonNameThresholds::default());
    let matcher_a = RecordMatcher::new(&out.corpus_a, MatchPolicy::default());
    let matcher_b = RecordMatcher::new(&out.corpus_b, MatchPolicy::default());
    let profiles = harvest_external_ids(&seed, &out.corpus_a, &out.corpus_b, &matcher_b, XID_CAP);
    let oeuvres = [
        expand_clusters(&seed, &out.corpus_a, ClusterLevel::Meso, true),
        expand_clusters(&seed, &out.corpus_a, ClusterLevel::Micro, true),
        expand_external_ids(&profiles, &seed, &out.corpus_a, &out.corpus_b, &matcher_a),
    ];
    let seed_assignments = seed.unique_assignments();
    let seed_persons = seed.persons();
    for oeuvre in &oeuvres {
        let seed_rows: BTreeSet<_> = oeuvre
            .iter()
            .filter(|a| a.method == Method::Seed)
            .map(|a| (a.person_id.clone(), a.pub_id.clone(), a.position))
            .collect();
        assert_eq!(seed_rows, seed_assignments);
        for assignment in oeuvre.iter() {
            assert!(seed_persons.contains(&assignment.person_id));
            let publication = out.corpus_a.get(&assignment.pub_id).unwrap();
            assert!(publication.mention(assignment.position).is_some());
        }
    }
}

#[test]
fn dl_and_al_are_disjoint_on_synthetic_corpora() {
    let out = generate(&SynthConfig {
        n_persons: 60,
        n_pubs: 1_000,
        ..SynthConfig::default()
    })
    .unwrap();
    let dl = seed_direct_linkage(&out.registry, &out.corpus_a, &out.aliases);
    let al = seed_approx_linkage(&out.registry, &out.corpus_a, &out.aliases);
    let dl_pubs = dl.publications();
    let al_pubs = al.publications();
    assert!(dl_pubs.is_disjoint(&al_pubs));
    assert!(!dl_pubs.is_empty() && !al_pubs.is_empty());
}

#[test]
fn homonym_world_costs_precision() {
    let config = SynthConfig {
        n_persons: 80,
        n_pubs: 2_000,
        homonym_rate: 0.3,
        ..SynthConfig::default()
    };
    let out = generate(&config).unwrap();
    let seed = build_seed(&out, &CommonNameThresholds::default());
    let meso = expand_clusters(&seed, &out.corpus_a, ClusterLevel::Meso, true);
    let windowed = restrict_window(&meso, &out.corpus_a, out.gold.window());
    let scored = restrict_persons(&windowed, &out.gold);
    let report = evaluate(&scored, &out.gold).unwrap();
    assert!(report.aggregate.false_pos > 0, "expected homonym collisions");
    assert!(report.aggregate.precision.unwrap() < 100.0);

    // Every false positive is explainable: the credited person shares a
    // name key with someone, or the pair was reachable only via a shared
    // cluster, never by the person's own planted metadata.
    let truth_pairs = out.ground_truth.pairs();
    let keys: BTreeMap<&PersonId, _> = out
        .registry
        .iter()
        .map(|p| (&p.person_id, oeuvre_core::namekit::person_key(p).unwrap()))
        .collect();
    let mut shared: BTreeSet<&PersonId> = BTreeSet::new();
    for (i, a) in out.registry.iter().enumerate() {
        for b in out.registry.iter().skip(i + 1) {
            if keys[&a.person_id] == keys[&b.person_id] {
                shared.insert(&a.person_id);
                shared.insert(&b.person_id);
            }
        }
    }
    for (person, pub_id) in scored.unique_pairs() {
        if !truth_pairs.contains(&(person.clone(), pub_id.clone())) {
            assert!(
                shared.contains(&person),
                "false positive ({person}, {pub_id}) not tied to a homonym"
            );
        }
    }
}

#[test]
fn window_restriction_matches_brute_force() {
    let out = generate(&SynthConfig {
        n_persons: 60,
        n_pubs: 1_000,
        year_range: (1999, 2012),
        ..SynthConfig::default()
    })
    .unwrap();
    let seed = build_seed(&out, &CommonNameThresholds::default());
    let meso = expand_clusters(&seed, &out.corpus_a, ClusterLevel::Meso, true);
    let window = (2003, 2008);
    let windowed = restrict_window(&meso, &out.corpus_a, window);
    let expected: BTreeSet<_> = meso
        .iter()
        .filter(|a| {
            let year = out.corpus_a.get(&a.pub_id).unwrap().biblio.year;
            (window.0..=window.1).contains(&year)
        })
        .cloned()
        .collect();
    let actual: BTreeSet<_> = windowed.iter().cloned().collect();
    assert_eq!(actual, expected);
}

#[test]
fn indexes_agree_with_linear_scans() {
    let out = generate(&SynthConfig {
        n_persons: 50,
        n_pubs: 800,
        ..SynthConfig::default()
    })
    .unwrap();
    let corpus = &out.corpus_a;

    // Emails.
    let mut emails: BTreeSet<String> = BTreeSet::new();
    let mut keys = BTreeSet::new();
    for publication in corpus.publications() {
        for mention in &publication.authors {
            if let Some(email) = &mention.email {
                emails.insert(email.clone());
            }
            if let Ok(key) = oeuvre_core::namekit::normalize_name(&mention.raw_name) {
                keys.insert(key);
            }
        }
    }
    for email in emails.iter().take(200) {
        let via_index: BTreeSet<(PubId, u32)> = corpus
            .mentions_with_email(email)
            .into_iter()
            .cloned()
            .collect();
        let via_scan: BTreeSet<(PubId, u32)> = corpus
            .publications()
            .flat_map(|p| {
                p.authors
                    .iter()
                    .filter(|m| m.email.as_deref() == Some(email.as_str()))
                    .map(|m| (p.pub_id.clone(), m.position))
            })
            .collect();
        assert_eq!(via_index, via_scan);
    }

    // Name keys.
    for key in keys.iter().take(200) {
        let via_index: BTreeSet<(PubId, u32)> = corpus
            .mentions_with_key(key)
            .into_iter()
            .cloned()
            .collect();
        let via_scan: BTreeSet<(PubId, u32)> = corpus
            .publications()
            .flat_map(|p| {
                p.authors
                    .iter()
                    .filter(|m| {
                        oeuvre_core::namekit::normalize_name(&m.raw_name).ok().as_ref()
                            == Some(key)
                    })
                    .map(|m| (p.pub_id.clone(), m.position))
            })
            .collect();
        assert_eq!(via_index, via_scan);
    }

    // Clusters at both levels.
    for level in [ClusterLevel::Meso, ClusterLevel::Micro] {
        let labels: BTreeSet<String> = corpus
            .publications()
            .filter_map(|p| p.cluster(level).map(str::to_string))
            .collect();
        for label in &labels {
            let via_index: BTreeSet<PubId> = corpus
                .pubs_in_cluster(level, label)
                .into_iter()
                .cloned()
                .collect();
            let via_scan: BTreeSet<PubId> = corpus
                .publications()
                .filter(|p| p.cluster(level) == Some(label.as_str()))
                .map(|p| p.pub_id.clone())
                .collect();
            assert_eq!(via_index, via_scan);
        }
    }

    // External ids in corpus B.
    let corpus_b = &out.corpus_b;
    let ids: BTreeSet<String> = corpus_b
        .publications()
        .flat_map(|p| p.authors.iter().filter_map(|m| m.external_author_id.clone()))
        .collect();
    for id in ids.iter().take(200) {
        let via_index: BTreeSet<(PubId, u32)> = corpus_b
            .mentions_with_external_id(id)
            .into_iter()
            .cloned()
            .collect();
        let via_scan: BTreeSet<(PubId, u32)> = corpus_b
            .publications()
            .flat_map(|p| {
                p.authors
                    .iter()
                    .filter(|m| m.external_author_id.as_deref() == Some(id.as_str()))
                    .map(|m| (p.pub_id.clone(), m.position))
            })
            .collect();
        assert_eq!(via_index, via_scan);
    }
}
