import math
import random

import pytest

from helpers import naive_score, run_event_script, script_clock

from unirec.features import Feature, university_features, vocabulary
from unirec.profile import ProfileStore, Weights, profile_vocabulary
from unirec.recommend import UNKNOWN_CLASS, class_recommend, recommend, score, search
from unirec.schema import CANONICAL_SCHEMA, Dataset, SchemaError, UniversityProfile


def fresh_profile(fixture_dataset, seeds=()):
    store = ProfileStore(fixture_dataset, clock=script_clock())
    return store, store.create_user("u-t", seeds=seeds)


def synthetic_record(name, control):
    values = {attr.name: None for attr in CANONICAL_SCHEMA.attributes}
    for attr in CANONICAL_SCHEMA.attributes:
        if attr.name.startswith("academic-emphasis-"):
            values[attr.name] = "NO"
    values.update(name=name, state="TEXAS", location="URBAN", control=control)
    return UniversityProfile(values)


def test_fresh_profile_scores_are_uniform_log(fixture_dataset):
    _, profile = fresh_profile(fixture_dataset)
    vocab = profile_vocabulary(fixture_dataset, profile)
    expected = math.log(1 / len(vocab))
    for record in fixture_dataset.records:
        assert score(profile, record, vocab) == pytest.approx(expected, abs=1e-12)


def test_seeded_interest_boosts_matching_record(fixture_dataset):
    # identical records apart from control: the seed must separate them
    pair = Dataset(CANONICAL_SCHEMA, [synthetic_record("P", "PRIVATE"), synthetic_record("S", "STATE")])
    store = ProfileStore(pair, clock=script_clock())
    profile = store.create_user("u-t", seeds=[Feature.attr("control", "PRIVATE")])
    vocab = profile_vocabulary(pair, profile)
    s_private = score(profile, pair.by_name("P"), vocab)
    s_state = score(profile, pair.by_name("S"), vocab)
    assert s_private > s_state
    assert s_private == pytest.approx(
        naive_score(profile.counts, vocab, 1.0, university_features(pair.by_name("P"))), abs=1e-12
    )
    assert recommend(profile, pair, 2)[0].name == "P"


def test_scores_match_naive_oracle_after_script(fixture_dataset):
    store = ProfileStore(fixture_dataset, clock=script_clock())
    run_event_script(store)
    for user in store.users():
        profile = store.get(user)
        vocab = profile_vocabulary(fixture_dataset, profile)
        for record in fixture_dataset.records:
            expected = naive_score(profile.counts, vocab, 1.0, university_features(record))
            assert score(profile, record, vocab) == pytest.approx(expected, abs=1e-9)


def test_recommend_k_zero_and_negative(fixture_dataset):
    _, profile = fresh_profile(fixture_dataset)
    assert recommend(profile, fixture_dataset, 0) == []
    assert recommend(profile, fixture_dataset, -3) == []


def test_recommend_large_k_returns_all_sorted(fixture_dataset):
    _, profile = fresh_profile(fixture_dataset)
    recs = recommend(profile, fixture_dataset, 100)
    assert len(recs) == len(fixture_dataset.records)
    scores = [r.score for r in recs]
    assert scores == sorted(scores, reverse=True)


def test_exact_ties_break_by_name(fixture_dataset):
    # identical feature sets produce bitwise-equal scores; names decide
    clones = Dataset(
        CANONICAL_SCHEMA,
        [synthetic_record(n, "PRIVATE") for n in ("ZEBRA", "MIDWAY", "AARDVARK")],
    )
    _, profile = fresh_profile(fixture_dataset)
    names = [r.name for r in recommend(profile, clones, 3)]
    assert names == ["AARDVARK", "MIDWAY", "ZEBRA"]


def test_prefix_property(fixture_dataset):
    store = ProfileStore(fixture_dataset, clock=script_clock())
    run_event_script(store)
    profile = store.get("u-alice")
    full = recommend(profile, fixture_dataset, len(fixture_dataset.records))
    for k in range(len(full)):
        assert recommend(profile, fixture_dataset, k) == full[:k]


def test_ranking_is_permutation_invariant(fixture_dataset):
    store = ProfileStore(fixture_dataset, clock=script_clock())
    run_event_script(store)
    profile = store.get("u-bob")
    baseline = recommend(profile, fixture_dataset, 100)
    rng = random.Random(7)
    for _ in range(5):
        records = list(fixture_dataset.records)
        rng.shuffle(records)
        shuffled = Dataset(fixture_dataset.schema, records)
        assert recommend(profile, shuffled, 100) == baseline


def test_matched_features_reflect_user_support(fixture_dataset):
    store, profile = fresh_profile(fixture_dataset, seeds=[Feature.attr("control", "PRIVATE")])
    store.add_event("u-t", "search", {"query": "engineering"})
    profile = store.get("u-t")
    for rec in recommend(profile, fixture_dataset, 100):
        features = {f for f, _ in rec.matched_features}
        record_features = university_features(fixture_dataset.by_name(rec.name))
        assert features <= record_features
        assert all(profile.counts.get(f, 0.0) > 0 for f in features)
        thetas = [theta for _, theta in rec.matched_features]
        assert thetas == sorted(thetas, reverse=True)
    top = recommend(profile, fixture_dataset, 1)[0]
    assert Feature.attr("control", "PRIVATE") in {f for f, _ in top.matched_features}


def test_class_labels_cover_present_nominals(fixture_dataset):
    _, profile = fresh_profile(fixture_dataset)
    rec = [r for r in recommend(profile, fixture_dataset, 100) if r.name == "ADELPHI"][0]
    assert rec.class_labels["state"] == "NEWYORK"
    assert rec.class_labels["control"] == "PRIVATE"
    assert "location" not in rec.class_labels  # missing stays unlabeled


def test_class_recommend_buckets_by_location(fixture_dataset):
    _, profile = fresh_profile(fixture_dataset)
    flat = recommend(profile, fixture_dataset, 100)
    location = {r.name: fixture_dataset.by_name(r.name).values.get("location") for r in flat}
    buckets = class_recommend(profile, fixture_dataset, "location", per_class=1)
    assert list(buckets) == ["SUBURBAN", "URBAN", "SMALL-TOWN", "SMALL-CITY", UNKNOWN_CLASS]
    # each bucket holds the first flat-ranked record of its class
    for label in ("SUBURBAN", "URBAN"):
        expected = next(r.name for r in flat if location[r.name] == label)
        assert [r.name for r in buckets[label]] == [expected]
    assert buckets["SMALL-TOWN"] == [] and buckets["SMALL-CITY"] == []
    expected_unknown = next(r.name for r in flat if location[r.name] is None)
    assert [r.name for r in buckets[UNKNOWN_CLASS]] == [expected_unknown]


def test_class_recommend_unknown_bucket_holds_missing_records(fixture_dataset):
    _, profile = fresh_profile(fixture_dataset)
    buckets = class_recommend(profile, fixture_dataset, "location", per_class=10)
    assert {r.name for r in buckets[UNKNOWN_CLASS]} == {"ADELPHI", "ARIZONA-STATE"}
    total = sum(len(v) for v in buckets.values())
    assert total == len(fixture_dataset.records)


def test_class_recommend_validates_inputs(fixture_dataset):
    _, profile = fresh_profile(fixture_dataset)
    with pytest.raises(SchemaError):
        class_recommend(profile, fixture_dataset, "percent-enrolled", per_class=1)
    with pytest.raises(SchemaError):
        class_recommend(profile, fixture_dataset, "mascot", per_class=1)
    with pytest.raises(ValueError):
        class_recommend(profile, fixture_dataset, "location", per_class=0)


def test_class_recommend_empty_dataset(fixture_dataset):
    _, profile = fresh_profile(fixture_dataset)
    empty = Dataset(CANONICAL_SCHEMA, [])
    buckets = class_recommend(profile, empty, "control", per_class=3)
    assert all(v == [] for v in buckets.values())


def test_search_exact_name_ranks_first(fixture_dataset):
    results = search(fixture_dataset, "cal-tech")
    assert results[0] == ("CAL-TECH", 1)
    assert len(results) == 1


def test_search_substring_needs_three_chars(fixture_dataset):
    assert [name for name, _ in search(fixture_dataset, "tech")] == ["CAL-TECH"]
    assert search(fixture_dataset, "bo") == []  # two chars never substring-match


def test_search_counts_and_sort(fixture_dataset):
    results = search(fixture_dataset, "engineering private")
    counts = dict(results)
    # engineering-emphasis private schools match both tokens
    assert counts["CAL-TECH"] == 2
    assert counts["CARNEGIE-MELLON"] == 2
    assert counts["ADELPHI"] == 1  # private only
    names = [name for name, _ in results]
    assert names == sorted(names, key=lambda n: (-counts[n], n))


def test_search_state_token_matches(fixture_dataset):
    assert ("CASE-WESTERN", 1) in search(fixture_dataset, "ohio")
    assert [name for name, _ in search(fixture_dataset, "massachusetts")] == [
        "BOSTON-COLLEGE",
        "BOSTON-UNIVERSITY",
    ]


def test_search_empty_and_stopword_queries(fixture_dataset):
    assert search(fixture_dataset, "") == []
    assert search(fixture_dataset, "the of and") == []
    assert search(fixture_dataset, "zzzzz") == []
