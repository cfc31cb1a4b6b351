"""Shared test utilities: naive model oracles and a fixed event script.

The oracles recompute the interest model from its formulas with a
different summation strategy (math.fsum over sorted keys), so agreement
with the implementation is a real check, not a reflection.
"""

from __future__ import annotations

import itertools
import math

from unirec.features import Feature, tokenize_query, university_features
from unirec.profile import ProfileStore, ExplicitProfile, UserProfile


def naive_theta(counts: dict[Feature, float], vocab: set[Feature], alpha: float) -> dict[Feature, float]:
    total = math.fsum(counts.get(f, 0.0) for f in sorted(vocab, key=lambda f: f.key))
    denom = total + alpha * len(vocab)
    return {f: (counts.get(f, 0.0) + alpha) / denom for f in vocab}


def naive_score(counts, vocab, alpha, features) -> float:
    theta = naive_theta(counts, vocab, alpha)
    logs = [math.log(theta[f]) for f in sorted(features, key=lambda f: f.key)]
    return math.fsum(logs) / len(logs)


def script_clock():
    counter = itertools.count()

    def tick() -> str:
        i = next(counter)
        return f"2026-01-05T{i // 3600:02d}:{(i // 60) % 60:02d}:{i % 60:02d}+00:00"

    return tick


def profile_digest(profile: UserProfile) -> dict:
    return {
        "user_id": profile.user_id,
        "explicit": profile.explicit.to_json(),
        "counts": {f.key: c for f, c in sorted(profile.counts.items(), key=lambda kv: kv[0].key)},
        "event_count": profile.event_count,
        "last_event_id": profile.last_event_id,
        "updated_at": profile.updated_at,
    }


# ("register", user, explicit dict, seeds) | ("search", user, query)
# | ("click", user, name) | ("import", user, document)
# Exactly 50 events against the bundled fixture dataset.
EVENT_SCRIPT = [
    ("register", "u-alice", {"display_name": "Alice"}, [("attr", "control", "PRIVATE")]),
    ("register", "u-bob", {"display_name": "Bob"}, [("kw", "arts boston")]),
    ("register", "u-carol", {}, []),
    ("search", "u-alice", "engineering in california"),
    ("search", "u-alice", "private suburban"),
    ("search", "u-alice", "science"),
    ("search", "u-alice", "arts management"),
    ("search", "u-alice", "quality of life 5"),
    ("search", "u-alice", "5- private engineering"),
    ("search", "u-alice", "cal-tech"),
    ("search", "u-alice", "brown university"),
    ("click", "u-alice", "CAL-TECH"),
    ("click", "u-alice", "CARNEGIE-MELLON"),
    ("click", "u-alice", "CASE-WESTERN"),
    ("click", "u-alice", "BROWN"),
    ("search", "u-bob", "arts in massachusetts"),
    ("search", "u-bob", "commerce accounting"),
    ("search", "u-bob", "urban state"),
    ("search", "u-bob", "medical pre-med new york"),
    ("search", "u-bob", "management business"),
    ("search", "u-bob", "boston"),
    ("click", "u-bob", "BOSTON-COLLEGE"),
    ("click", "u-bob", "BOSTON-UNIVERSITY"),
    ("click", "u-bob", "CCNY"),
    ("click", "u-bob", "ADELPHI"),
    ("click", "u-bob", "ARIZONA-STATE"),
    (
        "import",
        "u-bob",
        {
            "location": "boston massachusetts",
            "education": "engineering",
            "interests": ["science", "management"],
        },
    ),
    ("search", "u-carol", "suburban private 10+"),
    ("search", "u-carol", "engineering science"),
    ("search", "u-carol", "ohio"),
    ("search", "u-carol", "social 4"),
    ("search", "u-carol", "students 05-10"),
    ("search", "u-carol", "percent financial aid"),
    ("click", "u-carol", "ADELPHI"),
    ("click", "u-carol", "CAL-TECH"),
    ("click", "u-carol", "CCNY"),
    ("click", "u-carol", "CASE-WESTERN"),
    ("click", "u-carol", "BOSTON-COLLEGE"),
    ("click", "u-carol", "BROWN"),
    ("click", "u-carol", "CARNEGIE-MELLON"),
    (
        "import",
        "u-carol",
        {"interests": ["liberal-arts", "quality"], "visited_places": ["california", "ohio"]},
    ),
    ("import", "u-carol", {"location": "new york"}),
    ("search", "u-alice", "final check engineering"),
    ("search", "u-alice", "20+ students"),
    ("click", "u-alice", "CCNY"),
    ("click", "u-alice", "ARIZONA-STATE"),
    ("click", "u-alice", "BOSTON-UNIVERSITY"),
]


def run_event_script(store: ProfileStore) -> None:
    for op in EVENT_SCRIPT:
        kind = op[0]
        if kind == "register":
            _, user, explicit, seed_specs = op
            seeds = []
            for spec in seed_specs:
                if spec[0] == "attr":
                    seeds.append(Feature.attr(spec[1], spec[2]))
                else:
                    seeds.extend(tokenize_query(spec[1], store.lexicon))
            store.create_user(user, ExplicitProfile.from_json(explicit), seeds)
        elif kind == "search":
            store.add_event(op[1], "search", {"query": op[2]})
        elif kind == "click":
            store.add_event(op[1], "click", {"university": op[2]})
        else:
            store.import_document(op[1], op[2])


__all__ = [
    "EVENT_SCRIPT",
    "naive_score",
    "naive_theta",
    "profile_digest",
    "run_event_script",
    "script_clock",
    "university_features",
]
