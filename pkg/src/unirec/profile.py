"""User interest profiles built from behaviour events.

Every signal a user emits (registering with seed preferences, searching,
clicking a university, importing an external profile document) is an
append-only event. Folding the events in event_id order gives weighted
feature counts; a Laplace-smoothed multinomial over the vocabulary turns
the counts into an interest distribution. Replaying a stored event log
reproduces every profile bit for bit.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Callable, Iterable, Optional

from .features import Feature, build_lexicon, tokenize_query, university_features, vocabulary
from .schema import Dataset

REGISTER = "register"
SEARCH = "search"
CLICK = "click"
IMPORT = "import"
EVENT_KINDS = (REGISTER, SEARCH, CLICK, IMPORT)

# external-profile document: JSON object, all fields optional
_DOCUMENT_FIELDS = (
    ("location", str),
    ("education", str),
    ("interests", list),
    ("visited_places", list),
)


class ProfileError(ValueError):
    """Invalid event or profile operation."""


class DuplicateUserError(ProfileError):
    pass


class UnknownUserError(LookupError):
    pass


class UnknownUniversityError(LookupError):
    pass


@dataclass(frozen=True)
class Weights:
    """Event weights and smoothing for the interest model."""

    register: float = 5.0
    search: float = 1.0
    click: float = 2.0
    imported: float = 3.0
    alpha: float = 1.0
    decay: float = 1.0

    def __post_init__(self) -> None:
        for name in ("register", "search", "click", "imported"):
            if getattr(self, name) < 0:
                raise ProfileError(f"weight {name} must be non-negative")
        if self.alpha <= 0:
            raise ProfileError("alpha must be positive")
        if not 0 < self.decay <= 1:
            raise ProfileError("decay must be in (0, 1]")

    def for_kind(self, kind: str) -> float:
        return {REGISTER: self.register, SEARCH: self.search, CLICK: self.click, IMPORT: self.imported}[kind]


@dataclass(frozen=True)
class ExplicitProfile:
    """Fields the user states about themselves at registration."""

    display_name: str = ""
    location: str = ""
    education: str = ""
    visited_places: tuple[str, ...] = ()
    contact: str = ""

    def to_json(self) -> dict:
        return {
            "display_name": self.display_name,
            "location": self.location,
            "education": self.education,
            "visited_places": list(self.visited_places),
            "contact": self.contact,
        }

    @staticmethod
    def from_json(data: dict) -> "ExplicitProfile":
        return ExplicitProfile(
            display_name=str(data.get("display_name", "")),
            location=str(data.get("location", "")),
            education=str(data.get("education", "")),
            visited_places=tuple(str(p) for p in data.get("visited_places", ())),
            contact=str(data.get("contact", "")),
        )


@dataclass(frozen=True)
class ProfileEvent:
    event_id: int
    user_id: str
    kind: str
    payload: dict
    timestamp: str

    def __post_init__(self) -> None:
        if self.event_id < 1:
            raise ProfileError(f"event_id must be positive, got {self.event_id}")
        if not self.user_id:
            raise ProfileError("event user_id must be non-empty")
        if self.kind not in EVENT_KINDS:
            raise ProfileError(f"unknown event kind {self.kind!r}")
        self._check_payload()

    def _check_payload(self) -> None:
        payload = self.payload
        if self.kind == REGISTER:
            if not isinstance(payload.get("explicit"), dict) or not isinstance(payload.get("seeds"), list):
                raise ProfileError("register payload needs explicit dict and seeds list")
        elif self.kind == SEARCH:
            if not isinstance(payload.get("query"), str):
                raise ProfileError("search payload needs a query string")
        elif self.kind == CLICK:
            if not isinstance(payload.get("university"), str) or not payload["university"]:
                raise ProfileError("click payload needs a university name")
        else:
            if not isinstance(payload.get("features"), list):
                raise ProfileError("import payload needs a features list")

    def to_json_line(self) -> str:
        data = {
            "event_id": self.event_id,
            "user_id": self.user_id,
            "kind": self.kind,
            "payload": self.payload,
            "timestamp": self.timestamp,
        }
        return json.dumps(data, sort_keys=True)

    @staticmethod
    def from_json_line(line: str) -> "ProfileEvent":
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProfileError(f"event line is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ProfileError("event line must be a JSON object")
        try:
            return ProfileEvent(
                event_id=int(data["event_id"]),
                user_id=str(data["user_id"]),
                kind=str(data["kind"]),
                payload=dict(data["payload"]),
                timestamp=str(data["timestamp"]),
            )
        except (KeyError, TypeError) as exc:
            raise ProfileError(f"event line missing or malformed field: {exc}") from None


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    explicit: ExplicitProfile = ExplicitProfile()
    counts: dict[Feature, float] = field(default_factory=dict)
    event_count: int = 0
    last_event_id: int = 0
    updated_at: str = ""

    def features(self) -> set[Feature]:
        return set(self.counts)


def _seed_features(payload: dict) -> list[Feature]:
    return [Feature.from_key(key) for key in payload["seeds"]]


def profile_from_register(event: ProfileEvent, weights: Weights) -> UserProfile:
    if event.kind != REGISTER:
        raise ProfileError(f"expected a register event, got {event.kind}")
    counts: dict[Feature, float] = {}
    for feature in _seed_features(event.payload):
        counts[feature] = counts.get(feature, 0.0) + weights.register
    return UserProfile(
        user_id=event.user_id,
        explicit=ExplicitProfile.from_json(event.payload["explicit"]),
        counts=counts,
        event_count=1,
        last_event_id=event.event_id,
        updated_at=event.timestamp,
    )


def event_features(event: ProfileEvent, dataset: Dataset, lexicon: dict[str, Feature]) -> list[Feature]:
    """Features an event contributes, in observation order."""
    if event.kind == REGISTER:
        return _seed_features(event.payload)
    if event.kind == SEARCH:
        return tokenize_query(event.payload["query"], lexicon)
    if event.kind == CLICK:
        name = event.payload["university"]
        try:
            record = dataset.by_name(name)
        except KeyError:
            raise UnknownUniversityError(name) from None
        return sorted(university_features(record, dataset.schema), key=lambda f: f.key)
    return [Feature.from_key(key) for key in event.payload["features"]]


def apply_event(
    profile: UserProfile,
    event: ProfileEvent,
    dataset: Dataset,
    weights: Weights,
    lexicon: dict[str, Feature],
) -> UserProfile:
    """Fold one event into a profile; pure, returns the updated profile.

    Events must arrive in strictly increasing event_id order; a register
    event only ever starts a profile and cannot be applied to one.
    """
    if event.user_id != profile.user_id:
        raise ProfileError(f"event for {event.user_id!r} applied to profile {profile.user_id!r}")
    if event.kind == REGISTER:
        raise ProfileError("register event cannot apply to an existing profile")
    if event.event_id <= profile.last_event_id:
        raise ProfileError(
            f"event {event.event_id} out of order for user {profile.user_id}"
            f" (last applied {profile.last_event_id})"
        )
    features = event_features(event, dataset, lexicon)
    if weights.decay < 1.0:
        counts = {f: c * weights.decay for f, c in profile.counts.items()}
    else:
        counts = dict(profile.counts)
    weight = weights.for_kind(event.kind)
    for feature in features:
        counts[feature] = counts.get(feature, 0.0) + weight
    return replace(
        profile,
        counts=counts,
        event_count=profile.event_count + 1,
        last_event_id=event.event_id,
        updated_at=event.timestamp,
    )


def interest_distribution(profile: UserProfile, vocab: set[Feature], alpha: float = 1.0) -> dict[Feature, float]:
    """Laplace-smoothed multinomial over the vocabulary.

    theta[f] = (counts[f] + alpha) / (sum(counts) + alpha * |V|); every
    observed feature must already be in the vocabulary.
    """
    if not vocab:
        raise ProfileError("vocabulary is empty")
    outside = profile.features() - vocab
    if outside:
        keys = ", ".join(sorted(f.key for f in outside))
        raise ProfileError(f"profile features outside the vocabulary: {keys}")
    total = sum(profile.counts.values())
    denom = total + alpha * len(vocab)
    return {f: (profile.counts.get(f, 0.0) + alpha) / denom for f in vocab}


def profile_vocabulary(dataset: Dataset, profile: UserProfile) -> set[Feature]:
    """Dataset features plus everything this user has observed."""
    return vocabulary(dataset, profile.features())


def top_interests(
    profile: UserProfile, dataset: Dataset, alpha: float = 1.0, n: int = 10
) -> list[tuple[Feature, float]]:
    theta = interest_distribution(profile, profile_vocabulary(dataset, profile), alpha)
    ranked = sorted(theta.items(), key=lambda item: (-item[1], item[0].key))
    return ranked[: max(n, 0)]


def parse_external_document(data: object) -> dict:
    """Validate an external-profile JSON document.

    Known fields: location (string), education (string), interests (list
    of strings), visited_places (list of strings). All optional; a field
    of the wrong shape is an error naming every offending field.
    """
    if not isinstance(data, dict):
        raise ProfileError("external document must be a JSON object")
    bad = []
    for name, kind in _DOCUMENT_FIELDS:
        if name not in data:
            continue
        value = data[name]
        if not isinstance(value, kind) or isinstance(value, bool):
            bad.append(name)
        elif kind is list and any(not isinstance(item, str) for item in value):
            bad.append(name)
    if bad:
        raise ProfileError(f"malformed external document fields: {', '.join(bad)}")
    return {name: data[name] for name, _ in _DOCUMENT_FIELDS if name in data}


def import_external(
    user_id: str,
    document: object,
    lexicon: dict[str, Feature],
    start_event_id: int,
    timestamp: str,
) -> list[ProfileEvent]:
    """Translate an external document into one import event per non-empty field.

    Field text is tokenized like a query, so domain words resolve to
    attribute features and the rest stay keywords. Resolved features ride
    in the payload: replay never re-tokenizes.
    """
    fields = parse_external_document(document)
    events = []
    event_id = start_event_id
    for name, _ in _DOCUMENT_FIELDS:
        value = fields.get(name)
        if not value:
            continue
        text = value if isinstance(value, str) else " ".join(value)
        features = tokenize_query(text, lexicon)
        if not features:
            continue
        payload = {"source": name, "features": [f.key for f in features]}
        events.append(ProfileEvent(event_id, user_id, IMPORT, payload, timestamp))
        event_id += 1
    return events


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class ProfileStore:
    """In-memory profiles with a single writer lock and an optional event sink.

    Updates are serialized store-wide, which subsumes the per-user
    ordering guarantee: assigned event_ids are strictly increasing and
    every profile folds its events in that order. Reads return the
    current immutable profile object and never block behind a write for
    longer than the fold itself.
    """

    def __init__(
        self,
        dataset: Dataset,
        weights: Weights = Weights(),
        lexicon: Optional[dict[str, Feature]] = None,
        sink: Optional[Callable[[ProfileEvent], None]] = None,
        clock: Optional[Callable[[], str]] = None,
    ):
        self.dataset = dataset
        self.weights = weights
        self.lexicon = lexicon if lexicon is not None else build_lexicon(dataset)
        self._sink = sink
        self._clock = clock or _utc_now
        self._lock = threading.Lock()
        self._profiles: dict[str, UserProfile] = {}
        self._next_event_id = 1

    def users(self) -> list[str]:
        with self._lock:
            return sorted(self._profiles)

    def get(self, user_id: str) -> UserProfile:
        with self._lock:
            profile = self._profiles.get(user_id)
        if profile is None:
            raise UnknownUserError(user_id)
        return profile

    def has(self, user_id: str) -> bool:
        with self._lock:
            return user_id in self._profiles

    def create_user(
        self, user_id: str, explicit: ExplicitProfile = ExplicitProfile(), seeds: Iterable[Feature] = ()
    ) -> UserProfile:
        if not user_id:
            raise ProfileError("user_id must be non-empty")
        payload = {"explicit": explicit.to_json(), "seeds": [f.key for f in seeds]}
        with self._lock:
            if user_id in self._profiles:
                raise DuplicateUserError(user_id)
            event = ProfileEvent(self._next_event_id, user_id, REGISTER, payload, self._clock())
            profile = profile_from_register(event, self.weights)
            self._record(event, profile)
        return profile

    def add_event(self, user_id: str, kind: str, payload: dict) -> tuple[UserProfile, ProfileEvent]:
        """Apply one search or click event, assigning the next event_id."""
        if kind not in (SEARCH, CLICK):
            raise ProfileError(f"cannot append {kind!r} events directly")
        with self._lock:
            profile = self._require(user_id)
            event = ProfileEvent(self._next_event_id, user_id, kind, payload, self._clock())
            updated = apply_event(profile, event, self.dataset, self.weights, self.lexicon)
            self._record(event, updated)
        return updated, event

    def import_document(self, user_id: str, document: object) -> tuple[UserProfile, list[ProfileEvent]]:
        with self._lock:
            profile = self._require(user_id)
            events = import_external(user_id, document, self.lexicon, self._next_event_id, self._clock())
            updated = profile
            for event in events:
                updated = apply_event(updated, event, self.dataset, self.weights, self.lexicon)
                self._record(event, updated)
        return updated, events

    def replay_event(self, event: ProfileEvent) -> UserProfile:
        """Apply a persisted event as-is: ids come from the log, nothing is re-emitted."""
        with self._lock:
            if event.event_id < self._next_event_id:
                raise ProfileError(f"event {event.event_id} replays out of order")
            if event.kind == REGISTER:
                if event.user_id in self._profiles:
                    raise DuplicateUserError(event.user_id)
                profile = profile_from_register(event, self.weights)
            else:
                current = self._profiles.get(event.user_id)
                if current is None:
                    raise UnknownUserError(event.user_id)
                profile = apply_event(current, event, self.dataset, self.weights, self.lexicon)
            self._profiles[event.user_id] = profile
            self._next_event_id = event.event_id + 1
        return profile

    def _require(self, user_id: str) -> UserProfile:
        profile = self._profiles.get(user_id)
        if profile is None:
            raise UnknownUserError(user_id)
        return profile

    def _record(self, event: ProfileEvent, profile: UserProfile) -> None:
        self._profiles[event.user_id] = profile
        self._next_event_id = event.event_id + 1
        if self._sink is not None:
            self._sink(event)
