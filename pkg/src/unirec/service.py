"""HTTP/JSON service over the dataset and the profile store.

The dataset is read-only while serving; user profiles are event-sourced
through an append-only JSONL log, so a crash-restart replays the log and
lands on identical state. Every error body is {"code", "message"} and a
malformed payload never mutates anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import stats
from .features import Feature, build_lexicon, tokenize_query
from .profile import (
    DuplicateUserError,
    ExplicitProfile,
    ProfileError,
    ProfileEvent,
    ProfileStore,
    UnknownUniversityError,
    UnknownUserError,
    UserProfile,
    Weights,
    top_interests,
)
from .recommend import class_recommend, recommend, search
from .schema import Dataset, SchemaError, UniversityProfile

EMPHASIS_STAT = "academic-emphasis"
DEFAULT_TOP_N = 10
DEFAULT_K = 10


class ReplayError(ValueError):
    """A persisted event log line that cannot be folded."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"event log line {line}: {reason}")
        self.line = line
        self.reason = reason


def replay_into(store: ProfileStore, lines: Iterable[str]) -> None:
    """Fold log lines into the store, aborting on the first corrupt line."""
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            event = ProfileEvent.from_json_line(line)
            store.replay_event(event)
        except (ProfileError, LookupError) as exc:
            raise ReplayError(lineno, str(exc)) from None


def replay(lines: Iterable[str], dataset: Dataset, weights: Weights = Weights()) -> dict[str, UserProfile]:
    """Profiles map from an event log; deterministic and total."""
    store = ProfileStore(dataset, weights)
    replay_into(store, lines)
    return {user_id: store.get(user_id) for user_id in store.users()}


class ServiceState:
    """Everything a running service holds: dataset, store, log sink."""

    def __init__(self, dataset: Dataset, weights: Weights = Weights(), event_log: Optional[Path] = None):
        self.dataset = dataset
        self.weights = weights
        self.lexicon = build_lexicon(dataset)
        self.event_log = Path(event_log) if event_log is not None else None
        self._log_handle = None
        self.store = ProfileStore(dataset, weights, self.lexicon, sink=self._append)
        if self.event_log is not None:
            if self.event_log.exists():
                with self.event_log.open(encoding="utf-8") as handle:
                    replay_into(self.store, handle)
            self._log_handle = self.event_log.open("a", encoding="utf-8")

    def _append(self, event: ProfileEvent) -> None:
        # called under the store lock, so appends are totally ordered
        if self._log_handle is not None:
            self._log_handle.write(event.to_json_line() + "\n")
            self._log_handle.flush()

    def close(self) -> None:
        if self._log_handle is not None:
            self._log_handle.close()
            self._log_handle = None


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _university_json(record: UniversityProfile, dataset: Dataset) -> dict:
    values = {name: record.values.get(name) for name in dataset.schema.names() if name != "name"}
    return {"name": record.name, "values": values}


def _profile_json(profile: UserProfile, state: ServiceState, top_n: int = DEFAULT_TOP_N) -> dict:
    top = top_interests(profile, state.dataset, state.weights.alpha, top_n)
    return {
        "user_id": profile.user_id,
        "explicit": profile.explicit.to_json(),
        "event_count": profile.event_count,
        "last_event_id": profile.last_event_id,
        "updated_at": profile.updated_at,
        "top_features": [{"feature": f.key, "theta": theta} for f, theta in top],
    }


def _recommendation_json(rec) -> dict:
    return {
        "name": rec.name,
        "score": rec.score,
        "matched_features": [{"feature": f.key, "theta": theta} for f, theta in rec.matched_features],
        "class_labels": rec.class_labels,
    }


def _distribution_json(dist: stats.ClassDistribution) -> dict:
    return {
        "attribute": dist.attribute,
        "total_records": dist.total_records,
        "missing": dist.missing_count,
        "rows": [{"class": label, "count": count, "percent": percent} for label, count, percent in dist.rows],
    }


def _parse_seeds(raw: object, state: ServiceState) -> list[Feature]:
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise ProfileError("seeds must be a list")
    seeds: list[Feature] = []
    for item in raw:
        if isinstance(item, str):
            feature = Feature.from_key(item)
            feature.validate(state.dataset.schema)
            seeds.append(feature)
        elif isinstance(item, dict) and "keyword" in item:
            seeds.extend(tokenize_query(str(item["keyword"]), state.lexicon))
        elif isinstance(item, dict) and "attribute" in item and "value" in item:
            feature = Feature.attr(str(item["attribute"]), str(item["value"]))
            feature.validate(state.dataset.schema)
            seeds.append(feature)
        else:
            raise ProfileError(f"seed entries need attribute/value or keyword, got {item!r}")
    return seeds


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="unirec", docs_url=None, redoc_url=None)
    # the web client is served from another origin; the API is auth-free
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return _error(400, "bad-request", str(exc.errors()[:1]))

    @app.post("/users", status_code=201)
    def create_user(body: dict = Body(...)):
        user_id = body.get("user_id")
        if not isinstance(user_id, str) or not user_id:
            return _error(400, "bad-request", "user_id must be a non-empty string")
        explicit_raw = body.get("explicit", {})
        if not isinstance(explicit_raw, dict):
            return _error(400, "bad-request", "explicit must be an object")
        try:
            seeds = _parse_seeds(body.get("seeds"), state)
            profile = state.store.create_user(user_id, ExplicitProfile.from_json(explicit_raw), seeds)
        except DuplicateUserError:
            return _error(409, "duplicate-user", f"user {user_id!r} already exists")
        except (ProfileError, SchemaError, ValueError) as exc:
            return _error(400, "bad-request", str(exc))
        return JSONResponse(status_code=201, content=_profile_json(profile, state))

    @app.get("/universities")
    def universities(name: Optional[str] = None):
        if name is None:
            return {"universities": [_university_json(r, state.dataset) for r in state.dataset.records]}
        try:
            record = state.dataset.by_name(name)
        except KeyError:
            return _error(404, "not-found", f"unknown university {name!r}")
        return _university_json(record, state.dataset)

    @app.get("/search")
    def search_endpoint(q: str = "", user: Optional[str] = None):
        if user is not None:
            try:
                state.store.add_event(user, "search", {"query": q})
            except UnknownUserError:
                return _error(404, "not-found", f"unknown user {user!r}")
        results = search(state.dataset, q, state.lexicon)
        return {"query": q, "results": [{"name": name, "match_count": count} for name, count in results]}

    @app.post("/users/{user_id}/events", status_code=202)
    def add_event(user_id: str, body: dict = Body(...)):
        kind = body.get("kind")
        payload = body.get("payload")
        if not isinstance(payload, dict):
            return _error(400, "bad-request", "payload must be an object")
        try:
            if kind == "import":
                profile, events = state.store.import_document(user_id, payload.get("document"))
                ids = [event.event_id for event in events]
                return JSONResponse(
                    status_code=202,
                    content={
                        "event_id": ids[-1] if ids else None,
                        "event_ids": ids,
                        "event_count": profile.event_count,
                    },
                )
            if kind not in ("search", "click"):
                return _error(400, "bad-request", f"unsupported event kind {kind!r}")
            profile, event = state.store.add_event(user_id, kind, payload)
        except UnknownUserError:
            return _error(404, "not-found", f"unknown user {user_id!r}")
        except UnknownUniversityError as exc:
            return _error(404, "not-found", f"unknown university {exc.args[0]!r}")
        except (ProfileError, ValueError) as exc:
            return _error(400, "bad-request", str(exc))
        return JSONResponse(
            status_code=202,
            content={"event_id": event.event_id, "event_ids": [event.event_id], "event_count": profile.event_count},
        )

    @app.get("/users/{user_id}/recommendations")
    def recommendations(user_id: str, k: int = DEFAULT_K, class_attribute: Optional[str] = None):
        try:
            profile = state.store.get(user_id)
        except UnknownUserError:
            return _error(404, "not-found", f"unknown user {user_id!r}")
        alpha = state.weights.alpha
        if class_attribute is None:
            recs = recommend(profile, state.dataset, k, alpha)
            return {"user_id": user_id, "k": k, "recommendations": [_recommendation_json(r) for r in recs]}
        try:
            buckets = class_recommend(profile, state.dataset, class_attribute, max(k, 1), alpha)
        except (SchemaError, ValueError) as exc:
            return _error(400, "bad-request", str(exc))
        return {
            "user_id": user_id,
            "attribute": class_attribute,
            "classes": {label: [_recommendation_json(r) for r in recs] for label, recs in buckets.items()},
        }

    @app.get("/users/{user_id}/profile")
    def profile_endpoint(user_id: str, n: int = DEFAULT_TOP_N):
        try:
            profile = state.store.get(user_id)
        except UnknownUserError:
            return _error(404, "not-found", f"unknown user {user_id!r}")
        return _profile_json(profile, state, n)

    @app.get("/stats/{attribute}")
    def stats_endpoint(attribute: str):
        if attribute == EMPHASIS_STAT:
            return _distribution_json(stats.emphasis_distribution(state.dataset))
        if not state.dataset.schema.has(attribute):
            return _error(404, "not-found", f"unknown attribute {attribute!r}")
        try:
            dist = stats.class_distribution(state.dataset, attribute)
        except SchemaError as exc:
            return _error(400, "bad-request", str(exc))
        return _distribution_json(dist)

    return app
