"""University data pipeline, user-interest profiling and recommendations."""

from .schema import (
    AttributeDef,
    AttributeSchema,
    CANONICAL_SCHEMA,
    Dataset,
    SchemaError,
    UniversityProfile,
    load_dataset,
    save_dataset,
)
from .features import Feature, build_lexicon, tokenize_query, university_features, vocabulary
from .profile import (
    ExplicitProfile,
    ProfileEvent,
    ProfileStore,
    UserProfile,
    Weights,
    apply_event,
    interest_distribution,
)
from .recommend import Recommendation, class_recommend, recommend, search
from .service import ServiceState, create_app, replay

__version__ = "0.1.0"

__all__ = [
    "AttributeDef",
    "AttributeSchema",
    "CANONICAL_SCHEMA",
    "Dataset",
    "ExplicitProfile",
    "Feature",
    "ProfileEvent",
    "ProfileStore",
    "Recommendation",
    "SchemaError",
    "ServiceState",
    "UniversityProfile",
    "UserProfile",
    "Weights",
    "apply_event",
    "build_lexicon",
    "class_recommend",
    "create_app",
    "interest_distribution",
    "load_dataset",
    "recommend",
    "replay",
    "save_dataset",
    "search",
    "tokenize_query",
    "university_features",
    "vocabulary",
    "__version__",
]
