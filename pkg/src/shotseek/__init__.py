"""Collaborative known-item search over video shots, desk scale.

Text-channel indexing with ranked queries and score/color filters, query
history replay, shared label state across user interfaces, and a timed
submission judge, all behind one HTTP/WebSocket gateway.
"""

__version__ = "0.1.0"

from .color import ColorProfile, classify_dominant_color
from .index import build_index, load_index, save_index
from .manifest import CollectionManifest, ShotDescriptor, TextDocument, parse_manifest
from .search import QuerySpec, RankedResult, execute_query
from .text import tokenize

__all__ = [
    "ColorProfile",
    "CollectionManifest",
    "QuerySpec",
    "RankedResult",
    "ShotDescriptor",
    "TextDocument",
    "build_index",
    "classify_dominant_color",
    "execute_query",
    "load_index",
    "parse_manifest",
    "save_index",
    "tokenize",
    "__version__",
]
