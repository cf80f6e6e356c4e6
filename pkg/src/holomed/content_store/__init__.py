from holomed.content_store.store import COLLECTIONS, Document, DocumentStore, canonical_json
from holomed.content_store.schemas import validate_body, filterable_fields

__all__ = [
    "COLLECTIONS",
    "Document",
    "DocumentStore",
    "canonical_json",
    "filterable_fields",
    "validate_body",
]
