"""Real-time micropost filtering with an incremental Rocchio profile and
entity-linking feature expansion."""

__version__ = "0.1.0"
