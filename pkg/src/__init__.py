"""Exact-arithmetic engine for separated differential graded Lie algebra models."""

__all__ = [
    "algebra",
    "cli",
    "config",
    "dgl",
    "freeness",
    "linalg",
    "modelfile",
    "separation",
    "separator",
    "series",
    "utils",
    "zoo",
]
