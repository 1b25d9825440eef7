"""Projection of labeled spans across word-aligned parallel sentences.

Semantic alignments between source and target units (words or
constituents) are computed as minimum-weight bipartite subgraphs under
three constraint families (perfect matching, edge cover, total alignment);
projected annotations are scored exact-match against gold with
approximate-randomization significance testing.
"""

__version__ = "0.1.0"
