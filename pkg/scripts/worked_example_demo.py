#!/usr/bin/env python3
"""Run every projection model on the bundled worked-example bi-sentence and
print the resulting annotations side by side, plus the constituent alignment
weight table for the perfect-matching model."""

from roleproj import fixtures
from roleproj.corpus import serialize_roles
from roleproj.matcher import build_graph, dump_weight_table, solve_perfect_matching
from roleproj.pipeline import PipelineConfig, run_pipeline
from roleproj.similarity import UnitSimilarity, full_view


def main():
    b = fixtures.figure1_bisentence()
    print("source:", " ".join(t.surface for t in b.src.tokens))
    print("target:", " ".join(t.surface for t in b.tgt.tokens))
    print("links: ", " ".join(f"{s}-{t}" for s, t in sorted(b.alignment.links)))
    print("gold:  ", serialize_roles(b.tgt_roles).replace("\n", "  "))
    print()

    configs = [
        PipelineConfig(model="word"),
        PipelineConfig(model="word", fill_gaps=True),
        PipelineConfig(model="perfect"),
        PipelineConfig(model="perfect", filters=frozenset({"na"})),
        PipelineConfig(model="edgecover"),
        PipelineConfig(model="edgecover", filters=frozenset({"arg"})),
        PipelineConfig(model="total"),
    ]
    for cfg in configs:
        out = run_pipeline(b, cfg)
        name = cfg.model + ("+fill" if cfg.fill_gaps else "")
        filt = ",".join(sorted(cfg.filters)) or "none"
        print(f"{name:12s} filter={filt:5s} ->",
              serialize_roles(out.annotation).replace("\n", "  "))

    print("\nweight table (perfect matching, no filter); chosen cells marked *:")
    ctx = UnitSimilarity(full_view(b), b.src_tree, b.tgt_tree)
    m = ctx.matrix(list(b.src_tree.node_ids()), list(b.tgt_tree.node_ids()))
    g = build_graph(m, 1e6, "perfect")
    print(dump_weight_table(g, solve_perfect_matching(g)))


if __name__ == "__main__":
    main()
