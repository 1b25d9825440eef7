"""Bundled demonstration data: a single worked-example bi-sentence and a
five-sentence toy corpus.

The worked example is the promise/versprechen pair whose noisy alignment
misses both "be" and "kommen" and links "time" to "pünktlich": word-level
projection of the MESSAGE role lands on the truncated span "pünktlich zu",
while constituent-level projection recovers the full clause "pünktlich zu
kommen".  `emit` writes all files (inputs, gold, and expected outputs) into
a directory; the acceptance tests compare pipeline output against the
expected files byte for byte.
"""

from __future__ import annotations

import os

from .corpus import BiSentence, parse_alignment, parse_roles, parse_tree

FIGURE1 = {
    "src.tok": "Kim_NNP promised_VBD to_TO be_VB on_IN time_NN\n",
    "tgt.tok": "Kim_NE versprach_VVFIN ,_$, pünktlich_ADJD zu_PTKZU kommen_VVINF\n",
    "src.trees": "(S (NP (NNP Kim)) (VP (VBD promised) "
    "(S (TO to) (VP (VB be) (PP (IN on) (NN time))))))\n",
    "tgt.trees": "(S (NP (NE Kim)) (VP (VVFIN versprach) ($, ,) "
    "(S (ADJD pünktlich) (PTKZU zu) (VVINF kommen))))\n",
    "align": "0-0 1-1 2-4 5-3\n",
    "src.roles": "#0 COMMITMENT 1\nMESSAGE\t2-5\nSPEAKER\t0-0\n",
    "tgt.roles": "#0 COMMITMENT 1\nMESSAGE\t3-5\nSPEAKER\t0-0\n",
    # expected pipeline outputs
    "expected_perfect.roles": "#0 COMMITMENT 1\nMESSAGE\t3-5\nSPEAKER\t0-0\n",
    "expected_word_fill.roles": "#0 COMMITMENT 1\nMESSAGE\t3-4\nSPEAKER\t0-0\n",
}

_TOY_SRC_TREES = [
    "(S (NP (NNP Kim)) (VP (VBD promised) (S (TO to) (VP (VB be) (PP (IN on) (NN time))))))",
    "(S (NP (DT The) (NN cat)) (VP (VBZ sleeps)))",
    "(S (NP (NNP Anna)) (VP (VBD saw) (NP (DT the) (JJ small) (NN dog))))",
    "(S (NP (PRP They)) (VP (VBP need) (NP (DT an) (NN opportunity) (S (TO to) (VB talk)))))",
    "(S (NP (PRP She)) (VP (VBD nodded) (ADVP (RB quickly))))",
]

_TOY_TGT_TREES = [
    "(S (NP (NE Kim)) (VP (VVFIN versprach) ($, ,) (S (ADJD pünktlich) (PTKZU zu) (VVINF kommen))))",
    "(S (NP (ART Die) (NN Katze)) (VVFIN schläft))",
    "(S (NP (NE Anna)) (VVFIN sah) (NP (ART den) (ADJA kleinen) (NN Hund)))",
    "(S (NP (PPER Sie)) (VVFIN brauchen) (NP (ART eine) (NN Chance)) (S ($, ,) (PTKZU zu) (VVINF reden)))",
    "(S (NP (PPER Sie)) (VVFIN nickte))",
]

_TOY_ALIGN = [
    "0-0 1-1 2-4 5-3",
    "0-0 1-1 2-2",
    "0-0 1-1 2-2 3-3 4-4",
    "0-0 1-1 2-2 3-3 4-5 5-6",
    "0-0 1-1",
]

_TOY_SRC_ROLES = [
    "#0 COMMITMENT 1\nMESSAGE\t2-5\nSPEAKER\t0-0",
    "#1 SLEEP 2\nSLEEPER\t0-1",
    "#2 PERCEPTION 1\nPERCEIVER\t0-0\nPHENOMENON\t2-4",
    "#3 NEEDING 1\nREQUIREMENT\t2-5\nREQUIRER\t0-0",
    "#4 GESTURE 1\nAGENT\t0-0\nMANNER\t2-2",
]

_TOY_TGT_ROLES = [
    "#0 COMMITMENT 1\nMESSAGE\t3-5\nSPEAKER\t0-0",
    "#1 SLEEP 2\nSLEEPER\t0-1",
    "#2 PERCEPTION 1\nPERCEIVER\t0-0\nPHENOMENON\t2-4",
    "#3 NEEDING 1\nREQUIREMENT\t2-6\nREQUIRER\t0-0",
    "#4 GESTURE 1\nAGENT\t0-0",
]

# A fixed system-output file over the toy corpus with planned errors, for
# hand-checked evaluation: 4 exact hits, 3 spurious roles, 3 missed roles.
_TOY_PRED_ROLES = [
    "#0 COMMITMENT 1\nMESSAGE\t3-5\nSPEAKER\t0-0",
    "#1 SLEEP 2\nSLEEPER\t0-0",
    "#2 PERCEPTION 1\nPERCEIVER\t0-0\nPHENOMENON\t2-3",
    "#3 NEEDING 1\nEXTRA\t4-6\nREQUIRER\t0-0",
    "#4 GESTURE 1",
]

TOY = {
    "src.trees": "\n".join(_TOY_SRC_TREES) + "\n",
    "tgt.trees": "\n".join(_TOY_TGT_TREES) + "\n",
    "align": "\n".join(_TOY_ALIGN) + "\n",
    "src.roles": "\n\n".join(_TOY_SRC_ROLES) + "\n",
    "tgt.roles": "\n\n".join(_TOY_TGT_ROLES) + "\n",
    "pred.roles": "\n\n".join(_TOY_PRED_ROLES) + "\n",
}


def figure1_bisentence():
    src_tree = parse_tree(FIGURE1["src.trees"].strip())
    tgt_tree = parse_tree(FIGURE1["tgt.trees"].strip())
    alignment = parse_alignment(
        FIGURE1["align"].strip(), len(src_tree.sentence), len(tgt_tree.sentence)
    )
    return BiSentence(
        src=src_tree.sentence,
        tgt=tgt_tree.sentence,
        alignment=alignment,
        src_tree=src_tree,
        tgt_tree=tgt_tree,
        src_roles=parse_roles(FIGURE1["src.roles"]),
        tgt_roles=parse_roles(FIGURE1["tgt.roles"]),
    )


def toy_bisentences():
    out = []
    for src_line, tgt_line, al_line, src_block, tgt_block in zip(
        _TOY_SRC_TREES, _TOY_TGT_TREES, _TOY_ALIGN, _TOY_SRC_ROLES, _TOY_TGT_ROLES
    ):
        src_tree = parse_tree(src_line)
        tgt_tree = parse_tree(tgt_line)
        alignment = parse_alignment(
            al_line, len(src_tree.sentence), len(tgt_tree.sentence)
        )
        out.append(
            BiSentence(
                src=src_tree.sentence,
                tgt=tgt_tree.sentence,
                alignment=alignment,
                src_tree=src_tree,
                tgt_tree=tgt_tree,
                src_roles=parse_roles(src_block),
                tgt_roles=parse_roles(tgt_block),
            )
        )
    return out


def emit(out_dir) -> list[str]:
    """Write both fixture sets under out_dir/figure1 and out_dir/toy."""
    written = []
    for name, blob in (("figure1", FIGURE1), ("toy", TOY)):
        directory = os.path.join(out_dir, name)
        os.makedirs(directory, exist_ok=True)
        for filename, content in sorted(blob.items()):
            path = os.path.join(directory, filename)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(content)
            written.append(path)
    return written
