"""Data model for bi-sentences and parsers/serializers for the toolkit's file formats.

Four line-oriented UTF-8 text formats, all parallel by line/block number:

``*.tok``
    One sentence per line, tokens as ``surface_POS`` separated by single
    spaces.  The last underscore separates surface from tag.

``*.trees``
    One bracketed constituency tree per line, ``(LABEL (POS word) ...)``.
    The literal line ``-`` means "no tree for this sentence".

``*.align``
    One line of space-separated ``i-j`` word links per sentence, 0-based,
    source index first.  An empty line is an empty alignment.

``*.roles``
    Blocks separated by one blank line.  First line of a block is
    ``#<sentence-no> <frame-name> <predicate-index>``; each following line
    is ``ROLE<TAB>lo-hi[,lo-hi...]`` with inclusive 0-based token spans.
    A predicate index of -1 means "no known predicate position".

Token indexing is 0-based everywhere and spans are inclusive intervals.
Serializers emit a canonical form (sorted links, alphabetically sorted role
labels, spans sorted by start); parsing a canonical file and re-serializing
it reproduces the input byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ConfigError, FormatError, ValidationError

Span = tuple[int, int]


@dataclass(frozen=True)
class Token:
    index: int
    surface: str
    pos: str


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValidationError("sentence must contain at least one token")
        for k, tok in enumerate(self.tokens):
            if tok.index != k:
                raise ValidationError(
                    f"token index {tok.index} at position {k}: indices must be 0..n-1"
                )

    def __len__(self):
        return len(self.tokens)

    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)


@dataclass(frozen=True)
class Constituent:
    """One tree node. ``span`` is an inclusive token interval, None for empty nodes."""

    id: int
    label: str
    span: Span | None
    children: tuple[int, ...]
    is_terminal: bool
    is_empty: bool = False


@dataclass(frozen=True)
class ParseTree:
    sentence: Sentence
    nodes: tuple[Constituent, ...]  # preorder, nodes[i].id == i, root is nodes[0]
    parents: tuple[int | None, ...]

    @property
    def root(self) -> Constituent:
        return self.nodes[0]

    def node(self, node_id: int) -> Constituent:
        return self.nodes[node_id]

    def node_ids(self) -> range:
        return range(len(self.nodes))

    def parent(self, node_id: int) -> int | None:
        return self.parents[node_id]

    def ancestors(self, node_id: int) -> list[int]:
        """Parent chain from immediate parent up to the root."""
        chain = []
        p = self.parents[node_id]
        while p is not None:
            chain.append(p)
            p = self.parents[p]
        return chain

    def preterminal_at(self, token_index: int) -> int:
        for node in self.nodes:
            if node.is_terminal and node.span == (token_index, token_index):
                return node.id
        raise ValidationError(f"no preterminal covers token {token_index}")


def yield_of(tree: ParseTree, node: Constituent | int) -> frozenset[int]:
    """Token indices dominated by a node; the empty set for an empty node."""
    if isinstance(node, int):
        node = tree.node(node)
    if node.span is None:
        return frozenset()
    lo, hi = node.span
    return frozenset(range(lo, hi + 1))


@dataclass(frozen=True)
class WordAlignment:
    links: frozenset[tuple[int, int]]
    n_src: int
    n_tgt: int

    def __post_init__(self):
        for s, t in self.links:
            if not (0 <= s < self.n_src and 0 <= t < self.n_tgt):
                raise ValidationError(
                    f"link {s}-{t} out of range for lengths {self.n_src}/{self.n_tgt}"
                )

    def image(self, src_tokens) -> frozenset[int]:
        """Target tokens linked to any of the given source tokens."""
        src_tokens = set(src_tokens)
        return frozenset(t for s, t in self.links if s in src_tokens)

    def preimage(self, tgt_tokens) -> frozenset[int]:
        tgt_tokens = set(tgt_tokens)
        return frozenset(s for s, t in self.links if t in tgt_tokens)

    def aligned_src(self) -> frozenset[int]:
        return frozenset(s for s, _ in self.links)

    def aligned_tgt(self) -> frozenset[int]:
        return frozenset(t for _, t in self.links)


def intersect_alignments(fwd: WordAlignment, bwd: WordAlignment) -> WordAlignment:
    """Intersection heuristic: keep only links present in both directions.

    ``bwd`` must already be in source-target index orientation.
    """
    if (fwd.n_src, fwd.n_tgt) != (bwd.n_src, bwd.n_tgt):
        raise ValidationError(
            f"length mismatch: {fwd.n_src}/{fwd.n_tgt} vs {bwd.n_src}/{bwd.n_tgt}"
        )
    return WordAlignment(fwd.links & bwd.links, fwd.n_src, fwd.n_tgt)


@dataclass(frozen=True, eq=True)
class RoleAnnotation:
    """One frame per sentence plus a mapping from role label to a set of spans."""

    frame: str
    roles: tuple[tuple[str, frozenset[Span]], ...]
    predicate: int

    def __post_init__(self):
        labels = [label for label, _ in self.roles]
        if len(labels) != len(set(labels)):
            raise ValidationError(f"duplicate role labels in frame {self.frame}")
        for label, spans in self.roles:
            ordered = sorted(spans)
            for (lo, hi) in ordered:
                if lo > hi or lo < 0:
                    raise ValidationError(f"bad span {lo}-{hi} for role {label}")
            for (_, hi), (lo2, _) in zip(ordered, ordered[1:]):
                if lo2 <= hi:
                    raise ValidationError(f"overlapping spans within role {label}")

    @classmethod
    def make(cls, frame: str, roles: dict[str, set[Span]], predicate: int) -> "RoleAnnotation":
        items = tuple(sorted((label, frozenset(spans)) for label, spans in roles.items()))
        return cls(frame, items, predicate)

    def role_labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.roles)

    def spans_of(self, label: str) -> frozenset[Span]:
        for lab, spans in self.roles:
            if lab == label:
                return spans
        raise KeyError(label)

    def tokens_of(self, label: str) -> frozenset[int]:
        return frozenset(
            i for lo, hi in self.spans_of(label) for i in range(lo, hi + 1)
        )

    def max_index(self) -> int:
        top = self.predicate
        for _, spans in self.roles:
            for _, hi in spans:
                top = max(top, hi)
        return top


@dataclass(frozen=True)
class BiSentence:
    src: Sentence
    tgt: Sentence
    alignment: WordAlignment
    src_tree: ParseTree | None = None
    tgt_tree: ParseTree | None = None
    src_roles: RoleAnnotation | None = None
    tgt_roles: RoleAnnotation | None = None

    def __post_init__(self):
        if self.alignment.n_src != len(self.src) or self.alignment.n_tgt != len(self.tgt):
            raise ValidationError(
                "alignment lengths do not match sentence lengths: "
                f"{self.alignment.n_src}/{self.alignment.n_tgt} vs {len(self.src)}/{len(self.tgt)}"
            )
        for tree, sent, side in ((self.src_tree, self.src, "source"),
                                 (self.tgt_tree, self.tgt, "target")):
            if tree is not None and tree.sentence.surfaces() != sent.surfaces():
                raise ValidationError(f"{side} tree tokens do not match the sentence")
        for ann, sent, side in ((self.src_roles, self.src, "source"),
                                (self.tgt_roles, self.tgt, "target")):
            if ann is not None and ann.max_index() >= len(sent):
                raise ValidationError(f"{side} role annotation index out of range")


# ---------------------------------------------------------------------------
# Bracketed trees


def _tokenize_brackets(line: str):
    out = []
    i, n = 0, len(line)
    while i < n:
        c = line[i]
        if c in "()":
            out.append((c, c, i))
            i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < n and line[j] not in "()" and not line[j].isspace():
                j += 1
            out.append(("atom", line[i:j], i))
            i = j
    return out


def parse_tree(line: str, expected_tokens: int | None = None) -> ParseTree:
    """Parse one Penn-style bracketed tree line into a ParseTree.

    Raises FormatError with a character offset for unbalanced or malformed
    bracketings, and when the token count disagrees with ``expected_tokens``.
    """
    toks = _tokenize_brackets(line)
    if not toks:
        raise FormatError("empty tree line")
    pos = 0

    def parse_node():
        nonlocal pos
        if pos >= len(toks):
            raise FormatError(f"unbalanced brackets: unexpected end of line at offset {len(line)}")
        kind, text, off = toks[pos]
        if kind != "(":
            raise FormatError(f"expected '(' at offset {off}")
        pos += 1
        if pos >= len(toks) or toks[pos][0] != "atom":
            raise FormatError(f"expected node label at offset {toks[pos - 1][2] + 1}")
        label = toks[pos][1]
        pos += 1
        children = []
        word = None
        while pos < len(toks) and toks[pos][0] != ")":
            kind, text, off = toks[pos]
            if kind == "atom":
                if children:
                    raise FormatError(f"word after child constituent at offset {off}")
                if word is not None:
                    raise FormatError(f"second word under one preterminal at offset {off}")
                word = text
                pos += 1
            else:
                if word is not None:
                    raise FormatError(f"child constituent after word at offset {off}")
                children.append(parse_node())
        if pos >= len(toks):
            raise FormatError(f"unbalanced brackets: missing ')' at offset {len(line)}")
        pos += 1  # consume ')'
        if word is None and not children:
            raise FormatError(f"empty constituent '{label}'")
        return (label, word, children)

    nested = parse_node()
    if pos != len(toks):
        raise FormatError(f"trailing material at offset {toks[pos][2]}")

    nodes: list[Constituent] = []
    parents: list[int | None] = []
    tokens: list[Token] = []

    def build(tree, parent_id):
        label, word, children = tree
        node_id = len(nodes)
        nodes.append(None)  # placeholder, filled after spans are known
        parents.append(parent_id)
        if word is not None:
            k = len(tokens)
            tokens.append(Token(k, word, label))
            nodes[node_id] = Constituent(node_id, label, (k, k), (), True)
            return node_id
        child_ids = tuple(build(c, node_id) for c in children)
        lo = nodes[child_ids[0]].span[0]
        hi = nodes[child_ids[-1]].span[1]
        nodes[node_id] = Constituent(node_id, label, (lo, hi), child_ids, False)
        return node_id

    build(nested, None)
    if expected_tokens is not None and len(tokens) != expected_tokens:
        raise FormatError(
            f"tree has {len(tokens)} tokens, expected {expected_tokens}"
        )
    return ParseTree(Sentence(tuple(tokens)), tuple(nodes), tuple(parents))


def tree_to_line(tree: ParseTree) -> str:
    """Serialize a tree back to canonical single-space bracketed form."""

    def render(node_id: int) -> str:
        node = tree.node(node_id)
        if node.is_terminal:
            word = tree.sentence.tokens[node.span[0]].surface
            return f"({node.label} {word})"
        inner = " ".join(render(c) for c in node.children)
        return f"({node.label} {inner})"

    return render(0)


# ---------------------------------------------------------------------------
# Word alignments

_LINK_RE = re.compile(r"^(\d+)-(\d+)$")


def parse_alignment(line: str, n_src: int, n_tgt: int) -> WordAlignment:
    """Parse a Pharaoh-style line of ``i-j`` pairs; duplicates collapse."""
    links = set()
    for part in line.split():
        m = _LINK_RE.match(part)
        if not m:
            raise FormatError(f"malformed alignment pair {part!r}")
        s, t = int(m.group(1)), int(m.group(2))
        if s >= n_src or t >= n_tgt:
            raise FormatError(
                f"alignment link {s}-{t} out of range for lengths {n_src}/{n_tgt}"
            )
        links.add((s, t))
    return WordAlignment(frozenset(links), n_src, n_tgt)


def alignment_to_line(al: WordAlignment) -> str:
    return " ".join(f"{s}-{t}" for s, t in sorted(al.links))


# ---------------------------------------------------------------------------
# Tokenized sentences


def parse_tok_line(line: str) -> Sentence:
    tokens = []
    for k, item in enumerate(line.split(" ")):
        if not item:
            raise FormatError("empty token (double space?) in .tok line")
        surface, sep, pos = item.rpartition("_")
        if not sep or not surface or not pos:
            raise FormatError(f"token {item!r} is not of the form surface_POS")
        tokens.append(Token(k, surface, pos))
    return Sentence(tuple(tokens))


def sentence_to_tok_line(sentence: Sentence) -> str:
    return " ".join(f"{t.surface}_{t.pos}" for t in sentence.tokens)


# ---------------------------------------------------------------------------
# Role annotations

_HEADER_RE = re.compile(r"^#(\d+) (\S+) (-?\d+)$")
_SPAN_RE = re.compile(r"^(\d+)-(\d+)$")


def parse_roles(block: str) -> RoleAnnotation:
    """Parse one .roles block (header line plus zero or more role lines)."""
    _, ann = parse_roles_block(block)
    return ann


def parse_roles_block(block: str) -> tuple[int, RoleAnnotation]:
    lines = [ln for ln in block.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty roles block")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise FormatError(f"bad roles header {lines[0]!r}")
    sent_no, frame, predicate = int(m.group(1)), m.group(2), int(m.group(3))
    roles: dict[str, set[Span]] = {}
    for line in lines[1:]:
        fields = line.split("\t")
        if len(fields) != 2:
            raise FormatError(f"unknown field layout in role line {line!r}")
        label, span_text = fields
        if label in roles:
            raise ValidationError(f"duplicate role label {label!r}")
        spans = set()
        for piece in span_text.split(","):
            sm = _SPAN_RE.match(piece)
            if not sm:
                raise FormatError(f"bad span {piece!r} in role line {line!r}")
            spans.add((int(sm.group(1)), int(sm.group(2))))
        roles[label] = spans
    return sent_no, RoleAnnotation.make(frame, roles, predicate)


def serialize_roles(ann: RoleAnnotation, sentence_no: int = 0) -> str:
    """Canonical block text: labels alphabetical, spans sorted by start."""
    lines = [f"#{sentence_no} {ann.frame} {ann.predicate}"]
    for label, spans in sorted(ann.roles):
        span_text = ",".join(f"{lo}-{hi}" for lo, hi in sorted(spans))
        lines.append(f"{label}\t{span_text}")
    return "\n".join(lines)


def spans_from_tokens(tokens) -> frozenset[Span]:
    """Normalize a token set to its maximal disjoint inclusive intervals."""
    ordered = sorted(tokens)
    spans = []
    for i in ordered:
        if spans and i == spans[-1][1] + 1:
            spans[-1][1] = i
        else:
            spans.append([i, i])
    return frozenset((lo, hi) for lo, hi in spans)


# ---------------------------------------------------------------------------
# Whole-file readers/writers


def read_trees_file(path) -> list[ParseTree | None]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            line = line.rstrip("\n")
            if line == "-":
                out.append(None)
            else:
                try:
                    out.append(parse_tree(line))
                except FormatError as exc:
                    raise FormatError(f"{path}:{lineno + 1}: {exc}") from None
    return out


def write_trees_file(path, trees) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for tree in trees:
            fh.write("-" if tree is None else tree_to_line(tree))
            fh.write("\n")


def read_tok_file(path) -> list[Sentence]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            try:
                out.append(parse_tok_line(line.rstrip("\n")))
            except FormatError as exc:
                raise FormatError(f"{path}:{lineno + 1}: {exc}") from None
    return out


def read_align_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def read_roles_file(path) -> list[RoleAnnotation]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    blocks = [b for b in re.split(r"\n\s*\n", text) if b.strip()]
    anns = []
    for k, block in enumerate(blocks):
        sent_no, ann = parse_roles_block(block)
        if sent_no != k:
            raise FormatError(f"{path}: block {k} carries sentence number {sent_no}")
        anns.append(ann)
    return anns


def write_roles_file(path, annotations) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(roles_file_text(annotations))


def roles_file_text(annotations) -> str:
    return "\n\n".join(
        serialize_roles(ann, k) for k, ann in enumerate(annotations)
    ) + "\n"


def load_corpus(
    *,
    align_path,
    src_trees_path=None,
    src_tok_path=None,
    tgt_trees_path=None,
    tgt_tok_path=None,
    src_roles_path=None,
    tgt_roles_path=None,
) -> list[BiSentence]:
    """Assemble parallel files into BiSentence records.

    Each side needs a .trees or a .tok file (or both, in which case they
    must agree).  All provided files must be parallel; mismatched record
    counts raise ValidationError.
    """

    def side(trees_path, tok_path, name):
        trees = read_trees_file(trees_path) if trees_path else None
        toks = read_tok_file(tok_path) if tok_path else None
        if trees is None and toks is None:
            raise ConfigError(f"no {name}-side sentences: need a .trees or .tok file")
        if trees is not None and toks is not None:
            if len(trees) != len(toks):
                raise ValidationError(f"{name} trees/tok files are not parallel")
            for k, (tree, sent) in enumerate(zip(trees, toks)):
                if tree is not None and tree.sentence != sent:
                    raise ValidationError(
                        f"{name} tree and tok disagree for sentence {k}"
                    )
        n = len(trees) if trees is not None else len(toks)
        sentences = []
        for k in range(n):
            tree = trees[k] if trees is not None else None
            if tree is not None:
                sentences.append(tree.sentence)
            elif toks is not None:
                sentences.append(toks[k])
            else:
                raise ValidationError(f"{name} sentence {k} has neither tree nor tokens")
        return sentences, (trees if trees is not None else [None] * n)

    src_sents, src_trees = side(src_trees_path, src_tok_path, "source")
    tgt_sents, tgt_trees = side(tgt_trees_path, tgt_tok_path, "target")
    if len(src_sents) != len(tgt_sents):
        raise ValidationError("source and target files are not parallel")
    n = len(src_sents)

    align_lines = read_align_lines(align_path)
    if len(align_lines) != n:
        raise ValidationError("alignment file is not parallel with the sentences")

    src_roles = read_roles_file(src_roles_path) if src_roles_path else [None] * n
    tgt_roles = read_roles_file(tgt_roles_path) if tgt_roles_path else [None] * n
    if len(src_roles) != n or len(tgt_roles) != n:
        raise ValidationError("roles file is not parallel with the sentences")

    out = []
    for k in range(n):
        al = parse_alignment(align_lines[k], len(src_sents[k]), len(tgt_sents[k]))
        out.append(
            BiSentence(
                src=src_sents[k],
                tgt=tgt_sents[k],
                alignment=al,
                src_tree=src_trees[k],
                tgt_tree=tgt_trees[k],
                src_roles=src_roles[k],
                tgt_roles=tgt_roles[k],
            )
        )
    return out
