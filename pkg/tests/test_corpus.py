import pytest
from hypothesis import given, strategies as st

from roleproj.corpus import (
    RoleAnnotation,
    WordAlignment,
    alignment_to_line,
    intersect_alignments,
    parse_alignment,
    parse_roles,
    parse_tok_line,
    parse_tree,
    sentence_to_tok_line,
    serialize_roles,
    spans_from_tokens,
    tree_to_line,
    yield_of,
)
from roleproj.errors import FormatError, ValidationError


# --- trees ------------------------------------------------------------

def test_parse_two_token_tree():
    tree = parse_tree("(S (NP (NNP Kim)) (VP (VBD promised)))")
    assert len(tree.sentence) == 2
    assert tree.root.span == (0, 1)
    assert tree.sentence.tokens[0].surface == "Kim"
    assert tree.sentence.tokens[1].pos == "VBD"


def test_parse_flat_np():
    tree = parse_tree("(NP (DT the) (NN butter))")
    assert tree.root.label == "NP"
    assert tree.root.span == (0, 1)
    assert sum(1 for n in tree.nodes if n.is_terminal) == 2


def test_unbalanced_tree_is_a_parse_error():
    with pytest.raises(FormatError, match="offset"):
        parse_tree("(S (NP (NNP Kim))")


def test_trailing_material_rejected():
    with pytest.raises(FormatError):
        parse_tree("(S (NN a)) (S (NN b))")


def test_expected_token_count_mismatch():
    with pytest.raises(FormatError, match="expected 3"):
        parse_tree("(NP (DT the) (NN butter))", expected_tokens=3)


def test_yield_of_root_and_preterminal():
    tree = parse_tree("(S (A a) (B b) (C c) (D d) (E e))")
    assert yield_of(tree, tree.root) == frozenset(range(5))
    pre = tree.preterminal_at(3)
    assert yield_of(tree, pre) == {3}


def test_yield_of_figure1_clause(figure1):
    clause = [n for n in figure1.src_tree.nodes if n.span == (2, 5) and not n.is_terminal]
    assert len(clause) == 1
    assert yield_of(figure1.src_tree, clause[0]) == {2, 3, 4, 5}


def test_yields_tile_the_sentence(figure1):
    for tree in (figure1.src_tree, figure1.tgt_tree):
        pre = [n for n in tree.nodes if n.is_terminal]
        covered = sorted(i for n in pre for i in yield_of(tree, n))
        assert covered == list(range(len(tree.sentence)))
        for node in tree.nodes:
            if not node.is_terminal:
                child_union = frozenset(
                    i for c in node.children for i in yield_of(tree, c)
                )
                assert yield_of(tree, node) == child_union


@st.composite
def trees(draw, max_depth=4):
    labels = st.sampled_from(["S", "NP", "VP", "PP", "X"])
    tags = st.sampled_from(["NN", "DT", "VBZ", "JJ"])
    words = st.sampled_from(["cat", "dog", "runs", "the", "green"])

    def node(depth):
        if depth >= max_depth or draw(st.booleans()):
            return f"({draw(tags)} {draw(words)})"
        k = draw(st.integers(1, 3))
        inner = " ".join(node(depth + 1) for _ in range(k))
        return f"({draw(labels)} {inner})"

    return node(0)


@given(trees())
def test_tree_serialization_round_trip(text):
    tree = parse_tree(text)
    assert tree_to_line(tree) == text
    again = parse_tree(tree_to_line(tree))
    assert again == tree


# --- alignments -------------------------------------------------------

def test_parse_alignment_basic():
    al = parse_alignment("0-0 1-1", 2, 2)
    assert al.links == {(0, 0), (1, 1)}


def test_parse_alignment_empty_line():
    assert parse_alignment("", 3, 4).links == frozenset()


def test_parse_alignment_out_of_range():
    with pytest.raises(FormatError):
        parse_alignment("5-0", 3, 3)


def test_parse_alignment_malformed():
    with pytest.raises(FormatError):
        parse_alignment("1:2", 3, 3)


def test_parse_alignment_collapses_duplicates():
    assert len(parse_alignment("0-0 0-0", 1, 1).links) == 1


def test_intersection_examples():
    a = WordAlignment(frozenset({(0, 0), (1, 1)}), 3, 3)
    b = WordAlignment(frozenset({(1, 1), (2, 2)}), 3, 3)
    assert intersect_alignments(a, b).links == {(1, 1)}
    assert intersect_alignments(a, a).links == a.links
    c = WordAlignment(frozenset({(0, 1)}), 2, 2)
    d = WordAlignment(frozenset({(1, 0)}), 2, 2)
    assert intersect_alignments(c, d).links == frozenset()


def test_intersection_length_mismatch():
    a = WordAlignment(frozenset(), 2, 2)
    b = WordAlignment(frozenset(), 2, 3)
    with pytest.raises(ValidationError):
        intersect_alignments(a, b)


links_strategy = st.frozensets(
    st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=10
)


@given(links_strategy, links_strategy)
def test_intersection_is_commutative_and_shrinking(l1, l2):
    a = WordAlignment(l1, 6, 6)
    b = WordAlignment(l2, 6, 6)
    inter = intersect_alignments(a, b)
    assert inter.links <= a.links and inter.links <= b.links
    assert inter.links == intersect_alignments(b, a).links


@given(links_strategy)
def test_alignment_line_round_trip(links):
    al = WordAlignment(links, 6, 6)
    line = alignment_to_line(al)
    assert parse_alignment(line, 6, 6) == al
    assert alignment_to_line(parse_alignment(line, 6, 6)) == line


# --- tok lines --------------------------------------------------------

def test_tok_round_trip():
    line = "Kim_NNP promised_VBD ,_$, pünktlich_ADJD"
    sent = parse_tok_line(line)
    assert sent.tokens[2].surface == ","
    assert sent.tokens[2].pos == "$,"
    assert sentence_to_tok_line(sent) == line


def test_tok_requires_pos():
    with pytest.raises(FormatError):
        parse_tok_line("word")


# --- roles ------------------------------------------------------------

def test_parse_roles_block():
    ann = parse_roles("#0 COMMITMENT 1\nMESSAGE\t2-5")
    assert ann.frame == "COMMITMENT"
    assert ann.predicate == 1
    assert ann.spans_of("MESSAGE") == {(2, 5)}


def test_parse_roles_frame_only():
    ann = parse_roles("#3 GESTURE 0")
    assert ann.roles == ()


def test_overlapping_spans_within_role_rejected():
    with pytest.raises(ValidationError):
        parse_roles("#0 F 0\nA\t1-3,2-4")


def test_unknown_field_rejected():
    with pytest.raises(FormatError):
        parse_roles("#0 F 0\nA\t1-2\textra")


def test_duplicate_role_label_rejected():
    with pytest.raises(ValidationError):
        parse_roles("#0 F 0\nA\t1-3\nA\t5-6")


def test_roles_round_trip_bytes():
    block = "#2 PERCEPTION 1\nPERCEIVER\t0-0\nPHENOMENON\t2-4,6-7"
    ann = parse_roles(block)
    assert serialize_roles(ann, 2) == block
    assert parse_roles(serialize_roles(ann, 2)) == ann


role_spans = st.sets(st.integers(0, 15), min_size=1).map(spans_from_tokens)


@given(
    st.dictionaries(st.sampled_from(["A", "B", "C", "LONG_ROLE"]), role_spans, max_size=4),
    st.integers(0, 15),
)
def test_roles_value_round_trip(roles, predicate):
    ann = RoleAnnotation.make("FRAME", roles, predicate)
    assert parse_roles(serialize_roles(ann, 0)) == ann


def test_spans_from_tokens_normalizes():
    assert spans_from_tokens({3, 4, 5, 7}) == {(3, 5), (7, 7)}
    assert spans_from_tokens(set()) == frozenset()


# --- whole files ---------------------------------------------------------

def test_read_trees_file_handles_missing_trees(tmp_path):
    from roleproj.corpus import read_trees_file

    path = tmp_path / "x.trees"
    path.write_text("(S (NN a))\n-\n(S (NN b))\n")
    trees = read_trees_file(path)
    assert trees[1] is None
    assert trees[0].sentence.tokens[0].surface == "a"


def test_read_roles_file_validates_block_numbering(tmp_path):
    from roleproj.corpus import read_roles_file

    path = tmp_path / "x.roles"
    path.write_text("#0 F 0\n\n#2 G 0\n")
    with pytest.raises(FormatError, match="sentence number"):
        read_roles_file(path)


def test_load_corpus_word_model_inputs_only(tmp_path):
    from roleproj.corpus import load_corpus

    (tmp_path / "s.tok").write_text("a_NN b_VB\nc_NN\n")
    (tmp_path / "t.tok").write_text("x_NN y_VB\nz_NN\n")
    (tmp_path / "al").write_text("0-0 1-1\n0-0\n")
    (tmp_path / "s.roles").write_text("#0 F 0\nA\t0-1\n\n#1 G 0\n")
    corpus = load_corpus(
        align_path=tmp_path / "al",
        src_tok_path=tmp_path / "s.tok",
        tgt_tok_path=tmp_path / "t.tok",
        src_roles_path=tmp_path / "s.roles",
    )
    assert len(corpus) == 2
    assert corpus[0].src_tree is None
    assert corpus[0].src_roles.frame == "F"


def test_load_corpus_rejects_unparallel_files(tmp_path):
    from roleproj.corpus import load_corpus

    (tmp_path / "s.tok").write_text("a_NN\nb_NN\n")
    (tmp_path / "t.tok").write_text("x_NN\n")
    (tmp_path / "al").write_text("0-0\n0-0\n")
    with pytest.raises(ValidationError):
        load_corpus(
            align_path=tmp_path / "al",
            src_tok_path=tmp_path / "s.tok",
            tgt_tok_path=tmp_path / "t.tok",
        )


def test_load_corpus_cross_checks_trees_against_tok(tmp_path):
    from roleproj.corpus import load_corpus

    (tmp_path / "s.trees").write_text("(S (NN a) (VB b))\n")
    (tmp_path / "s.tok").write_text("a_NN wrong_VB\n")
    (tmp_path / "t.tok").write_text("x_NN\n")
    (tmp_path / "al").write_text("0-0\n")
    with pytest.raises(ValidationError, match="disagree"):
        load_corpus(
            align_path=tmp_path / "al",
            src_trees_path=tmp_path / "s.trees",
            src_tok_path=tmp_path / "s.tok",
            tgt_tok_path=tmp_path / "t.tok",
        )
