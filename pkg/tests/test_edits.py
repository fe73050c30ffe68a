import io
import random

import pytest

from zhcorrect import (
    Edit,
    EditKind,
    EditSet,
    FormatError,
    MatchCounts,
    MergePolicy,
    StructuralError,
    UsageError,
    align,
    apply_edits,
    classify_kind,
    extract_edits,
    format_edit_records,
    join_units,
    match_edits,
    parse_edit_file,
    to_units,
)

_CJK = [chr(c) for c in range(0x4E00, 0x4E00 + 80)]


def _corrupt(rng, text):
    units = list(text)
    for _ in range(rng.randint(0, 4)):
        if not units:
            break
        roll, i = rng.random(), rng.randrange(len(units))
        if roll < 0.4:
            units[i] = rng.choice(_CJK)
        elif roll < 0.7:
            units.insert(i, rng.choice(_CJK))
        else:
            del units[i]
    return "".join(units)


def test_classify_kind():
    assert classify_kind(2, 2, 1) is EditKind.INSERT
    assert classify_kind(2, 3, 0) is EditKind.DELETE
    assert classify_kind(2, 3, 1) is EditKind.SUBSTITUTE
    assert classify_kind(2, 3, 2) is EditKind.COMPLEX


def test_edit_validation():
    with pytest.raises(StructuralError):
        Edit.make(3, 2, to_units("x"))
    with pytest.raises(StructuralError):
        Edit.make(1, 1, to_units(""))  # no-op
    with pytest.raises(StructuralError):
        Edit(0, 1, to_units("x"), EditKind.DELETE)  # kind mismatch


def test_editset_invariants():
    e1 = Edit.make(0, 2, to_units("x"))
    e2 = Edit.make(1, 3, to_units("y"))
    with pytest.raises(StructuralError):
        EditSet("s", 0, (e1, e2))  # overlap
    i1 = Edit.make(2, 2, to_units("x"))
    i2 = Edit.make(2, 2, to_units("y"))
    with pytest.raises(StructuralError):
        EditSet("s", 0, (i1, i2))  # two insertions at one point


def test_extract_identity_is_empty():
    path = align(to_units("我爱北京"), to_units("我爱北京"))
    assert len(extract_edits(path)) == 0


def test_extract_single_deletion():
    path = align(to_units("他是学生生"), to_units("他是学生"))
    edit_set = extract_edits(path)
    assert len(edit_set) == 1
    edit = edit_set.edits[0]
    assert (edit.start, edit.end) == (4, 5)
    assert edit.replacement.text == ""
    assert edit.kind is EditKind.DELETE


def test_adjacent_sub_ins_merges_to_complex():
    path = align(to_units("他好"), to_units("你们好"))
    merged = extract_edits(path, MergePolicy.MAXIMAL_RUNS)
    assert len(merged) == 1
    edit = merged.edits[0]
    assert (edit.start, edit.end) == (0, 1)
    assert edit.replacement.text == "你们"
    assert edit.kind is EditKind.COMPLEX

    separate = extract_edits(path, MergePolicy.NONE)
    assert [(e.start, e.end, e.replacement.text) for e in separate.edits] == [
        (0, 1, "你"),
        (1, 1, "们"),
    ]


def test_none_policy_coalesces_same_point_insertions():
    path = align(to_units("a"), to_units("xya"))
    separate = extract_edits(path, MergePolicy.NONE)
    assert [(e.start, e.end, e.replacement.text) for e in separate.edits] == [(0, 0, "xy")]


def test_apply_edits():
    src = to_units("他是学生生")
    assert apply_edits(src, EditSet("s", 0, ())).text == "他是学生生"
    deletion = EditSet("s", 0, (Edit.make(4, 5, to_units("")),))
    assert apply_edits(src, deletion).text == "他是学生"


def test_apply_rejects_out_of_range():
    src = to_units("abc")
    bad = EditSet("s", 0, (Edit.make(2, 5, to_units("")),))
    with pytest.raises(StructuralError):
        apply_edits(src, bad)


def test_roundtrip_random_pairs_both_policies():
    rng = random.Random(97)
    for _ in range(300):
        clean = "".join(rng.choice(_CJK) for _ in range(rng.randint(0, 10)))
        src = to_units(_corrupt(rng, clean))
        tgt = to_units(clean)
        path = align(src, tgt)
        for policy in MergePolicy:
            assert apply_edits(src, extract_edits(path, policy)).units == tgt.units


def test_match_edits_counts():
    e1 = Edit.make(0, 1, to_units("甲"))
    e2 = Edit.make(2, 3, to_units("乙"))
    e3 = Edit.make(4, 5, to_units("丙"))
    e4 = Edit.make(6, 7, to_units("丁"))
    gold3 = EditSet("s", 0, (e1, e2, e3))
    assert match_edits(gold3, gold3) == MatchCounts(3, 0, 0)

    hyp = EditSet("s", 0, (e1, e2))
    gold = EditSet("s", 1, (e3, e4))
    assert match_edits(hyp, gold) == MatchCounts(0, 2, 2)

    hyp = EditSet("s", 0, (e1, e2))
    gold = EditSet("s", 0, (e1, e3))
    assert match_edits(hyp, gold) == MatchCounts(1, 1, 1)


def test_match_edits_source_mismatch():
    a = EditSet("s1", 0, ())
    b = EditSet("s2", 0, ())
    with pytest.raises(UsageError):
        match_edits(a, b)


def test_match_self_never_has_errors():
    rng = random.Random(5)
    for _ in range(50):
        clean = "".join(rng.choice(_CJK) for _ in range(rng.randint(1, 8)))
        src = to_units(_corrupt(rng, clean))
        edit_set = extract_edits(align(src, to_units(clean)))
        counts = match_edits(edit_set, edit_set)
        assert (counts.fp, counts.fn) == (0, 0)


def test_matchcounts_addition():
    assert MatchCounts(1, 2, 3) + MatchCounts(4, 5, 6) == MatchCounts(5, 7, 9)


def test_format_deletion_record_exact_bytes():
    source = to_units("他是学生生")
    refs = [EditSet("0", 0, (Edit.make(4, 5, to_units("")),))]
    text = format_edit_records([(source, refs)])
    assert text == "S 他是学生生\nA 4 5|||del|||-NONE-|||0\n\n"


def test_format_clean_record_has_no_a_lines():
    text = format_edit_records([(to_units("他是学生"), [EditSet("0", 0, ())])])
    assert text == "S 他是学生\n\n"


def test_format_two_references_carry_ref_ids():
    source = to_units("天汽很号")
    refs = [
        EditSet("0", 0, (Edit.make(1, 2, to_units("气")), Edit.make(3, 4, to_units("好")))),
        EditSet("0", 1, (Edit.make(1, 2, to_units("气")),)),
    ]
    text = format_edit_records([(source, refs)])
    assert "|||0\n" in text and "|||1\n" in text


def test_parse_edit_file_roundtrip():
    source = to_units("天汽很号")
    refs = (
        EditSet("0", 0, (Edit.make(1, 2, to_units("气")), Edit.make(3, 4, to_units("好")))),
        EditSet("0", 1, (Edit.make(1, 2, to_units("氣")),)),
    )
    text = format_edit_records([(source, refs)])
    parsed = parse_edit_file(io.StringIO(text))
    assert len(parsed) == 1
    record = parsed.records[0]
    assert record.source.units == source.units
    assert record.refs == refs
    # file-level fixed point
    assert format_edit_records([(record.source, record.refs)]) == text


def test_parse_clean_record_yields_implicit_empty_reference():
    parsed = parse_edit_file(io.StringIO("S 他是学生\n\n"))
    record = parsed.records[0]
    assert len(record.refs) == 1
    assert record.refs[0].edits == ()


def test_parse_handles_missing_final_blank_line():
    parsed = parse_edit_file(io.StringIO("S 学生生\nA 2 3|||del|||-NONE-|||0"))
    assert len(parsed) == 1


def test_parse_sorts_out_of_order_a_lines():
    text = "S 天汽很号\nA 3 4|||sub|||好|||0\nA 1 2|||sub|||气|||0\n\n"
    record = parse_edit_file(io.StringIO(text)).records[0]
    assert [(e.start, e.end) for e in record.refs[0].edits] == [(1, 2), (3, 4)]


def test_parse_errors_carry_line_numbers():
    cases = [
        ("A 0 1|||sub|||x|||0\n", "line 1"),
        ("S 好\nA 0 1|||sub|||x\n", "line 2"),
        ("S 好\nA z 1|||sub|||x|||0\n", "line 2"),
        ("S 好\nX nonsense\n", "line 2"),
        ("S 好\nS 再\n", "line 2"),
    ]
    for text, needle in cases:
        with pytest.raises(FormatError) as err:
            parse_edit_file(io.StringIO(text))
        assert needle in str(err.value)


def test_parse_rejects_overlapping_edits_as_format_error():
    text = "S 四字句子\nA 0 2|||sub|||甲|||0\nA 1 3|||sub|||乙|||0\n\n"
    with pytest.raises(FormatError) as err:
        parse_edit_file(io.StringIO(text))
    assert "record ending at line" in str(err.value)


def test_by_source_collapses_identical_duplicates():
    text = "S 好学生\nA 0 1|||sub|||壞|||0\n\nS 好学生\nA 0 1|||sub|||壞|||0\n\n"
    corpus = parse_edit_file(io.StringIO(text))
    assert len(corpus) == 2
    assert len(corpus.by_source()) == 1


def test_by_source_rejects_conflicting_duplicates():
    text = "S 好学生\nA 0 1|||sub|||壞|||0\n\nS 好学生\nA 1 2|||sub|||坏|||0\n\n"
    with pytest.raises(FormatError):
        parse_edit_file(io.StringIO(text)).by_source()


def test_merge_policies_apply_identically():
    rng = random.Random(211)
    for _ in range(100):
        clean = "".join(rng.choice(_CJK) for _ in range(rng.randint(1, 8)))
        src = to_units(_corrupt(rng, clean))
        path = align(src, to_units(clean))
        a = apply_edits(src, extract_edits(path, MergePolicy.NONE))
        b = apply_edits(src, extract_edits(path, MergePolicy.MAXIMAL_RUNS))
        assert a.units == b.units


def test_empty_replacement_mark_never_collides():
    # A literal replacement spelled "-NONE-" cannot round-trip; the mark is
    # reserved. Unit-level Chinese text never produces it.
    edit = Edit.make(0, 1, join_units(tuple("-NONE-")))
    text = format_edit_records(
        [(to_units("甲"), [EditSet("0", 0, (edit,))])]
    )
    parsed = parse_edit_file(io.StringIO(text))
    # the reserved mark parses back as an empty replacement, not the literal
    assert parsed.records[0].refs[0].edits[0].replacement.text == ""
