import pytest
from hypothesis import given
from hypothesis import strategies as st

from chbsim.topology import (LegPair, SwitchingTable, build, build_conventional, build_modified, count_switches,
                             level_of, table_from_csv, table_to_csv, validate_table)

from conftest import GOLDEN, PAPER_TABLES, read_golden

odd_levels = st.integers(1, 8).map(lambda k: 2 * k + 1)


@pytest.mark.parametrize("kind,levels", PAPER_TABLES)
def test_builders_match_paper_tables(kind, levels):
    golden = read_golden(kind, levels)
    topo = build(kind, levels)
    assert dict(topo.level_map) == golden


@pytest.mark.parametrize("kind,levels", PAPER_TABLES)
def test_csv_export_matches_golden_bytes(kind, levels):
    text = (GOLDEN / f"{kind}_{levels}.csv").read_text()
    table = build(kind, levels).table()
    assert table_to_csv(table) == text
    assert table_to_csv(table_from_csv(text, table.topology)) == text


def test_examples_from_tables():
    assert build_conventional(5).level_map[2] == (1, 1, 0, 0, 1, 1, 0, 0)
    assert build_conventional(7).level_map[0] == (0,) * 12
    assert build_modified(5).level_map[1] == (1, 1, 0, 0, 0, 1)
    assert build_modified(7).level_map[3] == (1, 1, 0, 0, 1, 0, 1, 0)
    assert build_modified(7).level_map[-3] == (0, 0, 1, 1, 1, 0, 1, 0)


def test_three_level_is_one_bridge():
    topo = build_conventional(3)
    assert (topo.switch_count, topo.source_count) == (4, 1)
    assert set(topo.level_map) == {-1, 0, 1}


@pytest.mark.parametrize("levels", [4, 1, 0, -3, 6])
@pytest.mark.parametrize("builder", [build_conventional, build_modified])
def test_rejects_bad_level_counts(builder, levels):
    with pytest.raises(ValueError):
        builder(levels)


def test_switch_counts():
    assert count_switches(build_conventional(5)) == 8
    assert count_switches(build_conventional(7)) == 12
    assert count_switches(build_modified(5)) == 6
    assert count_switches(build_modified(7)) == 8


def test_paper_tables_validate(paper_topology):
    assert validate_table(paper_topology.table()) == []


def test_all_off_row_is_clean(paper_topology):
    table = paper_topology.table()
    assert validate_table(table.replace_row(1, (0,) * paper_topology.switch_count)) == []


def test_corrupted_modified_row_flagged_at_that_level():
    table = build_modified(5).table()
    bad = table.replace_row(2, (1, 1, 1, 0, 1, 0))
    violations = validate_table(bad)
    assert [(v.level, v.pair) for v in violations] == [(2, LegPair(2, 1))]
    assert violations[0].pair.label() == "(S3,S2)"


def test_level_of():
    table = build_modified(7).table()
    assert level_of(table, (1, 1, 0, 0, 1, 0, 0, 1)) == 2
    for kind, levels in PAPER_TABLES:
        t = build(kind, levels).table()
        assert level_of(t, (0,) * t.topology.switch_count) == 0
    assert level_of(table, (1,) * 8) is None
    with pytest.raises(ValueError):
        level_of(table, (0, 0))


def test_table_rejects_missing_level():
    topo = build_modified(5)
    with pytest.raises(ValueError):
        SwitchingTable(topo, topo.table().rows[:-1])


def test_negated_levels_follow_paper_rows(paper_topology):
    golden = read_golden(paper_topology.kind, paper_topology.levels)
    for k in range(1, paper_topology.max_level + 1):
        assert paper_topology.level_map[-k] == golden[-k]
        assert paper_topology.level_map[k] == golden[k]


@given(odd_levels)
def test_generalised_topologies(levels):
    conv, mod = build_conventional(levels), build_modified(levels)
    k = (levels - 1) // 2
    assert conv.switch_count == 4 * k and conv.source_count == k
    assert mod.switch_count == 2 * k + 2 and mod.source_count == k
    assert set(conv.level_map) == set(mod.level_map) == set(range(-k, k + 1))
    for topo in (conv, mod):
        table = topo.table()
        assert validate_table(table) == []
        assert len(set(topo.level_map.values())) == levels
        for lv, gates in table.rows:
            assert level_of(table, gates) == lv
    if levels >= 5:
        assert count_switches(mod) < count_switches(conv)


@given(odd_levels, st.data())
def test_any_single_pair_short_is_flagged(levels, data):
    topo = data.draw(st.sampled_from([build_conventional(levels), build_modified(levels)]))
    level = data.draw(st.integers(-topo.max_level, topo.max_level))
    pair = data.draw(st.sampled_from(topo.leg_pairs))
    gates = list(topo.level_map[level])
    gates[pair.high] = gates[pair.low] = 1
    found = validate_table(topo.table().replace_row(level, gates))
    assert found and all(v.level == level for v in found)
    assert pair in [v.pair for v in found]
