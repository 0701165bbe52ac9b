import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coalhash import HashTable, Policy, TableFullError, new_table


def build(m, policy, addrs):
    t = HashTable(m, policy)
    returns = [t.insert(h) for h in addrs]
    return t, returns


@st.composite
def table_case(draw):
    m = draw(st.integers(min_value=1, max_value=16))
    n = draw(st.integers(min_value=0, max_value=m))
    addrs = draw(st.lists(st.integers(1, m), min_size=n, max_size=n))
    return m, addrs


class TestConstruction:
    def test_empty_initialization(self):
        t = new_table(8, Policy.LATE)
        assert t.m == 8 and t.n == 0 and t.rover == 8
        assert all(not t.cell(j).occupied for j in range(1, 9))
        assert all(t.cell(j).link is None for j in range(1, 9))

    def test_minimal_size(self):
        t = new_table(1, Policy.EARLY)
        assert t.m == 1 and t.n == 0

    def test_zero_cells_rejected(self):
        with pytest.raises(ValueError):
            HashTable(0, Policy.LATE)

    def test_unsuccessful_not_an_insertion_policy(self):
        with pytest.raises(ValueError):
            HashTable(4, Policy.UNSUCCESSFUL)


class TestFreeCell:
    def test_all_empty_returns_top(self):
        t = HashTable(8, Policy.LATE)
        assert t.find_free_cell() == 8

    def test_skips_occupied_top_cells(self):
        t = HashTable(8, Policy.LATE)
        t.insert(8)
        t.insert(7)
        assert t.find_free_cell() == 6

    def test_full_table(self):
        t = HashTable(2, Policy.LATE)
        t.insert(1)
        t.insert(2)
        with pytest.raises(TableFullError):
            t.find_free_cell()

    @given(table_case())
    def test_rover_matches_naive_scan(self, case):
        m, addrs = case
        t, _ = build(m, Policy.LATE, addrs)
        empty = [j for j in range(1, m + 1) if not t.cell(j).occupied]
        if empty:
            assert t.find_free_cell() == max(empty)
        else:
            with pytest.raises(TableFullError):
                t.find_free_cell()


class TestInsert:
    def test_empty_cell_gets_displacement_zero(self):
        t = HashTable(4, Policy.LATE)
        assert t.insert(2) == 0
        assert t.cell(2).occupied and t.cell(2).item_id == 1

    def test_late_insertion_trace(self):
        t, returns = build(4, Policy.LATE, [2, 2, 2])
        assert returns == [0, 1, 2]
        assert t.item_cells() == (2, 4, 3)
        assert t.displacements() == (0, 1, 2)

    def test_early_insertion_trace(self):
        # Each new item splices right after cell 2, pushing non-head items
        # one link further from their hash address.
        t, returns = build(4, Policy.EARLY, [2, 2, 2])
        assert returns == [0, 1, 1]
        assert t.item_cells() == (2, 4, 3)
        assert t.displacements() == (0, 2, 1)

    def test_address_out_of_range(self):
        t = HashTable(4, Policy.LATE)
        for bad in (0, 5, -1):
            with pytest.raises(ValueError):
                t.insert(bad)

    def test_insert_into_full_table(self):
        t, _ = build(2, Policy.EARLY, [1, 1])
        with pytest.raises(TableFullError):
            t.insert(1)


class TestSearchCost:
    def test_empty_cell_costs_zero(self):
        t = HashTable(4, Policy.LATE)
        assert t.unsuccessful_search_cost(3) == 0

    def test_chain_tail_costs_one(self):
        t, _ = build(4, Policy.LATE, [2, 2])
        assert t.unsuccessful_search_cost(4) == 1

    def test_chain_head_counts_whole_chain(self):
        t, _ = build(4, Policy.LATE, [2, 2, 2])
        assert t.unsuccessful_search_cost(2) == 3

    def test_address_out_of_range(self):
        t = HashTable(4, Policy.LATE)
        with pytest.raises(ValueError):
            t.unsuccessful_search_cost(5)


class TestDisplacementOf:
    def test_chain_head_is_zero_under_both_policies(self):
        for policy in (Policy.LATE, Policy.EARLY):
            t, _ = build(4, policy, [3])
            assert t.displacement_of(1) == 0

    def test_late_matches_insert_return_forever(self):
        t = HashTable(8, Policy.LATE)
        returns = [t.insert(h) for h in [3, 3, 5, 3, 5, 8, 8]]
        assert [t.displacement_of(i + 1) for i in range(7)] == returns

    def test_early_trace_item_two(self):
        t, _ = build(4, Policy.EARLY, [2, 2, 2])
        assert t.displacement_of(2) == 2

    def test_item_out_of_range(self):
        t, _ = build(4, Policy.LATE, [2])
        for bad in (0, 2):
            with pytest.raises(ValueError):
                t.displacement_of(bad)


class TestHistogram:
    def test_unsuccessful_on_empty_table(self):
        t = HashTable(6, Policy.LATE)
        h = t.histogram(Policy.UNSUCCESSFUL)
        assert h.counts == (6,) and h.total == 6

    def test_unsuccessful_zero_count_is_empty_cells(self):
        t, _ = build(8, Policy.EARLY, [1, 1, 5, 5, 5])
        h = t.histogram(Policy.UNSUCCESSFUL)
        assert h.counts[0] == 8 - 5

    def test_late_trace_histogram(self):
        t, _ = build(4, Policy.LATE, [2, 2, 2])
        assert t.histogram(Policy.LATE).counts == (1, 1, 1)

    def test_policy_mismatch(self):
        t, _ = build(4, Policy.LATE, [2])
        with pytest.raises(ValueError):
            t.histogram(Policy.EARLY)

    def test_empty_table_has_no_displacement_histogram(self):
        t = HashTable(4, Policy.LATE)
        with pytest.raises(ValueError):
            t.histogram(Policy.LATE)

    def test_histogram_moments(self):
        t, _ = build(4, Policy.LATE, [2, 2, 2])
        h = t.histogram(Policy.LATE)
        assert h.mean == pytest.approx(1.0)
        assert h.variance == pytest.approx(2 / 3)


class TestStructuralInvariants:
    @given(table_case())
    @settings(max_examples=200)
    def test_policies_share_occupancy_and_partition(self, case):
        m, addrs = case
        late, _ = build(m, Policy.LATE, addrs)
        early, _ = build(m, Policy.EARLY, addrs)
        assert late.occupied_cells() == early.occupied_cells()
        assert {frozenset(c) for c in late.chains()} == {
            frozenset(c) for c in early.chains()
        }
        assert late.item_cells() == early.item_cells()

    @given(table_case())
    @settings(max_examples=200)
    def test_zero_displacement_counts_agree(self, case):
        m, addrs = case
        late, _ = build(m, Policy.LATE, addrs)
        early, _ = build(m, Policy.EARLY, addrs)
        assert late.displacements().count(0) == early.displacements().count(0)

    @given(table_case())
    def test_histogram_totals(self, case):
        m, addrs = case
        t, _ = build(m, Policy.LATE, addrs)
        if addrs:
            assert sum(t.histogram(Policy.LATE).counts) == len(addrs)
        u = t.histogram(Policy.UNSUCCESSFUL)
        assert sum(u.counts) == m
        assert u.counts[0] == m - len(addrs)

    @given(table_case())
    @settings(max_examples=200)
    def test_chains_are_disjoint_simple_paths(self, case):
        m, addrs = case
        t, _ = build(m, Policy.EARLY, addrs)
        seen = set()
        for chain in t.chains():
            assert len(set(chain)) == len(chain)
            assert not (seen & set(chain))
            seen.update(chain)
            # every link points at the next cell of the same chain
            for a, b in zip(chain, chain[1:]):
                assert t.cell(a).link == b
            assert t.cell(chain[-1]).link is None
        assert seen == t.occupied_cells()

    @given(table_case())
    @settings(max_examples=200)
    def test_displacement_below_chain_length_and_cost_ladder(self, case):
        m, addrs = case
        t, _ = build(m, Policy.LATE, addrs)
        cell_chain = {}
        for chain in t.chains():
            for c in chain:
                cell_chain[c] = chain
        for i in range(1, t.n + 1):
            chain = cell_chain[t.item_cells()[i - 1]]
            assert t.displacement_of(i) < len(chain)
        # each chain of length l yields unsuccessful costs exactly {1..l}
        for chain in t.chains():
            costs = sorted(t.unsuccessful_search_cost(j) for j in chain)
            assert costs == list(range(1, len(chain) + 1))

    @given(table_case())
    @settings(max_examples=200)
    def test_early_displacements_match_scratch_rewalk(self, case):
        m, addrs = case
        t, _ = build(m, Policy.EARLY, addrs)
        assert t.displacements() == t.recompute_displacements()

    @given(table_case())
    def test_late_displacements_match_scratch_rewalk(self, case):
        m, addrs = case
        t, _ = build(m, Policy.LATE, addrs)
        assert t.displacements() == t.recompute_displacements()
