import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stratigraph.column import (
    HEADER_SIZE,
    ColumnConfigError,
    DeserializationError,
    create_column,
    deposit,
    deserialize,
    draw_differentia,
    serialize,
)
from stratigraph.curation import PolicySpec, rank_at_index, retained_count, retention_predicate

POLICIES = [
    PolicySpec("fr", 1),
    PolicySpec("fr", 16),
    PolicySpec("dpr", 2),
    PolicySpec("tdpr", 3),
    PolicySpec("rpr", 0),
    PolicySpec("rpr", 3),
    PolicySpec("gsnr", 2),
    PolicySpec("crpr", 16),
]


class ShadowColumn:
    """Reference column that stores ranks explicitly and prunes by predicate."""

    def __init__(self, policy, width, seed):
        self.policy, self.width, self.seed = policy, width, seed
        self.n = 0
        self.strata = []

    def deposit(self):
        self.strata.append((self.n, draw_differentia(self.seed, self.n, self.width)))
        self.n += 1
        self.strata = [
            (t, d) for t, d in self.strata if retention_predicate(self.policy, t, self.n)
        ]


def test_create_is_empty():
    col = create_column(PolicySpec("fr", 1), 64, 42)
    assert col.deposit_count == 0 and len(col) == 0
    assert create_column(PolicySpec("rpr", 3), 1, 0).deposit_count == 0


def test_unsupported_width():
    with pytest.raises(ColumnConfigError):
        create_column(PolicySpec("fr", 1), 16, 0)


def test_first_deposit():
    col = create_column(PolicySpec("rpr", 1), 8, 7).deposit()
    assert col.deposit_count == 1 and len(col) == 1


def test_five_deposits_match_count():
    p = PolicySpec("gsnr", 2)
    col = create_column(p, 8, 1)
    for _ in range(5):
        col.deposit()
    assert len(col) == retained_count(p, 5)


def test_dpr_size_bound():
    col = create_column(PolicySpec("dpr", 2), 8, 3)
    for _ in range(100):
        col.deposit()
        assert len(col) <= 5


def test_fr_ranks_after_1024():
    col = create_column(PolicySpec("fr", 16), 8, 3)
    for _ in range(1 << 10):
        col.deposit()
    assert [s.rank for s in col.strata()] == list(range(0, 1024, 16)) + [1023]


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("width", [1, 8, 64])
def test_shadow_equivalence(policy, width):
    col = create_column(policy, width, 99)
    shadow = ShadowColumn(policy, width, 99)
    for n in range(1, 400):
        col.deposit()
        shadow.deposit()
        assert len(col) == retained_count(policy, n)
        assert list(col.strata()) == shadow.strata
        assert all(d < (1 << width) for d in col.differentia)


def test_ranks_follow_index_mapping():
    p = PolicySpec("rpr", 2)
    col = create_column(p, 64, 5)
    for _ in range(300):
        col.deposit()
    assert [s.rank for s in col.strata()] == [rank_at_index(p, i, 300) for i in range(len(col))]


def test_functional_deposit_leaves_input():
    col = create_column(PolicySpec("fr", 2), 8, 1)
    after = deposit(col)
    assert col.deposit_count == 0 and after.deposit_count == 1


def test_clone_value_semantics():
    parent = create_column(PolicySpec("rpr", 1), 64, 11)
    for _ in range(20):
        parent.deposit()
    before = parent.to_bytes()
    child = parent.clone_for_offspring(12)
    assert parent.to_bytes() == before
    assert child.deposit_count == 21
    assert create_column(PolicySpec("fr", 1), 8, 0).clone_for_offspring(1).deposit_count == 1


def test_clone_inheritance_prefix():
    p = PolicySpec("tdpr", 2)
    parent = create_column(p, 64, 1)
    for _ in range(77):
        parent.deposit()
    parent_strata = dict(parent.strata())
    a = parent.clone_for_offspring(100)
    b = parent.clone_for_offspring(200)
    for child in (a, b):
        for rank, diff in child.strata():
            if rank < 77:
                assert parent_strata[rank] == diff
    assert a.differentia[-1] != b.differentia[-1]


def test_w64_clones_never_collide():
    parent = create_column(PolicySpec("fr", 1), 64, 0).deposit()
    hits = sum(
        parent.clone_for_offspring(2 * k + 1).differentia[-1]
        == parent.clone_for_offspring(2 * k + 2).differentia[-1]
        for k in range(100)
    )
    assert hits == 0


def test_w1_clone_agreement_near_half():
    parent = create_column(PolicySpec("fr", 1), 1, 0).deposit()
    trials = 1000
    agree = sum(
        parent.clone_for_offspring(10_000 + 2 * k).differentia[-1]
        == parent.clone_for_offspring(10_001 + 2 * k).differentia[-1]
        for k in range(trials)
    )
    assert abs(agree / trials - 0.5) <= 0.05


# -- serialization ------------------------------------------------------------


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("width", [1, 8, 64])
def test_round_trip(policy, width):
    col = create_column(policy, width, 2024)
    for n in range(130):
        data = serialize(col)
        assert deserialize(data, policy, width) == col
        col.deposit()


def test_rpr_payload_size():
    p = PolicySpec("rpr", 3)
    col = create_column(p, 1, 0)
    for _ in range(1000):
        col.deposit()
    count = retained_count(p, 1000)
    assert len(serialize(col)) == HEADER_SIZE + -(-count // 8)


def test_fr1_w1_64_deposits_is_8_bytes():
    col = create_column(PolicySpec("fr", 1), 1, 0)
    for _ in range(64):
        col.deposit()
    assert len(serialize(col)) - HEADER_SIZE == 8


def test_header_layout():
    col = create_column(PolicySpec("rpr", 3), 8, 5)
    for _ in range(10):
        col.deposit()
    data = serialize(col)
    assert data[0] == 1
    assert int.from_bytes(data[2:10], "little") == 3
    assert data[10] == 8
    assert int.from_bytes(data[11:19], "little") == 10


def test_deserialize_errors():
    col = create_column(PolicySpec("rpr", 3), 8, 5)
    for _ in range(10):
        col.deposit()
    data = serialize(col)
    with pytest.raises(DeserializationError):
        deserialize(data[:5])
    with pytest.raises(DeserializationError):
        deserialize(data[:-1])
    with pytest.raises(DeserializationError):
        deserialize(data + b"\0")
    with pytest.raises(DeserializationError):
        deserialize(b"\x09" + data[1:])
    with pytest.raises(DeserializationError):
        deserialize(data[:1] + b"\x63" + data[2:])
    with pytest.raises(DeserializationError):
        deserialize(data, PolicySpec("rpr", 2), 8)
    with pytest.raises(DeserializationError):
        deserialize(data, PolicySpec("rpr", 3), 64)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(POLICIES),
    st.sampled_from([1, 8, 64]),
    st.integers(0, 2 ** 64 - 1),
    st.integers(0, 300),
)
def test_deterministic_serialization(policy, width, seed, steps):
    def build():
        col = create_column(policy, width, seed)
        for _ in range(steps):
            col.deposit()
        return serialize(col)

    assert build() == build()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(POLICIES), st.integers(0, 200), st.integers(1, 50))
def test_prefix_property_after_extra_deposits(policy, depth, extra):
    parent = create_column(policy, 64, 3)
    for _ in range(depth):
        parent.deposit()
    child = parent.clone_for_offspring(4)
    for _ in range(extra - 1):
        child.deposit()
    parent_strata = dict(parent.strata())
    for rank, diff in child.strata():
        if rank < depth:
            assert parent_strata[rank] == diff
