import pytest

from qpn.errors import NetworkFormatError, QueryError
from qpn.network import (
    InfluenceArc,
    Network,
    ProductSynergy,
    Query,
    dumps,
    loads,
    validate,
)
from conftest import P, M, Z, net


def test_cycle_is_reported():
    bad = net("AB", [("A", "B", P), ("B", "A", P)])
    violations = validate(bad)
    assert any(v.startswith("cycle:") and "A" in v and "B" in v for v in violations)


def test_synergy_pair_must_be_parents_of_child():
    bad = Network(
        "ABC",
        [InfluenceArc("A", "C", P)],
        [ProductSynergy(("A", "B"), "C", True, M)],
    )
    violations = validate(bad)
    assert any(v.startswith("bad-synergy") for v in violations)


def test_fixture_is_valid(fixture_net):
    assert validate(fixture_net) == []


def test_duplicate_arc_and_unknown_endpoint_reported():
    dup = Network(
        "AB",
        [InfluenceArc("A", "B", P), InfluenceArc("A", "B", M)],
    )
    assert any(v.startswith("duplicate-arc") for v in validate(dup))
    dangling = Network("A", [InfluenceArc("A", "X", P)])
    assert any(v.startswith("unknown-node") for v in validate(dangling))


def test_zero_signed_arcs_are_permitted():
    ok = net("AB", [("A", "B", Z)])
    assert validate(ok) == []


def test_file_format_round_trip(fixture_net):
    text = dumps(fixture_net)
    again = loads(text)
    assert again == fixture_net
    assert dumps(again) == text


def test_loader_rejects_invalid_network():
    bad = '{"nodes": ["A", "B"], "arcs": [{"from": "A", "to": "B", "sign": "+"}, {"from": "B", "to": "A", "sign": "+"}]}'
    with pytest.raises(NetworkFormatError, match="cycle"):
        loads(bad)


def test_loader_rejects_malformed_json_with_position():
    with pytest.raises(NetworkFormatError, match="line"):
        loads('{"nodes": [,]}')


def test_loader_rejects_missing_fields():
    with pytest.raises(NetworkFormatError):
        loads('{"arcs": []}')
    with pytest.raises(NetworkFormatError):
        loads('{"nodes": ["A"], "arcs": [{"from": "A"}]}')


def test_synergies_round_trip():
    withsyn = Network(
        "ABC",
        [InfluenceArc("A", "C", P), InfluenceArc("B", "C", P)],
        [ProductSynergy(("B", "A"), "C", True, M)],
    )
    assert validate(withsyn) == []
    again = loads(dumps(withsyn))
    assert again == withsyn
    assert again.synergies[0].pair == ("A", "B")


def test_query_invariants():
    with pytest.raises(QueryError):
        Query({"H": True}, ("H", True), "A")
    with pytest.raises(QueryError):
        Query({"B": False}, ("H", True), "B")
    with pytest.raises(QueryError):
        Query({}, ("H", True), "H")


def test_query_unknown_node_rejected(fixture_net):
    query = Query({}, ("H", True), "Nope")
    with pytest.raises(QueryError, match="Nope"):
        query.check_against(fixture_net)


def test_network_equality_ignores_construction_order():
    a = net("AB", [("A", "B", P)])
    b = Network(["B", "A"], [InfluenceArc("A", "B", P)])
    assert a == b
