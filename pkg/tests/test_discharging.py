import random

import pytest

from app.core.configurations import parse_configuration
from app.core.discharging import (
    INF,
    apply_rules,
    boundary_charge,
    conf_in_t_threshold,
    decompose_range,
    decompose_rule,
    discharge_cartwheels,
    enum_send_cases,
    euler_charge,
    obeys,
    parse_rules,
    random_near_triangulation,
    random_projective_triangulation,
    random_rules,
    random_triangulation,
    threshold_margin,
    total_charge_check,
    wheel_near_triangulation,
)
from app.core.exceptions import EmbeddingError, InconclusiveError, RangeError, RuleFormatError
from app.core.graph import dual_triangulation, petersen_graph
from conftest import data_path, load_graph

FIVE_TO_SEVEN = """
rule 1 {r}
0 5 5 1
1 7+ 0
send: 0 1
"""


def edge_rule(r):
    return parse_rules(FIVE_TO_SEVEN.format(r=r))


@pytest.fixture
def sample_rules():
    with open(data_path('rules', 'sample.rule'), 'r', encoding='utf-8') as f:
        return parse_rules(f.read())


def test_parse_sample_rules(sample_rules):
    assert [rule.number for rule in sample_rules] == [1, 2]
    first, second = sample_rules
    assert first.r == 2
    assert (first.beta[1], first.delta[1]) == (7, INF)
    assert (second.beta[0], second.delta[0]) == (5, 6)
    assert parse_rules(second.format())[0].rotation == second.rotation


@pytest.mark.parametrize('text', [
    'rule 1 0\n0 5 5 1\n1 7+ 0\nsend: 0 1\n',
    'rule 1 2\n0 5 5 1\n1 7+ 0\n',
    'rule 1 2\n0 4 5 1\n1 7+ 0\nsend: 0 1\n',
    'rule 1 2\n0 5 5 1\n1 7+ 0\nsend: 0 0\n',
    'rule 1 2\n0 5 5 1\n1 7+\nsend: 0 1\n',
    '0 5 5 1\n',
    'rule x 2\n',
])
def test_rule_format_errors(text):
    with pytest.raises(RuleFormatError):
        parse_rules(text)


def test_decompose_range():
    assert decompose_range(5, INF) == [(5, 5), (6, 6), (7, 7), (8, 8), (9, INF)]
    assert decompose_range(7, INF) == [(7, 7), (8, 8), (9, INF)]
    assert decompose_range(5, 6) == [(5, 5), (6, 6)]


def test_random_rules_are_valid():
    rules = random_rules(10, random.Random(3))
    assert [rule.number for rule in rules] == list(range(1, 11))
    assert all(1 <= rule.r <= 3 for rule in rules)


def test_euler_charge():
    assert euler_charge(dual_triangulation(petersen_graph())) == 60
    assert euler_charge(load_graph('icosahedron.cub')) == 120


def test_no_flow_between_degree_five_vertices(sample_rules):
    t = load_graph('icosahedron.cub')
    state = apply_rules(t, sample_rules)
    assert state.flow == {}
    assert all(c == 10 for c in state.final.values())
    assert total_charge_check(dual_triangulation(petersen_graph()), sample_rules, 60)


@pytest.mark.parametrize('seed', [0, 1, 2])
def test_charge_is_conserved(seed):
    rng = random.Random(seed)
    t = random_triangulation(load_graph('icosahedron.cub'), 15, rng)
    assert total_charge_check(t, random_rules(6, rng), 120)


@pytest.mark.parametrize('seed', [0, 1])
def test_projective_charge_is_sixty(seed, sample_rules):
    t = random_projective_triangulation(8, random.Random(seed))
    assert t.order == 14
    assert euler_charge(t) == 60
    assert total_charge_check(t, sample_rules, 60)


def test_edge_rule_flow():
    t = random_triangulation(load_graph('icosahedron.cub'), 20, random.Random(5))
    state = apply_rules(t, edge_rule(2))
    expected = {
        (x, y): 2
        for x in t.vertices
        for y in t.neighbors(x)
        if t.degree(x) == 5 and t.degree(y) >= 7
    }
    assert state.flow == expected
    assert state.conserved()


def test_apply_rules_needs_triangulation(petersen, sample_rules):
    with pytest.raises(EmbeddingError):
        apply_rules(petersen, sample_rules)


def test_obeys():
    rule = edge_rule(1)[0]
    five_seven = parse_configuration('conf 2 8\n0 5 1 1\n1 7 1 0\n')
    five_six = parse_configuration('conf 2 7\n0 5 1 1\n1 6 1 0\n')
    assert obeys(five_seven, rule)
    assert not obeys(five_six, rule)


def test_wheel_boundary_charge():
    g, cycle = wheel_near_triangulation(5)
    assert boundary_charge(g, cycle) == 10
    with pytest.raises(EmbeddingError):
        boundary_charge(g, [1, 3, 5])
    with pytest.raises(InconclusiveError):
        conf_in_t_threshold(g, cycle)


@pytest.mark.parametrize('seed', [0, 1, 2, 3])
def test_random_near_triangulation_charge(seed):
    g, cycle = random_near_triangulation(6, 8, random.Random(seed))
    inner = sum(10 * (6 - g.degree(v)) for v in g.nodes if v not in cycle)
    assert boundary_charge(g, cycle) == inner


def test_threshold_margin():
    assert threshold_margin(10, 24) == 0
    assert threshold_margin(10, 25) > 0
    assert threshold_margin(6, 9) < 0


def test_send_cases_for_edge_rule():
    cases = enum_send_cases(edge_rule(2))
    assert sorted(c.n for c in cases) == [0, 0, 2]
    pieces = [piece for rule in edge_rule(2) for piece in decompose_rule(rule)]
    assert len(pieces) == 3
    assert sorted(c.n for c in enum_send_cases(pieces)) == [0, 0, 2, 2, 2]


def test_cartwheels():
    assert discharge_cartwheels(7, []) == []
    assert discharge_cartwheels(7, edge_rule(1)) == []
    found = discharge_cartwheels(7, edge_rule(2))
    assert found
    assert all(c.charge > 0 for c in found)
    assert max(c.charge for c in found) == 4


def test_cartwheel_degree_range():
    with pytest.raises(RangeError):
        discharge_cartwheels(6, [])
