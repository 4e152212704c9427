import json
import random
from fractions import Fraction

import pytest

from qcox.errors import QuiverSyntaxError, ValidationError
from qcox.quiverdsl import (Arrow, BoundQuiver, Path, Quiver, emit_json,
                            emit_text, parse_json, parse_quiver, validate)

EXAMPLE_3CYCLE = """
# three vertices on a line, arrows both ways between neighbours
quiver commutative3 {
  vertices: 1, 2, 3;
  arrows:
    a: 1 -> 2;
    d: 2 -> 1;
    b: 2 -> 3;
    g: 3 -> 2;
  relations:
    a*b;
    g*d;
    d*a - b*g;
}
"""

A3_ORIENTED = """
quiver a3 {
  vertices: 1, 2, 3;
  arrows:
    a: 2 -> 1;
    b: 2 -> 3;
}
"""


def test_parse_three_vertex_example():
    bq = parse_quiver(EXAMPLE_3CYCLE)
    q = bq.quiver
    assert q.vertices == ("1", "2", "3")
    assert [a.name for a in q.arrows] == ["a", "d", "b", "g"]
    assert q.arrows[0] == Arrow("a", 0, 1)
    assert len(bq.relations) == 3
    last = bq.relations[2]
    assert [(c, p.names(q)) for c, p in last.terms] == \
        [(Fraction(1), ["d", "a"]), (Fraction(-1), ["b", "g"])]
    assert bq.name == "commutative3"


def test_parse_empty_relations_block():
    bq = parse_quiver(A3_ORIENTED)
    assert bq.relations == ()
    assert bq.quiver.sinks() == [0, 2]


def test_parse_coefficients():
    bq = parse_quiver("""
    quiver k {
      vertices: 1, 2, 3;
      arrows: a: 1 -> 2; b: 1 -> 2; c: 2 -> 3;
      relations: 3/2*a*c - 2*b*c;
    }
    """)
    (c1, p1), (c2, p2) = bq.relations[0].terms
    assert c1 == Fraction(3, 2) and p1.names(bq.quiver) == ["a", "c"]
    assert c2 == -2 and p2.names(bq.quiver) == ["b", "c"]


def test_parse_leading_minus_term():
    bq = parse_quiver("""
    quiver k {
      vertices: 1, 2, 3;
      arrows: a: 1 -> 2; b: 1 -> 2; c: 2 -> 3;
      relations: -a*c + b*c;
    }
    """)
    assert [c for c, _ in bq.relations[0].terms] == [-1, 1]


def test_numeric_arrow_names_escape():
    text = """
    quiver n {
      vertices: x, y, z;
      arrows: 2: x -> y; a: y -> z;
      relations: 1*2*a;
    }
    """
    bq = parse_quiver(text)
    assert bq.relations[0].terms[0][1].names(bq.quiver) == ["2", "a"]
    assert parse_quiver(emit_text(bq)) == bq


def test_syntax_error_carries_position():
    with pytest.raises(QuiverSyntaxError) as err:
        parse_quiver("quiver x {\n  vertices 1;\n}")
    assert err.value.line == 2
    with pytest.raises(QuiverSyntaxError):
        parse_quiver("")
    with pytest.raises(QuiverSyntaxError):
        parse_quiver("quiver x { vertices: 1; arrows: a: 1 -> 1; } trailing")


def test_non_homogeneous_relation_rejected():
    with pytest.raises(ValidationError) as err:
        parse_quiver("""
        quiver bad {
          vertices: 1, 2, 3;
          arrows: a: 1 -> 2; b: 2 -> 3; c: 1 -> 3;
          relations: a*b - c;
        }
        """)
    assert err.value.code == "NonHomogeneous"


def test_non_composable_relation_rejected():
    with pytest.raises(ValidationError) as err:
        parse_quiver("""
        quiver bad {
          vertices: 1, 2;
          arrows: a: 1 -> 2; b: 1 -> 2;
          relations: a*b;
        }
        """)
    assert err.value.code == "NonComposable"


def test_degree_one_relation_rejected():
    with pytest.raises(ValidationError) as err:
        parse_quiver("""
        quiver bad {
          vertices: 1, 2;
          arrows: a: 1 -> 2;
          relations: a;
        }
        """)
    assert err.value.code == "DegreeTooLow"


def test_disconnected_rejected_by_parse_and_reported_by_validate():
    with pytest.raises(ValidationError) as err:
        parse_quiver("""
        quiver bad {
          vertices: 1, 2, 3, 4;
          arrows: a: 1 -> 2; b: 3 -> 4;
        }
        """)
    assert err.value.code == "Disconnected"

    q = Quiver(("1", "2", "3", "4"), (Arrow("a", 0, 1), Arrow("b", 2, 3)))
    report = validate(BoundQuiver(q))
    assert not report.passed
    assert "Disconnected" in report.failure_codes()


def test_validate_flags():
    bq = parse_quiver(EXAMPLE_3CYCLE)
    report = validate(bq)
    assert report.passed
    assert report.connected and not report.acyclic
    assert report.loop_arrows == ()

    a3 = parse_quiver(A3_ORIENTED)
    assert validate(a3).acyclic

    loop = parse_quiver("quiver l { vertices: 1; arrows: a: 1 -> 1; }")
    rep = validate(loop)
    assert rep.passed and not rep.acyclic and rep.loop_arrows == ("a",)


def test_duplicate_names_rejected():
    with pytest.raises(ValidationError):
        parse_quiver("quiver d { vertices: 1, 1; arrows: a: 1 -> 1; }")
    with pytest.raises(ValidationError):
        parse_quiver("quiver d { vertices: 1, 2; arrows: a: 1 -> 2; a: 2 -> 1; }")
    with pytest.raises(ValidationError):
        parse_quiver("quiver d { vertices: 1, 2; arrows: a: 1 -> 3; }")


def test_arrow_count_matrices():
    bq = parse_quiver("""
    quiver k {
      vertices: 1, 2;
      arrows: a: 1 -> 2; b: 1 -> 2; d: 2 -> 1;
    }
    """)
    q = bq.quiver
    assert q.arrow_counts() == [[0, 2], [1, 0]]
    assert q.edge_counts() == [[0, 3], [3, 0]]
    assert q.neighbours(0) == [1]
    out_degrees = [sum(row) for row in q.arrow_counts()]
    assert out_degrees == [2, 1]
    a = q.edge_counts()
    assert all(a[i][j] == a[j][i] for i in range(2) for j in range(2))


def test_path_composition_invariant():
    bq = parse_quiver(EXAMPLE_3CYCLE)
    q = bq.quiver
    p = Path.from_arrows(q, [0, 2])           # a then b: 1 -> 3
    assert (p.source, p.target, p.length) == (0, 2, 2)
    with pytest.raises(ValidationError):
        Path.from_arrows(q, [0, 0])            # a does not end where a starts
    assert Path.trivial(1) == Path((), 1, 1)


def test_text_round_trip():
    for text in (EXAMPLE_3CYCLE, A3_ORIENTED):
        bq = parse_quiver(text)
        assert parse_quiver(emit_text(bq)) == bq


def test_json_round_trip():
    bq = parse_quiver(EXAMPLE_3CYCLE)
    blob = emit_json(bq)
    assert parse_json(blob) == bq
    obj = json.loads(blob)
    assert obj["vertices"] == ["1", "2", "3"]
    assert obj["arrows"][0] == {"name": "a", "source": "1", "target": "2"}
    assert obj["relations"][2][0] == {"coeff": "1", "path": ["d", "a"]}


def test_json_schema_errors():
    with pytest.raises(QuiverSyntaxError):
        parse_json("{not json")
    with pytest.raises(ValidationError):
        parse_json(json.dumps({"vertices": ["1"]}))


def test_round_trip_random_quivers():
    from qcox.randquiver import random_bound_quiver
    rng = random.Random(5)
    for _ in range(25):
        bq = random_bound_quiver(rng)
        assert parse_quiver(emit_text(bq)) == bq
        assert parse_json(emit_json(bq)) == bq


def test_relations_keyword_with_no_declarations():
    bq = parse_quiver("""
    quiver empty_block {
      vertices: 1, 2;
      arrows: a: 1 -> 2;
      relations:
    }
    """)
    assert bq.relations == ()
