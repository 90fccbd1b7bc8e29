"""
Tests for instance parsing, canonical serialization, digests and generation.
"""

import json

import pytest

from dispersion.exceptions import SchemaError
from dispersion.instance_io import (
    CIRCLE_BOX,
    CIRCLE_RADIUS,
    GENERATOR_NAME,
    SEGMENT_LENGTH,
    circle_of,
    generate,
    instance_digest,
    parse_instance,
    points_of,
    segment_of,
    serialize_instance,
)
from dispersion.models import Problem


LINE_DOC = {
    "problem": "cofl-line",
    "segment": {"p": [0, 0], "q": [10, 0]},
    "points": [{"x": 5, "y": 0}],
    "k": 2,
    "alpha": 0.5,
}


def encode(doc) -> bytes:
    return json.dumps(doc).encode("utf-8")


def violations_for(doc_or_bytes) -> list[str]:
    data = doc_or_bytes if isinstance(doc_or_bytes, bytes) else encode(doc_or_bytes)
    with pytest.raises(SchemaError) as exc_info:
        parse_instance(data)
    return exc_info.value.violations


class TestParseInstance:
    """Tests for validation with field paths."""

    def test_valid_line_instance(self):
        """Test a well-formed instance parses with defaults applied."""
        instance = parse_instance(encode(LINE_DOC))
        assert instance.problem is Problem.COFL_LINE
        assert instance.k == 2
        assert instance.lam is None
        assert instance.points[0].w is None

    def test_lambda_key(self):
        """Test the JSON key is ``lambda``."""
        instance = parse_instance(encode({**LINE_DOC, "lambda": 2.5}))
        assert instance.lam == 2.5

    def test_missing_k(self):
        """Test a missing field is reported by name."""
        doc = {key: value for key, value in LINE_DOC.items() if key != "k"}
        assert any(v.startswith("k:") for v in violations_for(doc))

    def test_bad_point_coordinate(self):
        """Test a nested field error carries its path."""
        doc = {**LINE_DOC, "points": [{"x": 1, "y": 1}, {"x": "left", "y": 0}]}
        assert any(v.startswith("points[1].x:") for v in violations_for(doc))

    def test_every_violation_reported(self):
        """Test several field errors come back together."""
        doc = {**LINE_DOC, "k": 0, "alpha": -1}
        found = violations_for(doc)
        assert any(v.startswith("k:") for v in found)
        assert any(v.startswith("alpha:") for v in found)

    def test_non_positive_weight(self):
        """Test weights must be positive."""
        doc = {**LINE_DOC, "points": [{"x": 1, "y": 1, "w": 0}]}
        assert any(v.startswith("points[0].w:") for v in violations_for(doc))

    def test_mofl_rules(self):
        """Test mofl requires lambda and integer weights on every point."""
        doc = {
            "problem": "mofl",
            "segment": {"p": [0, 0], "q": [10, 0]},
            "points": [{"x": 1, "y": 0, "w": 2}, {"x": 2, "y": 0}, {"x": 3, "y": 0, "w": 1.5}],
            "k": 1,
        }
        found = violations_for(doc)
        assert "lambda: required for mofl" in found
        assert "points[1].w: required for mofl" in found
        assert "points[2].w: must be an integer for mofl" in found

    def test_host_required(self):
        """Test the host must match the problem."""
        doc = {"problem": "cofl-circ", "segment": {"p": [0, 0], "q": [1, 0]}, "k": 2}
        assert "circle: required for cofl-circ" in violations_for(doc)

    def test_unknown_problem(self):
        """Test an unknown problem tag is rejected."""
        assert any(v.startswith("problem:") for v in violations_for({**LINE_DOC, "problem": "cofl-square"}))

    def test_non_finite_number(self):
        """Test NaN coordinates are rejected."""
        data = b'{"problem":"cofl-line","segment":{"p":[0,0],"q":[10,0]},"points":[{"x":NaN,"y":0}],"k":2}'
        assert violations_for(data)

    def test_malformed_json(self):
        """Test broken JSON is reported at the root."""
        assert violations_for(b'{"problem": ')[0].startswith("<root>:")

    def test_not_utf8(self):
        """Test undecodable bytes are reported at the root."""
        assert violations_for(b"\xff\xfe{}")[0].startswith("<root>: not UTF-8")


class TestCanonicalJson:
    """Tests for serialization and digests."""

    def test_canonical_bytes(self):
        """Test sorted keys, no whitespace, floats and absent fields dropped."""
        data = serialize_instance(parse_instance(encode(LINE_DOC)))
        assert data == (
            b'{"alpha":0.5,"k":2,"points":[{"x":5.0,"y":0.0}],"problem":"cofl-line",'
            b'"segment":{"p":[0.0,0.0],"q":[10.0,0.0]}}'
        )

    def test_reparse_is_identical(self):
        """Test parsing canonical bytes reproduces the instance and the bytes."""
        instance = generate(Problem.MOFL, 6, 2, seed=3)
        data = serialize_instance(instance)
        again = parse_instance(data)
        assert again == instance
        assert serialize_instance(again) == data

    def test_digest(self):
        """Test the digest is a SHA-256 hex string that follows the content."""
        a = parse_instance(encode(LINE_DOC))
        b = parse_instance(encode({**LINE_DOC, "k": 3}))
        assert len(instance_digest(a)) == 64
        assert instance_digest(a) == instance_digest(parse_instance(encode(LINE_DOC)))
        assert instance_digest(a) != instance_digest(b)

    def test_digest_ignores_key_order_and_spacing(self):
        """Test formatting differences in the input do not change the digest."""
        shuffled = json.dumps(dict(reversed(list(LINE_DOC.items()))), indent=4).encode("utf-8")
        assert instance_digest(parse_instance(shuffled)) == instance_digest(parse_instance(encode(LINE_DOC)))


class TestGenerate:
    """Tests for seeded generation."""

    def test_same_seed_same_bytes(self):
        """Test generation is deterministic in the seed."""
        for problem in Problem:
            a = serialize_instance(generate(problem, 20, 3, seed=42))
            b = serialize_instance(generate(problem, 20, 3, seed=42))
            assert a == b

    def test_different_seeds_differ(self):
        """Test different seeds give different points."""
        a = generate(Problem.COFL_LINE, 5, 2, seed=1)
        b = generate(Problem.COFL_LINE, 5, 2, seed=2)
        assert a.points != b.points

    def test_generator_recorded(self):
        """Test the generator name and seed travel with the instance."""
        instance = generate(Problem.COFL_LINE_SQ, 3, 2, seed=9)
        assert (instance.generator.name, instance.generator.seed) == (GENERATOR_NAME, 9)

    def test_segment_box(self):
        """Test line points fall in the declared box above the host."""
        instance = generate(Problem.COFL_LINE, 200, 4, seed=5)
        assert segment_of(instance).length == SEGMENT_LENGTH
        for pt in instance.points:
            assert 0.0 <= pt.x <= SEGMENT_LENGTH
            assert -20.0 <= pt.y <= 20.0

    def test_circle_box(self):
        """Test circle points fall in the square around the host."""
        instance = generate(Problem.COFL_CIRC, 200, 4, seed=5)
        circle = circle_of(instance)
        assert circle.radius == CIRCLE_RADIUS
        assert all(abs(pt.x) <= CIRCLE_BOX and abs(pt.y) <= CIRCLE_BOX for pt in instance.points)

    def test_mofl_weights_and_lambda(self):
        """Test mofl weights are integers 1..10 and the default lambda fits k centers."""
        instance = generate(Problem.MOFL, 100, 4, seed=11, alpha=2.0)
        weights = [pt.w for pt in instance.points]
        assert all(float(w).is_integer() and 1 <= w <= 10 for w in weights)
        assert instance.lam == pytest.approx(SEGMENT_LENGTH / (2 * 4 * 2.0))
        assert (instance.k - 1) * instance.alpha * instance.lam <= SEGMENT_LENGTH

    def test_explicit_lambda_kept(self):
        """Test a given lambda overrides the default."""
        assert generate(Problem.MOFL, 3, 2, seed=0, lam=7.0).lam == 7.0

    def test_empty_instance(self):
        """Test n = 0 is allowed."""
        assert generate(Problem.COFL_LINE, 0, 2, seed=0).points == []

    def test_invalid_sizes(self):
        """Test negative n and zero k are schema errors."""
        with pytest.raises(SchemaError) as exc_info:
            generate(Problem.COFL_LINE, -1, 0, seed=0)
        assert len(exc_info.value.violations) == 2


class TestConversion:
    """Tests for turning documents into solver inputs."""

    def test_points_and_segment(self):
        """Test points keep weights and the segment keeps its endpoints."""
        instance = parse_instance(encode({**LINE_DOC, "points": [{"x": 1, "y": 2, "w": 3}]}))
        (pt,) = points_of(instance)
        assert (pt.x, pt.y, pt.weight) == (1.0, 2.0, 3.0)
        seg = segment_of(instance)
        assert (seg.q.x, seg.q.y) == (10.0, 0.0)

    def test_wrong_host(self):
        """Test asking a line instance for its circle is a schema error."""
        with pytest.raises(SchemaError):
            circle_of(parse_instance(encode(LINE_DOC)))
