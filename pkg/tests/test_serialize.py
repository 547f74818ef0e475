import json
import random
from fractions import Fraction

import pytest

from tropi.serialize import (
    SerializationError,
    catalogue_from_dict,
    catalogue_to_dict,
    complex_from_dict,
    complex_to_dict,
    fraction_from_str,
    fraction_to_str,
    lambda_from_dict,
    lambda_to_dict,
    load_json,
    realization_from_dict,
    realization_to_dict,
    save_json,
    slopes_from_dict,
    slopes_to_dict,
    subdivision_from_dict,
    subdivision_to_dict,
    type_from_dict,
    type_to_dict,
)
from tropi.subdivide import identity_subdivision, sensitize, stellar

from fixtures import golden_lambda, golden_type, quadrant
from generators import (
    random_catalogue,
    random_complex,
    random_lambda,
    random_raw_type,
    random_realization,
)


def _json_round(payload):
    """Force a pass through actual JSON text."""
    return json.loads(json.dumps(payload))


class TestFractions:
    def test_round_trip(self):
        rng = random.Random(7)
        for _ in range(200):
            f = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            assert fraction_from_str(fraction_to_str(f)) == f

    def test_canonical_rejected(self):
        with pytest.raises(SerializationError):
            fraction_from_str("2/4")
        with pytest.raises(SerializationError):
            fraction_from_str("1/-3")
        with pytest.raises(SerializationError):
            fraction_from_str("1/0")
        with pytest.raises(SerializationError):
            fraction_from_str("abc")
        with pytest.raises(SerializationError):
            fraction_from_str(1.5)


class TestRoundTrips:
    def test_complex(self):
        rng = random.Random(11)
        for _ in range(40):
            c = random_complex(rng)
            assert complex_from_dict(_json_round(complex_to_dict(c))) == c

    def test_subdivision(self):
        rng = random.Random(13)
        subs = [
            identity_subdivision(quadrant()),
            stellar(quadrant(), frozenset(range(2))),
            sensitize(quadrant(), [(1, 2), (2, 1)]),
        ]
        for _ in range(10):
            c = random_complex(rng, 2)
            big = [m for m in c.max_cones if len(m) >= 2]
            if big:
                subs.append(stellar(c, sorted(big, key=sorted)[0]))
        for s in subs:
            back = subdivision_from_dict(_json_round(subdivision_to_dict(s)))
            assert back == s

    def test_type(self):
        rng = random.Random(17)
        for _ in range(40):
            t = random_raw_type(rng, random_complex(rng))
            assert type_from_dict(_json_round(type_to_dict(t))) == t
        g = golden_type(with_slopes=True)
        assert type_from_dict(_json_round(type_to_dict(g))) == g

    def test_lambda(self):
        rng = random.Random(19)
        for _ in range(40):
            lam = random_lambda(rng, random_complex(rng))
            assert lambda_from_dict(_json_round(lambda_to_dict(lam))) == lam
        assert (
            lambda_from_dict(_json_round(lambda_to_dict(golden_lambda())))
            == golden_lambda()
        )

    def test_realization(self):
        rng = random.Random(23)
        for _ in range(40):
            t = random_raw_type(rng, random_complex(rng))
            r = random_realization(rng, t)
            assert realization_from_dict(_json_round(realization_to_dict(r))) == r

    def test_catalogue(self):
        rng = random.Random(29)
        for _ in range(40):
            cat = random_catalogue(rng, rng.randint(1, 4))
            assert catalogue_from_dict(_json_round(catalogue_to_dict(cat))) == cat

    def test_slopes(self):
        slopes = [(1, 2), (2, 1), (0, 1)]
        assert set(slopes_from_dict(_json_round(slopes_to_dict(slopes)))) == set(
            slopes
        )


class TestFiles:
    def test_atomic_write_and_load(self, tmp_path):
        path = str(tmp_path / "c.json")
        c = quadrant()
        save_json(path, complex_to_dict(c))
        assert complex_from_dict(load_json(path)) == c
        leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
        assert not leftovers

    def test_float_rejected_on_load(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"x": 1.5}')
        with pytest.raises(SerializationError):
            load_json(str(path))

    def test_missing_file(self):
        with pytest.raises(SerializationError):
            load_json("/nonexistent/nope.json")

    def test_no_floats_in_output(self, tmp_path):
        rng = random.Random(31)
        t = random_raw_type(rng, random_complex(rng))
        r = random_realization(rng, t)
        path = str(tmp_path / "r.json")
        save_json(path, realization_to_dict(r))
        text = (tmp_path / "r.json").read_text()
        parsed = json.loads(text)

        def walk(x):
            assert not isinstance(x, float)
            if isinstance(x, dict):
                for v in x.values():
                    walk(v)
            elif isinstance(x, list):
                for v in x:
                    walk(v)

        walk(parsed)


class TestBadPayloads:
    def test_bad_complex(self):
        with pytest.raises(SerializationError):
            complex_from_dict({"rays": []})

    def test_bad_type(self):
        with pytest.raises(SerializationError):
            type_from_dict({"vertices": ["v"]})

    def test_bad_subdivision_coverage(self):
        s = identity_subdivision(quadrant())
        data = _json_round(subdivision_to_dict(s))
        data["cone_image"] = data["cone_image"][:-1]
        with pytest.raises(SerializationError):
            subdivision_from_dict(data)
