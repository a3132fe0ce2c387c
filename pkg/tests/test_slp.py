import numpy as np
import pytest

from slpinterp.errors import InputError, SlpSyntaxError
from slpinterp.ff import make_tower, random_elem, random_nonzero
from slpinterp.oracle import apply_substitution, brute_force_expand, evaluate, random_slp, random_sparse
from slpinterp.polynomial import SparsePolynomial
from slpinterp.slp import FieldRing, eval_in_ring, format_slp, parse_slp, probe_image, slp_from_sparse


def test_parse_examples(f13):
    s = parse_slp("b1 = z1 * z2")
    assert s.arity == 2 and len(s) == 1
    assert brute_force_expand(s, 13) == SparsePolynomial(2, {(1, 1): 1})
    s = parse_slp("b1 = z1 * z1\nb2 = b1 + 3")
    assert brute_force_expand(s, 13) == SparsePolynomial(1, {(2,): 1, (0,): 3})


@pytest.mark.parametrize(
    "text,line",
    [
        ("b1 = b2 + z1", 1),
        ("b1 = z1 + z1\nb2 = z1 ^ z1", 2),
        ("b1 = z1 + q7", 1),
        ("b1 = z1 + z1\nb3 = b1 * b1", 2),
        ("# only a comment\n\nb1 = z0 * z1", 3),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(SlpSyntaxError) as exc:
        parse_slp(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_parse_empty_and_arity():
    with pytest.raises(SlpSyntaxError):
        parse_slp("# nothing here\n")
    with pytest.raises(SlpSyntaxError):
        parse_slp("# nvars: 1\nb1 = z1 * z2")
    assert parse_slp("# nvars: 3\nb1 = z1 * z2").arity == 3
    assert parse_slp("b1 = z1 * z2", arity=4).arity == 4


def test_format_round_trip(rng):
    for _ in range(200):
        s = random_slp(int(rng.integers(1, 4)), int(rng.integers(1, 12)), rng)
        assert parse_slp(format_slp(s)) == s
    text = "# nvars: 2\nb1 = z1 * z2\nb2 = b1 - 7\nb3 = 5 + 4\n"
    assert format_slp(parse_slp(text)) == text


def test_eval_examples(f13, worked_slp):
    ring = FieldRing(f13)
    assert eval_in_ring(parse_slp("b1 = z1 * z2"), [f13.elem(3), f13.elem(4)], ring) == f13.elem(12)
    assert eval_in_ring(worked_slp, [f13.one(), f13.one()], ring) == f13.elem(8)


def test_worked_probe_images(f13, worked_slp):
    one = (f13.one(), f13.one())
    a = (f13.elem(6), f13.elem(8))
    assert probe_image(worked_slp, one, (4, 1), 5, f13).coeffs[:, 0, 0].tolist() == [2, 2, 4, 0, 0]
    assert probe_image(worked_slp, a, (4, 1), 5, f13).coeffs[:, 0, 0].tolist() == [10, 8, 6, 0, 0]
    assert probe_image(worked_slp, a, (1, 6), 7, f13).coeffs[:, 0, 0].tolist() == [10, 8, 0, 0, 6, 0, 0]


def test_fixture_slp_matches_generated(worked_f):
    from pathlib import Path

    text = (Path(__file__).parent / "data" / "worked_example.slp").read_text()
    assert brute_force_expand(parse_slp(text), 13) == worked_f


def test_slp_from_sparse_examples(rng):
    f = SparsePolynomial(2, {(3, 20): 4})
    assert brute_force_expand(slp_from_sparse(f), 13) == f
    c = SparsePolynomial(2, {(0, 0): 7})
    t = make_tower(13, 1, 2, rng)
    ring = FieldRing(t)
    for _ in range(20):
        pt = [random_elem(t, rng) for _ in range(2)]
        assert eval_in_ring(slp_from_sparse(c), pt, ring) == t.elem(7)
    z = SparsePolynomial.zero(3)
    assert format_slp(slp_from_sparse(z)).splitlines()[1] == "b1 = z1 - z1"
    assert brute_force_expand(slp_from_sparse(z), 13).is_zero()


def test_slp_from_sparse_round_trip(rng):
    for _ in range(100):
        n, D = int(rng.integers(1, 4)), int(rng.integers(2, 200))
        t = int(rng.integers(1, min(8, D**n) + 1))
        f = random_sparse(n, D, t, 101, rng)
        assert brute_force_expand(slp_from_sparse(f), 101) == f


def test_homomorphism_commutes(rng):
    for case in range(150):
        n = int(rng.integers(1, 4))
        t = make_tower(13, 1, int(rng.integers(1, 3)), rng) if case % 3 else make_tower(13, 1, 1)
        s = random_slp(n, int(rng.integers(1, 10)), rng)
        p = int(rng.choice([2, 3, 5, 7, 11, 23]))
        a = [random_nonzero(t, rng) for _ in range(n)]
        v = [int(x) for x in rng.integers(0, p, size=n)]
        assert probe_image(s, a, v, p, t) == apply_substitution(brute_force_expand(s, t), a, v, p, t)


def test_eval_matches_expansion(rng):
    t = make_tower(101, 1, 2, rng)
    ring = FieldRing(t)
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        s = random_slp(n, int(rng.integers(1, 8)), rng)
        pt = [random_elem(t, rng) for _ in range(n)]
        assert eval_in_ring(s, pt, ring) == evaluate(brute_force_expand(s, t), pt)


def test_probe_arity_checked(f13, worked_slp):
    with pytest.raises(InputError):
        probe_image(worked_slp, (f13.one(),), (1,), 5, f13)


def test_characteristic_two_base_extension():
    # v > 1: constants are prime-subfield integers, results live in F_4
    t = make_tower(2, 2, 2, np.random.default_rng(3))
    s = parse_slp("b1 = z1 * z1\nb2 = b1 + z1\nb3 = b2 + 1")
    rng = np.random.default_rng(4)
    for _ in range(50):
        a = [random_nonzero(t, rng)]
        v = [int(rng.integers(0, 5))]
        assert probe_image(s, a, v, 5, t) == apply_substitution(brute_force_expand(s, t), a, v, 5, t)
