import numpy as np
import pytest

from monfg import BoxDomain, Shape, check_triple, falsify_shape, jensen_gap_strict_quasiconvex
from monfg.errors import InvalidInputError
from monfg.shapes import default_box
from monfg.utility import linear_utility, parse_utility

BOX = BoxDomain((-2.0, -2.0), (2.0, 2.0))
SMALL_BOX = BoxDomain((-10.0, -10.0), (1.0, 1.0))


def test_quadratic_is_not_concave():
    u = parse_utility("(+ (pow p1 2) (pow p2 2))")
    cx = falsify_shape(u, Shape.CONCAVE, BOX, trials=1000)
    assert cx is not None and cx.violation_margin > 0
    assert falsify_shape(u, Shape.CONVEX, BOX, trials=20_000) is None
    assert falsify_shape(u, Shape.QUASICONVEX, BOX, trials=20_000) is None
    assert falsify_shape(u, Shape.STRICTLY_CONVEX, BOX, trials=20_000) is None


def test_kinked_utility_on_small_box(counter):
    # the kinked utility violates quasiconvexity only in a small region; seed 0 misses it in 100000 draws, seed 1 does not
    u = counter.utilities[0]
    cx = falsify_shape(u, Shape.QUASICONVEX, SMALL_BOX, trials=100_000, seed=1)
    assert cx is not None
    assert check_triple(u, Shape.QUASICONVEX, cx.x1, cx.x2, cx.lam) == cx


def test_explicit_triple(counter):
    cx = check_triple(counter.utilities[0], Shape.QUASICONVEX, (1, 0), (0, 1), 0.5)
    assert cx is not None and cx.lhs > cx.rhs
    assert check_triple(counter.utilities[0], Shape.QUASICONCAVE, (1, 0), (0, 1), 0.5) is None


def test_product_shapes():
    u = parse_utility("(* p1 p2)")
    for shape in (Shape.CONVEX, Shape.CONCAVE, Shape.QUASICONVEX, Shape.QUASICONCAVE):
        assert falsify_shape(u, shape, BOX, trials=20_000) is not None


def test_linear_is_not_strictly_convex():
    u = linear_utility([1.0, -2.0])
    for shape in Shape:
        cx = falsify_shape(u, shape, BOX, trials=5000)
        # linear functions are strictly quasiconvex off their level sets,
        # which random draws almost never hit
        assert (cx is not None) == (shape in (Shape.STRICTLY_CONVEX, Shape.STRICTLY_CONCAVE))
    # on a level set the strict quasi shapes do fail
    assert check_triple(u, Shape.STRICTLY_QUASICONVEX, (2, 1), (0, 0), 0.5) is not None


def test_hierarchy():
    # convex implies quasiconvex, so a quasiconvex counterexample rules out convexity
    rng = np.random.default_rng(4)
    exprs = ["(* p1 p2)", "(- (pow p1 3) p2)", "(max p1 (neg p2))", "(min (pow p1 2) p2)"]
    for text in exprs:
        u = parse_utility(text)
        for weak, strong in ((Shape.QUASICONVEX, Shape.CONVEX), (Shape.QUASICONCAVE, Shape.CONCAVE),
                             (Shape.CONVEX, Shape.STRICTLY_CONVEX)):
            seed = int(rng.integers(1000))
            if falsify_shape(u, weak, BOX, trials=20_000, seed=seed) is not None:
                assert falsify_shape(u, strong, BOX, trials=20_000, seed=seed) is not None


def test_seeded_reproducible():
    u = parse_utility("(* p1 p2)")
    a = falsify_shape(u, Shape.QUASICONVEX, BOX, trials=5000, seed=7)
    b = falsify_shape(u, Shape.QUASICONVEX, BOX, trials=5000, seed=7)
    assert a == b


def test_degenerate_box():
    box = BoxDomain((1.0, 1.0), (1.0, 1.0))
    u = parse_utility("(* p1 p2)")
    assert falsify_shape(u, Shape.CONVEX, box, trials=1000) is None
    assert falsify_shape(u, Shape.STRICTLY_CONVEX, box, trials=1000) is None


def test_bad_inputs():
    with pytest.raises(InvalidInputError):
        BoxDomain((0.0,), (-1.0,))
    with pytest.raises(InvalidInputError):
        falsify_shape(parse_utility("p3"), Shape.CONVEX, BOX)
    with pytest.raises(ValueError):
        Shape("wobbly")


def test_default_box(counter):
    box = default_box(counter.game)
    assert box.lo == pytest.approx((-11.1, -0.1))
    assert box.hi == pytest.approx((2.1, 1.1))


def test_jensen_gap():
    u = parse_utility("(+ (pow p1 2) (pow p2 2))")
    mix, top = jensen_gap_strict_quasiconvex(u, [(1, 0), (0, 1), (-1, 0)], [0.2, 0.3, 0.5])
    assert mix < top
    with pytest.raises(InvalidInputError):
        jensen_gap_strict_quasiconvex(u, [(1, 0)], [1.0])
    with pytest.raises(InvalidInputError):
        jensen_gap_strict_quasiconvex(u, [(1, 0), (0, 1)], [0.0, 1.0])
    with pytest.raises(InvalidInputError):
        jensen_gap_strict_quasiconvex(u, [(1, 0), (1, 0)], [0.5, 0.5])
