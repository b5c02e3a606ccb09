import pytest

from quartic_chow.chow import (
    ChowError,
    DivisorPush,
    RingMorphism,
    build_quotient,
    compose,
    express_in_subring,
    gauss_bonnet_point,
)
from quartic_chow.sheafcalc import (
    BundleClass,
    blowup_chern,
    blowup_ring,
    projective_bundle,
    projective_space,
    pull_bundle,
)


@pytest.fixture(scope="module")
def blown_up_plane():
    """P^2 blown up at a point, its exceptional divisor and the restriction."""
    p2, tp2 = projective_space(2)
    point = build_quotient([("p", 1)], ["p"], 0, "1", "pt")
    to_point = RingMorphism(p2, point, {"H": "0"})
    ring, pull = blowup_ring(
        p2, to_point, [p2.gen("H")], BundleClass.trivial(point, 2), p2.element("H^2"), "tau", "Bl"
    )
    e, h, _ = projective_bundle(point, BundleClass.trivial(point, 2), "h", "E")
    restrict = RingMorphism(ring, e, {"tau": "h", "H": "0"})
    push = DivisorPush(restrict, -ring.gen("tau"))
    return dict(p2=p2, tp2=tp2, ring=ring, pull=pull, e=e, restrict=restrict, push=push)


def test_blowup_ring_shape(blown_up_plane):
    ring = blown_up_plane["ring"]
    assert tuple(ring.series()) == (1, 2, 1)
    exc = -ring.gen("tau")
    assert ring.integrate(exc * exc) == -1
    assert ring.integrate(ring.element("H^2")) == 1
    assert ring.integrate(ring.gen("H") * exc) == 0


def test_pushforward_independent_of_preimage(blown_up_plane):
    ring, e, restrict, push = (blown_up_plane[k] for k in ("ring", "e", "restrict", "push"))
    for d in range(ring.top_degree + 1):
        for k in restrict.kernel(d):
            assert (k * push.exceptional).is_zero()
    h = e.gen("h")
    base = push(h)
    for k in restrict.kernel(1):
        assert (restrict.preimage(h) + k) * push.exceptional == base
    assert ring.integrate(base) == 1
    assert push(e.one()) == push.exceptional


def test_blowup_chern_classes(blown_up_plane):
    ring, pull, push, e = (blown_up_plane[k] for k in ("ring", "pull", "push", "e"))
    tangent = pull_bundle(pull, blown_up_plane["tp2"])
    normal = BundleClass.trivial(e, 2)
    t = blowup_chern(tangent, e.one(), normal, push, e.gen("h"))
    assert ring.integrate(t.c(2)) == 4
    assert ring.integrate(t.c(1) * t.c(1)) == 8
    assert t.c(1) == ring.element("3*H + tau")


def test_kernel_generators_cut_out_the_image(blown_up_plane):
    restrict = blown_up_plane["restrict"]
    gens = restrict.kernel_generators()
    ring = restrict.source
    quotient = build_quotient(ring.spec, list(ring.ideal.basis) + [g.value for g in gens], ring.top_degree)
    dims = list(quotient.series())
    while dims[-1] == 0:
        dims.pop()
    assert tuple(dims) == tuple(restrict.target.series())
    with pytest.raises(ChowError):
        restrict.kernel_generators([ring.gen("tau")])


def test_morphism_rejects_ill_defined_maps():
    p2, _ = projective_space(2)
    p1, _ = projective_space(1, "L")
    RingMorphism(p2, p1, {"H": "L"})
    with pytest.raises(ChowError):
        RingMorphism(p1, p2, {"L": "H"})
    with pytest.raises(ChowError):
        RingMorphism(p2, p1, {"H": "L + 1"})


def test_compose_and_integration():
    p3, _ = projective_space(3)
    p2, _ = projective_space(2, "K")
    p1, _ = projective_space(1, "L")
    f = RingMorphism(p3, p2, {"H": "K"})
    g = RingMorphism(p2, p1, {"K": "L"})
    fg = compose(f, g)
    assert fg(p3.element("H")) == p1.gen("L")
    assert p3.integrate(p3.element("2*H^3")) == 2
    with pytest.raises(ChowError):
        p3.with_point(p3.element("H^2"))


def test_gauss_bonnet_point_normalizes():
    ring = build_quotient([("x", 1)], ["x^3"], 2)
    c_top = ring.element("3*x^2")
    normed = gauss_bonnet_point(ring, c_top, 3)
    assert normed.integrate(normed.element("x^2")) == 1


def test_projective_bundle_over_line():
    # Hirzebruch surface F_1 = P(O + O(1)) over P^1
    p1, _ = projective_space(1, "L")
    u = BundleClass(2, p1.element("1 + L"))
    ring, rho, pull = projective_bundle(p1, u, "rho", "F1")
    assert tuple(ring.series()) == (1, 2, 1)
    assert ring.integrate(rho * pull(p1.gen("L"))) == 1
    assert ring.integrate(rho * rho) == -1


def test_express_in_subring():
    p2, _ = projective_space(2)
    target = p2.element("4*H^2")
    poly = express_in_subring(target, {"u": p2.gen("H")})
    assert str(poly) == "4*u^2"
    with pytest.raises(ChowError):
        express_in_subring(p2.gen("H"), {"u": p2.element("H^2")})
