"""One test per acceptance criterion; each prints a single verdict line."""

import random
from math import comb

from oracles import macaulay_dimension, random_ideal, SPEC3
from quartic_chow.exactpoly import parse_poly, render
from quartic_chow.groebner import Ideal, buchberger_criterion, groebner_basis, ideal_equal, standard_monomials
from quartic_chow.pipeline.donaldson import conjecture_values, donaldson_table
from quartic_chow.sheafcalc import BundleClass, chern_to_ch, hrr_euler, projective_space, todd


PRESENTED_N = (
    "b1^2*d2 - 3*d2^2",
    "b1^2*b2 - b2*d2 - 3*d2^2",
    "b1^4 + 3*b2^2 - 9*b2*d2 - 3*d2^2",
    "2*b1*b2*d2 - 3*b1*d2^2",
    "3*b1*b2^2 - 7*b1*d2^2",
)


def verdict(label, ok, detail=""):
    print(f"{label}: {'PASS' if ok else 'FAIL'}{' ' + detail if detail else ''}")
    assert ok, detail


def checks(pipeline, stage):
    return {c.name: c for c in pipeline.reports[stage].checks}


def all_passed(pipeline, stage, names):
    got = checks(pipeline, stage)
    return all(n in got and got[n].passed for n in names)


def text(c):
    return render(c.value)


def test_ac01_moduli_of_kronecker_modules(pipeline):
    ring = pipeline.rings["N"]
    ok = (
        all_passed(pipeline, "N", [
            "phi(Delta) = 1",
            "relations after removing b3 generate the presented ideal",
            "elimination of b3 gives the presented ideal",
        ])
        and tuple(ring.series()) == (1, 1, 3, 3, 3, 1, 1)
        and ideal_equal(ring.ideal, Ideal(ring.spec, [parse_poly(r, ring.spec) for r in PRESENTED_N]))
    )
    verdict("AC1 A*(N) from anti-invariants", ok, str(tuple(ring.series())))


def test_ac02_universal_bundle_and_degree_12_relation(pipeline):
    u = pipeline.data["U"]
    c = checks(pipeline, "Q")
    ok = (
        u.rank == 12
        and c["c(U)"].passed
        and c["degree-12 relation"].passed
        and c["coefficient of rho^8"].computed == "27*b2^2 - 48*b2*d2 + 51*d2^2"
        and c["presentation of A*(Q)"].passed
    )
    verdict("AC2 c(U) and the A*(Q) relation", ok)


def test_ac03_quotient_by_the_restriction_kernel(pipeline):
    c = checks(pipeline, "boundary")["series of A*(Q)/J"]
    ok = c.computed == "(1, 2, 2, 1)" and c.passed
    verdict("AC3 A*(Q)/J series", ok, c.computed)


def test_ac04_blow_up_of_the_flag_locus(pipeline):
    q = list(pipeline.rings["Q"].series())
    extra = [0] * 18
    for i in range(1, 14):
        for j, a in enumerate((1, 2, 2, 1)):
            extra[i + j] += a
    expected = tuple(a + b for a, b in zip(q + [0] * (18 - len(q)), extra))
    ring = pipeline.rings["Mplus"]
    t = pipeline.data["TMplus"]
    ok = (
        tuple(ring.series()) == expected
        and text(t.c(1)) == "13*tau + 12*rho"
        and checks(pipeline, "Mplus")["c2(T_M+)"].passed
    )
    verdict("AC4 A*(M+) series and tangent classes", ok, str(tuple(ring.series())))


def test_ac05_descent_and_presentation(pipeline):
    c = checks(pipeline, "M")
    images = {
        "r*(alpha)": "tau + rho",
        "r*(beta)": "3*tau + b1",
        "r*(x)": "-3*tau*rho + tau*b1 + b2",
        "r*(y)": "-3*tau*rho + tau*b1 + d2",
        "r*(z)": "tau^2 + tau*rho + 1/3*tau*b1",
    }
    ring = pipeline.rings["M"]
    series = (1, 2, 6, 10, 14, 15, 16, 16, 16, 16, 16, 16, 15, 14, 10, 6, 2, 1)
    ok = (
        all(c[k].computed == v for k, v in images.items())
        and c["b2: equation from pairing with eta^13*k"].computed == "(3, (7, -3, -12))"
        and c["b2: equation from pairing with eta^12*k^2"].computed == "(0, (2, -1, -3))"
        and all(c[f"relation {i} vanishes under r*"].computed == "0" for i in range(1, 12))
        and tuple(ring.series()) == series
        and sum(ring.series()) == 192
        and c["r* is injective"].passed
    )
    verdict("AC5 descent images and A*(M) presentation", ok, str(tuple(ring.series())))


def test_ac06_tangent_classes(pipeline):
    c = checks(pipeline, "tangent")
    ok = (
        c["r*c1(T_M)"].computed == "12*tau + 12*rho"
        and c["r*c2(T_M)"].passed
        and all(c[f"r* of the printed c{i}(T_M)"].passed for i in range(18))
    )
    verdict("AC6 total Chern class of T_M through degree 17", ok)


def test_ac07_integration(pipeline):
    ring = pipeline.rings["M"]
    t = pipeline.data["TM"]
    ok = (
        ring.integrate(t.c(17)) == 192
        and ring.integrate(ring.element("1/9*beta*z^8")) == 1
        and len(ring.graded_monomials(17)) == 1
    )
    verdict("AC7 integral of c17 and the point class", ok)


def test_ac08_cycles(pipeline):
    c = checks(pipeline, "cycles")
    ok = (
        c["r*[C4] by pushforward"].computed == "tau^2 + tau*rho + 1/3*tau*b1"
        and c["r*[C4] = r*(z)"].passed
        and c["dimension of the kernel of multiplication by A in degree 2"].computed == "2"
    )
    verdict("AC8 class of C4 and the H(3) kernel", ok)


def test_ac09_donaldson_table(pipeline):
    calc = pipeline.donaldson()
    cells = {(q.k, q.m): q.chi for q in donaldson_table(calc, range(1, 6), range(1, 21), 1)}
    printed = pipeline.fx.grid()
    spot = {
        (3, 2): -2163, (4, 3): -3601488, (5, 4): -463995675, (2, 6): 148,
        (3, 9): 664, (4, 12): 2206, (5, 18): 3676190, (1, 20): 9322330905,
    }
    ok = (
        len(cells) == 100
        and all(isinstance(v, int) for v in cells.values())
        and all(cells[key] == v for key, v in printed.items())
        and all(cells[key] == v for key, v in spot.items())
    )
    verdict("AC9 table of Euler characteristics", ok, f"{len(printed)} printed cells")


def test_ac10_binomial_law(pipeline):
    calc = pipeline.donaldson()
    values = [calc.chi(m, 0) for m in range(18)]
    ok = values == [comb(m + 11, m) for m in range(18)]
    verdict("AC10 chi(M, m alpha) = C(m+11, m), m = 0..17", ok)


def test_ac11_lower_degree_conjecture(pipeline):
    ok = True
    for d in (1, 2, 3):
        rows = conjecture_values(pipeline, d, 10)
        ok = ok and [chi for _, chi, _ in rows] == [comb(m + 3 * d - 1, m) for m in range(11)]
    verdict("AC11 binomial law for d = 1, 2, 3", ok)


def test_ac12_property_suites(pipeline):
    failures = []

    if not all(buchberger_criterion(r.ideal) for r in pipeline.rings.values()):
        failures.append("S-polynomial reduction")

    rng = random.Random(12)
    tried = 0
    while tried < 100:
        ideal = random_ideal(rng, SPEC3)
        if not ideal.generators:
            continue
        tried += 1
        gb = groebner_basis(ideal)
        if any(len(standard_monomials(gb, d)) != macaulay_dimension(ideal, d) for d in range(6)):
            failures.append("Hilbert series oracle")
            break

    p2, tp2 = projective_space(2)
    if any(hrr_euler(p2, tp2, p2.gen("H") * m) != (m + 1) * (m + 2) // 2 for m in range(-5, 11)):
        failures.append("HRR on P2")

    p4, _ = projective_space(4)
    h = p4.gen("H")
    for _ in range(20):
        e, f = (
            BundleClass(rng.randint(0, 4), p4.one() + sum((h ** i * rng.randint(-4, 4) for i in range(1, 5)), p4.zero()))
            for _ in range(2)
        )
        if chern_to_ch(e * f).total() != chern_to_ch(e).total() + chern_to_ch(f).total():
            failures.append("ch additivity")
            break
        if todd(e * f).total() != todd(e).total() * todd(f).total():
            failures.append("td multiplicativity")
            break

    push = pipeline.maps["E/C4 push"]
    restrict = push.restriction
    for d in range(restrict.source.top_degree + 1):
        if any(not (k * push.exceptional).is_zero() for k in restrict.kernel(d)):
            failures.append(f"pushforward depends on the preimage in degree {d}")
            break

    verdict("AC12 property suites", not failures, ", ".join(failures))
