import cmath
import math

import pytest

dbar = pytest.importorskip("dbar", reason="python module not installed (pip install -e . --no-build-isolation)")


def test_parse_eval_and_wirtinger():
    e = dbar.parse("conj(z1)^2*z2", 2)
    z = [0.3 + 0.1j, -0.2 + 0.5j]
    assert e(z) == pytest.approx(z[0].conjugate() ** 2 * z[1])
    assert e.d_bar(1)(z) == pytest.approx(2 * z[0].conjugate() * z[1])
    assert e.d_z(2)(z) == pytest.approx(z[0].conjugate() ** 2)
    assert str(dbar.parse(str(e), 2)) == str(e)


def test_parse_error_reports_position():
    with pytest.raises(dbar.ParseError, match="at position"):
        dbar.parse("conj(z1) *", 1)
    with pytest.raises(ValueError):
        dbar.parse("z3", 2)


def test_decomposition_sums_to_inverse_product():
    a = [1 + 2j, 0.5 - 0.1j, -3 + 0.2j]
    assert sum(dbar.decompose_inverse_product(a)) == pytest.approx(1 / (a[0] * a[1] * a[2]), rel=1e-13)


def test_kernel_derivative_first_order():
    # n = 2, d/d conj(a2) of conj(a2)/(a1 (|a1|^2 + |a2|^2)) = conj(a1)/(|a1|^2 + |a2|^2)^2
    a = [0.7 - 0.2j, 0.4 + 1.1j]
    r2 = abs(a[0]) ** 2 + abs(a[1]) ** 2
    assert dbar.kernel_derivative(a, 0, [1]) == pytest.approx(a[0].conjugate() / r2**2, rel=1e-13)


def test_exponent_choice_instances():
    assert dbar.exponent_choice(3, 1).parts == [9, 1, 6]
    c = dbar.exponent_choice(3, 2)
    assert (c.k, c.parts) == (24, [9, 9, 6])
    assert dbar.satisfies_bound_system(c)
    with pytest.raises(ValueError):
        dbar.exponent_choice(1, 0)


def test_one_dimensional_cauchy_transform():
    z = 0.3 - 0.4j
    (value,) = dbar.solve_t([{"type": "disk"}], ["1"], [[z]], nr=32, ntheta=64)
    assert abs(value - z.conjugate()) < 1e-10


def test_bidisk_manufactured_solution_both_operators():
    domains = [{"type": "disk"}, {"type": "disk"}]
    comps = ["conj(z2)", "conj(z1)"]
    points = [[0.2 + 0.1j, -0.3 + 0.2j]]
    want = points[0][0].conjugate() * points[0][1].conjugate()
    (t,) = dbar.solve_t(domains, comps, points, nr=16, ntheta=24)
    (tt,) = dbar.solve_ttilde(domains, comps, points, nr=16, ntheta=24)
    assert abs(t - want) < 1e-6
    assert abs(tt - want) < 1e-3


def test_points_outside_margin_are_rejected():
    with pytest.raises(ValueError):
        dbar.solve_t([{"type": "disk"}], ["1"], [[1.5 + 0j]])


def test_run_exponents_report():
    code, report = dbar.run({"mode": "exponents", "n": 3})
    assert code == 0
    assert report["status"] == "pass"
    assert report["config"]["n"] == 3
    assert [c["parts"] for c in report["results"]["choices"]] == [[1, 1, 6], [9, 1, 6], [9, 9, 6]]


def test_run_reports_are_reproducible():
    cfg = {
        "mode": "solve",
        "domains": [{"type": "disk"}],
        "potential": "conj(z1)^2",
        "quadrature": {"nr": 8, "ntheta": 16},
        "eval_points": {"count": 3, "seed": 9},
    }
    first = dbar.run(cfg)
    assert first == dbar.run(cfg)
    code, report = first
    assert code == 0
    for entry in report["results"]["operators"]["t"]:
        z = complex(*entry["point"][0])
        assert abs(complex(*entry["value"]) - z.conjugate() ** 2) < 1e-8
    assert math.isfinite(report["results"]["closedness"])
    assert cmath.isfinite(complex(*report["results"]["operators"]["t"][0]["value"]))
