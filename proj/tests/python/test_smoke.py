import math

import pytest

import fracmarkov as fm


def test_special_functions():
    assert fm.gamma(5.0) == pytest.approx(24.0)
    assert fm.mittag_leffler(1.0, -1.0) == pytest.approx(math.exp(-1.0))
    assert fm.stable_exit_prob(0.7, 0.0) == pytest.approx(0.5)


def test_caputo_callable_and_expression_agree():
    beta = 0.5
    exact = 2 * 0.8 ** (1 - beta) / math.gamma(2 - beta)
    by_text = fm.frac_derivative("2*x", 0.0, beta, 0.8)
    by_callable = fm.frac_derivative(lambda x: 2 * x, 0.0, beta, 0.8)
    assert by_text == pytest.approx(exact, rel=1e-9)
    assert by_callable == pytest.approx(exact, rel=1e-7)
    assert fm.derivative_on_grid(1.0, 0.0, beta, [0.2, 0.5]) == [0.0, 0.0]


def test_interrupted_generator_is_minus_caputo():
    g = fm.Generator(fm.stable_one_sided(0.5, "negative"))
    v = fm.apply_interrupted(g, 0.0, 1.0, "x^2", 0.6)
    assert v == pytest.approx(-fm.frac_derivative("x^2", 0.0, 0.5, 0.6), rel=1e-7)


def test_exit_statistics_and_solvers():
    g = fm.Generator(fm.stable_symmetric(0.5))
    e = fm.exit_statistics(g, -1.0, 1.0, 0.25, paths=4000, seed=3, threads=2)
    ref = fm.stable_exit_prob(0.5, 0.25)
    assert abs(e["p_right"]["value"] - ref) < 4 * e["p_right"]["se"]
    again = fm.exit_statistics(g, -1.0, 1.0, 0.25, paths=4000, seed=3, threads=1)
    assert again == e

    grid = [-0.5, 0.0, 0.5]
    cf = fm.solve_closed_form(0.5, 0.0, 1.0, "0", grid)
    col = fm.solve(g, -1.0, 1.0, f_a=0.0, f_b=1.0, method="collocation", nodes=64, grid=grid)
    assert col["values"] == pytest.approx(cf["values"], abs=2e-3)


def test_errors_map_to_exceptions():
    with pytest.raises(fm.ConfigError):
        fm.frac_derivative("1 +", 0.0, 0.5, 0.5)
    with pytest.raises(fm.ConfigError):
        fm.stable_one_sided(0.5, "sideways")
    with pytest.raises(fm.Error):
        fm.frac_derivative("x", 0.0, 1.0, 0.5)


def test_run_config(tmp_path):
    out = tmp_path / "cf.csv"
    code, _ = fm.run_config(
        "command: solve\nboundary: {f_a: 0, f_b: 1}\ngrid: [0]\nsolve: {method: closed-form}\n", str(out)
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,value,se"
    assert float(lines[1].split(",")[1]) == pytest.approx(0.5)
    assert (tmp_path / "cf.meta.yaml").exists()
