"""Smoke test for the curie_weiss extension module.

Build and install first, for example:
    pip install --no-build-isolation -e crates/python
"""

import json
import math

import curie_weiss as cw


def main():
    params = cw.ModelParams.critical(2)
    assert params.regime() == "critical"
    table = cw.LogWeightTable(params)
    pmf = dict(table.pmf_by_spin_sum())
    e = math.e
    assert abs(pmf[2] - e / (2 * e + 2)) < 1e-12
    assert abs(sum(table.probabilities()) - 1.0) < 1e-12

    big = cw.LogWeightTable(cw.ModelParams.critical(10_000))
    assert abs(big.exact_tail_critical(0.0) - 0.5) < 0.01

    law = cw.LimitLaw()
    assert abs(law.c1 - 2 * 12 ** 0.25 * math.gamma(1.25)) < 1e-12
    assert abs(law.cdf(1.0) + law.cdf(-1.0) - 1.0) < 1e-12
    assert law.error_envelope(10**6, 0.0) > 0

    try:
        law.error_envelope(100, 10.0)
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range envelope should raise")

    try:
        cw.ModelParams(0)
    except ValueError:
        pass
    else:
        raise AssertionError("n = 0 should raise")

    roots = cw.solve_fixed_point(2.0, 0.0)
    assert len(roots) == 2 and abs(roots[0] + roots[1]) < 1e-12

    lower, upper = cw.stirling_bounds(1000)
    assert lower <= cw.log_factorial(1000) <= upper
    assert cw.j_derivative(4, 0.5) == -32.0

    sampler = cw.Sampler(cw.ModelParams(50, 1.0, 0.0), 7)
    draws = sampler.sample(1000)
    assert draws == cw.Sampler(cw.ModelParams(50, 1.0, 0.0), 7).sample(1000)
    assert all(abs(d) <= 50 and d % 2 == 0 for d in draws)

    report = json.loads(cw.verify("J-lemma"))
    assert report["passed"] and report["worst_case"] == 0.0
    assert "corollary" in cw.check_ids()
    print("curie_weiss smoke test passed")


if __name__ == "__main__":
    main()
