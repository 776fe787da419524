"""Smoke test for the horolab Python module.

Build and install it first:

    pip install --no-build-isolation -e crates/python
"""

import horolab


def main():
    efn = horolab.DifferentialSystem.diagonal(["0", "1"])
    assert efn.rank == 2
    assert efn.solve_series("0", ["1", "1"], 4)[1] == ["1", "1", "1/2", "1/6", "1/24"]

    pade = horolab.construct_section(efn, 2, ["0"], order=5)
    assert pade["section"]["components"] == [["-12", "-6", "-1"], ["12", "-6", "1"]]
    assert pade["achieved_orders"] == [5]

    airy = horolab.DifferentialSystem([["0", "1"], ["z", "0"]])
    zl = horolab.zero_lemma(airy, 2)
    assert zl["tower"]["rank"] == 2

    exp_coeffs = efn.solve_series("0", ["1", "1"], 60)[1]
    cert = horolab.certify_lg([exp_coeffs], "1")
    assert cert["bad_primes"] == [] and cert["verdict"]["kind"] == "certified_to_order"

    suite = horolab.nevanlinna("exp(z)", rmax=100.0, samples=1024)
    residuals = [row["fmt_residual"] for row in suite["rows"]]
    assert max(residuals) - min(residuals) < 0.1
    assert abs(suite["rho"]["rho"] - 1.0) < 0.05

    rel = horolab.relation_search(["e", "exp(2)"], degree=2, height=100, precision=200)
    assert rel["relation_text"] == "y1^2 - y2"

    fam = horolab.check_family(corrected=True, digits=20)
    assert fam["integrability"]["integrable"] and fam["conjugacy"]["conjugate"]

    assert horolab.parse_expression("(a-b)*x/z^2", ["a", "b"])
    assert horolab.factorial_valuation(20, 2) == 18
    try:
        horolab.parse_expression("(a-b)*x/z^2")
    except horolab.HorolabError:
        pass
    else:
        raise AssertionError("undeclared parameters must be rejected")

    print("horolab smoke test: ok")


if __name__ == "__main__":
    main()
