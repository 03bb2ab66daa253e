"""Smoke test for the chaoskit extension module.

Build with `maturin develop` (or copy target/release/libchaoskit.so to
chaoskit.so on PYTHONPATH) and run `python smoke_test.py`.
"""
import json
import math

import chaoskit


def main():
    t = chaoskit.Operator.from_spec('{"kind":"weighted_backward_shift","dim":4,"weights":"1/n"}')
    assert t.dim == 4
    assert all(abs(z) == 0 for z in t.eigenvalues())

    half = chaoskit.Operator.identity(3).shift(-0.5)
    norms = chaoskit.orbit_norms(half, [1, 0, 0], 10)
    assert norms == [0.5 ** n for n in range(11)]
    assert chaoskit.li_yorke_evidence(half, [1, 0, 0], 64)["kind"] == "no_evidence"

    blocks = chaoskit.Operator.from_spec('{"kind":"block_perturbation","blocks":36}')
    x = [0j] * blocks.dim
    for j in range(1, 37):
        start = j * (j - 1) // 2
        for k in range(start, start + j):
            x[k] += 1 / (j * j * math.sqrt(j))
    assert chaoskit.li_yorke_evidence(blocks, x, 1200)["kind"] == "li_yorke_evidence"

    m = chaoskit.Operator([[1 + 2j, 0.5], [0.25j, 3]])
    u, p = chaoskit.polar_decompose(m)
    up = u.matmul(p).to_list()
    assert max(abs(up[i][k] - m.to_list()[i][k]) for i in range(2) for k in range(2)) < 1e-12
    assert chaoskit.singular_reciprocity_defect(m) < 1e-10

    assert chaoskit.density_reciprocal_defect(3, [0.3, 0.7, 1.5, 4.0]) < 1e-12
    assert chaoskit.integral_identity_defect([1, 0, 0, 1], 2) < 1e-8

    z2 = [0, 0, 1]
    assert chaoskit.kernel_dimension(z2, 0.25) == 2
    assert chaoskit.kernel_dimension(z2, 4) == 0
    assert chaoskit.is_cowen_douglas(z2) == ("yes", 2)
    chaotic, lo, hi = chaoskit.classify_multiplier([0.5, 1])
    assert chaotic and lo == 0.0 and abs(hi - 1.5) < 1e-9
    assert chaoskit.adjoint_eigen_residual([0.5, 0, 1], 0.4 + 0.2j, 64) <= 1e-10

    ok, verdicts = chaoskit.run_scenario('{"scenario":"theorem6_check"}')
    assert ok and json.loads(verdicts)["integral_identity"]["pass"] is True

    try:
        chaoskit.Operator.from_spec('{"kind":"weighted_backward_shift","dim":0}')
    except ValueError:
        pass
    else:
        raise AssertionError("dim 0 accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
