"""Smoke test for the brownian_tree extension module.

Builds the extension with cargo when no importable copy is found, then
exercises each exported entry point.
"""

import json
import math
import pathlib
import shutil
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
BUILD = ROOT / "target" / "python"


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "crt-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    BUILD.mkdir(parents=True, exist_ok=True)
    shutil.copy(ROOT / "target" / "release" / "libbrownian_tree.so", BUILD / "brownian_tree.so")


def load():
    try:
        import brownian_tree
    except ImportError:
        build()
        sys.path.insert(0, str(BUILD))
        import brownian_tree
    return brownian_tree


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    bt = load()

    v = bt.evaluate("height", "sf", 1.0)
    close(v.value, 0.99638073866599430214, 1e-14)
    assert v.trunc_bound < 1e-13 and v.terms_used >= 1
    close(float(bt.evaluate("diameter", "pdf", 2.0, mode="dual")), 0.8082957547348187025, 1e-13)
    close(bt.joint_survival(2.0, 1.5), 0.69164709219671558463, 1e-13)

    height = bt.Law("height")
    close(height.moment(1)[0], math.sqrt(math.pi), 1e-9)
    close(height.cdf(height.quantile(0.3)), 0.3, 1e-10)
    draws = height.sample(1000, seed=1)
    assert draws == height.sample(1000, seed=1) and all(x > 0 for x in draws)

    close(bt.laplace_closed_form(1.0, 1.0, 1.0), 0.099808675076967718615, 1e-15)
    value, err, _ = bt.laplace_numeric(1.0, 1.0, 0.5)
    close(value, 0.099808675076967718615, 1e-7)
    for name, lhs, rhs in bt.excursion_identities(1.0, 1.0):
        close(lhs, rhs, 1e-8)

    lhs, rhs, bound = bt.jacobi_check(0.7, 0.3, -0.2)
    assert math.dist(lhs, rhs) <= 1e-12

    h, d = bt.labelled_tree(100, seed=2)
    assert h <= d <= 2 * h
    h, d = bt.planar_tree(100, seed=2)
    assert h <= d <= 2 * h
    values, gamma, diam = bt.excursion(1024, seed=2)
    assert len(values) == 1025 and gamma == max(values) and gamma <= diam <= 2 * gamma

    report = json.loads(bt.convergence_study("planar", 200, 500, seed=4))
    assert report["reports"][0]["reference_law"] == "diameter_d"

    try:
        bt.Law("nonsense")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown law accepted")

    print("brownian_tree smoke test: ok")


if __name__ == "__main__":
    main()
