#!/usr/bin/env python3
"""Build (if needed) and exercise the flagcap_py extension module.

Usage: python3 python/smoke_test.py [--rebuild]
"""

import math
import pathlib
import shutil
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
MODULE = ROOT / "python" / "flagcap_py.so"


def build() -> None:
    subprocess.run(
        ["cargo", "build", "-p", "flagcap-py", "--release", "--features", "extension-module"],
        check=True,
        cwd=ROOT,
    )
    shutil.copy2(ROOT / "target" / "release" / "libflagcap_py.so", MODULE)


if "--rebuild" in sys.argv or not MODULE.exists():
    build()

sys.path.insert(0, str(MODULE.parent))
import flagcap_py as fc  # noqa: E402


def close(a: float, b: float, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol


# Exact and reference values of the scalar bounds.
assert fc.no_cloning_bound(2, 1 / 3) == 0.0
assert close(fc.ad_capacity(0.0), 1.0)
assert close(fc.ad_capacity(0.5), 0.0)
assert close(fc.bb84_at_110(0.1), 0.292750401778, 1e-9)
fmin = fc.bb84_fmin_bound(0.1)
assert fmin <= fc.bb84_at_110(0.1) and close(fmin, 0.224946642946, 1e-6)
assert close(fc.dep_fmin_bound(2, 0.1), 0.537035773943, 1e-6)
assert close(fc.gad_conv_bound(0.2, 0.3), 0.478020861681, 1e-6)
assert close(fc.gad_fmin_half(0.25), 0.374078564999, 1e-6)

# Channel construction, application, and coherent information.
dep = fc.Channel.depolarizing(2, 0.1)
assert dep.dim_in == 2 and dep.dim_out == 2 and dep.kraus_count == 4
assert dep.cptp_residual() < 1e-12
mixed = [[0.5 + 0j, 0j], [0j, 0.5 + 0j]]
out = dep.apply(mixed)
assert close(out[0][0].real, 0.5, 1e-12) and close(out[1][1].real, 0.5, 1e-12)
assert close(dep.coherent_information(mixed), 0.496816268319, 1e-9)
assert close(dep.q1_lower("maximally-mixed"), 0.496816268319, 1e-9)
comp = dep.complementary()
assert comp.dim_out == dep.kraus_count
assert len(dep.choi()) == dep.dim_in * dep.dim_out

x_gate = fc.Channel([[[0j, 1 + 0j], [1 + 0j, 0j]]])
assert x_gate.kraus_count == 1

# Flagged extensions: optimizers, degradability checks, explicit build.
spec, bound = fc.FlaggedExtension.depolarizing_optimal(2, 0.1)
assert close(bound, 0.537035773943, 1e-6)
ok, residual = spec.check_degradability(1e-9)
assert ok and residual <= 1e-9
assert spec.degrading_residual() <= 1e-8
flagged = spec.build()
assert flagged.dim_in == 2 and flagged.dim_out == 2 * spec.flag_dim
assert close(sum(spec.weights), 1.0, 1e-12)
assert close(spec.mixture().cptp_residual(), 0.0, 1e-12)

mixture = fc.FlaggedExtension.unitary_mixture(0.75, x_gate)
assert mixture.component_count == 2
assert mixture.degrading_residual() <= 1e-8

direct = fc.FlaggedExtension(
    [(0.4, fc.Channel([[[math.sqrt(0.7) + 0j, 0j], [0j, math.sqrt(0.7) + 0j]],
                       [[math.sqrt(0.3) + 0j, 0j], [0j, -math.sqrt(0.3) + 0j]]])),
     (0.6, x_gate)],
    [[1 + 0j, 0j], [0j, 1 + 0j]],
)
ok, _ = direct.check_degradability(1e-9)
assert ok, "orthogonal flags over commuting components must verify"

# Pipelines: labels, grid round-trip, and the lower-bound sandwich.
curves = fc.dep_pipeline(2, [0.0, 0.1, 0.2])
labels = [label for label, _ in curves]
assert labels == ["q1_lower", "q_fmin", "q_nocloning", "q_conv"]
assert all(len(samples) == 3 for _, samples in curves)
assert curves[0][1][0][1] == 1.0  # log2(2) at zero noise
by_label = dict(curves)
for (p, lo), (_, up) in zip(by_label["q1_lower"], by_label["q_conv"]):
    assert lo <= up + 1e-9, f"lower bound exceeds upper bound at p={p}"

gad_curves = fc.gad_pipeline(0.5, [0.0, 0.25])
assert [label for label, _ in gad_curves] == ["q1_lower", "q_ad", "q_fmin_half", "q_conv"]

bb84_curves = fc.bb84_pipeline([0.0, 0.1])
assert [label for label, _ in bb84_curves] == ["q1_lower", "q_fmin", "q_at_110"]

print("smoke test passed:", fc.__version__)
