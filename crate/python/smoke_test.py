"""Smoke test for the xrl extension module."""

import math
import tempfile
from pathlib import Path

import xrl


def main() -> None:
    geom = xrl.LegGeometry.from_heights(1.45, 0.6)
    assert abs(geom.l1 + geom.l2 - 1.45) < 1e-12
    assert abs(geom.l2 - geom.l1 - 0.6) < 1e-12

    q = xrl.solve_squat_posture(geom, 1.0)
    t, z, phi = xrl.forward_kinematics(geom, q)
    assert abs(t) < 1e-9 and abs(z - 1.0) < 1e-9 and abs(phi) < 1e-9
    assert len(xrl.jacobian(geom, q)) == 3

    load = xrl.LoadCase.squat(36.3, 22.7, 222.4)
    model = xrl.SquatModel(geom, load)
    sag = model.sagittal(1.0)
    mm = model.minimax(1.0)
    l2, (fy, m) = model.l2_optimal(1.0)
    assert mm.max_abs() <= l2.max_abs() + 1e-9
    assert all(math.isfinite(v) for v in sag.as_tuple())
    rows = model.profile("frontal_minimax", 50)
    assert len(rows) == 50

    peaks = xrl.stair_peaks(geom, xrl.LoadCase.stair(578.3))
    assert abs(peaks["ankle"] - 115.66) < 1e-2

    assert abs(xrl.required_gear_ratio(168.0, 1) - 168.0 / 22.5) < 1e-9
    a = xrl.differential_map(1.0, 0.5, 3.0)
    b = xrl.differential_map(2.0, 1.0, 3.0)
    assert all(abs(2 * x - y) < 1e-12 for x, y in zip(a, b))

    recon = xrl.reconciliation()
    assert len(recon) == 12 and all(r["status"] != "mismatch" for r in recon)

    with tempfile.TemporaryDirectory() as d:
        out = xrl.run("stairs", Path(d))
        assert (Path(out) / "stairs.csv").exists()
    try:
        xrl.LegGeometry(-1.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative link accepted")

    print("smoke test ok:", mm)


if __name__ == "__main__":
    main()
