import numpy as np
import pytest


@pytest.fixture()
def trajectory_csv(tmp_path):
    t = np.linspace(0.0, 3.0, 25)
    p = 1 - np.abs(np.cos(t))
    P = np.clip(2 * (p - 0.5), 0, 1)
    path = tmp_path / "run" / "trajectory.csv"
    path.parent.mkdir()
    rows = "\n".join(f"{a},{b},{c},0" for a, b, c in zip(t, p, P))
    path.write_text("t,p_hat,P_hat,stderr_P\n" + rows + "\n")
    return path


@pytest.fixture()
def grid_csv(tmp_path):
    lines = ["phi1,phi2,S,stderr"]
    for f1 in np.linspace(0, 1, 6):
        for f2 in np.linspace(0, 1, 6):
            lines.append(f"{f1},{f2},{min(1.0, f1 * f2 + 0.1)},0")
    path = tmp_path / "grid" / "grid.csv"
    path.parent.mkdir()
    path.write_text("\n".join(lines) + "\n")
    return path
