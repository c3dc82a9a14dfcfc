import numpy as np
import pytest

from tproduct.tensor import Tensor3

_ACCEPTANCE: dict[int, str] = {}


class AcceptanceRecorder:
    def __init__(self):
        self.line = None

    def __call__(self, number: int, title: str, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        self.line = (number, f"{status} [{number:2d}] {title}" + (f": {detail}" if detail else ""))


@pytest.fixture
def acceptance(request):
    rec = AcceptanceRecorder()
    yield rec
    if rec.line is None:
        num = int(request.node.name.split("_")[1])
        _ACCEPTANCE[num] = f"FAIL [{num:2d}] {request.node.name}: did not complete"
    else:
        _ACCEPTANCE[rec.line[0]] = rec.line[1]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[num])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def rand_tensor(rng, *dims) -> Tensor3:
    return Tensor3(rng.standard_normal(dims))


def rel(a: Tensor3, b: Tensor3) -> float:
    den = max(np.linalg.norm(b.data), np.linalg.norm(a.data))
    return float(np.linalg.norm((a - b).data) / den) if den > 0 else 0.0
