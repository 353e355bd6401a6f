from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import eigh

_ACCEPTANCE: list[str] = []

S1 = np.array([[0, 1], [1, 0]], dtype=complex)
S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
S3 = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def record_criterion():
    def _record(number: int, name: str, passed: bool, detail: str = "") -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name}" + (f" ({detail})" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    g = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (g + g.conj().T)


def random_weights(d: int, rng: np.random.Generator) -> list[float]:
    w = np.sort(rng.random(d))[::-1]
    return list(w / w.sum())


# --- brute-force oracle: literal block matrices, scipy eigh roots, full Kronecker sums ---

def _blk(top: np.ndarray, bottom: np.ndarray) -> np.ndarray:
    n, m = top.shape[0], bottom.shape[0]
    out = np.zeros((n + m, n + m), dtype=complex)
    out[:n, :n], out[n:, n:] = top, bottom
    return out


def oracle_observables(d: int, theta: float, gamma1: float):
    c, s = np.cos(theta), np.sin(theta)
    if d == 2:
        return c * S1 + s * S3, c * S1 - s * S3, S1, gamma1 * S3
    eye = np.eye(d - 2)
    return (
        _blk(c * S3 + s * S1, eye),
        _blk(c * S3 - s * S1, eye),
        _blk(eye, S3),
        _blk(eye, gamma1 * S1),
    )


def _root(e: np.ndarray) -> np.ndarray:
    # sqrtm loses ~1e-9 on singular effects; eigenvalues at rounding level are snapped to 0
    # so that sqrt(1e-16) does not leak 1e-8 into the root
    lam, v = eigh(e)
    lam = np.where(np.abs(lam) < 1e-12, 0.0, lam)
    return (v * np.sqrt(lam)) @ v.conj().T


def oracle_final_state(d: int, weights, theta: float, gamma1: float) -> np.ndarray:
    amp = np.sqrt(np.asarray(weights, dtype=float))
    psi = np.zeros(d * d, dtype=complex)
    for i, a in enumerate(amp):
        psi[i * d + i] = a
    rho = np.outer(psi, psi.conj())
    a0, a1, b0, b1 = oracle_observables(d, theta, gamma1)
    ident = np.eye(d)
    for side, (o0, o1) in (("B", (b0, b1)), ("A", (a0, a1))):
        out = np.zeros_like(rho)
        for o in (o0, o1):
            for sign in (1, -1):
                root = _root((ident + sign * o) / 2)
                k = np.kron(ident, root) if side == "B" else np.kron(root, ident)
                out += 0.5 * k @ rho @ k.conj().T
        rho = out
    return rho
