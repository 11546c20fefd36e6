import numpy as np
import pytest

from chanadapt.geometry import Montage, builtin_montage, from_arrays


@pytest.fixture(scope="session")
def ten_ten_64() -> Montage:
    return builtin_montage("ten_ten_64")


@pytest.fixture(scope="session")
def ten_twenty_19() -> Montage:
    return builtin_montage("ten_twenty_19")


@pytest.fixture(scope="session")
def fibonacci_64() -> Montage:
    """Quasi-uniform 64-point sphere cover; a dense synthetic montage."""
    n = 64
    i = np.arange(n)
    golden = np.pi * (3.0 - np.sqrt(5.0))
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(1.0 - z * z)
    pos = np.column_stack([r * np.cos(golden * i), r * np.sin(golden * i), z])
    return from_arrays([f"u{k}" for k in range(n)], pos, "fibonacci_64")


def random_spd(rng: np.random.Generator, dim: int, spread: float = 1.0) -> np.ndarray:
    """Random SPD matrix with eigenvalues roughly in [e^-spread, e^spread]."""
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    eigs = np.exp(rng.uniform(-spread, spread, size=dim))
    return (q * eigs) @ q.T
