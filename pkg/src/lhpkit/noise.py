"""Biased Pauli data errors and measurement-bit flips.

Bias tailoring enters here as a qubit-sector error-model swap: on the
rotated sector the roles of the X and Z probabilities are exchanged
(Y is fixed by the rotation up to phase, which the GF(2) symplectic
components ignore).  Sampling draws the Pauli category with the
unswapped probabilities and relabels the components in the sector, so a
run with a shared rng stream is bit-identical to sampling without the
swap and exchanging the sector components afterwards.

Randomness comes from counter-based Philox streams keyed by
(master_seed, trial_index, substream), which makes concurrent trials
reproducible regardless of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelSpec:
    """Biased Pauli channel plus independent measurement flips."""

    p: float
    beta_x: float = 1.0
    beta_y: float = 1.0
    beta_z: float = 1.0
    q: float = 0.0
    sector_swap_boundary: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must be in [0, 1], got {self.q}")
        if min(self.beta_x, self.beta_y, self.beta_z) < 0:
            raise ValueError("bias weights must be non-negative")
        if self.beta_x + self.beta_y + self.beta_z <= 0:
            raise ValueError("at least one bias weight must be positive")

    @classmethod
    def from_eta(cls, p: float, eta: float, q: float = 0.0,
                 sector_swap_boundary: int | None = None) -> "ChannelSpec":
        """Bias ratio eta = p_Z / p_X with no Y component: beta = (1, 0, eta)."""
        return cls(p=p, beta_x=1.0, beta_y=0.0, beta_z=eta, q=q,
                   sector_swap_boundary=sector_swap_boundary)

    @property
    def eta(self) -> float:
        return self.beta_z / self.beta_x if self.beta_x > 0 else float("inf")

    def with_boundary(self, boundary: int | None) -> "ChannelSpec":
        from dataclasses import replace

        return replace(self, sector_swap_boundary=boundary)


@dataclass(frozen=True)
class PauliError:
    """Symplectic components of a Pauli error; Y sets both bits."""

    ex: np.ndarray
    ez: np.ndarray

    @property
    def n(self) -> int:
        return self.ex.shape[0]


def channel_probs(spec: ChannelSpec) -> tuple[float, float, float]:
    """(p_X, p_Y, p_Z) = p * beta_component / sum(beta); sums to p exactly."""
    beta = spec.beta_x + spec.beta_y + spec.beta_z
    return (
        spec.p * spec.beta_x / beta,
        spec.p * spec.beta_y / beta,
        spec.p * spec.beta_z / beta,
    )


def rng_stream(master_seed: int, *path: int) -> np.random.Generator:
    """Named, platform-stable stream derived from the master seed."""
    seq = np.random.SeedSequence((master_seed, *path))
    return np.random.Generator(np.random.Philox(seq))


def sample_pauli_error(spec: ChannelSpec, n: int, rng: np.random.Generator) -> PauliError:
    """One i.i.d. biased-Pauli draw per qubit, sector swap applied."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    px, py, pz = channel_probs(spec)
    u = rng.random(n)
    # categories: 0 = identity, 1 = X, 2 = Y, 3 = Z
    edges = np.array([1.0 - spec.p, 1.0 - spec.p + px, 1.0 - spec.p + px + py])
    cat = np.searchsorted(edges, u, side="right")
    x_flip = (cat == 1) | (cat == 2)
    z_flip = (cat == 3) | (cat == 2)
    b = spec.sector_swap_boundary
    if b is not None and b < n:
        swapped = np.arange(n) >= b
        ex = np.where(swapped, z_flip, x_flip)
        ez = np.where(swapped, x_flip, z_flip)
    else:
        ex, ez = x_flip, z_flip
    return PauliError(ex.astype(np.uint8), ez.astype(np.uint8))


def sample_measurement_error(q: float, m_bits: int, rng: np.random.Generator) -> np.ndarray:
    """Independent Bernoulli(q) flips on the syndrome bits."""
    if m_bits < 0:
        raise ValueError(f"m_bits must be >= 0, got {m_bits}")
    if q <= 0.0:
        return np.zeros(m_bits, dtype=np.uint8)
    if q >= 1.0:
        return np.ones(m_bits, dtype=np.uint8)
    return (rng.random(m_bits) < q).astype(np.uint8)


def data_priors(spec: ChannelSpec, n: int, boundary: int | None) -> tuple[np.ndarray, np.ndarray]:
    """Per-qubit (P(ex=1), P(ez=1)) including the sector swap.

    These feed the X- and Z-error decoders; Y contributes to both
    components.
    """
    px, py, pz = channel_probs(spec)
    prob_x = np.full(n, px + py)
    prob_z = np.full(n, pz + py)
    if boundary is not None and boundary < n:
        swapped = np.arange(n) >= boundary
        prob_x = np.where(swapped, pz + py, px + py)
        prob_z = np.where(swapped, px + py, pz + py)
    return prob_x, prob_z
