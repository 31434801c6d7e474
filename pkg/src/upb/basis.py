"""Product bases and their JSON representation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from upb.errors import DimensionError, DomainError
from upb.numerics import as_vector

__all__ = ["ProductBasis", "vector_to_json", "vector_from_json"]

NORM_TOL = 1e-10


def vector_to_json(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def vector_from_json(data) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=complex)


@dataclass
class ProductBasis:
    """``states[i][j]`` is the local vector of state ``i`` on party ``j``.

    Parties are in the caller's order (``dims``), not necessarily sorted.
    """

    dims: tuple[int, ...]
    states: list[list[np.ndarray]]
    construction: str = "custom"
    seed: int | None = None
    b: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if len(self.dims) < 1 or any(d < 1 for d in self.dims):
            raise DomainError(f"bad local dimensions {self.dims}")
        if not self.states:
            raise DimensionError("a product basis needs at least one state")
        clean = []
        for i, state in enumerate(self.states):
            if len(state) != len(self.dims):
                raise DimensionError(f"state {i} has {len(state)} parties, expected {len(self.dims)}")
            local = []
            for j, vec in enumerate(state):
                vec = as_vector(vec)
                if vec.size != self.dims[j]:
                    raise DimensionError(f"state {i}, party {j}: length {vec.size} != {self.dims[j]}")
                if abs(np.linalg.norm(vec) - 1.0) > NORM_TOL:
                    raise DomainError(f"state {i}, party {j} is not unit norm")
                local.append(vec)
            clean.append(local)
        self.states = clean

    @classmethod
    def from_unnormalized(cls, dims: Sequence[int], states, **meta) -> "ProductBasis":
        normed = [[np.asarray(v, dtype=complex) / np.linalg.norm(v) for v in st] for st in states]
        return cls(tuple(dims), normed, **meta)

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def p(self) -> int:
        return len(self.dims)

    def __len__(self):
        return self.n

    def party_vectors(self, j: int) -> list[np.ndarray]:
        return [st[j] for st in self.states]

    def full_state(self, i: int) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for vec in self.states[i]:
            out = np.kron(out, vec)
        return out

    def without(self, i: int) -> "ProductBasis":
        states = [st for k, st in enumerate(self.states) if k != i]
        return ProductBasis(self.dims, states, f"{self.construction}-minus-{i}", self.seed, self.b)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "size": self.n,
            "states": [[vector_to_json(v) for v in st] for st in self.states],
            "construction": self.construction,
            "seed": self.seed,
            "b": self.b,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ProductBasis":
        states = [[vector_from_json(v) for v in st] for st in data["states"]]
        if "size" in data and data["size"] != len(states):
            raise DimensionError(f"size field {data['size']} != {len(states)} states")
        return cls(tuple(data["dims"]), states, data.get("construction", "custom"),
                   data.get("seed"), data.get("b"))

    @classmethod
    def load(cls, path) -> "ProductBasis":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())
