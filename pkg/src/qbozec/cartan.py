"""Borcherds-Cartan data: an even integer matrix with real rows (diagonal 2)
and imaginary rows (diagonal <= 0), symmetrized by positive integers."""

from __future__ import annotations

import json


class DatumError(ValueError):
    pass


class BorcherdsCartanDatum:
    """Index set, Cartan matrix A, and symmetrizer r with D*A symmetric.

    Real indices have a_ii = 2; imaginary ones a_ii in {0, -2, -4, ...};
    isotropic means a_ii = 0.  The symmetric pairing is
    (alpha_i, alpha_j) = r_i * a_ij.
    """

    def __init__(self, indices, cartan, symmetrizer):
        self.indices: tuple[str, ...] = tuple(str(s) for s in indices)
        self.cartan: tuple[tuple[int, ...], ...] = tuple(
            tuple(int(x) for x in row) for row in cartan
        )
        self.symmetrizer: tuple[int, ...] = tuple(int(x) for x in symmetrizer)
        self._validate()
        self.rank = len(self.indices)

    def _validate(self):
        n = len(self.indices)
        if len(set(self.indices)) != n or n == 0:
            raise DatumError("index names must be nonempty and distinct")
        if len(self.cartan) != n or any(len(row) != n for row in self.cartan):
            raise DatumError(f"Cartan matrix must be {n}x{n}")
        if len(self.symmetrizer) != n:
            raise DatumError(f"symmetrizer must have length {n}")
        A, r = self.cartan, self.symmetrizer
        for i in range(n):
            d = A[i][i]
            if not (d == 2 or (d <= 0 and d % 2 == 0)):
                raise DatumError(
                    f"diagonal entry a[{self.indices[i]},{self.indices[i]}]={d} "
                    "must be 2 or a nonpositive even integer"
                )
            if r[i] <= 0:
                raise DatumError(f"symmetrizer entry for {self.indices[i]} must be positive")
        for i in range(n):
            for j in range(n):
                if i != j and A[i][j] > 0:
                    raise DatumError(
                        f"off-diagonal entry a[{self.indices[i]},{self.indices[j]}]="
                        f"{A[i][j]} must be <= 0"
                    )
                if r[i] * A[i][j] != r[j] * A[j][i]:
                    raise DatumError(
                        f"symmetrizer fails at ({self.indices[i]},{self.indices[j]}): "
                        f"{r[i]}*{A[i][j]} != {r[j]}*{A[j][i]}"
                    )

    # -- classification -------------------------------------------------
    def is_real(self, i: int) -> bool:
        return self.cartan[i][i] == 2

    def is_imaginary(self, i: int) -> bool:
        return self.cartan[i][i] <= 0

    def is_isotropic(self, i: int) -> bool:
        return self.cartan[i][i] == 0

    def real_indices(self) -> list[int]:
        return [i for i in range(self.rank) if self.is_real(i)]

    def imaginary_indices(self) -> list[int]:
        return [i for i in range(self.rank) if self.is_imaginary(i)]

    # -- pairings --------------------------------------------------------
    def pairing_roots(self, i: int, j: int) -> int:
        """(alpha_i, alpha_j) = r_i * a_ij."""
        return self.symmetrizer[i] * self.cartan[i][j]

    def pairing(self, alpha: tuple[int, ...], beta: tuple[int, ...]) -> int:
        """Symmetric bilinear form on root-lattice vectors (coordinates
        over the simple roots)."""
        total = 0
        for i, a in enumerate(alpha):
            if a:
                for j, b in enumerate(beta):
                    if b:
                        total += a * b * self.pairing_roots(i, j)
        return total

    def q_index_exponent(self, i: int) -> int:
        """q_i = q^{r_i}."""
        return self.symmetrizer[i]

    def q_paren_exponent(self, i: int) -> int:
        """q_(i) = q^{(alpha_i,alpha_i)/2}; 1 for isotropic indices."""
        return self.symmetrizer[i] * self.cartan[i][i] // 2

    def coroot_pairing(self, i: int, alpha: tuple[int, ...]) -> int:
        """<h_i, alpha> for a root-lattice vector alpha."""
        return sum(self.cartan[i][j] * a for j, a in enumerate(alpha))

    def max_level(self, i: int) -> int | None:
        """Generators f_{il}: real indices only allow l = 1."""
        return 1 if self.is_real(i) else None

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "cartan": [list(row) for row in self.cartan],
            "symmetrizer": list(self.symmetrizer),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_dict(d: dict) -> "BorcherdsCartanDatum":
        try:
            return BorcherdsCartanDatum(d["indices"], d["cartan"], d["symmetrizer"])
        except KeyError as e:
            raise DatumError(f"missing datum field {e.args[0]!r}") from None

    @staticmethod
    def from_json(text: str) -> "BorcherdsCartanDatum":
        return BorcherdsCartanDatum.from_dict(json.loads(text))

    def __eq__(self, other):
        return (
            isinstance(other, BorcherdsCartanDatum)
            and self.indices == other.indices
            and self.cartan == other.cartan
            and self.symmetrizer == other.symmetrizer
        )

    def __hash__(self):
        return hash((self.indices, self.cartan, self.symmetrizer))

    def __repr__(self):
        return f"BorcherdsCartanDatum({self.indices}, {self.cartan}, {self.symmetrizer})"


def root_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))

def root_sub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))

def root_scale(k: int, a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(k * x for x in a)

def root_height(a: tuple[int, ...]) -> int:
    return sum(a)

def simple_root(rank: int, i: int, level: int = 1) -> tuple[int, ...]:
    return tuple(level if j == i else 0 for j in range(rank))

def weights_up_to_height(rank: int, height: int) -> list[tuple[int, ...]]:
    """All nonnegative root-lattice vectors with 1 <= total height <= bound,
    ordered by height then lexicographically."""
    out = []
    for h in range(1, height + 1):
        level: list[tuple[int, ...]] = []
        def rec_h(prefix, remaining, arr=level):
            if len(prefix) == rank - 1:
                arr.append(tuple(prefix + [remaining]))
                return
            for k in range(remaining + 1):
                rec_h(prefix + [k], remaining - k)
        rec_h([], h)
        out.extend(sorted(level, reverse=True))
    return out
