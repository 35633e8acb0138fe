"""Built-in example algebras and presentations with their expected results.

Each entry's ``expected`` block maps a CLI command to a fragment of its JSON
report; running the command on the entry's document must reproduce every
listed key exactly.  The values were derived by hand (dimension counts,
membership checks, brute-force partitions), not by running the library.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .field import Field
from .lie import GradedAlgebra, direct_sum
from .product_quotient import (
    COMPLEX,
    REAL,
    Presentation,
    complex_heisenberg_algebra,
    diagonal_presentation,
    heisenberg_algebra,
)


@dataclass
class CatalogEntry:
    name: str
    description: str
    make: Callable[[], object]
    expected: dict = field(default_factory=dict)

    def build(self):
        return self.make()


def golden_ratio_conjugate() -> object:
    """``a = (sqrt 5 - 1) / 2`` in ``Q(sqrt 5)``."""
    F = Field(5)
    return (F.sqrt_d() - 1) / 2


def z5_k2() -> Presentation:
    a = golden_ratio_conjugate()
    K = ((-a, a, 1, 0, -1), (-a, -1, 0, 1, a))
    return Presentation(REAL, 1, 5, K, 5, "z5-k2")


def z5_k3() -> Presentation:
    a = golden_ratio_conjugate()
    K = ((1, -1, a, 0, -a), (-a, 1, -1, a, 0))
    return Presentation(REAL, 1, 5, K, 5, "z5-k3")


def abelian(n: int, name: str = "") -> GradedAlgebra:
    return GradedAlgebra([n], {}, 0, name=name or f"abelian-{n}")


def _h1_plus_q() -> GradedAlgebra:
    return direct_sum([heisenberg_algebra(1), abelian(1)], name="h1-plus-q")


def _h1_plus_h2() -> GradedAlgebra:
    return direct_sum([heisenberg_algebra(1), heisenberg_algebra(2)], name="h1-plus-h2")


def _named(p: Presentation, name: str) -> Presentation:
    return Presentation(p.F, p.m, p.n, p.K, p.d, name)


def _complex_graph() -> Presentation:
    # K = {(z, phi z)} with phi = diag(2, 1) in (Re, Im) coordinates
    return Presentation(COMPLEX, 1, 2, ((1, 0, 2, 0), (0, 1, 0, 1)), 0, "h1c-graph")


def _ok(**extra) -> dict:
    return {"passed": True, **extra}


ENTRIES: list[CatalogEntry] = [
    CatalogEntry(
        "h1",
        "first Heisenberg algebra",
        lambda: heisenberg_algebra(1, name="h1"),
        {
            "validate": {"valid": True, "dim": 3, "nu": 4, "layers": [2, 1]},
            "classify": {"verdict": "heisenberg", "label": "heisenberg(R,1)"},
            "decompose": {"status": "recognized", "m": [1]},
            "forms suite": {"passed": True},
        },
    ),
    CatalogEntry(
        "h2",
        "second Heisenberg algebra",
        lambda: heisenberg_algebra(2, name="h2"),
        {
            "validate": {"valid": True, "dim": 5, "nu": 6},
            "classify": {"label": "heisenberg(R,2)"},
            "decompose": {"status": "recognized", "m": [2]},
            "forms suite": {"passed": True},
        },
    ),
    CatalogEntry(
        "h3",
        "third Heisenberg algebra",
        lambda: heisenberg_algebra(3, name="h3"),
        {
            "validate": {"valid": True, "dim": 7, "nu": 8},
            "classify": {"label": "heisenberg(R,3)"},
        },
    ),
    CatalogEntry(
        "h1c",
        "complex first Heisenberg algebra as a real algebra with J",
        lambda: complex_heisenberg_algebra(1, name="h1c"),
        {
            "validate": {"valid": True, "dim": 6, "nu": 8, "layers": [4, 2]},
            "classify": {"label": "heisenberg(C,1)"},
            "forms suite": {"passed": True},
        },
    ),
    CatalogEntry(
        "abelian-q3",
        "three-dimensional abelian algebra",
        lambda: abelian(3, "abelian-q3"),
        {
            "validate": {"valid": True, "dim": 3, "nu": 3},
            "classify": {"verdict": "abelian"},
        },
    ),
    CatalogEntry(
        "h1-plus-q",
        "h1 plus a one-dimensional abelian summand",
        _h1_plus_q,
        {
            "validate": {"valid": True, "dim": 4, "nu": 5},
            "classify": {"verdict": "invariant_subspace", "W_dim": 1},
            "decompose": {"status": "refuted"},
        },
    ),
    CatalogEntry(
        "h1-plus-h2",
        "h1 plus h2: summands of different index",
        _h1_plus_h2,
        {
            "validate": {"valid": True, "dim": 8, "nu": 10},
            "classify": {"verdict": "invariant_subspace", "W_dim": 2},
            "decompose": {"status": "recognized", "m": [1, 2]},
        },
    ),
    CatalogEntry(
        "diag-n2",
        "two copies of h1 modulo the diagonal (isomorphic to h2)",
        lambda: diagonal_presentation(REAL, 1, 2, name="diag-n2"),
        {
            "pq verify": {"passed": False, "failed": ["distinct_lines"]},
            "pq build": {"N": 5, "nu": 6, "layers": [4, 1]},
            "pq partition": {"partition": [[0, 1]]},
            "classify": {"label": "heisenberg(R,2)"},
        },
    ),
    CatalogEntry(
        "diag-n3",
        "three copies of h1 modulo the diagonal",
        lambda: diagonal_presentation(REAL, 1, 3, name="diag-n3"),
        {
            "pq verify": {"passed": True, "failed": []},
            "pq build": {"N": 8, "nu": 10, "layers": [6, 2]},
            "pq partition": {"partition": [[0, 1, 2]]},
            "pq normalize": {"psi_second_layer": ["1", "1", "1"]},
            "aut orbits": {"orbits": [[0, 1, 2]], "block_dims": [1], "forced_identity": True},
            "classify": {"label": "product_quotient_candidate(R,3,1)"},
            "forms suite": {"passed": True},
            "pullback identities": {"passed": True, "case": "diagonal"},
        },
    ),
    CatalogEntry(
        "z5-k2",
        "five copies of h1 modulo the first two-dimensional Z5-invariant subspace",
        z5_k2,
        {
            "pq verify": {"passed": True, "failed": []},
            "pq build": {"N": 13, "nu": 16, "layers": [10, 3]},
            "pq partition": {"partition": [[0, 1, 2, 3, 4]]},
            "classify": {"label": "product_quotient_candidate(R,5,1)"},
            "pullback identities": {"passed": True, "case": "conformal"},
        },
    ),
    CatalogEntry(
        "z5-k3",
        "five copies of h1 modulo the second two-dimensional Z5-invariant subspace",
        z5_k3,
        {
            "pq verify": {"passed": True, "failed": []},
            "pq build": {"N": 13, "nu": 16, "layers": [10, 3]},
            "pq partition": {"partition": [[0, 1, 2, 3, 4]]},
            "classify": {"label": "product_quotient_candidate(R,5,1)"},
            "pullback identities": {"passed": True, "case": "conformal"},
        },
    ),
    CatalogEntry(
        "z4-pair13",
        "four copies of h1 with K = span(Y0 - Y2, Y1 - Y3)",
        lambda: Presentation(REAL, 1, 4, ((1, 0, -1, 0), (0, 1, 0, -1)), 0, "z4-pair13"),
        {
            "pq verify": {
                "passed": False,
                "failed": ["distinct_lines"],
                "witnesses": {"distinct_lines": {"factors": [0, 2], "vector": ["1", "0", "-1", "0"]}},
            },
            "pq build": {"N": 10, "nu": 12},
            "pq partition": {"partition": [[0, 2], [1, 3]]},
            "classify": {"label": "product_quotient_candidate(R,2,2)"},
        },
    ),
    CatalogEntry(
        "two-triples",
        "six copies of h1 modulo two disjoint diagonals",
        lambda: Presentation(REAL, 1, 6, ((1, 1, 1, 0, 0, 0), (0, 0, 0, 1, 1, 1)), 0, "two-triples"),
        {
            "pq verify": {"passed": True, "failed": []},
            "pq build": {"N": 16, "nu": 20},
            "pq partition": {"partition": [[0, 1, 2], [3, 4, 5]]},
            "classify": {"label": "product_quotient_candidate(R,6,1)"},
        },
    ),
    CatalogEntry(
        "blocks-n4",
        "four copies of h1 with K = span(Y0 + Y1, Y2 + Y3)",
        lambda: Presentation(REAL, 1, 4, ((1, 1, 0, 0), (0, 0, 1, 1)), 0, "blocks-n4"),
        {
            "pq verify": {"passed": False, "failed": ["distinct_lines"]},
            "pq build": {"N": 10, "nu": 12},
            "pq partition": {"partition": [[0, 1], [2, 3]]},
            "aut orbits": {"orbits": [[0, 1], [2, 3]], "block_dims": [1, 1]},
            "classify": {"label": "product_quotient_candidate(R,2,2)"},
        },
    ),
    CatalogEntry(
        "weighted-n2",
        "two copies of h1 with K = span(Y0 + 2 Y1)",
        lambda: Presentation(REAL, 1, 2, ((1, 2),), 0, "weighted-n2"),
        {
            "pq verify": {"passed": False, "failed": ["distinct_lines"]},
            "pq normalize": {"psi_second_layer": ["1", "2"]},
            "aut orbits": {"orbits": [[0, 1]], "block_dims": [1]},
        },
    ),
    CatalogEntry(
        "weighted-n3",
        "three copies of h1 with K = span(2 Y0 + 3 Y1 + Y2)",
        lambda: Presentation(REAL, 1, 3, ((2, 3, 1),), 0, "weighted-n3"),
        {
            "pq verify": {"passed": True, "failed": []},
            "pq normalize": {"psi_second_layer": ["2", "3", "1"]},
            "classify": {"label": "product_quotient_candidate(R,3,1)"},
            "pullback identities": {"passed": True, "case": "diagonal", "normalized": True},
        },
    ),
    CatalogEntry(
        "h2-diag-n2",
        "two copies of h2 modulo the diagonal (isomorphic to h4)",
        lambda: diagonal_presentation(REAL, 2, 2, name="h2-diag-n2"),
        {
            "pq verify": {"passed": False, "failed": ["distinct_lines"]},
            "pq build": {"N": 9, "nu": 10},
            "classify": {"label": "heisenberg(R,4)"},
            "pullback identities": {"passed": True, "case": "two-vector", "kernel_dims": [5, 5]},
        },
    ),
    CatalogEntry(
        "h1c-diag-n2",
        "two copies of complex h1 modulo the complex diagonal",
        lambda: diagonal_presentation(COMPLEX, 1, 2, name="h1c-diag-n2"),
        {
            "pq verify": {"passed": False, "failed": ["distinct_lines"]},
            "pq build": {"N": 10, "nu": 12},
            "classify": {"label": "heisenberg(C,2)"},
        },
    ),
    CatalogEntry(
        "h1c-diag-n3",
        "three copies of complex h1 modulo the complex diagonal",
        lambda: diagonal_presentation(COMPLEX, 1, 3, name="h1c-diag-n3"),
        {
            "pq verify": {"passed": True, "failed": []},
            "pq build": {"N": 16, "nu": 20},
            "classify": {"label": "product_quotient_candidate(C,3,1)"},
            "pullback identities": {"passed": True, "case": "two-vector", "kernel_dims": [4, 4, 4]},
        },
    ),
    CatalogEntry(
        "h1c-graph",
        "two copies of complex h1 modulo a graph that is not J-invariant",
        _complex_graph,
        {
            "pq verify": {"passed": True, "failed": []},
            "pq build": {"N": 10, "nu": 12},
            "classify": {"label": "product_quotient_candidate(C,2,1)"},
        },
    ),
]

CATALOG: dict[str, CatalogEntry] = {e.name: e for e in ENTRIES}


def get(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}") from None


def presentations() -> list[CatalogEntry]:
    return [e for e in ENTRIES if isinstance(e.build(), Presentation)]
