"""Instance bundles: a moduli system plus how it was made, as one JSON document."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .primes import CLUSTER, DESK, PrimeSet, select_cluster, select_desk
from .residues import ModuliSystem
from .tournament import Tournament, covering_threshold

FORMAT = "unaryufa-bundle/1"


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceBundle:
    ms: ModuliSystem
    provenance: dict = field(default_factory=dict)

    @property
    def certified_k(self) -> int:
        k = self.provenance.get("certified_k")
        return int(k) if k is not None else covering_threshold(self.ms.tournament)

    def to_dict(self) -> dict:
        d = self.ms.to_dict()
        d["format"] = FORMAT
        d["prime_mode"] = self.ms.primes.mode
        d["provenance"] = self.provenance
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceBundle":
        if data.get("format") != FORMAT:
            raise BundleError(f"not a {FORMAT} document")
        try:
            primes = PrimeSet(tuple(data["primes"]), data.get("prime_mode", DESK))
            ms = ModuliSystem(int(data["b"]), int(data["n"]), primes, Tournament.from_dict(data["tournament"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise BundleError(f"invalid bundle: {exc}") from exc
        return cls(ms, dict(data.get("provenance", {})))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "InstanceBundle":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise BundleError(f"cannot read bundle {path}: {exc}") from exc
        return cls.from_dict(data)


def make_bundle(tournament: Tournament, b: int, prime_mode: str = DESK, provenance: dict = None) -> InstanceBundle:
    """Assemble and validate a moduli system over freshly selected primes."""
    if b < 2:
        raise BundleError(f"base b must be >= 2, got {b}")
    n = tournament.n
    N = b**n
    if prime_mode == DESK:
        primes = select_desk(N, n)
    elif prime_mode == CLUSTER:
        primes = select_cluster(N)
    else:
        raise BundleError(f"unknown prime mode {prime_mode!r}")
    try:
        ms = ModuliSystem(b, n, primes, tournament)
    except ValueError as exc:
        raise BundleError(str(exc)) from exc
    prov = dict(provenance or {})
    prov.setdefault("certified_k", covering_threshold(tournament))
    return InstanceBundle(ms, prov)
