"""Run configuration and group-spec parsing."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from typing import Any

from .groups import FiniteGroup, build_dihedral, build_psl2, load_permutation_group

FORMATS = ("json", "csv", "pretty")


@dataclasses.dataclass
class RunConfig:
    group: str
    classes: list[str] = dataclasses.field(default_factory=list)
    primes: str | list[int] = "auto"
    format: str = "pretty"
    cache_dir: str | None = None
    workers: int = 1
    fusion_depth: int | None = 8

    def __post_init__(self):
        parse_group_spec(self.group)
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if isinstance(self.primes, str):
            if self.primes != "auto":
                self.primes = [int(p) for p in self.primes.split(",") if p.strip()]
        else:
            self.primes = [int(p) for p in self.primes]
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.fusion_depth is not None and self.fusion_depth < 0:
            raise ValueError("fusion depth must be >= 0")
        self.classes = list(self.classes)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunConfig:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        return cls.from_dict(json.loads(text))

    def class_vectors(self) -> list[str]:
        if self.classes:
            return self.classes
        kind, arg = parse_group_spec(self.group)
        if kind == "psl2":
            ell = int(arg)
            return [f"{ell}A,{ell}A,{ell}B,{ell}B", f"{ell}A,{ell}A,{ell}A,{ell}A"]
        if kind == "dihedral":
            return ["2A,2A,2B,2B"] if int(arg) % 2 == 0 else ["2A,2A,2A,2A"]
        raise ValueError("class vector required for permutation groups")


def parse_group_spec(spec: str) -> tuple[str, str]:
    kind, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise ValueError(f"group spec must look like psl2:11, dihedral:10 or perm:<file>; got {spec!r}")
    if kind not in ("psl2", "dihedral", "perm"):
        raise ValueError(f"unknown group kind {kind!r}")
    if kind != "perm" and not arg.isdigit():
        raise ValueError(f"{kind} needs an integer parameter, got {arg!r}")
    return kind, arg


def build_group(spec: str) -> FiniteGroup:
    kind, arg = parse_group_spec(spec)
    if kind == "psl2":
        return build_psl2(int(arg))
    if kind == "dihedral":
        return build_dihedral(int(arg))
    return load_permutation_group(arg)


def group_descriptor(spec: str, G: FiniteGroup) -> str:
    """Stable identifier for caching: the group string plus a digest of the element table."""
    digest = hashlib.sha256(G.rows.tobytes()).hexdigest()[:16]
    kind, arg = parse_group_spec(spec)
    label = spec if kind != "perm" else f"perm:{G.name or ''}"
    return f"{label}#{G.order}#{digest}"
