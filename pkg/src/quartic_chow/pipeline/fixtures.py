"""Loading the embedded reference data.

Each data file starts with a ``# sha256 <hex>`` line guarding the JSON body
that follows it.  A different directory can be supplied to experiment with
modified data; the checksum is enforced there too.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..exactpoly import Poly, RingSpec, make_ring_spec, parse_poly

FIXTURE_NAMES = ("rings", "classes", "table")


class FixtureError(ValueError):
    """A data file is missing, malformed or fails its checksum."""


def _read_text(name: str, directory: Path | None) -> str:
    fname = f"{name}.json"
    try:
        if directory is not None:
            return (Path(directory) / fname).read_text(encoding="utf-8")
        return resources.files("quartic_chow").joinpath("data", fname).read_text(encoding="utf-8")
    except OSError as exc:
        raise FixtureError(f"cannot read fixture {fname}: {exc}") from None


def parse_fixture(text: str, name: str = "fixture") -> dict:
    head, sep, body = text.partition("\n")
    if not sep or not head.startswith("# sha256 "):
        raise FixtureError(f"{name}: missing checksum line")
    expected = head[len("# sha256 "):].strip()
    actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if expected != actual:
        raise FixtureError(f"{name}: checksum mismatch")
    try:
        return json.loads(body)
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{name}: invalid JSON ({exc})") from None


def seal(obj) -> str:
    """Serialize ``obj`` in fixture format (checksum line plus JSON body)."""
    body = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    return f"# sha256 {hashlib.sha256(body.encode('utf-8')).hexdigest()}\n{body}"


@dataclass
class Fixtures:
    rings: dict
    classes: dict
    table: dict
    _specs: dict = field(default_factory=dict)

    def spec(self, name: str) -> RingSpec:
        s = self._specs.get(name)
        if s is None:
            try:
                variables = self.rings["specs"][name]
            except KeyError:
                raise FixtureError(f"unknown ring spec {name!r}") from None
            s = make_ring_spec([(n, int(w)) for n, w in variables])
            self._specs[name] = s
        return s

    def poly(self, ring: str, text: str) -> Poly:
        try:
            return parse_poly(text, self.spec(ring))
        except ValueError as exc:
            raise FixtureError(f"bad polynomial in ring {ring}: {exc}") from None

    def cls(self, entry: dict) -> Poly:
        """Polynomial of a ``{"ring": ..., "value": ...}`` entry."""
        return self.poly(entry["ring"], entry["value"])

    def relations(self, name: str) -> list[Poly]:
        entry = self.rings["presentations"][name]
        return [self.poly(entry["ring"], r) for r in entry["relations"]]

    def series(self, name: str) -> list[int]:
        return [int(v) for v in self.rings["series"][name]]

    def grid(self) -> dict[tuple[int, int], int]:
        return {
            (int(k), int(m)): int(v)
            for m, row in self.table["rows"].items()
            for k, v in row.items()
        }

    def grey_cells(self) -> set[tuple[int, int]]:
        return {(int(k), int(m)) for m, k in self.table["grey"]}


def load_fixtures(directory: str | Path | None = None) -> Fixtures:
    d = Path(directory) if directory is not None else None
    data = {name: parse_fixture(_read_text(name, d), f"{name}.json") for name in FIXTURE_NAMES}
    return Fixtures(data["rings"], data["classes"], data["table"])

