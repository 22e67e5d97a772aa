"""Official-serial database and the repackaging verdict.

Persisted line-oriented: ``packageName<TAB>hexSerial`` (one serial per line,
packages may repeat across lines -- official apps can rotate release keys).
"""

from __future__ import annotations

from pathlib import Path

from ..registry.records import RepackVerdict
from .apk import ApkSummary, parse_apk


class SerialDb:
    def __init__(self, entries: dict[str, set[int]] | None = None):
        self.entries: dict[str, set[int]] = entries or {}

    def add(self, package_name: str, serial: int) -> None:
        self.entries.setdefault(package_name, set()).add(serial)

    def serials_for(self, package_name: str) -> set[int] | None:
        return self.entries.get(package_name)

    def __len__(self) -> int:
        return len(self.entries)

    # -- persistence ---------------------------------------------------------

    @classmethod
    def load(cls, path: str | Path) -> "SerialDb":
        db = cls()
        path = Path(path)
        if not path.exists():
            return db
        for line_no, line in enumerate(path.read_text().splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                package, serial_hex = line.split("\t")
                db.add(package, int(serial_hex, 16))
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: bad serial db line") from exc
        return db

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [
            f"{pkg}\t{serial:x}"
            for pkg in sorted(self.entries)
            for serial in sorted(self.entries[pkg])
        ]
        path.write_text("\n".join(lines) + ("\n" if lines else ""))

    @staticmethod
    def append_entry(path: str | Path, package_name: str, serial: int) -> None:
        """Admin append: the on-disk db only ever grows."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a") as fh:
            fh.write(f"{package_name}\t{serial:x}\n")


def repack_check(summary: ApkSummary, db: SerialDb) -> RepackVerdict:
    """pass if the serial is an official one, fail if it contradicts the
    official set, unchecked when the package is unknown."""
    official = db.serials_for(summary.package_name)
    if official is None:
        return RepackVerdict.UNCHECKED
    if summary.cert_serial in official:
        return RepackVerdict.PASS
    return RepackVerdict.FAIL


def build_serial_db(official_apks: list[bytes]) -> SerialDb:
    """Register each official app's (package, serial); serials union up."""
    db = SerialDb()
    for index, data in enumerate(official_apks):
        try:
            summary = parse_apk(data)
        except Exception as exc:
            raise type(exc)(f"official apk #{index}: {exc}") from exc
        db.add(summary.package_name, summary.cert_serial)
    return db
