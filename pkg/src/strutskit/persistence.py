"""File-backed table store.

Tables are CSV files with a mandatory header row. Whole tables are loaded
into immutable snapshots; writes rebuild the file through an atomic
temp-file-and-rename replace, so readers never observe a torn table.
"""

import csv
import hashlib
import io
import os
import secrets
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path

from strutskit.errors import StrutskitError


class PersistenceError(StrutskitError):
    pass


class TableNotFound(PersistenceError):
    pass


class EmptyFile(PersistenceError):
    pass


class BadHeader(PersistenceError):
    pass


class RaggedRow(PersistenceError):
    pass


class MissingColumn(PersistenceError):
    pass


class IoFailure(PersistenceError):
    pass


class StoreUnavailable(PersistenceError):
    """A required table could not be read; surfaces as a server error."""


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class UserRecord:
    emailid: str
    password: str


def _table_path(directory, name: str) -> Path:
    return Path(directory) / f"{name}.csv"


def load_table(directory, name: str) -> Table:
    """Load ``<name>.csv`` from the directory; the first row is the header."""
    path = _table_path(directory, name)
    if not path.exists():
        raise TableNotFound(f"{path}: table file not found")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            records = list(csv.reader(fh))
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc
    if not records:
        raise EmptyFile(f"{path}: missing header row")
    header = records[0]
    if not header or any(not col for col in header):
        raise BadHeader(f"{path}: header columns must be non-empty")
    if len(set(header)) != len(header):
        raise BadHeader(f"{path}: duplicate column names")
    rows = []
    for line_no, record in enumerate(records[1:], start=2):
        if len(record) != len(header):
            raise RaggedRow(
                f"{path}:{line_no}: row has {len(record)} fields, expected {len(header)}"
            )
        rows.append(tuple(record))
    return Table(name=name, columns=tuple(header), rows=tuple(rows))


def _format_row(row: tuple[str, ...]) -> str:
    buf = io.StringIO()
    # Bare carriage returns only survive the LF line terminator when quoted,
    # which QUOTE_MINIMAL does not guarantee.
    quoting = csv.QUOTE_ALL if any("\r" in field for field in row) else csv.QUOTE_MINIMAL
    csv.writer(buf, lineterminator="\n", quoting=quoting).writerow(row)
    text = buf.getvalue()
    # A lone empty field would serialize as a blank line, which reads back as
    # no record at all; quote it explicitly.
    if text == "\n":
        return '""\n'
    return text


def save_table(directory, table: Table):
    """Atomically write the table as ``<name>.csv`` (temp file + rename)."""
    if any(not col for col in table.columns) or len(set(table.columns)) != len(table.columns):
        raise ValueError(f"table '{table.name}' has invalid column names")
    for row in table.rows:
        if len(row) != len(table.columns):
            raise ValueError(f"table '{table.name}' has a ragged row: {row!r}")
        if any("\x00" in field for field in row):
            raise ValueError(f"table '{table.name}' has a NUL byte in a field")
    directory = Path(directory)
    path = _table_path(directory, table.name)
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{table.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
                fh.write(_format_row(table.columns))
                for row in table.rows:
                    fh.write(_format_row(row))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoFailure(f"{path}: {exc}") from exc


def hash_password(password: str, salt: str | None = None) -> str:
    """Encode a password as ``salt$digest`` for the opt-in hashed mode."""
    if salt is None:
        salt = secrets.token_hex(8)
    digest = hashlib.sha256((salt + password).encode("utf-8")).hexdigest()
    return f"{salt}${digest}"


def _password_matches(stored: str, presented: str, hashed: bool) -> bool:
    if not hashed:
        return stored == presented
    salt, sep, _digest = stored.partition("$")
    if not sep:
        return False
    return secrets.compare_digest(stored, hash_password(presented, salt))


def find_user(table: Table, emailid: str, password: str, *, hashed: bool = False) -> UserRecord | None:
    """Scan for the first row whose credentials match.

    By default both fields compare by exact, case-sensitive string equality;
    row order is the file order, so the first match is deterministic. With
    ``hashed=True`` the stored password column holds ``salt$digest`` values
    (see hash_password) and the presented password is hashed before
    comparison. The default stays plaintext deliberately; hashed mode is
    opt-in.
    """
    try:
        ei = table.columns.index("emailid")
        pi = table.columns.index("password")
    except ValueError as exc:
        raise MissingColumn(
            f"table '{table.name}' needs 'emailid' and 'password' columns, has {table.columns}"
        ) from exc
    for row in table.rows:
        if row[ei] == emailid and _password_matches(row[pi], password, hashed):
            return UserRecord(emailid=row[ei], password=row[pi])
    return None


class TableStore:
    """Startup-loaded snapshots of every table in a data directory.

    Reads hand out the current immutable snapshot. Writers serialize on one
    lock, persist through save_table's atomic replace, then swap the snapshot,
    so a read concurrent with a write sees either the old or the new table.
    """

    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self._write_lock = threading.Lock()
        self._tables: dict[str, Table] = {}
        for path in sorted(self.data_dir.glob("*.csv")):
            name = path.stem
            self._tables[name] = load_table(self.data_dir, name)

    def table_names(self) -> list[str]:
        return sorted(self._tables)

    def get(self, name: str) -> Table:
        try:
            return self._tables[name]
        except KeyError:
            raise TableNotFound(f"table '{name}' not loaded from {self.data_dir}") from None

    def append_row_if_absent(self, name: str, row: tuple[str, ...], unique_column: str) -> bool:
        """Append a row unless one already holds the same unique-column value.

        Returns True when the row was appended. The duplicate check runs under
        the writer lock, so concurrent registrations of the same key cannot
        both succeed.
        """
        with self._write_lock:
            table = self.get(name)
            try:
                key = table.columns.index(unique_column)
            except ValueError as exc:
                raise MissingColumn(
                    f"table '{name}' has no column '{unique_column}'"
                ) from exc
            if any(existing[key] == row[key] for existing in table.rows):
                return False
            updated = Table(name=table.name, columns=table.columns, rows=table.rows + (tuple(row),))
            save_table(self.data_dir, updated)
            self._tables[name] = updated
            return True
