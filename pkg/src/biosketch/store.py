"""Flat-file stores for enrollment records and reliable keys.

Records and keys are deliberately kept apart: the template database holds
only hashed records (``templates/<subject>.rec``) while the keystore holds
the matcher-local reliable keys (``keys/<subject>.key``). Single writer per
store; concurrent readers are fine.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import DuplicateSubjectError, SubjectNotFoundError
from .quantizer import ReliableKey, key_from_text, key_to_text
from .sketch import EnrollmentRecord, record_from_text, record_to_text

_SUBJECT_RE = re.compile(r"^[A-Za-z0-9_-]+$")


def _check_subject_id(subject_id: str) -> str:
    if not _SUBJECT_RE.fullmatch(subject_id):
        raise ValueError(
            f"subject id {subject_id!r} must match [A-Za-z0-9_-]+"
        )
    return subject_id


class _FileStore:
    suffix = ""

    def __init__(self, path):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)

    def _file(self, subject_id: str) -> Path:
        return self.path / f"{_check_subject_id(subject_id)}{self.suffix}"

    def _save_text(self, subject_id: str, text: str, overwrite: bool):
        target = self._file(subject_id)
        if target.exists() and not overwrite:
            raise DuplicateSubjectError(f"{subject_id!r} already stored in {self.path}")
        target.write_text(text)

    def _load_text(self, subject_id: str) -> str:
        target = self._file(subject_id)
        if not target.exists():
            raise SubjectNotFoundError(f"{subject_id!r} not found in {self.path}")
        return target.read_text()

    def exists(self, subject_id: str) -> bool:
        return self._file(subject_id).exists()

    def delete(self, subject_id: str):
        target = self._file(subject_id)
        if not target.exists():
            raise SubjectNotFoundError(f"{subject_id!r} not found in {self.path}")
        target.unlink()

    def subjects(self) -> list[str]:
        return sorted(p.stem for p in self.path.glob(f"*{self.suffix}"))


class TemplateDb(_FileStore):
    """Hashed enrollment records, one file per subject."""

    suffix = ".rec"

    def save(self, subject_id: str, record: EnrollmentRecord, overwrite: bool = False):
        self._save_text(subject_id, record_to_text(record), overwrite)

    def load(self, subject_id: str) -> EnrollmentRecord:
        return record_from_text(self._load_text(subject_id))


class KeyStore(_FileStore):
    """Matcher-local reliable keys, one file per subject."""

    suffix = ".key"

    def save(self, subject_id: str, key: ReliableKey, overwrite: bool = False):
        self._save_text(subject_id, key_to_text(key), overwrite)

    def load(self, subject_id: str) -> ReliableKey:
        return key_from_text(self._load_text(subject_id))


def revoke(db: TemplateDb, keystore: KeyStore, subject_id: str):
    """Delete a subject's record and key; re-enrollment needs a fresh nonce."""
    if not db.exists(subject_id):
        raise SubjectNotFoundError(f"{subject_id!r} is not enrolled")
    db.delete(subject_id)
    if keystore.exists(subject_id):
        keystore.delete(subject_id)
