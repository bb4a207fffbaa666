"""Content-addressed cache for rendered command outputs.

Entries are keyed by a SHA-256 digest of the full computation identity
(datum, form parameters, command, parameters, format version) and store
the exact output text, so hits are byte-identical to recomputation and
deleting the directory never changes results.
"""

import hashlib
import json
import os
import tempfile

CACHE_VERSION = 1
ENV_VAR = "QBOZEC_CACHE_DIR"


def datum_signature(datum) -> dict:
    return {
        "indices": list(datum.indices),
        "cartan": [list(row) for row in datum.cartan],
        "symmetrizer": list(datum.symmetrizer),
    }


def form_signature(form) -> dict:
    if form is None:
        return {"default": "1", "overrides": {}}
    return {
        "default": str(form.default),
        "overrides": {
            f"{i},{l}": str(v) for (i, l), v in sorted(form.overrides.items())
        },
    }


def cache_key(datum, form, command: str, params: dict) -> str:
    """Digest of the canonical JSON encoding of the computation identity."""
    identity = {
        "version": CACHE_VERSION,
        "datum": datum_signature(datum),
        "form": form_signature(form),
        "command": command,
        "params": params,
    }
    blob = json.dumps(identity, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def resolve_cache_dir(configured: str | None) -> str | None:
    """Environment variable wins over the configured directory; neither
    set means caching is off."""
    env = os.environ.get(ENV_VAR)
    if env:
        return env
    return configured


class OutputCache:
    """File-backed store; a directory of None disables it entirely."""

    def __init__(self, directory: str | None):
        self.directory = directory

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, key[:2], key + ".json")

    def get(self, key: str) -> str | None:
        if self.directory is None:
            return None
        try:
            with open(self._path(key), encoding="utf-8") as fh:
                envelope = json.load(fh)
        except (OSError, ValueError):
            return None
        if envelope.get("version") != CACHE_VERSION or envelope.get("key") != key:
            return None
        out = envelope.get("output")
        return out if isinstance(out, str) else None

    def put(self, key: str, output: str) -> None:
        if self.directory is None:
            return
        path = self._path(key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        envelope = {"version": CACHE_VERSION, "key": key, "output": output}
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(envelope, fh)
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
