"""Build and verify the on-disk index: data files plus a digest manifest.

An index directory holds byte-for-byte copies of the validated input files
and a manifest.json recording each file's sha256, record counts, and the
build timestamp. Serving refuses to start when any digest no longer matches,
so a process never serves silently corrupted data.
"""

from __future__ import annotations

import hashlib
import json
import shutil
from datetime import datetime, timezone
from pathlib import Path

from .corpus import load_concepts, load_trials
from .errors import LoadError, ManifestError
from .explain import TemplateCatalog
from .weights import load_weights_file

MANIFEST_NAME = "manifest.json"
MANIFEST_VERSION = 1


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_index(
    trials_path: str | Path,
    concepts_path: str | Path,
    out_dir: str | Path,
    weights_path: str | Path | None = None,
    templates_path: str | Path | None = None,
) -> tuple[dict, list[str]]:
    """Validate inputs, copy them into out_dir, and write the manifest.

    Optional weights/templates files are validated and pinned alongside the
    data so `serve` can start from the index directory alone. Returns the
    manifest plus any loader warnings (skipped lines and the like).
    """
    corpus = load_trials(trials_path)
    graph = load_concepts(concepts_path)
    if len(corpus) == 0:
        raise LoadError(f"{trials_path}: no usable trial records")
    if not graph.concepts:
        raise LoadError(f"{concepts_path}: no usable concept records")
    warnings = list(corpus.warnings) + list(graph.warnings)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    files: dict[str, dict] = {}

    def pin(kind: str, source: str | Path, dest_name: str, records: int | None = None) -> None:
        dest = out / dest_name
        if Path(source).resolve() != dest.resolve():
            shutil.copyfile(source, dest)
        entry: dict = {"path": dest_name, "sha256": sha256_file(dest)}
        if records is not None:
            entry["records"] = records
        files[kind] = entry

    pin("trials", trials_path, "trials.ndjson", records=len(corpus))
    pin("concepts", concepts_path, "concepts.ndjson", records=len(graph.concepts))
    if weights_path is not None:
        load_weights_file(weights_path)  # refuse to pin an invalid document
        pin("weights", weights_path, "weights.json")
    if templates_path is not None:
        TemplateCatalog.load(templates_path)
        pin("templates", templates_path, "templates.json")

    manifest = {
        "version": MANIFEST_VERSION,
        "built_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "counts": {"trials": len(corpus), "concepts": len(graph.concepts)},
        "files": files,
    }
    (out / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest, warnings


def load_manifest(index_dir: str | Path) -> dict:
    path = Path(index_dir) / MANIFEST_NAME
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(manifest, dict) or "files" not in manifest:
        raise ManifestError(f"manifest {path} lacks a files section")
    for kind in ("trials", "concepts"):
        if kind not in manifest["files"]:
            raise ManifestError(f"manifest {path} does not list a {kind} file")
    return manifest


def verify_manifest(index_dir: str | Path, manifest: dict) -> None:
    """Check every listed digest; raise ManifestError naming the first mismatch."""
    index_dir = Path(index_dir)
    for kind, entry in manifest["files"].items():
        target = index_dir / entry["path"]
        if not target.is_file():
            raise ManifestError(f"{kind} file {target} is missing")
        actual = sha256_file(target)
        if actual != entry["sha256"]:
            raise ManifestError(
                f"{kind} file {target} digest mismatch: manifest {entry['sha256']}, actual {actual}"
            )
