from __future__ import annotations

import os
from pathlib import Path

from ..errors import IncludeError
from .ast import AnnotatedFormula, Include, Problem
from .parser import parse_problem


def _locate(path: str, base_dir: Path | None, search_paths) -> Path:
    candidates = []
    if base_dir is not None:
        candidates.append(base_dir / path)
    candidates.extend(Path(d) / path for d in search_paths)
    if base_dir is None and not search_paths:
        candidates.append(Path(path))
    for c in candidates:
        if c.is_file():
            return c.resolve()
    tried = ", ".join(str(c) for c in candidates) or path
    raise IncludeError(f"cannot find included file '{path}' (tried {tried})")


def resolve_includes(problem: Problem, search_paths=(), origin: str | os.PathLike | None = None,
                     _chain: tuple = ()) -> Problem:
    """Splice included formulas in place of their include directives.

    Paths are tried relative to the directory of ``origin`` first, then each
    directory in ``search_paths``.
    """
    origin_path = Path(origin).resolve() if origin is not None else None
    base_dir = origin_path.parent if origin_path is not None else None
    if not _chain and origin_path is not None:
        _chain = ((origin_path, Path(origin).name),)
    entries = []
    for entry in problem.entries:
        if not isinstance(entry, Include):
            entries.append(entry)
            continue
        target = _locate(entry.path, base_dir, tuple(search_paths))
        if any(p == target for p, _ in _chain):
            names = [n for p, n in _chain] + [entry.path]
            raise IncludeError("include cycle: " + " -> ".join(names))
        try:
            text = target.read_text()
        except OSError as exc:
            raise IncludeError(f"cannot read '{entry.path}': {exc}") from exc
        sub = parse_problem(text)
        sub = resolve_includes(sub, search_paths, target, _chain + ((target, entry.path),))
        included = sub.formulas
        if entry.names is not None:
            wanted = set(entry.names)
            included = tuple(f for f in included if f.name in wanted)
            missing = wanted - {f.name for f in included}
            if missing:
                raise IncludeError(f"'{entry.path}' has no formula named {sorted(missing)[0]}")
        entries.extend(included)
    seen = set()
    for e in entries:
        if isinstance(e, AnnotatedFormula):
            if e.name in seen:
                raise IncludeError(f"duplicate formula name '{e.name}' after include resolution")
            seen.add(e.name)
    return Problem(tuple(entries))
