"""Persisted resolvent bundles.

Only the three scalar series (alpha, p, q) are stored; the off-diagonal
combinations and the matrix are cheap to reassemble and storing them
would create room for inconsistent files.  Loads are validated against
the frozen head coefficients before anything downstream sees the data,
so a stale or hand-edited file surfaces as CacheCorrupt, never as wrong
numbers.  Writes go through a temp file in the same directory followed
by an atomic rename, which keeps concurrent processes sharing one cache
directory safe.
"""

import json
import os
import tempfile
from pathlib import Path

from .eps import EPS_ONE, EPS_ZERO, EpsLaurent
from .errors import CacheCorrupt, MalformedValue
from .rational import rat_from_str, rat_str
from .resolvent import ResolventBundle, build_resolvent, check_head
from .series import INF, LambdaSeries, Mat2

FORMAT_NAME = "p1gw-cache"
FORMAT_VERSION = 1
CACHE_FILENAME = "resolvent.json"
ENV_VAR = "P1GW_CACHE_DIR"

# head validation needs the first five matrix coefficients to exist
MIN_CACHE_DEPTH = 4


def _series_to_obj(ls: LambdaSeries) -> dict:
    return {
        str(e): {str(ee): rat_str(c) for ee, c in sorted(term.terms.items())}
        for e, term in sorted(ls.coeffs.items())
    }


def _series_from_obj(obj, depth: int) -> LambdaSeries:
    coeffs = {}
    for e, terms in obj.items():
        coeffs[int(e)] = EpsLaurent(
            {int(ee): rat_from_str(v) for ee, v in terms.items()}
        )
    return LambdaSeries(coeffs, depth)


def _assemble(alpha, p, q, depth) -> ResolventBundle:
    # mirrors build_resolvent so loaded bundles compare equal to built ones
    beta = q - p
    gamma = q + p
    one = LambdaSeries._raw({0: EPS_ONE}, INF)
    r = Mat2(one + alpha, beta, gamma, -alpha)
    return ResolventBundle(alpha, p, q, beta, gamma, r, depth)


def cache_path(cache_dir) -> Path:
    return Path(cache_dir) / CACHE_FILENAME


def save_bundle(bundle: ResolventBundle, cache_dir) -> Path:
    if bundle.depth < MIN_CACHE_DEPTH:
        raise MalformedValue(
            f"cache bundles must have depth >= {MIN_CACHE_DEPTH}, "
            f"got {bundle.depth}"
        )
    path = cache_path(cache_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "depth": bundle.depth,
        "alpha": _series_to_obj(bundle.alpha),
        "p": _series_to_obj(bundle.p),
        "q": _series_to_obj(bundle.q),
    }
    fd, tmp = tempfile.mkstemp(
        dir=str(path.parent), prefix=".resolvent-", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def load_bundle(cache_dir) -> ResolventBundle:
    """Read, reassemble and validate the stored bundle.

    Raises FileNotFoundError when no cache exists and CacheCorrupt when
    the file fails structural or numerical validation.
    """
    path = cache_path(cache_dir)
    raw = path.read_text(encoding="utf-8")
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as err:
        raise CacheCorrupt(f"{path}: not valid JSON ({err})") from err
    if not isinstance(payload, dict):
        raise CacheCorrupt(f"{path}: top-level value is not an object")
    if payload.get("format") != FORMAT_NAME:
        raise CacheCorrupt(f"{path}: unrecognized format {payload.get('format')!r}")
    if payload.get("version") != FORMAT_VERSION:
        raise CacheCorrupt(f"{path}: unsupported version {payload.get('version')!r}")
    depth = payload.get("depth")
    if not isinstance(depth, int) or depth < MIN_CACHE_DEPTH:
        raise CacheCorrupt(f"{path}: bad depth {depth!r}")
    try:
        alpha = _series_from_obj(payload["alpha"], depth)
        p = _series_from_obj(payload["p"], depth)
        q = _series_from_obj(payload["q"], depth)
    except (KeyError, ValueError, TypeError, AttributeError) as err:
        raise CacheCorrupt(f"{path}: malformed series data ({err})") from err
    bundle = _assemble(alpha, p, q, depth)
    entries = {
        e: (
            bundle.r.a.coeffs.get(e, EPS_ZERO),
            bundle.r.b.coeffs.get(e, EPS_ZERO),
            bundle.r.c.coeffs.get(e, EPS_ZERO),
            bundle.r.d.coeffs.get(e, EPS_ZERO),
        )
        for e in range(0, -MIN_CACHE_DEPTH - 1, -1)
    }
    try:
        check_head(entries)
    except Exception as err:
        raise CacheCorrupt(f"{path}: head validation failed ({err})") from err
    return bundle


def cached_bundle(depth: int, cache_dir):
    """Serve a bundle of at least the requested depth, rebuilding as needed.

    Returns (bundle, source) where source is "cache" or "rebuilt". A
    deeper stored bundle serves shallower requests unchanged; anything
    missing, stale or corrupt triggers a rebuild that overwrites the file.
    """
    depth = max(depth, MIN_CACHE_DEPTH)
    try:
        stored = load_bundle(cache_dir)
        if stored.depth >= depth:
            return stored, "cache"
    except (FileNotFoundError, CacheCorrupt):
        pass
    bundle = build_resolvent(depth)
    save_bundle(bundle, cache_dir)
    return bundle, "rebuilt"
