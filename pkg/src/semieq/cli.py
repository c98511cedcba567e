"""Command-line front end.

Exit status: 0 on success, 2 when the input is well formed but rejected
(inadmissible parameters, a map that does not close, an invalid face list,
a budget overrun), 1 on I/O trouble.
"""

from __future__ import annotations

import functools
import json
import math
import os
import random
import sys
from pathlib import Path

import click

from . import __version__
from .census import BudgetExceeded, budget, concordance, formula_count
from .isomorphism import canonical_form, dual, find_isomorphism
from .mapcore import (
    MAP_TYPES,
    MapError,
    PolygonalMap,
    dumps,
    euler_characteristic,
    from_faces,
    is_orientable,
    is_semi_equivelar,
    loads,
    lookup_type,
)
from .representations import InadmissibleParams, InternalClosureFailure, admissible, build, parse_rep
from .walkers import WalkerError, classify_strip, row_cycles

DOMAIN_EXIT = 2
IO_EXIT = 1


class DomainRejection(click.ClickException):
    exit_code = DOMAIN_EXIT


def _guarded(fn):
    """Translate library errors into the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (InadmissibleParams, InternalClosureFailure, MapError, WalkerError, BudgetExceeded) as exc:
            raise DomainRejection(str(exc)) from exc
        except KeyError as exc:
            raise DomainRejection(exc.args[0] if exc.args else str(exc)) from exc
        except json.JSONDecodeError as exc:
            click.echo(f"Error: cannot parse JSON: {exc}", err=True)
            sys.exit(IO_EXIT)
        except OSError as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(IO_EXIT)

    return wrapper


def _map_type(_ctx, _param, value):
    if value is None or value == "all":
        return value
    try:
        return lookup_type(value)
    except KeyError as exc:
        raise click.BadParameter(exc.args[0]) from None


def _read_map(path: str) -> PolygonalMap:
    return loads(Path(path).read_text())


def _summary(m: PolygonalMap) -> str:
    orient = "orientable" if is_orientable(m) else "non-orientable"
    return f"n={m.n_vertices} E={m.n_edges} F={m.n_faces} chi={euler_characteristic(m)} {orient}"


# ---------------------------------------------------------------------------
# exports


def to_off(m: PolygonalMap) -> str:
    # vertices on a helix: distinct, deterministic, and carrying no geometry
    lines = ["OFF", f"{m.n_vertices} {m.n_faces} {m.n_edges}"]
    for v in range(m.n_vertices):
        a = 2 * math.pi * v / max(m.n_vertices, 1)
        lines.append(f"{math.cos(a):.6f} {math.sin(a):.6f} {v / max(m.n_vertices, 1):.6f}")
    lines += [f"{len(f)} " + " ".join(map(str, f)) for f in m.faces]
    return "\n".join(lines) + "\n"


def to_dot(m: PolygonalMap) -> str:
    lines = ["graph map {"]
    lines += [f"  {u} -- {v};" for u, v in m.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


_EXPORTS = {"json": lambda m: dumps(m) + "\n", "off": to_off, "dot": to_dot}


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _parse_ns(spec: str) -> list[int]:
    """``36``, ``9..36`` or ``9,12,15``."""
    out: list[int] = []
    for part in spec.split(","):
        lo, sep, hi = part.partition("..")
        if sep:
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(lo))
    return sorted(set(out))


# ---------------------------------------------------------------------------
# commands


@click.group()
@click.version_option(__version__, prog_name="semieq")
@click.option("--seed", type=int, default=None, help="Seed for commands that shuffle (relabel).")
@click.pass_context
def main(ctx, seed):
    """Semi-equivelar maps on the Klein bottle."""
    ctx.obj = {"rng": random.Random(seed)}


type_option = click.option("--type", "map_type", required=True, callback=_map_type, help="Dotted type, e.g. 3.6 or 3.4.6.4.")
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (stdout if omitted).")
format_option = click.option("--format", "fmt", type=click.Choice(sorted(_EXPORTS)), default="json", show_default=True)


@main.command("build")
@type_option
@click.option("--rep", required=True, help="planar:r,s,k or mobius:variant,l,t")
@out_option
@format_option
@_guarded
def build_cmd(map_type, rep, out, fmt):
    """Construct a map from its representation."""
    try:
        p = parse_rep(rep)
    except ValueError as exc:
        raise DomainRejection(str(exc)) from exc
    verdict = admissible(map_type, p)
    if not verdict:
        raise DomainRejection(str(verdict))
    m = build(map_type, p)
    _emit(_EXPORTS[fmt](m), out)
    click.echo(_summary(m), err=out is None)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@_guarded
def verify(path):
    """Validate a map file and report its invariants."""
    m = _read_map(path)
    types = [name for name, t in MAP_TYPES.items() if is_semi_equivelar(m, t)]
    claimed = m.map_type_hint.name if m.map_type_hint else None
    report = {
        "valid": True,
        "n": m.n_vertices,
        "E": m.n_edges,
        "F": m.n_faces,
        "chi": euler_characteristic(m),
        "orientable": is_orientable(m),
        "klein_bottle": euler_characteristic(m) == 0 and not is_orientable(m),
        "types": types,
        "claimed_type": claimed,
    }
    click.echo(json.dumps(report))
    if claimed is not None and claimed not in types:
        raise DomainRejection(f"map is not of its claimed type {claimed}")


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path(dir_okay=False))
@click.option("--digest", "show_digest", is_flag=True, help="Print the canonical digest of each file.")
@_guarded
def iso(paths, show_digest):
    """Decide whether two maps are isomorphic."""
    maps = [_read_map(p) for p in paths]
    if show_digest:
        for p, m in zip(paths, maps):
            click.echo(f"{canonical_form(m).digest}  {p}")
        if len(maps) != 2:
            return
    if len(maps) != 2:
        raise click.UsageError("iso compares exactly two files (or use --digest)")
    phi = find_isomorphism(*maps)
    click.echo(json.dumps({"isomorphic": phi is not None, "witness": phi}))


@main.command("dual")
@click.argument("path", type=click.Path(dir_okay=False))
@out_option
@format_option
@_guarded
def dual_cmd(path, out, fmt):
    """Write the dual map."""
    m = dual(_read_map(path))
    _emit(_EXPORTS[fmt](m), out)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--cycle", default=None, help="Comma-separated vertices of a cycle.")
@click.option("--row", type=int, default=None, help="Index of a row recorded by the constructor.")
@_guarded
def decompose(path, cycle, row):
    """Classify the strip of faces around a cycle."""
    m = _read_map(path)
    if (cycle is None) == (row is None):
        raise click.UsageError("give exactly one of --cycle and --row")
    if cycle is not None:
        try:
            vertices = [int(v) for v in cycle.split(",")]
        except ValueError as exc:
            raise DomainRejection(f"bad cycle {cycle!r}") from exc
    else:
        rows = row_cycles(m)
        if not 0 <= row < len(rows):
            raise DomainRejection(f"row {row} out of range 0..{len(rows) - 1}")
        vertices = rows[row]
    click.echo(json.dumps(classify_strip(m, vertices).to_dict(m)))


@main.command()
@type_option
@click.option("--n", "n", type=int, required=True)
@_guarded
def count(map_type, n):
    """Closed-form number of classes with n vertices."""
    click.echo(formula_count(map_type, n))


@main.command()
@click.option("--type", "map_type", required=True, callback=_map_type, help="Dotted type or 'all'.")
@click.option("--n", "n_spec", default=None, help="n, a range a..b, or a list.")
@click.option("--n-range", "n_range", default=None, help="Same as --n.")
@click.option("--budget", "limit", type=int, default=None, help="Largest n to enumerate (default SEMIEQ_BUDGET or 120).")
@click.option("--workers", type=int, default=None, help="Worker processes (default: CPU count).")
@click.option("--no-quotients", is_flag=True, help="Skip the exhaustive quotient enumeration.")
@out_option
@_guarded
def census(map_type, n_spec, n_range, limit, workers, no_quotients, out):
    """Compare the closed-form count with the constructed classes."""
    spec = n_spec or n_range
    if spec is None:
        raise click.UsageError("give --n or --n-range")
    try:
        ns = _parse_ns(spec)
    except ValueError as exc:
        raise click.BadParameter(f"bad n specification {spec!r}") from exc
    if limit is not None and limit < 1:
        raise click.BadParameter("--budget must be at least 1")
    workers = workers or os.cpu_count() or 1
    if workers < 1:
        raise click.BadParameter("--workers must be at least 1")
    cap = budget(limit)
    types = list(MAP_TYPES.values()) if map_type == "all" else [map_type]
    reports = [concordance(t, ns, limit=cap, workers=workers, quotients=not no_quotients) for t in types]
    payload = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
    _emit(json.dumps(payload, indent=2) + "\n", out)
    for r in reports:
        bad = [e.n for e in r.entries if e.verdict != "match"]
        click.echo(f"{r.map_type}: {len(r.entries) - len(bad)}/{len(r.entries)} match" + (f", mismatches at {bad}" if bad else ""), err=True)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@out_option
@click.pass_context
@_guarded
def relabel(ctx, path, out):
    """Write the same map with vertices renamed by a random permutation."""
    m = _read_map(path)
    perm = list(range(m.n_vertices))
    ctx.obj["rng"].shuffle(perm)
    faces = [[perm[v] for v in f] for f in m.faces]
    shuffled = from_faces(m.n_vertices, faces, map_type=m.map_type_hint)
    _emit(dumps(shuffled) + "\n", out)


if __name__ == "__main__":  # pragma: no cover
    main()
