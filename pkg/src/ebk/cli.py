"""Command-line front end: ``ebk generate | verify | tile | schmidt``.

Exit codes: 0 success, 1 usage or I/O problem, 2 unsupported construction,
3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import construct, io, isometry, multipartite, tiling
from .exceptions import (
    DegenerateCoefficientError,
    EbkError,
    InvalidInputError,
    TilingNotFoundError,
    UnsupportedConstructionError,
)
from .model import DEFAULT_RANK_TOL
from .verify import GRAM_TOL, meets, verify_basis, verify_multipartite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNSUPPORTED = 2
EXIT_FAILED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would exit with 2, which is reserved for unsupported constructions
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _use_color(stream) -> bool:
    return "EBK_NO_COLOR" not in os.environ and hasattr(stream, "isatty") and stream.isatty()


def _paint(text: str, code: str, stream=sys.stdout) -> str:
    return f"\033[{code}m{text}\033[0m" if _use_color(stream) else text


def _dims(text: str) -> tuple:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--dims must be comma-separated integers, got {text!r}") from exc
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise UsageError(f"--dims needs at least two positive dimensions, got {text!r}")
    return dims


def _coeffs(text: str | None):
    if text is None:
        return None
    if text.startswith("file:"):
        return isometry.load(text[len("file:"):])
    if text in ("dft", "od", "ud"):
        return text
    raise UsageError(f"--isometry must be dft, od, ud or file:PATH, got {text!r}")


def cmd_generate(args) -> int:
    dims = _dims(args.dims)
    if args.seed not in (None, "none"):
        try:
            int(args.seed)
        except ValueError as exc:
            raise UsageError(f"--seed must be 'none' or an integer, got {args.seed!r}") from exc
    coeffs = _coeffs(args.isometry)
    if len(dims) == 2:
        basis = construct.generate(construct.ConstructionRequest(dims[0], dims[1], args.k, args.family, coeffs, args.field))
    else:
        if args.family == "meb":
            raise UsageError("family meb is bipartite; use sebk for more parties")
        if args.family == "pb" and args.k != 1:
            raise UsageError("family pb means k = 1")
        basis = multipartite.generate_npartite(dims, args.k, args.family, coeffs, args.field)
    io.save(basis, args.out)
    print(f"wrote {len(basis)} states ({basis.family}, k={basis.k}, dims={'x'.join(map(str, dims))}) to {args.out}")
    return EXIT_OK


def _report_text(report, family: str, ok: bool) -> str:
    lines = [
        f"dims            {'x'.join(map(str, report.dims))}",
        f"claimed k       {report.claimed_k}",
        f"states          {report.state_count} / {report.expected_count}",
        f"gram deviation  {report.gram_max_deviation:.3e}",
        f"classification  {report.classification} (claimed {family})",
    ]
    worst = max((r.max_sebk_deviation for r in report.per_state), default=0.0)
    lines.append(f"max |sigma - 1/sqrt(k)|  {worst:.3e}")
    for f in report.failures[:20]:
        lines.append("failure  " + json.dumps(f, sort_keys=True))
    if len(report.failures) > 20:
        lines.append(f"... {len(report.failures) - 20} more failures")
    lines.append(_paint("PASS", "32") if ok else _paint("FAIL", "31"))
    return "\n".join(lines)


def cmd_verify(args) -> int:
    loaded = io.load(args.path)
    k = loaded.k if args.k is None else args.k
    if k < 1:
        raise UsageError("--k must be positive")
    if loaded.kind == "bipartite":
        report = verify_basis(loaded.vectors, k, tol_gram=args.tol_gram, tol_rank=args.tol_rank, dims=loaded.dims)
    else:
        report = verify_multipartite(loaded.vectors, k, dims=loaded.dims, tol_gram=args.tol_gram,
                                     tol_rank=args.tol_rank)
    ok = meets(report.classification, loaded.family)
    if args.format == "json":
        doc = report.to_dict()
        doc["claimed_family"] = loaded.family
        doc["passed"] = ok
        print(json.dumps(doc, indent=1, allow_nan=False, default=str))
    else:
        print(_report_text(report, loaded.family, ok))
    return EXIT_OK if ok else EXIT_FAILED


def _tile_grid(decomposition, corner_tiling, transposed: bool) -> list:
    d, dprime = decomposition.d, decomposition.dprime
    labels = [["." for _ in range(dprime)] for _ in range(d)]
    for b, block in enumerate(decomposition.blocks):
        if block.kind == "cyclic":
            for r, c in block.cells():
                labels[r][c] = chr(ord("A") + b)
    corner = decomposition.corner
    n_diag = n_l = 0
    for kind, piece in corner_tiling.pieces:
        if kind == "l":
            tag, cells = f"L{n_l}", piece.positions
            n_l += 1
        else:
            tag, cells = str(n_diag), piece
            n_diag += 1
        for r, c in cells:
            labels[corner.row0 + r][corner.col0 + c] = tag
    if transposed:
        labels = [list(col) for col in zip(*labels)]
    width = max(len(x) for row in labels for x in row)
    return [" ".join(x.rjust(width) for x in row) for row in labels]


def cmd_tile(args) -> int:
    dims = _dims(args.dims)
    if len(dims) != 2:
        raise UsageError("tile takes exactly two dimensions")
    d, dprime = dims
    k = args.k
    if not 1 <= k <= min(d, dprime):
        raise UsageError(f"--k must lie in [1, {min(d, dprime)}]")
    if (d * dprime) % k == 0:
        if args.format == "json":
            print(json.dumps({"dims": [d, dprime], "k": k, "cyclic_only": True}))
        else:
            print("cyclic only")
        return EXIT_OK
    transposed = d > dprime
    lo, hi = (dprime, d) if transposed else (d, dprime)
    decomposition = tiling.block_decompose(lo, hi, k)
    corner = decomposition.corner
    corner_tiling = tiling.tile_corner(corner.rows, corner.cols, k)
    if args.format == "json":
        pieces = []
        for kind, piece in corner_tiling.pieces:
            cells = piece.positions if kind == "l" else piece
            entry = {"kind": kind, "cells": [[corner.row0 + r, corner.col0 + c] for r, c in cells]}
            if kind == "l":
                entry.update(s=piece.s, orientation=piece.orientation)
            pieces.append(entry)
        doc = {
            "dims": [d, dprime],
            "k": k,
            "transposed": transposed,
            "blocks": [
                {"kind": b.kind, "origin": [b.row0, b.col0], "shape": [b.rows, b.cols]}
                for b in decomposition.blocks
            ],
            "corner_pieces": pieces,
        }
        print(json.dumps(doc, indent=1))
        return EXIT_OK
    print(f"{d}x{dprime}, k={k}: {len(decomposition.blocks)} blocks")
    for b, block in enumerate(decomposition.blocks):
        name = chr(ord("A") + b) if block.kind == "cyclic" else "corner"
        origin, shape = (block.row0, block.col0), (block.rows, block.cols)
        if transposed:
            origin, shape = origin[::-1], shape[::-1]
        print(f"  {name:6s} {block.kind:6s} at ({origin[0]},{origin[1]}) size {shape[0]}x{shape[1]}")
    print(f"corner: {len(corner_tiling.l_patterns)} L-patterns, {len(corner_tiling.diagonals)} diagonals")
    for line in _tile_grid(decomposition, corner_tiling, transposed):
        print("  " + line)
    return EXIT_OK


def cmd_schmidt(args) -> int:
    loaded = io.load(args.path)
    indices = range(len(loaded.vectors)) if args.index is None else [args.index]
    rows = []
    for i in indices:
        if not 0 <= i < len(loaded.vectors):
            raise UsageError(f"--index {i} out of range for {len(loaded.vectors)} states")
        v = loaded.vectors[i]
        first = loaded.dims[0]
        sigma = np.linalg.svd(v.reshape(first, -1), compute_uv=False)
        kept = [float(x) for x in sigma if x > args.tol_rank]
        rows.append({"index": i, "schmidt_number": len(kept), "coefficients": kept})
    if args.format == "json":
        print(json.dumps({"dims": list(loaded.dims), "cut": "party 1 | rest", "states": rows}, indent=1))
    else:
        for row in rows:
            coeffs = " ".join(f"{c:.12g}" for c in row["coefficients"])
            print(f"{row['index']:4d}  S={row['schmidt_number']}  {coeffs}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ebk", description="Entangled bases with fixed Schmidt number.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="build a basis and write it as JSON")
    g.add_argument("--dims", required=True, help="comma-separated party dimensions, e.g. 2,3")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--family", choices=["sebk", "ebk", "meb", "pb"], default="ebk")
    g.add_argument("--isometry", help="dft, od, ud or file:PATH")
    g.add_argument("--field", choices=["complex", "real"], default="complex")
    g.add_argument("--out", required=True)
    g.add_argument("--seed", help="accepted for reproducibility records; all constructions are deterministic")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="certify a basis file")
    v.add_argument("path")
    v.add_argument("--k", type=int)
    v.add_argument("--tol-gram", type=float, default=GRAM_TOL)
    v.add_argument("--tol-rank", type=float, default=DEFAULT_RANK_TOL)
    v.add_argument("--format", choices=["json", "text"], default="text")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tile", help="show the block decomposition and corner tiling")
    t.add_argument("--dims", required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--format", choices=["json", "text"], default="text")
    t.set_defaults(func=cmd_tile)

    s = sub.add_parser("schmidt", help="Schmidt coefficients of the states in a basis file")
    s.add_argument("path")
    s.add_argument("--index", type=int)
    s.add_argument("--tol-rank", type=float, default=DEFAULT_RANK_TOL)
    s.add_argument("--format", choices=["json", "text"], default="text")
    s.set_defaults(func=cmd_schmidt)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (UnsupportedConstructionError, TilingNotFoundError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InvalidInputError, DegenerateCoefficientError, EbkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
