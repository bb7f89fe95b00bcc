"""Command-line interface.

Subcommands: ``render`` (gene + data -> SVG file), ``validate`` (report every
schema violation, not just the first), ``paths`` (list the path-mode
catalogue), ``gallery`` (render the Cartesian product of a few gene axes into
a directory with an HTML index), ``extract`` (recover the gene embedded in a
rendered SVG), and ``serve`` (run the HTTP service).

Exit codes: 0 success, 1 invalid input (schema or unrenderable geometry),
2 file-system trouble. Output files are written atomically — a temp file in
the target directory is fsynced then renamed — so an interrupted run never
leaves a half-written SVG behind.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile
import warnings

from .data import Dataset, parse_dataset
from .errors import GeniiError, SchemaError
from .gene import Gene, parse_gene, serialize_gene
from .generators import PATH_CATALOGUE
from .render import RenderOptions, extract_gene, render

__all__ = ["main"]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2

_DEMO_DATA = {
    "categories": [
        {"name": "alpha", "value": 30, "range": 100},
        {"name": "beta", "value": 55, "range": 100},
        {"name": "gamma", "value": 80, "range": 100},
        {"name": "delta", "value": 45, "range": 100},
        {"name": "epsilon", "value": 62, "range": 100},
    ]
}


def _read_bytes(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write_atomic(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".genii-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _print_schema_error(exc: SchemaError) -> None:
    errors = exc.errors or [(exc.path, exc.message)]
    for path, message in errors:
        label = path if path else "(document)"
        print(f"error: {label}: {message}", file=sys.stderr)


def _load_gene(path: str, seed_name: str | None) -> Gene:
    gene = parse_gene(_read_bytes(path))
    if seed_name is not None:
        gene = dataclasses.replace(gene, name=seed_name)
    return gene


def _load_dataset(path: str | None) -> Dataset:
    if path is None:
        return Dataset()
    return parse_dataset(_read_bytes(path))


def _render_with_warnings(gene: Gene, dataset: Dataset, options: RenderOptions) -> bytes:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        svg = render(gene, dataset, options)
    for w in {str(c.message) for c in caught}:
        print(f"warning: {w}", file=sys.stderr)
    return svg


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_render(args) -> int:
    try:
        gene = _load_gene(args.gene, args.seed_name)
        dataset = _load_dataset(args.data)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SchemaError as exc:
        _print_schema_error(exc)
        return EXIT_INVALID
    options = RenderOptions(
        dpi=args.dpi, background=args.background, emit_debug_path=args.debug_path
    )
    try:
        svg = _render_with_warnings(gene, dataset, options)
    except SchemaError as exc:
        _print_schema_error(exc)
        return EXIT_INVALID
    except GeniiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        _write_atomic(args.output, svg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_validate(args) -> int:
    status = EXIT_OK
    try:
        raw = _read_bytes(args.gene)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        parse_gene(raw)
        print(f"{args.gene}: OK")
    except SchemaError as exc:
        _print_schema_error(exc)
        status = EXIT_INVALID
    if args.data is not None:
        try:
            parse_dataset(_read_bytes(args.data))
            print(f"{args.data}: OK")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        except SchemaError as exc:
            _print_schema_error(exc)
            status = EXIT_INVALID
    return status


def cmd_paths(args) -> int:
    for mode, info in PATH_CATALOGUE.items():
        params = ", ".join(info["params"]) if info["params"] else "-"
        print(f"{mode:20s} {info['description']}  [params: {params}]")
    return EXIT_OK


def cmd_extract(args) -> int:
    try:
        svg = _read_bytes(args.input)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        gene = extract_gene(svg)
    except (GeniiError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.buffer.write(serialize_gene(gene))
    return EXIT_OK


def _csv(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _gallery_genes(args) -> list[Gene]:
    if args.gene is not None:
        base_obj = json.loads(_read_bytes(args.gene))
    else:
        base_obj = {"name": "gallery", "path": {}, "mark": {}}
    modes = _csv(args.modes) if args.modes else [base_obj.get("path", {}).get("mode", "inline_linear")]
    shapes = _csv(args.shapes) if args.shapes else [base_obj.get("mark", {}).get("shape", "rect")]
    rotations = [float(r) for r in _csv(args.rotations)] if args.rotations else [None]
    gaps = [float(g) for g in _csv(args.gap_fractions)] if args.gap_fractions else [None]

    genes: list[Gene] = []
    seen: set[bytes] = set()
    counter = 0
    for mode in modes:
        for shape in shapes:
            for rot in rotations:
                for gap in gaps:
                    obj = json.loads(json.dumps(base_obj))  # deep copy
                    path_obj = obj.setdefault("path", {})
                    mark_obj = obj.setdefault("mark", {})
                    path_obj["mode"] = mode
                    if mode in ("hilbert", "peano", "z_mirror", "gray"):
                        path_obj.setdefault("order", 2)
                        path_obj.pop("pointCount", None)
                    elif mode in ("sweep", "scan", "diagonal"):
                        path_obj.setdefault("pointCount", 16)
                    mark_obj["shape"] = shape
                    if rot is not None:
                        path_obj["rotation"] = rot
                    if gap is not None:
                        mark_obj["gapFraction"] = gap
                    obj["name"] = f"gallery-{counter:03d}"
                    counter += 1
                    try:
                        gene = parse_gene(json.dumps(obj).encode("utf-8"))
                    except SchemaError as exc:
                        print(f"warning: skipping {mode}/{shape}: {exc}", file=sys.stderr)
                        continue
                    key = serialize_gene(
                        dataclasses.replace(gene, name="gallery")
                    )
                    if key in seen:
                        continue
                    seen.add(key)
                    genes.append(gene)
    return genes


def cmd_gallery(args) -> int:
    try:
        dataset = (
            _load_dataset(args.data)
            if args.data is not None
            else parse_dataset(json.dumps(_DEMO_DATA).encode("utf-8"))
        )
        genes = _gallery_genes(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SchemaError as exc:
        _print_schema_error(exc)
        return EXIT_INVALID

    if len(genes) > args.limit:
        print(
            f"warning: {len(genes)} combinations, capping at {args.limit}",
            file=sys.stderr,
        )
        genes = genes[: args.limit]

    try:
        os.makedirs(args.out, exist_ok=True)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    entries = []
    options = RenderOptions(dpi=args.dpi)
    for i, gene in enumerate(genes):
        mode = gene.path.mode
        shape = gene.mark.shape
        filename = f"{i:03d}_{mode}_{shape}.svg"
        try:
            svg = _render_with_warnings(gene, dataset, options)
        except GeniiError as exc:
            print(f"warning: skipping {filename}: {exc}", file=sys.stderr)
            continue
        try:
            _write_atomic(os.path.join(args.out, filename), svg)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        entries.append((filename, mode, shape))

    index = ["<!DOCTYPE html>", "<html><head><meta charset='utf-8'>",
             "<title>genii gallery</title>",
             "<style>body{font-family:sans-serif;display:flex;flex-wrap:wrap;gap:12px}"
             "figure{margin:0;text-align:center}img{border:1px solid #ccc}</style>",
             "</head><body>"]
    for filename, mode, shape in entries:
        index.append(
            f"<figure><img src='{filename}' alt='{mode} {shape}'>"
            f"<figcaption>{mode} / {shape}</figcaption></figure>"
        )
    index.append("</body></html>")
    try:
        _write_atomic(os.path.join(args.out, "index.html"),
                      ("\n".join(index) + "\n").encode("utf-8"))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(entries)} renders to {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    addr = args.addr or os.environ.get("GENII_ADDR") or "127.0.0.1:8765"
    host, _, port_text = addr.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: bad address {addr!r}, expected host:port", file=sys.stderr)
        return EXIT_INVALID
    app = create_app(store_path=args.store)
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genii", description="deterministic generative-visualisation engine"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render a gene + dataset to SVG")
    p_render.add_argument("-g", "--gene", required=True, help="gene JSON file")
    p_render.add_argument("-d", "--data", help="dataset JSON file")
    p_render.add_argument("-o", "--output", required=True,
                          help="output SVG path ('-' for stdout)")
    p_render.add_argument("--dpi", type=float, default=None,
                          help="pixels per inch (default: GENII_DPI or 96)")
    p_render.add_argument("--background", default=None, help="background colour")
    p_render.add_argument("--debug-path", action="store_true",
                          help="draw the flowpath skeleton under the marks")
    p_render.add_argument("--seed-name", default=None,
                          help="override the gene name used for seeding jitter")
    p_render.set_defaults(func=cmd_render)

    p_validate = sub.add_parser("validate", help="check a gene (and optional dataset)")
    p_validate.add_argument("-g", "--gene", required=True)
    p_validate.add_argument("-d", "--data")
    p_validate.set_defaults(func=cmd_validate)

    p_paths = sub.add_parser("paths", help="list available path modes")
    p_paths.set_defaults(func=cmd_paths)

    p_extract = sub.add_parser("extract", help="print the gene embedded in an SVG")
    p_extract.add_argument("-i", "--input", required=True, help="SVG file")
    p_extract.set_defaults(func=cmd_extract)

    p_gallery = sub.add_parser(
        "gallery", help="render a sweep of gene variations into a directory"
    )
    p_gallery.add_argument("-g", "--gene", help="base gene file (default: minimal)")
    p_gallery.add_argument("-d", "--data", help="dataset file (default: demo data)")
    p_gallery.add_argument("--out", required=True, help="output directory")
    p_gallery.add_argument("--modes", help="comma-separated path modes")
    p_gallery.add_argument("--shapes", help="comma-separated mark shapes")
    p_gallery.add_argument("--rotations", help="comma-separated rotation degrees")
    p_gallery.add_argument("--gap-fractions", help="comma-separated gap fractions")
    p_gallery.add_argument("--limit", type=int, default=64,
                           help="maximum number of renders (default 64)")
    p_gallery.add_argument("--dpi", type=float, default=None)
    p_gallery.set_defaults(func=cmd_gallery)

    p_serve = sub.add_parser("serve", help="run the HTTP render service")
    p_serve.add_argument("--addr", default=None,
                         help="host:port (default: GENII_ADDR or 127.0.0.1:8765)")
    p_serve.add_argument("--store", default=None,
                         help="gene store file (default: GENII_STORE or ./genii_store.jsonl)")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
