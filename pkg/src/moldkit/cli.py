"""Command line: serve the inspector, run examples, render views, run scripts.

Exit codes are part of the contract:
    0  success / all selected examples passed
    1  example failures (or a failing script)
    2  environment problems (e.g. the port is already in use)
    3  collection or configuration errors
    4  usage errors (bad flags, unknown roots or views)

Flags override the MOLDKIT_DB / MOLDKIT_FIXTURES / MOLDKIT_PORT environment
variables, which override the built-in defaults.
"""

from __future__ import annotations

import argparse
import importlib
import json
import os
import socket
import sys
import traceback
from pathlib import Path

from . import core
from .errors import CollectionError, MoldkitError
from .examples import collect_examples, run_examples
from .service import DEFAULT_HOST, DEFAULT_PORT, ServiceConfig, build_runtime

EXIT_OK = 0
EXIT_TEST_FAILURES = 1
EXIT_ENVIRONMENT = 2
EXIT_COLLECTION = 3
EXIT_USAGE = 4

TABLE_CELL_LIMIT = 40


class UsageExit(Exception):
    def __init__(self, message):
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageExit(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="moldkit",
                     description="Inspect explainable domain models.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the inspector service")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--db", default=None, help="diary database directory")
    serve.add_argument("--fixtures", default=None, help="fixtures directory")

    examples = sub.add_parser("examples", help="run example suites")
    examples.add_argument("--scope", action="append", default=None,
                          metavar="MODULE",
                          help="module to collect from (repeatable); "
                               "default: the demo suite")
    examples.add_argument("--filter", action="append", default=None,
                          metavar="EXAMPLE_ID",
                          help="run only these examples plus dependencies")
    examples.add_argument("--report", default=None, metavar="PATH",
                          help="write the machine-readable report here")
    examples.add_argument("--time-budget", type=float, default=None,
                          metavar="SECONDS",
                          help="wall-clock budget for the whole run (CI)")

    view = sub.add_parser("view", help="render one view of a root object")
    view.add_argument("root", help="registered root, e.g. demo.ludo")
    view.add_argument("view_id")
    view.add_argument("--format", choices=("json", "table"), default="table")
    view.add_argument("--page", type=int, default=1)
    view.add_argument("--page-size", type=int, default=None)
    view.add_argument("--db", default=None)
    view.add_argument("--fixtures", default=None)

    script = sub.add_parser("script",
                            help="run a throwaway analysis script with the "
                                 "framework preloaded")
    script.add_argument("path")
    script.add_argument("--db", default=None)
    script.add_argument("--fixtures", default=None)
    return parser


def _resolve_config(args) -> ServiceConfig:
    """Flags override env vars override defaults."""
    db = getattr(args, "db", None) or os.environ.get("MOLDKIT_DB")
    fixtures = getattr(args, "fixtures", None) or \
        os.environ.get("MOLDKIT_FIXTURES")
    port = getattr(args, "port", None)
    if port is None:
        port = int(os.environ.get("MOLDKIT_PORT", DEFAULT_PORT))
    host = getattr(args, "host", None) or DEFAULT_HOST
    return ServiceConfig(
        host=host,
        port=port,
        db_root=Path(db) if db else None,
        fixtures_root=Path(fixtures) if fixtures else None,
    )


# -- commands -------------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _resolve_config(args)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((config.host, config.port))
    except OSError as exc:
        print(f"cannot listen on {config.host}:{config.port}: {exc}",
              file=sys.stderr)
        return EXIT_ENVIRONMENT
    finally:
        probe.close()
    app = create_app(config)
    print(f"moldkit inspector on http://{config.host}:{config.port}")
    uvicorn.run(app, host=config.host, port=config.port,
                log_level="info" if args.verbose else "warning")
    return EXIT_OK


def _load_scope(names):
    if not names:
        from .demo import examples as demo_examples
        return [demo_examples]
    modules = []
    for name in names:
        modules.append(importlib.import_module(name))
    return modules


def cmd_examples(args) -> int:
    try:
        modules = _load_scope(args.scope)
    except ImportError as exc:
        print(f"cannot import scope: {exc}", file=sys.stderr)
        return EXIT_COLLECTION
    try:
        graph = collect_examples(modules)
    except CollectionError as exc:
        print(f"collection failed: {exc}", file=sys.stderr)
        return EXIT_COLLECTION
    report = run_examples(graph, selector=args.filter,
                          time_budget_s=args.time_budget)
    doc = report.to_document()
    if args.report:
        Path(args.report).write_text(
            json.dumps(doc, ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8")
    for result in doc["results"]:
        timing = f"  ({result['duration_s'] * 1000:.1f} ms)" \
            if args.verbose else ""
        print(f"{result['status']:>7}  {result['example_id']}{timing}")
    failed = sum(r["status"] in ("failed", "errored", "skipped")
                 for r in doc["results"])
    print(f"{len(doc['results'])} examples, {failed} not passing")
    return EXIT_OK if report.all_passed else EXIT_TEST_FAILURES


def _render_table(payload: dict) -> str:
    def clip(cell: str) -> str:
        cell = str(cell)
        if len(cell) > TABLE_CELL_LIMIT:
            return cell[:TABLE_CELL_LIMIT - 1] + "…"
        return cell

    kind = payload["kind"]
    if kind == "text":
        return payload["content"]
    if kind == "error":
        return f"view error:\n{payload['error_text']}"
    if kind == "list":
        return "\n".join(clip(r["label"]) for r in payload["rows"])
    if kind == "tree":
        return "\n".join(
            ("+ " if r["has_children"] else "  ") + clip(r["label"])
            for r in payload["roots"])
    header = [clip(c) for c in payload["columns"]]
    rows = [[clip(c) for c in r["cells"]] for r in payload["rows"]]
    widths = [max([len(header[i])] + [len(r[i]) for r in rows])
              for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)),
             "  ".join("-" * w for w in widths)]
    lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths))
                 for row in rows)
    lines.append(f"({payload['total_count']} rows total, "
                 f"page {payload['page']})")
    return "\n".join(lines)


def cmd_view(args) -> int:
    config = _resolve_config(args)
    manager, db, graph = build_runtime(config)
    try:
        session = manager.create_session(root=args.root)
        pane = session.panes[0]
        data = core.render_view(session.space, pane.subject, args.view_id,
                                page=args.page, page_size=args.page_size,
                                registry=manager.registry)
    except MoldkitError as exc:
        print(f"{exc.kind}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    payload = data.to_payload()
    if args.format == "json":
        sys.stdout.buffer.write(core.wire_json_bytes(payload))
        sys.stdout.buffer.flush()
    else:
        print(_render_table(payload))
    return EXIT_OK


def cmd_script(args) -> int:
    path = Path(args.path)
    if not path.is_file():
        print(f"no such script: {path}", file=sys.stderr)
        return EXIT_COLLECTION
    config = _resolve_config(args)
    from .demo import demo_fixtures_root, open_demo_diary

    import moldkit

    db = open_demo_diary(config.db_root)
    context = {
        "__name__": "__main__",
        "__file__": str(path),
        "moldkit": moldkit,
        "registry": core.DEFAULT_REGISTRY,
        "db": db,
        "fixtures": config.fixtures_root or demo_fixtures_root(),
    }
    source = path.read_text(encoding="utf-8")
    try:
        exec(compile(source, str(path), "exec"), context)  # noqa: S102
    except SystemExit as exc:
        return int(exc.code or 0)
    except BaseException:
        traceback.print_exc()
        return EXIT_TEST_FAILURES
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageExit as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    handlers = {
        "serve": cmd_serve,
        "examples": cmd_examples,
        "view": cmd_view,
        "script": cmd_script,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
