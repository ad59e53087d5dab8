"""Command-line entry point: dev server, config checker, route listing.

Diagnostics and findings go to stderr; data (the routes table) goes to
stdout, so output stays pipe-friendly.
"""

import argparse
import os
import signal
import sys
from dataclasses import dataclass
from pathlib import Path

from strutskit import checks
from strutskit.config import ConfigError, parse_framework_config
from strutskit.http_kernel import BindFailure, serve
from strutskit.portal import (
    CONFIG_FILE,
    REQUIRED_TABLES,
    StartupError,
    build_portal,
    default_executors,
    default_validators,
)

PORT_ENV_VAR = "STRUTSKIT_PORT"
DEFAULT_PORT = 8080


@dataclass(frozen=True)
class CliInvocation:
    command: str
    config_dir: Path
    data_dir: Path
    template_dir: Path
    host: str
    port: int


def _port_type(value: str) -> int:
    port = int(value)
    if not 1 <= port <= 65535:
        raise argparse.ArgumentTypeError(f"port must be in 1..65535, got {port}")
    return port


def parse_args(argv=None) -> CliInvocation:
    parser = argparse.ArgumentParser(
        prog="strutskit",
        description="XML-configured MVC micro-framework: dev server, config checker, route listing.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("serve", "run the development server"),
        ("check", "statically check the asset tree without binding a socket"),
        ("routes", "print the action mapping table"),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", default="./config", help="configuration directory")
        sub.add_argument("--data", default="./data", help="table data directory")
        sub.add_argument("--templates", default="./templates", help="template directory")
        sub.add_argument("--host", default="127.0.0.1", help="bind address (serve only)")
        sub.add_argument(
            "--port",
            type=_port_type,
            default=None,
            help=f"listen port (default {DEFAULT_PORT}, or ${PORT_ENV_VAR})",
        )
    args = parser.parse_args(argv)

    port = args.port
    if port is None:
        env_value = os.environ.get(PORT_ENV_VAR)
        if env_value is not None:
            try:
                port = _port_type(env_value)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                parser.error(f"invalid {PORT_ENV_VAR}: {exc}")
        else:
            port = DEFAULT_PORT

    return CliInvocation(
        command=args.command,
        config_dir=Path(args.config),
        data_dir=Path(args.data),
        template_dir=Path(args.templates),
        host=args.host,
        port=port,
    )


def cmd_serve(inv: CliInvocation) -> int:
    try:
        app = build_portal(inv.config_dir, inv.data_dir, inv.template_dir)
    except StartupError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    print(f"strutskit serving on http://{inv.host}:{inv.port}", file=sys.stderr)
    try:
        signal.signal(signal.SIGTERM, lambda *_: (_ for _ in ()).throw(KeyboardInterrupt()))
    except ValueError:
        pass  # not the main thread; interrupt handling stays default
    try:
        serve(inv.host, inv.port, app)
    except BindFailure as exc:
        print(str(exc), file=sys.stderr)
        return 1
    print("strutskit shut down", file=sys.stderr)
    return 0


def cmd_check(inv: CliInvocation) -> int:
    findings = checks.run_checks(
        inv.config_dir,
        inv.data_dir,
        inv.template_dir,
        executors=default_executors(),
        validators=default_validators(),
        required_tables=REQUIRED_TABLES,
    )
    for finding in findings:
        print(finding.format(), file=sys.stderr)
    error_count = sum(1 for f in findings if f.severity == checks.ERROR)
    warning_count = len(findings) - error_count
    print(f"{error_count} errors, {warning_count} warnings", file=sys.stderr)
    return 0 if error_count == 0 else 1


def _format_forwards(mapping) -> str:
    if mapping.direct_forward is not None:
        return f"=> {mapping.direct_forward}"
    if not mapping.local_forwards:
        return "-"
    return ", ".join(f"{fwd.name}={fwd.path}" for fwd in mapping.local_forwards)


def cmd_routes(inv: CliInvocation) -> int:
    path = inv.config_dir / CONFIG_FILE
    try:
        config = parse_framework_config(path.read_text(encoding="utf-8"), CONFIG_FILE)
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1

    header = ("PATH", "FORM_BEAN", "SCOPE", "INPUT", "FORWARDS")
    rows = [header]
    for mapping in sorted(config.action_mappings, key=lambda m: m.path):
        rows.append(
            (
                mapping.path,
                mapping.form_bean or "-",
                mapping.scope.value,
                mapping.input_page or "-",
                _format_forwards(mapping),
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    for row in rows:
        cells = [row[i].ljust(widths[i]) for i in range(4)] + [row[4]]
        print("  ".join(cells).rstrip())
    return 0


def main(argv=None) -> int:
    inv = parse_args(argv)
    handlers = {"serve": cmd_serve, "check": cmd_check, "routes": cmd_routes}
    return handlers[inv.command](inv)


if __name__ == "__main__":
    sys.exit(main())
