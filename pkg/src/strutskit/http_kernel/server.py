"""Threaded TCP server in front of the dispatcher.

Connections are handled one request each (Connection: close); the access log
writes one line per request: METHOD PATH STATUS DURATION_MS SESSION_PRESENT.
"""

import re
import socketserver
import time

from strutskit.errors import StrutskitError
from strutskit.http_kernel.dispatch import AppBundle, dispatch
from strutskit.http_kernel.request import (
    MAX_BODY_BYTES,
    BadRequest,
    HttpResponse,
    PayloadTooLarge,
    UnsupportedMethod,
    error_response,
    parse_request,
)
from strutskit.http_kernel.sessions import SESSION_COOKIE

MAX_HEAD_BYTES = 64 * 1024
_CONTENT_LENGTH_RE = re.compile(rb"^content-length:[ \t]*(\d+)[ \t]*\r?$", re.I | re.M)


class BindFailure(StrutskitError):
    pass


class _Handler(socketserver.StreamRequestHandler):
    timeout = 15

    def _read_raw_request(self) -> bytes | None:
        head = b""
        while b"\r\n\r\n" not in head:
            chunk = self.request.recv(8192)
            if not chunk:
                return head or None
            head += chunk
            if len(head) > MAX_HEAD_BYTES + MAX_BODY_BYTES:
                return head
        head_part, _, body_part = head.partition(b"\r\n\r\n")
        match = _CONTENT_LENGTH_RE.search(head_part)
        want = int(match.group(1)) if match else 0
        want = min(want, MAX_BODY_BYTES + 1)  # just past the limit is enough to reject
        while len(body_part) < want:
            chunk = self.request.recv(8192)
            if not chunk:
                break
            body_part += chunk
        return head_part + b"\r\n\r\n" + body_part

    def _write_response(self, response: HttpResponse):
        lines = [f"HTTP/1.1 {response.status} {response.reason}"]
        headers = dict(response.headers)
        headers.setdefault("Content-Length", str(len(response.body)))
        headers["Connection"] = "close"
        for name, value in headers.items():
            lines.append(f"{name}: {value}")
        head = ("\r\n".join(lines) + "\r\n\r\n").encode("utf-8")
        try:
            self.wfile.write(head + response.body)
        except (BrokenPipeError, ConnectionResetError):
            pass

    def handle(self):
        started = time.perf_counter()
        try:
            raw = self._read_raw_request()
        except (TimeoutError, ConnectionResetError, OSError):
            return
        if raw is None:
            return
        method = path = "-"
        session_present = 0
        try:
            request = parse_request(raw)
        except PayloadTooLarge:
            response = error_response(413)
        except UnsupportedMethod:
            response = error_response(405)
        except BadRequest:
            response = error_response(400)
        else:
            method, path = request.method, request.path
            session_present = 1 if SESSION_COOKIE in request.cookies else 0
            response, _trace = dispatch(self.server.app, request)
        self._write_response(response)
        duration_ms = (time.perf_counter() - started) * 1000.0
        self.server.log_line(
            f"{method} {path} {response.status} {duration_ms:.1f} {session_present}"
        )


class AppServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], app: AppBundle, log_line=None):
        self.app = app
        self.log_line = log_line if log_line is not None else lambda line: print(line, flush=True)
        try:
            super().__init__(address, _Handler)
        except OSError as exc:
            raise BindFailure(f"cannot bind {address[0]}:{address[1]}: {exc}") from exc


def make_server(address: str, port: int, app: AppBundle, log_line=None) -> AppServer:
    return AppServer((address, port), app, log_line=log_line)


def serve(address: str, port: int, app: AppBundle, log_line=None):
    """Run the server until interrupted; never returns normally."""
    server = make_server(address, port, app, log_line=log_line)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        server.server_close()
