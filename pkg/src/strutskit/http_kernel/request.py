"""HTTP request/response types and raw request parsing.

Deliberately small HTTP/1.x subset: GET and POST, Content-Length bodies,
form-urlencoded payloads. Anything else is rejected up front.
"""

from dataclasses import dataclass, field
from urllib.parse import parse_qsl, unquote

from strutskit.errors import StrutskitError

MAX_BODY_BYTES = 1024 * 1024

_REASONS = {
    200: "OK",
    400: "Bad Request",
    404: "Not Found",
    405: "Method Not Allowed",
    413: "Payload Too Large",
    500: "Internal Server Error",
    508: "Loop Detected",
}


class RequestError(StrutskitError):
    pass


class BadRequest(RequestError):
    pass


class UnsupportedMethod(RequestError):
    pass


class PayloadTooLarge(RequestError):
    pass


@dataclass(frozen=True)
class HttpRequest:
    method: str
    path: str
    query_params: dict[str, str] = field(default_factory=dict)
    body_params: dict[str, str] = field(default_factory=dict)
    headers: dict[str, str] = field(default_factory=dict)
    cookies: dict[str, str] = field(default_factory=dict)

    @property
    def params(self) -> dict[str, str]:
        """Request values seen by form population; body wins over query."""
        merged = dict(self.query_params)
        merged.update(self.body_params)
        return merged


@dataclass(frozen=True)
class HttpResponse:
    status: int
    headers: dict[str, str]
    body: bytes

    def __post_init__(self):
        declared = self.headers.get("Content-Length")
        if declared is not None and int(declared) != len(self.body):
            raise ValueError("Content-Length does not match body length")

    @property
    def reason(self) -> str:
        return _REASONS.get(self.status, "Unknown")


def html_response(status: int, text: str, extra_headers: dict[str, str] | None = None) -> HttpResponse:
    body = text.encode("utf-8")
    headers = {
        "Content-Type": "text/html; charset=utf-8",
        "Content-Length": str(len(body)),
    }
    if extra_headers:
        headers.update(extra_headers)
    return HttpResponse(status=status, headers=headers, body=body)


def error_response(status: int) -> HttpResponse:
    reason = _REASONS.get(status, "Error")
    return html_response(status, f"<html><body><h1>{status} {reason}</h1></body></html>")


def _parse_cookies(header: str) -> dict[str, str]:
    cookies = {}
    for part in header.split(";"):
        name, sep, value = part.strip().partition("=")
        if sep and name:
            cookies[name] = value
    return cookies


def parse_request(raw: bytes) -> HttpRequest:
    """Parse one raw HTTP request (head and body) into an HttpRequest.

    Percent-decoding is applied here, so downstream code only ever sees
    decoded parameter values.
    """
    head, sep, rest = raw.partition(b"\r\n\r\n")
    if not sep:
        raise BadRequest("request head not terminated")
    try:
        head_text = head.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise BadRequest(f"undecodable request head: {exc}") from None

    lines = head_text.split("\r\n")
    parts = lines[0].split(" ")
    if len(parts) != 3:
        raise BadRequest(f"malformed request line: {lines[0]!r}")
    method, target, version = parts
    if version not in ("HTTP/1.1", "HTTP/1.0"):
        raise BadRequest(f"unsupported protocol version: {version!r}")
    if method not in ("GET", "POST"):
        raise UnsupportedMethod(method)

    raw_path, _, raw_query = target.partition("?")
    path = unquote(raw_path)
    if not path.startswith("/"):
        raise BadRequest(f"request target must be absolute: {target!r}")

    headers: dict[str, str] = {}
    for line in lines[1:]:
        if not line:
            continue
        if line[0] in " \t" or ":" not in line:
            raise BadRequest(f"malformed header line: {line!r}")
        name, _, value = line.partition(":")
        headers[name.strip().lower()] = value.strip()

    declared = headers.get("content-length")
    if declared is not None:
        try:
            content_length = int(declared)
        except ValueError:
            raise BadRequest(f"bad Content-Length: {declared!r}") from None
        if content_length < 0:
            raise BadRequest("negative Content-Length")
        if content_length > MAX_BODY_BYTES:
            raise PayloadTooLarge(f"{content_length} bytes exceeds {MAX_BODY_BYTES}")
        if len(rest) < content_length:
            raise BadRequest("body shorter than Content-Length")
        body = rest[:content_length]
    else:
        if rest:
            raise BadRequest("body without Content-Length")
        body = b""

    body_params: dict[str, str] = {}
    if body:
        content_type = headers.get("content-type", "application/x-www-form-urlencoded")
        if content_type.split(";")[0].strip() == "application/x-www-form-urlencoded":
            body_params = dict(
                parse_qsl(body.decode("utf-8", errors="replace"), keep_blank_values=True)
            )

    return HttpRequest(
        method=method,
        path=path,
        query_params=dict(parse_qsl(raw_query, keep_blank_values=True)),
        body_params=body_params,
        headers=headers,
        cookies=_parse_cookies(headers.get("cookie", "")),
    )
