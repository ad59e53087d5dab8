"""Raw HTTP parsing and session store behavior."""

import pytest

from strutskit.http_kernel import (
    SESSION_COOKIE,
    BadRequest,
    HttpRequest,
    HttpResponse,
    PayloadTooLarge,
    SessionStore,
    UnsupportedMethod,
    parse_request,
)


def raw(method="GET", target="/", headers=(), body=b""):
    lines = [f"{method} {target} HTTP/1.1", "Host: localhost"]
    lines += list(headers)
    if body:
        lines.append(f"Content-Length: {len(body)}")
        lines.append("Content-Type: application/x-www-form-urlencoded")
    head = "\r\n".join(lines) + "\r\n\r\n"
    return head.encode() + body


class TestParseRequest:
    def test_login_post(self):
        request = parse_request(raw("POST", "/Login", body=b"userName=u&password=p&choice=citizen"))
        assert request.method == "POST"
        assert request.path == "/Login"
        assert request.body_params == {
            "userName": "u", "password": "p", "choice": "citizen",
        }

    def test_bare_get(self):
        request = parse_request(raw("GET", "/"))
        assert request.method == "GET"
        assert request.path == "/"
        assert request.params == {}

    def test_percent_decoding(self):
        # Hand-decoded: %26 is "&", "+" is a space.
        request = parse_request(raw("POST", "/Login", body=b"a=%26&b=c+d"))
        assert request.body_params == {"a": "&", "b": "c d"}

    def test_query_params(self):
        request = parse_request(raw("GET", "/Login?x=1&y=two%20words"))
        assert request.path == "/Login"
        assert request.query_params == {"x": "1", "y": "two words"}

    def test_body_overrides_query(self):
        request = parse_request(raw("POST", "/Login?a=query", body=b"a=body"))
        assert request.params == {"a": "body"}

    def test_path_percent_decoded(self):
        request = parse_request(raw("GET", "/a%20b"))
        assert request.path == "/a b"

    def test_cookies_parsed(self):
        request = parse_request(raw("GET", "/", headers=["Cookie: a=1; RCISESSIONID=tok"]))
        assert request.cookies == {"a": "1", "RCISESSIONID": "tok"}

    def test_blank_values_kept(self):
        request = parse_request(raw("POST", "/Login", body=b"userName=&password="))
        assert request.body_params == {"userName": "", "password": ""}

    def test_duplicate_param_last_wins(self):
        request = parse_request(raw("POST", "/Login", body=b"a=1&a=2"))
        assert request.body_params == {"a": "2"}

    def test_non_form_body_ignored(self):
        body = b'{"a": 1}'
        head = (
            f"POST / HTTP/1.1\r\nHost: x\r\nContent-Length: {len(body)}\r\n"
            "Content-Type: application/json\r\n\r\n"
        ).encode()
        assert parse_request(head + body).body_params == {}

    def test_unsupported_method(self):
        with pytest.raises(UnsupportedMethod):
            parse_request(raw("PUT", "/x", body=b"a=1"))

    def test_malformed_request_line(self):
        with pytest.raises(BadRequest):
            parse_request(b"GET /\r\n\r\n")

    def test_bad_version(self):
        with pytest.raises(BadRequest):
            parse_request(b"GET / SPDY/3\r\n\r\n")

    def test_missing_head_terminator(self):
        with pytest.raises(BadRequest):
            parse_request(b"GET / HTTP/1.1\r\nHost: x\r\n")

    def test_header_without_colon(self):
        with pytest.raises(BadRequest):
            parse_request(b"GET / HTTP/1.1\r\nBogus header\r\n\r\n")

    def test_truncated_body(self):
        head = b"POST / HTTP/1.1\r\nContent-Length: 10\r\n\r\n"
        with pytest.raises(BadRequest):
            parse_request(head + b"abc")

    def test_payload_too_large(self):
        head = f"POST / HTTP/1.1\r\nContent-Length: {2 * 1024 * 1024}\r\n\r\n".encode()
        with pytest.raises(PayloadTooLarge):
            parse_request(head)

    def test_relative_target_rejected(self):
        with pytest.raises(BadRequest):
            parse_request(b"GET nowhere HTTP/1.1\r\n\r\n")


class TestHttpResponse:
    def test_content_length_must_match(self):
        with pytest.raises(ValueError):
            HttpResponse(status=200, headers={"Content-Length": "5"}, body=b"abc")


def with_cookie(token):
    return HttpRequest(method="GET", path="/", cookies={SESSION_COOKIE: token})


BARE = HttpRequest(method="GET", path="/")


class TestSessionStore:
    def test_no_cookie_creates_session(self):
        store = SessionStore()
        session, cookie = store.get_or_create(BARE)
        assert cookie == f"{SESSION_COOKIE}={session.id}; Path=/; HttpOnly"
        assert len(session.id) >= 22  # at least 128 bits url-safe encoded

    def test_valid_cookie_returns_same_session(self):
        store = SessionStore()
        first, _ = store.get_or_create(BARE)
        second, cookie = store.get_or_create(with_cookie(first.id))
        assert second is first
        assert cookie is None

    def test_unknown_cookie_gets_fresh_session(self):
        store = SessionStore()
        session, cookie = store.get_or_create(with_cookie("forged-token"))
        assert session.id != "forged-token"
        assert cookie is not None

    def test_idle_expiry_with_injected_clock(self):
        now = [1000.0]
        store = SessionStore(clock=lambda: now[0])
        first, _ = store.get_or_create(BARE)
        now[0] += 31 * 60
        second, cookie = store.get_or_create(with_cookie(first.id))
        assert second is not first
        assert second.id != first.id
        assert cookie is not None

    def test_activity_slides_idle_window(self):
        now = [0.0]
        store = SessionStore(clock=lambda: now[0])
        first, _ = store.get_or_create(BARE)
        now[0] = 29 * 60
        store.get_or_create(with_cookie(first.id))
        now[0] = 58 * 60
        again, cookie = store.get_or_create(with_cookie(first.id))
        assert again is first
        assert cookie is None

    def test_attributes_are_per_session(self):
        store = SessionStore()
        a, _ = store.get_or_create(BARE)
        b, _ = store.get_or_create(BARE)
        a.attributes["sessUserName"] = "a@b.c"
        assert "sessUserName" not in b.attributes

    def test_ids_unique(self):
        store = SessionStore()
        ids = {store.get_or_create(BARE)[0].id for _ in range(50)}
        assert len(ids) == 50
