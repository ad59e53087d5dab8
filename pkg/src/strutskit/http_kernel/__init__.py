"""HTTP kernel: request parsing, sessions, the MVC dispatcher, and the server."""

from strutskit.http_kernel.dispatch import (
    CANONICAL_EVENT_ORDER,
    AppBundle,
    Executor,
    ExecutorFailure,
    ForwardLoop,
    LifecycleEvent,
    LifecycleTrace,
    dispatch,
    view_path_to_template,
)
from strutskit.http_kernel.request import (
    BadRequest,
    HttpRequest,
    HttpResponse,
    PayloadTooLarge,
    UnsupportedMethod,
    error_response,
    html_response,
    parse_request,
)
from strutskit.http_kernel.server import AppServer, BindFailure, make_server, serve
from strutskit.http_kernel.sessions import (
    IDLE_TIMEOUT_SECONDS,
    SESSION_COOKIE,
    Session,
    SessionStore,
    get_or_create_session,
)

__all__ = [
    "AppBundle",
    "AppServer",
    "BadRequest",
    "BindFailure",
    "CANONICAL_EVENT_ORDER",
    "Executor",
    "ExecutorFailure",
    "ForwardLoop",
    "HttpRequest",
    "HttpResponse",
    "IDLE_TIMEOUT_SECONDS",
    "LifecycleEvent",
    "LifecycleTrace",
    "PayloadTooLarge",
    "SESSION_COOKIE",
    "Session",
    "SessionStore",
    "UnsupportedMethod",
    "dispatch",
    "error_response",
    "get_or_create_session",
    "html_response",
    "make_server",
    "parse_request",
    "serve",
    "view_path_to_template",
]
