"""The MVC request dispatcher.

One dispatch runs the pipeline: resolve the action mapping, populate the
form bean, validate, and either re-render the input page with errors or
invoke the executor and follow the forward it returns. Forward targets
carrying the action suffix are re-dispatched internally (never an HTTP
redirect), depth-limited against configuration loops.

Every dispatch emits a LifecycleTrace recording the pipeline stages of the
outermost action leg plus the final render; traces are what make the
dispatch contract testable.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from strutskit.config import (
    ACTION_SUFFIX,
    ActionNotFound,
    DeploymentDescriptor,
    FrameworkConfig,
    Scope,
    UnknownForward,
    resolve_action,
    resolve_forward,
)
from strutskit.errors import StrutskitError
from strutskit.forms import ActionErrors, FormState, ValidatorSpec, populate, run_validator
from strutskit.http_kernel.request import (
    HttpRequest,
    HttpResponse,
    error_response,
    html_response,
)
from strutskit.http_kernel.sessions import Session, SessionStore
from strutskit.persistence import TableStore
from strutskit.resources import MessageBundle
from strutskit.views import RenderContext, Template, render

log = logging.getLogger(__name__)

MAX_FORWARD_DEPTH = 5


class LifecycleEvent(Enum):
    RECEIVED = "Received"
    CONFIG_RESOLVED = "ConfigResolved"
    FORM_POPULATED = "FormPopulated"
    VALIDATED = "Validated"
    EXECUTOR_INVOKED = "ExecutorInvoked"
    FORWARD_RESOLVED = "ForwardResolved"
    VIEW_RENDERED = "ViewRendered"
    RESPONSE_SENT = "ResponseSent"


CANONICAL_EVENT_ORDER = tuple(LifecycleEvent)


@dataclass
class LifecycleTrace:
    events: list[LifecycleEvent] = field(default_factory=list)

    def record(self, event: LifecycleEvent):
        self.events.append(event)

    def __contains__(self, event: LifecycleEvent) -> bool:
        return event in self.events


class ExecutorFailure(StrutskitError):
    pass


class ForwardLoop(StrutskitError):
    pass


@dataclass(frozen=True)
class Executor:
    """An action executor plus the forward names it may return."""

    run: Callable[[FormState | None, Session, TableStore], str]
    forwards: frozenset[str]


@dataclass
class AppBundle:
    """Everything a running application needs, wired once at startup."""

    config: FrameworkConfig
    descriptor: DeploymentDescriptor
    messages: MessageBundle
    templates: dict[str, Template]
    executors: dict[str, Executor]
    validators: dict[str, ValidatorSpec]
    store: TableStore
    sessions: SessionStore = field(default_factory=SessionStore)
    static_dir: Path | None = None


def view_path_to_template(view_path: str) -> str:
    """Map a configured view path to a template name.

    "/citizen_home.jsp" names the template file "citizen_home.tpl", keeping
    configuration documents verbatim while rendering through templates.
    """
    name = view_path.lstrip("/")
    if name.endswith(".jsp"):
        return name[: -len(".jsp")] + ".tpl"
    if name.endswith(".tpl"):
        return name
    return name + ".tpl"


_STATIC_TYPES = {
    ".css": "text/css; charset=utf-8",
    ".html": "text/html; charset=utf-8",
    ".txt": "text/plain; charset=utf-8",
}


def _render_view(
    app: AppBundle,
    template_name: str,
    *,
    form: FormState | None,
    errors,
    session: Session,
) -> str:
    template = app.templates.get(template_name)
    if template is None:
        raise ExecutorFailure(f"template '{template_name}' is not loaded")
    ctx = RenderContext(
        form=form,
        errors=errors,
        bundle=app.messages,
        session_attrs=session.attributes,
    )
    return render(template, ctx)


def _serve_static(app: AppBundle, request: HttpRequest) -> HttpResponse:
    if app.static_dir is None or request.method != "GET":
        return error_response(404)
    name = request.path[len("/static/"):]
    if not name or "/" in name or name.startswith(".") or ".." in name:
        return error_response(404)
    path = app.static_dir / name
    if not path.is_file():
        return error_response(404)
    body = path.read_bytes()
    return HttpResponse(
        status=200,
        headers={
            "Content-Type": _STATIC_TYPES.get(path.suffix, "application/octet-stream"),
            "Content-Length": str(len(body)),
        },
        body=body,
    )


def _welcome_response(
    app: AppBundle, trace: LifecycleTrace, session: Session
) -> HttpResponse:
    for welcome_file in app.descriptor.welcome_files:
        template_name = view_path_to_template("/" + welcome_file)
        if template_name in app.templates:
            body = _render_view(
                app, template_name, form=None, errors=ActionErrors(), session=session
            )
            trace.record(LifecycleEvent.VIEW_RENDERED)
            return html_response(200, body)
    return error_response(404)


def _run_action(
    app: AppBundle,
    request: HttpRequest,
    path: str,
    trace: LifecycleTrace,
    depth: int,
    session: Session,
) -> HttpResponse:
    if depth > MAX_FORWARD_DEPTH:
        raise ForwardLoop(f"forward chain exceeded depth {MAX_FORWARD_DEPTH} at '{path}'")

    def record(event: LifecycleEvent):
        # Traces follow the outermost action leg; internal re-dispatch legs
        # stay silent so the canonical event order is never violated.
        if depth == 0:
            trace.record(event)

    mapping = resolve_action(app.config, path)
    record(LifecycleEvent.CONFIG_RESOLVED)

    form: FormState | None = None
    if mapping.form_bean is not None:
        bean = app.config.form_bean(mapping.form_bean)
        form = populate(bean, request.params)
        if mapping.scope is Scope.SESSION:
            session.form_beans[bean.name] = form
        record(LifecycleEvent.FORM_POPULATED)

        errors = run_validator(app.validators, mapping, form)
        record(LifecycleEvent.VALIDATED)
        if errors:
            if mapping.input_page is None:
                raise ExecutorFailure(
                    f"action '{mapping.path}' failed validation but declares no input page"
                )
            body = _render_view(
                app,
                view_path_to_template(mapping.input_page),
                form=form,
                errors=errors,
                session=session,
            )
            trace.record(LifecycleEvent.VIEW_RENDERED)
            return html_response(200, body)

    if mapping.direct_forward is not None:
        record(LifecycleEvent.FORWARD_RESOLVED)
        return _follow_forward(
            app, request, mapping.direct_forward, trace, depth, session, form
        )

    executor = app.executors.get(mapping.action_id)
    if executor is None:
        raise ExecutorFailure(f"no executor registered for '{mapping.action_id}'")
    record(LifecycleEvent.EXECUTOR_INVOKED)
    try:
        forward_name = executor.run(form, session, app.store)
    except StrutskitError:
        raise
    except Exception as exc:
        raise ExecutorFailure(f"executor '{mapping.action_id}' failed: {exc}") from exc
    forward = resolve_forward(app.config, mapping, forward_name)
    record(LifecycleEvent.FORWARD_RESOLVED)
    return _follow_forward(app, request, forward.path, trace, depth, session, form)


def _follow_forward(
    app: AppBundle,
    request: HttpRequest,
    target: str,
    trace: LifecycleTrace,
    depth: int,
    session: Session,
    form: FormState | None,
) -> HttpResponse:
    if target.endswith(ACTION_SUFFIX):
        return _run_action(app, request, target, trace, depth + 1, session)
    body = _render_view(
        app,
        view_path_to_template(target),
        form=form,
        errors=ActionErrors(),
        session=session,
    )
    trace.record(LifecycleEvent.VIEW_RENDERED)
    return html_response(200, body)


def dispatch(app: AppBundle, request: HttpRequest) -> tuple[HttpResponse, LifecycleTrace]:
    """Process one request through the full pipeline.

    Returns the response together with the request's lifecycle trace. Static
    assets bypass the session machinery; everything else gets a session
    before any executor can run, and holds that session's lock for the
    executor-and-render phase.
    """
    trace = LifecycleTrace()
    trace.record(LifecycleEvent.RECEIVED)
    new_cookie: str | None = None
    try:
        if request.path.startswith("/static/"):
            response = _serve_static(app, request)
        else:
            session, new_cookie = app.sessions.get_or_create(request)
            with session.lock:
                if request.path == "/":
                    response = _welcome_response(app, trace, session)
                else:
                    response = _run_action(app, request, request.path, trace, 0, session)
    except ActionNotFound:
        response = error_response(404)
    except ForwardLoop as exc:
        log.warning("%s", exc)
        response = error_response(508)
    except (ExecutorFailure, UnknownForward, StrutskitError) as exc:
        log.error("request to %s failed: %s", request.path, exc)
        response = error_response(500)
    if new_cookie is not None:
        headers = dict(response.headers)
        headers["Set-Cookie"] = new_cookie
        response = HttpResponse(status=response.status, headers=headers, body=response.body)
    trace.record(LifecycleEvent.RESPONSE_SENT)
    return response, trace
