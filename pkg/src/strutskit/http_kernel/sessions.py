"""Cookie-addressed server-side sessions.

Session ids carry 256 bits of entropy in URL-safe encoding. A session that
sits idle past the timeout is dropped and the request gets a fresh one, so
ids are never re-presented after invalidation. Each session exposes a
reentrant lock; the dispatcher holds it for the executor-and-render phase,
which serializes all access to the session's attributes and any
session-scoped form state.
"""

import secrets
import threading
import time
from dataclasses import dataclass, field

from strutskit.forms import FormState
from strutskit.http_kernel.request import HttpRequest

SESSION_COOKIE = "RCISESSIONID"
IDLE_TIMEOUT_SECONDS = 30 * 60


@dataclass
class Session:
    id: str
    created_at: float
    last_access: float
    attributes: dict[str, str] = field(default_factory=dict)
    form_beans: dict[str, FormState] = field(default_factory=dict)
    lock: threading.RLock = field(default_factory=threading.RLock, repr=False)


class SessionStore:
    """Thread-safe session registry with an injectable clock."""

    def __init__(self, clock=time.time, idle_timeout: float = IDLE_TIMEOUT_SECONDS):
        self._clock = clock
        self._idle_timeout = idle_timeout
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _new_session(self, now: float) -> Session:
        return Session(id=secrets.token_urlsafe(32), created_at=now, last_access=now)

    def get_or_create(self, request: HttpRequest) -> tuple[Session, str | None]:
        """Return the live session for the request's cookie, or a fresh one.

        The second element is a Set-Cookie value when a new session was
        created, else None. Touching a session slides its idle window.
        """
        now = self._clock()
        token = request.cookies.get(SESSION_COOKIE)
        with self._lock:
            if token is not None:
                session = self._sessions.get(token)
                if session is not None:
                    if now - session.last_access <= self._idle_timeout:
                        session.last_access = now
                        return session, None
                    del self._sessions[token]
            session = self._new_session(now)
            self._sessions[session.id] = session
        cookie = f"{SESSION_COOKIE}={session.id}; Path=/; HttpOnly"
        return session, cookie

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)


def get_or_create_session(store: SessionStore, request: HttpRequest) -> tuple[Session, str | None]:
    return store.get_or_create(request)
