"""The "Records Collection for India" (RCI) demo portal.

Wires the framework into a working application: the login executor with its
per-role credential tables, a citizen registration stub, the validator and
executor registries, and startup assembly with full cross-checking.
"""

import logging
from enum import Enum
from pathlib import Path

from strutskit import checks
from strutskit.config import parse_deployment_descriptor, parse_framework_config
from strutskit.errors import StrutskitError
from strutskit.forms import ActionErrors, FormState, ValidatorSpec, validate_login
from strutskit.http_kernel import AppBundle, Executor, Session, SessionStore
from strutskit.persistence import (
    StoreUnavailable,
    TableNotFound,
    TableStore,
    find_user,
)
from strutskit.resources import parse_properties
from strutskit.views import load_templates

log = logging.getLogger(__name__)

SESSION_USER_ATTR = "sessUserName"

LOGIN_ACTION_ID = "com.pawan.LoginAction"
REGISTER_ACTION_ID = "com.pawan.RegisterAction"

CONFIG_FILE = "struts-config.xml"
DESCRIPTOR_FILE = "web.xml"
MESSAGES_FILE = "ApplicationResource.properties"


class Role(Enum):
    CITIZEN = "citizen"
    EMPLOYEE = "employee"
    HOSPITAL = "hospital"
    SCHOOL = "school"
    ADMIN = "admin"


# Static choice-to-table map; never derived from request input, so a crafted
# "choice" value cannot name an arbitrary table.
ROLE_TABLES: dict[Role, str] = {role: f"{role.value}_signup_details" for role in Role}

REGISTRATION_TABLE = ROLE_TABLES[Role.CITIZEN]

REQUIRED_TABLES = tuple(sorted(ROLE_TABLES.values()))


class StartupError(StrutskitError):
    """Application assembly failed; findings name each faulty element."""

    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__(
            "startup failed:\n" + "\n".join(f.format() for f in self.findings)
        )


def login_execute(form: FormState, session: Session, store: TableStore) -> str:
    """Authenticate against the table selected by the submitted choice.

    On a credential match the session learns the user under sessUserName and
    the role's forward name is returned; everything else is "failure". Only
    the chosen role's table is ever read.
    """
    try:
        role = Role(form.get("choice"))
    except ValueError:
        return "failure"
    try:
        table = store.get(ROLE_TABLES[role])
    except TableNotFound as exc:
        raise StoreUnavailable(str(exc)) from exc
    record = find_user(table, form.get("userName"), form.get("password"))
    if record is None:
        return "failure"
    session.attributes[SESSION_USER_ATTR] = record.emailid
    return role.value


def register_citizen(form: FormState, store: TableStore) -> str:
    """Add a citizen credential row unless the email id is already taken."""
    try:
        table = store.get(REGISTRATION_TABLE)
    except TableNotFound as exc:
        raise StoreUnavailable(str(exc)) from exc
    values = {"emailid": form.get("emailid"), "password": form.get("password")}
    row = tuple(values.get(column, "") for column in table.columns)
    appended = store.append_row_if_absent(REGISTRATION_TABLE, row, "emailid")
    return "registered" if appended else "duplicate"


def validate_registration(form: FormState) -> ActionErrors:
    errors = ActionErrors()
    if len(form.get("emailid")) < 1:
        errors.add("emailid", "error.emailid.required")
    if len(form.get("password")) < 1:
        errors.add("password", "error.password.required")
    return errors


def default_executors() -> dict[str, Executor]:
    return {
        LOGIN_ACTION_ID: Executor(
            run=login_execute,
            forwards=frozenset({role.value for role in Role} | {"failure"}),
        ),
        REGISTER_ACTION_ID: Executor(
            run=lambda form, session, store: register_citizen(form, store),
            forwards=frozenset({"registered", "duplicate"}),
        ),
    }


def default_validators() -> dict[str, ValidatorSpec]:
    return {
        "LoginForm": ValidatorSpec(
            run=validate_login,
            message_keys=frozenset(
                {"error.userName.required", "error.password.required"}
            ),
        ),
        "RegisterForm": ValidatorSpec(
            run=validate_registration,
            message_keys=frozenset(
                {"error.emailid.required", "error.password.required"}
            ),
        ),
    }


def build_portal(config_dir, data_dir, template_dir) -> AppBundle:
    """Assemble the fully wired application.

    All startup cross-checks run first; any error aborts with a StartupError
    whose findings name the offending file and element. After a successful
    build, no request-time resolution can dangle.
    """
    config_dir = Path(config_dir)
    data_dir = Path(data_dir)
    template_dir = Path(template_dir)

    executors = default_executors()
    validators = default_validators()
    findings = checks.run_checks(
        config_dir,
        data_dir,
        template_dir,
        executors=executors,
        validators=validators,
        required_tables=REQUIRED_TABLES,
    )
    errors = [f for f in findings if f.severity == checks.ERROR]
    if errors:
        raise StartupError(errors)
    for finding in findings:
        log.warning("%s", finding.format())

    config = parse_framework_config(
        (config_dir / CONFIG_FILE).read_text(encoding="utf-8"), CONFIG_FILE
    )
    descriptor = parse_deployment_descriptor(
        (config_dir / DESCRIPTOR_FILE).read_text(encoding="utf-8"), DESCRIPTOR_FILE
    )
    messages = parse_properties(
        (config_dir / MESSAGES_FILE).read_text(encoding="utf-8"), MESSAGES_FILE
    )
    return AppBundle(
        config=config,
        descriptor=descriptor,
        messages=messages,
        templates=load_templates(template_dir),
        executors=executors,
        validators=validators,
        store=TableStore(data_dir),
        sessions=SessionStore(),
        static_dir=template_dir / "static",
    )
