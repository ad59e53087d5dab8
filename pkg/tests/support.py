"""Shared fixtures, oracles, and hypothesis strategies for the test suite."""

from hypothesis import strategies as st

from strutskit.config import (
    ActionMapping,
    FormBeanDef,
    FormProperty,
    Forward,
    FrameworkConfig,
    Scope,
)

# The demo login configuration document, kept verbatim as the framework's
# canonical reference input.
LOGIN_CONFIG_XML = """\
<struts-config>
  <form-beans>
    <form-bean name="LoginForm" type="com.pawan.LoginForm"/>
  </form-beans>
  <global-exceptions>
  </global-exceptions>
  <global-forwards>
    <forward name="welcome" path="/Welcome.do"/>
  </global-forwards>
  <action-mappings>
    <action input="/login.jsp" name="LoginForm" path="/Login" scope="session" type="com.pawan.LoginAction">
      <forward name="citizen" path="/citizen_home.jsp" />
      <forward name="employee" path="/employee_home.jsp" />
      <forward name="hospital" path="/hospital_home.jsp" />
      <forward name="admin" path="/admin_home.jsp" />
      <forward name="school" path="/school_home.jsp" />
      <forward name="failure" path="/failure.jsp" />
    </action>
    <action path="/Welcome" forward="/welcomeStruts.jsp"/>
  </action-mappings>
</struts-config>
"""

WELCOME_XML = """\
<?xml version="1.0" encoding="UTF-8"?>
<welcome-file-list>
  <welcome-file>welcome.jsp</welcome-file>
</welcome-file-list>
"""


def assert_config_equal(left: FrameworkConfig, right: FrameworkConfig):
    """Field-by-field structural comparison, independent of dataclass __eq__."""
    assert len(left.form_beans) == len(right.form_beans)
    for lb, rb in zip(left.form_beans, right.form_beans):
        assert lb.name == rb.name
        assert lb.type_id == rb.type_id
        assert [(p.name, p.default) for p in lb.properties] == [
            (p.name, p.default) for p in rb.properties
        ]
    assert [(f.name, f.path) for f in left.global_forwards] == [
        (f.name, f.path) for f in right.global_forwards
    ]
    assert len(left.action_mappings) == len(right.action_mappings)
    for lm, rm in zip(left.action_mappings, right.action_mappings):
        assert lm.path == rm.path
        assert lm.form_bean == rm.form_bean
        assert lm.input_page == rm.input_page
        assert lm.scope == rm.scope
        assert lm.action_id == rm.action_id
        assert lm.direct_forward == rm.direct_forward
        assert [(f.name, f.path) for f in lm.local_forwards] == [
            (f.name, f.path) for f in rm.local_forwards
        ]


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
_ALNUM = _LETTERS + "0123456789_"
IDENT = st.builds(
    "".join,
    st.tuples(st.sampled_from(_LETTERS), st.text(alphabet=_ALNUM, max_size=7)),
)
DOTTED = st.builds(".".join, st.lists(IDENT, min_size=1, max_size=3))


@st.composite
def framework_configs(draw) -> FrameworkConfig:
    """Generate structurally valid configurations.

    Every cross-reference invariant the parser enforces is respected: bean
    names unique and resolvable, action paths unique, forward names unique per
    scope, and action-suffixed forward targets always name a declared mapping.
    """
    bean_names = draw(st.lists(IDENT, unique=True, min_size=0, max_size=3))
    beans = []
    for name in bean_names:
        prop_names = draw(st.lists(IDENT, unique=True, min_size=1, max_size=3))
        props = tuple(
            FormProperty(p, draw(st.one_of(st.just(""), IDENT))) for p in prop_names
        )
        beans.append(FormBeanDef(name=name, type_id=draw(DOTTED), properties=props))

    n_mappings = draw(st.integers(min_value=0, max_value=4))
    segments = draw(
        st.lists(IDENT, unique=True, min_size=n_mappings, max_size=n_mappings)
    )
    paths = ["/" + seg for seg in segments]

    def draw_forward_path() -> str:
        if paths and draw(st.booleans()):
            return draw(st.sampled_from(paths)) + ".do"
        return f"/{draw(IDENT)}.jsp"

    def draw_forwards(max_size: int) -> tuple[Forward, ...]:
        names = draw(st.lists(IDENT, unique=True, min_size=0, max_size=max_size))
        return tuple(Forward(name, draw_forward_path()) for name in names)

    mappings = []
    for path in paths:
        if draw(st.booleans()):
            mappings.append(ActionMapping(path=path, direct_forward=draw_forward_path()))
        else:
            form_bean = draw(st.one_of(st.none(), st.sampled_from(bean_names))) if bean_names else None
            mappings.append(
                ActionMapping(
                    path=path,
                    form_bean=form_bean,
                    input_page=draw(st.one_of(st.none(), IDENT.map(lambda s: f"/{s}.jsp"))),
                    scope=draw(st.sampled_from([Scope.REQUEST, Scope.SESSION])),
                    action_id=draw(DOTTED),
                    local_forwards=draw_forwards(3),
                )
            )

    return FrameworkConfig(
        form_beans=tuple(beans),
        global_forwards=draw_forwards(2),
        action_mappings=tuple(mappings),
    )


# ---------------------------------------------------------------------------
# Inline application bundle for kernel-level tests (no shipped assets needed).

from strutskit.config import (  # noqa: E402
    parse_deployment_descriptor,
    parse_framework_config,
)
from strutskit.forms import ValidatorSpec, validate_login  # noqa: E402
from strutskit.http_kernel import (  # noqa: E402
    CANONICAL_EVENT_ORDER,
    AppBundle,
    Executor,
    HttpRequest,
    LifecycleEvent,
    SessionStore,
)
from strutskit.persistence import Table, TableStore, find_user, save_table  # noqa: E402
from strutskit.resources import parse_properties  # noqa: E402
from strutskit.views import compile_template  # noqa: E402

INLINE_CONFIG_XML = """\
<struts-config>
  <form-beans>
    <form-bean name="LoginForm" type="test.LoginForm">
      <form-property name="choice"/>
      <form-property name="userName"/>
      <form-property name="password"/>
    </form-bean>
  </form-beans>
  <global-forwards>
    <forward name="welcome" path="/Welcome.do"/>
  </global-forwards>
  <action-mappings>
    <action input="/login.jsp" name="LoginForm" path="/Login" scope="session" type="test.Login">
      <forward name="citizen" path="/citizen_home.jsp"/>
      <forward name="failure" path="/failure.jsp"/>
      <forward name="roam" path="/Welcome.do"/>
    </action>
    <action path="/Welcome" forward="/welcomeStruts.jsp"/>
    <action path="/LoopA" forward="/LoopB.do"/>
    <action path="/LoopB" forward="/LoopA.do"/>
    <action path="/Boom" type="test.Boom"/>
    <action path="/Ghost" type="test.Ghost"/>
    <action path="/NoInput" name="LoginForm" type="test.Login"/>
  </action-mappings>
</struts-config>
"""

INLINE_TEMPLATES = {
    "welcome.tpl": 'TPL:welcome <a href="/Login.do">Login</a>',
    "login.tpl": (
        "TPL:login {{errors}}"
        '{{form action="/Login"}}'
        '{{text property="userName" size="15"}}'
        '{{password property="password" size="15"}}'
        '{{submit value="Login"}}'
        "{{/form}}"
    ),
    "citizen_home.tpl": 'TPL:citizen_home Hello {{session attr="sessUserName"}}',
    "failure.tpl": "TPL:failure",
    "welcomeStruts.tpl": "TPL:welcomeStruts",
}

INLINE_MESSAGES = (
    "error.userName.required = User Name is required.\n"
    "error.password.required = Password is required.\n"
)


def _inline_login(form, session, store):
    if form.get("choice") == "wander":
        return "roam"
    record = find_user(store.get("citizen_signup_details"), form.get("userName"), form.get("password"))
    if record is not None and form.get("choice") == "citizen":
        session.attributes["sessUserName"] = record.emailid
        return "citizen"
    return "failure"


def _inline_boom(form, session, store):
    raise RuntimeError("intentional executor failure")


def build_inline_app(tmp_path, clock=None) -> AppBundle:
    data_dir = tmp_path / "data"
    data_dir.mkdir(parents=True, exist_ok=True)
    save_table(
        data_dir,
        Table("citizen_signup_details", ("emailid", "password"), (("a@b.c", "pw"),)),
    )
    static_dir = tmp_path / "static"
    static_dir.mkdir(exist_ok=True)
    (static_dir / "style.css").write_text("body { margin: 0; }\n", encoding="utf-8")
    sessions = SessionStore(clock=clock) if clock else SessionStore()
    return AppBundle(
        config=parse_framework_config(INLINE_CONFIG_XML),
        descriptor=parse_deployment_descriptor(
            "<web-app><welcome-file-list><welcome-file>welcome.jsp</welcome-file>"
            "</welcome-file-list></web-app>"
        ),
        messages=parse_properties(INLINE_MESSAGES),
        templates={
            name: compile_template(name, text) for name, text in INLINE_TEMPLATES.items()
        },
        executors={
            "test.Login": Executor(run=_inline_login, forwards=frozenset({"citizen", "failure", "roam"})),
            "test.Boom": Executor(run=_inline_boom, forwards=frozenset()),
        },
        validators={
            "LoginForm": ValidatorSpec(
                run=validate_login,
                message_keys=frozenset({"error.userName.required", "error.password.required"}),
            )
        },
        store=TableStore(data_dir),
        sessions=sessions,
        static_dir=static_dir,
    )


def req(method="GET", path="/", params=None, cookies=None) -> HttpRequest:
    return HttpRequest(
        method=method,
        path=path,
        body_params=dict(params or {}),
        cookies=dict(cookies or {}),
    )


def assert_canonical_trace(trace):
    """Events must be a gap-valid subsequence of the canonical order,
    starting with Received and ending with ResponseSent."""
    order = {event: i for i, event in enumerate(CANONICAL_EVENT_ORDER)}
    indexes = [order[e] for e in trace.events]
    assert all(a < b for a, b in zip(indexes, indexes[1:])), trace.events
    assert trace.events[0] is LifecycleEvent.RECEIVED
    assert trace.events[-1] is LifecycleEvent.RESPONSE_SENT


# ---------------------------------------------------------------------------
# Demo asset trees: shipped copies and minimal inline templates.

import shutil  # noqa: E402
from pathlib import Path  # noqa: E402

REPO_ROOT = Path(__file__).resolve().parent.parent
SHIPPED_CONFIG_DIR = REPO_ROOT / "config"
SHIPPED_DATA_DIR = REPO_ROOT / "data"
SHIPPED_TEMPLATE_DIR = REPO_ROOT / "templates"

# Minimal functional stand-ins for every view the demo config references.
# Each carries a marker so responses identify the template that produced them.
MINIMAL_DEMO_TEMPLATES = {
    "welcome.tpl": 'TPL:welcome <a href="/Login.do">Sign in</a> <a href="/Register.do">Register</a>',
    "welcomeStruts.tpl": "TPL:welcomeStruts",
    "login.tpl": (
        "TPL:login\n"
        '<div style="color:red">{{errors}}</div>\n'
        '{{form action="/Login"}}'
        '{{select property="choice"}}'
        '{{option value="employee"}}Employee{{/option}}'
        '{{option value="citizen"}}Citizen{{/option}}'
        '{{option value="hospital"}}Hospital{{/option}}'
        '{{option value="school"}}School{{/option}}'
        "{{/select}}"
        '{{text property="userName" size="15"}}'
        '{{password property="password" size="15"}}'
        '{{submit value="Login"}}'
        "{{/form}}"
    ),
    "register.tpl": (
        "TPL:register {{errors}}"
        '{{form action="/Register"}}'
        '{{text property="emailid" size="25"}}'
        '{{password property="password" size="15"}}'
        '{{submit value="Register"}}'
        "{{/form}}"
    ),
    "citizen_home.tpl": 'TPL:citizen_home {{session attr="sessUserName"}}',
    "employee_home.tpl": 'TPL:employee_home {{session attr="sessUserName"}}',
    "hospital_home.tpl": 'TPL:hospital_home {{session attr="sessUserName"}}',
    "school_home.tpl": 'TPL:school_home {{session attr="sessUserName"}}',
    "admin_home.tpl": 'TPL:admin_home {{session attr="sessUserName"}}',
    "failure.tpl": "TPL:failure",
    "registered.tpl": 'TPL:registered <a href="/Login.do">Sign in</a>',
    "duplicate.tpl": "TPL:duplicate",
}


def copy_shipped_assets(tmp_path):
    """Copy the repository's demo asset tree into a scratch directory."""
    for name in ("config", "data", "templates"):
        shutil.copytree(REPO_ROOT / name, tmp_path / name)
    return tmp_path / "config", tmp_path / "data", tmp_path / "templates"


def make_demo_tree(tmp_path):
    """Shipped config and data plus minimal inline templates."""
    shutil.copytree(SHIPPED_CONFIG_DIR, tmp_path / "config")
    shutil.copytree(SHIPPED_DATA_DIR, tmp_path / "data")
    template_dir = tmp_path / "templates"
    template_dir.mkdir()
    for name, text in MINIMAL_DEMO_TEMPLATES.items():
        (template_dir / name).write_text(text, encoding="utf-8")
    (template_dir / "static").mkdir()
    (template_dir / "static" / "style.css").write_text("body{}\n", encoding="utf-8")
    return tmp_path / "config", tmp_path / "data", template_dir


# ---------------------------------------------------------------------------
# Deliberately broken asset trees. Each breaker mutates a clean tree and names
# the substring an error finding must contain.


def _edit(path: Path, old: str, new: str):
    path.write_text(path.read_text(encoding="utf-8").replace(old, new), encoding="utf-8")


def _break_dangling_forward(config_dir, data_dir, template_dir):
    _edit(config_dir / "struts-config.xml", 'path="/citizen_home.jsp"', 'path="/Nowhere.do"')
    return "/Nowhere.do"


def _break_duplicate_path(config_dir, data_dir, template_dir):
    _edit(
        config_dir / "struts-config.xml",
        '<action path="/Welcome" forward="/welcomeStruts.jsp"/>',
        '<action path="/Welcome" forward="/welcomeStruts.jsp"/>'
        '<action path="/Welcome" forward="/welcomeStruts.jsp"/>',
    )
    return "/Welcome"


def _break_missing_form_bean(config_dir, data_dir, template_dir):
    _edit(config_dir / "struts-config.xml", 'name="LoginForm" path="/Login"', 'name="GhostForm" path="/Login"')
    return "GhostForm"


def _break_missing_message_key(config_dir, data_dir, template_dir):
    _edit(
        config_dir / "ApplicationResource.properties",
        "error.userName.required = User Name is required.\n",
        "",
    )
    return "error.userName.required"


def _break_missing_template(config_dir, data_dir, template_dir):
    (template_dir / "failure.tpl").unlink()
    return "failure.tpl"


def _break_ragged_csv(config_dir, data_dir, template_dir):
    with open(data_dir / "citizen_signup_details.csv", "a", encoding="utf-8") as fh:
        fh.write("only-one-field\n")
    return "citizen_signup_details"


def _break_malformed_xml(config_dir, data_dir, template_dir):
    path = config_dir / "struts-config.xml"
    path.write_text(path.read_text(encoding="utf-8")[:-30], encoding="utf-8")
    return "struts-config.xml"


def _break_unknown_element(config_dir, data_dir, template_dir):
    _edit(config_dir / "struts-config.xml", "<form-beans>", "<plugins/><form-beans>")
    return "plugins"


def _break_empty_csv(config_dir, data_dir, template_dir):
    (data_dir / "admin_signup_details.csv").write_text("", encoding="utf-8")
    return "admin_signup_details"


def _break_duplicate_properties_key(config_dir, data_dir, template_dir):
    with open(config_dir / "ApplicationResource.properties", "a", encoding="utf-8") as fh:
        fh.write("error.password.required = Twice.\n")
    return "error.password.required"


def _break_missing_table(config_dir, data_dir, template_dir):
    (data_dir / "school_signup_details.csv").unlink()
    return "school_signup_details"


def _break_unregistered_executor(config_dir, data_dir, template_dir):
    _edit(config_dir / "struts-config.xml", 'type="com.pawan.RegisterAction"', 'type="com.pawan.UnknownAction"')
    return "com.pawan.UnknownAction"


def _break_validated_without_input(config_dir, data_dir, template_dir):
    _edit(config_dir / "struts-config.xml", 'input="/login.jsp" ', "")
    return "LoginForm"


def _break_template_syntax(config_dir, data_dir, template_dir):
    (template_dir / "welcome.tpl").write_text("{{bogus}}", encoding="utf-8")
    return "welcome.tpl"


def _break_missing_column(config_dir, data_dir, template_dir):
    path = data_dir / "hospital_signup_details.csv"
    path.write_text("user,pass\nx,y\n", encoding="utf-8")
    return "emailid"


BREAKERS = {
    "dangling_forward": _break_dangling_forward,
    "duplicate_path": _break_duplicate_path,
    "missing_form_bean": _break_missing_form_bean,
    "missing_message_key": _break_missing_message_key,
    "missing_template": _break_missing_template,
    "ragged_csv": _break_ragged_csv,
    "malformed_xml": _break_malformed_xml,
    "unknown_element": _break_unknown_element,
    "empty_csv": _break_empty_csv,
    "duplicate_properties_key": _break_duplicate_properties_key,
    "missing_table": _break_missing_table,
    "unregistered_executor": _break_unregistered_executor,
    "validated_without_input": _break_validated_without_input,
    "template_syntax": _break_template_syntax,
    "missing_column": _break_missing_column,
}


# ---------------------------------------------------------------------------
# Shared strategies for the round-trip property tests.

from strutskit.persistence import Table  # noqa: E402

KEYS = st.from_regex(r"[A-Za-z][A-Za-z0-9._]{0,20}", fullmatch=True)
# A line-oriented format cannot carry any character str.splitlines() breaks on.
LINE_BREAKS = "\n\r\x0b\x0c\x1c\x1d\x1e\x85  "
VALUES = st.text(
    alphabet=st.characters(blacklist_characters=LINE_BREAKS, blacklist_categories=("Cs",)),
    max_size=30,
).map(str.strip)

TABLE_NAMES = st.from_regex(r"[A-Za-z][A-Za-z0-9_]{0,10}", fullmatch=True)
# NUL cannot live in a CSV text file; everything else, including commas,
# quotes, and newlines, must survive the round trip.
CSV_FIELDS = st.text(
    alphabet=st.characters(blacklist_characters="\x00", blacklist_categories=("Cs",)),
    max_size=20,
)


@st.composite
def tables_strategy(draw) -> Table:
    columns = tuple(draw(st.lists(TABLE_NAMES, unique=True, min_size=1, max_size=3)))
    n = len(columns)
    rows = tuple(
        tuple(draw(st.lists(CSV_FIELDS, min_size=n, max_size=n)))
        for _ in range(draw(st.integers(0, 4)))
    )
    return Table(name=draw(TABLE_NAMES), columns=columns, rows=rows)
