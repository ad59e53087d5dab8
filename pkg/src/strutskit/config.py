"""Configuration artifacts: framework routing config and deployment descriptor.

Both documents are parsed strictly: unknown elements or attributes are errors,
not warnings, because silently ignored misconfiguration is the classic failure
mode of XML-routed frameworks. Parsed models are immutable and safe to share
across concurrent request handlers.
"""

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum

from strutskit.errors import StrutskitError

ACTION_SUFFIX = ".do"


class ConfigError(StrutskitError):
    """Invalid configuration document."""

    def __init__(self, source_name: str, context: str, message: str):
        super().__init__(f"{source_name}:{context}: {message}")
        self.source_name = source_name
        self.context = context
        self.reason = message


class MalformedXml(ConfigError):
    pass


class SchemaViolation(ConfigError):
    pass


class BrokenReference(ConfigError):
    pass


class DuplicatePath(ConfigError):
    pass


class ActionNotFound(StrutskitError):
    """No action mapping matches the request path."""


class UnknownForward(StrutskitError):
    """Neither the mapping nor the global scope declares the forward name."""


class Scope(Enum):
    REQUEST = "request"
    SESSION = "session"


@dataclass(frozen=True)
class DeploymentDescriptor:
    welcome_files: tuple[str, ...]


@dataclass(frozen=True)
class FormProperty:
    name: str
    default: str = ""


@dataclass(frozen=True)
class FormBeanDef:
    name: str
    type_id: str
    properties: tuple[FormProperty, ...] = ()

    def property_names(self) -> list[str]:
        return [p.name for p in self.properties]


@dataclass(frozen=True)
class Forward:
    name: str
    path: str

    def is_action_path(self) -> bool:
        return self.path.endswith(ACTION_SUFFIX)


@dataclass(frozen=True)
class ActionMapping:
    path: str
    form_bean: str | None = None
    input_page: str | None = None
    scope: Scope = Scope.REQUEST
    action_id: str | None = None
    local_forwards: tuple[Forward, ...] = ()
    direct_forward: str | None = None

    def local_forward(self, name: str) -> Forward | None:
        for fwd in self.local_forwards:
            if fwd.name == name:
                return fwd
        return None


@dataclass(frozen=True)
class FrameworkConfig:
    form_beans: tuple[FormBeanDef, ...] = ()
    global_forwards: tuple[Forward, ...] = ()
    action_mappings: tuple[ActionMapping, ...] = ()

    def form_bean(self, name: str) -> FormBeanDef | None:
        for bean in self.form_beans:
            if bean.name == name:
                return bean
        return None

    def mapping_for(self, path: str) -> ActionMapping | None:
        for mapping in self.action_mappings:
            if mapping.path == path:
                return mapping
        return None

    def global_forward(self, name: str) -> Forward | None:
        for fwd in self.global_forwards:
            if fwd.name == name:
                return fwd
        return None


def normalize_action_path(path: str) -> str:
    """Strip the trailing action suffix; bare and suffixed forms are equivalent."""
    if path.endswith(ACTION_SUFFIX):
        return path[: -len(ACTION_SUFFIX)]
    return path


# ---------------------------------------------------------------------------
# Parsing


def _parse_root(text: str, source_name: str) -> ET.Element:
    # No DTDs: nothing here needs one, and entity definitions are the classic
    # expansion attack surface. The five built-in entities still work.
    if "<!DOCTYPE" in text:
        raise SchemaViolation(
            source_name, "document", "document type declarations are not allowed"
        )
    try:
        return ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedXml(source_name, "document", str(exc)) from None


def _require_no_text(elem: ET.Element, source_name: str):
    if (elem.text or "").strip() or (elem.tail or "").strip():
        raise SchemaViolation(
            source_name, f"<{elem.tag}>", "unexpected text content"
        )


def _attrs(
    elem: ET.Element,
    source_name: str,
    required: tuple[str, ...],
    optional: tuple[str, ...] = (),
) -> dict[str, str]:
    for key in elem.attrib:
        if key not in required and key not in optional:
            raise SchemaViolation(
                source_name, f"<{elem.tag}>", f"unknown attribute '{key}'"
            )
    for key in required:
        if key not in elem.attrib:
            raise SchemaViolation(
                source_name, f"<{elem.tag}>", f"missing required attribute '{key}'"
            )
    return dict(elem.attrib)


def _parse_forward(elem: ET.Element, source_name: str, context: str) -> Forward:
    attrs = _attrs(elem, source_name, required=("name", "path"))
    _require_no_text(elem, source_name)
    if len(elem):
        raise SchemaViolation(source_name, context, "<forward> takes no children")
    if not attrs["name"] or not attrs["path"]:
        raise SchemaViolation(source_name, context, "forward name and path must be non-empty")
    return Forward(name=attrs["name"], path=attrs["path"])


def _parse_form_bean(elem: ET.Element, source_name: str) -> FormBeanDef:
    attrs = _attrs(elem, source_name, required=("name", "type"))
    _require_no_text(elem, source_name)
    properties = []
    seen = set()
    for child in elem:
        if child.tag != "form-property":
            raise SchemaViolation(
                source_name, f"form-bean '{attrs['name']}'", f"unknown element <{child.tag}>"
            )
        p_attrs = _attrs(child, source_name, required=("name",), optional=("default",))
        _require_no_text(child, source_name)
        if p_attrs["name"] in seen:
            raise SchemaViolation(
                source_name,
                f"form-bean '{attrs['name']}'",
                f"duplicate form-property '{p_attrs['name']}'",
            )
        seen.add(p_attrs["name"])
        properties.append(FormProperty(name=p_attrs["name"], default=p_attrs.get("default", "")))
    return FormBeanDef(name=attrs["name"], type_id=attrs["type"], properties=tuple(properties))


def _parse_action(elem: ET.Element, source_name: str) -> ActionMapping:
    attrs = _attrs(
        elem,
        source_name,
        required=("path",),
        optional=("name", "input", "scope", "type", "forward"),
    )
    _require_no_text(elem, source_name)
    raw_path = attrs["path"]
    if not raw_path.startswith("/"):
        raise SchemaViolation(
            source_name, f"action '{raw_path}'", "action path must start with '/'"
        )
    path = normalize_action_path(raw_path)
    context = f"action '{path}'"

    scope_value = attrs.get("scope", "request")
    try:
        scope = Scope(scope_value)
    except ValueError:
        raise SchemaViolation(
            source_name, context, f"scope must be 'request' or 'session', got '{scope_value}'"
        ) from None

    action_id = attrs.get("type")
    direct_forward = attrs.get("forward")
    if (action_id is None) == (direct_forward is None):
        raise SchemaViolation(
            source_name, context, "exactly one of 'type' and 'forward' must be set"
        )

    forwards = []
    names = set()
    for child in elem:
        if child.tag != "forward":
            raise SchemaViolation(source_name, context, f"unknown element <{child.tag}>")
        fwd = _parse_forward(child, source_name, context)
        if fwd.name in names:
            raise SchemaViolation(source_name, context, f"duplicate forward '{fwd.name}'")
        names.add(fwd.name)
        forwards.append(fwd)

    return ActionMapping(
        path=path,
        form_bean=attrs.get("name"),
        input_page=attrs.get("input"),
        scope=scope,
        action_id=action_id,
        local_forwards=tuple(forwards),
        direct_forward=direct_forward,
    )


def parse_framework_config(text: str, source_name: str = "struts-config.xml") -> FrameworkConfig:
    """Parse and fully validate a framework configuration document.

    All cross-references are checked here, at startup time: form-bean names
    used by actions must be declared, action paths must be unique after
    suffix normalization, and every forward target carrying the action suffix
    must name a declared mapping. Later resolution can then never dangle.
    """
    root = _parse_root(text, source_name)
    if root.tag != "struts-config":
        raise SchemaViolation(
            source_name, "document", f"root element must be <struts-config>, got <{root.tag}>"
        )
    _attrs(root, source_name, required=())
    _require_no_text(root, source_name)

    beans: list[FormBeanDef] = []
    global_forwards: list[Forward] = []
    mappings: list[ActionMapping] = []
    seen_containers = set()
    for container in root:
        if container.tag in seen_containers:
            raise SchemaViolation(
                source_name, "document", f"duplicate element <{container.tag}>"
            )
        seen_containers.add(container.tag)
        _attrs(container, source_name, required=())
        _require_no_text(container, source_name)
        if container.tag == "form-beans":
            for child in container:
                if child.tag != "form-bean":
                    raise SchemaViolation(
                        source_name, "<form-beans>", f"unknown element <{child.tag}>"
                    )
                beans.append(_parse_form_bean(child, source_name))
        elif container.tag == "global-exceptions":
            # Accepted for compatibility; exception mappings carry no semantics
            # here, so any content would be silently dead configuration.
            if len(container):
                raise SchemaViolation(
                    source_name, "<global-exceptions>", "element must be empty"
                )
        elif container.tag == "global-forwards":
            for child in container:
                if child.tag != "forward":
                    raise SchemaViolation(
                        source_name, "<global-forwards>", f"unknown element <{child.tag}>"
                    )
                global_forwards.append(_parse_forward(child, source_name, "<global-forwards>"))
        elif container.tag == "action-mappings":
            for child in container:
                if child.tag != "action":
                    raise SchemaViolation(
                        source_name, "<action-mappings>", f"unknown element <{child.tag}>"
                    )
                mappings.append(_parse_action(child, source_name))
        else:
            raise SchemaViolation(
                source_name, "document", f"unknown element <{container.tag}>"
            )

    bean_names = set()
    for bean in beans:
        if bean.name in bean_names:
            raise SchemaViolation(
                source_name, "<form-beans>", f"duplicate form-bean '{bean.name}'"
            )
        bean_names.add(bean.name)

    forward_names = set()
    for fwd in global_forwards:
        if fwd.name in forward_names:
            raise SchemaViolation(
                source_name, "<global-forwards>", f"duplicate forward '{fwd.name}'"
            )
        forward_names.add(fwd.name)

    paths = set()
    for mapping in mappings:
        if mapping.path in paths:
            raise DuplicatePath(
                source_name, f"action '{mapping.path}'", "duplicate action path"
            )
        paths.add(mapping.path)

    config = FrameworkConfig(
        form_beans=tuple(beans),
        global_forwards=tuple(global_forwards),
        action_mappings=tuple(mappings),
    )

    for mapping in config.action_mappings:
        context = f"action '{mapping.path}'"
        if mapping.form_bean is not None and config.form_bean(mapping.form_bean) is None:
            raise BrokenReference(
                source_name, context, f"undeclared form bean '{mapping.form_bean}'"
            )
        targets = [(f"forward '{f.name}'", f.path) for f in mapping.local_forwards]
        if mapping.direct_forward is not None:
            targets.append(("forward attribute", mapping.direct_forward))
        for what, target in targets:
            if target.endswith(ACTION_SUFFIX) and normalize_action_path(target) not in paths:
                raise BrokenReference(
                    source_name, context, f"{what} targets undeclared action '{target}'"
                )
    for fwd in config.global_forwards:
        if fwd.is_action_path() and normalize_action_path(fwd.path) not in paths:
            raise BrokenReference(
                source_name,
                "<global-forwards>",
                f"forward '{fwd.name}' targets undeclared action '{fwd.path}'",
            )

    return config


def parse_deployment_descriptor(text: str, source_name: str = "web.xml") -> DeploymentDescriptor:
    """Parse a deployment descriptor; welcome files keep document order.

    Both a full ``<web-app>`` document and a bare ``<welcome-file-list>``
    root are accepted.
    """
    root = _parse_root(text, source_name)
    if root.tag == "web-app":
        _attrs(root, source_name, required=())
        _require_no_text(root, source_name)
        lists = list(root)
        for child in lists:
            if child.tag != "welcome-file-list":
                raise SchemaViolation(
                    source_name, "<web-app>", f"unknown element <{child.tag}>"
                )
        if len(lists) > 1:
            raise SchemaViolation(
                source_name, "<web-app>", "duplicate <welcome-file-list>"
            )
        wfl = lists[0] if lists else None
    elif root.tag == "welcome-file-list":
        wfl = root
    else:
        raise SchemaViolation(
            source_name,
            "document",
            f"root element must be <web-app> or <welcome-file-list>, got <{root.tag}>",
        )

    files: list[str] = []
    if wfl is not None:
        _attrs(wfl, source_name, required=())
        for child in wfl:
            if child.tag != "welcome-file":
                raise SchemaViolation(
                    source_name, "<welcome-file-list>", f"unknown element <{child.tag}>"
                )
            if len(child):
                raise SchemaViolation(
                    source_name, "<welcome-file>", "element takes no children"
                )
            value = (child.text or "").strip()
            if not value:
                raise SchemaViolation(source_name, "<welcome-file>", "empty welcome file")
            if value.startswith("/") or ".." in value.split("/"):
                raise SchemaViolation(
                    source_name,
                    "<welcome-file>",
                    f"welcome file must be a relative path without '..': '{value}'",
                )
            files.append(value)
    return DeploymentDescriptor(welcome_files=tuple(files))


# ---------------------------------------------------------------------------
# Resolution


def resolve_action(config: FrameworkConfig, request_path: str) -> ActionMapping:
    """Match a request path against the mapping table.

    The action suffix is stripped before the exact match, so "/Login" and
    "/Login.do" land on the same mapping. Pure function of its inputs.
    """
    if not request_path.startswith("/"):
        raise ValueError(f"request path must start with '/': {request_path!r}")
    mapping = config.mapping_for(normalize_action_path(request_path))
    if mapping is None:
        raise ActionNotFound(request_path)
    return mapping


def resolve_forward(config: FrameworkConfig, mapping: ActionMapping, name: str) -> Forward:
    """Resolve a forward name, searching mapping-local forwards before globals."""
    fwd = mapping.local_forward(name)
    if fwd is None:
        fwd = config.global_forward(name)
    if fwd is None:
        raise UnknownForward(f"forward '{name}' undeclared for action '{mapping.path}'")
    return fwd


# ---------------------------------------------------------------------------
# Serialization


def serialize_framework_config(config: FrameworkConfig) -> str:
    """Render a config model back to its document form (round-trip safe)."""
    root = ET.Element("struts-config")
    if config.form_beans:
        beans = ET.SubElement(root, "form-beans")
        for bean in config.form_beans:
            elem = ET.SubElement(beans, "form-bean", name=bean.name, type=bean.type_id)
            for prop in bean.properties:
                attrs = {"name": prop.name}
                if prop.default:
                    attrs["default"] = prop.default
                ET.SubElement(elem, "form-property", attrs)
    if config.global_forwards:
        forwards = ET.SubElement(root, "global-forwards")
        for fwd in config.global_forwards:
            ET.SubElement(forwards, "forward", name=fwd.name, path=fwd.path)
    if config.action_mappings:
        mappings = ET.SubElement(root, "action-mappings")
        for mapping in config.action_mappings:
            attrs = {"path": mapping.path}
            if mapping.form_bean is not None:
                attrs["name"] = mapping.form_bean
            if mapping.input_page is not None:
                attrs["input"] = mapping.input_page
            if mapping.scope is not Scope.REQUEST:
                attrs["scope"] = mapping.scope.value
            if mapping.action_id is not None:
                attrs["type"] = mapping.action_id
            if mapping.direct_forward is not None:
                attrs["forward"] = mapping.direct_forward
            elem = ET.SubElement(mappings, "action", attrs)
            for fwd in mapping.local_forwards:
                ET.SubElement(elem, "forward", name=fwd.name, path=fwd.path)
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"
