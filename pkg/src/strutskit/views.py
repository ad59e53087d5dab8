"""Server-side template renderer.

Templates are HTML with a small tag vocabulary embedded as
``{{tag attr="value"}}`` markers: form, select/option, text, password,
submit, errors, and session. Literal text passes through byte-exact;
every value originating from form state or the session is HTML-escaped on
the way out, and password inputs never echo a value at all.
"""

import html
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Union

from strutskit.config import ACTION_SUFFIX
from strutskit.errors import StrutskitError
from strutskit.forms import ActionErrors, FormState
from strutskit.resources import MessageBundle, get_message


class TemplateError(StrutskitError):
    def __init__(self, template_name: str, position: str, message: str):
        super().__init__(f"{template_name}:{position}: {message}")
        self.template_name = template_name
        self.position = position
        self.reason = message


class UnknownTag(TemplateError):
    pass


class UnclosedTag(TemplateError):
    pass


class MalformedAttribute(TemplateError):
    pass


class MisplacedTag(TemplateError):
    pass


class MissingFormState(StrutskitError):
    """A form-bound tag was rendered without a form in context."""


@dataclass(frozen=True)
class LiteralText:
    text: str


@dataclass(frozen=True)
class TagNode:
    kind: str
    attrs: dict[str, str]
    children: tuple["Node", ...] = ()


Node = Union[LiteralText, TagNode]


@dataclass(frozen=True)
class Template:
    name: str
    nodes: tuple[Node, ...]


@dataclass(frozen=True)
class RenderContext:
    form: FormState | None = None
    errors: ActionErrors = field(default_factory=ActionErrors)
    bundle: MessageBundle = field(default_factory=lambda: MessageBundle(entries={}))
    session_attrs: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.form is None and self.errors:
            raise ValueError("errors require a form in context")


#: kind -> (required attrs, optional attrs, has body)
_TAGS: dict[str, tuple[frozenset[str], frozenset[str], bool]] = {
    "form": (frozenset({"action"}), frozenset({"name"}), True),
    "select": (frozenset({"property"}), frozenset({"name"}), True),
    "option": (frozenset({"value"}), frozenset(), True),
    "text": (frozenset({"property"}), frozenset({"size", "name"}), False),
    "password": (frozenset({"property"}), frozenset({"size", "name"}), False),
    "submit": (frozenset({"value"}), frozenset(), False),
    "errors": (frozenset(), frozenset(), False),
    "session": (frozenset({"attr"}), frozenset(), False),
}

_TAG_RE = re.compile(
    r"\{\{\s*(?P<close>/?)(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"(?P<attrs>(?:\s+[A-Za-z][A-Za-z0-9_]*=\"[^\"]*\")*)\s*\}\}"
)
_NAME_RE = re.compile(r"\{\{\s*/?([A-Za-z][A-Za-z0-9_]*)")
_ATTR_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)=\"([^\"]*)\"")


def _line_of(text: str, index: int) -> str:
    return str(text.count("\n", 0, index) + 1)


def _parse_attrs(
    name: str, raw: str, template_name: str, position: str
) -> dict[str, str]:
    attrs: dict[str, str] = {}
    for key, value in _ATTR_RE.findall(raw):
        if key in attrs:
            raise MalformedAttribute(
                template_name, position, f"duplicate attribute '{key}' on {{{{{name}}}}}"
            )
        attrs[key] = value
    required, optional, _ = _TAGS[name]
    for key in attrs:
        if key not in required and key not in optional:
            raise MalformedAttribute(
                template_name, position, f"unknown attribute '{key}' on {{{{{name}}}}}"
            )
    for key in required:
        if key not in attrs:
            raise MalformedAttribute(
                template_name, position, f"missing attribute '{key}' on {{{{{name}}}}}"
            )
        if not attrs[key]:
            raise MalformedAttribute(
                template_name, position, f"empty attribute '{key}' on {{{{{name}}}}}"
            )
    return attrs


def compile_template(name: str, text: str) -> Template:
    """Parse template text into a node tree; literal text is kept byte-exact."""
    # Stack of open containers: (kind, attrs, children, position).
    root_children: list[Node] = []
    stack: list[tuple[str, dict[str, str], list[Node], str]] = []

    def children_sink() -> list[Node]:
        return stack[-1][2] if stack else root_children

    pos = 0
    while True:
        start = text.find("{{", pos)
        if start == -1:
            if pos < len(text):
                children_sink().append(LiteralText(text[pos:]))
            break
        if start > pos:
            children_sink().append(LiteralText(text[pos:start]))
        line = _line_of(text, start)
        match = _TAG_RE.match(text, start)
        if not match:
            if text.find("}}", start) == -1:
                raise UnclosedTag(name, line, "unterminated tag marker")
            name_match = _NAME_RE.match(text, start)
            if not name_match or name_match.group(1) not in _TAGS:
                raise UnknownTag(name, line, "unrecognized tag")
            raise MalformedAttribute(
                name, line, f"malformed attributes on {{{{{name_match.group(1)}}}}}"
            )
        kind = match.group("name")
        if kind not in _TAGS:
            raise UnknownTag(name, line, f"unknown tag '{kind}'")
        closing = bool(match.group("close"))
        raw_attrs = match.group("attrs")

        if closing:
            if raw_attrs.strip():
                raise MalformedAttribute(
                    name, line, f"close tag {{{{/{kind}}}}} takes no attributes"
                )
            if not stack:
                raise MisplacedTag(name, line, f"{{{{/{kind}}}}} has no open tag")
            open_kind, open_attrs, children, _ = stack.pop()
            if open_kind != kind:
                raise UnclosedTag(
                    name, line, f"expected {{{{/{open_kind}}}}}, got {{{{/{kind}}}}}"
                )
            if open_kind == "option" and any(
                isinstance(c, TagNode) for c in children
            ):
                raise MisplacedTag(name, line, "option labels must be literal text")
            children_sink().append(TagNode(open_kind, open_attrs, tuple(children)))
        else:
            attrs = _parse_attrs(kind, raw_attrs, name, line)
            _, _, has_body = _TAGS[kind]
            open_kinds = [frame[0] for frame in stack]
            if kind == "form" and "form" in open_kinds:
                raise MisplacedTag(name, line, "form tags may not nest")
            if kind == "option" and (not stack or stack[-1][0] != "select"):
                raise MisplacedTag(name, line, "option is only valid inside select")
            if stack and stack[-1][0] == "select" and kind != "option":
                raise MisplacedTag(name, line, f"select may not contain {{{{{kind}}}}}")
            if stack and stack[-1][0] == "option":
                raise MisplacedTag(name, line, "option labels must be literal text")
            if has_body:
                stack.append((kind, attrs, [], line))
            else:
                children_sink().append(TagNode(kind, attrs))
        pos = match.end() if match else pos

    if stack:
        kind, _, _, line = stack[-1]
        raise UnclosedTag(name, line, f"{{{{{kind}}}}} was never closed")
    return Template(name=name, nodes=tuple(root_children))


def load_templates(template_dir) -> dict[str, Template]:
    """Compile every *.tpl file directly under the directory, keyed by filename."""
    templates = {}
    for path in sorted(Path(template_dir).glob("*.tpl")):
        templates[path.name] = compile_template(path.name, path.read_text(encoding="utf-8"))
    return templates


def _attr(value: str) -> str:
    return html.escape(value, quote=True)


def _text(value: str) -> str:
    return html.escape(value, quote=False)


def _form_value(ctx: RenderContext, prop: str, template_name: str) -> str:
    if ctx.form is None:
        raise MissingFormState(
            f"{template_name}: tag bound to '{prop}' rendered without form state"
        )
    return ctx.form.get(prop)


def _render_node(node: Node, ctx: RenderContext, template_name: str) -> str:
    if isinstance(node, LiteralText):
        return node.text
    kind, attrs = node.kind, node.attrs
    if kind == "form":
        action = attrs["action"]
        if not action.endswith(ACTION_SUFFIX):
            action += ACTION_SUFFIX
        inner = "".join(_render_node(c, ctx, template_name) for c in node.children)
        return f'<form method="post" action="{_attr(action)}">{inner}</form>'
    if kind == "select":
        current = _form_value(ctx, attrs["property"], template_name)
        parts = [f'<select name="{_attr(attrs["property"])}">']
        for child in node.children:
            if isinstance(child, LiteralText):
                parts.append(child.text)
            else:
                value = child.attrs["value"]
                label = "".join(
                    c.text for c in child.children if isinstance(c, LiteralText)
                )
                selected = " selected" if value == current else ""
                parts.append(f'<option value="{_attr(value)}"{selected}>{label}</option>')
        parts.append("</select>")
        return "".join(parts)
    if kind in ("text", "password"):
        prop = attrs["property"]
        value = _form_value(ctx, prop, template_name)
        if kind == "password":
            value = ""  # passwords are never echoed back
        size = f' size="{_attr(attrs["size"])}"' if "size" in attrs else ""
        return f'<input type="{kind}" name="{_attr(prop)}"{size} value="{_attr(value)}"/>'
    if kind == "submit":
        return f'<input type="submit" value="{_attr(attrs["value"])}"/>'
    if kind == "errors":
        spans = []
        for _prop, key in ctx.errors:
            spans.append(f'<span class="error">{_text(get_message(ctx.bundle, key))}</span>')
        return "".join(spans)
    if kind == "session":
        return _text(ctx.session_attrs.get(attrs["attr"], ""))
    raise AssertionError(f"unreachable tag kind {kind}")


def render(template: Template, ctx: RenderContext) -> str:
    """Expand a compiled template against the context; pure and reentrant."""
    return "".join(_render_node(node, ctx, template.name) for node in template.nodes)
