"""Properties-format message bundles.

One bundle maps message keys to user-visible text so that validators and
templates never hard-code wording. The grammar is deliberately small:
``key = value`` lines, ``#``/``!`` comments, no continuations, no escapes.
"""

import logging
from dataclasses import dataclass, field

from strutskit.errors import StrutskitError

log = logging.getLogger(__name__)


class BundleError(StrutskitError):
    """Malformed properties text."""

    def __init__(self, source_name: str, line_no: int, message: str):
        super().__init__(f"{source_name}:{line_no}: {message}")
        self.source_name = source_name
        self.line_no = line_no


class DuplicateKey(BundleError):
    pass


class MissingSeparator(BundleError):
    pass


@dataclass(frozen=True)
class MessageBundle:
    entries: dict[str, str]
    source_name: str = field(default="<string>", compare=False)


def parse_properties(text: str, source_name: str = "<string>") -> MessageBundle:
    """Parse properties text into a bundle.

    Keys are trimmed; values are taken after the first ``=`` and trimmed of
    surrounding whitespace, interior whitespace preserved. Duplicate keys are
    an error rather than last-wins.
    """
    entries: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(("#", "!")):
            continue
        if "=" not in line:
            raise MissingSeparator(source_name, line_no, "no '=' separator")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise MissingSeparator(source_name, line_no, "empty key before '='")
        if key in entries:
            raise DuplicateKey(source_name, line_no, f"duplicate key '{key}'")
        entries[key] = value.strip()
    return MessageBundle(entries=entries, source_name=source_name)


def get_message(bundle: MessageBundle, key: str) -> str:
    """Resolve a message key; missing keys degrade to ``???key???``."""
    try:
        return bundle.entries[key]
    except KeyError:
        log.warning("message key '%s' not found in %s", key, bundle.source_name)
        return f"???{key}???"


def serialize_properties(bundle: MessageBundle) -> str:
    return "".join(f"{key} = {value}\n" for key, value in bundle.entries.items())
