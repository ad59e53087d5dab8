"""Form state population and the validation pipeline.

Request parameters are bundled into a FormState whose shape is fixed by the
declared property schema; validators then emit ActionErrors keyed by message
keys, resolved against the bundle only at render time.
"""

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

from strutskit.config import ActionMapping, FormBeanDef


@dataclass(frozen=True)
class FormState:
    bean_name: str
    values: dict[str, str]
    schema: tuple[str, ...]

    def get(self, prop: str) -> str:
        return self.values.get(prop, "")


@dataclass
class ActionErrors:
    """Ordered (property, message-key) pairs; empty means validation passed."""

    items: list[tuple[str, str]] = field(default_factory=list)

    def add(self, prop: str, message_key: str):
        self.items.append((prop, message_key))

    def __bool__(self) -> bool:
        return bool(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


Validator = Callable[[FormState], ActionErrors]


@dataclass(frozen=True)
class ValidatorSpec:
    """A validator plus the message keys it can emit (checkable at startup)."""

    run: Validator
    message_keys: frozenset[str]


def populate(bean_def: FormBeanDef, params: Mapping[str, str]) -> FormState:
    """Bundle request parameters into a form state.

    Each declared property takes the submitted value if present, else its
    declared default, else the empty string. Undeclared parameters never make
    it into the form.
    """
    values = {}
    for prop in bean_def.properties:
        if prop.name in params:
            values[prop.name] = params[prop.name]
        else:
            values[prop.name] = prop.default
    return FormState(
        bean_name=bean_def.name,
        values=values,
        schema=tuple(bean_def.property_names()),
    )


def validate_login(form: FormState) -> ActionErrors:
    """Login form checks: user name and password must be non-empty.

    Both checks always run, so a fully empty submission reports both fields,
    user name first. Emptiness is length-based; whitespace counts as content.
    """
    errors = ActionErrors()
    if len(form.get("userName")) < 1:
        errors.add("userName", "error.userName.required")
    if len(form.get("password")) < 1:
        errors.add("password", "error.password.required")
    return errors


def run_validator(
    validators: Mapping[str, ValidatorSpec],
    mapping: ActionMapping,
    form: FormState,
) -> ActionErrors:
    """Run the validator registered for the mapping's form bean.

    A bean with no registered validator passes trivially.
    """
    spec = validators.get(form.bean_name)
    if spec is None:
        return ActionErrors()
    return spec.run(form)
