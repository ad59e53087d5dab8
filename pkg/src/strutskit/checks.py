"""Startup cross-checks over an asset tree, shared by assembly and the CLI.

Every check emits findings instead of raising, so one run reports all
problems at once. Errors here are exactly the conditions that abort startup;
warnings are advisory only.
"""

from dataclasses import dataclass
from pathlib import Path

from strutskit.config import (
    ConfigError,
    FrameworkConfig,
    DeploymentDescriptor,
    UnknownForward,
    parse_deployment_descriptor,
    parse_framework_config,
    resolve_forward,
)
from strutskit.http_kernel import view_path_to_template
from strutskit.persistence import PersistenceError, load_table
from strutskit.resources import BundleError, MessageBundle, parse_properties
from strutskit.views import TemplateError, compile_template

ERROR = "ERROR"
WARNING = "WARNING"

CONFIG_FILE = "struts-config.xml"
DESCRIPTOR_FILE = "web.xml"
MESSAGES_FILE = "ApplicationResource.properties"


@dataclass(frozen=True)
class Finding:
    severity: str
    file: str
    context: str
    message: str

    def format(self) -> str:
        return f"{self.severity} {self.file}:{self.context} {self.message}"


def _error(file: str, context: str, message: str) -> Finding:
    return Finding(ERROR, file, context, message)


def _warning(file: str, context: str, message: str) -> Finding:
    return Finding(WARNING, file, context, message)


def _check_directories(config_dir: Path, data_dir: Path, template_dir: Path) -> list[Finding]:
    findings = []
    for label, directory in (
        ("config", config_dir),
        ("data", data_dir),
        ("templates", template_dir),
    ):
        if not directory.is_dir():
            findings.append(
                _error(str(directory), "missing", f"{label} directory not found")
            )
    return findings


def _parse_config(config_dir: Path, findings: list[Finding]) -> FrameworkConfig | None:
    path = config_dir / CONFIG_FILE
    if not path.is_file():
        findings.append(_error(CONFIG_FILE, "missing", "configuration file not found"))
        return None
    try:
        return parse_framework_config(path.read_text(encoding="utf-8"), CONFIG_FILE)
    except ConfigError as exc:
        findings.append(_error(exc.source_name, exc.context, exc.reason))
        return None


def _parse_descriptor(config_dir: Path, findings: list[Finding]) -> DeploymentDescriptor | None:
    path = config_dir / DESCRIPTOR_FILE
    if not path.is_file():
        findings.append(_error(DESCRIPTOR_FILE, "missing", "deployment descriptor not found"))
        return None
    try:
        return parse_deployment_descriptor(path.read_text(encoding="utf-8"), DESCRIPTOR_FILE)
    except ConfigError as exc:
        findings.append(_error(exc.source_name, exc.context, exc.reason))
        return None


def _parse_messages(config_dir: Path, findings: list[Finding]) -> MessageBundle | None:
    path = config_dir / MESSAGES_FILE
    if not path.is_file():
        findings.append(_error(MESSAGES_FILE, "missing", "message bundle not found"))
        return None
    try:
        return parse_properties(path.read_text(encoding="utf-8"), MESSAGES_FILE)
    except BundleError as exc:
        findings.append(_error(exc.source_name, str(exc.line_no), str(exc)))
        return None


def _check_templates(template_dir: Path, findings: list[Finding]) -> set[str]:
    names = set()
    if not template_dir.is_dir():
        return names
    for path in sorted(template_dir.glob("*.tpl")):
        names.add(path.name)
        try:
            compile_template(path.name, path.read_text(encoding="utf-8"))
        except TemplateError as exc:
            findings.append(_error(exc.template_name, exc.position, exc.reason))
    return names


def _check_tables(data_dir: Path, required_tables, findings: list[Finding]) -> None:
    if not data_dir.is_dir():
        return
    loaded = {}
    for path in sorted(data_dir.glob("*.csv")):
        try:
            loaded[path.stem] = load_table(data_dir, path.stem)
        except PersistenceError as exc:
            findings.append(_error(path.name, "parse", str(exc)))
    for name in required_tables:
        if not (data_dir / f"{name}.csv").is_file():
            findings.append(
                _error(f"{name}.csv", "missing", f"required table '{name}' not found")
            )
            continue
        table = loaded.get(name)
        if table is None:
            continue  # already reported as a parse failure
        for column in ("emailid", "password"):
            if column not in table.columns:
                findings.append(
                    _error(f"{name}.csv", "header", f"required column '{column}' missing")
                )


def _check_view_targets(
    config: FrameworkConfig,
    descriptor: DeploymentDescriptor | None,
    template_names: set[str],
    findings: list[Finding],
) -> set[str]:
    referenced = set()

    def require_template(view_path: str, where: str):
        name = view_path_to_template(view_path)
        referenced.add(name)
        if name not in template_names:
            findings.append(
                _error(CONFIG_FILE, where, f"template '{name}' not found for view '{view_path}'")
            )

    if descriptor is not None:
        for welcome in descriptor.welcome_files:
            name = view_path_to_template("/" + welcome)
            referenced.add(name)
            if name not in template_names:
                findings.append(
                    _error(
                        DESCRIPTOR_FILE,
                        "<welcome-file>",
                        f"template '{name}' not found for welcome file '{welcome}'",
                    )
                )
    for mapping in config.action_mappings:
        context = f"action '{mapping.path}'"
        if mapping.input_page is not None:
            require_template(mapping.input_page, context)
        if mapping.direct_forward is not None and not mapping.direct_forward.endswith(".do"):
            require_template(mapping.direct_forward, context)
        for fwd in mapping.local_forwards:
            if not fwd.is_action_path():
                require_template(fwd.path, f"{context} forward '{fwd.name}'")
    for fwd in config.global_forwards:
        if not fwd.is_action_path():
            require_template(fwd.path, f"global forward '{fwd.name}'")
    return referenced


def _check_registries(
    config: FrameworkConfig,
    bundle: MessageBundle | None,
    executors,
    validators,
    findings: list[Finding],
) -> None:
    for mapping in config.action_mappings:
        context = f"action '{mapping.path}'"
        if mapping.action_id is not None:
            executor = executors.get(mapping.action_id)
            if executor is None:
                findings.append(
                    _error(
                        CONFIG_FILE,
                        context,
                        f"no executor registered for action id '{mapping.action_id}'",
                    )
                )
            else:
                for name in sorted(executor.forwards):
                    try:
                        resolve_forward(config, mapping, name)
                    except UnknownForward:
                        findings.append(
                            _error(
                                CONFIG_FILE,
                                context,
                                f"executor forward '{name}' does not resolve",
                            )
                        )
        if mapping.form_bean is not None and mapping.form_bean in validators:
            bean = config.form_bean(mapping.form_bean)
            if mapping.input_page is None:
                findings.append(
                    _error(
                        CONFIG_FILE,
                        context,
                        f"validated form bean '{mapping.form_bean}' requires an input page",
                    )
                )
            if bean is not None and not bean.properties:
                findings.append(
                    _error(
                        CONFIG_FILE,
                        context,
                        f"validated form bean '{mapping.form_bean}' declares no properties",
                    )
                )

    if bundle is not None:
        for bean_name, spec in sorted(validators.items()):
            for key in sorted(spec.message_keys):
                if key not in bundle.entries:
                    findings.append(
                        _error(
                            MESSAGES_FILE,
                            bean_name,
                            f"validator message key '{key}' missing from bundle",
                        )
                    )


def run_checks(
    config_dir,
    data_dir,
    template_dir,
    *,
    executors,
    validators,
    required_tables=(),
) -> list[Finding]:
    """Run every startup check; returns findings, errors first preserved in
    discovery order. An empty error set means assembly cannot fail."""
    config_dir = Path(config_dir)
    data_dir = Path(data_dir)
    template_dir = Path(template_dir)

    findings = _check_directories(config_dir, data_dir, template_dir)
    template_names = _check_templates(template_dir, findings)
    _check_tables(data_dir, required_tables, findings)

    config = descriptor = bundle = None
    if config_dir.is_dir():
        config = _parse_config(config_dir, findings)
        descriptor = _parse_descriptor(config_dir, findings)
        bundle = _parse_messages(config_dir, findings)

    if config is not None:
        referenced = _check_view_targets(config, descriptor, template_names, findings)
        _check_registries(config, bundle, executors, validators, findings)
        for name in sorted(template_names - referenced):
            findings.append(
                _warning(name, "unreferenced", "template is not referenced by any view path")
            )
        used_beans = {m.form_bean for m in config.action_mappings if m.form_bean}
        for bean in config.form_beans:
            if bean.name not in used_beans:
                findings.append(
                    _warning(
                        CONFIG_FILE,
                        f"form-bean '{bean.name}'",
                        "declared but never referenced by an action",
                    )
                )
    return findings
