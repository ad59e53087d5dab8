"""strutskit: an XML-configured MVC web micro-framework.

Routing, form binding and validation, message bundles, tag-based server-side
templates, cookie sessions, and a CSV-backed table store, plus the
"Records Collection for India" demo portal built on top of it all.
"""

from strutskit.errors import StrutskitError

__version__ = "0.1.0"

__all__ = ["StrutskitError", "__version__"]
