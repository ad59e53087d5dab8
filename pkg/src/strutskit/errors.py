"""Common exception base for the framework."""


class StrutskitError(Exception):
    """Base class for every error raised by strutskit itself."""
