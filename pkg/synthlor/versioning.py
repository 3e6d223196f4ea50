import re

from . import ConfigError

# schema version of experiment configs and report files
SCHEMA_VERSION = (1,)


def make_version_int_tuple(version: str) -> tuple:
    """
    Parse a version string into an integer tuple without trailing zeros.

    Ignores all additional qualifiers like "alpha" or "rc".
    """
    m = re.match(r"[0-9.]*", version)
    parts = [int(p) for p in m.group().split(".") if p]
    while parts and parts[-1] == 0:
        parts.pop()
    return tuple(parts)


def schema_version(value, where="version") -> tuple:
    """
    Parse and check the "version" field of a config or report file.

    Accepts an integer or a version string. Raises ConfigError for
    missing, malformed or unsupported versions.
    """
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ConfigError("expected an integer or a version string", where)
    version = make_version_int_tuple(str(value))
    if not version:
        raise ConfigError("malformed version %r" % (value,), where)
    if version[0] != SCHEMA_VERSION[0] or version > SCHEMA_VERSION:
        raise ConfigError("unsupported version %r (supported: %s)" % (
            value, ".".join(map(str, SCHEMA_VERSION))), where)
    return version
