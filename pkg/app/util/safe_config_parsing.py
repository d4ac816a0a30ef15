import re
from typing import Dict

KEY_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ConfigError(ValueError):
    """A configuration problem; the message begins with the offending key."""

    def __init__(self, key: str, reason: str):
        message = reason if reason.startswith(key) else f"{key}: {reason}"
        super().__init__(message)
        self.key = key
        self.reason = reason


def safe_key_values(text: str) -> Dict[str, str]:
    """Parses flat `key = value` lines; `#` starts a comment, blank lines are skipped."""
    if text.startswith("\ufeff"):
        text = text[1:]
    entries: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not KEY_PATTERN.match(key):
            raise ConfigError(f"line {number}", f"expected 'key = value', got '{raw.strip()}'")
        if key in entries:
            raise ConfigError(key, f"duplicate key on line {number}")
        entries[key] = value
    return entries
