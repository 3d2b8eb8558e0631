"""Server configuration: key=value file, one entry per line.

Recognized keys (see README for a sample):

    host            bind address            default 127.0.0.1
    port            bind port               default 8765
    index_dir       saved index directory   required
    task_file       judge task file         optional
    thumb_root      keyframe path root      default "." (cwd-relative)
    history_cap     history entries/session default 256
    result_limit    default query limit     default 1000

Lines starting with '#' and blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .history import DEFAULT_CAP
from .search import DEFAULT_LIMIT

_INT_KEYS = {"port", "history_cap", "result_limit"}
_KEYS = {"host", "port", "index_dir", "task_file", "thumb_root", "history_cap", "result_limit"}


@dataclass
class ServerConfig:
    index_dir: str
    host: str = "127.0.0.1"
    port: int = 8765
    task_file: str | None = None
    thumb_root: str = "."
    history_cap: int = DEFAULT_CAP
    result_limit: int = DEFAULT_LIMIT

    def validate(self) -> None:
        if not 0 < self.port < 65536:
            raise ConfigError(f"port {self.port} out of range")
        if self.history_cap < 1 or self.result_limit < 1:
            raise ConfigError("history_cap and result_limit must be positive")
        if not Path(self.index_dir).is_dir():
            raise ConfigError(f"index_dir {self.index_dir!r} is not a directory")
        if self.task_file is not None and not Path(self.task_file).is_file():
            raise ConfigError(f"task_file {self.task_file!r} is not readable")
        if not Path(self.thumb_root).is_dir():
            raise ConfigError(f"thumb_root {self.thumb_root!r} is not a directory")


def load_config(path: str | Path) -> ServerConfig:
    values: dict[str, object] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"line {line_no}: {key} must be an integer") from None
        else:
            values[key] = value
    if "index_dir" not in values:
        raise ConfigError("config is missing index_dir")
    config = ServerConfig(**values)  # type: ignore[arg-type]
    config.validate()
    return config
