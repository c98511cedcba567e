"""Semi-equivelar maps on the Klein bottle: construction, validation,
isomorphism classification and counting."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover - running from a source tree
    __version__ = "0.1.0"
