from abc import ABC, abstractmethod
from io import StringIO
from pathlib import Path
from typing import Generic, TextIO, TypeVar, Union

T = TypeVar("T")


class Codec(ABC, Generic[T]):
    """Abstract base class for text codecs.

    Provides a unified interface for parsing a source string or stream into
    a domain object and serializing the object back to a string.
    """

    def parse(self, src: Union[str, StringIO]) -> T:
        """Parse the source string or stream."""
        stream = StringIO(src) if isinstance(src, str) else src
        return self._load(stream)

    def read(self, obj: T) -> str:
        """Serialize ``obj`` to a string."""
        stream = StringIO()
        self._dump(obj, stream)
        return stream.getvalue()

    def load(self, path: Union[str, Path]) -> T:
        with open(path, "r", encoding="utf-8") as f:
            return self._load(f)

    def save(self, obj: T, path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8") as f:
            self._dump(obj, f)

    @abstractmethod
    def _load(self, fp: TextIO) -> T:
        """Read from the file-like object."""
        ...

    @abstractmethod
    def _dump(self, obj: T, fp: TextIO) -> None:
        """Serialize ``obj`` into the file-like object."""
        ...
