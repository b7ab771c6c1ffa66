import csv
import json
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence, Union

import yaml

Rows = List[Dict[str, Any]]


class Writer(ABC):
    """Abstract base class for writing report data to files."""

    @abstractmethod
    def write(self, data: Any, filename: str) -> None:
        """
        Write ``data`` to the specified file.

        :param data: The data to write.
        :param filename: The target filename.
        """
        ...


class JsonWriter(Writer):
    """Concrete writer for saving data in JSON format."""

    def write(self, data: Union[Rows, Dict[str, Any]], filename: str) -> None:
        with open(filename, "w", encoding="utf-8") as f:
            json.dump(data, f, ensure_ascii=False, indent=2)
            f.write("\n")


class JsonLinesWriter(Writer):
    """One JSON object per line, keys in insertion order."""

    def write(self, data: Rows, filename: str) -> None:
        with open(filename, "w", encoding="utf-8") as f:
            for row in data:
                f.write(json.dumps(row, ensure_ascii=False) + "\n")


class CsvWriter(Writer):
    """Concrete writer for saving rows in CSV format."""

    def write(self, data: Rows, filename: str) -> None:
        """
        Write rows to a CSV file; the first row defines the columns.

        :raises RuntimeError: If there is no data to write.
        """
        if not data:
            raise RuntimeError("No data available to write.")
        with open(filename, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=list(data[0].keys()), lineterminator="\n")
            writer.writeheader()
            writer.writerows(data)


class YamlWriter(Writer):
    """Concrete writer for saving data in YAML format."""

    def write(self, data: Union[Rows, Dict[str, Any]], filename: str) -> None:
        """
        :raises RuntimeError: If there is no data to write.
        """
        if not data:
            raise RuntimeError("No data available to write.")
        with open(filename, "w", encoding="utf-8") as f:
            yaml.safe_dump(
                data,
                f,
                allow_unicode=True,
                default_flow_style=False,
                sort_keys=False
            )


def format_table(rows: Rows, header: Sequence[str] = ()) -> str:
    """Left-aligned plain-text table; every row must have the keys of the first."""
    if not rows:
        raise RuntimeError("No data available to write.")
    columns = list(rows[0].keys())
    cells = [columns] + [[str(row[c]) for c in columns] for row in rows]
    widths = [max(len(line[i]) for line in cells) for i in range(len(columns))]
    lines = [f"# {text}" for text in header]
    for line in cells:
        lines.append("  ".join(value.ljust(width) for value, width in zip(line, widths)).rstrip())
    return "\n".join(lines) + "\n"


class TextTableWriter(Writer):
    """Aligned plain-text table, optionally preceded by ``#`` header lines."""

    def __init__(self, header: Sequence[str] = ()) -> None:
        self.header = tuple(header)

    def write(self, data: Rows, filename: str) -> None:
        with open(filename, "w", encoding="utf-8") as f:
            f.write(format_table(data, self.header))
