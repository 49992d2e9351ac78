# src/instance.py
"""
Loader for the example-ideal corpus.

File format:

    # comment
    NAME : cusp_pair
    VARS : z, w
    IDEAL_SECTION
    z^2 - w^3
    w^2 - z^3
    EOF
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple
import re

from poly import MultiPoly, PolySyntaxError, parse_poly


@dataclass
class IdealInstance:
    """
    One corpus entry.

    Attributes:
        name: Instance name (NAME header, file stem if absent)
        variables: Variable names in ring order
        generator_texts: Generators as written in the file
        generators: Parsed generators
        path: Source file
    """
    name: str
    variables: Tuple[str, ...]
    generator_texts: Tuple[str, ...]
    generators: Tuple[MultiPoly, ...]
    path: Optional[Path] = None

    @property
    def nvars(self) -> int:
        return len(self.variables)


def _parse_header_value(lines: List[Tuple[int, str]], key: str) -> Optional[str]:
    """Parse header value like 'VARS : z, w'."""
    pattern = rf'^\s*{re.escape(key)}\s*:\s*(.+?)\s*$'
    for _, line in lines:
        match = re.search(pattern, line, re.IGNORECASE)
        if match:
            return match.group(1)
    return None


def _find_section(lines: List[Tuple[int, str]], section_name: str) -> Optional[int]:
    """Index of the first line after the section marker."""
    for idx, (_, line) in enumerate(lines):
        if line.strip().upper() == section_name.upper():
            return idx + 1
    return None


def load_ideal_instance(path: Path) -> IdealInstance:
    """
    Load a corpus file.

    Raises:
        FileNotFoundError: missing file
        RuntimeError: missing VARS header or empty IDEAL_SECTION
        PolySyntaxError: unparsable generator; line and column refer to the file
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Instance not found: {path}")

    raw = path.read_text(encoding="utf-8").splitlines()
    lines = [(no, ln.split("#", 1)[0].strip()) for no, ln in enumerate(raw, start=1)]
    lines = [(no, ln) for no, ln in lines if ln]

    vars_text = _parse_header_value(lines, "VARS")
    if vars_text is None:
        raise RuntimeError(f"Failed to parse VARS from {path.name}")
    variables = tuple(v.strip() for v in vars_text.split(",") if v.strip())
    name = _parse_header_value(lines, "NAME") or path.stem

    start = _find_section(lines, "IDEAL_SECTION")
    if start is None:
        raise RuntimeError(f"No IDEAL_SECTION in {path.name}")

    texts, gens = [], []
    for no, line in lines[start:]:
        if line.upper() == "EOF" or line.upper().endswith("_SECTION"):
            break
        try:
            gens.append(parse_poly(line, len(variables), variables))
        except PolySyntaxError as exc:
            raise PolySyntaxError(
                f"{path.name} line {no}, column {exc.column}: {exc.reason}", exc.offset, exc.text
            ) from exc
        texts.append(line)

    if not gens:
        raise RuntimeError(f"Empty IDEAL_SECTION in {path.name}")

    return IdealInstance(
        name=name,
        variables=variables,
        generator_texts=tuple(texts),
        generators=tuple(gens),
        path=path,
    )


def list_instances(directory: Path) -> List[Path]:
    return sorted(Path(directory).glob("*.txt"))
