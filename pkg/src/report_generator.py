"""
Report generator: JSON, plain text and LaTeX renderings of command payloads
"""
import json
from typing import Any, Dict, List

import pandas as pd
from jinja2 import Environment, FileSystemLoader, StrictUndefined

from src.classify import TAG_SYMBOLS
from src.config import Config
from src.exceptions import UsageError

TIMING_KEYS = ("execution_time", "executionTime", "timing")


def strip_timing(value: Any) -> Any:
    """Remove timing fields at any depth"""
    if isinstance(value, dict):
        return {k: strip_timing(v) for k, v in value.items() if k not in TIMING_KEYS}
    if isinstance(value, list):
        return [strip_timing(v) for v in value]
    return value


_TEX = {"\\": r"\textbackslash{}", "_": r"\_", "^": r"\^{}", "&": r"\&", "%": r"\%", "#": r"\#",
        "{": r"\{", "}": r"\}", "~": r"\~{}"}


def _latex_escape(text: Any) -> str:
    return "".join(_TEX.get(ch, ch) for ch in str(text))


class ReportGenerator:
    """Render command payloads with the templates in src/templates"""

    def __init__(self, verbose: bool = False):
        self.verbose = verbose
        self.env = Environment(
            loader=FileSystemLoader(Config.TEMPLATE_DIR),
            undefined=StrictUndefined,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.env.filters["tex"] = _latex_escape
        self.env.filters["yesno"] = lambda v: "yes" if v else ("n/a" if v is None else "no")

    def render(self, payload: Dict[str, Any], fmt: str = "json") -> str:
        if fmt not in Config.OUTPUT_FORMATS:
            raise UsageError(f"unknown output format '{fmt}'")
        if not self.verbose:
            payload = strip_timing(payload)
        document = {"schemaVersion": Config.SCHEMA_VERSION, **payload}
        if fmt == "json":
            return json.dumps(document, indent=2, ensure_ascii=False) + "\n"
        template = self.env.get_template(f"{document['command']}.{'txt' if fmt == 'text' else 'tex'}.j2")
        return template.render(doc=document, tables=self._tables(document, fmt), verbose=self.verbose)

    def _tables(self, document: Dict[str, Any], fmt: str) -> Dict[str, str]:
        """Family tables for every classify section in the document"""
        tables = {}
        for section in self._classify_sections(document):
            frame = self.families_table(section["families"])
            key = section["algebra"]
            if fmt == "latex":
                tables[key] = frame.to_latex(index=True, escape=True)
            else:
                tables[key] = frame.to_string()
        return tables

    @staticmethod
    def _classify_sections(document: Dict[str, Any]) -> List[Dict[str, Any]]:
        section = document.get("result") if document.get("command") == "classify" else document.get("classify")
        return [section] if isinstance(section, dict) and "families" in section else []

    @staticmethod
    def families_table(families: List[Dict[str, Any]]) -> pd.DataFrame:
        rows = []
        for family in families:
            row = {node: TAG_SYMBOLS[tag] for node, tag in family["tags"].items()}
            row["paper"] = family.get("paperMatch") or "-"
            rows.append(row)
        frame = pd.DataFrame(rows)
        frame.index = [f"F{k + 1}" for k in range(len(rows))]
        return frame
