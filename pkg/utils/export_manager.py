"""
Export Manager - Render and save Pop_T results in multiple formats
Supports: JSON, TSV, DOT, TXT and an optional PDF summary
"""

import json
import sys
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

try:
    from reportlab.lib.enums import TA_CENTER
    from reportlab.lib.pagesizes import letter
    from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
    from reportlab.lib.units import inch
    from reportlab.platypus import Paragraph, Preformatted, SimpleDocTemplate, Spacer
    REPORTLAB_AVAILABLE = True
except ImportError:
    REPORTLAB_AVAILABLE = False
    print("[WARNING] reportlab not available - PDF export disabled", file=sys.stderr)

FORMATS = ("json", "tsv", "dot", "text")


class ExportManager:
    """Renders tables, trajectories and reports; optionally writes them to disk"""

    def __init__(self, export_dir: str = "exports"):
        """
        Initialize export manager

        Args:
            export_dir: Directory for relative output paths and PDF summaries
        """
        self.export_dir = Path(export_dir)

    # --- rendering -----------------------------------------------------------

    @staticmethod
    def render_json(data) -> str:
        return json.dumps(data, indent=2, ensure_ascii=False, default=str) + "\n"

    @staticmethod
    def render_table_tsv(table) -> str:
        """
        Depth table as TSV

        Columns depth and count; the final row "inf" holds the periodic count.
        """
        lines = ["depth\tcount"]
        lines.extend(f"{i}\t{count}" for i, count in enumerate(table.counts))
        lines.append(f"inf\t{table.periodic_count}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def render_table_text(table) -> str:
        lines = [f"{table.label} (order {table.group_order})"]
        lines.append("  depth  count")
        lines.extend(f"  {i:>5}  {count}" for i, count in enumerate(table.counts))
        lines.append(f"  {'inf':>5}  {table.periodic_count}")
        if table.periodic_cycle_lengths:
            lengths = sorted(set(table.periodic_cycle_lengths))
            lines.append(f"  periodic orbits: {table.periodic_orbits} (lengths {', '.join(map(str, lengths))})")
        if table.eventually_periodic_count:
            lines.append(f"  eventually periodic: {table.eventually_periodic_count}")
        return "\n".join(lines) + "\n"

    def render_table(self, table, fmt: str = "text") -> str:
        fmt = fmt.lower()
        if fmt == "json":
            return self.render_json(table.to_dict())
        if fmt == "tsv":
            return self.render_table_tsv(table)
        if fmt == "text":
            return self.render_table_text(table)
        raise ValueError(f"Unsupported format: {fmt}. Use: json, tsv, text")

    @staticmethod
    def render_forest_dot(name: str, edges: Iterable[Tuple[str, str]], root: str = "e") -> str:
        """
        Pop_T forest in DOT: one vertex per element, an edge w -> Pop_T(w)

        Self-loops (the identity) are dropped so the root shows as a sink.
        """
        vertices: List[str] = []
        seen = set()
        arrows = []
        for source, target in edges:
            for v in (source, target):
                if v not in seen:
                    seen.add(v)
                    vertices.append(v)
            if source != target:
                arrows.append((source, target))
        lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
        for v in vertices:
            shape = "doublecircle" if v == root else "ellipse"
            lines.append(f'  "{v}" [shape={shape}];')
        lines.extend(f'  "{a}" -> "{b}";' for a, b in arrows)
        lines.append("}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def render_orbit_text(orbit, fmt_element, projections: bool = True) -> str:
        lines = []
        for k, w in enumerate(orbit.trajectory):
            line = f"  {k:>3}  {fmt_element(w)}"
            if projections:
                line += f"    pi_T = {fmt_element(orbit.projections[k])}"
            lines.append(line)
        if orbit.terminal.value == "reaches_identity":
            lines.append(f"  reaches e after {orbit.size - 1} steps (orbit size {orbit.size})")
        else:
            lines.append(f"  periodic: cycle of length {orbit.cycle_length} after {orbit.transient_length} steps")
        return "\n".join(lines) + "\n"

    @staticmethod
    def render_report_text(title: str, rows: Iterable[Tuple[str, str]]) -> str:
        lines = [title]
        lines.extend(f"  [{status}] {message}" for status, message in rows)
        return "\n".join(lines) + "\n"

    # --- files ---------------------------------------------------------------

    def _path(self, filename: str) -> Path:
        path = Path(filename)
        if not path.is_absolute() and path.parent == Path("."):
            path = self.export_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def write(self, text: str, filename: str) -> str:
        """
        Write rendered output

        Returns:
            Path to the written file
        """
        path = self._path(filename)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return str(path)

    def export_to_pdf(
        self,
        sections: List[Dict],
        title: str = "Pop_T Report",
        filename: Optional[str] = None,
    ) -> Optional[str]:
        """
        Export a summary to PDF

        Args:
            sections: Dicts with "heading" and preformatted "body"
            title: PDF title
            filename: Optional filename (auto-generated if None)

        Returns:
            Path to exported file or None if reportlab not available
        """
        if not REPORTLAB_AVAILABLE:
            return None

        if not filename:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            filename = f"poptsack_{timestamp}.pdf"
        path = self._path(filename)

        doc = SimpleDocTemplate(str(path), pagesize=letter, rightMargin=54, leftMargin=54, topMargin=54, bottomMargin=36)
        styles = getSampleStyleSheet()
        title_style = ParagraphStyle("PopTitle", parent=styles["Heading1"], fontSize=20, spaceAfter=20, alignment=TA_CENTER)
        story = [Paragraph(title, title_style), Spacer(1, 0.2 * inch)]
        story.append(Paragraph(f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}", styles["Normal"]))
        story.append(Spacer(1, 0.3 * inch))
        for section in sections:
            story.append(Paragraph(f"<b>{section['heading']}</b>", styles["Heading2"]))
            story.append(Preformatted(section["body"], styles["Code"]))
            story.append(Spacer(1, 0.2 * inch))
        doc.build(story)
        return str(path)
