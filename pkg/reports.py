"""
Run reports and their renderings: JSON (full precision), TSV (6 decimals)
and Excel workbooks.
"""
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field

import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
TSV_FLOAT_FORMAT = "%.6f"

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2
EXIT_TIE = 3


def json_safe(value):
    """JSON-safe copy: numpy scalars to Python, NaN/inf to None"""
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if hasattr(value, "tolist"):
        return json_safe(value.tolist())
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def labeled_table(row_labels, col_labels, entries):
    return {
        "row_labels": list(row_labels),
        "col_labels": list(col_labels),
        "entries": json_safe(entries),
    }


@dataclass
class RunReport:
    command: str
    fixture: str
    config: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)  # name -> labeled table
    winners: list = field(default_factory=list)
    margins: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    ties: list = field(default_factory=list)
    records: list = field(default_factory=list)  # per-row results (forms, classes, ...)
    trace: dict = field(default_factory=dict)
    status: str = "ok"
    exit_code: int = EXIT_OK
    schema: int = SCHEMA_VERSION

    def to_dict(self):
        return json_safe(asdict(self))

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data):
        if data.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def table_frame(table):
    return pd.DataFrame(table["entries"], index=table["row_labels"], columns=table["col_labels"])


def _frame_tsv(frame, index=True):
    buffer = io.StringIO()
    frame.to_csv(buffer, sep="\t", float_format=TSV_FLOAT_FORMAT, index=index, lineterminator="\n")
    return buffer.getvalue()


def to_tsv(report):
    """Every table of the report as tab-separated blocks, each under a '# name' line"""
    blocks = []
    for name, table in report.tables.items():
        blocks.append(f"# {name}\n" + _frame_tsv(table_frame(table)))
    if report.winners:
        frame = pd.DataFrame(report.winners)
        if len(report.margins) == len(frame):
            frame["margin"] = report.margins
        blocks.append("# winners\n" + _frame_tsv(frame, index=False))
    if report.mismatches:
        blocks.append("# mismatches\n" + _frame_tsv(pd.DataFrame(report.mismatches), index=False))
    if report.records:
        blocks.append("# results\n" + _frame_tsv(pd.DataFrame(report.records), index=False))
    return "\n".join(blocks)


def export_workbook(report, path):
    """Excel workbook with one sheet per table plus winners and results"""
    wb = Workbook()
    wb.remove(wb.active)

    header_font = Font(name='Arial', size=11, bold=True, color='000000')
    title_font = Font(name='Arial', size=14, bold=True, color='2c3e50')
    header_fill = PatternFill(start_color='f8f9fa', end_color='f8f9fa', fill_type='solid')
    winner_fill = PatternFill(start_color='d4edda', end_color='d4edda', fill_type='solid')
    mismatch_fill = PatternFill(start_color='f8d7da', end_color='f8d7da', fill_type='solid')
    center_align = Alignment(horizontal='center', vertical='center')
    thin_border = Border(left=Side(style='thin'), right=Side(style='thin'),
                         top=Side(style='thin'), bottom=Side(style='thin'))

    wrong_cells = {m["cell"] for m in report.mismatches}
    winner_of = {w.get("cell"): w.get("morpheme") for w in report.winners}

    def write_frame(ws, frame, index, highlight=False):
        ws['A1'] = f"{report.command} {report.fixture}"
        ws['A1'].font = title_font
        headers = ([""] if index else []) + [str(c) for c in frame.columns]
        for col, header in enumerate(headers, 1):
            cell = ws.cell(row=3, column=col, value=header)
            cell.font = header_font
            cell.fill = header_fill
            cell.alignment = center_align
            cell.border = thin_border
        for r, (label, values) in enumerate(frame.iterrows(), 4):
            col = 1
            if index:
                cell = ws.cell(row=r, column=col, value=str(label))
                cell.border = thin_border
                if label in wrong_cells:
                    cell.fill = mismatch_fill
                col += 1
            for name, value in zip(frame.columns, values):
                cell = ws.cell(row=r, column=col, value=value.item() if hasattr(value, "item") else value)
                cell.border = thin_border
                if isinstance(value, float):
                    cell.number_format = '0.000000'
                if highlight and winner_of.get(label) == name:
                    cell.fill = winner_fill
                col += 1
        for col in range(1, len(headers) + 1):
            ws.column_dimensions[get_column_letter(col)].width = 14

    for name, table in report.tables.items():
        write_frame(wb.create_sheet(title=name[:31]), table_frame(table), True, highlight=True)
    if report.winners:
        write_frame(wb.create_sheet(title="winners"), pd.DataFrame(report.winners), False)
    if report.records:
        write_frame(wb.create_sheet(title="results"), pd.DataFrame(report.records), False)
    if not wb.sheetnames:
        wb.create_sheet(title="report")

    wb.save(path)
    logger.info("Wrote workbook %s", path)
    return path
