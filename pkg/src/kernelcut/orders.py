"""Order-book ingestion and serialization.

CSV is the plant's exchange format (one kernel per row, header mandatory);
JSON mirrors the domain types field for field. Both funnel through the same
validation, so a book is either usable or the caller gets the full report.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json

from .errors import InvalidOrderBookError, ParseError
from .model import FinishedProductReference, Kernel, OrderBook, validate_order_book

CSV_COLUMNS = ("kernel_id", "fpr_id", "thickness_tenths_mm", "piece_count", "oversize")


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _parse_int(raw: str, column: str, line: int) -> int:
    try:
        return int(raw.strip())
    except (ValueError, AttributeError):
        raise ParseError(f"column '{column}' value {raw!r} is not an integer", line=line) from None


def _parse_flag(raw: str, column: str, line: int) -> bool:
    value = (raw or "").strip()
    if value == "0":
        return False
    if value == "1":
        return True
    raise ParseError(f"column '{column}' value {raw!r} must be 0 or 1", line=line)


def _kernels_from_csv(text: str) -> list[Kernel]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise ParseError("empty input: header row is mandatory", line=1)
    header = [h.strip() for h in reader.fieldnames]
    missing = [c for c in CSV_COLUMNS if c not in header]
    extra = [c for c in header if c not in CSV_COLUMNS]
    if missing or extra:
        raise ParseError(f"header must contain exactly {list(CSV_COLUMNS)}; missing {missing}, unknown {extra}", line=1)

    kernels = []
    for line, row in enumerate(reader, start=2):
        if any(v is None for v in row.values()) or None in row:
            raise ParseError("wrong number of fields", line=line)
        kernels.append(Kernel(
            kernel_id=row["kernel_id"].strip(),
            fpr_id=row["fpr_id"].strip(),
            thickness=_parse_int(row["thickness_tenths_mm"], "thickness_tenths_mm", line),
            piece_count=_parse_int(row["piece_count"], "piece_count", line),
            oversize=_parse_flag(row["oversize"], "oversize", line),
        ))
    return kernels


def _book_from_json(text: str) -> OrderBook:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid JSON: {err.msg}", line=err.lineno) from None
    if not isinstance(payload, dict) or "kernels" not in payload:
        raise ParseError("JSON order book must be an object with a 'kernels' array")

    kernels = []
    for i, entry in enumerate(payload["kernels"]):
        try:
            kernels.append(Kernel(
                kernel_id=str(entry["kernel_id"]),
                fpr_id=str(entry["fpr_id"]),
                thickness=int(entry["thickness"]),
                piece_count=int(entry["piece_count"]),
                oversize=bool(entry.get("oversize", False)),
            ))
        except (KeyError, TypeError, ValueError) as err:
            raise ParseError(f"kernel entry {i}: {err}") from None

    if "fprs" not in payload:
        return OrderBook.from_kernels(kernels)

    fprs = []
    for i, entry in enumerate(payload["fprs"]):
        try:
            fprs.append(FinishedProductReference(
                fpr_id=str(entry["fpr_id"]),
                kernel_ids=frozenset(str(k) for k in entry["kernel_ids"]),
                thickness_set=frozenset(int(t) for t in entry["thickness_set"]),
            ))
        except (KeyError, TypeError, ValueError) as err:
            raise ParseError(f"fpr entry {i}: {err}") from None
    n_fprs = int(payload.get("n_fprs", len(fprs)))
    return OrderBook(kernels=tuple(kernels), fprs=tuple(fprs), n_fprs=n_fprs)


def parse_orders(source, format: str = "csv") -> OrderBook:
    """Read, build and validate an order book; raises unless the book is clean.

    `source` may be bytes, text, or a readable stream. Validation warnings
    (oversize kernels) pass; violations raise InvalidOrderBookError carrying
    the full report.
    """
    text = _as_text(source)
    if format == "csv":
        book = OrderBook.from_kernels(_kernels_from_csv(text))
    elif format == "json":
        book = _book_from_json(text)
    else:
        raise ParseError(f"unknown format '{format}' (expected csv or json)")

    report = validate_order_book(book)
    if not report.valid:
        raise InvalidOrderBookError(report)
    return book


def order_book_to_dict(book: OrderBook) -> dict:
    return {
        "kernels": [
            {
                "kernel_id": k.kernel_id,
                "fpr_id": k.fpr_id,
                "thickness": k.thickness,
                "piece_count": k.piece_count,
                "oversize": k.oversize,
            }
            for k in sorted(book.kernels, key=lambda k: k.kernel_id)
        ],
        "fprs": [
            {
                "fpr_id": f.fpr_id,
                "kernel_ids": sorted(f.kernel_ids),
                "thickness_set": sorted(f.thickness_set),
            }
            for f in sorted(book.fprs, key=lambda f: f.fpr_id)
        ],
        "n_fprs": book.n_fprs,
    }


def order_book_to_json(book: OrderBook) -> str:
    return json.dumps(order_book_to_dict(book), indent=2, sort_keys=True) + "\n"


def order_book_to_csv(book: OrderBook) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for k in sorted(book.kernels, key=lambda k: k.kernel_id):
        writer.writerow([k.kernel_id, k.fpr_id, k.thickness, k.piece_count, int(k.oversize)])
    return out.getvalue()


def order_book_digest(book: OrderBook) -> str:
    """Stable content hash: identical books digest identically whatever the source format."""
    canonical = json.dumps(order_book_to_dict(book), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]
