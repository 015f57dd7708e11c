import json
import logging
from pathlib import Path

from reports import json_safe

logger = logging.getLogger(__name__)


def log_iteration(record, label=""):
    """Log one training iteration at DEBUG level"""
    data = json_safe(record.to_dict() if hasattr(record, "to_dict") else dict(record))
    logger.debug("%s iteration %s: %s", label, data.get("iteration"), json.dumps(data, sort_keys=True))


def write_trace(records, path):
    """Write iteration records as JSON lines; non-finite numbers become null"""
    try:
        with Path(path).open("w", encoding="utf-8") as handle:
            for record in records:
                data = json_safe(record.to_dict() if hasattr(record, "to_dict") else dict(record))
                handle.write(json.dumps(data, sort_keys=True, ensure_ascii=False) + "\n")
    except OSError as e:
        logger.error(f"Error writing trace {path}: {e}")
        raise
    return path


def get_trace(path, limit=None):
    """Read back a JSON-lines trace, optionally only the last `limit` records"""
    with Path(path).open(encoding="utf-8") as handle:
        records = [json.loads(line) for line in handle if line.strip()]
    return records[-limit:] if limit else records
