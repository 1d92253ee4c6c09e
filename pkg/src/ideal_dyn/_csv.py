import csv
import io


def csv_line(*fields) -> str:
    """One CSV record without the line terminator; floats keep full precision."""
    buf = io.StringIO()
    csv.writer(buf, lineterminator="").writerow([repr(f) if isinstance(f, float) else f for f in fields])
    return buf.getvalue()
