"""
Text escaping and time formatting shared by every record format.
"""
import math
import re
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation

_ESCAPES = {
    '\\': '\\\\',
    '\n': '\\n',
    '\t': '\\t',
    '\r': '\\r',
}
_UNESCAPES = {'\\': '\\', 'n': '\n', 't': '\t', 'r': '\r'}
_NEEDS_ESCAPE = re.compile(r'[\\\x00-\x1f\x7f]')
_ESCAPE_SEQ = re.compile(r'\\(x[0-9a-f]{2}|.)', re.DOTALL)


def _escape_char(match):
    ch = match.group(0)
    return _ESCAPES.get(ch) or f'\\x{ord(ch):02x}'


def escape_text(text):
    """Backslash-escape a string so it fits on one tab-separated line."""
    return _NEEDS_ESCAPE.sub(_escape_char, text)


def _unescape_seq(match):
    seq = match.group(1)
    if seq in _UNESCAPES:
        return _UNESCAPES[seq]
    if len(seq) == 3:
        return chr(int(seq[1:], 16))
    raise ValueError(f'invalid escape sequence \\{seq}')


def unescape_text(text):
    """Inverse of escape_text."""
    return _ESCAPE_SEQ.sub(_unescape_seq, text)


def _decimal_to_ms(value):
    # Halves round away from zero in both directions of the codec.
    return int((value * 1000).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def to_ms(seconds):
    """Round seconds to whole milliseconds."""
    if not math.isfinite(seconds):
        raise ValueError(f'not a finite number: {seconds!r}')
    return _decimal_to_ms(Decimal(repr(float(seconds))))


def ms_to_seconds(ms):
    return ms / 1000


def round_seconds(seconds):
    """Seconds snapped to the millisecond grid."""
    return to_ms(seconds) / 1000


def format_ms(ms):
    """Render integer milliseconds as decimal seconds with 3 places."""
    sign = '-' if ms < 0 else ''
    ms = abs(ms)
    return f'{sign}{ms // 1000}.{ms % 1000:03d}'


def format_seconds(seconds):
    return format_ms(to_ms(seconds))


def parse_ms(text):
    """Parse decimal seconds into integer milliseconds."""
    try:
        value = Decimal(text)
    except InvalidOperation as exc:
        raise ValueError(f'not a decimal number: {text!r}') from exc
    if not value.is_finite():
        raise ValueError(f'not a finite number: {text!r}')
    return _decimal_to_ms(value)
