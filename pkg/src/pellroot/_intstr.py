"""Decimal conversion of huge integers, bypassing the interpreter's digit limit."""

_CHUNK_DIGITS = 4000


def int_to_decimal(n: int) -> str:
    if n < 0:
        return "-" + int_to_decimal(-n)
    if n.bit_length() < 3 * _CHUNK_DIGITS:
        return str(n)
    half = int(n.bit_length() * 0.30103) // 2
    hi, lo = divmod(n, 10**half)
    return int_to_decimal(hi) + int_to_decimal(lo).zfill(half)


def decimal_to_int(s: str) -> int:
    s = s.strip()
    if s.startswith("-"):
        return -decimal_to_int(s[1:])
    if len(s) <= _CHUNK_DIGITS:
        return int(s)
    half = len(s) // 2
    return decimal_to_int(s[:half]) * 10 ** (len(s) - half) + decimal_to_int(s[half:])
