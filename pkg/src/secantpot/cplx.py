"""Text form ``a+bi`` for complex numbers, exact for every finite double."""

import math
import re


def parse_complex(text):
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex number")
    # a bare "i" means 1i
    s = re.sub(r"(^|[+\-])i", r"\g<1>1i", s)
    if "j" in s or "J" in s:
        raise ValueError(f"use 'i' for the imaginary unit: {text!r}")
    try:
        z = complex(s.replace("i", "j"))
    except ValueError:
        raise ValueError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"complex number must be finite: {text!r}")
    return z


def format_complex(z):
    z = complex(z)
    return f"{z.real!r}{z.imag:+}i"


def parse_point(text):
    """Parse ``"a+bi,c+di"`` into a pair of complex numbers."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected two comma-separated complex numbers: {text!r}")
    return parse_complex(parts[0]), parse_complex(parts[1])
