"""Numeric text formatting shared by the CSV writers.

17 significant digits round-trips every IEEE double exactly, which keeps
regenerated output files byte-stable for regression diffs.
"""


def fmt_float(x) -> str:
    return format(float(x), ".17g")
