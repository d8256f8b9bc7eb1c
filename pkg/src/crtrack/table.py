# -*- coding: utf-8 -*-
"""
    crtrack.table
    ~~~~~~~~~~~~~

    Aligned, colored result tables and their ``key = value`` twins.

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

from colorama import Fore, Style

from motkit.motio import format_number


def cell(value):
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def format_table(columns, rows, color=True):
    """Render ``rows`` (sequences of values) under ``columns``.

    The first column is the row label and is left aligned, the others are
    right aligned. Padding happens before coloring so that escape codes do
    not break the alignment.

    """
    texts = [[cell(v) for v in row] for row in rows]
    widths = [
        max([len(name)] + [len(row[i]) for row in texts])
        for i, name in enumerate(columns)
    ]

    def line(values, label_color, value_color):
        parts = []
        for i, (text, width) in enumerate(zip(values, widths)):
            padded = text.ljust(width) if i == 0 else text.rjust(width)
            tint = label_color if i == 0 else value_color
            parts.append(f"{tint}{padded}{Style.RESET_ALL}" if color and tint
                         else padded)
        return "  ".join(parts)

    lines = [line(columns, Style.BRIGHT, Style.BRIGHT)]
    lines += [line(values, Fore.GREEN, "") for values in texts]
    return "\n".join(lines)


def print_table(columns, rows):
    print(format_table(columns, rows))


def key_values(columns, rows):
    """``<label>.<column> = <value>`` lines, one per cell."""
    lines = []
    for row in rows:
        label = row[0]
        for name, value in zip(columns[1:], row[1:]):
            text = format_number(value) if isinstance(value, float) else value
            lines.append(f"{label}.{name} = {text}")
    return "\n".join(lines) + "\n"


def write_key_values(filename, columns, rows):
    with open(filename, "w") as f:
        f.write(key_values(columns, rows))
