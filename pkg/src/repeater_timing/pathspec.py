"""Line-oriented path description files.

Example::

    # four forward hops, flat timing
    class B
    pattern flat
    link MM> 1
    link MM> 1 pr=0.02 nt=800
    link MIM 3/2
    link MSM 1.5

Custom patterns need one ``fire <link-index> <time>`` line per link
(1-based indices).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .model import AppClass, Link, LinkKind, Path
from .timing import PATTERN_TAGS, Schedule, make_schedule

DEFAULT_PR = 0.01
DEFAULT_NT = 1460


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, detail: Optional[str] = None):
        text = f"{message} at line {line}, column {column}"
        super().__init__(f"{text}: {detail}" if detail else text)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class PathSpec:
    path: Path
    app_class: AppClass = AppClass.T
    pattern: str = "bell_matched"
    fires: Optional[tuple[Fraction, ...]] = field(default=None)

    def schedule(self) -> Schedule:
        if self.pattern == "custom":
            if self.fires is None or len(self.fires) != self.path.hops:
                raise ValueError("custom pattern needs a fire time for every link")
            return Schedule.custom(self.fires)
        return make_schedule(self.path, self.pattern)

    def with_overrides(self, app_class: Optional[str] = None, pattern: Optional[str] = None) -> "PathSpec":
        cls = AppClass(app_class) if app_class else self.app_class
        pat = pattern or self.pattern
        if pat not in PATTERN_TAGS:
            raise ValueError(f"unknown pattern {pat!r}")
        if pat == "custom" and self.fires is None:
            raise ValueError("custom pattern needs fire lines in the path file")
        return PathSpec(self.path, cls, pat, self.fires)


def format_time(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _tokens(line: str):
    """Yield (token, 1-based column)."""
    i = 0
    n = len(line)
    while i < n:
        while i < n and line[i].isspace():
            i += 1
        if i >= n:
            break
        start = i
        while i < n and not line[i].isspace():
            i += 1
        yield line[start:i], start + 1


def _parse_time(token: str, lineno: int, col: int, what: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed {what}", lineno, col, repr(token)) from None


def parse_path_file(text: str) -> PathSpec:
    app_class = AppClass.T
    pattern = "bell_matched"
    links: list[Link] = []
    fires: dict[int, Fraction] = {}
    fire_pos: dict[int, tuple[int, int]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = list(_tokens(raw))
        word, col = toks[0]
        args = toks[1:]

        if word == "class":
            if len(args) != 1:
                raise ParseError("class takes exactly one argument", lineno, col)
            try:
                app_class = AppClass(args[0][0])
            except ValueError:
                raise ParseError("unknown class", lineno, args[0][1], repr(args[0][0])) from None
        elif word == "pattern":
            if len(args) != 1:
                raise ParseError("pattern takes exactly one argument", lineno, col)
            if args[0][0] not in PATTERN_TAGS:
                raise ParseError("unknown pattern", lineno, args[0][1], repr(args[0][0]))
            pattern = args[0][0]
        elif word == "link":
            links.append(_parse_link(args, lineno, col))
        elif word == "fire":
            if len(args) != 2:
                raise ParseError("fire takes a link index and a time", lineno, col)
            (idx_tok, idx_col), (t_tok, t_col) = args
            if not idx_tok.isdigit() or int(idx_tok) < 1:
                raise ParseError(f"malformed link index {idx_tok!r}", lineno, idx_col)
            idx = int(idx_tok)
            if idx in fires:
                raise ParseError(f"duplicate fire for link {idx}", lineno, idx_col)
            fires[idx] = _parse_time(t_tok, lineno, t_col, "fire time")
            fire_pos[idx] = (lineno, idx_col)
        else:
            raise ParseError("unknown directive", lineno, col, repr(word))

    last_line = max(1, len(text.splitlines()))
    if not links:
        raise ParseError("no link lines", last_line)
    h = len(links)
    for idx, (ln, c) in fire_pos.items():
        if idx > h:
            raise ParseError(f"fire index {idx} exceeds hop count {h}", ln, c)
    fire_tuple = None
    if fires:
        if len(fires) != h:
            missing = min(set(range(1, h + 1)) - set(fires))
            raise ParseError(f"custom pattern missing fire for link {missing}", last_line)
        fire_tuple = tuple(fires[i] for i in range(1, h + 1))
    if pattern == "custom" and fire_tuple is None:
        raise ParseError("custom pattern needs a fire line per link", last_line)
    if pattern != "custom" and fire_tuple is not None:
        first = min(fire_pos.values())
        raise ParseError("fire lines require pattern custom", *first)
    if pattern in ("ridge_fold", "valley_fold") and h < 2:
        raise ParseError(f"{pattern} needs at least 2 links", last_line)
    return PathSpec(Path(tuple(links)), app_class, pattern, fire_tuple)


def _parse_link(args, lineno: int, col: int) -> Link:
    if len(args) < 2:
        raise ParseError("link needs a kind and a latency", lineno, col)
    (kind_tok, kind_col), (lat_tok, lat_col) = args[0], args[1]
    try:
        kind = LinkKind.from_token(kind_tok)
    except ValueError:
        raise ParseError("unknown link kind", lineno, kind_col, repr(kind_tok)) from None
    latency = _parse_time(lat_tok, lineno, lat_col, "latency")
    if latency <= 0:
        raise ParseError(f"latency must be positive, got {lat_tok!r}", lineno, lat_col)
    pr, nt = DEFAULT_PR, DEFAULT_NT
    for tok, c in args[2:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(f"malformed link option {tok!r}", lineno, c)
        if key == "pr":
            try:
                pr = float(value)
            except ValueError:
                raise ParseError(f"malformed pr {value!r}", lineno, c) from None
            if not 0.0 < pr <= 1.0:
                raise ParseError(f"pr must lie in (0, 1], got {value}", lineno, c)
        elif key == "nt":
            if not value.isdigit() or int(value) < 1:
                raise ParseError(f"malformed nt {value!r}", lineno, c)
            nt = int(value)
        else:
            raise ParseError(f"unknown link option {key!r}", lineno, c)
    return Link(kind, latency, pr, nt)


def format_path_file(spec: PathSpec) -> str:
    """Canonical text form; parsing it back yields an equal PathSpec."""
    lines = [f"class {spec.app_class.value}", f"pattern {spec.pattern}"]
    for link in spec.path:
        lines.append(
            f"link {link.kind.token} {format_time(link.latency)} pr={link.reception_prob!r} nt={link.transmitters}"
        )
    if spec.fires is not None:
        for i, f in enumerate(spec.fires, start=1):
            lines.append(f"fire {i} {format_time(f)}")
    return "\n".join(lines) + "\n"
