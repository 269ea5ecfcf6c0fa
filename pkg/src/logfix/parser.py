"""Brace-matching extraction of methods and logging statements from Java-like source.

This is not a grammar: methods are located by a signature pattern followed by
a balanced brace block, and logger calls by receiver/method-name pattern.
Comments are stripped (replaced by spaces, so offsets and line numbers stay
valid) before any scanning, and string literals are honored everywhere so
quotes, braces, and commas inside them never confuse the scanners.
Malformed input degrades: regions that cannot be matched are skipped and
reported, never raised out of extraction.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass, field

from logfix.model import (
    LoggingStatement,
    LogLevel,
    MethodContext,
    Placeholder,
    PlaceholderKind,
    SourceLocation,
    content_hash,
    statement_id,
)

DEFAULT_LOGGER_RECEIVERS = frozenset(
    {"log", "LOG", "logger", "LOGGER", "Log", "Logger"}
)

DEFAULT_LEVEL_METHODS: dict[str, LogLevel] = {
    "trace": LogLevel.TRACE, "tracef": LogLevel.TRACE,
    "finer": LogLevel.TRACE, "finest": LogLevel.TRACE,
    "debug": LogLevel.DEBUG, "debugf": LogLevel.DEBUG, "fine": LogLevel.DEBUG,
    "info": LogLevel.INFO, "infof": LogLevel.INFO,
    "warn": LogLevel.WARN, "warnf": LogLevel.WARN, "warning": LogLevel.WARN,
    "error": LogLevel.ERROR, "errorf": LogLevel.ERROR, "severe": LogLevel.ERROR,
    "fatal": LogLevel.FATAL, "fatalf": LogLevel.FATAL,
}


@dataclass(frozen=True)
class ParserConfig:
    logger_receivers: frozenset[str] = DEFAULT_LOGGER_RECEIVERS
    level_methods: dict[str, LogLevel] = field(
        default_factory=lambda: dict(DEFAULT_LEVEL_METHODS))
    max_method_lines: int = 500

    def __post_init__(self) -> None:
        lowered = {k.lower(): v for k, v in self.level_methods.items()}
        object.__setattr__(self, "level_methods", lowered)


class UnbalancedBraces(Exception):
    """A brace block that never closes. Collected, not raised, by extraction."""

    def __init__(self, path: str, line: int, what: str):
        super().__init__(f"{path}:{line}: unbalanced braces in {what}")
        self.path = path
        self.line = line
        self.what = what


# ---------------------------------------------------------------------------
# Low-level scanning
# ---------------------------------------------------------------------------

def strip_comments(source: str) -> str:
    """Replace // and /* */ comments with spaces, preserving all offsets."""
    out = list(source)
    i, n = 0, len(source)
    CODE, LINE, BLOCK, STR, CHR = range(5)
    state = CODE
    while i < n:
        c = source[i]
        if state == CODE:
            if c == "/" and i + 1 < n and source[i + 1] == "/":
                out[i] = out[i + 1] = " "
                i += 2
                state = LINE
            elif c == "/" and i + 1 < n and source[i + 1] == "*":
                out[i] = out[i + 1] = " "
                i += 2
                state = BLOCK
            elif c == '"':
                i += 1
                state = STR
            elif c == "'":
                i += 1
                state = CHR
            else:
                i += 1
        elif state == LINE:
            if c == "\n":
                state = CODE
            else:
                out[i] = " "
            i += 1
        elif state == BLOCK:
            if c == "*" and i + 1 < n and source[i + 1] == "/":
                out[i] = out[i + 1] = " "
                i += 2
                state = CODE
            else:
                if c != "\n":
                    out[i] = " "
                i += 1
        elif state == STR:
            if c == "\\" and i + 1 < n:
                i += 2
            elif c == '"' or c == "\n":
                # a raw newline ends the literal defensively; Java literals
                # cannot span lines anyway
                i += 1
                state = CODE
            else:
                i += 1
        else:  # CHR
            if c == "\\" and i + 1 < n:
                i += 2
            elif c == "'" or c == "\n":
                i += 1
                state = CODE
            else:
                i += 1
    return "".join(out)


def _literal_mask(text: str) -> bytearray:
    """mask[i] == 1 when text[i] sits inside a string/char literal (quotes included)."""
    mask = bytearray(len(text))
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == '"' or c == "'":
            quote = c
            mask[i] = 1
            i += 1
            while i < n:
                d = text[i]
                mask[i] = 1
                if d == "\\" and i + 1 < n:
                    mask[i + 1] = 1
                    i += 2
                    continue
                i += 1
                if d == quote or d == "\n":
                    if d == "\n":
                        mask[i - 1] = 0
                    break
        else:
            i += 1
    return mask


def _match_paren(text: str, mask: bytearray, open_idx: int) -> int:
    """Index of the ')' matching text[open_idx] == '(', or -1."""
    depth = 0
    for i in range(open_idx, len(text)):
        if mask[i]:
            continue
        c = text[i]
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth == 0:
                return i
    return -1


def _match_brace(text: str, mask: bytearray, open_idx: int) -> int:
    depth = 0
    for i in range(open_idx, len(text)):
        if mask[i]:
            continue
        c = text[i]
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
            if depth == 0:
                return i
    return -1


def _line_starts(text: str) -> list[int]:
    starts = [0]
    for i, c in enumerate(text):
        if c == "\n":
            starts.append(i + 1)
    return starts


def _line_of(starts: list[int], offset: int) -> int:
    return bisect_right(starts, offset)


# ---------------------------------------------------------------------------
# Message decomposition
# ---------------------------------------------------------------------------

# %-conversions treated as substitution sites; %% and %n are not.
_PERCENT_RE = re.compile(r"%[-+ #0,(]*\d*(?:\.\d+)?[sSdfxXeEgGoObBcChHaA]")


def _scan_markers(static_text: str, base: int = 0) -> list[Placeholder]:
    """Find {} and %-style markers in one literal fragment."""
    found: list[Placeholder] = []
    i, n = 0, len(static_text)
    while i < n:
        c = static_text[i]
        if c == "{" and i + 1 < n and static_text[i + 1] == "}":
            found.append(Placeholder(PlaceholderKind.BRACE, base + i, "{}"))
            i += 2
        elif c == "%":
            if i + 1 < n and static_text[i + 1] == "%":
                i += 2
                continue
            m = _PERCENT_RE.match(static_text, i)
            if m:
                found.append(Placeholder(PlaceholderKind.PERCENT, base + i, m.group()))
                i = m.end()
            else:
                i += 1
        else:
            i += 1
    return found


@dataclass(frozen=True)
class _Fragment:
    """One top-level piece of a format expression: a literal or an expression."""
    is_literal: bool
    text: str              # literal content (between quotes) or expression text
    span: tuple[int, int]  # span of `text` within the format expression


def _split_format_expr(expr: str) -> list[_Fragment] | None:
    """Split a concatenation chain into literal/expression fragments.

    Returns None when the expression holds no top-level string literal.
    """
    mask = _literal_mask(expr)
    # cut points: top-level '+' outside literals and parens
    cuts = []
    depth = 0
    for i, c in enumerate(expr):
        if mask[i]:
            continue
        if c in "([":
            depth += 1
        elif c in ")]":
            depth -= 1
        elif c == "+" and depth == 0:
            # unary +/++ never separates string concat operands in practice;
            # treat every top-level + as a cut, which is right for chains
            cuts.append(i)
    pieces: list[tuple[int, int]] = []
    prev = 0
    for cut in cuts:
        pieces.append((prev, cut))
        prev = cut + 1
    pieces.append((prev, len(expr)))

    frags: list[_Fragment] = []
    saw_literal = False
    for a, b in pieces:
        piece = expr[a:b]
        stripped = piece.strip()
        if not stripped:
            continue
        lead = a + (len(piece) - len(piece.lstrip()))
        if stripped.startswith('"') and stripped.endswith('"') and len(stripped) >= 2:
            saw_literal = True
            frags.append(_Fragment(True, stripped[1:-1], (lead + 1, lead + 1 + len(stripped) - 2)))
        else:
            frags.append(_Fragment(False, stripped, (lead, lead + len(stripped))))
    if not saw_literal:
        return None
    return frags


def decompose_message(format_expr: str, args: list[str]) -> tuple[
        str, tuple[Placeholder, ...], tuple[str, ...]]:
    """Decompose a format expression plus trailing arguments.

    `format_expr` is the argument's source text: a string literal, a
    concatenation chain, or (tolerated) bare literal content with no quotes.
    Returns (static_text, placeholders, variables). Concatenated non-literal
    fragments become CONCAT placeholders whose expression joins `variables`
    at the placeholder's position; {} and %-markers consume `args` in order;
    unconsumed args are appended (an arity mismatch, recorded by the caller).
    """
    if '"' not in format_expr:
        frags: list[_Fragment] | None = [
            _Fragment(True, format_expr, (0, len(format_expr)))]
    else:
        frags = _split_format_expr(format_expr)
    if frags is None:
        return "", (), tuple(args)

    static_parts: list[str] = []
    placeholders: list[Placeholder] = []
    concat_exprs: list[tuple[int, str]] = []  # (position in placeholders, expr)
    offset = 0
    for frag in frags:
        if frag.is_literal:
            placeholders.extend(_scan_markers(frag.text, offset))
            static_parts.append(frag.text)
            offset += len(frag.text)
        else:
            concat_exprs.append((len(placeholders), frag.text))
            placeholders.append(Placeholder(PlaceholderKind.CONCAT, offset, ""))

    variables: list[str] = []
    arg_iter = iter(args)
    concat_map = dict(concat_exprs)
    for idx, ph in enumerate(placeholders):
        if ph.kind is PlaceholderKind.CONCAT:
            variables.append(concat_map[idx])
        else:
            nxt = next(arg_iter, None)
            if nxt is not None:
                variables.append(nxt)
    variables.extend(arg_iter)
    return "".join(static_parts), tuple(placeholders), tuple(variables)


# ---------------------------------------------------------------------------
# Statement scanning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParsedStatement:
    """A statement plus the source spans synthesis needs to edit it."""

    statement: LoggingStatement
    # (static_start, static_end, raw_start, raw_end) per literal fragment;
    # static offsets index static_text, raw offsets index raw_text
    literal_fragments: tuple[tuple[int, int, int, int], ...]
    # raw_text span of each variables[i]
    variable_spans: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class _Call:
    start: int          # receiver start (offset into the scanned text)
    end: int            # one past ';' (or ')' when no semicolon follows)
    level: LogLevel
    arg_spans: tuple[tuple[int, int], ...]
    degraded: bool


def _build_call_re(config: ParserConfig) -> re.Pattern[str]:
    recv = "|".join(re.escape(r) for r in sorted(config.logger_receivers))
    return re.compile(rf"(?<![\w$])(?:{recv})\s*\.\s*([A-Za-z_$][\w$]*)\s*\(")


def _scan_calls(stripped: str, mask: bytearray, config: ParserConfig) -> list[_Call]:
    calls: list[_Call] = []
    call_re = _build_call_re(config)
    pos = 0
    n = len(stripped)
    while pos < n:
        m = call_re.search(stripped, pos)
        if not m:
            break
        if mask[m.start()]:
            pos = m.start() + 1
            continue
        level = config.level_methods.get(m.group(1).lower())
        if level is None:
            pos = m.end()
            continue
        open_idx = m.end() - 1
        close = _match_paren(stripped, mask, open_idx)
        if close < 0:
            # unterminated argument list: degrade to end of line
            eol = stripped.find("\n", open_idx)
            end = eol if eol >= 0 else n
            calls.append(_Call(m.start(), end, level, (), True))
            pos = end
            continue
        # split top-level commas
        spans: list[tuple[int, int]] = []
        depth = 0
        a = open_idx + 1
        for i in range(open_idx + 1, close):
            if mask[i]:
                continue
            c = stripped[i]
            if c in "([{":
                depth += 1
            elif c in ")]}":
                depth -= 1
            elif c == "," and depth == 0:
                spans.append((a, i))
                a = i + 1
        if close > open_idx + 1:
            spans.append((a, close))
        end = close + 1
        if end < n and stripped[end] == ";":
            end += 1
        calls.append(_Call(m.start(), end, level, tuple(spans), False))
        pos = end
    return calls


def _trimmed(span: tuple[int, int], text: str) -> tuple[int, int]:
    a, b = span
    while a < b and text[a].isspace():
        a += 1
    while b > a and text[b - 1].isspace():
        b -= 1
    return a, b


def _build_statement(original: str, stripped: str, call: _Call, path: str,
                     base_line: int, starts: list[int],
                     method_id: str) -> ParsedStatement:
    """Decompose one scanned call.

    Argument analysis runs on the comment-stripped text so comments inside
    the argument list cannot corrupt the decomposition; raw_text is sliced
    from the original source (offsets are interchangeable, stripping keeps
    lengths).
    """
    raw_text = original[call.start:call.end]
    start_line = base_line + _line_of(starts, call.start) - 1
    end_line = base_line + _line_of(starts, max(call.start, call.end - 1)) - 1
    loc = SourceLocation(path, start_line, end_line)
    sid = statement_id(path, start_line, end_line, raw_text)

    if call.degraded or not call.arg_spans:
        stmt = LoggingStatement(
            id=sid, level=call.level, static_text="", placeholders=(),
            variables=(), raw_text=raw_text, location=loc,
            method_id=method_id, parse_degraded=True)
        return ParsedStatement(stmt, (), ())

    # the format is the first argument containing a top-level string literal
    arg_texts = []
    for span in call.arg_spans:
        a, b = _trimmed(span, stripped)
        arg_texts.append((a, b, stripped[a:b]))
    fmt_idx = None
    frags = None
    for i, (_, _, arg) in enumerate(arg_texts):
        if '"' in arg:
            split = _split_format_expr(arg)
            if split is not None:
                fmt_idx = i
                frags = split
                break
    if fmt_idx is None:
        stmt = LoggingStatement(
            id=sid, level=call.level, static_text="", placeholders=(),
            variables=(), raw_text=raw_text, location=loc,
            method_id=method_id, parse_degraded=True)
        return ParsedStatement(stmt, (), ())

    fmt_start = arg_texts[fmt_idx][0]
    static_parts: list[str] = []
    placeholders: list[Placeholder] = []
    fragments: list[tuple[int, int, int, int]] = []
    # queues for variable binding: concat expressions keyed by placeholder slot
    concat_map: dict[int, tuple[str, tuple[int, int]]] = {}
    offset = 0
    for frag in frags:
        raw_a = fmt_start + frag.span[0] - call.start
        raw_b = fmt_start + frag.span[1] - call.start
        if frag.is_literal:
            placeholders.extend(_scan_markers(frag.text, offset))
            fragments.append((offset, offset + len(frag.text), raw_a, raw_b))
            static_parts.append(frag.text)
            offset += len(frag.text)
        else:
            concat_map[len(placeholders)] = (frag.text, (raw_a, raw_b))
            placeholders.append(Placeholder(PlaceholderKind.CONCAT, offset, ""))

    trailing = [(a - call.start, b - call.start, arg)
                for (a, b, arg) in arg_texts[fmt_idx + 1:]]
    variables: list[str] = []
    var_spans: list[tuple[int, int]] = []
    t = 0
    for idx, ph in enumerate(placeholders):
        if ph.kind is PlaceholderKind.CONCAT:
            expr, span = concat_map[idx]
            variables.append(expr)
            var_spans.append(span)
        elif t < len(trailing):
            a, b, arg = trailing[t]
            variables.append(arg)
            var_spans.append((a, b))
            t += 1
    for a, b, arg in trailing[t:]:
        variables.append(arg)
        var_spans.append((a, b))

    stmt = LoggingStatement(
        id=sid, level=call.level, static_text="".join(static_parts),
        placeholders=tuple(placeholders), variables=tuple(variables),
        raw_text=raw_text, location=loc, method_id=method_id)
    return ParsedStatement(stmt, tuple(fragments), tuple(var_spans))


# ---------------------------------------------------------------------------
# Method extraction
# ---------------------------------------------------------------------------

_IDENT_PAREN_RE = re.compile(r"([A-Za-z_$][\w$]*)\s*\(")
_THROWS_RE = re.compile(r"\s*throws\s+[\w$.\s,<>]*")
_CLASS_RE = re.compile(r"\b(?:class|interface|enum)\s+([A-Za-z_$][\w$]*)")
_NOT_A_METHOD = {
    "if", "for", "while", "switch", "catch", "return", "new", "do", "else",
    "try", "finally", "throw", "assert", "super", "this", "synchronized",
}


def _prev_word(text: str, idx: int) -> str:
    j = idx
    while j > 0 and text[j - 1].isspace():
        j -= 1
    i = j
    while i > 0 and (text[i - 1].isalnum() or text[i - 1] in "_$"):
        i -= 1
    return text[i:j]


@dataclass(frozen=True)
class _MethodSpan:
    name: str
    header_start: int
    open_brace: int
    close_brace: int


def _scan_method_spans(stripped: str, mask: bytearray, path: str,
                       starts: list[int],
                       errors: list[UnbalancedBraces]) -> list[_MethodSpan]:
    spans: list[_MethodSpan] = []
    for m in _IDENT_PAREN_RE.finditer(stripped):
        if mask[m.start()]:
            continue
        name = m.group(1)
        if name in _NOT_A_METHOD:
            continue
        k = m.start()
        while k > 0 and stripped[k - 1].isspace():
            k -= 1
        if k > 0 and stripped[k - 1] in ".@":
            continue  # method call or annotation
        if _prev_word(stripped, m.start()) in ("new", "record"):
            continue
        close = _match_paren(stripped, mask, m.end() - 1)
        if close < 0:
            continue
        after = close + 1
        tm = _THROWS_RE.match(stripped, after)
        if tm:
            after = tm.end()
        while after < len(stripped) and stripped[after].isspace():
            after += 1
        if after >= len(stripped) or stripped[after] != "{":
            continue
        body_close = _match_brace(stripped, mask, after)
        if body_close < 0:
            errors.append(UnbalancedBraces(
                path, _line_of(starts, after), f"method {name}"))
            continue
        header_start = stripped.rfind("\n", 0, m.start()) + 1
        spans.append(_MethodSpan(name, header_start, after, body_close))
    return spans


def _scan_class_spans(stripped: str, mask: bytearray) -> list[tuple[str, int, int]]:
    out = []
    for m in _CLASS_RE.finditer(stripped):
        if mask[m.start()]:
            continue
        open_idx = stripped.find("{", m.end())
        if open_idx < 0:
            continue
        close = _match_brace(stripped, mask, open_idx)
        if close < 0:
            continue
        out.append((m.group(1), open_idx, close))
    return out


@dataclass
class ExtractionResult:
    records: list[tuple[MethodContext, list[ParsedStatement]]]
    errors: list[UnbalancedBraces]

    @property
    def methods(self) -> list[MethodContext]:
        return [ctx for ctx, _ in self.records]

    @property
    def statements(self) -> list[LoggingStatement]:
        return [p.statement for _, parsed in self.records for p in parsed]


def extract_file(source: str, path: str, config: ParserConfig | None = None,
                 project_id: str = "", base_line: int = 1) -> ExtractionResult:
    """Extract every method that contains at least one logging statement.

    Statements attribute to the innermost enclosing named method; methods
    without statements are dropped. Never raises on malformed input.
    """
    config = config or ParserConfig()
    stripped = strip_comments(source)
    mask = _literal_mask(stripped)
    starts = _line_starts(stripped)
    errors: list[UnbalancedBraces] = []

    method_spans = _scan_method_spans(stripped, mask, path, starts, errors)
    class_spans = _scan_class_spans(stripped, mask)
    calls = _scan_calls(stripped, mask, config)

    # innermost-span attribution
    grouped: dict[int, list[_Call]] = {}
    for call in calls:
        best = None
        best_size = None
        for i, ms in enumerate(method_spans):
            if ms.open_brace < call.start and call.start < ms.close_brace:
                size = ms.close_brace - ms.open_brace
                if best_size is None or size < best_size:
                    best, best_size = i, size
        if best is not None:
            grouped.setdefault(best, []).append(call)

    records: list[tuple[MethodContext, list[ParsedStatement]]] = []
    for i in sorted(grouped):
        ms = method_spans[i]
        start_line = base_line + _line_of(starts, ms.header_start) - 1
        end_line = base_line + _line_of(starts, ms.close_brace) - 1
        if end_line - start_line + 1 > config.max_method_lines:
            errors.append(UnbalancedBraces(
                path, start_line, f"method {ms.name} exceeds line cap, skipped"))
            continue
        source_text = source[ms.header_start:ms.close_brace + 1]
        enclosing = [name for name, o, c in class_spans
                     if o < ms.header_start and ms.close_brace < c]
        qualified = ".".join(enclosing + [ms.name])
        method_id = content_hash(path, f"{start_line}-{end_line}", source_text)
        parsed: list[ParsedStatement] = []
        for call in sorted(grouped[i], key=lambda c: c.start):
            parsed.append(_build_statement(
                source, stripped, call, path, base_line, starts, method_id))
        context = MethodContext(
            method_id=method_id,
            project_id=project_id,
            qualified_name=qualified,
            source_text=source_text,
            statement_ids=tuple(p.statement.id for p in parsed),
            location=SourceLocation(path, start_line, end_line),
        )
        records.append((context, parsed))
    return ExtractionResult(records, errors)


def extract_methods(source: str, path: str,
                    config: ParserConfig | None = None,
                    project_id: str = "") -> list[MethodContext]:
    return extract_file(source, path, config, project_id).methods


def find_logging_statements(method: MethodContext,
                            config: ParserConfig | None = None) -> list[LoggingStatement]:
    """Re-derive the method's own statements from its source text.

    Produces the same ids extract_file assigned: the method source starts at
    the header's line start, so line numbers line up with file coordinates.
    Statements inside nested named methods are excluded here too.
    """
    result = extract_file(method.source_text, method.location.path, config,
                          method.project_id, base_line=method.location.start_line)
    if not result.records:
        return []
    # the outermost span in the isolated text is the method itself
    ctx, parsed = result.records[0]
    return [
        LoggingStatement(
            id=p.statement.id, level=p.statement.level,
            static_text=p.statement.static_text,
            placeholders=p.statement.placeholders,
            variables=p.statement.variables, raw_text=p.statement.raw_text,
            location=p.statement.location, method_id=method.method_id,
            parse_degraded=p.statement.parse_degraded)
        for p in parsed
    ]


def parse_statement_text(raw: str, config: ParserConfig | None = None,
                         path: str = "<text>", base_line: int = 1) -> ParsedStatement | None:
    """Parse one statement from bare text (no enclosing method required).

    Returns None when the text contains no recognizable logger call.
    """
    config = config or ParserConfig()
    text = raw.strip()
    stripped = strip_comments(text)
    mask = _literal_mask(stripped)
    starts = _line_starts(stripped)
    calls = _scan_calls(stripped, mask, config)
    if not calls:
        return None
    return _build_statement(text, stripped, calls[0], path, base_line, starts,
                            method_id="")


def render_statement(parsed: ParsedStatement) -> str:
    """Rebuild a statement's raw text from its parsed pieces.

    Every literal fragment and bound variable is spliced back into its
    recorded raw span; a byte-identical result is the invariant that proves
    the span bookkeeping. Degraded statements carry no spans and render as
    their raw text unchanged.
    """
    stmt = parsed.statement
    raw = stmt.raw_text
    edits: list[tuple[int, int, str]] = []
    for ss, se, rs, re_ in parsed.literal_fragments:
        edits.append((rs, re_, stmt.static_text[ss:se]))
    for (rs, re_), var in zip(parsed.variable_spans, stmt.variables):
        edits.append((rs, re_, var))
    edits.sort()
    out: list[str] = []
    pos = 0
    for rs, re_, piece in edits:
        if rs < pos:
            raise ValueError("overlapping spans in parsed statement")
        out.append(raw[pos:rs])
        out.append(piece)
        pos = re_
    out.append(raw[pos:])
    return "".join(out)


# ---------------------------------------------------------------------------
# Scope inspection (used by the synthesizer's variable swaps)
# ---------------------------------------------------------------------------

_PRIMITIVES = {"int", "long", "short", "byte", "boolean", "double", "float",
               "char", "var", "String"}
_LOCAL_DECL_RE = re.compile(
    r"(?m)^\s*(?:final\s+)?"
    r"(?:[A-Z][\w$]*(?:<[^;=\n]*?>)?(?:\[\])*|int|long|short|byte|boolean|double|float|char|var)"
    r"(?:\[\])*\s+([a-z_$][\w$]*)\s*[=;:]")
_FOR_DECL_RE = re.compile(
    r"\bfor\s*\(\s*(?:final\s+)?[\w$.<>\[\],\s]+?\s+([a-z_$][\w$]*)\s*[:=]")


def _split_params(params: str) -> list[str]:
    """Parameter names from a signature's parenthesized parameter list."""
    names: list[str] = []
    depth = 0
    piece = []
    pieces: list[str] = []
    for c in params:
        if c in "<([":
            depth += 1
        elif c in ">)]":
            depth -= 1
        if c == "," and depth == 0:
            pieces.append("".join(piece))
            piece = []
        else:
            piece.append(c)
    pieces.append("".join(piece))
    for p in pieces:
        p = p.strip()
        if not p:
            continue
        toks = re.findall(r"[A-Za-z_$][\w$]*", p)
        if len(toks) >= 2:
            names.append(toks[-1])
    return names


def collect_scope_identifiers(method_source: str) -> list[str]:
    """Parameter and local-variable names visible inside a method, in order."""
    stripped = strip_comments(method_source)
    open_brace = stripped.find("{")
    header = stripped[:open_brace] if open_brace >= 0 else stripped
    body = stripped[open_brace:] if open_brace >= 0 else ""
    names: list[str] = []
    lp = header.find("(")
    rp = header.rfind(")")
    if 0 <= lp < rp:
        names.extend(_split_params(header[lp + 1:rp]))
    for m in _LOCAL_DECL_RE.finditer(body):
        names.append(m.group(1))
    for m in _FOR_DECL_RE.finditer(body):
        names.append(m.group(1))
    seen = set()
    out = []
    for n in names:
        if n not in seen and n not in _PRIMITIVES:
            seen.add(n)
            out.append(n)
    return out
