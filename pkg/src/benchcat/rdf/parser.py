"""Parsers for Turtle, TriG, N-Triples, and N-Quads.

One hand-written tokenizer serves all four syntaxes; a recursive-descent
parser handles the Turtle/TriG grammar (TriG is a superset of Turtle, so a
single parser with graph support switched off covers Turtle), and a strict
line-oriented parser covers N-Triples/N-Quads.

Every diagnostic carries a 1-based line and column. Blank node labels are
kept as written; anonymous nodes get generated labels containing ``#``,
which the blank-node-label grammar cannot produce, so they never collide.
"""

from __future__ import annotations

from ..errors import EncodingError, RdfSyntaxError, RelativeIriError
from .terms import (
    DEFAULT_GRAPH,
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    BlankNode,
    GraphName,
    Iri,
    Literal,
    Quad,
    RdfDataset,
    RdfFormat,
    is_absolute_iri,
)

# ---------------------------------------------------------------------------
# IRI reference resolution (RFC 3986 section 5), scheme-agnostic.
# urllib.parse.urljoin keeps a scheme allow-list and mishandles e.g. urn:,
# so the merge algorithm is spelled out here.
# ---------------------------------------------------------------------------


def _split_iri(iri: str) -> tuple[str | None, str | None, str, str | None, str | None]:
    scheme = None
    rest = iri
    for i, c in enumerate(iri):
        if c == ":" and i > 0:
            head = iri[:i]
            if head[0].isascii() and head[0].isalpha() and all(
                ch.isascii() and (ch.isalnum() or ch in "+-.") for ch in head
            ):
                scheme, rest = head, iri[i + 1 :]
            break
        if c in "/?#":
            break
    fragment = None
    if "#" in rest:
        rest, fragment = rest.split("#", 1)
    query = None
    if "?" in rest:
        rest, query = rest.split("?", 1)
    authority = None
    if rest.startswith("//"):
        tail = rest[2:]
        cut = len(tail)
        for i, c in enumerate(tail):
            if c == "/":
                cut = i
                break
        authority, rest = tail[:cut], tail[cut:]
    return scheme, authority, rest, query, fragment


def _remove_dot_segments(path: str) -> str:
    output: list[str] = []
    while path:
        if path.startswith("../"):
            path = path[3:]
        elif path.startswith("./"):
            path = path[2:]
        elif path.startswith("/./"):
            path = "/" + path[3:]
        elif path == "/.":
            path = "/"
        elif path.startswith("/../"):
            path = "/" + path[4:]
            if output:
                output.pop()
        elif path == "/..":
            path = "/"
            if output:
                output.pop()
        elif path in (".", ".."):
            path = ""
        else:
            cut = path.find("/", 1)
            if cut == -1:
                output.append(path)
                path = ""
            else:
                output.append(path[:cut])
                path = path[cut:]
    return "".join(output)


def resolve_iri(base: str, ref: str) -> str:
    """Resolve ``ref`` against absolute ``base`` per RFC 3986."""
    r_scheme, r_auth, r_path, r_query, r_frag = _split_iri(ref)
    b_scheme, b_auth, b_path, b_query, _ = _split_iri(base)
    if r_scheme is not None:
        scheme, auth, path, query = r_scheme, r_auth, _remove_dot_segments(r_path), r_query
    else:
        scheme = b_scheme
        if r_auth is not None:
            auth, path, query = r_auth, _remove_dot_segments(r_path), r_query
        elif not r_path:
            auth, path = b_auth, b_path
            query = r_query if r_query is not None else b_query
        else:
            auth = b_auth
            if r_path.startswith("/"):
                path = _remove_dot_segments(r_path)
            elif b_auth is not None and not b_path:
                path = _remove_dot_segments("/" + r_path)
            else:
                merged = b_path[: b_path.rfind("/") + 1] + r_path
                path = _remove_dot_segments(merged)
            query = r_query
    out = ""
    if scheme is not None:
        out += scheme + ":"
    if auth is not None:
        out += "//" + auth
    out += path
    if query is not None:
        out += "?" + query
    if r_frag is not None:
        out += "#" + r_frag
    return out


# ---------------------------------------------------------------------------
# Character classes from the W3C grammars.
# ---------------------------------------------------------------------------


def _is_pn_chars_base(c: str) -> bool:
    o = ord(c)
    return (
        ("A" <= c <= "Z")
        or ("a" <= c <= "z")
        or 0xC0 <= o <= 0xD6
        or 0xD8 <= o <= 0xF6
        or 0xF8 <= o <= 0x2FF
        or 0x370 <= o <= 0x37D
        or 0x37F <= o <= 0x1FFF
        or 0x200C <= o <= 0x200D
        or 0x2070 <= o <= 0x218F
        or 0x2C00 <= o <= 0x2FEF
        or 0x3001 <= o <= 0xD7FF
        or 0xF900 <= o <= 0xFDCF
        or 0xFDF0 <= o <= 0xFFFD
        or 0x10000 <= o <= 0xEFFFF
    )


def _is_pn_chars_u(c: str) -> bool:
    return c == "_" or _is_pn_chars_base(c)


def _is_pn_chars(c: str) -> bool:
    o = ord(c)
    return (
        _is_pn_chars_u(c)
        or c == "-"
        or "0" <= c <= "9"
        or o == 0xB7
        or 0x300 <= o <= 0x36F
        or 0x203F <= o <= 0x2040
    )


_PN_LOCAL_ESC = set("_~.-!$&'()*+,;=/?#@%")
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_HEX = set("0123456789abcdefABCDEF")
# IRIREF forbids these outside escapes; after unescaping they stay illegal.
_IRI_FORBIDDEN = set('<>"{}|^`\\') | {chr(c) for c in range(0x21)}


class Token:
    __slots__ = ("type", "value", "line", "col")

    def __init__(self, type_: str, value, line: int, col: int):
        self.type = type_
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self) -> str:
        return f"Token({self.type}, {self.value!r}, {self.line}:{self.col})"


# Token types. Single-character punctuation uses the character itself.
IRIREF = "IRIREF"
PNAME = "PNAME"
BLANK = "BLANK"
STRING = "STRING"
INTEGER = "INTEGER"
DECIMAL = "DECIMAL"
DOUBLE = "DOUBLE"
LANGTAG = "LANGTAG"
HATHAT = "^^"
KW_A = "a"
KW_TRUE = "true"
KW_FALSE = "false"
AT_PREFIX = "@prefix"
AT_BASE = "@base"
SPARQL_PREFIX = "PREFIX"
SPARQL_BASE = "BASE"
KW_GRAPH = "GRAPH"
EOF = "EOF"


class _Tokenizer:
    """Produces tokens for the Turtle family.

    ``simple`` restricts the accepted token set to the N-Triples/N-Quads
    grammar: no prefixed names, keywords, numbers, or fancy string quoting.
    """

    def __init__(self, text: str, simple: bool = False, line: int = 1):
        self.text = text
        self.n = len(text)
        self.pos = 0
        self.line = line
        self.col = 1
        self.simple = simple

    def _cur(self) -> str:
        return self.text[self.pos] if self.pos < self.n else ""

    def _ahead(self, offset: int) -> str:
        i = self.pos + offset
        return self.text[i] if i < self.n else ""

    def _advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.pos < self.n:
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def _error(self, message: str, line: int | None = None, col: int | None = None):
        raise RdfSyntaxError(message, line if line is not None else self.line,
                             col if col is not None else self.col)

    def _skip_ws_and_comments(self) -> None:
        while self.pos < self.n:
            c = self.text[self.pos]
            if c in " \t\r\n":
                self._advance()
            elif c == "#":
                while self.pos < self.n and self.text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def next_token(self) -> Token:
        self._skip_ws_and_comments()
        line, col = self.line, self.col
        c = self._cur()
        if not c:
            return Token(EOF, None, line, col)
        if c == "<":
            return self._scan_iriref(line, col)
        if c == '"' or c == "'":
            return self._scan_string(line, col)
        if c == "_":
            return self._scan_blank(line, col)
        if c == "@":
            return self._scan_at(line, col)
        if c == "^":
            if self._ahead(1) == "^":
                self._advance(2)
                return Token(HATHAT, None, line, col)
            self._error("expected '^^'")
        if c == ".":
            if self._ahead(1).isascii() and self._ahead(1).isdigit():
                return self._scan_number(line, col)
            self._advance()
            return Token(".", None, line, col)
        if c in ";,()[]{}":
            self._advance()
            return Token(c, None, line, col)
        if (c.isascii() and c.isdigit()) or c in "+-":
            return self._scan_number(line, col)
        if c == ":" or _is_pn_chars_base(c):
            return self._scan_pname_or_keyword(line, col)
        self._error(f"unexpected character {c!r}")

    # -- scanners ----------------------------------------------------------

    def _scan_uchar(self) -> str:
        # positioned on '\\'; caller verified next is 'u' or 'U'
        self._advance()
        kind = self._cur()
        self._advance()
        width = 4 if kind == "u" else 8
        digits = self.text[self.pos : self.pos + width]
        if len(digits) < width or any(d not in _HEX for d in digits):
            self._error(f"malformed \\{kind} escape")
        self._advance(width)
        cp = int(digits, 16)
        if 0xD800 <= cp <= 0xDFFF:
            self._error("surrogate code point in escape")
        if cp > 0x10FFFF:
            self._error("code point out of range in escape")
        return chr(cp)

    def _scan_iriref(self, line: int, col: int) -> Token:
        self._advance()  # '<'
        out: list[str] = []
        while True:
            c = self._cur()
            if not c:
                self._error("unterminated IRI", line, col)
            if c == ">":
                self._advance()
                break
            if c == "\\":
                if self._ahead(1) in ("u", "U"):
                    out.append(self._scan_uchar())
                    continue
                self._error("only \\u and \\U escapes are allowed in IRIs")
            if c in _IRI_FORBIDDEN:
                self._error(f"character {c!r} not allowed in IRI")
            out.append(c)
            self._advance()
        value = "".join(out)
        bad = _IRI_FORBIDDEN.intersection(value)
        if bad:
            self._error(f"escaped character {sorted(bad)[0]!r} not allowed in IRI", line, col)
        return Token(IRIREF, value, line, col)

    def _scan_string(self, line: int, col: int) -> Token:
        q = self._cur()
        long_form = self.text[self.pos : self.pos + 3] == q * 3
        if self.simple and (q == "'" or long_form):
            self._error("this string form is not allowed in N-Triples/N-Quads")
        if long_form:
            return self._scan_long_string(q, line, col)
        self._advance()
        out: list[str] = []
        while True:
            c = self._cur()
            if not c:
                self._error("unterminated string", line, col)
            if c == q:
                self._advance()
                return Token(STRING, "".join(out), line, col)
            if c in "\n\r":
                self._error("newline in string literal")
            if c == "\\":
                nxt = self._ahead(1)
                if nxt in ("u", "U"):
                    out.append(self._scan_uchar())
                elif nxt in _ECHAR:
                    out.append(_ECHAR[nxt])
                    self._advance(2)
                else:
                    self._error(f"unknown escape '\\{nxt}'")
                continue
            out.append(c)
            self._advance()

    def _scan_long_string(self, q: str, line: int, col: int) -> Token:
        self._advance(3)
        out: list[str] = []
        while True:
            if self.pos >= self.n:
                self._error("unterminated string", line, col)
            if self.text[self.pos : self.pos + 3] == q * 3:
                if self._ahead(3) == q:
                    out.append(q)
                    self._advance()
                    continue
                self._advance(3)
                return Token(STRING, "".join(out), line, col)
            c = self._cur()
            if c == "\\":
                nxt = self._ahead(1)
                if nxt in ("u", "U"):
                    out.append(self._scan_uchar())
                elif nxt in _ECHAR:
                    out.append(_ECHAR[nxt])
                    self._advance(2)
                else:
                    self._error(f"unknown escape '\\{nxt}'")
                continue
            out.append(c)
            self._advance()

    def _scan_blank(self, line: int, col: int) -> Token:
        if self._ahead(1) != ":":
            self._error("expected ':' after '_'")
        self._advance(2)
        c = self._cur()
        if not (c and (_is_pn_chars_u(c) or ("0" <= c <= "9"))):
            self._error("blank node label must start with a letter, digit, or '_'")
        out = [c]
        self._advance()
        while True:
            c = self._cur()
            if c and _is_pn_chars(c):
                out.append(c)
                self._advance()
            elif c == ".":
                run = 0
                while self._ahead(run) == ".":
                    run += 1
                nxt = self._ahead(run)
                if nxt and _is_pn_chars(nxt):
                    out.append("." * run)
                    self._advance(run)
                else:
                    break
            else:
                break
        return Token(BLANK, "".join(out), line, col)

    def _scan_at(self, line: int, col: int) -> Token:
        self._advance()
        parts: list[str] = []
        first = []
        while self._cur().isascii() and self._cur().isalpha():
            first.append(self._cur())
            self._advance()
        if not first:
            self._error("malformed language tag")
        parts.append("".join(first))
        while self._cur() == "-":
            self._advance()
            sub = []
            while self._cur().isascii() and self._cur().isalnum():
                sub.append(self._cur())
                self._advance()
            if not sub:
                self._error("malformed language tag")
            parts.append("".join(sub))
        value = "-".join(parts)
        if not self.simple and len(parts) == 1:
            if value == "prefix":
                return Token(AT_PREFIX, None, line, col)
            if value == "base":
                return Token(AT_BASE, None, line, col)
        return Token(LANGTAG, value, line, col)

    def _scan_number(self, line: int, col: int) -> Token:
        if self.simple:
            self._error("numeric literals are not allowed in N-Triples/N-Quads")
        start = self.pos
        if self._cur() in "+-":
            self._advance()
        int_digits = 0
        while self._cur().isascii() and self._cur().isdigit():
            int_digits += 1
            self._advance()
        mark = (self.pos, self.col)

        def _text_from(start_pos: int) -> str:
            return self.text[start_pos : self.pos]

        def _rewind() -> None:
            self.pos, self.col = mark

        frac_digits = 0
        if self._cur() == ".":
            self._advance()
            while self._cur().isascii() and self._cur().isdigit():
                frac_digits += 1
                self._advance()
        if self._cur() in "eE" and (int_digits or frac_digits):
            exp_mark = (self.pos, self.col)
            self._advance()
            if self._cur() in "+-":
                self._advance()
            exp_digits = 0
            while self._cur().isascii() and self._cur().isdigit():
                exp_digits += 1
                self._advance()
            if exp_digits:
                return Token(DOUBLE, _text_from(start), line, col)
            self.pos, self.col = exp_mark
        if frac_digits:
            return Token(DECIMAL, _text_from(start), line, col)
        _rewind()
        if int_digits:
            return Token(INTEGER, _text_from(start), line, col)
        self._error("malformed numeric literal", line, col)

    def _scan_pname_or_keyword(self, line: int, col: int) -> Token:
        if self.simple:
            self._error("prefixed names are not allowed in N-Triples/N-Quads")
        prefix_chars: list[str] = []
        if self._cur() != ":":
            prefix_chars.append(self._cur())
            self._advance()
            while True:
                c = self._cur()
                if c and _is_pn_chars(c):
                    prefix_chars.append(c)
                    self._advance()
                elif c == ".":
                    run = 0
                    while self._ahead(run) == ".":
                        run += 1
                    nxt = self._ahead(run)
                    if nxt and _is_pn_chars(nxt):
                        prefix_chars.append("." * run)
                        self._advance(run)
                    else:
                        break
                else:
                    break
        word = "".join(prefix_chars)
        if self._cur() != ":":
            if word == "a":
                return Token(KW_A, None, line, col)
            if word == "true":
                return Token(KW_TRUE, None, line, col)
            if word == "false":
                return Token(KW_FALSE, None, line, col)
            lowered = word.lower()
            if lowered == "prefix":
                return Token(SPARQL_PREFIX, None, line, col)
            if lowered == "base":
                return Token(SPARQL_BASE, None, line, col)
            if lowered == "graph":
                return Token(KW_GRAPH, None, line, col)
            self._error(f"unexpected token {word!r}", line, col)
        self._advance()  # ':'
        local = self._scan_pn_local()
        return Token(PNAME, (word, local), line, col)

    def _scan_pn_local(self) -> str:
        out: list[str] = []

        def _take_plx() -> bool:
            c = self._cur()
            if c == "%":
                h1, h2 = self._ahead(1), self._ahead(2)
                if h1 not in _HEX or h2 not in _HEX:
                    self._error("malformed %-sequence in prefixed name")
                out.append(c + h1 + h2)
                self._advance(3)
                return True
            if c == "\\":
                nxt = self._ahead(1)
                if nxt not in _PN_LOCAL_ESC:
                    self._error(f"character '\\{nxt}' cannot be escaped in a prefixed name")
                out.append(nxt)
                self._advance(2)
                return True
            return False

        c = self._cur()
        if not (c and (_is_pn_chars_u(c) or c == ":" or ("0" <= c <= "9") or c in "%\\")):
            return ""  # PNAME_NS form: empty local part
        if not _take_plx():
            out.append(c)
            self._advance()
        while True:
            c = self._cur()
            if c and (_is_pn_chars(c) or c == ":"):
                out.append(c)
                self._advance()
            elif c in ("%", "\\"):
                _take_plx()
            elif c == ".":
                run = 0
                while self._ahead(run) == ".":
                    run += 1
                nxt = self._ahead(run)
                if nxt and (_is_pn_chars(nxt) or nxt in ":%\\"):
                    out.append("." * run)
                    self._advance(run)
                else:
                    break
            else:
                break
        return "".join(out)


# ---------------------------------------------------------------------------
# Turtle / TriG recursive-descent parser.
# ---------------------------------------------------------------------------

_VERB_STARTERS = (IRIREF, PNAME, KW_A)
_SUBJECT_STARTERS = (IRIREF, PNAME, BLANK, "[", "(")


class _TurtleTrigParser:
    def __init__(self, text: str, fmt: RdfFormat, base: str | None):
        self._tz = _Tokenizer(text)
        self._allow_graphs = fmt is RdfFormat.TRIG
        self._base = base
        self._prefixes: dict[str, str] = {}
        self._quads: list[Quad] = []
        self._anon_counter = 0
        self._peeked: Token | None = None

    # -- token plumbing ------------------------------------------------------

    def _peek(self) -> Token:
        if self._peeked is None:
            self._peeked = self._tz.next_token()
        return self._peeked

    def _next(self) -> Token:
        tok = self._peek()
        self._peeked = None
        return tok

    def _expect(self, type_: str, what: str) -> Token:
        tok = self._next()
        if tok.type != type_:
            self._error(f"expected {what}", tok)
        return tok

    def _error(self, message: str, tok: Token):
        raise RdfSyntaxError(message, tok.line, tok.col)

    # -- entry ---------------------------------------------------------------

    def parse(self) -> RdfDataset:
        while True:
            tok = self._peek()
            if tok.type == EOF:
                break
            if tok.type == AT_PREFIX:
                self._next()
                self._directive_prefix(require_dot=True)
            elif tok.type == AT_BASE:
                self._next()
                self._directive_base(require_dot=True)
            elif tok.type == SPARQL_PREFIX:
                self._next()
                self._directive_prefix(require_dot=False)
            elif tok.type == SPARQL_BASE:
                self._next()
                self._directive_base(require_dot=False)
            elif tok.type == KW_GRAPH:
                if not self._allow_graphs:
                    self._error("GRAPH blocks are not allowed in Turtle", tok)
                self._next()
                label = self._graph_label()
                self._wrapped_graph(label)
            elif tok.type == "{":
                if not self._allow_graphs:
                    self._error("graph blocks are not allowed in Turtle", tok)
                self._wrapped_graph(DEFAULT_GRAPH)
            else:
                self._triples(DEFAULT_GRAPH, allow_graph_label=self._allow_graphs)
        return RdfDataset(self._quads, self._prefixes)

    # -- directives ------------------------------------------------------------

    def _directive_prefix(self, require_dot: bool) -> None:
        tok = self._next()
        if tok.type != PNAME or tok.value[1] != "":
            self._error("expected a prefix name ending in ':'", tok)
        prefix = tok.value[0]
        iri_tok = self._expect(IRIREF, "an IRI")
        self._prefixes[prefix] = self._resolve(iri_tok)
        if require_dot:
            self._expect(".", "'.'")

    def _directive_base(self, require_dot: bool) -> None:
        iri_tok = self._expect(IRIREF, "an IRI")
        self._base = self._resolve(iri_tok)
        if require_dot:
            self._expect(".", "'.'")

    # -- IRI handling ------------------------------------------------------------

    def _resolve(self, tok: Token) -> str:
        ref = tok.value
        if is_absolute_iri(ref):
            return ref
        if self._base is None:
            raise RelativeIriError(
                f"relative IRI {ref!r} in a document with no base", tok.line, tok.col
            )
        return resolve_iri(self._base, ref)

    def _make_iri(self, value: str, tok: Token) -> Iri:
        try:
            return Iri(value)
        except ValueError as exc:
            self._error(str(exc), tok)

    def _iri_term(self, tok: Token) -> Iri:
        if tok.type == IRIREF:
            return self._make_iri(self._resolve(tok), tok)
        if tok.type == PNAME:
            prefix, local = tok.value
            if prefix not in self._prefixes:
                self._error(f"undefined prefix '{prefix}:'", tok)
            return self._make_iri(self._prefixes[prefix] + local, tok)
        self._error("expected an IRI", tok)

    def _fresh_anon(self) -> BlankNode:
        node = BlankNode(f"anon#{self._anon_counter}")
        self._anon_counter += 1
        return node

    # -- graph blocks ------------------------------------------------------------

    def _graph_label(self) -> GraphName:
        tok = self._next()
        if tok.type in (IRIREF, PNAME):
            return self._iri_term(tok)
        if tok.type == BLANK:
            return BlankNode(tok.value)
        if tok.type == "[":
            self._expect("]", "']'")
            return self._fresh_anon()
        self._error("expected a graph label", tok)

    def _wrapped_graph(self, graph: GraphName) -> None:
        self._expect("{", "'{'")
        while True:
            tok = self._peek()
            if tok.type == "}":
                self._next()
                return
            self._triples(graph, allow_graph_label=False, in_block=True)

    # -- triples ------------------------------------------------------------

    def _triples(self, graph: GraphName, allow_graph_label: bool, in_block: bool = False) -> None:
        tok = self._peek()
        if tok.type in (IRIREF, PNAME, BLANK):
            self._next()
            if tok.type == BLANK:
                subject = BlankNode(tok.value)
            else:
                subject = self._iri_term(tok)
            if allow_graph_label and self._peek().type == "{":
                self._wrapped_graph(subject)
                return
            self._predicate_object_list(subject, graph)
        elif tok.type == "[":
            self._next()
            if self._peek().type == "]":
                self._next()
                subject = self._fresh_anon()
                if allow_graph_label and self._peek().type == "{":
                    self._wrapped_graph(subject)
                    return
                self._predicate_object_list(subject, graph)
            else:
                subject = self._fresh_anon()
                self._predicate_object_list(subject, graph)
                self._expect("]", "']'")
                if self._peek().type in _VERB_STARTERS:
                    self._predicate_object_list(subject, graph)
        elif tok.type == "(":
            subject = self._collection(graph)
            self._predicate_object_list(subject, graph)
        else:
            self._error("expected a subject", tok)
        self._statement_end(in_block)

    def _statement_end(self, in_block: bool) -> None:
        tok = self._peek()
        if tok.type == ".":
            self._next()
            return
        if in_block and tok.type == "}":
            return  # final '.' inside a graph block is optional
        self._error("expected '.'" + (" or '}'" if in_block else ""), tok)

    def _predicate_object_list(self, subject, graph: GraphName) -> None:
        self._verb_object_list(subject, graph)
        while self._peek().type == ";":
            while self._peek().type == ";":
                self._next()
            if self._peek().type in _VERB_STARTERS:
                self._verb_object_list(subject, graph)
            else:
                break

    def _verb_object_list(self, subject, graph: GraphName) -> None:
        tok = self._next()
        if tok.type == KW_A:
            predicate = RDF_TYPE
        elif tok.type in (IRIREF, PNAME):
            predicate = self._iri_term(tok)
        else:
            self._error("expected a predicate", tok)
        while True:
            obj = self._object(graph)
            self._quads.append(Quad(subject, predicate, obj, graph))
            if self._peek().type == ",":
                self._next()
            else:
                return

    def _object(self, graph: GraphName):
        tok = self._next()
        if tok.type in (IRIREF, PNAME):
            return self._iri_term(tok)
        if tok.type == BLANK:
            return BlankNode(tok.value)
        if tok.type == "[":
            if self._peek().type == "]":
                self._next()
                return self._fresh_anon()
            node = self._fresh_anon()
            self._predicate_object_list(node, graph)
            self._expect("]", "']'")
            return node
        if tok.type == "(":
            self._peeked = tok  # push back; _collection expects to consume '('
            return self._collection(graph)
        if tok.type == STRING:
            return self._literal_tail(tok.value)
        if tok.type == INTEGER:
            return Literal(tok.value, XSD_INTEGER)
        if tok.type == DECIMAL:
            return Literal(tok.value, XSD_DECIMAL)
        if tok.type == DOUBLE:
            return Literal(tok.value, XSD_DOUBLE)
        if tok.type == KW_TRUE:
            return Literal("true", XSD_BOOLEAN)
        if tok.type == KW_FALSE:
            return Literal("false", XSD_BOOLEAN)
        self._error("expected an object", tok)

    def _literal_tail(self, lexical: str) -> Literal:
        tok = self._peek()
        if tok.type == LANGTAG:
            self._next()
            return Literal(lexical, language=tok.value)
        if tok.type == HATHAT:
            self._next()
            dt_tok = self._next()
            if dt_tok.type not in (IRIREF, PNAME):
                self._error("expected a datatype IRI after '^^'", dt_tok)
            return Literal(lexical, self._iri_term(dt_tok))
        return Literal(lexical)

    def _collection(self, graph: GraphName):
        self._expect("(", "'('")
        elements = []
        while self._peek().type != ")":
            if self._peek().type == EOF:
                self._error("unterminated collection", self._peek())
            elements.append(self._object(graph))
        self._next()  # ')'
        if not elements:
            return RDF_NIL
        nodes = [self._fresh_anon() for _ in elements]
        for i, (node, element) in enumerate(zip(nodes, elements)):
            rest = nodes[i + 1] if i + 1 < len(nodes) else RDF_NIL
            self._quads.append(Quad(node, RDF_FIRST, element, graph))
            self._quads.append(Quad(node, RDF_REST, rest, graph))
        return nodes[0]


# ---------------------------------------------------------------------------
# N-Triples / N-Quads: strict, line-oriented.
# ---------------------------------------------------------------------------


def _nt_term(tz: _Tokenizer, tok: Token, base: str | None, positions: str):
    if tok.type == IRIREF:
        value = tok.value
        if not is_absolute_iri(value):
            if base is None:
                raise RelativeIriError(
                    f"relative IRI {value!r} in a document with no base", tok.line, tok.col
                )
            value = resolve_iri(base, value)
        try:
            return Iri(value)
        except ValueError as exc:
            raise RdfSyntaxError(str(exc), tok.line, tok.col)
    if tok.type == BLANK and "b" in positions:
        return BlankNode(tok.value)
    if tok.type == STRING and "l" in positions:
        nxt = tz.next_token()
        if nxt.type == LANGTAG:
            return Literal(tok.value, language=nxt.value), None
        if nxt.type == HATHAT:
            dt_tok = tz.next_token()
            if dt_tok.type != IRIREF:
                raise RdfSyntaxError("expected a datatype IRI after '^^'", dt_tok.line, dt_tok.col)
            dt = _nt_term(tz, dt_tok, base, "i")
            return Literal(tok.value, dt), None
        return Literal(tok.value), nxt
    raise RdfSyntaxError("unexpected term here", tok.line, tok.col)


def _parse_nt_nq(text: str, fmt: RdfFormat, base: str | None) -> RdfDataset:
    allow_graph = fmt is RdfFormat.NQUADS
    quads: list[Quad] = []
    for lineno, raw_line in enumerate(text.split("\n"), start=1):
        tz = _Tokenizer(raw_line, simple=True, line=lineno)
        tok = tz.next_token()
        if tok.type == EOF:
            continue
        if tok.type not in (IRIREF, BLANK):
            raise RdfSyntaxError("expected a subject", tok.line, tok.col)
        subject = _nt_term(tz, tok, base, "b")
        pred_tok = tz.next_token()
        if pred_tok.type != IRIREF:
            raise RdfSyntaxError("expected a predicate IRI", pred_tok.line, pred_tok.col)
        predicate = _nt_term(tz, pred_tok, base, "i")
        obj_tok = tz.next_token()
        if obj_tok.type not in (IRIREF, BLANK, STRING):
            raise RdfSyntaxError("expected an object", obj_tok.line, obj_tok.col)
        obj = _nt_term(tz, obj_tok, base, "bl")
        if isinstance(obj, tuple):
            obj, pending = obj
        else:
            pending = None
        tok = pending if pending is not None else tz.next_token()
        graph: GraphName = DEFAULT_GRAPH
        if tok.type in (IRIREF, BLANK):
            if not allow_graph:
                raise RdfSyntaxError("graph labels are not allowed in N-Triples", tok.line, tok.col)
            graph = _nt_term(tz, tok, base, "b")
            tok = tz.next_token()
        if tok.type != ".":
            raise RdfSyntaxError("expected '.'", tok.line, tok.col)
        tok = tz.next_token()
        if tok.type != EOF:
            raise RdfSyntaxError("unexpected content after '.'", tok.line, tok.col)
        quads.append(Quad(subject, predicate, obj, graph))
    return RdfDataset(quads)


# ---------------------------------------------------------------------------
# Public entry points.
# ---------------------------------------------------------------------------


def parse_document(
    data: bytes | str,
    format: RdfFormat,
    base: "Iri | str | None" = None,
    source: str | None = None,
) -> RdfDataset:
    """Parse one document in the given syntax into a dataset.

    ``base`` is required only when the document contains relative IRIs.
    ``source`` names the input in diagnostics (a file name, usually).
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EncodingError(f"invalid UTF-8 input: {exc}") from None
    else:
        text = data
    if text.startswith("\ufeff"):
        text = text[1:]
    base_str: str | None
    if base is None:
        base_str = None
    else:
        base_str = base.value if isinstance(base, Iri) else str(base)
        if not is_absolute_iri(base_str):
            raise ValueError(f"base IRI must be absolute: {base_str!r}")
    try:
        if format in (RdfFormat.TURTLE, RdfFormat.TRIG):
            dataset = _TurtleTrigParser(text, format, base_str).parse()
        else:
            dataset = _parse_nt_nq(text, format, base_str)
    except RdfSyntaxError as exc:
        if source is not None and exc.source is None:
            raise type(exc)(exc.message, exc.line, exc.column, source=source) from None
        raise
    if not format.supports_named_graphs and not dataset.default_graph_only():
        # unreachable for the grammar parsers, but guards programmatic misuse
        raise RdfSyntaxError("named graphs in a triples-only syntax", 1, 1)
    return dataset
