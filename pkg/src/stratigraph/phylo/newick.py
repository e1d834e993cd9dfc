"""Newick reader and writer.

Branch lengths carry origin-time differences.  The root's own branch
length is its origin time, so ``(A:5,B:5):5;`` is a root at time 5 with
two leaves at time 10.  Unquoted underscores read as blanks; labels that
need it are written in single quotes with embedded quotes doubled.
"""

from __future__ import annotations

import re

from .tree import PhyloTree, TreeError


class NewickError(ValueError):
    pass


_NEEDS_QUOTES = re.compile(r"[\s()\[\]':;,_]")


def _format_label(label: str | None) -> str:
    if not label:
        return ""
    if _NEEDS_QUOTES.search(label):
        return "'" + label.replace("'", "''") + "'"
    return label


def _format_length(length: float) -> str:
    if isinstance(length, int):
        return str(length)
    if float(length).is_integer():
        return str(int(length))
    return repr(float(length))


def write_newick(tree: PhyloTree) -> str:
    root = tree.root
    parts: list[str] = []
    # iterative post-order emission, closing each internal node after its children
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        node_id, expanded = stack.pop()
        node = tree.nodes[node_id]
        if node.children and not expanded:
            stack.append((node_id, True))
            for child in reversed(node.children):
                stack.append((child, False))
            parts.append("(")
            continue
        if node.children:
            parts.append(")")
        parts.append(_format_label(node.label))
        if node.parent is None:
            parts.append(":" + _format_length(node.origin_time))
        else:
            parts.append(":" + _format_length(node.origin_time - tree.nodes[node.parent].origin_time))
        if node.parent is not None:
            siblings = tree.nodes[node.parent].children
            if siblings[-1] != node_id:
                parts.append(",")
    return "".join(parts) + ";"


_TOKEN = re.compile(r"\s*(?:(\[[^\]]*\])|('(?:[^']|'')*')|([(),:;])|([^\s()\[\]':;,]+))")


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            if text[pos:].strip():
                raise NewickError(f"unexpected character at offset {pos}")
            return
        pos = match.end()
        comment, quoted, punct, word = match.groups()
        if comment:
            continue
        if quoted:
            yield ("label", quoted[1:-1].replace("''", "'"))
        elif punct:
            yield (punct, punct)
        elif word:
            yield ("word", word)


def _number(text: str) -> float:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise NewickError(f"bad branch length {text!r}") from None


def read_newick(text: str) -> PhyloTree:
    """Parse one Newick tree.  Missing branch lengths count as zero."""
    toks = list(_tokens(text))
    if not toks or toks[-1][0] != ";":
        raise NewickError("newick string must end with ';'")
    # records: id -> [parent, length, label]
    records: list[list] = []
    stack: list[int] = []
    current: int | None = None
    expect_node = True
    i = 0
    while i < len(toks) - 1:
        kind, value = toks[i]
        if kind == "(":
            node_id = len(records)
            records.append([stack[-1] if stack else None, 0, None])
            stack.append(node_id)
            expect_node = True
        elif kind in (",", ")"):
            if expect_node:
                # empty leaf such as "(,)"
                records.append([stack[-1] if stack else None, 0, None])
            if not stack:
                raise NewickError("unbalanced parentheses")
            if kind == ")":
                current = stack.pop()
                expect_node = False
            else:
                expect_node = True
            i += 1
            continue
        elif kind in ("label", "word"):
            if expect_node:
                current = len(records)
                records.append([stack[-1] if stack else None, 0, None])
                expect_node = False
            label = value if kind == "label" else value.replace("_", " ")
            records[current][2] = label
        elif kind == ":":
            if expect_node:
                current = len(records)
                records.append([stack[-1] if stack else None, 0, None])
                expect_node = False
            i += 1
            if i >= len(toks) - 1 or toks[i][0] != "word":
                raise NewickError("missing branch length after ':'")
            records[current][1] = _number(toks[i][1])
        else:
            raise NewickError(f"unexpected token {value!r}")
        i += 1
    if stack:
        raise NewickError("unbalanced parentheses")
    roots = [k for k, rec in enumerate(records) if rec[0] is None]
    if len(roots) != 1:
        raise NewickError("newick string must hold exactly one tree")

    tree = PhyloTree()
    times: dict[int, float] = {}
    for node_id, (parent, length, label) in enumerate(records):
        times[node_id] = length if parent is None else times[parent] + length
        try:
            tree.add_node(node_id, parent, times[node_id], label)
        except TreeError as exc:
            raise NewickError(str(exc)) from None
    return tree
