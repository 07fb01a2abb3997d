"""Text formats for graphs, colourings, decompositions, partitions and models.

Every writer emits canonical bytes (sorted lines, canonical rationals), so
writing and re-reading is an exact round trip and repeated runs are
byte-stable.
"""

from __future__ import annotations

from wdcolor.rational import as_value, fmt
from wdcolor.graphs import WeightedGraph


class FormatError(ValueError):
    """Malformed input file."""


def _lines(text: str, comment: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(comment):
            continue
        yield lineno, line.split()


# graph files: `v <id>` and `e <u> <v> <weight>` with weight int, p/q or inf

def write_graph(G: WeightedGraph) -> str:
    out = [f"v {v}" for v in G.vertices]
    out += [f"e {u} {v} {fmt(w)}" for u, v, w in G.edges()]
    return "\n".join(out) + ("\n" if out else "")


def read_graph(text: str) -> WeightedGraph:
    vertices = []
    edges = []
    for lineno, tok in _lines(text, "#"):
        try:
            if tok[0] == "v" and len(tok) == 2:
                vertices.append(int(tok[1]))
            elif tok[0] == "e" and len(tok) == 4:
                edges.append((int(tok[1]), int(tok[2]), as_value(tok[3], "edge weight")))
            else:
                raise ValueError("expected 'v <id>' or 'e <u> <v> <w>'")
        except ValueError as exc:
            raise FormatError(f"graph line {lineno}: {exc}") from exc
    try:
        return WeightedGraph(vertices, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# colouring files: `<vertex> <colour>` per line

def write_colouring(c) -> str:
    items = sorted(c.as_dict().items())
    return "".join(f"{v} {col}\n" for v, col in items)


def read_colouring(text: str, m: int | None = None):
    from wdcolor.colouring import Colouring

    mapping = {}
    for lineno, tok in _lines(text, "#"):
        if len(tok) != 2:
            raise FormatError(f"colouring line {lineno}: expected '<vertex> <colour>'")
        try:
            v, col = int(tok[0]), int(tok[1])
        except ValueError as exc:
            raise FormatError(f"colouring line {lineno}: {exc}") from exc
        if v in mapping:
            raise FormatError(f"colouring line {lineno}: vertex {v} coloured twice")
        mapping[v] = col
    if m is None:
        m = max(mapping.values(), default=1)
    return Colouring(mapping, m)


# tree-decomposition files, PACE-style:
#   c <comment>
#   s td <num_bags> <max_bag_size> <num_vertices>
#   b <bag_id> <v1> <v2> ...
#   <bag_id> <bag_id>        (tree edge)

def write_tree_decomposition(td) -> str:
    bags = td.bags
    width_plus = max((len(b) for b in bags.values()), default=0)
    covered = sorted(set().union(*bags.values())) if bags else []
    out = [f"s td {len(td.nodes)} {width_plus} {len(covered)}"]
    for t in td.nodes:
        out.append("b " + " ".join([str(t)] + [str(v) for v in sorted(bags[t])]))
    for a, b in sorted(td.edges):
        out.append(f"{a} {b}")
    return "\n".join(out) + "\n"


def read_tree_decomposition(text: str):
    from wdcolor.decomposition import TreeDecomposition

    header = None
    bags: dict[int, frozenset] = {}
    edges = []
    for lineno, tok in _lines(text, "c"):
        try:
            if tok[0] == "s":
                if header is not None:
                    raise ValueError("duplicate header")
                if len(tok) != 5 or tok[1] != "td":
                    raise ValueError("expected 's td <bags> <max_bag_size> <n>'")
                header = (int(tok[2]), int(tok[3]), int(tok[4]))
            elif tok[0] == "b":
                bag_id = int(tok[1])
                if bag_id in bags:
                    raise ValueError(f"duplicate bag {bag_id}")
                bags[bag_id] = frozenset(int(v) for v in tok[2:])
            else:
                if len(tok) != 2:
                    raise ValueError("expected a tree edge '<bag> <bag>'")
                edges.append((int(tok[0]), int(tok[1])))
        except ValueError as exc:
            raise FormatError(f"decomposition line {lineno}: {exc}") from exc
    if header is None:
        raise FormatError("missing 's td' header")
    if header[0] != len(bags):
        raise FormatError(f"header claims {header[0]} bags, file has {len(bags)}")
    try:
        return TreeDecomposition(bags, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# partition files: `p <part_id> <v1> <v2> ...`, part ids 0..len-1

def write_partition(p) -> str:
    return "".join(
        "p " + " ".join([str(i)] + [str(v) for v in sorted(part)]) + "\n"
        for i, part in enumerate(p.parts)
    )


def read_partition(text: str):
    from wdcolor.decomposition import Partition

    parts: dict[int, frozenset] = {}
    for lineno, tok in _lines(text, "#"):
        if tok[0] != "p" or len(tok) < 3:
            raise FormatError(f"partition line {lineno}: expected 'p <id> <v1> ...'")
        try:
            pid = int(tok[1])
            members = frozenset(int(v) for v in tok[2:])
        except ValueError as exc:
            raise FormatError(f"partition line {lineno}: {exc}") from exc
        if pid in parts:
            raise FormatError(f"partition line {lineno}: duplicate part {pid}")
        parts[pid] = members
    try:
        return Partition([parts[i] for i in sorted(parts)])
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# minor-model files: `p <part_id> <v1> ...` plus `map <part_id> <H-vertex>`

def write_model(model) -> str:
    out = []
    for i, part in enumerate(model.parts):
        out.append("p " + " ".join([str(i)] + [str(v) for v in sorted(part)]))
    for i in range(len(model.parts)):
        out.append(f"map {i} {model.image[i]}")
    return "\n".join(out) + "\n"


def read_model(text: str):
    from wdcolor.reductions import MinorModel

    parts: dict[int, frozenset] = {}
    image: dict[int, int] = {}
    for lineno, tok in _lines(text, "#"):
        try:
            if tok[0] == "p" and len(tok) >= 3:
                pid = int(tok[1])
                if pid in parts:
                    raise ValueError(f"duplicate part {pid}")
                parts[pid] = frozenset(int(v) for v in tok[2:])
            elif tok[0] == "map" and len(tok) == 3:
                pid = int(tok[1])
                if pid in image:
                    raise ValueError(f"duplicate map for part {pid}")
                image[pid] = int(tok[2])
            else:
                raise ValueError("expected 'p <id> <v1> ...' or 'map <id> <H-vertex>'")
        except ValueError as exc:
            raise FormatError(f"model line {lineno}: {exc}") from exc
    if sorted(parts) != list(range(len(parts))) or sorted(image) != sorted(parts):
        raise FormatError("model parts must be 0..n-1, each with exactly one map line")
    try:
        return MinorModel(tuple(parts[i] for i in sorted(parts)),
                          tuple(image[i] for i in sorted(image)))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
